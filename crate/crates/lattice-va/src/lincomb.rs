//! Sparse linear combinations over an ordered basis.
//!
//! All element types in the crate (Fock elements, sectored vertex-algebra
//! elements, Heisenberg states) are finite maps `basis key -> Scalar` with
//! no stored zeros. Keys are kept in a `BTreeMap` so iteration order — and
//! therefore every printed report — is canonical.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(key, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, Scalar)> {
        self.terms.into_iter()
    }

    /// Adds `coeff * key`, removing the entry if it cancels to zero.
    pub fn add_term(&mut self, key: K, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), -v);
        }
    }

    pub fn scale(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    pub fn sum(parts: impl IntoIterator<Item = Self>) -> Self {
        let mut out = Self::zero();
        for p in parts {
            out.add_assign(&p);
        }
        out
    }

    /// Applies a basis-level linear map and extends by linearity.
    pub fn apply<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<K2>) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in self.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for LinComb<K> {
    fn from_iter<T: IntoIterator<Item = (K, Scalar)>>(iter: T) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_entries() {
        let mut v: LinComb<u32> = LinComb::zero();
        v.add_term(3, Scalar::new(1, 2));
        v.add_term(3, Scalar::new(-1, 2));
        assert!(v.is_zero());
        v.add_term(1, Scalar::one());
        v.add_term(2, Scalar::zero());
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn linear_extension() {
        let v: LinComb<u32> = [(0u32, Scalar::from_int(2)), (1, Scalar::from_int(3))]
            .into_iter()
            .collect();
        // f(k) = k+1 with coefficient k
        let w = v.apply(|k| LinComb::term(k + 1, Scalar::from_int(*k as i64)));
        assert_eq!(w.coeff(&1), Scalar::zero());
        assert_eq!(w.coeff(&2), Scalar::from_int(3));
    }
}
