//! The level-1 Fock space and its exact mode calculus.
//!
//! `M(1)` is spanned by creation monomials `h_{i1}(-n1) ... h_{ik}(-nk) 1`
//! over the standard basis directions of a quadratic space. Mode operators
//! obey `[u(m), v(n)] = m <u,v> delta_{m+n,0}` at level 1, with `h(0) = 0`
//! on `M(1)` itself.
//!
//! Mode products `u_n v` are computed one exact coefficient at a time by
//! peeling the leading creation factor:
//!
//! ```text
//! (h(-m) u')_n v = sum_{i>=0} (-1)^i C(-m, i)
//!     [ h(-m-i) (u'_{n+i} v)  -  (-1)^m u'_{n-m-i} (h(i) v) ]
//! ```
//!
//! Both sums are finite on any restricted host: the host declares, per
//! vector, the largest positive mode acting nonzero, and `u_n v = 0` once
//! `n >= wt(u) * (1 + bound(v))`.
//!
//! The host of the computation is anything implementing [`AmbientAction`];
//! `M(1)` acting on itself is [`FockSpace`], and the lattice modules supply
//! their own hosts. Virasoro operators come from the conformal vector
//! `omega = 1/2 sum_i a_i(-1) b_i(-1) 1` over a pair of dual bases, with
//! `L(n) = omega_{n+1}`.

use crate::lattice::QuadraticSpace;
use crate::linalg::RationalMatrix;
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("ambient module is not restricted: positive modes still act past {0}")]
    NonRestrictedAmbient(i64),
}

/// A creation monomial: factors `(mode, direction)` with mode >= 1, kept
/// in canonical order (descending mode, then ascending direction).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FockMonomial {
    factors: Vec<(u32, u32)>,
}

impl FockMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(mut factors: Vec<(u32, u32)>) -> Self {
        assert!(factors.iter().all(|&(m, _)| m >= 1), "modes must be >= 1");
        factors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        FockMonomial { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|&(m, _)| m).sum()
    }

    pub fn max_mode(&self) -> u32 {
        self.factors.first().map_or(0, |&(m, _)| m)
    }

    /// Adds one `h_dir(-mode)` factor.
    pub fn raised(&self, mode: u32, dir: u32) -> Self {
        debug_assert!(mode >= 1);
        let mut factors = self.factors.clone();
        let pos = factors
            .binary_search_by(|probe| {
                mode.cmp(&probe.0).then(probe.1.cmp(&dir))
            })
            .unwrap_or_else(|e| e);
        factors.insert(pos, (mode, dir));
        FockMonomial { factors }
    }

    /// Removes the factor at `idx`.
    pub fn lowered(&self, idx: usize) -> Self {
        let mut factors = self.factors.clone();
        factors.remove(idx);
        FockMonomial { factors }
    }

    fn split_leading(&self) -> Option<((u32, u32), Self)> {
        let (&first, rest) = self.factors.split_first()?;
        Some((first, FockMonomial { factors: rest.to_vec() }))
    }
}

impl fmt::Display for FockMonomial {
    /// Factors print as `h{i}(-n)` with 1-based direction indices and `^k`
    /// for repeats; the empty monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let (mode, dir) = self.factors[i];
            let mut count = 1;
            while i + count < self.factors.len() && self.factors[i + count] == (mode, dir) {
                count += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "h{{{}}}(-{})", dir + 1, mode)?;
            if count > 1 {
                write!(f, "^{count}")?;
            }
            i += count;
        }
        Ok(())
    }
}

/// An element of `M(1)`.
pub type FockElement = LinComb<FockMonomial>;

/// Builds `h_{d1}(-n1) ... h_{dk}(-nk) 1` with coefficient 1.
pub fn monomial(factors: &[(u32, u32)]) -> FockElement {
    FockElement::term(FockMonomial::from_factors(factors.to_vec()), Scalar::one())
}

pub fn vacuum() -> FockElement {
    FockElement::term(FockMonomial::one(), Scalar::one())
}

pub fn weight_of(v: &FockElement) -> u32 {
    v.iter().map(|(m, _)| m.weight()).max().unwrap_or(0)
}

/// The affine-algebra action hosting a mode computation: how a direction
/// vector acts at each mode on the host's elements, plus a per-vector
/// restrictedness bound. Implementations must satisfy the level-1 bracket
/// `[u(m), v(n)] = m <u,v> delta_{m+n,0}` on their elements.
pub trait AmbientAction {
    type Key: Ord + Clone;

    /// `h(n)` applied to an element; `h` in ambient coordinates.
    fn apply_h(&self, h: &[Scalar], n: i64, v: &LinComb<Self::Key>) -> LinComb<Self::Key>;

    /// Smallest `N >= 0` such that `h(n) v = 0` for every direction `h`
    /// and every `n > N`. Errors when the host cannot supply one.
    fn positive_mode_bound(&self, v: &LinComb<Self::Key>) -> Result<i64, FockError>;

    /// Ambient dimension, for assembling direction vectors.
    fn dim(&self) -> usize;
}

/// `M(1)` acting on itself.
#[derive(Debug, Clone)]
pub struct FockSpace {
    space: QuadraticSpace,
}

impl FockSpace {
    pub fn new(space: QuadraticSpace) -> Self {
        FockSpace { space }
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }
}

impl AmbientAction for FockSpace {
    type Key = FockMonomial;

    fn apply_h(&self, h: &[Scalar], n: i64, v: &FockElement) -> FockElement {
        debug_assert_eq!(h.len(), self.space.dim());
        if n == 0 {
            return FockElement::zero(); // h(0) = 0 on M(1)
        }
        if n < 0 {
            let mode = (-n) as u32;
            let mut out = FockElement::zero();
            for (mono, c) in v.iter() {
                for (dir, hd) in h.iter().enumerate() {
                    if !hd.is_zero() {
                        out.add_term(mono.raised(mode, dir as u32), hd * c);
                    }
                }
            }
            return out;
        }
        // Annihilation: contract against matching creation factors with
        // coefficient n <h, e_dir>.
        let gh = self.space.gram().mul_vec(h);
        let n_s = Scalar::from_int(n);
        let mut out = FockElement::zero();
        for (mono, c) in v.iter() {
            for (idx, &(mode, dir)) in mono.factors().iter().enumerate() {
                if mode as i64 == n && !gh[dir as usize].is_zero() {
                    let coeff = &(&n_s * &gh[dir as usize]) * c;
                    out.add_term(mono.lowered(idx), coeff);
                }
            }
        }
        out
    }

    fn positive_mode_bound(&self, v: &FockElement) -> Result<i64, FockError> {
        Ok(v.iter().map(|(m, _)| m.max_mode() as i64).max().unwrap_or(0))
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `n` at which `u_n v` is guaranteed zero for all `u` of the given weight,
/// against a vector with positive-mode bound `bound_v`.
pub fn truncation_bound(weight_u: u32, bound_v: i64) -> i64 {
    (weight_u as i64) * (1 + bound_v.max(0))
}

/// The exact mode product `u_n v` for `u` in `M(1)` and `v` in any
/// restricted host.
pub fn m1_mode<M: AmbientAction>(
    host: &M,
    u: &FockElement,
    n: i64,
    v: &LinComb<M::Key>,
) -> Result<LinComb<M::Key>, FockError> {
    let mut out = LinComb::zero();
    for (mono, c) in u.iter() {
        let part = m1_mode_mono(host, mono, n, v)?;
        out.add_scaled(&part, c);
    }
    Ok(out)
}

fn m1_mode_mono<M: AmbientAction>(
    host: &M,
    u: &FockMonomial,
    n: i64,
    v: &LinComb<M::Key>,
) -> Result<LinComb<M::Key>, FockError> {
    if v.is_zero() {
        return Ok(LinComb::zero());
    }
    let Some(((mode, dir), rest)) = u.split_leading() else {
        // 1_n = delta_{n,-1} id
        return Ok(if n == -1 { v.clone() } else { LinComb::zero() });
    };
    let m = mode as i64;
    let mut h = vec![Scalar::zero(); host.dim()];
    h[dir as usize] = Scalar::one();
    let bound_v = host.positive_mode_bound(v)?;
    let rest_bound = truncation_bound(rest.weight(), bound_v);
    let mut out = LinComb::zero();
    // Creation side: h(-m-i) (rest_{n+i} v), nonzero only while n+i < bound.
    let mut i = 0i64;
    while n + i < rest_bound {
        let inner = m1_mode_mono(host, &rest, n + i, v)?;
        if !inner.is_zero() {
            let coeff = &Scalar::neg_one_pow(i) * &Scalar::binomial(-m, i as u64);
            if !coeff.is_zero() {
                out.add_scaled(&host.apply_h(&h, -(m + i), &inner), &coeff);
            }
        }
        i += 1;
    }
    // Annihilation side: rest_{n-m-i} (h(i) v) for 0 <= i <= bound(v).
    let m_sign = Scalar::neg_one_pow(m);
    for i in 0..=bound_v {
        let hv = host.apply_h(&h, i, v);
        if hv.is_zero() {
            continue;
        }
        let inner = m1_mode_mono(host, &rest, n - m - i, &hv)?;
        if inner.is_zero() {
            continue;
        }
        let coeff = &(&Scalar::neg_one_pow(i) * &Scalar::binomial(-m, i as u64)) * &m_sign;
        out.add_scaled(&inner, &-&coeff);
    }
    Ok(out)
}

/// The conformal vector `1/2 sum_i a_i(-1) b_i(-1) 1` for dual bases
/// `{a_i}`, `{b_i}`; the standard basis and its gram-dual by default.
pub fn conformal_vector(space: &QuadraticSpace) -> FockElement {
    let basis: Vec<Vec<Scalar>> = (0..space.dim()).map(|i| space.basis_vector(i)).collect();
    conformal_vector_from_basis(space, &basis)
}

/// Same element computed from an arbitrary basis and its gram-dual; the
/// result does not depend on the choice.
pub fn conformal_vector_from_basis(space: &QuadraticSpace, basis: &[Vec<Scalar>]) -> FockElement {
    assert_eq!(basis.len(), space.dim(), "need a full basis");
    let b = RationalMatrix::from_columns(basis);
    let dual = b
        .transpose()
        .mul(space.gram())
        .inverse()
        .expect("basis plus nondegenerate form has a dual");
    let half = Scalar::new(1, 2);
    let mut omega = FockElement::zero();
    for i in 0..space.dim() {
        // a_i(-1) b_i(-1) 1, expanded over standard directions.
        for (k, ak) in basis[i].iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for l in 0..space.dim() {
                let bl = &dual[(l, i)];
                if bl.is_zero() {
                    continue;
                }
                let mono = FockMonomial::from_factors(vec![(1, k as u32), (1, l as u32)]);
                omega.add_term(mono, &(&half * ak) * bl);
            }
        }
    }
    omega
}

/// `L(n) v = omega_{n+1} v` on any host.
pub fn virasoro_mode<M: AmbientAction>(
    host: &M,
    space: &QuadraticSpace,
    n: i64,
    v: &LinComb<M::Key>,
) -> Result<LinComb<M::Key>, FockError> {
    m1_mode(host, &conformal_vector(space), n + 1, v)
}

/// Coefficients of a graded dimension series, degree 0..=N.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct QSeries {
    pub coeffs: Vec<u64>,
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", strs.join(", "))
    }
}

/// Graded dimension of `M(1)` for a `d`-dimensional space: the number of
/// creation monomials of each total mode-weight, i.e. the coefficients of
/// `prod_{n>=1} (1 - q^n)^{-d}`.
pub fn graded_dim(d: usize, max_degree: usize) -> QSeries {
    let mut coeffs = vec![0u64; max_degree + 1];
    coeffs[0] = 1;
    for n in 1..=max_degree {
        for _ in 0..d {
            for k in n..=max_degree {
                coeffs[k] += coeffs[k - n];
            }
        }
    }
    QSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QuadraticSpace;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn a1_space() -> QuadraticSpace {
        QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2]])).unwrap()
    }

    fn hyperbolic() -> QuadraticSpace {
        QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn monomial_canonical_order_and_display() {
        let m = FockMonomial::from_factors(vec![(1, 1), (3, 0), (1, 1), (2, 0)]);
        assert_eq!(m.factors(), &[(3, 0), (2, 0), (1, 1), (1, 1)]);
        assert_eq!(m.to_string(), "h{1}(-3) h{1}(-2) h{2}(-1)^2");
        assert_eq!(FockMonomial::one().to_string(), "1");
        assert_eq!(m.weight(), 7);
    }

    #[test]
    fn h_mode_bracket_examples() {
        let fock = FockSpace::new(a1_space());
        let alpha = vec![s(1)];
        // alpha(1) alpha(-1) 1 = <alpha, alpha> 1 = 2
        let v = fock.apply_h(&alpha, -1, &vacuum());
        assert_eq!(fock.apply_h(&alpha, 1, &v), vacuum().scaled(&s(2)));
        // alpha(0) kills M(1)
        assert!(fock.apply_h(&alpha, 0, &v).is_zero());
        // mode mismatch: alpha(2) alpha(-1)alpha(-1) 1 = 0
        let vv = fock.apply_h(&alpha, -1, &v);
        assert!(fock.apply_h(&alpha, 2, &vv).is_zero());
    }

    #[test]
    fn bracket_property_exhaustive_small() {
        // [h(m), h'(n)] v = m <h,h'> delta_{m+n,0} v on weight <= 3 basis
        // vectors of the hyperbolic plane, |m|, |n| <= 3.
        let space = hyperbolic();
        let fock = FockSpace::new(space.clone());
        let dirs = [vec![s(1), s(0)], vec![s(0), s(1)], vec![s(1), s(1)]];
        let basis = enumerate_monomials(2, 3);
        for h in &dirs {
            for hp in &dirs {
                let pairing = space.pair(h, hp).unwrap();
                for m in -3i64..=3 {
                    for n in -3i64..=3 {
                        for mono in &basis {
                            let v = FockElement::term(mono.clone(), Scalar::one());
                            let mut lhs = fock.apply_h(h, m, &fock.apply_h(hp, n, &v));
                            lhs.sub_assign(&fock.apply_h(hp, n, &fock.apply_h(h, m, &v)));
                            let mut rhs = FockElement::zero();
                            if m + n == 0 {
                                rhs.add_scaled(&v, &(&s(m) * &pairing));
                            }
                            assert_eq!(lhs, rhs, "h={h:?} h'={hp:?} m={m} n={n} v={mono}");
                        }
                    }
                }
            }
        }
    }

    fn enumerate_monomials(d: u32, max_weight: u32) -> Vec<FockMonomial> {
        // All creation monomials of weight <= max_weight over d directions.
        fn go(d: u32, budget: u32, max_mode: u32, current: &mut Vec<(u32, u32)>, out: &mut Vec<FockMonomial>) {
            out.push(FockMonomial::from_factors(current.clone()));
            for mode in 1..=budget.min(max_mode) {
                for dir in 0..d {
                    if let Some(&(lm, ld)) = current.last() {
                        // Nondecreasing (mode, dir) stream avoids duplicates.
                        if (mode, dir) < (lm, ld) {
                            continue;
                        }
                    }
                    current.push((mode, dir));
                    go(d, budget - mode, max_mode, current, out);
                    current.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(d, max_weight, max_weight, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn m1_mode_heisenberg_examples() {
        let fock = FockSpace::new(a1_space());
        let u = monomial(&[(1, 0)]); // alpha(-1) 1
        assert_eq!(m1_mode(&fock, &u, 1, &u).unwrap(), vacuum().scaled(&s(2)));
        assert!(m1_mode(&fock, &u, 0, &u).unwrap().is_zero());
        assert_eq!(m1_mode(&fock, &u, -1, &u).unwrap(), monomial(&[(1, 0), (1, 0)]));
        // Translation: (alpha(-1)1)_{-2} 1 = alpha(-2) 1
        assert_eq!(m1_mode(&fock, &u, -2, &vacuum()).unwrap(), monomial(&[(2, 0)]));
    }

    #[test]
    fn m1_mode_truncates() {
        let fock = FockSpace::new(a1_space());
        let u = monomial(&[(2, 0), (1, 0)]);
        let v = monomial(&[(1, 0), (1, 0)]);
        let top = truncation_bound(weight_of(&u), fock.positive_mode_bound(&v).unwrap());
        for n in 0..=top + 2 {
            if n >= top {
                assert!(m1_mode(&fock, &u, n, &v).unwrap().is_zero());
            }
        }
        // And some mode below the bound is nonzero.
        assert!((0..top).any(|n| !m1_mode(&fock, &u, n, &v).unwrap().is_zero()));
    }

    #[test]
    fn conformal_vector_examples() {
        // d = 1, gram [2]: omega = 1/4 alpha(-1)^2 1
        let omega = conformal_vector(&a1_space());
        assert_eq!(omega, monomial(&[(1, 0), (1, 0)]).scaled(&Scalar::new(1, 4)));
        // hyperbolic: omega = e1(-1) e2(-1) 1
        let omega2 = conformal_vector(&hyperbolic());
        assert_eq!(omega2, monomial(&[(1, 0), (1, 1)]));
        // omega_0 1 = L(-1) 1 = 0
        let fock = FockSpace::new(a1_space());
        assert!(m1_mode(&fock, &omega, 0, &vacuum()).unwrap().is_zero());
    }

    #[test]
    fn conformal_vector_basis_independent() {
        let space = hyperbolic();
        let alt = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        assert_eq!(conformal_vector(&space), conformal_vector_from_basis(&space, &alt));
        let a1 = a1_space();
        let alt1 = vec![vec![Scalar::new(2, 3)]];
        assert_eq!(conformal_vector(&a1), conformal_vector_from_basis(&a1, &alt1));
    }

    #[test]
    fn virasoro_weights_and_central_term() {
        for space in [a1_space(), hyperbolic()] {
            let d = space.dim() as i64;
            let fock = FockSpace::new(space.clone());
            // L(0) alpha(-1) 1 = alpha(-1) 1
            let v = monomial(&[(1, 0)]);
            assert_eq!(virasoro_mode(&fock, &space, 0, &v).unwrap(), v);
            // L(0) 1 = 0
            assert!(virasoro_mode(&fock, &space, 0, &vacuum()).unwrap().is_zero());
            // L(2) omega = d/2 1
            let omega = conformal_vector(&space);
            assert_eq!(
                virasoro_mode(&fock, &space, 2, &omega).unwrap(),
                vacuum().scaled(&Scalar::new(d, 2))
            );
        }
    }

    #[test]
    fn virasoro_bracket_relations() {
        // [L(m), L(n)] v = (m-n) L(m+n) v + delta_{m+n,0} (m^3-m)/12 d v
        for space in [a1_space(), hyperbolic()] {
            let d = space.dim() as i64;
            let fock = FockSpace::new(space.clone());
            let samples = [
                vacuum(),
                monomial(&[(1, 0)]),
                monomial(&[(2, 0), (1, 0)]),
                monomial(&[(1, 0), (1, 0), (1, 0)]),
                monomial(&[(4, 0)]),
            ];
            for m in -2i64..=2 {
                for n in -2i64..=2 {
                    for v in &samples {
                        let mut lhs = virasoro_mode(&fock, &space, m, &virasoro_mode(&fock, &space, n, v).unwrap()).unwrap();
                        lhs.sub_assign(&virasoro_mode(&fock, &space, n, &virasoro_mode(&fock, &space, m, v).unwrap()).unwrap());
                        let mut rhs = virasoro_mode(&fock, &space, m + n, v).unwrap().scaled(&s(m - n));
                        if m + n == 0 {
                            let central = Scalar::new((m * m * m - m) * d, 12);
                            rhs.add_scaled(v, &central);
                        }
                        assert_eq!(lhs, rhs, "m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn l_minus_one_derivative_property() {
        // (L(-1) u)_n v = -n u_{n-1} v
        let space = a1_space();
        let fock = FockSpace::new(space.clone());
        let us = [monomial(&[(1, 0)]), monomial(&[(2, 0)]), monomial(&[(1, 0), (1, 0)])];
        let vs = [vacuum(), monomial(&[(1, 0)]), monomial(&[(3, 0)])];
        for u in &us {
            let lu = virasoro_mode(&fock, &space, -1, u).unwrap();
            for v in &vs {
                for n in -4i64..=4 {
                    let lhs = m1_mode(&fock, &lu, n, v).unwrap();
                    let rhs = m1_mode(&fock, u, n - 1, v).unwrap().scaled(&s(-n));
                    assert_eq!(lhs, rhs, "u={u:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn graded_dim_partition_values() {
        assert_eq!(graded_dim(1, 6).coeffs, vec![1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(graded_dim(2, 3).coeffs, vec![1, 2, 5, 10]);
        assert_eq!(graded_dim(3, 0).coeffs, vec![1]);
    }

    #[test]
    fn graded_dim_matches_enumeration() {
        for d in 1..=3u32 {
            let series = graded_dim(d as usize, 8);
            let monos = enumerate_monomials(d, 8);
            for k in 0..=8usize {
                let count = monos.iter().filter(|m| m.weight() as usize == k).count() as u64;
                assert_eq!(series.coeffs[k], count, "d={d} k={k}");
            }
        }
    }

    /// A host that lies about restrictedness, to exercise the error path.
    struct Unrestricted;

    impl AmbientAction for Unrestricted {
        type Key = FockMonomial;
        fn apply_h(&self, _h: &[Scalar], _n: i64, v: &FockElement) -> FockElement {
            v.clone()
        }
        fn positive_mode_bound(&self, _v: &FockElement) -> Result<i64, FockError> {
            Err(FockError::NonRestrictedAmbient(64))
        }
        fn dim(&self) -> usize {
            1
        }
    }

    #[test]
    fn non_restricted_host_reports_error() {
        let u = monomial(&[(1, 0)]);
        assert!(matches!(
            m1_mode(&Unrestricted, &u, 0, &vacuum()),
            Err(FockError::NonRestrictedAmbient(_))
        ));
    }
}
