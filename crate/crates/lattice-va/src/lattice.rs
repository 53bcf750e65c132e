//! Quadratic spaces and (possibly degenerate) even lattices.
//!
//! The ambient space is a finite-dimensional rational vector space with a
//! nondegenerate symmetric bilinear form given by a gram matrix. A lattice
//! is a free abelian subgroup, stored through a list of independent
//! generator vectors; the form restricted to the lattice may be singular
//! or identically zero. The sign 2-cocycle used as structure constants for
//! sector products is the bimultiplicative extension of a generator table,
//! so it depends on the generator order; two orders give cohomologous
//! cocycles and we simply fix the order supplied by the caller.

use crate::linalg::RationalMatrix;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is singular")]
    DegenerateGram,
    #[error("generator {0} has odd norm {1}")]
    NotEven(usize, Scalar),
    #[error("generators {0} and {1} have non-integer pairing {2}")]
    NotIntegral(usize, usize, Scalar),
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A rational vector space with a nondegenerate symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    dim: usize,
    gram: RationalMatrix,
}

impl QuadraticSpace {
    pub fn new(gram: RationalMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.determinant().is_zero() {
            return Err(LatticeError::DegenerateGram);
        }
        Ok(QuadraticSpace { dim: gram.rows(), gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    /// `<u, v>` = u^T gram v, exactly.
    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar, LatticeError> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(LatticeError::DimensionMismatch(format!(
                "pairing vectors of lengths {} and {} in dimension {}",
                u.len(),
                v.len(),
                self.dim
            )));
        }
        let gv = self.gram.mul_vec(v);
        let mut acc = Scalar::zero();
        for (a, b) in u.iter().zip(&gv) {
            if !a.is_zero() && !b.is_zero() {
                let prod = a * b;
                acc += &prod;
            }
        }
        Ok(acc)
    }

    /// Standard basis vector as an ambient coordinate vector.
    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }
}

/// Integer coordinates of a lattice vector against the generator list.
pub type LatticeCoords = Vec<i64>;

/// A free even lattice inside a quadratic space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    space: QuadraticSpace,
    generators: Vec<Vec<Scalar>>,
    /// Integer pairing matrix `<alpha_i, alpha_j>`.
    pairings: Vec<Vec<i64>>,
}

impl Lattice {
    /// Validates evenness of every generator, integrality of every cross
    /// pairing, and linear independence.
    pub fn new(space: QuadraticSpace, generators: Vec<Vec<Scalar>>) -> Result<Self, LatticeError> {
        let r = generators.len();
        for g in &generators {
            if g.len() != space.dim() {
                return Err(LatticeError::DimensionMismatch(format!(
                    "generator has length {}, ambient dimension is {}",
                    g.len(),
                    space.dim()
                )));
            }
        }
        let mut pairings = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in i..r {
                let p = space.pair(&generators[i], &generators[j])?;
                let Some(int) = p.to_i64() else {
                    return Err(LatticeError::NotIntegral(i, j, p));
                };
                if i == j && int % 2 != 0 {
                    return Err(LatticeError::NotEven(i, p));
                }
                pairings[i][j] = int;
                pairings[j][i] = int;
            }
        }
        if r > 0 {
            let m = RationalMatrix::from_columns(&generators);
            if m.rank() != r {
                return Err(LatticeError::DependentGenerators);
            }
        }
        Ok(Lattice { space, generators, pairings })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    /// Integer pairing `<alpha_i, alpha_j>` of two generators.
    pub fn generator_pairing(&self, i: usize, j: usize) -> i64 {
        self.pairings[i][j]
    }

    /// Ambient coordinates of the lattice vector with the given generator
    /// coordinates.
    pub fn embed(&self, coords: &[i64]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.rank(), "coordinate length mismatch");
        let mut v = vec![Scalar::zero(); self.space.dim()];
        for (c, g) in coords.iter().zip(&self.generators) {
            if *c == 0 {
                continue;
            }
            let c = Scalar::from_int(*c);
            for (slot, entry) in v.iter_mut().zip(g) {
                let delta = &c * entry;
                *slot += &delta;
            }
        }
        v
    }

    /// `<alpha, beta>` for lattice vectors in generator coordinates; always
    /// an integer by construction.
    pub fn pair_coords(&self, a: &[i64], b: &[i64]) -> i64 {
        assert_eq!(a.len(), self.rank());
        assert_eq!(b.len(), self.rank());
        let mut acc = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc += ai * bj * self.pairings[i][j];
                }
            }
        }
        acc
    }

    /// True when the form vanishes identically on the lattice.
    pub fn is_isotropic(&self) -> bool {
        self.pairings.iter().all(|row| row.iter().all(|&p| p == 0))
    }

    /// True when the restricted form is positive definite.
    pub fn is_positive_definite(&self) -> bool {
        let r = self.rank();
        // Leading principal minors of the restricted gram matrix.
        for k in 1..=r {
            let mut minor = RationalMatrix::zero(k, k);
            for i in 0..k {
                for j in 0..k {
                    minor[(i, j)] = Scalar::from_int(self.pairings[i][j]);
                }
            }
            if !(minor.determinant() > Scalar::zero()) {
                return false;
            }
        }
        true
    }

    /// Membership in the generalized dual: `<alpha_i, lambda>` integral for
    /// every generator.
    pub fn in_dual(&self, lambda: &[Scalar]) -> Result<bool, LatticeError> {
        for g in &self.generators {
            if !self.space.pair(g, lambda)?.is_integer() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn cocycle(&self) -> Cocycle {
        let r = self.rank();
        let mut parity = vec![vec![0u8; r]; r];
        for i in 0..r {
            for j in (i + 1)..r {
                parity[i][j] = (self.pairings[i][j].rem_euclid(2)) as u8;
            }
        }
        Cocycle { parity, overrides: Vec::new() }
    }

    /// The canonical sign cocycle evaluated on generator coordinates.
    pub fn epsilon(&self, a: &[i64], b: &[i64]) -> Scalar {
        self.cocycle().eval(a, b)
    }

    /// Splits the ambient space along the lattice: the generators, a
    /// complement extending them to a basis, and the dual basis of the
    /// combined list under the form.
    pub fn splitting_bases(&self) -> SplittingBases {
        let d = self.space.dim();
        let mut basis: Vec<Vec<Scalar>> = self.generators.clone();
        // Greedy extension by standard basis vectors, in index order.
        for i in 0..d {
            if basis.len() == d {
                break;
            }
            let candidate = self.space.basis_vector(i);
            let mut trial = basis.clone();
            trial.push(candidate.clone());
            if RationalMatrix::from_columns(&trial).rank() == trial.len() {
                basis.push(candidate);
            }
        }
        debug_assert_eq!(basis.len(), d, "nondegenerate space always extends");
        let b = RationalMatrix::from_columns(&basis);
        let dual = b
            .transpose()
            .mul(self.space.gram())
            .inverse()
            .expect("dual system solvable: form nondegenerate, basis complete");
        let r = self.rank();
        SplittingBases {
            lattice_basis: basis[..r].to_vec(),
            complement: basis[r..].to_vec(),
            lattice_dual: (0..r).map(|j| dual.column(j)).collect(),
            complement_dual: (r..d).map(|j| dual.column(j)).collect(),
        }
    }
}

/// The four families of a lattice splitting: generators `alpha_i`, the
/// complement `u_j`, and the dual basis `beta_i`, `v_j` with
/// `<alpha_i, beta_j> = delta_ij`, `<alpha_i, v_j> = 0`,
/// `<u_i, beta_j> = 0`, `<u_i, v_j> = delta_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingBases {
    pub lattice_basis: Vec<Vec<Scalar>>,
    pub complement: Vec<Vec<Scalar>>,
    pub lattice_dual: Vec<Vec<Scalar>>,
    pub complement_dual: Vec<Vec<Scalar>>,
}

/// A dual-lattice vector: ambient coordinates pairing integrally with
/// every lattice generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVector {
    coords: Vec<Scalar>,
}

impl DualVector {
    pub fn new(lattice: &Lattice, coords: Vec<Scalar>) -> Result<Self, LatticeError> {
        if !lattice.in_dual(&coords)? {
            return Err(LatticeError::DimensionMismatch(
                "vector is not in the dual of the lattice".into(),
            ));
        }
        Ok(DualVector { coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }
}

/// The +-1 valued 2-cocycle, stored as the exponent-parity table of the
/// generator values and extended bimultiplicatively. Pointwise overrides
/// exist purely as a fault-injection hook for the verification suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    parity: Vec<Vec<u8>>,
    overrides: Vec<(LatticeCoords, LatticeCoords, Scalar)>,
}

impl Cocycle {
    /// Registers a pointwise replacement value; this deliberately breaks
    /// bimultiplicativity so suites can demonstrate axiom failures.
    pub fn with_override(mut self, a: LatticeCoords, b: LatticeCoords, value: Scalar) -> Self {
        self.overrides.push((a, b, value));
        self
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> Scalar {
        for (oa, ob, v) in &self.overrides {
            if oa == a && ob == b {
                return v.clone();
            }
        }
        let mut parity = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 && self.parity[i][j] == 1 {
                    parity += ai * bj;
                }
            }
        }
        Scalar::neg_one_pow(parity)
    }
}

/// Outcome of one cocycle-axiom counterexample search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonAxiomFailure {
    pub axiom: &'static str,
    pub alpha: LatticeCoords,
    pub beta: LatticeCoords,
    pub gamma: Option<LatticeCoords>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonAxiomReport {
    pub checked: usize,
    pub failures: Vec<EpsilonAxiomFailure>,
}

impl EpsilonAxiomReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn box_coords(rank: usize, bound: i64) -> Vec<LatticeCoords> {
    let mut out: Vec<LatticeCoords> = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for prefix in &out {
            for c in -bound..=bound {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Exhaustively checks normalization, the 2-cocycle identity, and the
/// commutator identity of the cocycle over a coordinate box.
pub fn verify_epsilon_axioms(lattice: &Lattice, cocycle: &Cocycle, bound: i64) -> EpsilonAxiomReport {
    let points = box_coords(lattice.rank(), bound);
    let zero = vec![0i64; lattice.rank()];
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in &points {
        checked += 2;
        let left = cocycle.eval(a, &zero);
        if !left.is_one() {
            failures.push(EpsilonAxiomFailure {
                axiom: "normalization",
                alpha: a.clone(),
                beta: zero.clone(),
                gamma: None,
                lhs: left,
                rhs: Scalar::one(),
            });
        }
        let right = cocycle.eval(&zero, a);
        if !right.is_one() {
            failures.push(EpsilonAxiomFailure {
                axiom: "normalization",
                alpha: zero.clone(),
                beta: a.clone(),
                gamma: None,
                lhs: right,
                rhs: Scalar::one(),
            });
        }
    }
    for a in &points {
        for b in &points {
            checked += 1;
            let lhs = &cocycle.eval(a, b) * &cocycle.eval(b, a).recip();
            let rhs = Scalar::neg_one_pow(lattice.pair_coords(a, b));
            if lhs != rhs {
                failures.push(EpsilonAxiomFailure {
                    axiom: "commutator",
                    alpha: a.clone(),
                    beta: b.clone(),
                    gamma: None,
                    lhs,
                    rhs,
                });
            }
            for c in &points {
                checked += 1;
                let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let lhs = &cocycle.eval(a, &bc) * &cocycle.eval(b, c);
                let rhs = &cocycle.eval(&ab, c) * &cocycle.eval(a, b);
                if lhs != rhs {
                    failures.push(EpsilonAxiomFailure {
                        axiom: "cocycle",
                        alpha: a.clone(),
                        beta: b.clone(),
                        gamma: Some(c.clone()),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    EpsilonAxiomReport { checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn a1() -> Lattice {
        let space = QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2]])).unwrap();
        Lattice::new(space, vec![vec![s(1)]]).unwrap()
    }

    fn hyperbolic_isotropic() -> Lattice {
        let space =
            QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        Lattice::new(space, vec![vec![s(1), s(0)]]).unwrap()
    }

    fn rank2_a2() -> Lattice {
        let space =
            QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2, -1], &[-1, 2]])).unwrap();
        Lattice::new(space, vec![vec![s(1), s(0)], vec![s(0), s(1)]]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let a1 = a1();
        assert_eq!(a1.space().pair(&[s(1)], &[s(1)]).unwrap(), s(2));
        let hyp = hyperbolic_isotropic();
        assert_eq!(hyp.space().pair(&[s(1), s(0)], &[s(1), s(0)]).unwrap(), s(0));
        assert_eq!(hyp.space().pair(&[s(1), s(0)], &[s(0), s(1)]).unwrap(), s(1));
        assert!(matches!(
            hyp.space().pair(&[s(1)], &[s(0), s(1)]),
            Err(LatticeError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn constructor_validation() {
        let odd = QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[1]])).unwrap();
        assert!(matches!(
            Lattice::new(odd, vec![vec![s(1)]]),
            Err(LatticeError::NotEven(0, _))
        ));
        let asym = RationalMatrix::from_int_rows(&[&[0, 1], &[2, 0]]);
        assert!(matches!(QuadraticSpace::new(asym), Err(LatticeError::NotSymmetric)));
        let sing = RationalMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(QuadraticSpace::new(sing), Err(LatticeError::DegenerateGram)));
        let space =
            QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2, 0], &[0, 2]])).unwrap();
        assert!(matches!(
            Lattice::new(space.clone(), vec![vec![s(1), s(0)], vec![s(2), s(0)]]),
            Err(LatticeError::DependentGenerators)
        ));
        // Non-integer norm.
        assert!(matches!(
            Lattice::new(space, vec![vec![s(1), s(0)], vec![s(0), Scalar::new(1, 2)]]),
            Err(LatticeError::NotIntegral(1, 1, _))
        ));
        // Even norms but a non-integer cross pairing.
        let skew =
            QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2, 0], &[0, 30]])).unwrap();
        let quarter = Scalar::new(1, 4);
        assert!(matches!(
            Lattice::new(skew, vec![vec![s(1), s(0)], vec![quarter.clone(), quarter]]),
            Err(LatticeError::NotIntegral(0, 1, _))
        ));
        // Degenerate restriction is fine.
        assert!(hyperbolic_isotropic().is_isotropic());
    }

    #[test]
    fn epsilon_generator_table() {
        let a1 = a1();
        assert_eq!(a1.epsilon(&[1], &[1]), s(1));
        assert_eq!(a1.epsilon(&[1], &[-1]), s(1));
        let a2 = rank2_a2();
        assert_eq!(a2.epsilon(&[1, 0], &[0, 1]), s(-1));
        assert_eq!(a2.epsilon(&[0, 1], &[1, 0]), s(1));
    }

    #[test]
    fn epsilon_axioms_exhaustive() {
        for (lat, bound) in [(a1(), 2), (rank2_a2(), 1), (hyperbolic_isotropic(), 2)] {
            let report = verify_epsilon_axioms(&lat, &lat.cocycle(), bound);
            assert!(report.pass(), "failures: {:?}", report.failures);
        }
    }

    #[test]
    fn epsilon_axioms_zero_triple() {
        let lat = a1();
        let report = verify_epsilon_axioms(&lat, &lat.cocycle(), 0);
        assert!(report.pass());
        assert!(report.checked > 0);
    }

    #[test]
    fn corrupted_cocycle_fails_cocycle_identity() {
        let lat = a1();
        let bad = lat.cocycle().with_override(vec![1], vec![1], s(-1));
        let report = verify_epsilon_axioms(&lat, &bad, 2);
        assert!(!report.pass());
        assert!(report.failures.iter().any(|f| f.axiom == "cocycle"));
    }

    #[test]
    fn dual_membership() {
        let a1 = a1();
        assert!(a1.in_dual(&[Scalar::new(1, 2)]).unwrap());
        assert!(!a1.in_dual(&[Scalar::new(1, 3)]).unwrap());
        assert!(a1.in_dual(&[s(0)]).unwrap());
        assert!(DualVector::new(&a1, vec![Scalar::new(1, 3)]).is_err());
    }

    #[test]
    fn splitting_a1_full_rank() {
        let split = a1().splitting_bases();
        assert_eq!(split.lattice_basis, vec![vec![s(1)]]);
        assert!(split.complement.is_empty());
        assert_eq!(split.lattice_dual, vec![vec![Scalar::new(1, 2)]]);
    }

    #[test]
    fn splitting_hyperbolic() {
        let split = hyperbolic_isotropic().splitting_bases();
        assert_eq!(split.lattice_basis, vec![vec![s(1), s(0)]]);
        assert_eq!(split.complement, vec![vec![s(0), s(1)]]);
        assert_eq!(split.lattice_dual, vec![vec![s(0), s(1)]]);
        assert_eq!(split.complement_dual, vec![vec![s(1), s(0)]]);
    }

    #[test]
    fn splitting_rank_zero() {
        let space =
            QuadraticSpace::new(RationalMatrix::from_int_rows(&[&[2, 0], &[0, 4]])).unwrap();
        let lat = Lattice::new(space, Vec::new()).unwrap();
        let split = lat.splitting_bases();
        assert!(split.lattice_basis.is_empty());
        assert_eq!(split.complement.len(), 2);
        assert_eq!(split.complement_dual[0], vec![Scalar::new(1, 2), s(0)]);
        assert_eq!(split.complement_dual[1], vec![s(0), Scalar::new(1, 4)]);
    }

    #[test]
    fn splitting_duality_relations() {
        for lat in [a1(), hyperbolic_isotropic(), rank2_a2()] {
            let split = lat.splitting_bases();
            let space = lat.space();
            let primal: Vec<_> =
                split.lattice_basis.iter().chain(&split.complement).cloned().collect();
            let dual: Vec<_> =
                split.lattice_dual.iter().chain(&split.complement_dual).cloned().collect();
            for (i, p) in primal.iter().enumerate() {
                for (j, d) in dual.iter().enumerate() {
                    let expected = if i == j { s(1) } else { s(0) };
                    assert_eq!(space.pair(p, d).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn positive_definiteness() {
        assert!(a1().is_positive_definite());
        assert!(rank2_a2().is_positive_definite());
        assert!(!hyperbolic_isotropic().is_positive_definite());
    }
}
