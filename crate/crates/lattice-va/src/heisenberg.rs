//! The Heisenberg Lie algebra on a finite index set and its module
//! realizations on function spaces.
//!
//! Generators `p_i`, `q_i` and a central element acting as 1 (level 1),
//! with `[p_i, q_j] = delta_ij`. Three realizations act on spaces of
//! monomials `exp(lambda . x) * prod x_i^{e_i}`:
//!
//! - standard: `p_i = d/dx_i`, `q_i = x_i`, exponents in N;
//! - twisted by a subset: outside the subset the roles swap with a sign,
//!   `p_i = x_i`, `q_i = -d/dx_i`;
//! - exotic on a subset of exceptional indices: exponents there live in
//!   `mu_i + Z` with `mu_i` non-integer, so neither `p_i` nor `q_i` ever
//!   annihilates a state.
//!
//! `decompose` recovers the weight decomposition of a finite
//! `p`-invariant span inside a direct sum of standard realizations via the
//! exact commuting-family eigendecomposition.

use crate::linalg::{self, LinalgError, RationalMatrix};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("exotic exponent {0} at index {1} is an integer")]
    ExoticIntegerExponent(Scalar, usize),
    #[error("index {0} out of range for index set of size {1}")]
    IndexOutOfRange(usize, usize),
    #[error("realization data does not match index set size {0}")]
    MalformedRealization(usize),
    #[error("span of the input vectors is not invariant under p_{0}")]
    NotInvariant(usize),
    #[error(transparent)]
    Spectrum(#[from] LinalgError),
    #[error("operation requires an exotic realization")]
    NotExotic,
}

/// Exponent vector of a basis monomial, one entry per index.
pub type HState = Vec<Scalar>;

/// Finite linear combination of basis monomials.
pub type HElement = LinComb<HState>;

/// Weight function `lambda`, one value per index.
pub type WeightFunction = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HRealization {
    Standard {
        lambda: WeightFunction,
    },
    /// `plain` holds the indices that keep the standard action; the rest
    /// act through the twisting automorphism `p -> q, q -> -p`.
    Twisted {
        plain: BTreeSet<usize>,
        lambda: WeightFunction,
    },
    /// `exceptional` maps each exotic index to its non-integer base
    /// exponent; `lambda` applies to the remaining indices and must vanish
    /// on the exceptional ones.
    Exotic {
        exceptional: BTreeMap<usize, Scalar>,
        lambda: WeightFunction,
    },
}

/// A level-1 module handle: an index set together with a realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HModule {
    size: usize,
    real: HRealization,
}

impl HModule {
    pub fn new(size: usize, real: HRealization) -> Result<Self, HeisenbergError> {
        assert!(size > 0, "index set must be nonempty");
        let lambda = match &real {
            HRealization::Standard { lambda } => lambda,
            HRealization::Twisted { plain, lambda } => {
                if plain.iter().any(|&i| i >= size) {
                    return Err(HeisenbergError::MalformedRealization(size));
                }
                lambda
            }
            HRealization::Exotic { exceptional, lambda } => {
                for (&i, mu) in exceptional {
                    if i >= size {
                        return Err(HeisenbergError::MalformedRealization(size));
                    }
                    if mu.is_integer() {
                        return Err(HeisenbergError::ExoticIntegerExponent(mu.clone(), i));
                    }
                    if !lambda[i].is_zero() {
                        return Err(HeisenbergError::MalformedRealization(size));
                    }
                }
                lambda
            }
        };
        if lambda.len() != size {
            return Err(HeisenbergError::MalformedRealization(size));
        }
        Ok(HModule { size, real })
    }

    pub fn standard(lambda: WeightFunction) -> Result<Self, HeisenbergError> {
        let size = lambda.len();
        Self::new(size, HRealization::Standard { lambda })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn realization(&self) -> &HRealization {
        &self.real
    }

    /// The vacuum-like generator: the pure exponential state, shifted by
    /// `mu` on the exceptional indices in the exotic case.
    pub fn generator(&self) -> HElement {
        let mut exps = vec![Scalar::zero(); self.size];
        if let HRealization::Exotic { exceptional, .. } = &self.real {
            for (&i, mu) in exceptional {
                exps[i] = mu.clone();
            }
        }
        LinComb::term(exps, Scalar::one())
    }

    fn check_index(&self, i: usize) -> Result<(), HeisenbergError> {
        if i < self.size {
            Ok(())
        } else {
            Err(HeisenbergError::IndexOutOfRange(i, self.size))
        }
    }

    /// `d/dx_i` on one monomial: the exponential contributes
    /// `lambda_i * state`, the power contributes `e_i * (state with e_i - 1)`.
    fn derivative(&self, i: usize, lambda_i: &Scalar, state: &HState) -> HElement {
        let mut out = HElement::zero();
        if !lambda_i.is_zero() {
            out.add_term(state.clone(), lambda_i.clone());
        }
        if !state[i].is_zero() {
            let mut lowered = state.clone();
            lowered[i] = &state[i] - &Scalar::one();
            out.add_term(lowered, state[i].clone());
        }
        out
    }

    fn multiply(&self, i: usize, state: &HState) -> HElement {
        let mut raised = state.clone();
        raised[i] = &state[i] + &Scalar::one();
        LinComb::term(raised, Scalar::one())
    }

    fn lambda_at(&self, i: usize) -> Scalar {
        match &self.real {
            HRealization::Standard { lambda }
            | HRealization::Twisted { lambda, .. }
            | HRealization::Exotic { lambda, .. } => lambda[i].clone(),
        }
    }

    pub fn act_p(&self, i: usize, v: &HElement) -> Result<HElement, HeisenbergError> {
        self.check_index(i)?;
        let lambda_i = self.lambda_at(i);
        Ok(v.apply(|state| match &self.real {
            HRealization::Standard { .. } => self.derivative(i, &lambda_i, state),
            HRealization::Twisted { plain, .. } => {
                if plain.contains(&i) {
                    self.derivative(i, &lambda_i, state)
                } else {
                    self.multiply(i, state)
                }
            }
            HRealization::Exotic { .. } => self.derivative(i, &lambda_i, state),
        }))
    }

    pub fn act_q(&self, i: usize, v: &HElement) -> Result<HElement, HeisenbergError> {
        self.check_index(i)?;
        let lambda_i = self.lambda_at(i);
        Ok(v.apply(|state| match &self.real {
            HRealization::Standard { .. } | HRealization::Exotic { .. } => self.multiply(i, state),
            HRealization::Twisted { plain, .. } => {
                if plain.contains(&i) {
                    self.multiply(i, state)
                } else {
                    self.derivative(i, &lambda_i, state).scaled(&Scalar::from_int(-1))
                }
            }
        }))
    }

    /// Checks `[p_i, q_j] v = delta_ij v` exactly and records both sides.
    pub fn bracket_check(&self, i: usize, j: usize, v: &HElement) -> Result<BracketRecord, HeisenbergError> {
        let mut lhs = self.act_p(i, &self.act_q(j, v)?)?;
        lhs.sub_assign(&self.act_q(j, &self.act_p(i, v)?)?);
        let rhs = if i == j { v.clone() } else { HElement::zero() };
        Ok(BracketRecord { pass: lhs == rhs, lhs, rhs })
    }

    /// Exceptional-index checks: `q_i p_i` acts on each sample state by the
    /// state's own exponent, and neither `p_i` nor `q_i` annihilates it.
    pub fn check_condition_c(&self, samples: &[HState]) -> Result<ConditionCReport, HeisenbergError> {
        let HRealization::Exotic { exceptional, .. } = &self.real else {
            return Err(HeisenbergError::NotExotic);
        };
        let mut records = Vec::new();
        for state in samples {
            let v = HElement::term(state.clone(), Scalar::one());
            for &i in exceptional.keys() {
                let p = self.act_p(i, &v)?;
                let q = self.act_q(i, &v)?;
                let qp = self.act_q(i, &p)?;
                let expected = v.scaled(&state[i]);
                records.push(ConditionCRecord {
                    state: state.clone(),
                    index: i,
                    eigenvalue: state[i].clone(),
                    semisimple: qp == expected,
                    p_nonzero: !p.is_zero(),
                    q_nonzero: !q.is_zero(),
                });
            }
        }
        Ok(ConditionCReport { records })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketRecord {
    pub lhs: HElement,
    pub rhs: HElement,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCRecord {
    pub state: HState,
    pub index: usize,
    pub eigenvalue: Scalar,
    pub semisimple: bool,
    pub p_nonzero: bool,
    pub q_nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCReport {
    pub records: Vec<ConditionCRecord>,
}

impl ConditionCReport {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.semisimple && r.p_nonzero && r.q_nonzero)
    }
}

/// A finite direct sum of standard realizations over one index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSpace {
    size: usize,
    summands: Vec<HModule>,
}

/// Basis key inside a direct sum: (summand index, exponent vector).
pub type SumKey = (usize, HState);

pub type SumElement = LinComb<SumKey>;

impl SumSpace {
    pub fn new(size: usize, lambdas: Vec<WeightFunction>) -> Result<Self, HeisenbergError> {
        let summands = lambdas
            .into_iter()
            .map(|lambda| {
                if lambda.len() != size {
                    return Err(HeisenbergError::MalformedRealization(size));
                }
                HModule::new(size, HRealization::Standard { lambda })
            })
            .collect::<Result<_, _>>()?;
        Ok(SumSpace { size, summands })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn summands(&self) -> &[HModule] {
        &self.summands
    }

    pub fn act_p(&self, i: usize, v: &SumElement) -> Result<SumElement, HeisenbergError> {
        let mut out = SumElement::zero();
        for ((summand, state), coeff) in v.iter() {
            let image = self.summands[*summand]
                .act_p(i, &HElement::term(state.clone(), Scalar::one()))?;
            for (new_state, c) in image.iter() {
                out.add_term((*summand, new_state.clone()), c * coeff);
            }
        }
        Ok(out)
    }
}

/// One weight group found by [`decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposeGroup {
    pub lambda: WeightFunction,
    pub multiplicity: usize,
    pub highest: Vec<SumElement>,
}

/// Splits the span of the given vectors into simultaneous generalized
/// eigenspaces of the `p_i` and reports the genuine joint eigenvectors in
/// each. The span must be `p`-invariant.
pub fn decompose(
    space: &SumSpace,
    vectors: &[SumElement],
) -> Result<Vec<DecomposeGroup>, HeisenbergError> {
    let inputs: Vec<&SumElement> = vectors.iter().filter(|v| !v.is_zero()).collect();
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    // Key space: all monomials seen in the inputs and their p-images.
    let mut keys: BTreeSet<SumKey> = BTreeSet::new();
    for v in &inputs {
        for (k, _) in v.iter() {
            keys.insert(k.clone());
        }
        for i in 0..space.size {
            for (k, _) in space.act_p(i, v)?.iter() {
                keys.insert(k.clone());
            }
        }
    }
    let keys: Vec<SumKey> = keys.into_iter().collect();
    let index_of: BTreeMap<&SumKey, usize> = keys.iter().enumerate().map(|(n, k)| (k, n)).collect();
    let coords = |v: &SumElement| -> Vec<Scalar> {
        let mut col = vec![Scalar::zero(); keys.len()];
        for (k, c) in v.iter() {
            col[index_of[k]] = c.clone();
        }
        col
    };
    // Independent spanning subset of the inputs.
    let all = RationalMatrix::from_columns(&inputs.iter().map(|v| coords(v)).collect::<Vec<_>>());
    let mut reduced = all.clone();
    let pivot_cols = reduced.rref_in_place();
    let basis_vectors: Vec<&SumElement> = pivot_cols.iter().map(|&c| inputs[c]).collect();
    let basis_matrix =
        RationalMatrix::from_columns(&basis_vectors.iter().map(|v| coords(v)).collect::<Vec<_>>());
    // Restriction matrices of each p_i; failure to solve means the span is
    // not invariant.
    let mut restrictions = Vec::new();
    for i in 0..space.size {
        let images: Vec<Vec<Scalar>> = basis_vectors
            .iter()
            .map(|v| space.act_p(i, v).map(|w| coords(&w)))
            .collect::<Result<_, _>>()?;
        let image_matrix = RationalMatrix::from_columns(&images);
        let restricted = basis_matrix.solve(&image_matrix).ok_or(HeisenbergError::NotInvariant(i))?;
        // solve() picks a particular solution; verify it reproduces the
        // images so non-membership is caught even with free variables.
        if basis_matrix.mul(&restricted) != image_matrix {
            return Err(HeisenbergError::NotInvariant(i));
        }
        restrictions.push(restricted);
    }
    let decomposition = linalg::simultaneous_generalized_eigenspaces(&restrictions)?;
    let from_block_coords = |v: &[Scalar]| -> SumElement {
        let mut out = SumElement::zero();
        for (c, basis_vec) in v.iter().zip(&basis_vectors) {
            out.add_scaled(basis_vec, c);
        }
        out
    };
    let mut groups = Vec::new();
    for block in &decomposition.blocks {
        // Genuine joint eigenvectors inside the block: stacked kernel of
        // (p_i - lambda_i) restricted to the block.
        let block_matrix = RationalMatrix::from_columns(&block.basis);
        let mut stacked_rows = Vec::new();
        for (m, value) in restrictions.iter().zip(&block.eigenvalues) {
            let shifted = m.sub_scalar_diag(value).mul(&block_matrix);
            for r in 0..shifted.rows() {
                stacked_rows.push((0..shifted.cols()).map(|c| shifted[(r, c)].clone()).collect());
            }
        }
        let stacked = RationalMatrix::from_rows(stacked_rows);
        let joint = stacked.kernel_basis();
        let highest: Vec<SumElement> = joint
            .iter()
            .map(|k| from_block_coords(&block_matrix.mul_vec(k)))
            .collect();
        groups.push(DecomposeGroup {
            lambda: block.eigenvalues.clone(),
            multiplicity: highest.len(),
            highest,
        });
    }
    Ok(groups)
}
