//! Spectral sets for normal diagonal-type operators, finite blocks, and
//! families of them; Weyl and Browder theorem checks.
//!
//! Every spectral point in this class is isolated, so "isolated eigenvalue of
//! finite multiplicity" reduces to "finite total multiplicity". Membership is
//! exact equality of Gaussian rationals.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bfredholm::finite_spectral_indices;
use crate::exactcore::{ExactMatrix, GaussianRational, LaurentPoly};
use crate::family::{ParamComplex, VertexId};
use crate::opmodel::{Block, BlockOperator, ToeplitzBlock};

pub type SpectralSet = BTreeSet<GaussianRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("spectrum is not representable: {0}")]
    NonRepresentableSpectrum(String),
    #[error("malformed spectral input: {0}")]
    Malformed(String),
}

impl WeylError {
    pub fn code(&self) -> &'static str {
        match self {
            WeylError::NonRepresentableSpectrum(_) => "NonRepresentableSpectrum",
            WeylError::Malformed(_) => "MalformedDocument",
        }
    }
}

/// `diag(c₁ (×m₁), …, c_k (×m_k)) ⊕ a₁·I ⊕ … ⊕ a_r·I` with every tail `a_j`
/// of infinite multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalDiagonalOperator {
    exceptional: Vec<(GaussianRational, u64)>,
    tails: SpectralSet,
}

impl NormalDiagonalOperator {
    pub fn new(
        exceptional: Vec<(GaussianRational, u64)>,
        tails: impl IntoIterator<Item = GaussianRational>,
    ) -> Result<Self, WeylError> {
        let tails: SpectralSet = tails.into_iter().collect();
        if tails.is_empty() {
            return Err(WeylError::Malformed(
                "at least one tail value is required".into(),
            ));
        }
        if exceptional.iter().any(|(_, m)| *m == 0) {
            return Err(WeylError::Malformed(
                "exceptional multiplicities must be positive".into(),
            ));
        }
        Ok(Self { exceptional, tails })
    }

    pub fn exceptional(&self) -> &[(GaussianRational, u64)] {
        &self.exceptional
    }

    pub fn tails(&self) -> &SpectralSet {
        &self.tails
    }

    /// Finite diagonal block (when there are exceptional entries) followed by
    /// one constant-symbol Toeplitz block per tail value.
    pub fn to_block_operator(&self) -> BlockOperator {
        let mut blocks = Vec::new();
        let diag: Vec<GaussianRational> = self
            .exceptional
            .iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), *m as usize))
            .collect();
        if !diag.is_empty() {
            blocks.push(Block::Finite(ExactMatrix::diagonal(&diag)));
        }
        for a in &self.tails {
            blocks.push(Block::Toeplitz(ToeplitzBlock::pure(LaurentPoly::constant(
                a.clone(),
            ))));
        }
        BlockOperator::new(blocks).expect("diagonal realization within limits")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectralInput {
    Normal(NormalDiagonalOperator),
    /// Square matrix with eigenvalues and algebraic multiplicities.
    Finite {
        matrix: ExactMatrix,
        eigen: Vec<(GaussianRational, u64)>,
    },
}

impl SpectralInput {
    /// Finite block; eigendata is read off the diagonal of triangular input.
    pub fn finite(matrix: ExactMatrix) -> Result<Self, WeylError> {
        if !matrix.is_square() {
            return Err(WeylError::Malformed("finite block must be square".into()));
        }
        if !(matrix.is_upper_triangular() || matrix.is_lower_triangular()) {
            return Err(WeylError::NonRepresentableSpectrum(
                "finite block is not triangular and no eigendata was supplied".into(),
            ));
        }
        let mut counts: BTreeMap<GaussianRational, u64> = BTreeMap::new();
        for i in 0..matrix.rows() {
            *counts.entry(matrix[(i, i)].clone()).or_default() += 1;
        }
        Ok(SpectralInput::Finite {
            matrix,
            eigen: counts.into_iter().collect(),
        })
    }

    /// Finite block with supplied eigendata, verified exactly: each value has
    /// the stated algebraic multiplicity and the multiplicities sum to the size.
    pub fn finite_with_eigen(
        matrix: ExactMatrix,
        eigen: Vec<(GaussianRational, u64)>,
    ) -> Result<Self, WeylError> {
        if !matrix.is_square() {
            return Err(WeylError::Malformed("finite block must be square".into()));
        }
        let total: u64 = eigen.iter().map(|(_, m)| m).sum();
        let distinct: SpectralSet = eigen.iter().map(|(v, _)| v.clone()).collect();
        if total != matrix.rows() as u64 || distinct.len() != eigen.len() {
            return Err(WeylError::NonRepresentableSpectrum(
                "eigendata does not account for the full dimension".into(),
            ));
        }
        for (v, m) in &eigen {
            let si = finite_spectral_indices(&matrix, v).expect("square");
            if si.eigen_multiplicity != *m {
                return Err(WeylError::NonRepresentableSpectrum(format!(
                    "value {v} has algebraic multiplicity {}, not {m}",
                    si.eigen_multiplicity
                )));
            }
        }
        Ok(SpectralInput::Finite { matrix, eigen })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralReport {
    pub spectrum: SpectralSet,
    pub weyl_spectrum: SpectralSet,
    pub e0: SpectralSet,
    pub pi0: SpectralSet,
}

pub fn spectral_report(input: &SpectralInput) -> SpectralReport {
    match input {
        SpectralInput::Normal(op) => {
            let exceptional: SpectralSet = op.exceptional.iter().map(|(v, _)| v.clone()).collect();
            let spectrum: SpectralSet = exceptional.union(&op.tails).cloned().collect();
            let e0: SpectralSet = exceptional.difference(&op.tails).cloned().collect();
            SpectralReport {
                spectrum,
                weyl_spectrum: op.tails.clone(),
                pi0: e0.clone(),
                e0,
            }
        }
        SpectralInput::Finite { matrix, eigen } => {
            let spectrum: SpectralSet = eigen.iter().map(|(v, _)| v.clone()).collect();
            let pi0 = spectrum
                .iter()
                .filter(|v| {
                    finite_spectral_indices(matrix, v)
                        .expect("verified square")
                        .is_pole_of_finite_rank
                })
                .cloned()
                .collect();
            SpectralReport {
                e0: spectrum.clone(),
                pi0,
                weyl_spectrum: SpectralSet::new(),
                spectrum,
            }
        }
    }
}

/// Spectral inputs attached to the vertices of a parameter complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralFamily {
    complex: ParamComplex,
    members: BTreeMap<VertexId, SpectralInput>,
}

impl SpectralFamily {
    pub fn new(
        complex: ParamComplex,
        members: BTreeMap<VertexId, SpectralInput>,
    ) -> Result<Self, WeylError> {
        let keys: BTreeSet<&VertexId> = members.keys().collect();
        let verts: BTreeSet<&VertexId> = complex.vertices().collect();
        if keys != verts {
            return Err(WeylError::Malformed(
                "spectral inputs must cover exactly the vertices".into(),
            ));
        }
        Ok(Self { complex, members })
    }

    pub fn complex(&self) -> &ParamComplex {
        &self.complex
    }

    pub fn members(&self) -> &BTreeMap<VertexId, SpectralInput> {
        &self.members
    }
}

fn witness_set_member(
    lambda: &GaussianRational,
    reports: &BTreeMap<&VertexId, SpectralReport>,
    pick: impl Fn(&SpectralReport) -> &SpectralSet,
) -> bool {
    // A = {x : λ ∈ pick(x)} must be nonempty and λ ∉ σ(x) off A
    let mut in_a = false;
    for r in reports.values() {
        if pick(r).contains(lambda) {
            in_a = true;
        } else if r.spectrum.contains(lambda) {
            return false;
        }
    }
    in_a
}

pub fn family_spectral_report(f: &SpectralFamily) -> SpectralReport {
    let reports: BTreeMap<&VertexId, SpectralReport> = f
        .members
        .iter()
        .map(|(v, s)| (v, spectral_report(s)))
        .collect();
    let mut out = SpectralReport::default();
    for r in reports.values() {
        out.spectrum.extend(r.spectrum.iter().cloned());
        out.weyl_spectrum.extend(r.weyl_spectrum.iter().cloned());
    }
    out.e0 = out
        .spectrum
        .iter()
        .filter(|l| witness_set_member(l, &reports, |r| &r.e0))
        .cloned()
        .collect();
    out.pi0 = out
        .spectrum
        .iter()
        .filter(|l| witness_set_member(l, &reports, |r| &r.pi0))
        .cloned()
        .collect();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylBrowderCheck {
    pub weyl_holds: bool,
    pub browder_holds: bool,
    /// Least value in the symmetric difference of the failing equality.
    pub witness: Option<GaussianRational>,
    pub report: SpectralReport,
}

fn first_violation(
    weyl: &SpectralSet,
    spectrum: &SpectralSet,
    removed: &SpectralSet,
) -> Option<GaussianRational> {
    let rhs: SpectralSet = spectrum.difference(removed).cloned().collect();
    weyl.symmetric_difference(&rhs).next().cloned()
}

pub fn check_weyl_browder(f: &SpectralFamily) -> WeylBrowderCheck {
    let report = family_spectral_report(f);
    let weyl_witness = first_violation(&report.weyl_spectrum, &report.spectrum, &report.e0);
    let browder_witness = first_violation(&report.weyl_spectrum, &report.spectrum, &report.pi0);
    WeylBrowderCheck {
        weyl_holds: weyl_witness.is_none(),
        browder_holds: browder_witness.is_none(),
        witness: weyl_witness.or(browder_witness),
        report,
    }
}
