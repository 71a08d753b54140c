//! Uncertainty relations for possibly non-Hermitian pairs.
//!
//! With `δA = A − ⟨A⟩` and `(ΔA) = ‖δAψ‖`:
//! - Robertson: `(ΔA)(ΔB) ≥ |⟨[A,B]⟩|/2` for Hermitian `A`, `B`;
//! - Dou–Du: `(ΔA)⁰(ΔB)⁰ ≥ |⟨[A,B]⟩|/2` with `(ΔA)⁰ = ((ΔA) + (ΔA†))/2`;
//! - Cauchy–Schwarz: `|⟨AB⟩ − ⟨A⟩⟨B⟩| = |⟨δA†ψ|δBψ⟩| ≤ (ΔA†)(ΔB)` and
//!   `|⟨A⟩⟨B⟩ − ⟨BA⟩| = |⟨δB†ψ|δAψ⟩| ≤ (ΔA)(ΔB†)`.
//!
//! Adding the two Cauchy–Schwarz forms bounds `|⟨[A,B]⟩|` by the triangle
//! inequality; when `A` is Hermitian the averaged bound is exactly the
//! Dou–Du product.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::commutator;
use crate::basis::{random_interior_state, StateVector, TruncatedBasis};
use crate::error::{Error, Result};
use crate::linalg::vec_norm;
use crate::operators::{
    cosine_op, hamiltonian_op, momentum_op, sine_op, time_op_pt, time_op_s1, time_op_s1_re, w_power_op,
    OperatorMatrix,
};

/// Seed used by the random-state suites unless overridden.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Serialize)]
pub struct UncertaintyReport {
    pub relation: String,
    pub state: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl UncertaintyReport {
    fn new(relation: &str, state: &str, lhs: f64, rhs: f64, hbar: f64) -> Self {
        let slack = lhs - rhs;
        let holds = slack >= -1e-12 * lhs.max(rhs).max(hbar);
        Self { relation: relation.into(), state: state.into(), lhs, rhs, slack, holds }
    }
}

/// `‖(A − ⟨A⟩)ψ‖`, i.e. `√(⟨A†A⟩ − |⟨A⟩|²)` for normalized `ψ`.
pub fn deviation(a: &OperatorMatrix, psi: &StateVector) -> Result<f64> {
    let mean = a.expectation(psi)?;
    let a_psi = a.apply(psi)?;
    let d: Vec<Complex64> = a_psi.coeffs().iter().zip(psi.coeffs()).map(|(x, y)| x - mean * y).collect();
    Ok(vec_norm(&d))
}

/// `((ΔA) + (ΔA†))/2`.
pub fn symmetric_deviation(a: &OperatorMatrix, psi: &StateVector) -> Result<f64> {
    Ok(0.5 * (deviation(a, psi)? + deviation(&a.adjoint(), psi)?))
}

/// Products and adjoints of a pair, computed once and reused across states.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    a: OperatorMatrix,
    b: OperatorMatrix,
    a_adj: OperatorMatrix,
    b_adj: OperatorMatrix,
    ab: OperatorMatrix,
    ba: OperatorMatrix,
    comm: OperatorMatrix,
}

impl PreparedPair {
    pub fn new(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Self> {
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            a_adj: a.adjoint(),
            b_adj: b.adjoint(),
            ab: a.compose(b)?,
            ba: b.compose(a)?,
            comm: commutator(a, b)?,
        })
    }

    fn half_commutator(&self, psi: &StateVector) -> Result<f64> {
        Ok(0.5 * self.comm.expectation(psi)?.norm())
    }

    pub fn robertson(&self, psi: &StateVector, label: &str) -> Result<UncertaintyReport> {
        for m in [&self.a, &self.b] {
            if !m.tags().hermitian {
                return Err(Error::NotHermitian(m.hermitian_residual()));
            }
        }
        let lhs = deviation(&self.a, psi)? * deviation(&self.b, psi)?;
        Ok(UncertaintyReport::new("robertson", label, lhs, self.half_commutator(psi)?, psi.basis().hbar()))
    }

    pub fn dou_du(&self, psi: &StateVector, label: &str) -> Result<UncertaintyReport> {
        let sa = 0.5 * (deviation(&self.a, psi)? + deviation(&self.a_adj, psi)?);
        let sb = 0.5 * (deviation(&self.b, psi)? + deviation(&self.b_adj, psi)?);
        Ok(UncertaintyReport::new("dou_du", label, sa * sb, self.half_commutator(psi)?, psi.basis().hbar()))
    }

    pub fn cauchy_schwarz(&self, psi: &StateVector, label: &str) -> Result<(UncertaintyReport, UncertaintyReport)> {
        let hbar = psi.basis().hbar();
        let (ea, eb) = (self.a.expectation(psi)?, self.b.expectation(psi)?);
        let ab = self.ab.expectation(psi)?;
        let ba = self.ba.expectation(psi)?;
        let (da, db) = (deviation(&self.a, psi)?, deviation(&self.b, psi)?);
        let (dad, dbd) = (deviation(&self.a_adj, psi)?, deviation(&self.b_adj, psi)?);
        let first = UncertaintyReport::new("cauchy_schwarz_ab", label, dad * db, (ab - ea * eb).norm(), hbar);
        let second = UncertaintyReport::new("cauchy_schwarz_ba", label, da * dbd, (ea * eb - ba).norm(), hbar);
        Ok((first, second))
    }

    pub fn composition(&self, psi: &StateVector, label: &str) -> Result<CompositionReport> {
        let (f, s) = self.cauchy_schwarz(psi, label)?;
        let half = self.half_commutator(psi)?;
        let mean_covariance = 0.5 * (f.rhs + s.rhs);
        let mean_bound = 0.5 * (f.lhs + s.lhs);
        let tol = 1e-12 * mean_bound.max(psi.basis().hbar());
        Ok(CompositionReport {
            state: label.into(),
            half_commutator: half,
            mean_covariance,
            mean_bound,
            dou_du_lhs: self.dou_du(psi, label)?.lhs,
            holds: half <= mean_covariance + tol && mean_covariance <= mean_bound + tol,
        })
    }

    /// Robertson (when both are Hermitian), Dou–Du and both Cauchy–Schwarz forms.
    pub fn all_relations(&self, psi: &StateVector, label: &str) -> Result<Vec<UncertaintyReport>> {
        let mut out = Vec::with_capacity(4);
        if self.a.tags().hermitian && self.b.tags().hermitian {
            out.push(self.robertson(psi, label)?);
        }
        out.push(self.dou_du(psi, label)?);
        let (f, s) = self.cauchy_schwarz(psi, label)?;
        out.push(f);
        out.push(s);
        Ok(out)
    }
}

pub fn robertson(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector, label: &str) -> Result<UncertaintyReport> {
    PreparedPair::new(a, b)?.robertson(psi, label)
}

pub fn dou_du(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector, label: &str) -> Result<UncertaintyReport> {
    PreparedPair::new(a, b)?.dou_du(psi, label)
}

/// The two Cauchy–Schwarz forms, reported as `lhs = bound`, `rhs = |covariance|`
/// so that `slack ≥ 0` means the inequality holds.
pub fn cauchy_schwarz_bounds(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    psi: &StateVector,
    label: &str,
) -> Result<(UncertaintyReport, UncertaintyReport)> {
    PreparedPair::new(a, b)?.cauchy_schwarz(psi, label)
}

/// `|⟨[A,B]⟩|/2 ≤ mean CS covariance ≤ mean CS bound`, compared with Dou–Du.
#[derive(Debug, Clone, Serialize)]
pub struct CompositionReport {
    pub state: String,
    pub half_commutator: f64,
    pub mean_covariance: f64,
    pub mean_bound: f64,
    pub dou_du_lhs: f64,
    pub holds: bool,
}

pub fn composition_check(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector, label: &str) -> Result<CompositionReport> {
    PreparedPair::new(a, b)?.composition(psi, label)
}

/// Operator pairs paired with the expectation that their commutator bound
/// reduces to on interior states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetPair {
    MomentumCosine,
    MomentumSine,
    EnergyTimeS1,
    EnergyTimeReal,
    MomentumRaising,
    EnergyTimePt,
}

impl PresetPair {
    pub const ALL: [PresetPair; 6] = [
        PresetPair::MomentumCosine,
        PresetPair::MomentumSine,
        PresetPair::EnergyTimeS1,
        PresetPair::EnergyTimeReal,
        PresetPair::MomentumRaising,
        PresetPair::EnergyTimePt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetPair::MomentumCosine => "pi,C",
            PresetPair::MomentumSine => "pi,S",
            PresetPair::EnergyTimeS1 => "H,T_S1",
            PresetPair::EnergyTimeReal => "H,T_S1_Re",
            PresetPair::MomentumRaising => "pi,W",
            PresetPair::EnergyTimePt => "H,T_PT",
        }
    }

    pub fn operators(self, basis: &TruncatedBasis) -> (OperatorMatrix, OperatorMatrix) {
        match self {
            PresetPair::MomentumCosine => (momentum_op(basis), cosine_op(basis)),
            PresetPair::MomentumSine => (momentum_op(basis), sine_op(basis)),
            PresetPair::EnergyTimeS1 => (hamiltonian_op(basis), time_op_s1(basis)),
            PresetPair::EnergyTimeReal => (hamiltonian_op(basis), time_op_s1_re(basis)),
            PresetPair::MomentumRaising => (momentum_op(basis), w_power_op(basis, 1)),
            PresetPair::EnergyTimePt => (hamiltonian_op(basis), time_op_pt(basis)),
        }
    }

    pub fn both_hermitian(self) -> bool {
        !matches!(self, PresetPair::MomentumRaising | PresetPair::EnergyTimePt)
    }

    /// `(ħ/2)|⟨X⟩|` with `X` the operator the commutator reduces to.
    pub fn bound_expression(self, psi: &StateVector) -> Result<f64> {
        let b = psi.basis();
        let x = match self {
            PresetPair::MomentumCosine | PresetPair::EnergyTimeReal => sine_op(b),
            PresetPair::MomentumSine | PresetPair::EnergyTimeS1 => cosine_op(b),
            PresetPair::MomentumRaising | PresetPair::EnergyTimePt => w_power_op(b, 1),
        };
        Ok(0.5 * b.hbar() * x.expectation(psi)?.norm())
    }
}

impl PresetPair {
    pub fn prepare(self, basis: &TruncatedBasis) -> Result<PreparedPair> {
        let (a, b) = self.operators(basis);
        PreparedPair::new(&a, &b)
    }
}

/// Every applicable relation for one pair on one state.
pub fn all_relations(pair: PresetPair, psi: &StateVector, label: &str) -> Result<Vec<UncertaintyReport>> {
    pair.prepare(psi.basis())?.all_relations(psi, label)
}

/// `count` normalized random states supported on `|l| ≤ L − margin`.
pub fn seeded_states(basis: &TruncatedBasis, count: usize, margin: usize, seed: u64) -> Result<Vec<StateVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_interior_state(basis, margin, &mut rng)).collect()
}
