//! Heisenberg evolution on the free ring, recurrence detection and the
//! spin-1/2 pulsed-drive prototype.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::StateVector;
use crate::error::{Error, Result};
use crate::linalg::{vec_inner, CMatrix};
use crate::operators::{hamiltonian_op, OperatorMatrix};

/// Samples per period used by [`verify_period`].
pub const PERIOD_SAMPLES: usize = 64;

/// `A(t) = e^{iĤt/ħ} A e^{−iĤt/ħ}`; with `Ĥ` diagonal the entries pick up
/// `e^{itω₀(l'² − l²)}`, `ω₀ = ħ/(2I)`.
pub fn heisenberg_evolve(a: &OperatorMatrix, t: f64) -> OperatorMatrix {
    let b = a.basis();
    let omega = b.hbar() / (2.0 * b.inertia());
    // Every phase closes after one recurrence time, so reduce first.
    let p = b.period();
    let t = t - (t / p).floor() * p;
    a.map_entries(a.name().to_string(), |lo, li, z| {
        if z == Complex64::new(0.0, 0.0) {
            return z;
        }
        let k = (lo * lo - li * li) as f64;
        z * Complex64::from_polar(1.0, omega * t * k)
    })
}

/// `ψ(t) = e^{−iĤt/ħ}ψ`.
pub fn evolve_state(psi: &StateVector, t: f64) -> StateVector {
    let b = psi.basis();
    StateVector::from_fn(b, |l| psi.coeff(l) * Complex64::from_polar(1.0, -b.energy(l) * t / b.hbar()))
}

fn norm2(m: &CMatrix) -> f64 {
    if m.is_diagonal() {
        return m.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    m.spectral_norm_estimate(500, 1e-12)
}

/// `max_j ‖A(t_j + P) − A(t_j)‖/‖A‖` over `t_j = jP/64`, spectral norms.
pub fn verify_period(a: &OperatorMatrix, period: f64) -> Result<f64> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::Config(format!("period must be positive, got {period}")));
    }
    let scale = norm2(a.matrix());
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0_f64;
    for j in 0..PERIOD_SAMPLES {
        let t = period * j as f64 / PERIOD_SAMPLES as f64;
        let d = heisenberg_evolve(a, t + period).matrix() - heisenberg_evolve(a, t).matrix();
        worst = worst.max(norm2(&d) / scale);
    }
    Ok(worst)
}

/// `K̂(t) = T̂(t) − T̂`.
pub fn commutation_factor(t_op: &OperatorMatrix, t: f64) -> OperatorMatrix {
    heisenberg_evolve(t_op, t).sub(t_op).expect("same basis").renamed(format!("K[{}]", t_op.name()))
}

/// Commutation factor as an operator family, for periodicity checks.
pub fn commutation_factor_period(t_op: &OperatorMatrix, period: f64) -> Result<f64> {
    // K(t+P) − K(t) = T(t+P) − T(t), normalized by ‖K‖ at quarter period.
    let k_ref = commutation_factor(t_op, t_op.basis().period() / 4.0);
    let scale = norm2(k_ref.matrix()).max(norm2(t_op.matrix()));
    let mut worst = 0.0_f64;
    for j in 0..PERIOD_SAMPLES {
        let t = period * j as f64 / PERIOD_SAMPLES as f64;
        let d = commutation_factor(t_op, t + period).matrix() - commutation_factor(t_op, t).matrix();
        worst = worst.max(norm2(&d) / scale);
    }
    Ok(worst)
}

/// Central difference `(K(h) − K(−h))/(2h)` compared with an expected
/// derivative at two step sizes; second order means `ratio ≈ 4`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RichardsonReport {
    pub h: f64,
    pub error_h: f64,
    pub error_half: f64,
    pub ratio: f64,
}

pub fn derivative_check(t_op: &OperatorMatrix, expected: &OperatorMatrix, h: f64) -> Result<RichardsonReport> {
    let err = |h: f64| -> Result<f64> {
        let fd = commutation_factor(t_op, h)
            .sub(&commutation_factor(t_op, -h))?
            .scale(Complex64::from(1.0 / (2.0 * h)));
        Ok((fd.matrix() - expected.matrix()).max_abs())
    };
    let e1 = err(h)?;
    let e2 = err(h / 2.0)?;
    Ok(RichardsonReport { h, error_h: e1, error_half: e2, ratio: e1 / e2 })
}

/// Expectation trace of `A(t)` in a fixed state plus recurrence analysis.
#[derive(Debug, Clone, Serialize)]
pub struct EvolutionTrace {
    pub operator: String,
    pub times: Vec<f64>,
    pub expectations: Vec<Complex64>,
    /// Smallest candidate period whose residual is below the threshold.
    pub period_estimate: Option<f64>,
    /// min over candidates of the period residual.
    pub period_residual: f64,
    pub candidates: Vec<(f64, f64)>,
}

/// Threshold below which a candidate counts as a recurrence.
pub const RECURRENCE_TOL: f64 = 1e-10;

/// Traces `⟨ψ|A(t)|ψ⟩` over `[0, span)` and tests periods `P·m/4`, `m = 1..=8`.
pub fn ring_trace(a: &OperatorMatrix, psi: &StateVector, n_periods: usize, samples_per_period: usize) -> Result<EvolutionTrace> {
    let p = a.basis().period();
    let total = n_periods.max(1) * samples_per_period.max(1);
    let times: Vec<f64> = (0..total).map(|j| p * j as f64 / samples_per_period.max(1) as f64).collect();
    let expectations = times
        .iter()
        .map(|&t| heisenberg_evolve(a, t).expectation(psi))
        .collect::<Result<Vec<_>>>()?;
    let candidates = (1..=8)
        .map(|m| {
            let c = p * m as f64 / 4.0;
            verify_period(a, c).map(|r| (c, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let period_estimate = candidates.iter().find(|(_, r)| *r <= RECURRENCE_TOL).map(|(c, _)| *c);
    let period_residual = candidates.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
    Ok(EvolutionTrace { operator: a.name().to_string(), times, expectations, period_estimate, period_residual, candidates })
}

/// `⟨Ĥ⟩` at each time; constant for the free ring.
pub fn energy_trace(psi: &StateVector, times: &[f64]) -> Vec<f64> {
    let h = hamiltonian_op(psi.basis());
    times
        .iter()
        .map(|&t| {
            let s = evolve_state(psi, t);
            h.expectation(&s).expect("same basis").re
        })
        .collect()
}

/// Pauli matrices `(σ₁, σ₂, σ₃)`.
pub fn pauli() -> [CMatrix; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        CMatrix::from_rows(&[&[o, one], &[one, o]]),
        CMatrix::from_rows(&[&[o, -i], &[i, o]]),
        CMatrix::from_rows(&[&[one, o], &[o, -one]]),
    ]
}

/// `max |[σ₁,σ₂] − 2iσ₃|`.
pub fn su2_residual() -> f64 {
    let [s1, s2, s3] = pauli();
    let comm = s1.matmul(&s2) - &s2.matmul(&s1);
    (comm - &s3.scale(Complex64::new(0.0, 2.0))).max_abs()
}

/// Pulsed drive `Ĥ(t) = gσ₁` on `[0, π)`, zero on `[π, P)`, `g = area/π`, ħ = 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FloquetDrive {
    pub pulse_area: f64,
    pub drive_period: f64,
}

impl FloquetDrive {
    pub fn new(pulse_area: f64, drive_period: f64) -> Result<Self> {
        if !(pulse_area > 0.0 && pulse_area.is_finite()) {
            return Err(Error::Config(format!("pulse area must be positive, got {pulse_area}")));
        }
        if !(drive_period >= PI && drive_period.is_finite()) {
            return Err(Error::Config(format!("drive period must be at least the pulse length π, got {drive_period}")));
        }
        Ok(Self { pulse_area, drive_period })
    }

    pub fn coupling(&self) -> f64 {
        self.pulse_area / PI
    }

    fn rotation(&self, on_time: f64) -> CMatrix {
        // e^{−igσ₁τ} = cos(gτ) − i sin(gτ) σ₁
        let a = self.coupling() * on_time;
        let (s, c) = a.sin_cos();
        let d = Complex64::from(c);
        let o = Complex64::new(0.0, -s);
        CMatrix::from_rows(&[&[d, o], &[o, d]])
    }

    /// Propagator `U(t)` from `0`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let n = (t / self.drive_period).floor();
        let tau = t - n * self.drive_period;
        let full = self.rotation(PI);
        let mut u = self.rotation(tau.min(PI));
        for _ in 0..n as usize {
            u = u.matmul(&full);
        }
        u
    }

    /// `T̂(t) = U†(t) σ₂ U(t)`.
    pub fn time_op(&self, t: f64) -> CMatrix {
        let u = self.propagator(t);
        u.adjoint().matmul(&pauli()[1]).matmul(&u)
    }

    /// `K̂(t) = T̂(t) − T̂(0)`.
    pub fn commutation_factor(&self, t: f64) -> CMatrix {
        self.time_op(t) - &pauli()[1]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FloquetTrace {
    pub drive: FloquetDrive,
    pub times: Vec<f64>,
    pub time_ops: Vec<CMatrixSnapshot>,
    /// `⟨↑|K̂(t)|↑⟩`.
    pub k_expectations: Vec<Complex64>,
    /// `residual[m-1] = max_t ‖T̂(t+mP) − T̂(t)‖`, `m = 1..=4`.
    pub multiple_residuals: Vec<f64>,
    /// Same for `K̂`.
    pub k_multiple_residuals: Vec<f64>,
    /// Smallest `mP` where `T̂` returns, if any `m ≤ 4` does.
    pub operator_period: Option<f64>,
}

/// Row-major entries of a small matrix for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct CMatrixSnapshot(pub Vec<Complex64>);

pub fn floquet_toy(drive: FloquetDrive, n_periods: usize, steps_per_period: usize) -> FloquetTrace {
    let p = drive.drive_period;
    let steps = steps_per_period.max(1);
    let times: Vec<f64> = (0..n_periods.max(1) * steps).map(|j| p * j as f64 / steps as f64).collect();
    let up = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let time_ops = times.iter().map(|&t| CMatrixSnapshot(drive.time_op(t).as_slice().to_vec())).collect();
    let k_expectations = times.iter().map(|&t| vec_inner(&up, &drive.commutation_factor(t).mul_vec(&up))).collect();
    let residual = |f: &dyn Fn(f64) -> CMatrix, m: usize| {
        (0..steps)
            .map(|j| {
                let t = p * j as f64 / steps as f64;
                (f(t + m as f64 * p) - &f(t)).spectral_norm()
            })
            .fold(0.0, f64::max)
    };
    let multiple_residuals: Vec<f64> = (1..=4).map(|m| residual(&|t| drive.time_op(t), m)).collect();
    let k_multiple_residuals: Vec<f64> = (1..=4).map(|m| residual(&|t| drive.commutation_factor(t), m)).collect();
    let operator_period =
        multiple_residuals.iter().position(|&r| r <= 1e-12).map(|i| (i + 1) as f64 * p);
    FloquetTrace { drive, times, time_ops, k_expectations, multiple_residuals, k_multiple_residuals, operator_period }
}
