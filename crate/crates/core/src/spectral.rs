//! Biorthogonal eigensystem of `T̂^PT = (1 − Ŵ)μ̂₁` and Hermitian
//! diagnostics.
//!
//! With `z = e^{iθ}` and `c = ν + ½`, the right and left eigenfunctions are
//!
//! ```text
//! φ_ν(θ) = φ₀ (1 − z) z^ν e^{−c z},     χ_ν(θ) = χ₀ z^ν e^{c / z},
//! ```
//!
//! both with eigenvalue `τ_ν = 2I/((2ν+1)ħ)`. Since
//! `conj(χ_ν) φ_μ ∝ (1 − z) z^{μ−ν} e^{−(μ−ν)z}` is a contour integrand with
//! zero residue for `μ ≠ ν`, the pair is biorthogonal with
//! `⟨χ_ν|φ_ν⟩ = 2π χ₀ φ₀`.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{GridFunction, StateVector, TruncatedBasis};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, vec_norm, vec_sub, CMatrix};
use crate::operators::{mu_entry, time_op_pt, w_power_op, OperatorMatrix};
use crate::precise::{grid_angle, pt_profiles};

/// Default largest `|ν|`; beyond it `e^{|c| cos θ}` grows past ~3.6e4 and
/// the grid quadrature loses digits.
pub const NU_MAX: i64 = 10;

/// Relative norm above the cutoff at which eigen-residuals are flagged.
pub const LEAKAGE_FLAG: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct BiorthogonalPair {
    pub nu: i64,
    /// `2I/((2ν+1)ħ)`.
    pub tau: f64,
    pub phi: GridFunction,
    pub chi: GridFunction,
    pub phi0: f64,
    pub chi0: f64,
    /// Set when `|ν|` exceeds the default guard.
    pub accuracy_warning: bool,
}

/// `τ_ν = 2I/((2ν+1)ħ)`.
pub fn pt_eigenvalue(basis: &TruncatedBasis, nu: i64) -> f64 {
    mu_entry(basis, 1, nu)
}

pub fn pt_eigenpair(basis: &TruncatedBasis, nu: i64) -> Result<BiorthogonalPair> {
    pt_eigenpair_with_limit(basis, nu, NU_MAX)
}

/// As [`pt_eigenpair`] with an explicit `|ν|` guard.
///
/// Profiles are evaluated in double-double and rounded once: plain f64
/// evaluation leaves ~1e-8 biorthogonality errors at `|ν| = 10`. The free
/// normalization is fixed as `φ₀ = 1/√(2π s_ν)` with
/// `s_ν = √(∫|φ̃|² / ∫|χ̃|²)` for the unnormalized profiles, which makes
/// `‖φ_ν‖ = ‖χ_ν‖`; then `χ₀ = 1/(2πφ₀)`.
pub fn pt_eigenpair_with_limit(basis: &TruncatedBasis, nu: i64, nu_max: i64) -> Result<BiorthogonalPair> {
    if nu.abs() > nu_max {
        return Err(Error::Domain(format!("|nu| = {} exceeds the limit {nu_max}", nu.abs())));
    }
    let n = basis.grid_size();
    let (phi_raw, chi_raw): (Vec<Complex64>, Vec<Complex64>) = (0..n).map(|j| pt_profiles(nu, grid_angle(j, n))).unzip();
    let phi_raw = GridFunction::new(basis, phi_raw)?;
    let chi_raw = GridFunction::new(basis, chi_raw)?;
    let a = phi_raw.inner(&phi_raw)?.re;
    let b = chi_raw.inner(&chi_raw)?.re;
    let two_pi = 2.0 * std::f64::consts::PI;
    let s = (a / b).sqrt();
    let phi0 = 1.0 / (two_pi * s).sqrt();
    let chi0 = 1.0 / (two_pi * phi0);
    Ok(BiorthogonalPair {
        nu,
        tau: pt_eigenvalue(basis, nu),
        phi: phi_raw.scaled(Complex64::from(phi0)),
        chi: chi_raw.scaled(Complex64::from(chi0)),
        phi0,
        chi0,
        accuracy_warning: nu.abs() > NU_MAX,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenResidual {
    pub nu: i64,
    /// `‖T̂^PT φ − τφ‖/‖φ‖`.
    pub right: f64,
    /// `‖(T̂^PT)†χ − τχ‖/‖χ‖`.
    pub left: f64,
    /// Relative norms above the cutoff of `φ` and `χ`.
    pub right_leakage: f64,
    pub left_leakage: f64,
    pub leakage_flag: bool,
}

fn apply_on_grid(op: &OperatorMatrix, g: &GridFunction) -> Result<(GridFunction, f64)> {
    let proj = g.to_state();
    let out = op.apply(&proj.state)?.to_grid();
    Ok((out, proj.aliased_fraction.sqrt()))
}

fn grid_residual(lhs: &GridFunction, rhs: &GridFunction) -> f64 {
    let d: Vec<Complex64> = vec_sub(lhs.values(), rhs.values());
    vec_norm(&d) / vec_norm(rhs.values())
}

/// Applies the truncated matrix to the grid-sampled eigenfunctions.
pub fn eigen_residual(pair: &BiorthogonalPair) -> Result<EigenResidual> {
    let basis = pair.phi.basis();
    let t = time_op_pt(basis);
    let tau = Complex64::from(pair.tau);
    let (tphi, right_leakage) = apply_on_grid(&t, &pair.phi)?;
    let (tchi, left_leakage) = apply_on_grid(&t.adjoint(), &pair.chi)?;
    Ok(EigenResidual {
        nu: pair.nu,
        right: grid_residual(&tphi, &pair.phi.scaled(tau)),
        left: grid_residual(&tchi, &pair.chi.scaled(tau)),
        right_leakage,
        left_leakage,
        leakage_flag: right_leakage.max(left_leakage) > LEAKAGE_FLAG,
    })
}

/// Eigenvalues of the lower-bidiagonal truncated `T̂^PT`: its diagonal.
pub fn triangular_spectrum(basis: &TruncatedBasis) -> Vec<(i64, f64)> {
    let t = time_op_pt(basis);
    basis.levels().map(|l| (l, t.entry(l, l).re)).collect()
}

/// `G_{νμ} = ⟨χ_ν|φ_μ⟩` by grid quadrature.
pub fn biorthogonality_matrix(pairs: &[BiorthogonalPair]) -> Result<CMatrix> {
    let n = pairs.len();
    let mut g = CMatrix::zeros(n);
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            g[(i, j)] = a.chi.inner(&b.phi)?;
        }
    }
    Ok(g)
}

/// `(max_{ν≠μ} |G_{νμ}|, max_ν |G_{νν} − 1|)`.
pub fn biorthogonality_errors(g: &CMatrix) -> (f64, f64) {
    let n = g.dim();
    let mut off = 0.0_f64;
    let mut diag = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diag = diag.max((g[(i, i)] - 1.0).norm());
            } else {
                off = off.max(g[(i, j)].norm());
            }
        }
    }
    (off, diag)
}

/// `⟨χ_ν|Ŵ|φ_ν⟩`, which vanishes; equivalently `⟨χ|[Ĥ,T̂^PT]|φ⟩ = 0`.
pub fn raising_diagonal(pair: &BiorthogonalPair) -> Result<Complex64> {
    let (wphi, _) = apply_on_grid(&w_power_op(pair.phi.basis(), 1), &pair.phi)?;
    pair.chi.inner(&wphi)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArrivalReport {
    /// `Σ |a_ν|² τ_ν`.
    pub spectral: f64,
    /// `⟨Ψ̄|T̂^PT|Ψ⟩` with `Ψ = Σ a_ν φ_ν`, `Ψ̄ = Σ a_ν χ_ν`.
    pub quadrature: Complex64,
}

pub fn arrival_expectation(basis: &TruncatedBasis, weights: &[(i64, Complex64)]) -> Result<ArrivalReport> {
    let total: f64 = weights.iter().map(|(_, a)| a.norm_sqr()).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("weights must satisfy Σ|a|² = 1, got {total}")));
    }
    let spectral = weights.iter().map(|&(nu, a)| a.norm_sqr() * pt_eigenvalue(basis, nu)).sum();
    let zero = vec![Complex64::new(0.0, 0.0); basis.grid_size()];
    let mut psi = zero.clone();
    let mut psi_bar = zero;
    for &(nu, a) in weights {
        let p = pt_eigenpair(basis, nu)?;
        for (acc, v) in psi.iter_mut().zip(p.phi.values()) {
            *acc += a * v;
        }
        for (acc, v) in psi_bar.iter_mut().zip(p.chi.values()) {
            *acc += a * v;
        }
    }
    let psi = GridFunction::new(basis, psi)?;
    let psi_bar = GridFunction::new(basis, psi_bar)?;
    let (tpsi, _) = apply_on_grid(&time_op_pt(basis), &psi)?;
    Ok(ArrivalReport { spectral, quadrature: psi_bar.inner(&tpsi)? })
}

#[derive(Debug, Clone, Serialize)]
pub struct HermitianSpectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// `max_k ‖Mv_k − λ_k v_k‖`.
    pub max_residual: f64,
    pub sweeps: usize,
}

/// Cyclic-Jacobi spectrum of a Hermitian-tagged operator.
pub fn hermitian_spectrum(m: &OperatorMatrix) -> Result<HermitianSpectrum> {
    if !m.tags().hermitian {
        return Err(Error::NotHermitian(m.hermitian_residual()));
    }
    let eig = jacobi_eigen(m.matrix());
    let max_residual = (0..eig.values.len())
        .map(|k| {
            let v = eig.vector(k);
            let mv = m.matrix().mul_vec(&v);
            let lv: Vec<Complex64> = v.iter().map(|z| z * eig.values[k]).collect();
            vec_norm(&vec_sub(&mv, &lv))
        })
        .fold(0.0, f64::max);
    Ok(HermitianSpectrum { values: eig.values, max_residual, sweeps: eig.sweeps })
}

/// Coefficients of an analytic eigenfunction in the momentum basis, for
/// callers that want `StateVector`s.
pub fn pair_states(pair: &BiorthogonalPair) -> (StateVector, StateVector) {
    (pair.phi.to_state().state, pair.chi.to_state().state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::*;

    fn basis() -> TruncatedBasis {
        TruncatedBasis::new(64, 1.0).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let b = basis();
        assert_eq!(pt_eigenpair(&b, 0).unwrap().tau, 2.0);
        assert_eq!(pt_eigenpair(&b, -1).unwrap().tau, -2.0);
        assert!(pt_eigenpair(&b, 11).is_err());
        let p = pt_eigenpair_with_limit(&b, 11, 12).unwrap();
        assert!(p.accuracy_warning);
    }

    #[test]
    fn product_normalization() {
        let b = basis();
        for nu in [-4, 0, 3] {
            let p = pt_eigenpair(&b, nu).unwrap();
            let two_pi = 2.0 * std::f64::consts::PI;
            assert!((two_pi * p.chi0 * p.phi0 - 1.0).abs() < 1e-15);
            assert!((p.chi.inner(&p.phi).unwrap() - 1.0).norm() < 1e-12);
            assert!((p.phi.norm() - p.chi.norm()).abs() < 1e-12 * p.phi.norm());
        }
    }

    #[test]
    fn analytic_coefficients_oracle() {
        // φ_ν has a_{ν+k} ∝ (−c)^k/k! − (−c)^{k−1}/(k−1)!, χ_ν has b_{ν−k} ∝ c^k/k!.
        let b = basis();
        let nu = 2_i64;
        let c = nu as f64 + 0.5;
        let p = pt_eigenpair(&b, nu).unwrap();
        let (phi, chi) = pair_states(&p);
        let mut fact = 1.0;
        let mut prev = 0.0; // (−c)^{k−1}/(k−1)!
        let scale_phi = phi.coeff(nu);
        let scale_chi = chi.coeff(nu);
        for k in 0..20_i64 {
            if k > 0 {
                fact *= k as f64;
            }
            let cur = (-c).powi(k as i32) / fact;
            let a = cur - prev;
            assert!((phi.coeff(nu + k) - scale_phi * a).norm() < 1e-12 * scale_phi.norm(), "k={k}");
            let bk = c.powi(k as i32) / fact;
            assert!((chi.coeff(nu - k) - scale_chi * bk).norm() < 1e-12 * scale_chi.norm() * bk.max(1.0));
            prev = cur;
        }
        assert!(phi.coeff(nu - 1).norm() < 1e-14 * scale_phi.norm());
        assert!(chi.coeff(nu + 1).norm() < 1e-14 * scale_chi.norm());
    }

    #[test]
    fn residuals_small_through_nu_ten() {
        let b = basis();
        for nu in [-10, -5, 0, 5, 10] {
            let r = eigen_residual(&pt_eigenpair(&b, nu).unwrap()).unwrap();
            assert!(r.right <= 1e-8 && r.left <= 1e-8, "{r:?}");
            assert!(!r.leakage_flag);
        }
        let r0 = eigen_residual(&pt_eigenpair(&b, 0).unwrap()).unwrap();
        assert!(r0.right <= 1e-9 && r0.left <= 1e-9);
    }

    #[test]
    fn small_window_flags_leakage() {
        let b = TruncatedBasis::new(16, 1.0).unwrap();
        let r = eigen_residual(&pt_eigenpair(&b, 8).unwrap()).unwrap();
        assert!(r.leakage_flag);
    }

    #[test]
    fn biorthogonality_to_1e8() {
        let b = basis();
        let pairs: Vec<_> = (-10..=10).map(|nu| pt_eigenpair(&b, nu).unwrap()).collect();
        let g = biorthogonality_matrix(&pairs).unwrap();
        let (off, diag) = biorthogonality_errors(&g);
        assert!(off <= 1e-8, "{off:e}");
        assert!(diag <= 1e-8, "{diag:e}");
        for p in &pairs {
            assert!(raising_diagonal(p).unwrap().norm() <= 1e-8);
        }
    }

    #[test]
    fn triangular_spectrum_is_exact() {
        let b = TruncatedBasis::new(4, 1.0).unwrap();
        for (l, tau) in triangular_spectrum(&b) {
            assert_eq!(tau, 2.0 / (2 * l + 1) as f64);
        }
        assert_eq!(triangular_spectrum(&b)[4], (0, 2.0 * b.inertia() / b.hbar()));
    }

    #[test]
    fn arrival_time_examples() {
        let b = basis();
        let r = arrival_expectation(&b, &[(0, Complex64::from(1.0))]).unwrap();
        assert_eq!(r.spectral, 2.0);
        let h = 0.5_f64.sqrt();
        let r = arrival_expectation(&b, &[(0, Complex64::from(h)), (1, Complex64::new(0.0, h))]).unwrap();
        assert!((r.spectral - (2.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert!((r.quadrature - r.spectral).norm() < 1e-8);
        assert!(arrival_expectation(&b, &[(0, Complex64::from(0.5))]).is_err());
    }

    #[test]
    fn hermitian_spectrum_examples() {
        let b = TruncatedBasis::new(16, 1.0).unwrap();
        let t = time_op_s1(&b);
        let s = hermitian_spectrum(&t).unwrap();
        let n = s.values.len();
        for k in 0..n {
            assert!((s.values[k] + s.values[n - 1 - k]).abs() < 1e-10);
        }
        assert!(s.max_residual <= 1e-10 * t.spectral_norm());
        assert!(hermitian_spectrum(&time_op_pt(&b)).is_err());
    }
}
