//! The free line as the infinite-radius reference: `T̂_ℝ`, `T̂^NH_ℝ` in the
//! momentum representation, radius ladders comparing ring packets with
//! their line images, and the matter-wave asymptote of `T̂^Re`.
//!
//! On the line `x̂ = iħ ∂/∂p = i ∂/∂k` and `p = ħk`; derivatives are taken
//! spectrally on a uniform `k` grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::algebra::commutator;
use crate::basis::{gaussian_state, StateVector, TruncatedBasis};
use crate::error::{Error, Result};
use crate::operators::{cosine_op, hamiltonian_op, time_op_pt, time_op_s1, time_op_s1_re};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Gaussian packet `ψ(x) ∝ e^{−(x−x₀)²/(2σ_x²)} e^{ik₀x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinePacket {
    pub x0: f64,
    pub k0: f64,
    pub sigma_x: f64,
}

/// Uniform grid `k_j = −k_max + j·dk`, `j < n`, with excluded window `|k| < k_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineGrid {
    pub k_max: f64,
    pub n: usize,
    pub k_min: f64,
}

impl LineGrid {
    /// Covers `±(k₀ + 12/σ_x)` and resolves positions up to
    /// `2(|x₀| + x_extra + 12σ_x)`; `k_min = k₀/10` unless given.
    pub fn for_packet(packet: &LinePacket, x_extra: f64, k_min: Option<f64>) -> Result<Self> {
        let LinePacket { x0, k0, sigma_x } = *packet;
        if !(sigma_x > 0.0 && k0 > 0.0) {
            return Err(Error::Config("line packet needs positive k0 and sigma_x".into()));
        }
        let k_max = k0 + 12.0 / sigma_x;
        let x_half = 2.0 * (x0.abs() + x_extra.abs() + 12.0 * sigma_x);
        // π/dk ≥ x_half.
        let n = ((2.0 * k_max * x_half / PI).ceil() as usize).max(256).next_power_of_two();
        Ok(Self { k_max, n, k_min: k_min.unwrap_or(k0 / 10.0) })
    }

    pub fn dk(&self) -> f64 {
        2.0 * self.k_max / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let dk = self.dk();
        (0..self.n).map(|j| -self.k_max + j as f64 * dk).collect()
    }
}

/// Amplitudes on a uniform symmetric `k` grid, identically zero on
/// `|k| < k_min`.
#[derive(Debug, Clone)]
pub struct LineState {
    k: Vec<f64>,
    dk: f64,
    amps: Vec<Complex64>,
    k_min: f64,
    mass: f64,
    hbar: f64,
}

/// Relative amplitude allowed at the edge of the excluded window.
const WINDOW_EDGE_TOL: f64 = 1e-12;

impl LineState {
    /// Gaussian on its own [`LineGrid::for_packet`] grid.
    pub fn gaussian(packet: LinePacket, mass: f64, hbar: f64, x_extra: f64, k_min: Option<f64>) -> Result<Self> {
        let grid = LineGrid::for_packet(&packet, x_extra, k_min)?;
        Self::gaussian_on(&grid, packet, mass, hbar)
    }

    /// `ψ(k) ∝ e^{−σ_x²(k−k₀)²/2} e^{−i(k−k₀)x₀}` sampled on `grid`.
    pub fn gaussian_on(grid: &LineGrid, packet: LinePacket, mass: f64, hbar: f64) -> Result<Self> {
        let LinePacket { x0, k0, sigma_x } = packet;
        if !(sigma_x > 0.0 && mass > 0.0 && hbar > 0.0) {
            return Err(Error::Config("line packet needs positive sigma_x, mass and hbar".into()));
        }
        let k = grid.points();
        let amps = k
            .iter()
            .map(|&kk| {
                if kk.abs() < grid.k_min {
                    ZERO
                } else {
                    let d = kk - k0;
                    Complex64::from_polar((-0.5 * sigma_x * sigma_x * d * d).exp(), -d * x0)
                }
            })
            .collect();
        Self::new(k, amps, grid.k_min, mass, hbar)
    }

    /// Normalizes and validates the excluded window.
    pub fn new(k: Vec<f64>, amps: Vec<Complex64>, k_min: f64, mass: f64, hbar: f64) -> Result<Self> {
        if k.len() != amps.len() || k.len() < 4 {
            return Err(Error::Config("line grid and amplitudes must match and have at least 4 points".into()));
        }
        let dk = k[1] - k[0];
        let mut s = Self { k, dk, amps, k_min, mass, hbar };
        let norm = s.norm();
        if norm == 0.0 {
            return Err(Error::Domain("zero line state".into()));
        }
        s.amps.iter_mut().for_each(|a| *a /= norm);
        let peak = s.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        for (kk, a) in s.k.iter().zip(&s.amps) {
            if kk.abs() < k_min && *a != ZERO {
                return Err(Error::Domain(format!("amplitude at k = {kk} inside the excluded window")));
            }
        }
        // The nearest retained points on each side must already be negligible.
        let edge = s
            .k
            .iter()
            .zip(&s.amps)
            .filter(|(kk, _)| kk.abs() >= k_min && kk.abs() < k_min + 2.0 * dk)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        if edge > WINDOW_EDGE_TOL * peak {
            return Err(Error::Domain(format!(
                "packet has relative amplitude {:e} at the excluded window |k| = {k_min}",
                edge / peak
            )));
        }
        Ok(s)
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    fn with_amps(&self, amps: Vec<Complex64>) -> Self {
        Self { amps, ..self.clone() }
    }

    /// Trapezoid `∫ conj(a) b dk` (endpoints vanish).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.dk
    }

    pub fn norm(&self) -> f64 {
        (self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dk).sqrt()
    }

    fn outside_window(&self, kk: f64) -> bool {
        kk.abs() >= self.k_min
    }

    /// `p̂^{-s}ψ`, zero inside the window.
    fn inverse_momentum_power(&self, amps: &[Complex64], s: i32) -> Vec<Complex64> {
        self.k
            .iter()
            .zip(amps)
            .map(|(&kk, &a)| if self.outside_window(kk) { a / (self.hbar * kk).powi(s) } else { ZERO })
            .collect()
    }

    /// `x̂ψ = i ∂ψ/∂k`.
    fn position(&self, amps: &[Complex64]) -> Vec<Complex64> {
        spectral_derivative(amps, self.dk).into_iter().map(|d| d * Complex64::new(0.0, 1.0)).collect()
    }

    /// `T̂_ℝψ = −(m/2)(x̂p̂^{-1} + p̂^{-1}x̂)ψ`.
    pub fn apply_time(&self) -> Self {
        let a = self.position(&self.inverse_momentum_power(&self.amps, 1));
        let b = self.inverse_momentum_power(&self.position(&self.amps), 1);
        self.with_amps(a.iter().zip(&b).map(|(x, y)| (x + y) * (-0.5 * self.mass)).collect())
    }

    /// `T̂^NH_ℝψ = T̂_ℝψ + i(mħ/2)p̂^{-2}ψ`, so that `iT̂^NH = iT̂_ℝ − (mħ/2)p̂^{-2}`.
    pub fn apply_nh_time(&self) -> Self {
        let t = self.apply_time();
        let p2 = self.inverse_momentum_power(&self.amps, 2);
        let c = Complex64::new(0.0, 0.5 * self.mass * self.hbar);
        self.with_amps(t.amps.iter().zip(&p2).map(|(a, b)| a + c * b).collect())
    }

    /// `Ĥψ = (ħk)²/(2m) ψ`.
    pub fn apply_hamiltonian(&self) -> Self {
        let h = self.hbar;
        self.with_amps(self.k.iter().zip(&self.amps).map(|(&kk, &a)| a * ((h * kk).powi(2) / (2.0 * self.mass))).collect())
    }

    /// `e^{−iĤt/ħ}ψ`.
    pub fn evolve(&self, t: f64) -> Self {
        let (h, m) = (self.hbar, self.mass);
        self.with_amps(self.k.iter().zip(&self.amps).map(|(&kk, &a)| a * Complex64::from_polar(1.0, -h * kk * kk * t / (2.0 * m))).collect())
    }

    /// `⟨p̂^{-2}⟩`.
    pub fn inverse_momentum_squared(&self) -> f64 {
        let p2 = self.inverse_momentum_power(&self.amps, 2);
        self.amps.iter().zip(&p2).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * self.dk
    }

    /// `⟨p̂^{-1}⟩`.
    pub fn inverse_momentum(&self) -> f64 {
        let p1 = self.inverse_momentum_power(&self.amps, 1);
        self.amps.iter().zip(&p1).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * self.dk
    }

    pub fn mean_momentum(&self) -> f64 {
        self.k.iter().zip(&self.amps).map(|(&kk, a)| self.hbar * kk * a.norm_sqr()).sum::<f64>() * self.dk
    }
}

/// Spectral derivative of samples decaying at both ends of a uniform grid.
pub fn spectral_derivative(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    for (m, v) in buf.iter_mut().enumerate() {
        let freq = if m < half {
            m as f64
        } else if m == half && n % 2 == 0 {
            0.0
        } else {
            m as f64 - n as f64
        };
        *v *= Complex64::new(0.0, 2.0 * PI * freq / (n as f64 * dx));
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// `⟨T̂_ℝ⟩`.
pub fn line_time_expectation(psi: &LineState) -> f64 {
    psi.inner(&psi.apply_time()).re
}

/// `⟨iT̂^NH_ℝ⟩ = i⟨T̂_ℝ⟩ − (mħ/2)⟨p̂^{-2}⟩`.
pub fn line_nh_expectation(psi: &LineState) -> Complex64 {
    psi.inner(&psi.apply_nh_time()) * Complex64::new(0.0, 1.0)
}

/// `⟨φ|[Ĥ, T̂]|ψ⟩` for `T̂ = T̂_ℝ` (`nh = false`) or `T̂^NH_ℝ`.
pub fn line_commutator_element(phi: &LineState, psi: &LineState, nh: bool) -> Complex64 {
    let apply = |s: &LineState| if nh { s.apply_nh_time() } else { s.apply_time() };
    let ht = apply(psi).apply_hamiltonian();
    let th = apply(&psi.apply_hamiltonian());
    phi.inner(&ht) - phi.inner(&th)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriftSample {
    pub t: f64,
    pub expectation: f64,
    /// `⟨T̂_ℝ(t)⟩ − ⟨T̂_ℝ⟩`.
    pub drift: f64,
}

/// `⟨T̂_ℝ⟩` in `e^{−iĤt/ħ}ψ`, i.e. the Heisenberg `⟨T̂_ℝ(t)⟩`.
pub fn line_drift(psi: &LineState, times: &[f64]) -> Vec<DriftSample> {
    let t0 = line_time_expectation(psi);
    times
        .iter()
        .map(|&t| {
            let e = line_time_expectation(&psi.evolve(t));
            DriftSample { t, expectation: e, drift: e - t0 }
        })
        .collect()
}

/// Fixed physical packet carried to each ring radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPacket {
    /// Mean momentum `p`; the ring uses `l₀ = round(pR/ħ)`.
    pub momentum: f64,
    pub x0: f64,
    pub sigma_x: f64,
    pub margin: usize,
}

impl Default for SweepPacket {
    fn default() -> Self {
        Self { momentum: 25.0, x0: -0.5, sigma_x: 0.4, margin: 8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub radius: f64,
    pub cutoff: i64,
    pub l0: i64,
    pub sigma_theta: f64,
    pub ring_t_s1: f64,
    pub line_t: f64,
    pub rel_diff: f64,
    pub ring_t_pt: Complex64,
    pub line_i_t_nh: Complex64,
    pub pt_rel_diff: f64,
    pub cos_expectation: f64,
    /// `‖([Ĥ,T̂_{S¹}] − iħ)ψ‖/(ħ‖ψ‖)`.
    pub commutator_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusSweep {
    pub packet: SweepPacket,
    pub rows: Vec<SweepRow>,
    /// Least-squares log-log slope of `rel_diff` against `R`.
    pub slope: f64,
    pub pt_slope: f64,
    pub monotone: bool,
    pub commutator_monotone: bool,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Ring basis and packet matched to the line packet at radius `R`.
pub fn matched_ring_state(packet: &SweepPacket, radius: f64, mass: f64, hbar: f64) -> Result<StateVector> {
    let l0 = (packet.momentum * radius / hbar).round() as i64;
    let sigma_theta = packet.sigma_x / radius;
    let theta0 = packet.x0 / radius;
    if (PI - theta0.abs()) / sigma_theta < 6.0 {
        return Err(Error::Config(format!(
            "packet at R = {radius} is not 6 widths away from the seam (theta0 = {theta0}, sigma = {sigma_theta})"
        )));
    }
    // e^{−σ²d²/2} < 1e-16 beyond d = 8.6/σ.
    let spread = (8.6 / sigma_theta).ceil() as i64;
    let cutoff = l0.abs() + spread + packet.margin as i64;
    let basis = TruncatedBasis::builder(cutoff).radius(radius).mass(mass).hbar(hbar).build()?;
    let psi = gaussian_state(&basis, theta0, l0, sigma_theta)?;
    if psi.outer_weight(packet.margin) > 1e-24 {
        return Err(Error::Config(format!("packet at R = {radius} reaches the cutoff L = {cutoff}")));
    }
    Ok(psi.truncate_to_interior(packet.margin).normalized()?)
}

pub fn radius_sweep(radii: &[f64], packet: SweepPacket, mass: f64, hbar: f64) -> Result<RadiusSweep> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("radius ladder must be strictly increasing with at least two rungs".into()));
    }
    let line = LineState::gaussian(
        LinePacket { x0: packet.x0, k0: packet.momentum / hbar, sigma_x: packet.sigma_x },
        mass,
        hbar,
        0.0,
        None,
    )?;
    let line_t = line_time_expectation(&line);
    let line_nh = line_nh_expectation(&line);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let psi = matched_ring_state(&packet, r, mass, hbar)?;
        let basis = psi.basis().clone();
        let t = time_op_s1(&basis);
        let ring_t_s1 = t.expectation(&psi)?.re;
        let ring_t_pt = time_op_pt(&basis).expectation(&psi)?;
        let cos_expectation = cosine_op(&basis).expectation(&psi)?.re;
        let comm = commutator(&hamiltonian_op(&basis), &t)?.apply(&psi)?;
        let ih_psi = psi.scaled(Complex64::new(0.0, basis.hbar()));
        let commutator_residual = comm.sub(&ih_psi)?.norm() / (basis.hbar() * psi.norm());
        rows.push(SweepRow {
            radius: r,
            cutoff: basis.cutoff(),
            l0: (packet.momentum * r / hbar).round() as i64,
            sigma_theta: packet.sigma_x / r,
            ring_t_s1,
            line_t,
            rel_diff: (ring_t_s1 - line_t).abs() / line_t.abs(),
            ring_t_pt,
            line_i_t_nh: line_nh,
            pt_rel_diff: (ring_t_pt - line_nh).norm() / line_nh.norm(),
            cos_expectation,
            commutator_residual,
        });
    }
    let rs: Vec<f64> = rows.iter().map(|r| r.radius).collect();
    let slope = loglog_slope(&rs, &rows.iter().map(|r| r.rel_diff).collect::<Vec<_>>());
    let pt_slope = loglog_slope(&rs, &rows.iter().map(|r| r.pt_rel_diff).collect::<Vec<_>>());
    let monotone = rows.windows(2).all(|w| w[1].rel_diff < w[0].rel_diff);
    let commutator_monotone = rows.windows(2).all(|w| w[1].commutator_residual < w[0].commutator_residual);
    Ok(RadiusSweep { packet, rows, slope, pt_slope, monotone, commutator_monotone })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatterWaveRow {
    pub l: i64,
    pub theta: f64,
    /// `Σ_{l'} ⟨l'|T̂^Re|l⟩ e^{il'θ} / e^{ilθ}` from the matrix.
    pub matrix_value: Complex64,
    /// `(2I/ħ)(1 − 2l + 2l cos θ − i sin θ)/(1 − 4l²)`.
    pub formula_value: Complex64,
    /// `−mħ/(2p²)` with `p = lħ/R`, i.e. `−(1/4π) λ_dB / v`.
    pub asymptote: f64,
    pub rel_deviation: f64,
}

pub fn matter_wave_check(basis: &TruncatedBasis, l_values: &[i64], theta_values: &[f64]) -> Result<Vec<MatterWaveRow>> {
    let t = time_op_s1_re(basis);
    let (i2, hbar) = (2.0 * basis.inertia(), basis.hbar());
    let mut rows = Vec::new();
    for &l in l_values {
        if l.abs() < 2 || l.abs() >= basis.cutoff() {
            return Err(Error::Domain(format!("matter-wave check needs 2 ≤ |l| < L, got {l}")));
        }
        for &th in theta_values {
            if th.abs() > 1e-2 {
                return Err(Error::Domain(format!("matter-wave check is for small angles, got {th}")));
            }
            let matrix_value: Complex64 =
                (l - 1..=l + 1).map(|lo| t.entry(lo, l) * Complex64::from_polar(1.0, (lo - l) as f64 * th)).sum();
            let lf = l as f64;
            let formula_value = Complex64::new(1.0 - 2.0 * lf + 2.0 * lf * th.cos(), -th.sin()) * (i2 / hbar / (1.0 - 4.0 * lf * lf));
            let p = lf * hbar / basis.radius();
            let asymptote = -basis.mass() * hbar / (2.0 * p * p);
            let rel_deviation = (matrix_value - asymptote).norm() / asymptote.abs();
            rows.push(MatterWaveRow { l, theta: th, matrix_value, formula_value, asymptote, rel_deviation });
        }
    }
    Ok(rows)
}
