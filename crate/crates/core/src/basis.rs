//! The truncated momentum window `l ∈ [−L, L]` of the ring, states over it,
//! and the uniform-grid position representation `⟨θ|l⟩ = e^{ilθ}/√(2π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{vec_inner, vec_norm};
use crate::precise::compensated_dot;

/// Finite momentum window plus physical constants. `I = m R²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedBasis {
    cutoff: i64,
    radius: f64,
    mass: f64,
    hbar: f64,
    inertia: f64,
    grid: usize,
}

/// Smallest power of two `≥ 4(2L+1)`.
pub fn default_grid_size(cutoff: i64) -> usize {
    (4 * (2 * cutoff.max(0) as usize + 1)).next_power_of_two()
}

#[derive(Debug, Clone)]
pub struct BasisBuilder {
    cutoff: i64,
    radius: f64,
    mass: f64,
    hbar: f64,
    grid: Option<usize>,
}

impl BasisBuilder {
    pub fn radius(mut self, r: f64) -> Self {
        self.radius = r;
        self
    }

    pub fn mass(mut self, m: f64) -> Self {
        self.mass = m;
        self
    }

    pub fn hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn grid_size(mut self, n: usize) -> Self {
        self.grid = Some(n);
        self
    }

    pub fn build(self) -> Result<TruncatedBasis> {
        let Self { cutoff, radius, mass, hbar, grid } = self;
        if cutoff < 1 {
            return Err(Error::Config(format!("cutoff L must be at least 1, got {cutoff}")));
        }
        for (name, v) in [("radius", radius), ("mass", mass), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let dim = 2 * cutoff as usize + 1;
        let grid = grid.unwrap_or_else(|| default_grid_size(cutoff));
        if grid < 2 * dim {
            return Err(Error::Config(format!(
                "grid of {grid} points is too small for L = {cutoff}; need at least {}",
                2 * dim
            )));
        }
        Ok(TruncatedBasis { cutoff, radius, mass, hbar, inertia: mass * radius * radius, grid })
    }
}

impl TruncatedBasis {
    /// Builder with defaults `R = m = ħ = 1` and the default grid.
    pub fn builder(cutoff: i64) -> BasisBuilder {
        BasisBuilder { cutoff, radius: 1.0, mass: 1.0, hbar: 1.0, grid: None }
    }

    /// `L`, `R` with unit mass and ħ.
    pub fn new(cutoff: i64, radius: f64) -> Result<Self> {
        Self::builder(cutoff).radius(radius).build()
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff as usize + 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn contains(&self, l: i64) -> bool {
        l.abs() <= self.cutoff
    }

    /// Storage index of level `l`, if inside the window.
    pub fn index(&self, l: i64) -> Option<usize> {
        self.contains(l).then(|| (l + self.cutoff) as usize)
    }

    /// Level stored at index `i`.
    pub fn level(&self, i: usize) -> i64 {
        i as i64 - self.cutoff
    }

    pub fn levels(&self) -> impl Iterator<Item = i64> {
        -self.cutoff..=self.cutoff
    }

    /// `E_l = l²ħ²/(2I)`.
    pub fn energy(&self, l: i64) -> f64 {
        let p = l as f64 * self.hbar;
        p * p / (2.0 * self.inertia)
    }

    /// Recurrence time `4πI/ħ` of the free ring.
    pub fn period(&self) -> f64 {
        4.0 * PI * self.inertia / self.hbar
    }

    /// `θ_j = −π + 2πj/N`.
    pub fn theta(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.grid as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.grid).map(|j| self.theta(j)).collect()
    }

    /// Same physical constants, different cutoff (grid resized by default).
    pub fn with_cutoff(&self, cutoff: i64) -> Result<Self> {
        Self::builder(cutoff).radius(self.radius).mass(self.mass).hbar(self.hbar).build()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

/// Complex coefficients `a_l` over the window, stored from `l = −L`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: TruncatedBasis,
    coeffs: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: &TruncatedBasis, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(Error::Config(format!(
                "state has {} coefficients but the basis has {} levels",
                coeffs.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis: basis.clone(), coeffs })
    }

    pub fn zeros(basis: &TruncatedBasis) -> Self {
        Self { basis: basis.clone(), coeffs: vec![Complex64::new(0.0, 0.0); basis.dim()] }
    }

    /// `|l⟩`; panics if `l` is outside the window.
    pub fn basis_state(basis: &TruncatedBasis, l: i64) -> Self {
        let mut s = Self::zeros(basis);
        let i = basis.index(l).unwrap_or_else(|| panic!("level {l} outside the window"));
        s.coeffs[i] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_fn(basis: &TruncatedBasis, mut f: impl FnMut(i64) -> Complex64) -> Self {
        Self { basis: basis.clone(), coeffs: basis.levels().map(&mut f).collect() }
    }

    /// Sum of `(weight, level)` basis states, e.g. `(|−1⟩ + |3⟩)`.
    pub fn superposition(basis: &TruncatedBasis, terms: &[(Complex64, i64)]) -> Result<Self> {
        let mut s = Self::zeros(basis);
        for &(w, l) in terms {
            let i = basis
                .index(l)
                .ok_or_else(|| Error::Domain(format!("level {l} outside the window")))?;
            s.coeffs[i] += w;
        }
        Ok(s)
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `a_l`, zero outside the window.
    pub fn coeff(&self, l: i64) -> Complex64 {
        self.basis.index(l).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.coeffs)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero state".into()));
        }
        Ok(self.scaled(Complex64::from(1.0 / n)))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|&a| a * s).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.basis.check_same(&other.basis)?;
        Ok(vec_inner(&self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { basis: self.basis.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { basis: self.basis.clone(), coeffs })
    }

    /// Squared norm carried by levels with `|l| > L − margin`.
    pub fn outer_weight(&self, margin: usize) -> f64 {
        let inner = self.basis.cutoff - margin as i64;
        self.basis
            .levels()
            .zip(&self.coeffs)
            .filter(|(l, _)| l.abs() > inner)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `a_l = 0` for every `|l| > L − margin`.
    pub fn is_interior(&self, margin: usize) -> bool {
        let inner = self.basis.cutoff - margin as i64;
        self.basis.levels().zip(&self.coeffs).all(|(l, a)| l.abs() <= inner || *a == Complex64::new(0.0, 0.0))
    }

    /// Zeroes the outer margin so the state is exactly interior.
    pub fn truncate_to_interior(&self, margin: usize) -> Self {
        let inner = self.basis.cutoff - margin as i64;
        Self::from_fn(&self.basis, |l| if l.abs() <= inner { self.coeff(l) } else { Complex64::new(0.0, 0.0) })
    }

    /// Squared norm that `Ŵⁿ` would push outside the window.
    pub fn shift_leakage(&self, n: i64) -> f64 {
        self.basis
            .levels()
            .zip(&self.coeffs)
            .filter(|(l, _)| !self.basis.contains(l + n))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `ψ(θ_j) = Σ_l a_l e^{ilθ_j}/√(2π)`.
    pub fn to_grid(&self) -> GridFunction {
        let n = self.basis.grid;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        // e^{ilθ_j} = (−1)^l e^{2πi lj/N}: an unnormalized inverse DFT.
        for (l, &a) in self.basis.levels().zip(&self.coeffs) {
            let sign = if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[l.rem_euclid(n as i64) as usize] = a * sign;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let s = 1.0 / (2.0 * PI).sqrt();
        for v in &mut buf {
            *v *= s;
        }
        GridFunction { basis: self.basis.clone(), values: buf }
    }
}

/// Samples `ψ(θ_j)` on the basis grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    basis: TruncatedBasis,
    values: Vec<Complex64>,
}

/// Result of projecting grid samples onto the window.
#[derive(Debug, Clone)]
pub struct GridProjection {
    pub state: StateVector,
    /// Fraction of the sampled energy in resolvable modes `|l| > L`.
    pub aliased_fraction: f64,
}

/// Above this aliased fraction a projection is considered lossy.
pub const ALIASING_WARN: f64 = 1e-10;

impl GridProjection {
    pub fn aliasing_warning(&self) -> bool {
        self.aliased_fraction > ALIASING_WARN
    }
}

impl GridFunction {
    pub fn new(basis: &TruncatedBasis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.grid {
            return Err(Error::Config(format!(
                "grid function has {} samples but the basis grid has {}",
                values.len(),
                basis.grid
            )));
        }
        Ok(Self { basis: basis.clone(), values })
    }

    pub fn from_fn(basis: &TruncatedBasis, mut f: impl FnMut(f64) -> Complex64) -> Self {
        Self { basis: basis.clone(), values: (0..basis.grid).map(|j| f(basis.theta(j))).collect() }
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { basis: self.basis.clone(), values: self.values.iter().map(|&v| v * s).collect() }
    }

    /// Trapezoid (spectrally exact) `∫ conj(self) other dθ`, compensated.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.basis.check_same(&other.basis)?;
        let w = 2.0 * PI / self.basis.grid as f64;
        Ok(compensated_dot(&self.values, &other.values) * w)
    }

    pub fn norm(&self) -> f64 {
        let w = 2.0 * PI / self.basis.grid as f64;
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    /// `a_l = (2π/N) Σ_j ψ_j e^{−ilθ_j}/√(2π)` for `|l| ≤ L`, with the
    /// energy in the remaining resolvable modes reported as aliasing.
    pub fn to_state(&self) -> GridProjection {
        let n = self.basis.grid;
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let s = (2.0 * PI).sqrt() / n as f64;
        let half = (n / 2) as i64;
        let mut total = 0.0;
        let mut outside = 0.0;
        for (k, v) in buf.iter().enumerate() {
            let l = if (k as i64) < half { k as i64 } else { k as i64 - n as i64 };
            let e = v.norm_sqr();
            total += e;
            if !self.basis.contains(l) {
                outside += e;
            }
        }
        let state = StateVector::from_fn(&self.basis, |l| {
            let sign = if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[l.rem_euclid(n as i64) as usize] * (s * sign)
        });
        let aliased_fraction = if total > 0.0 { outside / total } else { 0.0 };
        GridProjection { state, aliased_fraction }
    }
}

/// Analytic Fourier coefficients of the wrapped Gaussian
/// `Σ_k e^{−(θ−θ₀+2πk)²/(2σ²)} e^{il₀θ}`, normalized over the window:
/// `a_l ∝ e^{−σ²(l−l₀)²/2} e^{−i(l−l₀)θ₀}`.
pub fn gaussian_state(basis: &TruncatedBasis, theta0: f64, l0: i64, sigma: f64) -> Result<StateVector> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Config(format!("gaussian width must be positive, got {sigma}")));
    }
    let s = StateVector::from_fn(basis, |l| {
        let d = (l - l0) as f64;
        Complex64::from_polar((-0.5 * sigma * sigma * d * d).exp(), -d * theta0)
    });
    s.normalized()
}

/// Normal random complex coefficients on `|l| ≤ L − margin`, normalized.
pub fn random_interior_state<R: Rng + ?Sized>(basis: &TruncatedBasis, margin: usize, rng: &mut R) -> Result<StateVector> {
    let inner = basis.cutoff() - margin as i64;
    if inner < 0 {
        return Err(Error::Config(format!("margin {margin} leaves no interior at L = {}", basis.cutoff())));
    }
    let s = StateVector::from_fn(basis, |l| {
        if l.abs() <= inner {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    s.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn make_basis_examples() {
        let b = TruncatedBasis::builder(4).grid_size(32).build().unwrap();
        assert_eq!(b.inertia(), 1.0);
        assert_eq!(b.dim(), 9);
        let b = TruncatedBasis::builder(64).radius(2.0).grid_size(512).build().unwrap();
        assert_eq!(b.inertia(), 4.0);
        assert!(matches!(TruncatedBasis::new(0, 1.0), Err(Error::Config(_))));
        assert!(TruncatedBasis::builder(4).grid_size(17).build().is_err());
        assert!(TruncatedBasis::builder(4).hbar(0.0).build().is_err());
        assert!(TruncatedBasis::builder(4).mass(-1.0).build().is_err());
    }

    #[test]
    fn default_grid_is_power_of_two_with_headroom() {
        assert_eq!(default_grid_size(4), 64);
        assert_eq!(default_grid_size(64), 1024);
        assert_eq!(TruncatedBasis::new(8, 1.0).unwrap().grid_size(), 128);
    }

    #[test]
    fn zero_mode_is_flat_on_the_grid() {
        let b = TruncatedBasis::new(4, 1.0).unwrap();
        let g = StateVector::basis_state(&b, 0).to_grid();
        let v = 1.0 / (2.0 * PI).sqrt();
        assert!(g.values().iter().all(|z| (z - c(v)).norm() < 1e-15));
    }

    #[test]
    fn unit_mode_at_theta_zero() {
        let b = TruncatedBasis::new(4, 1.0).unwrap();
        let g = StateVector::basis_state(&b, 1).to_grid();
        let j0 = b.grid_size() / 2;
        assert_eq!(b.theta(j0), 0.0);
        assert!((g.values()[j0] - c(1.0 / (2.0 * PI).sqrt())).norm() < 1e-15);
    }

    #[test]
    fn grid_values_match_direct_summation() {
        let b = TruncatedBasis::new(6, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random_interior_state(&b, 0, &mut rng).unwrap();
        let g = psi.to_grid();
        for j in 0..b.grid_size() {
            let th = b.theta(j);
            let direct: Complex64 = b
                .levels()
                .map(|l| psi.coeff(l) * Complex64::from_polar(1.0, l as f64 * th))
                .sum::<Complex64>()
                / (2.0 * PI).sqrt();
            assert!((direct - g.values()[j]).norm() < 1e-13);
        }
        assert!((g.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_projects_to_symmetric_pair() {
        let b = TruncatedBasis::new(8, 1.0).unwrap();
        let g = GridFunction::from_fn(&b, |th| c(th.cos() / PI.sqrt()));
        let proj = g.to_state();
        let expect = StateVector::superposition(&b, &[(c(0.5_f64.sqrt()), 1), (c(0.5_f64.sqrt()), -1)]).unwrap();
        assert!(proj.state.sub(&expect).unwrap().norm() < 1e-14);
        assert!(proj.aliased_fraction < 1e-28);
    }

    #[test]
    fn gaussian_momentum_expectation() {
        let b = TruncatedBasis::new(64, 1.0).unwrap();
        let mean = |psi: &StateVector| -> f64 {
            b.levels().map(|l| l as f64 * psi.coeff(l).norm_sqr()).sum()
        };
        let g0 = gaussian_state(&b, 0.0, 0, 0.3).unwrap();
        assert!(mean(&g0).abs() < 1e-10);
        let g5 = gaussian_state(&b, 0.0, 5, 0.3).unwrap();
        assert!((mean(&g5) - 5.0).abs() < 1e-6);
        assert!(gaussian_state(&b, 0.0, 0, 0.0).is_err());
    }

    #[test]
    fn gaussian_grid_profile_is_wrapped_gaussian() {
        let b = TruncatedBasis::new(64, 1.0).unwrap();
        let (th0, l0, sig) = (0.4, 3, 0.35);
        let psi = gaussian_state(&b, th0, l0, sig).unwrap();
        let g = psi.to_grid();
        let raw = GridFunction::from_fn(&b, |th| {
            let w: f64 = (-3..=3)
                .map(|k| {
                    let d = th - th0 + 2.0 * PI * k as f64;
                    (-d * d / (2.0 * sig * sig)).exp()
                })
                .sum();
            Complex64::from_polar(w, l0 as f64 * th)
        });
        let raw = raw.scaled(c(1.0 / raw.norm()));
        let overlap = raw.inner(&g).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        assert!((overlap - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn interior_predicates() {
        let b = TruncatedBasis::new(10, 1.0).unwrap();
        let psi = StateVector::basis_state(&b, 9);
        assert!(psi.is_interior(1));
        assert!(!psi.is_interior(2));
        assert_eq!(psi.outer_weight(2), 1.0);
        assert_eq!(psi.shift_leakage(1), 0.0);
        assert_eq!(psi.shift_leakage(2), 1.0);
        assert_eq!(psi.truncate_to_interior(2).norm(), 0.0);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let a = StateVector::basis_state(&TruncatedBasis::new(4, 1.0).unwrap(), 0);
        let b = StateVector::basis_state(&TruncatedBasis::new(4, 2.0).unwrap(), 0);
        assert_eq!(a.inner(&b), Err(Error::BasisMismatch));
    }
}
