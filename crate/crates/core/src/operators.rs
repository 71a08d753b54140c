//! Matrix representations of the ring operators in the momentum basis.
//!
//! Everything is assembled from closed-form entries rather than dense
//! products, so building an operator costs `O(dim · bandwidth)` and is exact.
//! Entries are indexed `(l_out, l_in)`. Raising powers `Ŵⁿ` drop amplitude
//! leaving the window; identities are only expected on interior states.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{StateVector, TruncatedBasis};
use crate::error::{Error, Result};
use crate::linalg::{vec_inner, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Structural metadata, recomputed from the entries on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatorTags {
    /// `‖M − M†‖_max ≤ 1e-12 ‖M‖_max`.
    pub hermitian: bool,
    pub real_in_l_basis: bool,
    /// Every entry with `|l_out − l_in| > bandwidth` vanishes.
    pub bandwidth: usize,
}

impl OperatorTags {
    pub fn inspect(m: &CMatrix) -> Self {
        let scale = m.max_abs();
        Self {
            hermitian: m.hermitian_residual() <= 1e-12 * scale,
            real_in_l_basis: m.as_slice().iter().all(|z| z.im == 0.0),
            bandwidth: m.bandwidth(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    name: String,
    basis: TruncatedBasis,
    matrix: CMatrix,
    tags: OperatorTags,
}

impl OperatorMatrix {
    pub fn new(name: impl Into<String>, basis: &TruncatedBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != basis.dim() {
            return Err(Error::BasisMismatch);
        }
        let tags = OperatorTags::inspect(&matrix);
        Ok(Self { name: name.into(), basis: basis.clone(), matrix, tags })
    }

    fn build(name: impl Into<String>, basis: &TruncatedBasis, matrix: CMatrix) -> Self {
        Self::new(name, basis, matrix).expect("dimension fixed by the basis")
    }

    /// Operator from a `(l_out, l_in) → entry` rule, evaluated only inside
    /// the given band.
    fn banded(name: impl Into<String>, basis: &TruncatedBasis, band: i64, f: impl Fn(i64, i64) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(basis.dim());
        for l_in in basis.levels() {
            for d in -band..=band {
                let l_out = l_in + d;
                if let (Some(i), Some(j)) = (basis.index(l_out), basis.index(l_in)) {
                    m[(i, j)] = f(l_out, l_in);
                }
            }
        }
        Self::build(name, basis, m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tags(&self) -> OperatorTags {
        self.tags
    }

    /// `⟨l_out|M|l_in⟩`, zero outside the window.
    pub fn entry(&self, l_out: i64, l_in: i64) -> Complex64 {
        match (self.basis.index(l_out), self.basis.index(l_in)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => ZERO,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_basis(psi.basis())?;
        StateVector::new(&self.basis, self.matrix.mul_vec(psi.coeffs()))
    }

    /// `⟨ψ|M|ψ⟩` (not divided by the norm).
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let m_psi = self.apply(psi)?;
        Ok(vec_inner(psi.coeffs(), m_psi.coeffs()))
    }

    /// `⟨φ|M|ψ⟩`.
    pub fn matrix_element(&self, phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
        self.check_basis(phi.basis())?;
        let m_psi = self.apply(psi)?;
        Ok(vec_inner(phi.coeffs(), m_psi.coeffs()))
    }

    pub fn adjoint(&self) -> Self {
        Self::build(format!("{}†", self.name), &self.basis, self.matrix.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::build(self.name.clone(), &self.basis, self.matrix.scale(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(&other.basis)?;
        Ok(Self::build(format!("{}+{}", self.name, other.name), &self.basis, &self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_basis(&other.basis)?;
        Ok(Self::build(format!("{}-{}", self.name, other.name), &self.basis, &self.matrix - &other.matrix))
    }

    /// Dense product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_basis(&other.basis)?;
        Ok(Self::build(format!("{}·{}", self.name, other.name), &self.basis, self.matrix.matmul(&other.matrix)))
    }

    /// Entrywise map keeping the basis.
    pub fn map_entries(&self, name: impl Into<String>, f: impl Fn(i64, i64, Complex64) -> Complex64) -> Self {
        let b = &self.basis;
        Self::build(name, b, self.matrix.map(|i, j, z| f(b.level(i), b.level(j), z)))
    }

    /// Adds the commuting freedom `F(π̂_θ)` (a real function of `l`) to the
    /// diagonal; it leaves every commutator with `Ĥ` unchanged.
    pub fn with_momentum_shift(&self, f: impl Fn(i64) -> f64) -> Self {
        self.map_entries(self.name.clone(), |lo, li, z| if lo == li { z + f(lo) } else { z })
    }

    pub fn spectral_norm(&self) -> f64 {
        self.matrix.spectral_norm()
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.matrix.hermitian_residual()
    }

    pub(crate) fn check_basis(&self, other: &TruncatedBasis) -> Result<()> {
        if &self.basis == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}×{}, band {})", self.name, self.matrix.dim(), self.matrix.dim(), self.tags.bandwidth)
    }
}

/// Coefficients `c_n` of a periodic position function `f(θ) = Σ c_n e^{inθ}`,
/// constrained to `c_{−n} = c_n*` so that `f̂` is self-adjoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSymbol {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FourierSymbol {
    pub fn new(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_insert(ZERO) += c;
        }
        coeffs.retain(|_, c| *c != ZERO);
        let scale = coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        for (&n, &c) in &coeffs {
            let partner = coeffs.get(&-n).copied().unwrap_or(ZERO);
            if (partner - c.conj()).norm() > 1e-14 * scale {
                return Err(Error::NonHermitianSymbol { n: n.abs() });
            }
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    /// `cos θ`: `c_{±1} = 1/2`.
    pub fn cosine() -> Self {
        Self::new([(1, Complex64::from(0.5)), (-1, Complex64::from(0.5))]).unwrap()
    }

    /// `sin θ`: `c_1 = −i/2`, `c_{−1} = i/2`, i.e. `Ŝ = (Ŵ − Ŵ†)/(2i)`.
    pub fn sine() -> Self {
        Self::new([(1, Complex64::new(0.0, -0.5)), (-1, Complex64::new(0.0, 0.5))]).unwrap()
    }

    /// Sawtooth `θ = Σ_{n≥1} ((−1)^{n+1}/(in)) (e^{inθ} − e^{−inθ})`,
    /// truncated at `n_max` harmonics.
    pub fn sawtooth(n_max: i64) -> Self {
        let terms = (1..=n_max).flat_map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let c = Complex64::new(0.0, -sign / n as f64); // (−1)^{n+1}/(in)
            [(n, c), (-n, c.conj())]
        });
        Self::new(terms).unwrap()
    }

    /// `f(θ + s)`: `c_n → c_n e^{ins}`.
    pub fn shifted(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&n, &c)| (n, c * Complex64::from_polar(1.0, n as f64 * s))).collect() }
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn n_max(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// `Σ |c_n|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn has_even_harmonics(&self) -> bool {
        self.coeffs.keys().any(|&n| n != 0 && n % 2 == 0)
    }
}

/// `π̂_θ = diag(lħ)`.
pub fn momentum_op(basis: &TruncatedBasis) -> OperatorMatrix {
    let h = basis.hbar();
    OperatorMatrix::banded("pi", basis, 0, |l, _| Complex64::from(l as f64 * h))
}

/// `Ĥ = π̂_θ²/(2I)`.
pub fn hamiltonian_op(basis: &TruncatedBasis) -> OperatorMatrix {
    OperatorMatrix::banded("H", basis, 0, |l, _| Complex64::from(basis.energy(l)))
}

/// `Ŵⁿ|l⟩ = |l+n⟩`, truncated at the window edge.
pub fn w_power_op(basis: &TruncatedBasis, n: i64) -> OperatorMatrix {
    let name = match n {
        1 => "W".to_string(),
        _ => format!("W^{n}"),
    };
    OperatorMatrix::banded(name, basis, n.abs(), |lo, li| if lo - li == n { Complex64::from(1.0) } else { ZERO })
}

/// Diagonal entry `μₙ(l) = 2I/((2l+n)ħ)` of `μ̂ₙ`, zero on the projected
/// level `l = −n/2` for even `n`.
pub fn mu_entry(basis: &TruncatedBasis, n: i64, l: i64) -> f64 {
    let d = 2 * l + n;
    if d == 0 {
        0.0
    } else {
        2.0 * basis.inertia() / (d as f64 * basis.hbar())
    }
}

pub fn mu_op(basis: &TruncatedBasis, n: i64) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Domain("mu_0 is undefined (no energy-conjugate content)".into()));
    }
    Ok(OperatorMatrix::banded(format!("mu_{n}"), basis, 0, |l, _| Complex64::from(mu_entry(basis, n, l))))
}

fn symbol_op(name: &str, basis: &TruncatedBasis, sym: &FourierSymbol, weight: impl Fn(i64, Complex64) -> Complex64) -> OperatorMatrix {
    OperatorMatrix::banded(name, basis, sym.n_max(), |lo, li| {
        let n = lo - li;
        let c = sym.coeff(n);
        if c == ZERO {
            ZERO
        } else {
            weight(n, c)
        }
    })
}

/// `f̂ = Σ c_n Ŵⁿ`.
pub fn f_op(basis: &TruncatedBasis, sym: &FourierSymbol) -> OperatorMatrix {
    symbol_op("f", basis, sym, |_, c| c)
}

/// `f̂' = Σ c_n i n Ŵⁿ` (the θ-derivative of `f`).
pub fn f_prime_op(basis: &TruncatedBasis, sym: &FourierSymbol) -> OperatorMatrix {
    symbol_op("f'", basis, sym, |n, c| c * I * n as f64)
}

pub fn cosine_op(basis: &TruncatedBasis) -> OperatorMatrix {
    f_op(basis, &FourierSymbol::cosine()).renamed("C")
}

pub fn sine_op(basis: &TruncatedBasis) -> OperatorMatrix {
    f_op(basis, &FourierSymbol::sine()).renamed("S")
}

/// Truncated sawtooth angle `Θ̂`.
pub fn theta_op(basis: &TruncatedBasis, n_theta: i64) -> OperatorMatrix {
    f_op(basis, &FourierSymbol::sawtooth(n_theta)).renamed("Theta")
}

/// `T̂ = −Σ_n (c_n Ŵⁿ μ̂ₙ + c_n* μ̂ₙ Ŵ^{−n})/2`.
///
/// The two halves coincide after relabelling `n → −n`
/// (`μ_{−n}(l+n) = μₙ(l)`, projectors included), so
/// `⟨l+n|T̂|l⟩ = −c_n μₙ(l)` exactly, even in the truncated window.
pub fn time_op_general(basis: &TruncatedBasis, sym: &FourierSymbol) -> Result<OperatorMatrix> {
    let c0 = sym.coeff(0);
    if c0 != ZERO {
        return Err(Error::ZeroModeCoefficient(c0));
    }
    Ok(OperatorMatrix::banded("T", basis, sym.n_max(), |lo, li| {
        let n = lo - li;
        -sym.coeff(n) * mu_entry(basis, n, li)
    }))
}

/// `T̂_{S¹} = (μ̂₁Ŵ† − Ŵμ̂₁)/(2i)`: `⟨l+1|T̂|l⟩ = iI/((2l+1)ħ)`.
pub fn time_op_s1(basis: &TruncatedBasis) -> OperatorMatrix {
    OperatorMatrix::banded("T_S1", basis, 1, |lo, li| match lo - li {
        1 => I * (0.5 * mu_entry(basis, 1, li)),
        -1 => -I * (0.5 * mu_entry(basis, 1, lo)),
        _ => ZERO,
    })
}

/// `T̂^Re_{S¹} = μ̂₁ − (Ŵμ̂₁ + μ̂₁Ŵ†)/2`.
pub fn time_op_s1_re(basis: &TruncatedBasis) -> OperatorMatrix {
    OperatorMatrix::banded("T_S1_Re", basis, 1, |lo, li| match lo - li {
        0 => Complex64::from(mu_entry(basis, 1, li)),
        1 => Complex64::from(-0.5 * mu_entry(basis, 1, li)),
        -1 => Complex64::from(-0.5 * mu_entry(basis, 1, lo)),
        _ => ZERO,
    })
}

/// Default harmonic cutoff for `T̂_Θ`: 64, reduced to keep `N_Θ ≤ L − margin`.
pub fn default_theta_harmonics(basis: &TruncatedBasis, margin: usize) -> i64 {
    64.min(basis.cutoff() - margin as i64).max(1)
}

/// `T̂_Θ = −Σ_{n=1}^{N_Θ} ((−1)^{n+1}/(in)) (Ŵⁿμ̂ₙ − μ̂ₙŴ^{−n})`.
pub fn time_op_theta(basis: &TruncatedBasis, n_theta: i64, margin: usize) -> Result<OperatorMatrix> {
    let limit = basis.cutoff() - margin as i64;
    if n_theta < 1 || n_theta > limit {
        return Err(Error::Config(format!(
            "N_Theta = {n_theta} must lie in [1, L - margin] = [1, {limit}]"
        )));
    }
    let a = |n: i64| {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        Complex64::new(0.0, -sign / n as f64)
    };
    Ok(OperatorMatrix::banded("T_Theta", basis, n_theta, |lo, li| {
        let d = lo - li;
        if d > 0 {
            -a(d) * mu_entry(basis, d, li)
        } else if d < 0 {
            a(-d) * mu_entry(basis, -d, lo)
        } else {
            ZERO
        }
    }))
}

/// `T̂^PT = (1 − Ŵ)μ̂₁`: diagonal `μ₁(l)`, subdiagonal `⟨l+1|·|l⟩ = −μ₁(l)`.
pub fn time_op_pt(basis: &TruncatedBasis) -> OperatorMatrix {
    OperatorMatrix::banded("T_PT", basis, 1, |lo, li| match lo - li {
        0 => Complex64::from(mu_entry(basis, 1, li)),
        1 => Complex64::from(-mu_entry(basis, 1, li)),
        _ => ZERO,
    })
}
