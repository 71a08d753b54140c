//! Commutators, identity reports, weak Weyl relations and the discrete
//! symmetries `𝒫`, `𝒯`, `𝒫𝒯` on the truncated ring.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{gaussian_state, random_interior_state, StateVector, TruncatedBasis};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, vec_norm, vec_sub, CMatrix};
use crate::operators::{
    f_op, f_prime_op, hamiltonian_op, time_op_general, time_op_theta, FourierSymbol, OperatorMatrix,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A state together with a short description used in reports.
#[derive(Debug, Clone)]
pub struct LabeledState {
    pub label: String,
    pub state: StateVector,
}

impl LabeledState {
    pub fn new(label: impl Into<String>, state: StateVector) -> Self {
        Self { label: label.into(), state }
    }
}

/// Outcome of testing one identity on a list of states.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorReport {
    pub identity: String,
    pub states: Vec<String>,
    /// max over states of `‖(LHS − RHS)ψ‖ / scale(ψ)`.
    pub residual: f64,
    /// Largest normalization `max(‖LHSψ‖, ‖RHSψ‖)` encountered.
    pub scale: f64,
    /// max over states of `max_n |c_{2n}⟨−n|ψ⟩|` (zero when not applicable).
    pub domain_filter_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CommutatorReport {
    fn finish(identity: impl Into<String>, states: Vec<String>, residual: f64, scale: f64, dfv: f64, tol: f64) -> Self {
        Self {
            identity: identity.into(),
            states,
            residual,
            scale,
            domain_filter_violation: dfv,
            tolerance: tol,
            pass: residual <= tol,
        }
    }
}

/// `AB − BA`. Uses the exact entrywise form when either side is diagonal.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.check_basis(b.basis())?;
    let name = format!("[{},{}]", a.name(), b.name());
    let basis = a.basis();
    let m = if a.matrix().is_diagonal() {
        let d = a.matrix().diagonal();
        b.matrix().map(|i, j, z| if z == ZERO { ZERO } else { (d[i] - d[j]) * z })
    } else if b.matrix().is_diagonal() {
        let d = b.matrix().diagonal();
        a.matrix().map(|i, j, z| if z == ZERO { ZERO } else { z * (d[j] - d[i]) })
    } else {
        a.matrix().matmul(b.matrix()) - &b.matrix().matmul(a.matrix())
    };
    OperatorMatrix::new(name, basis, m)
}

fn relative_residual(lhs: &[Complex64], rhs: &[Complex64], psi_norm: f64) -> (f64, f64) {
    let diff = vec_norm(&vec_sub(lhs, rhs));
    let scale = vec_norm(lhs).max(vec_norm(rhs));
    if scale > 0.0 {
        (diff / scale, scale)
    } else if psi_norm > 0.0 {
        (diff / psi_norm, 0.0)
    } else {
        (0.0, 0.0)
    }
}

/// Checks `LHS ψ = RHS ψ` on every state.
pub fn check_identity(
    name: &str,
    lhs: &OperatorMatrix,
    rhs: &OperatorMatrix,
    states: &[LabeledState],
    tol: f64,
) -> Result<CommutatorReport> {
    lhs.check_basis(rhs.basis())?;
    let (mut worst, mut scale) = (0.0_f64, 0.0_f64);
    for s in states {
        let l = lhs.apply(&s.state)?;
        let r = rhs.apply(&s.state)?;
        let (res, sc) = relative_residual(l.coeffs(), r.coeffs(), s.state.norm());
        worst = worst.max(res);
        scale = scale.max(sc);
    }
    Ok(CommutatorReport::finish(name, labels(states), worst, scale, 0.0, tol))
}

fn labels(states: &[LabeledState]) -> Vec<String> {
    states.iter().map(|s| s.label.clone()).collect()
}

/// `e^{−isB/ħ}` for Hermitian `B` (closed form when diagonal).
pub fn unitary_flow(b: &OperatorMatrix, s: f64) -> Result<CMatrix> {
    let hbar = b.basis().hbar();
    if b.matrix().is_diagonal() {
        let d: Vec<Complex64> =
            b.matrix().diagonal().iter().map(|z| Complex64::from_polar(1.0, -s * z.re / hbar)).collect();
        return Ok(CMatrix::from_diagonal(&d));
    }
    if !b.tags().hermitian {
        return Err(Error::NotHermitian(b.hermitian_residual()));
    }
    let eig = jacobi_eigen(b.matrix());
    Ok(eig.apply_function(|l| Complex64::from_polar(1.0, -s * l / hbar)))
}

/// Generalized weak Weyl relation `A e^{−isB/ħ} ψ = e^{−isB/ħ}(A + K(s)) ψ`
/// over every `s` and state.
pub fn check_gwwr(
    name: &str,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    k: impl Fn(f64) -> Result<OperatorMatrix>,
    s_values: &[f64],
    states: &[LabeledState],
    tol: f64,
) -> Result<CommutatorReport> {
    a.check_basis(b.basis())?;
    if !b.tags().hermitian {
        return Err(Error::NotHermitian(b.hermitian_residual()));
    }
    let (mut worst, mut scale) = (0.0_f64, 0.0_f64);
    for &s in s_values {
        let u = unitary_flow(b, s)?;
        let shifted = a.add(&k(s)?)?;
        for st in states {
            let lhs = a.matrix().mul_vec(&u.mul_vec(st.state.coeffs()));
            let rhs = u.mul_vec(&shifted.matrix().mul_vec(st.state.coeffs()));
            let (res, sc) = relative_residual(&lhs, &rhs, st.state.norm());
            worst = worst.max(res);
            scale = scale.max(sc);
        }
    }
    Ok(CommutatorReport::finish(name, labels(states), worst, scale, 0.0, tol))
}

/// `Σ_n c_{2n} 2nħ |n⟩⟨−n|ψ⟩`: the part of `[Ĥ, T̂]ψ` left over by the
/// projected levels of the even `μ̂_{2n}`.
pub fn gccr_correction(sym: &FourierSymbol, psi: &StateVector) -> StateVector {
    let basis = psi.basis();
    let hbar = basis.hbar();
    let mut coeffs = vec![ZERO; basis.dim()];
    for (m, c) in sym.terms().filter(|(m, _)| *m != 0 && m % 2 == 0) {
        let n = m / 2;
        if let Some(i) = basis.index(n) {
            coeffs[i] += c * (m as f64 * hbar) * psi.coeff(-n);
        }
    }
    StateVector::new(basis, coeffs).expect("same basis")
}

/// `max_n |c_{2n}⟨−n|ψ⟩|` on the (unnormalized) state.
pub fn domain_filter_violation(sym: &FourierSymbol, psi: &StateVector) -> f64 {
    sym.terms()
        .filter(|(m, _)| *m != 0 && m % 2 == 0)
        .map(|(m, c)| (c * psi.coeff(-m / 2)).norm())
        .fold(0.0, f64::max)
}

/// Both readings of the generalized commutation relation for `T̂[sym]`.
#[derive(Debug, Clone, Serialize)]
pub struct GccrReport {
    /// `[Ĥ,T̂]ψ = iħf̂'ψ + Σ c_{2n}2nħ|n⟩⟨−n|ψ⟩`; exact in the truncated algebra.
    pub exact: CommutatorReport,
    /// `[Ĥ,T̂]ψ = iħf̂'ψ`, valid only where the domain filter vanishes.
    pub restricted: CommutatorReport,
}

pub fn check_gccr(sym: &FourierSymbol, states: &[LabeledState], tol: f64) -> Result<GccrReport> {
    let Some(first) = states.first() else {
        return Err(Error::Config("check_gccr needs at least one state".into()));
    };
    let basis = first.state.basis();
    let t = time_op_general(basis, sym)?;
    let comm = commutator(&hamiltonian_op(basis), &t)?;
    let rhs = f_prime_op(basis, sym).scale(Complex64::new(0.0, basis.hbar()));
    let (mut worst_a, mut worst_b, mut scale, mut dfv) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for s in states {
        let lhs = comm.apply(&s.state)?;
        let base = rhs.apply(&s.state)?;
        let full = base.add(&gccr_correction(sym, &s.state))?;
        let (ra, sa) = relative_residual(lhs.coeffs(), full.coeffs(), s.state.norm());
        let (rb, sb) = relative_residual(lhs.coeffs(), base.coeffs(), s.state.norm());
        worst_a = worst_a.max(ra);
        worst_b = worst_b.max(rb);
        scale = scale.max(sa).max(sb);
        dfv = dfv.max(domain_filter_violation(sym, &s.state));
    }
    Ok(GccrReport {
        exact: CommutatorReport::finish("[H,T] = i hbar f' + correction", labels(states), worst_a, scale, dfv, tol),
        restricted: CommutatorReport::finish("[H,T] = i hbar f'", labels(states), worst_b, scale, dfv, tol),
    })
}

/// `𝒫|l⟩ = |−l⟩`.
pub fn parity_op(basis: &TruncatedBasis) -> OperatorMatrix {
    let n = basis.dim();
    let m = CMatrix::from_fn(n, |i, j| if i + j == n - 1 { Complex64::from(1.0) } else { ZERO });
    OperatorMatrix::new("P", basis, m).expect("square")
}

fn reflect(m: &CMatrix, conjugate: bool) -> CMatrix {
    let n = m.dim();
    CMatrix::from_fn(n, |i, j| {
        let z = m[(n - 1 - i, n - 1 - j)];
        if conjugate {
            z.conj()
        } else {
            z
        }
    })
}

/// `𝒫M𝒫⁻¹ = Π M Π`.
pub fn parity_transform(m: &OperatorMatrix) -> OperatorMatrix {
    let out = reflect(m.matrix(), false);
    OperatorMatrix::new(format!("P {} P", m.name()), m.basis(), out).expect("square")
}

/// `𝒯M𝒯⁻¹ = Π conj(M) Π` for the antilinear `𝒯|l⟩ = |−l⟩`.
pub fn time_reversal(m: &OperatorMatrix) -> OperatorMatrix {
    let out = reflect(m.matrix(), true);
    OperatorMatrix::new(format!("T {} T", m.name()), m.basis(), out).expect("square")
}

/// `(𝒫𝒯)M(𝒫𝒯)⁻¹`. The two reflections cancel, so this is entrywise
/// conjugation in the `l` basis: PT-symmetric ⇔ real there.
pub fn pt_transform(m: &OperatorMatrix) -> OperatorMatrix {
    parity_transform(&time_reversal(m)).renamed(format!("PT {} PT", m.name()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PtClass {
    Symmetric,
    Antisymmetric,
    /// The zero operator is both.
    Both,
    Neither,
}

impl PtClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PtClass::Symmetric => "symmetric",
            PtClass::Antisymmetric => "antisymmetric",
            PtClass::Both => "both",
            PtClass::Neither => "neither",
        }
    }
}

/// Sign residuals `‖PT(M) ∓ M‖_max` and the resulting class.
#[derive(Debug, Clone, Serialize)]
pub struct PtAudit {
    pub operator: String,
    pub symmetric_residual: f64,
    pub antisymmetric_residual: f64,
    /// `‖PT(PT(M)) − M‖_max`.
    pub involution_residual: f64,
    pub class: PtClass,
}

pub fn pt_audit(m: &OperatorMatrix, tol: f64) -> PtAudit {
    let t = pt_transform(m);
    let sym = (t.matrix() - m.matrix()).max_abs();
    let anti = (t.matrix() + m.matrix()).max_abs();
    let inv = (pt_transform(&t).matrix() - m.matrix()).max_abs();
    let class = match (sym <= tol, anti <= tol) {
        (true, true) => PtClass::Both,
        (true, false) => PtClass::Symmetric,
        (false, true) => PtClass::Antisymmetric,
        (false, false) => PtClass::Neither,
    };
    PtAudit { operator: m.name().to_string(), symmetric_residual: sym, antisymmetric_residual: anti, involution_residual: inv, class }
}

pub fn is_pt_symmetric(m: &OperatorMatrix, tol: f64) -> bool {
    matches!(pt_audit(m, tol).class, PtClass::Symmetric | PtClass::Both)
}

pub fn is_pt_antisymmetric(m: &OperatorMatrix, tol: f64) -> bool {
    matches!(pt_audit(m, tol).class, PtClass::Antisymmetric | PtClass::Both)
}

/// `⟨l|[Ĥ,T̂_Θ]|l⟩` against the canonical value `iħ`.
#[derive(Debug, Clone, Serialize)]
pub struct ParadoxReport {
    pub level: i64,
    pub harmonics: i64,
    /// Diagonal element of the commutator in the momentum eigenstate.
    pub eigenstate_value: Complex64,
    /// What `[Ĥ,T̂] = iħ` would demand of the same element.
    pub canonical_value: Complex64,
    /// `(E_l − E_l)⟨l|T̂_Θ|l⟩`, identically zero.
    pub trace_argument: Complex64,
}

pub fn paradox_demo(basis: &TruncatedBasis, l: i64, n_theta: i64, margin: usize) -> Result<ParadoxReport> {
    if l == 0 || l.abs() > basis.cutoff() - 1 {
        return Err(Error::Domain(format!("paradox demo needs 0 < |l| ≤ L − 1, got l = {l}")));
    }
    let t = time_op_theta(basis, n_theta, margin)?;
    let comm = commutator(&hamiltonian_op(basis), &t)?;
    let ket = StateVector::basis_state(basis, l);
    let value = comm.expectation(&ket)?;
    let e = basis.energy(l);
    Ok(ParadoxReport {
        level: l,
        harmonics: n_theta,
        eigenstate_value: value,
        canonical_value: Complex64::new(0.0, basis.hbar()),
        trace_argument: t.entry(l, l) * (e - e),
    })
}

/// Weak matrix element of `[Ĥ, T̂_Θ]` between two states, split into the
/// derivative part `iħ⟨φ|f̂'ψ⟩` and the projector correction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeakElement {
    pub harmonics: i64,
    /// `⟨φ|[Ĥ,T̂_Θ]|ψ⟩`.
    pub raw: Complex64,
    /// `⟨φ|Σ c_{2n}2nħ|n⟩⟨−n|ψ⟩`.
    pub correction: Complex64,
    /// `raw − correction = iħ⟨φ|Θ̂'ψ⟩`.
    pub filtered: Complex64,
}

pub fn theta_weak_element(phi: &StateVector, psi: &StateVector, n_theta: i64, margin: usize) -> Result<WeakElement> {
    let basis = psi.basis();
    let t = time_op_theta(basis, n_theta, margin)?;
    let comm = commutator(&hamiltonian_op(basis), &t)?;
    let raw = comm.matrix_element(phi, psi)?;
    let corr = phi.inner(&gccr_correction(&FourierSymbol::sawtooth(n_theta), psi))?;
    Ok(WeakElement { harmonics: n_theta, raw, correction: corr, filtered: raw - corr })
}

/// Gaussians and seeded random states cut to the interior.
pub fn interior_test_states(basis: &TruncatedBasis, margin: usize, seed: u64) -> Result<Vec<LabeledState>> {
    let mut out = Vec::new();
    for &(th, l0, sig) in &[(0.0, 0, 0.5), (0.7, 3, 0.4), (-1.2, -5, 0.6), (2.5, 2, 0.5)] {
        let g = gaussian_state(basis, th, l0, sig)?.truncate_to_interior(margin).normalized()?;
        out.push(LabeledState::new(format!("gauss(theta0={th},l0={l0},sigma={sig})"), g));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..3 {
        let r = random_interior_state(basis, margin, &mut rng)?;
        out.push(LabeledState::new(format!("random#{k}(seed={seed})"), r));
    }
    Ok(out)
}

/// `|l⟩` for every interior level.
pub fn interior_basis_states(basis: &TruncatedBasis, margin: usize) -> Vec<LabeledState> {
    let inner = basis.cutoff() - margin as i64;
    (-inner..=inner).map(|l| LabeledState::new(format!("|{l}>"), StateVector::basis_state(basis, l))).collect()
}

/// `f̂_s − f̂` for the `(f̂, π̂_θ)` Weyl pair.
pub fn position_shift_factor(basis: &TruncatedBasis, sym: &FourierSymbol, s: f64) -> Result<OperatorMatrix> {
    f_op(basis, &sym.shifted(s)).sub(&f_op(basis, sym))
}
