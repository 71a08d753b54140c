//! Canned studies. Each takes [`StudyParams`] and returns one [`Table`]
//! whose `pass` flag carries the overall verdict.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra::{
    check_gccr, check_gwwr, check_identity, commutator, interior_basis_states, interior_test_states, paradox_demo,
    position_shift_factor, pt_audit, CommutatorReport, PtClass,
};
use crate::basis::{StateVector, TruncatedBasis};
use crate::dynamics::{commutation_factor_period, floquet_toy, heisenberg_evolve, su2_residual, verify_period, FloquetDrive};
use crate::error::{Error, Result};
use crate::limits::{line_drift, matter_wave_check, radius_sweep, LinePacket, LineState, SweepPacket};
use crate::operators::*;
use crate::spectral::{
    biorthogonality_matrix, eigen_residual, pair_states, pt_eigenpair, pt_eigenvalue, raising_diagonal, triangular_spectrum,
};
use crate::table::{Cell, Table};
use crate::uncertainty::{PresetPair, UncertaintyReport};
use crate::Complex64;

/// Window the log-log slope of the radius sweep must fall in.
pub const SLOPE_WINDOW: (f64, f64) = (-1.3, -0.7);

/// PT classification tolerance.
pub const PT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyParams {
    pub cutoff: i64,
    pub radius: f64,
    pub mass: f64,
    pub hbar: f64,
    /// `None` selects the default grid for the cutoff.
    pub grid: Option<usize>,
    pub margin: usize,
    pub seed: u64,
    /// Identity and periodicity tolerance.
    pub tol: f64,
    /// Eigenfunction and biorthogonality tolerance.
    pub spectral_tol: f64,
    pub nu_min: i64,
    pub nu_max: i64,
    pub radii: Vec<f64>,
    pub packet: SweepPacket,
    pub limit_table: LimitTable,
    pub matter_wave_levels: Vec<i64>,
    pub drift_times: Vec<f64>,
    pub states: usize,
    pub pulse_area: f64,
    pub drive_period: f64,
    pub floquet_periods: usize,
    pub floquet_steps: usize,
}

impl Default for StudyParams {
    fn default() -> Self {
        Self {
            cutoff: 64,
            radius: 1.0,
            mass: 1.0,
            hbar: 1.0,
            grid: None,
            margin: crate::DEFAULT_MARGIN,
            seed: crate::uncertainty::DEFAULT_SEED,
            tol: 1e-12,
            spectral_tol: 1e-8,
            nu_min: -10,
            nu_max: 10,
            radii: vec![1.0, 2.0, 4.0, 8.0],
            packet: SweepPacket::default(),
            limit_table: LimitTable::Sweep,
            matter_wave_levels: vec![10, 20, 40, 80],
            drift_times: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            states: 200,
            pulse_area: PI / 2.0,
            drive_period: 2.0 * PI,
            floquet_periods: 4,
            floquet_steps: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitTable {
    Sweep,
    MatterWave,
    Drift,
}

impl LimitTable {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitTable::Sweep => "sweep",
            LimitTable::MatterWave => "matter_wave",
            LimitTable::Drift => "drift",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sweep" => Some(LimitTable::Sweep),
            "matter_wave" => Some(LimitTable::MatterWave),
            "drift" => Some(LimitTable::Drift),
            _ => None,
        }
    }
}

impl StudyParams {
    pub fn basis(&self) -> Result<TruncatedBasis> {
        let mut b = TruncatedBasis::builder(self.cutoff).radius(self.radius).mass(self.mass).hbar(self.hbar);
        if let Some(n) = self.grid {
            b = b.grid_size(n);
        }
        b.build()
    }
}

fn verdict_row(t: &mut Table, name: &str, residual: f64, tol: f64) {
    let pass = residual <= tol;
    t.pass &= pass;
    t.push(vec![name.into(), residual.into(), tol.into(), pass.into()]);
}

fn report_row(t: &mut Table, r: &CommutatorReport) {
    verdict_row(t, &r.identity, r.residual, r.tolerance);
}

/// A symbol with odd and even harmonics for the generalized identities.
pub fn mixed_symbol() -> FourierSymbol {
    let c = Complex64::new;
    FourierSymbol::new([
        (1, c(0.5, 0.0)),
        (-1, c(0.5, 0.0)),
        (2, c(0.2, -0.1)),
        (-2, c(0.2, 0.1)),
        (3, c(0.0, 0.05)),
        (-3, c(0.0, -0.05)),
    ])
    .expect("conjugate-symmetric")
}

/// Identity, Weyl-relation and PT suites: one row per identity.
pub fn check_table(p: &StudyParams) -> Result<Table> {
    let b = p.basis()?;
    let tol = p.tol;
    let i_hbar = Complex64::new(0.0, b.hbar());
    let states = interior_test_states(&b, p.margin, p.seed)?;
    let mut t = Table::new("check", &["identity", "residual[-]", "tolerance[-]", "pass"]);
    let pi = momentum_op(&b);
    let h = hamiltonian_op(&b);

    for n in [1, 2, 3, -1, -2] {
        let w = w_power_op(&b, n);
        let rhs = w.scale(Complex64::from(n as f64 * b.hbar()));
        report_row(&mut t, &check_identity(&format!("[pi,W^{n}] = {n} hbar W^{n}"), &commutator(&pi, &w)?, &rhs, &states, tol)?);
    }
    let (c, s) = (cosine_op(&b), sine_op(&b));
    report_row(&mut t, &check_identity("[pi,C] = i hbar S", &commutator(&pi, &c)?, &s.scale(i_hbar), &states, tol)?);
    report_row(&mut t, &check_identity("[pi,S] = -i hbar C", &commutator(&pi, &s)?, &c.scale(-i_hbar), &states, tol)?);
    let ts1 = time_op_s1(&b);
    let tre = time_op_s1_re(&b);
    let tpt = time_op_pt(&b);
    report_row(&mut t, &check_identity("[H,T_S1] = i hbar C", &commutator(&h, &ts1)?, &c.scale(i_hbar), &states, tol)?);
    report_row(&mut t, &check_identity("[H,T_S1_Re] = -i hbar S", &commutator(&h, &tre)?, &s.scale(-i_hbar), &states, tol)?);
    let kets = interior_basis_states(&b, p.margin);
    let w = w_power_op(&b, 1);
    report_row(
        &mut t,
        &check_identity("[H,T_PT]|l> = -hbar W|l>", &commutator(&h, &tpt)?, &w.scale(Complex64::from(-b.hbar())), &kets, tol)?,
    );
    for (name, sym) in [("mixed", mixed_symbol()), ("sawtooth", FourierSymbol::sawtooth(default_theta_harmonics(&b, p.margin)))] {
        let r = check_gccr(&sym, &states, tol)?;
        verdict_row(&mut t, &format!("{} [{name}]", r.exact.identity), r.exact.residual, tol);
    }

    let s_values = [0.1, 1.0, PI];
    for (name, sym) in [("cos", FourierSymbol::cosine()), ("mixed", mixed_symbol())] {
        let f = f_op(&b, &sym);
        let r = check_gwwr(&format!("GWWR (f,pi,f_s - f) [{name}]"), &f, &pi, |s| position_shift_factor(&b, &sym, s), &s_values, &states, tol)?;
        report_row(&mut t, &r);
    }
    for op in [ts1.clone(), tre.clone(), tpt.clone(), time_op_general(&b, &mixed_symbol())?] {
        let r = check_gwwr(&format!("GWWR (T,H,T(t) - T) [{}]", op.name()), &op, &h, |s| heisenberg_evolve(&op, s).sub(&op), &s_values, &states, tol)?;
        report_row(&mut t, &r);
    }

    let pt_tol = tol.min(PT_TOL);
    let mut pt_ops: Vec<(OperatorMatrix, PtClass)> =
        [1, 2, -1].into_iter().map(|n| (w_power_op(&b, n), PtClass::Symmetric)).collect();
    pt_ops.extend([
        (pi.clone(), PtClass::Symmetric),
        (h.clone(), PtClass::Symmetric),
        (tpt.clone(), PtClass::Symmetric),
        (c.clone(), PtClass::Symmetric),
        (ts1.clone(), PtClass::Antisymmetric),
        (s.clone(), PtClass::Antisymmetric),
    ]);
    for (op, expected) in &pt_ops {
        let a = pt_audit(op, pt_tol);
        let (label, residual) = match expected {
            PtClass::Antisymmetric => ("PT(M) = -M", a.antisymmetric_residual),
            _ => ("PT(M) = M", a.symmetric_residual),
        };
        verdict_row(&mut t, &format!("{label} [{}]", op.name()), residual, pt_tol);
        verdict_row(&mut t, &format!("(PT)^2 = 1 [{}]", op.name()), a.involution_residual, pt_tol);
    }

    let paradox = paradox_demo(&b, 3, default_theta_harmonics(&b, p.margin), p.margin)?;
    verdict_row(&mut t, "<l|[H,T_Theta]|l> = 0", paradox.eigenstate_value.norm() / b.hbar(), tol);

    let mixed = mixed_symbol();
    let bound = 2.0 * b.inertia() / b.hbar() * mixed.l1_norm();
    let norm = time_op_general(&b, &mixed)?.spectral_norm();
    verdict_row(&mut t, "||T[f]|| <= (2I/hbar) sum|c_n|", (norm / bound - 1.0).max(0.0), tol);
    Ok(t)
}

/// Eigenvalues, eigenfunction residuals and biorthogonality of `T^PT`.
pub fn spectrum_table(p: &StudyParams) -> Result<Table> {
    if p.nu_min > p.nu_max {
        return Err(Error::Config(format!("empty nu range [{}, {}]", p.nu_min, p.nu_max)));
    }
    let b = p.basis()?;
    let pairs: Vec<_> = (p.nu_min..=p.nu_max).map(|nu| pt_eigenpair(&b, nu)).collect::<Result<_>>()?;
    let g = biorthogonality_matrix(&pairs)?;
    let diag: std::collections::BTreeMap<i64, f64> = triangular_spectrum(&b).into_iter().collect();
    let comm = commutator(&hamiltonian_op(&b), &time_op_pt(&b))?;
    let mut t = Table::new(
        "spectrum",
        &[
            "nu",
            "tau[T]",
            "matrix_diagonal[T]",
            "right_residual[-]",
            "left_residual[-]",
            "biorthogonality_offdiag[-]",
            "biorthogonality_diag[-]",
            "w_diagonal[-]",
            "commutator_diagonal[E*T]",
            "leakage_flag",
            "pass",
        ],
    );
    for (i, pair) in pairs.iter().enumerate() {
        let r = eigen_residual(pair)?;
        let off = (0..pairs.len()).filter(|&j| j != i).map(|j| g[(i, j)].norm()).fold(0.0, f64::max);
        let d = (g[(i, i)] - 1.0).norm();
        let wd = raising_diagonal(pair)?.norm();
        let (phi, chi) = pair_states(pair);
        let cd = comm.matrix_element(&chi, &phi)?.norm();
        let exact = pt_eigenvalue(&b, pair.nu);
        let on_diag = diag.get(&pair.nu).copied().unwrap_or(f64::NAN);
        let tol = p.spectral_tol;
        let pass = on_diag == exact && [r.right, r.left, off, d, wd, cd].iter().all(|&x| x <= tol);
        t.pass &= pass;
        t.push(vec![
            pair.nu.into(),
            pair.tau.into(),
            on_diag.into(),
            r.right.into(),
            r.left.into(),
            off.into(),
            d.into(),
            wd.into(),
            cd.into(),
            r.leakage_flag.into(),
            pass.into(),
        ]);
    }
    Ok(t)
}

/// Recurrence at `P = 4πI/ħ` and the negative control at `P/2`.
pub fn evolve_table(p: &StudyParams) -> Result<Table> {
    let b = p.basis()?;
    let period = b.period();
    let mut t = Table::new(
        "evolve",
        &["operator", "period[T]", "residual_P[-]", "residual_half_P[-]", "tolerance[-]", "pass"],
    );
    let ts1 = time_op_s1(&b);
    let ops = [
        w_power_op(&b, 1),
        cosine_op(&b),
        sine_op(&b),
        ts1.clone(),
        time_op_s1_re(&b),
        time_op_pt(&b),
    ];
    let mut push = |name: &str, at_p: f64, at_half: f64| {
        // Every listed family carries odd harmonics, which flip sign at P/2.
        let pass = at_p <= p.tol && at_half > 0.5;
        t.pass &= pass;
        t.push(vec![name.into(), period.into(), at_p.into(), at_half.into(), p.tol.into(), pass.into()]);
    };
    for op in &ops {
        push(op.name(), verify_period(op, period)?, verify_period(op, period / 2.0)?);
    }
    push(
        &format!("K[{}]", ts1.name()),
        commutation_factor_period(&ts1, period)?,
        commutation_factor_period(&ts1, period / 2.0)?,
    );
    Ok(t)
}

pub fn limit_table(p: &StudyParams) -> Result<Table> {
    match p.limit_table {
        LimitTable::Sweep => sweep_table(p),
        LimitTable::MatterWave => matter_wave_table(p),
        LimitTable::Drift => drift_table(p),
    }
}

fn sweep_table(p: &StudyParams) -> Result<Table> {
    let sweep = radius_sweep(&p.radii, p.packet, p.mass, p.hbar)?;
    let mut t = Table::new(
        "limit_sweep",
        &[
            "R[L]",
            "L",
            "l0",
            "sigma_theta[rad]",
            "ring_T_S1[T]",
            "line_T[T]",
            "rel_diff[-]",
            "ring_T_PT_re[T]",
            "ring_T_PT_im[T]",
            "line_iT_NH_re[T]",
            "line_iT_NH_im[T]",
            "pt_rel_diff[-]",
            "cos_expectation[-]",
            "commutator_residual[-]",
            "slope[-]",
            "pt_slope[-]",
        ],
    );
    for r in &sweep.rows {
        t.push(vec![
            r.radius.into(),
            r.cutoff.into(),
            r.l0.into(),
            r.sigma_theta.into(),
            r.ring_t_s1.into(),
            r.line_t.into(),
            r.rel_diff.into(),
            r.ring_t_pt.re.into(),
            r.ring_t_pt.im.into(),
            r.line_i_t_nh.re.into(),
            r.line_i_t_nh.im.into(),
            r.pt_rel_diff.into(),
            r.cos_expectation.into(),
            r.commutator_residual.into(),
            sweep.slope.into(),
            sweep.pt_slope.into(),
        ]);
    }
    t.pass = sweep.monotone && (SLOPE_WINDOW.0..=SLOPE_WINDOW.1).contains(&sweep.slope);
    Ok(t)
}

fn matter_wave_table(p: &StudyParams) -> Result<Table> {
    let top = p.matter_wave_levels.iter().map(|l| l.abs()).max().unwrap_or(0);
    let b = TruncatedBasis::builder(p.cutoff.max(top + p.margin as i64))
        .radius(p.radius)
        .mass(p.mass)
        .hbar(p.hbar)
        .build()?;
    // The asymptote is the leading θ → 0 element; θ ≠ 0 rows check the closed form only.
    let thetas = [0.0, 1e-3];
    let rows = matter_wave_check(&b, &p.matter_wave_levels, &thetas)?;
    let mut t = Table::new(
        "limit_matter_wave",
        &[
            "l",
            "theta[rad]",
            "matrix_re[T]",
            "matrix_im[T]",
            "formula_re[T]",
            "formula_im[T]",
            "asymptote[T]",
            "rel_deviation[-]",
            "l2_scaled_deviation[-]",
        ],
    );
    for r in &rows {
        let scaled = r.rel_deviation * (r.l * r.l) as f64;
        t.push(vec![
            r.l.into(),
            r.theta.into(),
            r.matrix_value.re.into(),
            r.matrix_value.im.into(),
            r.formula_value.re.into(),
            r.formula_value.im.into(),
            r.asymptote.into(),
            r.rel_deviation.into(),
            scaled.into(),
        ]);
    }
    let scaled: Vec<f64> =
        rows.iter().filter(|r| r.theta == 0.0).map(|r| r.rel_deviation * (r.l * r.l) as f64).collect();
    let hi = scaled.iter().copied().fold(f64::MIN, f64::max);
    let lo = scaled.iter().copied().fold(f64::MAX, f64::min);
    t.pass &= lo > 0.0 && hi / lo <= 2.0;
    for r in &rows {
        t.pass &= (r.matrix_value - r.formula_value).norm() <= 1e-10 * r.formula_value.norm();
    }
    Ok(t)
}

fn drift_table(p: &StudyParams) -> Result<Table> {
    let psi = LineState::gaussian(
        LinePacket { x0: p.packet.x0, k0: p.packet.momentum / p.hbar, sigma_x: p.packet.sigma_x },
        p.mass,
        p.hbar,
        p.drift_times.iter().fold(0.0_f64, |a, &t| a.max(t.abs())) * p.packet.momentum / p.mass,
        None,
    )?;
    let mut t = Table::new(
        "limit_drift",
        &["t[T]", "expectation[T]", "drift[T]", "drift_minus_t[T]", "drift_plus_t[T]", "pass"],
    );
    for s in line_drift(&psi, &p.drift_times) {
        let pass = (s.drift - s.t).abs() <= 1e-10 * s.t.abs();
        t.pass &= pass;
        t.push(vec![s.t.into(), s.expectation.into(), s.drift.into(), (s.drift - s.t).into(), (s.drift + s.t).into(), pass.into()]);
    }
    Ok(t)
}

/// Aggregated relation reports over seeded random states, plus the
/// momentum-eigenstate degenerate case and the composition check.
pub fn uncertainty_table(p: &StudyParams) -> Result<Table> {
    let b = p.basis()?;
    // All presets have bandwidth 1.
    let margin = p.margin.max(2);
    let states = crate::uncertainty::seeded_states(&b, p.states, margin, p.seed)?;
    let eigen = StateVector::basis_state(&b, 3);
    let per_pair: Vec<Result<Vec<Vec<Cell>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = PresetPair::ALL
            .into_iter()
            .map(|pair| {
                let (b, states, eigen) = (&b, &states, &eigen);
                scope.spawn(move || uncertainty_rows(pair, b, states, eigen, p.seed))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("uncertainty worker panicked")).collect()
    });
    let mut t = Table::new(
        "uncertainty",
        &["pair", "relation", "states", "min_slack[A*B]", "worst_state", "max_lhs[A*B]", "max_rhs[A*B]", "pass"],
    );
    for rows in per_pair {
        for row in rows? {
            if let Some(Cell::Bool(pass)) = row.last() {
                t.pass &= *pass;
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn uncertainty_rows(
    pair: PresetPair,
    basis: &TruncatedBasis,
    states: &[StateVector],
    eigen: &StateVector,
    seed: u64,
) -> Result<Vec<Vec<Cell>>> {
    let prepared = pair.prepare(basis)?;
    let mut by_relation: Vec<(String, Vec<UncertaintyReport>)> = Vec::new();
    let mut composition_ok = true;
    let (mut composition_worst, mut max_bound, mut max_half) = (f64::INFINITY, 0.0_f64, 0.0_f64);
    for (k, psi) in states.iter().enumerate() {
        let label = format!("random#{k}(seed={seed})");
        for r in prepared.all_relations(psi, &label)? {
            match by_relation.iter_mut().find(|(n, _)| *n == r.relation) {
                Some((_, v)) => v.push(r),
                None => by_relation.push((r.relation.clone(), vec![r])),
            }
        }
        let c = prepared.composition(psi, &label)?;
        composition_ok &= c.holds;
        composition_worst = composition_worst.min(c.mean_bound - c.half_commutator);
        max_bound = max_bound.max(c.mean_bound);
        max_half = max_half.max(c.half_commutator);
    }
    let mut rows = Vec::new();
    for (relation, reports) in &by_relation {
        let worst = reports.iter().min_by(|a, b| a.slack.total_cmp(&b.slack)).expect("non-empty");
        let max_lhs = reports.iter().map(|r| r.lhs).fold(0.0, f64::max);
        let max_rhs = reports.iter().map(|r| r.rhs).fold(0.0, f64::max);
        rows.push(vec![
            pair.name().into(),
            relation.as_str().into(),
            reports.len().into(),
            worst.slack.into(),
            worst.state.as_str().into(),
            max_lhs.into(),
            max_rhs.into(),
            reports.iter().all(|r| r.holds).into(),
        ]);
    }
    for r in prepared.all_relations(eigen, "|3>")? {
        rows.push(vec![
            pair.name().into(),
            r.relation.as_str().into(),
            1usize.into(),
            r.slack.into(),
            r.state.as_str().into(),
            r.lhs.into(),
            r.rhs.into(),
            r.holds.into(),
        ]);
    }
    rows.push(vec![
        pair.name().into(),
        "composition".into(),
        states.len().into(),
        composition_worst.into(),
        "".into(),
        max_bound.into(),
        max_half.into(),
        composition_ok.into(),
    ]);
    Ok(rows)
}

/// Stroboscopic returns of the pulsed spin-1/2 drive at `mP`, `m = 1..=4`.
pub fn floquet_table(p: &StudyParams) -> Result<Table> {
    let drive = FloquetDrive::new(p.pulse_area, p.drive_period)?;
    let trace = floquet_toy(drive, p.floquet_periods, p.floquet_steps);
    let su2 = su2_residual();
    let mut t = Table::new(
        "floquet",
        &[
            "pulse_area[rad]",
            "drive_period[T]",
            "multiple",
            "residual_T[-]",
            "residual_K[-]",
            "returns",
            "operator_period[T]",
            "su2_residual[-]",
        ],
    );
    for (m, (&rt, &rk)) in trace.multiple_residuals.iter().zip(&trace.k_multiple_residuals).enumerate() {
        t.push(vec![
            p.pulse_area.into(),
            p.drive_period.into(),
            (m + 1).into(),
            rt.into(),
            rk.into(),
            (rt <= p.tol && rk <= p.tol).into(),
            trace.operator_period.unwrap_or(f64::NAN).into(),
            su2.into(),
        ]);
    }
    t.pass = su2 <= p.tol && trace.operator_period.is_some();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> StudyParams {
        StudyParams { cutoff: 24, states: 10, nu_min: -3, nu_max: 3, ..StudyParams::default() }
    }

    fn float(c: &Cell) -> f64 {
        match c {
            Cell::Float(v) => *v,
            Cell::Int(v) => *v as f64,
            other => panic!("not numeric: {other:?}"),
        }
    }

    #[test]
    fn check_suite_passes_and_fails_on_impossible_tolerance() {
        let t = check_table(&small()).unwrap();
        assert!(t.pass, "{:#?}", t.rows.iter().filter(|r| r[3] == Cell::Bool(false)).collect::<Vec<_>>());
        let strict = check_table(&StudyParams { tol: 1e-16, ..small() }).unwrap();
        assert!(!strict.pass);
    }

    #[test]
    fn spectrum_tau_column() {
        let t = spectrum_table(&StudyParams { cutoff: 64, ..small() }).unwrap();
        let taus: Vec<f64> = t.column("tau").unwrap().into_iter().map(float).collect();
        let expected = [-2.0 / 5.0, -2.0 / 3.0, -2.0, 2.0, 2.0 / 3.0, 2.0 / 5.0, 2.0 / 7.0];
        for (a, e) in taus.iter().zip(expected) {
            assert!((a - e).abs() < 1e-15);
        }
        assert!(t.pass);
    }

    #[test]
    fn evolve_and_floquet_pass() {
        assert!(evolve_table(&small()).unwrap().pass);
        let f = floquet_table(&small()).unwrap();
        assert!(f.pass);
        let returns: Vec<&Cell> = f.column("returns").unwrap();
        assert_eq!(returns[0], &Cell::Bool(false));
        assert_eq!(returns[1], &Cell::Bool(true));
    }

    #[test]
    fn uncertainty_suite_holds() {
        let t = uncertainty_table(&small()).unwrap();
        assert!(t.pass);
        // 4 relations for Hermitian pairs, 3 otherwise; random + eigenstate + composition.
        assert_eq!(t.rows.len(), 4 * (4 * 2 + 1) + 2 * (3 * 2 + 1));
    }

    #[test]
    fn matter_wave_table_passes() {
        let t = limit_table(&StudyParams { limit_table: LimitTable::MatterWave, ..small() }).unwrap();
        assert!(t.pass);
        assert_eq!(t.rows.len(), 8);
    }
}
