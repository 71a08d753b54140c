//! Double-double helpers for the few places where f64 rounding in the
//! integrand itself would dominate a quadrature (the biorthogonal
//! eigenfunctions). `twofloat` supplies the error-free arithmetic; its
//! transcendental functions are not accurate to full double-double precision,
//! so `exp` and `sin_cos` are evaluated here by range reduction and Taylor
//! series.

use num_complex::Complex64;
use twofloat::TwoFloat;

fn pi() -> TwoFloat {
    TwoFloat::new_add(3.141_592_653_589_793, 1.224_646_799_147_353_2e-16)
}

fn ln2() -> TwoFloat {
    TwoFloat::new_add(0.693_147_180_559_945_3, 2.319_046_813_846_299_6e-17)
}

/// `e^x`, relative error around 1e-30 for |x| below a few hundred.
pub(crate) fn exp(x: TwoFloat) -> TwoFloat {
    let k = (x.hi() / ln2().hi()).round();
    let r = x - ln2() * k;
    // Shrink further so the series converges in a handful of terms, then
    // undo by repeated squaring.
    const SQUARINGS: i32 = 8;
    let r = r / f64::powi(2.0, SQUARINGS);
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for n in 1..=16 {
        term = term * r / n as f64;
        sum += term;
    }
    for _ in 0..SQUARINGS {
        sum = sum * sum;
    }
    sum * f64::powi(2.0, k as i32)
}

/// `(sin x, cos x)` for moderate |x|.
pub(crate) fn sin_cos(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let half_pi = pi() / 2.0;
    let k = (x.hi() / half_pi.hi()).round();
    let r = x - half_pi * k;
    let r2 = r * r;
    let mut s_term = r;
    let mut s = r;
    let mut c_term = TwoFloat::from(1.0);
    let mut c = TwoFloat::from(1.0);
    for n in 1..=14 {
        let m = 2 * n;
        s_term = -s_term * r2 / ((m * (m + 1)) as f64);
        c_term = -c_term * r2 / (((m - 1) * m) as f64);
        s += s_term;
        c += c_term;
    }
    match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// `θ = −π + 2πj/n` in double-double.
pub(crate) fn grid_angle(j: usize, n: usize) -> TwoFloat {
    let num = 2.0 * j as f64 - n as f64;
    pi() * (TwoFloat::from(num) / n as f64)
}

/// Unnormalized right/left eigenfunction profiles of the bidiagonal time
/// operator at `θ`:
///   φ = (1 − e^{iθ}) e^{−c cos θ} e^{i(νθ − c sin θ)},
///   χ = e^{+c cos θ} e^{i(νθ − c sin θ)},   c = ν + ½,
/// evaluated in double-double and rounded once.
pub(crate) fn pt_profiles(nu: i64, theta: TwoFloat) -> (Complex64, Complex64) {
    let c = nu as f64 + 0.5;
    let (s, co) = sin_cos(theta);
    let phase = theta * nu as f64 - s * c;
    let (ps, pc) = sin_cos(phase);
    let decay = exp(-(co * c));
    let grow = exp(co * c);
    // (1 − cos θ − i sin θ)(pc + i ps)
    let a = TwoFloat::from(1.0) - co;
    let b = -s;
    let re = a * pc - b * ps;
    let im = a * ps + b * pc;
    let phi = Complex64::new(f64::from(re * decay), f64::from(im * decay));
    let chi = Complex64::new(f64::from(pc * grow), f64::from(ps * grow));
    (phi, chi)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated `Σ conj(a_j) b_j`.
pub(crate) fn compensated_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (x, y) in a.iter().zip(b) {
        // Split each product exactly so the compensation sees the true terms.
        let p = TwoFloat::new_mul(x.re, y.re);
        let q = TwoFloat::new_mul(x.im, y.im);
        let r = TwoFloat::new_mul(x.re, y.im);
        let s = TwoFloat::new_mul(x.im, y.re);
        re.add(p.hi());
        re.add(p.lo());
        re.add(q.hi());
        re.add(q.lo());
        im.add(r.hi());
        im.add(r.lo());
        im.add(-s.hi());
        im.add(-s.lo());
    }
    Complex64::new(re.value(), im.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_reference_values() {
        // e^1 and e^{-9.5} to full double-double precision.
        let e = exp(TwoFloat::from(1.0));
        let e_ref = TwoFloat::new_add(2.718_281_828_459_045, 1.445_646_891_729_250_2e-16);
        assert!(f64::from(e - e_ref).abs() < 1e-30);
        let x = exp(TwoFloat::from(-9.5));
        assert!((f64::from(x) - 7.485_182_988_770_06e-5).abs() < 1e-19);
    }

    #[test]
    fn sin_cos_is_consistent() {
        for x in [0.0_f64, 0.3, 1.0, -2.5, 3.1, 7.9, -10.4] {
            let (s, c) = sin_cos(TwoFloat::from(x));
            let one = s * s + c * c;
            assert!(f64::from(one - 1.0).abs() < 1e-30);
            assert!((f64::from(s) - x.sin()).abs() < 2e-16);
            assert!((f64::from(c) - x.cos()).abs() < 2e-16);
        }
        let (s, c) = sin_cos(TwoFloat::from(1.0));
        let c_ref = TwoFloat::new_add(0.540_302_305_868_139_8, -4.760_954_612_604_417e-17);
        assert!(f64::from(c - c_ref).abs() < 1e-31, "{:e}", f64::from(c - c_ref));
        assert!(f64::from(s).abs() < 1.0);
    }

    #[test]
    fn grid_angle_endpoints() {
        assert_eq!(f64::from(grid_angle(0, 8)), -std::f64::consts::PI);
        assert_eq!(f64::from(grid_angle(4, 8)), 0.0);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
