//! Dense square complex matrices and a cyclic Jacobi eigensolver for the
//! Hermitian case.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense `n × n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds from row slices; panics if the rows are not square.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn map(&self, mut f: impl FnMut(usize, usize, Complex64) -> Complex64) -> Self {
        Self::from_fn(self.n, |i, j| f(i, j, self[(i, j)]))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(ZERO, |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M†|` over entries.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest `|i - j|` with a nonzero entry, or 0 for diagonal/zero matrices.
    pub fn bandwidth(&self, tol: f64) -> usize {
        let mut b = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if self[(i, j)].norm() > tol {
                    b = b.max(i.abs_diff(j));
                }
            }
        }
        b
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)] == ZERO))
    }

    /// Largest singular value, computed from the Jacobi spectrum of `M†M`.
    pub fn spectral_norm(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        if self.is_diagonal() {
            return self.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        // Prescaling keeps M†M away from under/overflow for tiny differences.
        let s = self.max_abs();
        if s == 0.0 {
            return 0.0;
        }
        let m = self.scale(Complex64::from(1.0 / s));
        let gram = m.adjoint().matmul(&m);
        let eig = jacobi_eigenvalues(&gram);
        s * eig.into_iter().fold(0.0, f64::max).max(0.0).sqrt()
    }
}

impl CMatrix {
    /// Power iteration on `M†M` for the largest singular value; cheap
    /// (`O(n²)` per step) when only a norm is needed.
    pub fn spectral_norm_estimate(&self, max_iter: usize, rel_tol: f64) -> f64 {
        let n = self.n;
        let s = self.max_abs();
        if n == 0 || s == 0.0 {
            return 0.0;
        }
        // Iterate on the stored nonzeros only; most operators here are banded.
        let nz: Vec<(usize, usize, Complex64)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let z = self[(i, j)];
                (z != ZERO).then_some((i, j, z))
            })
            .collect();
        // Deterministic start vector with no special symmetry.
        let mut v: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0 + (i as f64 * 0.618).sin() * 0.5, (i as f64 * 0.377).cos() * 0.5)).collect();
        let mut mv = vec![ZERO; n];
        let mut sigma = 0.0;
        for _ in 0..max_iter {
            let nv = vec_norm(&v);
            v.iter_mut().for_each(|z| *z /= nv);
            mv.iter_mut().for_each(|z| *z = ZERO);
            for &(i, j, z) in &nz {
                mv[i] += z * v[j];
            }
            let next = vec_norm(&mv);
            v.iter_mut().for_each(|z| *z = ZERO);
            for &(i, j, z) in &nz {
                v[j] += z.conj() * mv[i];
            }
            let converged = (next - sigma).abs() <= rel_tol * next;
            sigma = next;
            if converged {
                break;
            }
        }
        sigma
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Add<&CMatrix> for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        &self + rhs
    }
}

impl Sub<&CMatrix> for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        &self - rhs
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Eigen-decomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V diag(f(λ)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.vectors.dim();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(ZERO, |acc, k| acc + self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj())
        })
    }
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi rotations on a complex Hermitian matrix. Only the Hermitian
/// part of `a` is used.
pub fn jacobi_eigen(a: &CMatrix) -> HermitianEigen {
    let (values, vectors, sweeps) = jacobi_core(a, true);
    let vectors = vectors.expect("vectors requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let n = a.dim();
    let sorted_vectors = CMatrix::from_fn(n, |i, k| vectors[(i, order[k])]);
    HermitianEigen { values: order.iter().map(|&k| values[k]).collect(), vectors: sorted_vectors, sweeps }
}

/// Ascending eigenvalues only; skips the eigenvector accumulation.
pub fn jacobi_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let (mut values, _, _) = jacobi_core(a, false);
    values.sort_by(f64::total_cmp);
    values
}

fn jacobi_core(a: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>, usize) {
    let n = a.dim();
    // Symmetrize so tiny anti-Hermitian noise cannot stall convergence.
    let mut m = CMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let total = m.frobenius_norm();
    let mut sweeps = 0;
    if total == 0.0 {
        return (vec![0.0; n], v, 0);
    }
    while sweeps < MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total * 1e-2 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, v.as_mut(), p, q);
            }
        }
    }
    let values = (0..n).map(|i| m[(i, i)].re).collect();
    (values, v, sweeps)
}

/// Zeroes `m[p][q]` with the unitary `G = D R`, where `D` removes the phase
/// of `m[p][q]` and `R` is the real symmetric Jacobi rotation.
fn rotate(m: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let n = m.dim();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Below rounding relative to the diagonal: rotation would only add noise.
    if b <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / b; // e^{iφ}
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e_minus = phase.conj(); // e^{-iφ}
    // G_pp = c, G_pq = s, G_qp = -s e^{-iφ}, G_qq = c e^{-iφ}.
    let g_pp = Complex64::from(c);
    let g_pq = Complex64::from(s);
    let g_qp = -e_minus * s;
    let g_qq = e_minus * c;
    // M <- M G (columns p, q).
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    // M <- G† M (rows p, q).
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::from(m[(p, p)].re);
    m[(q, q)] = Complex64::from(m[(q, q)].re);
    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}

/// Euclidean norm of a coefficient vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum_is_sorted_diagonal() {
        let m = CMatrix::from_diagonal(&[c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(jacobi_eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_block_has_plus_minus_c() {
        let k = 2.5;
        let m = CMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, k)], &[c(0.0, -k), c(0.0, 0.0)]]);
        let eig = jacobi_eigen(&m);
        assert!((eig.values[0] + k).abs() < 1e-14);
        assert!((eig.values[1] - k).abs() < 1e-14);
        for idx in 0..2 {
            let v = eig.vector(idx);
            let mv = m.mul_vec(&v);
            let r: Vec<_> = mv.iter().zip(&v).map(|(a, b)| a - b * eig.values[idx]).collect();
            assert!(vec_norm(&r) < 1e-14);
        }
    }

    #[test]
    fn eigenvectors_are_unitary_on_random_hermitian() {
        let n = 12;
        let mut seed = 7_u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let raw = CMatrix::from_fn(n, |_, _| c(next(), next()));
        let h = &raw + &raw.adjoint();
        let eig = jacobi_eigen(&h);
        let v = &eig.vectors;
        let vv = v.adjoint().matmul(v);
        assert!((&vv - &CMatrix::identity(n)).max_abs() < 1e-13);
        let rebuilt = eig.apply_function(Complex64::from);
        assert!((&rebuilt - &h).max_abs() < 1e-13);
    }

    #[test]
    fn spectral_norm_of_scaled_identity() {
        let m = CMatrix::identity(4).scale(c(0.0, -3.0));
        assert!((m.spectral_norm() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn bandwidth_and_hermitian_residual() {
        let mut m = CMatrix::zeros(5);
        m[(3, 1)] = c(1.0, 1.0);
        m[(1, 3)] = c(1.0, -1.0);
        assert_eq!(m.bandwidth(0.0), 2);
        assert_eq!(m.hermitian_residual(), 0.0);
        m[(0, 0)] = c(0.0, 1.0);
        assert!((m.hermitian_residual() - 2.0).abs() < 1e-15);
    }
}
