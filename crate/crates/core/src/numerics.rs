//! Dense complex linear algebra at desk scale, seeded randomness, and the
//! residual checks every other module builds on.
//!
//! Matrices here are small (d ≤ ~20) and dense; nothing in this crate needs
//! sparse storage or an external LAPACK.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Absolute tolerance for residual comparisons throughout the crate.
/// Dense arithmetic at d ≤ ~12 stays far under this.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// A dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::Dimension {
                    context: "matrix row length",
                    expected: ncols,
                    got: row.len(),
                });
            }
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    /// Entrywise complex conjugate.
    pub fn conjugated(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                context: "matrix product inner dimension",
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.at(r, c) + a * rhs.at(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                context: "matrix-vector product",
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
            })
            .collect())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                context: "matrix difference shape",
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }
}

/// Inner product ⟨a|b⟩ = Σᵢ conj(aᵢ)·bᵢ.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Max-norm of M†M − I; zero exactly when `m` is unitary.
pub fn unitarity_residual(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension {
            context: "unitarity residual (square matrix required)",
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let gram = m.adjoint().mul(m)?;
    gram.max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

/// A 64-bit seed for a deterministic random stream: same seed, same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }

    /// Derives an independent child seed by fixed splitting; used so that
    /// per-item streams never alias the master stream.
    pub fn child(self, index: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(index)))
    }
}

/// Haar-distributed random unitary: QR-style orthonormalization of a complex
/// Gaussian matrix. Gram–Schmidt with a second re-orthogonalization pass keeps
/// the residual at machine precision; the positive-diagonal normalization it
/// implies makes the distribution Haar.
pub fn random_unitary(d: usize, seed: Seed) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::Dimension {
            context: "random unitary dimension",
            expected: 1,
            got: 0,
        });
    }
    let mut rng = seed.rng();
    let gauss_column = |rng: &mut ChaCha12Rng| -> Vec<Complex64> {
        (0..d)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) / 2f64.sqrt()
            })
            .collect()
    };
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gauss_column(&mut rng);
        for _pass in 0..2 {
            for q in &cols {
                let proj = inner(q, &v);
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-8 {
            // A numerically dependent draw; discard and redraw.
            continue;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        cols.push(v);
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| cols[c][r]))
}

/// Uniform sample from the probability simplex of dimension `d`
/// (normalized exponentials).
pub fn random_prob_dist(d: usize, seed: Seed) -> Result<crate::quantum::ProbDist> {
    if d == 0 {
        return Err(Error::Dimension {
            context: "simplex dimension",
            expected: 1,
            got: 0,
        });
    }
    let mut rng = seed.rng();
    let mut vals: Vec<f64> = (0..d)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = vals.iter().sum();
    for v in vals.iter_mut() {
        *v /= total;
    }
    crate::quantum::ProbDist::new(vals)
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Used only for validating input density matrices; observables enter the
/// crate as eigenbases, never as operators to be diagonalized.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension {
            context: "hermitian eigenvalues (square matrix required)",
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let scale = a.max_abs().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.at(p, q).norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                let beta = apq.norm();
                if beta <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / beta;
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                let theta = 0.5 * (2.0 * beta).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // U restricted to (p, q): [[c, -s],[s e^{-iφ}, c e^{-iφ}]]
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(-s, 0.0);
                let uqp = phase.conj() * s;
                let uqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, akp * upp + akq * uqp);
                    a.set(k, q, akp * upq + akq * uqq);
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, upp.conj() * apk + uqp.conj() * aqk);
                    a.set(q, k, upq.conj() * apk + uqq.conj() * aqk);
                }
            }
        }
    }
    Ok((0..n).map(|i| a.at(i, i).re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn residual_of_identity_is_zero() {
        assert_eq!(unitarity_residual(&ComplexMatrix::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn residual_of_diagonal_phases_is_zero() {
        let phi = std::f64::consts::PI / 3.0;
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), Complex64::from_polar(1.0, phi)],
        ])
        .unwrap();
        assert!(unitarity_residual(&m).unwrap() < 1e-15);
    }

    #[test]
    fn residual_of_rank_deficient_matrix() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!((unitarity_residual(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(unitarity_residual(&m).is_err());
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        for d in 1..=8 {
            for s in 0..100u64 {
                let u = random_unitary(d, Seed(s)).unwrap();
                assert!(unitarity_residual(&u).unwrap() <= 1e-12, "d={d} s={s}");
            }
        }
        let a = random_unitary(3, Seed(7)).unwrap();
        let b = random_unitary(3, Seed(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_unitary_d1_is_a_phase() {
        let u = random_unitary(1, Seed(11)).unwrap();
        assert!((u.at(0, 0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_unitary_rejects_zero_dimension() {
        assert!(random_unitary(0, Seed(0)).is_err());
    }

    #[test]
    fn unistochastic_rows_and_columns() {
        for s in 0..10u64 {
            let u = random_unitary(5, Seed(s)).unwrap();
            for i in 0..5 {
                let row: f64 = (0..5).map(|j| u.at(i, j).norm_sqr()).sum();
                let col: f64 = (0..5).map(|j| u.at(j, i).norm_sqr()).sum();
                assert!((row - 1.0).abs() <= 1e-12);
                assert!((col - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn simplex_sample_contract() {
        let p = random_prob_dist(1, Seed(1)).unwrap();
        assert_eq!(p.values(), &[1.0]);
        let p = random_prob_dist(3, Seed(5)).unwrap();
        assert!((p.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(p.values().iter().all(|&v| v >= 0.0));
        let a = random_prob_dist(2, Seed(9)).unwrap();
        let b = random_prob_dist(2, Seed(9)).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(random_prob_dist(0, Seed(0)).is_err());
    }

    #[test]
    fn seed_children_differ() {
        let s = Seed(42);
        assert_ne!(s.child(0), s.child(1));
        assert_eq!(s.child(3), s.child(3));
    }

    #[test]
    fn jacobi_matches_2x2_closed_form() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.7, 0.0), c(0.2, 0.3)],
            vec![c(0.2, -0.3), c(0.3, 0.0)],
        ])
        .unwrap();
        let mut ev = hermitian_eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = 0.5;
        let rad = (0.2f64 * 0.2 + (0.2f64 * 0.2 + 0.3 * 0.3)).sqrt();
        assert!((ev[0] - (mid - rad)).abs() < 1e-12);
        assert!((ev[1] - (mid + rad)).abs() < 1e-12);
    }

    #[test]
    fn jacobi_preserves_trace_and_frobenius() {
        let u = random_unitary(5, Seed(3)).unwrap();
        // Hermitian with known spectrum: U diag(v) U†.
        let vals = [0.4, 0.3, 0.15, 0.1, 0.05];
        let mut d = ComplexMatrix::zeros(5, 5);
        for i in 0..5 {
            d.set(i, i, c(vals[i], 0.0));
        }
        let h = u.mul(&d).unwrap().mul(&u.adjoint()).unwrap();
        let mut ev = hermitian_eigenvalues(&h).unwrap();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in ev.iter().zip(vals) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }
}
