//! Dense real symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

/// Default cap on matrix dimension for products and decompositions.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Sweep budget for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence: off-diagonal Frobenius norm below `JACOBI_TOL * max(1, ‖A‖_F)`.
pub const JACOBI_TOL: f64 = 1e-13;

/// Eigenvalues with `|λ| < ZERO_TOL * max(1, ‖A‖_F)` are classified as zero.
pub const ZERO_TOL: f64 = 1e-8;

/// Square symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds from row-major data; symmetry is checked exactly.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadShape {
                len: data.len(),
                expected: dim * dim,
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape {
                    len: row.len(),
                    expected: dim,
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Fills entry (i, j) and (j, i) from `f(i, j)` for `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let x = f(i, j);
                data[i * dim + j] = x;
                data[j * dim + i] = x;
            }
        }
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Kronecker product `self ⊗ other`: entry `(i·m + k, j·m + l)` is
    /// `self[i][j] · other[k][l]` where `m = other.dim()`.
    pub fn kronecker(&self, other: &Self, cap: usize) -> Result<Self> {
        let m = other.dim;
        let dim = self.dim.checked_mul(m).ok_or(Error::DimensionCap {
            dim: usize::MAX,
            cap,
        })?;
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let mut data = vec![0.0; dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..m {
                    let row = (i * m + k) * dim + j * m;
                    let src = other.row(k);
                    for (dst, b) in data[row..row + m].iter_mut().zip(src) {
                        *dst = a * b;
                    }
                }
            }
        }
        Ok(Self { dim, data })
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Row-major N×N; column j pairs with `eigenvalues[j]`.
    vectors: Vec<f64>,
    /// Frobenius norm of the decomposed matrix, kept for zero classification.
    scale: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `i` of eigenvector `j`.
    #[inline]
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.dim() + j]
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|i| self.vector_entry(i, j)).collect()
    }

    pub fn zero_threshold(&self) -> f64 {
        ZERO_TOL * self.scale.max(1.0)
    }

    pub fn is_zero(&self, lambda: f64) -> bool {
        lambda.abs() < self.zero_threshold()
    }

    /// Number of eigenvalues classified as zero.
    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| self.is_zero(**l))
            .count()
    }

    /// `max |UᵀU − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n)
                    .map(|i| self.vector_entry(i, a) * self.vector_entry(i, b))
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |U·diag(λ)·Uᵀ − A|`.
    pub fn reconstruction_error(&self, a: &SymmetricMatrix) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                let x: f64 = (0..n)
                    .map(|j| {
                        self.vector_entry(i, j) * self.eigenvalues[j] * self.vector_entry(k, j)
                    })
                    .sum();
                worst = worst.max((x - a.get(i, k)).abs());
            }
        }
        worst
    }

    /// `max |A·U − U·diag(λ)|`.
    pub fn residual_error(&self, a: &SymmetricMatrix) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let av: f64 = (0..n).map(|k| a.get(i, k) * self.vector_entry(k, j)).sum();
                worst = worst.max((av - self.eigenvalues[j] * self.vector_entry(i, j)).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues come back in descending order (ties keep the order the
/// iteration left them in). Each eigenvector is signed so that its
/// largest-magnitude component is positive.
pub fn eigen_symmetric(a: &SymmetricMatrix) -> Result<SpectralDecomposition> {
    eigen_symmetric_capped(a, DEFAULT_DIM_CAP)
}

pub fn eigen_symmetric_capped(a: &SymmetricMatrix, cap: usize) -> Result<SpectralDecomposition> {
    let n = a.dim;
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    let scale = a.frobenius_norm();
    let tol = JACOBI_TOL * scale.max(1.0);

    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * m[p * n + q] * m[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&m) < tol;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&m) < tol;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_norm(&m),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep iteration order
    order.sort_by(|&x, &y| m[y * n + y].total_cmp(&m[x * n + x]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (j, &k) in order.iter().enumerate() {
        let mut pivot = 0.0f64;
        for i in 0..n {
            let x = v[i * n + k];
            if x.abs() > pivot.abs() {
                pivot = x;
            }
        }
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[i * n + j] = sign * v[i * n + k];
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
        scale,
    })
}

/// One Jacobi rotation annihilating `m[p][q]`, accumulated into `v`.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        m[k * n + p] = new_p;
        m[p * n + k] = new_p;
        m[k * n + q] = new_q;
        m[q * n + k] = new_q;
    }
    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Diagonal of `|A − mu·I|` through the spectral decomposition:
/// `d[i] = Σ_j |λ_j − mu| · U[i][j]²`.
///
/// The sum runs over every column, so the result does not depend on the
/// choice of basis inside a degenerate eigenspace.
pub fn shifted_abs_diagonal(s: &SpectralDecomposition, mu: f64) -> Vec<f64> {
    let n = s.dim();
    let weights: Vec<f64> = s.eigenvalues.iter().map(|l| (l - mu).abs()).collect();
    (0..n)
        .map(|i| {
            let row = &s.vectors[i * n..(i + 1) * n];
            row.iter().zip(&weights).map(|(u, w)| w * u * u).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn kronecker_identity() {
        let i2 = SymmetricMatrix::identity(2);
        let k = i2.kronecker(&i2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(k, SymmetricMatrix::identity(4));
    }

    #[test]
    fn kronecker_block_layout() {
        let b = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let k = b.kronecker(&b, DEFAULT_DIM_CAP).unwrap();
        let expected = SymmetricMatrix::from_rows(&[
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn kronecker_scalar_one() {
        let a = SymmetricMatrix::from_rows(&[
            vec![0.5, -2.0, 3.0],
            vec![-2.0, 1.0, 0.0],
            vec![3.0, 0.0, 7.0],
        ])
        .unwrap();
        let one = SymmetricMatrix::identity(1);
        assert_eq!(a.kronecker(&one, DEFAULT_DIM_CAP).unwrap(), a);
        assert_eq!(one.kronecker(&a, DEFAULT_DIM_CAP).unwrap(), a);
    }

    #[test]
    fn kronecker_cap() {
        let a = SymmetricMatrix::identity(5);
        assert_eq!(
            a.kronecker(&a, 24),
            Err(Error::DimensionCap { dim: 25, cap: 24 })
        );
    }

    #[test]
    fn rejects_asymmetric() {
        let err = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { row: 0, col: 1 });
        assert!(matches!(
            SymmetricMatrix::from_row_major(2, vec![0.0; 3]),
            Err(Error::BadShape { .. })
        ));
    }

    #[test]
    fn eigen_identity() {
        let s = eigen_symmetric(&SymmetricMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigen_two_cycle() {
        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigen_symmetric(&a).unwrap();
        assert!(close(s.eigenvalues()[0], 1.0, 1e-14));
        assert!(close(s.eigenvalues()[1], -1.0, 1e-14));
    }

    #[test]
    fn eigen_golden_ratio() {
        let a = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigen_symmetric(&a).unwrap();
        let r5 = 5f64.sqrt();
        assert!(close(s.eigenvalues()[0], (1.0 + r5) / 2.0, 1e-14));
        assert!(close(s.eigenvalues()[1], (1.0 - r5) / 2.0, 1e-14));
        assert!(s.orthonormality_error() < 1e-14);
        assert!(s.residual_error(&a) < 1e-14);
    }

    #[test]
    fn eigen_empty_and_scalar() {
        let s = eigen_symmetric(&SymmetricMatrix::from_row_major(1, vec![-3.5]).unwrap()).unwrap();
        assert_eq!(s.eigenvalues(), &[-3.5]);
        assert_eq!(s.eigenvector(0), vec![1.0]);
    }

    #[test]
    fn eigen_cap() {
        let a = SymmetricMatrix::identity(4);
        assert_eq!(
            eigen_symmetric_capped(&a, 3),
            Err(Error::DimensionCap { dim: 4, cap: 3 })
        );
    }

    #[test]
    fn eigenvector_sign_convention() {
        let a = SymmetricMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let s = eigen_symmetric(&a).unwrap();
        for j in 0..3 {
            let v = s.eigenvector(j);
            let pivot = v
                .iter()
                .cloned()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(pivot > 0.0);
        }
        let w = s.eigenvalues();
        assert!(w[0] >= w[1] && w[1] >= w[2]);
    }

    #[test]
    fn shifted_abs_examples() {
        let s = eigen_symmetric(&SymmetricMatrix::identity(2)).unwrap();
        assert_eq!(shifted_abs_diagonal(&s, 0.0), vec![1.0, 1.0]);

        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = shifted_abs_diagonal(&eigen_symmetric(&a).unwrap(), 0.0);
        assert!(d.iter().all(|x| close(*x, 1.0, 1e-14)));

        let a = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = shifted_abs_diagonal(&eigen_symmetric(&a).unwrap(), 0.5);
        let half_r5 = 5f64.sqrt() / 2.0;
        assert!(d.iter().all(|x| close(*x, half_r5, 1e-14)));
    }

    #[test]
    fn zero_classification() {
        // rank-one all-ones: eigenvalues 3, 0, 0
        let a = SymmetricMatrix::from_fn(3, |_, _| 1.0);
        let s = eigen_symmetric(&a).unwrap();
        assert_eq!(s.zero_multiplicity(), 2);
        assert!(close(s.eigenvalues()[0], 3.0, 1e-13));
    }
}
