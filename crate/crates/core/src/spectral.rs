//! Dense symmetric linear algebra: Jacobi eigendecomposition, the smallest
//! eigenvalue restricted to the subspace orthogonal to the all-ones vector,
//! and Rayleigh quotients.
//!
//! Everything here operates on [`SymMatrix`], a dense symmetric matrix with
//! finite entries. Sizes are desk scale (n up to a few hundred); no sparse or
//! iterative solvers.

use crate::error::{Error, Result};

/// Dense symmetric matrix, row-major storage.
///
/// Symmetry and finiteness are enforced at construction; mutation goes
/// through [`SymMatrix::set`], which writes both mirror entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Build from explicit rows, checking squareness, symmetry and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(Error::invalid(format!("non-finite entry at ({i}, {j})")));
                }
                if rows[j][i] != v {
                    return Err(Error::invalid(format!(
                        "matrix not symmetric at ({i}, {j}): {v} vs {}",
                        rows[j][i]
                    )));
                }
                m.data[i * n + j] = v;
            }
        }
        Ok(m)
    }

    /// Build from a function of (i, j) with i <= j; the mirror entry is filled in.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Set entry (i, j) and its mirror (j, i).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().sum())
            .collect()
    }
}

/// Eigendecomposition of a symmetric matrix. `values` are ascending;
/// `vectors[k]` is the unit eigenvector paired with `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Knobs for the cyclic Jacobi iteration.
#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions {
    /// Converged when the off-diagonal Frobenius norm drops below
    /// `off_diag_tol * max(1, initial Frobenius norm)`.
    pub off_diag_tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            off_diag_tol: 1e-12,
            max_sweeps: 100,
        }
    }
}

/// Full eigendecomposition with default Jacobi options.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenDecomposition> {
    eig_sym_with(m, &JacobiOptions::default())
}

/// Cyclic Jacobi rotations on a working copy of `m`.
///
/// Eigenvalues come back sorted ascending with matching orthonormal
/// eigenvectors. Fails only if the off-diagonal mass does not fall below
/// tolerance within `max_sweeps` sweeps, which does not happen for finite
/// symmetric input at desk scale.
pub fn eig_sym_with(m: &SymMatrix, opts: &JacobiOptions) -> Result<EigenDecomposition> {
    let n = m.n;
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut a = m.data.clone();
    // Eigenvector accumulator, column k is the k-th eigenvector.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let scale = m.frobenius_norm().max(1.0);
    let threshold = opts.off_diag_tol * scale;

    let mut converged = false;
    for _ in 0..opts.max_sweeps {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Stable rotation choice from the classic Jacobi scheme.
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e100 {
                    // Degenerate slope; rotation angle ~ 1/(2 theta).
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;

                a[p * n + p] = app - h;
                a[q * n + q] = aqq + h;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a[j * n + p];
                    let ajq = a[j * n + q];
                    a[j * n + p] = ajp - s * (ajq + tau * ajp);
                    a[p * n + j] = a[j * n + p];
                    a[j * n + q] = ajq + s * (ajp - tau * ajq);
                    a[q * n + j] = a[j * n + q];
                }
                for j in 0..n {
                    let vjp = v[j * n + p];
                    let vjq = v[j * n + q];
                    v[j * n + p] = vjp - s * (vjq + tau * vjp);
                    v[j * n + q] = vjq + s * (vjp - tau * vjq);
                }
            }
        }
    }
    if !converged {
        // One final check: the last sweep may have pushed us under tolerance.
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * s).sqrt() > threshold {
            return Err(Error::Numerical(format!(
                "Jacobi iteration did not converge in {} sweeps (n = {n})",
                opts.max_sweeps
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Second-smallest eigenvalue.
pub fn lambda2(m: &SymMatrix) -> Result<f64> {
    if m.n < 2 {
        return Err(Error::invalid(format!(
            "lambda2 needs n >= 2, got n = {}",
            m.n
        )));
    }
    Ok(eig_sym(m)?.values[1])
}

/// Smallest eigenvalue of `m`.
pub fn lambda_min(m: &SymMatrix) -> Result<f64> {
    if m.n == 0 {
        return Err(Error::invalid("lambda_min of empty matrix"));
    }
    Ok(eig_sym(m)?.values[0])
}

/// Smallest eigenvalue of a Laplacian restricted to the subspace orthogonal
/// to the all-ones vector: `min { v' L v : ||v|| = 1, v ⊥ 1 }`.
///
/// Computed exactly as the minimum eigenvalue of `Q' L Q`, where the columns
/// of `Q` are the Householder basis of the orthogonal complement of `1`. For
/// signed graphs the value can be negative, and eigenvalue 0 (the kernel
/// vector `1`) need not be the smallest, which is why the projection is
/// explicit rather than inferred from eigenvector angles.
pub fn lambda_one_perp(l: &SymMatrix) -> Result<f64> {
    let n = l.n;
    if n < 2 {
        return Err(Error::invalid(format!(
            "lambda_one_perp needs n >= 2, got n = {n}"
        )));
    }
    let tol = 1e-8 * l.frobenius_norm().max(1.0);
    for (i, s) in l.row_sums().iter().enumerate() {
        if s.abs() > tol {
            return Err(Error::invalid(format!(
                "not a Laplacian: row {i} sums to {s}, tolerance {tol}"
            )));
        }
    }

    // Householder reflector H = I - 2 u u' / (u'u) with u = 1/sqrt(n) - e_0
    // maps e_0 to 1/sqrt(n); its remaining columns span the complement of 1.
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut u = vec![inv_sqrt_n; n];
    u[0] -= 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    // q[i][c] = H[i][c+1] for c in 0..n-1
    let q = |i: usize, c: usize| -> f64 {
        let delta = if i == c + 1 { 1.0 } else { 0.0 };
        delta - 2.0 * u[i] * u[c + 1] / uu
    };

    // B = Q' L Q, (n-1) x (n-1), built column by column.
    let m = n - 1;
    let mut lq = vec![0.0; n * m]; // (L Q)[i][c]
    for c in 0..m {
        let col: Vec<f64> = (0..n).map(|i| q(i, c)).collect();
        let lcol = l.mul_vec(&col);
        for i in 0..n {
            lq[i * m + c] = lcol[i];
        }
    }
    let mut b = SymMatrix::zeros(m);
    for r in 0..m {
        for c in r..m {
            let mut s = 0.0;
            for i in 0..n {
                s += q(i, r) * lq[i * m + c];
            }
            b.set(r, c, s);
        }
    }
    lambda_min(&b)
}

/// Rayleigh quotient `v' M v / v' v`.
pub fn rayleigh(m: &SymMatrix, v: &[f64]) -> Result<f64> {
    if v.len() != m.n {
        return Err(Error::invalid(format!(
            "vector length {} does not match matrix size {}",
            v.len(),
            m.n
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite entry in vector"));
    }
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv == 0.0 {
        return Err(Error::invalid("Rayleigh quotient of the zero vector"));
    }
    Ok(m.quadratic_form(v) / vv)
}

/// `sum_{i<j} W_ij (v_i - v_j)^2` for a symmetric weight matrix `w`.
///
/// With `w` a graph adjacency this equals `v' L v`; with the positive or
/// negative part of the weights it gives the signed Rayleigh numerators.
pub fn weighted_difference_form(w: &SymMatrix, v: &[f64]) -> f64 {
    assert_eq!(v.len(), w.n);
    let n = w.n;
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = v[i] - v[j];
            s += w.get(i, j) * d * d;
        }
    }
    s
}
