//! Symmetric tridiagonal eigensolver: implicit-shift QL with optional
//! eigenvector accumulation.

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column-major eigenvectors (`vectors[j]` belongs to `values[j]`),
    /// present when requested.
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// Diagonalize the matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows i and i+1).
pub fn eigen(diag: &[f64], off: &[f64], with_vectors: bool) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::Empty("tridiagonal matrix"));
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidParameter {
            name: "offdiag",
            reason: format!("expected {} entries, got {}", n - 1, off.len()),
        });
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[row][col], columns become eigenvectors
    let mut z: Vec<Vec<f64>> = if with_vectors {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if with_vectors {
                    for row in z.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = with_vectors.then(|| {
        order
            .iter()
            .map(|&j| (0..n).map(|i| z[i][j]).collect())
            .collect()
    });
    Ok(TridiagEigen { values, vectors })
}

/// ‖T v − λ v‖₂ for a unit vector v.
pub fn residual_norm(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut tv = diag[i] * v[i];
        if i > 0 {
            tv += off[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            tv += off[i] * v[i + 1];
        }
        let r = tv - lambda * v[i];
        acc += r * r;
    }
    acc.sqrt()
}

/// Infinity norm (max absolute row sum).
pub fn inf_norm(diag: &[f64], off: &[f64]) -> f64 {
    (0..diag.len())
        .map(|i| {
            let mut s = diag[i].abs();
            if i > 0 {
                s += off[i - 1].abs();
            }
            if i < off.len() {
                s += off[i].abs();
            }
            s
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let r = eigen(&[1.0, 3.0], &[1.0], true).unwrap();
        let expect = [2.0 - 2f64.sqrt(), 2.0 + 2f64.sqrt()];
        for (a, b) in r.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let vecs = r.vectors.unwrap();
        for (j, v) in vecs.iter().enumerate() {
            assert!(residual_norm(&[1.0, 3.0], &[1.0], r.values[j], v) < 1e-14);
        }
    }

    #[test]
    fn diagonal_and_single() {
        let r = eigen(&[3.0, -1.0, 2.0], &[0.0, 0.0], false).unwrap();
        assert_eq!(r.values, vec![-1.0, 2.0, 3.0]);
        let r = eigen(&[5.0], &[], true).unwrap();
        assert_eq!(r.values, vec![5.0]);
        assert!(eigen(&[], &[], false).is_err());
        assert!(eigen(&[1.0, 2.0], &[], false).is_err());
    }

    #[test]
    fn laplacian_closed_form() {
        let n = 40;
        let d = vec![2.0; n];
        let o = vec![-1.0; n - 1];
        let r = eigen(&d, &o, false).unwrap();
        for (k, v) in r.values.iter().enumerate() {
            let th = (k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            assert!((v - (2.0 - 2.0 * th.cos())).abs() < 1e-13);
        }
    }
}
