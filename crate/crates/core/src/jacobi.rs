//! Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
//!
//! The supports handed to the RIP computation have dimension k of at most a
//! dozen or so, where Jacobi is simple, deterministic, and accurate. Sweeps
//! stop once the off-diagonal Frobenius norm drops below 1e-12, with a cap
//! of 50 sweeps.

pub const OFF_DIAG_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 50;

fn off_diag_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of the symmetric n x n matrix `a` (row-major, consumed).
pub fn eigenvalues_sym(a: &mut [f64], n: usize) -> Vec<f64> {
    let (vals, _) = eigen_sym(a, n, false);
    vals
}

/// Eigenvalues and (optionally) eigenvectors. Eigenvectors are returned as a
/// row-major n x n matrix whose column j is the eigenvector of eigenvalue j.
/// Output order is ascending by eigenvalue with index tiebreak, so results
/// are schedule-independent.
pub fn eigen_sym(a: &mut [f64], n: usize, want_vectors: bool) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; if want_vectors { n * n } else { 0 }];
    if want_vectors {
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    if n <= 1 {
        let vals = if n == 1 { vec![a[0]] } else { vec![] };
        return (vals, v);
    }

    for _ in 0..MAX_SWEEPS {
        if off_diag_norm(a, n) < OFF_DIAG_TOL {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < OFF_DIAG_TOL / (n as f64) {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation angle annihilating a[p][q].
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap()
            .then(i.cmp(&j))
    });
    let vals: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vecs = if want_vectors {
        let mut out = vec![0.0; n * n];
        for (new_j, &old_j) in order.iter().enumerate() {
            for k in 0..n {
                out[k * n + new_j] = v[k * n + old_j];
            }
        }
        out
    } else {
        v
    };
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_known() {
        // [[1,1],[1,1]] has eigenvalues 0 and 2.
        let mut a = vec![1.0, 1.0, 1.0, 1.0];
        let vals = eigenvalues_sym(&mut a, 2);
        assert!((vals[0] - 0.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_passthrough() {
        let mut a = vec![3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let vals = eigenvalues_sym(&mut a, 3);
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn reconstruction_from_eigenpairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.gen_range(2..9);
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let x: f64 = rng.gen_range(-2.0..2.0);
                    a[i * n + j] = x;
                    a[j * n + i] = x;
                }
            }
            let orig = a.clone();
            let (vals, vecs) = eigen_sym(&mut a, n, true);
            // A = V diag(vals) V^T.
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for k in 0..n {
                        acc += vecs[i * n + k] * vals[k] * vecs[j * n + k];
                    }
                    assert!((acc - orig[i * n + j]).abs() < 1e-9, "n={n} entry ({i},{j})");
                }
            }
            // Trace check.
            let trace: f64 = (0..n).map(|i| orig[i * n + i]).sum();
            let sum: f64 = vals.iter().sum();
            assert!((trace - sum).abs() < 1e-9);
        }
    }
}
