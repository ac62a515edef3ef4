//! Computable fragments of the covering argument: the grouped projection
//! seminorm, the Maurey empirical sparsification sampler, an exact
//! Rademacher-chaos moment by sign enumeration, and the scalar inequality
//! used to convert a squared deviation bound into a plain one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::simplex::ComplexMatrix;

/// Sign-pattern enumeration cap for the exact chaos moment.
pub const CHAOS_M_MAX: usize = 14;
pub const CHAOS_S_MAX: usize = 4;

/// A real k-sparse unit vector. The sparsity bound k is carried explicitly
/// because the sampler's zero-probability depends on k, not on the actual
/// support size.
#[derive(Debug, Clone)]
pub struct SparseUnitVector {
    dim: usize,
    support: Vec<usize>,
    values: Vec<f64>,
    k: usize,
}

impl SparseUnitVector {
    pub fn new(dim: usize, support: Vec<usize>, values: Vec<f64>, k: usize) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch(support.len(), values.len()));
        }
        if support.len() > k || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "support size {} exceeds sparsity bound {k}",
                support.len()
            )));
        }
        let mut seen = support.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != support.len() || seen.last().map_or(false, |&i| i >= dim) {
            return Err(Error::InvalidParameter(
                "support indices must be distinct and within the dimension".into(),
            ));
        }
        let norm_sq: f64 = values.iter().map(|v| v * v).sum();
        if !norm_sq.is_finite() || (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "vector norm {} is not 1 within 1e-12",
                norm_sq.sqrt()
            )));
        }
        Ok(SparseUnitVector { dim, support, values, k })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sparsity(&self) -> usize {
        self.k
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}

fn check_grouping(m: &ComplexMatrix, alphas_per_group: usize) -> Result<usize> {
    if alphas_per_group == 0 || m.rows() % alphas_per_group != 0 {
        return Err(Error::InvalidParameter(format!(
            "{} rows cannot be grouped by {alphas_per_group}",
            m.rows()
        )));
    }
    Ok(m.rows() / alphas_per_group)
}

/// The grouped projection seminorm: the 2s-th root of
/// sum over groups t of (sum over rows alpha in t of |<M_{t,alpha}, v>|^2)^s.
/// Rows are grouped consecutively, `alphas_per_group` rows per group.
pub fn xprime_norm(m: &ComplexMatrix, alphas_per_group: usize, s: usize, v: &[f64]) -> Result<f64> {
    let groups = check_grouping(m, alphas_per_group)?;
    if s < 1 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    if v.len() != m.cols() {
        return Err(Error::LengthMismatch(v.len(), m.cols()));
    }
    // Row projections <M_{r,.}, v> accumulated column by column to respect
    // the column-major layout.
    let mut proj = vec![num_complex::Complex64::new(0.0, 0.0); m.rows()];
    for c in 0..m.cols() {
        let col = m.col(c);
        let x = v[c];
        if x == 0.0 {
            continue;
        }
        for (p, entry) in proj.iter_mut().zip(col) {
            *p += entry.conj() * x;
        }
    }
    let mut total = 0.0;
    for t in 0..groups {
        let group_sq: f64 = proj[t * alphas_per_group..(t + 1) * alphas_per_group]
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        total += group_sq.powi(s as i32);
    }
    Ok(total.powf(1.0 / (2.0 * s as f64)))
}

/// One Maurey draw: Z = (sqrt(k)/m) sum of m i.i.d. Z_i, where each Z_i is
/// zero with probability 1 - ||x'||_1 and sgn(x'_j) e_j with probability
/// |x'_j| otherwise, for x' = x / sqrt(k). E[Z] = x.
pub fn maurey_sample(x: &SparseUnitVector, m: usize, seed: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let sqrt_k = (x.k as f64).sqrt();
    let xprime: Vec<f64> = x.values.iter().map(|v| v / sqrt_k).collect();
    let l1: f64 = xprime.iter().map(|v| v.abs()).sum();
    debug_assert!(l1 <= 1.0 + 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; x.dim];
    let scale = sqrt_k / m as f64;
    for _ in 0..m {
        let u: f64 = rng.gen_range(0.0..1.0);
        if u >= l1 {
            continue;
        }
        let mut acc = 0.0;
        for (&idx, &xp) in x.support.iter().zip(&xprime) {
            acc += xp.abs();
            if u < acc {
                z[idx] += xp.signum() * scale;
                break;
            }
        }
    }
    Ok(z)
}

#[derive(Debug, Clone)]
pub struct CoveringCurve {
    /// (m, Monte Carlo mean of the seminorm of Z - x).
    pub points: Vec<(usize, f64)>,
    /// c * |T|^{1/2s} * sqrt(4qks/m) with c fitted at the largest m.
    pub envelope: Vec<f64>,
    pub fitted_constant: f64,
}

/// Mean sparsification error in the grouped seminorm as a function of the
/// number of Maurey summands m. Trials use derived per-trial seeds and are
/// order-independent.
pub fn covering_error_curve(
    x: &SparseUnitVector,
    m_mat: &ComplexMatrix,
    alphas_per_group: usize,
    s: usize,
    m_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<CoveringCurve> {
    let groups = check_grouping(m_mat, alphas_per_group)?;
    if m_values.is_empty() || trials == 0 {
        return Err(Error::InvalidParameter("need at least one m value and one trial".into()));
    }
    let dense = x.to_dense();
    let mut points = Vec::with_capacity(m_values.len());
    for (mi, &m) in m_values.iter().enumerate() {
        let per_m_seed = derive_seed(seed, mi as u64);
        let errors: Result<Vec<f64>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let z = maurey_sample(x, m, derive_seed(per_m_seed, trial as u64))?;
                let diff: Vec<f64> = z.iter().zip(&dense).map(|(a, b)| a - b).collect();
                xprime_norm(m_mat, alphas_per_group, s, &diff)
            })
            .collect();
        let errors = errors?;
        points.push((m, errors.iter().sum::<f64>() / trials as f64));
    }

    let q = alphas_per_group as f64 + 1.0;
    let shape = |m: usize| {
        (groups as f64).powf(1.0 / (2.0 * s as f64))
            * (4.0 * q * x.k as f64 * s as f64 / m as f64).sqrt()
    };
    let (m_last, err_last) = *points
        .iter()
        .max_by_key(|&&(m, _)| m)
        .expect("points is nonempty");
    let fitted_constant = if shape(m_last) > 0.0 { err_last / shape(m_last) } else { 0.0 };
    let envelope = points.iter().map(|&(m, _)| fitted_constant * shape(m)).collect();
    Ok(CoveringCurve { points, envelope, fitted_constant })
}

/// Smallest e such that every entry times 2^e is an integer, or None.
fn dyadic_scale(a: &[f64], max_exp: u32) -> Option<u32> {
    let mut e = 0u32;
    for &x in a {
        if !x.is_finite() {
            return None;
        }
        let mut xe = 0u32;
        while (x * (1u64 << xe) as f64).fract() != 0.0 {
            xe += 1;
            if xe > max_exp {
                return None;
            }
        }
        e = e.max(xe);
    }
    Some(e)
}

/// Exact s-th moment of the Rademacher quadratic form sum a_ij e_i e_j by
/// enumerating all 2^m sign patterns in integer arithmetic. The grid is
/// required to be dyadic so the common-denominator lift is exact.
pub fn chaos_moment_exact(a: &[f64], m: usize, s: usize) -> Result<f64> {
    if a.len() != m * m {
        return Err(Error::LengthMismatch(a.len(), m * m));
    }
    if m == 0 || m > CHAOS_M_MAX || s == 0 || s > CHAOS_S_MAX {
        return Err(Error::BudgetExceeded(format!(
            "chaos moment limited to 1 <= m <= {CHAOS_M_MAX}, 1 <= s <= {CHAOS_S_MAX}"
        )));
    }
    let e = dyadic_scale(a, 20).ok_or_else(|| {
        Error::InvalidParameter("coefficients must be dyadic with scale at most 2^20".into())
    })?;
    let scale = (1u64 << e) as f64;
    let grid: Vec<i128> = a.iter().map(|&x| (x * scale) as i128).collect();

    let mut total: i128 = 0;
    for pattern in 0u32..1 << m {
        let sign = |i: usize| if pattern >> i & 1 == 1 { -1i128 } else { 1i128 };
        let mut form: i128 = 0;
        for i in 0..m {
            for j in 0..m {
                form += grid[i * m + j] * sign(i) * sign(j);
            }
        }
        let mut power: i128 = 1;
        for _ in 0..s {
            power = power
                .checked_mul(form)
                .ok_or_else(|| Error::BudgetExceeded("chaos moment overflows".into()))?;
        }
        total = total
            .checked_add(power)
            .ok_or_else(|| Error::BudgetExceeded("chaos moment overflows".into()))?;
    }
    Ok(total as f64 / (1u64 << m) as f64 / scale.powi(s as i32))
}

/// Whether a * (a/(1+a))^{1/(1+mu)} <= delta^{(2+mu)/(1+mu)} / 4. When this
/// hypothesis holds, a <= delta follows.
pub fn delta_sqr_check(a: f64, mu: f64, delta: f64) -> Result<bool> {
    if !(a > 0.0) || !(0.0..=1.0).contains(&mu) || !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need a > 0, mu in [0,1], delta in (0,1]; got a={a}, mu={mu}, delta={delta}"
        )));
    }
    let lhs = a * (a / (1.0 + a)).powf(1.0 / (1.0 + mu));
    let rhs = delta.powf((2.0 + mu) / (1.0 + mu)) / 4.0;
    Ok(lhs <= rhs)
}
