//! The matrix of finite-field linear forms, row subsampling, and RIP-2
//! constants of complex matrices.
//!
//! The RIP constant of order k is defined through the Gram operator: it is
//! the maximum over k-column supports S of max(lambda_max(G_S) - 1,
//! 1 - lambda_min(G_S)) for the normalized Gram submatrix G_S. This is
//! equivalent to the two-sided bound over unit vectors, and restricting to
//! real test vectors is valid exactly when the Gram is real — which is
//! checked at runtime on every Gram entry used, not assumed.
//!
//! Exact mode enumerates all supports; sampled mode reports a lower bound
//! from randomly seeded supports refined by greedy single-column swaps, and
//! is tagged as such so downstream implications cannot mistake it for a
//! certificate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{binomial, message_vector};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::jacobi::eigenvalues_sym;
use crate::seed::derive_seed;
use crate::simplex::{ComplexMatrix, LabelMatrix};

/// Cap on q^ktilde for constructing linear-form matrices.
pub const LIN_BUDGET: u64 = 1 << 13;
/// Cap on the number of supports enumerated in exact mode.
pub const SUPPORT_BUDGET: u64 = 10_000_000;
/// Tolerance for the real-Gram hypothesis and for reported deltas.
pub const GRAM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RipMethod {
    Exact,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct RipReport {
    pub k: usize,
    pub delta: f64,
    pub witness_support: Vec<usize>,
    pub method: RipMethod,
    pub supports_examined: u64,
}

/// A multiset of row indices into GF(q)^ktilde; duplicates allowed.
#[derive(Debug, Clone)]
pub struct SampledRows {
    pub indices: Vec<u64>,
    pub seed: u64,
}

fn check_lin_budget(spec: &FieldSpec, ktilde: usize) -> Result<u64> {
    (spec.q() as u64)
        .checked_pow(ktilde as u32)
        .filter(|&n| n <= LIN_BUDGET)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "q^ktilde = {}^{} exceeds {}",
                spec.q(),
                ktilde,
                LIN_BUDGET
            ))
        })
}

/// The N x N label matrix with entry (x, y) = <x, y> over GF(q)^ktilde,
/// messages in label order. Symmetric; row and column 0 are all zeros.
pub fn lin_matrix(spec: &FieldSpec, ktilde: usize) -> Result<LabelMatrix> {
    let n = check_lin_budget(spec, ktilde)? as usize;
    let q = spec.q();
    let vectors: Vec<Vec<u16>> = (0..n as u64).map(|i| message_vector(i, ktilde, q)).collect();
    let mut data = vec![0u16; n * n];
    for x in 0..n {
        for y in x..n {
            let v = spec.inner_product_labels(&vectors[x], &vectors[y]);
            data[x * n + y] = v;
            data[y * n + x] = v;
        }
    }
    Ok(LabelMatrix { rows: n, cols: n, data })
}

/// i.i.d. uniform row indices with replacement from a seeded stream.
pub fn sample_rows(spec: &FieldSpec, ktilde: usize, size: usize, seed: u64) -> Result<SampledRows> {
    let n = check_lin_budget(spec, ktilde)?;
    if size == 0 {
        return Err(Error::InvalidParameter("sample size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = (0..size).map(|_| rng.gen_range(0..n)).collect();
    Ok(SampledRows { indices, seed })
}

/// phi(Lin_T): shape (q-1)|T| x q^ktilde, rows grouped per t in T as the q-1
/// encoding coordinates; column x is the encoding of the word (<t, x>)_{t in T}.
pub fn phi_lin_sub(spec: &FieldSpec, ktilde: usize, rows: &[u64]) -> Result<ComplexMatrix> {
    let n = check_lin_budget(spec, ktilde)? as usize;
    if rows.is_empty() {
        return Err(Error::InvalidParameter("row multiset is empty".into()));
    }
    let q = spec.q();
    let block = q as usize - 1;
    let roots = crate::simplex::roots_of_unity(q);
    let mut out = ComplexMatrix::zeros(rows.len() * block, n)?;
    let col_vectors: Vec<Vec<u16>> = (0..n as u64).map(|i| message_vector(i, ktilde, q)).collect();
    let row_vectors: Vec<Vec<u16>> = rows
        .iter()
        .map(|&t| message_vector(t, ktilde, q))
        .collect();
    for x in 0..n {
        let col = out.col_mut(x);
        for (ti, tvec) in row_vectors.iter().enumerate() {
            let label = spec.inner_product_labels(tvec, &col_vectors[x]) as usize;
            for alpha in 1..q as usize {
                col[ti * block + alpha - 1] = roots[label * alpha % q as usize];
            }
        }
    }
    Ok(out)
}

/// Lazy normalized Gram over the columns of a complex matrix. Every entry
/// actually computed is checked against the real-Gram hypothesis.
struct ColumnGram<'a> {
    m: &'a ComplexMatrix,
    inv_norm_sq: f64,
}

impl<'a> ColumnGram<'a> {
    fn new(m: &'a ComplexMatrix, normalizer: f64) -> Result<Self> {
        if !(normalizer > 0.0 && normalizer.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "column normalizer {normalizer} must be positive"
            )));
        }
        Ok(ColumnGram {
            m,
            inv_norm_sq: 1.0 / (normalizer * normalizer),
        })
    }

    fn entry(&self, i: usize, j: usize) -> Result<f64> {
        let dot: num_complex::Complex64 = self
            .m
            .col(i)
            .iter()
            .zip(self.m.col(j))
            .map(|(a, b)| a * b.conj())
            .sum();
        let g = dot * self.inv_norm_sq;
        if g.im.abs() > GRAM_TOL {
            return Err(Error::NonRealGram(g.im.abs()));
        }
        Ok(g.re)
    }

    /// Gram submatrix of a sorted support, row-major k x k.
    fn submatrix(&self, support: &[usize]) -> Result<Vec<f64>> {
        let k = support.len();
        let mut sub = vec![0.0; k * k];
        for a in 0..k {
            for b in a..k {
                let g = self.entry(support[a], support[b])?;
                sub[a * k + b] = g;
                sub[b * k + a] = g;
            }
        }
        Ok(sub)
    }
}

fn delta_of_submatrix(sub: &mut [f64], k: usize) -> f64 {
    let vals = eigenvalues_sym(sub, k);
    let lo = vals.first().copied().unwrap_or(1.0);
    let hi = vals.last().copied().unwrap_or(1.0);
    (hi - 1.0).max(1.0 - lo).max(0.0)
}

fn support_delta(gram: &ColumnGram, support: &[usize]) -> Result<f64> {
    let mut sub = gram.submatrix(support)?;
    Ok(delta_of_submatrix(&mut sub, support.len()))
}

fn check_order(k: usize, cols: usize) -> Result<()> {
    if k < 1 || k > cols {
        return Err(Error::InvalidParameter(format!(
            "order k = {k} outside [1, {cols}]"
        )));
    }
    Ok(())
}

/// Exact RIP constant by exhaustive support enumeration. The witness is the
/// lexicographically least achieving support.
pub fn rip_constant_exact(m: &ComplexMatrix, k: usize, normalizer: f64) -> Result<RipReport> {
    let cols = m.cols();
    check_order(k, cols)?;
    if binomial(cols as u64, k as u64) > SUPPORT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "C({cols}, {k}) exceeds {SUPPORT_BUDGET} supports"
        )));
    }
    let gram = ColumnGram::new(m, normalizer)?;
    let mut support: Vec<usize> = (0..k).collect();
    let mut best = f64::NEG_INFINITY;
    let mut witness = support.clone();
    let mut examined = 0u64;
    loop {
        let d = support_delta(&gram, &support)?;
        examined += 1;
        if d > best {
            best = d;
            witness.copy_from_slice(&support);
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(RipReport {
                    k,
                    delta: best,
                    witness_support: witness,
                    method: RipMethod::Exact,
                    supports_examined: examined,
                });
            }
            i -= 1;
            if support[i] != i + cols - k {
                break;
            }
        }
        support[i] += 1;
        for j in i + 1..k {
            support[j] = support[j - 1] + 1;
        }
    }
}

/// Lower bound on the RIP constant: random supports refined by greedy
/// single-column swaps until no swap increases the support's delta.
pub fn rip_constant_sampled(
    m: &ComplexMatrix,
    k: usize,
    normalizer: f64,
    trials: usize,
    seed: u64,
) -> Result<RipReport> {
    let cols = m.cols();
    check_order(k, cols)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let gram = ColumnGram::new(m, normalizer)?;
    // Swap candidates per sweep: all columns at desk scale, a seeded random
    // pool when the column count makes full scans too slow.
    const POOL: usize = 256;
    const MAX_SWEEPS: usize = 12;

    let mut best = f64::NEG_INFINITY;
    let mut witness: Vec<usize> = (0..k).collect();
    let mut examined = 0u64;

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial as u64));
        let mut support: Vec<usize> = rand::seq::index::sample(&mut rng, cols, k).into_vec();
        support.sort_unstable();
        let mut current = support_delta(&gram, &support)?;
        examined += 1;

        for _ in 0..MAX_SWEEPS {
            let candidates: Vec<usize> = if cols <= POOL {
                (0..cols).collect()
            } else {
                let mut pool: Vec<usize> =
                    rand::seq::index::sample(&mut rng, cols, POOL).into_vec();
                pool.sort_unstable();
                pool
            };
            let mut improved = false;
            for pos in 0..k {
                let mut best_swap: Option<(usize, f64)> = None;
                for &cand in &candidates {
                    if support.contains(&cand) {
                        continue;
                    }
                    let mut trial_support = support.clone();
                    trial_support[pos] = cand;
                    trial_support.sort_unstable();
                    let d = support_delta(&gram, &trial_support)?;
                    examined += 1;
                    if d > current && best_swap.map_or(true, |(_, bd)| d > bd) {
                        best_swap = Some((cand, d));
                    }
                }
                if let Some((cand, d)) = best_swap {
                    support[pos] = cand;
                    support.sort_unstable();
                    current = d;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if current > best {
            best = current;
            witness = support;
        }
    }
    Ok(RipReport {
        k,
        delta: best,
        witness_support: witness,
        method: RipMethod::Sampled,
        supports_examined: examined,
    })
}

/// Cheap certified upper bound on the order-k RIP constant from Gershgorin
/// discs of the normalized Gram: max |G_ii - 1| + (k-1) max_{i != j} |G_ij|.
pub fn rip_upper_bound_gershgorin(m: &ComplexMatrix, k: usize, normalizer: f64) -> Result<f64> {
    let cols = m.cols();
    check_order(k, cols)?;
    let gram = ColumnGram::new(m, normalizer)?;
    let mut max_diag_dev: f64 = 0.0;
    let mut max_offdiag: f64 = 0.0;
    for i in 0..cols {
        max_diag_dev = max_diag_dev.max((gram.entry(i, i)? - 1.0).abs());
        for j in i + 1..cols {
            max_offdiag = max_offdiag.max(gram.entry(i, j)?.abs());
        }
    }
    Ok(max_diag_dev + (k as f64 - 1.0) * max_offdiag)
}

/// Knobs for the sample-complexity search. The 0.9 success threshold treats
/// the failure probability as a free parameter at desk scale; it is a knob,
/// not a claimed constant.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub success_threshold: f64,
    /// Supports per sampled RIP evaluation.
    pub sampled_trials: usize,
    /// Use exact mode when C(N, k) is at most this.
    pub exact_support_budget: u64,
    /// Search cap as a multiple of N.
    pub cap_factor: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            success_threshold: 0.9,
            sampled_trials: 12,
            exact_support_budget: 20_000,
            cap_factor: 16,
        }
    }
}

/// RIP constant of phi(Lin_T)/sqrt((q-1)|T|), exact when affordable.
pub fn rip_of_sampled_rows(
    spec: &FieldSpec,
    ktilde: usize,
    rows: &[u64],
    k: usize,
    opts: &ScanOptions,
    seed: u64,
) -> Result<RipReport> {
    let m = phi_lin_sub(spec, ktilde, rows)?;
    let normalizer = ((spec.q() as f64 - 1.0) * rows.len() as f64).sqrt();
    if binomial(m.cols() as u64, k as u64) <= opts.exact_support_budget {
        rip_constant_exact(&m, k, normalizer)
    } else {
        rip_constant_sampled(&m, k, normalizer, opts.sampled_trials, seed)
    }
}

/// Empirical probability that a fresh |T|-row sample meets the RIP target.
pub fn rip_success_probability(
    spec: &FieldSpec,
    ktilde: usize,
    t_size: usize,
    k: usize,
    delta_target: f64,
    confidence_trials: usize,
    seed: u64,
    opts: &ScanOptions,
) -> Result<f64> {
    let per_size_seed = derive_seed(seed, t_size as u64);
    let successes: Result<Vec<bool>> = (0..confidence_trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = derive_seed(per_size_seed, trial as u64);
            let t = sample_rows(spec, ktilde, t_size, trial_seed)?;
            let report = rip_of_sampled_rows(
                spec,
                ktilde,
                &t.indices,
                k,
                opts,
                derive_seed(trial_seed, 1),
            )?;
            Ok(report.delta <= delta_target)
        })
        .collect();
    let successes = successes?;
    Ok(successes.iter().filter(|&&s| s).count() as f64 / confidence_trials as f64)
}

/// Least |T| whose empirical RIP-success probability reaches the threshold:
/// doubling to bracket, then bisection. Deterministic given the seed.
pub fn min_rows_for_rip(
    spec: &FieldSpec,
    ktilde: usize,
    k: usize,
    delta_target: f64,
    confidence_trials: usize,
    seed: u64,
    opts: &ScanOptions,
) -> Result<usize> {
    let n = check_lin_budget(spec, ktilde)?;
    if confidence_trials == 0 {
        return Err(Error::InvalidParameter("confidence_trials must be positive".into()));
    }
    let cap = (n * opts.cap_factor) as usize;
    let probe = |t_size: usize| -> Result<bool> {
        let p = rip_success_probability(
            spec,
            ktilde,
            t_size,
            k,
            delta_target,
            confidence_trials,
            seed,
            opts,
        )?;
        Ok(p >= opts.success_threshold)
    };

    let mut hi = 1usize;
    let mut lo = 0usize;
    loop {
        if probe(hi)? {
            break;
        }
        lo = hi;
        hi *= 2;
        if hi > cap {
            return Err(Error::BudgetExceeded(format!(
                "no |T| <= {cap} reached the RIP target"
            )));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_codewords, GeneratorMatrix};
    use crate::simplex::{phi_code, phi_matrix};
    use std::sync::Arc;

    fn gf(p: u64, m: u32) -> FieldSpec {
        FieldSpec::new(p, m).unwrap()
    }

    #[test]
    fn lin_matrix_binary_dim1() {
        let spec = gf(2, 1);
        let lin = lin_matrix(&spec, 1).unwrap();
        assert_eq!(lin.data, vec![0, 0, 0, 1]);
    }

    #[test]
    fn lin_matrix_zero_row_and_symmetry() {
        let spec = gf(3, 1);
        let lin = lin_matrix(&spec, 2).unwrap();
        for y in 0..lin.cols {
            assert_eq!(lin.get(0, y), 0);
        }
        for x in 0..lin.rows {
            for y in 0..lin.cols {
                assert_eq!(lin.get(x, y), lin.get(y, x));
            }
        }
    }

    #[test]
    fn encoded_lin_dim2_is_hadamard() {
        let spec = gf(2, 1);
        let lin = lin_matrix(&spec, 2).unwrap();
        let h = phi_matrix(&lin, 2).unwrap();
        assert_eq!((h.rows(), h.cols()), (4, 4));
        // Every entry +-1 and H H^T = 4 I.
        for r in 0..4 {
            for c in 0..4 {
                assert!((h.get(r, c).re.abs() - 1.0).abs() < 1e-12);
                assert!(h.get(r, c).im.abs() < 1e-12);
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|r| h.get(r, i).re * h.get(r, j).re).sum();
                let expect = if i == j { 4.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sample_rows_deterministic_and_uniform() {
        let spec = gf(2, 1);
        let a = sample_rows(&spec, 4, 100, 7).unwrap();
        let b = sample_rows(&spec, 4, 100, 7).unwrap();
        assert_eq!(a.indices, b.indices);
        assert!(sample_rows(&spec, 4, 0, 7).is_err());
        let single = sample_rows(&spec, 4, 1, 3).unwrap();
        assert_eq!(single.indices.len(), 1);

        // Chi-square vs uniform over 10^4 draws, 16 bins, 3 sigma.
        let big = sample_rows(&spec, 4, 10_000, 11).unwrap();
        let mut counts = [0u64; 16];
        for &i in &big.indices {
            counts[i as usize] += 1;
        }
        let expected = 10_000.0 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 15.0 + 3.0 * 30f64.sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn phi_lin_sub_matches_repetition_code() {
        let spec = gf(2, 1);
        let m = phi_lin_sub(&spec, 1, &[1, 1]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert!((m.get(0, 0).re - 1.0).abs() < 1e-12);
        assert!((m.get(1, 0).re - 1.0).abs() < 1e-12);
        assert!((m.get(0, 1).re + 1.0).abs() < 1e-12);
        assert!((m.get(1, 1).re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_lin_sub_zero_row_is_all_ones() {
        let spec = gf(3, 1);
        let m = phi_lin_sub(&spec, 2, &[0]).unwrap();
        for c in 0..m.cols() {
            for r in 0..m.rows() {
                assert!((m.get(r, c) - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn column_norms_sqrt_q_minus_1_t() {
        let spec = gf(2, 2);
        let t = sample_rows(&spec, 2, 5, 9).unwrap();
        let m = phi_lin_sub(&spec, 2, &t.indices).unwrap();
        let expect = (3.0 * 5.0f64).sqrt();
        for c in 0..m.cols() {
            let norm: f64 = m.col(c).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - expect).abs() < 1e-9);
        }
    }

    /// phi(Lin_T) with T = columns of G equals phi of the enumerated code.
    #[test]
    fn observation_dft_equivalence_small() {
        for seed in 0..20u64 {
            use rand::{Rng, SeedableRng};
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, m) = [(2u64, 1u32), (3, 1), (2, 2)][rng.gen_range(0..3)];
            let spec = Arc::new(gf(p, m));
            let ktilde = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=8);
            let gen = GeneratorMatrix::random(spec.clone(), ktilde, n, seed).unwrap();
            let q = spec.q() as u64;
            let t: Vec<u64> = (0..n)
                .map(|j| {
                    gen.column(j)
                        .iter()
                        .rev()
                        .fold(0u64, |acc, &d| acc * q + d as u64)
                })
                .collect();
            let via_lin = phi_lin_sub(&spec, ktilde, &t).unwrap();
            let code = enumerate_codewords(gen).unwrap();
            let via_code = phi_code(&code).unwrap();
            assert!(via_lin.max_abs_diff(&via_code) < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn exact_rip_of_orthonormal_hadamard_is_zero() {
        let spec = gf(2, 1);
        let lin = lin_matrix(&spec, 2).unwrap();
        let h = phi_matrix(&lin, 2).unwrap();
        for k in 1..=4 {
            let r = rip_constant_exact(&h, k, 2.0).unwrap();
            assert!(r.delta < 1e-9, "k = {k}, delta = {}", r.delta);
        }
    }

    #[test]
    fn exact_rip_of_duplicate_columns_is_one() {
        // Single all-ones row pair: Gram [[1,1],[1,1]], eigenvalues {0, 2}.
        let spec = gf(2, 1);
        let m = phi_lin_sub(&spec, 1, &[0]).unwrap();
        let r = rip_constant_exact(&m, 2, 1.0).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-9);
        assert_eq!(r.witness_support, vec![0, 1]);
    }

    #[test]
    fn exact_rip_order_one_with_exact_normalization() {
        let spec = gf(3, 1);
        let t = sample_rows(&spec, 2, 4, 3).unwrap();
        let m = phi_lin_sub(&spec, 2, &t.indices).unwrap();
        let r = rip_constant_exact(&m, 1, (2.0 * 4.0f64).sqrt()).unwrap();
        assert!(r.delta < 1e-9);
    }

    #[test]
    fn sampled_is_lower_bound_on_exact() {
        for seed in 0..30u64 {
            let spec = gf(2, 1);
            let t = sample_rows(&spec, 3, 6, seed).unwrap();
            let m = phi_lin_sub(&spec, 3, &t.indices).unwrap();
            let norm = (6.0f64).sqrt();
            let exact = rip_constant_exact(&m, 3, norm).unwrap();
            let sampled = rip_constant_sampled(&m, 3, norm, 4, seed).unwrap();
            assert!(sampled.delta <= exact.delta + 1e-9, "seed {seed}");
            // Witness reproduces its delta.
            let gram = ColumnGram::new(&m, norm).unwrap();
            let check = support_delta(&gram, &sampled.witness_support).unwrap();
            assert!((check - sampled.delta).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_full_support_equals_exact_full_support() {
        let spec = gf(2, 1);
        let t = sample_rows(&spec, 2, 5, 1).unwrap();
        let m = phi_lin_sub(&spec, 2, &t.indices).unwrap();
        let norm = (5.0f64).sqrt();
        let sampled = rip_constant_sampled(&m, 4, norm, 1, 9).unwrap();
        let exact = rip_constant_exact(&m, 4, norm).unwrap();
        assert!((sampled.delta - exact.delta).abs() < 1e-12);
    }

    #[test]
    fn sampled_monotone_in_trials() {
        let spec = gf(2, 1);
        let t = sample_rows(&spec, 4, 8, 5).unwrap();
        let m = phi_lin_sub(&spec, 4, &t.indices).unwrap();
        let norm = (8.0f64).sqrt();
        let mut prev = 0.0;
        for trials in [1usize, 2, 4, 8] {
            let r = rip_constant_sampled(&m, 2, norm, trials, 123).unwrap();
            assert!(r.delta >= prev - 1e-12);
            prev = r.delta;
        }
    }

    #[test]
    fn full_lin_gram_is_identity() {
        // Columns of the full encoded matrix are exactly orthogonal.
        for (p, m, ktilde) in [(2u64, 1u32, 3usize), (3, 1, 2), (2, 2, 2)] {
            let spec = gf(p, m);
            let n = (spec.q() as u64).pow(ktilde as u32);
            let rows: Vec<u64> = (0..n).collect();
            let mat = phi_lin_sub(&spec, ktilde, &rows).unwrap();
            let norm = ((spec.q() as f64 - 1.0) * n as f64).sqrt();
            let gram = ColumnGram::new(&mat, norm).unwrap();
            for i in 0..mat.cols() {
                for j in 0..mat.cols() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((gram.entry(i, j).unwrap() - expect).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn non_real_gram_rejected() {
        let mut m = ComplexMatrix::zeros(2, 2).unwrap();
        m.set(0, 0, num_complex::Complex64::new(1.0, 0.0));
        m.set(1, 0, num_complex::Complex64::new(0.0, 0.0));
        m.set(0, 1, num_complex::Complex64::new(0.0, 1.0));
        m.set(1, 1, num_complex::Complex64::new(1.0, 0.0));
        assert!(matches!(
            rip_constant_exact(&m, 2, 1.0),
            Err(Error::NonRealGram(_))
        ));
    }

    #[test]
    fn gershgorin_bounds_exact() {
        for seed in 0..10u64 {
            let spec = gf(2, 1);
            let t = sample_rows(&spec, 3, 10, seed).unwrap();
            let m = phi_lin_sub(&spec, 3, &t.indices).unwrap();
            let norm = (10.0f64).sqrt();
            for k in [2usize, 3] {
                let exact = rip_constant_exact(&m, k, norm).unwrap();
                let bound = rip_upper_bound_gershgorin(&m, k, norm).unwrap();
                assert!(exact.delta <= bound + 1e-9);
            }
        }
    }

    /// The Gram-eigenvalue delta of a support upper-bounds |deviation| of
    /// random unit vectors on that support, and the bound is tight in the
    /// eigenvector direction.
    #[test]
    fn definitional_consistency_random_vectors() {
        use rand::{Rng, SeedableRng};
        for seed in 0..20u64 {
            let spec = gf(2, 1);
            let t = sample_rows(&spec, 3, 5, seed).unwrap();
            let m = phi_lin_sub(&spec, 3, &t.indices).unwrap();
            let norm = (5.0f64).sqrt();
            let gram = ColumnGram::new(&m, norm).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = 3;
            let mut support: Vec<usize> =
                rand::seq::index::sample(&mut rng, m.cols(), k).into_vec();
            support.sort_unstable();
            let mut sub = gram.submatrix(&support).unwrap();
            let sub_copy = sub.clone();
            let delta = delta_of_submatrix(&mut sub, k);
            let mut max_dev: f64 = 0.0;
            for _ in 0..200 {
                let mut x: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm_x: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm_x < 1e-9 {
                    continue;
                }
                x.iter_mut().for_each(|v| *v /= norm_x);
                // x^T G x over the support.
                let mut quad = 0.0;
                for a in 0..k {
                    for b in 0..k {
                        quad += x[a] * sub_copy[a * k + b] * x[b];
                    }
                }
                max_dev = max_dev.max((quad - 1.0).abs());
            }
            assert!(max_dev <= delta + 1e-9, "seed {seed}");

            // Extremal eigenvector attains the delta.
            let mut sub2 = sub_copy.clone();
            let (vals, vecs) = crate::jacobi::eigen_sym(&mut sub2, k, true);
            let extremal = if (vals[k - 1] - 1.0).abs() >= (vals[0] - 1.0).abs() {
                k - 1
            } else {
                0
            };
            let x: Vec<f64> = (0..k).map(|i| vecs[i * k + extremal]).collect();
            let mut quad = 0.0;
            for a in 0..k {
                for b in 0..k {
                    quad += x[a] * sub_copy[a * k + b] * x[b];
                }
            }
            assert!(((quad - 1.0).abs() - delta).abs() < 1e-9);
        }
    }

    #[test]
    fn min_rows_terminates_and_reproduces() {
        let spec = gf(2, 1);
        let opts = ScanOptions {
            sampled_trials: 4,
            ..ScanOptions::default()
        };
        let a = min_rows_for_rip(&spec, 4, 2, 0.5, 8, 77, &opts).unwrap();
        let b = min_rows_for_rip(&spec, 4, 2, 0.5, 8, 77, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a >= 1);
    }

    #[test]
    fn min_rows_monotone_in_target() {
        let spec = gf(2, 1);
        let opts = ScanOptions {
            sampled_trials: 4,
            ..ScanOptions::default()
        };
        let tight = min_rows_for_rip(&spec, 4, 2, 0.4, 8, 5, &opts).unwrap();
        let loose = min_rows_for_rip(&spec, 4, 2, 0.9, 8, 5, &opts).unwrap();
        assert!(loose <= tight, "loose {loose} tight {tight}");
    }

    #[test]
    fn budgets_enforced() {
        let spec = gf(2, 1);
        assert!(matches!(lin_matrix(&spec, 20), Err(Error::BudgetExceeded(_))));
        let m = phi_lin_sub(&spec, 3, &[0, 1]).unwrap();
        assert!(rip_constant_exact(&m, 9, 1.0).is_err());
        assert!(rip_constant_sampled(&m, 2, 1.0, 0, 0).is_err());
    }
}
