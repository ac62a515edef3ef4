//! Linear codes over GF(q): seeded random generator matrices, codeword
//! enumeration in message-label order, and exact (rational) Hamming-distance
//! quantities, including the minimum over L-subsets of the average pairwise
//! distance.
//!
//! Codes are stored by message enumeration rather than as deduplicated sets:
//! a rank-deficient generator yields duplicate codewords, and that degenerate
//! case must stay representable because the encoded matrix indexes columns by
//! messages.

use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Exact rational used for all distance quantities. Johnson-bound
/// comparisons are strict inequalities, so no float tolerance anywhere here.
pub type Rational = Ratio<u64>;

/// Hard cap on q^ktilde for codeword enumeration.
pub const ENUM_BUDGET: u64 = 1 << 24;
/// Hard cap on the number of L-subsets visited by exhaustive minimization.
pub const SUBSET_BUDGET: u64 = 10_000_000;

/// C(n, k), saturating at u64::MAX.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Message index -> vector in GF(q)^ktilde, base-q digits, low digit first.
pub fn message_vector(index: u64, ktilde: usize, q: u16) -> Vec<u16> {
    let mut v = vec![0u16; ktilde];
    let mut idx = index;
    for d in v.iter_mut() {
        *d = (idx % q as u64) as u16;
        idx /= q as u64;
    }
    v
}

/// A ktilde x n generator matrix over GF(q), row-major.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub spec: Arc<FieldSpec>,
    pub ktilde: usize,
    pub n: usize,
    entries: Vec<u16>,
}

impl GeneratorMatrix {
    pub fn from_entries(spec: Arc<FieldSpec>, ktilde: usize, n: usize, entries: Vec<u16>) -> Result<Self> {
        if ktilde < 1 || n < 1 {
            return Err(Error::InvalidParameter(
                "generator matrix needs ktilde >= 1 and n >= 1".into(),
            ));
        }
        if entries.len() != ktilde * n {
            return Err(Error::LengthMismatch(entries.len(), ktilde * n));
        }
        for &e in &entries {
            if e >= spec.q() {
                return Err(Error::LabelOutOfRange { label: e, q: spec.q() });
            }
        }
        Ok(GeneratorMatrix { spec, ktilde, n, entries })
    }

    /// Entries i.i.d. uniform over GF(q) from a seeded deterministic stream.
    pub fn random(spec: Arc<FieldSpec>, ktilde: usize, n: usize, seed: u64) -> Result<Self> {
        check_enum_budget(&spec, ktilde)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = spec.q();
        let entries = (0..ktilde * n).map(|_| rng.gen_range(0..q)).collect();
        Self::from_entries(spec, ktilde, n, entries)
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u16 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u16] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn column(&self, col: usize) -> Vec<u16> {
        (0..self.ktilde).map(|r| self.entry(r, col)).collect()
    }

    /// Text format: first line `q ktilde n`, then ktilde lines of n labels.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.spec.q(), self.ktilde, self.n);
        for r in 0..self.ktilde {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next_int = |what: &str| -> Result<u64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let q = next_int("q")?;
        let ktilde = next_int("ktilde")? as usize;
        let n = next_int("n")? as usize;
        let (p, m) = factor_prime_power(q)?;
        let spec = Arc::new(FieldSpec::new(p, m)?);
        let mut entries = Vec::with_capacity(ktilde * n);
        for _ in 0..ktilde * n {
            entries.push(next_int("entry")? as u16);
        }
        Self::from_entries(spec, ktilde, n, entries)
    }
}

/// q = p^m with p prime, or a parse error.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = 0;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            if rest != 1 {
                return Err(Error::Parse(format!("{q} is not a prime power")));
            }
            return Ok((p, m));
        }
        p += 1;
    }
    Ok((q, 1)) // q itself prime
}

fn check_enum_budget(spec: &FieldSpec, ktilde: usize) -> Result<u64> {
    let count = (spec.q() as u64).checked_pow(ktilde as u32);
    match count {
        Some(c) if c <= ENUM_BUDGET => Ok(c),
        _ => Err(Error::BudgetExceeded(format!(
            "q^ktilde = {}^{} exceeds {}",
            spec.q(),
            ktilde,
            ENUM_BUDGET
        ))),
    }
}

/// A linear code with all q^ktilde codewords enumerated in message-label order.
#[derive(Debug, Clone)]
pub struct LinearCode {
    pub gen: GeneratorMatrix,
    pub codewords: Vec<Vec<u16>>,
}

impl LinearCode {
    pub fn spec(&self) -> &FieldSpec {
        &self.gen.spec
    }

    pub fn n(&self) -> usize {
        self.gen.n
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn has_duplicate_codewords(&self) -> bool {
        let mut sorted = self.codewords.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// Lists codeword(x) = x * G for every message x in label order.
pub fn enumerate_codewords(gen: GeneratorMatrix) -> Result<LinearCode> {
    let count = check_enum_budget(&gen.spec, gen.ktilde)?;
    let spec = gen.spec.clone();
    let mut codewords = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let msg = message_vector(idx, gen.ktilde, spec.q());
        let mut word = vec![0u16; gen.n];
        for (i, &xi) in msg.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, w) in word.iter_mut().enumerate() {
                *w = spec.add_label(*w, spec.mul_label(xi, gen.entry(i, j)));
            }
        }
        codewords.push(word);
    }
    Ok(LinearCode { gen, codewords })
}

/// Number of positions where x and y disagree.
#[inline]
pub fn disagreement_count(x: &[u16], y: &[u16]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Fraction of positions where x and y disagree, exact.
pub fn relative_distance(x: &[u16], y: &[u16]) -> Result<Rational> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(Ratio::new(disagreement_count(x, y) as u64, x.len() as u64))
}

/// Average pairwise relative distance of L >= 2 equal-length words, exact.
pub fn avg_pairwise_distance<W: AsRef<[u16]>>(words: &[W]) -> Result<Rational> {
    let l = words.len();
    if l < 2 {
        return Err(Error::InvalidParameter("need at least 2 words".into()));
    }
    let n = words[0].as_ref().len();
    let mut sum = 0u64;
    for i in 0..l {
        for j in i + 1..l {
            let (a, b) = (words[i].as_ref(), words[j].as_ref());
            if a.len() != b.len() {
                return Err(Error::LengthMismatch(a.len(), b.len()));
            }
            sum += disagreement_count(a, b) as u64;
        }
    }
    Ok(Ratio::new(sum, n as u64 * binomial(l as u64, 2)))
}

/// Minimum over all L-subsets of codewords of the average pairwise distance,
/// with the lexicographically least achieving index tuple.
pub fn min_avg_distance_over_subsets(code: &LinearCode, l: usize) -> Result<(Rational, Vec<usize>)> {
    let count = code.len();
    if l < 2 {
        return Err(Error::InvalidParameter("subset size must be >= 2".into()));
    }
    if l > count {
        return Err(Error::InvalidParameter(format!(
            "subset size {l} exceeds code size {count}"
        )));
    }
    if binomial(count as u64, l as u64) > SUBSET_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "C({count}, {l}) exceeds {SUBSET_BUDGET} subsets"
        )));
    }
    let n = code.n();
    // Pairwise disagreement counts; count <= 4473 here since C(count, 2)
    // is within budget.
    let pair = |i: usize, j: usize| -> u32 {
        disagreement_count(&code.codewords[i], &code.codewords[j]) as u32
    };
    let mut pair_counts = vec![0u32; count * count];
    for i in 0..count {
        for j in i + 1..count {
            let d = pair(i, j);
            pair_counts[i * count + j] = d;
            pair_counts[j * count + i] = d;
        }
    }

    let denom = n as u64 * binomial(l as u64, 2);
    let mut best_sum = u64::MAX;
    let mut best: Vec<usize> = Vec::new();
    let mut chosen = vec![0usize; l];
    // Depth-first lexicographic enumeration; strict improvement keeps the
    // lexicographically least achieving subset.
    fn recurse(
        depth: usize,
        start: usize,
        running: u64,
        chosen: &mut [usize],
        l: usize,
        count: usize,
        pair_counts: &[u32],
        best_sum: &mut u64,
        best: &mut Vec<usize>,
    ) {
        if depth == l {
            if running < *best_sum {
                *best_sum = running;
                best.clear();
                best.extend_from_slice(chosen);
            }
            return;
        }
        for idx in start..=count - (l - depth) {
            let mut add = 0u64;
            for &prev in chosen[..depth].iter() {
                add += pair_counts[prev * count + idx] as u64;
            }
            chosen[depth] = idx;
            recurse(
                depth + 1,
                idx + 1,
                running + add,
                chosen,
                l,
                count,
                pair_counts,
                best_sum,
                best,
            );
        }
    }
    recurse(0, 0, 0, &mut chosen, l, count, &pair_counts, &mut best_sum, &mut best);
    Ok((Ratio::new(best_sum, denom), best))
}

/// Minimum relative distance over all distinct index pairs (0 if the code
/// contains duplicate codewords).
pub fn min_distance(code: &LinearCode) -> Result<Rational> {
    if code.len() < 2 {
        return Err(Error::InvalidParameter("code has fewer than 2 codewords".into()));
    }
    let n = code.n() as u64;
    let mut best = u64::MAX;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            let d = disagreement_count(&code.codewords[i], &code.codewords[j]) as u64;
            best = best.min(d);
        }
    }
    Ok(Ratio::new(best, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(p, m).unwrap())
    }

    fn code_from(spec: Arc<FieldSpec>, ktilde: usize, n: usize, entries: &[u16]) -> LinearCode {
        let gen = GeneratorMatrix::from_entries(spec, ktilde, n, entries.to_vec()).unwrap();
        enumerate_codewords(gen).unwrap()
    }

    #[test]
    fn random_generator_is_deterministic() {
        let spec = gf(2, 1);
        let a = GeneratorMatrix::random(spec.clone(), 1, 2, 77).unwrap();
        let b = GeneratorMatrix::random(spec, 1, 2, 77).unwrap();
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn random_generator_entries_in_range() {
        let g = GeneratorMatrix::random(gf(3, 1), 2, 4, 5).unwrap();
        assert_eq!(g.entries.len(), 8);
        assert!(g.entries.iter().all(|&e| e < 3));
    }

    /// Chi-square test of entry uniformity over 10^4 draws, 3 sigma.
    #[test]
    fn random_generator_entries_uniform() {
        let spec = gf(5, 1);
        let mut counts = [0u64; 5];
        for seed in 0..100 {
            let g = GeneratorMatrix::random(spec.clone(), 10, 10, seed).unwrap();
            for &e in &g.entries {
                counts[e as usize] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        assert_eq!(total, 10_000);
        let expected = total as f64 / 5.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 4 degrees of freedom: mean 4, sd sqrt(8); 3 sigma above the mean.
        assert!(chi2 < 4.0 + 3.0 * 8f64.sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn enumerate_examples() {
        let c = code_from(gf(2, 1), 1, 2, &[1, 1]);
        assert_eq!(c.codewords, vec![vec![0, 0], vec![1, 1]]);

        let c = code_from(gf(2, 1), 2, 2, &[1, 0, 0, 1]);
        assert_eq!(
            c.codewords,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );

        let c = code_from(gf(3, 1), 1, 2, &[1, 2]);
        assert_eq!(c.codewords, vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn zero_message_gives_zero_codeword() {
        let c = code_from(gf(2, 2), 2, 3, &[1, 2, 3, 0, 1, 2]);
        assert!(c.codewords[0].iter().all(|&s| s == 0));
    }

    #[test]
    fn enumeration_budget_enforced() {
        let spec = gf(2, 1);
        let gen = GeneratorMatrix::random(spec, 25, 2, 0);
        assert!(matches!(gen, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn relative_distance_examples() {
        assert_eq!(relative_distance(&[0, 0, 0], &[1, 1, 1]).unwrap(), Ratio::new(1, 1));
        assert_eq!(relative_distance(&[0, 1, 0], &[0, 1, 0]).unwrap(), Ratio::new(0, 1));
        assert_eq!(relative_distance(&[0, 0, 1], &[0, 1, 1]).unwrap(), Ratio::new(1, 3));
        assert!(relative_distance(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn avg_pairwise_examples() {
        assert_eq!(
            avg_pairwise_distance(&[vec![0u16], vec![1u16]]).unwrap(),
            Ratio::new(1, 1)
        );
        assert_eq!(
            avg_pairwise_distance(&[vec![0u16, 0, 0], vec![1, 1, 0], vec![0, 1, 1]]).unwrap(),
            Ratio::new(2, 3)
        );
        // Constant average: all mutual distances equal d.
        assert_eq!(
            avg_pairwise_distance(&[vec![0u16, 0], vec![1, 0], vec![2, 0]]).unwrap(),
            Ratio::new(1, 2)
        );
        assert!(avg_pairwise_distance(&[vec![0u16]]).is_err());
    }

    #[test]
    fn min_avg_subset_examples() {
        let c = code_from(gf(2, 1), 1, 2, &[1, 1]);
        let (v, w) = min_avg_distance_over_subsets(&c, 2).unwrap();
        assert_eq!(v, Ratio::new(1, 1));
        assert_eq!(w, vec![0, 1]);

        let c = code_from(gf(2, 1), 2, 2, &[1, 0, 0, 1]);
        let (v, w) = min_avg_distance_over_subsets(&c, 2).unwrap();
        assert_eq!(v, Ratio::new(1, 2));
        assert_eq!(w, vec![0, 1]);

        // Duplicate codewords: rank-deficient generator, minimum is 0.
        let c = code_from(gf(2, 1), 2, 2, &[1, 1, 1, 1]);
        let (v, _) = min_avg_distance_over_subsets(&c, 2).unwrap();
        assert_eq!(v, Ratio::new(0, 1));
        assert!(c.has_duplicate_codewords());
    }

    #[test]
    fn min_distance_examples() {
        let c = code_from(gf(2, 1), 1, 3, &[1, 1, 1]);
        assert_eq!(min_distance(&c).unwrap(), Ratio::new(1, 1));

        let c = code_from(gf(2, 1), 2, 2, &[1, 0, 0, 1]);
        assert_eq!(min_distance(&c).unwrap(), Ratio::new(1, 2));

        let c = code_from(gf(2, 1), 2, 2, &[1, 1, 1, 1]);
        assert_eq!(min_distance(&c).unwrap(), Ratio::new(0, 1));
    }

    /// codeword(x) + codeword(x') = codeword(x + x'), exhaustive at desk scale.
    #[test]
    fn linearity_exhaustive() {
        for seed in 0..5 {
            let spec = gf(3, 1);
            let gen = GeneratorMatrix::random(spec.clone(), 2, 5, seed).unwrap();
            let code = enumerate_codewords(gen).unwrap();
            let q = spec.q() as u64;
            let count = code.len() as u64;
            for a in 0..count {
                for b in 0..count {
                    let va = message_vector(a, 2, spec.q());
                    let vb = message_vector(b, 2, spec.q());
                    let sum_digits: Vec<u16> = va
                        .iter()
                        .zip(&vb)
                        .map(|(&x, &y)| spec.add_label(x, y))
                        .collect();
                    let sum_idx = sum_digits
                        .iter()
                        .rev()
                        .fold(0u64, |acc, &d| acc * q + d as u64);
                    let expect: Vec<u16> = code.codewords[a as usize]
                        .iter()
                        .zip(&code.codewords[b as usize])
                        .map(|(&x, &y)| spec.add_label(x, y))
                        .collect();
                    assert_eq!(code.codewords[sum_idx as usize], expect);
                }
            }
        }
    }

    #[test]
    fn min_avg_at_l2_equals_min_distance() {
        for seed in 0..20 {
            let spec = gf(2, 1);
            let gen = GeneratorMatrix::random(spec, 3, 6, seed).unwrap();
            let code = enumerate_codewords(gen).unwrap();
            let (v, _) = min_avg_distance_over_subsets(&code, 2).unwrap();
            assert_eq!(v, min_distance(&code).unwrap());
        }
    }

    #[test]
    fn subset_average_at_least_minimum() {
        let spec = gf(3, 1);
        let gen = GeneratorMatrix::random(spec, 2, 6, 9).unwrap();
        let code = enumerate_codewords(gen).unwrap();
        let (min3, _) = min_avg_distance_over_subsets(&code, 3).unwrap();
        let words = [
            code.codewords[1].clone(),
            code.codewords[3].clone(),
            code.codewords[7].clone(),
        ];
        assert!(avg_pairwise_distance(&words).unwrap() >= min3);
    }

    #[test]
    fn generator_text_round_trip() {
        let g = GeneratorMatrix::random(gf(2, 2), 2, 3, 11).unwrap();
        let parsed = GeneratorMatrix::parse(&g.to_text()).unwrap();
        assert_eq!(parsed.entries, g.entries);
        assert_eq!(parsed.spec.q(), 4);
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(factor_prime_power(8).unwrap(), (2, 3));
        assert_eq!(factor_prime_power(9).unwrap(), (3, 2));
        assert_eq!(factor_prime_power(7).unwrap(), (7, 1));
        assert!(factor_prime_power(6).is_err());
        assert!(factor_prime_power(12).is_err());
    }
}
