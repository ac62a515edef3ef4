//! Ground-truth list-decodability checker: the maximum number of codewords in
//! any Hamming ball of relative radius rho (strict), computed exactly by
//! enumerating every center in [q]^n, or bounded from below by a sampled
//! center menu when enumeration is out of budget.
//!
//! The strict `< rho` comparison is done on exact rationals by
//! cross-multiplied integers; real-valued radii must be rounded down to a
//! rational cutoff first (see [`real_to_rational_floor`]), so a reported
//! counterexample is always genuine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{disagreement_count, LinearCode, Rational};
use crate::error::{Error, Result};

/// Hard cap on q^n for exhaustive center enumeration.
pub const CENTER_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    /// Lower bound from `budget` centers: uniform random centers, all
    /// codewords, and codewords with floor(rho*n) coordinates rerandomized.
    /// Dense balls sit near codeword clusters, so pure uniform sampling
    /// rarely finds the maximum.
    Sampled { budget: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ListOracleResult {
    pub max_count: usize,
    pub witness_center: Vec<u16>,
    pub mode: OracleMode,
    pub centers_examined: u64,
}

/// Rounds a real radius down to a rational cutoff at 1e-9 granularity
/// (clamped below at 0). Rounding down only ever weakens the claimed radius.
pub fn real_to_rational_floor(x: f64) -> Rational {
    const GRAN: f64 = 1e9;
    let scaled = (x * GRAN).floor();
    if scaled <= 0.0 {
        return Rational::new(0, 1);
    }
    Rational::new(scaled as u64, GRAN as u64)
}

#[inline]
fn within_strict(count: usize, rho: Rational, n: usize) -> bool {
    // count/n < rho  <=>  count * den < num * n
    (count as u128) * (*rho.denom() as u128) < (*rho.numer() as u128) * (n as u128)
}

fn ball_count(center: &[u16], code: &LinearCode, rho: Rational) -> usize {
    let n = code.n();
    code.codewords
        .iter()
        .filter(|c| within_strict(disagreement_count(center, c), rho, n))
        .count()
}

fn check_rho(rho: Rational) -> Result<()> {
    if rho > Rational::new(1, 1) {
        return Err(Error::InvalidParameter(format!("rho = {rho} exceeds 1")));
    }
    Ok(())
}

/// Maximum over centers of the number of codewords at relative distance
/// strictly below rho. Exhaustive mode is exact; sampled mode is a lower
/// bound. The witness is the first achieving center in label order.
pub fn list_size_at_radius(code: &LinearCode, rho: Rational, mode: OracleMode) -> Result<ListOracleResult> {
    check_rho(rho)?;
    let q = code.spec().q();
    let n = code.n();
    match mode {
        OracleMode::Exhaustive => {
            let total = (q as u64)
                .checked_pow(n as u32)
                .filter(|&t| t <= CENTER_BUDGET)
                .ok_or_else(|| {
                    Error::BudgetExceeded(format!("q^n = {q}^{n} exceeds {CENTER_BUDGET} centers"))
                })?;
            let mut best = 0usize;
            let mut witness = vec![0u16; n];
            let mut center = vec![0u16; n];
            for _ in 0..total {
                let c = ball_count(&center, code, rho);
                if c > best {
                    best = c;
                    witness.copy_from_slice(&center);
                }
                // Odometer increment in label order (low digit first).
                for d in center.iter_mut() {
                    *d += 1;
                    if *d < q {
                        break;
                    }
                    *d = 0;
                }
            }
            Ok(ListOracleResult {
                max_count: best,
                witness_center: witness,
                mode,
                centers_examined: total,
            })
        }
        OracleMode::Sampled { budget, seed } => {
            if budget == 0 {
                return Err(Error::InvalidParameter("sampling budget must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let flips = ((*rho.numer() as u128 * n as u128) / *rho.denom() as u128) as usize;
            let mut best = 0usize;
            let mut witness = vec![0u16; n];
            let mut examined = 0u64;
            let consider = |center: &[u16], best: &mut usize, witness: &mut Vec<u16>| {
                let c = ball_count(center, code, rho);
                if c > *best {
                    *best = c;
                    witness.copy_from_slice(center);
                }
            };
            'outer: loop {
                for word in &code.codewords {
                    if examined >= budget {
                        break 'outer;
                    }
                    consider(word, &mut best, &mut witness);
                    examined += 1;

                    if examined >= budget {
                        break 'outer;
                    }
                    let mut perturbed = word.clone();
                    for _ in 0..flips.min(n) {
                        let pos = rng.gen_range(0..n);
                        perturbed[pos] = rng.gen_range(0..q);
                    }
                    consider(&perturbed, &mut best, &mut witness);
                    examined += 1;

                    if examined >= budget {
                        break 'outer;
                    }
                    let uniform: Vec<u16> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                    consider(&uniform, &mut best, &mut witness);
                    examined += 1;
                }
            }
            Ok(ListOracleResult {
                max_count: best,
                witness_center: witness,
                mode,
                centers_examined: examined,
            })
        }
    }
}

/// Exhaustive check that no ball of strict radius rho holds more than `ell`
/// codewords; on failure, returns a counterexample center.
pub fn verify_list_decodable(
    code: &LinearCode,
    rho: Rational,
    ell: usize,
) -> Result<(bool, Option<Vec<u16>>)> {
    let result = list_size_at_radius(code, rho, OracleMode::Exhaustive)?;
    if result.max_count <= ell {
        Ok((true, None))
    } else {
        Ok((false, Some(result.witness_center)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_codewords, GeneratorMatrix};
    use crate::gf::FieldSpec;
    use std::sync::Arc;

    fn code_from(p: u64, m: u32, ktilde: usize, n: usize, entries: &[u16]) -> LinearCode {
        let spec = Arc::new(FieldSpec::new(p, m).unwrap());
        let gen = GeneratorMatrix::from_entries(spec, ktilde, n, entries.to_vec()).unwrap();
        enumerate_codewords(gen).unwrap()
    }

    #[test]
    fn repetition_code_at_half() {
        let code = code_from(2, 1, 1, 3, &[1, 1, 1]);
        let r = list_size_at_radius(&code, Rational::new(1, 2), OracleMode::Exhaustive).unwrap();
        assert_eq!(r.max_count, 1);
        assert_eq!(r.centers_examined, 8);
    }

    #[test]
    fn zero_radius_empties_every_ball() {
        let code = code_from(2, 1, 1, 3, &[1, 1, 1]);
        let r = list_size_at_radius(&code, Rational::new(0, 1), OracleMode::Exhaustive).unwrap();
        assert_eq!(r.max_count, 0);
    }

    #[test]
    fn radius_one_counts_everything_near_a_codeword() {
        let code = code_from(2, 1, 1, 2, &[0, 1]);
        // Codewords {00, 01}; center 00 has both within distance < 1.
        let r = list_size_at_radius(&code, Rational::new(1, 1), OracleMode::Exhaustive).unwrap();
        assert_eq!(r.max_count, 2);
        assert_eq!(r.witness_center, vec![0, 0]);
        assert!(list_size_at_radius(&code, Rational::new(3, 2), OracleMode::Exhaustive).is_err());
    }

    #[test]
    fn verify_examples() {
        let code = code_from(2, 1, 1, 3, &[1, 1, 1]);
        let (ok, _) = verify_list_decodable(&code, Rational::new(1, 2), 1).unwrap();
        assert!(ok);
        let (ok, _) = verify_list_decodable(&code, Rational::new(1, 1), code.len()).unwrap();
        assert!(ok);

        // Full [2,2] code: center 00 sees 00, 01, 10 within distance < 3/4.
        let code = code_from(2, 1, 2, 2, &[1, 0, 0, 1]);
        let (ok, witness) = verify_list_decodable(&code, Rational::new(3, 4), 2).unwrap();
        assert!(!ok);
        assert_eq!(witness.unwrap(), vec![0, 0]);
    }

    #[test]
    fn max_count_monotone_in_rho() {
        let code = code_from(3, 1, 2, 4, &[1, 0, 2, 1, 0, 1, 1, 2]);
        let mut prev = 0;
        for num in 0..=8 {
            let rho = Rational::new(num, 8);
            let r = list_size_at_radius(&code, rho, OracleMode::Exhaustive).unwrap();
            assert!(r.max_count >= prev);
            prev = r.max_count;
        }
    }

    #[test]
    fn sampled_never_exceeds_exhaustive() {
        for seed in 0..10 {
            let spec = Arc::new(FieldSpec::new(2, 1).unwrap());
            let gen = GeneratorMatrix::random(spec, 3, 7, seed).unwrap();
            let code = enumerate_codewords(gen).unwrap();
            let rho = Rational::new(2, 7);
            let exact =
                list_size_at_radius(&code, rho, OracleMode::Exhaustive).unwrap();
            let sampled = list_size_at_radius(
                &code,
                rho,
                OracleMode::Sampled { budget: 50, seed },
            )
            .unwrap();
            assert!(sampled.max_count <= exact.max_count);
        }
    }

    #[test]
    fn budget_enforced() {
        let spec = Arc::new(FieldSpec::new(2, 1).unwrap());
        let gen = GeneratorMatrix::random(spec, 2, 25, 0).unwrap();
        let code = enumerate_codewords(gen).unwrap();
        assert!(matches!(
            list_size_at_radius(&code, Rational::new(1, 2), OracleMode::Exhaustive),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(list_size_at_radius(
            &code,
            Rational::new(1, 2),
            OracleMode::Sampled { budget: 0, seed: 1 }
        )
        .is_err());
    }

    #[test]
    fn rational_floor_conversion() {
        assert_eq!(real_to_rational_floor(0.25), Rational::new(250_000_000, 1_000_000_000));
        assert_eq!(real_to_rational_floor(-0.5), Rational::new(0, 1));
        let j = real_to_rational_floor(0.1464466094);
        assert!(j <= Rational::new(1464466095, 10_000_000_000));
    }
}
