//! Seeded Monte Carlo experiments. Trial `i` always draws from
//! `seed.derive(i)`, and aggregation is order independent, so results do
//! not depend on the number of worker threads.

use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{binomial, rational_to_f64};
use crate::channel::{sample_simple, sample_simple_raw, Seed, SphereSampler, DEFAULT_MAX_RETRIES};
use crate::cover::{cover_weight, min_distance, weight};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::limits::EnumCap;
use crate::matspace::{Mat, MatrixCode};
use crate::prange::{optimal_split, prange_iteration, DecodingInstance, IterationOutcome};

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    Ok(())
}

fn random_message<R: Rng + ?Sized>(q: usize, k: usize, rng: &mut R) -> Vec<FieldElement> {
    (0..k).map(|_| FieldElement(rng.gen_range(0..q as u16))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    /// Pearson test of `observed` against probabilities `probs`.
    pub fn new(observed: Vec<u64>, probs: &[f64]) -> ChiSquareTest {
        let total: u64 = observed.iter().sum();
        let expected: Vec<f64> = probs.iter().map(|p| p * total as f64).collect();
        let statistic = observed
            .iter()
            .zip(&expected)
            .filter(|(_, &e)| e > 0.0)
            .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
            .sum();
        let dof = expected.iter().filter(|&&e| e > 0.0).count().saturating_sub(1);
        let p_value = if dof == 0 {
            1.0
        } else {
            1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic)
        };
        ChiSquareTest {
            observed,
            expected,
            statistic,
            dof,
            p_value,
        }
    }

    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrangeSuccessReport {
    pub trials: u64,
    pub info_blocks: u64,
    pub found: u64,
    /// Trials where the error vanishes on the kept block.
    pub error_free_blocks: u64,
    /// `found / trials`.
    pub rate: f64,
    /// `found / info_blocks`.
    pub conditional_rate: f64,
    pub predicted: f64,
}

/// One decoder iteration per trial on a fresh random code with a planted
/// simple-model error.
pub fn prange_success_experiment(
    field: &Field,
    m: usize,
    n: usize,
    k: usize,
    t: usize,
    trials: u64,
    seed: Seed,
) -> Result<PrangeSuccessReport> {
    require_trials(trials)?;
    let split = optimal_split(m, n, k)?;
    let predicted = rational_to_f64(&super::prange_success_probability(m, n, k, t, None)?.p_success);
    let q = field.order();
    let counts = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<[u64; 3]> {
            let mut rng = seed.derive(i);
            let code = MatrixCode::random(field, m, n, k, &mut rng)?;
            let c = code.encode(&random_message(q, k, &mut rng))?;
            let e = sample_simple(field, m, n, t, DEFAULT_MAX_RETRIES, &mut rng)?;
            let inst = DecodingInstance::planted(code, c, e.clone())?;
            let (rows, cols) = crate::prange::sample_block(m, n, &split, &mut rng);
            let clean = e.submatrix(&rows, &cols).is_zero() as u64;
            Ok(match crate::prange::attempt_block(&inst, &rows, &cols) {
                IterationOutcome::NoInfoBlock => [0, 0, clean],
                IterationOutcome::Rejected { .. } => [1, 0, clean],
                IterationOutcome::Found { .. } => [1, 1, clean],
            })
        })
        .try_reduce(|| [0; 3], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]))?;
    let [info_blocks, found, error_free_blocks] = counts;
    Ok(PrangeSuccessReport {
        trials,
        info_blocks,
        found,
        error_free_blocks,
        rate: found as f64 / trials as f64,
        conditional_rate: if info_blocks == 0 { 0.0 } else { found as f64 / info_blocks as f64 },
        predicted,
    })
}

/// Success frequency of repeated iterations on one fixed instance.
pub fn iteration_success_rate(inst: &DecodingInstance, iterations: u64, seed: Seed) -> Result<f64> {
    require_trials(iterations)?;
    let split = optimal_split(inst.code.m(), inst.code.n(), inst.code.k())?;
    let found = (0..iterations)
        .into_par_iter()
        .filter(|&i| {
            matches!(
                prange_iteration(inst, &split, &mut seed.derive(i)),
                IterationOutcome::Found { .. }
            )
        })
        .count();
    Ok(found as f64 / iterations as f64)
}

/// Hypergeometric law of the row count `t_x` for `t` lines drawn from `m + n`.
pub fn hypergeometric_tx(m: usize, n: usize, t: usize) -> Vec<f64> {
    let den = binomial((m + n) as u64, t as u64);
    (0..=t)
        .map(|tx| {
            let num = binomial(m as u64, tx as u64) * binomial(n as u64, (t - tx) as u64);
            super::log2_big(&num).exp2() / super::log2_big(&den).exp2()
        })
        .collect()
}

/// Row count of the minimal cover of simple-model errors against the
/// hypergeometric law.
pub fn tx_distribution_experiment(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    samples: u64,
    seed: Seed,
) -> Result<ChiSquareTest> {
    require_trials(samples)?;
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Vec<u64>> {
            let e = sample_simple(field, m, n, t, DEFAULT_MAX_RETRIES, &mut seed.derive(i))?;
            let mut v = vec![0u64; t + 1];
            v[cover_weight(&e).split().0] += 1;
            Ok(v)
        })
        .try_reduce(
            || vec![0u64; t + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(ChiSquareTest::new(counts, &hypergeometric_tx(m, n, t)))
}

/// `I_t` in the top-left corner.
pub fn identity_corner(field: &Field, m: usize, n: usize, t: usize) -> Mat {
    let mut e = Mat::zeros(field, m, n);
    for i in 0..t {
        e.set(i, i, FieldElement::ONE);
    }
    e
}

/// The first `t` rows set to one.
pub fn ones_rows(field: &Field, m: usize, n: usize, t: usize) -> Mat {
    let mut e = Mat::zeros(field, m, n);
    for i in 0..t {
        for j in 0..n {
            e.set(i, j, FieldElement::ONE);
        }
    }
    e
}

/// Exact `P(identity corner) / P(ones rows)` under the simple model: each
/// choice of row `i` or column `i` for the `t` diagonal entries is a line
/// set producing the identity corner, and overlapping lines fill fewer
/// entries.
pub fn simple_model_exact_ratio(q: usize, m: usize, n: usize, t: usize) -> f64 {
    let q = q as f64;
    (0..=t)
        .map(|a| {
            let filled = a * n + (t - a) * m - a * (t - a);
            binomial(t as u64, a as u64).to_f64().unwrap() * q.powi(t as i32 * n as i32 - filled as i32)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelRatioReport {
    pub trials: u64,
    pub identity_hits: u64,
    pub ones_hits: u64,
    pub ratio: f64,
    /// Delta-method standard error of `ratio`.
    pub std_error: f64,
    pub claimed: f64,
    pub exact: f64,
}

/// Frequencies of the identity-corner and all-ones-rows errors under the
/// simple model.
pub fn model_ratio_experiment(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    trials: u64,
    seed: Seed,
) -> Result<ModelRatioReport> {
    require_trials(trials)?;
    let id = identity_corner(field, m, n, t);
    let ones = ones_rows(field, m, n, t);
    let (a, b) = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(u64, u64)> {
            let e = sample_simple(field, m, n, t, DEFAULT_MAX_RETRIES, &mut seed.derive(i))?;
            Ok(((e == id) as u64, (e == ones) as u64))
        })
        .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
    let ratio = if b == 0 { f64::INFINITY } else { a as f64 / b as f64 };
    let std_error = if a == 0 || b == 0 {
        f64::INFINITY
    } else {
        ratio * (1.0 / a as f64 + 1.0 / b as f64).sqrt()
    };
    Ok(ModelRatioReport {
        trials,
        identity_hits: a,
        ones_hits: b,
        ratio,
        std_error,
        claimed: 2f64.powi(t as i32),
        exact: simple_model_exact_ratio(field.order(), m, n, t),
    })
}

/// Uniformity of the sphere sampler over the whole sphere.
pub fn sphere_uniformity_experiment(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    samples: u64,
    seed: Seed,
    cap: EnumCap,
) -> Result<ChiSquareTest> {
    require_trials(samples)?;
    let sphere = SphereSampler::new(field, m, n, t, cap)?;
    let len = sphere.len();
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; len],
            |mut acc, i| {
                let a = sphere.sample(&mut seed.derive(i));
                acc[sphere.position(&a).unwrap()] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; len],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
    Ok(ChiSquareTest::new(counts, &vec![1.0 / len as f64; len]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MdcReport {
    pub target_distance: usize,
    pub trials: u64,
    pub hits: u64,
    pub fraction: f64,
}

/// Largest distance a `k`-dimensional code can reach:
/// `min(m,n) - ceil(k / max(m,n)) + 1`.
pub fn max_cover_distance(m: usize, n: usize, k: usize) -> usize {
    let (big, small) = (m.max(n), m.min(n));
    (small + 1).saturating_sub(k.div_ceil(big))
}

/// Fraction of random codes reaching the maximum cover distance.
pub fn mdc_density_experiment(
    field: &Field,
    m: usize,
    n: usize,
    k: usize,
    trials: u64,
    seed: Seed,
    cap: EnumCap,
) -> Result<MdcReport> {
    require_trials(trials)?;
    if k == 0 || k > m * n {
        return Err(Error::domain(format!("k = {k} outside 1..={}", m * n)));
    }
    cap.check(field.order(), k)?;
    let target = max_cover_distance(m, n, k);
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let code = MatrixCode::random(field, m, n, k, &mut seed.derive(i))?;
            Ok((min_distance(&code, cap)? >= target) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(MdcReport {
        target_distance: target,
        trials,
        hits,
        fraction: hits as f64 / trials as f64,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GvProxyReport {
    pub k: usize,
    pub codes: u64,
    /// Codes with no sampled codeword of weight below `delta n`.
    pub passing: u64,
    pub fraction: f64,
    pub lightest_seen: usize,
}

/// Samples `samples` nonzero codewords from each of `codes` random codes of
/// the GV dimension and checks none is lighter than `delta n`. Codewords
/// come from a walk that resamples one message coordinate per step, so each
/// visited message is uniform.
#[allow(clippy::too_many_arguments)]
pub fn gv_proxy_experiment(
    field: &Field,
    m: usize,
    n: usize,
    delta: f64,
    eps: f64,
    codes: u64,
    samples: u64,
    seed: Seed,
) -> Result<GvProxyReport> {
    require_trials(codes)?;
    require_trials(samples)?;
    let params = super::gv_random_code_params(field.order() as u64, m, n, delta, eps)?;
    let k = params.k;
    if k == 0 {
        return Err(Error::domain("GV dimension is zero"));
    }
    let threshold = delta * n as f64;
    let q = field.order() as u16;
    let results: Vec<usize> = (0..codes)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.derive(i);
            let gens: Vec<Mat> = (0..k).map(|_| Mat::random(field, m, n, &mut rng)).collect();
            let mut u = random_message(q as usize, k, &mut rng);
            let mut c = crate::cover::combine(field, m, n, &gens, &u);
            let mut nonzero = u.iter().filter(|x| !x.is_zero()).count();
            let mut lightest = usize::MAX;
            let mut seen = 0;
            while seen < samples {
                let j = rng.gen_range(0..k);
                let new = FieldElement(rng.gen_range(0..q));
                let diff = field.sub(new, u[j]);
                if !diff.is_zero() {
                    c.add_scaled_assign(diff, &gens[j]);
                    nonzero = nonzero + (!new.is_zero()) as usize - (!u[j].is_zero()) as usize;
                    u[j] = new;
                }
                if nonzero > 0 {
                    lightest = lightest.min(weight(&c));
                    seen += 1;
                }
            }
            lightest
        })
        .collect();
    let passing = results.iter().filter(|&&w| w as f64 >= threshold).count() as u64;
    Ok(GvProxyReport {
        k,
        codes,
        passing,
        fraction: passing as f64 / codes as f64,
        lightest_seen: results.into_iter().min().unwrap_or(0),
    })
}

/// Raw simple-model fills whose line set is itself a minimal cover, split by
/// `(t_x, t_y)` of the drawn lines.
pub fn raw_split_counts(field: &Field, m: usize, n: usize, t: usize, samples: u64, seed: Seed) -> Result<Vec<u64>> {
    require_trials(samples)?;
    Ok((0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; t + 1],
            |mut acc, i| {
                let raw = sample_simple_raw(field, m, n, t, &mut seed.derive(i));
                if weight(&raw.matrix) == t {
                    acc[raw.rows.len()] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; t + 1],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergeometric_sums_to_one() {
        let p = hypergeometric_tx(8, 8, 3);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 0.1).abs() < 1e-12 && (p[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn chi_square_basic() {
        let t = ChiSquareTest::new(vec![25, 25, 25, 25], &[0.25; 4]);
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 3);
        assert!((t.p_value - 1.0).abs() < 1e-12);
        let skew = ChiSquareTest::new(vec![100, 0, 0, 0], &[0.25; 4]);
        assert!(skew.rejects_at(0.01));
    }

    #[test]
    fn exact_ratio_values() {
        assert_eq!(simple_model_exact_ratio(2, 4, 4, 2), 6.0);
        assert_eq!(simple_model_exact_ratio(2, 4, 4, 1), 2.0);
        assert_eq!(simple_model_exact_ratio(3, 5, 5, 2), 1.0 + 2.0 * 3.0 + 1.0);
    }

    #[test]
    fn exact_ratio_against_enumeration() {
        // Enumerate line sets and fills for 3x3 over GF(2), t = 2.
        let f = Field::new(2, 1).unwrap();
        let (m, n, t) = (3, 3, 2);
        let id = identity_corner(&f, m, n, t);
        let ones = ones_rows(&f, m, n, t);
        let (mut pa, mut pb) = (0.0, 0.0);
        for a in 0..6 {
            for b in (a + 1)..6 {
                let lines = [a, b];
                let mut cells = vec![];
                for i in 0..m {
                    for j in 0..n {
                        if lines.contains(&i) || lines.contains(&(j + m)) {
                            cells.push((i, j));
                        }
                    }
                }
                let weight_each = 0.5f64.powi(cells.len() as i32);
                let hit = |target: &Mat| {
                    (0..m).all(|i| (0..n).all(|j| target.get(i, j).is_zero() || cells.contains(&(i, j))))
                };
                if hit(&id) {
                    pa += weight_each;
                }
                if hit(&ones) {
                    pb += weight_each;
                }
            }
        }
        assert!((pa / pb - simple_model_exact_ratio(2, m, n, t)).abs() < 1e-12);
    }

    #[test]
    fn max_distance_values() {
        assert_eq!(max_cover_distance(3, 3, 3), 3);
        assert_eq!(max_cover_distance(3, 3, 9), 1);
        assert_eq!(max_cover_distance(4, 4, 5), 3);
        assert_eq!(max_cover_distance(5, 3, 6), 2);
    }

    #[test]
    fn mdc_full_space() {
        let f = Field::new(2, 1).unwrap();
        let r = mdc_density_experiment(&f, 2, 2, 4, 20, Seed(0), EnumCap(1 << 10)).unwrap();
        assert_eq!(r.target_distance, 1);
        assert_eq!(r.fraction, 1.0);
        assert!(mdc_density_experiment(&f, 2, 2, 4, 0, Seed(0), EnumCap(1 << 10)).is_err());
    }

    #[test]
    fn experiments_are_deterministic() {
        let f = Field::new(2, 1).unwrap();
        let a = tx_distribution_experiment(&f, 5, 5, 2, 500, Seed(9)).unwrap();
        let b = tx_distribution_experiment(&f, 5, 5, 2, 500, Seed(9)).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| tx_distribution_experiment(&f, 5, 5, 2, 500, Seed(9)).unwrap());
        assert_eq!(a, c);
    }
}
