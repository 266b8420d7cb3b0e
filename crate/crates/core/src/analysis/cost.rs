//! Decoder success probability, asymptotic cost constants and comparisons
//! with rank-metric solvers.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{binomial, binomial_signed, entropy_q_inverse, h2, log2_big, log2_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::prange::{optimal_split, SplitChoice};

/// `ceil(2 sqrt(k))`, computed exactly.
pub fn ceil_two_sqrt(k: u64) -> u64 {
    let s = (4 * k).sqrt();
    if s * s < 4 * k {
        s + 1
    } else {
        s
    }
}

fn ratio(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessProbability {
    pub split: SplitChoice,
    pub p_success: BigRational,
    pub lower: BigRational,
    pub upper: BigRational,
    pub expected_iterations: f64,
}

impl SuccessProbability {
    pub fn p_f64(&self) -> f64 {
        rational_to_f64(&self.p_success)
    }

    pub fn lower_f64(&self) -> f64 {
        rational_to_f64(&self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        rational_to_f64(&self.upper)
    }

    /// `log2(1 / P(S))`.
    pub fn log2_inverse(&self) -> f64 {
        0.0 - log2_rational(&self.p_success)
    }
}

/// Exact per-iteration success probability `C(t̂_x + t̂_y, t) / C(m + n, t)`
/// with its binomial sandwich. The split is the optimal one unless
/// `erased_rows` is given.
pub fn prange_success_probability(
    m: usize,
    n: usize,
    k: usize,
    t: usize,
    erased_rows: Option<usize>,
) -> Result<SuccessProbability> {
    let best = optimal_split(m, n, k)?;
    if t > m.min(n) {
        return Err(Error::ParameterRegime(format!("t = {t} exceeds min(m, n)")));
    }
    let split = match erased_rows {
        None => best,
        Some(r) => SplitChoice::for_rows(m, n, k, r)
            .ok_or_else(|| Error::ParameterRegime(format!("no valid split with {r} erased rows")))?,
    };
    let lines = (m + n) as u64;
    let den = binomial(lines, t as u64);
    let s = ceil_two_sqrt(k as u64) as i64;
    let p_success = ratio(binomial(split.erased() as u64, t as u64), &den);
    let lower = ratio(binomial_signed(lines as i64 - s - 3, t as u64), &den);
    let upper = ratio(binomial_signed(lines as i64 - s, t as u64), &den);
    let expected_iterations = if p_success.is_zero() {
        f64::INFINITY
    } else {
        rational_to_f64(&p_success.recip())
    };
    Ok(SuccessProbability {
        split,
        p_success,
        lower,
        upper,
        expected_iterations,
    })
}

fn check_rate(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("rate {r} outside [0, 1]")));
    }
    Ok(())
}

/// `a * H_2(x / a)` with the `a = 0` limit.
fn scaled_h2(a: f64, x: f64) -> Result<f64> {
    if a == 0.0 {
        if x == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::domain(format!("entropy argument {x}/0")));
    }
    Ok(a * h2(x / a)?)
}

/// Hamming-metric Prange exponent per code length.
pub fn c_prange(rate: f64, tau: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(h2(tau)? - scaled_h2(1.0 - rate, tau)?)
}

/// `c_prange` at half the q-ary GV distance.
pub fn c_prange_gv(q: u64, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let tau = entropy_q_inverse(q, 1.0 - rate)? / 2.0;
    c_prange(rate, tau)
}

/// Cover-metric Prange exponent per line count, for square matrices.
pub fn c_cover(rate: f64, tau: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(h2(tau / 2.0)? - scaled_h2(1.0 - rate.sqrt(), tau / 2.0)?)
}

/// `c_cover` at the cover GV radius `(1 - R) / 2`, in closed form.
pub fn c_cover_gv(rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let s = rate.sqrt();
    Ok(h2((1.0 - rate) / 4.0)? - (1.0 - s) * h2((1.0 + s) / 4.0)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticConstants {
    pub c_prange: f64,
    pub c_prange_gv: f64,
    pub c_cover: f64,
    pub c_cover_gv: f64,
}

pub fn asymptotic_constants(q: u64, rate: f64, tau: f64) -> Result<AsymptoticConstants> {
    Ok(AsymptoticConstants {
        c_prange: c_prange(rate, tau)?,
        c_prange_gv: c_prange_gv(q, rate)?,
        c_cover: c_cover(rate, tau)?,
        c_cover_gv: c_cover_gv(rate)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRow {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub log2_inverse_p: f64,
    /// `log2(1/P(S)) / (m + n)`.
    pub per_line: f64,
    /// `log2(1/P(S)) / (mn)`.
    pub per_entry: f64,
    pub c_cover: f64,
}

/// Finite-length exponents for square codes with `k = round(R n^2)` and
/// `t = round(tau n)`.
pub fn finite_vs_asymptotic_check(rate: f64, tau: f64, n_list: &[usize]) -> Result<Vec<FiniteRow>> {
    let c = c_cover(rate, tau)?;
    n_list
        .iter()
        .map(|&n| {
            let k = ((rate * (n * n) as f64).round() as usize).max(1);
            let t = (tau * n as f64).round() as usize;
            let p = prange_success_probability(n, n, k, t, None)?;
            let l = p.log2_inverse();
            Ok(FiniteRow {
                n,
                k,
                t,
                log2_inverse_p: l,
                per_line: l / (2 * n) as f64,
                per_entry: l / (n * n) as f64,
                c_cover: c,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinRankReport {
    /// `log_q N` with `N = q^{t(m+n-t) - (mn-k)}`.
    pub expected_solutions_exponent: i64,
    pub expected_solutions: f64,
    /// `n^2 T R` with `T = t/n`, `R = k/n`, in powers of `q`.
    pub grs_exponent: f64,
    pub bardet_lower_log2: f64,
    pub prange_upper_log2: f64,
    /// `(m + n) n^2` field operations per cover-weight check.
    pub cover_check_cost: u64,
}

pub fn minrank_comparison(q: u64, m: usize, n: usize, k: usize, t: usize) -> Result<MinRankReport> {
    if t > m.min(n) {
        return Err(Error::domain(format!("t = {t} exceeds min(m, n)")));
    }
    if k > m * n {
        return Err(Error::domain(format!("k = {k} exceeds mn")));
    }
    let exponent = (t * (m + n - t)) as i64 - (m * n - k) as i64;
    let nf = n as f64;
    Ok(MinRankReport {
        expected_solutions_exponent: exponent,
        expected_solutions: (exponent as f64 * (q as f64).log2()).exp2(),
        grs_exponent: nf * nf * (t as f64 / nf) * (k as f64 / nf),
        bardet_lower_log2: 2.0 * log2_big(&binomial(n as u64, t as u64)),
        prange_upper_log2: log2_big(&binomial((m + n) as u64, t as u64)),
        cover_check_cost: ((m + n) * n * n) as u64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SternList {
    /// `log2[C(s, v/2) (q^s - 1)^{v/2}]`, `s = ceil(sqrt(k + l))`.
    pub list_log2: f64,
    /// `n sqrt(R) (v/2) log2 q` with `R = k / n^2`.
    pub bound_log2: f64,
}

/// Size of the half-weight lists a Stern-style split would enumerate.
pub fn stern_list_lower(q: u64, k: usize, l: usize, v: usize, n: usize) -> Result<SternList> {
    if !v.is_multiple_of(2) {
        return Err(Error::domain(format!("v = {v} must be even")));
    }
    if n == 0 || q < 2 {
        return Err(Error::domain("need n >= 1 and q >= 2"));
    }
    if v == 0 {
        return Ok(SternList { list_log2: 0.0, bound_log2: 0.0 });
    }
    let kl = (k + l) as u64;
    let mut s = kl.sqrt();
    if s * s < kl {
        s += 1;
    }
    let half = (v / 2) as u64;
    let per = BigUint::from(q).pow(s as u32) - BigUint::one();
    let list_log2 = log2_big(&binomial(s, half)) + half as f64 * log2_big(&per);
    let rate = k as f64 / (n * n) as f64;
    let bound_log2 = n as f64 * rate.sqrt() * half as f64 * (q as f64).log2();
    Ok(SternList { list_log2, bound_log2 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub success: SuccessProbability,
    pub rate: f64,
    pub tau: f64,
    pub c_prange: Option<f64>,
    pub c_prange_gv: Option<f64>,
    pub c_cover: Option<f64>,
    pub c_cover_gv: Option<f64>,
    pub minrank: MinRankReport,
    /// List size for `l = 0` and the largest even `v <= t`.
    pub stern: SternList,
}

/// Cost summary at `R = k/(mn)`, `tau = t/n`. Constants whose entropy
/// arguments leave `[0, 1]` are `None`.
pub fn cost_report(q: u64, m: usize, n: usize, k: usize, t: usize) -> Result<CostReport> {
    let success = prange_success_probability(m, n, k, t, None)?;
    let rate = k as f64 / (m * n) as f64;
    let tau = t as f64 / n as f64;
    Ok(CostReport {
        success,
        rate,
        tau,
        c_prange: c_prange(rate, tau).ok(),
        c_prange_gv: c_prange_gv(q, rate).ok(),
        c_cover: c_cover(rate, tau).ok(),
        c_cover_gv: c_cover_gv(rate).ok(),
        minrank: minrank_comparison(q, m, n, k, t)?,
        stern: stern_list_lower(q, k, 0, t - t % 2, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn success_examples() {
        let p = prange_success_probability(4, 4, 4, 2, None).unwrap();
        assert_eq!(p.p_success, frac(3, 14));
        assert_eq!(p.split, SplitChoice { erased_rows: 2, erased_cols: 2 });
        let p0 = prange_success_probability(6, 6, 4, 0, None).unwrap();
        assert_eq!(p0.p_success, frac(1, 1));
        let p = prange_success_probability(6, 6, 4, 2, None).unwrap();
        assert_eq!(p.p_success, frac(28, 66));
        let forced = prange_success_probability(6, 6, 4, 2, Some(0)).unwrap();
        assert_eq!(forced.p_success, frac(10, 66));
        assert!(prange_success_probability(4, 4, 16, 1, None).is_err());
        assert!(prange_success_probability(6, 6, 4, 7, None).is_err());
    }

    #[test]
    fn ceil_two_sqrt_values() {
        for k in 1..2000u64 {
            let expected = (2.0 * (k as f64).sqrt() - 1e-9).ceil() as u64;
            assert_eq!(ceil_two_sqrt(k), expected, "k={k}");
        }
    }

    #[test]
    fn sandwich_scan() {
        for m in 4..=12 {
            for k in 1..=m * m / 2 {
                for t in 1..=m / 2 {
                    let p = prange_success_probability(m, m, k, t, None).unwrap();
                    assert!(p.lower <= p.p_success && p.p_success <= p.upper, "m={m} k={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn cover_gv_identity() {
        for i in 1..=19 {
            let r = i as f64 * 0.05;
            let a = c_cover(r, (1.0 - r) / 2.0).unwrap();
            let b = c_cover_gv(r).unwrap();
            assert!((a - b).abs() < 1e-12, "R={r}");
        }
        assert!(c_cover_gv(0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn constants_domain_edges() {
        assert!(c_cover(0.99, 0.5).is_err());
        assert_eq!(c_cover(1.0, 0.0).unwrap(), 0.0);
        assert!(c_prange(0.9, 0.2).is_err());
        assert!(c_cover(1.2, 0.1).is_err());
        let c = asymptotic_constants(2, 0.5, 0.1).unwrap();
        assert!(c.c_prange > 0.0 && c.c_cover > 0.0 && c.c_prange_gv > 0.0 && c.c_cover_gv > 0.0);
    }

    #[test]
    fn finite_rows() {
        let rows = finite_vs_asymptotic_check(0.25, 0.375, &[8, 16, 32, 64]).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].per_entry < w[0].per_entry);
        }
        let last = rows.last().unwrap();
        assert!((last.per_line - last.c_cover).abs() <= 0.25 * last.c_cover);
        let zero = finite_vs_asymptotic_check(0.25, 0.0, &[8]).unwrap();
        assert_eq!((zero[0].log2_inverse_p, zero[0].per_line, zero[0].per_entry), (0.0, 0.0, 0.0));
    }

    #[test]
    fn minrank_examples() {
        let r = minrank_comparison(2, 8, 8, 16, 2).unwrap();
        assert!((r.prange_upper_log2 - 120f64.log2()).abs() < 1e-12);
        assert!((r.bardet_lower_log2 - 2.0 * 28f64.log2()).abs() < 1e-12);
        assert!(r.prange_upper_log2 < r.bardet_lower_log2);
        assert_eq!(r.cover_check_cost, 16 * 64);
        // k = mn - t(m + n - t) gives N = 1.
        let one = minrank_comparison(3, 6, 6, 36 - 2 * 10, 2).unwrap();
        assert_eq!(one.expected_solutions_exponent, 0);
        assert_eq!(one.expected_solutions, 1.0);
        // t = n(1 - R)/2 with m = n: exponent -n^2 (1 - R)^2 / 4.
        let (n, k) = (8usize, 32usize);
        let rate = k as f64 / (n * n) as f64;
        let t = (n as f64 * (1.0 - rate) / 2.0) as usize;
        let r = minrank_comparison(2, n, n, k, t).unwrap();
        assert_eq!(r.expected_solutions_exponent as f64, -((n * n) as f64) * (1.0 - rate).powi(2) / 4.0);
        assert!(minrank_comparison(2, 4, 4, 4, 5).is_err());
    }

    #[test]
    fn stern_examples() {
        let s = stern_list_lower(2, 64, 0, 4, 16).unwrap();
        assert_eq!(s.bound_log2, 16.0);
        assert!((s.list_log2 - (28f64.log2() + 2.0 * 255f64.log2())).abs() < 1e-12);
        assert!(s.list_log2 >= s.bound_log2);
        assert_eq!(stern_list_lower(2, 64, 0, 0, 16).unwrap(), SternList { list_log2: 0.0, bound_log2: 0.0 });
        assert!(stern_list_lower(2, 64, 0, 3, 16).is_err());
        let b: Vec<f64> = [2u64, 4, 16]
            .iter()
            .map(|&q| stern_list_lower(q, 64, 0, 4, 16).unwrap().bound_log2)
            .collect();
        assert_eq!(b, vec![16.0, 32.0, 64.0]);
    }
}
