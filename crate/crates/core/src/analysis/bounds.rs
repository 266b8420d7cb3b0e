//! Size bounds for cover-metric balls and spheres, and code-parameter bounds.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{binomial, entropy_q, h2, log2_big};
use crate::cover::{ball_size_exact, sphere_size_exact};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::limits::EnumCap;

/// Largest dimension allowed by the Singleton-type bound at distance `d`.
pub fn singleton_bound(m: usize, n: usize, d: usize) -> Result<usize> {
    if d == 0 || d > m.min(n) {
        return Err(Error::domain(format!("distance {d} outside 1..={}", m.min(n))));
    }
    Ok(m.max(n) * (m.min(n) - d + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallBounds {
    /// `q^{md}`.
    pub lower: BigUint,
    pub upper: f64,
    pub upper_log2: f64,
}

/// Sandwich on the ball of radius `d`: `q^{md} <= V <= (d+1) 2^{(m+n)H_2(d/(m+n))} q^{md}`.
pub fn ball_bounds(q: u64, m: usize, n: usize, d: usize) -> Result<BallBounds> {
    if n > m {
        return Err(Error::domain(format!("ball bounds need n <= m (m={m}, n={n})")));
    }
    if d == 0 || d > n {
        return Err(Error::domain(format!("radius {d} outside 1..={n}")));
    }
    let lower = BigUint::from(q).pow((m * d) as u32);
    let upper_log2 = ((d + 1) as f64).log2()
        + (m + n) as f64 * h2(d as f64 / (m + n) as f64)?
        + log2_big(&lower);
    Ok(BallBounds {
        lower,
        upper: upper_log2.exp2(),
        upper_log2,
    })
}

/// Lower bound on the sphere of radius `t`, summed over splits `t_x + t_y = t`.
/// Negative base factors are clamped to zero.
pub fn sphere_lower_bound(q: u64, m: usize, n: usize, t: usize) -> Result<BigUint> {
    if t > m.min(n) {
        return Err(Error::domain(format!("radius {t} exceeds min(m, n)")));
    }
    let qb = BigInt::from(q);
    let pow = |e: usize| qb.pow(e as u32);
    let clamp = |x: BigInt| if x.is_negative() { BigInt::zero() } else { x };
    let mut total = BigInt::zero();
    for tx in 0..=t {
        let ty = t - tx;
        if tx > m || ty > n {
            continue;
        }
        let row_base = clamp(pow(n - ty) - BigInt::from((q - 1) as usize * (n - t)) - pow(tx));
        let col_base = clamp(pow(m - tx) - BigInt::from((q - 1) as usize * (m - t)) - pow(ty));
        let term = BigInt::from(binomial(m as u64, tx as u64))
            * BigInt::from(binomial(n as u64, ty as u64))
            * pow(tx * ty)
            * row_base.pow(tx as u32)
            * col_base.pow(ty as u32);
        total += term;
    }
    Ok(total.to_biguint().unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GvParams {
    pub k: usize,
    pub rate: f64,
    /// Union-bound lower bound on the probability that `k` random generators
    /// are independent.
    pub full_rank_lower: f64,
}

/// Dimension for which a random code has relative cover distance at least
/// `delta` with high probability.
pub fn gv_random_code_params(q: u64, m: usize, n: usize, delta: f64, eps: f64) -> Result<GvParams> {
    if n > m || n == 0 {
        return Err(Error::domain(format!("need 0 < n <= m (m={m}, n={n})")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::domain(format!("delta = {delta} outside [0, 1)")));
    }
    let slack = 1.0 - entropy_q(q, delta)?;
    if !(0.0..slack).contains(&eps) {
        return Err(Error::domain(format!("eps = {eps} outside [0, {slack})")));
    }
    let (mf, nf) = (m as f64, n as f64);
    let dn = delta * nf;
    if dn < 1.0 {
        return Err(Error::domain(format!("delta * n = {dn} < 1")));
    }
    let per_col = mf - mf * delta + mf / nf
        - ((mf + nf) / nf) * h2((dn - 1.0) / (mf + nf))?
        - dn.log(q as f64) / nf
        - eps;
    let k = (per_col * nf).ceil().clamp(0.0, (m * n) as f64) as usize;
    let mn = (m * n) as f64;
    let full_rank_lower = if k == 0 {
        1.0
    } else {
        (1.0 - 2.0 * (q as f64).powf(k as f64 - 1.0 - mn)).max(0.0)
    };
    Ok(GvParams {
        k,
        rate: k as f64 / mn,
        full_rank_lower,
    })
}

/// GV-type rate `1 - log_q(V(d - 1)) / (mn)` using the ball upper bound.
pub fn gv_rate_lower(q: u64, m: usize, n: usize, d: usize) -> Result<f64> {
    let (big, small) = (m.max(n), m.min(n));
    if d == 0 || d > small {
        return Err(Error::domain(format!("distance {d} outside 1..={small}")));
    }
    if d == 1 {
        return Ok(1.0);
    }
    let b = ball_bounds(q, big, small, d - 1)?;
    Ok(1.0 - b.upper_log2 / (q as f64).log2() / (m * n) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub singleton_k_max: usize,
    pub ball: BallBounds,
    pub sphere_lower: BigUint,
    pub gv_rate_lower: f64,
    pub exact_ball: Option<u64>,
    pub exact_sphere: Option<u64>,
}

/// Bounds at radius `d`; exact sizes are filled in when `q^{mn}` fits the cap.
pub fn bounds_report(field: &Field, m: usize, n: usize, d: usize, cap: EnumCap) -> Result<BoundsReport> {
    let q = field.order() as u64;
    let (big, small) = (m.max(n), m.min(n));
    let exact = |f: fn(&Field, usize, usize, usize, EnumCap) -> Result<u64>| match f(field, m, n, d, cap) {
        Ok(v) => Ok(Some(v)),
        Err(Error::TooLargeToEnumerate { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(BoundsReport {
        singleton_k_max: singleton_bound(m, n, d)?,
        ball: ball_bounds(q, big, small, d)?,
        sphere_lower: sphere_lower_bound(q, m, n, d)?,
        gv_rate_lower: gv_rate_lower(q, m, n, d)?,
        exact_ball: exact(ball_size_exact)?,
        exact_sphere: exact(sphere_size_exact)?,
    })
}

impl BoundsReport {
    pub fn sphere_lower_f64(&self) -> f64 {
        self.sphere_lower.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn ball_lower_f64(&self) -> f64 {
        if self.ball.lower.is_one() {
            1.0
        } else {
            log2_big(&self.ball.lower).exp2()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_bound(4, 4, 3).unwrap(), 8);
        assert_eq!(singleton_bound(5, 3, 1).unwrap(), 15);
        assert_eq!(singleton_bound(5, 3, 3).unwrap(), 5);
        assert!(singleton_bound(4, 4, 0).is_err());
        assert!(singleton_bound(4, 4, 5).is_err());
    }

    #[test]
    fn ball_examples() {
        let b = ball_bounds(2, 2, 2, 1).unwrap();
        assert_eq!(b.lower, BigUint::from(4u32));
        let expect = 2.0 * (4.0 * h2(0.25).unwrap()).exp2() * 4.0;
        assert!((b.upper - expect).abs() < 1e-9);
        assert!((b.upper - 75.8).abs() < 0.1);
        let full = ball_bounds(3, 3, 3, 3).unwrap();
        assert_eq!(full.lower, BigUint::from(3u32).pow(9));
        let mut last = 0.0;
        for d in 1..=6 {
            let b = ball_bounds(2, 6, 6, d).unwrap();
            assert!(b.upper_log2 > last);
            last = b.upper_log2;
        }
        assert!(ball_bounds(2, 2, 3, 1).is_err());
        assert!(ball_bounds(2, 3, 3, 0).is_err());
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_lower_bound(2, 4, 4, 0).unwrap(), BigUint::one());
        assert_eq!(sphere_lower_bound(2, 2, 2, 1).unwrap(), BigUint::from(4u32));
        assert!(sphere_lower_bound(2, 2, 3, 3).is_err());
    }

    #[test]
    fn gv_examples() {
        let p = gv_random_code_params(2, 24, 24, 0.25, 0.05).unwrap();
        let direct = (24.0 - 6.0 + 1.0 - 2.0 * h2(5.0 / 48.0).unwrap() - 6f64.log2() / 24.0 - 0.05) * 24.0;
        assert_eq!(p.k, direct.ceil() as usize);
        assert!(p.k <= 24 * 24);
        assert!(p.full_rank_lower > 0.99);
        assert!(gv_random_code_params(2, 24, 24, 0.01, 0.0).is_err());
        assert!(gv_random_code_params(2, 24, 24, 0.25, 0.9).is_err());
        assert!(gv_random_code_params(2, 8, 9, 0.25, 0.0).is_err());
        assert!(gv_random_code_params(2, 8, 8, 1.0, 0.0).is_err());
    }

    #[test]
    fn gv_full_rank_bound_against_product() {
        for (q, mn, k) in [(2u64, 16usize, 10usize), (3, 9, 8), (2, 36, 34)] {
            let prod: f64 = (0..k).map(|i| 1.0 - (q as f64).powf(i as f64 - mn as f64)).product();
            let union = 1.0 - 2.0 * (q as f64).powf(k as f64 - 1.0 - mn as f64);
            assert!(prod >= union);
        }
    }

    #[test]
    fn gv_rate_trend() {
        let delta = 0.25;
        let gaps: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&n| {
                let d = (delta * n as f64) as usize;
                let upper = ball_bounds(2, n, n, d).unwrap().upper_log2;
                (1.0 - upper / (n * n) as f64 - (1.0 - delta)).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        // Rate from the ball of radius d - 1 stays above the radius-d one.
        for n in [8usize, 16, 32] {
            let d = n / 4;
            let upper = ball_bounds(2, n, n, d).unwrap().upper_log2;
            assert!(gv_rate_lower(2, n, n, d).unwrap() > 1.0 - upper / (n * n) as f64);
        }
    }
}
