//! Closed-form bounds and cost estimates, plus Monte Carlo experiments.

pub mod bounds;
pub mod cost;
pub mod experiments;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use bounds::{
    ball_bounds, bounds_report, gv_random_code_params, gv_rate_lower, singleton_bound,
    sphere_lower_bound, BallBounds, BoundsReport, GvParams,
};
pub use cost::{
    asymptotic_constants, c_cover, c_cover_gv, c_prange, c_prange_gv, cost_report,
    finite_vs_asymptotic_check, minrank_comparison, prange_success_probability,
    stern_list_lower, AsymptoticConstants, CostReport, FiniteRow, MinRankReport,
    SternList, SuccessProbability,
};

const INVERSE_TOL: f64 = 1e-12;
const INVERSE_MAX_ITER: usize = 200;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial with a signed top argument; negative `n` gives zero.
pub fn binomial_signed(n: i64, k: u64) -> BigUint {
    if n < 0 {
        BigUint::zero()
    } else {
        binomial(n as u64, k)
    }
}

/// `log2(x)`; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

pub fn log2_rational(x: &BigRational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    match (n.to_biguint(), d.to_biguint()) {
        (Some(n), Some(d)) => log2_big(&n) - log2_big(&d),
        _ => f64::NAN,
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let l = log2_rational(x);
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp2()
    }
}

fn check_unit(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::domain(format!("{what} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// q-ary entropy with `0 log 0 = 0`.
pub fn entropy_q(q: u64, p: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("entropy base {q} < 2")));
    }
    check_unit(p, "entropy argument")?;
    let qf = q as f64;
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.log2() };
    let bits = p * (qf - 1.0).log2() - xlogx(p) - xlogx(1.0 - p);
    Ok(bits / qf.log2())
}

/// Binary entropy.
pub fn h2(p: f64) -> Result<f64> {
    entropy_q(2, p)
}

/// Inverse of `entropy_q` on `[0, 1 - 1/q]` by bisection.
pub fn entropy_q_inverse(q: u64, y: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("entropy base {q} < 2")));
    }
    check_unit(y, "entropy value")?;
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1.0 / q as f64);
    if y >= 1.0 {
        return Ok(hi);
    }
    for _ in 0..INVERSE_MAX_ITER {
        if hi - lo <= INVERSE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if entropy_q(q, mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
