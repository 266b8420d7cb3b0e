//! Arithmetic in GF(q), q = p^e, with a canonical element encoding.
//!
//! An element is an index in `[0, q)`. Read in base `p`, its digits are the
//! coefficients of a polynomial over GF(p) (constant term least significant),
//! reduced modulo the lexicographically smallest monic irreducible polynomial
//! of degree `e`. Index 0 is the additive identity and index 1 the
//! multiplicative identity.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// A field element by canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct Tables {
    p: u32,
    e: u32,
    q: usize,
    /// Modulus coefficients, highest degree first (`c_e = 1`).
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive `g`, stored twice over to skip a modulo.
    exp: Vec<u16>,
    log: Vec<u32>,
    neg: Vec<u16>,
    /// Full addition table for small odd-characteristic fields.
    add: Option<Vec<u16>>,
}

/// A finite field handle. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.e == other.0.e)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn to_digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo a monic `f`, both low-degree-first.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let df = f.len() - 1;
    let mut r = a.to_vec();
    while r.len() > df {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - df;
            for (i, &c) in f[..df].iter().enumerate() {
                let sub = (lead * c) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, f, p);
    r.resize(f.len() - 1, 0);
    r
}

/// Monic candidate of degree `deg` whose lower coefficients, read
/// high-degree-first, are the base-`p` digits of `rank`. Returned low-first.
fn monic_candidate(rank: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut f = to_digits(rank, p, deg);
    f.push(1);
    f
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for rank in 0..p.pow(d as u32) {
            let g = monic_candidate(rank, p, d);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e`, low-first.
fn canonical_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    (0..p.pow(e))
        .map(|rank| monic_candidate(rank, p, e as usize))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds GF(p^e) with its canonical modulus.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if e == 0 {
            return Err(Error::InvalidDegree);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let too_large = Error::FieldTooLarge { p, e };
        let q = (p as u64).checked_pow(e).ok_or(too_large)?;
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, e });
        }
        let q = q as usize;
        let modulus_low = canonical_modulus(p, e);
        let e_us = e as usize;

        let mul_poly = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return (a * b) % p;
            }
            let da = to_digits(a, p, e_us);
            let db = to_digits(b, p, e_us);
            from_digits(&poly_mulmod(&da, &db, &modulus_low, p), p)
        };

        // Primitive element: order exactly q - 1.
        let factors = prime_factors(q - 1);
        let pow = |g: u32, mut k: usize| -> u32 {
            let mut base = g;
            let mut acc = 1u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul_poly(acc, base);
                }
                base = mul_poly(base, base);
                k >>= 1;
            }
            acc
        };
        let generator = (1..q as u32)
            .find(|&g| factors.iter().all(|&r| pow(g, (q - 1) / r) != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u16; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i] = x as u16;
            exp[i + q - 1] = x as u16;
            log[x as usize] = i as u32;
            x = mul_poly(x, generator);
        }

        let neg: Vec<u16> = (0..q as u32)
            .map(|a| {
                let d: Vec<u32> = to_digits(a, p, e_us)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                from_digits(&d, p) as u16
            })
            .collect();

        let add = if p != 2 && q <= 256 {
            let mut table = vec![0u16; q * q];
            for a in 0..q as u32 {
                let da = to_digits(a, p, e_us);
                for b in 0..q as u32 {
                    let db = to_digits(b, p, e_us);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    table[a as usize * q + b as usize] = from_digits(&s, p) as u16;
                }
            }
            Some(table)
        } else {
            None
        };

        let modulus = modulus_low.iter().rev().copied().collect();
        Ok(Field(Arc::new(Tables {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
        })))
    }

    /// GF(q) from its order, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NonPrime(q as u32));
        }
        if q > MAX_ORDER {
            return Err(Error::domain(format!("field order {q} exceeds 2^16")));
        }
        let q32 = q as u32;
        let p = (2..=q32).find(|d| q32.is_multiple_of(*d)).unwrap();
        let mut e = 0;
        let mut rest = q32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::domain(format!("{q} is not a prime power")));
        }
        Field::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Modulus coefficients `c_e ... c_0`, highest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.0.q as u64 {
            return Err(Error::InvalidElement {
                index,
                order: self.0.q,
            });
        }
        Ok(FieldElement(index as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q as u32).map(|i| FieldElement(i as u16))
    }

    /// Base-`p` coefficient vector of `a`, constant term first.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        to_digits(a.0 as u32, self.0.p, self.0.e as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> FieldElement {
        let p = self.0.p;
        let reduced: Vec<u32> = coeffs.iter().map(|c| c % p).collect();
        FieldElement(from_digits(&reduced, p) as u16)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let t = &*self.0;
        if t.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if let Some(table) = &t.add {
            return FieldElement(table[a.index() * t.q + b.index()]);
        }
        let (mut x, mut y) = (a.0 as u32, b.0 as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % t.p + y % t.p) % t.p) * place;
            x /= t.p;
            y /= t.p;
            place *= t.p;
        }
        FieldElement(out as u16)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let t = &*self.0;
        FieldElement(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.0;
        let l = t.log[a.index()] as usize;
        Ok(FieldElement(t.exp[(t.q - 1 - l) % (t.q - 1)]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let t = &*self.0;
        let l = (t.log[a.index()] as u64 * (k % (t.q as u64 - 1))) % (t.q as u64 - 1);
        FieldElement(t.exp[l as usize])
    }

    pub fn apply(&self, op: FieldOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        for x in [a, b] {
            if x.index() >= self.order() {
                return Err(Error::InvalidElement {
                    index: x.0 as u64,
                    order: self.order(),
                });
            }
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(FieldElement(1), FieldElement(1)), FieldElement(0));
        assert!(f.is_prime_field());
    }

    #[test]
    fn gf8_modulus_is_x3_x_1() {
        // Exhaustive scan of the four monic cubics with nonzero constant term.
        let candidates = [[1, 0, 0, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 1]];
        let irreducible: Vec<_> = candidates
            .iter()
            .filter(|c| {
                // A binary cubic is irreducible iff it has no root in GF(2).
                let eval = |x: u32| c.iter().fold(0, |acc, &co| (acc * x + co) % 2);
                eval(0) != 0 && eval(1) != 0
            })
            .collect();
        assert_eq!(irreducible[0], &[1, 0, 1, 1]);
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn non_prime_and_too_large() {
        assert!(matches!(Field::new(4, 1), Err(Error::NonPrime(4))));
        assert!(matches!(Field::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(Field::new(2, 0), Err(Error::InvalidDegree)));
        assert!(Field::new(2, 16).is_ok());
    }

    #[test]
    fn gf8_multiplication_examples() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.mul(FieldElement(2), FieldElement(2)), FieldElement(4));
        assert_eq!(f.mul(FieldElement(4), FieldElement(2)), FieldElement(3));
        assert!(matches!(
            f.apply(FieldOp::Div, FieldElement(3), FieldElement(0)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn deterministic_modulus() {
        for (p, e) in [(2, 4), (3, 2), (5, 2), (2, 8), (3, 5)] {
            let a = Field::new(p, e).unwrap();
            let b = Field::new(p, e).unwrap();
            assert_eq!(a.modulus(), b.modulus());
        }
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 0, 0, 1, 1]);
    }

    #[test]
    fn field_axioms_exhaustive_up_to_16() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::from_order(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_odd_field_uses_digit_addition() {
        let f = Field::new(17, 3).unwrap();
        let a = f.element(4000).unwrap();
        let b = f.element(1234).unwrap();
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
    }

    #[test]
    fn from_order_rejects_composites() {
        assert!(Field::from_order(6).is_err());
        assert!(Field::from_order(1).is_err());
        assert_eq!(Field::from_order(27).unwrap().degree(), 3);
    }
}
