use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{approx_log2, ceil_dyadic, pow2, rat_to_f64, BiPoly, Rat};

/// Significant bits kept in error radii.
const RADIUS_BITS: i64 = 32;

/// A real number known as a ball `[mid - rad, mid + rad]`.
///
/// `mid` is rounded to `precision_bits` significant bits after every inexact
/// operation and the rounding error is folded into `rad`. A ball with zero
/// radius is an exact rational and stays exact under ring operations with
/// other exact balls.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mid: Rat,
    rad: Rat,
    precision_bits: u32,
}

impl BigFloat {
    pub fn exact(value: Rat, precision_bits: u32) -> Self {
        BigFloat { mid: value, rad: Rat::zero(), precision_bits }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::exact(Rat::zero(), precision_bits)
    }

    pub fn one(precision_bits: u32) -> Self {
        Self::exact(Rat::one(), precision_bits)
    }

    /// Ball from explicit midpoint and radius; the midpoint is rounded.
    pub fn with_radius(mid: Rat, rad: Rat, precision_bits: u32) -> Self {
        assert!(!rad.is_negative());
        let mut b = BigFloat { mid, rad, precision_bits };
        if !b.rad.is_zero() {
            b.round();
        }
        b
    }

    /// Ball enclosing the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Rat, hi: &Rat, precision_bits: u32) -> Self {
        let mid = (lo + hi) / Rat::from_integer(BigInt::from(2));
        let rad = (hi - lo).abs() / Rat::from_integer(BigInt::from(2));
        Self::with_radius(mid, rad, precision_bits)
    }

    pub fn mid(&self) -> &Rat {
        &self.mid
    }

    pub fn err(&self) -> &Rat {
        &self.rad
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        self.is_exact().then_some(&self.mid)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.mid)
    }

    pub fn err_f64(&self) -> f64 {
        rat_to_f64(&self.rad)
    }

    pub fn lower(&self) -> Rat {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> Rat {
        &self.mid + &self.rad
    }

    pub fn contains(&self, x: &Rat) -> bool {
        (x - &self.mid).abs() <= self.rad
    }

    pub fn overlaps(&self, other: &BigFloat) -> bool {
        (&self.mid - &other.mid).abs() <= &self.rad + &other.rad
    }

    /// True when the ball excludes zero.
    pub fn is_certainly_nonzero(&self) -> bool {
        self.mid.abs() > self.rad
    }

    /// Exactly zero, or a ball around zero that cannot be told apart from it.
    pub fn is_possibly_zero(&self) -> bool {
        !self.is_certainly_nonzero()
    }

    /// Sign if certified, `None` otherwise.
    pub fn sign(&self) -> Option<i32> {
        if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else if self.is_certainly_nonzero() {
            Some(if self.mid.is_positive() { 1 } else { -1 })
        } else {
            None
        }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { mid: self.mid.abs(), rad: self.rad.clone(), precision_bits: self.precision_bits }
    }

    pub fn pow(&self, k: u32) -> BigFloat {
        let mut acc = BigFloat::one(self.precision_bits);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Division; `None` when the divisor ball contains zero.
    pub fn checked_div(&self, rhs: &BigFloat) -> Option<BigFloat> {
        if !rhs.is_certainly_nonzero() {
            return None;
        }
        let prec = self.precision_bits.max(rhs.precision_bits);
        let q = &self.mid / &rhs.mid;
        if self.is_exact() && rhs.is_exact() {
            return Some(BigFloat { mid: q, rad: Rat::zero(), precision_bits: prec });
        }
        let bm = rhs.mid.abs();
        let num = self.mid.abs() * &rhs.rad + &bm * &self.rad;
        let den = &bm * (&bm - &rhs.rad);
        let rad = num / den;
        let mut out = BigFloat { mid: q, rad: upper_radius(&rad), precision_bits: prec };
        out.round();
        Some(out)
    }

    fn round(&mut self) {
        if self.mid.is_zero() {
            self.rad = upper_radius(&self.rad);
            return;
        }
        let e = approx_log2(&self.mid);
        let shift = self.precision_bits as i64 - e;
        let scale = pow2(shift);
        let scaled = &self.mid * &scale;
        if scaled.is_integer() {
            self.rad = upper_radius(&self.rad);
            return;
        }
        let rounded = Rat::from_integer(scaled.round().to_integer()) / scale;
        let delta = (&self.mid - &rounded).abs();
        self.mid = rounded;
        self.rad = upper_radius(&(&self.rad + delta));
    }

    fn finish(mid: Rat, rad: Rat, exact: bool, precision_bits: u32) -> BigFloat {
        let mut out = BigFloat { mid, rad, precision_bits };
        if !exact {
            out.round();
        }
        out
    }
}

/// Round a nonnegative radius up to a short dyadic.
fn upper_radius(r: &Rat) -> Rat {
    if r.is_zero() {
        return Rat::zero();
    }
    let e = approx_log2(r);
    let bits = (RADIUS_BITS - e).max(0) as u32;
    let c = ceil_dyadic(r, bits);
    if bits == 0 {
        // very large radius; keep as is
        return r.ceil();
    }
    c
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.mid)
        } else {
            write!(f, "{:.17e} ± {:.3e}", self.to_f64(), self.err_f64())
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", decimal_string(&self.mid, 20))
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn decimal_string(r: &Rat, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // exponent10 such that 10^e <= a < 10^(e+1)
    let mut e10 = (approx_log2(&a) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let p10 = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(num_traits::pow(BigInt::from(10), k as usize))
        } else {
            Rat::one() / Rat::from_integer(num_traits::pow(BigInt::from(10), (-k) as usize))
        }
    };
    while a >= p10(e10 + 1) {
        e10 += 1;
    }
    while a < p10(e10) {
        e10 -= 1;
    }
    let scaled = &a * p10(digits as i64 - 1 - e10);
    let m = scaled.round().to_integer().to_string();
    let sign = if neg { "-" } else { "" };
    // value = 0.m * 10^(exp10 + 1) with m the digit string
    let exp10 = e10 + (m.len() as i64 - digits as i64);
    let digits_str = m.trim_end_matches('0');
    let digits_str = if digits_str.is_empty() { "0" } else { digits_str };
    if (-8..=20).contains(&exp10) {
        let point = exp10 + 1; // digits before the decimal point
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
        } else if point as usize >= digits_str.len() {
            format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
        } else {
            format!("{}.{}", &digits_str[..point as usize], &digits_str[point as usize..])
        };
        format!("{sign}{body}")
    } else if digits_str.len() == 1 {
        format!("{sign}{digits_str}e{exp10}")
    } else {
        format!("{sign}{}.{}e{exp10}", &digits_str[..1], &digits_str[1..])
    }
}

impl Add<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let exact = self.is_exact() && rhs.is_exact();
        BigFloat::finish(
            &self.mid + &rhs.mid,
            &self.rad + &rhs.rad,
            exact,
            self.precision_bits.max(rhs.precision_bits),
        )
    }
}

impl Sub<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        let exact = self.is_exact() && rhs.is_exact();
        BigFloat::finish(
            &self.mid - &rhs.mid,
            &self.rad + &rhs.rad,
            exact,
            self.precision_bits.max(rhs.precision_bits),
        )
    }
}

impl Mul<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        let exact = self.is_exact() && rhs.is_exact();
        let rad = if exact {
            Rat::zero()
        } else {
            self.mid.abs() * &rhs.rad + rhs.mid.abs() * &self.rad + &self.rad * &rhs.rad
        };
        BigFloat::finish(&self.mid * &rhs.mid, rad, exact, self.precision_bits.max(rhs.precision_bits))
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mid: -&self.mid, rad: self.rad.clone(), precision_bits: self.precision_bits }
    }
}

/// Sparse bivariate polynomial with ball coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoly {
    terms: BTreeMap<(u32, u32), BigFloat>,
    precision_bits: u32,
}

impl BallPoly {
    pub fn new(precision_bits: u32) -> Self {
        BallPoly { terms: BTreeMap::new(), precision_bits }
    }

    pub fn from_exact(p: &BiPoly, precision_bits: u32) -> Self {
        let terms = p
            .terms()
            .map(|(&k, c)| (k, BigFloat::exact(c.clone(), precision_bits)))
            .collect();
        BallPoly { terms, precision_bits }
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigFloat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigFloat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| BigFloat::zero(self.precision_bits))
    }

    /// Add `c` to the coefficient of `x^i y^j`, dropping exact zeros.
    pub fn add_term(&mut self, i: u32, j: u32, c: &BigFloat) {
        let e = self.terms.entry((i, j)).or_insert_with(|| BigFloat::zero(c.precision_bits()));
        *e = &*e + c;
        if e.is_exact() && e.mid().is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn set_term(&mut self, i: u32, j: u32, c: BigFloat) {
        if c.is_exact() && c.mid().is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    pub fn to_exact(&self) -> Option<BiPoly> {
        if !self.is_exact() {
            return None;
        }
        Some(BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, c.mid().clone()))))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64() * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn exact_balls_stay_exact() {
        let a = BigFloat::exact(rat(1, 3), 64);
        let b = BigFloat::exact(rat(2, 7), 64);
        let c = &(&a * &b) + &a;
        assert!(c.is_exact());
        assert_eq!(c.mid(), &(rat(2, 21) + rat(1, 3)));
    }

    #[test]
    fn inexact_arithmetic_encloses_truth() {
        let third = BigFloat::from_interval(&rat(333, 1000), &rat(334, 1000), 64);
        let sq = &third * &third;
        assert!(sq.contains(&(rat(1, 3) * rat(1, 3))));
        let q = BigFloat::exact(rat(1, 1), 64).checked_div(&third).unwrap();
        assert!(q.contains(&rat(3, 1)));
        assert!(BigFloat::from_interval(&rat(-1, 10), &rat(1, 10), 64).checked_div(&third).is_some());
        assert!(third.checked_div(&BigFloat::from_interval(&rat(-1, 10), &rat(1, 10), 64)).is_none());
    }

    #[test]
    fn rounding_keeps_precision() {
        let a = BigFloat::with_radius(rat(1, 3), rat(1, 1_000_000_000_000), 40);
        assert!(a.contains(&rat(1, 3)));
        assert!(a.mid().denom().bits() <= 45);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 2), 20), "0.5");
        assert_eq!(decimal_string(&rat(-3, 1), 20), "-3");
        assert_eq!(decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&rat(-250, 3), 4), "-83.33");
        assert_eq!(decimal_string(&rat(1, 3_000_000_000), 3), "3.33e-10");
    }
}
