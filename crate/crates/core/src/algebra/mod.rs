//! Exact arithmetic kernel: rationals, univariate and sparse bivariate
//! polynomials over ℚ, gcd and resultants, certified real-root isolation and
//! ball arithmetic for algebraic coefficients.

mod bigfloat;
mod bipoly;
mod roots;
mod unipoly;

pub use bigfloat::{decimal_string, BallPoly, BigFloat};
pub use bipoly::{poly_gcd, resultant_x, resultant_y, squarefree_part, BiPoly};
pub use roots::{isolate_real_roots, isolate_real_roots_in, RealRoot};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rat = BigRational;

/// Default working precision for certified numerics.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational approximation of a finite `f64` (exact binary value).
pub fn rat_from_f64(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale through bit lengths.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = r / pow2(shift);
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// `2^e` as a rational, for any sign of `e`.
pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Integer `e` with `2^(e-1) <= |r| < 2^(e+1)`; `r` nonzero.
pub(crate) fn approx_log2(r: &Rat) -> i64 {
    debug_assert!(!r.is_zero());
    r.numer().bits() as i64 - r.denom().bits() as i64
}

/// Largest dyadic `k / 2^bits` not exceeding `r`.
pub fn floor_dyadic(r: &Rat, bits: u32) -> Rat {
    let scaled = r * pow2(bits as i64);
    Rat::new(scaled.floor().to_integer(), BigInt::one() << (bits as usize))
}

/// Smallest dyadic `k / 2^bits` not below `r`.
pub fn ceil_dyadic(r: &Rat, bits: u32) -> Rat {
    let scaled = r * pow2(bits as i64);
    Rat::new(scaled.ceil().to_integer(), BigInt::one() << (bits as usize))
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if fl == *lo {
        return lo.clone();
    }
    if fl.clone() + Rat::one() <= *hi {
        return fl + Rat::one();
    }
    // lo and hi share integer part; recurse on reciprocals of fractional parts.
    let a = fl.clone();
    let inner = simplest_between(&(Rat::one() / (hi - &a)), &(Rat::one() / (lo - &a)));
    a + Rat::one() / inner
}
