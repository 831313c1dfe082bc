use num_traits::{Signed, Zero};

use crate::algebra::{BigFloat, BiPoly, Rat};

/// Truncated power series `Σ c_k t^k`, dense, known through `t^(len-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<BigFloat>,
    precision_bits: u32,
}

impl Series {
    pub fn zero(len: usize, precision_bits: u32) -> Self {
        Series { coeffs: vec![BigFloat::zero(precision_bits); len], precision_bits }
    }

    pub fn from_coeffs(coeffs: Vec<BigFloat>, precision_bits: u32) -> Self {
        Series { coeffs, precision_bits }
    }

    /// `c · t^k`, known through `t^(len-1)`.
    pub fn monomial(c: BigFloat, k: usize, len: usize) -> Self {
        let prec = c.precision_bits();
        let mut s = Series::zero(len, prec);
        if k < len {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigFloat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&BigFloat> {
        self.coeffs.get(k)
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn truncate(&mut self, len: usize) {
        self.coeffs.truncate(len);
    }

    /// `s(-t)`
    pub fn reflect(&self) -> Series {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect();
        Series { coeffs, precision_bits: self.precision_bits }
    }

    pub fn neg(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect(), precision_bits: self.precision_bits }
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        Series {
            coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn scale(&self, c: &BigFloat) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect(), precision_bits: self.precision_bits }
    }

    /// Product truncated to the shorter known length.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![BigFloat::zero(self.precision_bits); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_exact() && a.mid().is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if b.is_exact() && b.mid().is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Series { coeffs: out, precision_bits: self.precision_bits }
    }

    /// First coefficient whose ball excludes zero. Exact zeros are skipped,
    /// and so are balls within `tiny` of zero; `skipped` reports the latter.
    pub fn valuation(&self, tiny: &Rat) -> Valuation {
        let mut skipped = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_certainly_nonzero() {
                return Valuation::Found { index: k, skipped };
            }
            if c.is_exact() {
                continue;
            }
            if c.mid().abs() + c.err() <= *tiny {
                skipped = true;
            } else {
                return Valuation::Ambiguous;
            }
        }
        Valuation::Vanishing { skipped }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64())
    }

    /// Evaluate at `t` exactly (midpoint coefficients) as a rational.
    pub fn eval_mid(&self, t: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c.mid())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Found { index: usize, skipped: bool },
    /// Every known coefficient is zero (or within the tiny threshold).
    Vanishing { skipped: bool },
    /// A coefficient is neither certainly nonzero nor negligibly small.
    Ambiguous,
}

/// `p(X(t), Y(t))` truncated to the common known length of `X`, `Y`.
pub fn compose(p: &BiPoly, x: &Series, y: &Series) -> Series {
    let n = x.len().min(y.len());
    let prec = x.precision_bits();
    let powers = |s: &Series, d: u32| -> Vec<Series> {
        let mut v = vec![Series::monomial(BigFloat::one(prec), 0, n)];
        for k in 1..=d as usize {
            let next = v[k - 1].mul(s);
            v.push(next);
        }
        v
    };
    let xp = powers(x, p.degree_x());
    let yp = powers(y, p.degree_y());
    let mut acc = Series::zero(n, prec);
    for (&(i, j), c) in p.terms() {
        let t = xp[i as usize].mul(&yp[j as usize]).scale(&BigFloat::exact(c.clone(), prec));
        acc = acc.add(&t);
    }
    acc
}
