//! The projective line ℝ̄ = ℝ ∪ {∞} as a circle.
//!
//! One chart is used everywhere: a value `x` sits at angle `φ = 2·atan(x)`
//! on the unit circle (∞ at `φ = π`), and its *turn* is `φ / 2π` reduced to
//! `[0, 1)`. So 0, 1, ∞, −1 sit at turns 0, 1/4, 1/2, 3/4 in
//! counterclockwise order, and the chordal metric is the chord length.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{decimal_string, rat_to_f64, BigFloat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectiveError {
    #[error("projective.OutOfSegment: {value} is not in the closure of {segment}")]
    OutOfSegment { value: String, segment: Segment },
    #[error("projective.TooFewPoints: need at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// A point of ℝ̄.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjValue {
    Exact(Rat),
    Ball(BigFloat),
    Float(f64),
    Infinity,
}

impl ProjValue {
    /// Maps non-finite floats to ∞.
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            ProjValue::Float(v)
        } else {
            ProjValue::Infinity
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjValue::Infinity)
    }

    /// `f64` value, `+inf` for ∞.
    pub fn to_f64(&self) -> f64 {
        match self {
            ProjValue::Exact(r) => rat_to_f64(r),
            ProjValue::Ball(b) => b.to_f64(),
            ProjValue::Float(v) => *v,
            ProjValue::Infinity => f64::INFINITY,
        }
    }

    pub fn turn(&self) -> f64 {
        to_turn(self.to_f64())
    }

    pub fn from_turn(t: f64) -> Self {
        ProjValue::from_f64(from_turn(t))
    }
}

impl fmt::Display for ProjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjValue::Exact(r) => write!(f, "{r}"),
            ProjValue::Ball(b) => write!(f, "{}", decimal_string(b.mid(), 20)),
            ProjValue::Float(v) => write!(f, "{v}"),
            ProjValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Turn in `[0, 1)` of a value; any non-finite input is ∞ (turn 1/2).
pub fn to_turn(v: f64) -> f64 {
    if !v.is_finite() {
        return 0.5;
    }
    let t = v.atan() / PI;
    if t < 0.0 {
        t + 1.0
    } else {
        t
    }
}

/// Inverse of [`to_turn`]; turn 1/2 maps to `+inf`.
pub fn from_turn(t: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    if t == 0.5 {
        return f64::INFINITY;
    }
    let v = (PI * t).tan();
    if v.abs() > 1e300 {
        f64::INFINITY
    } else {
        v
    }
}

/// Chordal distance between two `f64` points of ℝ̄ (non-finite = ∞).
pub fn chordal_f64(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (false, false) => 0.0,
        (true, false) => 2.0 / 1f64.hypot(a),
        (false, true) => 2.0 / 1f64.hypot(b),
        (true, true) => (2.0 * (a - b).abs() / (1f64.hypot(a) * 1f64.hypot(b))).min(2.0),
    }
}

pub fn chordal_dist(a: &ProjValue, b: &ProjValue) -> f64 {
    chordal_f64(a.to_f64(), b.to_f64())
}

/// Signed shortest displacement from turn `a` to turn `b`, in `(-1/2, 1/2]`.
pub fn turn_delta(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// The four arcs of ℝ̄ between consecutive points of `{0, 1, ∞, −1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Segment {
    /// `[0, 1]`
    ZeroOne,
    /// `(1, ∞]`
    OneInf,
    /// `(∞, −1)`
    InfMinusOne,
    /// `[−1, 0)`
    MinusOneZero,
}

impl Segment {
    pub const ALL: [Segment; 4] = [Segment::ZeroOne, Segment::OneInf, Segment::InfMinusOne, Segment::MinusOneZero];

    /// Turn range `[start, start + 1/4]` of the closure.
    pub fn turn_range(self) -> (f64, f64) {
        let s = match self {
            Segment::ZeroOne => 0.0,
            Segment::OneInf => 0.25,
            Segment::InfMinusOne => 0.5,
            Segment::MinusOneZero => 0.75,
        };
        (s, s + 0.25)
    }

    /// Segment whose half-open turn range `[start, start + 1/4)` holds `t`.
    pub fn of_turn(t: f64) -> Segment {
        let t = t.rem_euclid(1.0);
        Segment::ALL[((t * 4.0).floor() as usize).min(3)]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn contains_closure(self, v: &ProjValue) -> bool {
        let one = Rat::one();
        match v {
            ProjValue::Infinity => matches!(self, Segment::OneInf | Segment::InfMinusOne),
            ProjValue::Exact(r) => match self {
                Segment::ZeroOne => !r.is_negative() && *r <= one,
                Segment::OneInf => *r >= one,
                Segment::InfMinusOne => *r <= -one,
                Segment::MinusOneZero => *r >= -one && !r.is_positive(),
            },
            _ => {
                let x = v.to_f64();
                match self {
                    Segment::ZeroOne => (0.0..=1.0).contains(&x),
                    Segment::OneInf => x >= 1.0,
                    Segment::InfMinusOne => x <= -1.0,
                    Segment::MinusOneZero => (-1.0..=0.0).contains(&x),
                }
            }
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Segment::ZeroOne => "[0,1]",
            Segment::OneInf => "(1,inf]",
            Segment::InfMinusOne => "(inf,-1)",
            Segment::MinusOneZero => "[-1,0)",
        })
    }
}

/// Increasing homeomorphism of a segment closure onto `[0, 1]`:
/// `x`, `1 − 1/x`, `−1/x`, `x + 1` respectively. Exact input stays exact.
pub fn segment_chart(c: &ProjValue, segment: Segment) -> Result<ProjValue, ProjectiveError> {
    if !segment.contains_closure(c) {
        return Err(ProjectiveError::OutOfSegment { value: c.to_string(), segment });
    }
    let out = match c {
        ProjValue::Infinity => match segment {
            Segment::OneInf => ProjValue::Exact(Rat::one()),
            _ => ProjValue::Exact(Rat::zero()),
        },
        ProjValue::Exact(r) => ProjValue::Exact(match segment {
            Segment::ZeroOne => r.clone(),
            Segment::OneInf => Rat::one() - r.recip(),
            Segment::InfMinusOne => -r.recip(),
            Segment::MinusOneZero => r + Rat::one(),
        }),
        _ => {
            let x = c.to_f64();
            ProjValue::Float(match segment {
                Segment::ZeroOne => x,
                Segment::OneInf => 1.0 - 1.0 / x,
                Segment::InfMinusOne => -1.0 / x,
                Segment::MinusOneZero => x + 1.0,
            })
        }
    };
    Ok(out)
}

/// A finite `2^-m`-net of ℝ̄: `2^(m+2)` equally spaced turns, which
/// contain `{0, 1, ∞, −1}` and nest as `m` grows.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub level: u32,
}

/// Position of a turn relative to a net: on a net point, or strictly
/// inside the arc from point `k` to point `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NetCell {
    Point(u64),
    Arc(u64),
}

pub fn build_net(m: u32) -> Net {
    Net { level: m }
}

impl Net {
    pub fn len(&self) -> u64 {
        1u64 << (self.level + 2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn turns(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|k| k as f64 / n as f64).collect()
    }

    pub fn points(&self) -> Vec<ProjValue> {
        let n = self.len();
        (0..n)
            .map(|k| {
                if k == 0 {
                    ProjValue::Exact(Rat::zero())
                } else if 4 * k == n {
                    ProjValue::Exact(Rat::one())
                } else if 2 * k == n {
                    ProjValue::Infinity
                } else if 4 * k == 3 * n {
                    ProjValue::Exact(-Rat::one())
                } else {
                    ProjValue::Float(from_turn(k as f64 / n as f64))
                }
            })
            .collect()
    }

    /// Cell of a turn; within `snap` (in turns) of a net point counts as
    /// that point.
    pub fn cell(&self, t: f64, snap: f64) -> NetCell {
        let n = self.len();
        let x = t.rem_euclid(1.0) * n as f64;
        let k = x.round();
        if ((x - k) / n as f64).abs() <= snap {
            return NetCell::Point(k as u64 % n);
        }
        NetCell::Arc(x.floor() as u64 % n)
    }
}

/// Consecutive pairs of a cyclic set in counterclockwise order, given
/// elements with their turns. Every element appears in exactly two pairs.
pub fn neighbor_pairs<T: Clone>(items: &[(f64, T)]) -> Result<Vec<(T, T)>, ProjectiveError> {
    if items.len() < 2 {
        return Err(ProjectiveError::TooFewPoints(items.len()));
    }
    let mut sorted: Vec<&(f64, T)> = items.iter().collect();
    sorted.sort_by(|a, b| a.0.rem_euclid(1.0).total_cmp(&b.0.rem_euclid(1.0)));
    let n = sorted.len();
    Ok((0..n).map(|i| (sorted[i].1.clone(), sorted[(i + 1) % n].1.clone())).collect())
}
