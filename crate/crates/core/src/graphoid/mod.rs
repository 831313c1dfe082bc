//! Graphoid fibers of finite families at singular points.
//!
//! Boundaries are squares `z + r·[−1, 1]²` parametrized by the fraction
//! `τ ∈ [0, 1)` of the perimeter, counterclockwise from `z + (r, 0)`, so
//! the corners sit at `τ = 1/8, 3/8, 5/8, 7/8`. The angle reported for a
//! sample is `θ = 2πτ`.

mod coherence;
mod fiber;
mod hausdorff;


use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::algebra::{isolate_real_roots_in, pow2, rat_to_f64, BiPoly, Rat, UniPoly};
use crate::parser::{indeterminacy_points, IndeterminacyPoint, RationalFn, RfError};
use crate::projective::{to_turn, turn_delta, Segment};
use crate::puiseux::critical_radius;

pub use coherence::{coherence_classes, coherence_classes_tol, coherence_signature, coherence_signature_tol, CoherenceSignature};
pub use fiber::{fiber, fiber_at, fiber_with, Fiber, FiberAnchor, FiberArc, FiberOptions, MAX_REFINEMENTS};
pub use hausdorff::{hausdorff, hausdorff_capped, tuple_dist};

/// Net level for the monotone-law tolerance.
pub const MONOTONE_NET_LEVEL: u32 = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphoidError {
    #[error("graphoid.RadiusNotSmall: radius {radius} exceeds the certified bound {bound}")]
    RadiusNotSmall { radius: String, bound: String },
    #[error("graphoid.SingularOnBoundary: ({0}, {1}) lies on the sampling square")]
    SingularOnBoundary(f64, f64),
    #[error("graphoid.NoConvergence: Hausdorff distance {residual:e} still above {tol:e} after refinement")]
    NoConvergence { residual: f64, tol: f64 },
    #[error("graphoid.CellStraddle: member {member} crosses a net point inside segment {segment}")]
    CellStraddle { member: usize, segment: usize },
    #[error("graphoid.TooFewSamples: need at least 64 samples, got {0}")]
    TooFewSamples(usize),
    #[error("graphoid.EmptyFamily: a family needs at least one member")]
    EmptyFamily,
    #[error(transparent)]
    Parse(#[from] RfError),
}

/// A polynomial with `f64` coefficients for fast sampling.
#[derive(Debug, Clone)]
struct FloatPoly(Vec<(i32, i32, f64)>);

impl FloatPoly {
    fn new(p: &BiPoly) -> Self {
        FloatPoly(p.terms().map(|(&(i, j), c)| (i as i32, j as i32, rat_to_f64(c))).collect())
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Family {
    members: Vec<RationalFn>,
    singular: Vec<IndeterminacyPoint>,
}

impl Family {
    pub fn new(members: Vec<RationalFn>, precision_bits: u32) -> Result<Self, GraphoidError> {
        if members.is_empty() {
            return Err(GraphoidError::EmptyFamily);
        }
        let mut singular: Vec<IndeterminacyPoint> = Vec::new();
        for f in &members {
            for pt in indeterminacy_points(f, precision_bits)?.points {
                if !singular.iter().any(|s| s.x.overlaps(&pt.x) && s.y.overlaps(&pt.y)) {
                    singular.push(pt);
                }
            }
        }
        singular.sort_by(|a, b| a.x.mid().cmp(b.x.mid()).then(a.y.mid().cmp(b.y.mid())));
        Ok(Family { members, singular })
    }

    pub fn members(&self) -> &[RationalFn] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Finite singular points; the torus point `(∞, ∞)` is implicit.
    pub fn singular_points(&self) -> &[IndeterminacyPoint] {
        &self.singular
    }

    /// Whether `(x, y)` lies in `dom(F)`.
    pub fn is_regular(&self, x: &Rat, y: &Rat) -> bool {
        self.members.iter().all(|f| f.eval(x, y).is_some())
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> Vec<f64> {
        self.members.iter().map(|f| f.eval_f64(x, y)).collect()
    }

    /// The level curves `p`, `p ∓ q`, `q` of every member, translated so
    /// that `center` is the origin, keeping those through the center (up
    /// to `2^-80`, for rational approximations of irrational points).
    fn level_curves_through(&self, center: &(Rat, Rat)) -> Vec<BiPoly> {
        let tiny = pow2(-80);
        let mut out = Vec::new();
        for f in &self.members {
            for c in level_curves(f) {
                let local = c.translate(&center.0, &center.1);
                if !local.is_constant() && local.constant_term().abs() <= tiny {
                    out.push(local);
                }
            }
        }
        out
    }
}

/// `p − c·q` for `c ∈ {0, 1, −1}` and `q` itself (the level `∞`).
pub(crate) fn level_curves(f: &RationalFn) -> [BiPoly; 4] {
    let (p, q) = (f.numerator(), f.denominator());
    [p.clone(), p - q, p + q, q.clone()]
}

/// Names of the levels in the order of [`level_curves`].
pub(crate) const LEVEL_NAMES: [&str; 4] = ["0", "1", "-1", "inf"];

/// Offset of the boundary point at perimeter fraction `tau` on the square
/// of half-side 1.
pub fn square_point(tau: f64) -> (f64, f64) {
    let s = tau.rem_euclid(1.0) * 8.0;
    if s < 1.0 {
        (1.0, s)
    } else if s < 3.0 {
        (2.0 - s, 1.0)
    } else if s < 5.0 {
        (-1.0, 4.0 - s)
    } else if s < 7.0 {
        (s - 6.0, -1.0)
    } else {
        (1.0, s - 8.0)
    }
}

pub fn boundary_point(center: (f64, f64), radius: f64, tau: f64) -> (f64, f64) {
    let (u, v) = square_point(tau);
    (center.0 + radius * u, center.1 + radius * v)
}

/// A B₀ anchor on the boundary square.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryAnchor {
    pub tau: f64,
    pub point: (f64, f64),
}

/// The four sides as `(translation of the side's line to the origin,
/// whether the free coordinate is y, map from the free offset s/r to τ)`.
fn sides(center: &(Rat, Rat), radius: &Rat) -> [((Rat, Rat), bool, fn(f64) -> f64); 4] {
    let (cx, cy) = center;
    [
        ((cx + radius, cy.clone()), true, |s| (if s < 0.0 { 8.0 + s } else { s }) / 8.0),
        ((cx.clone(), cy + radius), false, |s| (2.0 - s) / 8.0),
        ((cx - radius, cy.clone()), true, |s| (4.0 - s) / 8.0),
        ((cx.clone(), cy - radius), false, |s| (6.0 + s) / 8.0),
    ]
}

/// Curves whose boundary crossings are B₀ anchors.
fn anchor_curves(family: &Family) -> Vec<BiPoly> {
    let mut out = Vec::new();
    for f in family.members() {
        out.extend(level_curves(f));
        out.push(f.dx_numerator());
        out.push(f.dy_numerator());
    }
    out.retain(|c| !c.is_constant());
    out
}

/// B₀ anchors on the square of half-side `radius` around `center`: the
/// corners (where the diagonals through the center cross) and the crossings
/// of the level curves `f ∈ {0, ±1, ∞}` and of `f_x = 0`, `f_y = 0`, sorted
/// by `τ`.
pub fn b0_anchors(family: &Family, center: &(Rat, Rat), radius: &Rat) -> Result<Vec<BoundaryAnchor>, GraphoidError> {
    check_small(family, center, radius)?;
    Ok(anchors_unchecked(family, center, radius))
}

fn anchors_unchecked(family: &Family, center: &(Rat, Rat), radius: &Rat) -> Vec<BoundaryAnchor> {
    let c64 = (rat_to_f64(&center.0), rat_to_f64(&center.1));
    let r64 = rat_to_f64(radius);
    let mut taus: Vec<f64> = vec![0.125, 0.375, 0.625, 0.875];
    let curves = anchor_curves(family);
    for (shift, free_y, to_tau) in sides(center, radius) {
        for c in &curves {
            let moved = c.translate(&shift.0, &shift.1);
            let line: UniPoly = if free_y { moved.restrict_x(&Rat::zero()) } else { moved.restrict_y(&Rat::zero()) };
            if line.is_zero() || line.is_constant() {
                continue;
            }
            let lo = -radius.clone();
            for root in isolate_real_roots_in(&line, &lo, radius, 128) {
                taus.push(to_tau(root.to_f64() / r64));
            }
            for end in [&lo, radius] {
                if line.eval(end).is_zero() {
                    taus.push(to_tau(rat_to_f64(end) / r64));
                }
            }
        }
    }
    let mut taus: Vec<f64> = taus.into_iter().map(|t| t.rem_euclid(1.0)).collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if taus.len() > 1 && taus[0] + 1.0 - taus[taus.len() - 1] < 1e-12 {
        taus.pop();
    }
    taus.into_iter().map(|tau| BoundaryAnchor { tau, point: boundary_point(c64, r64, tau) }).collect()
}

/// RadiusNotSmall unless the radius is within the critical bound of the
/// level curves through the center and the square keeps every other
/// singular point strictly outside.
fn check_small(family: &Family, center: &(Rat, Rat), radius: &Rat) -> Result<(), GraphoidError> {
    let fail = |bound: String| GraphoidError::RadiusNotSmall { radius: radius.to_string(), bound };
    if let Some(cr) = critical_radius(&family.level_curves_through(center)) {
        if *radius > cr {
            return Err(fail(cr.to_string()));
        }
    }
    let r64 = rat_to_f64(radius);
    let c64 = (rat_to_f64(&center.0), rat_to_f64(&center.1));
    for s in family.singular_points() {
        let (x, y) = s.to_f64();
        let d = (x - c64.0).abs().max((y - c64.1).abs());
        if d > 1e-12 * (1.0 + r64) && d <= r64 * (1.0 + 1e-12) {
            return Err(fail(format!("{d}")));
        }
    }
    Ok(())
}

/// Values of a family on a boundary square.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMapSamples {
    pub center: (f64, f64),
    pub radius: f64,
    /// Perimeter fractions, strictly increasing in `[0, 1)`.
    pub taus: Vec<f64>,
    /// One tuple per sample, `inf` for ∞.
    pub values: Vec<Vec<f64>>,
    /// Indices of the B₀ anchors in `taus`.
    pub marks: Vec<usize>,
}

impl BoundaryMapSamples {
    pub fn thetas(&self) -> Vec<f64> {
        self.taus.iter().map(|t| 2.0 * PI * t).collect()
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Turns of coordinate `i` along the boundary.
    pub fn turns(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|v| to_turn(v[i])).collect()
    }

    /// Number of pieces between consecutive anchors.
    pub fn num_pieces(&self) -> usize {
        self.marks.len()
    }

    /// Sample indices of piece `k`, from anchor `k` to anchor `k + 1`
    /// inclusive, cyclically.
    pub fn piece(&self, k: usize) -> Vec<usize> {
        let n = self.len();
        let a = self.marks[k];
        let b = self.marks[(k + 1) % self.marks.len()];
        let len = if b > a { b - a } else { b + n - a };
        (0..=len).map(|i| (a + i) % n).collect()
    }

    /// Canonical segment of coordinate `i` on piece `k`, if the sampled
    /// turns stay within `tol` of one.
    pub fn piece_segment(&self, k: usize, i: usize, tol: f64) -> Option<Segment> {
        let turns: Vec<f64> = self.piece(k).iter().map(|&s| to_turn(self.values[s][i])).collect();
        Segment::ALL.into_iter().find(|seg| {
            let (a, _) = seg.turn_range();
            turns.iter().all(|&t| {
                let rel = turn_delta(a, t);
                rel >= -tol && rel <= 0.25 + tol
            })
        })
    }

    /// Whether coordinate `i` is monotone on piece `k` up to `tol` turns.
    pub fn piece_monotone(&self, k: usize, i: usize, tol: f64) -> bool {
        let turns: Vec<f64> = self.piece(k).iter().map(|&s| to_turn(self.values[s][i])).collect();
        let mut lifted = vec![turns[0]];
        for w in turns.windows(2) {
            lifted.push(lifted[lifted.len() - 1] + turn_delta(w[0], w[1]));
        }
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut up, mut down) = (true, true);
        for &u in &lifted {
            hi = hi.max(u);
            lo = lo.min(u);
            up &= u >= hi - tol;
            down &= u <= lo + tol;
        }
        up || down
    }

    /// Pieces and coordinates that break the monotone law: not confined to
    /// one canonical segment or not monotone, within one cell of the net of
    /// level [`MONOTONE_NET_LEVEL`].
    pub fn monotone_violations(&self) -> Vec<(usize, usize)> {
        let tol = 1.0 / (1u64 << (MONOTONE_NET_LEVEL + 2)) as f64;
        let width = self.values.first().map_or(0, |v| v.len());
        let mut out = Vec::new();
        for k in 0..self.num_pieces() {
            for i in 0..width {
                if self.piece_segment(k, i, tol).is_none() || !self.piece_monotone(k, i, tol) {
                    out.push((k, i));
                }
            }
        }
        out
    }
}

/// Samples the family on the square of half-side `radius` around `center`
/// at `n` equally spaced points plus every B₀ anchor.
pub fn sample_boundary_map(
    family: &Family,
    center: &(Rat, Rat),
    radius: &Rat,
    n: usize,
) -> Result<BoundaryMapSamples, GraphoidError> {
    check_small(family, center, radius)?;
    sample_unchecked(family, center, radius, n)
}

/// As [`sample_boundary_map`] without the A-small certificate; used for
/// large squares enclosing several singular points.
pub fn sample_unchecked(
    family: &Family,
    center: &(Rat, Rat),
    radius: &Rat,
    n: usize,
) -> Result<BoundaryMapSamples, GraphoidError> {
    if n < 64 {
        return Err(GraphoidError::TooFewSamples(n));
    }
    if !radius.is_positive() {
        return Err(GraphoidError::RadiusNotSmall { radius: radius.to_string(), bound: "positive".into() });
    }
    let c64 = (rat_to_f64(&center.0), rat_to_f64(&center.1));
    let r64 = rat_to_f64(radius);
    for s in family.singular_points() {
        let (x, y) = s.to_f64();
        let d = (x - c64.0).abs().max((y - c64.1).abs());
        if (d - r64).abs() <= 1e-12 * r64.max(1.0) {
            return Err(GraphoidError::SingularOnBoundary(x, y));
        }
    }
    let anchors = anchors_unchecked(family, center, radius);
    let gap = 0.25 / n as f64;
    let mut taus: Vec<(f64, bool)> = (0..n)
        .map(|k| k as f64 / n as f64)
        .filter(|t| anchors.iter().all(|a| turn_delta(a.tau, *t).abs() > gap))
        .map(|t| (t, false))
        .collect();
    taus.extend(anchors.iter().map(|a| (a.tau, true)));
    taus.sort_by(|a, b| a.0.total_cmp(&b.0));

    let local: Vec<(FloatPoly, FloatPoly)> = family
        .members()
        .iter()
        .map(|f| {
            let g = f.translate(&center.0, &center.1);
            (FloatPoly::new(g.numerator()), FloatPoly::new(g.denominator()))
        })
        .collect();
    let mut values = Vec::with_capacity(taus.len());
    let mut marks = Vec::new();
    for (idx, &(tau, anchor)) in taus.iter().enumerate() {
        let (u, v) = square_point(tau);
        let (x, y) = (r64 * u, r64 * v);
        let mut row = Vec::with_capacity(local.len());
        for (p, q) in &local {
            let (a, b) = (p.eval(x, y), q.eval(x, y));
            let val = if b == 0.0 {
                if a == 0.0 {
                    return Err(GraphoidError::SingularOnBoundary(c64.0 + x, c64.1 + y));
                }
                f64::INFINITY
            } else {
                a / b
            };
            row.push(if val.is_finite() { val } else { f64::INFINITY });
        }
        values.push(row);
        if anchor {
            marks.push(idx);
        }
    }
    Ok(BoundaryMapSamples { center: c64, radius: r64, taus: taus.into_iter().map(|t| t.0).collect(), values, marks })
}

/// Largest radius usable for the fiber at `center`: the A-small radius of
/// the level curves through it, kept below half the distance to every
/// other singular point.
pub fn fiber_radius(family: &Family, center: &(Rat, Rat)) -> Rat {
    let mut r = crate::puiseux::a_small_radius(&family.level_curves_through(center));
    let c64 = (rat_to_f64(&center.0), rat_to_f64(&center.1));
    for s in family.singular_points() {
        let (x, y) = s.to_f64();
        let d = (x - c64.0).abs().max((y - c64.1).abs());
        if d > 1e-12 {
            while rat_to_f64(&r) >= d / 2.0 {
                r /= Rat::from_integer(2.into());
            }
        }
    }
    if r.is_zero() {
        r = Rat::one();
    }
    r
}
