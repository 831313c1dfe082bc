//! Degrees of sampled circle maps and the parity experiments built on them.
//!
//! Target circles are read in turns (`[0, 1)`); a map is a cyclic list of
//! samples whose consecutive values are joined by the shorter arc.


use std::f64::consts::PI;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{floor_dyadic, rat_from_f64, rat_to_f64, Rat};
use crate::graphoid::{
    boundary_point, coherence_classes_tol, fiber_radius, sample_boundary_map, sample_unchecked, tuple_dist,
    BoundaryMapSamples, CoherenceSignature, Family, GraphoidError,
};
use crate::parser::{IndeterminacyPoint, RationalFn};
use crate::projective::{build_net, to_turn, turn_delta, NetCell};

/// Largest step, in turns, between consecutive samples.
pub const MAX_STEP: f64 = 0.25;
/// Distance of a winding number from an integer that is still accepted.
pub const WINDING_TOL: f64 = 0.01;
/// Random retries for regular values and weights.
pub const RETRIES: usize = 32;
/// Sample counts are doubled up to this when a map is under-sampled.
pub const MAX_SAMPLES: usize = 1 << 17;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DegreeError {
    #[error("degree.UnderSampled: step {index} jumps {jump:.3} turns")]
    UnderSampled { index: usize, jump: f64 },
    #[error("degree.NoRegularValue: no regular value found after {RETRIES} tries")]
    NoRegularValue,
    #[error("degree.NonIntegralWinding: total displacement {0} is not near an integer")]
    NonIntegralWinding(f64),
    #[error("degree.GeometryViolation: {0}")]
    GeometryViolation(String),
    #[error("degree.InjectivityFailure: no injective weights after {RETRIES} tries")]
    InjectivityFailure,
    #[error("degree.WrongShape: {0}")]
    WrongShape(String),
    #[error(transparent)]
    Graphoid(#[from] GraphoidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityReport {
    pub regular_value: f64,
    pub preimage_count: usize,
    pub parity: Parity,
    pub z2_trivial: bool,
}

impl ParityReport {
    fn new(regular_value: f64, preimage_count: usize) -> Self {
        let parity = Parity::of(preimage_count as i64);
        ParityReport { regular_value, preimage_count, parity, z2_trivial: parity == Parity::Even }
    }
}

/// A map from a sampled circle to the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCircleMap {
    domain: Vec<f64>,
    values: Vec<f64>,
    /// `steps[k]` runs from sample `k` to sample `k + 1` (cyclically).
    steps: Vec<f64>,
    monotone_pieces: Vec<(usize, usize)>,
}

impl SampledCircleMap {
    /// Rejects maps with a step above [`MAX_STEP`], including the closing
    /// step from the last sample to the first.
    pub fn new(domain: Vec<f64>, values: Vec<f64>) -> Result<Self, DegreeError> {
        assert_eq!(domain.len(), values.len());
        let values: Vec<f64> = values.into_iter().map(|v| v.rem_euclid(1.0)).collect();
        let n = values.len();
        let steps: Vec<f64> = (0..n).map(|k| turn_delta(values[k], values[(k + 1) % n])).collect();
        if let Some((index, jump)) = steps.iter().enumerate().find(|(_, s)| s.abs() > MAX_STEP) {
            return Err(DegreeError::UnderSampled { index, jump: jump.abs() });
        }
        let monotone_pieces = pieces(&steps);
        Ok(SampledCircleMap { domain, values, steps, monotone_pieces })
    }

    /// Coordinate or combined turn of boundary samples.
    pub fn from_samples(samples: &BoundaryMapSamples, chart: &CircleChart) -> Result<Self, DegreeError> {
        let values = samples.values.iter().map(|v| chart.apply(v)).collect();
        SampledCircleMap::new(samples.taus.clone(), values)
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        SampledCircleMap::new(t.clone(), t).expect("fine steps")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn domain(&self) -> &[f64] {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Maximal runs `(first, last)` of steps of one sign; zero steps join
    /// either side.
    pub fn monotone_pieces(&self) -> &[(usize, usize)] {
        &self.monotone_pieces
    }

    /// Sum of all steps around the circle.
    pub fn total_turns(&self) -> f64 {
        self.steps.iter().sum()
    }

    /// Values where the map turns back, or the constant value.
    fn extrema(&self) -> Vec<f64> {
        let n = self.len();
        let nonzero: Vec<usize> = (0..n).filter(|&k| self.steps[k] != 0.0).collect();
        if nonzero.is_empty() {
            return vec![self.values[0]];
        }
        let mut out = Vec::new();
        for (i, &k) in nonzero.iter().enumerate() {
            let next = nonzero[(i + 1) % nonzero.len()];
            if self.steps[k].signum() != self.steps[next].signum() {
                out.push(self.values[(k + 1) % n]);
            }
        }
        out
    }

    /// Number of steps crossing the level `y`, each step counted as the
    /// half-open arc from its start (excluded) to its end (included).
    pub fn count_preimages(&self, y: f64) -> usize {
        let mut count = 0i64;
        for (k, &d) in self.steps.iter().enumerate() {
            let u = self.values[k];
            let (lo, hi) = if d >= 0.0 { (u, u + d) } else { (u + d, u) };
            count += ((hi - y).floor() - (lo - y).floor()) as i64;
        }
        count as usize
    }
}

fn pieces(steps: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 0.0;
    for (k, &d) in steps.iter().enumerate() {
        let s = d.signum() * (d != 0.0) as i32 as f64;
        if s != 0.0 && sign != 0.0 && s != sign {
            out.push((start, k));
            start = k;
        }
        if s != 0.0 {
            sign = s;
        }
    }
    out.push((start, steps.len()));
    out
}

/// How a tuple in `ℝ̄^F` is read as a point of the circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleChart {
    /// The turn of one member.
    Coordinate(usize),
    /// The sum of the members' turns.
    TurnSum,
}

impl CircleChart {
    pub fn apply(&self, v: &[f64]) -> f64 {
        match self {
            CircleChart::Coordinate(i) => to_turn(v[*i]),
            CircleChart::TurnSum => v.iter().map(|&x| to_turn(x)).sum::<f64>().rem_euclid(1.0),
        }
    }
}

/// Draws a value in `[lo, hi)` that stays `gap` away from every value in
/// `avoid` (cyclically when `cyclic`).
fn draw_regular<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, avoid: &[f64], gap: f64, cyclic: bool) -> Option<f64> {
    for _ in 0..RETRIES {
        let y = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let far = avoid.iter().all(|&a| if cyclic { turn_delta(a, y).abs() > gap } else { (a - y).abs() > gap });
        if far {
            return Some(y);
        }
    }
    None
}

/// Parity of the number of preimages of a regular value. Without a given
/// value one is drawn uniformly, away from the sampled extrema by `2/n`.
pub fn z2_degree<R: Rng + ?Sized>(
    m: &SampledCircleMap,
    regular_value: Option<f64>,
    rng: &mut R,
) -> Result<ParityReport, DegreeError> {
    let y = match regular_value {
        Some(y) => y.rem_euclid(1.0),
        None => {
            let gap = (2.0 / m.len() as f64).min(1e-3);
            draw_regular(rng, 0.0, 1.0, &m.extrema(), gap, true).ok_or(DegreeError::NoRegularValue)?
        }
    };
    Ok(ParityReport::new(y, m.count_preimages(y)))
}

/// Signed number of turns.
pub fn winding_degree(m: &SampledCircleMap) -> Result<i64, DegreeError> {
    let w = m.total_turns();
    if (w - w.round()).abs() > WINDING_TOL {
        return Err(DegreeError::NonIntegralWinding(w));
    }
    Ok(w.round() as i64)
}

/// Degree data of one boundary square.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleReport {
    pub center: (f64, f64),
    pub radius: f64,
    pub samples: usize,
    pub winding: i64,
    pub parity: ParityReport,
}

/// Samples a boundary square, doubling `n` while the chart image is
/// under-sampled.
fn circle_map(
    family: &Family,
    center: &(Rat, Rat),
    radius: &Rat,
    chart: &CircleChart,
    mut n: usize,
) -> Result<(BoundaryMapSamples, SampledCircleMap), DegreeError> {
    loop {
        let s = sample_unchecked(family, center, radius, n)?;
        match SampledCircleMap::from_samples(&s, chart) {
            Ok(m) => return Ok((s, m)),
            Err(DegreeError::UnderSampled { .. }) if n < MAX_SAMPLES => n *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn circle_report<R: Rng + ?Sized>(
    family: &Family,
    center: &(Rat, Rat),
    radius: &Rat,
    chart: &CircleChart,
    n: usize,
    rng: &mut R,
) -> Result<CircleReport, DegreeError> {
    let (s, m) = circle_map(family, center, radius, chart, n)?;
    Ok(CircleReport {
        center: s.center,
        radius: s.radius,
        samples: s.len(),
        winding: winding_degree(&m)?,
        parity: z2_degree(&m, None, rng)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub outer: CircleReport,
    pub inner: Vec<CircleReport>,
    pub inner_xor: Parity,
    /// Outer parity equals the XOR of the inner ones.
    pub consistent: bool,
    /// Outer winding equals the sum of the inner windings.
    pub winding_additive: bool,
}

/// Small squares around every singular point inside the square of
/// half-side `square_radius` about the origin, with their common radius.
fn inner_squares(family: &Family, square_radius: &Rat) -> Result<(Vec<(Rat, Rat)>, Rat), DegreeError> {
    let big = rat_to_f64(square_radius);
    let pts: Vec<(f64, f64)> = family.singular_points().iter().map(|p| p.to_f64()).collect();
    let mut rho: f64 = 0.25;
    for (i, &(x, y)) in pts.iter().enumerate() {
        let margin = big - x.abs().max(y.abs());
        if margin <= 0.0 {
            return Err(DegreeError::GeometryViolation(format!("singular point ({x}, {y}) is not inside the square")));
        }
        rho = rho.min(margin / 3.0);
        for &(u, v) in &pts[i + 1..] {
            rho = rho.min((x - u).abs().max((y - v).abs()) / 3.0);
        }
    }
    let rho = floor_dyadic(&rat_from_f64(rho).expect("finite"), 40);
    if rho.is_zero() {
        return Err(DegreeError::GeometryViolation("singular points are too close".into()));
    }
    let centers = family
        .singular_points()
        .iter()
        .map(|p| p.exact().unwrap_or_else(|| (p.x.mid().clone(), p.y.mid().clone())))
        .collect();
    Ok((centers, rho))
}

/// Parity of the chart image of the family on the outer square against
/// the XOR of the parities on small squares around the singular points.
pub fn additivity_check<R: Rng + ?Sized>(
    family: &Family,
    square_radius: &Rat,
    chart: &CircleChart,
    n: usize,
    rng: &mut R,
) -> Result<AdditivityReport, DegreeError> {
    let (centers, rho) = inner_squares(family, square_radius)?;
    let origin = (Rat::zero(), Rat::zero());
    let outer = circle_report(family, &origin, square_radius, chart, n, rng)?;
    let mut inner = Vec::new();
    for c in &centers {
        inner.push(circle_report(family, c, &rho, chart, n, rng)?);
    }
    let inner_xor = inner.iter().fold(Parity::Even, |acc, r| acc.xor(r.parity.parity));
    let winding_sum: i64 = inner.iter().map(|r| r.winding).sum();
    Ok(AdditivityReport {
        consistent: outer.parity.parity == inner_xor,
        winding_additive: outer.winding == winding_sum,
        outer,
        inner,
        inner_xor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    /// Whether the family has a finite singular point at all.
    pub applies: bool,
    pub radial_winding: i64,
    pub radial_parity: Parity,
    pub inner: Vec<CircleReport>,
    pub inner_xor: Parity,
    /// The radial map is odd while the chart images around the singular
    /// points are even in total.
    pub obstruction: bool,
}

/// The radial projection of the outer square has odd degree, while the
/// chart images of the family around its singular points add up to an even
/// one.
pub fn obstruction_report<R: Rng + ?Sized>(
    family: &Family,
    square_radius: &Rat,
    chart: &CircleChart,
    n: usize,
    rng: &mut R,
) -> Result<ObstructionReport, DegreeError> {
    let r = rat_to_f64(square_radius);
    let taus: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let radial: Vec<f64> = taus
        .iter()
        .map(|&t| {
            let (x, y) = boundary_point((0.0, 0.0), r, t);
            y.atan2(x) / (2.0 * PI)
        })
        .collect();
    let radial_winding = winding_degree(&SampledCircleMap::new(taus, radial)?)?;
    let radial_parity = Parity::of(radial_winding);
    if family.singular_points().is_empty() {
        return Ok(ObstructionReport {
            applies: false,
            radial_winding,
            radial_parity,
            inner: Vec::new(),
            inner_xor: Parity::Even,
            obstruction: false,
        });
    }
    let (centers, rho) = inner_squares(family, square_radius)?;
    let mut inner = Vec::new();
    for c in &centers {
        inner.push(circle_report(family, c, &rho, chart, n, rng)?);
    }
    let inner_xor = inner.iter().fold(Parity::Even, |acc, r| acc.xor(r.parity.parity));
    Ok(ObstructionReport {
        applies: true,
        radial_winding,
        radial_parity,
        inner,
        inner_xor,
        obstruction: radial_parity != inner_xor,
    })
}

/// `μ_C`: the increasing map of a net cell onto `[0, 1]`; a net point
/// goes to 0.
fn mu(cell: NetCell, spacing: f64, v: f64) -> f64 {
    match cell {
        NetCell::Point(_) => 0.0,
        NetCell::Arc(k) => (turn_delta(k as f64 * spacing, to_turn(v)) / spacing).clamp(0.0, 1.0),
    }
}

/// Crossings of a generic level by `η = λ_E∘μ_E∘F̄` on the pieces of one
/// coherence class. The count is even by theory; the report records it.
pub fn parity_probe<R: Rng + ?Sized>(
    samples: &BoundaryMapSamples,
    class: &[(usize, bool)],
    signature: &CoherenceSignature,
    level: u32,
    weights: Option<&[f64]>,
    rng: &mut R,
) -> Result<ParityReport, DegreeError> {
    let spacing = build_net(level).spacing();
    let signs = signature.signs();
    let width = signs.len();
    let mus = |v: &[f64]| -> Vec<f64> { (0..width).map(|i| mu(signature.cube[i], spacing, v[i])).collect() };
    let pieces: Vec<Vec<Vec<f64>>> =
        class.iter().map(|&(k, _)| samples.piece(k).iter().map(|&s| mus(&samples.values[s])).collect()).collect();
    let mut ends: Vec<Vec<f64>> = Vec::new();
    for p in &pieces {
        for e in [&p[0], &p[p.len() - 1]] {
            if ends.iter().all(|q| tuple_dist(q, e) > 1e-12) {
                ends.push(e.clone());
            }
        }
    }
    let lambda = |alpha: &[f64], m: &[f64]| -> f64 { (0..width).map(|i| signs[i] * alpha[i] * m[i]).sum() };
    let injective = |alpha: &[f64]| {
        let vals: Vec<f64> = ends.iter().map(|e| lambda(alpha, e)).collect();
        (0..vals.len()).all(|i| (i + 1..vals.len()).all(|j| (vals[i] - vals[j]).abs() > 1e-9))
    };
    let alpha: Vec<f64> = match weights {
        Some(w) if injective(w) => w.to_vec(),
        Some(_) => return Err(DegreeError::InjectivityFailure),
        None => (0..RETRIES)
            .map(|_| (0..width).map(|_| rng.gen_range(1.0..2.0)).collect::<Vec<f64>>())
            .find(|a| injective(a))
            .ok_or(DegreeError::InjectivityFailure)?,
    };
    let etas: Vec<Vec<f64>> = pieces.iter().map(|p| p.iter().map(|m| lambda(&alpha, m)).collect()).collect();
    let all = etas.iter().flatten();
    let lo = all.clone().cloned().fold(f64::INFINITY, f64::min);
    let hi = all.cloned().fold(f64::NEG_INFINITY, f64::max);
    let end_vals: Vec<f64> = etas.iter().flat_map(|e| [e[0], e[e.len() - 1]]).collect();
    let gap = 2.0 * (hi - lo) / samples.len() as f64;
    let y = if hi - lo <= 1e-12 {
        hi + 1.0
    } else {
        draw_regular(rng, lo, hi, &end_vals, gap, false).ok_or(DegreeError::NoRegularValue)?
    };
    let crossings = etas
        .iter()
        .map(|e| e.windows(2).filter(|w| (w[0] >= y) != (w[1] >= y)).count())
        .sum();
    Ok(ParityReport::new(y, crossings))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassProbe {
    /// Boundary pieces of the class as `(piece, reversed)`.
    pub pieces: Vec<(usize, bool)>,
    pub report: ParityReport,
}

/// Parity probes on every coherence class of the boundary map around
/// `pt` at `tol` times the fiber radius, where members moving by at most
/// `tol` turns on a piece count as constant.
pub fn class_probes<R: Rng + ?Sized>(
    family: &Family,
    pt: &IndeterminacyPoint,
    tol: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<ClassProbe>, DegreeError> {
    let z = pt.exact().unwrap_or_else(|| (pt.x.mid().clone(), pt.y.mid().clone()));
    let scale = floor_dyadic(&rat_from_f64(tol.min(1.0)).expect("finite tol"), 64);
    let samples = sample_boundary_map(family, &z, &(fiber_radius(family, &z) * scale), n)?;
    let mut out = Vec::new();
    for (sig, pieces) in coherence_classes_tol(&samples, 0, tol)? {
        let report = parity_probe(&samples, &pieces, &sig, 0, None, rng)?;
        out.push(ClassProbe { pieces, report });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MobiusReport {
    pub center: (f64, f64),
    pub radius: f64,
    pub samples: usize,
    /// Largest chordal distance between values at antipodal points.
    pub antipodal_max: f64,
    pub winding: i64,
    pub passed: bool,
}

/// Antipodal agreement and winding ±2 of `(x − a)/(y − b)` (up to a
/// nonzero factor) on a square around `(a, b)`.
pub fn mobius_check(f: &RationalFn, center: &(Rat, Rat), radius: &Rat, n: usize) -> Result<MobiusReport, DegreeError> {
    let (a, b) = mobius_center(f)?;
    if (&a, &b) != (&center.0, &center.1) {
        return Err(DegreeError::WrongShape(format!("{f} is centered at ({a}, {b}), not ({}, {})", center.0, center.1)));
    }
    let n = n + n % 2;
    let family = Family::new(vec![f.clone()], 64)?;
    let c64 = (rat_to_f64(&a), rat_to_f64(&b));
    let r = rat_to_f64(radius);
    let taus: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let local = f.translate(&a, &b);
    let vals: Vec<f64> = taus
        .iter()
        .map(|&t| {
            let (x, y) = boundary_point((0.0, 0.0), r, t);
            local.eval_f64(x, y)
        })
        .collect();
    let antipodal_max =
        (0..n / 2).map(|k| crate::projective::chordal_f64(vals[k], vals[k + n / 2])).fold(0.0, f64::max);
    let (s, m) = circle_map(&family, center, radius, &CircleChart::Coordinate(0), n)?;
    let winding = winding_degree(&m)?;
    Ok(MobiusReport {
        center: c64,
        radius: s.radius,
        samples: s.len(),
        antipodal_max,
        winding,
        passed: antipodal_max <= 1e-9 && winding.abs() == 2,
    })
}

/// `(a, b)` for `f = k·(x − a)/(y − b)`.
pub fn mobius_center(f: &RationalFn) -> Result<(Rat, Rat), DegreeError> {
    let wrong = || DegreeError::WrongShape(format!("{f} is not of the form (x - a)/(y - b)"));
    let (p, q) = (f.numerator(), f.denominator());
    let only = |poly: &crate::algebra::BiPoly, var: (u32, u32)| poly.terms().all(|(k, _)| *k == var || *k == (0, 0));
    if !only(p, (1, 0)) || !only(q, (0, 1)) {
        return Err(wrong());
    }
    let (px, qy) = (p.coeff(1, 0), q.coeff(0, 1));
    if px.is_zero() || qy.is_zero() {
        return Err(wrong());
    }
    Ok((-p.coeff(0, 0) / px, -q.coeff(0, 0) / qy))
}

/// Default outer radius for additivity and obstruction runs: twice the
/// largest singular coordinate, at least 1.
pub fn default_outer_radius(family: &Family) -> Rat {
    let m = family
        .singular_points()
        .iter()
        .map(|p| {
            let (x, y) = p.to_f64();
            x.abs().max(y.abs())
        })
        .fold(0.0, f64::max);
    let r = (2.0 * m).max(1.0).ceil();
    rat_from_f64(r).unwrap_or_else(Rat::one)
}
