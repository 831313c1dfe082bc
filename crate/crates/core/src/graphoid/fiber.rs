use num_traits::Zero;

use super::hausdorff::{hausdorff_capped, point_to_polyline, tuple_dist};
use super::{fiber_radius, level_curves, sample_boundary_map, BoundaryMapSamples, Family, GraphoidError, LEVEL_NAMES};
use crate::algebra::{Rat, DEFAULT_PRECISION_BITS};
use crate::limits::limit_along;
use crate::parser::IndeterminacyPoint;
use crate::projective::ProjValue;
use crate::puiseux::{expand_branches, Direction};

/// Radius refinements tried before giving up on convergence.
pub const MAX_REFINEMENTS: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct FiberOptions {
    pub order: u32,
    pub precision_bits: u32,
    /// Samples at the first radius; doubled at each refinement.
    pub base_samples: usize,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions { order: 12, precision_bits: DEFAULT_PRECISION_BITS, base_samples: 512 }
    }
}

/// A monotone arc of the fiber as sampled tuples, in boundary order.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberArc {
    pub samples: Vec<Vec<f64>>,
}

impl FiberArc {
    pub fn start(&self) -> &[f64] {
        &self.samples[0]
    }

    pub fn end(&self) -> &[f64] {
        &self.samples[self.samples.len() - 1]
    }
}

/// Limit of the whole family along one branch of a level curve of one
/// member through the point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberAnchor {
    pub member: usize,
    pub level: &'static str,
    pub branch_id: usize,
    pub conj_id: usize,
    pub direction: Direction,
    pub values: Vec<ProjValue>,
}

impl FiberAnchor {
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(ProjValue::to_f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub singular: bool,
    pub arcs: Vec<FiberArc>,
    pub points: Vec<Vec<f64>>,
    pub anchors: Vec<FiberAnchor>,
    /// Radius and sample count of the boundary square the fiber was read
    /// from (0 for regular points).
    pub radius: f64,
    pub samples: usize,
    /// Hausdorff distance between the last two radii (capped at `16·tol`).
    pub residual: f64,
    /// Largest distance from an anchor to the sampled fiber.
    pub anchor_residual: f64,
}

impl Fiber {
    /// All sampled tuples of arcs and points.
    pub fn tuples(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self.points.clone();
        for a in &self.arcs {
            out.extend(a.samples.iter().cloned());
        }
        out
    }

    /// Distance from a tuple to the sampled fiber.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let pts = self.points.iter().map(|q| tuple_dist(p, q));
        let arcs = self.arcs.iter().map(|a| point_to_polyline(p, &a.samples));
        pts.chain(arcs).fold(f64::INFINITY, f64::min)
    }
}

/// The fiber `F̄(z)` at a rational point.
pub fn fiber(family: &Family, z: &(Rat, Rat), tol: f64) -> Result<Fiber, GraphoidError> {
    fiber_with(family, z, tol, &FiberOptions::default())
}

pub fn fiber_with(family: &Family, z: &(Rat, Rat), tol: f64, opts: &FiberOptions) -> Result<Fiber, GraphoidError> {
    let mut values = Vec::new();
    for f in family.members() {
        match f.eval(&z.0, &z.1) {
            Some(v) => values.push(v.to_f64()),
            None => return singular_fiber(family, z, true, tol, opts),
        }
    }
    Ok(Fiber {
        singular: false,
        arcs: Vec::new(),
        points: vec![values],
        anchors: Vec::new(),
        radius: 0.0,
        samples: 0,
        residual: 0.0,
        anchor_residual: 0.0,
    })
}

/// The fiber at a singular point given as certified balls. Irrational
/// points are sampled around a rational approximation and get no anchors.
pub fn fiber_at(family: &Family, pt: &IndeterminacyPoint, tol: f64, opts: &FiberOptions) -> Result<Fiber, GraphoidError> {
    match pt.exact() {
        Some(z) => singular_fiber(family, &z, true, tol, opts),
        None => singular_fiber(family, &(pt.x.mid().clone(), pt.y.mid().clone()), false, tol, opts),
    }
}

fn singular_fiber(family: &Family, z: &(Rat, Rat), exact: bool, tol: f64, opts: &FiberOptions) -> Result<Fiber, GraphoidError> {
    let r0 = fiber_radius(family, z);
    let four = Rat::from_integer(4.into());
    let mut r = r0;
    let mut n = opts.base_samples.max(64);
    let mut prev = sample_boundary_map(family, z, &r, n)?;
    let mut residual = f64::INFINITY;
    let mut done = None;
    for _ in 0..MAX_REFINEMENTS {
        r /= &four;
        n *= 2;
        let cur = sample_boundary_map(family, z, &r, n)?;
        residual = hausdorff_capped(&prev.values, &cur.values, 16.0 * tol);
        if residual < tol {
            done = Some(cur);
            break;
        }
        prev = cur;
    }
    let Some(samples) = done else {
        return Err(GraphoidError::NoConvergence { residual, tol });
    };
    let (arcs, points) = decompose(&samples, tol);
    let anchors = if exact { branch_anchors(family, z, opts) } else { Vec::new() };
    let mut fib = Fiber {
        singular: true,
        arcs,
        points,
        anchors,
        radius: samples.radius,
        samples: samples.len(),
        residual,
        anchor_residual: 0.0,
    };
    fib.anchor_residual = fib.anchors.iter().map(|a| fib.distance_to(&a.to_f64())).fold(0.0, f64::max);
    Ok(fib)
}

/// Splits the boundary image at the anchors into monotone arcs, collapsing
/// pieces that stay within `tol` of their start to points and dropping
/// repeats.
fn decompose(s: &BoundaryMapSamples, tol: f64) -> (Vec<FiberArc>, Vec<Vec<f64>>) {
    let mut arcs: Vec<FiberArc> = Vec::new();
    let mut points: Vec<Vec<f64>> = Vec::new();
    for k in 0..s.num_pieces() {
        let piece: Vec<Vec<f64>> = s.piece(k).into_iter().map(|i| s.values[i].clone()).collect();
        let spread = piece.iter().map(|v| tuple_dist(v, &piece[0])).fold(0.0, f64::max);
        if spread <= tol {
            if points.iter().all(|p| tuple_dist(p, &piece[0]) > tol) {
                points.push(piece[0].clone());
            }
            continue;
        }
        let arc = FiberArc { samples: piece };
        if !arcs.iter().any(|a| same_arc(a, &arc, tol)) {
            arcs.push(arc);
        }
    }
    points.retain(|p| arcs.iter().all(|a| point_to_polyline(p, &a.samples) > tol));
    (arcs, points)
}

fn same_arc(a: &FiberArc, b: &FiberArc, tol: f64) -> bool {
    let forward = tuple_dist(a.start(), b.start()) <= tol && tuple_dist(a.end(), b.end()) <= tol;
    let backward = tuple_dist(a.start(), b.end()) <= tol && tuple_dist(a.end(), b.start()) <= tol;
    (forward || backward) && point_to_polyline(&a.samples[a.samples.len() / 2], &b.samples) <= tol
}

/// Limits of the family along every branch through `z` of every level
/// curve `f ∈ {0, ±1, ∞}`. Members regular at `z` contribute their value.
/// Branches whose limit cannot be decided are left out.
fn branch_anchors(family: &Family, z: &(Rat, Rat), opts: &FiberOptions) -> Vec<FiberAnchor> {
    let mut out = Vec::new();
    for (member, f) in family.members().iter().enumerate() {
        for (level, curve) in LEVEL_NAMES.iter().zip(level_curves(f)) {
            if curve.is_constant() || !curve.eval(&z.0, &z.1).is_zero() {
                continue;
            }
            let Ok(set) = expand_branches(&curve, z, opts.order, opts.precision_bits) else {
                continue;
            };
            for b in &set.branches {
                let values: Result<Vec<ProjValue>, _> = family
                    .members()
                    .iter()
                    .map(|g| match g.eval(&z.0, &z.1) {
                        Some(v) => Ok(v),
                        None => limit_along(g, b).map(|l| l.value),
                    })
                    .collect();
                if let Ok(values) = values {
                    out.push(FiberAnchor {
                        member,
                        level,
                        branch_id: b.id,
                        conj_id: b.conj_id,
                        direction: b.direction,
                        values,
                    });
                }
            }
        }
    }
    out
}
