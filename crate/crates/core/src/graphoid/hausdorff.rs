//! Chordal Hausdorff distance between sampled subsets of `ℝ̄^F`.
//!
//! Points are tuples of `f64` values (`inf` for ∞). The distance between
//! tuples is the largest coordinatewise chordal distance, and a polyline
//! segment is the coordinatewise shortest arc between its ends, so a curve
//! lying on one circle factor is interpolated without chord error.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::projective::{chordal_f64, to_turn, turn_delta};

const GRID: usize = 4096;

pub fn tuple_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| chordal_f64(*x, *y)).fold(0.0, f64::max)
}

/// Distance from `p` to the segment from `a` to `a + d`, all in turns.
fn point_segment(p: &[f64], a: &[f64], d: &[f64]) -> f64 {
    let off = |i: usize| turn_delta(a[i], p[i]);
    let at = |l: f64| (0..d.len()).map(|i| 2.0 * (PI * (off(i) - l * d[i])).sin().abs()).fold(0.0, f64::max);
    let mut best = at(0.0).min(at(1.0));
    let mut try_at = |l: f64| {
        if l.is_finite() && l > 0.0 && l < 1.0 {
            best = best.min(at(l));
        }
    };
    for i in 0..d.len() {
        if d[i] != 0.0 {
            try_at(off(i) / d[i]);
        }
        for j in i + 1..d.len() {
            if d[i] != d[j] {
                try_at((off(i) - off(j)) / (d[i] - d[j]));
            }
            if d[i] != -d[j] {
                try_at((off(i) + off(j)) / (d[i] + d[j]));
            }
        }
    }
    best
}

/// Drops vertices within `eps` (in turns, every coordinate) of the last
/// kept one; the polyline moves by at most `eps`.
fn simplify(pts: &[Vec<f64>], eps: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    let mut last: Option<Vec<f64>> = None;
    for p in pts {
        let t: Vec<f64> = p.iter().map(|&v| to_turn(v)).collect();
        let keep = match &last {
            None => true,
            Some(l) => l.iter().zip(&t).any(|(x, y)| turn_delta(*x, *y).abs() > eps),
        };
        if keep {
            out.push(p.clone());
            last = Some(t);
        }
    }
    out
}

struct Index {
    starts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
    /// Up to two coordinates the buckets are keyed on, with their widths
    /// in turns.
    keys: Vec<(usize, f64)>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    /// Segments spanning too many buckets, always checked.
    long: Vec<usize>,
}

const MAX_SPAN: i64 = 64;
const MAX_RINGS: i64 = 64;

fn wrap(c: i64, width: f64) -> i64 {
    c.rem_euclid((1.0 / width).ceil() as i64)
}

impl Index {
    /// Segments between consecutive points (closing the loop when
    /// `closed`); a single point is a degenerate segment.
    fn new(pts: &[Vec<f64>], closed: bool) -> Self {
        let turns: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|&v| to_turn(v)).collect()).collect();
        let n = turns.len();
        let segs = if closed || n == 1 { n } else { n - 1 };
        let mut starts = Vec::with_capacity(segs);
        let mut deltas: Vec<Vec<f64>> = Vec::with_capacity(segs);
        for k in 0..segs {
            let a = &turns[k];
            let b = &turns[(k + 1) % n];
            deltas.push(a.iter().zip(b).map(|(x, y)| turn_delta(*x, *y)).collect());
            starts.push(a.clone());
        }
        let dim = turns[0].len();
        let variation = |c: usize| deltas.iter().map(|d| d[c].abs()).sum::<f64>();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|a, b| variation(*b).total_cmp(&variation(*a)));
        order.truncate(2);
        // one width for both keys, about four segments per occupied cell
        let length: f64 = order.iter().map(|&c| variation(c)).sum();
        let width = (4.0 * length / segs as f64).clamp(1e-12, 1.0 / GRID as f64);
        let keys: Vec<(usize, f64)> = order.into_iter().map(|c| (c, width)).collect();
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut long = Vec::new();
        for k in 0..segs {
            let ranges: Vec<(i64, i64)> = keys
                .iter()
                .map(|&(c, w)| {
                    let (a, d) = (starts[k][c], deltas[k][c]);
                    let (lo, hi) = if d >= 0.0 { (a, a + d) } else { (a + d, a) };
                    ((lo / w).floor() as i64, (hi / w).floor() as i64)
                })
                .collect();
            if ranges.iter().map(|r| r.1 - r.0).product::<i64>() > MAX_SPAN * MAX_SPAN
                || ranges.iter().any(|r| r.1 - r.0 > MAX_SPAN * MAX_SPAN)
            {
                long.push(k);
                continue;
            }
            let (r0, r1) = (ranges[0], ranges.get(1).copied().unwrap_or((0, 0)));
            for c0 in r0.0..=r0.1 {
                for c1 in r1.0..=r1.1 {
                    buckets.entry(Self::key(&keys, c0, c1)).or_default().push(k);
                }
            }
        }
        Index { starts, deltas, keys, buckets, long }
    }

    fn key(keys: &[(usize, f64)], c0: i64, c1: i64) -> (i64, i64) {
        let k0 = wrap(c0, keys[0].1);
        let k1 = keys.get(1).map_or(0, |&(_, w)| wrap(c1, w));
        (k0, k1)
    }

    /// Distance from `p` to the polyline, or `cap` if that is smaller.
    fn dist(&self, p: &[f64], cap: f64) -> f64 {
        let pt: Vec<f64> = p.iter().map(|&v| to_turn(v)).collect();
        let seg = |k: usize| point_segment(&pt, &self.starts[k], &self.deltas[k]);
        let mut best = self.long.iter().map(|&k| seg(k)).fold(cap, f64::min);
        let home: Vec<i64> = self.keys.iter().map(|&(c, w)| (pt[c] / w).floor() as i64).collect();
        let two = self.keys.len() == 2;
        let wmin = self.keys.iter().map(|k| k.1).fold(f64::INFINITY, f64::min);
        for ring in 0..=MAX_RINGS {
            // anything outside the searched rings is at least this far
            if best <= 4.0 * (ring as f64 - 1.0).max(0.0) * wmin {
                return best;
            }
            let mut cells = Vec::new();
            if two {
                for d0 in -ring..=ring {
                    for d1 in -ring..=ring {
                        if d0.abs() == ring || d1.abs() == ring {
                            cells.push((home[0] + d0, home[1] + d1));
                        }
                    }
                }
            } else if ring == 0 {
                cells.push((home[0], 0));
            } else {
                cells.push((home[0] - ring, 0));
                cells.push((home[0] + ring, 0));
            }
            for (c0, c1) in cells {
                if let Some(segs) = self.buckets.get(&Self::key(&self.keys, c0, c1)) {
                    for &k in segs {
                        best = best.min(seg(k));
                    }
                }
            }
        }
        (0..self.starts.len()).map(seg).fold(best, f64::min)
    }
}

/// Largest distance from a point of `a` to the polyline through `b`.
#[cfg(test)]
pub fn directed(a: &[Vec<f64>], b: &[Vec<f64>], b_closed: bool) -> f64 {
    directed_capped(a, b, b_closed, f64::INFINITY)
}

fn directed_capped(a: &[Vec<f64>], b: &[Vec<f64>], b_closed: bool, cap: f64) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return cap;
    }
    let idx = Index::new(b, b_closed);
    // Upper bounds from the segments at the proportional position in `b`;
    // exact distances are only needed while a bound exceeds the running max.
    let turns: Vec<Vec<f64>> = a.iter().map(|p| p.iter().map(|&v| to_turn(v)).collect()).collect();
    let segs = idx.starts.len();
    let mut bounds: Vec<(f64, usize)> = turns
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let j = (i * segs / a.len()) as i64;
            let ub = (j - 8..=j + 8)
                .map(|k| k.rem_euclid(segs as i64) as usize)
                .map(|k| point_segment(pt, &idx.starts[k], &idx.deltas[k]))
                .fold(cap, f64::min);
            (ub, i)
        })
        .collect();
    bounds.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut worst: f64 = 0.0;
    for (ub, i) in bounds {
        if ub <= worst || worst >= cap {
            break;
        }
        worst = worst.max(idx.dist(&a[i], ub));
    }
    worst.min(cap)
}

/// Hausdorff distance between two closed sampled loops, each vertex set
/// measured against the other's polyline.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    hausdorff_capped(a, b, f64::INFINITY)
}

/// An upper bound for `min(hausdorff(a, b), cap)`, exceeding it by at
/// most `4π·cap/1024`. Much cheaper when the loops are far apart or
/// have runs of nearly equal samples.
pub fn hausdorff_capped(a: &[Vec<f64>], b: &[Vec<f64>], cap: f64) -> f64 {
    let (a, b, slack) = if cap.is_finite() {
        let eps = cap / 1024.0;
        (simplify(a, eps), simplify(b, eps), 4.0 * PI * eps)
    } else {
        (a.to_vec(), b.to_vec(), 0.0)
    };
    let d = directed_capped(&a, &b, true, cap);
    if d >= cap {
        return cap;
    }
    (d.max(directed_capped(&b, &a, true, cap)) + slack).min(cap)
}

/// Distance from a tuple to a polyline (open).
pub fn point_to_polyline(p: &[f64], line: &[Vec<f64>]) -> f64 {
    if line.len() == 1 {
        return tuple_dist(p, &line[0]);
    }
    let turns: Vec<Vec<f64>> = line.iter().map(|q| q.iter().map(|&v| to_turn(v)).collect()).collect();
    let pt: Vec<f64> = p.iter().map(|&v| to_turn(v)).collect();
    turns
        .windows(2)
        .map(|w| {
            let d: Vec<f64> = w[0].iter().zip(&w[1]).map(|(x, y)| turn_delta(*x, *y)).collect();
            point_segment(&pt, &w[0], &d)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_loops() {
        let a: Vec<Vec<f64>> = (0..100).map(|k| vec![(k as f64 / 10.0) - 5.0]).collect();
        assert_eq!(hausdorff(&a, &a), 0.0);
    }

    #[test]
    fn arc_interpolation_is_exact_on_one_factor() {
        // two samplings of the whole circle, offset by half a step
        let a: Vec<Vec<f64>> = (0..64).map(|k| vec![crate::projective::from_turn(k as f64 / 64.0)]).collect();
        let b: Vec<Vec<f64>> = (0..64).map(|k| vec![crate::projective::from_turn((k as f64 + 0.5) / 64.0)]).collect();
        assert!(hausdorff(&a, &b) < 1e-12);
    }

    #[test]
    fn point_to_loop() {
        let a = vec![vec![0.0]];
        let b = vec![vec![1.0], vec![2.0]];
        // nearest is 1; chordal(0, 1) = 2/√2
        assert!((directed(&a, &b, false) - 2f64.sqrt()).abs() < 1e-12);
        assert!((point_to_polyline(&[0.0], &b) - 2f64.sqrt()).abs() < 1e-12);
        assert!((tuple_dist(&[0.0, 5.0], &[0.0, f64::INFINITY]) - 2.0 / 26f64.sqrt()).abs() < 1e-12);
    }
}
