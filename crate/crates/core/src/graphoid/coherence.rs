use super::{BoundaryMapSamples, GraphoidError};
use crate::projective::{build_net, to_turn, turn_delta, NetCell};

/// Turns closer than this count as equal.
const EQUAL_TURN: f64 = 1e-9;

/// Partition of the family by how each member compares at the two ends of
/// a boundary piece, with the net cell each member stays in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoherenceSignature {
    /// `f(a) < f(b)`
    pub less: Vec<usize>,
    pub equal: Vec<usize>,
    /// `f(a) > f(b)`
    pub greater: Vec<usize>,
    pub cube: Vec<NetCell>,
}

impl CoherenceSignature {
    /// The signature of the same piece traversed backwards.
    pub fn reversed(&self) -> Self {
        CoherenceSignature {
            less: self.greater.clone(),
            equal: self.equal.clone(),
            greater: self.less.clone(),
            cube: self.cube.clone(),
        }
    }

    /// Equal, possibly after reversing one of the pieces.
    pub fn coherent_with(&self, other: &Self) -> bool {
        self == other || self.reversed() == *other
    }

    /// `+1` on members increasing from `a` to `b`, `−1` on decreasing ones.
    pub fn signs(&self) -> Vec<f64> {
        let n = self.cube.len();
        (0..n).map(|i| if self.greater.contains(&i) { -1.0 } else { 1.0 }).collect()
    }
}

/// Signature of piece `seg` (from anchor `seg` to anchor `seg + 1`) with
/// respect to the net of the given level.
pub fn coherence_signature(samples: &BoundaryMapSamples, seg: usize, level: u32) -> Result<CoherenceSignature, GraphoidError> {
    coherence_signature_tol(samples, seg, level, EQUAL_TURN)
}

/// As [`coherence_signature`], with members moving at most `equal_turn`
/// turns counted as constant.
pub fn coherence_signature_tol(
    samples: &BoundaryMapSamples,
    seg: usize,
    level: u32,
    equal_turn: f64,
) -> Result<CoherenceSignature, GraphoidError> {
    let equal_turn = equal_turn.max(EQUAL_TURN);
    let net = build_net(level);
    let idx = samples.piece(seg);
    let width = samples.values[0].len();
    let mut sig = CoherenceSignature { less: Vec::new(), equal: Vec::new(), greater: Vec::new(), cube: Vec::new() };
    for i in 0..width {
        let turns: Vec<f64> = idx.iter().map(|&s| to_turn(samples.values[s][i])).collect();
        let (a, b) = (turns[0], turns[turns.len() - 1]);
        let constant = turns.iter().all(|&t| turn_delta(a, t).abs() <= equal_turn);
        let cell = if constant {
            net.cell(a, equal_turn)
        } else {
            let inner: Vec<f64> = if turns.len() > 2 {
                turns[1..turns.len() - 1].to_vec()
            } else {
                vec![a + turn_delta(a, b) / 2.0]
            };
            // samples resting on a net point do not decide the cell; arcs on
            // both sides of one do
            let arcs: Vec<NetCell> =
                inner.iter().map(|&t| net.cell(t, 1e-12)).filter(|c| matches!(c, NetCell::Arc(_))).collect();
            match arcs.first() {
                Some(&c) if arcs.iter().all(|a| *a == c) => c,
                Some(_) => return Err(GraphoidError::CellStraddle { member: i, segment: seg }),
                None => match net.cell(a + turn_delta(a, b) / 2.0, 0.0) {
                    NetCell::Arc(k) => NetCell::Arc(k),
                    NetCell::Point(_) => return Err(GraphoidError::CellStraddle { member: i, segment: seg }),
                },
            }
        };
        match cell {
            NetCell::Point(_) => sig.equal.push(i),
            NetCell::Arc(k) => {
                let start = k as f64 * net.spacing();
                let (ra, rb) = (turn_delta(start, a), turn_delta(start, b));
                if (ra - rb).abs() <= equal_turn {
                    sig.equal.push(i);
                } else if ra < rb {
                    sig.less.push(i);
                } else {
                    sig.greater.push(i);
                }
            }
        }
        sig.cube.push(cell);
    }
    Ok(sig)
}

/// Pieces grouped into coherence classes. Each class carries the signature
/// of its first piece and its members as `(piece, reversed)`.
pub fn coherence_classes(
    samples: &BoundaryMapSamples,
    level: u32,
) -> Result<Vec<(CoherenceSignature, Vec<(usize, bool)>)>, GraphoidError> {
    coherence_classes_tol(samples, level, EQUAL_TURN)
}

pub fn coherence_classes_tol(
    samples: &BoundaryMapSamples,
    level: u32,
    equal_turn: f64,
) -> Result<Vec<(CoherenceSignature, Vec<(usize, bool)>)>, GraphoidError> {
    let mut classes: Vec<(CoherenceSignature, Vec<(usize, bool)>)> = Vec::new();
    for k in 0..samples.num_pieces() {
        let sig = coherence_signature_tol(samples, k, level, equal_turn)?;
        match classes.iter_mut().find(|(s, _)| s.coherent_with(&sig)) {
            Some((s, members)) => {
                let rev = *s != sig;
                members.push((k, rev));
            }
            None => classes.push((sig, vec![(k, false)])),
        }
    }
    Ok(classes)
}
