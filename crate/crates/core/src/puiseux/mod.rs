//! Real Newton–Puiseux branches of a plane curve at a point.
//!
//! The punctured neighbourhood of the center is split into four closed
//! triangles E, N, W, S around the rays of the coordinate axes. Each
//! triangle gets its own frame `(u, v)` in which it reads `u > 0,
//! |v| <= u`, and a branch is `u = t^m`, `v = ψ(t)` for `t > 0`. A branch
//! tangent to a diagonal is assigned to the triangle owning that diagonal
//! ray counterclockwise, i.e. the frame where its tangent is `v = u`.

mod newton;
mod series;

pub use newton::{newton_polygon, Edge};
pub use series::{compose, Series, Valuation};

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    floor_dyadic, isolate_real_roots, pow2, rat_to_f64, resultant_x, resultant_y, squarefree_part,
    BallPoly, BigFloat, BiPoly, Rat, UniPoly,
};

/// Deepest chain of multiple edge roots followed before giving up.
const MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PuiseuxError {
    #[error("puiseux.NoOrigin: polynomial does not vanish at the origin")]
    NoOrigin,
    #[error("puiseux.MonomialFactor: divide out x and y factors first")]
    MonomialFactor,
    #[error("puiseux.ZeroPolynomial: the zero polynomial has no branches")]
    ZeroPolynomial,
    #[error("puiseux.TruncationInsufficient: {0}")]
    TruncationInsufficient(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    E,
    N,
    W,
    S,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::E, Direction::N, Direction::W, Direction::S];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::E => Direction::W,
            Direction::N => Direction::S,
            Direction::W => Direction::E,
            Direction::S => Direction::N,
        }
    }

    /// Global offset `(x, y)` of the frame point `(u, v)`.
    pub fn to_global(self, u: f64, v: f64) -> (f64, f64) {
        match self {
            Direction::E => (u, v),
            Direction::N => (-v, u),
            Direction::W => (-u, -v),
            Direction::S => (v, -u),
        }
    }

    /// `p` written in frame coordinates.
    pub fn frame_poly(self, p: &BiPoly) -> BiPoly {
        let (u, v) = (BiPoly::x(), BiPoly::y());
        match self {
            Direction::E => p.clone(),
            Direction::N => p.substitute(&-&v, &u),
            Direction::W => p.substitute(&-&u, &-&v),
            Direction::S => p.substitute(&v, &-&u),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which half of a shared parametrization a branch is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignChart {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxBranch {
    pub id: usize,
    pub direction: Direction,
    pub m: u32,
    /// `v = ψ(t)` in the frame of `direction`, `u = t^m`, `t > 0`.
    pub psi: Series,
    /// The parametrization is exactly polynomial: ψ has no tail.
    pub terminating: bool,
    pub radius: Rat,
    pub conj_id: usize,
    pub sign_chart: SignChart,
    pub center: (Rat, Rat),
    /// Squarefree curve (original coordinates) the branch belongs to.
    pub curve: BiPoly,
}

impl PuiseuxBranch {
    /// Largest `k` with the coefficient of `t^k` known.
    pub fn known_to(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.psi.is_exact()
    }

    /// Offsets `(x(t), y(t))` from the center as series in `t`.
    pub fn global_series(&self) -> (Series, Series) {
        let n = self.psi.len();
        let prec = self.psi.precision_bits();
        let u = Series::monomial(BigFloat::one(prec), self.m as usize, n);
        let v = self.psi.clone();
        match self.direction {
            Direction::E => (u, v),
            Direction::N => (v.neg(), u),
            Direction::W => (u.neg(), v.neg()),
            Direction::S => (v, u.neg()),
        }
    }

    /// Point of the branch at parameter `t > 0`, in global coordinates.
    pub fn point_f64(&self, t: f64) -> (f64, f64) {
        let (dx, dy) = self.direction.to_global(t.powi(self.m as i32), self.psi.eval_f64(t));
        (rat_to_f64(&self.center.0) + dx, rat_to_f64(&self.center.1) + dy)
    }

    /// Parameter at which `u = r`.
    pub fn param_at(&self, r: f64) -> f64 {
        r.powf(1.0 / self.m as f64)
    }

    /// Leading exponent of ψ in terms of `u`, if ψ is not identically zero.
    pub fn order_in_u(&self) -> Option<Rat> {
        match self.psi.valuation(&Rat::zero()) {
            Valuation::Found { index, .. } => Some(Rat::new((index as i64).into(), (self.m as i64).into())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    pub center: (Rat, Rat),
    pub radius: Rat,
    pub branches: Vec<PuiseuxBranch>,
    /// Squarefree curve in original coordinates.
    pub curve: BiPoly,
    pub order: u32,
}

impl BranchSet {
    pub fn conjugate_of(&self, b: &PuiseuxBranch) -> &PuiseuxBranch {
        &self.branches[b.conj_id]
    }

    /// The curve translated so that the center is the origin.
    pub fn local_curve(&self) -> BiPoly {
        self.curve.translate(&self.center.0, &self.center.1)
    }
}

/// Everything `solve` finds: `(t^m, psi(t))`, `t > 0`.
struct Raw {
    m: u32,
    psi: Vec<BigFloat>,
    terminating: bool,
}

/// All real branches of `p` at `center`, with ψ known at least through
/// `u^order`, conjugates linked.
pub fn expand_branches(p: &BiPoly, center: &(Rat, Rat), order: u32, precision_bits: u32) -> Result<BranchSet, PuiseuxError> {
    if p.is_zero() {
        return Err(PuiseuxError::ZeroPolynomial);
    }
    let order = order.max(1);
    let curve = squarefree_part(p);
    let local = curve.translate(&center.0, &center.1);
    let radius = a_small_radius(std::slice::from_ref(&local));
    let mut branches = Vec::new();
    if local.constant_term().is_zero() {
        for dir in Direction::ALL {
            let q = dir.frame_poly(&local);
            for raw in solve(&q, order, true, 0, precision_bits)? {
                branches.push(PuiseuxBranch {
                    id: branches.len(),
                    direction: dir,
                    m: raw.m,
                    psi: Series::from_coeffs(raw.psi, precision_bits),
                    terminating: raw.terminating,
                    radius: radius.clone(),
                    conj_id: usize::MAX,
                    sign_chart: SignChart::Positive,
                    center: center.clone(),
                    curve: curve.clone(),
                });
            }
        }
    }
    link_conjugates(&mut branches)?;
    Ok(BranchSet { center: center.clone(), radius, branches, curve, order })
}

fn link_conjugates(branches: &mut [PuiseuxBranch]) -> Result<(), PuiseuxError> {
    for i in 0..branches.len() {
        if branches[i].conj_id != usize::MAX {
            continue;
        }
        let b = &branches[i];
        let (dir, target) = if b.m.is_multiple_of(2) {
            (b.direction, b.psi.reflect())
        } else {
            (b.direction.opposite(), b.psi.reflect().neg())
        };
        let hits: Vec<usize> = branches
            .iter()
            .enumerate()
            .filter(|(j, c)| {
                *j != i && c.conj_id == usize::MAX && c.direction == dir && c.m == b.m && series_agree(&target, &c.psi)
            })
            .map(|(j, _)| j)
            .collect();
        if hits.len() != 1 {
            return Err(PuiseuxError::TruncationInsufficient(format!(
                "branch {i} has {} conjugate candidates",
                hits.len()
            )));
        }
        let j = hits[0];
        branches[i].conj_id = j;
        branches[i].sign_chart = SignChart::Positive;
        branches[j].conj_id = i;
        branches[j].sign_chart = SignChart::Negative;
    }
    Ok(())
}

fn series_agree(a: &Series, b: &Series) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
        if x.is_exact() && y.is_exact() {
            x == y
        } else {
            x.overlaps(y)
        }
    })
}

/// Real branches of `q(u, v) = 0` with `u = t^m > 0` and `v → 0`, each
/// known through `t^(order·m)`. At the first stage only branches inside the
/// frame's triangle are kept.
fn solve(q: &BiPoly, order: u32, first: bool, depth: usize, prec: u32) -> Result<Vec<Raw>, PuiseuxError> {
    if depth > MAX_DEPTH {
        return Err(PuiseuxError::TruncationInsufficient("edge-root recursion too deep".into()));
    }
    let mut out = Vec::new();
    let (ku, kv) = q.monomial_content();
    let mut q = q.unshift_monomial(ku, kv);
    if kv > 0 {
        out.push(Raw { m: 1, psi: vec![BigFloat::zero(prec); order as usize + 1], terminating: true });
    }
    if !q.constant_term().is_zero() || q.is_zero() {
        return Ok(out);
    }
    q = q.normalized();
    for edge in newton_polygon(&q)? {
        let (a, b) = edge.gamma;
        if first && a < b {
            continue;
        }
        for root in isolate_real_roots(&edge.edge_poly, prec) {
            let c = root.value.clone();
            if c.is_exact() && c.mid().is_zero() {
                continue;
            }
            if first && a == b {
                let one = Rat::one();
                let inside = match c.exact_value() {
                    Some(v) => *v > -one.clone() && *v <= one,
                    None => {
                        if c.lower() > -one.clone() && c.upper() < one {
                            true
                        } else if c.upper() < -one.clone() || c.lower() > one {
                            false
                        } else {
                            return Err(PuiseuxError::TruncationInsufficient("diagonal tangent undecided".into()));
                        }
                    }
                };
                if !inside {
                    continue;
                }
            }
            let child_order = (b as i64 * order as i64 - a as i64).max(1) as u32;
            let q1 = substitute_edge(&q, a, b, edge.level, &c);
            let subs: Vec<Raw> = if root.multiplicity == 1 {
                let terminating = q1.to_exact().is_some_and(|e| e.monomial_content().1 > 0);
                vec![Raw { m: 1, psi: lift_simple(&q1, child_order as usize)?, terminating }]
            } else {
                let Some(q1) = q1.to_exact() else {
                    return Err(PuiseuxError::TruncationInsufficient(
                        "multiple irrational edge root".into(),
                    ));
                };
                solve(&q1, child_order, false, depth + 1, prec)?
            };
            for sub in subs {
                let shift = (a * sub.m) as usize;
                let mut psi = vec![BigFloat::zero(prec); shift + sub.psi.len()];
                psi[shift] = c.clone();
                for (k, w) in sub.psi.iter().enumerate() {
                    psi[shift + k] = &psi[shift + k] + w;
                }
                out.push(Raw { m: b * sub.m, psi, terminating: sub.terminating });
            }
        }
    }
    Ok(out)
}

/// `q(s^b, s^a (c + w)) / s^level`, with the constant term forced to zero
/// (`c` is a root of the edge polynomial).
fn substitute_edge(q: &BiPoly, a: u32, b: u32, level: u32, c: &BigFloat) -> BallPoly {
    let prec = c.precision_bits();
    let dy = q.degree_y() as usize;
    let mut cpow = vec![BigFloat::one(prec)];
    for k in 1..=dy {
        let next = &cpow[k - 1] * c;
        cpow.push(next);
    }
    let binom = binomials(dy);
    let mut out = BallPoly::new(prec);
    for (&(i, j), coef) in q.terms() {
        let s_exp = b * i + a * j - level;
        let coef = BigFloat::exact(coef.clone(), prec);
        for k in 0..=j as usize {
            let t = &(&coef * &cpow[j as usize - k]) * &BigFloat::exact(binom[j as usize][k].clone(), prec);
            out.add_term(s_exp, k as u32, &t);
        }
    }
    out.set_term(0, 0, BigFloat::zero(prec));
    out
}

fn binomials(n: usize) -> Vec<Vec<Rat>> {
    let mut rows = vec![vec![Rat::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![Rat::one(); k + 1];
        for i in 1..k {
            row[i] = &prev[i - 1] + &prev[i];
        }
        rows.push(row);
    }
    rows
}

/// Coefficients `w_0..=w_n` (with `w_0 = 0`) of the unique analytic
/// solution of `q(s, w(s)) = 0`, `w(0) = 0`, when `∂q/∂w(0,0) ≠ 0`.
fn lift_simple(q: &BallPoly, n: usize) -> Result<Vec<BigFloat>, PuiseuxError> {
    let prec = q.precision_bits();
    let a = q.coeff(0, 1);
    if !a.is_certainly_nonzero() {
        return Err(PuiseuxError::TruncationInsufficient("simple root with vanishing derivative".into()));
    }
    let jmax = q.terms().map(|(k, _)| k.1).max().unwrap_or(1) as usize;
    let zero = BigFloat::zero(prec);
    // pw[j][d]: coefficient of s^d in w^j
    let mut pw = vec![vec![zero.clone(); n + 1]; jmax + 1];
    pw[0][0] = BigFloat::one(prec);
    let terms: Vec<((u32, u32), BigFloat)> =
        q.terms().filter(|(k, _)| **k != (0, 1)).map(|(k, c)| (*k, c.clone())).collect();
    for k in 1..=n {
        for j in 2..=jmax {
            let mut acc = zero.clone();
            for l in 1..k {
                let (wl, p) = (&pw[1][l], &pw[j - 1][k - l]);
                if (wl.is_exact() && wl.mid().is_zero()) || (p.is_exact() && p.mid().is_zero()) {
                    continue;
                }
                acc = &acc + &(wl * p);
            }
            pw[j][k] = acc;
        }
        let mut r = zero.clone();
        for ((i, j), c) in &terms {
            let (i, j) = (*i as usize, *j as usize);
            if i > k {
                continue;
            }
            let p = &pw[j][k - i];
            if p.is_exact() && p.mid().is_zero() {
                continue;
            }
            r = &r + &(c * p);
        }
        let wk = -&r.checked_div(&a).expect("certified nonzero divisor");
        pw[1][k] = wk;
    }
    Ok(pw.swap_remove(1))
}

/// A radius below which the branch structure of the given curves at the
/// origin is stable: half the smallest nonzero `|root|` among discriminants,
/// pairwise resultants, vertical/horizontal line components and axis
/// intersections, capped at 1/2.
pub fn a_small_radius(curves: &[BiPoly]) -> Rat {
    let half = Rat::new(1.into(), 2.into());
    match critical_radius(curves) {
        Some(r) if r < half => r,
        _ => half,
    }
}

/// The uncapped bound behind [`a_small_radius`]; `None` when no nonzero
/// critical value exists.
pub fn critical_radius(curves: &[BiPoly]) -> Option<Rat> {
    let sq: Vec<BiPoly> = curves
        .iter()
        .filter(|c| !c.is_zero())
        .map(squarefree_part)
        .filter(|c| !c.is_constant())
        .collect();
    let mut polys: Vec<UniPoly> = Vec::new();
    for c in &sq {
        if c.degree_y() > 0 {
            polys.extend(resultant_y(c, &c.partial_y()).ok());
        }
        if c.degree_x() > 0 {
            polys.extend(resultant_x(c, &c.partial_x()).ok());
        }
        polys.push(c.content_y());
        polys.push(c.swap_xy().content_y());
        polys.push(c.restrict_y(&Rat::zero()));
        polys.push(c.restrict_x(&Rat::zero()));
    }
    for i in 0..sq.len() {
        for j in i + 1..sq.len() {
            polys.extend(resultant_y(&sq[i], &sq[j]).ok());
            polys.extend(resultant_x(&sq[i], &sq[j]).ok());
        }
    }
    let mut best: Option<Rat> = None;
    for p in polys.iter().filter(|p| !p.is_zero() && !p.is_constant()) {
        let p = UniPoly::new(p.coeffs()[p.low_order()..].to_vec());
        if p.is_constant() {
            continue;
        }
        for r in isolate_real_roots(&p, 64) {
            let lo = r.value.mid().abs() - r.value.err();
            if lo.is_positive() && best.as_ref().is_none_or(|b| lo < *b) {
                best = Some(lo);
            }
        }
    }
    best.map(|b| {
        let r = b / Rat::from_integer(2.into());
        let bits = 12 + (-crate::algebra::approx_log2(&r)).max(0) as u32;
        let f = floor_dyadic(&r, bits);
        if f.is_positive() {
            f
        } else {
            pow2(-(bits as i64))
        }
    })
}

#[cfg(test)]
mod tests;
