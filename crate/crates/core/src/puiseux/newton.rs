use num_bigint::BigInt;
use num_traits::Zero;

use super::PuiseuxError;
use crate::algebra::{BiPoly, Rat, UniPoly};

/// One edge of the lower Newton polygon. Along the edge the branch behaves
/// like `y ≈ c · x^gamma` with `c` a root of `edge_poly`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// `Δj / Δi` in the `(i, j)` exponent plane, negative.
    pub slope: Rat,
    /// `-1 / slope`, as the reduced fraction `a / b`.
    pub gamma: (u32, u32),
    /// `Σ a_ij c^(j - j_min)` over the support points on the edge.
    pub edge_poly: UniPoly,
    /// `b·i + a·j` on the edge.
    pub level: u32,
    pub j_min: u32,
}

/// Lower-convex-hull edges with negative slope, ordered by increasing
/// `gamma`. `p` must vanish at the origin and have no monomial factor.
pub fn newton_polygon(p: &BiPoly) -> Result<Vec<Edge>, PuiseuxError> {
    if p.is_zero() || !p.constant_term().is_zero() {
        return Err(PuiseuxError::NoOrigin);
    }
    let pts: Vec<(u32, u32)> = p.terms().map(|(&k, _)| k).collect();
    let j0 = pts.iter().filter(|k| k.0 == 0).map(|k| k.1).min();
    let i0 = pts.iter().filter(|k| k.1 == 0).map(|k| k.0).min();
    let (Some(j0), Some(_)) = (j0, i0) else {
        return Err(PuiseuxError::MonomialFactor);
    };
    let mut edges = Vec::new();
    let mut cur = (0u32, j0);
    while cur.1 > 0 {
        // next vertex: smallest gamma = (i - ic)/(jc - j), farthest on ties
        let mut best: Option<((u32, u32), Rat)> = None;
        for &(i, j) in &pts {
            if j >= cur.1 {
                continue;
            }
            let g = Rat::new(BigInt::from(i as i64 - cur.0 as i64), BigInt::from(cur.1 - j));
            let better = match &best {
                None => true,
                Some((bp, bg)) => g < *bg || (g == *bg && j < bp.1),
            };
            if better {
                best = Some(((i, j), g));
            }
        }
        let (next, g) = best.expect("a point on the x axis exists");
        let a = g.numer().try_into().expect("small exponent");
        let b = g.denom().try_into().expect("small exponent");
        let level = b * cur.0 + a * cur.1;
        let j_min = next.1;
        let mut coeffs = vec![Rat::zero(); (cur.1 - j_min) as usize + 1];
        for (&(i, j), c) in p.terms() {
            if b * i + a * j == level {
                coeffs[(j - j_min) as usize] = c.clone();
            }
        }
        edges.push(Edge {
            slope: -Rat::new(BigInt::from(b), BigInt::from(a)),
            gamma: (a, b),
            edge_poly: UniPoly::new(coeffs),
            level,
            j_min,
        });
        cur = next;
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn cusp_edge() {
        let e = newton_polygon(&BiPoly::from_int_terms(&[(1, 0, 2), (-1, 3, 0)])).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].slope, rat(-2, 3));
        assert_eq!(e[0].gamma, (3, 2));
        assert_eq!(e[0].edge_poly, UniPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn node_edge() {
        // y^2 - x^2 - x^3
        let e = newton_polygon(&BiPoly::from_int_terms(&[(1, 0, 2), (-1, 2, 0), (-1, 3, 0)])).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].slope, rat(-1, 1));
        assert_eq!(e[0].edge_poly, UniPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn line_edge() {
        let e = newton_polygon(&BiPoly::from_int_terms(&[(1, 0, 1), (-1, 1, 0)])).unwrap();
        assert_eq!(e[0].slope, rat(-1, 1));
        assert_eq!(e[0].edge_poly, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn two_edges() {
        // (y - x)(y - x^2) = y^2 - x y - x^2 y + x^3
        let p = BiPoly::from_int_terms(&[(1, 0, 2), (-1, 1, 1), (-1, 2, 1), (1, 3, 0)]);
        let e = newton_polygon(&p).unwrap();
        assert_eq!(e.iter().map(|e| e.gamma).collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
        assert_eq!(e[0].edge_poly, UniPoly::from_ints(&[-1, 1]));
        assert_eq!(e[1].edge_poly, UniPoly::from_ints(&[1, -1]));
    }

    #[test]
    fn rejects_non_origin() {
        assert_eq!(newton_polygon(&BiPoly::from_int_terms(&[(1, 0, 0), (1, 1, 0)])), Err(PuiseuxError::NoOrigin));
    }
}
