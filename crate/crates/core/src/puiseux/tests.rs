use super::*;
use crate::algebra::{int, rat, DEFAULT_PRECISION_BITS};
use crate::parser::parse_rational_fn;

fn curve(s: &str) -> BiPoly {
    parse_rational_fn(s).unwrap().numerator().clone()
}

fn origin() -> (Rat, Rat) {
    (int(0), int(0))
}

fn expand(s: &str) -> BranchSet {
    expand_branches(&curve(s), &origin(), 12, DEFAULT_PRECISION_BITS).unwrap()
}

/// Sign changes of `p` around the circle of radius `r` about the origin.
fn polar_sign_changes(p: &BiPoly, r: f64, n: usize) -> usize {
    let sign = |k: usize| {
        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        p.eval_f64(r * th.cos(), r * th.sin()).signum()
    };
    (0..n).filter(|&k| sign(k) * sign((k + 1) % n) < 0.0).count()
}

fn check_involution(set: &BranchSet) {
    assert_eq!(set.branches.len() % 2, 0);
    for b in &set.branches {
        let c = set.conjugate_of(b);
        assert_ne!(c.id, b.id);
        assert_eq!(set.conjugate_of(c).id, b.id);
        assert_eq!(c.m, b.m);
    }
}

#[test]
fn cusp_two_east_branches() {
    let set = expand("y^2 - x^3");
    assert_eq!(set.branches.len(), 2);
    check_involution(&set);
    let mut lead = Vec::new();
    for b in &set.branches {
        assert_eq!(b.direction, Direction::E);
        assert_eq!(b.m, 2);
        assert!(b.terminating);
        assert_eq!(b.order_in_u(), Some(rat(3, 2)));
        lead.push(b.psi.coeff(3).unwrap().mid().clone());
    }
    lead.sort();
    assert_eq!(lead, vec![int(-1), int(1)]);
    assert_eq!(set.branches[0].conj_id, 1);
}

#[test]
fn odd_parity_branches_are_opposite() {
    let set = expand("x - y^3");
    assert_eq!(set.branches.len(), 2);
    check_involution(&set);
    let dirs: Vec<_> = set.branches.iter().map(|b| b.direction).collect();
    assert_eq!(dirs, vec![Direction::N, Direction::S]);
    assert_eq!(set.branches[0].m % 2, 1);
    // the two halves meet only at the origin
    let (x0, y0) = set.branches[0].point_f64(0.1);
    let (x1, y1) = set.branches[1].point_f64(0.1);
    assert!(y0 > 0.0 && y1 < 0.0);
    assert!((x0 - y0.powi(3)).abs() < 1e-15 && (x1 - y1.powi(3)).abs() < 1e-15);
}

#[test]
fn node_has_two_pairs() {
    let set = expand("y^2 - x^2*(x+1)");
    assert_eq!(set.branches.len(), 4);
    check_involution(&set);
    assert!(set.branches.iter().all(|b| b.m == 1));
    // y = x sqrt(1+x) = x + x^2/2 - x^3/8 + ...
    let b = set.branches.iter().find(|b| b.direction == Direction::E && b.psi.coeff(1).unwrap().mid() > &int(0)).unwrap();
    assert_eq!(b.psi.coeff(1).unwrap().exact_value(), Some(&int(1)));
    assert_eq!(b.psi.coeff(2).unwrap().exact_value(), Some(&rat(1, 2)));
    assert_eq!(b.psi.coeff(3).unwrap().exact_value(), Some(&rat(-1, 8)));
    assert_eq!(polar_sign_changes(&curve("y^2 - x^2*(x+1)"), 0.01, 1 << 14), 4);
}

#[test]
fn line_and_its_halves() {
    let set = expand("y - x");
    assert_eq!(set.branches.len(), 2);
    check_involution(&set);
    assert_eq!(set.branches[0].direction, Direction::E);
    assert_eq!(set.branches[1].direction, Direction::W);
    assert_eq!(set.branches[0].psi.coeff(1).unwrap().exact_value(), Some(&int(1)));
}

#[test]
fn axis_components() {
    let set = expand("x*y");
    assert_eq!(set.branches.len(), 4);
    check_involution(&set);
    assert!(set.branches.iter().all(|b| b.terminating && b.m == 1));
}

#[test]
fn tacnodes_and_higher_cusps() {
    let set = expand("y^2 - x^4");
    assert_eq!(set.branches.len(), 4);
    check_involution(&set);
    let set = expand("y^2 - x^5");
    assert_eq!(set.branches.len(), 2);
    assert!(set.branches.iter().all(|b| b.m == 2 && b.direction == Direction::E));
}

#[test]
fn irrational_coefficients() {
    // y = ±sqrt(2) x, two lines
    let set = expand("y^2 - 2*x^2");
    assert_eq!(set.branches.len(), 4);
    check_involution(&set);
    for b in &set.branches {
        let c = b.psi.coeff(1).unwrap();
        assert!(!c.is_exact());
        assert!((c.to_f64().abs() - 0.5f64.sqrt()).abs() < 1e-15 || (c.to_f64().abs() - 2f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn isolated_point_has_no_branches() {
    assert!(expand("x^2 + y^2").branches.is_empty());
    assert!(expand("x^2 + y^2 - 1").branches.is_empty());
}

#[test]
fn translated_center() {
    let p = curve("(y+2)^2 - (x-1)^3");
    let set = expand_branches(&p, &(int(1), int(-2)), 8, 128).unwrap();
    assert_eq!(set.branches.len(), 2);
    let (x, y) = set.branches[0].point_f64(0.1);
    assert!(p.eval_f64(x, y).abs() < 1e-12);
}

#[test]
fn residuals_vanish_to_truncation() {
    for s in ["y^2 - x^2*(x+1)", "y^3 - x^5 + x^4*y", "(y - x^2)*(y + x^3 - 2*x^2)", "y^2 - 3*x^2 + x^3*y"] {
        let set = expand(s);
        let local = set.local_curve();
        for b in &set.branches {
            let (x, y) = b.global_series();
            let r = compose(&local, &x, &y);
            for c in r.coeffs() {
                assert!(c.contains(&int(0)) || c.mid().abs() < pow2(-100), "{s}: {c:?}");
            }
        }
    }
}

#[test]
fn branch_points_lie_in_their_triangles() {
    for s in ["y^2 - x^3", "x - y^3", "y^2 - x^2*(x+1)", "x*y*(x - 2*y)", "y^3 - x^7"] {
        let set = expand(s);
        for b in &set.branches {
            // diagonal tangents are owned by one side and may curve across it
            let diagonal = b.psi.coeff(b.m as usize).is_some_and(|c| c.mid().abs() == int(1));
            let slack = if diagonal { 1.0 + 2.0 * 1e-2 } else { 1.0 + 1e-12 };
            for &r in &[1e-2, 1e-3] {
                let (x, y) = b.point_f64(b.param_at(r));
                let (u, v) = match b.direction {
                    Direction::E => (x, y),
                    Direction::N => (y, -x),
                    Direction::W => (-x, -y),
                    Direction::S => (-y, x),
                };
                assert!(u > 0.0 && v.abs() <= u * slack, "{s} branch {} at {r}", b.id);
            }
        }
    }
}

#[test]
fn newton_polygon_needs_origin() {
    assert_eq!(expand_branches(&BiPoly::zero(), &origin(), 4, 64), Err(PuiseuxError::ZeroPolynomial));
}

#[test]
fn a_small_examples() {
    assert_eq!(a_small_radius(&[curve("y^2 - x^3")]), rat(1, 2));
    assert_eq!(a_small_radius(&[curve("y - x"), curve("y + x")]), rat(1, 2));
    // vertical tangents of the node loop at x = -2/3 give y = ±2/(3√3)
    let r = rat_to_f64(&a_small_radius(&[curve("y^2 - x^2*(x+1)")]));
    assert!(r <= 1.0 / (3.0 * 3f64.sqrt()) && r > 0.19, "{r}");
    assert_eq!(critical_radius(&[curve("x - 1")]), Some(rat(1, 2)));
    assert_eq!(critical_radius(&[curve("x - y")]), None);
}

#[test]
fn sign_change_oracle_on_corpus() {
    for s in [
        "y^2 - x^3",
        "y^2 - x^2*(x+1)",
        "y^2 - x^5",
        "(y - x)*(y + x)",
        "x*y",
        "(y^2 - x^3)*(y - 2*x)",
        "x^3 - 3*x*y^2 + y^4",
        "y^3 - x^2*y + x^4",
        "x^2 + y^2",
        "(x^2 + y^2)^2 - x^3 + 3*x*y^2",
    ] {
        let set = expand(s);
        check_involution(&set);
        let r = rat_to_f64(&set.radius) / 2.0;
        assert_eq!(set.branches.len(), polar_sign_changes(&set.curve, r, 1 << 14), "{s}");
    }
}
