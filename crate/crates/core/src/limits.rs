//! Limits of rational functions along Puiseux branches.

use num_traits::Zero;

use crate::algebra::{pow2, Rat};
use crate::parser::RationalFn;
use crate::projective::{chordal_dist, ProjValue};
use crate::puiseux::{compose, expand_branches, PuiseuxBranch, PuiseuxError, Valuation};

/// Highest truncation order tried before giving up.
pub const MAX_ORDER: u32 = 96;

/// Chordal tolerance for numeric limit comparisons.
pub const LIMIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitError {
    #[error("limits.TruncationInsufficient: {0}")]
    TruncationInsufficient(String),
    #[error("limits.IndeterminateOnBranch: numerator and denominator both vanish on the branch")]
    IndeterminateOnBranch,
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchLimit {
    pub value: ProjValue,
    /// `val(q∘b) − val(p∘b)` in powers of `u = t^m`; `None` when one side
    /// vanishes through the truncation order.
    pub leading_exponent: Option<Rat>,
    /// False when a coefficient too small to resolve was taken for zero.
    pub certified: bool,
}

/// Limit of `f` along `b` as `t → 0+`, raising the truncation order up to
/// [`MAX_ORDER`] when the composed series do not yet decide it.
pub fn limit_along(f: &RationalFn, b: &PuiseuxBranch) -> Result<BranchLimit, LimitError> {
    let mut branch = b.clone();
    let mut order = ((b.known_to() as u32) / b.m).max(1);
    loop {
        match limit_at_truncation(f, &branch)? {
            Some(l) => return Ok(l),
            None if order >= MAX_ORDER => {
                return Err(LimitError::TruncationInsufficient(format!(
                    "f = {f} undecided along branch {} at order {order}",
                    b.id
                )))
            }
            None => {
                order = (order * 2).min(MAX_ORDER);
                let prec = b.psi.precision_bits();
                let set = expand_branches(&b.curve, &b.center, order, prec)?;
                branch = set
                    .branches
                    .into_iter()
                    .find(|c| c.id == b.id && c.direction == b.direction && c.m == b.m)
                    .ok_or_else(|| LimitError::TruncationInsufficient("branch lost on re-expansion".into()))?;
            }
        }
    }
}

fn limit_at_truncation(f: &RationalFn, b: &PuiseuxBranch) -> Result<Option<BranchLimit>, LimitError> {
    let (a, c) = &b.center;
    let p = f.numerator().translate(a, c);
    let q = f.denominator().translate(a, c);
    let (x, y) = b.global_series();
    let ps = compose(&p, &x, &y);
    let qs = compose(&q, &x, &y);
    let tiny = pow2(-(b.psi.precision_bits() as i64) / 3);
    let m = Rat::from_integer((b.m as i64).into());
    let exponent = |kp: usize, kq: usize| Some(Rat::from_integer((kq as i64 - kp as i64).into()) / &m);
    let out = match (ps.valuation(&tiny), qs.valuation(&tiny)) {
        (Valuation::Ambiguous, _) | (_, Valuation::Ambiguous) => None,
        (Valuation::Found { index: kp, skipped: s1 }, Valuation::Found { index: kq, skipped: s2 }) => {
            let value = if kp > kq {
                ProjValue::Exact(Rat::zero())
            } else if kp < kq {
                ProjValue::Infinity
            } else {
                let (pc, qc) = (&ps.coeffs()[kp], &qs.coeffs()[kq]);
                let r = pc.checked_div(qc).expect("certified nonzero");
                match r.exact_value() {
                    Some(v) => ProjValue::Exact(v.clone()),
                    None => ProjValue::Ball(r),
                }
            };
            Some(BranchLimit { value, leading_exponent: exponent(kp, kq), certified: !(s1 || s2) })
        }
        (Valuation::Vanishing { skipped: s1 }, Valuation::Found { skipped: s2, .. }) => Some(BranchLimit {
            value: ProjValue::Exact(Rat::zero()),
            leading_exponent: None,
            certified: !(s1 || s2),
        }),
        (Valuation::Found { skipped: s1, .. }, Valuation::Vanishing { skipped: s2 }) => Some(BranchLimit {
            value: ProjValue::Infinity,
            leading_exponent: None,
            certified: !(s1 || s2),
        }),
        (Valuation::Vanishing { skipped: s1 }, Valuation::Vanishing { skipped: s2 }) => {
            if b.terminating && !s1 && !s2 {
                return Err(LimitError::IndeterminateOnBranch);
            }
            None
        }
    };
    Ok(out)
}

/// Whether two limits agree: exactly for exact values, within
/// [`LIMIT_TOL`] chordally otherwise.
pub fn limits_agree(a: &ProjValue, b: &ProjValue) -> bool {
    match (a, b) {
        (ProjValue::Exact(x), ProjValue::Exact(y)) => x == y,
        (ProjValue::Infinity, ProjValue::Infinity) => true,
        _ => chordal_dist(a, b) <= LIMIT_TOL,
    }
}

/// Limits of `f` along `b` and along its conjugate agree.
pub fn conjugate_limits_equal(f: &RationalFn, b: &PuiseuxBranch, conj: &PuiseuxBranch) -> Result<bool, LimitError> {
    debug_assert_eq!(b.conj_id, conj.id);
    let la = limit_along(f, b)?;
    let lb = limit_along(f, conj)?;
    Ok(limits_agree(&la.value, &lb.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, DEFAULT_PRECISION_BITS};
    use crate::parser::parse_rational_fn;
    use crate::projective::chordal_f64;
    use crate::puiseux::BranchSet;

    fn f(s: &str) -> RationalFn {
        parse_rational_fn(s).unwrap()
    }

    fn branches(s: &str) -> BranchSet {
        expand_branches(f(s).numerator(), &(int(0), int(0)), 12, DEFAULT_PRECISION_BITS).unwrap()
    }

    #[test]
    fn cusp_examples() {
        let set = branches("y^2 - x^3");
        for b in &set.branches {
            let l = limit_along(&f("x/y"), b).unwrap();
            assert_eq!(l.value, ProjValue::Infinity);
            assert_eq!(l.leading_exponent, Some(rat(1, 2)));
            assert!(l.certified);
            assert_eq!(limit_along(&f("y^2/x^3"), b).unwrap().value, ProjValue::Exact(int(1)));
            assert!(conjugate_limits_equal(&f("x/y"), b, set.conjugate_of(b)).unwrap());
        }
    }

    #[test]
    fn line_slope() {
        let set = branches("y - 2*x");
        for b in &set.branches {
            assert_eq!(limit_along(&f("x/y"), b).unwrap().value, ProjValue::Exact(rat(1, 2)));
        }
    }

    #[test]
    fn irrational_limit() {
        // along y = sqrt(2) x: y/x -> sqrt(2), a certified ball
        let set = branches("y^2 - 2*x^2");
        for b in &set.branches {
            let l = limit_along(&f("y/x"), b).unwrap();
            let ProjValue::Ball(v) = &l.value else { panic!("{:?}", l.value) };
            assert!((v.to_f64().abs() - 2f64.sqrt()).abs() < 1e-15);
            assert!(l.certified);
            assert!(conjugate_limits_equal(&f("y/x"), b, set.conjugate_of(b)).unwrap());
        }
    }

    #[test]
    fn function_vanishing_on_branch() {
        // numerator vanishes identically on the branch: limit 0
        let set = branches("y^2 - 2*x^2");
        for b in &set.branches {
            let l = limit_along(&f("(y^2 - 2*x^2)/(x^2 + y^2)"), b).unwrap();
            assert_eq!(l.value, ProjValue::Exact(int(0)));
            assert!(!l.certified);
        }
        let set = branches("y - x^2");
        let l = limit_along(&f("(y - x^2)/x"), &set.branches[0]).unwrap();
        assert_eq!(l.value, ProjValue::Exact(int(0)));
        assert!(l.certified);
    }

    #[test]
    fn escalates_order() {
        // needs terms far beyond order 1 to see the difference
        let set = expand_branches(&f("y - x - x^9").numerator().clone(), &(int(0), int(0)), 1, 128).unwrap();
        let g = f("(y - x)/x^9");
        for b in &set.branches {
            assert_eq!(limit_along(&g, b).unwrap().value, ProjValue::Exact(int(1)));
        }
    }

    #[test]
    fn scaling() {
        let set = branches("y^2 - x^2*(x+1)");
        let g = f("(x + y)/(x - y)");
        for b in &set.branches {
            let l = limit_along(&g, b).unwrap();
            let l3 = limit_along(&g.scale(&rat(-3, 1)), b).unwrap();
            match (&l.value, &l3.value) {
                (ProjValue::Infinity, ProjValue::Infinity) => {}
                (ProjValue::Exact(a), ProjValue::Exact(c)) => assert_eq!(a * rat(-3, 1), *c),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn agrees_with_sampling() {
        let g = f("(x^2 + y)/(x*y - y^3)");
        let set = branches("y^2 - x^2*(x+1)");
        for b in &set.branches {
            let l = limit_along(&g, b).unwrap();
            let mut last = f64::INFINITY;
            for e in 3..6 {
                let (x, y) = b.point_f64(b.param_at(10f64.powi(-e)));
                let d = chordal_f64(g.eval_f64(x, y), l.value.to_f64());
                assert!(d <= last + 1e-12);
                last = d;
            }
            assert!(last < 1e-4, "{last}");
        }
    }
}
