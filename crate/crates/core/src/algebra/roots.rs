use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{pow2, BigFloat, Rat, UniPoly};

/// A certified real root: an isolating ball refined to the requested
/// precision, its multiplicity, and the exact value when the root is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub value: BigFloat,
    pub multiplicity: usize,
    pub exact: Option<Rat>,
}

impl RealRoot {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Sturm sequence of a squarefree polynomial, each member scaled by a
/// positive constant to integer-primitive form.
struct Sturm {
    seq: Vec<UniPoly>,
}

impl Sturm {
    fn new(p: &UniPoly) -> Self {
        let mut seq = vec![p.primitive_integer(), p.derivative().primitive_integer()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push((-&r).primitive_integer());
        }
        Sturm { seq }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in `(a, b]`.
    fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// All real roots of `p` with multiplicities, sorted increasingly, each
/// refined until the ball radius is below `2^(-precision_bits/2)`.
pub fn isolate_real_roots(p: &UniPoly, precision_bits: u32) -> Vec<RealRoot> {
    assert!(!p.is_zero(), "isolate_real_roots of the zero polynomial");
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        let bound = factor.root_bound();
        for r in isolate_squarefree(&factor, &-bound.clone(), &bound, precision_bits) {
            out.push(RealRoot { multiplicity: mult, ..r });
        }
    }
    out.sort_by(|a, b| a.value.mid().cmp(b.value.mid()));
    out
}

/// Real roots of `p` in the open interval `(lo, hi)`, with multiplicities.
pub fn isolate_real_roots_in(p: &UniPoly, lo: &Rat, hi: &Rat, precision_bits: u32) -> Vec<RealRoot> {
    assert!(!p.is_zero());
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        for r in isolate_squarefree(&factor, lo, hi, precision_bits) {
            if r.value.mid() > lo && r.value.mid() < hi {
                out.push(RealRoot { multiplicity: mult, ..r });
            }
        }
    }
    out.sort_by(|a, b| a.value.mid().cmp(b.value.mid()));
    out
}

/// Roots of a squarefree `p` in the open interval `(lo, hi)`.
fn isolate_squarefree(p: &UniPoly, lo: &Rat, hi: &Rat, precision_bits: u32) -> Vec<RealRoot> {
    let sturm = Sturm::new(p);
    let mut isolating: Vec<(Rat, Rat)> = Vec::new();
    let mut exact_roots: Vec<Rat> = Vec::new();
    // Entries are half-open (a, b]; the flag marks b as already accounted
    // for (the excluded endpoint hi, or a root recorded earlier).
    let mut stack = vec![(lo.clone(), hi.clone(), true)];
    let two = Rat::from_integer(BigInt::from(2));
    while let Some((a, b, b_done)) = stack.pop() {
        let mut n = sturm.count(&a, &b);
        let b_root = p.sign_at(&b) == 0;
        if b_root {
            if !b_done {
                exact_roots.push(b.clone());
            }
            n -= 1;
        }
        if n == 0 {
            continue;
        }
        if n == 1 && !b_root {
            isolating.push((a, b));
            continue;
        }
        let m = (&a + &b) / &two;
        stack.push((a, m.clone(), false));
        stack.push((m, b, true));
    }
    let target = pow2(-(precision_bits as i64 / 2) - 1);
    let lc_int = p.primitive_integer().leading().unwrap().clone();
    let mut roots: Vec<RealRoot> = exact_roots
        .into_iter()
        .map(|r| RealRoot { value: BigFloat::exact(r.clone(), precision_bits), multiplicity: 1, exact: Some(r) })
        .collect();
    for (a, b) in isolating {
        roots.push(refine(p, a, b, &target, &lc_int, precision_bits));
    }
    roots
}

/// Bisect an isolating interval `(a, b]` of a simple root down to width
/// `target`, detecting rational roots exactly along the way.
fn refine(p: &UniPoly, mut a: Rat, mut b: Rat, target: &Rat, lc_int: &Rat, prec: u32) -> RealRoot {
    let two = Rat::from_integer(BigInt::from(2));
    // b is never a root here; a may be.
    let sb = p.sign_at(&b);
    debug_assert!(sb != 0);
    let mut tested_rational = false;
    loop {
        let width = &b - &a;
        if !tested_rational && width.clone() * lc_int.abs() * &two < Rat::one() {
            // A rational root has denominator dividing the leading coefficient,
            // so lc·root is the unique integer near lc·mid.
            tested_rational = true;
            let mid = (&a + &b) / &two;
            let k = (&mid * lc_int).round();
            let cand = k / lc_int;
            if cand > a && cand <= b && p.sign_at(&cand) == 0 {
                return RealRoot { value: BigFloat::exact(cand.clone(), prec), multiplicity: 1, exact: Some(cand) };
            }
        }
        if width <= *target {
            break;
        }
        let m = (&a + &b) / &two;
        let sm = p.sign_at(&m);
        if sm == 0 {
            return RealRoot { value: BigFloat::exact(m.clone(), prec), multiplicity: 1, exact: Some(m) };
        }
        if sm == sb {
            b = m;
        } else {
            a = m;
        }
    }
    RealRoot { value: BigFloat::from_interval(&a, &b, prec), multiplicity: 1, exact: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_to_f64};

    #[test]
    fn sqrt_two() {
        let roots = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]), 256);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].to_f64() + 2f64.sqrt()).abs() < 1e-15);
        assert!((roots[1].to_f64() - 2f64.sqrt()).abs() < 1e-15);
        for r in &roots {
            assert_eq!(r.multiplicity, 1);
            assert!(r.exact.is_none());
            assert!(r.value.err() < &pow2(-128));
        }
    }

    #[test]
    fn triple_zero_root() {
        let roots = isolate_real_roots(&UniPoly::from_ints(&[0, 0, 0, 1]), 256);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 3);
        assert_eq!(roots[0].exact, Some(rat(0, 1)));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&UniPoly::from_ints(&[1, 0, 1]), 256).is_empty());
    }

    #[test]
    fn rational_roots_are_exact() {
        // (3x - 1)(2x + 5)(x^2 - 3)
        let p = &(&UniPoly::from_ints(&[-1, 3]) * &UniPoly::from_ints(&[5, 2])) * &UniPoly::from_ints(&[-3, 0, 1]);
        let roots = isolate_real_roots(&p, 128);
        let exact: Vec<_> = roots.iter().filter_map(|r| r.exact.clone()).collect();
        assert_eq!(exact, vec![rat(-5, 2), rat(1, 3)]);
        assert_eq!(roots.len(), 4);
        assert!((rat_to_f64(roots[3].value.mid()) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn roots_in_window() {
        let p = UniPoly::from_ints(&[0, -1, 0, 1]); // x^3 - x
        let r = isolate_real_roots_in(&p, &rat(-1, 2), &rat(2, 1), 64);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].exact, Some(rat(0, 1)));
        assert_eq!(r[1].exact, Some(rat(1, 1)));
    }
}
