//! Textual rational functions in `x`, `y`: parsing to canonical form,
//! family files, chart flips at infinity and indeterminacy points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{
    isolate_real_roots, poly_gcd, resultant_x, resultant_y, BigFloat, BiPoly, Rat, UniPoly,
};
use crate::projective::ProjValue;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RfError {
    #[error("rf_parser.SyntaxError at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("rf_parser.DivisionByZeroPoly: denominator is the zero polynomial")]
    DivisionByZeroPoly,
    #[error("rf_parser.ConstantFunction: {0} is constant")]
    ConstantFunction(String),
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<RfError> },
    #[error("rf_parser.EmptyFamily: no functions in input")]
    EmptyFamily,
}

/// `p / q` with coprime `p`, `q`; `q` integer-primitive with positive
/// graded-lex leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    p: BiPoly,
    q: BiPoly,
}

impl RationalFn {
    /// Canonical form of `p / q`.
    pub fn new(p: BiPoly, q: BiPoly) -> Result<Self, RfError> {
        if q.is_zero() {
            return Err(RfError::DivisionByZeroPoly);
        }
        if p.is_zero() {
            return Ok(RationalFn { p, q: BiPoly::one() });
        }
        let g = poly_gcd(&p, &q);
        let p = p.div_exact(&g).expect("gcd divides numerator");
        let q = q.div_exact(&g).expect("gcd divides denominator");
        let qn = q.normalized();
        // qn = s·q for the rational s read off any term
        let ((i, j), c) = q.leading_term().unwrap();
        let s = qn.coeff(i, j) / c;
        Ok(RationalFn { p: p.scale(&s), q: qn })
    }

    pub fn polynomial(p: BiPoly) -> Self {
        RationalFn::new(p, BiPoly::one()).unwrap()
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.p
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.q
    }

    pub fn is_constant(&self) -> bool {
        self.p.is_constant() && self.q.is_constant()
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Option<ProjValue> {
        let n = self.p.eval(x, y);
        let d = self.q.eval(x, y);
        match (n.is_zero(), d.is_zero()) {
            (true, true) => None,
            (_, true) => Some(ProjValue::Infinity),
            _ => Some(ProjValue::Exact(n / d)),
        }
    }

    /// Value at a point as `f64`, `inf` for poles; `NaN` where both vanish.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let n = self.p.eval_f64(x, y);
        let d = self.q.eval_f64(x, y);
        if d == 0.0 {
            if n == 0.0 {
                f64::NAN
            } else {
                f64::INFINITY
            }
        } else {
            n / d
        }
    }

    /// `f(x + a, y + b)`
    pub fn translate(&self, a: &Rat, b: &Rat) -> Self {
        RationalFn::new(self.p.translate(a, b), self.q.translate(a, b)).unwrap()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RationalFn::new(self.p.scale(s), self.q.clone()).unwrap()
    }

    /// Numerator of `∂f/∂x`: `p_x q − p q_x`.
    pub fn dx_numerator(&self) -> BiPoly {
        &(&self.p.partial_x() * &self.q) - &(&self.p * &self.q.partial_x())
    }

    /// Numerator of `∂f/∂y`: `p_y q − p q_y`.
    pub fn dy_numerator(&self) -> BiPoly {
        &(&self.p.partial_y() * &self.q) - &(&self.p * &self.q.partial_y())
    }

    pub fn flip(&self, flip: ChartFlip) -> Self {
        let (mut p, mut q) = (self.p.clone(), self.q.clone());
        if matches!(flip, ChartFlip::X | ChartFlip::XY) {
            let d = p.degree_x().max(q.degree_x());
            p = p.reverse_x().shift_monomial(d - p.degree_x(), 0);
            q = q.reverse_x().shift_monomial(d - q.degree_x(), 0);
        }
        if matches!(flip, ChartFlip::Y | ChartFlip::XY) {
            let d = p.degree_y().max(q.degree_y());
            p = p.reverse_y().shift_monomial(0, d - p.degree_y());
            q = q.reverse_y().shift_monomial(0, d - q.degree_y());
        }
        RationalFn::new(p, q).unwrap()
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == BiPoly::one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "({})/({})", self.p, self.q)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

impl FromStr for RationalFn {
    type Err = RfError;
    fn from_str(s: &str) -> Result<Self, RfError> {
        parse_rational_fn(s)
    }
}

/// Coordinate inversion applied before working at a point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChartFlip {
    #[default]
    None,
    X,
    Y,
    XY,
}

impl FromStr for ChartFlip {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(ChartFlip::None),
            "x" => Ok(ChartFlip::X),
            "y" => Ok(ChartFlip::Y),
            "xy" => Ok(ChartFlip::XY),
            _ => Err(format!("unknown chart flip `{s}` (expected none|x|y|xy)")),
        }
    }
}

pub fn parse_rational_fn(text: &str) -> Result<RationalFn, RfError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let (num, den) = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    RationalFn::new(num, den)
}

/// One function per line; `#` starts a comment; blank lines are skipped.
pub fn parse_family(text: &str) -> Result<Vec<RationalFn>, RfError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let f = parse_rational_fn(body)
            .map_err(|e| RfError::Line { line: k + 1, source: Box::new(e) })?;
        out.push(f);
    }
    if out.is_empty() {
        return Err(RfError::EmptyFamily);
    }
    Ok(out)
}

type Frac = (BiPoly, BiPoly);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> RfError {
        RfError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Frac, RfError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { add(&acc, &rhs) } else { add(&acc, &neg(&rhs)) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, RfError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                (&acc.0 * &rhs.0, &acc.1 * &rhs.1)
            } else {
                if rhs.0.is_zero() {
                    return Err(RfError::DivisionByZeroPoly);
                }
                (&acc.0 * &rhs.1, &acc.1 * &rhs.0)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Frac, RfError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(neg(&self.unary()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac, RfError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.integer().ok_or_else(|| self.error("expected nonnegative integer exponent"))?;
            let k: u32 = k.try_into().map_err(|_| RfError::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok((base.0.pow(k), base.1.pow(k)));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Frac, RfError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok((BiPoly::x(), BiPoly::one()))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok((BiPoly::y(), BiPoly::one()))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().unwrap();
                Ok((BiPoly::constant(Rat::from_integer(n)), BiPoly::one()))
            }
            Some(_) => Err(self.error("expected a number, `x`, `y` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn neg(a: &Frac) -> Frac {
    (-&a.0, a.1.clone())
}

fn add(a: &Frac, b: &Frac) -> Frac {
    if a.1 == b.1 {
        return (&a.0 + &b.0, a.1.clone());
    }
    if a.1.is_constant() && b.1.is_constant() {
        let s = a.1.constant_term() / b.1.constant_term();
        return (&a.0 + &b.0.scale(&s), a.1.clone());
    }
    (&(&a.0 * &b.1) + &(&b.0 * &a.1), &a.1 * &b.1)
}

/// A real common zero of numerator and denominator. Rational coordinates
/// are exact balls; irrational ones are certified isolating balls.
#[derive(Debug, Clone, PartialEq)]
pub struct IndeterminacyPoint {
    pub x: BigFloat,
    pub y: BigFloat,
}

impl IndeterminacyPoint {
    pub fn exact(&self) -> Option<(Rat, Rat)> {
        Some((self.x.exact_value()?.clone(), self.y.exact_value()?.clone()))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndeterminacySet {
    pub points: Vec<IndeterminacyPoint>,
    /// The torus point `(∞, ∞)` is always treated as singular.
    pub point_at_infinity: bool,
}

/// All real points where both `p` and `q` vanish, sorted by `x` then `y`.
pub fn indeterminacy_points(f: &RationalFn, precision_bits: u32) -> Result<IndeterminacySet, RfError> {
    if f.is_constant() {
        return Err(RfError::ConstantFunction(f.to_string()));
    }
    let mut points = Vec::new();
    let (p, q) = (&f.p, &f.q);
    if !p.is_constant() && !q.is_constant() && (p.degree_y() > 0 || q.degree_y() > 0) {
        let rx = resultant_y(p, q).expect("positive y-degree");
        if !rx.is_zero() {
            let mut y_cands: Option<Vec<BigFloat>> = None;
            for root in isolate_real_roots(&rx, precision_bits) {
                match &root.exact {
                    Some(x0) => {
                        let g = UniPoly::gcd(&p.restrict_x(x0), &q.restrict_x(x0));
                        if g.is_zero() || g.is_constant() {
                            continue;
                        }
                        for yr in isolate_real_roots(&g, precision_bits) {
                            points.push(IndeterminacyPoint {
                                x: BigFloat::exact(x0.clone(), precision_bits),
                                y: yr.value,
                            });
                        }
                    }
                    None => {
                        let ys = y_cands.get_or_insert_with(|| {
                            let ry = resultant_x(p, q).expect("coprime");
                            isolate_real_roots(&ry, precision_bits).into_iter().map(|r| r.value).collect()
                        });
                        for y0 in ys.iter() {
                            if ball_vanishes(p, &root.value, y0) && ball_vanishes(q, &root.value, y0) {
                                points.push(IndeterminacyPoint { x: root.value.clone(), y: y0.clone() });
                            }
                        }
                    }
                }
            }
        }
    }
    points.sort_by(|a, b| a.x.mid().cmp(b.x.mid()).then(a.y.mid().cmp(b.y.mid())));
    Ok(IndeterminacySet { points, point_at_infinity: true })
}

pub(crate) fn eval_ball(p: &BiPoly, x: &BigFloat, y: &BigFloat) -> BigFloat {
    let prec = x.precision_bits();
    let mut acc = BigFloat::zero(prec);
    for (&(i, j), c) in p.terms() {
        let t = &(&x.pow(i) * &y.pow(j)) * &BigFloat::exact(c.clone(), prec);
        acc = &acc + &t;
    }
    acc
}

fn ball_vanishes(p: &BiPoly, x: &BigFloat, y: &BigFloat) -> bool {
    eval_ball(p, x, y).is_possibly_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn parse(s: &str) -> RationalFn {
        parse_rational_fn(s).unwrap()
    }

    #[test]
    fn already_canonical() {
        let f = parse("x/y");
        assert_eq!(f.numerator(), &BiPoly::x());
        assert_eq!(f.denominator(), &BiPoly::y());
        let g = parse("(x*y)/(x^2+y^2)");
        assert_eq!(g.numerator(), &BiPoly::from_int_terms(&[(1, 1, 1)]));
        assert_eq!(g.denominator(), &BiPoly::from_int_terms(&[(1, 2, 0), (1, 0, 2)]));
    }

    #[test]
    fn cancels_common_factor() {
        let f = parse("(x^2-y^2)/(x-y)");
        assert_eq!(f.numerator(), &BiPoly::from_int_terms(&[(1, 1, 0), (1, 0, 1)]));
        assert_eq!(f.denominator(), &BiPoly::one());
        for (a, b) in [(1, 2), (-3, 5), (7, -1), (2, 9), (-4, -6)] {
            let (x, y) = (int(a), int(b));
            let direct = (&x * &x - &y * &y) / (&x - &y);
            assert_eq!(f.eval(&x, &y), Some(ProjValue::Exact(direct)));
        }
    }

    #[test]
    fn canonical_sign_and_scale() {
        let f = parse("x/(-2*y)");
        assert_eq!(f.denominator(), &BiPoly::y());
        assert_eq!(f.numerator(), &BiPoly::x().scale(&rat(-1, 2)));
        assert_eq!(parse("(2*x)/(4*y)"), parse("x/(2*y)"));
        assert_eq!(parse("1/2*x"), parse("x/2"));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_rational_fn("x+*y").unwrap_err(),
            RfError::Syntax { offset: 2, message: "expected a number, `x`, `y` or `(`".into() }
        );
        assert!(matches!(parse_rational_fn("2x"), Err(RfError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_rational_fn("(x"), Err(RfError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_rational_fn("x^y"), Err(RfError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_rational_fn(""), Err(RfError::Syntax { offset: 0, .. })));
        assert_eq!(parse_rational_fn("x/(y-y)").unwrap_err(), RfError::DivisionByZeroPoly);
    }

    #[test]
    fn display_round_trips() {
        for s in ["x/y", "(x*y)/(x^2+y^2)", "-x/3 + y^2/5", "(x-1)/(y+2)", "x^3 - 7/2*y", "0", "(x^2+y^2-1)/(x-y)"] {
            let f = parse(s);
            assert_eq!(parse(&f.to_string()), f, "{s} -> {f}");
        }
    }

    #[test]
    fn family_files() {
        let fam = parse_family("# header\n\nx/y   # first\n  (x-1)/y\n").unwrap();
        assert_eq!(fam.len(), 2);
        assert!(matches!(
            parse_family("x\nx+*y\n"),
            Err(RfError::Line { line: 2, .. })
        ));
        assert_eq!(parse_family("# nothing\n"), Err(RfError::EmptyFamily));
    }

    #[test]
    fn indeterminacy_examples() {
        let s = indeterminacy_points(&parse("x/y"), 128).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].exact(), Some((int(0), int(0))));
        assert!(s.point_at_infinity);

        let s = indeterminacy_points(&parse("(x-1)/y"), 128).unwrap();
        assert_eq!(s.points[0].exact(), Some((int(1), int(0))));

        let s = indeterminacy_points(&parse("(x^2+y^2-1)/(x-y)"), 256).unwrap();
        assert_eq!(s.points.len(), 2);
        let h = 0.5f64.sqrt();
        for (pt, sign) in s.points.iter().zip([-1.0, 1.0]) {
            assert!(pt.exact().is_none());
            let (x, y) = pt.to_f64();
            assert!((x - sign * h).abs() < 1e-15 && (y - sign * h).abs() < 1e-15);
            assert!(pt.x.err_f64() < 1e-30);
        }

        assert!(indeterminacy_points(&parse("x^2 + y"), 64).unwrap().points.is_empty());
        assert!(indeterminacy_points(&parse("x/(x-1)"), 64).unwrap().points.is_empty());
        assert!(matches!(indeterminacy_points(&parse("(2*x)/(4*x)"), 64), Err(RfError::ConstantFunction(_))));
    }

    #[test]
    fn vertical_asymptote_is_not_indeterminate() {
        // (x y - 1)/(x y - 2): the resultant has no roots; x(y) lines are asymptotic.
        let s = indeterminacy_points(&parse("(x*y-1)/(x^2*y-2)"), 128).unwrap();
        for pt in &s.points {
            let (x, y) = pt.to_f64();
            assert!((x * y - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chart_flips() {
        let f = parse("x/y");
        assert_eq!(f.flip(ChartFlip::X), parse("1/(x*y)"));
        assert_eq!(f.flip(ChartFlip::Y), parse("x*y"));
        assert_eq!(f.flip(ChartFlip::XY), parse("y/x"));
        let g = parse("(x^2+1)/(y-3)");
        assert_eq!(g.flip(ChartFlip::X).flip(ChartFlip::X), g);
        assert_eq!("xy".parse::<ChartFlip>(), Ok(ChartFlip::XY));
    }
}
