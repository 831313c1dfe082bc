use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat_to_f64, AlgebraError, Rat, UniPoly};

/// Sparse polynomial in `x`, `y` over ℚ. Terms are keyed by `(i, j)` for
/// `x^i y^j`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

/// Graded-lex sort key: total degree first, then the x exponent.
fn grlex(k: &(u32, u32)) -> (u32, u32) {
    (k.0 + k.1, k.0)
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rat)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, &c);
        }
        p
    }

    /// Build from integer terms `(coeff, i, j)`.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, i, j)| (i, j, Rat::from_integer(BigInt::from(c)))))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<((u32, u32), &Rat)> {
        self.terms.iter().max_by_key(|(k, _)| grlex(k)).map(|(k, c)| (*k, c))
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<((u32, u32), Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|a, b| grlex(&b.0).cmp(&grlex(&a.0)));
        v
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.to_y_coeffs()
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * y + c.eval(x))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| rat_to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(&(i, j), c)| (i - 1, j, c * Rat::from_integer(BigInt::from(i)))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(&(i, j), c)| (i, j - 1, c * Rat::from_integer(BigInt::from(j)))),
        )
    }

    pub fn swap_xy(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// `p(x + a, y + b)`
    pub fn translate(&self, a: &Rat, b: &Rat) -> Self {
        let xa = BiPoly::from_terms([(1, 0, Rat::one()), (0, 0, a.clone())]);
        let yb = BiPoly::from_terms([(0, 1, Rat::one()), (0, 0, b.clone())]);
        self.substitute(&xa, &yb)
    }

    /// `p(X, Y)` for polynomials `X`, `Y`.
    pub fn substitute(&self, x_sub: &BiPoly, y_sub: &BiPoly) -> Self {
        let dx = self.degree_x() as usize;
        let dy = self.degree_y() as usize;
        let mut xp = vec![BiPoly::one()];
        for k in 1..=dx {
            let n = &xp[k - 1] * x_sub;
            xp.push(n);
        }
        let mut yp = vec![BiPoly::one()];
        for k in 1..=dy {
            let n = &yp[k - 1] * y_sub;
            yp.push(n);
        }
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let t = (&xp[i as usize] * &yp[j as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    /// `x^deg_x · p(1/x, y)`
    pub fn reverse_x(&self) -> Self {
        let d = self.degree_x();
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((d - i, j), c.clone())).collect() }
    }

    /// `y^deg_y · p(x, 1/y)`
    pub fn reverse_y(&self) -> Self {
        let d = self.degree_y();
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i, d - j), c.clone())).collect() }
    }

    /// Multiply by `x^a y^b`.
    pub fn shift_monomial(&self, a: u32, b: u32) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i + a, j + b), c.clone())).collect() }
    }

    /// Largest `(a, b)` with `x^a y^b` dividing `p`.
    pub fn monomial_content(&self) -> (u32, u32) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    /// Divide by `x^a y^b`; panics unless divisible.
    pub fn unshift_monomial(&self, a: u32, b: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i.checked_sub(a).unwrap(), j.checked_sub(b).unwrap()), c.clone()))
                .collect(),
        }
    }

    /// Coefficients as a polynomial in `y` over ℚ[x], lowest `y` degree first.
    pub fn to_y_coeffs(&self) -> Vec<UniPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let dy = self.degree_y() as usize;
        let mut cols: Vec<Vec<Rat>> = vec![Vec::new(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, Rat::zero());
            }
            col[i as usize] = c.clone();
        }
        cols.into_iter().map(UniPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UniPoly]) -> Self {
        let mut p = BiPoly::zero();
        for (j, c) in cs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, a);
            }
        }
        p
    }

    /// `p(x0, y)` as a polynomial in `y`.
    pub fn restrict_x(&self, x0: &Rat) -> UniPoly {
        UniPoly::new(self.to_y_coeffs().iter().map(|c| c.eval(x0)).collect())
    }

    /// `p(x, y0)` as a polynomial in `x`.
    pub fn restrict_y(&self, y0: &Rat) -> UniPoly {
        self.swap_xy().restrict_x(y0)
    }

    /// `p(x, 0)` as a polynomial in `x`.
    pub fn x_axis_poly(&self) -> UniPoly {
        self.restrict_y(&Rat::zero())
    }

    /// Lift a univariate polynomial in `x`.
    pub fn from_uni_x(u: &UniPoly) -> Self {
        Self::from_terms(u.coeffs().iter().enumerate().map(|(i, c)| (i as u32, 0, c.clone())))
    }

    /// Lift a univariate polynomial in `y`.
    pub fn from_uni_y(u: &UniPoly) -> Self {
        Self::from_uni_x(u).swap_xy()
    }

    /// Canonical associate: coprime integer coefficients with positive
    /// graded-lex leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut s = Rat::new(den, g);
        if self.leading_coeff().unwrap().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// True when `self = c · other` for a nonzero rational `c`.
    pub fn is_associate(&self, other: &BiPoly) -> bool {
        self.normalized() == other.normalized()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        let dc = d.to_y_coeffs();
        let dy = dc.len() - 1;
        let lc = &dc[dy];
        let mut r = self.to_y_coeffs();
        if r.len() < dc.len() {
            // d must be y-free
            if dy != 0 {
                return None;
            }
        }
        let mut q = vec![UniPoly::zero(); r.len().saturating_sub(dy)];
        for k in (0..q.len()).rev() {
            let top = r[k + dy].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.div_exact(lc)?;
            for (i, dci) in dc.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * dci);
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(BiPoly::from_y_coeffs(&q))
    }

    /// Content with respect to `y`: monic gcd of the ℚ[x] coefficients.
    pub fn content_y(&self) -> UniPoly {
        self.to_y_coeffs()
            .iter()
            .fold(UniPoly::zero(), |g, c| UniPoly::gcd(&g, c))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl fmt::Display for BiPoly {
    /// Parseable form, descending graded-lex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || (i == 0 && j == 0) {
                parts.push(a.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("y".into()),
                _ => parts.push(format!("y^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, &-c);
        }
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, &(a * b));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

// ---------------------------------------------------------------------------
// Polynomials in y over ℚ[x]: gcd by primitive pseudo-remainder sequence.

type YPoly = Vec<UniPoly>;

fn ytrim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn ypoly_content(p: &YPoly) -> UniPoly {
    p.iter().fold(UniPoly::zero(), |g, c| UniPoly::gcd(&g, c))
}

fn ypoly_primitive(p: &YPoly) -> YPoly {
    let c = ypoly_content(p);
    if c.is_zero() {
        return p.clone();
    }
    p.iter().map(|a| a.div_exact(&c).expect("content divides")).collect()
}

/// Pseudo-remainder of `a` by `b` in ℚ[x][y].
fn ypoly_prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        // r = lb * r - lr * y^shift * b
        let mut next: YPoly = r.iter().map(|c| c * lb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&lr * bc);
        }
        r = ytrim(next);
    }
    r
}

/// Gcd of two bivariate polynomials, normalized (integer-primitive with
/// positive graded-lex leading coefficient). Requires not both zero.
pub fn poly_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    assert!(!(a.is_zero() && b.is_zero()), "gcd(0, 0) is undefined");
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let ya = a.to_y_coeffs();
    let yb = b.to_y_coeffs();
    let ca = ypoly_content(&ya);
    let cb = ypoly_content(&yb);
    let cont = UniPoly::gcd(&ca, &cb);
    let mut p = ypoly_primitive(&ya);
    let mut q = ypoly_primitive(&yb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    let g: YPoly = if q.len() <= 1 {
        vec![UniPoly::one()]
    } else {
        loop {
            let r = ypoly_prem(&p, &q);
            if r.is_empty() {
                break ypoly_primitive(&q);
            }
            if r.len() == 1 {
                break vec![UniPoly::one()];
            }
            p = q;
            q = ypoly_primitive(&r);
        }
    };
    let g: YPoly = g.iter().map(|c| c * &cont).collect();
    BiPoly::from_y_coeffs(&g).normalized()
}

/// Squarefree part `p / gcd(p, p_x, p_y)`, normalized.
pub fn squarefree_part(p: &BiPoly) -> BiPoly {
    if p.is_zero() || p.is_constant() {
        return p.normalized();
    }
    let mut g = poly_gcd(p, &p.partial_x());
    g = poly_gcd(&g, &p.partial_y());
    p.div_exact(&g).expect("gcd divides").normalized()
}

fn det_rational(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Sylvester determinant of two univariate coefficient lists (lowest first),
/// laid out with leading coefficients in the first column.
fn sylvester_det(a: &[Rat], b: &[Rat]) -> Rat {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut rows = Vec::with_capacity(size);
    for k in 0..n {
        let mut row = vec![Rat::zero(); size];
        for (i, c) in a.iter().rev().enumerate() {
            row[k + i] = c.clone();
        }
        rows.push(row);
    }
    for k in 0..m {
        let mut row = vec![Rat::zero(); size];
        for (i, c) in b.iter().rev().enumerate() {
            row[k + i] = c.clone();
        }
        rows.push(row);
    }
    det_rational(rows)
}

/// Newton interpolation through `(xs[k], ys[k])`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> UniPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UniPoly::new(vec![-xs[i].clone(), Rat::one()]);
        poly = &(&poly * &lin) + &UniPoly::constant(dd[i].clone());
    }
    poly
}

/// Sylvester resultant eliminating `y`, as a polynomial in `x`.
///
/// Convention: `res(a, b) = lc(a)^deg(b) · Π b(α)` over the roots `α` of `a`.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> Result<UniPoly, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::DegenerateInput("resultant of a zero polynomial"));
    }
    let (m, n) = (a.degree_y(), b.degree_y());
    if m == 0 && n == 0 {
        return Err(AlgebraError::DegenerateInput("both polynomials are free of y"));
    }
    let ya = a.to_y_coeffs();
    let yb = b.to_y_coeffs();
    // Degree bound of the resultant in x.
    let bound = (a.degree_x() * n + b.degree_x() * m) as usize;
    let mut xs = Vec::with_capacity(bound + 1);
    let mut vals = Vec::with_capacity(bound + 1);
    let mut t: i64 = 0;
    while xs.len() < bound + 1 {
        let x0 = Rat::from_integer(BigInt::from(t));
        t = if t <= 0 { 1 - t } else { -t };
        // Skip points where a leading coefficient vanishes (degree drop).
        if ya[m as usize].eval(&x0).is_zero() || yb[n as usize].eval(&x0).is_zero() {
            continue;
        }
        let ea: Vec<Rat> = ya.iter().map(|c| c.eval(&x0)).collect();
        let eb: Vec<Rat> = yb.iter().map(|c| c.eval(&x0)).collect();
        vals.push(sylvester_det(&ea, &eb));
        xs.push(x0);
    }
    Ok(interpolate(&xs, &vals))
}

/// Resultant eliminating `x`, as a polynomial in `y`.
pub fn resultant_x(a: &BiPoly, b: &BiPoly) -> Result<UniPoly, AlgebraError> {
    resultant_y(&a.swap_xy(), &b.swap_xy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn p(terms: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(terms)
    }

    #[test]
    fn gcd_monomial_factor() {
        let g = poly_gcd(&p(&[(1, 1, 1)]), &p(&[(1, 2, 0)]));
        assert_eq!(g, BiPoly::x());
    }

    #[test]
    fn gcd_cusp_and_line_is_one() {
        // y^2 - x^3 and y - x meet in finitely many points
        let g = poly_gcd(&p(&[(1, 0, 2), (-1, 3, 0)]), &p(&[(1, 0, 1), (-1, 1, 0)]));
        assert_eq!(g, BiPoly::one());
    }

    #[test]
    fn gcd_idempotent_up_to_normalization() {
        let a = p(&[(6, 2, 1), (-4, 0, 3), (2, 1, 0)]);
        assert_eq!(poly_gcd(&a, &a), a.normalized());
        assert_eq!(a.normalized(), p(&[(3, 2, 1), (-2, 0, 3), (1, 1, 0)]));
    }

    #[test]
    fn gcd_common_factor_in_both_variables() {
        let g = p(&[(1, 1, 0), (-1, 0, 1), (1, 0, 0)]); // x - y + 1
        let a = &g * &p(&[(1, 2, 0), (1, 0, 1)]);
        let b = &g * &p(&[(1, 0, 2), (-3, 1, 0)]);
        assert_eq!(poly_gcd(&a, &b), g.normalized());
    }

    #[test]
    fn resultant_examples() {
        let r = resultant_y(&p(&[(1, 0, 2), (-1, 3, 0)]), &p(&[(1, 0, 1), (-1, 1, 0)])).unwrap();
        assert_eq!(r, UniPoly::from_ints(&[0, 0, 1, -1]));
        let r = resultant_y(&BiPoly::y(), &BiPoly::y()).unwrap();
        assert!(r.is_zero());
        let r = resultant_y(&p(&[(1, 0, 1), (-1, 0, 0)]), &p(&[(1, 0, 1), (1, 0, 0)])).unwrap();
        assert_eq!(r, UniPoly::constant(int(2)));
        assert!(resultant_y(&BiPoly::x(), &BiPoly::one()).is_err());
    }

    #[test]
    fn resultant_matches_evaluation_for_monic_linear() {
        // res_y(a, y - x) = a(x, x) for monic linear second argument, up to
        // the sign (-1)^(deg a) from argument order.
        let a = p(&[(3, 2, 1), (-1, 0, 3), (5, 1, 0), (-2, 0, 0)]);
        let line = p(&[(1, 0, 1), (-1, 1, 0)]);
        let r = resultant_y(&line, &a).unwrap();
        let direct = a.substitute(&BiPoly::x(), &BiPoly::x()).x_axis_poly();
        assert_eq!(r, direct);
    }

    #[test]
    fn translate_and_div_exact() {
        let a = p(&[(1, 2, 0), (-1, 0, 2)]);
        let t = a.translate(&rat(1, 2), &int(-3));
        assert_eq!(t.eval(&int(0), &int(0)), a.eval(&rat(1, 2), &int(-3)));
        let q = a.div_exact(&p(&[(1, 1, 0), (-1, 0, 1)])).unwrap();
        assert_eq!(q, p(&[(1, 1, 0), (1, 0, 1)]));
        assert!(a.div_exact(&p(&[(1, 1, 0), (-2, 0, 1)])).is_none());
    }

    #[test]
    fn squarefree_part_removes_repeats() {
        let f = p(&[(1, 0, 1), (-1, 2, 0)]);
        let g = &(&f * &f) * &BiPoly::x();
        assert_eq!(squarefree_part(&g), (&f * &BiPoly::x()).normalized());
    }

    #[test]
    fn display_is_graded_lex() {
        let a = p(&[(1, 0, 0), (-2, 1, 1), (1, 2, 0), (3, 0, 2)]);
        assert_eq!(a.to_string(), "x^2 - 2*x*y + 3*y^2 + 1");
        assert_eq!(BiPoly::from_terms([(1, 0, rat(-1, 2))]).to_string(), "-1/2*x");
    }
}
