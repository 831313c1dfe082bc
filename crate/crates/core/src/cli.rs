//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{decimal_string, rat_to_f64, BiPoly, Rat};
use crate::degree::{
    additivity_check, class_probes, default_outer_radius, mobius_center, mobius_check, obstruction_report,
    winding_degree, z2_degree, CircleChart, DegreeError, Parity, SampledCircleMap,
};
use crate::graphoid::{
    fiber_at, fiber_radius, fiber_with, level_curves, sample_boundary_map, Family, Fiber, FiberOptions,
    GraphoidError, LEVEL_NAMES,
};
use crate::limits::{conjugate_limits_equal, limit_along, LimitError};
use crate::parser::{parse_family, parse_rational_fn, ChartFlip, IndeterminacyPoint, RationalFn, RfError};
use crate::projective::ProjValue;
use crate::puiseux::{expand_branches, BranchSet, PuiseuxError};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "graphoid", version, about = "Singularities of finite families of bivariate rational functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Puiseux branches of the level curves through a point
    Branches(Common),
    /// Limits of every member along those branches
    Limit(Common),
    /// The graphoid fiber at a point, or at every singular point
    Fiber(Common),
    /// Degree and parity of the boundary map around a point
    Degree(Common),
    /// Outer parity against the XOR of parities around singular points
    Additivity(Common),
    /// Radial degree against the parities around singular points
    Obstruction(Common),
    /// Antipodal double-cover check for (x - a)/(y - b)
    Mobius(Common),
    /// Run the property battery over the family
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Family file: one rational function per line
    input: Option<PathBuf>,
    /// Point as `a,b` with rational coordinates
    #[arg(long, value_parser = parse_point)]
    point: Option<(Rat, Rat)>,
    /// Half side of the boundary square
    #[arg(long, value_parser = parse_rat)]
    radius: Option<Rat>,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(64..))]
    samples: u32,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    #[arg(long, default_value_t = 1e-6, value_parser = parse_tol)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value = "none", value_parser = ChartFlip::from_str)]
    chart_flip: ChartFlip,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// A polynomial curve used instead of the family's level curves
    #[arg(long)]
    curve: Option<String>,
    /// Circle chart: a member index or `sum`
    #[arg(long, default_value = "0", value_parser = parse_chart)]
    chart: CircleChart,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Reads `3`, `-1/2` or `0.125`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: `{s}`");
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let r = Rat::new(n, BigInt::from(10u32).pow(frac.len() as u32));
        return Ok(if neg { -r } else { r });
    }
    Rat::from_str(s).map_err(|_| bad())
}

fn parse_point(s: &str) -> Result<(Rat, Rat), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be positive, got `{s}`")),
    }
}

fn parse_chart(s: &str) -> Result<CircleChart, String> {
    if s == "sum" {
        return Ok(CircleChart::TurnSum);
    }
    s.parse().map(CircleChart::Coordinate).map_err(|_| format!("chart must be a member index or `sum`, got `{s}`"))
}

/// Failure of a command: exit 1 for bad input, 2 when a computation or
/// law fails.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn verification(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

impl From<RfError> for Failure {
    fn from(e: RfError) -> Self {
        input(e)
    }
}

impl From<GraphoidError> for Failure {
    fn from(e: GraphoidError) -> Self {
        match e {
            GraphoidError::RadiusNotSmall { .. }
            | GraphoidError::SingularOnBoundary(..)
            | GraphoidError::TooFewSamples(_)
            | GraphoidError::EmptyFamily
            | GraphoidError::Parse(_) => input(e),
            _ => verification(e),
        }
    }
}

impl From<DegreeError> for Failure {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::Graphoid(g) => g.into(),
            DegreeError::GeometryViolation(_) | DegreeError::WrongShape(_) => input(e),
            _ => verification(e),
        }
    }
}

impl From<PuiseuxError> for Failure {
    fn from(e: PuiseuxError) -> Self {
        match e {
            PuiseuxError::TruncationInsufficient(_) => verification(e),
            _ => input(e),
        }
    }
}

impl From<LimitError> for Failure {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::Puiseux(p) => p.into(),
            _ => verification(e),
        }
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`; diagnostics go to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (report, failed) = match dispatch(cli.command) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let _ = out.write_all(report.as_bytes());
    if failed {
        2
    } else {
        0
    }
}

/// The rendered report and whether a checked law failed.
type Outcome = Result<(String, bool), Failure>;

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Branches(c) => branches(&c),
        Command::Limit(c) => limit(&c),
        Command::Fiber(c) => fiber_cmd(&c),
        Command::Degree(c) => degree_cmd(&c),
        Command::Additivity(c) => additivity(&c),
        Command::Obstruction(c) => obstruction(&c),
        Command::Mobius(c) => mobius(&c),
        Command::Verify(c) => verify(&c),
    }
}

fn render(command: &str, body: Value) -> String {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
    s.push('\n');
    s
}

fn members(c: &Common) -> Result<Vec<RationalFn>, Failure> {
    let path = c.input.as_ref().ok_or_else(|| input("missing family file"))?;
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(parse_family(&text)?.into_iter().map(|f| f.flip(c.chart_flip)).collect())
}

fn family(c: &Common) -> Result<Family, Failure> {
    Ok(Family::new(members(c)?, c.precision_bits)?)
}

fn fiber_options(c: &Common) -> FiberOptions {
    FiberOptions { order: c.order, precision_bits: c.precision_bits, base_samples: c.samples as usize }
}

fn check_chart(c: &Common, fam: &Family) -> Result<(), Failure> {
    match c.chart {
        CircleChart::Coordinate(i) if i >= fam.len() => {
            Err(input(format!("chart index {i} out of range for {} members", fam.len())))
        }
        _ => Ok(()),
    }
}

fn rat_json(r: &Rat) -> Value {
    json!(r.to_string())
}

fn point_json(p: &(Rat, Rat)) -> Value {
    json!([rat_json(&p.0), rat_json(&p.1)])
}

fn singular_json(p: &IndeterminacyPoint) -> Value {
    match p.exact() {
        Some(z) => point_json(&z),
        None => json!([decimal_string(p.x.mid(), 20), decimal_string(p.y.mid(), 20)]),
    }
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

fn tuple_json(t: &[f64]) -> Value {
    Value::Array(t.iter().map(|&v| num(v)).collect())
}

fn proj_json(v: &ProjValue) -> Value {
    match v {
        ProjValue::Exact(r) => json!({ "value": rat_to_f64(r), "exact": r.to_string() }),
        ProjValue::Infinity => json!({ "value": "inf", "exact": "inf" }),
        _ => json!({ "value": v.to_f64() }),
    }
}

/// Curves to expand at `z`: the `--curve` polynomial, or every level curve
/// of every member that passes through `z`, labelled.
fn curves_at(c: &Common, fs: &[RationalFn], z: &(Rat, Rat)) -> Result<Vec<(Value, BiPoly)>, Failure> {
    if let Some(text) = &c.curve {
        let f = parse_rational_fn(text)?;
        if !f.denominator().is_constant() {
            return Err(input(format!("curve `{text}` is not a polynomial")));
        }
        return Ok(vec![(json!({ "curve": f.numerator().to_string() }), f.numerator().clone())]);
    }
    let mut out = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        for (level, curve) in LEVEL_NAMES.iter().zip(level_curves(f)) {
            if curve.is_constant() || !curve.eval(&z.0, &z.1).is_zero() {
                continue;
            }
            out.push((json!({ "member": i, "level": level, "curve": curve.to_string() }), curve));
        }
    }
    Ok(out)
}

fn required_point(c: &Common) -> Result<(Rat, Rat), Failure> {
    c.point.clone().ok_or_else(|| input("--point is required"))
}

fn branch_set_json(set: &BranchSet) -> Value {
    let branches: Vec<Value> = set
        .branches
        .iter()
        .map(|b| {
            let coeffs: Vec<Value> = b
                .psi
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !(c.is_exact() && c.mid().is_zero()))
                .map(|(k, c)| json!([k, decimal_string(c.mid(), 20), c.err_f64()]))
                .collect();
            json!({
                "id": b.id,
                "direction": format!("{:?}", b.direction),
                "m": b.m,
                "radius": rat_json(&b.radius),
                "conj_id": b.conj_id,
                "terminating": b.terminating,
                "coefficients": coeffs,
            })
        })
        .collect();
    json!({ "radius": rat_json(&set.radius), "order": set.order, "branches": branches })
}

fn branches(c: &Common) -> Outcome {
    let z = required_point(c)?;
    let fs = if c.curve.is_some() { Vec::new() } else { members(c)? };
    let mut sets = Vec::new();
    for (label, curve) in curves_at(c, &fs, &z)? {
        let set = expand_branches(&curve, &z, c.order, c.precision_bits)?;
        let mut v = branch_set_json(&set);
        v.as_object_mut().unwrap().insert("source".into(), label);
        sets.push(v);
    }
    Ok((render("branches", json!({ "point": point_json(&z), "branch_sets": sets })), false))
}

fn limit(c: &Common) -> Outcome {
    let z = required_point(c)?;
    let fs = members(c)?;
    let mut rows = Vec::new();
    for (label, curve) in curves_at(c, &fs, &z)? {
        let set = expand_branches(&curve, &z, c.order, c.precision_bits)?;
        for b in &set.branches {
            for (i, f) in fs.iter().enumerate() {
                let l = limit_along(f, b)?;
                let mut v = proj_json(&l.value);
                let m = v.as_object_mut().unwrap();
                m.insert("function".into(), json!(i));
                m.insert("expression".into(), json!(f.to_string()));
                m.insert("source".into(), label.clone());
                m.insert("branch_id".into(), json!(b.id));
                m.insert("conj_id".into(), json!(b.conj_id));
                m.insert("direction".into(), json!(format!("{:?}", b.direction)));
                m.insert("leading_exponent".into(), l.leading_exponent.as_ref().map_or(Value::Null, rat_json));
                m.insert("certified".into(), json!(l.certified));
                rows.push(v);
            }
        }
    }
    Ok((render("limit", json!({ "point": point_json(&z), "limits": rows })), false))
}

fn fiber_json(point: Value, fib: &Fiber) -> Value {
    let anchors: Vec<Value> = fib
        .anchors
        .iter()
        .map(|a| {
            json!({
                "member": a.member,
                "level": a.level,
                "branch_id": a.branch_id,
                "conj_id": a.conj_id,
                "direction": format!("{:?}", a.direction),
                "values": tuple_json(&a.to_f64()),
            })
        })
        .collect();
    let arcs: Vec<Value> = fib.arcs.iter().map(|a| Value::Array(a.samples.iter().map(|t| tuple_json(t)).collect())).collect();
    json!({
        "point": point,
        "singular": fib.singular,
        "radius": fib.radius,
        "samples": fib.samples,
        "residual": fib.residual,
        "anchor_residual": fib.anchor_residual,
        "points": fib.points.iter().map(|t| tuple_json(t)).collect::<Vec<_>>(),
        "arcs": arcs,
        "anchors": anchors,
    })
}

fn csv_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".into()
    }
}

fn fiber_cmd(c: &Common) -> Outcome {
    let fam = family(c)?;
    let opts = fiber_options(c);
    let targets: Vec<(Value, (Rat, Rat), Fiber)> = match &c.point {
        Some(z) => vec![(point_json(z), z.clone(), fiber_with(&fam, z, c.tol, &opts)?)],
        None => {
            let mut v = Vec::new();
            for p in fam.singular_points() {
                let z = p.exact().unwrap_or_else(|| (p.x.mid().clone(), p.y.mid().clone()));
                v.push((singular_json(p), z, fiber_at(&fam, p, c.tol, &opts)?));
            }
            v
        }
    };
    if c.format == Format::Csv {
        let [(_, z, fib)] = &targets[..] else {
            return Err(input("csv output needs a single point; pass --point"));
        };
        let mut s = String::from("theta");
        for i in 0..fam.len() {
            s.push_str(&format!(",f{i}"));
        }
        s.push('\n');
        if fib.singular {
            let r = crate::algebra::rat_from_f64(fib.radius).expect("finite radius");
            let samples = sample_boundary_map(&fam, z, &r, fib.samples)?;
            for (theta, vals) in samples.thetas().iter().zip(&samples.values) {
                s.push_str(&csv_cell(*theta));
                for v in vals {
                    s.push(',');
                    s.push_str(&csv_cell(*v));
                }
                s.push('\n');
            }
        }
        return Ok((s, false));
    }
    let fibers: Vec<Value> = targets.iter().map(|(p, _, f)| fiber_json(p.clone(), f)).collect();
    Ok((render("fiber", json!({ "tol": c.tol, "fibers": fibers })), false))
}

fn degree_cmd(c: &Common) -> Outcome {
    let fam = family(c)?;
    check_chart(c, &fam)?;
    let z = required_point(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let r = match &c.radius {
        Some(r) => r.clone(),
        None if fam.is_regular(&z.0, &z.1) => return Err(input("--radius is required at a regular point")),
        None => fiber_radius(&fam, &z),
    };
    let samples = sample_boundary_map(&fam, &z, &r, c.samples as usize)?;
    let m = SampledCircleMap::from_samples(&samples, &c.chart)?;
    let winding = winding_degree(&m)?;
    let parity = z2_degree(&m, None, &mut rng)?;
    let consistent = Parity::of(winding) == parity.parity;
    let mut probes = Vec::new();
    let mut probes_even = true;
    if let Some(p) = fam.singular_points().iter().find(|p| p.exact().as_ref() == Some(&z)) {
        for cp in class_probes(&fam, p, c.tol, c.samples as usize * 4, &mut rng)? {
            probes_even &= cp.report.z2_trivial;
            probes.push(serde_json::to_value(&cp).expect("serializable"));
        }
    }
    let ok = consistent && probes_even;
    let body = json!({
        "point": point_json(&z),
        "radius": rat_json(&r),
        "samples": m.len(),
        "chart": c.chart,
        "winding": winding,
        "parity": parity,
        "monotone_pieces": m.monotone_pieces().len(),
        "class_probes": probes,
        "verdict": verdict(ok),
    });
    Ok((render("degree", body), !ok))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn outer_radius(c: &Common, fam: &Family) -> Rat {
    c.radius.clone().unwrap_or_else(|| default_outer_radius(fam))
}

fn additivity(c: &Common) -> Outcome {
    let fam = family(c)?;
    check_chart(c, &fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let r = outer_radius(c, &fam);
    let rep = additivity_check(&fam, &r, &c.chart, c.samples as usize, &mut rng)?;
    let ok = rep.consistent;
    let mut body = serde_json::to_value(&rep).expect("serializable");
    let m = body.as_object_mut().unwrap();
    m.insert("square_radius".into(), rat_json(&r));
    m.insert("chart".into(), serde_json::to_value(&c.chart).unwrap());
    m.insert("verdict".into(), json!(verdict(ok)));
    Ok((render("additivity", body), !ok))
}

fn obstruction(c: &Common) -> Outcome {
    let fam = family(c)?;
    check_chart(c, &fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let r = outer_radius(c, &fam);
    let rep = obstruction_report(&fam, &r, &c.chart, c.samples as usize, &mut rng)?;
    let line = if !rep.applies {
        "no singular points: no obstruction applies".to_string()
    } else if rep.obstruction {
        format!(
            "obstruction: radial degree {} is {:?} but the singular circles add up to {:?}",
            rep.radial_winding, rep.radial_parity, rep.inner_xor
        )
        .to_lowercase()
    } else {
        "no obstruction: parities match".to_string()
    };
    let mut body = serde_json::to_value(&rep).expect("serializable");
    let m = body.as_object_mut().unwrap();
    m.insert("square_radius".into(), rat_json(&r));
    m.insert("verdict".into(), json!(line));
    Ok((render("obstruction", body), false))
}

fn mobius(c: &Common) -> Outcome {
    let fs = members(c)?;
    let r = c.radius.clone().unwrap_or_else(Rat::one);
    if !r.is_positive() {
        return Err(input("--radius must be positive"));
    }
    let mut reports = Vec::new();
    let mut ok = true;
    for f in &fs {
        let center = match &c.point {
            Some(p) => p.clone(),
            None => mobius_center(f)?,
        };
        let rep = mobius_check(f, &center, &r, c.samples as usize)?;
        ok &= rep.passed;
        let mut v = serde_json::to_value(&rep).expect("serializable");
        v.as_object_mut().unwrap().insert("function".into(), json!(f.to_string()));
        reports.push(v);
    }
    Ok((render("mobius", json!({ "reports": reports, "verdict": verdict(ok) })), !ok))
}

struct Law {
    name: &'static str,
    failures: Vec<String>,
    checked: usize,
}

impl Law {
    fn new(name: &'static str) -> Self {
        Law { name, failures: Vec::new(), checked: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn json(&self) -> Value {
        json!({
            "law": self.name,
            "status": verdict(self.failures.is_empty()),
            "checked": self.checked,
            "failures": self.failures,
        })
    }
}

/// Fiber tolerance used by `verify`; finer tolerances need more refinements
/// than members converging linearly allow.
const VERIFY_FIBER_TOL: f64 = 1e-3;

fn verify(c: &Common) -> Outcome {
    let fam = family(c)?;
    let fs = fam.members().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut branch_law = Law::new("branch_count_even");
    let mut conj_law = Law::new("conjugate_limits_equal");
    let mut fiber_law = Law::new("fiber_converges");
    let mut anchor_law = Law::new("anchors_on_fiber");
    let mut monotone_law = Law::new("boundary_monotone");
    let mut parity_law = Law::new("winding_mod_2_is_parity");
    let mut regular_law = Law::new("parity_independent_of_regular_value");
    let mut probe_law = Law::new("class_parity_even");
    let mut additivity_law = Law::new("additivity");
    let mut singleton_law = Law::new("regular_fiber_singleton");
    let opts = fiber_options(c);
    let ftol = c.tol.max(VERIFY_FIBER_TOL);

    for p in fam.singular_points() {
        let z = p.exact().unwrap_or_else(|| (p.x.mid().clone(), p.y.mid().clone()));
        let at = format!("({}, {})", p.x, p.y);
        if let Some(z) = p.exact() {
            for (label, curve) in curves_at(c, &fs, &z)? {
                let set = match expand_branches(&curve, &z, c.order, c.precision_bits) {
                    Ok(s) => s,
                    Err(e) => {
                        branch_law.check(false, || format!("{label} at {at}: {e}"));
                        continue;
                    }
                };
                let n = set.branches.len();
                let involution = set.branches.iter().all(|b| b.conj_id != b.id && set.branches[b.conj_id].conj_id == b.id);
                branch_law.check(n % 2 == 0 && involution, || format!("{label} at {at}: {n} branches"));
                for b in &set.branches {
                    if b.conj_id < b.id {
                        continue;
                    }
                    let conj = set.conjugate_of(b);
                    for (i, f) in fs.iter().enumerate() {
                        let ok = conjugate_limits_equal(f, b, conj);
                        conj_law.check(matches!(ok, Ok(true)), || {
                            format!("member {i} on {label} branch {} at {at}: {ok:?}", b.id)
                        });
                    }
                }
            }
        }
        match fiber_at(&fam, p, ftol, &opts) {
            Ok(fib) => {
                fiber_law.check(true, String::new);
                if !fib.anchors.is_empty() {
                    let res = fib.anchor_residual;
                    anchor_law.check(res <= 10.0 * ftol, || format!("{at}: anchor residual {res}"));
                }
            }
            Err(e) => fiber_law.check(false, || format!("{at}: {e}")),
        }
        let r = fiber_radius(&fam, &z);
        let samples = sample_boundary_map(&fam, &z, &r, 2 * c.samples as usize)?;
        let bad = samples.monotone_violations();
        monotone_law.check(bad.is_empty(), || format!("{at}: pieces {bad:?}"));
        for i in 0..fam.len() {
            let m = match SampledCircleMap::from_samples(&samples, &CircleChart::Coordinate(i)) {
                Ok(m) => m,
                Err(e) => {
                    parity_law.check(false, || format!("member {i} at {at}: {e}"));
                    continue;
                }
            };
            let w = winding_degree(&m);
            let first = z2_degree(&m, None, &mut rng);
            match (&w, &first) {
                (Ok(w), Ok(p)) => {
                    parity_law.check(Parity::of(*w) == p.parity, || format!("member {i} at {at}: winding {w}"));
                    let agree = (0..9).all(|_| z2_degree(&m, None, &mut rng).map(|q| q.parity) == Ok(p.parity));
                    regular_law.check(agree, || format!("member {i} at {at}"));
                }
                _ => parity_law.check(false, || format!("member {i} at {at}: {w:?} {first:?}")),
            }
        }
        match class_probes(&fam, p, c.tol, 4 * c.samples as usize, &mut rng) {
            Ok(cs) => {
                for cp in cs {
                    probe_law.check(cp.report.z2_trivial, || format!("{at}: class {:?}", cp.pieces));
                }
            }
            Err(e) => probe_law.check(false, || format!("{at}: {e}")),
        }
    }

    let big = default_outer_radius(&fam);
    for (i, chart) in (0..fam.len()).map(CircleChart::Coordinate).chain([CircleChart::TurnSum]).enumerate() {
        if i > 0 && chart == CircleChart::TurnSum && fam.len() == 1 {
            continue;
        }
        match additivity_check(&fam, &big, &chart, 4096, &mut rng) {
            Ok(rep) => additivity_law.check(rep.consistent, || format!("{chart:?}: outer {:?}", rep.outer.parity.parity)),
            Err(e) => additivity_law.check(false, || format!("{chart:?}: {e}")),
        }
    }

    for _ in 0..10 {
        let z = (
            Rat::new(rng.gen_range(-100i64..=100).into(), rng.gen_range(1i64..=17).into()),
            Rat::new(rng.gen_range(-100i64..=100).into(), rng.gen_range(1i64..=17).into()),
        );
        if !fam.is_regular(&z.0, &z.1) {
            continue;
        }
        let want = fam.eval_f64(rat_to_f64(&z.0), rat_to_f64(&z.1));
        let ok = match fiber_with(&fam, &z, c.tol, &opts) {
            Ok(f) => f.points.len() == 1 && f.arcs.is_empty() && crate::graphoid::tuple_dist(&f.points[0], &want) < 1e-9,
            Err(_) => false,
        };
        singleton_law.check(ok, || format!("({}, {})", z.0, z.1));
    }

    let laws = [
        branch_law,
        conj_law,
        fiber_law,
        anchor_law,
        monotone_law,
        parity_law,
        regular_law,
        probe_law,
        additivity_law,
        singleton_law,
    ];
    let ok = laws.iter().all(|l| l.failures.is_empty());
    let body = json!({
        "members": fs.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "singular_points": fam.singular_points().iter().map(singular_json).collect::<Vec<_>>(),
        "seed": c.seed,
        "laws": laws.iter().map(Law::json).collect::<Vec<_>>(),
        "verdict": verdict(ok),
    });
    Ok((render("verify", body), !ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rat("-2.5").unwrap(), rat(-5, 2));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rat("x").is_err());
        assert_eq!(parse_point("1/3, -2").unwrap(), (rat(1, 3), rat(-2, 1)));
    }

    #[test]
    fn charts() {
        assert_eq!(parse_chart("sum").unwrap(), CircleChart::TurnSum);
        assert_eq!(parse_chart("2").unwrap(), CircleChart::Coordinate(2));
        assert!(parse_chart("-1").is_err());
    }
}
