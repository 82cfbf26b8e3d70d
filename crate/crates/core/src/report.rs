//! Commands behind the `bvh` binary and their schema-versioned reports.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cochain::{Cochain, ExtensionCocycle, TupleIndexer};
use crate::cohomology::{
    check_budget, cohomology_space, required_work, set_work_budget, work_budget, HEAVY_WORK_BUDGET,
};
use crate::delta::{delta_from_extension, delta_matrix};
use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{parse_group_spec, Group};
use crate::hochschild::{sw_product, HHContext, HHSpace};
use crate::lie::{build_hh1_lie, construct_nonsoluble_witness, derived_series_analysis, verify_lie_axioms, NonSolubleWitness};
use crate::verify::{run_suite, Check};

pub const SCHEMA: &str = "bvh/1";
pub const MAX_DEGREE: usize = 5;
const DEFAULT_DEGREE: usize = 4;
/// cochain dimension above which a degree is only computed on request
const DEFAULT_COLUMN_LIMIT: u64 = 5_000;
const RANDOM_EXTENSIONS: usize = 5;
const PRODUCT_TABLE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Info,
    Cohomology,
    Delta,
    Hh1Lie,
    Hh,
    ExtensionDelta,
    Verify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Info,
        Command::Cohomology,
        Command::Delta,
        Command::Hh1Lie,
        Command::Hh,
        Command::ExtensionDelta,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::Cohomology => "cohomology",
            Command::Delta => "delta",
            Command::Hh1Lie => "hh1-lie",
            Command::Hh => "hh",
            Command::ExtensionDelta => "extension-delta",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = BvhError;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| BvhError::Parse(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = BvhError;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(BvhError::Parse(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub group: String,
    /// defaults to the prime dividing |G| for p-groups
    pub p: Option<u32>,
    pub element: Option<String>,
    /// `None` picks the largest degree up to 4 that fits the budget
    pub max_degree: Option<usize>,
    pub heavy: bool,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, group: impl Into<String>) -> RunConfig {
        RunConfig {
            command,
            group: group.into(),
            p: None,
            element: None,
            max_degree: None,
            heavy: false,
            format: Format::Text,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub group: String,
    pub p: Option<u32>,
    pub body: Value,
    pub checks: Vec<ReportCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCheck {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<Check> for ReportCheck {
    fn from(c: Check) -> ReportCheck {
        ReportCheck {
            name: c.name,
            passed: c.passed,
            detail: c.detail,
        }
    }
}

impl Report {
    /// A report with no results.
    pub fn empty() -> Report {
        Report {
            schema: SCHEMA.to_string(),
            command: String::new(),
            group: String::new(),
            p: None,
            body: Value::Object(Default::default()),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn from_json(text: &str) -> Result<Report> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema != SCHEMA {
            return Err(BvhError::Parse(format!("unsupported schema `{}`", r.schema)));
        }
        Ok(r)
    }
}

fn check(name: &str, passed: bool, detail: Option<String>) -> ReportCheck {
    ReportCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn resolve_prime(group: &Group, p: Option<u32>) -> Result<Fp> {
    match p.or_else(|| group.prime_power()) {
        Some(p) => Fp::new(p),
        None => Err(BvhError::Parse(format!(
            "order {} is not a prime power, pass --p",
            group.order()
        ))),
    }
}

fn degrees(order: usize, requested: Option<usize>) -> Result<usize> {
    match requested {
        Some(n) if n > MAX_DEGREE => Err(BvhError::Parse(format!("max degree {n} exceeds {MAX_DEGREE}"))),
        Some(n) => {
            check_budget(order, n)?;
            Ok(n)
        }
        None => Ok((1..=DEFAULT_DEGREE)
            .take_while(|&n| check_budget(order, n).is_ok() && required_work(order, n - 1) <= DEFAULT_COLUMN_LIMIT)
            .last()
            .unwrap_or(0)),
    }
}

/// `2·x + y` style rendering of a coordinate vector.
pub fn combination_label(labels: &[String], coords: &[u32]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .zip(labels)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, l)| if c == 1 { l.clone() } else { format!("{c}·{l}") })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Run one command. Errors cover bad input and budget overruns; failed checks live in the report.
pub fn execute_command(cfg: &RunConfig) -> Result<Report> {
    if cfg.heavy {
        set_work_budget(Some(work_budget().max(HEAVY_WORK_BUDGET)));
    }
    let group = Arc::new(parse_group_spec(&cfg.group)?);
    let mut report = Report {
        schema: SCHEMA.to_string(),
        command: cfg.command.name().to_string(),
        group: cfg.group.clone(),
        p: None,
        body: Value::Null,
        checks: Vec::new(),
    };
    if cfg.command == Command::Info {
        report.p = cfg.p.or_else(|| group.prime_power());
        report.body = info(&group)?;
        return Ok(report);
    }
    let f = resolve_prime(&group, cfg.p)?;
    report.p = Some(f.p());
    let (body, checks) = match cfg.command {
        Command::Info => unreachable!(),
        Command::Cohomology => (cohomology(&group, f, cfg)?, Vec::new()),
        Command::Delta => delta(&group, f, cfg)?,
        Command::Hh1Lie => hh1_lie(&group, f)?,
        Command::Hh => (hh(&group, f, cfg)?, Vec::new()),
        Command::ExtensionDelta => extension_delta(&group, f, cfg)?,
        Command::Verify => {
            let n = match cfg.max_degree {
                Some(n) if n > MAX_DEGREE => {
                    return Err(BvhError::Parse(format!("max degree {n} exceeds {MAX_DEGREE}")))
                }
                Some(n) => n,
                None => degrees(group.order(), None)?,
            };
            let suite = run_suite(&group, f, n, cfg.seed)?;
            let body = json!({ "max_degree": n, "seed": cfg.seed, "skipped": suite.skipped });
            (body, suite.checks.into_iter().map(ReportCheck::from).collect())
        }
    };
    report.body = body;
    report.checks = checks;
    Ok(report)
}

fn labels(group: &Group, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|a| group.label(a).to_string()).collect()
}

fn info(group: &Arc<Group>) -> Result<Value> {
    let classes = group.conjugacy_classes();
    let class_rows: Vec<Value> = classes
        .representatives
        .iter()
        .zip(classes.class_sizes())
        .map(|(&g, size)| {
            json!({
                "representative": group.label(g),
                "size": size,
                "element_order": group.element_order(g),
                "centraliser_order": group.centraliser(g).order(),
            })
        })
        .collect();
    let exponent = group.elements().map(|a| group.element_order(a)).fold(1, lcm);
    let frattini = group.frattini().ok();
    Ok(json!({
        "name": group.name(),
        "order": group.order(),
        "exponent": exponent,
        "abelian": group.is_abelian(),
        "prime": group.prime_power(),
        "elements": group.labels(),
        "generators": labels(group, group.generators().iter().copied()),
        "center": labels(group, group.center().elements().iter().copied()),
        "derived_subgroup_order": group.derived_subgroup().order(),
        "frattini": frattini.map(|s| labels(group, s.elements().iter().copied())),
        "classes": class_rows,
    }))
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn cohomology(group: &Arc<Group>, f: Fp, cfg: &RunConfig) -> Result<Value> {
    let top = degrees(group.order(), cfg.max_degree)?;
    let spaces = (0..=top)
        .map(|n| Ok(cohomology_space(group, f, n)?.summary()))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "dims": spaces.iter().map(|s| s.dim).collect::<Vec<_>>(),
        "spaces": spaces,
    }))
}

fn delta(group: &Arc<Group>, f: Fp, cfg: &RunConfig) -> Result<(Value, Vec<ReportCheck>)> {
    let top = degrees(group.order(), cfg.max_degree)?;
    let elements: Vec<usize> = match &cfg.element {
        Some(name) => vec![group.element(name)?],
        None => group
            .elements()
            .filter(|&a| a != group.identity() && group.is_central(a))
            .collect(),
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for g in elements {
        let mut matrices = Vec::new();
        for n in 1..=top {
            let m = delta_matrix(group, f, g, n)?;
            let image: Vec<String> = m.image(f).iter().map(|v| combination_label(&m.target_basis, v)).collect();
            let mut v = serde_json::to_value(&m)?;
            v["image"] = json!(image);
            matrices.push((n, m, v));
        }
        for w in matrices.windows(2) {
            let (lo, hi) = (&w[0].1, &w[1].1);
            let prod = crate::delta::matrix_mul(f, &lo.matrix, &hi.matrix, hi.source_basis.len());
            checks.push(check(
                &format!("delta-squared {} degree {}", group.label(g), w[1].0),
                prod.iter().flatten().all(|&x| x == 0),
                None,
            ));
        }
        rows.push(json!({
            "element": group.label(g),
            "matrices": matrices.into_iter().map(|(_, _, v)| v).collect::<Vec<_>>(),
        }));
    }
    Ok((json!({ "max_degree": top, "deltas": rows }), checks))
}

fn hh1_lie(group: &Arc<Group>, f: Fp) -> Result<(Value, Vec<ReportCheck>)> {
    let lie = build_hh1_lie(group, f)?;
    let axioms = verify_lie_axioms(lie.algebra());
    let mut checks = vec![check(
        "lie-axioms",
        axioms.passed,
        axioms.violation.as_ref().map(|v| format!("{} on {:?}", v.axiom, v.indices)),
    )];
    if !axioms.passed {
        return Ok((json!({ "algebra": lie.algebra().to_json(), "axioms": axioms }), checks));
    }
    let analysis = derived_series_analysis(lie.algebra())?;
    let witness = if group.prime_power() == Some(f.p()) && lie.dim() > 0 {
        let w = construct_nonsoluble_witness(&lie)?;
        if !matches!(w, NonSolubleWitness::HypothesisNotMet { .. }) {
            checks.push(check("nonsoluble-witness", w.verified() && !analysis.soluble, None));
        }
        Some(w)
    } else {
        None
    };
    Ok((
        json!({
            "algebra": lie.algebra().to_json(),
            "basis": lie.basis(),
            "analysis": analysis,
            "axioms": axioms,
            "witness": witness,
        }),
        checks,
    ))
}

fn hh(group: &Arc<Group>, f: Fp, cfg: &RunConfig) -> Result<Value> {
    let ctx = HHContext::new(group, f);
    let top = degrees(group.order(), cfg.max_degree)?;
    let spaces = (0..=top)
        .map(|n| Ok(HHSpace::over(&ctx, n)?.summary()))
        .collect::<Result<Vec<_>>>()?;
    let mut products = Vec::new();
    if top >= 2 {
        let basis = HHSpace::over(&ctx, 1)?.basis();
        if basis.len() <= PRODUCT_TABLE_LIMIT {
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    products.push(json!({ "left": i, "right": j, "product": sw_product(x, y)?.coordinates()? }));
                }
            }
        }
    }
    Ok(json!({
        "dims": spaces.iter().map(|s| s.dim).collect::<Vec<_>>(),
        "spaces": spaces,
        "degree_one_products": products,
    }))
}

fn extension_delta(group: &Arc<Group>, f: Fp, cfg: &RunConfig) -> Result<(Value, Vec<ReportCheck>)> {
    check_budget(group.order(), 2)?;
    let space = cohomology_space(group, f, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let central: Vec<usize> = match &cfg.element {
        Some(name) => vec![group.element(name)?],
        None => group
            .elements()
            .filter(|&a| a != group.identity() && group.is_central(a))
            .collect(),
    };
    let mut cocycles: Vec<(String, Vec<u32>, Cochain)> = (0..space.dim())
        .map(|k| {
            let mut coords = vec![0; space.dim()];
            coords[k] = 1;
            (space.labels()[k].clone(), coords, space.representative(k))
        })
        .collect();
    let len1 = TupleIndexer::new(group).count(1);
    for r in 0..RANDOM_EXTENSIONS {
        let coords: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..f.p())).collect();
        let shift: Vec<u32> = (0..len1).map(|_| rng.gen_range(0..f.p())).collect();
        let alpha = space
            .combine(&coords)
            .add(&Cochain::from_values(group, f, 1, shift)?.coboundary())?;
        cocycles.push((format!("random {r}"), coords, alpha));
    }
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (label, coords, alpha) in cocycles {
        let ext = ExtensionCocycle::from_cocycle(&alpha)?;
        let mut reports = Vec::new();
        for &g in &central {
            if !group.is_central(g) {
                return Err(BvhError::NotCentral(group.label(g).to_string()));
            }
            let r = delta_from_extension(&ext, g)?;
            checks.push(check(
                &format!("extension {label} at {}", group.label(g)),
                r.agrees,
                (!r.agrees).then(|| format!("formula {:?}, commutators {:?}", r.formula, r.commutators)),
            ));
            reports.push(r);
        }
        rows.push(json!({
            "cocycle": label,
            "class": combination_label(space.labels(), &coords),
            "extension_order": ext.group().order(),
            "reports": reports,
        }));
    }
    Ok((json!({ "elements": labels(group, central), "extensions": rows }), checks))
}

/// Render a report as pretty JSON or as indented text.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema: {}", r.schema);
    if !r.command.is_empty() {
        let _ = writeln!(out, "command: {}", r.command);
        let _ = writeln!(out, "group: {}", r.group);
    }
    if let Some(p) = r.p {
        let _ = writeln!(out, "p: {p}");
    }
    render_value(&mut out, &r.body, 0);
    if !r.checks.is_empty() {
        let passed = r.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "checks: {passed}/{} passed", r.checks.len());
        for c in &r.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(out, "  [{mark}] {}: {d}", c.name);
                }
                None => {
                    let _ = writeln!(out, "  [{mark}] {}", c.name);
                }
            }
        }
    }
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.iter().all(is_scalar) => {
            Some(format!("[{}]", xs.iter().map(|x| inline(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(xs) if xs.iter().all(|x| matches!(x, Value::Array(r) if r.iter().all(is_scalar))) => {
            Some(xs.iter().map(|x| inline(x).unwrap()).collect::<Vec<_>>().join(" "))
        }
        v if is_scalar(v) => Some(v.to_string()),
        _ => None,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_value(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other).unwrap_or_default());
        }
    }
}
