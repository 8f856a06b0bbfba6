//! Declarative check manifests and their run reports.
//!
//! A manifest is a JSON object `{"checks": [...]}`; each check has an id, an
//! optional group recipe and a list of assertions. Assertions name an
//! operation, its parameters and the expected value. Expected objects match
//! when every listed key matches, so a report may carry more detail than the
//! manifest asks about.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::interval::parse_rational;
use crate::bounds::{formula_suite, lemma22_check, m_epsilon, n_c_delta, theorem13_check, Formula};
use crate::constructions::{LabeledAction, DEFAULT_DEGREE_CAP};
use crate::describe::suborbits;
use crate::error::{Error, Result};
use crate::recipe::Recipe;
use crate::search::{
    base_size_exact, count_regular_tuples, distinguishing_number, is_distinguishing, stabilizer_scan, BaseOutcome,
    Budget, Predicate, RegularCount, DEFAULT_DIST_CAP,
};
use crate::structure::table::table_version;
use crate::structure::{composition_factors, in_gamma, is_solvable};

pub const SCHEMA_VERSION: u32 = 1;

/// Bundled manifest of reference values.
pub const REFERENCE_MANIFEST: &str = include_str!("../data/reference.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A value stated in the literature; `source` says where.
    Published,
    /// Immediate from definitions.
    Trivial,
    /// Computed by an independent method or formula.
    Derived,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub operation: String,
    #[serde(default)]
    pub parameters: Value,
    pub expected: Value,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_ms: Option<u64>,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckManifest {
    /// Default per-check budget; `PERMRES_BUDGET_MS` applies when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum ThresholdParam {
    Value(u64),
    Word(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DParams {
    d: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseParams {
    #[serde(default = "default_max_b")]
    max_b: usize,
}

fn default_max_b() -> usize {
    64
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanParams {
    c: usize,
    predicate: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegParams {
    t: usize,
    #[serde(default)]
    threshold: Option<ThresholdParam>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm13Params {
    c: usize,
    d: usize,
    delta: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaParams {
    name: String,
    params: Vec<Value>,
    #[serde(default)]
    measured: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EpsParams {
    eps: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NcParams {
    c: u32,
    delta: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    Order,
    Value(BigUint),
}

/// A parsed assertion operation.
#[derive(Clone, Debug, PartialEq)]
pub enum Operation {
    Order,
    Degree,
    KernelOrder,
    Transitive,
    Primitive,
    TwoTransitive,
    Suborbits,
    Solvable,
    CompositionFactors,
    InGamma(usize),
    BaseSize { max_b: usize },
    DistNumber,
    StabScan { c: usize, predicate: Predicate },
    RegCount { t: usize, threshold: Option<Threshold> },
    Lemma22(usize),
    Theorem13 { c: usize, d: usize, delta: String },
    Formula { formula: Formula, params: Vec<BigUint>, measured: Option<BigUint> },
    MEpsilon(String),
    NcDelta { c: u32, delta: String },
}

pub const OPERATIONS: &[&str] = &[
    "order",
    "degree",
    "kernel_order",
    "is_transitive",
    "is_primitive",
    "is_2_transitive",
    "suborbits",
    "is_solvable",
    "composition_factors",
    "in_gamma",
    "base_size",
    "dist_number",
    "stab_scan",
    "reg_count",
    "lemma22",
    "theorem13",
    "formula",
    "m_epsilon",
    "n_c_delta",
];

fn params<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    let v = if v.is_null() { json!({}) } else { v.clone() };
    Ok(serde_json::from_value(v)?)
}

fn big_of(v: &Value) -> Result<BigUint> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::invalid(format!("{v} is not a non-negative integer")))
}

fn rational(s: &str) -> Result<num_rational::BigRational> {
    parse_rational(s).ok_or_else(|| Error::invalid(format!("{s:?} is not a rational p/q")))
}

impl Operation {
    pub fn parse(name: &str, p: &Value) -> Result<Self> {
        let none = || -> Result<()> {
            match p {
                Value::Null => Ok(()),
                Value::Object(m) if m.is_empty() => Ok(()),
                _ => Err(Error::invalid(format!("{name} takes no parameters"))),
            }
        };
        Ok(match name {
            "order" => none().map(|_| Operation::Order)?,
            "degree" => none().map(|_| Operation::Degree)?,
            "kernel_order" => none().map(|_| Operation::KernelOrder)?,
            "is_transitive" => none().map(|_| Operation::Transitive)?,
            "is_primitive" => none().map(|_| Operation::Primitive)?,
            "is_2_transitive" => none().map(|_| Operation::TwoTransitive)?,
            "suborbits" => none().map(|_| Operation::Suborbits)?,
            "is_solvable" => none().map(|_| Operation::Solvable)?,
            "composition_factors" => none().map(|_| Operation::CompositionFactors)?,
            "dist_number" => none().map(|_| Operation::DistNumber)?,
            "in_gamma" => Operation::InGamma(params::<DParams>(p)?.d),
            "lemma22" => Operation::Lemma22(params::<DParams>(p)?.d),
            "base_size" => Operation::BaseSize {
                max_b: params::<BaseParams>(p)?.max_b,
            },
            "stab_scan" => {
                let s: ScanParams = params(p)?;
                Operation::StabScan {
                    c: s.c,
                    predicate: s.predicate.parse()?,
                }
            }
            "reg_count" => {
                let r: RegParams = params(p)?;
                if r.t < 2 {
                    return Err(Error::invalid("reg_count needs t >= 2"));
                }
                let threshold = match r.threshold {
                    None => None,
                    Some(ThresholdParam::Word(w)) if w == "auto" => Some(Threshold::Order),
                    Some(ThresholdParam::Word(w)) => Some(Threshold::Value(big_of(&Value::String(w))?)),
                    Some(ThresholdParam::Value(v)) => Some(Threshold::Value(v.into())),
                };
                Operation::RegCount { t: r.t, threshold }
            }
            "theorem13" => {
                let t: Thm13Params = params(p)?;
                rational(&t.delta)?;
                Operation::Theorem13 {
                    c: t.c,
                    d: t.d,
                    delta: t.delta,
                }
            }
            "formula" => {
                let f: FormulaParams = params(p)?;
                Operation::Formula {
                    formula: f.name.parse()?,
                    params: f.params.iter().map(big_of).collect::<Result<_>>()?,
                    measured: f.measured.as_ref().map(big_of).transpose()?,
                }
            }
            "m_epsilon" => {
                let e: EpsParams = params(p)?;
                rational(&e.eps)?;
                Operation::MEpsilon(e.eps)
            }
            "n_c_delta" => {
                let n: NcParams = params(p)?;
                rational(&n.delta)?;
                Operation::NcDelta { c: n.c, delta: n.delta }
            }
            _ => return Err(Error::invalid(format!("unknown operation {name:?}"))),
        })
    }

    pub fn needs_group(&self) -> bool {
        !matches!(
            self,
            Operation::Formula { .. } | Operation::MEpsilon(_) | Operation::NcDelta { .. }
        )
    }
}

/// Line of the first occurrence of `needle` in `text`, 1-based.
fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle).map_or(0, |i| text[..i].matches('\n').count() + 1)
}

/// Parses and validates a manifest. Errors carry the line of the offending
/// check where it can be located.
pub fn parse_manifest(text: &str) -> Result<CheckManifest> {
    let m: CheckManifest = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut ids = HashSet::new();
    for c in &m.checks {
        let line = line_of(text, &format!("\"{}\"", c.id));
        if !ids.insert(c.id.as_str()) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate check id {:?}", c.id),
            });
        }
        for a in &c.assertions {
            let op = Operation::parse(&a.operation, &a.parameters).map_err(|e| Error::Parse {
                line,
                msg: format!("check {:?}: {e}", c.id),
            })?;
            if op.needs_group() && c.recipe.is_none() {
                return Err(Error::Parse {
                    line,
                    msg: format!("check {:?}: {} needs a recipe", c.id, a.operation),
                });
            }
            if a.provenance == Provenance::Published && a.source.as_deref().map_or(true, str::is_empty) {
                return Err(Error::Parse {
                    line,
                    msg: format!("check {:?}: published values need a source", c.id),
                });
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedResource,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssertionResult {
    pub operation: String,
    pub parameters: Value,
    pub expected: Value,
    pub measured: Option<Value>,
    pub status: Status,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub assertions: Vec<AssertionResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped_resource: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub simple_table_version: u32,
    /// SHA-256 of the manifest text.
    pub input_hash: String,
    pub summary: Summary,
    pub elapsed_ms: u64,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    /// 0 when everything passed, 1 on any failure, 2 when something was
    /// skipped for resources and nothing failed.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.skipped_resource > 0 {
            2
        } else {
            0
        }
    }
}

fn num(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// Whether `measured` satisfies `expected`. Integers may be written as
/// numbers or decimal strings.
pub fn matches(expected: &Value, measured: &Value) -> bool {
    match (expected, measured) {
        (Value::Object(e), Value::Object(m)) => e
            .iter()
            .all(|(k, v)| m.get(k).is_some_and(|mv| matches(v, mv))),
        (Value::Array(e), Value::Array(m)) => e.len() == m.len() && e.iter().zip(m).all(|(a, b)| matches(a, b)),
        (Value::Number(a), Value::String(b)) | (Value::String(b), Value::Number(a)) => a.to_string() == *b,
        _ => expected == measured,
    }
}

enum Outcome {
    Measured(Value),
    Skipped(String),
}

fn evaluate(op: &Operation, action: Option<&LabeledAction>, budget: &Budget) -> Result<Outcome> {
    let g = || &action.expect("validated: operation has a group").group;
    let m = |v: Value| Ok(Outcome::Measured(v));
    match op {
        Operation::Order => m(num(&g().order())),
        Operation::Degree => m(json!(g().degree())),
        Operation::KernelOrder => match action.and_then(LabeledAction::kernel_order) {
            Some(k) => m(num(&k)),
            None => Err(Error::invalid("the recipe does not record an abstract order")),
        },
        Operation::Transitive => m(json!(g().is_transitive())),
        Operation::Primitive => m(json!(g().is_transitive() && g().is_primitive())),
        Operation::TwoTransitive => m(json!(g().is_transitive() && suborbits(g())?.len() <= 2)),
        Operation::Suborbits => {
            if !g().is_transitive() {
                return Err(Error::NotTransitive);
            }
            m(json!(suborbits(g())?))
        }
        Operation::Solvable => m(json!(is_solvable(g()))),
        Operation::CompositionFactors => {
            let f = composition_factors(g())?;
            m(json!(f.iter().map(ToString::to_string).collect::<Vec<_>>()))
        }
        Operation::InGamma(d) => m(json!(in_gamma(g(), *d)?)),
        Operation::BaseSize { max_b } => match base_size_exact(g(), *max_b, budget)? {
            BaseOutcome::Exact { witness } => m(json!(witness.size)),
            BaseOutcome::ExceedsMax { max_b, .. } => m(json!({ "exceeds_max": max_b })),
            BaseOutcome::Partial { lower, upper } => {
                Ok(Outcome::Skipped(format!("budget exhausted with {lower} <= b <= {}", upper.size)))
            }
        },
        Operation::DistNumber => {
            let d = distinguishing_number(g(), DEFAULT_DIST_CAP, budget)?;
            if !is_distinguishing(g(), &d.coloring)? {
                return Err(Error::invalid("internal: witness colouring does not distinguish"));
            }
            m(json!(d.r))
        }
        Operation::StabScan { c, predicate } => {
            let r = stabilizer_scan(g(), *c, *predicate, budget)?;
            m(json!({
                "verdict": r.verdict,
                "exhaustive": r.exhaustive,
                "representatives": r.representatives,
                "max_order": r.max_order().map(num),
            }))
        }
        Operation::RegCount { t, threshold } => {
            let th = threshold.as_ref().map(|t| match t {
                Threshold::Order => g().order(),
                Threshold::Value(v) => v.clone(),
            });
            match count_regular_tuples(g(), *t, th.as_ref(), budget)? {
                RegularCount::Exact { count } => m(num(&count)),
                RegularCount::ReachedThreshold { .. } => m(json!("reached")),
            }
        }
        Operation::Lemma22(d) => m(json!(lemma22_check(g(), *d)?.verdict)),
        Operation::Theorem13 { c, d, delta } => {
            m(json!(theorem13_check(g(), *c, *d, &rational(delta)?, budget)?.verdict))
        }
        Operation::Formula { formula, params, measured } => {
            let r = formula_suite(*formula, params, measured.as_ref())?;
            match measured {
                Some(_) => m(json!({ "value": r.bound_value, "verdict": r.verdict })),
                None => m(num(&formula.evaluate(params)?)),
            }
        }
        Operation::MEpsilon(eps) => m(json!(m_epsilon(&rational(eps)?)?)),
        Operation::NcDelta { c, delta } => m(json!(n_c_delta(*c, &rational(delta)?)?)),
    }
}

fn resource_like(e: &Error) -> bool {
    matches!(e, Error::Resource(_) | Error::DegreeLimit { .. } | Error::OrderLimit { .. })
}

fn run_check(check: &Check, default_budget: Option<u64>, cap: usize) -> CheckResult {
    let start = Instant::now();
    let budget = || match check.budget_ms.or(default_budget) {
        Some(ms) => Budget::millis(ms),
        None => Budget::from_env(),
    };
    let mut build_error = None;
    let action = match &check.recipe {
        Some(r) => match r.build_with_cap(cap) {
            Ok(a) => Some(a),
            Err(e) => {
                build_error = Some(e);
                None
            }
        },
        None => None,
    };
    let assertions: Vec<AssertionResult> = check
        .assertions
        .iter()
        .map(|a| {
            let op = Operation::parse(&a.operation, &a.parameters).expect("validated");
            let outcome = match (&build_error, op.needs_group()) {
                (Some(e), true) if resource_like(e) => Ok(Outcome::Skipped(e.to_string())),
                (Some(e), true) => Err(Error::invalid(format!("recipe: {e}"))),
                _ => evaluate(&op, action.as_ref(), &budget()),
            };
            let (measured, status, error) = match outcome {
                Ok(Outcome::Measured(v)) => {
                    let s = if matches(&a.expected, &v) { Status::Pass } else { Status::Fail };
                    (Some(v), s, None)
                }
                Ok(Outcome::Skipped(msg)) => (None, Status::SkippedResource, Some(msg)),
                Err(e) if resource_like(&e) => (None, Status::SkippedResource, Some(e.to_string())),
                Err(e) => (None, Status::Fail, Some(e.to_string())),
            };
            AssertionResult {
                operation: a.operation.clone(),
                parameters: a.parameters.clone(),
                expected: a.expected.clone(),
                measured,
                status,
                provenance: a.provenance,
                source: a.source.clone(),
                error,
            }
        })
        .collect();
    let status = if assertions.iter().any(|a| a.status == Status::Fail) {
        Status::Fail
    } else if assertions.iter().any(|a| a.status == Status::SkippedResource) {
        Status::SkippedResource
    } else {
        Status::Pass
    };
    CheckResult {
        id: check.id.clone(),
        status,
        elapsed_ms: start.elapsed().as_millis() as u64,
        error: build_error.map(|e| e.to_string()),
        assertions,
    }
}

/// Runs every check of a manifest text, at most `threads` checks at a time
/// (0 for the rayon default). Results keep manifest order.
pub fn run_manifest_text(text: &str, threads: usize) -> Result<RunReport> {
    let manifest = parse_manifest(text)?;
    let start = Instant::now();
    let cap = manifest.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(e.to_string()))?;
    let checks: Vec<CheckResult> = pool.install(|| {
        manifest
            .checks
            .par_iter()
            .map(|c| run_check(c, manifest.budget_ms, cap))
            .collect()
    });
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        simple_table_version: table_version(),
        input_hash: format!("{:x}", Sha256::digest(text.as_bytes())),
        summary: Summary {
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            skipped_resource: count(Status::SkippedResource),
        },
        elapsed_ms: start.elapsed().as_millis() as u64,
        checks,
    })
}

pub fn run_manifest(path: &std::path::Path, threads: usize) -> Result<RunReport> {
    run_manifest_text(&std::fs::read_to_string(path)?, threads)
}
