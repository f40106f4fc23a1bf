//! Runs every checked statement against a list of fields and collects the
//! verdicts into one deterministic report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::capitulation::{self, CapitulationStatus, DEFAULT_BOUND, DEFAULT_BUDGET};
use crate::classgroup::{self, minkowski_bound};
use crate::cyclotomic;
use crate::error::{Error, Result};
use crate::ideals::FractionalIdeal;
use crate::quadfield::QuadraticField;
use crate::splitting;
use crate::util::{decimal_ceil, factor_text, parse_rational, rational_json};

pub const REPORT_VERSION: &str = "1";

pub const DEFAULT_FIELDS: [i64; 18] = [-1, -2, -3, -5, -6, -7, -10, -13, -14, -15, -21, -23, 2, 3, 5, 6, 7, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    /// Every class is supported on the ramified primes.
    #[serde(rename = "L1.2")]
    L1_2,
    /// The class group is finite.
    #[serde(rename = "L1.3")]
    L1_3,
    /// `O_K` is a UFD iff the class group is trivial.
    #[serde(rename = "UFD-IFF")]
    UfdIff,
    /// `O_K ⊂ M` together with `M ⊃ M² ⊃ M³ ⊃ …`.
    #[serde(rename = "CHAIN-1")]
    Chain1,
    /// Commutators of the Galois group act trivially on classes.
    #[serde(rename = "P2.1")]
    P2_1,
    /// Galois-fixed classes come from the base.
    #[serde(rename = "P2.2")]
    P2_2,
    /// A class of order `n` dies in a cyclic degree-`n` extension.
    #[serde(rename = "T2.3")]
    T2_3,
    /// Every class dies in one composite extension.
    #[serde(rename = "T2.4")]
    T2_4,
    /// That composite has degree `h`.
    #[serde(rename = "T2.5")]
    T2_5,
    /// Quadratic fields lie in cyclotomic fields.
    #[serde(rename = "T3.1")]
    T3_1,
    /// `Q(√p)` is not generated by roots of unity.
    #[serde(rename = "REMARK")]
    Remark,
}

impl ClaimId {
    pub const ALL: [ClaimId; 11] = [
        ClaimId::L1_2,
        ClaimId::L1_3,
        ClaimId::UfdIff,
        ClaimId::Chain1,
        ClaimId::P2_1,
        ClaimId::P2_2,
        ClaimId::T2_3,
        ClaimId::T2_4,
        ClaimId::T2_5,
        ClaimId::T3_1,
        ClaimId::Remark,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::L1_2 => "L1.2",
            ClaimId::L1_3 => "L1.3",
            ClaimId::UfdIff => "UFD-IFF",
            ClaimId::Chain1 => "CHAIN-1",
            ClaimId::P2_1 => "P2.1",
            ClaimId::P2_2 => "P2.2",
            ClaimId::T2_3 => "T2.3",
            ClaimId::T2_4 => "T2.4",
            ClaimId::T2_5 => "T2.5",
            ClaimId::T3_1 => "T3.1",
            ClaimId::Remark => "REMARK",
        }
    }

    pub fn parse(s: &str) -> Option<ClaimId> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Holds,
    Fails,
    Undecided,
    OutOfScope,
}

impl ClaimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::Holds => "HOLDS",
            ClaimStatus::Fails => "FAILS",
            ClaimStatus::Undecided => "UNDECIDED",
            ClaimStatus::OutOfScope => "OUT_OF_SCOPE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub claim_id: ClaimId,
    pub d: i64,
    pub status: ClaimStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl ClaimOutcome {
    pub fn holds(claim_id: ClaimId, d: i64, witness: Option<Value>) -> ClaimOutcome {
        ClaimOutcome {
            claim_id,
            d,
            status: ClaimStatus::Holds,
            witness,
            reason: None,
        }
    }

    pub fn fails(claim_id: ClaimId, d: i64, witness: Value) -> ClaimOutcome {
        ClaimOutcome {
            claim_id,
            d,
            status: ClaimStatus::Fails,
            witness: Some(witness),
            reason: None,
        }
    }

    pub fn undecided(claim_id: ClaimId, d: i64, witness: Option<Value>) -> ClaimOutcome {
        ClaimOutcome {
            claim_id,
            d,
            status: ClaimStatus::Undecided,
            witness,
            reason: None,
        }
    }

    pub fn out_of_scope(claim_id: ClaimId, d: i64, reason: &str) -> ClaimOutcome {
        ClaimOutcome {
            claim_id,
            d,
            status: ClaimStatus::OutOfScope,
            witness: None,
            reason: Some(reason.to_string()),
        }
    }

    /// One-line description of the witness for the text table.
    pub fn summary(&self) -> String {
        if let Some(r) = &self.reason {
            return r.clone();
        }
        let Some(w) = &self.witness else { return String::new() };
        let get = |k: &str| w.get(k).map(compact).unwrap_or_default();
        match self.claim_id {
            ClaimId::L1_2 if self.status == ClaimStatus::Fails => format!(
                "class {} has order {} in the S-class group, S = {}",
                ideal_text(&w["class"]),
                get("order_in_s_class_group"),
                get("s")
            ),
            ClaimId::L1_2 => format!("S = {}, h = {}, h_S = 1", get("s"), get("h")),
            ClaimId::L1_3 => {
                let bound = parse_rational(&get("minkowski"))
                    .map(|r| decimal_ceil(&r, 3))
                    .unwrap_or_default();
                format!("h = {}, Minkowski bound ≤ {bound}", get("h"))
            }
            ClaimId::UfdIff => match w.get("witness") {
                Some(x) if !x.is_null() => format!(
                    "h = {}: {}·{} = {}·{}",
                    get("h"),
                    factor_text(&compact(&x["p1"])),
                    factor_text(&compact(&x["p2"])),
                    factor_text(&compact(&x["q1"])),
                    factor_text(&compact(&x["q2"]))
                ),
                _ => format!("h = {}, no collision with primes ≤ {}", get("h"), get("prime_bound")),
            },
            ClaimId::Chain1 if self.status == ClaimStatus::Fails => format!(
                "M = {}: O_K ⊆ M but M² ⊄ M; corrected chain to order {} verified: {}",
                ideal_text(&w["module"]),
                compact(&w["corrected"]["order"]),
                compact(&w["corrected"]["verified"])
            ),
            ClaimId::Chain1 => "every class is trivial".to_string(),
            ClaimId::P2_2 if self.status == ClaimStatus::Fails => {
                format!("class of {} is σ-fixed but nontrivial", ideal_text(&w["ideal"]))
            }
            ClaimId::P2_2 => format!(
                "classes checked: {}, no σ-fixed nontrivial class",
                get("classes_checked")
            ),
            ClaimId::T2_3 => {
                let certs = w
                    .get("certificates")
                    .and_then(Value::as_array)
                    .cloned()
                    .unwrap_or_default();
                if certs.is_empty() {
                    "h = 1".to_string()
                } else {
                    let parts: Vec<String> = certs
                        .iter()
                        .map(|c| format!("n={} γ={}", compact(&c["n"]), compact(&c["gamma"]["text"])))
                        .collect();
                    parts.join("; ")
                }
            }
            ClaimId::T2_4 | ClaimId::T2_5 => format!(
                "degrees {} (product {}), h = {}",
                get("degrees"),
                get("degree_product"),
                get("h")
            ),
            ClaimId::T3_1 | ClaimId::Remark => {
                format!("√{} ∈ Q(ζ_{}), verified {}", get("d"), get("n"), get("verified"))
            }
            ClaimId::P2_1 => String::new(),
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn ideal_text(v: &Value) -> String {
    FractionalIdeal::from_json(v)
        .map(|i| i.generators_text())
        .unwrap_or_else(|_| compact(v))
}

/// Search limits used by the capitulation claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub capitulation: u64,
    pub budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            capitulation: DEFAULT_BOUND,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimConfig {
    pub fields: Vec<i64>,
    #[serde(default)]
    pub bounds: Bounds,
    /// Restrict to these claims; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims: Option<Vec<ClaimId>>,
}

impl ClaimConfig {
    pub fn new(fields: Vec<i64>) -> ClaimConfig {
        ClaimConfig {
            fields,
            bounds: Bounds::default(),
            claims: None,
        }
    }

    pub fn default_fields() -> ClaimConfig {
        ClaimConfig::new(DEFAULT_FIELDS.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub version: String,
    pub config: ClaimConfig,
    pub outcomes: Vec<ClaimOutcome>,
}

impl ClaimReport {
    pub fn get(&self, claim: ClaimId, d: i64) -> Option<&ClaimOutcome> {
        self.outcomes.iter().find(|o| o.claim_id == claim && o.d == d)
    }
}

fn check_finiteness(field: QuadraticField) -> ClaimOutcome {
    let cl = classgroup::class_group(field);
    let bound = minkowski_bound(field);
    let max_rep_norm = cl.reps.iter().map(|r| r.norm()).max().expect("at least one class");
    let witness = json!({
        "h": cl.h,
        "minkowski": rational_json(&bound),
        "max_rep_norm": rational_json(&max_rep_norm),
    });
    if max_rep_norm <= bound {
        ClaimOutcome::holds(ClaimId::L1_3, field.d(), Some(witness))
    } else {
        ClaimOutcome::fails(ClaimId::L1_3, field.d(), witness)
    }
}

/// `M ⊇ M²` and `O_K ⊆ M` for `M` the inverse of an integral ideal.
fn chain_literal(m: &FractionalIdeal) -> (bool, bool) {
    let contains_ok = m.contains_ideal(&FractionalIdeal::unit(m.field()));
    let decreasing = m.contains_ideal(&m.mul(m).expect("same field"));
    (contains_ok, decreasing)
}

/// For `O_K ⊊ M` of class order `n`: `M ⊊ M² ⊊ … ⊊ Mⁿ`, with strictly
/// falling norms, and `Mⁿ` principal.
fn chain_corrected(m: &FractionalIdeal) -> (u64, bool) {
    let n = m.class_order().expect("class order within h");
    let mut prev = m.clone();
    let mut ok = true;
    for _ in 1..n {
        let next = prev.mul(m).expect("same field");
        ok &= next.contains_ideal(&prev) && next != prev && next.norm() < prev.norm();
        prev = next;
    }
    (n, ok && prev.is_principal().is_some())
}

fn check_chain(field: QuadraticField) -> ClaimOutcome {
    let cl = classgroup::class_group(field);
    let offender = cl.reps.iter().find(|r| r.is_principal().is_none());
    let Some(rep) = offender else {
        return ClaimOutcome::holds(ClaimId::Chain1, field.d(), Some(json!({ "h": cl.h })));
    };
    let m = rep.dual();
    let (contains_ok, decreasing) = chain_literal(&m);
    let (order, verified) = chain_corrected(&m);
    let witness = json!({
        "module": m.to_json(),
        "o_k_in_m": contains_ok,
        "m2_in_m": decreasing,
        "corrected": { "order": order, "verified": verified },
    });
    if contains_ok && decreasing {
        ClaimOutcome::holds(ClaimId::Chain1, field.d(), Some(witness))
    } else {
        ClaimOutcome::fails(ClaimId::Chain1, field.d(), witness)
    }
}

fn check_descent(field: QuadraticField) -> ClaimOutcome {
    let cl = classgroup::class_group(field);
    for rep in &cl.reps {
        let report = rep.descent_check();
        if report.counterexample {
            return ClaimOutcome::fails(
                ClaimId::P2_2,
                field.d(),
                json!({ "ideal": rep.to_json(), "report": report }),
            );
        }
    }
    ClaimOutcome::holds(
        ClaimId::P2_2,
        field.d(),
        Some(json!({ "classes_checked": cl.reps.len() })),
    )
}

fn check_cyclic_capitulation(field: QuadraticField, bounds: Bounds) -> Result<ClaimOutcome> {
    let cl = classgroup::class_group(field);
    let mut certs = Vec::new();
    let mut all_found = true;
    for rep in cl.reps.iter().filter(|r| r.is_principal().is_none()) {
        let cert = capitulation::capitulate(rep, bounds.capitulation, bounds.budget)?;
        all_found &= cert.status == CapitulationStatus::Found && cert.verify();
        certs.push(cert.to_json());
    }
    let witness = json!({ "h": cl.h, "certificates": certs });
    Ok(if all_found {
        ClaimOutcome::holds(ClaimId::T2_3, field.d(), Some(witness))
    } else {
        ClaimOutcome::undecided(ClaimId::T2_3, field.d(), Some(witness))
    })
}

fn check_composite(field: QuadraticField, bounds: Bounds) -> Result<(ClaimOutcome, ClaimOutcome)> {
    let report = capitulation::composite_report(field, bounds.capitulation, bounds.budget)?;
    let w = report.to_json();
    let t24 = if report.all_found() {
        ClaimOutcome::holds(ClaimId::T2_4, field.d(), Some(w.clone()))
    } else {
        ClaimOutcome::undecided(ClaimId::T2_4, field.d(), Some(w.clone()))
    };
    let t25 = if report.degrees_match() {
        ClaimOutcome::holds(ClaimId::T2_5, field.d(), Some(w))
    } else {
        ClaimOutcome::fails(ClaimId::T2_5, field.d(), w)
    };
    Ok((t24, t25))
}

/// All outcomes for one field, in claim order.
fn run_field(d: i64, config: &ClaimConfig) -> Result<Vec<ClaimOutcome>> {
    let field = QuadraticField::new(d)?;
    let wanted = |c: ClaimId| config.claims.as_ref().is_none_or(|cs| cs.contains(&c));
    let mut out = Vec::new();
    if wanted(ClaimId::L1_2) {
        out.push(classgroup::check_s_class_trivial(field));
    }
    if wanted(ClaimId::L1_3) {
        out.push(check_finiteness(field));
    }
    if wanted(ClaimId::UfdIff) {
        out.push(splitting::check_ufd_iff(field));
    }
    if wanted(ClaimId::Chain1) {
        out.push(check_chain(field));
    }
    if wanted(ClaimId::P2_1) {
        out.push(ClaimOutcome::out_of_scope(
            ClaimId::P2_1,
            d,
            "requires nonabelian extension",
        ));
    }
    if wanted(ClaimId::P2_2) {
        out.push(check_descent(field));
    }
    if wanted(ClaimId::T2_3) {
        out.push(check_cyclic_capitulation(field, config.bounds)?);
    }
    if wanted(ClaimId::T2_4) || wanted(ClaimId::T2_5) {
        let (t24, t25) = check_composite(field, config.bounds)?;
        if wanted(ClaimId::T2_4) {
            out.push(t24);
        }
        if wanted(ClaimId::T2_5) {
            out.push(t25);
        }
    }
    if wanted(ClaimId::T3_1) {
        out.push(cyclotomic::check_cyclotomic_embedding(d)?);
    }
    if wanted(ClaimId::Remark) {
        out.push(cyclotomic::check_prime_conductor(d)?);
    }
    Ok(out)
}

/// Fields run on separate threads; the merge sorts by `(claim, d)`.
pub fn run_claims(config: &ClaimConfig) -> Result<ClaimReport> {
    if config.fields.is_empty() {
        return Err(Error::EmptyConfig);
    }
    for &d in &config.fields {
        QuadraticField::new(d)?;
    }
    let mut fields = config.fields.clone();
    fields.sort_unstable();
    fields.dedup();
    let results: Vec<Result<Vec<ClaimOutcome>>> = std::thread::scope(|s| {
        let handles: Vec<_> = fields.iter().map(|&d| s.spawn(move || run_field(d, config))).collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Internal("claim worker panicked".into())))
            })
            .collect()
    });
    let mut outcomes = Vec::new();
    for r in results {
        outcomes.extend(r?);
    }
    outcomes.sort_by_key(|o| (o.claim_id, o.d));
    Ok(ClaimReport {
        version: REPORT_VERSION.to_string(),
        config: ClaimConfig {
            fields,
            ..config.clone()
        },
        outcomes,
    })
}

/// Feeds a FAILS witness back to the check that produced it.
pub fn reverify(outcome: &ClaimOutcome) -> bool {
    if outcome.status != ClaimStatus::Fails {
        return false;
    }
    let Some(w) = &outcome.witness else { return false };
    let Ok(field) = QuadraticField::new(outcome.d) else {
        return false;
    };
    match outcome.claim_id {
        ClaimId::L1_2 => classgroup::reverify_s_class_witness(w),
        ClaimId::Chain1 => FractionalIdeal::from_json(&w["module"]).is_ok_and(|m| {
            let (contains_ok, decreasing) = chain_literal(&m);
            m.field() == field && !(contains_ok && decreasing)
        }),
        ClaimId::P2_2 => FractionalIdeal::from_json(&w["ideal"]).is_ok_and(|i| i.descent_check().counterexample),
        ClaimId::T3_1 => !cyclotomic::reverify_sqrt_witness(w),
        ClaimId::Remark => cyclotomic::reverify_sqrt_witness(w),
        ClaimId::L1_3 => check_finiteness(field).status == ClaimStatus::Fails,
        ClaimId::UfdIff => splitting::check_ufd_iff(field).status == ClaimStatus::Fails,
        ClaimId::T2_5 => {
            capitulation::composite_report(field, DEFAULT_BOUND, DEFAULT_BUDGET).is_ok_and(|r| !r.degrees_match())
        }
        ClaimId::T2_3 | ClaimId::T2_4 | ClaimId::P2_1 => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn render_report(report: &ClaimReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let rows: Vec<[String; 4]> = report
                .outcomes
                .iter()
                .map(|o| {
                    [
                        o.claim_id.as_str().to_string(),
                        o.d.to_string(),
                        o.status.as_str().to_string(),
                        o.summary(),
                    ]
                })
                .collect();
            let header = ["CLAIM", "FIELD", "STATUS", "WITNESS-SUMMARY"];
            let mut widths = header.map(|h| h.chars().count());
            for r in &rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let mut out = String::new();
            let mut line = |cells: [&str; 4]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, w))| {
                        if i == 3 {
                            c.to_string()
                        } else {
                            format!("{c}{}", " ".repeat(w - c.chars().count()))
                        }
                    })
                    .collect();
                let _ = writeln!(out, "{}", padded.join(" | ").trim_end());
            };
            line(header);
            for r in &rows {
                line([&r[0], &r[1], &r[2], &r[3]]);
            }
            out
        }
    }
}
