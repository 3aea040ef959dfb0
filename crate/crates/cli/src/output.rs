//! Text and JSON rendering of reports.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use chabauty_core::acceptance::CriterionResult;
use chabauty_core::classify::{CertificatePlan, Verdict};
use chabauty_core::grammar::GroupExpr;
use chabauty_core::lab::{FiniteDualityReport, LimitReport, Threshold, TrivialLimitReport};
use chabauty_core::nets::DemoReport;
use chabauty_core::structure::StructureReport;

/// Bumped whenever a JSON document changes shape.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Out {
    json: bool,
}

impl Out {
    pub fn new(json: bool) -> Out {
        Out { json }
    }

    pub fn emit<T: Serialize>(&self, kind: &str, value: &T, text: impl FnOnce() -> String) {
        let body = if self.json {
            document(kind, value).to_string()
        } else {
            text()
        };
        print_line(&body);
    }

    pub fn error(&self, e: &anyhow::Error, code: u8) {
        if self.json {
            let v = json!({"error": format!("{e:#}"), "exitCode": code});
            print_line(&document("error", &v).to_string());
        } else {
            eprintln!("error: {e:#}");
        }
    }
}

/// A closed stdout (say, piped into `head`) is not an error.
fn print_line(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|()| out.flush());
}

fn document<T: Serialize>(kind: &str, value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    let schema = Value::String(format!("chabauty/{kind}/v{SCHEMA_VERSION}"));
    match &mut v {
        Value::Object(m) => {
            m.insert("schema".into(), schema);
            v
        }
        _ => json!({"schema": schema, "value": v}),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn verdict_text(g: &GroupExpr, v: &Verdict) -> String {
    let mut s = format!("{g}: {}\n", yes_no(v.answer));
    for t in &v.trace {
        let _ = writeln!(s, "  {} [{}] {}", t.step, t.cite.key(), t.detail);
    }
    if let Some(p) = &v.witness_plan {
        s.push_str("witness:\n");
        s.push_str(&plan_text(p));
    }
    s.trim_end().to_string()
}

pub fn plan_text(p: &CertificatePlan) -> String {
    fn walk(p: &CertificatePlan, depth: usize, s: &mut String) {
        let pad = "  ".repeat(depth + 1);
        match p {
            CertificatePlan::DirectedUnionOfCyclics { group, schedule } => {
                let _ = writeln!(s, "{pad}{group}: union of (1/d_n)Z with d_n = {}", schedule.describe());
            }
            CertificatePlan::ZnRecipe { modulus } => {
                let _ = writeln!(s, "{pad}R x Z({modulus}): Z·(1/n, 1 mod {modulus})");
            }
            CertificatePlan::RnRecipe { torus_rank } => {
                let _ = writeln!(s, "{pad}R x T^{torus_rank}: cyclic subgroups near the graphs of r ↦ (nr, ..., n^{torus_rank} r)");
            }
            CertificatePlan::KeyLemmaReference { cite, group } => {
                let _ = writeln!(s, "{pad}{group}: by [{}]", cite.key());
            }
            CertificatePlan::Apply {
                op,
                group,
                note,
                children,
            } => {
                let _ = writeln!(s, "{pad}{group}: {op:?}, {note}");
                for c in children {
                    walk(c, depth + 1, s);
                }
            }
        }
    }
    let mut s = String::new();
    walk(p, 0, &mut s);
    s.trim_end().to_string()
}

pub fn structure_text(r: &StructureReport) -> String {
    let f = &r.flags;
    format!(
        "group: {}\nvector rank: {}\nidentity component: {}\ncompact elements: {}\nmod identity component: {}\n\
         compact: {}, discrete: {}, connected: {}, totally disconnected: {}, periodic: {}, compact-free: {}, \
         torsion-free discrete: {}",
        r.group,
        r.vector_rank,
        r.identity_component,
        r.comp_part,
        r.quotient_mod_identity,
        yes_no(f.compact),
        yes_no(f.discrete),
        yes_no(f.connected),
        yes_no(f.totally_disconnected),
        yes_no(f.periodic),
        yes_no(f.compact_free),
        yes_no(f.torsion_free_discrete),
    )
}

fn threshold_text(t: &Threshold) -> String {
    match t {
        Threshold::FoundAt(n) => format!("from n = {n}"),
        Threshold::NotFound => "not found".into(),
    }
}

pub fn limit_text(r: &LimitReport) -> String {
    let mut s = format!(
        "{} in {} → {}: {} (n ≤ {}){}",
        r.sequence,
        r.group,
        r.target,
        threshold_text(&r.threshold),
        r.n_max,
        if r.stable { "" } else { ", not stable" }
    );
    if let Some(b) = r.borderline_at {
        let _ = write!(s, "; borderline at n = {b}");
    }
    s
}

pub fn trivial_text(r: &TrivialLimitReport) -> String {
    let mut s = format!("{}: {}", r.sequence, r.verdict);
    for w in r.witnesses.iter().take(3) {
        let _ = write!(
            s,
            "\n  cluster point {} near H_n at {} indices of [{}, {}]{}",
            w.point,
            w.close_indices,
            w.tail.0,
            w.tail.1,
            if w.every_index { ", every index" } else { "" }
        );
    }
    s
}

pub fn finite_duality_text(r: &FiniteDualityReport) -> String {
    let mut s = format!("{} (order {}), {} subgroups\n", r.group, r.order, r.subgroups.len());
    for x in &r.subgroups {
        let _ = writeln!(
            s,
            "  |H| = {:>3}  H = {}  H^⊥ = {} (order {})",
            x.order, x.subgroup, x.annihilator, x.annihilator_order
        );
    }
    let _ = write!(
        s,
        "involution: {}, orders multiply to |F|: {}, inclusion reversing: {}",
        yes_no(r.involution),
        yes_no(r.order_product),
        yes_no(r.inclusion_reversing)
    );
    for f in &r.failures {
        let _ = write!(s, "\n  {f}");
    }
    s
}

pub fn demo_text(r: &DemoReport) -> String {
    let mut s = format!(
        "{} at K = Ball({}), W = Ball({}), tolerances {}\n",
        r.group, r.rho, r.epsilon, r.tolerance_schedule
    );
    for (st, gen) in r.diagonal.steps.iter().zip(&r.cyclic_sequence) {
        let _ = writeln!(
            s,
            "  i = {:>2}  j = {:>4}  {gen}  near limit: {}",
            st.i,
            st.j,
            st.near_limit.map_or("?", yes_no)
        );
    }
    let _ = write!(
        s,
        "{}",
        match r.diagonal.enters_and_stays_from {
            Some(i) if r.success => format!("enters and stays from i = {i}"),
            _ => "does not settle".into(),
        }
    );
    s
}

pub fn selftest_text(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(
            s,
            "{:>2}  {}  {:<40} {:>7} ms  {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.elapsed_ms,
            r.detail
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = write!(s, "{passed}/{} passed", results.len());
    s
}
