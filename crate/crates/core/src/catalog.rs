//! The curated catalog and its JSON-lines records.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dsl::{self, DslError};
use crate::group::FiniteGroup;
use crate::nker::{cross_check_fields, GroupAnalysis, KernelReport, NkerError};
use crate::schur::{Field, Verdict};

/// Version of the JSON-lines record layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_MAX_ORDER: usize = 224;

const FIELDS: [Field; 3] = [Field::Complex, Field::Real, Field::Rational];

/// Invariant factor lists `d1 | d2 | ... ` with product at most `max`.
fn abelian_invariants(max: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, prod: u32, max: u32, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = last.max(2);
        while prod * d <= max {
            if d % last == 0 {
                prefix.push(d);
                extend(prefix, prod * d, max, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max, &mut out);
    out
}

fn abelian_expr(inv: &[u32]) -> String {
    if inv.is_empty() {
        return "C1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < inv.len() {
        let j = inv[i..].iter().take_while(|&&d| d == inv[i]).count();
        parts.push(if j == 1 { format!("C{}", inv[i]) } else { format!("C{}^{j}", inv[i]) });
        i += j;
    }
    parts.join(" x ")
}

/// Curated group expressions, canonically ordered by `(order, text)`.
pub fn curated() -> Vec<String> {
    let mut specs: Vec<String> = abelian_invariants(64).iter().map(|v| abelian_expr(v)).collect();
    for s in ["S3", "S4", "A4", "D4", "D6", "Q8"] {
        specs.push(s.into());
    }
    specs.extend((2..=16).map(|m| format!("Dic({m})")));
    for s in [
        "GDic(6;3)",
        "GDic(4,2;2)",
        "GDic(4,2;4)",
        "GDic(4,2;6)",
        "GDic(8;4)",
        "GDic(4,4;2)",
        "GDic(4,4;10)",
        "GDic(12;6)",
        "C4 x Q8",
        "C4 x Q8 x C2",
        "C4 x Q8 x C2^2",
        "Q8 x Q8",
        "Q8 x Q8 x C2",
        "Q8 x Q8 x C2^2",
    ] {
        specs.push(s.into());
    }
    for n in [3, 5, 7, 9, 15, 21] {
        specs.push(format!("Q8 x C{n}"));
        specs.push(format!("Q8 x C2 x C{n}"));
        specs.push(format!("Q8 x C2^2 x C{n}"));
    }
    for s in [
        "PQ(2,3,1,1)",
        "PQ(2,3,1,2)",
        "PQ(2,3,1,3)",
        "PQ(2,5,1,2)",
        "PQ(2,5,2,2)",
        "PQ(2,7,1,1)",
        "PQ(2,11,1,1)",
        "PQ(2,13,1,2)",
        "PQ(3,7,1,1)",
        "PQ(3,13,1,1)",
        "PQ(3,7,1,1) x C2",
        "PQ(2,3,1,1) x C5",
        "PQ(2,3,1,1) x C13",
    ] {
        specs.push(s.into());
    }
    let mut keyed: Vec<(u64, String)> = specs
        .into_iter()
        .filter_map(|s| {
            // entries past the order bound are dropped
            let e = dsl::parse_group_expr(&s).ok()?;
            Some((e.order().ok()?, e.to_string()))
        })
        .filter(|(n, _)| *n <= DEFAULT_MAX_ORDER as u64)
        .collect();
    keyed.sort();
    keyed.dedup();
    keyed.into_iter().map(|(_, s)| s).collect()
}

pub fn curated_up_to(max_order: usize) -> Vec<String> {
    curated()
        .into_iter()
        .filter(|s| dsl::parse_group_expr(s).and_then(|e| e.order()).is_ok_and(|n| n <= max_order as u64))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum EntryError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Nker(#[from] NkerError),
}

/// One analysed catalog group.
pub struct Analyzed {
    pub spec: String,
    pub group: FiniteGroup,
    pub analysis: GroupAnalysis,
    pub millis: u128,
}

impl Analyzed {
    pub fn new(spec: &str) -> Result<Self, EntryError> {
        let start = Instant::now();
        let group = dsl::build_group(spec)?;
        let analysis = GroupAnalysis::new(&group)?;
        Ok(Analyzed { spec: spec.to_string(), group, analysis, millis: start.elapsed().as_millis() })
    }

    /// Reports for C, R, Q and whether any mismatch was detected.
    pub fn reports(&self) -> (Vec<KernelReport>, bool) {
        match cross_check_fields(&self.analysis, &FIELDS) {
            Ok(r) => (r, false),
            Err(NkerError::MismatchDetected(r)) => (*r, true),
            Err(_) => unreachable!("cross_check_fields only reports mismatches"),
        }
    }
}

/// Analyses every expression on `jobs` threads, keeping input order.
pub fn analyze_all(specs: &[String], jobs: usize) -> Vec<Result<Analyzed, EntryError>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| specs.par_iter().map(|s| Analyzed::new(s)).collect())
}

pub struct EntryRecord {
    pub json: Value,
    pub mismatch: bool,
    pub unresolved_rational: usize,
}

fn fingerprint(a: &Analyzed) -> Value {
    let g = &a.group;
    let cd = a.analysis.table.class_data();
    json!({
        "order": g.order(),
        "exponent": g.exponent(),
        "classes": cd.len(),
        "class_sizes": cd.sizes,
        "degrees": a.analysis.table.degrees(),
        "center": g.center().order(),
        "derived": g.derived_subgroup().order(),
    })
}

fn verdict_summary(a: &Analyzed) -> Value {
    let mut out = serde_json::Map::new();
    for f in FIELDS {
        let count = |v: Verdict| a.analysis.verdicts.iter().filter(|s| s.verdict(f) == v).count();
        out.insert(
            f.to_string(),
            json!({ "yes": count(Verdict::Yes), "no": count(Verdict::No), "unknown": count(Verdict::Unknown) }),
        );
    }
    Value::Object(out)
}

pub fn record(a: &Analyzed) -> EntryRecord {
    let (reports, mismatch) = a.reports();
    let orth = a.analysis.table.check_orthogonality().map_err(|e| e.to_string());
    let json = json!({
        "v": SCHEMA_VERSION,
        "spec": a.spec,
        "status": if mismatch { "mismatch" } else { "ok" },
        "fingerprint": fingerprint(a),
        "r_of_g": crate::nker::subgroup_json(&a.analysis.r_of_g),
        "reports": reports.iter().map(KernelReport::to_json).collect::<Vec<_>>(),
        "verdicts": verdict_summary(a),
        "checks": { "orthogonality": orth.err().unwrap_or_else(|| "ok".into()) },
        "timing_ms": a.millis,
    });
    EntryRecord { json, mismatch, unresolved_rational: a.analysis.unresolved(Field::Rational) }
}

pub fn error_record(spec: &str, err: &EntryError) -> Value {
    json!({ "v": SCHEMA_VERSION, "spec": spec, "status": "error", "error": err.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_counts() {
        // number of abelian groups of order n, summed over n <= 16
        let inv = abelian_invariants(16);
        assert_eq!(inv.len(), 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3 + 2 + 1 + 1 + 2 + 1 + 1 + 1 + 5);
        assert_eq!(abelian_expr(&[2, 2, 4]), "C2^2 x C4");
        assert_eq!(abelian_expr(&[]), "C1");
    }

    #[test]
    fn curated_shape() {
        let c = curated();
        assert!(c.len() >= 60);
        for s in ["Q8", "Dic(3)", "C4 x Q8", "Q8 x Q8", "PQ(3,7,1,1)", "S4", "Q8 x C21"] {
            assert!(c.contains(&s.to_string()), "{s}");
        }
        let small = curated_up_to(24);
        assert!(small.contains(&"Dic(3)".to_string()));
        assert!(!small.contains(&"C4 x Q8".to_string()));
    }
}
