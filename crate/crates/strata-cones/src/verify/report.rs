//! Verification report types and their canonical JSON serialization.
//!
//! Reports are deterministic: identical inputs produce byte-identical
//! JSON regardless of worker count, because cases are assembled in
//! canonical enumeration order and all maps serialize with sorted keys.

use num::bigint::BigInt;
use serde_json::{json, Value};

/// Outcome of a single verification case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseStatus {
    Pass,
    Fail,
    Skip,
}

impl CaseStatus {
    fn as_str(self) -> &'static str {
        match self {
            CaseStatus::Pass => "pass",
            CaseStatus::Fail => "fail",
            CaseStatus::Skip => "skip",
        }
    }
}

/// One verified case: a context label, its status, and optionally a
/// reproducible certificate (for failures and skip reasons) or an
/// oracle readout (extra computed values recorded for the record).
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub ctx: String,
    pub status: CaseStatus,
    pub certificate: Option<String>,
    pub oracle: Option<Value>,
}

impl CaseResult {
    pub fn pass(ctx: String, oracle: Option<Value>) -> CaseResult {
        CaseResult {
            ctx,
            status: CaseStatus::Pass,
            certificate: None,
            oracle,
        }
    }

    pub fn fail(ctx: String, certificate: String) -> CaseResult {
        CaseResult {
            ctx,
            status: CaseStatus::Fail,
            certificate: Some(certificate),
            oracle: None,
        }
    }

    pub fn skip(ctx: String, reason: String) -> CaseResult {
        CaseResult {
            ctx,
            status: CaseStatus::Skip,
            certificate: Some(reason),
            oracle: None,
        }
    }
}

/// A ledger entry recording a printed value that the computation
/// contradicts (or a convention the implementation fixes).  Entries do
/// not fail a run; they are part of the deliverable.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub location: String,
    pub paper_value: String,
    pub computed_value: String,
    pub quote: String,
}

/// Aggregated result of one verification suite.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: String,
    pub max_n: usize,
    pub primes: Vec<BigInt>,
    pub cases: Vec<CaseResult>,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerificationReport {
    pub fn pass_count(&self) -> usize {
        self.count(CaseStatus::Pass)
    }

    pub fn fail_count(&self) -> usize {
        self.count(CaseStatus::Fail)
    }

    pub fn skip_count(&self) -> usize {
        self.count(CaseStatus::Skip)
    }

    fn count(&self, status: CaseStatus) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    /// A report passes when no case failed; skipped cases and ledger
    /// entries are expected content.
    pub fn passed(&self) -> bool {
        self.fail_count() == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "params": {
                "max_n": self.max_n,
                "primes": decimal_strings(&self.primes),
            },
            "cases": self.cases.iter().map(case_json).collect::<Vec<_>>(),
            "summary": {
                "pass": self.pass_count(),
                "fail": self.fail_count(),
                "skipped": self.skip_count(),
            },
            "discrepancies": self
                .discrepancies
                .iter()
                .map(discrepancy_json)
                .collect::<Vec<_>>(),
        })
    }
}

/// Wraps several suite reports into the aggregate "all" report.
pub fn aggregate_to_json(max_n: usize, primes: &[BigInt], reports: &[VerificationReport]) -> Value {
    let (mut pass, mut fail, mut skipped) = (0, 0, 0);
    for r in reports {
        pass += r.pass_count();
        fail += r.fail_count();
        skipped += r.skip_count();
    }
    json!({
        "suite": "all",
        "params": {
            "max_n": max_n,
            "primes": decimal_strings(primes),
        },
        "suites": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
        "summary": {
            "pass": pass,
            "fail": fail,
            "skipped": skipped,
        },
    })
}

fn decimal_strings(primes: &[BigInt]) -> Vec<String> {
    primes.iter().map(BigInt::to_string).collect()
}

fn case_json(c: &CaseResult) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("ctx".into(), Value::String(c.ctx.clone()));
    obj.insert("status".into(), Value::String(c.status.as_str().into()));
    if let Some(cert) = &c.certificate {
        obj.insert("certificate".into(), Value::String(cert.clone()));
    }
    if let Some(oracle) = &c.oracle {
        obj.insert("oracle".into(), oracle.clone());
    }
    Value::Object(obj)
}

fn discrepancy_json(d: &Discrepancy) -> Value {
    json!({
        "location": d.location,
        "paper_value": d.paper_value,
        "computed_value": d.computed_value,
        "quote": d.quote,
    })
}
