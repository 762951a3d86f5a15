//! Verification suites, one per acceptance criterion. Every suite
//! recomputes its quantities from raw data and reports a pass/fail line.

mod curves;
mod exact;
mod sample;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

/// `(name, criterion)` for every suite, in criterion order.
pub const SUITES: [(&str, u8); 12] = [
    ("detectinf", 1),
    ("inftycase", 2),
    ("p1oracle", 3),
    ("nesting", 4),
    ("thickness", 5),
    ("amenability", 6),
    ("folner-p1", 7),
    ("pmonotone", 8),
    ("qiinv", 9),
    ("subgroup", 10),
    ("folnerpairs", 11),
    ("coarea", 12),
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub criterion: u8,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    /// Named measured constants.
    pub measured: Vec<(String, f64)>,
    /// Failure descriptions (capped) and remarks.
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} [{}] {}: {} checks, {} failed",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.suite,
            self.checks,
            self.failures
        );
        for (k, v) in &self.measured {
            let _ = write!(s, "; {k}={v:.6e}");
        }
        let _ = write!(s, " ({:.1}s)", self.seconds);
        s
    }
}

/// Accumulates checks for one suite.
pub(crate) struct Tally {
    suite: &'static str,
    criterion: u8,
    checks: usize,
    failures: usize,
    measured: Vec<(String, f64)>,
    notes: Vec<String>,
    started: Instant,
    budget: Option<Duration>,
}

const MAX_NOTES: usize = 12;

impl Tally {
    pub fn new(suite: &'static str) -> Self {
        let criterion = SUITES.iter().find(|s| s.0 == suite).map_or(0, |s| s.1);
        Self {
            suite,
            criterion,
            checks: 0,
            failures: 0,
            measured: Vec::new(),
            notes: Vec::new(),
            started: Instant::now(),
            budget: None,
        }
    }

    /// A wall-clock limit that is itself a checked condition.
    pub fn with_budget(mut self, limit: Duration) -> Self {
        self.budget = Some(limit);
        self
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < MAX_NOTES {
                self.notes.push(what());
            }
        }
    }

    pub fn measure(&mut self, key: impl Into<String>, value: f64) {
        self.measured.push((key.into(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn finish(mut self) -> SuiteReport {
        let elapsed = self.started.elapsed();
        if let Some(limit) = self.budget {
            let secs = elapsed.as_secs_f64();
            self.check(elapsed <= limit, || format!("runtime {secs:.1}s exceeds {:.0}s", limit.as_secs_f64()));
        }
        SuiteReport {
            suite: self.suite,
            criterion: self.criterion,
            passed: self.failures == 0 && self.checks > 0,
            checks: self.checks,
            failures: self.failures,
            measured: self.measured,
            notes: self.notes,
            seconds: elapsed.as_secs_f64(),
        }
    }
}

/// Suite names accepted by [`run_suite`], including `all`.
pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|s| s.0).chain(std::iter::once("all"))
}

/// Runs one suite, or every suite for `all`. `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64) -> Option<Vec<SuiteReport>> {
    if name == "all" {
        return Some(SUITES.iter().map(|s| run_one(s.0, seed).expect("listed suite")).collect());
    }
    run_one(name, seed).map(|r| vec![r])
}

fn run_one(name: &str, seed: u64) -> Option<SuiteReport> {
    let report = match name {
        "detectinf" => exact::detectinf(),
        "inftycase" => exact::inftycase(seed),
        "p1oracle" => exact::p1oracle(seed),
        "nesting" => exact::nesting(seed),
        "thickness" => exact::thickness(seed),
        "coarea" => exact::coarea(seed),
        "amenability" => curves::amenability(seed),
        "folner-p1" => curves::folner_p1(),
        "pmonotone" => curves::pmonotone(),
        "qiinv" => curves::qiinv(seed),
        "subgroup" => curves::subgroup(seed),
        "folnerpairs" => curves::folnerpairs(),
        _ => return None,
    };
    Some(report)
}
