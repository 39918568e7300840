//! Knot-table harness: golden comparisons, identity suites and the
//! genus/span, alternating-equality, fiberedness-monicity and sign checks.
//!
//! Conjecture findings (a strict inequality, a monicity quadrant that breaks
//! the fibered/monic correspondence) are reported as data. Hard failures are
//! reserved for things that must never happen with correct data and a
//! correct engine: golden mismatches, identity-suite violations, oracle
//! disagreements, classical-bound violations and component mismatches.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::alexander::{self, Alexander};
use crate::braid::{BraidWord, ComposeMode, MarkovMove, Sign};
use crate::families::{self, FamilySpec};
use crate::lgcore::{self, Chirality};
use crate::poly2::{Laurent1, Laurent2};

/// Form of the genus conjecture checked here: `span LG <= 2(2g + μ - 1)`.
pub const CONJECTURE_FORM: &str = "span(LG) <= 2(2g + mu - 1), equality expected for alternating links";

/// Records with more strands than this skip the identity checks that need
/// an extra strand (stabilization, connected sum, split union).
pub const IDENTITY_STRAND_LIMIT: usize = 5;

pub const TABLE_HEADER: [&str; 8] = [
    "name",
    "presentation",
    "genus",
    "components",
    "alternating",
    "fibered",
    "expected_alexander",
    "expected_lg",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("table row {row}, column {column}: {reason}")]
    Parse { row: usize, column: String, reason: String },
    #[error("cannot read table {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot write report {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Braid(BraidWord),
    Family(FamilySpec),
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Braid(b) => write!(f, "braid:{b}"),
            Presentation::Family(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Presentation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.strip_prefix("braid:") {
            Some(word) => word.parse().map(Presentation::Braid).map_err(|e| e.to_string()),
            None => s.parse().map(Presentation::Family).map_err(|e: families::FamilyError| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    /// First entry is primary; further entries are cross-checked against it.
    pub presentations: Vec<Presentation>,
    pub genus: Option<i64>,
    pub components: usize,
    pub alternating: Option<bool>,
    pub fibered: Option<bool>,
    pub expected_alexander: Option<Laurent1>,
    pub expected_lg: Option<Laurent2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Consistency,
    Golden,
    CrossOracle,
    Identities,
    ClassicalBound,
    GenusBound,
    AlternatingEquality,
    FiberedMonic,
    MonicImplication,
    ParitySign,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Consistency,
        CheckKind::Golden,
        CheckKind::CrossOracle,
        CheckKind::Identities,
        CheckKind::ClassicalBound,
        CheckKind::GenusBound,
        CheckKind::AlternatingEquality,
        CheckKind::FiberedMonic,
        CheckKind::MonicImplication,
        CheckKind::ParitySign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Consistency => "consistency",
            CheckKind::Golden => "golden",
            CheckKind::CrossOracle => "cross_oracle",
            CheckKind::Identities => "identities",
            CheckKind::ClassicalBound => "classical_bound",
            CheckKind::GenusBound => "genus_bound",
            CheckKind::AlternatingEquality => "alternating_equality",
            CheckKind::FiberedMonic => "fibered_monic",
            CheckKind::MonicImplication => "monic_implication",
            CheckKind::ParitySign => "parity_sign",
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Equality,
    Strict,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Equality => "equality",
            Status::Strict => "strict",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: CheckKind,
    pub status: Status,
    /// A failing status that must never occur with correct data.
    pub hard: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(check: CheckKind, status: Status, detail: impl Into<String>) -> Self {
        let hard = status == Status::Fail && check.is_hard();
        CheckOutcome { check, status, hard, detail: detail.into() }
    }

    fn skipped(check: CheckKind, why: &str) -> Self {
        Self::new(check, Status::Skipped, why)
    }
}

impl CheckKind {
    fn is_hard(self) -> bool {
        !matches!(
            self,
            CheckKind::GenusBound | CheckKind::AlternatingEquality | CheckKind::FiberedMonic | CheckKind::ParitySign
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordReport {
    pub name: String,
    pub presentation: String,
    pub components: usize,
    pub genus: Option<i64>,
    pub lg: Option<String>,
    pub span: Option<i64>,
    pub alexander: Option<String>,
    /// `burau` for braid presentations, `lg_antidiag` for family ones.
    pub alexander_source: Option<&'static str>,
    pub breadth: Option<i64>,
    pub lg_monic: Option<bool>,
    pub half_integer: Option<bool>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub checks: Vec<CheckOutcome>,
}

impl RecordReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.hard).count() + usize::from(self.error.is_some())
    }

    pub fn status(&self, check: CheckKind) -> Option<Status> {
        self.checks.iter().find(|c| c.check == check).map(|c| c.status)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub hard_failures: usize,
    pub by_check: BTreeMap<&'static str, BTreeMap<&'static str, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub conjecture_form: &'static str,
    pub chirality: Option<Chirality>,
    pub records: Vec<RecordReport>,
    pub summary: Summary,
}

impl CheckReport {
    pub fn has_hard_failures(&self) -> bool {
        self.summary.hard_failures > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub checks: Vec<CheckKind>,
    pub verify_scalar: bool,
    pub identity_strand_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            checks: CheckKind::ALL.to_vec(),
            verify_scalar: false,
            identity_strand_limit: IDENTITY_STRAND_LIMIT,
        }
    }
}

/// Sign pattern test: coefficients with `i + j` even share one sign, those
/// with `i + j` odd share the opposite sign.
pub fn parity_sign_check(p: &Laurent2) -> bool {
    let mut even_sign = 0i8;
    let mut odd_sign = 0i8;
    for (e, c) in p.terms() {
        let s: i8 = if c.sign() == num_bigint::Sign::Minus { -1 } else { 1 };
        let slot = if (e.i as i64 + e.j as i64).rem_euclid(2) == 0 { &mut even_sign } else { &mut odd_sign };
        if *slot == 0 {
            *slot = s;
        } else if *slot != s {
            return false;
        }
    }
    even_sign == 0 || odd_sign == 0 || even_sign != odd_sign
}

fn parse_bool(row: usize, column: &str, cell: &str) -> Result<Option<bool>, VerifyError> {
    match cell.trim() {
        "" => Ok(None),
        "true" | "yes" | "1" => Ok(Some(true)),
        "false" | "no" | "0" => Ok(Some(false)),
        other => Err(VerifyError::Parse {
            row,
            column: column.into(),
            reason: format!("expected true/false, found {other:?}"),
        }),
    }
}

/// Parses a knot table (CSV with the fixed header).
pub fn parse_table(text: &str) -> Result<Vec<KnotRecord>, VerifyError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| VerifyError::Parse { row: 1, column: "header".into(), reason: e.to_string() })?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Ok(Vec::new());
    }
    if header != TABLE_HEADER {
        return Err(VerifyError::Parse {
            row: 1,
            column: "header".into(),
            reason: format!("expected {}", TABLE_HEADER.join(",")),
        });
    }
    let mut records = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let row = k + 2;
        let rec = rec.map_err(|e| VerifyError::Parse { row, column: "-".into(), reason: e.to_string() })?;
        let cell = |i: usize| rec.get(i).unwrap_or("").trim();
        let err = |i: usize, reason: String| VerifyError::Parse { row, column: TABLE_HEADER[i].into(), reason };
        let name = cell(0).to_string();
        if name.is_empty() {
            return Err(err(0, "name is required".into()));
        }
        let presentations = cell(1)
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<Presentation>().map_err(|e| err(1, e)))
            .collect::<Result<Vec<_>, _>>()?;
        if presentations.is_empty() {
            return Err(err(1, "at least one presentation is required".into()));
        }
        let genus = match cell(2) {
            "" => None,
            g => Some(g.parse::<i64>().ok().filter(|g| *g >= 0).ok_or_else(|| err(2, format!("bad genus {g:?}")))?),
        };
        let components = cell(3)
            .parse::<usize>()
            .ok()
            .filter(|c| *c >= 1)
            .ok_or_else(|| err(3, format!("bad component count {:?}", cell(3))))?;
        let alternating = parse_bool(row, TABLE_HEADER[4], cell(4))?;
        let fibered = parse_bool(row, TABLE_HEADER[5], cell(5))?;
        let expected_alexander = match cell(6) {
            "" => None,
            s => Some(s.parse::<Laurent1>().map_err(|e| err(6, e.to_string()))?),
        };
        let expected_lg = match cell(7) {
            "" => None,
            s => Some(s.parse::<Laurent2>().map_err(|e| err(7, e.to_string()))?),
        };
        records.push(KnotRecord {
            name,
            presentations,
            genus,
            components,
            alternating,
            fibered,
            expected_alexander,
            expected_lg,
        });
    }
    Ok(records)
}

/// Table bundled with the crate: small knots with independently known values.
pub const GOLDEN_TABLE: &str = include_str!("../data/golden.csv");

pub fn golden_records() -> Vec<KnotRecord> {
    parse_table(GOLDEN_TABLE).expect("bundled table parses")
}

fn lg_of(p: &Presentation, verify_scalar: bool) -> Result<Laurent2, String> {
    match p {
        Presentation::Braid(b) => lgcore::lg_invariant(b, verify_scalar).map_err(|e| e.to_string()),
        Presentation::Family(s) => s.lg().map_err(|e| e.to_string()),
    }
}

fn components_of(p: &Presentation) -> Result<usize, String> {
    match p {
        Presentation::Braid(b) => Ok(b.components()),
        Presentation::Family(FamilySpec::TwoBridge(code)) => Ok(if code.len() % 2 == 0 { 1 } else { 2 }),
        Presentation::Family(s) => s.genus().map(|g| g.mu as usize).map_err(|e| e.to_string()),
    }
}

/// Engine value expected for a family value under the recorded chirality.
fn family_as_engine(value: &Laurent2, chirality: Chirality) -> Laurent2 {
    match chirality {
        Chirality::Direct => value.clone(),
        Chirality::Mirrored => value.invert(),
    }
}

fn pass_fail(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Identity suite on one braid: swap symmetry, mirror law, Alexander
/// evaluations, conjugation, and (below the strand limit) stabilization,
/// connected sum with the trefoil and split union with an unknot.
pub fn identity_suite(b: &BraidWord, lg: &Laurent2, delta: &Alexander, opts: &CheckOptions) -> CheckOutcome {
    let mut failures: Vec<String> = Vec::new();
    let mut ran: Vec<&str> = Vec::new();
    let eval = |w: &BraidWord| lgcore::lg_invariant(w, opts.verify_scalar).map_err(|e| e.to_string());
    let mut expect = |label: &'static str, ok: Result<bool, String>| {
        ran.push(label);
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(label.to_string()),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    expect("swap", Ok(lg.swap() == *lg));
    expect("mirror", eval(&b.mirror()).map(|m| m == lg.invert()));
    expect("evaluations", Ok(alexander::evaluation_check(lg, delta).holds(b.components())));
    if b.strands() >= 2 {
        expect("conjugate", b.apply(MarkovMove::Conjugate(1)).map_err(|e| e.to_string()).and_then(|w| eval(&w)).map(|v| v == *lg));
    }
    let skipped_extra = b.strands() > opts.identity_strand_limit;
    if !skipped_extra {
        for sign in [Sign::Positive, Sign::Negative] {
            let w = b.apply(MarkovMove::Stabilize(sign)).expect("stabilization is valid");
            expect("stabilize", eval(&w).map(|v| v == *lg));
        }
        let trefoil = BraidWord::new(2, vec![1, 1, 1]).expect("valid word");
        let t = eval(&trefoil);
        let sum = eval(&b.compose(&trefoil, ComposeMode::ConnectedSum));
        expect("connected_sum", t.and_then(|t| sum.map(|s| s == lg * &t)));
        let split = eval(&b.compose(&BraidWord::identity(1), ComposeMode::SplitUnion));
        expect("split_union", split.map(|v| v.is_zero()));
    }
    let mut detail = format!("ran {}", ran.join(","));
    if skipped_extra {
        detail.push_str(&format!("; extra-strand checks skipped above {} strands", opts.identity_strand_limit));
    }
    if !failures.is_empty() {
        detail = format!("failed {}; {detail}", failures.join(","));
    }
    CheckOutcome::new(CheckKind::Identities, pass_fail(failures.is_empty()), detail)
}

/// `span <= 2(2g + μ - 1)`, reported as equality or strict.
pub fn genus_bound_check(span: i64, genus: i64, components: usize) -> CheckOutcome {
    let bound = 2 * (2 * genus + components as i64 - 1);
    let status = match span.cmp(&bound) {
        std::cmp::Ordering::Equal => Status::Equality,
        std::cmp::Ordering::Less => Status::Strict,
        std::cmp::Ordering::Greater => Status::Fail,
    };
    CheckOutcome::new(CheckKind::GenusBound, status, format!("span {span}, bound {bound}"))
}

pub fn alternating_equality_check(span: i64, genus: i64, components: usize) -> CheckOutcome {
    let bound = 2 * (2 * genus + components as i64 - 1);
    let status = if span == bound { Status::Equality } else { Status::Fail };
    CheckOutcome::new(CheckKind::AlternatingEquality, status, format!("span {span}, 2(2g + mu - 1) = {bound}"))
}

/// Compares the fibered flag with monicity of `LG`.
pub fn fibered_monic_check(fibered: bool, lg_monic: bool) -> CheckOutcome {
    CheckOutcome::new(
        CheckKind::FiberedMonic,
        pass_fail(fibered == lg_monic),
        format!("fibered {fibered}, LG monic {lg_monic}"),
    )
}

/// `LG` monic forces a monic Alexander polynomial.
pub fn monic_implication_check(lg_monic: bool, delta: &Laurent1) -> CheckOutcome {
    let delta_monic = delta.is_monic();
    CheckOutcome::new(
        CheckKind::MonicImplication,
        pass_fail(!lg_monic || delta_monic),
        format!("LG monic {lg_monic}, Alexander leading coefficient +-1: {delta_monic}"),
    )
}

/// Runs the enabled checks on one record.
pub fn check_record(rec: &KnotRecord, opts: &CheckOptions, chirality: Option<Chirality>) -> RecordReport {
    let enabled = |k: CheckKind| opts.checks.contains(&k);
    let primary = &rec.presentations[0];
    let mut report = RecordReport {
        name: rec.name.clone(),
        presentation: rec.presentations.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "),
        components: rec.components,
        genus: rec.genus,
        lg: None,
        span: None,
        alexander: None,
        alexander_source: None,
        breadth: None,
        lg_monic: None,
        half_integer: None,
        warnings: Vec::new(),
        error: None,
        checks: Vec::new(),
    };

    // genus: ingested, else from the family formulas
    let family_genus = match primary {
        Presentation::Family(s) => s.genus().ok(),
        Presentation::Braid(_) => None,
    };
    let genus = rec.genus.or(family_genus.map(|g| g.g));
    report.genus = genus;

    if enabled(CheckKind::Consistency) {
        let mut problems = Vec::new();
        for p in &rec.presentations {
            match components_of(p) {
                Ok(c) if c != rec.components => problems.push(format!("{p} has {c} components, table says {}", rec.components)),
                Ok(_) => {}
                Err(e) => problems.push(format!("{p}: {e}")),
            }
        }
        if let (Some(g), Some(fg)) = (rec.genus, family_genus) {
            if g != fg.g {
                problems.push(format!("table genus {g}, family genus {}", fg.g));
            }
        }
        let detail = if problems.is_empty() { "components and genus data agree".to_string() } else { problems.join("; ") };
        report.checks.push(CheckOutcome::new(CheckKind::Consistency, pass_fail(problems.is_empty()), detail));
    }

    let lg = match lg_of(primary, opts.verify_scalar) {
        Ok(v) => v,
        Err(e) => {
            report.error = Some(format!("cannot evaluate {primary}: {e}"));
            return report;
        }
    };
    let span = lg.span().ok();
    report.lg = Some(lg.to_string());
    report.span = span;
    if let Some(s) = span {
        report.half_integer = Some(s.rem_euclid(4) == 2);
        if s % 2 != 0 {
            report.warnings.push(format!("odd span {s}"));
        }
    }

    let delta = match primary {
        Presentation::Braid(b) => {
            report.alexander_source = Some("burau");
            alexander::alexander_closure(b).ok()
        }
        Presentation::Family(_) => {
            report.alexander_source = Some("lg_antidiag");
            alexander::alexander_from_lg(&lg, rec.components)
        }
    };
    if let Some(d) = &delta {
        report.alexander = Some(d.poly.to_string());
        report.breadth = alexander::breadth(d);
        if !d.centered {
            report.warnings.push("Alexander polynomial has odd breadth and is not centered".into());
        }
    }

    if enabled(CheckKind::Golden) {
        let mut parts = Vec::new();
        let mut ok = true;
        if let Some(want) = &rec.expected_lg {
            let hit = *want == lg;
            ok &= hit;
            parts.push(if hit { "LG matches".to_string() } else { format!("LG expected {want}, computed {lg}") });
        }
        if let Some(want) = &rec.expected_alexander {
            let hit = delta.as_ref().is_some_and(|d| d.poly == *want);
            ok &= hit;
            parts.push(if hit {
                "Alexander matches".to_string()
            } else {
                format!("Alexander expected {want}, computed {}", report.alexander.as_deref().unwrap_or("none"))
            });
        }
        report.checks.push(if parts.is_empty() {
            CheckOutcome::skipped(CheckKind::Golden, "no expected values")
        } else {
            CheckOutcome::new(CheckKind::Golden, pass_fail(ok), parts.join("; "))
        });
    }

    if enabled(CheckKind::CrossOracle) {
        report.checks.push(cross_oracle(rec, &lg, opts, chirality));
    }

    if enabled(CheckKind::Identities) {
        report.checks.push(match (primary, &delta) {
            (Presentation::Braid(b), Some(d)) => identity_suite(b, &lg, d, opts),
            (Presentation::Braid(_), None) => CheckOutcome::new(CheckKind::Identities, Status::Fail, "Alexander polynomial unavailable"),
            (Presentation::Family(_), _) => CheckOutcome::skipped(CheckKind::Identities, "family presentation"),
        });
    }

    let mu = rec.components;
    if enabled(CheckKind::ClassicalBound) {
        report.checks.push(match (genus, span, report.breadth) {
            (Some(g), Some(s), Some(b)) => {
                let top = 2 * g + mu as i64 - 1;
                let ok = b <= top && 2 * b <= s;
                CheckOutcome::new(
                    CheckKind::ClassicalBound,
                    pass_fail(ok),
                    format!("breadth {b} <= {top}; 2 * breadth {} <= span {s}", 2 * b),
                )
            }
            (None, ..) => CheckOutcome::skipped(CheckKind::ClassicalBound, "genus unknown"),
            _ => CheckOutcome::skipped(CheckKind::ClassicalBound, "LG or Alexander polynomial is zero"),
        });
    }

    if enabled(CheckKind::GenusBound) {
        report.checks.push(match (genus, span) {
            (Some(g), Some(s)) => {
                let mut c = genus_bound_check(s, g, mu);
                if let Some(b) = report.breadth {
                    let improves = s > 2 * b;
                    c.detail.push_str(&format!("; 2 * breadth {}; LG sharper than Alexander: {improves}", 2 * b));
                }
                c
            }
            (None, _) => CheckOutcome::skipped(CheckKind::GenusBound, "genus unknown"),
            (_, None) => CheckOutcome::skipped(CheckKind::GenusBound, "LG is zero"),
        });
    }

    if enabled(CheckKind::AlternatingEquality) {
        report.checks.push(match (rec.alternating, genus, span) {
            (Some(true), Some(g), Some(s)) => alternating_equality_check(s, g, mu),
            (Some(true), ..) => CheckOutcome::skipped(CheckKind::AlternatingEquality, "genus or span unavailable"),
            _ => CheckOutcome::skipped(CheckKind::AlternatingEquality, "not flagged alternating"),
        });
    }

    let lg_monic = if mu == 1 { lg.monic_extremes().ok().map(|m| m.monic) } else { None };
    report.lg_monic = lg_monic;
    if enabled(CheckKind::FiberedMonic) {
        report.checks.push(match (rec.fibered, lg_monic) {
            (Some(f), Some(m)) => fibered_monic_check(f, m),
            (None, _) => CheckOutcome::skipped(CheckKind::FiberedMonic, "fibered flag unknown"),
            (_, None) => CheckOutcome::skipped(CheckKind::FiberedMonic, "not a knot or LG is zero"),
        });
    }
    if enabled(CheckKind::MonicImplication) {
        report.checks.push(match (lg_monic, &delta) {
            (Some(m), Some(d)) => monic_implication_check(m, &d.poly),
            _ => CheckOutcome::skipped(CheckKind::MonicImplication, "not a knot or no Alexander polynomial"),
        });
    }
    if enabled(CheckKind::ParitySign) {
        report.checks.push(if rec.alternating == Some(true) && mu == 1 && !lg.is_zero() {
            CheckOutcome::new(CheckKind::ParitySign, pass_fail(parity_sign_check(&lg)), "coefficient signs by parity of i + j")
        } else {
            CheckOutcome::skipped(CheckKind::ParitySign, "only for alternating knots")
        });
    }
    report
}

fn cross_oracle(rec: &KnotRecord, lg: &Laurent2, opts: &CheckOptions, chirality: Option<Chirality>) -> CheckOutcome {
    if rec.presentations.len() < 2 {
        return CheckOutcome::skipped(CheckKind::CrossOracle, "single presentation");
    }
    let Some(chirality) = chirality else {
        return CheckOutcome::new(CheckKind::CrossOracle, Status::Fail, "chirality convention unavailable");
    };
    let as_engine = |p: &Presentation, v: Laurent2| match p {
        Presentation::Braid(_) => v,
        Presentation::Family(_) => family_as_engine(&v, chirality),
    };
    let reference = as_engine(&rec.presentations[0], lg.clone());
    let mut problems = Vec::new();
    for p in &rec.presentations[1..] {
        match lg_of(p, opts.verify_scalar) {
            Ok(v) if as_engine(p, v.clone()) == reference => {}
            Ok(v) => problems.push(format!("{p} gives {v}")),
            Err(e) => problems.push(format!("{p}: {e}")),
        }
    }
    if problems.is_empty() {
        CheckOutcome::new(CheckKind::CrossOracle, Status::Pass, format!("{} presentations agree", rec.presentations.len()))
    } else {
        CheckOutcome::new(CheckKind::CrossOracle, Status::Fail, problems.join("; "))
    }
}

fn summarize(records: &[RecordReport]) -> Summary {
    let mut by_check: BTreeMap<&'static str, BTreeMap<&'static str, usize>> = BTreeMap::new();
    for r in records {
        for c in &r.checks {
            *by_check.entry(c.check.name()).or_default().entry(c.status.name()).or_default() += 1;
        }
    }
    Summary {
        records: records.len(),
        hard_failures: records.iter().map(RecordReport::hard_failures).sum(),
        by_check,
    }
}

/// Checks every record; records run concurrently, the report keeps input order.
pub fn run_records(records: &[KnotRecord], opts: &CheckOptions) -> CheckReport {
    let chirality = if records.is_empty() { None } else { lgcore::chirality().ok() };
    let reports: Vec<RecordReport> = records.par_iter().map(|r| check_record(r, opts, chirality)).collect();
    CheckReport {
        conjecture_form: CONJECTURE_FORM,
        chirality,
        summary: summarize(&reports),
        records: reports,
    }
}

/// Reads a table, checks it, and writes the JSON report to `output` if given.
pub fn run_table(path: &Path, opts: &CheckOptions, output: Option<&Path>) -> Result<CheckReport, VerifyError> {
    let text = std::fs::read_to_string(path).map_err(|source| VerifyError::Io { path: path.display().to_string(), source })?;
    let records = parse_table(&text)?;
    let report = run_records(&records, opts);
    if let Some(out) = output {
        std::fs::write(out, report.to_json() + "\n")
            .map_err(|source| VerifyError::Write { path: out.display().to_string(), source })?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Laurent2 {
        s.parse().unwrap()
    }

    #[test]
    fn parity_sign_examples() {
        assert!(parity_sign_check(&Laurent2::one()));
        assert!(parity_sign_check(&p("t0 + t1")));
        assert!(!parity_sign_check(&p("1 + t0")));
        assert!(parity_sign_check(&p("1 - t0")));
        assert!(!parity_sign_check(&p("1 - t0 - t0*t1")));
        assert!(parity_sign_check(&p("-1 + t0 - t0*t1")));
    }

    #[test]
    fn bound_statuses() {
        assert_eq!(genus_bound_check(4, 1, 1).status, Status::Equality);
        assert_eq!(genus_bound_check(2, 1, 1).status, Status::Strict);
        let over = genus_bound_check(6, 1, 1);
        assert_eq!(over.status, Status::Fail);
        assert!(!over.hard);
        assert_eq!(alternating_equality_check(4, 1, 1).status, Status::Equality);
        assert_eq!(alternating_equality_check(2, 1, 1).status, Status::Fail);
        let t: Laurent1 = "2*t - 3 + 2*t^-1".parse().unwrap();
        let bad = monic_implication_check(true, &t);
        assert_eq!(bad.status, Status::Fail);
        assert!(bad.hard);
        assert_eq!(monic_implication_check(false, &t).status, Status::Pass);
        assert_eq!(fibered_monic_check(false, false).status, Status::Pass);
        assert_eq!(fibered_monic_check(true, false).status, Status::Fail);
    }

    #[test]
    fn table_parsing() {
        let header = TABLE_HEADER.join(",");
        assert!(parse_table("").unwrap().is_empty());
        assert!(parse_table(&format!("{header}\n")).unwrap().is_empty());
        let rows = parse_table(&format!(
            "{header}\ntrefoil,braid:2: 1 1 1; twist:1,1,1,true,true,t - 1 + t^-1,\nu,braid:1:,,1,,,,1\n"
        ))
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].presentations.len(), 2);
        assert_eq!(rows[0].genus, Some(1));
        assert_eq!(rows[0].alternating, Some(true));
        assert_eq!(rows[1].expected_lg, Some(Laurent2::one()));
        assert_eq!(rows[1].fibered, None);

        let bad = parse_table(&format!("{header}\nx,braid:2: 3,,1,,,,\n")).unwrap_err();
        assert!(matches!(bad, VerifyError::Parse { row: 2, ref column, .. } if column == "presentation"), "{bad}");
        let bad = parse_table(&format!("{header}\nx,twist:1,,0,,,,\n")).unwrap_err();
        assert!(matches!(bad, VerifyError::Parse { ref column, .. } if column == "components"));
        let bad = parse_table(&format!("{header}\nx,twist:1,,1,maybe,,,\n")).unwrap_err();
        assert!(matches!(bad, VerifyError::Parse { ref column, .. } if column == "alternating"));
        let bad = parse_table("name,presentation\nx,twist:1\n").unwrap_err();
        assert!(matches!(bad, VerifyError::Parse { row: 1, .. }));
    }

    #[test]
    fn check_names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!("nope".parse::<CheckKind>().is_err());
    }
}
