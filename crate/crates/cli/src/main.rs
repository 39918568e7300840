use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knotlg::alexander::{self, Alexander};
use knotlg::families::{self, FamilyError, FamilySpec};
use knotlg::lgcore::{self, LgError, RMatrixData, RMATRIX_SHA256, RMATRIX_TABLE};
use knotlg::poly2::Laurent2;
use knotlg::verify::{self, CheckKind, CheckOptions, Presentation};
use knotlg::BraidWord;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SCALAR: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_SELFTEST: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Links-Gould invariant of braid closures.
#[derive(Debug, Parser)]
#[command(name = "knotlg", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the state sum and table processing.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Compute the full partial trace and require it to be scalar.
    #[arg(long, global = true)]
    verify_scalar: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// LG of a braid closure, e.g. "2: 1 1 1".
    Lg {
        braid: String,
        /// Also print the antidiagonal/diagonal specializations and the Burau Alexander polynomial.
        #[arg(long)]
        evaluations: bool,
    },
    /// Normalized Alexander polynomial of a braid closure.
    Alexander { braid: String },
    /// Span of LG for a braid ("3: 1 -2 1 -2" or "braid:...") or a family spec.
    Span { input: String },
    /// Closed-form LG of a family member: twist:n, 2bridge:b1,...,bm, pretzel:p,q,r.
    Family { spec: String },
    /// Run the verification checks on a knot table.
    Check {
        /// CSV table; omit together with --golden to use the bundled table.
        table: Option<PathBuf>,
        #[arg(long, conflicts_with = "table")]
        golden: bool,
        /// Comma-separated subset of checks.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Write the JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify the braiding data and coefficient formulas.
    Selftest {
        /// Alternative braiding table (skips the checksum).
        #[arg(long)]
        rmatrix: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<LgError> for Failure {
    fn from(e: LgError) -> Self {
        let code = match e {
            LgError::ScalarViolation { .. } => EXIT_SCALAR,
            LgError::TooManyStrands(_) => EXIT_UNSUPPORTED,
            LgError::DimensionMismatch { .. } => EXIT_INPUT,
            _ => EXIT_SELFTEST,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        let code = match e {
            FamilyError::Syntax { .. } => EXIT_INPUT,
            FamilyError::Unsupported(_) | FamilyError::NotAKnot(..) => EXIT_UNSUPPORTED,
            _ => EXIT_CHECK_FAILED,
        };
        Failure::new(code, e.to_string())
    }
}

/// Rendered result; a nonzero code still prints the report.
struct Output {
    value: Value,
    text: String,
    code: u8,
}

type Outcome = Result<Output, Failure>;

fn done(value: Value, text: String) -> Outcome {
    Ok(Output { value, text, code: 0 })
}

fn parse_braid(s: &str) -> Result<BraidWord, Failure> {
    let s = s.trim();
    s.strip_prefix("braid:").unwrap_or(s).parse().map_err(|e: knotlg::braid::BraidError| Failure::new(EXIT_INPUT, e.to_string()))
}

fn parse_presentation(s: &str) -> Result<Presentation, Failure> {
    if s.trim_start().starts_with(|c: char| c.is_ascii_digit()) {
        return parse_braid(s).map(Presentation::Braid);
    }
    s.parse().map_err(|e: String| Failure::new(EXIT_INPUT, e))
}

fn span_value(p: &Laurent2) -> Value {
    p.span().map_or(Value::Null, Value::from)
}

fn span_text(p: &Laurent2) -> String {
    p.span().map_or_else(|_| "undefined (zero polynomial)".to_string(), |s| s.to_string())
}

fn alexander_json(a: &Alexander) -> Value {
    json!({ "poly": a.poly.to_string(), "centered": a.centered, "breadth": alexander::breadth(a) })
}

fn cmd_lg(braid: &str, evaluations: bool, verify_scalar: bool) -> Outcome {
    let b = parse_braid(braid)?;
    let lg = lgcore::lg_invariant(&b, verify_scalar)?;
    let mut value = json!({
        "braid": b.to_string(),
        "components": b.components(),
        "lg": lg.to_string(),
        "span": span_value(&lg),
    });
    let mut text = format!("LG = {lg}\nspan = {}\n", span_text(&lg));
    if evaluations {
        let delta = alexander::alexander_closure(&b).map_err(|e| Failure::new(EXIT_CHECK_FAILED, e.to_string()))?;
        let check = alexander::evaluation_check(&lg, &delta);
        let holds = check.holds(b.components());
        value["antidiag"] = json!(lg.antidiag().to_string());
        value["diag"] = json!(lg.diag().to_string());
        value["alexander"] = alexander_json(&delta);
        value["evaluation_check"] = json!({ "antidiag": check.antidiag, "diag": check.diag, "holds": holds });
        text.push_str(&format!(
            "LG(t0, -1/t0) = {}\nLG(t0, 1/t0) = {}\nAlexander = {}\nevaluations agree: {holds}\n",
            lg.antidiag(),
            lg.diag(),
            delta.poly
        ));
    }
    done(value, text)
}

fn cmd_alexander(braid: &str) -> Outcome {
    let b = parse_braid(braid)?;
    let a = alexander::alexander_closure(&b).map_err(|e| Failure::new(EXIT_CHECK_FAILED, e.to_string()))?;
    let mut text = format!("Alexander = {}\n", a.poly);
    if !a.centered {
        text.push_str("note: odd breadth, not centered\n");
    }
    done(json!({ "braid": b.to_string(), "components": b.components(), "alexander": alexander_json(&a) }), text)
}

fn cmd_span(input: &str, verify_scalar: bool) -> Outcome {
    let lg = match parse_presentation(input)? {
        Presentation::Braid(b) => lgcore::lg_invariant(&b, verify_scalar)?,
        Presentation::Family(s) => s.lg()?,
    };
    done(json!({ "input": input.trim(), "span": span_value(&lg) }), format!("{}\n", span_text(&lg)))
}

fn cmd_family(spec: &str) -> Outcome {
    let spec: FamilySpec = spec.parse()?;
    let lg = spec.lg()?;
    let genus = spec.genus();
    let mut value = json!({ "spec": spec.to_string(), "lg": lg.to_string(), "span": span_value(&lg) });
    let mut text = format!("LG = {lg}\nspan = {}\n", span_text(&lg));
    match genus {
        Ok(g) => {
            value["genus"] = json!(g);
            text.push_str(&format!("g = {}, mu = {}\n", g.g, g.mu));
            if let Some(n) = g.normalization {
                let c = n.normalized;
                text.push_str(&format!("normalized to pretzel:{},{},{} (case {})\n", c.p, c.q, c.r, n.case));
            }
        }
        Err(e) => {
            value["genus"] = Value::Null;
            text.push_str(&format!("genus unavailable: {e}\n"));
        }
    }
    done(value, text)
}

fn cmd_check(table: Option<PathBuf>, golden: bool, checks: &[String], output: Option<PathBuf>, verify_scalar: bool) -> Outcome {
    let mut opts = CheckOptions { verify_scalar, ..CheckOptions::default() };
    if !checks.is_empty() {
        opts.checks = checks
            .iter()
            .map(|c| c.parse::<CheckKind>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    }
    let report = match (table, golden) {
        (Some(path), _) => verify::run_table(&path, &opts, output.as_deref()).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?,
        (None, true) => {
            let report = verify::run_records(&verify::golden_records(), &opts);
            if let Some(out) = &output {
                std::fs::write(out, report.to_json() + "\n").map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;
            }
            report
        }
        (None, false) => return Err(Failure::new(EXIT_INPUT, "give a table path or --golden")),
    };
    let mut text = String::new();
    for r in &report.records {
        let status = if r.hard_failures() > 0 { "FAIL" } else { "ok" };
        text.push_str(&format!("{status:4} {}  span {}\n", r.name, r.span.map_or("-".to_string(), |s| s.to_string())));
        if let Some(e) = &r.error {
            text.push_str(&format!("     error: {e}\n"));
        }
        for c in r.checks.iter().filter(|c| c.hard || c.status == verify::Status::Strict) {
            text.push_str(&format!("     {} {}: {}\n", c.check.name(), c.status.name(), c.detail));
        }
    }
    text.push_str(&format!("{} records, {} hard failures\n", report.summary.records, report.summary.hard_failures));
    let value = serde_json::to_value(&report).expect("report serializes");
    let code = if report.has_hard_failures() { EXIT_CHECK_FAILED } else { 0 };
    Ok(Output { value, text, code })
}

fn cmd_selftest(rmatrix: Option<PathBuf>) -> Outcome {
    let (label, text_table) = match &rmatrix {
        Some(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?,
        ),
        None => ("bundled".to_string(), RMATRIX_TABLE.to_string()),
    };
    let mut steps: Vec<Value> = Vec::new();
    let mut text = format!("braiding table: {label}\n");
    let mut failed: Vec<String> = Vec::new();
    let mut step = |name: &str, ok: bool, detail: String, steps: &mut Vec<Value>, text: &mut String| {
        steps.push(json!({ "check": name, "holds": ok, "detail": detail }));
        text.push_str(&format!("{} {name}: {detail}\n", if ok { "pass" } else { "FAIL" }));
        if !ok {
            failed.push(name.to_string());
        }
    };

    if rmatrix.is_none() {
        let found = lgcore::sha256_hex(&text_table);
        step("checksum", found == RMATRIX_SHA256, found, &mut steps, &mut text);
    }
    let (pos, neg) = lgcore::parse_table(&text_table).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    for r in lgcore::identity_suite(&pos, &neg) {
        step(serde_json::to_value(r.identity).unwrap().as_str().unwrap_or("identity"), r.holds, r.detail, &mut steps, &mut text);
    }
    match RMatrixData::from_table(&text_table) {
        Ok(data) => {
            let correction = serde_json::to_value(data.correction()).expect("serializes");
            step("correction", true, format!("applied {}", correction.as_str().unwrap_or("?")), &mut steps, &mut text);
            let m = data.markov_property_check();
            step("markov", m.holds(), format!("{m:?}"), &mut steps, &mut text);
        }
        Err(e) => step("load", false, e.to_string(), &mut steps, &mut text),
    }
    let recurrence = (-4..=6).all(families::half_twist_recurrence_holds);
    step("coefficient_recurrence", recurrence, "half-twist coefficients for n in -4..=9".into(), &mut steps, &mut text);
    if rmatrix.is_none() {
        match lgcore::chirality() {
            Ok(c) => step("chirality", true, format!("{c:?}"), &mut steps, &mut text),
            Err(e) => step("chirality", false, e.to_string(), &mut steps, &mut text),
        }
    }
    let value = json!({ "table": label, "passed": failed.is_empty(), "checks": steps });
    if !failed.is_empty() {
        text.push_str(&format!("violated: {}\n", failed.join(", ")));
    }
    let code = if failed.is_empty() { 0 } else { EXIT_SELFTEST };
    Ok(Output { value, text, code })
}

fn emit(format: Format, value: &Value, text: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializes")),
        Format::Text => print!("{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .expect("thread pool is configured once");
    }
    let vs = cli.verify_scalar;
    let result = match cli.command {
        Command::Lg { braid, evaluations } => cmd_lg(&braid, evaluations, vs),
        Command::Alexander { braid } => cmd_alexander(&braid),
        Command::Span { input } => cmd_span(&input, vs),
        Command::Family { spec } => cmd_family(&spec),
        Command::Check { table, golden, checks, output } => cmd_check(table, golden, &checks, output, vs),
        Command::Selftest { rmatrix } => cmd_selftest(rmatrix),
    };
    match result {
        Ok(out) => {
            emit(cli.format, &out.value, &out.text);
            ExitCode::from(out.code)
        }
        Err(Failure { code, message }) => {
            match cli.format {
                Format::Json => println!("{}", json!({ "error": message, "exit_code": code })),
                Format::Text => eprintln!("error: {message}"),
            }
            ExitCode::from(code)
        }
    }
}
