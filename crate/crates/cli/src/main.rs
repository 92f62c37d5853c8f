//! `prufer` — exact computations on Z(2^∞), T-sequence windows, and the
//! radical of the topology generated by `{d_k}`.
//!
//! Exit codes: 0 success/pass, 1 certificate failure, 2 usage or resource error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prufer::construction::{certify, RadicalTarget, SequenceSpec};
use prufer::duality::{radical_at_level, tail_profile, Character};
use prufer::tsequence::{
    check_torsion_intersection, enumerate_window, search_m0, COMBINATION_CAP_ENV,
    DEFAULT_COMBINATION_CAP,
};
use prufer::verify::{self, Profile};
use prufer::{canonicalize, Element, Sequence, WindowParams};

#[derive(Parser)]
#[command(name = "prufer", version, about = "Exact arithmetic on the Prüfer 2-group and its T-sequence topologies")]
struct Cli {
    /// Emit a JSON report (sorted keys, elements as `a/2^n` literals).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Seq {
    E,
    B,
    D,
}

impl Seq {
    fn name(self) -> &'static str {
        match self {
            Seq::E => "e",
            Seq::B => "b",
            Seq::D => "d",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form Σ σ_{2n} e_{2n}, σ ∈ {-1, 0, 1, 2}.
    Canon {
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Order of an element, as 2^k.
    Order {
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Distinct values of the window A(l, m) truncated at index M.
    Aset {
        #[arg(long, value_enum)]
        seq: Seq,
        /// Target x, required for b and d.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u64,
        #[arg(long = "M")]
        max_index: u64,
    },
    /// Is A[2^n] ∩ A(l, m) trivial? Without --m, searches for the first such m.
    Tcheck {
        #[arg(long, value_enum)]
        seq: Seq,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "M")]
        max_index: u64,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Terms of a sequence with their orders.
    Construct {
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value = "d")]
        seq: Seq,
        #[arg(long, default_value_t = 8)]
        count: u64,
    },
    /// Full window certificate bundle for {d_k} at (l, n), truncated at M.
    Certify {
        #[arg(long)]
        x: String,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "M")]
        max_index: u64,
    },
    /// Radical ∩ ⟨e_N⟩ by exhaustive kernel intersection.
    Radical {
        #[arg(long)]
        x: String,
        /// Inclusive range `a..b` of multiples m.
        #[arg(long, default_value = "-16..16", allow_hyphen_values = true)]
        m_range: String,
        #[arg(long)]
        level: u32,
    },
    /// ‖χ(a_k)‖ along a sequence.
    Profile {
        /// `m:<int>` or `padic:<residue>@<precision>`.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, value_enum, default_value = "d")]
        seq: Seq,
        #[arg(long)]
        x: Option<String>,
        #[arg(long = "K")]
        max_k: u64,
    },
    /// Run the acceptance suite and print one line per criterion.
    VerifyPaper {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
    },
}

enum Failure {
    Lib(prufer::Error),
    Usage(String),
}

impl From<prufer::Error> for Failure {
    fn from(e: prufer::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn diagnostic(&self) -> String {
        use prufer::Error::*;
        match self {
            Failure::Usage(msg) => format!("usage error: {msg}"),
            Failure::Lib(e @ (InvalidLiteral(_) | InvalidCharacter(_) | InvalidCombination(_))) => {
                format!("malformed input: {e}")
            }
            Failure::Lib(e @ ResourceCap { .. }) => {
                format!("resource cap exceeded: {e} (raise {COMBINATION_CAP_ENV} to allow it)")
            }
            Failure::Lib(e) => format!("parameter out of range: {e}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Info,
}

struct Report {
    command: &'static str,
    params: Value,
    result: Value,
    truncation: Value,
    verdict: Verdict,
    text: String,
}

impl Report {
    fn info(command: &'static str, params: Value, result: Value, text: String) -> Self {
        Report {
            command,
            params,
            result,
            truncation: Value::Null,
            verdict: Verdict::Info,
            text,
        }
    }

    fn envelope(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "truncation": self.truncation,
            "verdict": match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Info => "info",
            },
        })
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn element(lit: &str) -> Outcome<Element> {
    Ok(lit.trim().parse::<Element>()?)
}

fn target(lit: &str) -> Outcome<RadicalTarget> {
    Ok(RadicalTarget::new(element(lit)?)?)
}

fn sequence(seq: Seq, x: Option<&str>) -> Outcome<SequenceSpec> {
    match (seq, x) {
        (Seq::E, _) => Ok(SequenceSpec::e(2)),
        (Seq::B, Some(x)) => Ok(SequenceSpec::b(target(x)?)),
        (Seq::D, Some(x)) => Ok(SequenceSpec::d(target(x)?)),
        (s, None) => Err(Failure::Usage(format!("--x is required for --seq {}", s.name()))),
    }
}

fn cap() -> Outcome<u128> {
    match std::env::var(COMBINATION_CAP_ENV) {
        Err(_) => Ok(DEFAULT_COMBINATION_CAP),
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!("{COMBINATION_CAP_ENV}={v:?} is not a nonnegative integer"))
        }),
    }
}

fn parse_range(s: &str) -> Outcome<RangeInclusive<i64>> {
    let bad = || Failure::Usage(format!("range `{s}` is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn canon(literal: &str) -> Outcome<Report> {
    let x = element(literal)?;
    let cf = canonicalize(&x)?;
    Ok(Report::info("canon", json!({ "literal": x }), to_value(&cf), cf.to_string()))
}

fn order(literal: &str) -> Outcome<Report> {
    let x = element(literal)?;
    let o = x.order();
    Ok(Report::info("order", json!({ "literal": x }), to_value(&o), o.to_string()))
}

fn aset(seq: Seq, x: Option<&str>, l: u32, m: u64, max_index: u64) -> Outcome<Report> {
    let spec = sequence(seq, x)?;
    let w = WindowParams::new(l, m, max_index, 0)?;
    let window = enumerate_window(&spec, &w, cap()?)?;
    let mut text = format!(
        "A(l={l}, m={m}) over {} truncated at M={max_index}: {} distinct values from {} combinations\n",
        seq.name(),
        window.len(),
        window.combinations_enumerated
    );
    let values: Vec<Value> = window
        .entries
        .iter()
        .map(|(v, c)| {
            let _ = writeln!(text, "{v}\t{c}");
            json!({ "value": v, "combination": c })
        })
        .collect();
    Ok(Report {
        command: "aset",
        params: json!({ "seq": seq.name(), "x": x, "l": l, "m": m, "M": max_index }),
        result: json!({
            "size": window.len(),
            "combinations_enumerated": window.combinations_enumerated.to_string(),
            "values": values,
        }),
        truncation: json!({ "l": l, "m": m, "M": max_index }),
        verdict: Verdict::Info,
        text: text.trim_end().to_string(),
    })
}

fn tcheck(seq: Seq, x: Option<&str>, l: u32, n: u32, max_index: u64, m: Option<u64>) -> Outcome<Report> {
    let spec = sequence(seq, x)?;
    let cap = cap()?;
    let params = json!({ "seq": seq.name(), "x": x, "l": l, "n": n, "M": max_index, "m": m });
    match m {
        Some(m) => {
            let w = WindowParams::new(l, m, max_index, n)?;
            let r = check_torsion_intersection(&spec, &w, cap)?;
            let mut text = format!(
                "A[2^{n}] ∩ A(l={l}, m={m})_{} on indices <= {max_index}: {} ({} values)",
                seq.name(),
                if r.empty { "trivial" } else { "nontrivial" },
                r.window_size
            );
            for wit in &r.witnesses {
                let _ = write!(text, "\n  witness {} = {}", wit.value, wit.combination);
            }
            Ok(Report {
                command: "tcheck",
                params,
                truncation: to_value(&r.params),
                verdict: if r.empty { Verdict::Pass } else { Verdict::Fail },
                result: to_value(&r),
                text,
            })
        }
        None => {
            let r = search_m0(&spec, l, n, max_index, max_index, cap)?;
            let mut text = String::new();
            for (m, empty) in &r.scanned {
                let _ = writeln!(text, "m={m}\t{}", if *empty { "trivial" } else { "nontrivial" });
            }
            let ok = r.m0.is_some() && r.monotone;
            let _ = write!(
                text,
                "m0 = {} (monotone through M={max_index}: {})\nnote: {}",
                r.m0.map_or("none".to_string(), |m| m.to_string()),
                r.monotone,
                r.note
            );
            Ok(Report {
                command: "tcheck",
                params,
                result: to_value(&r),
                truncation: json!({ "l": l, "n_level": n, "M": max_index }),
                verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                text,
            })
        }
    }
}

fn construct(x: &str, seq: Seq, count: u64) -> Outcome<Report> {
    let spec = sequence(seq, Some(x))?;
    let mut text = String::new();
    let terms = (1..=count)
        .map(|k| {
            let t = spec.term(k)?;
            let _ = writeln!(text, "{}_{k}\t{t}\torder {}", seq.name(), t.order());
            Ok(json!({ "k": k, "value": t, "order": t.order() }))
        })
        .collect::<prufer::Result<Vec<_>>>()?;
    Ok(Report::info(
        "construct",
        json!({ "x": x, "seq": seq.name(), "count": count }),
        json!({ "terms": terms }),
        text.trim_end().to_string(),
    ))
}

fn certify_cmd(x: &str, l: u32, n: u32, max_index: u64) -> Outcome<Report> {
    let t = target(x)?;
    let b = certify(&t, l, n, max_index, cap()?)?;
    let mut text = format!("target x = {}, k0 = {}, l = {l}, n = {n}, M = {max_index}\n", t.x(), t.k0());
    let m0 = |s: Option<u64>| s.map_or("none".to_string(), |m| m.to_string());
    let _ = writeln!(text, "M1 (e windows) = {}, M2 (b windows) = {}", m0(b.search_e.m0), m0(b.search_b.m0));
    match &b.m0 {
        Some(c) => {
            let _ = writeln!(text, "m0 = max(M1, M2, 4l+n+k0 = {}) = {}", c.structural, c.m0);
        }
        None => {
            let _ = writeln!(text, "m0 not found within M");
        }
    }
    let laws = b.order_laws.iter().filter(|c| c.holds).count();
    let _ = writeln!(text, "order law o(b_k) = 2^(2k^3): {laws}/{} hold", b.order_laws.len());
    let _ = writeln!(text, "gap growth: {}", b.gap_growth.ok);
    let trivial = |ws: &[prufer::IntersectionReport]| ws.iter().filter(|w| w.empty).count();
    let _ = writeln!(text, "e/b windows trivial: {}/{}", trivial(&b.windows), b.windows.len());
    let _ = writeln!(text, "d windows trivial: {}/{}", trivial(&b.d_windows), b.d_windows.len());
    if let Some(c) = &b.cross_terms {
        let _ = writeln!(text, "cross terms: {} pairs, {} failures", c.pairs_checked, c.failures.len());
    }
    let _ = write!(text, "verdict: {}\nnote: {}", if b.pass { "pass" } else { "fail" }, b.note);
    Ok(Report {
        command: "certify",
        params: json!({ "x": x, "l": l, "n": n, "M": max_index }),
        truncation: json!({ "l": l, "n_level": n, "M": max_index }),
        verdict: if b.pass { Verdict::Pass } else { Verdict::Fail },
        result: to_value(&b),
        text,
    })
}

fn radical(x: &str, m_range: &str, level: u32) -> Outcome<Report> {
    let t = target(x)?;
    let range = parse_range(m_range)?;
    let r = radical_at_level(&t, range.clone(), level)?;
    let text = format!(
        "radical ∩ ⟨e_{level}⟩ over m in {}..{}: ⟨{}⟩ of size {}; equals ⟨{}⟩: {}{}",
        range.start(),
        range.end(),
        r.generator,
        r.subgroup_size,
        t.x(),
        r.equals_target_subgroup,
        if r.degenerate { " (no continuous character in range)" } else { "" }
    );
    Ok(Report {
        command: "radical",
        params: json!({ "x": x, "m_range": [range.start(), range.end()], "level": level }),
        result: to_value(&r),
        truncation: json!({ "level": level, "m_range": [range.start(), range.end()] }),
        verdict: Verdict::Info,
        text,
    })
}

fn profile(chi: &str, seq: Seq, x: Option<&str>, max_k: u64) -> Outcome<Report> {
    let character: Character = chi.parse()?;
    let spec = sequence(seq, x)?;
    let entries = tail_profile(&character, &spec, max_k)?;
    let mut text = String::new();
    for e in &entries {
        let _ = writeln!(text, "k={}\tχ(a_k) = {}\tnorm {}", e.k, e.value.as_element(), e.norm);
    }
    Ok(Report {
        command: "profile",
        params: json!({ "chi": character, "seq": seq.name(), "x": x, "K": max_k }),
        result: json!({ "entries": entries }),
        truncation: json!({ "K": max_k }),
        verdict: Verdict::Info,
        text: text.trim_end().to_string(),
    })
}

fn verify_paper(full: bool, json_mode: bool) -> Report {
    let profile = if full { Profile::Full } else { Profile::Quick };
    let mut results = Vec::new();
    for criterion in verify::CRITERIA {
        let r = criterion(profile);
        if !json_mode {
            emit(&verify::format_line(&r));
        }
        results.push(r);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    Report {
        command: "verify-paper",
        params: json!({ "profile": profile }),
        truncation: Value::Null,
        verdict: if passed == results.len() { Verdict::Pass } else { Verdict::Fail },
        text: format!("{passed}/{} criteria passed", results.len()),
        result: json!({ "criteria": results }),
    }
}

/// Prints a line; a closed pipe (`prufer ... | head`) ends the process quietly.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("prufer: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Outcome<Report> {
    match cli.command {
        Command::Canon { literal } => canon(&literal),
        Command::Order { literal } => order(&literal),
        Command::Aset { seq, x, l, m, max_index } => aset(seq, x.as_deref(), l, m, max_index),
        Command::Tcheck { seq, x, l, n, max_index, m } => tcheck(seq, x.as_deref(), l, n, max_index, m),
        Command::Construct { x, seq, count } => construct(&x, seq, count),
        Command::Certify { x, l, n, max_index } => certify_cmd(&x, l, n, max_index),
        Command::Radical { x, m_range, level } => radical(&x, &m_range, level),
        Command::Profile { chi, seq, x, max_k } => profile(&chi, seq, x.as_deref(), max_k),
        Command::VerifyPaper { quick: _, full } => Ok(verify_paper(full, cli.json)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    match run(cli) {
        Ok(report) => {
            if json_mode {
                let out = serde_json::to_string_pretty(&report.envelope()).expect("JSON values serialize");
                emit(&out);
            } else {
                emit(&report.text);
            }
            match report.verdict {
                Verdict::Fail => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("prufer: {}", f.diagnostic());
            ExitCode::from(2)
        }
    }
}
