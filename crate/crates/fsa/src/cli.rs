//! Command dispatch: analyze, synthesize, fuzz, examples.
//!
//! Exit codes: 0 all requested properties hold (or command succeeded),
//! 1 at least one property fails / synthesis preconditions violated,
//! 2 input or usage error, 3 internal dual-path mismatch.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::deciders::{
    decide_both, Options, Property, PropertyVerdict, SystemQuadruple, Tolerances,
};
use crate::harness::{cross_validate, SizeBounds};
use crate::ratlin::RationalMatrix;
use crate::report::{
    self, rat_from_string, FuzzReport, ReportDocument, SynthesisReport, VerdictReport,
};
use crate::synth::gsp_synthesize;
use crate::{DecideError, SynthError};

#[derive(Parser)]
#[command(name = "fsa", about = "Functional system property analysis", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide functional properties of a system file along both paths.
    Analyze {
        system: PathBuf,
        /// Comma-separated subset of fc,fs,ifc,ifs,fo,fd,toc.
        #[arg(long, value_delimiter = ',')]
        properties: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        /// Relative singular-value threshold for the numeric path.
        #[arg(long)]
        rank_tol: Option<f64>,
        /// Stability boundary: Re(lambda) >= -stab_tol counts as unstable.
        #[arg(long)]
        stab_tol: Option<f64>,
        /// Record every per-level rank test, not just the terminal ones.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Construct and verify the augmentation matrices R1, R2.
    Synthesize {
        system: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[arg(long)]
        stab_tol: Option<f64>,
    },
    /// Cross-validate both decision paths on random systems.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
    /// Write the six worked-example system files to a directory.
    Examples {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Deserialize)]
struct SystemFile {
    #[serde(rename = "A")]
    a: Vec<Vec<serde_json::Value>>,
    #[serde(rename = "B")]
    b: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(rename = "C")]
    c: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(rename = "F")]
    f: Vec<Vec<serde_json::Value>>,
    name: Option<String>,
    #[allow(dead_code)]
    notes: Option<String>,
}

fn parse_matrix(rows: &[Vec<serde_json::Value>], which: &str) -> Result<RationalMatrix, String> {
    if rows.is_empty() {
        return Err(format!("{which}: empty matrix"));
    }
    let cols = rows[0].len();
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(format!(
                "{which}: row {i} has {} entries, expected {cols}",
                row.len()
            ));
        }
        let mut parsed = Vec::with_capacity(cols);
        for (j, v) in row.iter().enumerate() {
            let r = match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|k| crate::ratlin::rat(k))
                    .ok_or_else(|| format!("{which}[{i}][{j}]: use a string for non-integers")),
                serde_json::Value::String(s) => rat_from_string(s)
                    .ok_or_else(|| format!("{which}[{i}][{j}]: cannot parse {s:?} as a rational")),
                other => Err(format!("{which}[{i}][{j}]: unsupported entry {other}")),
            }?;
            parsed.push(r);
        }
        out.push(parsed);
    }
    Ok(RationalMatrix::from_rows(out))
}

fn load_system(path: &PathBuf) -> Result<(SystemQuadruple, Option<String>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: SystemFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let a = parse_matrix(&file.a, "A")?;
    let b = file.b.as_deref().map(|m| parse_matrix(m, "B")).transpose()?;
    let c = file.c.as_deref().map(|m| parse_matrix(m, "C")).transpose()?;
    let f = parse_matrix(&file.f, "F")?;
    let sys = SystemQuadruple::new(a, b, c, f).map_err(|e| e.to_string())?;
    Ok((sys, file.name))
}

fn tolerances(rank_tol: Option<f64>, stab_tol: Option<f64>, sys: &SystemQuadruple) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = rank_tol {
        tol.eps_rel = t;
    }
    if let Some(t) = stab_tol {
        tol.stab_tol = t;
    }
    if (rank_tol.is_some() || stab_tol.is_some())
        && crate::spectra::eigenvalues(&sys.a).iter().all(|e| e.is_exact())
    {
        eprintln!("warning: tolerance flags have no effect on a fully exact spectrum");
    }
    tol
}

fn print_verdict_text(v: &VerdictReport) {
    println!(
        "{:4} [{}] {}",
        v.property,
        v.path,
        if v.holds { "holds" } else { "FAILS" }
    );
    for c in &v.certificates {
        if c.vacuous {
            continue;
        }
        let ev = match &c.eigenvalue {
            Some(report::EigenvalueRepr::Exact(s)) => format!("lambda={s}"),
            Some(report::EigenvalueRepr::Numeric { re, im }) => format!("lambda={re}+{im}i"),
            None => "global".to_string(),
        };
        println!("     {} {}", ev, c.relation);
    }
    for r in &v.ranks_checked {
        println!("     rank: {} -> {} vs {}", r.description, r.lhs, r.rhs);
    }
}

fn cmd_analyze(
    system: PathBuf,
    properties: Vec<String>,
    format: ReportFormat,
    rank_tol: Option<f64>,
    stab_tol: Option<f64>,
    diagnostics: bool,
) -> i32 {
    let (sys, name) = match load_system(&system) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let requested: Vec<Property> = if properties.is_empty() {
        Property::ALL
            .into_iter()
            .filter(|p| {
                if p.needs_c() {
                    sys.c.is_some()
                } else {
                    sys.b.is_some()
                }
            })
            .collect()
    } else {
        let mut out = Vec::new();
        for s in &properties {
            match Property::parse(s.trim()) {
                Some(p) => out.push(p),
                None => {
                    eprintln!("error: unknown property {s:?}");
                    return 2;
                }
            }
        }
        out
    };
    if requested.is_empty() {
        eprintln!("error: no decidable properties for the given matrices");
        return 2;
    }
    let tol = tolerances(rank_tol, stab_tol, &sys);
    let opts = Options { diagnostics };

    let mut doc = ReportDocument::new(name);
    let mut all_hold = true;
    for p in requested {
        match decide_both(&sys, p, &tol, &opts) {
            Ok((oracle, chain)) => {
                all_hold &= oracle.holds;
                doc.verdicts.push(report::verdict_report(&oracle));
                doc.verdicts.push(report::verdict_report(&chain));
            }
            Err(DecideError::InconsistencyDetected { property }) => {
                eprintln!("internal error: dual-path mismatch for {property}");
                return 3;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    match format {
        ReportFormat::Json => println!("{}", doc.to_json()),
        ReportFormat::Text => {
            for v in &doc.verdicts {
                print_verdict_text(v);
            }
        }
    }
    if all_hold {
        0
    } else {
        1
    }
}

fn print_failed_property(label: &str, verdicts: &[PropertyVerdict]) {
    eprintln!("synthesis precondition failed: {label}");
    for v in verdicts {
        eprintln!("  ({} certificates recorded)", v.certificates.len());
    }
}

fn cmd_synthesize(
    system: PathBuf,
    format: ReportFormat,
    rank_tol: Option<f64>,
    stab_tol: Option<f64>,
) -> i32 {
    let (sys, name) = match load_system(&system) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if sys.b.is_none() || sys.c.is_none() {
        eprintln!("error: synthesis needs A, B, C and F");
        return 2;
    }
    let tol = tolerances(rank_tol, stab_tol, &sys);
    let out = match gsp_synthesize(&sys, &tol) {
        Ok(out) => out,
        Err(e @ (SynthError::NotIFC { .. } | SynthError::NotFO { .. })) => {
            print_failed_property(&e.to_string(), &[]);
            return 1;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut doc = ReportDocument::new(name);
    doc.synthesis = Some(report::synthesis_report(&out));
    match format {
        ReportFormat::Json => println!("{}", doc.to_json()),
        ReportFormat::Text => print_synthesis_text(doc.synthesis.as_ref().unwrap()),
    }
    if out.controller_conditions_ok && out.observer_conditions_ok {
        0
    } else {
        3
    }
}

fn print_synthesis_text(s: &SynthesisReport) {
    println!("d = {}, observable dimension h = {}", s.d, s.h);
    println!("R1 = {:?}", s.r1);
    println!("R2 = {:?}", s.r2);
    println!(
        "controller conditions: {}, observer conditions: {}, asymptotic variant: {}",
        s.controller_conditions_ok, s.observer_conditions_ok, s.asymptotic_ok
    );
}

fn cmd_fuzz(count: usize, seed: u64, max_n: usize, format: ReportFormat) -> i32 {
    let bounds = SizeBounds {
        max_n,
        ..SizeBounds::default()
    };
    let rep = cross_validate(count, &bounds, seed);
    let fr: FuzzReport = report::fuzz_report(&rep);
    match format {
        ReportFormat::Json => {
            let mut doc = ReportDocument::new(None);
            doc.fuzz = Some(fr.clone());
            println!("{}", doc.to_json());
        }
        ReportFormat::Text => {
            println!(
                "trials: {}, skipped: {}, mismatches: {}, lattice violations: {}",
                fr.trials,
                fr.skipped,
                fr.mismatches.len(),
                fr.violations.len()
            );
            for m in &fr.mismatches {
                println!(
                    "  trial {} {}: oracle={} chain={}",
                    m.trial, m.property, m.oracle, m.chain
                );
            }
            for v in &fr.violations {
                println!("  trial {} lattice: {}", v.trial, v.description);
            }
        }
    }
    if fr.clean {
        0
    } else {
        1
    }
}

fn cmd_examples(dir: PathBuf) -> i32 {
    if let Err(e) = fs::create_dir_all(&dir) {
        eprintln!("error: {}: {e}", dir.display());
        return 2;
    }
    for (name, body) in EXAMPLE_FILES {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, body) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
        println!("wrote {}", path.display());
    }
    0
}

const EXAMPLE_FILES: &[(&str, &str)] = &[
    (
        "example1.json",
        r#"{
  "name": "example1",
  "A": [[4, 0, -2, 7], [1, 2, 0, 2], [-1, 0, 4, -5], [-1, 1, 1, -1]],
  "B": [[2], [1], [-1], [-1]],
  "F": [[1, 2, 1, 2]]
}
"#,
    ),
    (
        "example2.json",
        r#"{
  "name": "example2",
  "A": [[0, 1], [0, 0]],
  "B": [[1], [0]],
  "F": [[1, 0]]
}
"#,
    ),
    (
        "example3.json",
        r#"{
  "name": "example3",
  "A": [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
  "B": [[0], [1], [0], [0]],
  "C": [[1, 0, 0, 0]],
  "F": [[1, 0, 0, 0]]
}
"#,
    ),
    (
        "example4.json",
        r#"{
  "name": "example4",
  "A": [[5, -50, 59, 64], [2, -29, 32, 36], [-4, 54, -66, -72], [5, -67, 79, 87]],
  "B": [[-4], [-2], [4], [-5]],
  "F": [[0, 1, 1, 0]]
}
"#,
    ),
    (
        "example5.json",
        r#"{
  "name": "example5",
  "A": [[5, 0, 1, 4], [1, 2, 0, 2], [-2, 1, 2, -3], [-1, 0, 0, 0]],
  "C": [[1, 2, 2, 0]],
  "F": [[1, 2, 1, 2]]
}
"#,
    ),
    (
        "example6.json",
        r#"{
  "name": "example6",
  "A": [[4, -4, 2, -5], [1, 1, 1, -1], [-1, 3, 1, 4], [-1, 3, -1, 5]],
  "B": [[1], [0], [0], [0]],
  "F": [[1, 3, 2, 1]]
}
"#,
    ),
];

/// Parses argv and runs the requested command; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap uses 0 for --help/--version, 2 otherwise; keep that.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Cmd::Analyze {
            system,
            properties,
            report,
            rank_tol,
            stab_tol,
            diagnostics,
        } => cmd_analyze(system, properties, report, rank_tol, stab_tol, diagnostics),
        Cmd::Synthesize {
            system,
            report,
            rank_tol,
            stab_tol,
        } => cmd_synthesize(system, report, rank_tol, stab_tol),
        Cmd::Fuzz {
            count,
            seed,
            max_n,
            report,
        } => cmd_fuzz(count, seed, max_n, report),
        Cmd::Examples { dir } => cmd_examples(dir),
    }
}
