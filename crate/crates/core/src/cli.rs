//! The `mubs` command line.
//!
//! Every command renders a complete document into a string so that the
//! binary, the tests and the determinism checks share one code path.
//! Exit codes: 0 on success, 1 when a verification fails, 2 for usage or
//! configuration errors.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::gf::{prime_power, FieldError, GaloisField};
use crate::mub::{
    mub_family, verify_basis_covariance, verify_eigenstates, verify_spectral_resolution,
    verify_unbiasedness, wf_equivalence_check, Amplitudes, MubFamily,
};
use crate::pauli::{
    class_structure_check, trace_orthogonality_check, u_group_law_check, u_hermitian_check,
    u_order_check, EvenSqrtReading, PhaseConvention, DEFAULT_DENSE_CAP,
};
use crate::report::CheckReport;
use crate::ringlab::{ring_report, RingError, RING_CAP};
use crate::tomo::round_trip;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable overriding the default dense cap.
pub const DENSE_CAP_ENV: &str = "MUBS_DENSE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "mubs",
    version,
    about = "Mutually unbiased bases in prime power dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field and mod-N operation tables.
    Field(FieldArgs),
    /// The full family of N+1 bases as exact phase exponents.
    Mubs(MubsArgs),
    /// Run every exact and numerical identity check.
    Verify(VerifyArgs),
    /// Tomography round trips on seeded random density matrices.
    Tomo(TomoArgs),
    /// Commuting classes and eigenbases over Z_N.
    Ring(RingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    NextDigitWrap,
    NextDigitOmit,
    AllHigherDigits,
}

impl From<Reading> for EvenSqrtReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::NextDigitWrap => EvenSqrtReading::NextDigitWrap,
            Reading::NextDigitOmit => EvenSqrtReading::NextDigitOmit,
            Reading::AllHigherDigits => EvenSqrtReading::AllHigherDigits,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DimArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub m: Option<u32>,
    /// Dimension; factored into p^m, or checked against --p/--m.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub dim: DimArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    /// Phase choice k: relabels every non-computational basis by k.
    #[arg(long = "phase-k", default_value_t = 0)]
    pub phase_k: u32,
    /// Square-root convention for p = 2.
    #[arg(long, value_enum, default_value_t = Reading::AllHigherDigits)]
    pub even_reading: Reading,
}

#[derive(Debug, Clone, Args)]
pub struct MubsArgs {
    #[command(flatten)]
    pub dim: DimArgs,
    #[command(flatten)]
    pub phase: PhaseArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub dim: DimArgs,
    #[command(flatten)]
    pub phase: PhaseArgs,
    /// Tolerance for the dense floating-point cross-checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Largest N for dense matrix checks; defaults to $MUBS_DENSE_CAP or 64.
    #[arg(long)]
    pub dense_cap: Option<u32>,
    /// Perturb one phase of the family before verifying (negative control).
    #[arg(long)]
    pub corrupt: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TomoArgs {
    #[command(flatten)]
    pub dim: DimArgs,
    /// First seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn config(message: impl Into<String>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: message.into(),
            code: EXIT_CONFIG,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) if e.use_stderr() => Outcome::config(e.to_string()),
        Err(e) => Outcome::ok(e.to_string()),
    }
}

pub fn execute(command: Command) -> Outcome {
    match command {
        Command::Field(a) => cmd_field(&a),
        Command::Mubs(a) => cmd_mubs(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Tomo(a) => cmd_tomo(&a),
        Command::Ring(a) => cmd_ring(&a),
    }
}

fn resolve_field(dim: &DimArgs) -> Result<GaloisField, String> {
    let (p, m) = match (dim.p, dim.m, dim.n) {
        (Some(p), m, n) => {
            let m = m.unwrap_or(1);
            if let Some(n) = n {
                if p.checked_pow(m) != Some(n) {
                    return Err(format!("N = {n} does not equal p^m = {p}^{m}"));
                }
            }
            (p, m)
        }
        (None, None, Some(n)) => {
            prime_power(n).ok_or_else(|| format!("N = {n} is not a prime power"))?
        }
        (None, Some(_), _) => return Err("--m requires --p".into()),
        (None, None, None) => return Err("give --p [--m] or --n".into()),
    };
    GaloisField::new(p, m).map_err(|e| e.to_string())
}

fn convention(f: &GaloisField, phase: &PhaseArgs) -> Result<PhaseConvention, String> {
    let shift = f
        .element(phase.phase_k)
        .map_err(|e| format!("--phase-k: {e}"))?;
    Ok(PhaseConvention {
        shift,
        even_reading: phase.even_reading.into(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn cmd_field(args: &FieldArgs) -> Outcome {
    let f = match resolve_field(&args.dim) {
        Ok(f) => f,
        Err(e) => return Outcome::config(e),
    };
    match args.dim.format {
        Format::Csv => Outcome::ok(f.export_tables("csv").expect("csv is supported")),
        Format::Json => Outcome::ok(f.export_tables("json").expect("json is supported")),
        Format::Pretty => {
            let d = f.descriptor();
            let mut out = format!(
                "GF({}^{}), N = {}, polynomial coefficients {:?}\n\n",
                d.p, d.m, d.n, d.poly
            );
            out.push_str(&f.tables().to_csv());
            Outcome::ok(out)
        }
    }
}

pub fn cmd_mubs(args: &MubsArgs) -> Outcome {
    let f = match resolve_field(&args.dim) {
        Ok(f) => f,
        Err(e) => return Outcome::config(e),
    };
    let conv = match convention(&f, &args.phase) {
        Ok(c) => c,
        Err(e) => return Outcome::config(e),
    };
    let fam = mub_family(&f, conv);
    Outcome::ok(match args.dim.format {
        Format::Json => to_json(&fam.to_json()),
        Format::Csv => fam.unbiasedness_csv(),
        Format::Pretty => pretty_family(&fam),
    })
}

fn pretty_family(fam: &MubFamily<'_>) -> String {
    let f = fam.field();
    let mut out = format!(
        "{} bases in dimension {}; amplitudes are ζ^t/√N with ζ = exp(iπ/{})\n",
        fam.bases().len(),
        f.order(),
        f.p()
    );
    for (i, basis) in fam.bases().iter().enumerate() {
        let _ = writeln!(out, "basis {i}");
        for s in basis {
            match &s.amplitudes {
                Amplitudes::Delta(k) => {
                    let _ = writeln!(out, "  e_{} = |{k}⟩", s.index);
                }
                Amplitudes::Phases(e) => {
                    let t: Vec<u32> = e.iter().map(|x| x.t()).collect();
                    let _ = writeln!(out, "  e_{} : t = {t:?}", s.index);
                }
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct CheckSummary {
    name: String,
    status: &'static str,
    checked: u64,
    violations: u64,
    counterexamples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl CheckSummary {
    fn from_report(r: CheckReport) -> Self {
        CheckSummary {
            status: if r.passed() { "pass" } else { "fail" },
            name: r.name,
            checked: r.checked,
            violations: r.violations,
            counterexamples: r.counterexamples,
            detail: None,
        }
    }

    fn skipped(name: &str, why: String) -> Self {
        CheckSummary {
            name: name.into(),
            status: "skipped",
            checked: 0,
            violations: 0,
            counterexamples: Vec::new(),
            detail: Some(why),
        }
    }

    fn verdict(name: &str, ok: bool, checked: u64, detail: String) -> Self {
        CheckSummary {
            name: name.into(),
            status: if ok { "pass" } else { "fail" },
            checked,
            violations: u64::from(!ok),
            counterexamples: Vec::new(),
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyDocument {
    p: u32,
    m: u32,
    #[serde(rename = "N")]
    n: u32,
    poly: Vec<u32>,
    convention: PhaseConvention,
    corrupted: bool,
    dense_cap: u32,
    tolerance: f64,
    passed: bool,
    checks: Vec<CheckSummary>,
}

fn dense_cap(explicit: Option<u32>) -> Result<u32, String> {
    if let Some(c) = explicit {
        return Ok(c);
    }
    match std::env::var(DENSE_CAP_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("{DENSE_CAP_ENV}={v} is not an integer")),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let f = match resolve_field(&args.dim) {
        Ok(f) => f,
        Err(e) => return Outcome::config(e),
    };
    let conv = match convention(&f, &args.phase) {
        Ok(c) => c,
        Err(e) => return Outcome::config(e),
    };
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Outcome::config("--tolerance must be positive");
    }
    let cap = match dense_cap(args.dense_cap) {
        Ok(c) => c,
        Err(e) => return Outcome::config(e),
    };
    let mut fam = mub_family(&f, conv);
    if args.corrupt {
        fam.perturb_phase(1, f.zero(), f.one(), 1);
    }
    let checks = verification_checks(&f, &fam, conv, cap, args.tolerance);
    let passed = checks.iter().all(|c| c.status != "fail");
    let doc = VerifyDocument {
        p: f.p(),
        m: f.m(),
        n: f.order(),
        poly: f.poly().to_vec(),
        convention: conv,
        corrupted: args.corrupt,
        dense_cap: cap,
        tolerance: args.tolerance,
        passed,
        checks,
    };
    let stdout = match args.dim.format {
        Format::Pretty => {
            let mut s = String::new();
            for c in &doc.checks {
                let _ = writeln!(
                    s,
                    "{:<28} {:<8} {} checked, {} violations",
                    c.name, c.status, c.checked, c.violations
                );
            }
            let _ = writeln!(s, "overall: {}", if passed { "pass" } else { "fail" });
            s
        }
        _ => to_json(&doc),
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if passed { EXIT_OK } else { EXIT_FAILED },
    }
}

fn verification_checks(
    f: &GaloisField,
    fam: &MubFamily<'_>,
    conv: PhaseConvention,
    cap: u32,
    tol: f64,
) -> Vec<CheckSummary> {
    let n = f.order();
    let mut out = vec![
        CheckSummary::from_report(f.axiom_check()),
        CheckSummary::from_report(f.characteristic_check()),
        CheckSummary::from_report(f.character_check()),
        CheckSummary::from_report(f.frobenius_check()),
    ];
    match f.bilinear_relabel_check() {
        Ok(r) => out.push(CheckSummary::from_report(r)),
        Err(FieldError::EvenCharacteristic) | Err(FieldError::DivisionByZero) => out.push(
            CheckSummary::skipped("bilinear_relabel", "needs an odd characteristic".into()),
        ),
        Err(e) => out.push(CheckSummary::skipped("bilinear_relabel", e.to_string())),
    }
    out.push(CheckSummary::from_report(class_structure_check(f)));
    out.push(CheckSummary::from_report(trace_orthogonality_check(f)));
    let mut law = CheckReport::new("u_group_law");
    for i in 0..=n {
        law.merge(u_group_law_check(f, i, conv).expect("i ≤ N"));
    }
    out.push(CheckSummary::from_report(law));
    out.push(CheckSummary::from_report(u_order_check(f, conv)));
    if f.p() == 2 {
        out.push(CheckSummary::from_report(u_hermitian_check(f, conv)));
    }
    out.push(CheckSummary::from_report(verify_unbiasedness(fam)));
    out.push(CheckSummary::from_report(verify_eigenstates(fam)));
    if n <= cap {
        let r = verify_spectral_resolution(fam, cap, tol).expect("within cap");
        out.push(CheckSummary::from_report(r));
    } else {
        out.push(CheckSummary::skipped(
            "spectral_resolution",
            format!("N = {n} above dense cap {cap}"),
        ));
    }
    if f.p() == 2 {
        out.push(CheckSummary::skipped(
            "wootters_fields",
            "needs an odd characteristic".into(),
        ));
    } else {
        let r = wf_equivalence_check(fam).expect("odd p");
        let name = if f.m() == 1 {
            "wootters_fields_ivanovic"
        } else {
            "wootters_fields"
        };
        out.push(CheckSummary::verdict(
            name,
            r.passed(),
            n as u64,
            format!(
                "{} of {n} bases matched, bijective: {}",
                r.matches.len(),
                r.bijective
            ),
        ));
    }
    if n <= cap {
        let mut ok = true;
        let mut disagreements = 0;
        for i in 1..=n {
            let r = verify_basis_covariance(fam, i, cap, tol.max(1e-9)).expect("within cap");
            ok &= r.passed();
            disagreements += r.formula_disagreements;
        }
        out.push(CheckSummary::verdict(
            "covariance",
            ok,
            n as u64,
            format!("{disagreements} images differ from (m, ⊖n⊕c⊙m)"),
        ));
    } else {
        out.push(CheckSummary::skipped(
            "covariance",
            format!("N = {n} above dense cap {cap}"),
        ));
    }
    out
}

pub fn cmd_tomo(args: &TomoArgs) -> Outcome {
    let f = match resolve_field(&args.dim) {
        Ok(f) => f,
        Err(e) => return Outcome::config(e),
    };
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Outcome::config("--tolerance must be positive");
    }
    let fam = mub_family(&f, PhaseConvention::default());
    let seeds: Vec<u64> = (args.seed..args.seed.saturating_add(args.count)).collect();
    let report = match round_trip(&fam, &seeds) {
        Ok(r) => r,
        Err(e) => return Outcome::config(e.to_string()),
    };
    let passed = report.passed(args.tolerance);
    let stdout = match args.dim.format {
        Format::Pretty => format!(
            "N = {}, {} seeds\n  Weyl decomposition  {:e}\n  MUB inversion       {:e}\n  class expectations  {:e}\n  path disagreement   {:e}\n",
            report.n,
            seeds.len(),
            report.max_pauli_error,
            report.max_mub_error,
            report.max_weyl_path_error,
            report.max_path_disagreement
        ),
        _ => to_json(&report),
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if passed { EXIT_OK } else { EXIT_FAILED },
    }
}

pub fn cmd_ring(args: &RingArgs) -> Outcome {
    match ring_report(args.n) {
        Ok(r) => Outcome::ok(match args.format {
            Format::Pretty => {
                let mut s = format!(
                    "Z_{}: {} maximal commuting classes (sizes {:?}), {} shared operators\n",
                    r.n,
                    r.class_count,
                    r.sizes,
                    r.shared_operators.len()
                );
                let _ = writeln!(
                    s,
                    "max deviation from 1/N: {:e}",
                    r.unbiasedness.max_deviation
                );
                s
            }
            _ => to_json(&r),
        }),
        Err(e @ (RingError::CapExceeded { .. } | RingError::TooSmall { .. })) => Outcome::config(
            format!("{e} (enumeration is limited to 2 ≤ N ≤ {RING_CAP})"),
        ),
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: e.to_string(),
            code: EXIT_FAILED,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("mubs").chain(args.iter().copied()))
    }

    #[test]
    fn dimension_resolution() {
        let dim = |p, m, n| DimArgs {
            p,
            m,
            n,
            format: Format::Json,
        };
        assert_eq!(resolve_field(&dim(None, None, Some(9))).unwrap().order(), 9);
        assert_eq!(resolve_field(&dim(Some(5), None, None)).unwrap().order(), 5);
        assert!(resolve_field(&dim(Some(2), Some(2), Some(8))).is_err());
        assert!(resolve_field(&dim(None, None, Some(6))).is_err());
        assert!(resolve_field(&dim(None, Some(2), None)).is_err());
        assert!(resolve_field(&dim(Some(6), Some(1), None)).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            run_args(&["field", "--p", "6", "--m", "1"]).code,
            EXIT_CONFIG
        );
        assert_eq!(run_args(&["bogus"]).code, EXIT_CONFIG);
        assert_eq!(
            run_args(&["verify", "--p", "3", "--tolerance", "0"]).code,
            EXIT_CONFIG
        );
        assert_eq!(
            run_args(&["mubs", "--p", "2", "--m", "2", "--phase-k", "4"]).code,
            EXIT_CONFIG
        );
        assert_eq!(run_args(&["ring", "--n", "13"]).code, EXIT_CONFIG);
        assert_eq!(
            run_args(&["tomo", "--p", "2", "--m", "2", "--n", "8"]).code,
            EXIT_CONFIG
        );
    }

    #[test]
    fn help_is_not_an_error() {
        let out = run_args(&["--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("verify"));
    }

    #[test]
    fn field_csv_for_gf4() {
        let out = run_args(&["field", "--p", "2", "--m", "2", "--format", "csv"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out
            .stdout
            .starts_with("field_mul,0,1,2,3\n0,0,0,0,0\n1,0,1,2,3\n2,0,2,3,1\n3,0,3,1,2\n"));
    }

    #[test]
    fn verify_and_negative_control() {
        let good = run_args(&["verify", "--p", "3"]);
        assert_eq!(good.code, EXIT_OK, "{}", good.stdout);
        let bad = run_args(&["verify", "--p", "3", "--corrupt"]);
        assert_eq!(bad.code, EXIT_FAILED);
        let v: serde_json::Value = serde_json::from_str(&bad.stdout).unwrap();
        assert_eq!(v["passed"], false);
    }

    #[test]
    fn dense_checks_skip_above_cap() {
        let out = run_args(&["verify", "--p", "2", "--m", "2", "--dense-cap", "2"]);
        assert_eq!(out.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let statuses: Vec<_> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["status"] == "skipped")
            .map(|c| c["name"].as_str().unwrap().to_string())
            .collect();
        assert!(statuses.contains(&"spectral_resolution".to_string()));
        assert!(statuses.contains(&"covariance".to_string()));
    }

    #[test]
    fn phase_shift_relabels_family() {
        let base: serde_json::Value =
            serde_json::from_str(&run_args(&["mubs", "--p", "2", "--m", "2"]).stdout).unwrap();
        let moved: serde_json::Value = serde_json::from_str(
            &run_args(&["mubs", "--p", "2", "--m", "2", "--phase-k", "1"]).stdout,
        )
        .unwrap();
        for i in 1..=4 {
            for k in 0..4usize {
                // shift 1 is its own negative, so state k moves to k ⊕ 1
                let from = base["bases"][i]["states"][k]["exponents"].clone();
                let to = moved["bases"][i]["states"][k ^ 1]["exponents"].clone();
                assert_eq!(from, to);
            }
        }
        assert_eq!(base["bases"][0], moved["bases"][0]);
    }
}
