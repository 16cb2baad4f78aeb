//! `floer-rings`: build the rings, run the verification suites, evaluate adjunction cases.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use floer_core::adjunct::{evaluate, AdjunctionCase, AdjunctionReport, ParityPolicy, Status};
use floer_core::floer::{
    build_floer, split_atlas, verify_gr_structure, verify_ranks, verify_rewriting_degrees, PerturbationProfile,
    PieceReport, DEFAULT_GENUS_CEILING, PRNG_NAME,
};
use floer_core::grcompare::{compare, profile_floer, profile_sympow};
use floer_core::report::{Entry, Timing};
use floer_core::suite::{self, Criterion, SuiteOptions};
use floer_core::sympow::{macdonald_ideal, poincare_pairing_check, verify_presentation};
use floer_core::{Report, Result};

use output::Format;

const THREADS_VAR: &str = "FLOER_RINGS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "floer-rings", version)]
#[command(about = "Exact Floer and Fukaya-Floer rings of a surface times a circle, and the checks built on them")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Include wall-clock timing in the report. Timed reports are not byte-reproducible.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The Floer rings T_{g,k} at t = 0, their local pieces and graded structure.
    RingFloer(RingArgs),
    /// The Fukaya-Floer rings over C[[t]]/t^N, optionally with a seeded perturbation.
    RingFukayaFloer(FukayaArgs),
    /// Cohomology of the symmetric product s^d Sigma_g from the Macdonald relations.
    RingSympow(SympowArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Compare Gr_gamma H_r with Gr_theta H*(s^(g-|r|-1) Sigma).
    HomSymm(HomSymmArgs),
    /// Evaluate adjunction inequalities for one case or a CSV batch.
    Adjunction(AdjunctionArgs),
}

#[derive(Debug, Args, Serialize)]
struct GenusArgs {
    /// Genus of the surface, at least 1.
    #[arg(long)]
    genus: u32,

    /// Allow genus above the default ceiling.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Args, Serialize)]
struct RingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    genus: GenusArgs,

    /// Restrict to one component T_{g,k}.
    #[arg(long)]
    k: Option<u32>,

    /// Restrict to the pieces with this label.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i32>,
}

#[derive(Debug, Args, Serialize)]
struct FukayaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ring: RingArgs,

    /// Truncation order N of C[[t]]/t^N.
    #[arg(long, default_value_t = 4)]
    truncation: usize,

    /// Seed of the perturbation profile; unperturbed when absent.
    #[arg(long)]
    seed: Option<u64>,

    /// Index of the profile within the seeded family.
    #[arg(long, default_value_t = 0)]
    profile: u64,
}

#[derive(Debug, Args, Serialize)]
struct SympowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    genus: GenusArgs,

    /// Degree d of the symmetric product.
    #[arg(long)]
    d: u32,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Suites to run: all, or a comma-separated list of ranks, eigenvalues, local-ranks, graded,
    /// hom-symm, sympow, degrees, perturbation, adjunction.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Run every genus from 1 to this.
    #[arg(long, default_value_t = DEFAULT_GENUS_CEILING)]
    genus_max: u32,

    /// Seed of the perturbation profiles.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Perturbation profiles per genus.
    #[arg(long, default_value_t = 20)]
    profiles: u64,

    /// Truncation order N for the perturbed builds.
    #[arg(long, default_value_t = 4)]
    truncation: usize,

    /// Allow --genus-max above the default ceiling.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Args, Serialize)]
struct HomSymmArgs {
    #[command(flatten)]
    #[serde(flatten)]
    genus: GenusArgs,

    /// Compare one label only.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i32>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Parity {
    Warn,
    Reject,
}

#[derive(Debug, Args, Serialize)]
struct AdjunctionArgs {
    /// CSV of cases with header g,selfInt,oddClass,kDotSigma,dB,dK,l,b1Zero,claimedOrder.
    #[arg(long, conflicts_with_all = ["genus", "self_int", "k_dot_sigma"])]
    batch: Option<PathBuf>,

    /// Genus of the embedded surface.
    #[arg(long, required_unless_present = "batch")]
    genus: Option<u32>,

    /// Self-intersection Sigma.Sigma.
    #[arg(long, required_unless_present = "batch", allow_hyphen_values = true)]
    self_int: Option<i64>,

    /// Sigma is an odd class, required when Sigma.Sigma = 0.
    #[arg(long)]
    odd_class: bool,

    /// K.Sigma for the basic class K.
    #[arg(long, required_unless_present = "batch", allow_hyphen_values = true)]
    k_dot_sigma: Option<i64>,

    /// Degree d(b) of the evaluated element b (theorems A and C).
    #[arg(long)]
    d_b: Option<u32>,

    /// Order of finite type d(K) of the basic class (theorem B).
    #[arg(long)]
    d_k: Option<u32>,

    /// Number l of basis loops of Sigma that vanish in H_1(X) (theorem C).
    #[arg(long)]
    l: Option<u32>,

    /// The four-manifold has b_1 = 0 (theorem B).
    #[arg(long)]
    b1_zero: bool,

    /// Order of finite type to test against the genus bound.
    #[arg(long)]
    claimed_order: Option<u32>,

    /// Odd K.Sigma on the reduced surface: warn, or mark every theorem not applicable.
    #[arg(long, value_enum, default_value_t = Parity::Warn)]
    parity: Parity,
}

/// Invalid options; reported before any computation, exit status 2.
struct Usage(String);

impl From<floer_core::Error> for Usage {
    fn from(e: floer_core::Error) -> Self {
        Usage(e.to_string())
    }
}

fn check_genus(g: u32, allow_large: bool) -> std::result::Result<(), Usage> {
    if g == 0 {
        return Err(Usage("genus must be at least 1".into()));
    }
    if g > DEFAULT_GENUS_CEILING {
        if !allow_large {
            return Err(Usage(format!("genus {g} is above the ceiling {DEFAULT_GENUS_CEILING}; pass --allow-large")));
        }
        eprintln!("warning: genus {g} is above the ceiling {DEFAULT_GENUS_CEILING}; this can take a long time");
    }
    Ok(())
}

fn check_label(g: u32, k: Option<u32>, r: Option<i32>) -> std::result::Result<(), Usage> {
    if let Some(k) = k.filter(|&k| k >= g) {
        return Err(Usage(format!("k = {k} outside 0..{g}")));
    }
    if let Some(r) = r.filter(|r| r.unsigned_abs() >= g - k.unwrap_or(0)) {
        return Err(Usage(format!("r = {r} outside |r| < g - k")));
    }
    Ok(())
}

fn configure_threads() -> std::result::Result<(), Usage> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| Usage(format!("{THREADS_VAR}={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Usage(e.to_string()))
}

fn piece_entry(kind: &str, rep: PieceReport) -> Entry {
    let name = match (rep.k, rep.r) {
        (Some(k), None) => format!("{kind} T_({},{k})", rep.genus),
        (Some(k), Some(r)) => format!("{kind} R_({},{k},{r})", rep.genus),
        (None, r) => format!("{kind} H_{} (g={})", r.unwrap_or(0), rep.genus),
    };
    let checks = rep.checks.clone();
    Entry::from_checks(name, &checks, serde_json::to_value(&rep).expect("report serializes"))
}

fn keep(rep: &PieceReport, k: Option<u32>, r: Option<i32>) -> bool {
    k.is_none_or(|k| rep.k == Some(k)) && r.is_none_or(|r| rep.r == Some(r) || rep.r.is_none())
}

fn ring_entries(g: u32, truncation: Option<usize>, profile: Option<&PerturbationProfile>, a: &RingArgs) -> Result<Vec<Entry>> {
    let atlas = split_atlas(build_floer(g, truncation, profile)?)?;
    let mut out = Vec::new();
    for rep in verify_ranks(&atlas)?.into_iter().filter(|x| keep(x, a.k, a.r)) {
        out.push(piece_entry("ranks", rep));
    }
    for rep in verify_gr_structure(&atlas)?.into_iter().filter(|x| keep(x, a.k, a.r)) {
        out.push(piece_entry("graded", rep));
    }
    let (reps, patterns) = verify_rewriting_degrees(&atlas)?;
    for (rep, pat) in reps.into_iter().zip(patterns).filter(|(x, _)| keep(x, a.k, a.r)) {
        let mut e = piece_entry("rewriting", rep);
        e.data["pattern"] = serde_json::to_value(&pat).expect("pattern serializes");
        out.push(e);
    }
    Ok(out)
}

fn ring_floer(a: &RingArgs) -> std::result::Result<Vec<Entry>, Usage> {
    check_genus(a.genus.genus, a.genus.allow_large)?;
    check_label(a.genus.genus, a.k, a.r)?;
    Ok(ring_entries(a.genus.genus, None, None, a).unwrap_or_else(|e| vec![failure("ring-floer", &e)]))
}

fn ring_fukaya_floer(a: &FukayaArgs) -> std::result::Result<Vec<Entry>, Usage> {
    let g = a.ring.genus.genus;
    check_genus(g, a.ring.genus.allow_large)?;
    check_label(g, a.ring.k, a.ring.r)?;
    if a.truncation == 0 {
        return Err(Usage("truncation must be at least 1".into()));
    }
    let profile = a.seed.map(|s| PerturbationProfile::seeded(g, a.truncation, s, a.profile));
    Ok(ring_entries(g, Some(a.truncation), profile.as_ref(), &a.ring)
        .unwrap_or_else(|e| vec![failure("ring-fukaya-floer", &e)]))
}

fn ring_sympow(a: &SympowArgs) -> std::result::Result<Vec<Entry>, Usage> {
    let g = a.genus.genus;
    check_genus(g, a.genus.allow_large)?;
    let run = || -> Result<Entry> {
        let s = macdonald_ideal(g, a.d)?;
        let rep = verify_presentation(&s)?;
        let mut checks = rep.checks.clone();
        checks.extend(poincare_pairing_check(&s)?);
        let data = json!({
            "genus": g,
            "d": a.d,
            "betti": rep.betti,
            "multiplicities": rep.multiplicities,
            "relations": rep.relations,
            "checks": checks,
        });
        Ok(Entry::from_checks(format!("H*(s^{} Sigma_{g})", a.d), &checks, data))
    };
    Ok(vec![run().unwrap_or_else(|e| failure("ring-sympow", &e))])
}

fn parse_suites(s: &str) -> std::result::Result<Vec<Criterion>, Usage> {
    if s == "all" {
        return Ok(Criterion::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in s.split(',') {
        let c: Criterion = name.trim().parse()?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

fn verify(a: &VerifyArgs) -> std::result::Result<Vec<Entry>, Usage> {
    check_genus(a.genus_max, a.allow_large)?;
    if a.truncation == 0 {
        return Err(Usage("truncation must be at least 1".into()));
    }
    let criteria = parse_suites(&a.suite)?;
    let o = SuiteOptions { genus_max: a.genus_max, seed: a.seed, profiles: a.profiles, truncation: a.truncation };
    Ok(suite::run(&criteria, &o))
}

fn hom_symm(a: &HomSymmArgs) -> std::result::Result<Vec<Entry>, Usage> {
    let g = a.genus.genus;
    check_genus(g, a.genus.allow_large)?;
    check_label(g, None, a.r)?;
    let run = || -> Result<Vec<Entry>> {
        let atlas = split_atlas(build_floer(g, None, None)?)?;
        let labels: Vec<i32> = match a.r {
            Some(r) => vec![r],
            None => (-(g as i32 - 1)..g as i32).collect(),
        };
        let mut out = Vec::new();
        for r in labels {
            let d = g - 1 - r.unsigned_abs();
            let p = profile_floer(&atlas, r)?;
            let q = profile_sympow(&macdonald_ideal(g, d)?)?;
            let cmp = compare(&p, &q);
            let data = json!({"genus": g, "r": r, "d": d, "floer": p, "sympow": q});
            let check = format!("Gr_gamma H_{r} = Gr_theta H*(s^{d} Sigma_{g})");
            out.push(Entry { criterion: 0, check, pass: cmp.equal, data, witness: cmp.witness });
        }
        Ok(out)
    };
    Ok(run().unwrap_or_else(|e| vec![failure("hom-symm", &e)]))
}

fn adjunction_entry(rep: AdjunctionReport) -> Entry {
    let c = &rep.case;
    let check = format!("adjunction g={} Sigma^2={} K.Sigma={}", c.g, c.self_int, c.k_dot_sigma);
    let witness = rep.verdicts.iter().find(|v| v.status == Status::Fail).map(|v| {
        format!("theorem {}: {} > {}", v.theorem, v.lhs.unwrap_or_default(), v.bound.unwrap_or_default())
    });
    let data = serde_json::to_value(&rep).expect("adjunction report serializes");
    Entry { criterion: 0, check, pass: witness.is_none(), data, witness }
}

fn adjunction(a: &AdjunctionArgs) -> std::result::Result<Vec<Entry>, Usage> {
    let cases: Vec<AdjunctionCase> = match &a.batch {
        Some(path) => {
            let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| Usage(e.to_string()))?;
            rdr.deserialize()
                .enumerate()
                .map(|(i, row)| row.map_err(|e| Usage(format!("{}: row {}: {e}", path.display(), i + 1))))
                .collect::<std::result::Result<_, _>>()?
        }
        None => vec![AdjunctionCase {
            g: a.genus.expect("required by clap"),
            self_int: a.self_int.expect("required by clap"),
            odd_class: a.odd_class,
            k_dot_sigma: a.k_dot_sigma.expect("required by clap"),
            d_b: a.d_b,
            d_k: a.d_k,
            l: a.l,
            b1_zero: a.b1_zero,
            claimed_order: a.claimed_order,
        }],
    };
    let parity = match a.parity {
        Parity::Warn => ParityPolicy::Warn,
        Parity::Reject => ParityPolicy::Reject,
    };
    Ok(cases.iter().map(|c| adjunction_entry(evaluate(c, parity))).collect())
}

fn failure(command: &str, e: &floer_core::Error) -> Entry {
    Entry { criterion: 0, check: command.into(), pass: false, data: serde_json::Value::Null, witness: Some(e.to_string()) }
}

fn dispatch(cmd: &Command) -> std::result::Result<(String, serde_json::Value, Vec<Entry>, bool), Usage> {
    Ok(match cmd {
        Command::RingFloer(a) => ("ring-floer".into(), echo(a), ring_floer(a)?, false),
        Command::RingFukayaFloer(a) => ("ring-fukaya-floer".into(), echo(a), ring_fukaya_floer(a)?, a.seed.is_some()),
        Command::RingSympow(a) => ("ring-sympow".into(), echo(a), ring_sympow(a)?, false),
        Command::Verify(a) => {
            let seeded = parse_suites(&a.suite)?.iter().any(|c| matches!(c, Criterion::Ranks | Criterion::Perturbation));
            ("verify".into(), echo(a), verify(a)?, seeded)
        }
        Command::HomSymm(a) => ("hom-symm".into(), echo(a), hom_symm(a)?, false),
        Command::Adjunction(a) => ("adjunction".into(), echo(a), adjunction(a)?, false),
    })
}

/// The validated arguments, echoed into the report's `input` field.
fn echo<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = configure_threads().and_then(|()| dispatch(&cli.command));
    let (command, input, results, seeded) = match outcome {
        Ok(x) => x,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut report = Report::new(command, input, results);
    if seeded {
        report.prng = Some(PRNG_NAME.into());
    }
    if cli.timing {
        report.timing = Some(Timing { total_ms: start.elapsed().as_millis() });
    }
    if let Err(e) = output::write(&report, cli.format, cli.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
