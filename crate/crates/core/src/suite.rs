//! The verification suites behind `floer-rings verify`, one per acceptance property.
//!
//! Expensive items run on the rayon pool; entries are assembled in a fixed order, so the output
//! does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjunct::sweep;
use crate::error::{Error, Result};
use crate::floer::{
    alpha0, beta0, build_floer, eigenvalue_table, split_atlas, verify_gr_structure, verify_quotient_bounds,
    verify_ranks, verify_rewriting_degrees, ArtinianAtlas, PatternReport, PerturbationProfile, PieceReport, PRNG_NAME,
};
use crate::grcompare::{compare, profile_floer, profile_sympow};
use crate::report::{Check, Entry};
use crate::sympow::{macdonald_ideal, poincare_pairing_check, recurrence_checks, verify_presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Ranks = 1,
    Eigenvalues = 2,
    LocalRanks = 3,
    Graded = 4,
    HomSymm = 5,
    Sympow = 6,
    Degrees = 7,
    Perturbation = 8,
    Adjunction = 9,
}

impl Criterion {
    pub const ALL: [Criterion; 9] = [
        Criterion::Ranks,
        Criterion::Eigenvalues,
        Criterion::LocalRanks,
        Criterion::Graded,
        Criterion::HomSymm,
        Criterion::Sympow,
        Criterion::Degrees,
        Criterion::Perturbation,
        Criterion::Adjunction,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ranks => "ranks",
            Criterion::Eigenvalues => "eigenvalues",
            Criterion::LocalRanks => "local-ranks",
            Criterion::Graded => "graded",
            Criterion::HomSymm => "hom-symm",
            Criterion::Sympow => "sympow",
            Criterion::Degrees => "degrees",
            Criterion::Perturbation => "perturbation",
            Criterion::Adjunction => "adjunction",
        }
    }

    fn needs_baseline(self) -> bool {
        !matches!(self, Criterion::Sympow | Criterion::Adjunction)
    }

    fn needs_perturbed(self) -> bool {
        matches!(self, Criterion::Ranks | Criterion::Perturbation)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteOptions {
    pub genus_max: u32,
    pub seed: u64,
    /// Number of seeded perturbation profiles per genus.
    pub profiles: u64,
    /// Perturbed builds are truncated at `t^truncation`.
    pub truncation: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { genus_max: 5, seed: 0, profiles: 20, truncation: 4 }
    }
}

/// Rank and eigenvalue data that no perturbation may change.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
struct Fingerprint {
    ranks: Vec<(Option<u32>, Option<i32>, usize)>,
    reduced_ranks: Vec<usize>,
    reduced_piece_ranks: Vec<(u32, i32, usize)>,
    eigenvalues: Vec<(Option<u32>, Option<i32>, String)>,
    reduced_eigenvalues: Vec<(i32, String, String)>,
    gr_ranks: Vec<(Option<u32>, Option<i32>, Vec<usize>)>,
}

/// Everything the suites read from one atlas.
struct Run {
    /// Kept for the unperturbed build only.
    atlas: Option<ArtinianAtlas>,
    ranks: Vec<PieceReport>,
    graded: Vec<PieceReport>,
    rewriting: Vec<PieceReport>,
    patterns: Vec<PatternReport>,
    fingerprint: Fingerprint,
    eigenvalues: Vec<(i32, String, String)>,
}

impl Run {
    fn build(g: u32, profile: Option<(u64, &SuiteOptions)>) -> Result<Run> {
        let atlas = match profile {
            None => split_atlas(build_floer(g, None, None)?)?,
            Some((i, o)) => {
                let p = PerturbationProfile::seeded(g, o.truncation, o.seed, i);
                split_atlas(build_floer(g, Some(o.truncation), Some(&p))?)?
            }
        };
        let ranks = verify_ranks(&atlas)?;
        let graded = verify_gr_structure(&atlas)?;
        let (rewriting, patterns) = verify_rewriting_degrees(&atlas)?;
        let fingerprint = fingerprint(&atlas, &ranks, &graded)?;
        let eigenvalues = fingerprint.reduced_eigenvalues.clone();
        let atlas = profile.is_none().then_some(atlas);
        Ok(Run { atlas, ranks, graded, rewriting, patterns, fingerprint, eigenvalues })
    }
}

fn label(g: u32, profile: Option<u64>, o: &SuiteOptions) -> String {
    match profile {
        None => format!("g={g} t=0"),
        Some(i) => format!("g={g} profile={i} seed={} N={}", o.seed, o.truncation),
    }
}

fn fingerprint(a: &ArtinianAtlas, ranks: &[PieceReport], graded: &[PieceReport]) -> Result<Fingerprint> {
    let factor = a.series_factor();
    Ok(Fingerprint {
        ranks: ranks.iter().map(|r| (r.k, r.r, r.rank)).collect(),
        reduced_ranks: a.ring.reduced.iter().map(|q| q.rank()).collect::<Result<_>>()?,
        reduced_piece_ranks: a.pieces.iter().map(|p| (p.k, p.r, p.reduced.dim() / factor)).collect(),
        eigenvalues: ranks
            .iter()
            .filter_map(|r| r.eigenvalues.as_ref().map(|e| (r.k, r.r, format!("{} {} {}", e.alpha, e.beta, e.gamma))))
            .collect(),
        reduced_eigenvalues: eigenvalue_table(a).into_iter().map(|(r, x, y)| (r, x.to_string(), y.to_string())).collect(),
        gr_ranks: graded.iter().map(|r| (r.k, r.r, r.gr_slices.iter().map(|s| s.rank).collect())).collect(),
    })
}

/// First failing check among `reports` restricted by `keep`, formatted as a witness.
fn first_failure<'a>(
    reports: impl IntoIterator<Item = &'a PieceReport>,
    keep: impl Fn(&Check) -> bool,
) -> Option<String> {
    reports.into_iter().find_map(|rep| {
        rep.checks.iter().filter(|c| keep(c)).find(|c| !c.pass).map(|c| {
            let at = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            format!(
                "k={} r={}: {}: {}",
                at(rep.k.map(|k| k.to_string())),
                at(rep.r.map(|r| r.to_string())),
                c.name,
                c.witness.clone().unwrap_or_default()
            )
        })
    })
}

fn entry(criterion: Criterion, check: String, witness: Option<String>, data: Value) -> Entry {
    Entry { criterion: criterion.number(), check, pass: witness.is_none(), data, witness }
}

fn error_entry(criterion: Criterion, check: String, e: &Error) -> Entry {
    entry(criterion, check, Some(e.to_string()), Value::Null)
}

/// Runs the selected suites. Build errors become failing entries carrying the error.
pub fn run(criteria: &[Criterion], o: &SuiteOptions) -> Vec<Entry> {
    let genera: Vec<u32> = (1..=o.genus_max).collect();
    let baseline: BTreeMap<u32, Result<Run>> = if criteria.iter().any(|c| c.needs_baseline()) {
        genera.par_iter().map(|&g| (g, Run::build(g, None))).collect()
    } else {
        BTreeMap::new()
    };
    let perturbed: BTreeMap<(u32, u64), Result<Run>> = if criteria.iter().any(|c| c.needs_perturbed()) {
        let jobs: Vec<(u32, u64)> = genera.iter().flat_map(|&g| (0..o.profiles).map(move |i| (g, i))).collect();
        jobs.par_iter().map(|&(g, i)| ((g, i), Run::build(g, Some((i, o))))).collect()
    } else {
        BTreeMap::new()
    };
    let mut out = Vec::new();
    for &c in criteria {
        match c {
            Criterion::Ranks => {
                for &g in &genera {
                    let runs = std::iter::once((None, &baseline[&g]))
                        .chain((0..o.profiles).map(|i| (Some(i), &perturbed[&(g, i)])));
                    for (i, run) in runs {
                        out.push(ranks_entry(g, i, run, o));
                    }
                }
            }
            Criterion::Eigenvalues => genera.iter().for_each(|&g| out.push(eigen_entry(g, &baseline[&g]))),
            Criterion::LocalRanks => genera.iter().for_each(|&g| out.push(local_entry(g, &baseline[&g]))),
            Criterion::Graded => genera.iter().for_each(|&g| out.push(graded_entry(g, &baseline[&g]))),
            Criterion::HomSymm => out.extend(hom_symm_entries(&genera, &baseline)),
            Criterion::Sympow => out.extend(sympow_entries(&genera)),
            Criterion::Degrees => out.extend(degree_entries(&genera, &baseline)),
            Criterion::Perturbation => {
                for &g in &genera {
                    for i in 0..o.profiles {
                        out.push(perturbation_entry(g, i, &perturbed[&(g, i)], &baseline[&g], o));
                    }
                }
            }
            Criterion::Adjunction => out.push(adjunction_entry()),
        }
    }
    out
}

fn ranks_entry(g: u32, profile: Option<u64>, run: &Result<Run>, o: &SuiteOptions) -> Entry {
    let label = label(g, profile, o);
    let check = format!("rank T = C(g-k+2,3), rank Tbar = C(g-k+1,2), standard bases ({label})");
    let run = match run {
        Ok(r) => r,
        Err(e) => return error_entry(Criterion::Ranks, check, e),
    };
    let witness = first_failure(run.ranks.iter().filter(|r| r.r.is_none()), |_| true);
    let data = json!({
        "genus": g,
        "profile": profile,
        "ranksT": run.fingerprint.ranks.iter().filter(|x| x.1.is_none()).map(|x| x.2).collect::<Vec<_>>(),
        "ranksTbar": run.fingerprint.reduced_ranks,
    });
    entry(Criterion::Ranks, check, witness.map(|w| format!("{label}: {w}")), data)
}

fn eigen_entry(g: u32, run: &Result<Run>) -> Entry {
    let check = format!("Tbar_(g,0) eigenvalues (4r, -8) for odd r, (4ri, 8) for even r (g={g})");
    let run = match run {
        Ok(r) => r,
        Err(e) => return error_entry(Criterion::Eigenvalues, check, e),
    };
    let want: Vec<(i32, String, String)> =
        (-(g as i32 - 1)..g as i32).map(|r| (r, alpha0(r).to_string(), beta0(r).to_string())).collect();
    let mut witness = (run.eigenvalues != want).then(|| format!("table {:?}", run.eigenvalues));
    if witness.is_none() {
        witness = first_failure(&run.ranks, |c| c.name.contains("eigenvalues")).map(|w| format!("g={g} {w}"));
    }
    let table: Vec<Value> = run.eigenvalues.iter().map(|(r, a, b)| json!({"r": r, "alpha": a, "beta": b})).collect();
    entry(Criterion::Eigenvalues, check, witness, json!({"genus": g, "table": table}))
}

fn local_entry(g: u32, run: &Result<Run>) -> Entry {
    let check = format!("rank Rbar_(g,k,r) = [(g-k-1-|r|)/2]+1 (g={g})");
    let run = match run {
        Ok(r) => r,
        Err(e) => return error_entry(Criterion::LocalRanks, check, e),
    };
    let witness = first_failure(&run.ranks, |c| c.name.starts_with("rank R")).map(|w| format!("g={g} {w}"));
    let ranks: Vec<Value> =
        run.fingerprint.reduced_piece_ranks.iter().map(|(k, r, n)| json!({"k": k, "r": r, "rank": n})).collect();
    entry(Criterion::LocalRanks, check, witness, json!({"genus": g, "pieces": ranks}))
}

fn graded_entry(g: u32, run: &Result<Run>) -> Entry {
    let check = format!("Gr_gamma slices: ranks and bbar nilpotency [(g-k-|r|-i-1)/2]+1 (g={g})");
    let run = match run {
        Ok(r) => r,
        Err(e) => return error_entry(Criterion::Graded, check, e),
    };
    let witness = first_failure(&run.graded, |_| true).map(|w| format!("g={g} {w}"));
    let pieces: Vec<Value> = run
        .graded
        .iter()
        .map(|rep| {
            json!({
                "k": rep.k,
                "r": rep.r,
                "ranks": rep.gr_slices.iter().map(|s| s.rank).collect::<Vec<_>>(),
                "nilpotency": rep.gr_slices.iter().map(|s| s.nilpotency).collect::<Vec<_>>(),
            })
        })
        .collect();
    entry(Criterion::Graded, check, witness, json!({"genus": g, "pieces": pieces}))
}

fn hom_symm_entries(genera: &[u32], baseline: &BTreeMap<u32, Result<Run>>) -> Vec<Entry> {
    let jobs: Vec<(u32, i32)> = genera.iter().flat_map(|&g| (-(g as i32 - 1)..g as i32).map(move |r| (g, r))).collect();
    jobs.par_iter()
        .map(|&(g, r)| {
            let d = g - 1 - r.unsigned_abs();
            let check = format!("Gr_gamma H_{r} = Gr_theta H*(s^{d} Sigma) (g={g})");
            let atlas = match &baseline[&g] {
                Err(e) => return error_entry(Criterion::HomSymm, check, e),
                Ok(run) => run.atlas.as_ref().expect("baseline keeps its atlas"),
            };
            let sides = profile_floer(atlas, r).and_then(|p| Ok((p, profile_sympow(&macdonald_ideal(g, d)?)?)));
            match sides {
                Err(e) => error_entry(Criterion::HomSymm, check, &e),
                Ok((p, q)) => {
                    let cmp = compare(&p, &q);
                    let data = json!({"genus": g, "r": r, "d": d, "dim": p.total_dim, "blocks": p.blocks.len()});
                    entry(Criterion::HomSymm, check, cmp.witness, data)
                }
            }
        })
        .collect()
}

fn sympow_entries(genera: &[u32]) -> Vec<Entry> {
    let jobs: Vec<(u32, u32)> = genera.iter().flat_map(|&g| (0..g).map(move |d| (g, d))).collect();
    jobs.par_iter()
        .map(|&(g, d)| {
            let check = format!("Macdonald presentation, Poincare pairing, recurrences (g={g}, d={d})");
            let checks = macdonald_ideal(g, d).and_then(|s| {
                let rep = verify_presentation(&s)?;
                let mut checks = rep.checks;
                checks.extend(poincare_pairing_check(&s)?);
                checks.extend(recurrence_checks(g, d)?);
                Ok((rep.betti, checks))
            });
            match checks {
                Err(e) => error_entry(Criterion::Sympow, check, &e),
                Ok((betti, checks)) => {
                    let witness = checks.iter().find(|c| !c.pass).map(|c| {
                        format!("g={g} d={d}: {}: {}", c.name, c.witness.clone().unwrap_or_default())
                    });
                    let data = json!({"genus": g, "d": d, "betti": betti, "checks": checks.len()});
                    entry(Criterion::Sympow, check, witness, data)
                }
            }
        })
        .collect()
}

fn degree_entries(genera: &[u32], baseline: &BTreeMap<u32, Result<Run>>) -> Vec<Entry> {
    let bounds: Vec<(u32, Result<Vec<PieceReport>>)> = genera.par_iter().map(|&g| (g, verify_quotient_bounds(g))).collect();
    let mut out = Vec::new();
    for (g, hr) in bounds {
        let check = format!("bbar^n gamma^m = 0 for n+m >= gbar on every piece (g={g})");
        out.push(match &baseline[&g] {
            Err(e) => error_entry(Criterion::Degrees, check, e),
            Ok(run) => {
                let witness = first_failure(&run.rewriting, |c| !c.name.starts_with("c_ij")).map(|w| format!("g={g} {w}"));
                entry(Criterion::Degrees, check, witness, json!({"genus": g, "pieces": run.rewriting.len()}))
            }
        });
        let check = format!("H_r: top degree, bbar into (psi), degree l+1 into (psi_1..psi_l) (g={g})");
        out.push(match hr {
            Err(e) => error_entry(Criterion::Degrees, check, &e),
            Ok(reps) => {
                let witness = first_failure(&reps, |_| true).map(|w| format!("g={g} {w}"));
                let dims: Vec<Value> = reps.iter().map(|r| json!({"r": r.r, "dim": r.rank})).collect();
                entry(Criterion::Degrees, check, witness, json!({"genus": g, "hr": dims}))
            }
        });
    }
    out
}

fn perturbation_entry(g: u32, i: u64, run: &Result<Run>, base: &Result<Run>, o: &SuiteOptions) -> Entry {
    let check = format!("c_ij = 0 for i+j < e, data of t=0 unchanged (g={g} profile={i})");
    let (run, base) = match (run, base) {
        (Err(e), _) | (_, Err(e)) => return error_entry(Criterion::Perturbation, check, e),
        (Ok(r), Ok(b)) => (r, b),
    };
    let label = label(g, Some(i), o);
    let mut witness = run
        .patterns
        .iter()
        .find(|p| !p.pass)
        .map(|p| format!("{label}: k={} r={}: e={} with gamma terms {:?}", p.k, p.r, p.e, p.gamma_coeffs));
    if witness.is_none() && run.fingerprint != base.fingerprint {
        witness = Some(format!("{label}: {}", diff_fingerprint(&run.fingerprint, &base.fingerprint)));
    }
    if witness.is_none() {
        witness = first_failure(run.ranks.iter().chain(&run.graded), |_| true).map(|w| format!("{label}: {w}"));
    }
    let min_e = run.patterns.iter().map(|p| p.e).min();
    let data = json!({
        "genus": g,
        "profile": i,
        "seed": o.seed,
        "truncation": o.truncation,
        "prng": PRNG_NAME,
        "relations": run.patterns.len(),
        "minE": min_e,
    });
    entry(Criterion::Perturbation, check, witness, data)
}

fn diff_fingerprint(a: &Fingerprint, b: &Fingerprint) -> String {
    let fields = [
        ("ranks", a.ranks != b.ranks),
        ("reducedRanks", a.reduced_ranks != b.reduced_ranks),
        ("reducedPieceRanks", a.reduced_piece_ranks != b.reduced_piece_ranks),
        ("eigenvalues", a.eigenvalues != b.eigenvalues),
        ("reducedEigenvalues", a.reduced_eigenvalues != b.reduced_eigenvalues),
        ("grRanks", a.gr_ranks != b.gr_ranks),
    ];
    let changed: Vec<&str> = fields.iter().filter(|f| f.1).map(|f| f.0).collect();
    format!("changed {}", changed.join(", "))
}

fn adjunction_entry() -> Entry {
    let check = "adjunction sweep g<=6, Sigma^2<=6, |K.Sigma|<=10, sharpness family g<=4, l<=4".to_string();
    let rep = sweep(6, 6, 10);
    let witness = (!rep.pass()).then(|| {
        [
            &rep.invariance_failures,
            &rep.stability_failures,
            &rep.monotonicity_failures,
            &rep.implication_failures,
            &rep.sharpness_failures,
        ]
        .iter()
        .find_map(|v| v.first().cloned())
        .unwrap_or_default()
    });
    entry(Criterion::Adjunction, check, witness, json!({"cases": rep.cases}))
}
