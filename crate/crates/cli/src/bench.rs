//! The experiment matrix runner behind `hscfr bench`.

use crate::csv;
use crate::error::{CliError, Result};
use crate::run::{Role, RunEntry, RunSpec};
use hscfr::eval::oom;
use hscfr::game::TreeGame;
use hscfr::games::GameRules;
use hscfr::solver::{run, RunResult};
use rayon::prelude::*;
use serde::Deserialize;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Component, Path, PathBuf};

/// Top-level files of a bench directory; run outputs may not use these names.
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const FAILURES_FILE: &str = "failures.csv";

/// A bench config: a `runs` array plus optional `defaults` shared by every run.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub defaults: RunEntry,
    pub runs: Vec<RunEntry>,
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("bench config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Resolves every run and checks that outputs and labels do not collide.
    pub fn resolve(&self) -> Result<Vec<RunSpec>> {
        let mut specs = Vec::with_capacity(self.runs.len());
        let mut paths = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for (i, entry) in self.runs.iter().enumerate() {
            let spec = entry
                .over(&self.defaults)
                .resolve()
                .map_err(|e| CliError::Validation(format!("run {i}: {e}")))?;
            let path = spec.output_path();
            let reserved = [SUMMARY_FILE, TIMINGS_FILE, FAILURES_FILE].map(Path::new);
            if !path.components().all(|c| matches!(c, Component::Normal(_))) || reserved.contains(&path.as_path()) {
                return Err(CliError::Validation(format!(
                    "run {i}: output path {} must be relative, without '..', and not a reserved name",
                    path.display()
                )));
            }
            if !paths.insert(path.clone()) {
                return Err(CliError::Validation(format!(
                    "run {i}: duplicate output path {}",
                    path.display()
                )));
            }
            if !labels.insert((spec.game_id(), spec.label.clone())) {
                return Err(CliError::Validation(format!(
                    "run {i}: duplicate label {} for {}",
                    spec.label,
                    spec.game_id()
                )));
            }
            specs.push(spec);
        }
        Ok(specs)
    }
}

/// Result of one run; failures carry the error message.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub spec: RunSpec,
    pub result: std::result::Result<RunResult, String>,
}

impl RunOutcome {
    pub fn final_exploitability(&self) -> Option<f64> {
        let r = self.result.as_ref().ok()?;
        r.checkpoints.last().map(|c| c.exploitability)
    }
}

/// Builds each distinct game once, then runs everything on a pool of `jobs`
/// threads. Outcomes come back in config order whatever the scheduling.
pub fn execute(specs: &[RunSpec], jobs: usize) -> Result<Vec<RunOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;

    let mut distinct: Vec<GameRules> = Vec::new();
    for s in specs {
        if !distinct.contains(&s.rules) {
            distinct.push(s.rules.clone());
        }
    }
    let built: Vec<std::result::Result<TreeGame, String>> = pool.install(|| {
        distinct
            .par_iter()
            .map(|rules| rules.build().map_err(|e| format!("building {rules}: {e}")))
            .collect()
    });
    let games: HashMap<String, &std::result::Result<TreeGame, String>> =
        distinct.iter().map(|r| r.id()).zip(built.iter()).collect();

    let outcomes = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| {
                let result = match games[&spec.game_id()] {
                    Ok(game) => run(game, &spec.config).map_err(|e| e.to_string()),
                    Err(e) => Err(e.clone()),
                };
                RunOutcome {
                    spec: spec.clone(),
                    result,
                }
            })
            .collect()
    });
    Ok(outcomes)
}

/// One summary row: the best baseline of a game and every candidate's result.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub game: String,
    pub baseline: Option<(String, f64)>,
    /// Final exploitability per candidate label, aligned with [`Summary::candidates`].
    pub candidates: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub candidates: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    /// Games and candidate labels appear in order of first mention.
    pub fn new(outcomes: &[RunOutcome]) -> Self {
        let mut candidates: Vec<String> = Vec::new();
        let mut games: Vec<String> = Vec::new();
        for o in outcomes {
            if o.spec.role == Role::Candidate && !candidates.contains(&o.spec.label) {
                candidates.push(o.spec.label.clone());
            }
            let id = o.spec.game_id();
            if !games.contains(&id) {
                games.push(id);
            }
        }
        let rows = games
            .into_iter()
            .map(|game| {
                let mine = || outcomes.iter().filter(|o| o.spec.game_id() == game);
                let mut baseline: Option<(String, f64)> = None;
                for o in mine().filter(|o| o.spec.role == Role::Baseline) {
                    if let Some(e) = o.final_exploitability() {
                        if baseline.as_ref().is_none_or(|(_, best)| e < *best) {
                            baseline = Some((o.spec.label.clone(), e));
                        }
                    }
                }
                let candidates = candidates
                    .iter()
                    .map(|label| {
                        mine()
                            .find(|o| o.spec.role == Role::Candidate && &o.spec.label == label)
                            .and_then(RunOutcome::final_exploitability)
                    })
                    .collect();
                SummaryRow {
                    game,
                    baseline,
                    candidates,
                }
            })
            .collect();
        Summary { candidates, rows }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("game,baseline,baseline_exploitability");
        for c in &self.candidates {
            write!(out, ",{c},oom {c}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.game);
            match &row.baseline {
                Some((label, e)) => write!(out, ",{label},{}", csv::float(*e)).unwrap(),
                None => out.push_str(",,"),
            }
            for c in &row.candidates {
                match c {
                    Some(e) => {
                        let gain = row.baseline.as_ref().map(|(_, b)| oom_cell(*b, *e));
                        write!(out, ",{},{}", csv::float(*e), gain.unwrap_or_default()).unwrap();
                    }
                    None => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// OoM as a CSV cell. A candidate at or below zero has converged to
/// floating-point noise, which counts as an unbounded improvement.
pub fn oom_cell(baseline: f64, candidate: f64) -> String {
    match oom(baseline, candidate) {
        Ok(v) => csv::float(v),
        Err(_) if baseline > 0.0 && baseline.is_finite() && candidate <= 0.0 => csv::float(f64::INFINITY),
        Err(_) => csv::float(f64::NAN),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(path, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes per-run curves, the summary and the failure list under `dir`.
/// Wall times go to a separate file that is skipped when `timing` is off.
pub fn write_outputs(dir: &Path, outcomes: &[RunOutcome], timing: bool) -> Result<Summary> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut timings = String::from("game,label,iterations,solver_ms,evaluation_ms\n");
    let mut failures = String::from("game,label,error\n");
    let mut failed = 0;
    for o in outcomes {
        match &o.result {
            Ok(r) => {
                let path: PathBuf = dir.join(o.spec.output_path());
                write_file(&path, &csv::convergence(&r.checkpoints, timing))?;
                let solver_ms = r.checkpoints.last().map_or(0.0, |c| c.elapsed_ms);
                writeln!(
                    timings,
                    "{},{},{},{},{}",
                    o.spec.game_id(),
                    o.spec.label,
                    o.spec.config.iterations,
                    csv::float(solver_ms),
                    csv::float(r.evaluation_ms)
                )
                .unwrap();
            }
            Err(e) => {
                failed += 1;
                writeln!(failures, "{},{},{}", o.spec.game_id(), o.spec.label, quote(e)).unwrap();
            }
        }
    }
    let summary = Summary::new(outcomes);
    write_file(&dir.join(SUMMARY_FILE), &summary.to_csv())?;
    if timing {
        write_file(&dir.join(TIMINGS_FILE), &timings)?;
    }
    let failures_path = dir.join(FAILURES_FILE);
    if failed > 0 {
        write_file(&failures_path, &failures)?;
    } else if failures_path.exists() {
        fs::remove_file(&failures_path).map_err(|e| CliError::io(&failures_path, e))?;
    }
    Ok(summary)
}
