//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances are fixed here.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::{blotto, kuhn, toy};
use hscfr::eval::{exploitability, theorem_bound, BoundInput, BoundKind};
use hscfr::game::{Player, StrategyProfile, TreeGame};
use hscfr::games::{make_game, GameParams};
use hscfr::regret::{
    apply_regret_update, discount_triple, match_strategy, predictive_strategy, DiscountTriple, Variant,
};
use hscfr::schedules::{builtin_schedule, weight_threshold};
use hscfr::solver::{run, Averaging, SolverConfig, UpdateMode};
use hscfr_cli::bench::{execute, BenchConfig, RunOutcome};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use std::collections::HashMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

const ORACLE_TOLERANCE: f64 = 1e-12;
const EXPLOITABILITY_TOLERANCE: f64 = 1e-9;
const KUHN_VALUE_TOLERANCE: f64 = 1e-3;
const MIN_OOM_GAIN: f64 = 2.0;
/// How close, in orders of magnitude, DCFR-NC must end to DCFR.
const NC_APPROACH_OOM: f64 = 0.5;
const MATRIX_BUDGET: Duration = Duration::from_secs(30 * 60);
const BIG_LEDUC_BUDGET: Duration = Duration::from_secs(120);
const SMALL_GAME_BUDGET: Duration = Duration::from_secs(10);
const FUZZ_CASES: u32 = 10_000;

/// Result of one criterion: pass/fail, a summary, and informational lines.
struct Verdict {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
            info: Vec::new(),
        }
    }
}

fn build(name: &str, x: Option<u32>) -> TreeGame {
    make_game(
        name,
        &GameParams {
            x,
            ..Default::default()
        },
    )
    .unwrap()
    .build()
    .unwrap()
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn game_sizes() -> Verdict {
    let games: [(&str, Option<u32>); 12] = [
        ("kuhn", None),
        ("goofspiel_li", Some(3)),
        ("leduc", None),
        ("goofspiel", Some(4)),
        ("goofspiel_li", Some(4)),
        ("goofspiel", Some(5)),
        ("goofspiel_li", Some(5)),
        ("liars_dice", Some(4)),
        ("liars_dice", Some(6)),
        ("battleship", Some(2)),
        ("battleship", Some(3)),
        ("big_leduc", None),
    ];
    let mut problems = Vec::new();
    let mut big_leduc_time = Duration::ZERO;
    for (name, x) in games {
        let rules = make_game(
            name,
            &GameParams {
                x,
                ..Default::default()
            },
        )
        .unwrap();
        let started = Instant::now();
        let stats = rules.build().unwrap().stats();
        let took = started.elapsed();
        let row = rules.reference_size().unwrap();
        if !row.matches(&stats) {
            problems.push(format!("{rules}: {} vs table {row}", row.render(&stats)));
        }
        let budget = if name == "big_leduc" {
            BIG_LEDUC_BUDGET
        } else {
            SMALL_GAME_BUDGET
        };
        if name == "big_leduc" {
            big_leduc_time = took;
        }
        if took > budget {
            problems.push(format!("{rules} took {:.1} s", took.as_secs_f64()));
        }
    }
    let exact = [("kuhn", None, "58 12 30"), ("goofspiel_li", Some(3), "67 16 36")];
    for (name, x, want) in exact {
        let s = build(name, x).stats();
        let got = format!("{} {} {}", s.histories, s.infosets, s.leaves);
        if got != want {
            problems.push(format!("{name}: {got} vs {want}"));
        }
    }
    if problems.is_empty() {
        Verdict::new(
            true,
            format!(
                "12 games match, big_leduc built in {:.1} s",
                big_leduc_time.as_secs_f64()
            ),
        )
    } else {
        Verdict::new(false, problems.join("; "))
    }
}

fn weight_thresholds() -> Verdict {
    let got: Vec<Option<u64>> = ["dcfr", "hs15", "hs30"]
        .iter()
        .map(|s| weight_threshold(&builtin_schedule(s).unwrap().gamma, 1000, 0.9).unwrap())
        .collect();
    let want = [Some(19), Some(136), Some(272)];
    Verdict::new(got == want, format!("gamma=2, HS15, HS30 cross 0.9 at {got:?}"))
}

fn oracle_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    for schedule in ["dcfr", "hs30", "hs15", "hs5"] {
        for mode in [UpdateMode::Alternating, UpdateMode::Simultaneous] {
            let set = builtin_schedule(schedule).unwrap();
            worst = worst.max(toy::max_deviation(&set, mode, 10));
        }
    }
    Verdict::new(
        worst <= ORACLE_TOLERANCE,
        format!("max deviation {worst:.2e} over 10 iterations (tolerance {ORACLE_TOLERANCE:e})"),
    )
}

fn exploitability_oracle() -> Verdict {
    let mut worst = 0.0f64;
    let game = build("kuhn", None);
    for (s0, s1) in kuhn::cases() {
        let report = exploitability(&game, &kuhn::profile(&game, &s0, &s1)).unwrap();
        let br = kuhn::best_responses(&s0, &s1);
        worst = worst.max((report.best_response[0] - br[0]).abs());
        worst = worst.max((report.best_response[1] - br[1]).abs());
        worst = worst.max((report.exploitability - (br[0] + br[1]) / 2.0).abs());
    }

    let game = build("blotto", None);
    let m = blotto::payoff_matrix();
    let mixes: [(Vec<f64>, Vec<f64>); 3] = [
        (vec![1.0 / 21.0; 21], vec![1.0 / 21.0; 21]),
        (
            (0..21).map(|i| (i % 4) as f64).collect(),
            (0..21).map(|j| (j % 3 + 1) as f64).collect(),
        ),
        (
            (0..21).map(|i| (i == 7) as u8 as f64).collect(),
            (0..21).map(|j| ((j == 2) as u8 + 2 * (j == 15) as u8) as f64).collect(),
        ),
    ];
    for (x, y) in mixes {
        let norm = |v: Vec<f64>| {
            let s: f64 = v.iter().sum();
            v.into_iter().map(|p| p / s).collect::<Vec<_>>()
        };
        let (x, y) = (norm(x), norm(y));
        let mut profile = StrategyProfile::uniform(&game);
        for (p, mix) in [(Player::P0, &x), (Player::P1, &y)] {
            let root = game.infosets(p).ids().next().unwrap();
            profile.set(p, root, mix);
        }
        let br0 = (0..21)
            .map(|i| (0..21).map(|j| m[i][j] * y[j]).sum::<f64>())
            .fold(f64::MIN, f64::max);
        let br1 = (0..21)
            .map(|j| (0..21).map(|i| -m[i][j] * x[i]).sum::<f64>())
            .fold(f64::MIN, f64::max);
        let report = exploitability(&game, &profile).unwrap();
        worst = worst.max((report.best_response[0] - br0).abs());
        worst = worst.max((report.best_response[1] - br1).abs());
    }

    let kuhn_game = build("kuhn", None);
    let config = SolverConfig {
        variant: Variant::Dcfr,
        schedule: builtin_schedule("dcfr").unwrap(),
        iterations: 1000,
        update_mode: UpdateMode::Alternating,
        checkpoint_every: 1000,
        averaging: Averaging::Discounted,
    };
    let average = run(&kuhn_game, &config).unwrap().average;
    let value = kuhn_game.expected_value(&average).unwrap()[0];
    let value_error = (value + 1.0 / 18.0).abs();
    Verdict::new(
        worst <= EXPLOITABILITY_TOLERANCE && value_error <= KUHN_VALUE_TOLERANCE,
        format!("max BR error {worst:.1e} on Kuhn and Blotto; DCFR Kuhn value {value:.6} (error {value_error:.1e})"),
    )
}

type Finals = HashMap<(String, String), f64>;

fn finals(outcomes: &[RunOutcome]) -> Finals {
    outcomes
        .iter()
        .filter_map(|o| Some(((o.spec.game_id(), o.spec.label.clone()), o.final_exploitability()?)))
        .collect()
}

/// Orders of magnitude gained; a candidate at float noise counts as unbounded.
fn gain(baseline: f64, candidate: f64) -> f64 {
    if candidate <= 0.0 {
        f64::INFINITY
    } else {
        (baseline / candidate).log10()
    }
}

/// Each ordering with whether it holds.
fn orderings(f: &Finals) -> Vec<(String, bool)> {
    let e = |game: &str, label: &str| {
        f.get(&(game.to_string(), label.to_string()))
            .copied()
            .unwrap_or(f64::NAN)
    };
    let mut checks = Vec::new();
    for g in ["kuhn", "goofspiel-4", "liars_dice-4", "blotto"] {
        let oom = gain(e(g, "PCFR+"), e(g, "HS-PCFR+(30)"));
        checks.push((format!("{g} HS-PCFR+(30) {oom:.1} OoM over PCFR+"), oom >= MIN_OOM_GAIN));
    }
    for g in ["leduc", "goofspiel_li-4"] {
        let (hs, base) = (e(g, "HS-DCFR(30)"), e(g, "DCFR"));
        checks.push((format!("{g} HS-DCFR(30) {hs:.2e} < DCFR {base:.2e}"), hs < base));
    }
    for g in ["goofspiel_li-4", "blotto"] {
        let nc = e(g, "DCFR-NC");
        for hs in ["HS-DCFR(30)", "HS-DCFR(15)"] {
            let v = e(g, hs);
            checks.push((format!("{g} DCFR-NC {nc:.2e} > {hs} {v:.2e}"), nc > v));
        }
        let apart = (nc / e(g, "DCFR")).log10().abs();
        checks.push((
            format!("{g} DCFR-NC within {apart:.2} OoM of DCFR"),
            apart <= NC_APPROACH_OOM,
        ));
    }
    checks
}

fn summarize(checks: &[(String, bool)]) -> (bool, String) {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
    if failed.is_empty() {
        (true, format!("{} orderings hold", checks.len()))
    } else {
        (
            false,
            format!("{} of {} fail: {}", failed.len(), checks.len(), failed.join("; ")),
        )
    }
}

fn convergence_orderings() -> Verdict {
    let config = BenchConfig::load(&workspace_root().join("configs/matrix.json")).unwrap();
    let specs = config.resolve().unwrap();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let started = Instant::now();
    let outcomes = execute(&specs, jobs).unwrap();
    let took = started.elapsed();
    let failed_runs = outcomes.iter().filter(|o| o.result.is_err()).count();
    let (ok, detail) = summarize(&orderings(&finals(&outcomes)));
    let mut verdict = Verdict::new(
        ok && failed_runs == 0 && took < MATRIX_BUDGET,
        format!(
            "{detail}; {} runs, {failed_runs} failed, matrix took {:.0} s on {jobs} thread(s)",
            outcomes.len(),
            took.as_secs_f64()
        ),
    );

    // The same orderings with the literal per-iteration averaging discount.
    let discounted: Vec<_> = specs
        .iter()
        .filter(|s| {
            let needed = [
                "kuhn",
                "goofspiel-4",
                "liars_dice-4",
                "blotto",
                "leduc",
                "goofspiel_li-4",
            ];
            needed.contains(&s.game_id().as_str())
        })
        .map(|s| {
            let mut s = s.clone();
            s.config.averaging = Averaging::Discounted;
            s
        })
        .collect();
    let (ok, detail) = summarize(&orderings(&finals(&execute(&discounted, jobs).unwrap())));
    verdict.info.push(format!(
        "with discounted averaging instead of power averaging: {}",
        if ok {
            detail
        } else {
            detail.replace(" fail: ", " would fail: ")
        }
    ));
    verdict
}

fn theorem_sanity() -> Verdict {
    let n = 1000;
    let mut worst_ratio = 0.0f64;
    let mut problems = Vec::new();
    let mut runs = 0;
    for name in ["kuhn", "leduc"] {
        let game = build(name, None);
        for schedule in [
            "hs30",
            "hs15",
            "hs5",
            "hs30_fixed",
            "hs30_alpha_fixed",
            "hs30_beta_fixed",
        ] {
            let set = builtin_schedule(schedule).unwrap();
            let upper = set.gamma_upper_bound(n);
            if !set.within_bound_ranges(n) || upper > 30.0 {
                problems.push(format!("{schedule} outside the bound's ranges"));
                continue;
            }
            let config = SolverConfig {
                variant: Variant::Dcfr,
                schedule: set,
                iterations: n,
                update_mode: UpdateMode::Simultaneous,
                checkpoint_every: 10,
                averaging: Averaging::Discounted,
            };
            runs += 1;
            for c in run(&game, &config).unwrap().checkpoints {
                let bound = theorem_bound(&BoundInput::for_game(&game, upper, c.iteration), BoundKind::HsDcfr, 1.0);
                worst_ratio = worst_ratio.max(c.exploitability / bound);
                if c.exploitability > bound {
                    problems.push(format!(
                        "{name} {schedule} t={}: {:e} > {bound:e}",
                        c.iteration, c.exploitability
                    ));
                }
            }
        }
    }
    if problems.is_empty() {
        Verdict::new(
            true,
            format!("{runs} runs, every checkpoint within bound (largest e/bound {worst_ratio:.1e})"),
        )
    } else {
        Verdict::new(false, problems.join("; "))
    }
}

fn vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![4 => -1e3f64..1e3, 1 => Just(0.0)], 1..10)
}

fn fuzz<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: FUZZ_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn is_distribution(d: &[f64]) -> bool {
    d.iter().all(|&p| p >= 0.0) && (d.iter().sum::<f64>() - 1.0).abs() <= 1e-12
}

fn kernel_properties() -> Verdict {
    let mut results = Vec::new();

    results.push((
        "distribution",
        fuzz((vector(), vector()), |(r, m)| {
            let mut out = vec![0.0; r.len()];
            match_strategy(&r, &mut out);
            check(is_distribution(&out), || format!("RM {r:?} -> {out:?}"))?;
            let m: Vec<f64> = m.iter().cycle().take(r.len()).copied().collect();
            predictive_strategy(&r, &m, &mut out);
            check(is_distribution(&out), || format!("PRM+ {r:?} {m:?} -> {out:?}"))
        }),
    ));

    results.push((
        "scale invariance",
        fuzz((vector(), 1e-3f64..1e3), |(r, c)| {
            let mut a = vec![0.0; r.len()];
            let mut b = vec![0.0; r.len()];
            match_strategy(&r, &mut a);
            let scaled: Vec<f64> = r.iter().map(|x| x * c).collect();
            match_strategy(&scaled, &mut b);
            check(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12), || {
                format!("{r:?} x {c}")
            })
        }),
    ));

    let floor_case = (
        0.01f64..100.0,
        1.0f64..=5.0,
        -5.0f64..=0.0,
        prop::collection::vec(prop::collection::vec(-1.0f64..=1.0, 3), 1..60),
    );
    results.push((
        "-2 delta floor",
        fuzz(floor_case, |(delta, alpha, beta, steps)| {
            let mut r = vec![0.0; 3];
            for (t, step) in steps.iter().enumerate() {
                let instant: Vec<f64> = step.iter().map(|x| x * delta).collect();
                let triple = if t == 0 {
                    DiscountTriple::NONE
                } else {
                    discount_triple(t as u64, alpha, beta, 2.0)
                };
                apply_regret_update(&mut r, None, &instant, &triple, Variant::Dcfr);
                check(r.iter().all(|&x| x > -2.0 * delta), || {
                    format!("t={t} regrets {r:?} delta {delta}")
                })?;
            }
            Ok(())
        }),
    ));

    let clip_case = (
        prop::collection::vec(0.0f64..1e3, 4),
        prop::collection::vec(-1e3f64..1e3, 4),
        any::<bool>(),
    );
    results.push((
        "clipped nonnegativity",
        fuzz(clip_case, |(mut r, instant, predictive)| {
            let variant = if predictive {
                Variant::PcfrPlus
            } else {
                Variant::CfrPlus
            };
            let mut prediction = vec![0.0; 4];
            apply_regret_update(&mut r, Some(&mut prediction), &instant, &DiscountTriple::NONE, variant);
            check(r.iter().all(|&x| x >= 0.0), || format!("{variant}: {r:?}"))?;
            check(!predictive || prediction == instant, || {
                "prediction is not the last regret".into()
            })
        }),
    ));

    let failed: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    if failed.is_empty() {
        Verdict::new(
            true,
            format!("{} properties x {FUZZ_CASES} random cases", results.len()),
        )
    } else {
        Verdict::new(false, failed.join("; "))
    }
}

fn read_tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        for entry in fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

fn bench_determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("hscfr-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    // The full matrix at a tenth of the iterations.
    let text = fs::read_to_string(workspace_root().join("configs/matrix.json")).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["defaults"]["iters"] = 100.into();
    let config = dir.join("matrix.json");
    fs::write(&config, json.to_string()).unwrap();

    let mut trees = Vec::new();
    for (name, jobs) in [("serial", 1), ("concurrent", 4), ("repeat", 1)] {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hscfr"))
            .args(["bench", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()])
            .args(["--jobs", &jobs.to_string(), "--no-timing"])
            .output()
            .unwrap();
        if !status.status.success() {
            return Verdict::new(
                false,
                format!("bench {name} failed: {}", String::from_utf8_lossy(&status.stderr)),
            );
        }
        trees.push(read_tree(&out));
    }
    let _ = fs::remove_dir_all(&dir);
    let files = trees[0].len();
    let same = trees[0] == trees[1] && trees[0] == trees[2];
    Verdict::new(
        same && files > 1,
        format!("{files} files byte-identical across serial, 4-thread and repeated runs"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 8] = [
        ("game sizes", game_sizes),
        ("weight thresholds", weight_thresholds),
        ("dcfr oracle equivalence", oracle_equivalence),
        ("exploitability oracle", exploitability_oracle),
        ("convergence orderings", convergence_orderings),
        ("theorem bound", theorem_sanity),
        ("regret kernel properties", kernel_properties),
        ("bench determinism", bench_determinism),
    ];
    let mut failures = 0;
    for (name, criterion) in criteria {
        let started = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::new(false, format!("panicked: {msg}"))
        });
        failures += usize::from(!verdict.pass);
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {name}: {} [{:.1} s]",
            verdict.detail,
            started.elapsed().as_secs_f64()
        );
        for line in verdict.info {
            println!("     info: {line}");
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
