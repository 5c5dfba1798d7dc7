use clap::{Args, Parser, Subcommand};
use hscfr::eval::{exploitability, theorem_bound, BoundInput, BoundKind};
use hscfr::game::{StrategyProfile, TreeGame};
use hscfr::games::{make_game, GameParams};
use hscfr::schedules::{builtin_schedule, iterate_weight, weight_threshold, ScalarSchedule, ScheduleSet};
use hscfr::solver::run;
use hscfr_cli::bench::{self, BenchConfig};
use hscfr_cli::csv;
use hscfr_cli::run::{resolve_flags, RunEntry};
use hscfr_cli::{CliError, Result};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

/// Discounted CFR solvers with hyperparameter schedules.
#[derive(Parser)]
#[command(name = "hscfr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print histories, infosets and leaves of a game, checked against the reference sizes.
    Stats(StatsArgs),
    /// Run one solver and write its convergence curve.
    Solve(SolveArgs),
    /// Run every entry of a JSON config and summarize the results.
    Bench(BenchArgs),
    /// Evaluate a strategy profile stored as JSON.
    Exploit(ExploitArgs),
    /// Print convergence bounds and schedule weights, or dump a schedule.
    Bound(BoundArgs),
}

#[derive(Args, Clone, Default)]
struct GameFlags {
    /// Goofspiel cards, Liar's dice faces or Battleship width.
    #[arg(long)]
    x: Option<u32>,
    /// Blotto battlefields.
    #[arg(long)]
    fields: Option<u32>,
    /// Blotto resources per player.
    #[arg(long)]
    resources: Option<u32>,
}

impl GameFlags {
    fn params(&self) -> GameParams {
        GameParams {
            x: self.x,
            fields: self.fields,
            resources: self.resources,
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    game: String,
    #[command(flatten)]
    params: GameFlags,
}

#[derive(Args, Clone, Default)]
struct ScheduleFlags {
    /// Override alpha: a constant or "start,slope".
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Override beta: a constant or "start,slope".
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Override gamma: a constant or "start,slope".
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: String,
    #[command(flatten)]
    params: GameFlags,
    /// cfr, cfr_plus, dcfr or pcfr_plus.
    #[arg(long, default_value = "dcfr")]
    variant: String,
    /// Built-in schedule; defaults to the variant's own.
    #[arg(long)]
    schedule: Option<String>,
    #[command(flatten)]
    overrides: ScheduleFlags,
    #[arg(long, default_value_t = 1000)]
    iters: u64,
    /// alternating or simultaneous.
    #[arg(long, default_value = "alternating")]
    mode: String,
    #[arg(long, default_value_t = 10)]
    checkpoint_every: u64,
    /// discounted or power.
    #[arg(long, default_value = "discounted")]
    averaging: String,
    /// Convergence CSV; written to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the final average strategy as JSON.
    #[arg(long)]
    profile_out: Option<PathBuf>,
    /// Write zero wall times so repeated runs give identical files.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    config: PathBuf,
    /// Output directory; defaults to `bench-<config stem>`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of processing units.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct ExploitArgs {
    #[arg(long)]
    game: String,
    #[command(flatten)]
    params: GameFlags,
    /// JSON object mapping infoset keys to probability vectors.
    #[arg(long)]
    profile: PathBuf,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value = "hs30")]
    schedule: String,
    #[command(flatten)]
    overrides: ScheduleFlags,
    #[arg(long, default_value_t = 1000)]
    iters: u64,
    /// Game whose size enters the bounds; without it only schedule facts are printed.
    #[arg(long)]
    game: Option<String>,
    #[command(flatten)]
    params: GameFlags,
    /// Constant of the predictive bound.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Weight level whose first crossing is reported.
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Print `t,alpha,beta,gamma,weight` for every t in 0..=iters instead.
    #[arg(long)]
    dump: bool,
}

fn build_game(name: &str, params: &GameFlags) -> Result<TreeGame> {
    make_game(name, &params.params())
        .and_then(|rules| rules.build())
        .map_err(CliError::from_flags)
}

fn write_path(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(path, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn print_stdout(text: &str) -> Result<()> {
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn stats(args: StatsArgs) -> Result<()> {
    let rules = make_game(&args.game, &args.params.params()).map_err(CliError::from_flags)?;
    let game = rules.build().map_err(CliError::from_flags)?;
    let s = game.stats();
    let line = match rules.reference_size() {
        Some(row) if row.matches(&s) => format!("{} (match)", row.render(&s)),
        Some(row) => format!("{} (mismatch: table {row})", row.render(&s)),
        None => format!("{} {} {} (no reference)", s.histories, s.infosets, s.leaves),
    };
    println!("{line}");
    Ok(())
}

fn solve(args: SolveArgs) -> Result<()> {
    let entry = RunEntry {
        game: Some(args.game.clone()),
        x: args.params.x,
        fields: args.params.fields,
        resources: args.params.resources,
        variant: Some(args.variant),
        schedule: args.schedule,
        alpha: args.overrides.alpha,
        beta: args.overrides.beta,
        gamma: args.overrides.gamma,
        iters: Some(args.iters),
        mode: Some(args.mode),
        checkpoint_every: Some(args.checkpoint_every),
        averaging: Some(args.averaging),
        ..Default::default()
    };
    let spec = resolve_flags(&entry)?;
    let game = spec.rules.build().map_err(CliError::from_flags)?;
    let result = run(&game, &spec.config).map_err(|e| CliError::Validation(e.to_string()))?;
    let text = csv::convergence(&result.checkpoints, !args.no_timing);
    let last = result.checkpoints.last().expect("every run ends on a checkpoint");
    let line = format!(
        "{spec}: final exploitability {} at iteration {} (solver {:.1} ms, evaluation {:.1} ms)",
        csv::float(last.exploitability),
        last.iteration,
        last.elapsed_ms,
        result.evaluation_ms
    );
    match &args.out {
        Some(path) => {
            write_path(path, &text)?;
            println!("{line}");
        }
        None => {
            print_stdout(&text)?;
            eprintln!("{line}");
        }
    }
    if let Some(path) = &args.profile_out {
        write_path(path, &result.average.to_json(&game))?;
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let config = BenchConfig::load(&args.config)?;
    let specs = config.resolve()?;
    let out_dir = args.out_dir.unwrap_or_else(|| {
        let stem = args.config.file_stem().map_or("bench".into(), |s| s.to_string_lossy());
        PathBuf::from(format!("bench-{stem}"))
    });
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let started = Instant::now();
    let outcomes = bench::execute(&specs, jobs)?;
    let summary = bench::write_outputs(&out_dir, &outcomes, !args.no_timing)?;
    print_stdout(&summary.to_csv())?;
    let failed: Vec<_> = outcomes.iter().filter(|o| o.result.is_err()).collect();
    for o in &failed {
        eprintln!("run failed: {}: {}", o.spec, o.result.as_ref().unwrap_err());
    }
    eprintln!(
        "{} runs ({} failed) in {:.1} s, results in {}",
        outcomes.len(),
        failed.len(),
        started.elapsed().as_secs_f64(),
        out_dir.display()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::RunsFailed {
            failed: failed.len(),
            total: outcomes.len(),
        })
    }
}

fn exploit(args: ExploitArgs) -> Result<()> {
    let game = build_game(&args.game, &args.params)?;
    let text = fs::read_to_string(&args.profile).map_err(|e| CliError::io(&args.profile, e))?;
    let profile = StrategyProfile::from_json(&game, &text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", args.profile.display())))?;
    let report = exploitability(&game, &profile).map_err(CliError::from_file)?;
    let mut out = String::from("quantity,value\n");
    for (name, v) in [
        ("best_response_p0", report.best_response[0]),
        ("best_response_p1", report.best_response[1]),
        ("exploitability_p0", report.player_exploitability[0]),
        ("exploitability_p1", report.player_exploitability[1]),
        ("exploitability", report.exploitability),
    ] {
        writeln!(out, "{name},{}", csv::float(v)).unwrap();
    }
    print_stdout(&out)
}

fn schedule_with_overrides(name: &str, overrides: &ScheduleFlags) -> Result<ScheduleSet> {
    let mut set = builtin_schedule(name).map_err(CliError::from_flags)?;
    for (value, slot) in [
        (&overrides.alpha, &mut set.alpha),
        (&overrides.beta, &mut set.beta),
        (&overrides.gamma, &mut set.gamma),
    ] {
        if let Some(v) = value {
            *slot = ScalarSchedule::from_str(v).map_err(CliError::from_flags)?;
        }
    }
    Ok(set)
}

fn bound(args: BoundArgs) -> Result<()> {
    let set = schedule_with_overrides(&args.schedule, &args.overrides)?;
    let n = args.iters;
    if n == 0 {
        return Err(CliError::Usage("--iters must be at least 1".into()));
    }
    let mut out = String::new();
    if args.dump {
        out.push_str("t,alpha,beta,gamma,weight\n");
        for t in 0..=n {
            let h = set.eval(t, n).map_err(CliError::from_flags)?;
            let w = iterate_weight(h.gamma, t);
            let row = [h.alpha, h.beta, h.gamma, w].map(csv::float).join(",");
            writeln!(out, "{t},{row}").unwrap();
        }
        return print_stdout(&out);
    }
    let upper = set.gamma_upper_bound(n);
    let crossing = weight_threshold(&set.gamma, n, args.threshold).map_err(CliError::from_flags)?;
    out.push_str("quantity,value\n");
    writeln!(out, "gamma_upper,{}", csv::float(upper)).unwrap();
    writeln!(out, "within_bound_ranges,{}", set.within_bound_ranges(n)).unwrap();
    writeln!(
        out,
        "weight_threshold_{},{}",
        args.threshold,
        crossing.map_or("none".into(), |t| t.to_string())
    )
    .unwrap();
    if let Some(name) = &args.game {
        let game = build_game(name, &args.params)?;
        let input = BoundInput::for_game(&game, upper, n);
        writeln!(
            out,
            "hs_dcfr,{}",
            csv::float(theorem_bound(&input, BoundKind::HsDcfr, args.k))
        )
        .unwrap();
        writeln!(
            out,
            "hs_pcfr_plus,{}",
            csv::float(theorem_bound(&input, BoundKind::HsPcfrPlus, args.k))
        )
        .unwrap();
    }
    print_stdout(&out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Stats(a) => stats(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Exploit(a) => exploit(a),
        Command::Bound(a) => bound(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
