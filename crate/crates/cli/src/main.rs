//! Command-line front end. Exit codes: 0 success, 1 usage/input error,
//! 2 computation error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qaoa_landscape::analytic::{summary_analytic, UniformMode, UniformModel};
use qaoa_landscape::experiments::{
    default_shots, run_landscape_comparison, run_sat_alpha, run_success_comparison,
};
use qaoa_landscape::io::{
    alpha_reports_to_csv, columns_to_csv, cross_section_to_csv, grid_to_csv, load_ensemble,
    load_summary, read_text, report_to_csv, run_pipeline, save_ensemble, to_json, write_text,
    RunConfig,
};
use qaoa_landscape::landscape::{eval_grid, ApproxLandscape};
use qaoa_landscape::optimize::{optimize_instance, optimize_problem, OptConfig};
use qaoa_landscape::problems::{build_ensemble, Dedupe, Family, FamilyParams};
use qaoa_landscape::structure::summarize;
use qaoa_landscape::{AngleGrid, Error, Result};

#[derive(Parser)]
#[command(
    name = "qaoa-landscape",
    version,
    about = "Depth-1 QAOA landscapes from solution-space structure"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded ensemble of problem instances.
    Gen(GenArgs),
    /// Aggregate an ensemble into a structural summary.
    Summarize {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form summary of uniformly sampled target spaces.
    AnalyticUniform {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t_size: u64,
        /// paper | exact_hypergeometric
        #[arg(long, default_value = "paper")]
        mode: UniformMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a landscape grid and a fixed-gamma cross-section.
    Landscape(LandscapeArgs),
    /// Optimise angles for a problem (summary) or a single instance.
    Optimize(OptimizeArgs),
    /// Standard vs non-iterative QAOA on every instance of an ensemble.
    Compare {
        #[arg(long)]
        ensemble: PathBuf,
        /// Shots per instance (default: 100 for qrfactor, 50 otherwise).
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Success comparison on random 3-SAT across clause densities.
    SatAlpha {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        shots: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full pipeline described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// uniform: number of targets (default 2^(n-1)).
    #[arg(long)]
    t_size: Option<usize>,
    /// clustered: number of cluster seeds (default 3).
    #[arg(long)]
    num_seeds: Option<usize>,
    /// clustered: walks per seed (default 30).
    #[arg(long)]
    per_seed: Option<usize>,
    /// clustered: retry | drop duplicate walk endpoints.
    #[arg(long)]
    dedupe: Option<String>,
    /// sat: number of clauses (default 4n).
    #[arg(long, conflicts_with = "alpha")]
    clauses: Option<usize>,
    /// sat: clause-to-variable ratio; uses floor(alpha * n) clauses.
    #[arg(long)]
    alpha: Option<f64>,
    /// kclique: clique size (default 3).
    #[arg(long)]
    k: Option<u32>,
    /// kclique: edge probability (default 0.5).
    #[arg(long)]
    edge_prob: Option<f64>,
}

#[derive(Args)]
struct LandscapeArgs {
    /// Approximate landscape of this summary.
    #[arg(
        long,
        conflicts_with = "ensemble",
        required_unless_present = "ensemble"
    )]
    summary: Option<PathBuf>,
    /// Exact mean landscape of this ensemble, with approximation and error.
    #[arg(long)]
    ensemble: Option<PathBuf>,
    /// BETAxGAMMA points over [0, pi] x [0, 2pi].
    #[arg(long, default_value = "100x100", value_parser = parse_grid)]
    grid: AngleGrid,
    /// Gamma of the cross-section.
    #[arg(long = "cross-section", default_value_t = 1.2)]
    gamma_c: f64,
    /// Main grid CSV; companions are written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(
        long,
        conflicts_with = "ensemble",
        required_unless_present = "ensemble"
    )]
    summary: Option<PathBuf>,
    #[arg(long, requires = "instance")]
    ensemble: Option<PathBuf>,
    /// Instance id within the ensemble (standard QAOA).
    #[arg(long)]
    instance: Option<usize>,
    /// Coarse grid of the optimiser, BETAxGAMMA.
    #[arg(long, value_parser = parse_grid_periodic)]
    coarse: Option<AngleGrid>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected BETAxGAMMA, got `{s}`"))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| format!("bad beta count `{a}`"))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| format!("bad gamma count `{b}`"))?;
    Ok((a, b))
}

fn parse_grid(s: &str) -> std::result::Result<AngleGrid, String> {
    let (a, b) = parse_dims(s)?;
    AngleGrid::landscape(a, b).map_err(|e| e.to_string())
}

fn parse_grid_periodic(s: &str) -> std::result::Result<AngleGrid, String> {
    let (a, b) = parse_dims(s)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    AngleGrid::new(
        (0.0, std::f64::consts::PI),
        (0.0, two_pi * (b as f64 - 1.0) / b as f64),
        a,
        b,
    )
    .map_err(|e| e.to_string())
}

fn family_params(args: &GenArgs) -> Result<FamilyParams> {
    let n = args.n;
    let base = FamilyParams::default_for(args.family, n);
    Ok(match base {
        FamilyParams::Uniform { t_size } => FamilyParams::Uniform {
            t_size: args.t_size.unwrap_or(t_size),
        },
        FamilyParams::Clustered {
            num_seeds,
            per_seed,
            dedupe,
        } => FamilyParams::Clustered {
            num_seeds: args.num_seeds.unwrap_or(num_seeds),
            per_seed: args.per_seed.unwrap_or(per_seed),
            dedupe: match args.dedupe.as_deref() {
                None => dedupe,
                Some("retry") => Dedupe::Retry,
                Some("drop") => Dedupe::Drop,
                Some(other) => {
                    return Err(Error::Usage(format!("unknown dedupe policy `{other}`")))
                }
            },
        },
        FamilyParams::Sat { num_clauses } => FamilyParams::Sat {
            num_clauses: match (args.clauses, args.alpha) {
                (Some(c), _) => c,
                (None, Some(a)) if a.is_finite() && a > 0.0 => (a * n as f64).floor() as usize,
                (None, Some(a)) => {
                    return Err(Error::Usage(format!("alpha must be positive, got {a}")))
                }
                (None, None) => num_clauses,
            },
        },
        FamilyParams::KClique { k, edge_prob } => FamilyParams::KClique {
            k: args.k.unwrap_or(k),
            edge_prob: args.edge_prob.unwrap_or(edge_prob),
        },
        FamilyParams::QrFactor => FamilyParams::QrFactor,
    })
}

/// `dir/stem_suffix.csv` next to `path`.
fn companion(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen(args) => {
            let params = family_params(&args)?;
            let ensemble = build_ensemble(&params, args.n, args.count, args.seed)?;
            save_ensemble(&args.out, &ensemble)?;
            eprintln!(
                "wrote {} instances to {}",
                ensemble.len(),
                args.out.display()
            );
        }
        Command::Summarize { ensemble, out } => {
            let summary = summarize(&load_ensemble(&ensemble)?)?;
            emit(out.as_deref(), &to_json(&summary)?)?;
        }
        Command::AnalyticUniform {
            n,
            t_size,
            mode,
            out,
        } => {
            let summary = summary_analytic(&UniformModel::new(n, t_size, mode)?);
            emit(out.as_deref(), &to_json(&summary)?)?;
        }
        Command::Landscape(args) => landscape(args)?,
        Command::Optimize(args) => {
            let mut config = OptConfig::default();
            if let Some(grid) = args.coarse {
                config.coarse_grid = grid;
            }
            let result = match (&args.summary, &args.ensemble, args.instance) {
                (Some(s), _, _) => optimize_problem(&load_summary(s)?, &config)?,
                (None, Some(e), Some(id)) => {
                    let ensemble = load_ensemble(e)?;
                    let inst = ensemble.instances.get(id).ok_or_else(|| {
                        Error::Usage(format!("no instance {id} in {} instances", ensemble.len()))
                    })?;
                    optimize_instance(&inst.target, &config)?
                }
                _ => {
                    return Err(Error::Usage(
                        "need --summary, or --ensemble with --instance".into(),
                    ))
                }
            };
            emit(args.out.as_deref(), &to_json(&result)?)?;
        }
        Command::Compare {
            ensemble,
            shots,
            seed,
            out,
            json,
        } => {
            let ensemble = load_ensemble(&ensemble)?;
            let shots = shots.unwrap_or_else(|| default_shots(ensemble.family()));
            let report = run_success_comparison(&ensemble, &OptConfig::default(), shots, seed)?;
            emit(out.as_deref(), &report_to_csv(&report))?;
            if let Some(path) = json {
                write_text(&path, &to_json(&report)?)?;
            }
            eprintln!(
                "mean success: standard {:.6}, non-iterative {:.6}",
                report.standard.mean_success, report.noniterative.mean_success
            );
        }
        Command::SatAlpha {
            n,
            alphas,
            count,
            seed,
            shots,
            out,
            json,
        } => {
            let reports = run_sat_alpha(n, &alphas, count, seed, &OptConfig::default(), shots)?;
            emit(out.as_deref(), &alpha_reports_to_csv(&reports))?;
            if let Some(path) = json {
                write_text(&path, &to_json(&reports)?)?;
            }
        }
        Command::Run { config } => {
            let config = RunConfig::from_json(&read_text(&config)?)?;
            for path in run_pipeline(&config)? {
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn landscape(args: LandscapeArgs) -> Result<()> {
    if let Some(path) = &args.ensemble {
        let ensemble = load_ensemble(path)?;
        let cmp = run_landscape_comparison(&ensemble, &args.grid, args.gamma_c)?;
        write_text(&args.out, &grid_to_csv(&cmp.mean))?;
        write_text(&companion(&args.out, "approx"), &grid_to_csv(&cmp.approx))?;
        write_text(&companion(&args.out, "error"), &grid_to_csv(&cmp.error))?;
        write_text(&companion(&args.out, "bound"), &grid_to_csv(&cmp.bound))?;
        write_text(
            &companion(&args.out, "cross"),
            &cross_section_to_csv(&cmp.cross_section),
        )?;
        return Ok(());
    }
    let summary = load_summary(args.summary.as_deref().expect("clap enforces one source"))?;
    let approx = ApproxLandscape::new(&summary)?;
    let grid = eval_grid(|a| approx.expected_f1(a.beta, a.gamma), &args.grid)?;
    write_text(&args.out, &grid_to_csv(&grid))?;
    let betas = args.grid.betas();
    let values = betas
        .iter()
        .map(|&b| approx.expected_f1(b, args.gamma_c))
        .collect::<Result<Vec<_>>>()?;
    write_text(
        &companion(&args.out, "cross"),
        &columns_to_csv(&["beta", "value"], &[&betas, &values]),
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: usage error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: usage error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
