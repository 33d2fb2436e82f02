//! Command-line front end: instance generation, single-instance solving,
//! full benchmark experiments, and the mapping-cost comparison table.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use klima::bench::{self, ExperimentConfig};
use klima::cnf;
use klima::energy::{iteration_energy, latency_per_iteration, EnergyParams};
use klima::metrics;
use klima::solvers::{
    heuristic_label, parse_heuristic_name, run_instance, NoiseConfig, NoiseDistribution,
    SolverConfig, TieBreak,
};

#[derive(Parser)]
#[command(
    name = "klima",
    about = "Behavioral simulator and benchmark harness for an in-memory SAT accelerator",
    version
)]
struct Cli {
    /// Worker threads for parallel tries (0 = all cores). Results are
    /// independent of this setting.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random k-SAT instances in DIMACS format.
    Generate(GenerateArgs),
    /// Solve one DIMACS instance and report solution metrics as JSON.
    Solve(SolveArgs),
    /// Run a benchmark experiment described by a TOML config.
    Benchmark(BenchmarkArgs),
    /// Print the crossbar-vs-dense mapping cost comparison.
    Advantage(AdvantageArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Output directory for the .cnf files.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    num_vars: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Clause-to-variable ratio.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep only instances a probe solver can satisfy.
    #[arg(long, default_value_t = false)]
    filter_satisfiable: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF file.
    file: PathBuf,
    /// gsat, walksat, walksat-skc, gwsat, mnsat[-u|-n], gnsat[-u|-n]
    #[arg(long, default_value = "walksat-skc")]
    heuristic: String,
    #[arg(long, default_value_t = 10_000)]
    max_flips: usize,
    #[arg(long, default_value_t = 100)]
    max_tries: usize,
    /// Noise scale relative to the largest per-variable clause fan-in.
    #[arg(long, default_value_t = 0.2)]
    sigma_rel: f64,
    #[arg(long, default_value_t = 0.5)]
    walk_p: f64,
    #[arg(long, default_value_t = 0.5)]
    gwsat_wp: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target success probability for the iterations-to-solution figure.
    #[arg(long, default_value_t = 0.99)]
    p_target: f64,
    /// Optional circuit parameter TOML overriding the built-in defaults.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for results.csv and report.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AdvantageArgs {
    /// Clause width; with --num-vars/--num-clauses prints one instance row,
    /// alone prints the asymptotic value at the phase-transition density.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    num_vars: Option<usize>,
    #[arg(long)]
    num_clauses: Option<usize>,
    /// Clause density for the asymptotic figure (default: phase transition).
    #[arg(long)]
    alpha: Option<f64>,
}

/// Phase-transition clause densities for random k-SAT.
fn phase_transition_alpha(k: usize) -> Option<f64> {
    match k {
        3 => Some(4.267),
        4 => Some(9.931),
        5 => Some(21.117),
        6 => Some(43.37),
        _ => None,
    }
}

fn load_params(path: Option<&Path>) -> Result<EnergyParams, String> {
    match path {
        None => Ok(EnergyParams::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            EnergyParams::from_toml_str(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), String> {
    let spec = bench::GenerateSpec {
        count: args.count,
        num_vars: args.num_vars,
        k: args.k,
        alpha: args.alpha,
        filter_satisfiable: args.filter_satisfiable,
        probe_max_flips: 50_000,
        probe_max_tries: 10,
    };
    let suite = bench::generate_instances(&spec, args.seed).map_err(|e| e.to_string())?;
    fs::create_dir_all(&args.out_dir).map_err(|e| format!("{}: {e}", args.out_dir.display()))?;
    for (id, formula) in &suite {
        let path = args.out_dir.join(format!("{id}.cnf"));
        fs::write(&path, cnf::write_dimacs(formula))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    println!("wrote {} instances to {}", suite.len(), args.out_dir.display());
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<(), String> {
    let (heuristic, noise_override) = parse_heuristic_name(&args.heuristic)?;
    let text =
        fs::read_to_string(&args.file).map_err(|e| format!("{}: {e}", args.file.display()))?;
    let formula = cnf::parse_dimacs(&text).map_err(|e| e.to_string())?;
    let params = load_params(args.params.as_deref())?;
    let distribution = noise_override.unwrap_or(if heuristic.uses_noise() {
        NoiseDistribution::Uniform
    } else {
        NoiseDistribution::None
    });
    let config = SolverConfig {
        heuristic,
        noise: NoiseConfig {
            distribution,
            sigma_rel: args.sigma_rel,
            ..NoiseConfig::default()
        },
        max_flips: args.max_flips,
        max_tries: args.max_tries,
        walk_p: args.walk_p,
        gwsat_wp: args.gwsat_wp,
        seed: args.seed,
        tie_break: TieBreak::Random,
    };
    config.validate()?;
    let id = args
        .file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let record = run_instance(&formula, &config, &id);
    let solved = record.tries.iter().filter(|t| t.solved).count();
    let breakdown = iteration_energy(
        heuristic,
        distribution,
        formula.num_clauses(),
        formula.num_vars(),
        &record.activity,
        &params,
    );
    let latency = latency_per_iteration(&params);
    let optimum = metrics::optimal_its(&record.tries, args.p_target);
    let summary = serde_json::json!({
        "instance_id": id,
        "heuristic": heuristic_label(heuristic, distribution),
        "num_vars": formula.num_vars(),
        "num_clauses": formula.num_clauses(),
        "tries": record.tries.len(),
        "solved_tries": solved,
        "success_fraction": solved as f64 / record.tries.len() as f64,
        "opt_flips": optimum.map(|(t, _)| t),
        "its": optimum.map(|(_, v)| v),
        "tts_seconds": optimum.map(|(_, v)| metrics::tts(latency, v)),
        "energy_per_iteration_joules": breakdown.total,
        "ets_joules": optimum.map(|(_, v)| metrics::ets(breakdown.total, v)),
        "energy_breakdown": breakdown,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    Ok(())
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), String> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("{}: {e}", args.config.display()))?;
    let config = ExperimentConfig::from_toml_str(&text).map_err(|e| e.to_string())?;
    let base_dir = args
        .config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    let report = bench::run_experiment(&config, &base_dir).map_err(|e| e.to_string())?;
    fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let csv_path = args.out.join("results.csv");
    let csv = bench::results_csv_string(&report.rows).map_err(|e| e.to_string())?;
    fs::write(&csv_path, &csv).map_err(|e| format!("{}: {e}", csv_path.display()))?;
    let json_path = args.out.join("report.json");
    let json = bench::report_json(&report).map_err(|e| e.to_string())?;
    fs::write(&json_path, &json).map_err(|e| format!("{}: {e}", json_path.display()))?;
    println!(
        "benchmarked {} instances x {} heuristics -> {}",
        report.rows.len() / report.summaries.len().max(1),
        report.summaries.len(),
        args.out.display()
    );
    for s in &report.summaries {
        match s.median_its {
            Some(v) => println!("  {:<12} median ITS {v:.1}", s.heuristic),
            None => println!("  {:<12} unsolved", s.heuristic),
        }
    }
    Ok(())
}

fn cmd_advantage(args: &AdvantageArgs) -> Result<(), String> {
    if args.k < 2 {
        return Err("k must be at least 2".into());
    }
    match (args.num_vars, args.num_clauses) {
        (Some(v), Some(c)) => {
            let tcam = metrics::coupling_count_tcam(v, c);
            let dense = metrics::coupling_count_dense(v, c, args.k);
            println!(
                "k={} V={} C={}: crossbar cells {} vs dense couplings {} (advantage {:.3}x)",
                args.k,
                v,
                c,
                tcam,
                dense,
                metrics::mapping_advantage(v, c, args.k)
            );
        }
        (None, None) => {
            let alpha = match args.alpha.or_else(|| phase_transition_alpha(args.k)) {
                Some(a) => a,
                None => return Err(format!("no built-in density for k = {}; pass --alpha", args.k)),
            };
            println!(
                "k={} alpha={}: asymptotic advantage {:.3}x",
                args.k,
                alpha,
                metrics::asymptotic_advantage(args.k, alpha)
            );
        }
        _ => return Err("pass both --num-vars and --num-clauses, or neither".into()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: could not size thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Benchmark(args) => cmd_benchmark(args),
        Command::Advantage(args) => cmd_advantage(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
