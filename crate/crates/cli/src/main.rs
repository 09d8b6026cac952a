use clap::{Args, Parser, Subcommand};
use sapgm_cli::formats::{read_metrics, write_large_scale, write_metrics, write_profile};
use sapgm_cli::report::{build_profiles, compute_metrics, load_front_input, parse_labeled};
use sapgm_cli::{execute, write_artifacts, HarnessError, Result, RunManifest, SolverKind};
use sapgm_core::check::{run_all, Hooks};
use sapgm_core::problems::generate_large_scale;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sapgm", version, about = "Multiobjective proximal gradient benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multistart run of one solver on one problem.
    Run(Box<RunArgs>),
    /// Purity, spreads and hypervolume of fronts against their union.
    Metrics(MetricsArgs),
    /// Performance profiles over metrics tables.
    Profile(ProfileArgs),
    /// Built-in self-tests.
    Check,
    /// Writes a large-scale data file.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON manifest; flags override its fields.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_enum)]
    solver: Option<SolverKind>,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    mu0: Option<f64>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    fw_iters: Option<usize>,
    /// Backtrack on the smallest objective decrease instead of the largest.
    #[arg(long)]
    paper_literal_backtrack: bool,
    /// Dimension of JOS1.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    m_rows: Option<usize>,
    #[arg(long)]
    large_n: Option<usize>,
    #[arg(long)]
    spar: Option<f64>,
    #[arg(long)]
    data_seed: Option<u64>,
    /// Large-scale data file from `sapgm gen`.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    l1_in_prox: bool,
    /// Also write trace.csv.
    #[arg(long)]
    trace: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// `label=path` per front; a path may be a front CSV or a run directory.
    #[arg(required = true)]
    fronts: Vec<String>,
    /// Hypervolume reference point, comma separated.
    #[arg(long, value_delimiter = ',')]
    ref_point: Option<Vec<f64>>,
    #[arg(long, default_value = "metrics.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    /// One metrics.csv per problem.
    #[arg(required = true)]
    tables: Vec<PathBuf>,
    /// Log-spaced grid points added to the ratio breakpoints.
    #[arg(long, default_value_t = 100)]
    grid: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 500)]
    m_rows: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    spar: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = sapgm_core::problems::DEFAULT_EPS_HAT)]
    eps_hat: f64,
    #[arg(long)]
    out: PathBuf,
}

fn manifest_from(args: &RunArgs) -> Result<RunManifest> {
    let mut m = match &args.manifest {
        Some(p) => RunManifest::load(p)?,
        None => RunManifest::default(),
    };
    if let Some(v) = &args.problem {
        m.problem = v.clone();
    }
    if let Some(v) = args.solver {
        m.solver = v;
    }
    macro_rules! set {
        ($($flag:ident => $($field:ident).+),* $(,)?) => {
            $(if let Some(v) = args.$flag.clone() { m.$($field).+ = v; })*
        };
    }
    set!(
        starts => starts,
        seed => seed,
        alpha => config.alpha,
        sigma => config.sigma,
        mu0 => config.mu0,
        gamma0 => config.gamma0,
        eta => config.eta,
        eps => config.eps,
        max_iter => config.max_iter,
        fw_iters => config.fw_iters,
        dim => params.n,
        m_rows => params.m_rows,
        large_n => params.large_n,
        spar => params.spar,
        data_seed => params.data_seed,
    );
    if args.data.is_some() {
        m.params.data_file = args.data.clone();
    }
    if args.out.is_some() {
        m.out = args.out.clone();
    }
    m.config.paper_literal_backtrack |= args.paper_literal_backtrack;
    m.params.l1_in_prox |= args.l1_in_prox;
    m.trace |= args.trace;
    if m.problem.is_empty() {
        return Err(HarnessError::usage("no problem given; pass --problem or a manifest"));
    }
    Ok(m)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let m = manifest_from(&args)?;
    let out = m.out.clone().ok_or_else(|| HarnessError::usage("no output directory; pass --out"))?;
    let art = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| HarnessError::usage(e.to_string()))?
            .install(|| execute(&m))?,
        None => execute(&m)?,
    };
    write_artifacts(&art, &out)?;
    let s = art.summary();
    println!(
        "{} {}: {} starts, {} converged, {} outer iterations, {:.3} s, front {}",
        s.solver, s.problem, s.starts, s.converged, s.total_outer_iters, s.total_time_s, s.front_size
    );
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<()> {
    let inputs = args
        .fronts
        .iter()
        .map(|a| parse_labeled(a).and_then(|(l, p)| load_front_input(&l, &p)))
        .collect::<Result<Vec<_>>>()?;
    let rows = compute_metrics(&inputs, args.ref_point.as_deref())?;
    write_metrics(BufWriter::new(File::create(&args.out)?), &rows)?;
    write_metrics(std::io::stdout().lock(), &rows)
}

fn cmd_profile(args: ProfileArgs) -> Result<()> {
    let tables = args.tables.iter().map(|p| read_metrics(p)).collect::<Result<Vec<_>>>()?;
    let profiles = build_profiles(&tables, args.grid)?;
    std::fs::create_dir_all(&args.out)?;
    for (metric, p) in profiles {
        let path = args.out.join(format!("profile_{metric}.csv"));
        write_profile(BufWriter::new(File::create(&path)?), &p.curves)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_check() -> bool {
    let mut ok = true;
    for r in run_all(&Hooks::default()) {
        println!("{}: {} cases, {} failed", r.name, r.cases, r.failures.len());
        for f in &r.failures {
            println!("  FAIL {f}");
        }
        ok &= r.passed();
    }
    println!("{}", if ok { "all suites passed" } else { "some suites failed" });
    ok
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let mut d = generate_large_scale(args.m_rows, args.n, args.spar, args.seed)?;
    d.epsilon_hat = args.eps_hat;
    write_large_scale(BufWriter::new(File::create(&args.out)?), &d)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(*a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Check => {
            return if cmd_check() { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
