//! Command-line front end: solve and verify interpolation instances, build
//! application instances, and time the engines.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use popov_interp::apps::{adversarial_instance, gs_instance, order_basis};
use popov_interp::mib::{interpolant_check, iterative_mib};
use popov_interp::random::{random_instance, ShiftKind};
use popov_interp::wire::{polymat_from_wire, ApproximantFile, GsFile, InstanceFile, ResultFile};
use popov_interp::{popov_mib, InterpInstance, MinimalDegree, Modulus, PolyMat, NTT_PRIME};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "popov-interp", version, about = "Shifted Popov interpolation bases")]
struct Cli {
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent trials (capped by POPOV_INTERP_THREADS).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Popov,
    Iterative,
    OracleCheck,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the shifted Popov interpolation basis of an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "popov")]
        engine: Engine,
    },
    /// Verify a result file against an instance file.
    Check { instance: PathBuf, basis: PathBuf },
    /// Time both engines on random instances and print CSV.
    Bench {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![64, 128, 256])]
        sigma: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Popov basis of Hermite-Padé approximants.
    OrderBasis { problem: PathBuf },
    /// Interpolation step of list decoding: Popov basis of the Q(X, Y).
    GsInterp { problem: PathBuf },
    /// Write an approximation problem whose minimal bases are dense.
    Adversarial {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = NTT_PRIME)]
        p: u64,
    },
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Input(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    emit(out, &text)
}

fn load_instance(path: &Path) -> anyhow::Result<InterpInstance> {
    let file: InstanceFile = read_json(path)?;
    if file.shift.len() != file.m {
        bail!("shift has length {} but m = {}", file.shift.len(), file.m);
    }
    file.to_instance().with_context(|| format!("invalid instance {}", path.display()))
}

fn solve(cli: &Cli, path: &Path, engine: Engine) -> Outcome {
    let inst = load_instance(path)?;
    let (basis, delta) = match engine {
        Engine::Popov => popov_mib(&inst).context("solving")?,
        Engine::Iterative => iterative_mib(&inst),
        Engine::OracleCheck => {
            let fast = popov_mib(&inst).context("solving")?;
            let slow = iterative_mib(&inst);
            if fast != slow {
                return Err(Failure::Verification("engines disagree".into()));
            }
            fast
        }
    };
    emit_json(&cli.out, &ResultFile::new(&basis, &delta))?;
    Ok(())
}

fn check(path_instance: &Path, path_basis: &Path) -> Outcome {
    let inst = load_instance(path_instance)?;
    let result: ResultFile = read_json(path_basis)?;
    let basis = polymat_from_wire(inst.modulus(), &result.basis)
        .with_context(|| format!("invalid basis {}", path_basis.display()))?;
    let m = inst.m();
    if basis.rows() != m || basis.cols() != m {
        return Err(Failure::Verification(format!("basis is {}x{}, expected {m}x{m}", basis.rows(), basis.cols())));
    }
    let diagonal: Vec<usize> = (0..m).map(|i| basis.get(i, i).degree().unwrap_or(0)).collect();
    let checks = [
        ("popov form", basis.is_popov(inst.shift())),
        ("zero residual", interpolant_check(&basis, &inst).unwrap_or(false)),
        ("degree sum within sigma", diagonal.iter().sum::<usize>() <= inst.sigma()),
        ("delta matches diagonal", result.delta == diagonal),
    ];
    let mut failed = Vec::new();
    for (name, ok) in checks {
        println!("{name}: {}", if ok { "ok" } else { "FAILED" });
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed: {}", failed.join(", "))))
    }
}

fn thread_count(jobs: Option<usize>) -> usize {
    let cap = std::env::var("POPOV_INTERP_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    let wanted = jobs.unwrap_or(1).max(1);
    match cap {
        Some(c) if c >= 1 => wanted.min(c),
        _ => wanted,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

fn bench(cli: &Cli, m: usize, sigmas: &[usize], trials: usize) -> Outcome {
    if m == 0 || trials == 0 {
        return Err(Failure::Input(anyhow::anyhow!("m and trials must be positive")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cli.jobs))
        .build()
        .context("building thread pool")?;
    let f = Modulus::new(NTT_PRIME).expect("prime");
    let mut csv = String::from("engine,m,sigma,median_ms\n");
    for (name, engine) in [("popov", Engine::Popov), ("iterative", Engine::Iterative)] {
        for &sigma in sigmas {
            let times: Vec<f64> = pool.install(|| {
                (0..trials)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.wrapping_add(t as u64));
                        let inst = random_instance(&mut rng, f, m, sigma, 2, sigma.max(1), ShiftKind::Zero);
                        let start = Instant::now();
                        match engine {
                            Engine::Iterative => drop(iterative_mib(&inst)),
                            _ => drop(popov_mib(&inst).expect("valid instance")),
                        }
                        start.elapsed().as_secs_f64() * 1e3
                    })
                    .collect()
            });
            csv.push_str(&format!("{name},{m},{sigma},{:.3}\n", median(times)));
        }
    }
    emit(&cli.out, &csv)?;
    Ok(())
}

fn write_basis(cli: &Cli, basis: &PolyMat, delta: &MinimalDegree) -> Outcome {
    emit_json(&cli.out, &ResultFile::new(basis, delta))?;
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve { instance, engine } => solve(cli, instance, *engine),
        Command::Check { instance, basis } => check(instance, basis),
        Command::Bench { m, sigma, trials } => bench(cli, *m, sigma, *trials),
        Command::OrderBasis { problem } => {
            let file: ApproximantFile = read_json(problem)?;
            let prob = file.to_problem().context("invalid approximation problem")?;
            let (p, d) = order_basis(&prob).context("solving")?;
            write_basis(cli, &p, &d)
        }
        Command::GsInterp { problem } => {
            let file: GsFile = read_json(problem)?;
            let prob = file.to_problem().context("invalid interpolation problem")?;
            let inst = gs_instance(&prob).context("invalid interpolation problem")?;
            let (p, d) = popov_mib(&inst).context("solving")?;
            write_basis(cli, &p, &d)
        }
        Command::Adversarial { m, sigma, p } => {
            let f = Modulus::new(*p).context("invalid modulus")?;
            let prob = adversarial_instance(f, *m, *sigma, cli.seed).context("invalid parameters")?;
            emit_json(&cli.out, &ApproximantFile::from_problem(&prob))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
