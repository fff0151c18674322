//! `cp2flow`: runs the flow scenarios, the minimal-profile search and the
//! closure catalog from the command line.
//!
//! Exit codes: 0 success, 2 event-assertion failure, 3 numerical failure,
//! 4 configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cp2flow::minimal_family::{catalog, catalog_csv, find_closed, synthesize_profile};
use cp2flow::scenario::{builtin, render_svg, run_scenario, Decoration, RunManifest, ScenarioSpec, BUILTIN};
use cp2flow::{ConeSpec, Error};
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(name = "cp2flow", version, about = "Equivariant Lagrangian mean curvature flow in CP2 with neck-to-neck surgery")]
struct Cli {
    /// Scenario spec (JSON); overrides the built-in spec where one applies.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Vertices per component.
    #[arg(long, global = true)]
    vertices: Option<usize>,
    /// Seed for randomly perturbed initial curves.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Scenarios run in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the scenario given by --config.
    Flow,
    /// Closed minimal profile from (m, k), or from C over m periods.
    Minimal {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 1e6)]
        c_max: f64,
    },
    /// Monotone Chekanov collapse through one surgery to the Clifford torus.
    SurgeryDemo,
    /// Run built-in scenarios by name, or `all`.
    Scenario {
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Closure catalog of minimal profiles as CSV, with optional spirographs.
    Catalog {
        #[arg(long, default_value_t = 40)]
        m_max: u32,
        #[arg(long, default_value_t = 1e6)]
        c_max: f64,
        #[arg(long)]
        svg: bool,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Assertion(String),
    Numerical(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Config(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Assertion(m) | Failure::Numerical(m) | Failure::Config(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::Generator(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn load_spec(path: &Path) -> Result<ScenarioSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    ScenarioSpec::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn with_vertices(mut spec: ScenarioSpec, vertices: Option<usize>) -> ScenarioSpec {
    if let Some(n) = vertices {
        spec.config.vertices_per_component = n;
    }
    spec
}

fn verdict(m: &RunManifest) -> Result<(), Failure> {
    println!("{m}");
    if m.halted() {
        return Err(Failure::Numerical(format!("{}: flow halted", m.scenario)));
    }
    if !m.event_check.pass {
        return Err(Failure::Assertion(format!("{}: event assertion failed", m.scenario)));
    }
    if !m.self_checks_pass() {
        return Err(Failure::Assertion(format!("{}: generator self-check failed", m.scenario)));
    }
    Ok(())
}

fn run_one(spec: &ScenarioSpec, cli: &Cli, dir: &Path) -> Result<(), Failure> {
    let m = run_scenario(spec, cli.seed, Some(dir))?;
    verdict(&m)
}

fn scenarios(cli: &Cli, names: &[String]) -> Result<(), Failure> {
    let names: Vec<String> =
        if names.iter().any(|n| n == "all") { BUILTIN.iter().map(|s| s.to_string()).collect() } else { names.to_vec() };
    let mut specs = vec![];
    for n in &names {
        let spec = builtin(n).ok_or_else(|| Failure::Config(format!("unknown scenario {n:?}; try: {}", BUILTIN.join(", "))))?;
        specs.push(with_vertices(spec, cli.vertices));
    }
    if let (Some(path), [_]) = (&cli.config, specs.as_slice()) {
        specs[0] = with_vertices(load_spec(path)?, cli.vertices);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .map_err(|e| Failure::Config(e.to_string()))?;
    let results: Vec<Result<(), Failure>> =
        pool.install(|| specs.par_iter().map(|s| run_one(s, cli, &cli.out.join(&s.name))).collect());
    // report the most severe failure
    let mut worst: Option<Failure> = None;
    for r in results {
        if let Err(f) = r {
            eprintln!("error: {}", f.message());
            if worst.as_ref().map_or(true, |w| f.code() > w.code()) {
                worst = Some(f);
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn minimal(cli: &Cli, m: u32, k: Option<u32>, c: Option<f64>, c_max: f64) -> Result<(), Failure> {
    let per = cli.vertices.unwrap_or(400);
    let (profile, label) = match (c, k) {
        (Some(c), _) => (synthesize_profile(c, per, m as usize)?, format!("C = {c}, m = {m}")),
        (None, Some(k)) => {
            let sol = find_closed(m, k, c_max, per)?
                .ok_or_else(|| Failure::Numerical(format!("no closed profile for (m, k) = ({m}, {k}) below C = {c_max}")))?;
            let label = format!("m = {}, k = {}, C = {:.12}, closure gap {:.3e}", sol.m, sol.k, sol.c, sol.closure_gap);
            (sol.profile, label)
        }
        (None, None) => return Err(Failure::Config("minimal needs --k or --c".into())),
    };
    std::fs::create_dir_all(&cli.out).map_err(|e| Failure::Config(e.to_string()))?;
    let svg = render_svg(&[&profile], &[Decoration::Cone(ConeSpec::symmetric(std::f64::consts::FRAC_PI_2))]);
    std::fs::write(cli.out.join("minimal.json"), profile.to_json()).map_err(|e| Failure::Config(e.to_string()))?;
    std::fs::write(cli.out.join("minimal.svg"), svg).map_err(|e| Failure::Config(e.to_string()))?;
    println!("{label}");
    Ok(())
}

fn catalog_cmd(cli: &Cli, m_max: u32, c_max: f64, svg: bool) -> Result<(), Failure> {
    let entries = catalog(m_max, c_max)?;
    let csv = catalog_csv(&entries);
    print!("{csv}");
    std::fs::create_dir_all(&cli.out).map_err(|e| Failure::Config(e.to_string()))?;
    std::fs::write(cli.out.join("catalog.csv"), &csv).map_err(|e| Failure::Config(e.to_string()))?;
    if svg {
        let per = cli.vertices.unwrap_or(200);
        for e in &entries {
            let profile = synthesize_profile(e.c, per, e.m as usize)?;
            let name = format!("spirograph_{}_{}.svg", e.m, e.k);
            std::fs::write(cli.out.join(name), render_svg(&[&profile], &[])).map_err(|e| Failure::Config(e.to_string()))?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Flow => {
            let path = cli.config.as_ref().ok_or_else(|| Failure::Config("flow needs --config <spec.json>".into()))?;
            let spec = with_vertices(load_spec(path)?, cli.vertices);
            run_one(&spec, cli, &cli.out)
        }
        Command::Minimal { m, k, c, c_max } => minimal(cli, *m, *k, *c, *c_max),
        Command::SurgeryDemo => {
            let spec = with_vertices(builtin("chekanov_collapse").expect("builtin exists"), cli.vertices);
            run_one(&spec, cli, &cli.out)
        }
        Command::Scenario { names } => scenarios(cli, names),
        Command::Catalog { m_max, c_max, svg } => catalog_cmd(cli, *m_max, *c_max, *svg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
