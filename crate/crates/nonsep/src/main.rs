use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonsep::error::{EXIT_ASSERTION, EXIT_INPUT};
use nonsep::formats::{CoverJson, CubeFamilyJson, FamilyJson, LatticeJson, PolytopeJson, SigmaJson, SplitJson, WitnessJson};
use nonsep::scenario::{self, default_resolution, default_samples, default_window, t_grid};
use nonsep::{csv_string, emit, fmt_f64, read_json, tolerance, Error};
use nonsep_core::asymmetry::{sigma_bisection, sigma_lp};
use nonsep_core::covering::{lambda_min, sigma_cover, summand_failure, weighted_cover};
use nonsep_core::cubes::{construct_extremal, exhaustive_max, extremal_values, Objective};
use nonsep_core::lattice::weak_covering_minimum_1;
use nonsep_core::random::rng_from_seed;
use nonsep_core::{LatticeArrangement, ToleranceContext};
use serde_json::json;

/// Non-separable families of homothets: deciders, covering solvers,
/// asymmetry, lattice arrangements and integer cube extremals.
#[derive(Parser)]
#[command(name = "nonsep", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Geometric and gap tolerance; the LP tolerance is ten times this.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file (output directory for `run`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its report and CSV.
    Run { scenario: PathBuf },
    /// Certified cover of a WNS family: weighted for symmetric bases, sigma-scaled otherwise.
    Cover { family: PathBuf },
    /// Smallest covering homothet ratio of a family.
    Lambda { family: PathBuf },
    /// Minkowski asymmetry and a Minkowski center.
    Sigma {
        body: PathBuf,
        #[arg(long, value_enum, default_value = "lp")]
        method: SigmaMethod,
    },
    /// Weak non-separability with a separating hyperplane witness.
    Wns { family: PathBuf },
    /// Non-separability with a separated bipartition witness.
    Ns { family: PathBuf },
    /// Whether the first polytope is a Minkowski summand of the second.
    Summand { q: PathBuf, k: PathBuf },
    /// Lattice arrangements of a body.
    Lattice {
        #[command(subcommand)]
        task: LatticeCommand,
    },
    /// Integer families of unit squares.
    Cubes {
        #[command(subcommand)]
        task: CubesCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaMethod {
    Lp,
    Bisection,
}

#[derive(Args)]
struct LatticeInput {
    body: PathBuf,
    lattice: PathBuf,
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Bracket on the tightness of `body + lattice`.
    Tightness {
        #[command(flatten)]
        input: LatticeInput,
        /// Largest accepted bracket width.
        #[arg(long, default_value_t = default_resolution())]
        resolution: f64,
    },
    /// Non-separability through the dual lattice.
    Ns {
        #[command(flatten)]
        input: LatticeInput,
    },
    /// Weak covering minimum curve as CSV (t, hit_fraction, miss_margin).
    Mu1w {
        #[command(flatten)]
        input: LatticeInput,
        /// Coefficient window of the lattice patch.
        #[arg(long, default_value_t = default_window())]
        window: i64,
        /// Sampled hyperplanes per t.
        #[arg(long, default_value_t = default_samples())]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Area,
    Perimeter,
}

#[derive(Subcommand)]
enum CubesCommand {
    /// Exhaustive maximum over WNS placements in the n x n grid (4 <= n <= 6).
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "area")]
        objective: ObjectiveArg,
    },
    /// The extremal construction and the closed-form maxima.
    Extremal {
        #[arg(long)]
        n: usize,
    },
}

fn json_line(v: &impl serde::Serialize) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Returns the exit status of a successful evaluation.
fn execute(cli: &Cli, tol: &ToleranceContext) -> Result<u8, Error> {
    let out = cli.out.as_deref();
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Run { scenario: path } => {
            let (o, dir) = scenario::run_scenario(path, out, cli.seed, tol)?;
            for c in &o.report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("report written to {}", dir.display());
            return Ok(if o.report.passed { 0 } else { EXIT_ASSERTION });
        }
        Command::Cover { family } => {
            let f = read_json::<FamilyJson>(family)?.to_family(tol)?;
            let c = if f.base().is_origin_symmetric() {
                weighted_cover(&f, tol)?
            } else {
                sigma_cover(&f, &sigma_lp(f.base(), tol)?, tol)?
            };
            emit(out, &json_line(&CoverJson::from(&c))?)?;
            return Ok(if c.certified { 0 } else { EXIT_ASSERTION });
        }
        Command::Lambda { family } => {
            let f = read_json::<FamilyJson>(family)?.to_family(tol)?;
            let c = lambda_min(&f, tol)?;
            emit(out, &json_line(&CoverJson::from(&c))?)?;
            return Ok(if c.certified { 0 } else { EXIT_ASSERTION });
        }
        Command::Sigma { body, method } => {
            let p = read_json::<PolytopeJson>(body)?.to_polytope(tol)?;
            let r = match method {
                SigmaMethod::Lp => sigma_lp(&p, tol)?,
                SigmaMethod::Bisection => sigma_bisection(&p, tol)?,
            };
            emit(out, &json_line(&SigmaJson { sigma: r.sigma, q: r.center })?)?;
        }
        Command::Wns { family } => {
            let f = read_json::<FamilyJson>(family)?.to_family(tol)?;
            let w = f.wns_witness(tol);
            let v = json!({"wns": w.is_none(), "witness": w.as_ref().map(WitnessJson::from)});
            emit(out, &json_line(&v)?)?;
        }
        Command::Ns { family } => {
            let f = read_json::<FamilyJson>(family)?.to_family(tol)?;
            let split = f.ns_witness(tol)?;
            let v = json!({"ns": split.is_none(), "split": split.as_ref().map(SplitJson::from)});
            emit(out, &json_line(&v)?)?;
        }
        Command::Summand { q, k } => {
            let q = read_json::<PolytopeJson>(q)?.to_polytope(tol)?;
            let k = read_json::<PolytopeJson>(k)?.to_polytope(tol)?;
            let fail = summand_failure(&q, &k, tol)?;
            emit(out, &json_line(&json!({"summand": fail.is_none(), "failing_direction": fail}))?)?;
        }
        Command::Lattice { task } => lattice(task, out, seed, tol)?,
        Command::Cubes { task } => cubes(task, out)?,
    }
    Ok(0)
}

fn load_arrangement(input: &LatticeInput, tol: &ToleranceContext) -> Result<LatticeArrangement, Error> {
    let body = read_json::<PolytopeJson>(&input.body)?.to_polytope(tol)?;
    let lattice = read_json::<LatticeJson>(&input.lattice)?.to_lattice()?;
    Ok(LatticeArrangement::new(body, lattice)?)
}

fn lattice(task: &LatticeCommand, out: Option<&Path>, seed: u64, tol: &ToleranceContext) -> Result<(), Error> {
    match task {
        LatticeCommand::Tightness { input, resolution } => {
            let b = load_arrangement(input, tol)?.tightness(*resolution)?;
            emit(out, &json_line(&json!({"lower": b.lower, "upper": b.upper}))?)
        }
        LatticeCommand::Ns { input } => {
            let arr = load_arrangement(input, tol)?;
            let (ns, l1) = arr.is_ns(tol)?;
            let (density, bound) = arr.density_bound(tol)?;
            emit(out, &json_line(&json!({"ns": ns, "dual_minimum": l1, "density": density, "density_bound": bound}))?)
        }
        LatticeCommand::Mu1w { input, window, samples, t_max, steps } => {
            let arr = load_arrangement(input, tol)?;
            let mut rng = rng_from_seed(seed);
            let rows = weak_covering_minimum_1(&arr.body, &arr.lattice, &t_grid(*t_max, *steps), *window, *samples, &mut rng)?;
            let csv = csv_string(
                &["t", "hit_fraction", "miss_margin"],
                rows.iter().map(|r| vec![fmt_f64(r.t), fmt_f64(r.hit_fraction), fmt_f64(r.miss_margin)]),
            )?;
            emit(out, &csv)
        }
    }
}

fn cubes(task: &CubesCommand, out: Option<&Path>) -> Result<(), Error> {
    match task {
        CubesCommand::Search { n, objective } => {
            let obj = match objective {
                ObjectiveArg::Area => Objective::Area,
                ObjectiveArg::Perimeter => Objective::Perimeter,
            };
            let r = exhaustive_max(*n, obj)?;
            let v = json!({"value": r.value, "family": CubeFamilyJson::from_family(&r.family), "evaluated": r.evaluated});
            emit(out, &json_line(&v)?)
        }
        CubesCommand::Extremal { n } => {
            let f = construct_extremal(*n)?;
            let (area, perimeter) = f.hull_metrics()?;
            let (ca, cp) = extremal_values(*n as u64);
            let v = json!({
                "family": CubeFamilyJson::from_family(&f),
                "wns": f.is_wns(),
                "area": area,
                "perimeter": perimeter,
                "closed_form": {"area": ca, "perimeter": cp},
            });
            emit(out, &json_line(&v)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let result = tolerance(cli.tol).and_then(|tol| execute(&cli, &tol));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
