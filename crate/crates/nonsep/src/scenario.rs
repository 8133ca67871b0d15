//! Scenario files: one JSON document naming an experiment, its parameters, a
//! seed and an output directory. A run produces a JSON report and one CSV
//! data series; the run passes iff every embedded check passes.

use std::fs;
use std::path::{Path, PathBuf};

use nonsep_core::asymmetry::{bm_bound_report, polar_sigma_check, sigma_bisection, sigma_lp};
use nonsep_core::covering::{lambda_min, sigma_cover, weighted_cover};
use nonsep_core::cubes::{construct_extremal, exhaustive_max, extremal_values, shadow_normalize, Objective};
use nonsep_core::lattice::{mu1w_estimate, weak_covering_minimum_1};
use nonsep_core::random::{rng_from_seed, DetRng};
use nonsep_core::separability::random_wns_family;
use nonsep_core::stability::{ball_circumradius, cube_counterexample, stability_construction, stability_exponent};
use nonsep_core::{HomotheticFamily, IntegerCubeFamily, LatticeArrangement, Polytope, ToleranceContext};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::formats::{CoverJson, CubeFamilyJson, FamilyJson, LatticeJson, PolytopeJson, WitnessJson};
use crate::{csv_string, fmt_f64, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Stability,
    Cubes,
    Lattice,
    Covering,
    Sigma,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Stability => "stability",
            Kind::Cubes => "cubes",
            Kind::Lattice => "lattice",
            Kind::Covering => "covering",
            Kind::Sigma => "sigma",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default = "empty_object")]
    pub parameters: Value,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToleranceJson {
    pub geom: f64,
    pub lp: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: Kind,
    pub seed: u64,
    pub tolerance: ToleranceJson,
    pub inputs: Value,
    pub results: Value,
    pub certificates: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub csv: String,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

fn params<T: DeserializeOwned>(kind: Kind, v: &Value) -> Result<T, Error> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("{} parameters: {e}", kind.name())))
}

/// Runs a scenario in memory. `seed` overrides the scenario's own seed.
pub fn run(s: &Scenario, seed: Option<u64>, tol: &ToleranceContext) -> Result<Outcome, Error> {
    let seed = seed.unwrap_or(s.seed);
    let mut rng = rng_from_seed(seed);
    let mut checks = Checks(Vec::new());
    let (results, certificates, csv) = match s.kind {
        Kind::Stability => stability(params(s.kind, &s.parameters)?, tol, &mut checks)?,
        Kind::Cubes => cubes(params(s.kind, &s.parameters)?, &mut rng, &mut checks)?,
        Kind::Lattice => lattice(params(s.kind, &s.parameters)?, &mut rng, tol, &mut checks)?,
        Kind::Covering => covering(params(s.kind, &s.parameters)?, &mut rng, tol, &mut checks)?,
        Kind::Sigma => sigma(params(s.kind, &s.parameters)?, tol, &mut checks)?,
    };
    let passed = checks.0.iter().all(|c| c.passed);
    let report = Report {
        kind: s.kind,
        seed,
        tolerance: ToleranceJson { geom: tol.geom, lp: tol.lp, gap: tol.gap },
        inputs: s.parameters.clone(),
        results,
        certificates,
        checks: checks.0,
        passed,
    };
    Ok(Outcome { report, csv })
}

/// Writes `report.json` and `<kind>.csv` into `dir`, returning both paths.
pub fn write_outcome(dir: &Path, o: &Outcome) -> Result<(PathBuf, PathBuf), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let report = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&o.report)?;
    text.push('\n');
    fs::write(&report, text).map_err(|e| Error::io(&report, e))?;
    let csv = dir.join(format!("{}.csv", o.report.kind.name()));
    fs::write(&csv, &o.csv).map_err(|e| Error::io(&csv, e))?;
    Ok((report, csv))
}

/// Loads, runs and writes a scenario. `out` overrides the scenario's output
/// directory; relative paths resolve against the working directory.
pub fn run_scenario(path: &Path, out: Option<&Path>, seed: Option<u64>, tol: &ToleranceContext) -> Result<(Outcome, PathBuf), Error> {
    let s = Scenario::load(path)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| s.output.clone())
        .ok_or_else(|| Error::Input("no output directory: set \"output\" or pass --out".into()))?;
    let o = run(&s, seed, tol)?;
    write_outcome(&dir, &o)?;
    Ok((o, dir))
}

type Produced = (Value, Value, String);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilityParams {
    #[serde(default = "default_taus")]
    taus: Vec<f64>,
    #[serde(default = "default_deltas")]
    deltas: Vec<f64>,
    #[serde(default = "default_cube_n")]
    cube_n: usize,
    #[serde(default = "default_cube_d")]
    cube_d: usize,
}

fn default_taus() -> Vec<f64> {
    vec![1.0; 4]
}

fn default_deltas() -> Vec<f64> {
    let mut d = vec![0.0];
    d.extend((0..9).map(|k| 10f64.powf(-1.0 - k as f64 / 4.0)));
    d
}

fn default_cube_n() -> usize {
    5
}

fn default_cube_d() -> usize {
    2
}

fn stability(p: StabilityParams, tol: &ToleranceContext, c: &mut Checks) -> Result<Produced, Error> {
    let fit = stability_exponent(&p.taus, &p.deltas, tol)?;
    let mut balls = Vec::new();
    for &delta in &p.deltas {
        let f = stability_construction(&p.taus, delta)?;
        let b = ball_circumradius(&f, tol)?;
        balls.push(json!({"delta": delta, "center": b.center, "radius": b.radius}));
    }
    c.push(
        "deviation exponent in [0.4, 0.6]",
        (0.4..=0.6).contains(&fit.slope),
        format!("slope {:.6} over {} rows", fit.slope, fit.used),
    );
    c.push(
        "epsilon exponent in [1.9, 2.1]",
        (1.9..=2.1).contains(&fit.epsilon_slope),
        format!("slope {:.6}", fit.epsilon_slope),
    );
    let worst = fit.rows.iter().map(|r| r.epsilon).fold(f64::INFINITY, f64::min);
    c.push("circumradius at most the total radius", worst >= -1e-9, format!("min epsilon {worst:e}"));
    let straight: Vec<f64> = fit.rows.iter().filter(|r| r.delta == 0.0).map(|r| r.epsilon).collect();
    if !straight.is_empty() {
        let e = straight.iter().cloned().fold(0.0, f64::max);
        c.push("straight chain is extremal", e <= 1e-9, format!("epsilon {e:e}"));
    }
    let cube = cube_counterexample(p.cube_n, p.cube_d, tol)?;
    c.push(
        "cube chain is NS, extremal and not collinear",
        cube.ns && cube.epsilon <= 1e-9 && cube.deviation > 1e-3,
        format!("ns {}, epsilon {:e}, deviation {:.6}", cube.ns, cube.epsilon, cube.deviation),
    );
    let rows: Vec<Value> =
        fit.rows.iter().map(|r| json!({"delta": r.delta, "epsilon": r.epsilon, "deviation": r.deviation})).collect();
    let results = json!({
        "deviation_slope": fit.slope,
        "epsilon_slope": fit.epsilon_slope,
        "rows_used": fit.used,
        "rows": rows,
        "cube": {
            "n": p.cube_n,
            "d": p.cube_d,
            "circumradius": cube.circumradius,
            "epsilon": cube.epsilon,
            "deviation": cube.deviation,
            "ns": cube.ns,
        },
    });
    let csv = csv_string(
        &["delta", "epsilon", "deviation"],
        fit.rows.iter().map(|r| vec![fmt_f64(r.delta), fmt_f64(r.epsilon), fmt_f64(r.deviation)]),
    )?;
    Ok((results, json!({"circumballs": balls}), csv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveName {
    Area,
    Perimeter,
}

impl From<ObjectiveName> for Objective {
    fn from(o: ObjectiveName) -> Self {
        match o {
            ObjectiveName::Area => Objective::Area,
            ObjectiveName::Perimeter => Objective::Perimeter,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubesParams {
    n: usize,
    #[serde(default = "default_objective")]
    objective: ObjectiveName,
    #[serde(default = "default_shadow_runs")]
    shadow_runs: usize,
}

fn default_objective() -> ObjectiveName {
    ObjectiveName::Area
}

fn default_shadow_runs() -> usize {
    20
}

/// WNS placement grown one cell at a time, each new cell within one step of
/// the current bounding box so that neither axis range gets a hole.
pub fn random_wns_cubes(rng: &mut DetRng, n: usize) -> Result<IntegerCubeFamily, Error> {
    let mut cells: Vec<[i64; 2]> = vec![[0, 0]];
    while cells.len() < n {
        let lo_x = cells.iter().map(|c| c[0]).min().unwrap_or(0);
        let hi_x = cells.iter().map(|c| c[0]).max().unwrap_or(0);
        let lo_y = cells.iter().map(|c| c[1]).min().unwrap_or(0);
        let hi_y = cells.iter().map(|c| c[1]).max().unwrap_or(0);
        let c = [rng.random_range(lo_x - 1..=hi_x + 1), rng.random_range(lo_y - 1..=hi_y + 1)];
        if !cells.contains(&c) {
            cells.push(c);
        }
    }
    Ok(IntegerCubeFamily::planar(&cells)?)
}

fn cubes(p: CubesParams, rng: &mut DetRng, c: &mut Checks) -> Result<Produced, Error> {
    if p.n < 4 {
        return Err(Error::Input("cubes scenario needs n >= 4".into()));
    }
    let objective: Objective = p.objective.into();
    let (area, perimeter) = extremal_values(p.n as u64);
    let closed = match p.objective {
        ObjectiveName::Area => area as f64,
        ObjectiveName::Perimeter => perimeter,
    };
    let close = |v: f64| (v - closed).abs() <= 1e-9 * (1.0 + closed);

    let built = construct_extremal(p.n)?;
    let built_value = built.objective(objective)?;
    c.push("construction is WNS", built.is_wns(), format!("{} cells", built.len()));
    c.push("construction attains the closed form", close(built_value), format!("{built_value} vs {closed}"));

    let mut results = json!({
        "n": p.n,
        "objective": match p.objective { ObjectiveName::Area => "area", ObjectiveName::Perimeter => "perimeter" },
        "closed_form": closed,
        "construction": {"family": CubeFamilyJson::from_family(&built), "value": built_value},
    });
    if (4..=6).contains(&p.n) {
        let best = exhaustive_max(p.n, objective)?;
        c.push(
            "exhaustive maximum equals the closed form",
            close(best.value),
            format!("{} vs {closed}, attained by {:?}", best.value, CubeFamilyJson::from_family(&best.family).offsets),
        );
        results["exhaustive"] = json!({
            "value": best.value,
            "family": CubeFamilyJson::from_family(&best.family),
            "evaluated": best.evaluated,
        });
    }

    let mut rows = Vec::new();
    let mut monotone = true;
    let mut bounded = true;
    let mut finals = Vec::new();
    for run in 0..p.shadow_runs {
        let f = random_wns_cubes(rng, p.n)?;
        let trace = shadow_normalize(&f, objective)?;
        monotone &= trace.values.windows(2).all(|w| w[1] >= w[0] - 1e-9);
        let last = trace.values.last().copied().unwrap_or(0.0);
        bounded &= last <= closed + 1e-9 * (1.0 + closed);
        for (step, v) in trace.values.iter().enumerate() {
            rows.push(vec![run.to_string(), step.to_string(), fmt_f64(*v)]);
        }
        finals.push(json!({"start": CubeFamilyJson::from_family(&f), "end": CubeFamilyJson::from_family(&trace.family), "value": last}));
    }
    if p.shadow_runs > 0 {
        c.push("shadow moves never decrease the objective", monotone, format!("{} runs", p.shadow_runs));
        c.push("normalized placements stay below the closed form", bounded, format!("{} runs", p.shadow_runs));
    }
    results["shadow_runs"] = Value::Array(finals);
    let csv = csv_string(&["run", "step", "value"], rows.into_iter())?;
    Ok((results, json!({"construction_wns": built.is_wns()}), csv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LatticeTask {
    Tightness,
    Ns,
    Mu1w,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeParams {
    body: PolytopeJson,
    lattice: LatticeJson,
    task: LatticeTask,
    #[serde(default = "default_resolution")]
    resolution: f64,
    #[serde(default = "default_window")]
    window: i64,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    t_grid: Option<Vec<f64>>,
    #[serde(default = "default_t_max")]
    t_max: f64,
    #[serde(default = "default_steps")]
    steps: usize,
    /// Tightness value the bracket must contain, or the expected NS verdict.
    #[serde(default)]
    expect: Option<Value>,
}

pub fn default_resolution() -> f64 {
    0.01
}

pub fn default_window() -> i64 {
    6
}

pub fn default_samples() -> usize {
    2000
}

fn default_t_max() -> f64 {
    1.0
}

fn default_steps() -> usize {
    20
}

/// `steps + 1` evenly spaced values in `[0, t_max]`.
pub fn t_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| t_max * i as f64 / steps.max(1) as f64).collect()
}

fn lattice(p: LatticeParams, rng: &mut DetRng, tol: &ToleranceContext, c: &mut Checks) -> Result<Produced, Error> {
    let body = p.body.to_polytope(tol)?;
    let lat = p.lattice.to_lattice()?;
    let arr = LatticeArrangement::new(body.clone(), lat.clone())?;
    match p.task {
        LatticeTask::Tightness => {
            let b = arr.tightness(p.resolution)?;
            c.push("bracket within resolution", b.width() <= p.resolution, format!("width {:e}", b.width()));
            if let Some(e) = &p.expect {
                let v = e.as_f64().ok_or_else(|| Error::Input("tightness expect must be a number".into()))?;
                c.push("bracket contains the expected tightness", b.contains(v), format!("[{}, {}] vs {v}", b.lower, b.upper));
            }
            let csv = csv_string(
                &["quantity", "lower", "upper"],
                [
                    vec!["covering_radius".into(), fmt_f64(b.lower + 1.0), fmt_f64(b.upper + 1.0)],
                    vec!["tightness".into(), fmt_f64(b.lower), fmt_f64(b.upper)],
                ]
                .into_iter(),
            )?;
            let results = json!({"tightness": {"lower": b.lower, "upper": b.upper}, "covering_radius": {"lower": b.lower + 1.0, "upper": b.upper + 1.0}});
            Ok((results, json!({"bracket_width": b.width()}), csv))
        }
        LatticeTask::Ns => {
            let (ns, l1) = arr.is_ns(tol)?;
            let (density, bound) = arr.density_bound(tol)?;
            if ns {
                c.push("NS arrangement meets the density bound", density >= bound - 1e-9, format!("{density} vs {bound}"));
            }
            let mut certificates = json!({"dual_minimum": l1});
            if arr.dim() == 2 {
                let sep = arr.patch_separation(p.window, 64, rng, tol)?;
                c.push(
                    "patch probe agrees with the dual criterion",
                    sep.is_some() != ns,
                    format!("ns {ns}, separating direction {}", if sep.is_some() { "found" } else { "none" }),
                );
                if let Some(u) = sep {
                    certificates["separating_direction"] = json!(u);
                }
            }
            if let Some(e) = &p.expect {
                let v = e.as_bool().ok_or_else(|| Error::Input("ns expect must be a boolean".into()))?;
                c.push("NS verdict as expected", ns == v, format!("ns {ns}, expected {v}"));
            }
            let csv = csv_string(
                &["dual_minimum", "ns", "density", "bound"],
                std::iter::once(vec![fmt_f64(l1), ns.to_string(), fmt_f64(density), fmt_f64(bound)]),
            )?;
            Ok((json!({"ns": ns, "dual_minimum": l1, "density": density, "density_bound": bound}), certificates, csv))
        }
        LatticeTask::Mu1w => {
            if p.expect.is_some() {
                return Err(Error::Input("mu1w takes no expect value".into()));
            }
            let grid = p.t_grid.clone().unwrap_or_else(|| t_grid(p.t_max, p.steps));
            let rows = weak_covering_minimum_1(&body, &lat, &grid, p.window, p.samples, rng)?;
            let estimate = mu1w_estimate(&body, &lat, p.window);
            let bad: Vec<f64> = rows.iter().filter(|r| r.t >= estimate && r.hit_fraction < 1.0).map(|r| r.t).collect();
            c.push(
                "every hyperplane is hit above the estimate",
                bad.is_empty(),
                format!("estimate {estimate:.6}, misses at t = {bad:?}"),
            );
            let in_range = rows.iter().all(|r| (0.0..=1.0).contains(&r.hit_fraction) && r.miss_margin >= 0.0);
            c.push("hit fractions and margins in range", in_range, format!("{} rows", rows.len()));
            let csv = csv_string(
                &["t", "hit_fraction", "miss_margin"],
                rows.iter().map(|r| vec![fmt_f64(r.t), fmt_f64(r.hit_fraction), fmt_f64(r.miss_margin)]),
            )?;
            Ok((json!({"mu1w_estimate": estimate, "rows": rows.len()}), json!({"window": p.window, "samples": p.samples}), csv))
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringParams {
    #[serde(default)]
    family: Option<FamilyJson>,
    #[serde(default)]
    base: Option<PolytopeJson>,
    #[serde(default = "default_families")]
    families: usize,
    #[serde(default = "default_members")]
    members: usize,
}

fn default_families() -> usize {
    10
}

fn default_members() -> usize {
    4
}

fn covering(p: CoveringParams, rng: &mut DetRng, tol: &ToleranceContext, c: &mut Checks) -> Result<Produced, Error> {
    let fams: Vec<HomotheticFamily> = match (&p.family, &p.base) {
        (Some(f), None) => vec![f.to_family(tol)?],
        (None, Some(b)) => {
            if p.members < 1 {
                return Err(Error::Input("members must be positive".into()));
            }
            let base = b.to_polytope(tol)?;
            (0..p.families).map(|_| random_wns_family(&base, p.members, rng, tol)).collect::<Result<_, _>>()?
        }
        _ => return Err(Error::Input("covering needs exactly one of \"family\" or \"base\"".into())),
    };
    let base = fams[0].base().clone();
    let d = base.dim();
    let symmetric = base.is_origin_symmetric();
    let simplex = base.facets().len() == d + 1;
    let asym = sigma_lp(&base, tol)?;

    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut covers = Vec::new();
    let (mut certified, mut sym_ok, mut simplex_ok, mut sigma_ok, mut lower_ok) = (true, true, true, true, true);
    for (i, f) in fams.iter().enumerate() {
        let lam = lambda_min(f, tol)?;
        certified &= lam.certified;
        let lower = f.members().iter().map(|m| m.tau).fold(0.0, f64::max) / f.total_ratio();
        lower_ok &= lam.lambda >= lower - 1e-9;
        let wns = f.is_wns(tol);
        let mut entry = json!({"family": FamilyJson::from_family(f), "wns": wns, "lambda": lam.lambda});
        let mut cert = json!({"lambda_cover": CoverJson::from(&lam)});
        let mut sigma_lambda = f64::NAN;
        if wns {
            let sc = sigma_cover(f, &asym, tol)?;
            certified &= sc.certified;
            sigma_ok &= lam.lambda <= sc.lambda + 1e-7;
            sigma_lambda = sc.lambda;
            cert["sigma_cover"] = json!(CoverJson::from(&sc));
            if symmetric {
                let w = weighted_cover(f, tol)?;
                certified &= w.certified;
                sym_ok &= lam.lambda <= 1.0 + 1e-7;
                cert["weighted_cover"] = json!(CoverJson::from(&w));
            }
            if simplex {
                simplex_ok &= lam.lambda <= 0.5 * (d as f64 + 1.0) + 1e-7;
            }
        } else if let Some(w) = f.wns_witness(tol) {
            cert["wns_witness"] = json!(WitnessJson::from(&w));
        }
        entry["sigma_cover_lambda"] = json!(sigma_lambda);
        rows.push(vec![
            i.to_string(),
            f.len().to_string(),
            wns.to_string(),
            fmt_f64(lam.lambda),
            fmt_f64(sigma_lambda),
            lam.certified.to_string(),
        ]);
        out.push(entry);
        covers.push(cert);
    }
    c.push("every cover certified", certified, format!("{} families", fams.len()));
    c.push("lambda at least the largest ratio share", lower_ok, String::new());
    c.push("lambda at most the sigma cover", sigma_ok, format!("sigma {:.9}", asym.sigma));
    if symmetric {
        c.push("symmetric base: lambda at most 1", sym_ok, String::new());
    }
    if simplex {
        c.push("simplex base: lambda at most (d+1)/2", simplex_ok, format!("d = {d}"));
    }
    let csv = csv_string(&["family", "members", "wns", "lambda", "sigma_cover_lambda", "certified"], rows.into_iter())?;
    Ok((json!({"sigma": asym.sigma, "families": out}), Value::Array(covers), csv))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigmaParams {
    body: PolytopeJson,
    #[serde(default)]
    expect: Option<f64>,
}

fn sigma(p: SigmaParams, tol: &ToleranceContext, c: &mut Checks) -> Result<Produced, Error> {
    let body: Polytope = p.body.to_polytope(tol)?;
    let d = body.dim() as f64;
    let lp = sigma_lp(&body, tol)?;
    let bis = sigma_bisection(&body, tol)?;
    let polar = polar_sigma_check(&body, tol)?;
    let bm = bm_bound_report(&body, tol)?;
    c.push("LP and bisection agree", (lp.sigma - bis.sigma).abs() <= 1e-6 * lp.sigma, format!("{} vs {}", lp.sigma, bis.sigma));
    c.push("sigma within [1, d]", lp.sigma >= 1.0 - 1e-9 && lp.sigma <= d + 1e-6, format!("{}", lp.sigma));
    c.push("polar body gives the same sigma", polar.passed, format!("polar {}", polar.polar_sigma));
    if let Some(e) = p.expect {
        c.push("sigma as expected", (lp.sigma - e).abs() <= 1e-6 * e.abs().max(1.0), format!("{} vs {e}", lp.sigma));
    }
    let mut header: Vec<String> = vec!["method".into(), "sigma".into()];
    header.extend((0..body.dim()).map(|i| format!("q{i}")));
    let row = |name: &str, s: f64, q: &[f64]| {
        let mut r = vec![name.to_string(), fmt_f64(s)];
        r.extend(q.iter().map(|x| fmt_f64(*x)));
        r
    };
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv = csv_string(&header_refs, [row("lp", lp.sigma, &lp.center), row("bisection", bis.sigma, &bis.center)].into_iter())?;
    let results = json!({
        "sigma": lp.sigma,
        "q": lp.center,
        "bisection": {"sigma": bis.sigma, "q": bis.center},
        "polar_sigma": polar.polar_sigma,
        "banach_mazur": {"eps": bm.eps, "bound": bm.bound},
    });
    Ok((results, json!({"minkowski_center": lp.center}), csv))
}
