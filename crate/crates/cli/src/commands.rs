//! Command-line configuration and command implementations.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fiberot::barycenter::nonunique_instance;
use fiberot::disint::{couple_with, cp_cost_with, scrmk_with};
use fiberot::{
    certify, dual_value, geodesic_point, slice_embed, sliced_mk, solve_fiberwise, solve_general_q,
    BarycenterProblem, DirectionSet, DualCertificate, Error, FiberedMeasure, LpOptions, Point, SubgradientOptions,
};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult, EXIT_NOT_CONVERGED, EXIT_OK};
use crate::report::{num, nums, nums2, Report};
use crate::schema::{discrete_json, fibered_json, parse_discrete, parse_fibered, parse_point, point_json};

/// Optimal transport between fibered discrete measures.
#[derive(Debug, Parser)]
#[command(name = "fiberot", version)]
pub struct RunConfig {
    /// Worker threads; falls back to FIBEROT_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit a flattened `key,value` CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Pair {
    /// First fibered measure.
    pub mu: PathBuf,
    /// Second fibered measure.
    pub nu: PathBuf,
}

#[derive(Debug, Args)]
pub struct Exponents {
    /// Transport exponent p ≥ 1.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Base exponent q ≥ 1 or "inf".
    #[arg(long, default_value = "2", value_parser = parse_q)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct Caps {
    /// Largest number of cost entries of one fiber LP.
    #[arg(long)]
    pub size_cap: Option<usize>,
}

impl Caps {
    fn options(&self) -> LpOptions {
        let mut options = LpOptions::default();
        if let Some(cap) = self.size_cap {
            options.size_cap = cap;
        }
        options
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BarycenterMode {
    Fiberwise,
    Subgradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionScheme {
    /// Equally spaced directions on the unit circle (d = 2).
    Circle,
    /// Seeded Gaussian directions on the unit sphere.
    Random,
    /// The signed coordinate axes.
    Axes,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Disintegrated distance with its per-fiber vector.
    Distance {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        exponents: Exponents,
        #[command(flatten)]
        caps: Caps,
    },
    /// Optimal plans and dual potentials fiber by fiber.
    Couple {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        caps: Caps,
    },
    /// Cost of the best coupling that keeps mass inside fibers.
    CpCost {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        caps: Caps,
    },
    /// Point at time tau on the fiberwise geodesic.
    Geodesic {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        tau: f64,
    },
    /// Weighted barycenter of two or more fibered measures.
    Barycenter {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        /// Comma-separated weights; uniform when omitted.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Defaults to p.
        #[arg(long, value_parser = parse_q)]
        q: Option<f64>,
        /// Defaults to p.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, value_enum, default_value_t = BarycenterMode::Fiberwise)]
        mode: BarycenterMode,
        /// Candidate support per fiber: `{"grid": [[points], ...]}`.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        /// Exit with status 4 when the duality gap bound exceeds this.
        #[arg(long)]
        gap_tol: Option<f64>,
    },
    /// Validates and evaluates a dual certificate, or assembles one.
    DualCheck {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        exponents: Exponents,
        /// `{"zeta": [...], "phi": [[...]], "psi": [[...]]}`; assembled when omitted.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Sliced distance of two measures on ℝ^d with the embedded distance.
    Slice {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        exponents: Exponents,
        #[arg(long, default_value_t = 16)]
        directions: usize,
        #[arg(long, value_enum, default_value_t = DirectionScheme::Circle)]
        scheme: DirectionScheme,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include both embedded fibered measures in the report.
        #[arg(long)]
        embedding: bool,
    },
    /// Reproducible scenarios.
    Demo {
        #[command(subcommand)]
        scenario: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Two distinct p = 1 barycenters of cost 3/2 on the line.
    #[command(name = "nonunique-3-2")]
    Nonunique32 {
        /// Midpoint atoms per interval.
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Base atoms of the lifted problem.
        #[arg(long, default_value_t = 2)]
        fibers: usize,
        #[arg(long, default_value = "2", value_parser = parse_q)]
        q: f64,
    },
}

/// Parses `q ≥ 1` or `"inf"`.
pub fn parse_q(text: &str) -> Result<f64, String> {
    if text == "inf" {
        return Ok(f64::INFINITY);
    }
    let q: f64 = text.parse().map_err(|_| format!("{text:?} is neither a number nor \"inf\""))?;
    if q.is_finite() && q >= 1.0 {
        Ok(q)
    } else {
        Err(format!("q = {text} must be at least 1"))
    }
}

/// Report and exit status of one run.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report: report.into_value(),
            exit: EXIT_OK,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> CliResult<FiberedMeasure> {
    parse_fibered(&read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, err: CliError) -> CliError {
    match err {
        CliError::Schema { field, message } => CliError::Schema {
            field: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    }
}

fn load_pair(pair: &Pair) -> CliResult<(FiberedMeasure, FiberedMeasure)> {
    Ok((load(&pair.mu)?, load(&pair.nu)?))
}

fn base_report(command: &str, m: &FiberedMeasure) -> Report {
    Report::new(command).set("atoms", Value::from(m.base().labels().to_vec()))
}

fn plan_json(plan: &fiberot::TransportPlan) -> Value {
    serde_json::json!({
        "rows": plan.row_points.iter().map(point_json).collect::<Vec<_>>(),
        "cols": plan.col_points.iter().map(point_json).collect::<Vec<_>>(),
        "entries": plan
            .entries
            .iter()
            .map(|&(r, c, m)| serde_json::json!([r, c, num(m)]))
            .collect::<Vec<_>>(),
    })
}

/// Executes one command.
pub fn execute(config: &RunConfig) -> CliResult<Outcome> {
    match &config.command {
        Command::Distance { pair, exponents, caps } => {
            let (m, n) = load_pair(pair)?;
            let r = scrmk_with(&m, &n, exponents.p, exponents.q, caps.options())?;
            Ok(Outcome::ok(
                base_report("distance", &m)
                    .float("p", r.p)
                    .float("q", r.q)
                    .float("value", r.value)
                    .set("per_fiber", nums(&r.per_fiber)),
            ))
        }
        Command::Couple { pair, p, caps } => {
            let (m, n) = load_pair(pair)?;
            let fibers = couple_with(&m, &n, *p, caps.options())?;
            let items: Vec<Value> = fibers
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "cost": num(f.cost),
                        "plan": plan_json(&f.plan),
                        "phi": nums(&f.duals.phi),
                        "psi": nums(&f.duals.psi),
                    })
                })
                .collect();
            Ok(Outcome::ok(base_report("couple", &m).float("p", *p).set("fibers", items)))
        }
        Command::CpCost { pair, p, caps } => {
            let (m, n) = load_pair(pair)?;
            let (cost, joint) = cp_cost_with(&m, &n, *p, caps.options())?;
            let fiberwise = scrmk_with(&m, &n, *p, *p, caps.options())?.value.powf(*p);
            Ok(Outcome::ok(
                base_report("cp-cost", &m)
                    .float("p", *p)
                    .float("cost", cost)
                    .float("fiberwise_cost", fiberwise)
                    .set("row_fiber", Value::from(joint.row_fiber))
                    .set("col_fiber", Value::from(joint.col_fiber))
                    .set("plan", plan_json(&joint.plan)),
            ))
        }
        Command::Geodesic { pair, p, tau } => {
            let (m, n) = load_pair(pair)?;
            let point = geodesic_point(&m, &n, *tau, *p)?;
            Ok(Outcome::ok(
                Report::new("geodesic").float("p", *p).float("tau", *tau).set("measure", fibered_json(&point)),
            ))
        }
        Command::Barycenter {
            inputs,
            lambdas,
            p,
            q,
            kappa,
            mode,
            grid,
            iterations,
            gap_tol,
        } => {
            let measures = inputs.iter().map(|path| load(path)).collect::<CliResult<Vec<_>>>()?;
            let k = measures.len();
            let lambdas = lambdas.clone().unwrap_or_else(|| vec![1.0 / k as f64; k]);
            let (q, kappa) = (q.unwrap_or(*p), kappa.unwrap_or(*p));
            let problem = BarycenterProblem::new(measures, lambdas, *p, q, kappa)?;
            let grid = grid.as_deref().map(|path| load_grid(path, &problem)).transpose()?;
            barycenter(&problem, *mode, grid.as_deref(), *iterations, *gap_tol)
        }
        Command::DualCheck {
            pair,
            exponents,
            certificate,
        } => {
            let (m, n) = load_pair(pair)?;
            let (p, q) = (exponents.p, exponents.q);
            let report = base_report("dual-check", &m).float("p", p).float("q", q);
            match certificate {
                Some(path) => {
                    let cert = load_certificate(path)?;
                    let dual = dual_value(&m, &n, &cert, p, q)?;
                    let primal = scrmk_with(&m, &n, p, q, LpOptions::default())?.value.powf(p);
                    Ok(Outcome::ok(
                        report
                            .set("valid", true)
                            .float("primal", primal)
                            .float("dual", dual)
                            .float("gap", primal - dual)
                            .set("heuristic", q == f64::INFINITY),
                    ))
                }
                None => {
                    let (cert, r) = certify(&m, &n, p, q)?;
                    Ok(Outcome::ok(
                        report
                            .set("valid", true)
                            .float("primal", r.primal)
                            .float("dual", r.dual)
                            .float("gap", r.primal - r.dual)
                            .set("heuristic", r.heuristic)
                            .set(
                                "certificate",
                                serde_json::json!({
                                    "zeta": nums(&cert.zeta),
                                    "phi": nums2(&cert.phi),
                                    "psi": nums2(&cert.psi),
                                }),
                            ),
                    ))
                }
            }
        }
        Command::Slice {
            pair,
            exponents,
            directions,
            scheme,
            seed,
            embedding,
        } => {
            let (space, mu) = parse_discrete(&read(&pair.mu)?).map_err(|e| in_file(&pair.mu, e))?;
            let (other, nu) = parse_discrete(&read(&pair.nu)?).map_err(|e| in_file(&pair.nu, e))?;
            if !space.same_geometry(&other) {
                return Err(CliError::schema("fiber_space", "the two measures live in different spaces"));
            }
            let d = match space.kind() {
                fiberot::FiberKind::Euclidean { dim } => *dim,
                _ => return Err(CliError::schema("fiber_space.kind", "slicing needs euclidean points")),
            };
            let dirs = match scheme {
                DirectionScheme::Circle if d != 2 => {
                    return Err(CliError::Usage(format!("circle directions need d = 2, found d = {d}")))
                }
                DirectionScheme::Circle => DirectionSet::uniform_circle(*directions)?,
                DirectionScheme::Random => DirectionSet::random_sphere(d, *directions, *seed)?,
                DirectionScheme::Axes => DirectionSet::axes(d)?,
            };
            let (p, q) = (exponents.p, exponents.q);
            let sliced = sliced_mk(&mu, &nu, p, q, &dirs)?;
            let (em, en) = (slice_embed(&mu, &dirs)?, slice_embed(&nu, &dirs)?);
            let embedded = fiberot::scrmk(&em, &en, p, q)?.value;
            let mut report = Report::new("slice")
                .float("p", p)
                .float("q", q)
                .set("directions", Value::from(dirs.len()))
                .float("sliced", sliced)
                .float("embedded", embedded);
            if *embedding {
                report = report
                    .set("mu", discrete_json(&space, &mu))
                    .set("embedded_mu", fibered_json(&em))
                    .set("embedded_nu", fibered_json(&en));
            }
            Ok(Outcome::ok(report))
        }
        Command::Demo {
            scenario: Demo::Nonunique32 { n, fibers, q },
        } => {
            const INPUTS: usize = 4;
            let r = nonunique_instance(*n, INPUTS, *fibers, *q)?;
            Ok(Outcome::ok(
                Report::new("demo nonunique-3-2")
                    .set("atoms", Value::from(r.atoms))
                    .set("inputs", Value::from(r.inputs))
                    .set("fibers", Value::from(*fibers))
                    .float("p", 1.0)
                    .float("q", r.q)
                    .float("objective_nu0", r.objective_nu0)
                    .float("objective_nu1", r.objective_nu1)
                    .float("classical_dual", r.classical_dual)
                    .float("lifted_dual", r.lifted_dual)
                    .float("mk1", r.mk1),
            ))
        }
    }
}

fn barycenter(
    problem: &BarycenterProblem,
    mode: BarycenterMode,
    grid: Option<&[Vec<Point>]>,
    iterations: usize,
    gap_tol: Option<f64>,
) -> CliResult<Outcome> {
    let report = Report::new("barycenter")
        .float("p", problem.p())
        .float("q", problem.q())
        .float("kappa", problem.kappa())
        .set("lambdas", nums(problem.lambdas()));
    match mode {
        BarycenterMode::Fiberwise => {
            let (bary, value) = solve_fiberwise(problem, grid)?;
            Ok(Outcome::ok(
                report.set("mode", "fiberwise").float("value", value).set("barycenter", fibered_json(&bary)),
            ))
        }
        BarycenterMode::Subgradient => {
            let grid = grid.ok_or_else(|| CliError::Usage("subgradient mode needs --grid".into()))?;
            let options = SubgradientOptions {
                iterations,
                gap_tolerance: gap_tol,
                ..Default::default()
            };
            let report = report.set("mode", "subgradient");
            match solve_general_q(problem, grid, options) {
                Ok(sol) => Ok(Outcome::ok(
                    report
                        .set("converged", true)
                        .float("value", sol.value)
                        .float("dual", sol.dual)
                        .float("gap_bound", sol.gap_bound)
                        .set("iterations", Value::from(sol.iterations))
                        .set("barycenter", fibered_json(&sol.barycenter)),
                )),
                Err(Error::NotConverged { value, gap, best }) => Ok(Outcome {
                    report: report
                        .set("converged", false)
                        .float("value", value)
                        .float("gap_bound", gap)
                        .set("barycenter", fibered_json(&best))
                        .into_value(),
                    exit: EXIT_NOT_CONVERGED,
                }),
                Err(e) => Err(e.into()),
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    grid: Vec<Vec<Value>>,
}

fn load_grid(path: &Path, problem: &BarycenterProblem) -> CliResult<Vec<Vec<Point>>> {
    let doc: GridDoc = serde_json::from_str(&read(path)?).map_err(|e| in_file(path, CliError::schema("document", e)))?;
    doc.grid
        .iter()
        .enumerate()
        .map(|(i, pts)| {
            pts.iter()
                .enumerate()
                .map(|(j, v)| parse_point(problem.space(), v, &format!("grid[{i}][{j}]")))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()
        .map_err(|e| in_file(path, e))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    zeta: Vec<f64>,
    phi: Vec<Vec<f64>>,
    psi: Vec<Vec<f64>>,
}

fn load_certificate(path: &Path) -> CliResult<DualCertificate> {
    let doc: CertificateDoc =
        serde_json::from_str(&read(path)?).map_err(|e| in_file(path, CliError::schema("document", e)))?;
    Ok(DualCertificate {
        zeta: doc.zeta,
        phi: doc.phi,
        psi: doc.psi,
    })
}
