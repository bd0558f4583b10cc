//! Acceptance checks. Prints one `PASS` or `FAIL` line per criterion and exits
//! with a failure status if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fiberot::barycenter::{interval_midpoints, tent};
use fiberot::disint::{conjugate, lq_norm, tighten};
use fiberot::{
    apply_chart_change, certify, classical_dual, cp_cost, dual_objective, dual_value, ot_1d, scrmk, slice_embed,
    sliced_mk, solve_fiberwise, solve_general_q, verify_geodesic, BarycenterDualCertificate, BarycenterProblem,
    BaseMeasure, ChartAtlas, DirectionSet, DiscreteMeasure, DualCertificate, FiberKind, FiberSpace,
    FiberedMeasure, Isometry, Point, SubgradientOptions,
};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("nonuniqueness instance", nonuniqueness),
        ("metric axioms", metric_axioms),
        ("strong and weak duality", duality),
        ("coupling cost equivalence", coupling_equivalence),
        ("geodesic equality", geodesics),
        ("sliced isometry", sliced),
        ("barycenter oracles", barycenter_oracles),
        ("chart invariance", chart_invariance),
        ("performance", performance),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {name}: {} [{:.2?}]", i + 1, v.detail, start.elapsed());
        failures += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

// Random instances.

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn base(rng: &mut ChaCha8Rng, n: usize) -> BaseMeasure {
    let mut w = weights(rng, n);
    let head: f64 = w[..n - 1].iter().sum();
    w[n - 1] = 1.0 - head;
    BaseMeasure::new((0..n).map(|i| format!("w{i}")).collect(), w).unwrap()
}

fn line() -> FiberSpace {
    FiberSpace::real_line(0.0).unwrap()
}

fn plane() -> FiberSpace {
    FiberSpace::euclidean(vec![0.0, 0.0]).unwrap()
}

fn cycle() -> FiberSpace {
    let n = 6usize;
    let d = (0..n)
        .map(|i| (0..n).map(|j| (i.abs_diff(j)).min(n - i.abs_diff(j)) as f64).collect())
        .collect();
    FiberSpace::matrix(d, 0).unwrap()
}

fn point(rng: &mut ChaCha8Rng, space: &FiberSpace) -> Point {
    match space.kind() {
        FiberKind::Real1D => Point::Real(rng.random_range(-3.0..3.0)),
        FiberKind::Euclidean { dim } => Point::Vector((0..*dim).map(|_| rng.random_range(-3.0..3.0)).collect()),
        FiberKind::Matrix { size, .. } => Point::Index(rng.random_range(0..*size)),
    }
}

fn measure(rng: &mut ChaCha8Rng, space: &FiberSpace, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_atoms);
    let pts = (0..n).map(|_| point(rng, space)).collect();
    DiscreteMeasure::new(space, pts, weights(rng, n)).unwrap()
}

fn fibered(rng: &mut ChaCha8Rng, b: &BaseMeasure, space: &FiberSpace, max_atoms: usize) -> FiberedMeasure {
    let fibers = (0..b.len()).map(|_| measure(rng, space, max_atoms)).collect();
    FiberedMeasure::new(b.clone(), space.clone(), fibers).unwrap()
}

fn pair(rng: &mut ChaCha8Rng, space: &FiberSpace, max_fibers: usize, max_atoms: usize) -> (FiberedMeasure, FiberedMeasure) {
    let n = rng.random_range(1..=max_fibers);
    let b = base(rng, n);
    (fibered(rng, &b, space, max_atoms), fibered(rng, &b, space, max_atoms))
}

fn spaces() -> [FiberSpace; 3] {
    [line(), plane(), cycle()]
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

// Criteria.

fn nonuniqueness() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fiberot"))
        .args(["demo", "nonunique-3-2", "--n", "200"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Verdict::new(false, format!("exit {:?}", out.status.code()));
    }
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let get = |k: &str| r[k].as_f64().unwrap();
    let (o0, o1, dual, mk1) = (get("objective_nu0"), get("objective_nu1"), get("classical_dual"), get("mk1"));
    let pass = (1.49..=1.51).contains(&o0)
        && (1.49..=1.51).contains(&o1)
        && (1.49..=1.50).contains(&dual)
        && (2.99..=3.01).contains(&mk1)
        && within(elapsed, 1.0);
    Verdict::new(
        pass,
        format!("objectives {o0:.12}, {o1:.12}; classical dual {dual:.12}; mk_1 {mk1:.12}; runtime {elapsed:.2?}"),
    )
}

fn metric_axioms() -> Verdict {
    let start = Instant::now();
    let exps = [(1.0, 1.0), (2.0, 2.0), (2.0, 4.0), (2.0, f64::INFINITY)];
    let (mut asym, mut nonzero, mut worst) = (0, 0, f64::INFINITY);
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let space = &spaces()[seed as usize % 3];
        let n = r.random_range(1..=5);
        let b = base(&mut r, n);
        let [x, y, z] = [0; 3].map(|_| fibered(&mut r, &b, space, 6));
        for (p, q) in exps {
            let d = |a: &FiberedMeasure, c: &FiberedMeasure| scrmk(a, c, p, q).unwrap().value;
            let xy = d(&x, &y);
            asym += usize::from(xy.to_bits() != d(&y, &x).to_bits());
            nonzero += usize::from(d(&x, &x.clone()) != 0.0);
            worst = worst.min(d(&x, &z) + d(&z, &y) - xy);
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(
        asym == 0 && nonzero == 0 && worst >= -1e-9 && within(elapsed, 10.0),
        format!("asymmetric {asym}, nonzero self-distances {nonzero}, min triangle slack {worst:.3e}"),
    )
}

fn duality() -> Verdict {
    let start = Instant::now();
    let exps = [(1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (2.0, 3.0), (1.5, 4.0)];
    let mut strong = 0.0f64;
    for seed in 0..50u64 {
        let mut r = rng(1000 + seed);
        let (m, n) = pair(&mut r, &spaces()[seed as usize % 3], 4, 5);
        let (p, q) = exps[seed as usize % exps.len()];
        let (_, report) = certify(&m, &n, p, q).unwrap();
        let primal = scrmk(&m, &n, p, q).unwrap().value.powf(p);
        strong = strong.max((report.dual - primal).abs());
    }
    let mut weak = f64::NEG_INFINITY;
    for seed in 0..500u64 {
        let mut r = rng(5000 + seed);
        let (m, n) = pair(&mut r, &spaces()[seed as usize % 3], 4, 5);
        let (p, q) = exps[seed as usize % exps.len()];
        let k = m.fibers().len();
        let r_conj = conjugate(q / p);
        let mut zeta: Vec<f64> = (0..k).map(|_| r.random_range(0.0..2.0)).collect();
        let norm = lq_norm(&zeta, m.sigma(), r_conj);
        if norm > 1.0 {
            zeta.iter_mut().for_each(|z| *z /= norm * (1.0 + 1e-12));
        }
        let psi: Vec<Vec<f64>> = n.fibers().iter().map(|f| f.points().iter().map(|_| r.random_range(-5.0..5.0)).collect()).collect();
        let phi = tighten(&m, &n, &psi, p);
        let cert = DualCertificate { zeta, phi, psi };
        let dual = dual_value(&m, &n, &cert, p, q).unwrap();
        let primal = scrmk(&m, &n, p, q).unwrap().value.powf(p);
        weak = weak.max(dual - primal);
    }
    let elapsed = start.elapsed();
    Verdict::new(
        strong <= 1e-8 && weak <= 1e-12 && within(elapsed, 30.0),
        format!("max |dual − primal^p| {strong:.3e} on 50; max dual − primal^p {weak:.3e} on 500 random certificates"),
    )
}

fn coupling_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let mut r = rng(2000 + seed);
        let (m, n) = pair(&mut r, &spaces()[seed as usize % 3], 3, 5);
        for p in [1.0, 2.0] {
            let joint = cp_cost(&m, &n, p).unwrap().0;
            let fiberwise = scrmk(&m, &n, p, p).unwrap().value.powf(p);
            worst = worst.max((joint - fiberwise).abs());
        }
    }
    Verdict::new(worst <= 1e-8, format!("max |cp_cost − 𝒟𝒦_p,p^p| {worst:.3e}"))
}

fn geodesics() -> Verdict {
    let taus = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let mut r = rng(3000 + seed);
        let (m, n) = pair(&mut r, &line(), 4, 5);
        for (p, q) in [(2.0, 2.0), (2.0, 4.0), (1.0, 1.0), (1.0, f64::INFINITY)] {
            worst = worst.max(verify_geodesic(&m, &n, &taus, p, q).unwrap().max_deviation);
        }
    }
    Verdict::new(worst <= 1e-8, format!("max deviation {worst:.3e}"))
}

fn sliced() -> Verdict {
    let dirs = DirectionSet::uniform_circle(16).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let mut r = rng(4000 + seed);
        let (mu, nu) = (measure(&mut r, &plane(), 6), measure(&mut r, &plane(), 6));
        let (em, en) = (slice_embed(&mu, &dirs).unwrap(), slice_embed(&nu, &dirs).unwrap());
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (2.0, f64::INFINITY)] {
            let direct = sliced_mk(&mu, &nu, p, q, &dirs).unwrap();
            worst = worst.max((direct - scrmk(&em, &en, p, q).unwrap().value).abs());
        }
    }
    let a = DiscreteMeasure::new(&plane(), vec![Point::Vector(vec![0.0, 0.0])], vec![1.0]).unwrap();
    let b = DiscreteMeasure::new(&plane(), vec![Point::Vector(vec![1.0, 0.0])], vec![1.0]).unwrap();
    let delta = sliced_mk(&a, &b, 2.0, 2.0, &DirectionSet::axes(2).unwrap()).unwrap();
    let err = (delta - 0.5f64.sqrt()).abs();
    Verdict::new(
        worst <= 1e-10 && err <= 1e-12,
        format!("max isometry defect {worst:.3e}; δ-pair value {delta:.16} (error {err:.1e})"),
    )
}

// Barycenter oracles.

fn lattice_measure(r: &mut ChaCha8Rng, atoms: usize, step: f64) -> DiscreteMeasure {
    let points: Vec<f64> = (0..atoms).map(|_| r.random_range(-2.0 * step..=2.0 * step).round() / step).collect();
    let mut eighths = vec![1u32; atoms];
    for _ in atoms..8 {
        eighths[r.random_range(0..atoms)] += 1;
    }
    DiscreteMeasure::on_line(&points, &eighths.iter().map(|&e| e as f64 / 8.0).collect::<Vec<_>>()).unwrap()
}

/// `min_w Σ_k λ_k mk_p^p(μ_k, w)` over measures `w` on `grid`, as one LP.
fn grid_lp(mus: &[&DiscreteMeasure], lambdas: &[f64], grid: &[f64], p: f64) -> f64 {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = grid.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for (mu, &lambda) in mus.iter().zip(lambdas) {
        let xs = mu.reals().unwrap();
        let vars: Vec<Vec<_>> = xs
            .iter()
            .map(|x| grid.iter().map(|g| lp.add_var(lambda * (x - g).abs().powf(p), (0.0, f64::INFINITY))).collect())
            .collect();
        for (row, &m) in vars.iter().zip(mu.weights()) {
            lp.add_constraint(row.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, m);
        }
        for (j, &wj) in w.iter().enumerate() {
            let mut col: Vec<_> = vars.iter().map(|row| (row[j], 1.0)).collect();
            col.push((wj, -1.0));
            lp.add_constraint(col, ComparisonOp::Eq, 0.0);
        }
    }
    lp.solve().unwrap().objective()
}

/// `mk_p^p(μ, w δ_a + (1−w) δ_b)` for `a < b` via quantile levels.
fn two_point_cost(mu: &DiscreteMeasure, a: f64, b: f64, w: f64, p: f64) -> f64 {
    let mut xs: Vec<(f64, f64)> = mu.reals().unwrap().into_iter().zip(mu.weights().iter().copied()).collect();
    xs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut level, mut total) = (0.0, 0.0);
    for (x, m) in xs {
        let (lo, hi) = (level, level + m);
        total += (hi.min(w) - lo).max(0.0) * (x - a).abs().powf(p) + (hi - lo.max(w)).max(0.0) * (x - b).abs().powf(p);
        level = hi;
    }
    total
}

fn barycenter_oracles() -> Verdict {
    // Fiberwise solver against the fine-grid LP.
    let grid: Vec<f64> = (-32..=32).map(|j| j as f64 / 16.0).collect();
    let lambda_sets = [[0.25, 0.25, 0.5], [0.5, 0.25, 0.25], [0.25, 0.5, 0.25]];
    let mut fiberwise_err = 0.0f64;
    for seed in 0..20u64 {
        let mut r = rng(6000 + seed);
        let fibers = r.random_range(1..=2);
        let b = BaseMeasure::uniform(fibers, "w").unwrap();
        let inputs: Vec<Vec<DiscreteMeasure>> =
            (0..3).map(|_| (0..fibers).map(|_| lattice_measure(&mut r, 4, 4.0)).collect()).collect();
        let lambdas = lambda_sets[seed as usize % 3].to_vec();
        let p = [1.0, 2.0][seed as usize % 2];
        let lifted = inputs.iter().map(|f| FiberedMeasure::new(b.clone(), line(), f.clone()).unwrap()).collect();
        let prob = BarycenterProblem::new(lifted, lambdas.clone(), p, p, p).unwrap();
        let value = solve_fiberwise(&prob, None).unwrap().1;
        let oracle: f64 = (0..fibers)
            .map(|i| b.weights()[i] * grid_lp(&inputs.iter().map(|f| &f[i]).collect::<Vec<_>>(), &lambdas, &grid, p))
            .sum();
        fiberwise_err = fiberwise_err.max((value - oracle).abs());
    }

    // Subgradient solver with q = 2p against an exhaustive sweep of the simplex.
    const STEPS: usize = 1000;
    let mut sweep_err = 0.0f64;
    let mut weak = f64::NEG_INFINITY;
    for seed in 0..5u64 {
        let mut r = rng(7000 + seed);
        let p = [1.0, 2.0][seed as usize % 2];
        let q = 2.0 * p;
        let b = BaseMeasure::new(vec!["a".into(), "b".into()], vec![0.375, 0.625]).unwrap();
        let k = 2 + seed as usize % 2;
        let fibers: Vec<Vec<DiscreteMeasure>> =
            (0..k).map(|_| (0..2).map(|_| lattice_measure(&mut r, 3, 2.0)).collect()).collect();
        let lambdas: Vec<f64> = if k == 2 { vec![0.5, 0.5] } else { vec![0.25, 0.25, 0.5] };
        let cells = [(-1.0, 1.0), (-0.5, 1.5)];
        let grid: Vec<Vec<Point>> = cells.iter().map(|&(a, c)| vec![Point::Real(a), Point::Real(c)]).collect();
        let f: Vec<Vec<Vec<f64>>> = fibers
            .iter()
            .map(|fk| {
                (0..2)
                    .map(|i| (0..=STEPS).map(|s| two_point_cost(&fk[i], cells[i].0, cells[i].1, s as f64 / STEPS as f64, p)).collect())
                    .collect()
            })
            .collect();
        let (rr, sigma) = (q / p, b.weights());
        let mut oracle = f64::INFINITY;
        for s0 in 0..=STEPS {
            for s1 in 0..=STEPS {
                let v: f64 = (0..k)
                    .map(|j| lambdas[j] * (sigma[0] * f[j][0][s0].powf(rr) + sigma[1] * f[j][1][s1].powf(rr)).powf(1.0 / rr))
                    .sum();
                oracle = oracle.min(v);
            }
        }
        let lifted = fibers.iter().map(|fk| FiberedMeasure::new(b.clone(), line(), fk.clone()).unwrap()).collect();
        let prob = BarycenterProblem::new(lifted, lambdas, p, q, p).unwrap();
        let options = SubgradientOptions { iterations: 4000, ..Default::default() };
        let sol = solve_general_q(&prob, &grid, options).unwrap();
        sweep_err = sweep_err.max((sol.value - oracle).abs());
        weak = weak.max(sol.dual - oracle);

        // Random certificates projected onto the constraint.
        let mut cert = BarycenterDualCertificate::zero(k, sol.certificate.support.clone());
        for _ in 0..20 {
            for j in 0..k {
                for i in 0..2 {
                    cert.zeta[j][i] = r.random_range(0.1..1.0);
                    cert.xi[j][i] = cert.support[i].iter().map(|_| r.random_range(-2.0..2.0)).collect();
                }
            }
            cert.project();
            weak = weak.max(dual_objective(&prob, &cert).unwrap() - oracle);
        }
    }

    // Classical certificate of the two-interval instance against measures on its support.
    let (nu0, nu1) = (interval_midpoints(-2.0, -1.0, 20).unwrap(), interval_midpoints(1.0, 2.0, 20).unwrap());
    let support: Vec<Point> = nu0.points().iter().chain(nu1.points()).cloned().collect();
    let phi: Vec<f64> = support.iter().map(|s| tent(s.as_real().unwrap()) / 2.0).collect();
    let neg: Vec<f64> = phi.iter().map(|x| -x).collect();
    let dual = classical_dual(&[nu1.clone(), nu0.clone()], &[0.5, 0.5], 1.0, &line(), &support, &[phi, neg]).unwrap();
    let mut r = rng(8000);
    for _ in 0..50 {
        let nu = DiscreteMeasure::new(&line(), support.clone(), weights(&mut r, support.len())).unwrap();
        let cost = 0.5 * ot_1d(&nu1, &nu, 1.0).unwrap().0 + 0.5 * ot_1d(&nu0, &nu, 1.0).unwrap().0;
        weak = weak.max(dual - cost);
    }

    Verdict::new(
        fiberwise_err <= 1e-6 && sweep_err <= 1e-4 && weak <= 1e-8,
        format!(
            "fiberwise vs grid LP {fiberwise_err:.3e}; subgradient vs sweep {sweep_err:.3e}; max dual excess {weak:.3e}"
        ),
    )
}

fn chart_invariance() -> Verdict {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let mut r = rng(9000 + seed);
        let space = &spaces()[seed as usize % 3];
        let (m, n) = pair(&mut r, space, 5, 5);
        let maps = (0..m.fibers().len())
            .map(|_| match space.kind() {
                FiberKind::Real1D => Isometry::Reflection {
                    sign: if r.random_bool(0.5) { 1.0 } else { -1.0 },
                    center: r.random_range(-5.0..5.0),
                },
                FiberKind::Euclidean { .. } => {
                    let (s, c) = r.random_range(0.0..std::f64::consts::TAU).sin_cos();
                    let flip = if r.random_bool(0.5) { -1.0 } else { 1.0 };
                    Isometry::Orthogonal { dim: 2, matrix: vec![c, -s * flip, s, c * flip] }
                }
                FiberKind::Matrix { size, .. } => {
                    let shift = r.random_range(0..*size);
                    let flip = r.random_bool(0.5);
                    Isometry::Permutation(
                        (0..*size).map(|i| if flip { (size + shift - i) % size } else { (i + shift) % size }).collect(),
                    )
                }
            })
            .collect();
        let atlas = ChartAtlas::new(maps, space).unwrap();
        let (m2, n2) = (apply_chart_change(&m, &atlas, "moved").unwrap(), apply_chart_change(&n, &atlas, "moved").unwrap());
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (2.0, 4.0), (1.0, f64::INFINITY)] {
            worst = worst.max((scrmk(&m, &n, p, q).unwrap().value - scrmk(&m2, &n2, p, q).unwrap().value).abs());
        }
    }
    Verdict::new(worst <= 1e-9, format!("max change {worst:.3e}"))
}

// Performance.

fn large_pair() -> (FiberedMeasure, FiberedMeasure) {
    let mut r = rng(10_000);
    let b = base(&mut r, 100);
    let make = |r: &mut ChaCha8Rng| {
        let fibers = (0..100)
            .map(|_| {
                let pts: Vec<f64> = (0..100).map(|_| r.random_range(-10.0..10.0)).collect();
                DiscreteMeasure::on_line(&pts, &weights(r, 100)).unwrap()
            })
            .collect();
        FiberedMeasure::new(b.clone(), line(), fibers).unwrap()
    };
    (make(&mut r), make(&mut r))
}

/// Median wall time of `scrmk` inside a pool of `threads` workers.
fn timed_distance(m: &FiberedMeasure, n: &FiberedMeasure, threads: usize) -> Duration {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let mut samples: Vec<Duration> = (0..41)
        .map(|_| {
            pool.install(|| {
                let start = Instant::now();
                std::hint::black_box(scrmk(m, n, 2.0, 2.0).unwrap());
                start.elapsed()
            })
        })
        .collect();
    samples.sort();
    samples[samples.len() / 2]
}

fn performance() -> Verdict {
    let (m, n) = large_pair();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("m.json"), dir.path().join("n.json"));
    std::fs::write(&a, fiberot_cli::schema::fibered_json(&m).to_string()).unwrap();
    std::fs::write(&b, fiberot_cli::schema::fibered_json(&n).to_string()).unwrap();
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fiberot"))
        .arg("distance")
        .args([&a, &b])
        .args(["--p", "2", "--q", "2", "--threads", "1"])
        .output()
        .unwrap();
    let end_to_end = start.elapsed();
    let ran = out.status.success();

    let one = timed_distance(&m, &n, 1);
    let four = timed_distance(&m, &n, 4);
    let speedup = one.as_secs_f64() / four.as_secs_f64();
    let cores = std::thread::available_parallelism().map(|c| c.get()).unwrap_or(1);
    Verdict::new(
        ran && within(end_to_end, 1.0) && speedup >= 2.5,
        format!(
            "single-threaded command {end_to_end:.2?}; distance 1 thread {one:.2?}, 4 threads {four:.2?}, speedup {speedup:.2}× on {cores} available cores"
        ),
    )
}
