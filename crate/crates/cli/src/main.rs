//! `varamp`: command-line front end to the `varamp` library.
//!
//! Every command is seeded. JSON output embeds the run configuration; CSV
//! written with `--out` gets a `<out>.run.json` sidecar holding it.

mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};
use varamp::circuits::{build_oracle, export_text, extract_diagonal};
use varamp::engine::{grover_iterations, phase, ClassAmplifier};
use varamp::estimator::{estimate_ps_with, sample_costs, table1_experiment, GaussianProfile};
use varamp::hybrid::{hybrid_solve_on, simulated_experiment, HybridConfig};
use varamp::problems::{
    generate_coloring, generate_graph_qubo, generate_linear_qubo, generate_random_graph, generate_subset_sum,
    Assignment, Problem, ProblemKind,
};
use varamp::rng::derive_seed;
use varamp::spectrum::{enumerate, exact_ps, fit_gaussian, histogram, stats, Binning, SolutionSpace, SpaceMeta};
use varamp::sweep::{
    correlation_points, correlation_window, default_window, fit_points, linspace, points_to_csv, sweep, KPolicy, PeakSearch, Track,
};
use varamp::{Error, Result};

use args::*;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: &Command) -> Result<()> {
    let config = serde_json::to_value(cmd)?;
    match cmd {
        Command::Gen(a) => {
            let p = load_problem(&a.source, a.seed)?;
            write_out(a.out.as_deref(), &p.to_json()?)
        }
        Command::Eval(a) => eval(a, &config),
        Command::Spectrum(a) => spectrum_cmd(a, &config),
        Command::Amplify(a) => amplify(a, &config),
        Command::Sweep(a) => sweep_cmd(a, &config),
        Command::Peaks(a) => peaks(a, &config),
        Command::EstimatePs(a) => estimate(a, &config),
        Command::Experiment(a) => experiment(a, &config),
        Command::Hybrid(a) => hybrid(a, &config),
        Command::Circuit(a) => circuit(a, &config),
    }
}

fn load_problem(src: &Source, seed: u64) -> Result<Problem> {
    if let Some(path) = &src.problem {
        return Problem::from_json(&fs::read_to_string(path)?);
    }
    if let Some(Preset::Chain4) = src.preset {
        return Ok(Problem::chain4_example());
    }
    let s = derive_seed(seed, "problem", 0);
    let n = src.n;
    let edges = src.edges.unwrap_or(n * n.saturating_sub(1) / 4);
    let weights = src.weighted.then_some((src.lo, src.hi));
    match src.kind {
        ProblemKind::LinearQubo => generate_linear_qubo(n, src.lo, src.hi, s),
        ProblemKind::GraphQubo => generate_graph_qubo(n, edges, src.lo, src.hi, s),
        ProblemKind::MaxCut => generate_random_graph(n, edges, weights, s),
        ProblemKind::Coloring => generate_coloring(n, edges, src.colors, weights, s),
        ProblemKind::SubsetSum => generate_subset_sum(n, src.lo, src.hi, s),
    }
}

fn resolve_ps(spec: PsSpec, problem: &Problem, space: &SolutionSpace, seed: u64) -> Result<f64> {
    match spec {
        PsSpec::Exact => exact_ps(space),
        PsSpec::Value(v) => Ok(v),
        PsSpec::Sampled(m) => {
            let samples = sample_costs(problem, m, derive_seed(seed, "sampling", 0))?;
            Ok(estimate_ps_with(&samples, problem.space_size_f64(), &GaussianProfile)?.ps_t)
        }
    }
}

fn resolve_k(spec: KSpec, d: usize) -> Result<usize> {
    match spec {
        KSpec::Grover => grover_iterations(d, 1),
        KSpec::Fixed(k) => Ok(k),
    }
}

fn policy(spec: KSpec) -> KPolicy {
    match spec {
        KSpec::Grover => KPolicy::Grover,
        KSpec::Fixed(k) => KPolicy::Fixed(k),
    }
}

fn grid(spec: Option<GridSpec>, space: &SolutionSpace) -> Result<Vec<f64>> {
    match spec {
        Some(g) => linspace(g.lo, g.hi, g.steps),
        None => {
            let (lo, hi) = default_window(space)?;
            linspace(lo, hi, PeakSearch::default().grid_points)
        }
    }
}

fn write_out(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, body)?),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Writes `csv` or the JSON record, keeping the run configuration with it.
fn emit(common: &Common, config: &Value, csv: impl FnOnce() -> Result<String>, result: impl Serialize) -> Result<()> {
    match common.format {
        Format::Json => {
            let body = serde_json::to_string_pretty(&json!({ "run": config, "result": result }))? + "\n";
            write_out(common.out.as_deref(), &body)
        }
        Format::Csv => {
            if let Some(path) = &common.out {
                let mut sidecar = path.as_os_str().to_owned();
                sidecar.push(".run.json");
                fs::write(sidecar, serde_json::to_string_pretty(config)? + "\n")?;
            }
            write_out(common.out.as_deref(), &csv()?)
        }
    }
}

fn eval(a: &EvalArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.seed)?;
    let x: Assignment = a.assignment.parse()?;
    let cost = p.evaluate_cost(&x)?;
    match a.format {
        Format::Csv => println!("{cost}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "run": config, "result": { "assignment": x, "cost": cost } }))?
        ),
    }
    Ok(())
}

fn spectrum_cmd(a: &SpectrumArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.common.seed)?;
    let space = enumerate(&p)?;
    if let Some(path) = &a.save {
        let meta = SpaceMeta {
            n: Some(p.n()),
            radix: Some(p.radix()),
            kind: Some(p.kind().to_string()),
            seed: Some(a.common.seed),
            d: space.d(),
        };
        space.save(path, &meta)?;
    }
    let ps = resolve_ps(a.ps, &p, &space, a.common.seed)?;
    let st = stats(&space, ps);
    let binning = match a.bins {
        BinSpec::Unit => Binning::Unit,
        BinSpec::Count(n) => Binning::Count(n),
        BinSpec::Auto if space.is_integer_valued() && space.c_max() - space.c_min() <= 1e6 => Binning::Unit,
        BinSpec::Auto => Binning::Count(100),
    };
    let hist = histogram(&space, binning)?;
    let fit = fit_gaussian(&hist).ok();
    emit(&a.common, config, || hist.to_csv(), json!({
        "d": space.d(),
        "p_s": ps,
        "stats": st,
        "argmin": space.argmin(),
        "argmax": space.argmax(),
        "fit": fit,
        "histogram": { "centers": hist.centers(), "counts": hist.counts },
    }))
}

fn amplify(a: &AmplifyArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.common.seed)?;
    let space = enumerate(&p)?;
    let ps = resolve_ps(a.ps, &p, &space, a.common.seed)?;
    let k = resolve_k(a.k, space.d())?;
    let amp = ClassAmplifier::new(&space);
    let class_probs = amp.run(ps, k);
    let classes = space.classes();
    // Per-state probability is the class total split evenly.
    let mut rows: Vec<(usize, f64, f64)> = (0..classes.len())
        .flat_map(|c| {
            let each = class_probs[c] / classes.count(c) as f64;
            classes.members(c).iter().map(move |&i| (i as usize, classes.values()[c], each))
        })
        .collect();
    rows.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)));
    rows.truncate(a.top);
    let p_min = class_probs[0];
    let p_max = class_probs[classes.len() - 1];
    let baseline = (space.argmin().len() + space.argmax().len()) as f64 / space.d() as f64;
    let table = |rows: &[(usize, f64, f64)]| -> Vec<Value> {
        rows.iter()
            .map(|&(i, c, pr)| json!({ "index": i, "assignment": space.assignment(i).map(|x| x.to_string()), "cost": c, "prob": pr }))
            .collect()
    };
    emit(
        &a.common,
        config,
        || {
            let mut w = String::from("index,assignment,cost,prob\n");
            for &(i, c, pr) in &rows {
                let x = space.assignment(i).map(|x| x.to_string()).unwrap_or_default();
                w.push_str(&format!("{i},{x},{c},{pr}\n"));
            }
            Ok(w)
        },
        json!({
            "p_s": ps,
            "k": k,
            "p_min": p_min,
            "p_max": p_max,
            "uniform_baseline": baseline,
            "top": table(&rows),
        }),
    )
}

fn sweep_cmd(a: &SweepArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.common.seed)?;
    let space = enumerate(&p)?;
    let g = grid(a.grid, &space)?;
    let k = resolve_k(a.k, space.d())?;
    let rec = sweep(&space, &g, k, &Track::Best { r: a.track, direction: a.direction }, a.top_r)?;
    emit(&a.common, config, || rec.to_csv(), &rec)
}

fn peaks(a: &PeaksArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.common.seed)?;
    let space = enumerate(&p)?;
    let mut search = PeakSearch::default();
    let window = match a.grid {
        Some(g) => {
            search.grid_points = g.steps;
            (g.lo, g.hi)
        }
        None => correlation_window(&space, a.r, a.direction)?,
    };
    let points = correlation_points(&space, a.r, a.direction, window, policy(a.k), &search)?;
    let fit = fit_points(&points)?;
    emit(&a.common, config, || points_to_csv(&points), json!({ "points": points, "fit": fit }))
}

fn estimate(a: &EstimateArgs, config: &Value) -> Result<()> {
    if a.table1 {
        let table = table1_experiment(a.source.n, &a.m, a.trials, a.qubos, a.common.seed)?;
        return emit(&a.common, config, || table.to_csv(), &table);
    }
    let p = load_problem(&a.source, a.common.seed)?;
    let m = *a.m.first().ok_or_else(|| Error::InvalidArgument("no sample size".into()))?;
    let samples = sample_costs(&p, m, derive_seed(a.common.seed, "sampling", 0))?;
    let est = estimate_ps_with(&samples, p.space_size_f64(), &GaussianProfile)?;
    emit(
        &a.common,
        config,
        || {
            Ok(format!(
                "m_samples,mu_t,sigma_t,alpha_t,x_minus,x_plus,ps_t\n{},{},{},{},{},{},{}\n",
                est.m_samples, est.mu_t, est.sigma_t, est.alpha_t, est.x_minus, est.x_plus, est.ps_t
            ))
        },
        &est,
    )
}

fn experiment(a: &ExperimentArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.common.seed)?;
    let space = enumerate(&p)?;
    let g = grid(a.grid, &space)?;
    let k = resolve_k(a.k, space.d())?;
    let rec = simulated_experiment(&space, &g, k, a.budget, a.threshold, derive_seed(a.common.seed, "shots", 0))?;
    emit(&a.common, config, || rec.to_csv(), &rec)
}

fn hybrid(a: &HybridArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.seed)?;
    let space = enumerate(&p)?;
    let cfg = HybridConfig { direction: a.direction, ..HybridConfig::default() };
    let out = hybrid_solve_on(&p, &space, a.budget, &cfg, derive_seed(a.seed, "hybrid", 0))?;
    let body = serde_json::to_string_pretty(&json!({ "run": config, "result": out }))? + "\n";
    write_out(a.out.as_deref(), &body)
}

fn circuit(a: &CircuitArgs, config: &Value) -> Result<()> {
    let p = load_problem(&a.source, a.seed)?;
    let space = enumerate(&p)?;
    let ps = resolve_ps(a.ps, &p, &space, a.seed)?;
    let c = build_oracle(&p, ps)?;
    if a.verify {
        let diag = extract_diagonal(&c)?;
        let c0 = space.costs()[0];
        let worst = diag
            .iter()
            .zip(space.costs())
            .map(|(z, &cost)| (z - phase(ps * (cost - c0))).norm())
            .fold(0.0, f64::max);
        eprintln!("{}", json!({ "verify": { "entries": diag.len(), "max_deviation": worst, "ok": worst < 1e-12 } }));
        if worst.is_nan() || worst >= 1e-12 {
            return Err(Error::NotDiagonal(format!("circuit deviates from the phase table by {worst}")));
        }
    }
    let body = match a.emit {
        Emit::Qasm => export_text(&c),
        Emit::Json => serde_json::to_string_pretty(&json!({ "run": config, "circuit": c }))? + "\n",
    };
    write_out(a.out.as_deref(), &body)
}
