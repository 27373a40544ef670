//! Command implementations. Each reads through [`Run::input`] and writes through
//! [`Run::output`] so the manifest sees every file.

use std::cell::RefCell;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

use cim_core::apps::{
    docking_qubo, feature_selection_qubo, ks_statistic, pearson_matrix, selection_score, synthetic_docking,
    DockingInstance, FeatureSelectionInstance, Site,
};
use cim_core::engine::CimEngine;
use cim_core::generators::{mobius_ladder, random_graph, MobiusSpec, RandomGraphSpec};
use cim_core::graph::{cut_to_energy, energy_to_cut};
use cim_core::quantum::{lobe_separation, photon_number, steady_state, wigner as wigner_grid, DopoParams, GridSpec, STEADY_STATE_TOL};
use cim_core::rng::run_seed;
use cim_core::solvers::{batch_stats, brute_force, cut_threshold, BatchConfig, Goal, Solution, Solver};
use cim_core::{absorb_field, maxcut_to_ising, qubo_to_ising, IsingModel};
use serde::Deserialize;

use crate::cli::{
    display, execute, pick_list, BenchArgs, Cli, Command, DockArgs, Engine, EngineChoice, Format, FsArgs, GenGraphArgs,
    GraphKind, KsArgs, SolveArgs, WignerArgs,
};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::formats::{Real, parse_edge_list, parse_matrix, parse_numbers, parse_points, parse_problem, parse_table, write_edge_list, write_points, write_qubo, Problem};
use crate::manifest::{load_manifest, sha256_hex, Run};
use crate::optima::{self, mobius_instance, parse_random_spec, random_instance, Instance, ReferenceOptimum};
use crate::outputs::{
    feature_masks_csv, to_json, trajectory_csv, BenchEntry, BenchReport, FeatureMask, KsReport, SolveResult,
    TrendReport, WignerMeta, WignerSummary,
};

pub fn gen_graph(a: &GenGraphArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let v: usize = cfg.pick(a.v, "v")?.ok_or_else(|| CliError::input("--v is required"))?;
    run.param("kind", format!("{:?}", a.kind).to_lowercase());
    run.param("v", v);
    let graph = match a.kind {
        GraphKind::Mobius => mobius_ladder(MobiusSpec { vertices: v })?,
        GraphKind::Random => {
            let density: f64 = cfg.pick(a.density, "density")?.ok_or_else(|| CliError::input("--density is required"))?;
            let seed = cfg.pick_or(a.seed, "seed", 0)?;
            run.param("density", density);
            run.seed(seed);
            random_graph(RandomGraphSpec { vertices: v, density, seed })?
        }
    };
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());
    run.output(out.as_deref(), write_edge_list(&graph).as_bytes())
}

fn best_of_runs(solver: &dyn Solver, model: &IsingModel, runs: usize, seed: u64) -> CliResult<(u64, Solution)> {
    let mut best: Option<(u64, Solution)> = None;
    for r in 0..runs {
        let s = run_seed(seed, 0, r);
        let sol = solver.solve(model, s)?;
        if best.as_ref().map_or(true, |(_, b)| sol.energy < b.energy) {
            best = Some((s, sol));
        }
    }
    best.ok_or_else(|| CliError::input("--runs must be positive"))
}

pub fn solve(a: &SolveArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let text = run.input(&a.problem)?;
    let problem = parse_problem(&text, &display(&a.problem))?;
    let engine = cfg.pick(a.engine, "engine")?.unwrap_or(Engine::Cim);
    let seed = cfg.pick_or(a.seed, "seed", 0)?;
    let runs = match engine {
        Engine::Exact => 1,
        _ => cfg.pick_or(a.runs, "runs", 1)?,
    };
    let choice = EngineChoice::resolve(engine, &a.cim, &a.sa, cfg)?;

    let (model, total_weight) = match &problem {
        Problem::MaxCut(g) => (maxcut_to_ising(g), Some(g.total_weight())),
        Problem::Ising(m) => (m.clone(), None),
        Problem::Qubo(q) => (qubo_to_ising(q), None),
    };
    let target = match (cfg.pick(a.target, "target")?, cfg.pick::<f64>(a.target_cut, "target-cut")?) {
        (Some(_), Some(_)) => return Err(CliError::input("give --target or --target-cut, not both")),
        (t, None) => t,
        (None, Some(c)) => match total_weight {
            Some(w) => Some(cut_to_energy(w, c)),
            None => return Err(CliError::input("--target-cut needs a Max-Cut problem")),
        },
    };
    let trajectory_path = cfg.pick(a.trajectory.clone(), "trajectory")?;
    if trajectory_path.is_some() && engine != Engine::Cim {
        return Err(CliError::input("--trajectory is only available with --engine cim"));
    }

    run.param("engine", engine.name());
    run.param("runs", runs);
    run.param("target_energy", target);
    choice.record(run);
    run.seed(seed);

    let (best_seed, best) = best_of_runs(choice.solver(), &model, runs, seed)?;

    let mut rounds_to_target = None;
    if let EngineChoice::Cim(cim) = &choice {
        if target.is_some() || trajectory_path.is_some() {
            let extended;
            let dynamics_model = if model.is_field_free() {
                &model
            } else {
                extended = absorb_field(&model);
                &extended
            };
            let mut params = cim.params;
            params.seed = best_seed;
            let traj = CimEngine::new(dynamics_model, params)?.simulate(target)?;
            rounds_to_target = traj.rounds_to_target;
            if let Some(path) = &trajectory_path {
                run.output(Some(path), trajectory_csv(&traj).as_bytes())?;
            }
        }
    }

    let result = SolveResult {
        problem: display(&a.problem),
        kind: problem.kind().into(),
        engine: engine.name().into(),
        seed,
        runs,
        best_config: best.spins.as_slice().to_vec(),
        best_energy: best.energy,
        best_cut: total_weight.map(|w| energy_to_cut(w, best.energy)),
        best_x: matches!(problem, Problem::Qubo(_)).then(|| best.spins.to_binary()),
        rounds_to_target,
    };
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());
    run.output(out.as_deref(), to_json(&result).as_bytes())
}

/// Remembers each seed's solution so thresholds share one set of runs.
struct Memo<'a> {
    inner: &'a dyn Solver,
    cache: RefCell<HashMap<u64, Solution>>,
}

impl Solver for Memo<'_> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn solve(&self, model: &IsingModel, seed: u64) -> cim_core::Result<Solution> {
        if let Some(s) = self.cache.borrow().get(&seed) {
            return Ok(s.clone());
        }
        let s = self.inner.solve(model, seed)?;
        self.cache.borrow_mut().insert(seed, s.clone());
        Ok(s)
    }
}

fn exact_max_cut(inst: &Instance) -> CliResult<f64> {
    let model = maxcut_to_ising(&inst.graph);
    let r = brute_force(&model, 1).map_err(|_| {
        CliError::Refusal(format!(
            "no reference optimum for {} and {} vertices is too many for an exact solve; supply one with --optima",
            inst.id,
            inst.graph.n()
        ))
    })?;
    Ok(energy_to_cut(inst.graph.total_weight(), r.min_energy))
}

pub fn bench(a: &BenchArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let engine = cfg.pick(a.engine, "engine")?.unwrap_or(Engine::Cim);
    let runs = cfg.pick_or(a.runs, "runs", 100)?;
    let batches = cfg.pick_or(a.batches, "batches", 1)?;
    let seed = cfg.pick_or(a.seed, "seed", 0)?;
    let format = cfg.pick(a.format, "format")?.unwrap_or(Format::Json);
    let mut thresholds = pick_list(&a.thresholds, cfg, "thresholds")?;
    if thresholds.is_empty() {
        thresholds = vec![1.0, 0.98, 0.95];
    }
    if let Some(t) = thresholds.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(CliError::input(format!("threshold {t} is not in (0, 1]")));
    }
    let choice = EngineChoice::resolve(engine, &a.cim, &a.sa, cfg)?;

    let mut table = optima::builtin();
    if let Some(path) = cfg.pick(a.optima.clone(), "optima")? {
        let text = run.input(&path)?;
        let extra: Vec<ReferenceOptimum> = serde_json::from_str(&text)?;
        table.extend(extra);
    }

    let mut instances = Vec::new();
    for v in pick_list(&a.mobius, cfg, "mobius")? {
        instances.push(mobius_instance(v)?);
    }
    for spec in pick_list(&a.random, cfg, "random")? {
        instances.push(random_instance(parse_random_spec(&spec)?, &table)?);
    }
    for path in pick_list(&a.graph, cfg, "graph")? {
        let text = run.input(&path)?;
        let graph = parse_edge_list(&text, &display(&path))?;
        let optimum = optima::lookup_by_graph(&graph, &table);
        instances.push(Instance { id: display(&path), graph, optimum });
    }
    if instances.is_empty() {
        return Err(CliError::input("no problems given; use --mobius, --random or --graph"));
    }

    run.param("engine", engine.name());
    run.param("runs", runs);
    run.param("batches", batches);
    run.param("thresholds", &thresholds);
    run.param("problems", instances.iter().map(|i| i.id.clone()).collect::<Vec<_>>());
    choice.record(run);
    run.seed(seed);

    let mut results = Vec::new();
    for inst in &instances {
        let optimum = match inst.optimum {
            Some(o) => o,
            None => exact_max_cut(inst)?,
        };
        let model = maxcut_to_ising(&inst.graph);
        let w = inst.graph.total_weight();
        let granularity = inst.graph.has_integer_weights().then_some(1.0);
        let memo = Memo { inner: choice.solver(), cache: RefCell::new(HashMap::new()) };
        let config = BatchConfig { runs_per_batch: runs, batches, base_seed: seed };
        for &frac in &thresholds {
            let goal = Goal::Cut { total_weight: w, threshold: cut_threshold(optimum, frac, granularity) };
            let stats = batch_stats(&memo, &model, goal, &inst.id, config)?;
            eprintln!("{} at {:.0}%: success {:.3}", inst.id, frac * 100.0, stats.mean);
            results.push(BenchEntry { threshold_fraction: frac, optimum, stats });
        }
    }
    let trend = thresholds
        .iter()
        .map(|&frac| {
            let entries: Vec<&BenchEntry> = results.iter().filter(|e| e.threshold_fraction == frac).collect();
            TrendReport::from_entries(&entries)
        })
        .collect();
    let report = BenchReport { engine: engine.name().into(), results, trend };

    let bytes = match format {
        Format::Json => to_json(&report).into_bytes(),
        Format::Csv => bench_csv(&report)?,
    };
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());
    run.output(out.as_deref(), &bytes)
}

fn bench_csv(report: &BenchReport) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::input(format!("CSV: {e}"));
    w.write_record(["problem_id", "solver", "threshold_fraction", "optimum", "target", "runs_per_batch", "batches", "mean", "std"])
        .map_err(fail)?;
    for e in &report.results {
        let s = &e.stats;
        w.write_record([
            s.problem_id.clone(),
            s.solver.clone(),
            Real(e.threshold_fraction).to_string(),
            Real(e.optimum).to_string(),
            Real(s.target).to_string(),
            s.runs_per_batch.to_string(),
            s.batches.to_string(),
            Real(s.mean).to_string(),
            Real(s.std).to_string(),
        ])
        .map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::input(format!("CSV: {e}")))
}

pub fn wigner(a: &WignerArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let s_list: Vec<f64> = pick_list(&a.s, cfg, "s")?;
    if s_list.is_empty() {
        return Err(CliError::input("--s needs at least one pump value"));
    }
    let b = cfg.pick_or(a.b, "b", DopoParams::DEFAULT_B)?;
    let gamma_s = cfg.pick_or(a.gamma_s, "gamma-s", 1.0)?;
    let n_max = cfg.pick_or(a.n_max, "n-max", DopoParams::DEFAULT_N_MAX)?;
    let points = cfg.pick_or(a.grid, "grid", 161)?;
    let tol = cfg.pick_or(a.tol, "tol", STEADY_STATE_TOL)?;
    let mut spec = GridSpec::for_truncation(n_max, points);
    if let Some(e) = cfg.pick(a.extent, "extent")? {
        spec.x_max = e;
        spec.p_max = e;
    }
    spec.validate()?;
    let out_dir: PathBuf = cfg.pick(a.out_dir.clone(), "out-dir")?.ok_or_else(|| CliError::input("--out-dir is required"))?;

    run.param("s", &s_list);
    run.param("b", b);
    run.param("gamma_s", gamma_s);
    run.param("n_max", n_max);
    run.param("grid", points);
    run.param("extent", spec.x_max);
    run.param("tol", tol);
    run.manifest_default(out_dir.join("manifest.json"));

    let mut entries = Vec::new();
    for &s in &s_list {
        let params = DopoParams { s, gamma_s, b };
        params.validate()?;
        let rho = steady_state(&params, n_max, tol)?;
        let grid = wigner_grid(&rho, &spec)?;
        let meta = WignerMeta {
            s,
            gamma_s,
            b,
            n_max,
            trace_residual: (rho.trace().re - 1.0).abs(),
            integral_residual: (grid.integral() - 1.0).abs(),
            photon_number: photon_number(&rho),
            lobe_separation: lobe_separation(&grid),
            support_warning: grid.support_warning,
        };
        if meta.support_warning {
            eprintln!("warning: S = {s}: Wigner function not contained in the grid; widen --extent or raise --n-max");
        }
        eprintln!("S = {s}: <n> = {:.4}, lobe separation {:.4}", meta.photon_number, meta.lobe_separation);
        let stem = format!("wigner_S{s}");
        run.output(Some(&out_dir.join(format!("{stem}.csv"))), crate::outputs::wigner_csv(&grid).as_bytes())?;
        run.output(Some(&out_dir.join(format!("{stem}.json"))), to_json(&meta).as_bytes())?;
        entries.push(meta);
    }
    let strictly_increasing = entries.windows(2).all(|w| w[1].lobe_separation > w[0].lobe_separation);
    let summary = WignerSummary { entries, strictly_increasing };
    run.output(Some(&out_dir.join("summary.json")), to_json(&summary).as_bytes())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DockParams {
    eps_dist: f64,
    #[serde(rename = "K_dist")]
    k_dist: f64,
    #[serde(rename = "K_mono")]
    k_mono: f64,
    w: String,
}

fn parse_triple(spec: &str, what: &str) -> CliResult<(usize, usize, u64)> {
    let bad = || CliError::input(format!("{what} {spec:?} must read A:B:SEED"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((parts[0].parse().map_err(|_| bad())?, parts[1].parse().map_err(|_| bad())?, parts[2].parse().map_err(|_| bad())?))
}

fn load_docking(a: &DockArgs, cfg: &Config, run: &mut Run) -> CliResult<DockingInstance> {
    let need = |p: Option<PathBuf>, flag: &str| p.ok_or_else(|| CliError::input(format!("--{flag} is required")));
    let atoms_path = need(cfg.pick(a.atoms.clone(), "atoms")?, "atoms")?;
    let grid_path = need(cfg.pick(a.grid.clone(), "grid")?, "grid")?;
    let params_path = need(cfg.pick(a.params.clone(), "params")?, "params")?;
    let atoms = parse_points(&run.input(&atoms_path)?, &display(&atoms_path))?;
    let grid = parse_points(&run.input(&grid_path)?, &display(&grid_path))?;
    let p: DockParams = serde_json::from_str(&run.input(&params_path)?)?;
    run.param("eps_dist", p.eps_dist);
    run.param("K_dist", p.k_dist);
    run.param("K_mono", p.k_mono);
    run.param("w", &p.w);
    let inst = if let Some(value) = p.w.strip_prefix("uniform:") {
        let w: f64 = value.trim().parse().map_err(|_| CliError::input(format!("bad uniform weight {value:?}")))?;
        DockingInstance::uniform(atoms, grid, w, p.eps_dist, p.k_dist, p.k_mono)?
    } else {
        // Matrix paths are relative to the parameter file.
        let base = params_path.parent().unwrap_or(Path::new(""));
        let wpath = base.join(&p.w);
        let weights = parse_matrix(&run.input(&wpath)?, &display(&wpath))?;
        DockingInstance::new(atoms, grid, weights, p.eps_dist, p.k_dist, p.k_mono)?
    };
    Ok(inst)
}

pub fn dock_qubo(a: &DockArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let inst = match cfg.pick::<String>(a.synthetic.clone(), "synthetic")? {
        Some(spec) => {
            let (atoms, decoys, seed) = parse_triple(&spec, "--synthetic")?;
            run.param("synthetic", &spec);
            run.seed(seed);
            let syn = synthetic_docking(atoms, decoys, seed)?;
            if let Some(dir) = cfg.pick(a.instance_dir.clone(), "instance-dir")? {
                write_docking_instance(&dir, &syn.instance, &syn.crystal, run)?;
            }
            syn.instance
        }
        None => load_docking(a, cfg, run)?,
    };
    let q = docking_qubo(&inst);
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());
    run.output(out.as_deref(), write_qubo(&q).as_bytes())
}

/// Writes an instance in the files `dock-qubo` reads back.
fn write_docking_instance(dir: &Path, inst: &DockingInstance, crystal: &[[f64; 3]], run: &mut Run) -> CliResult<()> {
    let (k_dist, k_mono) = inst.penalties();
    let mut weights = String::new();
    for i in 0..inst.atoms().len() {
        let row: Vec<String> = (0..inst.grid().len()).map(|j| Real(inst.weight(i, j)).to_string()).collect();
        weights.push_str(&row.join(" "));
        weights.push('\n');
    }
    let crystal_sites: Vec<Site> =
        crystal.iter().zip(inst.atoms()).map(|(p, a)| Site::new(*p, &a.label)).collect();
    let params = serde_json::json!({
        "eps_dist": inst.eps_dist(),
        "K_dist": k_dist,
        "K_mono": k_mono,
        "w": "weights.txt",
    });
    run.output(Some(&dir.join("atoms.txt")), write_points(inst.atoms()).as_bytes())?;
    run.output(Some(&dir.join("grid.txt")), write_points(inst.grid()).as_bytes())?;
    run.output(Some(&dir.join("crystal.txt")), write_points(&crystal_sites).as_bytes())?;
    run.output(Some(&dir.join("weights.txt")), weights.as_bytes())?;
    run.output(Some(&dir.join("params.json")), to_json(&params).as_bytes())
}

/// `START:STOP:STEP` with both ends included, values rounded to 1e-10.
pub fn parse_alpha_sweep(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::input(format!("--alpha-sweep {spec:?} must read START:STOP:STEP with STEP > 0"));
    let parts: Vec<f64> = spec.split(':').map(|s| s.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| ((start + k as f64 * step) * 1e10).round() / 1e10).collect())
}

pub fn fs_qubo(a: &FsArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let table = parse_table(&run.input(&a.data)?, &display(&a.data))?;
    let label_idx = table.column_index(&a.label)?;
    let features: Vec<usize> = if a.features.is_empty() {
        (0..table.headers.len()).filter(|&k| k != label_idx).collect()
    } else {
        a.features.iter().map(|f| table.column_index(f)).collect::<CliResult<_>>()?
    };
    if features.is_empty() {
        return Err(CliError::input("no feature columns"));
    }
    let columns: Vec<Vec<f64>> = features.iter().map(|&k| table.columns[k].clone()).collect();
    let rel = pearson_matrix(&columns, &table.columns[label_idx])?;
    if rel.constant_label {
        eprintln!("warning: label column is constant; all relevances are zero");
    }
    for &k in &rel.constant_features {
        eprintln!("warning: feature {:?} is constant; its correlations are zero", table.headers[features[k]]);
    }

    let engine = cfg.pick(a.engine, "engine")?.unwrap_or(Engine::Exact);
    let seed = cfg.pick_or(a.seed, "seed", 0)?;
    let runs = cfg.pick_or(a.runs, "runs", 1)?;
    let choice = EngineChoice::resolve(engine, &a.cim, &a.sa, cfg)?;
    let format = cfg.pick(a.format, "format")?.unwrap_or(Format::Json);
    let alpha = cfg.pick::<f64>(a.alpha, "alpha")?;
    let sweep = cfg.pick::<String>(a.alpha_sweep.clone(), "alpha-sweep")?;
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());

    run.param("label", &a.label);
    run.param("features", features.iter().map(|&k| table.headers[k].clone()).collect::<Vec<_>>());
    run.param("engine", engine.name());
    run.param("runs", runs);
    choice.record(run);
    run.seed(seed);

    let solve_mask = |alpha: f64| -> CliResult<FeatureMask> {
        let inst = FeatureSelectionInstance::from_relevance(&rel, alpha)?;
        let model = qubo_to_ising(&feature_selection_qubo(&inst));
        let (_, best) = best_of_runs(choice.solver(), &model, if engine == Engine::Exact { 1 } else { runs }, seed)?;
        let x = best.spins.to_binary();
        let selected = x.iter().enumerate().filter(|(_, &b)| b == 1).map(|(k, _)| k).collect();
        Ok(FeatureMask { alpha, selected, objective: selection_score(&inst, &x)? })
    };

    match (alpha, sweep) {
        (Some(_), Some(_)) => Err(CliError::input("give --alpha or --alpha-sweep, not both")),
        (None, None) => Err(CliError::input("--alpha or --alpha-sweep is required")),
        (Some(alpha), None) => {
            run.param("alpha", alpha);
            let inst = FeatureSelectionInstance::from_relevance(&rel, alpha)?;
            if let Some(mask_path) = cfg.pick(a.mask.clone(), "mask")? {
                run.output(Some(&mask_path), to_json(&solve_mask(alpha)?).as_bytes())?;
            }
            run.output(out.as_deref(), write_qubo(&feature_selection_qubo(&inst)).as_bytes())
        }
        (None, Some(spec)) => {
            let alphas = parse_alpha_sweep(&spec)?;
            run.param("alpha_sweep", &spec);
            let masks: Vec<FeatureMask> = alphas.into_iter().map(solve_mask).collect::<CliResult<_>>()?;
            let bytes = match format {
                Format::Json => to_json(&masks),
                Format::Csv => feature_masks_csv(&masks),
            };
            run.output(out.as_deref(), bytes.as_bytes())
        }
    }
}

pub fn ks(a: &KsArgs, cfg: &Config, run: &mut Run) -> CliResult<()> {
    let (sa, sb) = match (cfg.pick(a.data.clone(), "data")?, cfg.pick(a.a.clone(), "a")?, cfg.pick(a.b.clone(), "b")?) {
        (Some(data), None, None) => {
            let table = parse_table(&run.input(&data)?, &display(&data))?;
            let score: String = cfg.pick(a.score.clone(), "score")?.ok_or_else(|| CliError::input("--score is required with --data"))?;
            let label: String = cfg.pick(a.label.clone(), "label")?.ok_or_else(|| CliError::input("--label is required with --data"))?;
            let scores = &table.columns[table.column_index(&score)?];
            let labels = &table.columns[table.column_index(&label)?];
            let mut classes = labels.clone();
            classes.sort_by(f64::total_cmp);
            classes.dedup();
            if classes.len() != 2 {
                return Err(CliError::input(format!("label column {label:?} must take exactly two values, found {}", classes.len())));
            }
            run.param("score", &score);
            run.param("label", &label);
            let pick = |c: f64| scores.iter().zip(labels).filter(|(_, &l)| l == c).map(|(&s, _)| s).collect::<Vec<_>>();
            (pick(classes[0]), pick(classes[1]))
        }
        (None, Some(pa), Some(pb)) => {
            let va = parse_numbers(&run.input(&pa)?, &display(&pa))?;
            let vb = parse_numbers(&run.input(&pb)?, &display(&pb))?;
            (va, vb)
        }
        _ => return Err(CliError::input("give either --a and --b, or --data with --score and --label")),
    };
    let report = KsReport { ks: ks_statistic(&sa, &sb)?, n_a: sa.len(), n_b: sb.len() };
    let out = cfg.pick(a.out.clone(), "out")?;
    run.primary_output(out.as_deref());
    run.output(out.as_deref(), to_json(&report).as_bytes())
}

fn replay_manifest_path(original: &Path) -> PathBuf {
    let name = original.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    original.with_file_name(format!("{stem}.replay.json"))
}

/// Re-runs a manifest in its recorded working directory after checking that its
/// inputs are unchanged, then compares output hashes.
pub fn replay(path: &Path, manifest_out: Option<&Path>) -> CliResult<()> {
    let original = load_manifest(path)?;
    let abs = std::fs::canonicalize(path).map_err(|e| CliError::io(path, e))?;
    let fresh_path = match manifest_out {
        Some(p) => std::path::absolute(p).map_err(|e| CliError::io(p, e))?,
        None => replay_manifest_path(&abs),
    };
    let cwd = PathBuf::from(&original.cwd);
    std::env::set_current_dir(&cwd).map_err(|e| CliError::io(&cwd, e))?;
    for input in &original.inputs {
        let p = Path::new(&input.path);
        let bytes = std::fs::read(p).map_err(|e| CliError::io(p, e))?;
        if sha256_hex(&bytes) != input.sha256 {
            return Err(CliError::input(format!("input {} changed since the recorded run", input.path)));
        }
    }
    let argv = std::iter::once("cimsim".to_string()).chain(original.argv.iter().cloned());
    let mut cli = <Cli as clap::Parser>::try_parse_from(argv)
        .map_err(|e| CliError::input(format!("manifest argv does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::input("a replay manifest cannot be replayed"));
    }
    cli.manifest = Some(fresh_path.clone());
    execute(cli, original.argv.clone())?;

    let fresh = load_manifest(&fresh_path)?;
    if fresh.outputs != original.outputs {
        let differing: Vec<String> = original
            .outputs
            .iter()
            .filter(|o| !fresh.outputs.contains(o))
            .map(|o| o.path.clone())
            .collect();
        return Err(CliError::Numerical(format!("replay outputs differ: {}", differing.join(", "))));
    }
    eprintln!("replay: {} output(s) reproduced", fresh.outputs.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_sweep_includes_both_ends() {
        assert_eq!(parse_alpha_sweep("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_alpha_sweep("0.9:1:0.1").unwrap(), vec![0.9, 1.0]);
        assert!(parse_alpha_sweep("0:1").is_err());
        assert!(parse_alpha_sweep("0:1:0").is_err());
        assert!(parse_alpha_sweep("1:0:0.5").is_err());
    }

    #[test]
    fn replay_manifest_sits_beside_original() {
        assert_eq!(replay_manifest_path(Path::new("out/b.json.manifest.json")), Path::new("out/b.json.manifest.replay.json"));
        assert_eq!(replay_manifest_path(Path::new("m")), Path::new("m.replay.json"));
    }
}
