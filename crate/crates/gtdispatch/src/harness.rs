//! Experiment orchestration: multi-seed training, metric computation, the
//! O&M-variant comparison, and CSV artifacts for external plotting.
//!
//! Metric math always runs over the recorded per-episode CSVs, so
//! regenerating a report from the run directory reproduces it bit-for-bit.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::agents::{
    evaluate_policy, search_rules, train_cem, train_dqn, train_ppo, train_reinforce, Algorithm,
    EpisodeStats, Rule, TrainedPolicy, TrainingCurve,
};
use crate::config::ExperimentConfig;
use crate::cost::OmVariant;
use crate::env::{ActionSpec, DispatchEnv, ObsScaler};
use crate::error::{Error, Result};
use crate::nn::{load_checkpoint, save_checkpoint};
use crate::scenario::ScenarioTable;

/// What a training run produces besides its curve.
pub enum Artifact {
    Policy(TrainedPolicy),
    Rule(Rule),
}

/// One (algorithm, seed) run that did not finish.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub algorithm: Algorithm,
    pub variant: Option<OmVariant>,
    pub seed: u64,
    pub message: String,
}

/// Aggregated metrics for one algorithm.
#[derive(Debug, Clone)]
pub struct AlgoMetrics {
    pub algorithm: Algorithm,
    /// Seeds that finished; the denominator of every mean.
    pub seeds_used: usize,
    pub seeds_total: usize,
    /// Mean over seeds of the mean reward over the final 10 episodes, C$.
    pub accumulated_reward_cad: f64,
    /// Mean over seeds of the mean reward over the first 20 episodes, C$.
    pub sample_efficiency_cad: f64,
}

#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub metrics: Vec<AlgoMetrics>,
    pub failures: Vec<RunFailure>,
}

impl MetricsReport {
    pub fn complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Mean reward over the final 10 episodes of a curve.
pub fn accumulated_reward(curve: &[EpisodeStats]) -> f64 {
    let tail = curve.len().saturating_sub(10);
    mean(curve[tail..].iter().map(|s| s.reward_cad))
}

/// Mean reward over the first 20 episodes of a curve.
pub fn sample_efficiency(curve: &[EpisodeStats]) -> f64 {
    let head = curve.len().min(20);
    mean(curve[..head].iter().map(|s| s.reward_cad))
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Per-episode mean and population standard deviation across seeds.
/// Truncates to the shortest curve.
pub fn aggregate_curves(curves: &[TrainingCurve]) -> Vec<(usize, f64, f64)> {
    let len = curves.iter().map(|c| c.len()).min().unwrap_or(0);
    (0..len)
        .map(|e| {
            let rewards: Vec<f64> = curves.iter().map(|c| c[e].reward_cad).collect();
            let m = mean(rewards.iter().copied());
            let var = rewards.iter().map(|r| (r - m).powi(2)).sum::<f64>() / rewards.len() as f64;
            (e, m, var.sqrt())
        })
        .collect()
}

/// Train one algorithm for one seed. `episodes` overrides the per-agent
/// episode budget from the config.
pub fn train_algorithm(
    algorithm: Algorithm,
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &ExperimentConfig,
    episodes: usize,
    seed: u64,
) -> Result<(Artifact, TrainingCurve)> {
    match algorithm {
        Algorithm::ReinforceDiscrete | Algorithm::ReinforceContinuous => {
            let mut a = cfg.agents.reinforce.clone();
            a.episodes = episodes;
            let discrete = algorithm == Algorithm::ReinforceDiscrete;
            let (policy, curve) = train_reinforce(env, scaler, &a, discrete, seed)?;
            Ok((Artifact::Policy(policy), curve))
        }
        Algorithm::Dqn => {
            let mut a = cfg.agents.dqn.clone();
            a.episodes = episodes;
            let (policy, curve) = train_dqn(env, scaler, &a, seed)?;
            Ok((Artifact::Policy(policy), curve))
        }
        Algorithm::Ppo => {
            let mut a = cfg.agents.ppo.clone();
            a.episodes = episodes;
            let (policy, curve) = train_ppo(env, scaler, &a, seed)?;
            Ok((Artifact::Policy(policy), curve))
        }
        Algorithm::Cem => {
            let mut a = cfg.agents.cem.clone();
            a.episodes = episodes;
            let (policy, curve) = train_cem(env, scaler, &a, seed)?;
            Ok((Artifact::Policy(policy), curve))
        }
        Algorithm::Rule => {
            let (rule, reward) =
                search_rules(env, &cfg.agents.rule.price_grid, &cfg.agents.rule.demand_grid)?;
            let stats = crate::agents::evaluate_rule(env, &rule, 0)?;
            debug_assert_eq!(stats.reward_cad, reward);
            Ok((Artifact::Rule(rule), vec![stats]))
        }
    }
}

/// Environment matching the algorithm's action convention.
fn make_env(
    scenario: Arc<ScenarioTable>,
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    variant: OmVariant,
) -> Result<DispatchEnv> {
    let mut env_cfg = cfg.env.clone();
    env_cfg.om_variant = variant;
    env_cfg.action_spec = if algorithm.is_discrete() {
        ActionSpec::Discrete
    } else {
        ActionSpec::continuous_default()
    };
    DispatchEnv::new(scenario, env_cfg)
}

fn run_dir(out: &Path, algorithm: Algorithm, seed: u64) -> PathBuf {
    out.join(algorithm.label()).join(format!("seed_{seed}"))
}

/// Train every (algorithm, seed) pair, write the run artifacts, and compute
/// the metric summary from the written CSVs. Failed runs are reported and
/// excluded from aggregation.
pub fn run_experiment(cfg: &ExperimentConfig, algorithms: &[Algorithm]) -> Result<MetricsReport> {
    cfg.validate()?;
    let scenario = Arc::new(cfg.scenario.load()?);
    scenario.require_full_year()?;
    let scaler = ObsScaler::from_scenario(&scenario);
    let out = &cfg.experiment.out_dir;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("config.toml"), cfg.to_toml()?)?;

    let mut failures = Vec::new();
    let runs: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| cfg.experiment.seeds.iter().map(move |&s| (a, s)))
        .collect();

    let results: Vec<(Algorithm, u64, Result<TrainingCurve>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = runs
            .iter()
            .map(|&(algorithm, seed)| {
                let scenario = Arc::clone(&scenario);
                let scaler = &scaler;
                scope.spawn(move || {
                    let curve = run_one(scenario, scaler, cfg, algorithm, seed, out);
                    (algorithm, seed, curve)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
    });

    for (algorithm, seed, result) in &results {
        if let Err(e) = result {
            eprintln!("warning: {} seed {seed} failed: {e}", algorithm.label());
            failures.push(RunFailure {
                algorithm: *algorithm,
                variant: None,
                seed: *seed,
                message: e.to_string(),
            });
        }
    }

    // Aggregate curves per algorithm from the recorded CSVs.
    for &algorithm in algorithms {
        let curves = read_algorithm_curves(out, algorithm, &cfg.experiment.seeds)?;
        if curves.is_empty() {
            continue;
        }
        write_curve_csv(&out.join(algorithm.label()).join("curve.csv"), &aggregate_curves(&curves))?;
    }

    let metrics = compute_metrics(out, algorithms, &cfg.experiment.seeds)?;
    let report = MetricsReport { metrics, failures };
    write_metrics_csv(&out.join("metrics.csv"), &report)?;
    Ok(report)
}

fn run_one(
    scenario: Arc<ScenarioTable>,
    scaler: &ObsScaler,
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    seed: u64,
    out: &Path,
) -> Result<TrainingCurve> {
    let mut env = make_env(scenario, cfg, algorithm, cfg.env.om_variant)?;
    let (artifact, curve) =
        train_algorithm(algorithm, &mut env, scaler, cfg, cfg.experiment.episodes, seed)?;
    let dir = run_dir(out, algorithm, seed);
    std::fs::create_dir_all(&dir)?;
    write_episodes_csv(&dir.join("episodes.csv"), &curve)?;
    save_artifact(&dir, &artifact)?;
    std::fs::write(dir.join("seed.txt"), format!("{seed}\n"))?;
    Ok(curve)
}

/// Metric summary recomputed purely from the per-episode CSV files.
pub fn compute_metrics(
    out: &Path,
    algorithms: &[Algorithm],
    seeds: &[u64],
) -> Result<Vec<AlgoMetrics>> {
    let mut metrics = Vec::new();
    for &algorithm in algorithms {
        let curves = read_algorithm_curves(out, algorithm, seeds)?;
        if curves.is_empty() {
            continue;
        }
        metrics.push(AlgoMetrics {
            algorithm,
            seeds_used: curves.len(),
            seeds_total: seeds.len(),
            accumulated_reward_cad: mean(curves.iter().map(|c| accumulated_reward(c))),
            sample_efficiency_cad: mean(curves.iter().map(|c| sample_efficiency(c))),
        });
    }
    Ok(metrics)
}

/// Episode curves of every seed whose run directory exists.
fn read_algorithm_curves(
    out: &Path,
    algorithm: Algorithm,
    seeds: &[u64],
) -> Result<Vec<TrainingCurve>> {
    let mut curves = Vec::new();
    for &seed in seeds {
        let path = run_dir(out, algorithm, seed).join("episodes.csv");
        if path.exists() {
            curves.push(read_episodes_csv(&path)?);
        }
    }
    Ok(curves)
}

fn save_artifact(dir: &Path, artifact: &Artifact) -> Result<()> {
    match artifact {
        Artifact::Policy(policy) => {
            save_checkpoint(&dir.join("policy.ckpt"), &policy.spec, &policy.params)?;
            let kind = serde_json::to_string(&policy.kind)
                .map_err(|e| Error::Config(format!("serialize policy kind: {e}")))?;
            std::fs::write(dir.join("policy_kind.json"), kind)?;
        }
        Artifact::Rule(rule) => {
            let text = serde_json::to_string_pretty(rule)
                .map_err(|e| Error::Config(format!("serialize rule: {e}")))?;
            std::fs::write(dir.join("rule.json"), text)?;
        }
    }
    Ok(())
}

/// Load a policy saved by `save_artifact`.
pub fn load_policy(dir: &Path) -> Result<TrainedPolicy> {
    let (spec, params) = load_checkpoint(&dir.join("policy.ckpt"))?;
    let kind_text = std::fs::read_to_string(dir.join("policy_kind.json"))?;
    let kind = serde_json::from_str(&kind_text)
        .map_err(|e| Error::Config(format!("policy_kind.json: {e}")))?;
    Ok(TrainedPolicy { kind, spec, params })
}

pub fn write_episodes_csv(path: &Path, curve: &[EpisodeStats]) -> Result<()> {
    let mut text = String::from("episode,reward_cad,gt_hours,gt_cycles,epsilon\n");
    for s in curve {
        let eps = s.epsilon.map(|e| e.to_string()).unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{eps}\n",
            s.episode, s.reward_cad, s.gt_hours, s.gt_cycles
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_episodes_csv(path: &Path) -> Result<TrainingCurve> {
    let text = std::fs::read_to_string(path)?;
    let parse_err = |line: usize, message: String| Error::Parse {
        file: path.display().to_string(),
        line,
        message,
    };
    let mut curve = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(i + 1, format!("expected 5 fields, got {}", fields.len())));
        }
        let num = |j: usize| -> Result<f64> {
            fields[j]
                .parse()
                .map_err(|e| parse_err(i + 1, format!("field {}: {e}", j + 1)))
        };
        curve.push(EpisodeStats {
            episode: num(0)? as usize,
            reward_cad: num(1)?,
            gt_hours: num(2)? as u32,
            gt_cycles: num(3)? as u32,
            epsilon: if fields[4].is_empty() { None } else { Some(num(4)?) },
        });
    }
    Ok(curve)
}

fn write_curve_csv(path: &Path, rows: &[(usize, f64, f64)]) -> Result<()> {
    let mut text = String::from("episode,mean_reward_cad,std_reward_cad\n");
    for (e, m, s) in rows {
        text.push_str(&format!("{e},{m},{s}\n"));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_metrics_csv(path: &Path, report: &MetricsReport) -> Result<()> {
    let mut text = String::from(
        "algorithm,seeds_used,seeds_total,accumulated_reward_cad,accumulated_reward_mcad,sample_efficiency_cad,sample_efficiency_mcad\n",
    );
    for m in &report.metrics {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            m.algorithm.label(),
            m.seeds_used,
            m.seeds_total,
            m.accumulated_reward_cad,
            m.accumulated_reward_cad / 1e6,
            m.sample_efficiency_cad,
            m.sample_efficiency_cad / 1e6,
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// One (algorithm, variant) cell of the O&M comparison.
#[derive(Debug, Clone)]
pub struct VariantCell {
    pub algorithm: Algorithm,
    pub variant: OmVariant,
    pub seeds_used: usize,
    /// Mean over seeds of the last-10-episode average reward, C$.
    pub reward_last10_cad: f64,
    /// Mean over seeds of the final-episode reward, C$.
    pub reward_final_cad: f64,
    /// Mean over seeds of annual turbine-on hours under the greedy policy.
    pub gt_hours: f64,
    /// Mean over seeds of annual starts under the greedy policy.
    pub gt_cycles: f64,
}

/// DYNAMIC-relative percentage increases, averaged over the algorithms.
#[derive(Debug, Clone)]
pub struct VariantIncrease {
    pub variant: OmVariant,
    pub hours_pct: f64,
    pub cycles_pct: f64,
}

#[derive(Debug, Clone)]
pub struct OmComparison {
    pub cells: Vec<VariantCell>,
    pub increases: Vec<VariantIncrease>,
    pub failures: Vec<RunFailure>,
}

pub fn percentage_increase(base: f64, value: f64) -> f64 {
    100.0 * (value - base) / base
}

/// Mean-over-seeds cell statistics from per-seed (last10, final, hours,
/// cycles) tuples.
fn cell_from_runs(
    algorithm: Algorithm,
    variant: OmVariant,
    runs: &[(f64, f64, f64, f64)],
) -> VariantCell {
    VariantCell {
        algorithm,
        variant,
        seeds_used: runs.len(),
        reward_last10_cad: mean(runs.iter().map(|r| r.0)),
        reward_final_cad: mean(runs.iter().map(|r| r.1)),
        gt_hours: mean(runs.iter().map(|r| r.2)),
        gt_cycles: mean(runs.iter().map(|r| r.3)),
    }
}

/// DYNAMIC-relative increases averaged over algorithms, from the cells.
pub fn variant_increases(cells: &[VariantCell], variants: &[OmVariant]) -> Vec<VariantIncrease> {
    let algorithms: Vec<Algorithm> = {
        let mut v = Vec::new();
        for c in cells {
            if !v.contains(&c.algorithm) {
                v.push(c.algorithm);
            }
        }
        v
    };
    let lookup = |a: Algorithm, v: OmVariant| {
        cells
            .iter()
            .find(|c| c.algorithm == a && c.variant == v)
    };
    variants
        .iter()
        .filter(|&&v| v != OmVariant::Dynamic)
        .map(|&variant| {
            let (mut hours, mut cycles) = (Vec::new(), Vec::new());
            for &a in &algorithms {
                if let (Some(base), Some(cell)) = (lookup(a, OmVariant::Dynamic), lookup(a, variant))
                {
                    hours.push(percentage_increase(base.gt_hours, cell.gt_hours));
                    cycles.push(percentage_increase(base.gt_cycles, cell.gt_cycles));
                }
            }
            VariantIncrease {
                variant,
                hours_pct: mean(hours.into_iter()),
                cycles_pct: mean(cycles.into_iter()),
            }
        })
        .collect()
}

/// Retrain DQN and PPO under each O&M variant and compare turbine usage.
pub fn compare_om_variants(cfg: &ExperimentConfig) -> Result<OmComparison> {
    cfg.validate()?;
    let scenario = Arc::new(cfg.scenario.load()?);
    scenario.require_full_year()?;
    let scaler = ObsScaler::from_scenario(&scenario);
    let out = &cfg.experiment.out_dir;
    std::fs::create_dir_all(out)?;

    let algorithms = [Algorithm::Dqn, Algorithm::Ppo];
    let variants = &cfg.experiment.om_variants;
    let runs: Vec<(Algorithm, OmVariant, u64)> = algorithms
        .iter()
        .flat_map(|&a| {
            variants
                .iter()
                .flat_map(move |&v| cfg.experiment.seeds.iter().map(move |&s| (a, v, s)))
        })
        .collect();

    type RunStats = (f64, f64, f64, f64);
    let results: Vec<(Algorithm, OmVariant, u64, Result<RunStats>)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = runs
                .iter()
                .map(|&(algorithm, variant, seed)| {
                    let scenario = Arc::clone(&scenario);
                    let scaler = &scaler;
                    scope.spawn(move || {
                        let r = compare_one(scenario, scaler, cfg, algorithm, variant, seed);
                        (algorithm, variant, seed, r)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
        });

    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for &algorithm in &algorithms {
        for &variant in variants {
            let mut ok = Vec::new();
            for (a, v, seed, result) in &results {
                if (*a, *v) != (algorithm, variant) {
                    continue;
                }
                match result {
                    Ok(stats) => ok.push(*stats),
                    Err(e) => {
                        eprintln!(
                            "warning: {} {} seed {seed} failed: {e}",
                            algorithm.label(),
                            variant.label()
                        );
                        failures.push(RunFailure {
                            algorithm,
                            variant: Some(variant),
                            seed: *seed,
                            message: e.to_string(),
                        });
                    }
                }
            }
            if !ok.is_empty() {
                cells.push(cell_from_runs(algorithm, variant, &ok));
            }
        }
    }

    let increases = variant_increases(&cells, variants);
    let comparison = OmComparison {
        cells,
        increases,
        failures,
    };
    write_om_comparison_csv(&out.join("om_comparison.csv"), &comparison)?;
    Ok(comparison)
}

fn compare_one(
    scenario: Arc<ScenarioTable>,
    scaler: &ObsScaler,
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    variant: OmVariant,
    seed: u64,
) -> Result<(f64, f64, f64, f64)> {
    let mut env = make_env(scenario, cfg, algorithm, variant)?;
    let (artifact, curve) = train_algorithm(
        algorithm,
        &mut env,
        scaler,
        cfg,
        cfg.experiment.compare_episodes,
        seed,
    )?;
    let policy = match artifact {
        Artifact::Policy(p) => p,
        Artifact::Rule(_) => {
            return Err(Error::Config("rule baseline has no place in the variant comparison".into()))
        }
    };
    let eval = evaluate_policy(&mut env, scaler, &policy, 0)?;
    let last10 = accumulated_reward(&curve);
    let final_reward = curve.last().map(|s| s.reward_cad).unwrap_or(f64::NAN);
    Ok((last10, final_reward, eval.gt_hours as f64, eval.gt_cycles as f64))
}

fn write_om_comparison_csv(path: &Path, comparison: &OmComparison) -> Result<()> {
    let mut text = String::from(
        "algorithm,om_variant,seeds_used,reward_last10_cad,reward_final_episode_cad,gt_hours,gt_cycles\n",
    );
    for c in &comparison.cells {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.algorithm.label(),
            c.variant.label(),
            c.seeds_used,
            c.reward_last10_cad,
            c.reward_final_cad,
            c.gt_hours,
            c.gt_cycles
        ));
    }
    text.push('\n');
    text.push_str("om_variant,hours_increase_pct_vs_dynamic,cycles_increase_pct_vs_dynamic\n");
    for inc in &comparison.increases {
        text.push_str(&format!(
            "{},{},{}\n",
            inc.variant.label(),
            inc.hours_pct,
            inc.cycles_pct
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_curve(episodes: usize, reward: f64) -> TrainingCurve {
        (0..episodes)
            .map(|e| EpisodeStats {
                episode: e,
                reward_cad: reward,
                gt_hours: 0,
                gt_cycles: 0,
                epsilon: None,
            })
            .collect()
    }

    #[test]
    fn constant_curve_metrics_equal_the_constant() {
        let curve = constant_curve(20, -3.5e6);
        assert_eq!(accumulated_reward(&curve), -3.5e6);
        assert_eq!(sample_efficiency(&curve), -3.5e6);
    }

    #[test]
    fn two_seed_statistics() {
        let curves = vec![constant_curve(5, 1.0), constant_curve(5, -1.0)];
        for (e, m, s) in aggregate_curves(&curves) {
            assert!(e < 5);
            assert_eq!(m, 0.0);
            assert_eq!(s, 1.0);
        }
    }

    #[test]
    fn episodes_csv_round_trips_bit_for_bit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("episodes.csv");
        let curve: TrainingCurve = (0..50)
            .map(|e| EpisodeStats {
                episode: e,
                reward_cad: -4.1234567890123e6 * (1.0 + e as f64 * 0.0137),
                gt_hours: (e * 13 % 900) as u32,
                gt_cycles: (e * 7 % 200) as u32,
                epsilon: if e % 2 == 0 { Some(0.8 - 0.013 * e as f64) } else { None },
            })
            .collect();
        write_episodes_csv(&path, &curve).unwrap();
        let back = read_episodes_csv(&path).unwrap();
        assert_eq!(curve, back);
        let first = std::fs::read(&path).unwrap();
        write_episodes_csv(&path, &back).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());
    }

    #[test]
    fn malformed_episode_csv_reports_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "episode,reward_cad,gt_hours,gt_cycles,epsilon\n0,1.0,2\n").unwrap();
        match read_episodes_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn variant_insensitive_cells_give_zero_increases() {
        let mut cells = Vec::new();
        for &a in &[Algorithm::Dqn, Algorithm::Ppo] {
            for &v in &OmVariant::ALL {
                cells.push(VariantCell {
                    algorithm: a,
                    variant: v,
                    seeds_used: 1,
                    reward_last10_cad: -4e6,
                    reward_final_cad: -4e6,
                    gt_hours: 600.0,
                    gt_cycles: 120.0,
                });
            }
        }
        let inc = variant_increases(&cells, &OmVariant::ALL);
        assert_eq!(inc.len(), 2);
        for i in inc {
            assert_eq!(i.hours_pct, 0.0);
            assert_eq!(i.cycles_pct, 0.0);
        }
    }

    #[test]
    fn metric_means_use_only_finished_seeds() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path();
        // seed 0 finished, seed 1 did not.
        let d0 = run_dir(out, Algorithm::Dqn, 0);
        std::fs::create_dir_all(&d0).unwrap();
        write_episodes_csv(&d0.join("episodes.csv"), &constant_curve(25, -2.0e6)).unwrap();
        let metrics = compute_metrics(out, &[Algorithm::Dqn], &[0, 1]).unwrap();
        assert_eq!(metrics.len(), 1);
        assert_eq!(metrics[0].seeds_used, 1);
        assert_eq!(metrics[0].seeds_total, 2);
        assert_eq!(metrics[0].accumulated_reward_cad, -2.0e6);
    }
}
