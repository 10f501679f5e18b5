//! Command-line front end: data generation, training, evaluation,
//! baselines, the exact oracle, the O&M comparison, and report printing.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use gtdispatch::agents::{search_rules, Algorithm};
use gtdispatch::config::ExperimentConfig;
use gtdispatch::cost::OmVariant;
use gtdispatch::env::{DispatchEnv, ObsScaler, DISCRETE_LEVELS};
use gtdispatch::harness::{
    compare_om_variants, compute_metrics, load_policy, run_experiment, MetricsReport,
};
use gtdispatch::oracle::dp_optimal;
use gtdispatch::scenario::{write_scenario_csv, ScenarioTable};
use gtdispatch::{agents, Result};

#[derive(Parser)]
#[command(name = "gtdispatch", about = "Economic gas turbine dispatch experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the experiment-driving subcommands. Each one overrides
/// the corresponding config value.
#[derive(Args, Clone)]
struct Overrides {
    /// Experiment config file (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use exactly this training seed instead of the configured seed list.
    #[arg(long)]
    seed: Option<u64>,
    /// Training episodes per run.
    #[arg(long)]
    episodes: Option<usize>,
    /// Output directory for run artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// O&M accounting variant: dynamic, hourly_only, or no_variable.
    #[arg(long)]
    om_variant: Option<OmVariant>,
}

impl Overrides {
    fn apply(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.experiment.seeds = vec![seed];
        }
        if let Some(episodes) = self.episodes {
            cfg.experiment.episodes = episodes;
            cfg.experiment.compare_episodes = episodes;
        }
        if let Some(out) = &self.out {
            cfg.experiment.out_dir = out.clone();
        }
        if let Some(variant) = self.om_variant {
            cfg.env.om_variant = variant;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic scenario year as price/weather/demand CSVs.
    GenerateData {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one algorithm (or all) across the configured seeds.
    Train {
        /// reinforce_discrete, reinforce_continuous, dqn, ppo, cem, rule,
        /// or "all".
        #[arg(long, default_value = "all")]
        algo: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Evaluate a saved policy greedily over the configured scenario.
    Evaluate {
        /// Run directory holding policy.ckpt and policy_kind.json.
        #[arg(long)]
        run_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Exhaustive rule search over price/demand thresholds.
    Baseline {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Exact dynamic-programming dispatch over the scenario.
    Oracle {
        /// Where to write the optimal hourly schedule CSV.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Retrain DQN and PPO under each O&M variant and compare usage.
    CompareOm {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Recompute and print the metric summary from recorded run CSVs.
    Report {
        /// Run output directory (the experiment's out_dir).
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(complete) => {
            if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Returns Ok(true) when every requested run completed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::GenerateData { seed, out } => {
            let table = ScenarioTable::synthetic_year(seed);
            write_scenario_csv(&table, &out)?;
            println!(
                "wrote {} hours (seed {seed}) to {}",
                table.len(),
                out.display()
            );
            Ok(true)
        }
        Command::Train { algo, overrides } => {
            let cfg = overrides.apply()?;
            let algorithms: Vec<Algorithm> = if algo == "all" {
                Algorithm::ALL.to_vec()
            } else {
                vec![algo.parse()?]
            };
            let report = run_experiment(&cfg, &algorithms)?;
            print_report(&report);
            Ok(report.complete())
        }
        Command::Evaluate { run_dir, overrides } => {
            let cfg = overrides.apply()?;
            let scenario = Arc::new(cfg.scenario.load()?);
            let scaler = ObsScaler::from_scenario(&scenario);
            let policy = load_policy(&run_dir)?;
            let mut env_cfg = cfg.env.clone();
            env_cfg.action_spec = match policy.kind {
                agents::PolicyKind::Discrete => gtdispatch::env::ActionSpec::Discrete,
                agents::PolicyKind::Continuous | agents::PolicyKind::Squashed => {
                    gtdispatch::env::ActionSpec::continuous_default()
                }
            };
            let mut env = DispatchEnv::new(scenario, env_cfg)?;
            let stats = agents::evaluate_policy(&mut env, &scaler, &policy, 0)?;
            println!(
                "reward {:.2} C$ ({:.4} M C$), gt_hours {}, gt_cycles {}",
                stats.reward_cad,
                stats.reward_cad / 1e6,
                stats.gt_hours,
                stats.gt_cycles
            );
            Ok(true)
        }
        Command::Baseline { overrides } => {
            let cfg = overrides.apply()?;
            let scenario = Arc::new(cfg.scenario.load()?);
            let mut env_cfg = cfg.env.clone();
            env_cfg.action_spec = gtdispatch::env::ActionSpec::Discrete;
            let mut env = DispatchEnv::new(scenario, env_cfg)?;
            let (rule, reward) = search_rules(
                &mut env,
                &cfg.agents.rule.price_grid,
                &cfg.agents.rule.demand_grid,
            )?;
            println!("best rule: {rule}");
            println!("reward {reward:.2} C$ ({:.4} M C$)", reward / 1e6);
            Ok(true)
        }
        Command::Oracle {
            schedule_out,
            overrides,
        } => {
            let cfg = overrides.apply()?;
            let scenario = cfg.scenario.load()?;
            let solution = dp_optimal(&scenario, &DISCRETE_LEVELS, &cfg.env)?;
            println!(
                "optimal cost {:.2} C$ ({:.4} M C$) over {} hours",
                solution.cost,
                solution.cost / 1e6,
                scenario.len()
            );
            if let Some(path) = schedule_out {
                let mut text = String::from("hour,load_fraction\n");
                for (h, l) in solution.schedule.iter().enumerate() {
                    text.push_str(&format!("{h},{l}\n"));
                }
                std::fs::write(&path, text)?;
                println!("schedule written to {}", path.display());
            }
            Ok(true)
        }
        Command::CompareOm { overrides } => {
            let cfg = overrides.apply()?;
            let comparison = compare_om_variants(&cfg)?;
            println!("algorithm  variant      last10(MC$)  final(MC$)   hours   cycles  seeds");
            for c in &comparison.cells {
                println!(
                    "{:<10} {:<12} {:>11.4} {:>11.4} {:>7.1} {:>8.1} {:>6}",
                    c.algorithm.label(),
                    c.variant.label(),
                    c.reward_last10_cad / 1e6,
                    c.reward_final_cad / 1e6,
                    c.gt_hours,
                    c.gt_cycles,
                    c.seeds_used
                );
            }
            println!();
            for inc in &comparison.increases {
                println!(
                    "{} vs dynamic: hours {:+.1}%, cycles {:+.1}%",
                    inc.variant.label(),
                    inc.hours_pct,
                    inc.cycles_pct
                );
            }
            if !comparison.failures.is_empty() {
                println!("{} run(s) failed; cells use finished seeds only", comparison.failures.len());
            }
            Ok(comparison.failures.is_empty())
        }
        Command::Report { out, overrides } => {
            let cfg = overrides.apply()?;
            let metrics = compute_metrics(&out, &Algorithm::ALL, &cfg.experiment.seeds)?;
            let report = MetricsReport {
                metrics,
                failures: Vec::new(),
            };
            print_report(&report);
            Ok(true)
        }
    }
}

fn print_report(report: &MetricsReport) {
    println!("algorithm             acc. reward(MC$)  sample eff.(MC$)  seeds");
    for m in &report.metrics {
        println!(
            "{:<21} {:>16.4} {:>17.4}  {}/{}",
            m.algorithm.label(),
            m.accumulated_reward_cad / 1e6,
            m.sample_efficiency_cad / 1e6,
            m.seeds_used,
            m.seeds_total
        );
    }
    for f in &report.failures {
        let variant = f
            .variant
            .map(|v| format!(" {}", v.label()))
            .unwrap_or_default();
        println!(
            "failed: {}{} seed {}: {}",
            f.algorithm.label(),
            variant,
            f.seed,
            f.message
        );
    }
    if !report.complete() {
        println!("aggregation incomplete: failed seeds excluded from the means");
    }
}
