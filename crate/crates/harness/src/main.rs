use std::fs;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use onuw_agents::GatewayEmbedder;
use onuw_core::{replay, GameLog, OutcomeRules, PlayerId};
use onuw_equilibrium::{BeliefTriple, StrategyProfile3P};
use onuw_harness::{
    estimate_nash_conv, extract_transitions, interactive_seat, run_experiment, run_tournament, summarize,
    tactic_statistics, verify_equilibria, ExperimentConfig, Resources, Setting, TournamentConfig, TreeVariant,
    FOCAL_SEAT,
};
use onuw_llm::{Gateway, ModelConfig};
use onuw_policy::{train, EncoderMode, RewardMode, TextEmbedder, TrainerConfig, TransitionsFile};

/// Exit code when a check ran and failed.
const EXIT_VERIFY: u8 = 1;
/// Exit code for runtime and configuration errors.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "onuw", version, about = "One Night Ultimate Werewolf experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play the matches of an experiment config and report win rates.
    Play {
        /// Experiment TOML; without it every seat is scripted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "five_standard")]
        setting: String,
        #[arg(long)]
        repeats: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for game logs (overrides the config).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also report win rate and votes of the seat-3 player.
        #[arg(long)]
        focal: bool,
    },
    /// Village-lineup by Werewolf-lineup win-rate matrix.
    Tournament {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Train a tactic Q-function on a transitions file.
    Train {
        #[arg(long)]
        transitions: PathBuf,
        /// Trainer TOML; the state width is taken from the transitions file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Per-epoch mean loss as CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Turn game logs into offline-RL transitions.
    Extract {
        /// Log files or directories of `.json` logs.
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Reward::PerStep)]
        reward: Reward,
        #[arg(long, default_value_t = 3)]
        rounds: u32,
        /// Use the embedding service instead of structural features.
        #[arg(long)]
        remote: bool,
        #[arg(long)]
        model_config: Option<PathBuf>,
        /// Recorded fixtures to replay embeddings from.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Tactic percentages per initial role.
    Stats {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Certify the three-player equilibria.
    VerifyEquilibria {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Alpha and gamma steps of the discussion-game grid.
        #[arg(long, default_value_t = 10)]
        alpha_steps: usize,
        #[arg(long, default_value_t = 5)]
        gamma_steps: usize,
    },
    /// Estimate NashConv from three-player logs, or from games of a given profile.
    Nashconv {
        logs: Vec<PathBuf>,
        /// `s,p,q1,q2`: generate games with every seat playing this profile.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long, default_value_t = 500)]
        games: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `alpha,beta,gamma`: score on the discussion tree with this belief.
        #[arg(long)]
        discussion: Option<String>,
        #[arg(long, value_enum, default_value_t = Rules::Standard)]
        rules: Rules,
    },
    /// Re-run a log through the rules engine and check it.
    Replay { log: PathBuf },
    /// Play one match yourself.
    Human {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "five_standard")]
        setting: String,
        /// Your seat, 1-based.
        #[arg(long, default_value_t = 1)]
        seat: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Reward {
    PerStep,
    TerminalOnly,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum Rules {
    Standard,
    NoDeathDraw,
}

enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn experiment(config: Option<&Path>, setting: &str) -> Result<ExperimentConfig> {
    Ok(match config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::scripted(setting.parse::<Setting>()?),
    })
}

fn floats<const N: usize>(s: &str) -> Result<[f64; N]> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| anyhow::anyhow!("expected {N} comma-separated numbers in `{s}`"))
}

/// Log files named directly, plus every `.json` file (sorted) in named directories.
fn read_logs(paths: &[PathBuf]) -> Result<Vec<GameLog>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    files.iter().map(|f| GameLog::read(f).with_context(|| f.display().to_string())).collect()
}

fn write_logs(dir: &Path, logs: &[GameLog]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (i, l) in logs.iter().enumerate() {
        l.write(dir.join(format!("game-{i:04}.json")))?;
    }
    info!("wrote {} logs to {}", logs.len(), dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Play { config, setting, repeats, seed, out_dir, focal } => {
            let mut cfg = experiment(config.as_deref(), &setting)?;
            if let Some(r) = repeats {
                cfg.repeats = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let res = Resources::for_experiment(&cfg)?;
            let logs = run_experiment(&cfg, &res)?;
            res.finish()?;
            if let Some(dir) = out_dir.or(cfg.output_dir.clone()) {
                write_logs(&dir, &logs)?;
            }
            let m = summarize(&logs, focal.then_some(FOCAL_SEAT));
            println!("{}", serde_json::to_string_pretty(&m)?);
        }
        Command::Tournament { config, out_dir } => {
            let cfg = TournamentConfig::from_toml(&fs::read_to_string(&config)?)?;
            let res = cfg.resources()?;
            let (result, logs) = run_tournament(&cfg, &res)?;
            res.finish()?;
            result.write_matrix_csv(io::stdout())?;
            if let Some(dir) = out_dir.or(cfg.output_dir.clone()) {
                fs::create_dir_all(&dir)?;
                result.write_matrix_csv(fs::File::create(dir.join("matrix.csv"))?)?;
                result.write_counts_csv(fs::File::create(dir.join("cells.csv"))?)?;
                write_logs(&dir.join("logs"), &logs)?;
            }
        }
        Command::Train { transitions, config, out, curve } => {
            let data = TransitionsFile::read(BufReader::new(fs::File::open(&transitions)?))?;
            let mut tc = match config {
                Some(p) => toml::from_str::<TrainerConfig>(&fs::read_to_string(p)?)?,
                None => TrainerConfig::default(),
            };
            tc.state_dim = data.header.state_dim;
            info!("training on {} transitions, {} features", data.rows.len(), tc.state_dim);
            let (q, losses) = train(&data.rows, &tc)?;
            q.save(&out)?;
            if let Some(path) = curve {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["epoch", "loss"])?;
                for (i, l) in losses.iter().enumerate() {
                    w.write_record([(i + 1).to_string(), l.to_string()])?;
                }
                w.flush()?;
            }
            println!("final loss {}", losses.last().copied().unwrap_or(f64::NAN));
        }
        Command::Extract { logs, out, reward, rounds, remote, model_config, fixtures } => {
            let logs = read_logs(&logs)?;
            let reward = match reward {
                Reward::PerStep => RewardMode::PerStep,
                Reward::TerminalOnly => RewardMode::TerminalOnly,
            };
            let mut embedder: Option<GatewayEmbedder> = None;
            let encoder = if remote {
                let mc = match model_config {
                    Some(p) => ModelConfig::from_toml(&fs::read_to_string(p)?)?,
                    None => ModelConfig::default(),
                };
                let Some(dim) = mc.embedding_dim else {
                    bail!("remote features need `embedding_dim` in the model config");
                };
                let model = mc.embedding_model.clone();
                let g = match fixtures {
                    Some(f) => Gateway::replay(mc, &f)?,
                    None => Gateway::http(mc)?,
                };
                embedder = Some(GatewayEmbedder(Arc::new(g)));
                EncoderMode::Remote { model, dim }
            } else {
                EncoderMode::Structural { rounds }
            };
            let ex = extract_transitions(&logs, reward, &encoder, embedder.as_ref().map(|e| e as &dyn TextEmbedder))?;
            ex.to_file().write(io::BufWriter::new(fs::File::create(&out)?))?;
            println!(
                "{} transitions from {} logs ({} speeches, {} skipped)",
                ex.row_count(),
                logs.len(),
                ex.speeches,
                ex.skipped
            );
        }
        Command::Stats { logs, csv } => {
            let table = tactic_statistics(&read_logs(&logs)?);
            if csv {
                table.write_csv(io::stdout())?;
            } else {
                print!("{}", table.render_text());
            }
        }
        Command::VerifyEquilibria { format, alpha_steps, gamma_steps } => {
            let p_values: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            let report = verify_equilibria(&p_values, alpha_steps, gamma_steps)?;
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Csv => report.write_csv(io::stdout())?,
            }
            if !report.passed() {
                return Ok(Status::Failed);
            }
        }
        Command::Nashconv { logs, profile, games, seed, discussion, rules } => {
            let mut all = read_logs(&logs)?;
            if let Some(p) = profile {
                let [s, p, q1, q2] = floats::<4>(&p)?;
                let mut cfg = ExperimentConfig::profile(StrategyProfile3P::new(s, p, q1, q2));
                cfg.repeats = games;
                cfg.seed = seed;
                all.extend(run_experiment(&cfg, &Resources::offline())?);
            }
            if all.is_empty() {
                bail!("no logs given and no --profile to generate them");
            }
            let variant = match discussion {
                Some(d) => {
                    let [a, b, g] = floats::<3>(&d)?;
                    TreeVariant::WithDiscussion(BeliefTriple::new(a, b, g)?)
                }
                None => TreeVariant::NoDiscussion,
            };
            let rules = match rules {
                Rules::Standard => OutcomeRules::Standard,
                Rules::NoDeathDraw => OutcomeRules::NoDeathDraw,
            };
            let est = estimate_nash_conv(&all, variant, rules)?;
            println!("NashConv estimate {:.6} from {} logs ({} skipped)", est.value, est.logs_used, est.logs_skipped);
            println!("per-player gains {:?}", est.gains);
            for s in &est.infosets {
                println!("  {:<12} counts {:?} -> {:?}", s.label, s.counts, s.probs);
            }
            if !est.unvisited.is_empty() {
                println!("unvisited (uniform): {}", est.unvisited.join(", "));
            }
            if est.low_confidence {
                println!("low confidence: fewer than {} usable logs", onuw_harness::MIN_LOGS);
            }
        }
        Command::Replay { log } => {
            let l = GameLog::read(&log)?;
            match replay(&l) {
                Ok(state) => {
                    println!("replayed {} events, phase {}", l.events.len(), state.phase);
                    if let Some(o) = state.outcome {
                        let deaths: Vec<String> = state.deaths().iter().map(|p| p.to_string()).collect();
                        println!("outcome {o:?}, deaths [{}]", deaths.join(", "));
                    }
                }
                Err(e) => {
                    println!("replay failed: {e}");
                    return Ok(Status::Failed);
                }
            }
        }
        Command::Human { config, setting, seat, seed, out } => {
            let cfg = experiment(config.as_deref(), &setting)?;
            if seat == 0 {
                bail!("seats are numbered from 1");
            }
            let res = Resources::for_experiment(&cfg)?;
            let input = Box::new(BufReader::new(io::stdin()));
            let log = interactive_seat(&cfg, &res, PlayerId(seat - 1), seed, input, Box::new(io::stdout()))?;
            res.finish()?;
            match &log.result {
                Some(r) => {
                    println!("final roles: {:?}", r.final_roles);
                    println!("outcome {:?}, your utility {}", r.outcome, r.utilities[(seat - 1) as usize]);
                }
                None => println!("match ended early: {}", log.flags.join("; ")),
            }
            if let Some(p) = out {
                log.write(p)?;
            }
        }
    }
    Ok(Status::Ok)
}
