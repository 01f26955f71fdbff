//! Command implementations and the exit-code contract.
//!
//! Errors fall into three stable classes: `Config` (exit 2) for invalid
//! invocations, bad parameters, and missing referenced files; `Data`
//! (exit 3) for files that exist but cannot be used; `Precondition`
//! (exit 4) for well-formed requests the mathematics rejects, such as
//! realizing a disconnected point set as one sequence.

use serde::Serialize;
use std::fmt;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use statreg::{
    average_trajectory, bayes, estimate_limit_set, iid_generate, io, minimax, net_realize,
    net_trajectory, prefix_trajectory, regularity_criterion, s_equivalent, sequence_realize,
    verify_proposition3, Alphabet, CriterionReport, EquivalenceVerdict, Error, Measure,
    RealizationSchedule, TestFunction, Trajectory,
};

use crate::config::{
    self, DecideConfig, EquivConfig, EstimateConfig, GenerateConfig, GenerateMode, StreamKind,
    VerifyConfig,
};
use crate::CommonArgs;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
    Precondition(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Data(m) => write!(f, "data: {m}"),
            CliError::Precondition(m) => write!(f, "precondition: {m}"),
        }
    }
}

/// Maps a library error raised while handling user-supplied parameters.
fn config_err(e: Error) -> CliError {
    classify(e, |m| CliError::Config(m))
}

/// Maps a library error raised while reading or processing input files.
fn data_err(e: Error) -> CliError {
    classify(e, |m| CliError::Data(m))
}

fn classify(e: Error, default: fn(String) -> CliError) -> CliError {
    match &e {
        // Mathematical rejections keep their own exit code regardless of
        // where they surface.
        Error::DisconnectedTarget
        | Error::TooFewPoints { .. }
        | Error::AlphabetTooLarge { .. }
        | Error::IdenticalRegularities => CliError::Precondition(e.to_string()),
        // A missing referenced file violates the config contract.
        Error::Io(io) if io.kind() == ErrorKind::NotFound => {
            CliError::Config(format!("referenced file not found: {e}"))
        }
        _ => default(e.to_string()),
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Config(format!("{what} is required for this mode")))
}

/// With `--out DIR`, outputs keep their file names but land in DIR.
fn redirect(path: &Path, out: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    match out {
        Some(dir) => {
            let name = path.file_name().ok_or_else(|| {
                CliError::Config(format!("output path {} has no file name", path.display()))
            })?;
            Ok(dir.join(name))
        }
        None => Ok(path.to_path_buf()),
    }
}

fn build_alphabet(labels: Vec<String>) -> Result<Alphabet, CliError> {
    Alphabet::new(labels).map_err(config_err)
}

pub fn generate(args: &CommonArgs) -> Result<(), CliError> {
    let cfg: GenerateConfig = config::load(&args.config)?;
    let out = redirect(&cfg.out, &args.out)?;
    match cfg.mode {
        GenerateMode::Net => {
            let reg_path = require(cfg.regularity_file, "regularity_file")?;
            let sched_cfg = require(cfg.schedule, "schedule")?;
            let target = io::read_regularity(&reg_path).map_err(data_err)?;
            let schedule = RealizationSchedule::new(sched_cfg.rounds, sched_cfg.eps0, sched_cfg.d0)
                .and_then(|s| s.with_sweeps(sched_cfg.sweeps))
                .map_err(config_err)?;
            let net = net_realize(&target, &schedule).map_err(data_err)?;
            io::write_net(&out, &net).map_err(data_err)?;
            println!("wrote net of {} items to {}", net.len(), out.display());
        }
        GenerateMode::Sequence => {
            let reg_path = require(cfg.regularity_file, "regularity_file")?;
            let n = require(cfg.n, "n")?;
            let epsilon = require(cfg.epsilon, "epsilon")?;
            let target = io::read_regularity(&reg_path).map_err(data_err)?;
            let seq =
                sequence_realize(&target, n, epsilon, cfg.as_path).map_err(data_err)?;
            io::write_sequence(&out, &seq).map_err(data_err)?;
            println!("wrote sequence of {} symbols to {}", seq.len(), out.display());
        }
        GenerateMode::Iid => {
            let labels = require(cfg.alphabet, "alphabet")?;
            let weights = require(cfg.mu, "mu")?;
            let n = require(cfg.n, "n")?;
            let seed = require(args.seed.or(cfg.seed), "seed")?;
            let alphabet = build_alphabet(labels)?;
            let mu = Measure::new(&alphabet, &weights).map_err(config_err)?;
            let seq = iid_generate(&mu, n, seed).map_err(config_err)?;
            io::write_sequence(&out, &seq).map_err(data_err)?;
            println!("wrote sequence of {} symbols to {}", seq.len(), out.display());
        }
    }
    Ok(())
}

fn load_trajectory(cfg: &EstimateConfig) -> Result<Trajectory, CliError> {
    match cfg.kind {
        StreamKind::Net => {
            let labels = require(cfg.alphabet.clone(), "alphabet")?;
            let alphabet = build_alphabet(labels)?;
            let net = io::read_net(&cfg.stream, &alphabet).map_err(data_err)?;
            Ok(net_trajectory(&net))
        }
        StreamKind::Sequence => {
            let seq = io::read_sequence(&cfg.stream).map_err(data_err)?;
            if let Some(labels) = &cfg.alphabet {
                if seq.alphabet().symbols() != labels.as_slice() {
                    return Err(CliError::Data(format!(
                        "stream alphabet {:?} does not match configured {:?}",
                        seq.alphabet().symbols(),
                        labels
                    )));
                }
            }
            prefix_trajectory(&seq, cfg.stride).map_err(config_err)
        }
    }
}

pub fn estimate(args: &CommonArgs) -> Result<(), CliError> {
    let cfg: EstimateConfig = config::load(&args.config)?;
    let traj = load_trajectory(&cfg)?;
    let est = estimate_limit_set(&traj, cfg.epsilon, cfg.windows, cfg.tail_fraction)
        .map_err(config_err)?;
    let est_out = redirect(&cfg.estimate_out, &args.out)?;
    io::write_estimate(&est_out, &est).map_err(data_err)?;
    println!(
        "estimated {} centers (epsilon {}, windows {}) -> {}",
        est.len(),
        est.epsilon,
        est.windows,
        est_out.display()
    );
    if let Some(traj_path) = &cfg.trajectory_out {
        let traj_out = redirect(traj_path, &args.out)?;
        io::write_trajectory_csv(&traj_out, &traj).map_err(data_err)?;
        println!("trajectory of {} points -> {}", traj.len(), traj_out.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessDoc {
    best_row: usize,
    separation: f64,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct VerdictDoc {
    equivalent: bool,
    hausdorff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    images: Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)>,
}

pub fn equiv(args: &CommonArgs) -> Result<(), CliError> {
    let cfg: EquivConfig = config::load(&args.config)?;
    let alphabet = build_alphabet(cfg.alphabet)?;
    let net_a = io::read_net(&cfg.stream_a, &alphabet).map_err(data_err)?;
    let net_b = io::read_net(&cfg.stream_b, &alphabet).map_err(data_err)?;
    let verdict = s_equivalent(&net_a, &net_b, cfg.epsilon, cfg.windows).map_err(data_err)?;
    let doc = match &verdict {
        EquivalenceVerdict::Equivalent { hausdorff } => {
            println!("equivalent (hausdorff {hausdorff})");
            VerdictDoc {
                equivalent: true,
                hausdorff: *hausdorff,
                witness: None,
                images: None,
            }
        }
        EquivalenceVerdict::Distinct {
            hausdorff,
            witness,
            images,
        } => {
            println!(
                "distinct (hausdorff {hausdorff}, separation {} at row {})",
                witness.separation, witness.best_row
            );
            VerdictDoc {
                equivalent: false,
                hausdorff: *hausdorff,
                witness: Some(WitnessDoc {
                    best_row: witness.best_row,
                    separation: witness.separation,
                    rows: witness.function.rows().to_vec(),
                }),
                images: Some(images.clone()),
            }
        }
    };
    let out = redirect(&cfg.out, &args.out)?;
    let mut bytes = serde_json::to_vec_pretty(&doc)
        .map_err(|e| CliError::Data(e.to_string()))?;
    bytes.push(b'\n');
    io::atomic_write(&out, &bytes).map_err(data_err)?;
    Ok(())
}

fn print_report_table(report: &CriterionReport) {
    println!("criterion: {}", report.kind.as_str());
    let width = report
        .decision_labels
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(8)
        .max("decision".len());
    println!("{:<width$}  value", "decision");
    for (u, label) in report.decision_labels.iter().enumerate() {
        let marker = if report.argmin.contains(&u) { "  <- best" } else { "" };
        println!("{label:<width$}  {}{marker}", report.values[u]);
    }
}

pub fn decide(args: &CommonArgs) -> Result<(), CliError> {
    let cfg: DecideConfig = config::load(&args.config)?;
    let loss = io::read_loss_csv(&cfg.loss_file).map_err(data_err)?;
    let report = match (&cfg.mu, &cfg.regularity_file) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "mu and regularity_file are mutually exclusive".into(),
            ))
        }
        (Some(weights), None) => {
            let alphabet = build_alphabet(loss.theta_labels().to_vec())?;
            let mu = Measure::new(&alphabet, weights).map_err(config_err)?;
            bayes(&loss, &mu).map_err(data_err)?
        }
        (None, Some(reg_path)) => {
            let reg = io::read_regularity(reg_path).map_err(data_err)?;
            regularity_criterion(&loss, &reg).map_err(data_err)?
        }
        (None, None) => minimax(&loss),
    };
    let out = redirect(&cfg.out, &args.out)?;
    io::write_criterion_report(&out, &report).map_err(data_err)?;
    print_report_table(&report);
    Ok(())
}

pub fn verify(args: &CommonArgs) -> Result<(), CliError> {
    let cfg: VerifyConfig = config::load(&args.config)?;
    let alphabet = build_alphabet(cfg.alphabet)?;
    let net = io::read_net(&cfg.stream, &alphabet).map_err(data_err)?;
    let loss = io::read_loss_csv(&cfg.loss_file).map_err(data_err)?;
    let report = verify_proposition3(
        &net,
        &loss,
        &cfg.decision,
        cfg.r1,
        cfg.r2,
        cfg.tail_fraction,
        cfg.windows,
    )
    .map_err(data_err)?;
    let out = redirect(&cfg.report_out, &args.out)?;
    io::write_proposition3_report(&out, &report).map_err(data_err)?;
    println!(
        "decision {}: limsup {}, r1 {} cofinally exceeded: {}, r2 {} eventually respected: {}",
        report.decision,
        report.empirical_limsup,
        report.r1,
        report.r1_exceeded_cofinally,
        report.r2,
        report.r2_respected_eventually
    );
    if let Some(trace_path) = &cfg.trace_out {
        let u = loss.decision_index(&cfg.decision).map_err(data_err)?;
        let gamma =
            TestFunction::single_row(net.alphabet(), loss.column(u)).map_err(data_err)?;
        let traj = average_trajectory(&net, &gamma).map_err(data_err)?;
        let trace_out = redirect(trace_path, &args.out)?;
        io::write_trajectory_csv(&trace_out, &traj).map_err(data_err)?;
        println!("trace of {} points -> {}", traj.len(), trace_out.display());
    }
    Ok(())
}
