//! `lineup` — run line-up election mechanisms, sweeps, the LP worst-case
//! adversary, and the packaged lower-bound families.
//!
//! Exit code 0 means every bound check performed by the subcommand passed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use lineup::adversary::{
    lower_bound_instance, worst_case_distortion, InfoKind, InfoSet, LowerBoundFamily,
};
use lineup::harness::{run_experiment, run_mechanism, table1_bound, ExperimentConfig};
use lineup::mechanisms::MechanismKind;
use lineup::{exact, Matching, MetricInstance};

#[derive(Parser)]
#[command(name = "lineup", about = "Line-up elections over metric spaces", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one mechanism on one instance file and report its ratio.
    Run {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// Mechanism name: iterative-veto, serial-dictatorship,
        /// min-cp-matching, pair-location, pair-hybrid,
        /// tournament-location.
        #[arg(long)]
        mechanism: String,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded experiment sweeps from a JSON config file.
    Sweep {
        /// JSON array of {generator, mechanism, info} entries.
        #[arg(long)]
        config: PathBuf,
        /// Trials per config entry.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dump each config's max-ratio instance here as JSON.
        #[arg(long)]
        fixture_dir: Option<PathBuf>,
    },
    /// Exact worst-case distortion of a matching under an information set.
    Worstcase {
        /// One of: vp, pp, vp+pp, loc, loc+vp.
        #[arg(long)]
        info: String,
        #[arg(long)]
        instance: PathBuf,
        /// Matching as "p0:c2,p1:c0".
        #[arg(long)]
        matching: String,
        /// Write the witness metric here (instance JSON format).
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Instantiate a packaged lower-bound family and report its ratio.
    Lowerbound {
        /// One of: vp-fig2, pp-twins, loc-twins, hybrid-fig5, loc-vp-fig6.
        #[arg(long)]
        name: String,
        #[arg(long)]
        eps: f64,
        /// Write the instance JSON here.
        #[arg(long)]
        emit_instance: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the metric axioms of an instance file.
    Validate { file: PathBuf },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(all_checks_passed) => {
            if all_checks_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { instance, mechanism, out } => {
            let inst = load_instance(&instance)?;
            let mechanism: MechanismKind = mechanism.parse()?;
            let matching = run_mechanism(&inst, mechanism)?;
            let cost = inst.cost_of_matching(&matching)?.total;
            let optimal = exact::optimal_matching(&inst);
            let optimal_cost = inst.cost_of_matching(&optimal)?.total;
            let ratio = lineup::cost_ratio(cost, optimal_cost);
            let bound = table1_bound(mechanism, inst.m_candidates(), inst.n_positions());
            let mut csv = String::from("# lineup-report v1\n");
            csv.push_str("instance,mechanism,matching,mechanism_cost,optimal_cost,ratio,bound,margin\n");
            csv.push_str(&format!(
                "{},{},{},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
                inst.label(),
                mechanism,
                format_matching(&matching),
                cost,
                optimal_cost,
                ratio,
                bound,
                bound - ratio,
            ));
            emit(out.as_deref(), &csv)?;
            Ok(ratio <= bound + 1e-9)
        }
        Command::Sweep { config, trials, out, fixture_dir } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let configs: Vec<ExperimentConfig> =
                serde_json::from_str(&text).context("parsing sweep config")?;
            let report = run_experiment(&configs, trials)?;
            emit(out.as_deref(), &report.to_csv())?;
            if let Some(dir) = fixture_dir {
                fs::create_dir_all(&dir)?;
                for worst in &report.worst_cases {
                    let path = dir.join(format!(
                        "fixture_{:03}_trial{:05}.json",
                        worst.config_index, worst.trial
                    ));
                    fs::write(&path, &worst.instance_json)?;
                }
            }
            Ok(report.all_bounds_hold())
        }
        Command::Worstcase { info, instance, matching, emit_witness } => {
            let inst = load_instance(&instance)?;
            let kind: InfoKind = info.parse()?;
            let matching = parse_matching(&matching, &inst)?;
            let info_set = InfoSet::from_instance(&inst, kind);
            let result = worst_case_distortion(&info_set, &matching)?;
            println!(
                "info={kind} matching={} worst_case={:.9} binding_alternative={}",
                format_matching(&matching),
                result.value,
                format_matching(&result.binding_alternative),
            );
            if let Some(path) = emit_witness {
                match &result.witness_metric {
                    Some(witness) => fs::write(&path, witness.to_json())?,
                    None => bail!("no witness metric attained (supremum is a limit)"),
                }
            }
            Ok(true)
        }
        Command::Lowerbound { name, eps, emit_instance, out } => {
            let family: LowerBoundFamily = name.parse()?;
            let built = lower_bound_instance(family, eps)?;
            let ratio = exact::empirical_distortion(&built.instance, &built.forced_choice)?;
            let mut csv = String::from("# lineup-report v1\n");
            csv.push_str("family,eps,forced_choice,ratio,limit,gap\n");
            csv.push_str(&format!(
                "{},{:e},{},{:.11e},{:.11e},{:.11e}\n",
                family,
                eps,
                format_matching(&built.forced_choice),
                ratio,
                built.limit,
                built.limit - ratio,
            ));
            emit(out.as_deref(), &csv)?;
            if let Some(path) = emit_instance {
                fs::write(&path, built.instance.to_json())?;
            }
            // The forced ratio approaches the limit from one side or the
            // other depending on the family; either way it must stay close.
            Ok((ratio - built.limit).abs() <= 1.0)
        }
        Command::Validate { file } => {
            let inst = load_instance(&file)?;
            let report = inst.validate_metric();
            for violation in &report.violations {
                println!("violation: {violation:?}");
            }
            for note in &report.notes {
                println!("note: {note}");
            }
            println!(
                "{}: {} violations, {} notes",
                inst.label(),
                report.violations.len(),
                report.notes.len()
            );
            Ok(report.accepted())
        }
    }
}

fn load_instance(path: &std::path::Path) -> Result<MetricInstance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(MetricInstance::from_json(&text)?)
}

/// Parses "p0:c2,p1:c0" into a matching; every position must appear once.
fn parse_matching(text: &str, instance: &MetricInstance) -> Result<Matching> {
    let l = instance.n_positions();
    let mut assignment = vec![usize::MAX; l];
    for part in text.split(',') {
        let (p, c) = part
            .trim()
            .split_once(':')
            .with_context(|| format!("bad matching entry '{part}', want pN:cM"))?;
        let p: usize = p
            .strip_prefix('p')
            .with_context(|| format!("position '{p}' must look like p0"))?
            .parse()?;
        let c: usize = c
            .strip_prefix('c')
            .with_context(|| format!("candidate '{c}' must look like c0"))?
            .parse()?;
        if p >= l {
            bail!("position p{p} out of range (l = {l})");
        }
        if assignment[p] != usize::MAX {
            bail!("position p{p} assigned twice");
        }
        assignment[p] = c;
    }
    if assignment.iter().any(|&c| c == usize::MAX) {
        bail!("matching must cover all {l} positions");
    }
    Ok(Matching::new(assignment, instance.m_candidates())?)
}

fn format_matching(matching: &Matching) -> String {
    matching
        .assignment()
        .iter()
        .enumerate()
        .map(|(p, c)| format!("p{p}:c{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
