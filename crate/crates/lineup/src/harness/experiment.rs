//! Experiment orchestration: run mechanisms over seeded corpora and score
//! them against the exact optimum.

use serde::{Deserialize, Serialize};

use crate::adversary::InfoKind;
use crate::exact;
use crate::mechanisms::MechanismKind;
use crate::par;
use crate::{Error, Result};

use super::{generate_instance, run_mechanism, GeneratorSpec};

/// One sweep entry: a generator plus the mechanism/information pairing to
/// evaluate on its draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub mechanism: MechanismKind,
    pub info: InfoKind,
}

/// One scored trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub mechanism: MechanismKind,
    pub info: InfoKind,
    pub mechanism_cost: f64,
    pub optimal_cost: f64,
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
}

/// The max-ratio trial of one config, re-serialized as a regression
/// fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub config_index: usize,
    pub trial: usize,
    pub ratio: f64,
    pub instance_json: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub worst_cases: Vec<WorstCase>,
}

impl ExperimentReport {
    /// True iff every row stays within its recorded bound (tolerance
    /// 1e-9 on the ratio).
    pub fn all_bounds_hold(&self) -> bool {
        self.rows.iter().all(|r| r.ratio <= r.bound + 1e-9)
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with a versioned header comment; ratios carry 12 significant
    /// digits so reports are byte-for-byte reproducible.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# lineup-report v1\n");
        out.push_str("instance,mechanism,info,mechanism_cost,optimal_cost,ratio,bound,margin\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.instance,
                row.mechanism,
                row.info,
                sig12(row.mechanism_cost),
                sig12(row.optimal_cost),
                sig12(row.ratio),
                sig12(row.bound),
                sig12(row.margin),
            ));
        }
        out
    }
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Table of per-(mechanism, shape) distortion bounds recorded on report
/// rows: 7/5/3 for the general voter-preference, position-preference, and
/// location mechanisms, their sharper single-position and all-candidates
/// specializations, and 2, 5/3, 25/9 for the two-information rules.
pub fn table1_bound(mechanism: MechanismKind, m: usize, l: usize) -> f64 {
    match mechanism {
        MechanismKind::IterativeVeto => {
            if l == 1 || l == m {
                3.0
            } else {
                7.0
            }
        }
        MechanismKind::SerialDictatorship => {
            if l == 1 {
                3.0
            } else if l == m {
                3.0 - 1.0 / f64::powi(2.0, m as i32 - 2)
            } else {
                5.0
            }
        }
        MechanismKind::MinCpMatching => {
            if l == m {
                1.0
            } else {
                3.0
            }
        }
        MechanismKind::PairLocation => 5.0 / 3.0,
        MechanismKind::PairHybrid => 2.0,
        MechanismKind::TournamentLocation => {
            if m == 2 {
                5.0 / 3.0
            } else {
                25.0 / 9.0
            }
        }
    }
}

/// The information set a mechanism consumes.
pub fn required_info(mechanism: MechanismKind) -> InfoKind {
    match mechanism {
        MechanismKind::IterativeVeto => InfoKind::Vp,
        MechanismKind::SerialDictatorship => InfoKind::Pp,
        MechanismKind::MinCpMatching => InfoKind::Loc,
        MechanismKind::PairLocation | MechanismKind::TournamentLocation => InfoKind::LocVp,
        MechanismKind::PairHybrid => InfoKind::VpPp,
    }
}

/// Runs `trials` seeded draws for every config, scoring each mechanism
/// matching against the exact optimum. Trials run in parallel; rows are
/// ordered by (config, trial).
pub fn run_experiment(configs: &[ExperimentConfig], trials: usize) -> Result<ExperimentReport> {
    for config in configs {
        if required_info(config.mechanism) != config.info {
            return Err(Error::InvalidArgument(format!(
                "{} consumes {} information, config pairs it with {}",
                config.mechanism,
                required_info(config.mechanism),
                config.info
            )));
        }
    }
    let mut report = ExperimentReport::default();
    for (config_index, config) in configs.iter().enumerate() {
        let rows: Vec<Result<ReportRow>> = par::map_indexed(trials, |trial| {
            let spec = config.generator.for_trial(trial);
            let instance = generate_instance(&spec)?;
            let matching = run_mechanism(&instance, config.mechanism)?;
            let mechanism_cost = instance.cost_of_matching(&matching)?.total;
            let optimal = exact::optimal_matching(&instance);
            let optimal_cost = instance.cost_of_matching(&optimal)?.total;
            let ratio = crate::cost_ratio(mechanism_cost, optimal_cost);
            let bound = table1_bound(
                config.mechanism,
                instance.m_candidates(),
                instance.n_positions(),
            );
            Ok(ReportRow {
                instance: instance.label().to_string(),
                mechanism: config.mechanism,
                info: config.info,
                mechanism_cost,
                optimal_cost,
                ratio,
                bound,
                margin: bound - ratio,
            })
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        if let Some((trial, worst)) = rows
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.ratio.total_cmp(&b.ratio))
        {
            let instance = generate_instance(&config.generator.for_trial(trial))?;
            report.worst_cases.push(WorstCase {
                config_index,
                trial,
                ratio: worst.ratio,
                instance_json: instance.to_json(),
            });
        }
        report.rows.extend(rows);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Family;

    fn config(mechanism: MechanismKind, info: InfoKind, m: usize, l: usize) -> ExperimentConfig {
        ExperimentConfig {
            generator: GeneratorSpec {
                family: Family::EuclideanBox { dim: 2 },
                n_voters: 3,
                m_candidates: m,
                n_positions: l,
                seed: 99,
                set_positions: None,
            },
            mechanism,
            info,
        }
    }

    #[test]
    fn zero_trials_gives_empty_report() {
        let report = run_experiment(
            &[config(MechanismKind::IterativeVeto, InfoKind::Vp, 3, 2)],
            0,
        )
        .unwrap();
        assert!(report.rows.is_empty());
        assert!(report.all_bounds_hold());
    }

    #[test]
    fn incompatible_pairing_is_rejected() {
        let err = run_experiment(
            &[config(MechanismKind::SerialDictatorship, InfoKind::Vp, 3, 2)],
            1,
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sweep_rows_respect_bounds_and_reproduce() {
        let cfg = vec![
            config(MechanismKind::IterativeVeto, InfoKind::Vp, 4, 2),
            config(MechanismKind::SerialDictatorship, InfoKind::Pp, 4, 2),
            config(MechanismKind::MinCpMatching, InfoKind::Loc, 4, 2),
        ];
        let a = run_experiment(&cfg, 50).unwrap();
        let b = run_experiment(&cfg, 50).unwrap();
        assert!(a.all_bounds_hold(), "max ratio {}", a.max_ratio());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 150);
        assert_eq!(a.worst_cases.len(), 3);
        // Ratios always at least 1 against the exact optimum.
        assert!(a.rows.iter().all(|r| r.ratio >= 1.0));
    }

    #[test]
    fn bound_table_spot_values() {
        assert_eq!(table1_bound(MechanismKind::IterativeVeto, 5, 3), 7.0);
        assert_eq!(table1_bound(MechanismKind::IterativeVeto, 5, 1), 3.0);
        assert_eq!(table1_bound(MechanismKind::SerialDictatorship, 3, 3), 2.5);
        assert_eq!(table1_bound(MechanismKind::SerialDictatorship, 5, 3), 5.0);
        assert_eq!(table1_bound(MechanismKind::MinCpMatching, 4, 4), 1.0);
        assert_eq!(table1_bound(MechanismKind::TournamentLocation, 5, 1), 25.0 / 9.0);
    }
}
