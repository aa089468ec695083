//! Seeded instance generation and experiment sweeps.
//!
//! Generators are deterministic in their seed; sweeps derive trial `i`'s
//! seed as `seed ^ splitmix64(i)` so trials can run in parallel and stay
//! reorderable. Reports are byte-for-byte reproducible from the config.

mod experiment;

pub use experiment::{
    run_experiment, table1_bound, ExperimentConfig, ExperimentReport, ReportRow, WorstCase,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{lower_bound_instance, LowerBoundFamily};
use crate::metric::{CpDistances, Matching, MetricInstance, PositionSpec};
use crate::ordinal::{position_profile, tally_pair, voter_profile};
use crate::mechanisms::{
    iterative_election, min_position_cost_matching, serial_dictatorship,
    tournament_location_rule, two_candidate_hybrid_rule, two_candidate_location_rule,
    MechanismKind, PluralityVeto,
};
use crate::{Error, Result};

/// Instance families the generator can draw from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Uniform points in the unit box of the given dimension, L2 metric.
    EuclideanBox { dim: usize },
    /// Uniform points on a unit segment.
    Line,
    /// Shortest-path completion of a complete graph with random positive
    /// edge weights; the completion forces the triangle inequality.
    RandomMetric,
    /// One of the packaged lower-bound constructions.
    PaperFixture { name: LowerBoundFamily, eps: f64 },
}

impl Family {
    fn slug(&self) -> String {
        match self {
            Family::EuclideanBox { dim } => format!("euclidean{dim}d"),
            Family::Line => "line".to_string(),
            Family::RandomMetric => "randmetric".to_string(),
            Family::PaperFixture { name, .. } => format!("fixture-{}", name.name()),
        }
    }
}

/// Fully determines one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n_voters: usize,
    pub m_candidates: usize,
    pub n_positions: usize,
    pub seed: u64,
    /// When set, every position becomes a set of between `min` and `max`
    /// fresh site points instead of a single point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_positions: Option<(usize, usize)>,
}

impl GeneratorSpec {
    /// The spec for trial `i` of a sweep over this spec.
    pub fn for_trial(&self, trial: usize) -> GeneratorSpec {
        let mut spec = self.clone();
        spec.seed ^= splitmix64(trial as u64);
        spec
    }
}

/// SplitMix64 hash, used to derive per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws the instance determined by `spec`; the output always passes
/// `validate_metric`.
pub fn generate_instance(spec: &GeneratorSpec) -> Result<MetricInstance> {
    if let Family::PaperFixture { name, eps } = &spec.family {
        return Ok(lower_bound_instance(*name, *eps)?.instance);
    }
    let (n, m, l) = (spec.n_voters, spec.m_candidates, spec.n_positions);
    if n == 0 || m == 0 || l == 0 || l > m {
        return Err(Error::InvalidArgument(format!(
            "bad shape: n = {n}, m = {m}, l = {l}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let sizes: Vec<usize> = match spec.set_positions {
        None => vec![1; l],
        Some((lo, hi)) => {
            if lo == 0 || lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "bad set-position size range ({lo}, {hi})"
                )));
            }
            (0..l).map(|_| rng.gen_range(lo..=hi)).collect()
        }
    };
    let n_sites: usize = sizes.iter().sum();
    let mut positions = Vec::with_capacity(l);
    let mut next_site = n + m;
    for size in sizes {
        positions.push(PositionSpec::new((next_site..next_site + size).collect())?);
        next_site += size;
    }
    let n_base = n + m + n_sites;
    let label = format!(
        "{}-n{n}m{m}l{l}-seed{:016x}{}",
        spec.family.slug(),
        spec.seed,
        if spec.set_positions.is_some() { "-sets" } else { "" }
    );

    match &spec.family {
        Family::EuclideanBox { dim } => {
            if *dim == 0 {
                return Err(Error::InvalidArgument("dimension must be positive".into()));
            }
            let coords: Vec<Vec<f64>> = (0..n_base)
                .map(|_| (0..*dim).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            MetricInstance::from_coords(n, m, positions, &coords, label)
        }
        Family::Line => {
            let coords: Vec<Vec<f64>> =
                (0..n_base).map(|_| vec![rng.gen_range(0.0..1.0)]).collect();
            MetricInstance::from_coords(n, m, positions, &coords, label)
        }
        Family::RandomMetric => {
            let mut table = vec![0.0; n_base * n_base];
            for i in 0..n_base {
                for j in (i + 1)..n_base {
                    let w = rng.gen_range(0.25..1.0);
                    table[i * n_base + j] = w;
                    table[j * n_base + i] = w;
                }
            }
            // Floyd-Warshall closure makes the table metric.
            for k in 0..n_base {
                for i in 0..n_base {
                    for j in 0..n_base {
                        let through = table[i * n_base + k] + table[k * n_base + j];
                        if through < table[i * n_base + j] {
                            table[i * n_base + j] = through;
                        }
                    }
                }
            }
            MetricInstance::from_distance_table(n, m, n_sites, positions, table, label)
        }
        Family::PaperFixture { .. } => unreachable!("handled above"),
    }
}

/// Runs a mechanism on the instance while touching only its declared
/// information set (profiles or distance tables derived up front).
pub fn run_mechanism(instance: &MetricInstance, mechanism: MechanismKind) -> Result<Matching> {
    let (n, m, l) = (
        instance.n_voters(),
        instance.m_candidates(),
        instance.n_positions(),
    );
    let identity: Vec<usize> = (0..l).collect();
    match mechanism {
        MechanismKind::IterativeVeto => {
            let vp = voter_profile(instance);
            let rule = PluralityVeto::with_input_order(n);
            iterative_election(&vp, &rule, &identity)
        }
        MechanismKind::SerialDictatorship => {
            let pp = position_profile(instance);
            serial_dictatorship(&pp, &identity)
        }
        MechanismKind::MinCpMatching => {
            min_position_cost_matching(&CpDistances::from_instance(instance))
        }
        MechanismKind::PairLocation => {
            require_shape(mechanism, m == 2 && l == 1, "m = 2, l = 1")?;
            let cp = CpDistances::from_instance(instance);
            let vp = voter_profile(instance);
            let (d0, d1) = (cp.get(0, 0), cp.get(1, 0));
            let (a, d_a, b, d_b) = if d1 < d0 { (1, d1, 0, d0) } else { (0, d0, 1, d1) };
            let tally = tally_pair(&vp, 0, a, b)?;
            let winner = two_candidate_location_rule(a, d_a, b, d_b, tally);
            Matching::new(vec![winner], m)
        }
        MechanismKind::PairHybrid => {
            require_shape(mechanism, m == 2 && l == 1, "m = 2, l = 1")?;
            let pp = position_profile(instance);
            let vp = voter_profile(instance);
            let closer = pp.top_choice(0);
            let other = 1 - closer;
            let tally = tally_pair(&vp, 0, closer, other)?;
            let winner = two_candidate_hybrid_rule(closer, other, tally);
            Matching::new(vec![winner], m)
        }
        MechanismKind::TournamentLocation => {
            require_shape(mechanism, l == 1, "l = 1")?;
            let cp = CpDistances::from_instance(instance);
            let vp = voter_profile(instance);
            let winner = tournament_location_rule(&cp, &vp, 0)?;
            Matching::new(vec![winner], m)
        }
    }
}

fn require_shape(mechanism: MechanismKind, ok: bool, needed: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{mechanism} requires {needed}"
        )))
    }
}
