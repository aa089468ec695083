//! Worst-case distortion over all metrics consistent with an information
//! set, computed exactly by linear programming.
//!
//! One LP variable per unordered pair of base points (voters, candidates,
//! positions-as-points); constraints are nonnegativity, every triangle
//! inequality, the ordinal rows implied by the profiles, and (for location
//! information) equality of the known distances up to a common scale
//! variable. Normalizing the alternative's cost to 1 turns the cost ratio
//! supremum into a plain LP objective. Strict preferences are relaxed to
//! non-strict, so the LP value is the supremum, which may be approached
//! rather than attained; lower-bound witnesses mirror the limit
//! constructions.

mod lowerbound;
mod simplex;

pub use lowerbound::{lower_bound_instance, LowerBoundFamily, LowerBoundInstance};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::metric::{CpDistances, Matching, MetricInstance, PositionSpec};
use crate::ordinal::{position_profile, voter_profile, PositionProfile, VoterProfile};
use crate::par;
use crate::{Error, Result};
use simplex::{LinearProgram, LpOutcome, LpRow};

/// Which information the adversary must stay consistent with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfoKind {
    Vp,
    Pp,
    VpPp,
    Loc,
    LocVp,
}

impl InfoKind {
    pub const ALL: [InfoKind; 5] = [
        InfoKind::Vp,
        InfoKind::Pp,
        InfoKind::VpPp,
        InfoKind::Loc,
        InfoKind::LocVp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InfoKind::Vp => "vp",
            InfoKind::Pp => "pp",
            InfoKind::VpPp => "vp+pp",
            InfoKind::Loc => "loc",
            InfoKind::LocVp => "loc+vp",
        }
    }

    pub fn includes_vp(&self) -> bool {
        matches!(self, InfoKind::Vp | InfoKind::VpPp | InfoKind::LocVp)
    }

    pub fn includes_pp(&self) -> bool {
        matches!(self, InfoKind::Pp | InfoKind::VpPp)
    }

    pub fn includes_loc(&self) -> bool {
        matches!(self, InfoKind::Loc | InfoKind::LocVp)
    }
}

impl std::str::FromStr for InfoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown info kind '{s}'")))
    }
}

impl std::fmt::Display for InfoKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Known locations: candidate-position, candidate-candidate, and
/// position-position distances (positions are known points, so all three
/// tables are determined).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocInfo {
    pub cp: CpDistances,
    /// `cc[c1][c2]`, symmetric with zero diagonal.
    pub cc: Vec<Vec<f64>>,
    /// `pp[p1][p2]`, symmetric with zero diagonal.
    pub pp: Vec<Vec<f64>>,
}

impl LocInfo {
    pub fn from_instance(instance: &MetricInstance) -> Self {
        let (m, l) = (instance.m_candidates(), instance.n_positions());
        let cc = (0..m)
            .map(|c1| {
                (0..m)
                    .map(|c2| {
                        instance.base_dist(instance.candidate_base(c1), instance.candidate_base(c2))
                    })
                    .collect()
            })
            .collect();
        let pp = (0..l)
            .map(|p1| (0..l).map(|p2| instance.position_position(p1, p2)).collect())
            .collect();
        LocInfo { cp: CpDistances::from_instance(instance), cc, pp }
    }
}

/// The adversary's knowledge: a kind plus exactly the pieces that kind
/// demands, and the election shape `(n, m, l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoSet {
    kind: InfoKind,
    shape: (usize, usize, usize),
    voter_profile: Option<VoterProfile>,
    position_profile: Option<PositionProfile>,
    loc: Option<LocInfo>,
}

impl InfoSet {
    pub fn new(
        kind: InfoKind,
        shape: (usize, usize, usize),
        voter_profile: Option<VoterProfile>,
        position_profile: Option<PositionProfile>,
        loc: Option<LocInfo>,
    ) -> Result<Self> {
        let (n, m, l) = shape;
        if n == 0 || m == 0 || l == 0 || l > m {
            return Err(Error::InvalidArgument(format!("bad shape ({n}, {m}, {l})")));
        }
        if kind.includes_vp() != voter_profile.is_some()
            || kind.includes_pp() != position_profile.is_some()
            || kind.includes_loc() != loc.is_some()
        {
            return Err(Error::InvalidArgument(format!(
                "{kind} requires exactly its own information pieces"
            )));
        }
        if let Some(vp) = &voter_profile {
            if vp.n_voters() != n || vp.m_candidates() != m || vp.n_positions() != l {
                return Err(Error::InvalidArgument("voter profile shape mismatch".into()));
            }
        }
        if let Some(pp) = &position_profile {
            if pp.m_candidates() != m || pp.n_positions() != l {
                return Err(Error::InvalidArgument("position profile shape mismatch".into()));
            }
        }
        if let Some(loc) = &loc {
            if loc.cp.m_candidates() != m
                || loc.cp.n_positions() != l
                || loc.cc.len() != m
                || loc.pp.len() != l
            {
                return Err(Error::InvalidArgument("location info shape mismatch".into()));
            }
        }
        Ok(Self { kind, shape, voter_profile, position_profile, loc })
    }

    /// Derives the information set of the given kind from a full instance.
    pub fn from_instance(instance: &MetricInstance, kind: InfoKind) -> Self {
        let shape = (
            instance.n_voters(),
            instance.m_candidates(),
            instance.n_positions(),
        );
        Self {
            kind,
            shape,
            voter_profile: kind.includes_vp().then(|| voter_profile(instance)),
            position_profile: kind.includes_pp().then(|| position_profile(instance)),
            loc: kind.includes_loc().then(|| LocInfo::from_instance(instance)),
        }
    }

    /// A voter-preference-only information set built from the profile
    /// alone (no metric ever observed).
    pub fn from_voter_profile(profile: VoterProfile) -> Self {
        let shape = (
            profile.n_voters(),
            profile.m_candidates(),
            profile.n_positions(),
        );
        Self {
            kind: InfoKind::Vp,
            shape,
            voter_profile: Some(profile),
            position_profile: None,
            loc: None,
        }
    }

    /// A position-preference-only information set; the voter count still
    /// shapes the cost functional.
    pub fn from_position_profile(profile: PositionProfile, n_voters: usize) -> Self {
        let shape = (n_voters, profile.m_candidates(), profile.n_positions());
        Self {
            kind: InfoKind::Pp,
            shape,
            voter_profile: None,
            position_profile: Some(profile),
            loc: None,
        }
    }

    pub fn kind(&self) -> InfoKind {
        self.kind
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.shape
    }

    /// Checks that a (point-position) instance satisfies every constraint
    /// of this information set within `tol`.
    pub fn is_consistent_with(&self, instance: &MetricInstance, tol: f64) -> bool {
        let (n, m, l) = self.shape;
        if instance.n_voters() != n
            || instance.m_candidates() != m
            || instance.n_positions() != l
        {
            return false;
        }
        if let Some(vp) = &self.voter_profile {
            for v in 0..n {
                for p in 0..l {
                    let key = |c: usize| {
                        instance.voter_candidate(v, c) + instance.candidate_position(c, p)
                    };
                    for w in vp.ranking(v, p).windows(2) {
                        if key(w[0]) > key(w[1]) + tol {
                            return false;
                        }
                    }
                }
            }
        }
        if let Some(pp) = &self.position_profile {
            for p in 0..l {
                for w in pp.ranking(p).windows(2) {
                    if instance.candidate_position(w[0], p)
                        > instance.candidate_position(w[1], p) + tol
                    {
                        return false;
                    }
                }
            }
        }
        if let Some(loc) = &self.loc {
            let close = |a: f64, b: f64| (a - b).abs() <= tol * 1f64.max(a.abs().max(b.abs()));
            for c in 0..m {
                for p in 0..l {
                    if !close(instance.candidate_position(c, p), loc.cp.get(c, p)) {
                        return false;
                    }
                }
            }
            for c1 in 0..m {
                for c2 in 0..m {
                    let d = instance
                        .base_dist(instance.candidate_base(c1), instance.candidate_base(c2));
                    if !close(d, loc.cc[c1][c2]) {
                        return false;
                    }
                }
            }
            for p1 in 0..l {
                for p2 in 0..l {
                    if !close(instance.position_position(p1, p2), loc.pp[p1][p2]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Worst-case result: the supremum ratio, the alternative that attains the
/// maximum, and (when the supremum is finite and attained) a consistent
/// witness metric realizing it.
#[derive(Debug, Clone)]
pub struct AdversaryResult {
    pub value: f64,
    pub witness_metric: Option<MetricInstance>,
    pub binding_alternative: Matching,
}

/// Value and witness of one `max cost(M) / cost(Malt)` LP.
#[derive(Debug, Clone)]
pub struct LpRatio {
    pub value: f64,
    pub witness: Option<MetricInstance>,
}

struct PairVars {
    n_points: usize,
}

impl PairVars {
    fn count(&self) -> usize {
        self.n_points * (self.n_points - 1) / 2
    }

    fn var(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a * (2 * self.n_points - a - 1) / 2 + (b - a - 1)
    }
}

/// Maximizes `cost(M, d)` over metrics `d` consistent with `info` and
/// normalized to `cost(Malt, d) = 1`; by scale invariance (location
/// distances scale through a shared variable) this equals
/// `sup_d cost(M, d) / cost(Malt, d)`.
pub fn pairwise_lp_ratio(info: &InfoSet, m: &Matching, malt: &Matching) -> Result<LpRatio> {
    let (n, m_cands, l) = info.shape;
    for matching in [m, malt] {
        if matching.len() != l || matching.assignment().iter().any(|&c| c >= m_cands) {
            return Err(Error::InvalidArgument(
                "matching does not fit the information set's shape".into(),
            ));
        }
    }
    let n_points = n + m_cands + l;
    let pairs = PairVars { n_points };
    let voter_pt = |v: usize| v;
    let cand_pt = |c: usize| n + c;
    let pos_pt = |p: usize| n + m_cands + p;

    let has_loc = info.loc.is_some();
    let scale_var = pairs.count();
    let n_vars = pairs.count() + usize::from(has_loc);

    let mut rows: Vec<LpRow> = Vec::new();
    // Triangle inequalities for every ordered side of every triple.
    for a in 0..n_points {
        for b in (a + 1)..n_points {
            for c in (b + 1)..n_points {
                let (ab, ac, bc) = (pairs.var(a, b), pairs.var(a, c), pairs.var(b, c));
                for (direct, via1, via2) in [(ab, ac, bc), (ac, ab, bc), (bc, ab, ac)] {
                    rows.push(LpRow {
                        coeffs: vec![(direct, 1.0), (via1, -1.0), (via2, -1.0)],
                        rhs: 0.0,
                        equality: false,
                    });
                }
            }
        }
    }
    // Ordinal rows: adjacent ranked pairs only; transitivity supplies the
    // rest.
    if let Some(vp) = &info.voter_profile {
        for v in 0..n {
            for p in 0..l {
                for w in vp.ranking(v, p).windows(2) {
                    let (better, worse) = (w[0], w[1]);
                    rows.push(LpRow {
                        coeffs: vec![
                            (pairs.var(voter_pt(v), cand_pt(better)), 1.0),
                            (pairs.var(cand_pt(better), pos_pt(p)), 1.0),
                            (pairs.var(voter_pt(v), cand_pt(worse)), -1.0),
                            (pairs.var(cand_pt(worse), pos_pt(p)), -1.0),
                        ],
                        rhs: 0.0,
                        equality: false,
                    });
                }
            }
        }
    }
    if let Some(pp) = &info.position_profile {
        for p in 0..l {
            for w in pp.ranking(p).windows(2) {
                rows.push(LpRow {
                    coeffs: vec![
                        (pairs.var(cand_pt(w[0]), pos_pt(p)), 1.0),
                        (pairs.var(cand_pt(w[1]), pos_pt(p)), -1.0),
                    ],
                    rhs: 0.0,
                    equality: false,
                });
            }
        }
    }
    if let Some(loc) = &info.loc {
        let mut fix = |var: usize, value: f64| {
            rows.push(LpRow {
                coeffs: vec![(var, 1.0), (scale_var, -value)],
                rhs: 0.0,
                equality: true,
            });
        };
        for c in 0..m_cands {
            for p in 0..l {
                fix(pairs.var(cand_pt(c), pos_pt(p)), loc.cp.get(c, p));
            }
        }
        for c1 in 0..m_cands {
            for c2 in (c1 + 1)..m_cands {
                fix(pairs.var(cand_pt(c1), cand_pt(c2)), loc.cc[c1][c2]);
            }
        }
        for p1 in 0..l {
            for p2 in (p1 + 1)..l {
                fix(pairs.var(pos_pt(p1), pos_pt(p2)), loc.pp[p1][p2]);
            }
        }
    }

    // Cost functionals as dense coefficient vectors over the pair vars.
    let cost_coeffs = |matching: &Matching| -> Vec<f64> {
        let mut coeffs = vec![0.0; n_vars];
        for p in 0..l {
            let c = matching.candidate_for(p);
            for v in 0..n {
                coeffs[pairs.var(voter_pt(v), cand_pt(c))] += 1.0;
            }
            coeffs[pairs.var(cand_pt(c), pos_pt(p))] += n as f64;
        }
        coeffs
    };
    let norm = cost_coeffs(malt);
    rows.push(LpRow {
        coeffs: norm
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(j, &v)| (j, v))
            .collect(),
        rhs: 1.0,
        equality: true,
    });

    let lp = LinearProgram { n_vars, rows, objective: cost_coeffs(m) };
    match simplex::maximize(&lp) {
        LpOutcome::Unbounded => Ok(LpRatio { value: f64::INFINITY, witness: None }),
        LpOutcome::Infeasible => Err(Error::InconsistentInfo(
            "no metric is consistent with the information set and normalization".into(),
        )),
        LpOutcome::Optimal { value, solution, certified } => {
            let (value, solution) = match certified {
                Some((cert_value, cert_solution)) => (cert_value, cert_solution),
                None => (value, solution),
            };
            let witness = build_witness(info, &pairs, &solution, has_loc, scale_var);
            Ok(LpRatio { value, witness })
        }
    }
}

/// Turns an LP solution into a metric instance over point positions. With
/// location information the solution is scaled back by the shared scale
/// variable; a zero scale means the supremum is a pure limit and no
/// witness is emitted.
fn build_witness(
    info: &InfoSet,
    pairs: &PairVars,
    solution: &[f64],
    has_loc: bool,
    scale_var: usize,
) -> Option<MetricInstance> {
    let (n, m, l) = info.shape;
    let scale = if has_loc { solution[scale_var] } else { 1.0 };
    if !(scale > 1e-12) {
        return None;
    }
    let n_points = n + m + l;
    let mut table = vec![0.0; n_points * n_points];
    for i in 0..n_points {
        for j in (i + 1)..n_points {
            let d = solution[pairs.var(i, j)] / scale;
            table[i * n_points + j] = d;
            table[j * n_points + i] = d;
        }
    }
    let positions = (0..l).map(|p| PositionSpec::singleton(n + m + p)).collect();
    MetricInstance::from_distance_table(n, m, l, positions, table, "lp-witness").ok()
}

/// Maximizes the pairwise LP ratio over every injective alternative; the
/// reduction is a deterministic ordered max, though the individual LPs may
/// run in parallel.
pub fn worst_case_distortion(info: &InfoSet, m: &Matching) -> Result<AdversaryResult> {
    let (_, m_cands, l) = info.shape;
    let mut alt_count: u64 = 1;
    for i in 0..l {
        alt_count = alt_count.saturating_mul((m_cands - i) as u64);
    }
    if alt_count > 10_000 {
        return Err(Error::ResourceLimit(format!(
            "{alt_count} alternative matchings exceed the enumeration guard"
        )));
    }
    let alternatives: Vec<Matching> = (0..m_cands)
        .permutations(l)
        .map(|perm| Matching::new(perm, m_cands).expect("permutation is injective"))
        .collect();
    let outcomes = par::map_indexed(alternatives.len(), |i| {
        pairwise_lp_ratio(info, m, &alternatives[i])
    });
    let mut best: Option<(usize, LpRatio)> = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let ratio = outcome?;
        let replace = match &best {
            None => true,
            Some((_, incumbent)) => ratio.value > incumbent.value,
        };
        if replace {
            best = Some((i, ratio));
        }
    }
    let (idx, ratio) = best.expect("at least one alternative exists");
    Ok(AdversaryResult {
        value: ratio.value,
        witness_metric: ratio.witness,
        binding_alternative: alternatives[idx].clone(),
    })
}

/// The trade-off function behind the 5/3 analysis:
/// `f(x, y) = 1 + 2y / ((x + y) y/x + x)`, homogeneous of degree zero and
/// at most 5/3.
pub fn f_bound(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "f is defined for positive reals, got ({x}, {y})"
        )));
    }
    Ok(1.0 + 2.0 * y / ((x + y) * (y / x) + x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{generate_instance, Family, GeneratorSpec};
    use crate::mechanisms::{plurality_veto, StandardElection};
    use crate::ordinal::VoterProfile;

    fn fig2_profile() -> VoterProfile {
        // Two voters, two candidates, one position; voter 0 prefers A.
        VoterProfile::from_rankings(vec![vec![vec![0, 1]], vec![vec![1, 0]]], 2).unwrap()
    }

    #[test]
    fn same_matching_normalizes_to_one() {
        let info = InfoSet::from_voter_profile(fig2_profile());
        let m = Matching::new(vec![0], 2).unwrap();
        let ratio = pairwise_lp_ratio(&info, &m, &m).unwrap();
        assert!((ratio.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fig2_profile_reaches_three() {
        let info = InfoSet::from_voter_profile(fig2_profile());
        let m = Matching::new(vec![0], 2).unwrap();
        let malt = Matching::new(vec![1], 2).unwrap();
        let ratio = pairwise_lp_ratio(&info, &m, &malt).unwrap();
        assert!((ratio.value - 3.0).abs() < 1e-6, "value {}", ratio.value);
        let witness = ratio.witness.expect("attained supremum has a witness");
        assert!(witness.validate_metric().accepted());
        assert!(info.is_consistent_with(&witness, 1e-7));
        let (c_m, c_alt) = (
            witness.cost_of_matching(&m).unwrap().total,
            witness.cost_of_matching(&malt).unwrap().total,
        );
        assert!((c_m / c_alt - ratio.value).abs() < 1e-6 * ratio.value);
    }

    #[test]
    fn worst_case_single_candidate_is_one() {
        let profile = VoterProfile::from_rankings(vec![vec![vec![0]]], 1).unwrap();
        let info = InfoSet::from_voter_profile(profile);
        let m = Matching::new(vec![0], 1).unwrap();
        let result = worst_case_distortion(&info, &m).unwrap();
        assert!((result.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pp_top_choice_bounded_by_three_and_last_choice_unbounded() {
        let pp = crate::ordinal::PositionProfile::from_rankings(vec![vec![0, 1, 2]], 3).unwrap();
        let info = InfoSet::from_position_profile(pp, 2);
        let top = Matching::new(vec![0], 3).unwrap();
        let result = worst_case_distortion(&info, &top).unwrap();
        assert!(result.value <= 3.0 + 1e-6, "value {}", result.value);
        // A candidate the position ranks last can be arbitrarily far.
        let last = Matching::new(vec![2], 3).unwrap();
        let result = worst_case_distortion(&info, &last).unwrap();
        assert!(result.value.is_infinite());
    }

    #[test]
    fn more_information_never_raises_the_worst_case() {
        for seed in [3u64, 17, 92] {
            let inst = generate_instance(&GeneratorSpec {
                family: Family::EuclideanBox { dim: 2 },
                n_voters: 2,
                m_candidates: 3,
                n_positions: 1,
                seed,
                set_positions: None,
            })
            .unwrap();
            let m = Matching::new(vec![0], 3).unwrap();
            let value = |kind: InfoKind| {
                worst_case_distortion(&InfoSet::from_instance(&inst, kind), &m)
                    .unwrap()
                    .value
            };
            let (vp, pp, both) = (value(InfoKind::Vp), value(InfoKind::Pp), value(InfoKind::VpPp));
            assert!(both <= vp + 1e-6, "seed {seed}: {both} vs vp {vp}");
            assert!(both <= pp + 1e-6, "seed {seed}: {both} vs pp {pp}");
        }
    }

    #[test]
    fn loc_info_pins_the_scale() {
        // Known locations make the instance rigid up to voter placement.
        let inst = generate_instance(&GeneratorSpec {
            family: Family::Line,
            n_voters: 2,
            m_candidates: 2,
            n_positions: 1,
            seed: 5,
            set_positions: None,
        })
        .unwrap();
        let info = InfoSet::from_instance(&inst, InfoKind::Loc);
        let m = Matching::new(vec![0], 2).unwrap();
        let malt = Matching::new(vec![1], 2).unwrap();
        let ratio = pairwise_lp_ratio(&info, &m, &malt).unwrap();
        assert!(ratio.value.is_finite());
        if let Some(witness) = &ratio.witness {
            assert!(info.is_consistent_with(witness, 1e-7));
        }
    }

    #[test]
    fn veto_winner_on_small_profiles_stays_within_three() {
        // Exhaustive n = 2, m = 2 profiles as a smoke slice of the full
        // acceptance sweep.
        for r0 in [[0usize, 1], [1, 0]] {
            for r1 in [[0usize, 1], [1, 0]] {
                let profile = VoterProfile::from_rankings(
                    vec![vec![r0.to_vec()], vec![r1.to_vec()]],
                    2,
                )
                .unwrap();
                let election = StandardElection::new(vec![r0.to_vec(), r1.to_vec()]).unwrap();
                let winner = plurality_veto(&election, &[0, 1]).unwrap();
                let info = InfoSet::from_voter_profile(profile);
                let result =
                    worst_case_distortion(&info, &Matching::new(vec![winner], 2).unwrap())
                        .unwrap();
                assert!(result.value <= 3.0 + 1e-6, "value {}", result.value);
            }
        }
    }

    #[test]
    fn f_bound_values() {
        assert!((f_bound(1.0, 1.0).unwrap() - 5.0 / 3.0).abs() < 1e-12);
        assert!((f_bound(1.0, 1e-9).unwrap() - 1.0).abs() < 1e-6);
        assert!(f_bound(0.0, 1.0).is_err());
        assert!(f_bound(1.0, -2.0).is_err());
    }
}
