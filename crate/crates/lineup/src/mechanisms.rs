//! Deterministic line-up mechanisms, each consuming only its declared
//! information set (enforced by the operation signatures: no mechanism
//! here ever sees a `MetricInstance`).

use serde::{Deserialize, Serialize};

use crate::assignment::{lex_min_assignment, WeightTable};
use crate::metric::{CpDistances, Matching};
use crate::ordinal::{tally_pair, PairwiseTally, PositionProfile, VoterProfile};
use crate::{Error, Result};

/// A single-winner election: per-voter rankings over a shared candidate
/// set (original candidate ids; all rankings must order the same set).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardElection {
    rankings: Vec<Vec<usize>>,
}

impl StandardElection {
    pub fn new(rankings: Vec<Vec<usize>>) -> Result<Self> {
        let first = rankings
            .first()
            .ok_or_else(|| Error::InvalidArgument("election needs at least one voter".into()))?;
        if first.is_empty() {
            return Err(Error::InvalidArgument("election needs at least one candidate".into()));
        }
        let mut universe = first.clone();
        universe.sort_unstable();
        if universe.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("ranking repeats a candidate".into()));
        }
        for ranking in &rankings[1..] {
            let mut sorted = ranking.clone();
            sorted.sort_unstable();
            if sorted != universe {
                return Err(Error::InvalidArgument(
                    "rankings do not order the same candidate set".into(),
                ));
            }
        }
        Ok(Self { rankings })
    }

    pub fn n_voters(&self) -> usize {
        self.rankings.len()
    }

    pub fn n_candidates(&self) -> usize {
        self.rankings[0].len()
    }

    pub fn ranking(&self, voter: usize) -> &[usize] {
        &self.rankings[voter]
    }

    /// Candidate ids in ascending order.
    pub fn candidates(&self) -> Vec<usize> {
        let mut ids = self.rankings[0].clone();
        ids.sort_unstable();
        ids
    }
}

/// A pluggable single-winner rule with a declared worst-case distortion,
/// used as the base of [`iterative_election`].
pub trait SingleWinnerRule {
    /// The distortion guarantee this rule claims for standard elections.
    fn base_distortion(&self) -> f64;

    fn elect(&self, election: &StandardElection) -> Result<usize>;
}

/// Plurality veto: candidates start with their plurality scores, then
/// voters in `voter_order` each decrement the score of their least
/// preferred candidate that still has a positive score. The candidate
/// whose score reaches zero on the final veto wins. Distortion 3.
#[derive(Debug, Clone)]
pub struct PluralityVeto {
    pub voter_order: Vec<usize>,
}

impl PluralityVeto {
    pub fn with_input_order(n_voters: usize) -> Self {
        Self { voter_order: (0..n_voters).collect() }
    }
}

impl SingleWinnerRule for PluralityVeto {
    fn base_distortion(&self) -> f64 {
        3.0
    }

    fn elect(&self, election: &StandardElection) -> Result<usize> {
        plurality_veto(election, &self.voter_order)
    }
}

/// Runs plurality veto with an explicit veto order over the voters.
pub fn plurality_veto(election: &StandardElection, voter_order: &[usize]) -> Result<usize> {
    let n = election.n_voters();
    if voter_order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "voter order has {} entries for {n} voters",
            voter_order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in voter_order {
        if v >= n || seen[v] {
            return Err(Error::InvalidArgument("voter order is not a permutation".into()));
        }
        seen[v] = true;
    }

    // Phase 1: plurality scores.
    let mut score: std::collections::BTreeMap<usize, usize> = election
        .candidates()
        .into_iter()
        .map(|c| (c, 0))
        .collect();
    for v in 0..n {
        *score.get_mut(&election.ranking(v)[0]).unwrap() += 1;
    }

    // Phase 2: sequential vetoes. Rankings are strict, so the least
    // preferred candidate with positive score is unique.
    let mut last_zeroed = None;
    for &v in voter_order {
        let target = *election
            .ranking(v)
            .iter()
            .rev()
            .find(|c| score[c] > 0)
            .expect("scores sum to the number of remaining vetoes");
        let s = score.get_mut(&target).unwrap();
        *s -= 1;
        if *s == 0 {
            last_zeroed = Some(target);
        }
    }
    Ok(last_zeroed.expect("every score reaches zero after n vetoes"))
}

/// Restricts each voter's ranking for `position` to the candidates in
/// `remaining`, preserving order. Purely ordinal.
pub fn lift_to_standard(
    profile: &VoterProfile,
    position: usize,
    remaining: &[usize],
) -> Result<StandardElection> {
    if remaining.is_empty() {
        return Err(Error::InvalidArgument("remaining candidate set is empty".into()));
    }
    if position >= profile.n_positions() {
        return Err(Error::InvalidArgument("position out of range".into()));
    }
    let mut keep = vec![false; profile.m_candidates()];
    for &c in remaining {
        if c >= profile.m_candidates() {
            return Err(Error::InvalidArgument("remaining candidate out of range".into()));
        }
        keep[c] = true;
    }
    let rankings = (0..profile.n_voters())
        .map(|v| {
            profile
                .ranking(v, position)
                .iter()
                .copied()
                .filter(|&c| keep[c])
                .collect()
        })
        .collect();
    StandardElection::new(rankings)
}

/// Iterative election: positions in `position_order` each run the base
/// single-winner rule on the lifted election over the still-unassigned
/// candidates; winners are removed as they are assigned. With a base rule
/// of distortion `d` the matching is within `2d + 1` of optimal.
pub fn iterative_election(
    profile: &VoterProfile,
    rule: &dyn SingleWinnerRule,
    position_order: &[usize],
) -> Result<Matching> {
    let l = profile.n_positions();
    let m = profile.m_candidates();
    if l > m {
        return Err(Error::InvalidArgument(format!("more positions ({l}) than candidates ({m})")));
    }
    check_permutation_order(position_order, l)?;
    let mut assignment = vec![usize::MAX; l];
    let mut remaining: Vec<usize> = (0..m).collect();
    for &p in position_order {
        let election = lift_to_standard(profile, p, &remaining)?;
        let winner = rule.elect(&election)?;
        assignment[p] = winner;
        remaining.retain(|&c| c != winner);
    }
    Matching::new(assignment, m)
}

/// Serial dictatorship on positions: each position in order takes its top
/// choice among the unassigned candidates. Distortion at most 5 in
/// general, `3 - 1/2^(m-2)` when every candidate must be used.
pub fn serial_dictatorship(
    profile: &PositionProfile,
    position_order: &[usize],
) -> Result<Matching> {
    let l = profile.n_positions();
    let m = profile.m_candidates();
    if l > m {
        return Err(Error::InvalidArgument(format!("more positions ({l}) than candidates ({m})")));
    }
    check_permutation_order(position_order, l)?;
    let mut assignment = vec![usize::MAX; l];
    let mut taken = vec![false; m];
    for &p in position_order {
        let pick = *profile
            .ranking(p)
            .iter()
            .find(|&&c| !taken[c])
            .expect("l <= m leaves a free candidate");
        assignment[p] = pick;
        taken[pick] = true;
    }
    Matching::new(assignment, m)
}

/// Minimizes `sum_p d(M(p), p)` exactly over injective matchings, from
/// candidate-position distances alone; ties resolve to the
/// lexicographically smallest assignment array.
pub fn min_position_cost_matching(cp: &CpDistances) -> Result<Matching> {
    let (m, l) = (cp.m_candidates(), cp.n_positions());
    if l > m {
        return Err(Error::InvalidArgument(format!("more positions ({l}) than candidates ({m})")));
    }
    let mut w = Vec::with_capacity(l * m);
    for p in 0..l {
        for c in 0..m {
            w.push(cp.get(c, p));
        }
    }
    let table = WeightTable::new(l, m, w);
    Matching::new(lex_min_assignment(&table), m)
}

/// The two-candidate rule for known candidate-position distances plus
/// voter preferences: picks `a` iff `n_b * d_a <= n_a * d_b`as stated, `b`
/// otherwise. Guarantees cost within 5/3 of the other choice on any
/// consistent metric when `a` is the closer candidate.
pub fn two_candidate_location_rule(
    a: usize,
    d_a: f64,
    b: usize,
    d_b: f64,
    tally: PairwiseTally,
) -> usize {
    if tally.n_b as f64 * d_a <= tally.n_a as f64 * d_b {
        a
    } else {
        b
    }
}

/// The two-candidate rule for ordinal position and voter preferences:
/// `closer` (the candidate the position ranks higher, ties by index) wins
/// unless more than twice as many voters prefer the other one. Distortion
/// at most 2.
pub fn two_candidate_hybrid_rule(closer: usize, other: usize, tally_for_closer: PairwiseTally) -> usize {
    if tally_for_closer.n_b <= 2 * tally_for_closer.n_a {
        closer
    } else {
        other
    }
}

/// Complete tournament over the candidates for one position, with arcs
/// oriented from each pairwise location-rule winner to the loser. Pair
/// roles: the candidate closer to the position plays "a" (distance tie:
/// smaller index).
#[derive(Debug, Clone)]
pub struct Tournament {
    n: usize,
    /// `beats[i * n + j]` is true iff the arc goes from i to j.
    beats: Vec<bool>,
}

impl Tournament {
    pub fn n_candidates(&self) -> usize {
        self.n
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.n + j]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| j != i && self.beats(i, j)).count()
    }

    /// Max-out-degree vertex, ties by smaller index.
    pub fn max_out_degree_vertex(&self) -> usize {
        (0..self.n)
            .max_by(|&i, &j| self.out_degree(i).cmp(&self.out_degree(j)).then(j.cmp(&i)))
            .expect("tournament has at least one vertex")
    }

    /// Length of the shortest directed path from `from` to `to` if it is
    /// at most 2 (0 when equal), else `None`.
    pub fn short_path_len(&self, from: usize, to: usize) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        if self.beats(from, to) {
            return Some(1);
        }
        for mid in 0..self.n {
            if mid != from && mid != to && self.beats(from, mid) && self.beats(mid, to) {
                return Some(2);
            }
        }
        None
    }
}

/// Builds the pairwise-location-rule tournament for `position`.
pub fn location_tournament(
    cp: &CpDistances,
    profile: &VoterProfile,
    position: usize,
) -> Result<Tournament> {
    let m = cp.m_candidates();
    if m != profile.m_candidates() {
        return Err(Error::InvalidArgument("table and profile disagree on m".into()));
    }
    if position >= cp.n_positions() || position >= profile.n_positions() {
        return Err(Error::InvalidArgument("position out of range".into()));
    }
    let mut beats = vec![false; m * m];
    for c1 in 0..m {
        for c2 in (c1 + 1)..m {
            let (d1, d2) = (cp.get(c1, position), cp.get(c2, position));
            // Closer candidate plays role "a"; distance tie keeps c1.
            let (a, d_a, b, d_b) = if d2 < d1 { (c2, d2, c1, d1) } else { (c1, d1, c2, d2) };
            let tally = tally_pair(profile, position, a, b)?;
            let winner = two_candidate_location_rule(a, d_a, b, d_b, tally);
            let loser = if winner == a { b } else { a };
            beats[winner * m + loser] = true;
        }
    }
    Ok(Tournament { n: m, beats })
}

/// Single-position rule for known locations plus voter preferences: the
/// max-out-degree vertex of the pairwise tournament. Distortion at most
/// 25/9 (5/3 when `m = 2`).
pub fn tournament_location_rule(
    cp: &CpDistances,
    profile: &VoterProfile,
    position: usize,
) -> Result<usize> {
    Ok(location_tournament(cp, profile, position)?.max_out_degree_vertex())
}

fn check_permutation_order(order: &[usize], len: usize) -> Result<()> {
    if order.len() != len {
        return Err(Error::InvalidArgument(format!(
            "order has {} entries, expected {len}",
            order.len()
        )));
    }
    let mut seen = vec![false; len];
    for &x in order {
        if x >= len || seen[x] {
            return Err(Error::InvalidArgument("order is not a permutation".into()));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Mechanism names used by the CLI and experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MechanismKind {
    IterativeVeto,
    SerialDictatorship,
    MinCpMatching,
    PairLocation,
    PairHybrid,
    TournamentLocation,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 6] = [
        MechanismKind::IterativeVeto,
        MechanismKind::SerialDictatorship,
        MechanismKind::MinCpMatching,
        MechanismKind::PairLocation,
        MechanismKind::PairHybrid,
        MechanismKind::TournamentLocation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MechanismKind::IterativeVeto => "iterative-veto",
            MechanismKind::SerialDictatorship => "serial-dictatorship",
            MechanismKind::MinCpMatching => "min-cp-matching",
            MechanismKind::PairLocation => "pair-location",
            MechanismKind::PairHybrid => "pair-hybrid",
            MechanismKind::TournamentLocation => "tournament-location",
        }
    }
}

impl std::str::FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mechanism '{s}'")))
    }
}

impl std::fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::{position_profile, voter_profile};
    use crate::{harness, metric::PositionSpec, MetricInstance};
    use proptest::prelude::*;

    fn election(rankings: &[&[usize]]) -> StandardElection {
        StandardElection::new(rankings.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn veto_single_candidate() {
        let e = election(&[&[0], &[0]]);
        assert_eq!(plurality_veto(&e, &[0, 1]).unwrap(), 0);
    }

    #[test]
    fn veto_unanimous_top_choice_wins() {
        let e = election(&[&[2, 0, 1], &[2, 1, 0], &[2, 0, 1]]);
        assert_eq!(plurality_veto(&e, &[0, 1, 2]).unwrap(), 2);
    }

    #[test]
    fn veto_two_voter_hand_simulation() {
        // Scores A=1, B=1; voter 0 vetoes B, voter 1 vetoes A; A zeroes last.
        let e = election(&[&[0, 1], &[1, 0]]);
        assert_eq!(plurality_veto(&e, &[0, 1]).unwrap(), 0);
        // Reversing the veto order flips the winner.
        assert_eq!(plurality_veto(&e, &[1, 0]).unwrap(), 1);
    }

    #[test]
    fn veto_rejects_bad_order() {
        let e = election(&[&[0, 1], &[1, 0]]);
        assert!(plurality_veto(&e, &[0, 0]).is_err());
        assert!(plurality_veto(&e, &[0]).is_err());
    }

    #[test]
    fn lift_restriction_cases() {
        let inst = MetricInstance::from_coords(
            2,
            3,
            vec![PositionSpec::singleton(5)],
            &[vec![0.0], vec![3.0], vec![1.0], vec![2.0], vec![2.5], vec![1.5]],
            "lift",
        )
        .unwrap();
        let profile = voter_profile(&inst);
        let all = lift_to_standard(&profile, 0, &[0, 1, 2]).unwrap();
        for v in 0..2 {
            assert_eq!(all.ranking(v), profile.ranking(v, 0));
        }
        let one = lift_to_standard(&profile, 0, &[1]).unwrap();
        assert_eq!(one.ranking(0), &[1]);
        assert_eq!(one.ranking(1), &[1]);
        assert!(lift_to_standard(&profile, 0, &[]).is_err());
    }

    #[test]
    fn iterative_election_leftover_candidate_is_forced() {
        let inst = MetricInstance::from_coords(
            2,
            2,
            vec![PositionSpec::singleton(4), PositionSpec::singleton(5)],
            &[vec![0.0], vec![1.0], vec![0.2], vec![0.8], vec![0.1], vec![0.9]],
            "forced",
        )
        .unwrap();
        let profile = voter_profile(&inst);
        let rule = PluralityVeto::with_input_order(2);
        let matching = iterative_election(&profile, &rule, &[0, 1]).unwrap();
        let cands = matching.candidate_set();
        assert_eq!(cands, vec![0, 1]);
        // Run with the positions swapped: both candidates still used.
        let swapped = iterative_election(&profile, &rule, &[1, 0]).unwrap();
        assert_eq!(swapped.candidate_set(), vec![0, 1]);
    }

    #[test]
    fn serial_dictatorship_single_position_takes_top_choice() {
        let inst = MetricInstance::from_coords(
            1,
            3,
            vec![PositionSpec::singleton(4)],
            &[vec![9.0], vec![4.0], vec![1.0], vec![2.5], vec![2.0]],
            "sd",
        )
        .unwrap();
        let pp = position_profile(&inst);
        let matching = serial_dictatorship(&pp, &[0]).unwrap();
        assert_eq!(matching.assignment(), &[pp.top_choice(0)]);
    }

    #[test]
    fn serial_dictatorship_coincident_candidates_use_index_order() {
        let inst = MetricInstance::from_coords(
            1,
            3,
            vec![PositionSpec::singleton(4), PositionSpec::singleton(5)],
            &[vec![0.0], vec![1.0], vec![1.0], vec![1.0], vec![0.5], vec![2.0]],
            "ties",
        )
        .unwrap();
        let pp = position_profile(&inst);
        let matching = serial_dictatorship(&pp, &[0, 1]).unwrap();
        assert_eq!(matching.assignment(), &[0, 1]);
    }

    #[test]
    fn min_position_cost_single_position_is_argmin() {
        let cp = CpDistances::new(3, 1, vec![2.0, 1.0, 1.0]).unwrap();
        let matching = min_position_cost_matching(&cp).unwrap();
        assert_eq!(matching.assignment(), &[1]);
    }

    #[test]
    fn location_rule_edge_tallies() {
        assert_eq!(
            two_candidate_location_rule(0, 1.0, 1, 2.0, PairwiseTally { n_a: 3, n_b: 0 }),
            0
        );
        assert_eq!(
            two_candidate_location_rule(0, 1.0, 1, 2.0, PairwiseTally { n_a: 0, n_b: 3 }),
            1
        );
        // Equality keeps "a", per the rule's non-strict comparison.
        assert_eq!(
            two_candidate_location_rule(0, 1.0, 1, 1.0, PairwiseTally { n_a: 2, n_b: 2 }),
            0
        );
    }

    #[test]
    fn hybrid_rule_edge_tallies() {
        assert_eq!(two_candidate_hybrid_rule(0, 1, PairwiseTally { n_a: 4, n_b: 0 }), 0);
        assert_eq!(two_candidate_hybrid_rule(0, 1, PairwiseTally { n_a: 1, n_b: 3 }), 1);
        assert_eq!(two_candidate_hybrid_rule(0, 1, PairwiseTally { n_a: 1, n_b: 2 }), 0);
    }

    #[test]
    fn tournament_degenerate_sizes() {
        let inst = MetricInstance::from_coords(
            2,
            1,
            vec![PositionSpec::singleton(3)],
            &[vec![0.0], vec![1.0], vec![0.4], vec![0.6]],
            "m1",
        )
        .unwrap();
        let cp = CpDistances::from_instance(&inst);
        let profile = voter_profile(&inst);
        assert_eq!(tournament_location_rule(&cp, &profile, 0).unwrap(), 0);
    }

    #[test]
    fn tournament_with_two_candidates_matches_pair_rule() {
        let inst = MetricInstance::from_coords(
            3,
            2,
            vec![PositionSpec::singleton(5)],
            &[vec![0.1], vec![0.9], vec![0.8], vec![0.0], vec![1.0], vec![0.45]],
            "m2",
        )
        .unwrap();
        let cp = CpDistances::from_instance(&inst);
        let profile = voter_profile(&inst);
        let (d0, d1) = (cp.get(0, 0), cp.get(1, 0));
        let (a, d_a, b, d_b) = if d1 < d0 { (1, d1, 0, d0) } else { (0, d0, 1, d1) };
        let tally = tally_pair(&profile, 0, a, b).unwrap();
        let pair = two_candidate_location_rule(a, d_a, b, d_b, tally);
        assert_eq!(tournament_location_rule(&cp, &profile, 0).unwrap(), pair);
    }

    #[test]
    fn mechanism_names_round_trip() {
        for kind in MechanismKind::ALL {
            assert_eq!(kind.name().parse::<MechanismKind>().unwrap(), kind);
        }
        assert!("not-a-mechanism".parse::<MechanismKind>().is_err());
    }

    proptest! {
        #[test]
        fn lift_matches_filter_oracle(
            seed in any::<u64>(),
            n in 1usize..=4,
            m in 2usize..=5,
            subset_mask in 1u32..31,
        ) {
            let spec = harness::GeneratorSpec {
                family: harness::Family::EuclideanBox { dim: 2 },
                n_voters: n,
                m_candidates: m,
                n_positions: 1,
                seed,
                set_positions: None,
            };
            let inst = harness::generate_instance(&spec).unwrap();
            let profile = voter_profile(&inst);
            let remaining: Vec<usize> = (0..m).filter(|c| subset_mask & (1 << c) != 0).collect();
            prop_assume!(!remaining.is_empty());
            let lifted = lift_to_standard(&profile, 0, &remaining).unwrap();
            for v in 0..n {
                let expected: Vec<usize> = profile
                    .ranking(v, 0)
                    .iter()
                    .copied()
                    .filter(|c| remaining.contains(c))
                    .collect();
                prop_assert_eq!(lifted.ranking(v), expected.as_slice());
            }
        }

        #[test]
        fn min_position_cost_matches_enumeration(
            values in proptest::collection::vec(0u32..64, 15),
        ) {
            use itertools::Itertools;
            // 5 candidates x 3 positions, dyadic entries.
            let cp = CpDistances::new(
                5,
                3,
                values.iter().map(|&x| x as f64 / 8.0).collect(),
            )
            .unwrap();
            let got = min_position_cost_matching(&cp).unwrap();
            let mut best: Option<(f64, Vec<usize>)> = None;
            for perm in (0..5usize).permutations(3) {
                let total: f64 = perm.iter().enumerate().map(|(p, &c)| cp.get(c, p)).sum();
                if best.as_ref().map_or(true, |(t, _)| total < *t) {
                    best = Some((total, perm));
                }
            }
            let best = best.unwrap().1;
            prop_assert_eq!(got.assignment(), best.as_slice());
        }

        #[test]
        fn tournament_winner_has_majority_out_degree(
            seed in any::<u64>(),
            n in 1usize..=5,
            m in 2usize..=6,
        ) {
            let spec = harness::GeneratorSpec {
                family: harness::Family::RandomMetric,
                n_voters: n,
                m_candidates: m,
                n_positions: 1,
                seed,
                set_positions: None,
            };
            let inst = harness::generate_instance(&spec).unwrap();
            let cp = CpDistances::from_instance(&inst);
            let profile = voter_profile(&inst);
            let t = location_tournament(&cp, &profile, 0).unwrap();
            let winner = t.max_out_degree_vertex();
            prop_assert!(2 * t.out_degree(winner) >= m - 1);
            // Exactly one arc per pair.
            for i in 0..m {
                for j in (i + 1)..m {
                    prop_assert!(t.beats(i, j) ^ t.beats(j, i));
                }
            }
        }
    }
}
