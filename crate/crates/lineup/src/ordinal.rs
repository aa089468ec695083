//! Ordinal information sets derived from a full instance.
//!
//! Voter preferences rank candidates per position by `d(v,c) + d(c,p)`;
//! position preferences rank candidates by `d(c,p)`. All ties break toward
//! the smaller candidate index, so re-deriving a profile from the same
//! instance is bit-identical.

use serde::{Deserialize, Serialize};

use crate::metric::MetricInstance;
use crate::{Error, Result};

/// Per-(voter, position) candidate rankings, best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoterProfile {
    n_voters: usize,
    m_candidates: usize,
    n_positions: usize,
    /// `rankings[v][p]` is a permutation of `0..m`.
    rankings: Vec<Vec<Vec<usize>>>,
}

impl VoterProfile {
    pub fn from_rankings(rankings: Vec<Vec<Vec<usize>>>, m_candidates: usize) -> Result<Self> {
        let n_voters = rankings.len();
        let n_positions = rankings.first().map(Vec::len).unwrap_or(0);
        for per_voter in &rankings {
            if per_voter.len() != n_positions {
                return Err(Error::InvalidArgument(
                    "voters rank a different number of positions".into(),
                ));
            }
            for ranking in per_voter {
                check_permutation(ranking, m_candidates)?;
            }
        }
        Ok(Self { n_voters, m_candidates, n_positions, rankings })
    }

    pub fn n_voters(&self) -> usize {
        self.n_voters
    }

    pub fn m_candidates(&self) -> usize {
        self.m_candidates
    }

    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    pub fn ranking(&self, voter: usize, position: usize) -> &[usize] {
        &self.rankings[voter][position]
    }

    /// Rank (0 = best) of `candidate` in the voter's ranking for `position`.
    pub fn rank_of(&self, voter: usize, position: usize, candidate: usize) -> usize {
        self.rankings[voter][position]
            .iter()
            .position(|&c| c == candidate)
            .expect("candidate out of range for profile")
    }
}

/// Per-position candidate rankings by fitness, best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionProfile {
    m_candidates: usize,
    /// `rankings[p]` is a permutation of `0..m`.
    rankings: Vec<Vec<usize>>,
}

impl PositionProfile {
    pub fn from_rankings(rankings: Vec<Vec<usize>>, m_candidates: usize) -> Result<Self> {
        for ranking in &rankings {
            check_permutation(ranking, m_candidates)?;
        }
        Ok(Self { m_candidates, rankings })
    }

    pub fn m_candidates(&self) -> usize {
        self.m_candidates
    }

    pub fn n_positions(&self) -> usize {
        self.rankings.len()
    }

    pub fn ranking(&self, position: usize) -> &[usize] {
        &self.rankings[position]
    }

    pub fn top_choice(&self, position: usize) -> usize {
        self.rankings[position][0]
    }
}

/// Head-to-head count for one position: `n_a` voters rank `a` before `b`,
/// the other `n_b = n - n_a` rank `b` before `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseTally {
    pub n_a: usize,
    pub n_b: usize,
}

fn check_permutation(ranking: &[usize], m: usize) -> Result<()> {
    if ranking.len() != m {
        return Err(Error::InvalidArgument(format!(
            "ranking has {} entries, expected {m}",
            ranking.len()
        )));
    }
    let mut seen = vec![false; m];
    for &c in ranking {
        if c >= m || seen[c] {
            return Err(Error::InvalidArgument(format!(
                "ranking {ranking:?} is not a permutation of 0..{m}"
            )));
        }
        seen[c] = true;
    }
    Ok(())
}

fn sorted_by_key(m: usize, key: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m).collect();
    // Stable sort keeps ascending candidate index on ties.
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    order
}

/// Derives the voter-preference information set from an instance.
pub fn voter_profile(instance: &MetricInstance) -> VoterProfile {
    let (n, m, l) = (
        instance.n_voters(),
        instance.m_candidates(),
        instance.n_positions(),
    );
    let mut rankings = Vec::with_capacity(n);
    for v in 0..n {
        let mut per_voter = Vec::with_capacity(l);
        for p in 0..l {
            per_voter.push(sorted_by_key(m, |c| {
                instance.voter_candidate(v, c) + instance.candidate_position(c, p)
            }));
        }
        rankings.push(per_voter);
    }
    VoterProfile {
        n_voters: n,
        m_candidates: m,
        n_positions: l,
        rankings,
    }
}

/// Derives the position-preference information set from an instance.
pub fn position_profile(instance: &MetricInstance) -> PositionProfile {
    let (m, l) = (instance.m_candidates(), instance.n_positions());
    let rankings = (0..l)
        .map(|p| sorted_by_key(m, |c| instance.candidate_position(c, p)))
        .collect();
    PositionProfile { m_candidates: m, rankings }
}

/// Counts voters preferring `a` to `b` for `position`.
pub fn tally_pair(
    profile: &VoterProfile,
    position: usize,
    a: usize,
    b: usize,
) -> Result<PairwiseTally> {
    if a == b {
        return Err(Error::InvalidArgument(format!(
            "tally needs two distinct candidates, got {a} twice"
        )));
    }
    if a >= profile.m_candidates || b >= profile.m_candidates {
        return Err(Error::InvalidArgument("candidate out of range".into()));
    }
    if position >= profile.n_positions {
        return Err(Error::InvalidArgument("position out of range".into()));
    }
    let n_a = (0..profile.n_voters)
        .filter(|&v| profile.rank_of(v, position, a) < profile.rank_of(v, position, b))
        .count();
    Ok(PairwiseTally { n_a, n_b: profile.n_voters - n_a })
}
