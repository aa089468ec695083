//! Metric line-up instances and their cost functionals.
//!
//! An instance holds a dense symmetric distance table over the *base
//! points*: `n` voters, `m` candidates, and `k` position sites. Each of the
//! `l` election positions is a nonempty set of base points; a singleton set
//! behaves exactly as a point position, while a larger set measures
//! candidate fitness by the average distance to its members.

use serde::{Deserialize, Serialize};

use crate::{approx_eq, approx_le, cost_ratio, Error, Result};

/// Kind of a base point in the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Voter,
    Candidate,
    Position,
}

/// Public point address. `Position(i)` refers to the i-th *election
/// position* (which may be a set of base points), not to a raw site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointId {
    Voter(usize),
    Candidate(usize),
    Position(usize),
}

/// An election position: a nonempty set of base-point indices into the
/// owning instance's roster (voters first, then candidates, then sites).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionSpec {
    members: Vec<usize>,
}

impl PositionSpec {
    pub fn new(members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "position must have at least one member point".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn singleton(base: usize) -> Self {
        Self { members: vec![base] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }
}

/// Injective matching from positions to candidates; entry `p` holds the
/// candidate assigned to position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    assignment: Vec<usize>,
}

impl Matching {
    /// Validates injectivity and the candidate range `0..m`.
    pub fn new(assignment: Vec<usize>, m_candidates: usize) -> Result<Self> {
        let mut seen = vec![false; m_candidates];
        for &c in &assignment {
            if c >= m_candidates {
                return Err(Error::InvalidArgument(format!(
                    "candidate index {c} out of range (m = {m_candidates})"
                )));
            }
            if seen[c] {
                return Err(Error::InvalidArgument(format!(
                    "candidate {c} assigned to two positions"
                )));
            }
            seen[c] = true;
        }
        Ok(Self { assignment })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn candidate_for(&self, position: usize) -> usize {
        self.assignment[position]
    }

    /// Candidates selected by the matching, in ascending order.
    pub fn candidate_set(&self) -> Vec<usize> {
        let mut set = self.assignment.clone();
        set.sort_unstable();
        set
    }

    /// Position matched to `candidate`, if any.
    pub fn position_of(&self, candidate: usize) -> Option<usize> {
        self.assignment.iter().position(|&c| c == candidate)
    }
}

/// Social cost split into its voter and position parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub total: f64,
    pub voter_part: f64,
    pub position_part: f64,
}

/// One violated metric axiom, with the offending base points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MetricViolation {
    NonzeroSelfDistance { point: usize, value: f64 },
    Asymmetry { a: usize, b: usize, forward: f64, backward: f64 },
    NegativeDistance { a: usize, b: usize, value: f64 },
    Triangle { a: usize, b: usize, c: usize, direct: f64, through: f64 },
}

/// Outcome of [`MetricInstance::validate_metric`]. The instance is accepted
/// iff `violations` is empty; `notes` carries informational flags only.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<MetricViolation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Candidate-by-position distance table, the information set available to
/// location-only mechanisms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpDistances {
    m_candidates: usize,
    n_positions: usize,
    values: Vec<f64>,
}

impl CpDistances {
    /// Builds a table from rows `values[c][p]`, rejecting negatives and NaN.
    pub fn new(m_candidates: usize, n_positions: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != m_candidates * n_positions {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                m_candidates * n_positions,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(
                "candidate-position distances must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { m_candidates, n_positions, values })
    }

    pub fn from_instance(instance: &MetricInstance) -> Self {
        let m = instance.m_candidates();
        let l = instance.n_positions();
        let mut values = Vec::with_capacity(m * l);
        for c in 0..m {
            for p in 0..l {
                values.push(instance.candidate_position(c, p));
            }
        }
        Self { m_candidates: m, n_positions: l, values }
    }

    pub fn m_candidates(&self) -> usize {
        self.m_candidates
    }

    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    pub fn get(&self, candidate: usize, position: usize) -> f64 {
        self.values[candidate * self.n_positions + position]
    }
}

enum Resolved<'a> {
    Point(usize),
    Set(&'a [usize]),
}

/// A metric line-up instance: the space `(V u C u P, d)`.
///
/// Immutable after construction; base points are laid out as voters
/// `0..n`, candidates `n..n+m`, sites `n+m..n+m+k` in the dense table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricInstance {
    n_voters: usize,
    m_candidates: usize,
    n_sites: usize,
    positions: Vec<PositionSpec>,
    distances: Vec<f64>,
    label: String,
}

impl MetricInstance {
    /// Constructs an instance from a full symmetric distance table given
    /// row-major over all base points. Structural problems (shape, index
    /// ranges, `l > m`) are errors; metric-axiom problems are *not* — they
    /// are reported by [`validate_metric`](Self::validate_metric).
    pub fn from_distance_table(
        n_voters: usize,
        m_candidates: usize,
        n_sites: usize,
        positions: Vec<PositionSpec>,
        distances: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n_voters == 0 || m_candidates == 0 || positions.is_empty() {
            return Err(Error::InvalidArgument(
                "instance needs at least one voter, candidate, and position".into(),
            ));
        }
        if positions.len() > m_candidates {
            return Err(Error::InvalidArgument(format!(
                "more positions ({}) than candidates ({})",
                positions.len(),
                m_candidates
            )));
        }
        let n_base = n_voters + m_candidates + n_sites;
        if distances.len() != n_base * n_base {
            return Err(Error::InvalidArgument(format!(
                "distance table has {} entries, expected {}",
                distances.len(),
                n_base * n_base
            )));
        }
        if distances.iter().any(|d| d.is_nan()) {
            return Err(Error::InvalidArgument("distance table contains NaN".into()));
        }
        for spec in &positions {
            for &member in spec.members() {
                if member >= n_base {
                    return Err(Error::InvalidArgument(format!(
                        "position member {member} out of range ({n_base} base points)"
                    )));
                }
            }
        }
        Ok(Self {
            n_voters,
            m_candidates,
            n_sites,
            positions,
            distances,
            label: label.into(),
        })
    }

    /// Constructs a Euclidean instance from per-point coordinates, in
    /// roster order (voters, candidates, sites). All points must share a
    /// dimension.
    pub fn from_coords(
        n_voters: usize,
        m_candidates: usize,
        positions: Vec<PositionSpec>,
        coords: &[Vec<f64>],
        label: impl Into<String>,
    ) -> Result<Self> {
        let n_base = coords.len();
        if n_base < n_voters + m_candidates {
            return Err(Error::InvalidArgument("not enough coordinate rows".into()));
        }
        let n_sites = n_base - n_voters - m_candidates;
        let dim = coords.first().map(Vec::len).unwrap_or(0);
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidArgument("coordinate dimensions differ".into()));
        }
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        let mut distances = vec![0.0; n_base * n_base];
        for i in 0..n_base {
            for j in (i + 1)..n_base {
                let d = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                distances[i * n_base + j] = d;
                distances[j * n_base + i] = d;
            }
        }
        Self::from_distance_table(n_voters, m_candidates, n_sites, positions, distances, label)
    }

    pub fn n_voters(&self) -> usize {
        self.n_voters
    }

    pub fn m_candidates(&self) -> usize {
        self.m_candidates
    }

    /// Number of election positions `l`.
    pub fn n_positions(&self) -> usize {
        self.positions.len()
    }

    /// Number of raw site points in the roster.
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_base_points(&self) -> usize {
        self.n_voters + self.m_candidates + self.n_sites
    }

    pub fn positions(&self) -> &[PositionSpec] {
        &self.positions
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn voter_base(&self, v: usize) -> usize {
        v
    }

    pub fn candidate_base(&self, c: usize) -> usize {
        self.n_voters + c
    }

    pub fn site_base(&self, s: usize) -> usize {
        self.n_voters + self.m_candidates + s
    }

    /// Raw distance between two base points.
    pub fn base_dist(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.n_base_points() + j]
    }

    fn point_average(&self, base: usize, members: &[usize]) -> f64 {
        let sum: f64 = members.iter().map(|&m| self.base_dist(base, m)).sum();
        sum / members.len() as f64
    }

    fn resolve(&self, id: PointId) -> Result<Resolved<'_>> {
        match id {
            PointId::Voter(v) if v < self.n_voters => Ok(Resolved::Point(self.voter_base(v))),
            PointId::Candidate(c) if c < self.m_candidates => {
                Ok(Resolved::Point(self.candidate_base(c)))
            }
            PointId::Position(p) if p < self.positions.len() => {
                let spec = &self.positions[p];
                if spec.is_singleton() {
                    Ok(Resolved::Point(spec.members()[0]))
                } else {
                    Ok(Resolved::Set(spec.members()))
                }
            }
            _ => Err(Error::InvalidArgument(format!("unknown point id {id:?}"))),
        }
    }

    /// Distance between two public points. Set positions measure by the
    /// average distance to their members; a pair of set positions averages
    /// over both member lists.
    pub fn dist(&self, a: PointId, b: PointId) -> Result<f64> {
        match (self.resolve(a)?, self.resolve(b)?) {
            (Resolved::Point(i), Resolved::Point(j)) => Ok(self.base_dist(i, j)),
            (Resolved::Point(i), Resolved::Set(members))
            | (Resolved::Set(members), Resolved::Point(i)) => {
                Ok(self.point_average(i, members))
            }
            (Resolved::Set(ma), Resolved::Set(mb)) => {
                let mut sum = 0.0;
                for &x in ma {
                    for &y in mb {
                        sum += self.base_dist(x, y);
                    }
                }
                Ok(sum / (ma.len() * mb.len()) as f64)
            }
        }
    }

    /// Voter-candidate distance (always point-to-point).
    pub fn voter_candidate(&self, v: usize, c: usize) -> f64 {
        self.base_dist(self.voter_base(v), self.candidate_base(c))
    }

    /// Candidate-position distance, set-aware.
    pub fn candidate_position(&self, c: usize, p: usize) -> f64 {
        self.point_average(self.candidate_base(c), self.positions[p].members())
    }

    /// Position-position distance, set-aware on both sides.
    pub fn position_position(&self, p: usize, q: usize) -> f64 {
        let (ma, mb) = (self.positions[p].members(), self.positions[q].members());
        let mut sum = 0.0;
        for &x in ma {
            for &y in mb {
                sum += self.base_dist(x, y);
            }
        }
        sum / (ma.len() * mb.len()) as f64
    }

    /// Social cost of a matching, split into voter and position parts:
    /// `voter_part = sum_v sum_p d(v, M(p))` and
    /// `position_part = n * sum_p d(M(p), p)`.
    pub fn cost_of_matching(&self, matching: &Matching) -> Result<CostBreakdown> {
        self.check_matching(matching)?;
        let mut voter_part = 0.0;
        for v in 0..self.n_voters {
            for p in 0..self.positions.len() {
                voter_part += self.voter_candidate(v, matching.candidate_for(p));
            }
        }
        let mut per_position = 0.0;
        for p in 0..self.positions.len() {
            per_position += self.candidate_position(matching.candidate_for(p), p);
        }
        let position_part = self.n_voters as f64 * per_position;
        Ok(CostBreakdown {
            total: voter_part + position_part,
            voter_part,
            position_part,
        })
    }

    pub fn check_matching(&self, matching: &Matching) -> Result<()> {
        if matching.len() != self.positions.len() {
            return Err(Error::InvalidArgument(format!(
                "matching covers {} positions, instance has {}",
                matching.len(),
                self.positions.len()
            )));
        }
        let mut seen = vec![false; self.m_candidates];
        for &c in matching.assignment() {
            if c >= self.m_candidates {
                return Err(Error::InvalidArgument(format!(
                    "matching refers to candidate {c}, instance has {}",
                    self.m_candidates
                )));
            }
            if seen[c] {
                return Err(Error::InvalidArgument(format!(
                    "matching assigns candidate {c} twice"
                )));
            }
            seen[c] = true;
        }
        Ok(())
    }

    /// Checks the metric axioms over all base points. Violations are report
    /// entries, not failures; informational oddities (e.g. a set position
    /// containing a voter or candidate) go into `notes`.
    pub fn validate_metric(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.n_base_points();
        for i in 0..n {
            let dii = self.base_dist(i, i);
            if dii != 0.0 {
                report.violations.push(MetricViolation::NonzeroSelfDistance {
                    point: i,
                    value: dii,
                });
            }
            for j in (i + 1)..n {
                let dij = self.base_dist(i, j);
                let dji = self.base_dist(j, i);
                if !approx_eq(dij, dji) {
                    report.violations.push(MetricViolation::Asymmetry {
                        a: i,
                        b: j,
                        forward: dij,
                        backward: dji,
                    });
                }
                if dij < 0.0 {
                    report.violations.push(MetricViolation::NegativeDistance {
                        a: i,
                        b: j,
                        value: dij,
                    });
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let direct = self.base_dist(a, b);
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let through = self.base_dist(a, c) + self.base_dist(c, b);
                    if !approx_le(direct, through) {
                        report.violations.push(MetricViolation::Triangle {
                            a,
                            b,
                            c,
                            direct,
                            through,
                        });
                    }
                }
            }
        }
        for (p, spec) in self.positions.iter().enumerate() {
            for &member in spec.members() {
                if member < self.n_voters {
                    report.notes.push(format!(
                        "position {p} includes voter point {member} as a member"
                    ));
                } else if member < self.n_voters + self.m_candidates {
                    report.notes.push(format!(
                        "position {p} includes candidate point {} as a member",
                        member - self.n_voters
                    ));
                }
            }
        }
        report
    }

    /// Line embedding for two-candidate single-position instances.
    ///
    /// Maps candidate A to 0, B to `d(A,B)`, and every voter `j` (and the
    /// position) to `d(j,A) - z(j)` where
    /// `z(x) = (d(x,A) + d(x,B) - d(A,B)) / 2`. The embedded instance keeps
    /// every ordinal preference, places all points inside `[0, d(A,B)]`,
    /// and can only increase the per-winner distortion ratio.
    pub fn line_embed_two_candidates(&self) -> Result<MetricInstance> {
        if self.m_candidates != 2 || self.positions.len() != 1 {
            return Err(Error::InvalidArgument(
                "line embedding needs exactly 2 candidates and 1 position".into(),
            ));
        }
        if !self.positions[0].is_singleton() {
            return Err(Error::InvalidArgument(
                "line embedding needs a point position, not a set".into(),
            ));
        }
        let a = self.candidate_base(0);
        let b = self.candidate_base(1);
        let d_ab = self.base_dist(a, b);
        let zeta = |x: usize| 0.5 * (self.base_dist(x, a) + self.base_dist(x, b) - d_ab);
        let embed = |x: usize| self.base_dist(x, a) - zeta(x);

        let mut coords: Vec<Vec<f64>> = Vec::with_capacity(self.n_voters + 3);
        for v in 0..self.n_voters {
            coords.push(vec![embed(self.voter_base(v))]);
        }
        coords.push(vec![0.0]);
        coords.push(vec![d_ab]);
        coords.push(vec![embed(self.positions[0].members()[0])]);

        let site_base = self.n_voters + 2;
        MetricInstance::from_coords(
            self.n_voters,
            2,
            vec![PositionSpec::singleton(site_base)],
            &coords,
            format!("{}|line-embed", self.label),
        )
    }

    /// Serializes to the JSON instance format (always via a full distance
    /// matrix so set positions and non-Euclidean tables round-trip).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from_instance(self))
            .expect("instance serialization cannot fail")
    }

    /// Parses the JSON instance format (see [`InstanceFile`]).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_instance()
    }
}

/// Ratio `cost(M) / cost(best)` over the instance's own metric, for callers
/// that already know the optimum; see `exact::empirical_distortion` for the
/// oracle-backed version.
pub fn ratio_against(instance: &MetricInstance, m: &Matching, best: &Matching) -> Result<f64> {
    let num = instance.cost_of_matching(m)?.total;
    let den = instance.cost_of_matching(best)?.total;
    Ok(cost_ratio(num, den))
}

#[derive(Debug, Serialize, Deserialize)]
struct RosterPoint {
    kind: PointKind,
    index: usize,
}

/// On-disk instance format. Exactly one of `coords` / `distance_matrix`
/// must be present; `distance_matrix` is the strict upper triangle in
/// row-major roster order, `positions` holds indices into `points`.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    #[serde(default)]
    label: String,
    n_voters: usize,
    candidates: usize,
    points: Vec<RosterPoint>,
    positions: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_matrix: Option<Vec<f64>>,
}

impl InstanceFile {
    fn from_instance(instance: &MetricInstance) -> Self {
        let mut points = Vec::with_capacity(instance.n_base_points());
        for v in 0..instance.n_voters() {
            points.push(RosterPoint { kind: PointKind::Voter, index: v });
        }
        for c in 0..instance.m_candidates() {
            points.push(RosterPoint { kind: PointKind::Candidate, index: c });
        }
        for s in 0..instance.n_sites() {
            points.push(RosterPoint { kind: PointKind::Position, index: s });
        }
        let n = instance.n_base_points();
        let mut upper = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                upper.push(instance.base_dist(i, j));
            }
        }
        InstanceFile {
            label: instance.label().to_string(),
            n_voters: instance.n_voters(),
            candidates: instance.m_candidates(),
            points,
            positions: instance
                .positions()
                .iter()
                .map(|spec| spec.members().to_vec())
                .collect(),
            coords: None,
            distance_matrix: Some(upper),
        }
    }

    fn into_instance(self) -> Result<MetricInstance> {
        let n_roster = self.points.len();
        let n_sites = self
            .points
            .iter()
            .filter(|p| p.kind == PointKind::Position)
            .count();
        let expected = self.n_voters + self.candidates + n_sites;
        if n_roster != expected {
            return Err(Error::Parse(format!(
                "roster has {n_roster} points, expected {expected} from counts"
            )));
        }
        // Map roster order to the canonical layout, checking each kind is
        // indexed 0..count exactly once.
        let mut remap = vec![usize::MAX; n_roster];
        let mut seen_v = vec![false; self.n_voters];
        let mut seen_c = vec![false; self.candidates];
        let mut seen_s = vec![false; n_sites];
        for (roster_idx, point) in self.points.iter().enumerate() {
            let (seen, offset, count) = match point.kind {
                PointKind::Voter => (&mut seen_v, 0, self.n_voters),
                PointKind::Candidate => (&mut seen_c, self.n_voters, self.candidates),
                PointKind::Position => (&mut seen_s, self.n_voters + self.candidates, n_sites),
            };
            if point.index >= count {
                return Err(Error::Parse(format!(
                    "{:?} index {} out of range", point.kind, point.index
                )));
            }
            if seen[point.index] {
                return Err(Error::Parse(format!(
                    "duplicate {:?} index {}", point.kind, point.index
                )));
            }
            seen[point.index] = true;
            remap[roster_idx] = offset + point.index;
        }

        let positions = self
            .positions
            .iter()
            .map(|members| {
                let mapped = members
                    .iter()
                    .map(|&r| {
                        remap
                            .get(r)
                            .copied()
                            .ok_or_else(|| Error::Parse(format!("position ref {r} out of range")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PositionSpec::new(mapped)
            })
            .collect::<Result<Vec<_>>>()?;

        match (self.coords, self.distance_matrix) {
            (Some(coords), None) => {
                if coords.len() != n_roster {
                    return Err(Error::Parse("coords length does not match roster".into()));
                }
                if coords.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::Parse("coords must be finite".into()));
                }
                // Reorder coordinate rows into canonical layout.
                let mut canonical = vec![Vec::new(); n_roster];
                for (roster_idx, row) in coords.into_iter().enumerate() {
                    canonical[remap[roster_idx]] = row;
                }
                MetricInstance::from_coords(
                    self.n_voters,
                    self.candidates,
                    positions,
                    &canonical,
                    self.label,
                )
            }
            (None, Some(upper)) => {
                if upper.len() != n_roster * (n_roster - 1) / 2 {
                    return Err(Error::Parse(format!(
                        "distance matrix has {} entries, expected {}",
                        upper.len(),
                        n_roster * (n_roster - 1) / 2
                    )));
                }
                if upper.iter().any(|d| !d.is_finite() || *d < 0.0) {
                    return Err(Error::Parse(
                        "distance matrix entries must be finite and nonnegative".into(),
                    ));
                }
                let mut table = vec![0.0; n_roster * n_roster];
                let mut it = upper.into_iter();
                for i in 0..n_roster {
                    for j in (i + 1)..n_roster {
                        let d = it.next().unwrap();
                        let (ci, cj) = (remap[i], remap[j]);
                        table[ci * n_roster + cj] = d;
                        table[cj * n_roster + ci] = d;
                    }
                }
                MetricInstance::from_distance_table(
                    self.n_voters,
                    self.candidates,
                    n_sites,
                    positions,
                    table,
                    self.label,
                )
            }
            (Some(_), Some(_)) => Err(Error::Parse(
                "exactly one of coords/distance_matrix may be present, got both".into(),
            )),
            (None, None) => Err(Error::Parse(
                "one of coords/distance_matrix must be present".into(),
            )),
        }
    }
}
