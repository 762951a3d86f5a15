//! Vertex-boundary isoperimetry: Cheeger ratios, Følner functions, growth,
//! Følner-pair certificates and the pseudo-Poincaré averaging ratio.

mod growth;
mod pairs;
mod poincare;

pub use growth::{growth_curves, GrowthCurves, IsoCurve, IsoKind};
pub use pairs::{folner_pair_bound, pair_sandwich, tent_function, tent_result, PairSandwich};
pub use poincare::pseudo_poincare_ratio;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{AmbientWindow, Subgraph, VertexId};
use crate::profiles::{bfs_hull, connected_sets_rooted, PointMode};

/// `|∂_XΓ| / |VΓ|` kept as a pair of integers.
#[derive(Clone, Copy, Debug, Eq, Serialize)]
pub struct BoundaryRatio {
    pub boundary: usize,
    pub size: usize,
}

impl BoundaryRatio {
    pub fn value(self) -> f64 {
        self.boundary as f64 / self.size as f64
    }

    /// The ratio in lowest terms.
    pub fn reduced(self) -> (usize, usize) {
        let g = gcd(self.boundary, self.size).max(1);
        (self.boundary / g, self.size / g)
    }

    /// `|∂Γ|/|Γ| ≤ 1/n`.
    pub fn at_most_reciprocal(self, n: usize) -> bool {
        (self.boundary as u128) * (n as u128) <= self.size as u128
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialEq for BoundaryRatio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Ord for BoundaryRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.boundary as u128 * other.size as u128).cmp(&(other.boundary as u128 * self.size as u128))
    }
}

impl PartialOrd for BoundaryRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoundaryRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.reduced();
        write!(f, "{a}/{b}")
    }
}

pub fn boundary_ratio(g: &Subgraph<'_>) -> Result<BoundaryRatio> {
    g.require_trusted()?;
    Ok(BoundaryRatio { boundary: g.boundary_len(), size: g.len() })
}

/// Boundary ratio of a vertex set, or `None` if it is not trusted.
fn set_ratio(w: &AmbientWindow, set: &[VertexId]) -> Option<BoundaryRatio> {
    let g = Subgraph::induced(w, set.iter().copied()).ok()?;
    boundary_ratio(&g).ok()
}

/// Where isoperimetric witnesses come from.
#[derive(Clone, Debug)]
pub struct WitnessBudget {
    /// Connected sets through the basepoint up to this size (0 disables).
    pub exhaustive_vertices: usize,
    pub max_subgraphs: usize,
    /// BFS hulls up to this size.
    pub hull_max: usize,
    pub user_sets: Vec<Vec<VertexId>>,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        Self { exhaustive_vertices: 12, max_subgraphs: 200_000, hull_max: usize::MAX, user_sets: Vec::new() }
    }
}

/// A witness set with its ratio.
#[derive(Clone, Debug)]
pub struct RatioWitness {
    pub ratio: BoundaryRatio,
    pub set: Vec<VertexId>,
}

/// All trusted witnesses of a budget, and whether the exhaustive part ran
/// to completion. Sets through the basepoint stand for all sets on
/// vertex-transitive windows.
pub fn ratio_witnesses(w: &AmbientWindow, budget: &WitnessBudget) -> (Vec<RatioWitness>, bool) {
    let mut out = Vec::new();
    let mut complete = budget.exhaustive_vertices > 0;
    if budget.exhaustive_vertices > 0 {
        let trusted = |v: VertexId| w.frontier_distance(v) >= 1;
        let mut count = 0usize;
        let finished = connected_sets_rooted(w, w.origin(), budget.exhaustive_vertices, &trusted, &mut |s| {
            if count >= budget.max_subgraphs {
                return false;
            }
            count += 1;
            let mut s = s.to_vec();
            s.sort_unstable();
            if let Some(ratio) = set_ratio(w, &s) {
                out.push(RatioWitness { ratio, set: s });
            }
            true
        });
        complete = finished && w.origin() == 0;
    }
    let trusted_count = w.trusted_vertices().count();
    for n in 1..=budget.hull_max.min(trusted_count) {
        if let Some(set) = bfs_hull(w, n) {
            if let Some(ratio) = set_ratio(w, &set) {
                out.push(RatioWitness { ratio, set });
            }
        }
    }
    for set in &budget.user_sets {
        let mut set = set.clone();
        set.sort_unstable();
        set.dedup();
        if let Some(ratio) = set_ratio(w, &set) {
            out.push(RatioWitness { ratio, set });
        }
    }
    (out, complete)
}

/// Smallest boundary ratio among the budget's witnesses: an upper bound
/// on `h(X)`. Ties go to the smaller set.
pub fn cheeger_estimate(w: &AmbientWindow, budget: &WitnessBudget) -> Option<RatioWitness> {
    let (all, _) = ratio_witnesses(w, budget);
    all.into_iter().min_by(|a, b| a.ratio.cmp(&b.ratio).then(a.set.len().cmp(&b.set.len())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FolnerValue {
    pub n: usize,
    /// `None` when no witness qualifies.
    pub size: Option<usize>,
    pub mode: PointMode,
    pub witness: Option<Vec<VertexId>>,
}

/// `F(n) = min{|Γ| : |∂_XΓ|/|Γ| ≤ 1/n}` over the budget's witnesses.
///
/// Exact when the exhaustive part finished and found a qualifying set
/// within its size cap: disjoint non-adjacent pieces add their boundaries,
/// so a minimal witness is connected, and on a vertex-transitive window it
/// may be translated through the basepoint.
pub fn folner_function(w: &AmbientWindow, n: usize, budget: &WitnessBudget) -> FolnerValue {
    let (all, complete) = ratio_witnesses(w, budget);
    folner_from_witnesses(&all, complete, budget.exhaustive_vertices, n)
}

fn folner_from_witnesses(all: &[RatioWitness], complete: bool, cap: usize, n: usize) -> FolnerValue {
    let best = all.iter().filter(|r| r.ratio.at_most_reciprocal(n)).min_by_key(|r| r.set.len());
    match best {
        Some(r) => FolnerValue {
            n,
            size: Some(r.set.len()),
            mode: if complete && r.set.len() <= cap { PointMode::Exact } else { PointMode::UpperBound },
            witness: Some(r.set.clone()),
        },
        None => FolnerValue { n, size: None, mode: PointMode::Unattained, witness: None },
    }
}

/// `F` on `1..=n_max` and `F̲(m) = max{k : F(k) ≤ m}` on `1..=m_max` from
/// one witness scan.
///
/// A witness of size `s` qualifies for every `k ≤ ⌊s/|∂|⌋`, so `F̲(m)` is
/// the largest such threshold over witnesses of size `≤ m`. With upper
/// bounds on `F` this is a lower bound on `F̲`.
pub fn folner_curves(w: &AmbientWindow, n_max: usize, m_max: usize, budget: &WitnessBudget) -> (IsoCurve, IsoCurve) {
    let (all, complete) = ratio_witnesses(w, budget);
    let label = w.label().to_string();
    let forward: Vec<(u64, u64)> = (1..=n_max)
        .filter_map(|n| {
            folner_from_witnesses(&all, complete, budget.exhaustive_vertices, n).size.map(|s| (n as u64, s as u64))
        })
        .collect();
    let mut threshold_by_size = vec![0usize; m_max + 1];
    for r in &all {
        let s = r.set.len();
        if s <= m_max && r.ratio.boundary > 0 {
            let t = r.ratio.size / r.ratio.boundary;
            threshold_by_size[s] = threshold_by_size[s].max(t);
        }
    }
    let mut inverse = Vec::new();
    let mut best = 0;
    for m in 1..=m_max {
        best = best.max(threshold_by_size[m]);
        if best > 0 {
            inverse.push((m as u64, best as u64));
        }
    }
    (
        IsoCurve { kind: IsoKind::Folner, window: label.clone(), points: forward },
        IsoCurve { kind: IsoKind::InverseFolner, window: label, points: inverse },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn small_ratios() {
        let w = cayley_window(GroupPreset::Lattice(1), 20, DEFAULT_VERTEX_BUDGET).unwrap();
        for m in 1..8 {
            let g = Subgraph::induced(&w, (0..m).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap())).unwrap();
            let r = boundary_ratio(&g).unwrap();
            let expected = if m == 1 {
                BoundaryRatio { boundary: 1, size: 1 }
            } else {
                BoundaryRatio { boundary: 2, size: m as usize }
            };
            assert_eq!(r, expected);
        }
        let w2 = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w2, w2.lattice_box(&[3, 3]).unwrap()).unwrap();
        assert_eq!(boundary_ratio(&g).unwrap().to_string(), "8/9");
    }

    #[test]
    fn folner_on_z() {
        let w = cayley_window(GroupPreset::Lattice(1), 30, DEFAULT_VERTEX_BUDGET).unwrap();
        let budget = WitnessBudget::default();
        let f3 = folner_function(&w, 3, &budget);
        assert_eq!((f3.size, f3.mode), (Some(6), PointMode::Exact));
        // A single vertex is its own boundary: ratio 1 ≤ 1/1.
        assert_eq!(folner_function(&w, 1, &budget).size, Some(1));
        let est = cheeger_estimate(&w, &budget).unwrap();
        assert_eq!(est.ratio, BoundaryRatio { boundary: 2, size: w.trusted_vertices().count() });
    }

    #[test]
    fn inverse_is_consistent() {
        let w = cayley_window(GroupPreset::Lattice(2), 8, DEFAULT_VERTEX_BUDGET).unwrap();
        let budget = WitnessBudget { exhaustive_vertices: 8, ..WitnessBudget::default() };
        let (f, finv) = folner_curves(&w, 3, 60, &budget);
        let lookup = |c: &IsoCurve, x: u64| c.points.iter().find(|q| q.0 == x).map(|q| q.1);
        for &(k, fk) in &f.points {
            if let Some(back) = lookup(&finv, fk) {
                assert!(back >= k);
            }
        }
        assert!(finv.points.windows(2).all(|s| s[0].1 <= s[1].1));
    }

    #[test]
    fn tree_has_no_small_ratio() {
        let w = cayley_window(GroupPreset::Free2, 7, DEFAULT_VERTEX_BUDGET).unwrap();
        let budget = WitnessBudget { exhaustive_vertices: 9, ..WitnessBudget::default() };
        let est = cheeger_estimate(&w, &budget).unwrap();
        assert!(est.ratio.value() >= 0.3, "{}", est.ratio);
        assert_eq!(folner_function(&w, 4, &budget).mode, PointMode::Unattained);
    }
}
