//! Profile curves `DΛ^p(n) = inf{|Γ|·Dh^p(Γ) : |VΓ| ≥ n}` and
//! `D*Λ^p(n)`, plus the quasi-isometry transport and coset decomposition.

mod compare;
mod coset;
mod search;
mod sup;
mod transport;

pub use compare::{compare_curves, BandReport, MAX_BAND_EXPONENT};
pub use coset::{coset_decompose, CosetDecomposition, Piece, PieceCheck};
pub(crate) use search::connected_sets_rooted;
pub use search::{bfs_hull, random_connected_from, random_connected_subgraph};
pub use sup::{sup_profile, sup_witness};
pub use transport::{qi_transport, transport_bounds, Transported};

use rayon::prelude::*;
use serde::Serialize;

use crate::generators::FolnerPair;
use crate::graph::{AmbientWindow, GradientKind, Lp, Subgraph, Value, VertexFunction, VertexId};
use crate::solvers::{dh_infinity, dh_one_exact, dh_p_descent_with, ConstantResult, DescentOptions, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMode {
    /// Exact over the strategy's complete search space.
    Exact,
    UpperBound,
    LowerBound,
    /// No admissible witness was found.
    Unattained,
}

impl PointMode {
    pub fn name(self) -> &'static str {
        match self {
            PointMode::Exact => "exact",
            PointMode::UpperBound => "upper_bound",
            PointMode::LowerBound => "lower_bound",
            PointMode::Unattained => "unattained",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    pub n: usize,
    pub value: Value,
    pub mode: PointMode,
    /// Index into [`ProfileCurve::witnesses`].
    pub witness: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ProfileCurve {
    pub window: String,
    pub p: Lp,
    pub strategy: String,
    pub points: Vec<ProfilePoint>,
    /// Witness vertex sets (window ids); padded points reuse the witness
    /// they extend.
    pub witnesses: Vec<Vec<VertexId>>,
}

impl ProfileCurve {
    pub fn point(&self, n: usize) -> Option<&ProfilePoint> {
        self.points.binary_search_by_key(&n, |q| q.n).ok().map(|i| &self.points[i])
    }

    pub fn witness_size(&self, point: &ProfilePoint) -> usize {
        point.witness.map_or(0, |i| self.witnesses[i].len())
    }

    /// `(n, value)` for the points with a finite value.
    pub fn samples(&self) -> Vec<(u64, f64)> {
        self.points.iter().filter_map(|q| q.value.finite().map(|v| (q.n as u64, v))).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    /// A witness at every size.
    All,
    /// Sizes growing by the given factor, plus every ball cardinality.
    Geometric(f64),
}

#[derive(Clone, Debug)]
pub enum SearchStrategy {
    /// All connected induced trusted subgraphs with at most `max_vertices`
    /// vertices, up to `max_subgraphs` of them. With `transitive`, only
    /// sets through the basepoint are listed.
    Exhaustive {
        max_vertices: usize,
        max_subgraphs: usize,
        transitive: bool,
    },
    /// BFS hulls around the basepoint, up to `max_witness` vertices.
    BallFamily {
        schedule: Schedule,
        max_witness: usize,
    },
    /// Controlled Følner pairs with tent certificates on `H′_m`, padded to
    /// all sizes by nesting.
    Folner(Vec<FolnerPair>),
    UserSets(Vec<Vec<VertexId>>),
}

impl SearchStrategy {
    pub fn exhaustive(max_vertices: usize) -> Self {
        SearchStrategy::Exhaustive { max_vertices, max_subgraphs: 200_000, transitive: true }
    }

    pub fn balls(max_witness: usize) -> Self {
        SearchStrategy::BallFamily { schedule: Schedule::All, max_witness }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SearchStrategy::Exhaustive { .. } => "exhaustive",
            SearchStrategy::BallFamily { .. } => "ball_family",
            SearchStrategy::Folner(_) => "folner_family",
            SearchStrategy::UserSets(_) => "user_sets",
        }
    }
}

/// When a witness gets a real solver and when it only gets cheap
/// certificates.
#[derive(Clone, Debug)]
pub struct EvalLimits {
    pub lp_max_vertices: usize,
    pub descent_max_free: usize,
    pub descent_iterations: u64,
    pub seed: u64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        Self { lp_max_vertices: 400, descent_max_free: 40, descent_iterations: 20_000, seed: 0x5eed }
    }
}

/// `Dh^p` of one witness. Small witnesses go to the solvers; large ones get
/// the best of the cheap certificates, reported as an upper bound.
pub fn evaluate_witness(g: &Subgraph<'_>, p: Lp, limits: &EvalLimits) -> crate::Result<ConstantResult> {
    if g.free_count() == 0 {
        return Ok(ConstantResult::infinite(p));
    }
    match p {
        Lp::Infinity => dh_infinity(g),
        _ if p.is_one() && g.len() <= limits.lp_max_vertices => dh_one_exact(g),
        _ if !p.is_one() && g.free_count() <= limits.descent_max_free => {
            let warm = cheap_certificates(g).into_iter().map(VertexFunction::into_values).collect();
            let opts = DescentOptions {
                max_iterations: limits.descent_iterations,
                seed: limits.seed,
                warm_starts: warm,
                ..DescentOptions::default()
            };
            dh_p_descent_with(g, p, &opts)
        }
        _ => Ok(best_cheap(g, p)),
    }
}

/// Distance-to-complement functions truncated at every height, and the
/// indicators of their level sets.
pub fn cheap_certificates(g: &Subgraph<'_>) -> Vec<VertexFunction> {
    let Ok(dist) = g.distance_to_complement() else {
        return Vec::new();
    };
    let depth: Vec<f64> = dist.iter().map(|&d| d.saturating_sub(1) as f64).collect();
    let top = depth.iter().copied().fold(0.0, f64::max) as u32;
    let mut out = Vec::new();
    for h in 1..=top {
        let h = h as f64;
        out.push(VertexFunction::from_raw(depth.iter().map(|&d| d.min(h)).collect()));
        out.push(VertexFunction::from_raw(depth.iter().map(|&d| if d >= h { 1.0 } else { 0.0 }).collect()));
    }
    out
}

fn best_cheap(g: &Subgraph<'_>, p: Lp) -> ConstantResult {
    let op = crate::graph::GradientOperator::new(g, GradientKind::Edge);
    let best = cheap_certificates(g)
        .into_iter()
        .filter_map(|f| op.quotient(f.values(), p).map(|q| (q, f)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("a trusted subgraph with a free vertex has depth ≥ 1");
    ConstantResult {
        p,
        value: Value::Finite(best.0),
        certificate: Some(best.1),
        mode: Mode::UpperBound,
        solver: "cheap-certificates",
        stats: Default::default(),
    }
}

/// One evaluated witness: `|Γ|·Dh^p(Γ)`, whether it is exact, and its set.
struct Evaluated {
    size: usize,
    value: Value,
    exact: bool,
    /// `Dh^p` itself; used for nesting padding.
    constant: Value,
}

/// The DΛ^p curve on `1..=n_max` from one search strategy.
pub fn dirichlet_profile(
    w: &AmbientWindow,
    p: Lp,
    strategy: &SearchStrategy,
    n_max: usize,
) -> crate::Result<ProfileCurve> {
    dirichlet_profile_with(w, p, strategy, n_max, &EvalLimits::default())
}

pub fn dirichlet_profile_with(
    w: &AmbientWindow,
    p: Lp,
    strategy: &SearchStrategy,
    n_max: usize,
    limits: &EvalLimits,
) -> crate::Result<ProfileCurve> {
    let mut complete = false;
    let mut pad = false;
    let witnesses: Vec<Vec<VertexId>> = match strategy {
        SearchStrategy::Exhaustive { max_vertices, max_subgraphs, transitive } => {
            let (sets, done) = exhaustive_sets(w, *max_vertices, *max_subgraphs, *transitive);
            complete = done;
            sets
        }
        SearchStrategy::BallFamily { schedule, max_witness } => {
            let ceiling = (*max_witness).min(w.trusted_vertices().count());
            let sizes = schedule_sizes(w, schedule, n_max.min(ceiling), ceiling);
            let order: Vec<VertexId> = w.bfs_order().into_iter().filter(|&v| w.frontier_distance(v) >= 1).collect();
            sizes.into_iter().map(|s| order[..s].to_vec()).collect()
        }
        SearchStrategy::Folner(pairs) => {
            pad = true;
            pairs.iter().map(|pair| pair.outer.clone()).collect()
        }
        SearchStrategy::UserSets(sets) => sets.clone(),
    };

    let evaluated: Vec<Option<Evaluated>> = witnesses
        .par_iter()
        .map(|set| {
            let g = match Subgraph::induced(w, set.iter().copied()) {
                Ok(g) if g.is_trusted() => g,
                _ => return None,
            };
            let result = match strategy {
                SearchStrategy::Folner(pairs) => {
                    let pair = pairs.iter().find(|q| &q.outer == set)?;
                    crate::isoperimetry::tent_result(&g, pair, p)
                }
                _ => evaluate_witness(&g, p, limits),
            };
            match result {
                Ok(r) => Some(Evaluated {
                    size: g.len(),
                    value: r.value.scale(g.len() as f64),
                    exact: r.is_exact(),
                    constant: r.value,
                }),
                Err(e) => {
                    log::warn!("witness of size {} skipped: {e}", set.len());
                    None
                }
            }
        })
        .collect();

    Ok(assemble(w.label(), p, strategy.name(), n_max, witnesses, evaluated, complete, pad))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    label: &str,
    p: Lp,
    strategy: &str,
    n_max: usize,
    witnesses: Vec<Vec<VertexId>>,
    evaluated: Vec<Option<Evaluated>>,
    complete: bool,
    pad: bool,
) -> ProfileCurve {
    // For each n: the best witness with |Γ| ≥ n; ties go to the earlier witness.
    let mut best_at = vec![None::<(Value, usize, bool)>; n_max + 2];
    for (i, e) in evaluated.iter().enumerate() {
        if let Some(e) = e {
            let s = e.size.min(n_max + 1);
            if e.value == Value::Infinite {
                continue;
            }
            let slot = &mut best_at[s];
            if slot.is_none_or(|(v, _, _)| e.value < v) {
                *slot = Some((e.value, i, e.exact));
            }
        }
    }
    let mut rows = Vec::with_capacity(n_max);
    let mut suffix: Option<(Value, usize, bool)> = best_at[n_max + 1];
    for n in (1..=n_max).rev() {
        if let Some(cand) = best_at[n] {
            if suffix.is_none_or(|(v, i, _)| cand.0 < v || (cand.0 == v && cand.1 < i)) {
                suffix = Some(cand);
            }
        }
        rows.push((n, suffix));
    }
    rows.reverse();
    // A point is exact only if every witness of size ≥ n was solved exactly.
    let mut exact_at = vec![true; n_max + 2];
    for e in evaluated.iter().flatten() {
        exact_at[e.size.min(n_max + 1)] &= e.exact;
    }
    let mut exact_from = exact_at.clone();
    for n in (1..=n_max).rev() {
        exact_from[n] = exact_at[n] && exact_from[n + 1];
    }
    let mut points = Vec::with_capacity(n_max);
    for (n, best) in rows {
        let mut point = match best {
            Some((value, i, _)) => ProfilePoint {
                n,
                value,
                mode: if complete && exact_from[n] { PointMode::Exact } else { PointMode::UpperBound },
                witness: Some(i),
            },
            None => ProfilePoint { n, value: Value::Infinite, mode: PointMode::Unattained, witness: None },
        };
        if pad {
            // Nesting: any Γ ⊇ H′ with |Γ| = n has Dh ≤ Dh(H′), so n·Dh(H′) bounds DΛ(n).
            for (i, e) in evaluated.iter().enumerate() {
                if let Some(e) = e {
                    if e.size <= n {
                        let padded = e.constant.scale(n as f64);
                        if padded < point.value {
                            point = ProfilePoint { n, value: padded, mode: PointMode::UpperBound, witness: Some(i) };
                        }
                    }
                }
            }
        }
        points.push(point);
    }
    ProfileCurve { window: label.to_string(), p, strategy: strategy.to_string(), points, witnesses }
}

fn exhaustive_sets(
    w: &AmbientWindow,
    max_vertices: usize,
    max_subgraphs: usize,
    transitive: bool,
) -> (Vec<Vec<VertexId>>, bool) {
    let trusted = |v: VertexId| w.frontier_distance(v) >= 1;
    let roots: Vec<VertexId> = if transitive { vec![w.origin()] } else { w.trusted_vertices().collect() };
    let mut sets = Vec::new();
    let mut complete = true;
    for root in roots {
        let finished = connected_sets_rooted(w, root, max_vertices, &trusted, &mut |s| {
            if sets.len() >= max_subgraphs {
                return false;
            }
            let mut s = s.to_vec();
            s.sort_unstable();
            sets.push(s);
            true
        });
        if !finished {
            complete = false;
            break;
        }
    }
    if transitive && w.origin() != 0 {
        // Rooted enumeration lists sets whose smallest id is the root.
        complete = false;
    }
    (sets, complete)
}

/// Ball-family witness sizes up to `top`; sizes are capped at `ceiling`.
fn schedule_sizes(w: &AmbientWindow, schedule: &Schedule, top: usize, ceiling: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = match schedule {
        Schedule::All => (1..=top).collect(),
        Schedule::Geometric(factor) => {
            assert!(*factor > 1.0);
            let mut out = Vec::new();
            let mut s = 1.0f64;
            while (s as usize) <= top {
                out.push(s as usize);
                s = (s * factor).max(s + 1.0);
            }
            out.push(top);
            let mut r = 0;
            loop {
                let ball = w.ball(w.origin(), r).len();
                if ball > ceiling {
                    break;
                }
                out.push(ball);
                r += 1;
                if r > w.radius() {
                    break;
                }
            }
            // The first witness at or beyond `top` keeps DΛ(top) attainable.
            out.push((top as f64 * factor).ceil().min(ceiling as f64) as usize);
            out
        }
    };
    sizes.retain(|&s| s >= 1 && s <= ceiling);
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn z1_infinity_profile_is_about_two() {
        let w = cayley_window(GroupPreset::Lattice(1), 40, DEFAULT_VERTEX_BUDGET).unwrap();
        let c = dirichlet_profile(&w, Lp::Infinity, &SearchStrategy::balls(60), 60).unwrap();
        // An interval of m vertices has inradius ⌊(m − 1)/2⌋.
        for q in &c.points[..50] {
            let v = q.value.finite().unwrap();
            assert!((2.0..=3.0 + 1e-12).contains(&v) || q.n < 5, "n={} v={v}", q.n);
        }
        assert_eq!(c.point(60).unwrap().value, Value::Finite(60.0 / 29.0));
    }

    #[test]
    fn exhaustive_curve_is_nondecreasing_and_exact() {
        let w = cayley_window(GroupPreset::Lattice(2), 8, DEFAULT_VERTEX_BUDGET).unwrap();
        let c = dirichlet_profile(&w, Lp::ONE, &SearchStrategy::exhaustive(7), 7).unwrap();
        let vals: Vec<Value> = c.points.iter().map(|q| q.value).collect();
        assert!(vals.windows(2).all(|v| v[0] <= v[1]));
        assert!(c.points.iter().all(|q| q.mode == PointMode::Exact));
        // Five vertices suffice for one free vertex: the plus shape gives 5·5.
        assert_eq!(c.point(1).unwrap().value, Value::Finite(25.0));
        assert_eq!(c.witness_size(c.point(5).unwrap()), 5);
    }

    #[test]
    fn geometric_schedule_includes_balls() {
        let w = cayley_window(GroupPreset::Lattice(2), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let sizes = schedule_sizes(&w, &Schedule::Geometric(1.5), 100, 181);
        for b in [1, 5, 13, 25, 41, 61, 85, 113, 145, 181] {
            assert!(sizes.contains(&b), "{b}");
        }
        assert!(sizes.windows(2).all(|s| s[0] < s[1]));
    }
}
