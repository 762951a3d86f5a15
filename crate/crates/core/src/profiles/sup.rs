use crate::error::{Error, Result};
use crate::graph::{AmbientWindow, Lp, Subgraph, Value, VertexId};
use crate::solvers::dirichlet_constant;

use super::{PointMode, ProfileCurve, ProfilePoint};

/// A subgraph of `n` vertices with exactly one free vertex `v` of maximal
/// degree: `B(v, 1)` plus pairwise non-adjacent vertices at distance ≥ 3
/// from `v`, each of which keeps a neighbour outside. `None` when `n` is
/// below `d + 1` or the window cannot hold the extra vertices.
pub fn sup_witness(w: &AmbientWindow, n: usize) -> Option<Vec<VertexId>> {
    let d = w.max_degree();
    if n < d + 1 {
        return None;
    }
    let center = w.bfs_order().into_iter().find(|&v| w.degree(v) == d && w.frontier_distance(v) >= 2)?;
    let mut set: Vec<VertexId> = w.ball(center, 1);
    let dist = w.bfs_from(&[center], None);
    let mut blocked: Vec<bool> = dist.iter().map(|&d| d <= 2).collect();
    let mut order: Vec<VertexId> = (0..w.len()).filter(|&v| dist[v] >= 3).collect();
    order.sort_by_key(|&v| (dist[v], v));
    for v in order {
        if set.len() == n {
            break;
        }
        if blocked[v] || w.frontier_distance(v) < 1 {
            continue;
        }
        set.push(v);
        blocked[v] = true;
        for &u in w.neighbors(v) {
            blocked[u] = true;
        }
    }
    (set.len() == n).then(|| {
        set.sort_unstable();
        set
    })
}

/// `D*Λ^p(n) = sup{|Γ|·Dh^p(Γ) : ∂_XΓ ≠ VΓ, |VΓ| ≤ n}` on `1..=n_max`.
///
/// Every admissible `Γ` has `Dh^p(Γ) ≤ (d + 1)^{1/p}` (the indicator of a
/// free vertex), and [`sup_witness`] attains it at every `n ≥ d + 1`; its
/// constant is recomputed by the solver rather than taken from the formula.
/// Below `d + 1` no subgraph has a free vertex on a `d`-regular window, so
/// those points are unattained (value 0, the supremum of the empty set in
/// `[0, ∞]`); on irregular graphs they carry the universal bound as an
/// upper bound.
pub fn sup_profile(w: &AmbientWindow, p: Lp, n_max: usize) -> Result<ProfileCurve> {
    let d = w.max_degree() as f64;
    let per_vertex = match p {
        Lp::Infinity => 1.0,
        Lp::Finite(e) => (d + 1.0).powf(1.0 / e),
    };
    let mut points = Vec::with_capacity(n_max);
    let mut witnesses = Vec::new();
    let regular = (0..w.len()).filter(|&v| w.frontier_distance(v) >= 1).all(|v| w.degree(v) == w.max_degree());
    for n in 1..=n_max {
        match sup_witness(w, n) {
            Some(set) => {
                let g = Subgraph::induced(w, set.iter().copied())?;
                let r = dirichlet_constant(&g, p)?;
                let value = r.value.scale(n as f64);
                let bound = per_vertex * n as f64;
                let exact = r.is_exact() && value.finite().is_some_and(|v| (v - bound).abs() <= 1e-12 * bound);
                witnesses.push(set);
                points.push(ProfilePoint {
                    n,
                    value,
                    mode: if exact { PointMode::Exact } else { PointMode::LowerBound },
                    witness: Some(witnesses.len() - 1),
                });
            }
            None if n < w.max_degree() + 1 => points.push(ProfilePoint {
                n,
                value: if regular { Value::Finite(0.0) } else { Value::Finite(per_vertex * n as f64) },
                mode: if regular { PointMode::Unattained } else { PointMode::UpperBound },
                witness: None,
            }),
            None => return Err(Error::MarginViolation { margin: w.radius().saturating_sub(1), required: n as u32 }),
        }
    }
    Ok(ProfileCurve { window: w.label().to_string(), p, strategy: "sup_witness_chain".into(), points, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn z1_values() {
        let w = cayley_window(GroupPreset::Lattice(1), 40, DEFAULT_VERTEX_BUDGET).unwrap();
        let c1 = sup_profile(&w, Lp::ONE, 10).unwrap();
        assert_eq!(c1.point(10).unwrap().value, Value::Finite(30.0));
        assert_eq!(c1.point(10).unwrap().mode, PointMode::Exact);
        let ci = sup_profile(&w, Lp::Infinity, 10).unwrap();
        assert_eq!(ci.point(10).unwrap().value, Value::Finite(10.0));
        assert_eq!(ci.point(2).unwrap().mode, PointMode::Unattained);
    }

    #[test]
    fn tree_at_five() {
        let w = cayley_window(GroupPreset::Free2, 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let c = sup_profile(&w, Lp::TWO, 8).unwrap();
        let v = c.point(5).unwrap().value.finite().unwrap();
        assert!((v - 5.0 * 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.point(4).unwrap().mode, PointMode::Unattained);
        let g = Subgraph::induced(&w, sup_witness(&w, 8).unwrap()).unwrap();
        assert_eq!(g.free_count(), 1);
    }

    #[test]
    fn too_small_window() {
        let w = cayley_window(GroupPreset::Lattice(1), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(matches!(sup_profile(&w, Lp::ONE, 30), Err(Error::MarginViolation { .. })));
    }
}
