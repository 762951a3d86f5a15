//! Tent certificates on controlled Følner pairs.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::generators::{folner_family, CayleyWindow, FolnerPair};
use crate::graph::{GradientOperator, Lp, Subgraph, Value, VertexFunction, UNREACHED};
use crate::profiles::{dirichlet_profile, ProfileCurve, SearchStrategy};
use crate::solvers::{ConstantResult, Mode};

use super::IsoCurve;

/// `f(v) = max{0, m − d_X(v, H_m)}` on the vertices of `g`, which must be
/// `H′_m` of `pair`. `f` vanishes off `N_{m−1}(H_m)`, hence on `∂_XH′_m`.
pub fn tent_function(g: &Subgraph<'_>, pair: &FolnerPair) -> Result<VertexFunction> {
    if g.vertices() != pair.outer.as_slice() {
        return Err(Error::InvalidSubgraph("tent needs the subgraph H′_m of its pair".into()));
    }
    let dist = g.window().bfs_from(&pair.inner, Some(pair.m));
    let values =
        g.vertices().iter().map(|&v| if dist[v] == UNREACHED { 0.0 } else { (pair.m - dist[v]) as f64 }).collect();
    VertexFunction::new(values)
}

/// The tent quotient on `H′_m`, recomputed from the function. An upper
/// bound on `Dh^p(H′_m)`.
pub fn tent_result(g: &Subgraph<'_>, pair: &FolnerPair, p: Lp) -> Result<ConstantResult> {
    let f = tent_function(g, pair)?;
    if !f.is_dirichlet_admissible(g) {
        return Err(Error::InvalidFunction("tent does not vanish on ∂_XH′_m".into()));
    }
    let q = GradientOperator::edge(g).quotient(f.values(), p).expect("tent is nonzero");
    Ok(ConstantResult {
        p,
        value: Value::Finite(q),
        certificate: Some(f),
        mode: Mode::UpperBound,
        solver: "folner-tent",
        stats: Default::default(),
    })
}

/// Upper-bound DΛ^p curve from the pairs at scales `m_range`, padded to
/// every `n` up to the largest `|H′_m|` by nesting.
pub fn folner_pair_bound(window: &CayleyWindow, p: Lp, m_range: RangeInclusive<u32>) -> Result<ProfileCurve> {
    let pairs = folner_family(window, m_range)?;
    let n_max = pairs.iter().map(|q| q.outer.len()).max().unwrap_or(0);
    dirichlet_profile(window, p, &SearchStrategy::Folner(pairs), n_max)
}

/// `m ≤ κ(n) ≤ C(m + 1)` at one `n`, where `m` is the largest scale with
/// `|H′_m| ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSandwich {
    pub n: u64,
    pub m: u32,
    pub kappa: u64,
    pub upper: f64,
    pub holds: bool,
}

/// Checks the sandwich at `n`. `pairs` must hold consecutive scales from
/// 1 and include the first scale with `|H′_m| > n`; `None` otherwise or if
/// `κ(n)` lies outside the window.
pub fn pair_sandwich(pairs: &[FolnerPair], kappa: &IsoCurve, n: u64) -> Option<PairSandwich> {
    if pairs.first()?.m != 1 || pairs.windows(2).any(|w| w[1].m != w[0].m + 1) {
        return None;
    }
    let next = pairs.iter().position(|q| q.outer.len() as u64 > n)?;
    let m = if next == 0 { 0 } else { pairs[next - 1].m };
    let k = kappa.get(n)?;
    let upper = pairs[next].constant * (m + 1) as f64;
    Some(PairSandwich { n, m, kappa: k, upper, holds: m as u64 <= k && k as f64 <= upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::isoperimetry::growth_curves;

    #[test]
    fn tent_on_z_interval() {
        let w = cayley_window(GroupPreset::Lattice(1), 40, DEFAULT_VERTEX_BUDGET).unwrap();
        let pairs = folner_family(&w, 3..=3).unwrap();
        let g = Subgraph::induced(&w, pairs[0].outer.iter().copied()).unwrap();
        let f = tent_function(&g, &pairs[0]).unwrap();
        // H_3 = [−3, 3], H′_3 = [−6, 6].
        let mut sorted = f.values().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, [0., 0., 1., 1., 2., 2., 3., 3., 3., 3., 3., 3., 3.]);
        // ∇f = 1 exactly at 3 ≤ |x| ≤ 6, and ‖f‖₁ = 27.
        let r = tent_result(&g, &pairs[0], Lp::ONE).unwrap();
        assert!((r.value.finite().unwrap() - 8.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn bound_holds_for_each_pair() {
        let w = cayley_window(GroupPreset::Lattice(2), 24, DEFAULT_VERTEX_BUDGET).unwrap();
        for pair in folner_family(&w, 1..=5).unwrap() {
            let g = Subgraph::induced(&w, pair.outer.iter().copied()).unwrap();
            for p in [1.0, 2.0] {
                let r = tent_result(&g, &pair, Lp::finite(p)).unwrap();
                let bound = 2.0 * (pair.outer.len() as f64 / pair.inner.len() as f64).powf(1.0 / p) / pair.m as f64;
                assert!(r.value.finite().unwrap() <= bound);
            }
        }
    }

    #[test]
    fn sandwich_on_lattices() {
        for (d, ns) in [(1u8, [1u64, 10, 20, 28]), (2, [1, 10, 50, 100])] {
            let w = cayley_window(GroupPreset::Lattice(d), 30, DEFAULT_VERTEX_BUDGET).unwrap();
            let pairs = folner_family(&w, 1..=7).unwrap();
            let g = growth_curves(&w, true);
            for n in ns {
                let s = pair_sandwich(&pairs, &g.kappa, n).unwrap();
                assert!(s.holds, "{s:?}");
            }
        }
    }

    #[test]
    fn free_group_has_no_pairs() {
        let w = cayley_window(GroupPreset::Free2, 4, DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(matches!(folner_pair_bound(&w, Lp::ONE, 1..=2), Err(Error::NotAmenablePreset(_))));
    }
}
