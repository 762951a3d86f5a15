use crate::error::{Error, Result};
use crate::graph::{gradient, Subgraph, VertexFunction, UNREACHED};

/// `‖f − f_r‖₁ / (r ‖∇f‖₁)` with `f_r(x) = |B(x, r)|⁻¹ Σ_{v ∈ B(x, r)} f(v)`,
/// where `f` is extended by zero off `g`.
///
/// Both norms are sums over all of `X`. `f_r` can be nonzero up to
/// distance `r` from the support, whose balls reach distance `2r`, so the
/// support must stay at least `max(2r, 2)` away from the window frontier.
/// Returns 0 when `f ≡ 0`.
pub fn pseudo_poincare_ratio(g: &Subgraph<'_>, f: &VertexFunction, r: u32) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::InvalidFunction(format!("function has {} values for {} vertices", f.len(), g.len())));
    }
    if r == 0 {
        return Err(Error::InvalidFunction("averaging radius must be positive".into()));
    }
    let w = g.window();
    let support: Vec<usize> = (0..g.len()).filter(|&i| f.get(i) != 0.0).map(|i| g.global(i)).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let required = (2 * r).max(2);
    let margin = support.iter().map(|&v| w.frontier_distance(v)).min().unwrap();
    if margin < required {
        return Err(Error::MarginViolation { margin, required });
    }
    let mut full = vec![0.0f64; w.len()];
    for &v in &support {
        full[v] = f.get(g.local_index(v).unwrap());
    }
    let near = w.bfs_from(&support, Some(r));
    let mut deviation = 0.0;
    for x in (0..w.len()).filter(|&x| near[x] != UNREACHED) {
        let ball = w.ball(x, r);
        let mean = ball.iter().map(|&v| full[v]).sum::<f64>() / ball.len() as f64;
        deviation += (full[x] - mean).abs();
    }
    // Off the r-neighbourhood f and f_r both vanish.
    let touched = w.bfs_from(&support, Some(1));
    let region = Subgraph::induced(w, (0..w.len()).filter(|&x| touched[x] != UNREACHED))?;
    let restricted = VertexFunction::new(region.vertices().iter().map(|&v| full[v]).collect())?;
    let grad: f64 = gradient(&region, &restricted).values().iter().sum();
    if grad == 0.0 {
        return Ok(if deviation == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(deviation / (r as f64 * grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};

    fn interval(w: &crate::generators::CayleyWindow, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap()).collect()
    }

    #[test]
    fn single_vertex_in_z() {
        let w = cayley_window(GroupPreset::Lattice(1), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, interval(&w, -1, 1)).unwrap();
        let f = VertexFunction::indicator(3, [g.local_index(w.origin()).unwrap()]);
        // |1 − 1/3| + 2·(1/3) = 4/3 over ‖∇f‖₁ = 3.
        assert!((pseudo_poincare_ratio(&g, &f, 1).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(pseudo_poincare_ratio(&g, &VertexFunction::zeros(3), 1).unwrap(), 0.0);
    }

    #[test]
    fn tent_ratios_are_bounded() {
        let w = cayley_window(GroupPreset::Lattice(1), 40, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, interval(&w, -8, 8)).unwrap();
        let f = VertexFunction::new(
            g.vertices()
                .iter()
                .map(|&v| {
                    let Element::Lattice(x) = w.element(v) else { unreachable!() };
                    (8 - x[0].abs()) as f64
                })
                .collect(),
        )
        .unwrap();
        for r in 1..=5 {
            let c = pseudo_poincare_ratio(&g, &f, r).unwrap();
            assert!(c > 0.0 && c <= 1.0, "r={r} c={c}");
        }
    }

    #[test]
    fn margin_is_enforced() {
        let w = cayley_window(GroupPreset::Lattice(1), 5, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, interval(&w, 0, 4)).unwrap();
        let edge = w.vertex_of(&Element::Lattice(vec![4])).unwrap();
        let f = VertexFunction::indicator(5, [g.local_index(edge).unwrap()]);
        assert!(matches!(pseudo_poincare_ratio(&g, &f, 1), Err(Error::MarginViolation { .. })));
    }
}
