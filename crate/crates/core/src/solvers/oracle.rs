use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GradientKind, Lp, Subgraph};

use super::Instance;

pub const ORACLE_FREE_CAP: usize = 5;

/// Brute-force minimum of `‖∇f‖_p/‖f‖_p` over free values in
/// `{0, 1/G, …, 1}`, not all zero. An upper bound that no solver may exceed.
pub fn dh_oracle_grid(g: &Subgraph<'_>, p: Lp, grid: u32) -> Result<f64> {
    dh_oracle_grid_with(g, GradientKind::Edge, p, grid)
}

pub fn dh_oracle_grid_with(g: &Subgraph<'_>, kind: GradientKind, p: Lp, grid: u32) -> Result<f64> {
    let inst = Instance::new(g, kind);
    let k = inst.free.len();
    if k == 0 || k > ORACLE_FREE_CAP {
        return Err(Error::SizeCap(format!("grid oracle needs 1..={ORACLE_FREE_CAP} free vertices, found {k}")));
    }
    if grid == 0 {
        return Err(Error::InvalidFunction("grid must be positive".into()));
    }
    // The quotient is scale invariant, so integer levels 0..=G stand in for j/G.
    let base = grid as usize + 1;
    let total = base.checked_pow(k as u32).ok_or_else(|| Error::SizeCap("grid too fine".into()))?;
    let best = (1..total)
        .into_par_iter()
        .with_min_len(1 << 10)
        .map_init(
            || vec![0.0; inst.len()],
            |values, code| {
                let mut c = code;
                for &v in &inst.free {
                    values[v] = (c % base) as f64;
                    c /= base;
                }
                inst.quotient(values, p)
            },
        )
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn single_free_vertex_is_grid_independent() {
        let w = cayley_window(GroupPreset::Lattice(1), 8, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, (0..3).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap())).unwrap();
        for grid in [1, 3, 8] {
            assert_eq!(dh_oracle_grid(&g, Lp::ONE, grid).unwrap(), 3.0);
            assert!((dh_oracle_grid(&g, Lp::TWO, grid).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_never_increases() {
        let w = cayley_window(GroupPreset::Lattice(1), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, (0..6).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap())).unwrap();
        let coarse = dh_oracle_grid(&g, Lp::TWO, 8).unwrap();
        let fine = dh_oracle_grid(&g, Lp::TWO, 16).unwrap();
        assert!(fine <= coarse);
        assert!(dh_oracle_grid(&g, Lp::TWO, 0).is_err());
    }
}
