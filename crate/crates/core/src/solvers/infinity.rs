use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GradientKind, Lp, Subgraph, Value, VertexFunction, UNREACHED};

use super::{rel_close, ConstantResult, Instance, Mode, SolverStats, EXACT_TOL};

/// `Dh^∞(Γ) = 1/l_Γ` with the tent `f(y) = max{0, l_Γ − d_X(x, y)}` at an
/// inradius center `x` as certificate.
///
/// On a non-induced `Γ` the identity can fail, since paths in `EΓ` may be
/// longer than ambient geodesics, so the per-vertex LP is used instead.
pub fn dh_infinity(g: &Subgraph<'_>) -> Result<ConstantResult> {
    g.require_trusted()?;
    if g.free_count() == 0 {
        return Ok(ConstantResult::infinite(Lp::Infinity));
    }
    if !g.is_induced() {
        return dh_infinity_lp(g, GradientKind::Edge);
    }
    let (center, l) = g.inradius_center()?;
    let tent = tent(g, center, l);
    Ok(ConstantResult {
        p: Lp::Infinity,
        value: Value::Finite(1.0 / l as f64),
        certificate: Some(tent),
        mode: Mode::Exact,
        solver: "inradius",
        stats: SolverStats::default(),
    })
}

/// `max{0, l − d_X(center, y)}`; distances below `l` stay inside `Γ`.
pub(crate) fn tent(g: &Subgraph<'_>, center: usize, l: u32) -> VertexFunction {
    let dist = g.ambient_bfs(&[center], Some(l));
    VertexFunction::from_raw(
        dist.iter().map(|&d| if d == UNREACHED || d >= l { 0.0 } else { (l - d) as f64 }).collect(),
    )
}

/// `Dh^∞` for any gradient: for each free `u`, minimize `max ∇f` subject to
/// `f(u) = 1 ≥ f ≥ 0`, then take the best `u`.
pub fn dh_infinity_lp(g: &Subgraph<'_>, kind: GradientKind) -> Result<ConstantResult> {
    g.require_trusted()?;
    let inst = Instance::new(g, kind);
    if inst.free.is_empty() {
        return Ok(ConstantResult::infinite(Lp::Infinity));
    }
    let active = inst.active();
    let solved: Vec<(f64, f64, Vec<f64>)> = inst
        .free
        .par_iter()
        .map(|&u| {
            let (objective, values) = solve_pinned(&inst, &active, u)?;
            let quotient = inst.quotient(&values, Lp::Infinity);
            Ok((objective, quotient, values))
        })
        .collect::<Result<_>>()?;
    let lower = solved.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let best =
        solved.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0))).map(|(_, s)| s).unwrap();
    let value = best.1;
    let mode = if rel_close(lower, value, EXACT_TOL) {
        Mode::Exact
    } else {
        Mode::Bracket { lower: lower.min(value), upper: value }
    };
    Ok(ConstantResult {
        p: Lp::Infinity,
        value: Value::Finite(value),
        certificate: Some(VertexFunction::from_raw(best.2.clone())),
        mode,
        solver: "pinned-lp",
        stats: SolverStats { lp_solves: inst.free.len(), ..SolverStats::default() },
    })
}

fn solve_pinned(inst: &Instance, active: &[usize], pinned: usize) -> Result<(f64, Vec<f64>)> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let tau = lp.add_var(1.0, (0.0, f64::INFINITY));
    let fvar: Vec<Option<Variable>> = (0..inst.len())
        .map(|v| {
            inst.is_free[v].then(|| {
                let bound = if v == pinned { (1.0, 1.0) } else { (0.0, 1.0) };
                lp.add_var(0.0, bound)
            })
        })
        .collect();
    let term = |e: &mut LinearExpr, v: usize, c: f64| {
        if let Some(var) = fvar[v] {
            e.add(var, c);
        }
    };
    for &x in active {
        let stencil = inst.op.stencil(x);
        match inst.op.kind() {
            GradientKind::Edge => {
                for &w in &stencil[1..] {
                    for sign in [1.0, -1.0] {
                        let mut e = LinearExpr::empty();
                        e.add(tau, 1.0);
                        term(&mut e, x, -sign);
                        term(&mut e, w, sign);
                        lp.add_constraint(e, ComparisonOp::Ge, 0.0);
                    }
                }
            }
            GradientKind::Thick(_) => {
                // τ ≥ f(y) − f(y′) for all pairs in the ball, through its max and min.
                let hi = lp.add_var(0.0, (0.0, f64::INFINITY));
                let lo = lp.add_var(0.0, (0.0, f64::INFINITY));
                let mut e = LinearExpr::empty();
                e.add(tau, 1.0);
                e.add(hi, -1.0);
                e.add(lo, 1.0);
                lp.add_constraint(e, ComparisonOp::Ge, 0.0);
                for &y in stencil {
                    let mut e = LinearExpr::empty();
                    e.add(hi, 1.0);
                    term(&mut e, y, -1.0);
                    lp.add_constraint(e, ComparisonOp::Ge, 0.0);
                    let mut e = LinearExpr::empty();
                    e.add(lo, 1.0);
                    term(&mut e, y, -1.0);
                    lp.add_constraint(e, ComparisonOp::Le, 0.0);
                }
            }
        }
    }
    let solution = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let values = fvar.iter().map(|v| v.map_or(0.0, |var| solution[var].clamp(0.0, 1.0))).collect();
    Ok((solution.objective(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::graph::rayleigh_quotient;

    #[test]
    fn interval_tent() {
        let w = cayley_window(GroupPreset::Lattice(1), 12, DEFAULT_VERTEX_BUDGET).unwrap();
        let r = 4;
        let g = Subgraph::induced(&w, (-r..=r).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap())).unwrap();
        let res = dh_infinity(&g).unwrap();
        assert_eq!(res.value, Value::Finite(0.25));
        let tent = res.certificate.unwrap();
        let peak = g.local_index(w.origin()).unwrap();
        assert_eq!(tent.get(peak), 4.0);
        assert_eq!(tent.max(), 4.0);
        assert_eq!(rayleigh_quotient(&g, &tent, Lp::Infinity), Some(0.25));
        let lp = dh_infinity_lp(&g, GradientKind::Edge).unwrap();
        assert!(rel_close(lp.value.finite().unwrap(), 0.25, EXACT_TOL));
        assert!(lp.is_exact());
    }

    #[test]
    fn block_inradius_one() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, w.lattice_box(&[3, 3]).unwrap()).unwrap();
        assert_eq!(dh_infinity(&g).unwrap().value, Value::Finite(1.0));
    }
}
