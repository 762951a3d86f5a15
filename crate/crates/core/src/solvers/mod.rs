//! Dirichlet-Poincaré constants of a single subgraph.
//!
//! Every solver works on a [`GradientOperator`], so the thick constants
//! `Dh^p_a` reuse the same code with ball stencils in place of edge
//! stencils.

mod descent;
mod infinity;
mod lp;
mod one;
mod oracle;

pub use descent::{dh_p_descent, dh_p_descent_with, DescentOptions};
pub use infinity::{dh_infinity, dh_infinity_lp};
pub use lp::{lp_bracket, LpBracket};
pub use one::{dh_one_enumerate, dh_one_exact, dh_one_with, ENUMERATION_CAP};
pub use oracle::{dh_oracle_grid, ORACLE_FREE_CAP};

use crate::error::Result;
use crate::graph::{GradientKind, GradientOperator, Lp, Subgraph, Value, VertexFunction};

/// Relative tolerance for exactness claims.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    UpperBound,
    Bracket { lower: f64, upper: f64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::UpperBound => "upper_bound",
            Mode::Bracket { .. } => "bracket",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolverStats {
    pub iterations: u64,
    pub subsets: u64,
    pub starts: usize,
    pub lp_solves: usize,
}

#[derive(Clone, Debug)]
pub struct ConstantResult {
    pub p: Lp,
    pub value: Value,
    /// An admissible function whose quotient equals `value`.
    pub certificate: Option<VertexFunction>,
    pub mode: Mode,
    pub solver: &'static str,
    pub stats: SolverStats,
}

impl ConstantResult {
    pub(crate) fn infinite(p: Lp) -> Self {
        Self {
            p,
            value: Value::Infinite,
            certificate: None,
            mode: Mode::Exact,
            solver: "convention",
            stats: SolverStats::default(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }
}

/// The data every solver needs: stencils and the free vertices
/// `VΓ ∖ ∂_XΓ` in increasing local order.
pub(crate) struct Instance {
    pub op: GradientOperator,
    pub free: Vec<usize>,
    pub is_free: Vec<bool>,
}

impl Instance {
    pub fn new(g: &Subgraph<'_>, kind: GradientKind) -> Self {
        let free = g.free_vertices();
        let mut is_free = vec![false; g.len()];
        for &v in &free {
            is_free[v] = true;
        }
        Self { op: GradientOperator::new(g, kind), free, is_free }
    }

    pub fn len(&self) -> usize {
        self.is_free.len()
    }

    /// Vertices whose stencil meets a free vertex; all others have zero
    /// gradient for every admissible function.
    pub fn active(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.op.stencil(x).iter().any(|&y| self.is_free[y])).collect()
    }

    pub fn quotient(&self, values: &[f64], p: Lp) -> f64 {
        self.op.quotient(values, p).expect("admissible functions are nonzero")
    }

    /// Smallest quotient among the level sets `{f > t}` of `f`.
    pub fn sweep(&self, values: &[f64]) -> Option<(f64, Vec<usize>)> {
        let mut levels: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut in_set = vec![false; values.len()];
        let mut prev = 0.0;
        for &level in &levels {
            for (flag, &v) in in_set.iter_mut().zip(values) {
                *flag = v > prev;
            }
            let members: Vec<usize> = (0..values.len()).filter(|&i| in_set[i]).collect();
            let ratio = self.op.cut_size(&in_set) as f64 / members.len() as f64;
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, members));
            }
            prev = level;
        }
        best
    }
}

pub(crate) fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// `Dh^p_X(Γ)`: `+∞` when every vertex is on the boundary, otherwise the
/// p=1 combinatorial/LP solver, the inradius formula at `p = ∞`, or
/// multi-start descent.
pub fn dirichlet_constant(g: &Subgraph<'_>, p: Lp) -> Result<ConstantResult> {
    g.require_trusted()?;
    if g.free_count() == 0 {
        return Ok(ConstantResult::infinite(p));
    }
    match p {
        Lp::Infinity => dh_infinity(g),
        _ if p.is_one() => dh_one_exact(g),
        _ => dh_p_descent(g, p),
    }
}

/// `Dh^p_a(Γ)` with the thickened gradient `∇_a`.
pub fn dh_thick(g: &Subgraph<'_>, p: Lp, a: u32) -> Result<ConstantResult> {
    g.require_trusted()?;
    if g.free_count() == 0 {
        return Ok(ConstantResult::infinite(p));
    }
    let kind = GradientKind::Thick(a);
    match p {
        Lp::Infinity => dh_infinity_lp(g, kind),
        _ if p.is_one() => dh_one_with(g, kind, ENUMERATION_CAP),
        _ => dh_p_descent_with(g, p, &DescentOptions { kind, ..DescentOptions::default() }),
    }
}

/// The indicator of one free vertex `v` has quotient `|stencil(v)|^{1/p}`
/// for every admissible direction, so a single free vertex is solved
/// exactly for any `p`.
pub(crate) fn single_free(inst: &Instance, p: Lp, solver: &'static str) -> ConstantResult {
    let f = VertexFunction::indicator(inst.len(), [inst.free[0]]);
    let q = inst.quotient(f.values(), p);
    ConstantResult {
        p,
        value: Value::Finite(q),
        certificate: Some(f),
        mode: Mode::Exact,
        solver,
        stats: SolverStats::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::graph::Subgraph;

    #[test]
    fn all_boundary_is_infinite() {
        let w = cayley_window(GroupPreset::Lattice(1), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, [w.vertex_of(&crate::generators::Element::Lattice(vec![0])).unwrap()]).unwrap();
        for p in [Lp::ONE, Lp::TWO, Lp::Infinity] {
            let r = dirichlet_constant(&g, p).unwrap();
            assert_eq!(r.value, Value::Infinite);
            assert!(r.certificate.is_none());
        }
    }

    #[test]
    fn frontier_subgraph_is_rejected() {
        let w = cayley_window(GroupPreset::Lattice(1), 3, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, 0..w.len()).unwrap();
        assert!(matches!(dirichlet_constant(&g, Lp::ONE), Err(crate::Error::MarginViolation { .. })));
    }
}
