use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};

use crate::error::{Error, Result};
use crate::graph::{GradientKind, Lp};

use super::{rel_close, Instance, EXACT_TOL};

/// The p=1 linear program and the bounds read off its solution.
#[derive(Clone, Debug)]
pub struct LpBracket {
    /// Optimal objective: minimum of `‖∇f‖₁` subject to `Σf = 1`.
    pub lower: f64,
    /// Best of the quotient of the LP solution and of its level sets.
    pub upper: f64,
    /// A function realizing `upper`.
    pub certificate: Vec<f64>,
}

impl LpBracket {
    pub fn collapsed(&self) -> bool {
        rel_close(self.lower, self.upper, EXACT_TOL)
    }
}

/// Minimizes `Σ_x t_x` over `f ≥ 0`, `f|∂ = 0`, `Σf = 1` with `t_x ≥ ∇f(x)`
/// written as linear constraints: `t_x ≥ ±(f(x) − f(w))` for the edge
/// gradient and `t_x = M_x − m_x`, `m_x ≤ f ≤ M_x` on the ball for `∇_a`.
pub(crate) fn solve_p1(inst: &Instance) -> Result<(f64, Vec<f64>)> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut fvar: Vec<Option<Variable>> = vec![None; inst.len()];
    for &v in &inst.free {
        fvar[v] = Some(lp.add_var(0.0, (0.0, f64::INFINITY)));
    }
    let term = |e: &mut LinearExpr, v: usize, c: f64| {
        if let Some(var) = fvar[v] {
            e.add(var, c);
        }
    };
    for x in inst.active() {
        let stencil = inst.op.stencil(x);
        match inst.op.kind() {
            GradientKind::Edge => {
                let t = lp.add_var(1.0, (0.0, f64::INFINITY));
                for &w in &stencil[1..] {
                    for sign in [1.0, -1.0] {
                        let mut e = LinearExpr::empty();
                        e.add(t, 1.0);
                        term(&mut e, x, -sign);
                        term(&mut e, w, sign);
                        lp.add_constraint(e, ComparisonOp::Ge, 0.0);
                    }
                }
            }
            GradientKind::Thick(_) => {
                let hi = lp.add_var(1.0, (0.0, f64::INFINITY));
                let lo = lp.add_var(-1.0, (0.0, f64::INFINITY));
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
    let total: Vec<(Variable, f64)> = fvar.iter().flatten().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(total, ComparisonOp::Eq, 1.0);
    let solution = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let values = fvar.iter().map(|v| v.map_or(0.0, |var| solution[var].max(0.0))).collect();
    Ok((solution.objective(), values))
}

/// Solves the p=1 program and brackets `Dh¹` by its optimum from below and
/// by the better of its solution and that solution's level sets from above.
pub(crate) fn lp_bracket_for(inst: &Instance) -> Result<LpBracket> {
    let (lower, values) = solve_p1(inst)?;
    let mut upper = inst.quotient(&values, Lp::ONE);
    let mut certificate = values;
    if let Some((q, rounded)) = polish(inst, &certificate) {
        if q <= upper * (1.0 + EXACT_TOL) {
            upper = q;
            certificate = rounded;
        }
    }
    if let Some((ratio, members)) = inst.sweep(&certificate) {
        if ratio < upper {
            upper = ratio;
            let mut indicator = vec![0.0; inst.len()];
            for i in members {
                indicator[i] = 1.0;
            }
            certificate = indicator;
        }
    }
    Ok(LpBracket { lower, upper, certificate })
}

/// Largest common denominator tried by [`polish`].
const POLISH_DENOMINATOR: u32 = 64;

/// Rounds the LP solution to integer multiples of `max f / q` for each
/// `q ≤ POLISH_DENOMINATOR` and keeps the best rounding. Vertex optima are
/// rational with small denominators, and the quotient of an integer vector
/// is a single correctly rounded division, so equal optima on different
/// subgraphs come out bit-identical.
fn polish(inst: &Instance, values: &[f64]) -> Option<(f64, Vec<f64>)> {
    let top = values.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return None;
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for q in 1..=POLISH_DENOMINATOR {
        let rounded: Vec<f64> = values.iter().map(|&v| (v / top * q as f64).round()).collect();
        let Some(ratio) = inst.op.quotient(&rounded, Lp::ONE) else { continue };
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, rounded));
        }
    }
    best
}

/// [`lp_bracket_for`] on a subgraph with the given gradient.
pub fn lp_bracket(g: &crate::graph::Subgraph<'_>, kind: GradientKind) -> Result<LpBracket> {
    let inst = Instance::new(g, kind);
    if inst.free.is_empty() {
        return Err(Error::InvalidSubgraph("no free vertices".into()));
    }
    lp_bracket_for(&inst)
}
