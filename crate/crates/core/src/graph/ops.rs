use crate::error::{Error, Result};

use super::window::UNREACHED;
use super::{Lp, Subgraph};

/// Nonnegative real values on the vertices of a subgraph, by local id.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidFunction(format!("values must be finite and nonnegative, got {bad}")));
        }
        Ok(Self { values })
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self { values: vec![0.0; len] }
    }

    /// Indicator of a set of local ids.
    pub fn indicator(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut values = vec![0.0; len];
        for i in support {
            values[i] = 1.0;
        }
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0 && c.is_finite());
        Self { values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Vanishes on `∂_XΓ` and is not identically zero.
    pub fn is_dirichlet_admissible(&self, g: &Subgraph<'_>) -> bool {
        self.len() == g.len() && !self.is_zero() && (0..g.len()).all(|i| !g.is_boundary(i) || self.values[i] == 0.0)
    }

    /// Extends by zero from `from` to a subgraph `to` of the same window
    /// containing it.
    pub fn zero_extend(&self, from: &Subgraph<'_>, to: &Subgraph<'_>) -> Result<Self> {
        if !std::ptr::eq(from.window(), to.window()) {
            return Err(Error::InvalidSubgraph("subgraphs live in different windows".into()));
        }
        let mut values = vec![0.0; to.len()];
        for (i, &v) in from.vertices().iter().enumerate() {
            let j = to
                .local_index(v)
                .ok_or_else(|| Error::InvalidSubgraph(format!("vertex {v} is missing from the larger subgraph")))?;
            values[j] = self.values[i];
        }
        Ok(Self { values })
    }
}

/// `∇f(v) = max{|f(v) − f(w)| : vw ∈ EΓ}`, zero on isolated vertices.
pub fn gradient(g: &Subgraph<'_>, f: &VertexFunction) -> VertexFunction {
    GradientOperator::edge(g).apply(f.values())
}

/// `∇_a f(x) = sup{|f(y) − f(y′)| : y, y′ ∈ B_Γ(x, a)}` with distances along
/// the subgraph's own edges.
pub fn thick_gradient(g: &Subgraph<'_>, f: &VertexFunction, a: u32) -> VertexFunction {
    GradientOperator::thick(g, a).apply(f.values())
}

pub fn p_norm(values: &[f64], p: Lp) -> f64 {
    match p {
        Lp::Infinity => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        Lp::Finite(p) if p == 1.0 => values.iter().map(|v| v.abs()).sum(),
        Lp::Finite(p) => values.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// `{v : f(v) > t}` as local ids.
pub fn level_set(f: &VertexFunction, t: f64) -> Vec<usize> {
    (0..f.len()).filter(|&i| f.values[i] > t).collect()
}

/// `‖∇f‖_p / ‖f‖_p`, or `None` when `f ≡ 0`.
pub fn rayleigh_quotient(g: &Subgraph<'_>, f: &VertexFunction, p: Lp) -> Option<f64> {
    GradientOperator::edge(g).quotient(f.values(), p)
}

/// `|∂′S|`: vertices of `Γ` incident, along `EΓ`, to an edge with exactly
/// one endpoint in `S`.
pub fn cut_boundary_size(g: &Subgraph<'_>, in_set: &[bool]) -> usize {
    GradientOperator::edge(g).cut_size(in_set)
}

/// `∫₀^∞ |∂′{f > t}| dt`, summed exactly over the intervals between
/// consecutive distinct values of `f`.
pub fn coarea_integral(g: &Subgraph<'_>, f: &VertexFunction) -> f64 {
    let op = GradientOperator::edge(g);
    let mut levels: Vec<f64> = f.values().iter().copied().filter(|&v| v > 0.0).collect();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut total = 0.0;
    let mut in_set = vec![false; f.len()];
    for pair in levels.windows(2) {
        let (t, next) = (pair[0], pair[1]);
        for (flag, &v) in in_set.iter_mut().zip(f.values()) {
            *flag = v > t;
        }
        total += (next - t) * op.cut_size(&in_set) as f64;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientKind {
    /// The max-gradient along edges of `Γ`.
    Edge,
    /// The thickened gradient over balls `B_Γ(x, a)`.
    Thick(u32),
}

/// A gradient operator as a family of stencils.
///
/// `stencil(x)` lists the vertices whose values determine the gradient at
/// `x`, starting with `x` itself. Stencils are symmetric: `y ∈ stencil(x)`
/// iff `x ∈ stencil(y)`, so the stencil of `u` is also the set of vertices
/// whose gradient changes when `f(u)` does.
#[derive(Clone, Debug)]
pub struct GradientOperator {
    kind: GradientKind,
    stencils: Vec<Vec<usize>>,
}

impl GradientOperator {
    pub fn new(g: &Subgraph<'_>, kind: GradientKind) -> Self {
        match kind {
            GradientKind::Edge => Self::edge(g),
            GradientKind::Thick(a) => Self::thick(g, a),
        }
    }

    pub fn edge(g: &Subgraph<'_>) -> Self {
        let stencils =
            (0..g.len()).map(|x| std::iter::once(x).chain(g.neighbors(x).iter().copied()).collect()).collect();
        Self { kind: GradientKind::Edge, stencils }
    }

    pub fn thick(g: &Subgraph<'_>, a: u32) -> Self {
        assert!(a >= 1, "thickness must be at least 1");
        let stencils = (0..g.len())
            .map(|x| {
                let dist = g.internal_bfs(x, Some(a));
                let mut ball: Vec<usize> = vec![x];
                ball.extend((0..g.len()).filter(|&y| y != x && dist[y] != UNREACHED));
                ball
            })
            .collect();
        Self { kind: GradientKind::Thick(a), stencils }
    }

    pub fn kind(&self) -> GradientKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.stencils.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stencils.is_empty()
    }

    pub fn stencil(&self, x: usize) -> &[usize] {
        &self.stencils[x]
    }

    /// Gradient at `x` with a pair `(hi, lo)` realizing it:
    /// `value = f(hi) − f(lo)`.
    pub fn local(&self, x: usize, values: &[f64]) -> (f64, usize, usize) {
        let stencil = &self.stencils[x];
        match self.kind {
            GradientKind::Edge => {
                let fx = values[x];
                let mut best = (0.0, x, x);
                for &w in &stencil[1..] {
                    let diff = fx - values[w];
                    if diff.abs() > best.0 {
                        best = if diff > 0.0 { (diff, x, w) } else { (-diff, w, x) };
                    }
                }
                best
            }
            GradientKind::Thick(_) => {
                let (mut hi, mut lo) = (x, x);
                for &y in stencil {
                    if values[y] > values[hi] {
                        hi = y;
                    }
                    if values[y] < values[lo] {
                        lo = y;
                    }
                }
                (values[hi] - values[lo], hi, lo)
            }
        }
    }

    pub fn apply(&self, values: &[f64]) -> VertexFunction {
        VertexFunction::from_raw((0..self.len()).map(|x| self.local(x, values).0).collect())
    }

    pub fn quotient(&self, values: &[f64], p: Lp) -> Option<f64> {
        let denom = p_norm(values, p);
        if denom == 0.0 {
            return None;
        }
        Some(p_norm(self.apply(values).values(), p) / denom)
    }

    /// Number of `x` whose stencil meets both `S` and its complement; for
    /// the edge operator this is `|∂′S|`, and the gradient of the indicator
    /// of `S` is the indicator of these vertices.
    pub fn cut_size(&self, in_set: &[bool]) -> usize {
        self.stencils
            .iter()
            .filter(|stencil| {
                let first = in_set[stencil[0]];
                stencil[1..].iter().any(|&y| in_set[y] != first)
            })
            .count()
    }
}
