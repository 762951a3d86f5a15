use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GradientKind, Lp, Subgraph, Value, VertexFunction};

use super::infinity::tent;
use super::one::{dh_one_with, ENUMERATION_CAP};
use super::{single_free, ConstantResult, Instance, Mode, SolverStats};

#[derive(Clone, Debug)]
pub struct DescentOptions {
    pub kind: GradientKind,
    pub max_iterations: u64,
    /// Stop once the quotient improved by less than `stall_tol` (relative)
    /// over the last `stall_window` iterations.
    pub stall_window: usize,
    pub stall_tol: f64,
    pub random_starts: usize,
    pub seed: u64,
    /// Use the p=1 certificate as a start.
    pub p1_start: bool,
    /// Additional starts, by local id; boundary entries are zeroed.
    pub warm_starts: Vec<Vec<f64>>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            kind: GradientKind::Edge,
            max_iterations: 100_000,
            stall_window: 200,
            stall_tol: 1e-9,
            random_starts: 5,
            seed: 0x5eed,
            p1_start: true,
            warm_starts: Vec::new(),
        }
    }
}

/// Upper bound for `Dh^p(Γ)`, `1 < p < ∞`, by multi-start descent.
pub fn dh_p_descent(g: &Subgraph<'_>, p: Lp) -> Result<ConstantResult> {
    dh_p_descent_with(g, p, &DescentOptions::default())
}

pub fn dh_p_descent_with(g: &Subgraph<'_>, p: Lp, opts: &DescentOptions) -> Result<ConstantResult> {
    let exponent = match p {
        Lp::Finite(e) if e > 1.0 => e,
        _ => return Err(Error::Unsupported(format!("descent needs 1 < p < ∞, got p = {p}"))),
    };
    g.require_trusted()?;
    let inst = Instance::new(g, opts.kind);
    if inst.free.is_empty() {
        return Ok(ConstantResult::infinite(p));
    }
    if inst.free.len() == 1 {
        return Ok(single_free(&inst, p, "single-free-vertex"));
    }

    let mut starts: Vec<Vec<f64>> = Vec::new();
    let (center, l) = g.inradius_center()?;
    if l >= 1 {
        starts.push(tent(g, center, l).into_values());
    }
    if opts.p1_start {
        if let Ok(r) = dh_one_with(g, opts.kind, ENUMERATION_CAP) {
            starts.extend(r.certificate.map(VertexFunction::into_values));
        }
    }
    starts.push((0..inst.len()).map(|v| if inst.is_free[v] { 1.0 } else { 0.0 }).collect());
    for i in 0..opts.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        starts.push((0..inst.len()).map(|v| if inst.is_free[v] { rng.random::<f64>() } else { 0.0 }).collect());
    }
    starts.extend(opts.warm_starts.iter().cloned());
    let starts: Vec<Vec<f64>> = starts.into_iter().filter_map(|s| normalize_start(&inst, s)).collect();

    // Every start gets a short run; only the most promising ones continue.
    let mut states: Vec<State<'_>> = starts.iter().map(|s| State::new(&inst, exponent, s.clone())).collect();
    let probe = opts.max_iterations.min(PROBE_ITERATIONS);
    states.par_iter_mut().for_each(|s| s.run(opts, probe));
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by(|&a, &b| states[a].ratio().total_cmp(&states[b].ratio()).then(a.cmp(&b)));
    for &i in order.iter().take(FINALISTS) {
        states[i].run(opts, opts.max_iterations);
    }
    let iterations = states.iter().map(|s| s.iterations).sum();
    let (value, values) = states
        .into_iter()
        .enumerate()
        .map(|(i, s)| (i, inst.quotient(&s.values, p), s.values))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(_, q, v)| (q, v))
        .ok_or_else(|| Error::InvalidFunction("no admissible start".into()))?;
    Ok(ConstantResult {
        p,
        value: Value::Finite(value),
        certificate: Some(VertexFunction::from_raw(values)),
        mode: Mode::UpperBound,
        solver: "descent",
        stats: SolverStats { iterations, starts: starts.len(), ..SolverStats::default() },
    })
}

/// Zeroes the boundary and scales to `max f = 1`; `None` if nothing is left.
fn normalize_start(inst: &Instance, mut s: Vec<f64>) -> Option<Vec<f64>> {
    if s.len() != inst.len() {
        return None;
    }
    for (v, x) in s.iter_mut().enumerate() {
        if !inst.is_free[v] || !x.is_finite() || *x < 0.0 {
            *x = 0.0;
        }
    }
    let top = s.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    Some(s.into_iter().map(|x| x / top).collect())
}

/// Iterations every start runs before the field is cut to the finalists.
const PROBE_ITERATIONS: u64 = 2_000;
const FINALISTS: usize = 2;

/// Relative decrease below which a move counts as rounding noise.
const MIN_GAIN: f64 = 1e-13;

/// Descent state for `R(f) = Σ ∇f^p / Σ f^p`, the `p`-th power of the
/// quotient.
struct State<'a> {
    inst: &'a Instance,
    p: f64,
    values: Vec<f64>,
    grad: Vec<f64>,
    num: f64,
    den: f64,
    history: Vec<f64>,
    delta: f64,
    step: f64,
    iterations: u64,
    converged: bool,
}

impl<'a> State<'a> {
    fn new(inst: &'a Instance, p: f64, values: Vec<f64>) -> Self {
        let mut s = Self {
            inst,
            p,
            values,
            grad: Vec::new(),
            num: 0.0,
            den: 0.0,
            history: Vec::new(),
            delta: 0.25,
            step: 0.1,
            iterations: 0,
            converged: false,
        };
        s.refresh();
        s
    }

    fn refresh(&mut self) {
        self.grad = self.inst.op.apply(&self.values).into_values();
        self.num = self.grad.iter().map(|g| g.powf(self.p)).sum();
        self.den = self.values.iter().map(|f| f.powf(self.p)).sum();
    }

    fn ratio(&self) -> f64 {
        self.num / self.den
    }

    /// `R` after setting `f(u) = new`, with the gradients that change.
    fn trial(&mut self, u: usize, new: f64, scratch: &mut Vec<f64>) -> f64 {
        let old = self.values[u];
        self.values[u] = new;
        scratch.clear();
        let mut num = self.num;
        for &x in self.inst.op.stencil(u) {
            let g = self.inst.op.local(x, &self.values).0;
            num += g.powf(self.p) - self.grad[x].powf(self.p);
            scratch.push(g);
        }
        self.values[u] = old;
        let den = self.den - old.powf(self.p) + new.powf(self.p);
        if den <= 0.0 {
            f64::INFINITY
        } else {
            num.max(0.0) / den
        }
    }

    fn commit(&mut self, u: usize, new: f64, grads: &[f64]) {
        let old = self.values[u];
        self.values[u] = new;
        for (&x, &g) in self.inst.op.stencil(u).iter().zip(grads) {
            self.num += g.powf(self.p) - self.grad[x].powf(self.p);
            self.grad[x] = g;
        }
        self.den += new.powf(self.p) - old.powf(self.p);
    }

    /// Shifts of whole superlevel sets `{f ≥ t}` by `±delta·max f`. These
    /// keep the differences inside the set fixed, so they move along the
    /// kinks of the max-gradient where coordinate moves stall.
    fn level_sweep(&mut self, delta: f64) -> bool {
        let mut levels: Vec<f64> = self.inst.free.iter().map(|&u| self.values[u]).filter(|&v| v > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let scale = self.values.iter().copied().fold(0.0, f64::max);
        let mut improved = false;
        for t in levels {
            let r = self.ratio();
            let saved = self.values.clone();
            let mut best: Option<(f64, f64)> = None;
            for shift in [delta * scale, -delta * scale] {
                for &u in &self.inst.free {
                    if saved[u] >= t {
                        self.values[u] = (saved[u] + shift).max(0.0);
                    }
                }
                self.refresh();
                if self.den > 0.0 && self.ratio() < best.map_or(r, |b| b.0) * (1.0 - MIN_GAIN) {
                    best = Some((self.ratio(), shift));
                }
                self.values.clone_from(&saved);
            }
            if let Some((_, shift)) = best {
                for &u in &self.inst.free {
                    if saved[u] >= t {
                        self.values[u] = (saved[u] + shift).max(0.0);
                    }
                }
                improved = true;
            }
            self.refresh();
        }
        improved
    }

    /// One coordinate sweep with multiplicative and additive moves of size
    /// `delta`; returns whether anything improved.
    fn pattern_sweep(&mut self, delta: f64) -> bool {
        let mut improved = false;
        let mut scratch = Vec::new();
        let mut best_grads = Vec::new();
        let scale = self.values.iter().copied().fold(0.0, f64::max);
        for i in 0..self.inst.free.len() {
            let u = self.inst.free[i];
            let f = self.values[u];
            let mut best = (self.ratio(), f);
            for cand in [f * (1.0 + delta), f * (1.0 - delta), f + delta * scale, (f - delta * scale).max(0.0)] {
                if cand == f {
                    continue;
                }
                let r = self.trial(u, cand, &mut scratch);
                if r < best.0 * (1.0 - MIN_GAIN) {
                    best = (r, cand);
                    best_grads.clone_from(&scratch);
                }
            }
            if best.1 != f {
                self.commit(u, best.1, &best_grads);
                improved = true;
            }
        }
        improved
    }

    /// A projected subgradient step on `R` with backtracking.
    fn gradient_step(&mut self, step: &mut f64) -> bool {
        let p = self.p;
        let mut dnum = vec![0.0; self.values.len()];
        for x in 0..self.values.len() {
            let (g, hi, lo) = self.inst.op.local(x, &self.values);
            if g > 0.0 {
                let w = p * g.powf(p - 1.0);
                dnum[hi] += w;
                dnum[lo] -= w;
            }
        }
        let r = self.ratio();
        let dir: Vec<f64> =
            (0..self.values.len())
                .map(|v| {
                    if self.inst.is_free[v] {
                        (dnum[v] - r * p * self.values[v].powf(p - 1.0)) / self.den
                    } else {
                        0.0
                    }
                })
                .collect();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return false;
        }
        let saved = self.values.clone();
        for _ in 0..40 {
            for v in 0..self.values.len() {
                self.values[v] = (saved[v] - *step * dir[v] / norm).max(0.0);
            }
            self.refresh();
            if self.den > 0.0 && self.ratio() < r * (1.0 - MIN_GAIN) {
                *step *= 2.0;
                return true;
            }
            *step *= 0.5;
        }
        self.values = saved;
        self.refresh();
        *step = 0.1;
        false
    }

    fn rescale(&mut self) {
        let top = self.values.iter().copied().fold(0.0, f64::max);
        if top > 0.0 && top != 1.0 {
            for v in &mut self.values {
                *v /= top;
            }
            self.refresh();
        }
    }

    /// Iterates until convergence or `limit` total iterations.
    fn run(&mut self, opts: &DescentOptions, limit: u64) {
        if self.history.is_empty() {
            self.history.push(self.ratio());
        }
        while !self.converged && self.iterations < limit {
            self.iterations += 1;
            let mut step = self.step;
            let moved = self.gradient_step(&mut step);
            self.step = step;
            let swept = self.pattern_sweep(self.delta);
            if !(self.level_sweep(self.delta) || swept) {
                self.delta *= 0.5;
            }
            self.rescale();
            self.history.push(self.ratio());
            if !moved && self.delta < 1e-15 {
                self.converged = true;
            }
            let h = &self.history;
            if h.len() > opts.stall_window {
                let then = h[h.len() - 1 - opts.stall_window].powf(1.0 / self.p);
                let now = self.ratio().powf(1.0 / self.p);
                if then - now <= opts.stall_tol * now && self.delta < 1e-6 {
                    self.converged = true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::solvers::dh_oracle_grid;

    fn interval(hi: i64) -> (crate::generators::CayleyWindow, Vec<usize>) {
        let w = cayley_window(GroupPreset::Lattice(1), 12, DEFAULT_VERTEX_BUDGET).unwrap();
        let ids = (0..=hi).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap()).collect();
        (w, ids)
    }

    #[test]
    fn single_free_vertex_is_exact() {
        let (w, ids) = interval(2);
        let g = Subgraph::induced(&w, ids).unwrap();
        let r = dh_p_descent(&g, Lp::TWO).unwrap();
        assert_eq!(r.value, Value::Finite(3f64.sqrt()));
        assert!(r.is_exact());
    }

    #[test]
    fn interval_stays_below_grid_oracle() {
        let (w, ids) = interval(5);
        let g = Subgraph::induced(&w, ids).unwrap();
        let r = dh_p_descent(&g, Lp::TWO).unwrap();
        let oracle = dh_oracle_grid(&g, Lp::TWO, 8).unwrap();
        let v = r.value.finite().unwrap();
        assert!(v <= oracle + 1e-6, "{v} > {oracle}");
        assert_eq!(r.mode, Mode::UpperBound);
    }

    #[test]
    fn rejects_p_one() {
        let (w, ids) = interval(5);
        let g = Subgraph::induced(&w, ids).unwrap();
        assert!(dh_p_descent(&g, Lp::ONE).is_err());
    }
}
