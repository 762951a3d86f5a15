use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{GradientKind, Lp, Subgraph, Value, VertexFunction};

use super::lp::lp_bracket_for;
use super::{rel_close, single_free, ConstantResult, Instance, Mode, SolverStats, EXACT_TOL};

/// Largest free-vertex count for which all subsets are enumerated.
pub const ENUMERATION_CAP: usize = 20;

/// A candidate subset: cut size, cardinality and the mask over free
/// vertices (bit `i` is the `i`-th free vertex in local order).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    cut: u32,
    size: u32,
    mask: u32,
}

impl Candidate {
    /// Smaller ratio, then smaller set, then lexicographically first sorted
    /// vertex list.
    fn better(self, other: Candidate) -> Candidate {
        let lhs = self.cut as u64 * other.size as u64;
        let rhs = other.cut as u64 * self.size as u64;
        if lhs != rhs {
            return if lhs < rhs { self } else { other };
        }
        if self.size != other.size {
            return if self.size < other.size { self } else { other };
        }
        let low = (self.mask ^ other.mask).trailing_zeros();
        if self.mask >> low & 1 == 1 {
            self
        } else {
            other
        }
    }
}

/// `min |∂′S|/|S|` over nonempty `S` inside the free vertices, by brute
/// force over all `2^k − 1` subsets.
fn enumerate(inst: &Instance) -> Candidate {
    let k = inst.free.len();
    assert!((1..=ENUMERATION_CAP).contains(&k));
    let mut bit = vec![u32::MAX; inst.len()];
    for (i, &v) in inst.free.iter().enumerate() {
        bit[v] = i as u32;
    }
    // A vertex is cut by S iff its stencil meets S and meets the complement;
    // non-free stencil members are always in the complement.
    let stencils: Vec<(u32, bool)> = inst
        .active()
        .into_iter()
        .map(|x| {
            let mut mask = 0u32;
            let mut fixed = false;
            for &y in inst.op.stencil(x) {
                match bit[y] {
                    u32::MAX => fixed = true,
                    b => mask |= 1 << b,
                }
            }
            (mask, fixed)
        })
        .collect();
    let eval = |s: u32| {
        let cut = stencils.iter().filter(|&&(mask, fixed)| mask & s != 0 && (fixed || mask & !s != 0)).count() as u32;
        Candidate { cut, size: s.count_ones(), mask: s }
    };
    (1u32..(1u32 << k))
        .into_par_iter()
        .with_min_len(1 << 10)
        .map(eval)
        .reduce_with(Candidate::better)
        .expect("at least one subset")
}

fn indicator_of(inst: &Instance, mask: u32) -> VertexFunction {
    let members = inst.free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v);
    VertexFunction::indicator(inst.len(), members)
}

/// The subset minimum `min |∂′S|/|S|` with its indicator as certificate.
///
/// Every indicator is admissible, so this is an upper bound for `Dh¹`.
pub fn dh_one_enumerate(g: &Subgraph<'_>, kind: GradientKind) -> Result<ConstantResult> {
    g.require_trusted()?;
    let inst = Instance::new(g, kind);
    let k = inst.free.len();
    if k == 0 {
        return Ok(ConstantResult::infinite(Lp::ONE));
    }
    if k > ENUMERATION_CAP {
        return Err(crate::Error::SizeCap(format!("{k} free vertices exceed the enumeration cap {ENUMERATION_CAP}")));
    }
    let best = enumerate(&inst);
    Ok(ConstantResult {
        p: Lp::ONE,
        value: Value::Finite(best.cut as f64 / best.size as f64),
        certificate: Some(indicator_of(&inst, best.mask)),
        mode: if k == 1 { Mode::Exact } else { Mode::UpperBound },
        solver: "subset-enumeration",
        stats: SolverStats { subsets: (1u64 << k) - 1, ..SolverStats::default() },
    })
}

/// `Dh¹(Γ)` for the edge gradient with the default enumeration cap.
pub fn dh_one_exact(g: &Subgraph<'_>) -> Result<ConstantResult> {
    dh_one_with(g, GradientKind::Edge, ENUMERATION_CAP)
}

/// `Dh¹` from two routes: subset enumeration (when `k ≤ cap`) and the
/// linear program. The value is the smaller upper bound; the mode is exact
/// when the LP optimum meets it within the exactness tolerance.
pub fn dh_one_with(g: &Subgraph<'_>, kind: GradientKind, cap: usize) -> Result<ConstantResult> {
    g.require_trusted()?;
    let inst = Instance::new(g, kind);
    let k = inst.free.len();
    if k == 0 {
        return Ok(ConstantResult::infinite(Lp::ONE));
    }
    if k == 1 {
        return Ok(single_free(&inst, Lp::ONE, "single-free-vertex"));
    }
    let mut stats = SolverStats::default();
    let enumerated = (k <= cap.min(ENUMERATION_CAP)).then(|| {
        stats.subsets = (1u64 << k) - 1;
        enumerate(&inst)
    });
    let bracket = lp_bracket_for(&inst);
    stats.lp_solves = 1;

    let (mut value, mut certificate, mut solver) = match enumerated {
        Some(c) => (c.cut as f64 / c.size as f64, indicator_of(&inst, c.mask), "subset-enumeration"),
        None => (f64::INFINITY, VertexFunction::zeros(inst.len()), "lp"),
    };
    let lower = match bracket {
        Ok(b) => {
            if b.upper < value && !rel_close(b.upper, value, 1e-12) {
                value = b.upper;
                certificate = VertexFunction::from_raw(b.certificate);
                solver = "lp";
            }
            b.lower
        }
        Err(e) if enumerated.is_some() => {
            log::warn!("p=1 linear program failed, keeping the enumeration bound: {e}");
            0.0
        }
        Err(e) => return Err(e),
    };
    let mode = if rel_close(lower, value, EXACT_TOL) {
        Mode::Exact
    } else {
        Mode::Bracket { lower: lower.min(value), upper: value }
    };
    Ok(ConstantResult { p: Lp::ONE, value: Value::Finite(value), certificate: Some(certificate), mode, solver, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::graph::rayleigh_quotient;

    fn interval(w: &crate::generators::CayleyWindow, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|i| w.vertex_of(&Element::Lattice(vec![i])).unwrap()).collect()
    }

    #[test]
    fn small_intervals() {
        let w = cayley_window(GroupPreset::Lattice(1), 12, DEFAULT_VERTEX_BUDGET).unwrap();
        let path = Subgraph::induced(&w, interval(&w, 0, 2)).unwrap();
        let r = dh_one_exact(&path).unwrap();
        assert_eq!((r.value, r.mode), (Value::Finite(3.0), Mode::Exact));

        let g = Subgraph::induced(&w, interval(&w, 0, 5)).unwrap();
        let r = dh_one_exact(&g).unwrap();
        assert_eq!(r.value, Value::Finite(1.0));
        assert!(r.is_exact());
        let cert = r.certificate.unwrap();
        assert!(cert.is_dirichlet_admissible(&g));
        assert_eq!(rayleigh_quotient(&g, &cert, Lp::ONE), Some(1.0));
        assert_eq!(cert.support_size(), 4);
    }

    #[test]
    fn lp_alone_above_the_cap() {
        let w = cayley_window(GroupPreset::Lattice(2), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, w.lattice_box(&[7, 7]).unwrap()).unwrap();
        assert_eq!(g.free_count(), 25);
        let r = dh_one_exact(&g).unwrap();
        assert_eq!(r.solver, "lp");
        assert!(r.is_exact());
        let v = r.value.finite().unwrap();
        assert!(v.is_finite() && v < 36.0 / 25.0);
        assert_eq!(rayleigh_quotient(&g, r.certificate.as_ref().unwrap(), Lp::ONE), Some(v));
    }

    #[test]
    fn long_interval_beats_every_indicator() {
        // Free {1..5}: the best subset gives 4/5, the trapezoid 0,1,2,2,2,1,0 gives 6/8.
        let w = cayley_window(GroupPreset::Lattice(1), 12, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, interval(&w, 0, 6)).unwrap();
        let subsets = dh_one_enumerate(&g, GradientKind::Edge).unwrap();
        assert_eq!(subsets.value, Value::Finite(0.8));
        let r = dh_one_exact(&g).unwrap();
        let v = r.value.finite().unwrap();
        assert!(v <= 0.75 + 1e-12, "{v}");
        assert!(r.is_exact());
        let quotient = rayleigh_quotient(&g, r.certificate.as_ref().unwrap(), Lp::ONE).unwrap();
        assert!(rel_close(quotient, v, EXACT_TOL));
    }

    #[test]
    fn block_center() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&w, w.lattice_box(&[3, 3]).unwrap()).unwrap();
        assert_eq!(dh_one_exact(&g).unwrap().value, Value::Finite(5.0));
    }

    #[test]
    fn tie_break_prefers_small_then_lexicographic() {
        let a = Candidate { cut: 2, size: 1, mask: 0b100 };
        let b = Candidate { cut: 4, size: 2, mask: 0b011 };
        assert_eq!(a.better(b), a);
        let c = Candidate { cut: 2, size: 1, mask: 0b001 };
        assert_eq!(a.better(c), c);
        assert_eq!(c.better(a), c);
        let d = Candidate { cut: 4, size: 2, mask: 0b101 };
        let e = Candidate { cut: 4, size: 2, mask: 0b110 };
        assert_eq!(d.better(e), d);
    }
}
