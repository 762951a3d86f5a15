//! Suites with exact or pointwise targets.

use std::time::Duration;

use rand::Rng;

use super::sample;
use super::Tally;
use crate::generators::{cayley_window, CayleyWindow, GroupPreset, DEFAULT_VERTEX_BUDGET};
use crate::graph::{
    coarea_integral, gradient, p_norm, rayleigh_quotient, thick_gradient, AmbientWindow, GradientKind,
    GradientOperator, Lp, Subgraph, Value,
};
use crate::profiles::sup_profile;
use crate::solvers::{
    dh_infinity, dh_one_enumerate, dh_one_exact, dh_oracle_grid, dh_p_descent, dirichlet_constant, lp_bracket,
};

fn window(preset: GroupPreset, radius: u32) -> CayleyWindow {
    cayley_window(preset, radius, DEFAULT_VERTEX_BUDGET).expect("preset windows fit the default budget")
}

/// Mixed preset windows for random sampling.
fn sampling_windows() -> Vec<CayleyWindow> {
    vec![
        window(GroupPreset::Lattice(1), 40),
        window(GroupPreset::Lattice(2), 12),
        window(GroupPreset::Free2, 6),
        window(GroupPreset::Lamplighter, 10),
        window(GroupPreset::Heisenberg, 8),
    ]
}

/// Sup profile against `(d+1)^{1/p}·n` and `n` on `[3, 50]`.
pub fn detectinf() -> super::SuiteReport {
    let mut t = Tally::new("detectinf").with_budget(Duration::from_secs(10));
    for (preset, radius) in [(GroupPreset::Lattice(1), 60), (GroupPreset::Free2, 6)] {
        let w = window(preset, radius);
        let d = w.max_degree() as f64;
        let mut worst = 0.0f64;
        for p in [Lp::ONE, Lp::TWO, Lp::Finite(4.0), Lp::Infinity] {
            let curve = match sup_profile(&w, p, 50) {
                Ok(c) => c,
                Err(e) => {
                    t.check(false, || format!("{} p={p}: {e}", preset.name()));
                    continue;
                }
            };
            for n in 3..=50usize {
                let expected = match p {
                    Lp::Infinity => n as f64,
                    Lp::Finite(e) => (d + 1.0).powf(1.0 / e) * n as f64,
                };
                let point = curve.point(n).expect("every n has a point");
                let got = point.value.finite().unwrap_or(f64::INFINITY);
                let dev = (got - expected).abs();
                worst = worst.max(dev);
                t.check(dev < 1e-9, || {
                    format!("{} p={p} n={n}: {got} ({}) vs {expected}", preset.name(), point.mode.name())
                });
            }
        }
        t.measure(format!("max_abs_dev[{}]", preset.name()), worst);
        if w.max_degree() + 1 > 3 {
            t.note(format!(
                "{}: no subgraph with fewer than {} vertices has a free vertex",
                preset.name(),
                w.max_degree() + 1
            ));
        }
    }
    t.finish()
}

/// Radius of the largest window ball inside `g`, by direct ball growth.
fn brute_inradius(w: &AmbientWindow, g: &Subgraph<'_>) -> u32 {
    let mut best = 0;
    for &v in g.vertices() {
        let mut r = best + 1;
        while w.ball(v, r).iter().all(|&u| g.contains(u)) {
            best = r;
            r += 1;
        }
    }
    best
}

pub fn inftycase(seed: u64) -> super::SuiteReport {
    let mut t = Tally::new("inftycase").with_budget(Duration::from_secs(60));
    let mut rng = sample::rng(seed, 2);
    let mut oracle_checks = 0usize;
    let mut max_oracle_gap = 0.0f64;
    for (preset, radius) in [(GroupPreset::Lattice(2), 30), (GroupPreset::Free2, 8)] {
        let w = window(preset, radius);
        for i in 0..200 {
            let sizes = if i % 2 == 0 { 5..=15 } else { 16..=200 };
            let Some(set) = sample::set_with_free(&w, sizes, 0..=usize::MAX, &mut rng) else {
                t.check(false, || format!("{}: sampler failed", preset.name()));
                continue;
            };
            let g = Subgraph::induced(&w, set).expect("sampled sets are valid");
            let l = brute_inradius(&w, &g);
            let expected = if l == 0 { Value::Infinite } else { Value::Finite(1.0 / l as f64) };
            let r = match dh_infinity(&g) {
                Ok(r) => r,
                Err(e) => {
                    t.check(false, || format!("{}: {e}", preset.name()));
                    continue;
                }
            };
            t.check(r.value == expected && r.is_exact(), || {
                format!("{} |Γ|={}: {:?} vs 1/{l}", preset.name(), g.len(), r.value)
            });
            if let Some(cert) = &r.certificate {
                let q = rayleigh_quotient(&g, cert, Lp::Infinity);
                t.check(cert.is_dirichlet_admissible(&g) && q.map(Value::Finite) == Some(expected), || {
                    format!("{} |Γ|={}: certificate quotient {q:?}", preset.name(), g.len())
                });
            }
            let k = g.free_count();
            if (1..=5).contains(&k) {
                // Grid 12 contains every tent j/l for l ≤ 4.
                match dh_oracle_grid(&g, Lp::Infinity, 12) {
                    Ok(o) => {
                        let gap = (o - 1.0 / l as f64).abs();
                        max_oracle_gap = max_oracle_gap.max(gap);
                        oracle_checks += 1;
                        t.check(gap <= 1e-6, || format!("{} k={k}: oracle {o} vs 1/{l}", preset.name()));
                    }
                    Err(e) => t.check(false, || format!("oracle: {e}")),
                }
            }
        }
    }
    t.measure("oracle_checks", oracle_checks as f64);
    t.measure("max_oracle_gap", max_oracle_gap);
    t.check(oracle_checks > 0, || "no subgraph with 1..=5 free vertices was sampled".into());
    t.finish()
}

pub fn p1oracle(seed: u64) -> super::SuiteReport {
    let mut t = Tally::new("p1oracle").with_budget(Duration::from_secs(300));
    let mut rng = sample::rng(seed, 3);
    let mut collapsed = 0usize;
    let mut worst_gap = 0.0f64;
    for (preset, radius) in [(GroupPreset::Lattice(2), 12), (GroupPreset::Free2, 6), (GroupPreset::Lamplighter, 10)] {
        let w = window(preset, radius);
        for _ in 0..100 {
            let Some(set) = sample::set_with_free(&w, 3..=40, 1..=12, &mut rng) else {
                t.check(false, || format!("{}: sampler failed", preset.name()));
                continue;
            };
            let g = Subgraph::induced(&w, set).expect("sampled sets are valid");
            let (e, b) = match (dh_one_enumerate(&g, GradientKind::Edge), lp_bracket(&g, GradientKind::Edge)) {
                (Ok(e), Ok(b)) => (e, b),
                (Err(err), _) | (_, Err(err)) => {
                    t.check(false, || format!("{}: {err}", preset.name()));
                    continue;
                }
            };
            let ev = e.value.finite().expect("free vertices exist");
            collapsed += b.collapsed() as usize;
            let gap = (ev - b.lower).abs() / ev.max(1.0);
            worst_gap = worst_gap.max(gap);
            t.check(b.collapsed() && gap <= 1e-9, || {
                format!(
                    "{} |Γ|={} k={}: enumeration {ev} vs LP [{}, {}]",
                    preset.name(),
                    g.len(),
                    g.free_count(),
                    b.lower,
                    b.upper
                )
            });
        }
    }
    t.measure("collapsed_brackets", collapsed as f64);
    t.measure("max_rel_gap", worst_gap);
    t.finish()
}

pub fn nesting(seed: u64) -> super::SuiteReport {
    let mut t = Tally::new("nesting");
    let mut rng = sample::rng(seed, 4);
    let mut worst_ext = 0.0f64;
    let mut worst_descent = f64::NEG_INFINITY;
    for w in sampling_windows() {
        let name = w.label().to_string();
        for _ in 0..100 {
            let Some(a) = sample::set_with_free(&w, 3..=12, 0..=usize::MAX, &mut rng) else {
                t.check(false, || format!("{name}: sampler failed"));
                continue;
            };
            let extra = rng.random_range(1..=12);
            let b = sample::grow(&w, &a, extra, &mut rng);
            let ga = Subgraph::induced(&w, a).expect("valid");
            let gb = Subgraph::induced(&w, b).expect("valid");
            for p in [Lp::ONE, Lp::Infinity] {
                let solve = |g: &Subgraph<'_>| if p.is_one() { dh_one_exact(g) } else { dh_infinity(g) };
                match (solve(&ga), solve(&gb)) {
                    (Ok(ra), Ok(rb)) => t.check(rb.value <= ra.value, || {
                        format!("{name} p={p}: value(B)={:?} > value(A)={:?}", rb.value, ra.value)
                    }),
                    (Err(e), _) | (_, Err(e)) => t.check(false, || format!("{name}: {e}")),
                }
            }
            if ga.free_count() == 0 {
                continue;
            }
            let ra = match dirichlet_constant(&ga, Lp::TWO) {
                Ok(r) => r,
                Err(e) => {
                    t.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            let va = ra.value.finite().expect("free vertices exist");
            let ext = ra.certificate.as_ref().expect("descent certifies").zero_extend(&ga, &gb).expect("A ⊆ B");
            let q = rayleigh_quotient(&gb, &ext, Lp::TWO).expect("nonzero");
            let rel = (q - va).abs() / va;
            worst_ext = worst_ext.max(rel);
            t.check(rel <= 1e-9 && ext.is_dirichlet_admissible(&gb), || {
                format!("{name}: extended certificate {q} vs {va}")
            });
            match dh_p_descent(&gb, Lp::TWO) {
                Ok(rb) => {
                    let vb = rb.value.finite().expect("free vertices exist");
                    worst_descent = worst_descent.max(vb - va);
                    t.check(vb <= va + 1e-6, || format!("{name}: descent(B)={vb} > value(A)={va}"));
                }
                Err(e) => t.check(false, || format!("{name}: {e}")),
            }
        }
    }
    t.measure("max_extension_rel_err", worst_ext);
    t.measure("max_descent_excess", worst_descent);
    t.finish()
}

pub fn thickness(seed: u64) -> super::SuiteReport {
    let mut t = Tally::new("thickness");
    let mut rng = sample::rng(seed, 5);
    let mut worst = 0.0f64;
    let windows = sampling_windows();
    for i in 0..100 {
        let w = &windows[i % windows.len()];
        let d = w.max_degree() as f64;
        let Some(set) = sample::set_with_free(w, 3..=40, 0..=usize::MAX, &mut rng) else {
            t.check(false, || "sampler failed".into());
            continue;
        };
        let g = Subgraph::induced(w, set).expect("valid");
        let f = sample::nonnegative(g.len(), &mut rng);
        let edge = gradient(&g, &f);
        for a in 1..=3u32 {
            let thick = thick_gradient(&g, &f, a);
            let pointwise = edge.values().iter().zip(thick.values()).all(|(e, th)| e <= th);
            t.check(pointwise, || format!("{} a={a}: ∇f exceeds ∇_a f somewhere", w.label()));
            for p in [1.0, 2.0] {
                let lhs = p_norm(thick.values(), Lp::Finite(p));
                let rhs = 2.0 * a as f64 * d.powf((a as f64 + 1.0) / p) * p_norm(edge.values(), Lp::Finite(p));
                if rhs > 0.0 {
                    worst = worst.max(lhs / rhs);
                }
                t.check(lhs <= rhs, || format!("{} a={a} p={p}: {lhs} > {rhs}", w.label()));
            }
        }
    }
    t.measure("max_lhs_over_rhs", worst);
    t.finish()
}

/// `‖∇f‖₁` against `∫|∂′{f>t}|dt`, plus the two inequalities that do hold
/// and the exact identity for the thick gradient `∇_1`.
pub fn coarea(seed: u64) -> super::SuiteReport {
    let mut t = Tally::new("coarea");
    let mut rng = sample::rng(seed, 12);
    let windows = sampling_windows();
    let mut worst = 0.0f64;
    let mut sandwich_ok = 0usize;
    let mut thick_ok = 0usize;
    for i in 0..1000 {
        let w = &windows[i % windows.len()];
        let Some(set) = sample::set_with_free(w, 2..=30, 0..=usize::MAX, &mut rng) else {
            t.check(false, || "sampler failed".into());
            continue;
        };
        let g = Subgraph::induced(w, set).expect("valid");
        let f = sample::nonnegative(g.len(), &mut rng);
        let lhs = p_norm(gradient(&g, &f).values(), Lp::ONE);
        let rhs = coarea_integral(&g, &f);
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max(if lhs == rhs { 0.0 } else { rel });
        t.check(lhs == rhs || rel <= 1e-12, || format!("{} |Γ|={}: ‖∇f‖₁={lhs}, integral={rhs}", w.label(), g.len()));
        sandwich_ok += (lhs <= rhs * (1.0 + 1e-12) && rhs <= 2.0 * lhs * (1.0 + 1e-12)) as usize;
        let thick = GradientOperator::thick(&g, 1);
        let thick_lhs = p_norm(thick.apply(f.values()).values(), Lp::ONE);
        let thick_rhs = thick_coarea(&thick, f.values());
        thick_ok += ((thick_lhs - thick_rhs).abs() <= 1e-12 * thick_lhs.max(1.0)) as usize;
    }
    t.measure("max_rel_dev", worst);
    t.measure("sandwich_holds", sandwich_ok as f64);
    t.measure("thick_identity_holds", thick_ok as f64);
    t.finish()
}

/// `∫|{x : the 1-ball stencil of x meets {f>t} and its complement}| dt`.
fn thick_coarea(op: &GradientOperator, values: &[f64]) -> f64 {
    let mut levels: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut total = 0.0;
    let mut in_set = vec![false; values.len()];
    for pair in levels.windows(2) {
        for (flag, &v) in in_set.iter_mut().zip(values) {
            *flag = v > pair[0];
        }
        total += (pair[1] - pair[0]) * op.cut_size(&in_set) as f64;
    }
    total
}
