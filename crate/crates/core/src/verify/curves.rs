//! Suites over profile curves: trends, bands and constructions.

use std::time::{Duration, Instant};

use super::sample;
use super::{SuiteReport, Tally};
use crate::generators::{cayley_window, folner_family, max_pair_scale, qi_preset, CayleyWindow, Element, GroupPreset};
use crate::graph::{AmbientWindow, Lp, Subgraph, VertexId};
use crate::isoperimetry::{folner_curves, folner_pair_bound, growth_curves, pair_sandwich, IsoCurve, WitnessBudget};
use crate::profiles::{
    bfs_hull, compare_curves, connected_sets_rooted, coset_decompose, dirichlet_profile_with, qi_transport, EvalLimits,
    ProfileCurve, Schedule, SearchStrategy,
};
use crate::solvers::dh_one_exact;

/// Constant ceiling for every band check.
const BAND: u64 = 16;

fn window(preset: GroupPreset, radius: u32) -> CayleyWindow {
    cayley_window(preset, radius, 400_000).expect("preset windows fit the budget")
}

fn ball_curve(w: &AmbientWindow, p: Lp, max_witness: usize, limits: &EvalLimits) -> crate::Result<ProfileCurve> {
    let n_max = max_witness.min(w.trusted_vertices().count());
    let strategy = SearchStrategy::BallFamily { schedule: Schedule::Geometric(1.15), max_witness };
    dirichlet_profile_with(w, p, &strategy, n_max, limits)
}

fn band_ok(c: Option<u64>) -> bool {
    c.is_some_and(|c| c <= BAND)
}

fn constant(c: Option<u64>) -> f64 {
    c.map_or(f64::INFINITY, |c| c as f64)
}

pub fn amenability(seed: u64) -> SuiteReport {
    let mut t = Tally::new("amenability");
    let mut rng = sample::rng(seed, 6);

    // Tree: a positive lower bound on every evaluated witness.
    let tree = window(GroupPreset::Free2, 9);
    let d = tree.max_degree() as f64;
    let mut family: Vec<Vec<VertexId>> = Vec::new();
    let trusted = |v: VertexId| tree.frontier_distance(v) >= 1;
    connected_sets_rooted(&tree, tree.origin(), 6, &trusted, &mut |s| {
        family.push(s.to_vec());
        true
    });
    for _ in 0..200 {
        if let Some(s) = sample::set_with_free(&tree, 10..=300, 1..=usize::MAX, &mut rng) {
            family.push(s);
        }
    }
    let mut c = f64::INFINITY;
    let mut inexact = 0usize;
    for set in &family {
        let g = Subgraph::induced(&tree, set.iter().copied()).expect("valid");
        if g.free_count() == 0 {
            continue;
        }
        match dh_one_exact(&g) {
            Ok(r) => {
                inexact += !r.is_exact() as usize;
                c = c.min(r.value.finite().expect("free vertices exist"));
            }
            Err(e) => t.check(false, || format!("tree witness: {e}")),
        }
    }
    let limits = EvalLimits { lp_max_vertices: 1200, ..EvalLimits::default() };
    match ball_curve(&tree, Lp::ONE, 1100, &limits) {
        Ok(curve) => {
            t.check(c > 0.0 && c.is_finite(), || format!("tree lower constant {c}"));
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for n in 10..=1000 {
                let Some(v) = curve.point(n).and_then(|q| q.value.finite()) else {
                    t.check(false, || format!("tree curve has no value at n={n}"));
                    continue;
                };
                let r = v / n as f64;
                lo = lo.min(r);
                hi = hi.max(r);
                t.check(r >= c / 2.0 && r <= d + 1.0, || format!("tree n={n}: curve/n = {r}"));
            }
            t.measure("tree_curve_over_n_min", lo);
            t.measure("tree_curve_over_n_max", hi);
        }
        Err(e) => t.check(false, || format!("tree curve: {e}")),
    }
    t.measure("tree_c", c);
    t.measure("tree_witnesses", family.len() as f64);
    t.check(inexact == 0, || format!("{inexact} tree witnesses were not solved exactly"));

    // Amenable lattices: curve(n)/n drops below ε as the window grows.
    let eps = 0.05;
    for (preset, radii) in [(GroupPreset::Lattice(1), [25u32, 50, 100]), (GroupPreset::Lattice(2), [25, 50, 100])] {
        let mut previous = f64::INFINITY;
        for r in radii {
            let w = window(preset, r);
            let curve = match ball_curve(&w, Lp::ONE, usize::MAX, &EvalLimits::default()) {
                Ok(c) => c,
                Err(e) => {
                    t.check(false, || format!("{} R={r}: {e}", preset.name()));
                    continue;
                }
            };
            let best = curve.samples().iter().map(|&(n, v)| v / n as f64).fold(f64::INFINITY, f64::min);
            t.measure(format!("min_curve_over_n[{} R={r}]", preset.name()), best);
            t.check(best <= previous, || format!("{} R={r}: {best} did not decrease from {previous}", preset.name()));
            previous = best;
        }
        t.check(previous < eps, || format!("{}: min curve/n {previous} ≥ {eps}", preset.name()));
    }
    t.finish()
}

/// `min_{m ≥ n} m / F̲(m)` over the range where `F̲` is known.
fn folner_bound_curve(inverse: &IsoCurve) -> Vec<(u64, f64)> {
    let mut out: Vec<(u64, f64)> = Vec::with_capacity(inverse.points.len());
    let mut best = f64::INFINITY;
    for &(m, k) in inverse.points.iter().rev() {
        best = best.min(m as f64 / k as f64);
        out.push((m, best));
    }
    out.reverse();
    out
}

/// Lamp configurations in `[−a, a]` with the cursor in `[−a, a]`.
fn lamplighter_box(w: &CayleyWindow, a: i64) -> Option<Vec<VertexId>> {
    let span = (2 * a + 1) as u32;
    let mut out = Vec::new();
    for mask in 0u64..(1 << span) {
        let lamps: Vec<i64> = (0..span).filter(|b| mask >> b & 1 == 1).map(|b| b as i64 - a).collect();
        for cursor in -a..=a {
            out.push(w.vertex_of(&Element::Lamplighter { cursor, lamps: lamps.clone() })?);
        }
    }
    out.sort_unstable();
    Some(out)
}

pub fn folner_p1() -> SuiteReport {
    let mut t = Tally::new("folner-p1");
    let z = window(GroupPreset::Lattice(1), 100);
    let lamp = window(GroupPreset::Lamplighter, 20);
    let boxes: Vec<Vec<VertexId>> = (0..=3).filter_map(|a| lamplighter_box(&lamp, a)).collect();
    t.check(boxes.len() == 4, || format!("only {} lamplighter boxes fit", boxes.len()));
    for (w, user) in [(&z, Vec::new()), (&lamp, boxes)] {
        let name = w.label().to_string();
        let hull_max = if user.is_empty() { usize::MAX } else { 1000 };
        let curve = if user.is_empty() {
            ball_curve(w, Lp::ONE, usize::MAX, &EvalLimits::default())
        } else {
            let mut sets = user.clone();
            let mut size = 1.0f64;
            while (size as usize) <= hull_max {
                if let Some(h) = bfs_hull(w, size as usize) {
                    sets.push(h);
                }
                size = (size * 1.3).max(size + 1.0);
            }
            let n_max = sets.iter().map(Vec::len).max().unwrap_or(0);
            dirichlet_profile_with(w, Lp::ONE, &SearchStrategy::UserSets(sets), n_max, &EvalLimits::default())
        };
        let curve = match curve {
            Ok(c) => c,
            Err(e) => {
                t.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let m_max = curve.points.last().map_or(0, |q| q.n);
        let budget = WitnessBudget { exhaustive_vertices: 8, hull_max, user_sets: user, ..WitnessBudget::default() };
        let (_, inverse) = folner_curves(w, 1, m_max, &budget);
        let bound = folner_bound_curve(&inverse);
        let report = compare_curves(&curve.samples(), &bound);
        t.measure(format!("C_forward[{name}]"), constant(report.forward));
        t.measure(format!("C_backward[{name}]"), constant(report.backward));
        t.check(band_ok(report.forward) && band_ok(report.backward), || format!("{name}: {report:?}"));
    }
    t.finish()
}

pub fn pmonotone() -> SuiteReport {
    let mut t = Tally::new("pmonotone");
    for (preset, radius) in
        [(GroupPreset::Lattice(2), 40), (GroupPreset::Lamplighter, 20), (GroupPreset::Heisenberg, 20)]
    {
        let w = window(preset, radius);
        let name = preset.name();
        let scale = match max_pair_scale(&w) {
            Ok(m) if m >= 1 => m,
            other => {
                t.check(false, || format!("{name}: no pair fits ({other:?})"));
                continue;
            }
        };
        let curves: Vec<_> = [1.0, 2.0, 4.0].iter().map(|&p| folner_pair_bound(&w, Lp::finite(p), 1..=scale)).collect();
        let [Ok(c1), Ok(c2), Ok(c4)] = &curves[..] else {
            t.check(false, || format!("{name}: curve failed"));
            continue;
        };
        for (label, a, b) in [("1≲2", c1, c2), ("2≲4", c2, c4)] {
            let r = compare_curves(&a.samples(), &b.samples());
            t.measure(format!("C[{name} {label}]"), constant(r.forward));
            t.check(band_ok(r.forward), || format!("{name} {label}: {r:?}"));
        }
    }
    t.finish()
}

pub fn qiinv(seed: u64) -> SuiteReport {
    let mut t = Tally::new("qiinv");
    let mut rng = sample::rng(seed, 9);
    for (name, radius) in [("Z2-gens", 24u32), ("Z-double", 80)] {
        let q = match qi_preset(name, radius) {
            Ok(q) => q,
            Err(e) => {
                t.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let mut worst_mass = 0.0f64;
        let mut worst_grad = 0.0f64;
        for _ in 0..100 {
            let Some(set) = sample::set_near(&q.source, q.source.origin(), 3..=40, 1, &mut rng) else {
                t.check(false, || format!("{name}: sampler failed"));
                continue;
            };
            let g = Subgraph::induced(&q.source, set).expect("valid");
            let f = sample::admissible(&g, &mut rng);
            match qi_transport(&q, &g, &f) {
                Ok(tr) => {
                    let c = tr.check(&q, &g, &f, 1.0);
                    let c2 = tr.check(&q, &g, &f, 2.0);
                    worst_mass = worst_mass.max(c.mass_rhs / c.mass_lhs).max(c2.mass_rhs / c2.mass_lhs);
                    worst_grad = worst_grad.max(c.gradient_lhs / c.gradient_rhs).max(c2.gradient_lhs / c2.gradient_rhs);
                    t.check(c.holds() && c2.holds(), || format!("{name} |Γ|={}: {c:?} {c2:?}", g.len()));
                }
                Err(e) => t.check(false, || format!("{name}: {e}")),
            }
        }
        t.measure(format!("max_mass_ratio[{name}]"), worst_mass);
        t.measure(format!("max_gradient_ratio[{name}]"), worst_grad);
        let a = ball_curve(&q.source, Lp::ONE, 2000, &EvalLimits::default());
        let b = ball_curve(&q.target, Lp::ONE, 2000, &EvalLimits::default());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let r = compare_curves(&a.samples(), &b.samples());
                t.measure(format!("C_forward[{name}]"), constant(r.forward));
                t.measure(format!("C_backward[{name}]"), constant(r.backward));
                t.check(band_ok(r.forward) && band_ok(r.backward), || format!("{name}: {r:?}"));
            }
            (Err(e), _) | (_, Err(e)) => t.check(false, || format!("{name} curves: {e}")),
        }
    }
    t.finish()
}

pub fn subgroup(seed: u64) -> SuiteReport {
    let mut t = Tally::new("subgroup");
    let mut rng = sample::rng(seed, 10);
    let gw = window(GroupPreset::Lattice(2), 20);
    let hw = window(GroupPreset::Lattice(1), 30);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let Some(set) = sample::set_near(&gw, gw.origin(), 3..=60, 1, &mut rng) else {
            t.check(false, || "sampler failed".into());
            continue;
        };
        let g = Subgraph::induced(&gw, set).expect("valid");
        let f = sample::admissible(&g, &mut rng);
        let outcome = coset_decompose(&gw, &g, &hw).and_then(|d| Ok((d.total_len(), d.check(&g, &f, Lp::ONE)?)));
        match outcome {
            Ok((total, c)) => {
                worst = worst.max(c.piece_quotient / c.epsilon);
                t.check(total == g.len() && c.holds && c.admissible, || format!("|Γ|={}: {c:?}", g.len()));
            }
            Err(e) => t.check(false, || e.to_string()),
        }
    }
    t.measure("max_piece_over_epsilon", worst);
    let h = ball_curve(&window(GroupPreset::Lattice(1), 200), Lp::ONE, usize::MAX, &EvalLimits::default());
    let g = ball_curve(&window(GroupPreset::Lattice(2), 30), Lp::ONE, usize::MAX, &EvalLimits::default());
    match (h, g) {
        (Ok(h), Ok(g)) => {
            let r = compare_curves(&h.samples(), &g.samples());
            t.measure("C_forward", constant(r.forward));
            t.check(band_ok(r.forward), || format!("{r:?}"));
        }
        (Err(e), _) | (_, Err(e)) => t.check(false, || e.to_string()),
    }
    t.finish()
}

/// Least-squares slope of `log v` against `log n`.
fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn folnerpairs() -> SuiteReport {
    let mut t = Tally::new("folnerpairs");
    for (d, radius) in [(1u8, 200u32), (2, 60), (3, 34)] {
        let started = Instant::now();
        let w = window(GroupPreset::Lattice(d), radius);
        let scale = max_pair_scale(&w).expect("lattices are amenable");
        let expected = 1.0 - 1.0 / d as f64;
        for p in [Lp::ONE, Lp::TWO] {
            let curve = match folner_pair_bound(&w, p, 1..=scale) {
                Ok(c) => c,
                Err(e) => {
                    t.check(false, || format!("d={d}: {e}"));
                    continue;
                }
            };
            let top = curve.points.last().map_or(0, |q| q.n) as f64;
            // 200 log-spaced samples over [top/10, top].
            let samples: Vec<(f64, f64)> = (0..200)
                .map(|i| (top / 10.0 * 10f64.powf(i as f64 / 199.0)).round() as usize)
                .filter_map(|n| curve.point(n).and_then(|q| q.value.finite()).map(|v| (n as f64, v)))
                .collect();
            let slope = log_log_slope(&samples);
            t.measure(format!("slope[d={d} p={p}]"), slope);
            t.check((slope - expected).abs() <= 0.1, || format!("d={d} p={p}: slope {slope} vs {expected}"));
        }
        let pairs = folner_family(&w, 1..=scale).expect("pairs fit");
        let growth = growth_curves(&w, true);
        let top = pairs.last().map_or(0, |q| q.outer.len()) as u64;
        let mut sampled = 0usize;
        for n in 1..top {
            match pair_sandwich(&pairs, &growth.kappa, n) {
                Some(s) => {
                    sampled += 1;
                    t.check(s.holds, || format!("d={d}: {s:?}"));
                }
                None => t.check(false, || format!("d={d} n={n}: sandwich undefined")),
            }
        }
        t.measure(format!("sandwich_points[d={d}]"), sampled as f64);
        let secs = started.elapsed().as_secs_f64();
        t.check(started.elapsed() <= Duration::from_secs(300), || format!("d={d}: {secs:.0}s"));
    }
    t.finish()
}
