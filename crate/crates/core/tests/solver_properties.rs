use std::sync::OnceLock;

use pdlab::generators::{cayley_window, CayleyWindow, GroupPreset, DEFAULT_VERTEX_BUDGET};
use pdlab::graph::{rayleigh_quotient, GradientKind, Lp, Subgraph, Value};
use pdlab::profiles::random_connected_from;
use pdlab::solvers::{
    dh_infinity, dh_one_enumerate, dh_one_exact, dh_oracle_grid, dh_p_descent_with, dirichlet_constant, lp_bracket,
    DescentOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn windows() -> &'static [CayleyWindow] {
    static W: OnceLock<Vec<CayleyWindow>> = OnceLock::new();
    W.get_or_init(|| {
        [
            (GroupPreset::Lattice(2), 9),
            (GroupPreset::Free2, 5),
            (GroupPreset::Lamplighter, 8),
            (GroupPreset::Heisenberg, 6),
        ]
        .into_iter()
        .map(|(p, r)| cayley_window(p, r, DEFAULT_VERTEX_BUDGET).unwrap())
        .collect()
    })
}

/// A trusted random connected subgraph grown from the basepoint, or `None`
/// if the draw touched the frontier.
fn trusted(which: usize, size: usize, seed: u64) -> Option<Subgraph<'static>> {
    let w = &windows()[which % windows().len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Subgraph::induced(w, random_connected_from(w, w.origin(), size, &mut rng)).unwrap();
    g.is_trusted().then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn universal_upper_bound(which in 0usize..4, size in 2usize..30, seed: u64) {
        let Some(g) = trusted(which, size, seed) else { return Ok(()) };
        prop_assume!(g.free_count() > 0);
        let d = g.window().max_degree() as f64;
        for p in [Lp::ONE, Lp::TWO, Lp::Infinity] {
            let v = dirichlet_constant(&g, p).unwrap().value.finite().unwrap();
            let bound = match p {
                Lp::Infinity => 1.0,
                Lp::Finite(e) => (d + 1.0).powf(1.0 / e),
            };
            prop_assert!(v <= bound + 1e-12, "p={p}: {v} > {bound}");
        }
    }

    #[test]
    fn bracket_contains_both_routes(which in 0usize..4, size in 2usize..26, seed: u64) {
        let Some(g) = trusted(which, size, seed) else { return Ok(()) };
        prop_assume!(g.free_count() > 0 && g.free_count() <= 14);
        let b = lp_bracket(&g, GradientKind::Edge).unwrap();
        let exact = dh_one_exact(&g).unwrap().value.finite().unwrap();
        let subsets = dh_one_enumerate(&g, GradientKind::Edge).unwrap().value.finite().unwrap();
        prop_assert!(b.lower <= b.upper * (1.0 + 1e-9));
        prop_assert!(b.lower <= exact * (1.0 + 1e-9));
        prop_assert!(exact <= subsets * (1.0 + 1e-12));
        // The co-area sandwich bounds the subset quotient by twice the LP value.
        prop_assert!(subsets <= 2.0 * b.lower * (1.0 + 1e-9));
        let q = rayleigh_quotient(&g, &pdlab::graph::VertexFunction::new(b.certificate.clone()).unwrap(), Lp::ONE).unwrap();
        prop_assert!((q - b.upper).abs() <= 1e-9 * q.max(1.0));
    }

    #[test]
    fn infinity_matches_inradius_and_oracle(which in 0usize..4, size in 2usize..16, seed: u64) {
        let Some(g) = trusted(which, size, seed) else { return Ok(()) };
        prop_assume!(g.free_count() > 0);
        let r = dh_infinity(&g).unwrap();
        prop_assert_eq!(r.value, Value::Finite(1.0 / g.inradius().unwrap() as f64));
        let cert = r.certificate.unwrap();
        prop_assert!(cert.is_dirichlet_admissible(&g));
        prop_assert_eq!(rayleigh_quotient(&g, &cert, Lp::Infinity), r.value.finite());
        if g.free_count() <= 5 {
            let oracle = dh_oracle_grid(&g, Lp::Infinity, 10).unwrap();
            prop_assert!(oracle >= r.value.finite().unwrap() - 1e-12);
        }
    }

    #[test]
    fn nesting_over_random_growth(which in 0usize..4, size in 2usize..14, extra in 1usize..10, seed: u64) {
        let Some(a) = trusted(which, size, seed) else { return Ok(()) };
        let w = a.window();
        let mut set = a.vertices().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..extra {
            let grow: Vec<usize> = set.iter().flat_map(|&v| w.neighbors(v).iter().copied()).filter(|u| !set.contains(u) && w.frontier_distance(*u) >= 1).collect();
            if grow.is_empty() { break; }
            set.push(grow[rand::Rng::random_range(&mut rng, 0..grow.len())]);
        }
        let b = Subgraph::induced(w, set).unwrap();
        for p in [Lp::ONE, Lp::Infinity] {
            let va = dirichlet_constant(&a, p).unwrap().value;
            let vb = dirichlet_constant(&b, p).unwrap().value;
            prop_assert!(vb <= va, "p={p}: {vb:?} > {va:?}");
        }
    }

    /// Rescaled starts give the same descent value; the run normalizes them.
    #[test]
    fn descent_ignores_start_scale(which in 0usize..4, size in 3usize..14, seed: u64, c in 0.01f64..100.0) {
        let Some(g) = trusted(which, size, seed) else { return Ok(()) };
        prop_assume!(g.free_count() > 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start: Vec<f64> = (0..g.len()).map(|_| rand::Rng::random_range(&mut rng, 0.0..1.0)).collect();
        let run = |s: Vec<f64>| {
            let opts = DescentOptions { random_starts: 0, p1_start: false, warm_starts: vec![s], ..DescentOptions::default() };
            dh_p_descent_with(&g, Lp::TWO, &opts).unwrap().value
        };
        let base = run(start.clone());
        let scaled = run(start.iter().map(|x| x * c).collect());
        let (x, y) = (base.finite().unwrap(), scaled.finite().unwrap());
        prop_assert!((x - y).abs() <= 1e-9 * x, "{x} vs {y}");
    }
}

#[test]
fn draws_are_mostly_trusted() {
    let hits = (0..200u64).filter(|&s| trusted(s as usize, 2 + (s as usize) % 24, s).is_some()).count();
    assert!(hits >= 100, "{hits}/200");
}
