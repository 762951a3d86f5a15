use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{AmbientWindow, Subgraph, VertexFunction, VertexId};
use crate::profiles::{random_connected_from, random_connected_subgraph};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// A random connected trusted set whose size is drawn from `sizes` and
/// whose induced subgraph has a free-vertex count in `free`.
pub fn set_with_free(
    w: &AmbientWindow,
    sizes: RangeInclusive<usize>,
    free: RangeInclusive<usize>,
    rng: &mut impl Rng,
) -> Option<Vec<VertexId>> {
    for _ in 0..10_000 {
        let s = rng.random_range(sizes.clone());
        let set = random_connected_subgraph(w, s, rng);
        let g = Subgraph::induced(w, set.iter().copied()).ok()?;
        if g.is_trusted() && free.contains(&g.free_count()) {
            return Some(set);
        }
    }
    None
}

/// Like [`set_with_free`] but grown from `seed`.
pub fn set_near(
    w: &AmbientWindow,
    seed: VertexId,
    sizes: RangeInclusive<usize>,
    min_free: usize,
    rng: &mut impl Rng,
) -> Option<Vec<VertexId>> {
    for _ in 0..10_000 {
        let s = rng.random_range(sizes.clone());
        let set = random_connected_from(w, seed, s, rng);
        let g = Subgraph::induced(w, set.iter().copied()).ok()?;
        if g.is_trusted() && g.free_count() >= min_free {
            return Some(set);
        }
    }
    None
}

/// `base` plus `extra` random trusted vertices adjacent to the growing set.
pub fn grow(w: &AmbientWindow, base: &[VertexId], extra: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let mut member = vec![false; w.len()];
    let mut set = base.to_vec();
    for &v in base {
        member[v] = true;
    }
    for _ in 0..extra {
        let mut frontier: Vec<VertexId> = set
            .iter()
            .flat_map(|&v| w.neighbors(v).iter().copied())
            .filter(|&u| !member[u] && w.frontier_distance(u) >= 1)
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        if frontier.is_empty() {
            break;
        }
        let u = frontier[rng.random_range(0..frontier.len())];
        member[u] = true;
        set.push(u);
    }
    set.sort_unstable();
    set
}

/// Random values on the free vertices and zero on the boundary; some free
/// value is positive.
pub fn admissible(g: &Subgraph<'_>, rng: &mut impl Rng) -> VertexFunction {
    let free = g.free_vertices();
    let mut values = vec![0.0; g.len()];
    for &v in &free {
        values[v] = if rng.random_bool(0.25) { 0.0 } else { rng.random_range(0.0..1.0) };
    }
    let any = free[rng.random_range(0..free.len())];
    values[any] = 1.0;
    VertexFunction::new(values).expect("finite nonnegative")
}

/// Arbitrary nonnegative values, with repeated levels and zeros.
pub fn nonnegative(len: usize, rng: &mut impl Rng) -> VertexFunction {
    let discrete = rng.random_bool(0.5);
    let values = (0..len)
        .map(|_| {
            if discrete {
                rng.random_range(0..5u32) as f64
            } else if rng.random_bool(0.2) {
                0.0
            } else {
                rng.random_range(0.0..10.0)
            }
        })
        .collect();
    VertexFunction::new(values).expect("finite nonnegative")
}
