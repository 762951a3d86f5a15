//! Witness generation: connected-set enumeration, BFS hulls and random
//! connected samples.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::graph::{AmbientWindow, VertexId};

/// Calls `visit` on every connected vertex set of size `≤ max_size` whose
/// smallest vertex is `root`, restricted to vertices accepted by `allowed`
/// (ESU enumeration: each set is produced exactly once). Stops early and
/// returns `false` when `visit` returns `false`.
pub(crate) fn connected_sets_rooted(
    w: &AmbientWindow,
    root: VertexId,
    max_size: usize,
    allowed: &dyn Fn(VertexId) -> bool,
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    if max_size == 0 || !allowed(root) {
        return true;
    }
    // `near[v]` counts members of the current set within distance ≤ 1 of `v`.
    let mut near = vec![0u32; w.len()];
    let mut set = vec![root];
    mark(w, root, &mut near, 1);
    let ext: Vec<VertexId> = w.neighbors(root).iter().copied().filter(|&u| u > root && allowed(u)).collect();
    let keep_going = extend(w, root, max_size, allowed, &mut set, ext, &mut near, visit);
    mark(w, root, &mut near, -1);
    keep_going
}

fn mark(w: &AmbientWindow, v: VertexId, near: &mut [u32], delta: i32) {
    near[v] = near[v].wrapping_add_signed(delta);
    for &u in w.neighbors(v) {
        near[u] = near[u].wrapping_add_signed(delta);
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    w: &AmbientWindow,
    root: VertexId,
    max_size: usize,
    allowed: &dyn Fn(VertexId) -> bool,
    set: &mut Vec<VertexId>,
    mut ext: Vec<VertexId>,
    near: &mut [u32],
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    if !visit(set) {
        return false;
    }
    if set.len() == max_size {
        return true;
    }
    while let Some(v) = ext.pop() {
        // New candidates: neighbours of v not in or next to the current set.
        let mut next = ext.clone();
        for &u in w.neighbors(v) {
            if u > root && near[u] == 0 && allowed(u) {
                next.push(u);
            }
        }
        set.push(v);
        mark(w, v, near, 1);
        let keep_going = extend(w, root, max_size, allowed, set, next, near, visit);
        mark(w, v, near, -1);
        set.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

/// The first `n` vertices of the window in `(distance from origin, id)`
/// order, restricted to trusted vertices.
pub fn bfs_hull(w: &AmbientWindow, n: usize) -> Option<Vec<VertexId>> {
    let hull: Vec<VertexId> = w.bfs_order().into_iter().filter(|&v| w.frontier_distance(v) >= 1).take(n).collect();
    (hull.len() == n).then_some(hull)
}

/// A connected set of trusted vertices grown from a random trusted seed by
/// repeatedly adding a uniformly chosen neighbour of the current set. May
/// return fewer than `size` vertices if the trusted component is exhausted.
pub fn random_connected_subgraph(w: &AmbientWindow, size: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let trusted: Vec<VertexId> = w.trusted_vertices().collect();
    let Some(&seed) = trusted.choose(rng) else {
        return Vec::new();
    };
    random_connected_from(w, seed, size, rng)
}

pub fn random_connected_from(w: &AmbientWindow, seed: VertexId, size: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let mut member = vec![false; w.len()];
    let mut queued = vec![false; w.len()];
    let mut set = vec![seed];
    member[seed] = true;
    let mut frontier: Vec<VertexId> = Vec::new();
    let push_neighbors = |v: VertexId, frontier: &mut Vec<VertexId>, queued: &mut Vec<bool>, member: &[bool]| {
        for &u in w.neighbors(v) {
            if !member[u] && !queued[u] && w.frontier_distance(u) >= 1 {
                queued[u] = true;
                frontier.push(u);
            }
        }
    };
    push_neighbors(seed, &mut frontier, &mut queued, &member);
    while set.len() < size && !frontier.is_empty() {
        let i = rng.random_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        member[v] = true;
        set.push(v);
        push_neighbors(v, &mut frontier, &mut queued, &member);
    }
    set.sort_unstable();
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use rand::SeedableRng;
    use std::collections::BTreeSet;

    /// Independent count: grow every connected set by one neighbour at a time.
    fn brute_force(w: &AmbientWindow, root: VertexId, k: usize) -> BTreeSet<Vec<VertexId>> {
        let mut all = BTreeSet::new();
        let mut layer: BTreeSet<Vec<VertexId>> = [vec![root]].into();
        while !layer.is_empty() {
            all.extend(layer.iter().cloned());
            let mut next = BTreeSet::new();
            for s in &layer {
                if s.len() == k {
                    continue;
                }
                for &v in s {
                    for &u in w.neighbors(v) {
                        if u > root && !s.contains(&u) && w.frontier_distance(u) >= 1 {
                            let mut t = s.clone();
                            t.push(u);
                            t.sort_unstable();
                            next.insert(t);
                        }
                    }
                }
            }
            layer = next;
        }
        all
    }

    #[test]
    fn esu_matches_brute_force() {
        for preset in [GroupPreset::Lattice(2), GroupPreset::Free2] {
            let w = cayley_window(preset, 5, DEFAULT_VERTEX_BUDGET).unwrap();
            let mut seen = BTreeSet::new();
            let mut count = 0;
            connected_sets_rooted(&w, 0, 5, &|v| w.frontier_distance(v) >= 1, &mut |s| {
                let mut s = s.to_vec();
                s.sort_unstable();
                seen.insert(s);
                count += 1;
                true
            });
            assert_eq!(count, seen.len(), "duplicates");
            assert_eq!(seen, brute_force(&w, 0, 5));
        }
    }

    #[test]
    fn z2_animals_through_origin() {
        // Fixed site animals of size 1..=3 counted with one marked cell: 1, 4, 18.
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let mut by_size = [0usize; 4];
        connected_sets_rooted(&w, 0, 3, &|_| true, &mut |s| {
            by_size[s.len()] += 1;
            true
        });
        assert_eq!(&by_size[1..], &[1, 4, 18]);
    }

    #[test]
    fn hull_and_sampler() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(bfs_hull(&w, 5).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(bfs_hull(&w, w.len()).is_none());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let s = random_connected_subgraph(&w, 20, &mut rng);
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|&v| w.frontier_distance(v) >= 1));
    }
}
