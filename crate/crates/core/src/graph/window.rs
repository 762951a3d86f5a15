use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

use super::VertexId;

/// Distance sentinel for vertices a search did not reach.
pub const UNREACHED: u32 = u32::MAX;

/// A finite radius-`R` ball of an infinite bounded-degree graph.
///
/// Every vertex strictly inside the ball carries all of its ambient
/// neighbors; vertices at distance exactly `R` from the origin form the
/// frontier, where the ambient graph continues outside the window.
#[derive(Clone, Debug)]
pub struct AmbientWindow {
    label: String,
    adjacency: Vec<Vec<VertexId>>,
    distances: Vec<u32>,
    frontier_distance: Vec<u32>,
    max_degree: usize,
    radius: u32,
    origin: VertexId,
    external_ids: Vec<u64>,
    by_external: HashMap<u64, VertexId>,
}

impl AmbientWindow {
    /// Builds a window from a symmetric adjacency list.
    ///
    /// `max_degree` is the degree bound `d` of the ambient graph; interior
    /// vertices of a Cayley window realize it, frontier vertices may not.
    pub fn new(
        label: impl Into<String>,
        mut adjacency: Vec<Vec<VertexId>>,
        origin: VertexId,
        max_degree: usize,
        external_ids: Option<Vec<u64>>,
    ) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 {
            return Err(Error::InvalidGraph("window has no vertices".into()));
        }
        if origin >= n {
            return Err(Error::InvalidGraph(format!("origin {origin} out of range")));
        }
        if max_degree == 0 {
            return Err(Error::InvalidGraph("degree bound must be positive".into()));
        }
        for (v, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            if nbrs.len() > max_degree {
                return Err(Error::InvalidGraph(format!("vertex {v} has degree {} > {max_degree}", nbrs.len())));
            }
            if let Some(&w) = nbrs.iter().find(|&&w| w >= n || w == v) {
                return Err(Error::InvalidGraph(format!("bad edge {v}-{w}")));
            }
        }
        for (v, nbrs) in adjacency.iter().enumerate() {
            for &w in nbrs {
                if adjacency[w].binary_search(&v).is_err() {
                    return Err(Error::InvalidGraph(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        let external_ids = match external_ids {
            Some(ids) if ids.len() == n => ids,
            Some(_) => return Err(Error::InvalidGraph("external id table has wrong length".into())),
            None => (0..n as u64).collect(),
        };
        let by_external = external_ids.iter().enumerate().map(|(v, &id)| (id, v)).collect();

        let distances = bfs(&adjacency, &[origin], None);
        if let Some(v) = distances.iter().position(|&d| d == UNREACHED) {
            return Err(Error::InvalidGraph(format!("vertex {} is not connected to the origin", external_ids[v])));
        }
        let radius = distances.iter().copied().max().unwrap_or(0);
        let frontier: Vec<VertexId> = (0..n).filter(|&v| distances[v] == radius).collect();
        let frontier_distance = bfs(&adjacency, &frontier, None);

        Ok(Self {
            label: label.into(),
            adjacency,
            distances,
            frontier_distance,
            max_degree,
            radius,
            origin,
            external_ids,
            by_external,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn distance_from_origin(&self, v: VertexId) -> u32 {
        self.distances[v]
    }

    pub fn is_frontier(&self, v: VertexId) -> bool {
        self.distances[v] == self.radius
    }

    pub fn frontier(&self) -> Vec<VertexId> {
        (0..self.len()).filter(|&v| self.is_frontier(v)).collect()
    }

    /// Window distance from `v` to the nearest frontier vertex.
    pub fn frontier_distance(&self, v: VertexId) -> u32 {
        self.frontier_distance[v]
    }

    /// Vertices whose full ambient neighborhood lies in the window.
    pub fn trusted_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).filter(|&v| self.frontier_distance[v] >= 1)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(v, nbrs)| nbrs.iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
    }

    pub fn external_id(&self, v: VertexId) -> u64 {
        self.external_ids[v]
    }

    pub fn vertex_of_external(&self, id: u64) -> Option<VertexId> {
        self.by_external.get(&id).copied()
    }

    /// Multi-source breadth-first distances, optionally stopping at `limit`.
    pub fn bfs_from(&self, sources: &[VertexId], limit: Option<u32>) -> Vec<u32> {
        bfs(&self.adjacency, sources, limit)
    }

    /// Closed ball `B(center, r)` in window distance, sorted by id.
    pub fn ball(&self, center: VertexId, r: u32) -> Vec<VertexId> {
        let dist = self.bfs_from(&[center], Some(r));
        (0..self.len()).filter(|&v| dist[v] <= r).collect()
    }

    /// Vertices in breadth-first order from the origin, ties by id.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = (0..self.len()).collect();
        order.sort_by_key(|&v| (self.distances[v], v));
        order
    }
}

pub(crate) fn bfs(adjacency: &[Vec<VertexId>], sources: &[VertexId], limit: Option<u32>) -> Vec<u32> {
    let mut dist = vec![UNREACHED; adjacency.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    let limit = limit.unwrap_or(UNREACHED - 1);
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        if next > limit {
            continue;
        }
        for &w in &adjacency[v] {
            if dist[w] == UNREACHED {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<Vec<VertexId>> {
        (0..n)
            .map(|v| {
                let mut nbrs = Vec::new();
                if v > 0 {
                    nbrs.push(v - 1);
                }
                if v + 1 < n {
                    nbrs.push(v + 1);
                }
                nbrs
            })
            .collect()
    }

    #[test]
    fn path_window_has_two_frontier_vertices() {
        let w = AmbientWindow::new("path", path(7), 3, 2, None).unwrap();
        assert_eq!(w.radius(), 3);
        assert_eq!(w.frontier(), vec![0, 6]);
        assert_eq!(w.frontier_distance(3), 3);
        assert_eq!(w.trusted_vertices().count(), 5);
        assert_eq!(w.ball(3, 1), vec![2, 3, 4]);
    }

    #[test]
    fn rejects_asymmetric_and_overfull_adjacency() {
        let bad = vec![vec![1], vec![]];
        assert!(AmbientWindow::new("x", bad, 0, 2, None).is_err());
        let loops = vec![vec![0]];
        assert!(AmbientWindow::new("x", loops, 0, 2, None).is_err());
        assert!(AmbientWindow::new("x", path(4), 0, 1, None).is_err());
    }

    #[test]
    fn rejects_disconnected_windows() {
        let adj = vec![vec![1], vec![0], vec![]];
        assert!(matches!(AmbientWindow::new("x", adj, 0, 2, None), Err(Error::InvalidGraph(_))));
    }
}
