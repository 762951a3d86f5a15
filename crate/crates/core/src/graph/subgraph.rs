use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

use super::window::UNREACHED;
use super::{AmbientWindow, VertexId};

/// A finite subgraph `Γ` of a window.
///
/// Vertices get local ids `0..len()` in increasing order of window id.
/// The ambient boundary `∂_XΓ` and the margin to the window frontier are
/// computed once at construction. Only subgraphs with margin at least one
/// ("trusted") see the true ambient boundary.
#[derive(Clone, Debug)]
pub struct Subgraph<'w> {
    window: &'w AmbientWindow,
    vertices: Vec<VertexId>,
    local: HashMap<VertexId, usize>,
    adjacency: Vec<Vec<usize>>,
    induced: bool,
    boundary: Vec<bool>,
    margin: u32,
}

impl<'w> Subgraph<'w> {
    /// The full subgraph on `vertices`.
    pub fn induced(window: &'w AmbientWindow, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let (vertices, local) = index_vertices(window, vertices)?;
        let adjacency = vertices
            .iter()
            .map(|&v| window.neighbors(v).iter().filter_map(|w| local.get(w).copied()).collect())
            .collect();
        Ok(Self::assemble(window, vertices, local, adjacency, true))
    }

    /// A subgraph on `vertices` keeping only the listed window edges.
    pub fn with_edges(
        window: &'w AmbientWindow,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self> {
        let (vertices, local) = index_vertices(window, vertices)?;
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for &(u, v) in edges {
            let (Some(&a), Some(&b)) = (local.get(&u), local.get(&v)) else {
                return Err(Error::InvalidSubgraph(format!("edge {u}-{v} leaves the vertex set")));
            };
            if window.neighbors(u).binary_search(&v).is_err() {
                return Err(Error::InvalidSubgraph(format!("{u}-{v} is not a window edge")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        let induced = vertices
            .iter()
            .enumerate()
            .all(|(i, &v)| window.neighbors(v).iter().filter(|w| local.contains_key(w)).count() == adjacency[i].len());
        Ok(Self::assemble(window, vertices, local, adjacency, induced))
    }

    fn assemble(
        window: &'w AmbientWindow,
        vertices: Vec<VertexId>,
        local: HashMap<VertexId, usize>,
        adjacency: Vec<Vec<usize>>,
        induced: bool,
    ) -> Self {
        let boundary = vertices.iter().map(|&v| window.neighbors(v).iter().any(|w| !local.contains_key(w))).collect();
        let margin = vertices.iter().map(|&v| window.frontier_distance(v)).min().unwrap_or(0);
        Self { window, vertices, local, adjacency, induced, boundary, margin }
    }

    pub fn window(&self) -> &'w AmbientWindow {
        self.window
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Window ids of the vertices, in local order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn global(&self, local: usize) -> VertexId {
        self.vertices[local]
    }

    pub fn local_index(&self, v: VertexId) -> Option<usize> {
        self.local.get(&v).copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.local.contains_key(&v)
    }

    /// Neighbors along the subgraph's own edge set, as local ids.
    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.adjacency[local]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_induced(&self) -> bool {
        self.induced
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn is_trusted(&self) -> bool {
        self.margin >= 1
    }

    pub fn require_trusted(&self) -> Result<()> {
        if self.is_trusted() {
            Ok(())
        } else {
            Err(Error::MarginViolation { margin: self.margin, required: 1 })
        }
    }

    /// `∂_XΓ`: vertices with an ambient neighbor outside the vertex set.
    pub fn ambient_boundary(&self) -> Result<Vec<VertexId>> {
        self.require_trusted()?;
        Ok(self.boundary.iter().zip(&self.vertices).filter(|(&b, _)| b).map(|(_, &v)| v).collect())
    }

    /// Boundary flag by local id, as seen from the window.
    pub fn is_boundary(&self, local: usize) -> bool {
        self.boundary[local]
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Local ids of `VΓ ∖ ∂_XΓ`.
    pub fn free_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.boundary[i]).collect()
    }

    pub fn free_count(&self) -> usize {
        self.len() - self.boundary_len()
    }

    /// Ambient distances from `sources` to every vertex of `Γ`, walking
    /// window edges between vertices of `Γ`. Exact below the distance at
    /// which a geodesic could leave `Γ`.
    pub(crate) fn ambient_bfs(&self, sources: &[usize], limit: Option<u32>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        let limit = limit.unwrap_or(UNREACHED - 1);
        while let Some(i) = queue.pop_front() {
            let next = dist[i] + 1;
            if next > limit {
                continue;
            }
            for w in self.window.neighbors(self.vertices[i]) {
                if let Some(&j) = self.local.get(w) {
                    if dist[j] == UNREACHED {
                        dist[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        dist
    }

    /// Distances inside `Γ` along its own edges.
    pub fn internal_bfs(&self, source: usize, limit: Option<u32>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        let limit = limit.unwrap_or(UNREACHED - 1);
        while let Some(i) = queue.pop_front() {
            let next = dist[i] + 1;
            if next > limit {
                continue;
            }
            for &j in &self.adjacency[i] {
                if dist[j] == UNREACHED {
                    dist[j] = next;
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Ambient distance from each vertex to `VX ∖ VΓ`.
    ///
    /// The last vertex of a geodesic before it leaves `Γ` is a boundary
    /// vertex, so a search inside `Γ` seeded at `∂_XΓ` is exact.
    pub fn distance_to_complement(&self) -> Result<Vec<u32>> {
        self.require_trusted()?;
        let sources: Vec<usize> = (0..self.len()).filter(|&i| self.boundary[i]).collect();
        Ok(self.ambient_bfs(&sources, None).into_iter().map(|d| d.saturating_add(1)).collect())
    }

    /// `l_Γ`, the radius of the largest ambient ball inside `Γ`.
    pub fn inradius(&self) -> Result<u32> {
        Ok(self.inradius_center()?.1)
    }

    /// A center realizing the inradius (smallest local id) and the inradius.
    pub fn inradius_center(&self) -> Result<(usize, u32)> {
        let dist = self.distance_to_complement()?;
        let mut best = (0, 0);
        for (i, &d) in dist.iter().enumerate() {
            if d == UNREACHED {
                // Γ equals its window component with no boundary. The window
                // frontier rule excludes this for trusted subgraphs.
                return Err(Error::MarginViolation { margin: self.margin, required: 1 });
            }
            let r = d - 1;
            if r > best.1 {
                best = (i, r);
            }
        }
        Ok(best)
    }
}

fn index_vertices(
    window: &AmbientWindow,
    vertices: impl IntoIterator<Item = VertexId>,
) -> Result<(Vec<VertexId>, HashMap<VertexId, usize>)> {
    let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(Error::InvalidSubgraph("empty vertex set".into()));
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= window.len()) {
        return Err(Error::InvalidSubgraph(format!("vertex {v} is not in the window")));
    }
    let local = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    Ok((vertices, local))
}
