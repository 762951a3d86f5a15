//! Cayley-graph windows for a fixed menu of groups, their Følner pairs and
//! quasi-isometry presets, and ingestion of external edge lists.

mod edgelist;
mod folner;
mod qi;

pub use edgelist::{load_edge_list, parse_edge_list, LoadedGraph};
pub use folner::{folner_family, max_pair_scale, pair_constant, FolnerPair};
pub use qi::{qi_preset, QIMap, QiCheck};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AmbientWindow, VertexId};

/// Default cap on the number of vertices in a generated window.
pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// A finitely generated group with a hardcoded symmetric generating set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupPreset {
    /// `ℤ^d` with the standard generators `±e_i`.
    Lattice(u8),
    /// `ℤ²` with the standard generators and the four diagonals.
    LatticeDiagonal,
    /// Free group on two generators; its Cayley graph is the 4-regular tree.
    Free2,
    /// `ℤ₂ ≀ ℤ` with generators `t^{±1}` and the lamp flip `a`.
    Lamplighter,
    /// Discrete Heisenberg group with generators `x^{±1}, y^{±1}`.
    Heisenberg,
}

/// Canonical normal form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Lattice(Vec<i64>),
    /// Freely reduced word over `a, A, b, B` encoded as `0, 1, 2, 3`.
    Word(Vec<u8>),
    /// Cursor position and the sorted positions of lit lamps.
    Lamplighter {
        cursor: i64,
        lamps: Vec<i64>,
    },
    /// Upper unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    Heisenberg([i64; 3]),
}

const LETTERS: [char; 4] = ['a', 'A', 'b', 'B'];

impl GroupPreset {
    pub fn name(self) -> String {
        match self {
            GroupPreset::Lattice(d) => format!("zd:{d}"),
            GroupPreset::LatticeDiagonal => "zd:2+diag".into(),
            GroupPreset::Free2 => "free:2".into(),
            GroupPreset::Lamplighter => "lamplighter".into(),
            GroupPreset::Heisenberg => "heisenberg".into(),
        }
    }

    pub fn identity(self) -> Element {
        match self {
            GroupPreset::Lattice(d) => Element::Lattice(vec![0; d as usize]),
            GroupPreset::LatticeDiagonal => Element::Lattice(vec![0; 2]),
            GroupPreset::Free2 => Element::Word(Vec::new()),
            GroupPreset::Lamplighter => Element::Lamplighter { cursor: 0, lamps: Vec::new() },
            GroupPreset::Heisenberg => Element::Heisenberg([0; 3]),
        }
    }

    pub fn generator_count(self) -> usize {
        match self {
            GroupPreset::Lattice(d) => 2 * d as usize,
            GroupPreset::LatticeDiagonal => 8,
            GroupPreset::Free2 => 4,
            GroupPreset::Lamplighter => 3,
            GroupPreset::Heisenberg => 4,
        }
    }

    /// Degree of the Cayley graph. The generating sets contain no
    /// duplicates and no identity, so this is the generator count.
    pub fn degree(self) -> usize {
        self.generator_count()
    }

    pub fn is_amenable(self) -> bool {
        !matches!(self, GroupPreset::Free2)
    }

    /// Right multiplication by generator number `gen`.
    pub fn step(self, g: &Element, gen: usize) -> Element {
        match (self, g) {
            (GroupPreset::Lattice(_), Element::Lattice(x)) => {
                let mut x = x.clone();
                x[gen / 2] += if gen.is_multiple_of(2) { 1 } else { -1 };
                Element::Lattice(x)
            }
            (GroupPreset::LatticeDiagonal, Element::Lattice(x)) => {
                const STEPS: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)];
                let (dx, dy) = STEPS[gen];
                Element::Lattice(vec![x[0] + dx, x[1] + dy])
            }
            (GroupPreset::Free2, Element::Word(w)) => {
                let letter = gen as u8;
                let mut w = w.clone();
                if w.last() == Some(&(letter ^ 1)) {
                    w.pop();
                } else {
                    w.push(letter);
                }
                Element::Word(w)
            }
            (GroupPreset::Lamplighter, Element::Lamplighter { cursor, lamps }) => match gen {
                0 => Element::Lamplighter { cursor: cursor + 1, lamps: lamps.clone() },
                1 => Element::Lamplighter { cursor: cursor - 1, lamps: lamps.clone() },
                _ => {
                    let mut lamps = lamps.clone();
                    match lamps.binary_search(cursor) {
                        Ok(i) => {
                            lamps.remove(i);
                        }
                        Err(i) => lamps.insert(i, *cursor),
                    }
                    Element::Lamplighter { cursor: *cursor, lamps }
                }
            },
            (GroupPreset::Heisenberg, Element::Heisenberg([a, b, c])) => match gen {
                0 => Element::Heisenberg([a + 1, *b, *c]),
                1 => Element::Heisenberg([a - 1, *b, *c]),
                2 => Element::Heisenberg([*a, b + 1, c + a]),
                _ => Element::Heisenberg([*a, b - 1, c - a]),
            },
            _ => panic!("element {g:?} does not belong to {}", self.name()),
        }
    }

    /// Word-metric distance `|x⁻¹y|` where a closed form is available.
    pub fn distance(self, x: &Element, y: &Element) -> Option<u64> {
        match (self, x, y) {
            (GroupPreset::Lattice(_), Element::Lattice(a), Element::Lattice(b)) => {
                Some(a.iter().zip(b).map(|(s, t)| s.abs_diff(*t)).sum())
            }
            (GroupPreset::LatticeDiagonal, Element::Lattice(a), Element::Lattice(b)) => {
                a.iter().zip(b).map(|(s, t)| s.abs_diff(*t)).max()
            }
            (GroupPreset::Free2, Element::Word(a), Element::Word(b)) => {
                let common = a.iter().zip(b).take_while(|(s, t)| s == t).count();
                Some((a.len() + b.len() - 2 * common) as u64)
            }
            (
                GroupPreset::Lamplighter,
                Element::Lamplighter { cursor: cx, lamps: lx },
                Element::Lamplighter { cursor: cy, lamps: ly },
            ) => {
                // x⁻¹y = ((L_x Δ L_y) − c_x, c_y − c_x)
                let lamps: Vec<i64> = symmetric_difference(lx, ly).map(|p| p - cx).collect();
                Some(lamplighter_length(&lamps, cy - cx))
            }
            _ => None,
        }
    }

    /// Text form of an element's normal form.
    pub fn encode(self, g: &Element) -> String {
        match g {
            Element::Lattice(x) => join(x),
            Element::Word(w) if w.is_empty() => "e".into(),
            Element::Word(w) => w.iter().map(|&l| LETTERS[l as usize]).collect(),
            Element::Lamplighter { cursor, lamps } => format!("c={cursor};l={}", join(lamps)),
            Element::Heisenberg(abc) => join(abc),
        }
    }

    pub fn decode(self, s: &str) -> Result<Element> {
        let bad = || Error::InvalidGraph(format!("`{s}` is not a {} element", self.name()));
        let ints = |t: &str| -> Result<Vec<i64>> {
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        let element = match self {
            GroupPreset::Lattice(_) | GroupPreset::LatticeDiagonal => Element::Lattice(ints(s)?),
            GroupPreset::Free2 if s == "e" => Element::Word(Vec::new()),
            GroupPreset::Free2 => Element::Word(
                s.chars()
                    .map(|c| LETTERS.iter().position(|&l| l == c).map(|i| i as u8))
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?,
            ),
            GroupPreset::Lamplighter => {
                let (c, l) = s.split_once(';').ok_or_else(bad)?;
                let cursor = c.strip_prefix("c=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let lamps = ints(l.strip_prefix("l=").ok_or_else(bad)?)?;
                Element::Lamplighter { cursor, lamps }
            }
            GroupPreset::Heisenberg => {
                let v = ints(s)?;
                Element::Heisenberg(v.try_into().map_err(|_| bad())?)
            }
        };
        if !self.is_normal_form(&element) {
            return Err(bad());
        }
        Ok(element)
    }

    fn is_normal_form(self, g: &Element) -> bool {
        match (self, g) {
            (GroupPreset::Lattice(d), Element::Lattice(x)) => x.len() == d as usize,
            (GroupPreset::LatticeDiagonal, Element::Lattice(x)) => x.len() == 2,
            (GroupPreset::Free2, Element::Word(w)) => {
                w.iter().all(|&l| l < 4) && w.windows(2).all(|p| p[0] != p[1] ^ 1)
            }
            (GroupPreset::Lamplighter, Element::Lamplighter { lamps, .. }) => lamps.windows(2).all(|p| p[0] < p[1]),
            (GroupPreset::Heisenberg, Element::Heisenberg(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for GroupPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GroupPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zd:1" => Ok(GroupPreset::Lattice(1)),
            "zd:2" => Ok(GroupPreset::Lattice(2)),
            "zd:3" => Ok(GroupPreset::Lattice(3)),
            "zd:2+diag" => Ok(GroupPreset::LatticeDiagonal),
            "free:2" => Ok(GroupPreset::Free2),
            "lamplighter" => Ok(GroupPreset::Lamplighter),
            "heisenberg" => Ok(GroupPreset::Heisenberg),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn symmetric_difference<'a>(a: &'a [i64], b: &'a [i64]) -> impl Iterator<Item = i64> + 'a {
    let only_a = a.iter().filter(|x| b.binary_search(x).is_err());
    let only_b = b.iter().filter(|x| a.binary_search(x).is_err());
    only_a.chain(only_b).copied()
}

/// Word length of `(lamps, cursor)`: one flip per lamp plus the shortest
/// walk from 0 that visits every lamp and ends at the cursor.
fn lamplighter_length(lamps: &[i64], cursor: i64) -> u64 {
    let lo = lamps.iter().copied().chain([0, cursor]).min().unwrap();
    let hi = lamps.iter().copied().chain([0, cursor]).max().unwrap();
    let left_first = (0 - lo) + (hi - lo) + (hi - cursor);
    let right_first = hi + (hi - lo) + (cursor - lo);
    lamps.len() as u64 + left_first.min(right_first) as u64
}

/// A ball of a Cayley graph around the identity, with the group element of
/// every vertex.
#[derive(Clone, Debug)]
pub struct CayleyWindow {
    preset: GroupPreset,
    window: AmbientWindow,
    elements: Vec<Element>,
    index: HashMap<Element, VertexId>,
}

/// Full induced ball of radius `radius` around the identity.
pub fn cayley_window(preset: GroupPreset, radius: u32, budget: usize) -> Result<CayleyWindow> {
    if radius == 0 {
        return Err(Error::InvalidGraph("window radius must be at least 1".into()));
    }
    let identity = preset.identity();
    let mut elements = vec![identity.clone()];
    let mut dist = vec![0u32];
    let mut index = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for gen in 0..preset.generator_count() {
            let next = preset.step(&elements[v], gen);
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() == budget {
                return Err(Error::ResourceLimit { budget });
            }
            index.insert(next.clone(), elements.len());
            elements.push(next);
            dist.push(dist[v] + 1);
            queue.push_back(elements.len() - 1);
        }
    }
    let adjacency = elements
        .iter()
        .enumerate()
        .map(|(v, g)| {
            (0..preset.generator_count())
                .filter_map(|gen| index.get(&preset.step(g, gen)).copied())
                .filter(|&w| w != v)
                .collect()
        })
        .collect();
    let label = format!("{}@R={radius}", preset.name());
    let window = AmbientWindow::new(label, adjacency, 0, preset.degree(), None)?;
    debug_assert_eq!(window.radius(), radius);
    Ok(CayleyWindow { preset, window, elements, index })
}

impl CayleyWindow {
    pub fn preset(&self) -> GroupPreset {
        self.preset
    }

    pub fn window(&self) -> &AmbientWindow {
        &self.window
    }

    pub fn element(&self, v: VertexId) -> &Element {
        &self.elements[v]
    }

    pub fn vertex_of(&self, g: &Element) -> Option<VertexId> {
        self.index.get(g).copied()
    }

    /// Word-metric distance between two window vertices, falling back to
    /// window distance when the preset has no closed form.
    pub fn distance(&self, u: VertexId, v: VertexId) -> u32 {
        match self.preset.distance(&self.elements[u], &self.elements[v]) {
            Some(d) => d as u32,
            None => self.window.bfs_from(&[u], None)[v],
        }
    }

    /// Lattice box of side lengths `dims`, centered at the origin.
    pub fn lattice_box(&self, dims: &[u32]) -> Result<Vec<VertexId>> {
        let d = match self.preset {
            GroupPreset::Lattice(d) => d as usize,
            GroupPreset::LatticeDiagonal => 2,
            _ => return Err(Error::Unsupported("boxes need a lattice preset".into())),
        };
        if dims.len() != d || dims.contains(&0) {
            return Err(Error::InvalidSubgraph(format!("box needs {d} positive side lengths")));
        }
        let ranges: Vec<(i64, i64)> = dims
            .iter()
            .map(|&a| {
                let lo = -((a as i64 - 1) / 2);
                (lo, lo + a as i64 - 1)
            })
            .collect();
        let mut out = Vec::new();
        let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let v = self
                .vertex_of(&Element::Lattice(point.clone()))
                .ok_or(Error::MarginViolation { margin: 0, required: 1 })?;
            out.push(v);
            let mut axis = 0;
            loop {
                if axis == d {
                    out.sort_unstable();
                    return Ok(out);
                }
                if point[axis] < ranges[axis].1 {
                    point[axis] += 1;
                    break;
                }
                point[axis] = ranges[axis].0;
                axis += 1;
            }
        }
    }
}

impl Deref for CayleyWindow {
    type Target = AmbientWindow;

    fn deref(&self) -> &AmbientWindow {
        &self.window
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_sizes_match_ball_counts() {
        let z1 = cayley_window(GroupPreset::Lattice(1), 3, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(z1.len(), 7);
        assert_eq!(z1.max_degree(), 2);
        let tree = cayley_window(GroupPreset::Free2, 2, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(tree.len(), 17);
        assert!(tree.trusted_vertices().all(|v| tree.degree(v) == 4));
        let z2 = cayley_window(GroupPreset::Lattice(2), 2, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(z2.len(), 13);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(cayley_window(GroupPreset::Free2, 10, 1000), Err(Error::ResourceLimit { budget: 1000 })));
    }

    #[test]
    fn closed_form_distances_agree_with_window_distances() {
        for preset in
            [GroupPreset::Lattice(2), GroupPreset::LatticeDiagonal, GroupPreset::Free2, GroupPreset::Lamplighter]
        {
            let w = cayley_window(preset, 6, DEFAULT_VERTEX_BUDGET).unwrap();
            let from_origin = w.bfs_from(&[0], None);
            for v in 0..w.len() {
                let d = preset.distance(&preset.identity(), w.element(v)).unwrap();
                assert_eq!(d as u32, from_origin[v], "{preset} {:?}", w.element(v));
            }
        }
    }

    #[test]
    fn lamplighter_flip_is_an_involution() {
        let p = GroupPreset::Lamplighter;
        let g = p.decode("c=2;l=-1,2,5").unwrap();
        assert_eq!(p.step(&p.step(&g, 2), 2), g);
        assert_eq!(p.step(&g, 2), p.decode("c=2;l=-1,5").unwrap());
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn decode_rejects_non_normal_forms() {
        assert!(GroupPreset::Free2.decode("aA").is_err());
        assert!(GroupPreset::Lamplighter.decode("c=0;l=3,1").is_err());
        assert!(GroupPreset::Lattice(2).decode("1,2,3").is_err());
        assert!("zd:4".parse::<GroupPreset>().is_err());
    }

    #[test]
    fn boxes_are_centered() {
        let z2 = cayley_window(GroupPreset::Lattice(2), 4, DEFAULT_VERTEX_BUDGET).unwrap();
        let block = z2.lattice_box(&[3, 3]).unwrap();
        assert_eq!(block.len(), 9);
        assert!(block.contains(&0));
    }
}
