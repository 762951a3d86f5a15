//! Controlled Følner pairs `(H_m, H′_m)`: `N_m(H_m) ⊆ H′_m`,
//! `|H′_m| ≤ C|H_m|` and `diam(H′_m) ≤ Cm`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::graph::{VertexId, UNREACHED};

use super::{CayleyWindow, Element, GroupPreset};

#[derive(Clone, Debug)]
pub struct FolnerPair {
    pub m: u32,
    /// `H_m`, sorted window ids.
    pub inner: Vec<VertexId>,
    /// `H′_m`, sorted window ids.
    pub outer: Vec<VertexId>,
    pub constant: f64,
    pub diameter_bound: u32,
}

impl FolnerPair {
    /// Checks all three pair conditions against the window.
    pub fn new(
        window: &CayleyWindow,
        m: u32,
        mut inner: Vec<VertexId>,
        mut outer: Vec<VertexId>,
        constant: f64,
    ) -> Result<Self> {
        inner.sort_unstable();
        outer.sort_unstable();
        if inner.is_empty() || m == 0 {
            return Err(Error::InvalidSubgraph("Følner pair needs m ≥ 1 and H_m ≠ ∅".into()));
        }
        let outer_margin = outer.iter().map(|&v| window.frontier_distance(v)).min().unwrap_or(0);
        if outer_margin < 1 {
            return Err(Error::MarginViolation { margin: outer_margin, required: 1 });
        }
        let inner_margin = inner.iter().map(|&v| window.frontier_distance(v)).min().unwrap();
        if inner_margin < m {
            return Err(Error::MarginViolation { margin: inner_margin, required: m });
        }
        let reach = window.bfs_from(&inner, Some(m));
        let neighborhood = reach.iter().enumerate().filter(|(_, &d)| d != UNREACHED);
        for (v, _) in neighborhood {
            if outer.binary_search(&v).is_err() {
                return Err(Error::InvalidSubgraph(format!("N_{m}(H_m) is not contained in H′_m (vertex {v})")));
            }
        }
        if outer.len() as f64 > constant * inner.len() as f64 {
            return Err(Error::InvalidSubgraph(format!(
                "|H′_{m}| = {} exceeds {constant}·|H_{m}| = {}",
                outer.len(),
                constant * inner.len() as f64
            )));
        }
        let diameter_bound = diameter_bound(window, &outer);
        if diameter_bound as f64 > constant * m as f64 {
            return Err(Error::InvalidSubgraph(format!("diam(H′_{m}) ≤ {diameter_bound} is not below {constant}·{m}")));
        }
        Ok(Self { m, inner, outer, constant, diameter_bound })
    }
}

/// The pair constant `C` used for each amenable preset.
pub fn pair_constant(preset: GroupPreset) -> Result<f64> {
    match preset {
        GroupPreset::Lattice(1) | GroupPreset::Lattice(2) => Ok(4.0),
        GroupPreset::Lattice(_) => Ok(8.0),
        GroupPreset::Heisenberg => Ok(16.0),
        GroupPreset::Lamplighter => Ok(20.0),
        GroupPreset::LatticeDiagonal => Ok(4.0),
        GroupPreset::Free2 => Err(Error::NotAmenablePreset(preset.name())),
    }
}

/// Half-width of the lamp and cursor range of the lamplighter pair at scale `m`.
fn lamplighter_halfwidth(m: u32) -> i64 {
    (m + m.div_ceil(2)) as i64
}

/// The largest `m` whose pair fits in the trusted part of the window.
pub fn max_pair_scale(window: &CayleyWindow) -> Result<u32> {
    let preset = window.preset();
    pair_constant(preset)?;
    let mut m = 0;
    loop {
        let fits = match preset {
            GroupPreset::Lamplighter => {
                let a = lamplighter_halfwidth(m + 1);
                let corner = Element::Lamplighter { cursor: 0, lamps: (-a..=a).collect() };
                let far = preset.distance(&preset.identity(), &corner).unwrap() as u32;
                far + m < window.radius()
            }
            _ => 2 * (m + 1) < window.radius(),
        };
        if !fits {
            return Ok(m);
        }
        m += 1;
    }
}

/// Controlled Følner pairs of an amenable preset, one per `m`.
///
/// Lattices and the Heisenberg group use word balls `H_m = B(m)`,
/// `H′_m = B(2m)`. The lamplighter uses configurations supported in
/// `[−a, a]` with `a = m + ⌈m/2⌉`, cursor in `[−(a − m), a − m]` for
/// `H_m` and in `[−a, a]` for `H′_m`.
pub fn folner_family(window: &CayleyWindow, m_range: RangeInclusive<u32>) -> Result<Vec<FolnerPair>> {
    let preset = window.preset();
    let constant = pair_constant(preset)?;
    m_range
        .map(|m| {
            let (inner, outer) = match preset {
                GroupPreset::Lamplighter => lamplighter_pair(window, m)?,
                _ => {
                    let dist = window.bfs_from(&[window.origin()], Some(2 * m));
                    let inner = (0..window.len()).filter(|&v| dist[v] <= m).collect();
                    let outer = (0..window.len()).filter(|&v| dist[v] <= 2 * m).collect();
                    (inner, outer)
                }
            };
            FolnerPair::new(window, m, inner, outer, constant)
        })
        .collect()
}

fn lamplighter_pair(window: &CayleyWindow, m: u32) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    let a = lamplighter_halfwidth(m);
    let band = a - m as i64;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    let span = (2 * a + 1) as u32;
    for mask in 0u64..(1u64 << span) {
        let lamps: Vec<i64> = (0..span).filter(|b| mask >> b & 1 == 1).map(|b| b as i64 - a).collect();
        for cursor in -a..=a {
            let g = Element::Lamplighter { cursor, lamps: lamps.clone() };
            let v = window.vertex_of(&g).ok_or(Error::MarginViolation { margin: 0, required: 1 })?;
            outer.push(v);
            if cursor.abs() <= band {
                inner.push(v);
            }
        }
    }
    Ok((inner, outer))
}

/// An upper bound on the word-metric diameter of a vertex set; exact for
/// lattices and small lamplighter sets.
fn diameter_bound(window: &CayleyWindow, set: &[VertexId]) -> u32 {
    let preset = window.preset();
    match preset {
        GroupPreset::Lattice(d) => {
            let d = d as usize;
            let coords: Vec<&Vec<i64>> = set
                .iter()
                .map(|&v| match window.element(v) {
                    Element::Lattice(x) => x,
                    _ => unreachable!(),
                })
                .collect();
            // ℓ¹ diameter = max over sign vectors of the spread of the signed sum.
            (0..1u32 << d)
                .map(|signs| {
                    let proj =
                        |x: &Vec<i64>| -> i64 { (0..d).map(|i| if signs >> i & 1 == 1 { x[i] } else { -x[i] }).sum() };
                    let hi = coords.iter().map(|x| proj(x)).max().unwrap();
                    let lo = coords.iter().map(|x| proj(x)).min().unwrap();
                    (hi - lo) as u32
                })
                .max()
                .unwrap_or(0)
        }
        GroupPreset::Lamplighter if set.len() <= 4000 => set
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| set[i + 1..].iter().map(move |&v| (u, v)))
            .map(|(u, v)| preset.distance(window.element(u), window.element(v)).unwrap() as u32)
            .max()
            .unwrap_or(0),
        _ => 2 * set.iter().map(|&v| window.distance_from_origin(v)).max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cayley_window, DEFAULT_VERTEX_BUDGET};
    use super::*;

    #[test]
    fn z1_pair_at_scale_three() {
        let w = cayley_window(GroupPreset::Lattice(1), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let pairs = folner_family(&w, 3..=3).unwrap();
        assert_eq!(pairs[0].inner.len(), 7);
        assert_eq!(pairs[0].outer.len(), 13);
        assert_eq!(pairs[0].diameter_bound, 12);
        // |H′| ≤ 2|H| holds, but diam(H′) = 12 > 2·3, so C = 2 is too small.
        assert!(FolnerPair::new(&w, 3, pairs[0].inner.clone(), pairs[0].outer.clone(), 2.0).is_err());
    }

    #[test]
    fn z2_pair_counts() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let pair = &folner_family(&w, 2..=2).unwrap()[0];
        assert_eq!((pair.inner.len(), pair.outer.len()), (13, 41));
        assert!(41.0 / 13.0 <= pair.constant);
    }

    #[test]
    fn free_group_has_no_pairs() {
        let w = cayley_window(GroupPreset::Free2, 4, DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(matches!(folner_family(&w, 1..=1), Err(Error::NotAmenablePreset(_))));
    }

    #[test]
    fn lamplighter_pairs_fit_their_constant() {
        let w = cayley_window(GroupPreset::Lamplighter, 16, DEFAULT_VERTEX_BUDGET).unwrap();
        let top = max_pair_scale(&w).unwrap();
        assert!(top >= 1);
        let pairs = folner_family(&w, 1..=top).unwrap();
        assert_eq!(pairs[0].outer.len(), 5 * 32);
        assert_eq!(pairs[0].inner.len(), 3 * 32);
    }
}
