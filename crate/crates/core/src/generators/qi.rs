//! Quasi-isometry presets between Cayley windows.

use crate::error::{Error, Result};
use crate::graph::VertexId;

use super::{cayley_window, CayleyWindow, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};

/// A vertex map `q: X → Y` between windows with constants `(K, C)`:
/// `K⁻¹d_X(x,x′) − C ≤ d_Y(qx,qx′) ≤ K d_X(x,x′) + C` and every `y` lies
/// within `C` of the image.
#[derive(Clone, Debug)]
pub struct QIMap {
    pub name: String,
    pub source: CayleyWindow,
    pub target: CayleyWindow,
    map: Vec<VertexId>,
    pub k: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QiCheck {
    pub pairs_checked: usize,
    pub density_checked: usize,
    /// Smallest `K` that works with the declared `C` on the checked pairs.
    pub tightest_k: f64,
}

impl QIMap {
    pub fn new(
        name: impl Into<String>,
        source: CayleyWindow,
        target: CayleyWindow,
        image: impl Fn(&Element) -> Element,
        k: f64,
        c: f64,
    ) -> Result<Self> {
        let map = (0..source.len())
            .map(|v| {
                let y = image(source.element(v));
                target
                    .vertex_of(&y)
                    .ok_or_else(|| Error::QuasiIsometry(format!("image of vertex {v} falls outside the target window")))
            })
            .collect::<Result<_>>()?;
        let qi = Self { name: name.into(), source, target, map, k, c };
        qi.verify()?;
        Ok(qi)
    }

    /// Identity map of a window onto a copy of itself.
    pub fn identity(window: CayleyWindow) -> Result<Self> {
        let target = window.clone();
        Self::new("identity", window, target, Clone::clone, 1.0, 0.0)
    }

    pub fn image(&self, v: VertexId) -> VertexId {
        self.map[v]
    }

    /// Checks the distance inequalities on all pairs of trusted source
    /// vertices, and density on the target ball that a `(K, C)` map must
    /// cover from inside the source window.
    pub fn verify(&self) -> Result<QiCheck> {
        const EPS: f64 = 1e-9;
        let trusted: Vec<VertexId> = self.source.trusted_vertices().collect();
        let mut tightest_k: f64 = 1.0;
        let mut pairs = 0;
        for (i, &x) in trusted.iter().enumerate() {
            for &x2 in &trusted[i + 1..] {
                let dx = self.source.distance(x, x2) as f64;
                let dy = self.target.distance(self.map[x], self.map[x2]) as f64;
                if dy > self.k * dx + self.c + EPS || dy < dx / self.k - self.c - EPS {
                    return Err(Error::QuasiIsometry(format!(
                        "{}: d_X = {dx}, d_Y = {dy} violates K = {}, C = {}",
                        self.name, self.k, self.c
                    )));
                }
                if dx > 0.0 {
                    tightest_k = tightest_k.max((dy - self.c) / dx);
                    if dy + self.c > 0.0 {
                        tightest_k = tightest_k.max(dx / (dy + self.c));
                    }
                }
                pairs += 1;
            }
        }
        let center = self.map[self.source.origin()];
        let reach = ((self.source.radius() as f64 - 1.0) / self.k).floor() - self.c;
        let mut density_checked = 0;
        if reach >= 0.0 {
            let image: Vec<VertexId> = trusted.iter().map(|&x| self.map[x]).collect();
            let covered = self.target.bfs_from(&image, Some(self.c.floor() as u32));
            for y in self.target.ball(center, reach as u32) {
                if covered[y] == crate::graph::UNREACHED {
                    return Err(Error::QuasiIsometry(format!(
                        "{}: target vertex {y} is farther than C from the image",
                        self.name
                    )));
                }
                density_checked += 1;
            }
        }
        Ok(QiCheck { pairs_checked: pairs, density_checked, tightest_k })
    }
}

/// Named quasi-isometry presets.
///
/// * `Z2-gens`: identity of `ℤ²` from the standard generators to the
///   standard plus diagonal generators; `K = 2`, `C = 0`.
/// * `Z-double`: `n ↦ ⌊n/2⌋` on `ℤ`; `K = 2`, `C = 1`.
pub fn qi_preset(name: &str, radius: u32) -> Result<QIMap> {
    match name {
        "Z2-gens" => {
            let source = cayley_window(GroupPreset::Lattice(2), radius, DEFAULT_VERTEX_BUDGET)?;
            let target = cayley_window(GroupPreset::LatticeDiagonal, radius, DEFAULT_VERTEX_BUDGET)?;
            QIMap::new(name, source, target, Clone::clone, 2.0, 0.0)
        }
        "Z-double" => {
            let source = cayley_window(GroupPreset::Lattice(1), radius, DEFAULT_VERTEX_BUDGET)?;
            let target = cayley_window(GroupPreset::Lattice(1), radius / 2 + 2, DEFAULT_VERTEX_BUDGET)?;
            let halve = |g: &Element| match g {
                Element::Lattice(x) => Element::Lattice(vec![x[0].div_euclid(2)]),
                other => other.clone(),
            };
            QIMap::new(name, source, target, halve, 2.0, 1.0)
        }
        other => Err(Error::UnknownPreset(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_verify() {
        let zd = qi_preset("Z-double", 10).unwrap();
        assert_eq!((zd.k, zd.c), (2.0, 1.0));
        assert!(zd.verify().unwrap().pairs_checked > 0);
        let z2 = qi_preset("Z2-gens", 5).unwrap();
        assert_eq!((z2.k, z2.c), (2.0, 0.0));
        assert_eq!(z2.verify().unwrap().tightest_k, 2.0);
        assert!(qi_preset("nope", 3).is_err());
    }

    #[test]
    fn identity_is_an_isometry() {
        let w = cayley_window(GroupPreset::Lattice(2), 4, DEFAULT_VERTEX_BUDGET).unwrap();
        let id = QIMap::identity(w).unwrap();
        assert_eq!((id.k, id.c), (1.0, 0.0));
        assert_eq!(id.verify().unwrap().tightest_k, 1.0);
    }

    #[test]
    fn wrong_constants_are_rejected() {
        let source = cayley_window(GroupPreset::Lattice(1), 8, DEFAULT_VERTEX_BUDGET).unwrap();
        let target = cayley_window(GroupPreset::Lattice(1), 8, DEFAULT_VERTEX_BUDGET).unwrap();
        let halve = |g: &Element| match g {
            Element::Lattice(x) => Element::Lattice(vec![x[0].div_euclid(2)]),
            other => other.clone(),
        };
        assert!(QIMap::new("bad", source, target, halve, 1.0, 0.0).is_err());
    }
}
