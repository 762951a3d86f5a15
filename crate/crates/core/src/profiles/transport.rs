//! Pushing a test function through a quasi-isometry.

use crate::error::{Error, Result};
use crate::generators::QIMap;
use crate::graph::{p_norm, Lp, Subgraph, VertexFunction, UNREACHED};

/// `Γ′` in the target and `f′` on it.
#[derive(Debug)]
pub struct Transported<'w> {
    pub subgraph: Subgraph<'w>,
    pub function: VertexFunction,
    /// Neighbourhood radius used for `Γ′` and for `f′`.
    pub radius: u32,
}

/// The constants of the two norm inequalities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportBounds {
    /// `(d + 1)^{−K C}`: `‖f′‖_p^p ≥ mass · ‖f‖_p^p`.
    pub mass: f64,
    /// `L (d′ + 1)^C` with `L = 2a d^{(a+1)/p}`, `a = 3KC + K`:
    /// `‖∇f′‖_p ≤ gradient · ‖∇f‖_p`.
    pub gradient: f64,
    pub a: u32,
}

/// The neighbourhood radius for `q`. A `(K, 0)` map that is not an isometry
/// can push a free vertex onto the boundary of `q(Γ)`, which makes `f′`
/// vanish, so such maps are treated as `(K, 1)` maps (which they also are).
fn radius(q: &QIMap) -> u32 {
    if q.c == 0.0 && q.k != 1.0 {
        1
    } else {
        q.c.ceil() as u32
    }
}

pub fn transport_bounds(q: &QIMap, p: f64) -> TransportBounds {
    let c = radius(q) as f64;
    let d = q.source.max_degree() as f64;
    let d_target = q.target.max_degree() as f64;
    let a = (3.0 * q.k * c + q.k).ceil() as u32;
    let l = 2.0 * a as f64 * d.powf((a as f64 + 1.0) / p);
    TransportBounds { mass: (d + 1.0).powf(-q.k * c), gradient: l * (d_target + 1.0).powf(c), a }
}

/// `Γ′` is the full subgraph of the target on the closed `C`-neighbourhood
/// of `q(VΓ)`; `f′(y) = max{f(x) : d_Y(y, qx) ≤ C}` off `∂_YΓ′` and `0` on it.
pub fn qi_transport<'q>(q: &'q QIMap, g: &Subgraph<'_>, f: &VertexFunction) -> Result<Transported<'q>> {
    if !std::ptr::eq(g.window(), &*q.source) {
        return Err(Error::InvalidSubgraph("subgraph is not in the source window of the map".into()));
    }
    if !f.is_dirichlet_admissible(g) {
        return Err(Error::InvalidFunction("f must vanish on ∂_XΓ and be nonzero".into()));
    }
    let c = radius(q);
    let image: Vec<usize> = g.vertices().iter().map(|&x| q.image(x)).collect();
    let reach = q.target.bfs_from(&image, Some(c));
    let members: Vec<usize> = (0..q.target.len()).filter(|&y| reach[y] != UNREACHED).collect();
    let gp = Subgraph::induced(&q.target, members.iter().copied())?;
    gp.require_trusted()?;

    let mut values = vec![0.0f64; gp.len()];
    for (i, &x) in g.vertices().iter().enumerate() {
        let fx = f.get(i);
        if fx == 0.0 {
            continue;
        }
        let ball = q.target.bfs_from(&[q.image(x)], Some(c));
        for (y, &d) in ball.iter().enumerate() {
            if d != UNREACHED {
                let j = gp.local_index(y).expect("ball lies in the neighbourhood");
                values[j] = values[j].max(fx);
            }
        }
    }
    for (j, v) in values.iter_mut().enumerate() {
        if gp.is_boundary(j) {
            *v = 0.0;
        }
    }
    Ok(Transported { subgraph: gp, function: VertexFunction::new(values)?, radius: c })
}

/// Both sides of both inequalities for one `(Γ, f)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportCheck {
    pub mass_lhs: f64,
    pub mass_rhs: f64,
    pub gradient_lhs: f64,
    pub gradient_rhs: f64,
}

impl TransportCheck {
    pub fn holds(&self) -> bool {
        self.mass_lhs >= self.mass_rhs * (1.0 - 1e-12) && self.gradient_lhs <= self.gradient_rhs * (1.0 + 1e-12)
    }
}

impl Transported<'_> {
    pub fn check(&self, q: &QIMap, g: &Subgraph<'_>, f: &VertexFunction, p: f64) -> TransportCheck {
        let bounds = transport_bounds(q, p);
        let lp = Lp::finite(p);
        let grad = crate::graph::gradient(g, f);
        let grad_t = crate::graph::gradient(&self.subgraph, &self.function);
        TransportCheck {
            mass_lhs: p_norm(self.function.values(), lp).powf(p),
            mass_rhs: bounds.mass * p_norm(f.values(), lp).powf(p),
            gradient_lhs: p_norm(grad_t.values(), lp),
            gradient_rhs: bounds.gradient * p_norm(grad.values(), lp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, qi_preset, Element, GroupPreset, DEFAULT_VERTEX_BUDGET};
    use crate::solvers::dh_one_exact;

    #[test]
    fn identity_keeps_everything() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let q = QIMap::identity(w).unwrap();
        let g = Subgraph::induced(&q.source, q.source.lattice_box(&[3, 3]).unwrap()).unwrap();
        let center = g.local_index(q.source.origin()).unwrap();
        let f = VertexFunction::indicator(g.len(), [center]);
        let t = qi_transport(&q, &g, &f).unwrap();
        assert_eq!(t.subgraph.vertices(), g.vertices());
        assert_eq!(t.function, f);
        assert!(t.check(&q, &g, &f, 1.0).holds());
    }

    #[test]
    fn z_double_halves_an_interval() {
        let q = qi_preset("Z-double", 30).unwrap();
        let ids: Vec<usize> = (-10..=10).map(|i| q.source.vertex_of(&Element::Lattice(vec![i])).unwrap()).collect();
        let g = Subgraph::induced(&q.source, ids).unwrap();
        let f =
            VertexFunction::new((0..g.len()).map(|i| if g.is_boundary(i) { 0.0 } else { 1.0 + i as f64 }).collect())
                .unwrap();
        let t = qi_transport(&q, &g, &f).unwrap();
        // q maps [-10, 10] onto [-5, 5]; the 1-neighbourhood is [-6, 6].
        assert_eq!(t.subgraph.len(), 13);
        for p in [1.0, 2.0] {
            assert!(t.check(&q, &g, &f, p).holds());
        }
    }

    #[test]
    fn z2_gens_block_adds_diagonals() {
        let q = qi_preset("Z2-gens", 8).unwrap();
        let g = Subgraph::induced(&q.source, q.source.lattice_box(&[3, 3]).unwrap()).unwrap();
        let center = g.local_index(q.source.origin()).unwrap();
        let f = VertexFunction::indicator(g.len(), [center]);
        let t = qi_transport(&q, &g, &f).unwrap();
        assert_eq!(t.radius, 1);
        assert_eq!(t.subgraph.len(), 25);
        assert!(t.check(&q, &g, &f, 1.0).holds());
        let before = dh_one_exact(&g).unwrap().value.finite().unwrap();
        let after = dh_one_exact(&t.subgraph).unwrap().value.finite().unwrap();
        let b = transport_bounds(&q, 1.0);
        assert!(after <= b.gradient / b.mass * before);
    }
}
