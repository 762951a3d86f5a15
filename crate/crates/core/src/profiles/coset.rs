//! Splitting a subgraph of `Cay(G, T)` along the cosets of `H ≤ G`.
//!
//! Supported pairs are `ℤ ≤ ℤ²` and `ℤ² ≤ ℤ³`, with `H` spanned by the
//! leading coordinates and `S` the standard generators of `H`. The coset
//! `gH` is labelled by the last coordinate of `g`, and the translate of
//! `Γ ∩ gH` back into `H` drops that coordinate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::generators::{CayleyWindow, Element, GroupPreset};
use crate::graph::{gradient, p_norm, Lp, Subgraph, VertexFunction, VertexId};

/// `Γ_i = g_i^{−1}(Γ ∩ g_iH)` as a subgraph of the `H` window.
#[derive(Debug)]
pub struct Piece<'h> {
    /// Last coordinate of the coset representative.
    pub coset: i64,
    pub subgraph: Subgraph<'h>,
    /// Local indices in `Γ` of the piece's vertices, in the piece's order.
    pub members: Vec<usize>,
}

#[derive(Debug)]
pub struct CosetDecomposition<'h> {
    pub pieces: Vec<Piece<'h>>,
}

/// Result of the per-function piece inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PieceCheck {
    /// `ε = ‖∇f‖_p / ‖f‖_p` on `Γ`.
    pub epsilon: f64,
    /// The piece with the smallest nonzero-restriction quotient.
    pub piece: usize,
    pub piece_quotient: f64,
    /// `‖∇^Y f_i‖_p ≤ ε ‖f_i‖_p` for that piece.
    pub holds: bool,
    /// Every restriction vanishes on the boundary of its piece.
    pub admissible: bool,
}

pub fn coset_decompose<'h>(
    gw: &CayleyWindow,
    g: &Subgraph<'_>,
    hw: &'h CayleyWindow,
) -> Result<CosetDecomposition<'h>> {
    let dim = match (gw.preset(), hw.preset()) {
        (GroupPreset::Lattice(2), GroupPreset::Lattice(1)) => 2,
        (GroupPreset::Lattice(3), GroupPreset::Lattice(2)) => 3,
        (a, b) => return Err(Error::Unsupported(format!("coset decomposition of {} in {}", b.name(), a.name()))),
    };
    if !std::ptr::eq(g.window(), gw.window()) {
        return Err(Error::InvalidSubgraph("subgraph is not in the group window".into()));
    }
    g.require_trusted()?;
    let mut by_coset: BTreeMap<i64, Vec<(VertexId, usize)>> = BTreeMap::new();
    for (i, &v) in g.vertices().iter().enumerate() {
        let Element::Lattice(x) = gw.element(v) else { unreachable!("lattice preset") };
        let h = Element::Lattice(x[..dim - 1].to_vec());
        let y = hw.vertex_of(&h).ok_or(Error::MarginViolation { margin: 0, required: 1 })?;
        by_coset.entry(x[dim - 1]).or_default().push((y, i));
    }
    let mut pieces = Vec::with_capacity(by_coset.len());
    for (coset, mut list) in by_coset {
        list.sort_unstable();
        let subgraph = Subgraph::induced(hw, list.iter().map(|e| e.0))?;
        subgraph.require_trusted()?;
        pieces.push(Piece { coset, subgraph, members: list.into_iter().map(|e| e.1).collect() });
    }
    Ok(CosetDecomposition { pieces })
}

impl CosetDecomposition<'_> {
    pub fn total_len(&self) -> usize {
        self.pieces.iter().map(|q| q.subgraph.len()).sum()
    }

    /// The restriction `f_i` of `f` to piece `i`.
    pub fn restrict(&self, i: usize, f: &VertexFunction) -> VertexFunction {
        VertexFunction::from_raw(self.pieces[i].members.iter().map(|&j| f.get(j)).collect())
    }

    /// Finds a piece whose restriction has quotient at most `f`'s.
    pub fn check(&self, g: &Subgraph<'_>, f: &VertexFunction, p: Lp) -> Result<PieceCheck> {
        if !f.is_dirichlet_admissible(g) {
            return Err(Error::InvalidFunction("f must vanish on ∂_XΓ and be nonzero".into()));
        }
        let epsilon = p_norm(gradient(g, f).values(), p) / p_norm(f.values(), p);
        let mut best: Option<(usize, f64)> = None;
        let mut admissible = true;
        for (i, piece) in self.pieces.iter().enumerate() {
            let fi = self.restrict(i, f);
            if fi.is_zero() {
                continue;
            }
            admissible &= fi.is_dirichlet_admissible(&piece.subgraph);
            let q = p_norm(gradient(&piece.subgraph, &fi).values(), p) / p_norm(fi.values(), p);
            if best.is_none_or(|(_, b)| q < b) {
                best = Some((i, q));
            }
        }
        let (piece, piece_quotient) = best.expect("f is nonzero somewhere");
        Ok(PieceCheck { epsilon, piece, piece_quotient, holds: piece_quotient <= epsilon * (1.0 + 1e-12), admissible })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, DEFAULT_VERTEX_BUDGET};

    fn windows() -> (CayleyWindow, CayleyWindow) {
        (
            cayley_window(GroupPreset::Lattice(2), 8, DEFAULT_VERTEX_BUDGET).unwrap(),
            cayley_window(GroupPreset::Lattice(1), 8, DEFAULT_VERTEX_BUDGET).unwrap(),
        )
    }

    #[test]
    fn block_splits_into_rows() {
        let (gw, hw) = windows();
        let g = Subgraph::induced(&gw, gw.lattice_box(&[3, 3]).unwrap()).unwrap();
        let d = coset_decompose(&gw, &g, &hw).unwrap();
        assert_eq!(d.pieces.len(), 3);
        assert_eq!(d.total_len(), 9);
        assert!(d.pieces.iter().all(|q| q.subgraph.len() == 3 && q.subgraph.edge_count() == 2));

        let center = g.local_index(gw.origin()).unwrap();
        let f = VertexFunction::indicator(9, [center]);
        let c = d.check(&g, &f, Lp::ONE).unwrap();
        // On Γ: ∇f = 1 on the centre and its 4 neighbours, ‖f‖ = 1.
        assert_eq!(c.epsilon, 5.0);
        // The middle row is a path of 3 with the centre free: quotient 3.
        assert_eq!(d.pieces[c.piece].coset, 0);
        assert_eq!(c.piece_quotient, 3.0);
        assert!(c.holds && c.admissible);
    }

    #[test]
    fn column_is_one_piece_per_row() {
        let (gw, hw) = windows();
        let ids: Vec<usize> = (-2..=2).map(|y| gw.vertex_of(&Element::Lattice(vec![0, y])).unwrap()).collect();
        let g = Subgraph::induced(&gw, ids).unwrap();
        let d = coset_decompose(&gw, &g, &hw).unwrap();
        assert_eq!(d.pieces.len(), 5);
        let ids: Vec<usize> = (-2..=2).map(|x| gw.vertex_of(&Element::Lattice(vec![x, 0])).unwrap()).collect();
        let g = Subgraph::induced(&gw, ids).unwrap();
        let d = coset_decompose(&gw, &g, &hw).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert_eq!(d.pieces[0].subgraph.len(), 5);
    }

    #[test]
    fn free_group_is_unsupported() {
        let (_, hw) = windows();
        let fw = cayley_window(GroupPreset::Free2, 3, DEFAULT_VERTEX_BUDGET).unwrap();
        let g = Subgraph::induced(&fw, [0]).unwrap();
        assert!(matches!(coset_decompose(&fw, &g, &hw), Err(Error::Unsupported(_))));
    }
}
