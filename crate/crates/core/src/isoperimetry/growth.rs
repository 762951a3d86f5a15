use serde::Serialize;

use crate::graph::{AmbientWindow, UNREACHED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoKind {
    Folner,
    InverseFolner,
    Growth,
    LowerInverseGrowth,
    BallCounts,
}

impl IsoKind {
    pub fn name(self) -> &'static str {
        match self {
            IsoKind::Folner => "folner",
            IsoKind::InverseFolner => "inverse_folner",
            IsoKind::Growth => "growth",
            IsoKind::LowerInverseGrowth => "lower_inverse_growth",
            IsoKind::BallCounts => "ball_counts",
        }
    }
}

/// `(argument, value)` pairs, sorted by argument, over the range where the
/// window computes the function faithfully.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoCurve {
    pub kind: IsoKind,
    pub window: String,
    pub points: Vec<(u64, u64)>,
}

impl IsoCurve {
    pub fn get(&self, x: u64) -> Option<u64> {
        self.points.binary_search_by_key(&x, |q| q.0).ok().map(|i| self.points[i].1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthCurves {
    /// `b_k = |B(1, k)|` for `k ≤ R`.
    pub balls: IsoCurve,
    /// `κ(n) = min{k : b_k > n}` for `n < b_R`.
    pub kappa: IsoCurve,
    /// Largest radius of a ball with at most `m` vertices, for `m < b_R`.
    pub kappa_lower: IsoCurve,
}

/// Ball counts and both inverse growth functions.
///
/// On vertex-transitive windows all balls of a radius have the same size
/// and `κ̲` is read off the basepoint. Otherwise `κ̲(m)` takes the smallest
/// ball of each radius among centres whose ball lies inside the window,
/// which only sees part of the graph and is reported on the same range.
pub fn growth_curves(w: &AmbientWindow, transitive: bool) -> GrowthCurves {
    let r_max = w.radius();
    let label = w.label().to_string();
    let dist = w.bfs_from(&[w.origin()], None);
    let mut b = vec![0u64; r_max as usize + 1];
    for &d in &dist {
        if d != UNREACHED && d <= r_max {
            b[d as usize] += 1;
        }
    }
    for k in 1..b.len() {
        b[k] += b[k - 1];
    }
    let top = b[r_max as usize];
    let kappa: Vec<(u64, u64)> = (1..top).map(|n| (n, b.iter().position(|&bk| bk > n).unwrap() as u64)).collect();

    // Smallest ball of each radius.
    let smallest: Vec<u64> = if transitive {
        b.clone()
    } else {
        (0..=r_max)
            .map(|k| {
                (0..w.len())
                    .filter(|&v| w.frontier_distance(v) >= k)
                    .map(|v| w.ball(v, k).len() as u64)
                    .min()
                    .unwrap_or(u64::MAX)
            })
            .collect()
    };
    let kappa_lower: Vec<(u64, u64)> = (1..top)
        .map(|m| {
            let k = smallest.iter().rposition(|&s| s <= m).unwrap_or(0);
            (m, k as u64)
        })
        .collect();
    GrowthCurves {
        balls: IsoCurve { kind: IsoKind::BallCounts, window: label.clone(), points: (0..).zip(b).collect() },
        kappa: IsoCurve { kind: IsoKind::Growth, window: label.clone(), points: kappa },
        kappa_lower: IsoCurve { kind: IsoKind::LowerInverseGrowth, window: label, points: kappa_lower },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cayley_window, GroupPreset, DEFAULT_VERTEX_BUDGET};

    #[test]
    fn ball_counts() {
        let z = cayley_window(GroupPreset::Lattice(1), 10, DEFAULT_VERTEX_BUDGET).unwrap();
        let c = growth_curves(&z, true);
        for k in 0..=10 {
            assert_eq!(c.balls.get(k), Some(2 * k + 1));
        }
        assert_eq!(c.kappa.get(5), Some(3));
        assert_eq!(c.kappa_lower.get(5), Some(2));
        let z2 = cayley_window(GroupPreset::Lattice(2), 5, DEFAULT_VERTEX_BUDGET).unwrap();
        let c2 = growth_curves(&z2, true);
        assert_eq!((c2.balls.get(1), c2.balls.get(2)), (Some(5), Some(13)));
        let t = cayley_window(GroupPreset::Free2, 4, DEFAULT_VERTEX_BUDGET).unwrap();
        let ct = growth_curves(&t, true);
        assert_eq!((ct.balls.get(1), ct.balls.get(2)), (Some(5), Some(17)));
    }

    #[test]
    fn transitive_shortcut_agrees() {
        let w = cayley_window(GroupPreset::Lattice(2), 6, DEFAULT_VERTEX_BUDGET).unwrap();
        let a = growth_curves(&w, true);
        let b = growth_curves(&w, false);
        assert_eq!(a.kappa_lower, b.kappa_lower);
        for s in [&a.kappa, &a.kappa_lower] {
            assert!(s.points.windows(2).all(|q| q[0].1 <= q[1].1));
        }
    }
}
