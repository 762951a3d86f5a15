//! The `≲` ordering on sampled curves: `f ≲ g` iff `f(n) ≤ C g(Cn) + C`.

use serde::Serialize;

/// Constants are tried at `2^0, 2^1, …, 2^MAX_BAND_EXPONENT`.
pub const MAX_BAND_EXPONENT: u32 = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandReport {
    /// Least power of two `C` with `c1 ≲ c2`.
    pub forward: Option<u64>,
    /// Least power of two `C` with `c2 ≲ c1`.
    pub backward: Option<u64>,
    pub equivalent: bool,
    /// Common `n` range the check ran over.
    pub range: Option<(u64, u64)>,
}

/// Compares two curves given as `(n, value)` samples sorted by `n`.
///
/// `g(Cn)` is read at the largest sample of `g` at or below
/// `min(Cn, n_max)`, where `n_max` is the end of the common range; for the
/// nondecreasing curves this is used on, that never flatters `g`.
pub fn compare_curves(c1: &[(u64, f64)], c2: &[(u64, f64)]) -> BandReport {
    let range = common_range(c1, c2);
    let (forward, backward) = match range {
        Some(r) => (least_constant(c1, c2, r), least_constant(c2, c1, r)),
        None => (None, None),
    };
    BandReport { forward, backward, equivalent: forward.is_some() && backward.is_some(), range }
}

fn common_range(c1: &[(u64, f64)], c2: &[(u64, f64)]) -> Option<(u64, u64)> {
    let lo = c1.first()?.0.max(c2.first()?.0);
    let hi = c1.last()?.0.min(c2.last()?.0);
    (lo <= hi).then_some((lo, hi))
}

fn least_constant(f: &[(u64, f64)], g: &[(u64, f64)], (lo, hi): (u64, u64)) -> Option<u64> {
    (0..=MAX_BAND_EXPONENT).map(|e| 1u64 << e).find(|&c| dominated(f, g, c, lo, hi))
}

fn dominated(f: &[(u64, f64)], g: &[(u64, f64)], c: u64, lo: u64, hi: u64) -> bool {
    let cf = c as f64;
    f.iter().filter(|(n, _)| (lo..=hi).contains(n)).all(|&(n, v)| {
        let arg = n.saturating_mul(c).min(hi);
        let i = g.partition_point(|s| s.0 <= arg);
        // `arg ≥ lo ≥ g[0].0`, so there is a sample at or below it.
        let gv = g[i - 1].1;
        v <= cf * gv + cf
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: impl Fn(f64) -> f64, n_max: u64) -> Vec<(u64, f64)> {
        (1..=n_max).map(|n| (n, f(n as f64))).collect()
    }

    #[test]
    fn identical_and_doubled() {
        let a = curve(|n| n.sqrt(), 500);
        let same = compare_curves(&a, &a);
        assert_eq!((same.forward, same.backward, same.equivalent), (Some(1), Some(1), true));
        let b = curve(|n| 2.0 * n.sqrt(), 500);
        assert_eq!(compare_curves(&b, &a).forward, Some(2));
    }

    #[test]
    fn linear_against_root() {
        let lin = curve(|n| n, 10_000);
        let root = curve(|n| n.sqrt(), 10_000);
        let r = compare_curves(&lin, &root);
        // n ≤ C√(min(Cn, 10⁴)) + C first holds for all n ≤ 10⁴ at C = 128,
        // because the argument is clamped to the range end.
        let direct = (0..=16)
            .map(|e| 1u64 << e)
            .find(|&c| (1..=10_000u64).all(|n| n as f64 <= c as f64 * ((n * c).min(10_000) as f64).sqrt() + c as f64));
        assert_eq!(r.forward, direct);
        assert_eq!(r.forward, Some(128));
        assert_eq!(r.backward, Some(1));
    }

    #[test]
    fn disjoint_ranges() {
        let r = compare_curves(&[(1, 1.0)], &[(5, 1.0)]);
        assert_eq!(r.range, None);
        assert!(!r.equivalent);
    }
}
