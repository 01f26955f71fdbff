//! Distances between weight vectors and between finite point sets.
//!
//! All set comparisons in the crate run through [`hausdorff`], with half the
//! L1 distance as the ground metric. On probability vectors this equals the
//! total variation distance, so the same code serves measures and averaged
//! trajectories alike.

/// Half the L1 distance between two equal-length vectors.
///
/// On probability vectors this is the total variation distance and lies in
/// `[0, 1]`.
pub fn half_l1(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    0.5 * a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

/// Largest distance from a point of `a` to the set `b` under `dist`.
///
/// Empty sets contribute nothing: the result is `0.0` when `a` is empty.
pub fn directed_hausdorff_by<F>(a: &[Vec<f64>], b: &[Vec<f64>], dist: F) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let mut worst = 0.0_f64;
    for p in a {
        let mut best = f64::INFINITY;
        for q in b {
            let d = dist(p, q);
            if d < best {
                best = d;
            }
        }
        if best.is_finite() && best > worst {
            worst = best;
        }
    }
    worst
}

/// Symmetric Hausdorff distance under an arbitrary ground metric.
pub fn hausdorff_by<F>(a: &[Vec<f64>], b: &[Vec<f64>], dist: F) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let ab = directed_hausdorff_by(a, b, &dist);
    let ba = directed_hausdorff_by(b, a, &dist);
    ab.max(ba)
}

/// Hausdorff distance with [`half_l1`] as the ground metric.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    hausdorff_by(a, b, half_l1)
}
