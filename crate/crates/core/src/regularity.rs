//! Regularities: nonempty closed families of probability vectors.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::measure::{dot, Measure, TestFunction};
use crate::metric;
use crate::{ARITHMETIC_TOL, IDENTITY_TOL};

/// Largest alphabet for which event enumeration (2^|X| subsets) is allowed.
pub const SUBSET_ENUM_MAX: usize = 20;

const HULL_TOL: f64 = 1e-9;
const HULL_MAX_ITERS: usize = 50_000;

/// A nonempty finite family of measures on a shared alphabet.
///
/// With `convex = false` the regularity is exactly the listed point set and
/// the points must be pairwise distinct. With `convex = true` it is the
/// convex hull of the listed points, which then play the role of vertices
/// (possibly redundant ones until [`convexify`](Self::convexify) prunes
/// them).
#[derive(Debug, Clone, PartialEq)]
pub struct Regularity {
    alphabet: Alphabet,
    points: Vec<Measure>,
    convex: bool,
}

impl Regularity {
    /// Builds a regularity from measures on a common alphabet.
    pub fn new(points: Vec<Measure>, convex: bool) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyRegularity)?;
        let alphabet = first.alphabet().clone();
        for p in &points {
            alphabet.check_same(p.alphabet())?;
        }
        if !convex {
            for i in 0..points.len() {
                for j in (i + 1)..points.len() {
                    if points[i].tv_distance(&points[j])? <= IDENTITY_TOL {
                        return Err(Error::DuplicatePoint { i, j });
                    }
                }
            }
        }
        Ok(Self {
            alphabet,
            points,
            convex,
        })
    }

    /// The one-point regularity `{p}`.
    pub fn singleton(p: Measure) -> Self {
        Self {
            alphabet: p.alphabet().clone(),
            points: vec![p],
            convex: false,
        }
    }

    /// The whole probability simplex: convex hull of all Dirac measures.
    pub fn full_simplex(alphabet: &Alphabet) -> Self {
        let points = alphabet
            .symbols()
            .iter()
            .map(|s| Measure::dirac(alphabet, s).expect("symbol is in its own alphabet"))
            .collect();
        Self {
            alphabet: alphabet.clone(),
            points,
            convex: true,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn points(&self) -> &[Measure] {
        &self.points
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Image of the regularity under `gamma`: the expectation of each listed
    /// point, as a point in `R^m`.
    ///
    /// For a convex regularity these are the images of the vertices; by
    /// linearity of expectation their convex hull is exactly the image of
    /// the hull.
    pub fn image(&self, gamma: &TestFunction) -> Result<Vec<Vec<f64>>> {
        self.alphabet.check_same(gamma.alphabet())?;
        self.points.iter().map(|p| p.expectation(gamma)).collect()
    }

    /// Hausdorff distance between the listed point sets under total
    /// variation.
    ///
    /// Convex regularities are compared by their vertex lists, which is
    /// exact once both sides are vertex-irredundant (e.g. produced by
    /// [`convexify`](Self::convexify)).
    pub fn hausdorff(&self, other: &Regularity) -> Result<f64> {
        self.alphabet.check_same(&other.alphabet)?;
        let a: Vec<Vec<f64>> = self.points.iter().map(|p| p.weights().to_vec()).collect();
        let b: Vec<Vec<f64>> = other.points.iter().map(|p| p.weights().to_vec()).collect();
        Ok(metric::hausdorff(&a, &b))
    }

    /// Convex hull with redundant points removed.
    ///
    /// A point is pruned when a simplex walk certifies it lies within 1e-9
    /// (Euclidean) of the hull of the other surviving points; walks that
    /// exhaust their iteration budget keep the point, which never shrinks
    /// the represented hull.
    pub fn convexify(&self) -> Regularity {
        let n = self.points.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            let others: Vec<&[f64]> = (0..n)
                .filter(|&j| j != i && keep[j])
                .map(|j| self.points[j].weights())
                .collect();
            if in_hull(self.points[i].weights(), &others, HULL_TOL) {
                keep[i] = false;
            }
        }
        let points: Vec<Measure> = self
            .points
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(p, _)| p.clone())
            .collect();
        Regularity {
            alphabet: self.alphabet.clone(),
            points,
            convex: true,
        }
    }

    /// Enumerates every event on which all members of the regularity agree
    /// (spread at most 1e-9) and reports the structure they form.
    ///
    /// Fails when the alphabet exceeds [`SUBSET_ENUM_MAX`] symbols.
    pub fn stochastic_subalgebra(&self) -> Result<StochasticityReport> {
        let n = self.alphabet.len();
        if n > SUBSET_ENUM_MAX {
            return Err(Error::AlphabetTooLarge {
                size: n,
                max: SUBSET_ENUM_MAX,
            });
        }
        let total = 1usize << n;
        // Subset sums per point, folded into running min and max per event.
        let mut lo = vec![f64::INFINITY; total];
        let mut hi = vec![f64::NEG_INFINITY; total];
        let mut sums = vec![0.0_f64; total];
        for p in &self.points {
            let w = p.weights();
            sums[0] = 0.0;
            for mask in 1..total {
                let low = mask.trailing_zeros() as usize;
                sums[mask] = sums[mask & (mask - 1)] + w[low];
            }
            for mask in 0..total {
                if sums[mask] < lo[mask] {
                    lo[mask] = sums[mask];
                }
                if sums[mask] > hi[mask] {
                    hi[mask] = sums[mask];
                }
            }
        }
        let mut agreed: Vec<(u32, f64)> = Vec::new();
        for mask in 0..total {
            if hi[mask] - lo[mask] <= ARITHMETIC_TOL {
                agreed.push((mask as u32, 0.5 * (lo[mask] + hi[mask])));
            }
        }

        // Atoms: refine {X} by every agreed event. Each agreed set ends up a
        // union of atoms, so the agreed collection is closed under union and
        // complement exactly when its size is 2^(number of atoms).
        let full = (total - 1) as u32;
        let mut atoms: Vec<u32> = vec![full];
        for &(a, _) in &agreed {
            if atoms.len() == n {
                break;
            }
            let mut next = Vec::with_capacity(atoms.len() + 1);
            for &b in &atoms {
                let inside = b & a;
                let outside = b & !a;
                if inside != 0 && outside != 0 {
                    next.push(inside);
                    next.push(outside);
                } else {
                    next.push(b);
                }
            }
            atoms = next;
        }
        atoms.sort_by_key(|m| m.trailing_zeros());
        let is_algebra = agreed.len() as u128 == 1u128 << atoms.len();
        let stochastic = agreed.len() > 2;
        Ok(StochasticityReport {
            alphabet: self.alphabet.clone(),
            agreed,
            atoms,
            is_algebra,
            stochastic,
        })
    }
}

/// Result of [`Regularity::stochastic_subalgebra`].
///
/// Events are encoded as bitmasks over alphabet coordinates: bit `i` set
/// means the symbol at coordinate `i` belongs to the event.
#[derive(Debug, Clone)]
pub struct StochasticityReport {
    alphabet: Alphabet,
    agreed: Vec<(u32, f64)>,
    atoms: Vec<u32>,
    is_algebra: bool,
    stochastic: bool,
}

impl StochasticityReport {
    /// Agreed events with their common probability, ascending by mask.
    /// Always contains the empty event and the whole alphabet.
    pub fn agreed(&self) -> &[(u32, f64)] {
        &self.agreed
    }

    pub fn agreed_count(&self) -> usize {
        self.agreed.len()
    }

    /// Common probability of the event given by `symbols`, if agreed.
    pub fn agreed_value(&self, symbols: &[&str]) -> Option<f64> {
        let mut mask = 0u32;
        for s in symbols {
            mask |= 1 << self.alphabet.index_of(s)?;
        }
        self.agreed
            .binary_search_by_key(&mask, |&(m, _)| m)
            .ok()
            .map(|i| self.agreed[i].1)
    }

    /// The coarsest partition of the alphabet generating the agreed events,
    /// ordered by first symbol coordinate.
    pub fn atoms(&self) -> Vec<Vec<&str>> {
        self.atoms.iter().map(|&m| self.set_symbols(m)).collect()
    }

    pub fn atom_masks(&self) -> &[u32] {
        &self.atoms
    }

    /// Whether the agreed events are closed under complement and union.
    /// Agreement alone does not force this; the flag records the check.
    pub fn is_algebra(&self) -> bool {
        self.is_algebra
    }

    /// Whether some event other than the empty set and the whole alphabet
    /// is agreed.
    pub fn is_stochastic(&self) -> bool {
        self.stochastic
    }

    /// True when every subset of the alphabet is agreed.
    pub fn is_full_power_set(&self) -> bool {
        self.agreed.len() == 1usize << self.alphabet.len()
    }

    /// Symbols of the event encoded by `mask`, in coordinate order.
    pub fn set_symbols(&self, mask: u32) -> Vec<&str> {
        (0..self.alphabet.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.alphabet.label(i))
            .collect()
    }
}

/// Whether `p` lies within `tol` (Euclidean) of the convex hull of `others`.
///
/// Minimizes half the squared distance from the hull by a walk over the
/// mixing weights, stepping toward the most improving vertex or away from
/// the worst active one. Both answers are certificate-backed: acceptance by
/// reaching the target distance, rejection by the standard duality bound
/// (the current distance minus the toward-step gap underestimates the
/// optimum). An exhausted iteration budget reports "not inside".
fn in_hull(p: &[f64], others: &[&[f64]], tol: f64) -> bool {
    let k = others.len();
    if k == 0 {
        return false;
    }
    let target = 0.5 * tol * tol;
    let mut start = 0;
    let mut start_d = f64::INFINITY;
    for (j, q) in others.iter().enumerate() {
        let d: f64 = q.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < start_d {
            start_d = d;
            start = j;
        }
    }
    let mut alpha = vec![0.0_f64; k];
    alpha[start] = 1.0;
    let dim = p.len();
    let mut r = vec![0.0_f64; dim];
    for _ in 0..HULL_MAX_ITERS {
        // r = (mix of others) - p, recomputed from alpha to avoid drift
        for (i, ri) in r.iter_mut().enumerate() {
            let mut acc = -p[i];
            for (j, q) in others.iter().enumerate() {
                if alpha[j] > 0.0 {
                    acc += alpha[j] * q[i];
                }
            }
            *ri = acc;
        }
        let f = 0.5 * dot(&r, &r);
        if f <= target {
            return true;
        }
        let mut g_min = f64::INFINITY;
        let mut s = 0;
        let mut g_max_active = f64::NEG_INFINITY;
        let mut v = 0;
        let mut g_alpha = 0.0;
        for (j, q) in others.iter().enumerate() {
            let gj = dot(q, &r);
            if gj < g_min {
                g_min = gj;
                s = j;
            }
            if alpha[j] > 0.0 {
                g_alpha += alpha[j] * gj;
                if gj > g_max_active {
                    g_max_active = gj;
                    v = j;
                }
            }
        }
        let toward_gap = g_alpha - g_min;
        if f - toward_gap > target {
            return false;
        }
        let away_gap = g_max_active - g_alpha;
        let use_away = away_gap > toward_gap && alpha[v] < 1.0 - f64::EPSILON;
        // Qd for direction d over the mixing weights; line search is exact
        // because f is quadratic along d.
        let (qd, t_max): (Vec<f64>, f64) = if use_away {
            let qd = r
                .iter()
                .zip(others[v])
                .zip(p)
                .map(|((&ri, &qi), &pi)| ri - (qi - pi))
                .collect();
            (qd, alpha[v] / (1.0 - alpha[v]))
        } else {
            let qd = others[s]
                .iter()
                .zip(p)
                .zip(&r)
                .map(|((&qi, &pi), &ri)| qi - pi - ri)
                .collect();
            (qd, 1.0)
        };
        let denom = dot(&qd, &qd);
        if denom <= f64::MIN_POSITIVE {
            return false;
        }
        let t = (-dot(&r, &qd) / denom).clamp(0.0, t_max);
        if t <= 0.0 {
            return false;
        }
        if use_away {
            // alpha <- (1+t) alpha - t e_v; t_max keeps alpha_v nonnegative
            for a in alpha.iter_mut() {
                *a *= 1.0 + t;
            }
            alpha[v] = (alpha[v] - t).max(0.0);
        } else {
            for a in alpha.iter_mut() {
                *a *= 1.0 - t;
            }
            alpha[s] += t;
        }
        let mass: f64 = alpha.iter().sum();
        for a in alpha.iter_mut() {
            *a /= mass;
        }
    }
    false
}
