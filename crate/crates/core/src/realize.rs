//! Generators: sampling nets and symbol sequences with a prescribed
//! regularity, plus seeded iid sequences.
//!
//! The two generators split along connectivity. A sampling net carries a
//! fresh tuple per index, so its per-item empirical measures can sit on any
//! finite target set, disconnected or not. A single sequence moves its
//! prefix measure by at most `1/(n+1)` per symbol, so its limit set is
//! necessarily connected; [`sequence_realize`] therefore accepts only
//! targets that are connected as represented.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::measure::{Measure, RationalMeasure};
use crate::regularity::Regularity;

/// Tuples emitted per (round, target) pair by default.
///
/// Repeating each round's targets gives the tail of the net enough items
/// for windowed recurrence detection even on small schedules.
pub const DEFAULT_SWEEPS: usize = 8;

const MESH_POINT_LIMIT: usize = 100_000;
const NET_SYMBOL_LIMIT: u64 = 50_000_000;

/// Precision and denominator ladders driving [`net_realize`].
///
/// Round `r` (1-based) discretizes the target to a mesh of step
/// `epsilon(r)` and rationalizes each mesh point with denominator
/// `denominator(r)`; every mesh point is emitted `sweeps` times per round.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationSchedule {
    epsilons: Vec<f64>,
    denominators: Vec<u64>,
    sweeps: usize,
}

impl RealizationSchedule {
    /// Geometric ladders `eps_r = eps0 * 2^(1-r)` and `D_r = d0 * 2^r`,
    /// for `r = 1..=rounds`, with the default sweep count.
    ///
    /// With `eps0 = 0.5` and `d0 = 16` this is the standard schedule
    /// `eps_r = 2^-r`, `D_r = 16 * 2^r`.
    pub fn new(rounds: usize, eps0: f64, d0: u64) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidParameter("rounds must be at least 1".into()));
        }
        if !(eps0 > 0.0 && eps0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps0 must lie in (0, 1], got {eps0}"
            )));
        }
        if d0 == 0 {
            return Err(Error::InvalidParameter("d0 must be at least 1".into()));
        }
        let mut epsilons = Vec::with_capacity(rounds);
        let mut denominators = Vec::with_capacity(rounds);
        for r in 1..=rounds {
            epsilons.push(eps0 * (2.0_f64).powi(1 - r as i32));
            let d = 1u64
                .checked_shl(r as u32)
                .and_then(|f| d0.checked_mul(f))
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("denominator ladder overflows at round {r}"))
                })?;
            denominators.push(d);
        }
        Self::from_ladders(epsilons, denominators, DEFAULT_SWEEPS)
    }

    /// Explicit ladders; `epsilons` strictly decreasing and positive,
    /// `denominators` strictly increasing, aligned lengths.
    pub fn from_ladders(
        epsilons: Vec<f64>,
        denominators: Vec<u64>,
        sweeps: usize,
    ) -> Result<Self> {
        if epsilons.is_empty() || epsilons.len() != denominators.len() {
            return Err(Error::InvalidParameter(
                "ladders must be nonempty and of equal length".into(),
            ));
        }
        if sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be at least 1".into()));
        }
        for (r, &e) in epsilons.iter().enumerate() {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon ladder entry {r} must be positive, got {e}"
                )));
            }
            if r > 0 && e >= epsilons[r - 1] {
                return Err(Error::InvalidParameter(
                    "epsilon ladder must be strictly decreasing".into(),
                ));
            }
        }
        for (r, &d) in denominators.iter().enumerate() {
            if d == 0 {
                return Err(Error::InvalidParameter(
                    "denominator ladder entries must be positive".into(),
                ));
            }
            if r > 0 && d <= denominators[r - 1] {
                return Err(Error::InvalidParameter(
                    "denominator ladder must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            epsilons,
            denominators,
            sweeps,
        })
    }

    /// Replaces the sweep count, keeping the ladders.
    pub fn with_sweeps(mut self, sweeps: usize) -> Result<Self> {
        if sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be at least 1".into()));
        }
        self.sweeps = sweeps;
        Ok(self)
    }

    pub fn rounds(&self) -> usize {
        self.epsilons.len()
    }

    /// Mesh step of round `r`, 0-based.
    pub fn epsilon(&self, r: usize) -> f64 {
        self.epsilons[r]
    }

    /// Tuple length of round `r`, 0-based.
    pub fn denominator(&self, r: usize) -> u64 {
        self.denominators[r]
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }
}

/// Provenance of a generated net, kept in memory (net files carry the
/// per-item round/target fields only; configs are the replay record).
#[derive(Debug, Clone, PartialEq)]
pub struct NetMeta {
    pub description: String,
    pub seed: Option<u64>,
}

/// One indexed observation tuple. Symbols are alphabet coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NetItem {
    pub lambda: u64,
    pub round: u32,
    pub target: u32,
    pub symbols: Vec<usize>,
}

/// An ordered family of fresh observation tuples over one alphabet.
///
/// Tuple lengths are nondecreasing along the index; generators make them
/// unbounded as rounds grow, which is what lets tail analyses sharpen.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingNet {
    alphabet: Alphabet,
    items: Vec<NetItem>,
    meta: NetMeta,
}

impl SamplingNet {
    /// Validates and wraps externally assembled items: nonempty net,
    /// nonempty tuples, in-range symbols, nondecreasing lengths.
    pub fn from_items(alphabet: Alphabet, items: Vec<NetItem>, meta: NetMeta) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyNet);
        }
        for (k, item) in items.iter().enumerate() {
            if item.symbols.is_empty() {
                return Err(Error::EmptyTuple);
            }
            for &s in &item.symbols {
                if s >= alphabet.len() {
                    return Err(Error::Malformed(format!(
                        "symbol coordinate {s} out of range for alphabet of {}",
                        alphabet.len()
                    )));
                }
            }
            if k > 0 && item.symbols.len() < items[k - 1].symbols.len() {
                return Err(Error::DecreasingLengths { index: k });
            }
        }
        Ok(Self {
            alphabet,
            items,
            meta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn items(&self) -> &[NetItem] {
        &self.items
    }

    pub fn meta(&self) -> &NetMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Provenance of a generated sequence, serialized into its file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceMeta {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A single symbol sequence over one alphabet. Symbols are coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence {
    alphabet: Alphabet,
    symbols: Vec<usize>,
    meta: SequenceMeta,
}

impl SymbolSequence {
    pub fn from_symbols(
        alphabet: Alphabet,
        symbols: Vec<usize>,
        meta: SequenceMeta,
    ) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySequence);
        }
        for &s in &symbols {
            if s >= alphabet.len() {
                return Err(Error::Malformed(format!(
                    "symbol coordinate {s} out of range for alphabet of {}",
                    alphabet.len()
                )));
            }
        }
        Ok(Self {
            alphabet,
            symbols,
            meta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn meta(&self) -> &SequenceMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbols as labels, in order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|&s| self.alphabet.label(s))
    }
}

/// Best rational approximation of `p` with the given denominator.
///
/// Largest-remainder rounding: floor every scaled weight, then hand the
/// leftover units to the largest remainders (ties to the smaller
/// coordinate). This minimizes the total variation distance among all
/// numerator vectors with this denominator and guarantees
/// `tv(p, q) <= |X| / (2 D)`.
pub fn rationalize(p: &Measure, denominator: u64) -> Result<RationalMeasure> {
    if denominator == 0 {
        return Err(Error::InvalidParameter(
            "denominator must be at least 1".into(),
        ));
    }
    let d = denominator as f64;
    let n = p.weights().len();
    let mut numerators = vec![0u64; n];
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(n);
    let mut assigned: u64 = 0;
    for (i, &w) in p.weights().iter().enumerate() {
        let scaled = w * d;
        let base = scaled.floor().min(d) as u64;
        numerators[i] = base;
        assigned += base;
        remainders.push((i, scaled - base as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut deficit = denominator.saturating_sub(assigned) as usize;
    for &(i, _) in &remainders {
        if deficit == 0 {
            break;
        }
        numerators[i] += 1;
        deficit -= 1;
    }
    RationalMeasure::new(p.alphabet(), numerators, denominator)
}

/// The length-`D` tuple whose empirical measure is exactly `q`.
///
/// Symbols are interleaved round-robin: repeated sweeps over the alphabet
/// order, emitting one copy of every symbol with count remaining, so that
/// prefixes of the tuple already resemble `q`.
pub fn tuple_from_rational(q: &RationalMeasure) -> Vec<usize> {
    let len = q.denominator() as usize;
    let mut remaining = q.numerators().to_vec();
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        for (i, r) in remaining.iter_mut().enumerate() {
            if *r > 0 {
                *r -= 1;
                out.push(i);
            }
        }
    }
    out
}

/// Finite mesh covering the target: the listed points themselves for point
/// sets, a barycentric grid over the vertices (mixture step `1/ceil(1/eps)`)
/// for polytopes.
fn target_mesh(target: &Regularity, eps: f64) -> Result<Vec<Measure>> {
    if !target.is_convex() || target.len() == 1 {
        return Ok(target.points().to_vec());
    }
    let g = (1.0 / eps).ceil() as u64;
    let v = target.len();
    let mut count: u128 = 1;
    for i in 1..v {
        count = count.saturating_mul(g as u128 + i as u128) / i as u128;
        if count > MESH_POINT_LIMIT as u128 {
            return Err(Error::InvalidParameter(format!(
                "polytope mesh at step {eps} needs more than {MESH_POINT_LIMIT} points; \
                 coarsen the schedule or reduce the vertex count"
            )));
        }
    }
    let alphabet = target.alphabet();
    let dim = alphabet.len();
    let vertices: Vec<&[f64]> = target.points().iter().map(|p| p.weights()).collect();
    let mut mesh = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u64; v];
    fill_mesh(&mut mesh, &mut coeffs, 0, g, g, &vertices, dim, alphabet)?;
    Ok(mesh)
}

fn fill_mesh(
    mesh: &mut Vec<Measure>,
    coeffs: &mut Vec<u64>,
    pos: usize,
    left: u64,
    g: u64,
    vertices: &[&[f64]],
    dim: usize,
    alphabet: &Alphabet,
) -> Result<()> {
    if pos == coeffs.len() - 1 {
        coeffs[pos] = left;
        let mut w = vec![0.0_f64; dim];
        for (c, vert) in coeffs.iter().zip(vertices) {
            if *c > 0 {
                let a = *c as f64 / g as f64;
                for (wi, &vi) in w.iter_mut().zip(*vert) {
                    *wi += a * vi;
                }
            }
        }
        mesh.push(Measure::new(alphabet, &w)?);
        return Ok(());
    }
    // First vertex takes the most weight first: deterministic order with
    // the vertices themselves appearing at the extremes of the sweep.
    let mut k = left;
    loop {
        coeffs[pos] = k;
        fill_mesh(mesh, coeffs, pos + 1, left - k, g, vertices, dim, alphabet)?;
        if k == 0 {
            break;
        }
        k -= 1;
    }
    Ok(())
}

/// Realizes `target` as a sampling net.
///
/// Each round discretizes the target with the round's mesh step and emits,
/// `sweeps` times over, one tuple per mesh point with the round's
/// denominator. Item `meta` records the round and target index. Every item
/// of round `r` satisfies `tv(empirical, target_j) <= |X| / (2 D_r)`, so
/// the limit points of the per-item empirical measures converge to the
/// target in Hausdorff distance as rounds grow.
pub fn net_realize(target: &Regularity, schedule: &RealizationSchedule) -> Result<SamplingNet> {
    let alphabet = target.alphabet().clone();
    let mut items = Vec::new();
    let mut lambda = 1u64;
    let mut budget: u64 = 0;
    for r in 0..schedule.rounds() {
        let mesh = target_mesh(target, schedule.epsilon(r))?;
        let d = schedule.denominator(r);
        budget = budget
            .saturating_add(mesh.len() as u64 * schedule.sweeps() as u64 * d);
        if budget > NET_SYMBOL_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "schedule emits more than {NET_SYMBOL_LIMIT} symbols; shrink rounds or ladders"
            )));
        }
        for _ in 0..schedule.sweeps() {
            for (j, q) in mesh.iter().enumerate() {
                let tuple = tuple_from_rational(&rationalize(q, d)?);
                items.push(NetItem {
                    lambda,
                    round: (r + 1) as u32,
                    target: j as u32,
                    symbols: tuple,
                });
                lambda += 1;
            }
        }
    }
    let meta = NetMeta {
        description: format!(
            "net_realize: {} rounds x {} sweeps, {} target points",
            schedule.rounds(),
            schedule.sweeps(),
            target.len()
        ),
        seed: None,
    };
    SamplingNet::from_items(alphabet, items, meta)
}

/// Number of symbols required to steer a prefix of length `n` to within
/// `epsilon` of a fresh target: appending `m` symbols leaves the old prefix
/// a weight of `n/(n+m) <= epsilon`.
pub fn steering_block_length(n: usize, epsilon: f64) -> usize {
    (n as f64 * (1.0 - epsilon) / epsilon).ceil() as usize
}

/// Realizes a connected target as a single symbol sequence.
///
/// The prefix empirical measure is steered cyclically through an
/// epsilon-mesh of the target: each block of `m` symbols (the steering
/// length, floored at `ceil(|X| / (2 epsilon))` so the block's own rounding
/// error stays within epsilon) realizes the rational approximation of the
/// next mesh point, giving `tv(prefix, target) <= epsilon + |X|/(2m)` at
/// block ends. Point sets with more than one point are rejected unless
/// `as_path` asserts that the listed order is a path to traverse; convex
/// targets and singletons are connected as represented.
pub fn sequence_realize(
    target: &Regularity,
    total_length: usize,
    epsilon: f64,
    as_path: bool,
) -> Result<SymbolSequence> {
    if total_length == 0 {
        return Err(Error::InvalidParameter(
            "total_length must be at least 1".into(),
        ));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !as_path && !target.is_convex() && target.len() > 1 {
        return Err(Error::DisconnectedTarget);
    }
    let mesh = target_mesh(target, epsilon)?;
    let alphabet = target.alphabet().clone();
    let min_block = (alphabet.len() as f64 / (2.0 * epsilon)).ceil() as usize;
    let mut symbols = Vec::with_capacity(total_length);
    let mut cursor = 0usize;
    while symbols.len() < total_length {
        let q = &mesh[cursor % mesh.len()];
        cursor += 1;
        let m = steering_block_length(symbols.len(), epsilon)
            .max(min_block)
            .max(1)
            .min(total_length - symbols.len());
        let block = tuple_from_rational(&rationalize(q, m as u64)?);
        symbols.extend(block);
    }
    let meta = SequenceMeta {
        generator: format!(
            "sequence_realize: {} mesh targets, epsilon {epsilon}, length {total_length}",
            mesh.len()
        ),
        seed: None,
    };
    SymbolSequence::from_symbols(alphabet, symbols, meta)
}

/// `n` independent draws from `mu` using a seeded deterministic generator.
/// The same seed always reproduces the same sequence.
pub fn iid_generate(mu: &Measure, n: usize, seed: u64) -> Result<SymbolSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let alphabet = mu.alphabet().clone();
    let mut cumulative = Vec::with_capacity(alphabet.len());
    let mut acc = 0.0_f64;
    for &w in mu.weights() {
        acc += w;
        cumulative.push(acc);
    }
    let last = alphabet.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.random();
        let mut idx = last;
        for (i, &c) in cumulative.iter().enumerate() {
            if u < c {
                idx = i;
                break;
            }
        }
        symbols.push(idx);
    }
    let meta = SequenceMeta {
        generator: format!("iid: n={n}"),
        seed: Some(seed),
    };
    SymbolSequence::from_symbols(alphabet, symbols, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab2() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn m(ab: &Alphabet, w: &[f64]) -> Measure {
        Measure::new(ab, w).unwrap()
    }

    #[test]
    fn schedule_default_ladders() {
        let s = RealizationSchedule::new(3, 0.5, 16).unwrap();
        assert_eq!(s.rounds(), 3);
        assert_eq!(s.epsilon(0), 0.5);
        assert_eq!(s.epsilon(1), 0.25);
        assert_eq!(s.epsilon(2), 0.125);
        assert_eq!(s.denominator(0), 32);
        assert_eq!(s.denominator(1), 64);
        assert_eq!(s.denominator(2), 128);
        assert_eq!(s.sweeps(), DEFAULT_SWEEPS);
    }

    #[test]
    fn schedule_validation() {
        assert!(RealizationSchedule::new(0, 0.5, 16).is_err());
        assert!(RealizationSchedule::new(3, 0.0, 16).is_err());
        assert!(RealizationSchedule::new(3, 1.5, 16).is_err());
        assert!(RealizationSchedule::new(3, 0.5, 0).is_err());
        assert!(RealizationSchedule::new(60, 0.5, 16).is_err());
        assert!(RealizationSchedule::from_ladders(vec![0.5, 0.5], vec![8, 16], 1).is_err());
        assert!(RealizationSchedule::from_ladders(vec![0.5, 0.25], vec![16, 16], 1).is_err());
        assert!(RealizationSchedule::from_ladders(vec![0.5], vec![16], 0).is_err());
        let s = RealizationSchedule::new(2, 0.5, 16)
            .unwrap()
            .with_sweeps(3)
            .unwrap();
        assert_eq!(s.sweeps(), 3);
    }

    #[test]
    fn rationalize_examples() {
        let q = rationalize(&m(&ab2(), &[0.5, 0.5]), 2).unwrap();
        assert_eq!(q.numerators(), &[1, 1]);

        let q = rationalize(&m(&ab2(), &[1.0 / 3.0, 2.0 / 3.0]), 3).unwrap();
        assert_eq!(q.numerators(), &[1, 2]);

        let p = m(&ab2(), &[0.7, 0.3]);
        let q = rationalize(&p, 4).unwrap();
        assert_eq!(q.numerators(), &[3, 1]);
        assert!((p.tv_distance(&q.to_measure()).unwrap() - 0.05).abs() < 1e-12);

        assert!(matches!(
            rationalize(&p, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn tuple_round_robin_arrangement() {
        let ab = ab2();
        let q = RationalMeasure::new(&ab, vec![1, 1], 2).unwrap();
        assert_eq!(tuple_from_rational(&q), vec![0, 1]);

        let q = RationalMeasure::new(&ab, vec![3, 1], 4).unwrap();
        assert_eq!(tuple_from_rational(&q), vec![0, 1, 0, 0]);

        let q = RationalMeasure::new(&ab, vec![0, 2], 2).unwrap();
        assert_eq!(tuple_from_rational(&q), vec![1, 1]);
    }

    #[test]
    fn net_realize_singleton_bounds() {
        let p = m(&ab2(), &[1.0 / 3.0, 2.0 / 3.0]);
        let target = Regularity::singleton(p.clone());
        let schedule = RealizationSchedule::new(3, 0.5, 16)
            .unwrap()
            .with_sweeps(1)
            .unwrap();
        let net = net_realize(&target, &schedule).unwrap();
        assert_eq!(net.len(), 3);
        for (r, item) in net.items().iter().enumerate() {
            let d = schedule.denominator(r);
            assert_eq!(item.symbols.len() as u64, d);
            assert_eq!(item.round as usize, r + 1);
            let counts = item.symbols.iter().filter(|&&s| s == 0).count() as f64;
            let emp0 = counts / d as f64;
            // On two symbols tv equals the first-coordinate gap; bound |X|/(2D).
            assert!((emp0 - p.weights()[0]).abs() <= 1.0 / d as f64 + 1e-12);
        }
    }

    #[test]
    fn net_realize_alternates_dirac_targets() {
        let target = Regularity::new(
            vec![
                Measure::dirac(&ab2(), "a").unwrap(),
                Measure::dirac(&ab2(), "b").unwrap(),
            ],
            false,
        )
        .unwrap();
        let schedule = RealizationSchedule::new(2, 0.5, 4)
            .unwrap()
            .with_sweeps(1)
            .unwrap();
        let net = net_realize(&target, &schedule).unwrap();
        assert_eq!(net.len(), 4);
        for (k, item) in net.items().iter().enumerate() {
            let want = k % 2;
            assert!(item.symbols.iter().all(|&s| s == want));
            assert_eq!(item.target as usize, want);
        }
    }

    #[test]
    fn polytope_mesh_counts_per_round() {
        let target = Regularity::new(
            vec![
                Measure::dirac(&ab2(), "a").unwrap(),
                Measure::dirac(&ab2(), "b").unwrap(),
            ],
            true,
        )
        .unwrap();
        let schedule = RealizationSchedule::new(3, 0.5, 4)
            .unwrap()
            .with_sweeps(1)
            .unwrap();
        let net = net_realize(&target, &schedule).unwrap();
        // Round r at eps = 2^-r has 2^r + 1 mesh targets.
        let per_round: Vec<usize> = (1..=3)
            .map(|r| {
                net.items()
                    .iter()
                    .filter(|it| it.round == r as u32)
                    .count()
            })
            .collect();
        assert_eq!(per_round, vec![3, 5, 9]);
    }

    #[test]
    fn steering_length_example() {
        assert_eq!(steering_block_length(100, 0.1), 900);
        assert_eq!(steering_block_length(0, 0.1), 0);
    }

    #[test]
    fn sequence_realize_tracks_singleton() {
        let p = m(&ab2(), &[0.25, 0.75]);
        let target = Regularity::singleton(p.clone());
        let eps = 0.05;
        let seq = sequence_realize(&target, 20_000, eps, false).unwrap();
        assert_eq!(seq.len(), 20_000);
        // At every block boundary the prefix sits within eps + |X|/(2m) of
        // the target; replay the block lengths to find the boundaries.
        let min_block = (2.0 / (2.0 * eps)).ceil() as usize;
        let mut n = 0usize;
        let mut counts = [0usize; 2];
        let mut pos = 0usize;
        while n < seq.len() {
            let m_len = steering_block_length(n, eps)
                .max(min_block)
                .max(1)
                .min(seq.len() - n);
            for &s in &seq.symbols()[pos..pos + m_len] {
                counts[s] += 1;
            }
            pos += m_len;
            n += m_len;
            if n < seq.len() {
                let emp = [counts[0] as f64 / n as f64, counts[1] as f64 / n as f64];
                let tv = 0.5
                    * ((emp[0] - p.weights()[0]).abs() + (emp[1] - p.weights()[1]).abs());
                assert!(tv <= eps + 1.0 / m_len as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn sequence_realize_rejects_disconnected() {
        let target = Regularity::new(
            vec![
                Measure::dirac(&ab2(), "a").unwrap(),
                Measure::dirac(&ab2(), "b").unwrap(),
            ],
            false,
        )
        .unwrap();
        assert!(matches!(
            sequence_realize(&target, 1000, 0.1, false),
            Err(Error::DisconnectedTarget)
        ));
        // Declaring the points as a path lifts the rejection.
        assert!(sequence_realize(&target, 1000, 0.1, true).is_ok());
    }

    #[test]
    fn iid_dirac_is_constant() {
        let mu = Measure::dirac(&ab2(), "a").unwrap();
        let seq = iid_generate(&mu, 5, 123).unwrap();
        assert_eq!(seq.symbols(), &[0, 0, 0, 0, 0]);
        assert_eq!(seq.meta().seed, Some(123));
    }

    #[test]
    fn iid_is_deterministic_per_seed() {
        let mu = m(&ab2(), &[0.5, 0.5]);
        let a = iid_generate(&mu, 1000, 42).unwrap();
        let b = iid_generate(&mu, 1000, 42).unwrap();
        let c = iid_generate(&mu, 1000, 43).unwrap();
        assert_eq!(a.symbols(), b.symbols());
        assert_ne!(a.symbols(), c.symbols());
    }

    #[test]
    fn iid_fixed_seed_frequency() {
        let mu = m(&ab2(), &[0.5, 0.5]);
        let seq = iid_generate(&mu, 100_000, 42).unwrap();
        let ones = seq.symbols().iter().filter(|&&s| s == 1).count() as f64;
        let tv = (ones / 100_000.0 - 0.5).abs();
        assert!(tv <= 0.01, "tv {tv}");
    }

    #[test]
    fn iid_rejects_zero_length() {
        let mu = m(&ab2(), &[0.5, 0.5]);
        assert!(matches!(
            iid_generate(&mu, 0, 7),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn net_validation_on_assembly() {
        let ab = ab2();
        let meta = NetMeta {
            description: "test".into(),
            seed: None,
        };
        assert!(matches!(
            SamplingNet::from_items(ab.clone(), vec![], meta.clone()),
            Err(Error::EmptyNet)
        ));
        let items = vec![
            NetItem { lambda: 1, round: 1, target: 0, symbols: vec![0, 1] },
            NetItem { lambda: 2, round: 1, target: 0, symbols: vec![0] },
        ];
        assert!(matches!(
            SamplingNet::from_items(ab.clone(), items, meta.clone()),
            Err(Error::DecreasingLengths { index: 1 })
        ));
        let items = vec![NetItem { lambda: 1, round: 1, target: 0, symbols: vec![5] }];
        assert!(matches!(
            SamplingNet::from_items(ab, items, meta),
            Err(Error::Malformed(_))
        ));
    }

    fn enumerate_best_tv(p: &Measure, d: u64) -> f64 {
        // Brute-force oracle: minimum tv over all numerator compositions.
        fn rec(
            left: u64,
            pos: usize,
            nums: &mut Vec<u64>,
            p: &Measure,
            d: u64,
            best: &mut f64,
        ) {
            if pos == nums.len() - 1 {
                nums[pos] = left;
                let tv = 0.5
                    * nums
                        .iter()
                        .zip(p.weights())
                        .map(|(&n, &w)| (n as f64 / d as f64 - w).abs())
                        .sum::<f64>();
                if tv < *best {
                    *best = tv;
                }
                return;
            }
            for k in 0..=left {
                nums[pos] = k;
                rec(left - k, pos + 1, nums, p, d, best);
            }
        }
        let mut nums = vec![0u64; p.weights().len()];
        let mut best = f64::INFINITY;
        rec(d, 0, &mut nums, p, d, &mut best);
        best
    }

    proptest! {
        #[test]
        fn rationalize_is_optimal_and_bounded(
            w in proptest::collection::vec(0.01_f64..1.0, 3),
            d in 1u64..12,
        ) {
            let ab = Alphabet::new(["a", "b", "c"]).unwrap();
            let p = Measure::new(&ab, &w).unwrap();
            let q = rationalize(&p, d).unwrap();
            let tv = p.tv_distance(&q.to_measure()).unwrap();
            prop_assert!(tv <= 3.0 / (2.0 * d as f64) + 1e-12);
            let best = enumerate_best_tv(&p, d);
            prop_assert!((tv - best).abs() <= 1e-12, "tv {} vs best {}", tv, best);
        }

        #[test]
        fn tuple_round_trips_exactly(
            w in proptest::collection::vec(0.01_f64..1.0, 4),
            d in 1u64..200,
        ) {
            let ab = Alphabet::new(["a", "b", "c", "d"]).unwrap();
            let p = Measure::new(&ab, &w).unwrap();
            let q = rationalize(&p, d).unwrap();
            let tuple = tuple_from_rational(&q);
            prop_assert_eq!(tuple.len() as u64, d);
            let mut counts = vec![0u64; 4];
            for s in tuple {
                counts[s] += 1;
            }
            prop_assert_eq!(counts, q.numerators().to_vec());
        }
    }
}
