//! Estimation: empirical measures, trajectories, limit sets, and
//! statistical equivalence of streams.
//!
//! The estimator treats "limit point" by a finite recurrence surrogate: a
//! cluster center counts as a limit point when the trajectory tail visits
//! its epsilon-ball in every one of W consecutive windows. Schedules whose
//! transients still dominate the configured tail can defeat the surrogate;
//! lengthen the stream or shrink `tail_fraction` coverage accordingly.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::measure::{dot, Measure, TestFunction};
use crate::metric;
use crate::realize::{SamplingNet, SymbolSequence};
use crate::regularity::Regularity;
use crate::IDENTITY_TOL;

/// Default cluster radius for limit-set estimation.
pub const DEFAULT_EPSILON: f64 = 0.02;
/// Default number of recurrence windows.
pub const DEFAULT_WINDOWS: usize = 5;
/// Default fraction of the trajectory treated as its tail.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// Points of a stream analysis aligned with their stream indices.
///
/// Points are either measures (weight vectors) or averaged test-function
/// values in `R^m`; the estimator does not care which.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    indices: Vec<u64>,
    points: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Requires strictly increasing indices and equal-dimension points.
    pub fn new(indices: Vec<u64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if indices.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                got: points.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "trajectory must contain at least one point".into(),
            ));
        }
        for k in 1..indices.len() {
            if indices[k] <= indices[k - 1] {
                return Err(Error::InvalidParameter(
                    "trajectory indices must be strictly increasing".into(),
                ));
            }
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: points.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(dim),
            });
        }
        Ok(Self { indices, points })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// Frequency measure of a tuple of symbol coordinates.
pub fn empirical_measure(alphabet: &Alphabet, tuple: &[usize]) -> Result<Measure> {
    if tuple.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let mut counts = vec![0u64; alphabet.len()];
    for &s in tuple {
        if s >= alphabet.len() {
            return Err(Error::Malformed(format!(
                "symbol coordinate {s} out of range for alphabet of {}",
                alphabet.len()
            )));
        }
        counts[s] += 1;
    }
    let n = tuple.len() as f64;
    let weights = counts.iter().map(|&c| c as f64 / n).collect();
    Ok(Measure::from_normalized(alphabet, weights))
}

/// Prefix empirical measures of a sequence at `n = stride, 2 stride, ...`,
/// computed in one incremental pass.
pub fn prefix_trajectory(seq: &SymbolSequence, stride: usize) -> Result<Trajectory> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    if seq.len() < stride {
        return Err(Error::InvalidParameter(format!(
            "stride {stride} exceeds sequence length {}",
            seq.len()
        )));
    }
    let dim = seq.alphabet().len();
    let mut counts = vec![0u64; dim];
    let mut indices = Vec::with_capacity(seq.len() / stride);
    let mut points = Vec::with_capacity(seq.len() / stride);
    for (k, &s) in seq.symbols().iter().enumerate() {
        counts[s] += 1;
        let n = k + 1;
        if n % stride == 0 {
            indices.push(n as u64);
            points.push(counts.iter().map(|&c| c as f64 / n as f64).collect());
        }
    }
    Trajectory::new(indices, points)
}

/// Per-item empirical measures of a net, indexed by lambda.
pub fn net_trajectory(net: &SamplingNet) -> Trajectory {
    let alphabet = net.alphabet();
    let indices = net.items().iter().map(|it| it.lambda).collect();
    let points = net
        .items()
        .iter()
        .map(|it| {
            empirical_measure(alphabet, &it.symbols)
                .expect("net items are validated nonempty and in range")
                .weights()
                .to_vec()
        })
        .collect();
    Trajectory::new(indices, points).expect("net items are validated and lambda increasing")
}

/// Running averages of `gamma` over each net item: the expectation of the
/// item's empirical measure, which equals the plain average of gamma over
/// the tuple.
pub fn average_trajectory(net: &SamplingNet, gamma: &TestFunction) -> Result<Trajectory> {
    net.alphabet().check_same(gamma.alphabet())?;
    let alphabet = net.alphabet();
    let indices = net.items().iter().map(|it| it.lambda).collect();
    let points = net
        .items()
        .iter()
        .map(|it| {
            let emp = empirical_measure(alphabet, &it.symbols)
                .expect("net items are validated nonempty and in range");
            gamma
                .rows()
                .iter()
                .map(|row| dot(emp.weights(), row))
                .collect()
        })
        .collect();
    Trajectory::new(indices, points)
}

/// Limit-set estimate: retained cluster centers with their per-window
/// visit counts over the trajectory tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSetEstimate {
    pub epsilon: f64,
    pub windows: usize,
    pub centers: Vec<Vec<f64>>,
    pub visits: Vec<Vec<usize>>,
}

impl LimitSetEstimate {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Centers as a point-set regularity on `alphabet`.
    ///
    /// Only meaningful when the trajectory points were measures. Fails when
    /// nothing recurrent was retained.
    pub fn to_regularity(&self, alphabet: &Alphabet) -> Result<Regularity> {
        if self.centers.is_empty() {
            return Err(Error::EmptyRegularity);
        }
        let points = self
            .centers
            .iter()
            .map(|c| Measure::new(alphabet, c))
            .collect::<Result<Vec<_>>>()?;
        Regularity::new(points, false)
    }
}

/// Splits `count` items into `windows` consecutive spans of equal count
/// (the first `count % windows` spans take one extra item).
pub(crate) fn window_spans(count: usize, windows: usize) -> Vec<(usize, usize)> {
    let base = count / windows;
    let extra = count % windows;
    let mut spans = Vec::with_capacity(windows);
    let mut start = 0;
    for w in 0..windows {
        let len = base + usize::from(w < extra);
        spans.push((start, start + len));
        start += len;
    }
    spans
}

/// Estimates the limit set of a trajectory by recurrence in its tail.
///
/// The final `tail_fraction` of points is split into `windows` consecutive
/// windows of equal count. Tail points are clustered greedily in visit
/// order: a point joins the first existing center within `epsilon` (half-L1
/// distance), otherwise it founds a new center. Centers visited in every
/// window are retained; the rest are transient and dropped.
pub fn estimate_limit_set(
    traj: &Trajectory,
    epsilon: f64,
    windows: usize,
    tail_fraction: f64,
) -> Result<LimitSetEstimate> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if windows == 0 {
        return Err(Error::InvalidParameter(
            "windows must be at least 1".into(),
        ));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let need = 10 * windows;
    if traj.len() < need {
        return Err(Error::TooFewPoints {
            have: traj.len(),
            need,
        });
    }
    let tail_count = ((traj.len() as f64) * tail_fraction).ceil() as usize;
    let tail_count = tail_count.clamp(1, traj.len());
    if tail_count < windows {
        return Err(Error::TooFewPoints {
            have: tail_count,
            need: windows,
        });
    }
    let tail = &traj.points()[traj.len() - tail_count..];
    let spans = window_spans(tail_count, windows);

    // Greedy founding pass: a tail point within epsilon of an existing
    // center is covered; anything uncovered founds a new center.
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for p in tail {
        if !centers.iter().any(|c| metric::half_l1(p, c) <= epsilon) {
            centers.push(p.clone());
        }
    }
    // Recurrence pass: a center is retained when its epsilon-ball is
    // visited in every window. Visits count every point in the ball, not
    // just the ones that founded or first matched the center, so recurrent
    // centers survive even when their points also graze a neighboring ball.
    let mut visits = vec![vec![0usize; windows]; centers.len()];
    for (w, &(start, end)) in spans.iter().enumerate() {
        for p in &tail[start..end] {
            for (c, center) in centers.iter().enumerate() {
                if metric::half_l1(p, center) <= epsilon {
                    visits[c][w] += 1;
                }
            }
        }
    }
    let mut kept_centers = Vec::new();
    let mut kept_visits = Vec::new();
    for (c, v) in visits.iter().enumerate() {
        if v.iter().all(|&n| n > 0) {
            kept_centers.push(centers[c].clone());
            kept_visits.push(v.clone());
        }
    }
    Ok(LimitSetEstimate {
        epsilon,
        windows,
        centers: kept_centers,
        visits: kept_visits,
    })
}

/// A coordinate-indicator separator between two distinct regularities.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// The full indicator battery, one row per symbol.
    pub function: TestFunction,
    /// Row achieving the largest one-dimensional image separation.
    pub best_row: usize,
    /// Hausdorff distance between the two image sets of the best row,
    /// measured as a plain absolute difference.
    pub separation: f64,
}

/// Builds the coordinate-indicator test function and reports which row
/// separates the images of the two regularities most.
///
/// Expectations under coordinate indicators reproduce the weight vectors
/// themselves, so distinct regularities always have distinct images; the
/// function fails only when the inputs coincide as point sets.
pub fn separating_function(p1: &Regularity, p2: &Regularity) -> Result<SeparationReport> {
    p1.alphabet().check_same(p2.alphabet())?;
    if p1.hausdorff(p2)? <= IDENTITY_TOL {
        return Err(Error::IdenticalRegularities);
    }
    let gamma = TestFunction::coordinate_indicators(p1.alphabet());
    let mut best_row = 0;
    let mut separation = -1.0;
    for row in 0..gamma.output_dim() {
        let a: Vec<Vec<f64>> = p1.points().iter().map(|p| vec![p.weights()[row]]).collect();
        let b: Vec<Vec<f64>> = p2.points().iter().map(|p| vec![p.weights()[row]]).collect();
        let sep = metric::hausdorff_by(&a, &b, |x, y| (x[0] - y[0]).abs());
        if sep > separation {
            separation = sep;
            best_row = row;
        }
    }
    Ok(SeparationReport {
        function: gamma,
        best_row,
        separation,
    })
}

/// Outcome of an S-equivalence test between two nets.
#[derive(Debug, Clone)]
pub enum EquivalenceVerdict {
    Equivalent {
        hausdorff: f64,
    },
    Distinct {
        hausdorff: f64,
        witness: SeparationReport,
        /// Image sets of the two estimated regularities under the witness.
        images: (Vec<Vec<f64>>, Vec<Vec<f64>>),
    },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent { .. })
    }

    pub fn hausdorff(&self) -> f64 {
        match self {
            EquivalenceVerdict::Equivalent { hausdorff } => *hausdorff,
            EquivalenceVerdict::Distinct { hausdorff, .. } => *hausdorff,
        }
    }
}

/// Tests whether two nets induce the same regularity.
///
/// Both per-item empirical trajectories are run through
/// [`estimate_limit_set`] (radius `epsilon`, `windows` windows, default
/// tail fraction). Estimates within Hausdorff distance `2 epsilon` count as
/// equivalent; otherwise the verdict carries a separating witness and the
/// image sets of both estimates under it.
pub fn s_equivalent(
    net1: &SamplingNet,
    net2: &SamplingNet,
    epsilon: f64,
    windows: usize,
) -> Result<EquivalenceVerdict> {
    net1.alphabet().check_same(net2.alphabet())?;
    let est1 = estimate_limit_set(&net_trajectory(net1), epsilon, windows, DEFAULT_TAIL_FRACTION)?;
    let est2 = estimate_limit_set(&net_trajectory(net2), epsilon, windows, DEFAULT_TAIL_FRACTION)?;
    let reg1 = est1.to_regularity(net1.alphabet())?;
    let reg2 = est2.to_regularity(net2.alphabet())?;
    let h = reg1.hausdorff(&reg2)?;
    if h <= 2.0 * epsilon {
        Ok(EquivalenceVerdict::Equivalent { hausdorff: h })
    } else {
        let witness = separating_function(&reg1, &reg2)?;
        let images = (
            reg1.image(&witness.function)?,
            reg2.image(&witness.function)?,
        );
        Ok(EquivalenceVerdict::Distinct {
            hausdorff: h,
            witness,
            images,
        })
    }
}

/// Cross-validation battery for [`s_equivalent`]: estimates the limit sets
/// of the averaged trajectories of both nets under every supplied test
/// function and checks they agree within `2 epsilon m` (for an
/// `m`-dimensional function, matching the half-L1 scale of averages).
///
/// Returns true when every battery member agrees. Coordinate indicators
/// alone already decide equivalence; the battery exists to exercise that
/// collapse on concrete functions.
pub fn s_equivalent_battery(
    net1: &SamplingNet,
    net2: &SamplingNet,
    epsilon: f64,
    windows: usize,
    battery: &[TestFunction],
) -> Result<bool> {
    net1.alphabet().check_same(net2.alphabet())?;
    for gamma in battery {
        let m = gamma.output_dim() as f64;
        let eps = epsilon * m;
        let t1 = average_trajectory(net1, gamma)?;
        let t2 = average_trajectory(net2, gamma)?;
        let e1 = estimate_limit_set(&t1, eps, windows, DEFAULT_TAIL_FRACTION)?;
        let e2 = estimate_limit_set(&t2, eps, windows, DEFAULT_TAIL_FRACTION)?;
        if e1.is_empty() || e2.is_empty() {
            return Err(Error::EmptyRegularity);
        }
        if metric::hausdorff(&e1.centers, &e2.centers) > 2.0 * eps {
            return Ok(false);
        }
    }
    Ok(true)
}
