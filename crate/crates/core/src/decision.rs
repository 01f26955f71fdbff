//! Decision criteria under a loss matrix: worst case over a regularity,
//! with minimax and Bayes as the degenerate ends, plus an empirical
//! verifier for the cofinal/eventual bounds of running-average losses.

use serde::Serialize;
use std::collections::HashMap;

use crate::alphabet::Alphabet;
use crate::empirics::{average_trajectory, window_spans};
use crate::error::{Error, Result};
use crate::measure::{dot, Measure, TestFunction};
use crate::realize::SamplingNet;
use crate::regularity::Regularity;
use crate::IDENTITY_TOL;

/// A bounded loss table over states (rows) and decisions (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct LossMatrix {
    theta_labels: Vec<String>,
    decision_labels: Vec<String>,
    values: Vec<Vec<f64>>,
    decision_index: HashMap<String, usize>,
}

impl LossMatrix {
    /// Validates labels (nonempty, unique per axis) and the value grid
    /// (`|theta| x |decisions|`, all finite).
    pub fn new(
        theta_labels: Vec<String>,
        decision_labels: Vec<String>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if theta_labels.is_empty() {
            return Err(Error::InvalidParameter(
                "loss matrix needs at least one state".into(),
            ));
        }
        if decision_labels.is_empty() {
            return Err(Error::InvalidParameter(
                "loss matrix needs at least one decision".into(),
            ));
        }
        let mut seen = HashMap::new();
        for (i, l) in theta_labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(l.clone()));
            }
        }
        let mut decision_index = HashMap::new();
        for (i, l) in decision_labels.iter().enumerate() {
            if decision_index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(l.clone()));
            }
        }
        if values.len() != theta_labels.len() {
            return Err(Error::DimensionMismatch {
                expected: theta_labels.len(),
                got: values.len(),
            });
        }
        for row in &values {
            if row.len() != decision_labels.len() {
                return Err(Error::DimensionMismatch {
                    expected: decision_labels.len(),
                    got: row.len(),
                });
            }
            for (i, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteWeight { index: i });
                }
            }
        }
        Ok(Self {
            theta_labels,
            decision_labels,
            values,
            decision_index,
        })
    }

    pub fn theta_labels(&self) -> &[String] {
        &self.theta_labels
    }

    pub fn decision_labels(&self) -> &[String] {
        &self.decision_labels
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn n_theta(&self) -> usize {
        self.theta_labels.len()
    }

    pub fn n_decisions(&self) -> usize {
        self.decision_labels.len()
    }

    /// Column index of a decision label.
    pub fn decision_index(&self, label: &str) -> Result<usize> {
        self.decision_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The loss of decision `u` across states: `L(., u)` as a vector.
    pub fn column(&self, u: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[u]).collect()
    }

    /// Checks that an alphabet lists exactly the states, in order.
    pub fn check_theta_match(&self, alphabet: &Alphabet) -> Result<()> {
        if alphabet.symbols() == self.theta_labels.as_slice() {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "states {:?} vs alphabet {:?}",
                self.theta_labels,
                alphabet.symbols()
            )))
        }
    }
}

/// Which criterion produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Minimax,
    Bayes,
    Regularity,
}

impl CriterionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionKind::Minimax => "minimax",
            CriterionKind::Bayes => "bayes",
            CriterionKind::Regularity => "regularity",
        }
    }
}

/// Per-decision criterion values with the full minimizing set.
///
/// `argmin` lists every decision within 1e-12 of the minimum, ordered by
/// label; ties are reported, not broken. For the regularity criterion,
/// `worst_case[u]` lists the indices of the measures attaining the
/// per-decision maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub decision_labels: Vec<String>,
    pub values: Vec<f64>,
    pub argmin: Vec<usize>,
    pub worst_case: Option<Vec<Vec<usize>>>,
}

impl CriterionReport {
    fn build(
        kind: CriterionKind,
        decision_labels: Vec<String>,
        values: Vec<f64>,
        worst_case: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut argmin: Vec<usize> = (0..values.len())
            .filter(|&u| values[u] <= min + IDENTITY_TOL)
            .collect();
        argmin.sort_by(|&a, &b| decision_labels[a].cmp(&decision_labels[b]));
        Self {
            kind,
            decision_labels,
            values,
            argmin,
            worst_case,
        }
    }

    /// Labels of the minimizing decisions, in reported order.
    pub fn argmin_labels(&self) -> Vec<&str> {
        self.argmin
            .iter()
            .map(|&u| self.decision_labels[u].as_str())
            .collect()
    }

    pub fn value_of(&self, label: &str) -> Option<f64> {
        self.decision_labels
            .iter()
            .position(|l| l == label)
            .map(|u| self.values[u])
    }
}

/// Worst-case loss per decision: the column maximum.
pub fn minimax(loss: &LossMatrix) -> CriterionReport {
    let values = (0..loss.n_decisions())
        .map(|u| {
            loss.values()
                .iter()
                .map(|row| row[u])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    CriterionReport::build(
        CriterionKind::Minimax,
        loss.decision_labels().to_vec(),
        values,
        None,
    )
}

/// Expected loss per decision under a single measure over the states.
pub fn bayes(loss: &LossMatrix, mu: &Measure) -> Result<CriterionReport> {
    loss.check_theta_match(mu.alphabet())?;
    let values = (0..loss.n_decisions())
        .map(|u| dot(mu.weights(), &loss.column(u)))
        .collect();
    Ok(CriterionReport::build(
        CriterionKind::Bayes,
        loss.decision_labels().to_vec(),
        values,
        None,
    ))
}

/// Worst-case expected loss per decision over a regularity.
///
/// The value at `u` is the maximum over the listed measures of the expected
/// loss; for a convex regularity the maximum of this linear functional over
/// the hull is attained at a vertex, so listing vertices suffices. With a
/// singleton this is exactly [`bayes`]; with all Dirac measures it is
/// exactly [`minimax`].
pub fn regularity_criterion(loss: &LossMatrix, p: &Regularity) -> Result<CriterionReport> {
    loss.check_theta_match(p.alphabet())?;
    let mut values = Vec::with_capacity(loss.n_decisions());
    let mut worst = Vec::with_capacity(loss.n_decisions());
    for u in 0..loss.n_decisions() {
        let col = loss.column(u);
        let per_point: Vec<f64> = p
            .points()
            .iter()
            .map(|q| dot(q.weights(), &col))
            .collect();
        let max = per_point.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let attaining: Vec<usize> = (0..per_point.len())
            .filter(|&j| per_point[j] >= max - IDENTITY_TOL)
            .collect();
        values.push(max);
        worst.push(attaining);
    }
    Ok(CriterionReport::build(
        CriterionKind::Regularity,
        loss.decision_labels().to_vec(),
        values,
        Some(worst),
    ))
}

/// Empirical verdict on the cofinal and eventual bounds of running-average
/// losses along a net.
#[derive(Debug, Clone, Serialize)]
pub struct Proposition3Report {
    pub decision: String,
    pub r1: f64,
    pub r2: f64,
    /// Every tail window contains an index whose average loss exceeds `r1`.
    pub r1_exceeded_cofinally: bool,
    /// Every tail index keeps its average loss below `r2`.
    pub r2_respected_eventually: bool,
    /// Maximum average loss over the final window.
    pub empirical_limsup: f64,
    pub tail_points: usize,
    pub windows: usize,
}

/// Checks the two-sided recurrence behaviour of the running-average loss
/// `y_lambda` of decision `decision` along a net.
///
/// The trajectory is the averaged loss column over each item. Over the
/// final `tail_fraction` of items, split into `windows` windows: flag (a)
/// asks every window to contain some `y > r1` (a cofinal excess), flag (b)
/// asks all tail values to stay below `r2` (an eventual bound). The
/// empirical limsup is the maximum over the final window; on nets realizing
/// a regularity it approaches the regularity criterion value at `decision`.
pub fn verify_proposition3(
    net: &SamplingNet,
    loss: &LossMatrix,
    decision: &str,
    r1: f64,
    r2: f64,
    tail_fraction: f64,
    windows: usize,
) -> Result<Proposition3Report> {
    let u = loss.decision_index(decision)?;
    loss.check_theta_match(net.alphabet())?;
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
    let gamma = TestFunction::single_row(net.alphabet(), loss.column(u))?;
    let traj = average_trajectory(net, &gamma)?;
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
    let r1_exceeded_cofinally = spans
        .iter()
        .all(|&(s, e)| tail[s..e].iter().any(|y| y[0] > r1));
    let r2_respected_eventually = tail.iter().all(|y| y[0] < r2);
    let (fs, fe) = spans[windows - 1];
    let empirical_limsup = tail[fs..fe]
        .iter()
        .map(|y| y[0])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Proposition3Report {
        decision: decision.to_string(),
        r1,
        r2,
        r1_exceeded_cofinally,
        r2_respected_eventually,
        empirical_limsup,
        tail_points: tail_count,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{net_realize, NetItem, NetMeta, RealizationSchedule};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn loss_2x2() -> LossMatrix {
        LossMatrix::new(
            vec!["t1".into(), "t2".into()],
            vec!["u1".into(), "u2".into()],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap()
    }

    fn theta2() -> Alphabet {
        Alphabet::new(["t1", "t2"]).unwrap()
    }

    #[test]
    fn loss_matrix_validation() {
        assert!(LossMatrix::new(vec![], vec!["u".into()], vec![]).is_err());
        assert!(LossMatrix::new(vec!["t".into()], vec![], vec![vec![]]).is_err());
        assert!(matches!(
            LossMatrix::new(
                vec!["t".into(), "t".into()],
                vec!["u".into()],
                vec![vec![0.0], vec![0.0]],
            ),
            Err(Error::DuplicateSymbol(_))
        ));
        assert!(matches!(
            LossMatrix::new(
                vec!["t".into()],
                vec!["u".into()],
                vec![vec![f64::NAN]],
            ),
            Err(Error::NonFiniteWeight { .. })
        ));
        assert!(matches!(
            LossMatrix::new(
                vec!["t".into()],
                vec!["u1".into(), "u2".into()],
                vec![vec![0.0]],
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minimax_examples() {
        let r = minimax(&loss_2x2());
        assert_eq!(r.values, vec![1.0, 1.0]);
        assert_eq!(r.argmin_labels(), vec!["u1", "u2"]);

        let l = LossMatrix::new(
            vec!["t1".into(), "t2".into()],
            vec!["u1".into(), "u2".into()],
            vec![vec![0.0, 2.0], vec![1.0, 2.0]],
        )
        .unwrap();
        let r = minimax(&l);
        assert_eq!(r.values, vec![1.0, 2.0]);
        assert_eq!(r.argmin_labels(), vec!["u1"]);

        let l = LossMatrix::new(vec!["t".into()], vec!["u".into()], vec![vec![3.5]]).unwrap();
        assert_eq!(minimax(&l).values, vec![3.5]);
    }

    #[test]
    fn bayes_examples() {
        let l = loss_2x2();
        let mu = Measure::new(&theta2(), &[0.7, 0.3]).unwrap();
        let r = bayes(&l, &mu).unwrap();
        assert!((r.values[0] - 0.3).abs() < 1e-15);
        assert!((r.values[1] - 0.7).abs() < 1e-15);
        assert_eq!(r.argmin_labels(), vec!["u1"]);

        let dirac = Measure::dirac(&theta2(), "t1").unwrap();
        let r = bayes(&l, &dirac).unwrap();
        assert_eq!(r.values, vec![0.0, 1.0]);

        let uniform = Measure::uniform(&theta2());
        let r = bayes(&l, &uniform).unwrap();
        assert_eq!(r.values, vec![0.5, 0.5]);
        assert_eq!(r.argmin_labels(), vec!["u1", "u2"]);

        let wrong = Measure::uniform(&Alphabet::new(["x", "y"]).unwrap());
        assert!(matches!(
            bayes(&l, &wrong),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn regularity_criterion_examples() {
        let l = loss_2x2();
        let ab = theta2();

        let single = Regularity::singleton(Measure::new(&ab, &[0.7, 0.3]).unwrap());
        let r = regularity_criterion(&l, &single).unwrap();
        let b = bayes(&l, &single.points()[0]).unwrap();
        assert_eq!(r.values, b.values);

        let simplex = Regularity::full_simplex(&ab);
        let r = regularity_criterion(&l, &simplex).unwrap();
        assert_eq!(r.values, minimax(&l).values);

        let pair = Regularity::new(
            vec![
                Measure::new(&ab, &[0.7, 0.3]).unwrap(),
                Measure::new(&ab, &[0.2, 0.8]).unwrap(),
            ],
            false,
        )
        .unwrap();
        let r = regularity_criterion(&l, &pair).unwrap();
        assert!((r.values[0] - 0.8).abs() < 1e-15);
        assert!((r.values[1] - 0.7).abs() < 1e-15);
        assert_eq!(r.argmin_labels(), vec!["u2"]);
        let worst = r.worst_case.as_ref().unwrap();
        assert_eq!(worst[0], vec![1]);
        assert_eq!(worst[1], vec![0]);
    }

    #[test]
    fn verify_constant_net_limsup_is_exact() {
        let ab = theta2();
        let items = (1..=60)
            .map(|k| NetItem {
                lambda: k,
                round: 1,
                target: 0,
                symbols: vec![0; 4],
            })
            .collect();
        let net = SamplingNet::from_items(
            ab,
            items,
            NetMeta { description: "const".into(), seed: None },
        )
        .unwrap();
        let l = loss_2x2();
        let rep = verify_proposition3(&net, &l, "u2", 0.5, 1.5, 0.5, 5).unwrap();
        assert_eq!(rep.empirical_limsup, 1.0);
        assert!(rep.r1_exceeded_cofinally);
        assert!(rep.r2_respected_eventually);

        assert!(matches!(
            verify_proposition3(&net, &l, "nope", 0.5, 1.5, 0.5, 5),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn verify_flags_on_realized_singleton() {
        let ab = theta2();
        let p = Measure::new(&ab, &[0.7, 0.3]).unwrap();
        let target = Regularity::singleton(p);
        let schedule = RealizationSchedule::new(8, 0.5, 16).unwrap();
        let net = net_realize(&target, &schedule).unwrap();
        let l = loss_2x2();
        // p(L(.,u2)) = 0.7; both flags hold around it.
        let rep = verify_proposition3(&net, &l, "u2", 0.6, 0.8, 0.5, 5).unwrap();
        assert!(rep.r1_exceeded_cofinally);
        assert!(rep.r2_respected_eventually);
        assert!((rep.empirical_limsup - 0.7).abs() <= 0.01);
        // r1 above the criterion value: the excess is never seen.
        let rep = verify_proposition3(&net, &l, "u2", 0.75, 0.8, 0.5, 5).unwrap();
        assert!(!rep.r1_exceeded_cofinally);
    }

    fn random_loss(rng: &mut ChaCha8Rng, nt: usize, nd: usize) -> LossMatrix {
        let theta: Vec<String> = (0..nt).map(|i| format!("t{i}")).collect();
        let dec: Vec<String> = (0..nd).map(|i| format!("u{i}")).collect();
        let values = (0..nt)
            .map(|_| (0..nd).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect();
        LossMatrix::new(theta, dec, values).unwrap()
    }

    fn random_measure(rng: &mut ChaCha8Rng, ab: &Alphabet) -> Measure {
        let w: Vec<f64> = (0..ab.len()).map(|_| rng.random_range(0.01..1.0)).collect();
        Measure::new(ab, &w).unwrap()
    }

    #[test]
    fn degenerations_are_exact_and_sandwiched() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let nt = rng.random_range(1..=6);
            let nd = rng.random_range(1..=6);
            let l = random_loss(&mut rng, nt, nd);
            let ab = Alphabet::new(l.theta_labels().to_vec()).unwrap();
            let mu = random_measure(&mut rng, &ab);

            let b = bayes(&l, &mu).unwrap();
            let rc = regularity_criterion(&l, &Regularity::singleton(mu.clone())).unwrap();
            assert_eq!(b.values, rc.values);
            assert_eq!(b.argmin, rc.argmin);

            let mm = minimax(&l);
            let rd = regularity_criterion(&l, &Regularity::full_simplex(&ab)).unwrap();
            assert_eq!(mm.values, rd.values);
            assert_eq!(mm.argmin, rd.argmin);

            // Sandwich for a random point set containing mu.
            let mut points = vec![mu.clone()];
            for _ in 0..rng.random_range(1..4) {
                let q = random_measure(&mut rng, &ab);
                if points.iter().all(|p| p.tv_distance(&q).unwrap() > 1e-9) {
                    points.push(q);
                }
            }
            let reg = Regularity::new(points, false).unwrap();
            let rp = regularity_criterion(&l, &reg).unwrap();
            for u in 0..l.n_decisions() {
                assert!(b.values[u] <= rp.values[u] + 1e-12);
                assert!(rp.values[u] <= mm.values[u] + 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn monotone_in_the_point_set(
            seed in 0u64..10_000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = random_loss(&mut rng, 3, 3);
            let ab = Alphabet::new(l.theta_labels().to_vec()).unwrap();
            let mut points = Vec::new();
            for _ in 0..4 {
                let q = random_measure(&mut rng, &ab);
                if points.iter().all(|p: &Measure| p.tv_distance(&q).unwrap() > 1e-9) {
                    points.push(q);
                }
            }
            prop_assume!(points.len() >= 2);
            let small = Regularity::new(points[..points.len() - 1].to_vec(), false).unwrap();
            let large = Regularity::new(points.clone(), false).unwrap();
            let rs = regularity_criterion(&l, &small).unwrap();
            let rl = regularity_criterion(&l, &large).unwrap();
            for u in 0..l.n_decisions() {
                prop_assert!(rs.values[u] <= rl.values[u] + 1e-12);
            }
        }

        #[test]
        fn argmin_is_scale_and_shift_invariant(
            seed in 0u64..10_000,
            a in 0.1_f64..5.0,
            b in -5.0_f64..5.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = random_loss(&mut rng, 3, 4);
            let ab = Alphabet::new(l.theta_labels().to_vec()).unwrap();
            let scaled = LossMatrix::new(
                l.theta_labels().to_vec(),
                l.decision_labels().to_vec(),
                l.values()
                    .iter()
                    .map(|row| row.iter().map(|&v| a * v + b).collect())
                    .collect(),
            )
            .unwrap();
            let mu = random_measure(&mut rng, &ab);
            let reg = Regularity::new(
                vec![mu.clone(), random_measure(&mut rng, &ab)],
                true,
            )
            .unwrap();

            prop_assert_eq!(minimax(&l).argmin, minimax(&scaled).argmin);
            prop_assert_eq!(
                bayes(&l, &mu).unwrap().argmin,
                bayes(&scaled, &mu).unwrap().argmin
            );
            prop_assert_eq!(
                regularity_criterion(&l, &reg).unwrap().argmin,
                regularity_criterion(&scaled, &reg).unwrap().argmin
            );
        }
    }
}
