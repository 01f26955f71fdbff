//! Probability vectors on a finite alphabet and bounded test functions.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::metric;
use crate::{IDENTITY_TOL, INPUT_TOL};

/// A probability vector indexed by the coordinates of an [`Alphabet`].
///
/// Weights are normalized at construction: entries are clamped at zero
/// (rejecting anything below `-1e-12`) and divided by their sum, so any
/// vector of nonnegative masses is accepted. Once built, weights are
/// nonnegative and sum to one up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    alphabet: Alphabet,
    weights: Vec<f64>,
}

impl Measure {
    /// Normalizes `weights` into a probability vector on `alphabet`.
    pub fn new(alphabet: &Alphabet, weights: &[f64]) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                expected: alphabet.len(),
                got: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index: i });
            }
            if w < -IDENTITY_TOL {
                return Err(Error::NegativeWeight { index: i, value: w });
            }
        }
        let mut v: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
        let sum: f64 = v.iter().sum();
        if sum < INPUT_TOL {
            return Err(Error::ZeroMass);
        }
        for w in &mut v {
            *w /= sum;
        }
        Ok(Self {
            alphabet: alphabet.clone(),
            weights: v,
        })
    }

    /// Wraps weights that are already an exact probability vector, skipping
    /// the normalizing division. Callers guarantee nonnegativity and unit sum.
    pub(crate) fn from_normalized(alphabet: &Alphabet, weights: Vec<f64>) -> Self {
        debug_assert_eq!(weights.len(), alphabet.len());
        debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Self {
            alphabet: alphabet.clone(),
            weights,
        }
    }

    /// The measure placing all mass on `symbol`.
    pub fn dirac(alphabet: &Alphabet, symbol: &str) -> Result<Self> {
        let idx = alphabet.require(symbol)?;
        let mut weights = vec![0.0; alphabet.len()];
        weights[idx] = 1.0;
        Ok(Self {
            alphabet: alphabet.clone(),
            weights,
        })
    }

    /// The uniform measure on the alphabet.
    pub fn uniform(alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        Self {
            alphabet: alphabet.clone(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of a single symbol.
    pub fn weight_of(&self, symbol: &str) -> Result<f64> {
        Ok(self.weights[self.alphabet.require(symbol)?])
    }

    /// Expectation of each row of `gamma` under this measure.
    ///
    /// Row `k` contributes `sum_x p(x) * gamma_k(x)`; the result has one
    /// entry per row.
    pub fn expectation(&self, gamma: &TestFunction) -> Result<Vec<f64>> {
        self.alphabet.check_same(gamma.alphabet())?;
        Ok(gamma
            .rows()
            .iter()
            .map(|row| dot(&self.weights, row))
            .collect())
    }

    /// Total variation distance: half the L1 distance between weight vectors.
    pub fn tv_distance(&self, other: &Measure) -> Result<f64> {
        self.alphabet.check_same(&other.alphabet)?;
        Ok(metric::half_l1(&self.weights, &other.weights))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// A measure with weights `numerators[i] / denominator`.
///
/// Rational measures are the exact carriers of tuple frequencies: a tuple of
/// length `D` realizes precisely the measures with denominator `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMeasure {
    alphabet: Alphabet,
    numerators: Vec<u64>,
    denominator: u64,
}

impl RationalMeasure {
    /// Requires `numerators` to sum exactly to `denominator >= 1`.
    pub fn new(alphabet: &Alphabet, numerators: Vec<u64>, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter(
                "denominator must be at least 1".into(),
            ));
        }
        if numerators.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                expected: alphabet.len(),
                got: numerators.len(),
            });
        }
        let sum: u64 = numerators.iter().sum();
        if sum != denominator {
            return Err(Error::InvalidParameter(format!(
                "numerators sum to {sum}, expected denominator {denominator}"
            )));
        }
        Ok(Self {
            alphabet: alphabet.clone(),
            numerators,
            denominator,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// The floating point measure with weights `numerators / denominator`.
    pub fn to_measure(&self) -> Measure {
        let d = self.denominator as f64;
        Measure {
            alphabet: self.alphabet.clone(),
            weights: self.numerators.iter().map(|&n| n as f64 / d).collect(),
        }
    }
}

/// A bounded vector-valued function on the alphabet, stored as rows.
///
/// Row `k` lists the value of coordinate `k` at each symbol, so a function
/// into `R^m` is an `m x |alphabet|` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    alphabet: Alphabet,
    rows: Vec<Vec<f64>>,
}

impl TestFunction {
    /// Builds a function from its rows; every row must have one finite value
    /// per symbol and at least one row must be present.
    pub fn new(alphabet: &Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter(
                "test function needs at least one row".into(),
            ));
        }
        for row in &rows {
            if row.len() != alphabet.len() {
                return Err(Error::DimensionMismatch {
                    expected: alphabet.len(),
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
            alphabet: alphabet.clone(),
            rows,
        })
    }

    /// Convenience constructor for a scalar-valued function.
    pub fn single_row(alphabet: &Alphabet, row: Vec<f64>) -> Result<Self> {
        Self::new(alphabet, vec![row])
    }

    /// The `|alphabet|` indicator rows, one per symbol.
    ///
    /// Expectations under this function reproduce the weight vector itself,
    /// which makes it a universal separator for distinct regularities.
    pub fn coordinate_indicators(alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        let rows = (0..n)
            .map(|k| {
                let mut row = vec![0.0; n];
                row[k] = 1.0;
                row
            })
            .collect();
        Self {
            alphabet: alphabet.clone(),
            rows,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Number of output coordinates.
    pub fn output_dim(&self) -> usize {
        self.rows.len()
    }

    /// Value of the function at symbol coordinate `i`, as a point in `R^m`.
    pub fn value_at(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab2() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn ab3() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn normalizes_raw_masses() {
        let p = Measure::new(&ab2(), &[2.0, 2.0]).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.5]);

        let q = Measure::new(&ab3(), &[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(q.weights(), &[0.25, 0.5, 0.25]);

        // Tiny negative noise is clamped rather than rejected.
        let r = Measure::new(&ab2(), &[1.0, -1e-13]).unwrap();
        assert_eq!(r.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_weight_vectors() {
        assert!(matches!(
            Measure::new(&ab2(), &[0.5, 0.25, 0.25]),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
        assert!(matches!(
            Measure::new(&ab2(), &[0.5, -0.1]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            Measure::new(&ab2(), &[0.0, 0.0]),
            Err(Error::ZeroMass)
        ));
        assert!(matches!(
            Measure::new(&ab2(), &[f64::NAN, 1.0]),
            Err(Error::NonFiniteWeight { index: 0 })
        ));
    }

    #[test]
    fn dirac_and_uniform() {
        let d = Measure::dirac(&ab3(), "b").unwrap();
        assert_eq!(d.weights(), &[0.0, 1.0, 0.0]);
        assert!(matches!(
            Measure::dirac(&ab3(), "z"),
            Err(Error::UnknownSymbol(_))
        ));
        let u = Measure::uniform(&ab2());
        assert_eq!(u.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn expectation_of_indicator_row() {
        let p = Measure::new(&ab2(), &[0.7, 0.3]).unwrap();
        let gamma = TestFunction::single_row(&ab2(), vec![0.0, 1.0]).unwrap();
        let e = p.expectation(&gamma).unwrap();
        assert!((e[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn expectation_under_coordinate_indicators_is_identity() {
        let p = Measure::new(&ab3(), &[0.2, 0.3, 0.5]).unwrap();
        let gamma = TestFunction::coordinate_indicators(&ab3());
        assert_eq!(p.expectation(&gamma).unwrap(), p.weights());
    }

    #[test]
    fn expectation_checks_alphabet() {
        let p = Measure::new(&ab2(), &[0.7, 0.3]).unwrap();
        let gamma = TestFunction::single_row(&ab3(), vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            p.expectation(&gamma),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn tv_distance_examples() {
        let p = Measure::new(&ab2(), &[0.7, 0.3]).unwrap();
        let q = Measure::new(&ab2(), &[0.5, 0.5]).unwrap();
        assert!((p.tv_distance(&q).unwrap() - 0.2).abs() < 1e-15);

        let da = Measure::dirac(&ab2(), "a").unwrap();
        let db = Measure::dirac(&ab2(), "b").unwrap();
        assert_eq!(da.tv_distance(&db).unwrap(), 1.0);
        assert_eq!(da.tv_distance(&da).unwrap(), 0.0);
    }

    #[test]
    fn rational_measure_checks_totals() {
        let q = RationalMeasure::new(&ab2(), vec![3, 1], 4).unwrap();
        assert_eq!(q.to_measure().weights(), &[0.75, 0.25]);
        assert!(RationalMeasure::new(&ab2(), vec![3, 2], 4).is_err());
        assert!(RationalMeasure::new(&ab2(), vec![0, 0], 0).is_err());
        assert!(matches!(
            RationalMeasure::new(&ab3(), vec![2, 2], 4),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn test_function_validation() {
        assert!(matches!(
            TestFunction::new(&ab2(), vec![]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            TestFunction::new(&ab2(), vec![vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            TestFunction::new(&ab2(), vec![vec![1.0, f64::INFINITY]]),
            Err(Error::NonFiniteWeight { .. })
        ));
        let g = TestFunction::new(&ab2(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(g.output_dim(), 2);
        assert_eq!(g.value_at(1), vec![2.0, 4.0]);
    }

    fn arb_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0_f64..10.0, n).prop_filter("positive mass", |v| {
            v.iter().sum::<f64>() > 1e-3
        })
    }

    proptest! {
        #[test]
        fn tv_is_a_metric_on_the_simplex(
            wa in arb_weights(4),
            wb in arb_weights(4),
            wc in arb_weights(4),
        ) {
            let ab = Alphabet::new(["a", "b", "c", "d"]).unwrap();
            let p = Measure::new(&ab, &wa).unwrap();
            let q = Measure::new(&ab, &wb).unwrap();
            let r = Measure::new(&ab, &wc).unwrap();
            let pq = p.tv_distance(&q).unwrap();
            let qp = q.tv_distance(&p).unwrap();
            prop_assert!((pq - qp).abs() < 1e-15);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
            prop_assert!(p.tv_distance(&p).unwrap() == 0.0);
            let pr = p.tv_distance(&r).unwrap();
            let rq = r.tv_distance(&q).unwrap();
            prop_assert!(pq <= pr + rq + 1e-12);
        }

        #[test]
        fn expectation_is_linear_in_the_function(
            w in arb_weights(3),
            row_a in proptest::collection::vec(-5.0_f64..5.0, 3),
            row_b in proptest::collection::vec(-5.0_f64..5.0, 3),
            s in -3.0_f64..3.0,
        ) {
            let ab = Alphabet::new(["a", "b", "c"]).unwrap();
            let p = Measure::new(&ab, &w).unwrap();
            let combo: Vec<f64> = row_a.iter().zip(&row_b).map(|(x, y)| s * x + y).collect();
            let ga = TestFunction::single_row(&ab, row_a).unwrap();
            let gb = TestFunction::single_row(&ab, row_b).unwrap();
            let gc = TestFunction::single_row(&ab, combo).unwrap();
            let ea = p.expectation(&ga).unwrap()[0];
            let eb = p.expectation(&gb).unwrap()[0];
            let ec = p.expectation(&gc).unwrap()[0];
            prop_assert!((ec - (s * ea + eb)).abs() < 1e-9);
        }

        #[test]
        fn normalization_yields_unit_mass(w in arb_weights(5)) {
            let ab = Alphabet::new(["a", "b", "c", "d", "e"]).unwrap();
            let p = Measure::new(&ab, &w).unwrap();
            let total: f64 = p.weights().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(p.weights().iter().all(|&x| x >= 0.0));
        }
    }
}
