//! Hurwitz stability, decided three independent ways and fused.
//!
//! The exact path (Hurwitz-matrix leading principal minors over the
//! rationals, reduced to fraction-free integer elimination) is authoritative
//! for Stable/Unstable. The numeric root oracle (companion-matrix
//! eigenvalues) supplies the stability margin and settles boundary
//! sub-cases the minors leave open. Disagreement beyond [`BOUNDARY_BAND`]
//! is an error, never a silent pick.

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use serde::{Deserialize, Serialize};

use crate::poly::MonicPolynomial;
use crate::rational::format_rational;
use crate::{Error, Result};

/// Half-width of the real-part band treated as "on the imaginary axis" by
/// the numeric path. Well above eigensolver error at the degrees used here,
/// far below any margin the verification sweeps produce.
pub const BOUNDARY_BAND: f64 = 1e-7;

/// Root-location classification of a monic real polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityClass {
    /// All roots in the open left half-plane.
    Stable,
    /// No root in the open right half-plane, at least one on the axis.
    Boundary,
    /// At least one root in the open right half-plane.
    Unstable,
}

/// What each stability test reported for one polynomial.
#[derive(Clone, Debug)]
pub struct Evidence {
    /// Exact positivity of every coefficient (necessary for stability).
    pub all_coeffs_positive: bool,
    /// Leading principal minors of the Hurwitz matrix, exact. Empty when a
    /// negative coefficient already settled the verdict.
    pub minors: Vec<BigRational>,
    /// Closed-form criterion value for degrees 3 and 4.
    pub low_order: Option<BigRational>,
    /// Numeric roots, sorted by (re, im).
    pub roots: Vec<Complex64>,
}

/// Fused stability verdict with margin and supporting evidence.
#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    /// Max real part over the numeric roots; negative means stable.
    pub margin: f64,
    pub evidence: Evidence,
}

/// Wire form of a verdict: rationals as strings, roots as [re, im] pairs.
#[derive(Serialize, Deserialize)]
pub struct VerdictJson {
    pub class: StabilityClass,
    pub margin: f64,
    pub minors: Vec<String>,
    pub roots: Vec<[f64; 2]>,
}

impl StabilityVerdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            class: self.class,
            margin: self.margin,
            minors: self.evidence.minors.iter().map(format_rational).collect(),
            roots: self.evidence.roots.iter().map(|r| [r.re, r.im]).collect(),
        }
    }
}

/// The n x n Hurwitz matrix of a degree-n monic polynomial, exact.
///
/// Row `i`, column `j` (0-indexed) holds the coefficient of
/// `s^(n + i - 2j - 1)`, zero outside range; the leading 1 participates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzMatrix {
    order: usize,
    entries: Vec<Vec<BigRational>>,
}

impl HurwitzMatrix {
    pub fn new(p: &MonicPolynomial) -> Self {
        let n = p.degree();
        let entry = |i: usize, j: usize| {
            let power = n as i64 + i as i64 - 2 * j as i64 - 1;
            if (0..=n as i64).contains(&power) {
                p.coeff_of_power(power as usize)
            } else {
                BigRational::zero()
            }
        };
        let entries = (0..n)
            .map(|i| (0..n).map(|j| entry(i, j)).collect())
            .collect();
        Self { order: n, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    /// Leading principal minors `(D_1, ..., D_n)`, exact.
    ///
    /// The matrix is scaled to integers by the common denominator `d`, the
    /// integer minors come out of fraction-free elimination, and minor `k`
    /// is divided back by `d^k`.
    pub fn leading_principal_minors(&self) -> Vec<BigRational> {
        let mut scale = BigInt::one();
        for row in &self.entries {
            for e in row {
                scale = scale.lcm(e.denom());
            }
        }
        let int_matrix: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| (e * BigRational::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let int_minors = bareiss_leading_minors(&int_matrix);
        let mut denom = BigInt::one();
        int_minors
            .into_iter()
            .map(|m| {
                denom *= &scale;
                BigRational::new(m, denom.clone())
            })
            .collect()
    }
}

/// Leading principal minors of an integer matrix via Bareiss fraction-free
/// elimination. After k steps the pivot equals the (k+1)-th leading minor;
/// a zero pivot would poison later Sylvester divisions, so the remaining
/// minors fall back to independent pivoted determinants.
fn bareiss_leading_minors(h: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = h.len();
    let mut m = h.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        minors.push(pivot.clone());
        if k + 1 == n {
            break;
        }
        if pivot.is_zero() {
            for t in k + 2..=n {
                let sub: Vec<Vec<BigInt>> =
                    (0..t).map(|i| h[i][..t].to_vec()).collect();
                minors.push(determinant_int(sub));
            }
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &pivot * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Sylvester's identity
            }
        }
        prev = pivot;
    }
    minors
}

/// Exact integer determinant: Bareiss with row pivoting and sign tracking.
fn determinant_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &pivot * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// True iff every coefficient `a_i > 0` exactly. Necessary but not
/// sufficient for stability.
pub fn positivity_check(p: &MonicPolynomial) -> bool {
    p.coeffs().iter().all(|a| a.is_positive())
}

/// Leading principal minors of the Hurwitz matrix of `p`, exact.
/// All strictly positive iff `p` is Hurwitz stable.
pub fn hurwitz_minors(p: &MonicPolynomial) -> Vec<BigRational> {
    HurwitzMatrix::new(p).leading_principal_minors()
}

/// Outcome of the low-order closed-form criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowOrderVerdict {
    Stable,
    NotStable,
}

/// Discriminating quantity of the closed-form criteria for degrees 3 and 4,
/// on ascending coefficients `(b_1, ..., b_n)`:
/// degree 3: `b_2*b_3 - b_1`; degree 4: `b_2*b_3*b_4 - b_1*b_4^2 - b_2^2`.
pub fn low_order_criterion_value(p: &MonicPolynomial) -> Result<BigRational> {
    let c = p.coeffs();
    match p.degree() {
        3 => Ok(&c[1] * &c[2] - &c[0]),
        4 => Ok(&c[1] * &c[2] * &c[3] - &c[0] * &c[3] * &c[3] - &c[1] * &c[1]),
        n => Err(Error::InvalidInput(format!(
            "closed-form criterion value is defined for degrees 3 and 4, got {n}"
        ))),
    }
}

/// Closed-form stability test for degrees 2..=4 with positive coefficients:
/// degree 2 is stable outright, degrees 3 and 4 iff the criterion value is
/// strictly positive.
pub fn low_order_test(p: &MonicPolynomial) -> Result<LowOrderVerdict> {
    let n = p.degree();
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "low-order test covers degrees 2..=4, got {n}"
        )));
    }
    if !positivity_check(p) {
        return Err(Error::InvalidInput(
            "low-order test assumes strictly positive coefficients".into(),
        ));
    }
    let stable = match n {
        2 => true,
        _ => low_order_criterion_value(p)?.is_positive(),
    };
    Ok(if stable {
        LowOrderVerdict::Stable
    } else {
        LowOrderVerdict::NotStable
    })
}

/// All `n` roots (with multiplicity), as eigenvalues of the companion
/// matrix, sorted by (re, im).
pub fn roots(p: &MonicPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let a = p.to_f64_coeffs();
    let mut rs: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(-a[0], 0.0)]
    } else {
        let companion = DMatrix::<f64>::from_fn(n, n, |i, j| {
            if j + 1 == n {
                -a[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect()
    };
    rs.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    rs
}

/// What the exact path alone can prove.
enum ExactOutcome {
    Proven(StabilityClass),
    /// Provably not stable; Boundary vs Unstable needs root locations.
    BoundaryOrUnstable,
}

fn exact_class(p: &MonicPolynomial, minors_of_p: Option<&[BigRational]>) -> ExactOutcome {
    use ExactOutcome::*;
    use StabilityClass::*;
    let coeffs = p.coeffs();
    // Any negative coefficient is an exact instability witness: polynomials
    // with all roots in the closed left half-plane have nonnegative
    // coefficients.
    if coeffs.iter().any(|a| a.is_negative()) {
        return Proven(Unstable);
    }
    if coeffs[0].is_zero() {
        // Exact root at the origin; classify the deflated quotient.
        let Some(q) = p.deflate_origin() else {
            return Proven(Boundary); // p(s) = s
        };
        return match exact_class(&q, None) {
            Proven(Stable) | Proven(Boundary) => Proven(Boundary),
            Proven(Unstable) => Proven(Unstable),
            BoundaryOrUnstable => BoundaryOrUnstable,
        };
    }
    if p.degree() == 1 {
        return Proven(Stable); // s + a_1 with a_1 > 0
    }
    if coeffs.iter().any(|a| a.is_zero()) {
        // Positive constant term but an interior zero coefficient: not
        // stable; axis pair vs right-half-plane root is for the oracle.
        return BoundaryOrUnstable;
    }
    let owned;
    let minors = match minors_of_p {
        Some(m) => m,
        None => {
            owned = hurwitz_minors(p);
            &owned
        }
    };
    if minors.iter().all(|d| d.is_positive()) {
        Proven(Stable)
    } else {
        BoundaryOrUnstable
    }
}

/// Classify `p` as Stable, Boundary, or Unstable.
///
/// The exact minor path decides Stable/Unstable; the root oracle confirms
/// and settles the boundary sub-cases. The two paths disagreeing beyond
/// [`BOUNDARY_BAND`] surfaces as [`Error::Inconsistency`].
pub fn classify(p: &MonicPolynomial) -> Result<StabilityVerdict> {
    use StabilityClass::*;
    let rts = roots(p);
    let margin = rts.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);

    let has_negative = p.coeffs().iter().any(|a| a.is_negative());
    let minors = if has_negative {
        Vec::new()
    } else {
        hurwitz_minors(p)
    };
    let low_order = if !has_negative && matches!(p.degree(), 3 | 4) {
        Some(low_order_criterion_value(p)?)
    } else {
        None
    };

    let inconsistency = |claim: &str| {
        Error::Inconsistency(format!(
            "exact path proves {claim} but the root oracle reports margin {margin:.3e} for {p}"
        ))
    };
    let class = match exact_class(p, Some(&minors)) {
        ExactOutcome::Proven(Stable) => {
            if margin > BOUNDARY_BAND {
                return Err(inconsistency("stability"));
            }
            Stable
        }
        ExactOutcome::Proven(Unstable) => {
            if margin < -BOUNDARY_BAND {
                return Err(inconsistency("instability"));
            }
            Unstable
        }
        ExactOutcome::Proven(Boundary) => {
            if margin.abs() > BOUNDARY_BAND {
                return Err(inconsistency("a boundary polynomial"));
            }
            Boundary
        }
        ExactOutcome::BoundaryOrUnstable => {
            if margin > BOUNDARY_BAND {
                Unstable
            } else if margin >= -BOUNDARY_BAND {
                Boundary
            } else {
                return Err(inconsistency("non-stability"));
            }
        }
    };

    Ok(StabilityVerdict {
        class,
        margin,
        evidence: Evidence {
            all_coeffs_positive: positivity_check(p),
            minors,
            low_order,
            roots: rts,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    fn ipoly(coeffs: &[i64]) -> MonicPolynomial {
        MonicPolynomial::from_coeffs(coeffs.iter().copied().map(integer).collect()).unwrap()
    }

    fn counterexample() -> MonicPolynomial {
        MonicPolynomial::from_coeffs(vec![ratio(1, 2), ratio(1, 6), ratio(2, 3)]).unwrap()
    }

    #[test]
    fn hurwitz_matrix_layout_for_a_cubic() {
        let h = HurwitzMatrix::new(&ipoly(&[6, 8, 5]));
        let expect = [[5, 6, 0], [1, 8, 0], [0, 5, 6]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.entry(i, j), &integer(expect[i][j]), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn minors_match_hand_determinants() {
        assert_eq!(
            hurwitz_minors(&ipoly(&[6, 8, 5])),
            vec![integer(5), integer(34), integer(204)]
        );
        assert_eq!(hurwitz_minors(&ipoly(&[1, 2])), vec![integer(2), integer(2)]);
        let m = hurwitz_minors(&counterexample());
        assert_eq!(m[0], ratio(2, 3));
        assert_eq!(m[1], ratio(-7, 18));
        assert_eq!(m[2], ratio(-7, 36)); // D_3 = a_1 * D_2
    }

    #[test]
    fn minors_survive_zero_pivots() {
        // (s^2+1)(s+1): D = (1, 0, 0); the zero pivot forces the fallback.
        assert_eq!(
            hurwitz_minors(&ipoly(&[1, 1, 1])),
            vec![integer(1), integer(0), integer(0)]
        );
        // (s^2+2)(s^2+3s+3): constant-free linear term upstream of a zero.
        let p = ipoly(&[6, 6, 5, 3]);
        let m = hurwitz_minors(&p);
        assert_eq!(m.len(), 4);
        assert_eq!(m[3], integer(0));
    }

    #[test]
    fn positivity_is_necessary_not_sufficient() {
        assert!(positivity_check(&counterexample()));
        assert!(!positivity_check(&ipoly(&[0, 6, 9, 5])));
        assert!(positivity_check(&ipoly(&[6, 12, 11, 5])));
    }

    #[test]
    fn low_order_values_and_verdicts() {
        let stable4 = ipoly(&[6, 12, 11, 5]);
        assert_eq!(low_order_criterion_value(&stable4).unwrap(), integer(366));
        assert_eq!(low_order_test(&stable4).unwrap(), LowOrderVerdict::Stable);

        assert_eq!(
            low_order_criterion_value(&counterexample()).unwrap(),
            ratio(-7, 18)
        );
        assert_eq!(
            low_order_test(&counterexample()).unwrap(),
            LowOrderVerdict::NotStable
        );

        let edge_mid = MonicPolynomial::from_coeffs(vec![
            integer(6),
            integer(6),
            integer(5),
            ratio(5, 2),
        ])
        .unwrap();
        assert_eq!(low_order_criterion_value(&edge_mid).unwrap(), ratio(3, 2));

        assert!(low_order_test(&ipoly(&[1, 1, 1, 1, 1])).is_err());
        assert!(low_order_test(&ipoly(&[0, 6, 9, 5])).is_err());
    }

    #[test]
    fn low_order_agrees_with_minors_on_small_degrees() {
        // For positive coefficients the closed forms and the minor test must
        // coincide exactly.
        for coeffs in [
            vec![integer(1), integer(2)],
            vec![ratio(1, 2), ratio(1, 6), ratio(2, 3)],
            vec![integer(6), integer(8), integer(5)],
            vec![integer(6), integer(12), integer(11), integer(5)],
            vec![integer(6), integer(6), integer(5), ratio(5, 2)],
            vec![integer(9), integer(1), integer(1), integer(1)],
        ] {
            let p = MonicPolynomial::from_coeffs(coeffs).unwrap();
            let by_minors = hurwitz_minors(&p).iter().all(|d| d.is_positive());
            let by_closed_form = low_order_test(&p).unwrap() == LowOrderVerdict::Stable;
            assert_eq!(by_minors, by_closed_form, "{p}");
        }
    }

    #[test]
    fn roots_match_cited_values() {
        let rts = roots(&counterexample());
        assert_eq!(rts.len(), 3);
        let sqrt17_over_6 = 17f64.sqrt() / 6.0;
        assert!((rts[0].re + 1.0).abs() < 1e-9);
        assert!(rts[0].im.abs() < 1e-9);
        for r in &rts[1..] {
            assert!((r.re - 1.0 / 6.0).abs() < 1e-9);
            assert!((r.im.abs() - sqrt17_over_6).abs() < 1e-9);
        }
    }

    #[test]
    fn roots_handle_multiplicity_and_origin() {
        let double = roots(&ipoly(&[1, 2]));
        for r in &double {
            assert!((r.re + 1.0).abs() < 1e-7 && r.im.abs() < 1e-7);
        }
        let rts = roots(&ipoly(&[0, 6, 9, 5]));
        assert_eq!(rts.len(), 4);
        assert!(rts.iter().any(|r| r.norm() < 1e-12));
        assert_eq!(rts.iter().filter(|r| r.re < -1e-9).count(), 3);
    }

    #[test]
    fn vieta_sum_holds() {
        let p = ipoly(&[3, 1, 4, 1, 5, 9, 2]);
        let sum: Complex64 = roots(&p).into_iter().sum();
        assert!((sum.re + 2.0).abs() < 1e-8);
        assert!(sum.im.abs() < 1e-8);
    }

    #[test]
    fn classify_headline_cases() {
        assert_eq!(
            classify(&ipoly(&[6, 12, 11, 5])).unwrap().class,
            StabilityClass::Stable
        );
        assert_eq!(
            classify(&ipoly(&[0, 6, 9, 5])).unwrap().class,
            StabilityClass::Boundary
        );
        assert_eq!(
            classify(&ipoly(&[6, 6, 5, 3])).unwrap().class,
            StabilityClass::Boundary
        );
        let v = classify(&counterexample()).unwrap();
        assert_eq!(v.class, StabilityClass::Unstable);
        assert!(v.margin > 0.1);
    }

    #[test]
    fn classify_degenerate_and_axis_cases() {
        assert_eq!(classify(&ipoly(&[1])).unwrap().class, StabilityClass::Stable);
        assert_eq!(classify(&ipoly(&[0])).unwrap().class, StabilityClass::Boundary);
        assert_eq!(classify(&ipoly(&[-1])).unwrap().class, StabilityClass::Unstable);
        // s^2 + 1
        assert_eq!(classify(&ipoly(&[1, 0])).unwrap().class, StabilityClass::Boundary);
        // (s^2+1)(s^2+4)
        assert_eq!(
            classify(&ipoly(&[4, 0, 5, 0])).unwrap().class,
            StabilityClass::Boundary
        );
        // (s^2+1)^2: repeated axis pair stays Boundary.
        assert_eq!(
            classify(&ipoly(&[1, 0, 2, 0])).unwrap().class,
            StabilityClass::Boundary
        );
        // s^4: repeated origin root.
        assert_eq!(
            classify(&ipoly(&[0, 0, 0, 0])).unwrap().class,
            StabilityClass::Boundary
        );
        // s(s^4+1): origin root plus right-half-plane pair.
        assert_eq!(
            classify(&ipoly(&[0, 1, 0, 0, 0])).unwrap().class,
            StabilityClass::Unstable
        );
        // Negative coefficient: exact witness.
        assert_eq!(
            classify(&ipoly(&[-1, 2, 3])).unwrap().class,
            StabilityClass::Unstable
        );
    }

    #[test]
    fn classify_margin_sign_tracks_class() {
        let stable = classify(&ipoly(&[6, 12, 11, 5])).unwrap();
        assert!(stable.margin < -BOUNDARY_BAND);
        let boundary = classify(&ipoly(&[0, 6, 9, 5])).unwrap();
        assert!(boundary.margin.abs() <= BOUNDARY_BAND);
        let unstable = classify(&counterexample()).unwrap();
        assert!(unstable.margin > BOUNDARY_BAND);
    }

    #[test]
    fn classify_is_pure() {
        let p = ipoly(&[3, 9, 10, 5]);
        let a = classify(&p).unwrap();
        let b = classify(&p).unwrap();
        assert_eq!(a.class, b.class);
        assert_eq!(a.margin.to_bits(), b.margin.to_bits());
        assert_eq!(a.evidence.minors, b.evidence.minors);
    }

    #[test]
    fn verdict_json_shape() {
        let v = classify(&ipoly(&[1, 2])).unwrap();
        let json = serde_json::to_value(v.to_json()).unwrap();
        assert_eq!(json["class"], "stable");
        assert_eq!(json["minors"], serde_json::json!(["2", "2"]));
        assert!(json["roots"].as_array().unwrap().len() == 2);
    }
}
