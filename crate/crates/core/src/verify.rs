//! End-to-end verification of a constructed polytope: exact edge sweeps
//! against predictions, interior Monte Carlo, closed-form edge certificates
//! checked as exact identities, and a randomized search for stable pairs
//! with unstable midpoints.

use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::{MonicPolynomial, QuadraticFactor};
use crate::polytope::{EdgeClass, EdgePrediction, InteriorSample, PolytopeSpec, StablePolytope};
use crate::rational::{format_rational, integer, ratio};
use crate::stability::{classify, low_order_criterion_value, StabilityClass, StabilityVerdict};
use crate::{Error, Result};

/// One mismatch between prediction and classification on an edge grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeViolation {
    #[serde(with = "crate::rational::serde_string")]
    pub lambda: BigRational,
    pub verdict: StabilityClass,
}

/// Outcome of sweeping one edge on a uniform rational lambda grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeReport {
    pub endpoints: (usize, usize),
    pub predicted: EdgeClass,
    /// Number of grid points checked.
    pub samples: usize,
    pub violations: Vec<EdgeViolation>,
    /// Most positive root real part over the points the prediction requires
    /// to be stable (interior points of open-stable edges; origin-deflated
    /// quotients of boundary edges).
    pub worst_margin: f64,
}

/// One interior sample that failed to classify Stable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InteriorViolation {
    pub index: usize,
    #[serde(with = "crate::rational::serde_vec")]
    pub weights: Vec<BigRational>,
    pub verdict: StabilityClass,
}

/// Interior Monte Carlo summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InteriorReport {
    pub count: usize,
    pub violations: Vec<InteriorViolation>,
    pub worst_margin: f64,
}

/// One closed-form certificate identity evaluated at concrete parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub name: String,
    /// The closed-form value.
    #[serde(with = "crate::rational::serde_string")]
    pub symbolic: BigRational,
    /// The criterion value computed directly on the edge polynomial.
    #[serde(with = "crate::rational::serde_string")]
    pub direct: BigRational,
    pub matches: bool,
}

/// Whole-polytope verification outcome. Deterministic given
/// `(spec, grid, count, epsilon, seed)`; serializes byte-identically
/// across runs and worker counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub n: usize,
    #[serde(with = "crate::rational::serde_vec")]
    pub alphas: Vec<BigRational>,
    pub grid_size: usize,
    pub interior_count: usize,
    #[serde(with = "crate::rational::serde_string")]
    pub epsilon: BigRational,
    pub seed: u64,
    pub affine_rank: usize,
    pub edges: Vec<EdgeReport>,
    pub interior: InteriorReport,
    pub certificates: Vec<CertificateCheck>,
}

impl VerificationReport {
    pub fn total_violations(&self) -> usize {
        self.edges.iter().map(|e| e.violations.len()).sum::<usize>()
            + self.interior.violations.len()
    }

    pub fn all_certificates_match(&self) -> bool {
        self.certificates.iter().all(|c| c.matches)
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0 && self.all_certificates_match()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flatten the per-edge rows for spreadsheet inspection.
    pub fn edges_csv(&self) -> String {
        let mut out = String::from("i,j,predicted,samples,violations,worst_margin\n");
        for e in &self.edges {
            let predicted = match e.predicted {
                EdgeClass::OpenSegmentStable => "open_segment_stable",
                EdgeClass::OnBoundary => "on_boundary",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.endpoints.0,
                e.endpoints.1,
                predicted,
                e.samples,
                e.violations.len(),
                e.worst_margin
            ));
        }
        out
    }
}

/// Options for [`run_verification`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub grid_size: usize,
    pub interior_count: usize,
    pub epsilon: BigRational,
    pub seed: u64,
    /// Check only the uniform-weight barycenter instead of random samples.
    pub centroid_only: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_size: 101,
            interior_count: 10_000,
            epsilon: ratio(1, 1000),
            seed: 0,
            centroid_only: false,
        }
    }
}

/// Classify every edge at each grid lambda and compare with the prediction.
/// Violations are data, not errors; only exact/numeric inconsistencies of
/// the classifier itself surface as `Err`.
pub fn sweep_edges(poly: &StablePolytope, grid_size: usize) -> Result<Vec<EdgeReport>> {
    if grid_size < 3 {
        return Err(Error::InvalidInput(format!(
            "grid size must be at least 3, got {grid_size}"
        )));
    }
    let predictions = poly.predict_edges();
    let results: Vec<Result<EdgeReport>> = predictions
        .par_iter()
        .map(|pred| sweep_one_edge(poly, pred, grid_size))
        .collect();
    results.into_iter().collect()
}

fn sweep_one_edge(
    poly: &StablePolytope,
    pred: &EdgePrediction,
    grid_size: usize,
) -> Result<EdgeReport> {
    let (i, j) = pred.endpoints;
    let mut violations = Vec::new();
    let mut worst_margin = f64::NEG_INFINITY;
    for t in 0..grid_size {
        let lambda = ratio(t as i64, (grid_size - 1) as i64);
        let point = poly.edge_point(i, j, &lambda)?;
        match pred.predicted {
            EdgeClass::OpenSegmentStable => {
                let verdict = classify(&point)?;
                let endpoint = t == 0 || t + 1 == grid_size;
                let ok = match verdict.class {
                    StabilityClass::Stable => true,
                    StabilityClass::Boundary => endpoint,
                    StabilityClass::Unstable => false,
                };
                if !endpoint {
                    worst_margin = worst_margin.max(verdict.margin);
                }
                if !ok {
                    violations.push(EdgeViolation {
                        lambda,
                        verdict: verdict.class,
                    });
                }
            }
            EdgeClass::OnBoundary => {
                // The whole segment must carry an exact origin root whose
                // deflated quotient is strictly stable.
                if !point.constant_term().is_zero() {
                    let verdict = classify(&point)?;
                    violations.push(EdgeViolation {
                        lambda,
                        verdict: verdict.class,
                    });
                    continue;
                }
                let Some(quotient) = point.deflate_origin() else {
                    violations.push(EdgeViolation {
                        lambda,
                        verdict: StabilityClass::Boundary,
                    });
                    continue;
                };
                let qv = classify(&quotient)?;
                worst_margin = worst_margin.max(qv.margin);
                if qv.class != StabilityClass::Stable {
                    // Origin root plus a non-stable quotient: the point
                    // itself is boundary or unstable accordingly.
                    violations.push(EdgeViolation {
                        lambda,
                        verdict: if qv.class == StabilityClass::Unstable {
                            StabilityClass::Unstable
                        } else {
                            StabilityClass::Boundary
                        },
                    });
                }
            }
        }
    }
    Ok(EdgeReport {
        endpoints: pred.endpoints,
        predicted: pred.predicted,
        samples: grid_size,
        violations,
        worst_margin,
    })
}

/// Classify interior samples; returns the non-Stable ones with their
/// weights, and the most positive root real part seen.
pub fn check_interior(
    poly: &StablePolytope,
    count: usize,
    epsilon: &BigRational,
    seed: u64,
) -> Result<(Vec<InteriorViolation>, f64)> {
    let samples = poly.sample_interior(count, epsilon, seed)?;
    classify_samples(&samples)
}

fn classify_samples(samples: &[InteriorSample]) -> Result<(Vec<InteriorViolation>, f64)> {
    let results: Vec<Result<(Option<InteriorViolation>, f64)>> = samples
        .par_iter()
        .enumerate()
        .map(|(index, sample)| {
            let verdict = classify(&sample.point)?;
            let violation = (verdict.class != StabilityClass::Stable).then(|| {
                InteriorViolation {
                    index,
                    weights: sample.weights.clone(),
                    verdict: verdict.class,
                }
            });
            Ok((violation, verdict.margin))
        })
        .collect();
    let mut violations = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for r in results {
        let (violation, margin) = r?;
        violations.extend(violation);
        worst = worst.max(margin);
    }
    Ok((violations, worst))
}

fn check_certificate_preconditions(
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<()> {
    let one = BigRational::one();
    if alpha <= &one || beta <= &one {
        return Err(Error::InvalidInput(format!(
            "certificate parameters must exceed 1, got alpha={}, beta={}",
            format_rational(alpha),
            format_rational(beta)
        )));
    }
    Ok(())
}

/// The four degree-4 reduction vertices shared by every two-quadratic edge:
/// `[drop-linear x full, drop-constant x full, full x drop-linear,
/// full x drop-constant]` for parameters `(alpha, beta)`.
pub fn quartic_reduction_vertices(
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<[MonicPolynomial; 4]> {
    check_certificate_preconditions(alpha, beta)?;
    let a = QuadraticFactor::new(alpha.clone())?;
    let b = QuadraticFactor::new(beta.clone())?;
    Ok([
        a.drop_linear().multiply(&b.full()),
        a.drop_constant().multiply(&b.full()),
        a.full().multiply(&b.drop_linear()),
        a.full().multiply(&b.drop_constant()),
    ])
}

/// The three degree-3 reduction vertices for a quadratic block against a
/// linear block: `[drop-linear x (s+beta), drop-constant x (s+beta),
/// full x s]`.
pub fn cubic_reduction_vertices(
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<[MonicPolynomial; 3]> {
    check_certificate_preconditions(alpha, beta)?;
    let a = QuadraticFactor::new(alpha.clone())?;
    let linear = MonicPolynomial::from_coeffs(vec![beta.clone()])?;
    let bare_s = MonicPolynomial::from_coeffs(vec![BigRational::zero()])?;
    Ok([
        a.drop_linear().multiply(&linear),
        a.drop_constant().multiply(&linear),
        a.full().multiply(&bare_s),
    ])
}

/// Closed form `lambda*(1-lambda)*alpha*beta*(beta-alpha)^2` for the edge
/// joining the two imaginary-pair reduction vertices. Must equal the
/// degree-4 criterion value of the edge polynomial exactly.
pub fn certificate_b1b3(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    check_certificate_preconditions(alpha, beta)?;
    if alpha == beta {
        return Err(Error::InvalidInput(
            "the imaginary-pair edge certificate needs alpha != beta".into(),
        ));
    }
    if lambda <= &BigRational::zero() || lambda >= &BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in (0, 1), got {}",
            format_rational(lambda)
        )));
    }
    let diff = beta - alpha;
    Ok(lambda * (BigRational::one() - lambda) * alpha * beta * (&diff * &diff))
}

/// Degree-4 criterion value computed directly on the imaginary-pair edge
/// polynomial.
pub fn direct_value_b1b3(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    let v = quartic_reduction_vertices(alpha, beta)?;
    let edge = MonicPolynomial::convex_combination(&v[0], &v[2], lambda)?;
    low_order_criterion_value(&edge)
}

/// Closed form `[(1-lambda)*alpha + lambda*beta]*(alpha+beta) +
/// alpha*beta*(alpha+beta-1)` for the origin-root edge: the degree-3
/// criterion of the bracketed cubic after deflating the shared origin root.
pub fn certificate_b2b4_cubic(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    check_certificate_preconditions(alpha, beta)?;
    if lambda < &BigRational::zero() || lambda > &BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in [0, 1], got {}",
            format_rational(lambda)
        )));
    }
    let one = BigRational::one();
    let sum = alpha + beta;
    let mixed = (&one - lambda) * alpha + lambda * beta;
    Ok(&mixed * &sum + alpha * beta * (&sum - &one))
}

/// Degree-3 criterion value computed directly on the deflated origin-root
/// edge polynomial.
pub fn direct_value_b2b4_cubic(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    let v = quartic_reduction_vertices(alpha, beta)?;
    let edge = MonicPolynomial::convex_combination(&v[1], &v[3], lambda)?;
    let quotient = edge.deflate_origin().ok_or_else(|| {
        Error::Inconsistency("origin-root edge lost its zero constant term".into())
    })?;
    low_order_criterion_value(&quotient)
}

/// Closed form `(1-lambda)*alpha^2` for the edge joining the imaginary-pair
/// cubic vertex to the bare-s vertex. Must equal the degree-3 criterion of
/// the edge polynomial exactly.
pub fn certificate_c1c3(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    check_certificate_preconditions(alpha, beta)?;
    if lambda <= &BigRational::zero() || lambda > &BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in (0, 1], got {}",
            format_rational(lambda)
        )));
    }
    Ok((BigRational::one() - lambda) * alpha * alpha)
}

/// Degree-3 criterion value computed directly on the quadratic-vs-linear
/// edge polynomial.
pub fn direct_value_c1c3(
    alpha: &BigRational,
    beta: &BigRational,
    lambda: &BigRational,
) -> Result<BigRational> {
    let v = cubic_reduction_vertices(alpha, beta)?;
    let edge = MonicPolynomial::convex_combination(&v[0], &v[2], lambda)?;
    low_order_criterion_value(&edge)
}

/// Evaluate the applicable certificate identities for one spec at a small
/// lambda grid, reporting both sides exactly.
pub fn certificate_checks_for_spec(spec: &PolytopeSpec) -> Result<Vec<CertificateCheck>> {
    let lambdas = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    let mut out = Vec::new();
    let quads = &spec.alphas()[..spec.quadratic_count()];
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            let (a, b) = (&quads[i], &quads[j]);
            for l in &lambdas {
                let symbolic = certificate_b1b3(a, b, l)?;
                let direct = direct_value_b1b3(a, b, l)?;
                out.push(CertificateCheck {
                    name: format!(
                        "b1b3(alpha={}, beta={}, lambda={})",
                        format_rational(a),
                        format_rational(b),
                        format_rational(l)
                    ),
                    matches: symbolic == direct,
                    symbolic,
                    direct,
                });
                let symbolic = certificate_b2b4_cubic(a, b, l)?;
                let direct = direct_value_b2b4_cubic(a, b, l)?;
                out.push(CertificateCheck {
                    name: format!(
                        "b2b4_cubic(alpha={}, beta={}, lambda={})",
                        format_rational(a),
                        format_rational(b),
                        format_rational(l)
                    ),
                    matches: symbolic == direct,
                    symbolic,
                    direct,
                });
            }
        }
    }
    if let Some(beta) = spec.linear_alpha() {
        for a in quads {
            for l in &lambdas {
                let symbolic = certificate_c1c3(a, beta, l)?;
                let direct = direct_value_c1c3(a, beta, l)?;
                out.push(CertificateCheck {
                    name: format!(
                        "c1c3(alpha={}, beta={}, lambda={})",
                        format_rational(a),
                        format_rational(beta),
                        format_rational(l)
                    ),
                    matches: symbolic == direct,
                    symbolic,
                    direct,
                });
            }
        }
    }
    Ok(out)
}

/// Build the polytope for `spec` and run the full verification battery.
pub fn run_verification(
    spec: &PolytopeSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let poly = StablePolytope::build(spec.clone());
    let edges = sweep_edges(&poly, opts.grid_size)?;
    let (count, interior_violations, worst_interior) = if opts.centroid_only {
        let centroid = InteriorSample {
            weights: vec![
                BigRational::new(1.into(), (spec.n() + 1).into());
                spec.n() + 1
            ],
            point: poly.centroid(),
        };
        let (v, w) = classify_samples(&[centroid])?;
        (1, v, w)
    } else {
        if opts.interior_count == 0 {
            return Err(Error::InvalidInput("interior count must be >= 1".into()));
        }
        let (v, w) = check_interior(&poly, opts.interior_count, &opts.epsilon, opts.seed)?;
        (opts.interior_count, v, w)
    };
    Ok(VerificationReport {
        schema: "1".into(),
        n: spec.n(),
        alphas: spec.alphas().to_vec(),
        grid_size: opts.grid_size,
        interior_count: count,
        epsilon: opts.epsilon.clone(),
        seed: opts.seed,
        affine_rank: poly.affine_independence_rank(),
        edges,
        interior: InteriorReport {
            count,
            violations: interior_violations,
            worst_margin: worst_interior,
        },
        certificates: certificate_checks_for_spec(spec)?,
    })
}

/// A stable pair whose coefficient midpoint is unstable.
#[derive(Clone, Debug)]
pub struct NonConvexityWitness {
    pub p: MonicPolynomial,
    pub q: MonicPolynomial,
    pub midpoint: MonicPolynomial,
    pub p_verdict: StabilityVerdict,
    pub q_verdict: StabilityVerdict,
    pub midpoint_verdict: StabilityVerdict,
    pub trials_used: usize,
}

/// Wire form of a non-convexity witness.
#[derive(Serialize, Deserialize)]
pub struct WitnessJson {
    pub schema: String,
    pub n: usize,
    pub seed: u64,
    pub trials_used: usize,
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub midpoint: Vec<String>,
    pub p_class: StabilityClass,
    pub q_class: StabilityClass,
    pub midpoint_class: StabilityClass,
    pub midpoint_margin: f64,
}

impl NonConvexityWitness {
    pub fn to_json(&self, n: usize, seed: u64) -> WitnessJson {
        let strs = |p: &MonicPolynomial| p.coeffs().iter().map(format_rational).collect();
        WitnessJson {
            schema: "1".into(),
            n,
            seed,
            trials_used: self.trials_used,
            p: strs(&self.p),
            q: strs(&self.q),
            midpoint: strs(&self.midpoint),
            p_class: self.p_verdict.class,
            q_class: self.q_verdict.class,
            midpoint_class: self.midpoint_verdict.class,
            midpoint_margin: self.midpoint_verdict.margin,
        }
    }
}

/// Search for two stable degree-n polynomials whose coefficient midpoint is
/// unstable. `p` draws clustered slow real roots; `q` mixes one fast real
/// root with a lightly damped complex pair, the classic shape on which
/// midpoints fail. Every returned polynomial is re-verified by the exact
/// classifier. `None` when the trial budget runs out.
pub fn nonconvexity_search(
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<NonConvexityWitness>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "midpoint instability needs degree >= 3 (degrees 1 and 2 are convex), got {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trial budget must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slow_root = |rng: &mut ChaCha8Rng| ratio(rng.random_range(8..=32), 16);
    for trial in 0..trials {
        let mut p = linear_factor(slow_root(&mut rng));
        for _ in 1..n {
            p = p.multiply(&linear_factor(slow_root(&mut rng)));
        }

        let fast = integer(rng.random_range(50..=200));
        let damping = ratio(rng.random_range(1..=8), 32);
        let omega = ratio(rng.random_range(8..=32), 4);
        let pair =
            MonicPolynomial::from_coeffs(vec![&omega * &omega, damping]).expect("degree 2");
        let mut q = linear_factor(fast).multiply(&pair);
        for _ in 3..n {
            q = q.multiply(&linear_factor(slow_root(&mut rng)));
        }

        let midpoint = MonicPolynomial::convex_combination(&p, &q, &ratio(1, 2))?;
        let midpoint_verdict = classify(&midpoint)?;
        if midpoint_verdict.class != StabilityClass::Unstable {
            continue;
        }
        let p_verdict = classify(&p)?;
        let q_verdict = classify(&q)?;
        if p_verdict.class != StabilityClass::Stable
            || q_verdict.class != StabilityClass::Stable
        {
            return Err(Error::Inconsistency(
                "a product of stable factors failed to classify Stable".into(),
            ));
        }
        return Ok(Some(NonConvexityWitness {
            p,
            q,
            midpoint,
            p_verdict,
            q_verdict,
            midpoint_verdict,
            trials_used: trial + 1,
        }));
    }
    Ok(None)
}

fn linear_factor(root: BigRational) -> MonicPolynomial {
    MonicPolynomial::from_coeffs(vec![root]).expect("degree 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::integer;

    fn spec(n: usize, alphas: &[i64]) -> PolytopeSpec {
        PolytopeSpec::new(n, alphas.iter().copied().map(integer).collect()).unwrap()
    }

    #[test]
    fn reference_sweep_has_no_violations() {
        let poly = StablePolytope::build(spec(4, &[2, 3]));
        let reports = sweep_edges(&poly, 101).unwrap();
        assert_eq!(reports.len(), 10);
        for r in &reports {
            assert!(r.violations.is_empty(), "edge {:?}", r.endpoints);
            assert_eq!(r.samples, 101);
            assert!(r.worst_margin < 0.0);
        }
    }

    #[test]
    fn tiny_grid_sweep_checks_endpoints() {
        let poly = StablePolytope::build(spec(4, &[2, 3]));
        let reports = sweep_edges(&poly, 3).unwrap();
        let r01 = reports.iter().find(|r| r.endpoints == (0, 1)).unwrap();
        assert!(r01.violations.is_empty());
        assert!(sweep_edges(&poly, 2).is_err());
    }

    #[test]
    fn interior_check_reference_cases() {
        let poly = StablePolytope::build(spec(4, &[2, 3]));
        let (violations, worst) =
            check_interior(&poly, 500, &ratio(1, 1000), 42).unwrap();
        assert!(violations.is_empty());
        assert!(worst < 0.0);

        let odd = StablePolytope::build(spec(3, &[2, 3]));
        let (violations, _) = check_interior(&odd, 500, &ratio(1, 1000), 42).unwrap();
        assert!(violations.is_empty());
    }

    #[test]
    fn certificate_b1b3_reference_values() {
        let v = certificate_b1b3(&integer(2), &integer(3), &ratio(1, 2)).unwrap();
        assert_eq!(v, ratio(3, 2));
        assert_eq!(
            direct_value_b1b3(&integer(2), &integer(3), &ratio(1, 2)).unwrap(),
            ratio(3, 2)
        );

        let v = certificate_b1b3(&ratio(3, 2), &integer(5), &ratio(1, 4)).unwrap();
        assert_eq!(v, ratio(2205, 128));
        assert_eq!(
            direct_value_b1b3(&ratio(3, 2), &integer(5), &ratio(1, 4)).unwrap(),
            ratio(2205, 128)
        );

        assert!(certificate_b1b3(&integer(2), &integer(2), &ratio(1, 2)).is_err());
        assert!(certificate_b1b3(&integer(2), &integer(3), &integer(1)).is_err());
        assert!(certificate_b1b3(&integer(2), &integer(3), &integer(0)).is_err());
    }

    #[test]
    fn certificate_b2b4_reference_values() {
        let v = certificate_b2b4_cubic(&integer(2), &integer(3), &ratio(1, 2)).unwrap();
        assert_eq!(v, ratio(73, 2));
        assert_eq!(
            direct_value_b2b4_cubic(&integer(2), &integer(3), &ratio(1, 2)).unwrap(),
            ratio(73, 2)
        );

        // Endpoint lambda = 0 is the fourth reduction vertex itself.
        let v0 = certificate_b2b4_cubic(&integer(2), &integer(3), &integer(0)).unwrap();
        assert_eq!(
            v0,
            direct_value_b2b4_cubic(&integer(2), &integer(3), &integer(0)).unwrap()
        );

        for t in 0..=6 {
            let l = ratio(t, 6);
            let sym = certificate_b2b4_cubic(&ratio(3, 2), &integer(5), &l).unwrap();
            let dir = direct_value_b2b4_cubic(&ratio(3, 2), &integer(5), &l).unwrap();
            assert_eq!(sym, dir);
            assert!(sym.is_positive());
        }
    }

    #[test]
    fn certificate_c1c3_reference_values() {
        let v = certificate_c1c3(&integer(2), &integer(3), &ratio(1, 2)).unwrap();
        assert_eq!(v, integer(2));
        assert_eq!(
            direct_value_c1c3(&integer(2), &integer(3), &ratio(1, 2)).unwrap(),
            integer(2)
        );

        // lambda = 1 degenerates to 0: the endpoint sits on the boundary.
        let v1 = certificate_c1c3(&integer(2), &integer(3), &integer(1)).unwrap();
        assert!(v1.is_zero());
        assert_eq!(
            direct_value_c1c3(&integer(2), &integer(3), &integer(1)).unwrap(),
            integer(0)
        );

        let v = certificate_c1c3(&ratio(5, 2), &integer(3), &ratio(1, 4)).unwrap();
        assert_eq!(v, ratio(75, 16));
        assert_eq!(
            direct_value_c1c3(&ratio(5, 2), &integer(3), &ratio(1, 4)).unwrap(),
            ratio(75, 16)
        );
    }

    #[test]
    fn certificate_rows_for_specs() {
        let even = certificate_checks_for_spec(&spec(4, &[2, 3])).unwrap();
        assert_eq!(even.len(), 6); // one pair, two kinds, three lambdas
        assert!(even.iter().all(|c| c.matches));

        let odd = certificate_checks_for_spec(&spec(7, &[2, 3, 5, 7])).unwrap();
        // three quadratic pairs x two kinds x three lambdas + three c1c3 x three
        assert_eq!(odd.len(), 27);
        assert!(odd.iter().all(|c| c.matches));

        assert!(certificate_checks_for_spec(&spec(2, &[2])).unwrap().is_empty());
    }

    #[test]
    fn run_verification_produces_consistent_report() {
        let s = spec(3, &[2, 3]);
        let opts = VerifyOptions {
            grid_size: 11,
            interior_count: 200,
            seed: 7,
            ..Default::default()
        };
        let report = run_verification(&s, &opts).unwrap();
        assert!(report.passed());
        assert_eq!(report.schema, "1");
        assert_eq!(report.edges.len(), 6);
        assert_eq!(report.affine_rank, 3);
        assert_eq!(report.interior.count, 200);

        let bytes_a = report.to_json_string();
        let bytes_b = run_verification(&s, &opts).unwrap().to_json_string();
        assert_eq!(bytes_a, bytes_b);

        let back: VerificationReport = serde_json::from_str(&bytes_a).unwrap();
        assert_eq!(back.n, 3);
        assert_eq!(back.alphas, vec![integer(2), integer(3)]);
    }

    #[test]
    fn centroid_only_mode_checks_one_point() {
        let s = spec(4, &[2, 3]);
        let opts = VerifyOptions {
            grid_size: 5,
            centroid_only: true,
            seed: 1,
            ..Default::default()
        };
        let report = run_verification(&s, &opts).unwrap();
        assert_eq!(report.interior.count, 1);
        assert!(report.interior.violations.is_empty());
        assert!(report.interior.worst_margin < 0.0);
    }

    #[test]
    fn csv_flattening_has_one_row_per_edge() {
        let s = spec(4, &[2, 3]);
        let opts = VerifyOptions {
            grid_size: 5,
            interior_count: 10,
            seed: 1,
            ..Default::default()
        };
        let report = run_verification(&s, &opts).unwrap();
        let csv = report.edges_csv();
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.starts_with("i,j,predicted,samples,violations,worst_margin"));
        assert!(csv.contains("2,4,on_boundary,5,0,"));
    }

    #[test]
    fn nonconvexity_search_finds_and_verifies_witness() {
        for n in [3, 4] {
            let witness = nonconvexity_search(n, 100_000, 7)
                .unwrap()
                .unwrap_or_else(|| panic!("no witness found for degree {n}"));
            assert_eq!(witness.p_verdict.class, StabilityClass::Stable);
            assert_eq!(witness.q_verdict.class, StabilityClass::Stable);
            assert_eq!(witness.midpoint_verdict.class, StabilityClass::Unstable);
            let recheck = MonicPolynomial::convex_combination(
                &witness.p,
                &witness.q,
                &ratio(1, 2),
            )
            .unwrap();
            assert_eq!(recheck, witness.midpoint);
        }
    }

    #[test]
    fn nonconvexity_search_guards() {
        assert!(nonconvexity_search(2, 10, 1).is_err());
        assert!(nonconvexity_search(4, 0, 1).is_err());
    }

    #[test]
    fn nonconvexity_search_is_deterministic() {
        let a = nonconvexity_search(4, 50_000, 11).unwrap().unwrap();
        let b = nonconvexity_search(4, 50_000, 11).unwrap().unwrap();
        assert_eq!(a.p, b.p);
        assert_eq!(a.q, b.q);
        assert_eq!(a.trials_used, b.trials_used);
    }
}
