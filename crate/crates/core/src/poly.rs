//! Coefficient-vector algebra for monic real polynomials.
//!
//! A degree-`n` monic polynomial `a(s) = a_1 + a_2 s + ... + a_n s^{n-1} + s^n`
//! is stored as its coefficient vector `(a_1, ..., a_n)` in ascending powers
//! with the leading 1 implicit, so polynomials and points of `R^n` are the
//! same object. Exact rationals are canonical; floating views are derived.

use std::fmt;

use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::rational::{format_rational, to_f64_lossy};
use crate::{Error, Result};

/// Monic real polynomial of degree `>= 1`, stored as exact rational
/// coefficients `(a_1, ..., a_n)` in ascending powers; leading 1 implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPolynomial {
    coeffs: Vec<BigRational>,
}

impl MonicPolynomial {
    /// Build from the coefficient vector `(a_1, ..., a_n)`, ascending powers.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a monic polynomial needs at least one coefficient (degree >= 1)".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients `(a_1, ..., a_n)` ascending, leading 1 omitted.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Constant term `a_1`.
    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Coefficient of `s^k`, including the implicit leading 1 at `k == n`.
    pub fn coeff_of_power(&self, k: usize) -> BigRational {
        if k == self.degree() {
            BigRational::one()
        } else {
            self.coeffs[k].clone()
        }
    }

    /// Exact product. The result is monic of degree `deg(p) + deg(q)`; its
    /// coefficients are the convolution of the `(a_1, ..., a_n, 1)` vectors.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.degree();
        let m = other.degree();
        let mut out = vec![BigRational::zero(); n + m];
        for i in 0..=n {
            let pi = self.coeff_of_power(i);
            if pi.is_zero() {
                continue;
            }
            for j in 0..=m {
                if i + j == n + m {
                    continue; // leading 1 stays implicit
                }
                let qj = other.coeff_of_power(j);
                if !qj.is_zero() {
                    out[i + j] += &pi * qj;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Coefficientwise `lambda * p + (1 - lambda) * q` for same-degree
    /// polynomials and `lambda` in `[0, 1]`.
    pub fn convex_combination(p: &Self, q: &Self, lambda: &BigRational) -> Result<Self> {
        if p.degree() != q.degree() {
            return Err(Error::InvalidInput(format!(
                "convex combination needs equal degrees, got {} and {}",
                p.degree(),
                q.degree()
            )));
        }
        if lambda < &BigRational::zero() || lambda > &BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "lambda must lie in [0, 1], got {}",
                format_rational(lambda)
            )));
        }
        let mu = BigRational::one() - lambda;
        let coeffs = p
            .coeffs
            .iter()
            .zip(&q.coeffs)
            .map(|(a, b)| lambda * a + &mu * b)
            .collect();
        Ok(Self { coeffs })
    }

    /// Coefficientwise weighted sum of same-degree vertices. Weights must be
    /// nonnegative and sum exactly to 1.
    pub fn barycentric_point(vertices: &[Self], weights: &[BigRational]) -> Result<Self> {
        if vertices.is_empty() || vertices.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "barycentric point needs matching non-empty vertex/weight lists, got {} and {}",
                vertices.len(),
                weights.len()
            )));
        }
        let degree = vertices[0].degree();
        if vertices.iter().any(|v| v.degree() != degree) {
            return Err(Error::InvalidInput(
                "barycentric point needs vertices of equal degree".into(),
            ));
        }
        if weights.iter().any(|w| w < &BigRational::zero()) {
            return Err(Error::InvalidInput("negative barycentric weight".into()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "barycentric weights must sum to 1 exactly, got {}",
                format_rational(&total)
            )));
        }
        let mut coeffs = vec![BigRational::zero(); degree];
        for (v, w) in vertices.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (acc, c) in coeffs.iter_mut().zip(&v.coeffs) {
                *acc += w * c;
            }
        }
        Ok(Self { coeffs })
    }

    /// Horner evaluation of `a(s)` at a complex point, leading term included.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = acc * s + Complex64::new(to_f64_lossy(a), 0.0);
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn evaluate_rational(&self, s: &BigRational) -> BigRational {
        let mut acc = BigRational::one();
        for a in self.coeffs.iter().rev() {
            acc = acc * s + a;
        }
        acc
    }

    /// Remove one exact root at the origin: for `a(s) = s * q(s)` (constant
    /// term zero), return `q`. `None` when the constant term is nonzero or
    /// the quotient would have degree zero.
    pub fn deflate_origin(&self) -> Option<Self> {
        if !self.coeffs[0].is_zero() || self.degree() < 2 {
            return None;
        }
        Some(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Floating view of `(a_1, ..., a_n)`, ascending, leading 1 omitted.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64_lossy).collect()
    }
}

impl fmt::Display for MonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        write!(f, "s^{n}")?;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let body = format_rational(a);
            let (sign, mag) = match body.strip_prefix('-') {
                Some(rest) => (" - ", rest.to_string()),
                None => (" + ", body),
            };
            match k {
                0 => write!(f, "{sign}{mag}")?,
                1 => write!(f, "{sign}{mag}*s")?,
                _ => write!(f, "{sign}{mag}*s^{k}")?,
            }
        }
        Ok(())
    }
}

/// One quadratic building block `s^2 + alpha*s + alpha` with `alpha > 1`,
/// together with its two boundary degradations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFactor {
    alpha: BigRational,
}

impl QuadraticFactor {
    pub fn new(alpha: BigRational) -> Result<Self> {
        if alpha <= BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "quadratic factor parameter must exceed 1, got {}",
                format_rational(&alpha)
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// `s^2 + alpha*s + alpha` (strictly stable).
    pub fn full(&self) -> MonicPolynomial {
        MonicPolynomial {
            coeffs: vec![self.alpha.clone(), self.alpha.clone()],
        }
    }

    /// `s^2 + alpha` (roots on the imaginary axis).
    pub fn drop_linear(&self) -> MonicPolynomial {
        MonicPolynomial {
            coeffs: vec![self.alpha.clone(), BigRational::zero()],
        }
    }

    /// `s^2 + alpha*s` (one root at the origin).
    pub fn drop_constant(&self) -> MonicPolynomial {
        MonicPolynomial {
            coeffs: vec![BigRational::zero(), self.alpha.clone()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    fn poly(coeffs: &[BigRational]) -> MonicPolynomial {
        MonicPolynomial::from_coeffs(coeffs.to_vec()).unwrap()
    }

    fn ipoly(coeffs: &[i64]) -> MonicPolynomial {
        poly(&coeffs.iter().copied().map(integer).collect::<Vec<_>>())
    }

    #[test]
    fn from_coeffs_builds_the_counterexample_cubic() {
        let p = poly(&[ratio(1, 2), ratio(1, 6), ratio(2, 3)]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.constant_term(), &ratio(1, 2));
        assert_eq!(p.coeff_of_power(3), integer(1));
    }

    #[test]
    fn from_coeffs_rejects_empty_input() {
        assert!(MonicPolynomial::from_coeffs(vec![]).is_err());
    }

    #[test]
    fn multiply_matches_hand_convolutions() {
        let s_plus_1 = ipoly(&[1]);
        assert_eq!(s_plus_1.multiply(&s_plus_1), ipoly(&[1, 2]));

        let f1 = ipoly(&[2, 2]); // s^2 + 2s + 2
        let f2 = ipoly(&[3, 3]); // s^2 + 3s + 3
        assert_eq!(f1.multiply(&f2), ipoly(&[6, 12, 11, 5]));

        let f1_deg = ipoly(&[0, 2]); // s^2 + 2s
        assert_eq!(f1_deg.multiply(&f2), ipoly(&[0, 6, 9, 5]));
    }

    #[test]
    fn convex_combination_endpoints_and_midpoints() {
        let p = ipoly(&[6, 6, 5, 3]);
        let q = ipoly(&[6, 6, 5, 2]);
        assert_eq!(
            MonicPolynomial::convex_combination(&p, &q, &integer(1)).unwrap(),
            p
        );
        let mid = MonicPolynomial::convex_combination(&p, &q, &ratio(1, 2)).unwrap();
        assert_eq!(
            mid.coeffs(),
            &[integer(6), integer(6), integer(5), ratio(5, 2)]
        );

        let a = ipoly(&[6, 12, 11, 5]);
        let b = ipoly(&[0, 6, 9, 5]);
        let mid = MonicPolynomial::convex_combination(&a, &b, &ratio(1, 2)).unwrap();
        assert_eq!(mid, ipoly(&[3, 9, 10, 5]));
    }

    #[test]
    fn convex_combination_rejects_bad_input() {
        let p = ipoly(&[1, 2]);
        let q = ipoly(&[1, 2, 3]);
        assert!(MonicPolynomial::convex_combination(&p, &q, &ratio(1, 2)).is_err());
        let q2 = ipoly(&[2, 1]);
        assert!(MonicPolynomial::convex_combination(&p, &q2, &ratio(3, 2)).is_err());
        assert!(MonicPolynomial::convex_combination(&p, &q2, &ratio(-1, 2)).is_err());
    }

    #[test]
    fn barycentric_point_selects_and_averages() {
        let vs = [ipoly(&[1, 2]), ipoly(&[3, 4]), ipoly(&[5, 6])];
        let one_hot = MonicPolynomial::barycentric_point(
            &vs,
            &[integer(1), integer(0), integer(0)],
        )
        .unwrap();
        assert_eq!(one_hot, vs[0]);

        let two = MonicPolynomial::barycentric_point(
            &vs[..2],
            &[ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let combo =
            MonicPolynomial::convex_combination(&vs[0], &vs[1], &ratio(1, 2)).unwrap();
        assert_eq!(two, combo);
    }

    #[test]
    fn barycentric_point_rejects_bad_weights() {
        let vs = [ipoly(&[1, 2]), ipoly(&[3, 4])];
        assert!(
            MonicPolynomial::barycentric_point(&vs, &[ratio(1, 2), ratio(1, 3)]).is_err()
        );
        assert!(
            MonicPolynomial::barycentric_point(&vs, &[ratio(3, 2), ratio(-1, 2)]).is_err()
        );
        assert!(MonicPolynomial::barycentric_point(&vs, &[integer(1)]).is_err());
    }

    #[test]
    fn evaluate_confirms_cited_roots() {
        let counterexample = poly(&[ratio(1, 2), ratio(1, 6), ratio(2, 3)]);
        let at_minus_one = counterexample.evaluate(Complex64::new(-1.0, 0.0));
        assert!(at_minus_one.norm() < 1e-12);
        assert_eq!(
            counterexample.evaluate_rational(&integer(-1)),
            integer(0)
        );

        assert_eq!(ipoly(&[1]).evaluate(Complex64::new(0.0, 0.0)).re, 1.0);

        let quartic = ipoly(&[6, 12, 11, 5]);
        let root = Complex64::new(-1.0, -1.0); // root of s^2 + 2s + 2
        assert!(quartic.evaluate(root).norm() < 1e-12);
    }

    #[test]
    fn deflate_origin_shifts_coefficients() {
        let p = ipoly(&[0, 6, 9, 5]);
        assert_eq!(p.deflate_origin().unwrap(), ipoly(&[6, 9, 5]));
        assert!(ipoly(&[1, 2]).deflate_origin().is_none());
        assert!(ipoly(&[0]).deflate_origin().is_none());
    }

    #[test]
    fn quadratic_factor_forms_and_guard() {
        let f = QuadraticFactor::new(integer(2)).unwrap();
        assert_eq!(f.full(), ipoly(&[2, 2]));
        assert_eq!(f.drop_linear(), ipoly(&[2, 0]));
        assert_eq!(f.drop_constant(), ipoly(&[0, 2]));
        assert!(QuadraticFactor::new(integer(1)).is_err());
        assert!(QuadraticFactor::new(ratio(1, 2)).is_err());
    }

    #[test]
    fn display_renders_signs_and_powers() {
        let p = poly(&[ratio(-1, 2), integer(0), integer(3)]);
        assert_eq!(p.to_string(), "s^3 + 3*s^2 - 1/2");
    }
}
