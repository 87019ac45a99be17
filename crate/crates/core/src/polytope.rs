//! The (n+1)-vertex stable polytopes in coefficient space.
//!
//! Vertex 0 is a product of strictly stable blocks; each remaining vertex
//! degrades exactly one block onto the stability boundary, either by
//! dropping the linear term of a quadratic (an imaginary root pair) or by
//! dropping a constant term (a root at the origin). Edges whose endpoints
//! both carry a zero constant term lie on the stability boundary; every
//! other edge is stable on its open segment.

use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{MonicPolynomial, QuadraticFactor};
use crate::rational::{format_rational, integer, ratio};
use crate::{Error, Result};

/// Parameters of one polytope instance: the degree and the block
/// parameters. Even `n` uses `n/2` quadratic parameters; odd `n` uses
/// `(n-1)/2` quadratic parameters plus one linear parameter, `(n+1)/2`
/// values in total. All must exceed 1 and be pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeSpec {
    n: usize,
    alphas: Vec<BigRational>,
}

impl PolytopeSpec {
    pub fn new(n: usize, alphas: Vec<BigRational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "degree must be at least 2, got {n}"
            )));
        }
        let expected = n.div_ceil(2);
        if alphas.len() != expected {
            return Err(Error::InvalidInput(format!(
                "degree {n} needs exactly {expected} parameters, got {}",
                alphas.len()
            )));
        }
        if let Some(a) = alphas.iter().find(|a| **a <= BigRational::one()) {
            return Err(Error::InvalidInput(format!(
                "every parameter must exceed 1, got {}",
                format_rational(a)
            )));
        }
        for i in 0..alphas.len() {
            for j in i + 1..alphas.len() {
                if alphas[i] == alphas[j] {
                    return Err(Error::InvalidInput(format!(
                        "parameters must be pairwise distinct, {} repeats",
                        format_rational(&alphas[i])
                    )));
                }
            }
        }
        Ok(Self { n, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &[BigRational] {
        &self.alphas
    }

    /// Number of quadratic blocks (`m`).
    pub fn quadratic_count(&self) -> usize {
        self.n / 2
    }

    /// The linear block parameter, present only for odd degree.
    pub fn linear_alpha(&self) -> Option<&BigRational> {
        (self.n % 2 == 1).then(|| &self.alphas[self.alphas.len() - 1])
    }
}

/// Structural role of each vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    /// Vertex 0: product of strictly stable blocks.
    InteriorStable,
    /// A quadratic block degraded to `s^2 + alpha`: roots `+-i*sqrt(alpha)`.
    BoundaryImaginaryPair,
    /// A block degraded to `s^2 + alpha*s` or `s`: one root at the origin.
    BoundaryOriginRoot,
}

/// The constructed polytope: `n + 1` vertex polynomials plus per-vertex
/// structural classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePolytope {
    spec: PolytopeSpec,
    vertices: Vec<MonicPolynomial>,
    vertex_class: Vec<VertexClass>,
}

/// Predicted stability behavior of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    /// Stable at every interior point; endpoints stable or boundary.
    OpenSegmentStable,
    /// On the stability boundary for every lambda (shared origin root).
    OnBoundary,
}

/// Edge `(i, j)` with its predicted class and, for the degree <= 4
/// sub-analyses, the closed-form certificate value at the midpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePrediction {
    pub endpoints: (usize, usize),
    pub predicted: EdgeClass,
    pub certificate: Option<BigRational>,
}

impl StablePolytope {
    /// Build the polytope for either parity.
    pub fn build(spec: PolytopeSpec) -> Self {
        if spec.n % 2 == 0 {
            build_vertices_even(&spec).expect("spec validated for even degree")
        } else {
            build_vertices_odd(&spec).expect("spec validated for odd degree")
        }
    }

    pub fn spec(&self) -> &PolytopeSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[MonicPolynomial] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &MonicPolynomial {
        &self.vertices[i]
    }

    pub fn vertex_class(&self) -> &[VertexClass] {
        &self.vertex_class
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// All `C(n+1, 2)` edges with predictions: on the boundary iff both
    /// endpoint constant terms vanish, stable on the open segment otherwise.
    pub fn predict_edges(&self) -> Vec<EdgePrediction> {
        let count = self.vertices.len();
        let mut out = Vec::with_capacity(count * (count - 1) / 2);
        for i in 0..count {
            for j in i + 1..count {
                let both_zero = self.vertices[i].constant_term().is_zero()
                    && self.vertices[j].constant_term().is_zero();
                out.push(EdgePrediction {
                    endpoints: (i, j),
                    predicted: if both_zero {
                        EdgeClass::OnBoundary
                    } else {
                        EdgeClass::OpenSegmentStable
                    },
                    certificate: self.midpoint_certificate(i, j),
                });
            }
        }
        out
    }

    /// Closed-form certificate value at `lambda = 1/2` for the edges whose
    /// reduction the low-order analyses cover (degree <= 4 instances only).
    fn midpoint_certificate(&self, i: usize, j: usize) -> Option<BigRational> {
        use crate::verify::{certificate_b1b3, certificate_b2b4_cubic, certificate_c1c3};
        let half = ratio(1, 2);
        match (self.spec.n, i, j) {
            // Two imaginary-pair vertices from distinct quadratics.
            (4, 1, 3) => {
                certificate_b1b3(&self.spec.alphas[0], &self.spec.alphas[1], &half).ok()
            }
            // Two origin-root vertices from distinct quadratics.
            (4, 2, 4) => {
                certificate_b2b4_cubic(&self.spec.alphas[0], &self.spec.alphas[1], &half).ok()
            }
            // Imaginary-pair vertex against the bare-s vertex.
            (3, 1, 3) => {
                certificate_c1c3(&self.spec.alphas[0], &self.spec.alphas[1], &half).ok()
            }
            _ => None,
        }
    }

    /// Convex combination of vertices `i` and `j`; `lambda` weights `i`.
    pub fn edge_point(
        &self,
        i: usize,
        j: usize,
        lambda: &BigRational,
    ) -> Result<MonicPolynomial> {
        let count = self.vertices.len();
        if i >= j || j >= count {
            return Err(Error::InvalidInput(format!(
                "edge indices must satisfy 0 <= i < j <= {}, got ({i}, {j})",
                count - 1
            )));
        }
        MonicPolynomial::convex_combination(&self.vertices[i], &self.vertices[j], lambda)
    }

    /// The uniform-weight barycenter.
    pub fn centroid(&self) -> MonicPolynomial {
        let count = self.vertices.len();
        let w = vec![BigRational::new(1.into(), count.into()); count];
        MonicPolynomial::barycentric_point(&self.vertices, &w)
            .expect("uniform weights are a valid barycentric system")
    }

    /// Draw `count` interior points: barycentric weights uniform on the
    /// simplex via the normalized-exponential method, quantized to exact
    /// rationals and rejection-resampled until every weight is `>= epsilon`.
    /// Deterministic for a fixed seed.
    pub fn sample_interior(
        &self,
        count: usize,
        epsilon: &BigRational,
        seed: u64,
    ) -> Result<Vec<InteriorSample>> {
        if count == 0 {
            return Err(Error::InvalidInput("sample count must be >= 1".into()));
        }
        let vertex_count = self.vertices.len();
        let limit = BigRational::new(1.into(), vertex_count.into());
        if epsilon <= &BigRational::zero() || epsilon >= &limit {
            return Err(Error::InvalidInput(format!(
                "epsilon must lie in (0, 1/{vertex_count}), got {}",
                format_rational(epsilon)
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let weights = draw_simplex_weights(&mut rng, vertex_count);
            if weights.iter().any(|w| w < epsilon) {
                continue;
            }
            let point = MonicPolynomial::barycentric_point(&self.vertices, &weights)?;
            out.push(InteriorSample { weights, point });
        }
        Ok(out)
    }

    /// Rank of the n x n matrix of vertex differences `v_i - v_0`, exact.
    /// Equals `n` exactly when the polytope is full-dimensional.
    pub fn affine_independence_rank(&self) -> usize {
        let n = self.spec.n;
        let v0 = self.vertices[0].coeffs();
        let mut rows: Vec<Vec<BigRational>> = self.vertices[1..]
            .iter()
            .map(|v| {
                v.coeffs()
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        // Exact Gaussian elimination with partial pivoting.
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero())
            else {
                continue;
            };
            rows.swap(rank, pivot_row);
            let pivot = rows[rank][col].clone();
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let factor = &rows[r][col] / &pivot;
                for c in col..n {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Wire form per the polytope JSON schema.
    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            n: self.spec.n,
            alphas: self.spec.alphas.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.coeffs().to_vec())
                .collect(),
            vertex_class: self.vertex_class.clone(),
        }
    }
}

/// One interior sample: the barycentric weights that produced the point.
#[derive(Clone, Debug)]
pub struct InteriorSample {
    pub weights: Vec<BigRational>,
    pub point: MonicPolynomial,
}

/// Serialized polytope: rationals as strings, coefficients ascending.
#[derive(Serialize, Deserialize)]
pub struct PolytopeJson {
    pub n: usize,
    #[serde(with = "crate::rational::serde_vec")]
    pub alphas: Vec<BigRational>,
    #[serde(with = "crate::rational::serde_vec_vec")]
    pub vertices: Vec<Vec<BigRational>>,
    pub vertex_class: Vec<VertexClass>,
}

/// Quantization grid for simplex weights: exponential draws are rounded to
/// multiples of 1/4096 before exact normalization, keeping the rationals
/// small enough for fast exact classification downstream.
const WEIGHT_GRID: i64 = 1 << 12;

fn draw_simplex_weights<R: Rng>(rng: &mut R, count: usize) -> Vec<BigRational> {
    let mut numerators = Vec::with_capacity(count);
    let mut total: i64 = 0;
    for _ in 0..count {
        let u: f64 = rng.random();
        let e = -(1.0 - u).ln();
        let q = ((e * WEIGHT_GRID as f64).round() as i64).max(1);
        numerators.push(q);
        total += q;
    }
    numerators
        .into_iter()
        .map(|q| ratio(q, total))
        .collect()
}

/// Vertices for even degree: vertex 0 multiplies the full quadratics;
/// vertex `2k-1` degrades quadratic `k` to `s^2 + alpha_k`, vertex `2k`
/// to `s^2 + alpha_k s`.
pub fn build_vertices_even(spec: &PolytopeSpec) -> Result<StablePolytope> {
    if spec.n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "even construction needs even degree, got {}",
            spec.n
        )));
    }
    let factors: Vec<QuadraticFactor> = spec
        .alphas
        .iter()
        .map(|a| QuadraticFactor::new(a.clone()))
        .collect::<Result<_>>()?;
    let m = factors.len();
    let mut vertices = Vec::with_capacity(spec.n + 1);
    let mut vertex_class = Vec::with_capacity(spec.n + 1);
    vertices.push(product(factors.iter().map(QuadraticFactor::full)));
    vertex_class.push(VertexClass::InteriorStable);
    for k in 0..m {
        for drop_constant in [false, true] {
            let blocks = factors.iter().enumerate().map(|(idx, f)| {
                if idx != k {
                    f.full()
                } else if drop_constant {
                    f.drop_constant()
                } else {
                    f.drop_linear()
                }
            });
            vertices.push(product(blocks));
            vertex_class.push(if drop_constant {
                VertexClass::BoundaryOriginRoot
            } else {
                VertexClass::BoundaryImaginaryPair
            });
        }
    }
    Ok(StablePolytope {
        spec: spec.clone(),
        vertices,
        vertex_class,
    })
}

/// Vertices for odd degree: quadratics degrade as in the even case and the
/// final vertex replaces the linear block `s + alpha_{m+1}` by `s`.
pub fn build_vertices_odd(spec: &PolytopeSpec) -> Result<StablePolytope> {
    if spec.n % 2 != 1 {
        return Err(Error::InvalidInput(format!(
            "odd construction needs odd degree, got {}",
            spec.n
        )));
    }
    let m = spec.quadratic_count();
    let factors: Vec<QuadraticFactor> = spec.alphas[..m]
        .iter()
        .map(|a| QuadraticFactor::new(a.clone()))
        .collect::<Result<_>>()?;
    let linear = MonicPolynomial::from_coeffs(vec![spec.alphas[m].clone()])?;
    let bare_s = MonicPolynomial::from_coeffs(vec![BigRational::zero()])?;

    let mut vertices = Vec::with_capacity(spec.n + 1);
    let mut vertex_class = Vec::with_capacity(spec.n + 1);
    let full_quadratics = || factors.iter().map(QuadraticFactor::full);
    vertices.push(product(full_quadratics().chain([linear.clone()])));
    vertex_class.push(VertexClass::InteriorStable);
    for k in 0..m {
        for drop_constant in [false, true] {
            let blocks = factors
                .iter()
                .enumerate()
                .map(|(idx, f)| {
                    if idx != k {
                        f.full()
                    } else if drop_constant {
                        f.drop_constant()
                    } else {
                        f.drop_linear()
                    }
                })
                .chain([linear.clone()]);
            vertices.push(product(blocks));
            vertex_class.push(if drop_constant {
                VertexClass::BoundaryOriginRoot
            } else {
                VertexClass::BoundaryImaginaryPair
            });
        }
    }
    vertices.push(product(full_quadratics().chain([bare_s])));
    vertex_class.push(VertexClass::BoundaryOriginRoot);
    Ok(StablePolytope {
        spec: spec.clone(),
        vertices,
        vertex_class,
    })
}

fn product<I: IntoIterator<Item = MonicPolynomial>>(blocks: I) -> MonicPolynomial {
    let mut iter = blocks.into_iter();
    let first = iter.next().expect("at least one block");
    iter.fold(first, |acc, b| acc.multiply(&b))
}
