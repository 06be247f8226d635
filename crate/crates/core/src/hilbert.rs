//! Finite-dimensional realization of the primal and dual spaces: vectors,
//! inner products, and linear coupling operators with adjoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite-dimensional real vector. The dimension is fixed at construction
/// and every public constructor rejects NaN and infinite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<F> {
    coords: Vec<F>,
}

impl<F: Scalar> Vector<F> {
    /// Builds a vector, rejecting empty and non-finite input.
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "vector must have at least one coordinate".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("vector construction"));
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![F::zero(); dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> F) -> Self {
        Self {
            coords: (0..dim).map(f).collect(),
        }
    }

    /// Constant vector with every coordinate equal to `value`.
    pub fn constant(dim: usize, value: F) -> Self {
        Self {
            coords: vec![value; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.coords.iter()
    }

    pub fn into_coords(self) -> Vec<F> {
        self.coords
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn norm_sq(&self) -> F {
        self.coords.iter().fold(F::zero(), |acc, &c| acc + c * c)
    }

    pub fn norm(&self) -> F {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> F {
        self.coords
            .iter()
            .fold(F::zero(), |acc, &c| acc.max(c.abs()))
    }

    /// Dot product without a dimension check; callers validate dims first.
    pub(crate) fn dot(&self, other: &Self) -> F {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(F::zero(), |acc, (&a, &b)| acc + a * b)
    }

    /// Coordinate-wise sum. Panics on dimension mismatch; public entry
    /// points validate dimensions before arithmetic.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector sum dimension mismatch");
        Self::from_coords_unchecked(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "vector difference dimension mismatch"
        );
        Self::from_coords_unchecked(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, factor: F) -> Self {
        Self::from_coords_unchecked(self.coords.iter().map(|&a| a * factor).collect())
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: F, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        Self::from_coords_unchecked(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a + factor * b)
                .collect(),
        )
    }
}

impl<F: Scalar> std::ops::Index<usize> for Vector<F> {
    type Output = F;

    fn index(&self, index: usize) -> &F {
        &self.coords[index]
    }
}

/// Inner product `sum_i a_i b_i`.
pub fn inner<F: Scalar>(a: &Vector<F>, b: &Vector<F>) -> Result<F> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "inner product",
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.dot(b))
}

#[derive(Debug, Clone)]
enum MapKind<F> {
    Dense(DenseMatrix<F>),
    Diagonal(Vector<F>),
    /// First-order forward difference with zero Dirichlet padding:
    /// `(Dx)_i = x_{i+1} - x_i` for `i < n-1` and `(Dx)_{n-1} = -x_{n-1}`.
    ForwardDifference {
        dim: usize,
    },
    /// `outer . inner` (apply `inner` first).
    Composition {
        outer: Box<LinearMap<F>>,
        inner: Box<LinearMap<F>>,
    },
    Scaled {
        factor: F,
        map: Box<LinearMap<F>>,
    },
}

/// A bounded linear operator between coordinate spaces, with forward and
/// adjoint application.
#[derive(Debug, Clone)]
pub struct LinearMap<F> {
    kind: MapKind<F>,
}

impl<F: Scalar> LinearMap<F> {
    /// Dense matrix given as rows.
    pub fn dense(rows: &[Vec<F>]) -> Result<Self> {
        Ok(Self {
            kind: MapKind::Dense(DenseMatrix::from_rows(rows)?),
        })
    }

    /// Diagonal (square) operator.
    pub fn diagonal(entries: Vector<F>) -> Self {
        Self {
            kind: MapKind::Diagonal(entries),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(Vector::constant(dim, F::one()))
    }

    /// 1-D forward difference with zero boundary, an `n -> n` square map.
    pub fn forward_difference(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "forward difference needs dimension >= 1".into(),
            ));
        }
        Ok(Self {
            kind: MapKind::ForwardDifference { dim },
        })
    }

    /// `outer . inner`: the output dimension of `inner` must equal the
    /// input dimension of `outer`.
    pub fn compose(outer: LinearMap<F>, inner: LinearMap<F>) -> Result<Self> {
        if inner.output_dim() != outer.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "linear map composition",
                expected: outer.input_dim(),
                actual: inner.output_dim(),
            });
        }
        Ok(Self {
            kind: MapKind::Composition {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        })
    }

    pub fn scaled(factor: F, map: LinearMap<F>) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::NonFinite("scalar multiple of a linear map"));
        }
        Ok(Self {
            kind: MapKind::Scaled {
                factor,
                map: Box::new(map),
            },
        })
    }

    pub fn input_dim(&self) -> usize {
        match &self.kind {
            MapKind::Dense(m) => m.cols(),
            MapKind::Diagonal(d) => d.dim(),
            MapKind::ForwardDifference { dim } => *dim,
            MapKind::Composition { inner, .. } => inner.input_dim(),
            MapKind::Scaled { map, .. } => map.input_dim(),
        }
    }

    pub fn output_dim(&self) -> usize {
        match &self.kind {
            MapKind::Dense(m) => m.rows(),
            MapKind::Diagonal(d) => d.dim(),
            MapKind::ForwardDifference { dim } => *dim,
            MapKind::Composition { outer, .. } => outer.output_dim(),
            MapKind::Scaled { map, .. } => map.output_dim(),
        }
    }

    /// `(input dimension, output dimension)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.input_dim(), self.output_dim())
    }

    /// Applies the operator: `L x`.
    pub fn apply(&self, x: &Vector<F>) -> Result<Vector<F>> {
        if x.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "linear map apply",
                expected: self.input_dim(),
                actual: x.dim(),
            });
        }
        let out = self.apply_unchecked(x);
        if !out.is_finite() {
            return Err(Error::NonFinite("linear map apply"));
        }
        Ok(out)
    }

    /// Applies the adjoint: `L* y`.
    pub fn adjoint_apply(&self, y: &Vector<F>) -> Result<Vector<F>> {
        if y.dim() != self.output_dim() {
            return Err(Error::DimensionMismatch {
                context: "linear map adjoint apply",
                expected: self.output_dim(),
                actual: y.dim(),
            });
        }
        let out = self.adjoint_apply_unchecked(y);
        if !out.is_finite() {
            return Err(Error::NonFinite("linear map adjoint apply"));
        }
        Ok(out)
    }

    pub(crate) fn apply_unchecked(&self, x: &Vector<F>) -> Vector<F> {
        match &self.kind {
            MapKind::Dense(m) => Vector::from_coords_unchecked(m.matvec(x.as_slice())),
            MapKind::Diagonal(d) => Vector::from_coords_unchecked(
                d.iter().zip(x.iter()).map(|(&di, &xi)| di * xi).collect(),
            ),
            MapKind::ForwardDifference { dim } => {
                let n = *dim;
                let mut out = Vec::with_capacity(n);
                for i in 0..n - 1 {
                    out.push(x[i + 1] - x[i]);
                }
                out.push(-x[n - 1]);
                Vector::from_coords_unchecked(out)
            }
            MapKind::Composition { outer, inner } => {
                outer.apply_unchecked(&inner.apply_unchecked(x))
            }
            MapKind::Scaled { factor, map } => map.apply_unchecked(x).scaled(*factor),
        }
    }

    pub(crate) fn adjoint_apply_unchecked(&self, y: &Vector<F>) -> Vector<F> {
        match &self.kind {
            MapKind::Dense(m) => Vector::from_coords_unchecked(m.matvec_transpose(y.as_slice())),
            MapKind::Diagonal(d) => Vector::from_coords_unchecked(
                d.iter().zip(y.iter()).map(|(&di, &yi)| di * yi).collect(),
            ),
            MapKind::ForwardDifference { dim } => {
                // Transpose of the zero-boundary stencil: (D*y)_j = y_{j-1} - y_j.
                let n = *dim;
                let mut out = Vec::with_capacity(n);
                out.push(-y[0]);
                for j in 1..n {
                    out.push(y[j - 1] - y[j]);
                }
                Vector::from_coords_unchecked(out)
            }
            MapKind::Composition { outer, inner } => {
                inner.adjoint_apply_unchecked(&outer.adjoint_apply_unchecked(y))
            }
            MapKind::Scaled { factor, map } => map.adjoint_apply_unchecked(y).scaled(*factor),
        }
    }

    /// Materializes the operator as explicit rows (column images of basis
    /// vectors); used by reference-solution solves on desk-scale problems.
    pub fn to_dense_rows(&self) -> Vec<Vec<F>> {
        let (n, m) = self.dims();
        let mut rows = vec![vec![F::zero(); n]; m];
        for j in 0..n {
            let e = Vector::from_fn(n, |i| if i == j { F::one() } else { F::zero() });
            let col = self.apply_unchecked(&e);
            for i in 0..m {
                rows[i][j] = col[i];
            }
        }
        rows
    }

    /// Estimates the operator norm (largest singular value) by power
    /// iteration on `L* L` from a seeded random start. Deterministic for a
    /// fixed seed. Stops when successive Rayleigh estimates differ by at
    /// most `tol * (1 + estimate)`.
    pub fn operator_norm_estimate(&self, tol: F, max_iter: usize, seed: u64) -> Result<F> {
        if tol <= F::zero() {
            return Err(Error::InvalidArgument(
                "norm estimation tolerance must be positive".into(),
            ));
        }
        if max_iter == 0 {
            return Err(Error::InvalidArgument(
                "norm estimation needs max_iter >= 1".into(),
            ));
        }
        let n = self.input_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Vector::from_fn(n, |_| F::real(rng.random_range(-1.0..1.0)));
        let nb = b.norm();
        if nb == F::zero() {
            b = Vector::constant(n, F::one());
        }
        let mut b = b.scaled(b.norm().recip());
        let mut prev = F::zero();
        let mut sigma = F::zero();
        for k in 1..=max_iter {
            let image = self.apply_unchecked(&b);
            let gram = self.adjoint_apply_unchecked(&image);
            let rayleigh = b.dot(&gram);
            sigma = rayleigh.max(F::zero()).sqrt();
            if !sigma.is_finite() {
                return Err(Error::NonFinite("operator norm estimate"));
            }
            let gram_norm = gram.norm();
            if gram_norm == F::zero() {
                // b is (numerically) in the kernel of L*L; with a random
                // start this identifies the zero operator.
                return Ok(F::zero());
            }
            if k > 1 && (sigma - prev).abs() <= tol * (F::one() + sigma) {
                return Ok(sigma);
            }
            prev = sigma;
            b = gram.scaled(gram_norm.recip());
        }
        Err(Error::NotConverged {
            what: "operator norm estimate",
            iterations: max_iter,
            last: sigma.lossy_f64(),
        })
    }
}
