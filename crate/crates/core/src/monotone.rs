//! Maximally monotone operators exposed through resolvent oracles, plus a
//! catalog of concrete kinds: subdifferentials of common convex functions
//! and a skew-symmetric linear representative that is not a subdifferential.
//!
//! The interface is resolvent-centric: callers evaluate `(I + t M)^{-1}`,
//! never the multivalued map itself.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::scalar::Scalar;

/// Membership tolerance for indicator-style function values. Iterates sit
/// numerically on constraint boundaries, so exact membership is meaningless.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// Residual accepted when certifying that a pair lies in an operator graph.
const GRAPH_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
enum OperatorKind<F> {
    Zero {
        dim: usize,
    },
    /// `x -> (S + K) x` with `S` symmetric positive semidefinite and `K`
    /// skew-symmetric.
    Linear {
        symmetric: DenseMatrix<F>,
        skew: DenseMatrix<F>,
    },
    /// Subdifferential of `lambda * ||.||_1`.
    L1Scaled {
        dim: usize,
        lambda: F,
    },
    /// `x -> x - b`, the gradient of `0.5 * ||. - b||^2`.
    QuadraticShift {
        b: Vector<F>,
    },
    /// Normal cone of the box `[lower, upper]`; infinite bounds allowed.
    BoxNormalCone {
        lower: Vec<F>,
        upper: Vec<F>,
    },
    /// Normal cone of the probability simplex.
    SimplexNormalCone {
        dim: usize,
    },
    /// The inverse operator; its resolvent comes from the inversion identity.
    InverseOf {
        inner: Box<MonotoneMap<F>>,
    },
}

/// A maximally monotone operator with a resolvent oracle.
#[derive(Debug, Clone)]
pub struct MonotoneMap<F> {
    kind: OperatorKind<F>,
}

/// Per-coordinate view of a separable operator, consumed by the separable
/// generalized-resolvent solver.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ScalarMonotone<F> {
    Zero,
    AbsoluteValue { lambda: F },
    Shift { offset: F },
    BoxCone { lower: F, upper: F },
}

fn soft_threshold<F: Scalar>(z: F, threshold: F) -> F {
    let magnitude = (z.abs() - threshold).max(F::zero());
    magnitude * z.signum() * if z == F::zero() { F::zero() } else { F::one() }
}

fn clamp<F: Scalar>(z: F, lower: F, upper: F) -> F {
    z.max(lower).min(upper)
}

impl<F: Scalar> MonotoneMap<F> {
    /// The zero map `x -> {0}`.
    pub fn zero(dim: usize) -> Result<Self> {
        require_dim(dim)?;
        Ok(Self {
            kind: OperatorKind::Zero { dim },
        })
    }

    /// Linear monotone operator `x -> (S + K) x`. `S` must be symmetric with
    /// eigenvalues above `-1e-12` and `K` skew-symmetric within `1e-12`.
    pub fn linear(symmetric: &[Vec<F>], skew: &[Vec<F>]) -> Result<Self> {
        let s = DenseMatrix::from_rows(symmetric)?;
        let k = DenseMatrix::from_rows(skew)?;
        let n = s.rows();
        if s.cols() != n || k.rows() != n || k.cols() != n {
            return Err(Error::InvalidArgument(
                "linear operator parts must be square with matching dims".into(),
            ));
        }
        let tol = F::real(1e-12);
        for i in 0..n {
            for j in 0..n {
                if (s.at(i, j) - s.at(j, i)).abs() > tol {
                    return Err(Error::InvalidArgument(
                        "symmetric part fails the symmetry check".into(),
                    ));
                }
                if (k.at(i, j) + k.at(j, i)).abs() > tol {
                    return Err(Error::InvalidArgument(
                        "skew part fails the antisymmetry check".into(),
                    ));
                }
            }
        }
        if !s.cholesky_feasible(tol * num_traits::NumCast::from(n).unwrap_or(F::one()) + tol) {
            return Err(Error::InvalidArgument(
                "symmetric part must be positive semidefinite".into(),
            ));
        }
        Ok(Self {
            kind: OperatorKind::Linear {
                symmetric: s,
                skew: k,
            },
        })
    }

    /// Subdifferential of `lambda * ||.||_1`, `lambda >= 0`.
    pub fn l1_scaled(dim: usize, lambda: F) -> Result<Self> {
        require_dim(dim)?;
        if !(lambda >= F::zero()) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(
                "l1 scale must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            kind: OperatorKind::L1Scaled { dim, lambda },
        })
    }

    /// `x -> x - b`, the gradient of `0.5 * ||x - b||^2`.
    pub fn quadratic_shift(b: Vector<F>) -> Self {
        Self {
            kind: OperatorKind::QuadraticShift { b },
        }
    }

    /// Normal cone of a coordinate box; `-inf`/`+inf` bounds are allowed,
    /// NaN is not, and `lower <= upper` componentwise.
    pub fn box_normal_cone(lower: Vec<F>, upper: Vec<F>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument(
                "box bounds must be non-empty and of equal length".into(),
            ));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if l.is_nan() || u.is_nan() {
                return Err(Error::NonFinite("box bound"));
            }
            if l > u {
                return Err(Error::InvalidArgument(
                    "box lower bound exceeds upper bound".into(),
                ));
            }
        }
        Ok(Self {
            kind: OperatorKind::BoxNormalCone { lower, upper },
        })
    }

    /// Normal cone of the probability simplex `{x >= 0, sum x = 1}`.
    pub fn simplex_normal_cone(dim: usize) -> Result<Self> {
        require_dim(dim)?;
        Ok(Self {
            kind: OperatorKind::SimplexNormalCone { dim },
        })
    }

    /// The inverse operator `M^{-1}`. The zero map is rejected: its inverse
    /// has empty values away from the origin.
    pub fn inverse_of(inner: MonotoneMap<F>) -> Result<Self> {
        if matches!(inner.kind, OperatorKind::Zero { .. }) {
            return Err(Error::UnsupportedCapability {
                operation: "inverse_of",
                detail: "the zero map has empty inverse images off the origin".into(),
            });
        }
        Ok(Self {
            kind: OperatorKind::InverseOf {
                inner: Box::new(inner),
            },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            OperatorKind::Zero { dim } => *dim,
            OperatorKind::Linear { symmetric, .. } => symmetric.rows(),
            OperatorKind::L1Scaled { dim, .. } => *dim,
            OperatorKind::QuadraticShift { b } => b.dim(),
            OperatorKind::BoxNormalCone { lower, .. } => lower.len(),
            OperatorKind::SimplexNormalCone { dim } => *dim,
            OperatorKind::InverseOf { inner } => inner.dim(),
        }
    }

    /// Whether per-weight (diagonal) resolvents are available.
    pub fn has_diagonal_resolvent(&self) -> bool {
        matches!(
            self.kind,
            OperatorKind::Zero { .. }
                | OperatorKind::Linear { .. }
                | OperatorKind::L1Scaled { .. }
                | OperatorKind::QuadraticShift { .. }
                | OperatorKind::BoxNormalCone { .. }
        )
    }

    /// Whether the operator is a subdifferential with a normalized
    /// function value.
    pub fn has_function_value(&self) -> bool {
        matches!(
            self.kind,
            OperatorKind::Zero { .. }
                | OperatorKind::L1Scaled { .. }
                | OperatorKind::QuadraticShift { .. }
                | OperatorKind::BoxNormalCone { .. }
                | OperatorKind::SimplexNormalCone { .. }
        )
    }

    /// Whether the operator acts coordinate by coordinate.
    pub fn is_separable(&self) -> bool {
        matches!(
            self.kind,
            OperatorKind::Zero { .. }
                | OperatorKind::L1Scaled { .. }
                | OperatorKind::QuadraticShift { .. }
                | OperatorKind::BoxNormalCone { .. }
        )
    }

    pub(crate) fn coordinate_operator(&self, i: usize) -> Option<ScalarMonotone<F>> {
        match &self.kind {
            OperatorKind::Zero { .. } => Some(ScalarMonotone::Zero),
            OperatorKind::L1Scaled { lambda, .. } => {
                Some(ScalarMonotone::AbsoluteValue { lambda: *lambda })
            }
            OperatorKind::QuadraticShift { b } => Some(ScalarMonotone::Shift { offset: b[i] }),
            OperatorKind::BoxNormalCone { lower, upper } => Some(ScalarMonotone::BoxCone {
                lower: lower[i],
                upper: upper[i],
            }),
            _ => None,
        }
    }

    /// Resolvent `J_{tM}(z) = (I + t M)^{-1} z` for `t > 0`.
    pub fn resolvent(&self, t: F, z: &Vector<F>) -> Result<Vector<F>> {
        if !(t > F::zero()) || !t.is_finite() {
            return Err(Error::InvalidArgument(
                "resolvent step must be positive and finite".into(),
            ));
        }
        self.check_dim(z, "resolvent")?;
        let out = match &self.kind {
            OperatorKind::Zero { .. } => z.clone(),
            OperatorKind::Linear { symmetric, skew } => {
                let n = symmetric.rows();
                let system = DenseMatrix::identity(n).add(&symmetric.add(skew).scale(t));
                Vector::from_coords_unchecked(system.lu_solve(z.as_slice())?)
            }
            OperatorKind::L1Scaled { lambda, .. } => {
                let threshold = t * *lambda;
                Vector::from_coords_unchecked(
                    z.iter().map(|&v| soft_threshold(v, threshold)).collect(),
                )
            }
            OperatorKind::QuadraticShift { b } => {
                // x + t(x - b) = z  =>  x = (z + t b) / (1 + t)
                let denom = F::one() + t;
                Vector::from_coords_unchecked(
                    z.iter()
                        .zip(b.iter())
                        .map(|(&zi, &bi)| (zi + t * bi) / denom)
                        .collect(),
                )
            }
            OperatorKind::BoxNormalCone { lower, upper } => {
                // Projection onto the box, independent of t.
                Vector::from_coords_unchecked(
                    z.iter()
                        .enumerate()
                        .map(|(i, &zi)| clamp(zi, lower[i], upper[i]))
                        .collect(),
                )
            }
            OperatorKind::SimplexNormalCone { .. } => project_simplex(z)?,
            OperatorKind::InverseOf { inner } => {
                // J_{t M^{-1}}(z) = z - t J_{M/t}(z/t)
                let t_inv = t.recip();
                let shrunk = inner.resolvent(t_inv, &z.scaled(t_inv))?;
                z.minus(&shrunk.scaled(t))
            }
        };
        if !out.is_finite() {
            return Err(Error::NonFinite("resolvent"));
        }
        Ok(out)
    }

    /// Resolvent of the inverse operator, `(I + s M^{-1})^{-1} z`, computed
    /// through the inversion identity `z - s * J_{M/s}(z/s)`. Rejected for
    /// the zero map, whose inverse has empty values off the origin.
    pub fn inverse_resolvent(&self, s: F, z: &Vector<F>) -> Result<Vector<F>> {
        if !(s > F::zero()) || !s.is_finite() {
            return Err(Error::InvalidArgument(
                "inverse resolvent step must be positive and finite".into(),
            ));
        }
        if matches!(self.kind, OperatorKind::Zero { .. }) {
            return Err(Error::UnsupportedCapability {
                operation: "inverse_resolvent",
                detail: "the zero map has empty inverse images off the origin".into(),
            });
        }
        self.check_dim(z, "inverse_resolvent")?;
        let s_inv = s.recip();
        let shrunk = self.resolvent(s_inv, &z.scaled(s_inv))?;
        let out = z.minus(&shrunk.scaled(s));
        if !out.is_finite() {
            return Err(Error::NonFinite("inverse_resolvent"));
        }
        Ok(out)
    }

    /// Weighted resolvent: solves `W x + M x` containing `W z` with
    /// `W = diag(w)`, `w > 0` componentwise.
    pub fn diagonal_resolvent(&self, weights: &Vector<F>, z: &Vector<F>) -> Result<Vector<F>> {
        if !self.has_diagonal_resolvent() {
            return Err(Error::UnsupportedCapability {
                operation: "diagonal_resolvent",
                detail: format!("operator kind {} has no diagonal resolvent", self.kind_name()),
            });
        }
        self.check_dim(z, "diagonal_resolvent")?;
        if weights.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "diagonal_resolvent weights",
                expected: self.dim(),
                actual: weights.dim(),
            });
        }
        if weights.iter().any(|&w| !(w > F::zero())) {
            return Err(Error::InvalidArgument(
                "diagonal resolvent weights must be strictly positive".into(),
            ));
        }
        let out = match &self.kind {
            OperatorKind::Zero { .. } => z.clone(),
            OperatorKind::Linear { symmetric, skew } => {
                let n = symmetric.rows();
                let mut system = symmetric.add(skew);
                for i in 0..n {
                    system.set(i, i, system.at(i, i) + weights[i]);
                }
                let rhs: Vec<F> = z
                    .iter()
                    .zip(weights.iter())
                    .map(|(&zi, &wi)| wi * zi)
                    .collect();
                Vector::from_coords_unchecked(system.lu_solve(&rhs)?)
            }
            OperatorKind::L1Scaled { lambda, .. } => Vector::from_coords_unchecked(
                z.iter()
                    .zip(weights.iter())
                    .map(|(&zi, &wi)| soft_threshold(zi, *lambda / wi))
                    .collect(),
            ),
            OperatorKind::QuadraticShift { b } => Vector::from_coords_unchecked(
                z.iter()
                    .zip(weights.iter())
                    .zip(b.iter())
                    .map(|((&zi, &wi), &bi)| (wi * zi + bi) / (wi + F::one()))
                    .collect(),
            ),
            OperatorKind::BoxNormalCone { lower, upper } => Vector::from_coords_unchecked(
                z.iter()
                    .enumerate()
                    .map(|(i, &zi)| clamp(zi, lower[i], upper[i]))
                    .collect(),
            ),
            _ => unreachable!("capability checked above"),
        };
        if !out.is_finite() {
            return Err(Error::NonFinite("diagonal_resolvent"));
        }
        Ok(out)
    }

    /// The convex function whose subdifferential this operator is, with the
    /// fixed normalization: `l1_scaled(lambda) -> lambda * ||.||_1`,
    /// `quadratic_shift(b) -> 0.5 * ||. - b||^2`, indicators `-> 0 / +inf`
    /// (membership tolerance `1e-9`), zero map `-> 0`.
    pub fn function_value(&self, x: &Vector<F>) -> Result<F> {
        if !self.has_function_value() {
            return Err(Error::UnsupportedCapability {
                operation: "function_value",
                detail: format!("operator kind {} is not a subdifferential", self.kind_name()),
            });
        }
        self.check_dim(x, "function_value")?;
        let tol = F::real(MEMBERSHIP_TOL);
        Ok(match &self.kind {
            OperatorKind::Zero { .. } => F::zero(),
            OperatorKind::L1Scaled { lambda, .. } => {
                *lambda * x.iter().fold(F::zero(), |acc, &v| acc + v.abs())
            }
            OperatorKind::QuadraticShift { b } => {
                let d = x.minus(b);
                F::real(0.5) * d.norm_sq()
            }
            OperatorKind::BoxNormalCone { lower, upper } => {
                let inside = x
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| v >= lower[i] - tol && v <= upper[i] + tol);
                if inside {
                    F::zero()
                } else {
                    F::infinity()
                }
            }
            OperatorKind::SimplexNormalCone { .. } => {
                if simplex_membership(x, tol) {
                    F::zero()
                } else {
                    F::infinity()
                }
            }
            _ => unreachable!("capability checked above"),
        })
    }

    /// One element of `M x`, when a canonical selection exists (used to
    /// assemble gap witnesses). `None` when `x` is outside the domain or the
    /// kind has no computable selection.
    pub fn witness_image(&self, x: &Vector<F>) -> Option<Vector<F>> {
        if x.dim() != self.dim() {
            return None;
        }
        let tol = F::real(MEMBERSHIP_TOL);
        match &self.kind {
            OperatorKind::Zero { dim } => Some(Vector::zeros(*dim)),
            OperatorKind::Linear { symmetric, skew } => Some(Vector::from_coords_unchecked(
                symmetric.add(skew).matvec(x.as_slice()),
            )),
            OperatorKind::L1Scaled { lambda, .. } => Some(Vector::from_coords_unchecked(
                x.iter()
                    .map(|&v| {
                        if v == F::zero() {
                            F::zero()
                        } else {
                            *lambda * v.signum()
                        }
                    })
                    .collect(),
            )),
            OperatorKind::QuadraticShift { b } => Some(x.minus(b)),
            OperatorKind::BoxNormalCone { lower, upper } => {
                let inside = x
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| v >= lower[i] - tol && v <= upper[i] + tol);
                inside.then(|| Vector::zeros(x.dim()))
            }
            OperatorKind::SimplexNormalCone { .. } => {
                simplex_membership(x, tol).then(|| Vector::zeros(x.dim()))
            }
            OperatorKind::InverseOf { .. } => None,
        }
    }

    fn kind_name(&self) -> &'static str {
        match &self.kind {
            OperatorKind::Zero { .. } => "zero",
            OperatorKind::Linear { .. } => "linear",
            OperatorKind::L1Scaled { .. } => "l1_scaled",
            OperatorKind::QuadraticShift { .. } => "quadratic_shift",
            OperatorKind::BoxNormalCone { .. } => "box_normal_cone",
            OperatorKind::SimplexNormalCone { .. } => "simplex_normal_cone",
            OperatorKind::InverseOf { .. } => "inverse_of",
        }
    }

    fn check_dim(&self, z: &Vector<F>, context: &'static str) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim(),
                actual: z.dim(),
            });
        }
        Ok(())
    }
}

fn require_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "operator dimension must be >= 1".into(),
        ));
    }
    Ok(())
}

pub(crate) fn simplex_membership<F: Scalar>(x: &Vector<F>, tol: F) -> bool {
    let sum = x.iter().fold(F::zero(), |acc, &v| acc + v);
    (sum - F::one()).abs() <= tol && x.iter().all(|&v| v >= -tol)
}

/// Euclidean projection onto the probability simplex `{x >= 0, sum x = 1}`.
pub fn project_simplex<F: Scalar>(z: &Vector<F>) -> Result<Vector<F>> {
    let n = z.dim();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "simplex projection needs dimension >= 1".into(),
        ));
    }
    let mut sorted: Vec<F> = z.as_slice().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite coordinates"));
    let mut cumulative = F::zero();
    let mut theta = F::zero();
    let mut support = 0usize;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative = cumulative + u;
        let count = F::from_usize(j + 1).expect("small usize fits scalar");
        let candidate = (cumulative - F::one()) / count;
        if u - candidate > F::zero() {
            theta = candidate;
            support = j + 1;
        }
    }
    debug_assert!(support >= 1);
    Ok(Vector::from_coords_unchecked(
        z.iter().map(|&v| (v - theta).max(F::zero())).collect(),
    ))
}

/// A validated element `(point, image)` of an operator graph. The pair is
/// accepted when the resolvent characterization `point = J_1(point + image)`
/// holds with residual at most `1e-8`.
#[derive(Debug, Clone)]
pub struct GraphPoint<F> {
    point: Vector<F>,
    image: Vector<F>,
}

impl<F: Scalar> GraphPoint<F> {
    pub fn new(operator: &MonotoneMap<F>, point: Vector<F>, image: Vector<F>) -> Result<Self> {
        if point.dim() != operator.dim() || image.dim() != operator.dim() {
            return Err(Error::DimensionMismatch {
                context: "graph point",
                expected: operator.dim(),
                actual: point.dim().max(image.dim()),
            });
        }
        let reproduced = operator.resolvent(F::one(), &point.plus(&image))?;
        let residual = reproduced.minus(&point).norm();
        if residual > F::real(GRAPH_RESIDUAL_TOL) {
            return Err(Error::InvalidArgument(format!(
                "pair is not in the operator graph (residual {:e})",
                residual.lossy_f64()
            )));
        }
        Ok(Self { point, image })
    }

    pub fn point(&self) -> &Vector<F> {
        &self.point
    }

    pub fn image(&self) -> &Vector<F> {
        &self.image
    }
}
