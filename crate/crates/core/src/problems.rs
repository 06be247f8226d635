//! Catalog of primal-dual inclusion instances `0 in A x + C*(B(C x))` with
//! reference-solution oracles and KKT residual checks.
//!
//! The entries cover the regimes the splitting handles: smooth strongly
//! monotone (`toy-quadratic`), nonsmooth sparse (`lasso`), composite with a
//! structured coupling (`tv-denoise-1d`), pure normal-cone bilinear saddle
//! (`matrix-game`), and a non-subdifferential monotone map
//! (`skew-inclusion`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{LinearMap, Vector};
use crate::monotone::{simplex_membership, MonotoneMap};
use crate::scalar::Scalar;

/// KKT residual accepted for any shipped reference solution.
const REFERENCE_KKT_TOL: f64 = 1e-8;

/// Fixed-point residual target for the iterative oracles.
const ORACLE_RESIDUAL_TOL: f64 = 1e-12;

const ORACLE_ITERATION_CAP: usize = 2_000_000;

/// Catalog identifiers, as accepted by front ends.
pub const CATALOG_NAMES: [&str; 5] = [
    "toy-quadratic",
    "lasso",
    "tv-denoise-1d",
    "matrix-game",
    "skew-inclusion",
];

/// A reference saddle solution together with how it was obtained.
#[derive(Debug, Clone)]
pub struct Reference<F> {
    pub x: Vector<F>,
    pub y: Vector<F>,
    pub provenance: &'static str,
}

/// Objective evaluators for function-valued entries: the primal pair
/// `(f1, f2)` and the conjugates used by the dual value. Normalizations are
/// fixed per entry so gaps are reproducible.
#[derive(Debug, Clone)]
pub enum FunctionValues<F> {
    /// `f1 = 0.5 ||. - a||^2`, `f2 = 0.5 ||. - b||^2`.
    ToyQuadratic { a: Vector<F>, b: Vector<F> },
    /// `f1 = lambda ||.||_1`, `f2 = 0.5 ||. - b||^2`.
    Lasso { lambda: F, b: Vector<F> },
    /// `f1 = 0.5 ||. - b||^2`, `f2 = lambda ||.||_1`.
    TvDenoise { lambda: F, b: Vector<F> },
    /// `f1 = indicator(simplex)`, `f2 = max_i`.
    MatrixGame,
}

impl<F: Scalar> FunctionValues<F> {
    const INDICATOR_TOL: f64 = 1e-9;

    pub fn f1(&self, x: &Vector<F>) -> F {
        match self {
            Self::ToyQuadratic { a, .. } => F::real(0.5) * x.minus(a).norm_sq(),
            Self::Lasso { lambda, .. } => {
                *lambda * x.iter().fold(F::zero(), |acc, &v| acc + v.abs())
            }
            Self::TvDenoise { b, .. } => F::real(0.5) * x.minus(b).norm_sq(),
            Self::MatrixGame => indicator(simplex_membership(x, F::real(Self::INDICATOR_TOL))),
        }
    }

    pub fn f2(&self, z: &Vector<F>) -> F {
        match self {
            Self::ToyQuadratic { b, .. } | Self::Lasso { b, .. } => {
                F::real(0.5) * z.minus(b).norm_sq()
            }
            Self::TvDenoise { lambda, .. } => {
                *lambda * z.iter().fold(F::zero(), |acc, &v| acc + v.abs())
            }
            Self::MatrixGame => z.iter().fold(F::neg_infinity(), |acc, &v| acc.max(v)),
        }
    }

    pub fn f1_conjugate(&self, w: &Vector<F>) -> F {
        match self {
            // (0.5 ||. - a||^2)* = 0.5 ||w||^2 + <w, a>
            Self::ToyQuadratic { a, .. } => F::real(0.5) * w.norm_sq() + w.dot(a),
            // (lambda ||.||_1)* = indicator(||w||_inf <= lambda)
            Self::Lasso { lambda, .. } => indicator(
                w.norm_inf() <= *lambda + F::real(Self::INDICATOR_TOL),
            ),
            Self::TvDenoise { b, .. } => F::real(0.5) * w.norm_sq() + w.dot(b),
            // indicator(simplex)* = max_i
            Self::MatrixGame => w.iter().fold(F::neg_infinity(), |acc, &v| acc.max(v)),
        }
    }

    pub fn f2_conjugate(&self, eta: &Vector<F>) -> F {
        match self {
            Self::ToyQuadratic { b, .. } | Self::Lasso { b, .. } => {
                F::real(0.5) * eta.norm_sq() + eta.dot(b)
            }
            Self::TvDenoise { lambda, .. } => indicator(
                eta.norm_inf() <= *lambda + F::real(Self::INDICATOR_TOL),
            ),
            Self::MatrixGame => {
                indicator(simplex_membership(eta, F::real(Self::INDICATOR_TOL)))
            }
        }
    }
}

fn indicator<F: Scalar>(inside: bool) -> F {
    if inside {
        F::zero()
    } else {
        F::infinity()
    }
}

/// A primal-dual monotone inclusion instance: `A` on the primal space,
/// `Binv` (the inverse of `B`) on the dual space, and the coupling `C`.
#[derive(Debug, Clone)]
pub struct ProblemInstance<F> {
    name: &'static str,
    a: MonotoneMap<F>,
    binv: MonotoneMap<F>,
    c: LinearMap<F>,
    functions: Option<FunctionValues<F>>,
    reference: Option<Reference<F>>,
}

impl<F: Scalar> ProblemInstance<F> {
    fn assemble(
        name: &'static str,
        a: MonotoneMap<F>,
        binv: MonotoneMap<F>,
        c: LinearMap<F>,
        functions: Option<FunctionValues<F>>,
        reference: Option<Reference<F>>,
    ) -> Result<Self> {
        if a.dim() != c.input_dim() {
            return Err(Error::DimensionMismatch {
                context: "problem primal operator",
                expected: c.input_dim(),
                actual: a.dim(),
            });
        }
        if binv.dim() != c.output_dim() {
            return Err(Error::DimensionMismatch {
                context: "problem dual operator",
                expected: c.output_dim(),
                actual: binv.dim(),
            });
        }
        let instance = Self {
            name,
            a,
            binv,
            c,
            functions,
            reference,
        };
        if let Some(reference) = &instance.reference {
            let residual = instance.kkt_residual(&reference.x, &reference.y)?;
            if residual > F::real(REFERENCE_KKT_TOL) {
                return Err(Error::Internal(format!(
                    "{name} reference fails its KKT check (residual {:e})",
                    residual.lossy_f64()
                )));
            }
        }
        Ok(instance)
    }

    /// Builds an instance outside the catalog from its operator triple.
    pub fn from_parts(
        a: MonotoneMap<F>,
        binv: MonotoneMap<F>,
        c: LinearMap<F>,
    ) -> Result<Self> {
        Self::assemble("custom", a, binv, c, None, None)
    }

    /// Attaches a reference solution; it must pass the KKT check.
    pub fn with_reference(
        mut self,
        x: Vector<F>,
        y: Vector<F>,
        provenance: &'static str,
    ) -> Result<Self> {
        let residual = self.kkt_residual(&x, &y)?;
        if residual > F::real(REFERENCE_KKT_TOL) {
            return Err(Error::InvalidArgument(format!(
                "supplied reference fails the KKT check (residual {:e})",
                residual.lossy_f64()
            )));
        }
        self.reference = Some(Reference { x, y, provenance });
        Ok(self)
    }

    /// Attaches objective evaluators.
    pub fn with_functions(mut self, functions: FunctionValues<F>) -> Self {
        self.functions = Some(functions);
        self
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn a(&self) -> &MonotoneMap<F> {
        &self.a
    }

    pub fn binv(&self) -> &MonotoneMap<F> {
        &self.binv
    }

    pub fn c(&self) -> &LinearMap<F> {
        &self.c
    }

    pub fn functions(&self) -> Option<&FunctionValues<F>> {
        self.functions.as_ref()
    }

    pub fn reference(&self) -> Option<&Reference<F>> {
        self.reference.as_ref()
    }

    pub fn primal_dim(&self) -> usize {
        self.c.input_dim()
    }

    pub fn dual_dim(&self) -> usize {
        self.c.output_dim()
    }

    /// The entry's reference solution `(x*, y*)`.
    pub fn reference_solution(&self) -> Result<(Vector<F>, Vector<F>)> {
        self.reference
            .as_ref()
            .map(|r| (r.x.clone(), r.y.clone()))
            .ok_or_else(|| Error::UnsupportedCapability {
                operation: "reference_solution",
                detail: format!("no oracle is shipped for this {} instance", self.name),
            })
    }

    /// Inclusion residual `||x - J_A(x - C* y)|| + ||y - J_Binv(y + C x)||`
    /// with unit resolvent steps; zero exactly at solutions.
    pub fn kkt_residual(&self, x: &Vector<F>, y: &Vector<F>) -> Result<F> {
        let cty = self.c.adjoint_apply(y)?;
        let primal = x.minus(&self.a.resolvent(F::one(), &x.minus(&cty))?).norm();
        let cx = self.c.apply(x)?;
        let dual = y
            .minus(&self.binv.resolvent(F::one(), &y.plus(&cx))?)
            .norm();
        Ok(primal + dual)
    }
}

/// `f1 = 0.5 ||. - a||^2`, `f2 = 0.5 ||. - b||^2` coupled by `c`; the
/// reference comes from the normal equations `(I + C^T C) x = a + C^T b`.
pub fn toy_quadratic<F: Scalar>(
    a: Vector<F>,
    b: Vector<F>,
    c: LinearMap<F>,
) -> Result<ProblemInstance<F>> {
    let (n, m) = c.dims();
    if a.dim() != n || b.dim() != m {
        return Err(Error::DimensionMismatch {
            context: "toy-quadratic data",
            expected: n,
            actual: a.dim(),
        });
    }
    let c_rows = DenseMatrix::from_rows(&c.to_dense_rows())?;
    let mut normal = DenseMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = normal.at(i, j);
            for k in 0..m {
                acc = acc + c_rows.at(k, i) * c_rows.at(k, j);
            }
            normal.set(i, j, acc);
        }
    }
    let rhs: Vec<F> = a
        .plus(&Vector::from_coords_unchecked(
            c_rows.matvec_transpose(b.as_slice()),
        ))
        .into_coords();
    let x_star = Vector::new(normal.lu_solve(&rhs)?)?;
    let y_star = c.apply(&x_star)?.minus(&b);

    let operator_a = MonotoneMap::quadratic_shift(a.clone());
    // B = grad of 0.5||.-b||^2, so B^{-1} y = y + b.
    let binv = MonotoneMap::quadratic_shift(b.scaled(-F::one()));
    ProblemInstance::assemble(
        "toy-quadratic",
        operator_a,
        binv,
        c,
        Some(FunctionValues::ToyQuadratic { a, b }),
        Some(Reference {
            x: x_star,
            y: y_star,
            provenance: "normal-equations",
        }),
    )
}

/// `min lambda ||x||_1 + 0.5 ||C x - b||^2`; the reference comes from a
/// long-horizon proximal-gradient solve.
pub fn lasso<F: Scalar>(c: LinearMap<F>, b: Vector<F>, lambda: F) -> Result<ProblemInstance<F>> {
    if !(lambda >= F::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "lasso weight must be finite and nonnegative".into(),
        ));
    }
    let (n, m) = c.dims();
    if b.dim() != m {
        return Err(Error::DimensionMismatch {
            context: "lasso data",
            expected: m,
            actual: b.dim(),
        });
    }
    let x_star = lasso_proximal_gradient(&c, &b, lambda)?;
    let y_star = c.apply(&x_star)?.minus(&b);

    let operator_a = MonotoneMap::l1_scaled(n, lambda)?;
    let binv = MonotoneMap::quadratic_shift(b.scaled(-F::one()));
    ProblemInstance::assemble(
        "lasso",
        operator_a,
        binv,
        c,
        Some(FunctionValues::Lasso {
            lambda,
            b: b.clone(),
        }),
        Some(Reference {
            x: x_star,
            y: y_star,
            provenance: "proximal-gradient",
        }),
    )
}

/// `min 0.5 ||x - b||^2 + lambda ||D x||_1` with the zero-boundary forward
/// difference; the reference comes from projected gradient on the dual.
pub fn tv_denoise_1d<F: Scalar>(b: Vector<F>, lambda: F) -> Result<ProblemInstance<F>> {
    if !(lambda >= F::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "tv weight must be finite and nonnegative".into(),
        ));
    }
    let n = b.dim();
    let difference = LinearMap::forward_difference(n)?;
    let y_star = tv_dual_projected_gradient(&difference, &b, lambda)?;
    let x_star = b.minus(&difference.adjoint_apply(&y_star)?);

    let operator_a = MonotoneMap::quadratic_shift(b.clone());
    // B^{-1} = subdifferential of the conjugate of lambda||.||_1, the normal
    // cone of the box [-lambda, lambda].
    let binv = MonotoneMap::box_normal_cone(vec![-lambda; n], vec![lambda; n])?;
    ProblemInstance::assemble(
        "tv-denoise-1d",
        operator_a,
        binv,
        difference,
        Some(FunctionValues::TvDenoise {
            lambda,
            b: b.clone(),
        }),
        Some(Reference {
            x: x_star,
            y: y_star,
            provenance: "projected-gradient-dual",
        }),
    )
}

/// Matrix game `min_{x in simplex} max_{y in simplex} <C x, y>`. A reference
/// (the uniform pair) ships only for skew-symmetric circulant payoffs, where
/// cyclic symmetry pins the equilibrium.
pub fn matrix_game<F: Scalar>(payoff: &[Vec<F>]) -> Result<ProblemInstance<F>> {
    let matrix = DenseMatrix::from_rows(payoff)?;
    if matrix.rows() != matrix.cols() {
        return Err(Error::InvalidArgument(
            "matrix game payoff must be square".into(),
        ));
    }
    let n = matrix.rows();
    let reference = if is_skew_circulant(&matrix) {
        let uniform = Vector::constant(n, F::from_usize(n).unwrap().recip());
        Some(Reference {
            x: uniform.clone(),
            y: uniform,
            provenance: "closed-form-symmetry",
        })
    } else {
        None
    };
    ProblemInstance::assemble(
        "matrix-game",
        MonotoneMap::simplex_normal_cone(n)?,
        MonotoneMap::simplex_normal_cone(n)?,
        LinearMap::dense(payoff)?,
        Some(FunctionValues::MatrixGame),
        reference,
    )
}

/// Monotone inclusion with `A = I + K` (`K` skew) and `B^{-1} = 0`; the
/// coupling is a seeded well-conditioned dense square matrix and the unique
/// solution is the origin.
pub fn skew_inclusion<F: Scalar>(dim: usize, seed: u64) -> Result<ProblemInstance<F>> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "skew inclusion needs dimension >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symmetric = vec![vec![F::zero(); dim]; dim];
    let mut skew = vec![vec![F::zero(); dim]; dim];
    for i in 0..dim {
        symmetric[i][i] = F::one();
        for j in 0..i {
            let value = F::real(rng.random_range(-1.0..1.0));
            skew[i][j] = value;
            skew[j][i] = -value;
        }
    }
    let mut coupling = vec![vec![F::zero(); dim]; dim];
    for (i, row) in coupling.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let noise = F::real(rng.random_range(-0.3..0.3));
            *entry = noise + if i == j { F::one() } else { F::zero() };
        }
    }
    ProblemInstance::assemble(
        "skew-inclusion",
        MonotoneMap::linear(&symmetric, &skew)?,
        MonotoneMap::zero(dim)?,
        LinearMap::dense(&coupling)?,
        None,
        Some(Reference {
            x: Vector::zeros(dim),
            y: Vector::zeros(dim),
            provenance: "closed-form",
        }),
    )
}

fn is_skew_circulant<F: Scalar>(matrix: &DenseMatrix<F>) -> bool {
    let n = matrix.rows();
    let tol = F::real(1e-12);
    for i in 0..n {
        for j in 0..n {
            if (matrix.at(i, j) + matrix.at(j, i)).abs() > tol {
                return false;
            }
            // Circulant: the entry depends only on (j - i) mod n.
            if (matrix.at(i, j) - matrix.at(0, (j + n - i) % n)).abs() > tol {
                return false;
            }
        }
    }
    true
}

fn lasso_proximal_gradient<F: Scalar>(
    c: &LinearMap<F>,
    b: &Vector<F>,
    lambda: F,
) -> Result<Vector<F>> {
    let norm = c.operator_norm_estimate(F::real(1e-10), 50_000, 1)?;
    let lipschitz = (norm * norm).max(F::real(1e-8));
    let step = lipschitz.recip();
    let threshold = step * lambda;
    let mut x = Vector::zeros(c.input_dim());
    let tol = F::real(ORACLE_RESIDUAL_TOL);
    let mut residual = F::infinity();
    for _ in 0..ORACLE_ITERATION_CAP {
        let gradient = c.adjoint_apply_unchecked(&c.apply_unchecked(&x).minus(b));
        let forward = x.axpy(-step, &gradient);
        let next = Vector::from_coords_unchecked(
            forward
                .iter()
                .map(|&v| {
                    let magnitude = (v.abs() - threshold).max(F::zero());
                    if v == F::zero() {
                        F::zero()
                    } else {
                        magnitude * v.signum()
                    }
                })
                .collect(),
        );
        residual = next.minus(&x).norm_inf() / step;
        x = next;
        if residual <= tol {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        what: "lasso reference oracle",
        iterations: ORACLE_ITERATION_CAP,
        last: residual.lossy_f64(),
    })
}

/// Projected gradient on the dual of the TV problem:
/// `min_{|y|_inf <= lambda} 0.5 ||D* y - b||^2`, recovered primal
/// `x = b - D* y`.
fn tv_dual_projected_gradient<F: Scalar>(
    difference: &LinearMap<F>,
    b: &Vector<F>,
    lambda: F,
) -> Result<Vector<F>> {
    let n = difference.input_dim();
    if lambda == F::zero() {
        return Ok(Vector::zeros(n));
    }
    let norm = difference.operator_norm_estimate(F::real(1e-10), 50_000, 1)?;
    let step = (norm * norm).recip();
    let mut y = Vector::zeros(n);
    let tol = F::real(ORACLE_RESIDUAL_TOL);
    let mut residual = F::infinity();
    for _ in 0..ORACLE_ITERATION_CAP {
        let gradient =
            difference.apply_unchecked(&difference.adjoint_apply_unchecked(&y).minus(b));
        let forward = y.axpy(-step, &gradient);
        let next = Vector::from_coords_unchecked(
            forward
                .iter()
                .map(|&v| v.max(-lambda).min(lambda))
                .collect(),
        );
        residual = next.minus(&y).norm_inf() / step;
        y = next;
        if residual <= tol {
            return Ok(y);
        }
    }
    Err(Error::NotConverged {
        what: "tv reference oracle",
        iterations: ORACLE_ITERATION_CAP,
        last: residual.lossy_f64(),
    })
}

/// Rock-paper-scissors payoff, the canonical cyclic game.
pub fn rock_paper_scissors_payoff<F: Scalar>() -> Vec<Vec<F>> {
    let z = F::zero();
    let p = F::one();
    let m = -F::one();
    vec![vec![z, m, p], vec![p, z, m], vec![m, p, z]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn toy_quadratic_one_dimensional_reference() {
        let c = LinearMap::dense(&[vec![1.0]]).unwrap();
        let problem = toy_quadratic(v(&[1.0]), v(&[0.0]), c).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        assert!((x[0] - 0.5).abs() <= 1e-12);
        assert!((y[0] - 0.5).abs() <= 1e-12);
        // -C* y* must be in A x*: x* - a = -0.5 = -C* y*.
        assert!(problem.kkt_residual(&x, &y).unwrap() <= 1e-12);
    }

    #[test]
    fn toy_quadratic_kkt_residual_at_origin() {
        let c = LinearMap::dense(&[vec![1.0]]).unwrap();
        let problem = toy_quadratic(v(&[1.0]), v(&[0.0]), c).unwrap();
        // J_A(0) = (0 + a)/2 = 0.5 and the dual part is exact.
        let residual = problem
            .kkt_residual(&Vector::zeros(1), &Vector::zeros(1))
            .unwrap();
        assert!((residual - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn lasso_orthonormal_design_matches_soft_threshold() {
        // Householder reflector: orthonormal and symmetric.
        let dim = 6;
        let mut u = Vector::from_fn(dim, |i| 1.0 + (i as f64) * 0.4);
        u = u.scaled(1.0 / u.norm());
        let mut rows = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                rows[i][j] = if i == j { 1.0 } else { 0.0 } - 2.0 * u[i] * u[j];
            }
        }
        let c = LinearMap::dense(&rows).unwrap();
        let b = Vector::from_fn(dim, |i| (i as f64 - 2.0) * 0.7);
        let lambda = 0.8;
        let problem = lasso(c.clone(), b.clone(), lambda).unwrap();
        let (x, _) = problem.reference_solution().unwrap();

        let ctb = c.adjoint_apply(&b).unwrap();
        for i in 0..dim {
            let expect = (ctb[i].abs() - lambda).max(0.0) * ctb[i].signum();
            assert!(
                (x[i] - expect).abs() <= 1e-9,
                "coordinate {i}: {} vs {}",
                x[i],
                expect
            );
        }
    }

    #[test]
    fn lasso_zero_solution_instance() {
        let c = LinearMap::dense(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let problem = lasso(c, v(&[1.0, 0.0]), 10.0).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        assert!(x.norm() <= 1e-12);
        assert!((y[0] + 1.0).abs() <= 1e-10 && y[1].abs() <= 1e-10);
    }

    #[test]
    fn tv_without_regularization_returns_the_signal() {
        let b = v(&[0.4, -1.0, 2.0, 0.1]);
        let problem = tv_denoise_1d(b.clone(), 0.0).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        assert!(x.minus(&b).norm() <= 1e-12);
        assert!(y.norm() <= 1e-12);
    }

    #[test]
    fn tv_small_lambda_reference_passes_kkt() {
        let b = Vector::from_fn(12, |i| if i < 6 { 1.0 } else { -0.5 });
        let problem = tv_denoise_1d(b, 0.1).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        assert!(problem.kkt_residual(&x, &y).unwrap() <= 1e-8);
        assert!(y.norm_inf() <= 0.1 + 1e-12);
    }

    #[test]
    fn rock_paper_scissors_reference_is_uniform() {
        let problem = matrix_game(&rock_paper_scissors_payoff::<f64>()).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        let third = 1.0 / 3.0;
        for i in 0..3 {
            assert!((x[i] - third).abs() <= 1e-14);
            assert!((y[i] - third).abs() <= 1e-14);
        }
    }

    #[test]
    fn asymmetric_game_ships_no_reference() {
        let payoff = vec![vec![0.0, 2.0, -1.0], vec![-1.0, 0.0, 1.0], vec![1.0, -1.0, 0.0]];
        let problem = matrix_game(&payoff).unwrap();
        assert!(problem.reference_solution().is_err());
    }

    #[test]
    fn skew_inclusion_solution_is_origin() {
        let problem = skew_inclusion::<f64>(4, 7).unwrap();
        let (x, y) = problem.reference_solution().unwrap();
        assert_eq!(x.norm(), 0.0);
        assert_eq!(y.norm(), 0.0);
        assert!(problem.kkt_residual(&x, &y).unwrap() <= 1e-14);
    }

    #[test]
    fn every_shipped_reference_passes_kkt() {
        let entries: Vec<ProblemInstance<f64>> = vec![
            toy_quadratic(
                v(&[1.0, -0.5]),
                v(&[0.3]),
                LinearMap::dense(&[vec![1.0, 0.4]]).unwrap(),
            )
            .unwrap(),
            lasso(
                LinearMap::dense(&[vec![1.0, 0.1], vec![-0.2, 0.9]]).unwrap(),
                v(&[1.0, -0.4]),
                0.3,
            )
            .unwrap(),
            tv_denoise_1d(Vector::from_fn(10, |i| (i as f64 * 0.7).sin()), 0.05).unwrap(),
            matrix_game(&rock_paper_scissors_payoff()).unwrap(),
            skew_inclusion(5, 3).unwrap(),
        ];
        for problem in entries {
            let (x, y) = problem.reference_solution().unwrap();
            assert!(
                problem.kkt_residual(&x, &y).unwrap() <= 1e-8,
                "kkt residual too large for {}",
                problem.name()
            );
        }
    }
}
