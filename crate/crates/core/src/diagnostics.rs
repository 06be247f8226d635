//! Computable surrogates of the convergence analysis: witness-based lower
//! bounds on the restricted gap, objective primal-dual gaps, the Lyapunov
//! quantity, fixed-point residuals, and log-log rate fitting.

use crate::bregman::BregmanGeometry;
use crate::error::{Error, Result};
use crate::hilbert::{inner, Vector};
use crate::monotone::GraphPoint;
use crate::problems::ProblemInstance;
use crate::scalar::Scalar;
use crate::solver::{SolverState, Trace};

/// A validated witness `(x, y, u, v)` with `(x, u)` in the graph of `A` and
/// `(y, v)` in the graph of `B^{-1}`.
#[derive(Debug, Clone)]
pub struct GapWitness<F> {
    x: Vector<F>,
    y: Vector<F>,
    u: Vector<F>,
    v: Vector<F>,
}

impl<F: Scalar> GapWitness<F> {
    pub fn new(
        problem: &ProblemInstance<F>,
        x: Vector<F>,
        y: Vector<F>,
        u: Vector<F>,
        v: Vector<F>,
    ) -> Result<Self> {
        let primal = GraphPoint::new(problem.a(), x, u)
            .map_err(|e| Error::InvalidArgument(format!("primal witness rejected: {e}")))?;
        let dual = GraphPoint::new(problem.binv(), y, v)
            .map_err(|e| Error::InvalidArgument(format!("dual witness rejected: {e}")))?;
        let (x, u) = (primal.point().clone(), primal.image().clone());
        let (y, v) = (dual.point().clone(), dual.image().clone());
        Ok(Self { x, y, u, v })
    }

    pub fn x(&self) -> &Vector<F> {
        &self.x
    }

    pub fn y(&self) -> &Vector<F> {
        &self.y
    }

    pub fn u(&self) -> &Vector<F> {
        &self.u
    }

    pub fn v(&self) -> &Vector<F> {
        &self.v
    }
}

/// The canonical witness at the reference solution:
/// `(x*, y*, -C* y*, C x*)`.
pub fn solution_witness<F: Scalar>(problem: &ProblemInstance<F>) -> Result<GapWitness<F>> {
    let (x, y) = problem.reference_solution()?;
    let u = problem.c().adjoint_apply(&y)?.scaled(-F::one());
    let v = problem.c().apply(&x)?;
    GapWitness::new(problem, x, y, u, v)
}

/// A witness at an arbitrary pair, using each operator's canonical
/// selection; fails when either point is outside the operator domain.
pub fn witness_at<F: Scalar>(
    problem: &ProblemInstance<F>,
    x: &Vector<F>,
    y: &Vector<F>,
) -> Result<GapWitness<F>> {
    let u = problem
        .a()
        .witness_image(x)
        .ok_or_else(|| Error::UnsupportedCapability {
            operation: "witness_at",
            detail: "no witness available for the primal operator at this point".into(),
        })?;
    let v = problem
        .binv()
        .witness_image(y)
        .ok_or_else(|| Error::UnsupportedCapability {
            operation: "witness_at",
            detail: "no witness available for the dual operator at this point".into(),
        })?;
    GapWitness::new(problem, x.clone(), y.clone(), u, v)
}

/// The witness pair produced by one solver step: rearranging the two
/// inclusion solves yields `u^ in A x^{n+1}` and `v^ in B^{-1} y^{n+1}`.
pub fn recover_step_witness<F: Scalar>(
    problem: &ProblemInstance<F>,
    geometry1: &BregmanGeometry<F>,
    geometry2: &BregmanGeometry<F>,
    state: &SolverState<F>,
) -> Result<GapWitness<F>> {
    if state.n() == 0 {
        return Err(Error::InvalidArgument(
            "witness recovery needs at least one step".into(),
        ));
    }
    let u = problem
        .c()
        .adjoint_apply(state.y_prev())?
        .scaled(-F::one())
        .minus(&geometry1.grad_psi(state.x())?)
        .plus(&geometry1.grad_psi(state.x_prev())?);
    let v = problem
        .c()
        .apply(&state.x_tilde())?
        .minus(&geometry2.grad_psi(state.y())?)
        .plus(&geometry2.grad_psi(state.y_prev())?);
    GapWitness::new(problem, state.x().clone(), state.y().clone(), u, v)
}

/// Witness evaluation of the restricted gap at `(zeta, eta)`:
/// `<zeta - x, u> + <eta - y, v> - <C x, eta> + <C zeta, y>`,
/// a lower bound on the supremum over the operator graphs.
pub fn gap_lower_bound<F: Scalar>(
    problem: &ProblemInstance<F>,
    witness: &GapWitness<F>,
    zeta: &Vector<F>,
    eta: &Vector<F>,
) -> Result<F> {
    let a = inner(&zeta.minus(&witness.x), &witness.u)?;
    let b = inner(&eta.minus(&witness.y), &witness.v)?;
    let c_x = problem.c().apply(&witness.x)?;
    let c_zeta = problem.c().apply(zeta)?;
    Ok(a + b - inner(&c_x, eta)? + inner(&c_zeta, &witness.y)?)
}

/// Primal value minus dual value at `(zeta, eta)` for function-valued
/// problems: `f1(zeta) + f2(C zeta) + f1*(-C* eta) + f2*(eta)`. Returns
/// `+inf` when either side is infeasible; never negative beyond rounding.
pub fn objective_gap<F: Scalar>(
    problem: &ProblemInstance<F>,
    zeta: &Vector<F>,
    eta: &Vector<F>,
) -> Result<F> {
    let functions = problem
        .functions()
        .ok_or_else(|| Error::UnsupportedCapability {
            operation: "objective_gap",
            detail: "problem has no function values".into(),
        })?;
    let c_zeta = problem.c().apply(zeta)?;
    let minus_ct_eta = problem.c().adjoint_apply(eta)?.scaled(-F::one());
    let primal = functions.f1(zeta) + functions.f2(&c_zeta);
    let dual = -functions.f1_conjugate(&minus_ct_eta) - functions.f2_conjugate(eta);
    Ok(primal - dual)
}

/// The Lyapunov quantity with the reference pair fixed:
/// `D1(ref_x, x) + D2(ref_y, y) - <C(ref_x - x), ref_y - y>`.
#[allow(clippy::too_many_arguments)]
pub fn lyapunov<F: Scalar>(
    problem: &ProblemInstance<F>,
    ref_x: &Vector<F>,
    ref_y: &Vector<F>,
    x: &Vector<F>,
    y: &Vector<F>,
    geometry1: &BregmanGeometry<F>,
    geometry2: &BregmanGeometry<F>,
) -> Result<F> {
    let d1 = geometry1.divergence(ref_x, x)?;
    let d2 = geometry2.divergence(ref_y, y)?;
    let cross = inner(&problem.c().apply(&ref_x.minus(x))?, &ref_y.minus(y))?;
    Ok(d1 + d2 - cross)
}

/// Evaluates both sides of the ergodic gap bound at a recorded iteration:
/// `lhs` is the witness gap at the ergodic averages, `rhs` the initial
/// Lyapunov value divided by `n`. For certified runs `lhs <= rhs`.
#[allow(clippy::too_many_arguments)]
pub fn ergodic_gap_certificate<F: Scalar>(
    trace: &Trace<F>,
    problem: &ProblemInstance<F>,
    x: &Vector<F>,
    y: &Vector<F>,
    geometry1: &BregmanGeometry<F>,
    geometry2: &BregmanGeometry<F>,
    x0: &Vector<F>,
    y0: &Vector<F>,
    n: usize,
) -> Result<(F, F)> {
    let record = trace.ergodic_at(n).ok_or_else(|| {
        Error::InvalidArgument(format!("iteration {n} was not recorded in the trace"))
    })?;
    // At the reference solution the canonical witness applies; elsewhere use
    // the per-operator selections.
    let witness = match problem.reference() {
        Some(r)
            if r.x.minus(x).norm() <= F::real(1e-12) * (F::one() + r.x.norm())
                && r.y.minus(y).norm() <= F::real(1e-12) * (F::one() + r.y.norm()) =>
        {
            solution_witness(problem)?
        }
        _ => witness_at(problem, x, y)?,
    };
    let lhs = gap_lower_bound(problem, &witness, &record.x, &record.y)?;
    let delta0 = lyapunov(problem, x, y, x0, y0, geometry1, geometry2)?;
    let rhs = delta0 / F::from_usize(n).expect("iteration count fits scalar");
    Ok((lhs, rhs))
}

/// Fixed-point residuals of the latest step, rearranged from the two
/// inclusion solves so that both vanish exactly at fixed points:
/// `r_p = |grad psi1(x^n) - grad psi1(x^{n+1}) - C*(y^n - y^{n+1})|`,
/// `r_d = |grad psi2(y^n) - grad psi2(y^{n+1}) + C(x~^{n+1} - x^{n+1}) - C(x^{n+1} - x^n)|`.
pub fn fixed_point_residual<F: Scalar>(
    problem: &ProblemInstance<F>,
    state: &SolverState<F>,
    geometry1: &BregmanGeometry<F>,
    geometry2: &BregmanGeometry<F>,
) -> Result<(F, F)> {
    if state.n() == 0 {
        return Err(Error::InvalidArgument(
            "fixed-point residual needs at least one step".into(),
        ));
    }
    let primal = geometry1
        .grad_psi(state.x_prev())?
        .minus(&geometry1.grad_psi(state.x())?)
        .minus(
            &problem
                .c()
                .adjoint_apply(&state.y_prev().minus(state.y()))?,
        )
        .norm();
    let dual = geometry2
        .grad_psi(state.y_prev())?
        .minus(&geometry2.grad_psi(state.y())?)
        .plus(&problem.c().apply(&state.x_tilde().minus(state.x()))?)
        .minus(&problem.c().apply(&state.x().minus(state.x_prev()))?)
        .norm();
    Ok((primal, dual))
}

/// One recorded row of run metrics; optional fields are absent when the
/// problem lacks the oracle or value needed to compute them.
#[derive(Debug, Clone)]
pub struct MetricsRow<F> {
    pub n: usize,
    pub primal_residual: F,
    pub dual_residual: F,
    pub lyapunov: Option<F>,
    pub ergodic_gap_lhs: Option<F>,
    pub ergodic_gap_rhs: Option<F>,
    pub dist_to_ref: Option<F>,
    /// Objective gap measured at the ergodic averages; absent when infinite.
    pub objective_gap: Option<F>,
}

/// Selects one metric column for rate fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricField {
    PrimalResidual,
    DualResidual,
    Lyapunov,
    ErgodicGapLhs,
    ErgodicGapRhs,
    DistToRef,
    ObjectiveGap,
}

impl<F: Scalar> MetricsRow<F> {
    pub fn field(&self, field: MetricField) -> Option<F> {
        match field {
            MetricField::PrimalResidual => Some(self.primal_residual),
            MetricField::DualResidual => Some(self.dual_residual),
            MetricField::Lyapunov => self.lyapunov,
            MetricField::ErgodicGapLhs => self.ergodic_gap_lhs,
            MetricField::ErgodicGapRhs => self.ergodic_gap_rhs,
            MetricField::DistToRef => self.dist_to_ref,
            MetricField::ObjectiveGap => self.objective_gap,
        }
    }
}

/// Least-squares slope of `log(value)` against `log(n)` over the recorded
/// rows with `n` in `[window.0, window.1]`. Values must be present and
/// strictly positive on the window.
pub fn rate_fit<F: Scalar>(
    trace: &Trace<F>,
    field: MetricField,
    window: (usize, usize),
) -> Result<F> {
    let (lo, hi) = window;
    let mut points: Vec<(F, F)> = Vec::new();
    let mut offending: Vec<usize> = Vec::new();
    for row in &trace.rows {
        if row.n < lo || row.n > hi {
            continue;
        }
        if let Some(value) = row.field(field) {
            if value <= F::zero() {
                offending.push(row.n);
            } else {
                points.push((
                    F::from_usize(row.n).expect("iteration count fits scalar").ln(),
                    value.ln(),
                ));
            }
        }
    }
    if !offending.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs positive values; nonpositive rows at n = {offending:?}"
        )));
    }
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs at least two recorded rows in [{lo}, {hi}]"
        )));
    }
    let count = F::from_usize(points.len()).expect("row count fits scalar");
    let mean_x = points.iter().fold(F::zero(), |acc, p| acc + p.0) / count;
    let mean_y = points.iter().fold(F::zero(), |acc, p| acc + p.1) / count;
    let mut cov = F::zero();
    let mut var = F::zero();
    for (px, py) in &points {
        let dx = *px - mean_x;
        cov = cov + dx * (*py - mean_y);
        var = var + dx * dx;
    }
    if var == F::zero() {
        return Err(Error::InvalidArgument(
            "rate fit window spans a single distinct iteration".into(),
        ));
    }
    Ok(cov / var)
}

/// The default fitting window: the last 80% of recorded rows (early
/// iterations pollute asymptotic slopes).
pub fn default_tail_window<F: Scalar>(trace: &Trace<F>) -> (usize, usize) {
    if trace.rows.is_empty() {
        return (0, 0);
    }
    let first = trace.rows[0].n;
    let last = trace.rows[trace.rows.len() - 1].n;
    let lo = first + (last - first) / 5;
    (lo, last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bregman::AlphaCertificate;
    use crate::hilbert::LinearMap;
    use crate::monotone::MonotoneMap;
    use crate::problems;
    use crate::solver::{run, step, SolverConfig, Termination};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn toy_problem() -> ProblemInstance<f64> {
        problems::toy_quadratic(
            v(&[1.0]),
            v(&[0.0]),
            LinearMap::dense(&[vec![1.0]]).unwrap(),
        )
        .unwrap()
    }

    fn quadratic_config(tau: f64, sigma: f64, n: usize, m: usize) -> SolverConfig<f64> {
        SolverConfig::new(
            BregmanGeometry::scalar_quadratic(n, tau).unwrap(),
            BregmanGeometry::scalar_quadratic(m, sigma).unwrap(),
        )
    }

    #[test]
    fn solution_witness_gap_collapses_identically() {
        let problems: Vec<ProblemInstance<f64>> = vec![
            toy_problem(),
            problems::lasso(
                LinearMap::dense(&[vec![1.0, 0.1], vec![-0.2, 0.9]]).unwrap(),
                v(&[1.0, -0.4]),
                0.3,
            )
            .unwrap(),
            problems::matrix_game(&problems::rock_paper_scissors_payoff()).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for problem in problems {
            let witness = solution_witness(&problem).unwrap();
            for _ in 0..100 {
                let zeta =
                    Vector::from_fn(problem.primal_dim(), |_| rng.random_range(-2.0..2.0));
                let eta = Vector::from_fn(problem.dual_dim(), |_| rng.random_range(-2.0..2.0));
                let value = gap_lower_bound(&problem, &witness, &zeta, &eta).unwrap();
                assert!(
                    value.abs() <= 1e-12,
                    "{}: witness bound should cancel, got {value:e}",
                    problem.name()
                );
            }
        }
    }

    #[test]
    fn gap_lower_bound_bilinear_case() {
        let problem = ProblemInstance::from_parts(
            MonotoneMap::zero(2).unwrap(),
            MonotoneMap::zero(2).unwrap(),
            LinearMap::dense(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let x = v(&[0.4, -0.6]);
        let y = v(&[1.0, 0.2]);
        let witness =
            GapWitness::new(&problem, x.clone(), y.clone(), Vector::zeros(2), Vector::zeros(2))
                .unwrap();
        // With u = v = 0 the expression is <C zeta, y> - <C x, eta>; at
        // (zeta, eta) = (x, y) it vanishes.
        let value = gap_lower_bound(&problem, &witness, &x, &y).unwrap();
        assert!(value.abs() <= 1e-15);

        let zeta = v(&[1.0, 1.0]);
        let eta = v(&[-1.0, 2.0]);
        let expect = inner(&problem.c().apply(&zeta).unwrap(), &y).unwrap()
            - inner(&problem.c().apply(&x).unwrap(), &eta).unwrap();
        let got = gap_lower_bound(&problem, &witness, &zeta, &eta).unwrap();
        assert!((got - expect).abs() <= 1e-15);
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let problem = toy_problem();
        // (0, 5) is far from the graph of x -> x - 1.
        assert!(GapWitness::new(&problem, v(&[0.0]), v(&[0.0]), v(&[5.0]), v(&[0.0])).is_err());
    }

    #[test]
    fn objective_gap_examples() {
        let toy = toy_problem();
        let (x_star, y_star) = toy.reference_solution().unwrap();
        assert!(objective_gap(&toy, &x_star, &y_star).unwrap().abs() <= 1e-10);

        let lasso = problems::lasso(
            LinearMap::dense(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            v(&[1.0, 0.0]),
            10.0,
        )
        .unwrap();
        let zeros = Vector::zeros(2);
        assert!((objective_gap(&lasso, &zeros, &zeros).unwrap() - 0.5).abs() <= 1e-12);
        assert!(
            objective_gap(&lasso, &zeros, &v(&[-1.0, 0.0]))
                .unwrap()
                .abs()
                <= 1e-12
        );

        let game = problems::matrix_game(&problems::rock_paper_scissors_payoff()).unwrap();
        let uniform = Vector::constant(3, 1.0f64 / 3.0);
        assert!(objective_gap(&game, &uniform, &uniform).unwrap().abs() <= 1e-12);

        let skew = problems::skew_inclusion::<f64>(3, 1).unwrap();
        assert!(matches!(
            objective_gap(&skew, &Vector::zeros(3), &Vector::zeros(3)),
            Err(Error::UnsupportedCapability { .. })
        ));
    }

    #[test]
    fn objective_gap_infinite_off_the_dual_feasible_set() {
        let lasso = problems::lasso(
            LinearMap::dense(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            v(&[1.0, 0.0]),
            0.5,
        )
        .unwrap();
        // |C* eta|_inf > lambda makes the dual value -inf.
        let gap = objective_gap(&lasso, &Vector::zeros(2), &v(&[3.0, 0.0])).unwrap();
        assert!(gap.is_infinite() && gap > 0.0);
    }

    #[test]
    fn lyapunov_examples() {
        let problem = ProblemInstance::from_parts(
            MonotoneMap::zero(1).unwrap(),
            MonotoneMap::zero(1).unwrap(),
            LinearMap::dense(&[vec![0.5]]).unwrap(),
        )
        .unwrap();
        let g1 = BregmanGeometry::scalar_quadratic(1, 1.0).unwrap();
        let g2 = BregmanGeometry::scalar_quadratic(1, 1.0).unwrap();
        let zero = Vector::zeros(1);
        let one = v(&[1.0]);
        assert_eq!(
            lyapunov(&problem, &zero, &zero, &zero, &zero, &g1, &g2).unwrap(),
            0.0
        );
        // D1 = 0.5, D2 = 0.5, <C(0-1), 0-1> = 0.5: total 0.5.
        let value = lyapunov(&problem, &zero, &zero, &one, &one, &g1, &g2).unwrap();
        assert!((value - 0.5).abs() <= 1e-15);
        // Independent ordering of the same expression.
        let independent = 0.5 * (0.0 - 1.0f64).powi(2) + 0.5 * (0.0 - 1.0f64).powi(2)
            - 0.5 * (0.0 - 1.0) * (0.0 - 1.0);
        assert!((value - independent).abs() <= 1e-15);
    }

    #[test]
    fn lyapunov_dominates_certified_distances() {
        let problem = toy_problem();
        let g1 = BregmanGeometry::scalar_quadratic(1, 0.6).unwrap();
        let g2 = BregmanGeometry::scalar_quadratic(1, 0.6).unwrap();
        let cert = crate::bregman::certify_alpha(&g1, &g2, 1.0).unwrap();
        assert!(cert.valid);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let x = Vector::from_fn(1, |_| rng.random_range(-2.0..2.0));
            let y = Vector::from_fn(1, |_| rng.random_range(-2.0..2.0));
            let reference_x = Vector::from_fn(1, |_| rng.random_range(-2.0..2.0));
            let reference_y = Vector::from_fn(1, |_| rng.random_range(-2.0..2.0));
            let value =
                lyapunov(&problem, &reference_x, &reference_y, &x, &y, &g1, &g2).unwrap();
            let dist = reference_x.minus(&x).norm_sq() + reference_y.minus(&y).norm_sq();
            assert!(value >= cert.alpha * dist - 1e-10);
        }
    }

    #[test]
    fn ergodic_gap_certificate_sandwich_on_toy() {
        let problem = toy_problem();
        let mut config = quadratic_config(0.9, 0.9, 1, 1);
        config.max_iter = 1000;
        config.record_every = 10;
        config.residual_tol = 1e-300;
        let x0 = Vector::zeros(1);
        let y0 = Vector::zeros(1);
        let trace = run(&problem, &config, &x0, &y0).unwrap();
        let (x_star, y_star) = problem.reference_solution().unwrap();
        for n in [10usize, 100, 1000] {
            let (lhs, rhs) = ergodic_gap_certificate(
                &trace,
                &problem,
                &x_star,
                &y_star,
                &config.geometry1,
                &config.geometry2,
                &x0,
                &y0,
                n,
            )
            .unwrap();
            assert!(lhs >= -1e-9, "lhs {lhs:e} at n = {n}");
            assert!(lhs <= rhs + 1e-12, "lhs {lhs:e} > rhs {rhs:e} at n = {n}");
        }
        // The quotient halves exactly as the horizon doubles.
        let (_, rhs_100) = ergodic_gap_certificate(
            &trace, &problem, &x_star, &y_star, &config.geometry1, &config.geometry2, &x0, &y0,
            100,
        )
        .unwrap();
        let (_, rhs_200) = ergodic_gap_certificate(
            &trace, &problem, &x_star, &y_star, &config.geometry1, &config.geometry2, &x0, &y0,
            200,
        )
        .unwrap();
        assert!((rhs_200 - rhs_100 / 2.0).abs() <= 1e-15 * (1.0 + rhs_100));

        assert!(matches!(
            ergodic_gap_certificate(
                &trace, &problem, &x_star, &y_star, &config.geometry1, &config.geometry2, &x0,
                &y0, 55,
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fixed_point_residual_hand_computed_and_at_fixed_points() {
        let problem = ProblemInstance::from_parts(
            MonotoneMap::zero(1).unwrap(),
            MonotoneMap::zero(1).unwrap(),
            LinearMap::dense(&[vec![1.0]]).unwrap(),
        )
        .unwrap();
        let config = quadratic_config(0.5, 0.5, 1, 1);
        let initial = crate::solver::SolverState::initial(v(&[1.0]), v(&[0.0]));
        assert!(fixed_point_residual(&problem, &initial, &config.geometry1, &config.geometry2)
            .is_err());
        let state = step(&initial, &problem, &config).unwrap();
        let (rp, rd) =
            fixed_point_residual(&problem, &state, &config.geometry1, &config.geometry2)
                .unwrap();
        // r_p = |(x0 - x1)/tau - (y0 - y1)| = |0 - (-0.5)| = 0.5
        // r_d = |(y0 - y1)/sigma + C(x~1 - x1) - C(x1 - x0)| = |-1 + 0 - 0| = 1
        assert!((rp - 0.5).abs() <= 1e-15);
        assert!((rd - 1.0).abs() <= 1e-15);

        // Starting at the toy oracle solution gives residuals at rounding level.
        let toy = toy_problem();
        let (x_star, y_star) = toy.reference_solution().unwrap();
        let at_solution = step(
            &crate::solver::SolverState::initial(x_star, y_star),
            &toy,
            &config,
        )
        .unwrap();
        let (rp, rd) =
            fixed_point_residual(&toy, &at_solution, &config.geometry1, &config.geometry2)
                .unwrap();
        assert!(rp <= 1e-10 && rd <= 1e-10);
    }

    fn synthetic_trace(values: Vec<(usize, Option<f64>)>) -> Trace<f64> {
        let rows = values
            .into_iter()
            .map(|(n, value)| MetricsRow {
                n,
                primal_residual: 1.0,
                dual_residual: 1.0,
                lyapunov: None,
                ergodic_gap_lhs: None,
                ergodic_gap_rhs: value,
                dist_to_ref: None,
                objective_gap: None,
            })
            .collect();
        Trace {
            rows,
            ergodic: Vec::new(),
            final_state: crate::solver::SolverState::initial(v(&[0.0]), v(&[0.0])),
            termination: Termination::MaxIter,
            certificate: AlphaCertificate {
                alpha: 1.0,
                norm_c: 1.0,
                geom1_modulus: 1.0,
                geom2_modulus: 1.0,
                valid: true,
            },
            certified: true,
            norm_c_estimate: 1.0,
            delta0: None,
        }
    }

    #[test]
    fn rate_fit_exact_power_laws() {
        let trace = synthetic_trace(
            (1..=100).map(|n| (n, Some(7.0 / n as f64))).collect(),
        );
        let slope = rate_fit(&trace, MetricField::ErgodicGapRhs, (1, 100)).unwrap();
        assert!((slope + 1.0).abs() <= 1e-12);

        let flat = synthetic_trace((1..=50).map(|n| (n, Some(3.0))).collect());
        let slope = rate_fit(&flat, MetricField::ErgodicGapRhs, (1, 50)).unwrap();
        assert!(slope.abs() <= 1e-12);
    }

    #[test]
    fn rate_fit_rejects_nonpositive_and_missing_values() {
        let trace = synthetic_trace(vec![(1, Some(1.0)), (2, Some(0.0)), (3, Some(0.5))]);
        let err = rate_fit(&trace, MetricField::ErgodicGapRhs, (1, 3)).unwrap_err();
        assert!(err.to_string().contains("n = [2]"), "{err}");

        let sparse = synthetic_trace(vec![(1, None), (2, None)]);
        assert!(rate_fit(&sparse, MetricField::ErgodicGapRhs, (1, 2)).is_err());
    }

    #[test]
    fn rate_fit_on_recorded_quotient_field_is_exactly_minus_one() {
        let problem = toy_problem();
        let mut config = quadratic_config(0.9, 0.9, 1, 1);
        config.max_iter = 1000;
        config.record_every = 10;
        config.residual_tol = 1e-300;
        let trace = run(&problem, &config, &Vector::zeros(1), &Vector::zeros(1)).unwrap();
        let slope = rate_fit(&trace, MetricField::ErgodicGapRhs, (10, 1000)).unwrap();
        assert!((slope + 1.0).abs() <= 1e-12);
        let window = default_tail_window(&trace);
        assert!(window.0 > 10 && window.1 == 1000);
    }

    #[test]
    fn recovered_witness_bound_is_dominated_by_the_objective_gap() {
        let problem = problems::lasso(
            LinearMap::dense(&[vec![1.0, 0.1], vec![-0.2, 0.9]]).unwrap(),
            v(&[1.0, -0.4]),
            0.3,
        )
        .unwrap();
        let config = quadratic_config(0.6, 0.6, 2, 2);
        let mut state = crate::solver::SolverState::initial(Vector::zeros(2), Vector::zeros(2));
        for _ in 0..300 {
            state = step(&state, &problem, &config).unwrap();
            if state.n() < 2 {
                continue;
            }
            let witness =
                recover_step_witness(&problem, &config.geometry1, &config.geometry2, &state)
                    .unwrap();
            let (avg_x, avg_y) = state.ergodic_average().unwrap();
            let bound = gap_lower_bound(&problem, &witness, &avg_x, &avg_y).unwrap();
            let gap = objective_gap(&problem, &avg_x, &avg_y).unwrap();
            if gap.is_finite() {
                assert!(bound <= gap + 1e-9, "bound {bound:e} vs gap {gap:e}");
            }
        }
    }
}
