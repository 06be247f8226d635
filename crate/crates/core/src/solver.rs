//! The primal-dual iteration with over-relaxation and ergodic averaging,
//! the quadratic-geometry reference iteration used as an equivalence
//! oracle, and run orchestration with stopping rules.

use crate::bregman::{certify_alpha, AlphaCertificate, BregmanGeometry};
use crate::diagnostics::{
    fixed_point_residual, gap_lower_bound, lyapunov, objective_gap, solution_witness, GapWitness,
    MetricsRow,
};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::problems::ProblemInstance;
use crate::scalar::Scalar;

/// Tolerance used when estimating the coupling norm for certificates.
const NORM_ESTIMATE_TOL: f64 = 1e-9;
const NORM_ESTIMATE_CAP: usize = 20_000;

/// Run configuration: the geometry pair plus loop controls.
#[derive(Debug, Clone)]
pub struct SolverConfig<F> {
    pub geometry1: BregmanGeometry<F>,
    pub geometry2: BregmanGeometry<F>,
    pub max_iter: usize,
    pub residual_tol: F,
    /// Tolerance for inner generalized-resolvent solves.
    pub inner_tol: F,
    pub record_every: usize,
    pub seed: u64,
    /// Runs with an invalid certificate are rejected unless this is set;
    /// override runs are marked uncertified in the trace.
    pub override_certificate: bool,
}

impl<F: Scalar> SolverConfig<F> {
    pub fn new(geometry1: BregmanGeometry<F>, geometry2: BregmanGeometry<F>) -> Self {
        Self {
            geometry1,
            geometry2,
            max_iter: 10_000,
            residual_tol: F::real(1e-10),
            inner_tol: F::real(1e-10),
            record_every: 10,
            seed: 0,
            override_certificate: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        if !(self.residual_tol > F::zero()) || !(self.inner_tol > F::zero()) {
            return Err(Error::InvalidArgument(
                "solver tolerances must be positive".into(),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Iteration state: current pair, previous pair, and running ergodic sums.
/// Ergodic sums exclude the initial point, so `ergodic_count == n`.
#[derive(Debug, Clone)]
pub struct SolverState<F> {
    n: usize,
    x: Vector<F>,
    y: Vector<F>,
    x_prev: Vector<F>,
    y_prev: Vector<F>,
    ergodic_sum_x: Vector<F>,
    ergodic_sum_y: Vector<F>,
    ergodic_count: usize,
}

impl<F: Scalar> SolverState<F> {
    pub fn initial(x0: Vector<F>, y0: Vector<F>) -> Self {
        let sum_x = Vector::zeros(x0.dim());
        let sum_y = Vector::zeros(y0.dim());
        Self {
            n: 0,
            x_prev: x0.clone(),
            y_prev: y0.clone(),
            x: x0,
            y: y0,
            ergodic_sum_x: sum_x,
            ergodic_sum_y: sum_y,
            ergodic_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &Vector<F> {
        &self.x
    }

    pub fn y(&self) -> &Vector<F> {
        &self.y
    }

    pub fn x_prev(&self) -> &Vector<F> {
        &self.x_prev
    }

    pub fn y_prev(&self) -> &Vector<F> {
        &self.y_prev
    }

    pub fn ergodic_count(&self) -> usize {
        self.ergodic_count
    }

    /// The over-relaxed point `2 x^n - x^{n-1}` of the latest step.
    pub fn x_tilde(&self) -> Vector<F> {
        self.x.scaled(F::real(2.0)).minus(&self.x_prev)
    }

    /// Ergodic averages `(sum x_k / n, sum y_k / n)` over steps `1..=n`.
    pub fn ergodic_average(&self) -> Result<(Vector<F>, Vector<F>)> {
        if self.ergodic_count == 0 {
            return Err(Error::InvalidArgument(
                "ergodic average requested before the first step".into(),
            ));
        }
        let scale = F::from_usize(self.ergodic_count)
            .expect("iteration count fits scalar")
            .recip();
        Ok((
            self.ergodic_sum_x.scaled(scale),
            self.ergodic_sum_y.scaled(scale),
        ))
    }

    fn advance(&self, x_next: Vector<F>, y_next: Vector<F>) -> Self {
        Self {
            n: self.n + 1,
            x_prev: self.x.clone(),
            y_prev: self.y.clone(),
            ergodic_sum_x: self.ergodic_sum_x.plus(&x_next),
            ergodic_sum_y: self.ergodic_sum_y.plus(&y_next),
            ergodic_count: self.ergodic_count + 1,
            x: x_next,
            y: y_next,
        }
    }
}

/// One iteration of the Bregman splitting:
/// a generalized resolvent on the primal, over-relaxation, and a
/// generalized resolvent on the dual driven by the over-relaxed point.
pub fn step<F: Scalar>(
    state: &SolverState<F>,
    problem: &ProblemInstance<F>,
    config: &SolverConfig<F>,
) -> Result<SolverState<F>> {
    let iteration = state.n + 1;
    let primal_input = problem
        .c()
        .adjoint_apply(&state.y)
        .map_err(|e| e.at_step(iteration))?
        .scaled(-F::one());
    let x_next = config
        .geometry1
        .generalized_resolvent(problem.a(), &state.x, &primal_input, config.inner_tol)
        .map_err(|e| e.at_step(iteration))?;
    let x_tilde = x_next.scaled(F::real(2.0)).minus(&state.x);
    let dual_input = problem
        .c()
        .apply(&x_tilde)
        .map_err(|e| e.at_step(iteration))?;
    let y_next = config
        .geometry2
        .generalized_resolvent(problem.binv(), &state.y, &dual_input, config.inner_tol)
        .map_err(|e| e.at_step(iteration))?;
    Ok(state.advance(x_next, y_next))
}

/// The plain-resolvent iteration with scalar steps `tau`, `sigma`:
/// `x <- J_{tau A}(x - tau C* y)`, over-relax, `y <- J_{sigma Binv}(y + sigma C x~)`.
/// Serves as the closed-form equivalence oracle for scalar quadratic
/// geometries.
pub fn reference_step<F: Scalar>(
    state: &SolverState<F>,
    problem: &ProblemInstance<F>,
    tau: F,
    sigma: F,
) -> Result<SolverState<F>> {
    let iteration = state.n + 1;
    let cty = problem
        .c()
        .adjoint_apply(&state.y)
        .map_err(|e| e.at_step(iteration))?;
    let x_next = problem
        .a()
        .resolvent(tau, &state.x.axpy(-tau, &cty))
        .map_err(|e| e.at_step(iteration))?;
    let x_tilde = x_next.scaled(F::real(2.0)).minus(&state.x);
    let cx = problem
        .c()
        .apply(&x_tilde)
        .map_err(|e| e.at_step(iteration))?;
    let y_next = problem
        .binv()
        .resolvent(sigma, &state.y.axpy(sigma, &cx))
        .map_err(|e| e.at_step(iteration))?;
    Ok(state.advance(x_next, y_next))
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Termination {
    /// Combined fixed-point residual fell below `residual_tol`.
    Converged,
    /// The iteration budget ran out first.
    MaxIter,
    /// An inner solve failed or an iterate left the finite range; the trace
    /// holds everything recorded up to that point.
    Error(String),
}

/// Per-record ergodic averages, kept alongside the metric rows so bound
/// certificates can be re-evaluated at any recorded iteration.
#[derive(Debug, Clone)]
pub struct ErgodicRecord<F> {
    pub n: usize,
    pub x: Vector<F>,
    pub y: Vector<F>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct Trace<F> {
    pub rows: Vec<MetricsRow<F>>,
    pub ergodic: Vec<ErgodicRecord<F>>,
    pub final_state: SolverState<F>,
    pub termination: Termination,
    pub certificate: AlphaCertificate<F>,
    /// False exactly for override runs with an invalid certificate.
    pub certified: bool,
    pub norm_c_estimate: F,
    /// Initial Lyapunov value against the reference, when one exists.
    pub delta0: Option<F>,
}

impl<F: Scalar> Trace<F> {
    /// The recorded row at iteration `n`, if that iteration was recorded.
    pub fn row_at(&self, n: usize) -> Option<&MetricsRow<F>> {
        self.rows.iter().find(|row| row.n == n)
    }

    pub fn ergodic_at(&self, n: usize) -> Option<&ErgodicRecord<F>> {
        self.ergodic.iter().find(|record| record.n == n)
    }
}

/// Runs the iteration from `(x0, y0)` until the combined fixed-point
/// residual drops below `residual_tol` or the budget runs out, recording
/// metric rows every `record_every` iterations and at termination.
/// Deterministic for fixed inputs and seed.
pub fn run<F: Scalar>(
    problem: &ProblemInstance<F>,
    config: &SolverConfig<F>,
    x0: &Vector<F>,
    y0: &Vector<F>,
) -> Result<Trace<F>> {
    config.validate()?;
    if x0.dim() != problem.primal_dim() || config.geometry1.dim() != problem.primal_dim() {
        return Err(Error::DimensionMismatch {
            context: "run primal dimensions",
            expected: problem.primal_dim(),
            actual: x0.dim(),
        });
    }
    if y0.dim() != problem.dual_dim() || config.geometry2.dim() != problem.dual_dim() {
        return Err(Error::DimensionMismatch {
            context: "run dual dimensions",
            expected: problem.dual_dim(),
            actual: y0.dim(),
        });
    }

    let norm_c = problem.c().operator_norm_estimate(
        F::real(NORM_ESTIMATE_TOL),
        NORM_ESTIMATE_CAP,
        config.seed,
    )?;
    let certificate = certify_alpha(&config.geometry1, &config.geometry2, norm_c)?;
    if !certificate.valid && !config.override_certificate {
        return Err(Error::InvalidArgument(format!(
            "step-size certificate is invalid (alpha = {:e}); the geometry moduli must satisfy \
             g1*g2 > |C|^2/4 (for scalar quadratic steps, tau*sigma*|C|^2 < 1). Set \
             override_certificate to run uncertified.",
            certificate.alpha.lossy_f64()
        )));
    }

    let reference = problem.reference();
    let witness = reference.and_then(|_| solution_witness(problem).ok());
    let delta0 = match reference {
        Some(r) => Some(lyapunov(
            problem,
            &r.x,
            &r.y,
            x0,
            y0,
            &config.geometry1,
            &config.geometry2,
        )?),
        None => None,
    };

    let mut state = SolverState::initial(x0.clone(), y0.clone());
    let mut rows: Vec<MetricsRow<F>> = Vec::new();
    let mut ergodic: Vec<ErgodicRecord<F>> = Vec::new();
    let mut termination = Termination::MaxIter;

    for iteration in 1..=config.max_iter {
        match step(&state, problem, config) {
            Ok(next) => state = next,
            Err(err) => {
                if state.n() == 0 {
                    return Err(err);
                }
                termination = Termination::Error(err.to_string());
                break;
            }
        }
        if !state.x.is_finite() || !state.y.is_finite() {
            termination = Termination::Error(format!("non-finite iterate at step {iteration}"));
            break;
        }
        let (primal_residual, dual_residual) =
            fixed_point_residual(problem, &state, &config.geometry1, &config.geometry2)?;
        let converged = primal_residual + dual_residual <= config.residual_tol;
        let last = iteration == config.max_iter;
        if iteration % config.record_every == 0 || converged || last {
            record_row(
                problem,
                config,
                &state,
                witness.as_ref(),
                delta0,
                primal_residual,
                dual_residual,
                &mut rows,
                &mut ergodic,
            )?;
        }
        if converged {
            termination = Termination::Converged;
            break;
        }
    }

    // An error break may leave the last good iterate unrecorded.
    if rows.last().map(|row| row.n) != Some(state.n()) && state.n() >= 1 {
        let (primal_residual, dual_residual) =
            fixed_point_residual(problem, &state, &config.geometry1, &config.geometry2)?;
        record_row(
            problem,
            config,
            &state,
            witness.as_ref(),
            delta0,
            primal_residual,
            dual_residual,
            &mut rows,
            &mut ergodic,
        )?;
    }

    Ok(Trace {
        rows,
        ergodic,
        final_state: state,
        termination,
        certificate,
        certified: certificate.valid,
        norm_c_estimate: norm_c,
        delta0,
    })
}

#[allow(clippy::too_many_arguments)]
fn record_row<F: Scalar>(
    problem: &ProblemInstance<F>,
    config: &SolverConfig<F>,
    state: &SolverState<F>,
    witness: Option<&GapWitness<F>>,
    delta0: Option<F>,
    primal_residual: F,
    dual_residual: F,
    rows: &mut Vec<MetricsRow<F>>,
    ergodic: &mut Vec<ErgodicRecord<F>>,
) -> Result<()> {
    let (avg_x, avg_y) = state.ergodic_average()?;
    let reference = problem.reference();

    let lyapunov_value = match reference {
        Some(r) => Some(lyapunov(
            problem,
            &r.x,
            &r.y,
            &state.x,
            &state.y,
            &config.geometry1,
            &config.geometry2,
        )?),
        None => None,
    };
    let ergodic_gap_lhs = match witness {
        Some(w) => Some(gap_lower_bound(problem, w, &avg_x, &avg_y)?),
        None => None,
    };
    let count = F::from_usize(state.ergodic_count).expect("iteration count fits scalar");
    let ergodic_gap_rhs = delta0.map(|d| d / count);
    let dist_to_ref = reference.map(|r| {
        (state.x.minus(&r.x).norm_sq() + state.y.minus(&r.y).norm_sq()).sqrt()
    });
    // The objective gap is measured at the ergodic averages (the object of
    // the convergence guarantee); infinite values (dual-infeasible averages)
    // are recorded as absent.
    let objective_gap_value = if problem.functions().is_some() {
        let gap = objective_gap(problem, &avg_x, &avg_y)?;
        gap.is_finite().then_some(gap)
    } else {
        None
    };

    rows.push(MetricsRow {
        n: state.n,
        primal_residual,
        dual_residual,
        lyapunov: lyapunov_value,
        ergodic_gap_lhs,
        ergodic_gap_rhs,
        dist_to_ref,
        objective_gap: objective_gap_value,
    });
    ergodic.push(ErgodicRecord {
        n: state.n,
        x: avg_x,
        y: avg_y,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{inner, LinearMap};
    use crate::monotone::MonotoneMap;
    use crate::problems;

    fn v(coords: &[f64]) -> Vector<f64> {
        Vector::new(coords.to_vec()).unwrap()
    }

    /// A = Binv = zero in one dimension with unit coupling.
    fn zero_operator_problem() -> crate::problems::ProblemInstance<f64> {
        crate::problems::ProblemInstance::from_parts(
            MonotoneMap::zero(1).unwrap(),
            MonotoneMap::zero(1).unwrap(),
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
    fn zero_operator_step_is_the_affine_update() {
        let problem = zero_operator_problem();
        let config = quadratic_config(0.5, 0.5, 1, 1);
        let state = SolverState::initial(v(&[1.0]), v(&[0.0]));
        let next = step(&state, &problem, &config).unwrap();
        // x1 = x0 - tau C* y0 = 1, x~1 = 2x1 - x0 = 1, y1 = y0 + sigma C x~1 = 0.5
        assert_eq!(next.x().as_slice(), &[1.0]);
        assert_eq!(next.x_tilde().as_slice(), &[1.0]);
        assert_eq!(next.y().as_slice(), &[0.5]);
        assert_eq!(next.n(), 1);

        let reference = reference_step(&state, &problem, 0.5, 0.5).unwrap();
        assert_eq!(reference.x().as_slice(), next.x().as_slice());
        assert_eq!(reference.y().as_slice(), next.y().as_slice());
    }

    #[test]
    fn soft_threshold_first_step_composition() {
        // A = l1, one reference step from (0, y0): x1 = soft(-tau C* y0, tau lambda).
        let lambda = 0.4;
        let tau = 0.7;
        let problem = crate::problems::ProblemInstance::from_parts(
            MonotoneMap::l1_scaled(2, lambda).unwrap(),
            MonotoneMap::zero(2).unwrap(),
            LinearMap::dense(&[vec![1.0, 0.2], vec![-0.3, 0.8]]).unwrap(),
        )
        .unwrap();
        let y0 = v(&[1.0, -2.0]);
        let state = SolverState::initial(Vector::zeros(2), y0.clone());
        let next = reference_step(&state, &problem, tau, 0.5).unwrap();
        let target = problem.c().adjoint_apply(&y0).unwrap().scaled(-tau);
        for i in 0..2 {
            let expect = (target[i].abs() - tau * lambda).max(0.0) * target[i].signum();
            assert!((next.x()[i] - expect).abs() <= 1e-15);
        }
    }

    #[test]
    fn dual_path_through_inverse_identity_agrees() {
        // Binv given directly vs assembled as inverse_of(B).
        let b_data = v(&[0.4, -0.7]);
        let direct = crate::problems::ProblemInstance::from_parts(
            MonotoneMap::quadratic_shift(v(&[1.0, 0.0])),
            MonotoneMap::quadratic_shift(b_data.scaled(-1.0)),
            LinearMap::identity(2),
        )
        .unwrap();
        let via_inverse = crate::problems::ProblemInstance::from_parts(
            MonotoneMap::quadratic_shift(v(&[1.0, 0.0])),
            MonotoneMap::inverse_of(MonotoneMap::quadratic_shift(b_data.clone())).unwrap(),
            LinearMap::identity(2),
        )
        .unwrap();
        let mut lhs = SolverState::initial(v(&[0.3, -0.2]), v(&[0.1, 0.9]));
        let mut rhs = lhs.clone();
        for _ in 0..50 {
            lhs = reference_step(&lhs, &direct, 0.4, 0.4).unwrap();
            rhs = reference_step(&rhs, &via_inverse, 0.4, 0.4).unwrap();
            for i in 0..2 {
                assert!((lhs.y()[i] - rhs.y()[i]).abs() <= 1e-12);
                assert!((lhs.x()[i] - rhs.x()[i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ergodic_average_tracks_recorded_iterates() {
        let problem = zero_operator_problem();
        let config = quadratic_config(0.5, 0.5, 1, 1);
        let mut state = SolverState::initial(v(&[1.0]), v(&[0.0]));
        assert!(state.ergodic_average().is_err());

        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..3 {
            state = step(&state, &problem, &config).unwrap();
            xs.push(state.x()[0]);
            ys.push(state.y()[0]);
        }
        let (avg_x, avg_y) = state.ergodic_average().unwrap();
        assert!((avg_x[0] - xs.iter().sum::<f64>() / 3.0).abs() <= 1e-15);
        assert!((avg_y[0] - ys.iter().sum::<f64>() / 3.0).abs() <= 1e-15);

        // After one step the average equals the first iterate.
        let one = step(&SolverState::initial(v(&[1.0]), v(&[0.0])), &problem, &config).unwrap();
        let (ax, ay) = one.ergodic_average().unwrap();
        assert_eq!(ax.as_slice(), one.x().as_slice());
        assert_eq!(ay.as_slice(), one.y().as_slice());
    }

    #[test]
    fn constant_sequence_keeps_averages_at_the_fixed_point() {
        // Starting at the reference of toy-quadratic keeps every iterate and
        // every average there.
        let problem = problems::toy_quadratic(
            v(&[1.0]),
            v(&[0.0]),
            LinearMap::dense(&[vec![1.0]]).unwrap(),
        )
        .unwrap();
        let (x_star, y_star) = problem.reference_solution().unwrap();
        let config = quadratic_config(0.5, 0.5, 1, 1);
        let mut state = SolverState::initial(x_star.clone(), y_star.clone());
        for _ in 0..5 {
            state = step(&state, &problem, &config).unwrap();
            let (ax, ay) = state.ergodic_average().unwrap();
            assert!((ax[0] - x_star[0]).abs() <= 1e-14);
            assert!((ay[0] - y_star[0]).abs() <= 1e-14);
        }
    }

    #[test]
    fn run_toy_quadratic_reaches_the_oracle() {
        let problem = problems::toy_quadratic(
            v(&[1.0]),
            v(&[0.0]),
            LinearMap::dense(&[vec![1.0]]).unwrap(),
        )
        .unwrap();
        let tau = 0.9; // |C| = 1
        let mut config = quadratic_config(tau, tau, 1, 1);
        config.max_iter = 10_000;
        config.residual_tol = 1e-13;
        let trace = run(&problem, &config, &Vector::zeros(1), &Vector::zeros(1)).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert!(trace.certified);
        let (x_star, y_star) = problem.reference_solution().unwrap();
        let dist = (trace.final_state.x().minus(&x_star).norm_sq()
            + trace.final_state.y().minus(&y_star).norm_sq())
        .sqrt();
        assert!(dist <= 1e-8, "distance {dist}");
        assert!(!trace.rows.is_empty());
        let last = trace.rows.last().unwrap();
        assert_eq!(last.n, trace.final_state.n());
    }

    #[test]
    fn run_skew_inclusion_converges_to_zero() {
        let problem = problems::skew_inclusion::<f64>(4, 7).unwrap();
        let norm_c = problem
            .c()
            .operator_norm_estimate(1e-10, 10_000, 0)
            .unwrap();
        let step_size = 0.9 / norm_c;
        let mut config = quadratic_config(step_size, step_size, 4, 4);
        config.max_iter = 50_000;
        config.residual_tol = 1e-12;
        let x0 = Vector::constant(4, 1.0);
        let y0 = Vector::constant(4, -0.5);
        let trace = run(&problem, &config, &x0, &y0).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert!(trace.final_state.x().norm() <= 1e-6);
        assert!(trace.final_state.y().norm() <= 1e-6);
    }

    #[test]
    fn run_rejects_invalid_certificate_without_override() {
        let problem = zero_operator_problem();
        // tau * sigma * |C|^2 = 4.
        let config = quadratic_config(2.0, 2.0, 1, 1);
        assert!(matches!(
            run(&problem, &config, &Vector::zeros(1), &Vector::zeros(1)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn uncertified_override_produces_a_flagged_trace() {
        let problem = zero_operator_problem();
        let mut config = quadratic_config(2.0, 2.0, 1, 1);
        config.override_certificate = true;
        config.max_iter = 50;
        config.record_every = 1;
        let trace = run(&problem, &config, &v(&[1.0]), &v(&[0.0])).unwrap();
        assert!(!trace.certified);
        assert!(!trace.certificate.valid);
        assert_eq!(trace.termination, Termination::MaxIter);
        assert_eq!(trace.rows.len(), 50);
    }

    #[test]
    fn lyapunov_rows_decay_and_dominate_distances_on_certified_runs() {
        let problem = problems::lasso(
            LinearMap::dense(&[vec![1.0, 0.1], vec![-0.2, 0.9]]).unwrap(),
            v(&[1.0, -0.4]),
            0.3,
        )
        .unwrap();
        let norm_c = problem
            .c()
            .operator_norm_estimate(1e-10, 10_000, 0)
            .unwrap();
        let step_size = 0.9 / norm_c;
        let mut config = quadratic_config(step_size, step_size, 2, 2);
        config.max_iter = 2_000;
        config.record_every = 1;
        config.residual_tol = 1e-14;
        let trace = run(&problem, &config, &Vector::zeros(2), &Vector::zeros(2)).unwrap();
        let delta0 = trace.delta0.unwrap();
        let alpha = trace.certificate.alpha;
        let (x_star, y_star) = problem.reference_solution().unwrap();

        let mut previous = delta0;
        for (row, record) in trace.rows.iter().zip(&trace.ergodic) {
            let lyap = row.lyapunov.unwrap();
            assert!(lyap <= previous + 1e-10 * (1.0 + delta0), "n = {}", row.n);
            previous = lyap;
            // Positivity against the certificate.
            let dist = row.dist_to_ref.unwrap();
            assert!(lyap >= alpha * dist * dist - 1e-10);
            // Boundedness of the ergodic pair.
            let ergodic_gap = record.x.minus(&x_star).norm_sq()
                + record.y.minus(&y_star).norm_sq();
            assert!(ergodic_gap <= delta0 / alpha + 1e-8);
        }
    }

    #[test]
    fn step_witnesses_are_monotone_consistent_against_the_solution() {
        let problem = problems::toy_quadratic(
            v(&[1.0, -0.5]),
            v(&[0.3]),
            LinearMap::dense(&[vec![1.0, 0.4]]).unwrap(),
        )
        .unwrap();
        let (x_star, y_star) = problem.reference_solution().unwrap();
        let config = quadratic_config(0.6, 0.6, 2, 1);
        let mut state = SolverState::initial(Vector::zeros(2), Vector::zeros(1));
        for _ in 0..200 {
            let next = step(&state, &problem, &config).unwrap();
            // u^ = -C* y^n - grad_x D1(x^{n+1}, x^n) is in A x^{n+1}.
            let u_hat = problem
                .c()
                .adjoint_apply(state.y())
                .unwrap()
                .scaled(-1.0)
                .minus(
                    &config
                        .geometry1
                        .grad_psi(next.x())
                        .unwrap()
                        .minus(&config.geometry1.grad_psi(state.x()).unwrap()),
                );
            let pairing = inner(
                &u_hat.plus(&problem.c().adjoint_apply(&y_star).unwrap()),
                &next.x().minus(&x_star),
            )
            .unwrap();
            assert!(pairing >= -1e-9);
            state = next;
        }
    }
}
