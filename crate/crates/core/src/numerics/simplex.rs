use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients and stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Iteration budget for each run (the initial run and every restart).
    pub max_iterations: usize,
    /// Largest allowed spread `f(worst) - f(best)` at convergence.
    pub spread_tolerance: f64,
    /// Largest allowed distance (max-norm) from the best vertex to any other.
    pub simplex_tolerance: f64,
    /// Fresh simplices built around the point found by the previous run.
    pub restarts: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iterations: 5000,
            spread_tolerance: 1e-12,
            simplex_tolerance: 1e-10,
            restarts: 1,
        }
    }
}

impl SimplexConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reflection > 0.0) {
            return Err(Error::SimplexConfig("reflection must be > 0"));
        }
        if !(self.expansion > 1.0) {
            return Err(Error::SimplexConfig("expansion must be > 1"));
        }
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return Err(Error::SimplexConfig("contraction must lie in (0, 1)"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::SimplexConfig("shrink must lie in (0, 1)"));
        }
        if !(self.spread_tolerance > 0.0) || !(self.simplex_tolerance > 0.0) {
            return Err(Error::SimplexConfig("tolerances must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeResult {
    pub argmin: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

/// Unconstrained Nelder-Mead minimization.
///
/// Non-finite objective values met during the search count as `+inf`, so
/// such moves are always rejected. The returned value never exceeds the
/// objective at `initial`.
pub fn nelder_mead<F>(objective: F, initial: &[f64], config: &SimplexConfig) -> Result<MinimizeResult>
where
    F: Fn(&[f64]) -> f64,
{
    config.validate()?;
    if initial.is_empty() {
        return Err(Error::domain("dimension", 0.0, ">= 1"));
    }
    let f0 = objective(initial);
    if !f0.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut best = Vertex {
        x: initial.to_vec(),
        f: f0,
    };
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=config.restarts {
        let (run_best, run_iters, run_converged) = run(&eval, best, config);
        best = run_best;
        iterations += run_iters;
        converged = run_converged;
    }

    Ok(MinimizeResult {
        argmin: best.x,
        objective_value: best.f,
        iterations,
        converged,
    })
}

fn initial_simplex<F: Fn(&[f64]) -> f64>(eval: &F, start: Vertex) -> Vec<Vertex> {
    let n = start.x.len();
    let mut simplex = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut x = start.x.clone();
        let step = if x[i].abs() > 1.0 { 0.1 * x[i].abs() } else { 0.1 };
        x[i] += step;
        let f = eval(&x);
        simplex.push(Vertex { x, f });
    }
    simplex.insert(0, start);
    simplex
}

fn run<F: Fn(&[f64]) -> f64>(eval: &F, start: Vertex, config: &SimplexConfig) -> (Vertex, usize, bool) {
    let n = start.x.len();
    let mut simplex = initial_simplex(eval, start);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iterations {
        // stable sort keeps the earlier vertex first on ties
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        if has_converged(&simplex, config) {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let worst_f = simplex[n].f;
        let second_worst_f = simplex[n - 1].f;
        let best_f = simplex[0].f;

        let along = |coef: f64, through: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(through)
                .map(|(c, t)| c + coef * (t - c))
                .collect()
        };

        let xr = along(-config.reflection, &simplex[n].x);
        let fr = eval(&xr);

        if fr < best_f {
            let xe = along(config.expansion, &xr);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { Vertex { x: xe, f: fe } } else { Vertex { x: xr, f: fr } };
            continue;
        }
        if fr < second_worst_f {
            simplex[n] = Vertex { x: xr, f: fr };
            continue;
        }
        if fr < worst_f {
            let xc = along(config.contraction, &xr);
            let fc = eval(&xc);
            if fc <= fr {
                simplex[n] = Vertex { x: xc, f: fc };
                continue;
            }
        } else {
            let xc = along(config.contraction, &simplex[n].x);
            let fc = eval(&xc);
            if fc < worst_f {
                simplex[n] = Vertex { x: xc, f: fc };
                continue;
            }
        }

        // shrink toward the best vertex
        let best_x = simplex[0].x.clone();
        for v in simplex.iter_mut().skip(1) {
            for (xi, bi) in v.x.iter_mut().zip(&best_x) {
                *xi = bi + config.shrink * (*xi - bi);
            }
            v.f = eval(&v.x);
        }
    }

    simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
    let best = simplex.swap_remove(0);
    (best, iterations, converged)
}

fn has_converged(sorted: &[Vertex], config: &SimplexConfig) -> bool {
    let best = &sorted[0];
    let spread = sorted[sorted.len() - 1].f - best.f;
    if !(spread < config.spread_tolerance) {
        return false;
    }
    let diameter = sorted[1..]
        .iter()
        .flat_map(|v| v.x.iter().zip(&best.x).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    diameter < config.simplex_tolerance
}
