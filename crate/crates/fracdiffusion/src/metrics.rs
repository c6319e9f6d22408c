//! Norms and convergence-rate bookkeeping for the benchmark runs.
//!
//! The L²(Ω) norm is approximated by the two-point composite Gauss rule on
//! the spatial grid. The time-sup error E_τ is the maximum over the
//! sampling times t_{i,j} = t_{j−1} + i·τⱼ/3, i = 1..3, of the spatial L²
//! error; the discrete solution enters as a genuine piecewise-linear
//! function (interpolated in time on its slab, interpolated in space at
//! the Gauss points), not nodally. Empirical rates are
//! CR = log₂(E_τ/E_{τ/2}) under doubling of N.

use crate::exact::SeriesSolution;
use crate::fem::SpatialGrid;
use crate::stepper::Trajectory;
use crate::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// √(Σ_elements Σ_{2 Gauss pts} w·g²) on the grid.
pub fn l2_space_norm<G: Fn(f64) -> f64>(grid: &SpatialGrid, g: G) -> f64 {
    let h = grid.h;
    let off = 0.5 * h / SQRT_3;
    let mut acc = 0.0;
    for e in 1..=grid.m {
        let mid = 0.5 * (grid.x[e - 1] + grid.x[e]);
        for x in [mid - off, mid + off] {
            let v = g(x);
            acc += 0.5 * h * v * v;
        }
    }
    acc.sqrt()
}

/// L²(Ω) distance at one time between the P1 function with the given
/// interior coefficients and the series solution.
pub fn l2_error_at(
    grid: &SpatialGrid,
    coeffs: &[f64],
    sol: &SeriesSolution,
    t: f64,
) -> Result<f64> {
    assert_eq!(coeffs.len(), grid.interior_len());
    let h = grid.h;
    let off = 0.5 * h / SQRT_3;
    let mut xs = Vec::with_capacity(2 * grid.m);
    for e in 1..=grid.m {
        let mid = 0.5 * (grid.x[e - 1] + grid.x[e]);
        xs.push(mid - off);
        xs.push(mid + off);
    }
    let reference = sol.eval_profile(&xs, t)?;
    let mut acc = 0.0;
    for e in 1..=grid.m {
        let cl = if e >= 2 { coeffs[e - 2] } else { 0.0 };
        let cr = if e <= grid.m - 1 { coeffs[e - 1] } else { 0.0 };
        for (k, &x) in xs[2 * e - 2..2 * e].iter().enumerate() {
            let theta = (x - grid.x[e - 1]) / h;
            let p1 = (1.0 - theta) * cl + theta * cr;
            let d = p1 - reference[2 * e - 2 + k];
            acc += 0.5 * h * d * d;
        }
    }
    Ok(acc.sqrt())
}

/// E_τ: max over the 3N sampling times of the spatial L² error.
pub fn linf_l2_error(traj: &Trajectory, sol: &SeriesSolution) -> Result<f64> {
    let mesh = &traj.mesh;
    let mut worst = 0.0f64;
    for j in 1..=mesh.n_steps {
        let (t0, t1) = mesh.slab(j);
        let tau = mesh.tau[j - 1];
        for i in 1..=3usize {
            let theta = i as f64 / 3.0;
            let t = if i == 3 { t1 } else { t0 + theta * tau };
            let coeffs = traj.interpolate(j, theta);
            worst = worst.max(l2_error_at(&traj.grid, &coeffs, sol, t)?);
        }
    }
    Ok(worst)
}

/// ‖u − U‖_{L²(J;L²)}: two-point Gauss in time per slab of the squared
/// spatial error.
pub fn l2_l2_error(traj: &Trajectory, sol: &SeriesSolution) -> Result<f64> {
    let mesh = &traj.mesh;
    let goff = 0.5 / SQRT_3;
    let mut acc = 0.0;
    for j in 1..=mesh.n_steps {
        let (t0, _) = mesh.slab(j);
        let tau = mesh.tau[j - 1];
        for theta in [0.5 - goff, 0.5 + goff] {
            let t = t0 + theta * tau;
            let coeffs = traj.interpolate(j, theta);
            let d = l2_error_at(&traj.grid, &coeffs, sol, t)?;
            acc += 0.5 * tau * d * d;
        }
    }
    Ok(acc.sqrt())
}

/// Nodal errors ‖Uⁿ − u(tₙ)‖ for n = 1..N (plot data).
pub fn nodal_l2_errors(traj: &Trajectory, sol: &SeriesSolution) -> Result<Vec<f64>> {
    (1..=traj.mesh.n_steps)
        .map(|n| l2_error_at(&traj.grid, &traj.u[n], sol, traj.mesh.t[n]))
        .collect()
}

/// CR = log₂(E_coarse/E_fine); both errors must be positive.
pub fn convergence_rate(e_coarse: f64, e_fine: f64) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) {
        return Err(Error::Domain(format!(
            "convergence rate needs positive errors, got {e_coarse} and {e_fine}"
        )));
    }
    Ok((e_coarse / e_fine).log2())
}

/// One line of a convergence table.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub n_steps: usize,
    pub gamma: f64,
    pub e_tau: f64,
    pub e_l2: f64,
    /// Rate w.r.t. the previous row of the same γ; absent on its first row.
    pub cr: Option<f64>,
    pub cr_l2: Option<f64>,
}

/// Per-(N, γ) error values and empirical rates.
#[derive(Debug, Clone, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    /// Build from raw (N, γ, E_τ, E_L2) tuples; rates are attached within
    /// each γ group, in the given order, where N exactly doubles.
    pub fn from_errors(entries: &[(usize, f64, f64, f64)]) -> Result<Self> {
        let mut rows: Vec<ReportRow> = Vec::with_capacity(entries.len());
        for &(n_steps, gamma, e_tau, e_l2) in entries {
            let prev = rows
                .iter()
                .rev()
                .find(|r: &&ReportRow| r.gamma == gamma)
                .map(|r| (r.n_steps, r.e_tau, r.e_l2));
            let (cr, cr_l2) = match prev {
                Some((n_prev, e_prev, e2_prev)) if n_steps == 2 * n_prev => (
                    Some(convergence_rate(e_prev, e_tau)?),
                    Some(convergence_rate(e2_prev, e_l2)?),
                ),
                _ => (None, None),
            };
            rows.push(ReportRow {
                n_steps,
                gamma,
                e_tau,
                e_l2,
                cr,
                cr_l2,
            });
        }
        Ok(ConvergenceReport { rows })
    }
}
