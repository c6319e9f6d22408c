//! Independently testable diagnostics behind the scheme's error analysis:
//! the implicit piecewise-linear interpolant (matching slab averages rather
//! than nodal values), the alternating-sum identity for its nodal error,
//! and the nonnegativity of the discrete fractional energy
//! ∫ (I^{1−α}v′)·v′ dt for piecewise-linear v.
//!
//! All of these are scalar-valued; the vector-valued statements they back
//! are linear and act componentwise.

use crate::kernel::{omega, step_weights, GradedMesh};
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Continuous piecewise-linear û with ∫_{Iₙ} û dt = ∫_{Iₙ} v dt for every
/// slab and û(0) = v(0). Determined by the recursion
/// ûⁿ = 2·(slab integral)/τₙ − ûⁿ⁻¹.
#[derive(Debug, Clone)]
pub struct ImplicitInterpolant {
    pub mesh: GradedMesh,
    /// Nodal values û⁰..û^N.
    pub values: Vec<f64>,
}

/// Build the implicit interpolant from the slab integrals ∫_{Iₙ} v dt
/// (not averages) and the initial value v(0).
pub fn implicit_interpolant(
    mesh: &GradedMesh,
    slab_integrals: &[f64],
    v0: f64,
) -> Result<ImplicitInterpolant> {
    if slab_integrals.len() != mesh.n_steps {
        return Err(Error::Length(format!(
            "implicit interpolant: {} slab integrals for {} steps",
            slab_integrals.len(),
            mesh.n_steps
        )));
    }
    let mut values = Vec::with_capacity(mesh.n_steps + 1);
    values.push(v0);
    for (n, &integral) in slab_integrals.iter().enumerate() {
        let prev = values[n];
        values.push(2.0 * integral / mesh.tau[n] - prev);
    }
    Ok(ImplicitInterpolant {
        mesh: mesh.clone(),
        values,
    })
}

/// Both sides of the alternating-sum identity for the implicit
/// interpolation error at tₙ:
///
/// ```text
/// lhs = v(tₙ) − ûⁿ,
/// rhs = Σ_{j≤n} (−1)^{n+j+1} Δⱼ,   Δⱼ = (2/τⱼ)∫_{Iⱼ}(v − v_I) dt,
/// ```
///
/// with v_I the nodal interpolant. Both slab integrals are evaluated by
/// adaptive quadrature at 1e−12 so the identity is not polluted by input
/// quadrature error.
pub fn psi_alternating_sum<F: Fn(f64) -> f64>(
    mesh: &GradedMesh,
    v: F,
    n: usize,
) -> (f64, f64) {
    assert!(n >= 1 && n <= mesh.n_steps);
    let tol = 1e-12;
    let integrals: Vec<f64> = (1..=n)
        .map(|j| {
            let (a, b) = mesh.slab(j);
            adaptive_simpson(&|t| v(t), a, b, tol)
        })
        .collect();
    let mut hat_prev = v(0.0);
    for (j, &integral) in integrals.iter().enumerate() {
        hat_prev = 2.0 * integral / mesh.tau[j] - hat_prev;
    }
    let lhs = v(mesh.t[n]) - hat_prev;

    let mut rhs = 0.0;
    for j in 1..=n {
        let (a, b) = mesh.slab(j);
        let va = v(a);
        let vb = v(b);
        let tau = mesh.tau[j - 1];
        let interp_defect = adaptive_simpson(
            &|t| {
                let theta = (t - a) / tau;
                v(t) - ((1.0 - theta) * va + theta * vb)
            },
            a,
            b,
            tol,
        );
        let delta = 2.0 / tau * interp_defect;
        let sign = if (n + j + 1) % 2 == 0 { 1.0 } else { -1.0 };
        rhs += sign * delta;
    }
    (lhs, rhs)
}

/// Exact value of ∫₀^{t_N} (I^{1−α}v′)(t)·v′(t) dt for the piecewise-linear
/// v with the given nodal values, via the closed-form ω_{3−α} differences
/// (the same algebra as the step weights):
///
/// ```text
/// Σₙ mₙ ( ω_{3−α}(τₙ)·mₙ + Σ_{j<n} bₙⱼ mⱼ ),   mⱼ = Wʲ/τⱼ.
/// ```
///
/// Nonnegative for 0 < α ≤ 1; at α = 1 it reduces to Σ τₙ mₙ².
pub fn frac_energy(mesh: &GradedMesh, alpha: f64, nodal: &[f64]) -> f64 {
    assert!(
        alpha > 0.0 && alpha <= 1.0,
        "frac_energy: alpha must lie in (0,1], got {alpha}"
    );
    assert_eq!(nodal.len(), mesh.n_steps + 1, "need v^0..v^N nodal values");
    let slopes: Vec<f64> = (1..=mesh.n_steps)
        .map(|j| (nodal[j] - nodal[j - 1]) / mesh.tau[j - 1])
        .collect();
    let mut acc = 0.0;
    for n in 1..=mesh.n_steps {
        let w = step_weights(mesh, alpha, n);
        let mut inner = omega(3.0 - alpha, mesh.tau[n - 1]) * slopes[n - 1];
        for j in 1..n {
            inner += w.b[j - 1] * slopes[j - 1];
        }
        acc += slopes[n - 1] * inner;
    }
    acc
}
