//! Time-discretization kernel: fractional power kernels ω_μ, the graded
//! time mesh tₙ = (nτ)^γ, and the history weights that turn the slab
//! integral of the Caputo derivative of a piecewise-linear function into a
//! weighted sum of increments.
//!
//! With aₙⱼ = ω_{3−α}(tₙ−t_{j−1}) − ω_{3−α}(t_{n−1}−t_{j−1}) and
//! bₙⱼ = aₙⱼ − a_{n,j+1},
//!
//! ```text
//! ∫_{Iₙ} ∂ₜᵅ v dt  =  (τₙ^{2−α}/Γ(3−α)) (Wⁿ/τₙ)  +  Σ_{j<n} bₙⱼ Wʲ/τⱼ
//! ```
//!
//! for any continuous piecewise-linear v with increments Wʲ = v(tⱼ)−v(t_{j−1}).

use crate::special::gamma;
use crate::{Error, Result};

/// ω_μ(t) = t^{μ−1}/Γ(μ).
///
/// Panics if μ ≤ 0, t < 0, or t = 0 with μ < 1 (the kernel is singular
/// there; the weight construction never evaluates it in that range).
pub fn omega(mu: f64, t: f64) -> f64 {
    assert!(mu > 0.0, "omega: order mu must be positive, got {mu}");
    assert!(t >= 0.0, "omega: t must be nonnegative, got {t}");
    if t == 0.0 {
        assert!(mu >= 1.0, "omega: singular kernel at t = 0 for mu = {mu} < 1");
        return if mu == 1.0 { 1.0 } else { 0.0 };
    }
    t.powf(mu - 1.0) / gamma(mu)
}

/// x^p − y^p for x > y ≥ 0, p ∈ (0, 2], without subtractive cancellation:
/// y^p·expm1(p·ln(x/y)). Late-time weights are small differences of large
/// values, which the naive form loses digits on.
fn pow_diff(p: f64, x: f64, y: f64) -> f64 {
    debug_assert!(x >= y && y >= 0.0);
    if y == 0.0 {
        x.powf(p)
    } else {
        y.powf(p) * f64::exp_m1(p * (x / y).ln())
    }
}

/// Graded time mesh tₙ = (nτ)^γ with τ = T^{1/γ}/N.
#[derive(Debug, Clone)]
pub struct GradedMesh {
    /// Final time T.
    pub t_final: f64,
    /// Number of steps N.
    pub n_steps: usize,
    /// Grading exponent γ ≥ 1 (γ = 1 is the uniform mesh).
    pub gamma: f64,
    /// Time levels t₀..t_N.
    pub t: Vec<f64>,
    /// Step sizes τₙ = tₙ − t_{n−1}, n = 1..N.
    pub tau: Vec<f64>,
}

impl GradedMesh {
    pub fn new(t_final: f64, n_steps: usize, grading: f64) -> Result<Self> {
        if !(t_final > 0.0) {
            return Err(Error::Domain(format!(
                "graded mesh: final time must be positive, got {t_final}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Domain("graded mesh: need at least one step".into()));
        }
        if !(grading >= 1.0) {
            return Err(Error::Domain(format!(
                "graded mesh: grading exponent must be >= 1, got {grading}"
            )));
        }
        // (n/N)^γ · T is algebraically (nτ)^γ with τ = T^{1/γ}/N and hits
        // t_N = T exactly.
        let nf = n_steps as f64;
        let t: Vec<f64> = (0..=n_steps)
            .map(|k| t_final * (k as f64 / nf).powf(grading))
            .collect();
        for k in 1..=n_steps {
            if !(t[k] > t[k - 1]) {
                return Err(Error::Domain(format!(
                    "graded mesh: time levels not strictly increasing at n = {k} \
                     (grading {grading} too strong for {n_steps} steps)"
                )));
            }
        }
        let tau = (1..=n_steps).map(|k| t[k] - t[k - 1]).collect();
        Ok(GradedMesh {
            t_final,
            n_steps,
            gamma: grading,
            t,
            tau,
        })
    }

    /// The slab Iₙ = (t_{n−1}, tₙ) for 1 ≤ n ≤ N.
    pub fn slab(&self, n: usize) -> (f64, f64) {
        assert!(n >= 1 && n <= self.n_steps, "slab index {n} out of range");
        (self.t[n - 1], self.t[n])
    }
}

/// Weights of one time step: the scaled step size τ_{n,α} = Γ(3−α)τₙ^α and
/// the history weights bₙⱼ, j = 1..n−1 (empty for the first step).
#[derive(Debug, Clone)]
pub struct StepWeights {
    pub n: usize,
    pub tau_n_alpha: f64,
    pub b: Vec<f64>,
}

/// Weights of step n on the given mesh, for 0 < α ≤ 1 and 1 ≤ n ≤ N.
///
/// At α = 1 the ω₂ differences telescope, so every bₙⱼ = 0 and
/// τ_{n,1} = τₙ; this is returned exactly.
pub fn step_weights(mesh: &GradedMesh, alpha: f64, n: usize) -> StepWeights {
    assert!(
        alpha > 0.0 && alpha <= 1.0,
        "step_weights: alpha must lie in (0,1], got {alpha}"
    );
    assert!(
        n >= 1 && n <= mesh.n_steps,
        "step_weights: step index {n} out of 1..={}",
        mesh.n_steps
    );
    let tau_n = mesh.tau[n - 1];
    if alpha == 1.0 {
        return StepWeights {
            n,
            tau_n_alpha: tau_n,
            b: vec![0.0; n - 1],
        };
    }
    let g2 = gamma(2.0 - alpha);
    let g3 = gamma(3.0 - alpha);
    let p = 2.0 - alpha;
    let tn = mesh.t[n];
    let tn1 = mesh.t[n - 1];
    // running a_{n,j}·Γ(3−α), j = 1..=n
    let mut prev = pow_diff(p, tn - mesh.t[0], tn1 - mesh.t[0]);
    let mut b = Vec::with_capacity(n - 1);
    for j in 1..n {
        let next = pow_diff(p, tn - mesh.t[j], tn1 - mesh.t[j]);
        let tau_j = mesh.tau[j - 1];
        let gap = tn1 - mesh.t[j];
        if tau_j <= 1e-4 * gap {
            // bₙⱼ = ∫_{Iⱼ}[ω_{2−α}(tₙ−s) − ω_{2−α}(t_{n−1}−s)] ds. When Iⱼ is
            // this much shorter than its distance from the current slab the
            // double difference of ω_{3−α} sits entirely in roundoff (the
            // strongest gradings reach τ₁ ~ 1e-16), while two-point Gauss on
            // the integrand above is exact beyond machine precision.
            let mid = 0.5 * (mesh.t[j - 1] + mesh.t[j]);
            let off = 0.5 * tau_j / SQRT_3;
            let bracket = |s: f64| pow_diff(1.0 - alpha, tn - s, tn1 - s);
            b.push(tau_j * 0.5 * (bracket(mid - off) + bracket(mid + off)) / g2);
        } else {
            b.push((prev - next) / g3);
        }
        prev = next;
    }
    StepWeights {
        n,
        tau_n_alpha: g3 * tau_n.powf(alpha),
        b,
    }
}

const SQRT_3: f64 = 1.732_050_807_568_877_2;

impl StepWeights {
    /// ∫_{Iₙ} ∂ₜᵅ v dt for the piecewise-linear v with the given increments
    /// W¹..Wⁿ (n must equal `self.n`).
    pub fn slab_integral(&self, mesh: &GradedMesh, increments: &[f64]) -> f64 {
        assert_eq!(increments.len(), self.n, "need increments W^1..W^n");
        let n = self.n;
        let tau_n = mesh.tau[n - 1];
        // (τₙ^{2−α}/Γ(3−α))·(Wⁿ/τₙ) = τₙ·Wⁿ/τ_{n,α}
        let mut acc = tau_n * increments[n - 1] / self.tau_n_alpha;
        for j in 1..n {
            acc += self.b[j - 1] * increments[j - 1] / mesh.tau[j - 1];
        }
        acc
    }
}

/// ∫_{Iₙ} ∂ₜᵅ v dt where n = `increments.len()`; the quadrature embodied in
/// the elliptic step of the scheme, exposed scalar-valued for testing.
pub fn caputo_slab_integral(mesh: &GradedMesh, alpha: f64, increments: &[f64]) -> Result<f64> {
    let n = increments.len();
    if n == 0 || n > mesh.n_steps {
        return Err(Error::Length(format!(
            "caputo_slab_integral: got {n} increments for a mesh with {} steps",
            mesh.n_steps
        )));
    }
    let w = step_weights(mesh, alpha, n);
    Ok(w.slab_integral(mesh, increments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    const SQRT_PI: f64 = 1.7724538509055160273;
    /// Γ(2.5) = (3/4)√π
    const GAMMA_2_5: f64 = 0.75 * SQRT_PI;

    fn assert_rel(value: f64, expected: f64, tol: f64) {
        let scale = expected.abs().max(1e-300);
        assert!(
            ((value - expected) / scale).abs() <= tol,
            "value {value:e} vs expected {expected:e} (tol {tol:e})"
        );
    }

    /// Uniform unit-step mesh t_k = k (T = N, γ = 1).
    fn unit_mesh(n: usize) -> GradedMesh {
        GradedMesh::new(n as f64, n, 1.0).unwrap()
    }

    #[test]
    fn omega_closed_forms() {
        assert_rel(omega(1.0, 5.0), 1.0, 1e-15);
        assert_rel(omega(2.0, 3.0), 3.0, 1e-15);
        // 2^{3/2}/Γ(5/2), Γ(5/2) = (3/4)√π
        assert_rel(omega(2.5, 2.0), 2.0f64.powf(1.5) / GAMMA_2_5, 1e-14);
        assert_eq!(omega(2.0, 0.0), 0.0);
        assert_eq!(omega(1.0, 0.0), 1.0);
    }

    #[test]
    #[should_panic(expected = "singular kernel")]
    fn omega_rejects_singular_origin() {
        omega(0.5, 0.0);
    }

    #[test]
    fn graded_mesh_uniform_and_quadratic() {
        let m = GradedMesh::new(1.0, 4, 1.0).unwrap();
        assert_eq!(m.t, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let m = GradedMesh::new(1.0, 4, 2.0).unwrap();
        assert_eq!(m.t, vec![0.0, 0.0625, 0.25, 0.5625, 1.0]);
        let m = GradedMesh::new(1.0, 8, 3.0).unwrap();
        assert_rel(m.t[1], 1.953125e-3, 1e-15);
        assert_eq!(m.t[8], 1.0);
    }

    #[test]
    fn graded_mesh_rejects_bad_arguments() {
        assert!(GradedMesh::new(1.0, 0, 1.0).is_err());
        assert!(GradedMesh::new(1.0, 4, 0.9).is_err());
        assert!(GradedMesh::new(0.0, 4, 1.0).is_err());
        assert!(GradedMesh::new(-1.0, 4, 2.0).is_err());
    }

    proptest! {
        // mesh property inequalities for n ≥ 2, plus the defining formula
        #[test]
        fn graded_mesh_invariants(
            t_final in 0.1f64..10.0,
            n_steps in 1usize..=200,
            grading in 1.0f64..=5.0,
        ) {
            let m = GradedMesh::new(t_final, n_steps, grading).unwrap();
            let tau0 = t_final.powf(1.0 / grading) / n_steps as f64;
            prop_assert_eq!(m.t[0], 0.0);
            prop_assert_eq!(m.t[n_steps], t_final);
            for n in 1..=n_steps {
                let direct = ((n as f64) * tau0).powf(grading);
                prop_assert!((m.t[n] - direct).abs() <= 1e-12 * direct.max(1e-300));
            }
            let slack = 1.0 + 1e-10;
            for n in 2..=n_steps {
                prop_assert!(m.t[n] <= 2.0f64.powf(grading) * m.t[n - 1] * slack);
                let lo = grading * tau0 * m.t[n - 1].powf(1.0 - 1.0 / grading);
                let hi = grading * tau0 * m.t[n].powf(1.0 - 1.0 / grading);
                prop_assert!(m.tau[n - 1] >= lo / slack);
                prop_assert!(m.tau[n - 1] <= hi * slack);
            }
        }
    }

    #[test]
    fn weights_vanish_in_the_classical_limit() {
        let mesh = GradedMesh::new(2.0, 6, 3.0).unwrap();
        for n in 1..=6 {
            let w = step_weights(&mesh, 1.0, n);
            assert_eq!(w.tau_n_alpha, mesh.tau[n - 1]);
            assert!(w.b.iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn weights_on_the_unit_step_mesh() {
        // α = 1/2: a_{2,1} = (2^{3/2}−1)/Γ(5/2), a_{2,2} = 1/Γ(5/2)
        let mesh = unit_mesh(4);
        let w = step_weights(&mesh, 0.5, 2);
        assert_eq!(w.b.len(), 1);
        assert_rel(w.b[0], (2.0f64.powf(1.5) - 2.0) / GAMMA_2_5, 1e-13);
        assert_rel(w.b[0], 0.62319, 1e-4);

        let w = step_weights(&mesh, 0.5, 3);
        let b31 = (3.0f64.powf(1.5) - 2.0 * 2.0f64.powf(1.5) + 1.0) / GAMMA_2_5;
        assert_rel(w.b[0], b31, 1e-13);
    }

    #[test]
    fn weights_are_positive_for_fractional_orders() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let grading = rng.gen_range(1.0..=5.0);
            let n_steps = rng.gen_range(2..=200usize);
            let alpha = rng.gen_range(0.05..0.999);
            let t_final = rng.gen_range(0.2..5.0);
            let mesh = GradedMesh::new(t_final, n_steps, grading).unwrap();
            let n = rng.gen_range(2..=n_steps);
            let w = step_weights(&mesh, alpha, n);
            for (j, &b) in w.b.iter().enumerate() {
                assert!(b > 0.0, "b[{j}] = {b:e} not positive (n={n}, alpha={alpha})");
            }
            // a_{n,j} > 0 directly from the ω differences
            for j in 1..=n {
                let a = omega(3.0 - alpha, mesh.t[n] - mesh.t[j - 1])
                    - omega(3.0 - alpha, mesh.t[n - 1] - mesh.t[j - 1]);
                assert!(a > 0.0, "a[{j}] not positive");
            }
        }
    }

    #[test]
    fn slab_integral_trivial_cases() {
        let mesh = GradedMesh::new(1.0, 5, 2.0).unwrap();
        assert_eq!(
            caputo_slab_integral(&mesh, 0.5, &[0.0, 0.0, 0.0]).unwrap(),
            0.0
        );
        // α = 1: ∫_{Iₙ} v' dt = Wⁿ
        let incr = [0.3, -0.7, 0.2, 0.9];
        assert_rel(caputo_slab_integral(&mesh, 1.0, &incr).unwrap(), 0.9, 1e-15);
        assert!(caputo_slab_integral(&mesh, 0.5, &[]).is_err());
        assert!(caputo_slab_integral(&mesh, 0.5, &[0.0; 6]).is_err());
    }

    #[test]
    fn slab_integral_of_linear_v() {
        // v(t) = t on t_k = k, α = 1/2, n = 2: exact value ω_{5/2}(2) − ω_{5/2}(1)
        let mesh = unit_mesh(2);
        let val = caputo_slab_integral(&mesh, 0.5, &[1.0, 1.0]).unwrap();
        assert_rel(val, (2.0f64.powf(1.5) - 1.0) / GAMMA_2_5, 1e-13);
    }

    #[test]
    fn slab_integral_telescopes_for_linear_v() {
        // ∂ₜᵅ t = ω_{2−α}(t), so ∫_{Iₙ} equals ω_{3−α}(tₙ) − ω_{3−α}(t_{n−1})
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let grading = rng.gen_range(1.0..=5.0);
            let n_steps = rng.gen_range(1..=64usize);
            let alpha = rng.gen_range(0.05..1.0);
            let t_final = rng.gen_range(0.2..4.0);
            let mesh = GradedMesh::new(t_final, n_steps, grading).unwrap();
            let n = rng.gen_range(1..=n_steps);
            let incr: Vec<f64> = mesh.tau[..n].to_vec();
            let val = caputo_slab_integral(&mesh, alpha, &incr).unwrap();
            let exact =
                omega(3.0 - alpha, mesh.t[n]) - omega(3.0 - alpha, mesh.t[n - 1]);
            assert_rel(val, exact, 1e-9);
        }
    }

    /// Independent double-quadrature oracle for the slab integral: the inner
    /// Riemann-Liouville integral is de-singularized by σ = (t−s)^{1−α},
    /// under which ω_{1−α}(t−s)ds = dσ/((1−α)Γ(1−α)) and the integrand
    /// becomes piecewise constant; both integrals use adaptive Simpson.
    fn slab_integral_quadrature(
        mesh: &GradedMesh,
        alpha: f64,
        slopes: &[f64],
        n: usize,
    ) -> f64 {
        let g1 = gamma(1.0 - alpha);
        let slope_at = |t: f64| -> f64 {
            let k = mesh.t.partition_point(|&tk| tk < t).max(1);
            slopes[k - 1]
        };
        let inner = |t: f64| -> f64 {
            let f = |sigma: f64| slope_at(t - sigma.powf(1.0 / (1.0 - alpha)));
            let mut pts = vec![0.0, t.powf(1.0 - alpha)];
            for &tk in mesh.t.iter().filter(|&&tk| tk > 0.0 && tk < t) {
                pts.push((t - tk).powf(1.0 - alpha));
            }
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            crate::quadrature::adaptive_simpson_panels(&f, &pts, 1e-12)
                / ((1.0 - alpha) * g1)
        };
        let (t0, t1) = mesh.slab(n);
        adaptive_simpson(&inner, t0, t1, 1e-10)
    }

    #[test]
    fn slab_integral_matches_double_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..8 {
            let n_steps = rng.gen_range(2..=10usize);
            let grading = rng.gen_range(1.0..=3.0);
            let alpha = rng.gen_range(0.15..0.9);
            let mesh = GradedMesh::new(1.0, n_steps, grading).unwrap();
            let n = rng.gen_range(1..=n_steps);
            let slopes: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let incr: Vec<f64> = slopes
                .iter()
                .zip(&mesh.tau)
                .map(|(m, tau)| m * tau)
                .collect();
            let val = caputo_slab_integral(&mesh, alpha, &incr).unwrap();
            let oracle = slab_integral_quadrature(&mesh, alpha, &slopes, n);
            let scale = val.abs().max(oracle.abs()).max(1e-6);
            assert!(
                (val - oracle).abs() / scale <= 1e-8,
                "weights {val:e} vs quadrature {oracle:e} (n={n}, alpha={alpha})"
            );
        }
    }
}
