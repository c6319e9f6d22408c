//! 1D piecewise-linear Galerkin finite elements on (0,1) with homogeneous
//! Dirichlet conditions: tridiagonal mass/stiffness assembly for variable
//! diffusivity, load vectors, the Ritz projection and a Thomas solver.
//!
//! Boundary conditions are eliminated, so all vectors and matrices act on
//! the interior nodes x₁..x_{M−1} only. Element integrals involving κ or a
//! load use the two-point Gauss rule per element; the mass matrix is exact.

use crate::{Error, Result, SpaceFn};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Two-point Gauss nodes of the interval (x0, x1).
fn gauss2(x0: f64, x1: f64) -> (f64, f64) {
    let mid = 0.5 * (x0 + x1);
    let off = 0.5 * (x1 - x0) / SQRT_3;
    (mid - off, mid + off)
}

/// Uniform spatial grid on [0,1] with M subintervals of width h = 1/M.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    /// Number of subintervals M.
    pub m: usize,
    /// Mesh width 1/M.
    pub h: f64,
    /// Nodes x₀..x_M.
    pub x: Vec<f64>,
}

impl SpatialGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!(
                "spatial grid: need at least 2 subintervals for an interior node, got {m}"
            )));
        }
        let x = (0..=m).map(|i| i as f64 / m as f64).collect();
        Ok(SpatialGrid {
            m,
            h: 1.0 / m as f64,
            x,
        })
    }

    /// Number of interior degrees of freedom, M − 1.
    pub fn interior_len(&self) -> usize {
        self.m - 1
    }
}

/// Symmetric tridiagonal matrix over the interior nodes.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(v.len(), n);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.lower[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// `self + c·other`, entrywise.
    pub fn add_scaled(&self, c: f64, other: &Tridiagonal) -> Tridiagonal {
        assert_eq!(self.len(), other.len());
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + c * y).collect();
        Tridiagonal {
            lower: zip(&self.lower, &other.lower),
            diag: zip(&self.diag, &other.diag),
            upper: zip(&self.upper, &other.upper),
        }
    }

    /// Thomas algorithm. All systems solved here are of the form
    /// mass + c·stiffness with c ≥ 0, hence SPD and well conditioned.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut piv = self.diag[0];
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::Singular("zero pivot at row 0".into()));
        }
        if n > 1 {
            c[0] = self.upper[0] / piv;
        }
        x[0] = rhs[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::Singular(format!("zero pivot at row {i}")));
            }
            if i + 1 < n {
                c[i] = self.upper[i] / piv;
            }
            x[i] = (rhs[i] - self.lower[i - 1] * x[i - 1]) / piv;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Ok(x)
    }
}

/// Assembled spatial system: grid, mass ⟨φⱼ,φᵢ⟩, stiffness ⟨κφⱼ′,φᵢ′⟩ and
/// the diffusivity it was assembled from.
pub struct FemSystem {
    pub grid: SpatialGrid,
    pub mass: Tridiagonal,
    pub stiffness: Tridiagonal,
    pub kappa: SpaceFn,
}

/// Assemble mass and stiffness for the diffusivity κ, which must be
/// positive at every quadrature point.
pub fn assemble(grid: &SpatialGrid, kappa: SpaceFn) -> Result<FemSystem> {
    let n = grid.interior_len();
    let h = grid.h;
    let mut mass = Tridiagonal::zeros(n);
    let mut stiffness = Tridiagonal::zeros(n);
    for e in 1..=grid.m {
        let (ga, gb) = gauss2(grid.x[e - 1], grid.x[e]);
        let ka = kappa(ga);
        let kb = kappa(gb);
        if !(ka > 0.0) || !(kb > 0.0) {
            return Err(Error::Domain(format!(
                "kappa must be positive on (0,1); got {} near x = {ga:.6}",
                ka.min(kb)
            )));
        }
        // ∫_e κ / h²: both hats have slope ±1/h on the element
        let s = 0.5 * h * (ka + kb) / (h * h);
        let has_left = e >= 2;
        let has_right = e <= grid.m - 1;
        if has_left {
            stiffness.diag[e - 2] += s;
            mass.diag[e - 2] += h / 3.0;
        }
        if has_right {
            stiffness.diag[e - 1] += s;
            mass.diag[e - 1] += h / 3.0;
        }
        if has_left && has_right {
            stiffness.lower[e - 2] -= s;
            stiffness.upper[e - 2] -= s;
            mass.lower[e - 2] += h / 6.0;
            mass.upper[e - 2] += h / 6.0;
        }
    }
    Ok(FemSystem {
        grid: grid.clone(),
        mass,
        stiffness,
        kappa,
    })
}

/// Load vector ⟨g, φᵢ⟩, two-point Gauss per element.
pub fn load_vector<G: Fn(f64) -> f64>(grid: &SpatialGrid, g: G) -> Vec<f64> {
    let mut v = vec![0.0; grid.interior_len()];
    for e in 1..=grid.m {
        let x0 = grid.x[e - 1];
        let x1 = grid.x[e];
        let (ga, gb) = gauss2(x0, x1);
        let va = g(ga);
        let vb = g(gb);
        if e >= 2 {
            // left hat: (x1 − x)/h, weight h/2 per Gauss point
            v[e - 2] += 0.5 * (va * (x1 - ga) + vb * (x1 - gb));
        }
        if e <= grid.m - 1 {
            v[e - 1] += 0.5 * (va * (ga - x0) + vb * (gb - x0));
        }
    }
    v
}

/// Ritz projection of w onto the interior finite element space: solves
/// ⟨κ (R_h w)′, φᵢ′⟩ = ⟨κ w′, φᵢ′⟩ with the right-hand side integrated by
/// two-point Gauss per element. The caller supplies w′ analytically; if w′
/// has a kink it must sit on a grid node for the quadrature to stay exact.
pub fn ritz_projection<G: Fn(f64) -> f64>(sys: &FemSystem, w_prime: G) -> Result<Vec<f64>> {
    let grid = &sys.grid;
    let mut rhs = vec![0.0; grid.interior_len()];
    for e in 1..=grid.m {
        let (ga, gb) = gauss2(grid.x[e - 1], grid.x[e]);
        // (h/2)·Σ_g κ w′ · (±1/h) = ±(1/2)·Σ_g κ w′
        let flux = 0.5 * ((sys.kappa)(ga) * w_prime(ga) + (sys.kappa)(gb) * w_prime(gb));
        if e >= 2 {
            rhs[e - 2] -= flux;
        }
        if e <= grid.m - 1 {
            rhs[e - 1] += flux;
        }
    }
    sys.stiffness.solve(&rhs)
}
