//! Solve the parabolic-data benchmark (α = 0.5) once on a graded mesh and
//! compare a few solution profiles against the truncated series reference.
//!
//!     cargo run --example solve_benchmark

use fracdiffusion::exact;
use fracdiffusion::fem::SpatialGrid;
use fracdiffusion::kernel::GradedMesh;
use fracdiffusion::stepper;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.5;
    let spec = exact::example1_problem(alpha)?;
    let sol = exact::example1(alpha, 60)?;

    let mesh = GradedMesh::new(1.0, 32, 3.0)?;
    let grid = SpatialGrid::new(64)?;
    let traj = stepper::run(&spec, &mesh, &grid)?;

    println!("time-fractional diffusion, alpha = {alpha}, graded mesh gamma = 3, N = 32, M = 64");
    println!();
    println!("{:>10}  {:>12}  {:>12}  {:>10}", "t", "U_h(1/2, t)", "u(1/2, t)", "error");
    let mid_node = grid.m / 2 - 1; // interior index of x = 1/2
    for &n in &[0usize, 1, 2, 4, 8, 16, 32] {
        let t = mesh.t[n];
        let numeric = traj.u[n][mid_node];
        let reference = sol.eval(0.5, t)?;
        println!(
            "{t:>10.6}  {numeric:>12.8}  {reference:>12.8}  {:>10.2e}",
            (numeric - reference).abs()
        );
    }

    // evaluation between time levels interpolates the piecewise-linear ansatz
    let t = 0.5 * (mesh.t[7] + mesh.t[8]);
    let profile = traj.evaluate(t)?;
    println!();
    println!("slab-interior profile at t = {t:.6}:");
    for &i in &[8usize, 16, 24, 32] {
        let x = grid.x[i];
        println!(
            "  x = {x:.4}: U_h = {:+.8}, series = {:+.8}",
            profile[i - 1],
            sol.eval(x, t)?
        );
    }
    Ok(())
}
