//! Fixed-step RK4 for `dΛ/dt = L_t ∘ Λ_t`, `Λ₀ = id`.

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, SuperOperator};

use super::{validate_grid, GeneratorSpec};

/// Step doublings tried by [`integrate_master_equation`] before giving up.
pub const MAX_REFINEMENTS: usize = 12;

/// `Λ_{t_i}` on the grid with `substeps` equal RK4 steps per grid interval.
pub fn rk4_trajectory(
    g: &GeneratorSpec,
    grid: &[f64],
    substeps: usize,
) -> Result<Vec<SuperOperator>> {
    validate_grid(grid)?;
    if substeps == 0 {
        return Err(Error::Config("RK4 needs at least one substep".into()));
    }
    let d = g.dim();
    let mut lam: ComplexMatrix = SuperOperator::identity(d).into_matrix();
    let mut out = Vec::with_capacity(grid.len());
    out.push(SuperOperator::identity(d));
    for w in grid.windows(2) {
        let h = (w[1] - w[0]) / substeps as f64;
        let mut left = g.generator_at(w[0]).into_matrix();
        for k in 0..substeps {
            let t = w[0] + k as f64 * h;
            let t_next = if k + 1 == substeps { w[1] } else { t + h };
            let mid = g.generator_at(t + 0.5 * h).into_matrix();
            let right = g.generator_at(t_next).into_matrix();
            let k1 = &left * &lam;
            let k2 = &mid * (&lam + &k1 * c(0.5 * h));
            let k3 = &mid * (&lam + &k2 * c(0.5 * h));
            let k4 = &right * (&lam + &k3 * c(h));
            lam += (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
            left = right;
        }
        if lam.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("RK4 state at t = {}", w[1])));
        }
        out.push(SuperOperator::new(d, lam.clone())?);
    }
    Ok(out)
}

/// RK4 with step doubling until two successive trajectories agree within
/// `tol` in max norm at every grid point.
pub fn integrate_master_equation(
    g: &GeneratorSpec,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<SuperOperator>> {
    let mut substeps = 1;
    let mut prev = rk4_trajectory(g, grid, substeps)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        substeps *= 2;
        let next = rk4_trajectory(g, grid, substeps)?;
        change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        if change <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        doublings: MAX_REFINEMENTS,
        change,
    })
}
