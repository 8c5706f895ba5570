//! Non-stationary Lorenz-63 with exponentially ramped rho(t).

use super::{rk4_solve, SolveError, SystemTag, Trajectory};
use crate::grid::{AxisDomain, GridFunction};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of the non-stationary Lorenz-63 system,
/// rho(t) = rho0 + rho1 * exp(t / gamma).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Lorenz63Params {
    pub sigma: f64,
    pub beta: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub gamma: f64,
}

impl Default for Lorenz63Params {
    fn default() -> Self {
        Lorenz63Params {
            sigma: 10.0,
            beta: 8.0 / 3.0,
            rho0: 154.0,
            rho1: 8.0,
            gamma: 100.0,
        }
    }
}

impl Lorenz63Params {
    pub fn rho(&self, t: f64) -> f64 {
        self.rho0 + self.rho1 * (t / self.gamma).exp()
    }

    /// Time at which rho(t) reaches the intermittency threshold rho* = 166:
    /// gamma * ln((166 - rho0) / rho1).
    pub fn tipping_time(&self, rho_star: f64) -> f64 {
        self.gamma * ((rho_star - self.rho0) / self.rho1).ln()
    }
}

/// Right-hand side of the Lorenz-63 equations at absolute time `t`.
pub fn lorenz_rhs(state: &[f64; 3], t: f64, p: &Lorenz63Params) -> [f64; 3] {
    let [x, y, z] = *state;
    let rho = p.rho(t);
    [
        p.sigma * (y - x),
        x * (rho - z) - y,
        x * y - p.beta * z,
    ]
}

/// Uniform initial condition in [-10, 10]^3.
pub fn lorenz_random_initial(seed: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    ]
}

/// Integrate the non-stationary Lorenz system with classic RK4, discarding
/// `burn_in` seconds and subsampling the output to `subsample_dt`.
pub fn lorenz_solve(
    p: &Lorenz63Params,
    initial: [f64; 3],
    t_span: (f64, f64),
    dt: f64,
    burn_in: f64,
    subsample_dt: f64,
    seed: u64,
) -> Result<Trajectory, SolveError> {
    let every = (subsample_dt / dt).round() as usize;
    if every == 0 || (subsample_dt - every as f64 * dt).abs() > 1e-9 * subsample_dt {
        return Err(SolveError::BadSetup(format!(
            "subsample_dt {subsample_dt} is not an integer multiple of dt {dt}"
        )));
    }
    let params = *p;
    let (times, states) = rk4_solve(
        move |u, t| {
            let s = [u[0], u[1], u[2]];
            lorenz_rhs(&s, t, &params).to_vec()
        },
        &initial,
        t_span,
        dt,
        burn_in,
        every,
    )?;
    let nt = times.len();
    let mut values = Array2::<f64>::zeros((3, nt));
    for (j, s) in states.iter().enumerate() {
        for c in 0..3 {
            values[[c, j]] = s[c];
        }
    }
    let states = GridFunction::from_time_series(
        values,
        AxisDomain::new(times[0], subsample_dt, false),
        vec!["u_x".into(), "u_y".into(), "u_z".into()],
    )
    .expect("well-formed trajectory grid");
    Ok(Trajectory {
        system: SystemTag::Lorenz63,
        states,
        solver_dt: dt,
        subsample_dt,
        tipping_time: Some(p.tipping_time(166.0)),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_equilibrium() {
        let p = Lorenz63Params::default();
        assert_eq!(lorenz_rhs(&[0.0, 0.0, 0.0], -3.0, &p), [0.0, 0.0, 0.0]);
        assert_eq!(lorenz_rhs(&[0.0, 0.0, 0.0], 55.0, &p), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn hand_evaluated_rhs_at_base_rho() {
        // At t -> -inf, rho -> rho0 = 154. State (1,1,0):
        // (sigma*(1-1), 1*(154-0)-1, 1*1 - beta*0) = (0, 153, 1).
        let p = Lorenz63Params::default();
        let t = -1e9;
        let d = lorenz_rhs(&[1.0, 1.0, 0.0], t, &p);
        assert!((d[0] - 0.0).abs() < 1e-9);
        assert!((d[1] - 153.0).abs() < 1e-6);
        assert!((d[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tipping_time_from_parameterization() {
        let p = Lorenz63Params::default();
        let t_star = p.tipping_time(166.0);
        assert!((t_star - 100.0 * 1.5f64.ln()).abs() < 1e-12);
        assert!((p.rho(t_star) - 166.0).abs() < 1e-9);
    }

    #[test]
    fn solve_is_seeded_and_finite() {
        let p = Lorenz63Params::default();
        let init = lorenz_random_initial(42);
        let tr = lorenz_solve(&p, init, (-60.0, -40.0), 0.001, 5.0, 0.02, 42).unwrap();
        assert!(tr.states.is_finite());
        assert!((tr.states.time().start - -55.0).abs() < 1e-9);
        let tr2 = lorenz_solve(&p, init, (-60.0, -40.0), 0.001, 5.0, 0.02, 42).unwrap();
        assert_eq!(tr.states.values(), tr2.states.values());
    }
}
