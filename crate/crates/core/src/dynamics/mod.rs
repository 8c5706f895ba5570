//! The three non-stationary reference systems, their numerical solvers,
//! ground-truth tipping metadata, and dataset windowing.

mod cloud;
mod dataset;
mod ks;
mod lorenz;

pub use cloud::{
    cloud_equilibrium, cloud_rhs, cloud_solve, co2_forcing, CloudClosures, CloudParams, WienerPath,
};
pub use dataset::{make_dataset, DataError, IntervalDataset, Split, WindowedTrajectory};
pub use ks::{ks_random_initial, ks_solve, KsParams};
pub use lorenz::{lorenz_random_initial, lorenz_rhs, lorenz_solve, Lorenz63Params};

use crate::grid::GridFunction;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SolveError {
    #[error("solution blew up (non-finite state) at t = {t}")]
    BlowUp { t: f64 },
    #[error("kappa(t) = {value} is not positive at t = {t}")]
    NonPositiveKappa { t: f64, value: f64 },
    #[error("closure {name} returned a non-finite value at t = {t}")]
    ClosureNonFinite { name: &'static str, t: f64 },
    #[error("step size underflow at t = {t} after repeated rejections")]
    StepFailure { t: f64 },
    #[error("invalid solver setup: {0}")]
    BadSetup(String),
}

/// Which reference system produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SystemTag {
    Lorenz63,
    Ks,
    Cloud,
}

impl SystemTag {
    pub fn as_u32(self) -> u32 {
        match self {
            SystemTag::Lorenz63 => 0,
            SystemTag::Ks => 1,
            SystemTag::Cloud => 2,
        }
    }

    pub fn from_u32(v: u32) -> Option<Self> {
        match v {
            0 => Some(SystemTag::Lorenz63),
            1 => Some(SystemTag::Ks),
            2 => Some(SystemTag::Cloud),
            _ => None,
        }
    }
}

/// A solved trajectory on the subsampled output grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub system: SystemTag,
    pub states: GridFunction,
    pub solver_dt: f64,
    pub subsample_dt: f64,
    /// Ground-truth tipping time when known (parameter crossing for Lorenz
    /// and KS, measured CF-drop midpoint for the cloud system).
    pub tipping_time: Option<f64>,
    pub seed: u64,
}

impl Trajectory {
    /// Restrict to times strictly before `tipping_time - margin`. Returns the
    /// trajectory unchanged when no tipping time is recorded.
    pub fn clip_pre_tipping(&self, margin: f64) -> Trajectory {
        let Some(t_star) = self.tipping_time else {
            return self.clone();
        };
        let t0 = self.states.time().start;
        let dt = self.states.time().step;
        let cutoff = t_star - margin;
        let n_keep = (((cutoff - t0) / dt).floor() as i64).clamp(0, self.states.nt() as i64);
        Trajectory {
            states: self.states.time_slice(0, n_keep as usize),
            ..self.clone()
        }
    }
}

/// Classic fixed-step fourth-order Runge-Kutta on a small ODE system.
///
/// Discards `burn_in` seconds of spin-up, then records every
/// `subsample_every`-th step. Errors out with the blow-up time if the state
/// leaves the finite range.
pub fn rk4_solve<F>(
    mut rhs: F,
    initial: &[f64],
    t_span: (f64, f64),
    dt: f64,
    burn_in: f64,
    subsample_every: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SolveError>
where
    F: FnMut(&[f64], f64) -> Vec<f64>,
{
    if dt <= 0.0 || t_span.1 <= t_span.0 || subsample_every == 0 {
        return Err(SolveError::BadSetup(format!(
            "t_span {t_span:?}, dt {dt}, subsample_every {subsample_every}"
        )));
    }
    let dim = initial.len();
    let n_steps = ((t_span.1 - t_span.0) / dt).round() as usize;
    let burn_steps = (burn_in / dt).round() as usize;
    let mut u = initial.to_vec();
    let mut times = Vec::new();
    let mut states = Vec::new();
    if burn_steps == 0 {
        times.push(t_span.0);
        states.push(u.clone());
    }
    let mut t;
    for step in 0..n_steps {
        t = t_span.0 + dt * step as f64;
        let k1 = rhs(&u, t);
        let mid1: Vec<f64> = (0..dim).map(|i| u[i] + 0.5 * dt * k1[i]).collect();
        let k2 = rhs(&mid1, t + 0.5 * dt);
        let mid2: Vec<f64> = (0..dim).map(|i| u[i] + 0.5 * dt * k2[i]).collect();
        let k3 = rhs(&mid2, t + 0.5 * dt);
        let end: Vec<f64> = (0..dim).map(|i| u[i] + dt * k3[i]).collect();
        let k4 = rhs(&end, t + dt);
        for i in 0..dim {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = t_span.0 + dt * (step + 1) as f64;
        if !u.iter().all(|v| v.is_finite()) {
            return Err(SolveError::BlowUp { t: t_next });
        }
        let past_burn = step + 1 >= burn_steps;
        if past_burn && (step + 1 - burn_steps) % subsample_every == 0 {
            times.push(t_next);
            states.push(u.clone());
        }
    }
    Ok((times, states))
}
