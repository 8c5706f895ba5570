//! Non-stationary Kuramoto-Sivashinsky solver: exponential time differencing
//! (ETDRK4) on the real half-spectrum with 3/2-rule dealiasing.
//!
//! The equation is u_t + u u_x + u_xx + kappa(t) u_xxxx = 0 on the periodic
//! domain [0, 2 pi]; kappa(t) = kappa0 + kappa1 * exp(t / gamma) is refreshed
//! every step. Evolving the half-spectrum keeps conjugate symmetry exact, so
//! roundoff cannot seed an anti-Hermitian component in the unstable band.

use super::{SolveError, SystemTag, Trajectory};
use crate::fft;
use crate::grid::{AxisDomain, GridFunction};
use ndarray::Array3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KsParams {
    pub kappa0: f64,
    pub kappa1: f64,
    pub gamma: f64,
    pub domain_length: f64,
    pub spatial_points: usize,
}

impl Default for KsParams {
    fn default() -> Self {
        KsParams {
            kappa0: 0.0753,
            kappa1: 0.0034,
            gamma: 75.3,
            domain_length: 2.0 * PI,
            spatial_points: 64,
        }
    }
}

impl KsParams {
    pub fn kappa(&self, t: f64) -> f64 {
        self.kappa0 + self.kappa1 * (t / self.gamma).exp()
    }

    /// Time at which kappa crosses the periodic-to-chaotic threshold
    /// kappa* = 0.08: gamma * ln((kappa* - kappa0) / kappa1).
    pub fn tipping_time(&self, kappa_star: f64) -> f64 {
        self.gamma * ((kappa_star - self.kappa0) / self.kappa1).ln()
    }
}

/// phi_j(z) = (e^z - sum_{i<j} z^i/i!) / z^j, computed stably: Taylor series
/// below |z| = 0.1, the direct expm1 form above.
fn phi(z: f64, j: u32) -> f64 {
    if z.abs() < 0.1 {
        // phi_j(z) = sum_{i >= 0} z^i / (i + j)!
        let mut sum = 0.0;
        let mut zp = 1.0;
        for i in 0..=12u32 {
            let mut denom = 1.0;
            for k in 1..=(i + j) {
                denom *= k as f64;
            }
            sum += zp / denom;
            zp *= z;
        }
        sum
    } else {
        match j {
            1 => z.exp_m1() / z,
            2 => (z.exp_m1() - z) / (z * z),
            3 => (z.exp_m1() - z - 0.5 * z * z) / (z * z * z),
            _ => unreachable!(),
        }
    }
}

struct EtdCoeffs {
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

fn etd_coeffs(lin: &[f64], dt: f64) -> EtdCoeffs {
    let n = lin.len();
    let mut c = EtdCoeffs {
        e: vec![0.0; n],
        e2: vec![0.0; n],
        q: vec![0.0; n],
        f1: vec![0.0; n],
        f2: vec![0.0; n],
        f3: vec![0.0; n],
    };
    for (i, &l) in lin.iter().enumerate() {
        let z = l * dt;
        c.e[i] = z.exp();
        c.e2[i] = (0.5 * z).exp();
        c.q[i] = 0.5 * dt * phi(0.5 * z, 1);
        let p1 = phi(z, 1);
        let p2 = phi(z, 2);
        let p3 = phi(z, 3);
        c.f1[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
        c.f2[i] = dt * (2.0 * p2 - 4.0 * p3);
        c.f3[i] = dt * (4.0 * p3 - p2);
    }
    c
}

/// Workspace for the dealiased nonlinear term N(v) = -i k F[u^2] / 2 on the
/// 3/2-padded grid.
struct Nonlinear {
    n: usize,
    m: usize,
    k_scale: f64,
}

impl Nonlinear {
    fn new(n: usize, domain_length: f64) -> Self {
        Nonlinear {
            n,
            m: 3 * n / 2,
            k_scale: 2.0 * PI / domain_length,
        }
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let (n, m) = (self.n, self.m);
        let mut padded = vec![Complex64::new(0.0, 0.0); m / 2 + 1];
        for i in 0..n / 2 {
            padded[i] = v[i] * (m as f64 / n as f64);
        }
        // Nyquist bin dropped in products.
        let up = fft::irfft(&padded, m);
        let sq: Vec<f64> = up.iter().map(|u| u * u).collect();
        let wf = fft::rfft(&sq);
        let mut out = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
        for i in 0..n / 2 + 1 {
            let k = i as f64 * self.k_scale;
            out[i] = Complex64::new(0.0, -0.5 * k) * wf[i] * (n as f64 / m as f64);
        }
        out
    }
}

/// Seeded random band-limited initial condition (modes 1..=4).
pub fn ks_random_initial(p: &KsParams, seed: u64) -> GridFunction {
    let n = p.spatial_points;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = vec![0.0; n];
    for m in 1..=4usize {
        let a: f64 = rng.gen_range(-1.0..1.0) * 0.5;
        let b: f64 = rng.gen_range(-1.0..1.0) * 0.5;
        for (i, v) in vals.iter_mut().enumerate() {
            let x = p.domain_length * i as f64 / n as f64;
            let mx = m as f64 * 2.0 * PI / p.domain_length * x;
            *v += a * mx.cos() + b * mx.sin();
        }
    }
    GridFunction::new(
        Array3::from_shape_vec((1, n, 1), vals).unwrap(),
        Some(AxisDomain::new(0.0, p.domain_length / n as f64, true)),
        AxisDomain::new(0.0, 1.0, false),
        vec!["u".into()],
    )
    .unwrap()
}

/// Integrate the non-stationary KS equation.
///
/// The burn-in runs at the frozen initial value kappa(t_span.0) and is
/// discarded; the non-stationary clock starts at `t_span.0` afterwards.
/// Output is subsampled to `subsample_dt`.
pub fn ks_solve(
    p: &KsParams,
    initial: &GridFunction,
    t_span: (f64, f64),
    dt: f64,
    burn_in: f64,
    subsample_dt: f64,
    seed: u64,
) -> Result<Trajectory, SolveError> {
    let n = p.spatial_points;
    if initial.nx() != n || initial.nt() != 1 {
        return Err(SolveError::BadSetup(format!(
            "initial condition has shape ({}, {}), expected ({n}, 1)",
            initial.nx(),
            initial.nt()
        )));
    }
    let every = (subsample_dt / dt).round() as usize;
    if every == 0 || (subsample_dt - every as f64 * dt).abs() > 1e-9 * subsample_dt {
        return Err(SolveError::BadSetup(format!(
            "subsample_dt {subsample_dt} is not an integer multiple of dt {dt}"
        )));
    }
    let nl = Nonlinear::new(n, p.domain_length);
    let k_scale = 2.0 * PI / p.domain_length;
    let lin_at = |kappa: f64| -> Vec<f64> {
        (0..n / 2 + 1)
            .map(|i| {
                let k = i as f64 * k_scale;
                k * k - kappa * k.powi(4)
            })
            .collect()
    };

    let row: Vec<f64> = (0..n).map(|i| initial.values()[[0, i, 0]]).collect();
    let mut v = fft::rfft(&row);

    let mut step = |v: &mut Vec<Complex64>, coeffs: &EtdCoeffs| {
        let nv = nl.apply(v);
        let mut a = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in 0..v.len() {
            a[i] = v[i] * coeffs.e2[i] + nv[i] * coeffs.q[i];
        }
        let na = nl.apply(&a);
        let mut b = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in 0..v.len() {
            b[i] = v[i] * coeffs.e2[i] + na[i] * coeffs.q[i];
        }
        let nb = nl.apply(&b);
        let mut cst = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in 0..v.len() {
            cst[i] = a[i] * coeffs.e2[i] + (nb[i] * 2.0 - nv[i]) * coeffs.q[i];
        }
        let nc = nl.apply(&cst);
        for i in 0..v.len() {
            v[i] = v[i] * coeffs.e[i]
                + nv[i] * coeffs.f1[i]
                + (na[i] + nb[i]) * coeffs.f2[i]
                + nc[i] * coeffs.f3[i];
        }
    };

    // Burn-in at frozen kappa(t0).
    let kappa0 = p.kappa(t_span.0);
    if kappa0 <= 0.0 {
        return Err(SolveError::NonPositiveKappa {
            t: t_span.0,
            value: kappa0,
        });
    }
    let burn_coeffs = etd_coeffs(&lin_at(kappa0), dt);
    let burn_steps = (burn_in / dt).round() as usize;
    for s in 0..burn_steps {
        step(&mut v, &burn_coeffs);
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(SolveError::BlowUp {
                t: t_span.0 - burn_in + dt * (s + 1) as f64,
            });
        }
    }

    let n_steps = ((t_span.1 - t_span.0) / dt).round() as usize;
    let mut times = vec![t_span.0];
    let mut fields = vec![fft::irfft(&v, n)];
    let mut kappa_last = f64::NAN;
    let mut coeffs = burn_coeffs;
    for s in 0..n_steps {
        let t = t_span.0 + dt * s as f64;
        let kappa = p.kappa(t);
        if kappa <= 0.0 {
            return Err(SolveError::NonPositiveKappa { t, value: kappa });
        }
        if kappa != kappa_last {
            coeffs = etd_coeffs(&lin_at(kappa), dt);
            kappa_last = kappa;
        }
        step(&mut v, &coeffs);
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(SolveError::BlowUp { t: t + dt });
        }
        if (s + 1) % every == 0 {
            times.push(t + dt);
            fields.push(fft::irfft(&v, n));
        }
    }

    let nt = times.len();
    let mut values = Array3::<f64>::zeros((1, n, nt));
    for (j, f) in fields.iter().enumerate() {
        for i in 0..n {
            values[[0, i, j]] = f[i];
        }
    }
    let states = GridFunction::new(
        values,
        Some(AxisDomain::new(0.0, p.domain_length / n as f64, true)),
        AxisDomain::new(times[0], subsample_dt, false),
        vec!["u".into()],
    )
    .expect("well-formed trajectory grid");
    Ok(Trajectory {
        system: SystemTag::Ks,
        states,
        solver_dt: dt,
        subsample_dt,
        tipping_time: Some(p.tipping_time(0.08)),
        seed,
    })
}
