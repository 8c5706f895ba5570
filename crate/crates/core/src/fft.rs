//! Thin FFT helpers over `rustfft` with a per-thread plan cache.
//!
//! Conventions used throughout the crate: the forward transform is unscaled,
//! the inverse carries the 1/n factor, and real-input transforms keep only the
//! non-negative half of the last (time) axis.

use ndarray::Array3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> =
        RefCell::new(HashMap::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|c| {
        c.borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// In-place complex FFT, unscaled in both directions.
pub fn fft_inplace(data: &mut [Complex64], inverse: bool) {
    plan(data.len(), inverse).process(data);
}

/// Real-input forward FFT: returns the n/2+1 non-negative frequency bins,
/// unscaled.
pub fn rfft(input: &[f64]) -> Vec<Complex64> {
    let n = input.len();
    let mut buf: Vec<Complex64> = input.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_inplace(&mut buf, false);
    buf.truncate(n / 2 + 1);
    buf
}

/// Inverse of [`rfft`]: expands the half spectrum by conjugate symmetry and
/// returns n real samples scaled by 1/n. Any Hermitian inconsistency in the
/// self-conjugate bins (DC, Nyquist) is projected out by taking real parts.
pub fn irfft(half: &[Complex64], n: usize) -> Vec<f64> {
    debug_assert_eq!(half.len(), n / 2 + 1);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[0] = Complex64::new(half[0].re, 0.0);
    for m in 1..n / 2 {
        buf[m] = half[m];
        buf[n - m] = half[m].conj();
    }
    if n % 2 == 0 {
        buf[n / 2] = Complex64::new(half[n / 2].re, 0.0);
    } else if n > 1 {
        let m = n / 2;
        buf[m] = half[m];
        buf[n - m] = half[m].conj();
    }
    fft_inplace(&mut buf, true);
    buf.iter().map(|z| z.re / n as f64).collect()
}

/// Forward transform of `[c, nx, nt]` real values: full FFT along x, real FFT
/// along t. Output is `[c, nx, nt/2 + 1]`, unscaled. `nx == 1` degenerates to
/// a plain time transform.
pub fn rfft2(values: &Array3<f64>) -> Array3<Complex64> {
    let (nc, nx, nt) = values.dim();
    let nf = nt / 2 + 1;
    let mut out = Array3::<Complex64>::zeros((nc, nx, nf));
    for c in 0..nc {
        for ix in 0..nx {
            let row: Vec<f64> = (0..nt).map(|it| values[[c, ix, it]]).collect();
            let half = rfft(&row);
            for (it, z) in half.into_iter().enumerate() {
                out[[c, ix, it]] = z;
            }
        }
    }
    if nx > 1 {
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        for c in 0..nc {
            for it in 0..nf {
                for ix in 0..nx {
                    col[ix] = out[[c, ix, it]];
                }
                fft_inplace(&mut col, false);
                for ix in 0..nx {
                    out[[c, ix, it]] = col[ix];
                }
            }
        }
    }
    out
}

/// Inverse of [`rfft2`]: inverse FFT along x (scaled 1/nx), then the real
/// inverse along t (scaled 1/nt). Imaginary residue is discarded.
pub fn irfft2(spec: &Array3<Complex64>, nx: usize, nt: usize) -> Array3<f64> {
    let (nc, snx, nf) = spec.dim();
    debug_assert_eq!(snx, nx);
    debug_assert_eq!(nf, nt / 2 + 1);
    let mut work = spec.clone();
    if nx > 1 {
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        for c in 0..nc {
            for it in 0..nf {
                for ix in 0..nx {
                    col[ix] = work[[c, ix, it]];
                }
                fft_inplace(&mut col, true);
                for ix in 0..nx {
                    work[[c, ix, it]] = col[ix] / nx as f64;
                }
            }
        }
    }
    let mut out = Array3::<f64>::zeros((nc, nx, nt));
    for c in 0..nc {
        for ix in 0..nx {
            let half: Vec<Complex64> = (0..nf).map(|it| work[[c, ix, it]]).collect();
            let row = irfft(&half, nt);
            for (it, v) in row.into_iter().enumerate() {
                out[[c, ix, it]] = v;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array3;

    #[test]
    fn rfft_roundtrip() {
        let x: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        let back = irfft(&rfft(&x), 16);
        for (a, b) in x.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rfft_odd_length_roundtrip() {
        let x: Vec<f64> = (0..15).map(|i| (i as f64 * 1.3).cos()).collect();
        let back = irfft(&rfft(&x), 15);
        for (a, b) in x.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rfft2_roundtrip() {
        let mut v = Array3::<f64>::zeros((2, 8, 6));
        for c in 0..2 {
            for ix in 0..8 {
                for it in 0..6 {
                    v[[c, ix, it]] = ((c + 2 * ix + 3 * it) as f64 * 0.37).sin();
                }
            }
        }
        let back = irfft2(&rfft2(&v), 8, 6);
        for (a, b) in v.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
