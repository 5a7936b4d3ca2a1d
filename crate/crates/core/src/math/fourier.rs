//! Fourier conventions.
//!
//! Time:  `f̂(ω) = ∫ f(t) e^{+iωt} dt`,  `f(t) = (1/2π) ∫ f̂(ω) e^{−iωt} dω`.
//! Space: `ψ̃(k) = ∫ ψ(x) e^{−i⟨k,x⟩} dx`, `ψ(x) = (2π)^{−3} ∫ ψ̃(k) e^{+i⟨k,x⟩} dk`.
//!
//! Every module takes its signs from here.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cis, lit, Real};

/// Sign of the phase in the forward time transform.
pub const TIME_SIGN: f64 = 1.0;
/// Sign of the phase in the forward spatial transform.
pub const SPACE_SIGN: f64 = -1.0;

/// Samples of `f̂` on the DFT frequency grid of a uniformly sampled signal.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    /// Ascending angular frequencies `2π m / (n dt)`, `m = −⌊n/2⌋ .. ⌈n/2⌉−1`.
    pub omegas: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// Time of the first sample.
    pub t0: T,
    pub dt: T,
}

fn signed_index(i: usize, n: usize) -> i64 {
    i as i64 - (n / 2) as i64
}

/// Rectangle-rule transform of `f(t0 + j dt)`, `j = 0..n`.
pub fn ft1d<T: Real>(samples: &[T], t0: T, dt: T) -> Result<Spectrum<T>> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptyInput("ft1d samples"));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("ft1d needs at least two samples".into()));
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidArgument("ft1d step must be positive".into()));
    }
    let mut buf: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
    // Σ_j f_j e^{+2πi m j / n} is the unnormalized inverse DFT.
    T::fft_rows(&mut buf, n, true);
    let two_pi = T::TAU();
    let nt = lit::<T>(n as f64);
    let mut omegas = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let m = signed_index(i, n);
        let w = two_pi * lit::<T>(m as f64) / (nt * dt);
        let idx = m.rem_euclid(n as i64) as usize;
        omegas.push(w);
        values.push(buf[idx] * cis(w * t0) * dt);
    }
    Ok(Spectrum {
        omegas,
        values,
        t0,
        dt,
    })
}

/// Inverse of [`ft1d`] on the same grid: returns `f(t0 + j dt)`.
pub fn ift1d<T: Real>(spectrum: &Spectrum<T>) -> Result<Vec<Complex<T>>> {
    let n = spectrum.values.len();
    if n == 0 {
        return Err(Error::EmptyInput("ift1d spectrum"));
    }
    let mut buf = vec![Complex::zero(); n];
    for (i, (&w, &v)) in spectrum.omegas.iter().zip(&spectrum.values).enumerate() {
        let m = signed_index(i, n);
        buf[m.rem_euclid(n as i64) as usize] = v * cis(-w * spectrum.t0);
    }
    T::fft_rows(&mut buf, n, false);
    let scale = T::one() / (lit::<T>(n as f64) * spectrum.dt);
    Ok(buf.into_iter().map(|z| z * scale).collect())
}

/// In-place unnormalized 3D DFT of a row-major `dims[0]×dims[1]×dims[2]` array.
/// `inverse` selects the `e^{+2πi}` kernel.
pub fn fft3<T: Real>(data: &mut [Complex<T>], dims: [usize; 3], inverse: bool) {
    let [n0, n1, n2] = dims;
    assert_eq!(data.len(), n0 * n1 * n2, "fft3 dims");
    T::fft_rows(data, n2, inverse);
    let mut line = vec![Complex::zero(); n0.max(n1)];
    for i0 in 0..n0 {
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                line[i1] = data[(i0 * n1 + i1) * n2 + i2];
            }
            T::fft_rows(&mut line[..n1], n1, inverse);
            for i1 in 0..n1 {
                data[(i0 * n1 + i1) * n2 + i2] = line[i1];
            }
        }
    }
    let stride = n1 * n2;
    for r in 0..stride {
        for i0 in 0..n0 {
            line[i0] = data[i0 * stride + r];
        }
        T::fft_rows(&mut line[..n0], n0, inverse);
        for i0 in 0..n0 {
            data[i0 * stride + r] = line[i0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let sigma = 1.0_f64;
        let n = 2048;
        let dt = 0.02;
        let t0 = -(n as f64) * dt / 2.0;
        let f: Vec<f64> = (0..n)
            .map(|j| {
                let t = t0 + j as f64 * dt;
                (-t * t / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let s = ft1d(&f, t0, dt).unwrap();
        for (&w, v) in s.omegas.iter().zip(&s.values) {
            if w.abs() > 4.0 {
                continue;
            }
            let exact = sigma * (2.0 * std::f64::consts::PI).sqrt() * (-sigma * sigma * w * w / 2.0).exp();
            assert!((v - Complex::new(exact, 0.0)).norm() / exact <= 1e-6, "ω = {w}");
        }
    }

    #[test]
    fn shifted_pulse_picks_up_positive_phase() {
        // f(t) = g(t − a) ⇒ f̂(ω) = e^{iωa} ĝ(ω)
        let n = 1024;
        let dt = 0.025;
        let t0 = -12.8;
        let a = 1.5;
        let g = |t: f64| (-t * t / 2.0).exp();
        let f: Vec<f64> = (0..n).map(|j| g(t0 + j as f64 * dt - a)).collect();
        let s = ft1d(&f, t0, dt).unwrap();
        let i = s.omegas.iter().position(|&w| (w - 1.0).abs() < 0.2).unwrap();
        let w = s.omegas[i];
        let want = cis(w * a) * (2.0 * std::f64::consts::PI).sqrt() * (-w * w / 2.0).exp();
        assert!((s.values[i] - want).norm() < 1e-6);
    }

    #[test]
    fn zero_and_empty() {
        let s = ft1d(&[0.0_f64; 16], 0.0, 0.1).unwrap();
        assert!(s.values.iter().all(|z| z.is_zero()));
        assert!(matches!(ft1d::<f64>(&[], 0.0, 0.1), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn fft3_round_trip() {
        let dims = [3, 4, 5];
        let mut a: Vec<Complex<f64>> = (0..60).map(|i| Complex::new(i as f64, (i % 7) as f64)).collect();
        let orig = a.clone();
        fft3(&mut a, dims, false);
        fft3(&mut a, dims, true);
        for (x, y) in a.iter().zip(&orig) {
            assert!((x / 60.0 - y).norm() < 1e-12);
        }
    }

    #[test]
    fn fft3_of_delta_is_flat() {
        let mut a = vec![Complex::<f64>::zero(); 2 * 3 * 4];
        a[0] = Complex::new(1.0, 0.0);
        fft3(&mut a, [2, 3, 4], false);
        assert!(a.iter().all(|z| (z - Complex::new(1.0, 0.0)).norm() < 1e-15));
    }
}
