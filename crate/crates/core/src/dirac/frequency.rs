use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};
use crate::spectral::Spectral1D;

const MIN_SAMPLES: usize = 16;
const MIN_PERIODS: f64 = 4.0;

fn hann<T: Real>(n: usize) -> Vec<T> {
    let denom = T::lit((n - 1) as f64);
    (0..n)
        .map(|j| {
            let s = (T::PI() * T::lit(j as f64) / denom).sin();
            s * s
        })
        .collect()
}

/// Sign of `d/df |X(f)|^2` for the windowed transform
/// `X(f) = sum_j w_j x_j e^{i f (j - c)}`, `c` the series midpoint.
fn complex_slope<T: Real>(xw: &[Complex<T>], f: T) -> T {
    let c = T::lit((xw.len() - 1) as f64 / 2.0);
    let mut x = czero::<T>();
    let mut dx = czero::<T>();
    for (j, &v) in xw.iter().enumerate() {
        let t = T::lit(j as f64) - c;
        let term = v * Complex::new((f * t).cos(), (f * t).sin());
        x = x + term;
        dx = dx + Complex::new(-term.im * t, term.re * t);
    }
    (x.conj() * dx).re
}

/// Slope of the least-squares periodogram of a real windowed series under
/// the model `a + b cos(f t) + c sin(f t)`, `t` centred on the series
/// midpoint. Centring decouples the sine column, so the projection is
/// `Q(M, C) + S^2 / ss` with `Q` the 2x2 block for the constant and cosine
/// columns. A pure offset sinusoid maximizes it exactly at its frequency.
fn real_slope<T: Real>(x: &[T], w: &[T], f: T) -> T {
    let c = T::lit((x.len() - 1) as f64 / 2.0);
    let two = T::lit(2.0);
    let (mut m, mut a) = (T::zero(), T::zero());
    let (mut cs, mut sn, mut dcs, mut dsn) = (T::zero(), T::zero(), T::zero(), T::zero());
    let (mut b, mut db, mut cc, mut ss, mut dcc) =
        (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for (j, (&v, &wj)) in x.iter().zip(w).enumerate() {
        let t = T::lit(j as f64) - c;
        let (sin, cos) = (f * t).sin_cos();
        m = m + wj * v;
        a = a + wj;
        cs = cs + wj * v * cos;
        sn = sn + wj * v * sin;
        dcs = dcs - wj * v * t * sin;
        dsn = dsn + wj * v * t * cos;
        b = b + wj * cos;
        db = db - wj * t * sin;
        cc = cc + wj * cos * cos;
        ss = ss + wj * sin * sin;
        dcc = dcc - two * wj * t * sin * cos;
    }
    let d = a * cc - b * b;
    let n = cc * m * m - two * b * m * cs + a * cs * cs;
    let dn = dcc * m * m - two * db * m * cs - two * b * m * dcs + two * a * cs * dcs;
    let dd = a * dcc - two * b * db;
    // d(ss)/df = -d(cc)/df
    (dn * d - n * dd) / (d * d) + two * sn * dsn / ss + sn * sn * dcc / (ss * ss)
}

/// Bisects on the sign change of `slope` inside `[a, b]`; falls back to the
/// midpoint guess when the bracket does not straddle a maximum.
fn bisect_peak<T: Real>(a: T, b: T, guess: T, slope: impl Fn(T) -> T) -> T {
    let (mut lo, mut hi) = (a, b);
    if !(slope(lo) > T::zero() && slope(hi) < T::zero()) {
        return guess;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Signed angular frequency `f` (radians per sample) of the dominant tone
/// `x_j ~ e^{-i f j}`, or `None` if the peak sits in the DC bin. For real
/// input (`real = Some(..)`) only non-negative frequencies are searched and
/// the refinement uses the two-column periodogram.
fn dominant_tone<T: Real>(series: &[Complex<T>], real: Option<&[T]>) -> Option<T> {
    let n = series.len();
    let w = hann::<T>(n);
    let xw: Vec<Complex<T>> = series.iter().zip(&w).map(|(&x, &w)| x.scale(w)).collect();
    let big_n = (8 * n).next_power_of_two();
    let mut buf = vec![czero::<T>(); big_n];
    buf[..n].copy_from_slice(&xw);
    // inverse transform so that bin m corresponds to e^{+i 2 pi m j / N}
    Spectral1D::new(big_n).inverse(&mut buf);
    let mag: Vec<T> = buf.iter().map(|z| z.norm()).collect();
    let range = if real.is_some() {
        0..big_n / 2
    } else {
        0..big_n
    };
    let mut best = 0;
    for m in range {
        if mag[m] > mag[best] {
            best = m;
        }
    }
    if best == 0 {
        return None;
    }
    let at = |m: isize| mag[m.rem_euclid(big_n as isize) as usize];
    let (y0, y1, y2) = (
        at(best as isize - 1),
        at(best as isize),
        at(best as isize + 1),
    );
    let denom = y0 - T::lit(2.0) * y1 + y2;
    let shift = if denom != T::zero() {
        T::lit(0.5) * (y0 - y2) / denom
    } else {
        T::zero()
    };
    let signed = if best > big_n / 2 {
        best as f64 - big_n as f64
    } else {
        best as f64
    };
    let bin = T::TAU() / T::lit(big_n as f64);
    let f0 = (T::lit(signed) + shift) * bin;
    // bin m of the inverse transform matches e^{+i 2 pi m j / N}
    let refined = match real {
        Some(x) => bisect_peak(f0 - bin, f0 + bin, f0, |f| real_slope(x, &w, f)),
        None => bisect_peak(f0 - bin, f0 + bin, f0, |f| complex_slope(&xw, f)),
    };
    Some(refined)
}

fn check_length(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::SeriesTooShort(format!(
            "{n} samples, need at least {MIN_SAMPLES}"
        )));
    }
    Ok(())
}

fn check_periods<T: Real>(omega: T, n: usize, dt: T) -> Result<T> {
    let periods = omega.abs() * dt * T::lit((n - 1) as f64) / T::TAU();
    if omega != T::zero() && periods < T::lit(MIN_PERIODS) {
        return Err(Error::SeriesTooShort(format!(
            "series spans {:.3} periods of the dominant tone, need {MIN_PERIODS}",
            periods.as_f64()
        )));
    }
    Ok(omega)
}

/// Dominant angular frequency of a uniformly sampled complex amplitude,
/// with sign convention `a(t) ~ e^{-i omega t}` (a positive-energy mode
/// yields `omega = E / hbar`).
///
/// Hann window, zero-padded FFT peak with parabolic interpolation, then a
/// golden-section refinement of the windowed transform around the peak.
pub fn measure_mode_frequency<T: Real>(series: &[Complex<T>], dt: T) -> Result<T> {
    check_length(series.len())?;
    let omega = match dominant_tone(series, None) {
        None => T::zero(),
        Some(f) => f / dt,
    };
    check_periods(omega, series.len(), dt)
}

/// Dominant non-negative angular frequency of a real series after removing
/// its mean. A flat series gives 0.
pub fn measure_oscillation_frequency<T: Real>(series: &[T], dt: T) -> Result<T> {
    check_length(series.len())?;
    let mean = series.iter().copied().sum::<T>() / T::lit(series.len() as f64);
    let scale = series.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let centered: Vec<Complex<T>> = series
        .iter()
        .map(|&x| Complex::new(x - mean, T::zero()))
        .collect();
    let spread = centered.iter().fold(T::zero(), |m, z| m.max(z.re.abs()));
    if spread <= T::lit(1e-13) * scale.max(T::min_positive_value()) {
        return Ok(T::zero());
    }
    let re: Vec<T> = centered.iter().map(|z| z.re).collect();
    let omega = match dominant_tone(&centered, Some(&re)) {
        None => T::zero(),
        Some(f) => f.abs() / dt,
    };
    check_periods(omega, series.len(), dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_tone_recovered() {
        let dt = 0.01;
        let w = 2f64.sqrt();
        let s: Vec<_> = (0..3000)
            .map(|j| Complex::new(0.0, -w * dt * j as f64).exp())
            .collect();
        let got = measure_mode_frequency(&s, dt).unwrap();
        assert!((got / w - 1.0).abs() < 1e-11, "{got}");
    }

    #[test]
    fn real_cosine_recovered() {
        let dt = 0.01;
        let s: Vec<f64> = (0..4000).map(|j| (j as f64 * dt).cos().powi(2)).collect();
        let got = measure_oscillation_frequency(&s, dt).unwrap();
        assert!((got / 2.0 - 1.0).abs() < 1e-11, "{got}");
    }

    #[test]
    fn constant_gives_zero() {
        let s = vec![Complex::new(0.3, 0.1); 64];
        assert_eq!(measure_mode_frequency(&s, 0.1).unwrap(), 0.0);
        assert_eq!(measure_oscillation_frequency(&[2.0; 64], 0.1).unwrap(), 0.0);
    }

    #[test]
    fn short_series_rejected() {
        let s = vec![Complex::new(1.0, 0.0); 8];
        assert!(matches!(
            measure_mode_frequency(&s, 0.1),
            Err(Error::SeriesTooShort(_))
        ));
        let s: Vec<_> = (0..100)
            .map(|j| Complex::new(0.0, 0.01 * j as f64).exp())
            .collect();
        assert!(measure_mode_frequency(&s, 0.1).is_err());
    }
}
