//! Chebyshev-basis numerics: interpolation on Lobatto points, Clenshaw
//! evaluation and FFT evaluation on dense grids.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::Real;

/// Chebyshev coefficients `a_0..=a_n` of the degree-`n` interpolant of `f`
/// at the Lobatto points `cos(pi j / n)`.
pub fn interpolate<T: Real>(f: impl Fn(f64) -> f64, n: usize) -> Vec<T> {
    assert!(n >= 1);
    let samples: Vec<f64> = (0..=n)
        .map(|j| f((std::f64::consts::PI * j as f64 / n as f64).cos()))
        .collect();
    let len = 2 * n;
    let mut buf: Vec<Complex<T>> = (0..len)
        .map(|j| {
            let idx = if j <= n { j } else { len - j };
            Complex::new(T::of(samples[idx]), T::zero())
        })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let scale = T::one() / T::of(n as f64);
    let mut coeffs: Vec<T> = buf[..=n].iter().map(|c| c.re * scale).collect();
    let half = T::of(0.5);
    coeffs[0] = coeffs[0] * half;
    coeffs[n] = coeffs[n] * half;
    coeffs
}

/// `Σ a_k T_k(x)` by the Clenshaw recurrence.
pub fn clenshaw<T: Real>(coeffs: &[T], x: T) -> T {
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    let two_x = x + x;
    for &a in coeffs.iter().skip(1).rev() {
        let b0 = a + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or_else(T::zero) + x * b1 - b2
}

/// Values at `x_j = cos(pi j / g)`, `j = 0..=g`, returned as `(x_j, P(x_j))`.
pub fn eval_lobatto_grid<T: Real>(coeffs: &[T], g: usize) -> Vec<(T, T)> {
    let vals = fft_eval(coeffs, g, false);
    (0..=g)
        .map(|j| (T::of((std::f64::consts::PI * j as f64 / g as f64).cos()), vals[j]))
        .collect()
}

/// Values at the interleaved nodes `x_j = cos(pi (j + 1/2) / g)`, `j = 0..g`.
pub fn eval_offset_grid<T: Real>(coeffs: &[T], g: usize) -> Vec<(T, T)> {
    let vals = fft_eval(coeffs, g, true);
    (0..g)
        .map(|j| {
            (
                T::of((std::f64::consts::PI * (j as f64 + 0.5) / g as f64).cos()),
                vals[j],
            )
        })
        .collect()
}

// Re Σ_k a_k exp(-i pi k (j + s) / g) for j = 0..=g with s in {0, 1/2}.
fn fft_eval<T: Real>(coeffs: &[T], g: usize, offset: bool) -> Vec<T> {
    assert!(g >= 1);
    let len = 2 * g;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    // Aliasing: T_k on a g-grid with k > 2g folds back onto k mod 2g.
    for (k, &a) in coeffs.iter().enumerate() {
        let tw = if offset {
            let ang = -std::f64::consts::PI * k as f64 / (2.0 * g as f64);
            Complex::new(T::of(ang.cos()), T::of(ang.sin()))
        } else {
            Complex::new(T::one(), T::zero())
        };
        buf[k % len] = buf[k % len] + tw * a;
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf.iter().take(g + 1).map(|c| c.re).collect()
}

/// Converts monomial coefficients `c_k x^k` to the Chebyshev basis.
pub fn from_monomial<T: Real>(mono: &[T]) -> Vec<T> {
    // x^k = Σ_j t[k][j] T_j(x), built by x·T_j = (T_{j-1} + T_{j+1}) / 2.
    let d = mono.len();
    let mut out = vec![T::zero(); d.max(1)];
    let mut power = vec![T::one()];
    let half = T::of(0.5);
    for (k, &c) in mono.iter().enumerate() {
        if k > 0 {
            let mut next = vec![T::zero(); power.len() + 1];
            for (j, &p) in power.iter().enumerate() {
                if j == 0 {
                    next[1] = next[1] + p;
                } else {
                    next[j - 1] = next[j - 1] + p * half;
                    next[j + 1] = next[j + 1] + p * half;
                }
            }
            power = next;
        }
        for (j, &p) in power.iter().enumerate() {
            out[j] = out[j] + c * p;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cheb_t(k: usize, x: f64) -> f64 {
        (k as f64 * x.acos()).cos()
    }

    #[test]
    fn interpolation_recovers_basis_polynomials() {
        let a: Vec<f64> = interpolate(|x| cheb_t(5, x), 16);
        for (k, c) in a.iter().enumerate() {
            let want = if k == 5 { 1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-13, "k={k} c={c}");
        }
        let b: Vec<f64> = interpolate(|_| 3.0, 4);
        assert!((b[0] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn clenshaw_matches_trig_definition() {
        let coeffs = [0.3, -0.2, 0.5, 0.0, 0.25];
        for &x in &[-1.0, -0.4, 0.0, 0.33, 1.0] {
            let direct: f64 = coeffs.iter().enumerate().map(|(k, a)| a * cheb_t(k, x)).sum();
            assert!((clenshaw(&coeffs, x) - direct).abs() < 1e-14);
        }
        assert_eq!(clenshaw::<f64>(&[], 0.5), 0.0);
        let t4 = [0.0f64, 0.0, 0.0, 0.0, 1.0];
        assert!((clenshaw(&t4, 0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_evaluations_match_clenshaw() {
        let coeffs: Vec<f64> = (0..40).map(|k| 1.0 / (1.0 + k as f64).powi(2)).collect();
        for offset in [false, true] {
            let pts = if offset {
                eval_offset_grid(&coeffs, 50)
            } else {
                eval_lobatto_grid(&coeffs, 50)
            };
            for (x, v) in pts {
                assert!((clenshaw(&coeffs, x) - v).abs() < 1e-12);
            }
        }
        // Coefficient count exceeding the grid aliases correctly.
        let long: Vec<f64> = (0..30).map(|k| 0.9f64.powi(k)).collect();
        for (x, v) in eval_lobatto_grid(&long, 8) {
            assert!((clenshaw(&long, x) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn monomial_conversion() {
        // 2x^2 - 1 = T_2; 4x^3 - 3x = T_3.
        let t2 = from_monomial(&[-1.0f64, 0.0, 2.0]);
        assert!((t2[0]).abs() < 1e-15 && (t2[2] - 1.0).abs() < 1e-15);
        let t3 = from_monomial(&[0.0f64, -3.0, 0.0, 4.0]);
        assert!((t3[1]).abs() < 1e-15 && (t3[3] - 1.0).abs() < 1e-15);
    }
}
