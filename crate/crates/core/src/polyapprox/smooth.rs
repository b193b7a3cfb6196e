//! Smooth targets that get projected onto Chebyshev polynomials.

use statrs::function::erf::{erfc, erfc_inv};

/// `x ↦ erfc(-kappa (x - center) / half_width) / 2`, rising from 0 to 1 across
/// `[center - half_width, center + half_width]` and within `tail` of its limits
/// outside that window.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ramp {
    center: f64,
    half_width: f64,
    kappa: f64,
}

impl Ramp {
    pub(crate) fn new(center: f64, half_width: f64, tail: f64) -> Self {
        let tail = tail.clamp(1e-300, 0.25);
        Self {
            center,
            half_width,
            kappa: erfc_inv(2.0 * tail),
        }
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        0.5 * erfc(-self.kappa * (x - self.center) / self.half_width)
    }

    /// Even step: near 0 on `|x| <= center - half_width`, near 1 on
    /// `center + half_width <= |x| <= 1`.
    pub(crate) fn even_step(&self, x: f64) -> f64 {
        self.value(x) + self.value(-x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_tails() {
        let r = Ramp::new(0.5, 0.1, 1e-6);
        assert!(r.value(0.4) <= 1e-6 * 1.0001);
        assert!(r.value(0.6) >= 1.0 - 1e-6 * 1.0001);
        assert!((r.value(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn even_step_is_even() {
        let r = Ramp::new(0.3, 0.1, 1e-4);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert_eq!(r.even_step(x), r.even_step(-x));
        }
        assert!(r.even_step(0.0) < 1e-8);
        assert!(r.even_step(1.0) > 1.0 - 1.1e-4);
    }
}
