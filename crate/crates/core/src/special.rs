//! Special functions: Hurwitz zeta with a certified remainder, complex
//! log-gamma and digamma on the right half-plane, compensated summation.

use num_complex::Complex64;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

// B_2, B_4, ..., B_22
const BERNOULLI: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Hurwitz zeta ζ(s, q) = Σ_{k≥0} (q+k)^{-s} for integer s ≥ 2, q > 0.
///
/// Returns `(value, bound)`, where `bound` covers the Euler–Maclaurin
/// remainder (at most the first omitted term, the summand being completely
/// monotone) plus a rounding allowance.
pub fn hurwitz_zeta(s: u32, q: f64) -> (f64, f64) {
    assert!(s >= 2 && q > 0.0, "hurwitz_zeta needs s >= 2, q > 0");
    const SHIFT_TO: f64 = 20.0;
    const TERMS: usize = 10;
    let sf = s as f64;
    let mut head = NeumaierSum::new();
    let mut a = q;
    while a < SHIFT_TO {
        head.add(a.powi(-(s as i32)));
        a += 1.0;
    }
    head.add(a.powf(1.0 - sf) / (sf - 1.0));
    head.add(0.5 * a.powf(-sf));

    // term_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · a^{−s−2j+1}
    let inv_a2 = 1.0 / (a * a);
    let mut factor = sf * a.powf(-sf - 1.0); // j = 1: s · a^{-s-1} / 2!
    let mut fact = 2.0;
    let mut poch_top = sf; // largest factor included so far
    let mut omitted = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b * factor / fact;
        if j == TERMS {
            omitted = term.abs();
            break;
        }
        head.add(term);
        factor *= (poch_top + 1.0) * (poch_top + 2.0) * inv_a2;
        poch_top += 2.0;
        let k = 2.0 * (j as f64 + 1.0);
        fact *= (k + 1.0) * (k + 2.0);
    }
    let v = head.value();
    (v, omitted + 8.0 * f64::EPSILON * v.abs())
}

/// Σ_{j=a+1}^{b} 1/j.
pub fn harmonic_range(a: u64, b: u64) -> f64 {
    (a + 1..=b)
        .map(|j| 1.0 / j as f64)
        .collect::<NeumaierSum>()
        .value()
}

fn shift_target(z: Complex64) -> usize {
    const R: f64 = 15.0;
    if z.norm() >= R {
        0
    } else {
        (R - z.re).ceil().max(0.0) as usize
    }
}

/// Principal branch of log Γ(z) for Re z > 0 (continuous, real on the
/// positive axis).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma implemented on Re z > 0 only");
    let shift = shift_target(z);
    let mut w = z;
    let mut corr = Complex64::new(0.0, 0.0);
    for _ in 0..shift {
        corr += w.ln();
        w += 1.0;
    }
    let half_ln_2pi = 0.918_938_533_204_672_7;
    let mut s = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        s += *b / (k2 * (k2 - 1.0) * wp);
        wp *= w2;
    }
    s - corr
}

/// Digamma ψ(z) for Re z > 0.
pub fn digamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "digamma implemented on Re z > 0 only");
    let shift = shift_target(z);
    let mut w = z;
    let mut corr = Complex64::new(0.0, 0.0);
    for _ in 0..shift {
        corr += w.inv();
        w += 1.0;
    }
    let mut s = w.ln() - 0.5 / w;
    let w2 = w * w;
    let mut wp = w2;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        s -= *b / (k2 * wp);
        wp *= w2;
    }
    s - corr
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // reference values are quoted in full
mod tests {
    use super::*;
    use crate::ensembles::{EULER_GAMMA, ZETA3};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn zeta_classical_values() {
        let (z2, e2) = hurwitz_zeta(2, 1.0);
        assert!((z2 - PI * PI / 6.0).abs() < 1e-15);
        assert!(e2 < 1e-14);
        assert!((hurwitz_zeta(4, 1.0).0 - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((hurwitz_zeta(3, 1.0).0 - ZETA3).abs() < 1e-15);
        // ζ(2, 1/2) = 3ζ(2)
        assert!((hurwitz_zeta(2, 0.5).0 - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_reference_values() {
        // arbitrary-precision reference evaluations
        let cases = [
            (2, 1001.0, 0.000_999_500_166_666_633_333_357_142_823_81),
            (4, 37.5, 0.000_006_578_320_488_365_521_143_547_581_796_59),
            (3, 0.25, 64.663_869_968_768_460_166_668_983_589_4),
        ];
        for (s, q, want) in cases {
            let (v, bound) = hurwitz_zeta(s, q);
            assert!(
                (v - want).abs() <= 4.0 * f64::EPSILON * want,
                "{s} {q}: {v}"
            );
            assert!(bound < 1e-14 * want.max(1.0));
        }
    }

    #[test]
    fn zeta_tail_matches_direct_sum() {
        // ζ(2, K+1) = ζ(2) − Σ_{k≤K} k^{-2}
        let k = 200u64;
        let head: NeumaierSum = (1..=k).map(|j| 1.0 / (j * j) as f64).collect();
        let tail = hurwitz_zeta(2, (k + 1) as f64).0;
        assert!((head.value() + tail - PI * PI / 6.0).abs() < 2e-16);
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic_range(0, 1), 1.0);
        assert!((harmonic_range(2, 4) - (1.0 / 3.0 + 0.25)).abs() < 1e-16);
        assert_eq!(harmonic_range(5, 5), 0.0);
    }

    #[test]
    fn ln_gamma_reference_values() {
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-13 * b.norm().max(1.0);
        assert!(close(ln_gamma(c(1.0, 0.0)), c(0.0, 0.0)));
        assert!(close(ln_gamma(c(0.5, 0.0)), c(0.5 * PI.ln(), 0.0)));
        assert!(close(
            ln_gamma(c(1.0, 1.0)),
            c(-0.650_923_199_301_856_3, -0.301_640_320_467_533_2)
        ));
        assert!(close(
            ln_gamma(c(0.3, 7.0)),
            c(-10.465_674_446_702_918_9, 6.310_309_647_040_768_2)
        ));
    }

    #[test]
    fn digamma_reference_values() {
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-13 * b.norm().max(1.0);
        assert!(close(digamma(c(1.0, 0.0)), c(-EULER_GAMMA, 0.0)));
        assert!(close(
            digamma(c(0.5, 0.0)),
            c(-EULER_GAMMA - 2.0 * 2f64.ln(), 0.0)
        ));
        assert!(close(
            digamma(c(0.7, 2.0)),
            c(0.687_544_432_891_511_9, 1.468_855_671_408_930_5)
        ));
        assert!(close(
            digamma(c(1.0, -8.0)),
            c(2.080_745_674_911_801, -1.508_296_326_794_896_6)
        ));
    }

    proptest! {
        #[test]
        fn ln_gamma_recurrence(re in 0.05f64..30.0, im in -60.0f64..60.0) {
            let z = c(re, im);
            let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
            prop_assert!(d.norm() < 1e-12 * (1.0 + ln_gamma(z).norm()));
        }

        #[test]
        fn gamma_modulus_on_line(y in 0.01f64..20.0) {
            // |Γ(1+iy)|² = πy / sinh(πy)
            let lhs = 2.0 * ln_gamma(c(1.0, y)).re;
            let rhs = (PI * y).ln() - (PI * y).sinh().ln();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn digamma_imaginary_part_on_line(y in 0.01f64..50.0) {
            // Im ψ(1+iy) = −1/(2y) + (π/2) coth(πy)
            let want = -0.5 / y + 0.5 * PI / (PI * y).tanh();
            prop_assert!((digamma(c(1.0, y)).im - want).abs() < 1e-12 * (1.0 + want.abs()));
        }

        #[test]
        fn digamma_is_derivative_of_ln_gamma(re in 0.5f64..10.0, im in -20.0f64..20.0) {
            let z = c(re, im);
            let h = 1e-5;
            let fd = (ln_gamma(z + h) - ln_gamma(z - h)) / (2.0 * h);
            prop_assert!((fd - digamma(z)).norm() < 1e-7 * (1.0 + digamma(z).norm()));
        }
    }
}
