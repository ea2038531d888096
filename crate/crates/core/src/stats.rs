//! Streaming moments, Kolmogorov–Smirnov statistics, empirical
//! characteristic functions.

use num_complex::Complex64;
use serde::Serialize;

use crate::special::NeumaierSum;

/// Running central moments up to order four (pairwise-mergeable updates).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let t1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += t1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += t1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += t1;
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d = other.mean - self.mean;
        let d2 = d * d;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d * d2 * na * nb * (na - nb) / (n * n)
            + 3.0 * d * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * other.m3 - nb * self.m3) / n;
        self.mean += d * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (0 for fewer than two points).
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Fourth central sample moment.
    pub fn central4(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m4 / self.n as f64
        }
    }

    pub fn mean_std_err(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    /// Large-sample standard error of the sample variance, √((μ₄ − σ⁴)/n).
    pub fn variance_std_err(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let v = self.variance();
        ((self.central4() - v * v).max(0.0) / self.n as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}

/// (sample − exact)/se; 0 when both agree exactly and se vanishes.
pub fn z_score(sample: f64, exact: f64, se: f64) -> f64 {
    let d = sample - exact;
    if se > 0.0 {
        d / se
    } else if d.abs() <= 1e-12 * exact.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY.copysign(d)
    }
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// sup |F_n − F| against a continuous reference CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let v = sorted(samples);
    let n = v.len() as f64;
    v.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// sup |F_a − F_b| between two empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic Kolmogorov tail P(D > d) for effective sample size `ne`.
pub fn ks_p_value(d: f64, ne: f64) -> f64 {
    let sq = ne.sqrt();
    let lambda = (sq + 0.12 + 0.11 / sq) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// n⁻¹ Σ e^{itx}.
pub fn empirical_cf(samples: &[f64], t: f64) -> Complex64 {
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for &x in samples {
        let (s, c) = (t * x).sin_cos();
        re.add(c);
        im.add(s);
    }
    let n = samples.len() as f64;
    Complex64::new(re.value() / n, im.value() / n)
}

/// Serializable snapshot of a [`Moments`] accumulator.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

impl From<&Moments> for Summary {
    fn from(m: &Moments) -> Self {
        Summary {
            count: m.count(),
            mean: m.mean(),
            variance: m.variance(),
            mean_se: m.mean_std_err(),
            variance_se: m.variance_std_err(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(x: &[f64]) -> (f64, f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
        let c4 = x.iter().map(|a| (a - m).powi(4)).sum::<f64>() / n;
        (m, v, c4)
    }

    #[test]
    fn small_sample() {
        let m: Moments = [1.0, 2.0, 3.0, 4.0].into_iter().collect();
        assert_eq!(m.count(), 4);
        assert!((m.mean() - 2.5).abs() < 1e-15);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert!((m.central4() - (2.0 * 5.0625 + 2.0 * 0.0625) / 4.0).abs() < 1e-14);
        let one: Moments = [3.0].into_iter().collect();
        assert_eq!((one.variance(), one.mean_std_err()), (0.0, 0.0));
    }

    #[test]
    fn z_scores() {
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert_eq!(z_score(2.0, 1.0, 0.5), 2.0);
        assert!(z_score(2.0, 1.0, 0.0).is_infinite());
    }

    #[test]
    fn ks_examples() {
        let u: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        assert!((ks_one_sample(&u, |x| x.clamp(0.0, 1.0)) - 0.05).abs() < 1e-15);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]) - 0.5).abs() < 1e-15);
        assert!(ks_p_value(0.0, 100.0) == 1.0);
        // critical value at the 5% level is about 1.358/√n
        assert!((ks_p_value(1.358 / 100.0, 1e4) - 0.05).abs() < 2e-3);
    }

    #[test]
    fn cf_of_point_mass() {
        let c = empirical_cf(&[2.0, 2.0], 0.5);
        assert!((c - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn streaming_matches_two_pass(x in proptest::collection::vec(-100.0f64..100.0, 2..200)) {
            let m: Moments = x.iter().copied().collect();
            let (mean, var, c4) = naive(&x);
            prop_assert!((m.mean() - mean).abs() < 1e-10);
            prop_assert!((m.variance() - var).abs() < 1e-8 * var.max(1.0));
            prop_assert!((m.central4() - c4).abs() < 1e-7 * c4.max(1.0));
        }

        #[test]
        fn merge_matches_single_pass(x in proptest::collection::vec(-10.0f64..10.0, 2..200), cut in 0usize..200) {
            let cut = cut.min(x.len());
            let whole: Moments = x.iter().copied().collect();
            let mut a: Moments = x[..cut].iter().copied().collect();
            let b: Moments = x[cut..].iter().copied().collect();
            a.merge(&b);
            prop_assert_eq!(a.count(), whole.count());
            prop_assert!((a.mean() - whole.mean()).abs() < 1e-12);
            prop_assert!((a.variance() - whole.variance()).abs() < 1e-9 * whole.variance().max(1.0));
            prop_assert!((a.central4() - whole.central4()).abs() < 1e-8 * whole.central4().max(1.0));
        }
    }
}
