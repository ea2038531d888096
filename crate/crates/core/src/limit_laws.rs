//! Limiting laws ξ_G of N₀²W₂² − 2 log N₀ − c_G.
//!
//! ξ_U = Σ_k (X_k² + Y_k² − 2)/k and, for the orthogonal and symplectic
//! families, ξ = 2Σ_k (X_k² − s_k (2/√k) X_k − 1)/k with s_k the indicator
//! of odd k (odd orthogonal) or even k (the even families).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::Serialize;

use crate::ensembles::{GroupId, LimitClass, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::special::{digamma, hurwitz_zeta, ln_gamma, NeumaierSum};

pub const CF_ENVELOPE: f64 = 50.0;
pub const DEFAULT_K_MAX: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiSampleConfig {
    pub group: GroupId,
    pub k_max: usize,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfPoint {
    pub t: f64,
    pub value: Complex64,
}

/// Whether term k carries the linear Gaussian shift.
fn shifted(class: LimitClass, k: usize) -> bool {
    match class {
        LimitClass::Unitary => false,
        LimitClass::OddOrthogonal => k % 2 == 1,
        LimitClass::Even => k.is_multiple_of(2),
    }
}

/// Truncated series with Gaussians supplied by `gauss` (two per term for the
/// unitary class, one otherwise).
pub fn series_value(class: LimitClass, k_max: usize, mut gauss: impl FnMut() -> f64) -> f64 {
    let mut s = NeumaierSum::new();
    for k in 1..=k_max {
        let kf = k as f64;
        let term = match class {
            LimitClass::Unitary => {
                let (x, y) = (gauss(), gauss());
                (x * x + y * y - 2.0) / kf
            }
            _ => {
                let x = gauss();
                let lin = if shifted(class, k) {
                    2.0 / kf.sqrt() * x
                } else {
                    0.0
                };
                2.0 * (x * x - lin - 1.0) / kf
            }
        };
        s.add(term);
    }
    s.value()
}

/// A way of drawing the truncated series.
pub trait XiSampler: Send + Sync {
    fn name(&self) -> &'static str;
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
}

/// Term-by-term evaluation.
pub struct SeriesSampler {
    class: LimitClass,
    k_max: usize,
}

impl XiSampler for SeriesSampler {
    fn name(&self) -> &'static str {
        "series"
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        series_value(self.class, self.k_max, || rng.sample(StandardNormal))
    }
}

/// Unitary class: Σ_{k≤K} E_k/k has the law of the maximum of K standard
/// exponentials, so the truncated series is 2(M_K − H_K) exactly in law.
pub struct MaxExpSampler {
    k_max: usize,
    harmonic: f64,
}

impl XiSampler for MaxExpSampler {
    fn name(&self) -> &'static str {
        "fast"
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        // U in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let m = -(-(u.ln() / self.k_max as f64).exp_m1()).ln();
        2.0 * (m - self.harmonic)
    }
}

/// Orthogonal classes: exact terms up to `HEAD`, remaining terms replaced by
/// a shifted gamma variable with the same mean, variance and skewness.
pub struct GammaTailSampler {
    class: LimitClass,
    head: usize,
    tail: Option<(Gamma<f64>, f64)>,
}

impl GammaTailSampler {
    pub const HEAD: usize = 1024;

    fn new(class: LimitClass, k_max: usize) -> Self {
        let head = k_max.min(Self::HEAD);
        let mut k2 = NeumaierSum::new();
        let mut k3 = NeumaierSum::new();
        for k in head + 1..=k_max {
            let kf = k as f64;
            let lam = if shifted(class, k) { 1.0 / kf } else { 0.0 };
            k2.add(8.0 * (1.0 + 2.0 * lam) / (kf * kf));
            k3.add(64.0 * (1.0 + 3.0 * lam) / (kf * kf * kf));
        }
        let tail = (k_max > head).then(|| {
            let (k2, k3) = (k2.value(), k3.value());
            let theta = k3 / (2.0 * k2);
            let alpha = k2 / (theta * theta);
            (
                Gamma::new(alpha, theta).expect("positive cumulants"),
                alpha * theta,
            )
        });
        Self { class, head, tail }
    }
}

impl XiSampler for GammaTailSampler {
    fn name(&self) -> &'static str {
        "fast"
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let mut v = series_value(self.class, self.head, || rng.sample(StandardNormal));
        if let Some((g, mean)) = &self.tail {
            v += g.sample(rng) - mean;
        }
        v
    }
}

pub type XiFactory = fn(LimitClass, usize) -> Box<dyn XiSampler>;

static SERIES_FACTORY: XiFactory = |class, k_max| Box::new(SeriesSampler { class, k_max });
static FAST_FACTORY: XiFactory = |class, k_max| match class {
    LimitClass::Unitary => Box::new(MaxExpSampler {
        k_max,
        harmonic: crate::special::harmonic_range(0, k_max as u64),
    }),
    _ => Box::new(GammaTailSampler::new(class, k_max)),
};

pub fn xi_samplers() -> &'static Registry<XiFactory> {
    static REG: std::sync::OnceLock<Registry<XiFactory>> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("xi sampler")
            .register("series", &SERIES_FACTORY)
            .register("fast", &FAST_FACTORY)
    })
}

pub fn xi_sampler(name: &str, group: GroupId, k_max: usize) -> Result<Box<dyn XiSampler>> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    Ok((xi_samplers().get(name)?)(group.limit_class(), k_max))
}

/// One draw of the truncated series, term by term.
pub fn sample_xi<R: Rng + ?Sized>(config: &XiSampleConfig, rng: &mut R) -> Result<f64> {
    if config.k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    Ok(series_value(
        config.group.limit_class(),
        config.k_max,
        || rng.sample(StandardNormal),
    ))
}

/// Standard deviation of the neglected terms k > k_max.
pub fn tail_sd(group: GroupId, k_max: usize) -> f64 {
    let q = (k_max + 1) as f64;
    let var = match group.limit_class() {
        LimitClass::Unitary => 4.0 * hurwitz_zeta(2, q).0,
        class => {
            // first shifted index above k_max
            let mut first = k_max + 1;
            if !shifted(class, first) {
                first += 1;
            }
            8.0 * hurwitz_zeta(2, q).0 + 16.0 * hurwitz_zeta(3, first as f64 / 2.0).0 / 8.0
        }
    };
    var.sqrt()
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t.abs() <= CF_ENVELOPE {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "|t| = {t} outside [0, {CF_ENVELOPE}]"
        )))
    }
}

/// Closed-form characteristic function of ξ_G.
pub fn xi_cf(group: GroupId, t: f64) -> Result<Complex64> {
    check_t(t)?;
    let i = Complex64::i();
    let z2 = Complex64::new(1.0, -2.0 * t);
    let z4 = Complex64::new(1.0, -4.0 * t);
    let g = EULER_GAMMA;
    let class = group.limit_class();
    let log = match class {
        LimitClass::Unitary => ln_gamma(z2) - 2.0 * g * i * t,
        LimitClass::OddOrthogonal => {
            0.5 * ln_gamma(z4)
                - class.c_g_shift() * i * t
                - (2.0 * digamma(z4) - digamma(z2) + g) / 4.0
        }
        LimitClass::Even => {
            0.5 * ln_gamma(z4) - class.c_g_shift() * i * t - (digamma(z2) + g) / 4.0
        }
    };
    Ok(log.exp())
}

impl LimitClass {
    /// c_G − 2.
    fn c_g_shift(self) -> f64 {
        self.c_g() - 2.0
    }
}

/// Partial product over k ≤ k_max of the per-term characteristic functions,
/// accumulated in log space.
pub fn xi_cf_product(group: GroupId, t: f64, k_max: usize) -> Result<Complex64> {
    check_t(t)?;
    let class = group.limit_class();
    let i = Complex64::i();
    let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
    for k in 1..=k_max {
        let kf = k as f64;
        let term = match class {
            LimitClass::Unitary => -(1.0 - 2.0 * i * t / kf).ln() - 2.0 * i * t / kf,
            _ => {
                let mut l = -0.5 * (1.0 - 4.0 * i * t / kf).ln() - 2.0 * i * t / kf;
                if shifted(class, k) {
                    l += 2.0 * i * t / (kf * kf - 4.0 * i * t * kf) - 2.0 * i * t / (kf * kf);
                }
                l
            }
        };
        re.add(term.re);
        im.add(term.im);
    }
    Ok(Complex64::new(re.value(), im.value()).exp())
}

/// Density of ξ_U: ½ exp(−u − e^{−u}) with u = (x + 2γ)/2.
pub fn xi_u_density(x: f64) -> f64 {
    let u = (x + 2.0 * EULER_GAMMA) / 2.0;
    0.5 * (-u - (-u).exp()).exp()
}

pub fn xi_u_cdf(x: f64) -> f64 {
    let u = (x + 2.0 * EULER_GAMMA) / 2.0;
    (-(-u).exp()).exp()
}

/// (E ξ_G, Var ξ_G) = (0, σ_G).
pub fn xi_moments(group: GroupId) -> (f64, f64) {
    (0.0, group.sigma_g())
}

/// Numerical Fourier inversion of [`xi_cf`] for the unitary class, used to
/// cross-check the density.
pub fn xi_u_density_from_cf(x: f64) -> Result<f64> {
    // |φ(t)| ~ e^{−πt}; truncating at t = 15 leaves < 1e−18
    let (t_max, steps) = (15.0, 6000usize);
    let h = t_max / steps as f64;
    let f = |t: f64| -> Result<f64> {
        Ok((Complex64::from_polar(1.0, -t * x) * xi_cf(GroupId::U, t)?).re)
    };
    let mut s = f(0.0)? + f(t_max)?;
    for j in 1..steps {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(j as f64 * h)?;
    }
    Ok(s * h / 3.0 / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_two_sample, Moments};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CLASSES: [GroupId; 3] = [GroupId::U, GroupId::SoOdd, GroupId::Usp];

    #[test]
    fn zero_gaussians_give_minus_two_harmonic() {
        let cfg = XiSampleConfig {
            group: GroupId::U,
            k_max: 50,
            replicates: 1,
            seed: 0,
        };
        let v = series_value(cfg.group.limit_class(), cfg.k_max, || 0.0);
        let want: f64 = (1..=50).map(|k| -2.0 / k as f64).sum();
        assert!((v - want).abs() < 1e-13);
    }

    #[test]
    fn cf_basic_properties() {
        for g in CLASSES {
            assert!((xi_cf(g, 0.0).unwrap() - 1.0).norm() < 1e-15);
            for t in [0.3, 1.1, 2.7, 10.0, 49.0] {
                let a = xi_cf(g, t).unwrap();
                let b = xi_cf(g, -t).unwrap();
                assert!((a.conj() - b).norm() < 1e-12, "{g} {t}");
                assert!(a.norm() <= 1.0 + 1e-12);
            }
            assert!(xi_cf(g, 51.0).is_err());
            assert_eq!(xi_cf_product(g, 0.0, 10).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn cf_curvature_is_minus_variance() {
        let h = 1e-4;
        for g in CLASSES {
            let d2 = (xi_cf(g, h).unwrap() + xi_cf(g, -h).unwrap() - 2.0) / (h * h);
            assert!((d2.re + g.sigma_g()).abs() < 1e-4, "{g}: {}", d2.re);
            // zero mean: first derivative vanishes
            let d1 = (xi_cf(g, h).unwrap() - xi_cf(g, -h).unwrap()) / (2.0 * h);
            assert!(d1.norm() < 1e-5);
        }
    }

    #[test]
    fn product_converges_to_closed_form() {
        for g in CLASSES {
            for t in [0.5, 1.0, 2.0] {
                let p = xi_cf_product(g, t, 1_000_000).unwrap();
                let c = xi_cf(g, t).unwrap();
                assert!((p - c).norm() < 1e-4, "{g} t={t}: {p} vs {c}");
            }
        }
    }

    #[test]
    fn density_and_cdf() {
        assert!((xi_u_density(-2.0 * EULER_GAMMA) - 0.5 * (-1.0f64).exp()).abs() < 1e-16);
        let xs: Vec<f64> = (0..=600).map(|i| -20.0 + i as f64 * 0.1).collect();
        assert!(xs.windows(2).all(|w| xi_u_cdf(w[0]) <= xi_u_cdf(w[1])));
        assert!(xi_u_cdf(-20.0) < 1e-12 && xi_u_cdf(40.0) > 1.0 - 1e-8);
        // derivative of the CDF is the density
        for x in [-3.0, 0.0, 1.5, 7.0] {
            let h = 1e-5;
            let d = (xi_u_cdf(x + h) - xi_u_cdf(x - h)) / (2.0 * h);
            assert!((d - xi_u_density(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn density_from_cf_inversion() {
        for x in [-2.0, 0.0, 2.0, 5.0] {
            let inv = xi_u_density_from_cf(x).unwrap();
            assert!((inv - xi_u_density(x)).abs() < 1e-3, "{x}: {inv}");
        }
    }

    #[test]
    fn tail_sd_bounds() {
        for k in [10usize, 1000, 100_000] {
            assert!(tail_sd(GroupId::U, k) <= 2.0 / (k as f64).sqrt());
            assert!(tail_sd(GroupId::SoOdd, k) <= 4.0 / (k as f64).sqrt());
            assert!(tail_sd(GroupId::SoEven, k) <= 4.0 / (k as f64).sqrt());
        }
    }

    #[test]
    fn fast_and_series_samplers_agree() {
        let reps = 20_000;
        let k = 3000;
        for g in CLASSES {
            let series = xi_sampler("series", g, k).unwrap();
            let fast = xi_sampler("fast", g, k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            let a: Vec<f64> = (0..reps).map(|_| series.sample(&mut rng)).collect();
            let b: Vec<f64> = (0..reps).map(|_| fast.sample(&mut rng)).collect();
            let crit = 1.95 * (2.0 / reps as f64).sqrt();
            assert!(ks_two_sample(&a, &b) < crit, "{g}");
        }
    }

    #[test]
    fn fast_sampler_moments() {
        let reps = 100_000;
        for g in CLASSES {
            let s = xi_sampler("fast", g, DEFAULT_K_MAX).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            let m: Moments = (0..reps).map(|_| s.sample(&mut rng)).collect();
            let (mu, var) = xi_moments(g);
            assert!((m.mean() - mu).abs() < 4.0 * m.mean_std_err(), "{g}");
            assert!(
                (m.variance() - var).abs() < 4.0 * m.variance_std_err(),
                "{g}"
            );
        }
    }

    #[test]
    fn sample_xi_matches_series_hook() {
        let cfg = XiSampleConfig {
            group: GroupId::SoEven,
            k_max: 40,
            replicates: 1,
            seed: 0,
        };
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let v = sample_xi(&cfg, &mut a).unwrap();
        let w = series_value(LimitClass::Even, 40, || b.sample(StandardNormal));
        assert_eq!(v, w);
        assert!(xi_sampler("fast", GroupId::U, 0).is_err());
        assert!(xi_sampler("exact", GroupId::U, 5).is_err());
    }
}
