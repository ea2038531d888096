//! W₂² between an empirical measure on the circle and the uniform measure.
//!
//! With Fourier coefficients μ̂(k) the distance is 2Σ_{k≥1}|μ̂(k)|²/k².
//! Summing Σ_{k≠0} e^{ikx}/k² in closed form gives the pairwise kernel
//! b(x) = x²/2 − πx + π²/3 on [0, 2π), hence
//! W₂² = N₀⁻² Σ_{n,m} b(θ_n − θ_m).

use std::f64::consts::{PI, SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::special::NeumaierSum;

/// Equal-weight atoms on the circle, angles in [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    atoms: Vec<f64>,
}

/// Reduce an angle to [0, 2π).
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl SpectralMeasure {
    pub fn new(atoms: impl IntoIterator<Item = f64>) -> Result<Self> {
        let atoms: Vec<f64> = atoms.into_iter().map(canonical_angle).collect();
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if let Some(bad) = atoms.iter().find(|a| !a.is_finite()) {
            return Err(Error::Domain(format!("non-finite atom {bad}")));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn n0(&self) -> usize {
        self.atoms.len()
    }

    /// N equally spaced atoms starting at `phase`.
    pub fn equally_spaced(n: usize, phase: f64) -> Result<Self> {
        Self::new((0..n).map(|j| phase + TAU * j as f64 / n as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum W2Method {
    Closed,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct W2Result {
    pub value: f64,
    pub method: W2Method,
    pub tail_bound: f64,
}

/// μ̂(k) = N₀⁻¹ Σ e^{ikθ}.
pub fn fourier_coeff(measure: &SpectralMeasure, k: i64) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::Domain("fourier_coeff: k = 0 is excluded".into()));
    }
    let s: Complex64 = measure
        .atoms
        .iter()
        .map(|&t| Complex64::from_polar(1.0, k as f64 * t))
        .sum();
    Ok(s / measure.n0() as f64)
}

/// b(d) for d = θ_n − θ_m ∈ (−2π, 2π); equals b(d mod 2π).
#[inline]
fn bernoulli_kernel(d: f64) -> f64 {
    let u = d.abs() - PI;
    0.5 * u * u - PI * PI / 6.0
}

pub fn w2sq_closed(measure: &SpectralMeasure) -> W2Result {
    let a = &measure.atoms;
    let n0 = a.len() as f64;
    let mut total = NeumaierSum::new();
    total.add(n0 * PI * PI / 3.0);
    for (i, &x) in a.iter().enumerate() {
        let row: f64 = a[..i].iter().map(|&y| bernoulli_kernel(x - y)).sum();
        total.add(2.0 * row);
    }
    W2Result {
        value: (total.value() / (n0 * n0)).max(0.0),
        method: W2Method::Closed,
        tail_bound: 0.0,
    }
}

pub fn w2sq_fourier(measure: &SpectralMeasure, k_max: usize) -> Result<W2Result> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    const RESEED: usize = 512;
    let n = measure.n0();
    let (mut re, mut im) = (vec![0.0; n], vec![0.0; n]);
    let (step_re, step_im): (Vec<f64>, Vec<f64>) =
        measure.atoms.iter().map(|&t| (t.cos(), t.sin())).unzip();
    let mut total = NeumaierSum::new();
    for k in 1..=k_max {
        if (k - 1) % RESEED == 0 {
            for (j, &t) in measure.atoms.iter().enumerate() {
                let (s, c) = (k as f64 * t).sin_cos();
                re[j] = c;
                im[j] = s;
            }
        } else {
            for j in 0..n {
                let r = re[j] * step_re[j] - im[j] * step_im[j];
                im[j] = re[j] * step_im[j] + im[j] * step_re[j];
                re[j] = r;
            }
        }
        let sr: f64 = re.iter().sum();
        let si: f64 = im.iter().sum();
        total.add((sr * sr + si * si) / (k as f64 * k as f64));
    }
    Ok(W2Result {
        value: 2.0 * total.value() / (n as f64 * n as f64),
        method: W2Method::Fourier,
        tail_bound: 2.0 / k_max as f64,
    })
}

/// Periodic L² discrepancy Δ₂ = W₂ / (√2 π).
pub fn diaphony(measure: &SpectralMeasure) -> f64 {
    w2sq_closed(measure).value.sqrt() / (SQRT_2 * PI)
}

/// ‖F_A‖_{L²} = N₀ W₂.
pub fn fa_l2norm(measure: &SpectralMeasure) -> f64 {
    measure.n0() as f64 * w2sq_closed(measure).value.sqrt()
}

/// A way of computing W₂².
pub trait W2Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn estimate(&self, measure: &SpectralMeasure) -> Result<W2Result>;
}

pub struct ClosedForm;

pub struct FourierSeries {
    pub k_max: usize,
}

impl W2Estimator for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }
    fn estimate(&self, measure: &SpectralMeasure) -> Result<W2Result> {
        Ok(w2sq_closed(measure))
    }
}

impl W2Estimator for FourierSeries {
    fn name(&self) -> &'static str {
        "fourier"
    }
    fn estimate(&self, measure: &SpectralMeasure) -> Result<W2Result> {
        w2sq_fourier(measure, self.k_max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct W2Params {
    pub k_max: usize,
}

impl Default for W2Params {
    fn default() -> Self {
        Self { k_max: 100_000 }
    }
}

pub type W2Factory = fn(&W2Params) -> Box<dyn W2Estimator>;

static CLOSED_FACTORY: W2Factory = |_| Box::new(ClosedForm);
static FOURIER_FACTORY: W2Factory = |p| Box::new(FourierSeries { k_max: p.k_max });

pub fn w2_estimators() -> &'static Registry<W2Factory> {
    static REG: std::sync::OnceLock<Registry<W2Factory>> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("w2 estimator")
            .register("closed", &CLOSED_FACTORY)
            .register("fourier", &FOURIER_FACTORY)
    })
}

pub fn w2_estimator(name: &str, params: &W2Params) -> Result<Box<dyn W2Estimator>> {
    Ok((w2_estimators().get(name)?)(params))
}
