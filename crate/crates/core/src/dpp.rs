//! Exact sampling of the projection determinantal point processes.
//!
//! Points are drawn one at a time. After i points the next one has density
//! proportional to the squared norm of φ(x) projected onto the orthogonal
//! complement of the already chosen feature vectors, sampled by rejection
//! against a uniform envelope at sup K(x,x). The complement is kept as an
//! orthonormal row basis V; a Householder reflection removes the accepted
//! direction in O(rank²) work, so a draw costs O(rank³) overall.

use rand::Rng;
use serde::Serialize;

use crate::ensembles::{EnsembleSpec, GroupId};
use crate::error::{Error, Result};
use crate::rng::replicate_rng;
use crate::wasserstein::SpectralMeasure;

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedPath {
    pub seed: u64,
    pub replicate: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleSample {
    pub spec: EnsembleSpec,
    /// Sorted ascending, inside `spec.interval`.
    pub angles: Vec<f64>,
    pub seed_path: Option<SeedPath>,
}

#[derive(Serialize)]
struct SampleLine<'a> {
    group: GroupId,
    n: usize,
    seed: Option<u64>,
    replicate: Option<u64>,
    angles: &'a [f64],
}

impl AngleSample {
    /// JSON-lines record `{group, n, seed, replicate, angles}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&SampleLine {
            group: self.spec.group,
            n: self.spec.n,
            seed: self.seed_path.map(|s| s.seed),
            replicate: self.seed_path.map(|s| s.replicate),
            angles: &self.angles,
        })
        .expect("sample serializes")
    }
}

/// Reusable state for repeated draws from one ensemble.
#[derive(Debug, Clone)]
pub struct DppSampler {
    spec: EnsembleSpec,
    max_attempts: u64,
    basis: Vec<f64>,
    phi: Vec<f64>,
    coef: Vec<f64>,
    work: Vec<f64>,
}

impl DppSampler {
    pub fn new(spec: EnsembleSpec) -> Self {
        let n = spec.n;
        Self {
            spec,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            basis: vec![0.0; n * n],
            phi: vec![0.0; n],
            coef: vec![0.0; n],
            work: vec![0.0; n],
        }
    }

    pub fn with_max_attempts(mut self, cap: u64) -> Self {
        self.max_attempts = cap.max(1);
        self
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    /// Draw the points in the order the chain produces them (unsorted).
    pub fn draw_unsorted<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Vec<f64>> {
        let n = self.spec.n;
        let kernel = self.spec.kernel_impl();
        let (a, b) = self.spec.interval;
        let sup = kernel.diag_sup(n);

        self.basis.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            self.basis[i * n + i] = 1.0;
        }
        let mut out = Vec::with_capacity(n);

        for point in 0..n {
            let rank = n - point;
            let rows = &self.basis[point * n..];
            let mut attempts = 0u64;
            let (x, norm2) = loop {
                attempts += 1;
                if attempts > self.max_attempts {
                    return Err(Error::SamplingFailure {
                        point,
                        rank: n,
                        attempts: attempts - 1,
                        replicate: None,
                    });
                }
                let x = a + (b - a) * rng.random::<f64>();
                kernel.features(n, x, &mut self.phi);
                let mut s = 0.0;
                for m in 0..rank {
                    let row = &rows[m * n..(m + 1) * n];
                    let c: f64 = row.iter().zip(&self.phi).map(|(v, p)| v * p).sum();
                    self.coef[m] = c;
                    s += c * c;
                }
                if rng.random::<f64>() * sup < s {
                    break (x, s);
                }
            };
            out.push(x);
            if rank > 1 {
                self.reflect_out(point, rank, norm2.sqrt());
            }
        }
        Ok(out)
    }

    /// Replace the active rows by a basis of their span orthogonal to
    /// Σ coef_m row_m: reflect coef onto e₀ and drop the first row.
    fn reflect_out(&mut self, first: usize, rank: usize, norm: f64) {
        let n = self.spec.n;
        let c = &mut self.coef[..rank];
        let alpha = if c[0] >= 0.0 { -norm } else { norm };
        c[0] -= alpha;
        let vtv: f64 = c.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            return;
        }
        let rows = &mut self.basis[first * n..];
        let w = &mut self.work;
        w.iter_mut().for_each(|x| *x = 0.0);
        for (m, &cm) in c.iter().enumerate() {
            if cm != 0.0 {
                for (wj, vj) in w.iter_mut().zip(&rows[m * n..(m + 1) * n]) {
                    *wj += cm * vj;
                }
            }
        }
        let scale = 2.0 / vtv;
        for m in 1..rank {
            let f = scale * c[m];
            if f != 0.0 {
                for (vj, wj) in rows[m * n..(m + 1) * n].iter_mut().zip(w.iter()) {
                    *vj -= f * wj;
                }
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<AngleSample> {
        let mut angles = self.draw_unsorted(rng)?;
        angles.sort_by(f64::total_cmp);
        Ok(AngleSample {
            spec: self.spec,
            angles,
            seed_path: None,
        })
    }

    /// Draw replicate `replicate` of the stream family `(seed, key)`.
    pub fn draw_replicate(&mut self, seed: u64, key: u64, replicate: u64) -> Result<AngleSample> {
        let mut rng = replicate_rng(seed, key, replicate);
        let mut s = self.draw(&mut rng).map_err(|e| match e {
            Error::SamplingFailure {
                point,
                rank,
                attempts,
                ..
            } => Error::SamplingFailure {
                point,
                rank,
                attempts,
                replicate: Some(replicate),
            },
            other => other,
        })?;
        s.seed_path = Some(SeedPath { seed, replicate });
        Ok(s)
    }
}

pub fn sample_angles<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<AngleSample> {
    DppSampler::new(*spec).draw(rng)
}

/// μ_A: the angles themselves for U/SU, else {θ} ∪ {2π − θ}.
pub fn angles_to_spectral_measure(sample: &AngleSample) -> SpectralMeasure {
    let atoms: Vec<f64> = if sample.spec.group.is_unitary() {
        sample.angles.clone()
    } else {
        sample
            .angles
            .iter()
            .flat_map(|&t| [t, std::f64::consts::TAU - t])
            .collect()
    };
    SpectralMeasure::new(atoms).expect("samples are nonempty and finite")
}
