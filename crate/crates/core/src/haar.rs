//! Haar-distributed matrices via QR of Gaussian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensembles::GroupId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixEntries {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarMatrix {
    pub group: GroupId,
    pub dim: usize,
    pub entries: MatrixEntries,
}

/// Matrix dimension used for `group` with parameter `n`.
pub fn matrix_dim(group: GroupId, n: usize) -> Result<usize> {
    match group {
        GroupId::U => Ok(n),
        GroupId::SoOdd | GroupId::OOdd => Ok(2 * n + 1),
        GroupId::SoEven => Ok(2 * n),
        GroupId::OMinus => Ok(2 * n + 2),
        g => Err(Error::UnsupportedGroup(g)),
    }
}

fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        if n > 0.0 {
            let phase = rjj / n;
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Haar sample on U(n), SO(2n+1), O⁻(2n+1), SO(2n) or O⁻(2n+2). The
/// determinant −1 cosets are a Haar SO matrix times diag(−1, 1, …, 1).
pub fn sample_haar_matrix<R: Rng + ?Sized>(
    group: GroupId,
    n: usize,
    rng: &mut R,
) -> Result<HaarMatrix> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let dim = matrix_dim(group, n)?;
    let entries = if group == GroupId::U {
        MatrixEntries::Complex(haar_unitary(dim, rng))
    } else {
        let mut q = haar_orthogonal(dim, rng);
        let want_negative = matches!(group, GroupId::OOdd | GroupId::OMinus);
        let negative = q.clone().determinant() < 0.0;
        if negative != want_negative {
            q.column_mut(0).neg_mut();
        }
        MatrixEntries::Real(q)
    };
    Ok(HaarMatrix {
        group,
        dim,
        entries,
    })
}

impl HaarMatrix {
    /// max |A*A − I|.
    pub fn unitarity_defect(&self) -> f64 {
        match &self.entries {
            MatrixEntries::Real(a) => {
                let p = a.transpose() * a;
                (p - DMatrix::<f64>::identity(self.dim, self.dim)).amax()
            }
            MatrixEntries::Complex(a) => {
                let p = a.adjoint() * a;
                let e = p - DMatrix::<Complex64>::identity(self.dim, self.dim);
                e.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
        }
    }

    pub fn determinant(&self) -> Complex64 {
        match &self.entries {
            MatrixEntries::Real(a) => Complex64::new(a.clone().determinant(), 0.0),
            MatrixEntries::Complex(a) => a.clone().determinant(),
        }
    }
}

/// (Tr A, Tr A², …, Tr A^{k_max}) by repeated multiplication.
pub fn traces(matrix: &HaarMatrix, k_max: usize) -> Result<Vec<Complex64>> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    Ok(match &matrix.entries {
        MatrixEntries::Real(a) => {
            let mut p = a.clone();
            let mut out = vec![Complex64::new(p.trace(), 0.0)];
            for _ in 1..k_max {
                p = &p * a;
                out.push(Complex64::new(p.trace(), 0.0));
            }
            out
        }
        MatrixEntries::Complex(a) => {
            let mut p = a.clone();
            let mut out = vec![p.trace()];
            for _ in 1..k_max {
                p = &p * a;
                out.push(p.trace());
            }
            out
        }
    })
}
