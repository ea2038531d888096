//! The seven group families, their constants and their eigen-angle kernels.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupId {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "su")]
    Su,
    #[serde(rename = "so-odd")]
    SoOdd,
    #[serde(rename = "o-odd")]
    OOdd,
    #[serde(rename = "so-even")]
    SoEven,
    #[serde(rename = "o-minus")]
    OMinus,
    #[serde(rename = "usp")]
    Usp,
}

impl GroupId {
    pub const ALL: [GroupId; 7] = [
        GroupId::U,
        GroupId::Su,
        GroupId::SoOdd,
        GroupId::OOdd,
        GroupId::SoEven,
        GroupId::OMinus,
        GroupId::Usp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupId::U => "u",
            GroupId::Su => "su",
            GroupId::SoOdd => "so-odd",
            GroupId::OOdd => "o-odd",
            GroupId::SoEven => "so-even",
            GroupId::OMinus => "o-minus",
            GroupId::Usp => "usp",
        }
    }

    /// The group whose point process is actually sampled.
    pub fn canonical(self) -> GroupId {
        match self {
            GroupId::Su => GroupId::U,
            GroupId::OOdd => GroupId::SoOdd,
            GroupId::OMinus => GroupId::Usp,
            g => g,
        }
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, GroupId::U | GroupId::Su)
    }

    pub fn kernel_family(self) -> KernelFamily {
        match self.canonical() {
            GroupId::U => KernelFamily::Exp,
            GroupId::SoOdd => KernelFamily::SinHalf,
            GroupId::SoEven => KernelFamily::Cos,
            _ => KernelFamily::Sin,
        }
    }

    /// Limit family of the centered statistic.
    pub fn limit_class(self) -> LimitClass {
        match self.kernel_family() {
            KernelFamily::Exp => LimitClass::Unitary,
            KernelFamily::SinHalf => LimitClass::OddOrthogonal,
            KernelFamily::Cos | KernelFamily::Sin => LimitClass::Even,
        }
    }

    pub fn n0(self, n: usize) -> usize {
        if self.is_unitary() {
            n
        } else {
            2 * n
        }
    }

    /// Eigenvalues forced to ±1, as points on the unit circle.
    pub fn trivial(self) -> &'static [f64] {
        match self {
            GroupId::SoOdd => &[1.0],
            GroupId::OOdd => &[-1.0],
            GroupId::OMinus => &[1.0, -1.0],
            _ => &[],
        }
    }

    pub fn c_g(self) -> f64 {
        self.limit_class().c_g()
    }

    pub fn sigma_g(self) -> f64 {
        self.limit_class().sigma_g()
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        GroupId::ALL
            .into_iter()
            .find(|g| g.as_str() == key)
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// The three limiting laws: unitary, odd orthogonal, and the even families
/// (SO(2N), O⁻(2N+2), USp(2N)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitClass {
    Unitary,
    OddOrthogonal,
    Even,
}

impl LimitClass {
    pub fn c_g(self) -> f64 {
        let base = 2.0 * EULER_GAMMA + 2.0;
        match self {
            LimitClass::Unitary => base,
            LimitClass::OddOrthogonal => base + PI * PI / 4.0,
            LimitClass::Even => base + PI * PI / 12.0,
        }
    }

    pub fn sigma_g(self) -> f64 {
        let p2 = PI * PI;
        match self {
            LimitClass::Unitary => 2.0 * p2 / 3.0,
            LimitClass::OddOrthogonal => 4.0 * p2 / 3.0 + 14.0 * ZETA3,
            LimitClass::Even => 4.0 * p2 / 3.0 + 2.0 * ZETA3,
        }
    }

    /// A representative group for this class.
    pub fn group(self) -> GroupId {
        match self {
            LimitClass::Unitary => GroupId::U,
            LimitClass::OddOrthogonal => GroupId::SoOdd,
            LimitClass::Even => GroupId::SoEven,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    Exp,
    SinHalf,
    Cos,
    Sin,
}

impl KernelFamily {
    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Exp => "exp",
            KernelFamily::SinHalf => "sin-half",
            KernelFamily::Cos => "cos",
            KernelFamily::Sin => "sin",
        }
    }

    pub fn kernel(self) -> &'static dyn Kernel {
        kernels()
            .get(self.name())
            .expect("every family is registered")
    }
}

/// One determinantal kernel family: an interval and a rank-`n` orthonormal
/// basis with respect to normalized Lebesgue measure on it.
pub trait Kernel: Send + Sync {
    fn family(&self) -> KernelFamily;

    fn interval(&self) -> (f64, f64);

    /// j-th basis function, `j < rank`.
    fn basis(&self, rank: usize, j: usize, x: f64) -> Complex64;

    /// K(x, y) by its closed trigonometric sum.
    fn eval(&self, rank: usize, x: f64, y: f64) -> Complex64;

    /// Real orthonormal features ψ(x) ∈ R^rank whose Gram kernel
    /// Σ ψ_j(x)ψ_j(y) equals K(x,y) up to a factor g(x)conj(g(y)) with
    /// |g| = 1. Such a gauge leaves every correlation determinant unchanged,
    /// so the sampler can run in real arithmetic.
    fn features(&self, rank: usize, x: f64, out: &mut [f64]);

    /// An upper bound on K(x, x).
    fn diag_sup(&self, rank: usize) -> f64;
}

/// Fill `out[j] = scale * Im/Re(e^{i(start + j*step)x})` by rotation.
fn rotate_fill(x: f64, start: f64, out: &mut [f64], imag: bool, scale: f64) {
    let (s0, c0) = (start * x).sin_cos();
    let (s1, c1) = x.sin_cos();
    let (mut c, mut s) = (c0, s0);
    for (j, o) in out.iter_mut().enumerate() {
        // reseed periodically to stop drift
        if j > 0 && j % 64 == 0 {
            let (sj, cj) = ((start + j as f64) * x).sin_cos();
            c = cj;
            s = sj;
        }
        *o = scale * if imag { s } else { c };
        let nc = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = nc;
    }
}

pub struct ExpKernel;
pub struct SinHalfKernel;
pub struct CosKernel;
pub struct SinKernel;

impl Kernel for ExpKernel {
    fn family(&self) -> KernelFamily {
        KernelFamily::Exp
    }
    fn interval(&self) -> (f64, f64) {
        (0.0, TAU)
    }
    fn basis(&self, _rank: usize, j: usize, x: f64) -> Complex64 {
        Complex64::from_polar(1.0, j as f64 * x)
    }
    fn eval(&self, rank: usize, x: f64, y: f64) -> Complex64 {
        (0..rank)
            .map(|j| Complex64::from_polar(1.0, j as f64 * (x - y)))
            .sum()
    }
    fn features(&self, rank: usize, x: f64, out: &mut [f64]) {
        // Frequencies j - (N-1)/2 come in ± pairs, so the span has the real
        // basis {1?, √2 cos(mx), √2 sin(mx)} with m ≥ 1/2.
        let out = &mut out[..rank];
        let (head, rest) = if rank % 2 == 1 {
            out[0] = 1.0;
            (1.0, &mut out[1..])
        } else {
            (0.5, &mut out[..])
        };
        let pairs = rest.len() / 2;
        let (cs, ss) = rest.split_at_mut(pairs);
        rotate_fill(x, head, cs, false, SQRT_2);
        rotate_fill(x, head, ss, true, SQRT_2);
    }
    fn diag_sup(&self, rank: usize) -> f64 {
        rank as f64
    }
}

impl Kernel for SinHalfKernel {
    fn family(&self) -> KernelFamily {
        KernelFamily::SinHalf
    }
    fn interval(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn basis(&self, _rank: usize, j: usize, x: f64) -> Complex64 {
        Complex64::new(SQRT_2 * ((2 * j + 1) as f64 * x / 2.0).sin(), 0.0)
    }
    fn eval(&self, rank: usize, x: f64, y: f64) -> Complex64 {
        let s: f64 = (0..rank)
            .map(|j| {
                let f = (2 * j + 1) as f64 / 2.0;
                (f * x).sin() * (f * y).sin()
            })
            .sum();
        Complex64::new(2.0 * s, 0.0)
    }
    fn features(&self, rank: usize, x: f64, out: &mut [f64]) {
        // sin((2j+1)x/2) = Im e^{i(1/2 + j)x}
        rotate_fill(x, 0.5, &mut out[..rank], true, SQRT_2);
    }
    fn diag_sup(&self, rank: usize) -> f64 {
        2.0 * rank as f64
    }
}

impl Kernel for CosKernel {
    fn family(&self) -> KernelFamily {
        KernelFamily::Cos
    }
    fn interval(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn basis(&self, _rank: usize, j: usize, x: f64) -> Complex64 {
        let v = if j == 0 {
            1.0
        } else {
            SQRT_2 * (j as f64 * x).cos()
        };
        Complex64::new(v, 0.0)
    }
    fn eval(&self, rank: usize, x: f64, y: f64) -> Complex64 {
        let s: f64 = (1..rank)
            .map(|j| (j as f64 * x).cos() * (j as f64 * y).cos())
            .sum();
        Complex64::new(1.0 + 2.0 * s, 0.0)
    }
    fn features(&self, rank: usize, x: f64, out: &mut [f64]) {
        out[0] = 1.0;
        rotate_fill(x, 1.0, &mut out[1..rank], false, SQRT_2);
    }
    fn diag_sup(&self, rank: usize) -> f64 {
        (2 * rank - 1) as f64
    }
}

impl Kernel for SinKernel {
    fn family(&self) -> KernelFamily {
        KernelFamily::Sin
    }
    fn interval(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn basis(&self, _rank: usize, j: usize, x: f64) -> Complex64 {
        Complex64::new(SQRT_2 * ((j + 1) as f64 * x).sin(), 0.0)
    }
    fn eval(&self, rank: usize, x: f64, y: f64) -> Complex64 {
        let s: f64 = (1..=rank)
            .map(|j| (j as f64 * x).sin() * (j as f64 * y).sin())
            .sum();
        Complex64::new(2.0 * s, 0.0)
    }
    fn features(&self, rank: usize, x: f64, out: &mut [f64]) {
        rotate_fill(x, 1.0, &mut out[..rank], true, SQRT_2);
    }
    fn diag_sup(&self, rank: usize) -> f64 {
        2.0 * rank as f64
    }
}

static EXP: ExpKernel = ExpKernel;
static SIN_HALF: SinHalfKernel = SinHalfKernel;
static COS: CosKernel = CosKernel;
static SIN: SinKernel = SinKernel;

/// All kernel families, keyed by [`KernelFamily::name`].
pub fn kernels() -> &'static Registry<dyn Kernel> {
    static REG: std::sync::OnceLock<Registry<dyn Kernel>> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        Registry::<dyn Kernel>::new("kernel")
            .register("exp", &EXP)
            .register("sin-half", &SIN_HALF)
            .register("cos", &COS)
            .register("sin", &SIN)
    })
}

/// One group instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub group: GroupId,
    pub n: usize,
    pub n0: usize,
    pub kernel: KernelFamily,
    pub interval: (f64, f64),
}

#[derive(Serialize)]
struct SpecJson<'a> {
    group: &'a str,
    n: usize,
    n0: usize,
    trivial: &'a [f64],
    c_g: f64,
    sigma_g: f64,
    interval: [f64; 2],
}

impl Serialize for EnsembleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson {
            group: self.group.as_str(),
            n: self.n,
            n0: self.n0,
            trivial: self.trivial(),
            c_g: self.c_g(),
            sigma_g: self.sigma_g(),
            interval: [self.interval.0, self.interval.1],
        }
        .serialize(s)
    }
}

/// Build the spec for `group` with parameter `n`. Aliases (SU, O_ODD,
/// O_MINUS) get the kernel of the group they reduce to but keep their own
/// identity and trivial eigenvalues.
pub fn ensemble_spec(group: GroupId, n: usize) -> Result<EnsembleSpec> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let kernel = group.kernel_family();
    Ok(EnsembleSpec {
        group,
        n,
        n0: group.n0(n),
        kernel,
        interval: kernel.kernel().interval(),
    })
}

impl EnsembleSpec {
    pub fn trivial(&self) -> &'static [f64] {
        self.group.trivial()
    }

    pub fn c_g(&self) -> f64 {
        self.group.c_g()
    }

    pub fn sigma_g(&self) -> f64 {
        self.group.sigma_g()
    }

    pub fn kernel_impl(&self) -> &'static dyn Kernel {
        self.kernel.kernel()
    }

    fn check_angle(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.interval;
        if x.is_finite() && x >= lo && x <= hi {
            Ok(())
        } else {
            Err(Error::AngleOutOfInterval { angle: x, lo, hi })
        }
    }
}

pub fn kernel_eval(spec: &EnsembleSpec, x: f64, y: f64) -> Result<Complex64> {
    spec.check_angle(x)?;
    spec.check_angle(y)?;
    Ok(spec.kernel_impl().eval(spec.n, x, y))
}

pub fn basis_eval(spec: &EnsembleSpec, j: usize, x: f64) -> Result<Complex64> {
    if j >= spec.n {
        return Err(Error::IndexOutOfRange {
            index: j,
            rank: spec.n,
        });
    }
    spec.check_angle(x)?;
    Ok(spec.kernel_impl().basis(spec.n, j, x))
}
