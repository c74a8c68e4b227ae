//! Radial, nonnegative, compactly supported pair potentials.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Anything that behaves like a radial potential: pointwise values, a support
/// radius, the radii where it is not smooth, and a 3D Fourier transform.
pub trait RadialInteraction: Send + Sync {
    fn value(&self, r: f64) -> f64;
    /// Support radius: `value(r) == 0` for `r > range()`.
    fn range(&self) -> f64;
    /// Ascending radii from 0 to `range()` between which `value` is smooth.
    fn breakpoints(&self) -> Vec<f64>;
    fn fourier_transform(&self, k: f64) -> Result<f64>;
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `(sin x - x cos x)/x^3`, the shape factor of a uniform ball.
fn ball_shape(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0 + x2.powi(4) / 3_991_680.0
    } else {
        (x.sin() - x * x.cos()) / (x * x * x)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    SquareWell { v0: f64 },
    SmoothBump { v0: f64 },
    Tabulated { r: Vec<f64>, v: Vec<f64>, slope: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    shape: Shape,
    range: f64,
}

/// On-disk description; field names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: String,
    #[serde(rename = "R")]
    pub range: f64,
    #[serde(rename = "V0", default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

fn check_range(range: f64) -> Result<()> {
    require(range.is_finite() && range > 0.0, || format!("support radius must be positive, got {range}"))
}

fn check_strength(v0: f64) -> Result<()> {
    require(v0.is_finite() && v0 >= 0.0, || format!("strength must be finite and nonnegative, got {v0}"))
}

/// Monotone cubic Hermite slopes (Fritsch-Carlson).
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

impl RadialPotential {
    pub fn square_well(v0: f64, range: f64) -> Result<Self> {
        check_range(range)?;
        check_strength(v0)?;
        Ok(Self { shape: Shape::SquareWell { v0 }, range })
    }

    /// `V0 * exp(1 - 1/(1 - (r/R)^2))` inside the support, so that `V(0) = V0`.
    pub fn smooth_bump(v0: f64, range: f64) -> Result<Self> {
        check_range(range)?;
        check_strength(v0)?;
        Ok(Self { shape: Shape::SmoothBump { v0 }, range })
    }

    /// Piecewise cubic through `(r, V)` samples; the first sample must sit at
    /// `r = 0` and the last at `r = range`.
    pub fn tabulated(samples: &[[f64; 2]], range: f64) -> Result<Self> {
        check_range(range)?;
        require(samples.len() >= 3, || "tabulated potential needs at least 3 samples".into())?;
        let r: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let v: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        require(r[0] == 0.0, || "first sample must be at r = 0".into())?;
        require((r[r.len() - 1] - range).abs() <= 1e-12 * range, || {
            format!("last sample at r = {} must equal R = {range}", r[r.len() - 1])
        })?;
        require(r.windows(2).all(|w| w[1] > w[0]), || "sample radii must be strictly increasing".into())?;
        require(v.iter().all(|x| x.is_finite() && *x >= 0.0), || "sampled values must be finite and nonnegative".into())?;
        let slope = pchip_slopes(&r, &v);
        Ok(Self { shape: Shape::Tabulated { r, v, slope }, range })
    }

    /// The zero potential with a nominal unit support radius.
    pub fn zero() -> Self {
        Self { shape: Shape::SquareWell { v0: 0.0 }, range: 1.0 }
    }

    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        let need_v0 = || spec.v0.ok_or_else(|| Error::Precondition(format!("kind {} requires V0", spec.kind)));
        match spec.kind.as_str() {
            "square_well" => Self::square_well(need_v0()?, spec.range),
            "smooth_bump" => Self::smooth_bump(need_v0()?, spec.range),
            "tabulated" => {
                let s = spec.samples.as_ref().ok_or_else(|| Error::Precondition("tabulated kind requires samples".into()))?;
                Self::tabulated(s, spec.range)
            }
            other => Err(Error::Precondition(format!("unknown potential kind {other:?}"))),
        }
    }

    pub fn to_spec(&self) -> PotentialSpec {
        let (kind, v0, samples) = match &self.shape {
            Shape::SquareWell { v0 } => ("square_well", Some(*v0), None),
            Shape::SmoothBump { v0 } => ("smooth_bump", Some(*v0), None),
            Shape::Tabulated { r, v, .. } => {
                ("tabulated", None, Some(r.iter().zip(v).map(|(a, b)| [*a, *b]).collect()))
            }
        };
        PotentialSpec { kind: kind.into(), range: self.range, v0, samples }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PotentialSpec =
            serde_json::from_str(text).map_err(|e| Error::Precondition(format!("bad potential JSON: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn is_zero(&self) -> bool {
        match &self.shape {
            Shape::SquareWell { v0 } | Shape::SmoothBump { v0 } => *v0 == 0.0,
            Shape::Tabulated { v, .. } => v.iter().all(|x| *x == 0.0),
        }
    }

    /// `kappa * V`.
    pub fn scaled_by(&self, kappa: f64) -> Result<Self> {
        check_strength(kappa)?;
        let shape = match &self.shape {
            Shape::SquareWell { v0 } => Shape::SquareWell { v0: kappa * v0 },
            Shape::SmoothBump { v0 } => Shape::SmoothBump { v0: kappa * v0 },
            Shape::Tabulated { r, v, slope } => Shape::Tabulated {
                r: r.clone(),
                v: v.iter().map(|x| kappa * x).collect(),
                slope: slope.iter().map(|x| kappa * x).collect(),
            },
        };
        Ok(Self { shape, range: self.range })
    }

    /// `lambda^-2 V(r / lambda)`: the dilation that multiplies the scattering length by `lambda`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        check_range(lambda)?;
        let s = lambda * lambda;
        let shape = match &self.shape {
            Shape::SquareWell { v0 } => Shape::SquareWell { v0: v0 / s },
            Shape::SmoothBump { v0 } => Shape::SmoothBump { v0: v0 / s },
            Shape::Tabulated { r, v, slope } => Shape::Tabulated {
                r: r.iter().map(|x| x * lambda).collect(),
                v: v.iter().map(|x| x / s).collect(),
                slope: slope.iter().map(|x| x / (s * lambda)).collect(),
            },
        };
        Ok(Self { shape, range: self.range * lambda })
    }

    /// `4 pi int r^2 V(r) dr`, i.e. `V^(0)`.
    pub fn integral(&self) -> Result<f64> {
        self.fourier_transform(0.0)
    }

    /// Fourier transform by adaptive quadrature on each smooth piece,
    /// regardless of whether a closed form exists.
    pub fn fourier_transform_quadrature(&self, k: f64) -> Result<f64> {
        require(k >= 0.0, || format!("wavenumber must be nonnegative, got {k}"))?;
        let opts = QuadOptions::tol(1e-12, 1e-12);
        let mut total = 0.0;
        for w in self.breakpoints().windows(2) {
            let q = integrate(|r| r * r * self.value(r) * sinc(k * r), w[0], w[1], opts)?;
            total += q.value;
        }
        Ok(4.0 * PI * total)
    }
}

impl RadialInteraction for RadialPotential {
    fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > self.range {
            return 0.0;
        }
        match &self.shape {
            Shape::SquareWell { v0 } => *v0,
            Shape::SmoothBump { v0 } => {
                let s = r / self.range;
                let d = 1.0 - s * s;
                if d <= 0.0 {
                    0.0
                } else {
                    v0 * (1.0 - 1.0 / d).exp()
                }
            }
            Shape::Tabulated { r: xs, v, slope } => {
                let i = xs.partition_point(|x| *x <= r).clamp(1, xs.len() - 1) - 1;
                let h = xs[i + 1] - xs[i];
                let t = (r - xs[i]) / h;
                let (t2, t3) = (t * t, t * t * t);
                let val = v[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + h * slope[i] * (t3 - 2.0 * t2 + t)
                    + v[i + 1] * (3.0 * t2 - 2.0 * t3)
                    + h * slope[i + 1] * (t3 - t2);
                val.max(0.0)
            }
        }
    }

    fn range(&self) -> f64 {
        self.range
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Tabulated { r, .. } => r.clone(),
            _ => vec![0.0, self.range],
        }
    }

    fn fourier_transform(&self, k: f64) -> Result<f64> {
        match &self.shape {
            Shape::SquareWell { v0 } => {
                require(k >= 0.0, || format!("wavenumber must be nonnegative, got {k}"))?;
                Ok(4.0 * PI * v0 * self.range.powi(3) * ball_shape(k * self.range))
            }
            _ => self.fourier_transform_quadrature(k),
        }
    }
}

/// `kappa * N^(3 beta - 1) * V(N^beta r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPotential {
    pub base: RadialPotential,
    pub n: f64,
    pub beta: f64,
    pub kappa: f64,
}

/// Validate the scaling parameters and build the rescaled interaction.
pub fn rescale(pot: &RadialPotential, n: f64, beta: f64, kappa: f64) -> Result<ScaledPotential> {
    require(n >= 1.0 && n.is_finite(), || format!("N must be >= 1, got {n}"))?;
    require((0.0..=1.0).contains(&beta), || format!("beta must lie in [0, 1], got {beta}"))?;
    require(kappa > 0.0 && kappa.is_finite(), || format!("kappa must be positive, got {kappa}"))?;
    Ok(ScaledPotential { base: pot.clone(), n, beta, kappa })
}

impl ScaledPotential {
    /// `N^beta`.
    pub fn dilation(&self) -> f64 {
        self.n.powf(self.beta)
    }

    /// Fourier transform of `N^(3 beta) V(N^beta .)`, which is `V^(k / N^beta)`.
    pub fn unit_fourier(&self, k: f64) -> Result<f64> {
        self.base.fourier_transform(k / self.dilation())
    }
}

impl RadialInteraction for ScaledPotential {
    fn value(&self, r: f64) -> f64 {
        let s = self.dilation();
        self.kappa * s.powi(3) / self.n * self.base.value(s * r)
    }

    fn range(&self) -> f64 {
        self.base.range() / self.dilation()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let s = self.dilation();
        self.base.breakpoints().iter().map(|r| r / s).collect()
    }

    fn fourier_transform(&self, k: f64) -> Result<f64> {
        Ok(self.kappa / self.n * self.unit_fourier(k)?)
    }
}
