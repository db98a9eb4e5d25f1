//! Poisson point process sampling and the eavesdropper-position geometry of
//! the secrecy-outage integrals.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// A 2-D point in meters.
pub type Point = (f64, f64);

/// Region in which points are sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Disk { center: Point, radius: f64 },
    Annulus { center: Point, r_in: f64, r_out: f64 },
}

impl Window {
    fn radii(&self) -> (Point, f64, f64) {
        match *self {
            Window::Disk { center, radius } => (center, 0.0, radius),
            Window::Annulus { center, r_in, r_out } => (center, r_in, r_out),
        }
    }

    /// Area in m².
    pub fn area(&self) -> f64 {
        let (_, r_in, r_out) = self.radii();
        PI * (r_out * r_out - r_in * r_in)
    }

    /// Whether `p` lies in the closed window.
    pub fn contains(&self, p: Point) -> bool {
        let (c, r_in, r_out) = self.radii();
        let d = (p.0 - c.0).hypot(p.1 - c.1);
        d >= r_in * (1.0 - 1e-12) && d <= r_out * (1.0 + 1e-12)
    }

    fn validate(&self) -> Result<()> {
        let (c, r_in, r_out) = self.radii();
        if !(c.0.is_finite() && c.1.is_finite()) {
            return Err(Error::param("window", "center must be finite"));
        }
        if !(r_in >= 0.0 && r_out >= r_in && r_out.is_finite()) {
            return Err(Error::param("window", "radii must satisfy 0 ≤ r_in ≤ r_out < ∞"));
        }
        Ok(())
    }
}

/// One realization of a homogeneous PPP restricted to a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    pub points: Vec<Point>,
    pub window: Window,
}

/// Samples a homogeneous PPP of `intensity` in `window`, seeded by `seed`.
pub fn sample_ppp(intensity: f64, window: Window, seed: u64) -> Result<PointSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    sample_ppp_into(&mut rng, intensity, window, &mut points)?;
    Ok(PointSample { points, window })
}

/// Appends a PPP realization to `out`, drawing from `rng`.
///
/// The count is Poisson with mean `intensity × area`; radii use the inverse
/// CDF of the area measure, so annuli need no rejection step.
pub fn sample_ppp_into<R: Rng + ?Sized>(
    rng: &mut R,
    intensity: f64,
    window: Window,
    out: &mut Vec<Point>,
) -> Result<()> {
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::param("intensity", "must be nonnegative and finite"));
    }
    window.validate()?;
    let mean = intensity * window.area();
    let count = poisson_count(rng, mean);
    let (c, r_in, r_out) = window.radii();
    let (a2, b2) = (r_in * r_in, r_out * r_out);
    out.reserve(count);
    for _ in 0..count {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let r = (a2 + u * (b2 - a2)).sqrt();
        let (s, co) = (2.0 * PI * v).sin_cos();
        out.push((c.0 + r * co, c.1 + r * s));
    }
    Ok(())
}

/// Draws a Poisson count; zero mean gives zero without consuming randomness.
pub(crate) fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite Poisson mean");
    d.sample(rng) as usize
}

/// Inverse CDF of the distance of a user placed uniformly in a disk of radius `r_c`.
pub fn radial_cdf_sample_cu(r_c: f64, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::param("u", "must lie in [0, 1]"));
    }
    if !(r_c > 0.0) {
        return Err(Error::param("r_c", "must be positive"));
    }
    Ok(r_c * u.sqrt())
}

/// Position of an eavesdropper at distance `y` from the target base station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EavesdropperGeometry {
    pub y: f64,
    pub r_c: f64,
    /// Half-angle `arcsin(R_c/y)` subtended by the target cell, when `y > R_c`.
    pub nu: Option<f64>,
}

/// Builds the geometry helper for an eavesdropper at distance `y`.
pub fn eavesdropper_geometry(y: f64, r_c: f64) -> Result<EavesdropperGeometry> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::param("y", "must be positive"));
    }
    if !(r_c > 0.0) {
        return Err(Error::param("r_c", "must be positive"));
    }
    let nu = (y >= r_c).then(|| (r_c / y).min(1.0).asin());
    Ok(EavesdropperGeometry { y, r_c, nu })
}

impl EavesdropperGeometry {
    /// Half-length of the chord of the target cell along direction `θ`.
    pub fn half_chord(&self, theta: f64) -> f64 {
        let s = self.y * theta.sin();
        (self.r_c * self.r_c - s * s).max(0.0).sqrt()
    }

    /// Distance to the cell edge ahead of the eavesdropper (inside the cell).
    pub fn l1(&self, theta: f64) -> f64 {
        self.half_chord(theta) + self.y * theta.cos()
    }

    /// Distance to the cell edge behind the eavesdropper (inside the cell).
    pub fn l2(&self, theta: f64) -> f64 {
        self.half_chord(theta) - self.y * theta.cos()
    }

    /// Distance to the near crossing of the cell boundary (outside the cell).
    pub fn l3(&self, theta: f64) -> f64 {
        self.y * theta.cos() - self.half_chord(theta)
    }

    /// Distance to the far crossing of the cell boundary (outside the cell).
    pub fn l4(&self, theta: f64) -> f64 {
        self.l3(theta) + 2.0 * self.half_chord(theta)
    }
}

/// Mean of `Σ |x − e|^{−α}` over a unit-intensity PPP outside the disk of
/// radius `radius` centered at the origin, for an observer `e` at distance
/// `offset < radius` from the origin.
///
/// Angular averaging of `|x − e|^{−α}` gives `ρ^{−α} Σ_n ((α/2)_n/n!)² (d/ρ)^{2n}`,
/// which integrates term by term over `ρ > R`.
pub fn campbell_tail(alpha: f64, radius: f64, offset: f64) -> f64 {
    let q = (offset / radius).powi(2);
    let s = 0.5 * alpha;
    let mut coef = 1.0; // ((α/2)_n / n!)² q^n
    let mut sum = 0.0;
    for n in 0..10_000 {
        let nf = n as f64;
        let term = coef / (alpha - 2.0 + 2.0 * nf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        let r = (s + nf) / (nf + 1.0);
        coef *= r * r * q;
    }
    2.0 * PI * radius.powf(2.0 - alpha) * sum
}
