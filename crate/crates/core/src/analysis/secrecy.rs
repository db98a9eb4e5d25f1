//! Secrecy-outage bounds for non-colluding eavesdroppers.
//!
//! An eavesdropper at distance `y` from the target base station succeeds when
//! its SIR exceeds `β_E`. Conditioned on `y`, the success probability is
//! `(1+α_E)^{1−N_t} · exp(−E(y)) · exp(−β_E σ_E² y^α/P_S)`, where the first
//! factor is the target's own artificial noise and `E(y)` is the PGFL exponent
//! of the artificial noise radiated by the other base stations, which all lie
//! outside the target cell.

use std::f64::consts::PI;

use crate::config::SystemConfig;
use crate::error::{checked_probability, finite, Error, Result};
use crate::geometry::eavesdropper_geometry;
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::specfun::{gamma, hyp2f1_complement};

/// Relative cutoff of the radial integral of the upper bound.
const RADIAL_CUTOFF: f64 = 1e-12;
/// Tail mass of the nearest-eavesdropper law ignored by the lower bound.
const NEAREST_TAIL: f64 = 1e-12;

fn inner_tol() -> Tolerance {
    Tolerance {
        rel: 1e-10,
        abs: 1e-12,
        max_intervals: 2000,
    }
}

fn outer_tol() -> Tolerance {
    Tolerance {
        rel: 1e-8,
        abs: 1e-12,
        max_intervals: 2000,
    }
}

/// The artificial-noise field of the non-target base stations as seen by an
/// eavesdropper, for one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct EavesdropperField {
    /// Noise dimensions `N_t − 1`.
    pub m: f64,
    pub alpha: f64,
    /// `α_E = P_A β_E/((N_t−1) P_S)`.
    pub alpha_e: f64,
    /// Intensity of noise-radiating base stations.
    pub lambda: f64,
    /// Target-cell radius.
    pub r_c: f64,
    /// `Γ(1−δ)Γ(M+δ)/(2Γ(M))`, so that `Ξ₂(y) = coef · α_E^δ y²`.
    xi_coef: f64,
}

impl EavesdropperField {
    pub fn new(n_t: u32, alpha: f64, alpha_e: f64, lambda: f64, r_c: f64) -> Result<Self> {
        if n_t < 2 {
            return Err(Error::param("n_t", "artificial noise needs at least two antennas"));
        }
        if !(alpha > 2.0) {
            return Err(Error::param("alpha", "must exceed 2"));
        }
        let m = f64::from(n_t - 1);
        let d = 2.0 / alpha;
        Ok(EavesdropperField {
            m,
            alpha,
            alpha_e,
            lambda,
            r_c,
            xi_coef: 0.5 * gamma(1.0 - d) * gamma(m + d) / gamma(m),
        })
    }

    fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// `Ξ₂(y) = ∫_0^∞ (1 − (1 + α_E y^α r^{−α})^{−M}) r dr`.
    pub fn xi2(&self, y: f64) -> f64 {
        self.xi_coef * self.alpha_e.powf(self.delta()) * y * y
    }

    /// `t = α_E (y/x)^α`.
    fn t(&self, x: f64, y: f64) -> f64 {
        self.alpha_e * (y / x).powf(self.alpha)
    }

    /// `Ξ₁(x; y) = ∫_0^x (1 − (1 + α_E y^α r^{−α})^{−M}) r dr`.
    pub fn xi1(&self, x: f64, y: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let t = self.t(x, y);
        if t == 0.0 {
            return Ok(0.0);
        }
        if !t.is_finite() {
            return Ok(0.5 * x * x);
        }
        let n = self.m + 1.0;
        let d = self.delta();
        let head = 0.5 * x * x * -(-self.m * t.ln_1p()).exp_m1();
        // (1+t)^{−N}·₂F₁(1, N; N+δ; 1/(1+t)), with the complement t/(1+t) passed exactly.
        let f = hyp2f1_complement(1.0, n, n + d, t / (1.0 + t))?.value;
        let tail = self.m * t * x * x / (2.0 * (self.m + d)) * (-n * t.ln_1p()).exp() * f;
        finite(head + tail, "Ξ₁")
    }

    /// `Ω(x; y) = ∫_x^∞ (1 − (1 + α_E y^α r^{−α})^{−M}) r dr = Ξ₂ − Ξ₁`.
    pub fn omega(&self, x: f64, y: f64) -> Result<f64> {
        Ok((self.xi2(y) - self.xi1(x, y)?).max(0.0))
    }

    /// PGFL exponent `E(y)` of the artificial noise from outside the target cell.
    pub fn exponent(&self, y: f64) -> Result<f64> {
        if y == 0.0 || self.alpha_e == 0.0 || self.lambda == 0.0 {
            return Ok(0.0);
        }
        let g = eavesdropper_geometry(y, self.r_c)?;
        let tol = inner_tol();
        match g.nu {
            None => {
                let v = integrate(
                    |th| Ok(self.omega(g.l1(th), y)? + self.omega(g.l2(th), y)?),
                    0.0,
                    PI,
                    &tol,
                    "angular integral for an eavesdropper inside the cell",
                )?;
                Ok(self.lambda * v.value)
            }
            Some(nu) => {
                let v = integrate(
                    |th| Ok(self.xi1(g.l3(th), y)? + self.omega(g.l4(th), y)?),
                    0.0,
                    nu,
                    &tol,
                    "angular integral for an eavesdropper outside the cell",
                )?;
                Ok(2.0 * self.lambda * (v.value + (PI - nu) * self.xi2(y)))
            }
        }
    }
}

/// Parameters of the secrecy-outage bounds at one eavesdropper threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyModel {
    pub n_t: u32,
    pub alpha: f64,
    pub p_s: f64,
    pub p_a: f64,
    /// Eavesdropper intensity.
    pub lambda_e: f64,
    /// Intensity of noise-radiating base stations.
    pub lambda_an: f64,
    pub r_c: f64,
    /// Eavesdropper noise power, mW.
    pub sigma_e2: f64,
    pub beta_e: f64,
}

impl SecrecyModel {
    pub fn new(cfg: &SystemConfig, beta_e: f64) -> Result<Self> {
        cfg.validate()?;
        if !(beta_e > 0.0) || beta_e.is_nan() {
            return Err(Error::param("beta_e", "must be positive"));
        }
        Ok(SecrecyModel {
            n_t: cfg.n_t,
            alpha: cfg.alpha,
            p_s: cfg.p_s(),
            p_a: cfg.p_a(),
            lambda_e: cfg.lambda_e,
            lambda_an: cfg.an_lambda(),
            r_c: cfg.r_c,
            sigma_e2: cfg.sigma_e2,
            beta_e,
        })
    }

    /// `α_E = P_A β_E/((N_t−1) P_S)`.
    pub fn alpha_e(&self) -> f64 {
        self.p_a * self.beta_e / (f64::from(self.n_t - 1) * self.p_s)
    }

    /// Outage caused by the target's own noise alone: `(1+α_E)^{1−N_t}`.
    pub fn self_noise_factor(&self) -> f64 {
        (-f64::from(self.n_t - 1) * self.alpha_e().ln_1p()).exp()
    }

    pub fn field(&self) -> Result<EavesdropperField> {
        EavesdropperField::new(self.n_t, self.alpha, self.alpha_e(), self.lambda_an, self.r_c)
    }

    /// Conditional success probability of an eavesdropper at distance `y`
    /// without the self-noise factor.
    fn success_given_distance(&self, field: &EavesdropperField, y: f64) -> Result<f64> {
        let noise = if self.sigma_e2 > 0.0 {
            self.beta_e * self.sigma_e2 * y.powf(self.alpha) / self.p_s
        } else {
            0.0
        };
        Ok((-field.exponent(y)? - noise).exp())
    }

    fn degenerate(&self) -> Option<f64> {
        if self.lambda_e == 0.0 || self.p_s == 0.0 || self.beta_e.is_infinite() {
            return Some(0.0);
        }
        None
    }

    /// Union-type upper bound over the whole eavesdropper process.
    pub fn upper(&self) -> Result<f64> {
        if let Some(v) = self.degenerate() {
            return Ok(v);
        }
        let field = self.field()?;
        let pre = self.self_noise_factor();
        if pre == 0.0 {
            return Ok(0.0);
        }
        // Nothing attenuates distant eavesdroppers: infinitely many succeed.
        if (field.alpha_e == 0.0 || field.lambda == 0.0) && self.sigma_e2 == 0.0 {
            return Ok(1.0);
        }
        let tol = outer_tol();
        let g = |y: f64| Ok(self.success_given_distance(&field, y)? * y);
        let inner = integrate(g, 0.0, self.r_c, &tol, "radial integral inside the cell")?;
        let outer = integrate_to_infinity(
            g,
            self.r_c,
            self.r_c,
            RADIAL_CUTOFF,
            &tol,
            "radial integral outside the cell",
        )?;
        let mass = 2.0 * PI * self.lambda_e * pre * (inner.value + outer.value);
        checked_probability(-(-mass).exp_m1(), "secrecy-outage upper bound")
    }

    /// Nearest-eavesdropper lower bound.
    pub fn lower(&self) -> Result<f64> {
        if let Some(v) = self.degenerate() {
            return Ok(v);
        }
        let field = self.field()?;
        let pre = self.self_noise_factor();
        if pre == 0.0 {
            return Ok(0.0);
        }
        let le = self.lambda_e;
        let y_max = ((1.0 / NEAREST_TAIL).ln() / (PI * le)).sqrt();
        let tol = outer_tol();
        let g = |y: f64| {
            let density = 2.0 * PI * le * y * (-PI * le * y * y).exp();
            if density == 0.0 {
                return Ok(0.0);
            }
            Ok(density * self.success_given_distance(&field, y)?)
        };
        let split = self.r_c.min(y_max);
        let mut v = integrate(g, 0.0, split, &tol, "nearest-eavesdropper integral inside the cell")?.value;
        if y_max > split {
            v += integrate(g, split, y_max, &tol, "nearest-eavesdropper integral outside the cell")?.value;
        }
        checked_probability(pre * v, "secrecy-outage lower bound")
    }
}

/// Upper bound on the secrecy-outage probability at eavesdropper threshold `beta_e`.
pub fn secrecy_outage_upper(cfg: &SystemConfig, beta_e: f64) -> Result<f64> {
    SecrecyModel::new(cfg, beta_e)?.upper()
}

/// Lower bound on the secrecy-outage probability at eavesdropper threshold `beta_e`.
pub fn secrecy_outage_lower(cfg: &SystemConfig, beta_e: f64) -> Result<f64> {
    SecrecyModel::new(cfg, beta_e)?.lower()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4() -> SystemConfig {
        let lambda_b = 1.0 / (16.0 * 200.0f64.powi(2));
        SystemConfig {
            n_t: 4,
            alpha: 3.0,
            p_tot_dbm: 30.0,
            phi: 0.5,
            lambda_b,
            lambda_u: 10.0 * lambda_b,
            lambda_e: 2.0 * lambda_b,
            r_c: 300.0,
            ..SystemConfig::default()
        }
    }

    fn field() -> EavesdropperField {
        EavesdropperField::new(4, 3.0, 0.8, 1e-5, 300.0).unwrap()
    }

    fn direct(field: &EavesdropperField, lo: f64, hi: f64, y: f64) -> f64 {
        let s = field.alpha_e * y.powf(field.alpha);
        let g = |r: f64| Ok(-(-field.m * (s * r.powf(-field.alpha)).ln_1p()).exp_m1() * r);
        let tol = Tolerance {
            rel: 1e-12,
            abs: 0.0,
            max_intervals: 4000,
        };
        if hi.is_infinite() {
            integrate_to_infinity(g, lo, lo.max(1.0), 1e-16, &tol, "Ω oracle")
                .unwrap()
                .value
        } else {
            integrate(g, lo, hi, &tol, "Ξ oracle").unwrap().value
        }
    }

    #[test]
    fn xi_and_omega_match_quadrature() {
        let f = field();
        for y in [5.0, 120.0, 290.0, 700.0] {
            for x in [0.5, 10.0, 100.0, 400.0, 3000.0] {
                let xi1 = f.xi1(x, y).unwrap();
                let o1 = direct(&f, 0.0, x, y);
                assert!(
                    (xi1 - o1).abs() <= 1e-9 * o1.max(1e-10),
                    "Ξ₁ x={x} y={y}: {xi1} vs {o1}"
                );
                let om = f.omega(x, y).unwrap();
                let o2 = direct(&f, x, f64::INFINITY, y);
                assert!((om - o2).abs() <= 1e-8 * f.xi2(y), "Ω x={x} y={y}: {om} vs {o2}");
            }
        }
    }

    #[test]
    fn exponent_continuous_across_cell_edge() {
        let f = field();
        let a = f.exponent(300.0 * (1.0 - 1e-9)).unwrap();
        let b = f.exponent(300.0 * (1.0 + 1e-9)).unwrap();
        assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
    }

    #[test]
    fn exponent_matches_planar_quadrature() {
        // E(y) = λ ∫∫_{|x|>R_c} (1 − (1 + α_E y^α/|x−e|^α)^{−M}) dx, in polar coordinates about the cell center.
        let f = field();
        for y in [100.0f64, 450.0] {
            let s = f.alpha_e * y.powf(3.0);
            let tol = Tolerance {
                rel: 1e-9,
                abs: 0.0,
                max_intervals: 4000,
            };
            let radial = |rho: f64| {
                let ang = integrate(
                    |phi: f64| {
                        let d2 = rho * rho + y * y - 2.0 * rho * y * phi.cos();
                        Ok(-(-f.m * (s * d2.powf(-1.5)).ln_1p()).exp_m1())
                    },
                    0.0,
                    PI,
                    &tol,
                    "angle",
                )?;
                Ok(2.0 * ang.value * rho)
            };
            let mut total = 0.0;
            let breaks = [300.0, y.max(300.0), y.max(300.0) * 2.0];
            for w in breaks.windows(2) {
                total += integrate(radial, w[0], w[1], &tol, "ρ").unwrap().value;
            }
            total += integrate_to_infinity(radial, breaks[2], breaks[2], 1e-14, &tol, "ρ tail")
                .unwrap()
                .value;
            let want = f.lambda * total;
            let got = f.exponent(y).unwrap();
            assert!((got - want).abs() < 1e-6 * want, "y={y}: {got} vs {want}");
        }
    }

    #[test]
    fn trivial_limits() {
        let cfg = SystemConfig {
            lambda_e: 0.0,
            ..fig4()
        };
        assert_eq!(secrecy_outage_upper(&cfg, 1.0).unwrap(), 0.0);
        assert_eq!(secrecy_outage_lower(&cfg, 1.0).unwrap(), 0.0);
        let cfg = fig4();
        assert!(secrecy_outage_upper(&cfg, 1e12).unwrap() < 1e-6);
        assert!(secrecy_outage_lower(&cfg, 1e12).unwrap() < 1e-6);
        // No interfering noise: the nearest eavesdropper only fights the target's own noise.
        let cfg = SystemConfig {
            lambda_u: 0.0,
            ..fig4()
        };
        let m = SecrecyModel::new(&cfg, 2.0).unwrap();
        assert!((m.lower().unwrap() - m.self_noise_factor()).abs() < 1e-9);
        assert_eq!(m.upper().unwrap(), 1.0);
        let cfg = SystemConfig { phi: 1.0, ..fig4() };
        assert_eq!(secrecy_outage_upper(&cfg, 2.0).unwrap(), 1.0);
        assert!((secrecy_outage_lower(&cfg, 2.0).unwrap() - 1.0).abs() < 1e-9);
        assert!(secrecy_outage_upper(&cfg, 0.0).is_err());
    }

    #[test]
    fn bounds_ordered_and_monotone() {
        let cfg = fig4();
        let mut prev = (1.0, 1.0);
        for db in (-10..=10).step_by(2) {
            let b = 10f64.powf(f64::from(db) / 10.0);
            let u = secrecy_outage_upper(&cfg, b).unwrap();
            let l = secrecy_outage_lower(&cfg, b).unwrap();
            assert!(l <= u + 1e-9, "{db} dB: {l} > {u}");
            assert!(u <= prev.0 + 1e-12 && l <= prev.1 + 1e-12, "{db} dB");
            prev = (u, l);
        }
    }

    #[test]
    fn bounds_decrease_with_antennas_and_density() {
        let base = fig4();
        let mut prev = (1.0, 1.0);
        for n_t in [2, 4, 6, 8] {
            let cfg = SystemConfig { n_t, ..base.clone() };
            let (u, l) = (
                secrecy_outage_upper(&cfg, 1.0).unwrap(),
                secrecy_outage_lower(&cfg, 1.0).unwrap(),
            );
            assert!(u <= prev.0 + 1e-12 && l <= prev.1 + 1e-12, "n_t={n_t}");
            prev = (u, l);
        }
        let mut prev = (1.0, 1.0);
        for scale in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let lb = base.lambda_b * scale;
            let cfg = SystemConfig {
                lambda_b: lb,
                lambda_u: 10.0 * lb,
                ..base.clone()
            };
            let (u, l) = (
                secrecy_outage_upper(&cfg, 1.0).unwrap(),
                secrecy_outage_lower(&cfg, 1.0).unwrap(),
            );
            assert!(u <= prev.0 + 1e-12 && l <= prev.1 + 1e-12, "λ_B scale {scale}");
            prev = (u, l);
        }
    }

    #[test]
    fn radial_truncation_is_negligible() {
        let m = SecrecyModel::new(&fig4(), 1.0).unwrap();
        let f = m.field().unwrap();
        let y_max = ((1e12f64).ln() / (PI * m.lambda_e)).sqrt();
        // Remaining nearest-distance mass beyond y_max bounds the lower-bound truncation.
        let tail = (-PI * m.lambda_e * y_max * y_max).exp();
        assert!(tail <= 1e-12 * 1.0001);
        // Upper bound integrand beyond 20 R_c is below 1e−8 of the total.
        let tol = outer_tol();
        let g = |y: f64| Ok(m.success_given_distance(&f, y)? * y);
        let total = integrate(g, 0.0, m.r_c, &tol, "a").unwrap().value
            + integrate_to_infinity(g, m.r_c, m.r_c, 1e-12, &tol, "b").unwrap().value;
        let far = integrate_to_infinity(g, 20.0 * m.r_c, m.r_c, 1e-12, &tol, "c")
            .unwrap()
            .value;
        assert!(far < 1e-8 * total, "{far} vs {total}");
    }
}
