//! Distribution of the power radiated by one interfering base station towards
//! a receiver, and the shot-noise functionals (log-Laplace transform and the
//! `Ψ_m` derivative terms) of a PPP field of such interferers.
//!
//! The radiated power is `P = P_S·X + b·Y` with `X ~ Exp(1)`, `Y ~ Gamma(N_t−1, 1)`
//! and `b = P_A/(N_t−1)`. Three exact representations are used, chosen by the
//! ratio `q = 1 − min(P_S, b)/max(P_S, b)` of the two scales:
//!
//! - `q = 0` (or one component absent): a single Gamma law.
//! - `0 < q ≤ 1/2`: a convergent mixture `Σ_j w_j Gamma(N_t + j, min scale)`.
//!   The two-scale closed form carries a factor `(1 − b/P_S)^{1−N_t}` that
//!   cancels catastrophically as the scales approach each other, while the
//!   mixture weights decay like `q^j`.
//! - `q > 1/2`: the two-scale closed form, whose prefactor is then at most `2^{N_t−1}`.

use crate::error::{finite, Error, Result};
use crate::specfun::{gamma, gamma_p, hyp2f1, ln_gamma};

/// Scale ratio at or below which two scales are treated as equal.
const EQUAL_SCALES: f64 = 1e-9;
/// Scale ratio up to which the Gamma-mixture representation is used.
const MIXTURE_LIMIT: f64 = 0.5;

/// Law of the power radiated by one interferer.
#[derive(Debug, Clone, PartialEq)]
pub enum InterfererPower {
    /// No power at all.
    Silent,
    /// `Gamma(shape, scale)`.
    Gamma { shape: f64, scale: f64 },
    /// `Σ_j weights[j] · Gamma(shape + j, scale)`.
    Mixture { shape: f64, scale: f64, weights: Vec<f64> },
    /// `a·Exp(1) + b·Gamma(n_t − 1, 1)` via the two-scale closed form.
    TwoScale { a: f64, b: f64, n_t: u32 },
}

impl InterfererPower {
    /// Selects the representation for signal power `p_s`, noise power `p_a` and `n_t` antennas.
    pub fn new(p_s: f64, p_a: f64, n_t: u32) -> Result<Self> {
        if !(p_s >= 0.0 && p_s.is_finite()) {
            return Err(Error::param("p_s", "must be nonnegative"));
        }
        if !(p_a >= 0.0 && p_a.is_finite()) {
            return Err(Error::param("p_a", "must be nonnegative"));
        }
        if n_t < 1 {
            return Err(Error::param("n_t", "must be at least 1"));
        }
        if n_t == 1 && p_a > 0.0 {
            return Err(Error::param("p_a", "a single antenna has no null space for noise"));
        }
        let m = f64::from(n_t - 1);
        if p_a == 0.0 {
            return Ok(if p_s == 0.0 {
                InterfererPower::Silent
            } else {
                InterfererPower::Gamma { shape: 1.0, scale: p_s }
            });
        }
        let b = p_a / m;
        if p_s == 0.0 {
            return Ok(InterfererPower::Gamma { shape: m, scale: b });
        }
        let (lo, hi) = if p_s < b { (p_s, b) } else { (b, p_s) };
        let q = 1.0 - lo / hi;
        let n = f64::from(n_t);
        if q <= EQUAL_SCALES {
            // Mean-preserving merge of two scales that agree to rounding.
            return Ok(InterfererPower::Gamma {
                shape: n,
                scale: (p_s + p_a) / n,
            });
        }
        if q <= MIXTURE_LIMIT {
            return Ok(InterfererPower::Mixture {
                shape: n,
                scale: lo,
                weights: mixture_weights(q, if p_s < b { m } else { 1.0 }),
            });
        }
        Ok(InterfererPower::TwoScale { a: p_s, b, n_t })
    }

    /// Mean power.
    pub fn mean(&self) -> f64 {
        match self {
            InterfererPower::Silent => 0.0,
            InterfererPower::Gamma { shape, scale } => shape * scale,
            InterfererPower::Mixture { shape, scale, weights } => weights
                .iter()
                .enumerate()
                .map(|(j, w)| w * (shape + j as f64) * scale)
                .sum(),
            InterfererPower::TwoScale { a, b, n_t } => a + b * f64::from(n_t - 1),
        }
    }
}

/// Weights of `(1 − q)^k (1 − q t)^{−k}` expanded in powers of `t`: the
/// negative-binomial law `(k)_j/j! q^j (1 − q)^k`, truncated once the
/// remaining mass is below `1e−17`.
fn mixture_weights(q: f64, k: f64) -> Vec<f64> {
    let mut w = (1.0 - q).powf(k);
    let mut weights = vec![w];
    let mut mass = w;
    for j in 0..100_000 {
        let jf = j as f64;
        w *= (k + jf) / (jf + 1.0) * q;
        weights.push(w);
        mass += w;
        // Ratio of consecutive weights is below (k + j)/(j + 1)·q; bound the geometric tail.
        let ratio = (k + jf + 1.0) / (jf + 2.0) * q;
        if ratio < 1.0 && w * ratio / (1.0 - ratio) < 1e-17 * mass {
            break;
        }
    }
    weights
}

/// The two-scale law as a signed combination of Gamma laws:
/// `c^{1−N}[Exp(a) − (1−c) Σ_{i=0}^{N−2} c^i Gamma(i+1, b)]`, `c = 1 − b/a`.
/// The coefficients sum to one.
fn two_scale_components(a: f64, b: f64, n_t: u32) -> Vec<(f64, f64, f64)> {
    let c = 1.0 - b / a;
    let lead = c.powi(1 - n_t as i32);
    let mut out = vec![(lead, 1.0, a)];
    let mut ci = 1.0;
    for i in 0..(n_t - 1) {
        out.push((-lead * (1.0 - c) * ci, f64::from(i) + 1.0, b));
        ci *= c;
    }
    out
}

/// Density of the power radiated by one interferer (Lemma-1 law) at `x ≥ 0`.
pub fn interferer_power_pdf(x: f64, p_s: f64, p_a: f64, n_t: u32) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::param("x", "must be nonnegative"));
    }
    if !(p_s > 0.0) {
        return Err(Error::param("p_s", "must be positive"));
    }
    let power = InterfererPower::new(p_s, p_a, n_t)?;
    let v = match power {
        InterfererPower::Gamma { shape, scale } => gamma_pdf(x, shape, scale),
        InterfererPower::Silent => unreachable!("p_s > 0"),
        _ => {
            // f(x) = c^{1−N}/a · e^{−Bx} · R_{N−2}(Dx), with R_n the Taylor remainder of exp.
            let a = p_s;
            let n = n_t;
            let b = p_a / f64::from(n - 1);
            let big_b = 1.0 / b;
            let d = big_b - 1.0 / a;
            let c = 1.0 - b / a;
            c.powi(1 - n as i32) / a * exp_remainder_scaled(n - 2, d * x, big_b * x)
        }
    };
    finite(v, "interferer_power_pdf")
}

/// Distribution function of the power radiated by one interferer.
pub fn interferer_power_cdf(x: f64, p_s: f64, p_a: f64, n_t: u32) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::param("x", "must be nonnegative"));
    }
    let v = match InterfererPower::new(p_s, p_a, n_t)? {
        InterfererPower::Silent => 1.0,
        InterfererPower::Gamma { shape, scale } => gamma_p(shape, x / scale)?,
        InterfererPower::Mixture { shape, scale, weights } => {
            let mut s = 0.0;
            for (j, w) in weights.iter().enumerate() {
                s += w * gamma_p(shape + j as f64, x / scale)?;
            }
            s
        }
        InterfererPower::TwoScale { a, b, n_t } => {
            let mut s = 0.0;
            for (coef, shape, scale) in two_scale_components(a, b, n_t) {
                s += coef * gamma_p(shape, x / scale)?;
            }
            s
        }
    };
    Ok(finite(v, "interferer_power_cdf")?.clamp(0.0, 1.0))
}

fn gamma_pdf(x: f64, shape: f64, scale: f64) -> f64 {
    if x == 0.0 {
        return if shape < 1.0 {
            f64::INFINITY
        } else if shape == 1.0 {
            1.0 / scale
        } else {
            0.0
        };
    }
    ((shape - 1.0) * (x / scale).ln() - x / scale - ln_gamma(shape)).exp() / scale
}

/// `e^y − Σ_{k=0}^{n} y^k/k!`, accurate for either sign of `y`.
pub fn exp_remainder(n: u32, y: f64) -> f64 {
    exp_remainder_scaled(n, y, 0.0)
}

/// `e^{−s}·(e^y − Σ_{k=0}^{n} y^k/k!)` without overflow when `y` and `s` are both large.
pub(crate) fn exp_remainder_scaled(n: u32, y: f64, s: f64) -> f64 {
    let scale = (-s).exp();
    if y.abs() <= f64::from(n) + 2.0 {
        // Tail series: terms decrease from the first one, no cancellation to speak of.
        let mut term = 1.0;
        for k in 1..=n + 1 {
            term *= y / f64::from(k);
        }
        let mut sum = term;
        let mut k = n + 1;
        loop {
            k += 1;
            term *= y / f64::from(k);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
                return scale * sum;
            }
        }
    }
    let mut poly = 0.0;
    let mut term = 1.0;
    for k in 0..=n {
        if k > 0 {
            term *= y / f64::from(k);
        }
        poly += term;
    }
    (y - s).exp() - scale * poly
}

/// A PPP of interferers of intensity `lambda` outside a disk of radius `r_u`
/// around the receiver, path-loss exponent `alpha`, powers drawn from `power`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotNoiseField {
    pub lambda: f64,
    pub alpha: f64,
    pub r_u: f64,
    pub power: InterfererPower,
}

impl ShotNoiseField {
    fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// `ln E[exp(−μ I)]` for the aggregate interference `I`.
    pub fn log_laplace(&self, mu: f64) -> Result<f64> {
        if !(mu >= 0.0) {
            return Err(Error::param("mu", "must be nonnegative"));
        }
        if mu == 0.0 || self.lambda == 0.0 {
            return Ok(0.0);
        }
        let v = match &self.power {
            InterfererPower::Silent => 0.0,
            InterfererPower::Gamma { shape, scale } => self.log_laplace_gamma(mu, *shape, *scale)?,
            InterfererPower::Mixture { shape, scale, weights } => {
                let mut s = 0.0;
                for (j, w) in weights.iter().enumerate() {
                    s += w * self.log_laplace_gamma(mu, shape + j as f64, *scale)?;
                }
                s
            }
            InterfererPower::TwoScale { a, b, n_t } => {
                let mut s = 0.0;
                for (coef, shape, scale) in two_scale_components(*a, *b, *n_t) {
                    s += coef * self.log_laplace_gamma(mu, shape, scale)?;
                }
                s
            }
        };
        let v = finite(v, "Laplace transform of the interference")?;
        Ok(v.min(0.0))
    }

    /// Equal-power form: `πλ[R_u²(1 − (1+cU)^{−k}) − k c U^{1−δ}/(1−δ) ₂F₁(k+1, 1−δ; 2−δ; −cU)]`
    /// with `c = μθ` and `U = R_u^{−α}`.
    fn log_laplace_gamma(&self, mu: f64, k: f64, theta: f64) -> Result<f64> {
        let d = self.delta();
        let ru2 = self.r_u * self.r_u;
        let x = mu * theta * self.r_u.powf(-self.alpha); // cU
        let first = ru2 * -(-k * x.ln_1p()).exp_m1();
        let f = hyp2f1(k + 1.0, 1.0 - d, 2.0 - d, -x)?.value;
        // k c U^{1−δ} = k (cU) R_u².
        let second = k * x * ru2 / (1.0 - d) * f;
        Ok(std::f64::consts::PI * self.lambda * (first - second))
    }

    /// Two-scale form `−πλ E[P^δ] Γ(1−δ) μ^δ + T(μ)`.
    ///
    /// Both terms approach `πλR_u²`-sized quantities whose difference is the
    /// result, so this loses about `log10(1/(μ P U))` digits for small `μ`;
    /// [`ShotNoiseField::log_laplace`] uses the component expansion instead and
    /// this form serves as an independent cross-check.
    pub fn log_laplace_two_scale(&self, mu: f64, a: f64, b: f64, n_t: u32) -> Result<f64> {
        use std::f64::consts::PI;
        let d = self.delta();
        let n = f64::from(n_t);
        let c = 1.0 - b / a;
        let ru2 = self.r_u * self.r_u;
        let u = self.r_u.powf(-self.alpha);
        let moment = b.powf(d + 1.0) * gamma(d + n) / (a * gamma(n)) * hyp2f1(1.0, n + d, n, c)?.value;
        let full = PI * self.lambda * moment * gamma(1.0 - d) * mu.powf(d);
        // T(μ) = πλR_u²[1 − (2c^{1−N}/α)(X_a F_a/(1+δ) − (1−c) Σ_i c^i X_b^{i+1} F_i/(i+1+δ))].
        let xa = 1.0 / (a * mu * u);
        let xb = 1.0 / (b * mu * u);
        let fa = hyp2f1(1.0, 1.0 + d, 2.0 + d, -xa)?.value;
        let mut sum = 0.0;
        let mut ci = 1.0;
        let mut xbi = xb;
        for i in 0..(n_t - 1) {
            let p = f64::from(i) + 1.0;
            let fi = hyp2f1(p, p + d, p + 1.0 + d, -xb)?.value;
            sum += ci * xbi * fi / (p + d);
            ci *= c;
            xbi *= xb;
        }
        let bracket = xa * fa / (1.0 + d) - (1.0 - c) * sum;
        let t = PI * self.lambda * ru2 * (1.0 - 2.0 * c.powf(1.0 - n) / self.alpha * bracket);
        Ok(t - full)
    }

    /// `Ψ_m(μ) = μ^m/m! · 2πλ ∫_{R_u}^∞ E[(P r^{−α})^m e^{−μ P r^{−α}}] r dr`, `m ≥ 1`.
    pub fn psi(&self, m: u32, mu: f64) -> Result<f64> {
        if m == 0 {
            return Err(Error::param("m", "Ψ is defined for m ≥ 1"));
        }
        if mu == 0.0 || self.lambda == 0.0 {
            return Ok(0.0);
        }
        let v = match &self.power {
            InterfererPower::Silent => 0.0,
            InterfererPower::Gamma { shape, scale } => self.psi_gamma(m, mu, *shape, *scale)?,
            InterfererPower::Mixture { shape, scale, weights } => {
                let mut s = 0.0;
                for (j, w) in weights.iter().enumerate() {
                    s += w * self.psi_gamma(m, mu, shape + j as f64, *scale)?;
                }
                s
            }
            InterfererPower::TwoScale { a, b, n_t } => self.psi_two_scale(m, mu, *a, *b, *n_t)?,
        };
        let v = finite(v, "Ψ term")?;
        Ok(v.max(0.0))
    }

    /// `2πλ C(k+m−1, m) (cU)^m R_u² ₂F₁(k+m, m−δ; m−δ+1; −cU)/(α(m−δ))`.
    fn psi_gamma(&self, m: u32, mu: f64, k: f64, theta: f64) -> Result<f64> {
        use std::f64::consts::PI;
        let d = self.delta();
        let mf = f64::from(m);
        let x = mu * theta * self.r_u.powf(-self.alpha);
        let binom = (ln_gamma(k + mf) - ln_gamma(k) - ln_gamma(mf + 1.0)).exp();
        let f = hyp2f1(k + mf, mf - d, mf - d + 1.0, -x)?.value;
        Ok(2.0 * PI * self.lambda * binom * x.powi(m as i32) * self.r_u * self.r_u * f / (self.alpha * (mf - d)))
    }

    /// Two-scale form:
    /// `2πλR_u² c^{1−N}/(α(m−δ)) [y_a^m F(m+1,…;−y_a) − (1−c) Σ_i C(i+m,i) c^i y_b^m F(i+m+1,…;−y_b)]`.
    fn psi_two_scale(&self, m: u32, mu: f64, a: f64, b: f64, n_t: u32) -> Result<f64> {
        use std::f64::consts::PI;
        let d = self.delta();
        let mf = f64::from(m);
        let c = 1.0 - b / a;
        let u = self.r_u.powf(-self.alpha);
        let ya = a * mu * u;
        let yb = b * mu * u;
        let fa = hyp2f1(mf + 1.0, mf - d, mf - d + 1.0, -ya)?.value;
        let mut sum = 0.0;
        let mut binom = 1.0; // C(i+m, i)
        let mut ci = 1.0;
        for i in 0..(n_t - 1) {
            let fi = f64::from(i);
            if i > 0 {
                binom *= (fi + mf) / fi;
            }
            sum += binom * ci * hyp2f1(fi + mf + 1.0, mf - d, mf - d + 1.0, -yb)?.value;
            ci *= c;
        }
        let bracket = ya.powi(m as i32) * fa - (1.0 - c) * yb.powi(m as i32) * sum;
        Ok(
            2.0 * PI * self.lambda * self.r_u * self.r_u * c.powf(1.0 - f64::from(n_t)) * bracket
                / (self.alpha * (mf - d)),
        )
    }
}

/// `E[P^m e^{−sP}]` for the Lemma-1 law, by Leibniz's rule on the product of
/// its two Laplace transforms. Every term is positive, so this is a
/// cancellation-free reference used by the tests.
pub fn power_moment_tilted(m: u32, s: f64, p_s: f64, p_a: f64, n_t: u32) -> f64 {
    let k = f64::from(n_t - 1);
    let b = if n_t > 1 { p_a / k } else { 0.0 };
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=m {
        if j > 0 {
            binom *= f64::from(m - j + 1) / f64::from(j);
        }
        let jf = f64::from(j);
        let rest = f64::from(m - j);
        let exp_part = gamma(jf + 1.0) * p_s.powi(j as i32) * (1.0 + p_s * s).powf(-1.0 - jf);
        let rising = (ln_gamma(k + rest) - ln_gamma(k)).exp();
        let gam_part = if k == 0.0 {
            if m == j {
                1.0
            } else {
                0.0
            }
        } else {
            rising * b.powf(rest) * (1.0 + b * s).powf(-k - rest)
        };
        total += binom * exp_part * gam_part;
    }
    total
}
