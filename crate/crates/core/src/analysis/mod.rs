//! Closed-form and semi-closed-form evaluators: channel-estimation quality,
//! the interferer power law, the small-ball connection-outage approximation
//! with its lower bound, and the secrecy-outage bounds.

mod power;
mod secrecy;

pub use power::{
    exp_remainder, interferer_power_cdf, interferer_power_pdf, power_moment_tilted, InterfererPower, ShotNoiseField,
};
pub use secrecy::{secrecy_outage_lower, secrecy_outage_upper, EavesdropperField, SecrecyModel};

use crate::config::{CampbellMode, SystemConfig};
use crate::error::{checked_probability, finite, Error, Result};
use crate::specfun::ln_gamma;

/// Per-position quantities of the connection-outage analysis for a user at distance `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationContext {
    /// User distance from its base station, m.
    pub r: f64,
    /// Channel-estimation quality `δ²`.
    pub delta2: f64,
    /// Radius of the interferer-free ball around the user, `R_c − r`.
    pub r_u: f64,
    /// Outage scaling `μ_s = β r^α/(P_S δ²)` for the threshold attached via [`EstimationContext::with_threshold`].
    pub mu_s: f64,
    /// Residual self-interference plus noise, `(1−δ²) P_tot r^{−α} + N_0`, mW.
    pub p_i: f64,
    /// Active base-station intensity.
    pub lambda_b_hat: f64,
}

/// Estimation quality and derived constants for a user at distance `r` (threshold zero).
pub fn estimation_quality(cfg: &SystemConfig, r: f64) -> Result<EstimationContext> {
    cfg.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("r", "user distance must be positive"));
    }
    if r >= cfg.r_c {
        return Err(Error::param("r", "user must lie strictly inside the cell (r < r_c)"));
    }
    let lam = cfg.lambda_b_hat();
    let a = cfg.alpha;
    let contamination = match cfg.campbell_mode {
        CampbellMode::PaperLiteral => lam * cfg.r_c.powf(1.0 - a) / (a - 1.0),
        CampbellMode::Planar2D => 2.0 * std::f64::consts::PI * lam * cfg.r_c.powf(2.0 - a) / (a - 2.0),
    };
    let pilot = cfg.p_tau() * f64::from(cfg.tau);
    let own = pilot * r.powf(-a);
    let delta2 = own / (cfg.n0() + pilot * contamination + own);
    let delta2 = finite(delta2, "estimation quality")?;
    Ok(EstimationContext {
        r,
        delta2,
        r_u: cfg.r_c - r,
        mu_s: 0.0,
        p_i: (1.0 - delta2) * cfg.p_tot() * r.powf(-a) + cfg.n0(),
        lambda_b_hat: lam,
    })
}

impl EstimationContext {
    /// Copy of the context with `μ_s` set for legitimate threshold `beta_bs`.
    pub fn with_threshold(&self, cfg: &SystemConfig, beta_bs: f64) -> Result<Self> {
        if !(beta_bs >= 0.0) {
            return Err(Error::param("beta_bs", "must be nonnegative"));
        }
        let p_s = cfg.p_s();
        let mu_s = if beta_bs == 0.0 {
            0.0
        } else if p_s == 0.0 {
            f64::INFINITY
        } else {
            beta_bs * self.r.powf(cfg.alpha) / (p_s * self.delta2)
        };
        Ok(EstimationContext { mu_s, ..self.clone() })
    }
}

/// Everything the connection-outage formulas need, decoupled from [`SystemConfig`]
/// so that degenerate antenna counts can be evaluated directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionModel {
    pub n_t: u32,
    /// Signal power, mW.
    pub p_s: f64,
    /// Estimation quality `δ²`.
    pub delta2: f64,
    /// User distance, m.
    pub r: f64,
    pub alpha: f64,
    /// Residual self-interference plus noise, mW.
    pub p_i: f64,
    /// Out-of-ball interference field.
    pub field: ShotNoiseField,
}

impl ConnectionModel {
    /// Model for the user described by `ctx` in the network `cfg`.
    pub fn new(ctx: &EstimationContext, cfg: &SystemConfig) -> Result<Self> {
        Ok(ConnectionModel {
            n_t: cfg.n_t,
            p_s: cfg.p_s(),
            delta2: ctx.delta2,
            r: ctx.r,
            alpha: cfg.alpha,
            p_i: ctx.p_i,
            field: ShotNoiseField {
                lambda: ctx.lambda_b_hat,
                alpha: cfg.alpha,
                r_u: ctx.r_u,
                power: InterfererPower::new(cfg.p_s(), cfg.p_a(), cfg.n_t)?,
            },
        })
    }

    fn mu(&self, beta_bs: f64) -> f64 {
        beta_bs * self.r.powf(self.alpha) / (self.p_s * self.delta2)
    }

    /// Small-ball connection-outage approximation at threshold `beta_bs`.
    pub fn outage(&self, beta_bs: f64) -> Result<f64> {
        if let Some(v) = self.trivial(beta_bs)? {
            return Ok(v);
        }
        Theorem1Scratch::new(self, self.mu(beta_bs))?.outage(self.p_i)
    }

    /// Gamma-tail lower bound on the small-ball outage at threshold `beta_bs`.
    pub fn outage_lower_bound(&self, beta_bs: f64) -> Result<f64> {
        if let Some(v) = self.trivial(beta_bs)? {
            return Ok(v);
        }
        let mu = self.mu(beta_bs);
        let n = self.n_t;
        let kappa = kappa(n);
        let mut sum = 1.0;
        let mut binom = 1.0;
        for k in 1..=n {
            binom *= f64::from(n - k + 1) / f64::from(k);
            let kk = f64::from(k) * kappa * mu;
            let term = binom * (-kk * self.p_i + self.field.log_laplace(kk)?).exp();
            sum += if k % 2 == 1 { -term } else { term };
        }
        checked_probability(sum, "connection-outage lower bound")
    }

    fn trivial(&self, beta_bs: f64) -> Result<Option<f64>> {
        if !(beta_bs >= 0.0) || beta_bs.is_nan() {
            return Err(Error::param("beta_bs", "must be nonnegative"));
        }
        if beta_bs == 0.0 {
            return Ok(Some(0.0));
        }
        if self.p_s == 0.0 || beta_bs.is_infinite() {
            return Ok(Some(1.0));
        }
        Ok(None)
    }
}

/// `κ = (N!)^{−1/N}`.
pub fn kappa(n_t: u32) -> f64 {
    let n = f64::from(n_t);
    (-ln_gamma(n + 1.0) / n).exp()
}

/// Intermediate terms of the small-ball outage evaluation at one `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Scratch {
    /// `(N_t!)^{−1/N_t}`, the lower-bound scaling.
    pub kappa: f64,
    /// Stable exponent `2/α`.
    pub delta_exp: f64,
    /// Evaluation point `μ`.
    pub mu: f64,
    /// `ln x_0 = ln L(μ)`.
    pub log_laplace: f64,
    /// `Ψ_m(μ)` for `m = 1..N_t−1`.
    pub psi: Vec<f64>,
    /// Strictly lower-triangular Toeplitz matrix with `Ψ_k` on the k-th subdiagonal.
    pub q_matrix: Vec<Vec<f64>>,
    /// `x_p/x_0` for `p = 0..N_t−1`, from the matrix exponential series.
    pub x_ratio: Vec<f64>,
    /// `x_p = (−μ)^p/p! · L^{(p)}(μ)`.
    pub x_terms: Vec<f64>,
}

impl Theorem1Scratch {
    /// Evaluates `L(μ)`, the `Ψ_m` and the `x_p` for `model`.
    pub fn new(model: &ConnectionModel, mu: f64) -> Result<Self> {
        let n = model.n_t as usize;
        let log_laplace = model.field.log_laplace(mu)?;
        let mut psi = Vec::with_capacity(n.saturating_sub(1));
        for m in 1..model.n_t {
            psi.push(model.field.psi(m, mu)?);
        }
        let mut q = vec![vec![0.0; n]; n];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate().take(i) {
                *cell = psi[i - j - 1];
            }
        }
        // Σ_{m=0}^{N−1} Q^m e_1/m!; Q is nilpotent so the series is exact.
        let mut x_ratio = vec![0.0; n];
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        x_ratio[0] = 1.0;
        for m in 1..n {
            let next: Vec<f64> = (0..n)
                .map(|i| (0..i).map(|j| q[i][j] * v[j]).sum::<f64>() / m as f64)
                .collect();
            for (x, y) in x_ratio.iter_mut().zip(&next) {
                *x += y;
            }
            v = next;
        }
        let x0 = log_laplace.exp();
        let x_terms = x_ratio.iter().map(|r| r * x0).collect();
        Ok(Theorem1Scratch {
            kappa: kappa(model.n_t),
            delta_exp: 2.0 / model.alpha,
            mu,
            log_laplace,
            psi,
            q_matrix: q,
            x_ratio,
            x_terms,
        })
    }

    /// `x_p/x_0` from the scalar recurrence `x_p = Σ_{m<p} (p−m)/p Ψ_{p−m} x_m`.
    pub fn x_ratio_recurrence(&self) -> Vec<f64> {
        let n = self.x_ratio.len();
        let mut x = vec![0.0; n];
        if n > 0 {
            x[0] = 1.0;
        }
        for p in 1..n {
            x[p] = (0..p)
                .map(|m| (p - m) as f64 / p as f64 * self.psi[p - m - 1] * x[m])
                .sum();
        }
        x
    }

    /// `1 − e^{−μP_I} Σ_{k<N} Σ_{p≤k} (μP_I)^{k−p}/(k−p)! x_p`.
    pub fn outage(&self, p_i: f64) -> Result<f64> {
        let n = self.x_ratio.len();
        let y = self.mu * p_i;
        // Partial exponential sums e_j(y) = Σ_{i≤j} y^i/i!.
        let mut partial = Vec::with_capacity(n);
        let (mut term, mut acc) = (1.0, 0.0);
        for i in 0..n {
            if i > 0 {
                term *= y / i as f64;
            }
            acc += term;
            partial.push(acc);
        }
        let s: f64 = (0..n).map(|p| self.x_ratio[p] * partial[n - 1 - p]).sum();
        let v = 1.0 - (self.log_laplace - y).exp() * s;
        checked_probability(finite(v, "connection outage")?, "connection outage")
    }
}

/// Laplace transform of the out-of-ball interference at `mu` for the user in `ctx`.
pub fn laplace_iout(mu: f64, ctx: &EstimationContext, cfg: &SystemConfig) -> Result<f64> {
    Ok(ConnectionModel::new(ctx, cfg)?.field.log_laplace(mu)?.exp())
}

/// Small-ball connection-outage approximation for the user in `ctx`.
pub fn connection_outage(ctx: &EstimationContext, cfg: &SystemConfig, beta_bs: f64) -> Result<f64> {
    ConnectionModel::new(ctx, cfg)?.outage(beta_bs)
}

/// Lower bound on [`connection_outage`].
pub fn connection_outage_lower_bound(ctx: &EstimationContext, cfg: &SystemConfig, beta_bs: f64) -> Result<f64> {
    ConnectionModel::new(ctx, cfg)?.outage_lower_bound(beta_bs)
}
