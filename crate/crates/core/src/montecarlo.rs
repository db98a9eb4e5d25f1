//! Monte Carlo oracle: samples the network directly and counts outage events.
//!
//! Each trial owns independent random streams, keyed by `(seed, trial, kind,
//! index)`, so results do not depend on the number of worker threads or on the
//! order in which trials run. Base stations are sampled in annular shells whose
//! radii grow by `√2`; each shell has its own stream, so enlarging the window
//! leaves the inner shells' draws untouched (common random numbers across
//! window sizes). Interference from beyond the window is added as its mean.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::analysis::{estimation_quality, EstimationContext};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::geometry::{campbell_tail, sample_ppp_into, Point, PointSample, Window};
use crate::specfun::gamma;

/// Trials per work unit; chunk results are combined in index order.
const CHUNK: u64 = 1024;
/// Expected number of eavesdroppers left outside their window.
const EAV_WINDOW_MASS: f64 = 1e-6;
/// Expected number of successful eavesdroppers left outside their window.
const EAV_SUCCESS_TAIL: f64 = 1e-4;

/// An empirical probability with its normal-approximation 95 % interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci_half_width_95: f64,
    pub seed: u64,
}

impl MonteCarloEstimate {
    fn from_count(count: u64, trials: u64, seed: u64) -> Self {
        let p = count as f64 / trials as f64;
        MonteCarloEstimate {
            p_hat: p,
            trials,
            ci_half_width_95: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
        }
    }
}

/// Sample mean of a bounded statistic with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Where interfering base stations may lie in connection-outage simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceRegion {
    /// Outside the target cell disk `b(0, R_c)`, as in the real network.
    #[default]
    TrueCell,
    /// Outside the ball `b(CU, R_c − r)` used by the analysis.
    SmallBall,
}

/// How channel gains are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelModel {
    /// Gains drawn from their exact scalar laws.
    #[default]
    Scalar,
    /// Full complex Gaussian channel vectors, beams and null-space bases.
    Vector,
}

/// Simulation knobs beyond the system configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub region: InterferenceRegion,
    pub channels: ChannelModel,
    /// Multiplier on both simulation radii (window-sensitivity checks).
    pub window_scale: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            region: InterferenceRegion::TrueCell,
            channels: ChannelModel::Scalar,
            window_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Stream {
    BsShell = 1,
    Desired = 2,
    EavShell = 3,
    EavChannel = 4,
    Power = 5,
}

fn rng_for(seed: u64, trial: u64, kind: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 32) | ((kind as u64) << 28) | (index & 0x0FFF_FFFF));
    rng
}

fn shell_radius(base: f64, k: u32) -> f64 {
    base * 2f64.powf(f64::from(k) / 2.0)
}

/// Smallest shell count whose outer radius reaches `radius`.
fn shells_to_cover(base: f64, radius: f64) -> u32 {
    if radius <= base {
        return 0;
    }
    let mut k = (2.0 * (radius / base).log2()).ceil().max(0.0) as u32;
    while shell_radius(base, k) < radius * (1.0 - 1e-12) {
        k += 1;
    }
    k
}

/// Transmit beam and null-space basis of one base station.
#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    pub w: Vec<Complex64>,
    pub null_space: Vec<Vec<Complex64>>,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn random_beam<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Beam {
    let v = complex_gaussian(rng, n);
    let norm = inner(&v, &v).re.sqrt();
    let w: Vec<Complex64> = v.iter().map(|x| x / norm).collect();
    // Gram–Schmidt of the standard basis against w; keep the n−1 best-conditioned vectors.
    let mut basis: Vec<Vec<Complex64>> = vec![w.clone()];
    let mut candidates: Vec<(f64, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[i] = Complex64::new(1.0, 0.0);
        let p = inner(&w, &e);
        let r: Vec<Complex64> = e.iter().zip(&w).map(|(x, y)| x - p * y).collect();
        candidates.push((inner(&r, &r).re, e));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, e) in candidates {
        if basis.len() == n {
            break;
        }
        let mut r = e;
        for q in &basis {
            let p = inner(q, &r);
            for (x, y) in r.iter_mut().zip(q) {
                *x -= p * y;
            }
        }
        let norm = inner(&r, &r).re.sqrt();
        if norm > 1e-8 {
            basis.push(r.iter().map(|x| x / norm).collect());
        }
    }
    let null_space = basis.split_off(1);
    Beam { w, null_space }
}

/// `(|g^H w|², ‖g^H U‖²)` for a channel `g` and a beam.
fn project(g: &[Complex64], beam: &Beam) -> (f64, f64) {
    let s = inner(g, &beam.w).norm_sqr();
    let a = beam.null_space.iter().map(|u| inner(g, u).norm_sqr()).sum();
    (s, a)
}

/// One interfering base station as seen by the user.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferer {
    pub position: Point,
    /// Gain of the interferer's information beam towards the user (`|f^H w|²`).
    pub g_s: f64,
    /// Gain of its noise subspace towards the user (`‖f^H U‖²`).
    pub g_a: f64,
    /// Beam, only in vector-channel mode.
    pub beam: Option<Beam>,
}

/// Everything drawn for one trial except the eavesdropper channel gains,
/// which are drawn lazily per eavesdropper from their own streams.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    /// Interfering base stations (thinned).
    pub bs_points: PointSample,
    pub interferers: Vec<Interferer>,
    /// Desired-channel gain `‖ĥ‖²`, distributed `Gamma(N_t, δ²)`.
    pub h: f64,
    /// Eavesdropper positions.
    pub eav_points: PointSample,
    /// Target base-station beam in vector-channel mode.
    pub target_beam: Option<Beam>,
}

/// Fixed per-simulation quantities.
#[derive(Debug, Clone)]
struct Setup {
    n_t: u32,
    alpha: f64,
    lambda_hat: f64,
    p_s: f64,
    b: f64,
    channels: ChannelModel,
    /// BS shells: center, base radius and shell count.
    bs_center: Point,
    bs_base: f64,
    bs_shells: u32,
    /// Eavesdropper shells over `[0, R_c] ∪ ⋃ [ρ_{k−1}, ρ_k]`; `None` when unused.
    eav: Option<(f64, u32, f64)>, // (base, shells, intensity)
    gamma_m: Gamma<f64>,
    delta2: f64,
}

impl Setup {
    fn bs_outer(&self) -> f64 {
        shell_radius(self.bs_base, self.bs_shells)
    }

    fn draw<R: Rng + ?Sized>(&self, seed: u64, trial: u64, desired: &mut R) -> Result<TrialDraw> {
        let n = self.n_t as usize;
        let mut points = Vec::new();
        let mut interferers = Vec::new();
        for k in 0..self.bs_shells {
            let mut rng = rng_for(seed, trial, Stream::BsShell, u64::from(k));
            let start = points.len();
            let window = Window::Annulus {
                center: self.bs_center,
                r_in: shell_radius(self.bs_base, k),
                r_out: shell_radius(self.bs_base, k + 1),
            };
            sample_ppp_into(&mut rng, self.lambda_hat, window, &mut points)?;
            for &p in &points[start..] {
                let (g_s, g_a, beam) = match self.channels {
                    ChannelModel::Scalar => {
                        let g_s: f64 = Exp1.sample(&mut rng);
                        (g_s, self.gamma_m.sample(&mut rng), None)
                    }
                    ChannelModel::Vector => {
                        let beam = random_beam(&mut rng, n);
                        let f = complex_gaussian(&mut rng, n);
                        let (s, a) = project(&f, &beam);
                        (s, a, Some(beam))
                    }
                };
                interferers.push(Interferer {
                    position: p,
                    g_s,
                    g_a,
                    beam,
                });
            }
        }
        let bs_points = PointSample {
            points,
            window: Window::Annulus {
                center: self.bs_center,
                r_in: self.bs_base,
                r_out: self.bs_outer(),
            },
        };
        let (h, target_beam) = match self.channels {
            ChannelModel::Scalar => {
                let g = Gamma::new(f64::from(self.n_t), self.delta2).expect("valid gamma law");
                (g.sample(desired), None)
            }
            ChannelModel::Vector => {
                let est = complex_gaussian(desired, n);
                let h = self.delta2 * inner(&est, &est).re;
                (h, Some(random_beam(desired, n)))
            }
        };
        let mut eav = Vec::new();
        let mut eav_outer = 0.0;
        if let Some((base, shells, lam_e)) = self.eav {
            for k in 0..=shells {
                let mut rng = rng_for(seed, trial, Stream::EavShell, u64::from(k));
                let window = if k == 0 {
                    Window::Disk {
                        center: (0.0, 0.0),
                        radius: base,
                    }
                } else {
                    Window::Annulus {
                        center: (0.0, 0.0),
                        r_in: shell_radius(base, k - 1),
                        r_out: shell_radius(base, k),
                    }
                };
                sample_ppp_into(&mut rng, lam_e, window, &mut eav)?;
            }
            eav_outer = if shells == 0 { base } else { shell_radius(base, shells) };
        }
        Ok(TrialDraw {
            bs_points,
            interferers,
            h,
            eav_points: PointSample {
                points: eav,
                window: Window::Disk {
                    center: (0.0, 0.0),
                    radius: eav_outer,
                },
            },
            target_beam,
        })
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::param("trials", "at least one trial is required"));
    }
    if trials >= 1 << 32 {
        return Err(Error::param("trials", "at most 2^32 − 1 trials are supported"));
    }
    Ok(())
}

fn check_scale(opts: &SimOptions) -> Result<()> {
    if !(opts.window_scale >= 1.0) || !opts.window_scale.is_finite() {
        return Err(Error::param("window_scale", "must be at least 1"));
    }
    Ok(())
}

/// Runs `per_trial` over all trials in deterministic chunks, summing counters.
fn run_counts<F>(trials: u64, width: usize, per_trial: F) -> Result<Vec<u64>>
where
    F: Fn(u64, &mut [u64]) -> Result<()> + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<u64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; width];
            for t in (c * CHUNK)..((c + 1) * CHUNK).min(trials) {
                per_trial(t, &mut counts)?;
            }
            Ok(counts)
        })
        .collect();
    let mut total = vec![0u64; width];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part?) {
            *t += c;
        }
    }
    Ok(total)
}

fn connection_setup(cfg: &SystemConfig, ctx: &EstimationContext, opts: &SimOptions) -> Result<Setup> {
    check_scale(opts)?;
    let r_sim = cfg.r_sim.unwrap_or(10.0 * cfg.r_c) * opts.window_scale;
    let (center, base) = match opts.region {
        InterferenceRegion::TrueCell => ((0.0, 0.0), cfg.r_c),
        InterferenceRegion::SmallBall => ((ctx.r, 0.0), ctx.r_u),
    };
    let reach = match opts.region {
        InterferenceRegion::TrueCell => r_sim,
        InterferenceRegion::SmallBall => r_sim - ctx.r,
    };
    setup(cfg, ctx.delta2, opts, center, base, shells_to_cover(base, reach), None)
}

fn setup(
    cfg: &SystemConfig,
    delta2: f64,
    opts: &SimOptions,
    bs_center: Point,
    bs_base: f64,
    bs_shells: u32,
    eav: Option<(f64, u32, f64)>,
) -> Result<Setup> {
    let m = f64::from(cfg.n_t - 1);
    Ok(Setup {
        n_t: cfg.n_t,
        alpha: cfg.alpha,
        lambda_hat: cfg.lambda_b_hat(),
        p_s: cfg.p_s(),
        b: cfg.p_a() / m,
        channels: opts.channels,
        bs_center,
        bs_base,
        bs_shells,
        eav,
        gamma_m: Gamma::new(m, 1.0).map_err(|e| Error::param("n_t", e.to_string()))?,
        delta2,
    })
}

/// Aggregate interference at `at` from the sampled interferers plus the mean beyond the window.
fn user_interference(s: &Setup, draw: &TrialDraw, at: Point, tail_offset: f64) -> f64 {
    let mut i = 0.0;
    for z in &draw.interferers {
        let d2 = (z.position.0 - at.0).powi(2) + (z.position.1 - at.1).powi(2);
        i += (s.p_s * z.g_s + s.b * z.g_a) * d2.powf(-0.5 * s.alpha);
    }
    let mean_power = s.p_s + s.b * f64::from(s.n_t - 1);
    i + s.lambda_hat * mean_power * campbell_tail(s.alpha, s.bs_outer(), tail_offset)
}

/// Empirical connection outage `Pr[SINR ≤ β]` for a user at distance `r`.
pub fn simulate_connection_outage(
    cfg: &SystemConfig,
    r: f64,
    beta_bs: f64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    Ok(simulate_connection_outage_sweep(cfg, r, &[beta_bs], trials, seed, &SimOptions::default())?[0])
}

/// Connection outage at several thresholds from the same trials.
pub fn simulate_connection_outage_sweep(
    cfg: &SystemConfig,
    r: f64,
    betas: &[f64],
    trials: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<Vec<MonteCarloEstimate>> {
    check_trials(trials)?;
    if betas.iter().any(|b| !(*b >= 0.0)) {
        return Err(Error::param("beta_bs", "must be nonnegative"));
    }
    let ctx = estimation_quality(cfg, r)?;
    let s = connection_setup(cfg, &ctx, opts)?;
    let user = (r, 0.0);
    let tail_offset = match opts.region {
        InterferenceRegion::TrueCell => r,
        InterferenceRegion::SmallBall => 0.0,
    };
    let signal_scale = s.p_s * r.powf(-cfg.alpha);
    let counts = run_counts(trials, betas.len(), |t, counts| {
        let mut desired = rng_for(seed, t, Stream::Desired, 0);
        let draw = s.draw(seed, t, &mut desired)?;
        let denom = ctx.p_i + user_interference(&s, &draw, user, tail_offset);
        let sinr = signal_scale * draw.h / denom;
        for (c, &b) in counts.iter_mut().zip(betas) {
            if sinr <= b && b > 0.0 {
                *c += 1;
            }
        }
        Ok(())
    })?;
    Ok(counts
        .into_iter()
        .map(|c| MonteCarloEstimate::from_count(c, trials, seed))
        .collect())
}

/// Sample mean of `exp(−μ I)` for the out-of-ball interference `I` of the user in `ctx`.
pub fn simulate_laplace_iout(
    cfg: &SystemConfig,
    ctx: &EstimationContext,
    mu: f64,
    trials: u64,
    seed: u64,
) -> Result<MeanEstimate> {
    check_trials(trials)?;
    if !(mu >= 0.0) {
        return Err(Error::param("mu", "must be nonnegative"));
    }
    if mu == 0.0 || ctx.lambda_b_hat == 0.0 {
        return Ok(MeanEstimate {
            mean: 1.0,
            std_error: 0.0,
            trials,
            seed,
        });
    }
    let opts = SimOptions {
        region: InterferenceRegion::SmallBall,
        ..SimOptions::default()
    };
    let s = connection_setup(cfg, ctx, &opts)?;
    let s = Setup {
        lambda_hat: ctx.lambda_b_hat,
        ..s
    };
    let user = (ctx.r, 0.0);
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Result<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (mut sum, mut sq) = (0.0, 0.0);
            for t in (c * CHUNK)..((c + 1) * CHUNK).min(trials) {
                let mut desired = rng_for(seed, t, Stream::Desired, 0);
                let draw = s.draw(seed, t, &mut desired)?;
                let v = (-mu * user_interference(&s, &draw, user, 0.0)).exp();
                sum += v;
                sq += v * v;
            }
            Ok((sum, sq))
        })
        .collect();
    let (mut sum, mut sq) = (0.0, 0.0);
    for p in parts {
        let (a, b) = p?;
        sum += a;
        sq += b;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = ((sq / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok(MeanEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials,
        seed,
    })
}

/// Eavesdropper window radius for the smallest simulated threshold `beta_min`.
///
/// Covers all but `1e−6` of the eavesdropper mass, and far enough that the
/// expected number of successful eavesdroppers outside is below `1e−4`
/// (using the lower bound `E(y) ≥ πλ Ξ₂(y)` of the noise exponent for `y > R_c`).
pub fn eavesdropper_window(cfg: &SystemConfig, beta_min: f64) -> f64 {
    if let Some(r) = cfg.r_sim_e {
        return r;
    }
    let le = cfg.lambda_e;
    if le == 0.0 {
        return 0.0;
    }
    let mass = ((1.0 / EAV_WINDOW_MASS).ln() / (PI * le)).sqrt();
    let m = f64::from(cfg.n_t - 1);
    let d = 2.0 / cfg.alpha;
    let alpha_e = cfg.p_a() * beta_min / (m * cfg.p_s());
    let k = PI * cfg.an_lambda() * 0.5 * alpha_e.powf(d) * gamma(1.0 - d) * gamma(m + d) / gamma(m);
    let pre = PI * le * (1.0 + alpha_e).powf(-m);
    if !(k > 0.0) || !k.is_finite() || pre == 0.0 {
        return mass;
    }
    let ratio = pre / (k * EAV_SUCCESS_TAIL);
    let tail = if ratio > 1.0 { (ratio.ln() / k).sqrt() } else { 0.0 };
    mass.max(tail)
}

fn secrecy_setup(cfg: &SystemConfig, beta_min: f64, opts: &SimOptions) -> Result<Setup> {
    check_scale(opts)?;
    let r_e = eavesdropper_window(cfg, beta_min) * opts.window_scale;
    let eav_shells = shells_to_cover(cfg.r_c, r_e);
    let eav_outer = shell_radius(cfg.r_c, eav_shells);
    let r_sim = cfg
        .r_sim
        .unwrap_or((10.0 * cfg.r_c).max(3.0 * eav_outer / opts.window_scale))
        * opts.window_scale;
    let r_sim = r_sim.max(3.0 * eav_outer);
    let bs_shells = shells_to_cover(cfg.r_c, r_sim);
    // The target user's position does not enter the eavesdropper SIR.
    setup(
        cfg,
        1.0,
        opts,
        (0.0, 0.0),
        cfg.r_c,
        bs_shells,
        Some((cfg.r_c, eav_shells, cfg.lambda_e)),
    )
}

/// Empirical secrecy outage `Pr[max_e SIR_e > β_E]`.
pub fn simulate_secrecy_outage(cfg: &SystemConfig, beta_e: f64, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    Ok(simulate_secrecy_outage_sweep(cfg, &[beta_e], trials, seed, &SimOptions::default())?[0])
}

/// Secrecy outage at several thresholds from the same trials.
pub fn simulate_secrecy_outage_sweep(
    cfg: &SystemConfig,
    betas: &[f64],
    trials: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<Vec<MonteCarloEstimate>> {
    check_trials(trials)?;
    cfg.validate()?;
    if betas.is_empty() || betas.iter().any(|b| !(*b > 0.0) || !b.is_finite()) {
        return Err(Error::param("beta_e", "thresholds must be positive and finite"));
    }
    if cfg.lambda_e == 0.0 || cfg.p_s() == 0.0 {
        return Ok(betas
            .iter()
            .map(|_| MonteCarloEstimate::from_count(0, trials, seed))
            .collect());
    }
    let beta_min = betas.iter().cloned().fold(f64::INFINITY, f64::min);
    let s = secrecy_setup(cfg, beta_min, opts)?;
    let alpha = cfg.alpha;
    let an_power = s.b * f64::from(s.n_t - 1);
    let n = s.n_t as usize;
    let counts = run_counts(trials, betas.len(), |t, counts| {
        let mut desired = rng_for(seed, t, Stream::Desired, 0);
        let draw = s.draw(seed, t, &mut desired)?;
        let mut best = 0.0f64;
        for (j, e) in draw.eav_points.points.iter().enumerate() {
            let mut rng = rng_for(seed, t, Stream::EavChannel, j as u64);
            let y = e.0.hypot(e.1);
            let path = y.powf(-alpha);
            let (chi, omega_o) = match (&draw.target_beam, s.channels) {
                (Some(beam), ChannelModel::Vector) => project(&complex_gaussian(&mut rng, n), beam),
                _ => {
                    let chi: f64 = Exp1.sample(&mut rng);
                    (chi, s.gamma_m.sample(&mut rng))
                }
            };
            let signal = s.p_s * chi * path;
            let mut interference =
                s.b * omega_o * path + s.lambda_hat * an_power * campbell_tail(alpha, s.bs_outer(), y) + cfg.sigma_e2;
            let mut alive = signal > beta_min * interference;
            if alive {
                for z in &draw.interferers {
                    let omega = match &z.beam {
                        Some(beam) => project(&complex_gaussian(&mut rng, n), beam).1,
                        None => s.gamma_m.sample(&mut rng),
                    };
                    let d2 = (z.position.0 - e.0).powi(2) + (z.position.1 - e.1).powi(2);
                    interference += s.b * omega * d2.powf(-0.5 * alpha);
                    if signal <= beta_min * interference {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                best = best.max(if interference == 0.0 {
                    f64::INFINITY
                } else {
                    signal / interference
                });
            }
        }
        for (c, &b) in counts.iter_mut().zip(betas) {
            if best > b {
                *c += 1;
            }
        }
        Ok(())
    })?;
    Ok(counts
        .into_iter()
        .map(|c| MonteCarloEstimate::from_count(c, trials, seed))
        .collect())
}

/// Draws the full random state of one trial (for inspection and testing).
pub fn draw_trial(cfg: &SystemConfig, r: f64, trial: u64, seed: u64, opts: &SimOptions) -> Result<TrialDraw> {
    let ctx = estimation_quality(cfg, r)?;
    let s = connection_setup(cfg, &ctx, opts)?;
    let mut desired = rng_for(seed, trial, Stream::Desired, 0);
    s.draw(seed, trial, &mut desired)
}

/// `count` independent draws of the power one interferer radiates towards a user.
pub fn sample_interferer_powers(
    cfg: &SystemConfig,
    count: usize,
    seed: u64,
    channels: ChannelModel,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = cfg.n_t as usize;
    let m = f64::from(cfg.n_t - 1);
    let gm = Gamma::new(m, 1.0).map_err(|e| Error::param("n_t", e.to_string()))?;
    let (p_s, b) = (cfg.p_s(), cfg.p_a() / m);
    let mut rng = rng_for(seed, 0, Stream::Power, 0);
    Ok((0..count)
        .map(|_| match channels {
            ChannelModel::Scalar => {
                let g_s: f64 = Exp1.sample(&mut rng);
                p_s * g_s + b * gm.sample(&mut rng)
            }
            ChannelModel::Vector => {
                let beam = random_beam(&mut rng, n);
                let (g_s, g_a) = project(&complex_gaussian(&mut rng, n), &beam);
                p_s * g_s + b * g_a
            }
        })
        .collect())
}

/// `count` independent desired-channel gains `‖ĥ‖²/δ²` (law `Gamma(N_t, 1)`).
pub fn sample_desired_gains(
    cfg: &SystemConfig,
    r: f64,
    count: usize,
    seed: u64,
    channels: ChannelModel,
) -> Result<Vec<f64>> {
    let ctx = estimation_quality(cfg, r)?;
    let opts = SimOptions {
        channels,
        ..SimOptions::default()
    };
    let s = connection_setup(cfg, &ctx, &opts)?;
    let s = Setup { bs_shells: 0, ..s };
    (0..count as u64)
        .map(|t| {
            let mut desired = rng_for(seed, t, Stream::Desired, 0);
            Ok(s.draw(seed, t, &mut desired)?.h / ctx.delta2)
        })
        .collect()
}
