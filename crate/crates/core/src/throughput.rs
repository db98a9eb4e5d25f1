//! Cell-averaged connection outage, threshold solving under outage
//! constraints, secrecy throughput and the power-split optimizer.

use rayon::prelude::*;

use crate::analysis::{connection_outage, estimation_quality, SecrecyModel};
use crate::config::{OutageConstraints, SystemConfig};
use crate::error::{checked_probability, Error, Result};
use crate::quadrature::gauss_legendre;

/// Gauss–Legendre nodes of the cell average.
pub const CELL_NODES: usize = 64;
/// Default excluded radial margin, as a fraction of `R_c`.
pub const EDGE_MARGIN: f64 = 1e-3;
/// Default relative bracket width at which bisection stops.
pub const TOL_REL: f64 = 1e-4;
const BRACKET_LO: f64 = 1e-6;
const BRACKET_HI: f64 = 1e6;
const BRACKET_FACTOR: f64 = 4.0;
const SEARCH_FLOOR: f64 = 1e-12;
const SEARCH_CEIL: f64 = 1e12;
/// Width in `φ` at which the golden-section refinement stops.
const PHI_TOL: f64 = 1e-3;

/// Cell-averaged connection outage with the default edge margin.
pub fn avg_connection_outage(cfg: &SystemConfig, beta_bs: f64) -> Result<f64> {
    avg_connection_outage_with_margin(cfg, beta_bs, EDGE_MARGIN)
}

/// Cell average of the small-ball connection outage over a user placed
/// uniformly in the cell.
///
/// The interior `[m R_c, (1−m) R_c]` uses Gauss–Legendre quadrature of the
/// radial density `2x/R_c²`; the probability mass of the two excluded strips
/// is assigned the integrand at the nearest interior endpoint.
pub fn avg_connection_outage_with_margin(cfg: &SystemConfig, beta_bs: f64, margin: f64) -> Result<f64> {
    cfg.validate()?;
    if !(beta_bs >= 0.0) {
        return Err(Error::param("beta_bs", "must be nonnegative"));
    }
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::param("margin", "must lie in (0, 1/2)"));
    }
    if beta_bs == 0.0 {
        return Ok(0.0);
    }
    let rc = cfg.r_c;
    let (lo, hi) = (margin * rc, (1.0 - margin) * rc);
    let (x, w) = gauss_legendre(CELL_NODES);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let p_at = |r: f64| -> Result<f64> { connection_outage(&estimation_quality(cfg, r)?, cfg, beta_bs) };
    let interior: Result<Vec<f64>> = x
        .par_iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let r = mid + half * xi;
            Ok(wi * half * p_at(r)? * 2.0 * r / (rc * rc))
        })
        .collect();
    let interior: f64 = interior?.iter().sum();
    let inner_mass = margin * margin;
    let outer_mass = 1.0 - (1.0 - margin) * (1.0 - margin);
    let v = interior + inner_mass * p_at(lo)? + outer_mass * p_at(hi)?;
    checked_probability(v, "cell-averaged connection outage")
}

/// Probability that a given user of the target cell is the one scheduled.
pub fn scheduling_probability(r_c: f64, lambda_u: f64) -> Result<f64> {
    if !(r_c > 0.0) {
        return Err(Error::param("r_c", "must be positive"));
    }
    if !(lambda_u >= 0.0) {
        return Err(Error::param("lambda_u", "must be nonnegative"));
    }
    let x = std::f64::consts::PI * r_c * r_c * lambda_u;
    Ok(if x == 0.0 { 1.0 } else { -(-x).exp_m1() / x })
}

/// Monotonicity of the constrained function, which fixes the solution sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `f` nondecreasing: the largest `β` with `f(β) ≤ target`.
    Increasing,
    /// `f` nonincreasing: the smallest `β` with `f(β) ≤ target`.
    Decreasing,
}

/// How the threshold search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdOutcome {
    /// The constraint binds at the returned value.
    Interior,
    /// The constraint holds over the whole search range; the range end is returned.
    Saturated,
    /// The constraint fails over the whole search range.
    Infeasible,
}

/// Result of [`solve_threshold`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSolution {
    pub beta: f64,
    pub outcome: ThresholdOutcome,
}

/// Finds the extreme `β` satisfying `f(β) ≤ target` for monotone `f`.
///
/// The bracket starts at `[1e−6, 1e6]` and is widened by factors of 4 (down to
/// `1e−12`, up to `1e12`); bisection is geometric and stops when the bracket's
/// relative width is below `tol_rel`. The returned `β` always satisfies the
/// constraint unless the outcome is [`ThresholdOutcome::Infeasible`].
pub fn solve_threshold<F>(target: f64, mut f: F, direction: Direction, tol_rel: f64) -> Result<ThresholdSolution>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol_rel > 0.0) {
        return Err(Error::param("tol_rel", "must be positive"));
    }
    let ok = |v: f64| v <= target;
    // `good` satisfies the constraint, `bad` does not.
    let (mut good, mut bad) = match direction {
        Direction::Increasing => {
            let mut lo = BRACKET_LO;
            while !ok(f(lo)?) {
                lo /= BRACKET_FACTOR;
                if lo < SEARCH_FLOOR {
                    return Ok(ThresholdSolution {
                        beta: lo,
                        outcome: ThresholdOutcome::Infeasible,
                    });
                }
            }
            let mut hi = BRACKET_HI;
            while ok(f(hi)?) {
                hi *= BRACKET_FACTOR;
                if hi > SEARCH_CEIL {
                    return Ok(ThresholdSolution {
                        beta: hi / BRACKET_FACTOR,
                        outcome: ThresholdOutcome::Saturated,
                    });
                }
            }
            (lo, hi)
        }
        Direction::Decreasing => {
            let mut hi = BRACKET_HI;
            while !ok(f(hi)?) {
                hi *= BRACKET_FACTOR;
                if hi > SEARCH_CEIL {
                    return Ok(ThresholdSolution {
                        beta: hi,
                        outcome: ThresholdOutcome::Infeasible,
                    });
                }
            }
            let mut lo = BRACKET_LO;
            while ok(f(lo)?) {
                lo /= BRACKET_FACTOR;
                if lo < SEARCH_FLOOR {
                    return Ok(ThresholdSolution {
                        beta: lo * BRACKET_FACTOR,
                        outcome: ThresholdOutcome::Saturated,
                    });
                }
            }
            (hi, lo)
        }
    };
    while (good / bad).ln().abs() > tol_rel {
        let mid = (good * bad).sqrt();
        if ok(f(mid)?) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(ThresholdSolution {
        beta: good,
        outcome: ThresholdOutcome::Interior,
    })
}

/// Secrecy throughput under outage constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputSolution {
    /// Largest legitimate threshold meeting the connection-outage cap.
    pub beta_bs_star: f64,
    /// Smallest eavesdropper threshold meeting the secrecy-outage cap.
    pub beta_e_star: f64,
    /// Secrecy throughput, bits/s/Hz.
    pub mu: f64,
    /// Scheduling probability.
    pub p_us: f64,
    pub feasible: bool,
    pub connection: ThresholdOutcome,
    pub secrecy: ThresholdOutcome,
}

/// Smallest `α_E` meeting the secrecy cap. With noiseless eavesdroppers the
/// secrecy-outage bound depends on `β_E` and `φ` only through `α_E`, so one
/// solve serves every power split.
fn alpha_e_threshold(cfg: &SystemConfig, epsilon: f64) -> Result<ThresholdSolution> {
    let m = f64::from(cfg.n_t - 1);
    let base = SecrecyModel::new(cfg, 1.0)?;
    let model = SecrecyModel {
        p_s: 1.0,
        p_a: m,
        sigma_e2: 0.0,
        ..base
    };
    solve_threshold(
        epsilon,
        |a| {
            SecrecyModel {
                beta_e: a,
                ..model.clone()
            }
            .upper()
        },
        Direction::Decreasing,
        TOL_REL,
    )
}

fn beta_e_threshold(
    cfg: &SystemConfig,
    epsilon: f64,
    alpha_star: Option<&ThresholdSolution>,
) -> Result<ThresholdSolution> {
    if cfg.lambda_e == 0.0 {
        return Ok(ThresholdSolution {
            beta: 0.0,
            outcome: ThresholdOutcome::Saturated,
        });
    }
    if cfg.p_a() == 0.0 || cfg.p_s() == 0.0 {
        // Without noise every eavesdropper decodes; without signal nothing is sent.
        let outcome = if cfg.p_s() == 0.0 {
            ThresholdOutcome::Saturated
        } else {
            ThresholdOutcome::Infeasible
        };
        return Ok(ThresholdSolution { beta: 0.0, outcome });
    }
    if cfg.sigma_e2 == 0.0 {
        let sol = match alpha_star {
            Some(s) => *s,
            None => alpha_e_threshold(cfg, epsilon)?,
        };
        let scale = f64::from(cfg.n_t - 1) * cfg.p_s() / cfg.p_a();
        return Ok(ThresholdSolution {
            beta: sol.beta * scale,
            ..sol
        });
    }
    solve_threshold(
        epsilon,
        |b| SecrecyModel::new(cfg, b)?.upper(),
        Direction::Decreasing,
        TOL_REL,
    )
}

/// Where the scheduled user sits when its connection outage is constrained.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Placement {
    CellAverage,
    Distance(f64),
}

fn throughput_with(
    cfg: &SystemConfig,
    constraints: &OutageConstraints,
    alpha_star: Option<&ThresholdSolution>,
    placement: Placement,
) -> Result<ThroughputSolution> {
    cfg.validate()?;
    let p_us = scheduling_probability(cfg.r_c, cfg.lambda_u)?;
    let co = if cfg.p_s() == 0.0 {
        ThresholdSolution {
            beta: 0.0,
            outcome: ThresholdOutcome::Infeasible,
        }
    } else {
        match placement {
            Placement::CellAverage => solve_threshold(
                constraints.sigma,
                |b| avg_connection_outage(cfg, b),
                Direction::Increasing,
                TOL_REL,
            )?,
            Placement::Distance(r) => {
                let ctx = estimation_quality(cfg, r)?;
                solve_threshold(
                    constraints.sigma,
                    |b| connection_outage(&ctx, cfg, b),
                    Direction::Increasing,
                    TOL_REL,
                )?
            }
        }
    };
    let so = beta_e_threshold(cfg, constraints.epsilon, alpha_star)?;
    let both = co.outcome != ThresholdOutcome::Infeasible && so.outcome != ThresholdOutcome::Infeasible;
    let rate = (co.beta.ln_1p() - so.beta.ln_1p()) / std::f64::consts::LN_2;
    let feasible = both && rate > 0.0;
    Ok(ThroughputSolution {
        beta_bs_star: co.beta,
        beta_e_star: so.beta,
        mu: if feasible {
            p_us * (1.0 - constraints.sigma) * rate
        } else {
            0.0
        },
        p_us,
        feasible,
        connection: co.outcome,
        secrecy: so.outcome,
    })
}

/// Maximal secrecy throughput of `cfg` under `constraints`.
pub fn secrecy_throughput(cfg: &SystemConfig, constraints: &OutageConstraints) -> Result<ThroughputSolution> {
    throughput_with(cfg, constraints, None, Placement::CellAverage)
}

/// Secrecy throughput when the scheduled user sits at distance `r` from its base station.
pub fn secrecy_throughput_at(
    cfg: &SystemConfig,
    constraints: &OutageConstraints,
    r: f64,
) -> Result<ThroughputSolution> {
    throughput_with(cfg, constraints, None, Placement::Distance(r))
}

/// Result of the power-split optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiOptimum {
    pub phi_star: f64,
    pub solution: ThroughputSolution,
    /// `(φ, μ)` on the coarse grid.
    pub grid: Vec<(f64, f64)>,
}

/// Power splits `φ_i = i/(n+1)`, `i = 1..n`.
pub fn phi_grid(grid_n: usize) -> Vec<f64> {
    (1..=grid_n).map(|i| i as f64 / (grid_n + 1) as f64).collect()
}

/// Secrecy throughput at each power split of `phis`, sharing the secrecy threshold solve.
pub fn throughput_over_phi(
    cfg: &SystemConfig,
    constraints: &OutageConstraints,
    phis: &[f64],
) -> Result<Vec<ThroughputSolution>> {
    let alpha_star = if cfg.lambda_e > 0.0 && cfg.sigma_e2 == 0.0 {
        Some(alpha_e_threshold(cfg, constraints.epsilon)?)
    } else {
        None
    };
    phis.par_iter()
        .map(|&phi| {
            throughput_with(
                &SystemConfig { phi, ..cfg.clone() },
                constraints,
                alpha_star.as_ref(),
                Placement::CellAverage,
            )
        })
        .collect()
}

/// Maximizes the secrecy throughput over the power split: a grid scan of
/// `grid_n` points, then golden-section refinement on the cell around the best one.
pub fn optimize_phi(cfg: &SystemConfig, constraints: &OutageConstraints, grid_n: usize) -> Result<PhiOptimum> {
    if grid_n < 3 {
        return Err(Error::param("grid_n", "at least three grid points are required"));
    }
    let phis = phi_grid(grid_n);
    let sols = throughput_over_phi(cfg, constraints, &phis)?;
    let grid: Vec<(f64, f64)> = phis.iter().zip(&sols).map(|(&p, s)| (p, s.mu)).collect();
    let (k, _) = grid.iter().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, &(_, mu))| if mu > acc.1 { (i, mu) } else { acc },
    );
    if !sols.iter().any(|s| s.feasible) {
        return Ok(PhiOptimum {
            phi_star: phis[k],
            solution: sols[k],
            grid,
        });
    }
    let h = 1.0 / (grid_n + 1) as f64;
    let alpha_star = if cfg.lambda_e > 0.0 && cfg.sigma_e2 == 0.0 {
        Some(alpha_e_threshold(cfg, constraints.epsilon)?)
    } else {
        None
    };
    let eval = |phi: f64| {
        throughput_with(
            &SystemConfig { phi, ..cfg.clone() },
            constraints,
            alpha_star.as_ref(),
            Placement::CellAverage,
        )
    };
    let (mut a, mut b) = ((phis[k] - h).max(1e-6), (phis[k] + h).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > PHI_TOL {
        if fc.mu >= fd.mu {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d)?;
        }
    }
    let (mut phi_star, mut best) = if fc.mu >= fd.mu { (c, fc) } else { (d, fd) };
    if sols[k].mu > best.mu {
        phi_star = phis[k];
        best = sols[k];
    }
    Ok(PhiOptimum {
        phi_star,
        solution: best,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::secrecy_outage_upper;
    use proptest::prelude::*;

    fn fig6() -> SystemConfig {
        let lambda_b = 1e-7;
        SystemConfig {
            n_t: 4,
            tau: 4,
            r_c: 300.0,
            p_tau_dbm: 30.0,
            p_tot_dbm: 30.0,
            lambda_b,
            lambda_u: 10.0 * lambda_b,
            lambda_e: lambda_b / 10.0,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn scheduling_probability_values() {
        assert_eq!(scheduling_probability(300.0, 0.0).unwrap(), 1.0);
        let rc = (2f64.ln() / std::f64::consts::PI).sqrt();
        let v = scheduling_probability(rc, 1.0).unwrap();
        assert!((v - 0.5 / 2f64.ln()).abs() < 1e-15);
        // 1/(π·300²·1e−3), the exponential term being negligible.
        let v = scheduling_probability(300.0, 1e-3).unwrap();
        assert!((v - 3.536_776_513_153_23e-3).abs() < 1e-15, "{v}");
        let small = scheduling_probability(300.0, 1e-20).unwrap();
        assert!((small - 1.0).abs() < 1e-10);
    }

    #[test]
    fn solve_threshold_synthetic() {
        // Logistic CDF in log β with known inverse.
        let f = |b: f64| Ok(1.0 / (1.0 + (-(b.ln() - 2.0)).exp()));
        let s = solve_threshold(0.3, f, Direction::Increasing, 1e-8).unwrap();
        let want = (2.0 + (0.3f64 / 0.7).ln()).exp();
        assert_eq!(s.outcome, ThresholdOutcome::Interior);
        assert!((s.beta / want - 1.0).abs() < 2e-8);
        let g = |b: f64| Ok(1.0 - 1.0 / (1.0 + (-(b.ln() - 2.0)).exp()));
        let s = solve_threshold(0.3, g, Direction::Decreasing, 1e-8).unwrap();
        let want = (2.0 - (0.3f64 / 0.7).ln()).exp();
        assert!((s.beta / want - 1.0).abs() < 2e-8);
        assert!(g(s.beta).unwrap() <= 0.3);
        // Constraint holds everywhere / nowhere.
        let s = solve_threshold(2.0, |_| Ok(0.5), Direction::Increasing, 1e-4).unwrap();
        assert_eq!(s.outcome, ThresholdOutcome::Saturated);
        let s = solve_threshold(0.1, |_| Ok(0.5), Direction::Increasing, 1e-4).unwrap();
        assert_eq!(s.outcome, ThresholdOutcome::Infeasible);
        let s = solve_threshold(0.1, |_| Ok(0.5), Direction::Decreasing, 1e-4).unwrap();
        assert_eq!(s.outcome, ThresholdOutcome::Infeasible);
        let s = solve_threshold(0.9, |_| Ok(0.5), Direction::Decreasing, 1e-4).unwrap();
        assert_eq!(s.outcome, ThresholdOutcome::Saturated);
        assert!(s.beta < 1e-11);
    }

    #[test]
    fn cell_average_properties() {
        let cfg = fig6();
        assert_eq!(avg_connection_outage(&cfg, 0.0).unwrap(), 0.0);
        assert!(avg_connection_outage(&cfg, 1e9).unwrap() > 0.999);
        let b = 10.0;
        let v = avg_connection_outage(&cfg, b).unwrap();
        let rc = cfg.r_c;
        let (lo, hi) = (1e-3 * rc, (1.0 - 1e-3) * rc);
        let p_lo = connection_outage(&estimation_quality(&cfg, lo).unwrap(), &cfg, b).unwrap();
        let p_hi = connection_outage(&estimation_quality(&cfg, hi).unwrap(), &cfg, b).unwrap();
        assert!(v >= p_lo - 1e-12 && v <= p_hi + 1e-12);
        let mut prev = 0.0;
        for db in [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0] {
            let p = avg_connection_outage(&cfg, 10f64.powf(db / 10.0)).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn edge_margin_sensitivity_is_small() {
        let cfg = fig6();
        let a = avg_connection_outage_with_margin(&cfg, 10.0, 1e-3).unwrap();
        let b = avg_connection_outage_with_margin(&cfg, 10.0, 5e-4).unwrap();
        assert!((a - b).abs() < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn alpha_reparametrization_matches_direct_solve() {
        let cfg = SystemConfig { phi: 0.3, ..fig6() };
        let eps = 0.01;
        let via_alpha = beta_e_threshold(&cfg, eps, None).unwrap();
        let direct = solve_threshold(eps, |b| secrecy_outage_upper(&cfg, b), Direction::Decreasing, TOL_REL).unwrap();
        assert!((via_alpha.beta / direct.beta - 1.0).abs() < 3.0 * TOL_REL);
        assert!(secrecy_outage_upper(&cfg, via_alpha.beta * (1.0 + 1e-9)).unwrap() <= eps + 1e-9);
    }

    #[test]
    fn throughput_identities_and_limits() {
        let cons = OutageConstraints::new(0.1, 0.01).unwrap();
        let sol = secrecy_throughput(&fig6(), &cons).unwrap();
        assert!(sol.feasible);
        let want = sol.p_us * 0.9 * ((1.0 + sol.beta_bs_star).log2() - (1.0 + sol.beta_e_star).log2());
        assert!((sol.mu - want).abs() < 1e-12);
        let f = avg_connection_outage(&fig6(), sol.beta_bs_star).unwrap();
        assert!((f - 0.1).abs() < 1e-3 && f <= 0.1, "{f}");
        let no_e = SystemConfig {
            lambda_e: 0.0,
            ..fig6()
        };
        let s0 = secrecy_throughput(&no_e, &cons).unwrap();
        assert_eq!(s0.beta_e_star, 0.0);
        assert!((s0.mu - s0.p_us * 0.9 * (1.0 + s0.beta_bs_star).log2()).abs() < 1e-12);
        let mut prev = sol.beta_e_star;
        for eps in [0.1, 0.5, 0.9, 0.999] {
            let loose = OutageConstraints::new(0.1, eps).unwrap();
            let b = secrecy_throughput(&fig6(), &loose).unwrap().beta_e_star;
            assert!(b < prev, "eps={eps}: {b} vs {prev}");
            prev = b;
        }
        assert!(prev < 1e-3, "{prev}");
        let no_an = SystemConfig { phi: 1.0, ..fig6() };
        let s = secrecy_throughput(&no_an, &cons).unwrap();
        assert!(!s.feasible && s.mu == 0.0);
    }

    #[test]
    fn optimizer_finds_interior_split() {
        let cons = OutageConstraints::new(0.1, 0.01).unwrap();
        let opt = optimize_phi(&fig6(), &cons, 9).unwrap();
        let first = opt.grid.first().unwrap().1;
        let last = opt.grid.last().unwrap().1;
        assert!(opt.phi_star > 0.1 && opt.phi_star < 0.9, "{}", opt.phi_star);
        assert!(opt.solution.mu > first.max(last));
        let no_e = SystemConfig {
            lambda_e: 0.0,
            ..fig6()
        };
        let opt = optimize_phi(&no_e, &cons, 5).unwrap();
        assert!(opt.phi_star > 5.0 / 6.0, "{}", opt.phi_star);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn threshold_satisfies_and_binds(center in -8.0f64..8.0, width in 0.2f64..3.0, target in 0.01f64..0.99) {
            let f = |b: f64| Ok(1.0 / (1.0 + (-(b.ln() - center) / width).exp()));
            let s = solve_threshold(target, f, Direction::Increasing, TOL_REL).unwrap();
            prop_assert_eq!(s.outcome, ThresholdOutcome::Interior);
            let at = f(s.beta).unwrap();
            prop_assert!(at <= target);
            prop_assert!(f(s.beta * (1.0 + 2.0 * TOL_REL)).unwrap() > target || (target - at).abs() < 1e-3);
            let g = |b: f64| Ok(1.0 - f(b).unwrap());
            let s = solve_threshold(target, g, Direction::Decreasing, TOL_REL).unwrap();
            prop_assert!(g(s.beta).unwrap() <= target);
            prop_assert!(g(s.beta / (1.0 + 2.0 * TOL_REL)).unwrap() > target || (target - g(s.beta).unwrap()).abs() < 1e-3);
        }

        #[test]
        fn scheduling_probability_is_a_decreasing_probability(r_c in 1.0f64..1e3, l1 in 0.0f64..1e-2, l2 in 0.0f64..1e-2) {
            let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
            let a = scheduling_probability(r_c, lo).unwrap();
            let b = scheduling_probability(r_c, hi).unwrap();
            prop_assert!(b > 0.0 && a <= 1.0 && b <= a);
        }
    }
}
