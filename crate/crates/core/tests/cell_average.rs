//! Cell-averaged connection outage and secrecy throughput through the public API.

use anscy::config::{OutageConstraints, SystemConfig};
use anscy::geometry::radial_cdf_sample_cu;
use anscy::montecarlo::{simulate_connection_outage_sweep, InterferenceRegion, SimOptions};
use anscy::throughput::{avg_connection_outage, optimize_phi, secrecy_throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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

/// Composite simulation: every trial draws its own user radius from the
/// uniform-in-disk law, then one network realization at that radius.
fn composite_outage(cfg: &SystemConfig, beta: f64, trials: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SimOptions {
        region: InterferenceRegion::SmallBall,
        ..SimOptions::default()
    };
    let mut hits = 0u64;
    for t in 0..trials {
        let r = radial_cdf_sample_cu(cfg.r_c, rng.random::<f64>()).unwrap();
        // Keep the user strictly inside the cell so the interferer-free ball is nonempty.
        let r = r.clamp(1e-6 * cfg.r_c, (1.0 - 1e-6) * cfg.r_c);
        let est = simulate_connection_outage_sweep(cfg, r, &[beta], 1, seed ^ (t << 8), &opts).unwrap()[0];
        if est.p_hat > 0.5 {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    (p, 1.96 * (p * (1.0 - p) / trials as f64).sqrt())
}

#[test]
fn cell_average_matches_composite_simulation() {
    let cfg = fig6();
    for beta_db in [0.0, 10.0] {
        let beta = 10f64.powf(beta_db / 10.0);
        let analytic = avg_connection_outage(&cfg, beta).unwrap();
        let (mc, ci) = composite_outage(&cfg, beta, 20_000, 41 + beta_db as u64);
        assert!(
            (analytic - mc).abs() <= 0.02,
            "β = {beta_db} dB: {analytic} vs {mc} ± {ci}"
        );
    }
}

#[test]
fn throughput_is_monotone_in_constraints() {
    let cfg = fig6();
    let mu = |sigma: f64, eps: f64| secrecy_throughput(&cfg, &OutageConstraints::new(sigma, eps).unwrap()).unwrap();
    // Looser secrecy cap: smaller redundancy, never less throughput.
    let tight = mu(0.1, 0.005);
    let loose = mu(0.1, 0.05);
    assert!(loose.beta_e_star < tight.beta_e_star && loose.mu >= tight.mu);
    // Looser connection cap: a larger codeword threshold.
    let a = mu(0.05, 0.01);
    let b = mu(0.2, 0.01);
    assert!(b.beta_bs_star > a.beta_bs_star);
}

#[test]
fn optimized_split_beats_the_grid() {
    let cons = OutageConstraints::new(0.1, 0.01).unwrap();
    let coarse = optimize_phi(&fig6(), &cons, 9).unwrap();
    let fine = optimize_phi(&fig6(), &cons, 19).unwrap();
    let best_grid = coarse.grid.iter().map(|g| g.1).fold(0.0, f64::max);
    assert!(coarse.solution.mu >= best_grid);
    // Doubling the grid resolution keeps the optimum within one coarse cell.
    assert!(
        (coarse.phi_star - fine.phi_star).abs() <= 0.1,
        "{} vs {}",
        coarse.phi_star,
        fine.phi_star
    );
}
