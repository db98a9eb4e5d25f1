//! Figure presets: the parameter block, sweep and series of every experiment.

use anscy::config::{OutageConstraints, SystemConfig};

/// Experiments the runner knows how to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Experiment {
    /// Connection outage against its analytic approximation and lower bound.
    #[value(name = "fig2-co-validate")]
    Fig2CoValidate,
    /// Connection outage versus base-station intensity for several cell radii.
    #[value(name = "fig3-co-vs-lambdaB")]
    Fig3CoVsLambdaB,
    /// Secrecy outage bounds against simulation.
    #[value(name = "fig4-so-validate")]
    Fig4SoValidate,
    /// Secrecy outage versus base-station intensity for several antenna counts.
    #[value(name = "fig5-so-vs-lambdaB")]
    Fig5SoVsLambdaB,
    /// Secrecy throughput versus the power split.
    #[value(name = "fig6-mu-vs-phi")]
    Fig6MuVsPhi,
    /// Secrecy throughput versus pilot power.
    #[value(name = "fig7-mu-vs-ptau")]
    Fig7MuVsPtau,
    /// Secrecy throughput versus antenna count.
    #[value(name = "fig8-mu-vs-nt")]
    Fig8MuVsNt,
    /// Secrecy throughput of a cell-edge user versus base-station intensity.
    #[value(name = "fig9-edge-user")]
    Fig9EdgeUser,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig2CoValidate,
        Experiment::Fig3CoVsLambdaB,
        Experiment::Fig4SoValidate,
        Experiment::Fig5SoVsLambdaB,
        Experiment::Fig6MuVsPhi,
        Experiment::Fig7MuVsPtau,
        Experiment::Fig8MuVsNt,
        Experiment::Fig9EdgeUser,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2CoValidate => "fig2-co-validate",
            Experiment::Fig3CoVsLambdaB => "fig3-co-vs-lambdaB",
            Experiment::Fig4SoValidate => "fig4-so-validate",
            Experiment::Fig5SoVsLambdaB => "fig5-so-vs-lambdaB",
            Experiment::Fig6MuVsPhi => "fig6-mu-vs-phi",
            Experiment::Fig7MuVsPtau => "fig7-mu-vs-ptau",
            Experiment::Fig8MuVsNt => "fig8-mu-vs-nt",
            Experiment::Fig9EdgeUser => "fig9-edge-user",
        }
    }

    /// One-line description for `presets list`.
    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Fig2CoValidate => "connection outage vs threshold: analytic, lower bound, simulation",
            Experiment::Fig3CoVsLambdaB => "connection outage vs BS intensity for R_c in {150, 200, 300} m",
            Experiment::Fig4SoValidate => "secrecy outage vs threshold: upper/lower bounds, simulation",
            Experiment::Fig5SoVsLambdaB => "secrecy outage vs BS intensity for N_t in {2, 4, 6}",
            Experiment::Fig6MuVsPhi => "secrecy throughput vs power split for several BS intensities",
            Experiment::Fig7MuVsPtau => "secrecy throughput vs pilot power",
            Experiment::Fig8MuVsNt => "secrecy throughput vs antenna count for several BS intensities",
            Experiment::Fig9EdgeUser => "cell-edge secrecy throughput vs BS intensity for several P_tot",
        }
    }
}

/// A swept or series parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    BetaBsDb,
    BetaEDb,
    LambdaB,
    RC,
    NT,
    Phi,
    PTauDbm,
    PTotDbm,
}

impl Param {
    /// CSV column name.
    pub fn column(self) -> &'static str {
        match self {
            Param::BetaBsDb => "beta_bs_db",
            Param::BetaEDb => "beta_e_db",
            Param::LambdaB => "lambda_b",
            Param::RC => "r_c",
            Param::NT => "n_t",
            Param::Phi => "phi",
            Param::PTauDbm => "p_tau_dbm",
            Param::PTotDbm => "p_tot_dbm",
        }
    }

    /// Whether the parameter is better shown on a logarithmic axis.
    pub fn log_axis(self) -> bool {
        matches!(self, Param::LambdaB)
    }

    /// Writes `value` into `cfg`; thresholds are not configuration fields and are ignored.
    /// The antenna count also sets the pilot length, which every caption ties to it.
    pub fn apply(self, cfg: &mut SystemConfig, value: f64) {
        match self {
            Param::BetaBsDb | Param::BetaEDb => {}
            Param::LambdaB => cfg.lambda_b = value,
            Param::RC => cfg.r_c = value,
            Param::NT => {
                cfg.n_t = value as u32;
                cfg.tau = value as u32;
            }
            Param::Phi => cfg.phi = value,
            Param::PTauDbm => cfg.p_tau_dbm = value,
            Param::PTotDbm => cfg.p_tot_dbm = value,
        }
    }

    /// Whether values must be integers.
    pub fn integral(self) -> bool {
        matches!(self, Param::NT)
    }
}

/// A parameter together with its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

/// What is evaluated at each point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Connection outage of a user at distance `r`; `beta_bs_db` applies when
    /// the threshold is not the swept variable.
    Connection { r: f64, beta_bs_db: f64 },
    /// Secrecy outage; `beta_e_db` applies when the threshold is not swept.
    Secrecy { beta_e_db: f64 },
    /// Cell-averaged secrecy throughput.
    Throughput { constraints: OutageConstraints },
    /// Secrecy throughput of a user at `r = R_c (1 − edge)`.
    EdgeThroughput { constraints: OutageConstraints, edge: f64 },
}

/// Intensities that every caption ties to `λ_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ties {
    /// `λ_U = ratio · λ_B`.
    pub lambda_u_per_b: Option<f64>,
    /// `λ_E = ratio · λ_B`.
    pub lambda_e_per_b: Option<f64>,
}

impl Ties {
    pub fn apply(&self, cfg: &mut SystemConfig) {
        if let Some(k) = self.lambda_u_per_b {
            cfg.lambda_u = k * cfg.lambda_b;
        }
        if let Some(k) = self.lambda_e_per_b {
            cfg.lambda_e = k * cfg.lambda_b;
        }
    }
}

/// Everything needed to run one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub experiment: Experiment,
    pub base: SystemConfig,
    pub ties: Ties,
    pub kind: Kind,
    pub sweep: Axis,
    pub series: Option<Axis>,
    /// Default Monte Carlo trials per point.
    pub trials: u64,
}

/// Evenly spaced grid of `n` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn constraints() -> OutageConstraints {
    OutageConstraints::new(0.1, 0.01).expect("constant constraints are valid")
}

/// `10·log10(10^{15/10} + 10^{15/10})`: total power when signal and noise each get 15 dBm.
pub fn fig7_p_tot_dbm() -> f64 {
    10.0 * (2.0 * 10f64.powf(1.5)).log10()
}

/// BS intensities of the throughput families, per m².
pub const THROUGHPUT_LAMBDA_B: [f64; 3] = [1e-8, 1e-7, 1.0 / (16.0 * 300.0 * 300.0)];

/// The preset of `experiment`.
pub fn preset(experiment: Experiment) -> Preset {
    let tied_u = Ties {
        lambda_u_per_b: Some(10.0),
        lambda_e_per_b: None,
    };
    let tied_ue = Ties {
        lambda_u_per_b: Some(10.0),
        lambda_e_per_b: Some(0.1),
    };
    let d = SystemConfig::default();
    match experiment {
        Experiment::Fig2CoValidate => Preset {
            experiment,
            base: SystemConfig {
                n_t: 4,
                tau: 4,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.5,
                lambda_b: 1e-4,
                lambda_u: 1e-3,
                lambda_e: 0.0,
                r_c: 200.0,
                n0_dbm: -50.0,
                p_tau_dbm: 20.0,
                ..d
            },
            ties: tied_u,
            kind: Kind::Connection {
                r: 50.0,
                beta_bs_db: 0.0,
            },
            sweep: Axis {
                param: Param::BetaBsDb,
                values: linspace(-5.0, 20.0, 26),
            },
            series: None,
            trials: 100_000,
        },
        Experiment::Fig3CoVsLambdaB => Preset {
            experiment,
            base: SystemConfig {
                n_t: 3,
                tau: 3,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.5,
                lambda_b: 1e-4,
                lambda_u: 1e-3,
                lambda_e: 0.0,
                r_c: 200.0,
                n0_dbm: -70.0,
                p_tau_dbm: 20.0,
                ..d
            },
            ties: tied_u,
            kind: Kind::Connection {
                r: 50.0,
                beta_bs_db: 10.0,
            },
            sweep: Axis {
                param: Param::LambdaB,
                values: vec![1e-5, 2e-5, 3e-5, 5e-5, 7e-5, 1e-4, 1.5e-4, 2e-4],
            },
            series: Some(Axis {
                param: Param::RC,
                values: vec![150.0, 200.0, 300.0],
            }),
            trials: 20_000,
        },
        Experiment::Fig4SoValidate => {
            let lambda_b = 1.0 / (16.0 * 200.0 * 200.0);
            Preset {
                experiment,
                base: SystemConfig {
                    n_t: 4,
                    tau: 4,
                    alpha: 3.0,
                    p_tot_dbm: 30.0,
                    phi: 0.5,
                    lambda_b,
                    lambda_u: 10.0 * lambda_b,
                    lambda_e: 2.0 * lambda_b,
                    r_c: 300.0,
                    n0_dbm: -50.0,
                    p_tau_dbm: 20.0,
                    ..d
                },
                ties: Ties {
                    lambda_u_per_b: Some(10.0),
                    lambda_e_per_b: Some(2.0),
                },
                kind: Kind::Secrecy { beta_e_db: 0.0 },
                sweep: Axis {
                    param: Param::BetaEDb,
                    values: linspace(-10.0, 10.0, 21),
                },
                series: None,
                trials: 100_000,
            }
        }
        Experiment::Fig5SoVsLambdaB => Preset {
            experiment,
            base: SystemConfig {
                n_t: 4,
                tau: 4,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.5,
                lambda_b: 1e-5,
                lambda_u: 1e-4,
                lambda_e: 1.0 / (16.0 * 300.0 * 300.0),
                r_c: 300.0,
                n0_dbm: -50.0,
                p_tau_dbm: 20.0,
                ..d
            },
            ties: tied_u,
            kind: Kind::Secrecy { beta_e_db: 0.0 },
            sweep: Axis {
                param: Param::LambdaB,
                values: vec![1e-6, 2e-6, 5e-6, 1e-5, 2e-5, 5e-5, 1e-4],
            },
            series: Some(Axis {
                param: Param::NT,
                values: vec![2.0, 4.0, 6.0],
            }),
            trials: 5_000,
        },
        Experiment::Fig6MuVsPhi => Preset {
            experiment,
            base: SystemConfig {
                n_t: 4,
                tau: 4,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.5,
                lambda_b: 1e-7,
                lambda_u: 1e-6,
                lambda_e: 1e-8,
                r_c: 300.0,
                n0_dbm: -50.0,
                p_tau_dbm: 30.0,
                ..d
            },
            ties: tied_ue,
            kind: Kind::Throughput {
                constraints: constraints(),
            },
            sweep: Axis {
                param: Param::Phi,
                values: linspace(0.05, 0.95, 19),
            },
            series: Some(Axis {
                param: Param::LambdaB,
                values: THROUGHPUT_LAMBDA_B.to_vec(),
            }),
            trials: 0,
        },
        Experiment::Fig7MuVsPtau => Preset {
            experiment,
            base: SystemConfig {
                n_t: 4,
                tau: 4,
                alpha: 3.0,
                p_tot_dbm: fig7_p_tot_dbm(),
                phi: 0.5,
                lambda_b: 1e-7,
                lambda_u: 1e-6,
                lambda_e: 1e-8,
                r_c: 300.0,
                n0_dbm: -50.0,
                p_tau_dbm: 30.0,
                ..d
            },
            ties: tied_ue,
            kind: Kind::Throughput {
                constraints: constraints(),
            },
            sweep: Axis {
                param: Param::PTauDbm,
                values: linspace(0.0, 40.0, 9),
            },
            series: Some(Axis {
                param: Param::LambdaB,
                values: THROUGHPUT_LAMBDA_B[..2].to_vec(),
            }),
            trials: 0,
        },
        Experiment::Fig8MuVsNt => Preset {
            experiment,
            base: SystemConfig {
                n_t: 4,
                tau: 4,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.3,
                lambda_b: 1e-7,
                lambda_u: 1e-6,
                lambda_e: 1e-8,
                r_c: 300.0,
                n0_dbm: -50.0,
                p_tau_dbm: 30.0,
                ..d
            },
            ties: tied_ue,
            kind: Kind::Throughput {
                constraints: constraints(),
            },
            sweep: Axis {
                param: Param::NT,
                values: linspace(2.0, 8.0, 7),
            },
            series: Some(Axis {
                param: Param::LambdaB,
                values: THROUGHPUT_LAMBDA_B.to_vec(),
            }),
            trials: 0,
        },
        Experiment::Fig9EdgeUser => Preset {
            experiment,
            base: SystemConfig {
                n_t: 3,
                tau: 3,
                alpha: 3.0,
                p_tot_dbm: 30.0,
                phi: 0.3,
                lambda_b: 1e-5,
                lambda_u: 1e-4,
                lambda_e: 1e-6,
                r_c: 100.0,
                n0_dbm: -50.0,
                p_tau_dbm: 30.0,
                ..d
            },
            ties: tied_ue,
            kind: Kind::EdgeThroughput {
                constraints: constraints(),
                edge: 1e-3,
            },
            sweep: Axis {
                param: Param::LambdaB,
                values: vec![1e-7, 1e-6, 1e-5, 1e-4, 1e-3],
            },
            series: Some(Axis {
                param: Param::PTotDbm,
                values: vec![20.0, 30.0, 40.0],
            }),
            trials: 0,
        },
    }
}
