//! System parameters, unit conventions and derived scalar quantities.
//!
//! Everything inside the crate works in linear power units (mW) and meters;
//! dBm only appears at the configuration boundary.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the pilot-contamination term of the estimation quality is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CampbellMode {
    /// One-dimensional mean, `λ̂ R_c^{1−α}/(α−1)`.
    #[default]
    PaperLiteral,
    /// Planar Campbell mean, `2πλ̂ R_c^{2−α}/(α−2)`.
    Planar2D,
}

/// Which base-station intensity drives the artificial-noise field seen by eavesdroppers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnIntensity {
    /// Only active (scheduled) base stations radiate noise: `λ̂_B`.
    #[default]
    Active,
    /// Every deployed base station radiates noise: `λ_B`.
    Deployed,
}

/// All physical and network parameters of the downlink model.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Base-station antenna count `N_t`.
    pub n_t: u32,
    /// Path-loss exponent `α > 2`.
    pub alpha: f64,
    /// Total transmit power per base station, dBm.
    pub p_tot_dbm: f64,
    /// Fraction of power spent on the information signal.
    pub phi: f64,
    /// Intensity of base stations outside the target cell, per m².
    pub lambda_b: f64,
    /// Intensity of cellular users, per m².
    pub lambda_u: f64,
    /// Intensity of eavesdroppers, per m².
    pub lambda_e: f64,
    /// Target-cell radius, m.
    pub r_c: f64,
    /// Receiver noise power, dBm.
    pub n0_dbm: f64,
    /// Uplink pilot power, dBm.
    pub p_tau_dbm: f64,
    /// Pilot length in symbols.
    pub tau: u32,
    /// Eavesdropper noise power, mW (0 is the worst case).
    pub sigma_e2: f64,
    /// Pilot-contamination evaluation mode.
    pub campbell_mode: CampbellMode,
    /// Intensity of the noise-radiating base stations seen by eavesdroppers.
    pub an_intensity: AnIntensity,
    /// Override for the base-station simulation radius, m.
    pub r_sim: Option<f64>,
    /// Override for the eavesdropper simulation radius, m.
    pub r_sim_e: Option<f64>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            n_t: 4,
            alpha: 3.0,
            p_tot_dbm: 30.0,
            phi: 0.5,
            lambda_b: 1e-4,
            lambda_u: 1e-3,
            lambda_e: 0.0,
            r_c: 200.0,
            n0_dbm: -50.0,
            p_tau_dbm: 20.0,
            tau: 4,
            sigma_e2: 0.0,
            campbell_mode: CampbellMode::PaperLiteral,
            an_intensity: AnIntensity::Active,
            r_sim: None,
            r_sim_e: None,
        }
    }
}

/// Converts a power in dBm to mW.
pub fn dbm_to_linear(x_dbm: f64) -> Result<f64> {
    if !x_dbm.is_finite() {
        return Err(Error::param("dbm", format!("{x_dbm} is not finite")));
    }
    let mw = 10f64.powf(x_dbm / 10.0);
    if mw > 0.0 && mw.is_finite() {
        Ok(mw)
    } else {
        Err(Error::param("dbm", format!("{x_dbm} dBm is not representable in mW")))
    }
}

/// Intensity of active base stations after independent thinning by the empty-cell probability.
pub fn thinned_bs_intensity(lambda_b: f64, lambda_u: f64) -> Result<f64> {
    if !(lambda_b > 0.0 && lambda_b.is_finite()) {
        return Err(Error::param("lambda_b", "must be positive and finite"));
    }
    if !(lambda_u >= 0.0) {
        return Err(Error::param("lambda_u", "must be nonnegative"));
    }
    Ok(-(-lambda_u / lambda_b).exp_m1() * lambda_b)
}

impl SystemConfig {
    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        if self.n_t < 2 {
            return Err(Error::param("n_t", "n_t must be at least 2"));
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(Error::param("alpha", "alpha must exceed 2"));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(Error::param("phi", "phi must lie in [0, 1]"));
        }
        if !(self.lambda_b > 0.0) || !self.lambda_b.is_finite() {
            return Err(Error::param("lambda_b", "lambda_b must be positive"));
        }
        if !(self.lambda_u >= 0.0) || !self.lambda_u.is_finite() {
            return Err(Error::param("lambda_u", "lambda_u must be nonnegative"));
        }
        if !(self.lambda_e >= 0.0) || !self.lambda_e.is_finite() {
            return Err(Error::param("lambda_e", "lambda_e must be nonnegative"));
        }
        if !(self.r_c > 0.0) || !self.r_c.is_finite() {
            return Err(Error::param("r_c", "r_c must be positive"));
        }
        if self.tau < 1 {
            return Err(Error::param("tau", "tau must be at least 1"));
        }
        if !(self.sigma_e2 >= 0.0) || !self.sigma_e2.is_finite() {
            return Err(Error::param("sigma_e2", "sigma_e2 must be nonnegative"));
        }
        for (name, v) in [
            ("p_tot_dbm", self.p_tot_dbm),
            ("n0_dbm", self.n0_dbm),
            ("p_tau_dbm", self.p_tau_dbm),
        ] {
            dbm_to_linear(v).map_err(|_| Error::param(name, "must be a finite dBm value"))?;
        }
        for (name, v) in [("r_sim", self.r_sim), ("r_sim_e", self.r_sim_e)] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::param(name, "simulation radius must be positive"));
                }
            }
        }
        if let Some(r) = self.r_sim {
            if r <= self.r_c {
                return Err(Error::param("r_sim", "simulation radius must exceed r_c"));
            }
        }
        Ok(())
    }

    /// Total transmit power, mW.
    pub fn p_tot(&self) -> f64 {
        10f64.powf(self.p_tot_dbm / 10.0)
    }

    /// Information-signal power `P_S = φ P_tot`, mW.
    pub fn p_s(&self) -> f64 {
        self.phi * self.p_tot()
    }

    /// Artificial-noise power `P_A = (1 − φ) P_tot`, mW.
    pub fn p_a(&self) -> f64 {
        (1.0 - self.phi) * self.p_tot()
    }

    /// Receiver noise power, mW.
    pub fn n0(&self) -> f64 {
        10f64.powf(self.n0_dbm / 10.0)
    }

    /// Pilot power, mW.
    pub fn p_tau(&self) -> f64 {
        10f64.powf(self.p_tau_dbm / 10.0)
    }

    /// Active base-station intensity `λ̂_B`.
    pub fn lambda_b_hat(&self) -> f64 {
        -(-self.lambda_u / self.lambda_b).exp_m1() * self.lambda_b
    }

    /// Intensity of the noise-radiating base stations seen by eavesdroppers.
    pub fn an_lambda(&self) -> f64 {
        match self.an_intensity {
            AnIntensity::Active => self.lambda_b_hat(),
            AnIntensity::Deployed => self.lambda_b,
        }
    }

    /// Parses a `key=value` configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SystemConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Applies every `key=value` line of `text` to `self`, then validates.
    ///
    /// Lines are trimmed, blank lines and `#` comments are ignored, and a
    /// repeated or unknown key is an error naming the line.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut seen: Vec<String> = Vec::new();
        let mut key_lines: Vec<(String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                key: None,
                message: "expected `key=value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config {
                    line: line_no,
                    key: Some(key.into()),
                    message: "duplicate key".into(),
                });
            }
            seen.push(key.into());
            key_lines.push((key.into(), line_no));
            self.set(key, value).map_err(|message| Error::Config {
                line: line_no,
                key: Some(key.into()),
                message,
            })?;
        }
        self.validate().map_err(|e| {
            let (key, line) = match &e {
                Error::InvalidParameter { name, .. } => key_lines
                    .iter()
                    .find(|(k, _)| k == name)
                    .map(|(k, l)| (Some(k.clone()), *l))
                    .unwrap_or((Some((*name).to_string()), 0)),
                _ => (None, 0),
            };
            let message = match e {
                Error::InvalidParameter { reason, .. } => reason,
                other => other.to_string(),
            };
            Error::Config { line, key, message }
        })
    }

    /// Sets a single field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse::<T>().map_err(|_| format!("cannot parse `{v}`"))
        }
        fn opt(v: &str) -> std::result::Result<Option<f64>, String> {
            if v.eq_ignore_ascii_case("auto") {
                Ok(None)
            } else {
                num(v).map(Some)
            }
        }
        match key {
            "n_t" => self.n_t = num(value)?,
            "alpha" => self.alpha = num(value)?,
            "p_tot_dbm" => self.p_tot_dbm = num(value)?,
            "phi" => self.phi = num(value)?,
            "lambda_b" => self.lambda_b = num(value)?,
            "lambda_u" => self.lambda_u = num(value)?,
            "lambda_e" => self.lambda_e = num(value)?,
            "r_c" => self.r_c = num(value)?,
            "n0_dbm" => self.n0_dbm = num(value)?,
            "p_tau_dbm" => self.p_tau_dbm = num(value)?,
            "tau" => self.tau = num(value)?,
            "sigma_e2" => self.sigma_e2 = num(value)?,
            "campbell_mode" => {
                self.campbell_mode = match value {
                    "PaperLiteral" => CampbellMode::PaperLiteral,
                    "Planar2D" => CampbellMode::Planar2D,
                    _ => return Err(format!("unknown campbell_mode `{value}`")),
                }
            }
            "an_intensity" => {
                self.an_intensity = match value {
                    "Active" => AnIntensity::Active,
                    "Deployed" => AnIntensity::Deployed,
                    _ => return Err(format!("unknown an_intensity `{value}`")),
                }
            }
            "r_sim" => self.r_sim = opt(value)?,
            "r_sim_e" => self.r_sim_e = opt(value)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Serializes every field as `key=value` lines that [`SystemConfig::parse`] reads back exactly.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mode = match self.campbell_mode {
            CampbellMode::PaperLiteral => "PaperLiteral",
            CampbellMode::Planar2D => "Planar2D",
        };
        let an = match self.an_intensity {
            AnIntensity::Active => "Active",
            AnIntensity::Deployed => "Deployed",
        };
        let auto = |v: Option<f64>| v.map_or_else(|| "auto".to_string(), |v| format!("{v:?}"));
        let _ = writeln!(s, "n_t={}", self.n_t);
        let _ = writeln!(s, "alpha={:?}", self.alpha);
        let _ = writeln!(s, "p_tot_dbm={:?}", self.p_tot_dbm);
        let _ = writeln!(s, "phi={:?}", self.phi);
        let _ = writeln!(s, "lambda_b={:?}", self.lambda_b);
        let _ = writeln!(s, "lambda_u={:?}", self.lambda_u);
        let _ = writeln!(s, "lambda_e={:?}", self.lambda_e);
        let _ = writeln!(s, "r_c={:?}", self.r_c);
        let _ = writeln!(s, "n0_dbm={:?}", self.n0_dbm);
        let _ = writeln!(s, "p_tau_dbm={:?}", self.p_tau_dbm);
        let _ = writeln!(s, "tau={}", self.tau);
        let _ = writeln!(s, "sigma_e2={:?}", self.sigma_e2);
        let _ = writeln!(s, "campbell_mode={mode}");
        let _ = writeln!(s, "an_intensity={an}");
        let _ = writeln!(s, "r_sim={}", auto(self.r_sim));
        let _ = writeln!(s, "r_sim_e={}", auto(self.r_sim_e));
        s
    }
}

/// Wyner-code rates together with the SINR/SIR thresholds they induce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WynerRates {
    /// Codeword rate `R_{t,s}`, bits/s/Hz.
    pub r_ts: f64,
    /// Redundancy rate `R_e`, bits/s/Hz.
    pub r_e: f64,
    /// Secrecy rate `R_s = R_{t,s} − R_e`.
    pub r_s: f64,
    /// Legitimate SINR threshold `2^{R_{t,s}} − 1`.
    pub beta_bs: f64,
    /// Eavesdropper SIR threshold `2^{R_e} − 1`.
    pub beta_e: f64,
}

/// Builds the rate record whose thresholds are `beta_bs` and `beta_e`.
pub fn wyner_from_thresholds(beta_bs: f64, beta_e: f64) -> Result<WynerRates> {
    if !(beta_bs >= 0.0) || !beta_bs.is_finite() {
        return Err(Error::param("beta_bs", "must be nonnegative and finite"));
    }
    if !(beta_e >= 0.0) || !beta_e.is_finite() {
        return Err(Error::param("beta_e", "must be nonnegative and finite"));
    }
    let r_ts = beta_bs.ln_1p() / std::f64::consts::LN_2;
    let r_e = beta_e.ln_1p() / std::f64::consts::LN_2;
    Ok(WynerRates {
        r_ts,
        r_e,
        r_s: r_ts - r_e,
        beta_bs,
        beta_e,
    })
}

/// Outage caps: connection outage `σ` and secrecy outage `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageConstraints {
    pub sigma: f64,
    pub epsilon: f64,
}

impl OutageConstraints {
    /// Both caps must lie strictly inside `(0, 1)`.
    pub fn new(sigma: f64, epsilon: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::param("sigma", "must lie strictly inside (0, 1)"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param("epsilon", "must lie strictly inside (0, 1)"));
        }
        Ok(OutageConstraints { sigma, epsilon })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dbm_reference_points() {
        assert_eq!(dbm_to_linear(0.0).unwrap(), 1.0);
        assert!((dbm_to_linear(30.0).unwrap() - 1000.0).abs() < 1e-9);
        assert!((dbm_to_linear(-50.0).unwrap() - 1e-5).abs() < 1e-18);
        assert!(dbm_to_linear(f64::NAN).is_err());
        assert!(dbm_to_linear(f64::INFINITY).is_err());
    }

    #[test]
    fn thinning_limits_and_reference_value() {
        assert_eq!(thinned_bs_intensity(1e-4, 0.0).unwrap(), 0.0);
        assert_eq!(thinned_bs_intensity(1e-4, 1.0).unwrap(), 1e-4);
        // (1 - e^{-10}) * 1e-4, evaluated at 30 digits.
        let v = thinned_bs_intensity(1e-4, 1e-3).unwrap();
        assert!((v - 9.999_546_000_702_375e-5).abs() < 1e-18);
        assert!(thinned_bs_intensity(0.0, 1e-3).is_err());
    }

    #[test]
    fn wyner_reference_points() {
        let w = wyner_from_thresholds(0.0, 0.0).unwrap();
        assert_eq!((w.r_ts, w.r_e, w.r_s), (0.0, 0.0, 0.0));
        let w = wyner_from_thresholds(3.0, 1.0).unwrap();
        assert!((w.r_ts - 2.0).abs() < 1e-15 && (w.r_e - 1.0).abs() < 1e-15);
        assert!((w.r_s - 1.0).abs() < 1e-15);
        assert_eq!(wyner_from_thresholds(10.0, 10.0).unwrap().r_s, 0.0);
        assert!(wyner_from_thresholds(-1.0, 0.0).is_err());
        assert!(wyner_from_thresholds(0.0, -1.0).is_err());
    }

    #[test]
    fn constraints_must_be_interior() {
        assert!(OutageConstraints::new(0.1, 0.01).is_ok());
        assert!(OutageConstraints::new(0.0, 0.01).is_err());
        assert!(OutageConstraints::new(0.1, 1.0).is_err());
    }

    #[test]
    fn power_split_and_validation() {
        let cfg = SystemConfig::default();
        assert!(cfg.validate().is_ok());
        assert!((cfg.p_s() + cfg.p_a() - cfg.p_tot()).abs() < 1e-9);
        let bad = SystemConfig {
            alpha: 1.5,
            ..cfg.clone()
        };
        assert!(bad.validate().is_err());
        let bad = SystemConfig { n_t: 1, ..cfg.clone() };
        assert!(bad.validate().is_err());
        let bad = SystemConfig { phi: 1.5, ..cfg };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn parse_minimal_and_errors() {
        let cfg = SystemConfig::parse("# only antennas\nn_t = 6\n").unwrap();
        assert_eq!(cfg.n_t, 6);
        assert_eq!(cfg.alpha, SystemConfig::default().alpha);

        let err = SystemConfig::parse("n_t=4\nalpha=1.5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpha must exceed 2"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");

        let err = SystemConfig::parse("bogus=1").unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert!(SystemConfig::parse("n_t=4\nn_t=5").is_err());
        assert!(SystemConfig::parse("n_t").is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let cfg = SystemConfig {
            lambda_b: 1.0 / (16.0 * 200.0 * 200.0),
            lambda_e: 2.0 / (16.0 * 200.0 * 200.0),
            campbell_mode: CampbellMode::Planar2D,
            an_intensity: AnIntensity::Deployed,
            r_sim: Some(5000.0),
            ..SystemConfig::default()
        };
        let back = SystemConfig::parse(&cfg.to_config_string()).unwrap();
        assert_eq!(back, cfg);
    }

    proptest! {
        #[test]
        fn wyner_round_trip(bb in 0.0f64..1e6, be in 0.0f64..1e6) {
            let w = wyner_from_thresholds(bb, be).unwrap();
            let back_b = 2f64.powf(w.r_ts) - 1.0;
            let back_e = 2f64.powf(w.r_e) - 1.0;
            prop_assert!((back_b - bb).abs() <= 1e-12 * bb.max(1.0));
            prop_assert!((back_e - be).abs() <= 1e-12 * be.max(1.0));
            prop_assert!((w.r_s - (w.r_ts - w.r_e)).abs() == 0.0);
        }

        #[test]
        fn thinning_bounded_and_monotone(lb in 1e-7f64..1e-2, lu in 0.0f64..1e-1, du in 0.0f64..1e-2) {
            let a = thinned_bs_intensity(lb, lu).unwrap();
            let b = thinned_bs_intensity(lb, lu + du).unwrap();
            prop_assert!(a <= lb.min(lu) * (1.0 + 1e-15));
            prop_assert!(a >= 0.0);
            prop_assert!(b >= a);
        }
    }
}
