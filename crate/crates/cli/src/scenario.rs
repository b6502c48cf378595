//! Flat TOML scenario files.
//!
//! Every key is optional. Missing system keys take the single-antenna
//! reference values (B = 200, N = 400, δ = 0.01, ρ_A = 10 dB, ρ_E = 3 dB,
//! K_E = 2, K_A = 1, η = 1). SNRs and powers accept either a linear key or
//! the same key with a `_db` suffix, never both.

use std::ops::RangeInclusive;
use std::path::Path;

use fblsec::optimizer::default_power_split_grid;
use fblsec::{db_to_linear, Constraints, LinkBudget, McOptions, Method, QuadratureConfig, SystemConfig};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub bits: Option<u64>,
    pub blocklength: Option<u64>,
    pub leakage: Option<f64>,
    pub snr_actuator: Option<f64>,
    pub snr_actuator_db: Option<f64>,
    pub snr_eve: Option<f64>,
    pub snr_eve_db: Option<f64>,
    pub antennas_ap: Option<u32>,
    pub antennas_eve: Option<u32>,
    pub power_split: Option<f64>,

    pub transmit_power: Option<f64>,
    pub transmit_power_db: Option<f64>,
    pub distance_actuator: Option<f64>,
    pub distance_eve: Option<f64>,
    pub path_loss_exponent: Option<f64>,
    pub noise_power_actuator: Option<f64>,
    pub noise_power_actuator_db: Option<f64>,
    pub noise_power_eve: Option<f64>,
    pub noise_power_eve_db: Option<f64>,

    pub m1: Option<f64>,
    pub m2: Option<usize>,

    pub methods: Option<Vec<String>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,

    pub zeta_eps: Option<f64>,
    pub zeta_n: Option<u64>,
    pub bits_range: Option<[u64; 2]>,
    pub power_split_grid: Option<[f64; 3]>,

    pub sweep_n: Option<[u64; 3]>,
    pub sweep_b: Option<[u64; 3]>,
    pub sweep_eta: Option<[f64; 3]>,
    pub sweep_ka: Option<[u64; 3]>,
    pub sweep_p_db: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Blocklength,
    Bits,
    PowerSplit,
    AntennasAp,
    TransmitPowerDb,
}

impl SweepVar {
    pub fn key(self) -> &'static str {
        match self {
            SweepVar::Blocklength => "sweep_n",
            SweepVar::Bits => "sweep_b",
            SweepVar::PowerSplit => "sweep_eta",
            SweepVar::AntennasAp => "sweep_ka",
            SweepVar::TransmitPowerDb => "sweep_p_db",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub points: Vec<f64>,
}

impl Sweep {
    /// The configuration at one grid point.
    pub fn apply(&self, cfg: &SystemConfig<f64>, point: f64) -> Result<SystemConfig<f64>, CliError> {
        let next = match self.var {
            SweepVar::Blocklength => cfg.clone().with_blocklength(point as u64),
            SweepVar::Bits => cfg.clone().with_bits(point as u64),
            SweepVar::PowerSplit => cfg.clone().with_power_split(point),
            SweepVar::AntennasAp => cfg.clone().with_antennas(point as u32, cfg.antennas_eve),
            SweepVar::TransmitPowerDb => cfg.clone().with_transmit_power(db_to_linear(point))?,
        };
        next.validate()?;
        Ok(next)
    }
}

/// A scenario with defaults applied and units resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: SystemConfig<f64>,
    pub m1: Option<f64>,
    pub m2: Option<usize>,
    pub methods: Option<Vec<Method>>,
    pub mc: McOptions,
    pub constraints: Option<Constraints<f64>>,
    pub bits_range: Option<RangeInclusive<u64>>,
    pub power_split_grid: Vec<f64>,
    pub sweep: Option<Sweep>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Validation(format!("scenario: {e}")))?;
        file.resolve()
    }

    /// Quadrature settings for `cfg`; unset keys follow the antenna count.
    pub fn quadrature(&self, cfg: &SystemConfig<f64>) -> Result<QuadratureConfig<f64>, CliError> {
        let default = QuadratureConfig::for_config(cfg);
        Ok(QuadratureConfig::new(
            self.m1.unwrap_or(default.m1),
            self.m2.unwrap_or(default.m2),
        )?)
    }

    /// Requested methods, or the analytical default for `cfg`.
    pub fn methods_for(&self, cfg: &SystemConfig<f64>) -> Vec<Method> {
        match &self.methods {
            Some(m) => m.clone(),
            None if cfg.is_single_antenna() => vec![Method::ClosedForm],
            None => vec![Method::MultiAntenna],
        }
    }
}

pub fn parse_methods<S: AsRef<str>>(names: &[S]) -> Result<Vec<Method>, CliError> {
    if names.is_empty() {
        return Err(CliError::Usage("empty method list".into()));
    }
    names
        .iter()
        .map(|n| n.as_ref().parse::<Method>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn either(linear: Option<f64>, db: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(CliError::Validation(format!("both {key} and {key}_db are set"))),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(d)) => Ok(Some(db_to_linear(d))),
        (None, None) => Ok(None),
    }
}

fn float_grid([start, stop, step]: [f64; 3], key: &str) -> Result<Vec<f64>, CliError> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Validation(format!("{key} needs start ≤ stop and step > 0")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    // trims accumulated binary error so grid labels print cleanly
    Ok((0..=count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn int_grid([start, stop, step]: [u64; 3], key: &str) -> Result<Vec<f64>, CliError> {
    if step == 0 || stop < start {
        return Err(CliError::Validation(format!("{key} needs start ≤ stop and step > 0")));
    }
    Ok((start..=stop).step_by(step as usize).map(|v| v as f64).collect())
}

impl ScenarioFile {
    fn link(&self) -> Result<Option<LinkBudget<f64>>, CliError> {
        let power = either(self.transmit_power, self.transmit_power_db, "transmit_power")?;
        let noise_a = either(
            self.noise_power_actuator,
            self.noise_power_actuator_db,
            "noise_power_actuator",
        )?;
        let noise_e = either(self.noise_power_eve, self.noise_power_eve_db, "noise_power_eve")?;
        let any = power.is_some()
            || noise_a.is_some()
            || noise_e.is_some()
            || self.distance_actuator.is_some()
            || self.distance_eve.is_some()
            || self.path_loss_exponent.is_some();
        if !any {
            return Ok(None);
        }
        Ok(Some(LinkBudget {
            transmit_power: power.unwrap_or(1.0),
            distance_actuator: self.distance_actuator.unwrap_or(1.0),
            distance_eve: self.distance_eve.unwrap_or(1.0),
            path_loss_exponent: self.path_loss_exponent.unwrap_or(0.0),
            noise_power_actuator: noise_a.unwrap_or(1.0),
            noise_power_eve: noise_e.unwrap_or(1.0),
        }))
    }

    fn sweep(&self) -> Result<Option<Sweep>, CliError> {
        let mut found = Vec::new();
        if let Some(g) = self.sweep_n {
            found.push(Sweep {
                var: SweepVar::Blocklength,
                points: int_grid(g, "sweep_n")?,
            });
        }
        if let Some(g) = self.sweep_b {
            found.push(Sweep {
                var: SweepVar::Bits,
                points: int_grid(g, "sweep_b")?,
            });
        }
        if let Some(g) = self.sweep_eta {
            found.push(Sweep {
                var: SweepVar::PowerSplit,
                points: float_grid(g, "sweep_eta")?,
            });
        }
        if let Some(g) = self.sweep_ka {
            found.push(Sweep {
                var: SweepVar::AntennasAp,
                points: int_grid(g, "sweep_ka")?,
            });
        }
        if let Some(g) = self.sweep_p_db {
            found.push(Sweep {
                var: SweepVar::TransmitPowerDb,
                points: float_grid(g, "sweep_p_db")?,
            });
        }
        if found.len() > 1 {
            let keys: Vec<&str> = found.iter().map(|s| s.var.key()).collect();
            return Err(CliError::Usage(format!(
                "only one sweep variable allowed, got {}",
                keys.join(", ")
            )));
        }
        Ok(found.pop())
    }

    fn resolve(self) -> Result<Scenario, CliError> {
        let link = self.link()?;
        let snr_a = either(self.snr_actuator, self.snr_actuator_db, "snr_actuator")?;
        let snr_e = either(self.snr_eve, self.snr_eve_db, "snr_eve")?;
        let bits = self.bits.unwrap_or(200);
        let n = self.blocklength.unwrap_or(400);
        let delta = self.leakage.unwrap_or(1e-2);
        let ka = self.antennas_ap.unwrap_or(1);
        let ke = self.antennas_eve.unwrap_or(2);
        let eta = self.power_split.unwrap_or(1.0);
        let config = match link {
            Some(link) => {
                if snr_a.is_some() || snr_e.is_some() {
                    return Err(CliError::Validation(
                        "SNR keys and link-budget keys are mutually exclusive".into(),
                    ));
                }
                SystemConfig::from_link(bits, n, delta, link, ka, ke, eta)?
            }
            None => SystemConfig::multi_antenna(
                bits,
                n,
                delta,
                snr_a.unwrap_or(db_to_linear(10.0)),
                snr_e.unwrap_or(db_to_linear(3.0)),
                ka,
                ke,
                eta,
            )?,
        };

        let methods = self.methods.as_deref().map(parse_methods).transpose()?;
        let defaults = McOptions::default();
        let mc = McOptions::new(
            self.trials.unwrap_or(defaults.trials),
            self.seed.unwrap_or(defaults.seed),
        )
        .with_workers(self.workers.unwrap_or(defaults.workers));

        let constraints = match (self.zeta_eps, self.zeta_n) {
            (Some(eps), Some(n)) => Some(Constraints::new(eps, n)?),
            (None, None) => None,
            _ => {
                return Err(CliError::Validation(
                    "zeta_eps and zeta_n must be given together".into(),
                ))
            }
        };
        let bits_range = match self.bits_range {
            Some([lo, hi]) if lo >= 1 && lo <= hi => Some(lo..=hi),
            Some(_) => return Err(CliError::Validation("bits_range needs 1 ≤ low ≤ high".into())),
            None => None,
        };
        let power_split_grid = match self.power_split_grid {
            Some(g) => float_grid(g, "power_split_grid")?,
            None => default_power_split_grid(),
        };
        let sweep = self.sweep()?;

        let scenario = Scenario {
            config,
            m1: self.m1,
            m2: self.m2,
            methods,
            mc,
            constraints,
            bits_range,
            power_split_grid,
            sweep,
        };
        scenario.quadrature(&scenario.config)?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_reference_defaults() {
        let s = Scenario::parse("").unwrap();
        assert_eq!(s.config.bits, 200);
        assert_eq!(s.config.blocklength, 400);
        assert_eq!(s.config.antennas_eve, 2);
        assert!((s.config.snr_actuator - 10.0).abs() < 1e-12);
        assert!(s.sweep.is_none() && s.constraints.is_none());
        assert_eq!(s.methods_for(&s.config), vec![Method::ClosedForm]);
    }

    #[test]
    fn db_and_linear_conflict() {
        let err = Scenario::parse("snr_eve = 2.0\nsnr_eve_db = 3.0").unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(
            Scenario::parse("blocklenght = 10").unwrap_err(),
            CliError::Validation(_)
        ));
    }

    #[test]
    fn two_sweeps_are_a_usage_error() {
        let err = Scenario::parse("sweep_n = [100, 200, 50]\nsweep_b = [100, 200, 50]").unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn grids_include_the_stop_value() {
        let s = Scenario::parse("sweep_n = [100, 1000, 50]").unwrap();
        assert_eq!(s.sweep.unwrap().points.len(), 19);
        let g = float_grid([0.1, 1.0, 0.1], "g").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[2], 0.3);
    }

    #[test]
    fn link_budget_drives_snrs() {
        let s =
            Scenario::parse("transmit_power_db = 0\nnoise_power_actuator_db = -10\nnoise_power_eve_db = -3").unwrap();
        assert!((s.config.snr_actuator - 10.0).abs() < 1e-9);
        let sweep = Sweep {
            var: SweepVar::TransmitPowerDb,
            points: vec![10.0],
        };
        let cfg = sweep.apply(&s.config, 10.0).unwrap();
        assert!((cfg.snr_actuator - 100.0).abs() < 1e-9);
        assert!(Scenario::parse("transmit_power = 1\nsnr_eve = 2").is_err());
    }
}
