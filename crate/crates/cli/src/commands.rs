use std::fmt::Write as _;

use fblsec::optimizer::{
    constrained_optimal_blocklength, joint_optimize_bits_blocklength, optimal_blocklength, optimal_power_allocation,
};
use fblsec::{evaluate, Method, SystemConfig, ThroughputEstimate};

use crate::error::CliError;
use crate::scenario::{Scenario, SweepVar};

pub const SWEEP_HEADER: &str = "sweep_var,method,value";
pub const OPTIMIZE_HEADER: &str = "sweep_var,mode,bits,n_opt,power_split,throughput,feasible,continuous_root";

fn estimate(scn: &Scenario, cfg: &SystemConfig<f64>, method: Method) -> Result<ThroughputEstimate<f64>, CliError> {
    let quad = scn.quadrature(cfg)?;
    Ok(evaluate(cfg, method, &quad, &scn.mc)?)
}

/// One `key = value` block per method.
pub fn eval(scn: &Scenario) -> Result<String, CliError> {
    if let Some(sweep) = &scn.sweep {
        return Err(CliError::Usage(format!(
            "eval takes no sweep, found {}; use the sweep command",
            sweep.var.key()
        )));
    }
    let cfg = &scn.config;
    let mut out = String::new();
    for (i, method) in scn.methods_for(cfg).into_iter().enumerate() {
        let est = estimate(scn, cfg, method)?;
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "method = {}", est.method).unwrap();
        writeln!(out, "bpcu = {}", est.bpcu).unwrap();
        writeln!(out, "k_rho_a = {}", est.diagnostics.k_rho_a).unwrap();
        writeln!(out, "mean_eve_snr = {}", est.diagnostics.mean_eve_snr).unwrap();
        for w in &est.diagnostics.warnings {
            writeln!(out, "warning = {w}").unwrap();
        }
    }
    Ok(out)
}

/// CSV with one row per grid point and method.
pub fn sweep(scn: &Scenario) -> Result<String, CliError> {
    let sweep = scn.sweep.as_ref().ok_or_else(|| {
        CliError::Usage("sweep needs one of sweep_n, sweep_b, sweep_eta, sweep_ka, sweep_p_db".into())
    })?;
    let mut out = format!("{SWEEP_HEADER}\n");
    for &point in &sweep.points {
        let cfg = sweep.apply(&scn.config, point)?;
        for method in scn.methods_for(&cfg) {
            let est = estimate(scn, &cfg, method)?;
            writeln!(out, "{point},{method},{}", est.bpcu).unwrap();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub mode: &'static str,
    pub bits: u64,
    pub n_opt: Option<u64>,
    pub power_split: f64,
    pub throughput: f64,
    pub feasible: bool,
    pub continuous_root: Option<f64>,
}

/// Picks the problem from the scenario: the power split when `K_A > 1`,
/// the joint packet-size search when `bits_range` is set, otherwise the
/// (constrained) blocklength.
pub fn optimize_config(scn: &Scenario, cfg: &SystemConfig<f64>) -> Result<Outcome, CliError> {
    if !cfg.is_single_antenna() {
        let (eta, est) = optimal_power_allocation(cfg, &scn.quadrature(cfg)?, &scn.power_split_grid)?;
        return Ok(Outcome {
            mode: "power_split",
            bits: cfg.bits,
            n_opt: Some(cfg.blocklength),
            power_split: eta,
            throughput: est.bpcu,
            feasible: true,
            continuous_root: None,
        });
    }
    let (mode, bits, res) = match (&scn.bits_range, &scn.constraints) {
        (Some(range), cons) => {
            let (b, r) = joint_optimize_bits_blocklength(cfg, cons.as_ref(), range.clone())?;
            ("joint", b, r)
        }
        (None, Some(cons)) => ("constrained", cfg.bits, constrained_optimal_blocklength(cfg, cons)?),
        (None, None) => ("blocklength", cfg.bits, optimal_blocklength(cfg)?),
    };
    Ok(Outcome {
        mode,
        bits,
        n_opt: res.n_opt,
        power_split: cfg.power_split,
        throughput: res.throughput,
        feasible: res.feasible,
        continuous_root: Some(res.continuous_root),
    })
}

fn opt_cell<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

/// A `key = value` report, or CSV when the scenario has a sweep.
pub fn optimize(scn: &Scenario) -> Result<String, CliError> {
    let Some(sweep) = &scn.sweep else {
        let o = optimize_config(scn, &scn.config)?;
        let mut out = String::new();
        writeln!(out, "mode = {}", o.mode).unwrap();
        writeln!(out, "bits = {}", o.bits).unwrap();
        writeln!(out, "n_opt = {}", opt_cell(o.n_opt)).unwrap();
        writeln!(out, "power_split = {}", o.power_split).unwrap();
        writeln!(out, "throughput = {}", o.throughput).unwrap();
        writeln!(out, "feasible = {}", o.feasible).unwrap();
        writeln!(out, "continuous_root = {}", opt_cell(o.continuous_root)).unwrap();
        return Ok(out);
    };
    match sweep.var {
        SweepVar::Blocklength => {
            return Err(CliError::Usage(
                "optimize cannot sweep the blocklength it optimizes".into(),
            ))
        }
        SweepVar::Bits if scn.bits_range.is_some() => {
            return Err(CliError::Usage("sweep_b conflicts with bits_range".into()));
        }
        SweepVar::PowerSplit if scn.config.antennas_ap > 1 => {
            return Err(CliError::Usage(
                "optimize cannot sweep the power split it optimizes".into(),
            ));
        }
        _ => {}
    }
    let mut out = format!("{OPTIMIZE_HEADER}\n");
    for &point in &sweep.points {
        let cfg = sweep.apply(&scn.config, point)?;
        let o = optimize_config(scn, &cfg)?;
        writeln!(
            out,
            "{point},{},{},{},{},{},{},{}",
            o.mode,
            o.bits,
            opt_cell(o.n_opt),
            o.power_split,
            o.throughput,
            o.feasible,
            opt_cell(o.continuous_root)
        )
        .unwrap();
    }
    Ok(out)
}
