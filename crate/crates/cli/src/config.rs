use std::fmt;
use std::path::{Path, PathBuf};

use decoherence_core::MapOrder;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Interference,
    Tunnel,
    Bouncer,
    Arrival,
    Entropy,
    Wigner,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Interference => "interference",
            Self::Tunnel => "tunnel",
            Self::Bouncer => "bouncer",
            Self::Arrival => "arrival",
            Self::Entropy => "entropy",
            Self::Wigner => "wigner",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OrderName {
    Exact,
    First,
}

impl From<OrderName> for MapOrder {
    fn from(o: OrderName) -> Self {
        match o {
            OrderName::Exact => MapOrder::Exact,
            OrderName::First => MapOrder::FirstOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBasis {
    Bouncer,
    Harmonic,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<Scenario>,
    gamma_inv_list: Option<Vec<f64>>,
    map_order: Option<OrderName>,
    times: Option<Vec<f64>>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    grids: RawGrids,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    sigma0: Option<f64>,
    #[serde(alias = "z0")]
    x0: Option<f64>,
    p0: Option<f64>,
    v0: Option<f64>,
    l: Option<f64>,
    omega: Option<f64>,
    detector_x: Option<f64>,
    t_max: Option<f64>,
    c1: Option<f64>,
    basis: Option<EntropyBasis>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrids {
    momentum_points: Option<usize>,
    k_points: Option<usize>,
    x_points: Option<usize>,
    x_half_width: Option<f64>,
    n_max: Option<usize>,
    time_points: Option<usize>,
    r_points: Option<usize>,
    u_points: Option<usize>,
    r_max: Option<f64>,
    smearing_nodes: Option<usize>,
}

/// Physical parameters in the scenario's units; `x0` is the launch height for the bouncer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub sigma0: f64,
    pub x0: f64,
    pub p0: f64,
    pub v0: f64,
    pub l: f64,
    pub omega: f64,
    pub detector_x: f64,
    pub t_max: f64,
    pub c1: f64,
    pub basis: EntropyBasis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grids {
    /// `None` keeps the packet's default momentum grid.
    pub momentum_points: Option<usize>,
    pub k_points: usize,
    pub x_points: usize,
    pub x_half_width: f64,
    pub n_max: usize,
    pub time_points: usize,
    pub r_points: usize,
    pub u_points: usize,
    pub r_max: f64,
    pub smearing_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub gamma_inv_list: Vec<f64>,
    pub map_order: MapOrder,
    pub times: Vec<f64>,
    pub output_dir: PathBuf,
    pub physics: Physics,
    pub grids: Grids,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub gamma_inv_list: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    pub map_order: Option<OrderName>,
}

fn uniform(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

fn default_physics(s: Scenario) -> Physics {
    let base = Physics {
        sigma0: 1.0,
        x0: 0.0,
        p0: 0.0,
        v0: 0.0,
        l: 0.0,
        omega: 1.0,
        detector_x: 0.0,
        t_max: 0.0,
        c1: 0.0,
        basis: EntropyBasis::Bouncer,
    };
    match s {
        Scenario::Interference => Physics {
            x0: 5.0,
            p0: 1.0,
            ..base
        },
        Scenario::Tunnel => Physics {
            x0: -10.0,
            p0: 2.0,
            v0: 3.0,
            l: 1.0,
            ..base
        },
        Scenario::Bouncer | Scenario::Entropy => Physics { x0: 5.0, ..base },
        Scenario::Arrival => Physics {
            x0: -10.0,
            p0: 2.0,
            ..base
        },
        Scenario::Wigner => Physics {
            x0: -0.5,
            p0: 0.8,
            c1: 1.0,
            ..base
        },
    }
}

fn default_times(s: Scenario) -> Vec<f64> {
    match s {
        Scenario::Interference => vec![0.0, 1.0, 3.0, 5.0, 10.0, 15.0],
        Scenario::Tunnel => uniform(0.0, 40.0, 801),
        Scenario::Bouncer => uniform(0.0, 40.0, 801),
        Scenario::Entropy => uniform(0.0, 20.0, 401),
        Scenario::Arrival => Vec::new(),
        Scenario::Wigner => vec![0.8],
    }
}

fn default_gammas(s: Scenario) -> Vec<f64> {
    match s {
        Scenario::Arrival => vec![0.0, 0.02, 0.05, 0.1],
        Scenario::Wigner => vec![0.0, 0.2],
        _ => vec![0.0, 0.2, 0.5, 0.8],
    }
}

/// Parses a config file; the command-line `scenario` must agree with the file's, if any.
pub fn load_config(path: &Path, scenario: Scenario, overrides: &Overrides) -> CliResult<ScenarioConfig> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::MissingConfig {
                path: path.to_path_buf(),
            })
        }
        Err(e) => return Err(CliError::io(path, e)),
    };
    parse_config(&text, scenario, overrides)
}

pub fn parse_config(text: &str, scenario: Scenario, overrides: &Overrides) -> CliResult<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Validation(e.message().to_string()))?;
    resolve(raw, scenario, overrides)
}

/// The scenario's defaults alone.
pub fn default_config(scenario: Scenario, overrides: &Overrides) -> CliResult<ScenarioConfig> {
    resolve(RawConfig::default(), scenario, overrides)
}

fn resolve(raw: RawConfig, scenario: Scenario, overrides: &Overrides) -> CliResult<ScenarioConfig> {
    if let Some(s) = raw.scenario {
        if s != scenario {
            return Err(CliError::Validation(format!(
                "scenario: file declares `{s}` but `{scenario}` was requested"
            )));
        }
    }
    let d = default_physics(scenario);
    let p = raw.physics;
    let mut physics = Physics {
        sigma0: p.sigma0.unwrap_or(d.sigma0),
        x0: p.x0.unwrap_or(d.x0),
        p0: p.p0.unwrap_or(d.p0),
        v0: p.v0.unwrap_or(d.v0),
        l: p.l.unwrap_or(d.l),
        omega: p.omega.unwrap_or(d.omega),
        detector_x: p.detector_x.unwrap_or(d.detector_x),
        t_max: p.t_max.unwrap_or(d.t_max),
        c1: p.c1.unwrap_or(d.c1),
        basis: p.basis.unwrap_or(d.basis),
    };
    if scenario == Scenario::Arrival && p.t_max.is_none() && physics.p0 > 0.0 {
        physics.t_max = 4.0 * (physics.detector_x - physics.x0) / physics.p0;
    }
    let g = raw.grids;
    let grids = Grids {
        momentum_points: g.momentum_points,
        k_points: g.k_points.unwrap_or(decoherence_core::spectra::DEFAULT_K_POINTS),
        x_points: g.x_points.unwrap_or(401),
        x_half_width: g.x_half_width.unwrap_or(20.0),
        n_max: g.n_max.unwrap_or(40),
        time_points: g.time_points.unwrap_or(4001),
        r_points: g.r_points.unwrap_or(161),
        u_points: g.u_points.unwrap_or(97),
        r_max: g.r_max.unwrap_or(14.0),
        smearing_nodes: g
            .smearing_nodes
            .unwrap_or(decoherence_core::wigner::DEFAULT_SMEARING_NODES),
    };
    let default_order = if scenario == Scenario::Entropy {
        OrderName::Exact
    } else {
        OrderName::First
    };
    let order = overrides.map_order.or(raw.map_order).unwrap_or(default_order);
    let config = ScenarioConfig {
        scenario,
        gamma_inv_list: overrides
            .gamma_inv_list
            .clone()
            .or(raw.gamma_inv_list)
            .unwrap_or_else(|| default_gammas(scenario)),
        map_order: order.into(),
        times: raw.times.unwrap_or_else(|| default_times(scenario)),
        output_dir: overrides
            .output_dir
            .clone()
            .or(raw.output_dir)
            .unwrap_or_else(|| PathBuf::from(format!("out/{scenario}"))),
        physics,
        grids,
    };
    validate(&config)?;
    Ok(config)
}

fn field(name: &str, reason: impl fmt::Display) -> CliError {
    CliError::Validation(format!("{name}: {reason}"))
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be positive, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> CliResult<()> {
    if v >= min {
        Ok(())
    } else {
        Err(field(name, format!("must be at least {min}, got {v}")))
    }
}

pub fn validate(c: &ScenarioConfig) -> CliResult<()> {
    if c.gamma_inv_list.is_empty() {
        return Err(field("gamma_inv_list", "must not be empty"));
    }
    if let Some(g) = c.gamma_inv_list.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
        return Err(field(
            "gamma_inv_list",
            format!("entries must be non-negative, got {g}"),
        ));
    }
    if c.scenario != Scenario::Arrival || !c.times.is_empty() {
        if c.times.is_empty() {
            return Err(field("times", "must not be empty"));
        }
        if let Some(t) = c.times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(field("times", format!("entries must be non-negative, got {t}")));
        }
        if c.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(field("times", "must be strictly increasing"));
        }
    }
    let first_order_only = matches!(c.scenario, Scenario::Arrival | Scenario::Wigner);
    if first_order_only && c.map_order == MapOrder::Exact && c.gamma_inv_list.iter().any(|g| *g > 0.0) {
        return Err(field(
            "map_order",
            format!("the {} scenario supports the first-order map only", c.scenario),
        ));
    }
    let p = &c.physics;
    let g = &c.grids;
    positive("physics.sigma0", p.sigma0)?;
    if let Some(n) = g.momentum_points {
        at_least("grids.momentum_points", n, 16)?;
    }
    match c.scenario {
        Scenario::Interference => {
            positive("physics.x0", p.x0)?;
            positive("physics.p0", p.p0)?;
            at_least("grids.x_points", g.x_points, 2)?;
            positive("grids.x_half_width", g.x_half_width)?;
        }
        Scenario::Tunnel => {
            positive("physics.p0", p.p0)?;
            positive("physics.l", p.l)?;
            if !(p.v0 >= 0.0) {
                return Err(field("physics.v0", format!("must be non-negative, got {}", p.v0)));
            }
            if p.x0 + 8.0 * p.sigma0 > 0.0 {
                return Err(field(
                    "physics.x0",
                    "packet must start left of the barrier (x0 + 8σ0 ≤ 0)",
                ));
            }
            at_least("grids.k_points", g.k_points, 8)?;
            let n = c.times.len();
            if n < 3 {
                return Err(field("times", "dwell integration needs at least three samples"));
            }
            let dt = (c.times[n - 1] - c.times[0]) / (n - 1) as f64;
            if c.times
                .iter()
                .enumerate()
                .any(|(i, t)| (t - c.times[0] - dt * i as f64).abs() > 1e-9 * dt)
            {
                return Err(field("times", "must be uniformly spaced for the dwell integral"));
            }
        }
        Scenario::Bouncer | Scenario::Entropy => {
            let harmonic = c.scenario == Scenario::Entropy && p.basis == EntropyBasis::Harmonic;
            if harmonic {
                positive("physics.omega", p.omega)?;
                if g.n_max == 0 || g.n_max > 65 {
                    return Err(field("grids.n_max", format!("must lie in 1..=65, got {}", g.n_max)));
                }
            } else {
                positive("physics.x0", p.x0)?;
                if g.n_max == 0 || g.n_max > 50 {
                    return Err(field("grids.n_max", format!("must lie in 1..=50, got {}", g.n_max)));
                }
            }
        }
        Scenario::Arrival => {
            positive("physics.p0", p.p0)?;
            if p.detector_x <= p.x0 {
                return Err(field("physics.detector_x", "must lie to the right of x0"));
            }
            positive("physics.t_max", p.t_max)?;
            if g.time_points < 3 || g.time_points % 2 == 0 {
                return Err(field(
                    "grids.time_points",
                    format!("must be odd and at least 3, got {}", g.time_points),
                ));
            }
        }
        Scenario::Wigner => {
            at_least("grids.r_points", g.r_points, 5)?;
            at_least("grids.u_points", g.u_points, 5)?;
            positive("grids.r_max", g.r_max)?;
            at_least("grids.smearing_nodes", g.smearing_nodes, 1)?;
            if g.smearing_nodes > 200 {
                return Err(field("grids.smearing_nodes", "must not exceed 200"));
            }
        }
    }
    Ok(())
}
