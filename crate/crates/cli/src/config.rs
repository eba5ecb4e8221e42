//! Run configuration: a flat `key = value` file referencing the topology,
//! placement, demand and solar files plus every scenario setting and any
//! power-parameter override. Paths are resolved relative to the config file.

use std::path::{Path, PathBuf};

use greenvod_core::demand::{synth_demand, DemandShape};
use greenvod_core::energy::EsdParams;
use greenvod_core::{
    AfdcSource, CoreTopology, DemandProfile, PowerParams, ScenarioConfig, SitePlacement,
    SolarArray, SolarProfile, TierSource,
};

use crate::formats::{self, FormatError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        source: FormatError,
    },
    #[error("line {line}: bad value for `{key}`: {value}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config needs `topology = <path>`")]
    MissingTopology,
    #[error("config needs either `demand = <path>` or `demand_peak_gbps`")]
    MissingDemand,
    #[error(transparent)]
    Scenario(#[from] greenvod_core::scenario::ScenarioError),
    #[error(transparent)]
    Power(#[from] greenvod_core::power::PowerError),
    #[error(transparent)]
    Demand(#[from] greenvod_core::demand::DemandError),
}

/// Everything a run needs, materialized from one config file.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub topo: CoreTopology,
    pub demand: DemandProfile,
    pub params: PowerParams,
    pub scenario: ScenarioConfig,
    pub placement: SitePlacement,
    pub solar_array: SolarArray,
    pub solar_profile: SolarProfile,
    pub esd: EsdParams,
    pub cyclic_esd: bool,
    pub esd_initial_soc_kwh: f64,
    pub sweep_pue_mf: Vec<f64>,
    pub sweep_pue_af: Vec<f64>,
}

#[derive(Default)]
struct RawConfig {
    topology: Option<PathBuf>,
    placement: Option<PathBuf>,
    demand: Option<PathBuf>,
    solar: Option<PathBuf>,
    power_params: Option<PathBuf>,
    demand_peak_gbps: Option<f64>,
    demand_shape: DemandShape,
    pue_c: f64,
    pue_mf: f64,
    pue_af: f64,
    cdc_source: TierSource,
    mfdc_source: TierSource,
    afdc_source_kind: AfdcKind,
    solar_area_m2: f64,
    solar_efficiency: f64,
    esd: bool,
    esd_e_max_kwh: f64,
    esd_eta_charge: f64,
    esd_eta_discharge: f64,
    esd_max_charge_kwh: Option<f64>,
    esd_max_discharge_kwh: Option<f64>,
    esd_initial_soc_kwh: f64,
    cyclic_esd: bool,
    cdc_count: usize,
    sweep_pue_mf: Vec<f64>,
    sweep_pue_af: Vec<f64>,
    power_overrides: Vec<(usize, String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum AfdcKind {
    #[default]
    Brown,
    Renewable,
    Solar,
}

impl RawConfig {
    fn new() -> Self {
        Self {
            demand_shape: DemandShape::EveningPeak,
            pue_c: 1.1,
            pue_mf: 1.1,
            pue_af: 1.1,
            cdc_source: TierSource::Brown,
            mfdc_source: TierSource::Brown,
            solar_area_m2: 250.0,
            solar_efficiency: 0.17,
            esd_e_max_kwh: 100.0,
            esd_eta_charge: 0.7225,
            esd_eta_discharge: 0.9025,
            cyclic_esd: true,
            cdc_count: 5,
            sweep_pue_mf: vec![1.1, 1.15, 1.2, 1.25, 1.3],
            sweep_pue_af: vec![1.1, 1.15, 1.2, 1.25, 1.3],
            ..Default::default()
        }
    }
}

fn parse_list(value: &str) -> Option<Vec<f64>> {
    value
        .split(',')
        .map(|t| t.trim().parse::<f64>().ok())
        .collect()
}

/// Loads and materializes a config file.
pub fn load_config(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut raw = RawConfig::new();

    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((key, value)) = t.split_once('=') else {
            return Err(ConfigError::BadValue {
                line: i + 1,
                key: t.to_string(),
                value: String::new(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let bad = || ConfigError::BadValue {
            line: i + 1,
            key: key.to_string(),
            value: value.to_string(),
        };
        let fval = || value.parse::<f64>().map_err(|_| bad());
        let bval = || match value {
            "true" | "on" | "yes" => Ok(true),
            "false" | "off" | "no" => Ok(false),
            _ => Err(bad()),
        };
        match key {
            "topology" => raw.topology = Some(base.join(value)),
            "placement" => raw.placement = Some(base.join(value)),
            "demand" => raw.demand = Some(base.join(value)),
            "solar" => raw.solar = Some(base.join(value)),
            "power_params" => raw.power_params = Some(base.join(value)),
            "demand_peak_gbps" => raw.demand_peak_gbps = Some(fval()?),
            "demand_shape" => {
                raw.demand_shape = match value {
                    "flat" => DemandShape::Flat,
                    "evening_peak" => DemandShape::EveningPeak,
                    _ => return Err(bad()),
                }
            }
            "pue_c" => raw.pue_c = fval()?,
            "pue_mf" => raw.pue_mf = fval()?,
            "pue_af" => raw.pue_af = fval()?,
            "cdc_source" | "mfdc_source" => {
                let source = match value {
                    "brown" => TierSource::Brown,
                    "renewable" => TierSource::Renewable,
                    _ => return Err(bad()),
                };
                if key == "cdc_source" {
                    raw.cdc_source = source;
                } else {
                    raw.mfdc_source = source;
                }
            }
            "afdc_source" => {
                raw.afdc_source_kind = match value {
                    "brown" => AfdcKind::Brown,
                    "renewable" => AfdcKind::Renewable,
                    "solar" => AfdcKind::Solar,
                    _ => return Err(bad()),
                }
            }
            "solar_area_m2" => raw.solar_area_m2 = fval()?,
            "solar_efficiency" => raw.solar_efficiency = fval()?,
            "esd" => raw.esd = bval()?,
            "esd_e_max_kwh" => raw.esd_e_max_kwh = fval()?,
            "esd_eta_charge" => raw.esd_eta_charge = fval()?,
            "esd_eta_discharge" => raw.esd_eta_discharge = fval()?,
            "esd_max_charge_kwh" => raw.esd_max_charge_kwh = Some(fval()?),
            "esd_max_discharge_kwh" => raw.esd_max_discharge_kwh = Some(fval()?),
            "esd_initial_soc_kwh" => raw.esd_initial_soc_kwh = fval()?,
            "cyclic_esd" => raw.cyclic_esd = bval()?,
            "cdc_count" => raw.cdc_count = value.parse().map_err(|_| bad())?,
            "sweep_pue_mf" => raw.sweep_pue_mf = parse_list(value).ok_or_else(bad)?,
            "sweep_pue_af" => raw.sweep_pue_af = parse_list(value).ok_or_else(bad)?,
            other if formats::is_power_param_key(other) => {
                raw.power_overrides
                    .push((i, other.to_string(), value.to_string()));
            }
            other => {
                return Err(ConfigError::UnknownKey {
                    line: i + 1,
                    key: other.to_string(),
                })
            }
        }
    }

    materialize(raw, path)
}

fn read_file(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn materialize(raw: RawConfig, config_path: &Path) -> Result<LoadedConfig, ConfigError> {
    let in_file = |source: FormatError, path: &Path| ConfigError::Format {
        path: path.display().to_string(),
        source,
    };

    let topo_path = raw.topology.ok_or(ConfigError::MissingTopology)?;
    let topo = formats::parse_topology(&read_file(&topo_path)?)
        .map_err(|e| in_file(e, &topo_path))?;

    let placement = match &raw.placement {
        Some(p) => formats::parse_placement(&read_file(p)?, &topo).map_err(|e| in_file(e, p))?,
        None => SitePlacement::default_for(&topo, raw.cdc_count),
    };

    let demand = match &raw.demand {
        Some(p) => formats::parse_demand(&read_file(p)?, &topo).map_err(|e| in_file(e, p))?,
        None => {
            let peak = raw.demand_peak_gbps.ok_or(ConfigError::MissingDemand)?;
            synth_demand(peak, raw.demand_shape, &topo)?
        }
    };

    let mut params = PowerParams::default();
    if let Some(p) = &raw.power_params {
        formats::apply_power_params(&read_file(p)?, &mut params).map_err(|e| in_file(e, p))?;
    }
    for (line, key, value) in &raw.power_overrides {
        formats::apply_power_param(*line, key, value, &mut params)
            .map_err(|e| in_file(e, config_path))?;
    }
    params.pue_c = raw.pue_c;
    params.pue_mf = raw.pue_mf;
    params.pue_af = raw.pue_af;
    params.validate()?;

    let solar_profile = match &raw.solar {
        Some(p) => formats::parse_solar(&read_file(p)?).map_err(|e| in_file(e, p))?,
        None => SolarProfile::default_half_sine(),
    };
    let solar_array = SolarArray {
        area_m2: raw.solar_area_m2,
        conversion_efficiency: raw.solar_efficiency,
    };
    let esd = EsdParams {
        e_max_kwh: raw.esd_e_max_kwh,
        eta_charge: raw.esd_eta_charge,
        eta_discharge: raw.esd_eta_discharge,
        max_charge_kwh_per_hour: raw.esd_max_charge_kwh.unwrap_or(raw.esd_e_max_kwh),
        max_discharge_kwh_per_hour: raw.esd_max_discharge_kwh.unwrap_or(raw.esd_e_max_kwh),
    };

    let afdc_source = match raw.afdc_source_kind {
        AfdcKind::Brown => AfdcSource::Brown,
        AfdcKind::Renewable => AfdcSource::Renewable,
        AfdcKind::Solar => AfdcSource::Solar {
            array: solar_array,
            profile: solar_profile.clone(),
            esd: raw.esd.then_some(esd),
        },
    };

    let scenario = ScenarioConfig {
        pue_c: raw.pue_c,
        pue_mf: raw.pue_mf,
        pue_af: raw.pue_af,
        cdc_source: raw.cdc_source,
        mfdc_source: raw.mfdc_source,
        afdc_source,
        placement: placement.clone(),
        cyclic_esd: raw.cyclic_esd,
        esd_initial_soc_kwh: raw.esd_initial_soc_kwh,
    };
    scenario.validate(&topo, &params)?;

    Ok(LoadedConfig {
        topo,
        demand,
        params,
        scenario,
        placement,
        solar_array,
        solar_profile,
        esd,
        cyclic_esd: raw.cyclic_esd,
        esd_initial_soc_kwh: raw.esd_initial_soc_kwh,
        sweep_pue_mf: raw.sweep_pue_mf,
        sweep_pue_af: raw.sweep_pue_af,
    })
}

impl LoadedConfig {
    /// The all-brown, CDC-only baseline every savings number is measured
    /// against: same demand and CDC sites, no fog tiers.
    pub fn baseline_scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            pue_c: self.scenario.pue_c,
            pue_mf: self.scenario.pue_mf,
            pue_af: self.scenario.pue_af,
            cdc_source: TierSource::Brown,
            mfdc_source: TierSource::Brown,
            afdc_source: AfdcSource::Brown,
            placement: SitePlacement::new(self.placement.cdc_nodes.clone(), vec![], vec![]),
            cyclic_esd: self.cyclic_esd,
            esd_initial_soc_kwh: 0.0,
        }
    }

    /// Renewable CDCs and MFDCs, solar AFDCs, no storage.
    pub fn scenario_b(&self) -> ScenarioConfig {
        ScenarioConfig {
            pue_c: self.scenario.pue_c,
            pue_mf: self.scenario.pue_mf,
            pue_af: self.scenario.pue_af,
            cdc_source: TierSource::Renewable,
            mfdc_source: TierSource::Renewable,
            afdc_source: AfdcSource::Solar {
                array: self.solar_array,
                profile: self.solar_profile.clone(),
                esd: None,
            },
            placement: self.placement.clone(),
            cyclic_esd: self.cyclic_esd,
            esd_initial_soc_kwh: 0.0,
        }
    }

    /// Scenario B plus the battery at every solar site.
    pub fn scenario_c(&self) -> ScenarioConfig {
        let mut sc = self.scenario_b();
        sc.afdc_source = AfdcSource::Solar {
            array: self.solar_array,
            profile: self.solar_profile.clone(),
            esd: Some(self.esd),
        };
        sc.esd_initial_soc_kwh = self.esd_initial_soc_kwh;
        sc
    }
}
