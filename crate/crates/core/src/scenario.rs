//! Scenario description: PUE values, per-tier energy sourcing, site
//! placement, and the storage/cyclic settings for access-fog solar sites.

use crate::energy::{EnergyError, EsdParams, SolarArray, SolarProfile};
use crate::power::{PowerError, PowerParams};
use crate::topology::{CoreTopology, SitePlacement, TopologyError};

/// Energy source for the cloud and metro-fog tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TierSource {
    #[default]
    Brown,
    Renewable,
}

/// Energy source for access-fog data centres. Solar sites draw brown power
/// whenever the array (and battery, if present) cannot cover them.
#[derive(Debug, Clone, PartialEq)]
pub enum AfdcSource {
    Brown,
    Renewable,
    Solar {
        array: SolarArray,
        profile: SolarProfile,
        esd: Option<EsdParams>,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("solar/ESD settings given but the placement has no AFDC groups")]
    SolarWithoutAfdc,
    #[error("initial soc {0} kWh is negative or above capacity")]
    BadInitialSoc(f64),
}

/// One scenario to optimize or evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub pue_c: f64,
    pub pue_mf: f64,
    pub pue_af: f64,
    pub cdc_source: TierSource,
    pub mfdc_source: TierSource,
    pub afdc_source: AfdcSource,
    pub placement: SitePlacement,
    /// Require end-of-day soc >= initial soc so the optimizer cannot mine the
    /// battery's starting charge.
    pub cyclic_esd: bool,
    pub esd_initial_soc_kwh: f64,
}

impl ScenarioConfig {
    /// All-brown scenario with PUE 1.1 everywhere.
    pub fn all_brown(placement: SitePlacement) -> Self {
        Self {
            pue_c: 1.1,
            pue_mf: 1.1,
            pue_af: 1.1,
            cdc_source: TierSource::Brown,
            mfdc_source: TierSource::Brown,
            afdc_source: AfdcSource::Brown,
            placement,
            cyclic_esd: true,
            esd_initial_soc_kwh: 0.0,
        }
    }

    pub fn validate(&self, topo: &CoreTopology, params: &PowerParams) -> Result<(), ScenarioError> {
        self.placement.validate(topo)?;
        for (name, pue) in [("pue_c", self.pue_c), ("pue_mf", self.pue_mf), ("pue_af", self.pue_af)]
        {
            if !(1.0..=3.0).contains(&pue) {
                return Err(ScenarioError::Power(PowerError::PueOutOfRange {
                    name,
                    value: pue,
                }));
            }
        }
        params.validate()?;
        if let AfdcSource::Solar { array, esd, .. } = &self.afdc_source {
            if self.placement.afdc_groups.is_empty() {
                return Err(ScenarioError::SolarWithoutAfdc);
            }
            array.validate()?;
            if let Some(esd) = esd {
                esd.validate()?;
                if self.esd_initial_soc_kwh < 0.0 || self.esd_initial_soc_kwh > esd.e_max_kwh {
                    return Err(ScenarioError::BadInitialSoc(self.esd_initial_soc_kwh));
                }
            }
        }
        Ok(())
    }

    /// The power parameters with this scenario's PUE values substituted in.
    pub fn effective_params(&self, base: &PowerParams) -> PowerParams {
        let mut p = base.clone();
        p.pue_c = self.pue_c;
        p.pue_mf = self.pue_mf;
        p.pue_af = self.pue_af;
        p
    }

    pub fn esd(&self) -> Option<&EsdParams> {
        match &self.afdc_source {
            AfdcSource::Solar { esd, .. } => esd.as_ref(),
            _ => None,
        }
    }

    pub fn solar(&self) -> Option<(&SolarArray, &SolarProfile)> {
        match &self.afdc_source {
            AfdcSource::Solar { array, profile, .. } => Some((array, profile)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::CoreTopology;
    use alloc::vec::Vec;

    #[test]
    fn rejects_solar_without_afdcs() {
        let topo = CoreTopology::from_edges(2, &[(0, 1, 100.0)]).unwrap();
        let placement = SitePlacement::new(
            Vec::from([crate::topology::NodeId(0)]),
            Vec::new(),
            Vec::new(),
        );
        let mut sc = ScenarioConfig::all_brown(placement);
        sc.afdc_source = AfdcSource::Solar {
            array: SolarArray::default(),
            profile: SolarProfile::default_half_sine(),
            esd: None,
        };
        let err = sc.validate(&topo, &PowerParams::default()).unwrap_err();
        assert!(matches!(err, ScenarioError::SolarWithoutAfdc));
    }

    #[test]
    fn rejects_pue_below_one() {
        let topo = CoreTopology::from_edges(2, &[(0, 1, 100.0)]).unwrap();
        let mut sc = ScenarioConfig::all_brown(SitePlacement::default_for(&topo, 1));
        sc.pue_af = 0.5;
        let err = sc.validate(&topo, &PowerParams::default()).unwrap_err();
        assert!(matches!(
            err,
            ScenarioError::Power(PowerError::PueOutOfRange { name: "pue_af", .. })
        ));
    }
}
