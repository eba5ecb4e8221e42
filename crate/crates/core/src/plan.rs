//! The hourly delivery decision: Gbps served per tier for every access
//! group, the core virtual-traffic matrix with lightpath counts, and the
//! solar/battery dispatch at every access-fog site. Both the optimizer and
//! the verifier speak this type.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::HOURS;
use crate::topology::{GroupId, NodeId};

/// One hour of core traffic between a pair of core routers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreFlow {
    pub hour: usize,
    pub src: NodeId,
    pub dst: NodeId,
    pub gbps: f64,
    pub wavelengths: u32,
}

/// Solar and battery dispatch per access-fog group, all in kWh. Grids are
/// `[group][hour]`; rows for groups without an AFDC stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SolarTrace {
    pub serve: Vec<f64>,
    pub charge: Vec<f64>,
    pub curtail: Vec<f64>,
    pub discharge_delivered: Vec<f64>,
    /// State of charge at the end of each hour.
    pub soc: Vec<f64>,
    pub initial_soc_kwh: f64,
}

impl SolarTrace {
    pub fn zero(groups: usize) -> Self {
        Self {
            serve: vec![0.0; groups * HOURS],
            charge: vec![0.0; groups * HOURS],
            curtail: vec![0.0; groups * HOURS],
            discharge_delivered: vec![0.0; groups * HOURS],
            soc: vec![0.0; groups * HOURS],
            initial_soc_kwh: 0.0,
        }
    }
}

/// A complete 24-hour placement decision.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementPlan {
    groups: usize,
    cdc_count: usize,
    /// [group][hour]
    afdc_gbps: Vec<f64>,
    /// [group][hour]
    mfdc_gbps: Vec<f64>,
    /// [group][cdc][hour]
    cdc_gbps: Vec<f64>,
    /// Sorted by (hour, src, dst); only pairs with traffic or wavelengths.
    pub core_flows: Vec<CoreFlow>,
    pub solar: Option<SolarTrace>,
    /// Brown energy objective the producer reported for this plan, in kWh
    /// (traffic-attributable convention: the constant optical-switch floor is
    /// excluded).
    pub objective_kwh: f64,
}

impl PlacementPlan {
    pub fn zero(groups: usize, cdc_count: usize) -> Self {
        Self {
            groups,
            cdc_count,
            afdc_gbps: vec![0.0; groups * HOURS],
            mfdc_gbps: vec![0.0; groups * HOURS],
            cdc_gbps: vec![0.0; groups * cdc_count * HOURS],
            core_flows: Vec::new(),
            solar: None,
            objective_kwh: 0.0,
        }
    }

    pub fn group_count(&self) -> usize {
        self.groups
    }

    pub fn cdc_count(&self) -> usize {
        self.cdc_count
    }

    pub fn afdc(&self, g: GroupId, hour: usize) -> f64 {
        self.afdc_gbps[g.0 * HOURS + hour]
    }

    pub fn mfdc(&self, g: GroupId, hour: usize) -> f64 {
        self.mfdc_gbps[g.0 * HOURS + hour]
    }

    pub fn cdc(&self, g: GroupId, cdc_index: usize, hour: usize) -> f64 {
        self.cdc_gbps[(g.0 * self.cdc_count + cdc_index) * HOURS + hour]
    }

    pub fn cdc_total(&self, g: GroupId, hour: usize) -> f64 {
        (0..self.cdc_count).map(|c| self.cdc(g, c, hour)).sum()
    }

    /// Gbps delivered to the group from all tiers.
    pub fn served(&self, g: GroupId, hour: usize) -> f64 {
        self.afdc(g, hour) + self.mfdc(g, hour) + self.cdc_total(g, hour)
    }

    pub fn set_afdc(&mut self, g: GroupId, hour: usize, gbps: f64) {
        self.afdc_gbps[g.0 * HOURS + hour] = gbps;
    }

    pub fn set_mfdc(&mut self, g: GroupId, hour: usize, gbps: f64) {
        self.mfdc_gbps[g.0 * HOURS + hour] = gbps;
    }

    pub fn set_cdc(&mut self, g: GroupId, cdc_index: usize, hour: usize, gbps: f64) {
        self.cdc_gbps[(g.0 * self.cdc_count + cdc_index) * HOURS + hour] = gbps;
    }

    /// Flattened decision vector, used for deterministic tie-breaking between
    /// equal-objective plans.
    pub fn decision_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(
            self.afdc_gbps.len() + self.mfdc_gbps.len() + self.cdc_gbps.len(),
        );
        v.extend_from_slice(&self.afdc_gbps);
        v.extend_from_slice(&self.mfdc_gbps);
        v.extend_from_slice(&self.cdc_gbps);
        if let Some(s) = &self.solar {
            v.extend_from_slice(&s.charge);
            v.extend_from_slice(&s.discharge_delivered);
        }
        v
    }
}
