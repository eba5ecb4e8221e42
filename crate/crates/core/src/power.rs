//! Transport-network and data-centre power models.
//!
//! Core IP-over-WDM power follows the bypass accounting: each lightpath
//! carries its own equipment chain (two router ports and two transponders at
//! the endpoints, the amplifier chain of one fibre per hop of its physical
//! route, and regenerators once the route exceeds the optical reach), plus a
//! constant per-node optical-switch floor. Metro, access (OLT) and
//! data-centre power are ceiling-based on/off device counts scaled by the
//! tier's PUE. Devices are allocated whole and consume full power when
//! active, which keeps every quantity linear in integer device counts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::energy::HOURS;
use crate::num;
use crate::plan::PlacementPlan;
use crate::scenario::{AfdcSource, ScenarioConfig, TierSource};
use crate::topology::{shortest_physical_path, CoreTopology, NodeId, PhysicalPath, TopologyError};

/// Data-centre tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcTier {
    Cdc,
    Mfdc,
    Afdc,
}

impl DcTier {
    pub fn name(self) -> &'static str {
        match self {
            DcTier::Cdc => "cdc",
            DcTier::Mfdc => "mfdc",
            DcTier::Afdc => "afdc",
        }
    }
}

/// How data-centre IT power is computed: explicit switch and router-port
/// counts ("detailed", the default) or compute power scaled by the
/// network-to-compute ratio ("ratio").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DcPowerMode {
    #[default]
    Detailed,
    Ratio,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PowerError {
    #[error("{name} = {value} outside the 1.0..=3.0 PUE range")]
    PueOutOfRange { name: &'static str, value: f64 },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("negative traffic {gbps} Gbps between {src} and {dst}")]
    NegativeTraffic { src: NodeId, dst: NodeId, gbps: f64 },
    #[error("negative load {0} Gbps")]
    NegativeLoad(f64),
    #[error("access group load {load} Gbps exceeds total OLT capacity {cap} Gbps")]
    OltOverload { load: f64, cap: f64 },
    #[error("{tier} load {load} Gbps exceeds serving capacity {cap} Gbps")]
    TierOverCapacity {
        tier: &'static str,
        load: f64,
        cap: f64,
    },
    #[error("plan shape mismatch: {0}")]
    PlanShape(&'static str),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Every constant of the power model. Fields that restate published figures
/// keep those figures as defaults; the remaining fields (core equipment
/// powers, wavelength capacity, server power, router-port bitrate) are
/// documented configuration defaults drawn from the energy-efficient core
/// network literature and can be overridden per run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerParams {
    pub cloud_router_port_w: f64,
    pub fog_router_port_w: f64,
    pub cloud_metro_switch_w: f64,
    pub access_fog_switch_w: f64,
    pub metro_eth_switch_w: f64,
    pub olt_w: f64,
    pub switch_bitrate_gbps: f64,
    pub access_switch_bitrate_gbps: f64,
    pub server_capacity_gbps: f64,
    pub pue_c: f64,
    pub pue_mf: f64,
    pub pue_af: f64,
    pub net_to_compute_ratio: f64,
    pub pue_n: f64,
    pub olt_afdc_capacity_gbps: f64,
    pub olt_metro_capacity_gbps: f64,
    pub afdc_server_count: u32,
    pub mfdc_server_count_max: u32,
    pub wavelength_capacity_gbps: f64,
    pub core_router_port_w: f64,
    pub transponder_w: f64,
    pub edfa_w: f64,
    pub regenerator_w: f64,
    pub optical_switch_w: f64,
    pub edfa_span_km: f64,
    pub regen_reach_km: f64,
    pub server_w: f64,
    pub router_port_bitrate_gbps: f64,
    /// Metro edge-router port power. Defaults to the fog router port figure;
    /// a configuration default, not a published value.
    pub metro_edge_port_w: f64,
    pub dc_power_mode: DcPowerMode,
    /// CDC serving capacity in Gbps; `None` leaves the tier unbounded.
    pub cdc_capacity_gbps: Option<f64>,
}

impl Default for PowerParams {
    fn default() -> Self {
        Self {
            cloud_router_port_w: 30.0,
            fog_router_port_w: 13.0,
            cloud_metro_switch_w: 470.0,
            access_fog_switch_w: 210.0,
            metro_eth_switch_w: 470.0,
            olt_w: 904.0,
            switch_bitrate_gbps: 600.0,
            access_switch_bitrate_gbps: 240.0,
            server_capacity_gbps: 1.8,
            pue_c: 1.1,
            pue_mf: 1.1,
            pue_af: 1.1,
            net_to_compute_ratio: 1.3,
            pue_n: 1.5,
            olt_afdc_capacity_gbps: 160.0,
            olt_metro_capacity_gbps: 160.0,
            afdc_server_count: 88,
            mfdc_server_count_max: 5000,
            wavelength_capacity_gbps: 40.0,
            core_router_port_w: 1000.0,
            transponder_w: 73.0,
            edfa_w: 8.0,
            regenerator_w: 334.0,
            optical_switch_w: 85.0,
            edfa_span_km: 80.0,
            regen_reach_km: 2500.0,
            server_w: 300.0,
            router_port_bitrate_gbps: 40.0,
            metro_edge_port_w: 13.0,
            dc_power_mode: DcPowerMode::Detailed,
            cdc_capacity_gbps: None,
        }
    }
}

impl PowerParams {
    pub fn validate(&self) -> Result<(), PowerError> {
        let non_negative = [
            ("cloud_router_port_w", self.cloud_router_port_w),
            ("fog_router_port_w", self.fog_router_port_w),
            ("cloud_metro_switch_w", self.cloud_metro_switch_w),
            ("access_fog_switch_w", self.access_fog_switch_w),
            ("metro_eth_switch_w", self.metro_eth_switch_w),
            ("olt_w", self.olt_w),
            ("core_router_port_w", self.core_router_port_w),
            ("transponder_w", self.transponder_w),
            ("edfa_w", self.edfa_w),
            ("regenerator_w", self.regenerator_w),
            ("optical_switch_w", self.optical_switch_w),
            ("server_w", self.server_w),
            ("metro_edge_port_w", self.metro_edge_port_w),
        ];
        for (name, value) in non_negative {
            if value < 0.0 || !value.is_finite() {
                return Err(PowerError::Negative { name, value });
            }
        }
        let positive = [
            ("switch_bitrate_gbps", self.switch_bitrate_gbps),
            (
                "access_switch_bitrate_gbps",
                self.access_switch_bitrate_gbps,
            ),
            ("server_capacity_gbps", self.server_capacity_gbps),
            ("olt_afdc_capacity_gbps", self.olt_afdc_capacity_gbps),
            ("olt_metro_capacity_gbps", self.olt_metro_capacity_gbps),
            ("wavelength_capacity_gbps", self.wavelength_capacity_gbps),
            ("edfa_span_km", self.edfa_span_km),
            ("regen_reach_km", self.regen_reach_km),
            (
                "router_port_bitrate_gbps",
                self.router_port_bitrate_gbps,
            ),
            ("net_to_compute_ratio", self.net_to_compute_ratio),
        ];
        for (name, value) in positive {
            if value <= 0.0 || !value.is_finite() {
                return Err(PowerError::NonPositive { name, value });
            }
        }
        if let Some(cap) = self.cdc_capacity_gbps {
            if cap <= 0.0 || !cap.is_finite() {
                return Err(PowerError::NonPositive {
                    name: "cdc_capacity_gbps",
                    value: cap,
                });
            }
        }
        for (name, pue) in [
            ("pue_c", self.pue_c),
            ("pue_mf", self.pue_mf),
            ("pue_af", self.pue_af),
            ("pue_n", self.pue_n),
        ] {
            if !(1.0..=3.0).contains(&pue) {
                return Err(PowerError::PueOutOfRange { name, value: pue });
            }
        }
        Ok(())
    }

    pub fn pue_of(&self, tier: DcTier) -> f64 {
        match tier {
            DcTier::Cdc => self.pue_c,
            DcTier::Mfdc => self.pue_mf,
            DcTier::Afdc => self.pue_af,
        }
    }

    /// Maximum Gbps an access-fog data centre can serve.
    pub fn afdc_capacity_gbps(&self) -> f64 {
        self.afdc_server_count as f64 * self.server_capacity_gbps
    }

    /// Maximum Gbps a metro-fog data centre can serve.
    pub fn mfdc_capacity_gbps(&self) -> f64 {
        self.mfdc_server_count_max as f64 * self.server_capacity_gbps
    }

    /// Facility energy per served Gbps-hour at an access-fog site counting
    /// servers only, in kWh/Gbps. This is the load-proportional share of AFDC
    /// power that solar and battery output may cover; the ceiling-rounding
    /// remainder stays on the grid.
    pub fn afdc_solar_coverable_kwh_per_gbps(&self) -> f64 {
        self.pue_af * self.server_w / (self.server_capacity_gbps * 1000.0)
    }

    /// Equipment chain power of one wavelength riding the given physical
    /// route, in W (before the networking PUE): two core router ports, two
    /// transponders, one fibre's amplifier chain per hop, and regenerators
    /// per reach interval of the total route length.
    pub fn wavelength_chain_w(&self, path: &PhysicalPath, topo: &CoreTopology) -> f64 {
        let mut edfa_count = 0u64;
        for &link in &path.hop_links {
            let km = topo.links()[link.0].distance_km;
            edfa_count += num::floor_units(km, self.edfa_span_km) + 1;
        }
        let regens = num::floor_units(path.total_km, self.regen_reach_km);
        2.0 * self.core_router_port_w
            + 2.0 * self.transponder_w
            + edfa_count as f64 * self.edfa_w
            + regens as f64 * self.regenerator_w
    }
}

/// Wavelengths needed for `gbps` of traffic on one lightpath.
pub fn wavelengths_for(gbps: f64, params: &PowerParams) -> u64 {
    num::ceil_units(gbps, params.wavelength_capacity_gbps)
}

/// Core IP-over-WDM power for a virtual traffic matrix, in W. Each node pair
/// gets `ceil(traffic / wavelength capacity)` lightpaths; the constant
/// optical-switch floor (one per core node) is always present. The result is
/// scaled by the networking PUE.
pub fn core_power(
    topo: &CoreTopology,
    virtual_traffic_gbps: &BTreeMap<(NodeId, NodeId), f64>,
    params: &PowerParams,
) -> Result<f64, PowerError> {
    let mut traffic_w = 0.0;
    for (&(src, dst), &gbps) in virtual_traffic_gbps {
        if gbps < 0.0 {
            return Err(PowerError::NegativeTraffic { src, dst, gbps });
        }
        if src == dst || gbps == 0.0 {
            continue;
        }
        let path = shortest_physical_path(topo, src, dst)?;
        let w = wavelengths_for(gbps, params);
        traffic_w += w as f64 * params.wavelength_chain_w(&path, topo);
    }
    let floor_w = topo.node_count() as f64 * params.optical_switch_w;
    Ok(params.pue_n * (traffic_w + floor_w))
}

/// Metro power for per-node gateway loads, in W: edge-router ports and metro
/// ethernet switches, ceiling-counted per node, scaled by the networking PUE.
pub fn metro_power(loads_gbps: &[f64], params: &PowerParams) -> Result<f64, PowerError> {
    let mut total = 0.0;
    for &load in loads_gbps {
        if load < 0.0 {
            return Err(PowerError::NegativeLoad(load));
        }
        let ports = num::ceil_units(load, params.router_port_bitrate_gbps);
        let switches = num::ceil_units(load, params.switch_bitrate_gbps);
        total += ports as f64 * params.metro_edge_port_w
            + switches as f64 * params.metro_eth_switch_w;
    }
    Ok(params.pue_n * total)
}

/// Access (PON head-end) power for per-group OLT loads, in W. Active OLT
/// chassis are counted against the OLT link capacity (the AFDC-side figure;
/// both directions default to the same value).
pub fn access_power(olt_loads_gbps: &[f64], params: &PowerParams) -> Result<f64, PowerError> {
    let cap_total = params.olt_afdc_capacity_gbps + params.olt_metro_capacity_gbps;
    let mut total = 0.0;
    for &load in olt_loads_gbps {
        if load < 0.0 {
            return Err(PowerError::NegativeLoad(load));
        }
        if load > cap_total * (1.0 + num::REL_TOL) {
            return Err(PowerError::OltOverload {
                load,
                cap: cap_total,
            });
        }
        total += access_power_unchecked(load, params);
    }
    Ok(total)
}

fn access_power_unchecked(load: f64, params: &PowerParams) -> f64 {
    let count = num::ceil_units(load, params.olt_afdc_capacity_gbps);
    params.pue_n * count as f64 * params.olt_w
}

/// Facility power of one data centre serving `load_gbps`, in W, including
/// the tier's PUE overhead. Errors if the load is beyond the tier's serving
/// capacity.
pub fn dc_power(tier: DcTier, load_gbps: f64, params: &PowerParams) -> Result<f64, PowerError> {
    if load_gbps < 0.0 {
        return Err(PowerError::NegativeLoad(load_gbps));
    }
    let cap = match tier {
        DcTier::Afdc => Some(params.afdc_capacity_gbps()),
        DcTier::Mfdc => Some(params.mfdc_capacity_gbps()),
        DcTier::Cdc => params.cdc_capacity_gbps,
    };
    if let Some(cap) = cap {
        if load_gbps > cap * (1.0 + num::REL_TOL) {
            return Err(PowerError::TierOverCapacity {
                tier: tier.name(),
                load: load_gbps,
                cap,
            });
        }
    }
    Ok(dc_power_unchecked(tier, load_gbps, params))
}

/// The power formula without the capacity precondition; plan evaluation uses
/// this so over-capacity plans still get an honest power figure (the verifier
/// reports the violation separately).
pub(crate) fn dc_power_unchecked(tier: DcTier, load_gbps: f64, params: &PowerParams) -> f64 {
    if load_gbps <= 0.0 {
        return 0.0;
    }
    let servers = num::ceil_units(load_gbps, params.server_capacity_gbps) as f64;
    let compute_w = servers * params.server_w;
    let it_w = match params.dc_power_mode {
        DcPowerMode::Detailed => {
            let (switch_w, switch_bitrate, port_w) = match tier {
                DcTier::Cdc => (
                    params.cloud_metro_switch_w,
                    params.switch_bitrate_gbps,
                    params.cloud_router_port_w,
                ),
                DcTier::Mfdc => (
                    params.cloud_metro_switch_w,
                    params.switch_bitrate_gbps,
                    params.fog_router_port_w,
                ),
                DcTier::Afdc => (
                    params.access_fog_switch_w,
                    params.access_switch_bitrate_gbps,
                    params.fog_router_port_w,
                ),
            };
            let switches = num::ceil_units(load_gbps, switch_bitrate) as f64;
            let ports = num::ceil_units(load_gbps, params.router_port_bitrate_gbps) as f64;
            compute_w + switches * switch_w + ports * port_w
        }
        DcPowerMode::Ratio => compute_w * params.net_to_compute_ratio,
    };
    params.pue_of(tier) * it_w
}

/// One hour of the power picture, all in W.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HourlyPower {
    /// Includes the constant optical-switch floor.
    pub core_w: f64,
    pub metro_w: f64,
    pub access_w: f64,
    pub dc_cdc_w: f64,
    pub dc_mfdc_w: f64,
    pub dc_afdc_w: f64,
    pub brown_w: f64,
    pub renewable_w: f64,
}

impl HourlyPower {
    pub fn transport_w(&self) -> f64 {
        self.core_w + self.metro_w + self.access_w
    }

    pub fn total_w(&self) -> f64 {
        self.transport_w() + self.dc_cdc_w + self.dc_mfdc_w + self.dc_afdc_w
    }
}

/// A plan's full power picture over the day.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyBreakdown {
    pub hours: Vec<HourlyPower>,
    /// Constant optical-switch floor, in W, already contained in each hour's
    /// `core_w` and `brown_w`.
    pub idle_floor_w: f64,
}

impl DailyBreakdown {
    fn sum_kwh(&self, f: impl Fn(&HourlyPower) -> f64) -> f64 {
        self.hours.iter().map(f).sum::<f64>() / 1000.0
    }

    pub fn total_kwh(&self) -> f64 {
        self.sum_kwh(HourlyPower::total_w)
    }

    pub fn brown_kwh(&self) -> f64 {
        self.sum_kwh(|h| h.brown_w)
    }

    pub fn renewable_kwh(&self) -> f64 {
        self.sum_kwh(|h| h.renewable_w)
    }

    /// Transport (core + metro + access) energy; all transport power draws
    /// brown energy in every scenario.
    pub fn transport_kwh(&self) -> f64 {
        self.sum_kwh(HourlyPower::transport_w)
    }

    /// Daily energy of the constant optical-switch floor.
    pub fn idle_floor_kwh(&self) -> f64 {
        self.idle_floor_w * HOURS as f64 / 1000.0
    }

    /// Brown energy under the traffic-attributable convention (constant
    /// optical-switch floor excluded); this is the optimizer's objective.
    pub fn traffic_brown_kwh(&self) -> f64 {
        self.brown_kwh() - self.idle_floor_kwh()
    }

    /// Transport energy under the traffic-attributable convention.
    pub fn traffic_transport_kwh(&self) -> f64 {
        self.transport_kwh() - self.idle_floor_kwh()
    }
}

/// Evaluates a plan's hourly power under the given scenario. Sums core,
/// metro, access and per-tier data-centre power, splitting brown from
/// renewable according to the scenario's energy sourcing. Core power uses
/// the plan's own wavelength counts; the verifier checks them against the
/// traffic separately.
pub fn evaluate_plan(
    plan: &PlacementPlan,
    topo: &CoreTopology,
    params: &PowerParams,
    scenario: &ScenarioConfig,
) -> Result<DailyBreakdown, PowerError> {
    if plan.group_count() != topo.group_count() {
        return Err(PowerError::PlanShape("group count does not match topology"));
    }
    let placement = &scenario.placement;
    if plan.cdc_count() != placement.cdc_nodes.len() {
        return Err(PowerError::PlanShape("cdc count does not match placement"));
    }
    let params = scenario.effective_params(params);

    // Chain power per core pair, cached across hours.
    let mut chain_cache: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    for flow in &plan.core_flows {
        if !topo.contains_node(flow.src) || !topo.contains_node(flow.dst) {
            return Err(PowerError::PlanShape("core flow references unknown node"));
        }
        if flow.hour >= HOURS {
            return Err(PowerError::PlanShape("core flow hour out of range"));
        }
        if let alloc::collections::btree_map::Entry::Vacant(e) =
            chain_cache.entry((flow.src, flow.dst))
        {
            let path = shortest_physical_path(topo, flow.src, flow.dst)?;
            e.insert(params.wavelength_chain_w(&path, topo));
        }
    }

    let idle_floor_w = params.pue_n * topo.node_count() as f64 * params.optical_switch_w;
    let mut hours = Vec::with_capacity(HOURS);
    for hour in 0..HOURS {
        let mut hp = HourlyPower {
            core_w: idle_floor_w,
            ..Default::default()
        };

        for flow in plan.core_flows.iter().filter(|f| f.hour == hour) {
            if flow.src == flow.dst {
                continue;
            }
            let chain = chain_cache[&(flow.src, flow.dst)];
            hp.core_w += params.pue_n * flow.wavelengths as f64 * chain;
        }

        // Metro gateway load: everything served from above the access network
        // (MFDC and CDC); AFDC traffic stays behind the OLT.
        let mut metro_loads = alloc::vec![0.0; topo.node_count()];
        for g in topo.groups() {
            metro_loads[topo.home_of(g).0] += plan.mfdc(g, hour) + plan.cdc_total(g, hour);
        }
        hp.metro_w = metro_power(&metro_loads, &params)?;

        for g in topo.groups() {
            hp.access_w += access_power_unchecked(plan.served(g, hour), &params);
        }

        for (c, _) in placement.cdc_nodes.iter().enumerate() {
            let load: f64 = topo.groups().map(|g| plan.cdc(g, c, hour)).sum();
            hp.dc_cdc_w += dc_power_unchecked(DcTier::Cdc, load, &params);
        }
        for &m in &placement.mfdc_nodes {
            let load: f64 = topo.groups_at(m).map(|g| plan.mfdc(g, hour)).sum();
            hp.dc_mfdc_w += dc_power_unchecked(DcTier::Mfdc, load, &params);
        }
        let mut afdc_covered_w = 0.0;
        for g in topo.groups() {
            let dc_w = dc_power_unchecked(DcTier::Afdc, plan.afdc(g, hour), &params);
            hp.dc_afdc_w += dc_w;
            if let Some(solar) = &plan.solar {
                let idx = g.0 * HOURS + hour;
                let covered =
                    1000.0 * (solar.serve[idx] + solar.discharge_delivered[idx]);
                afdc_covered_w += num::min(covered, dc_w);
            }
        }

        let mut renewable_w = afdc_covered_w;
        if scenario.cdc_source == TierSource::Renewable {
            renewable_w += hp.dc_cdc_w;
        }
        if scenario.mfdc_source == TierSource::Renewable {
            renewable_w += hp.dc_mfdc_w;
        }
        if matches!(scenario.afdc_source, AfdcSource::Renewable) {
            renewable_w += hp.dc_afdc_w;
        }
        hp.renewable_w = renewable_w;
        hp.brown_w = hp.total_w() - renewable_w;
        hours.push(hp);
    }

    Ok(DailyBreakdown {
        hours,
        idle_floor_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{CoreTopology, NodeId};
    use alloc::collections::BTreeMap;
    use approx::assert_abs_diff_eq;

    fn two_nodes_800km() -> CoreTopology {
        CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap()
    }

    #[test]
    fn core_idle_floor_only() {
        let topo = two_nodes_800km();
        let params = PowerParams::default();
        let traffic = BTreeMap::new();
        let w = core_power(&topo, &traffic, &params).unwrap();
        assert_abs_diff_eq!(w, 2.0 * 85.0 * 1.5, epsilon = 1e-12);
    }

    #[test]
    fn core_golden_single_pair() {
        // One pair, 30 Gbps, adjacent nodes 800 km, defaults:
        // (2*1000 + 2*73 + (floor(800/80)+1)*8 + 0*334 + 2*85) * 1.5 = 3606 W.
        let topo = two_nodes_800km();
        let params = PowerParams::default();
        let mut traffic = BTreeMap::new();
        traffic.insert((NodeId(0), NodeId(1)), 30.0);
        let w = core_power(&topo, &traffic, &params).unwrap();
        assert_eq!(w, 3606.0);
    }

    #[test]
    fn core_per_term_accounting() {
        // Check each chain term in isolation against the same instance.
        let topo = two_nodes_800km();
        let mut params = PowerParams::default();
        params.optical_switch_w = 0.0;
        let path = shortest_physical_path(&topo, NodeId(0), NodeId(1)).unwrap();

        let mut only_ports = params.clone();
        only_ports.transponder_w = 0.0;
        only_ports.edfa_w = 0.0;
        only_ports.regenerator_w = 0.0;
        assert_eq!(only_ports.wavelength_chain_w(&path, &topo), 2000.0);

        let mut only_tx = params.clone();
        only_tx.core_router_port_w = 0.0;
        only_tx.edfa_w = 0.0;
        assert_eq!(only_tx.wavelength_chain_w(&path, &topo), 146.0);

        let mut only_edfa = params.clone();
        only_edfa.core_router_port_w = 0.0;
        only_edfa.transponder_w = 0.0;
        assert_eq!(only_edfa.wavelength_chain_w(&path, &topo), 88.0);

        // An 800 km route needs no regeneration at 2500 km reach; shrink the
        // reach and one regenerator per wavelength appears.
        params.regen_reach_km = 500.0;
        let full = params.wavelength_chain_w(&path, &topo);
        assert_eq!(full, 2000.0 + 146.0 + 88.0 + 334.0);
    }

    #[test]
    fn wavelength_ceiling_boundary() {
        let params = PowerParams::default();
        assert_eq!(wavelengths_for(41.0, &params), 2);
        assert_eq!(wavelengths_for(40.0, &params), 1);
        assert_eq!(wavelengths_for(0.0, &params), 0);
    }

    #[test]
    fn metro_golden_values() {
        let params = PowerParams::default();
        assert_eq!(metro_power(&[0.0], &params).unwrap(), 0.0);
        // 600 Gbps: 1 switch (470) + 15 ports (15*13 = 195) = 665; x1.5.
        assert_eq!(metro_power(&[600.0], &params).unwrap(), 997.5);
        // 601 Gbps: one more switch.
        let w = metro_power(&[601.0], &params).unwrap();
        assert_eq!(w, 1.5 * (2.0 * 470.0 + 16.0 * 13.0));
    }

    #[test]
    fn access_golden_values() {
        let params = PowerParams::default();
        // 200 Gbps -> 2 OLTs -> 1808 W, x1.5 = 2712 W.
        assert_eq!(access_power(&[200.0], &params).unwrap(), 2712.0);
        assert_eq!(access_power(&[0.0], &params).unwrap(), 0.0);
        // 160 Gbps is exactly one OLT.
        assert_eq!(access_power(&[160.0], &params).unwrap(), 1.5 * 904.0);
        let err = access_power(&[321.0], &params).unwrap_err();
        assert!(matches!(err, PowerError::OltOverload { .. }));
    }

    #[test]
    fn dc_server_counting() {
        let params = PowerParams::default();
        // 158.4 Gbps at 1.8 Gbps per server is exactly the 88-server AFDC.
        let w = dc_power(DcTier::Afdc, 158.4, &params).unwrap();
        let expected = 1.1 * (88.0 * 300.0 + 1.0 * 210.0 + 4.0 * 13.0);
        assert_abs_diff_eq!(w, expected, epsilon = 1e-9);

        let err = dc_power(DcTier::Afdc, 158.5, &params).unwrap_err();
        assert!(matches!(err, PowerError::TierOverCapacity { tier: "afdc", .. }));

        assert_eq!(dc_power(DcTier::Cdc, 0.0, &params).unwrap(), 0.0);
        assert_eq!(dc_power(DcTier::Mfdc, 0.0, &params).unwrap(), 0.0);
        assert_eq!(dc_power(DcTier::Afdc, 0.0, &params).unwrap(), 0.0);
    }

    #[test]
    fn dc_ratio_mode() {
        let mut params = PowerParams::default();
        params.dc_power_mode = DcPowerMode::Ratio;
        let w = dc_power(DcTier::Cdc, 18.0, &params).unwrap();
        // 10 servers * 300 W * 1.3 ratio * 1.1 PUE.
        assert_abs_diff_eq!(w, 10.0 * 300.0 * 1.3 * 1.1, epsilon = 1e-9);
    }

    #[test]
    fn pue_scales_dc_power_linearly() {
        let mut params = PowerParams::default();
        params.pue_af = 1.2;
        let base = dc_power(DcTier::Afdc, 100.0, &params).unwrap();
        params.pue_af = 2.4;
        let doubled = dc_power(DcTier::Afdc, 100.0, &params).unwrap();
        assert_abs_diff_eq!(doubled, 2.0 * base, epsilon = 1e-9);
    }

    #[test]
    fn power_is_monotone_and_stepwise() {
        let params = PowerParams::default();
        let mut last = 0.0;
        for i in 0..=320 {
            let load = i as f64 * 0.5;
            let w = dc_power_unchecked(DcTier::Mfdc, load, &params);
            assert!(w >= last, "dc power must be non-decreasing in load");
            last = w;
        }
        // Within one server/switch/port step the power is flat.
        let a = dc_power_unchecked(DcTier::Cdc, 1.0, &params);
        let b = dc_power_unchecked(DcTier::Cdc, 1.7, &params);
        assert_eq!(a, b);
    }

    #[test]
    fn evaluate_zero_plan_is_floor_only() {
        let topo = two_nodes_800km();
        let params = PowerParams::default();
        let scenario = crate::scenario::ScenarioConfig::all_brown(
            crate::topology::SitePlacement::default_for(&topo, 1),
        );
        let plan = PlacementPlan::zero(topo.group_count(), 1);
        let out = evaluate_plan(&plan, &topo, &params, &scenario).unwrap();
        assert_abs_diff_eq!(out.total_kwh(), out.idle_floor_kwh(), epsilon = 1e-12);
        assert_abs_diff_eq!(out.traffic_brown_kwh(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn evaluate_local_afdc_service_adds_no_core_power() {
        use crate::topology::GroupId;
        let topo = two_nodes_800km();
        let params = PowerParams::default();
        let placement = crate::topology::SitePlacement::new(
            alloc::vec![NodeId(0)],
            alloc::vec![],
            alloc::vec![GroupId(0), GroupId(1)],
        );
        let scenario = crate::scenario::ScenarioConfig::all_brown(placement);
        let mut plan = PlacementPlan::zero(topo.group_count(), 1);
        for h in 0..HOURS {
            plan.set_afdc(GroupId(1), h, 90.0);
        }
        let out = evaluate_plan(&plan, &topo, &params, &scenario).unwrap();
        for hp in &out.hours {
            assert_abs_diff_eq!(hp.core_w, out.idle_floor_w, epsilon = 1e-12);
            assert_eq!(hp.metro_w, 0.0);
            assert!(hp.dc_afdc_w > 0.0);
        }
    }

    #[test]
    fn renewable_tiers_have_no_brown_dc_power() {
        use crate::scenario::TierSource;
        use crate::topology::GroupId;
        let topo = two_nodes_800km();
        let params = PowerParams::default();
        let placement = crate::topology::SitePlacement::new(
            alloc::vec![NodeId(0)],
            alloc::vec![NodeId(1)],
            alloc::vec![],
        );
        let mut scenario = crate::scenario::ScenarioConfig::all_brown(placement);
        scenario.cdc_source = TierSource::Renewable;
        scenario.mfdc_source = TierSource::Renewable;
        let mut plan = PlacementPlan::zero(topo.group_count(), 1);
        let mut flows = alloc::vec::Vec::new();
        for h in 0..HOURS {
            plan.set_cdc(GroupId(1), 0, h, 50.0);
            plan.set_mfdc(GroupId(1), h, 30.0);
            flows.push(crate::plan::CoreFlow {
                hour: h,
                src: NodeId(0),
                dst: NodeId(1),
                gbps: 50.0,
                wavelengths: 2,
            });
        }
        plan.core_flows = flows;
        let out = evaluate_plan(&plan, &topo, &params, &scenario).unwrap();
        for hp in &out.hours {
            // All DC power is renewable; transport stays brown.
            assert_abs_diff_eq!(hp.renewable_w, hp.dc_cdc_w + hp.dc_mfdc_w, epsilon = 1e-9);
            assert_abs_diff_eq!(hp.brown_w, hp.transport_w(), epsilon = 1e-9);
            assert_abs_diff_eq!(
                hp.brown_w + hp.renewable_w,
                hp.total_w(),
                epsilon = 1e-9
            );
        }
    }
}
