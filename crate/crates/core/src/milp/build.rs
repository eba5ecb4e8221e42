//! Builds the brown-energy-minimizing MILP over the 24-hour horizon.
//!
//! Decision variables per hour: Gbps served to each access group from its
//! AFDC, its local MFDC and every CDC; integer lightpath, OLT, metro and
//! data-centre equipment counts; and, at solar sites, the solar split
//! (serve / charge / curtail), battery flows and state of charge.
//!
//! The objective is total daily brown energy in kWh under the
//! traffic-attributable convention: the constant optical-switch floor is
//! excluded (it cannot be influenced by any decision), everything else is in.
//!
//! Solar and battery output at an AFDC may cover the server-proportional
//! share of the site's facility power (`pue_af * server_w / server_capacity`
//! per Gbps served). The ceiling-rounding remainder stays brown. Capping
//! coverage by served load instead of by counted devices keeps every optimum
//! free of idle-server padding, so device counts always land on their
//! ceiling minima.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::demand::{DemandError, DemandProfile};
use crate::energy::{generation_kwh, HOURS};
use crate::num;
use crate::power::{PowerError, PowerParams, DcPowerMode, DcTier};
use crate::scenario::{AfdcSource, ScenarioConfig, ScenarioError, TierSource};
use crate::topology::{shortest_physical_path, CoreTopology, TopologyError};

use super::model::{MilpModel, Sense, VarId, VarKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Demand(#[from] DemandError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Builds the optimization model for one scenario.
pub fn build_model(
    topo: &CoreTopology,
    demand: &DemandProfile,
    params: &PowerParams,
    scenario: &ScenarioConfig,
) -> Result<MilpModel, BuildError> {
    demand.check_topology(topo)?;
    scenario.validate(topo, params)?;
    let p = scenario.effective_params(params);
    let placement = &scenario.placement;

    let mut m = MilpModel::new("GREENVOD");
    m.layout.group_count = topo.group_count();
    m.layout.cdc_nodes = placement.cdc_nodes.clone();

    let cdc_count = placement.cdc_nodes.len();
    let afdc_cap = num::min(p.afdc_capacity_gbps(), p.olt_afdc_capacity_gbps);
    let solar = scenario.solar();
    let esd = scenario.esd();
    let gen: Vec<f64> = match solar {
        Some((array, profile)) => generation_kwh(profile, array).to_vec(),
        None => vec![0.0; HOURS],
    };
    m.layout.generation_kwh = gen.clone();
    m.layout.eta_discharge = esd.map(|e| e.eta_discharge).unwrap_or(1.0);
    m.layout.initial_soc_kwh = if esd.is_some() {
        scenario.esd_initial_soc_kwh
    } else {
        0.0
    };

    // Objective coefficients, in kW per device (W / 1000).
    let kw = |w: f64| w / 1000.0;
    let dc_obj = |tier: DcTier, brown: bool| -> (f64, f64, f64) {
        if !brown {
            return (0.0, 0.0, 0.0);
        }
        let pue = p.pue_of(tier);
        let (switch_w, port_w) = match tier {
            DcTier::Cdc => (p.cloud_metro_switch_w, p.cloud_router_port_w),
            DcTier::Mfdc => (p.cloud_metro_switch_w, p.fog_router_port_w),
            DcTier::Afdc => (p.access_fog_switch_w, p.fog_router_port_w),
        };
        match p.dc_power_mode {
            DcPowerMode::Detailed => (
                kw(pue * p.server_w),
                kw(pue * switch_w),
                kw(pue * port_w),
            ),
            DcPowerMode::Ratio => (kw(pue * p.server_w * p.net_to_compute_ratio), 0.0, 0.0),
        }
    };
    let cdc_brown = scenario.cdc_source == TierSource::Brown;
    let mfdc_brown = scenario.mfdc_source == TierSource::Brown;
    // Solar sites pay the brown AFDC rate and get credited for covered load.
    let afdc_brown = !matches!(scenario.afdc_source, AfdcSource::Renewable);
    let (cdc_srv_obj, cdc_sw_obj, cdc_pt_obj) = dc_obj(DcTier::Cdc, cdc_brown);
    let (mf_srv_obj, mf_sw_obj, mf_pt_obj) = dc_obj(DcTier::Mfdc, mfdc_brown);
    let (af_srv_obj, af_sw_obj, af_pt_obj) = dc_obj(DcTier::Afdc, afdc_brown);

    // --- Serving variables -------------------------------------------------
    for g in topo.groups() {
        if placement.has_afdc(g) {
            for h in 0..HOURS {
                let ub = num::min(afdc_cap, demand.get(g, h));
                let id = m.add_var(
                    format!("xaf_g{}_h{}", g.0, h),
                    VarKind::Continuous,
                    0.0,
                    ub,
                    0.0,
                );
                m.layout.x_afdc.insert((g.0, h), id);
            }
        }
    }
    for g in topo.groups() {
        if placement.has_mfdc(topo.home_of(g)) {
            for h in 0..HOURS {
                let ub = num::min(
                    num::min(p.olt_metro_capacity_gbps, p.mfdc_capacity_gbps()),
                    demand.get(g, h),
                );
                let id = m.add_var(
                    format!("xmf_g{}_h{}", g.0, h),
                    VarKind::Continuous,
                    0.0,
                    ub,
                    0.0,
                );
                m.layout.x_mfdc.insert((g.0, h), id);
            }
        }
    }
    for g in topo.groups() {
        for c in 0..cdc_count {
            for h in 0..HOURS {
                let mut ub = num::min(p.olt_metro_capacity_gbps, demand.get(g, h));
                if let Some(cap) = p.cdc_capacity_gbps {
                    ub = num::min(ub, cap);
                }
                let id = m.add_var(
                    format!("xcdc_g{}_c{}_h{}", g.0, c, h),
                    VarKind::Continuous,
                    0.0,
                    ub,
                    0.0,
                );
                m.layout.x_cdc.insert((g.0, c, h), id);
            }
        }
    }

    // --- Solar and battery variables ---------------------------------------
    if solar.is_some() {
        for &g in &placement.afdc_groups {
            for h in 0..HOURS {
                let ss = m.add_var(
                    format!("ssrv_g{}_h{}", g.0, h),
                    VarKind::Continuous,
                    0.0,
                    gen[h],
                    -1.0,
                );
                m.layout.solar_serve.insert((g.0, h), ss);
                if let Some(e) = esd {
                    let sc_ub = num::min(gen[h], e.max_charge_kwh_per_hour);
                    let sc = m.add_var(
                        format!("schg_g{}_h{}", g.0, h),
                        VarKind::Continuous,
                        0.0,
                        sc_ub,
                        0.0,
                    );
                    m.layout.solar_charge.insert((g.0, h), sc);
                }
                let scu = m.add_var(
                    format!("scur_g{}_h{}", g.0, h),
                    VarKind::Continuous,
                    0.0,
                    gen[h],
                    0.0,
                );
                m.layout.solar_curtail.insert((g.0, h), scu);
                if let Some(e) = esd {
                    let drawn_ub = num::min(e.e_max_kwh, e.max_discharge_kwh_per_hour);
                    let ed = m.add_var(
                        format!("edrn_g{}_h{}", g.0, h),
                        VarKind::Continuous,
                        0.0,
                        drawn_ub,
                        -e.eta_discharge,
                    );
                    m.layout.esd_drawn.insert((g.0, h), ed);
                    let soc = m.add_var(
                        format!("soc_g{}_h{}", g.0, h),
                        VarKind::Continuous,
                        0.0,
                        e.e_max_kwh,
                        0.0,
                    );
                    m.layout.esd_soc.insert((g.0, h), soc);
                }
            }
        }
    }

    // --- Integer equipment counts ------------------------------------------
    for (&(src, dst), &(max_gbps, _)) in &pair_caps(topo, demand, placement, &p) {
        for h in 0..HOURS {
            let ub = num::ceil_units(max_gbps[h], p.wavelength_capacity_gbps);
            if ub == 0 {
                continue;
            }
            let path = shortest_physical_path(
                topo,
                crate::topology::NodeId(src),
                crate::topology::NodeId(dst),
            )?;
            let chain = p.wavelength_chain_w(&path, topo);
            let id = m.add_var(
                format!("w_s{}_d{}_h{}", src, dst, h),
                VarKind::Integer,
                0.0,
                ub as f64,
                kw(p.pue_n * chain),
            );
            m.layout.wavelengths.insert((src, dst, h), id);
        }
    }

    for n in topo.nodes() {
        if topo.groups_at(n).next().is_none() {
            continue;
        }
        for h in 0..HOURS {
            let upstream_max: f64 = topo
                .groups_at(n)
                .map(|g| num::min(demand.get(g, h), p.olt_metro_capacity_gbps))
                .sum();
            let port_ub = num::ceil_units(upstream_max, p.router_port_bitrate_gbps);
            let sw_ub = num::ceil_units(upstream_max, p.switch_bitrate_gbps);
            if port_ub > 0 {
                let id = m.add_var(
                    format!("mport_n{}_h{}", n.0, h),
                    VarKind::Integer,
                    0.0,
                    port_ub as f64,
                    kw(p.pue_n * p.metro_edge_port_w),
                );
                m.layout.metro_ports.insert((n.0, h), id);
                let id = m.add_var(
                    format!("msw_n{}_h{}", n.0, h),
                    VarKind::Integer,
                    0.0,
                    sw_ub as f64,
                    kw(p.pue_n * p.metro_eth_switch_w),
                );
                m.layout.metro_switches.insert((n.0, h), id);
            }
        }
    }

    for g in topo.groups() {
        for h in 0..HOURS {
            let ub = num::ceil_units(demand.get(g, h), p.olt_afdc_capacity_gbps);
            if ub == 0 {
                continue;
            }
            let id = m.add_var(
                format!("olt_g{}_h{}", g.0, h),
                VarKind::Integer,
                0.0,
                ub as f64,
                kw(p.pue_n * p.olt_w),
            );
            m.layout.olt_count.insert((g.0, h), id);
        }
    }

    let detailed = p.dc_power_mode == DcPowerMode::Detailed;
    for &g in &placement.afdc_groups {
        for h in 0..HOURS {
            if num::min(afdc_cap, demand.get(g, h)) <= 0.0 {
                continue;
            }
            let cap = num::min(afdc_cap, demand.get(g, h));
            let id = m.add_var(
                format!("nsaf_g{}_h{}", g.0, h),
                VarKind::Integer,
                0.0,
                num::ceil_units(cap, p.server_capacity_gbps) as f64,
                af_srv_obj,
            );
            m.layout.afdc_servers.insert((g.0, h), id);
            if detailed {
                let id = m.add_var(
                    format!("nwaf_g{}_h{}", g.0, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.access_switch_bitrate_gbps) as f64,
                    af_sw_obj,
                );
                m.layout.afdc_switches.insert((g.0, h), id);
                let id = m.add_var(
                    format!("npaf_g{}_h{}", g.0, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.router_port_bitrate_gbps) as f64,
                    af_pt_obj,
                );
                m.layout.afdc_ports.insert((g.0, h), id);
            }
        }
    }
    for &node in &placement.mfdc_nodes {
        for h in 0..HOURS {
            let max_load: f64 = topo
                .groups_at(node)
                .map(|g| num::min(demand.get(g, h), p.olt_metro_capacity_gbps))
                .sum();
            let cap = num::min(max_load, p.mfdc_capacity_gbps());
            if cap <= 0.0 {
                continue;
            }
            let id = m.add_var(
                format!("nsmf_n{}_h{}", node.0, h),
                VarKind::Integer,
                0.0,
                num::min(
                    num::ceil_units(cap, p.server_capacity_gbps) as f64,
                    p.mfdc_server_count_max as f64,
                ),
                mf_srv_obj,
            );
            m.layout.mfdc_servers.insert((node.0, h), id);
            if detailed {
                let id = m.add_var(
                    format!("nwmf_n{}_h{}", node.0, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.switch_bitrate_gbps) as f64,
                    mf_sw_obj,
                );
                m.layout.mfdc_switches.insert((node.0, h), id);
                let id = m.add_var(
                    format!("npmf_n{}_h{}", node.0, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.router_port_bitrate_gbps) as f64,
                    mf_pt_obj,
                );
                m.layout.mfdc_ports.insert((node.0, h), id);
            }
        }
    }
    for c in 0..cdc_count {
        for h in 0..HOURS {
            let mut cap: f64 = topo
                .groups()
                .map(|g| num::min(demand.get(g, h), p.olt_metro_capacity_gbps))
                .sum();
            if let Some(c_cap) = p.cdc_capacity_gbps {
                cap = num::min(cap, c_cap);
            }
            if cap <= 0.0 {
                continue;
            }
            let id = m.add_var(
                format!("nscd_c{}_h{}", c, h),
                VarKind::Integer,
                0.0,
                num::ceil_units(cap, p.server_capacity_gbps) as f64,
                cdc_srv_obj,
            );
            m.layout.cdc_servers.insert((c, h), id);
            if detailed {
                let id = m.add_var(
                    format!("nwcd_c{}_h{}", c, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.switch_bitrate_gbps) as f64,
                    cdc_sw_obj,
                );
                m.layout.cdc_switches.insert((c, h), id);
                let id = m.add_var(
                    format!("npcd_c{}_h{}", c, h),
                    VarKind::Integer,
                    0.0,
                    num::ceil_units(cap, p.router_port_bitrate_gbps) as f64,
                    cdc_pt_obj,
                );
                m.layout.cdc_ports.insert((c, h), id);
            }
        }
    }

    // Charge/discharge exclusivity indicators, only where the sun shines.
    if esd.is_some() {
        for &g in &placement.afdc_groups {
            for h in 0..HOURS {
                if gen[h] > 0.0 {
                    let id = m.add_var(
                        format!("besd_g{}_h{}", g.0, h),
                        VarKind::Binary,
                        0.0,
                        1.0,
                        0.0,
                    );
                    m.layout.esd_mode.insert((g.0, h), id);
                }
            }
        }
    }

    // --- Constraints --------------------------------------------------------
    let serving_vars = |m: &MilpModel, g: usize, h: usize| -> Vec<VarId> {
        let mut v = Vec::new();
        if let Some(&id) = m.layout.x_afdc.get(&(g, h)) {
            v.push(id);
        }
        if let Some(&id) = m.layout.x_mfdc.get(&(g, h)) {
            v.push(id);
        }
        for c in 0..cdc_count {
            v.push(m.layout.x_cdc[&(g, c, h)]);
        }
        v
    };
    let upstream_vars = |m: &MilpModel, g: usize, h: usize| -> Vec<VarId> {
        let mut v = Vec::new();
        if let Some(&id) = m.layout.x_mfdc.get(&(g, h)) {
            v.push(id);
        }
        for c in 0..cdc_count {
            v.push(m.layout.x_cdc[&(g, c, h)]);
        }
        v
    };

    // Demand satisfaction, exactly.
    for g in topo.groups() {
        for h in 0..HOURS {
            let terms: Vec<(VarId, f64)> = serving_vars(&m, g.0, h)
                .into_iter()
                .map(|id| (id, 1.0))
                .collect();
            m.add_con(
                format!("dem_g{}_h{}", g.0, h),
                Sense::Eq,
                demand.get(g, h),
                terms,
            );
        }
    }

    // OLT chassis cover the group's entire served load.
    for g in topo.groups() {
        for h in 0..HOURS {
            if let Some(&oc) = m.layout.olt_count.get(&(g.0, h)) {
                let mut terms = vec![(oc, p.olt_afdc_capacity_gbps)];
                terms.extend(serving_vars(&m, g.0, h).into_iter().map(|id| (id, -1.0)));
                m.add_con(format!("oltc_g{}_h{}", g.0, h), Sense::Ge, 0.0, terms);
            }
        }
    }

    // The metro-facing OLT link caps everything served from above the access
    // network.
    for g in topo.groups() {
        for h in 0..HOURS {
            let ups = upstream_vars(&m, g.0, h);
            if ups.is_empty() {
                continue;
            }
            let terms: Vec<(VarId, f64)> = ups.into_iter().map(|id| (id, 1.0)).collect();
            m.add_con(
                format!("oltm_g{}_h{}", g.0, h),
                Sense::Le,
                p.olt_metro_capacity_gbps,
                terms,
            );
        }
    }

    // Equipment counts cover their loads (count * unit >= load).
    let cover = |m: &mut MilpModel,
                 name: String,
                 count: Option<VarId>,
                 unit: f64,
                 load: Vec<(VarId, f64)>| {
        if let Some(count) = count {
            let mut terms = vec![(count, unit)];
            terms.extend(load);
            m.add_con(name, Sense::Ge, 0.0, terms);
        }
    };

    for &g in &placement.afdc_groups {
        for h in 0..HOURS {
            let Some(&x) = m.layout.x_afdc.get(&(g.0, h)) else {
                continue;
            };
            let load = vec![(x, -1.0)];
            let srv = m.layout.afdc_servers.get(&(g.0, h)).copied();
            let sw = m.layout.afdc_switches.get(&(g.0, h)).copied();
            let pt = m.layout.afdc_ports.get(&(g.0, h)).copied();
            cover(
                &mut m,
                format!("afsrv_g{}_h{}", g.0, h),
                srv,
                p.server_capacity_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("afsw_g{}_h{}", g.0, h),
                sw,
                p.access_switch_bitrate_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("afpt_g{}_h{}", g.0, h),
                pt,
                p.router_port_bitrate_gbps,
                load,
            );
        }
    }

    for &node in &placement.mfdc_nodes {
        for h in 0..HOURS {
            let load: Vec<(VarId, f64)> = topo
                .groups_at(node)
                .filter_map(|g| m.layout.x_mfdc.get(&(g.0, h)).copied())
                .map(|id| (id, -1.0))
                .collect();
            if load.is_empty() {
                continue;
            }
            let srv = m.layout.mfdc_servers.get(&(node.0, h)).copied();
            let sw = m.layout.mfdc_switches.get(&(node.0, h)).copied();
            let pt = m.layout.mfdc_ports.get(&(node.0, h)).copied();
            cover(
                &mut m,
                format!("mfsrv_n{}_h{}", node.0, h),
                srv,
                p.server_capacity_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("mfsw_n{}_h{}", node.0, h),
                sw,
                p.switch_bitrate_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("mfpt_n{}_h{}", node.0, h),
                pt,
                p.router_port_bitrate_gbps,
                load,
            );
        }
    }

    for c in 0..cdc_count {
        for h in 0..HOURS {
            let load: Vec<(VarId, f64)> = topo
                .groups()
                .map(|g| (m.layout.x_cdc[&(g.0, c, h)], -1.0))
                .collect();
            let srv = m.layout.cdc_servers.get(&(c, h)).copied();
            let sw = m.layout.cdc_switches.get(&(c, h)).copied();
            let pt = m.layout.cdc_ports.get(&(c, h)).copied();
            cover(
                &mut m,
                format!("cdsrv_c{}_h{}", c, h),
                srv,
                p.server_capacity_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("cdsw_c{}_h{}", c, h),
                sw,
                p.switch_bitrate_gbps,
                load.clone(),
            );
            cover(
                &mut m,
                format!("cdpt_c{}_h{}", c, h),
                pt,
                p.router_port_bitrate_gbps,
                load.clone(),
            );
            if let Some(cap) = p.cdc_capacity_gbps {
                let terms: Vec<(VarId, f64)> =
                    load.into_iter().map(|(id, _)| (id, 1.0)).collect();
                m.add_con(format!("cdcap_c{}_h{}", c, h), Sense::Le, cap, terms);
            }
        }
    }

    // Lightpaths cover the CDC traffic converging on each destination node.
    let pairs: Vec<(usize, usize, usize)> = m.layout.wavelengths.keys().copied().collect();
    for (src, dst, h) in pairs {
        let w = m.layout.wavelengths[&(src, dst, h)];
        let Some(c) = m
            .layout
            .cdc_nodes
            .iter()
            .position(|n| n.0 == src)
        else {
            continue;
        };
        let mut terms = vec![(w, p.wavelength_capacity_gbps)];
        for g in topo.groups_at(crate::topology::NodeId(dst)) {
            terms.push((m.layout.x_cdc[&(g.0, c, h)], -1.0));
        }
        m.add_con(format!("wav_s{}_d{}_h{}", src, dst, h), Sense::Ge, 0.0, terms);
    }

    // Metro gateway equipment covers everything served from above.
    let metro_nodes: Vec<(usize, usize)> = m.layout.metro_ports.keys().copied().collect();
    for (n, h) in metro_nodes {
        let load: Vec<(VarId, f64)> = topo
            .groups_at(crate::topology::NodeId(n))
            .flat_map(|g| upstream_vars(&m, g.0, h))
            .map(|id| (id, -1.0))
            .collect();
        let ports = m.layout.metro_ports.get(&(n, h)).copied();
        let switches = m.layout.metro_switches.get(&(n, h)).copied();
        cover(
            &mut m,
            format!("mport_n{}_h{}", n, h),
            ports,
            p.router_port_bitrate_gbps,
            load.clone(),
        );
        cover(
            &mut m,
            format!("msw_n{}_h{}", n, h),
            switches,
            p.switch_bitrate_gbps,
            load,
        );
    }

    // Solar split, coverage cap, battery recurrence, exclusivity, cyclic rule.
    if solar.is_some() {
        let coverage_scale = p.server_capacity_gbps * 1000.0 / p.server_w;
        for &g in &placement.afdc_groups {
            for h in 0..HOURS {
                let ss = m.layout.solar_serve[&(g.0, h)];
                let scu = m.layout.solar_curtail[&(g.0, h)];
                let mut terms = vec![(ss, 1.0), (scu, 1.0)];
                if let Some(&sc) = m.layout.solar_charge.get(&(g.0, h)) {
                    terms.push((sc, 1.0));
                }
                m.add_con(format!("sbal_g{}_h{}", g.0, h), Sense::Eq, gen[h], terms);

                // Covered energy cannot exceed the server-proportional share
                // of facility power drawn by the served load.
                let mut terms = vec![(ss, coverage_scale)];
                if let Some(&ed) = m.layout.esd_drawn.get(&(g.0, h)) {
                    terms.push((ed, coverage_scale * m.layout.eta_discharge));
                }
                if let Some(&x) = m.layout.x_afdc.get(&(g.0, h)) {
                    terms.push((x, -p.pue_af));
                }
                m.add_con(format!("scov_g{}_h{}", g.0, h), Sense::Le, 0.0, terms);
            }
        }
        if let Some(e) = esd {
            for &g in &placement.afdc_groups {
                for h in 0..HOURS {
                    let soc = m.layout.esd_soc[&(g.0, h)];
                    let sc = m.layout.solar_charge[&(g.0, h)];
                    let ed = m.layout.esd_drawn[&(g.0, h)];
                    let mut terms = vec![(soc, 1.0), (sc, -e.eta_charge), (ed, 1.0)];
                    let rhs = if h == 0 {
                        scenario.esd_initial_soc_kwh
                    } else {
                        terms.push((m.layout.esd_soc[&(g.0, h - 1)], -1.0));
                        0.0
                    };
                    m.add_con(format!("soc_g{}_h{}", g.0, h), Sense::Eq, rhs, terms);

                    if let Some(&b) = m.layout.esd_mode.get(&(g.0, h)) {
                        // b = 1 allows charging, b = 0 allows discharging.
                        let big_charge = num::min(gen[h], e.max_charge_kwh_per_hour);
                        m.add_con(
                            format!("xchg_g{}_h{}", g.0, h),
                            Sense::Le,
                            0.0,
                            vec![(sc, 1.0), (b, -big_charge)],
                        );
                        let big_drawn = num::min(e.e_max_kwh, e.max_discharge_kwh_per_hour);
                        m.add_con(
                            format!("xdis_g{}_h{}", g.0, h),
                            Sense::Le,
                            big_drawn,
                            vec![(ed, 1.0), (b, big_drawn)],
                        );
                    }
                }
                if scenario.cyclic_esd {
                    m.add_con(
                        format!("cyc_g{}", g.0),
                        Sense::Ge,
                        scenario.esd_initial_soc_kwh,
                        vec![(m.layout.esd_soc[&(g.0, HOURS - 1)], 1.0)],
                    );
                }
            }
        }
    }

    debug_assert!(m.check().is_ok());
    Ok(m)
}

/// For every (CDC node, destination node) pair that can carry traffic,
/// the per-hour maximum Gbps that could converge on it. Keys are
/// `(src node, dst node)`.
fn pair_caps(
    topo: &CoreTopology,
    demand: &DemandProfile,
    placement: &crate::topology::SitePlacement,
    params: &PowerParams,
) -> alloc::collections::BTreeMap<(usize, usize), ([f64; HOURS], ())> {
    let mut out = alloc::collections::BTreeMap::new();
    for &cdc in &placement.cdc_nodes {
        for dst in topo.nodes() {
            if dst == cdc || topo.groups_at(dst).next().is_none() {
                continue;
            }
            let mut caps = [0.0; HOURS];
            for h in 0..HOURS {
                caps[h] = topo
                    .groups_at(dst)
                    .map(|g| num::min(demand.get(g, h), params.olt_metro_capacity_gbps))
                    .sum();
            }
            out.insert((cdc.0, dst.0), (caps, ()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{CoreTopology, GroupId, NodeId, SitePlacement};

    fn tiny() -> (CoreTopology, DemandProfile, PowerParams, ScenarioConfig) {
        let topo = CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap();
        let mut demand = DemandProfile::zero(2);
        demand.set(GroupId(1), 0, 90.0);
        let params = PowerParams::default();
        let placement = SitePlacement::new(
            vec![NodeId(0)],
            vec![],
            vec![GroupId(0), GroupId(1)],
        );
        let scenario = ScenarioConfig::all_brown(placement);
        (topo, demand, params, scenario)
    }

    #[test]
    fn builds_consistent_model() {
        let (topo, demand, params, scenario) = tiny();
        let m = build_model(&topo, &demand, &params, &scenario).unwrap();
        m.check().unwrap();
        assert!(m.integer_count() > 0);
        // One demand row per group-hour.
        let demand_rows = m
            .cons()
            .iter()
            .filter(|c| c.name.starts_with("dem_"))
            .count();
        assert_eq!(demand_rows, 2 * HOURS);
    }

    #[test]
    fn zero_demand_model_has_zero_lower_bound() {
        let topo = CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap();
        let demand = DemandProfile::zero(2);
        let params = PowerParams::default();
        let scenario =
            ScenarioConfig::all_brown(SitePlacement::default_for(&topo, 1));
        let m = build_model(&topo, &demand, &params, &scenario).unwrap();
        // All variables are fixed at zero, so the only feasible objective is 0.
        for v in m.vars() {
            assert_eq!(v.ub, 0.0, "{} should be fixed at zero", v.name);
        }
    }

    #[test]
    fn rejects_mismatched_demand() {
        let (topo, _, params, scenario) = tiny();
        let demand = DemandProfile::zero(5);
        let err = build_model(&topo, &demand, &params, &scenario).unwrap_err();
        assert!(matches!(err, BuildError::Demand(_)));
    }
}
