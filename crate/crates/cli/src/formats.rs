//! Text formats: topology and placement files, demand CSV, solar profiles,
//! power parameter files, and the plan / core-traffic / breakdown CSV
//! outputs. Parsers reject unknown keys and emitters round-trip exactly
//! (floats are written in shortest round-trip form).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use greenvod_core::energy::HOURS;
use greenvod_core::plan::{CoreFlow, PlacementPlan, SolarTrace};
use greenvod_core::power::{DailyBreakdown, DcPowerMode};
use greenvod_core::{
    CoreTopology, DemandProfile, GroupId, NodeId, PowerParams, SitePlacement,
};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {value}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error(transparent)]
    Topology(#[from] greenvod_core::topology::TopologyError),
    #[error(transparent)]
    Demand(#[from] greenvod_core::demand::DemandError),
    #[error(transparent)]
    Energy(#[from] greenvod_core::energy::EnergyError),
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line: line + 1,
        message: message.into(),
    }
}

/// Lines that carry content: comments (`#`) and blanks skipped,
/// 1-based index preserved for messages.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            None
        } else {
            Some((i, t))
        }
    })
}

// --- Topology ---------------------------------------------------------------

/// `NODE <id> <access_groups>` and `LINK <a> <b> <km> <fibres>` records.
/// Node ids may be arbitrary tokens; they are normalized to dense indices in
/// declaration order.
pub fn parse_topology(text: &str) -> Result<CoreTopology, FormatError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut groups: Vec<u32> = Vec::new();
    let mut links: Vec<greenvod_core::topology::Link> = Vec::new();

    for (i, line) in content_lines(text) {
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok[0] {
            "NODE" => {
                if tok.len() != 3 {
                    return Err(syntax(i, "NODE takes <id> <access_groups>"));
                }
                if index.contains_key(tok[1]) {
                    return Err(syntax(i, format!("duplicate node {}", tok[1])));
                }
                let count: u32 = tok[2]
                    .parse()
                    .map_err(|_| syntax(i, format!("bad access group count {}", tok[2])))?;
                index.insert(tok[1].to_string(), labels.len());
                labels.push(tok[1].to_string());
                groups.push(count);
            }
            "LINK" => {
                if tok.len() != 5 {
                    return Err(syntax(i, "LINK takes <a> <b> <km> <fibres>"));
                }
                let a = *index
                    .get(tok[1])
                    .ok_or_else(|| syntax(i, format!("unknown node {}", tok[1])))?;
                let b = *index
                    .get(tok[2])
                    .ok_or_else(|| syntax(i, format!("unknown node {}", tok[2])))?;
                let km: f64 = tok[3]
                    .parse()
                    .map_err(|_| syntax(i, format!("bad distance {}", tok[3])))?;
                let fibres: u32 = tok[4]
                    .parse()
                    .map_err(|_| syntax(i, format!("bad fibre count {}", tok[4])))?;
                links.push(greenvod_core::topology::Link {
                    a: NodeId(a),
                    b: NodeId(b),
                    distance_km: km,
                    fibre_count: fibres,
                });
            }
            other => return Err(syntax(i, format!("unknown record {other}"))),
        }
    }
    Ok(CoreTopology::new(labels, links, groups)?)
}

// --- Placement ---------------------------------------------------------------

/// `CDC <node>`, `MFDC <node>`, `AFDC <group>` records. Nodes are named by
/// their topology labels; groups by dense index.
pub fn parse_placement(text: &str, topo: &CoreTopology) -> Result<SitePlacement, FormatError> {
    let node_by_label: BTreeMap<&str, usize> = (0..topo.node_count())
        .map(|n| (topo.node_label(NodeId(n)), n))
        .collect();
    let mut cdc = Vec::new();
    let mut mfdc = Vec::new();
    let mut afdc = Vec::new();
    for (i, line) in content_lines(text) {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(syntax(i, "placement records take one argument"));
        }
        match tok[0] {
            "CDC" | "MFDC" => {
                let n = *node_by_label
                    .get(tok[1])
                    .ok_or_else(|| syntax(i, format!("unknown node {}", tok[1])))?;
                if tok[0] == "CDC" {
                    cdc.push(NodeId(n));
                } else {
                    mfdc.push(NodeId(n));
                }
            }
            "AFDC" => {
                let g: usize = tok[1]
                    .parse()
                    .map_err(|_| syntax(i, format!("bad group id {}", tok[1])))?;
                if g >= topo.group_count() {
                    return Err(syntax(i, format!("unknown group {g}")));
                }
                afdc.push(GroupId(g));
            }
            other => return Err(syntax(i, format!("unknown record {other}"))),
        }
    }
    let placement = SitePlacement::new(cdc, mfdc, afdc);
    placement.validate(topo)?;
    Ok(placement)
}

// --- Demand CSV ---------------------------------------------------------------

/// CSV with header `group,h0..h23`, one row per access group.
pub fn parse_demand(text: &str, topo: &CoreTopology) -> Result<DemandProfile, FormatError> {
    let mut lines = content_lines(text);
    let (hi, header) = lines
        .next()
        .ok_or_else(|| syntax(0, "empty demand file"))?;
    let expected: Vec<String> = std::iter::once("group".to_string())
        .chain((0..HOURS).map(|h| format!("h{h}")))
        .collect();
    let got: Vec<&str> = header.split(',').map(str::trim).collect();
    if got != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(syntax(hi, "header must be `group,h0,...,h23`"));
    }
    let mut data = vec![0.0; topo.group_count() * HOURS];
    let mut seen = vec![false; topo.group_count()];
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != HOURS + 1 {
            return Err(syntax(
                i,
                format!("expected {} columns, got {}", HOURS + 1, cells.len()),
            ));
        }
        let g: usize = cells[0]
            .parse()
            .map_err(|_| syntax(i, format!("bad group id {}", cells[0])))?;
        if g >= topo.group_count() {
            return Err(syntax(i, format!("unknown group {g}")));
        }
        if seen[g] {
            return Err(syntax(i, format!("duplicate group {g}")));
        }
        seen[g] = true;
        for (h, cell) in cells[1..].iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                syntax(i, format!("bad value `{cell}` in column h{h}"))
            })?;
            if v < 0.0 {
                return Err(syntax(
                    i,
                    format!("negative demand {v} for group {g} in column h{h}"),
                ));
            }
            data[g * HOURS + h] = v;
        }
    }
    if let Some(g) = seen.iter().position(|s| !s) {
        return Err(FormatError::Invalid(format!("missing row for group {g}")));
    }
    Ok(DemandProfile::new(topo.group_count(), data)?)
}

/// Emits the demand CSV; `parse_demand(emit_demand(d)) == d` exactly.
pub fn emit_demand(demand: &DemandProfile) -> String {
    let mut out = String::from("group");
    for h in 0..HOURS {
        let _ = write!(out, ",h{h}");
    }
    out.push('\n');
    for g in 0..demand.group_count() {
        let _ = write!(out, "{g}");
        for &v in demand.row(GroupId(g)) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

// --- Solar profile ------------------------------------------------------------

/// 24 lines of `<hour> <irradiance W/m²>`.
pub fn parse_solar(text: &str) -> Result<greenvod_core::SolarProfile, FormatError> {
    let mut values = [f64::NAN; HOURS];
    for (i, line) in content_lines(text) {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(syntax(i, "expected `<hour> <irradiance>`"));
        }
        let h: usize = tok[0]
            .parse()
            .map_err(|_| syntax(i, format!("bad hour {}", tok[0])))?;
        if h >= HOURS {
            return Err(syntax(i, format!("hour {h} out of range")));
        }
        let v: f64 = tok[1]
            .parse()
            .map_err(|_| syntax(i, format!("bad irradiance {}", tok[1])))?;
        values[h] = v;
    }
    if let Some(h) = values.iter().position(|v| v.is_nan()) {
        return Err(FormatError::Invalid(format!("missing hour {h}")));
    }
    Ok(greenvod_core::SolarProfile::new(&values)?)
}

pub fn emit_solar(profile: &greenvod_core::SolarProfile) -> String {
    let mut out = String::new();
    for (h, v) in profile.values().iter().enumerate() {
        let _ = writeln!(out, "{h} {v}");
    }
    out
}

// --- Power parameters -----------------------------------------------------------

/// Applies `key = value` lines to a parameter set. Key names mirror the
/// parameter fields; unknown keys are rejected.
pub fn apply_power_params(text: &str, params: &mut PowerParams) -> Result<(), FormatError> {
    for (i, line) in content_lines(text) {
        let Some((key, value)) = line.split_once('=') else {
            return Err(syntax(i, "expected `key = value`"));
        };
        apply_power_param(i, key.trim(), value.trim(), params)?;
    }
    Ok(())
}

pub(crate) fn apply_power_param(
    line: usize,
    key: &str,
    value: &str,
    p: &mut PowerParams,
) -> Result<(), FormatError> {
    let bad = |line: usize| FormatError::BadValue {
        line: line + 1,
        key: key.to_string(),
        value: value.to_string(),
    };
    let f = |target: &mut f64| -> Result<(), FormatError> {
        *target = value.parse().map_err(|_| bad(line))?;
        Ok(())
    };
    match key {
        "cloud_router_port_w" => f(&mut p.cloud_router_port_w),
        "fog_router_port_w" => f(&mut p.fog_router_port_w),
        "cloud_metro_switch_w" => f(&mut p.cloud_metro_switch_w),
        "access_fog_switch_w" => f(&mut p.access_fog_switch_w),
        "metro_eth_switch_w" => f(&mut p.metro_eth_switch_w),
        "olt_w" => f(&mut p.olt_w),
        "switch_bitrate_gbps" => f(&mut p.switch_bitrate_gbps),
        "access_switch_bitrate_gbps" => f(&mut p.access_switch_bitrate_gbps),
        "server_capacity_gbps" => f(&mut p.server_capacity_gbps),
        "pue_c" => f(&mut p.pue_c),
        "pue_mf" => f(&mut p.pue_mf),
        "pue_af" => f(&mut p.pue_af),
        "net_to_compute_ratio" => f(&mut p.net_to_compute_ratio),
        "pue_n" => f(&mut p.pue_n),
        "olt_afdc_capacity_gbps" => f(&mut p.olt_afdc_capacity_gbps),
        "olt_metro_capacity_gbps" => f(&mut p.olt_metro_capacity_gbps),
        "wavelength_capacity_gbps" => f(&mut p.wavelength_capacity_gbps),
        "core_router_port_w" => f(&mut p.core_router_port_w),
        "transponder_w" => f(&mut p.transponder_w),
        "edfa_w" => f(&mut p.edfa_w),
        "regenerator_w" => f(&mut p.regenerator_w),
        "optical_switch_w" => f(&mut p.optical_switch_w),
        "edfa_span_km" => f(&mut p.edfa_span_km),
        "regen_reach_km" => f(&mut p.regen_reach_km),
        "server_w" => f(&mut p.server_w),
        "router_port_bitrate_gbps" => f(&mut p.router_port_bitrate_gbps),
        "metro_edge_port_w" => f(&mut p.metro_edge_port_w),
        "afdc_server_count" => {
            p.afdc_server_count = value.parse().map_err(|_| bad(line))?;
            Ok(())
        }
        "mfdc_server_count_max" => {
            p.mfdc_server_count_max = value.parse().map_err(|_| bad(line))?;
            Ok(())
        }
        "dc_power_mode" => {
            p.dc_power_mode = match value {
                "detailed" => DcPowerMode::Detailed,
                "ratio" => DcPowerMode::Ratio,
                _ => return Err(bad(line)),
            };
            Ok(())
        }
        "cdc_capacity_gbps" => {
            p.cdc_capacity_gbps = match value {
                "none" | "unbounded" => None,
                v => Some(v.parse().map_err(|_| bad(line))?),
            };
            Ok(())
        }
        _ => Err(FormatError::UnknownKey {
            line: line + 1,
            key: key.to_string(),
        }),
    }
}

pub(crate) fn is_power_param_key(key: &str) -> bool {
    let mut probe = PowerParams::default();
    !matches!(
        apply_power_param(0, key, "1", &mut probe),
        Err(FormatError::UnknownKey { .. })
    )
}

// --- Plan CSV -------------------------------------------------------------------

pub const PLAN_HEADER: &str = "hour,group,afdc_gbps,mfdc_gbps,cdc_gbps,solar_serve_kwh,solar_charge_kwh,curtailed_kwh,discharge_kwh,soc_kwh";

/// One row per (hour, group). `cdc_gbps` is the total over CDCs; the
/// per-pair split lives in the core-traffic CSV.
pub fn emit_plan(plan: &PlacementPlan) -> String {
    let mut out = String::from(PLAN_HEADER);
    out.push('\n');
    let zero = SolarTrace::zero(plan.group_count());
    let solar = plan.solar.as_ref().unwrap_or(&zero);
    for h in 0..HOURS {
        for g in 0..plan.group_count() {
            let idx = g * HOURS + h;
            let _ = writeln!(
                out,
                "{h},{g},{},{},{},{},{},{},{},{}",
                plan.afdc(GroupId(g), h),
                plan.mfdc(GroupId(g), h),
                plan.cdc_total(GroupId(g), h),
                solar.serve[idx],
                solar.charge[idx],
                solar.curtail[idx],
                solar.discharge_delivered[idx],
                solar.soc[idx],
            );
        }
    }
    out
}

/// A plan parsed back from CSV. The per-CDC split is not representable in
/// the plan CSV, so all CDC traffic is reported in aggregate; pair it with
/// the core CSV for full fidelity.
pub struct CsvPlan {
    pub plan: PlacementPlan,
}

/// Parses the plan CSV against the topology. The aggregate `cdc_gbps`
/// column is assigned to CDC index 0 unless a core-traffic CSV is attached
/// later via [`apply_core_csv`].
pub fn parse_plan(
    text: &str,
    topo: &CoreTopology,
    cdc_count: usize,
) -> Result<PlacementPlan, FormatError> {
    let mut lines = content_lines(text);
    let (hi, header) = lines.next().ok_or_else(|| syntax(0, "empty plan file"))?;
    if header != PLAN_HEADER {
        return Err(syntax(hi, format!("header must be `{PLAN_HEADER}`")));
    }
    let mut plan = PlacementPlan::zero(topo.group_count(), cdc_count.max(1));
    let mut trace = SolarTrace::zero(topo.group_count());
    let mut any_solar = false;
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 10 {
            return Err(syntax(i, format!("expected 10 columns, got {}", cells.len())));
        }
        let h: usize = cells[0].parse().map_err(|_| syntax(i, "bad hour"))?;
        let g: usize = cells[1].parse().map_err(|_| syntax(i, "bad group"))?;
        if h >= HOURS || g >= topo.group_count() {
            return Err(syntax(i, "hour or group out of range"));
        }
        let num = |idx: usize| -> Result<f64, FormatError> {
            cells[idx]
                .parse()
                .map_err(|_| syntax(i, format!("bad number `{}`", cells[idx])))
        };
        plan.set_afdc(GroupId(g), h, num(2)?);
        plan.set_mfdc(GroupId(g), h, num(3)?);
        plan.set_cdc(GroupId(g), 0, h, num(4)?);
        let idx = g * HOURS + h;
        trace.serve[idx] = num(5)?;
        trace.charge[idx] = num(6)?;
        trace.curtail[idx] = num(7)?;
        trace.discharge_delivered[idx] = num(8)?;
        trace.soc[idx] = num(9)?;
        if trace.serve[idx] != 0.0
            || trace.charge[idx] != 0.0
            || trace.curtail[idx] != 0.0
            || trace.discharge_delivered[idx] != 0.0
            || trace.soc[idx] != 0.0
        {
            any_solar = true;
        }
    }
    if any_solar {
        plan.solar = Some(trace);
    }
    Ok(plan)
}

// --- Core traffic CSV --------------------------------------------------------------

pub const CORE_HEADER: &str = "hour,src,dst,gbps,wavelengths";

pub fn emit_core(plan: &PlacementPlan, topo: &CoreTopology) -> String {
    let mut out = String::from(CORE_HEADER);
    out.push('\n');
    for f in &plan.core_flows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            f.hour,
            topo.node_label(f.src),
            topo.node_label(f.dst),
            f.gbps,
            f.wavelengths
        );
    }
    out
}

/// Replaces the plan's core flows (and re-distributes its aggregate CDC
/// column onto per-CDC columns when the placement is known) from the core
/// CSV. Traffic to each destination node is attributed to the CSV's source
/// CDCs in file order.
pub fn apply_core_csv(
    text: &str,
    topo: &CoreTopology,
    placement: &SitePlacement,
    plan: &mut PlacementPlan,
) -> Result<(), FormatError> {
    let node_by_label: BTreeMap<&str, usize> = (0..topo.node_count())
        .map(|n| (topo.node_label(NodeId(n)), n))
        .collect();
    let mut lines = content_lines(text);
    let (hi, header) = lines.next().ok_or_else(|| syntax(0, "empty core file"))?;
    if header != CORE_HEADER {
        return Err(syntax(hi, format!("header must be `{CORE_HEADER}`")));
    }
    let mut flows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 5 {
            return Err(syntax(i, "expected 5 columns"));
        }
        let hour: usize = cells[0].parse().map_err(|_| syntax(i, "bad hour"))?;
        let src = *node_by_label
            .get(cells[1])
            .ok_or_else(|| syntax(i, format!("unknown node {}", cells[1])))?;
        let dst = *node_by_label
            .get(cells[2])
            .ok_or_else(|| syntax(i, format!("unknown node {}", cells[2])))?;
        let gbps: f64 = cells[3].parse().map_err(|_| syntax(i, "bad gbps"))?;
        let wavelengths: u32 = cells[4]
            .parse()
            .map_err(|_| syntax(i, "bad wavelength count"))?;
        flows.push(CoreFlow {
            hour,
            src: NodeId(src),
            dst: NodeId(dst),
            gbps,
            wavelengths,
        });
    }
    flows.sort_by_key(|f| (f.hour, f.src, f.dst));

    // Re-attribute the aggregate CDC column using the flows: traffic from
    // CDC c to groups homed at dst. Local CDC service (src == home) stays on
    // the local CDC when one exists.
    let cdc_index: BTreeMap<usize, usize> = placement
        .cdc_nodes
        .iter()
        .enumerate()
        .map(|(c, n)| (n.0, c))
        .collect();
    if plan.cdc_count() == placement.cdc_nodes.len() && !placement.cdc_nodes.is_empty() {
        for h in 0..HOURS {
            for g in 0..topo.group_count() {
                let g = GroupId(g);
                let total = plan.cdc_total(g, h);
                for c in 0..plan.cdc_count() {
                    plan.set_cdc(g, c, h, 0.0);
                }
                if total == 0.0 {
                    continue;
                }
                let home = topo.home_of(g);
                // Local share first, then remote flows proportionally to the
                // group's fraction of its home node's demand served via core.
                if let Some(&c) = cdc_index.get(&home.0) {
                    plan.set_cdc(g, c, h, total);
                } else {
                    // Attribute to the first CDC with a flow into this home.
                    let flow = flows
                        .iter()
                        .find(|f| f.hour == h && f.dst == home && f.gbps > 0.0);
                    let c = flow
                        .and_then(|f| cdc_index.get(&f.src.0).copied())
                        .unwrap_or(0);
                    plan.set_cdc(g, c, h, total);
                }
            }
        }
    }
    plan.core_flows = flows;
    Ok(())
}

// --- Breakdown CSV -------------------------------------------------------------------

pub const BREAKDOWN_HEADER: &str =
    "hour,core_w,metro_w,access_w,cdc_w,mfdc_w,afdc_w,brown_w,renewable_w";

/// One row per hour in W plus a `daily_kwh` totals row.
pub fn emit_breakdown(b: &DailyBreakdown) -> String {
    let mut out = String::from(BREAKDOWN_HEADER);
    out.push('\n');
    for (h, hp) in b.hours.iter().enumerate() {
        let _ = writeln!(
            out,
            "{h},{},{},{},{},{},{},{},{}",
            hp.core_w,
            hp.metro_w,
            hp.access_w,
            hp.dc_cdc_w,
            hp.dc_mfdc_w,
            hp.dc_afdc_w,
            hp.brown_w,
            hp.renewable_w
        );
    }
    let sum = |f: fn(&greenvod_core::power::HourlyPower) -> f64| -> f64 {
        b.hours.iter().map(f).sum::<f64>() / 1000.0
    };
    let _ = writeln!(
        out,
        "daily_kwh,{},{},{},{},{},{},{},{}",
        sum(|h| h.core_w),
        sum(|h| h.metro_w),
        sum(|h| h.access_w),
        sum(|h| h.dc_cdc_w),
        sum(|h| h.dc_mfdc_w),
        sum(|h| h.dc_afdc_w),
        sum(|h| h.brown_w),
        sum(|h| h.renewable_w),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY_TOPO: &str = "\
# two nodes, one link
NODE a 1
NODE b 2
LINK a b 800 1
";

    #[test]
    fn topology_round_trip_essentials() {
        let topo = parse_topology(TINY_TOPO).unwrap();
        assert_eq!(topo.node_count(), 2);
        assert_eq!(topo.group_count(), 3);
        assert_eq!(topo.links()[0].distance_km, 800.0);
    }

    #[test]
    fn topology_rejects_negative_distance() {
        let err = parse_topology("NODE a 1\nNODE b 1\nLINK a b -5 1\n").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("non-positive distance"), "{msg}");
    }

    #[test]
    fn demand_round_trip_is_exact() {
        let topo = parse_topology(TINY_TOPO).unwrap();
        let mut demand = DemandProfile::zero(3);
        demand.set(GroupId(0), 5, 12.375);
        demand.set(GroupId(2), 21, 100.1);
        demand.set(GroupId(1), 0, 1.0 / 3.0);
        let text = emit_demand(&demand);
        let back = parse_demand(&text, &topo).unwrap();
        assert_eq!(back, demand);
    }

    #[test]
    fn demand_names_bad_cell() {
        let topo = parse_topology(TINY_TOPO).unwrap();
        let mut text = emit_demand(&DemandProfile::zero(3));
        text = text.replace("1,0,0,0,0", "1,0,0,0,-1");
        let err = parse_demand(&text, &topo).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("h3") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn params_rejects_unknown_key() {
        let mut p = PowerParams::default();
        let err = apply_power_params("no_such_thing = 5\n", &mut p).unwrap_err();
        assert!(matches!(err, FormatError::UnknownKey { .. }));
        apply_power_params("olt_w = 900\npue_n = 1.4\n", &mut p).unwrap();
        assert_eq!(p.olt_w, 900.0);
        assert_eq!(p.pue_n, 1.4);
    }

    #[test]
    fn solar_requires_all_hours() {
        let mut text = String::new();
        for h in 0..23 {
            text.push_str(&format!("{h} 0\n"));
        }
        let err = parse_solar(&text).unwrap_err();
        assert!(format!("{err}").contains("missing hour 23"));
    }

    #[test]
    fn plan_csv_round_trip() {
        let topo = parse_topology(TINY_TOPO).unwrap();
        let mut plan = PlacementPlan::zero(3, 1);
        plan.set_afdc(GroupId(0), 3, 17.25);
        plan.set_cdc(GroupId(2), 0, 9, 40.0);
        let text = emit_plan(&plan);
        let back = parse_plan(&text, &topo, 1).unwrap();
        assert_eq!(back.afdc(GroupId(0), 3), 17.25);
        assert_eq!(back.cdc(GroupId(2), 0, 9), 40.0);
    }
}
