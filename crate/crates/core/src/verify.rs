//! Independent feasibility checker for placement plans.
//!
//! Deliberately shares nothing with the model builder's constraint
//! generation: every rule is recomputed here from the domain definitions, so
//! a bug in the optimization model cannot hide itself. Violations are data,
//! not errors; an empty list means the plan is feasible.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::demand::DemandProfile;
use crate::energy::{generation_kwh, HOURS};
use crate::num;
use crate::plan::PlacementPlan;
use crate::power::{dc_power_unchecked, wavelengths_for, DcTier, PowerParams};
use crate::scenario::ScenarioConfig;
use crate::topology::{CoreTopology, NodeId};

/// One broken rule, with enough context to locate it.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Hour the violation occurred in; `None` for structural problems.
    pub hour: Option<usize>,
    /// The entity involved (group, node, CDC or pair).
    pub entity: String,
    /// Stable constraint name, e.g. `demand_satisfaction` or `soc_bounds`.
    pub constraint: &'static str,
    /// How far outside the constraint the plan is, in the constraint's own
    /// units (positive means violated).
    pub slack: f64,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.hour {
            Some(h) => write!(
                f,
                "h{:02} {} {} (by {:.6})",
                h, self.entity, self.constraint, self.slack
            ),
            None => write!(f, "{} {} (by {:.6})", self.entity, self.constraint, self.slack),
        }
    }
}

const TOL: f64 = 1e-6;

fn tol_for(scale: f64) -> f64 {
    TOL * num::max(1.0, scale)
}

/// Checks a plan against every invariant: exact demand satisfaction, tier
/// and link capacities, core-traffic consistency with wavelength counts,
/// solar balance and coverage, battery dynamics and exclusivity, and the
/// scenario's structural rules.
pub fn verify_plan(
    plan: &PlacementPlan,
    topo: &CoreTopology,
    demand: &DemandProfile,
    params: &PowerParams,
    scenario: &ScenarioConfig,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let placement = &scenario.placement;
    let p = scenario.effective_params(params);

    if plan.group_count() != topo.group_count() {
        out.push(Violation {
            hour: None,
            entity: format!(
                "plan has {} groups, topology has {}",
                plan.group_count(),
                topo.group_count()
            ),
            constraint: "plan_shape",
            slack: 0.0,
        });
        return out;
    }
    if plan.cdc_count() != placement.cdc_nodes.len() {
        out.push(Violation {
            hour: None,
            entity: format!(
                "plan has {} cdc columns, placement has {}",
                plan.cdc_count(),
                placement.cdc_nodes.len()
            ),
            constraint: "plan_shape",
            slack: 0.0,
        });
        return out;
    }
    if demand.check_topology(topo).is_err() {
        out.push(Violation {
            hour: None,
            entity: String::from("demand/topology group mismatch"),
            constraint: "plan_shape",
            slack: 0.0,
        });
        return out;
    }

    let mfdc_cap = p.mfdc_capacity_gbps();
    let afdc_cap = p.afdc_capacity_gbps();

    for h in 0..HOURS {
        for g in topo.groups() {
            let d = demand.get(g, h);
            let af = plan.afdc(g, h);
            let mf = plan.mfdc(g, h);
            let cdc = plan.cdc_total(g, h);
            let served = af + mf + cdc;

            for (v, label) in [(af, "afdc"), (mf, "mfdc"), (cdc, "cdc")] {
                if v < -tol_for(d) {
                    out.push(Violation {
                        hour: Some(h),
                        entity: format!("{g} {label}"),
                        constraint: "non_negative_flow",
                        slack: -v,
                    });
                }
            }
            if num::abs(served - d) > tol_for(d) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "demand_satisfaction",
                    slack: num::abs(served - d),
                });
            }
            if af > tol_for(afdc_cap) && !placement.has_afdc(g) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "afdc_absent",
                    slack: af,
                });
            }
            if af > afdc_cap + tol_for(afdc_cap) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "afdc_capacity",
                    slack: af - afdc_cap,
                });
            }
            if af > p.olt_afdc_capacity_gbps + tol_for(p.olt_afdc_capacity_gbps) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "olt_afdc_link",
                    slack: af - p.olt_afdc_capacity_gbps,
                });
            }
            if mf > tol_for(mfdc_cap) && !placement.has_mfdc(topo.home_of(g)) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "mfdc_absent",
                    slack: mf,
                });
            }
            let upstream = mf + cdc;
            if upstream > p.olt_metro_capacity_gbps + tol_for(p.olt_metro_capacity_gbps) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "olt_metro_link",
                    slack: upstream - p.olt_metro_capacity_gbps,
                });
            }
        }

        for &m in &placement.mfdc_nodes {
            let load: f64 = topo.groups_at(m).map(|g| plan.mfdc(g, h)).sum();
            if load > mfdc_cap + tol_for(mfdc_cap) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{m}"),
                    constraint: "mfdc_capacity",
                    slack: load - mfdc_cap,
                });
            }
        }
        if let Some(cap) = p.cdc_capacity_gbps {
            for (c, &node) in placement.cdc_nodes.iter().enumerate() {
                let load: f64 = topo.groups().map(|g| plan.cdc(g, c, h)).sum();
                if load > cap + tol_for(cap) {
                    out.push(Violation {
                        hour: Some(h),
                        entity: format!("cdc {node}"),
                        constraint: "cdc_capacity",
                        slack: load - cap,
                    });
                }
            }
        }
    }

    verify_core_traffic(&mut out, plan, topo, &p, placement);
    verify_energy(&mut out, plan, topo, &p, scenario);

    out
}

/// The plan's core flows must equal the traffic implied by its CDC serving
/// decisions, and each flow needs enough wavelengths.
fn verify_core_traffic(
    out: &mut Vec<Violation>,
    plan: &PlacementPlan,
    topo: &CoreTopology,
    p: &PowerParams,
    placement: &crate::topology::SitePlacement,
) {
    use alloc::collections::BTreeMap;
    for h in 0..HOURS {
        // Implied traffic per (cdc node, home node) pair; service at the
        // CDC's own node never enters the core.
        let mut implied: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        for (c, &src) in placement.cdc_nodes.iter().enumerate() {
            for g in topo.groups() {
                let dst = topo.home_of(g);
                if dst == src {
                    continue;
                }
                let v = plan.cdc(g, c, h);
                if v != 0.0 {
                    *implied.entry((src, dst)).or_insert(0.0) += v;
                }
            }
        }
        let mut seen: BTreeMap<(NodeId, NodeId), (f64, u32)> = BTreeMap::new();
        for f in plan.core_flows.iter().filter(|f| f.hour == h) {
            seen.insert((f.src, f.dst), (f.gbps, f.wavelengths));
        }
        for (&(src, dst), &gbps) in &implied {
            let (flow_gbps, w) = seen.get(&(src, dst)).copied().unwrap_or((0.0, 0));
            if num::abs(flow_gbps - gbps) > tol_for(gbps) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{src}->{dst}"),
                    constraint: "core_traffic_consistency",
                    slack: num::abs(flow_gbps - gbps),
                });
            }
            let needed = wavelengths_for(gbps, p);
            if (w as u64) < needed {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{src}->{dst}"),
                    constraint: "wavelength_deficit",
                    slack: (needed - w as u64) as f64,
                });
            }
        }
        for (&(src, dst), &(gbps, _)) in &seen {
            if gbps > 0.0 && !implied.contains_key(&(src, dst)) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{src}->{dst}"),
                    constraint: "core_traffic_consistency",
                    slack: gbps,
                });
            }
        }
    }
}

/// Solar balance, coverage by actual AFDC power, battery recurrence with the
/// one-way efficiencies, soc bounds, exclusivity, rate caps and the cyclic
/// rule.
fn verify_energy(
    out: &mut Vec<Violation>,
    plan: &PlacementPlan,
    topo: &CoreTopology,
    p: &PowerParams,
    scenario: &ScenarioConfig,
) {
    let placement = &scenario.placement;
    let solar = scenario.solar();
    let esd = scenario.esd();
    let Some(trace) = plan.solar.as_ref() else {
        if solar.is_some() {
            out.push(Violation {
                hour: None,
                entity: String::from("plan"),
                constraint: "solar_trace_missing",
                slack: 0.0,
            });
        }
        return;
    };
    if solar.is_none() {
        let extraneous: f64 = trace
            .serve
            .iter()
            .chain(&trace.charge)
            .chain(&trace.discharge_delivered)
            .sum();
        if extraneous > TOL {
            out.push(Violation {
                hour: None,
                entity: String::from("plan"),
                constraint: "solar_without_scenario",
                slack: extraneous,
            });
        }
        return;
    }
    let (array, profile) = solar.unwrap();
    let gen = generation_kwh(profile, array);

    for g in topo.groups() {
        let gi = g.0;
        let is_afdc = placement.has_afdc(g);
        let mut soc_prev = trace.initial_soc_kwh;
        for h in 0..HOURS {
            let idx = gi * HOURS + h;
            let serve = trace.serve[idx];
            let charge = trace.charge[idx];
            let curtail = trace.curtail[idx];
            let delivered = trace.discharge_delivered[idx];
            let soc = trace.soc[idx];

            if !is_afdc {
                if serve + charge + curtail + delivered + soc > TOL {
                    out.push(Violation {
                        hour: Some(h),
                        entity: format!("{g}"),
                        constraint: "solar_at_non_afdc",
                        slack: serve + charge + curtail + delivered,
                    });
                }
                continue;
            }

            for (v, name) in [
                (serve, "serve"),
                (charge, "charge"),
                (curtail, "curtail"),
                (delivered, "discharge"),
            ] {
                if v < -tol_for(gen[h]) {
                    out.push(Violation {
                        hour: Some(h),
                        entity: format!("{g} {name}"),
                        constraint: "non_negative_energy",
                        slack: -v,
                    });
                }
            }

            let split = serve + charge + curtail;
            if num::abs(split - gen[h]) > tol_for(gen[h]) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "solar_balance",
                    slack: num::abs(split - gen[h]),
                });
            }

            // Covered energy must fit the site's facility draw this hour.
            let dc_kwh = dc_power_unchecked(DcTier::Afdc, plan.afdc(g, h), p) / 1000.0;
            if serve + delivered > dc_kwh + tol_for(dc_kwh) {
                out.push(Violation {
                    hour: Some(h),
                    entity: format!("{g}"),
                    constraint: "solar_coverage",
                    slack: serve + delivered - dc_kwh,
                });
            }

            match esd {
                Some(e) => {
                    if charge > TOL && delivered > TOL {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "esd_exclusivity",
                            slack: num::min(charge, delivered),
                        });
                    }
                    if charge > e.max_charge_kwh_per_hour + tol_for(e.max_charge_kwh_per_hour) {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "esd_charge_rate",
                            slack: charge - e.max_charge_kwh_per_hour,
                        });
                    }
                    let drawn = delivered / e.eta_discharge;
                    if drawn
                        > e.max_discharge_kwh_per_hour + tol_for(e.max_discharge_kwh_per_hour)
                    {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "esd_discharge_rate",
                            slack: drawn - e.max_discharge_kwh_per_hour,
                        });
                    }
                    let expected = soc_prev + charge * e.eta_charge - drawn;
                    if num::abs(soc - expected) > tol_for(e.e_max_kwh) {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "soc_recurrence",
                            slack: num::abs(soc - expected),
                        });
                    }
                    if soc < -tol_for(e.e_max_kwh) || soc > e.e_max_kwh + tol_for(e.e_max_kwh) {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "soc_bounds",
                            slack: num::max(-soc, soc - e.e_max_kwh),
                        });
                    }
                    soc_prev = soc;
                }
                None => {
                    if charge > TOL || delivered > TOL || soc > TOL {
                        out.push(Violation {
                            hour: Some(h),
                            entity: format!("{g}"),
                            constraint: "esd_without_scenario",
                            slack: charge + delivered,
                        });
                    }
                }
            }
        }
        if let Some(e) = esd {
            if is_afdc && scenario.cyclic_esd {
                let end = trace.soc[gi * HOURS + HOURS - 1];
                if end < trace.initial_soc_kwh - tol_for(e.e_max_kwh) {
                    out.push(Violation {
                        hour: Some(HOURS - 1),
                        entity: format!("{g}"),
                        constraint: "cyclic_soc",
                        slack: trace.initial_soc_kwh - end,
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::DemandProfile;
    use crate::plan::{CoreFlow, PlacementPlan, SolarTrace};
    use crate::scenario::ScenarioConfig;
    use crate::topology::{CoreTopology, GroupId, SitePlacement};
    use alloc::vec;

    fn setup() -> (CoreTopology, DemandProfile, PowerParams, ScenarioConfig) {
        let topo = CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap();
        let mut demand = DemandProfile::zero(2);
        for h in 0..HOURS {
            demand.set(GroupId(0), h, 50.0);
            demand.set(GroupId(1), h, 50.0);
        }
        let params = PowerParams::default();
        let placement = SitePlacement::new(
            vec![NodeId(0)],
            vec![],
            vec![GroupId(0), GroupId(1)],
        );
        let scenario = ScenarioConfig::all_brown(placement);
        (topo, demand, params, scenario)
    }

    fn feasible_plan(
        topo: &CoreTopology,
        demand: &DemandProfile,
        p: &PowerParams,
    ) -> PlacementPlan {
        // Serve everything from the CDC at node 0 and attach honest flows.
        let mut plan = PlacementPlan::zero(topo.group_count(), 1);
        let mut flows = vec![];
        for h in 0..HOURS {
            for g in topo.groups() {
                plan.set_cdc(g, 0, h, demand.get(g, h));
            }
            let remote = demand.get(GroupId(1), h);
            if remote > 0.0 {
                flows.push(CoreFlow {
                    hour: h,
                    src: NodeId(0),
                    dst: NodeId(1),
                    gbps: remote,
                    wavelengths: wavelengths_for(remote, p) as u32,
                });
            }
        }
        plan.core_flows = flows;
        plan
    }

    #[test]
    fn feasible_plan_passes() {
        let (topo, demand, params, scenario) = setup();
        let plan = feasible_plan(&topo, &demand, &params);
        let v = verify_plan(&plan, &topo, &demand, &params, &scenario);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn shortfall_is_reported_per_cell() {
        let (topo, demand, params, scenario) = setup();
        let mut plan = feasible_plan(&topo, &demand, &params);
        // Serve only 90% of group 1's demand at hour 3.
        plan.set_cdc(GroupId(1), 0, 3, 45.0);
        let v = verify_plan(&plan, &topo, &demand, &params, &scenario);
        assert!(v
            .iter()
            .any(|x| x.constraint == "demand_satisfaction" && x.hour == Some(3)));
    }

    #[test]
    fn wavelength_deficit_detected() {
        let (topo, demand, params, scenario) = setup();
        let mut plan = feasible_plan(&topo, &demand, &params);
        for f in plan.core_flows.iter_mut() {
            f.wavelengths = 0;
        }
        let v = verify_plan(&plan, &topo, &demand, &params, &scenario);
        assert!(v.iter().any(|x| x.constraint == "wavelength_deficit"));
    }

    #[test]
    fn negative_soc_is_flagged_with_hour() {
        let (topo, demand, params, mut scenario) = setup();
        scenario.afdc_source = crate::scenario::AfdcSource::Solar {
            array: crate::energy::SolarArray::default(),
            profile: crate::energy::SolarProfile::zero(),
            esd: Some(crate::energy::EsdParams::default()),
        };
        let mut plan = feasible_plan(&topo, &demand, &params);
        let mut trace = SolarTrace::zero(2);
        trace.soc[7] = -1.0;
        plan.solar = Some(trace);
        let v = verify_plan(&plan, &topo, &demand, &params, &scenario);
        assert!(v
            .iter()
            .any(|x| x.constraint == "soc_bounds" && x.hour == Some(7)));
        // The jump back to zero at hour 8 breaks the recurrence too.
        assert!(v.iter().any(|x| x.constraint == "soc_recurrence"));
    }

    #[test]
    fn afdc_capacity_and_absence_checks() {
        let (topo, mut demand, params, scenario) = setup();
        for h in 0..HOURS {
            demand.set(GroupId(0), h, 200.0);
        }
        let mut plan = PlacementPlan::zero(2, 1);
        for h in 0..HOURS {
            plan.set_afdc(GroupId(0), h, 200.0); // above 158.4 and the link cap
            plan.set_cdc(GroupId(1), 0, h, demand.get(GroupId(1), h));
        }
        let v = verify_plan(&plan, &topo, &demand, &params, &scenario);
        assert!(v.iter().any(|x| x.constraint == "afdc_capacity"));
        assert!(v.iter().any(|x| x.constraint == "olt_afdc_link"));
        // Group 1's CDC traffic has no core flows attached.
        assert!(v
            .iter()
            .any(|x| x.constraint == "core_traffic_consistency"));
    }

    use crate::topology::NodeId;
}
