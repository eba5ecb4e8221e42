//! From solver values to a [`PlacementPlan`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::energy::HOURS;
use crate::plan::{CoreFlow, PlacementPlan, SolarTrace};
use crate::topology::{CoreTopology, GroupId, NodeId};

use super::model::{MilpModel, VarId, VarKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtractError {
    #[error("value vector has {got} entries, model has {expected} variables")]
    LengthMismatch { got: usize, expected: usize },
    #[error("integer variable {name} = {value} violates the 1e-6 integrality tolerance")]
    Integrality { name: String, value: f64 },
}

const INTEGRALITY_TOL: f64 = 1e-6;

/// Interprets a solution vector as a plan. Integer variables must be within
/// 1e-6 of integrality and are rounded; continuous dust below 1e-9 is
/// cleaned to zero. The plan's objective is the model's own objective
/// evaluated at the assignment, so it never depends on what the solver
/// chose to report.
pub fn extract_plan(
    model: &MilpModel,
    topo: &CoreTopology,
    values: &[f64],
) -> Result<PlacementPlan, ExtractError> {
    if values.len() != model.vars().len() {
        return Err(ExtractError::LengthMismatch {
            got: values.len(),
            expected: model.vars().len(),
        });
    }
    for (i, (var, &v)) in model.vars().iter().zip(values).enumerate() {
        if matches!(var.kind, VarKind::Integer | VarKind::Binary) {
            let nearest = libm::round(v);
            if libm::fabs(v - nearest) > INTEGRALITY_TOL * (1.0 + libm::fabs(v)) {
                return Err(ExtractError::Integrality {
                    name: format!("{} ({})", model.mps_col_name(VarId(i)), var.name),
                    value: v,
                });
            }
        }
    }

    let layout = &model.layout;
    let groups = layout.group_count;
    let cdc_count = layout.cdc_nodes.len();
    let mut plan = PlacementPlan::zero(groups, cdc_count);

    // Solver feasibility tolerances leave dust around zero; anything within
    // the verifier's 1e-6 band of zero from below is noise, not a decision.
    let clean = |v: f64| {
        if (v < 0.0 && v >= -1e-6) || libm::fabs(v) < 1e-9 {
            0.0
        } else {
            v
        }
    };

    for (&(g, h), &id) in &layout.x_afdc {
        plan.set_afdc(GroupId(g), h, clean(values[id.0]));
    }
    for (&(g, h), &id) in &layout.x_mfdc {
        plan.set_mfdc(GroupId(g), h, clean(values[id.0]));
    }
    for (&(g, c, h), &id) in &layout.x_cdc {
        plan.set_cdc(GroupId(g), c, h, clean(values[id.0]));
    }

    // Core flows: traffic recomputed from the serving split, wavelength
    // counts taken from the solver's integers.
    let mut flows: Vec<CoreFlow> = Vec::new();
    for (&(src, dst, h), &wid) in &layout.wavelengths {
        let w = libm::round(values[wid.0]) as u32;
        let c = layout
            .cdc_nodes
            .iter()
            .position(|n| n.0 == src)
            .expect("wavelength pair sources are CDC nodes");
        let gbps: f64 = topo
            .groups_at(NodeId(dst))
            .map(|g| plan.cdc(g, c, h))
            .sum();
        if w > 0 || gbps > 0.0 {
            flows.push(CoreFlow {
                hour: h,
                src: NodeId(src),
                dst: NodeId(dst),
                gbps,
                wavelengths: w,
            });
        }
    }
    flows.sort_by_key(|f| (f.hour, f.src, f.dst));
    plan.core_flows = flows;

    if !layout.solar_serve.is_empty() {
        let mut trace = SolarTrace::zero(groups);
        trace.initial_soc_kwh = layout.initial_soc_kwh;
        for (&(g, h), &id) in &layout.solar_serve {
            trace.serve[g * HOURS + h] = clean(values[id.0]);
        }
        for (&(g, h), &id) in &layout.solar_charge {
            trace.charge[g * HOURS + h] = clean(values[id.0]);
        }
        for (&(g, h), &id) in &layout.solar_curtail {
            trace.curtail[g * HOURS + h] = clean(values[id.0]);
        }
        for (&(g, h), &id) in &layout.esd_drawn {
            trace.discharge_delivered[g * HOURS + h] = clean(values[id.0] * layout.eta_discharge);
        }
        for (&(g, h), &id) in &layout.esd_soc {
            trace.soc[g * HOURS + h] = clean(values[id.0]);
        }
        plan.solar = Some(trace);
    }

    plan.objective_kwh = model.objective_of(values);
    Ok(plan)
}
