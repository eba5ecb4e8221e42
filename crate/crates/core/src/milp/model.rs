//! In-memory representation of the mixed-integer linear program: named
//! variables with bounds and objective coefficients, and named linear
//! constraints. The layout maps every decision back to its domain meaning so
//! solutions can be turned into plans.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::topology::NodeId;

/// Index of a variable within its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lb: f64,
    pub ub: f64,
    pub obj: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub sense: Sense,
    pub rhs: f64,
    /// (variable, coefficient); zero coefficients are never stored.
    pub terms: Vec<(VarId, f64)>,
}

/// Where each decision family lives in the variable vector. Keys are
/// `(group, hour)`, `(group, cdc index, hour)`, `(src, dst, hour)` or
/// `(node, hour)` as appropriate.
#[derive(Debug, Clone, Default)]
pub struct Layout {
    pub x_afdc: BTreeMap<(usize, usize), VarId>,
    pub x_mfdc: BTreeMap<(usize, usize), VarId>,
    pub x_cdc: BTreeMap<(usize, usize, usize), VarId>,
    pub wavelengths: BTreeMap<(usize, usize, usize), VarId>,
    pub metro_ports: BTreeMap<(usize, usize), VarId>,
    pub metro_switches: BTreeMap<(usize, usize), VarId>,
    pub olt_count: BTreeMap<(usize, usize), VarId>,
    pub afdc_servers: BTreeMap<(usize, usize), VarId>,
    pub afdc_switches: BTreeMap<(usize, usize), VarId>,
    pub afdc_ports: BTreeMap<(usize, usize), VarId>,
    pub mfdc_servers: BTreeMap<(usize, usize), VarId>,
    pub mfdc_switches: BTreeMap<(usize, usize), VarId>,
    pub mfdc_ports: BTreeMap<(usize, usize), VarId>,
    pub cdc_servers: BTreeMap<(usize, usize), VarId>,
    pub cdc_switches: BTreeMap<(usize, usize), VarId>,
    pub cdc_ports: BTreeMap<(usize, usize), VarId>,
    pub solar_serve: BTreeMap<(usize, usize), VarId>,
    pub solar_charge: BTreeMap<(usize, usize), VarId>,
    pub solar_curtail: BTreeMap<(usize, usize), VarId>,
    pub esd_drawn: BTreeMap<(usize, usize), VarId>,
    pub esd_soc: BTreeMap<(usize, usize), VarId>,
    pub esd_mode: BTreeMap<(usize, usize), VarId>,
    /// CDC index -> core node, in plan order.
    pub cdc_nodes: Vec<NodeId>,
    pub group_count: usize,
    pub eta_discharge: f64,
    pub initial_soc_kwh: f64,
    /// Per-hour solar generation of one AFDC array, kWh.
    pub generation_kwh: Vec<f64>,
}

/// A built optimization model, ready for MPS emission.
#[derive(Debug, Clone)]
pub struct MilpModel {
    pub name: String,
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    pub layout: Layout,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("constraint {constraint} references undeclared variable index {var}")]
    UndeclaredVariable { constraint: String, var: usize },
    #[error("variable {0} has lb > ub")]
    EmptyBounds(String),
    #[error("integer variable {0} has no finite upper bound")]
    UnboundedInteger(String),
}

impl MilpModel {
    pub fn new(name: &str) -> Self {
        Self {
            name: String::from(name),
            vars: Vec::new(),
            cons: Vec::new(),
            layout: Layout::default(),
        }
    }

    pub fn add_var(&mut self, name: String, kind: VarKind, lb: f64, ub: f64, obj: f64) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            name,
            kind,
            lb,
            ub,
            obj,
        });
        id
    }

    pub fn add_con(
        &mut self,
        name: String,
        sense: Sense,
        rhs: f64,
        terms: Vec<(VarId, f64)>,
    ) {
        let terms = terms.into_iter().filter(|(_, c)| *c != 0.0).collect();
        self.cons.push(Constraint {
            name,
            sense,
            rhs,
            terms,
        });
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn cons(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    /// MPS column identifier for a variable; stable under re-emission because
    /// it depends only on the declaration index.
    pub fn mps_col_name(&self, id: VarId) -> String {
        format!("C{:07}", id.0 + 1)
    }

    /// MPS row identifier for a constraint.
    pub fn mps_row_name(&self, index: usize) -> String {
        format!("R{:07}", index + 1)
    }

    /// Objective value of an assignment under this model's coefficients.
    pub fn objective_of(&self, values: &[f64]) -> f64 {
        self.vars
            .iter()
            .zip(values)
            .map(|(v, x)| v.obj * x)
            .sum()
    }

    /// Structural invariants: every referenced variable exists, bounds are
    /// non-empty, and every integer variable is finitely bounded.
    pub fn check(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if v.lb > v.ub {
                return Err(ModelError::EmptyBounds(v.name.clone()));
            }
            if matches!(v.kind, VarKind::Integer | VarKind::Binary) && !v.ub.is_finite() {
                return Err(ModelError::UnboundedInteger(v.name.clone()));
            }
        }
        for c in &self.cons {
            for &(var, _) in &c.terms {
                if var.0 >= self.vars.len() {
                    return Err(ModelError::UndeclaredVariable {
                        constraint: c.name.clone(),
                        var: var.0,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn integer_count(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| matches!(v.kind, VarKind::Integer | VarKind::Binary))
            .count()
    }
}
