//! Build -> emit -> solve -> extract -> verify, as one reusable pipeline.

use greenvod_core::milp::{build_model, emit_mps, extract_plan, BuildError, ExtractError};
use greenvod_core::power::{evaluate_plan, DailyBreakdown, PowerError};
use greenvod_core::verify::{verify_plan, Violation};
use greenvod_core::{
    heuristic, CoreTopology, DemandProfile, PlacementPlan, PowerParams, ScenarioConfig,
};

use crate::solver::{solve_model, SolverCommand, SolverError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Heuristic(#[from] heuristic::HeuristicError),
    #[error("solver returned no primal values")]
    NoValues,
}

/// A solved (or greedily placed) scenario with its power picture and the
/// verifier's verdict.
#[derive(Debug)]
pub struct Outcome {
    pub plan: PlacementPlan,
    pub breakdown: DailyBreakdown,
    pub violations: Vec<Violation>,
    /// Objective the solver reported, when one ran.
    pub solver_objective: Option<f64>,
}

/// One scenario instance: everything needed to optimize and evaluate it.
pub struct Instance<'a> {
    pub topo: &'a CoreTopology,
    pub demand: &'a DemandProfile,
    pub params: &'a PowerParams,
    pub scenario: &'a ScenarioConfig,
}

impl Instance<'_> {
    /// Optimize with the external solver.
    pub fn solve(
        &self,
        command: &SolverCommand,
        time_limit_s: u64,
    ) -> Result<Outcome, PipelineError> {
        let model = build_model(self.topo, self.demand, self.params, self.scenario)?;
        let mps = emit_mps(&model);
        let solution = solve_model(&model, &mps.text, command, time_limit_s)?;
        let values = solution.values.as_deref().ok_or(PipelineError::NoValues)?;
        let plan = extract_plan(&model, self.topo, values)?;
        self.finish(plan, solution.objective)
    }

    /// Place with the greedy baseline instead of a solver.
    pub fn greedy(&self) -> Result<Outcome, PipelineError> {
        let plan =
            heuristic::greedy_place(self.topo, self.demand, self.params, self.scenario)?;
        self.finish(plan, None)
    }

    fn finish(
        &self,
        plan: PlacementPlan,
        solver_objective: Option<f64>,
    ) -> Result<Outcome, PipelineError> {
        let breakdown = evaluate_plan(&plan, self.topo, self.params, self.scenario)?;
        let violations = verify_plan(&plan, self.topo, self.demand, self.params, self.scenario);
        Ok(Outcome {
            plan,
            breakdown,
            violations,
            solver_objective,
        })
    }
}
