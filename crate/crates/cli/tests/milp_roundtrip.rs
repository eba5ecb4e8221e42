//! End-to-end checks of the optimizer path against a real solver:
//! build -> MPS -> solve -> parse -> extract -> verify, cross-checked with
//! the lattice oracle and the plan evaluator.

use greenvod_cli::pipeline::Instance;
use greenvod_cli::solver::SolverCommand;
use greenvod_core::demand::DemandProfile;
use greenvod_core::energy::HOURS;
use greenvod_core::heuristic::{brute_force, greedy_place};
use greenvod_core::power::evaluate_plan;
use greenvod_core::topology::{CoreTopology, GroupId, NodeId, SitePlacement};
use greenvod_core::{PowerParams, ScenarioConfig};

fn solver() -> SolverCommand {
    SolverCommand::resolve(None).expect("a MILP solver (highs or cbc) must be on PATH for tests")
}

fn tiny_setup(demand_gbps: f64) -> (CoreTopology, DemandProfile, PowerParams, ScenarioConfig) {
    let topo = CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap();
    let mut demand = DemandProfile::zero(2);
    for h in 0..HOURS {
        demand.set(GroupId(0), h, demand_gbps);
        demand.set(GroupId(1), h, demand_gbps);
    }
    let params = PowerParams::default();
    let placement = SitePlacement::new(
        vec![NodeId(0)],
        vec![NodeId(0)],
        vec![GroupId(0), GroupId(1)],
    );
    let scenario = ScenarioConfig::all_brown(placement);
    (topo, demand, params, scenario)
}

#[test]
fn zero_demand_solves_to_zero() {
    let (topo, _, params, scenario) = tiny_setup(0.0);
    let demand = DemandProfile::zero(2);
    let instance = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &scenario,
    };
    let outcome = instance.solve(&solver(), 60).unwrap();
    assert!(outcome.violations.is_empty(), "{:?}", outcome.violations);
    assert!(outcome.plan.objective_kwh.abs() < 1e-9);
}

#[test]
fn solver_matches_oracle_and_evaluator_on_tiny_instance() {
    let topo = CoreTopology::from_edges(2, &[(0, 1, 800.0)]).unwrap();
    let mut demand = DemandProfile::zero(2);
    demand.set(GroupId(0), 2, 3.6);
    demand.set(GroupId(1), 2, 1.8);
    demand.set(GroupId(1), 3, 5.4);
    let params = PowerParams::default();
    let placement = SitePlacement::new(
        vec![NodeId(0)],
        vec![NodeId(0)],
        vec![GroupId(0), GroupId(1)],
    );
    let scenario = ScenarioConfig::all_brown(placement);

    let instance = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &scenario,
    };
    let outcome = instance.solve(&solver(), 60).unwrap();
    assert!(outcome.violations.is_empty(), "{:?}", outcome.violations);

    // Solver objective, model objective and the independent evaluator agree.
    let reported = outcome.solver_objective.expect("objective reported");
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-9);
    assert!(
        rel(reported, outcome.plan.objective_kwh) < 1e-6,
        "reported {reported} vs model {}",
        outcome.plan.objective_kwh
    );
    let eval = evaluate_plan(&outcome.plan, &topo, &params, &scenario).unwrap();
    assert!(
        rel(eval.traffic_brown_kwh(), outcome.plan.objective_kwh) < 1e-6,
        "evaluator {} vs model {}",
        eval.traffic_brown_kwh(),
        outcome.plan.objective_kwh
    );

    // The exhaustive lattice oracle agrees with the optimizer.
    let exact = brute_force(&topo, &demand, &params, &scenario, 1.8).unwrap();
    assert!(
        rel(exact.objective_kwh, outcome.plan.objective_kwh) < 1e-6,
        "oracle {} vs milp {}",
        exact.objective_kwh,
        outcome.plan.objective_kwh
    );

    // Optimality sandwich: milp <= greedy.
    let greedy = greedy_place(&topo, &demand, &params, &scenario).unwrap();
    assert!(outcome.plan.objective_kwh <= greedy.objective_kwh + 1e-9);
}

#[test]
fn equal_pue_optimum_serves_from_afdc() {
    let (topo, demand, params, scenario) = tiny_setup(90.0);
    let instance = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &scenario,
    };
    let outcome = instance.solve(&solver(), 120).unwrap();
    assert!(outcome.violations.is_empty(), "{:?}", outcome.violations);
    for g in topo.groups() {
        for h in 0..HOURS {
            assert!(
                (outcome.plan.afdc(g, h) - 90.0).abs() < 1e-6,
                "expected full AFDC service for {g} h{h}, got {}",
                outcome.plan.afdc(g, h)
            );
        }
    }
}

#[test]
fn infeasible_demand_reports_infeasible() {
    let (topo, mut demand, params, scenario) = tiny_setup(0.0);
    for h in 0..HOURS {
        demand.set(GroupId(0), h, 400.0); // beyond afdc + olt capacity
    }
    let instance = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &scenario,
    };
    let err = instance.solve(&solver(), 60).unwrap_err();
    let msg = format!("{err}");
    assert!(msg.contains("infeasible"), "{msg}");
}

#[test]
fn solar_esd_instance_solves_verifies_and_uses_battery() {
    use greenvod_core::energy::{EsdParams, SolarArray, SolarProfile};
    use greenvod_core::AfdcSource;

    let (topo, mut demand, params, mut scenario) = tiny_setup(0.0);
    for h in 0..HOURS {
        demand.set(GroupId(0), h, 90.0);
        demand.set(GroupId(1), h, 90.0);
    }
    scenario.cdc_source = greenvod_core::TierSource::Renewable;
    scenario.mfdc_source = greenvod_core::TierSource::Renewable;
    scenario.afdc_source = AfdcSource::Solar {
        array: SolarArray::default(),
        profile: SolarProfile::default_half_sine(),
        esd: Some(EsdParams::default()),
    };

    let instance = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &scenario,
    };
    let outcome = instance.solve(&solver(), 300).unwrap();
    assert!(outcome.violations.is_empty(), "{:?}", outcome.violations);
    let trace = outcome.plan.solar.as_ref().expect("solar trace");
    let charged: f64 = trace.charge.iter().sum();
    let delivered: f64 = trace.discharge_delivered.iter().sum();
    assert!(charged > 0.0, "optimizer should bank surplus solar");
    assert!(delivered > 0.0, "optimizer should discharge the bank");

    // Adding the battery can only help. Compare with the same scenario
    // without storage.
    let mut no_esd = scenario.clone();
    no_esd.afdc_source = AfdcSource::Solar {
        array: SolarArray::default(),
        profile: SolarProfile::default_half_sine(),
        esd: None,
    };
    let base = Instance {
        topo: &topo,
        demand: &demand,
        params: &params,
        scenario: &no_esd,
    }
    .solve(&solver(), 300)
    .unwrap();
    assert!(
        outcome.plan.objective_kwh <= base.plan.objective_kwh + 1e-6,
        "esd {} vs none {}",
        outcome.plan.objective_kwh,
        base.plan.objective_kwh
    );
}
