//! Parsers for solver solution files.
//!
//! Three dialects are recognized automatically:
//!
//! * **HiGHS** raw solution style (`--solution_file`): a `Model status`
//!   block, an `Objective <value>` line, then `# Columns <n>` followed by
//!   `<column> <value>` lines. Only the primal section is read.
//! * **CBC** (`solve solu <file>`): a first line like
//!   `Optimal - objective value 12.5`, then rows of
//!   `<index> <column> <value> <reduced cost>`. Run CBC with
//!   `printingOptions all` so zero columns are written too.
//! * **Generic**: any file of whitespace-separated `<column> <value>` lines
//!   (`#` comments allowed; a `=obj=` line may carry the objective), assumed
//!   feasible.
//!
//! Column names are the MPS identifiers (`C0000001`...), which derive from
//! the model alone, so parsing needs no side channel from emission.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::model::MilpModel;

/// What the solver reported about the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Stopped at the time limit; values, when present, are the incumbent.
    TimeLimit,
    Infeasible,
    Unbounded,
    Other(String),
}

/// A parsed solution: one value per model variable, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionValues {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    /// None when the solver produced no primal point (e.g. infeasible).
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolutionParseError {
    #[error("empty solution file")]
    Empty,
    #[error("malformed solution line: {0}")]
    BadLine(String),
    #[error("solution is missing variable {0}")]
    MissingVariable(String),
}

/// Parses a raw solution file against the model it solves.
pub fn parse_solution(
    raw: &str,
    model: &MilpModel,
) -> Result<SolutionValues, SolutionParseError> {
    if raw.trim().is_empty() {
        return Err(SolutionParseError::Empty);
    }
    let (status, objective, by_name) = if raw.contains("Model status") {
        parse_highs(raw)?
    } else if looks_like_cbc(raw) {
        parse_cbc(raw)?
    } else {
        parse_generic(raw)?
    };

    let values = match by_name {
        None => None,
        Some(map) => {
            let mut out = Vec::with_capacity(model.vars().len());
            for i in 0..model.vars().len() {
                let col = model.mps_col_name(super::model::VarId(i));
                match lookup(&map, &col) {
                    Some(v) => out.push(v),
                    None => {
                        return Err(SolutionParseError::MissingVariable(format!(
                            "{} ({})",
                            col,
                            model.vars()[i].name
                        )))
                    }
                }
            }
            Some(out)
        }
    };

    Ok(SolutionValues {
        status,
        objective,
        values,
    })
}

fn lookup(map: &[(String, f64)], name: &str) -> Option<f64> {
    map.binary_search_by(|(k, _)| k.as_str().cmp(name))
        .ok()
        .map(|i| map[i].1)
}

fn sort_map(mut map: Vec<(String, f64)>) -> Vec<(String, f64)> {
    map.sort_by(|(a, _), (b, _)| a.cmp(b));
    map.dedup_by(|(a, _), (b, _)| a == b);
    map
}

type Parsed = (SolveStatus, Option<f64>, Option<Vec<(String, f64)>>);

fn parse_highs(raw: &str) -> Result<Parsed, SolutionParseError> {
    let mut lines = raw.lines().peekable();
    let mut status = SolveStatus::Other("missing status".to_string());
    let mut objective = None;
    let mut map: Option<Vec<(String, f64)>> = None;
    while let Some(line) = lines.next() {
        let t = line.trim();
        if t == "Model status" {
            for s in lines.by_ref() {
                let s = s.trim();
                if !s.is_empty() {
                    status = match s {
                        "Optimal" => SolveStatus::Optimal,
                        "Infeasible" => SolveStatus::Infeasible,
                        "Unbounded" => SolveStatus::Unbounded,
                        "Time limit reached" => SolveStatus::TimeLimit,
                        other => SolveStatus::Other(other.to_string()),
                    };
                    break;
                }
            }
        } else if let Some(rest) = t.strip_prefix("Objective ") {
            objective = rest.trim().parse::<f64>().ok();
        } else if let Some(rest) = t.strip_prefix("# Columns ") {
            // First block only: the primal section comes before duals/basis.
            if map.is_some() {
                continue;
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| SolutionParseError::BadLine(line.to_string()))?;
            let mut entries = Vec::with_capacity(n);
            for _ in 0..n {
                let l = lines
                    .next()
                    .ok_or_else(|| SolutionParseError::BadLine("truncated columns".into()))?;
                let mut it = l.split_whitespace();
                let name = it
                    .next()
                    .ok_or_else(|| SolutionParseError::BadLine(l.to_string()))?;
                let value: f64 = it
                    .next()
                    .ok_or_else(|| SolutionParseError::BadLine(l.to_string()))?
                    .parse()
                    .map_err(|_| SolutionParseError::BadLine(l.to_string()))?;
                entries.push((name.to_string(), value));
            }
            map = Some(sort_map(entries));
            // Stop before the dual/basis sections repeat "# Columns".
            break;
        }
    }
    Ok((status, objective, map))
}

fn looks_like_cbc(raw: &str) -> bool {
    let first = raw.lines().next().unwrap_or("").trim_start();
    ["Optimal", "Infeasible", "Unbounded", "Stopped", "Integer infeasible"]
        .iter()
        .any(|p| first.starts_with(p))
}

fn parse_cbc(raw: &str) -> Result<Parsed, SolutionParseError> {
    let mut lines = raw.lines();
    let header = lines.next().ok_or(SolutionParseError::Empty)?.trim();
    let status = if header.starts_with("Optimal") {
        SolveStatus::Optimal
    } else if header.starts_with("Infeasible") || header.starts_with("Integer infeasible") {
        SolveStatus::Infeasible
    } else if header.starts_with("Unbounded") {
        SolveStatus::Unbounded
    } else if header.starts_with("Stopped on time") {
        SolveStatus::TimeLimit
    } else {
        SolveStatus::Other(header.to_string())
    };
    let objective = header
        .rsplit("objective value")
        .next()
        .and_then(|s| s.trim().parse::<f64>().ok());
    if matches!(status, SolveStatus::Infeasible | SolveStatus::Unbounded) {
        return Ok((status, objective, None));
    }
    let mut entries = Vec::new();
    for line in lines {
        let t = line.trim_start().trim_start_matches("**").trim_start();
        if t.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        // <index> <name> <value> [<reduced cost>]
        if tokens.len() < 3 || tokens[0].parse::<usize>().is_err() {
            return Err(SolutionParseError::BadLine(line.to_string()));
        }
        let value: f64 = tokens[2]
            .parse()
            .map_err(|_| SolutionParseError::BadLine(line.to_string()))?;
        entries.push((tokens[1].to_string(), value));
    }
    Ok((status, objective, Some(sort_map(entries))))
}

fn parse_generic(raw: &str) -> Result<Parsed, SolutionParseError> {
    let mut entries = Vec::new();
    let mut objective = None;
    for line in raw.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with(';') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(SolutionParseError::BadLine(line.to_string()));
        }
        let value: f64 = tokens[1]
            .parse()
            .map_err(|_| SolutionParseError::BadLine(line.to_string()))?;
        if tokens[0] == "=obj=" {
            objective = Some(value);
        } else {
            entries.push((tokens[0].to_string(), value));
        }
    }
    if entries.is_empty() {
        return Err(SolutionParseError::Empty);
    }
    Ok((SolveStatus::Optimal, objective, Some(sort_map(entries))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{MilpModel, Sense, VarKind};

    fn model_xy() -> MilpModel {
        let mut m = MilpModel::new("T");
        let x = m.add_var("x".into(), VarKind::Continuous, 0.0, 10.0, 1.0);
        let y = m.add_var("y".into(), VarKind::Integer, 0.0, 5.0, 1.0);
        m.add_con("c".into(), Sense::Ge, 2.0, vec![(x, 1.0), (y, 1.0)]);
        m
    }

    #[test]
    fn parses_highs_raw_dialect() {
        let raw = "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective 2\n# Columns 2\nC0000001 1.5\nC0000002 0.5\n# Rows 1\nR0000001 2\n\n# Dual solution values\nNone\n";
        let sol = parse_solution(raw, &model_xy()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, Some(2.0));
        assert_eq!(sol.values, Some(vec![1.5, 0.5]));
    }

    #[test]
    fn parses_highs_infeasible() {
        let raw = "Model status\nInfeasible\n\n# Primal solution values\nNone\n";
        let sol = parse_solution(raw, &model_xy()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert_eq!(sol.values, None);
    }

    #[test]
    fn parses_cbc_dialect() {
        let raw = "Optimal - objective value 2.00000000\n      0 C0000001 1.5 0\n      1 C0000002 0.5 0\n";
        let sol = parse_solution(raw, &model_xy()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, Some(2.0));
        assert_eq!(sol.values, Some(vec![1.5, 0.5]));
    }

    #[test]
    fn parses_generic_pairs() {
        let raw = "# anything\nC0000002 3\nC0000001 0\n=obj= 3\n";
        let sol = parse_solution(raw, &model_xy()).unwrap();
        assert_eq!(sol.values, Some(vec![0.0, 3.0]));
        assert_eq!(sol.objective, Some(3.0));
    }

    #[test]
    fn truncated_file_names_first_missing_variable() {
        let raw = "Model status\nOptimal\nObjective 2\n# Columns 1\nC0000001 2\n";
        let err = parse_solution(raw, &model_xy()).unwrap_err();
        match err {
            SolutionParseError::MissingVariable(name) => {
                assert!(name.contains("C0000002"), "{name}");
                assert!(name.contains('y'), "{name}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
