//! Deterministic fixed-format MPS emission.
//!
//! Field layout (1-indexed columns): field 1 at 2-3, field 2 at 5-12,
//! field 3 at 15-22, field 4 at 25-36, field 5 at 40-47, field 6 at 50-61.
//! Rows are named `R0000001`.. and columns `C0000001`.. in declaration
//! order, so the 8-character MPS limit can never collide; the name map ties
//! each short identifier back to its descriptive model name. Integer
//! variables sit in a single block between `INTORG`/`INTEND` markers with
//! explicit bounds (some readers default unmarked integers to an upper bound
//! of one). Identical models emit byte-identical text.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::model::{MilpModel, Sense, VarId, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Row,
    Column,
}

/// One entry of the short-name to model-name map emitted alongside the MPS
/// text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameMapEntry {
    pub kind: NameKind,
    pub mps_name: String,
    pub full_name: String,
}

/// An emitted model: the MPS text plus the sidecar name map.
#[derive(Debug, Clone)]
pub struct MpsFile {
    pub text: String,
    pub name_map: Vec<NameMapEntry>,
}

/// Formats a number to fit the 12-character MPS value field. Values whose
/// shortest round-trip form fits are emitted exactly; otherwise the shortest
/// decimal within 1e-9 relative is used, falling back to scientific notation
/// (at most ~1e-7 relative error, which only pathological parameter choices
/// can trigger).
pub(crate) fn format_mps_number(v: f64) -> String {
    let shortest = format_shortest(v);
    if shortest.len() <= 12 {
        return shortest;
    }
    for precision in 1..=9 {
        let s = format!("{:.*}", precision, v);
        if s.len() <= 12 {
            if let Ok(parsed) = s.parse::<f64>() {
                if (parsed - v).abs() <= 1e-9 * v.abs().max(1.0) {
                    return s;
                }
            }
        }
    }
    format!("{:.6e}", v)
}

fn format_shortest(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{}", v);
    s
}

fn columns_line(f2: &str, f3: &str, f4: &str, f5: Option<(&str, &str)>) -> String {
    let mut line = format!("    {:<8}  {:<8}  {:<12}", f2, f3, f4);
    if let Some((r, v)) = f5 {
        line = format!("{}   {:<8}  {:<12}", line, r, v);
    }
    line.trim_end().to_string()
}

/// Emits the model as fixed-format MPS with a name-map sidecar.
pub fn emit_mps(model: &MilpModel) -> MpsFile {
    let mut name_map = Vec::new();
    let mut text = String::new();
    text.push_str(&format!("NAME          {}\n", model.name));

    // ROWS
    text.push_str("ROWS\n");
    text.push_str(" N  COST\n");
    for (i, con) in model.cons().iter().enumerate() {
        let key = match con.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let row = model.mps_row_name(i);
        text.push_str(&format!(" {}  {}\n", key, row));
        name_map.push(NameMapEntry {
            kind: NameKind::Row,
            mps_name: row,
            full_name: con.name.clone(),
        });
    }

    // Transpose: per-variable constraint entries, in row order.
    let mut entries: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); model.vars().len()];
    for (row, con) in model.cons().iter().enumerate() {
        for &(var, coef) in &con.terms {
            entries[var.0].push((row, coef));
        }
    }

    // COLUMNS: continuous block, then one integer block.
    text.push_str("COLUMNS\n");
    let order: Vec<VarId> = {
        let mut continuous = Vec::new();
        let mut integers = Vec::new();
        for (i, v) in model.vars().iter().enumerate() {
            match v.kind {
                VarKind::Continuous => continuous.push(VarId(i)),
                VarKind::Integer | VarKind::Binary => integers.push(VarId(i)),
            }
        }
        continuous.extend(integers);
        continuous
    };
    let mut in_integer_block = false;
    for id in order {
        let var = model.var(id);
        let col = model.mps_col_name(id);
        name_map.push(NameMapEntry {
            kind: NameKind::Column,
            mps_name: col.clone(),
            full_name: var.name.clone(),
        });
        let is_int = matches!(var.kind, VarKind::Integer | VarKind::Binary);
        if is_int && !in_integer_block {
            text.push_str(&columns_line("MARKER", "'MARKER'", "'INTORG'", None));
            text.push('\n');
            in_integer_block = true;
        }
        let mut pairs: Vec<(String, String)> = Vec::new();
        if var.obj != 0.0 {
            pairs.push(("COST".to_string(), format_mps_number(var.obj)));
        }
        for &(row, coef) in &entries[id.0] {
            pairs.push((model.mps_row_name(row), format_mps_number(coef)));
        }
        let mut it = pairs.chunks(2);
        for chunk in &mut it {
            let line = match chunk {
                [(r1, v1), (r2, v2)] => {
                    columns_line(&col, r1, v1, Some((r2.as_str(), v2.as_str())))
                }
                [(r1, v1)] => columns_line(&col, r1, v1, None),
                _ => unreachable!(),
            };
            text.push_str(&line);
            text.push('\n');
        }
    }
    if in_integer_block {
        text.push_str(&columns_line("MARKER", "'MARKER'", "'INTEND'", None));
        text.push('\n');
    }

    // RHS
    text.push_str("RHS\n");
    for (i, con) in model.cons().iter().enumerate() {
        if con.rhs != 0.0 {
            text.push_str(&columns_line(
                "RHS",
                &model.mps_row_name(i),
                &format_mps_number(con.rhs),
                None,
            ));
            text.push('\n');
        }
    }

    // BOUNDS (no RANGES section: the model never uses ranged rows).
    text.push_str("BOUNDS\n");
    for (i, var) in model.vars().iter().enumerate() {
        let col = model.mps_col_name(VarId(i));
        match var.kind {
            VarKind::Binary => {
                text.push_str(&format!(" BV {:<8}  {}\n", "BND", col));
            }
            VarKind::Integer => {
                if var.lb != 0.0 {
                    text.push_str(&format!(
                        " LI {:<8}  {:<8}  {}\n",
                        "BND",
                        col,
                        format_mps_number(var.lb)
                    ));
                }
                text.push_str(&format!(
                    " UI {:<8}  {:<8}  {}\n",
                    "BND",
                    col,
                    format_mps_number(var.ub)
                ));
            }
            VarKind::Continuous => {
                if var.ub == 0.0 && var.lb == 0.0 {
                    text.push_str(&format!(" FX {:<8}  {:<8}  0\n", "BND", col));
                } else {
                    if var.lb != 0.0 {
                        text.push_str(&format!(
                            " LO {:<8}  {:<8}  {}\n",
                            "BND",
                            col,
                            format_mps_number(var.lb)
                        ));
                    }
                    if var.ub.is_finite() {
                        text.push_str(&format!(
                            " UP {:<8}  {:<8}  {}\n",
                            "BND",
                            col,
                            format_mps_number(var.ub)
                        ));
                    }
                }
            }
        }
    }
    text.push_str("ENDATA\n");

    MpsFile { text, name_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{MilpModel, Sense, VarKind};
    use alloc::string::ToString;
    use alloc::vec;

    fn one_var_model() -> MilpModel {
        // min x subject to x >= 1, x >= 0.
        let mut m = MilpModel::new("TINY");
        let x = m.add_var("x".to_string(), VarKind::Continuous, 0.0, f64::INFINITY, 1.0);
        m.add_con("floor".to_string(), Sense::Ge, 1.0, vec![(x, 1.0)]);
        m
    }

    #[test]
    fn rhs_has_exactly_one_entry() {
        let mps = emit_mps(&one_var_model());
        let rhs_section: Vec<&str> = mps
            .text
            .lines()
            .skip_while(|l| *l != "RHS")
            .skip(1)
            .take_while(|l| *l != "BOUNDS")
            .collect();
        assert_eq!(rhs_section.len(), 1);
        assert!(rhs_section[0].contains("R0000001"));
        assert!(rhs_section[0].ends_with('1'));
    }

    #[test]
    fn integer_vars_sit_between_markers() {
        let mut m = MilpModel::new("TINY2");
        let x = m.add_var("flow".to_string(), VarKind::Continuous, 0.0, 10.0, 1.0);
        let w = m.add_var("waves".to_string(), VarKind::Integer, 0.0, 4.0, 2.0);
        m.add_con("link".to_string(), Sense::Ge, 0.0, vec![(w, 40.0), (x, -1.0)]);
        let mps = emit_mps(&m);
        let lines: Vec<&str> = mps.text.lines().collect();
        let intorg = lines.iter().position(|l| l.contains("'INTORG'")).unwrap();
        let intend = lines.iter().position(|l| l.contains("'INTEND'")).unwrap();
        let w_line = lines
            .iter()
            .position(|l| l.starts_with("    C0000002"))
            .unwrap();
        assert!(intorg < w_line && w_line < intend);
        // Integer bound is explicit.
        assert!(mps.text.contains(" UI BND       C0000002  4"));
    }

    #[test]
    fn emission_is_byte_identical_across_runs() {
        let a = emit_mps(&one_var_model()).text;
        let b = emit_mps(&one_var_model()).text;
        assert_eq!(a, b);
    }

    #[test]
    fn golden_tiny_model_layout() {
        let mps = emit_mps(&one_var_model());
        let expected = "NAME          TINY\n\
                        ROWS\n \
                        N  COST\n \
                        G  R0000001\n\
                        COLUMNS\n\
                        \x20   C0000001  COST      1              R0000001  1\n\
                        RHS\n\
                        \x20   RHS       R0000001  1\n\
                        BOUNDS\n\
                        ENDATA\n";
        assert_eq!(mps.text, expected);
        // Fixed-format fields: row name of the second pair starts at column
        // 40 (0-indexed 39) and its value at column 50.
        let line = mps.text.lines().nth(5).unwrap();
        assert_eq!(&line[39..47], "R0000001");
        assert_eq!(&line[49..], "1");
        assert_eq!(mps.name_map.len(), 2);
        assert_eq!(mps.name_map[1].full_name, "x");
    }

    #[test]
    fn number_formatting_fits_twelve_chars() {
        assert_eq!(format_mps_number(3.351), "3.351");
        assert_eq!(format_mps_number(0.7225), "0.7225");
        assert_eq!(format_mps_number(-1.0), "-1");
        assert_eq!(format_mps_number(158.4), "158.4");
        let third = 1.0 / 3.0;
        let s = format_mps_number(third);
        assert!(s.len() <= 12, "{s}");
        assert!((s.parse::<f64>().unwrap() - third).abs() <= 1e-9);
        let awkward = 1.1 * 300.0 / 1000.0;
        let s = format_mps_number(awkward);
        assert!(s.len() <= 12, "{s}");
        assert!((s.parse::<f64>().unwrap() - awkward).abs() <= 1e-9 * awkward);
    }
}
