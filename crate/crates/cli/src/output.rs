//! CSV and JSON serialization with fixed formatting: 17 significant digits,
//! `.` as decimal separator and LF line endings.

use std::fmt::Write;

use qmirror::MinkowskiScan;

use crate::config::Format;
use crate::scenario::{LimitRecord, RunRecord};
use crate::sweep::SweepRow;

/// A value in an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => num(*v),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_field(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => num(*v),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => json_string(s),
        Cell::Empty => "null".into(),
    }
}

/// Renders a table as CSV (header plus rows) or as a JSON array of objects.
pub fn table(format: Format, header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                let fields: Vec<String> = row.iter().map(csv_field).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            out.push_str("[\n");
            for (i, row) in rows.iter().enumerate() {
                out.push_str(&object(header, row, "  "));
                out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
            }
            out.push_str("]\n");
        }
    }
    out
}

fn object(header: &[&str], row: &[Cell], indent: &str) -> String {
    let fields: Vec<String> = header
        .iter()
        .zip(row)
        .map(|(k, v)| format!("{indent}  {}: {}", json_string(k), json_field(v)))
        .collect();
    format!("{indent}{{\n{}\n{indent}}}", fields.join(",\n"))
}

pub const RUN_HEADER: [&str; 10] = [
    "entropy_bits",
    "purity",
    "product_fidelity",
    "displaced_marginal_fidelity",
    "kick",
    "kick_expected",
    "conservation_residual",
    "g",
    "converged",
    "aliased",
];

pub fn run_record(format: Format, r: &RunRecord) -> String {
    let row = vec![
        Cell::Num(r.entropy_bits),
        Cell::Num(r.purity),
        Cell::Num(r.product_fidelity),
        Cell::Num(r.displaced_marginal_fidelity),
        Cell::Num(r.kick),
        Cell::Num(r.kick_expected),
        Cell::Num(r.conservation_residual),
        Cell::Num(r.g),
        Cell::Bool(r.converged),
        Cell::Bool(r.aliased),
    ];
    match format {
        Format::Csv => table(format, &RUN_HEADER, &[row]),
        Format::Json => object(&RUN_HEADER, &row, "") + "\n",
    }
}

pub const SWEEP_HEADER: [&str; 8] = ["axis", "value", "entropy_bits", "purity", "kick", "residual", "g", "error"];

pub fn sweep(format: Format, rows: &[SweepRow]) -> String {
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|row| {
            let mut cells = vec![Cell::Text(row.axis.name().into()), Cell::Num(row.value)];
            match &row.record {
                Some(r) => cells.extend([
                    Cell::Num(r.entropy_bits),
                    Cell::Num(r.purity),
                    Cell::Num(r.kick),
                    Cell::Num(r.conservation_residual),
                    Cell::Num(r.g),
                ]),
                None => cells.extend(std::iter::repeat_n(Cell::Empty, 5)),
            }
            cells.push(row.error.clone().map_or(Cell::Empty, Cell::Text));
            cells
        })
        .collect();
    table(format, &SWEEP_HEADER, &cells)
}

pub const LIMITS_HEADER: [&str; 10] = [
    "limit",
    "sigma_x_over_lambda",
    "frac_bandwidth",
    "purity",
    "oracle_purity",
    "product_fidelity",
    "displaced_marginal_fidelity",
    "entropy_bits",
    "g",
    "holds",
];

pub fn limits(format: Format, records: &[LimitRecord]) -> String {
    let rows: Vec<Vec<Cell>> = records
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.limit.into()),
                Cell::Num(r.sigma_x_over_lambda),
                Cell::Num(r.frac_bandwidth),
                Cell::Num(r.purity),
                r.oracle_purity.map_or(Cell::Empty, Cell::Num),
                Cell::Num(r.product_fidelity),
                Cell::Num(r.displaced_marginal_fidelity),
                Cell::Num(r.entropy_bits),
                Cell::Num(r.g),
                Cell::Bool(r.holds),
            ]
        })
        .collect();
    table(format, &LIMITS_HEADER, &rows)
}

pub const MINKOWSKI_HEADER: [&str; 9] = [
    "refr_index",
    "k_center",
    "kick",
    "kick_expected",
    "residual",
    "minkowski_momentum",
    "abraham_momentum",
    "slope",
    "slope_expected",
];

/// Per-index rows; the fitted slope is repeated on every row.
pub fn minkowski(format: Format, scan: &MinkowskiScan) -> String {
    let rows: Vec<Vec<Cell>> = scan
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Num(r.refr_index),
                Cell::Num(r.k_center),
                Cell::Num(r.kick),
                Cell::Num(r.kick_expected),
                Cell::Num(r.conservation_residual),
                Cell::Num(r.minkowski_momentum),
                Cell::Num(r.abraham_momentum),
                Cell::Num(scan.slope),
                Cell::Num(scan.slope_expected),
            ]
        })
        .collect();
    table(format, &MINKOWSKI_HEADER, &rows)
}
