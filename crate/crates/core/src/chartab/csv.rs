//! CSV form of a character table.
//!
//! ```text
//! order,E
//! irreducible,<class key>,...
//! class_size,<h_1>,...
//! chi_1,<value>,...
//! ```
//! Values are written over `z = zeta_E`. Class keys contain no commas.

use super::cyclotomic::{parse_cyclotomic, Cyclotomic};
use super::CharTable;
use crate::error::{invalid, Result};

pub(super) fn write_table(t: &CharTable) -> String {
    let e = t.exponent() as u32;
    let mut out = format!("order,{e}\n");
    out.push_str("irreducible");
    for c in t.classes().classes() {
        out.push(',');
        out.push_str(&c.key.to_string());
    }
    out.push_str("\nclass_size");
    for c in t.classes().classes() {
        out.push_str(&format!(",{}", c.size));
    }
    out.push('\n');
    for (i, chi) in t.characters().iter().enumerate() {
        out.push_str(&format!("chi_{}", i + 1));
        for v in &chi.values {
            out.push(',');
            out.push_str(&v.lift(e).reduced().to_string());
        }
        out.push('\n');
    }
    out
}

/// A table read back from CSV.
#[derive(Clone, Debug)]
pub struct ParsedTable {
    pub order: u32,
    pub class_keys: Vec<String>,
    pub class_sizes: Vec<u64>,
    pub rows: Vec<(String, Vec<Cyclotomic>)>,
}

pub fn parse_table_csv(text: &str) -> Result<ParsedTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| lines.next().map(str::to_owned).ok_or_else(|| {
        crate::error::Error::InvalidInput(format!("table CSV ends before the {what} row"))
    });
    let order_line = next("order")?;
    let order: u32 = match order_line.split_once(',') {
        Some(("order", e)) => match e.trim().parse() {
            Ok(e) if e > 0 => e,
            _ => return invalid(format!("bad order row: {order_line}")),
        },
        _ => return invalid(format!("bad order row: {order_line}")),
    };
    let header = next("header")?;
    let mut cells = header.split(',');
    if cells.next() != Some("irreducible") {
        return invalid("header row must start with 'irreducible'");
    }
    let class_keys: Vec<String> = cells.map(str::to_owned).collect();
    let sizes_line = next("class_size")?;
    let mut cells = sizes_line.split(',');
    if cells.next() != Some("class_size") {
        return invalid("third row must start with 'class_size'");
    }
    let class_sizes = cells
        .map(|c| c.trim().parse::<u64>().map_err(|_| crate::error::Error::InvalidInput(format!("bad class size {c}"))))
        .collect::<Result<Vec<_>>>()?;
    if class_sizes.len() != class_keys.len() {
        return invalid("class_size row length differs from header");
    }
    let mut rows = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        let name = cells.next().unwrap_or_default().to_owned();
        let values = cells
            .map(|c| {
                parse_cyclotomic(c, order)
                    .ok_or_else(|| crate::error::Error::InvalidInput(format!("bad value {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != class_keys.len() {
            return invalid(format!("row {name} has {} values for {} classes", values.len(), class_keys.len()));
        }
        rows.push((name, values));
    }
    Ok(ParsedTable { order, class_keys, class_sizes, rows })
}
