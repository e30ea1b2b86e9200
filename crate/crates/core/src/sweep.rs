//! Cross-checking sweeps over boxes and the product-formula table.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::count::{count, Method};
use crate::error::Result;
use crate::exec::Execution;
use crate::formulas::{n_class, ser_display};
use crate::hexgrid::BoxDims;
use crate::symmetry::SymmetryClass;

pub const CSV_HEADER: &str = "class,a,b,c,method,value,micros";

/// Methods compared by [`verify`].
pub const VERIFY_METHODS: [Method; 3] = [Method::Formula, Method::Matrix, Method::Oracle];

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub class: u8,
    pub dims: BoxDims,
    pub method: Method,
    /// The count, or an error message.
    pub value: String,
    pub micros: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub records: Vec<Record>,
    /// Cells whose methods disagree or fail.
    pub mismatches: Vec<(u8, BoxDims)>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.records.len() / VERIFY_METHODS.len()
    }

    /// CSV with a header row. Timings are written only with `timing`, so
    /// that reports are reproducible byte for byte.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.records {
            let BoxDims { a, b, c } = r.dims;
            let micros = if timing { r.micros } else { 0 };
            let value = if r.value.contains(',') { format!("\"{}\"", r.value) } else { r.value.clone() };
            writeln!(out, "{},{a},{b},{c},{},{value},{micros}", r.class, r.method).unwrap();
        }
        out
    }
}

/// Every box with sides in `1..=max_side` fixed by each class, in order of
/// class, then box.
pub fn cells(max_side: u32, classes: &[SymmetryClass]) -> Vec<(SymmetryClass, BoxDims)> {
    let mut classes = classes.to_vec();
    classes.sort();
    classes.dedup();
    let mut out = Vec::new();
    for cls in classes {
        for a in 1..=max_side {
            for b in 1..=max_side {
                for c in 1..=max_side {
                    let dims = BoxDims { a, b, c };
                    if cls.fixes_box(dims) {
                        out.push((cls, dims));
                    }
                }
            }
        }
    }
    out
}

/// Formula, Kasteleyn and oracle counts for every cell; a cell passes when
/// all three succeed and agree.
pub fn verify(max_side: u32, classes: &[SymmetryClass], exec: Execution) -> RunReport {
    let results = exec.map(cells(max_side, classes), |(cls, dims)| {
        VERIFY_METHODS.map(|method| {
            let start = Instant::now();
            let value = count(cls, dims, method);
            let micros = start.elapsed().as_micros() as u64;
            (cls, dims, method, value, micros)
        })
    });
    let mut report = RunReport::default();
    for row in results {
        let first = row[0].3.as_ref().ok();
        let agree = first.is_some() && row.iter().all(|r| r.3.as_ref().ok() == first);
        let (cls, dims) = (row[0].0, row[0].1);
        if !agree {
            report.mismatches.push((cls.id(), dims));
        }
        for (cls, dims, method, value, micros) in row {
            let value = match value {
                Ok(v) => v.to_string(),
                Err(e) => format!("error: {e}"),
            };
            report.records.push(Record { class: cls.id(), dims, method, value, micros });
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub class: u8,
    pub pattern: &'static str,
    pub dims: BoxDims,
    #[serde(serialize_with = "ser_display")]
    pub value: num_bigint::BigInt,
}

type Pattern = (&'static str, fn(u32, u32, u32) -> [u32; 3]);

fn patterns(class: u8) -> (usize, &'static [Pattern]) {
    match class {
        1 => (3, &[("(a,b,c)", |a, b, c| [a, b, c])]),
        2 => (2, &[("(a,a,b)", |a, b, _| [a, a, b])]),
        3 | 4 => (1, &[("(a,a,a)", |a, _, _| [a, a, a])]),
        5 => (
            3,
            &[
                ("(2a,2b,2c)", |a, b, c| [2 * a, 2 * b, 2 * c]),
                ("(2a,2b,2c+1)", |a, b, c| [2 * a, 2 * b, 2 * c + 1]),
                ("(2a+1,2b+1,2c)", |a, b, c| [2 * a + 1, 2 * b + 1, 2 * c]),
            ],
        ),
        6 => (2, &[("(a,a,2b)", |a, b, _| [a, a, 2 * b])]),
        7 => (
            2,
            &[
                ("(2a,2a,2b)", |a, b, _| [2 * a, 2 * a, 2 * b]),
                ("(2a+1,2a+1,2b)", |a, b, _| [2 * a + 1, 2 * a + 1, 2 * b]),
            ],
        ),
        _ => (1, &[("(2a,2a,2a)", |a, _, _| [2 * a, 2 * a, 2 * a])]),
    }
}

/// Product-formula values on each class's argument patterns with
/// parameters in `1..=max_a`. For three-parameter patterns `a <= b` (and
/// `b <= c` for class 1), since the counts are symmetric.
pub fn table_rows(max_a: u32) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for cls in SymmetryClass::all() {
        let (arity, pats) = patterns(cls.id());
        for &(pattern, make) in pats {
            for a in 1..=max_a {
                for b in 1..=if arity >= 2 { max_a } else { 1 } {
                    for c in 1..=if arity == 3 { max_a } else { 1 } {
                        if arity == 3 && (a > b || (cls.id() == 1 && b > c)) {
                            continue;
                        }
                        let dims = BoxDims::from_array(make(a, b, c));
                        let value = n_class(cls, dims)?.value;
                        rows.push(TableRow { class: cls.id(), pattern, dims, value });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("class,pattern,a,b,c,value\n");
    for r in rows {
        let BoxDims { a, b, c } = r.dims;
        writeln!(out, "{},\"{}\",{a},{b},{c},{}", r.class, r.pattern, r.value).unwrap();
    }
    out
}

pub fn table_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from("| class | pattern | a | b | c | value |\n|---|---|---|---|---|---|\n");
    for r in rows {
        let BoxDims { a, b, c } = r.dims;
        writeln!(out, "| {} | {} | {a} | {b} | {c} | {} |", r.class, r.pattern, r.value).unwrap();
    }
    out
}
