//! Result tables: theories as rows, the four evaluation settings as columns.

use std::collections::BTreeMap;

use crate::generate::{Polarity, SentenceOrder};
use crate::harness::record::RunRecord;

/// The four fixed columns, in presentation order.
pub const SETTINGS: [(Polarity, SentenceOrder, &str); 4] = [
    (Polarity::Unprovable, SentenceOrder::Random, "-d-rand"),
    (Polarity::Provable, SentenceOrder::Random, "+d-rand"),
    (Polarity::Unprovable, SentenceOrder::Sequential, "-d-seq"),
    (Polarity::Provable, SentenceOrder::Sequential, "+d-seq"),
];

/// Grades grouped by theory instance and setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// Row label (e.g. `chain(8)`) plus one optional grade per column, in
    /// first-appearance order of the instances.
    pub rows: Vec<(String, [Option<String>; 4])>,
}

/// Aggregates records into a report. When several records exist for the
/// same case id, the later one wins (the store is append-only, so later
/// lines are re-runs).
pub fn build_report(records: &[RunRecord]) -> Report {
    let mut order: Vec<String> = Vec::new();
    let mut cells: BTreeMap<String, [Option<String>; 4]> = BTreeMap::new();
    for record in records {
        let label = record.case.spec.to_string();
        if !cells.contains_key(&label) {
            order.push(label.clone());
            cells.insert(label.clone(), Default::default());
        }
        let column = SETTINGS
            .iter()
            .position(|(polarity, ordering, _)| {
                *polarity == record.case.polarity && *ordering == record.case.ordering
            })
            .expect("every polarity/ordering combination has a column");
        cells.get_mut(&label).expect("row exists")[column] = Some(record.grade.name().to_owned());
    }
    Report {
        rows: order
            .into_iter()
            .map(|label| {
                let row = cells.remove(&label).expect("row exists");
                (label, row)
            })
            .collect(),
    }
}

impl Report {
    /// Aligned text table; missing cells render as an em dash.
    pub fn to_text(&self) -> String {
        let headers: Vec<&str> = std::iter::once("Theory")
            .chain(SETTINGS.iter().map(|(_, _, name)| *name))
            .collect();
        let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
        let mut body: Vec<Vec<String>> = Vec::with_capacity(self.rows.len());
        for (label, cells) in &self.rows {
            let mut row = vec![label.clone()];
            row.extend(
                cells
                    .iter()
                    .map(|cell| cell.clone().unwrap_or_else(|| "\u{2014}".to_owned())),
            );
            for (width, cell) in widths.iter_mut().zip(&row) {
                *width = (*width).max(cell.chars().count());
            }
            body.push(row);
        }
        let render_row = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                .collect();
            padded.join("  ").trim_end().to_owned()
        };
        let mut lines = Vec::with_capacity(self.rows.len() + 1);
        lines.push(render_row(
            &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        ));
        for row in &body {
            lines.push(render_row(row));
        }
        lines.join("\n") + "\n"
    }

    /// CSV with the same layout; missing cells are empty.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let headers: Vec<&str> = std::iter::once("theory")
            .chain(SETTINGS.iter().map(|(_, _, name)| *name))
            .collect();
        writer.write_record(&headers).expect("csv writes");
        for (label, cells) in &self.rows {
            let mut row = vec![label.clone()];
            row.extend(cells.iter().map(|cell| cell.clone().unwrap_or_default()));
            writer.write_record(&row).expect("csv writes");
        }
        String::from_utf8(writer.into_inner().expect("csv flushes")).expect("csv is utf-8")
    }
}
