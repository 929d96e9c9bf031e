//! Centrality tables.
//!
//! The ranked report is tab-separated with a header row:
//!
//! `rank index id title degree eigenvector betweenness_raw betweenness closeness total`
//!
//! Rows are sorted by descending total centrality (ties by vertex index).
//! The distribution table has the same columns minus `rank`, in vertex order.
//! Floats are printed in shortest round-trip form, so values read back are
//! identical to the computed ones.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityReport, VertexCentrality};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Degree,
    Eigenvector,
    Betweenness,
    Closeness,
    Total,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Degree,
        Measure::Eigenvector,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Total,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Eigenvector => "eigenvector",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Total => "total",
        }
    }

    pub fn value(self, c: &VertexCentrality) -> f64 {
        match self {
            Measure::Degree => c.degree,
            Measure::Eigenvector => c.eigenvector,
            Measure::Betweenness => c.betweenness,
            Measure::Closeness => c.closeness,
            Measure::Total => c.total,
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_owned()))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    pub id: String,
    pub title: String,
    pub centrality: VertexCentrality,
}

#[derive(Serialize)]
struct RankedLine {
    rank: usize,
    index: usize,
    id: String,
    title: String,
    degree: f64,
    eigenvector: f64,
    betweenness_raw: u64,
    betweenness: f64,
    closeness: f64,
    total: f64,
}

#[derive(Serialize, Deserialize)]
struct Line {
    index: usize,
    id: String,
    title: String,
    degree: f64,
    eigenvector: f64,
    betweenness_raw: u64,
    betweenness: f64,
    closeness: f64,
    total: f64,
}

impl Line {
    fn new(row: &ReportRow) -> Self {
        let c = &row.centrality;
        Line {
            index: row.index,
            id: row.id.clone(),
            title: row.title.clone(),
            degree: c.degree,
            eigenvector: c.eigenvector,
            betweenness_raw: c.betweenness_raw,
            betweenness: c.betweenness,
            closeness: c.closeness,
            total: c.total,
        }
    }

    fn ranked(self, rank: usize) -> RankedLine {
        RankedLine {
            rank,
            index: self.index,
            id: self.id,
            title: self.title,
            degree: self.degree,
            eigenvector: self.eigenvector,
            betweenness_raw: self.betweenness_raw,
            betweenness: self.betweenness,
            closeness: self.closeness,
            total: self.total,
        }
    }

    fn into_row(self) -> ReportRow {
        ReportRow {
            index: self.index,
            id: self.id,
            title: self.title,
            centrality: VertexCentrality {
                degree: self.degree,
                eigenvector: self.eigenvector,
                betweenness_raw: self.betweenness_raw,
                betweenness: self.betweenness,
                closeness: self.closeness,
                total: self.total,
            },
        }
    }
}

/// Joins a report with item ids and titles, in vertex order.
pub fn rows(report: &CentralityReport, ids: &[String], titles: &[String]) -> Vec<ReportRow> {
    report
        .vertices
        .iter()
        .enumerate()
        .map(|(v, c)| ReportRow {
            index: v,
            id: ids[v].clone(),
            title: titles[v].clone(),
            centrality: *c,
        })
        .collect()
}

/// Rows by descending `measure`, ties by index.
pub fn rank_by(rows: &[ReportRow], measure: Measure) -> Vec<ReportRow> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| {
        measure
            .value(&b.centrality)
            .total_cmp(&measure.value(&a.centrality))
            .then(a.index.cmp(&b.index))
    });
    sorted
}

pub fn top(rows: &[ReportRow], measure: Measure, n: usize) -> Vec<ReportRow> {
    let mut ranked = rank_by(rows, measure);
    ranked.truncate(n);
    ranked
}

fn writer(out: impl Write) -> csv::Writer<impl Write> {
    csv::WriterBuilder::new()
        .delimiter(b'\t')
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::format("centrality table", e.to_string())
}

/// Ranked report sorted by total centrality.
pub fn write_report(out: impl Write, rows: &[ReportRow]) -> Result<()> {
    let mut w = writer(out);
    for (rank, row) in rank_by(rows, Measure::Total).iter().enumerate() {
        w.serialize(Line::new(row).ranked(rank + 1))
            .map_err(csv_error)?;
    }
    finish(w)
}

/// Unsorted per-vertex table for distribution plots.
pub fn write_distributions(out: impl Write, rows: &[ReportRow]) -> Result<()> {
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| r.index);
    let mut w = writer(out);
    for row in &sorted {
        w.serialize(Line::new(row)).map_err(csv_error)?;
    }
    finish(w)
}

/// Reads either table; rows come back in file order.
pub fn read_report(input: impl Read) -> Result<Vec<ReportRow>> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .from_reader(input)
        .deserialize::<Line>()
        .map(|line| line.map(Line::into_row).map_err(csv_error))
        .collect()
}
