use std::io::{self, Write};

use clap::ValueEnum;
use lorenz_core::dataio::{write_report_csv, Cell, Column, Report};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    JsonLines,
}

/// A titled report; commands emit one or more.
pub struct Section {
    pub title: String,
    pub report: Report,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: Vec<Column>) -> Self {
        Self {
            title: title.into(),
            report: Report::new(columns),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.report.push(row);
    }
}

fn with_precision(report: &Report, precision: Option<usize>) -> Report {
    let Some(p) = precision else {
        return report.clone();
    };
    Report {
        columns: report
            .columns
            .iter()
            .map(|c| Column::fixed(c.name.clone(), p))
            .collect(),
        rows: report.rows.clone(),
    }
}

pub fn emit<W: Write + ?Sized>(out: &mut W, sections: &[Section], format: Format, precision: Option<usize>) -> lorenz_core::Result<()> {
    let titled = sections.len() > 1;
    for (i, section) in sections.iter().enumerate() {
        let report = with_precision(&section.report, precision);
        match format {
            Format::Table => {
                if i > 0 {
                    writeln!(out)?;
                }
                if titled {
                    writeln!(out, "{}", section.title)?;
                }
                write_table(out, &report)?;
            }
            Format::Csv => {
                if i > 0 {
                    writeln!(out)?;
                }
                if titled {
                    writeln!(out, "# {}", section.title)?;
                }
                write_report_csv(&report, &mut *out)?;
            }
            Format::JsonLines => write_json_lines(out, &section.title, &section.report)?,
        }
    }
    Ok(())
}

fn write_table<W: Write + ?Sized>(out: &mut W, report: &Report) -> io::Result<()> {
    let header = report.header();
    let rows = report.rendered_rows();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let numeric: Vec<bool> = (0..header.len())
        .map(|c| {
            !report.rows.is_empty() && report.rows.iter().all(|r| !matches!(r[c], Cell::Text(_)))
        })
        .collect();

    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                s.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            if numeric[c] {
                s.push_str(&" ".repeat(pad));
                s.push_str(cell);
            } else {
                s.push_str(cell);
                if c + 1 < cells.len() {
                    s.push_str(&" ".repeat(pad));
                }
            }
        }
        s.trim_end().to_string()
    };

    writeln!(out, "{}", line(header.clone()))?;
    for row in &rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn write_json_lines<W: Write + ?Sized>(out: &mut W, title: &str, report: &Report) -> io::Result<()> {
    for row in &report.rows {
        let mut obj = Map::new();
        obj.insert("table".into(), Value::String(title.into()));
        for (col, cell) in report.columns.iter().zip(row) {
            let v = match cell {
                Cell::Text(s) => Value::String(s.clone()),
                Cell::Integer(i) => Value::from(*i),
                Cell::Number(x) => Value::from(*x),
            };
            obj.insert(col.name.clone(), v);
        }
        serde_json::to_writer(&mut *out, &Value::Object(obj))?;
        writeln!(out)?;
    }
    Ok(())
}
