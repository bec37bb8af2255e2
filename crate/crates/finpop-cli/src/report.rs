//! Report rendering. Every command produces a [`Table`]; the three output
//! formats are different serializations of the same cells, so they always
//! carry the same values.

use std::fmt::Write as _;

/// One value in a report row. `Sci` is a real whose human form is scientific
/// notation, for columns holding tiny deviations.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Sci(f64),
    Int(u64),
    Missing,
}

impl Cell {
    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Num(_) | Cell::Sci(_) | Cell::Int(_))
    }

    /// Human form: six decimals for reals.
    fn human(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format!("{x:.6}"),
            Cell::Sci(x) => format!("{x:.3e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Missing => "-".to_string(),
        }
    }

    /// Machine form: shortest representation that parses back exactly.
    fn machine(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) | Cell::Sci(x) => format!("{x}"),
            Cell::Int(n) => n.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
            Cell::Num(x) | Cell::Sci(x) => serde_json::Value::from(*x),
            Cell::Int(n) => serde_json::Value::from(*n),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.render_human(),
            OutputFormat::Json => self.render_json(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_human(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::human).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }

        let mut out = String::new();
        for (j, name) in self.columns.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{name:<width$}", width = widths[j]);
        }
        out.push('\n');
        for (j, w) in widths.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            out.push_str(&"-".repeat(*w));
        }
        out.push('\n');
        for (row, text) in self.rows.iter().zip(&cells) {
            for (j, cell) in text.iter().enumerate() {
                if j > 0 {
                    out.push_str("  ");
                }
                if row[j].is_numeric() {
                    let _ = write!(out, "{cell:>width$}", width = widths[j]);
                } else {
                    let _ = write!(out, "{cell:<width$}", width = widths[j]);
                }
            }
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| csv_escape(&c.machine())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.json()))
                    .collect();
                serde_json::Value::Object(object)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&serde_json::Value::Array(rows))
            .expect("report cells are always serializable");
        out.push('\n');
        out
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> Table {
        let mut t = Table::new(vec!["name", "value", "count"]);
        t.push(vec![
            Cell::Text("alpha".to_string()),
            Cell::Num(0.1234567890123),
            Cell::Int(3),
        ]);
        t.push(vec![
            Cell::Text("beta".to_string()),
            Cell::Missing,
            Cell::Int(4),
        ]);
        t
    }

    #[test]
    fn human_table_rounds_to_six_decimals() {
        let out = sample_table().render(OutputFormat::Table);
        assert!(out.contains("0.123457"));
        assert!(out.contains('-'));
    }

    #[test]
    fn csv_keeps_full_precision() {
        let out = sample_table().render(OutputFormat::Csv);
        assert!(out.starts_with("name,value,count\n"));
        assert!(out.contains("alpha,0.1234567890123,3"));
        assert!(out.contains("beta,,4"));
    }

    #[test]
    fn json_round_trips_exactly() {
        let out = sample_table().render(OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        let value = parsed[0]["value"].as_f64().unwrap();
        assert_eq!(value, 0.1234567890123);
        assert!(parsed[1]["value"].is_null());
    }

    #[test]
    fn csv_quotes_awkward_text() {
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_escape("plain"), "plain");
    }
}
