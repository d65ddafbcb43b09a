//! Result tables and their CSV/JSON exports.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::sha256_hex;
use crate::error::{CliError, CliResult};

pub const FORMAT_TAG: &str = "affine-table-1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    F64,
    I64,
    Bool,
    Str,
}

impl ColumnType {
    fn as_str(self) -> &'static str {
        match self {
            ColumnType::F64 => "f64",
            ColumnType::I64 => "i64",
            ColumnType::Bool => "bool",
            ColumnType::Str => "str",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "f64" => ColumnType::F64,
            "i64" => ColumnType::I64,
            "bool" => ColumnType::Bool,
            "str" => ColumnType::Str,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ColumnType,
}

impl Column {
    pub fn new(name: impl Into<String>, ty: ColumnType) -> Self {
        Self { name: name.into(), ty }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F64(f64),
    I64(i64),
    Bool(bool),
    Str(String),
}

impl Cell {
    fn ty(&self) -> ColumnType {
        match self {
            Cell::F64(_) => ColumnType::F64,
            Cell::I64(_) => ColumnType::I64,
            Cell::Bool(_) => ColumnType::Bool,
            Cell::Str(_) => ColumnType::Str,
        }
    }

    /// 17 significant digits for floats.
    fn render(&self) -> String {
        match self {
            Cell::F64(v) => format!("{v:.16e}"),
            Cell::I64(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn parse(text: &str, ty: ColumnType) -> Option<Self> {
        Some(match ty {
            ColumnType::F64 => Cell::F64(text.parse().ok()?),
            ColumnType::I64 => Cell::I64(text.parse().ok()?),
            ColumnType::Bool => Cell::Bool(text.parse().ok()?),
            ColumnType::Str => Cell::Str(text.to_string()),
        })
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::F64(v) => json!(v),
            Cell::I64(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Str(s) => json!(s),
        }
    }

    fn from_json(v: &Value, ty: ColumnType) -> Option<Self> {
        Some(match ty {
            ColumnType::F64 => Cell::F64(v.as_f64()?),
            ColumnType::I64 => Cell::I64(v.as_i64()?),
            ColumnType::Bool => Cell::Bool(v.as_bool()?),
            ColumnType::Str => Cell::Str(v.as_str()?.to_string()),
        })
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F64(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I64(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: BTreeMap<String, String>,
}

/// A table read back from disk with the data hash it was written with.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub table: ResultTable,
    pub recorded_data_hash: Option<String>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

impl ResultTable {
    pub fn new(columns: Vec<Column>, provenance: BTreeMap<String, String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            provenance,
        }
    }

    /// Panics on a width or type mismatch: rows are built by the runner,
    /// not by users.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from schema");
        for (c, col) in row.iter().zip(&self.columns) {
            assert_eq!(c.ty(), col.ty, "column {} holds {:?}", col.name, col.ty);
        }
        self.rows.push(row);
    }

    pub fn check_finite(&self) -> CliResult<()> {
        for (r, row) in self.rows.iter().enumerate() {
            for (cell, col) in row.iter().zip(&self.columns) {
                if let Cell::F64(v) = cell {
                    if !v.is_finite() {
                        return Err(CliError::Numerical(format!(
                            "non-finite value {v} in row {r}, column `{}`; export aborted",
                            col.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Header and rows as CSV; the data hash covers exactly these bytes.
    pub fn csv_body(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is UTF-8")
    }

    pub fn data_hash(&self) -> String {
        sha256_hex(self.csv_body().as_bytes())
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# format={FORMAT_TAG}\n");
        for (k, v) in &self.provenance {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let types: Vec<&str> = self.columns.iter().map(|c| c.ty.as_str()).collect();
        out.push_str(&format!("# types={}\n", types.join(",")));
        out.push_str(&format!("# data_hash={}\n", self.data_hash()));
        out.push_str(&self.csv_body());
        out
    }

    pub fn to_json(&self) -> String {
        let mut prov: serde_json::Map<String, Value> =
            self.provenance.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        prov.insert("format".into(), json!(FORMAT_TAG));
        prov.insert("data_hash".into(), json!(self.data_hash()));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({ "provenance": prov, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_csv(text: &str) -> CliResult<LoadedTable> {
        let mut provenance = BTreeMap::new();
        let mut body_start = 0;
        let mut line_no = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            line_no += 1;
            body_start += line.len();
            let rest = rest.trim_end_matches('\n').trim_start();
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(format!("line {line_no}"), "provenance lines read `# key=value`"))?;
            provenance.insert(k.to_string(), v.to_string());
        }
        if provenance.remove("format").as_deref() != Some(FORMAT_TAG) {
            return Err(parse_err("line 1", format!("missing `# format={FORMAT_TAG}`")));
        }
        let types: Vec<ColumnType> = provenance
            .remove("types")
            .ok_or_else(|| parse_err("provenance", "missing `types` line"))?
            .split(',')
            .map(|t| ColumnType::parse(t).ok_or_else(|| parse_err("provenance", format!("unknown column type `{t}`"))))
            .collect::<CliResult<_>>()?;
        let recorded = provenance.remove("data_hash");
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body_start..]);
        let header = rdr
            .headers()
            .map_err(|e| parse_err(format!("line {}", line_no + 1), e.to_string()))?;
        if header.len() != types.len() {
            return Err(parse_err(
                format!("line {}", line_no + 1),
                "header width differs from `types`",
            ));
        }
        let columns: Vec<Column> = header.iter().zip(&types).map(|(n, t)| Column::new(n, *t)).collect();
        let mut table = ResultTable::new(columns, provenance);
        for (i, rec) in rdr.records().enumerate() {
            let loc = format!("line {}", line_no + 2 + i);
            let rec = rec.map_err(|e| parse_err(&loc, e.to_string()))?;
            if rec.len() != types.len() {
                return Err(parse_err(&loc, "row width differs from header"));
            }
            let row = rec
                .iter()
                .zip(&types)
                .map(|(f, t)| {
                    Cell::parse(f, *t).ok_or_else(|| parse_err(&loc, format!("`{f}` is not a valid {}", t.as_str())))
                })
                .collect::<CliResult<_>>()?;
            table.rows.push(row);
        }
        Ok(LoadedTable {
            table,
            recorded_data_hash: recorded,
        })
    }

    pub fn from_json(text: &str) -> CliResult<LoadedTable> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        let prov = doc
            .get("provenance")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err("provenance", "missing provenance object"))?;
        let mut provenance: BTreeMap<String, String> = prov
            .iter()
            .map(|(k, v)| {
                v.as_str()
                    .map(|s| (k.clone(), s.to_string()))
                    .ok_or_else(|| parse_err(format!("provenance.{k}"), "expected a string"))
            })
            .collect::<CliResult<_>>()?;
        if provenance.remove("format").as_deref() != Some(FORMAT_TAG) {
            return Err(parse_err("provenance.format", format!("expected {FORMAT_TAG}")));
        }
        let recorded = provenance.remove("data_hash");
        let columns: Vec<Column> = serde_json::from_value(doc.get("columns").cloned().unwrap_or(Value::Null))
            .map_err(|e| parse_err("columns", e.to_string()))?;
        let mut table = ResultTable::new(columns, provenance);
        let rows = doc
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("rows", "missing rows array"))?;
        for (i, r) in rows.iter().enumerate() {
            let loc = format!("rows[{i}]");
            let cells = r
                .as_array()
                .filter(|c| c.len() == table.columns.len())
                .ok_or_else(|| parse_err(&loc, "row width differs from columns"))?;
            let row = cells
                .iter()
                .zip(&table.columns)
                .map(|(v, c)| {
                    Cell::from_json(v, c.ty).ok_or_else(|| parse_err(&loc, format!("bad value for `{}`", c.name)))
                })
                .collect::<CliResult<_>>()?;
            table.rows.push(row);
        }
        Ok(LoadedTable {
            table,
            recorded_data_hash: recorded,
        })
    }

    /// Sniffs the format: JSON documents open with `{`.
    pub fn parse(text: &str) -> CliResult<LoadedTable> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }
}

/// Validates, renders, then writes through a temp file in the target
/// directory and renames it into place.
pub fn export_table(table: &ResultTable, path: &Path, format: Format) -> CliResult<()> {
    table.check_finite()?;
    let text = table.render(format);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
