//! CSV and JSON encoders for [`Table`]. Both emit the same header strings
//! and the same round-trip float values.

use ringtime_core::{Cell, Table};
use serde_json::{Map, Number, Value};

use crate::config::Format;

pub fn render(table: &Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => csv_bytes(table),
        Format::Json => json_bytes(table),
    }
}

fn csv_bytes(table: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing to memory cannot fail.
    w.write_record(table.headers()).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::to_text)).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn cell_value(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => Value::from(*v),
        Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(s) => Value::String(s.clone()),
    }
}

fn json_bytes(table: &Table) -> Vec<u8> {
    let headers = table.headers();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Object(headers.iter().cloned().zip(r.iter().map(cell_value)).collect::<Map<_, _>>()))
        .collect();
    let mut doc = Map::new();
    doc.insert("table".into(), Value::String(table.name.clone()));
    doc.insert("pass".into(), Value::Bool(table.pass));
    doc.insert("columns".into(), Value::Array(headers.into_iter().map(Value::String).collect()));
    doc.insert("rows".into(), Value::Array(rows));
    let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).expect("plain values serialize");
    out.push(b'\n');
    out
}
