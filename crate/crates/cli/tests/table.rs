use std::collections::BTreeMap;

use affine_cli::{export_table, Cell, CliError, Column, ColumnType, Format, ResultTable};
use proptest::prelude::*;

fn prov() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("kind".to_string(), "test".to_string()),
        ("seed".to_string(), "3".to_string()),
    ])
}

fn sample() -> ResultTable {
    let mut t = ResultTable::new(
        vec![
            Column::new("x", ColumnType::F64),
            Column::new("k", ColumnType::I64),
            Column::new("ok", ColumnType::Bool),
            Column::new("label", ColumnType::Str),
        ],
        prov(),
    );
    t.push(vec![0.1.into(), Cell::I64(-2), true.into(), "a,\"b\"".into()]);
    t.push(vec![(-1.0e-300).into(), Cell::I64(7), false.into(), "".into()]);
    t
}

#[test]
fn empty_table_exports_header_only() {
    let t = ResultTable::new(
        vec![Column::new("t", ColumnType::F64), Column::new("e", ColumnType::F64)],
        prov(),
    );
    assert_eq!(t.csv_body(), "t,e\n");
    let csv = t.to_csv();
    assert!(csv.ends_with("\nt,e\n"));
    assert_eq!(ResultTable::parse(&csv).unwrap().table, t);
}

#[test]
fn csv_layout() {
    let csv = sample().to_csv();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# format=affine-table-1");
    assert!(lines.contains(&"# types=f64,i64,bool,str"));
    assert!(csv.contains("1.0000000000000001e-1,-2,true,\"a,\"\"b\"\"\"\n"));
    assert!(csv.contains("-1.0000000000000000e-300,7,false,"));
}

#[test]
fn non_finite_cells_abort_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut t = sample();
    t.push(vec![f64::NAN.into(), Cell::I64(0), true.into(), "x".into()]);
    match export_table(&t, &path, Format::Csv) {
        Err(CliError::Numerical(msg)) => assert!(msg.contains("row 2") && msg.contains("`x`"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(!path.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn export_replaces_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/out.json");
    export_table(&sample(), &path, Format::Json).unwrap();
    export_table(&sample(), &path, Format::Json).unwrap();
    assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    let back = ResultTable::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.table, sample());
    assert_eq!(back.recorded_data_hash.unwrap(), sample().data_hash());
}

#[test]
fn unwritable_path_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let err = export_table(&sample(), &blocker.join("out.csv"), Format::Csv).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

fn cell_for(ty: u8) -> BoxedStrategy<Cell> {
    match ty % 4 {
        0 => prop::num::f64::NORMAL.prop_map(Cell::F64).boxed(),
        1 => any::<i64>().prop_map(Cell::I64).boxed(),
        2 => any::<bool>().prop_map(Cell::Bool).boxed(),
        _ => "[ -~]{0,12}".prop_map(Cell::Str).boxed(),
    }
}

fn table_strategy() -> impl Strategy<Value = ResultTable> {
    prop::collection::vec(0u8..4, 1..5).prop_flat_map(|types| {
        let row = types.iter().map(|t| cell_for(*t)).collect::<Vec<_>>();
        prop::collection::vec(row, 0..6).prop_map(move |rows| {
            let cols = types
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let ty = [ColumnType::F64, ColumnType::I64, ColumnType::Bool, ColumnType::Str][*t as usize];
                    Column::new(format!("c{i}"), ty)
                })
                .collect();
            let mut table = ResultTable::new(cols, prov());
            rows.into_iter().for_each(|r| table.push(r));
            table
        })
    })
}

proptest! {
    #[test]
    fn csv_json_roundtrip(t in table_strategy()) {
        let from_csv = ResultTable::from_csv(&t.to_csv()).unwrap().table;
        prop_assert_eq!(&from_csv, &t);
        let from_json = ResultTable::from_json(&from_csv.to_json()).unwrap();
        prop_assert_eq!(&from_json.table, &t);
        prop_assert_eq!(from_json.recorded_data_hash.unwrap(), t.data_hash());
    }
}
