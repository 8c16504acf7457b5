use std::fs;

use qaoa_landscape::analytic::{summary_analytic, UniformMode, UniformModel};
use qaoa_landscape::io::{
    grid_to_csv, load_ensemble, load_summary, save_ensemble, to_json, write_text,
};
use qaoa_landscape::landscape::eval_grid;
use qaoa_landscape::problems::{build_ensemble, FamilyParams, InstanceMeta};
use qaoa_landscape::structure::summarize;
use qaoa_landscape::{AngleGrid, Error, StructuralSummary};

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qaoa-io-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn ensemble_file_round_trip() {
    let dir = scratch("ensemble");
    let path = dir.join("e.json");
    let e = build_ensemble(&FamilyParams::Uniform { t_size: 128 }, 8, 500, 1).unwrap();
    save_ensemble(&path, &e).unwrap();
    assert_eq!(load_ensemble(&path).unwrap(), e);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sat_dimacs_meta_survives_byte_for_byte() {
    let dir = scratch("sat");
    let path = dir.join("sat.json");
    let e = build_ensemble(&FamilyParams::Sat { num_clauses: 32 }, 8, 5, 2).unwrap();
    save_ensemble(&path, &e).unwrap();
    let first = fs::read(&path).unwrap();
    let loaded = load_ensemble(&path).unwrap();
    for (a, b) in e.instances.iter().zip(&loaded.instances) {
        let (InstanceMeta::Sat { cnf: x }, InstanceMeta::Sat { cnf: y }) = (&a.meta, &b.meta)
        else {
            panic!()
        };
        assert_eq!(x.to_dimacs().as_bytes(), y.to_dimacs().as_bytes());
    }
    save_ensemble(&path, &loaded).unwrap();
    assert_eq!(fs::read(&path).unwrap(), first);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn out_of_range_state_is_rejected() {
    let dir = scratch("range");
    let path = dir.join("bad.json");
    fs::write(
        &path,
        "{\"family\":\"uniform\",\"n\":4,\"seed\":0,\"params\":{\"t_size\":2},\n\"instances\":[{\"id\":0,\"targets\":[3,16],\"meta\":{}}]}",
    )
    .unwrap();
    let err = load_ensemble(&path).unwrap_err();
    assert!(matches!(err, Error::Parse(_)), "{err}");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn summaries_round_trip_through_files() {
    let dir = scratch("summary");
    let e = build_ensemble(&FamilyParams::QrFactor, 10, 7, 3).unwrap();
    let empirical = summarize(&e).unwrap();
    let analytic =
        summary_analytic(&UniformModel::new(8, 128, UniformMode::ExactHypergeometric).unwrap());
    for (name, s) in [("emp.json", &empirical), ("ana.json", &analytic)] {
        let path = dir.join(name);
        write_text(&path, &to_json(s).unwrap()).unwrap();
        assert_eq!(&load_summary(&path).unwrap(), s);
    }
    let text = fs::read_to_string(dir.join("ana.json")).unwrap();
    assert!(text.contains("\"mode\": \"exact_hypergeometric\""));
    let mut broken: StructuralSummary = empirical.clone();
    broken.e_profile.pop();
    write_text(&dir.join("broken.json"), &to_json(&broken).unwrap()).unwrap();
    assert!(load_summary(&dir.join("broken.json")).is_err());
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn grid_csv_layout() {
    let grid = AngleGrid::new((0.0, 1.0), (0.0, 2.0), 2, 3).unwrap();
    let g = eval_grid(|a| Ok(a.beta + a.gamma), &grid).unwrap();
    let csv = grid_to_csv(&g);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "beta,gamma,value");
    assert_eq!(lines.len(), 7);
    let last: Vec<f64> = lines[6].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(last, vec![1.0, 2.0, 3.0]);
}
