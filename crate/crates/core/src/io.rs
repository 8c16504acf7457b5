//! File formats and the configuration-driven pipeline.
//!
//! Structured artifacts are JSON, plottable data is CSV. CSV floats carry 17
//! significant digits; JSON floats use the shortest representation that
//! parses back to the same value. Both round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::experiments::{
    default_shots, run_landscape_comparison, run_success_comparison, AlphaReport, ComparisonReport,
    CrossSection,
};
use crate::landscape::LandscapeGrid;
use crate::optimize::OptConfig;
use crate::problems::{
    build_ensemble, Cnf, Dedupe, Ensemble, Family, FamilyParams, Graph, Instance, InstanceMeta,
};
use crate::space::{AngleGrid, TargetSpace};
use crate::structure::StructuralSummary;

/// A float as written to CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::computation(format!("serialisation failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

// ---- family parameters and instance metadata ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformParams {
    t_size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusteredParams {
    num_seeds: usize,
    per_seed: usize,
    #[serde(default)]
    dedupe: Dedupe,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SatParams {
    num_clauses: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KCliqueParams {
    k: u32,
    edge_prob: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusteredMeta {
    seeds: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SatMeta {
    dimacs: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KCliqueMeta {
    k: u32,
    edges: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QrMeta {
    q: u32,
    r: u32,
    x: u64,
}

fn value_of<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("plain structs serialise")
}

fn from_value<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::parse(format!("{what}: {e}")))
}

pub fn params_to_value(params: &FamilyParams) -> Value {
    match *params {
        FamilyParams::Uniform { t_size } => value_of(UniformParams { t_size }),
        FamilyParams::Clustered {
            num_seeds,
            per_seed,
            dedupe,
        } => value_of(ClusteredParams {
            num_seeds,
            per_seed,
            dedupe,
        }),
        FamilyParams::Sat { num_clauses } => value_of(SatParams { num_clauses }),
        FamilyParams::KClique { k, edge_prob } => value_of(KCliqueParams { k, edge_prob }),
        FamilyParams::QrFactor => value_of(Empty {}),
    }
}

pub fn params_from_value(family: Family, v: Value) -> Result<FamilyParams> {
    let what = format!("{family} params");
    Ok(match family {
        Family::Uniform => {
            let p: UniformParams = from_value(v, &what)?;
            FamilyParams::Uniform { t_size: p.t_size }
        }
        Family::Clustered => {
            let p: ClusteredParams = from_value(v, &what)?;
            FamilyParams::Clustered {
                num_seeds: p.num_seeds,
                per_seed: p.per_seed,
                dedupe: p.dedupe,
            }
        }
        Family::Sat => {
            let p: SatParams = from_value(v, &what)?;
            FamilyParams::Sat {
                num_clauses: p.num_clauses,
            }
        }
        Family::KClique => {
            let p: KCliqueParams = from_value(v, &what)?;
            FamilyParams::KClique {
                k: p.k,
                edge_prob: p.edge_prob,
            }
        }
        Family::QrFactor => {
            let _: Empty = from_value(v, &what)?;
            FamilyParams::QrFactor
        }
    })
}

fn meta_to_value(meta: &InstanceMeta) -> Value {
    match meta {
        InstanceMeta::Uniform => value_of(Empty {}),
        InstanceMeta::Clustered { seeds } => value_of(ClusteredMeta {
            seeds: seeds.clone(),
        }),
        InstanceMeta::Sat { cnf } => value_of(SatMeta {
            dimacs: cnf.to_dimacs(),
        }),
        InstanceMeta::KClique { graph, k } => value_of(KCliqueMeta {
            k: *k,
            edges: graph.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }),
        InstanceMeta::QrFactor { q, r, x } => value_of(QrMeta {
            q: *q,
            r: *r,
            x: *x,
        }),
    }
}

fn meta_from_value(family: Family, n: u32, v: Value, what: &str) -> Result<InstanceMeta> {
    let bad = |e: Error| Error::parse(format!("{what}: {e}"));
    Ok(match family {
        Family::Uniform => {
            let _: Empty = from_value(v, what)?;
            InstanceMeta::Uniform
        }
        Family::Clustered => {
            let m: ClusteredMeta = from_value(v, what)?;
            InstanceMeta::Clustered { seeds: m.seeds }
        }
        Family::Sat => {
            let m: SatMeta = from_value(v, what)?;
            let cnf = Cnf::from_dimacs(&m.dimacs).map_err(bad)?;
            if cnf.num_vars() != n {
                return Err(Error::parse(format!(
                    "{what}: formula has {} variables, ensemble n = {n}",
                    cnf.num_vars()
                )));
            }
            InstanceMeta::Sat { cnf }
        }
        Family::KClique => {
            let m: KCliqueMeta = from_value(v, what)?;
            let edges: Vec<(u32, u32)> = m.edges.iter().map(|e| (e[0], e[1])).collect();
            InstanceMeta::KClique {
                graph: Graph::from_edges(n, &edges).map_err(bad)?,
                k: m.k,
            }
        }
        Family::QrFactor => {
            let m: QrMeta = from_value(v, what)?;
            InstanceMeta::QrFactor {
                q: m.q,
                r: m.r,
                x: m.x,
            }
        }
    })
}

// ---- ensembles ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    id: usize,
    targets: Vec<u32>,
    meta: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    family: Family,
    n: u32,
    seed: u64,
    params: Value,
    instances: Vec<InstanceFile>,
}

/// JSON text of an ensemble, one instance per line.
pub fn ensemble_to_json(ensemble: &Ensemble) -> String {
    let mut out = format!(
        "{{\"family\":{},\"n\":{},\"seed\":{},\"params\":{},\"instances\":[",
        value_of(ensemble.family()),
        ensemble.n,
        ensemble.seed,
        params_to_value(&ensemble.params)
    );
    for (i, inst) in ensemble.instances.iter().enumerate() {
        let record = InstanceFile {
            id: inst.id,
            targets: inst.target.states().to_vec(),
            meta: meta_to_value(&inst.meta),
        };
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&value_of(record).to_string());
    }
    out.push_str("\n]}\n");
    out
}

pub fn ensemble_from_json(text: &str) -> Result<Ensemble> {
    let file: EnsembleFile = serde_json::from_str(text)?;
    let params = params_from_value(file.family, file.params)?;
    let instances = file
        .instances
        .into_iter()
        .map(|rec| {
            let what = format!("instance {}", rec.id);
            let target = TargetSpace::new(file.n, rec.targets)
                .map_err(|e| Error::parse(format!("{what}: {e}")))?;
            let meta = meta_from_value(file.family, file.n, rec.meta, &what)?;
            Ok(Instance {
                id: rec.id,
                target,
                meta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ensemble = Ensemble {
        n: file.n,
        seed: file.seed,
        params,
        instances,
    };
    ensemble
        .validate()
        .map_err(|e| Error::parse(e.to_string()))?;
    Ok(ensemble)
}

pub fn save_ensemble(path: &Path, ensemble: &Ensemble) -> Result<()> {
    write_text(path, &ensemble_to_json(ensemble))
}

pub fn load_ensemble(path: &Path) -> Result<Ensemble> {
    ensemble_from_json(&read_text(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn load_summary(path: &Path) -> Result<StructuralSummary> {
    let summary: StructuralSummary = read_json(path)?;
    summary.validate()?;
    Ok(summary)
}

// ---- CSV ----

/// CSV with one column per header; all columns must be equally long.
pub fn columns_to_csv(headers: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = headers.join(",");
    out.push('\n');
    for r in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt_f64(c[r])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `beta,gamma,value[,stddev]`, row-major with beta outer.
pub fn grid_to_csv(grid: &LandscapeGrid) -> String {
    let mut out = String::from(if grid.stddev.is_some() {
        "beta,gamma,value,stddev\n"
    } else {
        "beta,gamma,value\n"
    });
    for (idx, v) in grid.values.iter().enumerate() {
        let p = grid.grid.point(idx);
        let _ = write!(
            out,
            "{},{},{}",
            fmt_f64(p.beta),
            fmt_f64(p.gamma),
            fmt_f64(*v)
        );
        if let Some(sd) = &grid.stddev {
            let _ = write!(out, ",{}", fmt_f64(sd[idx]));
        }
        out.push('\n');
    }
    out
}

/// `beta,value,stddev,approx,error,bound` along the cross-section.
pub fn cross_section_to_csv(section: &CrossSection) -> String {
    columns_to_csv(
        &["beta", "value", "stddev", "approx", "error", "bound"],
        &[
            &section.betas,
            &section.mean,
            &section.stddev,
            &section.approx,
            &section.error,
            &section.bound,
        ],
    )
}

/// One row per instance and arm.
pub fn report_to_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("id,arm,t_size,beta,gamma,success_prob,shots_hit,shots\n");
    for inst in &report.instances {
        for (arm, o) in [
            ("standard", &inst.standard),
            ("noniterative", &inst.noniterative),
        ] {
            let _ = writeln!(
                out,
                "{},{arm},{},{},{},{},{},{}",
                inst.id,
                inst.t_size,
                fmt_f64(o.angles.beta),
                fmt_f64(o.angles.gamma),
                fmt_f64(o.success_prob),
                o.shots_hit,
                report.shots
            );
        }
    }
    out
}

/// One row per clause density.
pub fn alpha_reports_to_csv(reports: &[AlphaReport]) -> String {
    let mut out = String::from(
        "alpha,num_clauses,mean_tsize,standard_mean,standard_stddev,noniterative_mean,noniterative_stddev,standard_hit_fraction,noniterative_hit_fraction\n",
    );
    for r in reports {
        let (s, b) = (&r.report.standard, &r.report.noniterative);
        let cells = [
            r.mean_tsize,
            s.mean_success,
            s.stddev_success,
            b.mean_success,
            b.stddev_success,
            s.mean_hit_fraction,
            b.mean_hit_fraction,
        ];
        let cells: Vec<String> = cells.iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(r.alpha),
            r.num_clauses,
            cells.join(",")
        );
    }
    out
}

// ---- pipeline ----

fn default_grid() -> AngleGrid {
    AngleGrid::landscape(50, 50).expect("static grid is valid")
}

fn default_gamma_c() -> f64 {
    1.2
}

/// Everything one reproducible run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub family: Family,
    /// Family parameters; family defaults when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    pub n: u32,
    pub count: usize,
    #[serde(default = "default_grid")]
    pub grid: AngleGrid,
    #[serde(default = "default_gamma_c")]
    pub gamma_c: f64,
    #[serde(default)]
    pub optimizer: OptConfig,
    /// Shots per instance; family default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn family_params(&self) -> Result<FamilyParams> {
        match &self.params {
            Some(v) => params_from_value(self.family, v.clone()),
            None => Ok(FamilyParams::default_for(self.family, self.n)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.family_params()?;
        config.grid.validate()?;
        config.optimizer.validate()?;
        Ok(config)
    }
}

/// Generates the ensemble, compares landscapes and success probabilities,
/// and writes every artifact under `output_dir`. Returns the written paths.
pub fn run_pipeline(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let params = config.family_params()?;
    let ensemble = build_ensemble(&params, config.n, config.count, config.seed)?;
    let landscape = run_landscape_comparison(&ensemble, &config.grid, config.gamma_c)?;
    let shots = config.shots.unwrap_or_else(|| default_shots(config.family));
    let report = run_success_comparison(&ensemble, &config.optimizer, shots, config.seed)?;

    let dir = &config.output_dir;
    let files: Vec<(&str, String)> = vec![
        ("config.json", to_json(config)?),
        ("ensemble.json", ensemble_to_json(&ensemble)),
        ("summary.json", to_json(&landscape.summary)?),
        ("landscape_mean.csv", grid_to_csv(&landscape.mean)),
        ("landscape_approx.csv", grid_to_csv(&landscape.approx)),
        ("landscape_error.csv", grid_to_csv(&landscape.error)),
        ("landscape_bound.csv", grid_to_csv(&landscape.bound)),
        (
            "cross_section.csv",
            cross_section_to_csv(&landscape.cross_section),
        ),
        ("comparison.csv", report_to_csv(&report)),
        ("comparison.json", to_json(&report)?),
    ];
    files
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            write_text(&path, &text)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::summarize;

    fn round_trip(params: FamilyParams, n: u32, count: usize) {
        let e = build_ensemble(&params, n, count, 7).unwrap();
        let text = ensemble_to_json(&e);
        let back = ensemble_from_json(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(ensemble_to_json(&back), text);
    }

    #[test]
    fn every_family_round_trips() {
        round_trip(FamilyParams::Uniform { t_size: 128 }, 8, 500);
        round_trip(FamilyParams::default_for(Family::Clustered, 8), 8, 5);
        round_trip(FamilyParams::Sat { num_clauses: 24 }, 6, 5);
        round_trip(
            FamilyParams::KClique {
                k: 3,
                edge_prob: 0.5,
            },
            7,
            5,
        );
        round_trip(FamilyParams::QrFactor, 12, 5);
    }

    #[test]
    fn sat_meta_is_dimacs() {
        let e = build_ensemble(&FamilyParams::Sat { num_clauses: 12 }, 4, 2, 1).unwrap();
        let text = ensemble_to_json(&e);
        let v: Value = serde_json::from_str(&text).unwrap();
        let dimacs = v["instances"][0]["meta"]["dimacs"].as_str().unwrap();
        let InstanceMeta::Sat { cnf } = &e.instances[0].meta else {
            panic!()
        };
        assert_eq!(dimacs, cnf.to_dimacs());
    }

    #[test]
    fn rejects_out_of_range_states_and_unknown_fields() {
        let good = r#"{"family":"uniform","n":3,"seed":0,"params":{"t_size":2},
            "instances":[{"id":0,"targets":[1,7],"meta":{}}]}"#;
        ensemble_from_json(good).unwrap();
        let wide = good.replace("[1,7]", "[1,8]");
        assert!(matches!(ensemble_from_json(&wide), Err(Error::Parse(_))));
        let extra = good.replace("\"seed\":0", "\"seed\":0,\"x\":1");
        assert!(ensemble_from_json(&extra).is_err());
        let extra_param = good.replace("{\"t_size\":2}", "{\"t_size\":2,\"k\":3}");
        assert!(ensemble_from_json(&extra_param).is_err());
        let bad_id = good.replace("\"id\":0", "\"id\":4");
        assert!(ensemble_from_json(&bad_id).is_err());
    }

    #[test]
    fn syntax_errors_carry_line_context() {
        let err = ensemble_from_json("{\n\"family\": \"uniform\",\n oops}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn summary_json_round_trips_exactly() {
        let e = build_ensemble(&FamilyParams::Uniform { t_size: 37 }, 7, 9, 3).unwrap();
        let s = summarize(&e).unwrap();
        let back: StructuralSummary = serde_json::from_str(&to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 6.02e23] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        let csv = columns_to_csv(&["a", "b"], &[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("a,b\n"));
    }

    #[test]
    fn run_config_defaults_and_strictness() {
        let text = r#"{"seed":1,"family":"sat","n":6,"count":3,"output_dir":"out"}"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.gamma_c, 1.2);
        assert_eq!(
            c.family_params().unwrap(),
            FamilyParams::Sat { num_clauses: 24 }
        );
        let back = RunConfig::from_json(&to_json(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(RunConfig::from_json(&text.replace("\"n\":6", "\"n\":6,\"bogus\":0")).is_err());
        let bad_params = text.replace("\"n\":6", "\"n\":6,\"params\":{\"t_size\":3}");
        assert!(RunConfig::from_json(&bad_params).is_err());
    }
}
