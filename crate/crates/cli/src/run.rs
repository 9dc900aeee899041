//! Subcommand implementations. All files go under the output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use horn_inverse::area_reconstruction::{
    default_parameter_grid, endpoint_constants, family_members, reconstruct, Certificate, ReconstructOptions,
    ReconstructionResult, RelativeArea, Scenario,
};
use horn_inverse::forward::{
    area_to_potential, default_observable_grid, jost_boundary, jost_function, observable, scattering_coefficients,
    BoundaryParameter, DuctEnds, ObservableKind, Potential, SpectralData,
};
use horn_inverse::io::{area_table, load_spectral, potential_table, save_spectral, Table};
use horn_inverse::numerics::RealGrid;
use horn_inverse::phase_retrieval::{Family, PARAM_A_L, PARAM_RATIO};
use horn_inverse::reference::{self, golden_dataset, ClosedFormModel};
use horn_inverse::verify::{self, CriterionReport, GoldenSource, CRITERIA};
use horn_inverse::Error;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{MemberSelection, RunConfig};

/// How an inversion ended, short of a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Unique,
    /// A parameter family, or side information the data contradict.
    NonUnique,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn save(table: &Table, path: &Path) -> Result<()> {
    table.save(path).with_context(|| format!("writing {}", path.display()))
}

fn eta_table(eta: &RelativeArea) -> Result<Table> {
    let t = Table::from_columns(&["x", "eta", "d_eta"], &[eta.xgrid.points(), &eta.eta, &eta.d_eta])?;
    Ok(t.with_meta("kind", "relative_area").with_meta("units", "dimensionless"))
}

/// Potential, boundary parameter and end constants of a forward run.
struct Duct {
    q: Potential,
    bp: BoundaryParameter,
    ends: DuctEnds,
    area_samples: Option<Vec<f64>>,
}

fn duct(cfg: &RunConfig) -> Result<Duct> {
    match cfg.area.sample(cfg.x_points, &cfg.base_dir)? {
        None => {
            let model = ClosedFormModel { consts: cfg.constants, ..ClosedFormModel::default() };
            Ok(Duct {
                q: model.potential(cfg.x_points)?,
                bp: model.boundary_parameter(),
                ends: model.nominal_ends(),
                area_samples: None,
            })
        }
        Some(area) => {
            let (q, bp) = area_to_potential(&area)?;
            let ends = area.ends();
            let mut samples = area.values().to_vec();
            samples.extend([area.d_a0(), area.d_al(), area.length()]);
            Ok(Duct { q, bp, ends, area_samples: Some(samples) })
        }
    }
}

/// Synthesizes the selected observables; returns the written paths.
pub fn forward(cfg: &RunConfig, out: &Path, kind: Option<ObservableKind>) -> Result<Vec<PathBuf>> {
    let kinds = match kind {
        Some(k) => vec![k],
        None => cfg.kinds.kinds()?,
    };
    let kgrid = cfg.kgrid.grid()?;
    let d = duct(cfg)?;
    let b = jost_boundary(&d.q, &kgrid)?;
    let fs = jost_function(&b, d.bp)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let inputs = json!({
        "area": &cfg.area,
        "area_samples": &d.area_samples,
        "constants": &cfg.constants,
        "x_points": cfg.x_points,
        "kgrid": &cfg.kgrid,
        "mic_distance": cfg.mic_distance,
        "kinds": &kinds,
    });
    let mut files = BTreeMap::new();
    let mut paths = Vec::new();
    for kind in kinds {
        let r = (kind == ObservableKind::MicPressureMag).then_some(cfg.mic_distance);
        let data = observable(kind, d.ends, &b, &fs, cfg.constants, r)?;
        let path = out.join(format!("{}.csv", kind.name()));
        save_spectral(&data, &path)?;
        files.insert(kind.name().to_string(), sha256_hex(&fs::read(&path)?));
        paths.push(path);
    }
    let manifest = json!({
        "schema": crate::config::SCHEMA,
        "mode": "forward",
        "input_sha256": sha256_hex(serde_json::to_string(&inputs)?.as_bytes()),
        "area": &cfg.area,
        "length": d.q.length(),
        "ends": d.ends,
        "cot_alpha": d.bp.cot_alpha,
        "constants": &cfg.constants,
        "x_points": cfg.x_points,
        "kgrid": &cfg.kgrid,
        "mic_distance": cfg.mic_distance,
        "files": files,
    });
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(paths)
}

/// Scenario implied by a data kind; `None` for output impedance.
fn scenario_for(kind: ObservableKind) -> Option<Scenario> {
    Scenario::ALL.into_iter().find(|s| s.accepts(kind))
}

#[derive(Serialize)]
struct MemberReport {
    index: usize,
    params: BTreeMap<String, f64>,
    cot_alpha: Option<f64>,
    a0: Option<f64>,
    a_l: Option<f64>,
    certificate: Option<Certificate>,
    error: Option<String>,
}

pub struct InvertArgs<'a> {
    pub out: &'a Path,
    pub scenario: Option<Scenario>,
    pub kind: Option<ObservableKind>,
    pub data: Option<PathBuf>,
}

pub fn invert(cfg: &RunConfig, args: InvertArgs<'_>) -> Result<Outcome> {
    let path = match (&args.data, &cfg.data) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => cfg.resolve(p),
        (None, None) => bail!("no data file: pass one or set \"data\" in the configuration"),
    };
    let data = load_spectral(&path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(k) = args.kind {
        if k != data.kind {
            bail!("{} holds {} data, not {k}", path.display(), data.kind);
        }
    }
    fs::create_dir_all(args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let scenario = args.scenario.or(cfg.scenario);
    let is_impedance = matches!(data.kind, ObservableKind::OutputImpedance | ObservableKind::OutputImpedanceMag);
    if is_impedance {
        if let Some(s) = scenario {
            bail!("scenario {s} does not accept {} data", data.kind);
        }
        let [k1, k2] = cfg.endpoint_k;
        let e = endpoint_constants(&data, k1, k2, cfg.constants)?;
        write_json(&args.out.join("endpoints.json"), &json!({ "kind": data.kind, "k": [k1, k2], "endpoints": e }))?;
        return Ok(Outcome::Unique);
    }
    let scenario = match scenario {
        Some(s) => s,
        None => scenario_for(data.kind).context("no scenario accepts this data kind")?,
    };

    let mut opts = ReconstructOptions::new(cfg.length.unwrap_or(reference::LENGTH));
    opts.consts = cfg.constants;
    if let Some(n) = cfg.inverse_x_points {
        opts.x_points = n;
    }
    if let Some(t) = cfg.certificate_tolerance {
        opts.certificate_tolerance = t;
    }
    let res = match reconstruct(scenario, &data, cfg.side_info, opts) {
        Ok(r) => r,
        Err(Error::Inconsistent(msg)) => {
            write_json(
                &args.out.join("result.json"),
                &json!({ "scenario": scenario, "status": "inconsistent", "message": msg, "side_info": cfg.side_info }),
            )?;
            return Ok(Outcome::NonUnique);
        }
        Err(e) => return Err(e.into()),
    };
    write_result(cfg, &res, args.out)
}

fn write_result(cfg: &RunConfig, res: &ReconstructionResult, out: &Path) -> Result<Outcome> {
    let q_known = !res.eta_family.names().iter().any(|n| *n == PARAM_A_L || *n == PARAM_RATIO);
    if q_known {
        save(&potential_table(&res.potential, res.cot_alpha), &out.join("potential.csv"))?;
    }
    if let Some(eta) = &res.eta {
        save(&eta_table(eta)?, &out.join("eta.csv"))?;
    }
    if let Some(area) = &res.area {
        save(&area_table(area), &out.join("area.csv"))?;
    }
    let unique = res.family == Family::None;
    let result = json!({
        "scenario": res.scenario,
        "status": if unique { "unique" } else { "nonunique" },
        "data_kind": res.data.kind,
        "side_info": res.side,
        "length": res.options.length,
        "cot_alpha": res.cot_alpha,
        "a0": res.area.as_ref().map(|a| a.values()[0]),
        "a_l": res.area.as_ref().map(|a| *a.values().last().unwrap()),
        "eta_l": res.eta.as_ref().map(|e| e.at_end().0),
        "exceptional": res.eta.as_ref().map(|e| e.exceptional),
        "scale": res.scale,
        "certificate": res.certificate,
        "family": res.family,
    });
    write_json(&out.join("result.json"), &result)?;
    if unique {
        return Ok(Outcome::Unique);
    }

    let params = match &cfg.family_members {
        None => vec![],
        Some(MemberSelection::Keyword(_)) => default_parameter_grid(&res.family),
        Some(MemberSelection::List(v)) => v.clone(),
    };
    let members: Vec<MemberReport> = family_members(res, &params)
        .into_iter()
        .zip(params)
        .enumerate()
        .map(|(index, (m, params))| match m {
            Ok(m) => {
                let file = out.join(format!("member_{index:03}_area.csv"));
                let written = save(&area_table(&m.area), &file);
                MemberReport {
                    index,
                    params,
                    cot_alpha: Some(m.cot_alpha),
                    a0: Some(m.area.values()[0]),
                    a_l: m.area.values().last().copied(),
                    certificate: Some(m.certificate),
                    error: written.err().map(|e| format!("{e:#}")),
                }
            }
            Err(e) => MemberReport {
                index,
                params,
                cot_alpha: None,
                a0: None,
                a_l: None,
                certificate: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let family = json!({
        "scenario": res.scenario,
        "family": res.family,
        "eta_family": res.eta_family,
        "parameters": res.family.names(),
        "members": members,
    });
    write_json(&out.join("family.json"), &family)?;
    Ok(Outcome::NonUnique)
}

/// Reference-duct data set: every observable plus the duct itself.
pub fn example(out: &Path, kind: Option<ObservableKind>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let grid = default_observable_grid();
    let kinds = kind.map_or_else(|| ObservableKind::ALL.to_vec(), |k| vec![k]);
    let mut paths = Vec::new();
    let mut meta = None;
    for kind in kinds {
        let (data, m) = golden_dataset(kind, &grid)?;
        let path = out.join(format!("{}.csv", kind.name()));
        save_spectral(&data, &path)?;
        paths.push(path);
        meta = Some(m);
    }

    let model = ClosedFormModel::default();
    let n = reference::DEFAULT_X_POINTS;
    let x = model.x_grid(n)?;
    let eta: Vec<f64> = x.points().iter().map(|&x| model.eta(x).0).collect();
    let d_eta: Vec<f64> = x.points().iter().map(|&x| model.eta(x).1).collect();
    let tables = [
        ("area.csv", area_table(&model.area_function(n)?)),
        ("potential.csv", potential_table(&model.potential(n)?, Some(model.cot_alpha))),
        (
            "eta.csv",
            Table::from_columns(&["x", "eta", "d_eta"], &[x.points(), &eta, &d_eta])?
                .with_meta("kind", "relative_area")
                .with_meta("units", "dimensionless"),
        ),
        ("scattering.csv", scattering_table(&model, &grid)?),
    ];
    for (name, t) in tables {
        let path = out.join(name);
        save(&t, &path)?;
        paths.push(path);
    }
    write_json(
        &out.join("reference.json"),
        &json!({ "golden": meta, "model_ends": model.model_ends(), "constants": model.consts }),
    )?;
    Ok(paths)
}

fn scattering_table(model: &ClosedFormModel, grid: &RealGrid) -> Result<Table> {
    let (b, fs) = model.spectral(grid)?;
    let s = scattering_coefficients(&b)?;
    let split = |z: &[Complex64]| -> (Vec<f64>, Vec<f64>) { z.iter().map(|c| (c.re, c.im)).unzip() };
    let (fr, fi) = split(&fs.values);
    let (tr, ti) = split(&s.t);
    let (lr, li) = split(&s.l);
    let (rr, ri) = split(&s.r);
    let t = Table::from_columns(
        &["k", "f_re", "f_im", "t_re", "t_im", "l_re", "l_im", "r_re", "r_im"],
        &[grid.points(), &fr, &fi, &tr, &ti, &lr, &li, &rr, &ri],
    )?;
    Ok(t.with_meta("kind", "scattering").with_meta("units", "dimensionless"))
}

/// Golden CSVs in a directory; missing ones are regenerated on creation.
pub struct FileGolden {
    dir: PathBuf,
    pub regenerated: Vec<ObservableKind>,
}

impl FileGolden {
    pub fn prepare(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut regenerated = Vec::new();
        for kind in ObservableKind::ALL {
            let path = dir.join(format!("{}.csv", kind.name()));
            if !path.exists() {
                save_spectral(&golden_dataset(kind, &default_observable_grid())?.0, &path)?;
                regenerated.push(kind);
            }
        }
        Ok(Self { dir: dir.to_path_buf(), regenerated })
    }
}

impl GoldenSource for FileGolden {
    fn dataset(&self, kind: ObservableKind) -> horn_inverse::Result<SpectralData> {
        load_spectral(self.dir.join(format!("{}.csv", kind.name())))
    }
}

/// Runs the acceptance criteria and prints the matrix.
pub fn verify(cfg: &RunConfig, out: Option<&Path>) -> Result<Vec<CriterionReport>> {
    let ids: Vec<u8> = match &cfg.criteria {
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|(c, _)| c == *id)) {
                bail!("no criterion {bad}");
            }
            ids.clone()
        }
        None => CRITERIA.iter().map(|(id, _)| *id).collect(),
    };
    let golden_dir = match (out, &cfg.golden_dir) {
        (_, Some(d)) => Some(cfg.resolve(d)),
        (Some(o), None) => Some(o.join("golden")),
        (None, None) => None,
    };
    let reports = match golden_dir {
        Some(dir) => {
            let golden = FileGolden::prepare(&dir)?;
            if !golden.regenerated.is_empty() {
                let names: Vec<&str> = golden.regenerated.iter().map(|k| k.name()).collect();
                println!("regenerated golden files in {}: {}", dir.display(), names.join(", "));
            }
            verify::run(&ids, &cfg.tolerances, &golden)
        }
        None => verify::run(&ids, &cfg.tolerances, &verify::ExactGolden),
    };
    for r in &reports {
        println!("{}", r.render());
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    println!("{passed}/{} criteria pass", reports.len());
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
    }
    if let Some(o) = out {
        fs::create_dir_all(o)?;
        write_json(&o.join("verify.json"), &json!({ "tolerances": cfg.tolerances, "criteria": &reports }))?;
    }
    Ok(reports)
}
