use std::path::Path;

use clap::ValueEnum;

use maxtheta_core::energy::{self, EwaldSplit};
use maxtheta_core::lattice::reduce_to_fundamental;
use maxtheta_core::pointset::{self, ChargeMethod, PointConfig};
use maxtheta_core::theta2d::{self, ThetaQuery};
use maxtheta_core::verify::{self, ScanSpec};
use maxtheta_core::{Flavor, LatticeParam, SeriesBudget};

use crate::output::{Cell, Document, Format};
use crate::{CliError, EnergyArgs, EnergyKind, LatticeArgs, Method, PointsetCommand, ScanArgs, Suite, ThetaArgs, VerifyArgs};

fn notice(from: &LatticeParam, to: &LatticeParam, word: &impl std::fmt::Display) {
    eprintln!("note: reduced {from} to {to} via {word}");
}

/// Reduces unless told otherwise; flavors that need the reduced basis always reduce.
fn prepare(x: f64, y: f64, reduce: bool) -> Result<LatticeParam, CliError> {
    let l = LatticeParam::new(x, y)?;
    if !reduce || l.is_reduced() {
        return Ok(l);
    }
    let (r, w) = reduce_to_fundamental(&l)?;
    notice(&l, &r, &w);
    Ok(r)
}

fn need(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this kind")))
}

pub fn theta(a: &ThetaArgs) -> Result<Document, CliError> {
    if a.no_reduce && a.flavor == Flavor::Centered {
        return Err(CliError::Usage("the centered flavor is only defined in a reduced basis".into()));
    }
    let l = LatticeParam::new(a.lattice.x, a.lattice.y)?;
    let mut q = ThetaQuery::new(a.flavor, l, a.alpha);
    q.reduce = !a.no_reduce;
    if matches!(a.flavor, Flavor::Shifted | Flavor::Character) {
        q = q.with_shift(a.xi, a.eta);
    }
    let r = theta2d::evaluate(&q, &SeriesBudget::default())?;
    if r.reduced {
        notice(&l, &r.lattice, &r.word);
    }
    Ok(Document::record(vec![
        ("flavor", a.flavor.to_string().into()),
        ("x", r.lattice.x.into()),
        ("y", r.lattice.y.into()),
        ("alpha", a.alpha.into()),
        ("value", r.value.into()),
        ("radius", r.radius.into()),
        ("word", r.word.to_string().into()),
    ]))
}

pub fn scan(a: &ScanArgs) -> Result<Document, CliError> {
    let mut spec = ScanSpec::new(a.flavor, vec![a.alpha], a.nx, a.ny)?;
    spec.y_max = a.ymax;
    let tables = verify::scan_extremum(&spec)?;
    let t = &tables[0];
    let mut doc = Document::table(&["x", "y", "value"]);
    for &(x, y, v) in &t.points {
        doc.push(vec![x.into(), y.into(), v.into()]);
    }
    doc.note(if t.maximise { "argmax" } else { "argmin" }, t.argopt.to_string());
    doc.note("value", t.value);
    Ok(doc)
}

fn kind_name(k: EnergyKind) -> String {
    k.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

pub fn energy(a: &EnergyArgs) -> Result<Document, CliError> {
    let split = EwaldSplit::new(a.split)?;
    let lattice = |needs_reduced: bool| -> Result<LatticeParam, CliError> {
        if needs_reduced && a.no_reduce {
            return Err(CliError::Usage("centered energies are only defined in a reduced basis".into()));
        }
        prepare(need("x", a.x)?, need("y", a.y)?, !a.no_reduce)
    };
    let pot = || a.pot.clone().ok_or_else(|| CliError::Usage("--pot is required for this kind".into()));
    let mut fields: Vec<(&str, Cell)> = vec![("kind", kind_name(a.kind).into())];
    let value = match a.kind {
        EnergyKind::Pm | EnergyKind::C => {
            let l = lattice(a.kind == EnergyKind::C)?;
            let f = pot()?;
            fields.extend([("x", l.x.into()), ("y", l.y.into()), ("potential", f.to_string().into())]);
            if a.kind == EnergyKind::Pm {
                energy::energy_pm(&l, &f)?
            } else {
                energy::energy_c(&l, &f)?
            }
        }
        EnergyKind::EpsteinPm | EnergyKind::EpsteinC | EnergyKind::Epstein => {
            let l = lattice(a.kind == EnergyKind::EpsteinC)?;
            let s = need("s", a.s)?;
            fields.extend([("x", l.x.into()), ("y", l.y.into()), ("s", s.into())]);
            match a.kind {
                EnergyKind::EpsteinPm => energy::epstein_pm_split(&l, s, split)?,
                EnergyKind::EpsteinC => energy::epstein_c_split(&l, s, split)?,
                _ => energy::epstein_plain_split(&l, s, split)?,
            }
        }
        EnergyKind::Rocksalt => {
            let l = lattice(false)?;
            let (p, q, rho) = (need("p", a.p)?, need("q", a.q)?, need("rho", a.rho)?);
            fields.extend([
                ("x", l.x.into()),
                ("y", l.y.into()),
                ("p", p.into()),
                ("q", q.into()),
                ("rho", rho.into()),
            ]);
            energy::rocksalt_energy(&l, p, q, rho)?
        }
        EnergyKind::Madelung3d => {
            let s = need("s", a.s)?;
            fields.push(("s", s.into()));
            energy::madelung_nacl3d(s, split)?
        }
    };
    fields.push(("value", value.into()));
    Ok(Document::record(fields))
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Constants => "constants",
        Suite::Bounds => "bounds",
        Suite::Lemma1 => "lemma1",
        Suite::Lemma2 => "lemma2",
        Suite::Scan => "scan",
        Suite::Negativity => "negativity",
    }
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<(Document, Result<(), CliError>), CliError> {
    let reports = verify::run_suite(suite_name(a.suite), a.seed)?;
    let passed = reports.iter().all(|r| r.passed());
    let mut doc = Document::table(&["status", "suite", "check", "detail"]);
    for r in &reports {
        for l in &r.lines {
            let status = match (l.informational, l.passed) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            doc.push(vec![status.into(), r.suite.as_str().into(), l.name.as_str().into(), l.detail.as_str().into()]);
        }
    }
    if format == Format::Text {
        doc.text = Some(reports.iter().map(|r| r.to_string()).collect());
    }
    let verdict = if passed { Ok(()) } else { Err(CliError::VerificationFailed) };
    Ok((doc, verdict))
}

pub fn reduce(a: &LatticeArgs) -> Result<Document, CliError> {
    let l = LatticeParam::new(a.x, a.y)?;
    let (r, w) = reduce_to_fundamental(&l)?;
    let [[m00, m01], [m10, m11]] = w.matrix;
    Ok(Document::record(vec![
        ("x", r.x.into()),
        ("y", r.y.into()),
        ("word", w.to_string().into()),
        ("matrix", format!("[[{m00},{m01}],[{m10},{m11}]]").into()),
    ]))
}

fn load(path: &Path) -> Result<PointConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg = if path.extension().is_some_and(|e| e == "json") {
        PointConfig::from_json(&text)?
    } else {
        PointConfig::from_csv(&text)?
    };
    Ok(cfg)
}

fn points_doc(cfg: &PointConfig) -> Document {
    match &cfg.charges {
        Some(c) => {
            let mut doc = Document::table(&["x", "y", "charge"]);
            for (p, q) in cfg.points.iter().zip(c) {
                doc.push(vec![p[0].into(), p[1].into(), (*q as i64).into()]);
            }
            doc
        }
        None => {
            let mut doc = Document::table(&["x", "y"]);
            for p in &cfg.points {
                doc.push(vec![p[0].into(), p[1].into()]);
            }
            doc
        }
    }
}

pub fn pointset(c: &PointsetCommand) -> Result<Document, CliError> {
    match c {
        PointsetCommand::Delaunay { file } => {
            let cfg = load(file)?;
            let tri = pointset::delaunay(&cfg.points)?;
            let mut doc = Document::table(&["i", "j", "k"]);
            for t in &tri.triangles {
                doc.push(t.iter().map(|&v| Cell::from(v)).collect());
            }
            doc.note("triangles", tri.triangles.len());
            doc.note("edges", tri.edges.len());
            doc.note("midpoints", tri.midpoints.len());
            Ok(doc)
        }
        PointsetCommand::Charges { file, pot, method, seed } => {
            let cfg = load(file)?;
            let m = match method {
                Method::Exhaustive => ChargeMethod::Exhaustive,
                Method::Anneal => ChargeMethod::Anneal { seed: *seed },
            };
            let r = pointset::charge_energy(&cfg, pot, m)?;
            let mut doc = points_doc(&cfg.with_charges(r.charges)?);
            doc.note("energy_per_point", r.energy_per_point);
            Ok(doc)
        }
        PointsetCommand::Center { file, pot } => {
            let cfg = load(file)?;
            let e = pointset::center_energy(&cfg, pot)?;
            Ok(Document::record(vec![
                ("value", e.value.into()),
                ("mx", e.midpoint[0].into()),
                ("my", e.midpoint[1].into()),
            ]))
        }
        PointsetCommand::Patch { kind, radius } => {
            let cfg = pointset::make_patch(*kind, *radius)?;
            let mut doc = points_doc(&cfg);
            doc.note("points", cfg.len());
            Ok(doc)
        }
    }
}
