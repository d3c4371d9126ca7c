//! CSV and JSON-lines writers for membership maps, ray families and oracle sets.
//!
//! Numbers are printed in their shortest round-trip decimal form, lines end
//! in LF, and rows follow grid-node or sweep order, so identical inputs give
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ces_pareto::pareto::{OracleSet, RayFamily};
use ces_pareto::scenario::OutputFormat;
use ces_pareto::DerivedCriteria;
use ces_pareto_service::compute::ReduceResponse;
use serde_json::json;

pub fn extension(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Jsonl => "jsonl",
    }
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn finish(path: PathBuf, mut writer: BufWriter<File>) -> Result<PathBuf> {
    writer
        .flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// `k,l,tier,lambda`, one row per grid node.
pub fn write_membership(dir: &Path, format: OutputFormat, map: &ReduceResponse) -> Result<PathBuf> {
    let (path, mut w) = create(dir, &format!("membership.{}", extension(format)))?;
    if format == OutputFormat::Csv {
        writeln!(w, "k,l,tier,lambda")?;
    }
    for i in 0..map.k.len() {
        let (k, l, tier, lambda) = (map.k[i], map.l[i], map.tier[i].as_str(), map.lambda[i]);
        match format {
            OutputFormat::Csv => writeln!(w, "{k},{l},{tier},{lambda}")?,
            OutputFormat::Jsonl => writeln!(
                w,
                "{}",
                json!({"k": k, "l": l, "tier": tier, "lambda": lambda})
            )?,
        }
    }
    finish(path, w)
}

/// `source,kind,rho,lambda1,lambda2,lambda3,lambda4`, one row per swept ray;
/// `lambda4` is empty for three-weight kinds.
pub fn write_rays(
    dir: &Path,
    format: OutputFormat,
    families: &[RayFamily<f64>],
) -> Result<PathBuf> {
    let (path, mut w) = create(dir, &format!("rays.{}", extension(format)))?;
    if format == OutputFormat::Csv {
        writeln!(w, "source,kind,rho,lambda1,lambda2,lambda3,lambda4")?;
    }
    for family in families {
        for ray in &family.rays {
            let source = family.source.as_str();
            let kind = family.kind.as_str();
            let weights = ray.weights.values();
            match format {
                OutputFormat::Csv => {
                    let mut cells: Vec<String> = weights.iter().map(f64::to_string).collect();
                    cells.resize(4, String::new());
                    writeln!(w, "{source},{kind},{},{}", ray.ratio, cells.join(","))?;
                }
                OutputFormat::Jsonl => writeln!(
                    w,
                    "{}",
                    json!({"source": source, "kind": kind, "rho": ray.ratio, "lambda": weights})
                )?,
            }
        }
    }
    finish(path, w)
}

/// `k,l,nondominated,<criteria labels>`, one row per grid node.
pub fn write_oracle(
    dir: &Path,
    format: OutputFormat,
    oracle: &OracleSet<f64>,
    criteria: &DerivedCriteria<f64>,
) -> Result<PathBuf> {
    let name = format!("oracle-{}.{}", oracle.kind.as_str(), extension(format));
    let (path, mut w) = create(dir, &name)?;
    let labels = criteria.labels();
    if format == OutputFormat::Csv {
        writeln!(w, "k,l,nondominated,{}", labels.join(","))?;
    }
    for (i, (x, values)) in oracle.points.iter().zip(&oracle.values).enumerate() {
        let nd = oracle.contains(i);
        match format {
            OutputFormat::Csv => {
                let cells: Vec<String> = values.iter().map(f64::to_string).collect();
                writeln!(
                    w,
                    "{},{},{},{}",
                    x.capital,
                    x.labor,
                    u8::from(nd),
                    cells.join(",")
                )?;
            }
            OutputFormat::Jsonl => {
                let mut row = serde_json::Map::new();
                row.insert("k".into(), json!(x.capital));
                row.insert("l".into(), json!(x.labor));
                row.insert("nondominated".into(), json!(nd));
                for (label, value) in labels.iter().zip(values) {
                    row.insert((*label).into(), json!(value));
                }
                writeln!(w, "{}", serde_json::Value::Object(row))?;
            }
        }
    }
    finish(path, w)
}

/// Pretty-printed JSON document with a trailing newline.
pub fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<PathBuf> {
    let (path, mut w) = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    finish(path, w)
}
