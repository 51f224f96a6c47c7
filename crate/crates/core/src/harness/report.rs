use super::config::ScanConfig;
use crate::error::{NanbuError, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::cmp::Ordering;
use std::path::Path;

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub statistic: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: f64,
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub seed: u64,
}

impl ScanRow {
    fn key_cmp(&self, o: &Self) -> Ordering {
        self.statistic
            .cmp(&o.statistic)
            .then(self.n.cmp(&o.n))
            .then(self.k.total_cmp(&o.k))
            .then(self.t.total_cmp(&o.t))
    }
}

pub fn sort_rows(rows: &mut [ScanRow]) {
    rows.sort_by(|a, b| a.key_cmp(b));
}

pub fn version_string() -> String {
    format!("nanbu-v{}", env!("CARGO_PKG_VERSION"))
}

pub fn config_hash(config: &ScanConfig) -> String {
    Sha256::digest(config.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub version: String,
    pub command: &'a str,
    pub config_sha256: String,
    pub config: &'a ScanConfig,
    pub rows: usize,
    pub summary: serde_json::Value,
}

/// Write `results.csv` (sorted by statistic, N, K, t) and `manifest.json`
/// into `dir`. Same rows and config give byte-identical files.
pub fn emit_report(rows: &[ScanRow], dir: &Path, command: &str, config: &ScanConfig, summary: serde_json::Value) -> Result<()> {
    if rows.is_empty() {
        return Err(NanbuError::input("no result rows to write"));
    }
    std::fs::create_dir_all(dir)?;
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    write_csv(&sorted, &dir.join("results.csv"))?;
    let manifest = Manifest {
        version: version_string(),
        command,
        config_sha256: config_hash(config),
        config,
        rows: sorted.len(),
        summary,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| NanbuError::input(e.to_string()))?;
    std::fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}

pub fn write_csv(rows: &[ScanRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ScanRow>> {
    #[derive(serde::Deserialize)]
    struct Raw {
        statistic: String,
        #[serde(rename = "N")]
        n: usize,
        #[serde(rename = "K")]
        k: f64,
        t: f64,
        value: f64,
        stderr: f64,
        replicas: usize,
        seed: u64,
    }
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize::<Raw>()
        .map(|row| {
            let x = row.map_err(csv_err)?;
            Ok(ScanRow { statistic: x.statistic, n: x.n, k: x.k, t: x.t, value: x.value, stderr: x.stderr, replicas: x.replicas, seed: x.seed })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> NanbuError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => NanbuError::Io(io),
        other => NanbuError::input(format!("csv: {other:?}")),
    }
}
