//! CSV interchange for velocity clouds and snapshots.

use crate::error::{NanbuError, Result};
use crate::vec3::{Vec3, Velocity};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct CloudRow {
    vx: f64,
    vy: f64,
    vz: f64,
}

#[derive(Debug, Serialize)]
struct SnapshotRow {
    particle: usize,
    vx: f64,
    vy: f64,
    vz: f64,
}

fn csv_err(path: &Path, e: csv::Error) -> NanbuError {
    NanbuError::input(format!("{}: {e}", path.display()))
}

/// Read `vx,vy,vz` rows.
pub fn read_cloud(path: &Path) -> Result<Vec<Velocity>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut out = Vec::new();
    for row in rd.deserialize::<CloudRow>() {
        let r = row.map_err(|e| csv_err(path, e))?;
        let v = Vec3::new(r.vx, r.vy, r.vz);
        if !v.is_finite() {
            return Err(NanbuError::input(format!("{}: non-finite velocity", path.display())));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_cloud(path: &Path, cloud: &[Velocity]) -> Result<()> {
    let mut wr = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for v in cloud {
        wr.serialize(CloudRow { vx: v.x, vy: v.y, vz: v.z }).map_err(|e| csv_err(path, e))?;
    }
    wr.flush()?;
    Ok(())
}

/// One snapshot file with header `particle,vx,vy,vz`.
pub fn write_snapshot(path: &Path, cloud: &[Velocity]) -> Result<()> {
    let mut wr = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for (particle, v) in cloud.iter().enumerate() {
        wr.serialize(SnapshotRow { particle, vx: v.x, vy: v.y, vz: v.z }).map_err(|e| csv_err(path, e))?;
    }
    wr.flush()?;
    Ok(())
}
