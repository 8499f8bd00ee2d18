//! File formats: curve JSON, invariant-profile CSV, symmetry JSON, and the
//! order-report JSON. Decimal formats carry at least 16 significant digits
//! so values round-trip through text.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::OrderReport;
use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::frames::InvariantProfile;
use crate::heis::{HPoint, Symmetry};
use nalgebra::DMatrix;

#[derive(Debug, Serialize, Deserialize)]
pub struct CurveJson {
    pub n: usize,
    pub params: Vec<f64>,
    /// one row per sample, ordered x₁…x_n, y₁…y_n, z
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_arclength: Option<bool>,
}

impl CurveJson {
    pub fn from_curve(c: &SampledCurve) -> Self {
        CurveJson {
            n: c.n(),
            params: c.params().to_vec(),
            points: c.points().iter().map(|p| p.coords()).collect(),
            is_arclength: Some(c.is_arclength()),
        }
    }

    pub fn into_curve(self) -> Result<SampledCurve> {
        let points = self
            .points
            .iter()
            .map(|row| {
                if row.len() != 2 * self.n + 1 {
                    return Err(Error::Parse(format!(
                        "point row has {} coordinates, expected {}",
                        row.len(),
                        2 * self.n + 1
                    )));
                }
                HPoint::from_coords(row)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledCurve::new(self.n, self.params, points, self.is_arclength.unwrap_or(false))
    }
}

pub fn read_curve(path: &Path) -> Result<SampledCurve> {
    let text = std::fs::read_to_string(path)?;
    let json: CurveJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    json.into_curve()
}

pub fn write_curve(path: &Path, c: &SampledCurve) -> Result<()> {
    let json = CurveJson::from_curve(c);
    let text = serde_json::to_string_pretty(&json).expect("curve serialization");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// CSV with header `s,kappa_1,…,kappa_n,tau`, one row per grid point.
pub fn profile_to_csv(profile: &InvariantProfile) -> String {
    let mut out = String::from("s");
    for j in 1..=profile.n {
        out.push_str(&format!(",kappa_{j}"));
    }
    out.push_str(",tau\n");
    for i in 0..profile.len() {
        out.push_str(&format!("{:.16e}", profile.s_grid[i]));
        for k in &profile.kappas {
            out.push_str(&format!(",{:.16e}", k[i]));
        }
        out.push_str(&format!(",{:.16e}\n", profile.tau[i]));
    }
    out
}

pub fn profile_from_csv(text: &str) -> Result<InvariantProfile> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty profile CSV".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"s") || cols.last() != Some(&"tau") || cols.len() < 3 {
        return Err(Error::Parse(format!("bad profile header: {header}")));
    }
    let n = cols.len() - 2;
    for (j, c) in cols[1..=n].iter().enumerate() {
        if *c != format!("kappa_{}", j + 1) {
            return Err(Error::Parse(format!("bad profile header column: {c}")));
        }
    }
    let mut s_grid = Vec::new();
    let mut kappas = vec![Vec::new(); n];
    let mut tau = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n + 2 {
            return Err(Error::Parse(format!("bad profile row: {line}")));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number: {s}")))
        };
        s_grid.push(parse(fields[0])?);
        for j in 0..n {
            kappas[j].push(parse(fields[1 + j])?);
        }
        tau.push(parse(fields[n + 1])?);
    }
    InvariantProfile::new(n, s_grid, kappas, tau)
}

pub fn read_profile(path: &Path) -> Result<InvariantProfile> {
    profile_from_csv(&std::fs::read_to_string(path)?)
}

pub fn write_profile(path: &Path, profile: &InvariantProfile) -> Result<()> {
    std::fs::write(path, profile_to_csv(profile))?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SymmetryJson {
    pub n: usize,
    /// 2n×2n rotation block, row-major
    pub rotation: Vec<f64>,
    /// translation coordinates x₁…x_n, y₁…y_n, z
    pub translation: Vec<f64>,
}

impl SymmetryJson {
    pub fn from_symmetry(phi: &Symmetry) -> Self {
        let n = phi.n();
        let r = phi.rotation();
        let mut rotation = Vec::with_capacity(4 * n * n);
        for i in 0..2 * n {
            for j in 0..2 * n {
                rotation.push(r[(i, j)]);
            }
        }
        SymmetryJson {
            n,
            rotation,
            translation: phi.translation().coords(),
        }
    }

    pub fn into_symmetry(self) -> Result<Symmetry> {
        let dim = 2 * self.n;
        if self.rotation.len() != dim * dim {
            return Err(Error::Parse(format!(
                "rotation must have {} entries, got {}",
                dim * dim,
                self.rotation.len()
            )));
        }
        let rotation = DMatrix::from_row_slice(dim, dim, &self.rotation);
        Symmetry::new(rotation, HPoint::from_coords(&self.translation)?)
    }
}

pub fn write_symmetry(path: &Path, phi: &Symmetry) -> Result<()> {
    let text = serde_json::to_string_pretty(&SymmetryJson::from_symmetry(phi)).expect("symmetry");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_symmetry(path: &Path) -> Result<Symmetry> {
    let text = std::fs::read_to_string(path)?;
    let json: SymmetryJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    json.into_symmetry()
}

pub fn write_report(path: &Path, report: &OrderReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report");
    std::fs::write(path, text + "\n")?;
    Ok(())
}
