use std::fmt;
use std::fs;
use std::path::Path;

use qsdc_core::adversary::{joint_info, p_e_max, p_e_retrieve, p_e_retrieve_physical};
use serde::Serialize;

use crate::Result;

/// Sampling step for every swept quantity.
pub const STEP_DIVISIONS: u32 = 200;
pub const KEY_BITS: [u32; 4] = [2, 4, 8, 16];
pub const ESTIMATION_LEVELS: [f64; 7] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875];

/// `k / 200` for `k = 0..=last`, so 0.25 and 0.5 land exactly on the grid.
fn grid(last: u32) -> impl Iterator<Item = f64> {
    (0..=last).map(|k| f64::from(k) / f64::from(STEP_DIVISIONS))
}

/// Detection levels the physical chain accepts, `[0, 0.5]`.
fn physical_totals() -> impl Iterator<Item = f64> {
    grid(STEP_DIVISIONS / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointInfoRow {
    pub total: f64,
    pub joint_info_bits: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimationRow {
    pub total: f64,
    pub p_e_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RetrievalRow {
    pub total: f64,
    pub n: u32,
    pub p_e_retrieve: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p_e_m: f64,
    pub total: f64,
    pub n: u32,
    pub p_e_retrieve: f64,
}

pub fn joint_info_curve() -> Result<Vec<JointInfoRow>> {
    physical_totals().map(|total| Ok(JointInfoRow { total, joint_info_bits: joint_info(total)? })).collect()
}

pub fn estimation_curve() -> Result<Vec<EstimationRow>> {
    physical_totals().map(|total| Ok(EstimationRow { total, p_e_max: p_e_max(total)? })).collect()
}

pub fn retrieval_curve() -> Result<Vec<RetrievalRow>> {
    let mut rows = Vec::new();
    for n in KEY_BITS {
        for total in physical_totals() {
            rows.push(RetrievalRow { total, n, p_e_retrieve: p_e_retrieve_physical(total, n)? });
        }
    }
    Ok(rows)
}

/// Both retrieval factors swept independently, detection over `[0, 1]`.
pub fn retrieval_sweep() -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for p_e_m in ESTIMATION_LEVELS {
        for n in KEY_BITS {
            for total in grid(STEP_DIVISIONS) {
                rows.push(SweepRow { p_e_m, total, n, p_e_retrieve: p_e_retrieve(p_e_m, total, n)? });
            }
        }
    }
    Ok(rows)
}

/// A published spot value next to what the closed forms give.
#[derive(Clone, Copy, Debug)]
pub struct SpotCheck {
    pub name: &'static str,
    pub published: f64,
    /// The value held to `rel_tol`; differs from `published` only under a
    /// waiver.
    pub expected: f64,
    pub computed: f64,
    pub rel_tol: f64,
    pub waiver: Option<&'static str>,
}

impl SpotCheck {
    fn new(name: &'static str, published: f64, computed: f64, rel_tol: f64) -> Self {
        Self { name, published, expected: published, computed, rel_tol, waiver: None }
    }

    fn waived(name: &'static str, published: f64, expected: f64, computed: f64, note: &'static str) -> Self {
        Self { name, published, expected, computed, rel_tol: 0.01, waiver: Some(note) }
    }

    pub fn passed(&self) -> bool {
        (self.computed - self.expected).abs() <= self.rel_tol * self.expected.abs()
    }
}

impl fmt::Display for SpotCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.passed(), self.waiver) {
            (false, _) => "FAIL",
            (true, None) => "ok",
            (true, Some(_)) => "waived",
        };
        write!(
            f,
            "{:<6} {:<34} computed {:<12.4e} published {:<10.3e} tol {}%",
            tag,
            self.name,
            self.computed,
            self.published,
            self.rel_tol * 100.0
        )?;
        if let Some(note) = self.waiver {
            write!(f, "  [{note}]")?;
        }
        Ok(())
    }
}

pub fn spot_checks() -> Result<Vec<SpotCheck>> {
    let mut v = vec![SpotCheck::new("joint_info(total=0.25)", 0.5, joint_info(0.25)?, 1e-12)];
    for (name, total, published) in [
        ("p_e_retrieve(n=16, total=0)", 0.0, 1.53e-5),
        ("p_e_retrieve(n=16, total=0.125)", 0.125, 7.7e-4),
        ("p_e_retrieve(n=16, total=0.25)", 0.25, 3.91e-4),
        ("p_e_retrieve(n=16, total=0.5)", 0.5, 5.96e-8),
    ] {
        v.push(SpotCheck::new(name, published, p_e_retrieve_physical(total, 16)?, 0.01));
    }
    for (name, n, published) in [
        ("p_e_retrieve(p_e_m=0.5, total=0, n=2)", 2, 0.5),
        ("p_e_retrieve(p_e_m=0.5, total=0, n=4)", 4, 0.25),
        ("p_e_retrieve(p_e_m=0.5, total=0, n=8)", 8, 0.0625),
        ("p_e_retrieve(p_e_m=0.5, total=0, n=16)", 16, 3.91e-3),
    ] {
        v.push(SpotCheck::new(name, published, p_e_retrieve(0.5, 0.0, n)?, 0.01));
    }
    v.push(SpotCheck::new("p_e_retrieve(p_e_m=0.125, total=0.5, n=16)", 2.32e-10, p_e_retrieve(0.125, 0.5, 16)?, 0.01));
    v.push(SpotCheck::waived(
        "p_e_retrieve(n=2, total=0.25)",
        0.408,
        0.375,
        p_e_retrieve_physical(0.25, 2)?,
        "published 0.408 disagrees with the closed form 0.5 * 0.75 = 0.375; the n=16 point on the same curve agrees with the closed form",
    ));
    v.push(SpotCheck::waived(
        "p_e_max(total=0.25)",
        0.25,
        0.5,
        p_e_max(0.25)?,
        "prose quotes 25% while the closed form gives (sqrt(2 - 1) + 1)/4 = 0.5",
    ));
    Ok(v)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the four curve tables and `summary.txt` into `dir`.
pub fn write_curves(dir: &Path) -> Result<Vec<SpotCheck>> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("fig2a.csv"), &joint_info_curve()?)?;
    write_csv(&dir.join("fig2b.csv"), &estimation_curve()?)?;
    write_csv(&dir.join("fig2c.csv"), &retrieval_curve()?)?;
    write_csv(&dir.join("fig2de.csv"), &retrieval_sweep()?)?;
    let checks = spot_checks()?;
    let mut summary: String = checks.iter().map(|c| format!("{c}\n")).collect();
    let failed = checks.iter().filter(|c| !c.passed()).count();
    summary.push_str(&format!("{} of {} spot values within tolerance\n", checks.len() - failed, checks.len()));
    fs::write(dir.join("summary.txt"), summary)?;
    Ok(checks)
}
