//! Sampling grids and Țițeica-surface classification.
//!
//! A surface is classified as Țițeica when `K/d⁴` is constant over a grid
//! up to a relative spread tolerance.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::invariants::{invariant_report, InvariantReport};
use crate::surfaces::{DomainBox, SurfaceDef};

/// Fraction of the box width trimmed from each end of the grid.
pub const GRID_INSET: f64 = 0.01;
/// Minimum fraction of evaluated points for a verdict.
pub const MIN_EVALUATED: f64 = 0.75;

/// `nx × ny` points, row-major (y outer, x inner), endpoints inset by 1% of
/// the box extent on each side.
pub fn grid(domain: &DomainBox, nx: usize, ny: usize) -> Vec<(f64, f64)> {
    let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        let w = hi - lo;
        let (a, b) = (lo + GRID_INSET * w, hi - GRID_INSET * w);
        match n {
            0 => Vec::new(),
            1 => alloc::vec![0.5 * (a + b)],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    };
    let xs = axis(domain.x0, domain.x1, nx);
    let ys = axis(domain.y0, domain.y1, ny);
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
    pub outcome: core::result::Result<InvariantReport, String>,
}

impl PointRecord {
    pub fn ratio(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.ratio)
    }
}

/// Evaluate the full invariant report at every point; failures are kept
/// with their reason.
pub fn evaluate_grid(s: &SurfaceDef, points: &[(f64, f64)]) -> Vec<PointRecord> {
    points
        .iter()
        .map(|&(x, y)| {
            let outcome = s.eval(x, y).and_then(|sj| invariant_report(&sj, s.ambient())).map_err(|e| e.to_string());
            PointRecord { x, y, outcome }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyVerdict {
    pub is_titeica: bool,
    /// Median ratio; the constant `R_f` when `is_titeica`.
    pub r_f: f64,
    /// `max |ratio − median| / |median|` (absolute when the median is 0).
    pub spread: f64,
    pub points_evaluated: usize,
    pub points_skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: ClassifyVerdict,
    pub points: Vec<PointRecord>,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Verdict from a set of evaluated ratios.
pub fn verdict_from_ratios(ratios: &[f64], total: usize, tol: f64) -> Result<ClassifyVerdict> {
    if total == 0 {
        return Err(Error::Usage("classification grid is empty".into()));
    }
    let skipped = total - ratios.len();
    if ratios.is_empty() || (ratios.len() as f64) < MIN_EVALUATED * total as f64 {
        return Err(Error::Inconclusive { skipped, total });
    }
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    let med = median(&sorted);
    let scale = if med == 0.0 { 1.0 } else { med.abs() };
    let spread = sorted.iter().map(|r| (r - med).abs()).fold(0.0, f64::max) / scale;
    Ok(ClassifyVerdict {
        is_titeica: spread <= tol,
        r_f: med,
        spread,
        points_evaluated: ratios.len(),
        points_skipped: skipped,
    })
}

pub fn classify(s: &SurfaceDef, points: &[(f64, f64)], tol: f64) -> Result<Classification> {
    if points.is_empty() {
        return Err(Error::Usage("classification grid is empty".into()));
    }
    let records = evaluate_grid(s, points);
    let ratios: Vec<f64> = records.iter().filter_map(PointRecord::ratio).collect();
    let verdict = verdict_from_ratios(&ratios, records.len(), tol)?;
    Ok(Classification { verdict, points: records })
}
