//! Centro-affine maps `f ↦ f·A` and numerical verification of the scaling
//! law `K̄/d̄⁴ = (det A)⁻² · K/d⁴`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::invariants::{oriented_volumes, titeica_ratio};
use crate::jet::Jet2;
use crate::linalg::{det3, mat_mul, Mat3, IDENTITY};
use crate::surfaces::{AmbientForm, SurfaceDef};

const MIN_DET: f64 = 1e-12;

/// Invertible 3×3 matrix acting on row vectors from the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroAffineMap {
    a: Mat3,
    det: f64,
}

impl CentroAffineMap {
    pub fn new(a: Mat3) -> Result<Self> {
        let det = det3(&a);
        if !(det.abs() > MIN_DET) {
            return Err(Error::SingularMatrix { det });
        }
        Ok(CentroAffineMap { a, det })
    }

    /// Row-major entries `a11, a12, a13, a21, ...`.
    pub fn from_row_major(v: &[f64]) -> Result<Self> {
        if v.len() != 9 {
            return Err(Error::Usage(format!("matrix needs 9 entries, got {}", v.len())));
        }
        Self::new([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
    }

    pub fn identity() -> Self {
        CentroAffineMap { a: IDENTITY, det: 1.0 }
    }

    pub fn scaling(lambda: f64) -> Result<Self> {
        Self::new([[lambda, 0.0, 0.0], [0.0, lambda, 0.0], [0.0, 0.0, lambda]])
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.a
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `self · other`, i.e. apply `self` first, then `other`.
    pub fn then(&self, other: &CentroAffineMap) -> Result<Self> {
        Self::new(mat_mul(&self.a, &other.a))
    }

    fn act(&self, f: &[Jet2; 3]) -> [Jet2; 3] {
        let a = &self.a;
        let col = |k: usize| f[0] * a[0][k] + f[1] * a[1][k] + f[2] * a[2][k];
        [col(0), col(1), col(2)]
    }
}

/// Image surface `f̄(x, y) = f(x, y)·A` on the same parameter box.
pub fn apply_map(s: &SurfaceDef, map: &CentroAffineMap) -> Result<SurfaceDef> {
    if s.ambient() != AmbientForm::Euclidean {
        return Err(Error::NotEuclidean);
    }
    let inner = s.clone();
    let map = *map;
    Ok(SurfaceDef::parametric(format!("{}*A", s.name()), s.domain(), AmbientForm::Euclidean, move |x, y| {
        Ok(map.act(&inner.position_jets(x, y)?))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub x: f64,
    pub y: f64,
    pub ratio_before: f64,
    pub ratio_after: f64,
    pub expected_after: f64,
    /// `|after − before/det²| / max(1, |before/det²|)`
    pub ratio_residual: f64,
    pub volume_before: f64,
    pub volume_after: f64,
    /// relative error of `V̄ = det·V`
    pub volume_residual: f64,
    /// relative error of `V̄x V̄y − V̄xy² = det²(Vx Vy − Vxy²)`
    pub numerator_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub x: f64,
    pub y: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub det: f64,
    /// `1/det²`
    pub scale_factor: f64,
    pub points: Vec<ScalingPoint>,
    pub skipped: Vec<SkippedPoint>,
    pub max_ratio_residual: f64,
    pub max_volume_residual: f64,
    pub max_numerator_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn rel_err(actual: f64, expected: f64) -> f64 {
    let diff = (actual - expected).abs();
    if expected == 0.0 {
        diff
    } else {
        diff / expected.abs()
    }
}

fn check_point(s: &SurfaceDef, image: &SurfaceDef, det: f64, x: f64, y: f64) -> Result<ScalingPoint> {
    let before = s.eval(x, y)?;
    let after = image.eval(x, y)?;
    let ratio_before = titeica_ratio(&before, AmbientForm::Euclidean)?;
    let ratio_after = titeica_ratio(&after, AmbientForm::Euclidean)?;
    let expected_after = ratio_before / (det * det);
    let vb = oriented_volumes(&before);
    let va = oriented_volumes(&after);
    Ok(ScalingPoint {
        x,
        y,
        ratio_before,
        ratio_after,
        expected_after,
        ratio_residual: (ratio_after - expected_after).abs() / expected_after.abs().max(1.0),
        volume_before: vb.v,
        volume_after: va.v,
        volume_residual: rel_err(va.v, det * vb.v),
        numerator_residual: rel_err(va.numerator(), det * det * vb.numerator()),
    })
}

/// Compare `K/d⁴` before and after `map` at matched parameter points.
///
/// Points where either side is singular are listed in `skipped`; a run in
/// which every point is skipped is an error.
pub fn verify_scaling(s: &SurfaceDef, map: &CentroAffineMap, points: &[(f64, f64)], tol: f64) -> Result<ScalingReport> {
    let image = apply_map(s, map)?;
    let det = map.det();
    let mut report = ScalingReport {
        det,
        scale_factor: 1.0 / (det * det),
        points: Vec::new(),
        skipped: Vec::new(),
        max_ratio_residual: 0.0,
        max_volume_residual: 0.0,
        max_numerator_residual: 0.0,
        tol,
        pass: false,
    };
    for &(x, y) in points {
        match check_point(s, &image, det, x, y) {
            Ok(p) => {
                report.max_ratio_residual = report.max_ratio_residual.max(p.ratio_residual);
                report.max_volume_residual = report.max_volume_residual.max(p.volume_residual);
                report.max_numerator_residual = report.max_numerator_residual.max(p.numerator_residual);
                report.points.push(p);
            }
            Err(e) => report.skipped.push(SkippedPoint { x, y, reason: e.to_string() }),
        }
    }
    if report.points.is_empty() {
        return Err(Error::AllSkipped);
    }
    report.pass =
        report.max_ratio_residual <= tol && report.max_volume_residual <= tol && report.max_numerator_residual <= tol;
    Ok(report)
}
