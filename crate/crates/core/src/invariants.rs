//! Fundamental forms, Gaussian curvature, tangent-plane distance, the four
//! oriented volumes and the ratio `K/d⁴` at a point.
//!
//! The ambient form may be Euclidean or Minkowski. The normal is the
//! Euclidean cross product `c = f_x × f_y` with the ambient signature applied
//! componentwise, `n = S c`, which is orthogonal to the tangent plane under
//! the ambient form. Two routes to `K/d⁴` are exposed:
//!
//! * the metric route, `K` from the fundamental forms and `d` from the normal;
//! * the volume route, `det(S) · (Vx Vy − Vxy²) / V⁴`.
//!
//! Their difference is reported as the identity residual.

use libm::sqrt;

use crate::error::{Error, Result};
use crate::linalg::{cross, det_rows, Vec3};
use crate::surfaces::{AmbientForm, SurfaceJet};

/// Threshold below which `|V|`, `d`, `EG − F²` or `⟨n,n⟩` count as singular.
pub const EPS_SING: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl FundamentalForms {
    pub fn first_det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn second_det(&self) -> f64 {
        self.l * self.n - self.m * self.m
    }
}

/// Oriented volumes: rows (second partial or position, `f_x`, `f_y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Volumes {
    pub vx: f64,
    pub vy: f64,
    pub vxy: f64,
    pub v: f64,
}

impl Volumes {
    /// `Vx Vy − Vxy²`
    pub fn numerator(&self) -> f64 {
        self.vx * self.vy - self.vxy * self.vxy
    }
}

/// Everything computed at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub forms: FundamentalForms,
    pub k: f64,
    pub d: f64,
    pub volumes: Volumes,
    pub ratio: f64,
    pub identity_residual: f64,
}

/// Ambient normal `S (f_x × f_y)` and its squared ambient length.
fn ambient_normal(sj: &SurfaceJet, amb: AmbientForm) -> (Vec3, f64) {
    let n = amb.raise(&cross(&sj.f_x, &sj.f_y));
    let nn = amb.inner(&n, &n);
    (n, nn)
}

fn checked_normal(sj: &SurfaceJet, amb: AmbientForm) -> Result<(Vec3, f64)> {
    let e = amb.inner(&sj.f_x, &sj.f_x);
    let f = amb.inner(&sj.f_x, &sj.f_y);
    let g = amb.inner(&sj.f_y, &sj.f_y);
    let gram = e * g - f * f;
    if !(gram.abs() > EPS_SING) {
        return Err(Error::Regularity { gram });
    }
    let (n, nn) = ambient_normal(sj, amb);
    if !(nn.abs() > EPS_SING) {
        return Err(Error::NullNormal { norm: nn });
    }
    Ok((n, nn))
}

pub fn fundamental_forms(sj: &SurfaceJet, amb: AmbientForm) -> Result<FundamentalForms> {
    let (n, nn) = checked_normal(sj, amb)?;
    let len = sqrt(nn.abs());
    let unit = [n[0] / len, n[1] / len, n[2] / len];
    Ok(FundamentalForms {
        e: amb.inner(&sj.f_x, &sj.f_x),
        f: amb.inner(&sj.f_x, &sj.f_y),
        g: amb.inner(&sj.f_y, &sj.f_y),
        l: amb.inner(&sj.f_xx, &unit),
        m: amb.inner(&sj.f_xy, &unit),
        n: amb.inner(&sj.f_yy, &unit),
    })
}

/// `sign⟨n,n⟩ · (LN − M²)/(EG − F²)`; the sign factor is 1 in Euclidean space.
pub fn gaussian_curvature(sj: &SurfaceJet, amb: AmbientForm) -> Result<f64> {
    let (_, nn) = checked_normal(sj, amb)?;
    let forms = fundamental_forms(sj, amb)?;
    Ok(nn.signum() * forms.second_det() / forms.first_det())
}

/// Distance from the origin to the tangent plane, `|⟨f, n⟩| / √|⟨n,n⟩|`.
pub fn tangent_distance(sj: &SurfaceJet, amb: AmbientForm) -> Result<f64> {
    let (n, nn) = checked_normal(sj, amb)?;
    Ok(amb.inner(&sj.f, &n).abs() / sqrt(nn.abs()))
}

pub fn oriented_volumes(sj: &SurfaceJet) -> Volumes {
    Volumes {
        vx: det_rows(&sj.f_xx, &sj.f_x, &sj.f_y),
        vy: det_rows(&sj.f_yy, &sj.f_x, &sj.f_y),
        vxy: det_rows(&sj.f_xy, &sj.f_x, &sj.f_y),
        v: det_rows(&sj.f, &sj.f_x, &sj.f_y),
    }
}

/// `K/d⁴` via curvature and distance. Fails at points with `d < EPS_SING`.
pub fn titeica_ratio(sj: &SurfaceJet, amb: AmbientForm) -> Result<f64> {
    let k = gaussian_curvature(sj, amb)?;
    let d = tangent_distance(sj, amb)?;
    if !(d >= EPS_SING) {
        return Err(Error::Singular { what: "tangent-plane distance d", value: d });
    }
    Ok(k / (d * d * d * d))
}

/// `det(S) · (Vx Vy − Vxy²) / V⁴`. Fails at points with `|V| < EPS_SING`.
pub fn volume_ratio(sj: &SurfaceJet, amb: AmbientForm) -> Result<f64> {
    let vol = oriented_volumes(sj);
    if !(vol.v.abs() >= EPS_SING) {
        return Err(Error::Singular { what: "oriented volume V", value: vol.v });
    }
    let v2 = vol.v * vol.v;
    Ok(amb.det() * vol.numerator() / (v2 * v2))
}

/// `|K/d⁴ − det(S)(Vx Vy − Vxy²)/V⁴|`
pub fn identity_residual(sj: &SurfaceJet, amb: AmbientForm) -> Result<f64> {
    let by_volume = volume_ratio(sj, amb)?;
    let by_metric = titeica_ratio(sj, amb)?;
    Ok((by_metric - by_volume).abs())
}

pub fn invariant_report(sj: &SurfaceJet, amb: AmbientForm) -> Result<InvariantReport> {
    let forms = fundamental_forms(sj, amb)?;
    let k = gaussian_curvature(sj, amb)?;
    let d = tangent_distance(sj, amb)?;
    let ratio = titeica_ratio(sj, amb)?;
    let identity_residual = identity_residual(sj, amb)?;
    Ok(InvariantReport { forms, k, d, volumes: oriented_volumes(sj), ratio, identity_residual })
}
