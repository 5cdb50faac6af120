//! Monge patches, parametric surfaces and the built-in surface catalog.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jet::{Axis, Jet2, JetError, Scalar};
use crate::linalg::Vec3;

/// Named real parameters for catalog entries (e.g. `R`, `c`).
pub type Params = BTreeMap<String, f64>;

pub type MongeFn = dyn Fn(Jet2, Jet2) -> Result<Jet2, JetError> + Send + Sync;
pub type ParametricFn = dyn Fn(Jet2, Jet2) -> Result<[Jet2; 3], JetError> + Send + Sync;

/// Closed rectangle `[x0, x1] × [y0, y1]`; evaluation requires the open interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl DomainBox {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        DomainBox { x0, x1, y0, y1 }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x0 && x < self.x1 && y > self.y0 && y < self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

impl fmt::Display for DomainBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }
}

/// Diagonal bilinear form on 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientForm {
    /// diag(1, 1, 1)
    Euclidean,
    /// diag(-1, 1, 1)
    Minkowski,
}

impl AmbientForm {
    pub fn signature(self) -> Vec3 {
        match self {
            AmbientForm::Euclidean => [1.0, 1.0, 1.0],
            AmbientForm::Minkowski => [-1.0, 1.0, 1.0],
        }
    }

    pub fn inner(self, v: &Vec3, w: &Vec3) -> f64 {
        let s = self.signature();
        s[0] * v[0] * w[0] + s[1] * v[1] * w[1] + s[2] * v[2] * w[2]
    }

    /// Apply the signature componentwise.
    pub fn raise(self, v: &Vec3) -> Vec3 {
        let s = self.signature();
        [s[0] * v[0], s[1] * v[1], s[2] * v[2]]
    }

    /// Determinant of the signature matrix, ±1.
    pub fn det(self) -> f64 {
        let s = self.signature();
        s[0] * s[1] * s[2]
    }

    pub fn name(self) -> &'static str {
        match self {
            AmbientForm::Euclidean => "euclidean",
            AmbientForm::Minkowski => "minkowski",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Monge,
    Parametric,
}

/// Position and its first and second partials at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub f: Vec3,
    pub f_x: Vec3,
    pub f_y: Vec3,
    pub f_xx: Vec3,
    pub f_xy: Vec3,
    pub f_yy: Vec3,
}

impl SurfaceJet {
    pub fn from_components(c: &[Jet2; 3]) -> Self {
        let pick = |g: fn(&Jet2) -> f64| [g(&c[0]), g(&c[1]), g(&c[2])];
        SurfaceJet {
            f: pick(|j| j.val),
            f_x: pick(|j| j.dx),
            f_y: pick(|j| j.dy),
            f_xx: pick(|j| j.dxx),
            f_xy: pick(|j| j.dxy),
            f_yy: pick(|j| j.dyy),
        }
    }
}

#[derive(Clone)]
enum Evaluator {
    Monge(Arc<MongeFn>),
    Parametric(Arc<ParametricFn>),
}

/// A surface patch over a rectangular parameter box.
#[derive(Clone)]
pub struct SurfaceDef {
    name: String,
    evaluator: Evaluator,
    domain: DomainBox,
    ambient: AmbientForm,
}

impl fmt::Debug for SurfaceDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceDef")
            .field("name", &self.name)
            .field("kind", &self.kind())
            .field("domain", &self.domain)
            .field("ambient", &self.ambient)
            .finish()
    }
}

impl SurfaceDef {
    /// Graph `(x, y, u(x, y))`.
    pub fn monge<F>(name: impl Into<String>, domain: DomainBox, ambient: AmbientForm, u: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Result<Jet2, JetError> + Send + Sync + 'static,
    {
        SurfaceDef { name: name.into(), evaluator: Evaluator::Monge(Arc::new(u)), domain, ambient }
    }

    pub fn parametric<F>(name: impl Into<String>, domain: DomainBox, ambient: AmbientForm, f: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Result<[Jet2; 3], JetError> + Send + Sync + 'static,
    {
        SurfaceDef { name: name.into(), evaluator: Evaluator::Parametric(Arc::new(f)), domain, ambient }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SurfaceKind {
        match self.evaluator {
            Evaluator::Monge(_) => SurfaceKind::Monge,
            Evaluator::Parametric(_) => SurfaceKind::Parametric,
        }
    }

    pub fn domain(&self) -> DomainBox {
        self.domain
    }

    pub fn ambient(&self) -> AmbientForm {
        self.ambient
    }

    /// Position components as jets of the given parameter jets.
    ///
    /// No domain check; callers composing surfaces go through this.
    pub fn position_jets(&self, x: Jet2, y: Jet2) -> Result<[Jet2; 3], JetError> {
        match &self.evaluator {
            Evaluator::Monge(u) => Ok([x, y, u(x, y)?]),
            Evaluator::Parametric(f) => f(x, y),
        }
    }

    /// Exact position, first and second partials at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<SurfaceJet> {
        eval_surface(self, x, y)
    }
}

pub fn eval_surface(s: &SurfaceDef, x: f64, y: f64) -> Result<SurfaceJet> {
    if !s.domain.contains(x, y) {
        return Err(Error::OutsideDomain { x, y, domain: s.domain });
    }
    let comps = s.position_jets(Jet2::var(Axis::X, x), Jet2::var(Axis::Y, y))?;
    Ok(SurfaceJet::from_components(&comps))
}

/// Catalog entry description used for listings.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "sphere-origin",
        params: &[("R", 1.0)],
        description: "Monge upper hemisphere u = sqrt(R^2 - x^2 - y^2) centered at the origin",
    },
    CatalogEntry {
        name: "sphere-translated",
        params: &[("R", 1.0), ("c", 1.0)],
        description: "Monge hemisphere u = c + sqrt(R^2 - x^2 - y^2), center moved by c along the third axis",
    },
    CatalogEntry { name: "titeica-xyz", params: &[], description: "Monge patch u = 1/(xy) on [0.5, 2]^2" },
    CatalogEntry { name: "paraboloid", params: &[], description: "Monge patch u = x^2 + y^2 on [-1, 1]^2" },
    CatalogEntry {
        name: "pseudosphere",
        params: &[],
        description:
            "tractrix of revolution (sech t cos th, sech t sin th, t - tanh t), (t, th) in [0.5, 2] x [0.1, 3]",
    },
    CatalogEntry {
        name: "minkowski-sphere",
        params: &[],
        description: "forward hyperboloid sheet (cosh u1, sinh u1 cos u2, sinh u1 sin u2) in Minkowski space",
    },
    CatalogEntry { name: "plane", params: &[], description: "Monge patch u = 0 on [-1, 1]^2" },
];

pub fn catalog_names() -> String {
    CATALOG.iter().map(|e| e.name).collect::<Vec<_>>().join(", ")
}

fn resolve_params(entry: &CatalogEntry, given: &Params) -> Result<Vec<f64>> {
    for key in given.keys() {
        if !entry.params.iter().any(|(k, _)| k == key) {
            let accepted: Vec<&str> = entry.params.iter().map(|(k, _)| *k).collect();
            return Err(Error::InvalidParam {
                name: key.clone(),
                reason: format!("`{}` accepts [{}]", entry.name, accepted.join(", ")),
            });
        }
    }
    let mut values = Vec::with_capacity(entry.params.len());
    for (key, default) in entry.params {
        let v = given.get(*key).copied().unwrap_or(*default);
        if !v.is_finite() {
            return Err(Error::InvalidParam { name: key.to_string(), reason: "must be finite".into() });
        }
        values.push(v);
    }
    Ok(values)
}

fn hemisphere(r: f64, shift: f64) -> impl Fn(Jet2, Jet2) -> Result<Jet2, JetError> + Send + Sync {
    move |x, y| Ok((Jet2::constant(r * r) - x * x - y * y).sqrt()? + shift)
}

/// Look up a catalog surface by name.
pub fn catalog(name: &str, params: &Params) -> Result<SurfaceDef> {
    let entry = CATALOG.iter().find(|e| e.name == name).ok_or_else(|| Error::Unknown {
        kind: "surface",
        name: name.to_string(),
        valid: catalog_names(),
    })?;
    let p = resolve_params(entry, params)?;
    let euclid = AmbientForm::Euclidean;
    // 0.42^2 * 2 < 0.6^2 keeps the whole box inside the disk of radius 0.6 R
    let cap = |r: f64| DomainBox::new(-0.42 * r, 0.42 * r, -0.42 * r, 0.42 * r);
    let surface = match name {
        "sphere-origin" | "sphere-translated" => {
            let r = p[0];
            if !(r > 0.0) {
                return Err(Error::InvalidParam { name: "R".into(), reason: format!("radius must be > 0, got {r}") });
            }
            let shift = p.get(1).copied().unwrap_or(0.0);
            SurfaceDef::monge(name, cap(r), euclid, hemisphere(r, shift))
        }
        "titeica-xyz" => SurfaceDef::monge(name, DomainBox::new(0.5, 2.0, 0.5, 2.0), euclid, |x, y| {
            Jet2::constant(1.0).try_div(x * y)
        }),
        "paraboloid" => SurfaceDef::monge(name, DomainBox::new(-1.0, 1.0, -1.0, 1.0), euclid, |x, y| Ok(x * x + y * y)),
        "plane" => {
            SurfaceDef::monge(name, DomainBox::new(-1.0, 1.0, -1.0, 1.0), euclid, |_, _| Ok(Jet2::constant(0.0)))
        }
        "pseudosphere" => SurfaceDef::parametric(name, DomainBox::new(0.5, 2.0, 0.1, 3.0), euclid, |t, th| {
            let sech = t.cosh().recip()?;
            Ok([sech * th.cos(), sech * th.sin(), t - t.tanh()])
        }),
        "minkowski-sphere" => {
            SurfaceDef::parametric(name, DomainBox::new(0.3, 2.0, 0.1, 3.0), AmbientForm::Minkowski, |u1, u2| {
                let sh = u1.sinh();
                Ok([u1.cosh(), sh * u2.cos(), sh * u2.sin()])
            })
        }
        _ => unreachable!("catalog table and constructor are out of sync"),
    };
    Ok(surface)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cross;

    fn params(kv: &[(&str, f64)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn plane_and_paraboloid_jets() {
        let plane =
            SurfaceDef::monge("wide-plane", DomainBox::new(-3.0, 3.0, -3.0, 3.0), AmbientForm::Euclidean, |_, _| {
                Ok(Jet2::constant(0.0))
            });
        let sj = plane.eval(1.0, 2.0).unwrap();
        assert_eq!(sj.f, [1.0, 2.0, 0.0]);
        assert_eq!(sj.f_x, [1.0, 0.0, 0.0]);
        assert_eq!(sj.f_y, [0.0, 1.0, 0.0]);
        assert_eq!(sj.f_xx, [0.0; 3]);
        assert_eq!(sj.f_xy, [0.0; 3]);
        assert_eq!(sj.f_yy, [0.0; 3]);

        let par = catalog("paraboloid", &Params::new()).unwrap();
        let sj = par.eval(0.0, 0.0).unwrap();
        assert_eq!(sj.f, [0.0; 3]);
        assert_eq!(sj.f_x, [1.0, 0.0, 0.0]);
        assert_eq!(sj.f_y, [0.0, 1.0, 0.0]);
        assert_eq!(sj.f_xx, [0.0, 0.0, 2.0]);
        assert_eq!(sj.f_xy, [0.0; 3]);
        assert_eq!(sj.f_yy, [0.0, 0.0, 2.0]);
    }

    #[test]
    fn plane_example_point_outside_box_is_rejected() {
        // the plane's box is [-1, 1]^2, so (1, 2) is outside
        let plane = catalog("plane", &Params::new()).unwrap();
        assert!(matches!(plane.eval(1.0, 2.0), Err(Error::OutsideDomain { .. })));
        // boundary itself is excluded (open domain)
        assert!(plane.eval(1.0, 0.0).is_err());
    }

    #[test]
    fn monge_sphere_north_pole() {
        let s = catalog("sphere-origin", &params(&[("R", 1.0)])).unwrap();
        let sj = s.eval(0.0, 0.0).unwrap();
        assert_eq!(sj.f, [0.0, 0.0, 1.0]);
        assert_eq!(sj.f_xx, [0.0, 0.0, -1.0]);
        assert_eq!(sj.f_yy, [0.0, 0.0, -1.0]);
        assert_eq!(sj.f_xy, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn unknown_name_lists_valid_entries() {
        let err = catalog("torus", &Params::new()).unwrap_err();
        match err {
            Error::Unknown { valid, .. } => {
                assert!(valid.contains("sphere-origin") && valid.contains("minkowski-sphere"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(catalog("sphere-origin", &params(&[("R", -1.0)])), Err(Error::InvalidParam { .. })));
        assert!(matches!(catalog("sphere-origin", &params(&[("R", 0.0)])), Err(Error::InvalidParam { .. })));
        assert!(matches!(catalog("paraboloid", &params(&[("R", 1.0)])), Err(Error::InvalidParam { .. })));
    }

    #[test]
    fn hyperboloid_lies_on_the_minkowski_unit_sphere() {
        let s = catalog("minkowski-sphere", &Params::new()).unwrap();
        assert_eq!(s.ambient(), AmbientForm::Minkowski);
        for i in 1..20 {
            for j in 1..20 {
                let u1 = 0.3 + 1.7 * i as f64 / 20.0;
                let u2 = 0.1 + 2.9 * j as f64 / 20.0;
                let sj = s.eval(u1, u2).unwrap();
                assert!((AmbientForm::Minkowski.inner(&sj.f, &sj.f) + 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn pseudosphere_is_regular() {
        let s = catalog("pseudosphere", &Params::new()).unwrap();
        for i in 1..20 {
            for j in 1..20 {
                let t = 0.5 + 1.5 * i as f64 / 20.0;
                let th = 0.1 + 2.9 * j as f64 / 20.0;
                let sj = s.eval(t, th).unwrap();
                let c = cross(&sj.f_x, &sj.f_y);
                assert!(libm::sqrt(crate::linalg::dot(&c, &c)) > 0.0);
            }
        }
    }
}
