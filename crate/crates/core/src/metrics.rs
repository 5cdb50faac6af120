//! Two-dimensional metrics, Brioschi curvature, pullback under coordinate
//! changes, and the catalog of hyperbolic-plane models with the maps
//! between them.
//!
//! Metric components are evaluated on [`Jet2`] arguments, so their first and
//! second coordinate derivatives come from the same forward-mode core as
//! everything else. Coordinate changes are evaluated on nested jets
//! (`Jet2<Jet2<f64>>`); this gives the Jacobian *as a jet*, which is what the
//! second derivatives of a pulled-back metric need.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::classify::grid;
use crate::error::{Error, Result};
use crate::jet::{Axis, Jet2, Scalar};
use crate::surfaces::DomainBox;

pub type MetricFn = dyn Fn(Jet2, Jet2) -> Result<[Jet2; 3]> + Send + Sync;

/// Metric `g11 dx² + 2 g12 dx dy + g22 dy²` on a coordinate box.
#[derive(Clone)]
pub struct Metric2 {
    name: String,
    domain: DomainBox,
    components: Arc<MetricFn>,
}

impl fmt::Debug for Metric2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric2").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

impl Metric2 {
    pub fn new<F>(name: impl Into<String>, domain: DomainBox, components: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Result<[Jet2; 3]> + Send + Sync + 'static,
    {
        Metric2 { name: name.into(), domain, components: Arc::new(components) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> DomainBox {
        self.domain
    }

    /// Components composed with arbitrary argument jets (no domain check).
    pub fn components_at(&self, x: Jet2, y: Jet2) -> Result<[Jet2; 3]> {
        (self.components)(x, y)
    }

    /// Component jets with respect to the metric's own coordinates.
    pub fn eval(&self, x: f64, y: f64) -> Result<[Jet2; 3]> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutsideDomain { x, y, domain: self.domain });
        }
        self.components_at(Jet2::var(Axis::X, x), Jet2::var(Axis::Y, y))
    }

    pub fn values(&self, x: f64, y: f64) -> Result<[f64; 3]> {
        let g = self.eval(x, y)?;
        Ok([g[0].val, g[1].val, g[2].val])
    }

    /// The metric `φ*m` on the domain of `change`.
    pub fn pullback(&self, change: &CoordChange) -> Metric2 {
        let target = self.clone();
        let change = change.clone();
        Metric2::new(format!("{}*{}", change.name(), self.name), change.domain(), move |a, b| {
            let seeded = pullback_jets(&target, &change, a.val, b.val)?;
            Ok([seeded[0].compose(&a, &b), seeded[1].compose(&a, &b), seeded[2].compose(&a, &b)])
        })
    }
}

/// Catalog coordinate changes `(x, y) ↦ (x̃, ỹ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeKind {
    Identity,
    /// `(x₁, x₂) ↦ (x₁, 1/sin x₂)`
    PseudosphereToHalfPlane,
    /// `(x, y) ↦ (2x, 1 − x² − y²) / (x² + (1 − y)²)`
    HalfPlaneToDisk,
    /// `(y₁, y₂) ↦ (2 atanh r, atan2(y₂, y₁))`, `r = √(y₁² + y₂²)`
    DiskToHyperboloidRadius,
    /// `(y₁, y₂) ↦ (2 atanh(y₁² + y₂²), atan2(y₂, y₁))`
    DiskToHyperboloidSquared,
}

impl ChangeKind {
    pub fn apply<S: Scalar>(self, x: S, y: S) -> Result<(S, S)> {
        let one = S::constant(1.0);
        Ok(match self {
            ChangeKind::Identity => (x, y),
            ChangeKind::PseudosphereToHalfPlane => (x, one.try_div(y.sin())?),
            ChangeKind::HalfPlaneToDisk => {
                let den = x * x + (one - y) * (one - y);
                let y1 = x.scale(2.0).try_div(den)?;
                let y2 = (one - x * x - y * y).try_div(den)?;
                (y1, y2)
            }
            ChangeKind::DiskToHyperboloidRadius => {
                let r = (x * x + y * y).sqrt()?;
                (r.atanh()?.scale(2.0), y.atan2(x)?)
            }
            ChangeKind::DiskToHyperboloidSquared => ((x * x + y * y).atanh()?.scale(2.0), y.atan2(x)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordChange {
    name: String,
    domain: DomainBox,
    kind: ChangeKind,
}

impl CoordChange {
    pub fn new(name: impl Into<String>, domain: DomainBox, kind: ChangeKind) -> Self {
        CoordChange { name: name.into(), domain, kind }
    }

    pub fn identity(domain: DomainBox) -> Self {
        Self::new("identity", domain, ChangeKind::Identity)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> DomainBox {
        self.domain
    }

    pub fn kind(&self) -> ChangeKind {
        self.kind
    }

    pub fn map_point(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutsideDomain { x, y, domain: self.domain });
        }
        self.kind.apply(x, y)
    }

    /// `[[∂x̃/∂x, ∂x̃/∂y], [∂ỹ/∂x, ∂ỹ/∂y]]`
    pub fn jacobian(&self, x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutsideDomain { x, y, domain: self.domain });
        }
        let (a, b) = self.kind.apply(Jet2::var(Axis::X, x), Jet2::var(Axis::Y, y))?;
        Ok([[a.dx, a.dy], [b.dx, b.dy]])
    }
}

fn nested_seed(axis: Axis, v: f64) -> Jet2<Jet2> {
    let mut j = Jet2::<Jet2>::constant(Jet2::var(axis, v));
    match axis {
        Axis::X => j.dx = Jet2::constant(1.0),
        Axis::Y => j.dy = Jet2::constant(1.0),
    }
    j
}

/// Jets (in the source coordinates) of the pulled-back components `Jᵀ G J`.
pub fn pullback_jets(m: &Metric2, change: &CoordChange, x: f64, y: f64) -> Result<[Jet2; 3]> {
    if !change.domain.contains(x, y) {
        return Err(Error::OutsideDomain { x, y, domain: change.domain });
    }
    let (a, b) = change.kind.apply(nested_seed(Axis::X, x), nested_seed(Axis::Y, y))?;
    let (ix, iy) = (a.val.val, b.val.val);
    if !m.domain.contains(ix, iy) {
        return Err(Error::ImageOutsideDomain { x, y, image_x: ix, image_y: iy, domain: m.domain });
    }
    let [g11, g12, g22] = m.components_at(a.val, b.val)?;
    let (ax, ay, bx, by) = (a.dx, a.dy, b.dx, b.dy);
    let h11 = g11 * ax * ax + g12 * ax * bx * 2.0 + g22 * bx * bx;
    let h12 = g11 * ax * ay + g12 * (ax * by + bx * ay) + g22 * bx * by;
    let h22 = g11 * ay * ay + g12 * ay * by * 2.0 + g22 * by * by;
    Ok([h11, h12, h22])
}

/// Pulled-back components at `(x, y)`.
pub fn pullback(m: &Metric2, change: &CoordChange, x: f64, y: f64) -> Result<[f64; 3]> {
    let h = pullback_jets(m, change, x, y)?;
    Ok([h[0].val, h[1].val, h[2].val])
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    crate::linalg::det3(&m)
}

/// Intrinsic Gaussian curvature from the Brioschi formula.
pub fn brioschi_curvature(m: &Metric2, x: f64, y: f64) -> Result<f64> {
    let [e, f, g] = m.eval(x, y)?;
    let det = e.val * g.val - f.val * f.val;
    if !(e.val > 0.0 && det > 0.0) {
        return Err(Error::Signature { x, y, g11: e.val, det });
    }
    let (ee, ff, gg) = (e.val, f.val, g.val);
    let a = det3([
        [-0.5 * e.dyy + f.dxy - 0.5 * g.dxx, 0.5 * e.dx, f.dx - 0.5 * e.dy],
        [f.dy - 0.5 * g.dx, ee, ff],
        [0.5 * g.dy, ff, gg],
    ]);
    let b = det3([[0.0, 0.5 * e.dy, 0.5 * g.dx], [0.5 * e.dy, ee, ff], [0.5 * g.dx, ff, gg]]);
    Ok((a - b) / (det * det))
}

/// Right-hand side of a metric comparison.
#[derive(Debug, Clone, Copy)]
pub enum Comparand<'a> {
    Direct(&'a Metric2),
    Pullback(&'a Metric2, &'a CoordChange),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreePoint {
    pub x: f64,
    pub y: f64,
    pub lhs: [f64; 3],
    pub rhs: [f64; 3],
    /// max over components of `|lhs − rhs|`
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreeReport {
    pub points: Vec<AgreePoint>,
    pub max_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn metrics_agree(lhs: &Metric2, rhs: Comparand<'_>, points: &[(f64, f64)], tol: f64) -> Result<AgreeReport> {
    if points.is_empty() {
        return Err(Error::Usage("metric comparison grid is empty".into()));
    }
    let mut out = Vec::with_capacity(points.len());
    let mut max_diff: f64 = 0.0;
    for &(x, y) in points {
        let l = lhs.values(x, y)?;
        let r = match rhs {
            Comparand::Direct(m) => m.values(x, y)?,
            Comparand::Pullback(m, change) => pullback(m, change, x, y)?,
        };
        let diff = (0..3).map(|i| (l[i] - r[i]).abs()).fold(0.0, f64::max);
        max_diff = max_diff.max(diff);
        out.push(AgreePoint { x, y, lhs: l, rhs: r, diff });
    }
    Ok(AgreeReport { points: out, max_diff, tol, pass: max_diff <= tol })
}

// ---------------------------------------------------------------------------
// catalogs

pub const METRIC_NAMES: &[(&str, &str)] = &[
    ("euclidean", "dx^2 + dy^2"),
    ("pseudosphere", "sin^2(x2) dx1^2 + cot^2(x2) dx2^2, x2 in (0, pi/2)"),
    ("half-plane", "(dx^2 + dy^2) / y^2, y > 0"),
    ("disk", "4 (dy1^2 + dy2^2) / (1 - y1^2 - y2^2)^2, off the unit circle"),
    ("minkowski-sphere", "du1^2 + sinh^2(u1) du2^2"),
];

pub const CHANGE_NAMES: &[(&str, &str)] = &[
    ("pseudosphere-to-half-plane", "(x1, x2) -> (x1, 1/sin x2)"),
    ("half-plane-to-disk", "(x, y) -> (2x, 1 - x^2 - y^2) / (x^2 + (1 - y)^2)"),
    ("disk-to-minkowski-sphere", "(y1, y2) -> (2 atanh(sqrt(y1^2 + y2^2)), atan2(y2, y1))"),
    ("disk-to-minkowski-sphere-squared", "(y1, y2) -> (2 atanh(y1^2 + y2^2), atan2(y2, y1))"),
];

fn names(list: &[(&str, &str)]) -> String {
    list.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

pub fn metric_catalog(name: &str) -> Result<Metric2> {
    let m = match name {
        "euclidean" => Metric2::new(name, DomainBox::new(-10.0, 10.0, -10.0, 10.0), |_, _| {
            Ok([Jet2::constant(1.0), Jet2::constant(0.0), Jet2::constant(1.0)])
        }),
        "pseudosphere" => Metric2::new(name, DomainBox::new(-4.0, 4.0, 0.05, 1.5), |_, x2| {
            let (s, c) = (x2.sin(), x2.cos());
            let cot = c.try_div(s)?;
            Ok([s * s, Jet2::constant(0.0), cot * cot])
        }),
        "half-plane" => Metric2::new(name, DomainBox::new(-10.0, 10.0, 0.01, 10.0), |_, y| {
            let w = y.powi(-2)?;
            Ok([w, Jet2::constant(0.0), w])
        }),
        "disk" => Metric2::new(name, DomainBox::new(-6.0, 6.0, -6.0, 6.0), |y1, y2| {
            let q = Jet2::constant(1.0) - y1 * y1 - y2 * y2;
            let w = q.powi(-2)? * 4.0;
            Ok([w, Jet2::constant(0.0), w])
        }),
        "minkowski-sphere" => Metric2::new(name, DomainBox::new(0.01, 6.0, -4.0, 4.0), |u1, _| {
            let sh = u1.sinh();
            Ok([Jet2::constant(1.0), Jet2::constant(0.0), sh * sh])
        }),
        _ => return Err(Error::Unknown { kind: "metric", name: name.to_string(), valid: names(METRIC_NAMES) }),
    };
    Ok(m)
}

pub fn change_catalog(name: &str) -> Result<CoordChange> {
    let (domain, kind) = match name {
        "pseudosphere-to-half-plane" => (DomainBox::new(-4.0, 4.0, 0.05, 1.5), ChangeKind::PseudosphereToHalfPlane),
        // excludes the pole at (0, 1)
        "half-plane-to-disk" => (DomainBox::new(-5.0, 5.0, 1.1, 10.0), ChangeKind::HalfPlaneToDisk),
        "disk-to-minkowski-sphere" => (DomainBox::new(0.0, 0.95, -0.95, 0.95), ChangeKind::DiskToHyperboloidRadius),
        "disk-to-minkowski-sphere-squared" => {
            (DomainBox::new(0.0, 0.95, -0.95, 0.95), ChangeKind::DiskToHyperboloidSquared)
        }
        _ => {
            return Err(Error::Unknown {
                kind: "coordinate change",
                name: name.to_string(),
                valid: names(CHANGE_NAMES),
            })
        }
    };
    Ok(CoordChange::new(name, domain, kind))
}

/// How a pair's sample points are laid out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    /// Rectangular grid over the box.
    Grid(DomainBox),
    /// Polar grid: box is `(r, θ)`, points are `(r cos θ, r sin θ)`.
    Polar(DomainBox),
}

impl Sampling {
    pub fn points(&self, n1: usize, n2: usize) -> Vec<(f64, f64)> {
        match *self {
            Sampling::Grid(b) => grid(&b, n1, n2),
            Sampling::Polar(b) => {
                grid(&b, n1, n2).into_iter().map(|(r, t)| (r * libm::cos(t), r * libm::sin(t))).collect()
            }
        }
    }
}

/// A claimed metric equivalence: `target = change* source` for one or more
/// candidate changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub name: &'static str,
    pub target: &'static str,
    pub source: &'static str,
    pub changes: &'static [&'static str],
    pub sampling: Sampling,
}

pub const METRIC_PAIRS: &[MetricPair] = &[
    MetricPair {
        name: "pseudosphere:half-plane",
        target: "pseudosphere",
        source: "half-plane",
        changes: &["pseudosphere-to-half-plane"],
        sampling: Sampling::Grid(DomainBox::new(-1.0, 1.0, 0.3, 1.2)),
    },
    MetricPair {
        name: "half-plane:disk",
        target: "half-plane",
        source: "disk",
        changes: &["half-plane-to-disk"],
        sampling: Sampling::Grid(DomainBox::new(-1.0, 1.0, 1.5, 3.0)),
    },
    MetricPair {
        name: "minkowski-sphere:disk",
        target: "disk",
        source: "minkowski-sphere",
        changes: &["disk-to-minkowski-sphere-squared", "disk-to-minkowski-sphere"],
        // quadrant annulus 0.2 < r < 0.8 with y1 > 0
        sampling: Sampling::Polar(DomainBox::new(0.2, 0.8, -0.4 * PI, 0.4 * PI)),
    },
];

pub fn metric_pair(name: &str) -> Result<&'static MetricPair> {
    METRIC_PAIRS.iter().find(|p| p.name == name).ok_or_else(|| Error::Unknown {
        kind: "metric pair",
        name: name.to_string(),
        valid: METRIC_PAIRS.iter().map(|p| p.name).collect::<Vec<_>>().join(", "),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantOutcome {
    pub change: String,
    /// `Err` when some sample point could not be evaluated.
    pub report: core::result::Result<AgreeReport, String>,
}

impl VariantOutcome {
    pub fn passed(&self) -> bool {
        matches!(&self.report, Ok(r) if r.pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub pair: &'static str,
    pub target: &'static str,
    pub source: &'static str,
    pub variants: Vec<VariantOutcome>,
    /// Changes whose pullback reproduces the target within `tol`.
    pub reproducing: Vec<String>,
    pub pass: bool,
}

/// Run every candidate change of `pair` on an `n1 × n2` sample.
pub fn check_pair(pair: &MetricPair, n1: usize, n2: usize, tol: f64) -> Result<PairReport> {
    let target = metric_catalog(pair.target)?;
    let source = metric_catalog(pair.source)?;
    let points = pair.sampling.points(n1, n2);
    let mut variants = Vec::new();
    for &name in pair.changes {
        let change = change_catalog(name)?;
        let report = match metrics_agree(&target, Comparand::Pullback(&source, &change), &points, tol) {
            Ok(r) => Ok(r),
            Err(e @ Error::Usage(_)) => return Err(e),
            Err(e) => Err(e.to_string()),
        };
        variants.push(VariantOutcome { change: name.to_string(), report });
    }
    let reproducing: Vec<String> = variants.iter().filter(|v| v.passed()).map(|v| v.change.clone()).collect();
    Ok(PairReport {
        pair: pair.name,
        target: pair.target,
        source: pair.source,
        pass: !reproducing.is_empty(),
        variants,
        reproducing,
    })
}
