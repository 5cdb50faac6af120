#![allow(dead_code)]

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use titeica_core::fdcheck::{fd_jet, FdSettings};
use titeica_core::jet::{Axis, Elementary, Jet2, JetError, Scalar};

/// Random expression in `x`, `y` for jet-vs-oracle checks.
#[derive(Debug, Clone)]
pub enum Expr {
    X,
    Y,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Unary(Elementary, Box<Expr>),
}

const UNARY: &[Elementary] = &[
    Elementary::Sin,
    Elementary::Cos,
    Elementary::Exp,
    Elementary::Log,
    Elementary::Sqrt,
    Elementary::Sinh,
    Elementary::Cosh,
    Elementary::Tanh,
    Elementary::Atan,
    Elementary::Atanh,
];

pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..5) {
            0 | 1 => Expr::X,
            2 | 3 => Expr::Y,
            _ => Expr::Const(rng.gen_range(-2.0..2.0)),
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..6) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Sub(sub(rng), sub(rng)),
        2 => Expr::Mul(sub(rng), sub(rng)),
        3 => Expr::Div(sub(rng), sub(rng)),
        4 => Expr::Unary(Elementary::PowInt(rng.gen_range(-3..=3)), sub(rng)),
        _ => Expr::Unary(UNARY[rng.gen_range(0..UNARY.len())], sub(rng)),
    }
}

impl Expr {
    pub fn eval<S: Scalar>(&self, x: S, y: S) -> Result<S, JetError> {
        Ok(match self {
            Expr::X => x,
            Expr::Y => y,
            Expr::Const(c) => S::constant(*c),
            Expr::Add(a, b) => a.eval(x, y)? + b.eval(x, y)?,
            Expr::Sub(a, b) => a.eval(x, y)? - b.eval(x, y)?,
            Expr::Mul(a, b) => a.eval(x, y)? * b.eval(x, y)?,
            Expr::Div(a, b) => a.eval(x, y)?.try_div(b.eval(x, y)?)?,
            Expr::Unary(f, a) => a.eval(x, y)?.apply(*f)?,
        })
    }

    /// Smallest distance of any restricted argument to its domain boundary.
    pub fn boundary_margin(&self, x: f64, y: f64) -> Result<f64, JetError> {
        let mut margin = f64::INFINITY;
        self.walk(x, y, &mut margin)?;
        Ok(margin)
    }

    fn walk(&self, x: f64, y: f64, margin: &mut f64) -> Result<f64, JetError> {
        Ok(match self {
            Expr::X => x,
            Expr::Y => y,
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.walk(x, y, margin)? + b.walk(x, y, margin)?,
            Expr::Sub(a, b) => a.walk(x, y, margin)? - b.walk(x, y, margin)?,
            Expr::Mul(a, b) => a.walk(x, y, margin)? * b.walk(x, y, margin)?,
            Expr::Div(a, b) => {
                let den = b.walk(x, y, margin)?;
                *margin = margin.min(den.abs());
                a.walk(x, y, margin)?.try_div(den)?
            }
            Expr::Unary(f, a) => {
                let v = a.walk(x, y, margin)?;
                let m = match f {
                    Elementary::Log | Elementary::Sqrt => v,
                    Elementary::Atanh => 1.0 - v.abs(),
                    Elementary::PowInt(n) if *n < 0 => v.abs(),
                    _ => f64::INFINITY,
                };
                *margin = margin.min(m);
                v.apply(*f)?
            }
        })
    }
}

/// Rotation matrix from a random unit quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let q: [f64; 4] = loop {
        let q = [0; 4].map(|_| rng.gen_range(-1.0..1.0));
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            break q.map(|v| v / n);
        }
    };
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Random matrix with entries in [-2, 2] and `lo <= |det| <= hi`.
pub fn random_matrix<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> [[f64; 3]; 3] {
    loop {
        let m = [[0.0; 3]; 3].map(|row: [f64; 3]| row.map(|_| rng.gen_range(-2.0..2.0)));
        let d = titeica_core::linalg::det3(&m).abs();
        if d >= lo && d <= hi {
            return m;
        }
    }
}

/// Coefficients `c[i][j]` of `x^i y^j`, `i + j <= 4`, in [-2, 2].
#[derive(Debug, Clone)]
pub struct Poly(pub Vec<(i32, i32, f64)>);

impl Poly {
    pub fn random<R: Rng>(rng: &mut R) -> Poly {
        let degree = rng.gen_range(1..=4);
        let mut terms = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                terms.push((i, j, rng.gen_range(-2.0..2.0)));
            }
        }
        Poly(terms)
    }

    pub fn eval<S: Scalar>(&self, x: S, y: S) -> S {
        let mut acc = S::constant(0.0);
        for &(i, j, c) in &self.0 {
            acc = acc + (x.powi(i).unwrap() * y.powi(j).unwrap()).scale(c);
        }
        acc
    }
}

/// Samples closer than this to a restricted argument's boundary are redrawn.
pub const BOUNDARY_MARGIN: f64 = 1e-2;
pub const FIRST_TOL: f64 = 1e-8;
pub const SECOND_TOL: f64 = 1e-5;

fn rel(jet: f64, fd: f64) -> f64 {
    (jet - fd).abs() / jet.abs().max(1.0)
}

struct Sample {
    expr: Expr,
    x: f64,
    y: f64,
    jet: Jet2,
}

fn draw(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let expr = random_expr(rng, 3);
    let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    // stencil reaches at most 1e-4 away; the margin keeps it inside the domain
    if expr.boundary_margin(x, y).ok()? < BOUNDARY_MARGIN {
        return None;
    }
    let jet = expr.eval(Jet2::var(Axis::X, x), Jet2::var(Axis::Y, y)).ok()?;
    if !jet.is_finite() || jet.val.abs() > 1e6 {
        return None;
    }
    Some(Sample { expr, x, y, jet })
}

fn fields(j: &Jet2) -> [f64; 5] {
    [j.dx, j.dy, j.dxx, j.dxy, j.dyy]
}

/// The oracle cannot certify a field when halving its step moves the
/// estimate by more than half the tolerance (truncation error near poles).
fn oracle_resolves(jet: &Jet2, coarse: &Jet2, fine: &Jet2) -> bool {
    let tols = [FIRST_TOL, FIRST_TOL, SECOND_TOL, SECOND_TOL, SECOND_TOL];
    let (j, c, f) = (fields(jet), fields(coarse), fields(fine));
    (0..5).all(|i| (c[i] - f[i]).abs() * 4.0 / 3.0 <= 0.5 * tols[i] * j[i].abs().max(1.0))
}

#[derive(Debug, Default)]
pub struct OracleRun {
    pub checked: usize,
    pub unresolved: usize,
    pub worst_first: f64,
    pub worst_second: f64,
    pub failures: Vec<String>,
}

impl fmt::Display for OracleRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} checked, {} not resolvable by the oracle, worst relative error first {:.3e} second {:.3e}",
            self.checked, self.unresolved, self.worst_first, self.worst_second
        )
    }
}

/// Compare jets of `samples` random compositions against central
/// differences (h = 1e-6 first order, 1e-4 second order).
pub fn jet_oracle(seed: u64, samples: usize) -> OracleRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = FdSettings::new(1e-6, 1e-4).unwrap();
    let halved = FdSettings::new(0.5e-6, 0.5e-4).unwrap();
    let mut out = OracleRun::default();
    while out.checked < samples {
        let Some(s) = draw(&mut rng) else { continue };
        let f = |px: f64, py: f64| s.expr.eval(px, py).unwrap_or(f64::NAN);
        let (Ok(fd), Ok(fd_half)) = (fd_jet(f, s.x, s.y, steps), fd_jet(f, s.x, s.y, halved)) else { continue };
        if !oracle_resolves(&s.jet, &fd, &fd_half) {
            out.unresolved += 1;
            continue;
        }
        out.checked += 1;
        let e1 = rel(s.jet.dx, fd.dx).max(rel(s.jet.dy, fd.dy));
        let e2 = rel(s.jet.dxx, fd.dxx).max(rel(s.jet.dxy, fd.dxy)).max(rel(s.jet.dyy, fd.dyy));
        out.worst_first = out.worst_first.max(e1);
        out.worst_second = out.worst_second.max(e2);
        if s.jet.val != fd.val || e1 > FIRST_TOL || e2 > SECOND_TOL {
            out.failures.push(format!("{:?} at ({}, {}): first {e1:.2e}, second {e2:.2e}", s.expr, s.x, s.y));
        }
    }
    out
}
