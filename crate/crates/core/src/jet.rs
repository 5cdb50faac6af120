//! Second-order forward-mode differentiation in two variables.
//!
//! A [`Jet2`] carries a value together with its gradient and (symmetric)
//! Hessian with respect to two parameters `x` and `y`. Arithmetic and the
//! elementary functions propagate all six fields exactly by the chain rule.
//!
//! `Jet2` is generic over its [`Scalar`] so that jets can be nested:
//! `Jet2<Jet2<f64>>` carries derivatives of derivatives, which the metric
//! pullback uses to obtain second derivatives of `Jᵀ G J`.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Failure of a jet (or plain scalar) operation outside its real domain.
#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum JetError {
    #[error("division by zero in `{op}`")]
    DivisionByZero { op: &'static str },
    #[error("`{func}` is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
}

/// Which parameter a seeded jet tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Elementary functions available on every [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Atan,
    Atanh,
    PowInt(i32),
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sqrt => "sqrt",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
            Elementary::Atan => "atan",
            Elementary::Atanh => "atanh",
            Elementary::PowInt(_) => "pow_int",
        }
    }
}

/// Arithmetic operations for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Number-like type that jets are built over.
///
/// Domain-restricted functions return [`JetError`] instead of producing NaN.
/// Domain checks look at [`Scalar::re`], the innermost real value.
pub trait Scalar:
    Copy + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    /// Innermost real value.
    fn re(&self) -> f64;
    fn scale(self, k: f64) -> Self;
    fn is_finite(&self) -> bool;

    fn recip(self) -> Result<Self, JetError>;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Result<Self, JetError>;
    fn sqrt(self) -> Result<Self, JetError>;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn atan(self) -> Self;
    fn atanh(self) -> Result<Self, JetError>;
    fn powi(self, n: i32) -> Result<Self, JetError>;
    /// Two-argument arctangent of `self / x`, quadrant-aware.
    fn atan2(self, x: Self) -> Result<Self, JetError>;

    fn try_div(self, rhs: Self) -> Result<Self, JetError> {
        if rhs.re() == 0.0 {
            return Err(JetError::DivisionByZero { op: "div" });
        }
        Ok(self * rhs.recip()?)
    }

    fn apply(self, f: Elementary) -> Result<Self, JetError> {
        match f {
            Elementary::Sin => Ok(self.sin()),
            Elementary::Cos => Ok(self.cos()),
            Elementary::Exp => Ok(self.exp()),
            Elementary::Log => self.ln(),
            Elementary::Sqrt => self.sqrt(),
            Elementary::Sinh => Ok(self.sinh()),
            Elementary::Cosh => Ok(self.cosh()),
            Elementary::Tanh => Ok(self.tanh()),
            Elementary::Atan => Ok(self.atan()),
            Elementary::Atanh => self.atanh(),
            Elementary::PowInt(n) => self.powi(n),
        }
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn re(&self) -> f64 {
        *self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn recip(self) -> Result<Self, JetError> {
        if self == 0.0 {
            return Err(JetError::DivisionByZero { op: "recip" });
        }
        Ok(1.0 / self)
    }
    fn sin(self) -> Self {
        libm::sin(self)
    }
    fn cos(self) -> Self {
        libm::cos(self)
    }
    fn exp(self) -> Self {
        libm::exp(self)
    }
    fn ln(self) -> Result<Self, JetError> {
        if self <= 0.0 {
            return Err(JetError::Domain { func: "log", value: self });
        }
        Ok(libm::log(self))
    }
    fn sqrt(self) -> Result<Self, JetError> {
        if self < 0.0 {
            return Err(JetError::Domain { func: "sqrt", value: self });
        }
        Ok(libm::sqrt(self))
    }
    fn sinh(self) -> Self {
        libm::sinh(self)
    }
    fn cosh(self) -> Self {
        libm::cosh(self)
    }
    fn tanh(self) -> Self {
        libm::tanh(self)
    }
    fn atan(self) -> Self {
        libm::atan(self)
    }
    fn atanh(self) -> Result<Self, JetError> {
        if !(self.abs() < 1.0) {
            return Err(JetError::Domain { func: "atanh", value: self });
        }
        Ok(libm::atanh(self))
    }
    fn powi(self, n: i32) -> Result<Self, JetError> {
        if n < 0 && self == 0.0 {
            return Err(JetError::Domain { func: "pow_int", value: self });
        }
        Ok(libm::pow(self, n as f64))
    }
    fn atan2(self, x: Self) -> Result<Self, JetError> {
        if self == 0.0 && x == 0.0 {
            return Err(JetError::Domain { func: "atan2", value: 0.0 });
        }
        Ok(libm::atan2(self, x))
    }
}

/// Value, gradient and Hessian of a scalar function of `(x, y)`.
///
/// Only one mixed entry is stored; `∂²/∂x∂y = ∂²/∂y∂x` by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<S = f64> {
    pub val: S,
    pub dx: S,
    pub dy: S,
    pub dxx: S,
    pub dxy: S,
    pub dyy: S,
}

impl<S: Scalar> Jet2<S> {
    /// A constant: all derivatives vanish.
    pub fn constant(c: S) -> Self {
        let z = S::constant(0.0);
        Jet2 { val: c, dx: z, dy: z, dxx: z, dxy: z, dyy: z }
    }

    /// The coordinate function for `axis`, evaluated at `v`.
    pub fn var(axis: Axis, v: S) -> Self {
        let one = S::constant(1.0);
        let mut j = Self::constant(v);
        match axis {
            Axis::X => j.dx = one,
            Axis::Y => j.dy = one,
        }
        j
    }

    pub fn gradient(&self) -> [S; 2] {
        [self.dx, self.dy]
    }

    pub fn hessian(&self) -> [[S; 2]; 2] {
        [[self.dxx, self.dxy], [self.dxy, self.dyy]]
    }

    /// Compose `g ∘ (a, b)` where `self` is the jet of `g` with respect to
    /// its own two arguments, taken at `(a.val, b.val)`.
    pub fn compose(&self, a: &Self, b: &Self) -> Self {
        let (ga, gb) = (self.dx, self.dy);
        let (gaa, gab, gbb) = (self.dxx, self.dxy, self.dyy);
        let two = S::constant(2.0);
        Jet2 {
            val: self.val,
            dx: ga * a.dx + gb * b.dx,
            dy: ga * a.dy + gb * b.dy,
            dxx: gaa * a.dx * a.dx + two * gab * a.dx * b.dx + gbb * b.dx * b.dx + ga * a.dxx + gb * b.dxx,
            dxy: gaa * a.dx * a.dy + gab * (a.dx * b.dy + a.dy * b.dx) + gbb * b.dx * b.dy + ga * a.dxy + gb * b.dxy,
            dyy: gaa * a.dy * a.dy + two * gab * a.dy * b.dy + gbb * b.dy * b.dy + ga * a.dyy + gb * b.dyy,
        }
    }

    /// Chain rule for a univariate `f` with `f(val)`, `f'(val)`, `f''(val)`.
    fn chain(&self, f0: S, f1: S, f2: S) -> Self {
        Jet2 {
            val: f0,
            dx: f1 * self.dx,
            dy: f1 * self.dy,
            dxx: f1 * self.dxx + f2 * self.dx * self.dx,
            dxy: f1 * self.dxy + f2 * self.dx * self.dy,
            dyy: f1 * self.dyy + f2 * self.dy * self.dy,
        }
    }

    fn map(&self, mut f: impl FnMut(S) -> S) -> Self {
        Jet2 { val: f(self.val), dx: f(self.dx), dy: f(self.dy), dxx: f(self.dxx), dxy: f(self.dxy), dyy: f(self.dyy) }
    }

    fn zip(&self, o: &Self, mut f: impl FnMut(S, S) -> S) -> Self {
        Jet2 {
            val: f(self.val, o.val),
            dx: f(self.dx, o.dx),
            dy: f(self.dy, o.dy),
            dxx: f(self.dxx, o.dxx),
            dxy: f(self.dxy, o.dxy),
            dyy: f(self.dyy, o.dyy),
        }
    }
}

/// Binary arithmetic on jets; only `Div` can fail.
pub fn arith<S: Scalar>(op: ArithOp, a: Jet2<S>, b: Jet2<S>) -> Result<Jet2<S>, JetError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.try_div(b),
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|a| -a)
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    // Terms are grouped symmetrically so that a*b and b*a agree bitwise.
    fn mul(self, b: Self) -> Self {
        let a = self;
        let two = S::constant(2.0);
        Jet2 {
            val: a.val * b.val,
            dx: a.dx * b.val + a.val * b.dx,
            dy: a.dy * b.val + a.val * b.dy,
            dxx: (a.dxx * b.val + a.val * b.dxx) + two * (a.dx * b.dx),
            dxy: (a.dxy * b.val + a.val * b.dxy) + (a.dx * b.dy + a.dy * b.dx),
            dyy: (a.dyy * b.val + a.val * b.dyy) + two * (a.dy * b.dy),
        }
    }
}

impl<S: Scalar> Add<f64> for Jet2<S> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.val = self.val + S::constant(rhs);
        self
    }
}

impl<S: Scalar> Sub<f64> for Jet2<S> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.val = self.val - S::constant(rhs);
        self
    }
}

impl<S: Scalar> Mul<f64> for Jet2<S> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|a| a.scale(rhs))
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    fn constant(c: f64) -> Self {
        Jet2::constant(S::constant(c))
    }

    fn re(&self) -> f64 {
        self.val.re()
    }

    fn scale(self, k: f64) -> Self {
        self * k
    }

    fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.dx.is_finite()
            && self.dy.is_finite()
            && self.dxx.is_finite()
            && self.dxy.is_finite()
            && self.dyy.is_finite()
    }

    fn recip(self) -> Result<Self, JetError> {
        if self.re() == 0.0 {
            return Err(JetError::DivisionByZero { op: "recip" });
        }
        let r = self.val.recip()?;
        let r2 = r * r;
        Ok(self.chain(r, -r2, (r2 * r).scale(2.0)))
    }

    fn sin(self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.chain(s, c, -s)
    }

    fn cos(self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.chain(c, -s, -c)
    }

    fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    fn ln(self) -> Result<Self, JetError> {
        if self.re() <= 0.0 {
            return Err(JetError::Domain { func: "log", value: self.re() });
        }
        let r = self.val.recip()?;
        Ok(self.chain(self.val.ln()?, r, -(r * r)))
    }

    fn sqrt(self) -> Result<Self, JetError> {
        if self.re() <= 0.0 {
            return Err(JetError::Domain { func: "sqrt", value: self.re() });
        }
        let s = self.val.sqrt()?;
        // f' = 1/(2s), f'' = -1/(4 s^3)
        let inv = s.recip()?;
        let f1 = inv.scale(0.5);
        let f2 = (inv * inv * inv).scale(-0.25);
        Ok(self.chain(s, f1, f2))
    }

    fn sinh(self) -> Self {
        let (sh, ch) = (self.val.sinh(), self.val.cosh());
        self.chain(sh, ch, sh)
    }

    fn cosh(self) -> Self {
        let (sh, ch) = (self.val.sinh(), self.val.cosh());
        self.chain(ch, sh, ch)
    }

    fn tanh(self) -> Self {
        let t = self.val.tanh();
        let sech2 = S::constant(1.0) - t * t;
        self.chain(t, sech2, (t * sech2).scale(-2.0))
    }

    fn atan(self) -> Self {
        let v = self.val;
        let q = S::constant(1.0) + v * v;
        // q >= 1, never zero
        let r = q.recip().expect("1 + v^2 is positive");
        self.chain(v.atan(), r, (v * r * r).scale(-2.0))
    }

    fn atanh(self) -> Result<Self, JetError> {
        let v = self.val;
        if !(self.re().abs() < 1.0) {
            return Err(JetError::Domain { func: "atanh", value: self.re() });
        }
        let r = (S::constant(1.0) - v * v).recip()?;
        Ok(self.chain(v.atanh()?, r, (v * r * r).scale(2.0)))
    }

    fn powi(self, n: i32) -> Result<Self, JetError> {
        if n < 0 && self.re() == 0.0 {
            return Err(JetError::Domain { func: "pow_int", value: self.re() });
        }
        match n {
            0 => Ok(Jet2::constant(S::constant(1.0))),
            1 => Ok(self),
            _ => {
                let v = self.val;
                let f0 = v.powi(n)?;
                let f1 = v.powi(n - 1)?.scale(n as f64);
                let f2 = v.powi(n - 2)?.scale((n as f64) * (n as f64 - 1.0));
                Ok(self.chain(f0, f1, f2))
            }
        }
    }

    fn atan2(self, x: Self) -> Result<Self, JetError> {
        let y = self;
        if y.re() == 0.0 && x.re() == 0.0 {
            return Err(JetError::Domain { func: "atan2", value: 0.0 });
        }
        // atan2 differs from atan(y/x) (or -atan(x/y)) by a locally constant
        // offset, so the derivatives are borrowed and the value replaced.
        let mut j = if x.re().abs() >= y.re().abs() { y.try_div(x)?.atan() } else { -x.try_div(y)?.atan() };
        j.val = y.val.atan2(x.val)?;
        Ok(j)
    }
}
