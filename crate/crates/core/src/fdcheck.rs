//! Central finite differences, used only as an independent oracle for the
//! jet derivatives in tests.

use alloc::format;

use crate::error::{Error, Result};
use crate::jet::Jet2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSettings {
    /// Step for first derivatives.
    pub h1: f64,
    /// Step for second derivatives.
    pub h2: f64,
}

impl Default for FdSettings {
    fn default() -> Self {
        FdSettings { h1: 1e-6, h2: 1e-4 }
    }
}

impl FdSettings {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        for (name, h) in [("h1", h1), ("h2", h2)] {
            if !(h > 0.0 && h < 1e-2) {
                return Err(Error::Usage(format!("finite-difference step {name} = {h} must lie in (0, 1e-2)")));
            }
        }
        Ok(FdSettings { h1, h2 })
    }
}

/// Finite-difference estimate of the full jet of `f` at `(x, y)`.
pub fn fd_jet<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, s: FdSettings) -> Result<Jet2> {
    let eval = |px: f64, py: f64| {
        let v = f(px, py);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Oracle { x: px, y: py })
        }
    };
    let (h1, h2) = (s.h1, s.h2);
    let f0 = eval(x, y)?;
    let dx = (eval(x + h1, y)? - eval(x - h1, y)?) / (2.0 * h1);
    let dy = (eval(x, y + h1)? - eval(x, y - h1)?) / (2.0 * h1);
    let dxx = (eval(x + h2, y)? - 2.0 * f0 + eval(x - h2, y)?) / (h2 * h2);
    let dyy = (eval(x, y + h2)? - 2.0 * f0 + eval(x, y - h2)?) / (h2 * h2);
    let dxy = (eval(x + h2, y + h2)? - eval(x + h2, y - h2)? - eval(x - h2, y + h2)? + eval(x - h2, y - h2)?)
        / (4.0 * h2 * h2);
    Ok(Jet2 { val: f0, dx, dy, dxx, dxy, dyy })
}
