use alloc::string::String;

use thiserror::Error;

use crate::jet::JetError;
use crate::surfaces::DomainBox;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("point ({x}, {y}) is outside the domain {domain}")]
    OutsideDomain { x: f64, y: f64, domain: DomainBox },
    #[error("coordinate change maps ({x}, {y}) to ({image_x}, {image_y}), outside the metric domain {domain}")]
    ImageOutsideDomain { x: f64, y: f64, image_x: f64, image_y: f64, domain: DomainBox },
    #[error("degenerate tangent plane: EG - F^2 = {gram}")]
    Regularity { gram: f64 },
    #[error("normal vector is null under the ambient form: <n,n> = {norm}")]
    NullNormal { norm: f64 },
    #[error("singular point: {what} = {value}")]
    Singular { what: &'static str, value: f64 },
    #[error("metric is not positive definite at ({x}, {y}): g11 = {g11}, det = {det}")]
    Signature { x: f64, y: f64, g11: f64, det: f64 },
    #[error("unknown {kind} `{name}`; valid names: {valid}")]
    Unknown { kind: &'static str, name: String, valid: String },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("matrix is not invertible: det = {det}")]
    SingularMatrix { det: f64 },
    #[error("centro-affine action requires a Euclidean ambient form")]
    NotEuclidean,
    #[error("finite-difference oracle: non-finite value at stencil point ({x}, {y})")]
    Oracle { x: f64, y: f64 },
    #[error("{0}")]
    Usage(String),
    #[error("inconclusive: {skipped} of {total} points skipped (more than 25%)")]
    Inconclusive { skipped: usize, total: usize },
    #[error("every sample point was skipped")]
    AllSkipped,
}
