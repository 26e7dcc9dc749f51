//! Explicit conforming finite element spaces for 0- to 4-forms on the
//! reference tesseract `[-1,1]^4`, together with the 4D differential
//! operators, degrees of freedom, pullbacks, traces and interpolants, and
//! numerical checks of their structural properties.

pub mod cli;
pub mod dofs;
pub mod exterior;
pub mod geometry;
pub mod interp;
pub mod pullback;
pub mod report;
pub mod rng;
pub mod spaces;
pub mod tensorpoly;

pub use exterior::{CoeffForm, FormField, Skew4P, Vec4P};
pub use tensorpoly::{Poly1D, QuadRule1D, QuadRule4D, TensorPoly4};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Newton iteration for {nodes}-point Gauss-Legendre rule did not converge")]
    NoConvergence { nodes: usize },
    #[error("quadrature with {nodes} nodes cannot integrate degree {degree} on axis {axis} exactly")]
    RuleTooWeak {
        axis: usize,
        degree: usize,
        nodes: usize,
    },
    #[error("form degree mismatch: expected {expected}, found {found}")]
    FormDegreeMismatch { expected: usize, found: usize },
    #[error("operation not defined for {0}-forms")]
    UnsupportedFormDegree(usize),
    #[error("invalid {kind} index {index}")]
    InvalidEntity { kind: &'static str, index: usize },
    #[error("singular jacobian (det = {0:e})")]
    SingularJacobian(f64),
    #[error("map is not affine")]
    NotAffine,
    #[error("Gram matrix is singular for k={k}, s={s}")]
    SingularGram { k: usize, s: usize },
    #[error("the two elements do not share a facet")]
    NoSharedFacet,
    #[error("unknown trace identity tag {0:?}")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
