//! Two-dimensional acoustic scattering by boundary integral equations,
//! with high-order shape derivatives of the scattered field.
//!
//! The crate solves exterior (and penetrable) Helmholtz boundary-value
//! problems on smooth closed curves with a spectrally accurate Nyström
//! scheme, differentiates the scattered field with respect to normal
//! boundary perturbations up to high order, evaluates the resulting shape
//! Taylor expansions, and uses them for moment estimation of the field
//! under random boundary perturbations, with a Monte Carlo reference.
//!
//! Module layout:
//! - [`specfun`]: real-argument Bessel/Hankel functions of orders 0 and 1.
//! - [`geometry`]: closed parametrized curves, normal velocity fields,
//!   boundary perturbation, and shape derivatives of the moving frame.
//! - [`bie`]: layer-operator assembly (Kress quadrature), potentials, and
//!   dense complex LU solves.
//! - [`scatter`]: incident fields and forward solvers for sound-soft,
//!   sound-hard, impedance and transmission boundary conditions.
//! - [`traces`]: tangential/normal derivatives of boundary traces and
//!   Dirichlet-to-Neumann conversion.
//! - [`shapecalc`]: shape-derivative boundary data, derivative stacks and
//!   Taylor-expansion evaluation.
//! - [`uq`]: random boundary perturbations, moment estimators and the
//!   Monte Carlo reference harness.

pub mod bie;
pub mod geometry;
pub mod scatter;
pub mod shapecalc;
pub mod specfun;
pub mod traces;
pub mod uq;

mod spectral;

use thiserror::Error;

/// Errors surfaced by the numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a special function's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid geometric or physical parameter.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Perturbation large enough that the normal offset may self-intersect.
    #[error("self-intersection risk: min nodewise offset Jacobian {0:.3e} <= 0")]
    SelfIntersectionRisk(f64),
    /// Kernel evaluated at coincident points.
    #[error("singular kernel evaluation: |x - y| = 0")]
    SingularPoint,
    /// Pivot underflow in the dense LU factorization.
    #[error("singular matrix: pivot {pivot:.3e} at column {col} below tolerance")]
    SingularMatrix { col: usize, pivot: f64 },
    /// Point source placed on (or numerically on) the boundary.
    #[error("point source within one node spacing of the boundary")]
    SourceOnBoundary,
    /// Derivative stack queried for an order it does not hold.
    #[error("missing lower-order derivative: order {0} not built")]
    MissingLowerOrder(usize),
    /// Requested shape-derivative order not supported for this boundary condition.
    #[error("unsupported order {order} for {bc} boundary condition")]
    UnsupportedOrder { bc: &'static str, order: usize },
    /// Grids or estimates defined on different node sets / point sets.
    #[error("mismatched operands: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
