//! Fractal zeta functions: symbolic expressions, catalog closed forms and
//! numeric evaluation from tube volumes.

pub mod catalog;
pub mod expr;
pub mod numeric;

pub use catalog::catalog_expr;
pub use expr::{DirichletFactor, EntireFactor, ExprTerm, MeromorphicExpr, ZetaKind};
pub use numeric::{
    distance_zeta_mc, distance_zeta_numeric, functional_equation_residual, geometric_zeta,
    mellin_zeta_numeric, outer_distance_zeta, tube_zeta_from_samples, tube_zeta_numeric,
    zeta_numeric, QuadratureOpts, VolumeBackend,
};
