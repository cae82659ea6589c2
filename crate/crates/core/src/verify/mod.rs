//! Verification machinery: Monte Carlo statistics, finite-difference
//! residuals of analytic densities, operator identities and the Kac limit.

pub mod equations;
pub mod fd;
pub mod kac;
pub mod operator;
pub mod pde;
pub mod stats;
pub mod suites;

pub use fd::{fd_convergence, fd_residual, tensor_grid, ConvergenceReport, ResidualReport, BOUNDARY_MARGIN_STEPS};
pub use kac::{kac_limit_check, KacReport};
pub use operator::{determinant, generator_operator, operator_identity_check, IdentityReport, Operator, TestFunction};
pub use pde::{identity_checks, pde_checks, PdeCheck, IDENTITY_TOL};
pub use stats::{
    chi2_test, kolmogorov_quantile, ks_test, tv_distance, tv_test, Cdf, StatReport, StatTest, TabulatedCdf,
};

pub use suites::{
    edge_chi2, endpoint_tv, face_tv, planar3_tv, singular_mass_check, telegraph_ks, tz_eq_t_chi2, tz_ks,
    z_eq_ctz_check, ProportionCheck,
};
