//! Multilinear oscillatory integrals `Lambda_lambda`, decay-exponent sweeps,
//! adversarial inputs for degenerate phases, and the `lambda`-uniformity scan.

mod cutoff;
mod functions;
mod quadrature;
mod sweep;
mod uniformity;

pub use cutoff::CutoffFunction;
pub use functions::{adversarial_functions, TestFunction, TrigPolynomial, TrigTerm};
pub use quadrature::{cutoff_mass, lambda_functional, Estimate, Integrand, QuadratureSpec};
pub use sweep::{decay_sweep, fit_decay, validate_grid, DecayFit, DecaySweepResult, FunctionFamily};
pub use uniformity::{uniformity_scan, CoefficientGrid, SampledFunction, Uniformity, UniformityReport};
