//! Small numerical toolkit: finite-difference weights, adaptive quadrature,
//! Hermite interpolation, an explicit Runge-Kutta integrator, root finding,
//! least squares and tridiagonal solves. Everything works on plain `f64`
//! slices; no external numerics dependencies.

pub mod fd;
pub mod fit;
pub mod interp;
pub mod ivp;
pub mod quad;
pub mod roots;
pub mod tridiag;
