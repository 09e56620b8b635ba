//! Numerical laboratory for type-II blow-up of the conformally flat Yamabe
//! flow with cylindrical behavior at infinity.
//!
//! The crate reconstructs the full mechanism numerically: the outer-region
//! transport ansatz and its sub/supersolution corrections ([`outer`]), the
//! steady-soliton traveling wave of the inner region ([`soliton`]), glued
//! composite barriers ([`barrier`]), evolution-operator sign certification
//! ([`residual`]), implicit time integration of the flow itself ([`flow`])
//! and curvature blow-up diagnostics ([`diagnostics`]). The curvature rate
//! under study is `(T-t)^-(1+gamma)` with scalar limit constant
//! `2 gamma A`.

pub mod barrier;
pub mod coords;
pub mod diagnostics;
pub mod error;
pub mod flow;
pub mod num;
pub mod outer;
pub mod params;
pub mod profile;
pub mod report;
pub mod residual;
pub mod soliton;

pub use error::{Error, Result};
pub use params::{FlowParams, Overrides};
pub use profile::{Coord, CurvatureField, Profile, TimeTag};
