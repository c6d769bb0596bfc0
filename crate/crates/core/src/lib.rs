//! Three-field phase-field fracture for rock: embedded-domain geometry,
//! high-order finite elements, a staggered quasi-static driver and the
//! toughness calibration toolkit.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod fem;
pub mod geometry;
pub mod io;
pub mod material;
pub mod quadrature;
pub mod solver;
