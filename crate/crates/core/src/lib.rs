//! Design and analysis of rectangular microstrip patches and uniform planar
//! arrays of them.
//!
//! The pipeline runs bottom-up:
//!
//! * [`geometry`] sizes a patch from frequency and substrate,
//! * [`circuit`] models its input impedance, feed match and S11,
//! * [`radiation`] samples its far field and integrates directivity,
//! * [`array`] builds planar arrays by pattern multiplication,
//! * [`progression`] tabulates 1x1 through 8x8 against reference gains,
//! * [`io`] reads and writes the Touchstone and CSV exports.

pub mod array;
pub mod circuit;
pub mod error;
pub mod geometry;
pub mod io;
pub mod progression;
pub mod radiation;

pub use array::{array_factor, array_metrics, steering_phases, total_pattern, ArrayLayout, ArrayMetrics};
pub use circuit::{match_feed, s11_sweep, FeedKind, FeedModel, FrequencyResponse};
pub use error::{Error, Result};
pub use geometry::{design_patch, DesignSpec, PatchGeometry, Substrate, WidthFormula};
pub use radiation::{AngularGrid, Cut, FarFieldPattern, Obliquity};

pub use num_complex::Complex64;
