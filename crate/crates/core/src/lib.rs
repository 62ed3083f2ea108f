//! Two-layered Helmholtz Green function in the plane: spectral and
//! steepest-descent evaluation, far-field patterns, and decay-rate lab.

pub mod asymptotics;
pub mod branch;
pub mod cli;
pub mod error;
pub mod farfield;
pub mod geometry;
pub mod quadrature;
pub mod saddle;
pub mod scattering;
pub mod sommerfeld;
pub mod special;
pub mod verify;

pub use error::{GreenError, Result};
pub use geometry::{FieldPoint, Half, Pair, Point, SourcePoint, WaveOrdering, WaveProfile, C64};
pub use quadrature::QuadSpec;
