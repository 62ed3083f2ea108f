//! Special functions used by the kernels and their oracles.

pub mod bessel;
pub mod gamma;
pub mod gaussian;
pub mod parabolic;

pub use bessel::{bessel_set, hankel_h0, hankel_h1, hankel_pair, BesselSet, EULER_GAMMA};
pub use gamma::{gamma_fn, recip_gamma};
pub use gaussian::{f2_closed, f2_oracle, f3_closed, f3_oracle};
pub use parabolic::{kummer, parabolic_d, CylinderOrder};
