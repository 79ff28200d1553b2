//! Harmonic analysis on the superspace `R^{m|2n}`: Grassmann and
//! superpolynomial algebra, Gaussian and Berezin integration, spherical
//! harmonics, super Hermite functions, the spherical/product basis change,
//! the coefficient-space Hilbert space and radial Schrodinger spectra.
//!
//! The algebraic layer is generic over [`scalar::Scalar`] (exact rationals,
//! `f64`, `f32`); coefficient-space expansions are generic over
//! `num::Float`. The aliases below fix the common choices.

pub mod basischange;
pub mod error;
pub mod grassmann;
pub mod harmonics;
pub mod hermite;
pub mod integrate;
mod linalg;
pub mod scalar;
pub mod schrodinger;
pub mod spectral;
pub mod superpoly;

pub use error::{Error, Result};
pub use scalar::{GaussianRational, HalfInt, PiScaled, Rational};

/// Superpolynomial with exact Gaussian-rational coefficients.
pub type ExactPoly = superpoly::SuperPolynomial<Rational>;
pub type Poly64 = superpoly::SuperPolynomial<f64>;
pub type Poly32 = superpoly::SuperPolynomial<f32>;

pub type ExactGrassmann = grassmann::GrassmannElement<Rational>;
pub type Grassmann64 = grassmann::GrassmannElement<f64>;
pub type Grassmann32 = grassmann::GrassmannElement<f32>;

pub type Expansion64 = spectral::HermiteExpansion<f64>;
pub type Expansion32 = spectral::HermiteExpansion<f32>;
