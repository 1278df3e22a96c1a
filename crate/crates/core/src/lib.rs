//! VIX-normalized autoregressive models for corporate bond spreads, yields and
//! returns: FRED ingest, OLS fitting, residual diagnostics and a seeded
//! simulator for the joint volatility/rate/return chain.
//!
//! Numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the concrete instantiations.

pub mod diagnostics;
pub mod error;
pub mod ingest;
pub mod linalg;
pub mod models;
pub mod pipeline;
pub mod regression;
pub mod scalar;
pub mod simulator;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DesignMatrix64 = regression::DesignMatrix<f64>;
pub type DesignMatrix32 = regression::DesignMatrix<f32>;
pub type OlsFit64 = regression::OlsFit<f64>;
pub type OlsFit32 = regression::OlsFit<f32>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type MomentSummary64 = diagnostics::MomentSummary<f64>;
pub type MomentSummary32 = diagnostics::MomentSummary<f32>;
pub type TestResult64 = diagnostics::TestResult<f64>;
pub type TestResult32 = diagnostics::TestResult<f32>;
pub type AcfResult64 = diagnostics::AcfResult<f64>;
pub type AcfResult32 = diagnostics::AcfResult<f32>;
pub type KsResult64 = diagnostics::KsResult<f64>;
pub type QqPoint64 = diagnostics::QqPoint<f64>;
