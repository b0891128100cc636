//! Partial shape matching of closed contours.
//!
//! A contour is split at break-points into segments; contiguous runs of
//! segments (groups of segments, GSs) are affine-normalized, rasterized and
//! compared with directional chamfer matching, and a dynamic program picks
//! the cheapest order-preserving correspondence between the GSs of two
//! shapes, skipping parts that have no counterpart.

pub mod affine;
pub mod breakpoints;
pub mod contour;
pub mod dp;
pub mod cost;
pub mod error;
pub mod fdcm;
pub mod geometry;
pub mod gs;
pub mod io;
pub mod mask;
pub mod params;
pub mod report;
pub mod scalar;
pub mod shape;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point64 = geometry::Point<f64>;
pub type Point32 = geometry::Point<f32>;
pub type Contour64 = contour::Contour<f64>;
pub type Contour32 = contour::Contour<f32>;
pub type CostParams64 = params::CostParams<f64>;
pub type CostParams32 = params::CostParams<f32>;
pub type GsInfo64 = cost::GsInfo<f64>;
pub type MatchList64 = cost::MatchList<f64>;
pub type MatchResult64 = dp::MatchResult<f64>;
pub type ShapeBundle64 = shape::ShapeBundle<f64>;
pub type ShapeBundle32 = shape::ShapeBundle<f32>;
pub type CdcTable64 = shape::CdcTable<f64>;
