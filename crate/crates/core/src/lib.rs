//! Numerical flow completion of a vector field on an open subset of `R^n`.
//!
//! A field `X` on `M` is completed to a complete field on the (generally
//! non-Hausdorff) orbit space of `d/ds x X` on `R x M`. Points of that space
//! are represented by tagged points `(s, x)` and compared by integrating the
//! flow; see [`completion`]. Non-separable pairs are probed in
//! [`separability`], and [`report`] classifies the doubled loci over a grid.

pub mod completion;
pub mod expr;
pub mod geometry;
pub mod integrator;
pub mod report;
pub mod scenarios;
pub mod separability;
