//! Datasets, file formats, parallel sliding windows, benchmarks and the
//! command-line front end around [`l1spline_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod csv_io;
pub mod datasets;
mod error;
pub mod methods;
pub mod parallel;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
pub use l1spline_core as core;
