//! File formats: Matrix Market matrices and vectors, binary PPM rasters,
//! RFC 4180 CSV, and the flat key-value run configuration.

pub mod config;
pub mod csv;
pub mod matrix_market;
pub mod ppm;
