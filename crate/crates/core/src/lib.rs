pub mod blocks;
pub mod eigen;
pub mod error;
pub mod gershgorin;
pub mod inverse;
pub mod metric;
pub mod spectrum;
