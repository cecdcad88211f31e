pub mod circulant;
pub mod cli;
pub mod error;
pub mod exec;
pub mod sequences;
pub mod spectral;
