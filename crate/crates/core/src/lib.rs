pub mod algebraic;
pub mod ifs_core;
pub mod exppoly;
pub mod ritt;
pub mod fourier;
pub mod cli;
