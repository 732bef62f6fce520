pub mod analyze;
pub mod check;
pub mod reconstruct;
pub mod scan;
