//! critlocus: exact construction and irreducibility certification of
//! marked-critical-point preperiodicity polynomials.

pub mod battery;
pub mod certify;
pub mod cli;
pub mod dynamics;
pub mod exactnum;
pub mod mpoly;
pub mod unicritical;
