//! Exact arithmetic in global function fields and solvers for norm equations.

pub mod arith;
pub mod compact;
pub mod field;
pub mod ideal;
pub mod linalg;
pub mod oracle;
pub mod rr;
pub mod solvers;
pub mod sunit;
