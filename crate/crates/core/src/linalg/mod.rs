//! Linear algebra over `k`, `k[x]`, `k(x)` and the integers.

pub mod kmat;
pub mod polymat;
pub mod zmat;
