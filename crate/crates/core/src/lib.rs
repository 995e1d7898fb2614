//! Exact computation of minimal-order linear differential operators that
//! annihilate every branch of `y^m + a_1 y^(m_1) + … + a_n y^(m_n) + x = 0`,
//! with an independent high-precision numeric verifier.

pub mod annihilator;
pub mod groebner;
pub mod multipoly;
pub mod oracle;
pub mod resultants;
pub mod shape;
