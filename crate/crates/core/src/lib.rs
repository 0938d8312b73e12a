//! Quantum strategies, classical and quantum two-player games, and an
//! Ising-chain model of buy/hold trading.

pub mod games;
pub mod ising;
pub mod quantum;
pub mod spinflip;
