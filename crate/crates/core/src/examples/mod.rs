//! Worked examples on the builtin systems: behaviour of the smash-square
//! module, factorization on linear orders and interleaving of streams.

pub mod freyd;
pub mod lin;
pub mod zip;
