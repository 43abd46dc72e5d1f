//! Builtin systems over finite sets, finite linear orders and bounded posets.

pub mod carrier;
pub mod concrete;
pub mod endo;
pub mod kchain;
mod reduce;
pub mod system;

pub use carrier::{Carrier, Kind};
pub use concrete::Sub;
pub use endo::Endo;
pub use kchain::{KChain, KCone, KMap};
pub use system::System;
