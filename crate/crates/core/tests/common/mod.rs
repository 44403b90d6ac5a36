#![allow(dead_code)]

pub mod fermionic;
pub mod oracles;
pub mod quivers;
