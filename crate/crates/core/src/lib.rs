#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod disc;
pub mod exactlin;
pub mod families;
pub mod lattice;
pub mod positivity;
pub mod chow;
pub mod models;
