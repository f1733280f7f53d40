extern crate self as tvl;

pub mod lcore;
pub mod lgen;
pub mod cli;
pub mod lstar;
pub mod naming;
pub mod sched;
pub mod stdlib;
pub mod translate;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod test_oracle;
