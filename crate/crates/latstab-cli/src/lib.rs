//! Harness library behind the `latstab` binary: lattice file I/O, seeded
//! random generators, fuzz suites, and report assembly. Everything here is
//! deterministic given a seed, independent of thread count.

pub mod gen;
pub mod io;
pub mod report;
pub mod seeds;
pub mod suites;
