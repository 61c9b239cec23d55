//! The `qopt` driver and the `qopt-check` golden-test runner, as a library
//! so both can run in-process.

pub mod check;
pub mod driver;
