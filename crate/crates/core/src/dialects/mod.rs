//! The dialects shipped with the framework.
//!
//! `arith` supplies the floating-point values that parameterize rotations,
//! `qcirc` is the generic-gate, non-linear dialect, and `mqtopt` is the
//! dedicated-op, linearly typed dialect that the transforms operate on.

pub mod arith;
pub mod mqtopt;
pub mod qcirc;

use crate::ir::DialectRegistry;

/// `builtin`, `arith`, and `qcirc`: what the driver always loads.
pub fn core_registry() -> DialectRegistry {
    let mut reg = DialectRegistry::new();
    arith::register_arith(&mut reg).expect("fresh registry");
    qcirc::register_qcirc(&mut reg).expect("fresh registry");
    reg
}

/// The core dialects plus `mqtopt`.
pub fn full_registry() -> DialectRegistry {
    let mut reg = core_registry();
    mqtopt::register_mqtopt(&mut reg).expect("fresh registry");
    reg
}
