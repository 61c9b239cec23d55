//! An SSA compiler framework for quantum programs.
//!
//! The crate provides a small MLIR-style infrastructure and the pieces of a
//! quantum compilation flow built on top of it:
//!
//! - [`ir`]: modules, functions, operations, values with def-use chains,
//!   the dialect registry, and the trait-driven verifier.
//! - [`text`]: the textual IR parser and canonical printer.
//! - [`dialects`]: `arith`, the generic-gate `qcirc` dialect, and the
//!   linearly typed `mqtopt` dialect.
//! - [`conversion`]: the pattern-based conversion driver plus the
//!   `qcirc` ⇄ `mqtopt` conversions.
//! - [`passes`]: pipeline parsing and the pass manager.
//! - [`transforms`]: routing, synthesis, cancellation, and zero-state
//!   simplification over `mqtopt`.
//! - [`plugin`]: the plugin manifest contract and dynamic loading.
//! - [`sim`]: a dense statevector simulator used as a test oracle.
//!
//! ```
//! use qopt_core::{dialects, text};
//!
//! let registry = dialects::core_registry();
//! let module = text::parse_module("module { func @f() { } }", &registry).unwrap();
//! assert_eq!(text::print_module(&module), "module {\n  func @f() {\n  }\n}\n");
//! ```

pub mod conversion;
pub mod dialects;
pub mod ir;
pub mod passes;
pub mod plugin;
pub mod sim;
pub mod text;
pub mod transforms;

#[cfg(test)]
mod testing;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ir.md")]
    mod ir {}
    #[doc = include_str!("../../../book/src/text-format.md")]
    mod text_format {}
    #[doc = include_str!("../../../book/src/dialects.md")]
    mod dialects {}
    #[doc = include_str!("../../../book/src/conversion.md")]
    mod conversion {}
    #[doc = include_str!("../../../book/src/passes.md")]
    mod passes {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/plugins.md")]
    mod plugins {}
    #[doc = include_str!("../../../book/src/simulator.md")]
    mod simulator {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
