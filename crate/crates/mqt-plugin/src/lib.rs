//! The built-in `mqt` plugin as a shared library, loadable with
//! `qopt --no-static-plugins --load-plugin <path>`.

qopt_core::declare_plugin!(qopt_core::plugin::mqt::manifest);
