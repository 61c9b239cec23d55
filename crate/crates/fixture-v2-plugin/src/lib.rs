//! Declares an API major version the host does not support.

use qopt_core::plugin::{mqt, ApiVersion, PluginManifest};

fn manifest() -> PluginManifest {
    PluginManifest {
        api_version: ApiVersion { major: 2, minor: 0 },
        plugin_name: "fixture-v2".into(),
        ..mqt::manifest()
    }
}

qopt_core::declare_plugin!(manifest);
