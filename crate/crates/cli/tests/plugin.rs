use std::env::consts::{DLL_PREFIX, DLL_SUFFIX};
use std::path::PathBuf;

use qopt_core::dialects::core_registry;
use qopt_core::passes::PassRegistry;
use qopt_core::plugin::{load_plugin, register_manifest, PluginError, HOST_API_VERSION};

fn library(name: &str) -> PathBuf {
    let file = format!("{DLL_PREFIX}{name}{DLL_SUFFIX}");
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    [deps.join(&file), deps.parent().unwrap().join(&file)]
        .into_iter()
        .find(|p| p.exists())
        .unwrap_or_else(|| panic!("{file} not built"))
}

#[test]
fn loads_the_mqt_library() {
    let m = load_plugin(&library("qopt_mqt_plugin")).unwrap();
    assert_eq!(m.api_version, HOST_API_VERSION);
    assert_eq!(m.plugin_name, "mqt");
    assert!(!m.dialect_registrars.is_empty() && !m.pass_registrars.is_empty());

    let (mut d, mut p) = (core_registry(), PassRegistry::new());
    register_manifest(&m, &mut d, &mut p).unwrap();
    assert!(d.dialect("mqtopt").is_some());
    assert_eq!(p.names().count(), 6);
    // the built-in copy of the same dialect is accepted alongside it
    register_manifest(&qopt_core::plugin::mqt::manifest(), &mut d, &mut p).unwrap();
}

#[test]
fn rejects_other_major_versions() {
    let err = load_plugin(&library("qopt_fixture_v2_plugin")).unwrap_err();
    assert_eq!(
        err,
        PluginError::VersionMismatch {
            host: HOST_API_VERSION,
            plugin: qopt_core::plugin::ApiVersion { major: 2, minor: 0 }
        }
    );
}

#[test]
fn requires_the_entry_point() {
    let err = load_plugin(&library("qopt_fixture_noentry_plugin")).unwrap_err();
    assert!(matches!(err, PluginError::NoEntryPoint(_)), "{err}");
}
