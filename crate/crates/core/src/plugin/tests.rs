use std::sync::Arc;

use super::*;
use crate::dialects::core_registry;
use crate::passes::{parse_pipeline, run_pipeline};
use crate::text::{parse_module, print_module};

const GHZ: &str = include_str!("../../tests/corpus/ghz.qir-txt");

#[test]
fn builtin_plugin_provides_all_passes() {
    let (mut d, mut p) = (core_registry(), PassRegistry::new());
    register_manifest(&mqt::manifest(), &mut d, &mut p).unwrap();
    let names: Vec<_> = p.names().collect();
    for name in [
        "qcirc-to-mqtopt",
        "mqtopt-to-qcirc",
        "route",
        "synth",
        "cancel",
        "zero-state",
    ] {
        assert!(names.contains(&name), "{name}");
        assert_eq!(p.provider(name), Some("mqt"));
    }
    assert!(d.dialect("mqtopt").is_some());
}

#[test]
fn registering_twice_is_idempotent() {
    let (mut d, mut p) = (core_registry(), PassRegistry::new());
    let m = mqt::manifest();
    register_manifest(&m, &mut d, &mut p).unwrap();
    register_manifest(&m, &mut d, &mut p).unwrap();
    assert_eq!(p.names().count(), 6);
}

#[test]
fn conflicting_pass_names() {
    fn rival(reg: &mut PassRegistry, provider: &str) -> Result<(), RegistryError> {
        reg.register(provider, Arc::new(crate::transforms::RoutePass))
    }
    let other = PluginManifest {
        api_version: HOST_API_VERSION,
        plugin_name: "other".into(),
        dialect_registrars: vec![],
        pass_registrars: vec![rival],
    };
    let (mut d, mut p) = (core_registry(), PassRegistry::new());
    register_manifest(&mqt::manifest(), &mut d, &mut p).unwrap();
    assert_eq!(
        register_manifest(&other, &mut d, &mut p).unwrap_err(),
        RegistryError::DuplicatePassName {
            name: "route".into(),
            existing: "mqt".into()
        }
    );
}

#[test]
fn registered_passes_run() {
    let (mut d, mut p) = (core_registry(), PassRegistry::new());
    register_manifest(&mqt::manifest(), &mut d, &mut p).unwrap();
    let m = parse_module(GHZ, &d).unwrap();
    let pipeline = parse_pipeline("qcirc-to-mqtopt,mqtopt-to-qcirc").unwrap();
    let (out, _) = run_pipeline(m.clone(), &pipeline, &p, &d).unwrap();
    assert_eq!(print_module(&out), print_module(&m));
}

#[test]
fn missing_library() {
    let err = load_plugin(Path::new("/nonexistent/libnothing.so")).unwrap_err();
    assert!(matches!(err, PluginError::NotFound(_)));
    assert!(err.to_string().starts_with("PluginError::NotFound"));
}

#[test]
fn non_library_file() {
    let path = std::env::temp_dir().join(format!("qopt-not-a-plugin-{}.so", std::process::id()));
    std::fs::write(&path, b"not a shared object").unwrap();
    let err = load_plugin(&path).unwrap_err();
    std::fs::remove_file(&path).unwrap();
    assert!(matches!(err, PluginError::Load { .. }), "{err}");
}
