//! The built-in plugin: the `mqtopt` dialect, the two conversions, and the
//! transforms.

use std::sync::Arc;

use super::{PluginManifest, HOST_API_VERSION};
use crate::conversion::{MqtoptToQcircPass, QcircToMqtoptPass};
use crate::dialects::mqtopt;
use crate::ir::RegistryError;
use crate::passes::{Pass, PassRegistry};
use crate::transforms::{CancelPass, RoutePass, SynthPass, ZeroStatePass};

pub const PLUGIN_NAME: &str = "mqt";

pub fn passes() -> Vec<Arc<dyn Pass>> {
    vec![
        Arc::new(QcircToMqtoptPass),
        Arc::new(MqtoptToQcircPass),
        Arc::new(RoutePass),
        Arc::new(SynthPass),
        Arc::new(CancelPass),
        Arc::new(ZeroStatePass),
    ]
}

fn register_passes(registry: &mut PassRegistry, provider: &str) -> Result<(), RegistryError> {
    for p in passes() {
        registry.register(provider, p)?;
    }
    Ok(())
}

pub fn manifest() -> PluginManifest {
    PluginManifest {
        api_version: HOST_API_VERSION,
        plugin_name: PLUGIN_NAME.into(),
        dialect_registrars: vec![mqtopt::register_mqtopt],
        pass_registrars: vec![register_passes],
    }
}
