//! Plugins contribute dialects and passes to a host, either linked in and
//! registered statically or loaded from a shared library at startup.
//!
//! # Dynamic plugin ABI
//!
//! A shared library exports
//!
//! ```text
//! extern "C" fn qopt_plugin_register() -> *mut PluginManifest
//! ```
//!
//! returning a heap-allocated manifest (see [`declare_plugin!`]). The host
//! reads only [`PluginManifest::api_version`], the first field of a
//! `#[repr(C)]` struct, until the major version has been checked. The rest
//! of the manifest holds Rust values, so the plugin must be built with the
//! same compiler and the same `qopt-core` sources as the host. Loaded
//! libraries are never unloaded.
//!
//! Registration is a separate step: [`load_plugin`] only returns the
//! manifest and [`register_manifest`] runs its registrars.

pub mod mqt;

use std::fmt;
use std::path::{Path, PathBuf};

use crate::ir::{DialectRegistry, RegistryError};
use crate::passes::PassRegistry;

pub const ENTRY_POINT: &str = "qopt_plugin_register";

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApiVersion {
    pub major: u32,
    pub minor: u32,
}

impl fmt::Display for ApiVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.major, self.minor)
    }
}

pub const HOST_API_VERSION: ApiVersion = ApiVersion { major: 1, minor: 0 };

pub type DialectRegistrar = fn(&mut DialectRegistry) -> Result<(), RegistryError>;

/// Receives the registry and the name of the registering plugin.
pub type PassRegistrar = fn(&mut PassRegistry, &str) -> Result<(), RegistryError>;

#[repr(C)]
#[derive(Clone, Debug)]
pub struct PluginManifest {
    pub api_version: ApiVersion,
    pub plugin_name: String,
    pub dialect_registrars: Vec<DialectRegistrar>,
    pub pass_registrars: Vec<PassRegistrar>,
}

pub type EntryPoint = unsafe extern "C" fn() -> *mut PluginManifest;

/// Exports `$manifest()` as the plugin entry point of a `cdylib`.
#[macro_export]
macro_rules! declare_plugin {
    ($manifest:path) => {
        #[no_mangle]
        pub extern "C" fn qopt_plugin_register() -> *mut $crate::plugin::PluginManifest {
            ::std::boxed::Box::into_raw(::std::boxed::Box::new($manifest()))
        }
    };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PluginError {
    NotFound(PathBuf),
    Load {
        path: PathBuf,
        message: String,
    },
    NoEntryPoint(PathBuf),
    VersionMismatch {
        host: ApiVersion,
        plugin: ApiVersion,
    },
    Registration(RegistryError),
}

impl fmt::Display for PluginError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PluginError::NotFound(p) => write!(f, "PluginError::NotFound: {}", p.display()),
            PluginError::Load { path, message } => {
                write!(f, "PluginError::Load: {}: {message}", path.display())
            }
            PluginError::NoEntryPoint(p) => write!(
                f,
                "PluginError::NoEntryPoint: {} does not export '{ENTRY_POINT}'",
                p.display()
            ),
            PluginError::VersionMismatch { host, plugin } => write!(
                f,
                "PluginError::VersionMismatch: plugin API {plugin} is incompatible with host API {host}"
            ),
            PluginError::Registration(e) => write!(f, "PluginError::Registration: {e}"),
        }
    }
}

impl std::error::Error for PluginError {}

/// Loads a plugin library and returns its manifest without registering it.
pub fn load_plugin(path: &Path) -> Result<PluginManifest, PluginError> {
    if !path.exists() {
        return Err(PluginError::NotFound(path.to_path_buf()));
    }
    // SAFETY: loading runs the library's initializers; plugins are trusted
    // code chosen on the command line.
    let lib = unsafe { libloading::Library::new(path) }.map_err(|e| PluginError::Load {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    // SAFETY: the symbol type is the documented entry-point signature.
    let entry: EntryPoint = unsafe { lib.get::<EntryPoint>(ENTRY_POINT.as_bytes()) }
        .map(|sym| *sym)
        .map_err(|_| PluginError::NoEntryPoint(path.to_path_buf()))?;
    // SAFETY: calling the entry point is the plugin contract.
    let raw = unsafe { entry() };
    if raw.is_null() {
        return Err(PluginError::Load {
            path: path.to_path_buf(),
            message: "entry point returned a null manifest".into(),
        });
    }
    // SAFETY: `api_version` is the first field of a repr(C) struct, so it is
    // readable whatever the rest of the plugin's manifest looks like.
    let version = unsafe { std::ptr::addr_of!((*raw).api_version).read() };
    if version.major != HOST_API_VERSION.major {
        // the manifest layout is unknown, so it is leaked rather than dropped
        std::mem::forget(lib);
        return Err(PluginError::VersionMismatch {
            host: HOST_API_VERSION,
            plugin: version,
        });
    }
    // SAFETY: same major version, so the layout matches ours.
    let manifest = unsafe { *Box::from_raw(raw) };
    // registrars point into the library, which must outlive them
    std::mem::forget(lib);
    Ok(manifest)
}

/// Runs every registrar of `manifest`. Registering the same manifest twice
/// succeeds without effect.
pub fn register_manifest(
    manifest: &PluginManifest,
    dialects: &mut DialectRegistry,
    passes: &mut PassRegistry,
) -> Result<(), RegistryError> {
    for register in &manifest.dialect_registrars {
        register(dialects)?;
    }
    for register in &manifest.pass_registrars {
        register(passes, &manifest.plugin_name)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
