//! Exports a symbol, just not the one the host looks for.

#[no_mangle]
pub extern "C" fn qopt_plugin_register_v0() -> u32 {
    0
}
