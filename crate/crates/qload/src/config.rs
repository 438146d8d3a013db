//! Optional JSON config files, merged under command-line flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Overlays the flags that were set onto the config file's object and
/// deserializes the result. Flags win; unset flags (`null`, or `false` for
/// switches) leave the config value in place. Config keys that name no flag
/// are rejected.
pub fn merge<T: Serialize + DeserializeOwned + Default>(flags: &T, config: Option<&Path>) -> Result<T> {
    let mut base = match config {
        None => Map::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
                Value::Object(m) => m,
                _ => bail!("{} must hold a JSON object", path.display()),
            }
        }
    };
    let Value::Object(known) = serde_json::to_value(T::default())? else {
        bail!("flag set is not an object");
    };
    if let Some(k) = base.keys().find(|k| !known.contains_key(*k)) {
        bail!("unknown config key {k:?}");
    }
    let Value::Object(set) = serde_json::to_value(flags)? else {
        bail!("flag set is not an object");
    };
    for (k, v) in set {
        if !v.is_null() && v != Value::Bool(false) {
            base.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(base)).context("invalid configuration")
}
