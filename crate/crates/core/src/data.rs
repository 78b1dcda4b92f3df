//! Bundled default data files, overridable through `MSDFORGE_DATA_DIR`.

use std::path::PathBuf;

use crate::error::{Error, Result};

pub const DATA_DIR_ENV: &str = "MSDFORGE_DATA_DIR";

const ANSATZ: &str = include_str!("../data/ansatz.json");
const CULTIVATION: &str = include_str!("../data/cultivation.csv");
const GROW_ANCHORS: &str = include_str!("../data/grow_anchors.csv");

/// Compiled-in copy of a data file.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "ansatz.json" => Some(ANSATZ),
        "cultivation.csv" => Some(CULTIVATION),
        "grow_anchors.csv" => Some(GROW_ANCHORS),
        _ => None,
    }
}

/// Reads `name` from `$MSDFORGE_DATA_DIR` if set, else from the bundled copy.
pub fn read(name: &str) -> Result<String> {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let path = PathBuf::from(dir).join(name);
        return std::fs::read_to_string(&path).map_err(|e| Error::Data(format!("{}: {e}", path.display())));
    }
    bundled(name).map(str::to_owned).ok_or_else(|| Error::Data(format!("no bundled data file {name}")))
}
