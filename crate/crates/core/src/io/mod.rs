//! File formats: the line-oriented workload file and the JSON profile.

mod profile;
mod workload;

pub use profile::{profile_from_json, profile_to_json, ProfileFile};
pub use workload::{parse_workload, write_workload};

use std::path::Path;

use crate::costs::Profile;
use crate::error::{Error, Result};
use crate::model::Workload;

pub fn read_workload(path: &Path) -> Result<Workload> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_workload(&text).map_err(|(line, message)| Error::Parse {
        path: path.display().to_string(),
        line,
        message,
    })
}

pub fn read_profile(path: &Path) -> Result<Profile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    profile_from_json(&text)
}
