use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// A file to be written, fully rendered in memory.
#[derive(Debug)]
pub struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Output {
    pub fn new(name: impl Into<String>, body: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            bytes: body.into(),
        }
    }

    pub fn json<T: serde::Serialize>(name: impl Into<String>, value: &T) -> Result<Self> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        Ok(Self::new(name, body))
    }
}

/// Writes every output via temp file + rename. If any write fails, the
/// outputs already put in place are removed again.
pub fn write_all(dir: &Path, outputs: &[Output]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::with_capacity(outputs.len());
    for out in outputs {
        match write_atomic(dir, out) {
            Ok(path) => written.push(path),
            Err(e) => {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(e);
            }
        }
    }
    Ok(written)
}

fn write_atomic(dir: &Path, out: &Output) -> Result<PathBuf> {
    let target = dir.join(&out.name);
    let tmp = dir.join(format!(".{}.tmp", out.name));
    fs::write(&tmp, &out.bytes).with_context(|| format!("writing {}", tmp.display()))?;
    if let Err(e) = fs::rename(&tmp, &target) {
        let _ = fs::remove_file(&tmp);
        return Err(e).with_context(|| format!("renaming into {}", target.display()));
    }
    Ok(target)
}
