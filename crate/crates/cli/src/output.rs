//! All-or-nothing replacement of an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use crate::project::SCRATCH_PREFIX;
use crate::{CliError, CliResult};

/// A scratch directory next to the target. Dropping it without
/// [`Staging::commit`] deletes it.
pub(crate) struct Staging {
    dir: PathBuf,
    target: PathBuf,
    committed: bool,
}

fn sibling(target: &Path, tag: &str) -> CliResult<PathBuf> {
    let name = target
        .file_name()
        .ok_or_else(|| CliError::usage(format!("`{}` cannot be an output directory", target.display())))?;
    let parent = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    Ok(parent.join(format!("{SCRATCH_PREFIX}{tag}-{}-{}", name.to_string_lossy(), std::process::id())))
}

impl Staging {
    /// `marker` is a file whose presence shows an existing target was
    /// written by this tool and may be replaced.
    pub fn new(target: &Path, marker: &str) -> CliResult<Self> {
        if target.exists() {
            let empty = fs::read_dir(target).map_err(|e| CliError::io(target, e))?.next().is_none();
            if !empty && !target.join(marker).is_file() {
                return Err(CliError::usage(format!(
                    "`{}` exists and was not written by modulizer; refusing to replace it",
                    target.display()
                )));
            }
        }
        let dir = sibling(target, "stage")?;
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        }
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self { dir, target: target.to_path_buf(), committed: false })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Moves the staged tree into place, replacing the old target.
    pub fn commit(mut self) -> CliResult<()> {
        let old = sibling(&self.target, "old")?;
        let had_old = self.target.exists();
        if had_old {
            fs::rename(&self.target, &old).map_err(|e| CliError::io(&self.target, e))?;
        }
        if let Err(e) = fs::rename(&self.dir, &self.target) {
            if had_old {
                let _ = fs::rename(&old, &self.target);
            }
            return Err(CliError::io(&self.target, e));
        }
        self.committed = true;
        if had_old {
            fs::remove_dir_all(&old).map_err(|e| CliError::io(&old, e))?;
        }
        Ok(())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.dir);
        }
    }
}
