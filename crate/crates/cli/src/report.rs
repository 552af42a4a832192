use std::fmt::Display;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Plain-text report. The header names the tool version, the spec hash
/// and every seed used, so equal inputs give byte-identical reports.
pub struct Report {
    command: &'static str,
    text: String,
}

impl Report {
    pub fn new(command: &'static str, spec_hash: &str, seeds: &[(&str, u64)]) -> Self {
        let seeds = if seeds.is_empty() {
            "none".to_string()
        } else {
            seeds
                .iter()
                .map(|(name, s)| format!("{name}={s}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let text = format!(
            "pincode {}\ncommand {command}\nspec-sha256 {spec_hash}\nseeds {seeds}\n",
            env!("CARGO_PKG_VERSION")
        );
        Self { command, text }
    }

    pub fn line(&mut self, line: impl Display) {
        self.text.push_str(&line.to_string());
        self.text.push('\n');
    }

    /// Prints the report and, with an output directory, saves it as
    /// `<command>.txt`.
    pub fn finish(self, out: Option<&Path>) -> Result<(), CliError> {
        print!("{}", self.text);
        if let Some(dir) = out {
            write_file(dir, &format!("{}.txt", self.command), &self.text)?;
        }
        Ok(())
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}
