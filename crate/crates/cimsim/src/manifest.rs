//! Run manifests: enough to re-run a command and check its outputs byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::formats::write_file;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileHash {
    /// Path as given on the command line; `-` for standard output.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
    /// Working directory the relative paths in `argv` refer to.
    pub cwd: String,
    /// Every resolved parameter, defaults included.
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub timestamp: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects inputs, outputs and parameters while a command runs.
#[derive(Debug)]
pub struct Run {
    manifest: RunManifest,
    manifest_path: Option<PathBuf>,
    default_manifest: Option<PathBuf>,
}

impl Run {
    pub fn new(command: &str, argv: Vec<String>, manifest_path: Option<PathBuf>) -> Self {
        let cwd = std::env::current_dir().map(|p| p.display().to_string()).unwrap_or_default();
        Run {
            manifest: RunManifest {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: command.into(),
                argv,
                cwd,
                parameters: serde_json::Map::new(),
                seeds: Vec::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                timestamp: String::new(),
            },
            manifest_path,
            default_manifest: None,
        }
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    /// Reads an input file and records its hash.
    pub fn input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.manifest.inputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|_| CliError::input(format!("{} is not UTF-8 text", path.display())))
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable parameter");
        self.manifest.parameters.insert(key.into(), v);
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seeds.push(seed);
    }

    /// Writes to `path`, or to standard output when `path` is `None`.
    pub fn output(&mut self, path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
        let name = match path {
            Some(p) => {
                write_file(p, bytes)?;
                p.display().to_string()
            }
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io(Path::new("-"), e))?;
                "-".into()
            }
        };
        self.manifest.outputs.push(FileHash { path: name, sha256: sha256_hex(bytes) });
        Ok(())
    }

    /// Sets where the manifest goes when no explicit path was given.
    pub fn manifest_default(&mut self, path: PathBuf) {
        self.default_manifest = Some(path);
    }

    /// Places the manifest next to the command's main output, `<out>.manifest.json`.
    pub fn primary_output(&mut self, out: Option<&Path>) {
        if let Some(p) = out {
            let mut m = p.as_os_str().to_owned();
            m.push(".manifest.json");
            self.default_manifest = Some(m.into());
        }
    }

    /// Stamps and writes the manifest: the explicit path, else next to the main
    /// output file, else `cimsim.manifest.json` in the working directory.
    pub fn finish(mut self) -> CliResult<RunManifest> {
        self.manifest.timestamp = chrono::Utc::now().to_rfc3339();
        let path = self
            .manifest_path
            .or(self.default_manifest)
            .unwrap_or_else(|| PathBuf::from("cimsim.manifest.json"));
        write_file(&path, crate::outputs::to_json(&self.manifest).as_bytes())?;
        Ok(self.manifest)
    }
}

pub fn load_manifest(path: &Path) -> CliResult<RunManifest> {
    Ok(serde_json::from_str(&crate::formats::read_file(path)?)?)
}
