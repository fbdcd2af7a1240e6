//! Run persistence: input hashing, sidecars and the versioned JSON record.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use smc_kernel::drivers::KernelReport;
use smc_kernel::gen::{GenSpec, Partition};
use smc_kernel::io::{load_graph, save_graph};
use smc_kernel::SignedGraph;

use crate::Failure;

pub const SCHEMA: u32 = 1;

/// Written next to a generated graph as `<graph>.partition.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub spec: GenSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputRef {
    pub path: PathBuf,
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_spec: Option<GenSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub pipeline_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versions {
    pub smc: String,
}

impl Default for Versions {
    fn default() -> Versions {
        Versions { smc: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub command: Vec<String>,
    pub input: InputRef,
    pub k: i64,
    pub report: KernelReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_path: Option<PathBuf>,
    pub timings: Timings,
    pub versions: Versions,
}

pub fn sidecar_path(graph: &Path) -> PathBuf {
    with_suffix(graph, ".partition.json")
}

/// `path` with `suffix` appended to the full file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_graph(path: &Path) -> Result<(SignedGraph, String), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let g = load_graph(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((g, sha256_hex(text.as_bytes())))
}

pub fn write_graph(path: &Path, g: &SignedGraph) -> Result<(), Failure> {
    fs::write(path, save_graph(g)).map_err(|e| Failure::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("records serialize");
    fs::write(path, text + "\n").map_err(|e| Failure::io(path, e))
}

pub fn read_sidecar(graph: &Path) -> Result<Option<Sidecar>, Failure> {
    let path = sidecar_path(graph);
    if path.exists() {
        read_json(&path).map(Some)
    } else {
        Ok(None)
    }
}
