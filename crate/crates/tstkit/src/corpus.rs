//! Corpora on disk: one `.tst` file per pair (definitions `P` and `Q`) and
//! a `manifest.json` with the seed and generator settings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tstkit_core::harness::Report;
use tstkit_core::lang::{parse_tst_file, render_tst, Tst};

use crate::format::GenConfigJson;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Manifest { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Pair { path: PathBuf, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub seed: u64,
    pub file: String,
    pub sync: String,
    #[serde(rename = "async")]
    pub asynchronous: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub queue_bound: usize,
    pub depth: usize,
    pub config: GenConfigJson,
    pub pairs: Vec<ManifestEntry>,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.to_path_buf(), source }
}

pub fn pair_file_name(index: usize) -> String {
    format!("pair-{:04}.tst", index)
}

pub fn render_pair(p: &Tst, q: &Tst) -> String {
    format!("P = {}\nQ = {}\n", render_tst(p), render_tst(q))
}

/// Writes every pair of `report` and the manifest into `dir`.
pub fn write_corpus(dir: &Path, report: &Report, seed: u64, queue_bound: usize, depth: usize, config: &GenConfigJson) -> Result<Manifest, CorpusError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut pairs = Vec::new();
    for r in &report.records {
        let file = pair_file_name(r.index);
        let path = dir.join(&file);
        fs::write(&path, render_pair(&r.p, &r.q)).map_err(io(&path))?;
        pairs.push(ManifestEntry {
            index: r.index,
            seed: r.seed,
            file,
            sync: r.sync.name().to_string(),
            asynchronous: r.asynchronous.name().to_string(),
        });
    }
    let manifest = Manifest { seed, queue_bound, depth, config: config.clone(), pairs };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(io(&path))?;
    Ok(manifest)
}

/// Reads a `P`/`Q` pair file.
pub fn read_pair(path: &Path) -> Result<(Tst, Tst), CorpusError> {
    let text = fs::read_to_string(path).map_err(io(path))?;
    let fail = |message: String| CorpusError::Pair { path: path.to_path_buf(), message };
    let defs = parse_tst_file(&text).map_err(|e| fail(e.to_string()))?;
    let find = |name: &str| {
        defs.iter()
            .find(|d| d.name.as_deref() == Some(name))
            .map(|d| d.term.clone())
            .ok_or_else(|| fail(format!("no definition of `{}`", name)))
    };
    Ok((find("P")?, find("Q")?))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CorpusError> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(io(&path))?;
    serde_json::from_str(&text).map_err(|source| CorpusError::Manifest { path, source })
}

/// The manifest and every pair it lists.
pub fn read_corpus(dir: &Path) -> Result<(Manifest, Vec<(Tst, Tst)>), CorpusError> {
    let manifest = read_manifest(dir)?;
    let pairs = manifest.pairs.iter().map(|e| read_pair(&dir.join(&e.file))).collect::<Result<_, _>>()?;
    Ok((manifest, pairs))
}
