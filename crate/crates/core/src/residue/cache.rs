//! On-disk enumerations of `G_m` and of the coset table `G_m / I_m`.
//!
//! Files are canonical JSON (sorted element lists, fixed field order), so
//! warming twice produces identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::context::ResidueContext;
use super::group::{FiniteGroup, GroupSpec};
use super::matrix::MatrixModPm;
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheKind {
    Group,
    IwahoriCosets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    kind: CacheKind,
    p: u16,
    m: u32,
    n: usize,
    /// `|G_m|` for the group file, `|G_m : I_m|` for the coset table.
    count: u64,
    elements: Vec<Vec<u16>>,
}

/// Summary of one cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub file: String,
    pub kind: CacheKind,
    pub p: u16,
    pub m: u32,
    pub n: usize,
    pub count: u64,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct GroupCache {
    dir: PathBuf,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

impl GroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GroupCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: CacheKind, spec: GroupSpec) -> PathBuf {
        let stem = match kind {
            CacheKind::Group => "gl",
            CacheKind::IwahoriCosets => "iwahori_cosets",
        };
        self.dir.join(format!("{stem}_p{}_m{}_n{}.json", spec.p, spec.m, spec.n))
    }

    fn read(&self, kind: CacheKind, spec: GroupSpec) -> Result<Option<CacheFile>> {
        let path = self.path(kind, spec);
        if !path.exists() {
            return Ok(None);
        }
        let file: CacheFile = serde_json::from_slice(&fs::read(&path).map_err(io)?).map_err(io)?;
        let header_ok = file.version == CACHE_VERSION
            && file.kind == kind
            && (file.p, file.m, file.n) == (spec.p, spec.m, spec.n)
            && file.count == file.elements.len() as u64;
        Ok(header_ok.then_some(file))
    }

    fn write(&self, kind: CacheKind, spec: GroupSpec, elements: &[MatrixModPm]) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(io)?;
        let file = CacheFile {
            version: CACHE_VERSION,
            kind,
            p: spec.p,
            m: spec.m,
            n: spec.n,
            count: elements.len() as u64,
            elements: elements.iter().map(MatrixModPm::entries).collect(),
        };
        let tmp = self.path(kind, spec).with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(&file).map_err(io)?).map_err(io)?;
        fs::rename(&tmp, self.path(kind, spec)).map_err(io)
    }

    fn decode(spec: GroupSpec, file: &CacheFile) -> Result<Vec<MatrixModPm>> {
        file.elements
            .iter()
            .map(|e| MatrixModPm::new(spec.n, spec.modulus(), &e.iter().map(|&x| i64::from(x)).collect::<Vec<_>>()))
            .collect()
    }

    /// The group, read from disk when a valid file exists, otherwise
    /// enumerated and stored.
    pub fn group(&self, spec: GroupSpec, budget: u64) -> Result<FiniteGroup> {
        if spec.order() > budget {
            return Err(Error::BudgetExceeded { needed: spec.order(), budget });
        }
        if let Some(file) = self.read(CacheKind::Group, spec)? {
            return FiniteGroup::from_elements(spec, Self::decode(spec, &file)?);
        }
        let g = FiniteGroup::gl(spec, budget)?;
        self.write(CacheKind::Group, spec, g.elements())?;
        Ok(g)
    }

    /// Enumerates the group and the coset table `G_m / I_m`; files already
    /// present and valid are left untouched.
    pub fn warm(&self, spec: GroupSpec, budget: u64) -> Result<Vec<CacheEntry>> {
        let group = self.group(spec, budget)?;
        if self.read(CacheKind::IwahoriCosets, spec)?.is_none() {
            let ctx = ResidueContext::from_group(group)?;
            let (reps, _) = ctx.group().whole().left_cosets(ctx.iwahori());
            self.write(CacheKind::IwahoriCosets, spec, &reps)?;
        }
        Ok(self.stat()?.into_iter().filter(|e| (e.p, e.m, e.n) == (spec.p, spec.m, spec.n)).collect())
    }

    /// Coset representatives of `G_m / I_m`, if cached.
    pub fn iwahori_cosets(&self, spec: GroupSpec) -> Result<Option<Vec<MatrixModPm>>> {
        self.read(CacheKind::IwahoriCosets, spec)?.map(|f| Self::decode(spec, &f)).transpose()
    }

    fn files(&self) -> Result<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out: Vec<PathBuf> = fs::read_dir(&self.dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                let name = p.file_name().and_then(|s| s.to_str()).unwrap_or("");
                (name.starts_with("gl_p") || name.starts_with("iwahori_cosets_p")) && name.ends_with(".json")
            })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn stat(&self) -> Result<Vec<CacheEntry>> {
        self.files()?
            .into_iter()
            .map(|path| {
                let bytes = fs::read(&path).map_err(io)?;
                let file: CacheFile = serde_json::from_slice(&bytes).map_err(io)?;
                Ok(CacheEntry {
                    file: path.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string(),
                    kind: file.kind,
                    p: file.p,
                    m: file.m,
                    n: file.n,
                    count: file.count,
                    bytes: bytes.len() as u64,
                })
            })
            .collect()
    }

    /// Removes every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let files = self.files()?;
        for f in &files {
            fs::remove_file(f).map_err(io)?;
        }
        Ok(files.len())
    }
}
