//! Binary generator cache.
//!
//! Layout (little endian): 8-byte magic, `u32` version, `u32` m, `u32` q,
//! `u64` count, then each generator's canonical basis as `(m+1)·(2m+2)`
//! row-major field-index bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{GeneratorSet, QuadricModel};
use crate::error::{Error, Result};
use crate::gf::Felt;

pub const MAGIC: &[u8; 8] = b"HEKRGENS";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 8;

/// File name used for Q+(2m+1,q) inside a cache directory.
pub fn file_name(m: usize, q: u32) -> String {
    format!("qplus-m{m}-q{q}-v{VERSION}.gens")
}

pub fn path_in(dir: &Path, m: usize, q: u32) -> PathBuf {
    dir.join(file_name(m, q))
}

pub fn encode(gs: &GeneratorSet) -> Vec<u8> {
    let m = gs.m();
    let per = (m + 1) * (2 * m + 2);
    let mut out = Vec::with_capacity(HEADER_LEN + per * gs.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.extend_from_slice(&gs.q().to_le_bytes());
    out.extend_from_slice(&(gs.len() as u64).to_le_bytes());
    for g in gs.generators() {
        out.extend_from_slice(&g.to_bytes());
    }
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// Parses a cache image. Every stored basis must already be canonical and
/// every field index in range; anything else is rejected.
pub fn decode(bytes: &[u8]) -> Result<GeneratorSet> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = read_u32(bytes, 8);
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let m = read_u32(bytes, 12) as usize;
    let q = read_u32(bytes, 16);
    let count = u64::from_le_bytes(bytes[20..28].try_into().expect("8 bytes")) as usize;
    let model = QuadricModel::new(m, q)?;
    let width = 2 * m + 2;
    let per = (m + 1) * width;
    let body = &bytes[HEADER_LEN..];
    if body.len() != count * per {
        return Err(Error::Cache(format!(
            "expected {} body bytes for {count} generators, found {}",
            count * per,
            body.len()
        )));
    }
    let mut gens = Vec::with_capacity(count);
    for chunk in body.chunks_exact(per.max(1)) {
        let flat = chunk
            .iter()
            .map(|&b| model.field().elem(b))
            .collect::<Result<Vec<Felt>>>()?;
        let g = model.space().from_flat(flat.clone());
        if g.basis() != flat.as_slice() {
            return Err(Error::Cache("stored basis is not in canonical form".into()));
        }
        gens.push(g);
    }
    let gs = GeneratorSet::from_generators(model, gens)?;
    if gs.len() != count {
        return Err(Error::Cache("duplicate generators in cache".into()));
    }
    Ok(gs)
}

pub fn save(gs: &GeneratorSet, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // write then rename so readers never see a partial file
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&encode(gs))?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<GeneratorSet> {
    decode(&fs::read(path)?)
}

/// Loads Q+(2m+1,q) from `dir` if cached, otherwise enumerates and stores it.
/// Returns the set and whether it came from the cache.
pub fn load_or_enumerate(dir: &Path, m: usize, q: u32, cap: u64) -> Result<(GeneratorSet, bool)> {
    let path = path_in(dir, m, q);
    if path.exists() {
        if let Ok(gs) = load(&path) {
            if gs.m() == m && gs.q() == q {
                return Ok((gs, true));
            }
        }
    }
    let gs = QuadricModel::new(m, q)?.enumerate_generators(cap)?;
    save(&gs, &path)?;
    Ok((gs, false))
}
