//! Multiplication tables and their on-disk cache format.
//!
//! A table stores, for every ordered basis pair (i, j), the index k of the
//! underlying product and the loop exponent e, so that the ring product is
//! delta^e times basis element k. Entries are ring independent.
//!
//! Cache layout (all integers little-endian):
//!   magic "DGHT" | version u16 | family u8 | n u8 | count u64 |
//!   basis digest 32 bytes | count*count entries of (i u32, j u32, k u32, e u8)
//! A JSON sidecar `<file>.json` repeats the header fields for inspection.

use super::context::Algebra;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

const MAGIC: &[u8; 4] = b"DGHT";
const FORMAT_VERSION: u16 = 1;
const ENTRY_BYTES: usize = 13;
/// Basis counts beyond this are not cacheable (the file would be enormous).
const MAX_CACHE_DIM: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("bad magic bytes, not a table cache")]
    BadMagic,
    #[error("unsupported cache format version {0}")]
    BadVersion(u16),
    #[error("cache truncated: need {need} bytes, have {have}")]
    Truncated { need: u64, have: u64 },
    #[error("unknown family tag {0}")]
    BadFamily(u8),
    #[error("cache is for {found}, expected {expected}")]
    WrongAlgebra { expected: String, found: String },
    #[error("basis digest mismatch, cache was built against a different basis")]
    DigestMismatch,
    #[error("basis count {0} out of range")]
    BadCount(u64),
    #[error("entry {at}: index pair ({i},{j}) does not match row-major position")]
    EntryOutOfOrder { at: u64, i: u32, j: u32 },
    #[error("entry {at}: product index {k} exceeds basis count")]
    EntryIndexRange { at: u64, k: u32 },
    #[error("entry {at}: loop exponent {e} exceeds the strand count")]
    EntryLoopRange { at: u64, e: u8 },
    #[error("only diagram algebras are cached")]
    UnsupportedFamily,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Complete structural multiplication data for one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    dim: usize,
    product: Vec<u32>,
    loops: Vec<u8>,
}

impl MultiplicationTable {
    /// Computes every pairwise product. Rows are independent, so they are
    /// filled in parallel; output depends only on the canonical basis order.
    pub fn build(algebra: &Algebra) -> Self {
        let dim = algebra.dim();
        let rows: Vec<(Vec<u32>, Vec<u8>)> = (0..dim as u32)
            .into_par_iter()
            .map(|i| {
                let mut product = Vec::with_capacity(dim);
                let mut loops = Vec::with_capacity(dim);
                for j in 0..dim as u32 {
                    let (k, e) = algebra.product_indices(i, j);
                    product.push(k);
                    loops.push(e);
                }
                (product, loops)
            })
            .collect();
        let mut product = Vec::with_capacity(dim * dim);
        let mut loops = Vec::with_capacity(dim * dim);
        for (p, l) in rows {
            product.extend_from_slice(&p);
            loops.extend_from_slice(&l);
        }
        MultiplicationTable { dim, product, loops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: u32, j: u32) -> (u32, u8) {
        let pos = i as usize * self.dim + j as usize;
        (self.product[pos], self.loops[pos])
    }
}

/// SHA-256 over the family tag, strand count, and every canonical basis
/// serialization in order. Pins a cache file to one exact basis.
pub fn basis_digest(algebra: &Algebra) -> Result<[u8; 32], CacheError> {
    let family = algebra
        .id()
        .family
        .diagram_family()
        .ok_or(CacheError::UnsupportedFamily)?;
    let basis = algebra.diagram_basis().ok_or(CacheError::UnsupportedFamily)?;
    let mut hasher = Sha256::new();
    hasher.update([family.tag(), algebra.n() as u8]);
    for d in basis {
        hasher.update(d.to_string().as_bytes());
        hasher.update(b"\n");
    }
    Ok(hasher.finalize().into())
}

/// Writes the table and its JSON sidecar.
pub fn write_table_cache(
    path: &Path,
    algebra: &Algebra,
    table: &MultiplicationTable,
) -> Result<(), CacheError> {
    let family = algebra
        .id()
        .family
        .diagram_family()
        .ok_or(CacheError::UnsupportedFamily)?;
    let digest = basis_digest(algebra)?;
    let dim = table.dim() as u64;

    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(MAGIC)?;
    file.write_all(&FORMAT_VERSION.to_le_bytes())?;
    file.write_all(&[family.tag(), algebra.n() as u8])?;
    file.write_all(&dim.to_le_bytes())?;
    file.write_all(&digest)?;
    let mut entry = [0u8; ENTRY_BYTES];
    for i in 0..table.dim() as u32 {
        for j in 0..table.dim() as u32 {
            let (k, e) = table.entry(i, j);
            entry[0..4].copy_from_slice(&i.to_le_bytes());
            entry[4..8].copy_from_slice(&j.to_le_bytes());
            entry[8..12].copy_from_slice(&k.to_le_bytes());
            entry[12] = e;
            file.write_all(&entry)?;
        }
    }
    file.flush()?;

    let sidecar = serde_json::json!({
        "format_version": FORMAT_VERSION,
        "family": family.to_string(),
        "n": algebra.n(),
        "basis_count": dim,
        "basis_digest": hex_string(&digest),
    });
    let sidecar_path = path.with_extension("json");
    std::fs::write(sidecar_path, format!("{sidecar:#}\n"))?;
    Ok(())
}

/// Everything a cache file claims, before checking it against a live basis.
pub struct RawTable {
    pub family_tag: u8,
    pub n: u8,
    pub digest: [u8; 32],
    pub table: MultiplicationTable,
}

/// Parses cache bytes. Never panics; every field is validated before any
/// allocation sized from it.
pub fn load_table_bytes(bytes: &[u8]) -> Result<RawTable, CacheError> {
    let header_len = 4 + 2 + 1 + 1 + 8 + 32;
    if bytes.len() < header_len {
        return Err(CacheError::Truncated { need: header_len as u64, have: bytes.len() as u64 });
    }
    if &bytes[0..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FORMAT_VERSION {
        return Err(CacheError::BadVersion(version));
    }
    let family_tag = bytes[6];
    if crate::diagrams::DiagramFamily::ALL.iter().all(|f| f.tag() != family_tag) {
        return Err(CacheError::BadFamily(family_tag));
    }
    let n = bytes[7];
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    if count == 0 || count > MAX_CACHE_DIM {
        return Err(CacheError::BadCount(count));
    }
    let mut digest = [0u8; 32];
    digest.copy_from_slice(&bytes[16..48]);

    let entries = count * count;
    let need = header_len as u64 + entries * ENTRY_BYTES as u64;
    if bytes.len() as u64 != need {
        return Err(CacheError::Truncated { need, have: bytes.len() as u64 });
    }

    let dim = count as usize;
    let mut product = Vec::with_capacity(dim * dim);
    let mut loops = Vec::with_capacity(dim * dim);
    let body = &bytes[header_len..];
    for at in 0..entries {
        let off = at as usize * ENTRY_BYTES;
        let i = u32::from_le_bytes(body[off..off + 4].try_into().unwrap());
        let j = u32::from_le_bytes(body[off + 4..off + 8].try_into().unwrap());
        let k = u32::from_le_bytes(body[off + 8..off + 12].try_into().unwrap());
        let e = body[off + 12];
        if u64::from(i) != at / count || u64::from(j) != at % count {
            return Err(CacheError::EntryOutOfOrder { at, i, j });
        }
        if u64::from(k) >= count {
            return Err(CacheError::EntryIndexRange { at, k });
        }
        if e > n {
            return Err(CacheError::EntryLoopRange { at, e });
        }
        product.push(k);
        loops.push(e);
    }
    Ok(RawTable {
        family_tag,
        n,
        digest,
        table: MultiplicationTable { dim, product, loops },
    })
}

/// Loads a cache file and verifies it belongs to this algebra's basis.
pub fn read_table_cache(path: &Path, algebra: &Algebra) -> Result<MultiplicationTable, CacheError> {
    let family = algebra
        .id()
        .family
        .diagram_family()
        .ok_or(CacheError::UnsupportedFamily)?;
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let raw = load_table_bytes(&bytes)?;
    if raw.family_tag != family.tag() || raw.n as usize != algebra.n() {
        return Err(CacheError::WrongAlgebra {
            expected: algebra.id().to_string(),
            found: format!("family tag {} n={}", raw.family_tag, raw.n),
        });
    }
    if raw.table.dim() != algebra.dim() {
        return Err(CacheError::BadCount(raw.table.dim() as u64));
    }
    if raw.digest != basis_digest(algebra)? {
        return Err(CacheError::DigestMismatch);
    }
    Ok(raw.table)
}

/// Conventional cache file name for an algebra, under a cache directory.
pub fn cache_file_name(algebra: &Algebra) -> String {
    format!("multable-{}-{}.dght", algebra.id().family, algebra.n())
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraFamily, AlgebraId};
    use crate::budget::Budget;

    fn j3() -> Algebra {
        Algebra::new(AlgebraId::new(AlgebraFamily::JonesAnnular, 3)).unwrap()
    }

    #[test]
    fn table_matches_direct_composition() {
        let a = j3();
        let table = MultiplicationTable::build(&a);
        for i in 0..a.dim() as u32 {
            for j in 0..a.dim() as u32 {
                assert_eq!(table.entry(i, j), a.product_indices(i, j));
            }
        }
    }

    #[test]
    fn table_budget_is_enforced() {
        let a = j3();
        assert!(a.table(&Budget::new(10)).is_err());
        assert!(a.table(&Budget::new(1_000_000)).is_ok());
        assert!(a.has_table());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = j3();
        let table = MultiplicationTable::build(&a);
        let path = dir.path().join(cache_file_name(&a));
        write_table_cache(&path, &a, &table).unwrap();
        let loaded = read_table_cache(&path, &a).unwrap();
        assert_eq!(loaded, table);
        assert!(path.with_extension("json").exists());

        let sidecar: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap())
                .unwrap();
        assert_eq!(sidecar["basis_count"], 12);
        assert_eq!(sidecar["family"], "jones");
    }

    #[test]
    fn cache_rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let a = j3();
        let table = MultiplicationTable::build(&a);
        let path = dir.path().join(cache_file_name(&a));
        write_table_cache(&path, &a, &table).unwrap();
        let good = std::fs::read(&path).unwrap();

        // Wrong magic.
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(load_table_bytes(&bad), Err(CacheError::BadMagic)));

        // Truncation.
        assert!(matches!(
            load_table_bytes(&good[..good.len() - 1]),
            Err(CacheError::Truncated { .. })
        ));

        // Digest flip.
        let mut bad = good.clone();
        bad[20] ^= 0xff;
        let raw = load_table_bytes(&bad).unwrap();
        assert_ne!(raw.digest, basis_digest(&a).unwrap());
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(read_table_cache(&path, &a), Err(CacheError::DigestMismatch)));

        // Out-of-range product index.
        let mut bad = good.clone();
        let body_start = 48;
        bad[body_start + 8..body_start + 12].copy_from_slice(&999u32.to_le_bytes());
        assert!(matches!(
            load_table_bytes(&bad),
            Err(CacheError::EntryIndexRange { at: 0, .. })
        ));

        // Wrong algebra.
        let j4 = Algebra::new(AlgebraId::new(AlgebraFamily::JonesAnnular, 4)).unwrap();
        std::fs::write(&path, &good).unwrap();
        assert!(matches!(
            read_table_cache(&path, &j4),
            Err(CacheError::WrongAlgebra { .. })
        ));
    }

    #[test]
    fn loader_survives_junk_bytes() {
        let mut x = 0x9e3779b97f4a7c15u64;
        for len in [0usize, 3, 16, 47, 48, 61, 200] {
            let mut bytes = vec![0u8; len];
            for b in bytes.iter_mut() {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                *b = x as u8;
            }
            let _ = load_table_bytes(&bytes);
            // Plausible headers with junk bodies must also be rejected
            // cleanly.
            if len >= 48 {
                bytes[0..4].copy_from_slice(MAGIC);
                bytes[4..6].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
                let _ = load_table_bytes(&bytes);
            }
        }
    }
}
