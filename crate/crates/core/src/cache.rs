//! On-disk cache for point tables (`MKXT`) and orbit decompositions (`MKOR`).
//!
//! Both formats are little-endian: a four-byte magic, a u16 version, then
//! `p` and `t` as u64. Anything that fails to parse or validate is treated
//! as a miss: the caller recomputes and overwrites it.

use crate::action::{orbit_decompose, ActionError, GeneratorSet, OrbitDecomposition, OrbitInfo};
use crate::surface::{PointTable, Subset, SurfaceError};
use log::warn;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: u16 = 1;
const TABLE_MAGIC: &[u8; 4] = b"MKXT";
const ORBIT_MAGIC: &[u8; 4] = b"MKOR";

pub fn table_path(dir: &Path, p: u64, t: u64) -> PathBuf {
    dir.join(format!("table_p{p}_t{t}.mkxt"))
}

pub fn orbits_path(dir: &Path, p: u64, t: u64, gens: u64, subset: Subset) -> PathBuf {
    dir.join(format!("orbits_p{p}_t{t}_g{gens}_s{}.mkor", subset.tag()))
}

fn header(magic: &[u8; 4], p: u64, t: u64) -> Vec<u8> {
    let mut out = magic.to_vec();
    out.extend(FORMAT_VERSION.to_le_bytes());
    out.extend(p.to_le_bytes());
    out.extend(t.to_le_bytes());
    out
}

pub fn encode_table(table: &PointTable) -> Vec<u8> {
    let mut out = header(TABLE_MAGIC, table.p(), table.t());
    out.extend((table.len() as u64).to_le_bytes());
    for &k in table.keys() {
        out.extend(k.to_le_bytes());
    }
    out
}

pub fn encode_orbits(orbits: &OrbitDecomposition) -> Vec<u8> {
    let mut out = header(ORBIT_MAGIC, orbits.p, orbits.t);
    out.extend(orbits.generator_set_id.to_le_bytes());
    out.push(orbits.subset.tag());
    out.extend((orbits.orbit_of.len() as u64).to_le_bytes());
    for &o in &orbits.orbit_of {
        out.extend(o.to_le_bytes());
    }
    out.extend((orbits.orbits.len() as u64).to_le_bytes());
    for o in &orbits.orbits {
        out.extend(o.representative.to_le_bytes());
        out.extend(o.size.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.buf.len() < n {
            return None;
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Some(head)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u16(&mut self) -> Option<u16> {
        self.take(2).map(|b| u16::from_le_bytes(b.try_into().expect("two bytes")))
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().expect("four bytes")))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().expect("eight bytes")))
    }

    fn header(&mut self, magic: &[u8; 4], p: u64, t: u64) -> Option<()> {
        (self.take(4)? == magic && self.u16()? == FORMAT_VERSION && self.u64()? == p && self.u64()? == t).then_some(())
    }
}

/// `None` on any mismatch, truncation or invalid point.
pub fn decode_table(bytes: &[u8], p: u64, t: u64) -> Option<PointTable> {
    let mut r = Reader { buf: bytes };
    r.header(TABLE_MAGIC, p, t)?;
    let n = r.u64()? as usize;
    if r.buf.len() != n.checked_mul(8)? {
        return None;
    }
    let keys = (0..n).map(|_| r.u64()).collect::<Option<Vec<_>>>()?;
    PointTable::from_keys(p, t, keys).ok()
}

/// `None` unless the file matches `table`, `gens` and `subset` and its orbit
/// sizes agree with its orbit map.
pub fn decode_orbits(bytes: &[u8], table: &PointTable, gens: u64, subset: Subset) -> Option<OrbitDecomposition> {
    let mut r = Reader { buf: bytes };
    r.header(ORBIT_MAGIC, table.p(), table.t())?;
    if r.u64()? != gens || Subset::from_tag(r.u8()?)? != subset {
        return None;
    }
    let n = r.u64()? as usize;
    if n != table.len() {
        return None;
    }
    let orbit_of = (0..n).map(|_| r.u32()).collect::<Option<Vec<_>>>()?;
    let m = r.u64()? as usize;
    if r.buf.len() != m.checked_mul(16)? {
        return None;
    }
    let orbits = (0..m)
        .map(|_| Some(OrbitInfo { representative: r.u64()?, size: r.u64()? }))
        .collect::<Option<Vec<_>>>()?;
    let mut counts = vec![0u64; m];
    for (i, &o) in orbit_of.iter().enumerate() {
        if o == OrbitDecomposition::OUTSIDE {
            if table.in_subset(i, subset) {
                return None;
            }
            continue;
        }
        *counts.get_mut(o as usize)? += 1;
    }
    let consistent = orbits.iter().enumerate().all(|(j, o)| {
        o.size == counts[j] && table.index_of_key(o.representative).is_some_and(|i| orbit_of[i] as usize == j)
    });
    consistent.then(|| OrbitDecomposition { p: table.p(), t: table.t(), generator_set_id: gens, subset, orbit_of, orbits })
}

/// Cache rooted at one directory; `None` disables it.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn read(&self, path: &Path) -> Option<Vec<u8>> {
        match fs::read(path) {
            Ok(b) => Some(b),
            Err(e) if e.kind() == io::ErrorKind::NotFound => None,
            Err(e) => {
                warn!("cannot read {}: {e}", path.display());
                None
            }
        }
    }

    fn write(&self, path: &Path, bytes: &[u8]) {
        let res = path.parent().map_or(Ok(()), fs::create_dir_all).and_then(|_| fs::write(path, bytes));
        if let Err(e) = res {
            warn!("cannot write {}: {e}", path.display());
        }
    }

    pub fn table(&self, p: u64, t: i64) -> Result<PointTable, SurfaceError> {
        let Some(dir) = &self.dir else {
            return PointTable::enumerate_parallel(p, t);
        };
        let tr = t.rem_euclid(p as i64) as u64;
        let path = table_path(dir, p, tr);
        if let Some(bytes) = self.read(&path) {
            if let Some(table) = decode_table(&bytes, p, tr) {
                return Ok(table);
            }
            warn!("corrupt or stale cache file {}, recomputing", path.display());
        }
        let table = PointTable::enumerate_parallel(p, t)?;
        self.write(&path, &encode_table(&table));
        Ok(table)
    }

    pub fn orbits(&self, table: &PointTable, gens: &GeneratorSet, subset: Subset) -> Result<OrbitDecomposition, ActionError> {
        let Some(dir) = &self.dir else {
            return orbit_decompose(table, gens, subset);
        };
        let path = orbits_path(dir, table.p(), table.t(), gens.id(), subset);
        if let Some(bytes) = self.read(&path) {
            if let Some(o) = decode_orbits(&bytes, table, gens.id(), subset) {
                return Ok(o);
            }
            warn!("corrupt or stale cache file {}, recomputing", path.display());
        }
        let o = orbit_decompose(table, gens, subset)?;
        self.write(&path, &encode_orbits(&o));
        Ok(o)
    }
}
