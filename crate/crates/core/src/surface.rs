//! F_p-points of the surfaces X_t : x² + y² + z² − xyz − 2 = t.
//!
//! A [`PointTable`] stores every solution as a packed key `x + p·y + p²·z`
//! in increasing order, so a point's index is found by binary search and
//! "smallest key" is a canonical choice of orbit representative.

use crate::arith::{ArithError, PrimeField};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Keys are `x + p y + p² z`, so p³ must fit in a `u64` with room to spare.
pub const MAX_SURFACE_PRIME: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("p = {0} exceeds the surface enumeration cap 2^20")]
    TooLarge(u64),
    #[error("({x}, {y}, {z}) is not on X_{t} mod {p}")]
    NotOnSurface { p: u64, t: u64, x: u64, y: u64, z: u64 },
    #[error("star count mismatch at p = {p}: closed form {formula}, enumeration {enumerated}")]
    StarCountMismatch { p: u64, formula: u64, enumerated: u64 },
    #[error("operation needs an odd prime")]
    EvenPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SurfacePoint {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl SurfacePoint {
    pub fn new(x: u64, y: u64, z: u64) -> Self {
        Self { x, y, z }
    }

    pub fn key(&self, p: u64) -> u64 {
        self.x + p * (self.y + p * self.z)
    }

    pub fn from_key(key: u64, p: u64) -> Self {
        Self {
            x: key % p,
            y: key / p % p,
            z: key / (p * p),
        }
    }

    pub fn coords(&self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }

    fn nonzero_count(&self) -> usize {
        self.coords().iter().filter(|&&c| c != 0).count()
    }
}

impl std::fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// x² + y² + z² − xyz − 2 mod p, i.e. the trace invariant of the point.
pub fn trace_invariant(f: &PrimeField, pt: &SurfacePoint) -> u64 {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let s = f.add(f.add(f.mul(x, x), f.mul(y, y)), f.mul(z, z));
    f.sub(f.sub(s, f.mul(f.mul(x, y), z)), 2 % f.p())
}

/// Which points of a table an operation ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    All,
    /// At least two nonzero coordinates, and t ≠ 2.
    Star,
    /// Everything except (0,0,0).
    NonOrigin,
}

impl Subset {
    pub fn tag(self) -> u8 {
        match self {
            Subset::All => 0,
            Subset::Star => 1,
            Subset::NonOrigin => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Subset::All),
            1 => Some(Subset::Star),
            2 => Some(Subset::NonOrigin),
            _ => None,
        }
    }
}

const FLAG_STAR: u8 = 1;
const FLAG_NONORIGIN: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTable {
    field: PrimeField,
    t: u64,
    keys: Vec<u64>,
    flags: Vec<u8>,
}

/// Square-root lookup for every residue, `u32::MAX` marking nonsquares.
fn sqrt_table(p: u64) -> Vec<u32> {
    let mut tab = vec![u32::MAX; p as usize];
    for s in 0..p {
        let sq = (s * s % p) as usize;
        if tab[sq] == u32::MAX {
            tab[sq] = s as u32;
        }
    }
    tab
}

fn row_keys(f: &PrimeField, t: u64, x: u64, roots: &[u32], half: u64, out: &mut Vec<u64>) {
    let p = f.p();
    let c0 = f.sub(f.sub(f.mul(x, x), t), 2 % p);
    for y in 0..p {
        let b = f.mul(x, y);
        let c = f.add(c0, f.mul(y, y));
        if p == 2 {
            for z in 0..2 {
                if (z * z + b * z + c).is_multiple_of(2) {
                    out.push(x + p * (y + p * z));
                }
            }
            continue;
        }
        let disc = f.sub(f.mul(b, b), f.mul(4, c));
        let s = roots[disc as usize];
        if s == u32::MAX {
            continue;
        }
        let s = s as u64;
        let z1 = f.mul(f.add(b, s), half);
        out.push(x + p * (y + p * z1));
        if s != 0 {
            let z2 = f.mul(f.sub(b, s), half);
            out.push(x + p * (y + p * z2));
        }
    }
}

impl PointTable {
    /// All solutions of x² + y² + z² − xyz − 2 = t over F_p.
    pub fn enumerate(p: u64, t: i64) -> Result<Self, SurfaceError> {
        Self::build(p, t, false)
    }

    /// Same table, with the (x, y) grid split across the rayon pool.
    pub fn enumerate_parallel(p: u64, t: i64) -> Result<Self, SurfaceError> {
        Self::build(p, t, true)
    }

    fn build(p: u64, t: i64, parallel: bool) -> Result<Self, SurfaceError> {
        if p > MAX_SURFACE_PRIME {
            return Err(SurfaceError::TooLarge(p));
        }
        let f = PrimeField::new(p)?;
        let t = f.from_i64(t);
        let roots = if p == 2 { Vec::new() } else { sqrt_table(p) };
        let half = if p == 2 { 0 } else { f.inv(2)? };
        let mut keys: Vec<u64> = if parallel {
            (0..p)
                .into_par_iter()
                .flat_map_iter(|x| {
                    let mut row = Vec::new();
                    row_keys(&f, t, x, &roots, half, &mut row);
                    row
                })
                .collect()
        } else {
            let mut all = Vec::new();
            for x in 0..p {
                row_keys(&f, t, x, &roots, half, &mut all);
            }
            all
        };
        keys.sort_unstable();
        Ok(Self::from_parts(f, t, keys))
    }

    /// Rebuild from a sorted key list (e.g. a cache file); flags are recomputed.
    pub fn from_keys(p: u64, t: u64, keys: Vec<u64>) -> Result<Self, SurfaceError> {
        let f = PrimeField::new(p)?;
        for &k in &keys {
            let pt = SurfacePoint::from_key(k, p);
            if k >= p * p * p || trace_invariant(&f, &pt) != t % p {
                return Err(SurfaceError::NotOnSurface { p, t, x: pt.x, y: pt.y, z: pt.z });
            }
        }
        Ok(Self::from_parts(f, t % p, keys))
    }

    fn from_parts(field: PrimeField, t: u64, keys: Vec<u64>) -> Self {
        let p = field.p();
        let cayley = t == 2 % p;
        let flags = keys
            .iter()
            .map(|&k| {
                let pt = SurfacePoint::from_key(k, p);
                let mut fl = 0;
                if k != 0 {
                    fl |= FLAG_NONORIGIN;
                }
                if !cayley && pt.nonzero_count() >= 2 {
                    fl |= FLAG_STAR;
                }
                fl
            })
            .collect();
        Self { field, t, keys, flags }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// The trace invariant as a residue in `[0, p)`.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> u64 {
        self.keys[i]
    }

    pub fn point(&self, i: usize) -> SurfacePoint {
        SurfacePoint::from_key(self.keys[i], self.p())
    }

    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    pub fn index_of(&self, pt: &SurfacePoint) -> Option<usize> {
        let p = self.p();
        if pt.x >= p || pt.y >= p || pt.z >= p {
            return None;
        }
        self.index_of_key(pt.key(p))
    }

    pub fn contains(&self, pt: &SurfacePoint) -> bool {
        self.index_of(pt).is_some()
    }

    pub fn in_subset(&self, i: usize, subset: Subset) -> bool {
        match subset {
            Subset::All => true,
            Subset::Star => self.flags[i] & FLAG_STAR != 0,
            Subset::NonOrigin => self.flags[i] & FLAG_NONORIGIN != 0,
        }
    }

    pub fn subset_indices(&self, subset: Subset) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.in_subset(i, subset)).collect()
    }

    pub fn subset_len(&self, subset: Subset) -> usize {
        (0..self.len()).filter(|&i| self.in_subset(i, subset)).count()
    }

    pub fn star_len(&self) -> usize {
        self.subset_len(Subset::Star)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    StarPoint,
    DihedralType,
    ReducibleTrace,
}

pub fn classify_point(p: u64, t: i64, pt: &SurfacePoint) -> Result<PointClass, SurfaceError> {
    let f = PrimeField::new(p)?;
    let t = f.from_i64(t);
    let reduced = SurfacePoint::new(pt.x % p, pt.y % p, pt.z % p);
    if trace_invariant(&f, &reduced) != t {
        return Err(SurfaceError::NotOnSurface { p, t, x: pt.x, y: pt.y, z: pt.z });
    }
    Ok(if t == 2 % p {
        PointClass::ReducibleTrace
    } else if reduced.nonzero_count() <= 1 {
        PointClass::DihedralType
    } else {
        PointClass::StarPoint
    })
}

/// Closed form for |X*₋₂(p)|: p(p+3) or p(p−3) by p mod 4.
pub fn star_count_formula(p: u64) -> Result<u64, SurfaceError> {
    if p < 3 {
        return Err(SurfaceError::EvenPrime);
    }
    PrimeField::new(p)?;
    Ok(if p % 4 == 1 { p * (p + 3) } else { p * (p - 3) })
}

/// The closed form, confirmed against a fresh enumeration.
pub fn star_count(p: u64) -> Result<u64, SurfaceError> {
    let formula = star_count_formula(p)?;
    let enumerated = PointTable::enumerate(p, -2)?.star_len() as u64;
    if formula != enumerated {
        return Err(SurfaceError::StarCountMismatch { p, formula, enumerated });
    }
    Ok(formula)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConicKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
    EvenSpecial,
}

/// The slice x = a of X_t: y² + z² − ayz + (a² − 2 − t) = 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicFiber {
    pub p: u64,
    pub t: u64,
    pub a: u64,
    pub kind: ConicKind,
    /// The projective conic is singular: a² = 4 or a² = t + 2.
    pub degenerate: bool,
    pub points: Vec<(u64, u64)>,
}

impl ConicFiber {
    pub fn star_points(&self) -> Vec<(u64, u64)> {
        if self.t == 2 % self.p {
            return Vec::new();
        }
        self.points
            .iter()
            .copied()
            .filter(|&(y, z)| [self.a, y, z].iter().filter(|&&c| c != 0).count() >= 2)
            .collect()
    }
}

pub fn conic_fiber(p: u64, t: i64, a: i64) -> Result<ConicFiber, SurfaceError> {
    let f = PrimeField::new(p)?;
    let t = f.from_i64(t);
    let a = f.from_i64(a);
    let c = f.sub(f.sub(f.mul(a, a), 2 % p), t);
    let mut points = Vec::new();
    for y in 0..p {
        for z in 0..p {
            let v = f.add(f.add(f.mul(y, y), f.mul(z, z)), c);
            if v == f.mul(f.mul(a, y), z) {
                points.push((y, z));
            }
        }
    }
    let kind = if p == 2 {
        ConicKind::EvenSpecial
    } else {
        match f.legendre(f.sub(f.mul(a, a), f.from_i64(4)))? {
            0 => ConicKind::Parabolic,
            1 => ConicKind::Hyperbolic,
            _ => ConicKind::Elliptic,
        }
    };
    let degenerate = f.mul(a, a) == 4 % p || c == 0;
    Ok(ConicFiber { p, t, a, kind, degenerate, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_points(p: u64, t: i64) -> Vec<u64> {
        let f = PrimeField::new(p).unwrap();
        let t = f.from_i64(t);
        let mut keys = Vec::new();
        for z in 0..p {
            for y in 0..p {
                for x in 0..p {
                    let pt = SurfacePoint::new(x, y, z);
                    if trace_invariant(&f, &pt) == t {
                        keys.push(pt.key(p));
                    }
                }
            }
        }
        keys
    }

    #[test]
    fn enumeration_matches_cubic_scan() {
        for p in [2u64, 3, 5, 7, 11] {
            for t in 0..p as i64 {
                let table = PointTable::enumerate(p, t).unwrap();
                assert_eq!(table.keys(), brute_points(p, t).as_slice(), "p={p} t={t}");
            }
        }
    }

    #[test]
    fn star_subset_examples() {
        assert_eq!(PointTable::enumerate(3, -2).unwrap().star_len(), 0);
        assert_eq!(PointTable::enumerate(5, -2).unwrap().star_len(), 40);
        assert_eq!(PointTable::enumerate(7, -2).unwrap().star_len(), 28);
        assert_eq!(star_count(13).unwrap(), 208);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_point(7, -2, &SurfacePoint::new(0, 0, 0)).unwrap(), PointClass::DihedralType);
        assert_eq!(classify_point(7, -2, &SurfacePoint::new(3, 3, 3)).unwrap(), PointClass::StarPoint);
        // (0,0,2): 4 − 2 = 2
        assert_eq!(classify_point(7, 2, &SurfacePoint::new(0, 0, 2)).unwrap(), PointClass::ReducibleTrace);
        assert!(classify_point(7, -2, &SurfacePoint::new(1, 0, 0)).is_err());
    }

    #[test]
    fn conic_examples() {
        let c = conic_fiber(5, -2, 0).unwrap();
        assert_eq!((c.kind, c.degenerate, c.star_points().len()), (ConicKind::Hyperbolic, true, 8));
        let c = conic_fiber(7, -2, 0).unwrap();
        assert_eq!((c.kind, c.degenerate), (ConicKind::Elliptic, true));
        assert!(c.star_points().is_empty());
        let c = conic_fiber(5, -2, 2).unwrap();
        assert_eq!((c.kind, c.points.len()), (ConicKind::Parabolic, 10));
    }

    #[test]
    fn parallel_enumeration_is_identical() {
        for p in [5u64, 13, 31] {
            assert_eq!(PointTable::enumerate(p, -2).unwrap(), PointTable::enumerate_parallel(p, -2).unwrap());
        }
    }

    #[test]
    fn key_roundtrip() {
        let pt = SurfacePoint::new(3, 1, 4);
        assert_eq!(SurfacePoint::from_key(pt.key(7), 7), pt);
    }
}
