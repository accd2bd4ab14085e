//! Polynomial automorphisms of the surfaces and their orbits on point tables.

use crate::arith::{n_of_trace, ArithError};
use crate::surface::{conic_fiber, PointTable, Subset, SurfaceError, SurfacePoint};
use serde::Serialize;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{generator} sends {from} outside the chosen subset (image {to})")]
    Escapes { generator: String, from: SurfacePoint, to: SurfacePoint },
    #[error("Rot1 orbit of size {size} on the conic x = {a} of X_{t} mod {p}, expected {expected}")]
    FreenessViolation { p: u64, t: u64, a: u64, size: u64, expected: u64 },
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    R1,
    R2,
    R3,
    Swap12,
    Swap23,
    Swap13,
    Rot1,
    Rot2,
    Rot3,
    Gamma0,
    Gamma1728,
    GammaInf,
    GammaMinusI,
}

impl Generator {
    pub const ALL: [Generator; 13] = [
        Generator::R1,
        Generator::R2,
        Generator::R3,
        Generator::Swap12,
        Generator::Swap23,
        Generator::Swap13,
        Generator::Rot1,
        Generator::Rot2,
        Generator::Rot3,
        Generator::Gamma0,
        Generator::Gamma1728,
        Generator::GammaInf,
        Generator::GammaMinusI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::R1 => "R1",
            Generator::R2 => "R2",
            Generator::R3 => "R3",
            Generator::Swap12 => "Swap12",
            Generator::Swap23 => "Swap23",
            Generator::Swap13 => "Swap13",
            Generator::Rot1 => "Rot1",
            Generator::Rot2 => "Rot2",
            Generator::Rot3 => "Rot3",
            Generator::Gamma0 => "Gamma0",
            Generator::Gamma1728 => "Gamma1728",
            Generator::GammaInf => "GammaInf",
            Generator::GammaMinusI => "GammaMinusI",
        }
    }

    fn bit(self) -> u64 {
        1 << Self::ALL.iter().position(|&g| g == self).expect("listed")
    }

    /// Image of `(x, y, z)` with coordinates taken mod `n` (any modulus ≥ 1).
    pub fn apply_mod(self, n: u64, [x, y, z]: [u64; 3]) -> [u64; 3] {
        let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
        let sub = |a: u64, b: u64| (a + n - b % n) % n;
        match self {
            Generator::R1 => [sub(mul(y, z), x), y, z],
            Generator::R2 => [x, sub(mul(x, z), y), z],
            Generator::R3 => [x, y, sub(mul(x, y), z)],
            Generator::Swap12 => [y, x, z],
            Generator::Swap23 => [x, z, y],
            Generator::Swap13 => [z, y, x],
            Generator::Rot1 | Generator::GammaInf => [x, z, sub(mul(x, z), y)],
            Generator::Rot2 => [sub(mul(x, y), z), y, x],
            Generator::Rot3 => [y, sub(mul(y, z), x), z],
            Generator::Gamma0 => {
                let xy = mul(x, y);
                let third = sub(sub(mul(x, xy), mul(x, z)), y);
                [sub(xy, z), x, third]
            }
            Generator::Gamma1728 => [y, x, sub(mul(x, y), z)],
            Generator::GammaMinusI => [x, y, z],
        }
    }

    pub fn apply(self, p: u64, pt: &SurfacePoint) -> SurfacePoint {
        let [x, y, z] = self.apply_mod(p, pt.coords());
        SurfacePoint::new(x, y, z)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = ActionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ActionError::UnknownGenerator(s.to_string()))
    }
}

/// A word in the generators, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MoveWord(pub Vec<Generator>);

impl MoveWord {
    pub fn single(g: Generator) -> Self {
        Self(vec![g])
    }

    pub fn apply_mod(&self, n: u64, pt: [u64; 3]) -> [u64; 3] {
        self.0.iter().rev().fold(pt, |acc, g| g.apply_mod(n, acc))
    }

    pub fn apply(&self, p: u64, pt: &SurfacePoint) -> SurfacePoint {
        let [x, y, z] = self.apply_mod(p, pt.coords());
        SurfacePoint::new(x, y, z)
    }

    /// Word whose action is `self` followed by `other`.
    pub fn then(&self, other: &MoveWord) -> MoveWord {
        let mut v = other.0.clone();
        v.extend_from_slice(&self.0);
        MoveWord(v)
    }
}

impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        let names: Vec<_> = self.0.iter().map(|g| g.name()).collect();
        f.write_str(&names.join("*"))
    }
}

impl FromStr for MoveWord {
    type Err = ActionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(MoveWord::default());
        }
        s.split('*').map(str::parse).collect::<Result<_, _>>().map(MoveWord)
    }
}

/// A set of single-generator moves; its id is a bitmask over [`Generator::ALL`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(mut gens: Vec<Generator>) -> Self {
        gens.sort();
        gens.dedup();
        Self { gens }
    }

    /// Γ: one Vieta involution and two transpositions.
    pub fn gamma() -> Self {
        Self::new(vec![Generator::R3, Generator::Swap12, Generator::Swap23])
    }

    /// Aut⁺(F₂) acting through γ₁₇₂₈ and γ∞.
    pub fn aut_plus() -> Self {
        Self::new(vec![Generator::Gamma1728, Generator::GammaInf])
    }

    pub fn single(g: Generator) -> Self {
        Self::new(vec![g])
    }

    pub fn from_id(id: u64) -> Self {
        Self::new(Generator::ALL.iter().copied().filter(|g| id & g.bit() != 0).collect())
    }

    pub fn id(&self) -> u64 {
        self.gens.iter().fold(0, |acc, g| acc | g.bit())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn name(&self) -> String {
        let names: Vec<_> = self.gens.iter().map(|g| g.name()).collect();
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    /// Minimal packed key in the orbit.
    pub representative: u64,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub p: u64,
    pub t: u64,
    pub generator_set_id: u64,
    pub subset: Subset,
    /// Orbit id per table index; `u32::MAX` outside the subset.
    pub orbit_of: Vec<u32>,
    pub orbits: Vec<OrbitInfo>,
}

impl OrbitDecomposition {
    pub const OUTSIDE: u32 = u32::MAX;

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits.len() == 1
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn sorted_sizes(&self) -> Vec<u64> {
        let mut s = self.sizes();
        s.sort_unstable();
        s
    }

    pub fn representative_point(&self, orbit: usize) -> SurfacePoint {
        SurfacePoint::from_key(self.orbits[orbit].representative, self.p)
    }
}

/// BFS partition of `subset` into orbits of the group generated by `gens`.
///
/// Indices are scanned in increasing key order, so each orbit is discovered
/// from its minimal key and orbit ids come out sorted by representative.
pub fn orbit_decompose(
    table: &PointTable,
    gens: &GeneratorSet,
    subset: Subset,
) -> Result<OrbitDecomposition, ActionError> {
    let p = table.p();
    let n = table.len();
    let mut orbit_of = vec![OrbitDecomposition::OUTSIDE; n];
    let mut visited = vec![0u64; n.div_ceil(64)];
    let mut orbits = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !table.in_subset(start, subset) || visited[start / 64] >> (start % 64) & 1 == 1 {
            continue;
        }
        let id = orbits.len() as u32;
        visited[start / 64] |= 1 << (start % 64);
        queue.push_back(start);
        let mut size = 0u64;
        while let Some(i) = queue.pop_front() {
            orbit_of[i] = id;
            size += 1;
            let pt = table.point(i);
            for &g in gens.generators() {
                let img = g.apply(p, &pt);
                let j = match table.index_of(&img) {
                    Some(j) if table.in_subset(j, subset) => j,
                    _ => {
                        return Err(ActionError::Escapes { generator: g.name().into(), from: pt, to: img });
                    }
                };
                if visited[j / 64] >> (j % 64) & 1 == 0 {
                    visited[j / 64] |= 1 << (j % 64);
                    queue.push_back(j);
                }
            }
        }
        orbits.push(OrbitInfo { representative: table.key(start), size });
    }
    Ok(OrbitDecomposition {
        p,
        t: table.t(),
        generator_set_id: gens.id(),
        subset,
        orbit_of,
        orbits,
    })
}

/// Rot1 cycle lengths on the star points of the conic x = a, each checked
/// against n_p(a).
pub fn rot_orbits_on_fiber(p: u64, t: i64, a: i64) -> Result<Vec<u64>, ActionError> {
    let fiber = conic_fiber(p, t, a)?;
    let a = fiber.a;
    let star = fiber.star_points();
    let expected = n_of_trace(a as i64, p)?;
    let mut seen = std::collections::HashSet::new();
    let mut sizes = Vec::new();
    for &start in &star {
        if !seen.insert(start) {
            continue;
        }
        let mut cur = start;
        let mut size = 1u64;
        loop {
            let (y, z) = cur;
            let [_, y2, z2] = Generator::Rot1.apply_mod(p, [a, y, z]);
            cur = (y2, z2);
            if cur == start {
                break;
            }
            seen.insert(cur);
            size += 1;
        }
        if size != expected {
            return Err(ActionError::FreenessViolation { p, t: fiber.t, a, size, expected });
        }
        sizes.push(size);
    }
    Ok(sizes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// A move as a permutation of the subset, indexed by position within the subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPermutation {
    pub perm: Vec<u32>,
    pub parity: Parity,
}

impl SubsetPermutation {
    pub fn cycle_lengths(&self) -> Vec<u64> {
        cycle_lengths(&self.perm)
    }
}

pub fn cycle_lengths(perm: &[u32]) -> Vec<u64> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

pub fn parity_of(perm: &[u32]) -> Parity {
    let cycles = cycle_lengths(perm).len();
    if (perm.len() - cycles).is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

pub fn permutation_of(
    word: &MoveWord,
    table: &PointTable,
    subset: Subset,
) -> Result<SubsetPermutation, ActionError> {
    let p = table.p();
    let members = table.subset_indices(subset);
    let mut position = vec![u32::MAX; table.len()];
    for (pos, &i) in members.iter().enumerate() {
        position[i] = pos as u32;
    }
    let mut perm = Vec::with_capacity(members.len());
    for &i in &members {
        let pt = table.point(i);
        let img = word.apply(p, &pt);
        match table.index_of(&img).map(|j| position[j]) {
            Some(pos) if pos != u32::MAX => perm.push(pos),
            _ => return Err(ActionError::Escapes { generator: word.to_string(), from: pt, to: img }),
        }
    }
    let parity = parity_of(&perm);
    Ok(SubsetPermutation { perm, parity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;
    use crate::surface::trace_invariant;

    #[test]
    fn move_examples() {
        assert_eq!(Generator::R3.apply(7, &SurfacePoint::new(3, 3, 3)), SurfacePoint::new(3, 3, 6));
        assert_eq!(Generator::Rot1.apply(7, &SurfacePoint::new(4, 0, 0)), SurfacePoint::new(4, 0, 0));
        let pt = SurfacePoint::new(1, 2, 3);
        assert_eq!(Generator::GammaMinusI.apply(11, &pt), pt);
    }

    #[test]
    fn every_generator_preserves_trace() {
        let f = PrimeField::new(13).unwrap();
        for x in 0..13 {
            for y in 0..13 {
                for z in [0, 5, 12] {
                    let pt = SurfacePoint::new(x, y, z);
                    let t = trace_invariant(&f, &pt);
                    for g in Generator::ALL {
                        assert_eq!(trace_invariant(&f, &g.apply(13, &pt)), t, "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn word_parsing_and_order() {
        let w: MoveWord = "Swap12*R3".parse().unwrap();
        // R3 first, then Swap12
        assert_eq!(w.apply(7, &SurfacePoint::new(1, 2, 3)), SurfacePoint::new(2, 1, 6));
        assert_eq!(w.to_string(), "Swap12*R3");
        assert!("Foo".parse::<MoveWord>().is_err());
        assert_eq!(GeneratorSet::from_id(GeneratorSet::gamma().id()), GeneratorSet::gamma());
    }

    #[test]
    fn orbit_examples() {
        let t5 = PointTable::enumerate(5, -2).unwrap();
        let d = orbit_decompose(&t5, &GeneratorSet::gamma(), Subset::Star).unwrap();
        assert_eq!(d.sizes(), vec![40]);
        let d = orbit_decompose(&t5, &GeneratorSet::gamma(), Subset::All).unwrap();
        assert_eq!(d.sizes(), vec![1, 40]);
        assert_eq!(d.orbits[0].representative, 0);
        let t7 = PointTable::enumerate(7, -2).unwrap();
        let d = orbit_decompose(&t7, &GeneratorSet::gamma(), Subset::Star).unwrap();
        assert_eq!(d.sizes(), vec![28]);
    }

    #[test]
    fn subsets_are_closed_under_every_generator() {
        for t in 0..7 {
            let table = PointTable::enumerate(7, t).unwrap();
            for g in Generator::ALL {
                for subset in [Subset::All, Subset::Star, Subset::NonOrigin] {
                    assert!(orbit_decompose(&table, &GeneratorSet::single(g), subset).is_ok(), "{g} t={t}");
                }
            }
        }
    }

    #[test]
    fn fiber_orbits() {
        assert_eq!(rot_orbits_on_fiber(5, -2, 0).unwrap(), vec![4, 4]);
        assert_eq!(rot_orbits_on_fiber(5, -2, -2).unwrap(), vec![10]);
        let n = n_of_trace(3, 7).unwrap();
        assert!(rot_orbits_on_fiber(7, -2, 3).unwrap().iter().all(|&s| s == n));
    }

    #[test]
    fn permutation_examples() {
        let table = PointTable::enumerate(5, -2).unwrap();
        let id = permutation_of(&MoveWord::single(Generator::GammaMinusI), &table, Subset::Star).unwrap();
        assert_eq!(id.parity, Parity::Even);
        assert!(id.perm.iter().enumerate().all(|(i, &j)| i as u32 == j));
        let s = permutation_of(&MoveWord::single(Generator::Swap12), &table, Subset::Star).unwrap();
        let twice: Vec<u32> = s.perm.iter().map(|&j| s.perm[j as usize]).collect();
        assert!(twice.iter().enumerate().all(|(i, &j)| i as u32 == j));
        let moved = s.perm.iter().enumerate().filter(|(i, &j)| *i as u32 != j).count();
        let expected = if (moved / 2) % 2 == 0 { Parity::Even } else { Parity::Odd };
        assert_eq!(s.parity, expected);
        let rot = permutation_of(&MoveWord::single(Generator::Rot1), &table, Subset::Star).unwrap();
        let mut lens = rot.cycle_lengths();
        lens.sort_unstable();
        let mut fibers: Vec<u64> = (0..5).flat_map(|a| rot_orbits_on_fiber(5, -2, a).unwrap()).collect();
        fibers.sort_unstable();
        assert_eq!(lens, fibers);
    }
}
