//! Integral Markoff triples on 𝕄: x² + y² + z² = 3xyz and 𝕏: x² + y² + z² = xyz,
//! and what their reductions mod n cover.

use crate::action::GeneratorSet;
use crate::arith::{factorize, is_prime, ArithError, PrimeField, QuadElem, QuadExt};
use crate::surface::{PointTable, SurfaceError};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Primes below this are covered by the published transitivity computation.
pub const VERIFIED_PRIME_BOUND: u64 = 3000;
/// Largest modulus for the mod-n orbit search (three coordinates pack into a u64).
pub const MAX_MODULUS: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkoffError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("({0}) is not a positive solution on {1}")]
    NotOnSurface(String, MarkoffSurface),
    #[error("descent stalled at ({0})")]
    Stalled(String),
    #[error("modulus {0} must be squarefree and at least 2")]
    NotSquarefree(u64),
    #[error("modulus {0} exceeds {1}")]
    ModulusTooLarge(u64, u64),
    #[error("Frobenius residues need a prime p ≡ 3 mod 4 other than 3, got {0}")]
    FrobeniusPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MarkoffSurface {
    /// x² + y² + z² = 3xyz, root (1, 1, 1).
    M,
    /// x² + y² + z² = xyz, root (3, 3, 3).
    X,
}

impl MarkoffSurface {
    fn coefficient(self) -> u32 {
        match self {
            MarkoffSurface::M => 3,
            MarkoffSurface::X => 1,
        }
    }

    pub fn root(self) -> MarkoffTriple {
        let r = BigUint::from(match self {
            MarkoffSurface::M => 1u32,
            MarkoffSurface::X => 3,
        });
        MarkoffTriple { x: r.clone(), y: r.clone(), z: r, surface: self }
    }
}

impl fmt::Display for MarkoffSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkoffSurface::M => "M",
            MarkoffSurface::X => "X",
        })
    }
}

/// A positive solution with x ≤ y ≤ z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarkoffTriple {
    #[serde(serialize_with = "ser_big")]
    pub x: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub y: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub z: BigUint,
    pub surface: MarkoffSurface,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PartialOrd for MarkoffTriple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MarkoffTriple {
    /// By z, then y, then x.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.z, &self.y, &self.x, self.surface).cmp(&(&other.z, &other.y, &other.x, other.surface))
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

fn on_surface(surface: MarkoffSurface, x: &BigUint, y: &BigUint, z: &BigUint) -> bool {
    x * x + y * y + z * z == BigUint::from(surface.coefficient()) * x * y * z
}

impl MarkoffTriple {
    /// Sorts the coordinates and checks the equation.
    pub fn new(surface: MarkoffSurface, a: BigUint, b: BigUint, c: BigUint) -> Result<Self, MarkoffError> {
        let mut v = [a, b, c];
        v.sort();
        let [x, y, z] = v;
        if x.is_zero() || !on_surface(surface, &x, &y, &z) {
            return Err(MarkoffError::NotOnSurface(format!("{x},{y},{z}"), surface));
        }
        Ok(Self { x, y, z, surface })
    }

    pub fn from_u64(surface: MarkoffSurface, a: u64, b: u64, c: u64) -> Result<Self, MarkoffError> {
        Self::new(surface, a.into(), b.into(), c.into())
    }

    pub fn coords(&self) -> [&BigUint; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn is_root(&self) -> bool {
        *self == self.surface.root()
    }

    /// Replace coordinate `i` by c·(product of the others) − itself; `None`
    /// when the result would not be positive.
    pub fn vieta(&self, i: usize) -> Option<MarkoffTriple> {
        let mut v = [self.x.clone(), self.y.clone(), self.z.clone()];
        let others = &v[(i + 1) % 3] * &v[(i + 2) % 3] * BigUint::from(self.surface.coefficient());
        if others <= v[i] {
            return None;
        }
        v[i] = others - &v[i];
        v.sort();
        let [x, y, z] = v;
        Some(MarkoffTriple { x, y, z, surface: self.surface })
    }

    /// Coordinates mod n.
    pub fn reduce(&self, n: u64) -> [u64; 3] {
        let m = BigUint::from(n);
        self.coords().map(|c| (c % &m).to_u64().expect("below n"))
    }
}

/// ξ : 𝕄 → 𝕏, (x, y, z) ↦ (3x, 3y, 3z).
pub fn xi(t: &MarkoffTriple) -> MarkoffTriple {
    assert_eq!(t.surface, MarkoffSurface::M, "ξ is defined on 𝕄");
    let three = BigUint::from(3u32);
    MarkoffTriple { x: &t.x * &three, y: &t.y * &three, z: &t.z * &three, surface: MarkoffSurface::X }
}

/// Every tree triple with z ≤ bound, sorted.
///
/// Moves up the tree raise the largest coordinate, so cutting at the bound
/// loses no triple below it.
pub fn grow_tree(surface: MarkoffSurface, bound: &BigUint) -> Vec<MarkoffTriple> {
    let root = surface.root();
    if root.z > *bound {
        return Vec::new();
    }
    let mut seen: HashSet<MarkoffTriple> = HashSet::from([root.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        for i in 0..3 {
            if let Some(next) = t.vieta(i) {
                if next.z <= *bound && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<MarkoffTriple> = seen.into_iter().collect();
    out.sort();
    out
}

/// Distinct coordinates ≤ bound of 𝕄-tree triples.
pub fn markoff_numbers(bound: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = grow_tree(MarkoffSurface::M, &bound.into())
        .iter()
        .flat_map(|t| t.coords().map(|c| c.to_u64().expect("below bound")))
        .collect();
    set.into_iter().collect()
}

/// Triples visited from the start down to the root, both included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descent {
    pub path: Vec<MarkoffTriple>,
}

impl Descent {
    pub fn len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Re-checks the equation at every step and that consecutive triples
    /// differ by one Vieta move.
    pub fn replay(&self) -> bool {
        self.path.iter().all(|t| on_surface(t.surface, &t.x, &t.y, &t.z))
            && self.path.last().is_some_and(MarkoffTriple::is_root)
            && self.path.windows(2).all(|w| (0..3).any(|i| w[1].vieta(i).as_ref() == Some(&w[0])))
    }
}

/// Markoff's descent: replace the largest coordinate until the root.
/// Sorting puts the lexicographically last maximal coordinate in the third
/// slot, which settles ties.
pub fn descend(t: &MarkoffTriple) -> Result<Descent, MarkoffError> {
    let mut path = vec![t.clone()];
    let mut cur = t.clone();
    while !cur.is_root() {
        match cur.vieta(2) {
            Some(next) if next.z < cur.z => {
                path.push(next.clone());
                cur = next;
            }
            _ => return Err(MarkoffError::Stalled(format!("{},{},{}", cur.x, cur.y, cur.z))),
        }
    }
    Ok(Descent { path })
}

/// MP(p): p ≡ 1 mod 4, or (3 + √5)/2 has order at least 32·√(p + 1) in F_p².
pub fn mp_property(p: u64) -> Result<bool, MarkoffError> {
    if p % 4 == 1 {
        return Ok(true);
    }
    if p == 2 {
        return Ok(false);
    }
    let f = PrimeField::new(p)?;
    let half = f.inv(2)?;
    let order = match f.sqrt(5 % p) {
        Some(s) => f.element_order(f.mul(f.add(3, s), half))?,
        None => {
            let ext = QuadExt::with_nonresidue(f, 5 % p)?;
            ext.element_order(QuadElem { a: f.mul(3, half), b: half })?
        }
    };
    Ok(order as u128 * order as u128 >= 1024 * (p as u128 + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFactorReport {
    pub p: u64,
    /// |𝕏(F_p)|, origin included.
    pub points: u64,
    pub mp: bool,
    pub verified_range: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongApproxReport {
    pub n: u64,
    pub generator_set_id: u64,
    pub primes: Vec<PrimeFactorReport>,
    /// Residues reached from (0,0,0) and (3,3,3).
    pub reached: u64,
    /// |{0} ∪ 𝕏*(n)|, where 𝕏*(3) is read as {0}.
    pub target: u64,
    /// |𝕏(ℤ/n)|.
    pub total_points: u64,
    /// Points that are the origin mod some but not all prime factors.
    pub mixed_points: u64,
    /// Every prime factor is below the verified bound.
    pub unconditional: bool,
    pub passed: bool,
}

fn points_mod_prime(p: u64) -> Result<u64, MarkoffError> {
    if p == 2 {
        let count = (0..8u64)
            .filter(|m| {
                let (x, y, z) = (m & 1, m >> 1 & 1, m >> 2 & 1);
                (x * x + y * y + z * z) % 2 == (x * y * z) % 2
            })
            .count();
        return Ok(count as u64);
    }
    Ok(PointTable::enumerate(p, -2)?.len() as u64)
}

/// Reductions of the two integral orbits, found by a Γ-orbit search mod n
/// from (3,3,3); reduction commutes with every move.
pub fn strong_approx(n: u64) -> Result<StrongApproxReport, MarkoffError> {
    if n > MAX_MODULUS {
        return Err(MarkoffError::ModulusTooLarge(n, MAX_MODULUS));
    }
    let factors = factorize(n);
    if n < 2 || factors.iter().any(|&(_, e)| e > 1) {
        return Err(MarkoffError::NotSquarefree(n));
    }
    let mut primes = Vec::new();
    for &(p, _) in &factors {
        primes.push(PrimeFactorReport {
            p,
            points: points_mod_prime(p)?,
            mp: mp_property(p)?,
            verified_range: p < VERIFIED_PRIME_BOUND,
        });
    }
    let nonorigin = |r: &PrimeFactorReport| if r.p == 3 { 1 } else { r.points - 1 };
    let star: u64 = primes.iter().map(nonorigin).product();
    let total_points: u64 = primes.iter().map(|r| r.points).product();
    // n = 3 alone: (3,3,3) reduces to the origin
    let target = if n == 3 { 1 } else { star + 1 };
    let mixed_points = total_points - target;

    let gens = GeneratorSet::gamma();
    let pack = |v: [u64; 3]| v[0] << 42 | v[1] << 21 | v[2];
    let start = [3 % n; 3];
    let mut seen: HashSet<u64> = HashSet::from([0, pack(start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for g in gens.generators() {
            let w = g.apply_mod(n, v);
            if seen.insert(pack(w)) {
                queue.push_back(w);
            }
        }
    }
    let reached = seen.len() as u64;
    Ok(StrongApproxReport {
        n,
        generator_set_id: gens.id(),
        unconditional: primes.iter().all(|r| r.verified_range),
        passed: reached == target,
        primes,
        reached,
        target,
        total_points,
        mixed_points,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub p: u64,
    pub bound: u64,
    pub markoff_numbers: usize,
    /// Count of Markoff numbers ≤ bound in each residue class mod p.
    pub histogram: Vec<u64>,
    /// 0 and ±2/3 mod p, ascending.
    pub forbidden: Vec<u64>,
    pub forbidden_hits: u64,
    pub passed: bool,
}

pub fn frobenius_residues(p: u64, bound: u64) -> Result<FrobeniusReport, MarkoffError> {
    if !is_prime(p) || p % 4 != 3 || p == 3 {
        return Err(MarkoffError::FrobeniusPrime(p));
    }
    let f = PrimeField::new(p)?;
    let two_thirds = f.mul(2, f.inv(3)?);
    let forbidden: Vec<u64> = BTreeSet::from([0, two_thirds, f.neg(two_thirds)]).into_iter().collect();
    let numbers = markoff_numbers(bound);
    let mut histogram = vec![0u64; p as usize];
    for m in &numbers {
        histogram[(m % p) as usize] += 1;
    }
    let forbidden_hits = forbidden.iter().map(|&r| histogram[r as usize]).sum();
    Ok(FrobeniusReport {
        p,
        bound,
        markoff_numbers: numbers.len(),
        histogram,
        forbidden,
        forbidden_hits,
        passed: forbidden_hits == 0,
    })
}

/// Shorthand for a tree bound that fits in a u64.
pub fn bound(b: u64) -> BigUint {
    BigUint::from(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: u64, b: u64, c: u64) -> MarkoffTriple {
        MarkoffTriple::from_u64(MarkoffSurface::M, a, b, c).unwrap()
    }

    #[test]
    fn small_trees() {
        assert_eq!(grow_tree(MarkoffSurface::M, &bound(2)), vec![m(1, 1, 1), m(1, 1, 2)]);
        assert_eq!(
            grow_tree(MarkoffSurface::M, &bound(30)),
            vec![m(1, 1, 1), m(1, 1, 2), m(1, 2, 5), m(1, 5, 13), m(2, 5, 29)]
        );
        let x: Vec<String> = grow_tree(MarkoffSurface::X, &bound(9)).iter().map(|t| t.to_string()).collect();
        assert_eq!(x, vec!["(3,3,3)", "(3,3,6)"]);
    }

    #[test]
    fn descent_replays() {
        assert!(descend(&m(1, 1, 1)).unwrap().is_empty());
        let d = descend(&m(2, 5, 29)).unwrap();
        assert_eq!(d.path.iter().map(|t| t.to_string()).collect::<Vec<_>>(), ["(2,5,29)", "(1,2,5)", "(1,1,2)", "(1,1,1)"]);
        assert!(d.replay());
        assert!(MarkoffTriple::from_u64(MarkoffSurface::M, 1, 2, 4).is_err());
    }

    #[test]
    fn strong_approx_small() {
        let r = strong_approx(5).unwrap();
        assert_eq!((r.reached, r.passed), (41, true));
        let r = strong_approx(3).unwrap();
        assert_eq!((r.reached, r.target, r.passed), (1, 1, true));
        assert!(strong_approx(65).unwrap().passed);
        assert!(strong_approx(12).is_err());
    }

    #[test]
    fn frobenius_small() {
        let r = frobenius_residues(7, 10_000).unwrap();
        assert_eq!(r.forbidden, vec![0, 3, 4]);
        assert!(r.passed);
        assert_eq!(frobenius_residues(11, 10_000).unwrap().forbidden, vec![0, 3, 8]);
        assert!(frobenius_residues(5, 100).is_err());
    }

    #[test]
    fn mp_examples() {
        assert!(mp_property(13).unwrap());
        // 7: order of (3+√5)/2 is at most 8 < 32·√8
        assert!(!mp_property(7).unwrap());
    }
}
