//! Orbit-size congruences on X*_t(p), checked orbit by orbit.

use crate::action::{orbit_decompose, ActionError, GeneratorSet, OrbitDecomposition};
use crate::arith::{factorize, l_valuation, n_of_trace, ArithError, PrimeField};
use crate::groups::{FiniteGroup, GroupError};
use crate::surface::{PointTable, Subset, SurfaceError, SurfacePoint};
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("t = 2 (the Cayley cubic) is excluded")]
    CayleyCubic,
    #[error("trace ±2 has no ℓ-adic rule; use the case split")]
    NoLadicRule,
    #[error("{0} is not an odd prime")]
    BadEll(u64),
    #[error("centralizer of a trace-{t} element in SL2(F_{p}) has order {found}, expected {expected}")]
    CentralizerMismatch { p: u64, t: u64, found: u64, expected: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// t = −2: p divides the orbit size.
    MainDivisibility,
    /// t² − 4 a nonzero square.
    Hyperbolic,
    /// t² − 4 a nonsquare.
    Elliptic,
    /// ℓ^max(r−s,0) divides the orbit size.
    GeneralLadic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Orbit,
    TwiceOrbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub rule: Rule,
    pub modulus: u64,
    pub side: Side,
    /// The prime for [`Rule::GeneralLadic`].
    pub ell: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceVerdict {
    pub p: u64,
    pub t: u64,
    pub representative: SurfacePoint,
    pub orbit_size: u64,
    pub rule: Rule,
    pub ell: Option<u64>,
    pub modulus: u64,
    pub side: Side,
    pub passed: bool,
    /// For twice-orbit rules: whether the modulus already divides |O|.
    pub orbit_alone_divisible: bool,
}

/// The case split on t² − 4 when `ell` is `None`; the ℓ-adic ladder otherwise.
pub fn required_modulus(p: u64, t: i64, ell: Option<u64>) -> Result<Requirement, CongruenceError> {
    let f = PrimeField::new(p)?;
    if p == 2 {
        return Err(ArithError::EvenPrime.into());
    }
    let t = f.from_i64(t);
    if t == 2 {
        return Err(CongruenceError::CayleyCubic);
    }
    let n = n_of_trace(t as i64, p)?;
    if let Some(ell) = ell {
        if ell == 2 || !crate::arith::is_prime(ell) {
            return Err(CongruenceError::BadEll(ell));
        }
        if t == p - 2 {
            return Err(CongruenceError::NoLadicRule);
        }
        let r = l_valuation(ell, n);
        let s = l_valuation(ell, p * (p * p - 1)) as i64 - r as i64;
        let e = (r as i64 - s).max(0) as u32;
        return Ok(Requirement { rule: Rule::GeneralLadic, modulus: ell.pow(e), side: Side::Orbit, ell: Some(ell) });
    }
    if t == p - 2 {
        return Ok(Requirement { rule: Rule::MainDivisibility, modulus: p, side: Side::Orbit, ell: None });
    }
    let disc = f.sub(f.mul(t, t), f.from_i64(4));
    let (rule, bound) = if f.legendre(disc)? == 1 { (Rule::Hyperbolic, p - 1) } else { (Rule::Elliptic, p + 1) };
    let modulus = twice_orbit_modulus(n, bound);
    Ok(Requirement { rule, modulus, side: Side::TwiceOrbit, ell: None })
}

/// n / gcd(n, 2·bound/n), with bound = q − 1 or q + 1.
pub fn twice_orbit_modulus(n: u64, bound: u64) -> u64 {
    n / n.gcd(&(2 * bound / n))
}

/// All requirements that apply at (p, t): the case rule plus one ℓ-adic rule
/// per odd prime divisor of n_p(t) when t ≠ ±2.
pub fn requirements(p: u64, t: i64) -> Result<Vec<Requirement>, CongruenceError> {
    let mut out = vec![required_modulus(p, t, None)?];
    let f = PrimeField::new(p)?;
    let tr = f.from_i64(t);
    if tr != p - 2 {
        for (ell, _) in factorize(n_of_trace(t, p)?) {
            if ell != 2 {
                out.push(required_modulus(p, t, Some(ell))?);
            }
        }
    }
    Ok(out)
}

fn judge(p: u64, t: u64, rep: SurfacePoint, size: u64, req: &Requirement) -> CongruenceVerdict {
    let quantity = match req.side {
        Side::Orbit => size,
        Side::TwiceOrbit => 2 * size,
    };
    CongruenceVerdict {
        p,
        t,
        representative: rep,
        orbit_size: size,
        rule: req.rule,
        ell: req.ell,
        modulus: req.modulus,
        side: req.side,
        passed: quantity % req.modulus == 0,
        orbit_alone_divisible: size.is_multiple_of(req.modulus),
    }
}

/// Verdicts for every Γ-orbit on X*_t(p).
pub fn verify_surface(p: u64, t: i64) -> Result<Vec<CongruenceVerdict>, CongruenceError> {
    verify_surface_with(p, t, &GeneratorSet::gamma())
}

/// Verdicts for the orbits of an arbitrary generator set (e.g. Aut⁺, whose
/// orbits refine the Γ-orbits).
pub fn verify_surface_with(p: u64, t: i64, gens: &GeneratorSet) -> Result<Vec<CongruenceVerdict>, CongruenceError> {
    let table = PointTable::enumerate(p, t)?;
    verify_table(&table, gens)
}

pub fn verify_table(table: &PointTable, gens: &GeneratorSet) -> Result<Vec<CongruenceVerdict>, CongruenceError> {
    if table.t() == 2 % table.p() {
        return Err(CongruenceError::CayleyCubic);
    }
    let orbits = orbit_decompose(table, gens, Subset::Star)?;
    verify_orbits(&orbits)
}

/// Verdicts for an orbit decomposition already in hand (e.g. from a cache).
pub fn verify_orbits(orbits: &OrbitDecomposition) -> Result<Vec<CongruenceVerdict>, CongruenceError> {
    let (p, t) = (orbits.p, orbits.t);
    if t == 2 % p {
        return Err(CongruenceError::CayleyCubic);
    }
    let reqs = requirements(p, t as i64)?;
    let mut out = Vec::new();
    for (i, o) in orbits.orbits.iter().enumerate() {
        let rep = orbits.representative_point(i);
        for req in &reqs {
            out.push(judge(p, t, rep, o.size, req));
        }
    }
    Ok(out)
}

/// Expected |C_{SL2(F_p)}(A)| for noncentral A of trace t: 2p, p−1 or p+1.
pub fn expected_centralizer_order(p: u64, t: i64) -> Result<u64, CongruenceError> {
    let f = PrimeField::new(p)?;
    let t = f.from_i64(t);
    if t == 2 {
        return Err(CongruenceError::CayleyCubic);
    }
    if t == p - 2 {
        return Ok(2 * p);
    }
    Ok(if f.legendre(f.sub(f.mul(t, t), f.from_i64(4)))? == 1 { p - 1 } else { p + 1 })
}

/// Brute-force centralizer of the companion matrix [[0,−1],[1,t]] in SL2(F_p).
pub fn centralizer_order_check(p: u64, t: i64) -> Result<u64, CongruenceError> {
    let g = FiniteGroup::sl2(p)?;
    centralizer_order_check_in(&g, p, t)
}

pub fn centralizer_order_check_in(g: &FiniteGroup, p: u64, t: i64) -> Result<u64, CongruenceError> {
    let expected = expected_centralizer_order(p, t)?;
    let tr = PrimeField::new(p)?.from_i64(t);
    let a = g
        .index_of(&crate::groups::Label::mat(p, 0, -1, 1, tr as i64))
        .expect("companion matrix lies in SL2");
    let found = g.centralizer(a).len() as u64;
    if found != expected {
        return Err(CongruenceError::CentralizerMismatch { p, t: tr, found, expected });
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        let r = required_modulus(5, -2, None).unwrap();
        assert_eq!((r.modulus, r.side), (5, Side::Orbit));
        // n_7(1) = 6: ord_3(6) = 1, ord_3(336) = 1, so s = 0 and 3 | |O|
        let r = required_modulus(7, 1, Some(3)).unwrap();
        assert_eq!((r.modulus, r.rule), (3, Rule::GeneralLadic));
        // an element of order 2 gives a vacuous rule
        assert_eq!(twice_orbit_modulus(2, 4), 1);
        assert_eq!(twice_orbit_modulus(2, 6), 1);
        // n_5(0) = 4: 4 / gcd(4, 2·4/4) = 2
        assert_eq!(required_modulus(5, 0, None).unwrap().modulus, 2);
        assert!(matches!(required_modulus(5, 2, None), Err(CongruenceError::CayleyCubic)));
    }

    #[test]
    fn verify_examples() {
        let v = verify_surface(5, -2).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].orbit_size, v[0].passed), (40, true));
        let v = verify_surface(7, -2).unwrap();
        assert_eq!((v[0].orbit_size, v[0].passed), (28, true));
        assert!(verify_surface(3, -2).unwrap().is_empty());
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_order_check(5, -2).unwrap(), 10);
        assert_eq!(centralizer_order_check(7, 3).unwrap(), 8);
        assert_eq!(centralizer_order_check(5, 0).unwrap(), 4);
    }
}
