//! Degree, ramification, cusps and genus of the curve M_p, read off from the
//! action of γ₀, γ₁₇₂₈ and γ∞ on X*₋₂(p).

use crate::action::{orbit_decompose, parity_of, permutation_of, ActionError, Generator, GeneratorSet, MoveWord, Parity};
use crate::arith::{is_integer, phi_capital, rat, rat_frac, ArithError};
use crate::surface::{star_count_formula, PointTable, Subset, SurfaceError, SurfacePoint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("needs a prime p >= 5, got {0}")]
    SmallPrime(u64),
    #[error("p = {0} is above the desk-scale bound {1}")]
    OutOfRange(u64, u64),
    #[error("closed form for {what} at p = {p} is not an integer: {value}")]
    NonIntegral { what: &'static str, p: u64, value: String },
    #[error("Riemann-Hurwitz parity failure at p = {0}")]
    OddRamification(u64),
    #[error("genus mismatch at p = {p}: Riemann-Hurwitz {rh}, closed form {closed}")]
    GenusMismatch { p: u64, rh: i64, closed: String },
    #[error("double sign changes fix the star point {0} mod {1}")]
    SignGroupNotFree(SurfacePoint, u64),
}

pub(crate) fn ser_rat<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn check_p(p: u64) -> Result<(), ModularError> {
    if p < 5 {
        return Err(ModularError::SmallPrime(p));
    }
    crate::arith::PrimeField::new(p)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub p: u64,
    pub degree: u64,
    /// γ₀-orbit sizes, ascending.
    pub fiber0: Vec<u64>,
    /// γ₁₇₂₈-orbit sizes, ascending.
    pub fiber1728: Vec<u64>,
    /// Rot1-orbit sizes (cusp widths), ascending.
    pub cusps: Vec<u64>,
}

impl RamificationProfile {
    /// g = (deg − |f⁻¹(0)| − |f⁻¹(1728)| − |f⁻¹(∞)|)/2 + 1.
    pub fn genus_rh(&self) -> Result<i64, ModularError> {
        riemann_hurwitz(self.p, self.degree, self.fiber0.len() as u64, self.fiber1728.len() as u64, self.cusps.len() as u64)
    }
}

fn riemann_hurwitz(p: u64, deg: u64, f0: u64, f1728: u64, finf: u64) -> Result<i64, ModularError> {
    let excess = deg as i64 - f0 as i64 - f1728 as i64 - finf as i64;
    if excess % 2 != 0 {
        return Err(ModularError::OddRamification(p));
    }
    Ok(excess / 2 + 1)
}

fn single_orbits(table: &PointTable, g: Generator) -> Result<crate::action::OrbitDecomposition, ModularError> {
    Ok(orbit_decompose(table, &GeneratorSet::single(g), Subset::Star)?)
}

pub fn ramification_from_table(table: &PointTable) -> Result<RamificationProfile, ModularError> {
    let degree = table.star_len() as u64;
    let fiber0 = single_orbits(table, Generator::Gamma0)?.sorted_sizes();
    let fiber1728 = single_orbits(table, Generator::Gamma1728)?.sorted_sizes();
    let cusps = single_orbits(table, Generator::Rot1)?.sorted_sizes();
    Ok(RamificationProfile { p: table.p(), degree, fiber0, fiber1728, cusps })
}

pub fn ramification_profile(p: u64) -> Result<RamificationProfile, ModularError> {
    check_p(p)?;
    ramification_from_table(&PointTable::enumerate(p, -2)?)
}

/// ε(p) by p mod 8.
pub fn epsilon(p: u64) -> BigRational {
    let p = p as i64;
    match p % 8 {
        1 => rat_frac(7 * p, 8) - rat_frac(29, 24),
        3 => rat_frac(5 * p, 8) + rat_frac(19, 24),
        5 => rat_frac(7 * p, 8) - rat_frac(17, 24),
        _ => rat_frac(5 * p, 8) + rat_frac(7, 24),
    }
}

/// p²/12 − (p−1)/4·Φ(p−1) − (p+1)/4·Φ(p+1) + ε(p).
pub fn genus_closed(p: u64) -> Result<BigRational, ModularError> {
    check_p(p)?;
    let pi = p as i64;
    Ok(rat_frac(pi * pi, 12) - rat_frac(pi - 1, 4) * phi_capital(p - 1)?
        - rat_frac(pi + 1, 4) * phi_capital(p + 1)?
        + epsilon(p))
}

pub fn cusp_count_rational(p: u64) -> Result<BigRational, ModularError> {
    check_p(p)?;
    let pi = p as i64;
    let constant = if p % 4 == 1 { rat_frac(-5 * pi + 11, 4) } else { rat_frac(-7 * pi - 1, 4) };
    Ok(rat_frac(pi - 1, 2) * phi_capital(p - 1)? + rat_frac(pi + 1, 2) * phi_capital(p + 1)? + constant)
}

/// The cusp-count closed form, required to be a nonnegative integer.
pub fn cusp_count_closed(p: u64) -> Result<u64, ModularError> {
    let r = cusp_count_rational(p)?;
    integral(&r, "cusp count", p)
}

fn integral(r: &BigRational, what: &'static str, p: u64) -> Result<u64, ModularError> {
    if !is_integer(r) {
        return Err(ModularError::NonIntegral { what, p, value: r.to_string() });
    }
    r.to_integer()
        .to_u64()
        .ok_or(ModularError::NonIntegral { what, p, value: r.to_string() })
}

/// |f⁻¹(0)| = (deg + 2)/3: one unramified point, the rest of index 3.
pub fn fiber0_closed(p: u64) -> Result<u64, ModularError> {
    check_p(p)?;
    integral(&rat_frac(star_count_formula(p)? as i64 + 2, 3), "fiber over 0", p)
}

/// The displayed (deg − 3)/3 variant. Kept only so tests can show it is not
/// integral and disagrees with the orbit count.
pub fn fiber0_displayed(p: u64) -> Result<BigRational, ModularError> {
    check_p(p)?;
    Ok(rat_frac(star_count_formula(p)? as i64 - 3, 3))
}

/// |f⁻¹(1728)| by p mod 8.
pub fn fiber1728_closed(p: u64) -> Result<u64, ModularError> {
    check_p(p)?;
    let pi = p as i64;
    let num = match p % 8 {
        1 => pi * pi + 3 * pi + 2,
        3 => pi * pi - 3 * pi,
        5 => pi * pi + 3 * pi,
        _ => pi * pi - 3 * pi + 2,
    };
    integral(&rat_frac(num, 2), "fiber over 1728", p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentGenus {
    /// Minimal packed key of the component's Aut⁺-orbit.
    pub representative: u64,
    pub degree: u64,
    pub fiber0: u64,
    pub fiber1728: u64,
    pub cusps: u64,
    pub genus_rh: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    pub p: u64,
    pub degree: u64,
    pub transitive: bool,
    pub fibers: FiberCounts,
    pub cusps: Vec<u64>,
    /// Present only when the action is transitive.
    pub genus_rh: Option<i64>,
    #[serde(serialize_with = "ser_rat")]
    pub genus_closed: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub cusp_count_formula: BigRational,
    pub components: Vec<ComponentGenus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberCounts {
    pub j0: u64,
    pub j1728: u64,
    pub infinity: u64,
}

/// Genus of M_p by Riemann-Hurwitz on orbit data, compared with the closed form.
///
/// Components are the Aut⁺-orbits on X*₋₂(p). With a single component the two
/// genus values must agree exactly; otherwise only per-component values are
/// reported.
pub fn genus(p: u64) -> Result<GenusReport, ModularError> {
    check_p(p)?;
    let table = PointTable::enumerate(p, -2)?;
    genus_from_table(&table)
}

pub fn genus_from_table(table: &PointTable) -> Result<GenusReport, ModularError> {
    let p = table.p();
    check_p(p)?;
    let comps = orbit_decompose(table, &GeneratorSet::aut_plus(), Subset::Star)?;
    let gamma = orbit_decompose(table, &GeneratorSet::gamma(), Subset::Star)?;
    let transitive = comps.is_transitive() && gamma.is_transitive();

    let mut per: Vec<ComponentGenus> = comps
        .orbits
        .iter()
        .map(|o| ComponentGenus {
            representative: o.representative,
            degree: o.size,
            fiber0: 0,
            fiber1728: 0,
            cusps: 0,
            genus_rh: 0,
        })
        .collect();
    let mut counts = [0u64; 3];
    let mut widths = Vec::new();
    for (slot, g) in [Generator::Gamma0, Generator::Gamma1728, Generator::Rot1].into_iter().enumerate() {
        let d = single_orbits(table, g)?;
        counts[slot] = d.len() as u64;
        for o in &d.orbits {
            let idx = table.index_of_key(o.representative).expect("representative in table");
            let c = &mut per[comps.orbit_of[idx] as usize];
            match slot {
                0 => c.fiber0 += 1,
                1 => c.fiber1728 += 1,
                _ => c.cusps += 1,
            }
        }
        if slot == 2 {
            widths = d.sorted_sizes();
        }
    }
    for c in &mut per {
        c.genus_rh = riemann_hurwitz(p, c.degree, c.fiber0, c.fiber1728, c.cusps)?;
    }
    let closed = genus_closed(p)?;
    let genus_rh = if transitive && per.len() == 1 {
        let rh = per[0].genus_rh;
        if !is_integer(&closed) || closed != rat(rh) {
            return Err(ModularError::GenusMismatch { p, rh, closed: closed.to_string() });
        }
        Some(rh)
    } else {
        None
    };
    Ok(GenusReport {
        p,
        degree: table.star_len() as u64,
        transitive,
        fibers: FiberCounts { j0: counts[0], j1728: counts[1], infinity: counts[2] },
        cusps: widths,
        genus_rh,
        genus_closed: closed,
        epsilon: epsilon(p),
        cusp_count_formula: cusp_count_rational(p)?,
        components: per,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyReport {
    pub p: u64,
    pub d_p: u64,
    pub transitive_on_quotient: bool,
    pub parity_gamma0: Parity,
    pub parity_gamma1728: Parity,
    pub parity_gamma_inf: Parity,
    /// p ≡ 1, 3, 13, 15 mod 16.
    pub alt_predicted: bool,
    /// Alternating prediction implies all parities even, and a symmetric
    /// prediction needs at least one odd generator.
    pub parity_consistent: bool,
}

/// Largest p accepted by [`monodromy_report`].
pub const MONODROMY_MAX_P: u64 = 3000;

/// Canonical member of the V-orbit {(x,y,z), (−x,−y,z), (−x,y,−z), (x,−y,−z)}.
fn sign_class(p: u64, pt: &SurfacePoint) -> Result<u64, ModularError> {
    let n = |a: u64| (p - a) % p;
    let variants = [
        *pt,
        SurfacePoint::new(n(pt.x), n(pt.y), pt.z),
        SurfacePoint::new(n(pt.x), pt.y, n(pt.z)),
        SurfacePoint::new(pt.x, n(pt.y), n(pt.z)),
    ];
    let mut keys: Vec<u64> = variants.iter().map(|v| v.key(p)).collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != 4 {
        return Err(ModularError::SignGroupNotFree(*pt, p));
    }
    Ok(keys[0])
}

/// Parity and transitivity of γ₀, γ₁₇₂₈, γ∞ on Y*(p) = X*₋₂(p)/V.
pub fn monodromy_report(p: u64) -> Result<MonodromyReport, ModularError> {
    check_p(p)?;
    if p > MONODROMY_MAX_P {
        return Err(ModularError::OutOfRange(p, MONODROMY_MAX_P));
    }
    let table = PointTable::enumerate(p, -2)?;
    let star = table.subset_indices(Subset::Star);
    let mut class_of_key: HashMap<u64, u64> = HashMap::with_capacity(star.len());
    let mut reps: BTreeMap<u64, ()> = BTreeMap::new();
    for &i in &star {
        let c = sign_class(p, &table.point(i))?;
        class_of_key.insert(table.key(i), c);
        reps.insert(c, ());
    }
    let reps: Vec<u64> = reps.into_keys().collect();
    let pos: HashMap<u64, u32> = reps.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
    let mut perms = Vec::new();
    for g in [Generator::Gamma0, Generator::Gamma1728, Generator::GammaInf] {
        let perm: Vec<u32> = reps
            .iter()
            .map(|&k| {
                let img = g.apply(p, &SurfacePoint::from_key(k, p));
                pos[&class_of_key[&img.key(p)]]
            })
            .collect();
        perms.push(perm);
    }
    let d = reps.len();
    let mut seen = vec![false; d];
    let mut queue = VecDeque::from([0usize]);
    if d > 0 {
        seen[0] = true;
    }
    let mut reached = usize::from(d > 0);
    while let Some(i) = queue.pop_front() {
        for perm in &perms {
            let j = perm[i] as usize;
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    let parities: Vec<Parity> = perms.iter().map(|q| parity_of(q)).collect();
    let alt_predicted = matches!(p % 16, 1 | 3 | 13 | 15);
    let all_even = parities.iter().all(|&x| x == Parity::Even);
    Ok(MonodromyReport {
        p,
        d_p: d as u64,
        transitive_on_quotient: reached == d,
        parity_gamma0: parities[0],
        parity_gamma1728: parities[1],
        parity_gamma_inf: parities[2],
        alt_predicted,
        parity_consistent: alt_predicted == all_even,
    })
}

/// Parity of a move on the full star set, before the V quotient.
pub fn star_parity(p: u64, g: Generator) -> Result<Parity, ModularError> {
    let table = PointTable::enumerate(p, -2)?;
    Ok(permutation_of(&MoveWord::single(g), &table, Subset::Star)?.parity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        let r = ramification_profile(5).unwrap();
        assert_eq!((r.degree, r.fiber0.len(), r.fiber1728.len(), r.cusps.len()), (40, 14, 20, 8));
        let r = ramification_profile(7).unwrap();
        assert_eq!((r.degree, r.fiber0.len(), r.fiber1728.len(), r.cusps.len()), (28, 10, 15, 5));
        assert_eq!(ramification_profile(11).unwrap().cusps.len(), 14);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(5).unwrap().genus_rh, Some(0));
        assert_eq!(genus(7).unwrap().genus_rh, Some(0));
        assert_eq!(genus(11).unwrap().genus_rh, Some(1));
        assert!(genus(13).unwrap().genus_rh.unwrap() >= 2);
        assert_eq!(epsilon(5), rat_frac(11, 3));
    }

    #[test]
    fn cusp_closed_examples() {
        assert_eq!(cusp_count_closed(5).unwrap(), 8);
        assert_eq!(cusp_count_closed(7).unwrap(), 5);
        assert_eq!(cusp_count_closed(11).unwrap(), 14);
    }

    #[test]
    fn displayed_fiber0_is_not_integral_at_5() {
        assert!(!is_integer(&fiber0_displayed(5).unwrap()));
        assert_eq!(fiber0_closed(5).unwrap(), 14);
    }

    #[test]
    fn monodromy_examples() {
        let m = monodromy_report(5).unwrap();
        assert_eq!(m.d_p, 10);
        assert!(m.transitive_on_quotient && m.parity_consistent);
        let m = monodromy_report(7).unwrap();
        assert_eq!(m.d_p, 7);
        assert!(m.parity_consistent);
    }

    #[test]
    fn small_primes_rejected() {
        assert!(matches!(genus(3), Err(ModularError::SmallPrime(3))));
    }
}
