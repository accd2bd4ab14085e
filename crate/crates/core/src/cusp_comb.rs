//! Cusps on the group side: δ-classes, k_{u,h}, M_{u,h}, A_{G,u,h} and the
//! vertical automorphism orders that feed m′.

use crate::action::{orbit_decompose, Generator, GeneratorSet};
use crate::groups::FiniteGroup;
use crate::modular::cusp_count_closed;
use crate::nielsen::{gl2_gamma_inf_orbit_sizes, GenPairClass, NielsenError, PairClassSpace, PairMove, Sl2Setting, TraceMinusTwo};
use crate::surface::{PointTable, Subset};
use rayon::prelude::*;
use serde::Serialize;

/// A γ∞-orbit of generating-pair classes, i.e. a pair up to conjugation and
/// (u, h) ↦ (u, uᵏh).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaClass {
    /// Least pair class in the orbit.
    pub representative: GenPairClass,
    /// Orbit length.
    pub width: u64,
    /// Class id of [u⁻¹, h⁻¹].
    pub higman_class: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspRecord {
    pub u: u32,
    pub h: u32,
    pub width: u64,
    pub higman_class: u32,
    pub m_order: usize,
    pub k_uh: u32,
    pub a_order: usize,
    pub vertical_order: u64,
}

/// Sorted by Higman class, then representative.
pub fn delta_classes(space: &PairClassSpace<'_>) -> Vec<DeltaClass> {
    let g = space.group;
    let mut out: Vec<DeltaClass> = space
        .orbits(&[PairMove::GammaInf])
        .into_iter()
        .map(|orbit| {
            let rep = space.classes[orbit[0] as usize];
            DeltaClass {
                representative: rep,
                width: orbit.len() as u64,
                higman_class: g.class_of(g.commutator(g.inv(rep.g), g.inv(rep.h))),
            }
        })
        .collect();
    out.sort_by_key(|d| (d.higman_class, d.representative));
    out
}

/// M_{u,h} = ⟨u, h⁻¹u⁻¹h⟩.
pub fn m_group(g: &FiniteGroup, u: u32, h: u32) -> Vec<u32> {
    let hi = g.inv(h);
    g.subgroup_closure(&[u, g.mul(g.mul(hi, g.inv(u)), h)])
}

/// Least k ≥ 1 with (u, uᵏh) conjugate to (u, h).
pub fn k_uh(g: &FiniteGroup, u: u32, h: u32) -> u32 {
    let hi = g.inv(h);
    let mut hit = vec![false; g.order()];
    for c in g.centralizer(u) {
        hit[g.mul(g.conj(c, h), hi) as usize] = true;
    }
    let n = g.element_order(u);
    (1..=n).find(|&k| hit[g.pow(u, k as u64) as usize]).expect("k = |u| always works")
}

fn in_a(g: &FiniteGroup, a: u32, h: u32, m_gens: [u32; 2], powers_of_u: &[bool]) -> bool {
    m_gens.iter().all(|&x| g.mul(a, x) == g.mul(x, a)) && powers_of_u[g.commutator(a, h) as usize]
}

fn u_mask(g: &FiniteGroup, u: u32) -> Vec<bool> {
    let mut mask = vec![false; g.order()];
    for x in g.cyclic_subgroup(u) {
        mask[x as usize] = true;
    }
    mask
}

fn m_gens(g: &FiniteGroup, u: u32, h: u32) -> [u32; 2] {
    [u, g.mul(g.mul(g.inv(h), g.inv(u)), h)]
}

/// A_{G,u,h} = {a ∈ C_G(M_{u,h}) : a h a⁻¹ h⁻¹ ∈ ⟨u⟩}, by direct filtration.
pub fn a_group(g: &FiniteGroup, u: u32, h: u32) -> Vec<u32> {
    let mask = u_mask(g, u);
    let gens = m_gens(g, u, h);
    (0..g.order() as u32).filter(|&a| in_a(g, a, h, gens, &mask)).collect()
}

/// |A_{G,u,h} ∩ ⟨[u⁻¹, h⁻¹]⟩|.
pub fn cusp_automorphism_order(g: &FiniteGroup, u: u32, h: u32) -> u64 {
    let mask = u_mask(g, u);
    let gens = m_gens(g, u, h);
    let c = g.commutator(g.inv(u), g.inv(h));
    g.cyclic_subgroup(c).into_iter().filter(|&a| in_a(g, a, h, gens, &mask)).count() as u64
}

/// Vertical automorphism order for every class in the space.
pub fn vertical_orders(space: &PairClassSpace<'_>) -> Vec<u64> {
    space.classes.par_iter().map(|c| cusp_automorphism_order(space.group, c.g, c.h)).collect()
}

pub fn cusp_record(g: &FiniteGroup, delta: &DeltaClass) -> CuspRecord {
    let (u, h) = (delta.representative.g, delta.representative.h);
    CuspRecord {
        u,
        h,
        width: delta.width,
        higman_class: delta.higman_class,
        m_order: m_group(g, u, h).len(),
        k_uh: k_uh(g, u, h),
        a_order: a_group(g, u, h).len(),
        vertical_order: cusp_automorphism_order(g, u, h),
    }
}

/// One record per δ-class of G.
pub fn cusp_records(g: &FiniteGroup) -> Vec<CuspRecord> {
    let space = PairClassSpace::new(g);
    delta_classes(&space).par_iter().map(|d| cusp_record(g, d)).collect()
}

/// lcm of vertical orders over all pair classes with Higman class `class_id`;
/// 1 if there are none.
pub fn m_prime(space: &PairClassSpace<'_>, class_id: u32) -> u64 {
    use num_integer::Integer;
    space
        .classes
        .iter()
        .zip(&space.higman)
        .filter(|(_, &h)| h == class_id)
        .map(|(c, _)| cusp_automorphism_order(space.group, c.g, c.h))
        .fold(1, |acc, v| acc.lcm(&v))
}

/// |C_G(c)| / |c| for c the representative of the class.
pub fn d_prime(g: &FiniteGroup, class_id: u32) -> u64 {
    let rep = g.class(class_id).rep;
    g.centralizer(rep).len() as u64 / g.element_order(rep) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspCrosscheck {
    pub p: u64,
    pub group_side: Vec<u64>,
    pub surface_side: Vec<u64>,
    pub closed_form: u64,
}

impl CuspCrosscheck {
    pub fn passed(&self) -> bool {
        self.group_side == self.surface_side && self.group_side.len() as u64 == self.closed_form
    }
}

/// γ∞-orbits on trace-(−2) pair classes of SL2(F_p) modulo GL2 against
/// Rot1-orbits on X*₋₂(p) and the closed cusp count.
pub fn cusp_crosscheck(p: u64) -> Result<CuspCrosscheck, NielsenError> {
    if ![5, 7, 11, 13].contains(&p) {
        return Err(NielsenError::OutOfRange(p));
    }
    let setting = Sl2Setting::new(p)?;
    let tm = TraceMinusTwo::new(&setting);
    let group_side = gl2_gamma_inf_orbit_sizes(&tm);
    let table = PointTable::enumerate(p, -2)?;
    let surface_side = orbit_decompose(&table, &GeneratorSet::single(Generator::Rot1), Subset::Star)?.sorted_sizes();
    let closed_form = cusp_count_closed(p).map_err(|e| NielsenError::Crosscheck { p, what: e.to_string() })?;
    Ok(CuspCrosscheck { p, group_side, surface_side, closed_form })
}
