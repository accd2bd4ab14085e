//! Generating pairs up to simultaneous conjugation, the Out⁺(F₂) action on
//! them, Higman invariants, and the combinatorial congruences.
//!
//! Commutators follow [g, h] = g h g⁻¹ h⁻¹ throughout.

use crate::arith::{factorize, l_valuation, PrimeField};
use crate::cusp_comb;
use crate::groups::{FiniteGroup, GroupError, Label};
use crate::surface::{PointTable, Subset, SurfaceError, SurfacePoint};
use crate::action::{orbit_decompose, ActionError, Generator, GeneratorSet};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NielsenError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error("crosscheck only runs for p in {{3, 5, 7, 11, 13}}, got {0}")]
    OutOfRange(u64),
    #[error("crosscheck failed at p = {p}: {what}")]
    Crosscheck { p: u64, what: String },
}

/// A generating pair in canonical form: `g` is the least element of its
/// conjugacy class and `h` the least conjugate of h by C(g).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenPairClass {
    pub g: u32,
    pub h: u32,
}

/// The four Out⁺(F₂) moves on pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairMove {
    /// (a, b) ↦ (ab⁻¹, a)
    Gamma0,
    /// (a, b) ↦ (b⁻¹, a)
    Gamma1728,
    /// (a, b) ↦ (a, ab)
    GammaInf,
    /// (a, b) ↦ (a⁻¹, b⁻¹)
    GammaMinusI,
}

impl PairMove {
    pub const ALL: [PairMove; 4] = [PairMove::Gamma0, PairMove::Gamma1728, PairMove::GammaInf, PairMove::GammaMinusI];

    pub fn apply(self, g: &FiniteGroup, (a, b): (u32, u32)) -> (u32, u32) {
        match self {
            PairMove::Gamma0 => (g.mul(a, g.inv(b)), a),
            PairMove::Gamma1728 => (g.inv(b), a),
            PairMove::GammaInf => (a, g.mul(a, b)),
            PairMove::GammaMinusI => (g.inv(a), g.inv(b)),
        }
    }
}

/// Canonical forms of pairs under simultaneous conjugation.
pub struct Canonicalizer<'a> {
    group: &'a FiniteGroup,
    /// Centralizer of each class representative, by class id.
    cents: Vec<Vec<u32>>,
}

impl<'a> Canonicalizer<'a> {
    pub fn new(group: &'a FiniteGroup) -> Self {
        let cents = group.classes().iter().map(|c| group.centralizer(c.rep)).collect();
        Self { group, cents }
    }

    pub fn group(&self) -> &'a FiniteGroup {
        self.group
    }

    pub fn canonical(&self, a: u32, b: u32) -> GenPairClass {
        let g = self.group;
        let t = g.to_rep(a);
        let rep = g.conj(t, a);
        let b1 = g.conj(t, b);
        let h = self.cents[g.class_of(a) as usize]
            .iter()
            .map(|&c| g.conj(c, b1))
            .min()
            .expect("centralizer contains the identity");
        GenPairClass { g: rep, h }
    }

    pub fn centralizer_of_rep(&self, class: u32) -> &[u32] {
        &self.cents[class as usize]
    }
}

/// One class per Inn(G)-orbit of generating pairs, sorted.
pub fn enumerate_classes(group: &FiniteGroup) -> Vec<GenPairClass> {
    let canon = Canonicalizer::new(group);
    enumerate_with(&canon)
}

pub fn enumerate_with(canon: &Canonicalizer<'_>) -> Vec<GenPairClass> {
    let g = canon.group();
    let n = g.order();
    let mut out: Vec<GenPairClass> = (0..g.classes().len() as u32)
        .into_par_iter()
        .flat_map_iter(|cid| {
            let r = g.class(cid).rep;
            let cent = canon.centralizer_of_rep(cid);
            let mut seen = vec![false; n];
            let mut found = Vec::new();
            for h in 0..n as u32 {
                if seen[h as usize] {
                    continue;
                }
                for &c in cent {
                    seen[g.conj(c, h) as usize] = true;
                }
                if g.is_generating_pair(r, h) {
                    found.push(GenPairClass { g: r, h });
                }
            }
            found
        })
        .collect();
    out.sort_unstable();
    out
}

/// Class id of [g, h].
pub fn higman_invariant(group: &FiniteGroup, pair: &GenPairClass) -> u32 {
    group.class_of(group.commutator(pair.g, pair.h))
}

/// The sorted class list with each move realized as a permutation of it.
pub struct PairClassSpace<'a> {
    pub group: &'a FiniteGroup,
    pub classes: Vec<GenPairClass>,
    index: HashMap<GenPairClass, u32>,
    /// Permutations for [`PairMove::ALL`], in that order.
    pub moves: [Vec<u32>; 4],
    pub higman: Vec<u32>,
}

impl<'a> PairClassSpace<'a> {
    pub fn new(group: &'a FiniteGroup) -> Self {
        let canon = Canonicalizer::new(group);
        let classes = enumerate_with(&canon);
        Self::from_classes(&canon, classes)
    }

    pub fn from_classes(canon: &Canonicalizer<'a>, classes: Vec<GenPairClass>) -> Self {
        let group = canon.group();
        let index: HashMap<GenPairClass, u32> = classes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let moves = PairMove::ALL.map(|mv| {
            classes
                .par_iter()
                .map(|c| {
                    let (a, b) = mv.apply(group, (c.g, c.h));
                    index[&canon.canonical(a, b)]
                })
                .collect()
        });
        let higman = classes.iter().map(|c| higman_invariant(group, c)).collect();
        Self { group, classes, index, moves, higman }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, c: &GenPairClass) -> Option<u32> {
        self.index.get(c).copied()
    }

    pub fn apply(&self, mv: PairMove, i: u32) -> u32 {
        let slot = PairMove::ALL.iter().position(|&m| m == mv).expect("listed");
        self.moves[slot][i as usize]
    }

    /// Orbits of the moves in `which`, each as a sorted index list; ordered by
    /// smallest member.
    pub fn orbits(&self, which: &[PairMove]) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut orbit = vec![s as u32];
            let mut queue = VecDeque::from([s as u32]);
            while let Some(i) = queue.pop_front() {
                for &mv in which {
                    let j = self.apply(mv, i);
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        orbit.push(j);
                        queue.push_back(j);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NielsenOrbit {
    pub representative: GenPairClass,
    /// Size of one Out⁺-orbit.
    pub size: u64,
    /// γ₋I swaps this Out⁺-orbit with a second one of the same size.
    pub paired_by_minus_i: bool,
    /// Size after identifying each class with its γ₋I image.
    pub quotient_size: u64,
    /// γ₋I fixes the orbit pointwise (the 2ℓᵏ observation applies).
    pub gamma_minus_i_fixed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VdovinBound {
    pub ell: u64,
    pub r: u32,
    pub s: u32,
    pub j: u32,
    pub modulus: u64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HigmanStratum {
    pub class_id: u32,
    /// Order of an element of the Higman class.
    pub class_order: u32,
    pub class_size: usize,
    pub total_classes: usize,
    pub orbits: Vec<NielsenOrbit>,
    pub m_prime: u64,
    pub d_prime: u64,
    /// |c| / gcd(|c|, m′d′).
    pub modulus: u64,
    pub modulus_passed: bool,
    pub vdovin: Vec<VdovinBound>,
    /// Every quotient orbit size is divisible by |c| (recorded, not a theorem).
    pub e_divisible: bool,
    /// Where γ₋I fixes an orbit, 2·modulus also divides the quotient size.
    pub twice_modulus_observed: Option<bool>,
}

impl HigmanStratum {
    pub fn passed(&self) -> bool {
        self.modulus_passed && self.vdovin.iter().all(|v| v.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NielsenOrbitReport {
    pub group_order: usize,
    pub pair_classes: usize,
    pub strata: Vec<HigmanStratum>,
}

impl NielsenOrbitReport {
    pub fn passed(&self) -> bool {
        self.strata.iter().all(HigmanStratum::passed)
    }
}

/// ord_ℓ of the largest proper normal subgroup order, i.e. the least j with
/// no proper normal subgroup of order divisible by ℓ^(j+1).
pub fn normal_j(normals: &[Vec<u32>], group_order: usize, ell: u64) -> u32 {
    normals
        .iter()
        .filter(|s| s.len() < group_order)
        .map(|s| l_valuation(ell, s.len() as u64))
        .max()
        .unwrap_or(0)
}

/// ℓ^⌈(r − 3s − j)/2⌉, or 1 when the exponent is not positive.
pub fn vdovin_modulus(ell: u64, r: u32, s: u32, j: u32) -> u64 {
    let num = r as i64 - 3 * s as i64 - j as i64;
    if num <= 0 {
        return 1;
    }
    ell.pow(((num + 1) / 2) as u32)
}

/// Out⁺ orbits on all generating-pair classes, stratified by Higman class,
/// with the combinatorial congruence and its ℓ-power corollary checked on
/// every γ₋I-quotient orbit.
pub fn out_plus_orbits(group: &FiniteGroup) -> NielsenOrbitReport {
    let space = PairClassSpace::new(group);
    out_plus_orbits_in(&space)
}

pub fn out_plus_orbits_in(space: &PairClassSpace<'_>) -> NielsenOrbitReport {
    let group = space.group;
    let out_plus = [PairMove::Gamma0, PairMove::Gamma1728, PairMove::GammaInf];
    let single = space.orbits(&out_plus);
    // γ₋I is central in Out(F₂), so it permutes Out⁺-orbits; take the
    // quotient inside each union of an orbit with its image
    let unions = space.orbits(&PairMove::ALL);
    let vertical = cusp_comb::vertical_orders(space);
    let normals = group.normal_subgroups();
    let mut by_class: BTreeMap<u32, Vec<NielsenOrbit>> = BTreeMap::new();
    let mut totals: BTreeMap<u32, usize> = BTreeMap::new();
    let mut mprime: BTreeMap<u32, u64> = BTreeMap::new();
    for (i, &h) in space.higman.iter().enumerate() {
        *totals.entry(h).or_default() += 1;
        let m = mprime.entry(h).or_insert(1);
        *m = m.lcm(&vertical[i]);
    }
    let mut out_plus_size = vec![0u64; space.len()];
    for o in &single {
        for &i in o {
            out_plus_size[i as usize] = o.len() as u64;
        }
    }
    for union in &unions {
        let first = union[0];
        let fixed = union.iter().filter(|&&i| space.apply(PairMove::GammaMinusI, i) == i).count() as u64;
        let total = union.len() as u64;
        let size = out_plus_size[first as usize];
        by_class.entry(space.higman[first as usize]).or_default().push(NielsenOrbit {
            representative: space.classes[first as usize],
            size,
            paired_by_minus_i: total == 2 * size,
            quotient_size: (total + fixed) / 2,
            gamma_minus_i_fixed: fixed == total,
        });
    }
    let strata = by_class
        .into_iter()
        .map(|(cid, orbits)| {
            let class = group.class(cid);
            let c = class.order as u64;
            let m_prime = mprime[&cid];
            let d_prime = cusp_comb::d_prime(group, cid);
            let modulus = c / c.gcd(&(m_prime * d_prime));
            let modulus_passed = orbits.iter().all(|o| o.quotient_size % modulus == 0);
            let vdovin = factorize(c)
                .into_iter()
                .map(|(ell, r)| {
                    let s = l_valuation(ell, group.order() as u64) - r;
                    let j = normal_j(&normals, group.order(), ell);
                    let modulus = vdovin_modulus(ell, r, s, j);
                    let passed = orbits.iter().all(|o| o.quotient_size % modulus == 0);
                    VdovinBound { ell, r, s, j, modulus, passed }
                })
                .collect();
            let e_divisible = orbits.iter().all(|o| o.quotient_size % c == 0);
            let fixed: Vec<&NielsenOrbit> = orbits.iter().filter(|o| o.gamma_minus_i_fixed).collect();
            let twice_modulus_observed =
                (!fixed.is_empty() && modulus > 1).then(|| fixed.iter().all(|o| o.quotient_size % (2 * modulus) == 0));
            HigmanStratum {
                class_id: cid,
                class_order: class.order,
                class_size: class.size,
                total_classes: totals[&cid],
                orbits,
                m_prime,
                d_prime,
                modulus,
                modulus_passed,
                vdovin,
                e_divisible,
                twice_modulus_observed,
            }
        })
        .collect();
    NielsenOrbitReport { group_order: group.order(), pair_classes: space.len(), strata }
}

/// The stratum of one Higman class, if it is admissible.
pub fn verify_combinatorial_congruence(group: &FiniteGroup, class_id: u32) -> Option<HigmanStratum> {
    out_plus_orbits(group).strata.into_iter().find(|s| s.class_id == class_id)
}

/// SL2(F_p) together with the GL2 outer twist by diag(ν, 1), ν a nonresidue.
pub struct Sl2Setting {
    pub p: u64,
    pub group: FiniteGroup,
    /// Index permutation x ↦ D x D⁻¹.
    pub twist: Vec<u32>,
}

impl Sl2Setting {
    pub fn new(p: u64) -> Result<Self, NielsenError> {
        let f = PrimeField::new(p)?;
        let group = FiniteGroup::sl2(p)?;
        let nu = f.least_nonresidue()?;
        let nu_inv = f.inv(nu)?;
        let twist = group
            .labels()
            .iter()
            .map(|l| match l {
                Label::Mat { m, .. } => {
                    let img = Label::Mat { p, m: [m[0], f.mul(nu, m[1]), f.mul(nu_inv, m[2]), m[3]] };
                    group.index_of(&img).expect("SL2 is normal in GL2")
                }
                Label::Perm(_) => unreachable!("matrix group"),
            })
            .collect();
        Ok(Self { p, group, twist })
    }

    pub fn trace(&self, x: u32) -> u64 {
        self.group.label(x).trace().expect("matrix label")
    }

    /// (tr g, tr h, tr gh).
    pub fn trace_point(&self, pair: &GenPairClass) -> SurfacePoint {
        let g = &self.group;
        SurfacePoint::new(self.trace(pair.g), self.trace(pair.h), self.trace(g.mul(pair.g, pair.h)))
    }
}

/// Pair classes with tr[g,h] = −2 and their grouping into GL2-classes.
pub struct TraceMinusTwo<'a> {
    pub space: PairClassSpace<'a>,
    /// GL2-class id for each SL2-class index.
    pub gl2_of: Vec<u32>,
    /// Smallest SL2-class index in each GL2-class.
    pub gl2_reps: Vec<u32>,
}

impl<'a> TraceMinusTwo<'a> {
    pub fn new(setting: &'a Sl2Setting) -> Self {
        let g = &setting.group;
        let p = setting.p;
        let canon = Canonicalizer::new(g);
        let classes: Vec<GenPairClass> = enumerate_with(&canon)
            .into_iter()
            .filter(|c| setting.trace(g.commutator(c.g, c.h)) == p - 2)
            .collect();
        let space = PairClassSpace::from_classes(&canon, classes);
        let mut gl2_of = vec![u32::MAX; space.len()];
        let mut gl2_reps = Vec::new();
        for i in 0..space.len() {
            if gl2_of[i] != u32::MAX {
                continue;
            }
            let c = space.classes[i];
            let tw = canon.canonical(setting.twist[c.g as usize], setting.twist[c.h as usize]);
            let j = space.index_of(&tw).expect("twist preserves the trace-(−2) classes") as usize;
            let id = gl2_reps.len() as u32;
            gl2_of[i] = id;
            gl2_of[j] = id;
            gl2_reps.push(i as u32);
        }
        Self { space, gl2_of, gl2_reps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub p: u64,
    pub sl2_classes: usize,
    pub gl2_classes: usize,
    pub star_points: usize,
    pub bijective: bool,
    pub intertwines_rot1: bool,
    pub gamma_inf_orbits: Vec<u64>,
    pub rot1_orbits: Vec<u64>,
    pub multisets_equal: bool,
    /// Every (x, y, z) with trace invariant ≠ 2 is a trace triple.
    pub traces_surjective: bool,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.intertwines_rot1 && self.multisets_equal && self.traces_surjective
    }
}

/// Some (A, B) in SL2(F_p)² with (tr A, tr B, tr AB) = (x, y, z).
///
/// Tries A in companion form [[x, 1], [−1, 0]] first, which covers every
/// triple whose lift has A non-scalar, then falls back to a full search.
pub fn lift_trace_triple(p: u64, x: u64, y: u64, z: u64) -> Option<(Label, Label)> {
    let f = PrimeField::new(p).ok()?;
    let a = Label::Mat { p, m: [x % p, 1 % p, p - 1, 0] };
    let tr_ab = |b: &Label| a.compose(b).trace();
    for u in 0..p {
        for bb in 1..p {
            // B = [[u, bb], [c, y − u]] with det 1
            let c = f.mul(f.sub(f.mul(u, f.sub(y, u)), 1), f.inv(bb).ok()?);
            let b = Label::Mat { p, m: [u, bb, c, f.sub(y, u)] };
            if tr_ab(&b) == Some(z % p) {
                return Some((a, b));
            }
        }
    }
    let sl2: Vec<Label> = (0..p * p * p * p)
        .map(|k| Label::Mat { p, m: [k % p, k / p % p, k / (p * p) % p, k / (p * p * p)] })
        .filter(|l| matches!(l, Label::Mat { m, .. } if f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])) == 1))
        .collect();
    for a in sl2.iter().filter(|l| l.trace() == Some(x % p)) {
        for b in sl2.iter().filter(|l| l.trace() == Some(y % p)) {
            if a.compose(b).trace() == Some(z % p) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Compare GL2-classes of trace-(−2) generating pairs of SL2(F_p) with
/// X*₋₂(p) through trace coordinates.
pub fn sl2_crosscheck(p: u64) -> Result<CrosscheckReport, NielsenError> {
    if ![3, 5, 7, 11, 13].contains(&p) {
        return Err(NielsenError::OutOfRange(p));
    }
    let setting = Sl2Setting::new(p)?;
    let tm = TraceMinusTwo::new(&setting);
    let table = PointTable::enumerate(p, -2)?;
    let star = table.subset_indices(Subset::Star);

    let points: Vec<SurfacePoint> = tm.gl2_reps.iter().map(|&i| setting.trace_point(&tm.space.classes[i as usize])).collect();
    let mut keys: Vec<u64> = points.iter().map(|pt| pt.key(p)).collect();
    keys.sort_unstable();
    let distinct = keys.windows(2).all(|w| w[0] != w[1]);
    let all_star = points.iter().all(|pt| table.index_of(pt).is_some_and(|i| table.in_subset(i, Subset::Star)));
    // SL2-classes in one GL2-class share trace coordinates
    let consistent = (0..tm.space.len()).all(|i| {
        setting.trace_point(&tm.space.classes[i]) == points[tm.gl2_of[i] as usize]
    });
    let bijective = distinct && all_star && consistent && points.len() == star.len();

    let intertwines_rot1 = (0..tm.space.len() as u32).all(|i| {
        let img = tm.space.apply(PairMove::GammaInf, i);
        let before = setting.trace_point(&tm.space.classes[i as usize]);
        setting.trace_point(&tm.space.classes[img as usize]) == Generator::Rot1.apply(p, &before)
    });

    let gamma_inf_orbits = gl2_gamma_inf_orbit_sizes(&tm);
    let mut rot1_orbits = orbit_decompose(&table, &GeneratorSet::single(Generator::Rot1), Subset::Star)?.sizes();
    rot1_orbits.sort_unstable();

    let f = PrimeField::new(p)?;
    let mut traces_surjective = true;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                let pt = SurfacePoint::new(x, y, z);
                if crate::surface::trace_invariant(&f, &pt) == 2 % p {
                    continue;
                }
                if lift_trace_triple(p, x, y, z).is_none() {
                    traces_surjective = false;
                }
            }
        }
    }

    Ok(CrosscheckReport {
        p,
        sl2_classes: tm.space.len(),
        gl2_classes: tm.gl2_reps.len(),
        star_points: star.len(),
        bijective,
        intertwines_rot1,
        multisets_equal: gamma_inf_orbits == rot1_orbits,
        gamma_inf_orbits,
        rot1_orbits,
        traces_surjective,
    })
}

/// Sorted γ∞-orbit sizes on GL2-classes.
pub fn gl2_gamma_inf_orbit_sizes(tm: &TraceMinusTwo<'_>) -> Vec<u64> {
    let n = tm.gl2_reps.len();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut cur = s;
        let mut size = 0;
        while !seen[cur] {
            seen[cur] = true;
            size += 1;
            let img = tm.space.apply(PairMove::GammaInf, tm.gl2_reps[cur]);
            cur = tm.gl2_of[img as usize] as usize;
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_has_three_classes() {
        let g = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(enumerate_classes(&g).len(), 3);
    }

    #[test]
    fn elementary_abelian_rank_three_has_none() {
        let g = FiniteGroup::from_spec_str("perm: (1 2)\nperm: (3 4)\nperm: (5 6)").unwrap();
        assert!(enumerate_classes(&g).is_empty());
    }

    #[test]
    fn sl2_5_trace_minus_two_classes() {
        let s = Sl2Setting::new(5).unwrap();
        let tm = TraceMinusTwo::new(&s);
        assert_eq!(tm.space.len(), 80);
        assert_eq!(tm.gl2_reps.len(), 40);
        let per_class: BTreeMap<u32, usize> = tm.space.higman.iter().fold(BTreeMap::new(), |mut m, &h| {
            *m.entry(h).or_default() += 1;
            m
        });
        assert_eq!(per_class.values().copied().collect::<Vec<_>>(), vec![40, 40]);
    }

    #[test]
    fn abelian_higman_is_trivial() {
        let g = FiniteGroup::from_spec_str("perm: (1 2)\nperm: (3 4)").unwrap();
        for c in enumerate_classes(&g) {
            assert_eq!(higman_invariant(&g, &c), g.class_of(g.identity()));
        }
    }

    #[test]
    fn canonical_form_is_orbit_minimum() {
        let g = FiniteGroup::from_spec_str("perm: (1 2 3 4 5)\nperm: (1 2 3)").unwrap();
        let canon = Canonicalizer::new(&g);
        for (a, b) in [(3u32, 17u32), (40, 2), (59, 31)] {
            let c = canon.canonical(a, b);
            let brute = (0..60u32).map(|x| (g.conj(x, a), g.conj(x, b))).min().unwrap();
            assert_eq!((c.g, c.h), brute);
        }
    }

    #[test]
    fn crosscheck_small() {
        assert!(sl2_crosscheck(5).unwrap().passed());
        let r = sl2_crosscheck(3).unwrap();
        assert_eq!((r.gl2_classes, r.star_points), (0, 0));
        assert!(r.passed());
    }

    #[test]
    fn psl2_7_order_seven_components() {
        let g = FiniteGroup::from_spec_file(concat!(env!("CARGO_MANIFEST_DIR"), "/data/groups/psl2_7.grp")).unwrap();
        let report = out_plus_orbits(&g);
        let sevens: Vec<u64> = report
            .strata
            .iter()
            .filter(|s| s.class_order == 7)
            .flat_map(|s| s.orbits.iter().map(|o| o.quotient_size))
            .collect();
        assert_eq!(sevens, vec![7, 7]);
    }
}
