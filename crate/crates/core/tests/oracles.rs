//! Worked values checked against oracles written here from scratch: cubic
//! scans, hand-rolled BFS, brute-force matrix search.

use markoff::action::{orbit_decompose, permutation_of, rot_orbits_on_fiber, Generator, GeneratorSet, MoveWord};
use markoff::arith::{l_valuation, legendre, n_of_trace, phi_capital, rat_frac, PrimeField, QuadElem, QuadExt};
use markoff::congruence::{centralizer_order_check, required_modulus, Rule};
use markoff::cusp_comb::{a_group, cusp_automorphism_order, delta_classes, m_group};
use markoff::groups::{FiniteGroup, Label};
use markoff::markoff_z::{bound, frobenius_residues, grow_tree, strong_approx, MarkoffSurface};
use markoff::modular::{cusp_count_closed, epsilon, monodromy_report, ramification_profile};
use markoff::nielsen::{enumerate_classes, higman_invariant, out_plus_orbits, PairClassSpace};
use markoff::surface::{conic_fiber, ConicKind, PointTable, Subset};
use num_bigint::BigUint;
use std::collections::{HashSet, VecDeque};

fn group(name: &str) -> FiniteGroup {
    FiniteGroup::from_spec_file(format!("{}/data/groups/{name}.grp", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn cubic_scan(p: u64, t: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                // x² + y² + z² − xyz − 2 ≡ t
                if (x * x + y * y + z * z + p * p * p) % p == (x * y * z + 2 + t) % p {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

fn is_star(v: &[u64; 3]) -> bool {
    v.iter().filter(|&&c| c != 0).count() >= 2
}

fn r3(p: u64, [x, y, z]: [u64; 3]) -> [u64; 3] {
    [x, y, (x * y % p + p - z) % p]
}

fn rot1(p: u64, [x, y, z]: [u64; 3]) -> [u64; 3] {
    [x, z, (x * z % p + p - y) % p]
}

fn gamma1728(p: u64, [x, y, z]: [u64; 3]) -> [u64; 3] {
    [y, x, (x * y % p + p - z) % p]
}

fn gamma0(p: u64, [x, y, z]: [u64; 3]) -> [u64; 3] {
    let xy = x * y % p;
    [(xy + p - z) % p, x, ((x * xy) % p + 2 * p - x * z % p - y) % p]
}

/// Orbit sizes of the group generated by `moves`, sorted.
fn bfs_orbits(points: &[[u64; 3]], moves: &[&dyn Fn([u64; 3]) -> [u64; 3]]) -> Vec<usize> {
    let all: HashSet<[u64; 3]> = points.iter().copied().collect();
    let mut seen = HashSet::new();
    let mut sizes = Vec::new();
    for &s in points {
        if !seen.insert(s) {
            continue;
        }
        let mut q = VecDeque::from([s]);
        let mut n = 0;
        while let Some(v) = q.pop_front() {
            n += 1;
            for m in moves {
                let w = m(v);
                assert!(all.contains(&w));
                if seen.insert(w) {
                    q.push_back(w);
                }
            }
        }
        sizes.push(n);
    }
    sizes.sort_unstable();
    sizes
}

fn star_points(p: u64, t: u64) -> Vec<[u64; 3]> {
    cubic_scan(p, t).into_iter().filter(is_star).collect()
}

fn mat_mul(p: u64, a: [u64; 4], b: [u64; 4]) -> [u64; 4] {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

fn mat_order(p: u64, m: [u64; 4]) -> u64 {
    let mut cur = m;
    let mut k = 1;
    while cur != [1, 0, 0, 1] {
        cur = mat_mul(p, cur, m);
        k += 1;
    }
    k
}

#[test]
fn legendre_from_square_table() {
    let squares: HashSet<u64> = (1..7u64).map(|x| x * x % 7).collect();
    assert!(!squares.contains(&5));
    assert_eq!(legendre(5, 7).unwrap(), -1);
    assert_eq!(legendre(2, 7).unwrap(), 1);
    assert_eq!(legendre(0, 7).unwrap(), 0);
}

#[test]
fn multiplicative_orders_by_iteration() {
    let powers: Vec<u64> = (1..=6).scan(1u64, |acc, _| {
        *acc = *acc * 5 % 7;
        Some(*acc)
    })
    .collect();
    assert_eq!(powers, vec![5, 4, 6, 2, 3, 1]);
    assert_eq!(PrimeField::new(7).unwrap().element_order(5).unwrap(), 6);

    // ω = (1 + √−3)/2 in F_5(√2), since −3 ≡ 2; 1/2 = 3
    let (mut a, mut b, mut k) = (3u64, 3u64, 1);
    while (a, b) != (1, 0) {
        (a, b) = ((a * 3 + 2 * b * 3) % 5, (a * 3 + b * 3) % 5);
        k += 1;
    }
    assert_eq!(k, 6);
    let ext = QuadExt::new(PrimeField::new(5).unwrap()).unwrap();
    assert_eq!(ext.d(), 2);
    assert_eq!(ext.element_order(QuadElem { a: 3, b: 3 }).unwrap(), 6);
}

#[test]
fn n_of_trace_against_matrix_powers() {
    for p in [5u64, 7, 11, 13] {
        for t in 0..p {
            if t == 2 || t == p - 2 {
                continue;
            }
            assert_eq!(n_of_trace(t as i64, p).unwrap(), mat_order(p, [0, p - 1, 1, t]), "p={p} t={t}");
        }
    }
    assert_eq!(n_of_trace(1, 7).unwrap(), 6);
}

#[test]
fn phi_capital_direct_sum() {
    // Σ_{d | 12} φ(d)/d = 1 + 1/2 + 2/3 + 2/4 + 2/6 + 4/12
    let direct = [(1, 1), (1, 2), (2, 3), (2, 4), (2, 6), (4, 12)].iter().fold(rat_frac(0, 1), |acc, &(a, b)| acc + rat_frac(a, b));
    assert_eq!(direct, rat_frac(10, 3));
    assert_eq!(phi_capital(12).unwrap(), direct);
    assert_eq!(phi_capital(4).unwrap(), rat_frac(2, 1));
    assert_eq!(l_valuation(3, 336), 1);
    assert_eq!(l_valuation(2, 48), 4);
}

#[test]
fn star_counts_by_cubic_scan() {
    for (p, expect) in [(5u64, 40usize), (7, 28), (13, 208)] {
        let scan = star_points(p, p - 2);
        assert_eq!(scan.len(), expect);
        assert_eq!(PointTable::enumerate(p, -2).unwrap().star_len(), expect);
    }
    assert!(star_points(3, 1).is_empty());
}

#[test]
fn conic_fibers_by_scan() {
    let count = |p: u64, a: u64, star: bool| {
        cubic_scan(p, p - 2).into_iter().filter(|v| v[0] == a && (!star || is_star(v))).count()
    };
    let c = conic_fiber(5, -2, 2).unwrap();
    assert_eq!((c.kind, c.points.len()), (ConicKind::Parabolic, 10));
    assert_eq!(count(5, 2, false), 10);
    let c = conic_fiber(5, -2, 0).unwrap();
    assert_eq!((c.kind, c.degenerate, c.star_points().len()), (ConicKind::Hyperbolic, true, 8));
    assert_eq!(count(5, 0, true), 8);
    let c = conic_fiber(7, -2, 0).unwrap();
    assert_eq!((c.kind, c.star_points().len()), (ConicKind::Elliptic, 0));
    assert_eq!(count(7, 0, true), 0);
}

#[test]
fn gamma_orbits_with_origin_by_own_bfs() {
    let p = 5;
    let pts = cubic_scan(p, p - 2);
    let sizes = bfs_orbits(&pts, &[&|v| r3(p, v), &|[x, y, z]| [y, x, z], &|[x, y, z]| [x, z, y]]);
    assert_eq!(sizes, vec![1, 40]);
    let table = PointTable::enumerate(p, -2).unwrap();
    let mut lib = orbit_decompose(&table, &GeneratorSet::gamma(), Subset::All).unwrap().sizes();
    lib.sort_unstable();
    assert_eq!(lib, vec![1, 40]);
}

#[test]
fn rot1_fiber_orbits_by_own_cycles() {
    let (p, a) = (7u64, 3u64);
    let fiber: Vec<[u64; 3]> = star_points(p, p - 2).into_iter().filter(|v| v[0] == a).collect();
    let sizes = bfs_orbits(&fiber, &[&|v| rot1(p, v)]);
    let n = n_of_trace(3, 7).unwrap() as usize;
    assert!(sizes.iter().all(|&s| s == n));
    assert_eq!(rot_orbits_on_fiber(7, -2, 3).unwrap(), sizes.iter().map(|&s| s as u64).collect::<Vec<_>>());
    assert_eq!(rot_orbits_on_fiber(5, -2, 0).unwrap(), vec![4, 4]);
    assert_eq!(rot_orbits_on_fiber(5, -2, -2).unwrap(), vec![10]);
}

#[test]
fn swap_parity_by_transposition_count() {
    let table = PointTable::enumerate(5, -2).unwrap();
    let moved = star_points(5, 3).iter().filter(|v| v[0] != v[1]).count();
    let perm = permutation_of(&MoveWord::single(Generator::Swap12), &table, Subset::Star).unwrap();
    let expected = if (moved / 2) % 2 == 0 { "Even" } else { "Odd" };
    assert_eq!(format!("{:?}", perm.parity), expected);
    let id = permutation_of(&MoveWord::single(Generator::GammaMinusI), &table, Subset::Star).unwrap();
    assert_eq!(format!("{:?}", id.parity), "Even");
}

#[test]
fn rot1_cycles_are_fiber_orbits() {
    let p = 5u64;
    let table = PointTable::enumerate(p, -2).unwrap();
    let mut cycles = permutation_of(&MoveWord::single(Generator::Rot1), &table, Subset::Star).unwrap().cycle_lengths();
    cycles.sort_unstable();
    let mut fibers: Vec<u64> = (0..p as i64).flat_map(|a| rot_orbits_on_fiber(p, -2, a).unwrap()).collect();
    fibers.sort_unstable();
    assert_eq!(cycles, fibers);
}

#[test]
fn ramification_by_own_bfs() {
    for (p, f0, f1728, cusps) in [(5u64, 14usize, 20usize, 8usize), (7, 10, 15, 5), (11, 30, 44, 14)] {
        let pts = star_points(p, p - 2);
        assert_eq!(bfs_orbits(&pts, &[&|v| gamma0(p, v)]).len(), f0);
        assert_eq!(bfs_orbits(&pts, &[&|v| gamma1728(p, v)]).len(), f1728);
        assert_eq!(bfs_orbits(&pts, &[&|v| rot1(p, v)]).len(), cusps);
        let r = ramification_profile(p).unwrap();
        assert_eq!((r.degree as usize, r.fiber0.len(), r.fiber1728.len(), r.cusps.len()), (pts.len(), f0, f1728, cusps));
    }
    // the ramification formulas over 1728 for p ≡ 5 and 7 mod 8
    assert_eq!((5 * 5 + 3 * 5) / 2, 20);
    assert_eq!((7 * 7 - 3 * 7 + 2) / 2, 15);
}

#[test]
fn closed_forms_by_hand() {
    assert_eq!(epsilon(5), rat_frac(35, 8) - rat_frac(17, 24));
    assert_eq!(epsilon(5), rat_frac(11, 3));
    let phi = |n| phi_capital(n).unwrap();
    assert_eq!(rat_frac(2, 1) * phi(4) + rat_frac(3, 1) * phi(6) - rat_frac(14, 4), rat_frac(8, 1));
    assert_eq!(rat_frac(3, 1) * phi(6) + rat_frac(4, 1) * phi(8) - rat_frac(50, 4), rat_frac(5, 1));
    assert_eq!(rat_frac(5, 1) * phi(10) + rat_frac(6, 1) * phi(12) - rat_frac(78, 4), rat_frac(14, 1));
    assert_eq!([5, 7, 11].map(|p| cusp_count_closed(p).unwrap()), [8, 5, 14]);
    assert_eq!(monodromy_report(5).unwrap().d_p, 10);
    let m = monodromy_report(7).unwrap();
    assert_eq!(m.d_p, 7);
    assert!(m.parity_consistent);
}

#[test]
fn ladic_rule_from_valuations() {
    let n = n_of_trace(1, 7).unwrap();
    let r = l_valuation(3, n);
    let s = l_valuation(3, 336) - r;
    assert_eq!((r, s), (1, 0));
    let req = required_modulus(7, 1, Some(3)).unwrap();
    assert_eq!((req.rule, req.modulus), (Rule::GeneralLadic, 3u64.pow(r - s)));
}

#[test]
fn centralizer_by_matrix_search() {
    let (p, t) = (7u64, 3u64);
    let a = [0, p - 1, 1, t];
    let count = (0..p.pow(4))
        .map(|k| [k % p, k / p % p, k / (p * p) % p, k / (p * p * p)])
        .filter(|m| (m[0] * m[3] + p * p - m[1] * m[2]) % p == 1)
        .filter(|&m| mat_mul(p, m, a) == mat_mul(p, a, m))
        .count();
    assert_eq!(count, 8);
    assert_eq!(legendre(5, 7).unwrap(), -1);
    assert_eq!(centralizer_order_check(7, 3).unwrap(), 8);
}

#[test]
fn group_basics() {
    let g = FiniteGroup::sl2(5).unwrap();
    assert_eq!(g.order(), 5 * 24);
    assert_eq!(g.center().len(), 2);
    let a = g.index_of(&Label::mat(5, -1, 1, 0, -1)).unwrap();
    assert_eq!(g.centralizer(a).len(), 10);
    let g7 = FiniteGroup::sl2(7).unwrap();
    assert_eq!(g7.element_order(g7.index_of(&Label::mat(7, 1, 1, 0, 1)).unwrap()), 7);
    assert_eq!(group("dihedral_10").order(), 10);
    assert_eq!(FiniteGroup::build(&[]).unwrap().order(), 1);
    assert_eq!(group("q8").order(), 8);
    assert_eq!(group("a6").order(), 360);
    assert_eq!(group("psl2_8").order(), 504);
}

#[test]
fn trace_minus_two_classes_of_sl2() {
    for p in [5u64, 7, 11] {
        let g = FiniteGroup::sl2(p).unwrap();
        let sizes: Vec<usize> = g
            .classes()
            .iter()
            .filter(|c| g.label(c.rep).trace() == Some(p - 2))
            .map(|c| c.size)
            .collect();
        assert_eq!(sizes.len(), 3, "p = {p}");
        let mut nc: Vec<usize> = sizes.iter().copied().filter(|&s| s > 1).collect();
        nc.dedup();
        assert_eq!(nc.len(), 1);
    }
}

#[test]
fn z2_pairs_by_hand() {
    let g = FiniteGroup::cyclic(2).unwrap();
    let brute = (0..2u32).flat_map(|a| (0..2u32).map(move |b| (a, b))).filter(|&(a, b)| a == 1 || b == 1).count();
    assert_eq!(brute, 3);
    assert_eq!(enumerate_classes(&g).len(), 3);
}

#[test]
fn higman_class_orders_in_sl2_5() {
    let g = FiniteGroup::sl2(5).unwrap();
    let classes = enumerate_classes(&g);
    let c = classes.iter().find(|c| g.label(g.commutator(c.g, c.h)).trace() == Some(3)).unwrap();
    let hc = higman_invariant(&g, c);
    assert_eq!(g.class(hc).order, 10);
    let swapped = g.commutator(c.h, c.g);
    assert_eq!(swapped, g.inv(g.commutator(c.g, c.h)));
    assert_eq!(g.element_order(swapped), 10);
}

#[test]
fn sl2_7_trace_minus_two_modulus() {
    let g = FiniteGroup::sl2(7).unwrap();
    let report = out_plus_orbits(&g);
    let strata: Vec<_> = report.strata.iter().filter(|s| g.label(g.class(s.class_id).rep).trace() == Some(5)).collect();
    assert_eq!(strata.len(), 2);
    for s in strata {
        assert_eq!((s.m_prime, s.d_prime, s.modulus), (2, 1, 7));
        assert!(s.orbits.iter().all(|o| o.quotient_size % 7 == 0));
    }
}

#[test]
fn dihedral_modulus_collapses() {
    let g = FiniteGroup::dihedral(5).unwrap();
    let report = out_plus_orbits(&g);
    let s = report.strata.iter().find(|s| s.class_order == 5).unwrap();
    assert_eq!(s.m_prime % 5, 0);
    assert_eq!(s.modulus, 1);
}

#[test]
fn vdovin_for_a5() {
    let report = out_plus_orbits(&group("a5"));
    for s in report.strata.iter().filter(|s| s.class_order == 5) {
        let v = s.vdovin.iter().find(|v| v.ell == 5).unwrap();
        assert_eq!((v.r, v.s, v.j, v.modulus), (1, 0, 0, 5));
        assert!(s.orbits.iter().all(|o| o.quotient_size % 5 == 0));
    }
}

#[test]
fn vertical_orders_in_sl2() {
    let g = FiniteGroup::sl2(5).unwrap();
    let space = PairClassSpace::new(&g);
    for (c, _) in space.classes.iter().zip(&space.higman) {
        let tr = g.label(g.commutator(c.g, c.h)).trace().unwrap();
        if tr == 3 || tr == 0 {
            assert_eq!(cusp_automorphism_order(&g, c.g, c.h), 2);
        }
        if m_group(&g, c.g, c.h).len() == g.order() {
            assert_eq!(a_group(&g, c.g, c.h), g.center().to_vec());
        }
    }
    // n_7(−1) = 3 is odd
    let g = FiniteGroup::sl2(7).unwrap();
    let space = PairClassSpace::new(&g);
    let odd: Vec<_> = space.classes.iter().filter(|c| g.label(g.commutator(c.g, c.h)).trace() == Some(6)).collect();
    assert!(!odd.is_empty());
    assert!(odd.iter().all(|c| cusp_automorphism_order(&g, c.g, c.h) == 1));
}

#[test]
fn simple_groups_have_small_m_prime() {
    for name in ["a5", "psl2_7", "a6", "psl2_8", "psl2_11"] {
        for s in out_plus_orbits(&group(name)).strata {
            assert_eq!(2 % s.m_prime, 0, "{name}");
        }
    }
}

#[test]
fn delta_classes_match_cusps_at_5() {
    let g = FiniteGroup::sl2(5).unwrap();
    let space = PairClassSpace::new(&g);
    let cusps = ramification_profile(5).unwrap().cusps.len();
    let deltas = delta_classes(&space);
    for cid in (0..g.classes().len() as u32).filter(|&c| g.label(g.class(c).rep).trace() == Some(3) && g.class(c).size > 1) {
        assert_eq!(deltas.iter().filter(|d| d.higman_class == cid).count(), cusps);
    }
}

fn brute_markoff(coef: u64, limit: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for x in 1..=limit {
        for y in x..=limit {
            for z in y..=limit {
                if x * x + y * y + z * z == coef * x * y * z {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out.sort_by_key(|v| (v[2], v[1], v[0]));
    out
}

#[test]
fn trees_by_brute_scan() {
    let as_arrays = |s: MarkoffSurface, b: u64| -> Vec<[u64; 3]> {
        grow_tree(s, &bound(b))
            .iter()
            .map(|t| t.coords().map(|c| u64::try_from(c.clone()).unwrap()))
            .collect()
    };
    assert_eq!(as_arrays(MarkoffSurface::M, 2), brute_markoff(3, 2));
    assert_eq!(as_arrays(MarkoffSurface::M, 30), brute_markoff(3, 30));
    assert_eq!(as_arrays(MarkoffSurface::X, 9), brute_markoff(1, 9));
    assert_eq!(brute_markoff(1, 9), vec![[3, 3, 3], [3, 3, 6]]);
    assert!(grow_tree(MarkoffSurface::M, &BigUint::from(0u32)).is_empty());
}

#[test]
fn strong_approx_65_by_crt_free_scan() {
    let n = 65u64;
    let mut star_both = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if (x * x + y * y + z * z) % n == x * y * z % n {
                    let nonzero = |q: u64| [x, y, z].iter().any(|c| c % q != 0);
                    if nonzero(5) && nonzero(13) {
                        star_both += 1;
                    }
                }
            }
        }
    }
    let r = strong_approx(n).unwrap();
    assert_eq!(r.target, star_both + 1);
    assert!(r.passed);
    let r = strong_approx(5).unwrap();
    assert_eq!(r.reached, 41);
}

#[test]
fn frobenius_forbidden_by_search() {
    for (p, forbidden) in [(7u64, [0u64, 3, 4]), (11, [0, 3, 8])] {
        let third = (1..p).find(|x| 3 * x % p == 1).unwrap();
        let two_thirds = 2 * third % p;
        let mut expect = vec![0, two_thirds, p - two_thirds];
        expect.sort_unstable();
        assert_eq!(expect, forbidden.to_vec());
        let r = frobenius_residues(p, 10_000).unwrap();
        assert_eq!(r.forbidden, expect);
        assert!(forbidden.iter().all(|&f| r.histogram[f as usize] == 0));
    }
}
