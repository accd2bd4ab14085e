//! Finite groups given by permutation or 2×2 matrix generators.
//!
//! Elements are indexed by their sorted labels. Groups up to
//! [`DENSE_LIMIT`] elements get a full multiplication table; larger ones
//! multiply labels and look the product up by binary search.

use rand::{Rng, SeedableRng};
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use thiserror::Error;

pub const DEFAULT_CAP: usize = 100_000;
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator is not invertible: {0}")]
    NonInvertible(String),
    #[error("generators mix incompatible kinds or sizes")]
    Mismatch,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot read group spec {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(u32, u32, u32),
}

/// Source object of an element: a permutation of `0..d` or a matrix mod p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Perm(Vec<u32>),
    Mat { p: u64, m: [u64; 4] },
}

impl Label {
    pub fn mat(p: u64, a: i64, b: i64, c: i64, d: i64) -> Label {
        let r = |v: i64| v.rem_euclid(p as i64) as u64;
        Label::Mat { p, m: [r(a), r(b), r(c), r(d)] }
    }

    fn identity_like(&self) -> Label {
        match self {
            Label::Perm(v) => Label::Perm((0..v.len() as u32).collect()),
            Label::Mat { p, .. } => Label::Mat { p: *p, m: [1, 0, 0, 1] },
        }
    }

    /// `self ∘ other`: for permutations, apply `other` first.
    pub fn compose(&self, other: &Label) -> Label {
        match (self, other) {
            (Label::Perm(a), Label::Perm(b)) => Label::Perm(b.iter().map(|&k| a[k as usize]).collect()),
            (Label::Mat { p, m: a }, Label::Mat { m: b, .. }) => {
                let p = *p;
                Label::Mat {
                    p,
                    m: [
                        (a[0] * b[0] + a[1] * b[2]) % p,
                        (a[0] * b[1] + a[1] * b[3]) % p,
                        (a[2] * b[0] + a[3] * b[2]) % p,
                        (a[2] * b[1] + a[3] * b[3]) % p,
                    ],
                }
            }
            _ => panic!("label kinds checked at build"),
        }
    }

    pub fn inverse(&self) -> Option<Label> {
        match self {
            Label::Perm(a) => {
                let mut inv = vec![0u32; a.len()];
                for (i, &j) in a.iter().enumerate() {
                    inv[j as usize] = i as u32;
                }
                Some(Label::Perm(inv))
            }
            Label::Mat { p, m } => {
                let f = crate::arith::PrimeField::new(*p).ok()?;
                let det = f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]));
                let di = f.inv(det).ok()?;
                Some(Label::Mat {
                    p: *p,
                    m: [f.mul(m[3], di), f.mul(f.neg(m[1]), di), f.mul(f.neg(m[2]), di), f.mul(m[0], di)],
                })
            }
        }
    }

    pub fn trace(&self) -> Option<u64> {
        match self {
            Label::Mat { p, m } => Some((m[0] + m[3]) % p),
            Label::Perm(_) => None,
        }
    }

    fn is_valid(&self) -> bool {
        match self {
            Label::Perm(a) => {
                let mut seen = vec![false; a.len()];
                a.iter().all(|&j| (j as usize) < a.len() && !std::mem::replace(&mut seen[j as usize], true))
            }
            Label::Mat { .. } => self.inverse().is_some(),
        }
    }

    fn same_kind(&self, other: &Label) -> bool {
        match (self, other) {
            (Label::Perm(a), Label::Perm(b)) => a.len() == b.len(),
            (Label::Mat { p, .. }, Label::Mat { p: q, .. }) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Perm(a) => {
                let mut seen = vec![false; a.len()];
                let mut any = false;
                for s in 0..a.len() {
                    if seen[s] || a[s] as usize == s {
                        continue;
                    }
                    any = true;
                    let mut cyc = Vec::new();
                    let mut i = s;
                    while !seen[i] {
                        seen[i] = true;
                        cyc.push((i + 1).to_string());
                        i = a[i] as usize;
                    }
                    write!(f, "({})", cyc.join(" "))?;
                }
                if !any {
                    f.write_str("()")?;
                }
                Ok(())
            }
            Label::Mat { p, m } => write!(f, "[[{},{}],[{},{}]] mod {}", m[0], m[1], m[2], m[3], p),
        }
    }
}

/// Parse `(1 2 3)(4 5)` into a permutation of `0..degree` (points are 1-based).
fn parse_cycles(text: &str, line: usize) -> Result<Vec<Vec<u32>>, GroupError> {
    let err = |msg: &str| GroupError::Parse { line, msg: msg.to_string() };
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
        let close = body.find(')').ok_or_else(|| err("unclosed cycle"))?;
        let pts = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<u32>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(err(&format!("bad point {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut uniq = pts.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != pts.len() {
            return Err(err("repeated point in a cycle"));
        }
        cycles.push(pts);
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Parse a group spec: lines `perm: (1 2 3)(4 5)` or `mat p a b c d`, with
/// `#` comments. Permutations are padded to the largest point mentioned.
pub fn parse_spec(text: &str) -> Result<Vec<Label>, GroupError> {
    let mut perms = Vec::new();
    let mut mats = Vec::new();
    let mut degree = 0u32;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("perm:") {
            let cycles = parse_cycles(rest, line)?;
            degree = degree.max(cycles.iter().flatten().map(|&v| v + 1).max().unwrap_or(0));
            perms.push(cycles);
        } else if let Some(rest) = l.strip_prefix("mat") {
            let nums: Vec<i64> = rest
                .split_whitespace()
                .map(|s| s.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| GroupError::Parse { line, msg: e.to_string() })?;
            if nums.len() != 5 || nums[0] < 2 {
                return Err(GroupError::Parse { line, msg: "expected `mat p a b c d`".into() });
            }
            let p = nums[0] as u64;
            if !crate::arith::is_prime(p) {
                return Err(GroupError::Parse { line, msg: format!("{p} is not prime") });
            }
            mats.push(Label::mat(p, nums[1], nums[2], nums[3], nums[4]));
        } else {
            return Err(GroupError::Parse { line, msg: format!("unrecognized line {l:?}") });
        }
    }
    if !perms.is_empty() && !mats.is_empty() {
        return Err(GroupError::Mismatch);
    }
    let mut out = mats;
    for cycles in perms {
        let mut img: Vec<u32> = (0..degree).collect();
        for c in cycles {
            for (i, &v) in c.iter().enumerate() {
                img[v as usize] = c[(i + 1) % c.len()];
            }
        }
        out.push(Label::Perm(img));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    /// Smallest element index in the class.
    pub rep: u32,
    pub size: usize,
    /// Element order shared by the class.
    pub order: u32,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    labels: Vec<Label>,
    generators: Vec<u32>,
    dense: Option<Vec<u32>>,
    inv: Vec<u32>,
    identity: u32,
    orders: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<ConjClass>,
    /// For each element e, some t with t · rep(e) · t⁻¹ = e.
    conjugator: Vec<u32>,
    center: Vec<u32>,
}

impl FiniteGroup {
    pub fn build(generators: &[Label]) -> Result<Self, GroupError> {
        Self::build_with_cap(generators, DEFAULT_CAP)
    }

    pub fn build_with_cap(generators: &[Label], cap: usize) -> Result<Self, GroupError> {
        for g in generators {
            if !g.is_valid() {
                return Err(GroupError::NonInvertible(g.to_string()));
            }
            if !g.same_kind(&generators[0]) {
                return Err(GroupError::Mismatch);
            }
        }
        let id = generators.first().map_or(Label::Perm(Vec::new()), Label::identity_like);
        let mut seen: HashSet<Label> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut labels: Vec<Label> = seen.into_iter().collect();
        labels.sort_unstable();
        let mut g = FiniteGroup {
            labels,
            generators: Vec::new(),
            dense: None,
            inv: Vec::new(),
            identity: 0,
            orders: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            conjugator: Vec::new(),
            center: Vec::new(),
        };
        let id_label = generators.first().map_or(Label::Perm(Vec::new()), Label::identity_like);
        g.identity = g.index_of(&id_label).expect("identity present");
        g.generators = generators.iter().map(|l| g.index_of(l).expect("generator present")).collect();
        g.generators.dedup();
        g.inv = g
            .labels
            .iter()
            .map(|l| g.index_of(&l.inverse().expect("closure of invertibles")).expect("closed"))
            .collect();
        if g.order() <= DENSE_LIMIT {
            g.dense = Some(g.dense_table());
        }
        g.check_axioms()?;
        g.orders = (0..g.order() as u32).map(|x| g.compute_order(x)).collect();
        g.compute_classes();
        Ok(g)
    }

    pub fn from_spec_str(text: &str) -> Result<Self, GroupError> {
        Self::build(&parse_spec(text)?)
    }

    pub fn from_spec_file(path: impl AsRef<Path>) -> Result<Self, GroupError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::from_spec_str(&text)
    }

    /// SL2(F_p) from the two elementary matrices.
    pub fn sl2(p: u64) -> Result<Self, GroupError> {
        Self::build(&[Label::mat(p, 1, 1, 0, 1), Label::mat(p, 1, 0, 1, 1)])
    }

    /// Dihedral group of order 2k acting on Z/k by x ↦ x+1 and x ↦ −x.
    pub fn dihedral(k: u32) -> Result<Self, GroupError> {
        let rot = Label::Perm((0..k).map(|i| (i + 1) % k).collect());
        let refl = Label::Perm((0..k).map(|i| (k - i) % k).collect());
        Self::build(&[rot, refl])
    }

    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        Self::build(&[Label::Perm((0..n).map(|i| (i + 1) % n).collect())])
    }

    fn dense_table(&self) -> Vec<u32> {
        let n = self.order();
        // right multiplication by each generator
        let right: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|&gi| {
                let gl = &self.labels[gi as usize];
                self.labels.iter().map(|l| self.index_of(&l.compose(gl)).expect("closed")).collect()
            })
            .collect();
        // spanning tree: each non-identity j = parent · generator
        let mut parent = vec![(u32::MAX, 0usize); n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for (k, r) in right.iter().enumerate() {
                let y = r[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = (x, k);
                    queue.push_back(y);
                }
            }
        }
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            let row = &mut table[i * n..(i + 1) * n];
            row[self.identity as usize] = i as u32;
            for &j in order.iter().skip(1) {
                let (pj, k) = parent[j as usize];
                row[j as usize] = right[k][row[pj as usize] as usize];
            }
        }
        table
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order() as u32;
        for x in 0..n {
            if self.mul(x, self.inv[x as usize]) != self.identity || self.mul(self.identity, x) != x {
                return Err(GroupError::NonInvertible(self.labels[x as usize].to_string()));
            }
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x6d61726b);
        for _ in 0..256.min(n as usize * n as usize) {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(GroupError::NotAssociative(a, b, c));
            }
        }
        Ok(())
    }

    fn compute_order(&self, x: u32) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut conjugator = vec![self.identity; n];
        let mut classes = Vec::new();
        for start in 0..n as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[start as usize] = id;
            let mut size = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(e) = queue.pop_front() {
                for &g in &self.generators {
                    let f = self.mul(self.mul(g, e), self.inv[g as usize]);
                    if class_of[f as usize] == u32::MAX {
                        class_of[f as usize] = id;
                        conjugator[f as usize] = self.mul(g, conjugator[e as usize]);
                        size += 1;
                        queue.push_back(f);
                    }
                }
            }
            classes.push(ConjClass { rep: start, size, order: self.orders[start as usize] });
        }
        self.center = (0..n as u32).filter(|&x| classes[class_of[x as usize] as usize].size == 1).collect();
        self.class_of = class_of;
        self.classes = classes;
        self.conjugator = conjugator;
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn label(&self, x: u32) -> &Label {
        &self.labels[x as usize]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, l: &Label) -> Option<u32> {
        self.labels.binary_search(l).ok().map(|i| i as u32)
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.dense {
            Some(t) => t[a as usize * self.labels.len() + b as usize],
            None => self
                .index_of(&self.labels[a as usize].compose(&self.labels[b as usize]))
                .expect("group is closed"),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let e = e % self.orders[a as usize] as u64;
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// g h g⁻¹.
    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// [g, h] = g h g⁻¹ h⁻¹.
    pub fn commutator(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))
    }

    pub fn element_order(&self, x: u32) -> u32 {
        self.orders[x as usize]
    }

    pub fn class_of(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class(&self, id: u32) -> &ConjClass {
        &self.classes[id as usize]
    }

    /// Some t with t · x · t⁻¹ equal to the class representative of x.
    pub fn to_rep(&self, x: u32) -> u32 {
        self.inv(self.conjugator[x as usize])
    }

    pub fn class_members(&self, id: u32) -> Vec<u32> {
        (0..self.order() as u32).filter(|&x| self.class_of[x as usize] == id).collect()
    }

    pub fn center(&self) -> &[u32] {
        &self.center
    }

    pub fn centralizer(&self, g: u32) -> Vec<u32> {
        (0..self.order() as u32).filter(|&x| self.mul(x, g) == self.mul(g, x)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center.len() == self.order()
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup_closure(&self, gens: &[u32]) -> Vec<u32> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut out = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn generated_order(&self, gens: &[u32]) -> usize {
        self.subgroup_closure(gens).len()
    }

    pub fn is_generating_pair(&self, g: u32, h: u32) -> bool {
        self.generated_order(&[g, h]) == self.order()
    }

    /// Sorted elements of the cyclic subgroup ⟨x⟩.
    pub fn cyclic_subgroup(&self, x: u32) -> Vec<u32> {
        self.subgroup_closure(&[x])
    }

    /// All normal subgroups, each as a sorted element list, ordered by size.
    pub fn normal_subgroups(&self) -> Vec<Vec<u32>> {
        let closures: Vec<Vec<u32>> = (0..self.classes.len() as u32)
            .map(|c| self.subgroup_closure(&self.class_members(c)))
            .collect();
        let mut found: Vec<Vec<u32>> = Vec::new();
        let mut queue: VecDeque<Vec<u32>> = closures.iter().cloned().collect();
        while let Some(s) = queue.pop_front() {
            if found.contains(&s) {
                continue;
            }
            for c in &closures {
                if c.iter().all(|x| s.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = s.clone();
                gens.extend_from_slice(c);
                queue.push_back(self.subgroup_closure(&gens));
            }
            found.push(s);
        }
        found.sort_by_key(|s| (s.len(), s.clone()));
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::build(&[]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.center().len(), 1);
    }

    #[test]
    fn sl2_5_basics() {
        let g = FiniteGroup::sl2(5).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.center().len(), 2);
        let neg = g.index_of(&Label::mat(5, -1, 0, 0, -1)).unwrap();
        assert!(g.center().contains(&neg));
        // [[-1,1],[0,-1]] has trace -2 and is not central
        let u = g.index_of(&Label::mat(5, -1, 1, 0, -1)).unwrap();
        assert_eq!(g.centralizer(u).len(), 10);
    }

    #[test]
    fn unipotent_order() {
        let g = FiniteGroup::sl2(7).unwrap();
        assert_eq!(g.order(), 336);
        assert_eq!(g.element_order(g.index_of(&Label::mat(7, 1, 1, 0, 1)).unwrap()), 7);
    }

    #[test]
    fn dihedral_from_spec() {
        let g = FiniteGroup::from_spec_str("perm: (1 2 3 4 5)\nperm: (2 5)(3 4)\n").unwrap();
        assert_eq!(g.order(), 10);
    }

    #[test]
    fn generating_pairs() {
        let g = FiniteGroup::sl2(5).unwrap();
        assert!(!g.is_generating_pair(g.identity(), g.identity()));
        let a = g.index_of(&Label::mat(5, 1, 1, 0, 1)).unwrap();
        let b = g.index_of(&Label::mat(5, 1, 0, 1, 1)).unwrap();
        assert!(g.is_generating_pair(a, b));
        let e8 = FiniteGroup::from_spec_str("perm: (1 2)\nperm: (3 4)\nperm: (5 6)").unwrap();
        for x in 0..8 {
            for y in 0..8 {
                assert!(!e8.is_generating_pair(x, y));
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_spec("perm: (1 2"), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_spec("mat 4 1 0 0 1"), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_spec("hello"), Err(GroupError::Parse { .. })));
        assert!(matches!(FiniteGroup::build(&[Label::mat(5, 1, 1, 1, 1)]), Err(GroupError::NonInvertible(_))));
        assert!(matches!(FiniteGroup::build_with_cap(&[Label::mat(7, 1, 1, 0, 1), Label::mat(7, 1, 0, 1, 1)], 100), Err(GroupError::CapExceeded(100))));
    }

    #[test]
    fn sparse_mode_agrees_with_dense() {
        // SL2(17) has 4896 elements, above the dense limit.
        let g = FiniteGroup::sl2(17).unwrap();
        assert!(!g.is_dense());
        assert_eq!(g.order(), 4896);
        assert_eq!(g.center().len(), 2);
        let a = g.index_of(&Label::mat(17, 1, 1, 0, 1)).unwrap();
        assert_eq!(g.element_order(a), 17);
    }

    #[test]
    fn normal_subgroups_of_small_groups() {
        let s4 = FiniteGroup::from_spec_str("perm: (1 2 3 4)\nperm: (1 2)").unwrap();
        let sizes: Vec<usize> = s4.normal_subgroups().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 12, 24]);
        let a5 = FiniteGroup::from_spec_str("perm: (1 2 3 4 5)\nperm: (1 2 3)").unwrap();
        let sizes: Vec<usize> = a5.normal_subgroups().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 60]);
    }
}
