//! Command-line front end. [`dispatch`] returns the exit code and the report
//! instead of printing, so it can be driven from tests.

use crate::action::{ActionError, Generator, GeneratorSet, OrbitDecomposition};
use crate::arith::{ArithError, PrimeField};
use crate::cache::Cache;
use crate::congruence::{self, CongruenceError, CongruenceVerdict};
use crate::cusp_comb::{self, CuspCrosscheck, CuspRecord, DeltaClass};
use crate::groups::{FiniteGroup, GroupError};
use crate::markoff_z::{self, MarkoffError, MarkoffSurface};
use crate::modular::{self, ModularError};
use crate::nielsen::{self, CrosscheckReport, NielsenError, NielsenOrbitReport, PairClassSpace};
use crate::surface::{star_count_formula, Subset, SurfaceError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use std::path::PathBuf;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "MARKOFF_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "markoff", version, about = "Markoff surfaces mod p, Nielsen classes and cusp data")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; defaults to csv for `congruence`, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Cache directory for point tables and orbits (MARKOFF_CACHE_DIR wins).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Refuse surface computations above this prime.
    #[arg(long, global = true, default_value_t = 3000)]
    pub p_max: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GensArg {
    Gamma,
    AutPlus,
}

impl GensArg {
    fn set(self) -> GeneratorSet {
        match self {
            GensArg::Gamma => GeneratorSet::gamma(),
            GensArg::AutPlus => GeneratorSet::aut_plus(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubsetArg {
    Star,
    All,
    NonOrigin,
}

impl From<SubsetArg> for Subset {
    fn from(s: SubsetArg) -> Self {
        match s {
            SubsetArg::Star => Subset::Star,
            SubsetArg::All => Subset::All,
            SubsetArg::NonOrigin => Subset::NonOrigin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceArg {
    M,
    X,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GroupArg {
    /// Group spec file (`perm:` / `mat:` generator lines).
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// SL2(F_p) instead of a spec file.
    #[arg(long)]
    pub sl2: Option<u64>,
    /// Dihedral group of order 2k.
    #[arg(long)]
    pub dihedral: Option<u32>,
}

impl GroupArg {
    fn build(&self) -> Result<FiniteGroup, GroupError> {
        match (&self.group, self.sl2, self.dihedral) {
            (Some(path), _, _) => FiniteGroup::from_spec_file(path),
            (_, Some(p), _) => FiniteGroup::sl2(p),
            (_, _, Some(k)) => FiniteGroup::dihedral(k),
            _ => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit decomposition of a generator set on X_t(p).
    Orbits {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2)]
        t: i64,
        #[arg(long, value_enum, default_value = "gamma")]
        gens: GensArg,
        #[arg(long, value_enum, default_value = "star")]
        subset: SubsetArg,
    },
    /// Ramification data and genus of the curve at trace −2.
    Genus {
        #[arg(long)]
        p: u64,
    },
    /// Cusp records (k, M, A, vertical order) per δ-class of a group.
    Cusps {
        #[command(flatten)]
        group: GroupArg,
    },
    /// Orbit-size congruence verdicts on X*_t(p).
    Congruence {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all_t")]
        t: Option<i64>,
        /// Every t ≠ 2.
        #[arg(long)]
        all_t: bool,
        #[arg(long, value_enum, default_value = "gamma")]
        gens: GensArg,
    },
    /// Out⁺ orbits on generating-pair classes with the combinatorial congruence.
    Nielsen {
        #[command(flatten)]
        group: GroupArg,
        /// Keep only Higman classes of this element order.
        #[arg(long)]
        higman_order: Option<u32>,
    },
    /// δ-classes: pairs up to conjugation and (u, h) ↦ (u, uᵏh).
    Delta {
        #[command(flatten)]
        group: GroupArg,
    },
    /// Integral Markoff tree up to a bound, with descent checks.
    Tree {
        #[arg(long)]
        bound: BigUint,
        #[arg(long, value_enum, default_value = "m")]
        surface: SurfaceArg,
    },
    /// Coverage of 𝕏(ℤ/n) by reductions of integral points.
    StrongApprox {
        #[arg(long)]
        n: u64,
    },
    /// Residues of Markoff numbers mod p.
    Frobenius {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Trace coordinates against generating pairs of SL2(F_p).
    Crosscheck {
        #[arg(long)]
        p: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Orbits { .. } => "orbits",
            Command::Genus { .. } => "genus",
            Command::Cusps { .. } => "cusps",
            Command::Congruence { .. } => "congruence",
            Command::Nielsen { .. } => "nielsen",
            Command::Delta { .. } => "delta",
            Command::Tree { .. } => "tree",
            Command::StrongApprox { .. } => "strong-approx",
            Command::Frobenius { .. } => "frobenius",
            Command::Crosscheck { .. } => "crosscheck",
        }
    }
}

/// A failure before any verdict: bad input or a broken invariant.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Falsified(String),
}

trait Classify: std::fmt::Display {
    fn falsifies(&self) -> bool;

    fn failure(self) -> Failure
    where
        Self: Sized,
    {
        if self.falsifies() {
            Failure::Falsified(self.to_string())
        } else {
            Failure::Usage(self.to_string())
        }
    }
}

impl Classify for ArithError {
    fn falsifies(&self) -> bool {
        false
    }
}

impl Classify for SurfaceError {
    fn falsifies(&self) -> bool {
        matches!(self, SurfaceError::StarCountMismatch { .. } | SurfaceError::NotOnSurface { .. })
    }
}

impl Classify for ActionError {
    fn falsifies(&self) -> bool {
        match self {
            ActionError::Surface(e) => e.falsifies(),
            ActionError::Escapes { .. } | ActionError::FreenessViolation { .. } => true,
            _ => false,
        }
    }
}

impl Classify for ModularError {
    fn falsifies(&self) -> bool {
        match self {
            ModularError::Surface(e) => e.falsifies(),
            ModularError::Action(e) => e.falsifies(),
            ModularError::NonIntegral { .. }
            | ModularError::OddRamification(_)
            | ModularError::GenusMismatch { .. }
            | ModularError::SignGroupNotFree(..) => true,
            _ => false,
        }
    }
}

impl Classify for CongruenceError {
    fn falsifies(&self) -> bool {
        match self {
            CongruenceError::Surface(e) => e.falsifies(),
            CongruenceError::Action(e) => e.falsifies(),
            CongruenceError::CentralizerMismatch { .. } => true,
            _ => false,
        }
    }
}

impl Classify for GroupError {
    fn falsifies(&self) -> bool {
        false
    }
}

impl Classify for NielsenError {
    fn falsifies(&self) -> bool {
        match self {
            NielsenError::Surface(e) => e.falsifies(),
            NielsenError::Action(e) => e.falsifies(),
            NielsenError::Crosscheck { .. } => true,
            _ => false,
        }
    }
}

impl Classify for MarkoffError {
    fn falsifies(&self) -> bool {
        match self {
            MarkoffError::Surface(e) => e.falsifies(),
            MarkoffError::Stalled(_) => true,
            _ => false,
        }
    }
}

macro_rules! impl_from_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                e.failure()
            }
        }
    )*};
}

impl_from_failure!(ArithError, SurfaceError, ActionError, ModularError, CongruenceError, GroupError, NielsenError, MarkoffError);

/// Tabular view of a report for csv and table output.
#[derive(Debug, Clone, Default)]
pub struct Rows {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool_version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator_set_id: Option<u64>,
    passed: bool,
    #[serde(flatten)]
    report: T,
}

/// What a command produced: verdict, JSON body, tabular view.
pub struct Outcome {
    pub passed: bool,
    pub json: serde_json::Value,
    pub rows: Rows,
}

struct Meta {
    command: &'static str,
    p: Option<u64>,
    t: Option<u64>,
    generator_set_id: Option<u64>,
}

fn outcome<T: Serialize>(meta: Meta, passed: bool, report: T, rows: Rows) -> Outcome {
    let env = Envelope {
        tool_version: TOOL_VERSION,
        command: meta.command,
        p: meta.p,
        t: meta.t,
        generator_set_id: meta.generator_set_id,
        passed,
        report,
    };
    Outcome { passed, json: serde_json::to_value(env).expect("reports serialize"), rows }
}

#[derive(Serialize)]
struct OrbitRow {
    representative: String,
    size: u64,
}

#[derive(Serialize)]
struct OrbitsReport {
    subset: &'static str,
    generator_set: String,
    points: usize,
    orbit_count: usize,
    transitive: bool,
    /// p(p ± 3), present at t = −2.
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_star_count: Option<u64>,
    orbits: Vec<OrbitRow>,
}

fn subset_name(s: Subset) -> &'static str {
    match s {
        Subset::All => "all",
        Subset::Star => "star",
        Subset::NonOrigin => "non_origin",
    }
}

fn check_p(p: u64, cfg: &RunConfig) -> Result<(), Failure> {
    if p > cfg.p_max {
        return Err(Failure::Usage(format!("p = {p} is above --p-max {}", cfg.p_max)));
    }
    PrimeField::new(p)?;
    if p == 2 {
        return Err(ArithError::EvenPrime.into());
    }
    Ok(())
}

fn run_orbits(cfg: &RunConfig, cache: &Cache, p: u64, t: i64, gens: GensArg, subset: SubsetArg) -> Result<Outcome, Failure> {
    check_p(p, cfg)?;
    let table = cache.table(p, t)?;
    let gens = gens.set();
    let subset: Subset = subset.into();
    let dec: OrbitDecomposition = cache.orbits(&table, &gens, subset)?;
    let tr = table.t();
    let expected = (tr == p - 2).then(|| star_count_formula(p)).transpose()?;
    // transitivity at t = −2 is verified below 3000
    let passed = match expected {
        Some(e) if subset == Subset::Star && p < markoff_z::VERIFIED_PRIME_BOUND => {
            table.star_len() as u64 == e && dec.is_transitive()
        }
        _ => true,
    };
    let orbits: Vec<OrbitRow> = (0..dec.len())
        .map(|i| OrbitRow { representative: dec.representative_point(i).to_string(), size: dec.orbits[i].size })
        .collect();
    let rows = Rows {
        header: vec!["representative", "size"],
        rows: orbits.iter().map(|o| vec![o.representative.clone(), o.size.to_string()]).collect(),
    };
    let report = OrbitsReport {
        subset: subset_name(subset),
        generator_set: gens.name(),
        points: table.subset_len(subset),
        orbit_count: dec.len(),
        transitive: dec.is_transitive(),
        expected_star_count: expected,
        orbits,
    };
    let meta = Meta { command: "orbits", p: Some(p), t: Some(tr), generator_set_id: Some(gens.id()) };
    Ok(outcome(meta, passed, report, rows))
}

fn run_genus(cfg: &RunConfig, cache: &Cache, p: u64) -> Result<Outcome, Failure> {
    check_p(p, cfg)?;
    if p < 5 {
        return Err(ModularError::SmallPrime(p).into());
    }
    let table = cache.table(p, -2)?;
    let report = modular::genus_from_table(&table)?;
    let rows = Rows {
        header: vec!["p", "degree", "fiber0", "fiber1728", "cusps", "genus_rh", "genus_closed", "epsilon"],
        rows: vec![vec![
            p.to_string(),
            report.degree.to_string(),
            report.fibers.j0.to_string(),
            report.fibers.j1728.to_string(),
            report.fibers.infinity.to_string(),
            report.genus_rh.map_or("-".into(), |g| g.to_string()),
            report.genus_closed.to_string(),
            report.epsilon.to_string(),
        ]],
    };
    let meta = Meta { command: "genus", p: Some(p), t: Some(p - 2), generator_set_id: Some(GeneratorSet::aut_plus().id()) };
    Ok(outcome(meta, true, report, rows))
}

#[derive(Serialize)]
struct CongruenceReport {
    generator_set: String,
    verdicts: Vec<CongruenceVerdict>,
}

fn run_congruence(cfg: &RunConfig, cache: &Cache, p: u64, t: Option<i64>, all_t: bool, gens: GensArg) -> Result<Outcome, Failure> {
    check_p(p, cfg)?;
    let ts: Vec<i64> = match (t, all_t) {
        (Some(t), _) => vec![t],
        (None, true) => (0..p as i64).filter(|&t| t != 2 % p as i64).collect(),
        (None, false) => return Err(Failure::Usage("congruence needs --t or --all-t".into())),
    };
    let gens = gens.set();
    let mut verdicts = Vec::new();
    for t in &ts {
        let table = cache.table(p, *t)?;
        if table.t() == 2 % p {
            return Err(CongruenceError::CayleyCubic.failure());
        }
        verdicts.extend(congruence::verify_orbits(&cache.orbits(&table, &gens, Subset::Star)?)?);
    }
    let passed = verdicts.iter().all(|v| v.passed);
    let rows = Rows {
        header: vec!["p", "t", "representative", "orbit_size", "rule", "ell", "modulus", "side", "passed"],
        rows: verdicts
            .iter()
            .map(|v| {
                vec![
                    v.p.to_string(),
                    v.t.to_string(),
                    v.representative.to_string(),
                    v.orbit_size.to_string(),
                    format!("{:?}", v.rule),
                    v.ell.map_or(String::new(), |l| l.to_string()),
                    v.modulus.to_string(),
                    format!("{:?}", v.side),
                    v.passed.to_string(),
                ]
            })
            .collect(),
    };
    let t_meta = (ts.len() == 1).then(|| PrimeField::new(p).map(|f| f.from_i64(ts[0]))).transpose()?;
    let meta = Meta { command: "congruence", p: Some(p), t: t_meta, generator_set_id: Some(gens.id()) };
    Ok(outcome(meta, passed, CongruenceReport { generator_set: gens.name(), verdicts }, rows))
}

fn run_nielsen(group: &GroupArg, higman_order: Option<u32>) -> Result<Outcome, Failure> {
    let g = group.build()?;
    let mut report: NielsenOrbitReport = nielsen::out_plus_orbits(&g);
    if let Some(k) = higman_order {
        report.strata.retain(|s| s.class_order == k);
    }
    let rows = Rows {
        header: vec!["higman_class", "class_order", "orbit_size", "quotient_size", "modulus", "m_prime", "d_prime", "passed"],
        rows: report
            .strata
            .iter()
            .flat_map(|s| {
                s.orbits.iter().map(move |o| {
                    vec![
                        s.class_id.to_string(),
                        s.class_order.to_string(),
                        o.size.to_string(),
                        o.quotient_size.to_string(),
                        s.modulus.to_string(),
                        s.m_prime.to_string(),
                        s.d_prime.to_string(),
                        s.passed().to_string(),
                    ]
                })
            })
            .collect(),
    };
    let meta = Meta { command: "nielsen", p: None, t: None, generator_set_id: None };
    Ok(outcome(meta, report.passed(), report, rows))
}

#[derive(Serialize)]
struct CuspsReport {
    group_order: usize,
    center_order: usize,
    /// |A|·k = |Z|·|u| on every record.
    exact_sequence_holds: bool,
    records: Vec<CuspRecord>,
}

fn run_cusps(group: &GroupArg) -> Result<Outcome, Failure> {
    let g = group.build()?;
    let records = cusp_comb::cusp_records(&g);
    let z = g.center().len();
    let exact = records.iter().all(|r| r.a_order * r.k_uh as usize == z * g.element_order(r.u) as usize);
    let rows = Rows {
        header: vec!["u", "h", "width", "higman_class", "m_order", "k_uh", "a_order", "vertical_order"],
        rows: records
            .iter()
            .map(|r| {
                [r.u as u64, r.h as u64, r.width, r.higman_class as u64, r.m_order as u64, r.k_uh as u64, r.a_order as u64, r.vertical_order]
                    .iter()
                    .map(u64::to_string)
                    .collect()
            })
            .collect(),
    };
    let report = CuspsReport { group_order: g.order(), center_order: z, exact_sequence_holds: exact, records };
    Ok(outcome(Meta { command: "cusps", p: None, t: None, generator_set_id: None }, exact, report, rows))
}

#[derive(Serialize)]
struct DeltaReport {
    group_order: usize,
    pair_classes: usize,
    /// [u⁻¹, h⁻¹] and [u, h] are conjugate for every class.
    higman_compatible: bool,
    classes: Vec<DeltaClass>,
}

fn run_delta(group: &GroupArg) -> Result<Outcome, Failure> {
    let g = group.build()?;
    let space = PairClassSpace::new(&g);
    let classes = cusp_comb::delta_classes(&space);
    let compatible = space.classes.iter().zip(&space.higman).all(|(c, &h)| {
        g.class_of(g.commutator(g.inv(c.g), g.inv(c.h))) == h
    });
    let rows = Rows {
        header: vec!["u", "h", "width", "higman_class"],
        rows: classes
            .iter()
            .map(|d| vec![d.representative.g.to_string(), d.representative.h.to_string(), d.width.to_string(), d.higman_class.to_string()])
            .collect(),
    };
    let report = DeltaReport { group_order: g.order(), pair_classes: space.len(), higman_compatible: compatible, classes };
    Ok(outcome(Meta { command: "delta", p: None, t: None, generator_set_id: None }, compatible, report, rows))
}

#[derive(Serialize)]
struct TreeReport {
    surface: MarkoffSurface,
    bound: String,
    count: usize,
    /// Every triple descends to the root and the path replays.
    descents_verified: bool,
    triples: Vec<markoff_z::MarkoffTriple>,
}

fn run_tree(bound: &BigUint, surface: SurfaceArg) -> Result<Outcome, Failure> {
    let surface = match surface {
        SurfaceArg::M => MarkoffSurface::M,
        SurfaceArg::X => MarkoffSurface::X,
    };
    let triples = markoff_z::grow_tree(surface, bound);
    let mut ok = true;
    for t in &triples {
        ok &= markoff_z::descend(t)?.replay();
    }
    let rows = Rows {
        header: vec!["x", "y", "z"],
        rows: triples.iter().map(|t| t.coords().iter().map(|c| c.to_string()).collect()).collect(),
    };
    let report = TreeReport { surface, bound: bound.to_string(), count: triples.len(), descents_verified: ok, triples };
    Ok(outcome(Meta { command: "tree", p: None, t: None, generator_set_id: Some(GeneratorSet::gamma().id()) }, ok, report, rows))
}

fn run_strong_approx(n: u64) -> Result<Outcome, Failure> {
    let r = markoff_z::strong_approx(n)?;
    let rows = Rows {
        header: vec!["n", "reached", "target", "total_points", "mixed_points", "unconditional", "passed"],
        rows: vec![vec![
            r.n.to_string(),
            r.reached.to_string(),
            r.target.to_string(),
            r.total_points.to_string(),
            r.mixed_points.to_string(),
            r.unconditional.to_string(),
            r.passed.to_string(),
        ]],
    };
    let p = (r.primes.len() == 1).then_some(n);
    let meta = Meta { command: "strong-approx", p, t: p.map(|p| p - 2), generator_set_id: Some(r.generator_set_id) };
    Ok(outcome(meta, r.passed, r.clone(), rows))
}

fn run_frobenius(p: u64, bound: u64) -> Result<Outcome, Failure> {
    let r = markoff_z::frobenius_residues(p, bound)?;
    let rows = Rows {
        header: vec!["residue", "count", "forbidden"],
        rows: r
            .histogram
            .iter()
            .enumerate()
            .map(|(i, c)| vec![i.to_string(), c.to_string(), r.forbidden.contains(&(i as u64)).to_string()])
            .collect(),
    };
    let meta = Meta { command: "frobenius", p: Some(p), t: None, generator_set_id: None };
    Ok(outcome(meta, r.passed, r.clone(), rows))
}

#[derive(Serialize)]
struct CrosscheckBoth {
    pairs: CrosscheckReport,
    cusps: CuspCrosscheck,
}

fn run_crosscheck(p: u64) -> Result<Outcome, Failure> {
    let pairs = nielsen::sl2_crosscheck(p)?;
    let cusps = cusp_comb::cusp_crosscheck(p)?;
    let passed = pairs.passed() && cusps.passed();
    let rows = Rows {
        header: vec!["p", "gl2_classes", "star_points", "bijective", "intertwines_rot1", "cusps_group", "cusps_surface", "cusps_closed"],
        rows: vec![vec![
            p.to_string(),
            pairs.gl2_classes.to_string(),
            pairs.star_points.to_string(),
            pairs.bijective.to_string(),
            pairs.intertwines_rot1.to_string(),
            cusps.group_side.len().to_string(),
            cusps.surface_side.len().to_string(),
            cusps.closed_form.to_string(),
        ]],
    };
    let meta = Meta { command: "crosscheck", p: Some(p), t: Some(p - 2), generator_set_id: Some(GeneratorSet::single(Generator::Rot1).id()) };
    Ok(outcome(meta, passed, CrosscheckBoth { pairs, cusps }, rows))
}

/// Cache directory: the environment variable wins over `--cache`.
pub fn cache_dir(cfg: &RunConfig) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from).or_else(|| cfg.cache.clone())
}

fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let cache = Cache::new(cache_dir(cfg));
    match &cfg.command {
        Command::Orbits { p, t, gens, subset } => run_orbits(cfg, &cache, *p, *t, *gens, *subset),
        Command::Genus { p } => run_genus(cfg, &cache, *p),
        Command::Cusps { group } => run_cusps(group),
        Command::Congruence { p, t, all_t, gens } => run_congruence(cfg, &cache, *p, *t, *all_t, *gens),
        Command::Nielsen { group, higman_order } => run_nielsen(group, *higman_order),
        Command::Delta { group } => run_delta(group),
        Command::Tree { bound, surface } => run_tree(bound, *surface),
        Command::StrongApprox { n } => run_strong_approx(*n),
        Command::Frobenius { p, bound } => run_frobenius(*p, *bound),
        Command::Crosscheck { p } => run_crosscheck(*p),
    }
}

pub fn render(format: Format, out: &Outcome) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.rows.header).expect("in-memory write");
            for r in &out.rows.rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Table => {
            let mut widths: Vec<usize> = out.rows.header.iter().map(|h| h.chars().count()).collect();
            for r in &out.rows.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string() + "\n"
            };
            let mut s = line(out.rows.header.clone());
            for r in &out.rows.rows {
                s += &line(r.iter().map(String::as_str).collect());
            }
            s
        }
    }
}

/// Runs a parsed configuration; returns (exit code, stdout text).
pub fn dispatch(cfg: &RunConfig) -> (i32, String) {
    let work = || run(cfg);
    let result = match cfg.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => return (EXIT_USAGE, format!("error: cannot build thread pool: {e}\n")),
        },
        None => work(),
    };
    let default = if matches!(cfg.command, Command::Congruence { .. }) { Format::Csv } else { Format::Json };
    match result {
        Ok(out) => {
            let code = if out.passed { EXIT_OK } else { EXIT_FALSIFIED };
            (code, render(cfg.format.unwrap_or(default), &out))
        }
        Err(Failure::Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
        Err(Failure::Falsified(msg)) => {
            let body = serde_json::json!({
                "tool_version": TOOL_VERSION,
                "command": cfg.command.name(),
                "passed": false,
                "falsified": msg,
                "reproduce": std::env::args().collect::<Vec<_>>().join(" "),
            });
            (EXIT_FALSIFIED, serde_json::to_string_pretty(&body).expect("json") + "\n")
        }
    }
}

/// Parses `args` (program name first) and dispatches. Help and version exit
/// 0; every other parse error exits 1.
pub fn main_with_args<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => dispatch(&cfg),
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            (code, e.render().to_string())
        }
    }
}
