//! Named verification suites producing report records.
//!
//! Each suite expands its scope into items, runs them on a worker pool
//! (results kept in item order) with a fresh budget per item, and turns
//! budget exhaustion or inapplicability into verdicts.

use std::ops::ControlFlow;
use std::path::PathBuf;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::{
    block_lift, block_lift_hom, case_by_case_audit, central_step_audit, demushkin_descent,
    easy_vanishing_drill, filtration_length, structure_audit, twisting_audit, SignPattern,
};
use crate::cache::Cache;
use crate::cochain::{demushkin_check, Cochain, Cohomology};
use crate::config::RunConfig;
use crate::embedding::{dwyer_base, lift_solvers, unitri_solvers, EmbeddingProblem, UnitriSolver};
use crate::error::{Error, Result};
use crate::group::{load_group, FiniteGroup, GroupHom};
use crate::massey::{
    consecutive_cups_zero, for_each_tuple, lift_problem, massey_strategies, MasseyQuery,
    EXHAUSTIVE_MAX_N, EXHAUSTIVE_MAX_ORDER,
};
use crate::registry::{Named, Registry};
use crate::report::{Record, Verdict};
use crate::search::Budget;
use crate::unitri::UnitriQuotient;

/// Restrictions from the command line; `None` means the suite default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    pub group: Option<String>,
    pub p: Option<u8>,
    pub n: Option<usize>,
}

pub struct SuiteContext {
    pub config: RunConfig,
    pub scope: Scope,
    pub cache: Cache,
    /// Directory against which group file paths are resolved.
    pub base_dir: Option<PathBuf>,
}

impl SuiteContext {
    pub fn new(config: RunConfig, scope: Scope) -> Self {
        let cache = Cache::from_dir(config.cache_dir());
        SuiteContext {
            config,
            scope,
            cache,
            base_dir: None,
        }
    }

    fn cohomology(&self, group: &str, p: u8) -> Result<Arc<Cohomology>> {
        let g = load_group(group, self.base_dir.as_deref())?;
        if g.order() > self.config.max_group_order {
            return Err(Error::size(
                "group order",
                g.order() as u128,
                self.config.max_group_order as u128,
            ));
        }
        Ok(Arc::new(Cohomology::compute(Arc::new(g), p)?))
    }

    /// `(group, p)` pairs: the scope if given, else `defaults`.
    fn groups(&self, defaults: &[(&str, u8)]) -> Vec<(String, u8)> {
        match (&self.scope.group, self.scope.p) {
            (Some(g), Some(p)) => vec![(g.clone(), p)],
            (Some(g), None) => {
                let ps: Vec<u8> = defaults.iter().map(|d| d.1).collect();
                let p = ps.first().copied().unwrap_or(2);
                vec![(g.clone(), p)]
            }
            (None, Some(p)) => defaults
                .iter()
                .filter(|d| d.1 == p)
                .map(|(g, p)| (g.to_string(), *p))
                .collect(),
            (None, None) => defaults.iter().map(|(g, p)| (g.to_string(), *p)).collect(),
        }
    }

    fn ns(&self, defaults: &[usize]) -> Vec<usize> {
        match self.scope.n {
            Some(n) => vec![n],
            None => defaults.to_vec(),
        }
    }

    fn unitri_solver(&self) -> Result<Box<dyn UnitriSolver>> {
        let name = self.config.unitri_solver.as_str();
        unitri_solvers().get(name)?;
        Ok(match name {
            "fiber" => Box::new(crate::embedding::UnitriFiberSolver),
            _ => Box::new(crate::embedding::LayeredSolver),
        })
    }
}

pub trait VerifySuite: Named + Send + Sync {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>>;
}

/// One unit of work: `run` yields a verdict and details.
struct Item<T> {
    label: String,
    /// Group fingerprint and modulus for the cache key.
    key: Option<(String, u8)>,
    data: T,
}

type Outcome = (Verdict, serde_json::Value);

fn run_items<T: Sync>(
    suite: &'static str,
    ctx: &SuiteContext,
    items: Vec<Item<T>>,
    run: impl Fn(&T, &mut Budget) -> Result<Outcome> + Sync,
) -> Result<Vec<Record>> {
    let one = |item: &Item<T>| -> Result<Record> {
        let compute = || {
            let mut budget = Budget::new(ctx.config.budget);
            let (verdict, details) = match run(&item.data, &mut budget) {
                Ok(v) => v,
                Err(e) => match Verdict::from_error(&e) {
                    Some(v) => (v, serde_json::Value::Null),
                    None => return Err(e),
                },
            };
            Ok(Record::new(suite, item.label.clone(), verdict, details))
        };
        match &item.key {
            Some((fp, p)) if ctx.cache.is_enabled() => {
                let op = format!(
                    "verify/{suite}/{}/budget={}/seed={}/{}/{}",
                    item.label,
                    ctx.config.budget,
                    ctx.config.seed,
                    ctx.config.unitri_solver,
                    ctx.config.lift_solver
                );
                ctx.cache.get_or_compute(&Cache::key(fp, *p, &op), compute)
            }
            _ => compute(),
        }
    };
    if ctx.config.jobs <= 1 {
        return items.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.config.jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| items.par_iter().map(one).collect())
}

fn item_seed(seed: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

fn tuples(coh: &Arc<Cohomology>, n: usize) -> Result<Vec<MasseyQuery>> {
    let mut out = Vec::new();
    for_each_tuple(coh, n, &mut |q| {
        out.push(q);
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(out)
}

fn tuple_label(coh: &Cohomology, q: &MasseyQuery) -> String {
    let coords: Vec<String> = q
        .coords()
        .iter()
        .map(|c| c.iter().map(|v| v.to_string()).collect::<String>())
        .collect();
    format!(
        "{} p={} n={} ({})",
        coh.group().label(),
        coh.modulus(),
        q.n(),
        coords.join(",")
    )
}

fn key(coh: &Cohomology) -> Option<(String, u8)> {
    Some((coh.group().fingerprint(), coh.modulus()))
}

/// `δδ = 0` and the Leibniz rule on seeded random cochains.
pub struct ComplexSuite;

impl Named for ComplexSuite {
    fn name(&self) -> &'static str {
        "complex"
    }
    fn describe(&self) -> &'static str {
        "δ∘δ = 0 and δ(a∪b) = δa∪b + (−1)^r a∪δb on 100 random cochains per degree"
    }
}

pub const COMPLEX_SAMPLES: usize = 100;

fn complex_item(coh: &Cohomology, degree: usize, seed: u64) -> Result<Outcome> {
    use rand::Rng;
    let g = coh.group().clone();
    let p = coh.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut dd_checked, mut leibniz_checked) = (0usize, 0usize);
    for i in 0..COMPLEX_SAMPLES {
        let a = Cochain::random(g.clone(), p, degree, &mut rng)?;
        if degree + 2 <= crate::cochain::MAX_DEGREE {
            if !a.coboundary()?.coboundary()?.is_zero() {
                return Ok((
                    Verdict::fails(json!({"sample": i, "law": "dd"})),
                    json!({"degree": degree}),
                ));
            }
            dd_checked += 1;
        }
        // partners keep δ(a ∪ b) within the supported degrees
        let s = rng.gen_range(0..=(crate::cochain::MAX_DEGREE - 1 - degree));
        let b = Cochain::random(g.clone(), p, s, &mut rng)?;
        let lhs = a.cup(&b)?.coboundary()?;
        let sign = if degree.is_multiple_of(2) { 1 } else { p - 1 };
        let rhs = a
            .coboundary()?
            .cup(&b)?
            .add(&a.cup(&b.coboundary()?)?.scale(sign))?;
        if lhs != rhs {
            return Ok((
                Verdict::fails(json!({"sample": i, "law": "leibniz", "partner_degree": s})),
                json!({"degree": degree}),
            ));
        }
        leibniz_checked += 1;
    }
    Ok((
        Verdict::Holds,
        json!({"degree": degree, "samples": COMPLEX_SAMPLES, "dd_checked": dd_checked, "leibniz_checked": leibniz_checked}),
    ))
}

impl VerifySuite for ComplexSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let defaults: Vec<(&str, u8)> = ["Z2", "Z4", "V4", "S3"]
            .iter()
            .flat_map(|g| [(*g, 2), (*g, 3)])
            .collect();
        let mut items = Vec::new();
        for (g, p) in ctx.groups(&defaults) {
            let coh = ctx.cohomology(&g, p)?;
            for degree in 0..=2 {
                let label = format!("{g} p={p} degree {degree}");
                items.push(Item {
                    key: key(&coh),
                    data: (coh.clone(), degree, item_seed(ctx.config.seed, &label)),
                    label,
                });
            }
        }
        run_items(self.name(), ctx, items, |(coh, d, seed), _| {
            complex_item(coh, *d, *seed)
        })
    }
}

/// Table form of `𝐄(a_1, …, a_n)` shared across tuples.
struct DwyerTables {
    alpha: GroupHom,
    quotient: crate::unitri::MaterializedQuotient,
}

impl DwyerTables {
    fn new(n: usize, p: u8, limit: usize) -> Result<Self> {
        let extension = UnitriQuotient::full(n + 1, p)?.materialize(limit)?;
        let quotient = UnitriQuotient::superdiagonal_only(n + 1, p)?.materialize(limit)?;
        let alpha = GroupHom::new(
            Arc::new(extension.group.clone()),
            Arc::new(quotient.group.clone()),
            extension.projection_to(&quotient)?,
        )?;
        Ok(DwyerTables { alpha, quotient })
    }

    fn problem(&self, q: &MasseyQuery) -> Result<EmbeddingProblem> {
        let base = dwyer_base(q.group().clone(), q.modulus(), &q.values())?;
        let images = base
            .images()
            .iter()
            .map(|m| self.quotient.index_of(m))
            .collect();
        let phi = GroupHom::new(q.group().clone(), self.alpha.codomain().clone(), images)?;
        EmbeddingProblem::new(self.alpha.clone(), phi)
    }
}

type SweepItem = Item<(MasseyQuery, Option<Arc<DwyerTables>>)>;

fn dwyer_sweep_items(ctx: &SuiteContext) -> Result<Vec<SweepItem>> {
    let mut items = Vec::new();
    for (g, p) in ctx.groups(&[("Z2", 2), ("Z4", 2), ("V4", 2)]) {
        let coh = ctx.cohomology(&g, p)?;
        for n in ctx.ns(&[3, 4]) {
            let tables = DwyerTables::new(n, p, ctx.config.max_product_order)
                .ok()
                .map(Arc::new);
            for q in tuples(&coh, n)? {
                items.push(Item {
                    label: tuple_label(&coh, &q),
                    key: key(&coh),
                    data: (q, tables.clone()),
                });
            }
        }
    }
    Ok(items)
}

fn exhaustive_applies(q: &MasseyQuery) -> bool {
    q.group().order() <= EXHAUSTIVE_MAX_ORDER && q.n() <= EXHAUSTIVE_MAX_N
}

/// Massey vanishing by two strategies against the table solver on `𝐄`.
pub struct DwyerSuite;

impl Named for DwyerSuite {
    fn name(&self) -> &'static str {
        "dwyer"
    }
    fn describe(&self) -> &'static str {
        "exhaustive-cochain and hom-lift vanishing against solvability of E(a_1, …, a_n)"
    }
}

impl VerifySuite for DwyerSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let items = dwyer_sweep_items(ctx)?;
        let solver_name = ctx.config.lift_solver.clone();
        let fallback = ctx.unitri_solver()?;
        run_items(self.name(), ctx, items, |(q, tables), budget| {
            let strategies = massey_strategies();
            let hom_lift = strategies
                .get("hom-lift")?
                .product_set(q, budget)?
                .vanishes();
            let exhaustive = if exhaustive_applies(q) {
                Some(
                    strategies
                        .get("exhaustive-cochain")?
                        .product_set(q, budget)?
                        .vanishes(),
                )
            } else {
                None
            };
            let solver = match tables {
                Some(t) => lift_solvers()
                    .get(&solver_name)?
                    .solve(&t.problem(q)?, budget)?
                    .is_some(),
                None => {
                    let e = lift_problem(q, UnitriQuotient::full(q.n() + 1, q.modulus())?)?;
                    fallback.solve(&e, budget)?.is_some()
                }
            };
            let details = json!({
                "coords": q.coords(),
                "exhaustive_cochain": exhaustive,
                "hom_lift": hom_lift,
                "solver": solver,
            });
            let agree = exhaustive.unwrap_or(hom_lift) == hom_lift && hom_lift == solver;
            Ok((Verdict::from_bool(agree, &details), details))
        })
    }
}

/// "Defined ⇔ lift to U/Z" and "consecutive cups zero ⇔ lift to U/P".
pub struct RemarkSuite;

impl Named for RemarkSuite {
    fn name(&self) -> &'static str {
        "remark"
    }
    fn describe(&self) -> &'static str {
        "definedness against U/Z lifts and consecutive cups against U/P lifts"
    }
}

impl VerifySuite for RemarkSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let items = dwyer_sweep_items(ctx)?;
        let solver = ctx.unitri_solver()?;
        run_items(self.name(), ctx, items, |(q, _), budget| {
            if !exhaustive_applies(q) {
                return Err(Error::NotApplicable(
                    "direct definedness needs the exhaustive strategy".into(),
                ));
            }
            let defined = massey_strategies()
                .get("exhaustive-cochain")?
                .product_set(q, budget)?
                .is_defined();
            let uz = lift_problem(q, UnitriQuotient::modulo_center(q.n() + 1, q.modulus())?)?;
            let uz_lift = solver.solve(&uz, budget)?.is_some();
            let cups = consecutive_cups_zero(q, solver.as_ref(), budget)?;
            let details = json!({
                "coords": q.coords(),
                "defined": defined,
                "lift_mod_center": uz_lift,
                "cups_zero": cups.direct,
                "lift_mod_p": cups.via_lift,
            });
            Ok((
                Verdict::from_bool(defined == uz_lift && cups.agree(), &details),
                details,
            ))
        })
    }
}

/// The elements of `U_3(2)` over `(1, 1)` and their orders.
pub struct CaseByCaseSuite;

impl Named for CaseByCaseSuite {
    fn name(&self) -> &'static str {
        "case-by-case"
    }
    fn describe(&self) -> &'static str {
        "no element of U_3(2) over (1, 1) is an involution"
    }
}

impl VerifySuite for CaseByCaseSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let audit = case_by_case_audit();
        let items = audit
            .over_ones
            .into_iter()
            .map(|x| Item {
                label: x.matrix.clone(),
                key: None,
                data: x,
            })
            .collect();
        run_items(self.name(), ctx, items, |x, _| {
            let details = json!({"order": x.order});
            Ok((Verdict::from_bool(x.order > 2, &details), details))
        })
    }
}

/// Block lifts over `Z/2` for every sign pattern.
pub struct StrongVanishingSuite;

impl Named for StrongVanishingSuite {
    fn name(&self) -> &'static str {
        "strong-vanishing"
    }
    fn describe(&self) -> &'static str {
        "Z/2 sign patterns: block lifts without adjacent ones, non-real problems with them"
    }
}

fn strong_item(
    coh: &Arc<Cohomology>,
    pattern: &SignPattern,
    solver: &dyn UnitriSolver,
    budget: &mut Budget,
) -> Result<Outcome> {
    let n = pattern.len();
    let coords: Vec<Vec<u8>> = pattern.bits().iter().map(|&b| vec![b]).collect();
    let q = MasseyQuery::from_coords(coh.clone(), &coords)?;
    let cups = consecutive_cups_zero(&q, solver, budget)?;
    let e = lift_problem(&q, UnitriQuotient::full(n + 1, 2)?)?;
    match pattern.adjacent_ones() {
        None => {
            let a = block_lift(pattern)?;
            let involution = a.mul(&a).is_identity();
            let projects = a.superdiagonal() == pattern.bits();
            let hom = block_lift_hom(coh.group().clone(), pattern)?;
            let block_solves = e.is_solution(&hom);
            let solver_solves = solver.solve(&e, budget)?.is_some();
            let details = json!({
                "pattern": pattern.bits(),
                "cups_zero": cups.direct,
                "lift_mod_p": cups.via_lift,
                "block_lift": a.to_literal(),
                "involution": involution,
                "projects": projects,
                "block_solves": block_solves,
                "solver_solves": solver_solves,
            });
            let ok = cups.direct
                && cups.agree()
                && involution
                && projects
                && block_solves
                && solver_solves;
            Ok((Verdict::from_bool(ok, &details), details))
        }
        Some(index) => {
            let rejected = matches!(block_lift(pattern), Err(Error::AdjacentOnes { .. }));
            let witness = e.real_witness(budget)?;
            let details = json!({
                "pattern": pattern.bits(),
                "adjacent_ones": index,
                "cups_zero": cups.direct,
                "lift_mod_p": cups.via_lift,
                "block_lift_rejected": rejected,
                "real_witness": witness,
            });
            let ok = !cups.direct && cups.agree() && rejected && witness.is_some();
            Ok((Verdict::from_bool(ok, &details), details))
        }
    }
}

impl VerifySuite for StrongVanishingSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        if ctx.scope.group.as_deref().is_some_and(|g| g != "Z2")
            || ctx.scope.p.is_some_and(|p| p != 2)
        {
            return Ok(vec![Record::new(
                self.name(),
                "scope",
                Verdict::NotApplicable {
                    reason: "sign patterns are defined for G = Z/2, p = 2".into(),
                },
                (),
            )]);
        }
        let coh = ctx.cohomology("Z2", 2)?;
        let mut items = Vec::new();
        for n in ctx.ns(&[3, 4, 5, 6, 7, 8]) {
            for mask in 0..1u64 << n {
                let pattern = SignPattern::from_mask(n, mask);
                let bits: String = pattern.bits().iter().map(|b| b.to_string()).collect();
                items.push(Item {
                    label: format!("n={n} {bits}"),
                    key: key(&coh),
                    data: pattern,
                });
            }
        }
        let solver = ctx.unitri_solver()?;
        run_items(self.name(), ctx, items, |pattern, budget| {
            strong_item(&coh, pattern, solver.as_ref(), budget)
        })
    }
}

/// Level-by-level lifting when `H^2 = 0`.
pub struct EasyVanishingSuite;

impl Named for EasyVanishingSuite {
    fn name(&self) -> &'static str {
        "easy-vanishing"
    }
    fn describe(&self) -> &'static str {
        "H^2 = 0: every tuple lifts one level at a time with zero obstructions"
    }
}

impl VerifySuite for EasyVanishingSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let mut items = Vec::new();
        for (g, p) in ctx.groups(&[("Z3", 2), ("Z5", 2), ("S3", 5)]) {
            let coh = ctx.cohomology(&g, p)?;
            for n in ctx.ns(&[3]) {
                items.push(Item {
                    label: format!("{g} p={p} n={n}"),
                    key: key(&coh),
                    data: (coh.clone(), n),
                });
            }
        }
        run_items(
            self.name(),
            ctx,
            items,
            |(coh, n), _| match easy_vanishing_drill(coh, *n) {
                Ok(r) => {
                    let details = serde_json::to_value(&r).unwrap_or_default();
                    Ok((Verdict::from_bool(r.holds(), &details), details))
                }
                Err(Error::LiftImpossible(m)) => Ok((Verdict::fails(m), serde_json::Value::Null)),
                Err(e) => Err(e),
            },
        )
    }
}

/// The twisting identity, exhaustively or on a seeded sample.
pub struct TwistingSuite;

impl Named for TwistingSuite {
    fn name(&self) -> &'static str {
        "twisting"
    }
    fn describe(&self) -> &'static str {
        "o(E(ψχ)) = o(E(ψ)) + a_k ∪ χ for ψ into Q_{k+1,n+1}"
    }
}

pub const TWISTING_SAMPLE: usize = 128;

impl VerifySuite for TwistingSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        // (group, p, n, k, sampled)
        let defaults: Vec<(String, u8, usize, usize, bool)> = if ctx.scope == Scope::default() {
            vec![
                ("V4".into(), 2, 3, 1, false),
                ("V4".into(), 2, 4, 1, false),
                ("V4".into(), 2, 4, 2, false),
                ("Z4".into(), 2, 3, 1, false),
                ("Z3xZ3".into(), 3, 3, 1, true),
            ]
        } else {
            let mut out = Vec::new();
            for (g, p) in ctx.groups(&[("V4", 2), ("Z4", 2), ("Z3xZ3", 3)]) {
                for n in ctx.ns(&[3]) {
                    for k in 1..n.saturating_sub(1).max(1) {
                        out.push((g.clone(), p, n, k, p != 2));
                    }
                }
            }
            out
        };
        let mut items = Vec::new();
        for (g, p, n, k, sampled) in defaults {
            let coh = ctx.cohomology(&g, p)?;
            let label = format!(
                "{g} p={p} n={n} k={k}{}",
                if sampled { " sampled" } else { "" }
            );
            let sample = sampled.then(|| (item_seed(ctx.config.seed, &label), TWISTING_SAMPLE));
            items.push(Item {
                label,
                key: key(&coh),
                data: (coh, n, k, sample),
            });
        }
        run_items(self.name(), ctx, items, |(coh, n, k, sample), budget| {
            let a = twisting_audit(coh, *n, *k, *sample, budget)?;
            let details = json!({
                "homs": a.homs,
                "instances": a.instances,
                "nonzero_cups": a.nonzero_cups,
                "failures": a.failures.len(),
            });
            Ok((Verdict::from_bool(a.holds(), a.failures.first()), details))
        })
    }
}

/// Structure of `M_{k,m}`, the pair form of `Q_{k,m}` and `ρ`, `ι`.
pub struct FiberQuotientSuite;

impl Named for FiberQuotientSuite {
    fn name(&self) -> &'static str {
        "fiber-quotient"
    }
    fn describe(&self) -> &'static str {
        "M_{k,m} normal and a block kernel, Q_{k,m} as a fiber product, ρ and ι"
    }
}

impl VerifySuite for FiberQuotientSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let ms = ctx.ns(&[4]);
        let ps: Vec<u8> = ctx.scope.p.map_or(vec![2, 3], |p| vec![p]);
        let mut records = Vec::new();
        for m in ms {
            for &p in &ps {
                let audit = match structure_audit(m, p) {
                    Ok(a) => a,
                    Err(e) => match Verdict::from_error(&e) {
                        Some(v) => {
                            records.push(Record::new(self.name(), format!("m={m} p={p}"), v, ()));
                            continue;
                        }
                        None => match e {
                            Error::SizeLimit { .. } => {
                                records.push(Record::new(
                                    self.name(),
                                    format!("m={m} p={p}"),
                                    Verdict::NotApplicable {
                                        reason: e.to_string(),
                                    },
                                    (),
                                ));
                                continue;
                            }
                            e => return Err(e),
                        },
                    },
                };
                for s in audit.subgroups {
                    let details = serde_json::to_value(&s).unwrap_or_default();
                    records.push(Record::new(
                        self.name(),
                        format!("m={m} p={p} k={}", s.k),
                        Verdict::from_bool(s.holds(), &details),
                        &details,
                    ));
                }
            }
        }
        Ok(records)
    }
}

/// Solver against obstruction on every central step problem.
pub struct ObstructionSuite;

impl Named for ObstructionSuite {
    fn name(&self) -> &'static str {
        "obstruction"
    }
    fn describe(&self) -> &'static str {
        "central step problems: solvable ⇔ obstruction zero, class independent of the lift policy"
    }
}

impl VerifySuite for ObstructionSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let mut items = Vec::new();
        let defaults: Vec<(&str, u8, usize)> = vec![
            ("Z2", 2, 4),
            ("Z4", 2, 4),
            ("V4", 2, 4),
            ("Z2", 2, 5),
            ("Z4", 2, 5),
            ("V4", 2, 5),
            ("Z3", 3, 4),
        ];
        let chosen: Vec<(String, u8, usize)> = if ctx.scope == Scope::default() {
            defaults
                .iter()
                .map(|(g, p, m)| (g.to_string(), *p, *m))
                .collect()
        } else {
            let pairs: Vec<(&str, u8)> = defaults.iter().map(|(g, p, _)| (*g, *p)).collect();
            let mut out = Vec::new();
            for (g, p) in ctx.groups(&pairs) {
                for m in ctx.ns(&[4]) {
                    if !out.contains(&(g.clone(), p, m)) {
                        out.push((g.clone(), p, m));
                    }
                }
            }
            out
        };
        for (g, p, m) in chosen {
            let coh = ctx.cohomology(&g, p)?;
            items.push(Item {
                label: format!("{g} p={p} m={m}"),
                key: key(&coh),
                data: (coh, m),
            });
        }
        run_items(self.name(), ctx, items, |(coh, m), budget| {
            let a = central_step_audit(coh, *m, budget)?;
            let details = json!({
                "steps": a.steps.iter().map(|s| json!({
                    "step": s.step,
                    "homs": s.homs,
                    "solvable": s.solvable,
                    "disagreements": s.disagreements.len(),
                    "policy_mismatches": s.policy_mismatches.len(),
                })).collect::<Vec<_>>(),
            });
            let witness: Vec<_> = a.steps.iter().filter(|s| !s.holds()).collect();
            Ok((Verdict::from_bool(a.holds(), witness), details))
        })
    }
}

/// The finite-level Demushkin check and the length of the central
/// filtration of `Ker φ_{n+1}`.
pub struct DemushkinSuite;

impl Named for DemushkinSuite {
    fn name(&self) -> &'static str {
        "demushkin"
    }
    fn describe(&self) -> &'static str {
        "Demushkin verdicts on cyclic groups and the length of the central filtration"
    }
}

impl VerifySuite for DemushkinSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let mut records = Vec::new();
        let expected: Vec<(String, u8, Option<bool>)> = match &ctx.scope.group {
            Some(g) => vec![(g.clone(), ctx.scope.p.unwrap_or(2), None)],
            None => vec![
                ("Z2".into(), 2, Some(true)),
                ("Z3".into(), 3, Some(false)),
                ("Z5".into(), 5, Some(false)),
                ("Z1".into(), 2, Some(false)),
            ],
        };
        for (g, p, want) in expected {
            let group: FiniteGroup = load_group(&g, ctx.base_dir.as_deref())?;
            let r = demushkin_check(Arc::new(group), p)?;
            let details = serde_json::to_value(&r).unwrap_or_default();
            let verdict = match want {
                Some(w) => {
                    Verdict::from_bool(r.verdict == w, json!({"expected": w, "found": r.verdict}))
                }
                None => Verdict::Holds,
            };
            records.push(Record::new(
                self.name(),
                format!("{g} p={p}"),
                verdict,
                details,
            ));
        }
        if ctx.scope.group.is_none() {
            for n in ctx.ns(&[2, 3, 4]) {
                let f = filtration_length(n, 2)?;
                let details = serde_json::to_value(&f).unwrap_or_default();
                let ok = f.equals_entry_count && f.chain_verified;
                records.push(Record::new(
                    self.name(),
                    format!("filtration n={n} p=2"),
                    Verdict::from_bool(ok, &details),
                    &details,
                ));
            }
        }
        Ok(records)
    }
}

/// The descent on groups with one-dimensional `H^2`.
pub struct DescentSuite;

impl Named for DescentSuite {
    fn name(&self) -> &'static str {
        "descent"
    }
    fn describe(&self) -> &'static str {
        "twisted descent through Q_{k,n+1} on tuples of nonzero classes with consecutive cups zero"
    }
}

impl VerifySuite for DescentSuite {
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<Record>> {
        let mut items = Vec::new();
        for (g, p) in ctx.groups(&[("Z2", 2), ("Z4", 2), ("Z8", 2), ("Z3", 3)]) {
            let coh = ctx.cohomology(&g, p)?;
            for n in ctx.ns(&[3, 4]) {
                for q in tuples(&coh, n)? {
                    let values = q.values();
                    if values.iter().any(|a| a.iter().all(|&v| v == 0)) {
                        continue;
                    }
                    items.push(Item {
                        label: tuple_label(&coh, &q),
                        key: key(&coh),
                        data: q,
                    });
                }
            }
        }
        let solver = ctx.unitri_solver()?;
        run_items(
            self.name(),
            ctx,
            items,
            |q, budget| match demushkin_descent(q, budget) {
                Ok(d) => {
                    let e = lift_problem(q, UnitriQuotient::full(q.n() + 1, q.modulus())?)?;
                    let ok = e.is_solution(&d.solution);
                    let details = json!({"coords": q.coords(), "steps": d.steps});
                    Ok((Verdict::from_bool(ok, &details), details))
                }
                Err(Error::HypothesisViolated(m)) => Ok((
                    Verdict::NotApplicable { reason: m },
                    json!({"coords": q.coords()}),
                )),
                Err(Error::FormDegenerate { step }) => {
                    // a degenerate form may still leave the problem solvable
                    let e = lift_problem(q, UnitriQuotient::full(q.n() + 1, q.modulus())?)?;
                    let solvable = solver.solve(&e, budget)?.is_some();
                    Ok((
                        Verdict::NotApplicable {
                            reason: format!(
                                "cup form cannot cancel the obstruction at step {step}"
                            ),
                        },
                        json!({"coords": q.coords(), "solvable_by_search": solvable}),
                    ))
                }
                Err(e) => Err(e),
            },
        )
    }
}

pub fn verify_suites() -> Registry<dyn VerifySuite> {
    Registry::<dyn VerifySuite>::new("suite")
        .with(Box::new(DwyerSuite))
        .with(Box::new(TwistingSuite))
        .with(Box::new(StrongVanishingSuite))
        .with(Box::new(EasyVanishingSuite))
        .with(Box::new(CaseByCaseSuite))
        .with(Box::new(FiberQuotientSuite))
        .with(Box::new(ObstructionSuite))
        .with(Box::new(RemarkSuite))
        .with(Box::new(ComplexSuite))
        .with(Box::new(DemushkinSuite))
        .with(Box::new(DescentSuite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Summary;

    fn ctx(scope: Scope) -> SuiteContext {
        let config = RunConfig {
            cache_dir: None,
            ..RunConfig::default()
        };
        SuiteContext::new(config, scope)
    }

    #[test]
    fn case_by_case_emits_two_order_four_records() {
        let r = verify_suites()
            .get("case-by-case")
            .unwrap()
            .run(&ctx(Scope::default()))
            .unwrap();
        assert_eq!(r.len(), 2);
        assert!(r
            .iter()
            .all(|x| x.verdict == Verdict::Holds && x.details["order"] == 4));
    }

    #[test]
    fn dwyer_on_z2_n3() {
        let scope = Scope {
            group: Some("Z2".into()),
            p: Some(2),
            n: Some(3),
        };
        let r = verify_suites()
            .get("dwyer")
            .unwrap()
            .run(&ctx(scope))
            .unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(Summary::of(&r).holds, 8);
    }

    #[test]
    fn tiny_budget_is_reported_not_hidden() {
        let scope = Scope {
            group: Some("V4".into()),
            p: Some(2),
            n: Some(3),
        };
        let mut c = ctx(scope);
        c.config.budget = 1;
        let r = verify_suites().get("dwyer").unwrap().run(&c).unwrap();
        assert!(r
            .iter()
            .any(|x| matches!(x.verdict, Verdict::BudgetExceeded { limit: 1 })));
        assert_eq!(Summary::of(&r).fails, 0);
    }

    #[test]
    fn parallel_runs_keep_item_order() {
        let scope = Scope {
            group: Some("V4".into()),
            p: Some(2),
            n: Some(3),
        };
        let one = verify_suites()
            .get("remark")
            .unwrap()
            .run(&ctx(scope.clone()))
            .unwrap();
        let mut c = ctx(scope);
        c.config.jobs = 4;
        let four = verify_suites().get("remark").unwrap().run(&c).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn cached_records_match_fresh_ones() {
        let dir = tempfile::tempdir().unwrap();
        let scope = Scope {
            group: Some("Z4".into()),
            p: Some(2),
            n: Some(3),
        };
        let fresh = verify_suites()
            .get("dwyer")
            .unwrap()
            .run(&ctx(scope.clone()))
            .unwrap();
        let mut c = ctx(scope);
        c.cache = Cache::at(dir.path());
        let first = verify_suites().get("dwyer").unwrap().run(&c).unwrap();
        let second = verify_suites().get("dwyer").unwrap().run(&c).unwrap();
        assert_eq!(fresh, first);
        assert_eq!(first, second);
    }
}
