//! Computing the set `⟨a_1, …, a_n⟩` and the predicates built on it.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::{defining_system_from_hom, DefiningSystem, MasseyQuery};
use crate::cochain::{Cochain, Cohomology};
use crate::embedding::{dwyer_base, for_each_lift, UnitriProblem, UnitriSolver};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};
use crate::search::Budget;
use crate::unitri::UnitriQuotient;

pub const EXHAUSTIVE_MAX_ORDER: usize = 8;
pub const EXHAUSTIVE_MAX_N: usize = 4;

/// The achievable Massey values as `H^2` coordinates; empty when the
/// product is not defined.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MasseySet {
    pub values: BTreeSet<Vec<u8>>,
}

impl MasseySet {
    pub fn is_defined(&self) -> bool {
        !self.values.is_empty()
    }

    pub fn vanishes(&self) -> bool {
        self.values.iter().any(|c| c.iter().all(|&v| v == 0))
    }
}

pub trait MasseyStrategy: Named + Send + Sync {
    fn product_set(&self, q: &MasseyQuery, budget: &mut Budget) -> Result<MasseySet>;
}

/// Builds every defining system entry by entry: each `a_{ij}` ranges over
/// a preimage of its right-hand side plus all of `Z^1`.
pub struct ExhaustiveCochain;

impl Named for ExhaustiveCochain {
    fn name(&self) -> &'static str {
        "exhaustive-cochain"
    }
    fn describe(&self) -> &'static str {
        "all defining systems, entries solved span by span"
    }
}

impl MasseyStrategy for ExhaustiveCochain {
    fn product_set(&self, q: &MasseyQuery, budget: &mut Budget) -> Result<MasseySet> {
        let order = q.group().order();
        if order > EXHAUSTIVE_MAX_ORDER {
            return Err(Error::size(
                "group order for exhaustive-cochain",
                order as u128,
                EXHAUSTIVE_MAX_ORDER as u128,
            ));
        }
        if q.n() > EXHAUSTIVE_MAX_N {
            return Err(Error::size(
                "n for exhaustive-cochain",
                q.n() as u128,
                EXHAUSTIVE_MAX_N as u128,
            ));
        }
        let n = q.n();
        let coh = q.cohomology();
        let classes = q.classes();
        let mut ds = DefiningSystem::from_fn(n, |i, j| {
            if j == i + 1 {
                classes[i - 1].clone()
            } else {
                Cochain::zero(q.group().clone(), q.modulus(), 1).expect("degree 1")
            }
        })?;
        let mut todo: Vec<(usize, usize)> = DefiningSystem::positions(n)
            .into_iter()
            .filter(|&(i, j)| j > i + 1)
            .collect();
        todo.sort_by_key(|&(i, j)| (j - i, i));
        let z1 = coh.h1_elements()?;
        let mut out = MasseySet::default();
        fill(&mut ds, &todo, coh, &z1, budget, &mut out)?;
        Ok(out)
    }
}

fn fill(
    ds: &mut DefiningSystem,
    todo: &[(usize, usize)],
    coh: &Cohomology,
    z1: &[Cochain],
    budget: &mut Budget,
    out: &mut MasseySet,
) -> Result<()> {
    budget.tick()?;
    let Some((&(i, j), rest)) = todo.split_first() else {
        out.values
            .insert(coh.class_of(&ds.massey_cocycle()?)?.coords);
        return Ok(());
    };
    let Some(k) = coh.coboundary_preimage(&ds.rhs(i, j)?)? else {
        return Ok(());
    };
    for z in z1 {
        ds.set(i, j, k.add(z)?)?;
        fill(ds, rest, coh, z1, budget, out)?;
    }
    Ok(())
}

/// Every homomorphism into `U_{n+1}(p)/Z_{n+1}` over `−a_1 × ⋯ × −a_n`,
/// read as a defining system.
pub struct HomLift;

impl Named for HomLift {
    fn name(&self) -> &'static str {
        "hom-lift"
    }
    fn describe(&self) -> &'static str {
        "defining systems from all lifts to U/Z"
    }
}

impl MasseyStrategy for HomLift {
    fn product_set(&self, q: &MasseyQuery, budget: &mut Budget) -> Result<MasseySet> {
        let e = lift_problem(q, UnitriQuotient::modulo_center(q.n() + 1, q.modulus())?)?;
        let coh = q.cohomology();
        let mut out = MasseySet::default();
        let mut err = None;
        for_each_lift(&e, budget, &mut |psi| {
            let value = defining_system_from_hom(psi)
                .and_then(|ds| Ok(coh.class_of(&ds.massey_cocycle()?)?.coords));
            match value {
                Ok(v) => {
                    out.values.insert(v);
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

pub fn massey_strategies() -> Registry<dyn MasseyStrategy> {
    Registry::<dyn MasseyStrategy>::new("Massey strategy")
        .with(Box::new(ExhaustiveCochain))
        .with(Box::new(HomLift))
}

pub fn massey_product_set(
    q: &MasseyQuery,
    strategy: &dyn MasseyStrategy,
    budget: &mut Budget,
) -> Result<MasseySet> {
    strategy.product_set(q, budget)
}

/// `−a_1 × ⋯ × −a_n` as a lifting problem into `target`.
pub fn lift_problem(q: &MasseyQuery, target: UnitriQuotient) -> Result<UnitriProblem> {
    let base = dwyer_base(q.group().clone(), q.modulus(), &q.values())?;
    UnitriProblem::new(base, target)?.with_cohomology(q.cohomology().clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CupCheck {
    /// `a_i ∪ a_{i+1}` is a coboundary for every `i`.
    pub direct: bool,
    /// `−a_1 × ⋯ × −a_n` lifts to `U_{n+1}(p)/P_{n+1}`.
    pub via_lift: bool,
}

impl CupCheck {
    pub fn agree(&self) -> bool {
        self.direct == self.via_lift
    }
}

pub fn consecutive_cups_zero(
    q: &MasseyQuery,
    solver: &dyn UnitriSolver,
    budget: &mut Budget,
) -> Result<CupCheck> {
    let coh = q.cohomology();
    let a = q.classes();
    let mut direct = true;
    for w in a.windows(2) {
        if !coh.cup_class(&w[0], &w[1])?.is_zero() {
            direct = false;
            break;
        }
    }
    let e = lift_problem(q, UnitriQuotient::modulo_p(q.n() + 1, q.modulus())?)?;
    let via_lift = solver.solve(&e, budget)?.is_some();
    Ok(CupCheck { direct, via_lift })
}

/// Calls `visit` on every `n`-tuple of classes, lexicographic in `H^1`
/// coordinates (first class most significant).
pub fn for_each_tuple(
    coh: &Arc<Cohomology>,
    n: usize,
    visit: &mut dyn FnMut(MasseyQuery) -> Result<ControlFlow<()>>,
) -> Result<bool> {
    let h1 = coh.h1_elements()?;
    let base = h1.len();
    let count = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > 1 << 24 {
        return Err(Error::size("tuple space", count, 1 << 24));
    }
    for mut idx in 0..count as usize {
        let mut tuple = vec![0usize; n];
        for t in tuple.iter_mut().rev() {
            *t = idx % base;
            idx /= base;
        }
        let q = MasseyQuery::new(coh.clone(), tuple.iter().map(|&t| h1[t].clone()).collect())?;
        if visit(q)?.is_break() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the strong vanishing sweep for one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongVanishing {
    pub n: usize,
    pub tuples: usize,
    pub eligible: usize,
    /// `H^1` coordinates of the first eligible tuple whose product does not
    /// vanish.
    pub counterexample: Option<Vec<Vec<u8>>>,
    pub budget_exceeded: bool,
}

impl StrongVanishing {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none() && !self.budget_exceeded
    }
}

/// Every tuple with consecutive cups zero is checked for vanishing by
/// solving the lifting problem into `U_{n+1}(p)`. A sweep that runs out of
/// budget stops there and says so.
pub fn strong_massey_vanishing(
    coh: &Arc<Cohomology>,
    ns: impl IntoIterator<Item = usize>,
    solver: &dyn UnitriSolver,
    budget: &mut Budget,
) -> Result<Vec<StrongVanishing>> {
    let mut out = Vec::new();
    for n in ns {
        let mut r = StrongVanishing {
            n,
            tuples: 0,
            eligible: 0,
            counterexample: None,
            budget_exceeded: false,
        };
        let sweep = for_each_tuple(coh, n, &mut |q| {
            r.tuples += 1;
            let cups_zero = q
                .classes()
                .windows(2)
                .map(|w| coh.cup_class(&w[0], &w[1]).map(|c| c.is_zero()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|z| z);
            if !cups_zero {
                return Ok(ControlFlow::Continue(()));
            }
            r.eligible += 1;
            let e = lift_problem(&q, UnitriQuotient::full(n + 1, q.modulus())?)?;
            if solver.solve(&e, budget)?.is_none() {
                r.counterexample = Some(q.coords());
                return Ok(ControlFlow::Break(()));
            }
            Ok(ControlFlow::Continue(()))
        });
        match sweep {
            Ok(_) => {}
            Err(Error::BudgetExceeded { .. }) => r.budget_exceeded = true,
            Err(e) => return Err(e),
        }
        let stop = r.budget_exceeded;
        out.push(r);
        if stop {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::LayeredSolver;
    use crate::group::lookup_fixture;

    fn coh(name: &str, p: u8) -> Arc<Cohomology> {
        Arc::new(Cohomology::compute(Arc::new(lookup_fixture(name).unwrap()), p).unwrap())
    }

    #[test]
    fn strategies_agree_on_small_groups() {
        for (name, p, n) in [
            ("Z2", 2, 3),
            ("Z4", 2, 3),
            ("V4", 2, 3),
            ("Z3", 3, 3),
            ("Z2", 2, 4),
        ] {
            let c = coh(name, p);
            for_each_tuple(&c, n, &mut |q| {
                let a = ExhaustiveCochain.product_set(&q, &mut Budget::unlimited())?;
                let b = HomLift.product_set(&q, &mut Budget::unlimited())?;
                assert_eq!(a, b, "{name} {:?}", q.coords());
                Ok(ControlFlow::Continue(()))
            })
            .unwrap();
        }
    }

    #[test]
    fn two_fold_set_is_the_cup_singleton() {
        let c = coh("V4", 2);
        for_each_tuple(&c, 2, &mut |q| {
            let s = ExhaustiveCochain.product_set(&q, &mut Budget::unlimited())?;
            let cup = c.cup_class(&q.classes()[0], &q.classes()[1])?;
            assert_eq!(s.values.into_iter().collect::<Vec<_>>(), vec![cup.coords]);
            Ok(ControlFlow::Continue(()))
        })
        .unwrap();
    }

    #[test]
    fn separated_triple_on_z2_vanishes() {
        let c = coh("Z2", 2);
        let q = MasseyQuery::from_coords(c, &[vec![1], vec![0], vec![1]]).unwrap();
        for s in massey_strategies().iter() {
            assert!(s
                .product_set(&q, &mut Budget::unlimited())
                .unwrap()
                .vanishes());
        }
    }

    #[test]
    fn z4_triple_of_the_generator_is_defined() {
        let c = coh("Z4", 2);
        let q = MasseyQuery::from_coords(c, &[vec![1], vec![1], vec![1]]).unwrap();
        let s = ExhaustiveCochain
            .product_set(&q, &mut Budget::unlimited())
            .unwrap();
        assert!(s.is_defined());
    }

    #[test]
    fn exhaustive_size_limits() {
        let c = coh("Z2", 2);
        let q = MasseyQuery::from_coords(c, &vec![vec![0]; 5]).unwrap();
        assert!(matches!(
            ExhaustiveCochain.product_set(&q, &mut Budget::unlimited()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn cup_checks_agree() {
        let c = coh("Z2", 2);
        let q = MasseyQuery::from_coords(c.clone(), &[vec![1], vec![1]]).unwrap();
        let r = consecutive_cups_zero(&q, &LayeredSolver, &mut Budget::unlimited()).unwrap();
        assert_eq!(
            r,
            CupCheck {
                direct: false,
                via_lift: false
            }
        );
        let q = MasseyQuery::from_coords(c, &[vec![1], vec![0], vec![1]]).unwrap();
        let r = consecutive_cups_zero(&q, &LayeredSolver, &mut Budget::unlimited()).unwrap();
        assert_eq!(
            r,
            CupCheck {
                direct: true,
                via_lift: true
            }
        );
    }

    #[test]
    fn strong_vanishing_on_z2_and_coprime_cyclic() {
        let r = strong_massey_vanishing(
            &coh("Z2", 2),
            3..=5,
            &LayeredSolver,
            &mut Budget::unlimited(),
        )
        .unwrap();
        assert!(r.iter().all(StrongVanishing::holds));
        assert_eq!(r[0].eligible, 5);
        let r = strong_massey_vanishing(
            &coh("Z3", 2),
            3..=4,
            &LayeredSolver,
            &mut Budget::unlimited(),
        )
        .unwrap();
        assert!(r.iter().all(|s| s.holds() && s.tuples == 1));
    }

    #[test]
    fn strong_vanishing_reports_budget() {
        let r = strong_massey_vanishing(&coh("Z2", 2), 3..=5, &LayeredSolver, &mut Budget::new(3))
            .unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].budget_exceeded && !r[0].holds());
    }
}
