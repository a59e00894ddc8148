//! Lifting problems into pattern quotients of `U_n(p)`, solved without
//! materializing the target.

use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use super::central::{lift_through, twist_values, PatternStep};
use crate::cochain::{Cochain, Cohomology};
use crate::error::{Error, Result};
use crate::group::{build_cyclic, search_homs, FiniteGroup, GroupOps, Presentation};
use crate::registry::{Named, Registry};
use crate::search::Budget;
use crate::unitri::{positions_with_span, UniTriMatrix, UnitriQuotient};

/// Largest fiber the fiber solver will list per generator.
pub const FIBER_LIMIT: usize = 1 << 16;

/// A homomorphism `G → U_n(p)/N`, images stored as canonical
/// representatives indexed by the elements of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitriHom {
    group: Arc<FiniteGroup>,
    target: UnitriQuotient,
    images: Vec<UniTriMatrix>,
}

impl UnitriHom {
    pub fn new(
        group: Arc<FiniteGroup>,
        target: UnitriQuotient,
        images: Vec<UniTriMatrix>,
    ) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        if images
            .iter()
            .any(|m| m.size() != target.size() || m.modulus() != target.modulus())
        {
            return Err(Error::TargetMismatch("image of the wrong shape".into()));
        }
        let images: Vec<UniTriMatrix> = images.iter().map(|m| target.canonical(m)).collect();
        for x in group.elements() {
            for y in group.elements() {
                if images[group.mul(x, y)] != target.op(&images[x], &images[y]) {
                    return Err(Error::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(UnitriHom {
            group,
            target,
            images,
        })
    }

    pub(crate) fn new_unchecked(
        group: Arc<FiniteGroup>,
        target: UnitriQuotient,
        images: Vec<UniTriMatrix>,
    ) -> Self {
        UnitriHom {
            group,
            target,
            images,
        }
    }

    pub fn trivial(group: Arc<FiniteGroup>, target: UnitriQuotient) -> Self {
        let id = target.identity();
        let images = vec![id; group.order()];
        UnitriHom {
            group,
            target,
            images,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn target(&self) -> &UnitriQuotient {
        &self.target
    }

    pub fn images(&self) -> &[UniTriMatrix] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> UniTriMatrix {
        self.images[x]
    }

    pub fn generator_images(&self) -> Vec<UniTriMatrix> {
        self.group
            .generators()
            .iter()
            .map(|&g| self.images[g])
            .collect()
    }

    /// Composition with the projection onto a coarser quotient.
    pub fn project(&self, coarser: &UnitriQuotient) -> Result<UnitriHom> {
        if !self.target.refines(coarser) {
            return Err(Error::TargetMismatch("not a coarser quotient".into()));
        }
        let images = self.images.iter().map(|m| coarser.canonical(m)).collect();
        Ok(UnitriHom::new_unchecked(
            self.group.clone(),
            coarser.clone(),
            images,
        ))
    }

    /// `g ↦ e_{ij}(ψ(g))`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<u8> {
        self.images.iter().map(|m| m.at(i, j)).collect()
    }

    /// The classes `a_i` with `φ ∘ ψ = −a_1 × ⋯ × −a_n`, as values on `G`.
    pub fn characters(&self) -> Vec<Vec<u8>> {
        let p = self.target.modulus();
        (1..self.target.size())
            .map(|i| {
                self.entry(i, i + 1)
                    .into_iter()
                    .map(|v| (p - v) % p)
                    .collect()
            })
            .collect()
    }
}

/// `g ↦ −a_1(g) × ⋯ × −a_n(g)` into the superdiagonal quotient of
/// `U_{n+1}(p)`; each `a_i` is given by its values on all of `G`.
pub fn dwyer_base(group: Arc<FiniteGroup>, p: u8, characters: &[Vec<u8>]) -> Result<UnitriHom> {
    let n = characters.len();
    if n == 0 {
        return Err(Error::BadParameter("at least one class is needed".into()));
    }
    let target = UnitriQuotient::superdiagonal_only(n + 1, p)?;
    let mut images = Vec::with_capacity(group.order());
    for x in group.elements() {
        let mut m = UniTriMatrix::identity(n + 1, p);
        for (i, a) in characters.iter().enumerate() {
            if a.len() != group.order() {
                return Err(Error::ShapeMismatch(
                    "character values must cover the group".into(),
                ));
            }
            m.set(i + 1, i + 2, (p - a[x] % p) % p);
        }
        images.push(m);
    }
    UnitriHom::new(group, target, images)
}

/// Lift `base : G → C` to `G → T` along the projection of a finer pattern
/// quotient `T` onto `C`.
#[derive(Debug)]
pub struct UnitriProblem {
    base: UnitriHom,
    target: UnitriQuotient,
    coh: OnceLock<Arc<Cohomology>>,
}

impl Clone for UnitriProblem {
    fn clone(&self) -> Self {
        let coh = OnceLock::new();
        if let Some(c) = self.coh.get() {
            let _ = coh.set(c.clone());
        }
        UnitriProblem {
            base: self.base.clone(),
            target: self.target.clone(),
            coh,
        }
    }
}

impl UnitriProblem {
    pub fn new(base: UnitriHom, target: UnitriQuotient) -> Result<Self> {
        if !target.refines(base.target()) {
            return Err(Error::TargetMismatch(
                "target does not refine the base quotient".into(),
            ));
        }
        Ok(UnitriProblem {
            base,
            target,
            coh: OnceLock::new(),
        })
    }

    /// Reuse an already computed `H^*(G, Z/p)`.
    pub fn with_cohomology(self, coh: Arc<Cohomology>) -> Result<Self> {
        if coh.modulus() != self.target.modulus() || **coh.group() != **self.base.group() {
            return Err(Error::TargetMismatch(
                "cohomology of a different group".into(),
            ));
        }
        let _ = self.coh.set(coh);
        Ok(self)
    }

    pub fn cohomology(&self) -> Result<Arc<Cohomology>> {
        if let Some(c) = self.coh.get() {
            return Ok(c.clone());
        }
        let c = Arc::new(Cohomology::compute(
            self.base.group().clone(),
            self.target.modulus(),
        )?);
        Ok(self.coh.get_or_init(|| c).clone())
    }

    pub fn base(&self) -> &UnitriHom {
        &self.base
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }

    pub fn target(&self) -> &UnitriQuotient {
        &self.target
    }

    /// Quotients from the base to the target, each a central `Z/p`
    /// extension of the previous: kernel positions are freed lowest span
    /// first.
    pub fn levels(&self) -> Result<Vec<UnitriQuotient>> {
        let coarse = self.base.target();
        let n = self.target.size();
        let mut pending: Vec<(usize, usize)> = positions_with_span(n, |_| true);
        pending.sort_by_key(|&(i, j)| (std::cmp::Reverse(j - i), i));
        let mut pending: Vec<(usize, usize)> = pending
            .into_iter()
            .filter(|&(i, j)| !self.target.is_killed(i, j) && coarse.is_killed(i, j))
            .collect();
        let mut out = vec![coarse.clone()];
        while pending.pop().is_some() {
            let mut killed = self.target.killed_positions().to_vec();
            killed.extend_from_slice(&pending);
            out.push(UnitriQuotient::new(n, self.target.modulus(), &killed)?);
        }
        Ok(out)
    }

    pub fn steps(&self) -> Result<Vec<PatternStep>> {
        let levels = self.levels()?;
        levels
            .windows(2)
            .map(|w| PatternStep::new(w[1].clone(), w[0].clone()))
            .collect()
    }

    pub fn is_solution(&self, f: &UnitriHom) -> bool {
        f.target() == &self.target
            && **f.group() == **self.group()
            && UnitriHom::new(f.group().clone(), f.target().clone(), f.images().to_vec()).is_ok()
            && f.images()
                .iter()
                .zip(self.base.images())
                .all(|(x, y)| self.base.target().canonical(x) == *y)
    }

    /// The problem restricted along `Z/2 → G`, `1 ↦ t`.
    fn restrict_to_involution(&self, t: usize) -> Result<UnitriProblem> {
        let z2 = Arc::new(build_cyclic(2)?);
        let coarse = self.base.target().clone();
        let images = vec![coarse.identity(), self.base.apply(t)];
        UnitriProblem::new(UnitriHom::new(z2, coarse, images)?, self.target.clone())
    }

    /// The first involution `t` with `φ(t) ≠ 1` and no involution over
    /// `φ(t)` in the target, or `None` if the problem is real.
    pub fn real_witness(&self, budget: &mut Budget) -> Result<Option<usize>> {
        let coarse = self.base.target();
        for t in self.group().involutions() {
            if self.base.apply(t) == coarse.identity() {
                continue;
            }
            let sub = self.restrict_to_involution(t)?;
            if LayeredSolver.solve(&sub, budget)?.is_none() {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

pub trait UnitriSolver: Named + Send + Sync {
    /// A solution, `None` after certified exhaustion, or `BudgetExceeded`.
    fn solve(&self, problem: &UnitriProblem, budget: &mut Budget) -> Result<Option<UnitriHom>>;
}

/// Depth-first descent through the central levels: at each level the
/// obstruction decides liftability and every lift is a twist of one lift
/// by a homomorphism `G → Z/p`.
pub struct LayeredSolver;

impl Named for LayeredSolver {
    fn name(&self) -> &'static str {
        "layered"
    }
    fn describe(&self) -> &'static str {
        "central levels one entry at a time, obstruction then twist by H^1"
    }
}

impl UnitriSolver for LayeredSolver {
    fn solve(&self, problem: &UnitriProblem, budget: &mut Budget) -> Result<Option<UnitriHom>> {
        let mut found = None;
        for_each_lift(problem, budget, &mut |f| {
            found = Some(f.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }
}

/// Generator images drawn from the fibers of the target over the base.
pub struct UnitriFiberSolver;

impl Named for UnitriFiberSolver {
    fn name(&self) -> &'static str {
        "fiber"
    }
    fn describe(&self) -> &'static str {
        "backtracking over generator images in the fibers of the target"
    }
}

impl UnitriSolver for UnitriFiberSolver {
    fn solve(&self, problem: &UnitriProblem, budget: &mut Budget) -> Result<Option<UnitriHom>> {
        let g = problem.group();
        let coarse = problem.base.target();
        let candidates = g
            .generators()
            .iter()
            .map(|&s| {
                problem
                    .target
                    .fiber_over(coarse, &problem.base.apply(s), FIBER_LIMIT)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut found = None;
        search_homs(
            &Presentation::new(g),
            &problem.target,
            &candidates,
            budget,
            &mut |images| {
                found = Some(images);
                ControlFlow::Break(())
            },
        )?;
        Ok(found.map(|images| UnitriHom::new_unchecked(g.clone(), problem.target.clone(), images)))
    }
}

pub fn unitri_solvers() -> Registry<dyn UnitriSolver> {
    Registry::<dyn UnitriSolver>::new("unitriangular solver")
        .with(Box::new(LayeredSolver))
        .with(Box::new(UnitriFiberSolver))
}

/// Visits every solution of `problem`; returns `Ok(true)` when all were
/// visited.
pub fn for_each_lift(
    problem: &UnitriProblem,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&UnitriHom) -> ControlFlow<()>,
) -> Result<bool> {
    let steps = problem.steps()?;
    if steps.is_empty() {
        budget.tick()?;
        let f = UnitriHom::new_unchecked(
            problem.group().clone(),
            problem.target.clone(),
            problem.base.images.clone(),
        );
        return Ok(visit(&f).is_continue());
    }
    let coh = problem.cohomology()?;
    let twists = coh.h1_elements()?;
    let walk = Walk {
        steps: &steps,
        coh: &coh,
        twists: &twists,
        group: problem.group(),
        target: &problem.target,
    };
    Ok(walk
        .descend(0, problem.base.images.clone(), budget, visit)?
        .is_continue())
}

struct Walk<'a> {
    steps: &'a [PatternStep],
    coh: &'a Cohomology,
    twists: &'a [Cochain],
    group: &'a Arc<FiniteGroup>,
    target: &'a UnitriQuotient,
}

impl Walk<'_> {
    fn descend(
        &self,
        depth: usize,
        images: Vec<UniTriMatrix>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&UnitriHom) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if depth == self.steps.len() {
            let f = UnitriHom::new_unchecked(self.group.clone(), self.target.clone(), images);
            return Ok(visit(&f));
        }
        budget.tick()?;
        let step = &self.steps[depth];
        let Some(lift) = lift_through(step, self.coh, &images)? else {
            return Ok(ControlFlow::Continue(()));
        };
        for chi in self.twists {
            let next = twist_values(step, &lift, chi);
            if self.descend(depth + 1, next, budget, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;

    fn g(name: &str) -> Arc<FiniteGroup> {
        Arc::new(lookup_fixture(name).unwrap())
    }

    fn problem(group: &str, p: u8, chars: Vec<Vec<u8>>) -> UnitriProblem {
        let base = dwyer_base(g(group), p, &chars).unwrap();
        let n = chars.len() + 1;
        UnitriProblem::new(base, UnitriQuotient::full(n, p).unwrap()).unwrap()
    }

    #[test]
    fn z2_with_repeated_class_is_unsolvable() {
        let e = problem("Z2", 2, vec![vec![0, 1], vec![0, 1]]);
        for s in unitri_solvers().iter() {
            assert!(
                s.solve(&e, &mut Budget::unlimited()).unwrap().is_none(),
                "{}",
                s.name()
            );
        }
        assert_eq!(e.real_witness(&mut Budget::unlimited()).unwrap(), Some(1));
    }

    #[test]
    fn separated_ones_are_solvable() {
        let e = problem("Z2", 2, vec![vec![0, 1], vec![0, 0], vec![0, 1]]);
        for s in unitri_solvers().iter() {
            let f = s.solve(&e, &mut Budget::unlimited()).unwrap().unwrap();
            assert!(e.is_solution(&f), "{}", s.name());
            assert_eq!(f.characters(), vec![vec![0, 1], vec![0, 0], vec![0, 1]]);
        }
        assert_eq!(e.real_witness(&mut Budget::unlimited()).unwrap(), None);
    }

    #[test]
    fn levels_are_central_and_end_at_the_target() {
        let e = problem("V4", 2, vec![vec![0, 1, 0, 1]; 3]);
        let levels = e.levels().unwrap();
        assert_eq!(levels.len(), 4);
        assert_eq!(levels.last().unwrap(), e.target());
        assert_eq!(e.steps().unwrap().len(), 3);
    }

    #[test]
    fn solvers_agree_and_enumeration_counts_lifts() {
        // lifts of the trivial map V4 → (Z/2)^2 to U_3(2) are Hom(V4, Z/2)
        let e = problem("V4", 2, vec![vec![0; 4], vec![0; 4]]);
        let mut count = 0;
        assert!(for_each_lift(&e, &mut Budget::unlimited(), &mut |f| {
            assert!(e.is_solution(f));
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap());
        assert_eq!(count, 4);
    }

    #[test]
    fn solvers_agree_on_z4_triples() {
        let z4 = g("Z4");
        let a = vec![0u8, 1, 0, 1];
        for bits in 0..8u8 {
            let chars: Vec<Vec<u8>> = (0..3)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        a.clone()
                    } else {
                        vec![0; 4]
                    }
                })
                .collect();
            let base = dwyer_base(z4.clone(), 2, &chars).unwrap();
            let e = UnitriProblem::new(base, UnitriQuotient::full(4, 2).unwrap()).unwrap();
            let l = LayeredSolver.solve(&e, &mut Budget::unlimited()).unwrap();
            let f = UnitriFiberSolver
                .solve(&e, &mut Budget::unlimited())
                .unwrap();
            assert_eq!(l.is_some(), f.is_some(), "pattern {bits:03b}");
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let e = problem("Z2", 2, vec![vec![0, 1], vec![0, 0], vec![0, 1]]);
        assert!(matches!(
            LayeredSolver.solve(&e, &mut Budget::new(1)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
