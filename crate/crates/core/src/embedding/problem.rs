//! Embedding problems between materialized groups.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{for_each_hom, FiniteGroup, GroupHom, HomConstraint};
use crate::registry::{Named, Registry};
use crate::search::Budget;

/// Find `φ̃ : G → B` with `α ∘ φ̃ = φ`, where `α : B → A` is onto.
#[derive(Clone, Debug)]
pub struct EmbeddingProblem {
    pub alpha: GroupHom,
    pub phi: GroupHom,
}

impl EmbeddingProblem {
    pub fn new(alpha: GroupHom, phi: GroupHom) -> Result<Self> {
        if !alpha.is_surjective() {
            return Err(Error::BadParameter("α is not surjective".into()));
        }
        if **alpha.codomain() != **phi.codomain() {
            return Err(Error::TargetMismatch(
                "φ and α have different targets".into(),
            ));
        }
        Ok(EmbeddingProblem { alpha, phi })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        self.phi.domain()
    }

    pub fn extension(&self) -> &Arc<FiniteGroup> {
        self.alpha.domain()
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        self.alpha.codomain()
    }

    /// Exhaustive recheck of a proposed solution.
    pub fn is_solution(&self, f: &GroupHom) -> bool {
        let g = self.source();
        f.domain().order() == g.order()
            && f.codomain().order() == self.extension().order()
            && g.elements()
                .all(|x| self.alpha.apply(f.apply(x)) == self.phi.apply(x))
            && g.elements().all(|x| {
                g.elements()
                    .all(|y| f.apply(g.mul(x, y)) == self.extension().mul(f.apply(x), f.apply(y)))
            })
    }

    /// Every involution `t` with `φ(t) ≠ 1` has an involution over `φ(t)`;
    /// on failure returns the first `t` without one.
    pub fn is_real(&self) -> std::result::Result<(), usize> {
        let b = self.extension();
        let inv_b = b.involutions();
        for t in self.source().involutions() {
            let a = self.phi.apply(t);
            if a != 0 && !inv_b.iter().any(|&x| self.alpha.apply(x) == a) {
                return Err(t);
            }
        }
        Ok(())
    }
}

pub trait LiftSolver: Named + Send + Sync {
    /// A solution, `None` after certified exhaustion, or `BudgetExceeded`.
    fn solve(&self, problem: &EmbeddingProblem, budget: &mut Budget) -> Result<Option<GroupHom>>;
}

/// Generator images restricted to the `α`-fiber of the forced value.
pub struct FiberSolver;

impl Named for FiberSolver {
    fn name(&self) -> &'static str {
        "fiber"
    }
    fn describe(&self) -> &'static str {
        "backtracking with each generator image drawn from its α-fiber"
    }
}

impl LiftSolver for FiberSolver {
    fn solve(&self, problem: &EmbeddingProblem, budget: &mut Budget) -> Result<Option<GroupHom>> {
        let forced = problem.phi.generator_images();
        let constraint = HomConstraint::Fiber {
            alpha: &problem.alpha,
            forced: &forced,
        };
        let mut found = None;
        for_each_hom(
            problem.source(),
            problem.extension(),
            &constraint,
            budget,
            &mut |f| {
                found = Some(f);
                ControlFlow::Break(())
            },
        )?;
        Ok(found)
    }
}

/// Unconstrained enumeration filtered afterwards; an oracle for the fiber
/// solver.
pub struct BruteSolver;

impl Named for BruteSolver {
    fn name(&self) -> &'static str {
        "brute"
    }
    fn describe(&self) -> &'static str {
        "all homomorphisms G → B, filtered by α ∘ f = φ"
    }
}

impl LiftSolver for BruteSolver {
    fn solve(&self, problem: &EmbeddingProblem, budget: &mut Budget) -> Result<Option<GroupHom>> {
        let g = problem.source().clone();
        let mut found = None;
        for_each_hom(
            &g,
            problem.extension(),
            &HomConstraint::Free,
            budget,
            &mut |f| {
                if g.elements()
                    .all(|x| problem.alpha.apply(f.apply(x)) == problem.phi.apply(x))
                {
                    found = Some(f);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            },
        )?;
        Ok(found)
    }
}

pub fn lift_solvers() -> Registry<dyn LiftSolver> {
    Registry::<dyn LiftSolver>::new("lift solver")
        .with(Box::new(FiberSolver))
        .with(Box::new(BruteSolver))
}

/// Kernel of a central problem identified with `Z/p`: `coords[x]` is the
/// coordinate of `x` for kernel elements.
#[derive(Clone, Debug)]
pub struct CentralProblemData {
    pub problem: EmbeddingProblem,
    pub p: u8,
    pub kernel: Vec<usize>,
    pub generator: usize,
    coords: Vec<Option<u8>>,
}

impl CentralProblemData {
    pub fn coord(&self, x: usize) -> Result<u8> {
        self.coords[x].ok_or(Error::NotInKernel)
    }

    /// `generator^t`.
    pub fn kernel_element(&self, t: u8) -> usize {
        let b = self.problem.extension();
        let mut x = 0;
        for _ in 0..t {
            x = b.mul(x, self.generator);
        }
        x
    }
}

/// Identifies the kernel with `Z/p` via the smallest-index generator unless
/// `generator` is given. The resulting class depends on that choice only up
/// to a unit.
pub fn central_data(
    problem: &EmbeddingProblem,
    generator: Option<usize>,
) -> Result<CentralProblemData> {
    let b = problem.extension();
    let kernel = problem.alpha.kernel();
    for &z in &kernel {
        if !b.elements().all(|x| b.mul(x, z) == b.mul(z, x)) {
            return Err(Error::NotCentral { element: z });
        }
    }
    let order = kernel.len();
    let p = match order {
        2 | 3 | 5 | 7 | 11 | 13 => order as u8,
        _ => {
            return Err(Error::KernelNotOrderP {
                order,
                p: order.min(255) as u8,
            })
        }
    };
    let generator = generator.unwrap_or(kernel[1]);
    if !kernel.contains(&generator) || generator == 0 {
        return Err(Error::NotInKernel);
    }
    let mut coords = vec![None; b.order()];
    let mut x = 0;
    for t in 0..p {
        coords[x] = Some(t);
        x = b.mul(x, generator);
    }
    Ok(CentralProblemData {
        problem: problem.clone(),
        p,
        kernel,
        generator,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, lookup_fixture};

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    /// Z/4 → Z/2 reduction, with φ = id on Z/2.
    fn z4_over_z2() -> EmbeddingProblem {
        let z2 = arc(build_cyclic(2).unwrap());
        let z4 = arc(build_cyclic(4).unwrap());
        let alpha = GroupHom::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
        EmbeddingProblem::new(alpha, GroupHom::identity(z2)).unwrap()
    }

    #[test]
    fn identity_alpha_is_solved_by_phi() {
        let v4 = arc(lookup_fixture("V4").unwrap());
        let z2 = arc(build_cyclic(2).unwrap());
        let phi = GroupHom::new(v4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let e = EmbeddingProblem::new(GroupHom::identity(z2), phi.clone()).unwrap();
        for s in lift_solvers().iter() {
            let f = s.solve(&e, &mut Budget::unlimited()).unwrap().unwrap();
            assert_eq!(f.images(), phi.images());
        }
    }

    #[test]
    fn z2_does_not_lift_to_z4() {
        let e = z4_over_z2();
        for s in lift_solvers().iter() {
            assert!(
                s.solve(&e, &mut Budget::unlimited()).unwrap().is_none(),
                "{}",
                s.name()
            );
        }
        assert_eq!(e.is_real(), Err(1));
    }

    #[test]
    fn central_data_of_z4_over_z2() {
        let d = central_data(&z4_over_z2(), None).unwrap();
        assert_eq!(d.kernel, vec![0, 2]);
        assert_eq!(d.coord(2).unwrap(), 1);
        assert_eq!(d.coord(1), Err(Error::NotInKernel));
    }

    #[test]
    fn trivial_kernel_is_rejected() {
        let z2 = arc(build_cyclic(2).unwrap());
        let e =
            EmbeddingProblem::new(GroupHom::identity(z2.clone()), GroupHom::identity(z2)).unwrap();
        assert!(matches!(
            central_data(&e, None),
            Err(Error::KernelNotOrderP { order: 1, .. })
        ));
    }

    #[test]
    fn non_central_kernel_is_rejected() {
        // S3 → Z/2 has kernel A3, not central
        let s3 = arc(lookup_fixture("S3").unwrap());
        let z2 = arc(build_cyclic(2).unwrap());
        let sign: Vec<usize> = s3
            .elements()
            .map(|x| if s3.element_order(x) == 2 { 1 } else { 0 })
            .collect();
        let alpha = GroupHom::new(s3, z2.clone(), sign).unwrap();
        let e = EmbeddingProblem::new(alpha, GroupHom::identity(z2)).unwrap();
        assert!(matches!(
            central_data(&e, None),
            Err(Error::NotCentral { .. })
        ));
    }

    #[test]
    fn budget_is_reported() {
        let e = z4_over_z2();
        let r = FiberSolver.solve(&e, &mut Budget::new(0));
        assert_eq!(r, Err(Error::BudgetExceeded { limit: 0 }));
    }
}
