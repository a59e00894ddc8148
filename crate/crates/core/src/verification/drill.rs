//! Lifting through the central filtration of `Ker φ_{n+1}` one level at a
//! time when `H^2(G, Z/p) = 0`.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::Cohomology;
use crate::embedding::{
    dwyer_base, lift_through, obstruction_class, SmallestLift, UnitriHom, UnitriProblem,
};
use crate::error::{Error, Result};
use crate::massey::for_each_tuple;
use crate::unitri::UnitriQuotient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrillReport {
    pub group: String,
    pub p: u8,
    pub n: usize,
    pub dim_h2: usize,
    pub tuples: usize,
    pub steps_per_tuple: usize,
    pub obstructions_checked: usize,
    pub nonzero_obstructions: usize,
    pub solved: usize,
}

impl DrillReport {
    pub fn holds(&self) -> bool {
        self.nonzero_obstructions == 0 && self.solved == self.tuples
    }
}

/// Solves `𝐄(a_1, …, a_n)` by lifting level by level; every obstruction
/// met on the way is recorded.
pub fn drill_lift(
    coh: &Arc<Cohomology>,
    characters: &[Vec<u8>],
) -> Result<(UnitriHom, Vec<Vec<u8>>)> {
    let p = coh.modulus();
    let n = characters.len();
    let base = dwyer_base(coh.group().clone(), p, characters)?;
    let problem = UnitriProblem::new(base.clone(), UnitriQuotient::full(n + 1, p)?)?
        .with_cohomology(coh.clone())?;
    let mut images = base.images().to_vec();
    let mut seen = Vec::new();
    for step in problem.steps()? {
        let o = obstruction_class(&step, coh, &images, &SmallestLift)?;
        seen.push(o.coords.clone());
        match lift_through(&step, coh, &images)? {
            Some(next) => images = next,
            None if !o.is_zero() => {
                return Err(Error::LiftImpossible(format!(
                    "obstruction {:?} at position {:?}",
                    o.coords, step.position
                )))
            }
            None => return Err(Error::Internal("zero obstruction but no lift".into())),
        }
    }
    let f = UnitriHom::new(coh.group().clone(), problem.target().clone(), images)?;
    if !problem.is_solution(&f) {
        return Err(Error::Internal("drill produced a non-solution".into()));
    }
    Ok((f, seen))
}

/// Runs [`drill_lift`] on every `n`-tuple; requires `H^2(G, Z/p) = 0`.
pub fn easy_vanishing_drill(coh: &Arc<Cohomology>, n: usize) -> Result<DrillReport> {
    if coh.h2_dim() != 0 {
        return Err(Error::NotApplicable(format!("dim H^2 = {}", coh.h2_dim())));
    }
    let mut report = DrillReport {
        group: coh.group().label().to_string(),
        p: coh.modulus(),
        n,
        dim_h2: 0,
        tuples: 0,
        steps_per_tuple: n * (n + 1) / 2 - n,
        obstructions_checked: 0,
        nonzero_obstructions: 0,
        solved: 0,
    };
    for_each_tuple(coh, n, &mut |q| {
        report.tuples += 1;
        let (_, seen) = drill_lift(coh, &q.values())?;
        report.obstructions_checked += seen.len();
        report.nonzero_obstructions += seen.iter().filter(|o| o.iter().any(|&v| v != 0)).count();
        report.solved += 1;
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;

    fn coh(name: &str, p: u8) -> Arc<Cohomology> {
        Arc::new(Cohomology::compute(Arc::new(lookup_fixture(name).unwrap()), p).unwrap())
    }

    #[test]
    fn coprime_cyclic_groups_drill_cleanly() {
        for (g, p) in [("Z3", 2), ("Z5", 2), ("S3", 5)] {
            let r = easy_vanishing_drill(&coh(g, p), 3).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.tuples, 1);
            assert_eq!(r.steps_per_tuple, 3);
        }
    }

    #[test]
    fn z2_is_not_applicable() {
        for (g, p) in [("Z2", 2), ("Z6", 3)] {
            assert!(matches!(
                easy_vanishing_drill(&coh(g, p), 3),
                Err(Error::NotApplicable(_))
            ));
        }
    }

    #[test]
    fn drill_reports_the_obstruction_it_meets() {
        let c = coh("Z2", 2);
        assert!(matches!(
            drill_lift(&c, &[vec![0, 1], vec![0, 1]]),
            Err(Error::LiftImpossible(_))
        ));
    }
}
