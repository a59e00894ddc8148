//! Sweeps of the twisting identity `o(E(ψχ)) = o(E(ψ)) + a_k ∪ χ`.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cochain::Cohomology;
use crate::embedding::{dwyer_base, for_each_lift, verify_twisting, PairHom, UnitriProblem};
use crate::error::{Error, Result};
use crate::massey::for_each_tuple;
use crate::search::Budget;
use crate::unitri::UnitriQuotient;

/// Every hom `G → Q_{k,n+1}` lifting some `−a_1 × ⋯ × −a_n`, in tuple order.
pub fn pair_homs(
    coh: &Arc<Cohomology>,
    n: usize,
    k: usize,
    budget: &mut Budget,
) -> Result<Vec<PairHom>> {
    let p = coh.modulus();
    let target = UnitriQuotient::q(k, n + 1, p)?;
    let mut out = Vec::new();
    for_each_tuple(coh, n, &mut |q| {
        let base = dwyer_base(coh.group().clone(), p, &q.values())?;
        let e = UnitriProblem::new(base, target.clone())?.with_cohomology(coh.clone())?;
        let mut err = None;
        for_each_lift(&e, budget, &mut |psi| match PairHom::from_unitri(psi, k) {
            Ok(h) => {
                out.push(h);
                ControlFlow::Continue(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(ControlFlow::Continue(())),
        }
    })?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistingFailure {
    pub psi: Vec<String>,
    pub chi: Vec<u8>,
    pub twisted: Vec<u8>,
    pub untwisted: Vec<u8>,
    pub cup: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistingAudit {
    pub group: String,
    pub p: u8,
    pub n: usize,
    /// `ψ` maps into `Q_{k+1,n+1}`; the identity is about lifting to `Q_{k,n+1}`.
    pub k: usize,
    pub homs: usize,
    pub instances: usize,
    pub nonzero_cups: usize,
    pub failures: Vec<TwistingFailure>,
}

impl TwistingAudit {
    pub fn holds(&self) -> bool {
        self.instances > 0 && self.failures.is_empty()
    }
}

/// All pairs `(ψ, χ)`, or `sample = Some((seed, count))` pairs drawn with
/// replacement.
pub fn twisting_audit(
    coh: &Arc<Cohomology>,
    n: usize,
    k: usize,
    sample: Option<(u64, usize)>,
    budget: &mut Budget,
) -> Result<TwistingAudit> {
    if k == 0 || k + 2 > n + 1 {
        return Err(Error::BadParameter(format!(
            "twisting needs 1 ≤ k ≤ n − 1, got k = {k}, n = {n}"
        )));
    }
    let homs = pair_homs(coh, n, k + 1, budget)?;
    let chis = coh.h1_elements()?;
    let pairs: Vec<(usize, usize)> = match sample {
        None => (0..homs.len())
            .flat_map(|i| (0..chis.len()).map(move |j| (i, j)))
            .collect(),
        Some((seed, count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| (rng.gen_range(0..homs.len()), rng.gen_range(0..chis.len())))
                .collect()
        }
    };
    let mut audit = TwistingAudit {
        group: coh.group().label().to_string(),
        p: coh.modulus(),
        n,
        k,
        homs: homs.len(),
        instances: 0,
        nonzero_cups: 0,
        failures: Vec::new(),
    };
    for (i, j) in pairs {
        budget.tick()?;
        let r = verify_twisting(coh, &homs[i], &chis[j])?;
        audit.instances += 1;
        audit.nonzero_cups += r.cup.iter().any(|&v| v != 0) as usize;
        if !r.holds {
            audit.failures.push(TwistingFailure {
                psi: homs[i].matrices().iter().map(|m| m.to_literal()).collect(),
                chi: coh.h1_coords(&chis[j])?,
                twisted: r.twisted,
                untwisted: r.untwisted,
                cup: r.cup,
            });
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;

    fn coh(name: &str, p: u8) -> Arc<Cohomology> {
        Arc::new(Cohomology::compute(Arc::new(lookup_fixture(name).unwrap()), p).unwrap())
    }

    #[test]
    fn exhaustive_on_v4() {
        let a = twisting_audit(&coh("V4", 2), 3, 1, None, &mut Budget::unlimited()).unwrap();
        assert!(a.holds(), "{a:?}");
        assert_eq!(a.instances, a.homs * 4);
        assert!(a.nonzero_cups > 0);
    }

    #[test]
    fn sampled_at_p3_sees_nonzero_cups() {
        let a = twisting_audit(
            &coh("Z3xZ3", 3),
            3,
            1,
            Some((7, 100)),
            &mut Budget::unlimited(),
        )
        .unwrap();
        assert!(a.holds(), "{:?}", a.failures.first());
        assert_eq!(a.instances, 100);
        assert!(a.nonzero_cups > 0);
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let c = coh("Z2", 2);
        assert!(twisting_audit(&c, 3, 3, None, &mut Budget::unlimited()).is_err());
    }
}
