//! Central extensions with kernel `Z/p`: obstruction cocycles and
//! constructive lifting, written once for every representation of the
//! extension.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use super::problem::CentralProblemData;
use crate::cochain::{Cochain, Cohomology, CohomologyClass};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::registry::{Named, Registry};
use crate::unitri::{FiberPair, FiberQuotient, UniTriMatrix, UnitriQuotient};

/// A central extension `1 → Z/p → B → A → 1` with a fixed identification
/// of the kernel. Each fiber of `B → A` is listed in a fixed order of `p`
/// slots, slot 0 over the identity being the identity.
pub trait CentralStep {
    type Big: Clone + Eq + Hash + Debug;
    type Small: Clone + Eq + Hash + Debug;

    fn modulus(&self) -> u8;
    fn mul(&self, a: &Self::Big, b: &Self::Big) -> Self::Big;
    fn inv(&self, a: &Self::Big) -> Self::Big;
    fn project(&self, x: &Self::Big) -> Self::Small;
    fn section(&self, y: &Self::Small, slot: u8) -> Self::Big;
    fn kernel_coord(&self, x: &Self::Big) -> Result<u8>;
    fn kernel_element(&self, t: u8) -> Self::Big;
}

/// Which fiber element `φ̂(g)` picks for `g ≠ 1`; `φ̂(1) = 1` always.
pub trait LiftPolicy: Named + Send + Sync {
    fn slot(&self, p: u8) -> u8;
}

pub struct SmallestLift;

impl Named for SmallestLift {
    fn name(&self) -> &'static str {
        "smallest"
    }
    fn describe(&self) -> &'static str {
        "set-theoretic lift through the kernel coordinate 0"
    }
}

impl LiftPolicy for SmallestLift {
    fn slot(&self, _p: u8) -> u8 {
        0
    }
}

pub struct LargestLift;

impl Named for LargestLift {
    fn name(&self) -> &'static str {
        "largest"
    }
    fn describe(&self) -> &'static str {
        "set-theoretic lift through the kernel coordinate p − 1"
    }
}

impl LiftPolicy for LargestLift {
    fn slot(&self, p: u8) -> u8 {
        p - 1
    }
}

pub fn lift_policies() -> Registry<dyn LiftPolicy> {
    Registry::<dyn LiftPolicy>::new("lift policy")
        .with(Box::new(SmallestLift))
        .with(Box::new(LargestLift))
}

fn set_lift<S: CentralStep>(step: &S, images: &[S::Small], policy: &dyn LiftPolicy) -> Vec<S::Big> {
    let slot = policy.slot(step.modulus());
    images
        .iter()
        .enumerate()
        .map(|(x, y)| step.section(y, if x == 0 { 0 } else { slot }))
        .collect()
}

fn cocycle_of_lift<S: CentralStep>(
    step: &S,
    group: &Arc<FiniteGroup>,
    hat: &[S::Big],
) -> Result<Cochain> {
    let inv: Vec<S::Big> = hat.iter().map(|h| step.inv(h)).collect();
    let mut bad = None;
    let c = Cochain::from_fn(group.clone(), step.modulus(), 2, |args| {
        let (x, y) = (args[0], args[1]);
        let v = step.mul(&step.mul(&hat[group.mul(x, y)], &inv[y]), &inv[x]);
        step.kernel_coord(&v).unwrap_or_else(|_| {
            bad.get_or_insert((x, y));
            0
        })
    })?;
    match bad {
        Some((x, y)) => Err(Error::NotAHomomorphism { x, y }),
        None => Ok(c),
    }
}

/// `c(x, y) = φ̂(xy) φ̂(y)^{-1} φ̂(x)^{-1}` for the lift chosen by `policy`.
pub fn obstruction_cocycle<S: CentralStep>(
    step: &S,
    group: &Arc<FiniteGroup>,
    images: &[S::Small],
    policy: &dyn LiftPolicy,
) -> Result<Cochain> {
    if images.len() != group.order() {
        return Err(Error::ShapeMismatch(
            "one image per group element expected".into(),
        ));
    }
    let c = cocycle_of_lift(step, group, &set_lift(step, images, policy))?;
    if !c.coboundary()?.is_zero() {
        return Err(Error::NotACocycle);
    }
    Ok(c)
}

pub fn obstruction_class<S: CentralStep>(
    step: &S,
    coh: &Cohomology,
    images: &[S::Small],
    policy: &dyn LiftPolicy,
) -> Result<CohomologyClass> {
    coh.class_of(&obstruction_cocycle(step, coh.group(), images, policy)?)
}

/// A homomorphic lift of `images`, built as `φ̂ · k` from a 1-cochain `k`
/// with `δk = c`; `None` exactly when the obstruction class is nonzero.
pub fn lift_through<S: CentralStep>(
    step: &S,
    coh: &Cohomology,
    images: &[S::Small],
) -> Result<Option<Vec<S::Big>>> {
    let group = coh.group();
    if images.len() != group.order() {
        return Err(Error::ShapeMismatch(
            "one image per group element expected".into(),
        ));
    }
    let hat = set_lift(step, images, &SmallestLift);
    let c = cocycle_of_lift(step, group, &hat)?;
    let Some(k) = coh.coboundary_preimage(&c)? else {
        return Ok(None);
    };
    Ok(Some(twist_values(step, &hat, &k)))
}

/// `g ↦ f(g) · ι^{-1}(χ(g))` for a 1-cochain `χ`.
pub fn twist_values<S: CentralStep>(step: &S, images: &[S::Big], chi: &Cochain) -> Vec<S::Big> {
    images
        .iter()
        .enumerate()
        .map(|(x, f)| {
            let t = if x == 0 { 0 } else { chi.get(&[x]) };
            step.mul(f, &step.kernel_element(t))
        })
        .collect()
}

/// Table form: the data of [`central_data`](super::central_data).
impl CentralStep for CentralProblemData {
    type Big = usize;
    type Small = usize;

    fn modulus(&self) -> u8 {
        self.p
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.problem.extension().mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.problem.extension().inv(*a)
    }

    fn project(&self, x: &usize) -> usize {
        self.problem.alpha.apply(*x)
    }

    /// Fiber elements in index order.
    fn section(&self, y: &usize, slot: u8) -> usize {
        let b = self.problem.extension();
        let mut seen = 0;
        for x in b.elements() {
            if self.problem.alpha.apply(x) == *y {
                if seen == slot {
                    return x;
                }
                seen += 1;
            }
        }
        unreachable!("fibers of a surjection with kernel of order p have p elements")
    }

    fn kernel_coord(&self, x: &usize) -> Result<u8> {
        self.coord(*x)
    }

    fn kernel_element(&self, t: u8) -> usize {
        CentralProblemData::kernel_element(self, t)
    }
}

/// One step between pattern quotients of `U_n(p)`: `fine` frees exactly one
/// more position than `coarse`.
#[derive(Clone, Debug)]
pub struct PatternStep {
    pub fine: UnitriQuotient,
    pub coarse: UnitriQuotient,
    pub position: (usize, usize),
}

impl PatternStep {
    pub fn new(fine: UnitriQuotient, coarse: UnitriQuotient) -> Result<Self> {
        if !fine.refines(&coarse) {
            return Err(Error::TargetMismatch(
                "fine quotient does not refine the coarse one".into(),
            ));
        }
        let extra = fine.kernel_positions(&coarse);
        if extra.len() != 1 {
            return Err(Error::KernelNotOrderP {
                order: (fine.modulus() as usize).saturating_pow(extra.len() as u32),
                p: fine.modulus(),
            });
        }
        let (i, j) = extra[0];
        // the step is central iff everything above and to the right is killed
        if (i > 1 && !fine.is_killed(i - 1, j)) || (j < fine.size() && !fine.is_killed(i, j + 1)) {
            let z = UniTriMatrix::elementary(fine.size(), fine.modulus(), i, j, 1);
            return Err(Error::NotCentral {
                element: fine.index_of(&z),
            });
        }
        Ok(PatternStep {
            fine,
            coarse,
            position: (i, j),
        })
    }
}

impl CentralStep for PatternStep {
    type Big = UniTriMatrix;
    type Small = UniTriMatrix;

    fn modulus(&self) -> u8 {
        self.fine.modulus()
    }

    fn mul(&self, a: &UniTriMatrix, b: &UniTriMatrix) -> UniTriMatrix {
        self.fine.canonical(&a.mul(b))
    }

    fn inv(&self, a: &UniTriMatrix) -> UniTriMatrix {
        self.fine.canonical(&a.inv())
    }

    fn project(&self, x: &UniTriMatrix) -> UniTriMatrix {
        self.coarse.canonical(x)
    }

    fn section(&self, y: &UniTriMatrix, slot: u8) -> UniTriMatrix {
        let mut x = self.coarse.canonical(y);
        x.set(self.position.0, self.position.1, slot);
        x
    }

    fn kernel_coord(&self, x: &UniTriMatrix) -> Result<u8> {
        let (pi, pj) = self.position;
        if self
            .fine
            .free_positions()
            .iter()
            .all(|&(i, j)| (i, j) == (pi, pj) || x.at(i, j) == 0)
        {
            Ok(x.at(pi, pj))
        } else {
            Err(Error::NotInKernel)
        }
    }

    fn kernel_element(&self, t: u8) -> UniTriMatrix {
        let (i, j) = self.position;
        UniTriMatrix::elementary(self.fine.size(), self.fine.modulus(), i, j, t)
    }
}

/// `ρ_{k,m} : Q_{k,m} → Q_{k+1,m}` on pairs, kernel identified by `ι_{k,m}`.
#[derive(Clone, Copy, Debug)]
pub struct RhoStep {
    pub fine: FiberQuotient,
    pub coarse: FiberQuotient,
}

impl RhoStep {
    pub fn new(k: usize, m: usize, p: u8) -> Result<Self> {
        let fine = FiberQuotient::new(k, m, p)?;
        let (coarse, _) = fine.rho_map(&crate::group::GroupOps::identity(&fine))?;
        Ok(RhoStep { fine, coarse })
    }
}

impl CentralStep for RhoStep {
    type Big = FiberPair;
    type Small = FiberPair;

    fn modulus(&self) -> u8 {
        self.fine.modulus()
    }

    fn mul(&self, a: &FiberPair, b: &FiberPair) -> FiberPair {
        crate::group::GroupOps::op(&self.fine, a, b)
    }

    fn inv(&self, a: &FiberPair) -> FiberPair {
        crate::group::GroupOps::inverse(&self.fine, a)
    }

    fn project(&self, x: &FiberPair) -> FiberPair {
        self.fine.rho_map(x).expect("ρ is defined on this step").1
    }

    /// The only entry of `B` not fixed by `A` and the coarse block is the
    /// top-right corner; the slot is written there.
    fn section(&self, y: &FiberPair, slot: u8) -> FiberPair {
        let r = self.fine.m() + 1 - self.fine.k();
        let shared = y.a.lower_right(r - 1).expect("overlap block");
        let b = UniTriMatrix::from_fn(r, self.fine.modulus(), |i, j| {
            if (i, j) == (1, r) {
                slot
            } else if i == 1 {
                shared.at(1, j)
            } else {
                y.b.at(i - 1, j - 1)
            }
        });
        FiberPair { a: y.a, b }
    }

    fn kernel_coord(&self, x: &FiberPair) -> Result<u8> {
        self.fine.iota_map(x)
    }

    fn kernel_element(&self, t: u8) -> FiberPair {
        self.fine.kernel_element(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{central_data, EmbeddingProblem};
    use crate::group::{build_cyclic, lookup_fixture, GroupHom, GroupOps};

    #[test]
    fn z2_into_z4_has_nonzero_obstruction() {
        let z2 = Arc::new(build_cyclic(2).unwrap());
        let z4 = Arc::new(build_cyclic(4).unwrap());
        let alpha = GroupHom::new(z4, z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let e = EmbeddingProblem::new(alpha, GroupHom::identity(z2.clone())).unwrap();
        let d = central_data(&e, None).unwrap();
        let coh = Cohomology::compute(z2, 2).unwrap();
        for pol in lift_policies().iter() {
            let o = obstruction_class(&d, &coh, e.phi.images(), pol).unwrap();
            assert!(!o.is_zero());
        }
        assert!(lift_through(&d, &coh, e.phi.images()).unwrap().is_none());
    }

    #[test]
    fn trivial_map_has_zero_obstruction() {
        let g = Arc::new(lookup_fixture("V4").unwrap());
        let coh = Cohomology::compute(g.clone(), 2).unwrap();
        let step = RhoStep::new(1, 4, 2).unwrap();
        let id = step.coarse.identity();
        let images = vec![id; 4];
        let o = obstruction_class(&step, &coh, &images, &SmallestLift).unwrap();
        assert!(o.is_zero());
        let lift = lift_through(&step, &coh, &images).unwrap().unwrap();
        assert!(lift.iter().all(|x| step.project(x) == id));
    }

    #[test]
    fn sections_project_back() {
        let step = RhoStep::new(1, 4, 3).unwrap();
        for y in step.coarse.elements(1 << 12).unwrap() {
            for slot in 0..3 {
                let x = step.section(&y, slot);
                assert!(step.fine.contains(&x));
                assert_eq!(step.project(&x), y);
            }
        }
        let fine = UnitriQuotient::full(4, 2).unwrap();
        let coarse = UnitriQuotient::modulo_center(4, 2).unwrap();
        let ps = PatternStep::new(fine, coarse).unwrap();
        assert_eq!(ps.position, (1, 4));
    }

    #[test]
    fn non_central_pattern_step_is_rejected() {
        let fine = UnitriQuotient::full(3, 2).unwrap();
        let coarse = UnitriQuotient::new(3, 2, &[(1, 2), (1, 3)]).unwrap();
        assert!(PatternStep::new(fine, coarse).is_err());
    }
}
