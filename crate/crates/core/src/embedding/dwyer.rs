//! The lifting problems attached to a tuple of classes, and the twisting
//! identity for the tower `Q_{1,m} → Q_{2,m} → ⋯`.

use std::sync::Arc;

use serde::Serialize;

use super::central::{obstruction_class, LiftPolicy, PatternStep, RhoStep, SmallestLift};
use super::problem::EmbeddingProblem;
use super::unitri::UnitriHom;
use crate::cochain::{Cochain, Cohomology, CohomologyClass};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, GroupOps, PRODUCT_LIMIT};
use crate::massey::{defining_system_from_hom, MasseyQuery};
use crate::unitri::{FiberPair, FiberQuotient, MaterializedQuotient, UniTriMatrix, UnitriQuotient};

/// Which quotient of `U_{n+1}(p)` the tuple is lifted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DwyerTarget {
    Full,
    ModCenter,
    ModP,
}

impl DwyerTarget {
    pub fn quotient(self, n: usize, p: u8) -> Result<UnitriQuotient> {
        match self {
            DwyerTarget::Full => UnitriQuotient::full(n + 1, p),
            DwyerTarget::ModCenter => UnitriQuotient::modulo_center(n + 1, p),
            DwyerTarget::ModP => UnitriQuotient::modulo_p(n + 1, p),
        }
    }
}

/// `𝐄(a_1, …, a_n)` with both groups materialized.
#[derive(Clone, Debug)]
pub struct DwyerProblem {
    pub problem: EmbeddingProblem,
    pub extension: MaterializedQuotient,
    pub quotient: MaterializedQuotient,
}

impl DwyerProblem {
    /// A table solution as matrices.
    pub fn to_unitri(&self, f: &GroupHom) -> Result<UnitriHom> {
        let images = f
            .images()
            .iter()
            .map(|&x| self.extension.elems[x])
            .collect();
        UnitriHom::new(f.domain().clone(), self.extension.quotient.clone(), images)
    }
}

pub fn build_dwyer_problem(q: &MasseyQuery) -> Result<DwyerProblem> {
    build_dwyer_problem_to(q, DwyerTarget::Full)
}

/// `B = U_{n+1}(p)/N`, `A = (Z/p)^n`, `α = φ_{n+1}`, `φ = −a_1 × ⋯ × −a_n`.
pub fn build_dwyer_problem_to(q: &MasseyQuery, target: DwyerTarget) -> Result<DwyerProblem> {
    let (n, p) = (q.n(), q.modulus());
    let extension = target.quotient(n, p)?.materialize(PRODUCT_LIMIT)?;
    let quotient = UnitriQuotient::superdiagonal_only(n + 1, p)?.materialize(PRODUCT_LIMIT)?;
    let b = Arc::new(extension.group.clone());
    let a = Arc::new(quotient.group.clone());
    let alpha = GroupHom::new(b, a.clone(), extension.projection_to(&quotient)?)?;
    let base = super::unitri::dwyer_base(q.group().clone(), p, &q.values())?;
    let phi_images = base.images().iter().map(|m| quotient.index_of(m)).collect();
    let phi = GroupHom::new(q.group().clone(), a, phi_images)?;
    Ok(DwyerProblem {
        problem: EmbeddingProblem::new(alpha, phi)?,
        extension,
        quotient,
    })
}

/// A homomorphism `G → Q_{k,m}` in pair form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairHom {
    group: Arc<FiniteGroup>,
    quotient: FiberQuotient,
    images: Vec<FiberPair>,
}

impl PairHom {
    pub fn new(
        group: Arc<FiniteGroup>,
        quotient: FiberQuotient,
        images: Vec<FiberPair>,
    ) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::ShapeMismatch(
                "one image per group element expected".into(),
            ));
        }
        if let Some(bad) = images.iter().position(|x| !quotient.contains(x)) {
            return Err(Error::TargetMismatch(format!(
                "image of element {bad} is not a compatible pair"
            )));
        }
        for x in group.elements() {
            for y in group.elements() {
                if images[group.mul(x, y)] != quotient.op(&images[x], &images[y]) {
                    return Err(Error::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(PairHom {
            group,
            quotient,
            images,
        })
    }

    /// From a hom into the pattern quotient `U_m(p)/M_{k,m}`.
    pub fn from_unitri(psi: &UnitriHom, k: usize) -> Result<Self> {
        let t = psi.target();
        let quotient = FiberQuotient::new(k, t.size(), t.modulus())?;
        if *t != UnitriQuotient::q(k, t.size(), t.modulus())? {
            return Err(Error::TargetMismatch(format!(
                "target is not Q_{{{k},{}}}",
                t.size()
            )));
        }
        let images = psi
            .images()
            .iter()
            .map(|m| quotient.from_matrix(m))
            .collect::<Result<_>>()?;
        Ok(PairHom {
            group: psi.group().clone(),
            quotient,
            images,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn quotient(&self) -> &FiberQuotient {
        &self.quotient
    }

    pub fn images(&self) -> &[FiberPair] {
        &self.images
    }

    pub fn matrices(&self) -> Vec<UniTriMatrix> {
        self.images
            .iter()
            .map(|x| self.quotient.to_matrix(x))
            .collect()
    }

    /// `a_i` with `φ_{k,m} ∘ ψ = −a_1 × ⋯ × −a_{m−1}`.
    pub fn characters(&self) -> Vec<Vec<u8>> {
        let p = self.quotient.modulus();
        let mats = self.matrices();
        (1..self.quotient.m())
            .map(|i| mats.iter().map(|u| (p - u.at(i, i + 1)) % p).collect())
            .collect()
    }
}

/// `g ↦ ψ(g) χ(g)` with `χ` valued in `Ker ρ_{k,m}` through `ι_{k,m}`.
pub fn twist(psi: &PairHom, chi: &Cochain) -> Result<PairHom> {
    let q = psi.quotient;
    if q.k() + 2 > q.m() {
        return Err(Error::TargetMismatch(format!(
            "Ker ρ is not defined on Q_{{{},{}}}",
            q.k(),
            q.m()
        )));
    }
    if chi.degree() != 1 || **chi.group() != *psi.group || chi.modulus() != q.modulus() {
        return Err(Error::TargetMismatch(
            "χ must be a 1-cochain on the same group".into(),
        ));
    }
    if !chi.coboundary()?.is_zero() {
        return Err(Error::NotAHomomorphism { x: 0, y: 0 });
    }
    let images = psi
        .images
        .iter()
        .enumerate()
        .map(|(x, f)| {
            let t = if x == 0 { 0 } else { chi.get(&[x]) };
            q.op(f, &q.kernel_element(t))
        })
        .collect();
    PairHom::new(psi.group.clone(), q, images)
}

/// `o(E(ψ))` for `ψ : G → Q_{k+1,m}` and `E(ψ)` the lift along `ρ_{k,m}`.
pub fn rho_obstruction(
    coh: &Cohomology,
    psi: &PairHom,
    policy: &dyn LiftPolicy,
) -> Result<CohomologyClass> {
    let q = psi.quotient;
    if q.k() < 2 {
        return Err(Error::TargetMismatch(
            "ψ must land in Q_{k+1,m} with k ≥ 1".into(),
        ));
    }
    let step = RhoStep::new(q.k() - 1, q.m(), q.modulus())?;
    obstruction_class(&step, coh, &psi.images, policy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistingCheck {
    pub k: usize,
    pub twisted: Vec<u8>,
    pub untwisted: Vec<u8>,
    pub cup: Vec<u8>,
    pub holds: bool,
}

/// Both sides of `o(E(ψχ)) = o(E(ψ)) + a_k ∪ χ` for `ψ : G → Q_{k+1,n+1}`.
pub fn verify_twisting(coh: &Cohomology, psi: &PairHom, chi: &Cochain) -> Result<TwistingCheck> {
    let k = psi.quotient.k() - 1;
    let twisted = rho_obstruction(coh, &twist(psi, chi)?, &SmallestLift)?;
    let untwisted = rho_obstruction(coh, psi, &SmallestLift)?;
    let a_k = Cochain::from_fn(coh.group().clone(), coh.modulus(), 1, {
        let values = psi.characters()[k - 1].clone();
        move |args| values[args[0]]
    })?;
    let cup = coh.cup_class(&a_k, chi)?;
    let p = coh.modulus();
    let sum: Vec<u8> = untwisted
        .coords
        .iter()
        .zip(&cup.coords)
        .map(|(a, b)| (a + b) % p)
        .collect();
    Ok(TwistingCheck {
        k,
        holds: sum == twisted.coords,
        twisted: twisted.coords,
        untwisted: untwisted.coords,
        cup: cup.coords,
    })
}

/// How the obstruction to lifting `ψ : G → U/Z` to `U` relates to the
/// Massey value of the defining system read off `ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionVsMassey {
    pub obstruction: Vec<u8>,
    pub massey: Vec<u8>,
    pub equal: bool,
    pub negated: bool,
}

pub fn obstruction_vs_massey(coh: &Cohomology, psi: &UnitriHom) -> Result<ObstructionVsMassey> {
    let t = psi.target();
    let n = t.size() - 1;
    let full = UnitriQuotient::full(n + 1, t.modulus())?;
    let step = PatternStep::new(full, t.clone())?;
    let o = obstruction_class(&step, coh, psi.images(), &SmallestLift)?.coords;
    let m = defining_system_from_hom(psi)?.massey_value(coh)?.coords;
    let p = coh.modulus();
    let neg: Vec<u8> = m.iter().map(|&v| (p - v) % p).collect();
    Ok(ObstructionVsMassey {
        equal: o == m,
        negated: o == neg,
        obstruction: o,
        massey: m,
    })
}
