//! Defining systems and Massey products of classes in `H^1(G, Z/p)`.

mod query;
mod strategy;

use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{hom_to_cochain, Cochain, Cohomology, CohomologyClass};
use crate::embedding::UnitriHom;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use query::QueryFile;
pub use strategy::{
    consecutive_cups_zero, for_each_tuple, lift_problem, massey_product_set, massey_strategies,
    strong_massey_vanishing, CupCheck, ExhaustiveCochain, HomLift, MasseySet, MasseyStrategy,
    StrongVanishing, EXHAUSTIVE_MAX_N, EXHAUSTIVE_MAX_ORDER,
};

/// Classes `a_1, …, a_n` in `H^1(G, Z/p)`, each a 1-cocycle (equivalently a
/// homomorphism `G → Z/p`).
#[derive(Clone, Debug)]
pub struct MasseyQuery {
    coh: Arc<Cohomology>,
    classes: Vec<Cochain>,
}

impl MasseyQuery {
    pub fn new(coh: Arc<Cohomology>, classes: Vec<Cochain>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(Error::BadParameter(format!(
                "n = {} but Massey products need n ≥ 2",
                classes.len()
            )));
        }
        for a in &classes {
            coh.h1_coords(a)?;
        }
        Ok(MasseyQuery { coh, classes })
    }

    /// Classes from their values on every element of `G`.
    pub fn from_values(coh: Arc<Cohomology>, values: &[Vec<u8>]) -> Result<Self> {
        let classes = values
            .iter()
            .map(|v| hom_to_cochain(coh.group(), coh.modulus(), v))
            .collect::<Result<Vec<_>>>()?;
        MasseyQuery::new(coh, classes)
    }

    /// Classes from coordinates in the `H^1` basis.
    pub fn from_coords(coh: Arc<Cohomology>, coords: &[Vec<u8>]) -> Result<Self> {
        let classes = coords
            .iter()
            .map(|c| coh.h1_element(c))
            .collect::<Result<Vec<_>>>()?;
        MasseyQuery::new(coh, classes)
    }

    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn modulus(&self) -> u8 {
        self.coh.modulus()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.coh.group()
    }

    pub fn cohomology(&self) -> &Arc<Cohomology> {
        &self.coh
    }

    pub fn classes(&self) -> &[Cochain] {
        &self.classes
    }

    /// `a_i(g)` for every `g`, one row per class.
    pub fn values(&self) -> Vec<Vec<u8>> {
        self.classes
            .iter()
            .map(|a| {
                self.group()
                    .elements()
                    .map(|x| if x == 0 { 0 } else { a.get(&[x]) })
                    .collect()
            })
            .collect()
    }

    /// `H^1` coordinates of each class.
    pub fn coords(&self) -> Vec<Vec<u8>> {
        self.classes
            .iter()
            .map(|a| self.coh.h1_coords(a).expect("checked at construction"))
            .collect()
    }
}

/// Entries `a_{ij}`, `1 ≤ i < j ≤ n+1`, `(i, j) ≠ (1, n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    n: usize,
    entries: Vec<Cochain>,
}

/// Where a defining-system equation fails: `δa_{ij}(x, y) ≠ Σ a_{ik} ∪ a_{kj}(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemWitness {
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub y: usize,
}

fn slot(n: usize, i: usize, j: usize) -> Option<usize> {
    if i == 0 || j <= i || j > n + 1 || (i, j) == (1, n + 1) {
        return None;
    }
    // row-major over the strict upper triangle of an (n+1)-matrix, minus (1, n+1)
    let m = n + 1;
    let before_row: usize = (1..i).map(|r| m - r).sum();
    let idx = before_row + (j - i - 1);
    Some(if i == 1 { idx } else { idx - 1 })
}

impl DefiningSystem {
    pub fn positions(n: usize) -> Vec<(usize, usize)> {
        (1..=n + 1)
            .flat_map(|i| (i + 1..=n + 1).map(move |j| (i, j)))
            .filter(|&p| p != (1, n + 1))
            .collect()
    }

    /// `entry(i, j)` for each position in [`DefiningSystem::positions`].
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> Cochain) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParameter("defining systems need n ≥ 2".into()));
        }
        let entries: Vec<Cochain> = Self::positions(n)
            .into_iter()
            .map(|(i, j)| entry(i, j))
            .collect();
        let first = &entries[0];
        if entries.iter().any(|c| {
            c.degree() != 1 || c.modulus() != first.modulus() || **c.group() != **first.group()
        }) {
            return Err(Error::ShapeMismatch(
                "entries must be 1-cochains on one group".into(),
            ));
        }
        Ok(DefiningSystem { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.entries[0].group()
    }

    pub fn modulus(&self) -> u8 {
        self.entries[0].modulus()
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&Cochain> {
        slot(self.n, i, j)
            .map(|s| &self.entries[s])
            .ok_or(Error::IndexOutOfRange {
                i,
                j,
                n: self.n + 1,
            })
    }

    pub fn set(&mut self, i: usize, j: usize, value: Cochain) -> Result<()> {
        let s = slot(self.n, i, j).ok_or(Error::IndexOutOfRange {
            i,
            j,
            n: self.n + 1,
        })?;
        if value.degree() != 1
            || **value.group() != **self.group()
            || value.modulus() != self.modulus()
        {
            return Err(Error::ShapeMismatch(
                "entry must be a 1-cochain on the same group".into(),
            ));
        }
        self.entries[s] = value;
        Ok(())
    }

    /// `Σ_{k=i+1}^{j−1} a_{ik} ∪ a_{kj}`; also defined for `(1, n+1)`.
    pub fn rhs(&self, i: usize, j: usize) -> Result<Cochain> {
        let mut acc = Cochain::zero(self.group().clone(), self.modulus(), 2)?;
        for k in i + 1..j {
            acc = acc.add(&self.get(i, k)?.cup(self.get(k, j)?)?)?;
        }
        Ok(acc)
    }

    /// The first failing equation in position order, then argument order.
    pub fn check(&self) -> Result<Option<SystemWitness>> {
        for (i, j) in Self::positions(self.n) {
            let lhs = self.get(i, j)?.coboundary()?;
            let rhs = self.rhs(i, j)?;
            if lhs != rhs {
                let g = self.group();
                for x in g.elements().skip(1) {
                    for y in g.elements().skip(1) {
                        if lhs.get(&[x, y]) != rhs.get(&[x, y]) {
                            return Ok(Some(SystemWitness { i, j, x, y }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_defining_system(&self) -> Result<bool> {
        Ok(self.check()?.is_none())
    }

    /// `Σ_{k=2}^{n} a_{1k} ∪ a_{k,n+1}`, a 2-cocycle for a defining system.
    pub fn massey_cocycle(&self) -> Result<Cochain> {
        self.rhs(1, self.n + 1)
    }

    pub fn massey_value(&self, coh: &Cohomology) -> Result<CohomologyClass> {
        if let Some(w) = self.check()? {
            return Err(Error::NotADefiningSystem(format!(
                "equation ({}, {}) fails at ({}, {})",
                w.i, w.j, w.x, w.y
            )));
        }
        coh.class_of(&self.massey_cocycle()?)
    }

    /// The classes `a_{i,i+1}`.
    pub fn boundary(&self) -> Vec<&Cochain> {
        (1..=self.n)
            .map(|i| self.get(i, i + 1).expect("superdiagonal entry"))
            .collect()
    }
}

/// How matrix entries become cochain entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntrySign {
    /// `a_{ij} = −e_{ij}`, matching `φ ∘ ψ = −a_1 × ⋯ × −a_n`.
    Negated,
    /// `a_{ij} = +e_{ij}`; used only to show that the sign matters.
    Plain,
}

/// The entries of `ψ : G → U_{n+1}(p)/N` with `N ⊂ Z_{n+1}` as 1-cochains.
pub fn system_from_entries(psi: &UnitriHom, sign: EntrySign) -> Result<DefiningSystem> {
    let t = psi.target();
    let n = t.size() - 1;
    if let Some(&(i, j)) = t.killed_positions().iter().find(|&&q| q != (1, n + 1)) {
        return Err(Error::TargetMismatch(format!(
            "entry ({i}, {j}) is not available in the target"
        )));
    }
    let p = t.modulus();
    let g = psi.group().clone();
    DefiningSystem::from_fn(n, |i, j| {
        let values: Vec<u8> = psi
            .images()
            .iter()
            .map(|m| match sign {
                EntrySign::Negated => (p - m.at(i, j)) % p,
                EntrySign::Plain => m.at(i, j),
            })
            .collect();
        Cochain::from_fn(g.clone(), p, 1, |args| values[args[0]]).expect("degree 1")
    })
}

/// `a_{ij} = −e_{ij}(ψ)` for `ψ` into `U_{n+1}(p)` or `U_{n+1}(p)/Z_{n+1}`.
pub fn defining_system_from_hom(psi: &UnitriHom) -> Result<DefiningSystem> {
    system_from_entries(psi, EntrySign::Negated)
}

#[cfg(test)]
mod tests {
    use std::ops::ControlFlow;

    use super::*;
    use crate::embedding::{dwyer_base, for_each_lift, UnitriProblem};
    use crate::group::lookup_fixture;
    use crate::search::Budget;
    use crate::unitri::UnitriQuotient;

    fn coh(name: &str, p: u8) -> Arc<Cohomology> {
        Arc::new(Cohomology::compute(Arc::new(lookup_fixture(name).unwrap()), p).unwrap())
    }

    #[test]
    fn slots_cover_the_positions() {
        for n in 2..6 {
            let pos = DefiningSystem::positions(n);
            for (k, &(i, j)) in pos.iter().enumerate() {
                assert_eq!(slot(n, i, j), Some(k));
            }
            assert_eq!(slot(n, 1, n + 1), None);
        }
    }

    /// Every hom into `U_{n+1}(p)/Z` yields a defining system; visits them all.
    fn all_systems(c: &Arc<Cohomology>, values: &[Vec<u8>], mut f: impl FnMut(&UnitriHom)) {
        let n = values.len();
        let base = dwyer_base(c.group().clone(), c.modulus(), values).unwrap();
        let e = UnitriProblem::new(
            base,
            UnitriQuotient::modulo_center(n + 1, c.modulus()).unwrap(),
        )
        .unwrap()
        .with_cohomology(c.clone())
        .unwrap();
        for_each_lift(&e, &mut Budget::unlimited(), &mut |psi| {
            f(psi);
            ControlFlow::Continue(())
        })
        .unwrap();
    }

    #[test]
    fn systems_from_homs_are_defining_systems() {
        for name in ["Z2", "Z4", "V4"] {
            let c = coh(name, 2);
            let h1 = c.h1_elements().unwrap();
            for a in &h1 {
                for b in &h1 {
                    for d in &h1 {
                        let q = MasseyQuery::new(c.clone(), vec![a.clone(), b.clone(), d.clone()])
                            .unwrap();
                        all_systems(&c, &q.values(), |psi| {
                            let ds = defining_system_from_hom(psi).unwrap();
                            assert!(ds.is_defining_system().unwrap());
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn perturbation_breaks_the_system_with_a_witness() {
        let c = coh("V4", 2);
        let z = vec![0u8; 4];
        let mut found = false;
        all_systems(&c, &[z.clone(), z.clone(), z], |psi| {
            if found {
                return;
            }
            let mut ds = defining_system_from_hom(psi).unwrap();
            let mut a = ds.get(1, 3).unwrap().clone();
            a.set(&[1], (a.get(&[1]) + 1) % 2).unwrap();
            ds.set(1, 3, a).unwrap();
            let w = ds.check().unwrap().unwrap();
            assert_eq!((w.i, w.j), (1, 3));
            assert!(matches!(
                ds.massey_value(&c),
                Err(Error::NotADefiningSystem(_))
            ));
            found = true;
        });
        assert!(found);
    }

    #[test]
    fn plain_sign_fails_somewhere_at_p3() {
        let c = coh("Z3", 3);
        let h1 = c.h1_elements().unwrap();
        let mut negated_ok = true;
        let mut plain_fails = false;
        for a in &h1 {
            for b in &h1 {
                for d in &h1 {
                    let q =
                        MasseyQuery::new(c.clone(), vec![a.clone(), b.clone(), d.clone()]).unwrap();
                    all_systems(&c, &q.values(), |psi| {
                        negated_ok &= system_from_entries(psi, EntrySign::Negated)
                            .unwrap()
                            .is_defining_system()
                            .unwrap();
                        plain_fails |= !system_from_entries(psi, EntrySign::Plain)
                            .unwrap()
                            .is_defining_system()
                            .unwrap();
                    });
                }
            }
        }
        assert!(negated_ok);
        assert!(plain_fails);
    }

    #[test]
    fn two_fold_value_is_the_cup_product() {
        let c = coh("V4", 2);
        let h1 = c.h1_elements().unwrap();
        for a in &h1 {
            for b in &h1 {
                let ds =
                    DefiningSystem::from_fn(2, |i, _| if i == 1 { a.clone() } else { b.clone() })
                        .unwrap();
                assert_eq!(ds.massey_value(&c).unwrap(), c.cup_class(a, b).unwrap());
            }
        }
    }

    #[test]
    fn zero_system_has_zero_value() {
        let c = coh("Z4", 2);
        let zero = Cochain::zero(c.group().clone(), 2, 1).unwrap();
        let ds = DefiningSystem::from_fn(3, |_, _| zero.clone()).unwrap();
        assert!(ds.massey_value(&c).unwrap().is_zero());
    }

    #[test]
    fn block_lift_system_for_separated_pattern() {
        let c = coh("Z2", 2);
        let a = vec![0u8, 1];
        let z = vec![0u8, 0];
        all_systems(&c, &[a.clone(), z.clone(), a.clone()], |psi| {
            let ds = defining_system_from_hom(psi).unwrap();
            let b = ds.boundary();
            assert_eq!(b[0].get(&[1]), 1);
            assert!(b[1].is_zero());
            assert_eq!(b[2].get(&[1]), 1);
        });
    }
}
