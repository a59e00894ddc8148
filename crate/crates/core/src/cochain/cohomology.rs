use std::sync::Arc;

use super::Cochain;
use crate::error::{Error, Result};
use crate::group::{build_cyclic, enumerate_homs, FiniteGroup, GroupHom, HomConstraint};
use crate::linalg::{AnyEchelon, Backend};
use crate::search::Budget;

/// Largest group whose second cohomology is computed densely.
pub const MAX_H2_ORDER: usize = 32;

/// A class in `H^1` or `H^2`, given by coordinates in the basis fixed by its
/// [`Cohomology`]. Equality of classes is equality of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyClass {
    pub degree: usize,
    pub coords: Vec<u8>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// `H^1(G, Z/p)` and `H^2(G, Z/p)` of the normalized complex, with the
/// solvers needed to name classes and invert `δ` on coboundaries.
#[derive(Clone, Debug)]
pub struct Cohomology {
    group: Arc<FiniteGroup>,
    p: u8,
    h1: Vec<Cochain>,
    h1_solver: AnyEchelon,
    h2: Vec<Cochain>,
    /// Tagged echelon of `δe_g` (slot `g − 1`) followed by the `H^2`
    /// representatives.
    h2_solver: AnyEchelon,
}

/// Degree-1 cochain of a homomorphism into `Z/p`, given by residues on all
/// elements.
pub fn hom_to_cochain(group: &Arc<FiniteGroup>, p: u8, values: &[u8]) -> Result<Cochain> {
    if values.len() != group.order() || values.first().is_some_and(|&v| v != 0) {
        return Err(Error::ShapeMismatch(
            "a homomorphism must have one value per element and send 1 to 0".into(),
        ));
    }
    Cochain::from_values(group.clone(), p, 1, values[1..].to_vec())
}

/// `dim H^1` counted through `|Hom(G, Z/p)| = p^{dim}`, with no linear
/// algebra involved.
pub fn h1_dim_via_homs(group: &Arc<FiniteGroup>, p: u8) -> Result<usize> {
    let target = Arc::new(build_cyclic(p as usize)?);
    let homs = enumerate_homs(
        group,
        &target,
        &HomConstraint::Free,
        &mut Budget::unlimited(),
    )?;
    let mut count = homs.len();
    let mut dim = 0;
    while count > 1 {
        if count % p as usize != 0 {
            return Err(Error::Internal(format!(
                "{} homomorphisms is not a power of {p}",
                homs.len()
            )));
        }
        count /= p as usize;
        dim += 1;
    }
    Ok(dim)
}

impl Cohomology {
    pub fn compute(group: Arc<FiniteGroup>, p: u8) -> Result<Self> {
        Self::with_backend(group, p, Backend::Auto)
    }

    pub fn with_backend(group: Arc<FiniteGroup>, p: u8, backend: Backend) -> Result<Self> {
        let n = group.order();
        if n > MAX_H2_ORDER {
            return Err(Error::size(
                "group order for H^2",
                n as u128,
                MAX_H2_ORDER as u128,
            ));
        }
        let n1 = n - 1;

        // Z^1 = ker δ^1: one equation f(x) − f(xy) + f(y) = 0 per pair
        let mut rows = AnyEchelon::new(backend, n1, 0, p)?;
        let mut eq = vec![0u8; n1];
        for x in 1..n {
            for y in 1..n {
                eq.iter_mut().for_each(|v| *v = 0);
                let xy = group.mul(x, y);
                eq[x - 1] = (eq[x - 1] + 1) % p;
                eq[y - 1] = (eq[y - 1] + 1) % p;
                if xy != 0 {
                    eq[xy - 1] = (eq[xy - 1] + p - 1) % p;
                }
                rows.insert(&eq);
            }
        }
        let h1: Vec<Cochain> = rows
            .nullspace()
            .into_iter()
            .map(|v| Cochain::from_values(group.clone(), p, 1, v))
            .collect::<Result<_>>()?;
        let mut h1_solver = AnyEchelon::new(backend, n1, h1.len(), p)?;
        for a in &h1 {
            h1_solver.insert(a.values());
        }

        // Z^2 = ker δ^2
        let w = n1 * n1;
        let at = |a: usize, b: usize| (a - 1) * n1 + (b - 1);
        let mut rows = AnyEchelon::new(backend, w, 0, p)?;
        let mut eq = vec![0u8; w];
        let mut touched = Vec::with_capacity(4);
        for a in 1..n {
            for b in 1..n {
                let ab = group.mul(a, b);
                for c in 1..n {
                    let bc = group.mul(b, c);
                    // f(b,c) − f(ab,c) + f(a,bc) − f(a,b)
                    touched.clear();
                    touched.push((at(b, c), 1u8));
                    if ab != 0 {
                        touched.push((at(ab, c), p - 1));
                    }
                    if bc != 0 {
                        touched.push((at(a, bc), 1));
                    }
                    touched.push((at(a, b), p - 1));
                    for &(i, v) in &touched {
                        eq[i] = (eq[i] + v) % p;
                    }
                    rows.insert(&eq);
                    for &(i, _) in &touched {
                        eq[i] = 0;
                    }
                }
            }
        }
        let z2 = rows.nullspace();

        let coboundaries: Vec<Cochain> = (1..n)
            .map(|g| {
                let mut e = Cochain::zero(group.clone(), p, 1)?;
                e.set(&[g], 1)?;
                e.coboundary()
            })
            .collect::<Result<_>>()?;
        let mut span = AnyEchelon::new(backend, w, 0, p)?;
        for b in &coboundaries {
            span.insert(b.values());
        }
        let mut h2 = Vec::new();
        for z in z2 {
            if span.insert(&z) {
                h2.push(Cochain::from_values(group.clone(), p, 2, z)?);
            }
        }
        let mut h2_solver = AnyEchelon::new(backend, w, n1 + h2.len(), p)?;
        for v in coboundaries.iter().chain(&h2) {
            h2_solver.insert(v.values());
        }
        Ok(Cohomology {
            group,
            p,
            h1,
            h1_solver,
            h2,
            h2_solver,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    /// Basis of `H^1 = Hom(G, Z/p)`.
    pub fn h1_basis(&self) -> &[Cochain] {
        &self.h1
    }

    pub fn h1_dim(&self) -> usize {
        self.h1.len()
    }

    pub fn h2_basis(&self) -> &[Cochain] {
        &self.h2
    }

    pub fn h2_dim(&self) -> usize {
        self.h2.len()
    }

    fn check_shape(&self, c: &Cochain, degree: usize) -> Result<()> {
        if c.degree() != degree || c.modulus() != self.p || c.group().order() != self.group.order()
        {
            return Err(Error::ShapeMismatch(format!(
                "expected a degree-{degree} cochain mod {} on a group of order {}",
                self.p,
                self.group.order()
            )));
        }
        Ok(())
    }

    /// Coordinates of a 1-cocycle in the `H^1` basis.
    pub fn h1_coords(&self, a: &Cochain) -> Result<Vec<u8>> {
        self.check_shape(a, 1)?;
        let (res, combo) = self.h1_solver.reduce(a.values());
        if res.iter().any(|&v| v != 0) {
            return Err(Error::NotACocycle);
        }
        Ok(combo)
    }

    pub fn h1_element(&self, coords: &[u8]) -> Result<Cochain> {
        if coords.len() != self.h1.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for dim H^1 = {}",
                coords.len(),
                self.h1.len()
            )));
        }
        let mut acc = Cochain::zero(self.group.clone(), self.p, 1)?;
        for (a, &c) in self.h1.iter().zip(coords) {
            acc = acc.add(&a.scale(c))?;
        }
        Ok(acc)
    }

    /// All of `H^1` in lexicographic order of coordinates.
    pub fn h1_elements(&self) -> Result<Vec<Cochain>> {
        let d = self.h1.len();
        let count = (self.p as usize).pow(d as u32);
        (0..count)
            .map(|mut i| {
                let mut coords = vec![0u8; d];
                for c in coords.iter_mut().rev() {
                    *c = (i % self.p as usize) as u8;
                    i /= self.p as usize;
                }
                self.h1_element(&coords)
            })
            .collect()
    }

    pub fn h2_element(&self, coords: &[u8]) -> Result<Cochain> {
        if coords.len() != self.h2.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for dim H^2 = {}",
                coords.len(),
                self.h2.len()
            )));
        }
        let mut acc = Cochain::zero(self.group.clone(), self.p, 2)?;
        for (z, &c) in self.h2.iter().zip(coords) {
            acc = acc.add(&z.scale(c))?;
        }
        Ok(acc)
    }

    /// Splits a 2-cocycle as `δk + Σ c_i z_i`; returns `(k, c)`.
    fn split(&self, z: &Cochain) -> Result<(Cochain, Vec<u8>)> {
        self.check_shape(z, 2)?;
        let (res, combo) = self.h2_solver.reduce(z.values());
        if res.iter().any(|&v| v != 0) {
            return Err(Error::NotACocycle);
        }
        let n1 = self.group.order() - 1;
        let k = Cochain::from_values(self.group.clone(), self.p, 1, combo[..n1].to_vec())?;
        Ok((k, combo[n1..].to_vec()))
    }

    pub fn class_of(&self, z: &Cochain) -> Result<CohomologyClass> {
        Ok(CohomologyClass {
            degree: 2,
            coords: self.split(z)?.1,
        })
    }

    pub fn zero_class(&self) -> CohomologyClass {
        CohomologyClass {
            degree: 2,
            coords: vec![0; self.h2.len()],
        }
    }

    /// Whether a 2-cochain lies in `B^2`. Non-cocycles are not coboundaries.
    pub fn is_coboundary(&self, z: &Cochain) -> Result<bool> {
        match self.split(z) {
            Ok((_, c)) => Ok(c.iter().all(|&v| v == 0)),
            Err(Error::NotACocycle) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// A 1-cochain `k` with `δk = z`, if one exists.
    pub fn coboundary_preimage(&self, z: &Cochain) -> Result<Option<Cochain>> {
        match self.split(z) {
            Ok((k, c)) if c.iter().all(|&v| v == 0) => Ok(Some(k)),
            Ok(_) | Err(Error::NotACocycle) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Class of `a ∪ b` for 1-cocycles.
    pub fn cup_class(&self, a: &Cochain, b: &Cochain) -> Result<CohomologyClass> {
        self.class_of(&a.cup(b)?)
    }

    /// The homomorphism `G → Z/p` of a cocycle, as residues on all elements.
    pub fn as_hom_values(&self, a: &Cochain) -> Result<Vec<u8>> {
        self.h1_coords(a)?;
        Ok(self
            .group
            .elements()
            .map(|x| if x == 0 { 0 } else { a.get(&[x]) })
            .collect())
    }

    pub fn as_group_hom(&self, a: &Cochain) -> Result<GroupHom> {
        let values = self.as_hom_values(a)?;
        let target = Arc::new(build_cyclic(self.p as usize)?);
        GroupHom::new(
            self.group.clone(),
            target,
            values.into_iter().map(|v| v as usize).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coh(name: &str, p: u8) -> Cohomology {
        Cohomology::compute(Arc::new(lookup_fixture(name).unwrap()), p).unwrap()
    }

    #[test]
    fn small_dimensions() {
        let cases = [
            ("Z1", 2, 0, 0),
            ("Z2", 2, 1, 1),
            ("Z3", 2, 0, 0),
            ("Z4", 2, 1, 1),
            ("V4", 2, 2, 3),
            ("Z3", 3, 1, 1),
            ("S3", 2, 1, 1),
            ("S3", 3, 0, 0),
            ("S3", 5, 0, 0),
            ("Q8", 2, 2, 2),
            ("D4", 2, 2, 3),
            ("Z2xZ2xZ2", 2, 3, 6),
        ];
        for (name, p, d1, d2) in cases {
            let c = coh(name, p);
            assert_eq!((c.h1_dim(), c.h2_dim()), (d1, d2), "{name} mod {p}");
        }
    }

    #[test]
    fn h1_two_paths_agree() {
        for name in ["Z2", "Z4", "V4", "S3", "Q8", "D4", "Z6", "Z3xZ3"] {
            for p in [2u8, 3] {
                let g = Arc::new(lookup_fixture(name).unwrap());
                let c = Cohomology::compute(g.clone(), p).unwrap();
                assert_eq!(
                    c.h1_dim(),
                    h1_dim_via_homs(&g, p).unwrap(),
                    "{name} mod {p}"
                );
                for a in c.h1_basis() {
                    assert!(a.coboundary().unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn a_cup_a_on_z2_is_not_a_coboundary() {
        let c = coh("Z2", 2);
        let a = &c.h1_basis()[0];
        let aa = a.cup(a).unwrap();
        assert!(!c.is_coboundary(&aa).unwrap());
        assert!(c.coboundary_preimage(&aa).unwrap().is_none());
    }

    #[test]
    fn a_cup_a_on_z3_mod_3_is_a_coboundary() {
        let c = coh("Z3", 3);
        let a = &c.h1_basis()[0];
        let aa = a.cup(a).unwrap();
        let k = c.coboundary_preimage(&aa).unwrap().unwrap();
        assert_eq!(k.coboundary().unwrap(), aa);
    }

    #[test]
    fn class_of_rejects_non_cocycles() {
        let c = coh("V4", 2);
        let mut z = Cochain::zero(c.group().clone(), 2, 2).unwrap();
        z.set(&[1, 1], 1).unwrap();
        z.set(&[1, 2], 1).unwrap();
        assert!(!z.coboundary().unwrap().is_zero());
        assert_eq!(c.class_of(&z), Err(Error::NotACocycle));
        assert!(c
            .class_of(&Cochain::zero(c.group().clone(), 2, 2).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn coboundaries_have_zero_class_and_preimages() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (name, p) in [("S3", 3), ("Z4", 2), ("D4", 2)] {
            let c = coh(name, p);
            for _ in 0..10 {
                let f = Cochain::random(c.group().clone(), p, 1, &mut rng).unwrap();
                let df = f.coboundary().unwrap();
                assert!(c.class_of(&df).unwrap().is_zero());
                let k = c.coboundary_preimage(&df).unwrap().unwrap();
                assert_eq!(k.coboundary().unwrap(), df);
            }
        }
    }

    #[test]
    fn cup_is_well_defined_on_classes() {
        // δc ∪ b = δ(c ∪ b) for a cocycle b, so shifting a representative by
        // a coboundary shifts the product by the coboundary of c ∪ b
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, p) in [("V4", 2), ("Z3xZ3", 3), ("Q8", 2)] {
            let c = coh(name, p);
            for b in c.h1_basis() {
                for _ in 0..5 {
                    let f = Cochain::random(c.group().clone(), p, 1, &mut rng).unwrap();
                    let lhs = f.coboundary().unwrap().cup(b).unwrap();
                    assert_eq!(lhs, f.cup(b).unwrap().coboundary().unwrap());
                }
            }
        }
    }

    #[test]
    fn symmetry_of_the_cup_pairing() {
        for name in [
            "Z2", "Z4", "V4", "Q8", "D4", "Z2xZ2xZ2", "S3", "Z3", "Z3xZ3", "Z6",
        ] {
            for p in [2u8, 3] {
                let c = coh(name, p);
                for a in c.h1_basis() {
                    for b in c.h1_basis() {
                        let ab = a.cup(b).unwrap();
                        let ba = b.cup(a).unwrap();
                        let s = if p == 2 {
                            ab.sub(&ba).unwrap()
                        } else {
                            ab.add(&ba).unwrap()
                        };
                        assert!(c.is_coboundary(&s).unwrap(), "{name} mod {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn dense_and_packed_backends_agree() {
        for name in ["Z2", "Z4", "V4", "Q8", "D4", "S3"] {
            let g = Arc::new(lookup_fixture(name).unwrap());
            let a = Cohomology::with_backend(g.clone(), 2, Backend::Dense).unwrap();
            let b = Cohomology::with_backend(g, 2, Backend::Packed).unwrap();
            assert_eq!(a.h1_basis(), b.h1_basis());
            assert_eq!(a.h2_basis(), b.h2_basis());
        }
    }

    #[test]
    fn size_limit() {
        let g = Arc::new(crate::group::build_cyclic(33).unwrap());
        assert!(matches!(
            Cohomology::compute(g, 2),
            Err(Error::SizeLimit { .. })
        ));
    }
}
