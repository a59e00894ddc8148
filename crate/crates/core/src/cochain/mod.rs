//! Normalized inhomogeneous cochains `G^d → Z/p` with trivial action.
//!
//! A cochain stores one residue per `d`-tuple of non-identity elements; the
//! tuple `(g_1, …, g_d)` sits at `Σ (g_i − 1)·(N−1)^{d−i}`, so the dump order
//! below is lexicographic. Any tuple containing the identity reads as 0.

mod cohomology;
mod form;

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use cohomology::{h1_dim_via_homs, hom_to_cochain, Cohomology, CohomologyClass, MAX_H2_ORDER};
pub use form::{cup_form, demushkin_check, CupForm, DemushkinReport};

pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Debug)]
pub struct Cochain {
    group: Arc<FiniteGroup>,
    p: u8,
    degree: usize,
    values: Vec<u8>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.degree == other.degree
            && self.values == other.values
            && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
    }
}

impl Eq for Cochain {}

fn table_len(order: usize, degree: usize) -> usize {
    (order - 1).pow(degree as u32)
}

impl Cochain {
    pub fn zero(group: Arc<FiniteGroup>, p: u8, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeLimit(degree));
        }
        let len = table_len(group.order(), degree);
        Ok(Cochain {
            group,
            p,
            degree,
            values: vec![0; len],
        })
    }

    pub fn from_values(
        group: Arc<FiniteGroup>,
        p: u8,
        degree: usize,
        values: Vec<u8>,
    ) -> Result<Self> {
        let mut c = Self::zero(group, p, degree)?;
        if values.len() != c.values.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a degree-{degree} cochain with {} slots",
                values.len(),
                c.values.len()
            )));
        }
        c.values = values.into_iter().map(|v| v % p).collect();
        Ok(c)
    }

    /// Builds a cochain from a function on tuples of non-identity elements.
    pub fn from_fn(
        group: Arc<FiniteGroup>,
        p: u8,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> u8,
    ) -> Result<Self> {
        let mut c = Self::zero(group, p, degree)?;
        let n1 = c.group.order() - 1;
        let mut tuple = vec![1usize; degree];
        for idx in 0..c.values.len() {
            let mut rest = idx;
            for slot in tuple.iter_mut().rev() {
                *slot = rest % n1 + 1;
                rest /= n1;
            }
            c.values[idx] = f(&tuple) % p;
        }
        Ok(c)
    }

    pub fn random(
        group: Arc<FiniteGroup>,
        p: u8,
        degree: usize,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        Self::from_fn(group, p, degree, |_| rng.gen_range(0..p))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    fn slot(&self, args: &[usize]) -> Option<usize> {
        let n1 = self.group.order() - 1;
        let mut idx = 0;
        for &g in args {
            if g == 0 {
                return None;
            }
            idx = idx * n1 + (g - 1);
        }
        Some(idx)
    }

    /// Value at `args`; 0 if any argument is the identity.
    #[inline]
    pub fn get(&self, args: &[usize]) -> u8 {
        debug_assert_eq!(args.len(), self.degree);
        match self.slot(args) {
            Some(i) => self.values[i],
            None => 0,
        }
    }

    pub fn set(&mut self, args: &[usize], value: u8) -> Result<()> {
        match self.slot(args) {
            Some(i) => {
                self.values[i] = value % self.p;
                Ok(())
            }
            None => Err(Error::BadParameter(
                "normalized cochains vanish on the identity".into(),
            )),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.group.order() != other.group.order() {
            return Err(Error::ShapeMismatch(
                "cochains on different groups or moduli".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::ShapeMismatch(
                "adding cochains of different degrees".into(),
            ));
        }
        let p = self.p as u16;
        let mut out = self.clone();
        for (x, &y) in out.values.iter_mut().zip(&other.values) {
            *x = ((*x as u16 + y as u16) % p) as u8;
        }
        Ok(out)
    }

    pub fn scale(&self, c: u8) -> Self {
        let p = self.p as u16;
        let mut out = self.clone();
        for x in &mut out.values {
            *x = ((*x as u16 * (c % self.p) as u16) % p) as u8;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `(δf)(g_1..g_{d+1}) = f(g_2..) + Σ (−1)^i f(.., g_i g_{i+1}, ..) + (−1)^{d+1} f(g_1..g_d)`.
    pub fn coboundary(&self) -> Result<Self> {
        let d = self.degree;
        if d + 1 > MAX_DEGREE {
            return Err(Error::DegreeLimit(d + 1));
        }
        let p = self.p as i32;
        let g = self.group.clone();
        let mut buf = vec![0usize; d];
        Cochain::from_fn(g.clone(), self.p, d + 1, |args| {
            let mut acc: i32 = self.get(&args[1..]) as i32;
            for i in 0..d {
                buf[..i].copy_from_slice(&args[..i]);
                buf[i] = g.mul(args[i], args[i + 1]);
                buf[i + 1..].copy_from_slice(&args[i + 2..]);
                let v = self.get(&buf) as i32;
                acc += if i % 2 == 0 { -v } else { v };
            }
            let last = self.get(&args[..d]) as i32;
            acc += if d.is_multiple_of(2) { -last } else { last };
            acc.rem_euclid(p) as u8
        })
    }

    /// `(a ∪ b)(g_1..g_{r+s}) = a(g_1..g_r) · b(g_{r+1}..g_{r+s})`.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (r, s) = (self.degree, other.degree);
        if r + s > MAX_DEGREE {
            return Err(Error::DegreeLimit(r + s));
        }
        let p = self.p as u16;
        Cochain::from_fn(self.group.clone(), self.p, r + s, |args| {
            ((self.get(&args[..r]) as u16 * other.get(&args[r..]) as u16) % p) as u8
        })
    }

    /// Golden-file dump: the degree, then `g1 .. gd : value` per tuple.
    pub fn dump(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        let n1 = self.group.order() - 1;
        for (idx, v) in self.values.iter().enumerate() {
            let mut tuple = vec![0usize; self.degree];
            let mut rest = idx;
            for slot in tuple.iter_mut().rev() {
                *slot = rest % n1 + 1;
                rest /= n1;
            }
            let args: Vec<String> = tuple.iter().map(|g| g.to_string()).collect();
            let _ = writeln!(out, "{} : {}", args.join(" "), v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(name: &str) -> Arc<FiniteGroup> {
        Arc::new(lookup_fixture(name).unwrap())
    }

    #[test]
    fn coboundary_of_hom_is_zero() {
        let z4 = g("Z4");
        // the reduction Z/4 → Z/2
        let a = Cochain::from_fn(z4, 2, 1, |x| (x[0] % 2) as u8).unwrap();
        assert!(a.coboundary().unwrap().is_zero());
    }

    #[test]
    fn zero_maps_to_zero() {
        let c = Cochain::zero(g("V4"), 3, 2).unwrap();
        assert!(c.coboundary().unwrap().is_zero());
        let a = Cochain::from_fn(g("V4"), 3, 1, |x| x[0] as u8).unwrap();
        assert!(a
            .cup(&Cochain::zero(g("V4"), 3, 1).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn degree_limits() {
        let c = Cochain::zero(g("Z2"), 2, 3).unwrap();
        assert_eq!(c.coboundary(), Err(Error::DegreeLimit(4)));
        assert!(Cochain::zero(g("Z2"), 2, 4).is_err());
        let a = Cochain::zero(g("Z2"), 2, 2).unwrap();
        assert_eq!(a.cup(&a), Err(Error::DegreeLimit(4)));
    }

    #[test]
    fn delta_squared_vanishes_on_random_one_cochains() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v4 = g("V4");
        for _ in 0..100 {
            let f = Cochain::random(v4.clone(), 2, 1, &mut rng).unwrap();
            assert!(f.coboundary().unwrap().coboundary().unwrap().is_zero());
        }
    }

    #[test]
    fn dump_format() {
        let a = Cochain::from_fn(g("Z3"), 3, 1, |x| x[0] as u8).unwrap();
        assert_eq!(a.dump(), "degree 1\n1 : 1\n2 : 2\n");
        let b = a.cup(&a).unwrap();
        assert!(b
            .dump()
            .starts_with("degree 2\n1 1 : 1\n1 2 : 2\n2 1 : 2\n2 2 : 1\n"));
    }

    proptest! {
        #[test]
        fn leibniz_rule(seed in any::<u64>(), name in prop::sample::select(vec!["Z2", "Z4", "V4", "S3"]),
                        p in prop::sample::select(vec![2u8, 3]), r in 0usize..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let grp = g(name);
            let s = 2 - r;
            let a = Cochain::random(grp.clone(), p, r, &mut rng).unwrap();
            let b = Cochain::random(grp, p, s, &mut rng).unwrap();
            let lhs = a.cup(&b).unwrap().coboundary().unwrap();
            let t1 = a.coboundary().unwrap().cup(&b).unwrap();
            let t2 = a.cup(&b.coboundary().unwrap()).unwrap();
            let rhs = if r % 2 == 0 { t1.add(&t2).unwrap() } else { t1.sub(&t2).unwrap() };
            prop_assert_eq!(lhs, rhs);
        }
    }
}
