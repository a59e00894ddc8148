//! Finite groups stored as dense multiplication tables.
//!
//! Every group keeps its identity at index 0. Elements are plain `usize`
//! indices; the table itself is stored row-major as `u16`, which bounds the
//! order at 65535 (the crate never materializes anything above 4096).

mod build;
mod fixtures;
mod format;
mod hom;

use std::collections::VecDeque;
use std::fmt::Debug;
use std::hash::Hash;

use sha2::{Digest, Sha256};

pub use build::{
    build_cyclic, build_direct_product, build_from_table, build_semidirect_cyclic, closure_group,
    quotient_group, QuotientGroup, FULL_GROUP_LIMIT, PRODUCT_LIMIT,
};
pub use fixtures::{fixture_names, lookup_fixture, Perm, Quaternion};
pub use format::{load_group, parse_group_spec, write_group_spec};
pub use hom::{enumerate_homs, for_each_hom, search_homs, GroupHom, HomConstraint, Presentation};

/// Minimal interface of anything we can multiply in: materialized tables,
/// matrix groups, quotients given by canonical representatives.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn power(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            base = self.op(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn commutes(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.op(a, b) == self.op(b, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
    label: String,
}

impl FiniteGroup {
    /// Assembles a group from parts that were already validated.
    pub(crate) fn from_parts(
        order: usize,
        mul: Vec<u16>,
        inv: Vec<u16>,
        generators: Vec<usize>,
        label: String,
    ) -> Self {
        debug_assert_eq!(mul.len(), order * order);
        FiniteGroup {
            order,
            mul,
            inv,
            generators,
            label,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn with_generators(mut self, generators: Vec<usize>) -> Self {
        self.generators = generators;
        self
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.mul[a * self.order..(a + 1) * self.order]
            .iter()
            .map(|&x| x as usize)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn involutions(&self) -> Vec<usize> {
        (1..self.order).filter(|&x| self.mul(x, x) == 0).collect()
    }

    pub fn centralizer(&self, t: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&x| self.mul(x, t) == self.mul(t, x))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.mul(x, z) == self.mul(z, x)))
            .collect()
    }

    /// Closure of `gens` under right multiplication, as a membership mask.
    pub fn subgroup_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mask = self.subgroup_mask(gens);
        (0..self.order).filter(|&x| mask[x]).collect()
    }

    /// Minimal generating set found greedily: walk elements in index order
    /// and keep any element that enlarges the subgroup generated so far.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut mask = self.subgroup_mask(&gens);
        for x in 1..self.order {
            if !mask[x] {
                gens.push(x);
                mask = self.subgroup_mask(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, members: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        for &m in members {
            mask[m] = true;
        }
        (0..self.order).all(|g| {
            let gi = self.inv(g);
            members.iter().all(|&m| mask[self.mul(self.mul(g, m), gi)])
        })
    }

    /// Sorted multiset of element orders; a cheap isomorphism fingerprint.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    /// Content hash of the table and generator list.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for &x in &self.mul {
            h.update(x.to_le_bytes());
        }
        for &g in &self.generators {
            h.update((g as u64).to_le_bytes());
        }
        hex::encode(&h.finalize()[..16])
    }
}

impl GroupOps for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn op(&self, a: &usize, b: &usize) -> usize {
        self.mul(*a, *b)
    }

    fn inverse(&self, a: &usize) -> usize {
        self.inv(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        lookup_fixture("S3").unwrap()
    }

    #[test]
    fn element_orders_of_cyclic_group() {
        let z4 = build_cyclic(4).unwrap();
        assert_eq!(z4.element_order(0), 1);
        assert_eq!(z4.element_order(1), 4);
        let mut orders: Vec<_> = z4.elements().map(|x| z4.element_order(x)).collect();
        orders.sort();
        orders.dedup();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn involutions_examples() {
        assert_eq!(build_cyclic(2).unwrap().involutions(), vec![1]);
        assert!(build_cyclic(3).unwrap().involutions().is_empty());
        let v4 =
            build_direct_product(&build_cyclic(2).unwrap(), &build_cyclic(2).unwrap()).unwrap();
        assert_eq!(v4.involutions().len(), 3);
    }

    #[test]
    fn centralizers() {
        let v4 = lookup_fixture("V4").unwrap();
        for t in v4.elements() {
            assert_eq!(v4.centralizer(t).len(), 4);
        }
        let g = s3();
        assert_eq!(g.centralizer(0).len(), 6);
        // a reflection is self-centralizing in S3
        for t in g.involutions() {
            assert_eq!(g.centralizer(t), vec![0, t]);
        }
    }

    #[test]
    fn center_of_q8_has_order_two() {
        let q8 = lookup_fixture("Q8").unwrap();
        assert_eq!(q8.center().len(), 2);
        assert_eq!(q8.involutions().len(), 1);
    }

    #[test]
    fn greedy_generators_are_minimal_for_klein_group() {
        let v4 = lookup_fixture("V4").unwrap();
        assert_eq!(v4.greedy_generators(), vec![1, 2]);
    }
}
