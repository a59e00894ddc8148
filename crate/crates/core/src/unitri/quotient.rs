//! Quotients `U_n(p)/N` where `N` is the subgroup of matrices supported on
//! an *upper set* of positions (closed under moving up a row or right a
//! column). Such an `N` is normal, and right multiplication by `N` only
//! touches entries inside the set, so zeroing those entries picks a unique
//! coset representative. `U/Z`, `U/P`, `Q_{k,m} = U_m/M_{k,m}` and every
//! step of the central filtration of `Ker φ` are of this form.

use std::collections::BTreeSet;

use super::matrix::{is_supported_prime, packed_index, packed_len, UniTriMatrix, MAX_N};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupOps};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitriQuotient {
    n: usize,
    p: u8,
    killed: Vec<bool>,
    killed_list: Vec<(usize, usize)>,
    free: Vec<(usize, usize)>,
}

impl UnitriQuotient {
    /// `U_n(p)` modulo the matrices supported on `killed` (1-based positions).
    pub fn new(n: usize, p: u8, killed: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::BadParameter(format!(
                "matrix size {n} outside 1..={MAX_N}"
            )));
        }
        if !is_supported_prime(p) {
            return Err(Error::BadParameter(format!("{p} is not a prime ≤ 13")));
        }
        let mut mask = vec![false; packed_len(n)];
        for &(i, j) in killed {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
            mask[packed_index(n, i - 1, j - 1)] = true;
        }
        let is_killed = |i: usize, j: usize| mask[packed_index(n, i - 1, j - 1)];
        for &(i, j) in killed {
            if (i > 1 && !is_killed(i - 1, j)) || (j < n && !is_killed(i, j + 1)) {
                return Err(Error::BadParameter(format!(
                    "killed positions are not closed upwards/rightwards at ({i},{j})"
                )));
            }
        }
        let (killed_list, free) = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .partition(|&(i, j)| is_killed(i, j));
        Ok(UnitriQuotient {
            n,
            p,
            killed: mask,
            killed_list,
            free,
        })
    }

    pub fn full(n: usize, p: u8) -> Result<Self> {
        Self::new(n, p, &[])
    }

    /// `U_n(p)/[U, U] ≅ (Z/p)^{n−1}`: only the superdiagonal survives.
    pub fn superdiagonal_only(n: usize, p: u8) -> Result<Self> {
        let killed: Vec<_> = positions_with_span(n, |s| s >= 2);
        Self::new(n, p, &killed)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    pub fn is_killed(&self, i: usize, j: usize) -> bool {
        self.killed[packed_index(self.n, i - 1, j - 1)]
    }

    pub fn killed_positions(&self) -> &[(usize, usize)] {
        &self.killed_list
    }

    pub fn free_positions(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.free.len() as u32)
    }

    pub fn canonical(&self, m: &UniTriMatrix) -> UniTriMatrix {
        let mut out = *m;
        for &(i, j) in &self.killed_list {
            out.set(i, j, 0);
        }
        out
    }

    pub fn is_canonical(&self, m: &UniTriMatrix) -> bool {
        m.size() == self.n
            && m.modulus() == self.p
            && self
                .killed_positions()
                .iter()
                .all(|&(i, j)| m.at(i, j) == 0)
    }

    /// True if `coarser` kills everything this quotient kills, i.e. there is a
    /// projection `self → coarser`.
    pub fn refines(&self, coarser: &UnitriQuotient) -> bool {
        self.n == coarser.n
            && self.p == coarser.p
            && self
                .killed
                .iter()
                .zip(&coarser.killed)
                .all(|(&a, &b)| !a || b)
    }

    /// Positions that are free here but killed in `coarser`: the coordinates
    /// of the kernel of the projection.
    pub fn kernel_positions(&self, coarser: &UnitriQuotient) -> Vec<(usize, usize)> {
        self.free
            .iter()
            .copied()
            .filter(|&(i, j)| coarser.is_killed(i, j))
            .collect()
    }

    /// All elements of this quotient projecting onto `base` in `coarser`.
    pub fn fiber_over(
        &self,
        coarser: &UnitriQuotient,
        base: &UniTriMatrix,
        limit: usize,
    ) -> Result<Vec<UniTriMatrix>> {
        if !self.refines(coarser) {
            return Err(Error::TargetMismatch(
                "quotient does not refine the base".into(),
            ));
        }
        let extra = self.kernel_positions(coarser);
        let count = (self.p as u128).pow(extra.len() as u32);
        if count > limit as u128 {
            return Err(Error::size("fiber", count, limit as u128));
        }
        let start = coarser.canonical(base);
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u8; extra.len()];
        loop {
            let mut m = start;
            for (&(i, j), &d) in extra.iter().zip(&digits) {
                m.set(i, j, d);
            }
            out.push(m);
            // odometer with the last position fastest, so output is sorted
            let mut k = extra.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < self.p {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// Mixed-radix index of a canonical element; packed order is
    /// most-significant first, so indices follow the lexicographic order of
    /// the packed entries and the identity gets index 0.
    pub fn index_of(&self, m: &UniTriMatrix) -> usize {
        self.free.iter().fold(0usize, |acc, &(i, j)| {
            acc * self.p as usize + m.at(i, j) as usize
        })
    }

    pub fn element_at(&self, mut index: usize) -> UniTriMatrix {
        let mut m = UniTriMatrix::identity(self.n, self.p);
        for &(i, j) in self.free.iter().rev() {
            m.set(i, j, (index % self.p as usize) as u8);
            index /= self.p as usize;
        }
        m
    }

    pub fn materialize(&self, limit: usize) -> Result<MaterializedQuotient> {
        let order = self.order();
        if order > limit as u128 {
            return Err(Error::size(
                format!("materialized quotient of U_{}({})", self.n, self.p),
                order,
                limit as u128,
            ));
        }
        let order = order as usize;
        let elems: Vec<UniTriMatrix> = (0..order).map(|x| self.element_at(x)).collect();
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = self.index_of(&self.op(&elems[a], &elems[b])) as u16;
            }
        }
        let inv = elems
            .iter()
            .map(|m| self.index_of(&self.inverse(m)) as u16)
            .collect();
        let gens: Vec<usize> = (1..self.n)
            .filter(|&i| !self.is_killed(i, i + 1))
            .map(|i| self.index_of(&UniTriMatrix::elementary(self.n, self.p, i, i + 1, 1)))
            .collect();
        let label = format!("U{}({})/N", self.n, self.p);
        let mut group = FiniteGroup::from_parts(order, mul, inv, gens, label);
        if group.subgroup(group.generators()).len() != order {
            let greedy = group.greedy_generators();
            group = group.with_generators(greedy);
        }
        Ok(MaterializedQuotient {
            quotient: self.clone(),
            group,
            elems,
        })
    }
}

impl GroupOps for UnitriQuotient {
    type Elem = UniTriMatrix;

    fn identity(&self) -> UniTriMatrix {
        UniTriMatrix::identity(self.n, self.p)
    }

    fn op(&self, a: &UniTriMatrix, b: &UniTriMatrix) -> UniTriMatrix {
        self.canonical(&a.mul(b))
    }

    fn inverse(&self, a: &UniTriMatrix) -> UniTriMatrix {
        self.canonical(&a.inv())
    }
}

/// Positions `(i, j)` with `i < j ≤ n` whose span `j − i` satisfies `keep`.
pub fn positions_with_span(n: usize, keep: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| keep(j - i))
        .collect()
}

/// A materialized pattern quotient: the table plus the canonical matrices.
#[derive(Clone, Debug)]
pub struct MaterializedQuotient {
    pub quotient: UnitriQuotient,
    pub group: FiniteGroup,
    pub elems: Vec<UniTriMatrix>,
}

impl MaterializedQuotient {
    pub fn index_of(&self, m: &UniTriMatrix) -> usize {
        self.quotient.index_of(&self.quotient.canonical(m))
    }

    /// Index table of the projection onto a coarser materialized quotient.
    pub fn projection_to(&self, coarser: &MaterializedQuotient) -> Result<Vec<usize>> {
        if !self.quotient.refines(&coarser.quotient) {
            return Err(Error::TargetMismatch(
                "quotient does not refine the target".into(),
            ));
        }
        Ok(self.elems.iter().map(|m| coarser.index_of(m)).collect())
    }

    pub fn element_set(&self, pred: impl Fn(&UniTriMatrix) -> bool) -> BTreeSet<usize> {
        self.elems
            .iter()
            .enumerate()
            .filter(|(_, m)| pred(m))
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(UnitriQuotient::full(1, 2).unwrap().order(), 1);
        assert_eq!(UnitriQuotient::full(3, 2).unwrap().order(), 8);
        assert_eq!(UnitriQuotient::full(5, 2).unwrap().order(), 1024);
        assert_eq!(
            UnitriQuotient::superdiagonal_only(5, 3).unwrap().order(),
            81
        );
    }

    #[test]
    fn materialized_full_group_is_valid() {
        let m = UnitriQuotient::full(4, 2)
            .unwrap()
            .materialize(4096)
            .unwrap();
        assert_eq!(m.group.order(), 64);
        let g = &m.group;
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        assert_eq!(g.subgroup(g.generators()).len(), 64);
        assert_eq!(m.elems[0], UniTriMatrix::identity(4, 2));
    }

    #[test]
    fn rejects_non_normal_patterns() {
        // (2,3) alone is not closed upwards
        assert!(UnitriQuotient::new(3, 2, &[(2, 3)]).is_err());
        assert!(UnitriQuotient::new(3, 2, &[(1, 3)]).is_ok());
        assert!(UnitriQuotient::new(3, 4, &[]).is_err());
    }

    #[test]
    fn quotient_by_pattern_matches_coset_table() {
        let full = UnitriQuotient::full(4, 2)
            .unwrap()
            .materialize(4096)
            .unwrap();
        let killed = [(1, 3), (1, 4), (2, 4)];
        let q = UnitriQuotient::new(4, 2, &killed)
            .unwrap()
            .materialize(4096)
            .unwrap();
        let normal: Vec<usize> = full
            .element_set(|m| {
                (1..=4).all(|i| (i + 1..=4).all(|j| killed.contains(&(i, j)) || m.at(i, j) == 0))
            })
            .into_iter()
            .collect();
        let coset = crate::group::quotient_group(&full.group, &normal).unwrap();
        assert_eq!(coset.group.order(), q.group.order());
        // the projection is a surjective homomorphism with the right kernel
        let proj = full.projection_to(&q).unwrap();
        for a in full.group.elements() {
            for b in full.group.elements() {
                assert_eq!(proj[full.group.mul(a, b)], q.group.mul(proj[a], proj[b]));
            }
        }
        let kernel: Vec<usize> = (0..64).filter(|&x| proj[x] == 0).collect();
        assert_eq!(kernel, normal);
    }

    #[test]
    fn fibers_are_sorted_and_complete() {
        let q = UnitriQuotient::full(3, 3).unwrap();
        let base = UnitriQuotient::superdiagonal_only(3, 3).unwrap();
        let b = UniTriMatrix::from_fn(3, 3, |i, j| if j == i + 1 { 2 } else { 0 });
        let fiber = q.fiber_over(&base, &b, 100).unwrap();
        assert_eq!(fiber.len(), 3);
        assert!(fiber
            .windows(2)
            .all(|w| q.index_of(&w[0]) < q.index_of(&w[1])));
        assert!(q.fiber_over(&base, &b, 2).is_err());
    }
}
