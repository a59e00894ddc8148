//! `Q_{k,m} = U_m(p)/M_{k,m}` realized as pairs `(A, B)` with `A` the
//! upper-left `(m−1)`-block and `B` the lower-right `(m+1−k)`-block of a
//! representative, subject to the two blocks agreeing on their overlap.

use std::collections::HashMap;
use std::fmt;

use super::matrix::UniTriMatrix;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupOps};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberPair {
    pub a: UniTriMatrix,
    pub b: UniTriMatrix,
}

impl fmt::Debug for FiberPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.a.to_literal(), self.b.to_literal())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiberQuotient {
    k: usize,
    m: usize,
    p: u8,
}

impl FiberQuotient {
    pub fn new(k: usize, m: usize, p: u8) -> Result<Self> {
        if m < 3 || k == 0 || k > m - 1 {
            return Err(Error::BadParameter(format!(
                "Q_{{{k},{m}}} needs m ≥ 3 and 1 ≤ k ≤ m−1"
            )));
        }
        // validates the modulus and the block sizes
        UniTriMatrix::identity(m, p);
        if !super::matrix::is_supported_prime(p) || m > super::matrix::MAX_N {
            return Err(Error::BadParameter(format!(
                "unsupported (m, p) = ({m}, {p})"
            )));
        }
        Ok(FiberQuotient { k, m, p })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    fn left(&self) -> usize {
        self.m - 1
    }

    fn right(&self) -> usize {
        self.m + 1 - self.k
    }

    fn overlap(&self) -> usize {
        self.m - self.k
    }

    /// `p^{binom(m−1, 2) + (m − k)}`: all of `A` plus the last column of `B`.
    pub fn order(&self) -> u128 {
        let free = self.left() * (self.left() - 1) / 2 + self.overlap();
        (self.p as u128).pow(free as u32)
    }

    pub fn contains(&self, x: &FiberPair) -> bool {
        x.a.size() == self.left()
            && x.b.size() == self.right()
            && x.a.modulus() == self.p
            && x.b.modulus() == self.p
            && x.a.lower_right(self.overlap()).ok() == x.b.upper_left(self.overlap()).ok()
    }

    pub fn from_matrix(&self, u: &UniTriMatrix) -> Result<FiberPair> {
        if u.size() != self.m || u.modulus() != self.p {
            return Err(Error::TargetMismatch(format!(
                "expected a matrix in U_{}({})",
                self.m, self.p
            )));
        }
        Ok(FiberPair {
            a: u.upper_left(self.left())?,
            b: u.lower_right(self.right())?,
        })
    }

    /// The representative with zeros in the positions `M_{k,m}` kills.
    pub fn to_matrix(&self, x: &FiberPair) -> UniTriMatrix {
        let off = self.k - 1;
        UniTriMatrix::from_fn(self.m, self.p, |i, j| {
            if j < self.m {
                x.a.at(i, j)
            } else if i >= self.k {
                x.b.at(i - off, j - off)
            } else {
                0
            }
        })
    }

    /// Every pair, enumerated directly from the two blocks: all of `A`, then
    /// the last column of `B` above its diagonal.
    pub fn elements(&self, limit: usize) -> Result<Vec<FiberPair>> {
        let order = self.order();
        if order > limit as u128 {
            return Err(Error::size(
                format!("Q_{{{},{}}}({})", self.k, self.m, self.p),
                order,
                limit as u128,
            ));
        }
        let left_free = self.left() * (self.left() - 1) / 2;
        let left_count = (self.p as usize).pow(left_free as u32);
        let col_count = (self.p as usize).pow(self.overlap() as u32);
        let mut out = Vec::with_capacity(order as usize);
        for ai in 0..left_count {
            let a = unpack(self.left(), self.p, ai);
            let shared = a.lower_right(self.overlap()).expect("overlap fits");
            for ci in 0..col_count {
                let r = self.right();
                let mut c = ci;
                let mut col = vec![0u8; r - 1];
                for v in col.iter_mut().rev() {
                    *v = (c % self.p as usize) as u8;
                    c /= self.p as usize;
                }
                let b = UniTriMatrix::from_fn(r, self.p, |i, j| {
                    if j < r {
                        shared.at(i, j)
                    } else {
                        col[i - 1]
                    }
                });
                out.push(FiberPair { a, b });
            }
        }
        Ok(out)
    }

    /// The pair group as a table, elements in [`FiberQuotient::elements`] order.
    pub fn materialize(&self, limit: usize) -> Result<(FiniteGroup, Vec<FiberPair>)> {
        let elems = self.elements(limit)?;
        let index: HashMap<FiberPair, usize> =
            elems.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                table[i][j] = index[&self.op(x, y)];
            }
        }
        let gens = (1..self.m)
            .map(|i| {
                index[&self
                    .from_matrix(&UniTriMatrix::elementary(self.m, self.p, i, i + 1, 1))
                    .unwrap()]
            })
            .collect::<Vec<_>>();
        let g = crate::group::build_from_table(&table, &gens)?
            .with_label(format!("Q({},{})({})", self.k, self.m, self.p));
        Ok((g, elems))
    }

    fn next(&self) -> Result<FiberQuotient> {
        if self.k + 2 > self.m {
            return Err(Error::BadParameter(format!(
                "ρ_{{{},{}}} needs k ≤ m − 2",
                self.k, self.m
            )));
        }
        FiberQuotient::new(self.k + 1, self.m, self.p)
    }

    /// `ρ_{k,m} : Q_{k,m} → Q_{k+1,m}`; returns the target as well.
    pub fn rho_map(&self, x: &FiberPair) -> Result<(FiberQuotient, FiberPair)> {
        let target = self.next()?;
        let y = FiberPair {
            a: x.a,
            b: x.b.lower_right(self.overlap())?,
        };
        Ok((target, y))
    }

    pub fn in_rho_kernel(&self, x: &FiberPair) -> bool {
        let r = self.right();
        x.a.is_identity()
            && (1..=r).all(|i| (i + 1..=r).all(|j| (i, j) == (1, r) || x.b.at(i, j) == 0))
    }

    /// `ι_{k,m}`: a kernel element `(I, B)` goes to `e_{1,m+1−k}(B)`.
    pub fn iota_map(&self, x: &FiberPair) -> Result<u8> {
        self.next()?;
        if !self.contains(x) || !self.in_rho_kernel(x) {
            return Err(Error::NotInKernel);
        }
        Ok(x.b.at(1, self.right()))
    }

    /// The kernel element with `ι = t`.
    pub fn kernel_element(&self, t: u8) -> FiberPair {
        FiberPair {
            a: UniTriMatrix::identity(self.left(), self.p),
            b: UniTriMatrix::elementary(self.right(), self.p, 1, self.right(), t % self.p),
        }
    }

    pub fn kernel_elements(&self) -> Vec<FiberPair> {
        (0..self.p).map(|t| self.kernel_element(t)).collect()
    }

    /// The vertical map `Q_{k,n+1} → Q_{1,n−k+2}` keeping the lower-right
    /// `(n−k+1)`-block of `A` and all of `B`.
    pub fn shift_map_left(&self, x: &FiberPair) -> Result<(FiberQuotient, FiberPair)> {
        let target = FiberQuotient::new(1, self.m + 1 - self.k, self.p)?;
        Ok((
            target,
            FiberPair {
                a: x.a.lower_right(self.m - self.k)?,
                b: x.b,
            },
        ))
    }

    /// `λ : Q_{k+1,n+1} → Q_{2,n−k+2}` for `self = Q_{k+1,n+1}`.
    pub fn shift_map(&self, x: &FiberPair) -> Result<(FiberQuotient, FiberPair)> {
        if self.k < 2 {
            return Err(Error::BadParameter(
                "λ is defined on Q_{k+1,m} with k ≥ 1".into(),
            ));
        }
        let target = FiberQuotient::new(2, self.m + 2 - self.k, self.p)?;
        Ok((
            target,
            FiberPair {
                a: x.a.lower_right(self.m + 1 - self.k)?,
                b: x.b,
            },
        ))
    }
}

fn unpack(n: usize, p: u8, mut idx: usize) -> UniTriMatrix {
    let mut u = UniTriMatrix::identity(n, p);
    let pos: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    for &(i, j) in pos.iter().rev() {
        u.set(i, j, (idx % p as usize) as u8);
        idx /= p as usize;
    }
    u
}

impl GroupOps for FiberQuotient {
    type Elem = FiberPair;

    fn identity(&self) -> FiberPair {
        FiberPair {
            a: UniTriMatrix::identity(self.left(), self.p),
            b: UniTriMatrix::identity(self.right(), self.p),
        }
    }

    fn op(&self, x: &FiberPair, y: &FiberPair) -> FiberPair {
        FiberPair {
            a: x.a.mul(&y.a),
            b: x.b.mul(&y.b),
        }
    }

    fn inverse(&self, x: &FiberPair) -> FiberPair {
        FiberPair {
            a: x.a.inv(),
            b: x.b.inv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitri::{NamedSubgroup, SubgroupKind, UnitriQuotient};

    #[test]
    fn order_matches_quotient_by_m() {
        for (k, m, p) in [(1, 4, 2), (2, 4, 2), (3, 4, 2), (1, 5, 2), (2, 4, 3)] {
            let q = FiberQuotient::new(k, m, p).unwrap();
            let sub = NamedSubgroup::new(m, p, SubgroupKind::M(k)).unwrap();
            let full = (p as u128).pow((m * (m - 1) / 2) as u32);
            assert_eq!(q.order(), full / sub.order());
            assert_eq!(q.elements(1 << 12).unwrap().len() as u128, q.order());
        }
    }

    #[test]
    fn matrix_round_trip_agrees_with_pattern_quotient() {
        let (k, m, p) = (2, 4, 2);
        let q = FiberQuotient::new(k, m, p).unwrap();
        let pat = UnitriQuotient::q(k, m, p).unwrap();
        for x in q.elements(1 << 12).unwrap() {
            assert!(q.contains(&x));
            let u = q.to_matrix(&x);
            assert!(pat.is_canonical(&u));
            assert_eq!(q.from_matrix(&u).unwrap(), x);
        }
    }

    #[test]
    fn rho_kernel_has_order_p_and_iota_is_additive() {
        for (k, m, p) in [(1, 4, 2), (2, 4, 2), (1, 4, 3)] {
            let q = FiberQuotient::new(k, m, p).unwrap();
            let elems = q.elements(1 << 12).unwrap();
            let id = q.rho_map(&q.identity()).unwrap().1;
            let kernel: Vec<_> = elems
                .iter()
                .filter(|x| q.rho_map(x).unwrap().1 == id)
                .collect();
            assert_eq!(kernel.len(), p as usize);
            for x in &kernel {
                for y in &kernel {
                    let s = q.iota_map(&q.op(x, y)).unwrap();
                    assert_eq!(s, (q.iota_map(x).unwrap() + q.iota_map(y).unwrap()) % p);
                }
            }
            assert_eq!(q.iota_map(&q.kernel_element(1)).unwrap(), 1);
        }
    }

    #[test]
    fn iota_rejects_non_kernel_elements() {
        let q = FiberQuotient::new(1, 4, 2).unwrap();
        let u = UniTriMatrix::elementary(4, 2, 1, 2, 1);
        assert_eq!(
            q.iota_map(&q.from_matrix(&u).unwrap()),
            Err(Error::NotInKernel)
        );
    }

    #[test]
    fn shift_square_commutes() {
        // (k, n, p) = (2, 3, 2): Q_{2,4} → Q_{3,4} over Q_{1,3} → Q_{2,3}
        let (k, n, p) = (2, 3, 2);
        let top = FiberQuotient::new(k, n + 1, p).unwrap();
        for x in top.elements(1 << 12).unwrap() {
            let (mid, rx) = top.rho_map(&x).unwrap();
            let (_, lam) = mid.shift_map(&rx).unwrap();
            let (left, sx) = top.shift_map_left(&x).unwrap();
            let (_, down) = left.rho_map(&sx).unwrap();
            assert_eq!(lam, down);
        }
    }
}
