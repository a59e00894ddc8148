use std::fmt;

use crate::error::{Error, Result};

/// Largest matrix size supported by [`UniTriMatrix`].
pub const MAX_N: usize = 12;
const MAX_ENTRIES: usize = MAX_N * (MAX_N - 1) / 2;

/// Number of strictly upper entries of an `n×n` matrix.
pub const fn packed_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Packed row-major position of the 0-based entry `(i, j)`, `i < j`.
#[inline]
pub const fn packed_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// An upper unitriangular matrix over `Z/p`. Only the strictly upper part is
/// stored; the diagonal is implicitly 1 and everything below it 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniTriMatrix {
    n: u8,
    p: u8,
    entries: [u8; MAX_ENTRIES],
}

impl UniTriMatrix {
    pub fn identity(n: usize, p: u8) -> Self {
        assert!((1..=MAX_N).contains(&n), "matrix size {n} out of range");
        assert!(p >= 2, "modulus {p} out of range");
        UniTriMatrix {
            n: n as u8,
            p,
            entries: [0; MAX_ENTRIES],
        }
    }

    /// Builds a matrix from its 1-based strictly upper entries.
    pub fn from_fn(n: usize, p: u8, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut m = Self::identity(n, p);
        for i in 1..=n {
            for j in i + 1..=n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_packed(n: usize, p: u8, packed: &[u8]) -> Self {
        assert_eq!(packed.len(), packed_len(n));
        let mut m = Self::identity(n, p);
        for (slot, &v) in m.entries.iter_mut().zip(packed) {
            *slot = v % p;
        }
        m
    }

    /// Identity plus `value` at the 1-based position `(i, j)`.
    pub fn elementary(n: usize, p: u8, i: usize, j: usize, value: u8) -> Self {
        let mut m = Self::identity(n, p);
        m.set(i, j, value);
        m
    }

    pub fn size(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    pub fn packed(&self) -> &[u8] {
        &self.entries[..packed_len(self.n as usize)]
    }

    /// The `(i, j)` entry (1-based) including the implicit diagonal and
    /// zeros below it.
    pub fn entry(&self, i: usize, j: usize) -> Result<u8> {
        let n = self.n as usize;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        Ok(self.at(i, j))
    }

    /// Unchecked 1-based access.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u8 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[packed_index(self.n as usize, i - 1, j - 1)],
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
        }
    }

    /// Sets the 1-based strictly upper entry `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        debug_assert!(i < j && j <= self.n as usize);
        self.entries[packed_index(self.n as usize, i - 1, j - 1)] = value % self.p;
    }

    pub fn is_identity(&self) -> bool {
        self.packed().iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.p), (other.n, other.p));
        let n = self.n as usize;
        let p = self.p as u32;
        let mut out = Self::identity(n, self.p);
        for i in 1..=n {
            for j in i + 1..=n {
                let mut acc = self.at(i, j) as u32 + other.at(i, j) as u32;
                for k in i + 1..j {
                    acc += self.at(i, k) as u32 * other.at(k, j) as u32;
                }
                out.entries[packed_index(n, i - 1, j - 1)] = (acc % p) as u8;
            }
        }
        out
    }

    pub fn inv(&self) -> Self {
        let n = self.n as usize;
        let p = self.p as u32;
        let mut out = Self::identity(n, self.p);
        // A·X = I, solved by increasing distance from the diagonal
        for span in 1..n {
            for i in 1..=n - span {
                let j = i + span;
                let mut acc = self.at(i, j) as u32;
                for k in i + 1..j {
                    acc += self.at(i, k) as u32 * out.at(k, j) as u32;
                }
                out.entries[packed_index(n, i - 1, j - 1)] = ((p - acc % p) % p) as u8;
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.n as usize, self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = *self;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// The superdiagonal `(e_12, e_23, …, e_{n−1,n})`.
    pub fn superdiagonal(&self) -> Vec<u8> {
        (1..self.n as usize).map(|i| self.at(i, i + 1)).collect()
    }

    pub fn upper_left(&self, a: usize) -> Result<Self> {
        let n = self.n as usize;
        if a == 0 || a > n {
            return Err(Error::IndexOutOfRange { i: a, j: a, n });
        }
        Ok(Self::from_fn(a, self.p, |i, j| self.at(i, j)))
    }

    pub fn lower_right(&self, a: usize) -> Result<Self> {
        let n = self.n as usize;
        if a == 0 || a > n {
            return Err(Error::IndexOutOfRange { i: a, j: a, n });
        }
        let off = n - a;
        Ok(Self::from_fn(a, self.p, |i, j| self.at(i + off, j + off)))
    }

    /// Block-diagonal matrix `diag(left, right)`.
    pub fn block_diag(left: &Self, right: &Self) -> Result<Self> {
        if left.p != right.p {
            return Err(Error::SizeMismatch("blocks over different moduli".into()));
        }
        let (a, b) = (left.n as usize, right.n as usize);
        if a + b > MAX_N {
            return Err(Error::size(
                "block matrix size",
                (a + b) as u128,
                MAX_N as u128,
            ));
        }
        Ok(Self::from_fn(a + b, left.p, |i, j| {
            if j <= a {
                left.at(i, j)
            } else if i > a {
                right.at(i - a, j - a)
            } else {
                0
            }
        }))
    }

    /// Matrix literal `n p / r1 / r2 / ...`.
    pub fn to_literal(&self) -> String {
        let n = self.n as usize;
        let mut parts = vec![format!("{} {}", n, self.p)];
        for i in 1..=n {
            let row: Vec<String> = (1..=n).map(|j| self.at(i, j).to_string()).collect();
            parts.push(row.join(" "));
        }
        parts.join(" / ")
    }

    pub fn parse_literal(text: &str) -> Result<Self> {
        let segments: Vec<&str> = text.trim().split('/').map(str::trim).collect();
        let header: Vec<&str> = segments[0].split_whitespace().collect();
        let (n, p) = match header[..] {
            [n, p] => (
                n.parse::<usize>()
                    .map_err(|_| Error::parse(1, 1, format!("bad size `{n}`")))?,
                p.parse::<u8>()
                    .map_err(|_| Error::parse(1, 1, format!("bad modulus `{p}`")))?,
            ),
            _ => return Err(Error::parse(1, 1, "expected `n p` before the first `/`")),
        };
        if n == 0 || n > MAX_N {
            return Err(Error::parse(
                1,
                1,
                format!("size {n} out of range 1..={MAX_N}"),
            ));
        }
        if !is_supported_prime(p) {
            return Err(Error::parse(
                1,
                1,
                format!("modulus {p} is not a prime ≤ 13"),
            ));
        }
        if segments.len() != n + 1 {
            return Err(Error::parse(
                1,
                1,
                format!("expected {n} rows, found {}", segments.len() - 1),
            ));
        }
        let mut m = Self::identity(n, p);
        for (r, seg) in segments[1..].iter().enumerate() {
            let i = r + 1;
            let row: Vec<&str> = seg.split_whitespace().collect();
            if row.len() != n {
                return Err(Error::parse(
                    i + 1,
                    1,
                    format!("row {i} has {} entries", row.len()),
                ));
            }
            for (c, w) in row.iter().enumerate() {
                let j = c + 1;
                let v: u8 = w
                    .parse()
                    .map_err(|_| Error::parse(i + 1, j, format!("bad entry `{w}`")))?;
                if v >= p {
                    return Err(Error::parse(
                        i + 1,
                        j,
                        format!("entry {v} is not a residue mod {p}"),
                    ));
                }
                match i.cmp(&j) {
                    std::cmp::Ordering::Greater if v != 0 => {
                        return Err(Error::parse(i + 1, j, "entry below the diagonal must be 0"))
                    }
                    std::cmp::Ordering::Equal if v != 1 => {
                        return Err(Error::parse(i + 1, j, "diagonal entry must be 1"))
                    }
                    std::cmp::Ordering::Less => m.set(i, j, v),
                    _ => {}
                }
            }
        }
        Ok(m)
    }
}

pub fn is_supported_prime(p: u8) -> bool {
    matches!(p, 2 | 3 | 5 | 7 | 11 | 13)
}

impl fmt::Debug for UniTriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_literal())
    }
}

impl fmt::Display for UniTriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn first_case() -> UniTriMatrix {
        UniTriMatrix::parse_literal("3 2 / 1 1 0 / 0 1 1 / 0 0 1").unwrap()
    }

    fn second_case() -> UniTriMatrix {
        UniTriMatrix::parse_literal("3 2 / 1 1 1 / 0 1 1 / 0 0 1").unwrap()
    }

    #[test]
    fn entries_of_identity() {
        let id = UniTriMatrix::identity(4, 3);
        for i in 1..=4 {
            for j in 1..=4 {
                let expected = u8::from(i == j);
                assert_eq!(id.entry(i, j).unwrap(), expected);
            }
        }
        assert!(matches!(id.entry(0, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(id.entry(1, 5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn displayed_matrices() {
        assert_eq!(first_case().entry(1, 3).unwrap(), 0);
        assert_eq!(second_case().entry(1, 3).unwrap(), 1);
        assert_eq!(first_case().superdiagonal(), vec![1, 1]);
        assert_eq!(second_case().superdiagonal(), vec![1, 1]);
        // hand oracle: [[1,1,0],[0,1,1],[0,0,1]]^2 = [[1,0,1],[0,1,0],[0,0,1]] over Z/2
        let sq = first_case().mul(&first_case());
        assert_eq!(sq, UniTriMatrix::elementary(3, 2, 1, 3, 1));
        assert_eq!(first_case().order(), 4);
        assert_eq!(second_case().order(), 4);
    }

    #[test]
    fn blocks() {
        let m = second_case();
        assert_eq!(m.upper_left(3).unwrap(), m);
        assert_eq!(
            m.upper_left(2).unwrap(),
            UniTriMatrix::elementary(2, 2, 1, 2, 1)
        );
        assert_eq!(
            first_case().lower_right(2).unwrap(),
            UniTriMatrix::elementary(2, 2, 1, 2, 1)
        );
        assert!(m.lower_right(1).unwrap().is_identity());
        assert!(m.upper_left(4).is_err());
        let id = UniTriMatrix::identity(4, 5);
        assert_eq!(id.upper_left(2).unwrap(), UniTriMatrix::identity(2, 5));
    }

    #[test]
    fn literal_errors() {
        assert!(UniTriMatrix::parse_literal("2 2 / 1 0 / 1 1").is_err());
        assert!(UniTriMatrix::parse_literal("2 2 / 0 1 / 0 1").is_err());
        assert!(UniTriMatrix::parse_literal("2 4 / 1 1 / 0 1").is_err());
        assert!(UniTriMatrix::parse_literal("2 3 / 1 3 / 0 1").is_err());
        assert!(UniTriMatrix::parse_literal("2 3 / 1 2").is_err());
        let m = UniTriMatrix::parse_literal("2 3 / 1 2 / 0 1").unwrap();
        assert_eq!(m.to_literal(), "2 3 / 1 2 / 0 1");
    }

    fn arb_matrix(n: usize, p: u8) -> impl Strategy<Value = UniTriMatrix> {
        proptest::collection::vec(0..p, packed_len(n))
            .prop_map(move |v| UniTriMatrix::from_packed(n, p, &v))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_matrix(5, 3), b in arb_matrix(5, 3), c in arb_matrix(5, 3)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.mul(&a.inv()).is_identity());
            prop_assert!(a.inv().mul(&a).is_identity());
            // superdiagonal is additive
            let s: Vec<u8> = a.superdiagonal().iter().zip(b.superdiagonal()).map(|(x, y)| (x + y) % 3).collect();
            prop_assert_eq!(a.mul(&b).superdiagonal(), s);
            // block maps are homomorphisms
            prop_assert_eq!(a.mul(&b).upper_left(3).unwrap(), a.upper_left(3).unwrap().mul(&b.upper_left(3).unwrap()));
            prop_assert_eq!(a.mul(&b).lower_right(2).unwrap(), a.lower_right(2).unwrap().mul(&b.lower_right(2).unwrap()));
        }

        #[test]
        fn literal_round_trip(a in arb_matrix(4, 5)) {
            prop_assert_eq!(UniTriMatrix::parse_literal(&a.to_literal()).unwrap(), a);
        }
    }
}
