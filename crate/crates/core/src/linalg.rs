//! Row reduction over `F_p`.
//!
//! Two row backends share one echelon implementation: residues stored one
//! per byte, and bit-packed rows for `p = 2` where adding rows is a word-wise
//! XOR. The echelon form is kept fully reduced, so reducing a sparse vector
//! touches only the pivots it actually hits.

use std::fmt::Debug;

use crate::error::{Error, Result};

pub fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(!a.is_multiple_of(p));
    let (a, p) = (a as u32 % p as u32, p as u32);
    (1..p).find(|&x| a * x % p == 1).expect("p prime") as u8
}

pub trait FpRow: Clone + Debug + PartialEq + Send + Sync {
    fn zeros(len: usize, p: u8) -> Self;
    fn len(&self) -> usize;
    fn get(&self, i: usize) -> u8;
    fn set(&mut self, i: usize, v: u8);
    /// `self += c · other`.
    fn add_scaled(&mut self, other: &Self, c: u8);
    fn scale(&mut self, c: u8);
    fn first_nonzero(&self) -> Option<usize>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    fn from_values(values: &[u8], p: u8) -> Self {
        let mut r = Self::zeros(values.len(), p);
        for (i, &v) in values.iter().enumerate() {
            if v != 0 {
                r.set(i, v);
            }
        }
        r
    }

    fn to_values(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseRow {
    p: u8,
    data: Vec<u8>,
}

impl FpRow for DenseRow {
    fn zeros(len: usize, p: u8) -> Self {
        DenseRow {
            p,
            data: vec![0; len],
        }
    }

    fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn get(&self, i: usize) -> u8 {
        self.data[i]
    }

    #[inline]
    fn set(&mut self, i: usize, v: u8) {
        self.data[i] = v % self.p;
    }

    fn add_scaled(&mut self, other: &Self, c: u8) {
        let c = (c % self.p) as u16;
        if c == 0 {
            return;
        }
        let p = self.p as u16;
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            if y != 0 {
                *x = ((*x as u16 + c * y as u16) % p) as u8;
            }
        }
    }

    fn scale(&mut self, c: u8) {
        let p = self.p as u16;
        for x in &mut self.data {
            *x = ((*x as u16 * c as u16) % p) as u8;
        }
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.data.iter().position(|&x| x != 0)
    }

    fn to_values(&self) -> Vec<u8> {
        self.data.clone()
    }
}

/// Bit-packed row over `F_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl FpRow for BitRow {
    fn zeros(len: usize, p: u8) -> Self {
        assert_eq!(p, 2, "bit-packed rows only exist over F_2");
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    #[inline]
    fn get(&self, i: usize) -> u8 {
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    #[inline]
    fn set(&mut self, i: usize, v: u8) {
        let bit = 1u64 << (i % 64);
        if v & 1 == 1 {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    fn add_scaled(&mut self, other: &Self, c: u8) {
        if c & 1 == 1 {
            for (x, y) in self.words.iter_mut().zip(&other.words) {
                *x ^= y;
            }
        }
    }

    fn scale(&mut self, c: u8) {
        if c & 1 == 0 {
            self.words.iter_mut().for_each(|w| *w = 0);
        }
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|k| k * 64 + self.words[k].trailing_zeros() as usize)
    }
}

/// Reduced row echelon form with optional bookkeeping: every stored row
/// carries a tag expressing it as a combination of the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon<R: FpRow> {
    p: u8,
    width: usize,
    tag_width: usize,
    rows: Vec<R>,
    tags: Vec<R>,
    pivots: Vec<usize>,
    inserted: usize,
}

impl<R: FpRow> Echelon<R> {
    pub fn new(width: usize, p: u8) -> Self {
        Self::with_tags(width, 0, p)
    }

    /// Tags have room for `tag_width` inserted vectors.
    pub fn with_tags(width: usize, tag_width: usize, p: u8) -> Self {
        Echelon {
            p,
            width,
            tag_width,
            rows: Vec::new(),
            tags: Vec::new(),
            pivots: Vec::new(),
            inserted: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Returns `(residual, combination)` with
    /// `v = residual + Σ combination_i · inserted_i`.
    pub fn reduce(&self, v: &R) -> (R, R) {
        let mut r = v.clone();
        let mut combo = R::zeros(self.tag_width, self.p);
        for ((row, tag), &piv) in self.rows.iter().zip(&self.tags).zip(&self.pivots) {
            let c = r.get(piv);
            if c != 0 {
                r.add_scaled(row, self.p - c);
                if self.tag_width > 0 {
                    combo.add_scaled(tag, c);
                }
            }
        }
        (r, combo)
    }

    pub fn contains(&self, v: &R) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &R) -> bool {
        let slot = self.inserted;
        self.inserted += 1;
        let (mut r, combo) = self.reduce(v);
        let Some(piv) = r.first_nonzero() else {
            return false;
        };
        let mut tag = R::zeros(self.tag_width, self.p);
        if self.tag_width > 0 {
            assert!(
                slot < self.tag_width,
                "more vectors inserted than tag slots"
            );
            tag.set(slot, 1);
            tag.add_scaled(&combo, self.p - 1);
        }
        let s = inv_mod(r.get(piv), self.p);
        r.scale(s);
        tag.scale(s);
        for (row, t) in self.rows.iter_mut().zip(self.tags.iter_mut()) {
            let c = row.get(piv);
            if c != 0 {
                row.add_scaled(&r, self.p - c);
                if self.tag_width > 0 {
                    t.add_scaled(&tag, self.p - c);
                }
            }
        }
        self.rows.push(r);
        self.tags.push(tag);
        self.pivots.push(piv);
        true
    }

    /// Basis of `{x : row · x = 0 for every stored row}`.
    pub fn nullspace(&self) -> Vec<R> {
        let mut is_pivot = vec![false; self.width];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.width)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = R::zeros(self.width, self.p);
                x.set(f, 1);
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    let v = row.get(f);
                    if v != 0 {
                        x.set(c, self.p - v);
                    }
                }
                x
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Bit-packed rows when `p = 2`, residue bytes otherwise.
    #[default]
    Auto,
    Dense,
    Packed,
}

impl Backend {
    pub fn resolve(self, p: u8) -> Result<Backend> {
        match (self, p) {
            (Backend::Auto, 2) | (Backend::Packed, 2) => Ok(Backend::Packed),
            (Backend::Packed, _) => Err(Error::BadParameter("bit-packed rows need p = 2".into())),
            _ => Ok(Backend::Dense),
        }
    }
}

/// An echelon whose backend is chosen at runtime; vectors go in and out as
/// residue slices.
#[derive(Clone, Debug)]
pub enum AnyEchelon {
    Dense(Echelon<DenseRow>),
    Packed(Echelon<BitRow>),
}

impl AnyEchelon {
    pub fn new(backend: Backend, width: usize, tag_width: usize, p: u8) -> Result<Self> {
        Ok(match backend.resolve(p)? {
            Backend::Packed => AnyEchelon::Packed(Echelon::with_tags(width, tag_width, p)),
            _ => AnyEchelon::Dense(Echelon::with_tags(width, tag_width, p)),
        })
    }

    pub fn rank(&self) -> usize {
        match self {
            AnyEchelon::Dense(e) => e.rank(),
            AnyEchelon::Packed(e) => e.rank(),
        }
    }

    pub fn insert(&mut self, v: &[u8]) -> bool {
        match self {
            AnyEchelon::Dense(e) => {
                let r = DenseRow::from_values(v, e.p);
                e.insert(&r)
            }
            AnyEchelon::Packed(e) => e.insert(&BitRow::from_values(v, 2)),
        }
    }

    pub fn reduce(&self, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
        match self {
            AnyEchelon::Dense(e) => {
                let (r, c) = e.reduce(&DenseRow::from_values(v, e.p));
                (r.to_values(), c.to_values())
            }
            AnyEchelon::Packed(e) => {
                let (r, c) = e.reduce(&BitRow::from_values(v, 2));
                (r.to_values(), c.to_values())
            }
        }
    }

    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        match self {
            AnyEchelon::Dense(e) => e.nullspace().iter().map(|r| r.to_values()).collect(),
            AnyEchelon::Packed(e) => e.nullspace().iter().map(|r| r.to_values()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(rng: &mut ChaCha8Rng, count: usize, width: usize, p: u8) -> Vec<Vec<u8>> {
        (0..count)
            .map(|_| {
                (0..width)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            rng.gen_range(0..p)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn dot(a: &[u8], b: &[u8], p: u8) -> u8 {
        (a.iter()
            .zip(b)
            .map(|(&x, &y)| x as u32 * y as u32)
            .sum::<u32>()
            % p as u32) as u8
    }

    #[test]
    fn inverses() {
        for p in [2u8, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a as u32 * inv_mod(a, p) as u32 % p as u32, 1);
            }
        }
    }

    #[test]
    fn identity_has_full_rank() {
        let mut e: Echelon<DenseRow> = Echelon::new(4, 3);
        for i in 0..4 {
            let mut v = DenseRow::zeros(4, 3);
            v.set(i, 1);
            assert!(e.insert(&v));
        }
        assert!(e.nullspace().is_empty());
        assert!(!e.insert(&DenseRow::from_values(&[1, 2, 0, 1], 3)));
    }

    #[test]
    fn packed_and_dense_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows = random_rows(&mut rng, 30, 90, 2);
            let mut d = AnyEchelon::new(Backend::Dense, 90, 30, 2).unwrap();
            let mut b = AnyEchelon::new(Backend::Packed, 90, 30, 2).unwrap();
            for r in &rows {
                assert_eq!(d.insert(r), b.insert(r));
            }
            assert_eq!(d.rank(), b.rank());
            assert_eq!(d.nullspace(), b.nullspace());
            let probe = random_rows(&mut rng, 1, 90, 2).pop().unwrap();
            assert_eq!(d.reduce(&probe), b.reduce(&probe));
        }
    }

    #[test]
    fn packed_rejects_odd_primes() {
        assert!(AnyEchelon::new(Backend::Packed, 3, 0, 3).is_err());
    }

    proptest! {
        #[test]
        fn nullspace_is_orthogonal(seed in any::<u64>(), p in prop::sample::select(vec![2u8, 3, 5])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = random_rows(&mut rng, 8, 12, p);
            let mut e = AnyEchelon::new(Backend::Dense, 12, 0, p).unwrap();
            for r in &rows {
                e.insert(r);
            }
            let ns = e.nullspace();
            prop_assert_eq!(ns.len() + e.rank(), 12);
            for x in &ns {
                for r in &rows {
                    prop_assert_eq!(dot(r, x, p), 0);
                }
            }
        }

        #[test]
        fn combination_reconstructs_vector(seed in any::<u64>(), p in prop::sample::select(vec![2u8, 3, 7])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = random_rows(&mut rng, 6, 10, p);
            let mut e = AnyEchelon::new(Backend::Auto, 10, rows.len(), p).unwrap();
            for r in &rows {
                e.insert(r);
            }
            let v = random_rows(&mut rng, 1, 10, p).pop().unwrap();
            let (res, combo) = e.reduce(&v);
            let mut back = res.clone();
            for (r, &c) in rows.iter().zip(&combo) {
                for (b, &x) in back.iter_mut().zip(r) {
                    *b = ((*b as u32 + c as u32 * x as u32) % p as u32) as u8;
                }
            }
            prop_assert_eq!(back, v);
        }
    }
}
