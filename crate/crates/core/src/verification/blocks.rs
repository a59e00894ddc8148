//! Order-two lifts over `Z/2`, the `U_3(2)` audit, and block splicing.

use std::sync::Arc;

use serde::Serialize;

use crate::embedding::UnitriHom;
use crate::error::{Error, Result};
use crate::unitri::{UniTriMatrix, UnitriQuotient};

/// `(a_1(g), …, a_n(g))` for the generator `g` of `Z/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignPattern {
    bits: Vec<u8>,
}

impl SignPattern {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::BadParameter("sign patterns have length ≥ 1".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadParameter(
                "sign pattern entries are 0 or 1".into(),
            ));
        }
        Ok(SignPattern { bits })
    }

    /// Bit `i` of `mask` is `a_{i+1}(g)`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SignPattern {
            bits: (0..n).map(|i| (mask >> i & 1) as u8).collect(),
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The first `i` (1-based) with `a_i(g) = a_{i+1}(g) = 1`.
    pub fn adjacent_ones(&self) -> Option<usize> {
        self.bits
            .windows(2)
            .position(|w| w == [1, 1])
            .map(|i| i + 1)
    }
}

/// Block-diagonal `A ∈ U_{n+1}(2)` with a `[[1,1],[0,1]]` block at each 1 of
/// the pattern.
pub fn block_lift(pattern: &SignPattern) -> Result<UniTriMatrix> {
    if let Some(index) = pattern.adjacent_ones() {
        return Err(Error::AdjacentOnes { index });
    }
    let n = pattern.len();
    Ok(UniTriMatrix::from_fn(n + 1, 2, |i, j| {
        if j == i + 1 {
            pattern.bits[i - 1]
        } else {
            0
        }
    }))
}

/// The hom `Z/2 → U_{n+1}(2)` sending the generator to the block lift.
pub fn block_lift_hom(
    group: Arc<crate::group::FiniteGroup>,
    pattern: &SignPattern,
) -> Result<UnitriHom> {
    if group.order() != 2 {
        return Err(Error::BadParameter("block lifts are defined on Z/2".into()));
    }
    let a = block_lift(pattern)?;
    let n = pattern.len();
    UnitriHom::new(
        group,
        UnitriQuotient::full(n + 1, 2)?,
        vec![UniTriMatrix::identity(n + 1, 2), a],
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreimageOrder {
    pub matrix: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseByCaseAudit {
    /// Elements of `U_3(2)` over `(1, 1)`.
    pub over_ones: Vec<PreimageOrder>,
    /// Elements of `U_3(2)` over `(0, 0)`.
    pub over_zero: Vec<PreimageOrder>,
    /// No element over `(1, 1)` has order at most two.
    pub holds: bool,
}

fn preimages(a: u8, b: u8) -> Vec<PreimageOrder> {
    (0..2u8)
        .map(|c| {
            let m = UniTriMatrix::from_fn(3, 2, |i, j| match (i, j) {
                (1, 2) => a,
                (2, 3) => b,
                _ => c,
            });
            PreimageOrder {
                matrix: m.to_literal(),
                order: m.order(),
            }
        })
        .collect()
}

/// Lists every element of `U_3(2)` over `(1, 1)` and `(0, 0)` with its order.
pub fn case_by_case_audit() -> CaseByCaseAudit {
    let over_ones = preimages(1, 1);
    let holds = over_ones.iter().all(|x| x.order > 2);
    CaseByCaseAudit {
        over_ones,
        over_zero: preimages(0, 0),
        holds,
    }
}

/// `g ↦ diag(left(g), right(g))`: a lift of `a_1, …, a_{k−1}, 0, a_{k+1}, …`
/// built from lifts of the two sides.
pub fn splice_lifts(left: &UnitriHom, right: &UnitriHom) -> Result<UnitriHom> {
    let (l, r) = (left.target(), right.target());
    if **left.group() != **right.group() {
        return Err(Error::SizeMismatch("lifts have different domains".into()));
    }
    if l.modulus() != r.modulus() {
        return Err(Error::SizeMismatch("lifts over different moduli".into()));
    }
    if !l.killed_positions().is_empty() || !r.killed_positions().is_empty() {
        return Err(Error::SizeMismatch(
            "splicing needs lifts into full unitriangular groups".into(),
        ));
    }
    let n = l.size() + r.size();
    if n > crate::unitri::MAX_N {
        return Err(Error::SizeMismatch(format!(
            "spliced size {n} exceeds {}",
            crate::unitri::MAX_N
        )));
    }
    let images = left
        .images()
        .iter()
        .zip(right.images())
        .map(|(a, b)| UniTriMatrix::block_diag(a, b))
        .collect::<Result<Vec<_>>>()?;
    UnitriHom::new(
        left.group().clone(),
        UnitriQuotient::full(n, l.modulus())?,
        images,
    )
}
