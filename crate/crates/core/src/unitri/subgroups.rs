//! The named subgroups `Z_m`, `P_m`, `M_{k,m}` of `U_m(p)`, the quotients
//! they define, and the central filtration of `Ker φ`.

use std::fmt;
use std::sync::OnceLock;

use super::matrix::UniTriMatrix;
use super::quotient::{positions_with_span, MaterializedQuotient, UnitriQuotient};
use crate::error::{Error, Result};
use crate::group::{GroupOps, PRODUCT_LIMIT};

/// `U_n(p)` with its table built on first use.
#[derive(Debug)]
pub struct UniTriGroup {
    quotient: UnitriQuotient,
    table: OnceLock<MaterializedQuotient>,
}

pub fn unitri_group(n: usize, p: u8) -> Result<UniTriGroup> {
    Ok(UniTriGroup {
        quotient: UnitriQuotient::full(n, p)?,
        table: OnceLock::new(),
    })
}

impl UniTriGroup {
    pub fn size(&self) -> usize {
        self.quotient.size()
    }

    pub fn modulus(&self) -> u8 {
        self.quotient.modulus()
    }

    pub fn order(&self) -> u128 {
        self.quotient.order()
    }

    pub fn as_quotient(&self) -> &UnitriQuotient {
        &self.quotient
    }

    pub fn is_materializable(&self) -> bool {
        self.order() <= PRODUCT_LIMIT as u128
    }

    pub fn materialized(&self) -> Result<&MaterializedQuotient> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = self.quotient.materialize(PRODUCT_LIMIT)?;
        Ok(self.table.get_or_init(|| t))
    }
}

impl GroupOps for UniTriGroup {
    type Elem = UniTriMatrix;

    fn identity(&self) -> UniTriMatrix {
        self.quotient.identity()
    }

    fn op(&self, a: &UniTriMatrix, b: &UniTriMatrix) -> UniTriMatrix {
        a.mul(b)
    }

    fn inverse(&self, a: &UniTriMatrix) -> UniTriMatrix {
        a.inv()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    Z,
    P,
    M(usize),
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupKind::Z => write!(f, "Z"),
            SubgroupKind::P => write!(f, "P"),
            SubgroupKind::M(k) => write!(f, "M({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubgroup {
    m: usize,
    p: u8,
    kind: SubgroupKind,
}

impl NamedSubgroup {
    pub fn new(m: usize, p: u8, kind: SubgroupKind) -> Result<Self> {
        // validates m and p
        UnitriQuotient::full(m, p)?;
        if let SubgroupKind::M(k) = kind {
            if k == 0 || k >= m {
                return Err(Error::BadParameter(format!(
                    "M({k}) needs 1 ≤ k ≤ {}",
                    m - 1
                )));
            }
        }
        Ok(NamedSubgroup { m, p, kind })
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> u8 {
        self.p
    }

    /// Whether entry `(i, j)` is forced to vanish, written out from the
    /// defining conditions.
    fn forced_zero(&self, i: usize, j: usize) -> bool {
        let m = self.m;
        match self.kind {
            SubgroupKind::Z => (1 <= i && i < j && j < m) || (2 <= i && i < j && j <= m),
            SubgroupKind::P => j == i + 1 || j == i + 2,
            SubgroupKind::M(k) => (i < j && j < m) || (j == m && k <= i && i < m),
        }
    }

    pub fn contains(&self, u: &UniTriMatrix) -> bool {
        u.size() == self.m
            && u.modulus() == self.p
            && (1..=self.m)
                .all(|i| (i + 1..=self.m).all(|j| !self.forced_zero(i, j) || u.at(i, j) == 0))
    }

    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        (1..=self.m)
            .flat_map(|i| (i + 1..=self.m).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.forced_zero(i, j))
            .collect()
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.free_positions().len() as u32)
    }

    /// All members, in lexicographic order of their free entries.
    pub fn elements(&self, limit: usize) -> Result<Vec<UniTriMatrix>> {
        let free = self.free_positions();
        let order = self.order();
        if order > limit as u128 {
            return Err(Error::size(
                format!("subgroup {} of U_{}", self.kind, self.m),
                order,
                limit as u128,
            ));
        }
        let mut out = Vec::with_capacity(order as usize);
        for mut idx in 0..order as usize {
            let mut u = UniTriMatrix::identity(self.m, self.p);
            for &(i, j) in free.iter().rev() {
                u.set(i, j, (idx % self.p as usize) as u8);
                idx /= self.p as usize;
            }
            out.push(u);
        }
        Ok(out)
    }

    /// `U_m(p)` modulo this subgroup. All three kinds are supported on an
    /// upper set of positions, so the pattern quotient applies.
    pub fn quotient(&self) -> Result<UnitriQuotient> {
        UnitriQuotient::new(self.m, self.p, &self.free_positions())
    }
}

impl UnitriQuotient {
    /// `Q_{k,m} = U_m(p)/M_{k,m}`.
    pub fn q(k: usize, m: usize, p: u8) -> Result<Self> {
        NamedSubgroup::new(m, p, SubgroupKind::M(k))?.quotient()
    }

    pub fn modulo_center(m: usize, p: u8) -> Result<Self> {
        NamedSubgroup::new(m, p, SubgroupKind::Z)?.quotient()
    }

    pub fn modulo_p(m: usize, p: u8) -> Result<Self> {
        NamedSubgroup::new(m, p, SubgroupKind::P)?.quotient()
    }
}

/// Order in which positions of span ≥ 2 enter the filtration: widest span
/// first, then top row first. Every prefix is an upper set.
pub fn filtration_positions(n_plus_1: usize) -> Vec<(usize, usize)> {
    let mut pos = positions_with_span(n_plus_1, |s| s >= 2);
    pos.sort_by_key(|&(i, j)| (std::cmp::Reverse(j - i), i));
    pos
}

/// `{1} = N_0 ⊂ N_1 ⊂ ⋯ ⊂ N_L = Ker φ_{n+1}` in `U_{n+1}(p)`, each `N_k`
/// supported on the first `k` filtration positions.
#[derive(Clone, Debug)]
pub struct CentralSeries {
    n: usize,
    p: u8,
    positions: Vec<(usize, usize)>,
}

pub fn central_series_ker_phi(n: usize, p: u8) -> Result<CentralSeries> {
    UnitriQuotient::full(n + 1, p)?;
    Ok(CentralSeries {
        n,
        p,
        positions: filtration_positions(n + 1),
    })
}

impl CentralSeries {
    pub fn length(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    /// `U_{n+1}(p)/N_k`.
    pub fn quotient(&self, k: usize) -> Result<UnitriQuotient> {
        if k > self.length() {
            return Err(Error::BadParameter(format!(
                "filtration index {k} > {}",
                self.length()
            )));
        }
        UnitriQuotient::new(self.n + 1, self.p, &self.positions[..k])
    }

    /// Members of `N_k` as matrices.
    pub fn members(&self, k: usize, limit: usize) -> Result<Vec<UniTriMatrix>> {
        let full = UnitriQuotient::full(self.n + 1, self.p)?;
        let q = self.quotient(k)?;
        full.fiber_over(&q, &full.identity(), limit)
    }

    /// Exhaustive check of the chain on the materialized group: every `N_k`
    /// is normal, every step has order `p`, and `N_{k+1}/N_k` is central in
    /// `U/N_k`. Returns the first violated step.
    pub fn check(&self) -> Result<std::result::Result<(), usize>> {
        let full = UnitriQuotient::full(self.n + 1, self.p)?.materialize(PRODUCT_LIMIT)?;
        let g = &full.group;
        for k in 0..=self.length() {
            let members = self.members(k, PRODUCT_LIMIT)?;
            if members.len() as u128 != (self.p as u128).pow(k as u32) {
                return Ok(Err(k));
            }
            let idx: Vec<usize> = members.iter().map(|m| full.index_of(m)).collect();
            if !g.is_normal(&idx) {
                return Ok(Err(k));
            }
            if k < self.length() {
                let fine = self.quotient(k)?;
                let (i, j) = self.positions[k];
                let z = fine.canonical(&UniTriMatrix::elementary(self.n + 1, self.p, i, j, 1));
                if !full
                    .elems
                    .iter()
                    .all(|u| fine.commutes(&fine.canonical(u), &z))
                {
                    return Ok(Err(k));
                }
            }
        }
        Ok(Ok(()))
    }
}

/// `U_{n+1}(p)/Z` and `U_{n+1}(p)/P` together with the induced maps onto
/// `(Z/p)^n`, each stored as an index table into the superdiagonal quotient.
#[derive(Clone, Debug)]
pub struct ZetaKappa {
    pub modulo_z: MaterializedQuotient,
    pub modulo_p: MaterializedQuotient,
    pub abelian: MaterializedQuotient,
    pub zeta: Vec<usize>,
    pub kappa: Vec<usize>,
}

pub fn zeta_kappa_targets(n: usize, p: u8) -> Result<ZetaKappa> {
    let m = n + 1;
    let modulo_z = UnitriQuotient::modulo_center(m, p)?.materialize(PRODUCT_LIMIT)?;
    let modulo_p = UnitriQuotient::modulo_p(m, p)?.materialize(PRODUCT_LIMIT)?;
    let abelian = UnitriQuotient::superdiagonal_only(m, p)?.materialize(PRODUCT_LIMIT)?;
    let induced = |q: &MaterializedQuotient, sub: SubgroupKind| -> Result<Vec<usize>> {
        // φ must vanish on the subgroup for the map to descend
        let s = NamedSubgroup::new(m, p, sub)?;
        if s.free_positions().iter().any(|&(i, j)| j == i + 1) {
            return Err(Error::Internal(format!(
                "φ does not factor through U/{sub}"
            )));
        }
        q.projection_to(&abelian)
    };
    let zeta = induced(&modulo_z, SubgroupKind::Z)?;
    let kappa = induced(&modulo_p, SubgroupKind::P)?;
    Ok(ZetaKappa {
        modulo_z,
        modulo_p,
        abelian,
        zeta,
        kappa,
    })
}

impl ZetaKappa {
    /// Checks `ζ∘π = φ` and `κ∘π = φ` on every matrix of `full`.
    pub fn factors_phi(&self, full: &MaterializedQuotient) -> bool {
        full.elems.iter().all(|u| {
            let phi = self.abelian.index_of(u);
            self.zeta[self.modulo_z.index_of(u)] == phi
                && self.kappa[self.modulo_p.index_of(u)] == phi
        })
    }
}
