//! Exhaustive checks of the subgroups `M_{k,m}`, the pair form of
//! `Q_{k,m}`, the maps `ρ_{k,m}` and `ι_{k,m}`, and the central filtration
//! of `Ker φ_{n+1}`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::group::{GroupOps, PRODUCT_LIMIT};
use crate::unitri::{
    central_series_ker_phi, FiberQuotient, NamedSubgroup, SubgroupKind, UniTriMatrix,
    UnitriQuotient,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MAudit {
    pub k: usize,
    pub order: u128,
    pub normal: bool,
    pub is_block_kernel: bool,
    pub pair_map_is_hom: bool,
    pub pair_map_onto: bool,
    pub pair_map_kernel_is_m: bool,
    pub quotient_order_matches: bool,
    /// `|Ker ρ_{k,m}| = p`; absent when `ρ_{k,m}` is not defined.
    pub rho_kernel_order_p: Option<bool>,
    pub iota_additive: Option<bool>,
}

impl MAudit {
    pub fn holds(&self) -> bool {
        self.normal
            && self.is_block_kernel
            && self.pair_map_is_hom
            && self.pair_map_onto
            && self.pair_map_kernel_is_m
            && self.quotient_order_matches
            && self.rho_kernel_order_p != Some(false)
            && self.iota_additive != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureAudit {
    pub m: usize,
    pub p: u8,
    pub subgroups: Vec<MAudit>,
}

impl StructureAudit {
    pub fn holds(&self) -> bool {
        self.subgroups.iter().all(MAudit::holds)
    }
}

/// Every `M_{k,m}`, `1 ≤ k ≤ m−1`, checked on all of `U_m(p)`.
pub fn structure_audit(m: usize, p: u8) -> Result<StructureAudit> {
    let full = UnitriQuotient::full(m, p)?;
    if full.order() > PRODUCT_LIMIT as u128 {
        return Err(crate::error::Error::size(
            "U_m(p)",
            full.order(),
            PRODUCT_LIMIT as u128,
        ));
    }
    let all: Vec<UniTriMatrix> = (0..full.order() as usize)
        .map(|i| full.element_at(i))
        .collect();
    let mut subgroups = Vec::new();
    for k in 1..m {
        let sub = NamedSubgroup::new(m, p, SubgroupKind::M(k))?;
        let members = sub.elements(PRODUCT_LIMIT)?;
        let member_set: HashSet<UniTriMatrix> = members.iter().copied().collect();
        let normal = all.iter().all(|u| {
            members
                .iter()
                .all(|x| member_set.contains(&u.mul(x).mul(&u.inv())))
        });
        let is_block_kernel = all.iter().all(|u| {
            let in_kernels = u
                .upper_left(m - 1)
                .map(|a| a.is_identity())
                .unwrap_or(false)
                && u.lower_right(m + 1 - k)
                    .map(|b| b.is_identity())
                    .unwrap_or(false);
            in_kernels == member_set.contains(u)
        });
        let q = FiberQuotient::new(k, m, p)?;
        let image: Vec<_> = all
            .iter()
            .map(|u| q.from_matrix(u))
            .collect::<Result<_>>()?;
        let pair_map_is_hom = all.iter().zip(&image).all(|(u, fu)| {
            all.iter().zip(&image).all(|(v, fv)| {
                q.from_matrix(&u.mul(v))
                    .map(|x| x == q.op(fu, fv))
                    .unwrap_or(false)
            })
        });
        let image_set: HashSet<_> = image.iter().copied().collect();
        let pairs: HashSet<_> = q.elements(PRODUCT_LIMIT)?.into_iter().collect();
        let pair_map_onto = image_set == pairs;
        let id = q.identity();
        let pair_map_kernel_is_m = all
            .iter()
            .zip(&image)
            .all(|(u, fu)| (*fu == id) == member_set.contains(u));
        let quotient_order_matches = all.len() as u128 / members.len() as u128 == q.order();
        let (rho_kernel_order_p, iota_additive) = if k + 2 <= m {
            let kernel: Vec<_> = pairs
                .iter()
                .copied()
                .filter(|x| q.in_rho_kernel(x))
                .collect();
            let by_rho = pairs
                .iter()
                .filter(|x| {
                    q.rho_map(x)
                        .map(|(t, y)| y == t.identity())
                        .unwrap_or(false)
                })
                .count();
            let additive = kernel.iter().all(|x| {
                kernel.iter().all(|y| {
                    let s = q.iota_map(&q.op(x, y)).ok();
                    s == Some((q.iota_map(x).unwrap() + q.iota_map(y).unwrap()) % p)
                })
            });
            let values: HashSet<u8> = kernel.iter().filter_map(|x| q.iota_map(x).ok()).collect();
            (
                Some(kernel.len() == p as usize && by_rho == p as usize),
                Some(additive && values.len() == p as usize),
            )
        } else {
            (None, None)
        };
        subgroups.push(MAudit {
            k,
            order: members.len() as u128,
            normal,
            is_block_kernel,
            pair_map_is_hom,
            pair_map_onto,
            pair_map_kernel_is_m,
            quotient_order_matches,
            rho_kernel_order_p,
            iota_additive,
        });
    }
    Ok(StructureAudit { m, p, subgroups })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationLength {
    pub n: usize,
    pub p: u8,
    /// Steps in the computed chain `N_0 ⊂ ⋯ ⊂ N_L = Ker φ_{n+1}`.
    pub length: usize,
    /// Entries of `U_{n+1}` above the superdiagonal, one per step.
    pub entry_count: usize,
    /// `binom(n−1, 2)`, the index written for this chain in the source.
    pub printed_index: usize,
    pub equals_entry_count: bool,
    pub equals_printed_index: bool,
    pub chain_verified: bool,
}

pub fn filtration_length(n: usize, p: u8) -> Result<FiltrationLength> {
    let series = central_series_ker_phi(n, p)?;
    let length = series.length();
    let entry_count = n * (n - 1) / 2;
    let printed_index = if n >= 2 { (n - 1) * (n - 2) / 2 } else { 0 };
    Ok(FiltrationLength {
        n,
        p,
        length,
        entry_count,
        printed_index,
        equals_entry_count: length == entry_count,
        equals_printed_index: length == printed_index,
        chain_verified: series.check()?.is_ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_holds_at_small_sizes() {
        for (m, p) in [(3, 2), (4, 2), (3, 3)] {
            let a = structure_audit(m, p).unwrap();
            assert!(a.holds(), "{a:?}");
            assert_eq!(a.subgroups.len(), m - 1);
        }
    }

    #[test]
    fn rho_is_defined_up_to_m_minus_two() {
        let a = structure_audit(4, 2).unwrap();
        assert_eq!(
            a.subgroups
                .iter()
                .map(|s| s.rho_kernel_order_p.is_some())
                .collect::<Vec<_>>(),
            vec![true, true, false]
        );
    }

    #[test]
    fn filtration_length_is_the_entry_count() {
        for n in 2..=4 {
            let f = filtration_length(n, 2).unwrap();
            assert!(f.equals_entry_count && f.chain_verified);
            assert!(!f.equals_printed_index);
        }
    }
}
