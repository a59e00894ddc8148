use std::sync::Arc;

use serde::Serialize;

use super::Cohomology;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{AnyEchelon, Backend};

/// Gram matrix of `H^1 × H^1 → H^2 ≅ Z/p` in the `H^1` basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupForm {
    pub p: u8,
    pub gram: Vec<Vec<u8>>,
}

pub fn cup_form(coh: &Cohomology) -> Result<CupForm> {
    if coh.h2_dim() != 1 {
        return Err(Error::NotApplicable(format!(
            "dim H^2 = {}, the cup form needs 1",
            coh.h2_dim()
        )));
    }
    let basis = coh.h1_basis();
    let gram = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| Ok(coh.cup_class(a, b)?.coords[0]))
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<_>>()?;
    Ok(CupForm {
        p: coh.modulus(),
        gram,
    })
}

impl CupForm {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        let d = self.dim();
        let mut e = AnyEchelon::new(Backend::Dense, d, 0, self.p).expect("dense backend");
        for row in &self.gram {
            e.insert(row);
        }
        e.rank() == d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemushkinReport {
    pub group: String,
    pub p: u8,
    pub dim_h1: usize,
    pub dim_h2: usize,
    pub form: Option<CupForm>,
    pub nondegenerate: Option<bool>,
    pub verdict: bool,
}

/// `dim H^2 = 1` and a nondegenerate cup form; finiteness of `H^1` is
/// automatic for finite groups.
pub fn demushkin_check(group: Arc<FiniteGroup>, p: u8) -> Result<DemushkinReport> {
    let label = group.label().to_string();
    let coh = Cohomology::compute(group, p)?;
    let form = cup_form(&coh).ok();
    let nondegenerate = form.as_ref().map(CupForm::is_nondegenerate);
    Ok(DemushkinReport {
        group: label,
        p,
        dim_h1: coh.h1_dim(),
        dim_h2: coh.h2_dim(),
        verdict: nondegenerate == Some(true),
        form,
        nondegenerate,
    })
}
