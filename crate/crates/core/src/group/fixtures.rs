use super::{
    build_cyclic, build_direct_product, build_semidirect_cyclic, closure_group, FiniteGroup,
    GroupOps, FULL_GROUP_LIMIT, PRODUCT_LIMIT,
};
use crate::error::{Error, Result};
use crate::unitri::UnitriQuotient;

/// Permutations of `0..degree`, composed left to right (`(ab)(x) = b(a(x))`).
#[derive(Clone, Copy, Debug)]
pub struct Perm {
    pub degree: usize,
}

impl GroupOps for Perm {
    type Elem = Vec<u8>;

    fn identity(&self) -> Vec<u8> {
        (0..self.degree as u8).collect()
    }

    fn op(&self, a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
        a.iter().map(|&x| b[x as usize]).collect()
    }

    fn inverse(&self, a: &Vec<u8>) -> Vec<u8> {
        let mut out = vec![0u8; a.len()];
        for (i, &x) in a.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        out
    }
}

/// Unit Lipschitz quaternions `±1, ±i, ±j, ±k` as integer 4-vectors.
#[derive(Clone, Copy, Debug)]
pub struct Quaternion;

impl GroupOps for Quaternion {
    type Elem = [i8; 4];

    fn identity(&self) -> [i8; 4] {
        [1, 0, 0, 0]
    }

    fn op(&self, a: &[i8; 4], b: &[i8; 4]) -> [i8; 4] {
        let [a0, a1, a2, a3] = *a;
        let [b0, b1, b2, b3] = *b;
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ]
    }

    fn inverse(&self, a: &[i8; 4]) -> [i8; 4] {
        [a[0], -a[1], -a[2], -a[3]]
    }
}

pub fn fixture_names() -> Vec<&'static str> {
    vec![
        "Z1",
        "Z2",
        "Z3",
        "Z4",
        "Z5",
        "Z8",
        "V4",
        "S3",
        "D4",
        "Q8",
        "U3(2)",
        "U3(3)",
        "Z2xZ2xZ2",
        "Z3xZ3",
        "SD(2,1,3)",
        "SD(3,1,7)",
        "SD(2,2,3)",
    ]
}

/// Resolves a group name: `Z<n>`, `V4`, `S3`, `D4`, `Q8`, `U<n>(<p>)`,
/// `SD(<l>,<k>,<p>)` and direct products joined by `x` (e.g. `Z2xZ2`).
pub fn lookup_fixture(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    let unknown = || Error::Unknown {
        kind: "group",
        name: name.to_string(),
    };
    // split on `x` outside parentheses
    let mut depth = 0;
    let mut parts = vec![];
    let mut start = 0;
    for (i, ch) in name.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' | '×' if depth == 0 => {
                parts.push(&name[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&name[start..]);
    if parts.len() > 1 {
        let mut acc = lookup_fixture(parts[0])?;
        for part in &parts[1..] {
            acc = build_direct_product(&acc, &lookup_fixture(part)?)?;
        }
        return Ok(acc.with_label(name));
    }

    let group = match name {
        "V4" => build_direct_product(&build_cyclic(2)?, &build_cyclic(2)?)?,
        "S3" => {
            let perm = Perm { degree: 3 };
            closure_group(
                &perm,
                &[vec![1, 2, 0], vec![1, 0, 2]],
                "S3",
                FULL_GROUP_LIMIT,
            )?
            .0
        }
        "D4" => {
            let perm = Perm { degree: 4 };
            closure_group(
                &perm,
                &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]],
                "D4",
                FULL_GROUP_LIMIT,
            )?
            .0
        }
        "Q8" => {
            closure_group(
                &Quaternion,
                &[[0, 1, 0, 0], [0, 0, 1, 0]],
                "Q8",
                FULL_GROUP_LIMIT,
            )?
            .0
        }
        _ => {
            if let Some(rest) = name.strip_prefix('Z') {
                let n: usize = rest.parse().map_err(|_| unknown())?;
                build_cyclic(n)?
            } else if let Some(rest) = name.strip_prefix("SD(") {
                let args: Vec<u64> = rest
                    .trim_end_matches(')')
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| unknown())?;
                if args.len() != 3 {
                    return Err(unknown());
                }
                build_semidirect_cyclic(args[0], args[1] as u32, args[2])?.0
            } else if let Some(rest) = name.strip_prefix('U') {
                let (n, p) = rest
                    .trim_end_matches(')')
                    .split_once('(')
                    .ok_or_else(unknown)?;
                let n: usize = n.parse().map_err(|_| unknown())?;
                let p: u8 = p.parse().map_err(|_| unknown())?;
                let full = UnitriQuotient::full(n, p)?;
                let m = full.materialize(PRODUCT_LIMIT)?;
                m.group
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(group.with_label(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_resolve_and_have_expected_orders() {
        let expected = [
            ("Z1", 1),
            ("Z2", 2),
            ("V4", 4),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("U3(2)", 8),
            ("Z2xZ2xZ2", 8),
            ("SD(2,2,3)", 16),
        ];
        for (name, order) in expected {
            assert_eq!(lookup_fixture(name).unwrap().order(), order, "{name}");
        }
        for name in fixture_names() {
            let g = lookup_fixture(name).unwrap();
            assert_eq!(g.subgroup(g.generators()).len(), g.order(), "{name}");
        }
    }

    #[test]
    fn d4_and_u3_2_share_an_order_profile() {
        let d4 = lookup_fixture("D4").unwrap();
        let u = lookup_fixture("U3(2)").unwrap();
        assert_eq!(d4.order_profile(), u.order_profile());
        assert_ne!(
            d4.order_profile(),
            lookup_fixture("Q8").unwrap().order_profile()
        );
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(lookup_fixture("Foo").is_err());
        assert!(lookup_fixture("Zq").is_err());
    }
}
