use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupOps};
use crate::error::{Error, Result};

/// Largest order for which a group is treated as a full fixture.
pub const FULL_GROUP_LIMIT: usize = 64;
/// Largest order for products and quotients that only serve as containers.
pub const PRODUCT_LIMIT: usize = 4096;

/// Validates a multiplication table and returns the group it defines.
///
/// If the identity is not at index 0 the elements `0` and `e` are swapped so
/// that it is. Generator indices refer to the table as given.
pub fn build_from_table(table: &[Vec<usize>], generators: &[usize]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::ShapeMismatch("empty table".into()));
    }
    if n > PRODUCT_LIMIT {
        return Err(Error::size("group order", n as u128, PRODUCT_LIMIT as u128));
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::ShapeMismatch(format!(
                "entry {bad} in row {r} out of range"
            )));
        }
    }
    if let Some(&g) = generators.iter().find(|&&g| g >= n) {
        return Err(Error::ShapeMismatch(format!("generator {g} out of range")));
    }

    let e = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or(Error::NoIdentity)?;

    // relabel so the identity sits at index 0
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u16;
        }
    }
    let at = |a: usize, b: usize| mul[a * n + b] as usize;

    let inv = (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| at(x, y) == 0 && at(y, x) == 0)
                .map(|y| y as u16)
                .ok_or(Error::NoInverse {
                    element: relabel(x),
                })
        })
        .collect::<Result<Vec<u16>>>()?;

    let gens: Vec<usize> = generators.iter().map(|&g| relabel(g)).collect();
    check_associative(n, &mul, &gens).map_err(|(a, b, c)| Error::NonAssociative {
        a: relabel(a),
        b: relabel(b),
        c: relabel(c),
    })?;

    let group = FiniteGroup::from_parts(n, mul, inv, gens, format!("table({n})"));
    let generated = group.subgroup(group.generators()).len();
    if generated != n {
        return Err(Error::GeneratorsDontGenerate {
            generated,
            order: n,
        });
    }
    Ok(group)
}

/// Exhaustive scan for small tables, Light's test over the generators
/// otherwise. Returns the first failing triple in lexicographic order.
fn check_associative(
    n: usize,
    mul: &[u16],
    gens: &[usize],
) -> std::result::Result<(), (usize, usize, usize)> {
    let at = |a: usize, b: usize| mul[a * n + b] as usize;
    if n <= FULL_GROUP_LIMIT || gens.is_empty() {
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err((a, b, c));
                    }
                }
            }
        }
    } else {
        for &g in gens {
            for a in 0..n {
                let ag = at(a, g);
                for c in 0..n {
                    if at(ag, c) != at(a, at(g, c)) {
                        return Err((a, g, c));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn build_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > FULL_GROUP_LIMIT {
        return Err(Error::size(
            "cyclic group order",
            n as u128,
            FULL_GROUP_LIMIT as u128,
        ));
    }
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = ((a + b) % n) as u16;
        }
    }
    let inv = (0..n).map(|a| ((n - a) % n) as u16).collect();
    let gens = if n == 1 { vec![] } else { vec![1] };
    Ok(FiniteGroup::from_parts(n, mul, inv, gens, format!("Z{n}")))
}

pub fn build_direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    if n > PRODUCT_LIMIT {
        return Err(Error::size(
            "direct product order",
            n as u128,
            PRODUCT_LIMIT as u128,
        ));
    }
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        let (a1, a2) = (a / nh, a % nh);
        for b in 0..n {
            let (b1, b2) = (b / nh, b % nh);
            mul[a * n + b] = (g.mul(a1, b1) * nh + h.mul(a2, b2)) as u16;
        }
    }
    let inv = (0..n)
        .map(|a| (g.inv(a / nh) * nh + h.inv(a % nh)) as u16)
        .collect();
    let label = format!("{}x{}", g.label(), h.label());
    let group = FiniteGroup::from_parts(n, mul, inv, vec![], label);
    let gens = group.greedy_generators();
    Ok(FiniteGroup {
        generators: gens,
        ..group
    })
}

/// `Z/l^k ⋊ Z/l^k` where the second factor acts on the first through
/// `x ↦ p·x`. Returns the group and whether `l | p − 1`.
pub fn build_semidirect_cyclic(l: u64, k: u32, p: u64) -> Result<(FiniteGroup, bool)> {
    if l < 2 || p < 2 || k == 0 {
        return Err(Error::BadParameter(format!("semidirect({l},{k},{p})")));
    }
    let m = l
        .checked_pow(k)
        .ok_or_else(|| Error::BadParameter("l^k overflows".into()))?;
    let n = (m * m) as usize;
    if n > PRODUCT_LIMIT {
        return Err(Error::size(
            "semidirect product order",
            n as u128,
            PRODUCT_LIMIT as u128,
        ));
    }
    // the action y ↦ (x ↦ p^y x) is well defined on Z/m only if p^m ≡ 1 (mod m)
    let pow_mod = |base: u64, e: u64| (0..e).fold(1 % m, |acc, _| acc * (base % m) % m);
    if pow_mod(p, m) != 1 % m {
        return Err(Error::BadParameter(format!(
            "{p}^{m} is not 1 mod {m}; x -> {p}x does not define an action of Z/{m}"
        )));
    }
    let twist: Vec<u64> = (0..m).map(|y| pow_mod(p, y)).collect();
    let idx = |x: u64, y: u64| (x * m + y) as usize;
    let mut mul = vec![0u16; n * n];
    let mut inv = vec![0u16; n];
    for x1 in 0..m {
        for y1 in 0..m {
            for x2 in 0..m {
                for y2 in 0..m {
                    let x = (x1 + twist[y1 as usize] * x2) % m;
                    let y = (y1 + y2) % m;
                    mul[idx(x1, y1) * n + idx(x2, y2)] = idx(x, y) as u16;
                }
            }
        }
    }
    for a in 0..n {
        inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).unwrap() as u16;
    }
    let group = FiniteGroup::from_parts(n, mul, inv, vec![], format!("SD({l},{k},{p})"));
    let gens = group.greedy_generators();
    Ok((
        FiniteGroup {
            generators: gens,
            ..group
        },
        (p - 1).is_multiple_of(l),
    ))
}

/// Materializes the subgroup generated by `gens` inside any [`GroupOps`]
/// structure. Elements are numbered in breadth-first order from the identity.
pub fn closure_group<T: GroupOps>(
    target: &T,
    gens: &[T::Elem],
    label: impl Into<String>,
    limit: usize,
) -> Result<(FiniteGroup, Vec<T::Elem>)> {
    let mut elems = vec![target.identity()];
    let mut index: HashMap<T::Elem, usize> = HashMap::from([(target.identity(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let y = target.op(&elems[i], g);
            if !index.contains_key(&y) {
                if elems.len() >= limit {
                    return Err(Error::size(
                        "generated subgroup",
                        elems.len() as u128 + 1,
                        limit as u128,
                    ));
                }
                index.insert(y.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(y);
            }
        }
    }
    let n = elems.len();
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = index[&target.op(&elems[a], &elems[b])] as u16;
        }
    }
    let inv = (0..n)
        .map(|a| index[&target.inverse(&elems[a])] as u16)
        .collect();
    let mut gen_idx: Vec<usize> = Vec::new();
    for g in gens {
        let i = index[g];
        if i != 0 && !gen_idx.contains(&i) {
            gen_idx.push(i);
        }
    }
    Ok((
        FiniteGroup::from_parts(n, mul, inv, gen_idx, label.into()),
        elems,
    ))
}

/// A quotient `G/N` realized on coset representatives (smallest index in
/// each coset), together with the projection `G → G/N`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
    pub representatives: Vec<usize>,
}

pub fn quotient_group(g: &FiniteGroup, normal: &[usize]) -> Result<QuotientGroup> {
    if !g.is_normal(normal) {
        return Err(Error::BadParameter("subgroup is not normal".into()));
    }
    let n = g.order();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if projection[x] == usize::MAX {
            let c = representatives.len();
            representatives.push(x);
            for &m in normal {
                projection[g.mul(x, m)] = c;
            }
        }
    }
    let q = representatives.len();
    let mut mul = vec![0u16; q * q];
    for a in 0..q {
        for b in 0..q {
            mul[a * q + b] = projection[g.mul(representatives[a], representatives[b])] as u16;
        }
    }
    let inv = (0..q)
        .map(|a| projection[g.inv(representatives[a])] as u16)
        .collect();
    let quotient = FiniteGroup::from_parts(q, mul, inv, vec![], format!("{}/N", g.label()));
    let gens = quotient.greedy_generators();
    Ok(QuotientGroup {
        group: FiniteGroup {
            generators: gens,
            ..quotient
        },
        projection,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup_fixture;

    fn table_of(g: &FiniteGroup) -> Vec<Vec<usize>> {
        g.elements().map(|a| g.table_row(a).collect()).collect()
    }

    #[test]
    fn trivial_and_z2_tables() {
        let t = build_from_table(&[vec![0]], &[]).unwrap();
        assert_eq!(t.order(), 1);
        let z2 = build_from_table(&[vec![0, 1], vec![1, 0]], &[1]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.generators(), &[1]);
    }

    #[test]
    fn identity_is_relocated() {
        // Z/2 with the identity written as element 1
        let g = build_from_table(&[vec![1, 0], vec![0, 1]], &[0]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g.generators(), &[1]);
    }

    #[test]
    fn mutated_s3_table_reports_first_bad_triple() {
        let s3 = lookup_fixture("S3").unwrap();
        let mut t = table_of(&s3);
        // swap two entries of one row so it stays a Latin row but breaks the law
        t[1].swap(2, 3);
        // oracle: first failing triple by plain exhaustive scan
        let n = t.len();
        let mut expected = None;
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        expected = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (a, b, c) = expected.expect("mutation must break associativity");
        let err = build_from_table(&t, s3.generators()).unwrap_err();
        match err {
            Error::NonAssociative { .. } => {}
            Error::NoInverse { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        if let Error::NonAssociative { a: x, b: y, c: z } = err {
            assert_eq!((x, y, z), (a, b, c));
        }
    }

    #[test]
    fn missing_identity_and_bad_generators() {
        assert_eq!(
            build_from_table(&[vec![1, 1], vec![1, 1]], &[0]).unwrap_err(),
            Error::NoIdentity
        );
        let z4 = build_cyclic(4).unwrap();
        let err = build_from_table(&table_of(&z4), &[2]).unwrap_err();
        assert_eq!(
            err,
            Error::GeneratorsDontGenerate {
                generated: 2,
                order: 4
            }
        );
    }

    #[test]
    fn z2_times_z3_is_cyclic() {
        let g = build_direct_product(&build_cyclic(2).unwrap(), &build_cyclic(3).unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.elements().any(|x| g.element_order(x) == 6));
    }

    #[test]
    fn trivial_factor_gives_copy() {
        let s3 = lookup_fixture("S3").unwrap();
        let g = build_direct_product(&build_cyclic(1).unwrap(), &s3).unwrap();
        assert_eq!(g.order_profile(), s3.order_profile());
        assert_eq!(table_of(&g), table_of(&s3));
    }

    #[test]
    fn semidirect_examples() {
        let (g, motivated) = build_semidirect_cyclic(2, 1, 3).unwrap();
        assert!(motivated);
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.involutions().len(), 3);

        // 7 ≡ 1 mod 3: trivial action
        assert_eq!(7 % 3, 1);
        let (g, _) = build_semidirect_cyclic(3, 1, 7).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_abelian());
        assert!(g.elements().all(|x| g.element_order(x) <= 3));

        let (g, _) = build_semidirect_cyclic(2, 2, 3).unwrap();
        assert_eq!(g.order(), 16);
        let witness = g
            .elements()
            .flat_map(|a| g.elements().map(move |b| (a, b)))
            .find(|&(a, b)| g.mul(a, b) != g.mul(b, a));
        assert!(witness.is_some());
    }

    #[test]
    fn semidirect_rejects_non_action() {
        // 2 is not invertible mod 3, so x -> 2x has order 2 and 2^3 = 8 ≠ 1 mod 3
        assert!(matches!(
            build_semidirect_cyclic(3, 1, 2),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn quotient_of_z4_by_z2() {
        let z4 = build_cyclic(4).unwrap();
        let q = quotient_group(&z4, &[0, 2]).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection, vec![0, 1, 0, 1]);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(build_cyclic(65), Err(Error::SizeLimit { .. })));
        let z64 = build_cyclic(64).unwrap();
        assert!(build_direct_product(&z64, &z64.clone()).is_ok());
        let z2 = build_cyclic(2).unwrap();
        let big = build_direct_product(&z64, &z64).unwrap();
        assert!(matches!(
            build_direct_product(&big, &z2),
            Err(Error::SizeLimit { .. })
        ));
    }
}
