//! Homomorphism search by backtracking over generator images.
//!
//! A [`Presentation`] records, for each prefix `s_0..s_i` of the generator
//! list, a breadth-first spanning tree of the subgroup they generate plus the
//! remaining Cayley-graph edges. An assignment of images to the prefix extends
//! to a homomorphism on that subgroup iff every remaining edge `y = x·s_j`
//! satisfies `f(y) = f(x)·f(s_j)`, which is what prunes the search.

use std::collections::VecDeque;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{FiniteGroup, GroupOps};
use crate::error::{Error, Result};
use crate::search::Budget;

#[derive(Clone, Debug)]
struct Stage {
    /// `(element, parent, generator slot)` in breadth-first order.
    tree: Vec<(usize, usize, usize)>,
    /// `(x, generator slot, x·s)` for edges not in the tree.
    checks: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    order: usize,
    generators: Vec<usize>,
    stages: Vec<Stage>,
}

impl Presentation {
    pub fn new(g: &FiniteGroup) -> Self {
        let gens = g.generators().to_vec();
        let mut stages = Vec::with_capacity(gens.len());
        for i in 0..gens.len() {
            let mut seen = vec![false; g.order()];
            seen[0] = true;
            let mut tree = Vec::new();
            let mut checks = Vec::new();
            let mut queue = VecDeque::from([0usize]);
            while let Some(x) = queue.pop_front() {
                for (j, &s) in gens[..=i].iter().enumerate() {
                    let y = g.mul(x, s);
                    if seen[y] {
                        checks.push((x, j, y));
                    } else {
                        seen[y] = true;
                        tree.push((y, x, j));
                        queue.push_back(y);
                    }
                }
            }
            stages.push(Stage { tree, checks });
        }
        Presentation {
            order: g.order(),
            generators: gens,
            stages,
        }
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Checks the images of generators `0..=stage` against the relations of
    /// the subgroup they generate, filling `buf` with the induced values.
    fn check_stage<T: GroupOps>(
        &self,
        stage: usize,
        target: &T,
        gen_images: &[T::Elem],
        buf: &mut [Option<T::Elem>],
    ) -> bool {
        let st = &self.stages[stage];
        for slot in buf.iter_mut() {
            *slot = None;
        }
        buf[0] = Some(target.identity());
        for &(y, x, j) in &st.tree {
            let v = target.op(buf[x].as_ref().unwrap(), &gen_images[j]);
            buf[y] = Some(v);
        }
        st.checks.iter().all(|&(x, j, y)| {
            target.op(buf[x].as_ref().unwrap(), &gen_images[j]) == *buf[y].as_ref().unwrap()
        })
    }

    /// Extends generator images to all elements, or `None` if the
    /// assignment does not define a homomorphism.
    pub fn extend<T: GroupOps>(&self, target: &T, gen_images: &[T::Elem]) -> Option<Vec<T::Elem>> {
        assert_eq!(gen_images.len(), self.generators.len());
        if self.generators.is_empty() {
            return Some(vec![target.identity()]);
        }
        let mut buf = vec![None; self.order];
        if self.check_stage(self.generators.len() - 1, target, gen_images, &mut buf) {
            Some(buf.into_iter().map(|v| v.unwrap()).collect())
        } else {
            None
        }
    }
}

/// Depth-first search over generator images drawn from `candidates`
/// (one list per generator, tried in order). `visit` receives the images of
/// all elements for every homomorphism found and may stop the search.
///
/// Returns `Ok(true)` when the space was exhausted, `Ok(false)` when the
/// visitor stopped early.
pub fn search_homs<T: GroupOps>(
    pres: &Presentation,
    target: &T,
    candidates: &[Vec<T::Elem>],
    budget: &mut Budget,
    visit: &mut dyn FnMut(Vec<T::Elem>) -> ControlFlow<()>,
) -> Result<bool> {
    let k = pres.generators.len();
    if candidates.len() != k {
        return Err(Error::InconsistentConstraint(format!(
            "{} candidate lists for {k} generators",
            candidates.len()
        )));
    }
    if k == 0 {
        budget.tick()?;
        return Ok(visit(vec![target.identity()]).is_continue());
    }
    let mut chosen: Vec<T::Elem> = Vec::with_capacity(k);
    let mut buf = vec![None; pres.order];
    let mut cursor = vec![0usize; k];
    let mut depth = 0usize;
    loop {
        if cursor[depth] >= candidates[depth].len() {
            cursor[depth] = 0;
            if depth == 0 {
                return Ok(true);
            }
            depth -= 1;
            chosen.pop();
            cursor[depth] += 1;
            continue;
        }
        budget.tick()?;
        chosen.push(candidates[depth][cursor[depth]].clone());
        if pres.check_stage(depth, target, &chosen, &mut buf) {
            if depth + 1 == k {
                let images: Vec<T::Elem> = buf.iter().map(|v| v.clone().unwrap()).collect();
                if visit(images).is_break() {
                    return Ok(false);
                }
            } else {
                depth += 1;
                continue;
            }
        }
        chosen.pop();
        cursor[depth] += 1;
    }
}

/// A homomorphism between materialized groups, stored as the full image table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
            && (Arc::ptr_eq(&self.codomain, &other.codomain) || self.codomain == other.codomain)
    }
}

impl GroupHom {
    /// Checks the homomorphism law on all pairs.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for a group of order {}",
                images.len(),
                domain.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain.order()) {
            return Err(Error::ShapeMismatch(format!("image {bad} out of range")));
        }
        for x in domain.elements() {
            for y in domain.elements() {
                if images[domain.mul(x, y)] != codomain.mul(images[x], images[y]) {
                    return Err(Error::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            images,
        })
    }

    pub(crate) fn new_unchecked(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Self {
        GroupHom {
            domain,
            codomain,
            images,
        }
    }

    pub fn from_generator_images(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        gen_images: &[usize],
    ) -> Result<Self> {
        if gen_images.len() != domain.generators().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} generator images for {} generators",
                gen_images.len(),
                domain.generators().len()
            )));
        }
        if let Some(&bad) = gen_images.iter().find(|&&y| y >= codomain.order()) {
            return Err(Error::ShapeMismatch(format!("image {bad} out of range")));
        }
        let pres = Presentation::new(&domain);
        let images = pres
            .extend(codomain.as_ref(), gen_images)
            .ok_or(Error::NotAHomomorphism { x: 0, y: 0 })?;
        Ok(GroupHom {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let images = g.elements().collect();
        GroupHom {
            domain: g.clone(),
            codomain: g,
            images,
        }
    }

    pub fn trivial(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>) -> Self {
        let images = vec![0; domain.order()];
        GroupHom {
            domain,
            codomain,
            images,
        }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn generator_images(&self) -> Vec<usize> {
        self.domain
            .generators()
            .iter()
            .map(|&g| self.images[g])
            .collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.codomain.order() != next.domain.order() {
            return Err(Error::TargetMismatch(
                "composition of incompatible maps".into(),
            ));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            images: self.images.iter().map(|&y| next.images[y]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.order()];
        for &y in &self.images {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.domain
            .elements()
            .filter(|&x| self.images[x] == 0)
            .collect()
    }

    /// Elements of the domain over `a`.
    pub fn fiber(&self, a: usize) -> Vec<usize> {
        self.domain
            .elements()
            .filter(|&x| self.images[x] == a)
            .collect()
    }
}

pub enum HomConstraint<'a> {
    Free,
    /// Fixed images for some generators of the domain.
    Generators(&'a [Option<usize>]),
    /// `alpha ∘ f` must send generator `i` to `forced[i]`.
    Fiber {
        alpha: &'a GroupHom,
        forced: &'a [usize],
    },
}

fn candidate_lists(
    g: &FiniteGroup,
    h: &Arc<FiniteGroup>,
    constraint: &HomConstraint,
) -> Result<Vec<Vec<usize>>> {
    let k = g.generators().len();
    match constraint {
        HomConstraint::Free => Ok(vec![h.elements().collect(); k]),
        HomConstraint::Generators(fixed) => {
            if fixed.len() != k {
                return Err(Error::InconsistentConstraint(format!(
                    "{} fixed images for {k} generators",
                    fixed.len()
                )));
            }
            fixed
                .iter()
                .map(|f| match f {
                    Some(y) if *y >= h.order() => Err(Error::InconsistentConstraint(format!(
                        "image {y} out of range"
                    ))),
                    Some(y) => Ok(vec![*y]),
                    None => Ok(h.elements().collect()),
                })
                .collect()
        }
        HomConstraint::Fiber { alpha, forced } => {
            if alpha.domain().order() != h.order() || **alpha.domain() != **h {
                return Err(Error::InconsistentConstraint(
                    "alpha is not defined on the target group".into(),
                ));
            }
            if forced.len() != k {
                return Err(Error::InconsistentConstraint(format!(
                    "{} forced images for {k} generators",
                    forced.len()
                )));
            }
            let a = alpha.codomain();
            if forced.iter().any(|&y| y >= a.order())
                || Presentation::new(g).extend(a.as_ref(), forced).is_none()
            {
                return Err(Error::InconsistentConstraint(
                    "forced images do not define a homomorphism".into(),
                ));
            }
            let mut fibers = vec![Vec::new(); a.order()];
            for b in h.elements() {
                fibers[alpha.apply(b)].push(b);
            }
            Ok(forced.iter().map(|&y| fibers[y].clone()).collect())
        }
    }
}

/// Calls `visit` on every homomorphism `g → h` satisfying `constraint`, in
/// lexicographic order of generator images.
pub fn for_each_hom(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    constraint: &HomConstraint,
    budget: &mut Budget,
    visit: &mut dyn FnMut(GroupHom) -> ControlFlow<()>,
) -> Result<bool> {
    let candidates = candidate_lists(g, h, constraint)?;
    let pres = Presentation::new(g);
    search_homs(&pres, h.as_ref(), &candidates, budget, &mut |images| {
        visit(GroupHom::new_unchecked(g.clone(), h.clone(), images))
    })
}

pub fn enumerate_homs(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    constraint: &HomConstraint,
    budget: &mut Budget,
) -> Result<Vec<GroupHom>> {
    let mut out = Vec::new();
    for_each_hom(g, h, constraint, budget, &mut |f| {
        out.push(f);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
