//! Backtracking over a stabilizer chain.
//!
//! Elements of `G` are visited as products `v_{k-1} ⋯ v_1 v_0` of coset
//! representatives, top level first, children in ascending order of the
//! image of the current base point. A pruning callback sees the base
//! images fixed so far, so a branch can be cut before its leaves are
//! built.

use super::{Permutation, PermutationGroup};
use crate::error::{Error, Result};

/// Node limit for one backtrack search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000 }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes }
    }
}

struct Walker<'a, P, Q> {
    group: &'a PermutationGroup,
    base: Vec<usize>,
    property: P,
    prune: Q,
    nodes: u64,
    budget: u64,
}

impl<P, Q> Walker<'_, P, Q>
where
    P: FnMut(&Permutation) -> bool,
    Q: FnMut(&[(usize, usize)]) -> bool,
{
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded {
                budget: self.budget,
                detail: "stabilizer-chain backtrack".into(),
            });
        }
        Ok(())
    }

    /// Depth-first from `level` with `prefix` already fixing the images of
    /// the earlier base points (recorded in `partial`).
    fn dfs(
        &mut self,
        level: usize,
        prefix: &Permutation,
        partial: &mut Vec<(usize, usize)>,
    ) -> Result<Option<Permutation>> {
        self.tick()?;
        if level == self.base.len() {
            return Ok(if (self.property)(prefix) { Some(prefix.clone()) } else { None });
        }
        let mut children: Vec<(usize, usize)> = self
            .group
            .basic_orbit(level)
            .iter()
            .map(|&gamma| (prefix.apply(gamma), gamma))
            .collect();
        children.sort_unstable();
        for (image, gamma) in children {
            partial.push((self.base[level], image));
            let keep = (self.prune)(partial);
            if keep {
                let v = self.group.transversal(level, gamma).expect("orbit point has a transversal");
                let next = v.mul(prefix);
                if let Some(found) = self.dfs(level + 1, &next, partial)? {
                    partial.pop();
                    return Ok(Some(found));
                }
            }
            partial.pop();
        }
        Ok(None)
    }
}

/// The first element of `group` (in base-image order) satisfying `property`.
pub fn find_element<P, Q>(
    group: &PermutationGroup,
    property: P,
    prune: Q,
    budget: SearchBudget,
) -> Result<Option<Permutation>>
where
    P: FnMut(&Permutation) -> bool,
    Q: FnMut(&[(usize, usize)]) -> bool,
{
    let mut w = Walker {
        group,
        base: group.base(),
        property,
        prune,
        nodes: 0,
        budget: budget.max_nodes,
    };
    let id = group.identity();
    w.dfs(0, &id, &mut Vec::new())
}

/// The subgroup `{g ∈ group : property(g)}`, which the caller guarantees is
/// a subgroup containing `initial`.
///
/// Levels are processed deepest first; at level `i` a subtree is searched
/// only for base images outside the orbit of the part of the result found
/// so far, which makes the found generators strong for `group`'s base.
pub fn subgroup_search<P, Q>(
    group: &PermutationGroup,
    initial: &PermutationGroup,
    property: P,
    prune: Q,
    budget: SearchBudget,
) -> Result<PermutationGroup>
where
    P: FnMut(&Permutation) -> bool,
    Q: FnMut(&[(usize, usize)]) -> bool,
{
    let base = group.base();
    let degree = group.degree();
    let mut result = PermutationGroup::with_base_prefix(degree, initial.generators().to_vec(), &base)?;
    let mut w = Walker { group, base: base.clone(), property, prune, nodes: 0, budget: budget.max_nodes };
    for i in (0..base.len()).rev() {
        let mut covered = level_orbit(&result, &base, i);
        let mut candidates: Vec<usize> = group.basic_orbit(i).to_vec();
        candidates.sort_unstable();
        for beta in candidates {
            if covered[beta] {
                continue;
            }
            let u = group.transversal(i, beta).expect("orbit point has a transversal").clone();
            let mut partial: Vec<(usize, usize)> = base[..i].iter().map(|&b| (b, b)).collect();
            partial.push((base[i], beta));
            if !(w.prune)(&partial) {
                continue;
            }
            if let Some(g) = w.dfs(i + 1, &u, &mut partial)? {
                let mut gens = result.generators().to_vec();
                gens.push(g);
                result = PermutationGroup::with_base_prefix(degree, gens, &base)?;
                covered = level_orbit(&result, &base, i);
            }
        }
    }
    PermutationGroup::new(degree, result.generators().to_vec())
}

/// Orbit of `base[i]` under the pointwise stabilizer of `base[..i]` in `group`,
/// as a membership mask.
fn level_orbit(group: &PermutationGroup, base: &[usize], i: usize) -> Vec<bool> {
    let gens: Vec<Permutation> = group
        .strong_generators(0)
        .into_iter()
        .filter(|g| base[..i].iter().all(|&b| g.apply(b) == b))
        .collect();
    let mut mask = vec![false; group.degree()];
    mask[base[i]] = true;
    let mut stack = vec![base[i]];
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = g.apply(x);
            if !mask[y] {
                mask[y] = true;
                stack.push(y);
            }
        }
    }
    mask
}

/// Largest subgroup of `g` normalizing `h`.
pub fn normalizer_in(
    g: &PermutationGroup,
    h: &PermutationGroup,
    budget: SearchBudget,
) -> Result<PermutationGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup("H is not contained in G".into()));
    }
    if h.is_normal_in(g) {
        return Ok(g.clone());
    }
    // a normalizing element permutes the orbitals of H, so the orbital of
    // each pair of fixed base points must map consistently
    let orbitals = Orbitals::new(h);
    let prune = |partial: &[(usize, usize)]| orbitals.consistent(partial);
    subgroup_search(g, h, |k| h.is_normalized_by(k), prune, budget)
}

/// Orbits of a group on ordered pairs of points.
pub(crate) struct Orbitals {
    n: usize,
    id: Vec<u32>,
    size: Vec<u32>,
}

impl Orbitals {
    pub(crate) fn new(h: &PermutationGroup) -> Orbitals {
        let n = h.degree();
        let mut id = vec![u32::MAX; n * n];
        let mut size = Vec::new();
        let gens = h.generators();
        let mut stack = Vec::new();
        for start in 0..n * n {
            if id[start] != u32::MAX {
                continue;
            }
            let k = size.len() as u32;
            id[start] = k;
            let mut count = 1u32;
            stack.push(start);
            while let Some(c) = stack.pop() {
                let (a, b) = (c / n, c % n);
                for g in gens {
                    let d = g.apply(a) * n + g.apply(b);
                    if id[d] == u32::MAX {
                        id[d] = k;
                        count += 1;
                        stack.push(d);
                    }
                }
            }
            size.push(count);
        }
        Orbitals { n, id, size }
    }

    #[inline]
    pub(crate) fn of(&self, a: usize, b: usize) -> u32 {
        self.id[a * self.n + b]
    }

    /// Whether the partial map `x ↦ y` sends orbitals to orbitals by a
    /// well-defined injective map.
    pub(crate) fn consistent(&self, partial: &[(usize, usize)]) -> bool {
        let mut fwd: Vec<(u32, u32)> = Vec::with_capacity(partial.len() * partial.len());
        for &(xa, ya) in partial {
            for &(xb, yb) in partial {
                let (o1, o2) = (self.of(xa, xb), self.of(ya, yb));
                if self.size[o1 as usize] != self.size[o2 as usize] {
                    return false;
                }
                fwd.push((o1, o2));
            }
        }
        fwd.sort_unstable();
        fwd.dedup();
        if fwd.windows(2).any(|w| w[0].0 == w[1].0) {
            return false;
        }
        let mut back: Vec<u32> = fwd.iter().map(|&(_, o)| o).collect();
        back.sort_unstable();
        back.windows(2).all(|w| w[0] != w[1])
    }
}

/// Elements of `g` commuting with every generator of `h`.
pub fn centralizer_in(
    g: &PermutationGroup,
    h: &PermutationGroup,
    budget: SearchBudget,
) -> Result<PermutationGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotASubgroup("H is not contained in G".into()));
    }
    let hgens = h.generators().to_vec();
    let commutes = |k: &Permutation| hgens.iter().all(|x| x.mul(k) == k.mul(x));
    // (a^x)^k = (a^k)^x whenever both a and a^x have known images
    let prune = |partial: &[(usize, usize)]| {
        for &(a, ak) in partial {
            for x in &hgens {
                let ax = x.apply(a);
                if let Some(&(_, axk)) = partial.iter().find(|&&(b, _)| b == ax) {
                    if axk != x.apply(ak) {
                        return false;
                    }
                }
            }
        }
        true
    };
    let trivial = PermutationGroup::trivial(g.degree());
    let c = subgroup_search(g, &trivial, commutes, prune, budget)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, c: &[u32]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    fn s3() -> PermutationGroup {
        PermutationGroup::new(3, vec![cyc(3, &[0, 1]), cyc(3, &[0, 1, 2])]).unwrap()
    }

    fn brute_normalizer(g: &PermutationGroup, h: &PermutationGroup) -> u128 {
        let elems = g.enumerate_elements(1 << 20).unwrap();
        elems.iter().filter(|k| h.is_normalized_by(k)).count() as u128
    }

    fn brute_centralizer(g: &PermutationGroup, h: &PermutationGroup) -> u128 {
        let elems = g.enumerate_elements(1 << 20).unwrap();
        elems
            .iter()
            .filter(|k| h.generators().iter().all(|x| x.mul(k) == k.mul(x)))
            .count() as u128
    }

    #[test]
    fn normalizer_small_cases() {
        let g = s3();
        assert_eq!(normalizer_in(&g, &g, SearchBudget::default()).unwrap().order(), 6);
        let a3 = PermutationGroup::new(3, vec![cyc(3, &[0, 1, 2])]).unwrap();
        assert_eq!(normalizer_in(&g, &a3, SearchBudget::default()).unwrap().order(), 6);
        let t = PermutationGroup::new(3, vec![cyc(3, &[0, 1])]).unwrap();
        let n = normalizer_in(&g, &t, SearchBudget::default()).unwrap();
        assert_eq!(n.order(), 2);
        assert!(n.same_group(&t));
    }

    #[test]
    fn centralizer_small_cases() {
        let g = s3();
        let a3 = PermutationGroup::new(3, vec![cyc(3, &[0, 1, 2])]).unwrap();
        assert_eq!(centralizer_in(&g, &a3, SearchBudget::default()).unwrap().order(), 3);
        let triv = PermutationGroup::trivial(3);
        assert_eq!(centralizer_in(&g, &triv, SearchBudget::default()).unwrap().order(), 6);
        let ab = PermutationGroup::new(6, vec![
            Permutation::from_cycles(6, &[&[0, 1, 2]]).unwrap(),
            Permutation::from_cycles(6, &[&[3, 4, 5]]).unwrap(),
        ])
        .unwrap();
        let sub = PermutationGroup::new(6, vec![Permutation::from_cycles(6, &[&[3, 4, 5]]).unwrap()]).unwrap();
        assert_eq!(centralizer_in(&ab, &sub, SearchBudget::default()).unwrap().order(), 9);
    }

    #[test]
    fn agrees_with_brute_force_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 12 {
            let rand_perm = |rng: &mut ChaCha8Rng| {
                let mut v: Vec<u32> = (0..7).collect();
                v.shuffle(rng);
                Permutation::from_images(v).unwrap()
            };
            let g = PermutationGroup::new(7, vec![rand_perm(&mut rng), rand_perm(&mut rng)]).unwrap();
            if g.order() > 5000 {
                continue;
            }
            let h = PermutationGroup::new(7, vec![g.random_element(&mut rng)]).unwrap();
            let n = normalizer_in(&g, &h, SearchBudget::default()).unwrap();
            let c = centralizer_in(&g, &h, SearchBudget::default()).unwrap();
            assert_eq!(n.order(), brute_normalizer(&g, &h));
            assert_eq!(c.order(), brute_centralizer(&g, &h));
            assert!(h.is_subgroup_of(&n));
            assert!(c.is_normal_in(&n));
            checked += 1;
        }
    }

    #[test]
    fn budget_is_reported() {
        let mut gens = vec![cyc(9, &[0, 1])];
        gens.push(cyc(9, &(0..9).collect::<Vec<u32>>()));
        let g = PermutationGroup::new(9, gens).unwrap();
        let h = PermutationGroup::new(9, vec![cyc(9, &[0, 1, 2])]).unwrap();
        let r = centralizer_in(&g, &h, SearchBudget::nodes(10));
        assert!(matches!(r, Err(Error::SearchBudgetExceeded { .. })));
    }

    #[test]
    fn first_element_is_deterministic() {
        let g = s3();
        let a = find_element(&g, |p| p.order() == 2, |_| true, SearchBudget::default()).unwrap().unwrap();
        let b = find_element(&g, |p| p.order() == 2, |_| true, SearchBudget::default()).unwrap().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.order(), 2);
    }
}
