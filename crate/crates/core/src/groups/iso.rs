use serde::{Deserialize, Serialize};

use super::finite::FiniteGroup;
use crate::error::{Error, Result};

/// Isomorphism invariants `(order, exponent, |G'|, |Z|, |Ω₁|)` plus the
/// multiset of element orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantVector {
    pub order: usize,
    pub exponent: u64,
    pub derived_order: usize,
    pub center_order: usize,
    pub omega1_order: usize,
    pub order_counts: Vec<(u64, usize)>,
}

impl FiniteGroup {
    pub fn invariant_vector(&self) -> InvariantVector {
        let mut counts = std::collections::BTreeMap::new();
        for g in 0..self.order() as u32 {
            *counts.entry(self.element_order(g)).or_insert(0usize) += 1;
        }
        let omega1_order = match self.prime_power() {
            Some((p, _)) => self.omega_s(p, 1).map(|h| h.order()).unwrap_or(1),
            None => 1,
        };
        InvariantVector {
            order: self.order(),
            exponent: self.exponent(),
            derived_order: self.derived_subgroup().order(),
            center_order: self.center().order(),
            omega1_order,
            order_counts: counts.into_iter().collect(),
        }
    }
}

/// Searches for an isomorphism `G → H`, returned as the image array of
/// element ids. Generators of `G` are mapped to elements of equal order,
/// and each partial assignment is extended along the subgroup it
/// generates, so inconsistent prefixes are cut early.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup, max_order: usize) -> Result<Option<Vec<u32>>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if g.order() > max_order {
        return Err(Error::CapExceeded { order: g.order() as u128, cap: max_order as u128 });
    }
    let n = g.order();
    let gens = minimal_generators(g);
    let h_orders: Vec<u64> = (0..n as u32).map(|x| h.element_order(x)).collect();
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&x| {
            let o = g.element_order(x);
            (0..n as u32).filter(|&y| h_orders[y as usize] == o).collect()
        })
        .collect();
    let mut images = vec![0u32; gens.len()];
    Ok(assign(g, h, &gens, &candidates, &mut images, 0))
}

fn assign(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[u32],
    candidates: &[Vec<u32>],
    images: &mut Vec<u32>,
    depth: usize,
) -> Option<Vec<u32>> {
    if depth == gens.len() {
        let map = extend(g, h, gens, images, gens.len())?;
        let mut seen = vec![false; h.order()];
        for &y in &map {
            if std::mem::replace(&mut seen[y as usize], true) {
                return None;
            }
        }
        return Some(map);
    }
    for &c in &candidates[depth] {
        images[depth] = c;
        if extend(g, h, gens, images, depth + 1).is_some() {
            if let Some(m) = assign(g, h, gens, candidates, images, depth + 1) {
                return Some(m);
            }
        }
    }
    None
}

/// Extends `gens[..k] ↦ images[..k]` to a homomorphism on the subgroup they
/// generate; `None` on a conflict. Unreached elements map to `u32::MAX`,
/// and at full depth every element is reached.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[u32], images: &[u32], k: usize) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; g.order()];
    map[0] = 0;
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for j in 0..k {
            let y = g.mul(x, gens[j]);
            let fy = h.mul(map[x as usize], images[j]);
            match map[y as usize] {
                u32::MAX => {
                    map[y as usize] = fy;
                    queue.push(y);
                }
                v if v == fy => {}
                _ => return None,
            }
        }
    }
    // the image of the subgroup must have the same size
    let mut im: Vec<u32> = queue.iter().map(|&x| map[x as usize]).collect();
    im.sort_unstable();
    im.dedup();
    (im.len() == queue.len()).then_some(map)
}

/// The shorter of the stored generators and a greedy list built from the
/// elements of largest order.
fn minimal_generators(g: &FiniteGroup) -> Vec<u32> {
    let all: Vec<u32> = (0..g.order() as u32).collect();
    let greedy = g.subgroup_from_elements(&all).map(|s| s.generators().to_vec()).unwrap_or_default();
    let stored = g.generators();
    if !stored.is_empty() && stored.len() <= greedy.len() {
        stored.to_vec()
    } else {
        greedy
    }
}

pub fn are_isomorphic_groups(g: &FiniteGroup, h: &FiniteGroup, max_order: usize) -> Result<bool> {
    if g.invariant_vector() != h.invariant_vector() {
        return Ok(false);
    }
    Ok(find_isomorphism(g, h, max_order)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{mp_cayley_group, split_metacyclic_group, xu_zhang_group, XuZhangParams, DEFAULT_GROUP_CAP};

    #[test]
    fn isomorphic_presentations() {
        // C9:C3 with e = 4 and e = 7 are isomorphic
        let a = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        let b = split_metacyclic_group(9, 3, 7, DEFAULT_GROUP_CAP).unwrap();
        let map = find_isomorphism(&a, &b, 1000).unwrap().unwrap();
        for x in 0..27u32 {
            for y in 0..27u32 {
                assert_eq!(map[a.mul(x, y) as usize], b.mul(map[x as usize], map[y as usize]));
            }
        }
        let c = split_metacyclic_group(27, 1, 1, DEFAULT_GROUP_CAP).unwrap();
        assert!(!are_isomorphic_groups(&a, &c, 1000).unwrap());
    }

    #[test]
    fn xu_zhang_vs_split_presentation() {
        // r = 1, s = u = 0, t = 1 collapses to C3 x C9
        let g = xu_zhang_group(XuZhangParams::new(3, 1, 0, 1, 0).unwrap(), DEFAULT_GROUP_CAP).unwrap();
        let h = split_metacyclic_group(3, 9, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 27);
        assert!(are_isomorphic_groups(&g, &h, 1000).unwrap());
        let k = mp_cayley_group(3, 3, 1, 4, DEFAULT_GROUP_CAP).unwrap();
        let k2 = mp_cayley_group(3, 3, 1, 7, DEFAULT_GROUP_CAP).unwrap();
        assert!(are_isomorphic_groups(&k, &k2, 1000).unwrap());
    }
}
