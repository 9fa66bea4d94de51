use crate::error::{Error, Result};
use crate::perm::PermutationGroup;
use serde::Serialize;
use std::collections::HashSet;

/// A system of imprimitivity: cells partition the points, each of size
/// `cell_size`, and are permuted by the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSystem {
    pub cells: Vec<Vec<usize>>,
    pub cell_size: usize,
}

impl BlockSystem {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `cell_of[v]` is the index of the cell containing `v`.
    pub fn cell_index(&self) -> Vec<usize> {
        let n = self.cells.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, c) in self.cells.iter().enumerate() {
            for &v in c {
                out[v] = i;
            }
        }
        out
    }
}

/// Whether `delta` is a nontrivial block: 1 < |Δ| < n and every image Δ^g
/// equals Δ or misses it.
pub fn is_block(group: &PermutationGroup, delta: &[usize]) -> Result<bool> {
    let n = group.degree();
    for &v in delta {
        if v >= n {
            return Err(Error::PointOutOfRange { point: v, degree: n });
        }
    }
    let mut base: Vec<usize> = delta.to_vec();
    base.sort_unstable();
    base.dedup();
    if base.len() != delta.len() {
        return Err(Error::InvalidParameters("block has repeated points".into()));
    }
    if base.len() <= 1 || base.len() >= n {
        return Ok(false);
    }
    let k = base.len();
    let limit = n / k;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut covered = vec![false; n];
    let mut queue = vec![base.clone()];
    seen.insert(base.clone());
    for &v in &base {
        covered[v] = true;
    }
    while let Some(set) = queue.pop() {
        for g in group.generators() {
            let mut img: Vec<usize> = set.iter().map(|&v| g.apply(v)).collect();
            img.sort_unstable();
            if seen.contains(&img) {
                continue;
            }
            // a new image must be disjoint from all earlier ones
            if img.iter().any(|&v| covered[v]) {
                return Ok(false);
            }
            for &v in &img {
                covered[v] = true;
            }
            seen.insert(img.clone());
            if seen.len() > limit {
                return Ok(false);
            }
            queue.push(img);
        }
    }
    Ok(true)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Finest block system of a transitive group in which `a` and `b` share a
/// cell.
pub fn block_system_from_pair(group: &PermutationGroup, a: usize, b: usize) -> Result<BlockSystem> {
    let n = group.degree();
    for v in [a, b] {
        if v >= n {
            return Err(Error::PointOutOfRange { point: v, degree: n });
        }
    }
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut queue = Vec::new();
    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
                queue.push((gx, gy));
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = cells.len();
            cells.push(Vec::new());
        }
        cells[index[r]].push(v);
    }
    let cell_size = cells[0].len();
    debug_assert!(cells.iter().all(|c| c.len() == cell_size));
    Ok(BlockSystem { cells, cell_size })
}

/// The block system formed by the orbits of a normal subgroup of a
/// transitive group.
pub fn block_system_from_normal_subgroup(group: &PermutationGroup, normal: &PermutationGroup) -> Result<BlockSystem> {
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    if !normal.is_normal_in(group) {
        return Err(Error::NotNormal);
    }
    let cells = normal.orbits();
    let cell_size = cells[0].len();
    Ok(BlockSystem { cells, cell_size })
}
