use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};
use std::collections::HashMap;

/// Every element of a permutation group, stored as flat `u16` image rows
/// sorted lexicographically.
pub(crate) struct ElementStore {
    pub n: usize,
    data: Vec<u16>,
}

impl ElementStore {
    pub fn new(group: &PermutationGroup, cap: u128) -> Result<ElementStore> {
        let n = group.degree();
        if n > u16::MAX as usize {
            return Err(Error::InvalidParameters(format!("degree {n} too large for element storage")));
        }
        if group.order() > cap {
            return Err(Error::CapExceeded { order: group.order(), cap });
        }
        let mut data: Vec<u16> = (0..n as u16).collect();
        let levels = group.base().len();
        for level in (0..levels).rev() {
            let orbit = group.basic_orbit(level).to_vec();
            let rows = data.len() / n.max(1);
            let mut next = Vec::with_capacity(data.len() * orbit.len());
            for &b in &orbit {
                let u = group.transversal(level, b).expect("orbit point has a transversal");
                for r in 0..rows {
                    let row = &data[r * n..(r + 1) * n];
                    next.extend(row.iter().map(|&x| u.apply(x as usize) as u16));
                }
            }
            data = next;
        }
        let mut store = ElementStore { n, data };
        store.sort();
        Ok(store)
    }

    fn sort(&mut self) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let mut rows: Vec<&[u16]> = self.data.chunks_exact(n).collect();
        rows.sort_unstable();
        self.data = rows.concat();
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.n).unwrap_or(1)
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[u16] {
        &self.data[k * self.n..(k + 1) * self.n]
    }

    pub fn perm(&self, k: usize) -> Permutation {
        Permutation::from_images(self.row(k).iter().map(|&x| x as u32).collect()).expect("stored rows are bijections")
    }
}

/// `a` then `b`.
#[inline]
pub(crate) fn compose(a: &[u16], b: &[u16], out: &mut Vec<u16>) {
    out.clear();
    out.extend(a.iter().map(|&x| b[x as usize]));
}

/// Common cycle length when all cycles of `g` have the same length.
pub(crate) fn uniform_cycle_length(g: &[u16], seen: &mut Vec<bool>) -> Option<usize> {
    seen.clear();
    seen.resize(g.len(), false);
    let mut len = None;
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        let mut l = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = g[x] as usize;
            l += 1;
        }
        match len {
            None => len = Some(l),
            Some(m) if m != l => return None,
            _ => {}
        }
    }
    len.or(Some(1))
}

/// The semiregular elements of a store with a lookup table from image rows
/// to positions.
pub(crate) struct SemiregularIndex<'a> {
    pub store: &'a ElementStore,
    /// Store positions of semiregular elements, ascending.
    pub members: Vec<u32>,
    /// Common cycle length of each member.
    pub order: Vec<u32>,
    lookup: HashMap<&'a [u16], u32>,
}

impl<'a> SemiregularIndex<'a> {
    pub fn new(store: &'a ElementStore) -> SemiregularIndex<'a> {
        let mut seen = Vec::new();
        let mut members = Vec::new();
        let mut order = Vec::new();
        let mut lookup = HashMap::new();
        for k in 0..store.len() {
            if let Some(l) = uniform_cycle_length(store.row(k), &mut seen) {
                lookup.insert(store.row(k), members.len() as u32);
                members.push(k as u32);
                order.push(l as u32);
            }
        }
        SemiregularIndex { store, members, order, lookup }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn row(&self, i: u32) -> &'a [u16] {
        self.store.row(self.members[i as usize] as usize)
    }

    /// Index of a semiregular row, or `None` when the row is not a
    /// semiregular element of the group.
    #[inline]
    pub fn find(&self, row: &[u16]) -> Option<u32> {
        self.lookup.get(row).copied()
    }

    pub fn identity(&self) -> u32 {
        let id: Vec<u16> = (0..self.store.n as u16).collect();
        self.find(&id).expect("identity is stored")
    }
}
