use super::elements::{compose, ElementStore, SemiregularIndex};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A metacyclic subgroup `⟨x⟩⟨y⟩` with `⟨x⟩` normalized by `y`.
#[derive(Clone, Debug)]
pub struct MetacyclicPair {
    pub x: Permutation,
    pub y: Permutation,
    pub order: u128,
    /// `⟨x⟩ ∩ ⟨y⟩ = 1`, so the pair exhibits a split extension.
    pub split: bool,
}

impl MetacyclicPair {
    pub fn group(&self) -> PermutationGroup {
        PermutationGroup::new(self.x.degree(), vec![self.x.clone(), self.y.clone()]).expect("same degree")
    }
}

/// Outcome of the exhaustive pair scan over a `p`-group.
#[derive(Clone, Debug, Default)]
pub struct MetacyclicScan {
    pub group_order: u128,
    pub semiregular_elements: usize,
    /// Conjugacy classes of nontrivial semiregular cyclic subgroups `⟨x⟩`.
    pub classes: usize,
    pub pairs: u64,
    /// Work charged against the budget: one unit per normalizing pair
    /// plus one per 64 pairs rejected by the cheap image tests.
    pub candidates: u64,
    pub normalizing: u64,
    pub transitive: u64,
    pub minimal: Option<MetacyclicPair>,
    pub minimal_split: Option<MetacyclicPair>,
    pub regular: Option<MetacyclicPair>,
    /// First pair with `y` having a cycle of length equal to the number of
    /// `⟨x⟩`-orbits: a metacirculant pair `(σ, τ) = (x, y)`.
    pub metacirculant: Option<MetacyclicPair>,
    pub cyclic_regular: Option<Permutation>,
}

/// Cycle table of a semiregular element.
struct Cycles {
    len: usize,
    cycles: Vec<Vec<u16>>,
    id: Vec<u32>,
    pos: Vec<u32>,
}

impl Cycles {
    fn new(x: &[u16]) -> Cycles {
        let n = x.len();
        let mut id = vec![u32::MAX; n];
        let mut pos = vec![0; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if id[s] != u32::MAX {
                continue;
            }
            let mut c = Vec::new();
            let mut v = s;
            while id[v] == u32::MAX {
                id[v] = cycles.len() as u32;
                pos[v] = c.len() as u32;
                c.push(v as u16);
                v = x[v] as usize;
            }
            cycles.push(c);
        }
        Cycles { len: cycles[0].len(), cycles, id, pos }
    }

    #[inline]
    fn step(&self, w: usize, k: usize) -> u16 {
        let c = &self.cycles[self.id[w] as usize];
        c[(self.pos[w] as usize + k) % self.len]
    }

    /// `k` with `z = x^k`, if `z ∈ ⟨x⟩`.
    fn exponent_of(&self, z: &[u16]) -> Option<usize> {
        let w = z[0] as usize;
        if self.id[w] != 0 {
            return None;
        }
        let k = self.pos[w] as usize;
        (0..z.len()).all(|v| z[v] == self.step(v, k)).then_some(k)
    }
}

fn pow_row(x: &[u16], e: usize) -> Vec<u16> {
    let mut out: Vec<u16> = (0..x.len() as u16).collect();
    let mut tmp = Vec::new();
    for _ in 0..e {
        compose(&out, x, &mut tmp);
        std::mem::swap(&mut out, &mut tmp);
    }
    out
}

fn inverse_row(x: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; x.len()];
    for (v, &w) in x.iter().enumerate() {
        inv[w as usize] = v as u16;
    }
    inv
}

fn row_perm(r: &[u16]) -> Permutation {
    Permutation::from_images(r.iter().map(|&v| v as u32).collect()).expect("row is a bijection")
}

/// Cycle lengths of a row, one entry per cycle.
fn cycle_lengths(r: &[u16]) -> Vec<usize> {
    let mut seen = vec![false; r.len()];
    let mut out = Vec::new();
    for s in 0..r.len() {
        let mut l = 0;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = r[v] as usize;
            l += 1;
        }
        if l > 0 {
            out.push(l);
        }
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Scans every pair `(x, y)` of `P` with `x` semiregular (up to conjugacy
/// of `⟨x⟩` in `P`) and `y ∈ N_P(⟨x⟩)`, recording the transitive subgroups
/// `⟨x⟩⟨y⟩`. Every transitive metacyclic subgroup of `P` has such a pair,
/// since a normal cyclic subgroup of a transitive group is semiregular.
/// `N_P(⟨x⟩)` is listed from Schreier generators of the conjugation orbit
/// of `⟨x⟩`; its order is known in advance as `|P|` over the orbit length.
/// `max_pairs` bounds the work as counted in [`MetacyclicScan::candidates`].
pub fn scan_metacyclic_pairs(p_group: &PermutationGroup, cap: u128, max_pairs: u64) -> Result<MetacyclicScan> {
    let n = p_group.degree();
    let store = ElementStore::new(p_group, cap)?;
    let index = SemiregularIndex::new(&store);
    let mut scan = MetacyclicScan {
        group_order: p_group.order(),
        semiregular_elements: index.len(),
        ..Default::default()
    };
    let gens: Vec<(Vec<u16>, Vec<u16>)> = p_group
        .generators()
        .iter()
        .map(|g| {
            let r: Vec<u16> = g.images().iter().map(|&v| v as u16).collect();
            (inverse_row(&r), r)
        })
        .collect();
    let mut covered = vec![false; index.len()];
    let mut point_of = vec![u32::MAX; index.len()];
    let mut order_of_reps: Vec<u32> = (0..index.len() as u32).collect();
    // by (element order, images)
    order_of_reps.sort_by_key(|&i| (index.order[i as usize], index.members[i as usize]));
    let mut tmp = Vec::new();
    let mut tmp2 = Vec::new();
    for &rep in &order_of_reps {
        if covered[rep as usize] || index.order[rep as usize] == 1 {
            continue;
        }
        let o = index.order[rep as usize] as usize;
        let x = index.row(rep);
        // orbit of ⟨x⟩ under conjugation, with transversal rows; the
        // non-tree edges give Schreier generators of N_P(⟨x⟩)
        let mut points: Vec<(u32, Vec<u16>)> = vec![(rep, (0..n as u16).collect())];
        let mut touched = Vec::new();
        let mark = |c: u32, id: u32, covered: &mut [bool], point_of: &mut [u32], touched: &mut Vec<u32>| {
            let row = index.row(c);
            for k in 1..o {
                if gcd(k, o) == 1 {
                    let r = index.find(&pow_row(row, k)).expect("powers of semiregular elements are semiregular");
                    covered[r as usize] = true;
                    point_of[r as usize] = id;
                    touched.push(r);
                }
            }
        };
        mark(rep, 0, &mut covered, &mut point_of, &mut touched);
        let mut schreier: Vec<Vec<u16>> = Vec::new();
        let mut i = 0;
        while i < points.len() {
            for (inv, g) in &gens {
                let (c, t) = (&points[i].0, &points[i].1);
                compose(inv, index.row(*c), &mut tmp);
                compose(&tmp, g, &mut tmp2);
                let r = index.find(&tmp2).expect("conjugates stay in the group");
                compose(t, g, &mut tmp);
                let j = point_of[r as usize];
                if j == u32::MAX {
                    let id = points.len() as u32;
                    points.push((r, tmp.clone()));
                    mark(r, id, &mut covered, &mut point_of, &mut touched);
                } else {
                    let tj = inverse_row(&points[j as usize].1);
                    compose(&tmp, &tj, &mut tmp2);
                    if tmp2.iter().enumerate().any(|(v, &w)| v != w as usize) {
                        schreier.push(tmp2.clone());
                    }
                }
            }
            i += 1;
        }
        for &r in &touched {
            point_of[r as usize] = u32::MAX;
        }
        let target = p_group.order() / points.len() as u128;
        let owned;
        let ys: &ElementStore = if points.len() == 1 {
            &store
        } else {
            let mut norm = PermutationGroup::new(n, vec![row_perm(x)])?;
            let mut rng = ChaCha8Rng::seed_from_u64(scan.classes as u64);
            schreier.shuffle(&mut rng);
            for row in &schreier {
                if norm.order() == target {
                    break;
                }
                let g = row_perm(row);
                if !norm.contains(&g) {
                    norm = norm.join(&[g])?;
                }
            }
            if norm.order() != target {
                return Err(Error::Precondition(format!(
                    "normalizer of order {} from Schreier generators, expected {target}",
                    norm.order()
                )));
            }
            owned = ElementStore::new(&norm, cap)?;
            &owned
        };
        scan.classes += 1;
        let cyc = Cycles::new(x);
        let ncyc = n / o;
        let (x0, xx0) = (0usize, x[0] as usize);
        scan.pairs += ys.len() as u64;
        if scan.normalizing + scan.pairs / 64 > max_pairs {
            return Err(Error::SearchBudgetExceeded {
                budget: max_pairs,
                detail: format!("metacyclic pair scan after {} classes", scan.classes),
            });
        }
        for k in 0..ys.len() {
            let y = ys.row(k);
            let (a, b) = (y[x0] as usize, y[xx0] as usize);
            if cyc.id[a] != cyc.id[b] {
                continue;
            }
            let e = (cyc.pos[b] as usize + o - cyc.pos[a] as usize) % o;
            if !(0..n).all(|v| y[x[v] as usize] == cyc.step(y[v] as usize, e)) {
                continue;
            }
            scan.normalizing += 1;
            scan.candidates = scan.normalizing + (scan.pairs - ys.len() as u64 + k as u64) / 64;
            if scan.candidates > max_pairs {
                return Err(Error::SearchBudgetExceeded {
                    budget: max_pairs,
                    detail: format!("metacyclic pair scan after {} classes", scan.classes),
                });
            }
            // y permutes the cycles of x; ⟨x⟩⟨y⟩ is transitive iff that is one cycle
            let mut c = 0usize;
            let mut l = 0;
            loop {
                c = cyc.id[y[cyc.cycles[c][0] as usize] as usize] as usize;
                l += 1;
                if c == 0 {
                    break;
                }
            }
            if l != ncyc {
                continue;
            }
            scan.transitive += 1;
            // order of y modulo ⟨x⟩
            let yl = pow_row(y, l);
            let mut j = l;
            let mut z = yl.clone();
            while cyc.exponent_of(&z).is_none() {
                compose(&z, &yl, &mut tmp);
                std::mem::swap(&mut z, &mut tmp);
                j += l;
            }
            let order = (o * j) as u128;
            let lens = cycle_lengths(y);
            let y_order = lens.iter().fold(1, |a, &b| a / gcd(a, b) * b);
            let split = y_order == j;
            if scan.metacirculant.is_none() && lens.contains(&ncyc) {
                scan.metacirculant = Some(MetacyclicPair { x: row_perm(x), y: row_perm(y), order, split });
            }
            let better = |cur: &Option<MetacyclicPair>| cur.as_ref().is_none_or(|w| order < w.order);
            let want_min = better(&scan.minimal);
            let want_split = split && better(&scan.minimal_split);
            let want_regular = order == n as u128 && scan.regular.is_none();
            if want_min || want_split || want_regular {
                let pair = MetacyclicPair { x: row_perm(x), y: row_perm(y), order, split };
                if want_min {
                    scan.minimal = Some(pair.clone());
                }
                if want_split {
                    scan.minimal_split = Some(pair.clone());
                }
                if want_regular {
                    scan.regular = Some(pair);
                }
            }
        }
        if o == n && scan.cyclic_regular.is_none() {
            scan.cyclic_regular = Some(row_perm(x));
        }
    }
    scan.candidates = scan.normalizing + scan.pairs / 64;
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[u32]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    #[test]
    fn regular_cyclic_group() {
        let c9 = PermutationGroup::new(9, vec![cyc(9, &[0, 1, 2, 3, 4, 5, 6, 7, 8])]).unwrap();
        let s = scan_metacyclic_pairs(&c9, 1000, u64::MAX).unwrap();
        assert!(s.cyclic_regular.is_some());
        let r = s.regular.unwrap();
        assert_eq!(r.order, 9);
        assert!(r.group().is_transitive());
        assert_eq!(s.minimal.unwrap().order, 9);
    }

    #[test]
    fn elementary_abelian_regular() {
        // C3^3 acting regularly on itself has no transitive metacyclic subgroup
        let rows: Vec<Permutation> = (0..3)
            .map(|axis| {
                let step = 3usize.pow(axis);
                Permutation::from_images(
                    (0..27u32).map(|v| {
                        let d = (v as usize / step) % 3;
                        (v as usize - d * step + ((d + 1) % 3) * step) as u32
                    }).collect(),
                )
                .unwrap()
            })
            .collect();
        let g = PermutationGroup::new(27, rows).unwrap();
        assert_eq!(g.order(), 27);
        let s = scan_metacyclic_pairs(&g, 1000, u64::MAX).unwrap();
        assert!(s.minimal.is_none());
        assert!(s.transitive == 0);
        assert!(s.classes > 0);
    }

    #[test]
    fn wreath_product_witness() {
        // C3 wr C3 on 9 points: transitive, metacyclic subgroups of order 9 exist
        let a = cyc(9, &[0, 1, 2]);
        let b = Permutation::from_cycles(9, &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]]).unwrap();
        let w = PermutationGroup::new(9, vec![a, b]).unwrap();
        assert_eq!(w.order(), 81);
        let s = scan_metacyclic_pairs(&w, 1000, u64::MAX).unwrap();
        let m = s.minimal.unwrap();
        assert_eq!(m.order, 9);
        assert!(m.group().is_transitive());
        assert!(s.cyclic_regular.is_some());
    }
}
