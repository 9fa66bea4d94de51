use super::refine::{Partition, Refiner, Trace};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{Permutation, PermutationGroup};

/// Default bound on the vertex count for automorphism searches.
pub const DEFAULT_AUT_BOUND: usize = 512;

/// Search statistics of an automorphism or isomorphism run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub generators: usize,
}

struct Level {
    part: Partition,
    trace: Trace,
    target: Option<usize>,
}

/// Refined partitions along the leftmost path of the search tree.
struct FirstPath {
    levels: Vec<Level>,
    base: Vec<u32>,
    leaf: Vec<u32>,
}

fn first_path(g: &Graph, colors: Option<&[u32]>, refiner: &mut Refiner, stats: &mut SearchStats) -> FirstPath {
    let n = g.order();
    let mut part = match colors {
        Some(c) => Partition::from_colors(c),
        None => Partition::unit(n),
    };
    let mut trace = Trace::new();
    let starts = part.starts();
    refiner.refine(g, &mut part, &starts, &mut trace);
    stats.nodes += 1;
    let mut levels = Vec::new();
    let mut base = Vec::new();
    loop {
        let target = part.target_cell();
        levels.push(Level { part: part.clone(), trace, target });
        let Some(t) = target else { break };
        let v = part.cell_vertices(t)[0];
        base.push(v);
        let s = part.individualize(v);
        refiner.refine(g, &mut part, &[s], &mut trace);
        stats.nodes += 1;
    }
    FirstPath { levels, base, leaf: part.lab.clone() }
}

/// Orbit partition of the points under a generator list, as a union-find
/// root array that is rebuilt whenever generators are added.
fn orbit_roots(n: usize, gens: &[&Permutation]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for g in gens {
        for v in 0..n as u32 {
            let (a, b) = (find(&mut parent, v), find(&mut parent, g.apply(v as usize) as u32));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..n as u32).map(|v| find(&mut parent, v)).collect()
}

/// Searches the subtree below `part` for a leaf matching `target_leaf`
/// through `accept`. Nodes whose trace differs from `path` at the same
/// depth are cut; children are pruned by the orbits of the generators in
/// `gens` that fix the individualized vertices.
struct Subtree<'a> {
    g: &'a Graph,
    path: &'a FirstPath,
    refiner: Refiner,
    stats: SearchStats,
}

impl Subtree<'_> {
    fn search(
        &mut self,
        part: &Partition,
        depth: usize,
        fixed: &mut Vec<u32>,
        gens: &[Permutation],
        accept: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        let level = &self.path.levels[depth];
        let Some(t) = level.target else {
            self.stats.leaves += 1;
            return accept(&part.lab);
        };
        let stab: Vec<&Permutation> =
            gens.iter().filter(|p| fixed.iter().all(|&x| p.apply(x as usize) == x as usize)).collect();
        let roots = orbit_roots(part.n(), &stab);
        let mut seen_roots: Vec<u32> = Vec::new();
        for v in part.cell_vertices(t) {
            let r = roots[v as usize];
            if seen_roots.contains(&r) {
                continue;
            }
            seen_roots.push(r);
            let mut child = part.clone();
            let mut trace = self.path.levels[depth].trace;
            let s = child.individualize(v);
            self.refiner.refine(self.g, &mut child, &[s], &mut trace);
            self.stats.nodes += 1;
            let next = &self.path.levels[depth + 1];
            if trace != next.trace || child.cells != next.part.cells || child.target_cell() != next.target {
                continue;
            }
            fixed.push(v);
            let found = self.search(&child, depth + 1, fixed, gens, accept);
            fixed.pop();
            if found {
                return true;
            }
        }
        false
    }
}

/// Result of [`automorphism_group`].
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub group: PermutationGroup,
    /// The base chosen along the first path of the search tree.
    pub base: Vec<u32>,
    pub stats: SearchStats,
}

/// Full automorphism group of `g` (of `g` with vertex colors preserved,
/// when `colors` is given).
pub fn automorphism_group_colored(g: &Graph, colors: Option<&[u32]>, bound: usize) -> Result<AutomorphismGroup> {
    let n = g.order();
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    if n <= 1 {
        return Ok(AutomorphismGroup { group: PermutationGroup::trivial(n), base: Vec::new(), stats: SearchStats::default() });
    }
    let mut stats = SearchStats::default();
    let mut refiner = Refiner::new(n);
    let path = first_path(g, colors, &mut refiner, &mut stats);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut sub = Subtree { g, path: &path, refiner, stats };
    let leaf = path.leaf.clone();
    for d in (0..path.base.len()).rev() {
        let level = &path.levels[d];
        let t = level.target.expect("non-leaf level has a target cell");
        let b = path.base[d];
        let mut failed: Vec<u32> = Vec::new();
        for w in level.part.cell_vertices(t) {
            if w == b {
                continue;
            }
            let refs: Vec<&Permutation> = gens.iter().collect();
            let roots = orbit_roots(n, &refs);
            if roots[w as usize] == roots[b as usize] || failed.iter().any(|&f| roots[f as usize] == roots[w as usize]) {
                continue;
            }
            let mut part = level.part.clone();
            let mut trace = level.trace;
            let s = part.individualize(w);
            sub.refiner.refine(g, &mut part, &[s], &mut trace);
            sub.stats.nodes += 1;
            let next = &path.levels[d + 1];
            let mut found: Option<Permutation> = None;
            if trace == next.trace && part.cells == next.part.cells && part.target_cell() == next.target {
                let mut fixed: Vec<u32> = path.base[..d].to_vec();
                fixed.push(w);
                let snapshot = gens.clone();
                let mut accept = |lab: &[u32]| {
                    let mut images = vec![0u32; n];
                    for (k, &v) in leaf.iter().enumerate() {
                        images[v as usize] = lab[k];
                    }
                    let p = Permutation::from_images(images).expect("leaf labels are bijective");
                    if g.is_automorphism(&p) && colors.is_none_or(|c| (0..n).all(|v| c[v] == c[p.apply(v)])) {
                        found = Some(p);
                        true
                    } else {
                        false
                    }
                };
                sub.search(&part, d + 1, &mut fixed, &snapshot, &mut accept);
            }
            match found {
                Some(p) => gens.push(p),
                None => failed.push(w),
            }
        }
    }
    let mut stats = sub.stats;
    stats.generators = gens.len();
    for p in &gens {
        debug_assert!(g.is_automorphism(p));
    }
    let group = PermutationGroup::new(n, gens)?;
    Ok(AutomorphismGroup { group, base: path.base.clone(), stats })
}

/// `Aut(Γ)` by refinement and individualization; every generator is
/// verified to preserve adjacency.
pub fn automorphism_group(g: &Graph, bound: usize) -> Result<PermutationGroup> {
    Ok(automorphism_group_colored(g, None, bound)?.group)
}

/// An isomorphism `Γ1 → Γ2` as an image array, or `None` after the whole
/// refined search tree of `Γ2` has been exhausted.
pub fn are_isomorphic(g1: &Graph, g2: &Graph, bound: usize) -> Result<Option<Vec<u32>>> {
    let n = g1.order();
    for g in [g1, g2] {
        if g.order() > bound {
            return Err(Error::BoundExceeded { n: g.order(), bound });
        }
    }
    if n != g2.order() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let mut d1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let aut2 = automorphism_group_colored(g2, None, bound)?;
    let mut stats = SearchStats::default();
    let mut refiner = Refiner::new(n);
    let path = first_path(g1, None, &mut refiner, &mut stats);
    // root of Γ2 must refine identically
    let mut part = Partition::unit(n);
    let mut trace = Trace::new();
    refiner.refine(g2, &mut part, &[0], &mut trace);
    let root = &path.levels[0];
    if trace != root.trace || part.cells != root.part.cells || part.target_cell() != root.target {
        return Ok(None);
    }
    let leaf = path.leaf.clone();
    let mut found = None;
    let mut accept = |lab: &[u32]| {
        let mut map = vec![0u32; n];
        for (k, &v) in leaf.iter().enumerate() {
            map[v as usize] = lab[k];
        }
        if g1.is_isomorphism(g2, &map) {
            found = Some(map);
            true
        } else {
            false
        }
    };
    let gens = aut2.group.generators().to_vec();
    let mut sub = Subtree { g: g2, path: &path, refiner, stats };
    sub.search(&part, 0, &mut Vec::new(), &gens, &mut accept);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant, generalized_petersen, lexicographic_product, multilayer_generalized_petersen, MPParams};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Counts automorphisms by checking every permutation (n ≤ 8).
    fn brute_force_count(g: &Graph) -> u128 {
        fn rec(g: &Graph, images: &mut Vec<u32>, used: &mut Vec<bool>, count: &mut u128) {
            let k = images.len();
            if k == g.order() {
                *count += 1;
                return;
            }
            for v in 0..g.order() {
                if used[v] {
                    continue;
                }
                // adjacency with already placed vertices must match
                if (0..k).all(|u| g.has_edge(u, k) == g.has_edge(images[u] as usize, v)) {
                    used[v] = true;
                    images.push(v as u32);
                    rec(g, images, used, count);
                    images.pop();
                    used[v] = false;
                }
            }
        }
        let mut count = 0;
        rec(g, &mut Vec::new(), &mut vec![false; g.order()], &mut count);
        count
    }

    #[test]
    fn small_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut graphs = vec![Graph::complete(4), Graph::cycle(6), Graph::empty(5), circulant(8, &[1, 7, 4]).unwrap()];
        for _ in 0..30 {
            let n = 6 + (rand::Rng::gen_range(&mut rng, 0..3));
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rand::Rng::gen_bool(&mut rng, 0.4) {
                        edges.push((u, v));
                    }
                }
            }
            graphs.push(Graph::from_edges(n, edges).unwrap());
        }
        for g in &graphs {
            let a = automorphism_group(g, DEFAULT_AUT_BOUND).unwrap();
            assert_eq!(a.order(), brute_force_count(g), "{:?}", g.edges());
            assert!(a.generators().iter().all(|p| g.is_automorphism(p)));
        }
    }

    #[test]
    fn known_orders() {
        assert_eq!(automorphism_group(&Graph::complete(4), 512).unwrap().order(), 24);
        assert_eq!(automorphism_group(&generalized_petersen(5, 2).unwrap(), 512).unwrap().order(), 120);
        assert_eq!(automorphism_group(&generalized_petersen(4, 1).unwrap(), 512).unwrap().order(), 48);
        let lex = lexicographic_product(&Graph::cycle(9), &Graph::empty(3)).unwrap();
        assert_eq!(automorphism_group(&lex, 512).unwrap().order(), 2 * 9 * 6u128.pow(9));
        let c9 = circulant(9, &[1, 8, 3, 6]).unwrap();
        assert_eq!(automorphism_group(&c9, 512).unwrap().order(), 18);
        assert!(matches!(automorphism_group(&Graph::empty(600), 512), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn mp_9_3_3_2_order() {
        // 7776 = 2^5 3^5, cross-checked with an independent VF2 count
        let g = multilayer_generalized_petersen(MPParams::new(9, 3, 3, 2).unwrap()).unwrap();
        assert_eq!(automorphism_group(&g, 512).unwrap().order(), 7776);
    }

    #[test]
    fn order_is_relabeling_invariant() {
        let g = multilayer_generalized_petersen(MPParams::new(9, 3, 3, 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut images: Vec<u32> = (0..27).collect();
        images.shuffle(&mut rng);
        let h = g.relabel(&Permutation::from_images(images).unwrap()).unwrap();
        let a = automorphism_group(&g, 512).unwrap().order();
        assert_eq!(a, automorphism_group(&h, 512).unwrap().order());
    }

    #[test]
    fn isomorphism_tests() {
        let p = generalized_petersen(5, 2).unwrap();
        let id = are_isomorphic(&p, &p, 512).unwrap().unwrap();
        assert!(p.is_isomorphism(&p, &id));
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(are_isomorphic(&Graph::cycle(6), &two_triangles, 512).unwrap().is_none());
        let mp = multilayer_generalized_petersen(MPParams::new(5, 2, 5, 2).unwrap()).unwrap();
        let map = are_isomorphic(&mp, &p, 512).unwrap().unwrap();
        assert!(mp.is_isomorphism(&p, &map));
        // P(4,1) is the 3-cube
        let cube = Graph::from_edges(8, (0..8usize).flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v))
            .unwrap();
        assert!(are_isomorphic(&generalized_petersen(4, 1).unwrap(), &cube, 512).unwrap().is_some());
        // Petersen is not isomorphic to the prism P(5,1)
        assert!(are_isomorphic(&p, &generalized_petersen(5, 1).unwrap(), 512).unwrap().is_none());
    }
}
