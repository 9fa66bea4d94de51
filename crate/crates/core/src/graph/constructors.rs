use serde::{Deserialize, Serialize};

use super::graph::{Graph, VertexLabel};
use crate::error::{Error, Result};
use crate::groups::{pow_mod, FiniteGroup, Subgroup};
use crate::perm::{gcd, Permutation};

/// Circulant graph on `Z_n`: `i ~ i + s` for `s ∈ S`.
pub fn circulant(n: usize, connection: &[usize]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let mut set = vec![false; n];
    for &s in connection {
        if s % n == 0 {
            return Err(Error::InvalidConnectionSet("0 is in the connection set".into()));
        }
        set[s % n] = true;
    }
    if (1..n).any(|s| set[s] != set[n - s]) {
        return Err(Error::InvalidConnectionSet("connection set is not closed under negation".into()));
    }
    let edges = (0..n).flat_map(|i| (1..n).filter(|&s| set[s]).map(move |s| (i, (i + s) % n)));
    Graph::from_edges(n, edges)
}

/// `Cay(G, S)` with edges `{g, sg}`; vertex `g` is element id `g`.
pub fn cayley_graph(group: &FiniteGroup, connection: &[u32]) -> Result<Graph> {
    let n = group.order();
    let mut set = vec![false; n];
    for &s in connection {
        if s as usize >= n {
            return Err(Error::InvalidConnectionSet(format!("element {s} out of range")));
        }
        if s == 0 {
            return Err(Error::InvalidConnectionSet("identity is in the connection set".into()));
        }
        set[s as usize] = true;
    }
    if (0..n as u32).any(|s| set[s as usize] && !set[group.inv(s) as usize]) {
        return Err(Error::InvalidConnectionSet("connection set is not inverse-closed".into()));
    }
    let elems: Vec<u32> = (0..n as u32).filter(|&s| set[s as usize]).collect();
    let edges = (0..n as u32).flat_map(|g| elems.iter().map(move |&s| (g as usize, group.mul(s, g) as usize)));
    Graph::from_edges(n, edges)?.with_labels((0..n as u32).map(|id| VertexLabel::Element { id }).collect())
}

/// The right cosets of a subgroup, indexed by their least element.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    /// `coset_of[g]` is the index of `Hg`.
    pub coset_of: Vec<u32>,
    /// Least element of each coset.
    pub reps: Vec<u32>,
}

impl CosetSpace {
    pub fn new(group: &FiniteGroup, h: &Subgroup) -> CosetSpace {
        let mut coset_of = vec![u32::MAX; group.order()];
        let mut reps = Vec::new();
        for g in 0..group.order() as u32 {
            if coset_of[g as usize] != u32::MAX {
                continue;
            }
            for &x in h.elements() {
                coset_of[group.mul(x, g) as usize] = reps.len() as u32;
            }
            reps.push(g);
        }
        CosetSpace { coset_of, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Right multiplication `Hx ↦ Hxg` as a permutation of cosets.
    pub fn action(&self, group: &FiniteGroup, g: u32) -> Permutation {
        Permutation::from_images(self.reps.iter().map(|&r| self.coset_of[group.mul(r, g) as usize]).collect())
            .expect("right multiplication permutes cosets")
    }
}

/// `Cos(G, H, D)`: right cosets of `H`, with `Hg ~ Hdg` for `d ∈ D`.
pub fn coset_graph(group: &FiniteGroup, h: &Subgroup, d: &[u32]) -> Result<Graph> {
    let n = group.order();
    let mut in_d = vec![false; n];
    for &x in d {
        if x as usize >= n {
            return Err(Error::InvalidConnectionSet(format!("element {x} out of range")));
        }
        in_d[x as usize] = true;
    }
    if d.iter().any(|&x| h.contains(x)) {
        return Err(Error::InvalidConnectionSet("D meets H".into()));
    }
    if d.iter().any(|&x| !in_d[group.inv(x) as usize]) {
        return Err(Error::InvalidConnectionSet("D is not inverse-closed".into()));
    }
    for &x in d {
        for &y in h.elements() {
            if !in_d[group.mul(x, y) as usize] || !in_d[group.mul(y, x) as usize] {
                return Err(Error::InvalidConnectionSet("D is not a union of double cosets HgH".into()));
            }
        }
    }
    let space = CosetSpace::new(group, h);
    let mut edges = Vec::new();
    for (c, &r) in space.reps.iter().enumerate() {
        for &x in d {
            edges.push((c, space.coset_of[group.mul(x, r) as usize] as usize));
        }
    }
    Graph::from_edges(space.len(), edges)?.with_labels((0..space.len() as u32).map(|id| VertexLabel::Coset { id }).collect())
}

/// `H{g, g^-1}H` as a sorted element list.
pub fn double_coset_union(group: &FiniteGroup, h: &Subgroup, g: u32) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for x in [g, group.inv(g)] {
        for &a in h.elements() {
            for &b in h.elements() {
                out.push(group.mul(group.mul(a, x), b));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `Cos(G, H, H{g, g^-1}H)`.
pub fn coset_graph_from_arc(group: &FiniteGroup, h: &Subgroup, g: u32) -> Result<Graph> {
    if h.contains(g) {
        return Err(Error::InvalidParameters("g lies in H".into()));
    }
    coset_graph(group, h, &double_coset_union(group, h, g))
}

/// Core of `H` in `G`: the intersection of its conjugates.
pub fn core(group: &FiniteGroup, h: &Subgroup) -> Vec<u32> {
    h.elements()
        .iter()
        .copied()
        .filter(|&x| (0..group.order() as u32).all(|g| h.contains(group.conj(x, g))))
        .collect()
}

/// `Γ1 ∘ Γ2`; vertex `(x1, x2)` is `x1·|V2| + x2`.
pub fn lexicographic_product(g1: &Graph, g2: &Graph) -> Result<Graph> {
    let n2 = g2.order();
    let mut edges = Vec::new();
    for x1 in 0..g1.order() {
        for x2 in 0..n2 {
            let u = x1 * n2 + x2;
            for &y1 in g1.neighbors(x1) {
                for y2 in 0..n2 {
                    edges.push((u, y1 as usize * n2 + y2));
                }
            }
            for &y2 in g2.neighbors(x2) {
                edges.push((u, x1 * n2 + y2 as usize));
            }
        }
    }
    let labels = (0..g1.order() * n2)
        .map(|v| VertexLabel::Product { first: (v / n2) as u32, second: (v % n2) as u32 })
        .collect();
    Graph::from_edges(g1.order() * n2, edges)?.with_labels(labels)
}

/// `P(n, t)`: outer `x_i = i`, inner `y_i = n + i`.
pub fn generalized_petersen(n: usize, t: usize) -> Result<Graph> {
    if n < 3 || t < 1 || 2 * t >= n {
        return Err(Error::InvalidParameters(format!("P(n, t) needs n >= 3 and 1 <= t < n/2, got ({n}, {t})")));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + t) % n));
        edges.push((i, n + i));
    }
    let labels = (0..2 * n)
        .map(|v| VertexLabel::Petersen { outer: v < n, i: (v % n) as u32 })
        .collect();
    Graph::from_edges(2 * n, edges)?.with_labels(labels)
}

/// Parameters of `MP_{m,n,s,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MPParams {
    pub m: u64,
    pub n: u64,
    pub s: u64,
    pub t: u64,
}

impl MPParams {
    pub fn new(m: u64, n: u64, s: u64, t: u64) -> Result<MPParams> {
        let p = MPParams { m, n, s, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let MPParams { m, n, s, t } = *self;
        if m < 3 || n < 2 {
            return Err(Error::InvalidParameters(format!("need m >= 3 and n >= 2, got m = {m}, n = {n}")));
        }
        if s == 0 || m % s != 0 {
            return Err(Error::InvalidParameters(format!("s = {s} does not divide m = {m}")));
        }
        if gcd(t % m, m) != 1 {
            return Err(Error::InvalidParameters(format!("gcd(t, m) = gcd({t}, {m}) != 1")));
        }
        Ok(())
    }

    /// `min(t mod m, m - t mod m)`, which gives the same edge set.
    pub fn canonical_t(&self) -> u64 {
        let t = self.t % self.m;
        t.min(self.m - t)
    }

    /// Whether `1 ≤ t < m/2` as in the original definition.
    pub fn in_definition_range(&self) -> bool {
        self.t >= 1 && 2 * self.t < self.m
    }

    pub fn vertex(&self, j: u64, i: u64) -> usize {
        (i * self.m + j) as usize
    }

    pub fn valency(&self) -> u64 {
        if self.n == 2 {
            2 * self.m / self.s + 1
        } else {
            2 * (self.m / self.s + 1)
        }
    }
}

/// `MP_{m,n,s,t}`; vertex `(j, i)` is `i·m + j`. Layer `i` carries edges
/// `j ~ j ± (ks + t^i)` for `k ∈ Z_{m/s}`, and spokes join `(j, i)` to `(j, i+1)`.
pub fn multilayer_generalized_petersen(params: MPParams) -> Result<Graph> {
    params.validate()?;
    let MPParams { m, n, s, t } = params;
    let mut edges = Vec::new();
    for i in 0..n {
        let ti = pow_mod(t, i, m);
        for j in 0..m {
            for k in 0..m / s {
                let d = (k * s + ti) % m;
                edges.push((params.vertex(j, i), params.vertex((j + d) % m, i)));
            }
            edges.push((params.vertex(j, i), params.vertex(j, (i + 1) % n)));
        }
    }
    let labels = (0..m * n)
        .map(|v| VertexLabel::Layer { j: (v % m) as u32, i: (v / m) as u32 })
        .collect();
    Graph::from_edges((m * n) as usize, edges)?.with_labels(labels)
}

/// Layers `V_i` of an MP graph, as vertex lists.
pub fn mp_layers(params: MPParams) -> Vec<Vec<usize>> {
    (0..params.n).map(|i| (0..params.m).map(|j| params.vertex(j, i)).collect()).collect()
}

/// `R(h): (j, i) ↦ (j + 1, i)`.
pub fn mp_rotation(params: MPParams) -> Permutation {
    let MPParams { m, n, .. } = params;
    Permutation::from_images((0..m * n).map(|v| (v / m * m + (v % m + 1) % m) as u32).collect()).expect("rotation")
}

/// `σ_α: (j, i) ↦ (jλ, i + 1)`.
pub fn mp_sigma_alpha(params: MPParams, lambda: u64) -> Result<Permutation> {
    let MPParams { m, n, .. } = params;
    Permutation::from_images(
        (0..m * n).map(|v| (((v / m + 1) % n) * m + (v % m) * lambda % m) as u32).collect(),
    )
}

/// `σ_β: (j, i) ↦ (-j, i)`.
pub fn mp_sigma_beta(params: MPParams) -> Permutation {
    let MPParams { m, n, .. } = params;
    Permutation::from_images((0..m * n).map(|v| (v / m * m + (m - v % m) % m) as u32).collect()).expect("inversion")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{mp_cayley_group, split_metacyclic_group, DEFAULT_GROUP_CAP};

    #[test]
    fn circulants() {
        assert_eq!(circulant(5, &[1, 4]).unwrap(), Graph::cycle(5));
        let all: Vec<usize> = (1..6).collect();
        assert_eq!(circulant(6, &all).unwrap(), Graph::complete(6));
        let g = circulant(9, &[1, 8, 3, 6]).unwrap();
        assert_eq!(g.valency(), Some(4));
        assert!(circulant(5, &[1]).is_err());
        assert!(circulant(5, &[0, 1, 4]).is_err());
    }

    #[test]
    fn cayley_graphs() {
        let c5 = split_metacyclic_group(5, 1, 1, DEFAULT_GROUP_CAP).unwrap();
        let g = cayley_graph(&c5, &[1, 4]).unwrap();
        assert_eq!(g.valency(), Some(2));
        assert!(g.is_connected());
        let c4 = split_metacyclic_group(4, 1, 1, DEFAULT_GROUP_CAP).unwrap();
        let g = cayley_graph(&c4, &[2]).unwrap();
        assert_eq!(g.components().len(), 2);
        assert!(cayley_graph(&c4, &[0, 2]).is_err());
        assert!(cayley_graph(&c4, &[1]).is_err());
    }

    #[test]
    fn cayley_translations_are_automorphisms() {
        let g = mp_cayley_group(3, 3, 1, 4, DEFAULT_GROUP_CAP).unwrap();
        let (x, y, z) = (g.triple_id(0, 1, 0), g.triple_id(1, 0, 0), g.triple_id(0, 0, 1));
        let mut s = vec![y, g.inv(y)];
        for k in 0..3 {
            let xz = g.mul(x, g.pow(z, k));
            s.push(xz);
            s.push(g.inv(xz));
        }
        let gamma = cayley_graph(&g, &s).unwrap();
        assert_eq!(gamma.order(), 81);
        assert_eq!(gamma.valency(), Some(8));
        for e in 0..81 {
            assert!(gamma.is_automorphism(&g.right_translation(e)));
        }
    }

    #[test]
    fn coset_graph_with_trivial_subgroup_is_cayley() {
        let g = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        let s = vec![g.pair_id(1, 0), g.pair_id(8, 0), g.pair_id(0, 1), g.inv(g.pair_id(0, 1))];
        let cos = coset_graph(&g, &g.trivial_subgroup(), &s).unwrap();
        let cay = cayley_graph(&g, &s).unwrap();
        assert_eq!(cos.edges(), cay.edges());
    }

    #[test]
    fn petersen_family() {
        let p = generalized_petersen(5, 2).unwrap();
        assert_eq!(p.order(), 10);
        assert_eq!(p.valency(), Some(3));
        assert_eq!(p.girth(), Some(5));
        assert_eq!(generalized_petersen(4, 1).unwrap().girth(), Some(4));
        assert!(generalized_petersen(4, 2).is_err());
        for (n, t) in [(5u64, 2u64), (7, 2), (9, 2)] {
            let mp = multilayer_generalized_petersen(MPParams::new(n, 2, n, t).unwrap()).unwrap();
            assert_eq!(mp.valency(), Some(3));
        }
    }

    #[test]
    fn lexicographic_products() {
        let k1 = Graph::empty(1);
        let c5 = Graph::cycle(5);
        assert_eq!(lexicographic_product(&c5, &k1).unwrap().edges(), c5.edges());
        let k2 = Graph::complete(2);
        assert_eq!(lexicographic_product(&k2, &k2).unwrap().edges(), Graph::complete(4).edges());
        let l = lexicographic_product(&Graph::cycle(9), &Graph::empty(3)).unwrap();
        assert_eq!((l.order(), l.valency()), (27, Some(6)));
    }

    #[test]
    fn multilayer_flagship() {
        let params = MPParams::new(27, 3, 9, 4).unwrap();
        let g = multilayer_generalized_petersen(params).unwrap();
        assert_eq!(g.order(), 81);
        assert_eq!(g.valency(), Some(8));
        assert_eq!(g.edge_count(), 324);
        let layers = mp_layers(params);
        assert_eq!(g.quotient_graph(&layers).unwrap(), Graph::complete(3));
        assert!(g.is_automorphism(&mp_rotation(params)));
        assert!(g.is_automorphism(&mp_sigma_alpha(params, 4).unwrap()));
        assert!(g.is_automorphism(&mp_sigma_beta(params)));
        assert!(MPParams::new(27, 3, 9, 3).is_err());
        assert!(MPParams::new(27, 3, 10, 4).is_err());
        // t and m - t give literally the same edges
        let mirrored = multilayer_generalized_petersen(MPParams::new(27, 3, 9, 23).unwrap()).unwrap();
        assert_eq!(mirrored.edges(), g.edges());
        assert_eq!(MPParams::new(27, 3, 9, 23).unwrap().canonical_t(), 4);
    }

    #[test]
    fn coset_graph_validation() {
        let g = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        let h = g.subgroup(&[g.pair_id(0, 1)]);
        assert!(coset_graph(&g, &h, &[g.pair_id(0, 1)]).is_err());
        assert!(coset_graph(&g, &h, &[g.pair_id(1, 0)]).is_err());
        let d = double_coset_union(&g, &h, g.pair_id(1, 0));
        let cos = coset_graph(&g, &h, &d).unwrap();
        assert_eq!(cos.order(), 9);
        assert_eq!(cos.valency(), Some(d.len() / h.order()));
    }
}
