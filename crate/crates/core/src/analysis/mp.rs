use crate::aut::automorphism_group;
use crate::error::{Error, Result};
use crate::graph::{cayley_graph, multilayer_generalized_petersen, mp_sigma_beta, Graph, MPParams};
use crate::groups::{check_mp_cayley_params, mp_cayley_group, pow_mod};
use serde::Serialize;

/// `MP_{p^m, p^n, p^{m-1}, λ}` after checking the parameter constraints.
pub fn mp_family_params(p: u64, m: u32, n: u32, lambda: u64) -> Result<MPParams> {
    check_mp_cayley_params(p, m, n, lambda)?;
    MPParams::new(p.pow(m), p.pow(n), p.pow(m - 1), lambda)
}

pub fn mp_family_graph(p: u64, m: u32, n: u32, lambda: u64) -> Result<Graph> {
    multilayer_generalized_petersen(mp_family_params(p, m, n, lambda)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceViolation {
    pub layer: u64,
    pub j: u64,
    pub expected: usize,
    pub observed: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub pairs_checked: usize,
    pub violations: Vec<DistanceViolation>,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    (1..m).find(|&x| a % m * x % m == 1)
}

/// Predicted distance `min{t, p^{m-1} - t}` with `t·λ^i ≡ j (mod p^{m-1})`.
pub fn predicted_layer_distance(p: u64, m: u32, lambda: u64, layer: u64, j: u64) -> usize {
    let q = p.pow(m - 1);
    let li = pow_mod(lambda, layer, q);
    let t = j % q * inverse_mod(li, q).expect("λ is a unit") % q;
    t.min(q - t) as usize
}

/// Compares BFS distances inside each layer `Γ[V_i]` from `(0, i)` with the
/// predicted value for every `j ≢ 0 (mod p^{m-1})`.
pub fn verify_mp_distance_claim(p: u64, m: u32, n: u32, lambda: u64) -> Result<DistanceReport> {
    let params = mp_family_params(p, m, n, lambda)?;
    let g = multilayer_generalized_petersen(params)?;
    let q = p.pow(m - 1);
    let mut report = DistanceReport { pairs_checked: 0, violations: Vec::new() };
    for i in 0..params.n {
        let layer: Vec<usize> = (0..params.m).map(|j| params.vertex(j, i)).collect();
        let sub = g.induced_subgraph(&layer)?;
        let dist = sub.bfs_distances(0)?;
        for j in (0..params.m).filter(|j| j % q != 0) {
            let expected = predicted_layer_distance(p, m, lambda, i, j);
            report.pairs_checked += 1;
            if dist[j as usize] != Some(expected) {
                report.violations.push(DistanceViolation { layer: i, j, expected, observed: dist[j as usize] });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CayleyIsoReport {
    pub vertices: usize,
    pub edges_checked: usize,
    /// `map[g]` is the MP vertex of group element id `g`.
    pub map: Vec<u32>,
    pub bijective: bool,
    /// First Cayley-graph edge whose image is not an MP edge.
    pub mismatch: Option<(u32, u32)>,
}

impl CayleyIsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.mismatch.is_none()
    }
}

/// Checks the explicit map `y^i x^j z^k ↦ (h^{k p^{m-1} + j}, i)` from
/// `Cay(𝒢, S ∪ S⁻¹)`, `S = {x, xz, …, xz^{p-1}, y}`, to the MP graph on
/// every edge.
pub fn verify_mp_cayley_isomorphism(p: u64, m: u32, n: u32, lambda: u64) -> Result<CayleyIsoReport> {
    let params = mp_family_params(p, m, n, lambda)?;
    let mp = multilayer_generalized_petersen(params)?;
    let order = (params.m * params.n) as usize;
    let g = mp_cayley_group(p, m, n, lambda, order)?;
    let (x, y, z) = (g.triple_id(0, 1, 0), g.triple_id(1, 0, 0), g.triple_id(0, 0, 1));
    let mut s = vec![y];
    let mut zl = g.identity();
    for _ in 0..p {
        s.push(g.mul(x, zl));
        zl = g.mul(zl, z);
    }
    let mut conn: Vec<u32> = s.iter().flat_map(|&e| [e, g.inv(e)]).collect();
    conn.sort_unstable();
    conn.dedup();
    let cay = cayley_graph(&g, &conn)?;
    let q = p.pow(m - 1);
    let map: Vec<u32> = (0..order as u32)
        .map(|id| {
            let l = g.label(id).expect("normal-form label");
            let (i, j, k) = (l[0], l[1], l[2]);
            params.vertex((k * q + j) % params.m, i) as u32
        })
        .collect();
    let mut seen = vec![false; order];
    for &v in &map {
        seen[v as usize] = true;
    }
    let bijective = seen.iter().all(|&b| b);
    let mut mismatch = None;
    let edges = cay.edges();
    for &(a, b) in &edges {
        if !mp.has_edge(map[a] as usize, map[b] as usize) {
            mismatch = Some((a as u32, b as u32));
            break;
        }
    }
    if mismatch.is_none() && cay.edge_count() != mp.edge_count() {
        return Err(Error::Precondition(format!(
            "edge counts differ: {} vs {}",
            cay.edge_count(),
            mp.edge_count()
        )));
    }
    Ok(CayleyIsoReport { vertices: order, edges_checked: edges.len(), map, bijective, mismatch })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcOrbitReport {
    pub inner_arcs: usize,
    pub inner_arc_orbits: usize,
    pub all_arc_orbits: usize,
    pub sigma_beta_is_automorphism: bool,
}

impl ArcOrbitReport {
    pub fn inner_arc_transitive(&self) -> bool {
        self.inner_arc_orbits == 1
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Orbits of `Aut(Γ)` on the arcs of Γ, split into arcs inside a layer and
/// all arcs.
pub fn inner_arc_transitivity_check(p: u64, m: u32, n: u32, lambda: u64, bound: usize) -> Result<ArcOrbitReport> {
    let params = mp_family_params(p, m, n, lambda)?;
    let g = multilayer_generalized_petersen(params)?;
    let aut = automorphism_group(&g, bound)?;
    let nv = g.order();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for u in 0..nv {
        for &v in g.neighbors(u) {
            index.insert((u, v as usize), arcs.len());
            arcs.push((u, v as usize));
        }
    }
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    for gen in aut.generators() {
        for (k, &(u, v)) in arcs.iter().enumerate() {
            let img = index[&(gen.apply(u), gen.apply(v))];
            let (a, b) = (find(&mut parent, k), find(&mut parent, img));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let layer = |v: usize| v as u64 / params.m;
    let mut inner_roots = std::collections::BTreeSet::new();
    let mut all_roots = std::collections::BTreeSet::new();
    let mut inner = 0;
    for k in 0..arcs.len() {
        let r = find(&mut parent, k);
        all_roots.insert(r);
        let (u, v) = arcs[k];
        if layer(u) == layer(v) {
            inner += 1;
            inner_roots.insert(r);
        }
    }
    Ok(ArcOrbitReport {
        inner_arcs: inner,
        inner_arc_orbits: inner_roots.len(),
        all_arc_orbits: all_roots.len(),
        sigma_beta_is_automorphism: g.is_automorphism(&mp_sigma_beta(params)),
    })
}
