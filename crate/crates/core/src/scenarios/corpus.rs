//! Seeded graph corpora shared by the scenarios and the acceptance suite.

use crate::analysis::{mp_family_graph, p_part};
use crate::aut::{are_isomorphic, automorphism_group};
use crate::error::Result;
use crate::graph::{cayley_graph, coset_graph, double_coset_union, multilayer_generalized_petersen, Graph, MPParams};
use crate::groups::{admissible_lambdas, mp_cayley_group, split_metacyclic_group, FiniteGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

/// An inverse-closed generating set of `size` elements, or `None` after
/// 500 failed draws.
fn random_connection_set(g: &FiniteGroup, size: usize, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    for _ in 0..500 {
        let mut s: Vec<u32> = Vec::new();
        for _ in 0..200 {
            if s.len() == size {
                break;
            }
            let x = rng.gen_range(0..g.order() as u32);
            let xi = g.inv(x);
            let need = if x == xi { 1 } else { 2 };
            if x == g.identity() || s.contains(&x) || s.len() + need > size {
                continue;
            }
            s.push(x);
            if xi != x {
                s.push(xi);
            }
        }
        if s.len() == size && g.subgroup(&s).order() == g.order() {
            s.sort_unstable();
            return Some(s);
        }
    }
    None
}

fn split_name(m: u64, n: u64, e: u64) -> String {
    if n == 1 || e == 1 {
        format!("C{m}xC{n}").replace("xC1", "")
    } else {
        format!("C{m}:C{n}[e={e}]")
    }
}

/// Cayley graphs of one group, one per requested valency, each on a seeded
/// random connection set.
pub fn random_cayley_corpus(m: u64, n: u64, e: u64, valencies: &[usize], seed: u64) -> Result<Vec<CorpusGraph>> {
    let g = split_metacyclic_group(m, n, e, (m * n) as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m * 1000 + n * 10 + e));
    let mut out = Vec::new();
    for &k in valencies {
        if let Some(s) = random_connection_set(&g, k, &mut rng) {
            out.push(CorpusGraph { name: format!("Cay({}, {:?})", split_name(m, n, e), s), graph: cayley_graph(&g, &s)? });
        }
    }
    Ok(out)
}

/// Connected Cayley graphs of the three metacyclic groups of order 27:
/// `C27`, `C9 x C3` and `C9:C3`.
pub fn order27_corpus(seed: u64) -> Result<Vec<CorpusGraph>> {
    let mut out = Vec::new();
    out.extend(random_cayley_corpus(27, 1, 1, &[2, 4, 6, 8], seed)?);
    out.extend(random_cayley_corpus(9, 3, 1, &[4, 6, 8], seed)?);
    out.extend(random_cayley_corpus(9, 3, 4, &[4, 6, 8, 10], seed)?);
    Ok(out)
}

/// `Cay(𝒢, S ∪ S⁻¹)` with `S = {x, xz, …, xz^{p-1}, y}`, on the element ids
/// of `mp_cayley_group`.
pub fn mp_cayley_graph(p: u64, m: u32, n: u32, lambda: u64) -> Result<Graph> {
    let g = mp_cayley_group(p, m, n, lambda, p.pow(m + n) as usize)?;
    let (x, y, z) = (g.triple_id(0, 1, 0), g.triple_id(1, 0, 0), g.triple_id(0, 0, 1));
    let mut s = vec![y, g.inv(y)];
    let mut xz = x;
    for _ in 0..p {
        s.extend([xz, g.inv(xz)]);
        xz = g.mul(xz, z);
    }
    s.sort_unstable();
    s.dedup();
    cayley_graph(&g, &s)
}

/// The Cayley form of `MP_{27,3,9,4}`.
pub fn flagship_cayley() -> Result<Graph> {
    mp_cayley_graph(3, 3, 1, 4)
}

/// The flagship graph and its Cayley form, the order-27 corpus, and five
/// random Cayley graphs of `C27:C3`.
pub fn crossval_corpus(seed: u64) -> Result<Vec<CorpusGraph>> {
    let mut out = vec![
        CorpusGraph { name: "MP(27,3,9,4)".into(), graph: mp_family_graph(3, 3, 1, 4)? },
        CorpusGraph { name: "Cay(G(3,3,1,4), S)".into(), graph: flagship_cayley()? },
    ];
    out.extend(order27_corpus(seed)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let valencies: Vec<usize> = (0..5).map(|_| 2 * rng.gen_range(2..=4)).collect();
    out.extend(random_cayley_corpus(27, 3, 10, &valencies, seed)?);
    Ok(out)
}

/// Order-81 valency-8 graphs for the trichotomy check: every
/// `MP_{27,3,9,λ}` with `λ` of order 9, coset graphs `Cos(G, H, D)` of
/// metacyclic groups of order 243 with a core-free `H` of order 3, and
/// Cayley graphs of metacyclic groups of order 81. Graphs whose Sylow
/// 3-subgroup of `Aut` exceeds `sylow_cap` are left out, as are repeats up
/// to isomorphism within one source.
pub fn spotcheck_instances(seed: u64, sylow_cap: u128, aut_bound: usize) -> Result<Vec<CorpusGraph>> {
    let mut out = Vec::new();
    for lambda in admissible_lambdas(3, 3, 1) {
        let params = MPParams::new(27, 3, 9, lambda)?;
        out.push(CorpusGraph { name: format!("MP(27,3,9,{lambda})"), graph: multilayer_generalized_petersen(params)? });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep = |g: &Graph, found: &[Graph]| -> Result<bool> {
        if p_part(automorphism_group(g, aut_bound)?.order(), 3) > sylow_cap {
            return Ok(false);
        }
        for f in found {
            if are_isomorphic(f, g, aut_bound)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for (m, n, e) in [(27u64, 9u64, 4u64), (27, 9, 7), (81, 3, 28)] {
        let g = split_metacyclic_group(m, n, e, 243)?;
        let tau = g.pair_id(0, 1);
        let h = g.subgroup(&[g.pow(tau, n / 3)]);
        let mut found: Vec<Graph> = Vec::new();
        for _ in 0..60 {
            let mut d: Vec<u32> = Vec::new();
            for _ in 0..50 {
                if d.len() == 24 {
                    break;
                }
                let x = rng.gen_range(0..g.order() as u32);
                if h.contains(x) || d.contains(&x) {
                    continue;
                }
                let dc = double_coset_union(&g, &h, x);
                if d.len() + dc.len() <= 24 {
                    d.extend(dc);
                    d.sort_unstable();
                    d.dedup();
                }
            }
            if d.len() != 24 || g.subgroup(&d).order() != g.order() {
                continue;
            }
            let graph = coset_graph(&g, &h, &d)?;
            if keep(&graph, &found)? {
                found.push(graph.clone());
                out.push(CorpusGraph {
                    name: format!("Cos({}, <t^{}>, D{})", split_name(m, n, e), n / 3, found.len()),
                    graph,
                });
            }
        }
    }
    for (m, n, e) in [(81u64, 1u64, 1u64), (27, 3, 1), (9, 9, 1), (27, 3, 10), (9, 9, 4)] {
        let mut found: Vec<Graph> = Vec::new();
        for c in random_cayley_corpus(m, n, e, &[8, 8, 8], seed)? {
            if keep(&c.graph, &found)? {
                found.push(c.graph.clone());
                out.push(CorpusGraph { name: c.name, graph: c.graph });
            }
        }
    }
    Ok(out)
}
