use super::corpus::mp_cayley_graph;
use super::{Recorder, Source, VerifyOptions};
use crate::analysis::{mp_family_graph, verify_mp_cayley_isomorphism, verify_mp_distance_claim};
use crate::aut::{are_isomorphic, automorphism_group, is_block};
use crate::error::Result;
use crate::graph::{
    core, coset_graph_from_arc, generalized_petersen, mp_layers, multilayer_generalized_petersen,
    CosetSpace, Graph, MPParams,
};
use crate::groups::{admissible_lambdas, mp_cayley_group, split_metacyclic_group, FiniteGroup, Subgroup};
use crate::perm::{Permutation, PermutationGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

const COSET_INSTANCES_PER_GROUP: usize = 4;

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

fn symmetric_group(n: usize, cap: usize) -> Result<FiniteGroup> {
    let swap = Permutation::from_cycles(n, &[&[0, 1]])?;
    let cycle: Vec<u32> = (0..n as u32).collect();
    let rot = Permutation::from_cycles(n, &[&cycle])?;
    Ok(FiniteGroup::from_permutation_group(&PermutationGroup::new(n, vec![swap, rot])?, cap)?.0)
}

fn coset_groups(cap: usize) -> Result<Vec<(String, FiniteGroup)>> {
    Ok(vec![
        ("S4".into(), symmetric_group(4, cap)?),
        ("S5".into(), symmetric_group(5, cap)?),
        ("D12".into(), split_metacyclic_group(12, 2, 11, cap)?),
        ("C7:C3".into(), split_metacyclic_group(7, 3, 2, cap)?),
        ("C9:C3".into(), split_metacyclic_group(9, 3, 4, cap)?),
        ("C25:C5".into(), split_metacyclic_group(25, 5, 6, cap)?),
        ("G(3,3,1,4)".into(), mp_cayley_group(3, 3, 1, 4, cap)?),
    ])
}

/// A proper core-free subgroup generated by one or two random elements.
fn random_core_free(g: &FiniteGroup, rng: &mut ChaCha8Rng) -> Option<Subgroup> {
    let n = g.order() as u32;
    for _ in 0..200 {
        let k = rng.gen_range(1..=2);
        let gens: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let h = g.subgroup(&gens);
        if h.order() < g.order() && core(g, &h).len() == 1 {
            return Some(h);
        }
    }
    None
}

/// Orbit counts of the coset action of `G` on the arcs and on the edges of `graph`.
fn arc_and_edge_orbits(g: &FiniteGroup, space: &CosetSpace, graph: &Graph) -> (usize, usize) {
    let mut arcs = Vec::new();
    let mut index = HashMap::new();
    for u in 0..graph.order() {
        for &v in graph.neighbors(u) {
            index.insert((u, v as usize), arcs.len());
            arcs.push((u, v as usize));
        }
    }
    let mut dsu = Dsu::new(arcs.len());
    for &x in g.generators() {
        let act = space.action(g, x);
        for (k, &(u, v)) in arcs.iter().enumerate() {
            dsu.union(k, index[&(act.apply(u), act.apply(v))]);
        }
    }
    let arc_orbits = dsu.classes();
    for (k, &(u, v)) in arcs.iter().enumerate() {
        dsu.union(k, index[&(v, u)]);
    }
    (arc_orbits, dsu.classes())
}

pub(super) fn coset_clauses(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut instances = 0usize;
    for (gname, g) in coset_groups(opts.group_cap())? {
        for _ in 0..COSET_INSTANCES_PER_GROUP {
            let Some(h) = random_core_free(&g, &mut rng) else { continue };
            let x = loop {
                let x = rng.gen_range(0..g.order() as u32);
                if !h.contains(x) {
                    break x;
                }
            };
            instances += 1;
            let name = format!("{gname} |H|={} g={x}", h.order());
            let graph = coset_graph_from_arc(&g, &h, x)?;
            let space = CosetSpace::new(&g, &h);
            let (arc_orbits, edge_orbits) = arc_and_edge_orbits(&g, &space, &graph);
            rec.eq(format!("{name} edge orbits"), Source::Claim, 1, edge_orbits);

            let hxh: Vec<u32> =
                h.elements().iter().flat_map(|&a| h.elements().iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(g.mul(a, x), b)).collect();
            let self_paired = hxh.contains(&g.inv(x));
            rec.eq(format!("{name} arc-transitive iff HgH = Hg^-1H"), Source::Claim, self_paired, arc_orbits == 1);

            let mut gens = h.generators().to_vec();
            gens.push(x);
            let generates = g.subgroup(&gens).order() == g.order();
            rec.eq(format!("{name} connected iff <H,g> = G"), Source::Claim, generates, graph.is_connected());

            let hx: Vec<u32> = h.elements().iter().map(|&a| g.conj(a, x)).collect();
            let meet = h.elements().iter().filter(|a| hx.contains(a)).count();
            let index = h.order() / meet;
            let expected = if self_paired { index } else { 2 * index };
            rec.eq(format!("{name} valency"), Source::Claim, expected, graph.valency().unwrap_or(0));
        }
    }
    rec.holds(format!("{instances} instances (at least 20)"), Source::Definition, instances >= 20);
    Ok(())
}

pub(super) fn mp_petersen_equivalence(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    for n in [5u64, 7, 9] {
        let mp = multilayer_generalized_petersen(MPParams::new(n, 2, n, 2)?)?;
        let gp = generalized_petersen(n as usize, 2)?;
        match are_isomorphic(&mp, &gp, opts.max_aut_degree)? {
            Some(map) => {
                rec.holds(format!("MP({n},2,{n},2) ~ P({n},2)"), Source::Claim, true);
                rec.holds(format!("n={n} map preserves edges"), Source::Oracle, mp.is_isomorphism(&gp, &map));
            }
            None => {
                rec.holds(format!("MP({n},2,{n},2) ~ P({n},2)"), Source::Claim, false);
            }
        }
    }
    Ok(())
}

/// Whether every generator maps each cell of `cells` onto a cell.
fn permutes_cells(gens: &[Permutation], cells: &[Vec<usize>], order: usize) -> bool {
    let mut cell_of = vec![0usize; order];
    for (c, cell) in cells.iter().enumerate() {
        for &v in cell {
            cell_of[v] = c;
        }
    }
    gens.iter().all(|g| cells.iter().all(|cell| cell.iter().all(|&v| cell_of[g.apply(v)] == cell_of[g.apply(cell[0])])))
}

pub(super) fn mp_blocks(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    for (m, n, s, t) in [(27u64, 3u64, 9u64, 4u64), (9, 3, 3, 2)] {
        let name = format!("MP({m},{n},{s},{t})");
        let params = MPParams::new(m, n, s, t)?;
        let graph = multilayer_generalized_petersen(params)?;
        let aut = automorphism_group(&graph, opts.max_aut_degree)?;
        let layers = mp_layers(params);
        let mut all = true;
        for layer in &layers {
            all &= is_block(&aut, layer)?;
        }
        rec.holds(format!("{name} layers are blocks"), Source::Claim, all);
        rec.holds(
            format!("{name} generators permute layers"),
            Source::Oracle,
            permutes_cells(aut.generators(), &layers, graph.order()),
        );
        let quotient = graph.quotient_graph(&layers)?;
        let cycle = Graph::cycle(n as usize);
        rec.holds(
            format!("{name} layer quotient is C{n}"),
            Source::Claim,
            are_isomorphic(&quotient, &cycle, opts.max_aut_degree)?.is_some(),
        );
    }
    Ok(())
}

pub(super) fn mp_distance_claim(_: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let larger = admissible_lambdas(3, 4, 2)[0];
    for (p, m, n, lambda) in [(3u64, 3u32, 1u32, 4u64), (3, 4, 2, larger)] {
        let r = verify_mp_distance_claim(p, m, n, lambda)?;
        let q = p.pow(m - 1);
        let eligible = (p.pow(n) * (p.pow(m) - p)) as usize;
        let name = format!("MP({},{},{},{lambda})", p.pow(m), p.pow(n), q);
        rec.eq(format!("{name} pairs checked"), Source::Definition, eligible, r.pairs_checked);
        rec.eq(format!("{name} distance violations"), Source::Claim, 0, r.violations.len());
    }
    Ok(())
}

pub(super) fn mp_cayley_iso(_: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let larger = admissible_lambdas(3, 4, 2)[0];
    for (p, m, n, lambda) in [(3u64, 3u32, 1u32, 4u64), (3, 4, 2, larger)] {
        let r = verify_mp_cayley_isomorphism(p, m, n, lambda)?;
        let name = format!("G({p},{m},{n},{lambda})");
        let order = p.pow(m + n) as usize;
        rec.eq(format!("{name} vertices"), Source::Definition, order, r.vertices);
        let valency = 2 * (p as usize + 1);
        rec.eq(format!("{name} edges checked"), Source::Definition, order * valency / 2, r.edges_checked);
        rec.holds(format!("{name} map is bijective"), Source::Claim, r.bijective);
        rec.holds(format!("{name} map preserves edges"), Source::Claim, r.mismatch.is_none());
        let cay = mp_cayley_graph(p, m, n, lambda)?;
        let mp = mp_family_graph(p, m, n, lambda)?;
        rec.holds(format!("{name} map is a graph isomorphism"), Source::Oracle, cay.is_isomorphism(&mp, &r.map));
    }
    Ok(())
}
