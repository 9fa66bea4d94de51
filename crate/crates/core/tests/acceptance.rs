//! The twelve acceptance criteria, run in order. Each prints one line with
//! its verdict, wall time against its budget, and a short evidence summary.
//! The process exits nonzero if any criterion fails.

use metacirc::analysis::{
    classify, inner_arc_transitivity_check, mp_family_graph, regular_subgroup_search, verify_mp_cayley_isomorphism,
    verify_mp_distance_claim, ClassificationReport, ClassifyOptions, RegularPredicate, SearchStatus,
};
use metacirc::aut::{are_isomorphic, automorphism_group, is_block};
use metacirc::graph::{
    coset_graph_from_arc, generalized_petersen, mp_layers, multilayer_generalized_petersen, CosetSpace, Graph, MPParams,
};
use metacirc::groups::{
    admissible_lambdas, are_isomorphic_groups, mp_cayley_group, split_metacyclic_group, xu_zhang_group, FiniteGroup,
    Subgroup, XuZhangParams,
};
use metacirc::perm::{Permutation, PermutationGroup};
use metacirc::scenarios::{crossval_corpus, order27_corpus, spotcheck_instances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

const AUT_BOUND: usize = 512;
const CAP: usize = 2_000_000;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: metacirc::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn report(g: &Graph) -> Result<ClassificationReport, String> {
    lib(classify(g, Some(3), &ClassifyOptions::default()))
}

fn witness(r: &ClassificationReport, key: &str) -> Result<PermutationGroup, String> {
    let lines = r.witnesses.get(key).ok_or_else(|| format!("no `{key}` witness"))?;
    let gens = lines.iter().map(|l| lib(Permutation::parse_line(l))).collect::<Result<Vec<_>, _>>()?;
    lib(PermutationGroup::new(r.order, gens))
}

fn flagship() -> Outcome {
    let g = lib(mp_family_graph(3, 3, 1, 4))?;
    ensure!(g.order() == 81 && g.valency() == Some(8), "MP(27,3,9,4) has order {} valency {:?}", g.order(), g.valency());
    let r = report(&g)?;
    ensure!(r.flags.cayley == Some(true), "cayley flag {:?}", r.flags.cayley);
    let reg = witness(&r, "cayley")?;
    let (h, _) = lib(FiniteGroup::from_regular_permutation_group(&reg))?;
    let target = lib(mp_cayley_group(3, 3, 1, 4, 81))?;
    ensure!(lib(are_isomorphic_groups(&h, &target, 81))?, "regular witness is not isomorphic to G(3,3,1,4)");

    let iso = lib(verify_mp_cayley_isomorphism(3, 3, 1, 4))?;
    ensure!(iso.passed() && iso.edges_checked == 324, "Cayley map: passed {} on {} edges", iso.passed(), iso.edges_checked);

    ensure!(r.flags.weak_metacirculant == Some(true), "weak metacirculant flag {:?}", r.flags.weak_metacirculant);
    let wm = witness(&r, "weak_metacirculant")?;
    ensure!(wm.order() == 243 && wm.is_transitive(), "metacyclic witness order {}", wm.order());

    let aut = lib(automorphism_group(&g, AUT_BOUND))?;
    let search = lib(regular_subgroup_search(&aut, RegularPredicate::Metacyclic, None, &Default::default()))?;
    ensure!(
        search.certificate.status == SearchStatus::Exhausted && search.witnesses.is_empty(),
        "metacyclic regular search ended {:?} with {} witnesses",
        search.certificate.status,
        search.witnesses.len()
    );
    Ok(format!(
        "|Aut| = {}, |P| = {}, witness order {}, metacyclic search exhausted after {} candidates",
        r.aut_order, r.searched_order, wm.order(), search.certificate.nodes
    ))
}

fn order27_floor() -> Outcome {
    let corpus = lib(order27_corpus(0))?;
    let mut n = 0;
    for c in &corpus {
        ensure!(c.graph.is_connected(), "{} is disconnected", c.name);
        let r = report(&c.graph)?;
        ensure!(r.flags.weak_metacirculant == Some(true), "{}: weak metacirculant {:?}", c.name, r.flags.weak_metacirculant);
        ensure!(r.flags.weak_metacirculant_cayley == Some(true), "{}: wmcc {:?}", c.name, r.flags.weak_metacirculant_cayley);
        n += 1;
    }
    ensure!(n >= 10, "only {n} graphs");
    Ok(format!("{n} order-27 weak metacirculants, all weak metacirculant Cayley"))
}

fn petersen_equivalence() -> Outcome {
    for n in [5u64, 7, 9] {
        let mp = lib(MPParams::new(n, 2, n, 2).and_then(multilayer_generalized_petersen))?;
        let pg = lib(generalized_petersen(n as usize, 2))?;
        let map = lib(are_isomorphic(&mp, &pg, AUT_BOUND))?.ok_or_else(|| format!("MP({n},2,{n},2) !~ P({n},2)"))?;
        ensure!(mp.is_isomorphism(&pg, &map), "n = {n}: returned map is not an isomorphism");
    }
    Ok("3 isomorphisms found and checked edge by edge".into())
}

/// Counts automorphisms by extending partial vertex maps one vertex at a time.
fn count_automorphisms(g: &Graph) -> u128 {
    fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut [bool]) -> u128 {
        let v = map.len();
        if v == g.order() {
            return 1;
        }
        let mut total = 0;
        for w in 0..g.order() {
            if used[w] || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(map[u], w)) {
                used[w] = true;
                map.push(w);
                total += extend(g, map, used);
                map.pop();
                used[w] = false;
            }
        }
        total
    }
    extend(g, &mut Vec::new(), &mut vec![false; g.order()])
}

fn petersen_non_cayley() -> Outcome {
    let g = lib(generalized_petersen(5, 2))?;
    let aut = lib(automorphism_group(&g, AUT_BOUND))?;
    let oracle = count_automorphisms(&g);
    ensure!(aut.order() == 120 && oracle == 120, "|Aut| = {}, backtracking count {oracle}", aut.order());
    let r = lib(regular_subgroup_search(&aut, RegularPredicate::Any, None, &Default::default()))?;
    ensure!(
        r.certificate.status == SearchStatus::Exhausted && r.witnesses.is_empty(),
        "search ended {:?} with {} witnesses",
        r.certificate.status,
        r.witnesses.len()
    );
    Ok(format!("|Aut| = 120 by both routes, no regular subgroup ({})", r.certificate.detail))
}

fn sweep() -> Vec<XuZhangParams> {
    [3u64, 5].iter().flat_map(|&p| XuZhangParams::sweep(p, 4)).collect()
}

fn xu_zhang() -> Outcome {
    let params = sweep();
    for q in &params {
        let g = lib(xu_zhang_group(*q, CAP))?;
        let p = q.p as usize;
        ensure!(g.order() == p.pow(q.log_order()), "{q:?}: |G| = {}", g.order());
        ensure!(g.exponent() == q.p.pow(q.log_exponent()), "{q:?}: exp = {}", g.exponent());
        let d = g.derived_subgroup().order();
        ensure!(d == p.pow(q.log_derived()), "{q:?}: |G'| = {d}");
        let split = lib(g.is_split_metacyclic(CAP))?.is_some();
        ensure!(split == q.is_split(), "{q:?}: split = {split}, stu = {}", q.s * q.t * q.u);
    }
    Ok(format!("{} presentations, orders up to 5^8", params.len()))
}

fn omega_and_power() -> Outcome {
    let (mut omega, mut exhaustive) = (0, 0);
    for q in sweep() {
        let g = lib(xu_zhang_group(q, CAP))?;
        if !g.is_cyclic() {
            let o = lib(g.omega_s(q.p, 1))?;
            let sub = lib(g.subgroup_as_group(&o))?;
            ensure!(
                o.order() as u64 == q.p * q.p && sub.exponent() == q.p,
                "{q:?}: |Ω1| = {}, exp {}",
                o.order(),
                sub.exponent()
            );
            omega += 1;
        }
        if g.order() > 729 {
            continue;
        }
        let ell = q.log_derived();
        let e = q.p.pow(ell);
        let n = g.order() as u32;
        let pw: Vec<u32> = (0..n).map(|x| g.pow(x, e)).collect();
        for x in 0..n {
            for y in 0..n {
                ensure!(pw[g.mul(x, y) as usize] == g.mul(pw[x as usize], pw[y as usize]), "{q:?}: fails at ({x}, {y})");
            }
        }
        exhaustive += 1;
    }
    Ok(format!("Ω1 ≅ Cp x Cp in {omega} noncyclic groups; power identity exhaustive in {exhaustive} groups"))
}

fn complement_sweep() -> Outcome {
    let mut total = 0;
    for (m, n) in [(27u64, 9u64), (9, 3)] {
        for e in (1..m).filter(|&e| gcd(e, m) == 1 && (0..n).fold(1, |a, _| a * e % m) == 1) {
            let g = lib(split_metacyclic_group(m, n, e, CAP))?;
            let sigma = g.pair_id(1, 0);
            let s = g.subgroup(&[sigma]);
            for x in 1..g.order() as u32 {
                if g.subgroup(&[x]).elements().iter().any(|&y| y != 0 && s.contains(y)) {
                    continue;
                }
                let w = lib(g.find_order_pn_overgroup(sigma, x)).map_err(|e| format!("C{m}:C{n}[e={e}], g = {x}: {e}"))?;
                ensure!(g.subgroup(&[w.tau]).contains(x), "τ' misses g = {x}");
                total += 1;
            }
        }
    }
    Ok(format!("{total} elements, zero NotFound"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn symmetric(n: usize) -> Result<FiniteGroup, String> {
    let cycle: Vec<u32> = (0..n as u32).collect();
    let gens = vec![lib(Permutation::from_cycles(n, &[&[0, 1]]))?, lib(Permutation::from_cycles(n, &[&cycle]))?];
    Ok(lib(FiniteGroup::from_permutation_group(&lib(PermutationGroup::new(n, gens))?, CAP))?.0)
}

fn is_core_free(g: &FiniteGroup, h: &Subgroup) -> bool {
    h.elements().iter().all(|&x| x == 0 || (0..g.order() as u32).any(|y| !h.contains(g.conj(x, y))))
}

/// Orbits of the whole group (every element, not just generators) on arcs.
fn arc_orbit_count(g: &FiniteGroup, space: &CosetSpace, graph: &Graph, undirected: bool) -> usize {
    let acts: Vec<Permutation> = (0..g.order() as u32).map(|x| space.action(g, x)).collect();
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for u in 0..graph.order() {
        for &v in graph.neighbors(u) {
            let key = |a: usize, b: usize| if undirected { (a.min(b), a.max(b)) } else { (a, b) };
            if seen.contains(&key(u, v as usize)) {
                continue;
            }
            orbits += 1;
            for a in &acts {
                seen.insert(key(a.apply(u), a.apply(v as usize)));
            }
        }
    }
    orbits
}

fn coset_clauses() -> Outcome {
    let groups = vec![
        symmetric(4)?,
        symmetric(5)?,
        lib(split_metacyclic_group(10, 2, 9, CAP))?,
        lib(split_metacyclic_group(13, 3, 3, CAP))?,
        lib(split_metacyclic_group(27, 3, 10, CAP))?,
        lib(mp_cayley_group(3, 3, 1, 4, CAP))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut instances = 0;
    for g in &groups {
        let n = g.order() as u32;
        let mut made = 0;
        for _ in 0..400 {
            if made == 5 {
                break;
            }
            let h = g.subgroup(&[rng.gen_range(0..n)]);
            if h.order() == g.order() || !is_core_free(g, &h) {
                continue;
            }
            let x = rng.gen_range(0..n);
            if h.contains(x) {
                continue;
            }
            let graph = lib(coset_graph_from_arc(g, &h, x))?;
            let space = CosetSpace::new(g, &h);
            ensure!(arc_orbit_count(g, &space, &graph, true) == 1, "not edge-transitive");
            let hgh: HashSet<u32> =
                h.elements().iter().flat_map(|&a| h.elements().iter().map(move |&b| g.mul(g.mul(a, x), b))).collect();
            let paired = hgh.contains(&g.inv(x));
            ensure!((arc_orbit_count(g, &space, &graph, false) == 1) == paired, "arc-transitivity clause fails");
            let mut gens = h.generators().to_vec();
            gens.push(x);
            ensure!(graph.is_connected() == (g.subgroup(&gens).order() == g.order()), "connectivity clause fails");
            let meet = h.elements().iter().filter(|&&a| h.contains(g.conj(a, g.inv(x)))).count();
            let idx = h.order() / meet;
            let want = if paired { idx } else { 2 * idx };
            ensure!(graph.valency() == Some(want), "valency {:?}, expected {want}", graph.valency());
            made += 1;
        }
        instances += made;
    }
    ensure!(instances >= 20, "only {instances} instances");
    Ok(format!("{instances} instances, four clauses each"))
}

fn crossval() -> Outcome {
    let corpus = lib(crossval_corpus(0))?;
    let mut agree = 0;
    for c in &corpus {
        let r = report(&c.graph)?;
        let routes = &r.metacirculant_routes;
        ensure!(
            routes.from_split_witness.is_some() && routes.from_split_witness == routes.definitional,
            "{}: split route {:?}, definitional {:?}",
            c.name,
            routes.from_split_witness,
            routes.definitional
        );
        agree += 1;
    }
    Ok(format!("{agree} graphs, both routes agree on each"))
}

fn distance_claim() -> Outcome {
    let r = lib(verify_mp_distance_claim(3, 3, 1, 4))?;
    ensure!(r.passed() && r.pairs_checked == 72, "{} violations over {} pairs", r.violations.len(), r.pairs_checked);
    Ok("72 (layer, j) pairs match BFS".into())
}

fn layer_blocks() -> Outcome {
    for (m, n, s, t) in [(27u64, 3u64, 9u64, 4u64), (9, 3, 3, 2)] {
        let params = lib(MPParams::new(m, n, s, t))?;
        let g = lib(multilayer_generalized_petersen(params))?;
        let aut = lib(automorphism_group(&g, AUT_BOUND))?;
        let layers = mp_layers(params);
        for layer in &layers {
            ensure!(lib(is_block(&aut, layer))?, "MP({m},{n},{s},{t}): layer is not a block");
        }
        let layer_of = |v: usize| v / m as usize;
        for a in aut.generators() {
            for layer in &layers {
                let first = layer_of(a.apply(layer[0]));
                ensure!(layer.iter().all(|&v| layer_of(a.apply(v)) == first), "a generator splits a layer");
            }
        }
    }
    Ok("layer partitions are Aut-invariant for both graphs".into())
}

fn trichotomy() -> Outcome {
    let refs = admissible_lambdas(3, 3, 1)
        .into_iter()
        .map(|l| lib(MPParams::new(27, 3, 9, l).and_then(multilayer_generalized_petersen)))
        .collect::<Result<Vec<_>, _>>()?;
    let arcs = lib(inner_arc_transitivity_check(3, 3, 1, 4, AUT_BOUND))?;
    ensure!(arcs.inner_arc_transitive(), "flagship inner arcs split into {} orbits", arcs.inner_arc_orbits);
    let (mut counts, mut checked) = ([0usize; 3], 0);
    for c in lib(spotcheck_instances(0, CAP as u128, AUT_BOUND))? {
        ensure!(c.graph.order() == 81 && c.graph.valency() == Some(8) && c.graph.is_connected(), "{} is off-spec", c.name);
        let r = report(&c.graph)?;
        let Some(meta) = r.flags.metacirculant else { return Err(format!("{}: metacirculant undecided", c.name)) };
        if !meta {
            continue;
        }
        let a = r.flags.weak_metacirculant_cayley.ok_or_else(|| format!("{}: wmcc undecided", c.name))?;
        let b = !r.flags.cayley.ok_or_else(|| format!("{}: cayley undecided", c.name))?;
        let mut cc = false;
        for mp in &refs {
            if lib(are_isomorphic(&c.graph, mp, AUT_BOUND))?.is_some() {
                cc = true;
                break;
            }
        }
        let cases = [a, b, cc];
        ensure!(cases.iter().filter(|&&x| x).count() == 1, "{}: cases (a, b, c) = {cases:?}", c.name);
        if c.name == "MP(27,3,9,4)" {
            ensure!(cc, "flagship is not in case (c)");
        }
        for (k, &x) in cases.iter().enumerate() {
            counts[k] += x as usize;
        }
        checked += 1;
    }
    Ok(format!("{checked} metacirculants: (a) {}, (b) {}, (c) {}; flagship in (c)", counts[0], counts[1], counts[2]))
}

struct Criterion {
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { title: "flagship MP(27,3,9,4)", budget: secs(600), run: flagship },
        Criterion { title: "order-27 weak metacirculants are weak metacirculant Cayley", budget: secs(60), run: order27_floor },
        Criterion { title: "MP(n,2,n,2) ~ P(n,2)", budget: secs(10), run: petersen_equivalence },
        Criterion { title: "Petersen graph is not Cayley", budget: secs(5), run: petersen_non_cayley },
        Criterion { title: "Xu-Zhang invariants", budget: secs(120), run: xu_zhang },
        Criterion { title: "Ω1 and the power identity", budget: secs(120), run: omega_and_power },
        Criterion { title: "order-p^n overgroup existence", budget: secs(60), run: complement_sweep },
        Criterion { title: "coset graph clauses", budget: secs(30), run: coset_clauses },
        Criterion { title: "metacirculant routes agree", budget: secs(900), run: crossval },
        Criterion { title: "layer distance claim", budget: secs(5), run: distance_claim },
        Criterion { title: "layers are blocks", budget: secs(60), run: layer_blocks },
        Criterion { title: "order-81 trichotomy", budget: secs(900), run: trichotomy },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let wall = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if wall <= c.budget => (true, d),
            Ok(d) => (false, format!("over budget: {d}")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "criterion {:2} {} {} ({:.1}s of {}s): {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            wall.as_secs_f64(),
            c.budget.as_secs(),
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
