use super::metacyclic::{scan_metacyclic_pairs, MetacyclicPair, MetacyclicScan};
use super::regular::{regular_subgroup_search, RegularPredicate, SearchCertificate, SearchOptions, SearchStatus};
use super::sylow::{check_sylow_cap, sylow_p_subgroup};
use crate::aut::{automorphism_group, DEFAULT_AUT_BOUND};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::groups::{prime_power, FiniteGroup};
use crate::perm::{orbits_of, Permutation, PermutationGroup, SearchBudget};
use serde::Serialize;
use std::collections::BTreeMap;

/// Budgets and optional hints for [`classify`].
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub search: SearchOptions,
    pub max_aut_degree: usize,
    /// A known `p`-subgroup of `Aut(Γ)` to start the Sylow ascent from.
    pub sylow_seed: Option<PermutationGroup>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { search: SearchOptions::default(), max_aut_degree: DEFAULT_AUT_BOUND, sylow_seed: None }
    }
}

/// `Some(b)` for a decided flag, `None` when a budget ran out.
pub type Flag = Option<bool>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub vertex_transitive: Flag,
    pub cayley: Flag,
    pub weak_metacirculant: Flag,
    pub split_weak_metacirculant: Flag,
    pub metacirculant: Flag,
    pub weak_metacirculant_cayley: Flag,
}

impl Flags {
    /// The implication chain between the flags, treating undecided flags
    /// as compatible with anything.
    pub fn implications_hold(&self) -> bool {
        let imp = |a: Flag, b: Flag| !(a == Some(true) && b == Some(false));
        imp(self.metacirculant, self.split_weak_metacirculant)
            && imp(self.split_weak_metacirculant, self.weak_metacirculant)
            && imp(self.weak_metacirculant_cayley, self.cayley)
            && imp(self.weak_metacirculant_cayley, self.weak_metacirculant)
            && imp(self.cayley, self.vertex_transitive)
            && imp(self.weak_metacirculant, self.vertex_transitive)
    }

    pub fn is_conclusive(&self) -> bool {
        [
            self.vertex_transitive,
            self.cayley,
            self.weak_metacirculant,
            self.split_weak_metacirculant,
            self.metacirculant,
            self.weak_metacirculant_cayley,
        ]
        .iter()
        .all(Option::is_some)
    }
}

/// Both decision routes for the metacirculant flag.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MetacirculantRoutes {
    /// `(σ, τ)` built from a split transitive metacyclic subgroup and
    /// confirmed definitionally; `None` when no split witness exists or
    /// the order is not a prime power.
    pub from_split_witness: Flag,
    /// Direct search for `(σ, τ)` over the Sylow subgroup (or all of
    /// `Aut(Γ)` for other orders).
    pub definitional: Flag,
    pub sigma: Option<String>,
    pub tau: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub prime: Option<u64>,
    pub aut_order: u128,
    pub searched_order: u128,
    pub flags: Flags,
    /// Generator lists (one image array per generator) for positive flags.
    pub witnesses: BTreeMap<String, Vec<String>>,
    pub witness_orders: BTreeMap<String, u128>,
    /// How each negative or undecided flag was settled.
    pub search_certificates: BTreeMap<String, SearchCertificate>,
    pub metacirculant_routes: MetacirculantRoutes,
    pub implications_hold: bool,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn lines(gens: &[Permutation]) -> Vec<String> {
    gens.iter().map(Permutation::to_line).collect()
}

/// Whether `(σ, τ)` exhibit Γ as a metacirculant: `⟨σ⟩` semiregular, `τ`
/// normalizes `⟨σ⟩` and cyclically permutes its `m` orbits, and `τ` has
/// an `m`-cycle.
pub fn is_metacirculant_definitional(graph: &Graph, sigma: &Permutation, tau: &Permutation) -> Result<bool> {
    let n = graph.order();
    for (name, g) in [("sigma", sigma), ("tau", tau)] {
        if g.degree() != n {
            return Err(Error::DegreeMismatch(g.degree(), n));
        }
        if !graph.is_automorphism(g) {
            return Err(Error::NotAutomorphisms(format!("{name} does not preserve adjacency")));
        }
    }
    let cycles = orbits_of(n, std::slice::from_ref(sigma));
    let len = cycles[0].len();
    if cycles.iter().any(|c| c.len() != len) {
        return Ok(false);
    }
    // τ⁻¹στ ∈ ⟨σ⟩
    let conj = sigma.conjugate_by(tau);
    let mut power = Permutation::identity(n);
    if !(0..len).any(|_| {
        power = power.mul(sigma);
        power == conj
    }) {
        return Ok(false);
    }
    let m = cycles.len();
    let mut orbit_of = vec![0usize; n];
    for (k, c) in cycles.iter().enumerate() {
        for &v in c {
            orbit_of[v] = k;
        }
    }
    // the orbit permutation induced by τ is a single m-cycle
    let mut o = 0;
    for step in 1..=m {
        o = orbit_of[tau.apply(cycles[o][0])];
        if o == 0 && step < m {
            return Ok(false);
        }
    }
    if o != 0 {
        return Ok(false);
    }
    Ok(tau.cycle_type().contains(&m))
}

/// `(σ, τ)` inside a transitive split metacyclic group `G`: `σ` generates a
/// normal cyclic subgroup with cyclic quotient, and `τ` generates a
/// complement containing the stabilizer `G_0`. Then `τ` permutes the
/// `⟨σ⟩`-orbits in one cycle and `τ^m ∈ G_0` fixes 0, giving an `m`-cycle.
pub fn metacirculant_pair_from_split(group: &PermutationGroup, cap: usize) -> Result<Option<(Permutation, Permutation)>> {
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let (fg, elems) = FiniteGroup::from_permutation_group(group, cap)?;
    let order = fg.order();
    let stab: Vec<u32> = (0..order as u32).filter(|&g| elems[g as usize].apply(0) == 0).collect();
    let orders: Vec<u64> = (0..order as u32).map(|g| fg.element_order(g)).collect();
    let mut xs: Vec<u32> = (0..order as u32).collect();
    // larger normal cyclic subgroups first
    xs.sort_by_key(|&g| (std::cmp::Reverse(orders[g as usize]), g));
    for x in xs {
        let ox = orders[x as usize] as usize;
        let sub = fg.subgroup(&[x]);
        if !fg.is_normal(&sub) {
            continue;
        }
        let index = order / ox;
        let mask = sub.mask(order);
        for y in 0..order as u32 {
            if orders[y as usize] as usize != index {
                continue;
            }
            let cyc = fg.subgroup(&[y]);
            if cyc.elements().iter().any(|&e| e != fg.identity() && mask[e as usize]) {
                continue;
            }
            if stab.iter().all(|&s| cyc.contains(s)) {
                return Ok(Some((elems[x as usize].clone(), elems[y as usize].clone())));
            }
        }
    }
    Ok(None)
}

/// A transitive metacyclic subgroup of a Sylow `p`-subgroup of `a`,
/// preferring a split one, with its split status.
pub fn transitive_metacyclic_witness(
    a: &PermutationGroup,
    p: u64,
    opts: &SearchOptions,
) -> Result<Option<(PermutationGroup, bool)>> {
    let n = a.degree() as u128;
    match prime_power(n) {
        Some((q, _)) if q == p => {}
        _ => return Err(Error::Precondition(format!("degree {n} is not a power of {p}"))),
    }
    check_sylow_cap(a, p, opts.max_group_order)?;
    let sylow = sylow_p_subgroup(a, p, None, SearchBudget::nodes(opts.search_nodes), opts.seed)?;
    let scan = scan_metacyclic_pairs(&sylow, opts.max_group_order, opts.search_nodes)?;
    Ok(scan.minimal_split.or(scan.minimal).map(|w| (w.group(), w.split)))
}

fn scan_certificate(status: SearchStatus, searched: u128, scan: &MetacyclicScan) -> SearchCertificate {
    SearchCertificate {
        status,
        searched_order: searched,
        nodes: scan.candidates,
        detail: format!(
            "{} semiregular elements, {} classes of cyclic semiregular subgroups, {} pairs, {} normalizing, {} transitive pairs",
            scan.semiregular_elements, scan.classes, scan.pairs, scan.normalizing, scan.transitive
        ),
    }
}

struct Builder {
    report: ClassificationReport,
}

impl Builder {
    fn positive(&mut self, key: &str, group: &PermutationGroup) {
        self.report.witnesses.insert(key.into(), lines(group.generators()));
        self.report.witness_orders.insert(key.into(), group.order());
    }

    fn certificate(&mut self, key: &str, cert: SearchCertificate) {
        self.report.search_certificates.insert(key.into(), cert);
    }

    fn inconclusive(&mut self, keys: &[&str], searched: u128, e: &Error) {
        for k in keys {
            self.certificate(
                k,
                SearchCertificate { status: SearchStatus::BudgetExceeded, searched_order: searched, nodes: 0, detail: e.to_string() },
            );
        }
    }
}

fn budget_hit(e: &Error) -> bool {
    matches!(e, Error::SearchBudgetExceeded { .. } | Error::CapExceeded { .. })
}

fn regular_metacyclic(pair: &MetacyclicPair) -> Result<bool> {
    let g = pair.group();
    let (fg, _) = FiniteGroup::from_regular_permutation_group(&g)?;
    Ok(fg.is_metacyclic(fg.order())?.is_some())
}

/// Decides the six flags for Γ. For prime-power order `p^k` the metacyclic
/// searches run inside a Sylow `p`-subgroup of `Aut(Γ)`, and the
/// metacirculant flag comes from a split transitive metacyclic witness
/// turned into `(σ, τ)`. Other orders search all of `Aut(Γ)` directly and
/// decide metacirculancy only definitionally.
pub fn classify(graph: &Graph, p: Option<u64>, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let n = graph.order();
    let pp = prime_power(n as u128).filter(|_| n > 1);
    let prime = match (p, pp) {
        (Some(p), Some((q, _))) if p == q => Some(p),
        (Some(p), _) => return Err(Error::Precondition(format!("order {n} is not a power of {p}"))),
        (None, pp) => pp.map(|(q, _)| q),
    };
    let aut = automorphism_group(graph, opts.max_aut_degree)?;
    let mut b = Builder {
        report: ClassificationReport {
            order: n,
            prime,
            aut_order: aut.order(),
            searched_order: aut.order(),
            flags: Flags::default(),
            witnesses: BTreeMap::new(),
            witness_orders: BTreeMap::new(),
            search_certificates: BTreeMap::new(),
            metacirculant_routes: MetacirculantRoutes::default(),
            implications_hold: true,
        },
    };
    let flags_all = [
        "cayley",
        "weak_metacirculant",
        "split_weak_metacirculant",
        "metacirculant",
        "weak_metacirculant_cayley",
    ];
    if !aut.is_transitive() {
        let cert = SearchCertificate {
            status: SearchStatus::Exhausted,
            searched_order: aut.order(),
            nodes: 0,
            detail: "automorphism group is intransitive".into(),
        };
        b.report.flags = Flags {
            vertex_transitive: Some(false),
            cayley: Some(false),
            weak_metacirculant: Some(false),
            split_weak_metacirculant: Some(false),
            metacirculant: Some(false),
            weak_metacirculant_cayley: Some(false),
        };
        b.certificate("vertex_transitive", cert.clone());
        for k in flags_all {
            b.certificate(k, cert.clone());
        }
        b.report.metacirculant_routes.definitional = Some(false);
        return Ok(b.report);
    }
    b.report.flags.vertex_transitive = Some(true);
    b.positive("vertex_transitive", &aut);

    let search = &opts.search;
    let searched = match prime {
        Some(p) => match check_sylow_cap(&aut, p, search.max_group_order).and_then(|_| {
            sylow_p_subgroup(&aut, p, opts.sylow_seed.as_ref(), SearchBudget::nodes(search.search_nodes), search.seed)
        }) {
            Ok(s) => Some(s),
            Err(e) if budget_hit(&e) => {
                b.inconclusive(&flags_all, aut.order(), &e);
                None
            }
            Err(e) => return Err(e),
        },
        None => Some(aut.clone()),
    };
    let Some(searched) = searched else {
        b.report.implications_hold = b.report.flags.implications_hold();
        return Ok(b.report);
    };
    b.report.searched_order = searched.order();

    let mut cayley_known = false;
    match scan_metacyclic_pairs(&searched, search.max_group_order, search.search_nodes) {
        Ok(scan) => {
            let exhausted = scan_certificate(SearchStatus::Exhausted, searched.order(), &scan);
            let set = |b: &mut Builder, key: &str, w: &Option<MetacyclicPair>| -> Flag {
                match w {
                    Some(w) => {
                        b.positive(key, &w.group());
                        Some(true)
                    }
                    None => {
                        b.certificate(key, exhausted.clone());
                        Some(false)
                    }
                }
            };
            b.report.flags.weak_metacirculant = set(&mut b, "weak_metacirculant", &scan.minimal);
            b.report.flags.split_weak_metacirculant = set(&mut b, "split_weak_metacirculant", &scan.minimal_split);
            let regular = match &scan.regular {
                Some(w) if !regular_metacyclic(w)? => {
                    return Err(Error::Precondition("regular pair group failed the metacyclicity check".into()))
                }
                r => r.clone(),
            };
            b.report.flags.weak_metacirculant_cayley = set(&mut b, "weak_metacirculant_cayley", &regular);
            if let Some(w) = &regular {
                b.report.flags.cayley = Some(true);
                b.positive("cayley", &w.group());
                cayley_known = true;
            }
            let routes = &mut b.report.metacirculant_routes;
            routes.definitional = match &scan.metacirculant {
                Some(w) => {
                    let ok = is_metacirculant_definitional(graph, &w.x, &w.y)?;
                    if ok {
                        routes.sigma = Some(w.x.to_line());
                        routes.tau = Some(w.y.to_line());
                    }
                    Some(ok)
                }
                None => Some(false),
            };
            if prime.is_some() {
                routes.from_split_witness = match &scan.minimal_split {
                    Some(w) => {
                        let g = w.group();
                        let cap = g.order().min(search.max_group_order) as usize;
                        match metacirculant_pair_from_split(&g, cap)? {
                            Some((s, t)) => {
                                let ok = is_metacirculant_definitional(graph, &s, &t)?;
                                if ok {
                                    routes.sigma = Some(s.to_line());
                                    routes.tau = Some(t.to_line());
                                }
                                Some(ok)
                            }
                            None => Some(false),
                        }
                    }
                    None => Some(false),
                };
                b.report.flags.metacirculant = b.report.metacirculant_routes.from_split_witness;
            } else {
                b.report.flags.metacirculant = b.report.metacirculant_routes.definitional;
            }
            if b.report.flags.metacirculant == Some(false) {
                b.certificate("metacirculant", exhausted.clone());
            } else if let (Some(s), Some(t)) = (&b.report.metacirculant_routes.sigma, &b.report.metacirculant_routes.tau) {
                b.report.witnesses.insert("metacirculant".into(), vec![s.clone(), t.clone()]);
            }
        }
        Err(e) if budget_hit(&e) => {
            b.inconclusive(&flags_all[1..], searched.order(), &e);
        }
        Err(e) => return Err(e),
    }

    if !cayley_known {
        let r = regular_subgroup_search(&aut, RegularPredicate::Any, Some(&searched), search)?;
        match r.witnesses.first() {
            Some(h) => {
                b.report.flags.cayley = Some(true);
                b.positive("cayley", h);
            }
            None => {
                b.report.flags.cayley = (!r.is_inconclusive()).then_some(false);
                b.certificate("cayley", r.certificate);
            }
        }
    }
    b.report.implications_hold = b.report.flags.implications_hold();
    Ok(b.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant, generalized_petersen};

    #[test]
    fn circulant_has_every_flag() {
        let g = circulant(27, &[1, 26]).unwrap();
        let r = classify(&g, Some(3), &ClassifyOptions::default()).unwrap();
        assert_eq!(r.flags.cayley, Some(true));
        assert_eq!(r.flags.metacirculant, Some(true));
        assert_eq!(r.flags.weak_metacirculant_cayley, Some(true));
        assert!(r.flags.is_conclusive());
        assert!(r.implications_hold);
    }

    #[test]
    fn petersen_is_metacirculant_but_not_cayley() {
        let g = generalized_petersen(5, 2).unwrap();
        let r = classify(&g, None, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.prime, None);
        assert_eq!(r.flags.vertex_transitive, Some(true));
        assert_eq!(r.flags.cayley, Some(false));
        assert_eq!(r.flags.metacirculant, Some(true));
        assert_eq!(r.search_certificates["cayley"].status, SearchStatus::Exhausted);
        assert!(r.implications_hold);
    }

    #[test]
    fn definitional_check() {
        let c6 = Graph::cycle(6);
        let rot = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        assert!(is_metacirculant_definitional(&c6, &rot, &Permutation::identity(6)).unwrap());
        // Petersen: x_i = i, y_i = 5 + i; τ: x_i ↦ y_{2i}, y_i ↦ x_{2i}
        let pg = generalized_petersen(5, 2).unwrap();
        let sigma = Permutation::from_images((0..10).map(|v| (v / 5 * 5 + (v % 5 + 1) % 5) as u32).collect()).unwrap();
        let tau = Permutation::from_images((0..10).map(|v| ((1 - v / 5) * 5 + (2 * (v % 5)) % 5) as u32).collect()).unwrap();
        assert!(is_metacirculant_definitional(&pg, &sigma, &tau).unwrap());
        // τ = identity no longer permutes the two orbits
        assert!(!is_metacirculant_definitional(&pg, &sigma, &Permutation::identity(10)).unwrap());
        let bad = Permutation::from_cycles(10, &[&[0, 1]]).unwrap();
        assert!(matches!(is_metacirculant_definitional(&pg, &bad, &tau), Err(Error::NotAutomorphisms(_))));
    }
}
