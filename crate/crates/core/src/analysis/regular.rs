use super::elements::{compose, ElementStore, SemiregularIndex};
use super::metacyclic::scan_metacyclic_pairs;
use super::sylow::{check_sylow_cap, sylow_p_subgroup};
use crate::error::{Error, Result};
use crate::groups::{prime_power, FiniteGroup};
use crate::perm::{Permutation, PermutationGroup, SearchBudget, DEFAULT_ELEMENT_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;

/// Budgets shared by the subgroup searches.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Largest group whose elements may be listed explicitly.
    pub max_group_order: u128,
    pub search_nodes: u64,
    pub seed: u64,
    /// Stop after this many regular subgroups.
    pub max_witnesses: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_group_order: DEFAULT_ELEMENT_CAP, search_nodes: 50_000_000, seed: 0, max_witnesses: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

/// Record of how a search ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchCertificate {
    pub status: SearchStatus,
    /// Order of the group whose elements were searched.
    pub searched_order: u128,
    pub nodes: u64,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularPredicate {
    Any,
    Metacyclic,
    Cyclic,
}

#[derive(Clone, Debug)]
pub struct RegularSearch {
    pub witnesses: Vec<PermutationGroup>,
    pub certificate: SearchCertificate,
}

impl RegularSearch {
    pub fn is_inconclusive(&self) -> bool {
        self.certificate.status == SearchStatus::BudgetExceeded
    }
}

fn budget_hit(e: &Error) -> bool {
    matches!(e, Error::SearchBudgetExceeded { .. } | Error::CapExceeded { .. })
}

fn inconclusive(searched_order: u128, e: &Error) -> RegularSearch {
    RegularSearch {
        witnesses: Vec::new(),
        certificate: SearchCertificate {
            status: SearchStatus::BudgetExceeded,
            searched_order,
            nodes: 0,
            detail: e.to_string(),
        },
    }
}

/// Regular subgroups of `a` satisfying `predicate`. When the degree is a
/// power of `p` only a Sylow `p`-subgroup is searched, which loses nothing:
/// every regular `p`-subgroup is conjugate into it. `sylow_seed` may supply
/// a known `p`-subgroup to start the Sylow ascent.
pub fn regular_subgroup_search(
    a: &PermutationGroup,
    predicate: RegularPredicate,
    sylow_seed: Option<&PermutationGroup>,
    opts: &SearchOptions,
) -> Result<RegularSearch> {
    let n = a.degree();
    if !a.is_transitive() || a.order() % n as u128 != 0 {
        return Ok(RegularSearch {
            witnesses: Vec::new(),
            certificate: SearchCertificate {
                status: SearchStatus::Exhausted,
                searched_order: a.order(),
                nodes: 0,
                detail: "group is intransitive or |A| is not divisible by the degree".into(),
            },
        });
    }
    let pp = prime_power(n as u128).filter(|_| n > 1);
    let searched = match pp {
        Some((p, _)) => {
            match check_sylow_cap(a, p, opts.max_group_order)
                .and_then(|_| sylow_p_subgroup(a, p, sylow_seed, SearchBudget::nodes(opts.search_nodes), opts.seed))
            {
                Ok(s) => s,
                Err(e) if budget_hit(&e) => return Ok(inconclusive(a.order(), &e)),
                Err(e) => return Err(e),
            }
        }
        None => a.clone(),
    };
    let result = match (pp, predicate) {
        (Some(_), RegularPredicate::Metacyclic | RegularPredicate::Cyclic) => {
            scan_metacyclic_pairs(&searched, opts.max_group_order, opts.search_nodes).map(|scan| {
                let found: Vec<PermutationGroup> = if predicate == RegularPredicate::Cyclic {
                    scan.cyclic_regular.iter().map(|x| PermutationGroup::new(n, vec![x.clone()]).expect("degree")).collect()
                } else {
                    scan.regular.iter().map(|w| w.group()).collect()
                };
                let status = if found.is_empty() { SearchStatus::Exhausted } else { SearchStatus::Found };
                RegularSearch {
                    witnesses: found,
                    certificate: SearchCertificate {
                        status,
                        searched_order: searched.order(),
                        nodes: scan.candidates,
                        detail: format!(
                            "{} semiregular elements, {} classes of ⟨x⟩, {} pairs, {} normalizing, {} transitive pairs",
                            scan.semiregular_elements, scan.classes, scan.pairs, scan.normalizing, scan.transitive
                        ),
                    },
                }
            })
        }
        (Some((p, _)), RegularPredicate::Any) => chief_series_search(&searched, p, opts),
        (None, _) => generic_search(&searched, predicate, opts),
    };
    match result {
        Ok(r) => Ok(r),
        Err(e) if budget_hit(&e) => Ok(inconclusive(searched.order(), &e)),
        Err(e) => Err(e),
    }
}

struct Dfs<'a> {
    group: &'a PermutationGroup,
    /// `g⁻¹(0)` for every stored element `g`
    inv0: Vec<u16>,
    seed: u64,
    index: &'a SemiregularIndex<'a>,
    n: usize,
    p: usize,
    /// index of `g^p` for each semiregular `g`
    pth_power: Vec<Option<u32>>,
    /// `roots[root_start[h]..root_start[h + 1]]` lists the `g` with `g^p = h`
    root_start: Vec<u32>,
    roots: Vec<u32>,
    visited: HashSet<Vec<u32>>,
    nodes: u64,
    budget: u64,
    found: Vec<Vec<u32>>,
    want: usize,
    tmp: Vec<u16>,
    tmp2: Vec<u16>,
}

impl Dfs<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded { budget: self.budget, detail: "regular subgroup search".into() });
        }
        Ok(())
    }

    fn product(&mut self, a: u32, b: u32) -> Option<u32> {
        compose(self.index.row(a), self.index.row(b), &mut self.tmp);
        self.index.find(&self.tmp)
    }

    fn conj(&mut self, k: u32, g: u32) -> Option<u32> {
        // g⁻¹ k g: compute images directly, v ↦ g(k(g⁻¹(v)))
        let (kr, gr) = (self.index.row(k), self.index.row(g));
        self.tmp2.clear();
        self.tmp2.resize(self.n, 0);
        for v in 0..self.n {
            self.tmp2[gr[v] as usize] = gr[kr[v] as usize];
        }
        self.index.find(&self.tmp2)
    }

    /// `K·⟨g⟩` when `g` normalizes `K`, `g^p ∈ K` and every product stays
    /// semiregular. Elements of the coset `Kg` seen on the way are marked
    /// in `done`: they give the same extension.
    fn extend(&mut self, k: &[u32], kgens: &[u32], g: u32, done: &mut [u64]) -> Option<Vec<u32>> {
        let gp = self.pth_power[g as usize]?;
        k.binary_search(&gp).ok()?;
        for &h in kgens {
            let c = self.conj(h, g)?;
            k.binary_search(&c).ok()?;
        }
        let mut out = k.to_vec();
        let mut layer: Vec<u32> = k.to_vec();
        for j in 1..self.p {
            let mut next = Vec::with_capacity(layer.len());
            for &x in &layer {
                let y = self.product(x, g)?;
                if j == 1 {
                    done[y as usize / 64] |= 1 << (y % 64);
                }
                next.push(y);
            }
            out.extend_from_slice(&next);
            layer = next;
        }
        out.sort_unstable();
        Some(out)
    }

    fn search(&mut self, k: Vec<u32>, kgens: Vec<u32>) -> Result<()> {
        self.tick()?;
        if k.len() == self.n {
            self.found.push(kgens);
            return Ok(());
        }
        let normalizer = self.normalizer(&k, &kgens)?;
        let mut cands: Vec<u32> = k
            .iter()
            .flat_map(|&h| &self.roots[self.root_start[h as usize] as usize..self.root_start[h as usize + 1] as usize])
            .copied()
            .collect();
        cands.sort_unstable();
        let mut done = vec![0u64; self.index.len().div_ceil(64)];
        for &x in &k {
            done[x as usize / 64] |= 1 << (x % 64);
        }
        for g in cands {
            if self.found.len() >= self.want {
                return Ok(());
            }
            if done[g as usize / 64] >> (g % 64) & 1 == 1 {
                continue;
            }
            self.tick()?;
            let Some(next) = self.extend(&k, &kgens, g, &mut done) else { continue };
            for &x in &next {
                done[x as usize / 64] |= 1 << (x % 64);
            }
            if !self.visited.insert(next.clone()) {
                continue;
            }
            // conjugates under N_P(K) contain K and need no separate visit;
            // the whole orbit is walked even through subgroups seen before
            let mut orbit = HashSet::from([next.clone()]);
            let mut stack = vec![next.clone()];
            while let Some(s) = stack.pop() {
                for (inv, row) in &normalizer {
                    let mut img: Vec<u32> = s
                        .iter()
                        .map(|&x| {
                            compose(inv, self.index.row(x), &mut self.tmp);
                            compose(&self.tmp, row, &mut self.tmp2);
                            self.index.find(&self.tmp2).expect("conjugate of a semiregular element")
                        })
                        .collect();
                    img.sort_unstable();
                    if orbit.insert(img.clone()) {
                        self.visited.insert(img.clone());
                        for &x in &img {
                            done[x as usize / 64] |= 1 << (x % 64);
                        }
                        self.tick()?;
                        stack.push(img);
                    }
                }
            }
            let mut gens = kgens.clone();
            gens.push(g);
            self.search(next, gens)?;
        }
        Ok(())
    }

    /// Generators of `N_P(K)` as (inverse, image) rows. Membership is read
    /// off point images: `K` is semiregular, so `g⁻¹hg ∈ K` iff the element
    /// of `K` sending `0` to `g(h(g⁻¹(0)))` agrees with `g⁻¹hg` everywhere.
    fn normalizer(&mut self, k: &[u32], kgens: &[u32]) -> Result<Vec<(Vec<u16>, Vec<u16>)>> {
        let to_rows = |gens: &[Permutation]| -> Vec<(Vec<u16>, Vec<u16>)> {
            gens.iter()
                .map(|g| {
                    let r: Vec<u16> = g.images().iter().map(|&v| v as u16).collect();
                    (inverse_row(&r), r)
                })
                .collect()
        };
        if kgens.is_empty() {
            return Ok(to_rows(self.group.generators()));
        }
        let (n, store) = (self.n, self.index.store);
        let mut by_image = vec![u32::MAX; n];
        for &e in k {
            by_image[self.index.row(e)[0] as usize] = e;
        }
        let members: Vec<u32> = (0..store.len() as u32)
            .filter(|&s| {
                let g = store.row(s as usize);
                let a = self.inv0[s as usize] as usize;
                kgens.iter().all(|&h| {
                    let hr = self.index.row(h);
                    let c = by_image[g[hr[a] as usize] as usize];
                    c != u32::MAX && {
                        let cr = self.index.row(c);
                        (0..n).all(|v| cr[g[v] as usize] == g[hr[v] as usize])
                    }
                })
            })
            .collect();
        self.nodes += members.len() as u64 / 64;
        let target = members.len() as u128;
        let mut group = PermutationGroup::new(n, kgens.iter().map(|&g| self.perm(g)).collect())?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ group.order() as u64);
        let mut tries = 0;
        let mut next = 0;
        while group.order() < target {
            // random members first; a deterministic sweep guarantees termination
            let s = if tries < 256 {
                tries += 1;
                members[rng.gen_range(0..members.len())]
            } else {
                next += 1;
                members[next - 1]
            };
            let g = store.perm(s as usize);
            if !group.contains(&g) {
                group = group.join(&[g])?;
            }
        }
        Ok(to_rows(group.generators()))
    }

    fn perm(&self, g: u32) -> Permutation {
        self.index.store.perm(self.index.members[g as usize] as usize)
    }
}

fn inverse_row(x: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; x.len()];
    for (v, &w) in x.iter().enumerate() {
        inv[w as usize] = v as u16;
    }
    inv
}

/// Regular subgroups of a `p`-group, built along a chief series
/// `1 < K_1 < ⋯ < K_k` with each `K_{i+1} = K_i⟨g⟩`, `g^p ∈ K_i`, `g`
/// normalizing `K_i`. Each `K` is expanded once per `P`-class: conjugates
/// of a new `K⟨g⟩` under `N_P(K)` are marked as covered, so witnesses are
/// listed up to conjugacy in `P`.
fn chief_series_search(pg: &PermutationGroup, p: u64, opts: &SearchOptions) -> Result<RegularSearch> {
    let n = pg.degree();
    let store = ElementStore::new(pg, opts.max_group_order)?;
    let index = SemiregularIndex::new(&store);
    let p = p as usize;
    let mut tmp = Vec::new();
    let pth_power: Vec<Option<u32>> = (0..index.len() as u32)
        .map(|g| {
            let r = index.row(g);
            let mut acc = r.to_vec();
            for _ in 1..p {
                compose(&acc, r, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
            index.find(&acc)
        })
        .collect();
    let identity = index.identity();
    let mut root_start = vec![0u32; index.len() + 1];
    for h in pth_power.iter().flatten() {
        root_start[*h as usize + 1] += 1;
    }
    for i in 0..index.len() {
        root_start[i + 1] += root_start[i];
    }
    let mut fill = root_start.clone();
    let mut roots = vec![0u32; root_start[index.len()] as usize];
    for (g, h) in pth_power.iter().enumerate() {
        if let Some(h) = h {
            if g as u32 != identity {
                roots[fill[*h as usize] as usize] = g as u32;
                fill[*h as usize] += 1;
            }
        }
    }
    let inv0: Vec<u16> = (0..store.len())
        .map(|s| store.row(s).iter().position(|&v| v == 0).expect("bijection") as u16)
        .collect();
    let mut dfs = Dfs {
        group: pg,
        inv0,
        seed: opts.seed,
        index: &index,
        n,
        p,
        pth_power,
        root_start,
        roots,
        visited: HashSet::new(),
        nodes: 0,
        budget: opts.search_nodes,
        found: Vec::new(),
        want: opts.max_witnesses.max(1),
        tmp: Vec::new(),
        tmp2: Vec::new(),
    };
    dfs.search(vec![identity], Vec::new())?;
    let witnesses: Vec<PermutationGroup> = dfs
        .found
        .iter()
        .map(|gs| PermutationGroup::new(n, gs.iter().map(|&g| store.perm(index.members[g as usize] as usize)).collect()))
        .collect::<Result<_>>()?;
    Ok(RegularSearch {
        certificate: SearchCertificate {
            status: if witnesses.is_empty() { SearchStatus::Exhausted } else { SearchStatus::Found },
            searched_order: pg.order(),
            nodes: dfs.nodes,
            detail: format!(
                "{} semiregular elements, {} semiregular subgroups covered up to conjugacy",
                index.len(),
                dfs.visited.len()
            ),
        },
        witnesses,
    })
}

/// Regular subgroups of an arbitrary transitive group: extend a
/// semiregular `K` by an element sending `0` to the least point outside
/// `0^K`, closing and rejecting as soon as a product has a fixed point.
fn generic_search(a: &PermutationGroup, predicate: RegularPredicate, opts: &SearchOptions) -> Result<RegularSearch> {
    let n = a.degree();
    let store = ElementStore::new(a, opts.max_group_order)?;
    let index = SemiregularIndex::new(&store);
    let identity = index.identity();
    let mut by_image: Vec<Vec<u32>> = vec![Vec::new(); n];
    for g in 0..index.len() as u32 {
        if g != identity {
            by_image[index.row(g)[0] as usize].push(g);
        }
    }
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut nodes = 0u64;
    let mut tmp = Vec::new();
    let want = opts.max_witnesses.max(1);
    let matches = |gens: &[u32], index: &SemiregularIndex| -> Result<bool> {
        if predicate == RegularPredicate::Any {
            return Ok(true);
        }
        let h = PermutationGroup::new(n, gens.iter().map(|&g| store.perm(index.members[g as usize] as usize)).collect())?;
        let (fg, _) = FiniteGroup::from_permutation_group(&h, n)?;
        Ok(match predicate {
            RegularPredicate::Cyclic => fg.is_cyclic(),
            _ => fg.is_metacyclic(n)?.is_some(),
        })
    };
    let mut stack: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![identity], Vec::new())];
    while let Some((k, kgens)) = stack.pop() {
        nodes += 1;
        if nodes > opts.search_nodes {
            return Err(Error::SearchBudgetExceeded { budget: opts.search_nodes, detail: "regular subgroup search".into() });
        }
        if k.len() == n {
            if matches(&kgens, &index)? {
                found.push(kgens);
                if found.len() >= want {
                    break;
                }
            }
            continue;
        }
        let mut in_orbit = vec![false; n];
        for &x in &k {
            in_orbit[index.row(x)[0] as usize] = true;
        }
        let v = (0..n).find(|&v| !in_orbit[v]).expect("K is not transitive yet");
        let mut children = Vec::new();
        'cand: for &g in by_image[v].iter().rev() {
            // closure of K ∪ {g} by right multiplication with the generators
            let mut gens = kgens.clone();
            gens.push(g);
            let mut elems: Vec<u32> = vec![identity];
            let mut seen: HashSet<u32> = HashSet::from([identity]);
            let mut i = 0;
            while i < elems.len() {
                for &s in &gens {
                    compose(index.row(elems[i]), index.row(s), &mut tmp);
                    let Some(r) = index.find(&tmp) else { continue 'cand };
                    if seen.insert(r) {
                        elems.push(r);
                        if elems.len() > n {
                            continue 'cand;
                        }
                    }
                }
                i += 1;
            }
            elems.sort_unstable();
            if visited.insert(elems.clone()) {
                children.push((elems, gens));
            }
        }
        stack.extend(children);
    }
    let witnesses: Vec<PermutationGroup> = found
        .iter()
        .map(|gs| PermutationGroup::new(n, gs.iter().map(|&g| store.perm(index.members[g as usize] as usize)).collect()))
        .collect::<Result<_>>()?;
    Ok(RegularSearch {
        certificate: SearchCertificate {
            status: if witnesses.is_empty() { SearchStatus::Exhausted } else { SearchStatus::Found },
            searched_order: a.order(),
            nodes,
            detail: format!("{} semiregular elements, {} semiregular subgroups visited", index.len(), visited.len()),
        },
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::automorphism_group;
    use crate::graph::{cayley_graph, generalized_petersen};
    use crate::groups::{split_metacyclic_group, DEFAULT_GROUP_CAP};

    #[test]
    fn petersen_is_not_cayley() {
        let aut = automorphism_group(&generalized_petersen(5, 2).unwrap(), 512).unwrap();
        assert_eq!(aut.order(), 120);
        let r = regular_subgroup_search(&aut, RegularPredicate::Any, None, &SearchOptions::default()).unwrap();
        assert!(r.witnesses.is_empty());
        assert_eq!(r.certificate.status, SearchStatus::Exhausted);
    }

    #[test]
    fn cayley_graph_has_regular_subgroup() {
        let g = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        let gens = g.generators().to_vec();
        let mut s = Vec::new();
        for &x in &gens {
            s.push(x);
            s.push(g.inv(x));
        }
        let cay = cayley_graph(&g, &s).unwrap();
        let aut = automorphism_group(&cay, 512).unwrap();
        for pred in [RegularPredicate::Any, RegularPredicate::Metacyclic] {
            let r = regular_subgroup_search(&aut, pred, None, &SearchOptions::default()).unwrap();
            assert_eq!(r.certificate.status, SearchStatus::Found, "{pred:?}");
            let h = &r.witnesses[0];
            assert_eq!(h.order(), 27);
            assert!(h.is_transitive());
            assert!(h.generators().iter().all(|x| cay.is_automorphism(x)));
        }
    }

    #[test]
    fn cycle_has_cyclic_and_dihedral_regular_subgroups() {
        let c6 = crate::graph::Graph::cycle(6);
        let aut = automorphism_group(&c6, 512).unwrap();
        let opts = SearchOptions { max_witnesses: 10, ..Default::default() };
        let any = regular_subgroup_search(&aut, RegularPredicate::Any, None, &opts).unwrap();
        // C6 and the copy of S3 made of rotations by 2 and edge reflections
        assert_eq!(any.witnesses.len(), 2);
        let cyc = regular_subgroup_search(&aut, RegularPredicate::Cyclic, None, &opts).unwrap();
        assert_eq!(cyc.witnesses.len(), 1);
    }
}
