use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::finite::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::perm::lcm;

/// Largest order at which [`is_pk_abelian`] checks every pair.
pub const PK_ABELIAN_EXHAUSTIVE_MAX: usize = 2187;

/// Number of sampled pairs above [`PK_ABELIAN_EXHAUSTIVE_MAX`].
pub const PK_ABELIAN_SAMPLES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub exponent: u64,
    pub derived_order: usize,
    pub center_order: usize,
    pub frattini_order: usize,
    pub is_abelian: bool,
    pub is_cyclic: bool,
    #[serde(skip)]
    pub derived_subgroup: Subgroup,
    #[serde(skip)]
    pub center: Subgroup,
    #[serde(skip)]
    pub frattini: Subgroup,
}

/// A cyclic normal subgroup `N = ⟨n⟩` with `G/N = ⟨q N⟩` cyclic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetacyclicWitness {
    pub normal_generator: u32,
    pub normal_order: usize,
    pub quotient_generator: u32,
    pub quotient_order: usize,
}

/// `G = ⟨n⟩ : ⟨h⟩` with `⟨n⟩ ⊴ G` and `⟨n⟩ ∩ ⟨h⟩ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub normal_generator: u32,
    pub normal_order: usize,
    pub complement_generator: u32,
    pub complement_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overgroup {
    pub tau: u32,
    /// Whether `⟨σ⟩ ∩ ⟨τ'⟩ = 1`.
    pub complement: bool,
}

impl FiniteGroup {
    fn require_p_group(&self, p: u64) -> Result<u32> {
        match self.prime_power() {
            Some((q, k)) if q == p => Ok(k),
            None if self.order() == 1 => Ok(0),
            _ => Err(Error::NotAPGroup { order: self.order() as u128, p }),
        }
    }

    /// Subgroup generated by all elements satisfying `pred`.
    pub fn generated_by(&self, mut pred: impl FnMut(u32) -> bool) -> Subgroup {
        let mut gens = Vec::new();
        let mut h = self.trivial_subgroup();
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        for g in 0..self.order() as u32 {
            if !mask[g as usize] && pred(g) {
                gens.push(g);
                h = self.subgroup(&gens);
                mask = h.mask(self.order());
            }
        }
        h
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order() as u32).fold(1, |acc, g| lcm(acc, self.element_order(g)))
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let gens = self.generators();
        let mut comms = Vec::new();
        for (k, &a) in gens.iter().enumerate() {
            for &b in &gens[k + 1..] {
                let c = self.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let els: Vec<u32> = (0..self.order() as u32)
            .filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        self.subgroup_from_elements(&els).expect("the center is a subgroup")
    }

    /// Frattini subgroup. For p-groups this is `⟨G', g^p⟩`, the normal
    /// closure of generator commutators and generator p-th powers; other
    /// groups use the intersection of maximal subgroups.
    pub fn frattini(&self) -> Subgroup {
        if let Some((p, _)) = self.prime_power() {
            let gens = self.generators();
            let mut seeds = Vec::new();
            for (k, &a) in gens.iter().enumerate() {
                seeds.push(self.pow(a, p));
                for &b in &gens[k + 1..] {
                    seeds.push(self.commutator(a, b));
                }
            }
            seeds.retain(|&x| x != 0);
            return self.normal_closure(&seeds);
        }
        self.frattini_by_maximal_subgroups()
    }

    /// Intersection of all maximal subgroups, found by enumerating the
    /// subgroups generated by pairs of elements. Exact for groups whose
    /// maximal subgroups are 2-generated; meant for small orders.
    pub fn frattini_by_maximal_subgroups(&self) -> Subgroup {
        let n = self.order();
        if n == 1 {
            return self.trivial_subgroup();
        }
        let mut subs: BTreeSet<Vec<u32>> = BTreeSet::new();
        for a in 0..n as u32 {
            for b in a..n as u32 {
                let h = self.subgroup(&[a, b]);
                if h.order() < n {
                    subs.insert(h.elements().to_vec());
                }
            }
        }
        // close under joins that stay proper, so maximal ones are present
        let mut all: Vec<Vec<u32>> = subs.into_iter().collect();
        let mut changed = true;
        while changed {
            changed = false;
            let snapshot = all.clone();
            for h in &snapshot {
                for k in &snapshot {
                    let mut gens = h.clone();
                    gens.extend_from_slice(k);
                    let j = self.subgroup(&gens);
                    if j.order() < n && !all.contains(&j.elements().to_vec()) {
                        all.push(j.elements().to_vec());
                        changed = true;
                    }
                }
            }
        }
        let maximal: Vec<&Vec<u32>> = all
            .iter()
            .filter(|h| !all.iter().any(|k| k.len() > h.len() && h.iter().all(|x| k.binary_search(x).is_ok())))
            .collect();
        let meet: Vec<u32> = (0..n as u32).filter(|x| maximal.iter().all(|h| h.binary_search(x).is_ok())).collect();
        self.subgroup_from_elements(&meet).expect("intersection of subgroups is a subgroup")
    }

    pub fn structure_report(&self, cap: usize) -> Result<StructureReport> {
        if self.order() > cap {
            return Err(Error::CapExceeded { order: self.order() as u128, cap: cap as u128 });
        }
        let derived = self.derived_subgroup();
        let center = self.center();
        let frattini = self.frattini();
        Ok(StructureReport {
            order: self.order(),
            exponent: self.exponent(),
            derived_order: derived.order(),
            center_order: center.order(),
            frattini_order: frattini.order(),
            is_abelian: self.is_abelian(),
            is_cyclic: self.is_cyclic(),
            derived_subgroup: derived,
            center,
            frattini,
        })
    }

    /// `Ω_s(G) = ⟨g : g^{p^s} = 1⟩`.
    pub fn omega_s(&self, p: u64, s: u32) -> Result<Subgroup> {
        self.require_p_group(p)?;
        let e = p.checked_pow(s).ok_or(Error::OrderOverflow)?;
        Ok(self.generated_by(|g| self.pow(g, e) == 0))
    }

    /// Whether `(xy)^{p^k} = x^{p^k} y^{p^k}` for all `x, y`. Every pair is
    /// checked up to order [`PK_ABELIAN_EXHAUSTIVE_MAX`]; larger groups are
    /// tested on generator pairs plus [`PK_ABELIAN_SAMPLES`] seeded random pairs.
    pub fn is_pk_abelian(&self, p: u64, k: u32) -> Result<bool> {
        self.require_p_group(p)?;
        let e = p.checked_pow(k).ok_or(Error::OrderOverflow)?;
        let n = self.order() as u32;
        let powers: Vec<u32> = (0..n).map(|x| self.pow(x, e)).collect();
        let holds = |x: u32, y: u32| powers[self.mul(x, y) as usize] == self.mul(powers[x as usize], powers[y as usize]);
        if self.order() <= PK_ABELIAN_EXHAUSTIVE_MAX {
            return Ok((0..n).all(|x| (0..n).all(|y| holds(x, y))));
        }
        let gens = self.generators();
        if !gens.iter().all(|&a| gens.iter().all(|&b| holds(a, b))) {
            return Ok(false);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        Ok((0..PK_ABELIAN_SAMPLES).all(|_| holds(rng.gen_range(0..n), rng.gen_range(0..n))))
    }

    /// The cyclic subgroups `⟨g⟩` of order at least `min_order`, each listed
    /// once by its least generator, in decreasing order of size (ties by id).
    fn cyclic_subgroups(&self, orders: &[u64], min_order: u64) -> Vec<(u32, Vec<u32>)> {
        let n = self.order();
        let mut covered = vec![false; n];
        let mut out = Vec::new();
        for g in 0..n as u32 {
            if covered[g as usize] || orders[g as usize] < min_order {
                continue;
            }
            let o = orders[g as usize];
            let mut els = Vec::with_capacity(o as usize);
            let mut x = 0u32;
            for k in 0..o {
                els.push(x);
                if crate::perm::gcd(k, o) == 1 {
                    covered[x as usize] = true;
                }
                x = self.mul(x, g);
            }
            els.sort_unstable();
            out.push((g, els));
        }
        out.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        out
    }

    fn element_orders(&self) -> Vec<u64> {
        (0..self.order() as u32).map(|g| self.element_order(g)).collect()
    }

    fn is_normal_cyclic(&self, gen: u32, mask: &[bool]) -> bool {
        self.generators().iter().all(|&h| mask[self.conj(gen, h) as usize])
    }

    /// Order of `g` modulo the subgroup with membership mask `mask`.
    fn order_mod(&self, g: u32, mask: &[bool]) -> u64 {
        let mut k = 1;
        let mut x = g;
        while !mask[x as usize] {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// An element generating `G/N`, or `None` when `G/N` is not cyclic.
    fn quotient_generator(&self, mask: &[bool], index: u64) -> Option<u32> {
        // in a p-group, a generating set of G/N contains a generator of G/N
        let candidates: Vec<u32> = if self.prime_power().is_some() {
            self.generators().to_vec()
        } else {
            (0..self.order() as u32).collect()
        };
        if index == 1 {
            return Some(0);
        }
        candidates.into_iter().find(|&g| self.order_mod(g, mask) == index)
    }

    /// Searches cyclic subgroups `N` in decreasing order of size for one
    /// that is normal with cyclic quotient.
    pub fn is_metacyclic(&self, cap: usize) -> Result<Option<MetacyclicWitness>> {
        if self.order() > cap {
            return Err(Error::CapExceeded { order: self.order() as u128, cap: cap as u128 });
        }
        let orders = self.element_orders();
        let exp = orders.iter().fold(1, |a, &b| lcm(a, b));
        let min = (self.order() as u64).div_ceil(exp);
        for (g, els) in self.cyclic_subgroups(&orders, min) {
            let mut mask = vec![false; self.order()];
            for &x in &els {
                mask[x as usize] = true;
            }
            if !self.is_normal_cyclic(g, &mask) {
                continue;
            }
            let index = (self.order() / els.len()) as u64;
            if let Some(q) = self.quotient_generator(&mask, index) {
                return Ok(Some(MetacyclicWitness {
                    normal_generator: g,
                    normal_order: els.len(),
                    quotient_generator: q,
                    quotient_order: index as usize,
                }));
            }
        }
        Ok(None)
    }

    /// Searches for `G = N : H` with `N` cyclic normal and `H` cyclic.
    pub fn is_split_metacyclic(&self, cap: usize) -> Result<Option<SplitWitness>> {
        Ok(self.split_decompositions(cap, true)?.into_iter().next())
    }

    /// Split decompositions, one per admissible cyclic normal subgroup `N`
    /// (with its least-id complement generator), in decreasing order of `|N|`.
    pub fn split_decompositions(&self, cap: usize, first_only: bool) -> Result<Vec<SplitWitness>> {
        if self.order() > cap {
            return Err(Error::CapExceeded { order: self.order() as u128, cap: cap as u128 });
        }
        let n = self.order();
        let orders = self.element_orders();
        let exp = orders.iter().fold(1, |a, &b| lcm(a, b));
        let min = (n as u64).div_ceil(exp);
        let prime = self.prime_power().map(|(p, _)| p);
        let mut out = Vec::new();
        for (g, els) in self.cyclic_subgroups(&orders, min) {
            let mut mask = vec![false; n];
            for &x in &els {
                mask[x as usize] = true;
            }
            if !self.is_normal_cyclic(g, &mask) {
                continue;
            }
            let index = (n / els.len()) as u64;
            if self.quotient_generator(&mask, index).is_none() {
                continue;
            }
            let complement = (0..n as u32).find(|&h| {
                if orders[h as usize] != index {
                    return false;
                }
                match prime {
                    // ⟨h⟩ ∩ N = 1 iff the order-p element of ⟨h⟩ avoids N
                    Some(p) if index > 1 => !mask[self.pow(h, index / p) as usize],
                    _ => {
                        let mut x = h;
                        (1..index).all(|_| {
                            let ok = !mask[x as usize];
                            x = self.mul(x, h);
                            ok
                        })
                    }
                }
            });
            if let Some(h) = complement {
                out.push(SplitWitness {
                    normal_generator: g,
                    normal_order: els.len(),
                    complement_generator: h,
                    complement_order: index as usize,
                });
                if first_only {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// For `G = ⟨σ⟩ : ⟨τ⟩ ≅ C_{p^m} : C_{p^n}` with `m ≥ n ≥ 1` and `g ≠ 1`,
    /// `⟨g⟩ ∩ ⟨σ⟩ = 1`: the least-id `τ'` of order `p^n` with `g ∈ ⟨τ'⟩`.
    pub fn find_order_pn_overgroup(&self, sigma: u32, g: u32) -> Result<Overgroup> {
        let (p, _) = self
            .prime_power()
            .ok_or_else(|| Error::Precondition("group is not a p-group".into()))?;
        if p == 2 {
            return Err(Error::Precondition("p must be odd".into()));
        }
        if g == 0 {
            return Err(Error::Precondition("g must be nontrivial".into()));
        }
        let om = self.element_order(sigma);
        let sig = self.subgroup(&[sigma]);
        if !self.is_normal(&sig) {
            return Err(Error::Precondition("⟨σ⟩ is not normal".into()));
        }
        let pn = self.order() as u64 / om;
        if pn < p || om < pn {
            return Err(Error::Precondition(format!("need m >= n >= 1, got |σ| = {om}, |G:⟨σ⟩| = {pn}")));
        }
        let mask = sig.mask(self.order());
        if self.quotient_generator(&mask, pn).is_none() {
            return Err(Error::Precondition("G/⟨σ⟩ is not cyclic".into()));
        }
        let og = self.element_order(g);
        if og > 1 && mask[self.pow(g, og / p) as usize] {
            return Err(Error::Precondition("⟨g⟩ ∩ ⟨σ⟩ is nontrivial".into()));
        }
        let gmask = self.subgroup(&[g]).mask(self.order());
        let tau = (0..self.order() as u32).find(|&t| {
            self.element_order(t) == pn && {
                // g ∈ ⟨t⟩ iff ⟨t^{p^n/|g|}⟩ = ⟨g⟩
                let w = self.pow(t, pn / og);
                gmask[w as usize] && self.element_order(w) == og
            }
        });
        match tau {
            Some(t) => Ok(Overgroup { tau: t, complement: !mask[self.pow(t, pn / p) as usize] }),
            None => Err(Error::NotFound("no element of order p^n contains g".into())),
        }
    }
}
