use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

/// Default cap on the number of elements of a constructed group.
pub const DEFAULT_GROUP_CAP: usize = 6561;

/// How a group was built; exported with the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub kind: String,
    pub params: Vec<i64>,
}

#[derive(Clone, Debug)]
enum Law {
    /// Full multiplication table, row-major.
    Table(Vec<u32>),
    /// Normal forms `a^i b^j` with id `i + modulus_a * j` and
    /// `(i,j)(k,l) = (i + k·f^j + [j+l ≥ modulus_b]·wrap, j + l)`.
    Metacyclic { modulus_a: u64, modulus_b: u64, f_pows: Vec<u64>, wrap: u64 },
    /// Normal forms `y^i x^j z^k` with id `i + ny·(j + nx·k)` and
    /// `(i,j,k)(i',j',k') = (i+i', j·λ^{i'} + j', k+k')`.
    Triple { ny: u64, nx: u64, nz: u64, lam_pows: Vec<u64> },
}

/// A finite group on element ids `0..order`; id 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    law: Law,
    inv: Vec<u32>,
    generators: Vec<u32>,
    presentation: Presentation,
    prime_power: Option<(u64, u32)>,
}

/// A subgroup as a sorted list of element ids plus a generating list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<u32>,
    gens: Vec<u32>,
}

impl Subgroup {
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: u32) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.elements {
            m[x as usize] = true;
        }
        m
    }
}

impl FiniteGroup {
    /// Builds a group from its multiplication table (identity at id 0).
    /// Axioms are checked: identity row, inverses, and associativity
    /// (exhaustively up to order 200, on 10^4 random triples above).
    pub fn from_table(order: usize, table: Vec<u32>, presentation: Presentation) -> Result<Self> {
        if table.len() != order * order || order == 0 {
            return Err(Error::InvalidParameters("table size does not match order".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidParameters("table entry out of range".into()));
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        if inv.iter().any(|&x| x == u32::MAX) {
            return Err(Error::InvalidParameters("element without inverse".into()));
        }
        let mut g = FiniteGroup { order, law: Law::Table(table), inv, generators: Vec::new(), presentation, prime_power: prime_power(order as u128) };
        g.validate()?;
        g.generators = g.greedy_generators();
        Ok(g)
    }

    pub(crate) fn metacyclic_law(
        modulus_a: u64,
        modulus_b: u64,
        f: u64,
        wrap: u64,
        presentation: Presentation,
        cap: usize,
    ) -> Result<Self> {
        let order = (modulus_a as u128) * (modulus_b as u128);
        if order > cap as u128 {
            return Err(Error::CapExceeded { order, cap: cap as u128 });
        }
        let mut f_pows = Vec::with_capacity(modulus_b as usize);
        let mut acc = 1 % modulus_a;
        for _ in 0..modulus_b {
            f_pows.push(acc);
            acc = acc * f % modulus_a;
        }
        let mut g = FiniteGroup {
            order: order as usize,
            law: Law::Metacyclic { modulus_a, modulus_b, f_pows, wrap },
            inv: Vec::new(),
            generators: Vec::new(),
            presentation,
            prime_power: prime_power(order),
        };
        g.fill_inverses();
        let mut gens = Vec::new();
        if modulus_a > 1 {
            gens.push(1);
        }
        if modulus_b > 1 {
            gens.push(modulus_a as u32);
        }
        g.generators = gens;
        Ok(g)
    }

    pub(crate) fn triple_law(
        ny: u64,
        nx: u64,
        nz: u64,
        lambda: u64,
        presentation: Presentation,
        cap: usize,
    ) -> Result<Self> {
        let order = ny as u128 * nx as u128 * nz as u128;
        if order > cap as u128 {
            return Err(Error::CapExceeded { order, cap: cap as u128 });
        }
        let mut lam_pows = Vec::with_capacity(ny as usize);
        let mut acc = 1 % nx;
        for _ in 0..ny {
            lam_pows.push(acc);
            acc = acc * (lambda % nx) % nx;
        }
        let mut g = FiniteGroup {
            order: order as usize,
            law: Law::Triple { ny, nx, nz, lam_pows },
            inv: Vec::new(),
            generators: Vec::new(),
            presentation,
            prime_power: prime_power(order),
        };
        g.fill_inverses();
        // x, y, z
        g.generators = vec![g.triple_id(0, 1, 0), g.triple_id(1, 0, 0), g.triple_id(0, 0, 1)];
        Ok(g)
    }

    fn fill_inverses(&mut self) {
        let n = self.order;
        let mut inv = vec![0u32; n];
        for a in 0..n as u32 {
            let o = self.element_order(a);
            inv[a as usize] = self.pow(a, o - 1);
        }
        self.inv = inv;
    }

    /// Elements of a permutation group as an abstract group; ids follow the
    /// lexicographic order of image arrays, so the identity gets id 0.
    pub fn from_permutation_group(g: &PermutationGroup, cap: usize) -> Result<(Self, Vec<Permutation>)> {
        let elems = g.enumerate_elements(cap as u128)?;
        let index: HashMap<&Permutation, u32> = elems.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * n + b] = index[&pa.mul(pb)];
            }
        }
        let mut inv = vec![0u32; n];
        for (a, pa) in elems.iter().enumerate() {
            inv[a] = index[&pa.inverse()];
        }
        let mut fg = FiniteGroup {
            order: n,
            law: Law::Table(table),
            inv,
            generators: Vec::new(),
            presentation: Presentation { kind: "permutation".into(), params: vec![g.degree() as i64] },
            prime_power: prime_power(n as u128),
        };
        let mut gens: Vec<u32> = g.generators().iter().map(|p| index[p]).collect();
        gens.sort_unstable();
        gens.dedup();
        fg.generators = if gens.is_empty() { Vec::new() } else { gens };
        Ok((fg, elems))
    }

    /// A regular permutation group as an abstract group: element `v` is the
    /// unique group element taking point 0 to `v`.
    pub fn from_regular_permutation_group(g: &PermutationGroup) -> Result<(Self, Vec<Permutation>)> {
        let n = g.degree();
        if !g.transitivity_profile().regular {
            return Err(Error::Precondition("permutation group is not regular".into()));
        }
        let chain = PermutationGroup::with_base_prefix(n, g.generators().to_vec(), &[0])?;
        let elems: Vec<Permutation> = (0..n)
            .map(|v| chain.transversal(0, v).cloned().unwrap_or_else(|| Permutation::identity(n)))
            .collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for (b, pb) in elems.iter().enumerate() {
                table[a * n + b] = pb.apply(a) as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for (a, pa) in elems.iter().enumerate() {
            inv[a] = pa.inverse().apply(0) as u32;
        }
        let mut gens: Vec<u32> = g.generators().iter().map(|p| p.apply(0) as u32).filter(|&x| x != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let fg = FiniteGroup {
            order: n,
            law: Law::Table(table),
            inv,
            generators: gens,
            presentation: Presentation { kind: "regular-permutation".into(), params: vec![n as i64] },
            prime_power: prime_power(n as u128),
        };
        Ok((fg, elems))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// `(p, k)` when the order is `p^k` with `k ≥ 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        self.prime_power
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// A generating list (the presentation generators when known).
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.law {
            Law::Table(t) => t[a as usize * self.order + b as usize],
            Law::Metacyclic { modulus_a, modulus_b, f_pows, wrap } => {
                let (i, j) = (a as u64 % modulus_a, a as u64 / modulus_a);
                let (k, l) = (b as u64 % modulus_a, b as u64 / modulus_a);
                let mut s = j + l;
                let mut e = i + k * f_pows[j as usize];
                if s >= *modulus_b {
                    s -= modulus_b;
                    e += wrap;
                }
                ((e % modulus_a) + modulus_a * s) as u32
            }
            Law::Triple { ny, nx, nz, lam_pows } => {
                let (i, rest) = (a as u64 % ny, a as u64 / ny);
                let (j, k) = (rest % nx, rest / nx);
                let (i2, rest2) = (b as u64 % ny, b as u64 / ny);
                let (j2, k2) = (rest2 % nx, rest2 / nx);
                let ni = (i + i2) % ny;
                let nj = (j * lam_pows[i2 as usize] + j2) % nx;
                let nk = (k + k2) % nz;
                (ni + ny * (nj + nx * nk)) as u32
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 0u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Power with a signed exponent.
    pub fn zpow(&self, a: u32, e: i64) -> u32 {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.pow(self.inv(a), e.unsigned_abs())
        }
    }

    pub fn element_order(&self, a: u32) -> u64 {
        if let Some((p, _)) = self.prime_power {
            let mut k = 1u64;
            let mut x = a;
            while x != 0 {
                x = self.pow(x, p);
                k *= p;
            }
            return k;
        }
        let mut k = 1u64;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `b^-1 a b`.
    pub fn conj(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn triple_id(&self, i: u64, j: u64, k: u64) -> u32 {
        match &self.law {
            Law::Triple { ny, nx, nz, .. } => ((i % ny) + ny * ((j % nx) + nx * (k % nz))) as u32,
            _ => panic!("triple_id on a group without y^i x^j z^k normal forms"),
        }
    }

    pub fn pair_id(&self, i: u64, j: u64) -> u32 {
        match &self.law {
            Law::Metacyclic { modulus_a, modulus_b, .. } => ((i % modulus_a) + modulus_a * (j % modulus_b)) as u32,
            _ => panic!("pair_id on a group without a^i b^j normal forms"),
        }
    }

    /// Normal-form exponents of an element, when the group has them.
    pub fn label(&self, a: u32) -> Option<Vec<u64>> {
        match &self.law {
            Law::Table(_) => None,
            Law::Metacyclic { modulus_a, .. } => Some(vec![a as u64 % modulus_a, a as u64 / modulus_a]),
            Law::Triple { ny, nx, .. } => {
                let (i, rest) = (a as u64 % ny, a as u64 / ny);
                Some(vec![i, rest % nx, rest / nx])
            }
        }
    }

    pub fn has_table(&self) -> bool {
        matches!(self.law, Law::Table(_))
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> Vec<Vec<u32>> {
        (0..self.order as u32).map(|a| (0..self.order as u32).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Checks identity, inverse and associativity laws.
    pub fn validate(&self) -> Result<()> {
        let n = self.order as u32;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidParameters(format!("identity law fails at {a}")));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::InvalidParameters(format!("inverse law fails at {a}")));
            }
        }
        let assoc = |a: u32, b: u32, c: u32| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= 200 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidParameters(format!("associativity fails at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidParameters(format!("associativity fails at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    /// Subgroup generated by `gens`, by closure under right multiplication.
    pub fn subgroup(&self, gens: &[u32]) -> Subgroup {
        let gens: Vec<u32> = {
            let mut v: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
            v.dedup();
            v
        };
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elements = vec![0u32];
        let mut k = 0;
        while k < elements.len() {
            let x = elements[k];
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    elements.push(y);
                }
            }
            k += 1;
        }
        elements.sort_unstable();
        Subgroup { elements, gens }
    }

    /// Validates an element set as a subgroup (closure under products).
    pub fn subgroup_from_elements(&self, elements: &[u32]) -> Result<Subgroup> {
        let mut els: Vec<u32> = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&x| x as usize >= self.order) {
            return Err(Error::NotASubgroup("element id out of range".into()));
        }
        let generated = self.subgroup(&els);
        if generated.elements != els {
            return Err(Error::NotASubgroup("set is not closed under multiplication".into()));
        }
        let gens = self.reduce_generators(&els);
        Ok(Subgroup { elements: els, gens })
    }

    /// A short generating list for the subgroup with these elements,
    /// preferring elements of large order.
    fn reduce_generators(&self, elements: &[u32]) -> Vec<u32> {
        let mut order_sorted: Vec<(u64, u32)> = elements.iter().map(|&g| (self.element_order(g), g)).collect();
        order_sorted.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut gens = Vec::new();
        let mut current = self.subgroup(&[]);
        for (_, g) in order_sorted {
            if current.order() == elements.len() {
                break;
            }
            if !current.contains(g) {
                gens.push(g);
                current = self.subgroup(&gens);
            }
        }
        gens
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let all: Vec<u32> = (0..self.order as u32).collect();
        self.reduce_generators(&all)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order as u32).collect(), gens: self.generators.clone() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0], gens: Vec::new() }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.gens.iter().all(|&x| self.generators.iter().all(|&g| h.contains(self.conj(x, g))))
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[u32]) -> Subgroup {
        let mut gens: Vec<u32> = gens.to_vec();
        let mut h = self.subgroup(&gens);
        loop {
            let mut added = false;
            for k in 0..gens.len() {
                for &g in &self.generators {
                    let c = self.conj(gens[k], g);
                    if !h.contains(c) {
                        gens.push(c);
                        h = self.subgroup(&gens);
                        added = true;
                    }
                }
            }
            if !added {
                return h;
            }
        }
    }

    /// The group with these elements, as a standalone table group whose
    /// element `k` corresponds to `h.elements()[k]`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup> {
        let els = h.elements();
        let m = els.len();
        let pos: HashMap<u32, u32> = els.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let mut table = vec![0u32; m * m];
        for (a, &ea) in els.iter().enumerate() {
            for (b, &eb) in els.iter().enumerate() {
                table[a * m + b] = pos[&self.mul(ea, eb)];
            }
        }
        let inv = els.iter().map(|&e| pos[&self.inv(e)]).collect();
        let gens = h.gens.iter().map(|g| pos[g]).collect();
        Ok(FiniteGroup {
            order: m,
            law: Law::Table(table),
            inv,
            generators: gens,
            presentation: Presentation { kind: "subgroup".into(), params: vec![m as i64] },
            prime_power: prime_power(m as u128),
        })
    }

    /// Right regular representation `R(g): x ↦ xg` on `0..order`.
    pub fn regular_representation(&self, cap: usize) -> Result<PermutationGroup> {
        if self.order > cap {
            return Err(Error::CapExceeded { order: self.order as u128, cap: cap as u128 });
        }
        let gens = self.generators.iter().map(|&g| self.right_translation(g)).collect();
        PermutationGroup::new(self.order, gens)
    }

    pub fn right_translation(&self, g: u32) -> Permutation {
        Permutation::from_images_unchecked((0..self.order as u32).map(|x| self.mul(x, g)).collect())
    }

    /// Group `G/N` on coset ids together with the projection `G → G/N`.
    pub fn quotient_group(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
        let checked = self.subgroup_from_elements(n.elements())?;
        if !self.is_normal(&checked) {
            return Err(Error::NotNormal);
        }
        let mut coset = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order as u32 {
            if coset[g as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            for &x in n.elements() {
                coset[self.mul(g, x) as usize] = id;
            }
            reps.push(g);
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate() {
                table[a * q + b] = coset[self.mul(ra, rb) as usize];
            }
        }
        let group = FiniteGroup::from_table(
            q,
            table,
            Presentation { kind: "quotient".into(), params: vec![self.order as i64, n.order() as i64] },
        )?;
        Ok((group, coset))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order as u32).any(|g| self.element_order(g) == self.order as u64)
    }
}

/// `(p, k)` with `n = p^k`, `k ≥ 1`, when `n` is a prime power.
pub fn prime_power(n: u128) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u128;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let (mut m, mut k) = (n, 0u32);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p as u64, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> FiniteGroup {
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        FiniteGroup::from_table(n, table, Presentation { kind: "cyclic".into(), params: vec![n as i64] }).unwrap()
    }

    #[test]
    fn table_group_basics() {
        let c6 = cyclic_table(6);
        assert_eq!(c6.order(), 6);
        assert_eq!(c6.element_order(1), 6);
        assert_eq!(c6.inv(2), 4);
        assert!(c6.is_abelian());
        assert!(c6.is_cyclic());
        assert_eq!(c6.subgroup(&[2]).order(), 3);
    }

    #[test]
    fn rejects_non_groups() {
        // constant table: no inverses beyond identity
        let bad = vec![0u32; 9];
        assert!(FiniteGroup::from_table(3, bad, Presentation { kind: "bad".into(), params: vec![] }).is_err());
    }

    #[test]
    fn non_subgroup_rejected() {
        let c6 = cyclic_table(6);
        assert!(c6.subgroup_from_elements(&[0, 1]).is_err());
        assert_eq!(c6.subgroup_from_elements(&[0, 3]).unwrap().order(), 2);
    }

    #[test]
    fn quotients() {
        let c6 = cyclic_table(6);
        let (q, proj) = c6.quotient_group(&c6.whole()).unwrap();
        assert_eq!(q.order(), 1);
        let (q, _) = c6.quotient_group(&c6.trivial_subgroup()).unwrap();
        assert_eq!(q.order(), 6);
        let sub = c6.subgroup(&[3]);
        let (q, proj2) = c6.quotient_group(&sub).unwrap();
        assert_eq!(q.order(), 3);
        for a in 0..6u32 {
            for b in 0..6u32 {
                assert_eq!(proj2[c6.mul(a, b) as usize], q.mul(proj2[a as usize], proj2[b as usize]));
            }
        }
        assert!(proj.iter().all(|&x| x == 0));
    }

    #[test]
    fn regular_representation_of_c3() {
        let c3 = cyclic_table(3);
        let r = c3.regular_representation(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(r.order(), 3);
        let expected = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(r.contains(&expected));
        assert!(r.transitivity_profile().regular);
        assert!(r.stabilizer(0).unwrap().is_trivial());
    }

    #[test]
    fn permutation_group_round_trip() {
        let s3 = PermutationGroup::new(
            3,
            vec![
                Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let (g, elems) = FiniteGroup::from_permutation_group(&s3, 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(elems[0].is_identity());
        assert!(!g.is_abelian());
        for a in 0..6u32 {
            for b in 0..6u32 {
                assert_eq!(elems[g.mul(a, b) as usize], elems[a as usize].mul(&elems[b as usize]));
            }
        }
    }
}
