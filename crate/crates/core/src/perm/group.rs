use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};

/// Default cap for explicit element enumeration.
pub const DEFAULT_ELEMENT_CAP: u128 = 2_000_000;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    /// `trans[b] = Some((u, u^-1))` with `point^u = b`, for `b` in the basic orbit.
    trans: Vec<Option<Box<(Permutation, Permutation)>>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut trans = vec![None; degree];
        trans[point] = Some(Box::new((Permutation::identity(degree), Permutation::identity(degree))));
        Level { point, gens: Vec::new(), trans, orbit: vec![point] }
    }
}

/// A permutation group given by generators, carrying a base and strong
/// generating set built by deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityProfile {
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
}

impl PermutationGroup {
    /// Builds the group and its stabilizer chain. Base points are chosen as
    /// the smallest point moved by the element that needs a new level.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_base_prefix(degree, gens, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup { degree, generators: Vec::new(), levels: Vec::new(), order: 1 }
    }

    /// Like [`new`](Self::new), but the chain starts with the given base points.
    pub fn with_base_prefix(degree: usize, gens: Vec<Permutation>, prefix: &[usize]) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        for &b in prefix {
            if b >= degree {
                return Err(Error::PointOutOfRange { point: b, degree });
            }
        }
        let gens: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let mut group = PermutationGroup {
            degree,
            generators: gens.clone(),
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            order: 1,
        };
        for g in gens {
            group.add_generator(g, 0);
        }
        // drop trailing prefix levels that ended up trivial
        while group.levels.last().is_some_and(|l| l.orbit.len() == 1 && l.gens.is_empty()) {
            group.levels.pop();
        }
        let mut order: u128 = 1;
        for l in &group.levels {
            order = order.checked_mul(l.orbit.len() as u128).ok_or(Error::OrderOverflow)?;
        }
        group.order = order;
        Ok(group)
    }

    /// Sifts `g` through levels starting at `from`; returns the residue and
    /// the level where sifting stopped (`levels.len()` if it went through).
    fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, lvl) in self.levels.iter().enumerate().skip(from) {
            let b = h.apply(lvl.point);
            match &lvl.trans[b] {
                None => return (h, i),
                Some(u) => h = h.mul(&u.1),
            }
        }
        (h, self.levels.len())
    }

    fn add_generator(&mut self, g: Permutation, level: usize) {
        let (h, depth) = self.sift_from(&g, level);
        if depth == self.levels.len() {
            if h.is_identity() {
                return;
            }
            let point = h.first_moved_point().expect("non-identity residue moves a point");
            self.levels.push(Level::new(point, self.degree));
        }
        for j in (level..=depth).rev() {
            let schreier = self.extend_level(j, h.clone());
            for s in schreier {
                self.add_generator(s, j + 1);
            }
        }
    }

    /// Adds `h` to the generators of level `j`, grows the basic orbit and
    /// returns the new Schreier generators (non-identity ones only).
    fn extend_level(&mut self, j: usize, h: Permutation) -> Vec<Permutation> {
        let degree = self.degree;
        let lvl = &mut self.levels[j];
        lvl.gens.push(h.clone());
        let old_len = lvl.orbit.len();
        let mut queue = VecDeque::new();
        for k in 0..old_len {
            let beta = lvl.orbit[k];
            let gamma = h.apply(beta);
            if lvl.trans[gamma].is_none() {
                let u = lvl.trans[beta].as_ref().unwrap().0.mul(&h);
                let ui = u.inverse();
                lvl.trans[gamma] = Some(Box::new((u, ui)));
                lvl.orbit.push(gamma);
                queue.push_back(gamma);
            }
        }
        while let Some(delta) = queue.pop_front() {
            for s in 0..lvl.gens.len() {
                let gamma = lvl.gens[s].apply(delta);
                if lvl.trans[gamma].is_none() {
                    let u = lvl.trans[delta].as_ref().unwrap().0.mul(&lvl.gens[s]);
                    let ui = u.inverse();
                    lvl.trans[gamma] = Some(Box::new((u, ui)));
                    lvl.orbit.push(gamma);
                    queue.push_back(gamma);
                }
            }
        }
        let mut out = Vec::new();
        let schreier = |beta: usize, s: &Permutation| -> Permutation {
            let ub = &lvl.trans[beta].as_ref().unwrap().0;
            let img = s.apply(beta);
            let uinv = &lvl.trans[img].as_ref().unwrap().1;
            ub.mul(s).mul(uinv)
        };
        for k in 0..old_len {
            let sg = schreier(lvl.orbit[k], &h);
            if !sg.is_identity() {
                out.push(sg);
            }
        }
        for k in old_len..lvl.orbit.len() {
            for s in &lvl.gens {
                let sg = schreier(lvl.orbit[k], s);
                if !sg.is_identity() {
                    out.push(sg);
                }
            }
        }
        let _ = degree;
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Sizes of the basic orbits; their product is the group order.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub(crate) fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Transversal element `u` at `level` with `base[level]^u = point`.
    pub(crate) fn transversal(&self, level: usize, point: usize) -> Option<&Permutation> {
        self.levels[level].trans[point].as_ref().map(|b| &b.0)
    }

    /// Strong generators fixing the first `level` base points.
    pub fn strong_generators(&self, level: usize) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels[level.min(self.levels.len())..] {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, depth) = self.sift_from(g, 0);
        depth == self.levels.len() && h.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Uniformly random element, drawn as a product of random coset representatives.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lvl in self.levels.iter().rev() {
            let b = lvl.orbit[rng.gen_range(0..lvl.orbit.len())];
            g = g.mul(&lvl.trans[b].as_ref().unwrap().0);
        }
        g
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// Orbits on `0..degree`, each sorted, listed by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    pub fn transitivity_profile(&self) -> TransitivityProfile {
        let orbits = self.orbits();
        let transitive = orbits.len() <= 1;
        let semiregular = orbits.iter().all(|o| o.len() as u128 == self.order);
        TransitivityProfile { transitive, semiregular, regular: transitive && semiregular }
    }

    /// Point stabilizer, computed from a chain whose base starts at `point`.
    pub fn stabilizer(&self, point: usize) -> Result<PermutationGroup> {
        self.pointwise_stabilizer(&[point])
    }

    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermutationGroup> {
        for &p in points {
            if p >= self.degree {
                return Err(Error::PointOutOfRange { point: p, degree: self.degree });
            }
        }
        let rebased = PermutationGroup::with_base_prefix(self.degree, self.generators.clone(), points)?;
        let mut gens: Vec<Permutation> = Vec::new();
        for l in rebased.levels.iter().skip(points.len()) {
            gens.extend(l.gens.iter().cloned());
        }
        let gens = gens
            .into_iter()
            .filter(|g| points.iter().all(|&p| g.apply(p) == p))
            .collect();
        PermutationGroup::new(self.degree, gens)
    }

    /// All elements, sorted lexicographically by image array.
    pub fn enumerate_elements(&self, cap: u128) -> Result<Vec<Permutation>> {
        if self.order > cap {
            return Err(Error::CapExceeded { order: self.order, cap });
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lvl.orbit.len());
            for &b in &lvl.orbit {
                let u = &lvl.trans[b].as_ref().unwrap().0;
                for g in &out {
                    next.push(g.mul(u));
                }
            }
            out = next;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The subgroup generated by this group's generators and `extra`.
    pub fn join(&self, extra: &[Permutation]) -> Result<PermutationGroup> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        PermutationGroup::new(self.degree, gens)
    }

    pub fn conjugate(&self, by: &Permutation) -> Result<PermutationGroup> {
        PermutationGroup::new(self.degree, self.generators.iter().map(|g| g.conjugate_by(by)).collect())
    }

    /// `true` when every generator of `sub` conjugated by `g` lies in `sub`.
    pub fn is_normalized_by(&self, g: &Permutation) -> bool {
        self.generators.iter().all(|h| self.contains(&h.conjugate_by(g)))
    }

    pub fn is_normal_in(&self, over: &PermutationGroup) -> bool {
        over.generators.iter().all(|g| self.is_normalized_by(g))
    }

    /// Generator lines with a `degree:` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("degree: {}\n", self.degree);
        for g in &self.generators {
            s.push_str(&g.to_line());
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<PermutationGroup> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty group text".into()))?;
        let degree: usize = header
            .strip_prefix("degree:")
            .ok_or_else(|| Error::Parse(format!("expected `degree:` header, got `{header}`")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad degree: {e}")))?;
        let gens = lines.map(Permutation::parse_line).collect::<Result<Vec<_>>>()?;
        PermutationGroup::new(degree, gens)
    }
}

pub fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn cyc(n: usize, c: &[u32]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    /// Exhaustive closure by breadth-first multiplication.
    fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut set = HashSet::new();
        let id = Permutation::identity(degree);
        set.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn s4() -> PermutationGroup {
        PermutationGroup::new(4, vec![cyc(4, &[0, 1]), cyc(4, &[0, 1, 2, 3])]).unwrap()
    }

    #[test]
    fn cyclic_and_symmetric_orders() {
        let c5 = PermutationGroup::new(5, vec![cyc(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert_eq!(c5.order(), 5);
        assert_eq!(s4().order(), 24);
        let trivial = PermutationGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(trivial.base().is_empty());
    }

    #[test]
    fn order_matches_closure_on_random_subgroups() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let gens: Vec<Permutation> = (0..2)
                .map(|_| {
                    let mut v: Vec<u32> = (0..7).collect();
                    v.shuffle(&mut rng);
                    Permutation::from_images(v).unwrap()
                })
                .collect();
            let g = PermutationGroup::new(7, gens.clone()).unwrap();
            let cl = closure(7, &gens);
            assert_eq!(g.order(), cl.len() as u128);
            for x in &cl {
                assert!(g.contains(x));
            }
            let elems = g.enumerate_elements(DEFAULT_ELEMENT_CAP).unwrap();
            assert_eq!(elems.len(), cl.len());
            assert!(elems.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        let c5 = PermutationGroup::new(5, vec![cyc(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert!(!c5.contains(&cyc(5, &[0, 1])));
        assert!(c5.contains(&cyc(5, &[0, 2, 4, 1, 3])));
    }

    #[test]
    fn orbits_and_stabilizers() {
        let trivial = PermutationGroup::trivial(5);
        assert_eq!(trivial.orbits().len(), 5);
        let st = s4().stabilizer(0).unwrap();
        assert_eq!(st.order(), 6);
        assert!(st.generators().iter().all(|g| g.apply(0) == 0));
        let c5 = PermutationGroup::new(5, vec![cyc(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert!(c5.stabilizer(3).unwrap().is_trivial());
        assert!(c5.stabilizer(9).is_err());
    }

    #[test]
    fn orbit_stabilizer_on_random_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let gens: Vec<Permutation> = (0..2)
                .map(|_| {
                    let mut v: Vec<u32> = (0..8).collect();
                    v.shuffle(&mut rng);
                    Permutation::from_images(v).unwrap()
                })
                .collect();
            let g = PermutationGroup::new(8, gens).unwrap();
            for x in 0..8 {
                let o = g.orbit(x).len() as u128;
                assert_eq!(o * g.stabilizer(x).unwrap().order(), g.order());
            }
        }
    }

    #[test]
    fn random_s6_subgroup_orbits_match_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Permutation::from_cycles(6, &[&[0, 3], &[1, 4]]).unwrap();
        let b = Permutation::from_cycles(6, &[&[1, 4, 2]]).unwrap();
        let g = PermutationGroup::new(6, vec![a, b]).unwrap();
        let elems = g.enumerate_elements(1000).unwrap();
        for x in 0..6 {
            let mut bfs: Vec<usize> = elems.iter().map(|e| e.apply(x)).collect();
            bfs.sort_unstable();
            bfs.dedup();
            assert_eq!(g.orbit(x), bfs);
        }
        let _ = g.random_element(&mut rng);
    }

    #[test]
    fn transitivity_profiles() {
        let p = Permutation::from_cycles(10, &[&[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9]]).unwrap();
        let g = PermutationGroup::new(10, vec![p]).unwrap();
        let prof = g.transitivity_profile();
        assert!(!prof.transitive && prof.semiregular && !prof.regular);
        let s = s4().transitivity_profile();
        assert!(s.transitive && !s.semiregular);
    }

    #[test]
    fn cap_guard() {
        let s8 = PermutationGroup::new(8, vec![cyc(8, &[0, 1]), cyc(8, &[0, 1, 2, 3, 4, 5, 6, 7])]).unwrap();
        assert_eq!(s8.order(), 40320);
        assert!(matches!(s8.enumerate_elements(1000), Err(Error::CapExceeded { .. })));
        let trivial = PermutationGroup::trivial(4);
        assert_eq!(trivial.enumerate_elements(1).unwrap(), vec![Permutation::identity(4)]);
    }

    #[test]
    fn large_symmetric_group() {
        // |S_12| = 479001600, reached without enumeration
        let mut gens = vec![cyc(12, &[0, 1])];
        gens.push(cyc(12, &(0..12).collect::<Vec<u32>>()));
        let g = PermutationGroup::new(12, gens).unwrap();
        assert_eq!(g.order(), 479_001_600);
    }

    #[test]
    fn sifting_soundness_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gens = vec![
            Permutation::from_cycles(9, &[&[0, 1, 2], &[3, 4, 5]]).unwrap(),
            Permutation::from_cycles(9, &[&[0, 3, 6], &[1, 4, 7]]).unwrap(),
        ];
        let g = PermutationGroup::new(9, gens.clone()).unwrap();
        let cl = closure(9, &gens);
        for _ in 0..50 {
            let k = rng.gen_range(1..=3);
            let mut x = Permutation::identity(9);
            for _ in 0..k {
                x = x.mul(&gens[rng.gen_range(0..gens.len())]);
            }
            assert!(g.contains(&x));
        }
        for _ in 0..50 {
            let mut v: Vec<u32> = (0..9).collect();
            v.shuffle(&mut rng);
            let x = Permutation::from_images(v).unwrap();
            assert_eq!(g.contains(&x), cl.contains(&x));
        }
    }

    #[test]
    fn text_round_trip() {
        let g = s4();
        let back = PermutationGroup::parse_text(&g.to_text()).unwrap();
        assert!(back.same_group(&g));
        assert!(PermutationGroup::parse_text("[0,1]").is_err());
    }
}
