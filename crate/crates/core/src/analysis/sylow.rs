use crate::error::{Error, Result};
use crate::perm::{normalizer_in, Permutation, PermutationGroup, SearchBudget};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest power of `p` dividing `order`.
pub fn p_part(order: u128, p: u64) -> u128 {
    let p = p as u128;
    let mut out = 1;
    let mut n = order;
    while n > 0 && n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

/// The `p`-part of `g` in the decomposition of `⟨g⟩` into a `p`-group and
/// its complement.
pub fn p_component(g: &Permutation, p: u64) -> Permutation {
    let o = g.order();
    let mut q = o;
    while q % p == 0 {
        q /= p;
    }
    g.pow(q)
}

/// Fails with `CapExceeded` when a Sylow `p`-subgroup of `a` would be too
/// large to enumerate; the searches that follow need every element.
pub(crate) fn check_sylow_cap(a: &PermutationGroup, p: u64, cap: u128) -> Result<()> {
    let order = p_part(a.order(), p);
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    Ok(())
}

/// Random `p`-elements tried per round before falling back to `N_A(P)`.
const RANDOM_JOINS: usize = 64;

fn is_p_power(n: u128, p: u64) -> bool {
    p_part(n, p) == n
}

/// A Sylow `p`-subgroup of `a` by normalizer ascent from `seed` (or the
/// trivial group). Each round computes `N_A(P)` and adjoins a `p`-element
/// of it outside `P`; random elements are drawn from a ChaCha8 stream
/// seeded with `rng_seed`.
pub fn sylow_p_subgroup(
    a: &PermutationGroup,
    p: u64,
    seed: Option<&PermutationGroup>,
    budget: SearchBudget,
    rng_seed: u64,
) -> Result<PermutationGroup> {
    let target = p_part(a.order(), p);
    let mut current = match seed {
        Some(s) => {
            if !s.is_subgroup_of(a) {
                return Err(Error::NotASubgroup("Sylow seed is not contained in the group".into()));
            }
            if !is_p_power(s.order(), p) {
                return Err(Error::InvalidParameters(format!("seed of order {} is not a {p}-group", s.order())));
            }
            s.clone()
        }
        None => PermutationGroup::trivial(a.degree()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    'grow: while current.order() < target {
        // cheap rounds first: the normalizer backtrack is sensitive to labelling
        for _ in 0..RANDOM_JOINS {
            let h = p_component(&a.random_element(&mut rng), p);
            if h.is_identity() || current.contains(&h) {
                continue;
            }
            if !current.generators().iter().all(|c| is_p_power(c.mul(&h).order() as u128, p)) {
                continue;
            }
            let joined = current.join(&[h])?;
            if is_p_power(joined.order(), p) {
                current = joined;
                continue 'grow;
            }
        }
        let n = if current.is_trivial() { a.clone() } else { normalizer_in(a, &current, budget)? };
        let mut next = None;
        let candidates = n.generators().to_vec();
        for k in 0..candidates.len() + 4000 {
            let g = if k < candidates.len() { candidates[k].clone() } else { n.random_element(&mut rng) };
            let h = p_component(&g, p);
            if !h.is_identity() && !current.contains(&h) {
                next = Some(h);
                break;
            }
        }
        match next {
            Some(h) => current = current.join(&[h])?,
            None => {
                return Err(Error::SearchBudgetExceeded {
                    budget: budget.max_nodes,
                    detail: format!("Sylow ascent stalled at order {} of {target}", current.order()),
                })
            }
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> PermutationGroup {
        let cyc: Vec<u32> = (0..n as u32).collect();
        PermutationGroup::new(
            n,
            vec![Permutation::from_cycles(n, &[&[0, 1]]).unwrap(), Permutation::from_cycles(n, &[&cyc]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn sylow_of_symmetric_groups() {
        let s4 = sym(4);
        assert_eq!(sylow_p_subgroup(&s4, 3, None, SearchBudget::default(), 0).unwrap().order(), 3);
        assert_eq!(sylow_p_subgroup(&s4, 2, None, SearchBudget::default(), 0).unwrap().order(), 8);
        let s9 = sym(9);
        let p = sylow_p_subgroup(&s9, 3, None, SearchBudget::default(), 0).unwrap();
        assert_eq!(p.order(), 81);
        assert!(p.is_subgroup_of(&s9));
        assert_eq!(sylow_p_subgroup(&s9, 5, None, SearchBudget::default(), 0).unwrap().order(), 5);
        assert_eq!(sylow_p_subgroup(&s9, 11, None, SearchBudget::default(), 0).unwrap().order(), 1);
    }

    #[test]
    fn p_group_is_its_own_sylow() {
        let c9 = PermutationGroup::new(9, vec![Permutation::from_cycles(9, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]).unwrap()]).unwrap();
        let p = sylow_p_subgroup(&c9, 3, Some(&c9), SearchBudget::default(), 0).unwrap();
        assert!(p.same_group(&c9));
    }
}
