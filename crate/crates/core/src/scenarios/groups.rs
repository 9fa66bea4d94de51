use super::{Recorder, Source, VerifyOptions};
use crate::error::Result;
use crate::groups::{split_metacyclic_group, xu_zhang_group, FiniteGroup, XuZhangParams};

/// Primes and bound on `r + s + t + u` for the presentation sweep.
const SWEEP_PRIMES: [u64; 2] = [3, 5];
const SWEEP_BOUND: u32 = 4;
/// Largest order checked exhaustively for the `p^ℓ`-abelian identity.
const PK_MAX_ORDER: usize = 729;

fn label(q: &XuZhangParams) -> String {
    format!("G_{}({},{},{},{})", q.p, q.r, q.s, q.t, q.u)
}

fn sweep() -> Vec<XuZhangParams> {
    SWEEP_PRIMES.iter().flat_map(|&p| XuZhangParams::sweep(p, SWEEP_BOUND)).collect()
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

pub(super) fn xu_zhang_invariants(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let cap = opts.group_cap();
    for q in sweep() {
        let name = label(&q);
        let Some(g) = rec.attempt(format!("{name} build"), xu_zhang_group(q, cap)) else { continue };
        let p = q.p as u128;
        rec.eq(format!("{name} |G|"), Source::Claim, p.pow(q.log_order()), g.order() as u128);
        rec.eq(format!("{name} exp"), Source::Claim, p.pow(q.log_exponent()), g.exponent() as u128);
        rec.eq(format!("{name} |G'|"), Source::Claim, p.pow(q.log_derived()), g.derived_subgroup().order() as u128);
        if let Some(w) = rec.attempt(format!("{name} split search"), g.is_split_metacyclic(cap)) {
            rec.eq(format!("{name} split iff stu=0"), Source::Claim, q.is_split(), w.is_some());
        }
    }
    Ok(())
}

pub(super) fn omega1_structure(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let cap = opts.group_cap();
    for q in sweep() {
        let name = label(&q);
        let Some(g) = rec.attempt(format!("{name} build"), xu_zhang_group(q, cap)) else { continue };
        if g.is_cyclic() {
            continue;
        }
        let omega = g.omega_s(q.p, 1)?;
        let sub = g.subgroup_as_group(&omega)?;
        // order p² and exponent p pins down C_p x C_p
        rec.eq(format!("{name} |Ω1|"), Source::Claim, (q.p * q.p) as usize, omega.order());
        rec.eq(format!("{name} exp Ω1"), Source::Claim, q.p, sub.exponent());
    }
    Ok(())
}

pub(super) fn pk_abelian(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    let cap = opts.group_cap();
    for q in sweep().into_iter().filter(|q| (q.p as usize).pow(q.log_order()) <= PK_MAX_ORDER) {
        let name = label(&q);
        let g = xu_zhang_group(q, cap)?;
        let ell = log_p(g.derived_subgroup().order() as u64, q.p);
        let ok = g.is_pk_abelian(q.p, ell)?;
        rec.holds(format!("{name} p^{ell}-abelian"), Source::Claim, ok);
    }
    Ok(())
}

/// Every `e` with `e^n ≡ 1 (mod m)`, including the abelian case `e = 1`.
fn admissible_exponents(m: u64, n: u64) -> Vec<u64> {
    (1..m).filter(|&e| crate::perm::gcd(e, m) == 1 && crate::groups::pow_mod(e, n, m) == 1).collect()
}

fn complement_sweep(g: &FiniteGroup, name: &str, rec: &mut Recorder) -> Result<()> {
    let sigma = g.pair_id(1, 0);
    let mask = g.subgroup(&[sigma]).mask(g.order());
    let (mut tried, mut found, mut complements) = (0usize, 0usize, 0usize);
    for x in 1..g.order() as u32 {
        let o = g.element_order(x);
        // ⟨x⟩ ∩ ⟨σ⟩ = 1 iff the order-p element of ⟨x⟩ lies outside ⟨σ⟩
        let p = g.prime_power().map_or(o, |(p, _)| p);
        if mask[g.pow(x, o / p) as usize] {
            continue;
        }
        tried += 1;
        match g.find_order_pn_overgroup(sigma, x) {
            Ok(w) => {
                let ok = g.element_order(w.tau) as usize * g.element_order(sigma) as usize == g.order()
                    && g.subgroup(&[w.tau]).contains(x);
                if !ok {
                    rec.holds(format!("{name} witness for {x}"), Source::Definition, false);
                }
                found += 1;
                complements += w.complement as usize;
            }
            Err(e) => rec.error(format!("{name} g={x}"), &e),
        }
    }
    rec.eq(format!("{name} overgroups found"), Source::Claim, tried, found);
    rec.eq(format!("{name} complement flags"), Source::Oracle, found, complements);
    Ok(())
}

pub(super) fn complement_existence(opts: &VerifyOptions, rec: &mut Recorder) -> Result<()> {
    for (m, n) in [(27u64, 9u64), (9, 3)] {
        for e in admissible_exponents(m, n) {
            let g = split_metacyclic_group(m, n, e, opts.group_cap())?;
            complement_sweep(&g, &format!("C{m}:C{n}[e={e}]"), rec)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_of_order_dividing_n() {
        assert_eq!(admissible_exponents(9, 3), vec![1, 4, 7]);
        assert_eq!(admissible_exponents(27, 9).len(), 9);
    }

    #[test]
    fn p_logs() {
        assert_eq!(log_p(1, 3), 0);
        assert_eq!(log_p(243, 3), 5);
    }
}
