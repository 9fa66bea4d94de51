use serde::{Deserialize, Serialize};

use super::finite::{FiniteGroup, Presentation};
use crate::error::{Error, Result};
use crate::perm::gcd;

/// Parameters of the metacyclic p-group
/// `⟨a, b | a^{p^{r+s+u}} = 1, b^{p^{r+s+t}} = a^{p^{r+s}}, b^-1 a b = a^{1+p^r}⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XuZhangParams {
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub u: u32,
}

impl XuZhangParams {
    pub fn new(p: u64, r: u32, s: u32, t: u32, u: u32) -> Result<Self> {
        let params = XuZhangParams { p, r, s, t, u };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || !is_prime(self.p) {
            return Err(Error::InvalidParameters(format!("p = {} is not an odd prime", self.p)));
        }
        if self.r < 1 || self.r < self.u {
            return Err(Error::InvalidParameters(format!(
                "need r >= 1 and r >= u, got r = {}, u = {}",
                self.r, self.u
            )));
        }
        Ok(())
    }

    /// `log_p |G| = 2(r+s) + u + t`.
    pub fn log_order(&self) -> u32 {
        2 * (self.r + self.s) + self.u + self.t
    }

    pub fn log_exponent(&self) -> u32 {
        self.r + self.s + self.t + self.u
    }

    pub fn log_derived(&self) -> u32 {
        self.s + self.u
    }

    pub fn is_split(&self) -> bool {
        self.s * self.t * self.u == 0
    }

    /// All tuples with `r + s + t + u ≤ bound`, `r ≥ 1`, `r ≥ u`, in
    /// lexicographic order of `(r, s, t, u)`.
    pub fn sweep(p: u64, bound: u32) -> Vec<XuZhangParams> {
        let mut out = Vec::new();
        for r in 1..=bound {
            for s in 0..=bound - r {
                for t in 0..=bound - r - s {
                    for u in 0..=(bound - r - s - t).min(r) {
                        out.push(XuZhangParams { p, r, s, t, u });
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `m`; `None` when `a` is not a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let ord = multiplicative_order(a, m)?;
    Some(pow_mod(a, ord - 1, m))
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::OrderOverflow)
}

/// The metacyclic group with parameters `params`, on normal forms `a^i b^j`
/// (`i ∈ Z_{p^{r+s+u}}`, `j ∈ Z_{p^{r+s+t}}`), element id `i + p^{r+s+u}·j`.
pub fn xu_zhang_group(params: XuZhangParams, cap: usize) -> Result<FiniteGroup> {
    params.validate()?;
    let XuZhangParams { p, r, s, t, u } = params;
    let m = checked_pow(p, r + s + u)?;
    let n = checked_pow(p, r + s + t)?;
    let e = (1 + checked_pow(p, r)?) % m;
    let f = inverse_mod(e, m).ok_or_else(|| Error::InvalidParameters("1 + p^r is not a unit".into()))?;
    let wrap = checked_pow(p, r + s)? % m;
    FiniteGroup::metacyclic_law(
        m,
        n,
        f,
        wrap,
        Presentation { kind: "xu-zhang".into(), params: vec![p as i64, r as i64, s as i64, t as i64, u as i64] },
        cap,
    )
}

/// `C_M : C_N = ⟨σ, τ | σ^M = τ^N = 1, τ^-1 σ τ = σ^e⟩` on normal forms
/// `σ^i τ^j`, element id `i + M·j`.
pub fn split_metacyclic_group(m: u64, n: u64, e: u64, cap: usize) -> Result<FiniteGroup> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameters("orders must be positive".into()));
    }
    let f = inverse_mod(e, m).ok_or_else(|| Error::InvalidParameters(format!("{e} is not a unit mod {m}")))?;
    if pow_mod(e, n, m) != 1 % m {
        return Err(Error::InvalidParameters(format!("{e}^{n} is not 1 mod {m}")));
    }
    FiniteGroup::metacyclic_law(
        m,
        n,
        f,
        0,
        Presentation { kind: "split-metacyclic".into(), params: vec![m as i64, n as i64, e as i64] },
        cap,
    )
}

/// `⟨x, y, z | x^{p^{m-1}} = y^{p^n} = z^p = 1, y^-1 x y = x^λ, z central⟩`
/// on normal forms `y^i x^j z^k`, element id `i + p^n·(j + p^{m-1}·k)`.
pub fn mp_cayley_group(p: u64, m: u32, n: u32, lambda: u64, cap: usize) -> Result<FiniteGroup> {
    check_mp_cayley_params(p, m, n, lambda)?;
    let ny = checked_pow(p, n)?;
    let nx = checked_pow(p, m - 1)?;
    if pow_mod(lambda, ny, nx) != 1 % nx {
        return Err(Error::InvalidParameters(format!("{lambda}^{ny} is not 1 mod {nx}")));
    }
    FiniteGroup::triple_law(
        ny,
        nx,
        p,
        lambda,
        Presentation { kind: "mp-cayley".into(), params: vec![p as i64, m as i64, n as i64, lambda as i64] },
        cap,
    )
}

/// Checks `p` odd prime, `m ≥ n + 2 ≥ 3` and `λ` of order `p^{n+1}` mod `p^m`.
pub fn check_mp_cayley_params(p: u64, m: u32, n: u32, lambda: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameters(format!("p = {p} is not an odd prime")));
    }
    if n < 1 || m < n + 2 {
        return Err(Error::InvalidParameters(format!("need m >= n + 2 >= 3, got m = {m}, n = {n}")));
    }
    let pm = checked_pow(p, m)?;
    let want = checked_pow(p, n + 1)?;
    match multiplicative_order(lambda, pm) {
        Some(o) if o == want => Ok(()),
        Some(o) => Err(Error::InvalidParameters(format!(
            "lambda = {lambda} has order {o} mod {pm}, expected {want}"
        ))),
        None => Err(Error::InvalidParameters(format!("lambda = {lambda} is not a unit mod {pm}"))),
    }
}

/// All `λ ∈ Z_{p^m}^*` of multiplicative order `p^{n+1}`, ascending.
pub fn admissible_lambdas(p: u64, m: u32, n: u32) -> Vec<u64> {
    let pm = p.pow(m);
    let want = p.pow(n + 1);
    (1..pm).filter(|&l| multiplicative_order(l, pm) == Some(want)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_GROUP_CAP;

    #[test]
    fn xu_zhang_relations_hold() {
        for params in XuZhangParams::sweep(3, 3) {
            let g = xu_zhang_group(params, DEFAULT_GROUP_CAP).unwrap();
            g.validate().unwrap();
            let XuZhangParams { p, r, s, t, u } = params;
            let (a, b) = (g.pair_id(1, 0), g.pair_id(0, 1));
            assert_eq!(g.pow(a, p.pow(r + s + u)), 0);
            assert_eq!(g.pow(b, p.pow(r + s + t)), g.pow(a, p.pow(r + s)));
            assert_eq!(g.conj(a, b), g.pow(a, 1 + p.pow(r)));
            assert_eq!(g.order() as u64, p.pow(params.log_order()));
        }
    }

    #[test]
    fn xu_zhang_small_cases() {
        let g = xu_zhang_group(XuZhangParams::new(3, 1, 1, 0, 0).unwrap(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 81);
        // r = 1, s = t = u = 0 collapses to C3 x C3
        let g = xu_zhang_group(XuZhangParams::new(3, 1, 0, 0, 0).unwrap(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_abelian());
        assert!(!g.is_cyclic());
        assert!((0..9).all(|x| g.pow(x, 3) == 0));
        assert!(XuZhangParams::new(3, 0, 1, 0, 0).is_err());
        assert!(XuZhangParams::new(3, 1, 0, 0, 2).is_err());
        assert!(XuZhangParams::new(9, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn cap_guard() {
        let params = XuZhangParams::new(5, 4, 0, 0, 0).unwrap();
        assert!(matches!(xu_zhang_group(params, DEFAULT_GROUP_CAP), Err(Error::CapExceeded { .. })));
        assert_eq!(xu_zhang_group(params, 400_000).unwrap().order(), 390_625);
    }

    #[test]
    fn split_metacyclic_relations() {
        let g = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        g.validate().unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        let (sigma, tau) = (g.pair_id(1, 0), g.pair_id(0, 1));
        assert_eq!(g.conj(sigma, tau), g.pow(sigma, 4));
        let c5 = split_metacyclic_group(5, 1, 1, DEFAULT_GROUP_CAP).unwrap();
        assert!(c5.is_cyclic());
        let big = split_metacyclic_group(27, 9, 4, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(big.order(), 243);
        assert!(split_metacyclic_group(9, 3, 3, DEFAULT_GROUP_CAP).is_err());
        assert!(split_metacyclic_group(9, 2, 4, DEFAULT_GROUP_CAP).is_err());
    }

    #[test]
    fn mp_cayley_relations() {
        let g = mp_cayley_group(3, 3, 1, 4, DEFAULT_GROUP_CAP).unwrap();
        g.validate().unwrap();
        assert_eq!(g.order(), 81);
        let x = g.triple_id(0, 1, 0);
        let y = g.triple_id(1, 0, 0);
        let z = g.triple_id(0, 0, 1);
        assert_eq!(g.pow(x, 9), 0);
        assert_eq!(g.pow(y, 3), 0);
        assert_eq!(g.pow(z, 3), 0);
        assert_eq!(g.conj(x, y), g.pow(x, 4));
        assert!((0..81).all(|e| g.mul(z, e) == g.mul(e, z)));
        assert_eq!(multiplicative_order(4, 27), Some(9));
        assert_eq!(pow_mod(4, 3, 27), 10);
        assert!(mp_cayley_group(3, 3, 1, 10, DEFAULT_GROUP_CAP).is_err());
        assert!(mp_cayley_group(3, 2, 1, 4, DEFAULT_GROUP_CAP).is_err());
    }

    #[test]
    fn lambdas_of_order_nine_mod_27() {
        assert_eq!(admissible_lambdas(3, 3, 1), vec![4, 7, 13, 16, 22, 25]);
    }
}
