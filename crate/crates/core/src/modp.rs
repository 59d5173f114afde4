//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used only for randomized probes (rank tests, gcd-triviality filters);
//! symbolic results never depend on a modular computation alone.

use crate::poly::Poly;
use crate::vars::VarId;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Integer;
use std::collections::BTreeMap;

pub const P: u64 = (1u64 << 61) - 1;

#[inline]
fn reduce122(x: u128) -> u64 {
    let lo = (x & P as u128) as u64;
    let hi = (x >> 61) as u64;
    let mut s = lo + hi;
    s = (s & P) + (s >> 61);
    if s >= P {
        s -= P;
    }
    s
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce122(a as u128 * b as u128)
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= P;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a % P != 0);
    pow(a, P - 2)
}

/// Square root modulo P (P = 3 mod 4), if `a` is a quadratic residue.
pub fn sqrt(a: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    let r = pow(a, 1u64 << 59); // (P+1)/4 = 2^59
    if mul(r, r) == a {
        Some(r)
    } else {
        None
    }
}

pub fn bigint_mod(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let m = n.mod_floor(&p);
    num::ToPrimitive::to_u64(&m).expect("reduced below 2^61")
}

/// Image of an exact rational; `None` when the denominator vanishes mod P.
pub fn rat_mod(r: &BigRational) -> Option<u64> {
    let d = bigint_mod(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul(bigint_mod(r.numer()), inv(d)))
}

/// Polynomial image at a point given as a dense slot table indexed by `VarId`.
pub fn eval_poly(p: &Poly, slots: &BTreeMap<VarId, u64>) -> Option<u64> {
    let mut sum = 0u64;
    for (m, c) in p.terms() {
        let mut prod = rat_mod(c)?;
        for &(v, e) in m.pairs() {
            let base = *slots.get(&v)?;
            prod = mul(prod, pow(base, e as u64));
        }
        sum = add(sum, prod);
    }
    Some(sum)
}

/// Tiny deterministic xorshift; good enough for probe points.
pub struct ProbeRng(u64);

impl ProbeRng {
    pub fn new(seed: u64) -> Self {
        ProbeRng(seed | 1)
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform-ish in [1, P-1].
    pub fn nonzero(&mut self) -> u64 {
        1 + self.next() % (P - 2)
    }
}

/// Modular filter for the multivariate gcd: evaluates all variables except
/// `v` at a random point and checks whether the univariate images are coprime.
/// A trivial image gcd proves the true gcd has degree zero in `v`, provided
/// neither leading coefficient vanishes at the point.
pub fn univariate_gcd_probe_is_trivial(a: &Poly, b: &Poly, v: VarId) -> bool {
    let mut rng = ProbeRng::new(0x9e3779b97f4a7c15);
    'attempt: for _ in 0..3 {
        let mut slots: BTreeMap<VarId, u64> = BTreeMap::new();
        for w in a.support().union(&b.support()) {
            if *w != v {
                slots.insert(*w, rng.nonzero());
            }
        }
        let ua = match univariate_image(a, v, &slots) {
            Some(u) => u,
            None => continue 'attempt,
        };
        let ub = match univariate_image(b, v, &slots) {
            Some(u) => u,
            None => continue 'attempt,
        };
        // leading coefficient must not vanish, otherwise the probe is inconclusive
        if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
            continue 'attempt;
        }
        return univariate_gcd_degree(ua, ub) == 0;
    }
    false
}

fn univariate_image(p: &Poly, v: VarId, slots: &BTreeMap<VarId, u64>) -> Option<Vec<u64>> {
    let d = p.degree_in(v) as usize;
    let mut coeffs = vec![0u64; d + 1];
    for (m, c) in p.terms() {
        let mut prod = rat_mod(c)?;
        let mut e_v = 0usize;
        for &(w, e) in m.pairs() {
            if w == v {
                e_v = e as usize;
            } else {
                prod = mul(prod, pow(*slots.get(&w)?, e as u64));
            }
        }
        coeffs[e_v] = add(coeffs[e_v], prod);
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Some(coeffs)
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    loop {
        if b.iter().all(|&c| c == 0) {
            return a.len().saturating_sub(1);
        }
        if b.len() > a.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // a := a mod b
        let lb = inv(*b.last().unwrap());
        while a.len() >= b.len() && a.iter().any(|&c| c != 0) {
            let shift = a.len() - b.len();
            let q = mul(*a.last().unwrap(), lb);
            for i in 0..b.len() {
                a[i + shift] = sub(a[i + shift], mul(q, b[i]));
            }
            while a.len() > 1 && *a.last().unwrap() == 0 {
                a.pop();
            }
            if a.len() < b.len() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = 123456789u64;
        assert_eq!(mul(a, inv(a)), 1);
        assert_eq!(add(P - 1, 1), 0);
        assert_eq!(sub(0, 1), P - 1);
    }

    #[test]
    fn sqrt_roundtrip() {
        let a = 987654321u64;
        let sq = mul(a, a);
        let r = sqrt(sq).unwrap();
        assert!(r == a || r == P - a);
    }

    #[test]
    fn rational_image() {
        use crate::poly::rat_frac;
        let half = rat_mod(&rat_frac(1, 2)).unwrap();
        assert_eq!(add(half, half), 1);
    }
}
