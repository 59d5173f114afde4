//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are keyed by [`Monomial`] in a `BTreeMap`, so iteration order (and
//! therefore rendering, hashing and equality) is canonical. Coefficient zero
//! is never stored; the zero polynomial has an empty term map.

use crate::vars::{VarId, VarSpace};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent map of a single term. Sorted by variable id, zero exponents removed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match merged.last_mut() {
                Some((w, acc)) if *w == v => *acc += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { exps: merged }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp_of(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Componentwise division; `None` when `other` does not divide `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut keep = e;
            while j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                if other.exps[j].1 > e {
                    return None;
                }
                keep = e - other.exps[j].1;
                j += 1;
            }
            if keep > 0 {
                out.push((v, keep));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.try_div(self).is_some()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1.max(other.exps[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Graded-lex comparison (total degree first, then smaller ids weigh more).
    /// Unlike the derived `Ord`, this is a proper multiplicative monomial order.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // earlier variable present only on one side: that side is larger
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

/// Sparse multivariate polynomial with `BigRational` coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rat::one());
        Poly { terms }
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in pairs {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exp_of(v)).max().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exp_of(v) > 0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp_of(v);
            if e == 0 {
                continue;
            }
            let mut pairs: Vec<(VarId, u32)> = m.pairs().to_vec();
            for p in pairs.iter_mut() {
                if p.0 == v {
                    p.1 -= 1;
                }
            }
            out.add_term(Monomial::from_pairs(pairs), c * rat(e as i64));
        }
        out
    }

    /// Exact evaluation; the assignment must cover every variable of `self`.
    pub fn eval_rat(&self, assign: &BTreeMap<VarId, Rat>) -> Rat {
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut prod = c.clone();
            for &(v, e) in m.pairs() {
                let base = assign.get(&v).expect("assignment covers all variables");
                for _ in 0..e {
                    prod *= base;
                }
            }
            sum += prod;
        }
        sum
    }

    /// Floating-point evaluation against a dense slot table indexed by `VarId`.
    pub fn eval_f64(&self, slots: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let mut prod = rat_to_f64(c);
            for &(v, e) in m.pairs() {
                prod *= slots[v.idx()].powi(e as i32);
            }
            sum += prod;
        }
        sum
    }

    /// Substitute `v := q`, expanding by Horner's rule in `v`.
    pub fn substitute_poly(&self, v: VarId, q: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.as_univariate(v);
        let mut out = Poly::zero();
        for (deg, coeff) in coeffs.iter().rev() {
            // iterating degrees descending
            let _ = deg;
            out = out.mul(q).add(coeff);
        }
        // as_univariate returns ascending degrees with gaps filled
        out
    }

    /// Dense list of univariate coefficients in `v`, ascending degree 0..=deg.
    pub fn as_univariate(&self, v: VarId) -> Vec<(u32, Poly)> {
        let d = self.degree_in(v);
        let mut coeffs: Vec<Poly> = vec![Poly::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp_of(v);
            let rest = Monomial::from_pairs(m.pairs().iter().copied().filter(|&(w, _)| w != v).collect());
            coeffs[e as usize].add_term(rest, c.clone());
        }
        coeffs.into_iter().enumerate().map(|(i, p)| (i as u32, p)).collect()
    }

    fn from_univariate(coeffs: &[(u32, Poly)], v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs {
            for (m, r) in &c.terms {
                out.add_term(m.mul(&Monomial::var_pow(v, *e)), r.clone());
            }
        }
        out
    }

    /// Leading term under graded-lex (used for exact division and sqrt).
    fn lead_grlex(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_grlex(b.0))
    }

    /// Exact division; `None` when the division leaves a remainder.
    pub fn try_divexact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        let (dm, dc) = d.lead_grlex().expect("nonzero divisor");
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        let mut steps = 0usize;
        while !rem.is_zero() {
            steps += 1;
            if steps > 200_000 {
                return None;
            }
            let (rm, rc) = rem.lead_grlex().expect("nonzero remainder");
            let q = rm.try_div(&dm)?;
            let qc = rc / &dc;
            let t = Poly::monomial(q, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn divexact(&self, d: &Poly) -> Poly {
        self.try_divexact(d).expect("exact division")
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients; carries the sign of the grlex-leading term.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num::Integer::gcd(&num_gcd, &c.numer().abs());
            den_lcm = num::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.lead_grlex().expect("nonzero").1.is_negative() {
            content = -content;
        }
        content
    }

    /// `self` divided by its content: integer coefficients, gcd 1, positive lead.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&(Rat::one() / c))
    }

    /// Content with respect to `v`: the gcd of the univariate coefficients.
    fn content_in(&self, v: VarId) -> Poly {
        let mut g = Poly::zero();
        for (_, c) in self.as_univariate(v) {
            if c.is_zero() {
                continue;
            }
            g = poly_gcd(&g, &c);
            if let Some(k) = g.as_constant() {
                if k.is_one() {
                    return g;
                }
            }
        }
        g
    }

    /// Exact square root, when one exists.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.lead_grlex().expect("nonzero");
        if lm.pairs().iter().any(|&(_, e)| e % 2 != 0) || lc.is_negative() {
            return None;
        }
        let root_m = Monomial::from_pairs(lm.pairs().iter().map(|&(v, e)| (v, e / 2)).collect());
        let root_c = rat_sqrt(lc)?;
        let mut root = Poly::monomial(root_m, root_c);
        let mut steps = 0usize;
        loop {
            let rem = self.sub(&root.mul(&root));
            if rem.is_zero() {
                return Some(root);
            }
            steps += 1;
            if steps > 10_000 {
                return None;
            }
            let (rm, rc) = rem.lead_grlex().expect("nonzero remainder");
            let (bm, bc) = root.lead_grlex().expect("nonzero root");
            let q = rm.try_div(bm)?;
            let t = Poly::monomial(q, rc / (rat(2) * bc));
            let next = root.add(&t);
            if next == root {
                return None;
            }
            root = next;
        }
    }

    /// Squarefree part: repeated factors collapsed to multiplicity one.
    /// In characteristic zero this is `p / gcd(p, dp/dv_1, ..., dp/dv_n)`.
    pub fn squarefree_part(&self) -> Poly {
        let p = self.primitive();
        if p.is_constant() {
            return p;
        }
        let mut g = p.clone();
        for v in p.support() {
            g = poly_gcd(&g, &p.differentiate(v));
            if g.as_constant().is_some() {
                return p;
            }
        }
        p.divexact(&g).primitive()
    }

    /// Canonical text rendering. Terms descend by graded-lex; factors inside a
    /// monomial ascend by variable id.
    pub fn render(&self, vs: &VarSpace) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp_grlex(a.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(render_rat(&abs));
            }
            // parameters first, then everything else by interning order
            let mut pairs: Vec<(VarId, u32)> = m.pairs().to_vec();
            pairs.sort_by_key(|&(v, _)| {
                (
                    !matches!(vs.kind(v), crate::vars::VarKind::Param),
                    v,
                )
            });
            for (v, e) in pairs {
                if e == 1 {
                    factors.push(vs.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", vs.name(v), e));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = bigint_to_f64(r.numer());
    let d = bigint_to_f64(r.denom());
    n / d
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    // num's ToPrimitive handles magnitudes beyond i64
    num::ToPrimitive::to_f64(b).unwrap_or(f64::NAN)
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Greatest common divisor, normalized primitive with positive leading
/// coefficient. `gcd(p, 0)` is the normalized `p`; common rational content is
/// discarded (constants are units over the rationals).
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let vars_a = a.support();
    let vars_b = b.support();
    let common: Vec<VarId> = vars_a.intersection(&vars_b).copied().collect();
    if common.is_empty() {
        return Poly::one();
    }
    // main variable: smallest combined degree keeps the PRS short
    let v = *common
        .iter()
        .min_by_key(|&&v| a.degree_in(v).min(b.degree_in(v)))
        .expect("nonempty");

    let cont_a = a.content_in(v);
    let cont_b = b.content_in(v);
    let cont_gcd = poly_gcd(&cont_a, &cont_b);
    let pa = a.divexact(&cont_a);
    let pb = b.divexact(&cont_b);

    let pp_gcd = if crate::modp::univariate_gcd_probe_is_trivial(&pa, &pb, v) {
        Poly::one()
    } else {
        prs_gcd(&pa, &pb, v)
    };
    cont_gcd.mul(&pp_gcd).primitive()
}

/// Primitive pseudo-remainder sequence in the main variable `v`.
fn prs_gcd(a: &Poly, b: &Poly, v: VarId) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if g.is_zero() {
            let out = f.primitive();
            return if out.degree_in(v) == 0 { Poly::one() } else { out };
        }
        let r = pseudo_rem(&f, &g, v);
        f = g;
        g = primitive_in(&r, v);
    }
}

fn primitive_in(p: &Poly, v: VarId) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = p.content_in(v);
    if c.is_zero() {
        return Poly::zero();
    }
    p.divexact(&c).primitive()
}

/// Pseudo-remainder of `f` by `g` in `v`: `lc(g)^(df-dg+1) * f mod g`.
fn pseudo_rem(f: &Poly, g: &Poly, v: VarId) -> Poly {
    let dg = g.degree_in(v);
    let g_uni = g.as_univariate(v);
    let lc_g = g_uni[dg as usize].1.clone();
    let mut r = f.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < dg {
            return r;
        }
        let r_uni = r.as_univariate(v);
        let lc_r = r_uni[dr as usize].1.clone();
        // r := lc_g * r - lc_r * v^(dr-dg) * g
        let shifted: Vec<(u32, Poly)> = g_uni
            .iter()
            .map(|(e, c)| (e + dr - dg, c.mul(&lc_r)))
            .collect();
        let sub = Poly::from_univariate(&shifted, v);
        r = r.mul(&lc_g).sub(&sub);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::VarKind;
    use proptest::prelude::*;

    fn space3() -> (VarSpace, VarId, VarId, VarId) {
        let mut vs = VarSpace::new();
        let x = vs.intern("x", VarKind::State).unwrap();
        let y = vs.intern("y", VarKind::State).unwrap();
        let z = vs.intern("z", VarKind::State).unwrap();
        (vs, x, y, z)
    }

    #[test]
    fn add_cancels() {
        let (_, x, _, _) = space3();
        // (x+1) + (x-1) = 2x
        let a = Poly::var(x).add(&Poly::one());
        let b = Poly::var(x).sub(&Poly::one());
        let sum = a.add(&b);
        assert_eq!(sum, Poly::var(x).scale(&rat(2)));
    }

    #[test]
    fn difference_of_squares() {
        let (_, x, y, _) = space3();
        let a = Poly::var(x).add(&Poly::var(y));
        let b = Poly::var(x).sub(&Poly::var(y));
        let prod = a.mul(&b);
        let expect = Poly::var(x).pow(2).sub(&Poly::var(y).pow(2));
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let (_, x, y, _) = space3();
        let p = Poly::var(x).pow(3).add(&Poly::var(y).scale(&rat_frac(7, 2)));
        assert!(p.mul(&Poly::zero()).is_zero());
    }

    #[test]
    fn gcd_basic() {
        let (_, x, _, _) = space3();
        // gcd(x^2-1, x-1) = x-1
        let a = Poly::var(x).pow(2).sub(&Poly::one());
        let b = Poly::var(x).sub(&Poly::one());
        assert_eq!(poly_gcd(&a, &b), b);
        // gcd(p, 0) = normalized p
        assert_eq!(poly_gcd(&a, &Poly::zero()), a.primitive());
    }

    #[test]
    fn gcd_with_content_factor() {
        let (_, x, y, z) = space3();
        let vs = VarSpace::new();
        let _ = vs;
        // gcd((x+y)^2 z, (x+y) w) with w := z here replaced by a distinct var
        let s = Poly::var(x).add(&Poly::var(y));
        let a = s.pow(2).mul(&Poly::var(z));
        let b = s.mul(&Poly::var(x)); // (x+y)*x, coprime cofactors
        let g = poly_gcd(&a, &b);
        assert_eq!(g, s.primitive());
        // both inputs divide exactly
        assert!(a.try_divexact(&g).is_some());
        assert!(b.try_divexact(&g).is_some());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let (_, x, _, _) = space3();
        assert!(Poly::int(5).differentiate(x).is_zero());
        // d/dx (a x^2) with a as another var
        let (_, x, a, _) = space3();
        let p = Poly::var(a).mul(&Poly::var(x).pow(2));
        let d = p.differentiate(x);
        assert_eq!(d, Poly::var(a).mul(&Poly::var(x)).scale(&rat(2)));
    }

    #[test]
    fn sqrt_recovers_square() {
        let (_, x, y, _) = space3();
        let p = Poly::var(x)
            .add(&Poly::var(y).scale(&rat(3)))
            .add(&Poly::one());
        let sq = p.mul(&p);
        assert_eq!(sq.sqrt().unwrap().primitive(), p.primitive());
        assert!(Poly::var(x).sqrt().is_none());
    }

    #[test]
    fn squarefree_strips_multiplicity() {
        let (_, x, y, _) = space3();
        let p = Poly::var(x).add(&Poly::var(y));
        let q = p.pow(3).mul(&Poly::var(x).sub(&Poly::one()));
        let sf = q.squarefree_part();
        let expect = p.mul(&Poly::var(x).sub(&Poly::one())).primitive();
        assert_eq!(sf, expect);
    }

    #[test]
    fn render_is_deterministic() {
        let (vs, x, y, _) = space3();
        let p = Poly::var(x)
            .pow(2)
            .sub(&Poly::var(y).scale(&rat(2)))
            .add(&Poly::one());
        assert_eq!(p.render(&vs), "x^2 - 2*y + 1");
    }

    fn arb_poly(vars: Vec<VarId>) -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (
                prop::collection::vec((0..vars.len(), 0u32..3), 0..3),
                -5i64..6,
            ),
            0..5,
        )
        .prop_map(move |raw| {
            let mut p = Poly::zero();
            for (pairs, c) in raw {
                let mono = Monomial::from_pairs(
                    pairs.into_iter().map(|(i, e)| (vars[i], e)).collect::<Vec<_>>(),
                );
                p.add_term(mono, rat(c));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(
            a in arb_poly(vec![VarId(0), VarId(1), VarId(2)]),
            b in arb_poly(vec![VarId(0), VarId(1), VarId(2)]),
            c in arb_poly(vec![VarId(0), VarId(1), VarId(2)]),
        ) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn product_rule(
            a in arb_poly(vec![VarId(0), VarId(1)]),
            b in arb_poly(vec![VarId(0), VarId(1)]),
        ) {
            let v = VarId(0);
            let lhs = a.mul(&b).differentiate(v);
            let rhs = a.differentiate(v).mul(&b).add(&a.mul(&b.differentiate(v)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gcd_divides_both(
            a in arb_poly(vec![VarId(0), VarId(1)]),
            b in arb_poly(vec![VarId(0), VarId(1)]),
        ) {
            let g = poly_gcd(&a, &b);
            if !a.is_zero() {
                prop_assert!(a.try_divexact(&g).is_some());
            }
            if !b.is_zero() {
                prop_assert!(b.try_divexact(&g).is_some());
            }
        }

        #[test]
        fn eval_is_ring_hom(
            a in arb_poly(vec![VarId(0), VarId(1)]),
            b in arb_poly(vec![VarId(0), VarId(1)]),
            x in -4i64..5,
            y in -4i64..5,
        ) {
            let mut assign = BTreeMap::new();
            assign.insert(VarId(0), rat(x));
            assign.insert(VarId(1), rat(y));
            prop_assert_eq!(
                a.mul(&b).eval_rat(&assign),
                a.eval_rat(&assign) * b.eval_rat(&assign)
            );
            prop_assert_eq!(
                a.add(&b).eval_rat(&assign),
                a.eval_rat(&assign) + b.eval_rat(&assign)
            );
        }
    }
}
