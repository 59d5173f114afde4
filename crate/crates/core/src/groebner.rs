//! Monomial orders, polynomial reduction, Buchberger's algorithm, ideal
//! saturation and block elimination.
//!
//! Bases are computed over a coefficient field that is either the rationals or
//! a rational-function field in designated parameter variables. Internally the
//! arithmetic is fraction-free: coefficients are kept as polynomials in the
//! parameters, reductions cross-multiply by leading coefficients, and every
//! basis element is normalized to primitive form (coefficient gcd removed,
//! positive leading content). Over the plain rationals this degrades to exact
//! division, so public results there are honest normal forms.

use crate::error::{Error, Result};
use crate::poly::{poly_gcd, Monomial, Poly, Rat};
use crate::vars::{VarId, VarKind, VarSpace};
use num::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// Pair-reduction and wall-time caps for one Gröbner-basis call.
#[derive(Clone, Debug)]
pub struct Budget {
    pub pair_cap: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            pair_cap: 100_000,
            deadline: Some(Instant::now() + Duration::from_secs(600)),
        }
    }
}

impl Budget {
    pub fn with_seconds(secs: u64) -> Self {
        Budget {
            pair_cap: 100_000,
            deadline: Some(Instant::now() + Duration::from_secs(secs)),
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            pair_cap: usize::MAX,
            deadline: None,
        }
    }

    fn check(&self, used_pairs: usize, stage: &str) -> Result<()> {
        if used_pairs > self.pair_cap {
            return Err(Error::BudgetExceeded(format!("{stage}: pair cap")));
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::BudgetExceeded(format!("{stage}: wall time")));
            }
        }
        Ok(())
    }
}

/// Total, multiplicative, well-founded order on ring monomials.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Eliminates the first `elim` ring variables: graded-reverse-lex on the
    /// leading block decides first, then graded-reverse-lex on the rest.
    Block { elim: usize },
}

/// Ring-variable list (position 0 has the highest precedence) plus the order.
/// Variables absent from the list are coefficient-field parameters.
#[derive(Clone, Debug)]
pub struct GbContext {
    pub ring_vars: Vec<VarId>,
    pub order: MonomialOrder,
    pos: BTreeMap<VarId, usize>,
}

impl GbContext {
    pub fn new(ring_vars: Vec<VarId>, order: MonomialOrder) -> Self {
        let pos = ring_vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        GbContext {
            ring_vars,
            order,
            pos,
        }
    }

    pub fn is_ring_var(&self, v: VarId) -> bool {
        self.pos.contains_key(&v)
    }

    fn cmp_expo(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self.order {
            MonomialOrder::Lex => lex_cmp(a, b),
            MonomialOrder::GrevLex => grevlex_cmp(a, b),
            MonomialOrder::Block { elim } => {
                match grevlex_cmp(&a[..elim], &b[..elim]) {
                    Ordering::Equal => grevlex_cmp(&a[elim..], &b[elim..]),
                    ord => ord,
                }
            }
        }
    }
}

fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            // smaller exponent in the least significant position wins
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

type Expo = Box<[u32]>;

fn expo_mul(a: &[u32], b: &[u32]) -> Expo {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn expo_div(a: &[u32], b: &[u32]) -> Option<Expo> {
    let mut out = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b.iter()) {
        if y > x {
            return None;
        }
        out.push(x - y);
    }
    Some(out.into_boxed_slice())
}

fn expo_lcm(a: &[u32], b: &[u32]) -> Expo {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

fn expo_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

/// Internal representation: terms sorted descending under the context order,
/// coefficients are polynomials in the parameter variables.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Expo, Poly)>,
}

impl GPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> (&Expo, &Poly) {
        let (e, c) = &self.terms[0];
        (e, c)
    }

    fn scale_coeff(&mut self, c: &Poly) {
        for (_, cc) in self.terms.iter_mut() {
            *cc = cc.mul(c);
        }
    }

    /// Removes the common coefficient content and fixes the lead sign.
    fn primitive(mut self) -> GPoly {
        if self.terms.is_empty() {
            return self;
        }
        let mut g = Poly::zero();
        for (_, c) in &self.terms {
            g = poly_gcd(&g, c);
            if g.as_constant().map(|k| k.is_one()).unwrap_or(false) {
                break;
            }
        }
        if g.as_constant().is_none() || !g.as_constant().unwrap().is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c = c.divexact(&g);
            }
        }
        // rational content: make every coefficient integral and coprime
        let mut content: Option<Rat> = None;
        for (_, c) in &self.terms {
            let cc = num::Signed::abs(&c.content());
            content = Some(match content {
                None => cc,
                Some(acc) => {
                    // gcd of rational contents
                    let n = num::Integer::gcd(acc.numer(), cc.numer());
                    let d = num::Integer::lcm(acc.denom(), cc.denom());
                    Rat::new(n, d)
                }
            });
        }
        let mut content = content.expect("nonzero poly");
        if content.is_zero() {
            content = Rat::one();
        }
        if self.terms[0].1.content() < Rat::zero() {
            content = -content;
        }
        if !content.is_one() {
            let inv = Rat::one() / content;
            for (_, c) in self.terms.iter_mut() {
                *c = c.scale(&inv);
            }
        }
        self
    }
}

fn to_gpoly(p: &Poly, ctx: &GbContext) -> GPoly {
    let n = ctx.ring_vars.len();
    let mut acc: BTreeMap<Expo, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut expo = vec![0u32; n];
        let mut param_pairs = Vec::new();
        for &(v, e) in m.pairs() {
            match ctx.pos.get(&v) {
                Some(&i) => expo[i] = e,
                None => param_pairs.push((v, e)),
            }
        }
        let key: Expo = expo.into_boxed_slice();
        acc.entry(key)
            .or_insert_with(Poly::zero)
            .add_term(Monomial::from_pairs(param_pairs), c.clone());
    }
    let mut terms: Vec<(Expo, Poly)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by(|a, b| ctx.cmp_expo(&b.0, &a.0));
    GPoly { terms }
}

fn from_gpoly(p: &GPoly, ctx: &GbContext) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in &p.terms {
        let ring_mono = Monomial::from_pairs(
            e.iter()
                .enumerate()
                .filter(|&(_, &x)| x > 0)
                .map(|(i, &x)| (ctx.ring_vars[i], x))
                .collect(),
        );
        for (pm, pc) in c.terms() {
            out.add_term(ring_mono.mul(pm), pc.clone());
        }
    }
    out
}

fn gpoly_sub(a: &GPoly, b: &GPoly, ctx: &GbContext) -> GPoly {
    let mut out: Vec<(Expo, Poly)> = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        match ctx.cmp_expo(&a.terms[i].0, &b.terms[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b.terms[j].0.clone(), b.terms[j].1.neg()));
                j += 1;
            }
            Ordering::Equal => {
                let c = a.terms[i].1.sub(&b.terms[j].1);
                if !c.is_zero() {
                    out.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.terms[i..]);
    for (e, c) in &b.terms[j..] {
        out.push((e.clone(), c.neg()));
    }
    GPoly { terms: out }
}

fn gpoly_mul_term(p: &GPoly, e: &[u32], c: &Poly) -> GPoly {
    GPoly {
        terms: p
            .terms
            .iter()
            .map(|(pe, pc)| (expo_mul(pe, e), pc.mul(c)))
            .collect(),
    }
}

/// Full reduction of `p` by `basis`. Fraction-free: the result equals
/// `u * p mod <basis>` for some unit `u` of the coefficient field (u = 1 when
/// every used leading coefficient is constant, in particular over Q).
fn reduce_full(p: &GPoly, basis: &[GPoly], ctx: &GbContext) -> GPoly {
    let mut rest = p.clone();
    let mut done: Vec<(Expo, Poly)> = Vec::new();
    'outer: while !rest.is_zero() {
        let (le, lc) = {
            let (e, c) = rest.lead();
            (e.clone(), c.clone())
        };
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (ge, gc) = g.lead();
            if let Some(q) = expo_div(&le, ge) {
                if let Some(k) = gc.as_constant() {
                    // constant leading coefficient: exact division, no blowup
                    let factor = lc.scale(&(Rat::one() / k));
                    let scaled = gpoly_mul_term(g, &q, &factor);
                    rest = gpoly_sub(&rest, &scaled, ctx);
                } else {
                    // cross-multiply; previously emitted terms must scale too
                    let mut scaled_rest = rest.clone();
                    scaled_rest.scale_coeff(gc);
                    let sub = gpoly_mul_term(g, &q, &lc);
                    rest = gpoly_sub(&scaled_rest, &sub, ctx);
                    for (_, c) in done.iter_mut() {
                        *c = c.mul(gc);
                    }
                }
                continue 'outer;
            }
        }
        // head is irreducible; emit it
        let (e, c) = rest.terms.remove(0);
        done.push((e, c));
    }
    GPoly { terms: done }
}

fn s_poly(f: &GPoly, g: &GPoly, ctx: &GbContext) -> GPoly {
    let (fe, fc) = f.lead();
    let (ge, gc) = g.lead();
    let l = expo_lcm(fe, ge);
    let qf = expo_div(&l, fe).expect("lcm divisible");
    let qg = expo_div(&l, ge).expect("lcm divisible");
    let a = gpoly_mul_term(f, &qf, gc);
    let b = gpoly_mul_term(g, &qg, fc);
    gpoly_sub(&a, &b, ctx)
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Expo,
}

/// Gebauer-Möller update: prune the pending pair set against the new element.
fn update_pairs(pairs: &mut Vec<Pair>, basis: &[GPoly], t: usize, _ctx: &GbContext) {
    let lt = basis[t].lead().0.clone();
    let mut fresh: Vec<Pair> = (0..t)
        .filter(|&i| !basis[i].is_zero())
        .map(|i| Pair {
            i,
            j: t,
            lcm: expo_lcm(basis[i].lead().0, &lt),
        })
        .collect();

    // M criterion: drop (i,t) when some (j,t) has a properly dividing lcm
    let snapshot: Vec<Expo> = fresh.iter().map(|p| p.lcm.clone()).collect();
    fresh.retain(|p| {
        !snapshot.iter().any(|other| {
            other[..] != p.lcm[..] && expo_div(&p.lcm, other).is_some()
        })
    });
    // F criterion: among equal lcms keep the first
    let mut seen: Vec<Expo> = Vec::new();
    fresh.retain(|p| {
        if seen.iter().any(|s| s[..] == p.lcm[..]) {
            false
        } else {
            seen.push(p.lcm.clone());
            true
        }
    });
    // B criterion: coprime leading monomials reduce to zero anyway
    fresh.retain(|p| !expo_coprime(basis[p.i].lead().0, &lt));

    // prune old pairs strictly covered by the new element
    pairs.retain(|p| {
        let covered = expo_div(&p.lcm, &lt).is_some()
            && expo_lcm(basis[p.i].lead().0, &lt)[..] != p.lcm[..]
            && expo_lcm(basis[p.j].lead().0, &lt)[..] != p.lcm[..];
        !covered
    });
    pairs.extend(fresh);
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Elements come back primitive (content-free, positive leading content) and
/// sorted ascending by leading monomial, which makes the basis canonical for
/// the given context.
pub fn buchberger(gens: &[Poly], ctx: &GbContext, budget: &Budget) -> Result<GroebnerBasis> {
    let mut basis: Vec<GPoly> = Vec::new();
    for p in gens {
        let gp = to_gpoly(p, ctx);
        if !gp.is_zero() {
            basis.push(gp.primitive());
        }
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for t in 0..basis.len() {
        update_pairs(&mut pairs, &basis, t, ctx);
    }
    let mut used = 0usize;
    while !pairs.is_empty() {
        used += 1;
        budget.check(used, "buchberger")?;
        // normal selection: smallest lcm under the order
        let mut best = 0usize;
        for k in 1..pairs.len() {
            if ctx.cmp_expo(&pairs[k].lcm, &pairs[best].lcm) == Ordering::Less {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        if basis[pair.i].is_zero() || basis[pair.j].is_zero() {
            continue;
        }
        let sp = s_poly(&basis[pair.i], &basis[pair.j], ctx);
        let red = reduce_full(&sp, &basis, ctx);
        if red.is_zero() {
            continue;
        }
        basis.push(red.primitive());
        let t = basis.len() - 1;
        update_pairs(&mut pairs, &basis, t, ctx);
    }
    let elements = autoreduce(basis, ctx, budget)?;
    Ok(GroebnerBasis {
        elements: elements.iter().map(|g| from_gpoly(g, ctx)).collect(),
        ctx: ctx.clone(),
        reduced: true,
    })
}

fn autoreduce(mut basis: Vec<GPoly>, ctx: &GbContext, budget: &Budget) -> Result<Vec<GPoly>> {
    basis.retain(|g| !g.is_zero());
    // minimalize: drop elements whose lead is divisible by another lead
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && keep[i]
                && expo_div(basis[i].lead().0, basis[j].lead().0).is_some()
            {
                // prefer keeping the later (already interreduced) copy on ties
                let proper = basis[i].lead().0[..] != basis[j].lead().0[..] || j < i;
                if proper {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let mut minimal: Vec<GPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // full interreduction
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        budget.check(rounds, "autoreduce")?;
        let mut changed = false;
        for i in 0..minimal.len() {
            let me = minimal[i].clone();
            let others: Vec<GPoly> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, g)| j != i && !g.is_zero())
                .map(|(_, g)| g.clone())
                .collect();
            if others.is_empty() {
                continue;
            }
            let red = reduce_full(&me, &others, ctx).primitive();
            let changed_here = red.terms.len() != me.terms.len()
                || red
                    .terms
                    .iter()
                    .zip(me.terms.iter())
                    .any(|(a, b)| a.0[..] != b.0[..] || a.1 != b.1);
            if changed_here {
                minimal[i] = red;
                changed = true;
            }
        }
        minimal.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }
    minimal.sort_by(|a, b| ctx.cmp_expo(a.lead().0, b.lead().0));
    Ok(minimal)
}

/// A computed basis together with its context.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub elements: Vec<Poly>,
    pub ctx: GbContext,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn is_unit_ideal(&self) -> bool {
        self.elements.len() == 1 && {
            let g = to_gpoly(&self.elements[0], &self.ctx);
            !g.is_zero() && g.lead().0.iter().all(|&e| e == 0)
        }
    }
}

/// Normal form of `p` against the basis. No monomial of the result is
/// divisible by a leading monomial of the basis and `u*p - result` lies in the
/// ideal for a unit `u` of the coefficient field (u = 1 over the rationals).
pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Poly {
    let ctx = &gb.ctx;
    let basis: Vec<GPoly> = gb.elements.iter().map(|e| to_gpoly(e, ctx)).collect();
    let red = reduce_full(&to_gpoly(p, ctx), &basis, ctx);
    from_gpoly(&red, ctx)
}

/// Ideal membership via reduction to zero.
pub fn reduces_to_zero(p: &Poly, gb: &GroebnerBasis) -> bool {
    normal_form(p, gb).is_zero()
}

/// Saturation `I : f^inf` by the Rabinowitsch trick: adjoin `t*f - 1` and
/// eliminate `t`.
pub fn saturate(
    gens: &[Poly],
    f: &Poly,
    ring_vars: &[VarId],
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<Vec<Poly>> {
    if f.is_zero() {
        return Err(Error::Other("saturation by zero".into()));
    }
    if f.as_constant().is_some() {
        return Ok(gens.to_vec());
    }
    let t = vs.intern_fresh("sat_t", VarKind::Aux);
    let mut all = gens.to_vec();
    all.push(Poly::var(t).mul(f).sub(&Poly::one()));
    let mut ring = vec![t];
    ring.extend_from_slice(ring_vars);
    eliminate(&all, &[t], &ring, budget)
}

/// Generators of the elimination ideal `I ∩ k[ring \ elim]`, computed with a
/// block order that puts `elim` first. `ring_vars` must list every ring
/// variable with the eliminated ones in front.
pub fn eliminate(
    gens: &[Poly],
    elim: &[VarId],
    ring_vars: &[VarId],
    budget: &Budget,
) -> Result<Vec<Poly>> {
    debug_assert!(ring_vars[..elim.len()] == *elim, "elim block must lead");
    let ctx = GbContext::new(ring_vars.to_vec(), MonomialOrder::Block { elim: elim.len() });
    let gb = buchberger(gens, &ctx, budget)?;
    Ok(gb
        .elements
        .into_iter()
        .filter(|p| elim.iter().all(|&v| !p.contains_var(v)))
        .collect())
}

/// Direct check that every S-polynomial of the basis reduces to zero.
pub fn verify_spoly_reduction(gb: &GroebnerBasis) -> bool {
    let ctx = &gb.ctx;
    let basis: Vec<GPoly> = gb.elements.iter().map(|e| to_gpoly(e, ctx)).collect();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if basis[i].is_zero() || basis[j].is_zero() {
                continue;
            }
            let sp = s_poly(&basis[i], &basis[j], ctx);
            if !reduce_full(&sp, &basis, ctx).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::VarKind;

    fn space(names: &[&str]) -> (VarSpace, Vec<VarId>) {
        let mut vs = VarSpace::new();
        let ids = names
            .iter()
            .map(|n| vs.intern(n, VarKind::State).unwrap())
            .collect();
        (vs, ids)
    }

    #[test]
    fn normal_form_examples() {
        let (_, v) = space(&["x", "y"]);
        let (x, y) = (v[0], v[1]);
        let ctx = GbContext::new(vec![x, y], MonomialOrder::Lex);
        let budget = Budget::default();

        // normal_form(x^2, {x}) = 0
        let gb = buchberger(&[Poly::var(x)], &ctx, &budget).unwrap();
        assert!(normal_form(&Poly::var(x).pow(2), &gb).is_zero());
        // normal_form(y, {x}) = y
        assert_eq!(normal_form(&Poly::var(y), &gb), Poly::var(y));

        // normal_form(x^2 + y, {x - y^2}) = y^4 + y under lex x > y
        let gb2 = buchberger(&[Poly::var(x).sub(&Poly::var(y).pow(2))], &ctx, &budget).unwrap();
        let nf = normal_form(&Poly::var(x).pow(2).add(&Poly::var(y)), &gb2);
        assert_eq!(nf, Poly::var(y).pow(4).add(&Poly::var(y)));
        // idempotence
        assert_eq!(normal_form(&nf, &gb2), nf);
    }

    #[test]
    fn buchberger_lex_example() {
        let (_, v) = space(&["x", "y"]);
        let (x, y) = (v[0], v[1]);
        let ctx = GbContext::new(vec![x, y], MonomialOrder::Lex);
        // {x^2 - y, y^2 - x} under lex x > y -> {x - y^2, y^4 - y}
        let gens = [
            Poly::var(x).pow(2).sub(&Poly::var(y)),
            Poly::var(y).pow(2).sub(&Poly::var(x)),
        ];
        let gb = buchberger(&gens, &ctx, &Budget::default()).unwrap();
        let expect = vec![
            Poly::var(y).pow(4).sub(&Poly::var(y)),
            Poly::var(x).sub(&Poly::var(y).pow(2)),
        ];
        assert_eq!(gb.elements.len(), 2);
        for e in &expect {
            assert!(
                gb.elements.iter().any(|g| g == e || g == &e.neg()),
                "missing {e:?}"
            );
        }
        assert!(verify_spoly_reduction(&gb));
        // every generator reduces to zero against its own basis
        for g in &gens {
            assert!(reduces_to_zero(g, &gb));
        }
    }

    #[test]
    fn trivial_bases() {
        let (_, v) = space(&["x"]);
        let x = v[0];
        let ctx = GbContext::new(vec![x], MonomialOrder::Lex);
        let gb = buchberger(&[Poly::var(x).sub(&Poly::one())], &ctx, &Budget::default()).unwrap();
        assert_eq!(gb.elements, vec![Poly::var(x).sub(&Poly::one())]);

        // {p, 1} collapses to the unit ideal
        let gb1 = buchberger(
            &[Poly::var(x).pow(3).add(&Poly::var(x)), Poly::one()],
            &ctx,
            &Budget::default(),
        )
        .unwrap();
        assert!(gb1.is_unit_ideal());
    }

    #[test]
    fn saturation_examples() {
        let (mut vs, v) = space(&["x", "y"]);
        let (x, y) = (v[0], v[1]);
        let budget = Budget::default();
        // <x*y> : x^inf = <y>
        let out = saturate(
            &[Poly::var(x).mul(&Poly::var(y))],
            &Poly::var(x),
            &[x, y],
            &mut vs,
            &budget,
        )
        .unwrap();
        assert_eq!(out, vec![Poly::var(y)]);
        // <x^2> : x^inf = <1>
        let out = saturate(&[Poly::var(x).pow(2)], &Poly::var(x), &[x, y], &mut vs, &budget)
            .unwrap();
        assert_eq!(out, vec![Poly::one()]);
        // saturation by a constant is a no-op
        let gens = [Poly::var(x).sub(&Poly::var(y))];
        let out = saturate(&gens, &Poly::one(), &[x, y], &mut vs, &budget).unwrap();
        assert_eq!(out, gens.to_vec());
    }

    #[test]
    fn elimination_examples() {
        let (_, v) = space(&["x", "y", "z"]);
        let (x, y, z) = (v[0], v[1], v[2]);
        let budget = Budget::default();
        // eliminate x from <x - y, x - z> -> <y - z>
        let out = eliminate(
            &[
                Poly::var(x).sub(&Poly::var(y)),
                Poly::var(x).sub(&Poly::var(z)),
            ],
            &[x],
            &[x, y, z],
            &budget,
        )
        .unwrap();
        assert_eq!(out, vec![Poly::var(y).sub(&Poly::var(z))]);
        // eliminate x from <x^2 - y> -> <0> (dominant projection)
        let out = eliminate(&[Poly::var(x).pow(2).sub(&Poly::var(y))], &[x], &[x, y, z], &budget)
            .unwrap();
        assert!(out.is_empty());
        // result contains only allowed variables
        let out = eliminate(
            &[
                Poly::var(x).mul(&Poly::var(y)).sub(&Poly::one()),
                Poly::var(x).add(&Poly::var(z)),
            ],
            &[x],
            &[x, y, z],
            &budget,
        )
        .unwrap();
        for p in &out {
            assert!(!p.contains_var(x));
        }
        assert!(!out.is_empty());
    }

    #[test]
    fn parameter_coefficients() {
        // over Q(a): { a*x - y } reduced basis is primitive a*x - y,
        // and membership works with cross-multiplied reduction
        let mut vs = VarSpace::new();
        let a = vs.intern("a", VarKind::Param).unwrap();
        let x = vs.intern("x", VarKind::State).unwrap();
        let y = vs.intern("y", VarKind::State).unwrap();
        let ctx = GbContext::new(vec![x, y], MonomialOrder::Lex);
        let g = Poly::var(a).mul(&Poly::var(x)).sub(&Poly::var(y));
        let gb = buchberger(&[g.clone()], &ctx, &Budget::default()).unwrap();
        // a^2 x^2 - y^2 = (a x - y)(a x + y) is in the ideal
        let p = Poly::var(a)
            .pow(2)
            .mul(&Poly::var(x).pow(2))
            .sub(&Poly::var(y).pow(2));
        assert!(reduces_to_zero(&p, &gb));
        // x alone is not
        assert!(!reduces_to_zero(&Poly::var(x), &gb));
        assert!(verify_spoly_reduction(&gb));
    }

    #[test]
    fn lex_grevlex_membership_agree() {
        let (_, v) = space(&["x", "y", "z"]);
        let (x, y, z) = (v[0], v[1], v[2]);
        let gens = [
            Poly::var(x).mul(&Poly::var(y)).sub(&Poly::var(z)),
            Poly::var(y).pow(2).sub(&Poly::var(x)),
        ];
        let budget = Budget::default();
        let lex = buchberger(
            &gens,
            &GbContext::new(vec![x, y, z], MonomialOrder::Lex),
            &budget,
        )
        .unwrap();
        let grev = buchberger(
            &gens,
            &GbContext::new(vec![x, y, z], MonomialOrder::GrevLex),
            &budget,
        )
        .unwrap();
        let probes = [
            Poly::var(x).mul(&Poly::var(y)).sub(&Poly::var(z)),
            Poly::var(x).pow(2).sub(&Poly::var(y).mul(&Poly::var(z))),
            Poly::var(x).add(&Poly::var(y)),
            Poly::var(z).pow(2).sub(&Poly::var(x).pow(3)),
        ];
        for p in &probes {
            assert_eq!(reduces_to_zero(p, &lex), reduces_to_zero(p, &grev));
        }
    }

    #[test]
    fn budget_trips() {
        let (_, v) = space(&["x", "y", "z"]);
        let (x, y, z) = (v[0], v[1], v[2]);
        // cyclic-3: needs real pair work
        let e1 = Poly::var(x).add(&Poly::var(y)).add(&Poly::var(z));
        let e2 = Poly::var(x)
            .mul(&Poly::var(y))
            .add(&Poly::var(y).mul(&Poly::var(z)))
            .add(&Poly::var(z).mul(&Poly::var(x)));
        let e3 = Poly::var(x)
            .mul(&Poly::var(y))
            .mul(&Poly::var(z))
            .sub(&Poly::one());
        let gens = [e1, e2, e3];
        let tight = Budget {
            pair_cap: 1,
            deadline: None,
        };
        let err = buchberger(
            &gens,
            &GbContext::new(vec![x, y, z], MonomialOrder::GrevLex),
            &tight,
        );
        assert!(matches!(err, Err(Error::BudgetExceeded(_))));
    }
}
