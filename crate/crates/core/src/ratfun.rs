//! Rational functions: reduced fractions of sparse polynomials.
//!
//! Canonical form: gcd(num, den) = 1, denominator primitive with integer
//! coefficients and positive leading coefficient. Equality is structural.

use crate::error::{Error, Result};
use crate::poly::{poly_gcd, Poly, Rat};
use crate::vars::{VarId, VarSpace};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds the reduced canonical fraction. Fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.divexact(&g);
        let mut den = den.divexact(&g);
        let c = den.content();
        den = den.scale(&(Rat::one() / c.clone()));
        num = num.scale(&(Rat::one() / c));
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> RatFun {
        RatFun::from_poly(Poly::zero())
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> RatFun {
        RatFun::from_poly(Poly::int(n))
    }

    pub fn var(v: VarId) -> RatFun {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.as_constant().map(|c| c.is_one()).unwrap_or(false)
            && self.num.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// True when the fraction is a single variable to the first power.
    pub fn as_var(&self) -> Option<VarId> {
        if !self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            return None;
        }
        let mut it = self.num.terms();
        let (m, c) = it.next()?;
        if it.next().is_some() || !c.is_one() {
            return None;
        }
        match m.pairs() {
            [(v, 1)] => Some(*v),
            _ => None,
        }
    }

    pub fn support(&self) -> BTreeSet<VarId> {
        let mut s = self.num.support();
        s.extend(self.den.support());
        s
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFun::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::one().div(self)
    }

    pub fn pow(&self, e: u32) -> RatFun {
        let mut out = RatFun::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative by the quotient rule, reduced.
    pub fn differentiate(&self, v: VarId) -> RatFun {
        let n = self.num.differentiate(v).mul(&self.den);
        let d = self.num.mul(&self.den.differentiate(v));
        RatFun::new(n.sub(&d), self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Exact evaluation. Signals `EvalDenominatorZero` so callers can resample.
    pub fn eval_rat(&self, assign: &BTreeMap<VarId, Rat>) -> Result<Rat> {
        let d = self.den.eval_rat(assign);
        if d.is_zero() {
            return Err(Error::EvalDenominatorZero);
        }
        Ok(self.num.eval_rat(assign) / d)
    }

    /// Evaluation modulo 2^61 - 1; `None` when the denominator image vanishes.
    pub fn eval_mod(&self, slots: &BTreeMap<VarId, u64>) -> Option<u64> {
        let d = crate::modp::eval_poly(&self.den, slots)?;
        if d == 0 {
            return None;
        }
        let n = crate::modp::eval_poly(&self.num, slots)?;
        Some(crate::modp::mul(n, crate::modp::inv(d)))
    }

    pub fn eval_f64(&self, slots: &[f64]) -> f64 {
        self.num.eval_f64(slots) / self.den.eval_f64(slots)
    }

    /// Simultaneous substitution of variables by rational functions.
    pub fn substitute(&self, map: &BTreeMap<VarId, RatFun>) -> Result<RatFun> {
        let n = poly_substitute(&self.num, map);
        let d = poly_substitute(&self.den, map);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.div(&d)
    }

    pub fn render(&self, vs: &VarSpace) -> String {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            return self.num.render(vs);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num.render(vs))
        } else {
            self.num.render(vs)
        };
        let den = if self.den.num_terms() > 1 {
            format!("({})", self.den.render(vs))
        } else {
            self.den.render(vs)
        };
        format!("{num}/{den}")
    }
}

/// Expands a polynomial under a variable -> rational-function map.
pub fn poly_substitute(p: &Poly, map: &BTreeMap<VarId, RatFun>) -> RatFun {
    if !p.support().iter().any(|v| map.contains_key(v)) {
        return RatFun::from_poly(p.clone());
    }
    let mut out = RatFun::zero();
    for (m, c) in p.terms() {
        let mut term = RatFun::constant(c.clone());
        for &(v, e) in m.pairs() {
            match map.get(&v) {
                Some(f) => term = term.mul(&f.pow(e)),
                None => {
                    term = term.mul(&RatFun::from_poly(Poly::monomial(
                        crate::poly::Monomial::var_pow(v, e),
                        Rat::one(),
                    )))
                }
            }
        }
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_frac};
    use crate::vars::{VarKind, VarSpace};
    use proptest::prelude::*;

    fn vars() -> (VarSpace, VarId, VarId, VarId) {
        let mut vs = VarSpace::new();
        let x = vs.intern("x", VarKind::State).unwrap();
        let y = vs.intern("y", VarKind::State).unwrap();
        let a = vs.intern("a", VarKind::Param).unwrap();
        (vs, x, y, a)
    }

    #[test]
    fn reduces_common_factor() {
        let (vs, x, _, _) = vars();
        // (x^2-1)/(x-1) = x+1
        let f = RatFun::new(
            Poly::var(x).pow(2).sub(&Poly::one()),
            Poly::var(x).sub(&Poly::one()),
        )
        .unwrap();
        assert_eq!(f, RatFun::from_poly(Poly::var(x).add(&Poly::one())));
        assert_eq!(f.render(&vs), "x + 1");
    }

    #[test]
    fn content_reduction() {
        let (_, x, _, _) = vars();
        // (2x)/4 = x/2
        let f = RatFun::new(Poly::var(x).scale(&rat(2)), Poly::int(4)).unwrap();
        assert_eq!(f, RatFun::from_poly(Poly::var(x).scale(&rat_frac(1, 2))));
    }

    #[test]
    fn variable_cancellation() {
        let (_, x, _, a) = vars();
        // (a b x)/b with b := y here
        let (_, _, y, _) = vars();
        let f = RatFun::new(
            Poly::var(a).mul(&Poly::var(y)).mul(&Poly::var(x)),
            Poly::var(y),
        )
        .unwrap();
        assert_eq!(f, RatFun::from_poly(Poly::var(a).mul(&Poly::var(x))));
    }

    #[test]
    fn zero_denominator_rejected() {
        let (_, x, _, _) = vars();
        assert!(matches!(
            RatFun::new(Poly::var(x), Poly::zero()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn evaluation() {
        let (_, x, y, _) = vars();
        // (x+y)/y at {x:1, y:2} = 3/2
        let f = RatFun::new(Poly::var(x).add(&Poly::var(y)), Poly::var(y)).unwrap();
        let mut assign = BTreeMap::new();
        assign.insert(x, rat(1));
        assign.insert(y, rat(2));
        assert_eq!(f.eval_rat(&assign).unwrap(), rat_frac(3, 2));

        // x/(x-1) at {x:1} surfaces the denominator hit
        let g = RatFun::new(Poly::var(x), Poly::var(x).sub(&Poly::one())).unwrap();
        let mut at_one = BTreeMap::new();
        at_one.insert(x, rat(1));
        assert!(matches!(
            g.eval_rat(&at_one),
            Err(Error::EvalDenominatorZero)
        ));
    }

    #[test]
    fn derivative_quotient_rule() {
        let (_, x, y, _) = vars();
        // d/dx (x/y) = 1/y
        let f = RatFun::new(Poly::var(x), Poly::var(y)).unwrap();
        assert_eq!(
            f.differentiate(x),
            RatFun::new(Poly::one(), Poly::var(y)).unwrap()
        );
        // d/dy (x/y) = -x/y^2
        assert_eq!(
            f.differentiate(y),
            RatFun::new(Poly::var(x).neg(), Poly::var(y).pow(2)).unwrap()
        );
    }

    #[test]
    fn substitution_composes() {
        let (_, x, y, _) = vars();
        // substitute x := 1/y into x*y + 1 -> 2
        let p = Poly::var(x).mul(&Poly::var(y)).add(&Poly::one());
        let mut map = BTreeMap::new();
        map.insert(x, RatFun::new(Poly::one(), Poly::var(y)).unwrap());
        let out = poly_substitute(&p, &map);
        assert_eq!(out, RatFun::int(2));
    }

    fn arb_small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (
                prop::collection::vec((0usize..3, 0u32..3), 0..3),
                -4i64..5,
            ),
            0..4,
        )
        .prop_map(|raw| {
            let mut p = Poly::zero();
            for (pairs, c) in raw {
                p.add_term(
                    crate::poly::Monomial::from_pairs(
                        pairs.into_iter().map(|(i, e)| (VarId(i as u32), e)).collect(),
                    ),
                    rat(c),
                );
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cofactor_cancels(
            a in arb_small_poly(),
            b in arb_small_poly(),
            c in arb_small_poly(),
        ) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let plain = RatFun::new(a.clone(), b.clone()).unwrap();
            let inflated = RatFun::new(a.mul(&c), b.mul(&c)).unwrap();
            prop_assert_eq!(plain, inflated);
        }

        #[test]
        fn normalize_idempotent(a in arb_small_poly(), b in arb_small_poly()) {
            prop_assume!(!b.is_zero());
            let f = RatFun::new(a, b).unwrap();
            let again = RatFun::new(f.num().clone(), f.den().clone()).unwrap();
            prop_assert_eq!(f, again);
        }
    }
}
