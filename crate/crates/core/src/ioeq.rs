//! Input-output equations and the field of IO-identifiable functions.
//!
//! For each output, the minimal-order algebraic relation among its jets,
//! earlier outputs' jets and the input jets is computed by eliminating the
//! states from the jet ideal `{ y_j^(i) - R_{j,i} }`. Before any Gröbner call
//! the system is "presolved": equations linear in some state with a
//!нonvanishing coefficient on the graph are solved and substituted, which
//! usually eliminates most (often all) states at desk scale. Leftover states
//! go through saturation + block elimination.

use crate::error::{Error, Result};
use crate::groebner::{self, Budget, GbContext, MonomialOrder};
use crate::lie::LieTable;
use crate::model::Model;
use crate::poly::{poly_gcd, Monomial, Poly};
use crate::ratfun::{poly_substitute, RatFun};
use crate::vars::{VarId, VarKind, VarSpace};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// jet ranking and differential polynomials
// ---------------------------------------------------------------------------

/// Ranking-descending precedence over jet variables: output jets above input
/// jets, higher derivative orders first, higher output index breaking ties.
#[derive(Clone, Debug)]
pub struct JetRanking {
    prec: Vec<VarId>,
    pos: BTreeMap<VarId, usize>,
}

impl JetRanking {
    pub fn new(vs: &VarSpace) -> JetRanking {
        let mut y: Vec<(usize, usize, VarId)> = Vec::new();
        let mut u: Vec<(usize, usize, VarId)> = Vec::new();
        for id in vs.ids() {
            match vs.kind(id) {
                VarKind::Output => y.push((0, output_index(vs, id), id)),
                VarKind::OutJet { output, order } => y.push((*order, *output, id)),
                VarKind::Input => u.push((0, input_index(vs, id), id)),
                VarKind::InJet { input, order } => u.push((*order, *input, id)),
                _ => {}
            }
        }
        y.sort_by(|a, b| b.cmp(a));
        u.sort_by(|a, b| b.cmp(a));
        let prec: Vec<VarId> = y
            .into_iter()
            .map(|(_, _, v)| v)
            .chain(u.into_iter().map(|(_, _, v)| v))
            .collect();
        let pos = prec.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        JetRanking { prec, pos }
    }

    pub fn is_jet(&self, v: VarId) -> bool {
        self.pos.contains_key(&v)
    }

    /// Lex comparison with the ranking as variable precedence: a monomial
    /// containing a higher-ranked jet always wins. This makes the coefficient
    /// of the leader-carrying monomial the monic pivot, matching the usual
    /// presentation of IO-equations.
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.prec {
            match a.exp_of(v).cmp(&b.exp_of(v)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

fn output_index(vs: &VarSpace, id: VarId) -> usize {
    vs.ids()
        .filter(|&v| matches!(vs.kind(v), VarKind::Output))
        .position(|v| v == id)
        .unwrap_or(0)
}

fn input_index(vs: &VarSpace, id: VarId) -> usize {
    vs.ids()
        .filter(|&v| matches!(vs.kind(v), VarKind::Input))
        .position(|v| v == id)
        .unwrap_or(0)
}

/// A monic differential polynomial in jet variables with coefficients in the
/// parameter fraction field. Terms are kept ranking-descending; the leading
/// coefficient is 1.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    pub output: usize,
    pub terms: Vec<(Monomial, RatFun)>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl DiffPoly {
    /// Splits an eliminated polynomial into jet monomials with parameter
    /// coefficients and divides by the ranking-leading coefficient.
    pub fn from_poly(p: &Poly, output: usize, ranking: &JetRanking) -> DiffPoly {
        let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let (jet_part, param_part): (Vec<_>, Vec<_>) = mono
                .pairs()
                .iter()
                .copied()
                .partition(|&(v, _)| ranking.is_jet(v));
            groups
                .entry(Monomial::from_pairs(jet_part))
                .or_insert_with(Poly::zero)
                .add_term(Monomial::from_pairs(param_part), c.clone());
        }
        groups.retain(|_, c| !c.is_zero());
        let mut terms: Vec<(Monomial, Poly)> = groups.into_iter().collect();
        terms.sort_by(|a, b| ranking.cmp_mono(&b.0, &a.0));
        let lead = RatFun::from_poly(terms[0].1.clone());
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                (
                    m,
                    RatFun::from_poly(c).div(&lead).expect("nonzero leading coefficient"),
                )
            })
            .collect();
        DiffPoly { output, terms }
    }

    /// Maximum derivative order among all output jets present.
    pub fn order_in_y(&self, vs: &VarSpace) -> usize {
        let mut ord = 0usize;
        for (m, _) in &self.terms {
            for v in m.vars() {
                match vs.kind(v) {
                    VarKind::Output => {}
                    VarKind::OutJet { order, .. } => ord = ord.max(*order),
                    _ => {}
                }
            }
        }
        ord
    }

    /// Non-constant coefficients, each normalized up to a rational factor
    /// (primitive numerator, positive lead).
    pub fn coefficients(&self) -> Vec<RatFun> {
        self.terms
            .iter()
            .filter_map(|(_, c)| {
                if c.is_constant() {
                    None
                } else {
                    Some(canonical_generator(c))
                }
            })
            .collect()
    }

    /// Substitutes every jet by its Lie-table entry; the result must vanish.
    pub fn vanishes_on(&self, lie: &LieTable, vs: &VarSpace) -> bool {
        let map = jet_substitution(lie, vs);
        let mut acc = RatFun::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.pairs() {
                match map.get(&v) {
                    Some(r) => term = term.mul(&r.pow(e)),
                    None => term = term.mul(&RatFun::var(v).pow(e)),
                }
            }
            acc = acc.add(&term);
        }
        acc.is_zero()
    }

    pub fn render(&self, vs: &VarSpace) -> String {
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.num().content() < crate::poly::Rat::from_integer(0.into());
            let abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                let needs_parens = abs.num().num_terms() > 1
                    || !abs
                        .den()
                        .as_constant()
                        .map(|k| num::One::is_one(&k))
                        .unwrap_or(false);
                let s = abs.render(vs);
                factors.push(if needs_parens && !m.is_one() {
                    format!("({s})")
                } else {
                    s
                });
            }
            // factors ascend by interning order: y before y' before y''
            for &(v, e) in m.pairs() {
                if e == 1 {
                    factors.push(vs.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", vs.name(v), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Map of every interned jet variable to its Lie-table expression.
pub fn jet_substitution(lie: &LieTable, vs: &VarSpace) -> BTreeMap<VarId, RatFun> {
    let mut map = BTreeMap::new();
    for (j, jets) in lie.jets.y.iter().enumerate() {
        for (ord, &jet) in jets.iter().enumerate() {
            if ord < lie.entries[j].len() {
                map.insert(jet, lie.entries[j][ord].clone());
            }
        }
    }
    let _ = vs;
    map
}

// ---------------------------------------------------------------------------
// io_equations
// ---------------------------------------------------------------------------

pub struct IoEquations {
    pub eqs: Vec<DiffPoly>,
    pub ranking: JetRanking,
    /// Outputs whose elimination ideal was not principal at minimal order.
    pub non_principal: Vec<usize>,
}

/// Computes the monic IO-equation of every output, lower-index outputs first.
pub fn io_equations(
    m: &Model,
    lie: &LieTable,
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<IoEquations> {
    let n = m.n_states();
    let ranking = JetRanking::new(vs);
    let mut eqs: Vec<DiffPoly> = Vec::new();
    let mut non_principal = Vec::new();
    for j in 0..m.outputs.len() {
        let mut found = None;
        for ord in 1..=n {
            let (candidates, principal) = relation_at_order(m, lie, vs, j, ord, n, budget)?;
            if candidates.is_empty() {
                continue;
            }
            let mut best: Option<Poly> = None;
            for c in candidates {
                let dp_better = match &best {
                    None => true,
                    Some(b) => {
                        let ca = DiffPoly::from_poly(&c, j, &ranking);
                        let cb = DiffPoly::from_poly(b, j, &ranking);
                        ranking.cmp_mono(&ca.terms[0].0, &cb.terms[0].0) == Ordering::Less
                    }
                };
                if dp_better {
                    best = Some(c);
                }
            }
            if !principal {
                non_principal.push(j);
            }
            found = Some(DiffPoly::from_poly(&best.expect("nonempty"), j, &ranking));
            break;
        }
        match found {
            Some(e) => eqs.push(e),
            None => {
                return Err(Error::Other(format!(
                    "no IO relation found for output {} up to order {n}",
                    vs.name(m.outputs[j])
                )))
            }
        }
    }
    Ok(IoEquations {
        eqs,
        ranking,
        non_principal,
    })
}

/// Candidate relations among jets at truncation `ord` for output `j`
/// (earlier outputs enter with their full jet ladder). Returns the jets-only
/// polynomials involving output `j` and whether the set was principal.
fn relation_at_order(
    m: &Model,
    lie: &LieTable,
    vs: &mut VarSpace,
    j: usize,
    ord: usize,
    n: usize,
    budget: &Budget,
) -> Result<(Vec<Poly>, bool)> {
    // equations (output, order) sorted by order, then output
    let mut keys: Vec<(usize, usize)> = Vec::new();
    for s in 0..=ord {
        keys.push((s, j));
    }
    for i in 0..j {
        for s in 0..=n {
            keys.push((s, i));
        }
    }
    keys.sort();

    let pullback = jet_substitution(lie, vs);
    let mut sys = PresolveSystem::new(m, lie, &keys, &pullback);
    sys.run();

    let j_jets: BTreeSet<VarId> = lie.jets.y[j].iter().copied().collect();

    // direct candidates: remaining equations free of states
    let mut direct: Vec<Poly> = Vec::new();
    let mut with_states: Vec<(Poly, Poly)> = Vec::new(); // (cleared poly, denominator)
    for eq in &sys.remaining {
        let p = eq.implicit();
        if m.states.iter().all(|&x| !p.contains_var(x)) {
            direct.push(p);
        } else {
            with_states.push((p, eq.rhs.den().clone()));
        }
    }

    let mut candidates: Vec<Poly> = Vec::new();
    let mut principal = true;
    if !direct.is_empty() {
        for p in direct {
            let cleaned = clean_direct_relation(p, &sys.denominators, &pullback, m);
            if let Some(c) = cleaned {
                candidates.push(c);
            }
        }
        if candidates.len() > 1 {
            // keep the minimal one; extras are consequences at desk scale
            principal = candidates.len() == 1;
        }
    } else if !with_states.is_empty() {
        let unsolved: Vec<VarId> = m
            .states
            .iter()
            .copied()
            .filter(|x| !sys.solved.iter().any(|(s, _)| s == x))
            .collect();
        if unsolved.is_empty() {
            return Ok((Vec::new(), true));
        }
        // saturation by every denominator seen so far
        let mut dens: Vec<Poly> = Vec::new();
        for d in sys
            .denominators
            .iter()
            .chain(with_states.iter().map(|(_, d)| d))
        {
            push_unique_factorlike(&mut dens, d, m);
        }
        let mut gens: Vec<Poly> = with_states.into_iter().map(|(p, _)| p).collect();
        let mut ring: Vec<VarId> = Vec::new();
        let mut elim: Vec<VarId> = Vec::new();
        if !dens.is_empty() {
            let t = vs.intern_fresh("sat_t", VarKind::Aux);
            let mut prod = Poly::one();
            for d in &dens {
                prod = prod.mul(d);
            }
            gens.push(Poly::var(t).mul(&prod).sub(&Poly::one()));
            elim.push(t);
        }
        elim.extend(unsolved.iter().copied());
        ring.extend(elim.iter().copied());
        // keep block: all jets present in the generators
        let mut keep: BTreeSet<VarId> = BTreeSet::new();
        for g in &gens {
            for v in g.support() {
                if !elim.contains(&v) && !m.params.contains(&v) {
                    keep.insert(v);
                }
            }
        }
        ring.extend(keep.iter().copied());
        let out = groebner::eliminate(&gens, &elim, &ring, budget)?;
        let involving: Vec<Poly> = out
            .into_iter()
            .filter(|p| p.support().iter().any(|v| j_jets.contains(v)))
            .collect();
        principal = involving.len() <= 1;
        candidates = involving;
    }
    Ok((candidates, principal))
}

/// Primitive + squarefree + guarded removal of factors shared with graph
/// denominators (only factors with nonvanishing pullback are stripped), then
/// a final identity check against the Lie table.
fn clean_direct_relation(
    p: Poly,
    dens: &[Poly],
    pullback: &BTreeMap<VarId, RatFun>,
    m: &Model,
) -> Option<Poly> {
    let mut e = p.primitive().squarefree_part();
    for d in dens {
        loop {
            let g = poly_gcd(&e, d);
            if g.as_constant().is_some() {
                break;
            }
            if !pullback_nonzero(&g, pullback) {
                break;
            }
            e = e.divexact(&g).primitive();
        }
    }
    let _ = m;
    if e.is_constant() {
        return None;
    }
    // the relation must vanish identically on the graph
    if pullback_nonzero(&e, pullback) {
        return None;
    }
    Some(e)
}

fn pullback_nonzero(p: &Poly, map: &BTreeMap<VarId, RatFun>) -> bool {
    !poly_substitute(p, map).is_zero()
}

/// Deduplicated denominator collection; parameter-only and constant factors
/// are units of the coefficient field and are skipped.
fn push_unique_factorlike(dens: &mut Vec<Poly>, d: &Poly, m: &Model) {
    if d.as_constant().is_some() {
        return;
    }
    if d.support().iter().all(|v| m.params.contains(v)) {
        return;
    }
    let d = d.primitive();
    if !dens.contains(&d) {
        dens.push(d);
    }
}

// ---------------------------------------------------------------------------
// presolve: triangular rational solving of the jet system
// ---------------------------------------------------------------------------

struct JetEquation {
    jet: VarId,
    rhs: RatFun,
}

impl JetEquation {
    /// `jet * den(rhs) - num(rhs)`, the cleared graph polynomial.
    fn implicit(&self) -> Poly {
        Poly::var(self.jet)
            .mul(self.rhs.den())
            .sub(self.rhs.num())
            .primitive()
    }
}

struct PresolveSystem<'a> {
    m: &'a Model,
    pullback: &'a BTreeMap<VarId, RatFun>,
    remaining: Vec<JetEquation>,
    solved: Vec<(VarId, RatFun)>,
    denominators: Vec<Poly>,
}

impl<'a> PresolveSystem<'a> {
    fn new(
        m: &'a Model,
        lie: &LieTable,
        keys: &[(usize, usize)],
        pullback: &'a BTreeMap<VarId, RatFun>,
    ) -> PresolveSystem<'a> {
        let remaining = keys
            .iter()
            .map(|&(s, i)| JetEquation {
                jet: lie.jets.y[i][s],
                rhs: lie.entries[i][s].clone(),
            })
            .collect();
        PresolveSystem {
            m,
            pullback,
            remaining,
            solved: Vec::new(),
            denominators: Vec::new(),
        }
    }

    fn run(&mut self) {
        loop {
            let mut action: Option<(usize, VarId, RatFun, Poly)> = None;
            'search: for (ei, eq) in self.remaining.iter().enumerate() {
                let p = eq.implicit();
                for &x in self.m.states.iter() {
                    if self.solved.iter().any(|(s, _)| *s == x) {
                        continue;
                    }
                    if p.degree_in(x) != 1 {
                        continue;
                    }
                    let uni = p.as_univariate(x);
                    let a = uni[1].1.clone();
                    let b = uni[0].1.clone();
                    if !pullback_nonzero(&a, self.pullback) {
                        continue;
                    }
                    let expr = RatFun::new(b.neg(), a.clone()).expect("nonzero coefficient");
                    action = Some((ei, x, expr, a));
                    break 'search;
                }
            }
            let Some((ei, x, expr, coeff)) = action else {
                break;
            };
            self.remaining.remove(ei);
            push_unique_factorlike(&mut self.denominators, &coeff, self.m);
            // substitute into remaining equations and earlier solutions
            let mut map = BTreeMap::new();
            map.insert(x, expr.clone());
            for eq in self.remaining.iter_mut() {
                if eq.rhs.contains_var(x) {
                    eq.rhs = eq.rhs.substitute(&map).expect("denominator nonzero on graph");
                    push_unique_factorlike(&mut self.denominators, eq.rhs.den(), self.m);
                }
            }
            for (_, f) in self.solved.iter_mut() {
                if f.contains_var(x) {
                    *f = f.substitute(&map).expect("denominator nonzero on graph");
                }
            }
            self.solved.push((x, expr));
        }
    }
}

// ---------------------------------------------------------------------------
// identifiable field
// ---------------------------------------------------------------------------

/// Raw and simplified generators of the field of IO-identifiable functions.
#[derive(Clone, Debug)]
pub struct IdentifiableField {
    pub raw: Vec<RatFun>,
    pub simplified: Vec<RatFun>,
}

/// All non-constant coefficients of the monic IO-equations, deduplicated.
pub fn field_generators(eqs: &[DiffPoly]) -> Vec<RatFun> {
    let mut out: Vec<RatFun> = Vec::new();
    for e in eqs {
        for c in e.coefficients() {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Normalizes a generator up to a rational factor: primitive numerator with
/// positive leading coefficient (the generated field is unchanged).
pub fn canonical_generator(f: &RatFun) -> RatFun {
    RatFun::new(f.num().primitive(), f.den().clone()).expect("nonzero denominator")
}

/// The membership ideal of a generator set: duplicate parameters `p_hat`,
/// relations `num(q)(p_hat)*den(q)(p) - num(q)(p)*den(q)(p_hat)`, saturated by
/// the duplicated denominators. Membership of `h` in Q(gens) is reduction of
/// the analogous binomial to zero (the saturated ideal is prime).
pub struct FieldIdeal {
    pub gens: Vec<RatFun>,
    pub hat_of: BTreeMap<VarId, VarId>,
    pub gb: groebner::GroebnerBasis,
}

impl FieldIdeal {
    pub fn new(
        gens: &[RatFun],
        params: &[VarId],
        vs: &mut VarSpace,
        budget: &Budget,
    ) -> Result<FieldIdeal> {
        let hat_of = hat_params(params, vs);
        let hats: Vec<VarId> = params.iter().map(|p| hat_of[p]).collect();
        let mut ideal_gens = Vec::new();
        let mut dens = Vec::new();
        for q in gens {
            let n_hat = rename_vars(q.num(), &hat_of);
            let d_hat = rename_vars(q.den(), &hat_of);
            ideal_gens.push(n_hat.mul(q.den()).sub(&d_hat.mul(q.num())));
            if d_hat.as_constant().is_none() && !dens.contains(&d_hat) {
                dens.push(d_hat);
            }
        }
        let mut ring = hats.clone();
        let gens_sat = if dens.is_empty() {
            ideal_gens
        } else {
            let mut prod = Poly::one();
            for d in &dens {
                prod = prod.mul(d);
            }
            groebner::saturate(&ideal_gens, &prod, &ring, vs, budget)?
        };
        let ctx = GbContext::new(std::mem::take(&mut ring), MonomialOrder::GrevLex);
        let gb = groebner::buchberger(&gens_sat, &ctx, budget)?;
        Ok(FieldIdeal {
            gens: gens.to_vec(),
            hat_of,
            gb,
        })
    }

    /// True iff `h` lies in the field generated by `self.gens`.
    pub fn contains(&self, h: &RatFun) -> bool {
        let n_hat = rename_vars(h.num(), &self.hat_of);
        let d_hat = rename_vars(h.den(), &self.hat_of);
        let test = n_hat.mul(h.den()).sub(&d_hat.mul(h.num()));
        groebner::reduces_to_zero(&test, &self.gb)
    }

    /// Non-constant coefficients of the reduced basis, normalized; these
    /// generate exactly the field of the generators.
    pub fn reduced_coefficients(&self, ranking_vars: &BTreeSet<VarId>) -> Vec<RatFun> {
        let mut out: Vec<RatFun> = Vec::new();
        for e in &self.gb.elements {
            // group by hat-monomial, coefficient polynomials in the params
            let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
            for (mono, c) in e.terms() {
                let (hat_part, param_part): (Vec<_>, Vec<_>) = mono
                    .pairs()
                    .iter()
                    .copied()
                    .partition(|(v, _)| ranking_vars.contains(v));
                groups
                    .entry(Monomial::from_pairs(hat_part))
                    .or_insert_with(Poly::zero)
                    .add_term(Monomial::from_pairs(param_part), c.clone());
            }
            groups.retain(|_, c| !c.is_zero());
            // monic against the grlex-largest hat monomial
            let lead_key = groups
                .keys()
                .max_by(|a, b| a.cmp_grlex(b))
                .cloned()
                .expect("nonzero element");
            let lead = RatFun::from_poly(groups[&lead_key].clone());
            for (_, c) in groups {
                let coeff = RatFun::from_poly(c).div(&lead).expect("nonzero lead");
                if !coeff.is_constant() {
                    let canon = canonical_generator(&coeff);
                    if !out.contains(&canon) {
                        out.push(canon);
                    }
                }
            }
        }
        out
    }
}

fn hat_params(params: &[VarId], vs: &mut VarSpace) -> BTreeMap<VarId, VarId> {
    let mut map = BTreeMap::new();
    for (i, &p) in params.iter().enumerate() {
        let name = format!("{}_hat", vs.name(p));
        let id = match vs.lookup(&name) {
            Some(id) => id,
            None => vs
                .intern(&name, VarKind::TildeParam { param: i })
                .expect("fresh hat name"),
        };
        map.insert(p, id);
    }
    map
}

/// Renames variables monomial-wise (used for the hat copies).
pub fn rename_vars(p: &Poly, map: &BTreeMap<VarId, VarId>) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let pairs = m
            .pairs()
            .iter()
            .map(|&(v, e)| (map.get(&v).copied().unwrap_or(v), e))
            .collect();
        out.add_term(Monomial::from_pairs(pairs), c.clone());
    }
    out
}

/// Convenience wrapper matching the spec surface.
pub fn field_membership(
    h: &RatFun,
    gens: &[RatFun],
    params: &[VarId],
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<bool> {
    let ideal = FieldIdeal::new(gens, params, vs, budget)?;
    Ok(ideal.contains(h))
}

/// Produces an irredundant low-degree generator set of the same field.
///
/// The raw generators first shrink to an irredundant subset by incremental
/// membership tests; the coefficients of the reduced membership basis of that
/// subset then provide canonical low-degree candidates (they generate exactly
/// the field); a final greedy pass drops anything redundant.
pub fn simplify_generators(
    raw: &[RatFun],
    params: &[VarId],
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<Vec<RatFun>> {
    let mut pool: Vec<RatFun> = Vec::new();
    for g in raw {
        let c = canonical_generator(g);
        if !c.is_constant() && !pool.contains(&c) {
            pool.push(c);
        }
    }
    pool.sort_by(|a, b| {
        (complexity_key(a), a.render(vs)).cmp(&(complexity_key(b), b.render(vs)))
    });
    if pool.is_empty() {
        return Ok(Vec::new());
    }

    // incremental irredundant core
    let mut core: Vec<RatFun> = Vec::new();
    let mut ideal: Option<FieldIdeal> = None;
    for g in &pool {
        let member = match &ideal {
            None => false,
            Some(fi) => fi.contains(g),
        };
        if !member {
            core.push(g.clone());
            ideal = Some(FieldIdeal::new(&core, params, vs, budget)?);
        }
    }
    let ideal = ideal.expect("nonempty pool");

    // canonical candidates from the reduced basis coefficients
    let hat_vars: BTreeSet<VarId> = ideal.hat_of.values().copied().collect();
    let mut candidates = ideal.reduced_coefficients(&hat_vars);
    candidates.sort_by(|a, b| {
        (complexity_key(a), a.render(vs)).cmp(&(complexity_key(b), b.render(vs)))
    });

    // greedy keep, then drop anything still redundant
    let mut kept: Vec<RatFun> = Vec::new();
    for c in &candidates {
        let member = if kept.is_empty() {
            false
        } else {
            FieldIdeal::new(&kept, params, vs, budget)?.contains(c)
        };
        if !member {
            kept.push(c.clone());
        }
    }
    loop {
        let mut dropped = false;
        for i in (0..kept.len()).rev() {
            if kept.len() == 1 {
                break;
            }
            let mut rest = kept.clone();
            let g = rest.remove(i);
            if FieldIdeal::new(&rest, params, vs, budget)?.contains(&g) {
                kept.remove(i);
                dropped = true;
            }
        }
        if !dropped {
            break;
        }
    }

    // mutual membership against the raw set (both directions must hold)
    let kept_ideal = FieldIdeal::new(&kept, params, vs, budget)?;
    for g in &pool {
        if !kept_ideal.contains(g) {
            return Err(Error::Other(format!(
                "simplified generators failed to recover a raw generator; \
                 keeping raw set (offender has numerator with {} terms)",
                g.num().num_terms()
            )));
        }
    }
    for g in &kept {
        if !ideal.contains(g) {
            return Err(Error::Other(
                "candidate generator escaped the raw field".into(),
            ));
        }
    }
    Ok(kept)
}

fn complexity_key(f: &RatFun) -> (u32, usize, usize) {
    (
        f.num().total_degree().max(f.den().total_degree()),
        f.num().num_terms() + f.den().num_terms(),
        f.num().support().len(),
    )
}

/// True iff the output orders of the IO-equations sum to the state dimension.
pub fn observability_condition(eqs: &[DiffPoly], m: &Model, vs: &VarSpace) -> bool {
    let total: usize = eqs.iter().map(|e| e.order_in_y(vs)).sum();
    total == m.n_states()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::lie_table;
    use crate::model::Model;

    fn io_of(src: &str) -> (Model, IoEquations, VarSpace, LieTable) {
        let m = Model::parse(src).unwrap();
        let mut vs = m.vars.clone();
        let n = m.n_states();
        let lie = lie_table(&m, n, &mut vs);
        let io = io_equations(&m, &lie, &mut vs, &Budget::default()).unwrap();
        (m, io, vs, lie)
    }

    const LV: &str = "\
model lv
states x1, x2
params a, b, c, d
outputs y1
x1' = a*x1 - b*x1*x2
x2' = -c*x2 + d*x1*x2
y1 = x1
";

    const HARMONIC: &str = "\
model harmonic
states x1, x2
params a, b
outputs y1
x1' = a*x2
x2' = b*x1
y1 = x1
";

    const EXPSUM: &str = "\
model expsum
states x1, x2
params a, b
outputs y1
x1' = a*x1
x2' = b*x2
y1 = x1 + x2
";

    const CRN: &str = "\
model crn
states X, A_UU, A_UX, A_XX, A_XU
params k1, k2
outputs y1
X' = k2*(A_UX + 2*A_XX + A_XU) - k1*X*(A_UX + A_XU + 2*A_UU)
A_UU' = k2*(A_UX + A_XU) - 2*k1*X*A_UU
A_UX' = k1*X*(A_UU - A_UX) + k2*(A_XX - A_UX)
A_XX' = k1*X*(A_UX + A_XU) - 2*k2*A_XX
A_XU' = k1*X*(A_UU - A_XU) + k2*(A_XX - A_XU)
y1 = X
";

    #[test]
    fn lv_io_equation() {
        let (m, io, vs, lie) = io_of(LV);
        assert_eq!(io.eqs.len(), 1);
        let e = &io.eqs[0];
        assert_eq!(
            e.render(&vs),
            "y1*y1'' - y1'^2 - d*y1^2*y1' + c*y1*y1' + a*d*y1^3 - a*c*y1^2"
        );
        assert_eq!(e.order_in_y(&vs), 2);
        assert!(e.vanishes_on(&lie, &vs));
        assert!(observability_condition(&io.eqs, &m, &vs));
    }

    #[test]
    fn harmonic_io_equation() {
        let (m, io, vs, lie) = io_of(HARMONIC);
        assert_eq!(io.eqs[0].render(&vs), "y1'' - a*b*y1");
        assert!(io.eqs[0].vanishes_on(&lie, &vs));
        assert!(observability_condition(&io.eqs, &m, &vs));
    }

    #[test]
    fn expsum_io_equation() {
        let (_, io, vs, lie) = io_of(EXPSUM);
        assert_eq!(io.eqs[0].render(&vs), "y1'' - (a + b)*y1' + a*b*y1");
        assert!(io.eqs[0].vanishes_on(&lie, &vs));
    }

    #[test]
    fn crn_io_equation_and_observability() {
        let (m, io, vs, lie) = io_of(CRN);
        assert_eq!(io.eqs[0].render(&vs), "y1'*y1''' - y1''^2 + 2*k1*y1'^3");
        assert_eq!(io.eqs[0].order_in_y(&vs), 3);
        assert!(io.eqs[0].vanishes_on(&lie, &vs));
        // order 3 < dimension 5
        assert!(!observability_condition(&io.eqs, &m, &vs));
    }

    #[test]
    fn lv_field_generators_and_simplification() {
        let (m, io, mut vs, _) = io_of(LV);
        let raw = field_generators(&io.eqs);
        let (a, b, c, d) = (m.params[0], m.params[1], m.params[2], m.params[3]);
        let expect: Vec<RatFun> = [
            Poly::var(d),
            Poly::var(c),
            Poly::var(a).mul(&Poly::var(d)),
            Poly::var(a).mul(&Poly::var(c)),
        ]
        .into_iter()
        .map(RatFun::from_poly)
        .collect();
        assert_eq!(raw, expect);
        let _ = b;

        let simplified =
            simplify_generators(&raw, &m.params, &mut vs, &Budget::default()).unwrap();
        let mut names: Vec<String> = simplified.iter().map(|g| g.render(&vs)).collect();
        names.sort();
        assert_eq!(names, vec!["a", "c", "d"]);
    }

    #[test]
    fn expsum_field_and_membership() {
        let (m, io, mut vs, _) = io_of(EXPSUM);
        let raw = field_generators(&io.eqs);
        let (a, b) = (m.params[0], m.params[1]);
        // {a+b, ab}
        let sum = RatFun::from_poly(Poly::var(a).add(&Poly::var(b)));
        let prod = RatFun::from_poly(Poly::var(a).mul(&Poly::var(b)));
        assert_eq!(raw, vec![sum.clone(), prod.clone()]);

        let budget = Budget::default();
        // h = a + b is a generator
        assert!(field_membership(&sum, &raw, &m.params, &mut vs, &budget).unwrap());
        // h = a is only algebraic over the field
        assert!(!field_membership(&RatFun::var(a), &raw, &m.params, &mut vs, &budget).unwrap());

        let simplified = simplify_generators(&raw, &m.params, &mut vs, &budget).unwrap();
        let mut names: Vec<String> = simplified.iter().map(|g| g.render(&vs)).collect();
        names.sort();
        assert_eq!(names, vec!["a + b", "a*b"]);
    }

    #[test]
    fn rational_combination_is_member() {
        // d = (ad)/(ac) * c  in  Q(d, c, ad, ac)
        let (m, io, mut vs, _) = io_of(LV);
        let raw = field_generators(&io.eqs);
        let d = RatFun::var(m.params[3]);
        assert!(field_membership(&d, &raw, &m.params, &mut vs, &Budget::default()).unwrap());
        let _ = io;
    }

    #[test]
    fn crn_field_is_k1() {
        let (m, io, mut vs, _) = io_of(CRN);
        let raw = field_generators(&io.eqs);
        let simplified =
            simplify_generators(&raw, &m.params, &mut vs, &Budget::default()).unwrap();
        assert_eq!(simplified, vec![RatFun::var(m.params[0])]);
    }
}
