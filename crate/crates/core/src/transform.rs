//! Recovery of the state transformation between the source model and its
//! reparametrization by equating Lie derivatives, the closure check
//! `w' = f(w, alpha~, u)`, and the linear-ansatz dimension reduction used
//! when the observability condition fails.

use crate::error::{Error, Result};
use crate::groebner::{self, Budget};
use crate::ioeq::{self, DiffPoly};
use crate::lie::{determinant, lie_table, LieTable};
use crate::model::Model;
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::specialize::{concrete_twin, Reparametrized};
use crate::vars::{VarId, VarKind, VarSpace};
use std::collections::BTreeMap;

/// Per-new-state algebraic relation `P(w_i, x, alpha) = 0`, with the explicit
/// solved form when the relation is degree one in `w_i`.
#[derive(Clone, Debug)]
pub struct TransformEntry {
    /// The new state, interned in the working space.
    pub new_state: VarId,
    pub defining: Poly,
    pub solved: Option<RatFun>,
    /// Closure verdict per branch when several branches were tried.
    pub branch_note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct StateTransform {
    pub entries: Vec<TransformEntry>,
    /// The final relations contain no input jets.
    pub u_independent: bool,
}

impl StateTransform {
    pub fn solved_forms(&self) -> Option<Vec<(VarId, RatFun)>> {
        self.entries
            .iter()
            .map(|e| e.solved.clone().map(|h| (e.new_state, h)))
            .collect()
    }
}

/// Interns `w1..wn` into the working space and maps the twin model's
/// variables into it by name.
fn merge_twin_vars(
    twin: &Model,
    twin_vs: &VarSpace,
    vs: &mut VarSpace,
) -> Result<BTreeMap<VarId, VarId>> {
    let mut map = BTreeMap::new();
    for id in twin_vs.ids() {
        let name = twin_vs.name(id);
        let target = match vs.lookup(name) {
            Some(t) => t,
            None => {
                let kind = match twin_vs.kind(id) {
                    VarKind::State => VarKind::NewState { idx: id.idx() },
                    other => other.clone(),
                };
                vs.intern(name, kind).map_err(Error::Validation)?
            }
        };
        map.insert(id, target);
    }
    let _ = twin;
    Ok(map)
}

fn rename_ratfun(f: &RatFun, map: &BTreeMap<VarId, VarId>) -> RatFun {
    RatFun::new(
        ioeq::rename_vars(f.num(), map),
        ioeq::rename_vars(f.den(), map),
    )
    .expect("nonzero denominator")
}

/// Solves `R_i(alpha~, w, u) = R_i(alpha, x, u)` for the new states.
///
/// The system is first attacked triangularly (equations linear in some `w`
/// get solved and substituted); states the triangular pass misses fall back
/// to a per-state elimination Gröbner basis. Final relations are certified
/// free of input jets and consistent with every remaining equation.
pub fn solve_state_transform(
    m: &Model,
    rep: &Reparametrized,
    lie_old: &LieTable,
    observable: bool,
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<StateTransform> {
    if !observable {
        return Err(Error::PreconditionObservability);
    }
    let twin = concrete_twin(rep, m)?;
    let mut twin_vs = twin.vars.clone();
    let lie_new = lie_table(&twin, lie_old.max_order, &mut twin_vs);
    let map = merge_twin_vars(&twin, &twin_vs, vs)?;
    let w_vars: Vec<VarId> = twin.states.iter().map(|&s| map[&s]).collect();

    // eq:xw, ordered by derivative order then output
    let mut equations: Vec<RatFun> = Vec::new();
    for order in 0..=lie_old.max_order {
        for j in 0..m.outputs.len() {
            let lhs = rename_ratfun(&lie_new.entries[j][order], &map);
            equations.push(lhs.sub(&lie_old.entries[j][order]));
        }
    }

    let (solved, leftover) = solve_triangular(&equations, &w_vars);

    let mut entries: Vec<TransformEntry> = Vec::new();
    let mut all_solved: BTreeMap<VarId, RatFun> = solved.iter().cloned().collect();
    for &w in &w_vars {
        if let Some(h) = all_solved.get(&w) {
            entries.push(TransformEntry {
                new_state: w,
                defining: Poly::var(w).mul(h.den()).sub(h.num()).primitive(),
                solved: Some(h.clone()),
                branch_note: None,
            });
            continue;
        }
        // elimination fallback for this state
        let entry = eliminate_single_state(m, &equations, &w_vars, w, vs, budget)?;
        if let Some(h) = &entry.solved {
            all_solved.insert(w, h.clone());
        }
        entries.push(entry);
    }

    // consistency: every leftover equation must vanish under the solved forms
    if all_solved.len() == w_vars.len() {
        for eq in &leftover {
            let r = eq.substitute(&all_solved)?;
            if !r.is_zero() {
                return Err(Error::NonZeroDimensional);
            }
        }
    }

    let u_independent = entries.iter().all(|e| {
        e.defining
            .support()
            .iter()
            .all(|v| !matches!(vs.kind(*v), VarKind::Input | VarKind::InJet { .. }))
    });
    Ok(StateTransform {
        entries,
        u_independent,
    })
}

/// Triangular pass: repeatedly solve an equation that is linear in some
/// unknown with a nonzero coefficient, substituting everywhere.
fn solve_triangular(
    equations: &[RatFun],
    unknowns: &[VarId],
) -> (Vec<(VarId, RatFun)>, Vec<RatFun>) {
    let mut remaining: Vec<RatFun> = equations.to_vec();
    let mut solved: Vec<(VarId, RatFun)> = Vec::new();
    loop {
        let mut action: Option<(usize, VarId, RatFun)> = None;
        'search: for (ei, eq) in remaining.iter().enumerate() {
            if eq.is_zero() {
                continue;
            }
            let p = eq.num();
            for &w in unknowns {
                if solved.iter().any(|(s, _)| *s == w) {
                    continue;
                }
                if p.degree_in(w) != 1 {
                    continue;
                }
                let uni = p.as_univariate(w);
                let a = uni[1].1.clone();
                let b = uni[0].1.clone();
                if a.is_zero() {
                    continue;
                }
                let expr = RatFun::new(b.neg(), a).expect("nonzero linear coefficient");
                action = Some((ei, w, expr));
                break 'search;
            }
        }
        let Some((ei, w, expr)) = action else { break };
        remaining.remove(ei);
        let mut map = BTreeMap::new();
        map.insert(w, expr.clone());
        for eq in remaining.iter_mut() {
            if eq.contains_var(w) {
                if let Ok(s) = eq.substitute(&map) {
                    *eq = s;
                }
            }
        }
        for (_, h) in solved.iter_mut() {
            if h.contains_var(w) {
                if let Ok(s) = h.substitute(&map) {
                    *h = s;
                }
            }
        }
        solved.push((w, expr));
    }
    remaining.retain(|e| !e.is_zero());
    (solved, remaining)
}

/// Per-state elimination: a Gröbner basis with the other new states leading
/// yields `P(w_i, x, alpha)`; degree-one relations give the solved form, and
/// degree-two relations with a perfect-square discriminant yield explicit
/// branches.
fn eliminate_single_state(
    m: &Model,
    equations: &[RatFun],
    w_vars: &[VarId],
    w: VarId,
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<TransformEntry> {
    let mut gens: Vec<Poly> = Vec::new();
    let mut dens: Vec<Poly> = Vec::new();
    for eq in equations {
        if eq.is_zero() {
            continue;
        }
        gens.push(eq.num().clone());
        if eq.den().as_constant().is_none() && !dens.contains(eq.den()) {
            dens.push(eq.den().clone());
        }
    }
    let others: Vec<VarId> = w_vars.iter().copied().filter(|&v| v != w).collect();
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
    elim.extend(others.iter().copied());
    let mut ring = elim.clone();
    ring.push(w);
    let mut rest: Vec<VarId> = Vec::new();
    for g in &gens {
        for v in g.support() {
            if !ring.contains(&v) && !m.params.contains(&v) && !rest.contains(&v) {
                rest.push(v);
            }
        }
    }
    ring.extend(rest);
    let out = groebner::eliminate(&gens, &elim, &ring, budget)?;
    let mut best: Option<Poly> = None;
    for p in out {
        if !p.contains_var(w) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => p.degree_in(w) < b.degree_in(w),
        };
        if better {
            best = Some(p);
        }
    }
    let defining = best.ok_or(Error::NonZeroDimensional)?;
    let deg = defining.degree_in(w);
    if deg == 1 {
        let uni = defining.as_univariate(w);
        let solved = RatFun::new(uni[0].1.neg(), uni[1].1.clone())?;
        return Ok(TransformEntry {
            new_state: w,
            defining,
            solved: Some(solved),
            branch_note: None,
        });
    }
    if deg == 2 {
        // branches (-B +- sqrt(B^2 - 4AC)) / (2A) when the discriminant is a
        // perfect square; the caller keeps the branch that closes
        let uni = defining.as_univariate(w);
        let (a, b, c) = (uni[2].1.clone(), uni[1].1.clone(), uni[0].1.clone());
        let disc = b.mul(&b).sub(&a.mul(&c).scale(&crate::poly::rat(4)));
        if let Some(s) = disc.sqrt() {
            let two_a = a.scale(&crate::poly::rat(2));
            let plus = RatFun::new(b.neg().add(&s), two_a.clone())?;
            let _minus = RatFun::new(b.neg().sub(&s), two_a)?;
            return Ok(TransformEntry {
                new_state: w,
                defining,
                solved: Some(plus),
                branch_note: Some("degree-2 relation; positive branch kept first".into()),
            });
        }
        return Ok(TransformEntry {
            new_state: w,
            defining,
            solved: None,
            branch_note: Some("degree-2 relation with non-square discriminant".into()),
        });
    }
    Ok(TransformEntry {
        new_state: w,
        defining,
        solved: None,
        branch_note: Some(format!("degree-{deg} relation; no branch selected")),
    })
}

/// True iff differentiating every solved form along the source dynamics
/// reproduces the reparametrized right-hand sides: `d/dt h_i(x) =
/// f_i(h(x), alpha~, u)` as a symbolic identity.
pub fn check_closure(
    t: &StateTransform,
    m: &Model,
    rep: &Reparametrized,
    vs: &mut VarSpace,
) -> Result<bool> {
    let Some(solved) = t.solved_forms() else {
        return Ok(false);
    };
    let twin = concrete_twin(rep, m)?;
    let twin_vs = twin.vars.clone();
    let map = merge_twin_vars(&twin, &twin_vs, vs)?;
    let subst: BTreeMap<VarId, RatFun> = solved.iter().cloned().collect();
    for (i, (_, h)) in solved.iter().enumerate() {
        // d/dt h along the source dynamics
        let mut dot = RatFun::zero();
        for (k, &x) in m.states.iter().enumerate() {
            let d = h.differentiate(x);
            if !d.is_zero() {
                dot = dot.add(&d.mul(&m.rhs[k]));
            }
        }
        // f_i of the twin with w -> h(x)
        let f_new = rename_ratfun(&twin.rhs[i], &map).substitute(&subst)?;
        if dot != f_new {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// dimension reduction (linear ansatz)
// ---------------------------------------------------------------------------

/// A reduced realization with the same IO-equations.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub model: Model,
    /// Per original state: index of the fresh state it maps to, or none (-> 0).
    pub ansatz: Vec<Option<usize>>,
    /// The recovered map from source states to the fresh states, in the
    /// working space (`w_k = expr(x, alpha)`).
    pub solved: Vec<(VarId, RatFun)>,
}

/// Searches sparse {0,1} substitutions `x_k -> w_l or 0` of rank `d = sum of
/// IO orders`, builds the candidate reduced dynamics by solving the linear
/// system on `w'`, and accepts the first candidate with the source model's
/// IO-equations.
pub fn reduce_dimension_linear_ansatz(
    m: &Model,
    eqs: &[DiffPoly],
    lie: &LieTable,
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<Reduction> {
    let n = m.n_states();
    let d: usize = eqs.iter().map(|e| e.order_in_y(vs)).sum();
    if d == 0 {
        return Err(Error::AnsatzFailed);
    }
    let source_io = io_render(m, budget)?;

    // fresh states in the working space
    let w_vars: Vec<VarId> = (0..d)
        .map(|i| {
            let name = format!("w{}", i + 1);
            vs.lookup(&name)
                .unwrap_or_else(|| vs.intern(&name, VarKind::NewState { idx: i }).unwrap())
        })
        .collect();

    for subset in combinations(n, d) {
        let mut ansatz: Vec<Option<usize>> = vec![None; n];
        for (l, &k) in subset.iter().enumerate() {
            ansatz[k] = Some(l);
        }
        if let Some(red) = try_ansatz(m, lie, &ansatz, &w_vars, d, &source_io, vs, budget)? {
            return Ok(red);
        }
    }
    Err(Error::AnsatzFailed)
}

fn io_render(m: &Model, budget: &Budget) -> Result<Vec<String>> {
    let mut vs = m.vars.clone();
    let lie = lie_table(m, m.n_states(), &mut vs);
    let io = ioeq::io_equations(m, &lie, &mut vs, budget)?;
    Ok(io.eqs.iter().map(|e| e.render(&vs)).collect())
}

/// Lexicographically ordered d-subsets of {0..n}.
fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    if d > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - d {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..d {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn try_ansatz(
    m: &Model,
    lie: &LieTable,
    ansatz: &[Option<usize>],
    w_vars: &[VarId],
    d: usize,
    source_io: &[String],
    vs: &mut VarSpace,
    budget: &Budget,
) -> Result<Option<Reduction>> {
    // sigma: substitute states by fresh states or zero in the Lie entries
    let mut sigma: BTreeMap<VarId, RatFun> = BTreeMap::new();
    for (k, &x) in m.states.iter().enumerate() {
        let image = match ansatz[k] {
            Some(l) => RatFun::var(w_vars[l]),
            None => RatFun::zero(),
        };
        sigma.insert(x, image);
    }
    // substituted ladder, rows (order, output) ascending, d+1 levels
    let mut hat: Vec<RatFun> = Vec::new();
    let mut hat_next: Vec<RatFun> = Vec::new();
    let mut used_rows = 0usize;
    'ladder: for order in 0..=lie.max_order {
        for j in 0..m.outputs.len() {
            if order + 1 > lie.max_order {
                break 'ladder;
            }
            let s_i = match lie.entries[j][order].substitute(&sigma) {
                Ok(v) => v,
                Err(_) => return Ok(None),
            };
            let s_next = match lie.entries[j][order + 1].substitute(&sigma) {
                Ok(v) => v,
                Err(_) => return Ok(None),
            };
            hat.push(s_i);
            hat_next.push(s_next);
            used_rows += 1;
            if used_rows == d {
                break 'ladder;
            }
        }
    }
    if hat.len() < d {
        return Ok(None);
    }

    // Jacobian of the ladder with respect to the fresh states
    let jac: Vec<Vec<RatFun>> = hat
        .iter()
        .map(|s| w_vars.iter().map(|&w| s.differentiate(w)).collect())
        .collect();
    if determinant(&jac).is_zero() {
        return Ok(None);
    }

    // right-hand sides: d/dt S_i = S_{i+1} minus the input-jet chain terms
    let mut rhs_vec: Vec<RatFun> = Vec::new();
    for (row, s_i) in hat.iter().enumerate() {
        let mut r = hat_next[row].clone();
        for u_jets in &lie.jets.u {
            for s in 0..lie.max_order {
                let dd = s_i.differentiate(u_jets[s]);
                if !dd.is_zero() {
                    r = r.sub(&dd.mul(&RatFun::var(u_jets[s + 1])));
                }
            }
        }
        rhs_vec.push(r);
    }
    let Some(f_new) = solve_linear(&jac, &rhs_vec) else {
        return Ok(None);
    };

    // build the candidate model in a fresh space
    let mut new_vs = VarSpace::new();
    let states: Vec<VarId> = (0..d)
        .map(|i| new_vs.intern(&format!("w{}", i + 1), VarKind::State).unwrap())
        .collect();
    let params: Vec<VarId> = m
        .params
        .iter()
        .map(|&p| new_vs.intern(m.vars.name(p), VarKind::Param).unwrap())
        .collect();
    let inputs: Vec<VarId> = m
        .inputs
        .iter()
        .map(|&u| new_vs.intern(m.vars.name(u), VarKind::Input).unwrap())
        .collect();
    let outputs: Vec<VarId> = m
        .outputs
        .iter()
        .map(|&y| new_vs.intern(m.vars.name(y), VarKind::Output).unwrap())
        .collect();
    let mut rename: BTreeMap<VarId, VarId> = BTreeMap::new();
    for (i, &w) in w_vars.iter().enumerate() {
        rename.insert(w, states[i]);
    }
    for (i, &p) in m.params.iter().enumerate() {
        rename.insert(p, params[i]);
    }
    for (i, &u) in m.inputs.iter().enumerate() {
        rename.insert(u, inputs[i]);
    }
    let rhs: Vec<RatFun> = f_new.iter().map(|f| rename_ratfun(f, &rename)).collect();
    let obs: Vec<RatFun> = m
        .obs
        .iter()
        .map(|g| rename_ratfun(&g.substitute(&sigma).expect("sigma total"), &rename))
        .collect();
    if rhs.iter().chain(obs.iter()).any(|f| {
        f.support()
            .iter()
            .any(|v| matches!(new_vs.kind(*v), VarKind::NewState { .. }))
    }) {
        return Ok(None);
    }
    let candidate = Model {
        name: format!("{}_reduced", m.name),
        vars: new_vs,
        states,
        params,
        inputs,
        outputs,
        rhs,
        obs,
    };

    // accept only if the IO-equations are preserved
    let candidate_io = match io_render(&candidate, budget) {
        Ok(io) => io,
        Err(_) => return Ok(None),
    };
    if candidate_io != source_io {
        return Ok(None);
    }

    // recover the transform w(x) by equating the substituted ladder with the
    // original Lie entries
    let mut equations: Vec<RatFun> = Vec::new();
    let mut row = 0usize;
    'outer: for order in 0..=lie.max_order {
        for j in 0..m.outputs.len() {
            equations.push(hat[row].sub(&lie.entries[j][order]));
            row += 1;
            if row == d {
                break 'outer;
            }
        }
    }
    let (solved, _leftover) = solve_triangular(&equations, w_vars);
    let mut solved_map: Vec<(VarId, RatFun)> = Vec::new();
    for &w in w_vars {
        match solved.iter().find(|(s, _)| *s == w) {
            Some((_, h)) => solved_map.push((w, h.clone())),
            None => return Ok(None),
        }
    }
    let _ = vs;
    Ok(Some(Reduction {
        model: candidate,
        ansatz: ansatz.to_vec(),
        solved: solved_map,
    }))
}

/// Gaussian elimination over the rational-function field.
fn solve_linear(a: &[Vec<RatFun>], b: &[RatFun]) -> Option<Vec<RatFun>> {
    let n = a.len();
    let mut m: Vec<Vec<RatFun>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut perm: Vec<usize> = Vec::new();
    for col in 0..n {
        let p = (0..n).find(|r| !perm.contains(r) && !m[*r][col].is_zero())?;
        perm.push(p);
        let pivot = m[p][col].clone();
        for r in 0..n {
            if r != p && !m[r][col].is_zero() {
                let factor = m[r][col].div(&pivot).ok()?;
                for c in col..=n {
                    let sub = factor.mul(&m[p][c]);
                    m[r][c] = m[r][c].sub(&sub);
                }
            }
        }
    }
    let mut out = vec![RatFun::zero(); n];
    for (col, &p) in perm.iter().enumerate() {
        out[col] = m[p][n].div(&m[p][col]).ok()?;
    }
    Some(out)
}

/// Identity reduction used when the observability condition already holds.
pub fn identity_reduction(m: &Model, vs: &mut VarSpace) -> Reduction {
    let n = m.n_states();
    let w_vars: Vec<VarId> = (0..n)
        .map(|i| {
            let name = format!("w{}", i + 1);
            vs.lookup(&name)
                .unwrap_or_else(|| vs.intern(&name, VarKind::NewState { idx: i }).unwrap())
        })
        .collect();
    let mut new_vs = VarSpace::new();
    let states: Vec<VarId> = (0..n)
        .map(|i| new_vs.intern(&format!("w{}", i + 1), VarKind::State).unwrap())
        .collect();
    let params: Vec<VarId> = m
        .params
        .iter()
        .map(|&p| new_vs.intern(m.vars.name(p), VarKind::Param).unwrap())
        .collect();
    let inputs: Vec<VarId> = m
        .inputs
        .iter()
        .map(|&u| new_vs.intern(m.vars.name(u), VarKind::Input).unwrap())
        .collect();
    let outputs: Vec<VarId> = m
        .outputs
        .iter()
        .map(|&y| new_vs.intern(m.vars.name(y), VarKind::Output).unwrap())
        .collect();
    let mut rename: BTreeMap<VarId, VarId> = BTreeMap::new();
    for (i, &x) in m.states.iter().enumerate() {
        rename.insert(x, states[i]);
    }
    for (i, &p) in m.params.iter().enumerate() {
        rename.insert(p, params[i]);
    }
    for (i, &u) in m.inputs.iter().enumerate() {
        rename.insert(u, inputs[i]);
    }
    let rhs = m.rhs.iter().map(|f| rename_ratfun(f, &rename)).collect();
    let obs = m.obs.iter().map(|f| rename_ratfun(f, &rename)).collect();
    Reduction {
        model: Model {
            name: format!("{}_reduced", m.name),
            vars: new_vs,
            states,
            params,
            inputs,
            outputs,
            rhs,
            obs,
        },
        ansatz: (0..n).map(Some).collect(),
        solved: m
            .states
            .iter()
            .enumerate()
            .map(|(i, &x)| (w_vars[i], RatFun::var(x)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::{field_generators, io_equations, simplify_generators};
    use crate::lie::{jacobian, minor_and_coefficient, rank_probabilistic};
    use crate::model::common_denominator;
    use crate::specialize::{apply_specialization, build_system, solve_specialization};

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

    const LV_INPUT: &str = "\
model lv_input
states x1, x2
params a, b, c, d
inputs u1
outputs y1
x1' = a*x1 - b*x1*x2 + u1*x1
x2' = -c*x2 + d*x1*x2 + u1*x2
y1 = x1
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

    struct Ctx {
        m: Model,
        vs: VarSpace,
        lie: LieTable,
        rep: Reparametrized,
        observable: bool,
    }

    fn full_prepare(src: &str) -> Ctx {
        let budget = Budget::default();
        let m = Model::parse(src).unwrap();
        let mut vs = m.vars.clone();
        let n = m.n_states();
        let lie = lie_table(&m, n, &mut vs);
        let io = io_equations(&m, &lie, &mut vs, &budget).unwrap();
        let observable = ioeq::observability_condition(&io.eqs, &m, &vs);
        let raw = field_generators(&io.eqs);
        let simplified = simplify_generators(&raw, &m.params, &mut vs, &budget).unwrap();
        let jac = jacobian(&lie, &m);
        let cert = rank_probabilistic(&jac, 3, 42).unwrap();
        let (_, d0) = minor_and_coefficient(&jac, &cert, &m).unwrap();
        let c = common_denominator(&m);
        let sys = build_system(&simplified, &d0, &c, &m, &mut vs);
        let spec = solve_specialization(&sys, &m, &mut vs, &budget).unwrap();
        let rep = apply_specialization(&m, &spec, &vs).unwrap();
        Ctx {
            m,
            vs,
            lie,
            rep,
            observable,
        }
    }

    #[test]
    fn lv_transform_is_scaling() {
        let mut ctx = full_prepare(LV);
        let t = solve_state_transform(
            &ctx.m,
            &ctx.rep,
            &ctx.lie,
            ctx.observable,
            &mut ctx.vs,
            &Budget::default(),
        )
        .unwrap();
        let (x1, x2, b) = (ctx.m.states[0], ctx.m.states[1], ctx.m.params[1]);
        let solved = t.solved_forms().unwrap();
        // w1 = x1, w2 = b x2
        assert_eq!(solved[0].1, RatFun::var(x1));
        assert_eq!(
            solved[1].1,
            RatFun::from_poly(Poly::var(b).mul(&Poly::var(x2)))
        );
        assert!(t.u_independent);
        assert!(check_closure(&t, &ctx.m, &ctx.rep, &mut ctx.vs).unwrap());
    }

    #[test]
    fn harmonic_transform_is_scaling() {
        let mut ctx = full_prepare(HARMONIC);
        let t = solve_state_transform(
            &ctx.m,
            &ctx.rep,
            &ctx.lie,
            ctx.observable,
            &mut ctx.vs,
            &Budget::default(),
        )
        .unwrap();
        let (x1, x2, b) = (ctx.m.states[0], ctx.m.states[1], ctx.m.params[1]);
        let solved = t.solved_forms().unwrap();
        assert_eq!(solved[0].1, RatFun::var(x1));
        // w2 = x2 / b
        assert_eq!(
            solved[1].1,
            RatFun::new(Poly::var(x2), Poly::var(b)).unwrap()
        );
        assert!(check_closure(&t, &ctx.m, &ctx.rep, &mut ctx.vs).unwrap());
    }

    #[test]
    fn corrupted_transform_fails_closure() {
        let mut ctx = full_prepare(HARMONIC);
        let mut t = solve_state_transform(
            &ctx.m,
            &ctx.rep,
            &ctx.lie,
            ctx.observable,
            &mut ctx.vs,
            &Budget::default(),
        )
        .unwrap();
        // corrupt w2 = x2 (instead of x2/b)
        let x2 = ctx.m.states[1];
        t.entries[1].solved = Some(RatFun::var(x2));
        assert!(!check_closure(&t, &ctx.m, &ctx.rep, &mut ctx.vs).unwrap());
    }

    #[test]
    fn lv_with_input_transform_u_independent() {
        let mut ctx = full_prepare(LV_INPUT);
        let t = solve_state_transform(
            &ctx.m,
            &ctx.rep,
            &ctx.lie,
            ctx.observable,
            &mut ctx.vs,
            &Budget::default(),
        )
        .unwrap();
        let (x1, x2, b) = (ctx.m.states[0], ctx.m.states[1], ctx.m.params[1]);
        let solved = t.solved_forms().unwrap();
        assert_eq!(solved[0].1, RatFun::var(x1));
        assert_eq!(
            solved[1].1,
            RatFun::from_poly(Poly::var(b).mul(&Poly::var(x2)))
        );
        assert!(t.u_independent);
        assert!(check_closure(&t, &ctx.m, &ctx.rep, &mut ctx.vs).unwrap());
    }

    #[test]
    fn crn_reduction_matches_known_realization() {
        let budget = Budget::default();
        let m = Model::parse(CRN).unwrap();
        let mut vs = m.vars.clone();
        let n = m.n_states();
        let lie = lie_table(&m, n, &mut vs);
        let io = io_equations(&m, &lie, &mut vs, &budget).unwrap();
        assert!(!ioeq::observability_condition(&io.eqs, &m, &vs));
        let red = reduce_dimension_linear_ansatz(&m, &io.eqs, &lie, &mut vs, &budget).unwrap();
        // ansatz X -> w1, A_UU -> w2, A_UX -> w3, A_XX, A_XU -> 0
        assert_eq!(
            red.ansatz,
            vec![Some(0), Some(1), Some(2), None, None]
        );
        // reduced model: w1' = k2 w3 - k1 w1 (w3 + 2 w2), w2' same, w3' negated
        let rendered = crate::model::render_model(&red.model);
        assert!(
            rendered.contains("w1' = -2*k1*w1*w2 - k1*w1*w3 + k2*w3"),
            "got:\n{rendered}"
        );
        assert!(
            rendered.contains("w2' = -2*k1*w1*w2 - k1*w1*w3 + k2*w3"),
            "got:\n{rendered}"
        );
        assert!(
            rendered.contains("w3' = 2*k1*w1*w2 + k1*w1*w3 - k2*w3"),
            "got:\n{rendered}"
        );
        // transform: w1 = X, w2 = A_UU - A_XX, w3 = A_UX + 2 A_XX + A_XU
        let (x, auu, aux_, axx, axu) = (
            m.states[0],
            m.states[1],
            m.states[2],
            m.states[3],
            m.states[4],
        );
        assert_eq!(red.solved[0].1, RatFun::var(x));
        assert_eq!(
            red.solved[1].1,
            RatFun::from_poly(Poly::var(auu).sub(&Poly::var(axx)))
        );
        assert_eq!(
            red.solved[2].1,
            RatFun::from_poly(
                Poly::var(aux_)
                    .add(&Poly::var(axx).scale(&crate::poly::rat(2)))
                    .add(&Poly::var(axu))
            )
        );
    }

    #[test]
    fn identity_reduction_when_observable() {
        let m = Model::parse(LV).unwrap();
        let mut vs = m.vars.clone();
        let red = identity_reduction(&m, &mut vs);
        assert_eq!(red.model.n_states(), 2);
        assert_eq!(red.ansatz, vec![Some(0), Some(1)]);
        let io_src = io_render(&m, &Budget::default()).unwrap();
        let io_red = io_render(&red.model, &Budget::default()).unwrap();
        assert_eq!(io_src, io_red);
    }

    #[test]
    fn unobservable_expsum_reduces_to_one_state() {
        let src = "\
model expsum_partial
states x1, x2
params a, b
outputs y1
x1' = a*x1
x2' = b*x2
y1 = x1
";
        let budget = Budget::default();
        let m = Model::parse(src).unwrap();
        let mut vs = m.vars.clone();
        let n = m.n_states();
        let lie = lie_table(&m, n, &mut vs);
        let io = io_equations(&m, &lie, &mut vs, &budget).unwrap();
        assert_eq!(io.eqs[0].order_in_y(&vs), 1);
        assert!(!ioeq::observability_condition(&io.eqs, &m, &vs));
        let red = reduce_dimension_linear_ansatz(&m, &io.eqs, &lie, &mut vs, &budget).unwrap();
        assert_eq!(red.model.n_states(), 1);
        assert_eq!(red.ansatz, vec![Some(0), None]);
        assert_eq!(red.solved[0].1, RatFun::var(m.states[0]));
    }

    #[test]
    fn transform_requires_observability() {
        let mut ctx = full_prepare(LV);
        let err = solve_state_transform(
            &ctx.m,
            &ctx.rep,
            &ctx.lie,
            false,
            &mut ctx.vs,
            &Budget::default(),
        );
        assert!(matches!(err, Err(Error::PreconditionObservability)));
    }
}
