//! Lie derivatives of the outputs, the Jacobian with respect to the states,
//! randomized rank certificates, and the distinguished minor coefficient that
//! feeds the specialization inequation.

use crate::error::{Error, Result};
use crate::exec;
use crate::model::Model;
use crate::modp;
use crate::poly::{Monomial, Poly};
use crate::ratfun::RatFun;
use crate::vars::{VarId, VarKind, VarSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Jet variables for outputs and inputs. Order 0 of an output is the output
/// symbol itself; order 0 of an input is the input symbol.
#[derive(Clone, Debug)]
pub struct JetVars {
    pub y: Vec<Vec<VarId>>,
    pub u: Vec<Vec<VarId>>,
}

impl JetVars {
    /// Interns jets up to `max_order` for every output and input of `m`.
    /// `vs` must extend the model's own variable space.
    pub fn intern(vs: &mut VarSpace, m: &Model, max_order: usize) -> JetVars {
        let mut y = Vec::new();
        for (j, &out) in m.outputs.iter().enumerate() {
            let mut jets = vec![out];
            let base = vs.name(out).to_string();
            let mut primes = String::new();
            for ord in 1..=max_order {
                primes.push('\'');
                let name = format!("{base}{primes}");
                let id = match vs.lookup(&name) {
                    Some(id) => id,
                    None => vs
                        .intern(&name, VarKind::OutJet { output: j, order: ord })
                        .expect("fresh jet name"),
                };
                jets.push(id);
            }
            y.push(jets);
        }
        let mut u = Vec::new();
        for (k, &inp) in m.inputs.iter().enumerate() {
            let mut jets = vec![inp];
            let base = vs.name(inp).to_string();
            let mut primes = String::new();
            for ord in 1..=max_order {
                primes.push('\'');
                let name = format!("{base}{primes}");
                let id = match vs.lookup(&name) {
                    Some(id) => id,
                    None => vs
                        .intern(&name, VarKind::InJet { input: k, order: ord })
                        .expect("fresh jet name"),
                };
                jets.push(id);
            }
            u.push(jets);
        }
        JetVars { y, u }
    }

    pub fn all_y(&self) -> impl Iterator<Item = VarId> + '_ {
        self.y.iter().flatten().copied()
    }

    pub fn all_u(&self) -> impl Iterator<Item = VarId> + '_ {
        self.u.iter().flatten().copied()
    }
}

/// Table of Lie derivatives: `entries[j][i]` writes `y_j^(i)` as a rational
/// function of states, parameters and input jets of order <= i.
#[derive(Clone, Debug)]
pub struct LieTable {
    pub jets: JetVars,
    pub entries: Vec<Vec<RatFun>>,
    pub max_order: usize,
}

/// Builds the Lie table up to `max_order` (the pipeline uses n = #states).
pub fn lie_table(m: &Model, max_order: usize, vs: &mut VarSpace) -> LieTable {
    let jets = JetVars::intern(vs, m, max_order + 1);
    let mut entries = Vec::with_capacity(m.outputs.len());
    for j in 0..m.outputs.len() {
        let mut rows: Vec<RatFun> = vec![m.obs[j].clone()];
        for i in 0..max_order {
            let prev = &rows[i];
            let mut next = RatFun::zero();
            for (k, &x) in m.states.iter().enumerate() {
                let d = prev.differentiate(x);
                if !d.is_zero() {
                    next = next.add(&d.mul(&m.rhs[k]));
                }
            }
            for u_jets in &jets.u {
                for s in 0..=i {
                    let d = prev.differentiate(u_jets[s]);
                    if !d.is_zero() {
                        next = next.add(&d.mul(&RatFun::var(u_jets[s + 1])));
                    }
                }
            }
            rows.push(next);
        }
        entries.push(rows);
    }
    LieTable {
        jets,
        entries,
        max_order,
    }
}

/// Symbolic check of the defining recurrence; used by tests and diagnostics.
pub fn verify_recurrence(t: &LieTable, m: &Model) -> bool {
    for (j, rows) in t.entries.iter().enumerate() {
        if rows[0] != m.obs[j] {
            return false;
        }
        for i in 0..t.max_order {
            let mut expect = RatFun::zero();
            for (k, &x) in m.states.iter().enumerate() {
                expect = expect.add(&rows[i].differentiate(x).mul(&m.rhs[k]));
            }
            for u_jets in &t.jets.u {
                for s in 0..=i {
                    let d = rows[i].differentiate(u_jets[s]);
                    if !d.is_zero() {
                        expect = expect.add(&d.mul(&RatFun::var(u_jets[s + 1])));
                    }
                }
            }
            if expect != rows[i + 1] {
                return false;
            }
        }
    }
    true
}

/// Row label of the Jacobian: output index and derivative order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct RowId {
    pub output: usize,
    pub order: usize,
}

/// Jacobian of the Lie table with respect to the states. Rows ascend by
/// derivative order first, then output index; columns follow state order.
pub struct Jacobian {
    pub rows: Vec<RowId>,
    pub entries: Vec<Vec<RatFun>>,
}

pub fn jacobian(t: &LieTable, m: &Model) -> Jacobian {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for order in 0..=t.max_order {
        for (j, table_rows) in t.entries.iter().enumerate() {
            rows.push(RowId { output: j, order });
            entries.push(
                m.states
                    .iter()
                    .map(|&x| table_rows[order].differentiate(x))
                    .collect(),
            );
        }
    }
    Jacobian { rows, entries }
}

/// Witnessed randomized rank: the rank, a maximal nonsingular minor, the
/// evaluation point certifying it, and the number of trials run.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub rank: usize,
    /// Row labels of the chosen minor, in Jacobian row order.
    pub rows: Vec<RowId>,
    /// Row positions into the Jacobian.
    pub row_idx: Vec<usize>,
    /// Column positions (state indices).
    pub cols: Vec<usize>,
    pub witness: BTreeMap<VarId, u64>,
    pub trials: usize,
}

/// Randomized rank over the 61-bit prime field. Each trial samples every free
/// variable uniformly in [1, p-1]; the reported rank is the maximum over
/// trials, which underestimates the true rank with probability at most
/// deg/p per trial (Schwartz-Zippel). Trials run in parallel when enabled.
pub fn rank_probabilistic(jac: &Jacobian, trials: usize, seed: u64) -> Result<RankCertificate> {
    assert!(trials >= 1);
    let mut vars: std::collections::BTreeSet<VarId> = std::collections::BTreeSet::new();
    for row in &jac.entries {
        for e in row {
            vars.extend(e.support());
        }
    }
    let vars: Vec<VarId> = vars.into_iter().collect();

    let attempts: Vec<u64> = (0..trials as u64).collect();
    let results: Vec<Option<(usize, Vec<usize>, Vec<usize>, BTreeMap<VarId, u64>)>> =
        exec::map_collect(attempts, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t).wrapping_mul(0x9e37));
            for _ in 0..25 {
                let point: BTreeMap<VarId, u64> = vars
                    .iter()
                    .map(|&v| (v, rng.random_range(1..modp::P)))
                    .collect();
                if let Some(numeric) = eval_matrix(jac, &point) {
                    let (rank, row_idx, cols) = modular_rank(numeric, jac.entries.len());
                    return Some((rank, row_idx, cols, point));
                }
            }
            None
        });

    let mut best: Option<(usize, Vec<usize>, Vec<usize>, BTreeMap<VarId, u64>)> = None;
    let mut any = false;
    for r in results.into_iter().flatten() {
        any = true;
        if best.as_ref().map(|b| r.0 > b.0).unwrap_or(true) {
            best = Some(r);
        }
    }
    if !any {
        return Err(Error::DegeneratePoint);
    }
    let (rank, row_idx, cols, witness) = best.expect("at least one trial succeeded");
    Ok(RankCertificate {
        rank,
        rows: row_idx.iter().map(|&i| jac.rows[i]).collect(),
        row_idx,
        cols,
        witness,
        trials,
    })
}

fn eval_matrix(jac: &Jacobian, point: &BTreeMap<VarId, u64>) -> Option<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(jac.entries.len());
    for row in &jac.entries {
        let mut r = Vec::with_capacity(row.len());
        for e in row {
            r.push(e.eval_mod(point)?);
        }
        out.push(r);
    }
    Some(out)
}

/// Gaussian elimination keeping the earliest independent rows, so the
/// certified minor prefers low derivative orders.
fn modular_rank(mut m: Vec<Vec<u64>>, nrows: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for row in 0..nrows {
        // reduce current row by established pivots
        for &(prow, pcol) in &pivots {
            let factor = m[row][pcol];
            if factor != 0 {
                let scale = modp::mul(factor, modp::inv(m[prow][pcol]));
                for c in 0..ncols {
                    let sub = modp::mul(scale, m[prow][c]);
                    m[row][c] = modp::sub(m[row][c], sub);
                }
            }
        }
        if let Some(col) = (0..ncols).find(|&c| m[row][c] != 0) {
            pivots.push((row, col));
            if pivots.len() == ncols {
                break;
            }
        }
    }
    let rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
    let mut cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    cols.sort_unstable();
    (pivots.len(), rows, cols)
}

/// Exact rank over the rational-function field; the oracle for small models.
pub fn symbolic_rank(jac: &Jacobian) -> usize {
    let mut m: Vec<Vec<RatFun>> = jac.entries.clone();
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    let mut used_rows = vec![false; nrows];
    for col in 0..ncols {
        let Some(p) = (0..nrows).find(|&r| !used_rows[r] && !m[r][col].is_zero()) else {
            continue;
        };
        used_rows[p] = true;
        rank += 1;
        let pivot = m[p][col].clone();
        for r in 0..nrows {
            if r != p && !used_rows[r] && !m[r][col].is_zero() {
                let factor = m[r][col].div(&pivot).expect("nonzero pivot");
                for c in 0..ncols {
                    let sub = factor.mul(&m[p][c]);
                    m[r][c] = m[r][c].sub(&sub);
                }
            }
        }
    }
    rank
}

/// Symbolic determinant of the certified minor plus the distinguished
/// coefficient `D0` of its numerator.
///
/// `D0` is the parameter-polynomial coefficient of the graded-lex-largest
/// (state, input-jet)-monomial of the numerator; any nonzero coefficient
/// works, this rule makes runs reproducible.
pub fn minor_and_coefficient(
    jac: &Jacobian,
    cert: &RankCertificate,
    m: &Model,
) -> Result<(RatFun, Poly)> {
    if cert.rank == 0 {
        return Err(Error::MinorVanishes);
    }
    let sub: Vec<Vec<RatFun>> = cert
        .row_idx
        .iter()
        .map(|&r| cert.cols.iter().map(|&c| jac.entries[r][c].clone()).collect())
        .collect();
    let det = determinant(&sub);
    if det.is_zero() {
        return Err(Error::MinorVanishes);
    }
    let d0 = leading_param_coefficient(det.num(), m);
    debug_assert!(!d0.is_zero());
    Ok((det, d0))
}

pub(crate) fn determinant(m: &[Vec<RatFun>]) -> RatFun {
    let n = m.len();
    if n == 0 {
        return RatFun::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    // cofactor expansion along the first row; minors stay small (r <= #states)
    let mut det = RatFun::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatFun>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = entry.mul(&determinant(&minor));
        det = if j % 2 == 0 { det.add(&cof) } else { det.sub(&cof) };
    }
    det
}

/// Splits the numerator by (state, input-jet)-monomials and returns the
/// coefficient of the graded-lex-largest one, as a polynomial in parameters.
fn leading_param_coefficient(num: &Poly, m: &Model) -> Poly {
    let is_param = |v: VarId| m.params.contains(&v);
    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (mono, c) in num.terms() {
        let (param_part, rest): (Vec<_>, Vec<_>) =
            mono.pairs().iter().copied().partition(|&(v, _)| is_param(v));
        groups
            .entry(Monomial::from_pairs(rest))
            .or_insert_with(Poly::zero)
            .add_term(Monomial::from_pairs(param_part), c.clone());
    }
    groups.retain(|_, c| !c.is_zero());
    let key = groups
        .keys()
        .max_by(|a, b| a.cmp_grlex(b))
        .cloned()
        .expect("nonzero numerator");
    groups.remove(&key).expect("key present")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::poly::Poly;

    const EXPSUM: &str = "\
model expsum
states x1, x2
params a, b
outputs y1
x1' = a*x1
x2' = b*x2
y1 = x1 + x2
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

    const LV: &str = "\
model lv
states x1, x2
params a, b, c, d
outputs y1
x1' = a*x1 - b*x1*x2
x2' = -c*x2 + d*x1*x2
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

    fn table(src: &str) -> (Model, LieTable, VarSpace) {
        let m = Model::parse(src).unwrap();
        let mut vs = m.vars.clone();
        let n = m.n_states();
        let t = lie_table(&m, n, &mut vs);
        (m, t, vs)
    }

    #[test]
    fn expsum_second_derivative() {
        let (m, t, _) = table(EXPSUM);
        let (x1, x2) = (m.states[0], m.states[1]);
        let (a, b) = (m.params[0], m.params[1]);
        // y'' = a^2 x1 + b^2 x2
        let expect = RatFun::from_poly(
            Poly::var(a)
                .pow(2)
                .mul(&Poly::var(x1))
                .add(&Poly::var(b).pow(2).mul(&Poly::var(x2))),
        );
        assert_eq!(t.entries[0][2], expect);
        assert!(verify_recurrence(&t, &m));
    }

    #[test]
    fn lv_second_derivative() {
        let (m, t, _) = table(LV);
        let (x1, x2) = (m.states[0], m.states[1]);
        let (a, b, c, d) = (m.params[0], m.params[1], m.params[2], m.params[3]);
        // y'' = -bd x1^2 x2 + b^2 x1 x2^2 + (bc - 2ab) x1 x2 + a^2 x1
        let bd = Poly::var(b).mul(&Poly::var(d));
        let expect = RatFun::from_poly(
            Poly::var(x1)
                .pow(2)
                .mul(&Poly::var(x2))
                .mul(&bd)
                .neg()
                .add(&Poly::var(b).pow(2).mul(&Poly::var(x1)).mul(&Poly::var(x2).pow(2)))
                .add(
                    &Poly::var(b)
                        .mul(&Poly::var(c))
                        .sub(&Poly::var(a).mul(&Poly::var(b)).scale(&crate::poly::rat(2)))
                        .mul(&Poly::var(x1))
                        .mul(&Poly::var(x2)),
                )
                .add(&Poly::var(a).pow(2).mul(&Poly::var(x1))),
        );
        assert_eq!(t.entries[0][2], expect);
    }

    #[test]
    fn lv_with_input_first_derivative() {
        let (m, t, _) = table(LV_INPUT);
        let (x1, x2) = (m.states[0], m.states[1]);
        let (a, b) = (m.params[0], m.params[1]);
        let u = m.inputs[0];
        // y' = x1(-b x2 + a + u)
        let expect = RatFun::from_poly(
            Poly::var(x1).mul(
                &Poly::var(b)
                    .mul(&Poly::var(x2))
                    .neg()
                    .add(&Poly::var(a))
                    .add(&Poly::var(u)),
            ),
        );
        assert_eq!(t.entries[0][1], expect);
        assert!(verify_recurrence(&t, &m));
    }

    #[test]
    fn jacobian_rows() {
        let (m, t, _) = table(EXPSUM);
        let jac = jacobian(&t, &m);
        let (a, b) = (m.params[0], m.params[1]);
        assert_eq!(jac.entries[0], vec![RatFun::one(), RatFun::one()]);
        assert_eq!(jac.entries[1], vec![RatFun::var(a), RatFun::var(b)]);
        assert_eq!(
            jac.entries[2],
            vec![
                RatFun::from_poly(Poly::var(a).pow(2)),
                RatFun::from_poly(Poly::var(b).pow(2))
            ]
        );

        let (m, t, _) = table(HARMONIC);
        let jac = jacobian(&t, &m);
        let (a, b) = (m.params[0], m.params[1]);
        assert_eq!(jac.entries[0], vec![RatFun::one(), RatFun::zero()]);
        assert_eq!(jac.entries[1], vec![RatFun::zero(), RatFun::var(a)]);
        assert_eq!(
            jac.entries[2],
            vec![
                RatFun::from_poly(Poly::var(a).mul(&Poly::var(b))),
                RatFun::zero()
            ]
        );
    }

    #[test]
    fn single_state_chain() {
        let src = "\
model chain
states x1
params a
outputs y1
x1' = a*x1
y1 = x1
";
        let m = Model::parse(src).unwrap();
        let mut vs = m.vars.clone();
        let t = lie_table(&m, 2, &mut vs);
        let jac = jacobian(&t, &m);
        let a = m.params[0];
        assert_eq!(jac.entries[0], vec![RatFun::one()]);
        assert_eq!(jac.entries[1], vec![RatFun::var(a)]);
        assert_eq!(jac.entries[2], vec![RatFun::from_poly(Poly::var(a).pow(2))]);
    }

    #[test]
    fn rank_and_minor_expsum() {
        let (m, t, _) = table(EXPSUM);
        let jac = jacobian(&t, &m);
        let cert = rank_probabilistic(&jac, 3, 7).unwrap();
        assert_eq!(cert.rank, 2);
        assert_eq!(cert.row_idx, vec![0, 1]);
        let (d, d0) = minor_and_coefficient(&jac, &cert, &m).unwrap();
        let (a, b) = (m.params[0], m.params[1]);
        // D = b - a, D0 = b - a
        assert_eq!(d, RatFun::from_poly(Poly::var(b).sub(&Poly::var(a))));
        assert_eq!(d0, Poly::var(b).sub(&Poly::var(a)));
        assert_eq!(symbolic_rank(&jac), 2);
    }

    #[test]
    fn rank_and_minor_lv() {
        let (m, t, _) = table(LV);
        let jac = jacobian(&t, &m);
        let cert = rank_probabilistic(&jac, 3, 11).unwrap();
        assert_eq!(cert.rank, 2);
        let (d, d0) = minor_and_coefficient(&jac, &cert, &m).unwrap();
        let (x1, b) = (m.states[0], m.params[1]);
        assert_eq!(
            d,
            RatFun::from_poly(Poly::var(b).mul(&Poly::var(x1)).neg())
        );
        assert_eq!(d0, Poly::var(b).neg());
    }

    #[test]
    fn bilinear_minor_matches_closed_form() {
        let src = "\
model bilinear
states x1, x2, x3
params p1, p2, p3, p4
inputs u1
outputs y1
x1' = -p1*x1 + p2*u1
x2' = -p3*x2 + p4*u1
x3' = -(p1 + p3)*x3 + (p4*x1 + p2*x2)*u1
y1 = x3
";
        let (m, t, _) = table(src);
        let jac = jacobian(&t, &m);
        let cert = rank_probabilistic(&jac, 3, 5).unwrap();
        assert_eq!(cert.rank, 3);
        let (_, d0) = minor_and_coefficient(&jac, &cert, &m).unwrap();
        // some sign of p2*p4*(p1 - p3)
        let (p1, p2, p3, p4) = (m.params[0], m.params[1], m.params[2], m.params[3]);
        let expect = Poly::var(p2)
            .mul(&Poly::var(p4))
            .mul(&Poly::var(p1).sub(&Poly::var(p3)));
        assert!(d0 == expect || d0 == expect.neg());
        assert_eq!(symbolic_rank(&jac), 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let jac = Jacobian {
            rows: vec![RowId { output: 0, order: 0 }],
            entries: vec![vec![RatFun::zero(), RatFun::zero()]],
        };
        let cert = rank_probabilistic(&jac, 2, 1).unwrap();
        assert_eq!(cert.rank, 0);
    }

    #[test]
    fn randomized_rank_matches_oracle_on_small_models() {
        for src in [EXPSUM, HARMONIC, LV, LV_INPUT] {
            let (m, t, _) = table(src);
            let jac = jacobian(&t, &m);
            let cert = rank_probabilistic(&jac, 3, 99).unwrap();
            assert_eq!(cert.rank, symbolic_rank(&jac), "model {}", m.name);
        }
    }
}
