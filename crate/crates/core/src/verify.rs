//! Numeric certification: fixed-step RK4 integration of both models with
//! transformation-matched initial conditions, output comparison, and
//! IO-equation residuals along trajectories.
//!
//! Inputs are finite sums of polynomial * exponential * trigonometric terms
//! with rational coefficients, closed under differentiation, so exact input
//! jets exist for the Lie-table evaluations.

use crate::error::{Error, Result};
use crate::exec;
use crate::ioeq::DiffPoly;
use crate::lie::LieTable;
use crate::model::Model;
use crate::poly::{rat_to_f64, Poly};
use crate::ratfun::RatFun;
use crate::vars::{VarId, VarSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// closed-form input signals
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
enum Trig {
    None,
    Cos(f64),
    Sin(f64),
}

#[derive(Clone, Copy, Debug)]
struct SigTerm {
    coeff: f64,
    t_pow: u32,
    exp_rate: f64,
    trig: Trig,
}

impl SigTerm {
    fn eval(&self, t: f64) -> f64 {
        let mut v = self.coeff * t.powi(self.t_pow as i32) * (self.exp_rate * t).exp();
        v *= match self.trig {
            Trig::None => 1.0,
            Trig::Cos(w) => (w * t).cos(),
            Trig::Sin(w) => (w * t).sin(),
        };
        v
    }
}

/// Finite sum of `c * t^k * e^{a t} * {1, cos(w t), sin(w t)}` terms.
#[derive(Clone, Debug, Default)]
pub struct InputSignal {
    terms: Vec<SigTerm>,
}

impl InputSignal {
    pub fn constant(c: f64) -> InputSignal {
        InputSignal {
            terms: vec![SigTerm {
                coeff: c,
                t_pow: 0,
                exp_rate: 0.0,
                trig: Trig::None,
            }],
        }
    }

    /// Generic exciting signal with small rational coefficients.
    pub fn generic(rng: &mut ChaCha8Rng) -> InputSignal {
        let q = |rng: &mut ChaCha8Rng| (rng.random_range(1..=8) as f64) / 4.0;
        InputSignal {
            terms: vec![
                SigTerm {
                    coeff: q(rng),
                    t_pow: 0,
                    exp_rate: 0.0,
                    trig: Trig::None,
                },
                SigTerm {
                    coeff: q(rng),
                    t_pow: 0,
                    exp_rate: -q(rng),
                    trig: Trig::Cos(q(rng)),
                },
                SigTerm {
                    coeff: q(rng) / 2.0,
                    t_pow: 1,
                    exp_rate: -q(rng),
                    trig: Trig::Sin(q(rng)),
                },
            ],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|s| s.eval(t)).sum()
    }

    /// Exact derivative; the family is closed under differentiation.
    pub fn derivative(&self) -> InputSignal {
        let mut out = Vec::new();
        for s in &self.terms {
            if s.t_pow > 0 {
                out.push(SigTerm {
                    coeff: s.coeff * s.t_pow as f64,
                    t_pow: s.t_pow - 1,
                    ..*s
                });
            }
            if s.exp_rate != 0.0 {
                out.push(SigTerm {
                    coeff: s.coeff * s.exp_rate,
                    ..*s
                });
            }
            match s.trig {
                Trig::None => {}
                Trig::Cos(w) => out.push(SigTerm {
                    coeff: -s.coeff * w,
                    trig: Trig::Sin(w),
                    ..*s
                }),
                Trig::Sin(w) => out.push(SigTerm {
                    coeff: s.coeff * w,
                    trig: Trig::Cos(w),
                    ..*s
                }),
            }
        }
        InputSignal { terms: out }
    }
}

// ---------------------------------------------------------------------------
// configuration and trajectories
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub t_end: f64,
    pub step: f64,
    /// Uniform sampling interval applied to every parameter and initial value.
    pub box_lo: f64,
    pub box_hi: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            t_end: 5.0,
            step: 1e-3,
            box_lo: 1.0,
            box_hi: 2.0,
            samples: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub outputs: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn csv(&self, m: &Model) -> String {
        let mut out = String::from("t");
        for &x in &m.states {
            out.push(',');
            out.push_str(m.vars.name(x));
        }
        for &y in &m.outputs {
            out.push(',');
            out.push_str(m.vars.name(y));
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t}"));
            for s in &self.states[i] {
                out.push_str(&format!(",{s}"));
            }
            for y in &self.outputs[i] {
                out.push_str(&format!(",{y}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Precompiled polynomial for fast repeated evaluation.
struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    fn new(p: &Poly) -> CompiledPoly {
        CompiledPoly {
            terms: p
                .terms()
                .map(|(m, c)| {
                    (
                        rat_to_f64(c),
                        m.pairs().iter().map(|&(v, e)| (v.idx(), e)).collect(),
                    )
                })
                .collect(),
        }
    }

    fn eval(&self, slots: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (c, pows) in &self.terms {
            let mut prod = *c;
            for &(i, e) in pows {
                prod *= slots[i].powi(e as i32);
            }
            sum += prod;
        }
        sum
    }
}

struct CompiledRat {
    num: CompiledPoly,
    den: CompiledPoly,
}

impl CompiledRat {
    fn new(f: &RatFun) -> CompiledRat {
        CompiledRat {
            num: CompiledPoly::new(f.num()),
            den: CompiledPoly::new(f.den()),
        }
    }

    fn eval(&self, slots: &[f64], t: f64) -> Result<f64> {
        let d = self.den.eval(slots);
        if d.abs() < 1e-12 {
            return Err(Error::DenominatorHit(t));
        }
        Ok(self.num.eval(slots) / d)
    }
}

/// Classical fixed-step RK4 on a uniform grid.
///
/// `params` and `x0` are keyed by the model's own variable ids; inputs are
/// evaluated from the given signals at the stage times.
pub fn integrate(
    m: &Model,
    params: &BTreeMap<VarId, f64>,
    x0: &BTreeMap<VarId, f64>,
    inputs: &[InputSignal],
    cfg: &SimConfig,
) -> Result<Trajectory> {
    assert!(cfg.step > 0.0 && cfg.t_end >= cfg.step);
    let n = m.n_states();
    let rhs: Vec<CompiledRat> = m.rhs.iter().map(CompiledRat::new).collect();
    let obs: Vec<CompiledRat> = m.obs.iter().map(CompiledRat::new).collect();
    let nslots = m.vars.len();
    let mut slots = vec![0.0; nslots];
    for (&p, &v) in params {
        slots[p.idx()] = v;
    }
    let mut x: Vec<f64> = m.states.iter().map(|s| x0[s]).collect();

    let steps = (cfg.t_end / cfg.step).round() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut outputs = Vec::with_capacity(steps + 1);

    let eval_f = |x: &[f64], t: f64, slots: &mut [f64]| -> Result<Vec<f64>> {
        for (i, &s) in m.states.iter().enumerate() {
            slots[s.idx()] = x[i];
        }
        for (k, &u) in m.inputs.iter().enumerate() {
            slots[u.idx()] = inputs[k].eval(t);
        }
        let mut out = Vec::with_capacity(n);
        for f in &rhs {
            let v = f.eval(slots, t)?;
            if !v.is_finite() {
                return Err(Error::NonFinite(t));
            }
            out.push(v);
        }
        Ok(out)
    };

    let record = |x: &[f64], t: f64, slots: &mut [f64], outputs: &mut Vec<Vec<f64>>| -> Result<()> {
        for (i, &s) in m.states.iter().enumerate() {
            slots[s.idx()] = x[i];
        }
        for (k, &u) in m.inputs.iter().enumerate() {
            slots[u.idx()] = inputs[k].eval(t);
        }
        let mut ys = Vec::with_capacity(m.outputs.len());
        for g in &obs {
            let v = g.eval(slots, t)?;
            if !v.is_finite() {
                return Err(Error::NonFinite(t));
            }
            ys.push(v);
        }
        outputs.push(ys);
        Ok(())
    };

    let h = cfg.step;
    for step_i in 0..=steps {
        let t = step_i as f64 * h;
        times.push(t);
        states.push(x.clone());
        record(&x, t, &mut slots, &mut outputs)?;
        if step_i == steps {
            break;
        }
        let k1 = eval_f(&x, t, &mut slots)?;
        let x2: Vec<f64> = x.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = eval_f(&x2, t + 0.5 * h, &mut slots)?;
        let x3: Vec<f64> = x.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = eval_f(&x3, t + 0.5 * h, &mut slots)?;
        let x4: Vec<f64> = x.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = eval_f(&x4, t + h, &mut slots)?;
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(t + h));
        }
    }
    Ok(Trajectory {
        times,
        states,
        outputs,
    })
}

// ---------------------------------------------------------------------------
// cross validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct CrossReport {
    /// Per output: maximum absolute deviation over the grid, max over samples.
    pub max_deviation: Vec<f64>,
    pub samples: usize,
    pub failures: usize,
}

impl CrossReport {
    pub fn worst(&self) -> f64 {
        self.max_deviation.iter().cloned().fold(0.0, f64::max)
    }
}

/// Samples parameters in the box, maps them through the specialization
/// (`new_param_exprs`, over the source model's variables), matches initial
/// conditions through the solved forms, integrates both systems with the same
/// inputs, and reports the worst output deviation. Samples run in parallel.
///
/// `avoid`: polynomials in the source parameters (the common denominator and
/// the minor coefficient) that must stay away from zero at a sample.
pub fn cross_validate(
    m: &Model,
    new_model: &Model,
    new_param_exprs: &[RatFun],
    solved: &[(VarId, RatFun)],
    avoid: &[Poly],
    cfg: &SimConfig,
) -> Result<CrossReport> {
    let samples: Vec<u64> = (0..cfg.samples as u64).collect();
    let results: Vec<Result<Vec<f64>>> = exec::map_collect(samples, |s| {
        one_sample(m, new_model, new_param_exprs, solved, avoid, cfg, s)
    });
    let mut max_dev = vec![0.0f64; m.outputs.len()];
    let mut failures = 0usize;
    for r in results {
        match r {
            Ok(devs) => {
                for (i, d) in devs.iter().enumerate() {
                    max_dev[i] = max_dev[i].max(*d);
                }
            }
            Err(_) => failures += 1,
        }
    }
    if failures == cfg.samples {
        return Err(Error::DegeneratePoint);
    }
    Ok(CrossReport {
        max_deviation: max_dev,
        samples: cfg.samples,
        failures,
    })
}

fn one_sample(
    m: &Model,
    new_model: &Model,
    new_param_exprs: &[RatFun],
    solved: &[(VarId, RatFun)],
    avoid: &[Poly],
    cfg: &SimConfig,
    sample: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(sample).wrapping_mul(0x2545));
    let span = m.vars.len().max(
        solved
            .iter()
            .map(|(v, _)| v.idx() + 1)
            .chain(new_param_exprs.iter().flat_map(|e| {
                e.support().iter().map(|v| v.idx() + 1).collect::<Vec<_>>()
            }))
            .max()
            .unwrap_or(0),
    );
    'resample: for _ in 0..50 {
        let mut slots = vec![0.0; span];
        let mut params = BTreeMap::new();
        for &p in &m.params {
            let v = rng.random_range(cfg.box_lo..cfg.box_hi);
            params.insert(p, v);
            slots[p.idx()] = v;
        }
        let mut x0 = BTreeMap::new();
        for &x in &m.states {
            let v = rng.random_range(cfg.box_lo..cfg.box_hi);
            x0.insert(x, v);
            slots[x.idx()] = v;
        }
        for a in avoid {
            if a.eval_f64(&slots).abs() < 1e-9 {
                continue 'resample;
            }
        }
        let inputs: Vec<InputSignal> = m.inputs.iter().map(|_| InputSignal::generic(&mut rng)).collect();

        // image parameters and matched initial conditions
        let mut new_params = BTreeMap::new();
        for (i, &np) in new_model.params.iter().enumerate() {
            let v = new_param_exprs[i].eval_f64(&slots);
            if !v.is_finite() {
                continue 'resample;
            }
            new_params.insert(np, v);
        }
        let mut w0 = BTreeMap::new();
        for (i, &w) in new_model.states.iter().enumerate() {
            let v = solved[i].1.eval_f64(&slots);
            if !v.is_finite() {
                continue 'resample;
            }
            w0.insert(w, v);
        }

        let old_traj = integrate(m, &params, &x0, &inputs, cfg)?;
        let new_traj = integrate(new_model, &new_params, &w0, &inputs, cfg)?;
        let mut devs = vec![0.0f64; m.outputs.len()];
        for (row_old, row_new) in old_traj.outputs.iter().zip(new_traj.outputs.iter()) {
            for (j, (a, b)) in row_old.iter().zip(row_new.iter()).enumerate() {
                devs[j] = devs[j].max((a - b).abs());
            }
        }
        return Ok(devs);
    }
    Err(Error::DegeneratePoint)
}

// ---------------------------------------------------------------------------
// io residual
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct ResidualReport {
    /// Per IO-equation: max over the grid of |E| / max-term-magnitude.
    pub residuals: Vec<f64>,
}

/// Integrates the model and evaluates each IO-equation along the trajectory,
/// substituting output jets by numerically evaluated Lie-table entries. The
/// residual is normalized by the largest term magnitude, so it is invariant
/// under rescaling the equation.
pub fn io_residual(
    m: &Model,
    eqs: &[DiffPoly],
    lie: &LieTable,
    vs: &VarSpace,
    cfg: &SimConfig,
) -> Result<ResidualReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37).wrapping_add(17));
    let mut params = BTreeMap::new();
    for &p in &m.params {
        params.insert(p, rng.random_range(cfg.box_lo..cfg.box_hi));
    }
    let mut x0 = BTreeMap::new();
    for &x in &m.states {
        x0.insert(x, rng.random_range(cfg.box_lo..cfg.box_hi));
    }
    let inputs: Vec<InputSignal> = m.inputs.iter().map(|_| InputSignal::generic(&mut rng)).collect();
    let traj = integrate(m, &params, &x0, &inputs, cfg)?;

    // input jet signals up to the table order
    let mut u_jets: Vec<Vec<InputSignal>> = Vec::new();
    for sig in &inputs {
        let mut ladder = vec![sig.clone()];
        for _ in 0..lie.max_order {
            ladder.push(ladder.last().unwrap().derivative());
        }
        u_jets.push(ladder);
    }

    let compiled: Vec<Vec<CompiledRat>> = lie
        .entries
        .iter()
        .map(|rows| rows.iter().map(CompiledRat::new).collect())
        .collect();

    let nslots = vs.len();
    let mut residuals = vec![0.0f64; eqs.len()];
    // stride to keep the check affordable on fine grids
    let stride = (traj.times.len() / 500).max(1);
    for (ti, &t) in traj.times.iter().enumerate().step_by(stride) {
        let mut slots = vec![0.0; nslots];
        for (&p, &v) in &params {
            slots[p.idx()] = v;
        }
        for (i, &x) in m.states.iter().enumerate() {
            slots[x.idx()] = traj.states[ti][i];
        }
        for (k, ladder) in u_jets.iter().enumerate() {
            for (ord, sig) in ladder.iter().enumerate() {
                slots[lie.jets.u[k][ord].idx()] = sig.eval(t);
            }
        }
        // output jets from the Lie table
        for (j, rows) in compiled.iter().enumerate() {
            for (ord, entry) in rows.iter().enumerate() {
                slots[lie.jets.y[j][ord].idx()] = entry.eval(&slots, t)?;
            }
        }
        for (e_i, e) in eqs.iter().enumerate() {
            let mut sum = 0.0f64;
            let mut max_term = 0.0f64;
            for (mono, coeff) in &e.terms {
                let mut vterm = coeff.eval_f64(&slots);
                for &(v, exp) in mono.pairs() {
                    vterm *= slots[v.idx()].powi(exp as i32);
                }
                sum += vterm;
                max_term = max_term.max(vterm.abs());
            }
            if max_term > 0.0 {
                residuals[e_i] = residuals[e_i].max(sum.abs() / max_term);
            }
        }
    }
    Ok(ResidualReport { residuals })
}

// ---------------------------------------------------------------------------
// numeric roots of instantiated minimal polynomials
// ---------------------------------------------------------------------------

/// Real roots of a univariate polynomial with coefficients `c[0] + c[1] Z +
/// ...`, by sign-change bisection inside the Cauchy bound plus Newton polish.
/// Returned ascending; the caller records which index it picked.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n < 2 {
        return Vec::new();
    }
    let lead = coeffs[n - 1];
    if lead == 0.0 {
        return real_roots(&coeffs[..n - 1]);
    }
    let bound = 1.0
        + coeffs[..n - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let eval = |x: f64| -> f64 {
        let mut acc = 0.0;
        for &c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let deriv = |x: f64| -> f64 {
        let mut acc = 0.0;
        for (k, &c) in coeffs.iter().enumerate().rev() {
            if k >= 1 {
                acc = acc * x + c * k as f64;
            }
        }
        acc
    };
    let grid = 4096;
    let mut roots = Vec::new();
    let mut prev_x = -bound;
    let mut prev_v = eval(prev_x);
    for i in 1..=grid {
        let x = -bound + 2.0 * bound * i as f64 / grid as f64;
        let v = eval(x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v * v < 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            let (mut vlo, _) = (prev_v, v);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let vm = eval(mid);
                if vm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if vlo * vm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    vlo = vm;
                }
            }
            let mut r = 0.5 * (lo + hi);
            for _ in 0..8 {
                let d = deriv(r);
                if d.abs() > 1e-12 {
                    r -= eval(r) / d;
                }
            }
            roots.push(r);
        }
        prev_x = x;
        prev_v = v;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioeq::io_equations;
    use crate::lie::lie_table;

    const LV: &str = "\
model lv
states x1, x2
params a, b, c, d
outputs y1
x1' = a*x1 - b*x1*x2
x2' = -c*x2 + d*x1*x2
y1 = x1
";

    fn decay_model() -> Model {
        Model::parse(
            "model decay\nstates x1\nparams a\noutputs y1\nx1' = -a*x1\ny1 = x1\n",
        )
        .unwrap()
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let m = decay_model();
        let cfg = SimConfig {
            t_end: 1.0,
            step: 1e-3,
            ..Default::default()
        };
        let mut params = BTreeMap::new();
        params.insert(m.params[0], 1.0);
        let mut x0 = BTreeMap::new();
        x0.insert(m.states[0], 1.0);
        let traj = integrate(&m, &params, &x0, &[], &cfg).unwrap();
        let last = traj.states.last().unwrap()[0];
        assert!((last - (-1.0f64).exp()).abs() < 1e-8, "got {last}");
    }

    #[test]
    fn constant_rhs_stays_constant() {
        let m = Model::parse(
            "model still\nstates x1\nparams a\noutputs y1\nx1' = 0*a\ny1 = x1\n",
        )
        .unwrap();
        let cfg = SimConfig {
            t_end: 2.0,
            step: 1e-2,
            ..Default::default()
        };
        let mut params = BTreeMap::new();
        params.insert(m.params[0], 3.0);
        let mut x0 = BTreeMap::new();
        x0.insert(m.states[0], 7.5);
        let traj = integrate(&m, &params, &x0, &[], &cfg).unwrap();
        assert!(traj.states.iter().all(|s| (s[0] - 7.5).abs() < 1e-14));
    }

    #[test]
    fn harmonic_oscillator_tracks_cosine() {
        // x1' = a x2, x2' = b x1 with ab = -1 gives y = cos t
        let m = Model::parse(
            "model h\nstates x1, x2\nparams a, b\noutputs y1\nx1' = a*x2\nx2' = b*x1\ny1 = x1\n",
        )
        .unwrap();
        let cfg = SimConfig {
            t_end: 5.0,
            step: 1e-3,
            ..Default::default()
        };
        let mut params = BTreeMap::new();
        params.insert(m.params[0], 1.0);
        params.insert(m.params[1], -1.0);
        let mut x0 = BTreeMap::new();
        x0.insert(m.states[0], 1.0);
        x0.insert(m.states[1], 0.0);
        let traj = integrate(&m, &params, &x0, &[], &cfg).unwrap();
        let mut worst = 0.0f64;
        for (i, t) in traj.times.iter().enumerate() {
            worst = worst.max((traj.outputs[i][0] - t.cos()).abs());
        }
        assert!(worst < 1e-6, "worst deviation {worst}");
    }

    #[test]
    fn step_halving_is_fourth_order() {
        let m = decay_model();
        let mut params = BTreeMap::new();
        params.insert(m.params[0], 1.0);
        let mut x0 = BTreeMap::new();
        x0.insert(m.states[0], 1.0);
        let err_at = |h: f64| {
            let cfg = SimConfig {
                t_end: 1.0,
                step: h,
                ..Default::default()
            };
            let traj = integrate(&m, &params, &x0, &[], &cfg).unwrap();
            (traj.states.last().unwrap()[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err_at(0.1) / err_at(0.05);
        assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn divergence_is_reported() {
        // finite-time blow-up x' = a x^2
        let m = Model::parse(
            "model blowup\nstates x1\nparams a\noutputs y1\nx1' = a*x1^2\ny1 = x1\n",
        )
        .unwrap();
        let cfg = SimConfig {
            t_end: 5.0,
            step: 1e-2,
            ..Default::default()
        };
        let mut params = BTreeMap::new();
        params.insert(m.params[0], 1.0);
        let mut x0 = BTreeMap::new();
        x0.insert(m.states[0], 1.0);
        let err = integrate(&m, &params, &x0, &[], &cfg);
        assert!(matches!(
            err,
            Err(Error::DenominatorHit(_)) | Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn lv_io_residual_is_tiny_and_fault_is_loud() {
        let m = Model::parse(LV).unwrap();
        let mut vs = m.vars.clone();
        let lie = lie_table(&m, 2, &mut vs);
        let io = io_equations(&m, &lie, &mut vs, &crate::groebner::Budget::default()).unwrap();
        let cfg = SimConfig {
            t_end: 2.0,
            step: 1e-3,
            seed: 3,
            ..Default::default()
        };
        let rep = io_residual(&m, &io.eqs, &lie, &vs, &cfg).unwrap();
        assert!(rep.residuals[0] < 1e-9, "residual {}", rep.residuals[0]);

        // flip the sign of one term
        let mut bad = io.eqs[0].clone();
        bad.terms[2].1 = bad.terms[2].1.neg();
        let rep = io_residual(&m, &[bad], &lie, &vs, &cfg).unwrap();
        assert!(rep.residuals[0] > 1e-3, "residual {}", rep.residuals[0]);
    }

    #[test]
    fn real_roots_of_quadratic() {
        // (Z-1)(Z-2) = Z^2 - 3Z + 2
        let roots = real_roots(&[2.0, -3.0, 1.0]);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0).abs() < 1e-9);
        assert!((roots[1] - 2.0).abs() < 1e-9);
        // no real roots
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
    }
}
