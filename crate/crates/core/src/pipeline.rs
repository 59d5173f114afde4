//! End-to-end orchestration with reproducible, machine-readable reports.
//!
//! A run computes: Lie table, IO-equations, identifiable field, rank
//! certificate, specialization, reparametrized model, state transform (or the
//! dimension reduction when the observability condition fails and reduction
//! is requested), and the symbolic same-IO verification. Every stage lands in
//! the report either with its result or with an explicit skip reason.

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::ioeq::{self, IoEquations};
use crate::lie::{self, LieTable};
use crate::model::{common_denominator, render_model, Model};
use crate::modp;
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::specialize::{self, AlgValue, Reparametrized, Specialization};
use crate::transform::{self, StateTransform};
use crate::vars::{VarId, VarSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Wall-clock budget in seconds for each symbolic stage.
    pub budget_secs: u64,
    pub reduce: bool,
    pub rank_trials: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: 0,
            budget_secs: 600,
            reduce: false,
            rank_trials: 3,
        }
    }
}

// ---------------------------------------------------------------------------
// report types
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct ModelInfo {
    pub name: String,
    pub digest: String,
    pub states: Vec<String>,
    pub params: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct IoEqInfo {
    pub output: String,
    pub order: usize,
    pub text: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct FieldInfo {
    pub raw: Vec<String>,
    pub simplified: Vec<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ObservabilityInfo {
    pub sum_orders: usize,
    pub dimension: usize,
    pub holds: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct RankInfo {
    pub rank: usize,
    pub rows: Vec<(usize, usize)>,
    pub cols: Vec<usize>,
    pub trials: usize,
    pub minor: String,
    pub d0: String,
    /// Randomized re-check of the rank after specialization.
    pub preserved_under_specialization: Option<bool>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ValueInfo {
    pub param: String,
    pub kind: String,
    pub expr: String,
    pub alpha_rep: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct MinPolyInfo {
    pub symbol: String,
    pub text: String,
    pub degree: usize,
    pub representative: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct BetaInfo {
    pub symbol: String,
    pub definition: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct SpecInfo {
    pub beta: Vec<BetaInfo>,
    pub values: Vec<ValueInfo>,
    pub minimal_polynomials: Vec<MinPolyInfo>,
    pub free_params: Vec<String>,
    pub locally_not_globally: bool,
    pub verified: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct TransformEntryInfo {
    pub state: String,
    pub defining: String,
    pub solved: Option<String>,
    pub note: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct TransformInfo {
    pub entries: Vec<TransformEntryInfo>,
    pub u_independent: bool,
    pub closure: Option<bool>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReductionInfo {
    pub dimension: usize,
    /// Per source state: the fresh state it maps to, or null (-> 0).
    pub ansatz: Vec<Option<String>>,
    pub model_ode: String,
    /// Fresh states as expressions in the source states.
    pub state_map: Vec<(String, String)>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReparamInfo {
    pub ode: String,
    pub digest: String,
    pub constraints: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct VerificationInfo {
    pub same_io: Option<bool>,
    pub skip_reason: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub model: ModelInfo,
    pub seed: u64,
    pub io_equations: Vec<IoEqInfo>,
    pub identifiable_field: FieldInfo,
    pub observability: ObservabilityInfo,
    pub non_principal_outputs: Vec<usize>,
    pub rank: Option<RankInfo>,
    pub specialization: Option<SpecInfo>,
    pub reduction: Option<ReductionInfo>,
    pub reparametrized: Option<ReparamInfo>,
    pub transform: Option<TransformInfo>,
    pub verification: VerificationInfo,
    pub stages: BTreeMap<String, String>,
    pub timing_ms: BTreeMap<String, u128>,
}

/// Transform artifact for the `verify` subcommand.
#[derive(Serialize, Clone, Debug)]
pub struct TransformArtifact {
    pub schema_version: u32,
    pub old_digest: String,
    pub new_digest: String,
    /// Per new-model parameter: name and expression in source parameters.
    pub new_params: Vec<(String, String)>,
    /// Per new state: name and solved form in source states/parameters.
    pub states: Vec<(String, String)>,
    pub seed: u64,
}

pub struct PipelineOutcome {
    pub report: PipelineReport,
    /// Rendered reparametrized model file, with constraint comments.
    pub reparametrized_ode: Option<String>,
    pub reparametrized: Option<Reparametrized>,
    pub transform_artifact: Option<TransformArtifact>,
    /// The model the transform refers to (the reduced one when reduction ran).
    pub work_model: Model,
    /// Set when the observability condition failed and no reduction was
    /// requested: the specialization is still emitted, the transform is not.
    pub transform_unavailable: bool,
}

// ---------------------------------------------------------------------------
// stage runners
// ---------------------------------------------------------------------------

fn model_info(m: &Model) -> ModelInfo {
    let names = |ids: &[VarId]| {
        ids.iter()
            .map(|&v| m.vars.name(v).to_string())
            .collect::<Vec<_>>()
    };
    ModelInfo {
        name: m.name.clone(),
        digest: m.digest(),
        states: names(&m.states),
        params: names(&m.params),
        inputs: names(&m.inputs),
        outputs: names(&m.outputs),
    }
}

pub struct IoStage {
    pub vs: VarSpace,
    pub lie: LieTable,
    pub io: IoEquations,
    pub raw: Vec<RatFun>,
    pub simplified: Vec<RatFun>,
    pub observable: bool,
}

/// Stages shared by `io` and `reparametrize`: Lie table, IO-equations, field.
pub fn run_io_stage(m: &Model, opts: &PipelineOptions, timing: &mut BTreeMap<String, u128>) -> Result<IoStage> {
    let budget = || Budget::with_seconds(opts.budget_secs);
    let n = m.n_states();
    let mut vs = m.vars.clone();

    let t0 = Instant::now();
    let lie = lie::lie_table(m, n, &mut vs);
    timing.insert("lie_table".into(), t0.elapsed().as_millis());

    let t0 = Instant::now();
    let io = ioeq::io_equations(m, &lie, &mut vs, &budget())?;
    timing.insert("io_equations".into(), t0.elapsed().as_millis());

    let t0 = Instant::now();
    let raw = ioeq::field_generators(&io.eqs);
    let simplified = ioeq::simplify_generators(&raw, &m.params, &mut vs, &budget())?;
    timing.insert("field_simplification".into(), t0.elapsed().as_millis());

    let observable = ioeq::observability_condition(&io.eqs, &m, &vs);
    Ok(IoStage {
        vs,
        lie,
        io,
        raw,
        simplified,
        observable,
    })
}

fn io_report_parts(m: &Model, st: &IoStage) -> (Vec<IoEqInfo>, FieldInfo, ObservabilityInfo) {
    let eqs = st
        .io
        .eqs
        .iter()
        .map(|e| IoEqInfo {
            output: m.vars.name(m.outputs[e.output]).to_string(),
            order: e.order_in_y(&st.vs),
            text: e.render(&st.vs),
        })
        .collect();
    let field = FieldInfo {
        raw: st.raw.iter().map(|g| g.render(&st.vs)).collect(),
        simplified: st.simplified.iter().map(|g| g.render(&st.vs)).collect(),
    };
    let sum: usize = st.io.eqs.iter().map(|e| e.order_in_y(&st.vs)).sum();
    let obs = ObservabilityInfo {
        sum_orders: sum,
        dimension: m.n_states(),
        holds: st.observable,
    };
    (eqs, field, obs)
}

/// Randomized check that the Jacobian rank survives the specialization.
fn rank_preserved(
    jac: &lie::Jacobian,
    rank: usize,
    spec: &Specialization,
    m: &Model,
    seed: u64,
) -> Option<bool> {
    let reps = spec.all_alpha_reps()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x51ed).wrapping_add(3));
    'trial: for _ in 0..8 {
        let mut vars: std::collections::BTreeSet<VarId> = std::collections::BTreeSet::new();
        for row in &jac.entries {
            for e in row {
                vars.extend(e.support());
            }
        }
        for r in &reps {
            vars.extend(r.support());
        }
        let point: BTreeMap<VarId, u64> = vars
            .iter()
            .map(|&v| (v, rng.random_range(1..modp::P)))
            .collect();
        // specialized parameter values
        let mut spec_point = point.clone();
        for (i, &p) in m.params.iter().enumerate() {
            match reps[i].eval_mod(&point) {
                Some(v) => {
                    spec_point.insert(p, v);
                }
                None => continue 'trial,
            }
        }
        let mut numeric: Vec<Vec<u64>> = Vec::new();
        for row in &jac.entries {
            let mut r = Vec::new();
            for e in row {
                match e.eval_mod(&spec_point) {
                    Some(v) => r.push(v),
                    None => continue 'trial,
                }
            }
            numeric.push(r);
        }
        let got = modular_rank_of(numeric);
        return Some(got == rank);
    }
    None
}

fn modular_rank_of(mut m: Vec<Vec<u64>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for row in 0..nrows {
        for &(pr, pc) in &pivots {
            let f = m[row][pc];
            if f != 0 {
                let s = modp::mul(f, modp::inv(m[pr][pc]));
                for c in 0..ncols {
                    let sub = modp::mul(s, m[pr][c]);
                    m[row][c] = modp::sub(m[row][c], sub);
                }
            }
        }
        if let Some(col) = (0..ncols).find(|&c| m[row][c] != 0) {
            pivots.push((row, col));
            rank += 1;
        }
    }
    rank
}

/// Full reparametrization pipeline.
pub fn run_full(m: &Model, opts: &PipelineOptions) -> Result<PipelineOutcome> {
    let mut timing: BTreeMap<String, u128> = BTreeMap::new();
    let mut stages: BTreeMap<String, String> = BTreeMap::new();
    let budget = || Budget::with_seconds(opts.budget_secs);

    let st = run_io_stage(m, opts, &mut timing)?;
    stages.insert("io_equations".into(), "ok".into());
    let (io_eqs_info, field_info, obs_info) = io_report_parts(m, &st);
    let non_principal = st.io.non_principal.clone();

    // dimension reduction happens first when requested and needed; the rest
    // of the pipeline then runs on the reduced model
    let mut reduction_info: Option<ReductionInfo> = None;
    let (work, mut work_st) = if !st.observable && opts.reduce {
        let t0 = Instant::now();
        let mut vs = st.vs.clone();
        let red = transform::reduce_dimension_linear_ansatz(m, &st.io.eqs, &st.lie, &mut vs, &budget())?;
        timing.insert("reduction".into(), t0.elapsed().as_millis());
        stages.insert("reduction".into(), "ok".into());
        reduction_info = Some(ReductionInfo {
            dimension: red.model.n_states(),
            ansatz: red
                .ansatz
                .iter()
                .map(|a| a.map(|l| format!("w{}", l + 1)))
                .collect(),
            model_ode: render_model(&red.model),
            state_map: red
                .solved
                .iter()
                .map(|(w, h)| (vs.name(*w).to_string(), h.render(&vs)))
                .collect(),
        });
        let red_model = red.model.clone();
        let red_st = run_io_stage(&red_model, opts, &mut timing)?;
        (red_model, red_st)
    } else {
        if !st.observable {
            stages.insert(
                "reduction".into(),
                "skipped: observability condition false and --reduce not given".into(),
            );
        } else {
            stages.insert("reduction".into(), "not needed".into());
        }
        (m.clone(), st)
    };

    // rank certificate and distinguished minor of the working model
    let t0 = Instant::now();
    let jac = lie::jacobian(&work_st.lie, &work);
    let cert = lie::rank_probabilistic(&jac, opts.rank_trials, opts.seed)?;
    let mut minor = lie::minor_and_coefficient(&jac, &cert, &work);
    let mut retries = 0;
    while matches!(minor, Err(Error::MinorVanishes)) && retries < 5 {
        retries += 1;
        let cert2 = lie::rank_probabilistic(&jac, opts.rank_trials, opts.seed.wrapping_add(retries))?;
        minor = lie::minor_and_coefficient(&jac, &cert2, &work);
    }
    let (d, d0) = minor?;
    timing.insert("rank".into(), t0.elapsed().as_millis());
    stages.insert("rank".into(), "ok".into());

    // specialization system and its solution
    let t0 = Instant::now();
    let c = common_denominator(&work);
    if !specialize::generators_independent(&work_st.simplified, &work, &mut work_st.vs, &budget())? {
        return Err(Error::Other(
            "simplified generators are algebraically dependent; cannot solve over free symbols"
                .into(),
        ));
    }
    let sys = specialize::build_system(&work_st.simplified, &d0, &c, &work, &mut work_st.vs);
    if !specialize::check_witness(&sys, &work) {
        return Err(Error::Other("witness check failed for the built system".into()));
    }
    let spec = specialize::solve_specialization(&sys, &work, &mut work_st.vs, &budget())?;
    timing.insert("specialize".into(), t0.elapsed().as_millis());
    stages.insert("specialize".into(), "ok".into());

    let preserved = rank_preserved(&jac, cert.rank, &spec, &work, opts.seed);
    let rank_info = RankInfo {
        rank: cert.rank,
        rows: cert.rows.iter().map(|r| (r.output, r.order)).collect(),
        cols: cert.cols.clone(),
        trials: cert.trials,
        minor: d.render(&work_st.vs),
        d0: d0.render(&work_st.vs),
        preserved_under_specialization: preserved,
    };

    // apply
    let t0 = Instant::now();
    let rep = specialize::apply_specialization(&work, &spec, &work_st.vs)?;
    timing.insert("apply".into(), t0.elapsed().as_millis());
    stages.insert("apply".into(), "ok".into());
    let spec_info = spec_report(&spec, &work, &work_st.vs);

    // symbolic same-IO verification through the concrete twin
    let t0 = Instant::now();
    let (same_io, skip_reason) = match specialize::verify_same_io(&work, &rep, &budget()) {
        Ok(v) => (Some(v), None),
        Err(Error::BudgetExceeded(msg)) => (None, Some(format!("budget exceeded: {msg}"))),
        Err(e) => (None, Some(e.to_string())),
    };
    timing.insert("verify_same_io".into(), t0.elapsed().as_millis());
    stages.insert(
        "verify_same_io".into(),
        match (&same_io, &skip_reason) {
            (Some(true), _) => "ok".into(),
            (Some(false), _) => "MISMATCH".into(),
            (None, Some(r)) => format!("skipped: {r}"),
            (None, None) => "skipped".into(),
        },
    );

    // state transform (only meaningful when the working model is observable)
    let mut transform_info: Option<TransformInfo> = None;
    let mut artifact: Option<TransformArtifact> = None;
    let mut transform_unavailable = false;
    if work_st.observable {
        let t0 = Instant::now();
        match transform::solve_state_transform(
            &work,
            &rep,
            &work_st.lie,
            true,
            &mut work_st.vs,
            &budget(),
        ) {
            Ok(t) => {
                let closure = transform::check_closure(&t, &work, &rep, &mut work_st.vs).ok();
                transform_info = Some(transform_report(&t, &work_st.vs, closure));
                artifact = build_artifact(&work, &rep, &t, &work_st.vs, opts.seed);
                stages.insert("transform".into(), "ok".into());
            }
            Err(e) => {
                stages.insert("transform".into(), format!("failed: {e}"));
            }
        }
        timing.insert("transform".into(), t0.elapsed().as_millis());
    } else {
        transform_unavailable = true;
        stages.insert(
            "transform".into(),
            "skipped: observability condition false (specialized model still emitted)".into(),
        );
    }

    let ode_text = render_reparametrized(&rep);
    let report = PipelineReport {
        schema_version: 1,
        model: model_info(m),
        seed: opts.seed,
        io_equations: io_eqs_info,
        identifiable_field: field_info,
        observability: obs_info,
        non_principal_outputs: non_principal,
        rank: Some(rank_info),
        specialization: Some(spec_info),
        reduction: reduction_info,
        reparametrized: Some(ReparamInfo {
            ode: ode_text.clone(),
            digest: rep.model.digest(),
            constraints: rep.constraints.clone(),
            notes: rep.notes.clone(),
        }),
        transform: transform_info,
        verification: VerificationInfo {
            same_io,
            skip_reason,
        },
        stages,
        timing_ms: timing,
    };
    Ok(PipelineOutcome {
        report,
        reparametrized_ode: Some(ode_text),
        reparametrized: Some(rep),
        transform_artifact: artifact,
        work_model: work,
        transform_unavailable,
    })
}

/// Report for the `io` subcommand only.
pub fn run_io_report(m: &Model, opts: &PipelineOptions) -> Result<PipelineReport> {
    let mut timing = BTreeMap::new();
    let st = run_io_stage(m, opts, &mut timing)?;
    let (io_eqs_info, field_info, obs_info) = io_report_parts(m, &st);
    let mut stages = BTreeMap::new();
    stages.insert("io_equations".into(), "ok".into());
    Ok(PipelineReport {
        schema_version: 1,
        model: model_info(m),
        seed: opts.seed,
        io_equations: io_eqs_info,
        identifiable_field: field_info,
        observability: obs_info,
        non_principal_outputs: st.io.non_principal.clone(),
        rank: None,
        specialization: None,
        reduction: None,
        reparametrized: None,
        transform: None,
        verification: VerificationInfo {
            same_io: None,
            skip_reason: Some("io subcommand does not verify".into()),
        },
        stages,
        timing_ms: timing,
    })
}

fn spec_report(spec: &Specialization, m: &Model, vs: &VarSpace) -> SpecInfo {
    let values = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (kind, expr) = match v {
                AlgValue::Explicit(e) => ("explicit".to_string(), e.render(vs)),
                AlgValue::Root { ext, expr } => (format!("root(ext{})", ext + 1), expr.render(vs)),
            };
            ValueInfo {
                param: vs.name(m.params[i]).to_string(),
                kind,
                expr,
                alpha_rep: spec.value_alpha_rep(i).map(|r| r.render(vs)),
            }
        })
        .collect();
    let minimal_polynomials = spec
        .extensions
        .iter()
        .map(|e| MinPolyInfo {
            symbol: vs.name(e.theta).to_string(),
            text: e.minpoly.render(vs),
            degree: e.minpoly.degree_in(e.theta) as usize,
            representative: e.rep.as_ref().map(|r| r.render(vs)),
        })
        .collect();
    SpecInfo {
        beta: spec
            .beta
            .iter()
            .zip(spec.beta_defs.iter())
            .map(|(&b, def)| BetaInfo {
                symbol: vs.name(b).to_string(),
                definition: def.render(vs),
            })
            .collect(),
        values,
        minimal_polynomials,
        free_params: spec
            .free
            .iter()
            .map(|&i| vs.name(m.params[i]).to_string())
            .collect(),
        locally_not_globally: spec.locally_not_globally(),
        verified: true,
    }
}

fn transform_report(t: &StateTransform, vs: &VarSpace, closure: Option<bool>) -> TransformInfo {
    TransformInfo {
        entries: t
            .entries
            .iter()
            .map(|e| TransformEntryInfo {
                state: vs.name(e.new_state).to_string(),
                defining: e.defining.render(vs),
                solved: e.solved.as_ref().map(|h| h.render(vs)),
                note: e.branch_note.clone(),
            })
            .collect(),
        u_independent: t.u_independent,
        closure,
    }
}

fn build_artifact(
    m: &Model,
    rep: &Reparametrized,
    t: &StateTransform,
    vs: &VarSpace,
    seed: u64,
) -> Option<TransformArtifact> {
    let solved = t.solved_forms()?;
    let new_params: Option<Vec<(String, String)>> = rep
        .param_reps
        .iter()
        .map(|(name, rep_expr)| rep_expr.clone().map(|r| (name.clone(), r)))
        .collect();
    Some(TransformArtifact {
        schema_version: 1,
        old_digest: m.digest(),
        new_digest: rep.model.digest(),
        new_params: new_params?,
        states: solved
            .iter()
            .enumerate()
            .map(|(i, (_, h))| {
                (
                    rep.model.vars.name(rep.model.states[i]).to_string(),
                    h.render(vs),
                )
            })
            .collect(),
        seed,
    })
}

/// The reparametrized `.ode` text with constraint and note comments.
pub fn render_reparametrized(rep: &Reparametrized) -> String {
    let mut out = String::new();
    for c in &rep.constraints {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for n in &rep.notes {
        out.push_str("# ");
        out.push_str(n);
        out.push('\n');
    }
    out.push_str(&render_model(&rep.model));
    out
}

/// Inputs for numeric cross-validation, reconstructed from a transform
/// artifact against freshly parsed model files.
pub struct VerifySetup {
    pub old: Model,
    pub new: Model,
    pub new_param_exprs: Vec<RatFun>,
    pub solved: Vec<(VarId, RatFun)>,
    pub avoid: Vec<Poly>,
}

pub fn verify_setup(
    old_src: &str,
    new_src: &str,
    artifact: &serde_json::Value,
) -> Result<VerifySetup> {
    let old = Model::parse(old_src)?;
    let new = Model::parse(new_src)?;
    let get = |k: &str| -> Result<&serde_json::Value> {
        artifact
            .get(k)
            .ok_or_else(|| Error::Validation(format!("transform artifact missing `{k}`")))
    };
    let old_digest = get("old_digest")?.as_str().unwrap_or_default();
    let new_digest = get("new_digest")?.as_str().unwrap_or_default();
    if old_digest != old.digest() || new_digest != new.digest() {
        return Err(Error::Validation(
            "artifact digests do not match the model files".into(),
        ));
    }
    let parse_pairs = |v: &serde_json::Value| -> Result<Vec<(String, String)>> {
        v.as_array()
            .ok_or_else(|| Error::Validation("expected array".into()))?
            .iter()
            .map(|e| {
                let pair = e
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Validation("expected [name, expr] pair".into()))?;
                Ok((
                    pair[0].as_str().unwrap_or_default().to_string(),
                    pair[1].as_str().unwrap_or_default().to_string(),
                ))
            })
            .collect()
    };
    let params_pairs = parse_pairs(get("new_params")?)?;
    let states_pairs = parse_pairs(get("states")?)?;

    let mut new_param_exprs = Vec::new();
    for &np in &new.params {
        let name = new.vars.name(np);
        let (_, expr) = params_pairs
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Validation(format!("artifact misses parameter `{name}`")))?;
        new_param_exprs.push(crate::model::parse_expression(expr, &old.vars)?);
    }
    let mut solved = Vec::new();
    for &w in &new.states {
        let name = new.vars.name(w);
        let (_, expr) = states_pairs
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Validation(format!("artifact misses state `{name}`")))?;
        solved.push((w, crate::model::parse_expression(expr, &old.vars)?));
    }
    Ok(VerifySetup {
        old,
        new,
        new_param_exprs,
        solved,
        avoid: Vec::new(),
    })
}
