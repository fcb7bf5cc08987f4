//! The six commands. Each returns a [`Report`] and an exit status.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use hbarcon::brackets::{bracket, BracketKind};
use hbarcon::dirac::{
    compare_evolutions, consistency_iteration, constrained_evolution, ConstraintAnalysis, ConstraintClass,
    DiracOptions, Multiplier, TraceOutcome,
};
use hbarcon::lift::{
    hamiltonian_vector_field, lift_classical, lift_moyal, match_coefficients, monomial_basis, MatchVerdict,
};
use hbarcon::wigner::{
    check_normalization, marginal_error, quantisation_rule_check, wigner_transform, HermiteState, MomentumAxis,
};
use hbarcon::{Ctx, GradedPolynomial, Scalar};
use serde_json::{json, Value};

use crate::config::{expression, Format, RunConfig};
use crate::report::Report;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Bracket { kind: String, f: String, g: String },
    Lift,
    Dirac,
    Compare,
    Coeffs,
    Wigner,
}

impl Command {
    /// Build a command from its name and positional arguments.
    pub fn from_parts(name: &str, args: &[String]) -> Result<Self, CliError> {
        let cmd = match (name, args) {
            ("bracket", [kind, f, g]) => Command::Bracket {
                kind: kind.clone(),
                f: f.clone(),
                g: g.clone(),
            },
            ("lift", []) => Command::Lift,
            ("dirac", []) => Command::Dirac,
            ("compare", []) => Command::Compare,
            ("coeffs", []) => Command::Coeffs,
            ("wigner", []) => Command::Wigner,
            _ => {
                return Err(CliError::Config(format!(
                    "unknown command `{name}` with {} arguments",
                    args.len()
                )))
            }
        };
        Ok(cmd)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Bracket { .. } => "bracket",
            Command::Lift => "lift",
            Command::Dirac => "dirac",
            Command::Compare => "compare",
            Command::Coeffs => "coeffs",
            Command::Wigner => "wigner",
        }
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    /// Every asserted check passed.
    Success,
    /// An error, or a numerical check failed.
    Failure,
    /// A documented divergence from the classical picture, such as the
    /// quartic oscillator.
    Divergence,
}

impl Exit {
    pub fn code(self) -> i32 {
        match self {
            Exit::Success => 0,
            Exit::Failure => 1,
            Exit::Divergence => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: Exit,
    /// Grid samples for `wigner --format csv`.
    pub grid_csv: Option<String>,
}

impl Outcome {
    /// Rendered output in the configured format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Text => self.report.to_text(),
            Format::Csv => self.grid_csv.clone().unwrap_or_else(|| self.report.to_csv()),
        }
    }
}

struct Clock {
    start: Instant,
    steps: BTreeMap<String, f64>,
}

impl Clock {
    fn new() -> Self {
        Clock {
            start: Instant::now(),
            steps: BTreeMap::new(),
        }
    }

    fn time<T>(&mut self, step: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.steps.insert(step.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    fn finish(mut self) -> BTreeMap<String, f64> {
        self.steps
            .insert("total".into(), self.start.elapsed().as_secs_f64() * 1e3);
        self.steps
    }
}

fn strings(list: &[GradedPolynomial]) -> Vec<String> {
    list.iter().map(|p| p.to_string()).collect()
}

fn scalar_or_null(s: Option<&Scalar>) -> Value {
    s.map_or(Value::Null, |s| Value::String(s.to_string()))
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut report = Report::new(cmd.name(), cfg);
    let mut clock = Clock::new();
    let (comparable, exit, grid_csv) = match cmd {
        Command::Bracket { kind, f, g } => {
            let (v, e) = cmd_bracket(kind, f, g, cfg, &mut clock)?;
            (v, e, None)
        }
        Command::Lift => {
            let (v, e) = cmd_lift(cfg, &mut clock)?;
            (v, e, None)
        }
        Command::Dirac => {
            let (v, e) = cmd_dirac(cfg, &mut clock)?;
            (v, e, None)
        }
        Command::Compare => {
            let (v, e) = cmd_compare(cfg, &mut clock)?;
            (v, e, None)
        }
        Command::Coeffs => {
            let (v, e) = cmd_coeffs(cfg, &mut clock)?;
            (v, e, None)
        }
        Command::Wigner => cmd_wigner(cfg, &mut clock)?,
    };
    report.comparable = comparable;
    report.timings = clock.finish();
    Ok(Outcome {
        report,
        exit,
        grid_csv,
    })
}

fn bracket_kind(kind: &str, order: Option<u32>) -> Result<BracketKind, CliError> {
    match kind {
        "pb" => Ok(BracketKind::Pb),
        "epb" => Ok(BracketKind::Epb),
        "moyal" => Ok(BracketKind::Moyal { order }),
        other => Err(CliError::Config(format!(
            "unknown bracket `{other}`; expected pb, epb or moyal"
        ))),
    }
}

fn cmd_bracket(kind: &str, f: &str, g: &str, cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit), CliError> {
    let ctx = cfg.context()?;
    let kind = bracket_kind(kind, cfg.order)?;
    let f = expression(f, &ctx, "first argument")?;
    let g = expression(g, &ctx, "second argument")?;
    let r = clock.time("bracket", || bracket(kind, &f, &g))?;
    let r = cfg.hbar_mode()?.apply(&r);
    Ok((
        json!({
            "kind": kind.to_string(),
            "f": f.to_string(),
            "g": g.to_string(),
            "result": r.to_string(),
        }),
        Exit::Success,
    ))
}

fn cmd_lift(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit), CliError> {
    let ctx = cfg.context()?;
    let h = cfg.hamiltonian(&ctx)?;
    let order = cfg.order.unwrap_or(2);
    let field = hamiltonian_vector_field(&h)?;
    let lifted = clock.time("lift", || lift_classical(&h, cfg.ghosts))?;
    let series = clock.time("series", || lift_moyal(&h, order, cfg.ghosts, None))?;
    let corrections: Vec<Value> = series
        .corrections
        .iter()
        .map(|c| {
            json!({
                "j": c.j,
                "coefficient": c.coefficient.to_string(),
                "term": c.term.to_string(),
            })
        })
        .collect();
    Ok((
        json!({
            "hamiltonian": h.to_string(),
            "vector_field": strings(&field),
            "lifted": lifted.to_string(),
            "order": order,
            "corrections": corrections,
            "series": series.to_polynomial().to_string(),
        }),
        Exit::Success,
    ))
}

fn dirac_options(cfg: &RunConfig, ctx: &Ctx) -> Result<DiracOptions, CliError> {
    Ok(DiracOptions {
        include_ghosts: cfg.ghosts,
        max_stages: cfg.max_stages,
        hbar: cfg.hbar_mode()?,
        xi: cfg.xi(ctx)?,
        primary_override: None,
    })
}

fn default_observables(ctx: &Ctx) -> Vec<GradedPolynomial> {
    (0..ctx.dim()).map(|a| GradedPolynomial::phi(ctx, a)).collect()
}

fn matrix_json<T: ToString>(m: &[Vec<T>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn outcome_str(o: &TraceOutcome) -> String {
    match o {
        TraceOutcome::NewConstraint(k) => format!("new constraint {k}"),
        TraceOutcome::MultiplierEquation => "multiplier equation".into(),
        TraceOutcome::WeaklyZero => "weakly zero".into(),
        TraceOutcome::Duplicate => "duplicate".into(),
    }
}

fn analysis_json(a: &ConstraintAnalysis) -> Value {
    let ctx = &a.ctx;
    let trace: Vec<Value> = a
        .trace
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "source": s.source,
                "expr": s.expr.to_string(),
                "outcome": outcome_str(&s.outcome),
            })
        })
        .collect();
    let constraints: Vec<Value> = a
        .psi
        .constraints
        .iter()
        .zip(&a.psi.classification)
        .map(|(c, class)| {
            json!({
                "expr": c.expr.to_string(),
                "stage": c.stage,
                "index": if c.index == usize::MAX { Value::Null } else { json!(c.index) },
                "class": class.as_str(),
            })
        })
        .collect();
    let multipliers: Vec<Value> = a
        .multipliers
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let (status, value) = match m {
                Multiplier::Determined(r) => ("determined", Value::String(r.to_string())),
                Multiplier::Gauge(r) => ("gauge", Value::String(r.to_string())),
                Multiplier::Free => ("free", Value::Null),
            };
            json!({ "u": k, "status": status, "value": value })
        })
        .collect();
    let solutions: Vec<Value> = a
        .surface
        .solutions()
        .iter()
        .map(|(b, r)| {
            json!({
                "variable": ctx.name(hbarcon::Variable::Lambda(*b)),
                "value": r.to_string(),
            })
        })
        .collect();
    let mut v = json!({
        "hamiltonian": a.hamiltonian.to_string(),
        "extended_hamiltonian": a.extended.to_string(),
        "primary_constraints": a.primaries().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "iteration": trace,
        "constraints": constraints,
        "C": matrix_json(&a.c),
        "second_class": a.second_class,
        "det": a.det.to_string(),
        "C_inv": a.c_inv.as_ref().map_or(Value::Null, |m| matrix_json(m)),
        "multipliers": multipliers,
        "total_hamiltonian": a.total_hamiltonian.to_string(),
        "surface": {
            "solutions": solutions,
            "residual": strings(a.surface.residual()),
        },
    });
    if a.options.include_ghosts {
        v["ghost_terms"] = json!(strings(&a.ghost_terms()));
    }
    v
}

const EMB_NOTE: &str = "agreement of edb with the emb bracket is not tested: emb is not implemented";

fn cmd_dirac(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit), CliError> {
    let ctx = cfg.context()?;
    let h = cfg.hamiltonian(&ctx)?;
    let opts = dirac_options(cfg, &ctx)?;
    let analysis = clock.time("analysis", || consistency_iteration(&h, &opts))?;
    let observables = if cfg.observables.is_empty() {
        default_observables(&ctx)
    } else {
        cfg.observables(&ctx)?
    };
    let mut evolutions = Vec::new();
    let mut values = Vec::new();
    clock.time("evolution", || -> Result<(), CliError> {
        for f in &observables {
            let ev = constrained_evolution(f, &analysis)?;
            evolutions.push(json!({
                "observable": f.to_string(),
                "evolution": ev.value.to_string(),
                "unreduced": ev.raw.to_string(),
                "without_multipliers": ev.without_multipliers.to_string(),
                "multipliers_irrelevant": ev.multipliers_irrelevant,
            }));
            values.push(ev.value);
        }
        Ok(())
    })?;
    let mut v = analysis_json(&analysis);
    v["evolutions"] = Value::Array(evolutions);
    let mut exit = Exit::Success;
    let mut diagnostics = Vec::new();
    if analysis.psi.classification.contains(&ConstraintClass::FirstClass) {
        diagnostics.push("first-class constraints present; they are left out of the Dirac bracket".to_string());
    }
    if cfg.xi.is_some() {
        let bare_opts = DiracOptions { xi: None, ..opts.clone() };
        let bare = clock.time("bare analysis", || consistency_iteration(&h, &bare_opts))?;
        let mut unchanged = true;
        for (f, with_xi) in observables.iter().zip(&values) {
            unchanged &= &constrained_evolution(f, &bare)?.value == with_xi;
        }
        v["xi_check"] = json!({ "evolution_unchanged": unchanged });
        if !unchanged {
            exit = Exit::Divergence;
        }
    }
    v["diagnostics"] = json!(diagnostics);
    v["notes"] = json!([EMB_NOTE]);
    Ok((v, exit))
}

fn cmd_compare(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit), CliError> {
    let ctx = cfg.context()?;
    let h = cfg.hamiltonian(&ctx)?;
    let opts = dirac_options(cfg, &ctx)?;
    let analysis = clock.time("analysis", || consistency_iteration(&h, &opts))?;
    let observables = if cfg.observables.is_empty() {
        monomial_basis(&ctx, cfg.basis_degree.unwrap_or(4))
    } else {
        cfg.observables(&ctx)?
    };
    let mut rows = Vec::new();
    let mut all_equal = true;
    clock.time("comparison", || -> Result<(), CliError> {
        for f in &observables {
            let c = compare_evolutions(&analysis, f, cfg.order)?;
            all_equal &= c.equal;
            rows.push(json!({
                "observable": f.to_string(),
                "constrained": c.constrained.to_string(),
                "moyal": c.moyal.to_string(),
                "difference": c.difference.to_string(),
                "difference_phase_space": c.difference_phase_space.as_ref().map(|p| p.to_string()),
                "lambda_remainder": c.lambda_remainder.as_ref().map(|p| p.to_string()),
                "equal": c.equal,
            }));
        }
        Ok(())
    })?;
    let verdict = if all_equal { "equal" } else { "different" };
    Ok((
        json!({
            "hamiltonian": h.to_string(),
            "moyal_order": cfg.order.map_or(Value::String("untruncated".into()), |o| json!(o)),
            "comparisons": rows,
            "verdict": verdict,
            "notes": [EMB_NOTE],
        }),
        if all_equal { Exit::Success } else { Exit::Divergence },
    ))
}

fn cmd_coeffs(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit), CliError> {
    let ctx = cfg.context()?;
    let h = cfg.hamiltonian(&ctx)?;
    let order = cfg.order.unwrap_or(2);
    let basis = monomial_basis(&ctx, cfg.basis_degree.unwrap_or(5));
    let r = clock.time("matching", || match_coefficients(&h, order, &basis))?;
    let kappas: Vec<Value> = r
        .kappas
        .iter()
        .map(|k| {
            json!({
                "j": k.j,
                "value": scalar_or_null(k.value.as_ref()),
                "printed": k.printed.to_string(),
                "ratio_to_printed": scalar_or_null(k.ratio.as_ref()),
                "note": k.note,
            })
        })
        .collect();
    let matches_printed = r
        .kappas
        .iter()
        .all(|k| k.ratio.as_ref().is_none_or(|q| q.is_one()));
    let exit = match r.verdict {
        MatchVerdict::Inconsistent => Exit::Divergence,
        _ if !matches_printed => Exit::Divergence,
        _ => Exit::Success,
    };
    Ok((
        json!({
            "hamiltonian": h.to_string(),
            "order": r.order,
            "target": "i*moyal(H, rho)",
            "basis_size": r.basis_size,
            "equations": r.equations,
            "rank": r.rank,
            "verdict": r.verdict.as_str(),
            "kappas": kappas,
            "verified_on_basis": r.verified_on_basis,
            "matches_printed_coefficients": matches_printed,
        }),
        exit,
    ))
}

fn cmd_wigner(cfg: &RunConfig, clock: &mut Clock) -> Result<(Value, Exit, Option<String>), CliError> {
    let hbar = cfg.hbar_f64()?;
    let state = HermiteState::new(cfg.grid.level, hbar)?;
    let l = cfg.grid.half_width.unwrap_or_else(|| state.default_half_width());
    let psi = state.sample(-l, l, cfg.grid.nq)?;
    let axis = MomentumAxis::symmetric(l, cfg.grid.np);
    let rho = clock.time("transform", || wigner_transform(&psi, &axis))?;
    let norm = check_normalization(&rho);
    let marginal = marginal_error(&rho, &psi);
    let quant = clock.time("quantisation", || quantisation_rule_check(&psi, &axis))?;
    let origin = rho.nearest(0.0, 0.0);
    let oracle = if cfg.grid.level.is_multiple_of(2) { 1.0 } else { -1.0 } / (PI * hbar);
    let checks = json!({
        "real": rho.imaginary_residue < 1e-10,
        "integral": norm.integral_error < 1e-6,
        "integral_of_square": norm.square_error < 1e-4,
        "marginal": marginal < 1e-6,
        "origin_value": (origin - oracle).abs() < 1e-3,
        "lhs_identity": quant.lhs_identity_error < 1e-6,
        "rhs_identity": quant.rhs_identity_error < 1e-6,
        "lhs_differs_from_rhs": quant.gap > 0.1 * quant.lhs_norm,
    });
    let pass = checks.as_object().expect("object").values().all(|v| v == &Value::Bool(true));
    let v = json!({
        "level": cfg.grid.level,
        "hbar": hbar,
        "grid": { "q": [-l, l, cfg.grid.nq], "p": [-l, l, cfg.grid.np] },
        "imaginary_residue": rho.imaginary_residue,
        "integral": norm.integral,
        "integral_of_square": norm.integral_of_square,
        "expected_integral_of_square": norm.expected_square,
        "marginal_error": marginal,
        "origin": { "value": origin, "closed_form": oracle },
        "quantisation": {
            "lhs_identity_error": quant.lhs_identity_error,
            "rhs_identity_error": quant.rhs_identity_error,
            "lhs_minus_rhs": quant.gap,
            "lhs_norm": quant.lhs_norm,
            "rhs_norm": quant.rhs_norm,
            "p_zero_slice": { "lhs_max": quant.p_zero_slice.0, "rhs_max": quant.p_zero_slice.1 },
        },
        "checks": checks,
        "verdict": if pass { "pass" } else { "fail" },
    });
    let csv = (cfg.format == Format::Csv).then(|| rho.to_csv());
    Ok((v, if pass { Exit::Success } else { Exit::Failure }, csv))
}
