//! Command execution over a parsed workspace, producing structured reports.
//!
//! Every command emits one JSON object with the fields `command`, `inputs`,
//! `result`, `certificates` and `timing_ms`. Exit codes: 0 for success, 1
//! when a refutation or counterexample was found, 2 for input errors, 3 for
//! internal consistency failures.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use wreathlab_core::bounded::{
    bounded_consequence_check, BoundedError, Bounds, CheckOutcome, CheckSystem, TargetEq,
};
use wreathlab_core::noether::{
    nilpotency_index, nonzero_product_witness, verify_noetherian_failure, NoetherError,
};
use wreathlab_core::qcompact::{
    propagate_counterexample, star_subsystem, transport_address_set, transport_terms,
    ConsequenceInstance, InclusionStatus, PipelineOutcome, QError, StarOutcome, StarReport,
    TransportReport,
};
use wreathlab_core::semigroup::FiniteSemigroupWithZero;
use wreathlab_core::solver::{
    discriminating_point, DiscriminationConfig, Domain, SolutionBasis, SolveError,
};
use wreathlab_core::system::{satisfies, EqRef, Equation, SysEq, System, WreathPoint};
use wreathlab_core::term::decompose;
use wreathlab_core::vector::{FinSuppVector, Start};

use crate::parse::{
    emit_point, parse_equation_file, parse_point, parse_semigroup, parse_system, parse_terms,
    render_equation, render_term, render_validation, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Input files and parameters shared by the subcommands.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub semigroup: Option<PathBuf>,
    pub system: Option<PathBuf>,
    pub equation: Option<PathBuf>,
    pub point: Option<PathBuf>,
    pub bounds: Option<(u64, u64)>,
    pub output: Option<PathBuf>,
    pub budget: Option<u64>,
    pub witness_index: Option<u64>,
    pub probe_length: Option<usize>,
    pub nonneg: bool,
    pub terms: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    CheckSemigroup,
    Nilpotency,
    SolveB,
    Decompose,
    NoetherWitness,
    Star,
    Discriminate,
    Transport,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::CheckSemigroup => "check-semigroup",
            CommandKind::Nilpotency => "nilpotency",
            CommandKind::SolveB => "solve-b",
            CommandKind::Decompose => "decompose",
            CommandKind::NoetherWitness => "noether-witness",
            CommandKind::Star => "star",
            CommandKind::Discriminate => "discriminate",
            CommandKind::Transport => "transport",
            CommandKind::Verify => "verify",
        }
    }
}

struct Ctx {
    semigroup: Option<FiniteSemigroupWithZero>,
    system: Option<System>,
    equation: Option<Equation>,
    point: Option<WreathPoint>,
}

enum CommandError {
    Input(String),
    Internal(String),
}

impl From<ParseError> for CommandError {
    fn from(e: ParseError) -> Self {
        CommandError::Input(e.to_string())
    }
}

impl From<SolveError> for CommandError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::DiscriminationExhausted { .. } => CommandError::Input(e.to_string()),
            _ => CommandError::Internal(e.to_string()),
        }
    }
}

impl From<QError> for CommandError {
    fn from(e: QError) -> Self {
        match e {
            QError::PointNotSolution { .. } | QError::PointSatisfiesTarget => {
                CommandError::Input(e.to_string())
            }
            QError::InternalCheck(_) => CommandError::Internal(e.to_string()),
            QError::Solve(s) => CommandError::from(s),
            other => CommandError::Input(other.to_string()),
        }
    }
}

impl From<NoetherError> for CommandError {
    fn from(e: NoetherError) -> Self {
        match e {
            NoetherError::InternalCheck(_) => CommandError::Internal(e.to_string()),
            other => CommandError::Input(other.to_string()),
        }
    }
}

impl From<BoundedError> for CommandError {
    fn from(e: BoundedError) -> Self {
        CommandError::Input(e.to_string())
    }
}

fn read_file(path: &PathBuf) -> Result<String, CommandError> {
    std::fs::read_to_string(path)
        .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(ws: &Workspace, needs_valid_semigroup: bool) -> Result<Ctx, CommandError> {
    let semigroup = match &ws.semigroup {
        None => None,
        Some(path) => {
            let (sg, report) = parse_semigroup(&read_file(path)?)?;
            if needs_valid_semigroup && !report.is_valid() {
                return Err(CommandError::Input(format!(
                    "semigroup fails validation: {}",
                    serde_json::to_string(&render_validation(&report, &sg)).unwrap()
                )));
            }
            Some(sg)
        }
    };
    let system = match &ws.system {
        None => None,
        Some(path) => Some(parse_system(&read_file(path)?)?),
    };
    let equation = match &ws.equation {
        None => None,
        Some(path) => {
            let system = system
                .as_ref()
                .ok_or_else(|| CommandError::Input("an equation file needs a system".into()))?;
            Some(parse_equation_file(&read_file(path)?, system)?)
        }
    };
    let point = match &ws.point {
        None => None,
        Some(path) => {
            let sg = semigroup
                .as_ref()
                .ok_or_else(|| CommandError::Input("a point file needs a semigroup".into()))?;
            let system = system
                .as_ref()
                .ok_or_else(|| CommandError::Input("a point file needs a system".into()))?;
            Some(parse_point(&read_file(path)?, sg, system.var_names())?)
        }
    };
    Ok(Ctx {
        semigroup,
        system,
        equation,
        point,
    })
}

fn require_semigroup(ctx: &Ctx) -> Result<&FiniteSemigroupWithZero, CommandError> {
    ctx.semigroup
        .as_ref()
        .ok_or_else(|| CommandError::Input("this command requires --semigroup".into()))
}

fn require_system(ctx: &Ctx) -> Result<&System, CommandError> {
    ctx.system
        .as_ref()
        .ok_or_else(|| CommandError::Input("this command requires --system".into()))
}

fn require_equation(ctx: &Ctx) -> Result<&Equation, CommandError> {
    ctx.equation
        .as_ref()
        .ok_or_else(|| CommandError::Input("this command requires --equation".into()))
}

fn basis_json(basis: &SolutionBasis) -> Value {
    json!({
        "consistent": !basis.is_empty(),
        "particular": basis.particular,
        "homogeneous": basis.homogeneous,
    })
}

fn syseq_json(se: &SysEq, names: &[String]) -> Value {
    json!({
        "source": se.source.to_string(),
        "equation": render_equation(&se.equation, names),
    })
}

fn star_report_json(report: &StarReport, names: &[String]) -> Value {
    json!({
        "s_hat": report.s_hat.iter().map(|se| syseq_json(se, names)).collect::<Vec<_>>(),
        "t_less": report.t_less.iter().map(|t| render_term(t, names)).collect::<Vec<_>>(),
        "t_less_size": report.t_less.len(),
        "star": report.star.iter().map(|se| syseq_json(se, names)).collect::<Vec<_>>(),
    })
}

fn transport_json(
    report: &TransportReport,
    sg: &FiniteSemigroupWithZero,
    names: &[String],
) -> Value {
    json!({
        "beta": report.beta,
        "t_less": report.t_less.iter().map(|t| render_term(t, names)).collect::<Vec<_>>(),
        "t_less_size": report.t_less.len(),
        "star": report.star.iter().map(|se| syseq_json(se, names)).collect::<Vec<_>>(),
        "transport_set_size": report.transport_set.len(),
        "q": report.q,
        "q_values": report.transport_set.iter().zip(&report.q_values).map(|(t, v)| {
            json!({"term": render_term(t, names), "value": v})
        }).collect::<Vec<_>>(),
        "point": emit_point(&report.point, sg, names),
        "support": report.support,
        "spot_checked_instances": report
            .spot_checked
            .iter()
            .map(|(s, i)| format!("schema#{s}[i={i}]"))
            .collect::<Vec<_>>(),
    })
}

fn default_bounds(ws: &Workspace) -> Result<Bounds, CommandError> {
    let (w, m) = ws.bounds.unwrap_or((3, 3));
    Ok(Bounds::new(w, m, ws.budget.unwrap_or(DEFAULT_BUDGET))?)
}

fn run(ws: &Workspace, cmd: CommandKind) -> Result<(i32, Value, Value), CommandError> {
    match cmd {
        CommandKind::CheckSemigroup => {
            let path = ws
                .semigroup
                .as_ref()
                .ok_or_else(|| CommandError::Input("this command requires --semigroup".into()))?;
            let (sg, report) = parse_semigroup(&read_file(path)?)?;
            let result = render_validation(&report, &sg);
            let code = if report.is_valid() {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            Ok((code, result, json!({})))
        }
        CommandKind::Nilpotency => {
            let ctx = load(ws, true)?;
            let sg = require_semigroup(&ctx)?;
            let report = nilpotency_index(sg);
            let mut result = json!({
                "nilpotent": report.nilpotent,
                "index": report.index,
                "witness_length": report.witness_length,
                "witness": report.witness.as_ref().map(|w| {
                    w.iter().map(|e| sg.elem_name(*e).to_string()).collect::<Vec<_>>()
                }),
            });
            if let Some(len) = ws.probe_length {
                let probe = nonzero_product_witness(sg, len);
                result["probe"] = json!({
                    "length": len,
                    "witness": probe.map(|w| {
                        w.iter().map(|e| sg.elem_name(*e).to_string()).collect::<Vec<_>>()
                    }),
                });
            }
            Ok((EXIT_OK, result, json!({})))
        }
        CommandKind::SolveB => {
            let ctx = load(ws, false)?;
            let system = require_system(&ctx)?;
            let domain = if ws.nonneg {
                Domain::Nonneg
            } else {
                Domain::Positive
            };
            let names = system.var_names();
            let (finite, schemas) = additive_stream(system);
            let sub = wreathlab_core::solver::finite_equivalent_subsystem(
                system.arity(),
                domain,
                &finite,
                &schemas,
            )?;
            let kept: Vec<Value> = sub
                .kept
                .iter()
                .map(|(r, eq)| {
                    json!({
                        "source": stream_ref_string(*r),
                        "equation": format!(
                            "{} = {}",
                            render_term(&wreathlab_core::term::AddTermOrZero::Term(eq.0.clone()), names),
                            render_term(&wreathlab_core::term::AddTermOrZero::Term(eq.1.clone()), names),
                        ),
                    })
                })
                .collect();
            let result = json!({
                "kept": kept,
                "basis": basis_json(&sub.basis),
            });
            Ok((EXIT_OK, result, json!({})))
        }
        CommandKind::Decompose => {
            let ctx = load(ws, false)?;
            let system = require_system(&ctx)?;
            let names = system.var_names();
            let mut items = Vec::new();
            let mut push = |label: String, eq: &Equation| {
                let (lw, lb) = decompose(&eq.lhs);
                let (rw, rb) = decompose(&eq.rhs);
                items.push(json!({
                    "source": label,
                    "equation": render_equation(eq, names),
                    "lhs_wreath": lw.to_string(),
                    "rhs_wreath": rw.to_string(),
                    "lhs_additive": render_term(&wreathlab_core::term::AddTermOrZero::Term(lb), names),
                    "rhs_additive": render_term(&wreathlab_core::term::AddTermOrZero::Term(rb), names),
                }));
            };
            for (i, eq) in system.equations.iter().enumerate() {
                push(format!("eq#{i}"), eq);
            }
            for (s, schema) in system.schemas.iter().enumerate() {
                let i = schema.min_index();
                let eq = schema
                    .instantiate(i)
                    .map_err(|e| CommandError::Input(e.to_string()))?;
                push(format!("schema#{s}[i={i}]"), &eq);
            }
            Ok((EXIT_OK, json!({ "decompositions": items }), json!({})))
        }
        CommandKind::NoetherWitness => {
            let ctx = load(ws, true)?;
            let sg = require_semigroup(&ctx)?;
            let n = ws
                .witness_index
                .ok_or_else(|| CommandError::Input("this command requires --n".into()))?;
            if n == 0 {
                return Err(CommandError::Input("--n must be at least 1".into()));
            }
            let report = verify_noetherian_failure(sg, n)?;
            let names: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
            let result = json!({
                "n": n,
                "convention": report.convention,
                "satisfied_instances": report.satisfied,
                "violated_instance": report.violated_instance,
                "violating_value": sg.elem_name(report.violating_value),
                "point": emit_point(&report.point, sg, &names),
            });
            Ok((EXIT_OK, result, json!({})))
        }
        CommandKind::Star => {
            let ctx = load(ws, false)?;
            let system = require_system(&ctx)?;
            let equation = require_equation(&ctx)?;
            let names = system.var_names().to_vec();
            let inst = ConsequenceInstance::new(system.clone(), equation.clone())
                .map_err(|e| CommandError::Input(e.to_string()))?;
            let mut inst = inst;
            match star_subsystem(&inst)? {
                StarOutcome::ResolvedInconsistent { s_hat } => {
                    inst.record(InclusionStatus::BoundedVerified);
                    Ok((
                        EXIT_OK,
                        json!({
                            "status": "resolved-inconsistent",
                            "inclusion_status": inst.status.name(),
                            "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                        }),
                        json!({}),
                    ))
                }
                StarOutcome::RefutedAdditive { s_hat, witness } => {
                    inst.record(InclusionStatus::Refuted);
                    Ok((
                        EXIT_REFUTED,
                        json!({
                            "status": "refuted-additive",
                            "inclusion_status": inst.status.name(),
                            "witness": witness,
                            "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                        }),
                        json!({}),
                    ))
                }
                StarOutcome::Star(report) => {
                    let mut result = star_report_json(&report, &names);
                    result["inclusion_status"] = json!(inst.status.name());
                    let certificates = json!({ "basis": basis_json(&report.basis) });
                    Ok((EXIT_OK, result, certificates))
                }
            }
        }
        CommandKind::Discriminate => {
            let ctx = load(ws, false)?;
            let system = require_system(&ctx)?;
            let names = system.var_names().to_vec();
            let (terms, basis) = match &ws.terms {
                Some(term_list) => {
                    let terms = parse_terms(term_list, &names)?;
                    let (finite, schemas) = additive_stream(system);
                    let sub = wreathlab_core::solver::finite_equivalent_subsystem(
                        system.arity(),
                        Domain::Positive,
                        &finite,
                        &schemas,
                    )?;
                    (terms, sub.basis)
                }
                None => {
                    let equation = require_equation(&ctx)?;
                    let inst = ConsequenceInstance::new(system.clone(), equation.clone())
                        .map_err(|e| CommandError::Input(e.to_string()))?;
                    let report = match star_subsystem(&inst)? {
                        StarOutcome::Star(r) => r,
                        other => {
                            return Err(CommandError::Input(format!(
                                "nothing to discriminate: {other:?}"
                            )))
                        }
                    };
                    let t_star =
                        wreathlab_core::qcompact::prefix_terms(&report.star, &report.basis)?;
                    let address = transport_address_set(&report.t_less, equation);
                    (transport_terms(&address, &t_star), report.basis)
                }
            };
            if basis.is_empty() {
                return Err(CommandError::Input(
                    "the additive system is inconsistent; no point exists".into(),
                ));
            }
            let disc = discriminating_point(&terms, &basis, &DiscriminationConfig::default())?;
            let result = json!({
                "q": disc.point,
                "values": terms.iter().zip(&disc.values).map(|(t, v)| {
                    json!({"term": render_term(t, &names), "value": v})
                }).collect::<Vec<_>>(),
            });
            Ok((EXIT_OK, result, json!({ "basis": basis_json(&basis) })))
        }
        CommandKind::Transport => {
            let ctx = load(ws, true)?;
            let sg = require_semigroup(&ctx)?;
            let system = require_system(&ctx)?;
            let equation = require_equation(&ctx)?;
            let names = system.var_names().to_vec();
            let inst = ConsequenceInstance::new(system.clone(), equation.clone())
                .map_err(|e| CommandError::Input(e.to_string()))?;
            let failing = match &ctx.point {
                Some(p) => p.clone(),
                None => {
                    // search the box for a point separating the star system
                    let report = match star_subsystem(&inst)? {
                        StarOutcome::Star(r) => r,
                        StarOutcome::ResolvedInconsistent { s_hat } => {
                            return Ok((
                                EXIT_OK,
                                json!({
                                    "status": "resolved-inconsistent",
                                    "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                                }),
                                json!({}),
                            ))
                        }
                        StarOutcome::RefutedAdditive { s_hat, witness } => {
                            return Ok((
                                EXIT_REFUTED,
                                json!({
                                    "status": "refuted-additive",
                                    "witness": witness,
                                    "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                                }),
                                json!({}),
                            ))
                        }
                    };
                    let bounds = default_bounds(ws)?;
                    let star_sys =
                        CheckSystem::of_equations(report.star.iter().map(|se| se.equation.clone()));
                    match bounded_consequence_check(
                        sg,
                        system.arity(),
                        &star_sys,
                        &TargetEq::full(equation.clone()),
                        &bounds,
                    )? {
                        CheckOutcome::HoldsInBox => {
                            return Ok((
                                EXIT_OK,
                                json!({
                                    "status": "no-counterexample-in-box",
                                    "window": bounds.window,
                                    "max_b": bounds.max_b,
                                }),
                                json!({}),
                            ))
                        }
                        CheckOutcome::Counterexample(p) => p,
                    }
                }
            };
            let mut inst = inst;
            match propagate_counterexample(&inst, &failing, sg, &DiscriminationConfig::default())? {
                PipelineOutcome::ResolvedInconsistent { s_hat } => {
                    inst.record(InclusionStatus::BoundedVerified);
                    Ok((
                        EXIT_OK,
                        json!({
                            "status": "resolved-inconsistent",
                            "inclusion_status": inst.status.name(),
                            "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                        }),
                        json!({}),
                    ))
                }
                PipelineOutcome::RefutedAdditive { s_hat, witness } => {
                    inst.record(InclusionStatus::Refuted);
                    Ok((
                        EXIT_REFUTED,
                        json!({
                            "status": "refuted-additive",
                            "inclusion_status": inst.status.name(),
                            "witness": witness,
                            "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                        }),
                        json!({}),
                    ))
                }
                PipelineOutcome::Transported(report) => {
                    inst.record(InclusionStatus::Refuted);
                    let mut merged = json!({
                        "status": "transported",
                        "inclusion_status": inst.status.name(),
                        "input_point": emit_point(&failing, sg, &names),
                    });
                    let t = transport_json(&report, sg, &names);
                    for (k, v) in t.as_object().unwrap() {
                        merged[k] = v.clone();
                    }
                    Ok((EXIT_REFUTED, merged, json!({})))
                }
            }
        }
        CommandKind::Verify => {
            let ctx = load(ws, true)?;
            let sg = require_semigroup(&ctx)?;
            let system = require_system(&ctx)?;
            let equation = require_equation(&ctx)?;
            let names = system.var_names().to_vec();
            let bounds = default_bounds(ws)?;
            // schemas are reduced to the finite star subsystem first
            let (check_sys, finite_source): (CheckSystem, Value) = if system.schemas.is_empty() {
                (
                    CheckSystem::of_equations(system.equations.iter().cloned()),
                    json!("explicit"),
                )
            } else {
                let inst = ConsequenceInstance::new(system.clone(), equation.clone())
                    .map_err(|e| CommandError::Input(e.to_string()))?;
                match star_subsystem(&inst)? {
                    StarOutcome::Star(r) => {
                        let refs: Vec<String> =
                            r.star.iter().map(|se| se.source.to_string()).collect();
                        (
                            CheckSystem::of_equations(r.star.iter().map(|se| se.equation.clone())),
                            json!({"star": refs}),
                        )
                    }
                    StarOutcome::ResolvedInconsistent { s_hat } => {
                        return Ok((
                            EXIT_OK,
                            json!({
                                "status": "resolved-inconsistent",
                                "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                            }),
                            json!({}),
                        ))
                    }
                    StarOutcome::RefutedAdditive { s_hat, witness } => {
                        return Ok((
                            EXIT_REFUTED,
                            json!({
                                "status": "refuted-additive",
                                "witness": witness,
                                "s_hat": s_hat.iter().map(|se| syseq_json(se, &names)).collect::<Vec<_>>(),
                            }),
                            json!({}),
                        ))
                    }
                }
            };
            let outcome = bounded_consequence_check(
                sg,
                system.arity(),
                &check_sys,
                &TargetEq::full(equation.clone()),
                &bounds,
            );
            match outcome {
                Ok(CheckOutcome::HoldsInBox) => Ok((
                    EXIT_OK,
                    json!({
                        "status": "holds-in-box",
                        "inclusion_status": InclusionStatus::BoundedVerified.name(),
                        "window": bounds.window,
                        "max_b": bounds.max_b,
                        "checked_system": finite_source,
                    }),
                    json!({}),
                )),
                Ok(CheckOutcome::Counterexample(pt)) => Ok((
                    EXIT_REFUTED,
                    json!({
                        "status": "counterexample",
                        "inclusion_status": InclusionStatus::Refuted.name(),
                        "point": emit_point(&pt, sg, &names),
                        "window": bounds.window,
                        "max_b": bounds.max_b,
                        "checked_system": finite_source,
                    }),
                    json!({}),
                )),
                Err(BoundedError::BudgetExceeded { estimate, budget }) => Err(CommandError::Input(
                    format!("enumeration refused: estimated {estimate} units over budget {budget}"),
                )),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn additive_stream(
    system: &System,
) -> (
    Vec<(wreathlab_core::term::AddTerm, wreathlab_core::term::AddTerm)>,
    Vec<wreathlab_core::solver::AdditiveSchema>,
) {
    let n = system.arity();
    let finite = system
        .equations
        .iter()
        .map(|eq| eq.additive_parts())
        .collect();
    let schemas = system
        .schemas
        .iter()
        .map(|sc| {
            let (lhs, rhs) = sc.additive_affine(n);
            wreathlab_core::solver::AdditiveSchema {
                lhs,
                rhs,
                min_index: sc.min_index(),
            }
        })
        .collect();
    (finite, schemas)
}

fn stream_ref_string(r: wreathlab_core::solver::StreamRef) -> String {
    match r {
        wreathlab_core::solver::StreamRef::Finite(i) => EqRef::Explicit(i).to_string(),
        wreathlab_core::solver::StreamRef::Instance { schema, index } => {
            EqRef::Instance { schema, index }.to_string()
        }
    }
}

fn inputs_json(ws: &Workspace) -> Value {
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    json!({
        "semigroup": path(&ws.semigroup),
        "system": path(&ws.system),
        "equation": path(&ws.equation),
        "point": path(&ws.point),
        "bounds": ws.bounds.map(|(w, m)| json!({"window": w, "max_b": m})),
        "budget": ws.budget.unwrap_or(DEFAULT_BUDGET),
        "n": ws.witness_index,
        "length": ws.probe_length,
        "domain": if ws.nonneg { "nonneg" } else { "positive" },
        "terms": ws.terms,
    })
}

/// Runs one subcommand over the workspace; returns the exit code and the
/// complete JSON report.
pub fn run_command(ws: &Workspace, cmd: CommandKind) -> (i32, Value) {
    let start = Instant::now();
    let (code, result, certificates, error) = match run(ws, cmd) {
        Ok((code, result, certs)) => (code, result, certs, None),
        Err(CommandError::Input(msg)) => (EXIT_INPUT, Value::Null, json!({}), Some(msg)),
        Err(CommandError::Internal(msg)) => (EXIT_INTERNAL, Value::Null, json!({}), Some(msg)),
    };
    let mut report = json!({
        "command": cmd.name(),
        "inputs": inputs_json(ws),
        "result": result,
        "certificates": certificates,
        "timing_ms": start.elapsed().as_millis() as u64,
    });
    if let Some(msg) = error {
        report["error"] = json!(msg);
    }
    (code, report)
}

/// Sanity helper used by tests: evaluates whether a point solves an equation.
pub fn point_satisfies(pt: &WreathPoint, eq: &Equation, sg: &FiniteSemigroupWithZero) -> bool {
    satisfies(pt, eq, sg).unwrap_or(false)
}

/// Builds the all-zero point over the semigroup with the given shifts.
pub fn zero_point(sg: &FiniteSemigroupWithZero, bvals: Vec<u64>) -> WreathPoint {
    let vectors = vec![FinSuppVector::zero(Start::One, sg); bvals.len()];
    WreathPoint::new(Start::One, vectors, bvals).expect("positive shifts")
}
