//! One function per command, each producing a [`Report`].

use cherednik_core::banach::{
    choose_levels, coadmissible_check, gauss_norm, lattice_check, weight_decompose_banach, BanachError,
};
use cherednik_core::category_o::{
    blocks, c_values, decomposition_matrix, highest_weight_order, simple_quotient_slice, singular_vectors,
    weight_spaces, CategoryError,
};
use cherednik_core::{BanachElement, LevelParams, PadicContext, PadicError, PbwElement, Scalar, Valuation, VermaSlice};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{Command, JobConfig};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config field `{field}`: {message}")]
    Validation { field: &'static str, message: String },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Banach(#[from] BanachError),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Validation { .. } | RunError::Padic(_) => 2,
            RunError::Category(_) | RunError::Banach(_) => 3,
        }
    }
}

fn missing(field: &'static str, command: Command) -> RunError {
    RunError::Validation {
        field,
        message: format!("required by `{}`", command.name()),
    }
}

fn text(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn valuation(v: Valuation) -> Value {
    match v {
        Valuation::Finite { value, exact: true } => json!(value),
        other => text(other),
    }
}

fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(text).collect())
}

/// Config echo and version, common to every report.
fn header(cfg: &JobConfig, command: Command, report: &mut Report) {
    let opt = |v: Option<u64>| v.map_or(Value::Null, |x| json!(x));
    report.note("version", env!("CARGO_PKG_VERSION"));
    report.note("command", command.name());
    report.note("group", cfg.group_spec.clone());
    report.note("c", Value::Array(cfg.c_text.iter().map(text).collect()));
    report.note("prime", opt(cfg.prime));
    report.note("precision", cfg.precision);
    report.note("cutoff", cfg.cutoff);
    report.note("levels", cfg.levels);
    report.note("level", cfg.level);
    report.note("r", opt(cfg.r.map(u64::from)));
    report.note("irrep", cfg.irrep.clone().map_or(Value::Null, Value::String));
    report.note("elements", Value::Array(cfg.elements.iter().map(text).collect()));
}

fn selected_irreps(cfg: &JobConfig) -> Vec<usize> {
    let rg = cfg.algebra.reflection_group();
    match &cfg.irrep {
        Some(label) => vec![rg.irrep_index(label).expect("validated")],
        None => (0..rg.irreps().len()).collect(),
    }
}

fn label(cfg: &JobConfig, w: usize) -> String {
    cfg.algebra.reflection_group().irreps()[w].label().to_string()
}

fn context(cfg: &JobConfig, command: Command) -> Result<PadicContext, RunError> {
    let p = cfg.prime.ok_or_else(|| missing("prime", command))?;
    let conductor = cfg.algebra.reflection_group().group().conductor();
    Ok(PadicContext::new(p, cfg.precision, conductor)?)
}

/// The configured level, with r forced by `r` or chosen by the lattice rule.
fn level_params(cfg: &JobConfig, ctx: &PadicContext) -> LevelParams {
    match cfg.r {
        Some(r) => LevelParams::new(cfg.level, r, ctx.clone()),
        None => choose_levels(&cfg.algebra, ctx, cfg.level + 1)
            .pop()
            .expect("at least one level"),
    }
}

fn element_at(cfg: &JobConfig, command: Command, level: usize) -> Result<PbwElement, RunError> {
    match cfg.elements.len() {
        0 => Err(missing("element", command)),
        1 => Ok(cfg.elements[0].clone()),
        _ => Ok(cfg.elements[level].clone()),
    }
}

pub fn run_command(cfg: &JobConfig, command: Command) -> Result<Report, RunError> {
    let alg = &cfg.algebra;
    let rg = alg.reflection_group();
    let mut report;
    match command {
        Command::Reflections => {
            report = Report::new(&["element", "class", "lambda", "alpha", "coroot", "c"]);
            for s in alg.reflections() {
                report.push(vec![
                    json!(s.element),
                    json!(s.class),
                    text(&s.lambda),
                    scalars(&s.alpha),
                    scalars(&s.coroot),
                    text(alg.c().value(s)),
                ]);
            }
        }
        Command::Euler => {
            report = Report::new(&["irrep", "dim", "c_w"]);
            report.note("euler", alg.euler_element().to_string());
            for (w, cw) in rg.irreps().iter().zip(c_values(alg)?) {
                report.push(vec![text(w.label()), json!(w.dim()), text(cw)]);
            }
        }
        Command::VermaWeights => {
            report = Report::new(&["irrep", "degree", "weight", "dim", "semisimple"]);
            for w in selected_irreps(cfg) {
                let slice = VermaSlice::new(alg.clone(), w, cfg.cutoff)?;
                for (d, (weight, dim, scalar)) in weight_spaces(&slice).into_iter().enumerate() {
                    report.push(vec![text(label(cfg, w)), json!(d), text(weight), json!(dim), json!(scalar)]);
                }
            }
        }
        Command::Singular => {
            report = Report::new(&["irrep", "degree", "dim", "isotype", "multiplicity"]);
            for w in selected_irreps(cfg) {
                let slice = VermaSlice::new(alg.clone(), w, cfg.cutoff)?;
                for d in 1..=cfg.cutoff {
                    let space = singular_vectors(&slice, d);
                    for comp in &space.components {
                        report.push(vec![
                            text(label(cfg, w)),
                            json!(d),
                            json!(space.dim()),
                            text(&comp.label),
                            json!(comp.multiplicity),
                        ]);
                    }
                }
            }
        }
        Command::SimpleCharacter => {
            report = Report::new(&["irrep", "degree", "dim", "label", "mult"]);
            for w in selected_irreps(cfg) {
                let q = simple_quotient_slice(alg.clone(), w, cfg.cutoff)?;
                report.note(format!("stable({})", label(cfg, w)), q.stable_under_cutoff);
                let ch = &q.character;
                for (d, row) in ch.mults.iter().enumerate() {
                    for (k, m) in row.iter().enumerate() {
                        report.push(vec![
                            text(label(cfg, w)),
                            json!(d),
                            json!(ch.degree_dim(d)),
                            text(&ch.labels[k]),
                            json!(m),
                        ]);
                    }
                }
            }
        }
        Command::Order => {
            report = Report::new(&["lower", "upper", "gap"]);
            let cs = c_values(alg)?;
            for (w, e) in highest_weight_order(alg)? {
                report.push(vec![text(label(cfg, w)), text(label(cfg, e)), text(&cs[e] - &cs[w])]);
            }
        }
        Command::Blocks => {
            report = Report::new(&["block", "members"]);
            for (k, b) in blocks(alg)?.into_iter().enumerate() {
                report.push(vec![json!(k), Value::Array(b.into_iter().map(|w| text(label(cfg, w))).collect())]);
            }
        }
        Command::DecompMatrix => {
            report = Report::new(&["verma", "simple", "multiplicity"]);
            let dm = decomposition_matrix(alg.clone(), cfg.cutoff)?;
            for (w, row) in dm.entries.iter().enumerate() {
                for (e, m) in row.iter().enumerate() {
                    report.push(vec![text(&dm.labels[w]), text(&dm.labels[e]), json!(m)]);
                }
            }
        }
        Command::Norm => {
            report = Report::new(&["term", "weight", "level"]);
            let ctx = context(cfg, command)?;
            let params = level_params(cfg, &ctx);
            let x = BanachElement::with_default_tail(element_at(cfg, command, cfg.level as usize)?, params);
            report.note("chosen_r", x.params().r());
            report.note("tau", x.tau());
            report.note("norm_exponent", gauss_norm(&x).map_or_else(|e| text(e), valuation));
            for (key, c, w) in x.weighted_terms() {
                let term = PbwElement::monomial(key, c);
                report.push(vec![text(term), valuation(w), json!(cfg.level)]);
            }
        }
        Command::LatticeCheck => {
            report = Report::new(&["level", "r", "products", "min_exponent"]);
            let ctx = context(cfg, command)?;
            let params = match cfg.r {
                Some(_) => vec![level_params(cfg, &ctx)],
                None => choose_levels(alg, &ctx, cfg.levels),
            };
            for p in params {
                let rep = lattice_check(alg, &p)?;
                report.push(vec![json!(rep.level), json!(rep.r), json!(rep.products_checked), valuation(rep.min_exponent)]);
            }
        }
        Command::WsDecompose => {
            report = Report::new(&["weight", "component", "exponent"]);
            let ctx = context(cfg, command)?;
            let params = level_params(cfg, &ctx);
            let x = BanachElement::with_default_tail(element_at(cfg, command, cfg.level as usize)?, params);
            report.note("chosen_r", x.params().r());
            report.note("tau", x.tau());
            for (w, comp) in weight_decompose_banach(&x).components {
                report.push(vec![
                    json!(w),
                    text(comp.element()),
                    gauss_norm(&comp).map_or_else(|e| text(e), valuation),
                ]);
            }
        }
        Command::CoadmissibleCheck => {
            report = Report::new(&["level", "r", "element", "norm_exponent"]);
            let ctx = context(cfg, command)?;
            let levels = choose_levels(alg, &ctx, cfg.levels);
            let family = levels
                .iter()
                .enumerate()
                .map(|(m, p)| Ok(BanachElement::with_default_tail(element_at(cfg, command, m)?, p.clone())))
                .collect::<Result<Vec<_>, RunError>>()?;
            coadmissible_check(&family)?;
            for (m, x) in family.iter().enumerate() {
                report.push(vec![
                    json!(m),
                    json!(x.params().r()),
                    text(x.element()),
                    gauss_norm(x).map_or_else(|e| text(e), valuation),
                ]);
            }
        }
    }
    let extra = std::mem::take(&mut report.header);
    header(cfg, command, &mut report);
    report.header.extend(extra);
    Ok(report)
}
