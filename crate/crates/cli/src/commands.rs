//! Subcommand implementations. Each returns the exit status on success.

use std::path::Path;

use heatrace_core::bridge::parity_vanishes;
use heatrace_core::invariant::{assemble_invariant_with, ExpressionExport};
use heatrace_core::rational::RationalRepr;
use heatrace_core::{
    enumerate_index_tuples, evaluate_invariant, h2_diagnostic_with, ibp_canonicalize, script_i, CoefficientEngine,
    H2Diagnostic, IndexTuple, PotentialSample, Rational,
};
use heatrace_spectral::{
    boundary_gap, discretize_with, duhamel_terms, fit_expansion, trace_diff, BoundaryGap, Eigenvectors, FitReport,
    SpectralModel,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cli::{BoundaryArgs, CoeffArgs, Command, ConfigArgs, Format, InvariantsArgs, VerifyArgs};
use crate::config::{InvariantsConfig, RunConfig, Sweep};
use crate::error::{CliError, Result, EXIT_CHECK_FAILED};
use crate::output::{self, float, Csv, Meta};
use crate::verify::{self, CoefficientTable, Status};

pub fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Coeff(a) => coeff(a),
        Command::Invariants(a) => invariants(a),
        Command::Trace(a) => trace(a),
        Command::Fit(a) => fit(a),
        Command::Boundary(a) => boundary(a),
        Command::Verify(a) => verify(a),
    }
}

fn load(path: Option<&Path>) -> Result<RunConfig> {
    path.map(RunConfig::from_path).transpose().map(Option::unwrap_or_default)
}

#[derive(Serialize)]
struct CoeffRow {
    tuple: Vec<Vec<u32>>,
    j: usize,
    dimension: usize,
    order: u32,
    coefficient: RationalRepr,
    normalization_power: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    flag: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<RationalRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check_agrees: Option<bool>,
}

#[derive(Serialize)]
struct CoeffTable {
    budget: u32,
    rows: Vec<CoeffRow>,
}

fn tuple_rows(t: &IndexTuple) -> Vec<Vec<u32>> {
    t.entries().iter().map(|e| e.exponents().to_vec()).collect()
}

pub fn coeff(args: CoeffArgs) -> Result<i32> {
    let mut cfg = load(args.common.config.as_deref())?;
    let mut c = cfg.coeff.take().unwrap_or_default();
    for s in &args.tuples {
        c.tuples.push(tuple_rows(&s.parse::<IndexTuple>()?));
    }
    if let (Some(j), Some(dimension), Some(order)) = (args.sweep, args.dimension, args.order) {
        c.sweep = Some(Sweep { j, dimension, order });
    }
    if let Some(b) = args.budget {
        c.budget = b;
    }
    c.cross_check |= args.cross_check;
    let mut tuples = Vec::new();
    for rows in &c.tuples {
        let rows: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        tuples.push(IndexTuple::from_exponents(&rows)?);
    }
    if let Some(s) = &c.sweep {
        if s.j == 0 || s.dimension == 0 {
            return Err(CliError::Config("sweep: j and dimension must be positive".into()));
        }
        tuples.extend(enumerate_index_tuples(s.j, s.dimension, s.order));
    }
    if tuples.is_empty() {
        return Err(CliError::Config("no tuples given: use --tuple, --sweep or the `coeff` section".into()));
    }
    cfg.coeff = Some(c.clone());
    let meta = Meta::new(cfg.digest());

    let engine = CoefficientEngine::new(c.budget);
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for t in &tuples {
        let value = engine.coefficient(t)?;
        let (cross_check, cross_check_agrees) = if c.cross_check && t.len() == 2 {
            let e = t.entries();
            let via = script_i(&e[0], &e[1])?.value / Rational::from_integer(t.factorial().into());
            let agrees = via == value.value;
            disagreements += usize::from(!agrees);
            (Some(RationalRepr::from(&via)), Some(agrees))
        } else {
            (None, None)
        };
        rows.push(CoeffRow {
            tuple: tuple_rows(t),
            j: t.len(),
            dimension: t.dim(),
            order: t.order(),
            coefficient: RationalRepr::from(&value.value),
            normalization_power: value.power,
            flag: parity_vanishes(t).then_some("parity"),
            cross_check,
            cross_check_agrees,
        });
    }
    let text = match args.format {
        Format::Json => output::json(&meta, &CoeffTable { budget: c.budget, rows })?,
        Format::Csv => {
            let mut csv = Csv::new(&meta, &["tuple", "j", "dimension", "order", "num", "den", "power", "flag", "cross_check"]);
            for (t, r) in tuples.iter().zip(&rows) {
                let cross = r.cross_check.as_ref().map(|q| format!("{}/{}", q.num, q.den)).unwrap_or_default();
                csv.row(&[
                    format!("\"{t}\""),
                    r.j.to_string(),
                    r.dimension.to_string(),
                    r.order.to_string(),
                    r.coefficient.num.clone(),
                    r.coefficient.den.clone(),
                    r.normalization_power.to_string(),
                    r.flag.unwrap_or_default().to_string(),
                    cross,
                ]);
            }
            csv.finish()
        }
    };
    output::emit(&text, args.common.output.as_deref())?;
    Ok(if disagreements == 0 { 0 } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct InvariantEntry {
    order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_reason: Option<&'static str>,
    canonical_text: String,
    raw: ExpressionExport,
    canonical: ExpressionExport,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

#[derive(Serialize)]
struct InvariantsDoc {
    dimension: usize,
    budget: u32,
    invariants: Vec<InvariantEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h2_diagnostic: Option<H2Diagnostic<f64>>,
}

pub fn invariants(args: InvariantsArgs) -> Result<i32> {
    let mut cfg = load(args.common.config.as_deref())?;
    let from_file = cfg.invariants.take();
    let pick = |flag: Option<u32>, file: Option<u32>, name: &str| {
        flag.or(file).ok_or_else(|| CliError::Config(format!("missing `{name}`")))
    };
    let inv = InvariantsConfig {
        min_order: pick(args.min_order, from_file.as_ref().map(|c| c.min_order), "min_order")?,
        max_order: pick(args.max_order, from_file.as_ref().map(|c| c.max_order), "max_order")?,
        dimension: args
            .dimension
            .or(from_file.as_ref().map(|c| c.dimension))
            .ok_or_else(|| CliError::Config("missing `dimension`".into()))?,
        budget: args.budget.or(from_file.as_ref().map(|c| c.budget)).unwrap_or(heatrace_core::bridge::DEFAULT_BUDGET),
    };
    if inv.min_order < 2 || inv.max_order < inv.min_order {
        return Err(CliError::Config(format!("invalid order range {}..={}", inv.min_order, inv.max_order)));
    }
    if inv.dimension == 0 {
        return Err(CliError::Config("dimension must be positive".into()));
    }
    let sample = match &cfg.potential {
        Some(spec) => {
            let domain = cfg.require_domain()?;
            if domain.dim() != inv.dimension {
                return Err(CliError::Config(format!(
                    "domain dimension {} differs from invariant dimension {}",
                    domain.dim(),
                    inv.dimension
                )));
            }
            Some(spec.sample(&domain.grid::<f64>()?, domain.margin)?)
        }
        None => None,
    };
    cfg.invariants = Some(inv.clone());
    let meta = Meta::new(cfg.digest());

    let engine = CoefficientEngine::new(inv.budget);
    let mut entries = Vec::new();
    let mut h2 = None;
    for order in inv.min_order..=inv.max_order {
        let raw = assemble_invariant_with(&engine, order, inv.dimension)?;
        let canonical = ibp_canonicalize(&raw);
        let value = sample.as_ref().map(|v| evaluate_invariant(&canonical, v)).transpose()?;
        if order == 8 {
            if let Some(v) = &sample {
                h2 = Some(h2_diagnostic_with(&canonical, v)?);
            }
        }
        entries.push(InvariantEntry {
            order,
            zero_reason: (order % 2 == 1).then_some("odd order"),
            canonical_text: canonical.to_string(),
            raw: ExpressionExport::from(&raw),
            canonical: ExpressionExport::from(&canonical),
            value,
        });
    }
    let doc = InvariantsDoc { dimension: inv.dimension, budget: inv.budget, invariants: entries, h2_diagnostic: h2 };
    output::emit(&output::json(&meta, &doc)?, args.common.output.as_deref())?;
    Ok(0)
}

/// Samples the potential and discretizes the configured operator.
fn build_model(cfg: &RunConfig, vectors: Eigenvectors) -> Result<(SpectralModel, PotentialSample)> {
    let domain = cfg.require_domain()?;
    let a = cfg.coefficient_field(domain.dim())?;
    let v = cfg.require_potential()?.sample(&domain.grid::<f64>()?, domain.margin)?;
    Ok((discretize_with(domain, &a, &v, vectors)?, v))
}

pub fn trace(args: ConfigArgs) -> Result<i32> {
    let cfg = RunConfig::from_path(&args.config)?;
    let times = cfg.require_times()?;
    if let Some(d) = &cfg.duhamel {
        if !(1..=3).contains(&d.j_max) {
            return Err(CliError::Config(format!("duhamel.j_max must be 1, 2 or 3, got {}", d.j_max)));
        }
    }
    let vectors = if cfg.duhamel.is_some() { Eigenvectors::Retain } else { Eigenvectors::Discard };
    let (model, _) = build_model(&cfg, vectors)?;
    let meta = Meta::new(cfg.digest());
    let series = trace_diff(&model, &times)?;

    let j_max = cfg.duhamel.as_ref().map_or(0, |d| d.j_max);
    let mut header = vec!["t".to_string(), "z".to_string()];
    header.extend((1..=j_max).map(|j| format!("a{j}")));
    if j_max > 0 {
        header.push("remainder_bound".into());
        if j_max == 3 {
            header.push("a3_truncation_bound".into());
        }
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&meta, &header);
    for &(t, z) in series.samples() {
        let mut row = vec![float(t), float(z)];
        if let Some(d) = &cfg.duhamel {
            let terms = duhamel_terms(&model, t, d.j_max, &d.options())?;
            row.extend(terms.terms.iter().map(|&a| float(a)));
            row.push(float(terms.tail_bound()));
            if let Some(tr) = &terms.truncation {
                row.push(float(tr.bound));
            }
        }
        csv.row(&row);
    }
    output::emit(&csv.finish(), args.output.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct FitDoc {
    t_min: f64,
    t_max: f64,
    #[serde(flatten)]
    report: FitReport,
}

pub fn fit(args: ConfigArgs) -> Result<i32> {
    let cfg = RunConfig::from_path(&args.config)?;
    let times = cfg.require_times()?;
    let fc = cfg.fit.as_ref().ok_or_else(|| CliError::Config("missing section `fit`".into()))?;
    let (model, _) = build_model(&cfg, Eigenvectors::Discard)?;
    let meta = Meta::new(cfg.digest());
    let series = trace_diff(&model, &times)?;
    let report = fit_expansion(&series, model.grid().dim(), &fc.powers, &fc.options())?;
    let doc = FitDoc { t_min: times[0], t_max: times[times.len() - 1], report };
    output::emit(&output::json(&meta, &doc)?, args.output.as_deref())?;
    Ok(0)
}

pub fn boundary(args: BoundaryArgs) -> Result<i32> {
    let cfg = RunConfig::from_path(&args.run.config)?;
    let times = cfg.require_times()?;
    let domain = cfg.require_domain()?;
    let partner = domain.periodic_partner()?;
    let a = cfg.coefficient_field(domain.dim())?;
    let spec = cfg.require_potential()?;
    let options = cfg.boundary.clone().unwrap_or_default();
    let vd = spec.sample(&domain.grid::<f64>()?, domain.margin)?;
    let vp = spec.sample(&partner.grid::<f64>()?, domain.margin)?;
    let md = discretize_with(domain, &a, &vd, Eigenvectors::Discard)?;
    let mp = discretize_with(&partner, &a, &vp, Eigenvectors::Discard)?;
    let meta = Meta::new(cfg.digest());
    let gap: BoundaryGap = boundary_gap(&md, &mp, &times, &options)?;
    let text = match args.format {
        Format::Json => output::json(&meta, &gap)?,
        Format::Csv => {
            let mut csv = Csv::new(&meta, &["t", "z_dirichlet", "z_periodic", "gap", "resolved"]);
            csv.comment(format!("monotone={}", gap.monotone));
            if let Some(f) = &gap.fit {
                csv.comment(format!(
                    "fit slope={} intercept={} rate={} points={}",
                    float(f.slope),
                    float(f.intercept),
                    float(f.rate),
                    f.points
                ));
            }
            for i in 0..gap.t.len() {
                csv.row(&[
                    float(gap.t[i]),
                    float(gap.z_dirichlet[i]),
                    float(gap.z_periodic[i]),
                    float(gap.gap[i]),
                    gap.resolved[i].to_string(),
                ]);
            }
            csv.finish()
        }
    };
    output::emit(&text, args.run.output.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyDoc {
    table_sha256: String,
    #[serde(flatten)]
    report: verify::VerifyReport,
}

pub fn verify(args: VerifyArgs) -> Result<i32> {
    let mut cfg = load(args.common.config.as_deref())?;
    let mut v = cfg.verify.take().unwrap_or_default();
    v.numeric |= args.numeric;
    let table = match &args.table {
        Some(p) => CoefficientTable::from_path(p)?,
        None => CoefficientTable::reference(),
    };
    cfg.verify = Some(v.clone());
    let meta = Meta::new(cfg.digest());
    let table_json = serde_json::to_vec(&table).expect("table serializes");
    let table_sha256 = Sha256::digest(&table_json).iter().map(|b| format!("{b:02x}")).collect();

    let report = verify::run(&table, v.numeric, &v.tolerances);
    for c in report.failures() {
        eprintln!("FAIL {}/{}: {}", c.suite, c.name, c.detail);
    }
    let status = report.status;
    output::emit(&output::json(&meta, &VerifyDoc { table_sha256, report })?, args.common.output.as_deref())?;
    Ok(if status == Status::Pass { 0 } else { EXIT_CHECK_FAILED })
}
