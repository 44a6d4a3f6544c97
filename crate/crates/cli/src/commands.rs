use std::fmt::Write as _;

use bicoef::bounds::{
    audit, audit_discrepancies, reduction_table, report, AuditGrid, BoundReport, Discrepancy, ReductionTable, RowKind,
    Witness,
};
use bicoef::classes::{functional, ClassError, SchlichtCoeffs};
use bicoef::harness::{sweep_a2, sweep_a3, Argmax, HarnessError, Point, Quantity, SweepConfig, SweepResult};
use bicoef::scalar::{parse_rational, Exact, Float, Mode, Scalar, Tolerance};
use bicoef::verify::{run_suite, SuiteReport};
use bicoef::{BoundInputs, ClassKind, ClassSpec, MindaTarget, TheoremId};
use num_rational::BigRational;
use serde::Serialize;

use crate::config::Config;
use crate::output::{num, to_csv, to_json, Format};
use crate::{parse_quantities, Cli, Command, PairArgs, TargetArgs, EXIT_DEGENERATE, EXIT_VERIFY};

pub struct Output {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: None, code: 0 }
    }
}

fn class_err(e: ClassError) -> String {
    e.to_string()
}

fn target(preset: &str, explicit: &Option<Vec<BigRational>>, order: usize) -> Result<MindaTarget, String> {
    match explicit {
        Some(coeffs) => MindaTarget::new(coeffs.clone()),
        None => MindaTarget::preset(preset, order),
    }
    .map_err(class_err)
}

fn targets(t: &TargetArgs, order: usize) -> Result<(MindaTarget, MindaTarget), String> {
    Ok((target(&t.phi, &t.phi_coeffs, order)?, target(&t.psi, &t.psi_coeffs, order)?))
}

fn inputs(pair: &PairArgs, t: &TargetArgs, order: usize) -> Result<BoundInputs, String> {
    let (phi, psi) = targets(t, order)?;
    let inputs = BoundInputs::new(pair.alpha.clone(), pair.beta.clone(), &phi, &psi);
    pair.pair.pair(&inputs).map_err(class_err)?;
    Ok(inputs)
}

pub fn run(cli: &Cli) -> Result<Output, String> {
    let cfg = Config::resolve(cli.config.as_deref())?;
    match &cli.command {
        Command::Bound { pair, targets } => cmd_bound(cli.format, pair, targets, &cfg),
        Command::Audit { theorem, grid, targets } => cmd_audit(cli.format, *theorem, grid, targets, &cfg),
        Command::Sweep { pair, targets, what, radial_steps, phase_steps, seed, samples } => {
            let sweep = SweepConfig {
                radial_steps: radial_steps.unwrap_or(cfg.radial_steps),
                phase_steps: phase_steps.unwrap_or(cfg.phase_steps),
                seed: seed.unwrap_or(cfg.seed),
                samples: samples.unwrap_or(cfg.samples),
                max_modulus: 2.0,
            };
            cmd_sweep(cli.format, pair, targets, what, &sweep, &cfg)
        }
        Command::Expand { class, alpha, a2, a3, a2_im, a3_im, mode } => {
            let spec = ClassSpec::new(*class, alpha.clone()).map_err(class_err)?;
            let args = ExpandArgs { spec, a2: (a2.clone(), a2_im.clone()), a3: (a3.clone(), a3_im.clone()) };
            cmd_expand(cli.format, &args, *mode, &cfg)
        }
        Command::Verify { suite, mode, seed, samples } => {
            let report = run_suite(*suite, *mode, seed.unwrap_or(cfg.seed), *samples);
            Ok(verify_output(cli.format, &report))
        }
        Command::Table => Ok(Output::ok(table_output(cli.format, &reduction_table()))),
    }
}

#[derive(Serialize)]
struct Degenerate {
    a2_printed: bool,
    a2_generic: bool,
    a3_printed: bool,
    a3_generic: bool,
}

#[derive(Serialize)]
struct BoundOut {
    theorem: TheoremId,
    alpha: f64,
    beta: f64,
    phi: [f64; 2],
    psi: [f64; 2],
    sigma_printed: f64,
    sigma_tilde: f64,
    sigma_derived: f64,
    a2_printed: Option<f64>,
    a2_generic: Option<f64>,
    a3_printed: Option<f64>,
    a3_generic: Option<f64>,
    a3_rhs_printed: f64,
    a3_rhs_derived: f64,
    degenerate: Degenerate,
    discrepancies: Vec<Discrepancy>,
}

impl BoundOut {
    fn new(r: BoundReport) -> Self {
        let w = r.witness;
        BoundOut {
            theorem: r.theorem,
            alpha: w.alpha,
            beta: w.beta,
            phi: [w.b1, w.b2],
            psi: [w.d1, w.d2],
            sigma_printed: r.sigma_printed,
            sigma_tilde: r.sigma_tilde,
            sigma_derived: r.sigma_derived,
            degenerate: Degenerate {
                a2_printed: r.a2_printed.is_none(),
                a2_generic: r.a2_generic.is_none(),
                a3_printed: r.a3_printed.is_none(),
                a3_generic: r.a3_generic.is_none(),
            },
            a2_printed: r.a2_printed,
            a2_generic: r.a2_generic,
            a3_printed: r.a3_printed,
            a3_generic: r.a3_generic,
            a3_rhs_printed: r.a3_rhs_printed,
            a3_rhs_derived: r.a3_rhs_derived,
            discrepancies: r.discrepancies,
        }
    }

    fn any_degenerate(&self) -> bool {
        let d = &self.degenerate;
        d.a2_printed || d.a2_generic || d.a3_printed || d.a3_generic
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or("undefined".to_string(), |v| format!("{v:.9}"))
}

fn field_name(d: &Discrepancy) -> String {
    serde_json::to_value(d.field).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn cmd_bound(format: Format, pair: &PairArgs, t: &TargetArgs, cfg: &Config) -> Result<Output, String> {
    let inp = inputs(pair, t, cfg.order)?;
    let out = BoundOut::new(report(pair.pair, &inp).map_err(class_err)?);
    let stdout = match format {
        Format::Json => to_json(&out),
        Format::Csv => to_csv(
            &[
                "theorem", "alpha", "beta", "B1", "B2", "D1", "D2", "sigma_printed", "sigma_tilde", "a2_printed",
                "a2_generic", "a3_printed", "a3_generic", "discrepancies",
            ],
            &[vec![
                out.theorem.to_string(),
                num(Some(out.alpha)),
                num(Some(out.beta)),
                num(Some(out.phi[0])),
                num(Some(out.phi[1])),
                num(Some(out.psi[0])),
                num(Some(out.psi[1])),
                num(Some(out.sigma_printed)),
                num(Some(out.sigma_tilde)),
                num(out.a2_printed),
                num(out.a2_generic),
                num(out.a3_printed),
                num(out.a3_generic),
                out.discrepancies.iter().map(field_name).collect::<Vec<_>>().join(";"),
            ]],
        ),
        Format::Pretty => {
            let mut s = String::new();
            let _ = writeln!(s, "{} at alpha={} beta={}", out.theorem, out.alpha, out.beta);
            let _ = writeln!(s, "  phi: B1={} B2={}   psi: D1={} D2={}", out.phi[0], out.phi[1], out.psi[0], out.psi[1]);
            let _ = writeln!(
                s,
                "  sigma  printed {}  derived {}  (sigma~ {})",
                out.sigma_printed, out.sigma_derived, out.sigma_tilde
            );
            let _ = writeln!(s, "  |a2| <= printed {}  generic {}", opt(out.a2_printed), opt(out.a2_generic));
            let _ = writeln!(s, "  |a3| <= printed {}  generic {}", opt(out.a3_printed), opt(out.a3_generic));
            for d in &out.discrepancies {
                let _ = writeln!(s, "  discrepancy in {}: printed {} vs generic {}", field_name(d), opt(d.printed), opt(d.generic));
            }
            s
        }
    };
    let degenerate = out.any_degenerate();
    Ok(Output {
        stdout,
        stderr: degenerate.then(|| "degenerate: a bound denominator vanishes".to_string()),
        code: if degenerate { EXIT_DEGENERATE } else { 0 },
    })
}

fn parse_grid(grid: &str) -> Result<Vec<BigRational>, String> {
    let parts: Vec<&str> = grid.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(format!("--grid expects start:end:step, got `{grid}`"));
    };
    let p = |s: &str| parse_rational(s).map_err(|e| format!("--grid: {e}"));
    let (start, end, step) = (p(start)?, p(end)?, p(step)?);
    if start > end {
        return Err(format!("--grid: start {start} exceeds end {end}"));
    }
    if step <= BigRational::from_integer(0.into()) {
        return Err("--grid: step must be positive".to_string());
    }
    Ok(AuditGrid::range(&start, &end, &step))
}

#[derive(Serialize)]
struct AuditOut {
    theorem: TheoremId,
    points: usize,
    discrepancies: Vec<Discrepancy>,
}

fn witness_cells(w: &Witness) -> Vec<String> {
    [w.alpha, w.beta, w.b1, w.b2, w.d1, w.d2].iter().map(|&x| num(Some(x))).collect()
}

fn cmd_audit(format: Format, id: TheoremId, grid: &str, t: &TargetArgs, cfg: &Config) -> Result<Output, String> {
    let values = parse_grid(grid)?;
    let (phi, psi) = targets(t, cfg.order)?;
    let grid = AuditGrid::square(values, phi, psi);
    let reports = audit(id, &grid).map_err(class_err)?;
    let out = AuditOut { theorem: id, points: reports.len(), discrepancies: audit_discrepancies(&reports) };
    let stdout = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = out
                .discrepancies
                .iter()
                .map(|d| {
                    let mut row = vec![id.to_string(), field_name(d)];
                    row.extend(witness_cells(&d.witness));
                    row.push(num(d.printed));
                    row.push(num(d.generic));
                    row
                })
                .collect();
            to_csv(&["theorem", "field", "alpha", "beta", "B1", "B2", "D1", "D2", "printed", "generic"], &rows)
        }
        Format::Pretty => {
            let mut s = format!("{id}: {} points, {} discrepancies\n", out.points, out.discrepancies.len());
            for d in &out.discrepancies {
                let w = &d.witness;
                let _ = writeln!(
                    s,
                    "  {:<18} alpha={} beta={}  printed {}  generic {}",
                    field_name(d),
                    w.alpha,
                    w.beta,
                    opt(d.printed),
                    opt(d.generic)
                );
            }
            s
        }
    };
    Ok(Output::ok(stdout))
}

#[derive(Serialize)]
struct SweepRow {
    theorem: TheoremId,
    alpha: f64,
    beta: f64,
    #[serde(rename = "B1")]
    b1: f64,
    #[serde(rename = "B2")]
    b2: f64,
    #[serde(rename = "D1")]
    d1: f64,
    #[serde(rename = "D2")]
    d2: f64,
    quantity: Quantity,
    max_value: f64,
    bound: f64,
    gap: f64,
    attained: bool,
    argmax: Argmax,
}

fn cmd_sweep(
    format: Format,
    pair: &PairArgs,
    t: &TargetArgs,
    what: &str,
    sweep: &SweepConfig,
    cfg: &Config,
) -> Result<Output, String> {
    let quantities = parse_quantities(what)?;
    let inp = inputs(pair, t, cfg.order)?;
    let spec = pair.pair.pair(&inp).map_err(class_err)?;
    let w = inp.witness();
    let mut rows = Vec::new();
    for q in quantities {
        let res: Result<SweepResult, HarnessError> = match q {
            Quantity::A2 => sweep_a2(&spec, sweep),
            Quantity::A3 => sweep_a3(&spec, sweep),
        };
        let r = match res {
            Ok(r) => r,
            Err(e @ HarnessError::Degenerate(_)) => {
                return Ok(Output { stdout: String::new(), stderr: Some(format!("degenerate: {e}")), code: EXIT_DEGENERATE })
            }
            Err(HarnessError::Config(msg)) => return Err(msg),
            Err(e) => return Err(e.to_string()),
        };
        rows.push(SweepRow {
            theorem: pair.pair,
            alpha: w.alpha,
            beta: w.beta,
            b1: w.b1,
            b2: w.b2,
            d1: w.d1,
            d2: w.d2,
            quantity: r.quantity,
            max_value: r.max_value,
            bound: r.bound,
            gap: r.gap,
            attained: r.attained,
            argmax: r.argmax,
        });
    }
    let stdout = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.theorem.to_string()];
                    row.extend(witness_cells(&w));
                    row.push(r.quantity.to_string());
                    row.extend([num(Some(r.max_value)), num(Some(r.bound)), num(Some(r.gap))]);
                    row.push(r.attained.to_string());
                    row
                })
                .collect();
            to_csv(
                &["theorem", "alpha", "beta", "B1", "B2", "D1", "D2", "quantity", "max_value", "bound", "gap", "attained"],
                &cells,
            )
        }
        Format::Pretty => rows
            .iter()
            .map(|r| {
                format!(
                    "{} |{}|: max {:.9} of bound {:.9} (gap {:.3e}){}\n",
                    r.theorem,
                    r.quantity,
                    r.max_value,
                    r.bound,
                    r.gap,
                    if r.attained { ", attained" } else { "" }
                )
            })
            .collect(),
    };
    Ok(Output::ok(stdout))
}

pub struct ExpandArgs {
    pub spec: ClassSpec,
    pub a2: (BigRational, BigRational),
    pub a3: (BigRational, BigRational),
}

#[derive(Serialize)]
struct Pair {
    e1: Point,
    e2: Point,
}

#[derive(Serialize)]
struct ExpandOut {
    class: ClassKind,
    alpha: f64,
    mode: Mode,
    a2: Point,
    a3: Point,
    triple: [f64; 3],
    engine: Pair,
    closed_form: Pair,
    inverse_engine: Pair,
    inverse_closed_form: Pair,
    agree: bool,
}

fn expand_in<S: Scalar>(args: &ExpandArgs, order: usize, tol: f64) -> Result<ExpandOut, String> {
    let a2 = S::from_parts(&args.a2.0, &args.a2.1);
    let a3 = S::from_parts(&args.a3.0, &args.a3.1);
    let f = SchlichtCoeffs::new(vec![a2.clone(), a3.clone()]).to_series(order + 1);
    let e = functional(&args.spec, &f).map_err(|e| e.to_string())?;
    let g = f.revert().map_err(|e| e.to_string())?;
    let eg = functional(&args.spec, &g).map_err(|e| e.to_string())?;
    let t = args.spec.triple::<S>();
    let (c1, c2) = t.expansion_f(&a2, &a3);
    let (g1, g2) = t.expansion_g(&a2, &a3);
    let tol = Tolerance { rel: tol, abs: tol };
    let agree = [(e.coeff(1), &c1), (e.coeff(2), &c2), (eg.coeff(1), &g1), (eg.coeff(2), &g2)]
        .iter()
        .all(|(x, y)| match S::MODE {
            Mode::Exact => x == *y,
            Mode::Float => x.approx_eq_with(y, tol),
        });
    let pt = |x: &S| Point::from(x.to_complex64());
    Ok(ExpandOut {
        class: args.spec.kind(),
        alpha: args.spec.param_f64(),
        mode: S::MODE,
        a2: pt(&a2),
        a3: pt(&a3),
        triple: [t.p.re(), t.q.re(), t.r.re()],
        engine: Pair { e1: pt(&e.coeff(1)), e2: pt(&e.coeff(2)) },
        closed_form: Pair { e1: pt(&c1), e2: pt(&c2) },
        inverse_engine: Pair { e1: pt(&eg.coeff(1)), e2: pt(&eg.coeff(2)) },
        inverse_closed_form: Pair { e1: pt(&g1), e2: pt(&g2) },
        agree,
    })
}

fn show(p: &Point) -> String {
    if p.im == 0.0 {
        format!("{}", p.re)
    } else {
        format!("{}{:+}i", p.re, p.im)
    }
}

fn cmd_expand(format: Format, args: &ExpandArgs, mode: Mode, cfg: &Config) -> Result<Output, String> {
    let out = match mode {
        Mode::Exact => expand_in::<Exact>(args, cfg.order, cfg.tolerance)?,
        Mode::Float => expand_in::<Float>(args, cfg.order, cfg.tolerance)?,
    };
    let stdout = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let row = |side: &str, source: &str, p: &Pair| {
                vec![side.into(), source.into(), num(Some(p.e1.re)), num(Some(p.e1.im)), num(Some(p.e2.re)), num(Some(p.e2.im))]
            };
            to_csv(
                &["side", "source", "e1_re", "e1_im", "e2_re", "e2_im"],
                &[
                    row("f", "engine", &out.engine),
                    row("f", "closed_form", &out.closed_form),
                    row("g", "engine", &out.inverse_engine),
                    row("g", "closed_form", &out.inverse_closed_form),
                ],
            )
        }
        Format::Pretty => {
            let mut s = format!(
                "{}({}) with a2={} a3={}  (p,q,r) = ({}, {}, {})\n",
                out.class,
                out.alpha,
                show(&out.a2),
                show(&out.a3),
                out.triple[0],
                out.triple[1],
                out.triple[2]
            );
            let _ = writeln!(s, "        {:>24} {:>24}", "engine", "closed form");
            for (label, a, b) in [
                ("f e1", &out.engine.e1, &out.closed_form.e1),
                ("f e2", &out.engine.e2, &out.closed_form.e2),
                ("g e1", &out.inverse_engine.e1, &out.inverse_closed_form.e1),
                ("g e2", &out.inverse_engine.e2, &out.inverse_closed_form.e2),
            ] {
                let _ = writeln!(s, "  {label}  {:>24} {:>24}", show(a), show(b));
            }
            let _ = writeln!(s, "  agree: {}", out.agree);
            s
        }
    };
    Ok(Output::ok(stdout))
}

fn verify_output(format: Format, report: &SuiteReport) -> Output {
    let stdout = match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(
            &["check", "samples", "passed", "first_failure"],
            &report
                .checks
                .iter()
                .map(|c| {
                    vec![c.name.to_string(), c.samples.to_string(), c.passed.to_string(), c.first_failure.clone().unwrap_or_default()]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Pretty => {
            let mut s = format!("suite {} ({} mode, seed {})\n", report.suite, report.mode, report.seed);
            for c in &report.checks {
                let _ = writeln!(s, "  [{}] {} ({} samples)", if c.passed { "PASS" } else { "FAIL" }, c.name, c.samples);
            }
            s
        }
    };
    match report.first_failure() {
        None => Output::ok(stdout),
        Some((name, witness)) => {
            Output { stdout, stderr: Some(format!("first failure in {name}: {witness}")), code: EXIT_VERIFY }
        }
    }
}

fn table_output(format: Format, table: &ReductionTable) -> String {
    match format {
        Format::Json => to_json(table),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    let kind = match r.kind {
                        RowKind::Reference => "reference",
                        RowKind::Computed => "computed",
                    };
                    vec![r.label.clone(), kind.to_string(), r.text.clone(), num(Some(r.value))]
                })
                .collect();
            for n in &table.notes {
                rows.push(vec!["note".into(), "note".into(), n.clone(), String::new()]);
            }
            to_csv(&["label", "kind", "text", "value"], &rows)
        }
        Format::Pretty => {
            let mut s = String::new();
            for r in &table.rows {
                let _ = writeln!(s, "  {:<42} {:>12}  ({:?})", r.label, r.text, r.kind);
            }
            for n in &table.notes {
                let _ = writeln!(s, "note: {n}");
            }
            s
        }
    }
}
