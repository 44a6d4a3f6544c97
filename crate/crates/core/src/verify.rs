//! Randomized identity suites.
//!
//! Each check draws seeded random inputs and compares two independent
//! computations of the same quantity. Exact mode demands equality; float
//! mode compares at [`FLOAT_TOL`].

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{printed_linkage, BoundInputs, TheoremId};
use crate::classes::{functional, invert_schlicht, ClassKind, ClassSpec, SchlichtCoeffs};
use crate::harness::end_to_end;
use crate::scalar::{ratio, Exact, Float, Mode, Scalar, Tolerance};
use crate::series::TruncatedSeries;
use crate::solver::solve_forward;

pub const FLOAT_TOL: Tolerance = Tolerance { rel: 1e-9, abs: 1e-9 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Expansion and inversion identities of single functions.
    Identities,
    /// The coefficient equations of all six pairings, and end-to-end runs.
    Derivation,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identities" => Ok(Suite::Identities),
            "derivation" => Ok(Suite::Derivation),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}` (expected identities, derivation or all)")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Derivation => "derivation",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub samples: usize,
    pub passed: bool,
    /// Description of the first failing input.
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub mode: Mode,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<(&'static str, &str)> {
        self.checks.iter().find_map(|c| c.first_failure.as_deref().map(|w| (c.name, w)))
    }
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    match S::MODE {
        Mode::Exact => a == b,
        Mode::Float => a.approx_eq_with(b, FLOAT_TOL),
    }
}

/// Seeded generator of random rationals on a `1/1000` lattice.
pub struct Draw {
    rng: ChaCha8Rng,
}

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self, lo: i64, hi: i64) -> BigRational {
        ratio(self.rng.gen_range(lo * 1000..=hi * 1000), 1000)
    }

    /// Rational in `(0, hi]`.
    pub fn positive(&mut self, hi: i64) -> BigRational {
        ratio(self.rng.gen_range(1..=hi * 1000), 1000)
    }

    pub fn complex<S: Scalar>(&mut self, bound: i64) -> S {
        let re = self.rational(-bound, bound);
        let im = self.rational(-bound, bound);
        S::from_parts(&re, &im)
    }

    /// Class parameter on the grids `{0, 0.25, …, 2}` for `P, M` and
    /// `{0, 0.1, …, 1}` for `L`.
    pub fn class_param(&mut self, kind: ClassKind) -> BigRational {
        match kind {
            ClassKind::L => ratio(self.rng.gen_range(0..=10), 10),
            _ => ratio(self.rng.gen_range(0..=8), 4),
        }
    }

    /// Parameter in `[0, 1]` on a `1/20` lattice, valid for every class.
    pub fn unit_param(&mut self) -> BigRational {
        ratio(self.rng.gen_range(0..=20), 20)
    }

    /// Random bound inputs: `α, β ∈ [0, 1]`, `B₁, D₁ ∈ (0, 3]`,
    /// `B₂, D₂ ∈ [−3, 3]`.
    pub fn inputs(&mut self) -> BoundInputs {
        BoundInputs {
            alpha: self.unit_param(),
            beta: self.unit_param(),
            b1: self.positive(3),
            b2: self.rational(-3, 3),
            d1: self.positive(3),
            d2: self.rational(-3, 3),
        }
    }

    pub fn seed(&mut self) -> u64 {
        self.rng.gen()
    }
}

struct Check {
    name: &'static str,
    samples: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, samples: 0, failure: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name, samples: self.samples, passed: self.failure.is_none(), first_failure: self.failure }
    }
}

const KINDS: [ClassKind; 3] = [ClassKind::P, ClassKind::M, ClassKind::L];

/// Engine functional coefficients against the closed-form triples, on
/// `f` and on `g = f⁻¹`.
fn check_expansion<S: Scalar + fmt::Display>(draw: &mut Draw, n: usize) -> Vec<CheckOutcome> {
    let mut f_side = Check::new("expansion_f");
    let mut g_side = Check::new("expansion_g");
    for i in 0..n {
        let kind = KINDS[i % 3];
        let spec = ClassSpec::new(kind, draw.class_param(kind)).expect("grid parameter in range");
        let a2: S = draw.complex(2);
        let a3: S = draw.complex(2);
        let t = spec.triple::<S>();
        let f = SchlichtCoeffs::new(vec![a2.clone(), a3.clone()]).to_series(3);
        let witness = |side: &str, e: &TruncatedSeries<S>| format!("{spec} {side} a2={a2} a3={a3}: engine {e}");
        match functional(&spec, &f) {
            Ok(e) => {
                let (e1, e2) = t.expansion_f(&a2, &a3);
                f_side.record(same(&e.coeff(1), &e1) && same(&e.coeff(2), &e2), || witness("f", &e));
            }
            Err(err) => f_side.record(false, || format!("{spec} a2={a2} a3={a3}: {err}")),
        }
        match f.revert().and_then(|g| functional(&spec, &g)) {
            Ok(e) => {
                let (e1, e2) = t.expansion_g(&a2, &a3);
                g_side.record(same(&e.coeff(1), &e1) && same(&e.coeff(2), &e2), || witness("g", &e));
            }
            Err(err) => g_side.record(false, || format!("{spec} a2={a2} a3={a3}: {err}")),
        }
    }
    vec![f_side.finish(), g_side.finish()]
}

/// Reversion of random order-8 schlicht series.
fn check_inversion<S: Scalar + fmt::Display>(draw: &mut Draw, n: usize) -> Vec<CheckOutcome> {
    let order = 8;
    let mut coeffs = Check::new("inversion_coefficients");
    let mut round = Check::new("inversion_round_trip");
    let id = TruncatedSeries::<S>::variable(order);
    for _ in 0..n {
        let a: Vec<S> = (2..=order).map(|_| draw.complex(2)).collect();
        let f = SchlichtCoeffs::new(a.clone()).to_series(order);
        match f.revert() {
            Ok(g) => {
                let (g2, g3) = invert_schlicht(&a[0], &a[1]);
                coeffs.record(same(&g.coeff(2), &g2) && same(&g.coeff(3), &g3), || format!("f = {f}: g = {g}"));
                let ok = match g.compose(&f) {
                    Ok(h) => match S::MODE {
                        Mode::Exact => h == id,
                        Mode::Float => h.agrees_through(&id, order, FLOAT_TOL),
                    },
                    Err(_) => false,
                };
                round.record(ok, || format!("f = {f}: g∘f ≠ id"));
            }
            Err(err) => {
                coeffs.record(false, || format!("f = {f}: {err}"));
                round.record(false, || format!("f = {f}: {err}"));
            }
        }
    }
    vec![coeffs.finish(), round.finish()]
}

/// The four coefficient equations for all six pairings, on parameters
/// completed to satisfy them.
fn check_derivation<S: Scalar + fmt::Display>(draw: &mut Draw, n: usize) -> Vec<CheckOutcome> {
    let mut linkage = Check::new("linkage");
    let mut f_eq = Check::new("f_equation");
    let mut g_eq = Check::new("g_residual");
    let mut forward = Check::new("forward_a2");
    for i in 0..n {
        let id = TheoremId::ALL[i % 6];
        let inputs = draw.inputs();
        let pair = id.pair(&inputs).expect("drawn inputs are valid");
        let k = pair.constants::<S>();
        let c1: S = draw.complex(2);
        let c2: S = draw.complex(2);
        let at = || format!("{id} {:?} c1={c1} c2={c2}", inputs.witness());
        let kappa = S::from_ratio(&printed_linkage(id, &inputs));
        linkage.record(same(&k.linked_b1(&c1), &(kappa * &c1)), at);

        let sp = k.consistent_params(c1.clone(), c2.clone());
        let res = k.eliminate(&sp);
        if res.degenerate {
            continue;
        }
        let ok = |r: Result<S, _>| r.map(|v| same(&v, &S::zero())).unwrap_or(false);
        f_eq.record(ok(k.f_residual(&sp, &res)), at);
        g_eq.record(ok(k.g_residual(&sp, &res)), at);
        let p = TruncatedSeries::new(vec![S::one(), c1.clone(), c2.clone()], 2);
        let a2_ok = match (solve_forward(&pair.class_f, &pair.phi, &p), &res.a2_squared) {
            (Ok((a2, _)), Some(sq)) => same(&a2.square(), sq),
            _ => false,
        };
        forward.record(a2_ok, at);
    }
    vec![linkage.finish(), f_eq.finish(), g_eq.finish(), forward.finish()]
}

/// End-to-end runs through the series engine on random pairs.
fn check_end_to_end<S: Scalar>(draw: &mut Draw, n: usize) -> Vec<CheckOutcome> {
    let mut check = Check::new("end_to_end");
    for i in 0..n {
        let id = TheoremId::ALL[i % 6];
        let inputs = draw.inputs();
        let pair = id.pair(&inputs).expect("drawn inputs are valid");
        let seed = draw.seed();
        let outcome = end_to_end::<S>(&pair, seed);
        check.record(outcome.is_ok(), || {
            format!("{id} {:?} seed={seed}: {}", inputs.witness(), outcome.err().map(|e| e.to_string()).unwrap_or_default())
        });
    }
    vec![check.finish()]
}

fn run<S: Scalar + fmt::Display>(suite: Suite, seed: u64, samples: usize) -> Vec<CheckOutcome> {
    let mut draw = Draw::new(seed);
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(check_expansion::<S>(&mut draw, samples));
        out.extend(check_inversion::<S>(&mut draw, samples));
    }
    if matches!(suite, Suite::Derivation | Suite::All) {
        out.extend(check_derivation::<S>(&mut draw, samples));
        out.extend(check_end_to_end::<S>(&mut draw, samples));
    }
    out
}

/// Runs `suite` with `samples` draws per check.
pub fn run_suite(suite: Suite, mode: Mode, seed: u64, samples: usize) -> SuiteReport {
    let checks = match mode {
        Mode::Exact => run::<Exact>(suite, seed, samples),
        Mode::Float => run::<Float>(suite, seed, samples),
    };
    SuiteReport { suite, mode, seed, checks }
}
