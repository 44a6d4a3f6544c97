//! Extremal sweeps, randomized bound checks and end-to-end series runs.
//!
//! Sweeps and random checks work on the relaxed region
//! `|c₁|, |c₂|, |b₂| ≤ 2` with `c₂` and `b₂` independent, in floating mode.
//! [`end_to_end`] instead samples a genuine Carathéodory function and runs
//! the whole chain `p → f → g → (b₁, b₂)` through the series engine.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{generic_a2_bound, generic_a3_bound};
use crate::classes::{functional, sample_caratheodory, ClassError, SchlichtCoeffs, SchwarzParams};
use crate::scalar::{Float, Mode, Scalar};
use crate::series::{SeriesError, TruncatedSeries};
use crate::solver::{solve_forward, PairConstants, PairSpec, SolverError};

/// Slack allowed when comparing observed values with bounds.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("degenerate pair: the {0} bound is undefined")]
    Degenerate(Quantity),
    #[error("|{quantity}| = {value} exceeds the bound {bound} at {at:?}")]
    BoundExceeded { quantity: Quantity, value: f64, bound: f64, at: Argmax },
    #[error("{check} failed: residual {magnitude:e}")]
    Inconsistent { check: &'static str, magnitude: f64 },
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    A2,
    A3,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::A2 => "a2",
            Quantity::A3 => "a3",
        })
    }
}

impl std::str::FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a2" => Ok(Quantity::A2),
            "a3" => Ok(Quantity::A3),
            _ => Err(format!("unknown quantity `{s}` (expected a2 or a3)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub radial_steps: usize,
    pub phase_steps: usize,
    pub seed: u64,
    pub samples: usize,
    /// Largest modulus on the grid; `2` covers the whole relaxed region.
    pub max_modulus: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { radial_steps: 9, phase_steps: 16, seed: 0, samples: 10_000, max_modulus: 2.0 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.radial_steps < 2 {
            return Err(HarnessError::Config(format!("radial_steps must be at least 2, got {}", self.radial_steps)));
        }
        if self.phase_steps < 4 {
            return Err(HarnessError::Config(format!("phase_steps must be at least 4, got {}", self.phase_steps)));
        }
        if !(0.0..=2.0).contains(&self.max_modulus) {
            return Err(HarnessError::Config(format!("max_modulus must lie in [0, 2], got {}", self.max_modulus)));
        }
        Ok(())
    }

    /// Every grid value of one coefficient: `radial × phase` points, the
    /// origin repeated once per phase.
    pub fn grid(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.radial_steps * self.phase_steps);
        for i in 0..self.radial_steps {
            let modulus = self.max_modulus * i as f64 / (self.radial_steps - 1) as f64;
            for j in 0..self.phase_steps {
                out.push(Complex64::from_polar(modulus, 2.0 * PI * j as f64 / self.phase_steps as f64));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Argmax {
    pub c1: Point,
    pub c2: Point,
    pub b2: Point,
}

impl Argmax {
    fn of(sp: &SchwarzParams<Float>) -> Self {
        Argmax { c1: sp.c1.0.into(), c2: sp.c2.0.into(), b2: sp.b2.0.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub quantity: Quantity,
    pub max_value: f64,
    pub argmax: Argmax,
    pub bound: f64,
    pub gap: f64,
    pub attained: bool,
}

impl SweepResult {
    fn new(quantity: Quantity, max_value: f64, at: &SchwarzParams<Float>, bound: f64) -> Result<Self, HarnessError> {
        let gap = bound - max_value;
        if gap < -BOUND_SLACK {
            return Err(HarnessError::BoundExceeded { quantity, value: max_value, bound, at: Argmax::of(at) });
        }
        Ok(SweepResult { quantity, max_value, argmax: Argmax::of(at), bound, gap, attained: gap <= BOUND_SLACK })
    }
}

/// Keeps the larger value; on ties the earlier candidate wins, so the
/// reduction does not depend on how rayon splits the work.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn real_sign(x: &Float) -> Complex64 {
    if x.0.re < 0.0 {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn unit_phase(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / z.norm()
    }
}

fn params(c1: Complex64, c2: Complex64, b2: Complex64) -> SchwarzParams<Float> {
    SchwarzParams::new_unchecked(Float(c1), Float(c2), Float(b2))
}

fn a2_modulus(k: &PairConstants<Float>, sp: &SchwarzParams<Float>) -> Option<f64> {
    k.eliminate(sp).a2_squared.map(|v| v.abs().sqrt())
}

fn a3_modulus(k: &PairConstants<Float>, sp: &SchwarzParams<Float>) -> Option<f64> {
    k.eliminate(sp).a3.map(|v| v.abs())
}

/// Maximizes `|a₂|` over the relaxed region.
///
/// `a₂²` is affine in `(c₂, b₂)` with real coefficients and free of `c₁`,
/// so the maximum sits at the real corner matching the coefficient signs.
/// That corner is evaluated first; the `(c₂, b₂)` grid then confirms it.
pub fn sweep_a2(pair: &PairSpec, cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let bound = generic_a2_bound(pair).ok_or(HarnessError::Degenerate(Quantity::A2))?;
    let k = pair.constants::<Float>();
    let m = cfg.max_modulus;
    let half = Float::real(0.5);
    let u = half * k.g.q * k.b1;
    let v = half * k.f.q * k.d1;
    let zero = Complex64::new(0.0, 0.0);
    let corner = params(zero, real_sign(&u) * m, real_sign(&v) * m);
    let corner_value = a2_modulus(&k, &corner).ok_or(HarnessError::Degenerate(Quantity::A2))?;

    let grid = cfg.grid();
    let n = grid.len();
    let (grid_value, idx) = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let sp = params(zero, grid[i / n], grid[i % n]);
            (a2_modulus(&k, &sp).unwrap_or(0.0), i)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    if grid_value > corner_value {
        let sp = params(zero, grid[idx / n], grid[idx % n]);
        return SweepResult::new(Quantity::A2, grid_value, &sp, bound);
    }
    SweepResult::new(Quantity::A2, corner_value, &corner, bound)
}

/// `max |a₃|` over `|c₂|, |b₂| ≤ m` at fixed `c₁`, with the maximizing
/// parameters.
///
/// `σ̃·a₃ = A(c₁) + u·c₂ + v·b₂` with real `u, v`, so the maximum is
/// `(|A| + m|u| + m|v|)/|σ̃|`, reached by aligning the phases of `c₂` and
/// `b₂` with `A`.
pub fn a3_slice_max(k: &PairConstants<Float>, c1: Complex64, m: f64) -> Option<(f64, SchwarzParams<Float>)> {
    let sigma = k.sigma_tilde();
    if sigma.is_zero() {
        return None;
    }
    let free = k.eliminate(&params(c1, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    let a = free.a3? * sigma;
    let half = Float::real(0.5);
    let u = half * k.g.r * k.b1;
    let v = half * k.f.r * k.d1;
    let phase = unit_phase(a.0);
    let sp = params(c1, phase * real_sign(&u) * m, phase * real_sign(&v) * m);
    let value = (a.abs() + m * u.abs() + m * v.abs()) / sigma.abs();
    Some((value, sp))
}

/// Maximizes `|a₃|` over the relaxed region: analytically over `(c₂, b₂)`
/// for each grid value of `c₁`, then `cfg.samples` random points as a
/// safety net.
pub fn sweep_a3(pair: &PairSpec, cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let bound = generic_a3_bound(pair).ok_or(HarnessError::Degenerate(Quantity::A3))?;
    let k = pair.constants::<Float>();
    let m = cfg.max_modulus;
    let grid = cfg.grid();
    let (mut best, idx) = grid
        .par_iter()
        .enumerate()
        .map(|(i, &c1)| (a3_slice_max(&k, c1, m).map_or(0.0, |(v, _)| v), i))
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    let mut at = a3_slice_max(&k, grid[idx], m).ok_or(HarnessError::Degenerate(Quantity::A3))?.1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let sp = params(disk_point(&mut rng, m), disk_point(&mut rng, m), disk_point(&mut rng, m));
        let value = a3_modulus(&k, &sp).unwrap_or(0.0);
        if value > best {
            best = value;
            at = sp;
        }
    }
    SweepResult::new(Quantity::A3, best, &at, bound)
}

/// Uniform on the closed disk of radius `m`.
fn disk_point(rng: &mut ChaCha8Rng, m: f64) -> Complex64 {
    let r = m * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

/// A point on the boundary `|z| = 2` with phase a multiple of `2π/k`.
fn corner_point(rng: &mut ChaCha8Rng, k: u32) -> Complex64 {
    Complex64::from_polar(2.0, 2.0 * PI * rng.gen_range(0..k) as f64 / k as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomCheckReport {
    pub samples: usize,
    pub a2_bound: f64,
    pub a3_bound: f64,
    /// Largest `|a₂|/bound` seen; `None` when no samples were drawn.
    pub max_ratio_a2: Option<f64>,
    pub max_ratio_a3: Option<f64>,
}

/// Draws `n` admissible parameter triples and checks `|a₂|, |a₃|` against
/// the generic bounds.
///
/// With `corner_bias`, all moduli are 2 and phases are restricted to
/// quarter turns (`c₁`) and half turns (`c₂, b₂`), which hits the
/// maximizing corners with positive probability.
pub fn check_bounds_random(
    pair: &PairSpec,
    seed: u64,
    n: usize,
    corner_bias: bool,
) -> Result<RandomCheckReport, HarnessError> {
    let a2_bound = generic_a2_bound(pair).ok_or(HarnessError::Degenerate(Quantity::A2))?;
    let a3_bound = generic_a3_bound(pair).ok_or(HarnessError::Degenerate(Quantity::A3))?;
    let k = pair.constants::<Float>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RandomCheckReport { samples: n, a2_bound, a3_bound, max_ratio_a2: None, max_ratio_a3: None };
    for _ in 0..n {
        let sp = if corner_bias {
            params(corner_point(&mut rng, 4), corner_point(&mut rng, 2), corner_point(&mut rng, 2))
        } else {
            params(disk_point(&mut rng, 2.0), disk_point(&mut rng, 2.0), disk_point(&mut rng, 2.0))
        };
        let res = k.eliminate(&sp);
        let (Some(a2_sq), Some(a3)) = (res.a2_squared, res.a3) else {
            return Err(HarnessError::Degenerate(Quantity::A2));
        };
        for (quantity, value, bound, slot) in [
            (Quantity::A2, a2_sq.abs().sqrt(), a2_bound, &mut report.max_ratio_a2),
            (Quantity::A3, a3.abs(), a3_bound, &mut report.max_ratio_a3),
        ] {
            if value > bound + BOUND_SLACK {
                return Err(HarnessError::BoundExceeded { quantity, value, bound, at: Argmax::of(&sp) });
            }
            let ratio = if bound > 0.0 { value / bound } else { 0.0 };
            *slot = Some(slot.map_or(ratio, |r: f64| r.max(ratio)));
        }
    }
    Ok(report)
}

/// Outcome of one end-to-end run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndToEndReport {
    pub mode: Mode,
    pub c1: Point,
    pub c2: Point,
    pub a2: Point,
    pub a3: Point,
    /// `g`-side Carathéodory coefficients recovered from the series engine.
    pub b1: Point,
    pub b2: Point,
    pub linkage_residual: f64,
    /// `(r'a₂² − q'a₃) − (½D₁b₂ + ¼(D₂−D₁)b₁²)` with the engine's `b₂`.
    pub g_residual: f64,
    /// `f`- and `g`-side residuals of the elimination, when it is regular.
    pub elimination_residuals: Option<(f64, f64)>,
    /// Whether `|b₁|, |b₂| ≤ 2`, as the `g`-side subordination would need.
    /// Informational only.
    pub g_hypothesis_plausible: bool,
}

/// Truncation order used by the end-to-end chain.
pub const END_TO_END_ORDER: usize = 4;

fn vanishes<S: Scalar>(x: &S) -> bool {
    match S::MODE {
        Mode::Exact => x.is_zero(),
        Mode::Float => x.abs() <= BOUND_SLACK,
    }
}

/// End-to-end run with a seeded random Carathéodory function
/// (a mixture of three kernels).
pub fn end_to_end<S: Scalar>(pair: &PairSpec, seed: u64) -> Result<EndToEndReport, HarnessError> {
    let p = sample_caratheodory::<S>(seed, 3, END_TO_END_ORDER)?;
    end_to_end_with(pair, &p)
}

/// Solves `f` from `p`, inverts it, applies the `g`-side functional and
/// recovers `(b₁, b₂)` by matching against `ψ`'s subordination expansion.
///
/// Fails when `b₁` differs from the linkage or the `g`-side equation has a
/// nonzero residual (exactly zero in exact mode).
pub fn end_to_end_with<S: Scalar>(pair: &PairSpec, p: &TruncatedSeries<S>) -> Result<EndToEndReport, HarnessError> {
    let order = END_TO_END_ORDER;
    let k = pair.constants::<S>();
    let (a2, a3) = solve_forward(&pair.class_f, &pair.phi, p)?;
    let f = SchlichtCoeffs::new(vec![a2.clone(), a3.clone()]).to_series(order);
    let g = f.revert()?;
    let e = functional(&pair.class_g, &g)?;
    let half = S::one() / S::from_int(2);
    let quarter = S::one() / S::from_int(4);
    let two = S::from_int(2);
    let b1 = two.clone() * &e.coeff(1) / &k.d1;
    let dd = k.d2.clone() - &k.d1;
    let b2 = two * (e.coeff(2) - &(quarter.clone() * &dd * &b1.square())) / &k.d1;

    let (c1, c2) = (p.coeff(1), p.coeff(2));
    let linkage = b1.clone() - &k.linked_b1(&c1);
    if !vanishes(&linkage) {
        return Err(HarnessError::Inconsistent { check: "b1 linkage", magnitude: linkage.abs() });
    }
    let linked = k.linked_b1(&c1);
    let y = half * &k.d1 * &b2 + &(quarter * &dd * &linked.square());
    let g_res = k.g.r.clone() * &a2.square() - &(k.g.q.clone() * &a3) - &y;
    if !vanishes(&g_res) {
        return Err(HarnessError::Inconsistent { check: "g-side equation", magnitude: g_res.abs() });
    }

    let sp = SchwarzParams::new_unchecked(c1.clone(), c2.clone(), b2.clone());
    let res = k.eliminate(&sp);
    let elimination_residuals = if res.degenerate {
        None
    } else {
        let fr = k.f_residual(&sp, &res)?;
        let gr = k.g_residual(&sp, &res)?;
        if !vanishes(&fr) || !vanishes(&gr) {
            return Err(HarnessError::Inconsistent { check: "elimination", magnitude: fr.abs().max(gr.abs()) });
        }
        Some((fr.abs(), gr.abs()))
    };

    let pt = |x: &S| Point::from(x.to_complex64());
    Ok(EndToEndReport {
        mode: S::MODE,
        c1: pt(&c1),
        c2: pt(&c2),
        a2: pt(&a2),
        a3: pt(&a3),
        b1: pt(&b1),
        b2: pt(&b2),
        linkage_residual: linkage.abs(),
        g_residual: g_res.abs(),
        elimination_residuals,
        g_hypothesis_plausible: b1.abs() <= 2.0 + 1e-12 && b2.abs() <= 2.0 + 1e-12,
    })
}
