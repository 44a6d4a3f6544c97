//! Ma–Minda targets, the three function classes and their linearizations.
//!
//! For a normalized `f(z) = z + a₂z² + a₃z³ + …` every class functional
//! expands as `1 + p·a₂ z + (q·a₃ − r·a₂²) z² + …`; the triple `(p, q, r)`
//! depends only on the class and its parameter. The same functional
//! evaluated on `g = f⁻¹` has triple `(p, q, 2q − r)` in the variables
//! `(−a₂, …)`, see [`ClassTriple::inverse`].

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{int, parse_rational, ratio, ratio_to_f64, Exact, Scalar};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassError {
    #[error("parameter {param} is outside the legal range for class {kind}")]
    InvalidParam { kind: ClassKind, param: String },
    #[error("target needs a positive leading coefficient, got {0}")]
    NonPositiveLeading(String),
    #[error("target has no coefficients")]
    EmptyTarget,
    #[error("target coefficient {index} is not real")]
    ComplexTarget { index: usize },
    #[error("unknown target preset `{0}`")]
    UnknownPreset(String),
    #[error("preset `{key}` needs parameter in {range}")]
    PresetRange { key: String, range: &'static str },
    #[error("Carathéodory coefficient {name} has modulus {modulus} > 2")]
    SchwarzOutOfRange { name: &'static str, modulus: f64 },
    #[error("a Carathéodory mixture needs at least one term")]
    EmptyMixture,
    #[error("mixture weights must be real, nonnegative and not all zero")]
    BadWeights,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The superordinate function `φ(z) = 1 + B₁z + B₂z² + …` as its real
/// coefficient list `B₁, B₂, …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MindaTarget {
    coeffs: Vec<BigRational>,
}

impl MindaTarget {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self, ClassError> {
        let lead = coeffs.first().ok_or(ClassError::EmptyTarget)?;
        if !lead.is_positive() {
            return Err(ClassError::NonPositiveLeading(lead.to_string()));
        }
        Ok(MindaTarget { coeffs })
    }

    /// Builds a target from scalar coefficients, rejecting complex entries.
    pub fn from_scalars<S: Scalar>(coeffs: &[S], to_ratio: impl Fn(&S) -> BigRational) -> Result<Self, ClassError> {
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_real() {
                return Err(ClassError::ComplexTarget { index: i + 1 });
            }
        }
        Self::new(coeffs.iter().map(to_ratio).collect())
    }

    /// `B_n = 2` for all `n`: the Möbius map `(1+z)/(1-z)`.
    pub fn caratheodory(order: usize) -> Self {
        MindaTarget { coeffs: vec![int(2); order.max(2)] }
    }

    /// `(1 + (1-2γ)z)/(1-z)`, i.e. `B_n = 2(1-γ)`, for `γ ∈ [0,1)`.
    pub fn of_order(gamma: &BigRational, order: usize) -> Result<Self, ClassError> {
        if gamma.is_negative() || *gamma >= BigRational::one() {
            return Err(ClassError::PresetRange { key: "order".into(), range: "[0,1)" });
        }
        let b = int(2) * (BigRational::one() - gamma);
        Ok(MindaTarget { coeffs: vec![b; order.max(2)] })
    }

    /// `((1+z)/(1-z))^γ` for `γ ∈ (0,1]`; `B₁ = 2γ`, `B₂ = 2γ²`.
    pub fn strong(gamma: &BigRational, order: usize) -> Result<Self, ClassError> {
        if !gamma.is_positive() || *gamma > BigRational::one() {
            return Err(ClassError::PresetRange { key: "strong".into(), range: "(0,1]" });
        }
        let order = order.max(2);
        let mobius = mobius::<Exact>(order);
        let power = mobius.pow_unit(&Exact::from_ratio(gamma))?;
        let coeffs = power.coeffs()[1..].iter().map(|c| c.re_ratio().clone()).collect();
        Ok(MindaTarget { coeffs })
    }

    /// Resolves a preset key: `caratheodory`, `order:<γ>` or `strong:<γ>`.
    pub fn preset(key: &str, order: usize) -> Result<Self, ClassError> {
        let (name, arg) = match key.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (key, None),
        };
        let gamma = || -> Result<BigRational, ClassError> {
            let a = arg.ok_or_else(|| ClassError::UnknownPreset(key.to_string()))?;
            parse_rational(a).map_err(|_| ClassError::UnknownPreset(key.to_string()))
        };
        match (name, arg) {
            ("caratheodory", None) => Ok(Self::caratheodory(order)),
            ("order", Some(_)) => Self::of_order(&gamma()?, order),
            ("strong", Some(_)) => Self::strong(&gamma()?, order),
            _ => Err(ClassError::UnknownPreset(key.to_string())),
        }
    }

    /// `B_n` (1-based); zero past the stored coefficients.
    pub fn b(&self, n: usize) -> BigRational {
        assert!(n >= 1, "target coefficients are 1-based");
        self.coeffs.get(n - 1).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn b1(&self) -> BigRational {
        self.b(1)
    }

    pub fn b2(&self) -> BigRational {
        self.b(2)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn series<S: Scalar>(&self, order: usize) -> TruncatedSeries<S> {
        let mut c = vec![S::one()];
        c.extend(self.coeffs.iter().map(S::from_ratio));
        TruncatedSeries::new(c, order)
    }
}

impl fmt::Debug for MindaTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MindaTarget(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    /// `zf'/f + α z²f''/f`
    P,
    /// `(1-α) zf'/f + α(1 + zf''/f')`
    M,
    /// `(zf'/f)^α (1 + zf''/f')^(1-α)`
    L,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::P => "P",
            ClassKind::M => "M",
            ClassKind::L => "L",
        })
    }
}

impl FromStr for ClassKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(ClassKind::P),
            "M" | "m" => Ok(ClassKind::M),
            "L" | "l" => Ok(ClassKind::L),
            _ => Err(format!("unknown class `{s}` (expected P, M or L)")),
        }
    }
}

/// A class with its parameter. `P` and `M` accept `α ≥ 0`, `L` accepts
/// `α ∈ [0,1]` so both exponents stay nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    kind: ClassKind,
    param: BigRational,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, param: BigRational) -> Result<Self, ClassError> {
        let ok = match kind {
            ClassKind::P | ClassKind::M => !param.is_negative(),
            ClassKind::L => !param.is_negative() && param <= BigRational::one(),
        };
        if !ok {
            return Err(ClassError::InvalidParam { kind, param: param.to_string() });
        }
        Ok(ClassSpec { kind, param })
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn param(&self) -> &BigRational {
        &self.param
    }

    pub fn param_f64(&self) -> f64 {
        ratio_to_f64(&self.param)
    }

    pub fn triple<S: Scalar>(&self) -> ClassTriple<S> {
        let a = &self.param;
        let one = BigRational::one();
        let (p, q, r) = match self.kind {
            ClassKind::P => {
                let p = &one + int(2) * a;
                (p.clone(), int(2) * (&one + int(3) * a), p)
            }
            ClassKind::M => (&one + a, int(2) * (&one + int(2) * a), &one + int(3) * a),
            ClassKind::L => (
                int(2) - a,
                int(2) * (int(3) - int(2) * a),
                (int(8) - int(5) * a - a * a) * ratio(1, 2),
            ),
        };
        ClassTriple { p: S::from_ratio(&p), q: S::from_ratio(&q), r: S::from_ratio(&r) }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.param)
    }
}

/// Order-2 linearization `1 + p·a₂ z + (q·a₃ − r·a₂²) z²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTriple<S> {
    pub p: S,
    pub q: S,
    pub r: S,
}

impl<S: Scalar> ClassTriple<S> {
    pub fn new(p: S, q: S, r: S) -> Self {
        ClassTriple { p, q, r }
    }

    /// Triple governing the same functional on `g = f⁻¹`: `(p, q, 2q − r)`.
    pub fn inverse(&self) -> Self {
        ClassTriple {
            p: self.p.clone(),
            q: self.q.clone(),
            r: S::from_int(2) * &self.q - &self.r,
        }
    }

    /// `(p·a₂, q·a₃ − r·a₂²)`
    pub fn expansion_f(&self, a2: &S, a3: &S) -> (S, S) {
        (
            self.p.clone() * a2,
            self.q.clone() * a3 - &(self.r.clone() * a2 * a2),
        )
    }

    /// Coefficients of the functional on `g = f⁻¹`:
    /// `(−p·a₂, (2q − r)·a₂² − q·a₃)`.
    pub fn expansion_g(&self, a2: &S, a3: &S) -> (S, S) {
        let inv = self.inverse();
        (
            -(self.p.clone() * a2),
            inv.r * a2 * a2 - &(self.q.clone() * a3),
        )
    }
}

/// `(a₂, a₃)` of `f⁻¹`: `(−a₂, 2a₂² − a₃)`.
pub fn invert_schlicht<S: Scalar>(a2: &S, a3: &S) -> (S, S) {
    (-a2.clone(), S::from_int(2) * a2 * a2 - a3)
}

/// Coefficients `a₂, a₃, …` of `f(z) = z + Σ aₙzⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchlichtCoeffs<S> {
    pub a: Vec<S>,
}

impl<S: Scalar> SchlichtCoeffs<S> {
    pub fn new(a: Vec<S>) -> Self {
        SchlichtCoeffs { a }
    }

    /// `a_n` for `n ≥ 2`; zero past the stored range.
    pub fn get(&self, n: usize) -> S {
        match n {
            0 => S::zero(),
            1 => S::one(),
            _ => self.a.get(n - 2).cloned().unwrap_or_else(S::zero),
        }
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries<S> {
        TruncatedSeries::new((0..=order).map(|n| self.get(n)).collect(), order)
    }

    /// Reads `a₂, …, a_N` off a series with `f(0) = 0`.
    pub fn from_series(f: &TruncatedSeries<S>) -> Self {
        SchlichtCoeffs { a: f.coeffs().iter().skip(2).cloned().collect() }
    }
}

/// Free Carathéodory coefficients `c₁, c₂` of `p₁` and `b₂` of `p₂`.
/// `b₁` is not free: it follows from `c₁` through the `a₂` linkage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwarzParams<S> {
    pub c1: S,
    pub c2: S,
    pub b2: S,
}

const MODULUS_SLACK: f64 = 1e-12;

impl<S: Scalar> SchwarzParams<S> {
    /// Checked constructor: each modulus at most 2.
    pub fn new(c1: S, c2: S, b2: S) -> Result<Self, ClassError> {
        for (name, v) in [("c1", &c1), ("c2", &c2), ("b2", &b2)] {
            let m = v.abs();
            if m > 2.0 + MODULUS_SLACK {
                return Err(ClassError::SchwarzOutOfRange { name, modulus: m });
            }
        }
        Ok(SchwarzParams { c1, c2, b2 })
    }

    /// Skips the modulus check. The coefficient algebra is an identity in
    /// these variables and does not need the constraint.
    pub fn new_unchecked(c1: S, c2: S, b2: S) -> Self {
        SchwarzParams { c1, c2, b2 }
    }

    pub fn zero() -> Self {
        SchwarzParams { c1: S::zero(), c2: S::zero(), b2: S::zero() }
    }

    pub fn is_admissible(&self) -> bool {
        [&self.c1, &self.c2, &self.b2].iter().all(|v| v.abs() <= 2.0 + MODULUS_SLACK)
    }
}

pub(crate) fn mobius<S: Scalar>(order: usize) -> TruncatedSeries<S> {
    let mut c = vec![S::from_int(2); order + 1];
    c[0] = S::one();
    TruncatedSeries::new(c, order)
}

/// The class functional of `f`, computed by the series engine.
///
/// `f` must start `z + a₂z² + …`; the result is accurate one order below `f`.
pub fn functional<S: Scalar>(spec: &ClassSpec, f: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>, SeriesError> {
    let reduced = f.shift_down()?;
    let df = f.derivative();
    let d2f = df.derivative();
    let starlike = df.div(&reduced)?;
    let alpha = S::from_ratio(&spec.param);
    let convex = || -> Result<TruncatedSeries<S>, SeriesError> {
        let order = f.order();
        Ok(&TruncatedSeries::one(order) + &d2f.div(&df)?.shift_up())
    };
    match spec.kind {
        ClassKind::P => {
            let second = d2f.div(&reduced)?.shift_up();
            Ok(&starlike + &second.scale(&alpha))
        }
        ClassKind::M => {
            let one_minus = S::one() - &alpha;
            Ok(&starlike.scale(&one_minus) + &convex()?.scale(&alpha))
        }
        ClassKind::L => {
            let one_minus = S::one() - &alpha;
            Ok(&starlike.pow_unit(&alpha)? * &convex()?.pow_unit(&one_minus)?)
        }
    }
}

/// `φ((p − 1)/(p + 1))` for a Carathéodory-normalized `p`.
pub fn subordinate_compose<S: Scalar>(
    target: &MindaTarget,
    p: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>, SeriesError> {
    if !p.coeff(0).is_one() {
        return Err(SeriesError::ConstantTermNotOne);
    }
    let order = p.order();
    let one = TruncatedSeries::one(order);
    let schwarz = (p - &one).div(&(p + &one))?;
    target.series(order).compose(&schwarz)
}

/// `Σ λ_k (1 + x_k z)/(1 − x_k z)` with weights normalized to sum 1.
/// Points are expected on the unit circle.
pub fn caratheodory_mixture<S: Scalar>(
    weights: &[S],
    points: &[S],
    order: usize,
) -> Result<TruncatedSeries<S>, ClassError> {
    if weights.is_empty() || weights.len() != points.len() {
        return Err(ClassError::EmptyMixture);
    }
    if weights.iter().any(|w| !w.is_real() || w.re() < 0.0) {
        return Err(ClassError::BadWeights);
    }
    let total = weights.iter().fold(S::zero(), |acc, w| acc + w);
    if total.is_zero() {
        return Err(ClassError::BadWeights);
    }
    let mut c = vec![S::zero(); order + 1];
    c[0] = S::one();
    for (w, x) in weights.iter().zip(points) {
        let lambda = w.clone() / &total;
        let mut power = S::one();
        for coeff in c.iter_mut().skip(1) {
            power = power * x;
            *coeff = coeff.clone() + &(S::from_int(2) * &lambda * &power);
        }
    }
    Ok(TruncatedSeries::new(c, order))
}

/// A deterministic random member of the Carathéodory class: a convex
/// combination of `m` rotated Möbius kernels.
///
/// Kernel points are rational points on the unit circle,
/// `((1 − t²) + 2ti)/(1 + t²)`, so exact mode stays exact and float mode
/// sees the same function.
pub fn sample_caratheodory<S: Scalar>(seed: u64, m: usize, order: usize) -> Result<TruncatedSeries<S>, ClassError> {
    if m < 1 {
        return Err(ClassError::EmptyMixture);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(m);
    let mut points = Vec::with_capacity(m);
    for _ in 0..m {
        weights.push(S::from_int(rng.gen_range(1..=1000)));
        let theta: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = ((theta / 2.0).tan() * 1000.0).round().clamp(-1e9, 1e9) as i64;
        points.push(unit_circle_point::<S>(&ratio(t, 1000)));
    }
    caratheodory_mixture(&weights, &points, order)
}

/// `((1 − t²) + 2ti)/(1 + t²)`
pub fn unit_circle_point<S: Scalar>(t: &BigRational) -> S {
    let one = BigRational::one();
    let den = &one + t * t;
    S::from_parts(&((&one - t * t) / &den), &((int(2) * t) / &den))
}
