//! The coefficient equations of a bi-univalent pair, in unified form.
//!
//! With `(p, q, r)` the triple of the class of `f`, `(p', q', r')` the
//! inverse triple of the class of `g = f⁻¹`, and `p₁ = 1 + c₁z + c₂z² + …`,
//! `p₂ = 1 + b₁w + b₂w² + …` the Carathéodory functions of the two
//! subordinations, matching coefficients gives
//!
//! ```text
//!   p·a₂            = ½B₁c₁
//!   q·a₃ − r·a₂²    = X = ½B₁c₂ + ¼(B₂ − B₁)c₁²
//!  −p'·a₂           = ½D₁b₁
//!   r'·a₂² − q'·a₃  = Y = ½D₁b₂ + ¼(D₂ − D₁)b₁²
//! ```
//!
//! The first and third equations link `b₁` to `c₁`. Eliminating `a₃`
//! between the second and fourth yields `σ̃·a₂² = q'X + qY` with
//! `σ̃ = q·r' − q'·r`; substituting `c₁², b₁²` in terms of `a₂²` moves the
//! quadratic terms to the left and leaves a denominator `DEN` and a
//! numerator free of `c₁`. Eliminating `a₂²` instead gives
//! `σ̃·a₃ = r'X + rY`.

use serde::Serialize;
use thiserror::Error;

use crate::classes::{subordinate_compose, ClassSpec, ClassTriple, MindaTarget, SchwarzParams};
use crate::scalar::Scalar;
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("target leading coefficient must be positive")]
    NonPositiveLeading,
    #[error("elimination is degenerate (vanishing denominator)")]
    Degenerate,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `f` in `class_f` subordinate to `phi`, `g = f⁻¹` in `class_g`
/// subordinate to `psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub class_f: ClassSpec,
    pub phi: MindaTarget,
    pub class_g: ClassSpec,
    pub psi: MindaTarget,
}

impl PairSpec {
    pub fn new(class_f: ClassSpec, phi: MindaTarget, class_g: ClassSpec, psi: MindaTarget) -> Self {
        // ClassSpec and MindaTarget validate on construction
        PairSpec { class_f, phi, class_g, psi }
    }

    /// Exchanges the roles of the two sides.
    pub fn swapped(&self) -> Self {
        PairSpec {
            class_f: self.class_g.clone(),
            phi: self.psi.clone(),
            class_g: self.class_f.clone(),
            psi: self.phi.clone(),
        }
    }

    pub fn constants<S: Scalar>(&self) -> PairConstants<S> {
        PairConstants {
            f: self.class_f.triple(),
            g: self.class_g.triple::<S>().inverse(),
            b1: S::from_ratio(&self.phi.b1()),
            b2: S::from_ratio(&self.phi.b2()),
            d1: S::from_ratio(&self.psi.b1()),
            d2: S::from_ratio(&self.psi.b2()),
        }
    }
}

/// A pair's numeric data converted once into a coefficient mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PairConstants<S> {
    /// Triple of `f`'s class.
    pub f: ClassTriple<S>,
    /// Inverse triple of `g`'s class.
    pub g: ClassTriple<S>,
    pub b1: S,
    pub b2: S,
    pub d1: S,
    pub d2: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationResult<S> {
    /// `None` when `DEN` vanishes.
    pub a2_squared: Option<S>,
    /// `None` when `σ̃` vanishes.
    pub a3: Option<S>,
    pub x: S,
    pub y: S,
    pub sigma_tilde: S,
    pub denominator: S,
    pub degenerate: bool,
}

impl<S: Scalar> PairConstants<S> {
    pub fn linked_b1(&self, c1: &S) -> S {
        -(self.g.p.clone() * &self.b1 / (self.f.p.clone() * &self.d1)) * c1
    }

    pub fn sigma_tilde(&self) -> S {
        self.f.q.clone() * &self.g.r - &(self.g.q.clone() * &self.f.r)
    }

    /// `σ̃ − q'p²(B₂−B₁)/B₁² − q·p'²(D₂−D₁)/D₁²`
    pub fn denominator(&self) -> S {
        let db = self.b2.clone() - &self.b1;
        let dd = self.d2.clone() - &self.d1;
        let left = self.g.q.clone() * &self.f.p.square() * &db / self.b1.square();
        let right = self.f.q.clone() * &self.g.p.square() * &dd / self.d1.square();
        self.sigma_tilde() - &left - &right
    }

    pub fn rhs(&self, sp: &SchwarzParams<S>) -> (S, S) {
        let half = S::one() / S::from_int(2);
        let quarter = S::one() / S::from_int(4);
        let b1 = self.linked_b1(&sp.c1);
        let x = half.clone() * &self.b1 * &sp.c2 + &(quarter.clone() * (self.b2.clone() - &self.b1) * &sp.c1.square());
        let y = half * &self.d1 * &sp.b2 + &(quarter * (self.d2.clone() - &self.d1) * &b1.square());
        (x, y)
    }

    /// `½(q'B₁c₂ + qD₁b₂)`: the `c₁`-free part of `q'X + qY`.
    pub fn a2_numerator(&self, c2: &S, b2: &S) -> S {
        let half = S::one() / S::from_int(2);
        half * (self.g.q.clone() * &self.b1 * c2 + &(self.f.q.clone() * &self.d1 * b2))
    }

    pub fn eliminate(&self, sp: &SchwarzParams<S>) -> EliminationResult<S> {
        let (x, y) = self.rhs(sp);
        let sigma = self.sigma_tilde();
        let den = self.denominator();
        let a2_squared = (!den.is_zero()).then(|| self.a2_numerator(&sp.c2, &sp.b2) / &den);
        let a3 = (!sigma.is_zero()).then(|| (self.g.r.clone() * &x + &(self.f.r.clone() * &y)) / &sigma);
        let degenerate = a2_squared.is_none() || a3.is_none();
        EliminationResult { a2_squared, a3, x, y, sigma_tilde: sigma, denominator: den, degenerate }
    }

    /// Completes `(c₁, c₂)` to parameters satisfying all four equations:
    /// `a₂, a₃` from the `f` side, then `b₂` from the `g` side.
    pub fn consistent_params(&self, c1: S, c2: S) -> SchwarzParams<S> {
        let half = S::one() / S::from_int(2);
        let quarter = S::one() / S::from_int(4);
        let a2 = half.clone() * &self.b1 * &c1 / &self.f.p;
        let x = half * &self.b1 * &c2 + &(quarter.clone() * (self.b2.clone() - &self.b1) * &c1.square());
        let a3 = (x + &(self.f.r.clone() * &a2.square())) / &self.f.q;
        let y = self.g.r.clone() * &a2.square() - &(self.g.q.clone() * &a3);
        let b1 = self.linked_b1(&c1);
        let b2 = (y - &(quarter * (self.d2.clone() - &self.d1) * &b1.square())) * S::from_int(2) / &self.d1;
        SchwarzParams::new_unchecked(c1, c2, b2)
    }

    /// `(r'a₂² − q'a₃) − Y`, the residual of the `g`-side equation.
    pub fn g_residual(&self, sp: &SchwarzParams<S>, result: &EliminationResult<S>) -> Result<S, SolverError> {
        let (Some(a2_sq), Some(a3)) = (&result.a2_squared, &result.a3) else {
            return Err(SolverError::Degenerate);
        };
        let (_, y) = self.rhs(sp);
        Ok(self.g.r.clone() * a2_sq - &(self.g.q.clone() * a3) - &y)
    }

    /// `(q·a₃ − r·a₂²) − X`, the residual of the `f`-side equation.
    pub fn f_residual(&self, sp: &SchwarzParams<S>, result: &EliminationResult<S>) -> Result<S, SolverError> {
        let (Some(a2_sq), Some(a3)) = (&result.a2_squared, &result.a3) else {
            return Err(SolverError::Degenerate);
        };
        let (x, _) = self.rhs(sp);
        Ok(self.f.q.clone() * a3 - &(self.f.r.clone() * a2_sq) - &x)
    }
}

/// `b₁ = −(p_G·B₁)/(p_F·D₁)·c₁`
pub fn linked_b1<S: Scalar>(pair: &PairSpec, c1: &S) -> S {
    pair.constants().linked_b1(c1)
}

pub fn sigma_tilde<S: Scalar>(pair: &PairSpec) -> S {
    pair.constants::<S>().sigma_tilde()
}

pub fn rhs_pair<S: Scalar>(pair: &PairSpec, sp: &SchwarzParams<S>) -> (S, S) {
    pair.constants().rhs(sp)
}

pub fn eliminate<S: Scalar>(pair: &PairSpec, sp: &SchwarzParams<S>) -> EliminationResult<S> {
    pair.constants().eliminate(sp)
}

/// Magnitude of the `g`-side residual; zero whenever `sp` satisfies all
/// four coefficient equations.
pub fn consistency_residual<S: Scalar>(
    pair: &PairSpec,
    sp: &SchwarzParams<S>,
    result: &EliminationResult<S>,
) -> Result<f64, SolverError> {
    Ok(pair.constants().g_residual(sp, result)?.abs())
}

/// The order-3 solution `(a₂, a₃)` of `functional(f) = φ((p−1)/(p+1))`.
pub fn solve_forward<S: Scalar>(
    spec: &ClassSpec,
    target: &MindaTarget,
    p: &TruncatedSeries<S>,
) -> Result<(S, S), SolverError> {
    let rhs = subordinate_compose(target, p)?;
    let t = spec.triple::<S>();
    let a2 = rhs.coeff(1) / &t.p;
    let a3 = (rhs.coeff(2) + &(t.r.clone() * &a2.square())) / &t.q;
    Ok((a2, a3))
}
