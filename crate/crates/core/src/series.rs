//! Truncated power series over a [`Scalar`] tower.
//!
//! A [`TruncatedSeries`] of order `N` stores exactly `N + 1` coefficients.
//! Binary operations truncate to the smaller order of their operands.
//! Operations that lose a term of information (differentiation, division
//! by `z`) keep the stored length and lower [`TruncatedSeries::accurate_to`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Scalar, Tolerance};

pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("divisor has zero constant term")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series must have constant term 1")]
    ConstantTermNotOne,
    #[error("series is not revertible: {0}")]
    NotRevertible(&'static str),
    #[error("cannot divide by z: constant term is nonzero")]
    NotDivisibleByZ,
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
    accurate_to: usize,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients past `order`.
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        TruncatedSeries { coeffs, accurate_to: order }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: S, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(S::one(), order)
    }

    /// The identity series `z`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![S::zero(), S::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest index whose coefficient is known to be correct.
    pub fn accurate_to(&self) -> usize {
        self.accurate_to
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero past the stored order.
    pub fn coeff(&self, n: usize) -> S {
        self.coeffs.get(n).cloned().unwrap_or_else(S::zero)
    }

    fn with_accuracy(mut self, accurate_to: usize) -> Self {
        self.accurate_to = accurate_to.min(self.order());
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            accurate_to: self.accurate_to.min(order),
        }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            accurate_to: self.accurate_to,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| self.coeffs[n].clone() + &other.coeffs[n]).collect();
        TruncatedSeries { coeffs, accurate_to: self.accurate_to.min(other.accurate_to) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| self.coeffs[n].clone() - &other.coeffs[n]).collect();
        TruncatedSeries { coeffs, accurate_to: self.accurate_to.min(other.accurate_to) }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(S::zero(), |acc, k| acc + &(self.coeffs[k].clone() * &other.coeffs[n - k]))
            })
            .collect();
        TruncatedSeries { coeffs, accurate_to: self.accurate_to.min(other.accurate_to) }
    }

    pub fn div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let b0 = &divisor.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order().min(divisor.order());
        let mut q: Vec<S> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                acc = acc - &(divisor.coeffs[k].clone() * &q[n - k]);
            }
            q.push(acc / b0);
        }
        Ok(TruncatedSeries { coeffs: q, accurate_to: self.accurate_to.min(divisor.accurate_to) })
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        Self::one(self.order()).div(self)
    }

    /// Termwise derivative; the top coefficient becomes unknown.
    pub fn derivative(&self) -> Self {
        let order = self.order();
        let coeffs = (0..order)
            .map(|k| self.coeffs[k + 1].clone() * &S::from_int(k as i64 + 1))
            .collect();
        Self::new(coeffs, order).with_accuracy(self.accurate_to.saturating_sub(1))
    }

    /// Multiplies by `z`.
    pub fn shift_up(&self) -> Self {
        let order = self.order();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs[..order].iter().cloned());
        let acc = if self.accurate_to >= order { order } else { self.accurate_to + 1 };
        TruncatedSeries { coeffs, accurate_to: acc }
    }

    /// Divides by `z`; the constant term must vanish.
    pub fn shift_down(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotDivisibleByZ);
        }
        let order = self.order();
        Ok(Self::new(self.coeffs[1..].to_vec(), order).with_accuracy(self.accurate_to.saturating_sub(1)))
    }

    /// `self ∘ inner`, by Horner's rule over series.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + &self.coeffs[k];
        }
        Ok(acc.with_accuracy(self.accurate_to.min(inner.accurate_to)))
    }

    /// Principal logarithm of a series with constant term 1.
    pub fn log_unit(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let order = self.order();
        // log a = ∫ a'/a; the quotient only needs indices below `order`
        let quotient = self.derivative().div(self)?;
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(S::zero());
        for n in 1..=order {
            coeffs.push(quotient.coeffs[n - 1].clone() / S::from_int(n as i64));
        }
        Ok(TruncatedSeries { coeffs, accurate_to: self.accurate_to })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp_nil(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order();
        // b' = a' b  ⇒  n b_n = Σ k a_k b_{n-k}
        let mut b: Vec<S> = Vec::with_capacity(order + 1);
        b.push(S::one());
        for n in 1..=order {
            let mut acc = S::zero();
            for k in 1..=n {
                acc = acc + &(self.coeffs[k].clone() * &S::from_int(k as i64) * &b[n - k]);
            }
            b.push(acc / S::from_int(n as i64));
        }
        Ok(TruncatedSeries { coeffs: b, accurate_to: self.accurate_to })
    }

    /// `self^t = exp(t log self)` on the branch with value 1 at the origin.
    /// `t` is expected to be real.
    pub fn pow_unit(&self, t: &S) -> Result<Self, SeriesError> {
        self.log_unit()?.scale(t).exp_nil()
    }

    /// Compositional inverse, by Lagrange inversion:
    /// `[w^n] g = (1/n) [z^{n-1}] (z / a(z))^n`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotRevertible("constant term is nonzero"));
        }
        if self.order() < 1 || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotRevertible("linear coefficient vanishes"));
        }
        let order = self.order();
        let h = self.shift_down()?.recip()?;
        let mut coeffs = vec![S::zero(); order + 1];
        let mut power = Self::one(order);
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            power = power.mul(&h);
            *slot = power.coeffs[n - 1].clone() / S::from_int(n as i64);
        }
        Ok(TruncatedSeries { coeffs, accurate_to: self.accurate_to })
    }

    /// Coefficientwise comparison through index `through` (inclusive).
    pub fn agrees_through(&self, other: &Self, through: usize, tol: Tolerance) -> bool {
        (0..=through).all(|n| self.coeff(n).approx_eq_with(&other.coeff(n), tol))
    }

    /// Coefficientwise comparison over the common stored range.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.agrees_through(other, self.order().min(other.order()), Tolerance::DEFAULT)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.accurate_to + 1)
    }
}

impl<S: Scalar + fmt::Debug> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("coeffs", &self.coeffs)
            .field("accurate_to", &self.accurate_to)
            .finish()
    }
}

impl<S: Scalar> Add for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn add(self, rhs: Self) -> TruncatedSeries<S> {
        TruncatedSeries::add(self, rhs)
    }
}

impl<S: Scalar> Sub for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn sub(self, rhs: Self) -> TruncatedSeries<S> {
        TruncatedSeries::sub(self, rhs)
    }
}

impl<S: Scalar> Mul for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn mul(self, rhs: Self) -> TruncatedSeries<S> {
        TruncatedSeries::mul(self, rhs)
    }
}

impl<S: Scalar> Neg for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn neg(self) -> TruncatedSeries<S> {
        self.map(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Exact, Float};

    fn ex(v: &[i64]) -> TruncatedSeries<Exact> {
        TruncatedSeries::new(v.iter().map(|&n| Exact::from_int(n)).collect(), DEFAULT_ORDER)
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(&ratio(n, d))
    }

    #[test]
    fn add_examples() {
        assert_eq!(&ex(&[1, 1]) + &ex(&[1, -1]), ex(&[2]));
        assert_eq!(&ex(&[3, 1, 4]) + &TruncatedSeries::zero(8), ex(&[3, 1, 4]));
        assert_eq!(&ex(&[1, 2, 2]) + &ex(&[1, -2, 2]), ex(&[2, 0, 4]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&ex(&[1, 1]) * &ex(&[1, -1]), ex(&[1, 0, -1]));
        assert_eq!(&ex(&[5, 0, 7]) * &TruncatedSeries::one(8), ex(&[5, 0, 7]));
        assert_eq!(&ex(&[1, 1, 1]) * &ex(&[1, 1]), ex(&[1, 2, 2, 1]));
    }

    #[test]
    fn binary_ops_truncate_to_min_order() {
        let a = TruncatedSeries::new(vec![Exact::one(); 6], 5);
        let b = ex(&[1, 1]);
        assert_eq!((&a * &b).order(), 5);
        assert_eq!((&b + &a).order(), 5);
        assert_eq!(a.div(&b).unwrap().order(), 5);
    }

    #[test]
    fn div_examples() {
        let geometric = TruncatedSeries::one(8).div(&ex(&[1, -1])).unwrap();
        assert_eq!(geometric, ex(&[1; 9]));
        let a = ex(&[2, -3, 5, 7]);
        assert_eq!(a.div(&a).unwrap(), TruncatedSeries::one(8));
        let quo = ex(&[1, 2, 3]).div(&ex(&[1, 1])).unwrap();
        assert_eq!(quo, ex(&[1, 1, 2, -2, 2, -2, 2, -2, 2]));
        assert_eq!(&quo * &ex(&[1, 1]), ex(&[1, 2, 3]));
        assert_eq!(ex(&[1]).div(&ex(&[0, 1])), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn shifted_division_of_schlicht_prefix() {
        // (z + 2z^2 + 3z^3) / z, then divided by (1 + z)
        let f = ex(&[0, 1, 2, 3]);
        let reduced = f.shift_down().unwrap();
        assert_eq!(reduced.accurate_to(), 7);
        let quo = reduced.div(&ex(&[1, 1])).unwrap();
        assert_eq!(quo.coeffs()[..3], ex(&[1, 1, 2]).coeffs()[..3]);
    }

    #[test]
    fn derivative_examples() {
        let a2 = q(3, 7);
        let a3 = q(-2, 5);
        let f = TruncatedSeries::new(vec![Exact::zero(), Exact::one(), a2.clone(), a3.clone()], 8);
        let df = f.derivative();
        assert_eq!(df.coeffs()[..3], [Exact::one(), a2 * Exact::from_int(2), a3 * Exact::from_int(3)]);
        assert_eq!(df.accurate_to(), 7);
        assert_eq!(df.order(), 8);
        assert_eq!(ex(&[4]).derivative(), TruncatedSeries::zero(8).with_accuracy(7));
        assert_eq!(ex(&[1, 2, 2]).derivative().coeffs()[..3], ex(&[2, 4]).coeffs()[..3]);
    }

    #[test]
    fn compose_examples() {
        let a = ex(&[2, 3, -1, 4]);
        assert_eq!(a.compose(&TruncatedSeries::variable(8)).unwrap(), a);
        // (1+z)/(1-z) = 1 + 2z + 2z^2 + ...
        let mobius = ex(&[1, 1]).div(&ex(&[1, -1])).unwrap();
        let mut expected = vec![2; 9];
        expected[0] = 1;
        assert_eq!(mobius.compose(&TruncatedSeries::variable(8)).unwrap(), ex(&expected));
        let (b1, b2, c) = (q(3, 2), q(-1, 3), q(2, 5));
        let phi = TruncatedSeries::new(vec![Exact::one(), b1.clone(), b2.clone()], 8);
        let cz = TruncatedSeries::new(vec![Exact::zero(), c.clone()], 8);
        let got = phi.compose(&cz).unwrap();
        assert_eq!(got.coeff(1), b1 * &c);
        assert_eq!(got.coeff(2), b2 * &c * &c);
        assert_eq!(phi.compose(&ex(&[1, 1])), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn pow_unit_examples() {
        let a = ex(&[1, 3, -2, 5]);
        assert_eq!(a.pow_unit(&Exact::zero()).unwrap(), TruncatedSeries::one(8));
        assert_eq!(a.pow_unit(&Exact::one()).unwrap(), a);
        let root = a.pow_unit(&q(1, 2)).unwrap();
        assert_eq!(&root * &root, a);
        assert_eq!(ex(&[2, 1]).pow_unit(&q(1, 2)), Err(SeriesError::ConstantTermNotOne));
    }

    #[test]
    fn pow_unit_of_mobius_against_binomial_oracle() {
        // ((1+z)/(1-z))^g = (1+z)^g (1-z)^{-g}; both factors expanded by the
        // generalized binomial series, independent of exp/log
        let g = q(1, 3);
        let binom = |t: &Exact, sign: i64| {
            let mut c = vec![Exact::one()];
            for k in 1..=8i64 {
                let prev = c[(k - 1) as usize].clone();
                let factor = (t.clone() - Exact::from_int(k - 1)) / Exact::from_int(k) * Exact::from_int(sign);
                c.push(prev * factor);
            }
            TruncatedSeries::new(c, 8)
        };
        let oracle = &binom(&g, 1) * &binom(&(-g.clone()), -1);
        let mobius = ex(&[1, 1]).div(&ex(&[1, -1])).unwrap();
        let got = mobius.pow_unit(&g).unwrap();
        assert_eq!(got, oracle);
        assert_eq!(got.coeff(1), Exact::from_int(2) * &g);
        assert_eq!(got.coeff(2), Exact::from_int(2) * &g * &g);
    }

    #[test]
    fn revert_examples() {
        let z = TruncatedSeries::<Exact>::variable(8);
        assert_eq!(z.revert().unwrap(), z);
        let (a2, a3) = (q(5, 3), q(-7, 2));
        let f = TruncatedSeries::new(vec![Exact::zero(), Exact::one(), a2.clone(), a3.clone()], 8);
        let g = f.revert().unwrap();
        assert_eq!(g.coeff(1), Exact::one());
        assert_eq!(g.coeff(2), -a2.clone());
        assert_eq!(g.coeff(3), Exact::from_int(2) * &a2 * &a2 - &a3);
        // z/(1-z) reverts to w/(1+w)
        let koebe_like = ex(&[0, 1]).div(&ex(&[1, -1])).unwrap();
        let inv = koebe_like.revert().unwrap();
        assert_eq!(inv, ex(&[0, 1, -1, 1, -1, 1, -1, 1, -1]));
        assert_eq!(inv.compose(&koebe_like).unwrap(), z);
        assert!(ex(&[1, 1]).revert().is_err());
        assert!(ex(&[0, 0, 1]).revert().is_err());
    }

    #[test]
    fn float_mode_revert_round_trip() {
        let f = TruncatedSeries::new(
            vec![Float::zero(), Float::new(0.7, 0.2), Float::new(-1.3, 0.5), Float::real(0.25)],
            8,
        );
        let g = f.revert().unwrap();
        let id = g.compose(&f).unwrap();
        let tol = Tolerance { rel: 1e-12, abs: 1e-10 };
        assert!(id.agrees_through(&TruncatedSeries::variable(8), 8, tol), "{id}");
    }

    #[test]
    fn display_shows_truncation() {
        let s = ex(&[1, 0, -2]).truncate(3);
        assert_eq!(s.to_string(), "(1) + (-2)z^2 + O(z^4)");
    }
}
