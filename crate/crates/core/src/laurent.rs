//! Exact Laurent polynomials in the deformation parameter `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coefficient ring of a [`LaurentPoly`].
pub trait Ring:
    Clone + num_traits::Num + Signed + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<R> Ring for R where
    R: Clone + num_traits::Num + Signed + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// `sum_k c_k q^k` with finitely many nonzero `c_k`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<R> {
    terms: BTreeMap<i32, R>,
}

impl<R: Ring> LaurentPoly<R> {
    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0)
    }

    /// `c q^exp`.
    pub fn monomial(c: R, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn from_int(c: i64) -> Self
    where
        R: num_traits::FromPrimitive,
    {
        Self::constant(R::from_i64(c).expect("integer coefficient"))
    }

    /// The parameter `q` itself.
    pub fn q() -> Self {
        Self::monomial(R::one(), 1)
    }

    /// `q^exp`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(R::one(), exp)
    }

    /// `(-q)^exp`.
    pub fn neg_q_pow(exp: i32) -> Self {
        let c = if exp.rem_euclid(2) == 0 { R::one() } else { -R::one() };
        Self::monomial(c, exp)
    }

    pub fn coeff(&self, exp: i32) -> R {
        self.terms.get(&exp).cloned().unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &R)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent present.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Largest exponent present.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, c: R) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&exp) {
            Some(existing) => {
                *existing = existing.clone() + c;
                existing.is_zero()
            }
            None => {
                self.terms.insert(exp, c);
                false
            }
        };
        if remove {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, x)| (e, x.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Evaluates at a real `q`; exact coefficients are converted at the end.
    pub fn eval<T: Real>(&self, q: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (&e, c)| {
            acc + T::from_f64_lossy(c.to_f64().unwrap_or(f64::NAN)) * q.powi(e)
        })
    }

    /// Like [`Self::eval`], rejecting `q` outside `(0, 1)`.
    pub fn eval_checked<T: Real>(&self, q: T) -> Result<T> {
        if !(q > T::zero() && q < T::one()) {
            return Err(Error::QOutOfRange(q.to_f64_lossy()));
        }
        Ok(self.eval(q))
    }

    /// Value of `lim_{q -> 0}`; `None` when a negative power survives.
    pub fn limit_at_zero(&self) -> Option<R> {
        match self.valuation() {
            Some(v) if v < 0 => None,
            _ => Some(self.coeff(0)),
        }
    }
}

impl<R: Ring> Zero for LaurentPoly<R> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for LaurentPoly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Default for LaurentPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Ring> Add<&LaurentPoly<R>> for &LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn add(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<R: Ring> Sub<&LaurentPoly<R>> for &LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn sub(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<R: Ring> Mul<&LaurentPoly<R>> for &LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn mul(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: Ring> Neg for &LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn neg(self) -> LaurentPoly<R> {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr<LaurentPoly<R>> for LaurentPoly<R> {
            type Output = LaurentPoly<R>;
            fn $m(self, rhs: LaurentPoly<R>) -> LaurentPoly<R> {
                (&self).$m(&rhs)
            }
        }
        impl<R: Ring> $tr<&LaurentPoly<R>> for LaurentPoly<R> {
            type Output = LaurentPoly<R>;
            fn $m(self, rhs: &LaurentPoly<R>) -> LaurentPoly<R> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<R: Ring> Neg for LaurentPoly<R> {
    type Output = LaurentPoly<R>;
    fn neg(self) -> LaurentPoly<R> {
        -&self
    }
}

impl<R: Ring> fmt::Display for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let unit = abs.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{abs}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}
