//! Symbolic tensor-leg expressions.
//!
//! An [`Expr`] is a finite sum of `coeff * (w_1 ⊗ w_2 ⊗ ... ⊗ w_f)` where every
//! `w_k` is a word in the Toeplitz atoms (Fock factors) or in `z, z*` (circle
//! factors). Terms are kept in a `BTreeMap` keyed by their legs, which gives
//! the canonical form: duplicate legs merged, zero terms dropped, fixed order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::FromPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Ring};
use crate::scalar::Real;

/// Single-factor building block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    I,
    S,
    Sdag,
    Cq,
    Dq,
    /// `I - SS*`, the projection onto `e_0`.
    P,
    /// Multiplication by the circle coordinate.
    Z,
    Zbar,
}

impl Atom {
    pub fn adjoint(self) -> Atom {
        match self {
            Atom::S => Atom::Sdag,
            Atom::Sdag => Atom::S,
            Atom::Z => Atom::Zbar,
            Atom::Zbar => Atom::Z,
            a => a,
        }
    }

    pub fn is_circle(self) -> bool {
        matches!(self, Atom::Z | Atom::Zbar)
    }

    pub fn allowed_on(self, kind: FactorKind) -> bool {
        match kind {
            FactorKind::Fock => !self.is_circle(),
            FactorKind::Circle => matches!(self, Atom::I | Atom::Z | Atom::Zbar),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Atom::I => "I",
            Atom::S => "S",
            Atom::Sdag => "S*",
            Atom::Cq => "C_q",
            Atom::Dq => "d_q",
            Atom::P => "P",
            Atom::Z => "z",
            Atom::Zbar => "z*",
        }
    }
}

/// Kind of a tensor factor: `l^2(Z_+)` or a circle sampled on a phase grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorKind {
    Fock,
    Circle,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorKind::Fock => "fock",
            FactorKind::Circle => "circle",
        })
    }
}

/// Operator word on one factor, read left to right as an operator product.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LegWord(Vec<Atom>);

impl LegWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_atoms(vec![a])
    }

    /// Normalized word: identities dropped, `S*S` and `z z*` cancelled.
    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Self::raw(atoms).normalized()
    }

    /// Word kept exactly as given.
    pub fn raw(atoms: Vec<Atom>) -> Self {
        Self(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn normalized(self) -> Self {
        let mut out: Vec<Atom> = Vec::with_capacity(self.0.len());
        for a in self.0 {
            if a == Atom::I {
                continue;
            }
            let cancels = matches!(
                (out.last(), a),
                (Some(Atom::Sdag), Atom::S) | (Some(Atom::Z), Atom::Zbar) | (Some(Atom::Zbar), Atom::Z)
            );
            if cancels {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Self(out)
    }

    pub fn concat(&self, rhs: &LegWord) -> LegWord {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&rhs.0);
        Self::from_atoms(atoms)
    }

    pub fn adjoint(&self) -> LegWord {
        Self::from_atoms(self.0.iter().rev().map(|a| a.adjoint()).collect())
    }

    /// Largest index increase seen while the word acts on a basis vector.
    pub fn raise(&self) -> usize {
        let mut pos: isize = 0;
        let mut max: isize = 0;
        for a in self.0.iter().rev() {
            match a {
                Atom::S => {
                    pos += 1;
                    max = max.max(pos);
                }
                Atom::Sdag => pos -= 1,
                _ => {}
            }
        }
        max as usize
    }

    pub fn allowed_on(&self, kind: FactorKind) -> bool {
        self.0.iter().all(|a| a.allowed_on(kind))
    }
}

impl fmt::Display for LegWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for a in &self.0 {
            f.write_str(a.symbol())?;
        }
        Ok(())
    }
}

/// Coefficient field of an expression.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_int(v: i64) -> Self;
}

/// Coefficients that can be evaluated to a complex number at a given `q`.
pub trait EvalAt<T: Real>: Coeff {
    fn eval_at(&self, q: T) -> Complex<T>;
}

impl<R: Ring + FromPrimitive> Coeff for LaurentPoly<R> {
    fn nil() -> Self {
        num_traits::Zero::zero()
    }
    fn unit() -> Self {
        num_traits::One::one()
    }
    fn is_nil(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_int(v: i64) -> Self {
        Self::constant(R::from_i64(v).expect("integer coefficient"))
    }
}

impl<R: Ring + FromPrimitive, T: Real> EvalAt<T> for LaurentPoly<R> {
    fn eval_at(&self, q: T) -> Complex<T> {
        Complex::new(self.eval(q), T::zero())
    }
}

impl<T: Real> Coeff for Complex<T> {
    fn nil() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn unit() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn is_nil(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn negate(&self) -> Self {
        -*self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_int(v: i64) -> Self {
        Complex::new(T::from_f64_lossy(v as f64), T::zero())
    }
}

impl<T: Real> EvalAt<T> for Complex<T> {
    fn eval_at(&self, _q: T) -> Complex<T> {
        *self
    }
}

/// Finite sum of tensor-leg terms over a fixed factor signature.
#[derive(Clone, PartialEq)]
pub struct Expr<C> {
    kinds: Vec<FactorKind>,
    terms: BTreeMap<Vec<LegWord>, C>,
}

impl<C: Coeff> Expr<C> {
    pub fn zero(kinds: Vec<FactorKind>) -> Self {
        Self {
            kinds,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(kinds: Vec<FactorKind>, c: C) -> Self {
        let legs = vec![LegWord::identity(); kinds.len()];
        let mut e = Self::zero(kinds);
        e.insert(legs, c);
        e
    }

    pub fn identity(kinds: Vec<FactorKind>) -> Self {
        Self::scalar(kinds, C::unit())
    }

    /// Single term; every leg must be compatible with its factor kind.
    pub fn term(kinds: Vec<FactorKind>, legs: Vec<LegWord>, c: C) -> Result<Self> {
        if legs.len() != kinds.len() {
            return Err(Error::SizeMismatch {
                expected: kinds.len(),
                found: legs.len(),
            });
        }
        for (leg, &kind) in legs.iter().zip(&kinds) {
            if let Some(a) = leg.atoms().iter().find(|a| !a.allowed_on(kind)) {
                return Err(Error::AtomKind {
                    atom: a.symbol().to_string(),
                    kind: kind.to_string(),
                });
            }
        }
        let mut e = Self::zero(kinds);
        e.insert(legs, c);
        Ok(e)
    }

    /// All-Fock term from atom lists, one list per factor.
    pub fn fock(legs: &[&[Atom]], c: C) -> Self {
        let kinds = vec![FactorKind::Fock; legs.len()];
        let legs = legs.iter().map(|w| LegWord::from_atoms(w.to_vec())).collect();
        Self::term(kinds, legs, c).expect("fock legs are valid on fock factors")
    }

    /// Term from atom lists with explicit factor kinds.
    pub fn with_kinds(kinds: &[FactorKind], legs: &[&[Atom]], c: C) -> Result<Self> {
        let legs = legs.iter().map(|w| LegWord::from_atoms(w.to_vec())).collect();
        Self::term(kinds.to_vec(), legs, c)
    }

    pub fn kinds(&self) -> &[FactorKind] {
        &self.kinds
    }

    pub fn n_factors(&self) -> usize {
        self.kinds.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the canonical form has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[LegWord], &C)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff_of(&self, legs: &[LegWord]) -> Option<&C> {
        self.terms.get(legs)
    }

    fn insert(&mut self, legs: Vec<LegWord>, c: C) {
        if c.is_nil() {
            return;
        }
        let remove = match self.terms.get_mut(&legs) {
            Some(existing) => {
                *existing = existing.plus(&c);
                existing.is_nil()
            }
            None => {
                self.terms.insert(legs.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&legs);
        }
    }

    fn check_signature(&self, other: &Self) -> Result<()> {
        if self.kinds != other.kinds {
            return Err(Error::Signature(format!("{:?} vs {:?}", self.kinds, other.kinds)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_signature(other)?;
        let mut out = self.clone();
        for (legs, c) in &other.terms {
            out.insert(legs.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&C::unit().negate()))
    }

    /// Factor-wise leg concatenation, bilinear in the terms.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_signature(other)?;
        let mut out = Self::zero(self.kinds.clone());
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let legs = la.iter().zip(lb).map(|(a, b)| a.concat(b)).collect();
                out.insert(legs, ca.times(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.kinds.clone());
        for (legs, x) in &self.terms {
            out.insert(legs.clone(), x.times(c));
        }
        out
    }

    /// `self ⊗ other` on the concatenated factor list.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        let mut out = Self::zero(kinds);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let mut legs = la.clone();
                legs.extend(lb.iter().cloned());
                out.insert(legs, ca.times(cb));
            }
        }
        out
    }

    /// Conjugate coefficients, reverse words, swap `S <-> S*` and `z <-> z*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.kinds.clone());
        for (legs, c) in &self.terms {
            out.insert(legs.iter().map(LegWord::adjoint).collect(), c.conj());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Expr<D> {
        let mut out = Expr::zero(self.kinds.clone());
        for (legs, c) in &self.terms {
            out.insert(legs.clone(), f(c));
        }
        out
    }

    pub fn to_numeric<T: Real>(&self, q: T) -> Expr<Complex<T>>
    where
        C: EvalAt<T>,
    {
        self.map_coeffs(|c| c.eval_at(q))
    }

    /// Per-factor maximal index raise over all terms.
    pub fn raise(&self) -> Vec<usize> {
        let mut r = vec![0; self.kinds.len()];
        for legs in self.terms.keys() {
            for (k, leg) in legs.iter().enumerate() {
                r[k] = r[k].max(leg.raise());
            }
        }
        r
    }

    /// Applies the character `S -> s`, `S* -> sdag`, `C_q -> 1`, `d_q, P -> 0`
    /// on a Fock factor and removes that factor.
    pub fn tau_eval(&self, factor: usize, s: &C, sdag: &C) -> Result<Self> {
        if self.kinds.get(factor) != Some(&FactorKind::Fock) {
            return Err(Error::NotFock(factor));
        }
        let mut kinds = self.kinds.clone();
        kinds.remove(factor);
        let mut out = Self::zero(kinds);
        'terms: for (legs, c) in &self.terms {
            let mut value = c.clone();
            for a in legs[factor].atoms() {
                match a {
                    Atom::I | Atom::Cq => {}
                    Atom::S => value = value.times(s),
                    Atom::Sdag => value = value.times(sdag),
                    Atom::Dq | Atom::P => continue 'terms,
                    Atom::Z | Atom::Zbar => unreachable!("validated fock leg"),
                }
            }
            let mut rest = legs.clone();
            rest.remove(factor);
            out.insert(rest, value);
        }
        Ok(out)
    }

    /// Replaces a Fock factor by its symbol on the circle:
    /// `S -> z`, `S* -> z*`, `C_q -> 1`, `d_q, P -> 0`.
    pub fn to_circle(&self, factor: usize) -> Result<Self> {
        if self.kinds.get(factor) != Some(&FactorKind::Fock) {
            return Err(Error::NotFock(factor));
        }
        let mut kinds = self.kinds.clone();
        kinds[factor] = FactorKind::Circle;
        let mut out = Self::zero(kinds);
        'terms: for (legs, c) in &self.terms {
            let mut word = Vec::new();
            for a in legs[factor].atoms() {
                match a {
                    Atom::I | Atom::Cq => {}
                    Atom::S => word.push(Atom::Z),
                    Atom::Sdag => word.push(Atom::Zbar),
                    Atom::Dq | Atom::P => continue 'terms,
                    Atom::Z | Atom::Zbar => unreachable!("validated fock leg"),
                }
            }
            let mut legs = legs.clone();
            legs[factor] = LegWord::from_atoms(word);
            out.insert(legs, c.clone());
        }
        Ok(out)
    }

    /// Removes a factor, replacing each leg on it by a scalar; `None` drops the term.
    pub fn contract_factor(&self, factor: usize, value: impl Fn(&LegWord) -> Option<C>) -> Self {
        let mut kinds = self.kinds.clone();
        kinds.remove(factor);
        let mut out = Self::zero(kinds);
        for (legs, c) in &self.terms {
            if let Some(v) = value(&legs[factor]) {
                let mut rest = legs.clone();
                rest.remove(factor);
                out.insert(rest, c.times(&v));
            }
        }
        out
    }

    /// Evaluates a circle factor at phase zero (`z -> 1`) and removes it.
    pub fn circle_at_zero(&self, factor: usize) -> Result<Self> {
        if self.kinds.get(factor) != Some(&FactorKind::Circle) {
            return Err(Error::Signature(format!("factor {factor} is not a circle factor")));
        }
        Ok(self.contract_factor(factor, |_| Some(C::unit())))
    }

    /// Lifts a circle factor to a Fock factor: `z -> S`, `z* -> S*`.
    pub fn circle_to_fock(&self, factor: usize) -> Result<Self> {
        if self.kinds.get(factor) != Some(&FactorKind::Circle) {
            return Err(Error::Signature(format!("factor {factor} is not a circle factor")));
        }
        let mut kinds = self.kinds.clone();
        kinds[factor] = FactorKind::Fock;
        let mut out = Self::zero(kinds);
        for (legs, c) in &self.terms {
            let mut legs = legs.clone();
            let word = legs[factor]
                .atoms()
                .iter()
                .map(|a| match a {
                    Atom::Z => Atom::S,
                    Atom::Zbar => Atom::Sdag,
                    a => *a,
                })
                .collect();
            legs[factor] = LegWord::from_atoms(word);
            out.insert(legs, c.clone());
        }
        Ok(out)
    }

    /// Moves factor `from` to position `to`.
    pub fn move_factor(&self, from: usize, to: usize) -> Self {
        let mut kinds = self.kinds.clone();
        let k = kinds.remove(from);
        kinds.insert(to, k);
        let mut out = Self::zero(kinds);
        for (legs, c) in &self.terms {
            let mut legs = legs.clone();
            let l = legs.remove(from);
            legs.insert(to, l);
            out.insert(legs, c.clone());
        }
        out
    }
}

impl<R: Ring + FromPrimitive> Expr<LaurentPoly<R>> {
    /// Termwise `q -> 0` limit: `C_q -> I`, `d_q -> P`, coefficients to their
    /// value at zero. Fails if a negative power of `q` survives.
    pub fn limit_q0(&self) -> Result<Self> {
        let mut out = Self::zero(self.kinds.clone());
        for (legs, c) in &self.terms {
            let value = c
                .limit_at_zero()
                .ok_or_else(|| Error::Divergent(format!("coefficient {c}")))?;
            let legs = legs
                .iter()
                .map(|w| {
                    LegWord::from_atoms(
                        w.atoms()
                            .iter()
                            .map(|&a| match a {
                                Atom::Cq => Atom::I,
                                Atom::Dq => Atom::P,
                                a => a,
                            })
                            .collect(),
                    )
                })
                .collect();
            out.insert(legs, LaurentPoly::constant(value));
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (legs, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *c != C::unit() {
                write!(f, "({c})·")?;
            }
            for (j, leg) in legs.iter().enumerate() {
                if j > 0 {
                    f.write_str("⊗")?;
                }
                write!(f, "{leg}")?;
            }
            if legs.is_empty() {
                f.write_str("1")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr[{:?}]({self})", self.kinds)
    }
}

impl<C: Coeff> Add for &Expr<C> {
    type Output = Expr<C>;
    fn add(self, rhs: &Expr<C>) -> Expr<C> {
        self.try_add(rhs).expect("expression signatures differ")
    }
}

impl<C: Coeff> Sub for &Expr<C> {
    type Output = Expr<C>;
    fn sub(self, rhs: &Expr<C>) -> Expr<C> {
        self.try_sub(rhs).expect("expression signatures differ")
    }
}

impl<C: Coeff> Mul for &Expr<C> {
    type Output = Expr<C>;
    fn mul(self, rhs: &Expr<C>) -> Expr<C> {
        self.try_mul(rhs).expect("expression signatures differ")
    }
}

impl<C: Coeff> Neg for &Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        self.scale(&C::unit().negate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactExpr, Laurent, NumExpr};
    use num_complex::Complex64;
    use num_traits::One;
    use Atom::*;

    fn lq(exp: i32) -> Laurent {
        Laurent::q_pow(exp)
    }

    #[test]
    fn normalization_rules() {
        assert_eq!(LegWord::from_atoms(vec![Sdag, S]), LegWord::identity());
        assert_eq!(LegWord::from_atoms(vec![I, Cq, I]), LegWord::atom(Cq));
        assert_eq!(LegWord::from_atoms(vec![S, Sdag]).atoms(), &[S, Sdag]);
        assert_eq!(LegWord::from_atoms(vec![Z, Zbar]), LegWord::identity());
        assert_eq!(LegWord::from_atoms(vec![Sdag, Sdag, S, S, Cq]), LegWord::atom(Cq));
    }

    #[test]
    fn raise_tracks_upward_excursion() {
        assert_eq!(LegWord::atom(S).raise(), 1);
        assert_eq!(LegWord::atom(Sdag).raise(), 0);
        assert_eq!(LegWord::from_atoms(vec![Cq, S]).raise(), 1);
        assert_eq!(LegWord::raw(vec![Sdag, S]).raise(), 1);
        assert_eq!(LegWord::from_atoms(vec![S, S, Sdag]).raise(), 1);
        assert_eq!(LegWord::raw(vec![Sdag, S, S]).raise(), 2);
    }

    #[test]
    fn adjoint_of_simple_terms() {
        let e = ExactExpr::fock(&[&[S], &[]], Laurent::one());
        assert_eq!(e.adjoint(), ExactExpr::fock(&[&[Sdag], &[]], Laurent::one()));
        let t22 = ExactExpr::fock(&[&[Cq, S]], Laurent::one());
        let t11 = ExactExpr::fock(&[&[Sdag, Cq]], Laurent::one());
        assert_eq!(t22.adjoint(), t11);
    }

    #[test]
    fn adjoint_conjugates_numeric_coefficients() {
        let e = NumExpr::fock(&[&[S]], Complex64::new(1.0, 2.0));
        let a = e.adjoint();
        assert_eq!(a.coeff_of(&[LegWord::atom(Sdag)]), Some(&Complex64::new(1.0, -2.0)));
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let b = ExactExpr::fock(&[&[Cq, S], &[Dq]], lq(-1));
        let id = ExactExpr::identity(vec![FactorKind::Fock; 2]);
        assert_eq!(&id * &b, b);
        assert_eq!(&b * &id, b);
    }

    #[test]
    fn diagonal_products_keep_distinct_canonical_forms() {
        let d = ExactExpr::fock(&[&[Dq]], Laurent::one());
        let c = ExactExpr::fock(&[&[Cq]], Laurent::one());
        assert_ne!(&d * &c, &c * &d);
    }

    #[test]
    fn t12_t21_commute_symbolically_up_to_order() {
        // T12 T21 = -q d_q^2 = T21 T12
        let t12 = ExactExpr::fock(&[&[Dq]], -lq(1));
        let t21 = ExactExpr::fock(&[&[Dq]], Laurent::one());
        assert_eq!(&t12 * &t21, &t21 * &t12);
        assert_eq!(&t12 * &t21, ExactExpr::fock(&[&[Dq, Dq]], -lq(1)));
    }

    #[test]
    fn cancellation_to_zero() {
        let a = ExactExpr::fock(&[&[S], &[Dq]], lq(2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = ExactExpr::identity(vec![FactorKind::Fock]);
        let b = ExactExpr::identity(vec![FactorKind::Fock, FactorKind::Fock]);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn circle_atoms_rejected_on_fock_factors() {
        let err = ExactExpr::with_kinds(&[FactorKind::Fock], &[&[Z]], Laurent::one());
        assert!(matches!(err, Err(Error::AtomKind { .. })));
        let err = ExactExpr::with_kinds(&[FactorKind::Circle], &[&[S]], Laurent::one());
        assert!(err.is_err());
    }

    #[test]
    fn tau_values_on_base_entries() {
        let phase = Complex64::from_polar(1.0, 0.7);
        let t11 = NumExpr::fock(&[&[Sdag, Cq]], Complex64::new(1.0, 0.0));
        let t21 = NumExpr::fock(&[&[Dq]], Complex64::new(1.0, 0.0));
        let v = t11.tau_eval(0, &phase, &phase.conj()).unwrap();
        assert_eq!(v.n_factors(), 0);
        let c = v.coeff_of(&[]).unwrap();
        assert!((c - Complex64::from_polar(1.0, -0.7)).norm() < 1e-15);
        assert!(t21.tau_eval(0, &phase, &phase.conj()).unwrap().is_zero());
    }

    #[test]
    fn to_circle_maps_symbols() {
        let e = ExactExpr::fock(&[&[Cq, S], &[Dq]], Laurent::one());
        let c = e.to_circle(0).unwrap();
        assert_eq!(c.kinds(), &[FactorKind::Circle, FactorKind::Fock]);
        assert_eq!(
            c,
            ExactExpr::with_kinds(&[FactorKind::Circle, FactorKind::Fock], &[&[Z], &[Dq]], Laurent::one()).unwrap()
        );
        assert!(e.to_circle(1).unwrap().is_zero());
    }

    #[test]
    fn limit_q0_replaces_diagonal_atoms() {
        let e = ExactExpr::fock(&[&[Cq, S], &[Dq]], Laurent::one() - lq(2));
        let lim = e.limit_q0().unwrap();
        assert_eq!(lim, ExactExpr::fock(&[&[S], &[P]], Laurent::one()));
        let bad = ExactExpr::fock(&[&[S]], lq(-1));
        assert!(bad.limit_q0().is_err());
    }

    #[test]
    fn display_is_readable() {
        let e = ExactExpr::fock(&[&[Cq, S], &[], &[Dq]], Laurent::one());
        assert_eq!(e.to_string(), "C_qS⊗I⊗d_q");
    }
}
