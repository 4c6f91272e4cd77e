//! The free *-algebra on `z_a^alpha`, `(z_a^alpha)*`: defining relations of
//! `Pol(Mat_n)_q` (explicit for `n = 2`, R-matrix generated in general),
//! monomials, the phase automorphisms `Psi`, the embedding `zeta` and the
//! element `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Coeff, EvalAt, Expr, FactorKind};
use crate::{Complex64, Laurent, Rational};

/// Largest `n` for which relations are generated.
pub const GENERATED_MAX_N: u8 = 3;

/// `z_lower^upper`, possibly starred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Gen {
    pub lower: u8,
    pub upper: u8,
    pub starred: bool,
}

impl Gen {
    pub const fn z(lower: u8, upper: u8) -> Self {
        Self {
            lower,
            upper,
            starred: false,
        }
    }

    pub const fn zs(lower: u8, upper: u8) -> Self {
        Self {
            lower,
            upper,
            starred: true,
        }
    }

    pub fn adjoint(self) -> Self {
        Self {
            starred: !self.starred,
            ..self
        }
    }

    pub fn unstarred(self) -> Self {
        Self { starred: false, ..self }
    }

    /// All `2 n^2` symbols, unstarred first.
    pub fn all(n: u8) -> Vec<Gen> {
        let mut out = Vec::new();
        for starred in [false, true] {
            for lower in 1..=n {
                for upper in 1..=n {
                    out.push(Gen { lower, upper, starred });
                }
            }
        }
        out
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z_{}^{}", self.lower, self.upper)?;
        if self.starred {
            f.write_str("*")?;
        }
        Ok(())
    }
}

/// Noncommutative polynomial in the generators.
#[derive(Clone, PartialEq)]
pub struct FreeElement<C> {
    terms: BTreeMap<Vec<Gen>, C>,
}

impl<C: Coeff> FreeElement<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn scalar(c: C) -> Self {
        let mut e = Self::zero();
        e.insert(Vec::new(), c);
        e
    }

    pub fn one() -> Self {
        Self::scalar(C::unit())
    }

    pub fn word(word: Vec<Gen>, c: C) -> Self {
        let mut e = Self::zero();
        e.insert(word, c);
        e
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(vec![g], C::unit())
    }

    fn insert(&mut self, word: Vec<Gen>, c: C) {
        if c.is_nil() {
            return;
        }
        let remove = match self.terms.get_mut(&word) {
            Some(x) => {
                *x = x.plus(&c);
                x.is_nil()
            }
            None => {
                self.terms.insert(word.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&word);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Gen], &C)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn coeff_of(&self, word: &[Gen]) -> Option<&C> {
        self.terms.get(word)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::unit().negate()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.insert(w, ca.times(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.insert(w.clone(), x.times(c));
        }
        out
    }

    /// Reversed words, flipped stars, conjugated coefficients.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.insert(w.iter().rev().map(|g| g.adjoint()).collect(), c.conj());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> FreeElement<D> {
        let mut out = FreeElement::zero();
        for (w, c) in &self.terms {
            out.insert(w.clone(), f(c));
        }
        out
    }

    /// Multiplies every occurrence of `g` by `c` (and of `g*` by `conj(c)`).
    pub fn scale_generator(&self, g: Gen, c: &C) -> Self {
        let g = g.unstarred();
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            let mut coeff = x.clone();
            for h in w {
                if h.unstarred() == g {
                    coeff = coeff.times(&if h.starred { c.conj() } else { c.clone() });
                }
            }
            out.insert(w.clone(), coeff);
        }
        out
    }

    /// `*`-homomorphic substitution of generator images.
    pub fn evaluate(&self, kinds: &[FactorKind], mut image: impl FnMut(Gen) -> Result<Expr<C>>) -> Result<Expr<C>> {
        let mut cache: BTreeMap<Gen, Expr<C>> = BTreeMap::new();
        let mut sum = Expr::zero(kinds.to_vec());
        for (w, c) in &self.terms {
            let mut prod = Expr::scalar(kinds.to_vec(), c.clone());
            for g in w {
                if !cache.contains_key(g) {
                    cache.insert(*g, image(*g)?);
                }
                prod = prod.try_mul(&cache[g])?;
                if prod.is_zero() {
                    break;
                }
            }
            sum = sum.try_add(&prod)?;
        }
        Ok(sum)
    }
}

impl<C: Coeff> fmt::Display for FreeElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for g in w {
                write!(f, " {g}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for FreeElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeElement({self})")
    }
}

pub type ExactElement = FreeElement<Laurent>;
pub type NumElement = FreeElement<Complex64>;

impl ExactElement {
    pub fn at_q(&self, q: f64) -> NumElement {
        self.map_coeffs(|c| c.eval_at(q))
    }
}

/// An element asserted to vanish in the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub label: String,
    pub element: ExactElement,
}

impl Relation {
    pub fn new(label: impl Into<String>, element: ExactElement) -> Self {
        Self {
            label: label.into(),
            element,
        }
    }

    pub fn adjoint(&self) -> Relation {
        Relation::new(format!("({})*", self.label), self.element.adjoint())
    }
}

fn lq(e: i32) -> Laurent {
    Laurent::q_pow(e)
}

fn one() -> Laurent {
    Laurent::one()
}

fn z(a: u8, alpha: u8) -> ExactElement {
    FreeElement::gen(Gen::z(a, alpha))
}

fn zs(a: u8, alpha: u8) -> ExactElement {
    FreeElement::gen(Gen::zs(a, alpha))
}

/// `z_a^alpha (z_a^alpha)*`.
fn zzs(a: u8, alpha: u8) -> ExactElement {
    z(a, alpha).mul(&zs(a, alpha))
}

/// `q - q^-1`.
fn q_minus_inv() -> Laurent {
    &lq(1) - &lq(-1)
}

/// `1 - q^2`.
fn one_minus_q2() -> Laurent {
    &one() - &lq(2)
}

/// The displayed `n = 2` relation list: six holomorphic, four diagonal mixed
/// and six off-diagonal mixed relations.
pub fn explicit_relations_n2() -> Vec<Relation> {
    let c = |x: Laurent| ExactElement::scalar(x);
    let q = || lq(1);
    let rel = |label: &str, lhs: ExactElement, rhs: ExactElement| Relation::new(label, lhs.sub(&rhs));
    vec![
        rel(
            "z11 z21 = q z21 z11",
            z(1, 1).mul(&z(2, 1)),
            z(2, 1).mul(&z(1, 1)).scale(&q()),
        ),
        rel("z21 z12 = z12 z21", z(2, 1).mul(&z(1, 2)), z(1, 2).mul(&z(2, 1))),
        rel(
            "z11 z12 = q z12 z11",
            z(1, 1).mul(&z(1, 2)),
            z(1, 2).mul(&z(1, 1)).scale(&q()),
        ),
        rel(
            "z21 z22 = q z22 z21",
            z(2, 1).mul(&z(2, 2)),
            z(2, 2).mul(&z(2, 1)).scale(&q()),
        ),
        rel(
            "z11 z22 - z22 z11 = (q - q^-1) z12 z21",
            z(1, 1).mul(&z(2, 2)).sub(&z(2, 2).mul(&z(1, 1))),
            z(1, 2).mul(&z(2, 1)).scale(&q_minus_inv()),
        ),
        rel(
            "z12 z22 = q z22 z12",
            z(1, 2).mul(&z(2, 2)),
            z(2, 2).mul(&z(1, 2)).scale(&q()),
        ),
        rel(
            "z11* z11 = q^2 z11 z11* - (1 - q^2)(z21 z21* + z12 z12*) + q^-2 (1 - q^2)^2 z22 z22* + 1 - q^2",
            zs(1, 1).mul(&z(1, 1)),
            zzs(1, 1)
                .scale(&lq(2))
                .sub(&zzs(2, 1).add(&zzs(1, 2)).scale(&one_minus_q2()))
                .add(&zzs(2, 2).scale(&(&lq(-2) * &one_minus_q2().pow(2))))
                .add(&c(one_minus_q2())),
        ),
        rel(
            "z21* z21 = q^2 z21 z21* - (1 - q^2) z22 z22* + (1 - q^2)",
            zs(2, 1).mul(&z(2, 1)),
            zzs(2, 1)
                .scale(&lq(2))
                .sub(&zzs(2, 2).scale(&one_minus_q2()))
                .add(&c(one_minus_q2())),
        ),
        rel(
            "z12* z12 = q^2 z12 z12* - (1 - q^2) z22 z22* + (1 - q^2)",
            zs(1, 2).mul(&z(1, 2)),
            zzs(1, 2)
                .scale(&lq(2))
                .sub(&zzs(2, 2).scale(&one_minus_q2()))
                .add(&c(one_minus_q2())),
        ),
        rel(
            "z22* z22 = q^2 z22 z22* + (1 - q^2)",
            zs(2, 2).mul(&z(2, 2)),
            zzs(2, 2).scale(&lq(2)).add(&c(one_minus_q2())),
        ),
        rel(
            "z11* z21 - q z21 z11* = (q - q^-1) z22 z12*",
            zs(1, 1).mul(&z(2, 1)).sub(&z(2, 1).mul(&zs(1, 1)).scale(&q())),
            z(2, 2).mul(&zs(1, 2)).scale(&q_minus_inv()),
        ),
        rel(
            "z22* z21 = q z21 z22*",
            zs(2, 2).mul(&z(2, 1)),
            z(2, 1).mul(&zs(2, 2)).scale(&q()),
        ),
        rel(
            "z11* z12 - q z12 z11* = (q - q^-1) z22 z21*",
            zs(1, 1).mul(&z(1, 2)).sub(&z(1, 2).mul(&zs(1, 1)).scale(&q())),
            z(2, 2).mul(&zs(2, 1)).scale(&q_minus_inv()),
        ),
        rel(
            "z22* z12 = q z12 z22*",
            zs(2, 2).mul(&z(1, 2)),
            z(1, 2).mul(&zs(2, 2)).scale(&q()),
        ),
        rel("z11* z22 = z22 z11*", zs(1, 1).mul(&z(2, 2)), z(2, 2).mul(&zs(1, 1))),
        rel("z12* z21 = z21 z12*", zs(1, 2).mul(&z(2, 1)), z(2, 1).mul(&zs(1, 2))),
    ]
}

/// Closes a relation list under the involution, dropping adjoints that are
/// proportional to a relation already present.
pub fn close_under_involution(rels: &[Relation]) -> Vec<Relation> {
    let mut out: Vec<Relation> = rels.to_vec();
    for r in rels {
        let a = r.adjoint();
        if !out.iter().any(|x| proportional(&x.element, &a.element)) {
            out.push(a);
        }
    }
    out
}

/// `R_{ij}^{kl}`.
pub fn r_matrix(i: u8, j: u8, k: u8, l: u8) -> Laurent {
    if i != j && i == k && j == l {
        lq(-1)
    } else if i == j && j == k && k == l {
        one()
    } else if i == j && k == l && l > j {
        -(&lq(-2) - &one())
    } else {
        Laurent::zero()
    }
}

/// All index instances of the holomorphic, antiholomorphic and mixed
/// relations, zero relations dropped.
pub fn generated_relations(n: u8) -> Result<Vec<Relation>> {
    if n > GENERATED_MAX_N {
        return Err(Error::Guard {
            what: "n",
            value: n as usize,
            limit: GENERATED_MAX_N as usize,
        });
    }
    let idx: Vec<u8> = (1..=n).collect();
    let mut holo = Vec::new();
    for &a in &idx {
        for &alpha in &idx {
            for &b in &idx {
                for &beta in &idx {
                    let lhs = z(a, alpha).mul(&z(b, beta));
                    let swapped = z(b, beta).mul(&z(a, alpha));
                    let tag = format!("a={a} alpha={alpha} b={b} beta={beta}");
                    if (a == b && alpha < beta) || (a < b && alpha == beta) {
                        holo.push(Relation::new(format!("zaa1 {tag}"), lhs.sub(&swapped.scale(&lq(1)))));
                    } else if alpha < beta && a > b {
                        holo.push(Relation::new(format!("zaa2 {tag}"), lhs.sub(&swapped)));
                    } else if alpha < beta && a < b {
                        let cross = z(a, beta).mul(&z(b, alpha)).scale(&q_minus_inv());
                        holo.push(Relation::new(format!("zaa3 {tag}"), lhs.sub(&swapped).sub(&cross)));
                    }
                }
            }
        }
    }
    let mut out = holo.clone();
    out.extend(
        holo.iter()
            .map(|r| Relation::new(r.label.replacen("zaa", "conj zaa", 1), r.element.adjoint())),
    );
    for &a in &idx {
        for &alpha in &idx {
            for &b in &idx {
                for &beta in &idx {
                    let mut rhs = ExactElement::zero();
                    for &a2 in &idx {
                        for &b2 in &idx {
                            let r1 = r_matrix(b, a, b2, a2);
                            if r1.is_zero() {
                                continue;
                            }
                            for &al2 in &idx {
                                for &be2 in &idx {
                                    let r2 = r_matrix(beta, alpha, be2, al2);
                                    if r2.is_zero() {
                                        continue;
                                    }
                                    let c = &(&r1 * &r2) * &lq(2);
                                    rhs = rhs.add(&z(a2, al2).mul(&zs(b2, be2)).scale(&c));
                                }
                            }
                        }
                    }
                    if a == b && alpha == beta {
                        rhs = rhs.add(&ExactElement::scalar(one_minus_q2()));
                    }
                    let element = zs(b, beta).mul(&z(a, alpha)).sub(&rhs);
                    if !element.is_zero() {
                        out.push(Relation::new(
                            format!("zaa4 a={a} alpha={alpha} b={b} beta={beta}"),
                            element,
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Equality up to a nonzero scalar, by exact cross-multiplication.
pub fn proportional(a: &ExactElement, b: &ExactElement) -> bool {
    if a.len() != b.len() || a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let (w0, ca0) = a.terms().next().expect("nonempty");
    let Some(cb0) = b.coeff_of(w0) else {
        return false;
    };
    a.terms().all(|(w, ca)| match b.coeff_of(w) {
        Some(cb) => ca * cb0 == cb * ca0,
        None => false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchedPair {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub matched: Vec<MatchedPair>,
    pub unmatched_left: Vec<String>,
    pub unmatched_right: Vec<String>,
    pub complete: bool,
}

/// Pairs each relation of `a` with an unused proportional relation of `b`.
pub fn match_relation_sets(a: &[Relation], b: &[Relation]) -> MatchReport {
    let mut used = vec![false; b.len()];
    let mut matched = Vec::new();
    let mut unmatched_left = Vec::new();
    for ra in a {
        let hit = b
            .iter()
            .enumerate()
            .find(|(k, rb)| !used[*k] && proportional(&ra.element, &rb.element));
        match hit {
            Some((k, rb)) => {
                used[k] = true;
                matched.push(MatchedPair {
                    left: ra.label.clone(),
                    right: rb.label.clone(),
                });
            }
            None => unmatched_left.push(ra.label.clone()),
        }
    }
    let unmatched_right: Vec<String> = b
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(r, _)| r.label.clone())
        .collect();
    let complete = unmatched_left.is_empty() && unmatched_right.is_empty();
    MatchReport {
        matched,
        unmatched_left,
        unmatched_right,
        complete,
    }
}

/// Exponent matrix `A`; `a[j-1][k-1]` is the power of `z_j^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMatrix {
    pub entries: Vec<Vec<u32>>,
}

impl MonomialMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            entries: vec![vec![0; n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn with(mut self, j: usize, k: usize, power: u32) -> Self {
        self.entries[j - 1][k - 1] = power;
        self
    }

    /// `|A| = sum a_{jk}`.
    pub fn grade(&self) -> u32 {
        self.entries.iter().flatten().sum()
    }

    /// Every matrix of the given grade.
    pub fn all_of_grade(n: usize, grade: u32) -> Vec<MonomialMatrix> {
        let cells = n * n;
        let mut out = Vec::new();
        let mut current = vec![0u32; cells];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, n: usize, out: &mut Vec<MonomialMatrix>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MonomialMatrix {
                    entries: cur.chunks(n).map(|r| r.to_vec()).collect(),
                });
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, n, out);
            }
        }
        rec(0, grade, &mut current, n, &mut out);
        out
    }
}

/// `z(A) = (z_n^n)^{a_nn} ... (z_n^1)^{a_n1} ... (z_1^n)^{a_1n} ... (z_1^1)^{a_11}`.
pub fn monomial(a: &MonomialMatrix) -> ExactElement {
    let n = a.n() as u8;
    let mut word = Vec::new();
    for j in (1..=n).rev() {
        for k in (1..=n).rev() {
            for _ in 0..a.entries[j as usize - 1][k as usize - 1] {
                word.push(Gen::z(j, k));
            }
        }
    }
    ExactElement::word(word, one())
}

pub fn grade(a: &MonomialMatrix) -> u32 {
    a.grade()
}

/// Which index of `z_j^k` carries the phase of `Psi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiConvention {
    /// `z_j^k -> e^{i phi_j} z_j^k`.
    Lower,
    /// `z_j^k -> e^{i phi_k} z_j^k`.
    Upper,
}

/// Net phase weights `(w_1, w_2)` of a word: `Psi` multiplies it by
/// `e^{i (w_1 phi_1 + w_2 phi_2)}`.
pub fn psi_weights(word: &[Gen], conv: PsiConvention) -> [i32; 2] {
    let mut w = [0i32; 2];
    for g in word {
        let idx = match conv {
            PsiConvention::Lower => g.lower,
            PsiConvention::Upper => g.upper,
        } as usize;
        w[idx - 1] += if g.starred { -1 } else { 1 };
    }
    w
}

/// `Psi_{phi1, phi2}` on a numeric element.
pub fn psi_automorphism(phi1: f64, phi2: f64, e: &NumElement, conv: PsiConvention) -> NumElement {
    let mut out = NumElement::zero();
    for (w, c) in e.terms() {
        let [a, b] = psi_weights(w, conv);
        let phase = Complex::from_polar(1.0, a as f64 * phi1 + b as f64 * phi2);
        out.insert(w.to_vec(), c * phase);
    }
    out
}

/// `Psi_{phi1, phi2}(e) = e` for all phases: every word has zero weight.
pub fn psi_invariant(e: &ExactElement, conv: PsiConvention) -> bool {
    e.terms().all(|(w, _)| psi_weights(w, conv) == [0, 0])
}

/// `zeta(z_k^j) = (-q)^{k-n} t_{n+k, n+j}`: the coefficient and the index pair.
pub fn zeta_image(g: Gen, n: u8) -> Result<(Laurent, (usize, usize))> {
    if g.starred {
        return Err(Error::Construction(format!("{g} is starred; use the adjoint")));
    }
    let (k, j) = (g.lower, g.upper);
    if k == 0 || j == 0 || k > n || j > n {
        return Err(Error::IndexOutOfRange {
            index: k.max(j) as usize,
            max: n as usize,
        });
    }
    let coeff = Laurent::neg_q_pow(k as i32 - n as i32);
    Ok((coeff, ((n + k) as usize, (n + j) as usize)))
}

/// The two positive factors of `x`.
pub fn element_x_factors() -> (ExactElement, ExactElement) {
    let first = ExactElement::one().sub(&zzs(2, 1)).sub(&zzs(2, 2));
    let second = ExactElement::one().sub(&zzs(1, 2)).sub(&zzs(2, 2));
    (first, second)
}

/// `x = (I - z21 z21* - z22 z22*)(I - z12 z12* - z22 z22*)`.
pub fn element_x() -> ExactElement {
    let (a, b) = element_x_factors();
    a.mul(&b)
}

/// Number of products before like words are merged.
pub fn element_x_formal_terms() -> usize {
    let (a, b) = element_x_factors();
    a.len() * b.len()
}

/// A monomial sending the coherent vacuum to a multiple of `e_k ⊗ e_j ⊗ e_m`.
#[derive(Clone, Debug)]
pub struct CoherentMonomial {
    pub k: u32,
    pub j: u32,
    pub m: u32,
    pub element: ExactElement,
}

impl CoherentMonomial {
    /// The positive constant `c` with `M v_0 = c e_k ⊗ e_j ⊗ e_m`.
    pub fn normalization(&self, q: f64) -> f64 {
        let ladder = |n: u32| (1..=n).map(|i| (1.0 - q.powi(2 * i as i32)).sqrt()).product::<f64>();
        ladder(self.k) * ladder(self.j) * ladder(self.m)
    }
}

/// `(z_2^2)^j (z_1^2)^k (z_2^1)^m`: raises the third factor first, then the
/// first, then the middle one, each while the middle index is still zero.
pub fn coherent_monomial(k: u32, j: u32, m: u32) -> CoherentMonomial {
    let mut word = Vec::new();
    word.extend(std::iter::repeat_n(Gen::z(2, 2), j as usize));
    word.extend(std::iter::repeat_n(Gen::z(1, 2), k as usize));
    word.extend(std::iter::repeat_n(Gen::z(2, 1), m as usize));
    CoherentMonomial {
        k,
        j,
        m,
        element: ExactElement::word(word, one()),
    }
}

/// Random element of degree at most `max_degree` with `terms` words and
/// coefficients uniform in the unit square.
pub fn random_element(rng: &mut impl Rng, n: u8, max_degree: usize, terms: usize) -> NumElement {
    let gens = Gen::all(n);
    let mut e = NumElement::zero();
    for _ in 0..terms {
        let len = rng.random_range(0..=max_degree);
        let word: Vec<Gen> = (0..len).map(|_| gens[rng.random_range(0..gens.len())]).collect();
        let c = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        e.insert(word, c);
    }
    e
}

#[derive(Clone, Debug, Serialize)]
pub struct CoeffJson {
    pub exponent: i32,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub coeff: Vec<CoeffJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationJson {
    pub label: String,
    pub terms: Vec<TermJson>,
}

pub fn relation_json(r: &Relation) -> RelationJson {
    RelationJson {
        label: r.label.clone(),
        terms: r
            .element
            .terms()
            .map(|(w, c)| TermJson {
                word: w.iter().map(Gen::to_string).collect(),
                coeff: c
                    .terms()
                    .map(|(e, v): (i32, &Rational)| CoeffJson {
                        exponent: e,
                        value: v.to_string(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Numerical rank of a family of operators, each sampled on the same probe
/// vectors and flattened into one row.
pub fn numerical_rank(rows: &[Vec<Complex64>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let k = rows.len();
    let mut gram = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = rows[i].iter().zip(&rows[j]).map(|(a, b)| a.conj() * b).sum();
        }
    }
    let sv = gram.singular_values();
    let top = sv.max();
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// The words `monomial(A) monomial(B)*` with `|A| + |B| <= max_grade`.
pub fn mixed_monomials(n: usize, max_grade: u32) -> Vec<ExactElement> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for total in 0..=max_grade {
        for ga in 0..=total {
            for a in MonomialMatrix::all_of_grade(n, ga) {
                for b in MonomialMatrix::all_of_grade(n, total - ga) {
                    let e = monomial(&a).mul(&monomial(&b).adjoint());
                    let key: Vec<Vec<Gen>> = e.terms().map(|(w, _)| w.to_vec()).collect();
                    if seen.insert(key) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}
