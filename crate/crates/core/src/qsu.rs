//! Representations of `C[SU_n]_q`: the base `SU_2` representation on
//! `l^2(Z_+)`, its embeddings `phi_i`, tensor representations indexed by
//! reduced words, characters, and the defining relations of `C[SL_n]_q`.

use num_complex::Complex;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Atom, Coeff, EvalAt, Expr, FactorKind};
use crate::permutations::{is_reduced, Permutation, Word};
use crate::state::{max_residual, Binding};
use crate::{Complex64, ExactExpr, Laurent, NumExpr};

/// Largest `n` for which the q-determinant is expanded.
pub const QDET_MAX_N: usize = 4;

/// Images of the matrix coefficients `t_{ij}`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMatrix<C: Coeff> {
    n: usize,
    kinds: Vec<FactorKind>,
    entries: Vec<Expr<C>>,
}

impl<C: Coeff> GenMatrix<C> {
    pub fn from_entries(n: usize, kinds: Vec<FactorKind>, entries: Vec<Expr<C>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| e.kinds() != kinds.as_slice()) {
            return Err(Error::Signature(format!("{:?} vs {:?}", e.kinds(), kinds)));
        }
        Ok(Self { n, kinds, entries })
    }

    /// `t_{ij} -> delta_{ij} I` on the given factors.
    pub fn identity(n: usize, kinds: Vec<FactorKind>) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Expr::identity(kinds.clone())
                } else {
                    Expr::zero(kinds.clone())
                }
            })
            .collect();
        Self { n, kinds, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kinds(&self) -> &[FactorKind] {
        &self.kinds
    }

    /// Image of `t_{ij}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Expr<C> {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entry_checked(&self, i: usize, j: usize) -> Result<&Expr<C>> {
        for x in [i, j] {
            if x == 0 || x > self.n {
                return Err(Error::IndexOutOfRange { index: x, max: self.n });
            }
        }
        Ok(self.entry(i, j))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GenMatrix<D> {
        GenMatrix {
            n: self.n,
            kinds: self.kinds.clone(),
            entries: self.entries.iter().map(|e| e.map_coeffs(&f)).collect(),
        }
    }
}

fn fock1() -> Vec<FactorKind> {
    vec![FactorKind::Fock]
}

/// `T_11 = S* C_q`, `T_12 = -q d_q`, `T_21 = d_q`, `T_22 = C_q S`.
pub fn base_rep() -> GenMatrix<Laurent> {
    let one = Laurent::one();
    let entries = vec![
        ExactExpr::fock(&[&[Atom::Sdag, Atom::Cq]], one.clone()),
        ExactExpr::fock(&[&[Atom::Dq]], -Laurent::q()),
        ExactExpr::fock(&[&[Atom::Dq]], one.clone()),
        ExactExpr::fock(&[&[Atom::Cq, Atom::S]], one),
    ];
    GenMatrix {
        n: 2,
        kinds: fock1(),
        entries,
    }
}

/// `pi_i = pi ∘ phi_i`: the base representation on rows/columns `i, i+1`.
pub fn phi_embed(i: usize, n: usize) -> Result<GenMatrix<Laurent>> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: n.saturating_sub(1),
        });
    }
    let base = base_rep();
    let mut m = GenMatrix::identity(n, fock1());
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        m.entries[(i - 1 + a) * n + (i - 1 + b)] = base.entry(a + 1, b + 1).clone();
    }
    Ok(m)
}

/// Order in which the comultiplication is iterated when tensoring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `t_{cd} -> sum t_{c i_1} ⊗ t_{i_1 i_2} ⊗ ... ⊗ t_{i_{m-1} d}`.
    LeftToRight,
    /// The opposite comultiplication: `t_{cd} -> sum t_{i_1 d} ⊗ ... ⊗ t_{c i_{m-1}}`.
    RightToLeft,
}

/// `pi_w = pi_{j_1} ⊗ ... ⊗ pi_{j_m}` for a reduced word `w`.
pub fn tensor_rep(w: &Word, n: usize) -> Result<GenMatrix<Laurent>> {
    tensor_rep_with(w, n, Convention::LeftToRight, false)
}

pub fn tensor_rep_with(w: &Word, n: usize, conv: Convention, allow_nonreduced: bool) -> Result<GenMatrix<Laurent>> {
    if !allow_nonreduced && !is_reduced(w, n)? {
        return Err(Error::NotReduced(w.letters.clone()));
    }
    let mut g = GenMatrix::identity(n, Vec::new());
    for &letter in &w.letters {
        let phi = phi_embed(letter, n)?;
        let mut kinds = g.kinds.clone();
        kinds.push(FactorKind::Fock);
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let mut sum = ExactExpr::zero(kinds.clone());
                for k in 1..=n {
                    let (left, right) = match conv {
                        Convention::LeftToRight => (g.entry(i, k), phi.entry(k, j)),
                        Convention::RightToLeft => (g.entry(k, j), phi.entry(i, k)),
                    };
                    if left.is_zero() || right.is_zero() {
                        continue;
                    }
                    sum = &sum + &left.tensor(right);
                }
                entries.push(sum);
            }
        }
        g = GenMatrix { n, kinds, entries };
    }
    Ok(g)
}

/// One-dimensional character `t_{ij} -> e^{i phi_j} delta_{ij}`.
pub fn chi_phi(phases: &[f64]) -> Result<GenMatrix<Complex64>> {
    let n = phases.len();
    let sum: f64 = phases.iter().sum();
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = sum.rem_euclid(two_pi);
    if r.min(two_pi - r) > 1e-9 {
        return Err(Error::PhaseSum(sum));
    }
    let entries = (0..n * n)
        .map(|k| {
            if k / n == k % n {
                NumExpr::scalar(Vec::new(), Complex::from_polar(1.0, phases[k % n]))
            } else {
                NumExpr::zero(Vec::new())
            }
        })
        .collect();
    Ok(GenMatrix {
        n,
        kinds: Vec::new(),
        entries,
    })
}

/// `tau_phi` on one Fock factor: `S -> e^{i phi}`, `C_q -> 1`, `d_q, P -> 0`.
pub fn tau_eval(e: &NumExpr, factor: usize, phi: f64) -> Result<NumExpr> {
    let s = Complex::from_polar(1.0, phi);
    e.tau_eval(factor, &s, &s.conj())
}

fn c_pow<C: Coeff>(x: &C, k: usize) -> C {
    (0..k).fold(C::unit(), |acc, _| acc.times(x))
}

/// Row-ordered q-determinant `sum_w (-q)^{l(w)} t_{1 w(1)} ... t_{n w(n)}`.
pub fn qdet<C: Coeff>(g: &GenMatrix<C>, q: &C) -> Result<Expr<C>> {
    if g.n > QDET_MAX_N {
        return Err(Error::Guard {
            what: "n",
            value: g.n,
            limit: QDET_MAX_N,
        });
    }
    let minus_q = q.negate();
    let mut sum = Expr::zero(g.kinds.clone());
    for w in Permutation::all(g.n) {
        let mut prod = Expr::identity(g.kinds.clone());
        for i in 1..=g.n {
            prod = prod.try_mul(g.entry(i, w.apply(i)))?;
            if prod.is_zero() {
                break;
            }
        }
        sum = sum.try_add(&prod.scale(&c_pow(&minus_q, w.length())))?;
    }
    Ok(sum)
}

/// A relation `lhs - rhs` expected to vanish.
#[derive(Clone, Debug)]
pub struct NamedResidual<C: Coeff> {
    pub label: String,
    pub expr: Expr<C>,
}

/// Defining relations of `C[SL_n]_q`, unitarity, and `det_q t = 1`, as
/// expressions that should vanish. `q_inv` must be the inverse of `q`.
pub fn slq_relations<C: Coeff>(g: &GenMatrix<C>, q: &C, q_inv: &C) -> Result<Vec<NamedResidual<C>>> {
    let n = g.n;
    let t = |i: usize, j: usize| g.entry(i, j);
    let mut out = Vec::new();
    let mut push = |label: String, e: Expr<C>| out.push(NamedResidual { label, expr: e });
    let q_minus_inv = q.plus(&q_inv.negate());
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let lhs = t(i, j).try_mul(t(k, l))?;
                    let rev = t(k, l).try_mul(t(i, j))?;
                    if i == k && j < l {
                        push(
                            format!("t{i}{j} t{k}{l} = q t{k}{l} t{i}{j}"),
                            lhs.try_sub(&rev.scale(q))?,
                        );
                    }
                    if j == l && i < k {
                        push(
                            format!("t{i}{j} t{k}{l} = q t{k}{l} t{i}{j}"),
                            lhs.try_sub(&rev.scale(q))?,
                        );
                    }
                    if i < k && j > l {
                        push(format!("t{i}{j} t{k}{l} = t{k}{l} t{i}{j}"), lhs.try_sub(&rev)?);
                    }
                    if i < k && j < l {
                        let cross = t(i, l).try_mul(t(k, j))?.scale(&q_minus_inv);
                        push(
                            format!("t{i}{j} t{k}{l} - t{k}{l} t{i}{j} = (q - q^-1) t{i}{l} t{k}{j}"),
                            lhs.try_sub(&rev)?.try_sub(&cross)?,
                        );
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            let mut row = Expr::zero(g.kinds.clone());
            let mut col = Expr::zero(g.kinds.clone());
            for k in 1..=n {
                row = row.try_add(&t(i, k).try_mul(&t(j, k).adjoint())?)?;
                col = col.try_add(&t(k, i).adjoint().try_mul(t(k, j))?)?;
            }
            if i == j {
                row = row.try_sub(&Expr::identity(g.kinds.clone()))?;
                col = col.try_sub(&Expr::identity(g.kinds.clone()))?;
            }
            push(format!("sum_k t{i}k t{j}k* = delta"), row);
            push(format!("sum_k tk{i}* tk{j} = delta"), col);
        }
    }
    if n <= QDET_MAX_N {
        let d = qdet(g, q)?.try_sub(&Expr::identity(g.kinds.clone()))?;
        push("det_q t = 1".to_string(), d);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    pub label: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub q: f64,
    pub n_trunc: usize,
    pub tol: f64,
    pub entries: Vec<ResidualEntry>,
    pub pass: bool,
}

/// Evaluates named residual expressions on random interior vectors.
pub fn residual_report<C: EvalAt<f64>>(
    items: &[NamedResidual<C>],
    q: f64,
    n: usize,
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<ResidualReport> {
    let mut entries = Vec::with_capacity(items.len());
    for item in items {
        let binding = Binding::new(q);
        let residual = max_residual(&item.expr, &binding, n, trials, rng)?;
        entries.push(ResidualEntry {
            label: item.label.clone(),
            residual,
            pass: residual <= tol,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(ResidualReport {
        q,
        n_trunc: n,
        tol,
        entries,
        pass,
    })
}

/// `C[SL_n]_q` relations of an exact representation at numeric `q`.
pub fn verify_slq_relations(
    g: &GenMatrix<Laurent>,
    q: f64,
    n: usize,
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<ResidualReport> {
    let items = slq_relations(g, &Laurent::q(), &Laurent::q_pow(-1))?;
    residual_report(&items, q, n, trials, tol, rng)
}

/// The identities of the base representation, as `lhs - rhs`.
pub fn su2_identities() -> Vec<NamedResidual<Laurent>> {
    let b = base_rep();
    let (t11, t12, t21, t22) = (b.entry(1, 1), b.entry(1, 2), b.entry(2, 1), b.entry(2, 2));
    let id = ExactExpr::identity(fock1());
    let q = Laurent::q();
    let q2 = Laurent::q_pow(2);
    let one_minus_q2 = &Laurent::one() - &q2;
    let items = vec![
        ("T11 = T22*", t11 - &t22.adjoint()),
        (
            "T11 T22 - q T12 T21 = I",
            &(&(t11 * t22) - &(t12 * t21).scale(&q)) - &id,
        ),
        ("T12 T21 = T21 T12", &(t12 * t21) - &(t21 * t12)),
        ("T11 T12 = q T12 T11", &(t11 * t12) - &(t12 * t11).scale(&q)),
        ("T11 T21 = q T21 T11", &(t11 * t21) - &(t21 * t11).scale(&q)),
        ("T21^2 = I - T22 T11", &(t21 * t21) - &(&id - &(t22 * t11))),
        (
            "T11 T22 = q^2 T22 T11 + (1 - q^2) I",
            &(&(t11 * t22) - &(t22 * t11).scale(&q2)) - &id.scale(&one_minus_q2),
        ),
    ];
    items
        .into_iter()
        .map(|(label, expr)| NamedResidual {
            label: label.to_string(),
            expr,
        })
        .collect()
}
