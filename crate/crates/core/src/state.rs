//! Truncated tensor states and matrix-free application of expressions.
//!
//! A Fock factor truncated at `N` keeps `e_0..e_{N-1}`; the truncated shift
//! sends `e_{N-1}` to zero. A circle factor has dimension one and acts through
//! the phase it is bound to.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{Atom, EvalAt, Expr, FactorKind};
use crate::scalar::Real;

/// Numeric parameters an expression is evaluated at.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding<T> {
    pub q: T,
    /// One phase per circle factor, in factor order.
    pub phases: Vec<T>,
}

impl<T: Real> Binding<T> {
    pub fn new(q: T) -> Self {
        Self { q, phases: Vec::new() }
    }

    pub fn with_phases(q: T, phases: Vec<T>) -> Self {
        Self { q, phases }
    }

    pub fn check(&self, kinds: &[FactorKind]) -> Result<()> {
        if !(self.q > T::zero() && self.q < T::one()) {
            return Err(Error::QOutOfRange(self.q.to_f64_lossy()));
        }
        let circles = kinds.iter().filter(|k| **k == FactorKind::Circle).count();
        if circles != self.phases.len() {
            return Err(Error::SizeMismatch {
                expected: circles,
                found: self.phases.len(),
            });
        }
        Ok(())
    }
}

/// Factor dimensions for a signature: `n` per Fock factor, 1 per circle factor.
pub fn dims_for(kinds: &[FactorKind], n: usize) -> Vec<usize> {
    kinds
        .iter()
        .map(|k| match k {
            FactorKind::Fock => n,
            FactorKind::Circle => 1,
        })
        .collect()
}

/// Dense coordinates over the product basis, last factor fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct State<T> {
    dims: Vec<usize>,
    data: Vec<Complex<T>>,
}

impl<T: Real> State<T> {
    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        Self {
            dims,
            data: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn from_data(dims: Vec<usize>, data: Vec<Complex<T>>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::SizeMismatch {
                expected: len,
                found: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    /// `e_{i_1} ⊗ ... ⊗ e_{i_f}`.
    pub fn basis(dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(dims);
        let k = s.index_of(idx)?;
        s.data[k] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn vacuum(dims: Vec<usize>) -> Self {
        let zeros = vec![0; dims.len()];
        Self::basis(dims, &zeros).expect("vacuum index is in range")
    }

    /// Random vector supported on indices `< limits[f]` in every factor.
    pub fn random_supported(dims: Vec<usize>, limits: &[usize], rng: &mut impl Rng) -> Self {
        let mut s = Self::zeros(dims);
        let mut idx = vec![0; s.dims.len()];
        for k in 0..s.data.len() {
            s.unravel(k, &mut idx);
            if idx.iter().zip(limits).all(|(i, l)| i < l) {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                s.data[k] = Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im));
            }
        }
        s
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn index_of(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dims.len() {
            return Err(Error::SizeMismatch {
                expected: self.dims.len(),
                found: idx.len(),
            });
        }
        let mut k = 0;
        for (&i, &d) in idx.iter().zip(&self.dims) {
            if i >= d {
                return Err(Error::IndexOutOfRange { index: i, max: d - 1 });
            }
            k = k * d + i;
        }
        Ok(k)
    }

    pub fn unravel(&self, mut k: usize, idx: &mut [usize]) {
        for f in (0..self.dims.len()).rev() {
            idx[f] = k % self.dims[f];
            k /= self.dims[f];
        }
    }

    pub fn get(&self, idx: &[usize]) -> Result<Complex<T>> {
        Ok(self.data[self.index_of(idx)?])
    }

    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn dot(&self, other: &State<T>) -> Complex<T> {
        self.data
            .iter()
            .zip(&other.data)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Complex<T>, other: &State<T>) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + c * b;
        }
    }

    pub fn sub(&self, other: &State<T>) -> Self {
        let mut out = self.clone();
        out.axpy(Complex::new(-T::one(), T::zero()), other);
        out
    }

    /// Copies into larger dimensions, zero elsewhere.
    pub fn embed(&self, dims: Vec<usize>) -> Self {
        let mut out = Self::zeros(dims);
        let mut idx = vec![0; self.dims.len()];
        for k in 0..self.data.len() {
            self.unravel(k, &mut idx);
            let j = out.index_of(&idx).expect("embedding into larger dims");
            out.data[j] = self.data[k];
        }
        out
    }

    /// Restriction to smaller dimensions.
    pub fn project(&self, dims: Vec<usize>) -> Self {
        let mut out = Self::zeros(dims);
        let mut idx = vec![0; out.dims.len()];
        for k in 0..out.data.len() {
            out.unravel(k, &mut idx);
            let j = self.index_of(&idx).expect("projecting onto smaller dims");
            out.data[k] = self.data[j];
        }
        out
    }
}

/// Diagonal tables of `C_q` and `d_q` up to a given size.
#[derive(Clone, Debug)]
pub struct AtomTables<T> {
    cq: Vec<T>,
    dq: Vec<T>,
}

impl<T: Real> AtomTables<T> {
    pub fn new(q: T, n: usize) -> Self {
        let dq: Vec<T> = (0..n).map(|m| q.powi(m as i32)).collect();
        let cq = dq.iter().map(|d| (T::one() - *d * *d).max(T::zero()).sqrt()).collect();
        Self { cq, dq }
    }

    pub fn cq(&self, m: usize) -> T {
        self.cq[m]
    }

    pub fn dq(&self, m: usize) -> T {
        self.dq[m]
    }
}

/// Banded single-factor matrix: entries `(i, i - offset)` carry `values[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix<T> {
    pub n: usize,
    /// `1` for the subdiagonal (`S`), `-1` for the superdiagonal (`S*`), `0` diagonal.
    pub offset: isize,
    pub values: Vec<T>,
}

impl<T: Real> BandedMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        if i as isize - j as isize == self.offset {
            self.values[i]
        } else {
            T::zero()
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Truncated matrix of a Fock atom.
pub fn atom_matrix<T: Real>(a: Atom, q: T, n: usize) -> Result<BandedMatrix<T>> {
    if a.is_circle() {
        return Err(Error::AtomKind {
            atom: a.symbol().to_string(),
            kind: FactorKind::Fock.to_string(),
        });
    }
    if n < 2 {
        return Err(Error::Config(format!("truncation {n} < 2")));
    }
    let t = AtomTables::new(q, n);
    let (offset, values) = match a {
        Atom::I => (0, vec![T::one(); n]),
        Atom::S => (1, (0..n).map(|i| if i == 0 { T::zero() } else { T::one() }).collect()),
        Atom::Sdag => (
            -1,
            (0..n).map(|i| if i + 1 == n { T::zero() } else { T::one() }).collect(),
        ),
        Atom::Cq => (0, (0..n).map(|m| t.cq(m)).collect()),
        Atom::Dq => (0, (0..n).map(|m| t.dq(m)).collect()),
        Atom::P => (0, (0..n).map(|m| if m == 0 { T::one() } else { T::zero() }).collect()),
        Atom::Z | Atom::Zbar => unreachable!(),
    };
    Ok(BandedMatrix { n, offset, values })
}

fn apply_atom<T: Real>(
    a: Atom,
    factor: usize,
    dims: &[usize],
    data: &mut [Complex<T>],
    tables: &AtomTables<T>,
    phase: T,
) {
    let n = dims[factor];
    let stride: usize = dims[factor + 1..].iter().product();
    let outer: usize = dims[..factor].iter().product();
    let zero = Complex::new(T::zero(), T::zero());
    match a {
        Atom::I => {}
        Atom::Z | Atom::Zbar => {
            let sign = if a == Atom::Z { T::one() } else { -T::one() };
            let c = Complex::from_polar(T::one(), sign * phase);
            data.iter_mut().for_each(|z| *z = *z * c);
        }
        _ => {
            for o in 0..outer {
                for inner in 0..stride {
                    let base = o * n * stride + inner;
                    let at = |k: usize| base + k * stride;
                    match a {
                        Atom::S => {
                            for k in (1..n).rev() {
                                data[at(k)] = data[at(k - 1)];
                            }
                            data[at(0)] = zero;
                        }
                        Atom::Sdag => {
                            for k in 0..n - 1 {
                                data[at(k)] = data[at(k + 1)];
                            }
                            data[at(n - 1)] = zero;
                        }
                        Atom::Cq => (0..n).for_each(|k| data[at(k)] = data[at(k)] * tables.cq(k)),
                        Atom::Dq => (0..n).for_each(|k| data[at(k)] = data[at(k)] * tables.dq(k)),
                        Atom::P => (1..n).for_each(|k| data[at(k)] = zero),
                        _ => unreachable!(),
                    }
                }
            }
        }
    }
}

/// `expr · v` with truncated atoms.
pub fn apply<T: Real, C: EvalAt<T>>(expr: &Expr<C>, b: &Binding<T>, v: &State<T>) -> Result<State<T>> {
    let kinds = expr.kinds();
    if v.dims().len() != kinds.len() {
        return Err(Error::SizeMismatch {
            expected: kinds.len(),
            found: v.dims().len(),
        });
    }
    b.check(kinds)?;
    for (f, k) in kinds.iter().enumerate() {
        if *k == FactorKind::Circle && v.dims()[f] != 1 {
            return Err(Error::Config(format!("circle factor {f} must have dimension 1")));
        }
    }
    let mut phase_of = vec![T::zero(); kinds.len()];
    let mut circles = b.phases.iter();
    for (f, k) in kinds.iter().enumerate() {
        if *k == FactorKind::Circle {
            phase_of[f] = *circles.next().expect("checked phase count");
        }
    }
    let max_dim = v.dims().iter().copied().max().unwrap_or(1);
    let tables = AtomTables::new(b.q, max_dim);
    let mut out = State::zeros(v.dims().to_vec());
    let mut work = v.clone();
    for (legs, c) in expr.terms() {
        work.data_mut().copy_from_slice(v.data());
        for (f, leg) in legs.iter().enumerate() {
            for &a in leg.atoms().iter().rev() {
                apply_atom(a, f, v.dims(), work.data_mut(), &tables, phase_of[f]);
            }
        }
        out.axpy(c.eval_at(b.q), &work);
    }
    Ok(out)
}

/// Applies the compression `P_N expr P_N` of the untruncated operator: the
/// state is padded by the expression's per-factor raise so no intermediate
/// index hits the truncation edge.
pub fn apply_compressed<T: Real, C: EvalAt<T>>(expr: &Expr<C>, b: &Binding<T>, v: &State<T>) -> Result<State<T>> {
    let raise = expr.raise();
    if raise.len() != v.dims().len() {
        return Err(Error::SizeMismatch {
            expected: raise.len(),
            found: v.dims().len(),
        });
    }
    if raise.iter().all(|r| *r == 0) {
        return apply(expr, b, v);
    }
    let padded: Vec<usize> = v
        .dims()
        .iter()
        .zip(expr.kinds())
        .zip(&raise)
        .map(|((d, k), r)| if *k == FactorKind::Fock { d + r } else { *d })
        .collect();
    let w = apply(expr, b, &v.embed(padded))?;
    Ok(w.project(v.dims().to_vec()))
}

/// Largest index per factor at which every word of `expr` acts exactly.
pub fn interior_limits<C: crate::expr::Coeff>(expr: &Expr<C>, dims: &[usize]) -> Vec<usize> {
    expr.raise()
        .iter()
        .zip(dims)
        .map(|(r, d)| d.saturating_sub(*r))
        .collect()
}

/// Semantic equality on random interior vectors: `||(a - b) v|| <= tol ||v||`.
pub fn num_equal<T: Real, C: EvalAt<T>>(
    a: &Expr<C>,
    b: &Expr<C>,
    binding: &Binding<T>,
    n: usize,
    trials: usize,
    tol: T,
    rng: &mut impl Rng,
) -> Result<bool> {
    Ok(max_residual(&a.try_sub(b)?, binding, n, trials, rng)? <= tol)
}

/// Largest `||e v|| / ||v||` over random interior vectors.
pub fn max_residual<T: Real, C: EvalAt<T>>(
    e: &Expr<C>,
    binding: &Binding<T>,
    n: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<T> {
    if e.is_zero() {
        binding.check(e.kinds())?;
        return Ok(T::zero());
    }
    let dims = dims_for(e.kinds(), n);
    let limits = interior_limits(e, &dims);
    if limits.contains(&0) {
        return Err(Error::Config(format!(
            "truncation {n} leaves no interior for raise {:?}",
            e.raise()
        )));
    }
    let mut worst = T::zero();
    for _ in 0..trials {
        let v = State::random_supported(dims.clone(), &limits, rng);
        let nv = v.norm();
        if nv == T::zero() {
            continue;
        }
        let r = apply(e, binding, &v)?.norm() / nv;
        if r.is_nan() {
            return Ok(T::infinity());
        }
        worst = worst.max(r);
    }
    Ok(worst)
}
