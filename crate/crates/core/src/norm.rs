//! Operator-norm and essential-norm estimates on truncated spaces.
//!
//! Norms are taken of compressions `P_N A P_N` of the untruncated operator,
//! so estimates are lower bounds that increase with `N`. The largest
//! eigenvalue of `A*A` is found by Lanczos on the three-term recurrence;
//! plain power iteration is available for comparison.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{EvalAt, Expr, FactorKind};
use crate::scalar::Real;
use crate::state::{apply_compressed, dims_for, Binding, State};

/// Square linear operator on a truncated product space.
pub trait LinOp<T: Real>: Sync {
    fn dims(&self) -> &[usize];
    fn apply(&self, x: &State<T>) -> Result<State<T>>;
    fn apply_adjoint(&self, x: &State<T>) -> Result<State<T>>;
}

/// Compression of an expression bound to numeric parameters.
pub struct ExprOp<'a, T, C> {
    expr: &'a Expr<C>,
    adjoint: Expr<C>,
    binding: Binding<T>,
    dims: Vec<usize>,
}

impl<'a, T: Real, C: EvalAt<T>> ExprOp<'a, T, C> {
    pub fn new(expr: &'a Expr<C>, binding: Binding<T>, n: usize) -> Result<Self> {
        binding.check(expr.kinds())?;
        Ok(Self {
            expr,
            adjoint: expr.adjoint(),
            binding,
            dims: dims_for(expr.kinds(), n),
        })
    }
}

impl<T: Real, C: EvalAt<T>> LinOp<T> for ExprOp<'_, T, C> {
    fn dims(&self) -> &[usize] {
        &self.dims
    }
    fn apply(&self, x: &State<T>) -> Result<State<T>> {
        apply_compressed(self.expr, &self.binding, x)
    }
    fn apply_adjoint(&self, x: &State<T>) -> Result<State<T>> {
        apply_compressed(&self.adjoint, &self.binding, x)
    }
}

/// `a - b` for operators on the same space.
pub struct DiffOp<'a, T> {
    a: &'a dyn LinOp<T>,
    b: &'a dyn LinOp<T>,
}

impl<'a, T: Real> DiffOp<'a, T> {
    pub fn new(a: &'a dyn LinOp<T>, b: &'a dyn LinOp<T>) -> Result<Self> {
        if a.dims() != b.dims() {
            return Err(Error::Signature(format!("{:?} vs {:?}", a.dims(), b.dims())));
        }
        Ok(Self { a, b })
    }
}

impl<T: Real> LinOp<T> for DiffOp<'_, T> {
    fn dims(&self) -> &[usize] {
        self.a.dims()
    }
    fn apply(&self, x: &State<T>) -> Result<State<T>> {
        Ok(self.a.apply(x)?.sub(&self.b.apply(x)?))
    }
    fn apply_adjoint(&self, x: &State<T>) -> Result<State<T>> {
        Ok(self.a.apply_adjoint(x)?.sub(&self.b.apply_adjoint(x)?))
    }
}

/// `Q A Q` with `Q = I - P_{<cut}` on the Fock factors jointly.
pub struct CutOp<'a, T> {
    inner: &'a dyn LinOp<T>,
    keep: Vec<bool>,
}

impl<'a, T: Real> CutOp<'a, T> {
    pub fn new(inner: &'a dyn LinOp<T>, kinds: &[FactorKind], cut: usize) -> Result<Self> {
        let dims = inner.dims().to_vec();
        if kinds.len() != dims.len() {
            return Err(Error::SizeMismatch {
                expected: dims.len(),
                found: kinds.len(),
            });
        }
        let probe = State::<T>::zeros(dims.clone());
        let mut idx = vec![0; dims.len()];
        let keep = (0..probe.len())
            .map(|k| {
                probe.unravel(k, &mut idx);
                idx.iter()
                    .zip(kinds)
                    .any(|(i, kind)| *kind == FactorKind::Fock && *i >= cut)
            })
            .collect();
        Ok(Self { inner, keep })
    }

    fn mask(&self, mut x: State<T>) -> State<T> {
        let zero = Complex::new(T::zero(), T::zero());
        for (z, keep) in x.data_mut().iter_mut().zip(&self.keep) {
            if !keep {
                *z = zero;
            }
        }
        x
    }
}

impl<T: Real> LinOp<T> for CutOp<'_, T> {
    fn dims(&self) -> &[usize] {
        self.inner.dims()
    }
    fn apply(&self, x: &State<T>) -> Result<State<T>> {
        Ok(self.mask(self.inner.apply(&self.mask(x.clone()))?))
    }
    fn apply_adjoint(&self, x: &State<T>) -> Result<State<T>> {
        Ok(self.mask(self.inner.apply_adjoint(&self.mask(x.clone()))?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum NormMethod {
    Lanczos,
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormOptions {
    pub method: NormMethod,
    /// Relative tolerance on the top eigenvalue of `A*A`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            method: NormMethod::Lanczos,
            tol: 1e-10,
            max_iter: 5_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn gram<T: Real>(op: &dyn LinOp<T>, x: &State<T>) -> Result<State<T>> {
    op.apply_adjoint(&op.apply(x)?)
}

fn start_vector<T: Real>(dims: &[usize], seed: u64) -> State<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    State::random_supported(dims.to_vec(), dims, &mut rng)
}

fn normalize<T: Real>(x: &mut State<T>) -> T {
    let n = x.norm();
    if n > T::zero() {
        let inv = Complex::new(T::one() / n, T::zero());
        x.data_mut().iter_mut().for_each(|z| *z = *z * inv);
    }
    n
}

/// Estimates `||op||`.
pub fn estimate_norm<T: Real>(op: &dyn LinOp<T>, opts: &NormOptions) -> Result<NormEstimate> {
    match opts.method {
        NormMethod::Lanczos => lanczos(op, opts),
        NormMethod::Power => power(op, opts),
    }
}

fn power<T: Real>(op: &dyn LinOp<T>, opts: &NormOptions) -> Result<NormEstimate> {
    let mut v = start_vector::<T>(op.dims(), opts.seed);
    if normalize(&mut v) == T::zero() {
        return Ok(NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let mut lambda = 0.0_f64;
    for it in 1..=opts.max_iter {
        let mut w = gram(op, &v)?;
        let next = v.dot(&w).re.to_f64_lossy().max(0.0);
        if normalize(&mut w) == T::zero() {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: it,
                converged: true,
            });
        }
        if it > 1 && (next - lambda).abs() <= opts.tol * next.max(f64::MIN_POSITIVE) {
            return Ok(NormEstimate {
                value: next.sqrt(),
                iterations: it,
                converged: true,
            });
        }
        lambda = next;
        v = w;
    }
    Ok(NormEstimate {
        value: lambda.sqrt(),
        iterations: opts.max_iter,
        converged: false,
    })
}

const STALL_WINDOW: usize = 8;
const STALL_REL: f64 = 1e-14;
/// Past the first steps the tridiagonal is only diagonalized this often.
const CHECK_EVERY: usize = 5;

fn lanczos<T: Real>(op: &dyn LinOp<T>, opts: &NormOptions) -> Result<NormEstimate> {
    let mut v = start_vector::<T>(op.dims(), opts.seed);
    if normalize(&mut v) == T::zero() {
        return Ok(NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    // plain three-term recurrence: the top Ritz value of the leading
    // tridiagonal blocks is monotone and, once orthogonality is lost, only
    // picks up duplicate copies of converged values
    let mut v_prev: Option<State<T>> = None;
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut theta = 0.0;
    let mut history: Vec<(usize, f64)> = Vec::new();
    for k in 0..opts.max_iter.max(1) {
        let mut w = gram(op, &v)?;
        let a = v.dot(&w).re.to_f64_lossy();
        w.axpy(Complex::new(T::from_f64_lossy(-a), T::zero()), &v);
        if let (Some(p), Some(&b)) = (&v_prev, beta.last()) {
            w.axpy(Complex::new(T::from_f64_lossy(-b), T::zero()), p);
        }
        let c = v.dot(&w);
        w.axpy(-c, &v);
        alpha.push(a);
        let b_next = normalize(&mut w).to_f64_lossy();
        if k < 20 || (k + 1) % CHECK_EVERY == 0 || k + 1 == opts.max_iter {
            let (top, last) = top_ritz(&alpha, &beta, theta);
            theta = top;
            let residual = b_next * last.abs();
            let scale = theta.abs().max(f64::MIN_POSITIVE);
            // in a tight cluster the Ritz vector converges slowly while the
            // top Ritz value has long settled
            let stalled = history
                .iter()
                .rev()
                .find(|(j, _)| j + STALL_WINDOW <= k)
                .is_some_and(|(_, old)| top - old <= STALL_REL * scale);
            history.push((k, top));
            if residual <= opts.tol * scale || stalled || b_next <= 1e-14 * scale.max(alpha[0].abs()) {
                return Ok(NormEstimate {
                    value: theta.max(0.0).sqrt(),
                    iterations: k + 1,
                    converged: true,
                });
            }
        }
        beta.push(b_next);
        v_prev = Some(std::mem::replace(&mut v, w));
    }
    Ok(NormEstimate {
        value: theta.max(0.0).sqrt(),
        iterations: opts.max_iter,
        converged: false,
    })
}

/// Eigenvalues of the tridiagonal below `x`, by Sturm sequence.
fn count_below(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in alpha.iter().enumerate() {
        let off = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] / d };
        d = a - x - off;
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the Lanczos tridiagonal and the last component of
/// its normalized eigenvector. `floor` is a known lower bound.
fn top_ritz(alpha: &[f64], beta: &[f64], floor: f64) -> (f64, f64) {
    let k = alpha.len();
    let mut hi = f64::MIN;
    let mut lo = f64::MAX;
    for i in 0..k {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + if i + 1 < k { beta[i].abs() } else { 0.0 };
        hi = hi.max(alpha[i] + r);
        lo = lo.min(alpha[i] - r);
    }
    lo = lo.max(floor.min(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
            break;
        }
        if count_below(alpha, beta, mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let top = 0.5 * (lo + hi);
    // eigenvector from the recurrence, rescaled to avoid overflow
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut norm2 = 1.0;
    for i in 0..k - 1 {
        let next = ((top - alpha[i]) * cur - if i > 0 { beta[i - 1] * prev } else { 0.0 }) / beta[i];
        prev = cur;
        cur = next;
        norm2 += cur * cur;
        if norm2 > 1e200 {
            let s = norm2.sqrt();
            prev /= s;
            cur /= s;
            norm2 = 1.0;
        }
    }
    (top, cur / norm2.sqrt())
}

/// `||P_N e P_N||` at the given binding.
pub fn operator_norm<T: Real, C: EvalAt<T>>(e: &Expr<C>, binding: &Binding<T>, n: usize) -> Result<f64> {
    operator_norm_with(e, binding, n, &NormOptions::default()).map(|r| r.value)
}

pub fn operator_norm_with<T: Real, C: EvalAt<T>>(
    e: &Expr<C>,
    binding: &Binding<T>,
    n: usize,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if e.is_zero() {
        binding.check(e.kinds())?;
        return Ok(NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let op = ExprOp::new(e, binding.clone(), n)?;
    estimate_norm(&op, opts)
}

/// `||Q_cut e Q_cut||`, the tail-compression surrogate of the essential norm.
pub fn essential_norm_estimate<T: Real, C: EvalAt<T>>(
    e: &Expr<C>,
    binding: &Binding<T>,
    n: usize,
    cut: usize,
) -> Result<f64> {
    if cut >= n {
        return Err(Error::Config(format!("cut {cut} must be below truncation {n}")));
    }
    if e.is_zero() {
        binding.check(e.kinds())?;
        return Ok(0.0);
    }
    let op = ExprOp::new(e, binding.clone(), n)?;
    let cut_op = CutOp::new(&op, e.kinds(), cut)?;
    Ok(estimate_norm(&cut_op, &NormOptions::default())?.value)
}

/// Uniform phase grid `2 pi k / size`.
pub fn phase_grid(size: usize) -> Vec<f64> {
    (0..size)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / size as f64)
        .collect()
}

/// Every assignment of grid phases to `circles` circle factors.
pub fn phase_tuples(circles: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..circles {
        out = out
            .into_iter()
            .flat_map(|t| {
                grid.iter().map(move |&p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn circle_count(kinds: &[FactorKind]) -> usize {
    kinds.iter().filter(|k| **k == FactorKind::Circle).count()
}

/// `sup` over the phase grid of `||P_N e P_N||`; approximates the norm in
/// `C(T) ⊗ B(l^2)` for expressions with circle factors.
pub fn sup_norm_over_phases<C: EvalAt<f64>>(e: &Expr<C>, q: f64, n: usize, grid: &[f64]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for phases in phase_tuples(circle_count(e.kinds()), grid) {
        best = best.max(operator_norm(e, &Binding::with_phases(q, phases), n)?);
    }
    Ok(best)
}

/// Golden-section steps used to refine a grid maximum.
const REFINE_STEPS: usize = 14;

/// `sup_phi ||P_N e P_N||` for an expression with one circle factor: the
/// grid maximum, refined by a golden-section search (with a closing parabolic
/// step) around the two best grid points. Other expressions fall back to the
/// plain grid sup.
pub fn circle_sup_norm<C: EvalAt<f64>>(e: &Expr<C>, q: f64, n: usize, grid: &[f64]) -> Result<f64> {
    if circle_count(e.kinds()) != 1 || grid.len() < 3 {
        return sup_norm_over_phases(e, q, n, grid);
    }
    let f = |p: f64| operator_norm(e, &Binding::with_phases(q, vec![p]), n);
    let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|a, b| values[*b].total_cmp(&values[*a]));
    let mut best = values[order[0]];
    let h = 2.0 * std::f64::consts::PI / grid.len() as f64;
    for &i in order.iter().take(2) {
        best = best.max(golden_max(&f, grid[i] - h, grid[i] + h)?);
    }
    Ok(best)
}

fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..REFINE_STEPS {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    let (xm, fm) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    // vertex of the parabola through the bracket and the better interior point
    let (fa, fb) = (f(a)?, f(b)?);
    let num = (xm - a).powi(2) * (fm - fb) - (xm - b).powi(2) * (fm - fa);
    let den = (xm - a) * (fm - fb) - (xm - b) * (fm - fa);
    let mut best = fm.max(fa).max(fb);
    if den.abs() > f64::EPSILON {
        let xv = xm - 0.5 * num / den;
        if xv > a && xv < b {
            best = best.max(f(xv)?);
        }
    }
    Ok(best)
}
