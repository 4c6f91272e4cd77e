//! `q -> 0` checks: distances of scaled generator images to their limits,
//! the series identities, the norm inequality for `Omega_0` against
//! `Xi_q ⊕ Phi_q`, continuity in `q` and the images in `B_0`.

use num_complex::Complex;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Atom, FactorKind};
use crate::norm::{
    essential_norm_estimate, estimate_norm, operator_norm_with, phase_grid, phase_tuples, sup_norm_over_phases, DiffOp,
    ExprOp, NormOptions,
};
use crate::polmat::{psi_automorphism, random_element, ExactElement, Gen, NumElement, PsiConvention};
use crate::repcat::{
    b0_generators, coherent_rep, generators, limit_generators, limit_scale, omega0, omega0_limits, phi_rep, xi_rep,
    Representation, SumPair,
};
use crate::state::{apply, dims_for, interior_limits, max_residual, Binding, State};
use crate::{ExactExpr, Laurent, NumExpr};

use Atom::*;
use FactorKind::{Circle, Fock};

pub const DEFAULT_QS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub qs: Vec<f64>,
    pub n: usize,
    pub grid: usize,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    pub cuts: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            qs: DEFAULT_QS.to_vec(),
            n: 12,
            grid: 8,
            trials: 3,
            tol: 1e-6,
            seed: 2024,
            cuts: vec![2, 4, 6],
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qs.is_empty() || self.qs.iter().any(|q| !(*q > 0.0 && *q < 1.0)) {
            return Err(Error::Config(format!("q values must lie in (0, 1): {:?}", self.qs)));
        }
        if self.n == 0 || self.grid == 0 || self.trials == 0 {
            return Err(Error::Config("n, grid and trials must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tol)));
        }
        if let Some(c) = self.cuts.iter().find(|c| **c == 0 || **c >= self.n) {
            return Err(Error::Config(format!("cut {c} must lie in 1..{}", self.n)));
        }
        Ok(())
    }

    pub fn phases(&self) -> Vec<f64> {
        phase_grid(self.grid)
    }

    /// Independent stream for work unit `k`.
    pub fn rng(&self, k: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(k);
        r
    }
}

/// `e` with `z_1^1` replaced by `q z_1^1`.
pub fn jpol(e: &ExactElement) -> ExactElement {
    e.scale_generator(Gen::z(1, 1), &Laurent::q())
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceRow {
    pub generator: String,
    pub component: String,
    pub q: f64,
    pub n: usize,
    pub value: f64,
}

fn scaled_image(rep: &Representation, g: Gen) -> Result<ExactExpr> {
    Ok(rep.image(g)?.scale(&limit_scale(g)))
}

/// `||scaled image - limit||` per generator and component.
pub fn limit_distance_table(cfg: &SweepConfig) -> Result<Vec<DistanceRow>> {
    cfg.validate()?;
    let xi = xi_rep()?;
    let phi = phi_rep()?;
    let o = omega0()?;
    let limits = limit_generators();
    let o_limits = omega0_limits()?;
    let grid = cfg.phases();
    let mut jobs: Vec<(String, &'static str, ExactExpr)> = Vec::new();
    for (g, SumPair { xi: lx, phi: lp }) in &limits {
        jobs.push((g.to_string(), "xi", scaled_image(&xi, *g)?.try_sub(lx)?));
        jobs.push((g.to_string(), "phi", scaled_image(&phi, *g)?.try_sub(lp)?));
    }
    for (g, lim) in &o_limits {
        jobs.push((g.to_string(), "omega0", scaled_image(&o, *g)?.try_sub(lim)?));
    }
    let units: Vec<(usize, f64)> = (0..jobs.len())
        .flat_map(|j| cfg.qs.iter().map(move |&q| (j, q)))
        .collect();
    units
        .par_iter()
        .map(|&(j, q)| {
            let (name, comp, e) = &jobs[j];
            Ok(DistanceRow {
                generator: name.clone(),
                component: comp.to_string(),
                q,
                n: cfg.n,
                value: sup_norm_over_phases(e, q, cfg.n, &grid)?,
            })
        })
        .collect()
}

/// CSV with header `generator,q,N,value`; the component is appended to the
/// generator name.
pub fn distance_csv(rows: &[DistanceRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["generator", "q", "N", "value"])
        .map_err(|e| Error::Config(e.to_string()))?;
    for r in rows {
        w.write_record([
            format!("{}:{}", r.generator, r.component),
            r.q.to_string(),
            r.n.to_string(),
            format!("{:.15e}", r.value),
        ])
        .map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

/// `W = Z_1^1 Z_2^2`.
pub fn w_operator() -> Result<SumPair> {
    let lim = limit_generators();
    let get = |g: Gen| {
        lim.iter()
            .find(|(h, _)| *h == g)
            .map(|(_, p)| p.clone())
            .expect("generator")
    };
    get(Gen::z(1, 1)).try_mul(&get(Gen::z(2, 2)))
}

fn xi_kinds() -> Vec<FactorKind> {
    vec![Circle, Fock, Fock]
}

fn phi_kinds() -> Vec<FactorKind> {
    vec![Fock, Fock, Circle]
}

fn kinded(kinds: &[FactorKind], legs: &[&[Atom]], c: Laurent) -> ExactExpr {
    ExactExpr::with_kinds(kinds, legs, c).expect("static legs")
}

fn pow_expr(e: &ExactExpr, k: usize) -> Result<ExactExpr> {
    let mut out = ExactExpr::identity(e.kinds().to_vec());
    for _ in 0..k {
        out = out.try_mul(e)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareSeriesReport {
    pub q: f64,
    pub n: usize,
    pub k: usize,
    pub residual: f64,
    /// `||I - W W* - (I⊗I⊗P ⊕ P⊗I⊗I)||`.
    pub projector_residual: f64,
}

/// `||(I⊗I⊗d_q^2) ⊕ (d_q^2⊗I⊗I) - sum_{k<=K} q^{2k} W^k (I - W W*) W*^k||`.
pub fn dq_square_series_check(q: f64, n: usize, k_max: usize) -> Result<SquareSeriesReport> {
    if k_max > n {
        return Err(Error::Config(format!("series length {k_max} exceeds truncation {n}")));
    }
    let w = w_operator()?;
    let grid = phase_grid(4);
    let one = Laurent::one;
    let mut residual: f64 = 0.0;
    let mut projector_residual: f64 = 0.0;
    let comps = [
        (
            w.xi.clone(),
            kinded(&xi_kinds(), &[&[], &[], &[Dq, Dq]], one()),
            kinded(&xi_kinds(), &[&[], &[], &[P]], one()),
        ),
        (
            w.phi.clone(),
            kinded(&phi_kinds(), &[&[Dq, Dq], &[], &[]], one()),
            kinded(&phi_kinds(), &[&[P], &[], &[]], one()),
        ),
    ];
    for (wc, target, proj) in comps {
        let id = ExactExpr::identity(wc.kinds().to_vec());
        let defect = id.try_sub(&wc.try_mul(&wc.adjoint())?)?;
        projector_residual = projector_residual.max(sup_norm_over_phases(&defect.try_sub(&proj)?, q, n, &grid)?);
        let mut sum = ExactExpr::zero(wc.kinds().to_vec());
        for k in 0..=k_max {
            let wk = pow_expr(&wc, k)?;
            let term = wk.try_mul(&defect)?.try_mul(&wk.adjoint())?;
            sum = sum.try_add(&term.scale(&Laurent::q_pow(2 * k as i32)))?;
        }
        residual = residual.max(sup_norm_over_phases(&target.try_sub(&sum)?, q, n, &grid)?);
    }
    Ok(SquareSeriesReport {
        q,
        n,
        k: k_max,
        residual,
        projector_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub q: f64,
    pub n: usize,
    pub left_inverse_residual: f64,
    pub c_squared_residual: f64,
    pub w_canonical_equal: bool,
    pub pass: bool,
}

/// The operator identities behind the generation argument: a left inverse
/// of `I⊗C_qS⊗I`, `C_q^2 = I - d_q^2` on both components, and the closed
/// form of `Z_1^1 Z_2^2`.
pub fn generation_identities_check(q: f64, n: usize, trials: usize, tol: f64, seed: u64) -> Result<GenerationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Laurent::one;

    // (i) L = S* C_q^{-1} on the middle factor undoes V = C_q S
    let v_op = ExactExpr::fock(&[&[], &[Cq, S], &[]], one());
    let dims = vec![n; 3];
    let b = Binding::new(q);
    let limits = interior_limits(&v_op, &dims);
    let sdag = ExactExpr::fock(&[&[], &[Sdag], &[]], one());
    let mut left_inverse_residual: f64 = 0.0;
    for _ in 0..trials {
        let v = State::<f64>::random_supported(dims.clone(), &limits, &mut rng);
        let mut w = apply(&v_op, &b, &v)?;
        let mut idx = vec![0; 3];
        for k in 0..w.len() {
            w.unravel(k, &mut idx);
            let m = idx[1];
            let z = &mut w.data_mut()[k];
            if m == 0 {
                *z = Complex::new(0.0, 0.0);
            } else {
                *z /= (1.0 - q.powi(2 * m as i32)).sqrt();
            }
        }
        let back = apply(&sdag, &b, &w)?;
        left_inverse_residual = left_inverse_residual.max(back.sub(&v).norm() / v.norm());
    }

    // (ii) C_q^2 = I - d_q^2
    let mut c_squared_residual: f64 = 0.0;
    for (kinds, f) in [(xi_kinds(), 2usize), (phi_kinds(), 0)] {
        let mut c2: Vec<&[Atom]> = vec![&[]; 3];
        let mut d2: Vec<&[Atom]> = vec![&[]; 3];
        c2[f] = &[Cq, Cq];
        d2[f] = &[Dq, Dq];
        let lhs = kinded(&kinds, &c2, one());
        let rhs = ExactExpr::identity(kinds.clone()).try_sub(&kinded(&kinds, &d2, one()))?;
        let diff = lhs.try_sub(&rhs)?.to_numeric(q);
        for phases in phase_tuples(1, &phase_grid(4)) {
            let bb = Binding::with_phases(q, phases);
            c_squared_residual = c_squared_residual.max(max_residual(&diff, &bb, n, trials, &mut rng)?);
        }
    }

    // (iii) Z_1^1 Z_2^2 = (z⊗I⊗S) ⊕ (S⊗I⊗z)
    let w = w_operator()?;
    let w_canonical_equal = w.xi == kinded(&xi_kinds(), &[&[Z], &[], &[S]], one())
        && w.phi == kinded(&phi_kinds(), &[&[S], &[], &[Z]], one());

    let pass = left_inverse_residual <= tol && c_squared_residual <= tol && w_canonical_equal;
    Ok(GenerationReport {
        q,
        n,
        left_inverse_residual,
        c_squared_residual,
        w_canonical_equal,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityRow {
    pub sample: usize,
    pub q: f64,
    pub cut: usize,
    pub estimate: f64,
    pub bound: f64,
    pub pass: bool,
    pub element: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub samples: usize,
    pub tol: f64,
    pub rows: Vec<InequalityRow>,
    pub violations: usize,
}

/// `||(Xi_q ⊕ Phi_q)(a)||` as the max of the two sup norms over the grid.
pub fn boundary_norm(a: &NumElement, q: f64, n: usize, grid: &[f64]) -> Result<f64> {
    Ok(xi_rep()?
        .norm_of(a, q, n, grid, false)?
        .max(phi_rep()?.norm_of(a, q, n, grid, false)?))
}

/// As [`boundary_norm`], with the circle sup searched off the grid.
pub fn boundary_norm_refined(a: &NumElement, q: f64, n: usize, grid: &[f64]) -> Result<f64> {
    Ok(xi_rep()?
        .norm_of(a, q, n, grid, true)?
        .max(phi_rep()?.norm_of(a, q, n, grid, true)?))
}

/// Compares the tail compression of `Omega_0(a)` with `||(Xi_q ⊕ Phi_q)(a)||`
/// for seeded random elements of degree at most 3.
pub fn norm_inequality_sample(cfg: &SweepConfig, samples: usize) -> Result<InequalityReport> {
    cfg.validate()?;
    let elements: Vec<NumElement> = (0..samples)
        .map(|k| random_element(&mut cfg.rng(k as u64), 2, 3, 3))
        .collect();
    norm_inequality_for(cfg, &elements)
}

pub fn norm_inequality_for(cfg: &SweepConfig, elements: &[NumElement]) -> Result<InequalityReport> {
    cfg.validate()?;
    let o = omega0()?;
    let grid = cfg.phases();
    let units: Vec<(usize, f64)> = (0..elements.len())
        .flat_map(|k| cfg.qs.iter().map(move |&q| (k, q)))
        .collect();
    let rows: Vec<Vec<InequalityRow>> = units
        .par_iter()
        .map(|&(k, q)| {
            let a = &elements[k];
            let image = o.evaluate_numeric(a, q)?;
            let b = Binding::new(q);
            let estimates: Vec<f64> = cfg
                .cuts
                .iter()
                .map(|&cut| essential_norm_estimate(&image, &b, cfg.n, cut))
                .collect::<Result<_>>()?;
            let top = estimates.iter().copied().fold(0.0, f64::max);
            // the grid sup is a lower bound; search off the grid only when it
            // does not already dominate
            let mut bound = boundary_norm(a, q, cfg.n, &grid)?;
            if top > bound + cfg.tol {
                bound = boundary_norm_refined(a, q, cfg.n, &grid)?;
            }
            cfg.cuts
                .iter()
                .zip(estimates)
                .map(|(&cut, estimate)| {
                    Ok(InequalityRow {
                        sample: k,
                        q,
                        cut,
                        estimate,
                        bound,
                        pass: estimate <= bound + cfg.tol,
                        element: a.to_string(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<InequalityRow> = rows.into_iter().flatten().collect();
    let violations = rows.iter().filter(|r| !r.pass).count();
    Ok(InequalityReport {
        samples: elements.len(),
        tol: cfg.tol,
        rows,
        violations,
    })
}

/// `||A(q) - B(s)||` for expressions bound at different parameters.
fn cross_distance(a: &ExactExpr, ba: Binding<f64>, b: &ExactExpr, bb: Binding<f64>, n: usize) -> Result<f64> {
    let opa = ExprOp::new(a, ba, n)?;
    let opb = ExprOp::new(b, bb, n)?;
    let diff = DiffOp::new(&opa, &opb)?;
    Ok(estimate_norm(&diff, &NormOptions::default())?.value)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityRow {
    pub q: f64,
    pub s: f64,
    pub omega0: f64,
    pub boundary: f64,
}

/// Deviations `||Omega_0^{(q)}(a) - Omega_0^{(s)}(a)||` and the `Xi ⊕ Phi`
/// analogue over all pairs of the q-list; `a` is taken in scaled form.
pub fn continuity_sweep(a: &ExactElement, qs: &[f64], n: usize, grid: &[f64]) -> Result<Vec<ContinuityRow>> {
    let o = omega0()?.evaluate(a)?;
    let xi = xi_rep()?.evaluate(a)?;
    let phi = phi_rep()?.evaluate(a)?;
    let pairs: Vec<(f64, f64)> = qs
        .iter()
        .enumerate()
        .flat_map(|(i, &q)| qs[i..].iter().map(move |&s| (q, s)))
        .collect();
    pairs
        .par_iter()
        .map(|&(q, s)| {
            let omega0 = cross_distance(&o, Binding::new(q), &o, Binding::new(s), n)?;
            let mut boundary: f64 = 0.0;
            for e in [&xi, &phi] {
                for p in phase_grid(grid.len()) {
                    let d = cross_distance(
                        e,
                        Binding::with_phases(q, vec![p]),
                        e,
                        Binding::with_phases(s, vec![p]),
                        n,
                    )?;
                    boundary = boundary.max(d);
                }
            }
            Ok(ContinuityRow { q, s, omega0, boundary })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Phi0Row {
    pub generator: String,
    pub b0_index: Option<usize>,
    pub limit: String,
    pub limit_is_b0: bool,
    pub xi_lift_equal: bool,
    pub phi_lift_equal: bool,
    pub edge_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Phi0Report {
    pub n: usize,
    pub rows: Vec<Phi0Row>,
    pub pass: bool,
}

/// Matches each `q -> 0` limit of `Omega_0` with the `B_0` generator of the
/// same shape, and checks that `Z_i^j` with its circle legs lifted to shifts
/// lands on the same generator in both components.
pub fn phi0_images_check(n: usize, cut: usize) -> Result<Phi0Report> {
    let b0 = b0_generators();
    let limits = limit_generators();
    let mut rows = Vec::new();
    for (g, lim) in omega0_limits()? {
        let b0_index = b0.iter().position(|b| *b == lim);
        let pair = &limits.iter().find(|(h, _)| *h == g).expect("generator").1;
        let xi_lift = pair.xi.circle_to_fock(0)?;
        let phi_lift = pair.phi.circle_to_fock(2)?;
        let target = b0_index.map(|i| &b0[i]);
        let edge_residual = match target {
            Some(t) => essential_norm_estimate(&lim.try_sub(t)?, &Binding::new(0.5), n, cut)?
                .max(essential_norm_estimate(
                    &xi_lift.try_sub(t)?,
                    &Binding::new(0.5),
                    n,
                    cut,
                )?)
                .max(essential_norm_estimate(
                    &phi_lift.try_sub(t)?,
                    &Binding::new(0.5),
                    n,
                    cut,
                )?),
            None => f64::INFINITY,
        };
        rows.push(Phi0Row {
            generator: g.to_string(),
            b0_index,
            limit: lim.to_string(),
            limit_is_b0: b0_index.is_some(),
            xi_lift_equal: target == Some(&xi_lift),
            phi_lift_equal: target == Some(&phi_lift),
            edge_residual,
        });
    }
    let distinct: std::collections::BTreeSet<_> = rows.iter().filter_map(|r| r.b0_index).collect();
    let pass = distinct.len() == b0.len()
        && rows
            .iter()
            .all(|r| r.limit_is_b0 && r.xi_lift_equal && r.phi_lift_equal && r.edge_residual <= 1e-10);
    Ok(Phi0Report { n, rows, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRow {
    pub sample: usize,
    pub q: f64,
    pub coherent: f64,
    pub rotated: f64,
    pub gap: f64,
    pub converged: bool,
}

/// `||Omega_phi(p)||` against `||Omega_0(Psi_{phi,0}(p))||` for seeded random
/// elements of degree at most 3.
pub fn coherent_equivalence_sample(cfg: &SweepConfig, phi: f64, samples: usize) -> Result<Vec<EquivalenceRow>> {
    cfg.validate()?;
    let o = omega0()?;
    let units: Vec<(usize, f64)> = (0..samples).flat_map(|k| cfg.qs.iter().map(move |&q| (k, q))).collect();
    units
        .par_iter()
        .map(|&(k, q)| {
            let p = random_element(&mut cfg.rng(1_000 + k as u64), 2, 3, 3);
            let c = coherent_rep(phi, q)?;
            let lhs = c.evaluate_numeric(&p, q)?;
            let opts = NormOptions::default();
            let coherent = operator_norm_with(&lhs, &c.bindings(q, &[])[0], cfg.n, &opts)?;
            let rotated_elem = psi_automorphism(phi, 0.0, &p, PsiConvention::Lower);
            let rhs = o.evaluate_numeric(&rotated_elem, q)?;
            let rotated = operator_norm_with(&rhs, &Binding::new(q), cfg.n, &opts)?;
            Ok(EquivalenceRow {
                sample: k,
                q,
                coherent: coherent.value,
                rotated: rotated.value,
                gap: (coherent.value - rotated.value).abs(),
                converged: coherent.converged && rotated.converged,
            })
        })
        .collect()
}

/// The dimension of the truncated space of an expression.
pub fn truncated_dim(e: &NumExpr, n: usize) -> usize {
    dims_for(e.kinds(), n).iter().product()
}

/// Generators of the sweeps, for reporting.
pub fn generator_names() -> Vec<String> {
    generators().iter().map(Gen::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polmat::element_x;

    fn cfg() -> SweepConfig {
        SweepConfig {
            qs: vec![0.1, 0.3, 0.5],
            n: 8,
            grid: 4,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::default().validate().is_ok());
        let bad = SweepConfig {
            qs: vec![1.2],
            ..SweepConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SweepConfig {
            cuts: vec![12],
            ..SweepConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn z22_distance_matches_closed_form() {
        let rows = limit_distance_table(&cfg()).unwrap();
        let r = rows
            .iter()
            .find(|r| r.generator == "z_2^2" && r.component == "xi" && r.q == 0.5)
            .unwrap();
        // oracle: sup_m |sqrt(1 - q^{2m}) - 1| over the compression, attained at m = 1
        assert!((r.value - (1.0 - 0.75_f64.sqrt())).abs() < 1e-8, "{}", r.value);
        for r in &rows {
            assert!(r.value <= 2.0 * r.q, "{r:?}");
        }
    }

    #[test]
    fn csv_header() {
        let rows = limit_distance_table(&cfg()).unwrap();
        let s = distance_csv(&rows).unwrap();
        assert!(s.starts_with("generator,q,N,value\n"));
        assert_eq!(s.lines().count(), rows.len() + 1);
    }

    #[test]
    fn square_series() {
        let r = dq_square_series_check(0.5, 8, 8).unwrap();
        assert!(r.residual <= 1e-12, "{r:?}");
        assert!(r.projector_residual <= 1e-12);
        let r0 = dq_square_series_check(0.5, 8, 0).unwrap();
        assert!((r0.residual - 0.25).abs() < 1e-9, "{r0:?}");
        assert!(dq_square_series_check(0.5, 8, 9).is_err());
    }

    #[test]
    fn generation_identities() {
        let r = generation_identities_check(0.7, 8, 3, 1e-10, 1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn inequality_on_simple_elements() {
        let unit = NumElement::one();
        let z22 = ExactElement::gen(Gen::z(2, 2)).at_q(0.5);
        let c = SweepConfig {
            qs: vec![0.5],
            n: 10,
            ..cfg()
        };
        let rep = norm_inequality_for(&c, &[unit, z22]).unwrap();
        assert_eq!(rep.violations, 0, "{:?}", rep.rows);
        let one = &rep.rows[0];
        assert!((one.estimate - 1.0).abs() < 1e-8 && (one.bound - 1.0).abs() < 1e-8);
    }

    #[test]
    fn x_is_invisible_on_the_boundary() {
        let x = element_x().at_q(0.5);
        assert!(boundary_norm(&x, 0.5, 8, &phase_grid(4)).unwrap() < 1e-12);
        let est = essential_norm_estimate(
            &omega0().unwrap().evaluate_numeric(&x, 0.5).unwrap(),
            &Binding::new(0.5),
            10,
            4,
        )
        .unwrap();
        assert!((est - 0.5f64.powi(8)).abs() < 1e-10, "{est}");
    }

    #[test]
    fn continuity_is_zero_on_the_diagonal() {
        let a = jpol(&ExactElement::gen(Gen::z(1, 1)));
        let rows = continuity_sweep(&a, &[0.5, 0.6], 6, &phase_grid(4)).unwrap();
        let diag = rows.iter().find(|r| r.q == 0.5 && r.s == 0.5).unwrap();
        assert!(diag.omega0 < 1e-12 && diag.boundary < 1e-12);
    }

    #[test]
    fn z22_continuity_bound() {
        let a = ExactElement::gen(Gen::z(2, 2));
        let rows = continuity_sweep(&a, &[0.3, 0.5], 8, &phase_grid(4)).unwrap();
        let r = rows.iter().find(|r| r.q == 0.3 && r.s == 0.5).unwrap();
        assert!(r.omega0 <= 0.5f64.powi(2) - 0.3f64.powi(2) + 1e-9, "{r:?}");
    }

    #[test]
    fn phi0_matches_by_shape() {
        let r = phi0_images_check(8, 4).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn equivalence_gap_vanishes() {
        let c = SweepConfig {
            qs: vec![0.5],
            n: 6,
            cuts: vec![2],
            ..cfg()
        };
        for row in coherent_equivalence_sample(&c, std::f64::consts::FRAC_PI_3, 3).unwrap() {
            assert!(row.gap <= 1e-6, "{row:?}");
        }
    }

    #[test]
    fn jpol_scales_only_z11() {
        let e = ExactElement::gen(Gen::z(1, 1)).mul(&ExactElement::gen(Gen::zs(2, 2)));
        let j = jpol(&e);
        assert_eq!(j, e.scale(&Laurent::q()));
        let f = ExactElement::gen(Gen::z(1, 2));
        assert_eq!(jpol(&f), f);
    }
}
