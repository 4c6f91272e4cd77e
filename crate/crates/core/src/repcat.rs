//! Catalog of irreducible representations of `Pol(Mat_2)_q`: the Fock
//! representation, the box-diagram families built from it, the coherent
//! family, the boundary representations `Xi_q`, `Phi_q`, the `q -> 0` limit
//! operators and `Pi_q`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Atom, FactorKind};
use crate::norm::{circle_count, circle_sup_norm, phase_tuples, sup_norm_over_phases};
use crate::permutations::Word;
use crate::polmat::{zeta_image, ExactElement, Gen, NumElement, Relation};
use crate::qsu::{tensor_rep, ResidualEntry};
use crate::state::{apply, dims_for, max_residual, Binding, State};
use crate::{Complex64, ExactExpr, Laurent, NumExpr};

use Atom::*;
use FactorKind::{Circle, Fock};

/// The reduced word whose tensor representation gives the Fock representation.
pub const FOCK_WORD: [usize; 4] = [2, 1, 3, 2];

/// The four unstarred generators, `z_1^1, z_1^2, z_2^1, z_2^2`.
pub fn generators() -> [Gen; 4] {
    [Gen::z(1, 1), Gen::z(1, 2), Gen::z(2, 1), Gen::z(2, 2)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoxColor {
    White,
    /// `tau_0` on the slot's factor.
    Dark,
    /// The slot's factor becomes a circle coordinate.
    Light,
}

/// Slots are numbered 1 bottom-left, 2 top-left, 3 bottom-right, 4 top-right;
/// slot `k` acts on tensor factor `k` of the Fock representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoxDiagram {
    pub colors: [BoxColor; 4],
}

impl BoxDiagram {
    pub const fn new(colors: [BoxColor; 4]) -> Self {
        Self { colors }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 4 {
            return Err(Error::Config(format!("diagram {s:?} needs 4 slots")));
        }
        let mut colors = [BoxColor::White; 4];
        for (slot, c) in chars.iter().enumerate() {
            colors[slot] = match c.to_ascii_lowercase() {
                'w' => BoxColor::White,
                'd' => BoxColor::Dark,
                'l' => BoxColor::Light,
                other => return Err(Error::Config(format!("unknown box color {other:?}"))),
            };
        }
        Ok(Self { colors })
    }
}

impl fmt::Display for BoxDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.colors {
            f.write_str(match c {
                BoxColor::White => "w",
                BoxColor::Dark => "d",
                BoxColor::Light => "l",
            })?;
        }
        Ok(())
    }
}

/// The seven families of irreducible representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    Fock,
    Coherent,
    Q12,
    Q21,
    Q10,
    Q01,
    Q1,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Fock,
        Family::Coherent,
        Family::Q12,
        Family::Q21,
        Family::Q10,
        Family::Q01,
        Family::Q1,
    ];

    pub fn diagram(self) -> BoxDiagram {
        use BoxColor::*;
        BoxDiagram::new(match self {
            Family::Fock => [White, White, White, White],
            Family::Coherent => [White, Light, White, White],
            Family::Q12 => [Light, Dark, White, White],
            Family::Q21 => [White, Dark, White, Light],
            Family::Q10 => [Light, Dark, White, Light],
            Family::Q01 => [Dark, Dark, Light, White],
            Family::Q1 => [Dark, Dark, Light, Light],
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Fock => "Qf",
            Family::Coherent => "Qc",
            Family::Q12 => "Q12",
            Family::Q21 => "Q21",
            Family::Q10 => "Q10",
            Family::Q01 => "Q01",
            Family::Q1 => "Q1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().to_ascii_lowercase() == key || format!("{f:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arrows `a -> b` with `ker b ⊆ ker a`.
pub fn kernel_poset() -> Vec<(Family, Family)> {
    use Family::*;
    vec![
        (Coherent, Fock),
        (Q12, Coherent),
        (Q21, Coherent),
        (Q01, Q21),
        (Q10, Q21),
        (Q01, Q12),
        (Q10, Q12),
        (Q1, Q01),
        (Q1, Q10),
    ]
}

/// Families with no incoming arrow.
pub fn poset_bottom() -> Vec<Family> {
    let edges = kernel_poset();
    Family::ALL
        .into_iter()
        .filter(|f| !edges.iter().any(|(_, b)| b == f))
        .collect()
}

/// Images of the unstarred generators as exact tensor expressions.
#[derive(Clone, Debug)]
pub struct Representation {
    pub name: String,
    kinds: Vec<FactorKind>,
    images: BTreeMap<(u8, u8), ExactExpr>,
    /// Per circle factor: a fixed phase, or `None` to range over a grid.
    pinned: Vec<Option<f64>>,
}

impl Representation {
    pub fn new(name: impl Into<String>, kinds: Vec<FactorKind>, images: Vec<(Gen, ExactExpr)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, e) in images {
            if g.starred {
                return Err(Error::Construction(format!("image given for starred {g}")));
            }
            if e.kinds() != kinds.as_slice() {
                return Err(Error::Signature(format!("{g}: {:?} vs {:?}", e.kinds(), kinds)));
            }
            map.insert((g.lower, g.upper), e);
        }
        let pinned = vec![None; circle_count(&kinds)];
        Ok(Self {
            name: name.into(),
            kinds,
            images: map,
            pinned,
        })
    }

    pub fn kinds(&self) -> &[FactorKind] {
        &self.kinds
    }

    pub fn pinned(&self) -> &[Option<f64>] {
        &self.pinned
    }

    /// Fixes the phases of every circle factor.
    pub fn pin_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.pinned.len() {
            return Err(Error::SizeMismatch {
                expected: self.pinned.len(),
                found: phases.len(),
            });
        }
        self.pinned = phases.into_iter().map(Some).collect();
        Ok(self)
    }

    pub fn image(&self, g: Gen) -> Result<ExactExpr> {
        let e = self
            .images
            .get(&(g.lower, g.upper))
            .ok_or_else(|| Error::MissingSymbol(g.unstarred().to_string()))?;
        Ok(if g.starred { e.adjoint() } else { e.clone() })
    }

    pub fn evaluate(&self, e: &ExactElement) -> Result<ExactExpr> {
        e.evaluate(&self.kinds, |g| self.image(g))
    }

    pub fn evaluate_numeric(&self, e: &NumElement, q: f64) -> Result<NumExpr> {
        e.evaluate(&self.kinds, |g| Ok(self.image(g)?.to_numeric(q)))
    }

    /// One binding per point of the product grid over the free circles.
    pub fn bindings(&self, q: f64, grid: &[f64]) -> Vec<Binding<f64>> {
        let free = self.pinned.iter().filter(|p| p.is_none()).count();
        phase_tuples(free, grid)
            .into_iter()
            .map(|t| {
                let mut t = t.into_iter();
                let phases = self
                    .pinned
                    .iter()
                    .map(|p| p.unwrap_or_else(|| t.next().expect("free phase")))
                    .collect();
                Binding::with_phases(q, phases)
            })
            .collect()
    }

    /// `rep(z*) = rep(z)*` for every generator, in canonical form.
    pub fn adjoint_consistent(&self) -> Result<bool> {
        for g in generators() {
            let starred = self.evaluate(&ExactElement::gen(g.adjoint()))?;
            if starred != self.evaluate(&ExactElement::gen(g))?.adjoint() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sup over the free phases of `||P_N rep(a) P_N||`; with `refine`, a
    /// single free circle is searched off the grid as well.
    pub fn norm_of(&self, a: &NumElement, q: f64, n: usize, grid: &[f64], refine: bool) -> Result<f64> {
        let e = self.evaluate_numeric(a, q)?;
        if self.pinned.iter().all(Option::is_none) {
            return if refine {
                circle_sup_norm(&e, q, n, grid)
            } else {
                sup_norm_over_phases(&e, q, n, grid)
            };
        }
        let mut best: f64 = 0.0;
        for b in self.bindings(q, grid) {
            best = best.max(crate::norm::operator_norm(&e, &b, n)?);
        }
        Ok(best)
    }
}

fn fock4(legs: &[&[Atom]], c: Laurent) -> ExactExpr {
    ExactExpr::fock(legs, c)
}

fn with_kinds(kinds: &[FactorKind], legs: &[&[Atom]], c: Laurent) -> ExactExpr {
    ExactExpr::with_kinds(kinds, legs, c).expect("static legs match their kinds")
}

/// `pi_F = pi_{[2,1,3,2]} ∘ zeta`.
pub fn fock_rep() -> Result<Representation> {
    let pi = tensor_rep(&Word::new(FOCK_WORD.to_vec()), 4)?;
    let mut images = Vec::new();
    for g in generators() {
        let (c, (i, j)) = zeta_image(g, 2)?;
        images.push((g, pi.entry(i, j).scale(&c)));
    }
    Representation::new("pi_F", vec![Fock; 4], images)
}

/// The closed formulas for `pi_F`, with `C_q S` in the second factor of the
/// first summand of `z_1^1`.
pub fn fock_reference_formulas() -> Vec<(Gen, ExactExpr)> {
    let one = Laurent::one;
    let minus_q_inv = -Laurent::q_pow(-1);
    vec![
        (Gen::z(2, 2), fock4(&[&[], &[], &[Cq, S], &[]], one())),
        (Gen::z(2, 1), fock4(&[&[], &[], &[Dq], &[Cq, S]], one())),
        (Gen::z(1, 2), fock4(&[&[Cq, S], &[], &[Dq], &[]], one())),
        (
            Gen::z(1, 1),
            &fock4(&[&[Dq], &[Cq, S], &[], &[Dq]], one())
                + &fock4(&[&[Cq, S], &[], &[Sdag, Cq], &[Cq, S]], minus_q_inv),
        ),
    ]
}

/// The `z_1^1` formula with `S* C_q` in the second factor.
pub fn fock_printed_z11() -> ExactExpr {
    &fock4(&[&[Dq], &[Sdag, Cq], &[], &[Dq]], Laurent::one())
        + &fock4(&[&[Cq, S], &[], &[Sdag, Cq], &[Cq, S]], -Laurent::q_pow(-1))
}

/// `||e v_0||` for the joint vacuum at truncation `n`.
pub fn vacuum_residual(e: &NumExpr, binding: &Binding<f64>, n: usize) -> Result<f64> {
    let dims = dims_for(e.kinds(), n);
    Ok(apply(e, binding, &State::vacuum(dims))?.norm())
}

/// Applies the colors of `d` to the Fock images.
pub fn diagram_rep(d: &BoxDiagram) -> Result<Representation> {
    let fock = fock_rep()?;
    let one = Laurent::one();
    let mut images = Vec::new();
    let mut kinds = Vec::new();
    for g in generators() {
        let mut e = fock.image(g)?;
        for slot in (0..4).rev() {
            e = match d.colors[slot] {
                BoxColor::White => e,
                BoxColor::Dark => e.tau_eval(slot, &one, &one)?,
                BoxColor::Light => e.to_circle(slot)?,
            };
        }
        kinds = e.kinds().to_vec();
        images.push((g, e));
    }
    Representation::new(format!("diagram {d}"), kinds, images)
}

pub fn family_rep(f: Family) -> Result<Representation> {
    let mut r = diagram_rep(&f.diagram())?;
    r.name = f.name().to_string();
    Ok(r)
}

/// Sign `s` such that binding the coherent circle at `s phi` gives
/// `Omega_phi(z_1^1) v_0 = e^{i phi} v_0`.
pub fn coherent_phase_sign(q: f64) -> Result<f64> {
    let base = family_rep(Family::Coherent)?;
    let z11 = base.image(Gen::z(1, 1))?.to_numeric(q);
    let phi = 0.9_f64;
    let target = Complex::from_polar(1.0, phi);
    for sign in [1.0, -1.0] {
        let b = Binding::with_phases(q, vec![sign * phi]);
        let dims = dims_for(z11.kinds(), 4);
        let vac = State::vacuum(dims);
        let out = apply(&z11, &b, &vac)?;
        if out.sub(&vac.scaled(target)).norm() < 1e-12 {
            return Ok(sign);
        }
    }
    Err(Error::Construction(
        "no phase sign gives the coherent vacuum eigenvalue".into(),
    ))
}

/// `Omega_phi`, with the circle factor kept and pinned.
pub fn coherent_rep(phi: f64, q: f64) -> Result<Representation> {
    let sign = coherent_phase_sign(q)?;
    let mut r = family_rep(Family::Coherent)?.pin_phases(vec![sign * phi])?;
    r.name = format!("Omega_{phi}");
    Ok(r)
}

/// `Omega_0` on three Fock factors.
pub fn omega0() -> Result<Representation> {
    let c = family_rep(Family::Coherent)?;
    let mut images = Vec::new();
    for g in generators() {
        images.push((g, c.image(g)?.circle_at_zero(1)?));
    }
    Representation::new("Omega_0", vec![Fock; 3], images)
}

const XI_KINDS: [FactorKind; 3] = [Circle, Fock, Fock];
const PHI_KINDS: [FactorKind; 3] = [Fock, Fock, Circle];

/// `Xi_q` from its closed formulas.
pub fn xi_rep() -> Result<Representation> {
    let k = &XI_KINDS;
    let one = Laurent::one;
    Representation::new(
        "Xi_q",
        k.to_vec(),
        vec![
            (Gen::z(2, 2), with_kinds(k, &[&[], &[Cq, S], &[]], one())),
            (Gen::z(1, 2), with_kinds(k, &[&[Z], &[Dq], &[]], one())),
            (Gen::z(2, 1), with_kinds(k, &[&[], &[Dq], &[Cq, S]], one())),
            (
                Gen::z(1, 1),
                with_kinds(k, &[&[Z], &[Sdag, Cq], &[Cq, S]], -Laurent::q_pow(-1)),
            ),
        ],
    )
}

/// `Phi_q` from its closed formulas.
pub fn phi_rep() -> Result<Representation> {
    let k = &PHI_KINDS;
    let one = Laurent::one;
    Representation::new(
        "Phi_q",
        k.to_vec(),
        vec![
            (Gen::z(2, 2), with_kinds(k, &[&[], &[Cq, S], &[]], one())),
            (Gen::z(1, 2), with_kinds(k, &[&[Cq, S], &[Dq], &[]], one())),
            (Gen::z(2, 1), with_kinds(k, &[&[], &[Dq], &[Z]], one())),
            (
                Gen::z(1, 1),
                with_kinds(k, &[&[Cq, S], &[Sdag, Cq], &[Z]], -Laurent::q_pow(-1)),
            ),
        ],
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub representation: String,
    pub canonical_equal: bool,
    pub max_residual: f64,
    pub pass: bool,
}

/// Compares closed formulas with the diagram construction, canonically and
/// on every point of the phase grid.
pub fn cross_validate(
    direct: &Representation,
    family: Family,
    q: f64,
    n: usize,
    grid: &[f64],
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<CrossCheck> {
    let diagram = family_rep(family)?;
    let mut canonical_equal = true;
    let mut worst: f64 = 0.0;
    for g in generators() {
        let a = direct.image(g)?;
        let b = diagram.image(g)?;
        canonical_equal &= a == b;
        let diff = a.try_sub(&b)?.to_numeric(q);
        for binding in direct.bindings(q, grid) {
            worst = worst.max(max_residual(&diff, &binding, n, trials, rng)?);
        }
    }
    Ok(CrossCheck {
        representation: direct.name.clone(),
        canonical_equal,
        max_residual: worst,
        pass: canonical_equal && worst <= tol,
    })
}

/// `Pi_q(z) = z ⊗ Omega_0(z)`.
pub fn pi_q_rep() -> Result<Representation> {
    let o = omega0()?;
    let circle = with_kinds(&[Circle], &[&[Z]], Laurent::one());
    let mut images = Vec::new();
    for g in generators() {
        images.push((g, circle.tensor(&o.image(g)?)));
    }
    let mut kinds = vec![Circle];
    kinds.extend([Fock; 3]);
    Representation::new("Pi_q", kinds, images)
}

/// An operator on `(T ⊗ l2 ⊗ l2) ⊕ (l2 ⊗ l2 ⊗ T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumPair {
    pub xi: ExactExpr,
    pub phi: ExactExpr,
}

impl SumPair {
    pub fn try_mul(&self, other: &SumPair) -> Result<SumPair> {
        Ok(SumPair {
            xi: self.xi.try_mul(&other.xi)?,
            phi: self.phi.try_mul(&other.phi)?,
        })
    }

    pub fn adjoint(&self) -> SumPair {
        SumPair {
            xi: self.xi.adjoint(),
            phi: self.phi.adjoint(),
        }
    }
}

/// The limit operators `Z_i^j`.
pub fn limit_generators() -> Vec<(Gen, SumPair)> {
    let one = Laurent::one;
    let xi = |legs: &[&[Atom]]| with_kinds(&XI_KINDS, legs, one());
    let phi = |legs: &[&[Atom]]| with_kinds(&PHI_KINDS, legs, one());
    vec![
        (
            Gen::z(1, 1),
            SumPair {
                xi: xi(&[&[Z], &[Sdag], &[S]]),
                phi: phi(&[&[S], &[Sdag], &[Z]]),
            },
        ),
        (
            Gen::z(1, 2),
            SumPair {
                xi: xi(&[&[Z], &[P], &[]]),
                phi: phi(&[&[S], &[P], &[]]),
            },
        ),
        (
            Gen::z(2, 1),
            SumPair {
                xi: xi(&[&[], &[P], &[S]]),
                phi: phi(&[&[], &[P], &[Z]]),
            },
        ),
        (
            Gen::z(2, 2),
            SumPair {
                xi: xi(&[&[], &[S], &[]]),
                phi: phi(&[&[], &[S], &[]]),
            },
        ),
    ]
}

pub fn limit_generator(g: Gen) -> SumPair {
    limit_generators()
        .into_iter()
        .find(|(h, _)| *h == g.unstarred())
        .map(|(_, p)| if g.starred { p.adjoint() } else { p })
        .expect("four generators")
}

/// Generators of `B_0`: `S⊗S*⊗S, I⊗P⊗S, S⊗P⊗I, I⊗S⊗I`.
pub fn b0_generators() -> Vec<ExactExpr> {
    let one = Laurent::one;
    vec![
        fock4(&[&[S], &[Sdag], &[S]], one()),
        fock4(&[&[], &[P], &[S]], one()),
        fock4(&[&[S], &[P], &[]], one()),
        fock4(&[&[], &[S], &[]], one()),
    ]
}

/// Multiplier applied to a generator before its `q -> 0` limit is taken:
/// `-q` on `z_1^1`, 1 otherwise.
pub fn limit_scale(g: Gen) -> Laurent {
    if g.unstarred() == Gen::z(1, 1) {
        -Laurent::q()
    } else {
        Laurent::one()
    }
}

/// `q -> 0` limits of the scaled `Omega_0` images, matched to the `B_0`
/// generator with the same shape.
pub fn omega0_limits() -> Result<Vec<(Gen, ExactExpr)>> {
    let o = omega0()?;
    generators()
        .into_iter()
        .map(|g| Ok((g, o.image(g)?.scale(&limit_scale(g)).limit_q0()?)))
        .collect()
}

/// Max over the phase grids of the component norms.
pub fn sum_norm(parts: &[NumExpr], q: f64, n: usize, grid: &[f64]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for p in parts {
        best = best.max(sup_norm_over_phases(p, q, n, grid)?);
    }
    Ok(best)
}

/// Interior residual of each relation under `rep`, maximized over the grid.
pub fn relation_residuals(
    rep: &Representation,
    relations: &[Relation],
    q: f64,
    n: usize,
    grid: &[f64],
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<Vec<ResidualEntry>> {
    let bindings = rep.bindings(q, grid);
    let mut out = Vec::with_capacity(relations.len());
    for r in relations {
        let e = rep.evaluate(&r.element)?;
        let mut worst: f64 = 0.0;
        if !e.is_zero() {
            let num = e.to_numeric(q);
            for b in &bindings {
                worst = worst.max(max_residual(&num, b, n, trials, rng)?);
            }
        }
        out.push(ResidualEntry {
            label: r.label.clone(),
            residual: worst,
            pass: worst <= tol,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TermEntry {
    pub legs: Vec<String>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorEntry {
    pub generator: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kinds: Vec<String>,
    pub diagram: Option<String>,
    pub generators: Vec<GeneratorEntry>,
}

pub fn catalog_entry(rep: &Representation, diagram: Option<BoxDiagram>, q: f64) -> Result<CatalogEntry> {
    let mut generators_out = Vec::new();
    for g in generators() {
        let e = rep.image(g)?.to_numeric(q);
        let terms = e
            .terms()
            .map(|(legs, c): (&[crate::LegWord], &Complex64)| TermEntry {
                legs: legs.iter().map(|l| l.to_string()).collect(),
                re: c.re,
                im: c.im,
            })
            .collect();
        generators_out.push(GeneratorEntry {
            generator: g.to_string(),
            terms,
        });
    }
    Ok(CatalogEntry {
        name: rep.name.clone(),
        kinds: rep.kinds.iter().map(|k| k.to_string()).collect(),
        diagram: diagram.map(|d| d.to_string()),
        generators: generators_out,
    })
}

/// Every family plus `Omega_0`, `Xi_q`, `Phi_q` and `Pi_q` at `q`.
pub fn catalog(q: f64) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for f in Family::ALL {
        out.push(catalog_entry(&family_rep(f)?, Some(f.diagram()), q)?);
    }
    for r in [omega0()?, xi_rep()?, phi_rep()?, pi_q_rep()?] {
        out.push(catalog_entry(&r, None, q)?);
    }
    Ok(out)
}

/// Whether `e` is a scalar multiple of the identity (`Some(c)`).
pub fn as_scalar(e: &ExactExpr) -> Option<Laurent> {
    if e.is_zero() {
        return Some(Laurent::zero());
    }
    let mut it = e.terms();
    let (legs, c) = it.next()?;
    if it.next().is_none() && legs.iter().all(|l| l.is_identity()) {
        Some(c.clone())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::phase_grid;
    use crate::polmat::{element_x, explicit_relations_n2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn fock_matches_closed_formulas() {
        let f = fock_rep().unwrap();
        for (g, e) in fock_reference_formulas() {
            assert_eq!(f.image(g).unwrap(), e, "{g}");
        }
        assert_ne!(f.image(Gen::z(1, 1)).unwrap(), fock_printed_z11());
    }

    #[test]
    fn fock_vacuum_is_annihilated() {
        let f = fock_rep().unwrap();
        let b = Binding::new(0.5);
        for g in generators() {
            let e = f.image(g.adjoint()).unwrap().to_numeric(0.5);
            assert_eq!(vacuum_residual(&e, &b, 6).unwrap(), 0.0, "{g}");
        }
        let printed = fock_printed_z11().adjoint().to_numeric(0.5);
        assert!(vacuum_residual(&printed, &b, 6).unwrap() > 0.1);
    }

    #[test]
    fn diagram_kinds() {
        assert_eq!(family_rep(Family::Fock).unwrap().kinds(), &[Fock; 4]);
        assert_eq!(
            family_rep(Family::Coherent).unwrap().kinds(),
            &[Fock, Circle, Fock, Fock]
        );
        assert_eq!(family_rep(Family::Q12).unwrap().kinds(), &XI_KINDS);
        assert_eq!(family_rep(Family::Q21).unwrap().kinds(), &PHI_KINDS);
        assert_eq!(family_rep(Family::Q1).unwrap().kinds(), &[Circle, Circle]);
        let fock = family_rep(Family::Fock).unwrap();
        let direct = fock_rep().unwrap();
        for g in generators() {
            assert_eq!(fock.image(g).unwrap(), direct.image(g).unwrap());
        }
    }

    #[test]
    fn boundary_formulas_agree_with_diagrams() {
        let grid = phase_grid(8);
        let xi = cross_validate(&xi_rep().unwrap(), Family::Q12, 0.5, 6, &grid, 2, 1e-10, &mut rng()).unwrap();
        let phi = cross_validate(&phi_rep().unwrap(), Family::Q21, 0.5, 6, &grid, 2, 1e-10, &mut rng()).unwrap();
        assert!(xi.pass && phi.pass, "{xi:?} {phi:?}");
    }

    #[test]
    fn coherent_sign_and_eigenvalue() {
        assert_eq!(coherent_phase_sign(0.5).unwrap(), 1.0);
        let phi = std::f64::consts::FRAC_PI_3;
        let r = coherent_rep(phi, 0.5).unwrap();
        let b = &r.bindings(0.5, &[])[0];
        let dims = dims_for(r.kinds(), 6);
        let vac = State::vacuum(dims);
        let z11 = r.image(Gen::z(1, 1)).unwrap().to_numeric(0.5);
        let out = apply(&z11, b, &vac).unwrap();
        assert!(out.sub(&vac.scaled(Complex::from_polar(1.0, phi))).norm() < 1e-12);
        let z21s = r.image(Gen::zs(2, 1)).unwrap().to_numeric(0.5);
        assert_eq!(vacuum_residual(&z21s, b, 6).unwrap(), 0.0);
    }

    #[test]
    fn omega0_of_x() {
        let x = omega0().unwrap().evaluate(&element_x()).unwrap();
        let expect = fock4(&[&[Dq, Dq], &[Dq, Dq, Dq, Dq], &[Dq, Dq]], Laurent::one());
        let diff = x.try_sub(&expect).unwrap().to_numeric(0.5);
        let r = max_residual(&diff, &Binding::new(0.5), 8, 3, &mut rng()).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn pi_q_of_z22_and_x() {
        let p = pi_q_rep().unwrap();
        let expect = with_kinds(&[Circle, Fock, Fock, Fock], &[&[Z], &[], &[Cq, S], &[]], Laurent::one());
        assert_eq!(p.image(Gen::z(2, 2)).unwrap(), expect);
        let x = p.evaluate(&element_x()).unwrap();
        assert_eq!(x.kinds()[0], Circle);
        for (legs, _) in x.terms() {
            assert!(legs[0].is_identity());
        }
    }

    #[test]
    fn fully_colored_diagram_is_scalar() {
        let r = family_rep(Family::Q1).unwrap();
        for g in generators() {
            let e = r.image(g).unwrap();
            assert!(e
                .terms()
                .all(|(legs, _)| legs.iter().all(|l| l.atoms().iter().all(|a| a.is_circle()))));
        }
        let grid = phase_grid(4);
        let res = relation_residuals(&r, &explicit_relations_n2(), 0.5, 4, &grid, 1, 1e-12, &mut rng()).unwrap();
        assert!(res.iter().all(|e| e.pass), "{res:?}");
    }

    #[test]
    fn relations_hold_for_boundary_reps() {
        let grid = phase_grid(4);
        for r in [xi_rep().unwrap(), phi_rep().unwrap(), omega0().unwrap()] {
            let res = relation_residuals(&r, &explicit_relations_n2(), 0.7, 8, &grid, 2, 1e-9, &mut rng()).unwrap();
            assert!(res.iter().all(|e| e.pass), "{}: {res:?}", r.name);
        }
    }

    #[test]
    fn starred_images_are_adjoints() {
        for r in [fock_rep().unwrap(), xi_rep().unwrap(), pi_q_rep().unwrap()] {
            assert!(r.adjoint_consistent().unwrap());
        }
    }

    #[test]
    fn poset_shape() {
        let edges = kernel_poset();
        assert_eq!(edges.len(), 9);
        assert!(edges.contains(&(Family::Coherent, Family::Fock)));
        assert_eq!(poset_bottom(), vec![Family::Q1]);
    }

    #[test]
    fn limits_of_omega0_are_b0_generators() {
        let b0 = b0_generators();
        for (_, lim) in omega0_limits().unwrap() {
            assert!(b0.contains(&lim), "{lim}");
        }
        let lim = omega0_limits().unwrap();
        assert_eq!(lim[3].1, fock4(&[&[], &[S], &[]], Laurent::one()));
    }

    #[test]
    fn diagram_parse_roundtrip() {
        let d = BoxDiagram::parse("lDwL").unwrap();
        assert_eq!(d, Family::Q10.diagram());
        assert_eq!(d.to_string(), "ldwl");
        assert!(BoxDiagram::parse("lwx").is_err());
        assert_eq!(Family::parse("q12").unwrap(), Family::Q12);
        assert_eq!(Family::parse("coherent").unwrap(), Family::Coherent);
    }

    #[test]
    fn catalog_serializes() {
        let c = catalog(0.5).unwrap();
        assert_eq!(c.len(), 11);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"C_qS\""));
    }

    #[test]
    fn scalar_detection() {
        let id = ExactExpr::identity(vec![Fock; 2]).scale(&Laurent::q());
        assert_eq!(as_scalar(&id), Some(Laurent::q()));
        assert_eq!(as_scalar(&fock4(&[&[S]], Laurent::one())), None);
    }
}
