//! Truncated series for `d_q` in terms of the shift.

use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{Atom, FactorKind};
use crate::norm::operator_norm;
use crate::state::Binding;
use crate::{ExactExpr, Laurent};

/// `S^j P S*^j`, the projection onto `e_j`.
pub fn basis_projection(j: usize) -> ExactExpr {
    let mut word = vec![Atom::S; j];
    word.push(Atom::P);
    word.extend(std::iter::repeat_n(Atom::Sdag, j));
    ExactExpr::fock(&[&word], Laurent::one())
}

/// `sum_{j<k} q^j S^j P S*^j`.
pub fn dq_partial_sum(k: usize) -> ExactExpr {
    let mut sum = ExactExpr::zero(vec![FactorKind::Fock]);
    for j in 0..k {
        sum = &sum + &basis_projection(j).scale(&Laurent::q_pow(j as i32));
    }
    sum
}

/// `||d_q - sum_{j<k} q^j S^j P S*^j||` at truncation `n`.
pub fn dq_series_check(q: f64, n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Config(format!("series length {k} exceeds truncation {n}")));
    }
    let d = ExactExpr::fock(&[&[Atom::Dq]], Laurent::one());
    operator_norm(&(&d - &dq_partial_sum(k)), &Binding::new(q), n)
}
