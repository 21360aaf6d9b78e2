//! The Fock pairing `<f1, f2> = f1(D) f2 |_0` on polynomials with rational
//! coefficients.

use std::hash::Hash;

use num_rational::BigRational;
use num_traits::Zero;

use crate::invariants::{expand, GenPoly};
use crate::poly::{MultiPoly, Poly};

/// `<x^a, x^b> = Π a_i! δ_{a,b}`, extended bilinearly.
pub fn pair<V: Ord + Clone + Hash>(f1: &Poly<V>, f2: &Poly<V>) -> BigRational {
    let (small, large) = if f1.len() <= f2.len() { (f1, f2) } else { (f2, f1) };
    let mut acc = BigRational::zero();
    for (m, c) in small.terms() {
        let d = large.coefficient(m);
        if !d.is_zero() {
            acc += c * d * BigRational::from_integer(m.factorial_weight());
        }
    }
    acc
}

/// The same pairing computed literally: differentiate, then evaluate at zero.
pub fn pair_by_differentiation<V: Ord + Clone + Hash>(f1: &Poly<V>, f2: &Poly<V>) -> BigRational {
    f1.apply_diff(f2, |_| true).coefficient(&crate::poly::Monomial::one())
}

/// Pairing of a column-free generator expression with `f`: generators are
/// truncated to the largest column index appearing in `f`, since terms in
/// higher columns pair to zero.
pub fn pair_truncated(p: &GenPoly, f: &MultiPoly) -> BigRational {
    pair_truncated_at(p, f, f.max_column())
}

/// [`pair_truncated`] with an explicit bound, which must be at least the
/// largest column of `f` for the result to be the projective-limit value.
pub fn pair_truncated_at(p: &GenPoly, f: &MultiPoly, k: u32) -> BigRational {
    pair(&expand(p, k), f)
}
