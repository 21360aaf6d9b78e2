//! Embedded copies of target states inside the tensor product and
//! Clebsch-Gordan coefficients through the Fock pairing.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::contragredient::PolySpan;
use crate::error::{Error, Result};
use crate::fock::{pair, pair_truncated_at};
use crate::invariants::{expand, GenPoly, TensorProblem};
use crate::linalg::QMatrix;
use crate::poly::{act_columns, Monomial, MultiPoly, Var};
use crate::signature::Signature;

/// `f~(Z) = I(Z, D_W) f*(W) |_{W=0}`.
pub fn tilde_map(invariant: &MultiPoly, f_star: &MultiPoly) -> MultiPoly {
    invariant.apply_diff(f_star, Var::is_w).set_zero(Var::is_w)
}

/// [`tilde_map`] for a formal invariant, expanded up to the largest column
/// of `f_star`; higher columns cannot survive the differentiation.
pub fn tilde_map_formal(invariant: &GenPoly, f_star: &MultiPoly) -> MultiPoly {
    tilde_map(&expand(invariant, f_star.max_column()), f_star)
}

fn check_allocation(problem: &TensorProblem, states: &[MultiPoly]) -> Result<()> {
    if states.len() != problem.factors().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} states for {} factors",
            states.len(),
            problem.factors().len()
        )));
    }
    for (i, s) in states.iter().enumerate() {
        let rows = problem.factor_rows(i);
        if s.variables().iter().any(|v| !v.is_z() || !rows.contains(&v.row)) {
            return Err(Error::RowAllocationViolation { index: i });
        }
    }
    Ok(())
}

fn column_bound(states: &[MultiPoly], f_star: &MultiPoly) -> u32 {
    states.iter().map(MultiPoly::max_column).chain(std::iter::once(f_star.max_column())).max().unwrap_or(0)
}

fn product(states: &[MultiPoly]) -> MultiPoly {
    states.iter().fold(MultiPoly::one(), |acc, s| &acc * s)
}

/// `<I | f_1 ... f_r f*>`, with the invariant truncated to the largest column
/// index among the inputs.
pub fn cg_coefficient(problem: &TensorProblem, invariant: &GenPoly, states: &[MultiPoly], f_star: &MultiPoly) -> Result<BigRational> {
    check_allocation(problem, states)?;
    let k = column_bound(states, f_star);
    Ok(pair_truncated_at(invariant, &(&product(states) * f_star), k))
}

/// The same coefficient evaluated as `<f~ | f_1 ... f_r>`.
pub fn cg_coefficient_via_tilde(
    problem: &TensorProblem,
    invariant: &GenPoly,
    states: &[MultiPoly],
    f_star: &MultiPoly,
) -> Result<BigRational> {
    check_allocation(problem, states)?;
    let k = column_bound(states, f_star);
    let tilde = tilde_map(&expand(invariant, k), f_star);
    Ok(pair(&tilde, &product(states)))
}

/// `f(W g^{-T})`, the contragredient action on `W` columns.
pub fn contragredient_action(g: &QMatrix, f: &MultiPoly) -> Result<MultiPoly> {
    let h = g.inverse()?.transpose();
    act_columns(&QMatrix::identity(g.rows()), &h, f)
}

/// Checks that `f* ↦ f~` intertwines the contragredient action with the
/// column action on `Z`: writing `R(g) f*_ξ = Σ c_ξ' f*_ξ'` in the span of
/// `f_star_basis`, we need `f~_ξ(Z g^{-T}) = Σ c_ξ' f~_ξ'(Z)`.
pub fn verify_equivariance(invariant: &GenPoly, f_star_basis: &[MultiPoly], g: &QMatrix) -> Result<bool> {
    let k = g.rows() as u32;
    if f_star_basis.iter().any(|f| f.max_column() > k) {
        return Err(Error::DimensionMismatch("basis uses columns beyond the action".into()));
    }
    let mut span = PolySpan::new();
    for f in f_star_basis {
        if !span.insert(f) {
            return Err(Error::DimensionMismatch("basis is linearly dependent".into()));
        }
    }
    let inv = expand(invariant, k);
    let tildes: Vec<MultiPoly> = f_star_basis.iter().map(|f| tilde_map(&inv, f)).collect();
    let h = g.inverse()?.transpose();
    let id = QMatrix::identity(g.rows());
    for (f, t) in f_star_basis.iter().zip(&tildes) {
        let c = span.express(&act_columns(&id, &h, f)?)?;
        let lhs = act_columns(&h, &id, t)?;
        let rhs = tildes
            .iter()
            .zip(&c)
            .filter(|(_, x)| !x.is_zero())
            .fold(MultiPoly::zero(), |acc, (t2, x)| &acc + &t2.scale(x));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monomials in `Z` rows `rows` with row degrees `m` and columns `<= k`.
pub fn row_monomials(rows: std::ops::Range<u32>, m: &Signature, k: u32) -> Vec<MultiPoly> {
    let mut out = vec![Monomial::one()];
    for (row, &deg) in rows.zip(m.entries()) {
        let mut next = Vec::new();
        for base in &out {
            compositions(deg as u32, k, &mut |parts| {
                let m = Monomial::from_powers(
                    parts.iter().enumerate().filter(|(_, &e)| e > 0).map(|(c, &e)| (Var::z(row, c as u32 + 1), e)),
                );
                next.push(base.mul(&m));
            });
        }
        out = next;
    }
    out.into_iter().map(|m| MultiPoly::term(m, BigRational::one())).collect()
}

fn compositions(total: u32, parts: u32, visit: &mut impl FnMut(&[u32])) {
    fn go(left: u32, slots: u32, acc: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if slots == 1 {
            acc.push(left);
            visit(acc);
            acc.pop();
            return;
        }
        for v in (0..=left).rev() {
            acc.push(v);
            go(left - v, slots - 1, acc, visit);
            acc.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    go(total, parts, &mut Vec::new(), visit);
}

/// Product states: one monomial per factor in its allocated rows, columns
/// `<= k`.
pub fn monomial_states(problem: &TensorProblem, k: u32) -> Vec<Vec<MultiPoly>> {
    let mut out: Vec<Vec<MultiPoly>> = vec![Vec::new()];
    for (i, m) in problem.factors().iter().enumerate() {
        let choices = row_monomials(problem.factor_rows(i), m, k);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Degree of each column over a list of polynomials' leading monomials.
pub fn column_content(states: &[MultiPoly]) -> Vec<u32> {
    let mut content: Vec<u32> = Vec::new();
    for s in states {
        if let Some((m, _)) = s.terms().next() {
            for (v, e) in m.powers() {
                let c = v.col as usize;
                if content.len() < c {
                    content.resize(c, 0);
                }
                content[c - 1] += e;
            }
        }
    }
    while content.last() == Some(&0) {
        content.pop();
    }
    content
}

/// One row of a CG table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgRecord {
    pub invariant: usize,
    pub state: Vec<String>,
    pub value: String,
}

/// CG values of every invariant against every state, paired with a fixed
/// `f_star`; states whose column content differs from `f_star`'s are
/// skipped since they pair to zero.
pub fn cg_table(problem: &TensorProblem, invariants: &[GenPoly], states: &[Vec<MultiPoly>], f_star: &MultiPoly) -> Result<Vec<CgRecord>> {
    let target_content = column_content(std::slice::from_ref(f_star));
    let mut out = Vec::new();
    for state in states {
        if column_content(state) != target_content {
            continue;
        }
        for (i, inv) in invariants.iter().enumerate() {
            let value = cg_coefficient(problem, inv, state, f_star)?;
            out.push(CgRecord {
                invariant: i + 1,
                state: state.iter().map(ToString::to_string).collect(),
                value: format!("{}/{}", value.numer(), value.denom()),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contragredient::{lowest_weight_vector, orbit_span};
    use crate::invariants::{invariant_basis, Gen};
    use crate::linalg::q;
    use crate::poly::{act_rows, w, z, RowLayout};

    fn sig(raw: &[i64]) -> Signature {
        Signature::normalize(raw).unwrap()
    }

    fn worked() -> TensorProblem {
        TensorProblem::new(vec![sig(&[1]), sig(&[2]), sig(&[2]), sig(&[3])], sig(&[7, 1]), None).unwrap()
    }

    #[test]
    fn tilde_examples() {
        let p11 = GenPoly::var(Gen { alpha: 1, beta: 1 });
        assert_eq!(tilde_map_formal(&p11, &w(1, 1)), z(1, 1));
        assert!(tilde_map_formal(&p11, &w(1, 1).pow(2)).is_zero());
        let basis = invariant_basis(&worked()).unwrap();
        let f_star = lowest_weight_vector(&sig(&[7, 1]), 2).unwrap();
        let t = tilde_map_formal(&basis.elements[0], &f_star);
        assert!(!t.is_zero());
        assert_eq!(t.degree(), Some(8));
        assert!(t.variables().iter().all(|v| v.is_z() && v.row <= 4));
    }

    #[test]
    fn tilde_is_borel_covariant() {
        let prob = worked();
        let basis = invariant_basis(&prob).unwrap();
        let f_star = lowest_weight_vector(&sig(&[7, 1]), 2).unwrap();
        let b = QMatrix::diagonal(&[q(2), q(3), q(-1), q(5)]);
        let chi = q(2 * 9 * 5i64.pow(3));
        for inv in &basis.elements {
            let t = tilde_map_formal(inv, &f_star);
            assert_eq!(act_rows(&b, RowLayout { p: 4, q: 0 }, &t).unwrap(), t.scale(&chi));
        }
    }

    #[test]
    fn sample_coefficient_vanishes_by_column_weight() {
        let prob = worked();
        let basis = invariant_basis(&prob).unwrap();
        let states = vec![z(1, 1), z(2, 1).pow(2), z(3, 1).pow(2), z(4, 1).pow(3)];
        let f_star = &(&w(1, 1).pow(7) * &w(2, 2)) - &(&w(1, 1).pow(6) * &w(2, 1));
        for inv in &basis.elements {
            assert_eq!(cg_coefficient(&prob, inv, &states, &f_star).unwrap(), q(0));
        }
        // moving one Z entry into column 2 matches the column content of f*
        let states = vec![z(1, 1), z(2, 1).pow(2), z(3, 1).pow(2), &z(4, 1).pow(2) * &z(4, 2)];
        let f_star = lowest_weight_vector(&sig(&[7, 1]), 2).unwrap();
        let values: Vec<BigRational> =
            basis.elements.iter().map(|i| cg_coefficient(&prob, i, &states, &f_star).unwrap()).collect();
        assert!(values.iter().any(|v| !v.is_zero()));
        for (inv, v) in basis.elements.iter().zip(&values) {
            assert_eq!(&cg_coefficient_via_tilde(&prob, inv, &states, &f_star).unwrap(), v);
        }
    }

    #[test]
    fn trivial_coefficients() {
        let prob = worked();
        let states = vec![z(1, 1), z(2, 1).pow(2), z(3, 1).pow(2), z(4, 1).pow(3)];
        let f_star = w(1, 1).pow(8);
        assert_eq!(cg_coefficient(&prob, &GenPoly::zero(), &states, &f_star).unwrap(), q(0));
        let short = vec![z(1, 1), z(2, 1), z(3, 1).pow(2), z(4, 1).pow(3)];
        let basis = invariant_basis(&prob).unwrap();
        assert_eq!(cg_coefficient(&prob, &basis.elements[0], &short, &f_star).unwrap(), q(0));
        let misplaced = vec![z(2, 1), z(2, 1).pow(2), z(3, 1).pow(2), z(4, 1).pow(3)];
        assert_eq!(
            cg_coefficient(&prob, &basis.elements[0], &misplaced, &f_star),
            Err(Error::RowAllocationViolation { index: 0 })
        );
    }

    #[test]
    fn state_enumeration() {
        let prob = worked();
        let states = monomial_states(&prob, 2);
        assert_eq!(states.len(), 2 * 3 * 3 * 4);
        let matching = states.iter().filter(|s| column_content(s) == vec![7, 1]).count();
        assert_eq!(matching, 4);
        assert_eq!(row_monomials(1..3, &sig(&[1, 1]), 2).len(), 4);
    }

    #[test]
    fn equivariance() {
        let prob = worked();
        let basis = invariant_basis(&prob).unwrap();
        let f_star = lowest_weight_vector(&sig(&[7, 1]), 2).unwrap();
        let span = orbit_span(&f_star, 2);
        for g in [
            QMatrix::identity(2),
            QMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap(),
            QMatrix::diagonal(&[q(3), q(-2)]),
        ] {
            for inv in &basis.elements {
                assert!(verify_equivariance(inv, span.basis(), &g).unwrap());
            }
        }
        let lone = [f_star];
        let g = QMatrix::from_i64(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(verify_equivariance(&basis.elements[0], &lone, &g), Err(Error::SpanViolation));
    }
}
