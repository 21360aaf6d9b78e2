use num_rational::BigRational;
use num_traits::Zero;
use tensorinv::cg::{cg_coefficient, cg_coefficient_via_tilde, column_content, monomial_states, tilde_map_formal, verify_equivariance};
use tensorinv::contragredient::{lowest_weight_vector, orbit_span};
use tensorinv::invariants::{invariant_basis, TensorProblem};
use tensorinv::linalg::{q, QMatrix};
use tensorinv::poly::{act_rows, RowLayout};
use tensorinv::Signature;

fn sig(raw: &[i64]) -> Signature {
    Signature::normalize(raw).unwrap()
}

fn problem(factors: &[&[i64]], target: &[i64]) -> TensorProblem {
    TensorProblem::new(factors.iter().map(|f| sig(f)).collect(), sig(target), None).unwrap()
}

#[test]
fn both_evaluation_orders_agree() {
    for prob in [
        problem(&[&[1], &[1], &[1]], &[2, 1]),
        problem(&[&[2, 1], &[1]], &[2, 1, 1]),
        problem(&[&[2], &[1, 1]], &[2, 1, 1]),
        problem(&[&[1], &[2], &[2], &[3]], &[6, 2]),
    ] {
        let basis = invariant_basis(&prob).unwrap();
        let f_star = lowest_weight_vector(prob.target(), prob.q()).unwrap();
        let states = monomial_states(&prob, prob.q() as u32);
        let mut rows = Vec::new();
        for state in &states {
            let mut row = Vec::new();
            for inv in &basis.elements {
                let direct = cg_coefficient(&prob, inv, state, &f_star).unwrap();
                assert_eq!(direct, cg_coefficient_via_tilde(&prob, inv, state, &f_star).unwrap());
                if column_content(state) != column_content(std::slice::from_ref(&f_star)) {
                    assert!(direct.is_zero());
                }
                row.push(direct);
            }
            rows.push(row);
        }
        // the CG matrix over all states has full rank in the invariants
        let m = QMatrix::from_rows(rows).unwrap();
        assert_eq!(m.rank(), basis.dimension(), "{:?}", prob);
    }
}

#[test]
fn tilde_is_borel_covariant_in_factor_blocks() {
    let prob = problem(&[&[2, 1], &[1]], &[2, 1, 1]);
    let basis = invariant_basis(&prob).unwrap();
    let f_star = lowest_weight_vector(prob.target(), prob.q()).unwrap();
    let b = QMatrix::from_i64(&[&[2, 0, 0], &[5, -3, 0], &[0, 0, 7]]).unwrap();
    let chi = q(2i64.pow(2) * -3 * 7);
    for inv in &basis.elements {
        let t = tilde_map_formal(inv, &f_star);
        assert!(!t.is_zero());
        assert_eq!(act_rows(&b, RowLayout { p: 3, q: 0 }, &t).unwrap(), t.scale(&chi));
    }
}

#[test]
fn equivariance_on_several_problems() {
    let g2 = [
        QMatrix::from_i64(&[&[1, 2], &[1, 3]]).unwrap(),
        QMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap(),
        QMatrix::diagonal(&[q(2), BigRational::new(1.into(), 3.into())]),
    ];
    let g3 = [
        QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 1, 2]]).unwrap(),
        QMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]).unwrap(),
    ];
    let cases = [
        (problem(&[&[1], &[2], &[2], &[3]], &[7, 1]), &g2[..]),
        (problem(&[&[1], &[1], &[1]], &[2, 1]), &g2[..]),
        (problem(&[&[2, 1], &[1]], &[2, 1, 1]), &g3[..]),
    ];
    for (prob, gs) in cases {
        let basis = invariant_basis(&prob).unwrap();
        for g in gs {
            let f_star = lowest_weight_vector(prob.target(), prob.q()).unwrap();
            let span = orbit_span(&f_star, g.rows() as u32);
            for inv in &basis.elements {
                assert!(verify_equivariance(inv, span.basis(), g).unwrap(), "{:?}", prob);
            }
        }
    }
}
