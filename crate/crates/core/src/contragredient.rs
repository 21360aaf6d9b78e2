//! Contragredient representations through index reversal, modelled directly
//! in the `W` variables.
//!
//! The polynomial we call the lowest weight vector follows the usual naming
//! for the twisted model; calling it lowest rather than highest is a
//! convention.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix};
use crate::poly::{Block, Monomial, MultiPoly, Var};
use crate::signature::Signature;

/// The anti-diagonal permutation `s` of a given size, `s = s^-1 = s^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReversalMatrix {
    pub size: usize,
}

impl ReversalMatrix {
    pub fn new(size: usize) -> Self {
        ReversalMatrix { size }
    }

    /// 1-based index bijection `i ↦ size + 1 - i`.
    pub fn reverse(&self, i: u32) -> u32 {
        self.size as u32 + 1 - i
    }

    pub fn matrix(&self) -> QMatrix {
        let mut s = QMatrix::zeros(self.size, self.size);
        for i in 0..self.size {
            s[(i, self.size - 1 - i)] = BigRational::one();
        }
        s
    }
}

/// `f(s_rows X s_cols)` on the variables of one block, as a pure renaming.
pub fn reverse_indices(f: &MultiPoly, block: Block, rows: ReversalMatrix, cols: ReversalMatrix) -> MultiPoly {
    f.map_vars(|v| {
        if v.block == block {
            Var {
                block,
                row: rows.reverse(v.row),
                col: cols.reverse(v.col),
            }
        } else {
            *v
        }
    })
}

/// Determinant of the `i x i` window with top-left corner at `(row0+1, 1)`.
fn leading_minor(block: Block, row0: u32, size: u32) -> MultiPoly {
    let mut det = MultiPoly::zero();
    let mut perm: Vec<u32> = (1..=size).collect();
    permute(&mut perm, 0, true, &mut |p, even| {
        let m = Monomial::from_powers(p.iter().enumerate().map(|(i, &c)| {
            (
                Var {
                    block,
                    row: row0 + i as u32 + 1,
                    col: c,
                },
                1,
            )
        }));
        det.add_term(m, if even { q(1) } else { q(-1) });
    });
    det
}

fn permute(p: &mut [u32], start: usize, even: bool, visit: &mut impl FnMut(&[u32], bool)) {
    if start == p.len() {
        visit(p, even);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute(p, start + 1, if i == start { even } else { !even }, visit);
        p.swap(start, i);
    }
}

fn weight_vector(block: Block, m: &Signature, row_offset: u32, k: usize) -> Result<MultiPoly> {
    m.require_polynomial()?;
    if m.len() > k {
        return Err(Error::RankTooSmall { len: m.len(), k });
    }
    let mut f = MultiPoly::one();
    for i in 1..=m.len() {
        let e = m.get(i - 1) - m.get(i);
        if e > 0 {
            f = &f * &leading_minor(block, row_offset, i as u32).pow(e as u32);
        }
    }
    Ok(f)
}

/// `Π_i Δ_i^{m_i - m_{i+1}}` with `Δ_i` the leading `i x i` minor of the
/// `Z` rows `row_offset+1, ...` and columns `1, ...`.
pub fn highest_weight_vector(m: &Signature, row_offset: u32, k: usize) -> Result<MultiPoly> {
    weight_vector(Block::Z, m, row_offset, k)
}

/// Lowest weight vector of the contragredient model in `W` rows `1..q`:
/// the highest weight vector with `Z` renamed to `W`, which is
/// `f_max(s W s)` read in the reversed stacked row order.
pub fn lowest_weight_vector(m: &Signature, q: usize) -> Result<MultiPoly> {
    weight_vector(Block::W, m, 0, q)
}

/// `(m_1, ..., m_l) ↦ (-m_l, ..., -m_1)`.
pub fn negate_signature(m: &Signature) -> Signature {
    m.negate()
}

/// Column raising and lowering derivations `x[r,a] ↦ x[r,c]` for
/// `a ≠ c ≤ k`, acting on every variable.
fn column_derivation(f: &MultiPoly, a: u32, c: u32) -> MultiPoly {
    f.derivation(|v| {
        (v.col == a).then(|| {
            MultiPoly::var(Var {
                block: v.block,
                row: v.row,
                col: c,
            })
        })
    })
}

/// Exact linear span of polynomials with a reduced echelon basis.
#[derive(Debug, Clone, Default)]
pub struct PolySpan {
    basis: Vec<MultiPoly>,
    keys: Vec<Monomial<Var>>,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl PolySpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    fn coordinates(&mut self, f: &MultiPoly) -> Vec<BigRational> {
        for (m, _) in f.terms() {
            if !self.keys.contains(m) {
                self.keys.push(m.clone());
                for r in &mut self.rows {
                    r.push(BigRational::zero());
                }
            }
        }
        self.keys.iter().map(|m| f.coefficient(m)).collect()
    }

    /// Residual of `v` after eliminating every stored pivot in insertion
    /// order; each row is already zero at the pivots before it.
    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone() / &row[p];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
        v
    }

    /// Add `f` if it is independent of the span; returns whether it was added.
    pub fn insert(&mut self, f: &MultiPoly) -> bool {
        let v = self.coordinates(f);
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                self.rows.push(v);
                self.pivots.push(p);
                self.basis.push(f.clone());
                true
            }
        }
    }

    /// Coefficients `c` with `f = Σ c_i basis_i`, or `SpanViolation`.
    pub fn express(&self, f: &MultiPoly) -> Result<Vec<BigRational>> {
        if f.terms().any(|(m, _)| !self.keys.contains(m)) {
            return Err(Error::SpanViolation);
        }
        let v: Vec<BigRational> = self.keys.iter().map(|m| f.coefficient(m)).collect();
        let mut a = QMatrix::zeros(self.keys.len(), self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            for (i, m) in self.keys.iter().enumerate() {
                a[(i, j)] = b.coefficient(m);
            }
        }
        solve(&a, &v).ok_or(Error::SpanViolation)
    }
}

/// Unique solution of `a x = b` for full column rank `a`.
fn solve(a: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let (r, c) = (a.rows(), a.cols());
    let mut aug = QMatrix::zeros(r, c + 1);
    for i in 0..r {
        for j in 0..c {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, c)] = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.len() != c || pivots.contains(&c) {
        return None;
    }
    Some((0..c).map(|i| aug[(i, c)].clone()).collect())
}

/// Span of `f` under the column action of `GL_k`, generated by repeated
/// column derivations; this is the irreducible module containing a weight
/// vector `f`.
pub fn orbit_span(f: &MultiPoly, k: u32) -> PolySpan {
    let mut span = PolySpan::new();
    let mut queue = vec![f.clone()];
    while let Some(g) = queue.pop() {
        if g.is_zero() || !span.insert(&g) {
            continue;
        }
        for a in 1..=k {
            for c in 1..=k {
                if a != c {
                    queue.push(column_derivation(&g, a, c));
                }
            }
        }
    }
    span
}

/// Primitive integer rescaling of a rational polynomial, for display.
pub fn primitive_poly(f: &MultiPoly) -> MultiPoly {
    let coeffs: Vec<BigRational> = f.terms().map(|(_, c)| c.clone()).collect();
    let ints = crate::linalg::primitive(&coeffs);
    let mut out = MultiPoly::zero();
    for ((m, _), c) in f.terms().zip(ints) {
        out.add_term(m.clone(), BigRational::from_integer(c));
    }
    out
}
