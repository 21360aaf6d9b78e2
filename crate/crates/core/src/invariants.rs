//! Invariant generators, the weight system, and the block-Borel covariant
//! invariant basis of a tensor problem.
//!
//! An invariant is a polynomial in the generators
//! `P[α,β] = Σ_t Z[α,t] W[β,t]`. Working with polynomials in the formal
//! symbols `P[α,β]` (a [`GenPoly`]) keeps the column count out of the
//! linear algebra; [`expand`] turns a formal expression into a [`MultiPoly`]
//! truncated to `k` columns when one is needed.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix};
use crate::poly::{Block, Monomial, MultiPoly, Poly, RowLayout, Var};
use crate::signature::Signature;
use crate::weyl;

/// Formal generator `P[α,β]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub alpha: u32,
    pub beta: u32,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{},{}]", self.alpha, self.beta)
    }
}

/// Polynomial in the generators `P[α,β]`; column-free.
pub type GenPoly = Poly<Gen>;

/// `P^k[α,β] = Σ_{t=1}^{k} Z[α,t] W[β,t]`.
pub fn generator_poly(alpha: u32, beta: u32, k: u32) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for t in 1..=k {
        p.add_term(
            Monomial::from_powers([(Var::z(alpha, t), 1), (Var::w(beta, t), 1)]),
            BigRational::one(),
        );
    }
    p
}

/// Expand a formal expression with every generator truncated to `k` columns.
pub fn expand(f: &GenPoly, k: u32) -> MultiPoly {
    f.substitute(|g| generator_poly(g.alpha, g.beta, k))
}

/// Factor labels, target label and the column bound used for expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorProblem {
    factors: Vec<Signature>,
    target: Signature,
    k: usize,
}

impl TensorProblem {
    /// `k` defaults to `max(n, stabilization index)`.
    pub fn new(factors: Vec<Signature>, target: Signature, k: Option<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        for f in factors.iter().chain(std::iter::once(&target)) {
            f.require_polynomial()?;
        }
        let n = factors.iter().map(Signature::len).sum::<usize>() + target.len();
        let k = match k {
            Some(k) => k,
            None => n.max(weyl::stabilization_index(&factors)?),
        };
        Ok(TensorProblem { factors, target, k })
    }

    pub fn factors(&self) -> &[Signature] {
        &self.factors
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rows allotted to each factor, `p_i = length(m^i)`.
    pub fn row_allocation(&self) -> Vec<usize> {
        self.factors.iter().map(Signature::len).collect()
    }

    /// 1-based `Z` rows owned by factor `i`.
    pub fn factor_rows(&self, i: usize) -> Range<u32> {
        let start: usize = self.factors[..i].iter().map(Signature::len).sum();
        (start as u32 + 1)..(start + self.factors[i].len()) as u32 + 1
    }

    pub fn p(&self) -> usize {
        self.row_allocation().iter().sum()
    }

    pub fn q(&self) -> usize {
        self.target.len()
    }

    pub fn n(&self) -> usize {
        self.p() + self.q()
    }

    pub fn layout(&self) -> RowLayout {
        RowLayout {
            p: self.p() as u32,
            q: self.q() as u32,
        }
    }

    /// The concatenated weight `μ = (m^1, ..., m^r, m)`.
    pub fn mu(&self) -> Vec<i64> {
        self.factors
            .iter()
            .chain(std::iter::once(&self.target))
            .flat_map(|s| s.entries().iter().copied())
            .collect()
    }

    /// Degrees required of the `Z` rows (the `Z` part of `μ`).
    pub fn row_sums(&self) -> Vec<u32> {
        self.factors
            .iter()
            .flat_map(|s| s.entries().iter().map(|&x| x as u32))
            .collect()
    }

    /// Degrees required of the `W` rows (the target entries).
    pub fn column_sums(&self) -> Vec<u32> {
        self.target.entries().iter().map(|&x| x as u32).collect()
    }

    pub fn degrees_match(&self) -> bool {
        self.factors.iter().map(Signature::size).sum::<i64>() == self.target.size()
    }

    /// Checked `P^k[α,β]` at this problem's `k`.
    pub fn generator(&self, alpha: usize, beta: usize) -> Result<MultiPoly> {
        let (p, q) = (self.p(), self.q());
        if !(1..=p).contains(&alpha) || !(1..=q).contains(&beta) {
            return Err(Error::IndexOutOfRange { alpha, beta, p, q });
        }
        Ok(generator_poly(alpha as u32, beta as u32, self.k as u32))
    }

    /// One-parameter shears of the block Borel group beyond the diagonal:
    /// strictly lower positions in each factor block and in the target block
    /// (natural `W` row order, i.e. strictly upper in the reversed stacked
    /// layout).
    pub fn shears(&self) -> Vec<Shear> {
        let mut out = Vec::new();
        for i in 0..self.factors.len() {
            let rows = self.factor_rows(i);
            for a in rows.clone() {
                for c in rows.start..a {
                    out.push(Shear {
                        block: Block::Z,
                        target_row: a,
                        source_row: c,
                    });
                }
            }
        }
        for a in 1..=self.q() as u32 {
            for c in 1..a {
                out.push(Shear {
                    block: Block::W,
                    target_row: a,
                    source_row: c,
                });
            }
        }
        out
    }

    /// Assemble the stacked block matrix `β = diag(b_1, ..., b_r, s b s)` from
    /// lower-triangular factor blocks and a lower-triangular target block `b`
    /// in natural `W` order.
    pub fn stacked_borel(&self, factor_blocks: &[QMatrix], target_block: &QMatrix) -> Result<QMatrix> {
        if factor_blocks.len() != self.factors.len() {
            return Err(Error::DimensionMismatch("one block per factor".into()));
        }
        let mut beta = QMatrix::zeros(0, 0);
        for (b, p) in factor_blocks.iter().zip(self.row_allocation()) {
            if b.rows() != p || b.cols() != p {
                return Err(Error::DimensionMismatch(format!("factor block must be {p}x{p}")));
            }
            beta = beta.direct_sum(b);
        }
        let q = self.q();
        if target_block.rows() != q || target_block.cols() != q {
            return Err(Error::DimensionMismatch(format!("target block must be {q}x{q}")));
        }
        let mut reversed = QMatrix::zeros(q, q);
        for i in 0..q {
            for j in 0..q {
                reversed[(i, j)] = target_block[(q - 1 - i, q - 1 - j)].clone();
            }
        }
        Ok(beta.direct_sum(&reversed))
    }

    /// `π^μ(β)` for the blocks passed to [`Self::stacked_borel`].
    pub fn borel_character(&self, factor_blocks: &[QMatrix], target_block: &QMatrix) -> BigRational {
        let mut chi = BigRational::one();
        let blocks = factor_blocks.iter().zip(&self.factors).chain(std::iter::once((target_block, &self.target)));
        for (b, sig) in blocks {
            for (a, &m) in sig.entries().iter().enumerate() {
                chi *= num_traits::pow(b[(a, a)].clone(), m as usize);
            }
        }
        chi
    }
}

/// `row target_row += ε · row source_row` inside one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shear {
    pub block: Block,
    pub target_row: u32,
    pub source_row: u32,
}

impl Shear {
    fn on_var(&self, v: &Var) -> Option<MultiPoly> {
        (v.block == self.block && v.row == self.target_row).then(|| {
            MultiPoly::var(Var {
                block: v.block,
                row: self.source_row,
                col: v.col,
            })
        })
    }

    fn on_gen(&self, g: &Gen) -> Option<GenPoly> {
        match self.block {
            Block::Z if g.alpha == self.target_row => Some(GenPoly::var(Gen {
                alpha: self.source_row,
                beta: g.beta,
            })),
            Block::W if g.beta == self.target_row => Some(GenPoly::var(Gen {
                alpha: g.alpha,
                beta: self.source_row,
            })),
            _ => None,
        }
    }
}

/// Exponents `ℓ[α,β]` of a generator monomial `Π P[α,β]^ℓ[α,β]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentMatrix {
    p: usize,
    q: usize,
    entries: Vec<u32>,
}

impl ExponentMatrix {
    pub fn new(p: usize, q: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != p * q {
            return Err(Error::DimensionMismatch(format!("{} entries for a {p}x{q} matrix", entries.len())));
        }
        Ok(ExponentMatrix { p, q, entries })
    }

    /// 1-based entry.
    pub fn get(&self, alpha: usize, beta: usize) -> u32 {
        self.entries[(alpha - 1) * self.q + beta - 1]
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.p).map(|a| self.entries[a * self.q..(a + 1) * self.q].iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u32> {
        (0..self.q).map(|b| (0..self.p).map(|a| self.entries[a * self.q + b]).sum()).collect()
    }

    pub fn to_gen_poly(&self) -> GenPoly {
        let powers = (0..self.p).flat_map(|a| {
            (0..self.q).map(move |b| {
                (
                    Gen {
                        alpha: a as u32 + 1,
                        beta: b as u32 + 1,
                    },
                    self.entries[a * self.q + b],
                )
            })
        });
        GenPoly::term(Monomial::from_powers(powers), BigRational::one())
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_gen_poly())
    }
}

/// All nonnegative `p x q` integer matrices with the problem's row sums
/// (`Z` part of `μ`) and column sums (target entries), in ascending
/// lexicographic order of the row-major entries.
pub fn diophantine_solutions(problem: &TensorProblem) -> Vec<ExponentMatrix> {
    let rows = problem.row_sums();
    let cols = problem.column_sums();
    let (p, q) = (rows.len(), cols.len());
    let mut out = Vec::new();
    if rows.iter().sum::<u32>() != cols.iter().sum::<u32>() {
        return out;
    }
    let mut cells = vec![0u32; p * q];
    let mut remaining = cols.clone();
    fill_row(&rows, &mut remaining, 0, 0, rows.first().copied().unwrap_or(0), &mut cells, q, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    rows: &[u32],
    remaining: &mut [u32],
    row: usize,
    col: usize,
    left: u32,
    cells: &mut [u32],
    q: usize,
    out: &mut Vec<ExponentMatrix>,
) {
    let p = rows.len();
    if row == p {
        if remaining.iter().all(|&c| c == 0) {
            out.push(ExponentMatrix {
                p,
                q,
                entries: cells.to_vec(),
            });
        }
        return;
    }
    if col == q {
        if left == 0 {
            let next_left = rows.get(row + 1).copied().unwrap_or(0);
            fill_row(rows, remaining, row + 1, 0, next_left, cells, q, out);
        }
        return;
    }
    // the rest of this row must fit into the remaining columns
    let room: u32 = remaining[col + 1..].iter().sum();
    let lo = left.saturating_sub(room);
    let hi = left.min(remaining[col]);
    for v in lo..=hi {
        cells[row * q + col] = v;
        remaining[col] -= v;
        fill_row(rows, remaining, row, col + 1, left - v, cells, q, out);
        remaining[col] += v;
    }
    cells[row * q + col] = 0;
}

/// `Π P^k[α,β]^ℓ[α,β]` expanded at the problem's `k`.
pub fn monomial(problem: &TensorProblem, exps: &ExponentMatrix) -> MultiPoly {
    expand(&exps.to_gen_poly(), problem.k as u32)
}

fn constraint_matrix<V: Ord + Clone + std::hash::Hash>(
    polys: &[Poly<V>],
    first_order: impl Fn(&Poly<V>, &Shear) -> Poly<V>,
    shears: &[Shear],
) -> QMatrix {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for shear in shears {
        let images: Vec<Poly<V>> = polys.iter().map(|f| first_order(f, shear)).collect();
        let mut keys: Vec<&Monomial<V>> = images.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            rows.push(images.iter().map(|p| p.coefficient(key)).collect());
        }
    }
    if rows.is_empty() {
        return QMatrix::zeros(0, polys.len());
    }
    QMatrix::from_rows(rows).expect("rows share the monomial count")
}

/// First-order unipotent conditions on `Σ C_j f_j` for expanded polynomials:
/// one row per (shear, result monomial), holding the `ε` coefficient of
/// `f_j(u(ε) (Z; W))`.
pub fn unipotent_constraints(problem: &TensorProblem, monomials: &[MultiPoly]) -> Result<QMatrix> {
    let mut weight = None;
    for m in monomials {
        let w = m.row_weight().ok_or(Error::WeightMismatch)?;
        match &weight {
            None => weight = Some(w),
            Some(prev) if *prev == w => {}
            Some(_) => return Err(Error::WeightMismatch),
        }
    }
    if monomials.is_empty() {
        return Ok(QMatrix::zeros(0, 0));
    }
    Ok(constraint_matrix(
        monomials,
        |f, s| f.derivation(|v| s.on_var(v)),
        &problem.shears(),
    ))
}

/// The same conditions computed on formal generator monomials, where a shear
/// acts by `P[a,β] ↦ P[c,β]` (factor blocks) or `P[α,a] ↦ P[α,c]` (target).
pub fn generator_constraints(problem: &TensorProblem, monomials: &[GenPoly]) -> QMatrix {
    if monomials.is_empty() {
        return QMatrix::zeros(0, 0);
    }
    constraint_matrix(monomials, |f, s| f.derivation(|g| s.on_gen(g)), &problem.shears())
}

/// Basis of block-Borel covariant invariants as primitive integer
/// combinations of the weight-system monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBasis {
    pub problem: TensorProblem,
    pub monomials: Vec<ExponentMatrix>,
    pub coefficients: Vec<Vec<BigInt>>,
    pub elements: Vec<GenPoly>,
}

impl InvariantBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Every element expanded with generators truncated to `k` columns.
    pub fn expand(&self, k: u32) -> Vec<MultiPoly> {
        self.elements.iter().map(|e| expand(e, k)).collect()
    }
}

/// Null space of the unipotent conditions over the weight-system monomials,
/// without comparing against the multiplicity.
pub fn invariant_basis_unchecked(problem: &TensorProblem) -> InvariantBasis {
    let monomials = diophantine_solutions(problem);
    let gens: Vec<GenPoly> = monomials.iter().map(ExponentMatrix::to_gen_poly).collect();
    let coefficients = generator_constraints(problem, &gens).nullspace();
    let elements = coefficients
        .iter()
        .map(|c| {
            gens.iter().zip(c).fold(GenPoly::zero(), |acc, (g, x)| {
                if x.is_zero() {
                    acc
                } else {
                    &acc + &g.scale(&BigRational::from_integer(x.clone()))
                }
            })
        })
        .collect();
    InvariantBasis {
        problem: problem.clone(),
        monomials,
        coefficients,
        elements,
    }
}

/// Invariant basis whose dimension is asserted to equal the multiplicity of
/// the target in the tensor product of the factors.
pub fn invariant_basis(problem: &TensorProblem) -> Result<InvariantBasis> {
    let basis = invariant_basis_unchecked(problem);
    let multiplicity = weyl::multiplicity(problem.factors(), problem.target())?;
    if basis.dimension() != multiplicity {
        return Err(Error::DimensionCheck {
            basis: basis.dimension(),
            multiplicity,
        });
    }
    Ok(basis)
}

/// Lower-triangular integer matrix with the given diagonal and a fixed
/// pattern below it; handy for covariance checks.
pub fn lower_triangular(diag: &[i64], below: i64) -> QMatrix {
    let n = diag.len();
    let mut b = QMatrix::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = q(diag[i]);
        for j in 0..i {
            b[(i, j)] = q(below + (i + j) as i64);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{act_rows, w, z};

    fn sig(raw: &[i64]) -> Signature {
        Signature::normalize(raw).unwrap()
    }

    fn example() -> TensorProblem {
        TensorProblem::new(vec![sig(&[1]), sig(&[2]), sig(&[2]), sig(&[3])], sig(&[7, 1]), None).unwrap()
    }

    fn exps(p: usize, q: usize, e: &[u32]) -> ExponentMatrix {
        ExponentMatrix::new(p, q, e.to_vec()).unwrap()
    }

    #[test]
    fn generators() {
        let prob = TensorProblem::new(vec![sig(&[1])], sig(&[1]), Some(2)).unwrap();
        assert_eq!(prob.generator(1, 1).unwrap(), &(&z(1, 1) * &w(1, 1)) + &(&z(1, 2) * &w(1, 2)));
        assert_eq!(generator_poly(1, 1, 1), &z(1, 1) * &w(1, 1));
        assert!(matches!(prob.generator(2, 1), Err(Error::IndexOutOfRange { .. })));
        // truncation sends P^k to P^j
        assert_eq!(generator_poly(2, 3, 5).truncate_columns(2), generator_poly(2, 3, 2));
    }

    #[test]
    fn problem_shape() {
        let prob = example();
        assert_eq!(prob.mu(), vec![1, 2, 2, 3, 7, 1]);
        assert_eq!((prob.p(), prob.q(), prob.n(), prob.k()), (4, 2, 6, 6));
        assert_eq!(prob.factor_rows(2), 3..4);
        assert_eq!(prob.shears().len(), 1);
    }

    #[test]
    fn worked_example_weight_system() {
        let sols = diophantine_solutions(&example());
        let expect = vec![
            exps(4, 2, &[0, 1, 2, 0, 2, 0, 3, 0]),
            exps(4, 2, &[1, 0, 1, 1, 2, 0, 3, 0]),
            exps(4, 2, &[1, 0, 2, 0, 1, 1, 3, 0]),
            exps(4, 2, &[1, 0, 2, 0, 2, 0, 2, 1]),
        ];
        assert_eq!(sols, expect);
        for s in &sols {
            assert_eq!(s.row_sums(), vec![1, 2, 2, 3]);
            assert_eq!(s.column_sums(), vec![7, 1]);
        }
        assert_eq!(sols[0].to_string(), "P[1,2]*P[2,1]^2*P[3,1]^2*P[4,1]^3");
    }

    #[test]
    fn small_weight_systems() {
        let one = TensorProblem::new(vec![sig(&[1])], sig(&[1]), None).unwrap();
        assert_eq!(diophantine_solutions(&one), vec![exps(1, 1, &[1])]);
        let bad = TensorProblem::new(vec![sig(&[1])], sig(&[2]), None).unwrap();
        assert!(diophantine_solutions(&bad).is_empty());
    }

    #[test]
    fn monomial_expansion() {
        let prob = TensorProblem::new(vec![sig(&[2])], sig(&[2]), Some(1)).unwrap();
        assert_eq!(monomial(&prob, &exps(1, 1, &[2])), &z(1, 1).pow(2) * &w(1, 1).pow(2));
        assert_eq!(monomial(&prob, &exps(1, 1, &[0])), MultiPoly::one());
    }

    #[test]
    fn worked_example_constraint_has_rank_one() {
        let prob = example();
        let gens: Vec<GenPoly> = diophantine_solutions(&prob).iter().map(|e| e.to_gen_poly()).collect();
        let c = generator_constraints(&prob, &gens);
        assert_eq!(c.rank(), 1);
        // every monomial maps to the same P[1,1]P[2,1]^2P[3,1]^2P[4,1]^3
        assert_eq!(c.rows(), 1);
        assert!(c.row(0).iter().all(|x| *x == q(1)));
    }

    #[test]
    fn expanded_constraints_agree_with_generator_route() {
        let prob = example();
        let sols = diophantine_solutions(&prob);
        let expanded: Vec<MultiPoly> = sols.iter().map(|e| expand(&e.to_gen_poly(), 2)).collect();
        let c = unipotent_constraints(&prob, &expanded).unwrap();
        assert_eq!(c.rank(), 1);
        let gens: Vec<GenPoly> = sols.iter().map(|e| e.to_gen_poly()).collect();
        assert_eq!(c.nullspace(), generator_constraints(&prob, &gens).nullspace());
    }

    #[test]
    fn constraint_edge_cases() {
        let one = TensorProblem::new(vec![sig(&[1])], sig(&[1]), Some(1)).unwrap();
        let c = unipotent_constraints(&one, &[generator_poly(1, 1, 1)]).unwrap();
        assert_eq!((c.rows(), c.cols()), (0, 1));
        let empty = unipotent_constraints(&one, &[]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
        let mixed = [z(1, 1), w(1, 1)];
        assert_eq!(unipotent_constraints(&one, &mixed), Err(Error::WeightMismatch));
    }

    #[test]
    fn worked_example_basis() {
        let basis = invariant_basis(&example()).unwrap();
        assert_eq!(basis.dimension(), 3);
        let one = TensorProblem::new(vec![sig(&[1])], sig(&[1]), None).unwrap();
        let b1 = invariant_basis(&one).unwrap();
        assert_eq!(b1.elements, vec![GenPoly::var(Gen { alpha: 1, beta: 1 })]);
        let none = TensorProblem::new(vec![sig(&[1]), sig(&[1])], sig(&[3]), None).unwrap();
        assert_eq!(invariant_basis(&none).unwrap().dimension(), 0);
    }

    #[test]
    fn determinant_invariant_for_two_row_factor() {
        let prob = TensorProblem::new(vec![sig(&[2, 1])], sig(&[2, 1]), None).unwrap();
        let basis = invariant_basis(&prob).unwrap();
        assert_eq!(basis.dimension(), 1);
        let p = |a, b| GenPoly::var(Gen { alpha: a, beta: b });
        let det = &(&p(1, 1) * &p(2, 2)) - &(&p(1, 2) * &p(2, 1));
        let expect = &p(1, 1) * &det;
        assert!(basis.elements[0] == expect || basis.elements[0] == -&expect);
    }

    #[test]
    fn borel_covariance_of_worked_example() {
        let prob = example();
        let basis = invariant_basis(&prob).unwrap();
        let blocks: Vec<QMatrix> = [2, 3, 5, 7].iter().map(|&d| lower_triangular(&[d], 0)).collect();
        let target = lower_triangular(&[11, 13], 4);
        let beta = prob.stacked_borel(&blocks, &target).unwrap();
        let chi = prob.borel_character(&blocks, &target);
        for f in basis.expand(2) {
            assert_eq!(act_rows(&beta, prob.layout(), &f).unwrap(), f.scale(&chi));
        }
    }
}
