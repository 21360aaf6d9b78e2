//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! [`Poly`] is generic over the variable type. The matrix-entry variables
//! `Z[α,t]` and `W[β,t]` give [`MultiPoly`]; the invariants module reuses the
//! same machinery over the formal generators `P[α,β]`.
//!
//! Row actions use the stacked layout of the augmented matrix `(Z; W)`: the
//! `p` rows of `Z` come first, followed by the rows of `W` in reversed order
//! (`W[q,·]` is stacked row `p+1`, `W[1,·]` is stacked row `p+q`). Columns are
//! matched literally: a row combination keeps the column index `t` of every
//! variable it touches.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// Product of variables raised to positive powers, sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut m: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in powers {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn powers(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`, together with the
    /// derivative weight `Π a!/(a-b)!` produced by `∂^other` on `self`.
    fn divide_falling(&self, other: &Self) -> Option<(Self, BigInt)> {
        let mut rest = self.0.clone();
        let mut weight = BigInt::one();
        for (v, e) in &other.0 {
            let idx = rest.binary_search_by(|(x, _)| x.cmp(v)).ok()?;
            let have = rest[idx].1;
            if have < *e {
                return None;
            }
            for f in (have - e + 1)..=have {
                weight *= f;
            }
            rest[idx].1 -= e;
        }
        rest.retain(|(_, e)| *e > 0);
        Some((Monomial(rest), weight))
    }

    /// Split into the part whose variables satisfy `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&V) -> bool) -> (Self, Self) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(v, _)| pred(v));
        (Monomial(a), Monomial(b))
    }

    /// `Π e_i!`, the Fock norm of the monomial.
    pub fn factorial_weight(&self) -> BigInt {
        let mut w = BigInt::one();
        for (_, e) in &self.0 {
            for f in 2..=*e {
                w *= f;
            }
        }
        w
    }
}

impl<V: fmt::Display> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<V: Ord> {
    terms: BTreeMap<Monomial<V>, BigRational>,
}

impl<V: Ord> Default for Poly<V> {
    fn default() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
}

impl<V: Ord + Clone + Hash> Poly<V> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: V) -> Self {
        Self::term(Monomial::var(v), BigRational::one())
    }

    pub fn term(m: Monomial<V>, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (mm, x) in &self.terms {
            out.add_term(mm.mul(m), x * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Formal partial derivative with respect to `v`.
    pub fn differentiate(&self, v: &V) -> Self {
        self.differentiate_by(&Monomial::var(v.clone()))
    }

    /// Apply the constant-coefficient operator `∂^d` for a monomial `d`.
    pub fn differentiate_by(&self, d: &Monomial<V>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((rest, w)) = m.divide_falling(d) {
                out.add_term(rest, c * BigRational::from_integer(w));
            }
        }
        out
    }

    /// `p(D) f`: variables of `self` selected by `over` act as partial
    /// derivatives on `f`; the remaining variables multiply the result.
    pub fn apply_diff(&self, f: &Self, over: impl Fn(&V) -> bool) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (d, rest) = m.split(&over);
            let df = f.differentiate_by(&d);
            if df.is_zero() {
                continue;
            }
            out = &out + &df.mul_monomial(&rest, c);
        }
        out
    }

    /// Set every variable selected by `pred` to zero.
    pub fn set_zero(&self, pred: impl Fn(&V) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.0.iter().any(|(v, _)| pred(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop terms failing `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial<V>) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Replace each variable by a polynomial and expand.
    pub fn substitute<U: Ord + Clone + Hash>(&self, image: impl Fn(&V) -> Poly<U>) -> Poly<U> {
        let mut powers: HashMap<V, Vec<Poly<U>>> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let cache = powers.entry(v.clone()).or_insert_with(|| vec![Poly::one(), image(v)]);
                while cache.len() <= *e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                acc = &acc * &cache[*e as usize];
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// [`Self::substitute`] for images that stay inside the group of the
    /// variable they replace: substitutes one group at a time, reusing the
    /// image of each group part across monomials.
    pub fn substitute_grouped<G: Ord + Clone>(
        &self,
        group: impl Fn(&V) -> G,
        image: impl Fn(&V) -> Poly<V>,
    ) -> Poly<V> {
        let groups: BTreeSet<G> = self.variables().iter().map(&group).collect();
        let mut f = self.clone();
        for g in groups {
            let mut cache: HashMap<Monomial<V>, Poly<V>> = HashMap::new();
            let mut acc: HashMap<Monomial<V>, BigRational> = HashMap::new();
            for (m, c) in &f.terms {
                let (part, rest) = m.split(|v| group(v) == g);
                let img = cache
                    .entry(part)
                    .or_insert_with_key(|part| Poly::term(part.clone(), BigRational::one()).substitute(&image));
                for (mi, ci) in &img.terms {
                    *acc.entry(mi.mul(&rest)).or_insert_with(BigRational::zero) += c * ci;
                }
            }
            f = Poly {
                terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            };
        }
        f
    }

    /// The derivation `Σ_v image(v) ∂/∂v` applied to `self`: the first-order
    /// term of `f(v + ε image(v))`.
    pub fn derivation(&self, image: impl Fn(&V) -> Option<Poly<V>>) -> Self {
        let mut cache: HashMap<V, Option<Poly<V>>> = HashMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (i, (v, e)) in m.0.iter().enumerate() {
                let img = cache.entry(v.clone()).or_insert_with(|| image(v));
                let Some(img) = img else { continue };
                let mut lowered = m.0.clone();
                if *e == 1 {
                    lowered.remove(i);
                } else {
                    lowered[i].1 -= 1;
                }
                let coeff = c * BigRational::from_integer(BigInt::from(*e));
                out = &out + &img.mul_monomial(&Monomial(lowered), &coeff);
            }
        }
        out
    }

    pub fn map_vars<U: Ord + Clone + Hash>(&self, f: impl Fn(&V) -> U) -> Poly<U> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::from_powers(m.0.iter().map(|(v, e)| (f(v), *e))), c.clone());
        }
        out
    }
}

impl<V: Ord + Clone + Hash> Add for &Poly<V> {
    type Output = Poly<V>;

    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<V: Ord + Clone + Hash> Sub for &Poly<V> {
    type Output = Poly<V>;

    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<V: Ord + Clone + Hash> Neg for &Poly<V> {
    type Output = Poly<V>;

    fn neg(self) -> Poly<V> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<V: Ord + Clone + Hash> Mul for &Poly<V> {
    type Output = Poly<V>;

    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut acc: HashMap<Monomial<V>, BigRational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<V: Ord + Clone + Hash> $tr for Poly<V> {
            type Output = Poly<V>;

            fn $f(self, rhs: Poly<V>) -> Poly<V> {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<V: Ord + Clone + Hash> Poly<V> {
    /// Higher total degree first, then map order.
    fn display_order(&self) -> Vec<(&Monomial<V>, &BigRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        terms
    }
}

impl<V: Ord + Clone + Hash + fmt::Display> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson {
    coefficient: String,
    monomial: String,
}

impl<V: Ord + Clone + Hash + fmt::Display> Serialize for Poly<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .display_order()
            .into_iter()
            .map(|(m, c)| TermJson {
                coefficient: c.to_string(),
                monomial: m.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

/// Which block of the augmented matrix a variable lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Z,
    W,
}

/// A matrix entry `Z[row,col]` or `W[row,col]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub block: Block,
    pub row: u32,
    pub col: u32,
}

impl Var {
    pub fn z(row: u32, col: u32) -> Self {
        Var {
            block: Block::Z,
            row,
            col,
        }
    }

    pub fn w(row: u32, col: u32) -> Self {
        Var {
            block: Block::W,
            row,
            col,
        }
    }

    pub fn is_z(&self) -> bool {
        self.block == Block::Z
    }

    pub fn is_w(&self) -> bool {
        self.block == Block::W
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.block {
            Block::Z => 'Z',
            Block::W => 'W',
        };
        write!(f, "{b}[{},{}]", self.row, self.col)
    }
}

pub type MultiPoly = Poly<Var>;

pub fn z(row: u32, col: u32) -> MultiPoly {
    MultiPoly::var(Var::z(row, col))
}

pub fn w(row: u32, col: u32) -> MultiPoly {
    MultiPoly::var(Var::w(row, col))
}

impl MultiPoly {
    /// Largest column index of any variable, 0 for constants.
    pub fn max_column(&self) -> u32 {
        self.variables().iter().map(|v| v.col).max().unwrap_or(0)
    }

    /// Keep only terms whose variables all have column `<= k`.
    pub fn truncate_columns(&self, k: u32) -> MultiPoly {
        self.filter_terms(|m| m.powers().iter().all(|(v, _)| v.col <= k))
    }

    /// Degree of each `(block,row)` in a monomial-homogeneous polynomial;
    /// `None` if terms disagree.
    pub fn row_weight(&self) -> Option<BTreeMap<(Block, u32), u32>> {
        let mut weight = None;
        for (m, _) in self.terms() {
            let mut wt: BTreeMap<(Block, u32), u32> = BTreeMap::new();
            for (v, e) in m.powers() {
                *wt.entry((v.block, v.row)).or_insert(0) += e;
            }
            match &weight {
                None => weight = Some(wt),
                Some(w) if *w == wt => {}
                Some(_) => return None,
            }
        }
        Some(weight.unwrap_or_default())
    }
}

/// Row counts of the augmented matrix `(Z; W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLayout {
    pub p: u32,
    pub q: u32,
}

impl RowLayout {
    pub fn n(&self) -> u32 {
        self.p + self.q
    }

    /// 1-based stacked row of a variable.
    pub fn stacked_row(&self, v: &Var) -> Option<u32> {
        match v.block {
            Block::Z if (1..=self.p).contains(&v.row) => Some(v.row),
            Block::W if (1..=self.q).contains(&v.row) => Some(self.p + self.q + 1 - v.row),
            _ => None,
        }
    }

    /// Variable sitting at 1-based stacked row `s`, column `col`.
    pub fn var_at(&self, s: u32, col: u32) -> Var {
        if s <= self.p {
            Var::z(s, col)
        } else {
            Var::w(self.p + self.q + 1 - s, col)
        }
    }
}

/// `f(g · (Z; W))`: every stacked row becomes the `g`-combination of stacked
/// rows at the same column.
pub fn act_rows(g: &QMatrix, layout: RowLayout, f: &MultiPoly) -> Result<MultiPoly> {
    let n = layout.n() as usize;
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "row action needs a {n}x{n} matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    for v in f.variables() {
        if layout.stacked_row(&v).is_none() {
            return Err(Error::DimensionMismatch(format!("{v} lies outside the row layout")));
        }
    }
    Ok(f.substitute_grouped(|v| v.col, |v| {
        let s = layout.stacked_row(v).expect("checked above") as usize;
        let mut img = MultiPoly::zero();
        for j in 0..n {
            let c = &g[(s - 1, j)];
            if !c.is_zero() {
                img.add_term(Monomial::var(layout.var_at(j as u32 + 1, v.col)), c.clone());
            }
        }
        img
    }))
}

/// Right action on columns: `Z ↦ Z zg`, `W ↦ W wg` in natural (unreversed)
/// indexing. Use `wg = g^{-T}` for the action that fixes `Σ_t Z[α,t] W[β,t]`.
pub fn act_columns(zg: &QMatrix, wg: &QMatrix, f: &MultiPoly) -> Result<MultiPoly> {
    for v in f.variables() {
        let g = if v.is_z() { zg } else { wg };
        if v.col as usize > g.rows() || !g.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{v} outside a {}x{} column action",
                g.rows(),
                g.cols()
            )));
        }
    }
    Ok(f.substitute_grouped(|v| (v.block, v.row), |v| {
        let g = if v.is_z() { zg } else { wg };
        let mut img = MultiPoly::zero();
        for s in 0..g.rows() {
            let c = &g[(s, v.col as usize - 1)];
            if !c.is_zero() {
                img.add_term(
                    Monomial::var(Var {
                        block: v.block,
                        row: v.row,
                        col: s as u32 + 1,
                    }),
                    c.clone(),
                );
            }
        }
        img
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn p11(k: u32) -> MultiPoly {
        (1..=k).fold(MultiPoly::zero(), |acc, t| &acc + &(&z(1, t) * &w(1, t)))
    }

    #[test]
    fn ring_operations() {
        let a = z(1, 1);
        assert_eq!((&a * &a).to_string(), "Z[1,1]^2");
        assert!((&a + &a.scale(&q(-1))).is_zero());
        let sq = &p11(2) * &p11(2);
        assert_eq!(sq.len(), 3);
        let cross = Monomial::from_powers([(Var::z(1, 1), 1), (Var::z(1, 2), 1), (Var::w(1, 1), 1), (Var::w(1, 2), 1)]);
        assert_eq!(sq.coefficient(&cross), q(2));
    }

    #[test]
    fn display_form() {
        let f = &(&z(1, 1).pow(2) * &w(2, 1)) - &w(1, 1).scale(&q(3));
        assert_eq!(f.to_string(), "Z[1,1]^2*W[2,1] - 3*W[1,1]");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn derivatives() {
        assert_eq!(z(1, 1).pow(3).differentiate(&Var::z(1, 1)), z(1, 1).pow(2).scale(&q(3)));
        assert!(z(1, 1).differentiate(&Var::z(2, 1)).is_zero());
        assert_eq!((&z(1, 1) * &w(1, 1)).differentiate(&Var::w(1, 1)), z(1, 1));
    }

    #[test]
    fn apply_diff_examples() {
        let on_w = |v: &Var| v.is_w();
        assert_eq!(w(1, 1).apply_diff(&w(1, 1).pow(2), on_w), w(1, 1).scale(&q(2)));
        assert_eq!((&z(1, 1) * &w(1, 1)).apply_diff(&w(1, 1), on_w), z(1, 1));
        let both = p11(2).apply_diff(&(&z(1, 1) * &w(1, 1)), |_| true);
        assert_eq!(both, MultiPoly::one());
    }

    #[test]
    fn row_actions() {
        let layout = RowLayout { p: 2, q: 0 };
        let f = &z(1, 1) * &z(2, 2);
        assert_eq!(act_rows(&QMatrix::identity(2), layout, &f).unwrap(), f);
        let d = QMatrix::diagonal(&[q(2), q(3)]);
        assert_eq!(act_rows(&d, layout, &f).unwrap(), f.scale(&q(6)));
        // shear: row 1 picks up eps * row 2
        let eps = q(5);
        let g = QMatrix::from_rows(vec![vec![q(1), q(0)], vec![eps.clone(), q(1)]]).unwrap();
        let shear = QMatrix::from_rows(vec![vec![q(1), eps.clone()], vec![q(0), q(1)]]).unwrap();
        assert_eq!(act_rows(&g, layout, &z(1, 1)).unwrap(), z(1, 1));
        assert_eq!(act_rows(&g, layout, &z(2, 1)).unwrap(), &z(2, 1) + &z(1, 1).scale(&eps));
        assert_eq!(act_rows(&shear, layout, &z(1, 1)).unwrap(), &z(1, 1) + &z(2, 1).scale(&eps));
        assert!(act_rows(&QMatrix::identity(3), layout, &f).is_err());
    }

    #[test]
    fn stacked_layout_reverses_w_rows() {
        let layout = RowLayout { p: 1, q: 2 };
        assert_eq!(layout.stacked_row(&Var::w(2, 1)), Some(2));
        assert_eq!(layout.stacked_row(&Var::w(1, 1)), Some(3));
        // upper-triangular entry (2,3) in the W block adds W row 1 into W row 2
        let mut g = QMatrix::identity(3);
        g[(1, 2)] = q(1);
        assert_eq!(act_rows(&g, layout, &w(2, 4)).unwrap(), &w(2, 4) + &w(1, 4));
    }

    #[test]
    fn column_action_fixes_generators() {
        let g = QMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap();
        let ginv_t = g.inverse().unwrap().transpose();
        assert_eq!(act_columns(&g, &ginv_t, &p11(2)).unwrap(), p11(2));
    }

    #[test]
    fn derivation_is_first_order_term() {
        let f = &z(2, 1).pow(2) * &z(1, 2);
        let d = f.derivation(|v| (v.row == 2).then(|| MultiPoly::var(Var::z(1, v.col))));
        assert_eq!(d, (&(&z(2, 1) * &z(1, 1)) * &z(1, 2)).scale(&q(2)));
    }

    #[test]
    fn row_action_composes_contravariantly() {
        let layout = RowLayout { p: 2, q: 1 };
        let f = &(&z(1, 1) * &z(2, 2)) + &(&w(1, 1) * &z(1, 2).pow(2));
        let g = QMatrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]).unwrap();
        let h = QMatrix::from_i64(&[&[2, 0, 1], &[1, 1, 0], &[0, -1, 1]]).unwrap();
        let gh = g.mul(&h).unwrap();
        let lhs = act_rows(&gh, layout, &f).unwrap();
        assert_eq!(lhs, act_rows(&h, layout, &act_rows(&g, layout, &f).unwrap()).unwrap());
        assert_ne!(lhs, act_rows(&g, layout, &act_rows(&h, layout, &f).unwrap()).unwrap());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn var() -> impl Strategy<Value = Var> {
            (any::<bool>(), 1u32..3, 1u32..3).prop_map(|(zb, r, c)| if zb { Var::z(r, c) } else { Var::w(r, c) })
        }

        fn poly() -> impl Strategy<Value = MultiPoly> {
            prop::collection::vec((prop::collection::vec((var(), 0u32..3), 0..3), -3i64..4), 0..4).prop_map(|terms| {
                let mut f = MultiPoly::zero();
                for (powers, c) in terms {
                    f.add_term(Monomial::from_powers(powers), q(c));
                }
                f
            })
        }

        fn matrix(n: usize) -> impl Strategy<Value = QMatrix> {
            prop::collection::vec(-2i64..3, n * n).prop_map(move |v| {
                QMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
            })
        }

        proptest! {
            #[test]
            fn derivatives_commute(f in poly(), u in var(), v in var()) {
                prop_assert_eq!(f.differentiate(&u).differentiate(&v), f.differentiate(&v).differentiate(&u));
            }

            #[test]
            fn leibniz(f in poly(), g in poly(), v in var()) {
                let lhs = (&f * &g).differentiate(&v);
                let rhs = &(&f.differentiate(&v) * &g) + &(&f * &g.differentiate(&v));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn apply_diff_is_bilinear(p1 in poly(), p2 in poly(), f1 in poly(), f2 in poly()) {
                let lhs = (&p1 + &p2).apply_diff(&(&f1 + &f2), Var::is_w);
                let rhs = [(&p1, &f1), (&p1, &f2), (&p2, &f1), (&p2, &f2)]
                    .iter()
                    .fold(MultiPoly::zero(), |acc, (p, f)| &acc + &p.apply_diff(f, Var::is_w));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn row_action_composition(f in poly(), g in matrix(4), h in matrix(4)) {
                let layout = RowLayout { p: 2, q: 2 };
                let gh = g.mul(&h).unwrap();
                prop_assert_eq!(
                    act_rows(&gh, layout, &f).unwrap(),
                    act_rows(&h, layout, &act_rows(&g, layout, &f).unwrap()).unwrap()
                );
            }
        }
    }
}
