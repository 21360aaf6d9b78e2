//! Brute-force Schur polynomial arithmetic, used to cross-check the
//! multiplier calculus. Shares nothing with it beyond the label types.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::signature::{Signature, SignedSpectrum};

/// Integer polynomial in `k` commuting variables, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    k: usize,
    terms: HashMap<Vec<u32>, i128>,
}

impl SymPoly {
    pub fn zero(k: usize) -> Self {
        SymPoly { k, terms: HashMap::new() }
    }

    pub fn one(k: usize) -> Self {
        let mut p = Self::zero(k);
        p.terms.insert(vec![0; k], 1);
        p
    }

    pub fn vars(&self) -> usize {
        self.k
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

    pub fn coefficient(&self, exps: &[u32]) -> i128 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    fn add(&mut self, exps: Vec<u32>, c: i128) {
        let e = self.terms.entry(exps).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero(self.k);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                *out.terms.entry(e).or_insert(0) += x * y;
            }
        }
        out.terms.retain(|_, v| *v != 0);
        out
    }

    fn axpy(&mut self, c: i128, other: &SymPoly) {
        for (e, v) in &other.terms {
            self.add(e.clone(), c * v);
        }
    }

    /// Lexicographically largest exponent vector.
    fn leading(&self) -> Option<(&Vec<u32>, i128)> {
        self.terms.iter().max_by(|a, b| a.0.cmp(b.0)).map(|(e, c)| (e, *c))
    }
}

/// Schur polynomial `s_m(x_1, ..., x_k)` summed over semistandard tableaux,
/// built by peeling off the horizontal strip holding the largest entry.
pub fn schur_poly(m: &Signature, k: usize) -> Result<SymPoly> {
    m.require_polynomial()?;
    if m.len() > k {
        return Err(Error::RankTooSmall { len: m.len(), k });
    }
    let shape: Vec<u32> = m.entries().iter().map(|&x| x as u32).collect();
    let mut memo = HashMap::new();
    let terms = tableaux(&shape, k, &mut memo);
    let mut p = SymPoly::zero(k);
    for (e, c) in terms {
        let mut full = e.clone();
        full.resize(k, 0);
        p.add(full, c);
    }
    Ok(p)
}

type Memo = HashMap<(Vec<u32>, usize), HashMap<Vec<u32>, i128>>;

/// Weighted tableau count of `shape` with entries `<= n`, as exponent vectors
/// of length `n`.
fn tableaux(shape: &[u32], n: usize, memo: &mut Memo) -> HashMap<Vec<u32>, i128> {
    let shape: Vec<u32> = shape.iter().copied().filter(|&x| x > 0).collect();
    if let Some(hit) = memo.get(&(shape.clone(), n)) {
        return hit.clone();
    }
    let mut out = HashMap::new();
    if shape.is_empty() {
        out.insert(vec![0; n], 1);
    } else if n > 0 && shape.len() <= n {
        // inner shapes μ with shape/μ a horizontal strip: shape[i+1] <= μ[i] <= shape[i]
        let mut inner = Vec::new();
        strips(&shape, 0, &mut Vec::new(), &mut inner);
        for mu in inner {
            let strip: u32 = shape.iter().sum::<u32>() - mu.iter().sum::<u32>();
            for (e, c) in tableaux(&mu, n - 1, memo) {
                let mut e = e;
                e.push(strip);
                *out.entry(e).or_insert(0) += c;
            }
        }
    }
    memo.insert((shape, n), out.clone());
    out
}

fn strips(shape: &[u32], i: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == shape.len() {
        out.push(acc.clone());
        return;
    }
    let lo = shape.get(i + 1).copied().unwrap_or(0);
    for v in lo..=shape[i] {
        acc.push(v);
        strips(shape, i + 1, acc, out);
        acc.pop();
    }
}

/// Coefficients in the Schur basis, by repeatedly subtracting the Schur
/// polynomial of the leading exponent.
pub fn schur_decompose(p: &SymPoly) -> Result<SignedSpectrum> {
    let k = p.vars();
    let mut rest = p.clone();
    let mut out = SignedSpectrum::new();
    while let Some((lead, c)) = rest.leading() {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric);
        }
        let raw: Vec<i64> = lead.iter().map(|&x| x as i64).collect();
        let sig = Signature::normalize(&raw)?;
        let s = schur_poly(&sig, k)?;
        rest.axpy(-c, &s);
        let c = i64::try_from(c).map_err(|_| Error::NotSymmetric)?;
        out.add(sig, c);
    }
    Ok(out)
}

/// `schur_decompose(Π s_{m_i})`.
pub fn product_decompose(factors: &[Signature], k: usize) -> Result<SignedSpectrum> {
    let mut p = SymPoly::one(k);
    for f in factors {
        p = p.mul(&schur_poly(f, k)?);
    }
    schur_decompose(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(raw: &[i64]) -> Signature {
        Signature::normalize(raw).unwrap()
    }

    #[test]
    fn small_schur_polynomials() {
        let s1 = schur_poly(&sig(&[1]), 2).unwrap();
        assert_eq!((s1.len(), s1.coefficient(&[1, 0]), s1.coefficient(&[0, 1])), (2, 1, 1));
        let s11 = schur_poly(&sig(&[1, 1]), 2).unwrap();
        assert_eq!((s11.len(), s11.coefficient(&[1, 1])), (1, 1));
        let s21 = schur_poly(&sig(&[2, 1]), 3).unwrap();
        assert_eq!(s21.len(), 7);
        assert_eq!(s21.coefficient(&[1, 1, 1]), 2);
        assert_eq!(s21.coefficient(&[2, 1, 0]), 1);
        assert_eq!(s21.coefficient(&[0, 1, 2]), 1);
        // 8 tableaux in total
        assert_eq!(s21.terms.values().sum::<i128>(), 8);
        assert!(matches!(schur_poly(&sig(&[1, 1, 1]), 2), Err(Error::RankTooSmall { .. })));
    }

    #[test]
    fn decompositions() {
        let s1 = schur_poly(&sig(&[1]), 2).unwrap();
        let d = schur_decompose(&s1.mul(&s1)).unwrap();
        assert_eq!(d.to_string(), "(2)+(1,1)");
        for m in [sig(&[3, 1]), sig(&[2, 2]), sig(&[])] {
            let d = schur_decompose(&schur_poly(&m, 3).unwrap()).unwrap();
            assert_eq!(d, SignedSpectrum::single(m));
        }
        let d = product_decompose(&[sig(&[1]), sig(&[2]), sig(&[2]), sig(&[3])], 2).unwrap();
        assert_eq!(d.display_padded(2), "(8,0)+3(7,1)+5(6,2)+5(5,3)+2(4,4)");
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut p = SymPoly::zero(2);
        p.add(vec![0, 1], 1);
        assert_eq!(schur_decompose(&p), Err(Error::NotSymmetric));
        p.add(vec![1, 0], 1);
        p.add(vec![1, 0], 1);
        assert_eq!(schur_decompose(&p), Err(Error::NotSymmetric));
    }
}
