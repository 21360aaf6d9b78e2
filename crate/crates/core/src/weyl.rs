//! Tensor product decomposition by simple and compound multipliers.
//!
//! The simple multiplier `Γ_a` adds `a` boxes to a signature subject to the
//! interleaving bound `0 <= ν_{i+1} <= β_i - β_{i+1}`. A general factor acts
//! through the determinant of the `l x l` array `Γ_{α_i - (i - j)}`, with
//! `Γ_0 = 1` and `Γ_a = 0` for `a < 0`, expanded over permutations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::signature::{SignedSpectrum, Signature};

/// One entry `Γ_shift` of the multiplier determinant, with the sign of the
/// permutation term it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierTerm {
    pub shift: i64,
    pub sign: i64,
}

impl MultiplierTerm {
    /// Apply `sign * Γ_shift` to a single signature at rank `k`.
    pub fn apply(&self, beta: &Signature, k: usize) -> Result<SignedSpectrum> {
        let mut out = SignedSpectrum::new();
        out.add_scaled(&simple_multiplier(self.shift, beta, k)?, self.sign);
        Ok(out)
    }
}

fn check_rank(sig: &Signature, k: usize) -> Result<()> {
    if sig.len() > k {
        Err(Error::RankTooSmall { len: sig.len(), k })
    } else {
        Ok(())
    }
}

/// Weyl's formula for `(alpha) ⊗ beta` at rank `k`: all `ν` with
/// `Σν = alpha`, `0 <= ν_{i+1} <= β_i - β_{i+1}`, each contributing
/// `β + ν` once. Negative `alpha` yields the empty spectrum.
pub fn simple_multiplier(alpha: i64, beta: &Signature, k: usize) -> Result<SignedSpectrum> {
    beta.require_polynomial()?;
    check_rank(beta, k)?;
    let mut out = SignedSpectrum::new();
    if alpha < 0 {
        return Ok(out);
    }
    if k == 0 {
        if alpha == 0 {
            out.add(beta.clone(), 1);
        }
        return Ok(out);
    }
    let base = beta.pad(k)?;
    // bounds[i] caps ν_i for i >= 1; ν_0 takes the remainder
    let bounds: Vec<i64> = (0..k)
        .map(|i| if i == 0 { alpha } else { base[i - 1] - base[i] })
        .collect();
    let mut nu = vec![0i64; k];
    fill_tail(&base, &bounds, k - 1, alpha, &mut nu, &mut out);
    Ok(out)
}

fn fill_tail(
    base: &[i64],
    bounds: &[i64],
    pos: usize,
    remaining: i64,
    nu: &mut [i64],
    out: &mut SignedSpectrum,
) {
    if pos == 0 {
        nu[0] = remaining;
        let raw: Vec<i64> = base.iter().zip(nu.iter()).map(|(b, v)| b + v).collect();
        let sig = Signature::normalize(&raw).expect("interleaving bound keeps the result dominant");
        out.add(sig, 1);
        return;
    }
    for v in 0..=bounds[pos].min(remaining) {
        nu[pos] = v;
        fill_tail(base, bounds, pos - 1, remaining - v, nu, out);
    }
    nu[pos] = 0;
}

/// Apply a product of simple multipliers left to right.
fn apply_product(shifts: &[i64], beta: &Signature, k: usize) -> Result<SignedSpectrum> {
    let mut current = SignedSpectrum::single(beta.clone());
    for &shift in shifts {
        let mut next = SignedSpectrum::new();
        for (sig, m) in current.iter() {
            next.add_scaled(&simple_multiplier(shift, sig, k)?, m);
        }
        current = next;
    }
    Ok(current)
}

/// Permutations of `0..n` paired with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        // choosing the j-th unused element costs (number of unused elements before it) transpositions
        let mut skipped = 0;
        for j in 0..n {
            if used[j] {
                continue;
            }
            used[j] = true;
            prefix.push(j);
            let s = if skipped % 2 == 0 { sign } else { -sign };
            rec(prefix, used, s, out);
            prefix.pop();
            used[j] = false;
            skipped += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], 1, &mut out);
    out
}

/// The determinant terms of the compound multiplier for `alpha`: one shift
/// list per permutation surviving `Γ_a = 0` for `a < 0`.
pub fn determinant_terms(alpha: &Signature) -> Vec<(Vec<MultiplierTerm>, i64)> {
    let a = alpha.entries();
    signed_permutations(a.len())
        .into_iter()
        .filter_map(|(perm, sign)| {
            let shifts: Vec<i64> = perm
                .iter()
                .enumerate()
                .map(|(i, &j)| a[i] - i as i64 + j as i64)
                .collect();
            if shifts.iter().any(|&s| s < 0) {
                return None;
            }
            let terms = shifts
                .into_iter()
                .map(|shift| MultiplierTerm { shift, sign: 1 })
                .collect();
            Some((terms, sign))
        })
        .collect()
}

/// `(alpha) ⊗ (beta)` at rank `k` via the Weyl determinant.
pub fn compound_multiplier(alpha: &Signature, beta: &Signature, k: usize) -> Result<SignedSpectrum> {
    alpha.require_polynomial()?;
    beta.require_polynomial()?;
    check_rank(beta, k)?;
    let mut total = SignedSpectrum::new();
    // products of simple multipliers commute, so equal shift multisets share work
    let mut memo: HashMap<Vec<i64>, SignedSpectrum> = HashMap::new();
    for (terms, sign) in determinant_terms(alpha) {
        let mut shifts: Vec<i64> = terms.iter().map(|t| t.shift).filter(|&s| s != 0).collect();
        shifts.sort_unstable();
        if !memo.contains_key(&shifts) {
            let spectrum = apply_product(&shifts, beta, k)?;
            memo.insert(shifts.clone(), spectrum);
        }
        total.add_scaled(&memo[&shifts], sign);
    }
    if let Some((sig, m)) = total.iter().find(|(_, m)| *m < 0) {
        return Err(Error::NegativeMultiplicity {
            signature: sig.to_string(),
            mult: m,
        });
    }
    Ok(total)
}

/// Clebsch-Gordan series of `factors[0] ⊗ ... ⊗ factors[r-1]` for U(k),
/// folding the factors in the given order.
pub fn tensor_decompose(factors: &[Signature], k: usize) -> Result<SignedSpectrum> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyProduct)?;
    for f in factors {
        f.require_polynomial()?;
        check_rank(f, k)?;
    }
    let mut spectrum = SignedSpectrum::single(first.clone());
    for factor in rest {
        let mut next = SignedSpectrum::new();
        for (sig, m) in spectrum.iter() {
            next.add_scaled(&compound_multiplier(factor, sig, k)?, m);
        }
        spectrum = next;
    }
    Ok(spectrum)
}

/// Rank bound past which the spectrum cannot grow: the sum of factor lengths.
pub fn stability_bound(factors: &[Signature]) -> usize {
    factors.iter().map(Signature::len).sum()
}

/// Least rank `K` at which the spectrum already equals its stable form, so
/// the spectra at `K` and `K + 1` agree after zero padding.
pub fn stabilization_index(factors: &[Signature]) -> Result<usize> {
    let bound = stability_bound(factors);
    let stable = tensor_decompose(factors, bound)?;
    let widest = factors.iter().map(Signature::len).max().unwrap_or(0);
    let longest = stable.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    Ok(widest.max(longest))
}

/// The U(∞) spectrum: the decomposition at the stabilization index.
pub fn stable_decompose(factors: &[Signature]) -> Result<SignedSpectrum> {
    tensor_decompose(factors, stabilization_index(factors)?)
}

/// Multiplicity of `target` in the stable tensor product.
pub fn multiplicity(factors: &[Signature], target: &Signature) -> Result<usize> {
    let m = stable_decompose(factors)?.multiplicity(target);
    Ok(m.max(0) as usize)
}
