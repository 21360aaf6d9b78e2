//! Signatures (highest weights) and signed spectra.
//!
//! A [`Signature`] is stored without its zero tail, so the labels of
//! `(m1,...,ml)` for U(k) and for every larger rank are the same value. The
//! rank only enters through explicit arguments such as [`Signature::pad`].
//!
//! Nonpositive labels (contragredients) share the type; their zeros sit at
//! the front of the padded tuple so the entries stay weakly decreasing.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<i64>);

impl Signature {
    /// The label of the identity representation.
    pub fn trivial() -> Self {
        Signature(Vec::new())
    }

    /// Canonicalize a raw tuple: reject ascents and mixed signs, drop zeros.
    pub fn normalize(raw: &[i64]) -> Result<Self> {
        if raw.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(raw.to_vec()));
        }
        let has_pos = raw.iter().any(|&x| x > 0);
        let has_neg = raw.iter().any(|&x| x < 0);
        if has_pos && has_neg {
            return Err(Error::MixedSigns(raw.to_vec()));
        }
        Ok(Signature(raw.iter().copied().filter(|&x| x != 0).collect()))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries (the degree, for polynomial labels).
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub(crate) fn require_polynomial(&self) -> Result<()> {
        if self.is_polynomial() {
            Ok(())
        } else {
            Err(Error::NotPolynomial(self.0.clone()))
        }
    }

    /// Entry `i` (0-based) of the zero-extended polynomial label.
    pub fn get(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// The tuple `(m)^k`: entries followed by zeros up to length `k`.
    pub fn pad(&self, k: usize) -> Result<Vec<i64>> {
        if k < self.len() {
            return Err(Error::TooShort { len: self.len(), k });
        }
        let zeros = std::iter::repeat_n(0, k - self.len());
        if self.is_polynomial() {
            Ok(self.0.iter().copied().chain(zeros).collect())
        } else {
            Ok(zeros.chain(self.0.iter().copied()).collect())
        }
    }

    /// Branching relation `h_i >= m_i >= h_{i+1}` with zero padding on both
    /// sides: true when `self` occurs in the restriction of `h` to one rank
    /// lower.
    pub fn interleaves(&self, h: &Signature) -> bool {
        let n = self.len().max(h.len()) + 1;
        let m = pad_any(self, n);
        let h = pad_any(h, n);
        (0..n - 1).all(|i| h[i] >= m[i] && m[i] >= h[i + 1])
    }

    /// `(m1,...,ml) -> (-ml,...,-m1)`, the label of the contragredient.
    pub fn negate(&self) -> Signature {
        Signature(self.0.iter().rev().map(|x| -x).collect())
    }
}

// Zero-pad to length n regardless of sign convention; callers pick n large
// enough.
fn pad_any(s: &Signature, n: usize) -> Vec<i64> {
    s.pad(n).expect("padding length chosen above signature length")
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Parses `"(7,1)"`, `"(7, 1, 0)"` or `"()"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Syntax {
                offset: 0,
                message: format!("expected a parenthesized tuple, got {t:?}"),
            })?;
        if inner.trim().is_empty() {
            return Ok(Signature::trivial());
        }
        let raw = inner
            .split(',')
            .map(|x| {
                x.trim().parse::<i64>().map_err(|_| Error::Syntax {
                    offset: 0,
                    message: format!("bad integer {:?}", x.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::normalize(&raw)
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<i64>::deserialize(d)?;
        Signature::normalize(&raw).map_err(serde::de::Error::custom)
    }
}

/// Finitely supported integer combination of signatures.
///
/// Negative multiplicities only occur inside a determinant expansion; a
/// finished decomposition has strictly positive entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignedSpectrum {
    terms: BTreeMap<Signature, i64>,
}

impl SignedSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(sig: Signature) -> Self {
        let mut s = Self::new();
        s.add(sig, 1);
        s
    }

    pub fn add(&mut self, sig: Signature, mult: i64) {
        if mult == 0 {
            return;
        }
        match self.terms.entry(sig) {
            Entry::Vacant(e) => {
                e.insert(mult);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += mult;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SignedSpectrum, factor: i64) {
        for (sig, m) in &other.terms {
            self.add(sig.clone(), m * factor);
        }
    }

    pub fn multiplicity(&self, sig: &Signature) -> i64 {
        self.terms.get(sig).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending lexicographic order of signatures.
    pub fn iter(&self) -> impl Iterator<Item = (&Signature, i64)> {
        self.terms.iter().rev().map(|(s, m)| (s, *m))
    }

    /// Total number of irreducible constituents counted with multiplicity.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Drop every signature longer than `k`.
    pub fn restrict_length(&self, k: usize) -> SignedSpectrum {
        SignedSpectrum {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.len() <= k)
                .map(|(s, m)| (s.clone(), *m))
                .collect(),
        }
    }

    /// Render with every signature padded to `k` entries, as in `(8,0)+3(7,1)`.
    pub fn display_padded(&self, k: usize) -> String {
        let mut out = String::new();
        for (i, (sig, m)) in self.iter().enumerate() {
            if i > 0 {
                out.push_str(if m < 0 { "-" } else { "+" });
            } else if m < 0 {
                out.push('-');
            }
            if m.abs() != 1 {
                out.push_str(&m.abs().to_string());
            }
            let padded = sig.pad(k.max(sig.len())).expect("k raised to length");
            let body: Vec<String> = padded.iter().map(|x| x.to_string()).collect();
            out.push('(');
            out.push_str(&body.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for SignedSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_padded(0))
    }
}

impl FromIterator<(Signature, i64)> for SignedSpectrum {
    fn from_iter<I: IntoIterator<Item = (Signature, i64)>>(iter: I) -> Self {
        let mut s = SignedSpectrum::new();
        for (sig, m) in iter {
            s.add(sig, m);
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntry {
    signature: Signature,
    multiplicity: i64,
}

impl Serialize for SignedSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<SpectrumEntry> = self
            .iter()
            .map(|(sig, m)| SpectrumEntry {
                signature: sig.clone(),
                multiplicity: m,
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedSpectrum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<SpectrumEntry>::deserialize(d)?;
        Ok(entries
            .into_iter()
            .map(|e| (e.signature, e.multiplicity))
            .collect())
    }
}
