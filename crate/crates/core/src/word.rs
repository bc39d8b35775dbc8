//! Basis words and finite linear combinations of them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Amplitudes below this magnitude are dropped from a [`FockVector`].
pub const PRUNE_EPS: f64 = 1e-14;

/// A basis word `x^{i_1} (x) ... (x) x^{i_n}`. Letters are 0-based generator
/// indices; the empty word is the vacuum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorWord(Vec<usize>);

impl TensorWord {
    pub fn new(letters: Vec<usize>) -> Self {
        TensorWord(letters)
    }

    pub fn vacuum() -> Self {
        TensorWord(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn prepend(&self, letter: usize) -> TensorWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        TensorWord(v)
    }

    /// The word with the letter at `pos` removed.
    pub fn without(&self, pos: usize) -> TensorWord {
        let mut v = self.0.clone();
        v.remove(pos);
        TensorWord(v)
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TensorWord(v)
    }

    /// All `n_gen^len` words of a given length in lexicographic order.
    pub fn all(n_gen: usize, len: usize) -> Vec<TensorWord> {
        let mut out = vec![TensorWord::vacuum()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..n_gen).map(move |a| w.concat(&TensorWord(vec![a]))))
                .collect();
        }
        out
    }

    /// Position of this word in [`TensorWord::all`]`(n_gen, self.len())`.
    pub fn rank_in(&self, n_gen: usize) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * n_gen + a)
    }
}

impl From<Vec<usize>> for TensorWord {
    fn from(v: Vec<usize>) -> Self {
        TensorWord(v)
    }
}

/// Shown with 1-based letters, matching the generator labels `x^1..x^N`.
impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A finite linear combination of basis words, possibly of mixed lengths.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FockVector {
    terms: BTreeMap<TensorWord, Complex64>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(TensorWord::vacuum())
    }

    pub fn basis(word: TensorWord) -> Self {
        let mut v = Self::zero();
        v.add_term(word, Complex64::new(1.0, 0.0));
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (TensorWord, Complex64)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, word: TensorWord, amp: Complex64) {
        match self.terms.entry(word) {
            Entry::Occupied(mut e) => {
                let sum = *e.get() + amp;
                if sum.norm() < PRUNE_EPS {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                if amp.norm() >= PRUNE_EPS {
                    e.insert(amp);
                }
            }
        }
    }

    pub fn get(&self, word: &TensorWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TensorWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> FockVector {
        FockVector::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    /// Largest amplitude magnitude (0 for the zero vector).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.terms.keys().map(TensorWord::len).collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// Terms whose word has exactly `len` letters.
    pub fn sector(&self, len: usize) -> FockVector {
        FockVector {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }

    /// Extends a map on basis words linearly.
    pub fn map_linear<F>(&self, mut f: F) -> FockVector
    where
        F: FnMut(&TensorWord) -> FockVector,
    {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            for (w2, c2) in f(w).terms {
                out.add_term(w2, c * c2);
            }
        }
        out
    }

    /// Fallible variant of [`FockVector::map_linear`].
    pub fn try_map_linear<F, E>(&self, mut f: F) -> Result<FockVector, E>
    where
        F: FnMut(&TensorWord) -> Result<FockVector, E>,
    {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            for (w2, c2) in f(w)?.terms {
                out.add_term(w2, c * c2);
            }
        }
        Ok(out)
    }
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &FockVector {
    type Output = FockVector;
    fn neg(self) -> FockVector {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &FockVector {
    type Output = FockVector;
    fn mul(self, c: Complex64) -> FockVector {
        self.scale(c)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if c.im == 0.0 {
                    format!("{}*{}", c.re, w)
                } else {
                    format!("({}{:+}i)*{}", c.re, c.im, w)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cancellation_prunes_terms() {
        let w = TensorWord::new(vec![0, 1]);
        let mut v = FockVector::basis(w.clone());
        v.add_term(w.clone(), c(-1.0));
        assert!(v.is_zero());
        let u = &FockVector::basis(w.clone()) - &FockVector::basis(w);
        assert!(u.is_zero());
    }

    #[test]
    fn word_enumeration_and_rank() {
        let words = TensorWord::all(3, 2);
        assert_eq!(words.len(), 9);
        for (k, w) in words.iter().enumerate() {
            assert_eq!(w.rank_in(3), k);
        }
        assert_eq!(TensorWord::all(2, 0), vec![TensorWord::vacuum()]);
        assert_eq!(TensorWord::new(vec![0, 1]).to_string(), "[1,2]");
        assert_eq!(TensorWord::vacuum().to_string(), "[]");
    }

    #[test]
    fn word_edits() {
        let w = TensorWord::new(vec![2, 0, 1]);
        assert_eq!(w.prepend(1).letters(), &[1, 2, 0, 1]);
        assert_eq!(w.without(1).letters(), &[2, 1]);
        assert_eq!(w.first(), Some(2));
    }
}
