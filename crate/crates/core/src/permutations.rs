//! Symmetric-group machinery: one-line permutations, inversion-count length
//! and reduced words in the adjacent transpositions `s_i = (i, i+1)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest rank for which [`reduced_words`] enumerates.
pub const REDUCED_WORDS_MAX_N: usize = 6;

/// Permutation of `{1..n}` in one-line notation: `images[i-1] = p(i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Word in the adjacent transpositions; letter `i` stands for `s_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word {
    pub letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: impl Into<Vec<usize>>) -> Self {
        Self {
            letters: letters.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product `s_{j1} s_{j2} ... s_{jm}` in `S_n`.
    pub fn product(&self, n: usize) -> Result<Permutation> {
        let mut p = Permutation::identity(n);
        for &i in &self.letters {
            p = p.compose(&Permutation::transposition(n, i)?)?;
        }
        Ok(p)
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Self { letters }
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: impl Into<Vec<usize>>) -> Result<Self> {
        let images = images.into();
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(Self { images })
    }

    /// The adjacent transposition `s_i` in `S_n`.
    pub fn transposition(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Ok(Self { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `p(i)` for `1 <= i <= n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `(self . other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// Number of inversions, equal to the length of any reduced word.
    pub fn length(&self) -> usize {
        let v = &self.images;
        let mut count = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// All permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn length(p: &Permutation) -> usize {
    p.length()
}

/// A word is reduced when its length equals the length of its product.
pub fn is_reduced(w: &Word, n: usize) -> Result<bool> {
    Ok(w.product(n)?.length() == w.len())
}

/// Every reduced word of `p`, found by peeling off right descents.
pub fn reduced_words(p: &Permutation) -> Result<BTreeSet<Word>> {
    let n = p.n();
    if n > REDUCED_WORDS_MAX_N {
        return Err(Error::Guard {
            what: "n",
            value: n,
            limit: REDUCED_WORDS_MAX_N,
        });
    }
    let mut out = BTreeSet::new();
    let mut suffix = Vec::new();
    collect_reduced(p, &mut suffix, &mut out)?;
    Ok(out)
}

fn collect_reduced(p: &Permutation, suffix: &mut Vec<usize>, out: &mut BTreeSet<Word>) -> Result<()> {
    if p.is_identity() {
        let mut letters = suffix.clone();
        letters.reverse();
        out.insert(Word { letters });
        return Ok(());
    }
    let n = p.n();
    for i in 1..n {
        // right descent: p = (p s_i) s_i with l(p s_i) = l(p) - 1
        if p.apply(i) > p.apply(i + 1) {
            let shorter = p.compose(&Permutation::transposition(n, i)?)?;
            suffix.push(i);
            collect_reduced(&shorter, suffix, out)?;
            suffix.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Permutation {
        Permutation::from_images(vec![3, 4, 1, 2]).unwrap()
    }

    #[test]
    fn compose_identity_and_inverse() {
        let p = sigma();
        let id = Permutation::identity(4);
        assert_eq!(id.compose(&p).unwrap(), p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn sigma_from_its_reduced_word() {
        let w = Word::new(vec![2, 1, 3, 2]);
        assert_eq!(w.product(4).unwrap(), sigma());
    }

    #[test]
    fn compose_size_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert!(matches!(err, Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn invalid_one_line() {
        assert!(Permutation::from_images(vec![1, 1, 3]).is_err());
        assert!(Permutation::from_images(vec![0, 1]).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(4).length(), 0);
        assert_eq!(sigma().length(), 4);
        assert_eq!(Permutation::transposition(2, 1).unwrap().length(), 1);
    }

    #[test]
    fn reducedness() {
        assert!(is_reduced(&Word::new(vec![2, 1, 3, 2]), 4).unwrap());
        assert!(!is_reduced(&Word::new(vec![1, 1]), 2).unwrap());
        assert!(is_reduced(&Word::new(vec![1, 2, 1]), 3).unwrap());
        assert!(Word::new(vec![3]).product(3).is_err());
    }

    #[test]
    fn reduced_words_small_cases() {
        let id = reduced_words(&Permutation::identity(3)).unwrap();
        assert_eq!(id.into_iter().collect::<Vec<_>>(), vec![Word::default()]);
        let s = reduced_words(&Permutation::transposition(2, 1).unwrap()).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![Word::new(vec![1])]);
    }

    #[test]
    fn reduced_words_of_sigma_match_brute_force() {
        // oracle: every word of length 4 over {1,2,3} whose product is sigma
        let mut brute = BTreeSet::new();
        for a in 1..4 {
            for b in 1..4 {
                for c in 1..4 {
                    for d in 1..4 {
                        let w = Word::new(vec![a, b, c, d]);
                        if w.product(4).unwrap() == sigma() {
                            brute.insert(w);
                        }
                    }
                }
            }
        }
        let words = reduced_words(&sigma()).unwrap();
        assert_eq!(words, brute);
        assert!(words.contains(&Word::new(vec![2, 1, 3, 2])));
        assert!(words.contains(&Word::new(vec![2, 3, 1, 2])));
        assert_eq!(words.len(), 2);
    }

    #[test]
    fn guard_on_large_n() {
        assert!(matches!(
            reduced_words(&Permutation::identity(7)),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn length_subadditive_and_inverse_invariant_on_s4() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for s in &all {
            assert_eq!(s.inverse().length(), s.length());
            for t in &all {
                assert!(s.compose(t).unwrap().length() <= s.length() + t.length());
            }
        }
    }

    #[test]
    fn every_reduced_word_is_reduced_and_multiplies_back() {
        for p in Permutation::all(4) {
            let words = reduced_words(&p).unwrap();
            assert!(!words.is_empty());
            for w in words {
                assert!(is_reduced(&w, 4).unwrap());
                assert_eq!(w.product(4).unwrap(), p);
            }
        }
    }
}
