//! Letters and freely reduced words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroupError;

/// Generator `gen` (0-based) or its inverse. Displayed as `a`, `A`, `b`, `B`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Index in `0..2N`: generators first, then inverses.
    pub fn index(self, rank: usize) -> usize {
        self.gen + if self.inverse { rank } else { 0 }
    }

    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..rank)
            .map(|g| Letter::new(g, false))
            .chain((0..rank).map(|g| Letter::new(g, true)))
    }

    fn to_char(self) -> char {
        let base = (b'a' + self.gen as u8) as char;
        if self.inverse {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        if !c.is_ascii_alphabetic() {
            return None;
        }
        let gen = (c.to_ascii_lowercase() as u8 - b'a') as usize;
        Some(Letter::new(gen, c.is_ascii_uppercase()))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank_needed(&self) -> usize {
        self.0.iter().map(|l| l.gen + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(&other.0).copied())
    }

    /// First `k` letters.
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// Whether the first and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => *a != b.inv() || self.0.len() == 1,
            _ => true,
        }
    }

    pub fn rotation(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Conjugacy class representative among cyclic rotations: the
    /// lexicographically least rotation of the cyclic reduction.
    pub fn conjugacy_representative(&self) -> Word {
        let mut w = self.0.clone();
        while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
            w.pop();
            w.remove(0);
        }
        let w = Word(w);
        (0..w.len().max(1))
            .map(|k| if w.is_empty() { w.clone() } else { w.rotation(k) })
            .min()
            .expect("at least one rotation")
    }

    /// Checks that every letter belongs to a rank-`rank` group.
    pub fn check_rank(&self, rank: usize) -> Result<(), GroupError> {
        match self.0.iter().find(|l| l.gen >= rank) {
            Some(l) => Err(GroupError::UnknownLetter(l.to_string())),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    /// Parses `aBba` style words (`1` or the empty string is the identity),
    /// reducing freely.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| GroupError::UnknownLetter(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All reduced words of length `1..=max_len` in rank `rank`, shortest first.
pub fn enumerate_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * (2 * rank).saturating_sub(1).max(1));
        for w in &layer {
            for l in Letter::all(rank) {
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// One cyclically reduced representative per conjugacy class among words of
/// length `1..=max_len`.
pub fn conjugacy_representatives(rank: usize, max_len: usize) -> Vec<Word> {
    let mut reps: Vec<Word> = enumerate_words(rank, max_len)
        .into_iter()
        .filter(|w| w.is_cyclically_reduced() && w.conjugacy_representative() == *w)
        .collect();
    reps.dedup();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("aA"), Word::identity());
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("abAB").to_string(), "abAB");
        assert!("a1".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_words(2, 1).len(), 4);
        assert_eq!(enumerate_words(2, 2).len(), 16);
        let one: Vec<String> = enumerate_words(1, 3).iter().map(|w| w.to_string()).collect();
        assert_eq!(one, ["a", "A", "aa", "AA", "aaa", "AAA"]);
        for len in 1..=5 {
            let count = enumerate_words(2, len).iter().filter(|w| w.len() == len).count();
            assert_eq!(count, 4 * 3usize.pow(len as u32 - 1));
        }
    }

    #[test]
    fn conjugacy_classes() {
        assert_eq!(w("baB").conjugacy_representative(), w("a"));
        assert_eq!(w("ba").conjugacy_representative(), w("ab"));
        // 4 classes of length 1; length 2 pairs xy ~ yx: aa, bb, AA, BB and
        // four two-element classes.
        let reps = conjugacy_representatives(2, 2);
        assert_eq!(reps.len(), 12);
        assert!(reps.contains(&w("ab")) && !reps.contains(&w("ba")));
        assert!(reps.iter().all(|r| r.is_cyclically_reduced()));
    }

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec((0usize..3, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..12)
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(ls in letters()) {
            let once = Word::reduce(ls);
            prop_assert_eq!(Word::reduce(once.letters().to_vec()), once.clone());
            prop_assert!(once.letters().windows(2).all(|p| p[0] != p[1].inv()));
        }

        #[test]
        fn inverse_cancels(ls in letters()) {
            let x = Word::reduce(ls);
            prop_assert!(x.concat(&x.inverse()).is_empty());
            prop_assert_eq!(x.to_string().parse::<Word>().unwrap(), x);
        }
    }
}
