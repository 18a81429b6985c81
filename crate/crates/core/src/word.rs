//! Freely reduced words in free groups of small rank.
//!
//! Letters are serialized one character each: generator `i` is the `i`-th
//! lowercase letter and its inverse the matching uppercase letter, so the
//! rank-two alphabet is `a`, `A`, `b`, `B`. The identity is the empty string.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest radius accepted by [`FreeGroup::ball`] unless overridden.
pub const DEFAULT_MAX_BALL_RADIUS: usize = 14;

/// A generator or inverse generator. Even codes are generators, odd codes
/// their inverses, so `a = 0`, `A = 1`, `b = 2`, `B = 3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const A_INV: Letter = Letter(1);
    pub const B: Letter = Letter(2);
    pub const B_INV: Letter = Letter(3);
    pub const C: Letter = Letter(4);
    pub const C_INV: Letter = Letter(5);

    pub fn new(generator: u8, inverted: bool) -> Self {
        Letter(generator * 2 + inverted as u8)
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn generator(self) -> u8 {
        self.0 >> 1
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    /// All `2 * rank` letters in canonical order.
    pub fn all(rank: u8) -> impl Iterator<Item = Letter> {
        (0..2 * rank).map(Letter)
    }

    /// Letters that may follow `prev` in a reduced word.
    pub fn successors(rank: u8, prev: Option<Letter>) -> impl Iterator<Item = Letter> {
        Letter::all(rank).filter(move |&l| Some(l.inverse()) != prev)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator()) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as u8 - b'a', false)),
            'A'..='Z' => Some(Letter::new(c as u8 - b'A', true)),
            _ => None,
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordering is length-lexicographic (shorter words first, then letter codes),
/// which is the canonical enumeration order used by every search in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used plus one (0 for the identity).
    pub fn min_rank(&self) -> u8 {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Number of letters cancelled when forming `self * other`.
    pub fn cancellation(&self, other: &Word) -> usize {
        self.0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(x, y)| **x == y.inverse())
            .count()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let c = self.cancellation(other);
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * c);
        out.extend_from_slice(&self.0[..self.len() - c]);
        out.extend_from_slice(&other.0[c..]);
        Word(out)
    }

    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Two cones (or cylinders) are disjoint iff their bases are incomparable.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.len())].to_vec())
    }

    /// Appends a letter; the caller guarantees the result stays reduced.
    pub fn push(&mut self, l: Letter) {
        debug_assert!(self.last() != Some(l.inverse()));
        self.0.push(l);
    }

    pub fn pushed(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if matches!(s, "e" | "1" | "ε") {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}")))?);
        }
        let w = Word::reduce(letters.iter().copied());
        if w.len() != letters.len() {
            return Err(Error::Parse(format!("word {s:?} is not freely reduced")));
        }
        Ok(w)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() {
            return Ok(Word::identity());
        }
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The free group on `rank` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeGroup {
    pub rank: u8,
}

impl FreeGroup {
    pub const F2: FreeGroup = FreeGroup { rank: 2 };
    pub const F3: FreeGroup = FreeGroup { rank: 3 };

    pub fn new(rank: u8) -> Self {
        assert!((1..=13).contains(&rank), "rank must be in 1..=13");
        FreeGroup { rank }
    }

    /// `1 + 2r((2r-1)^k - 1)/(2r-2)` words of length at most `k`.
    pub fn ball_size(&self, radius: usize) -> usize {
        let r = self.rank as usize;
        if r == 1 {
            return 2 * radius + 1;
        }
        let q = 2 * r - 1;
        1 + 2 * r * (q.pow(radius as u32) - 1) / (q - 1)
    }

    /// All reduced words of length at most `radius`, length-lex ordered.
    pub fn ball(&self, radius: usize) -> Result<Ball> {
        self.ball_with_limit(radius, DEFAULT_MAX_BALL_RADIUS)
    }

    pub fn ball_with_limit(&self, radius: usize, max_radius: usize) -> Result<Ball> {
        if radius > max_radius {
            return Err(Error::RadiusTooLarge { radius, max: max_radius });
        }
        let mut words = Vec::with_capacity(self.ball_size(radius));
        words.push(Word::identity());
        let mut level_start = 0;
        for _ in 0..radius {
            let level_end = words.len();
            for i in level_start..level_end {
                let prev = words[i].last();
                for l in Letter::successors(self.rank, prev) {
                    let w = words[i].pushed(l);
                    words.push(w);
                }
            }
            level_start = level_end;
        }
        Ok(Ball { radius, words })
    }

    /// Walks the canonical enumeration lazily, one sphere at a time.
    pub fn enumerate(&self) -> impl Iterator<Item = Word> {
        let rank = self.rank;
        let mut level: Vec<Word> = vec![Word::identity()];
        let mut idx = 0usize;
        std::iter::from_fn(move || {
            if idx == level.len() {
                let mut next = Vec::with_capacity(level.len() * (2 * rank as usize - 1));
                for w in &level {
                    for l in Letter::successors(rank, w.last()) {
                        next.push(w.pushed(l));
                    }
                }
                level = next;
                idx = 0;
            }
            idx += 1;
            Some(level[idx - 1].clone())
        })
    }
}

/// The ball `B_r`: every reduced word of length at most `r`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    pub words: Vec<Word>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.words.iter()
    }
}
