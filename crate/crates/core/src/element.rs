//! Elements of direct products of free groups, cyclic groups and ℤ.
//!
//! An [`Element`] carries one [`Factor`] per direct factor of its ambient
//! [`Group`]. Cyclic factors carry their order, so elements multiply without
//! a group context.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{FreeGroup, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Word(Word),
    Mod { value: u32, order: u32 },
    Int(i64),
}

impl Factor {
    fn mul(&self, other: &Factor) -> Factor {
        match (self, other) {
            (Factor::Word(u), Factor::Word(v)) => Factor::Word(u.mul(v)),
            (Factor::Mod { value: x, order: n }, Factor::Mod { value: y, order: m }) => {
                assert_eq!(n, m, "cyclic factors of different order");
                Factor::Mod { value: (x + y) % n, order: *n }
            }
            (Factor::Int(x), Factor::Int(y)) => Factor::Int(x + y),
            _ => panic!("factor kinds do not match: {self} * {other}"),
        }
    }

    fn inverse(&self) -> Factor {
        match self {
            Factor::Word(w) => Factor::Word(w.inverse()),
            Factor::Mod { value, order } => Factor::Mod { value: (order - value) % order, order: *order },
            Factor::Int(x) => Factor::Int(-x),
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            Factor::Word(w) => w.is_identity(),
            Factor::Mod { value, .. } => *value == 0,
            Factor::Int(x) => *x == 0,
        }
    }

    /// Word length, residue distance to 0, or absolute value.
    pub fn size(&self) -> usize {
        match self {
            Factor::Word(w) => w.len(),
            Factor::Mod { value, order } => (*value).min(order - value) as usize,
            Factor::Int(x) => x.unsigned_abs() as usize,
        }
    }

    fn parse(s: &str) -> Result<Factor> {
        let s = s.trim();
        if let Some((v, n)) = s.split_once('%') {
            let value: u32 = v.trim().parse().map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
            let order: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad order {s:?}")))?;
            if order == 0 || value >= order {
                return Err(Error::Parse(format!("residue out of range {s:?}")));
            }
            return Ok(Factor::Mod { value, order });
        }
        if s.starts_with('-') || s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            return s.parse().map(Factor::Int).map_err(|_| Error::Parse(format!("bad integer {s:?}")));
        }
        Word::parse(s).map(Factor::Word)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Word(w) => write!(f, "{w}"),
            Factor::Mod { value, order } => write!(f, "{value}%{order}"),
            Factor::Int(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Word(w) => write!(f, "{w:?}"),
            other => write!(f, "{other}"),
        }
    }
}

/// A group element, one factor per direct factor of the ambient group.
///
/// Text form: a single factor is written bare (`aB`, `1%2`, `-3`); tuples are
/// parenthesized and comma separated (`(aB,1%2)`). The F₂ identity is `""`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<Factor>);

impl Element {
    pub fn word(w: Word) -> Self {
        Element(vec![Factor::Word(w)])
    }

    pub fn pair(w: Word, value: u32, order: u32) -> Self {
        Element(vec![Factor::Word(w), Factor::Mod { value: value % order, order }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn mul(&self, other: &Element) -> Element {
        assert_eq!(self.0.len(), other.0.len(), "elements of different groups");
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn inverse(&self) -> Element {
        Element(self.0.iter().map(Factor::inverse).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Factor::is_identity)
    }

    /// The single free-group word, if this is an element of a free group.
    pub fn as_word(&self) -> Option<&Word> {
        match self.0.as_slice() {
            [Factor::Word(w)] => Some(w),
            _ => None,
        }
    }

    /// First free factor, for products `F × K`.
    pub fn free_part(&self) -> Option<&Word> {
        match self.0.first() {
            Some(Factor::Word(w)) => Some(w),
            _ => None,
        }
    }

    /// Residue of the trailing cyclic factor, 0 when there is none.
    pub fn finite_part(&self) -> u32 {
        match self.0.last() {
            Some(Factor::Mod { value, .. }) if self.0.len() > 1 => *value,
            _ => 0,
        }
    }

    pub fn project(&self, factor: usize) -> Element {
        Element(vec![self.0[factor].clone()])
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Factor::size).sum()
    }

    pub fn parse(s: &str) -> Result<Element> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = inner.split(',').map(Factor::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Element(parts));
        }
        Ok(Element(vec![Factor::parse(s)?]))
    }

    /// Splits a comma separated element list, keeping parenthesized tuples whole.
    pub fn parse_list(s: &str) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    out.push(Element::parse(&s[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if !s.trim().is_empty() {
            out.push(Element::parse(&s[start..])?);
        }
        Ok(out)
    }
}

impl From<Word> for Element {
    fn from(w: Word) -> Self {
        Element::word(w)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [single] => write!(f, "{single}"),
            parts => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [single] => write!(f, "{single:?}"),
            parts => f.debug_tuple("").field(&parts).finish(),
        }
    }
}

impl FromStr for Element {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Element::parse(s)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() {
            return Ok(Element::word(Word::identity()));
        }
        Element::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorGroup {
    Free(FreeGroup),
    Cyclic(u32),
    Integers,
}

impl FactorGroup {
    fn identity(&self) -> Factor {
        match self {
            FactorGroup::Free(_) => Factor::Word(Word::identity()),
            FactorGroup::Cyclic(n) => Factor::Mod { value: 0, order: *n },
            FactorGroup::Integers => Factor::Int(0),
        }
    }

    fn ball(&self, radius: usize) -> Result<Vec<Factor>> {
        Ok(match self {
            FactorGroup::Free(f) => f.ball(radius)?.words.into_iter().map(Factor::Word).collect(),
            FactorGroup::Cyclic(n) => (0..*n).map(|value| Factor::Mod { value, order: *n }).collect(),
            FactorGroup::Integers => integers_canonical().take(2 * radius + 1).map(Factor::Int).collect(),
        })
    }

    fn contains(&self, f: &Factor) -> bool {
        match (self, f) {
            (FactorGroup::Free(g), Factor::Word(w)) => w.min_rank() <= g.rank,
            (FactorGroup::Cyclic(n), Factor::Mod { order, .. }) => n == order,
            (FactorGroup::Integers, Factor::Int(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for FactorGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorGroup::Free(g) => write!(f, "F{}", g.rank),
            FactorGroup::Cyclic(n) => write!(f, "Z/{n}"),
            FactorGroup::Integers => write!(f, "Z"),
        }
    }
}

/// The canonical enumeration 0, 1, −1, 2, −2, … of ℤ.
pub fn integers_canonical() -> impl Iterator<Item = i64> {
    (0i64..).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}

/// A direct product of factor groups, written `F2`, `F2xZ/2`, `F2xF2`, `F3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group(pub Vec<FactorGroup>);

impl Group {
    pub fn f2() -> Self {
        Group(vec![FactorGroup::Free(FreeGroup::F2)])
    }

    pub fn f3() -> Self {
        Group(vec![FactorGroup::Free(FreeGroup::F3)])
    }

    pub fn f2_times_cyclic(order: u32) -> Self {
        Group(vec![FactorGroup::Free(FreeGroup::F2), FactorGroup::Cyclic(order)])
    }

    pub fn f2_times_f2() -> Self {
        Group(vec![FactorGroup::Free(FreeGroup::F2), FactorGroup::Free(FreeGroup::F2)])
    }

    pub fn identity(&self) -> Element {
        Element(self.0.iter().map(FactorGroup::identity).collect())
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.0.len() == self.0.len() && self.0.iter().zip(&e.0).all(|(g, f)| g.contains(f))
    }

    /// Cartesian product of the factor balls of the given radius; finite
    /// factors contribute all their elements. Ordered lexicographically by
    /// factor, each factor in its canonical order.
    pub fn ball(&self, radius: usize) -> Result<Vec<Element>> {
        let mut out: Vec<Vec<Factor>> = vec![Vec::new()];
        for g in &self.0 {
            let factor_ball = g.ball(radius)?;
            let mut next = Vec::with_capacity(out.len() * factor_ball.len());
            for prefix in &out {
                for f in &factor_ball {
                    let mut v = prefix.clone();
                    v.push(f.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        Ok(out.into_iter().map(Element).collect())
    }

    pub fn parse(s: &str) -> Result<Group> {
        let parts = s
            .split(['x', '×'])
            .map(|p| match p.trim() {
                "Z" => Ok(FactorGroup::Integers),
                p if p.starts_with("Z/") => p[2..]
                    .parse()
                    .ok()
                    .filter(|&n: &u32| n > 0)
                    .map(FactorGroup::Cyclic)
                    .ok_or_else(|| Error::Parse(format!("bad cyclic group {p:?}"))),
                p if p.starts_with('F') => p[1..]
                    .parse()
                    .ok()
                    .filter(|&r: &u8| (1..=13).contains(&r))
                    .map(|r| FactorGroup::Free(FreeGroup::new(r)))
                    .ok_or_else(|| Error::Parse(format!("bad free group {p:?}"))),
                p => Err(Error::Parse(format!("unknown group factor {p:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Group(parts))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Group::parse(&s).map_err(serde::de::Error::custom)
    }
}
