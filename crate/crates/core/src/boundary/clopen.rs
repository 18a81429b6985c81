//! Clopen subsets of ∂F₂ and of ∂F₂ × ℤ/k.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::tree::{common_cells, Tree};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::word::Word;
use crate::Rational;

/// A clopen set, one cylinder trie per element of the finite factor
/// (a single fiber for ∂F₂ itself).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clopen {
    fibers: Vec<Tree<bool>>,
}

fn act_tree(t: &Tree<bool>, g: &Word) -> Tree<bool> {
    if g.is_identity() {
        return t.clone();
    }
    let inside: Vec<Word> = t.leaves().into_iter().filter(|(_, v)| **v).map(|(w, _)| w).collect();
    let mut out = Tree::Leaf(false);
    let mut rest = Vec::with_capacity(inside.len());
    // at most one cylinder of an antichain is swallowed entirely by g
    for w in inside {
        match w.last() {
            None => return Tree::Leaf(true),
            Some(x) if g.cancellation(&w) == w.len() => {
                out = Tree::cylinder(&g.mul(&w).pushed(x.inverse()), false, true);
            }
            Some(_) => rest.push(g.mul(&w)),
        }
    }
    for w in rest {
        out.assign(&w, true);
    }
    out
}

impl Clopen {
    pub fn empty(k: usize) -> Self {
        Clopen { fibers: vec![Tree::Leaf(false); k] }
    }

    pub fn full(k: usize) -> Self {
        Clopen { fibers: vec![Tree::Leaf(true); k] }
    }

    /// The cylinder `[w]` in ∂F₂.
    pub fn cylinder(w: &Word) -> Self {
        Clopen { fibers: vec![Tree::cylinder(w, true, false)] }
    }

    /// `[w] × {fiber}` in ∂F₂ × ℤ/k.
    pub fn cylinder_in(k: usize, fiber: usize, w: &Word) -> Self {
        let mut c = Self::empty(k);
        c.fibers[fiber] = Tree::cylinder(w, true, false);
        c
    }

    /// Union of the cylinders at the given (fiber, word) pairs.
    pub fn from_cylinders<'a, I: IntoIterator<Item = (usize, &'a Word)>>(k: usize, cylinders: I) -> Self {
        let mut c = Self::empty(k);
        for (f, w) in cylinders {
            c.fibers[f].assign(w, true);
        }
        c
    }

    pub fn from_fibers(fibers: Vec<Tree<bool>>) -> Self {
        assert!(!fibers.is_empty());
        Clopen { fibers }
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, i: usize) -> &Tree<bool> {
        &self.fibers[i]
    }

    pub fn space(&self) -> String {
        match self.fibers.len() {
            1 => "dF2".to_string(),
            k => format!("dF2xZ/{k}"),
        }
    }

    /// Number of fibers named by a space string (`dF2`, `dF2xZ/k`).
    pub fn parse_space(s: &str) -> Option<usize> {
        match s {
            "dF2" => Some(1),
            s => s.strip_prefix("dF2xZ/").and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 1),
        }
    }

    fn zip(&self, other: &Clopen, f: impl Fn(bool, bool) -> bool) -> Clopen {
        assert_eq!(self.fibers.len(), other.fibers.len(), "clopen sets over different spaces");
        let f = |x: &bool, y: &bool| f(*x, *y);
        Clopen { fibers: self.fibers.iter().zip(&other.fibers).map(|(a, b)| a.zip(b, &f)).collect() }
    }

    pub fn union(&self, other: &Clopen) -> Clopen {
        self.zip(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &Clopen) -> Clopen {
        self.zip(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Clopen) -> Clopen {
        self.zip(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> Clopen {
        Clopen { fibers: self.fibers.iter().map(|t| t.map(&|v| !v)).collect() }
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a Clopen>>(k: usize, sets: I) -> Clopen {
        sets.into_iter().fold(Clopen::empty(k), |acc, s| acc.union(s))
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.iter().all(|t| *t == Tree::Leaf(false))
    }

    pub fn is_full(&self) -> bool {
        self.fibers.iter().all(|t| *t == Tree::Leaf(true))
    }

    pub fn is_subset(&self, other: &Clopen) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Clopen) -> bool {
        self.intersection(other).is_empty()
    }

    /// Membership of the points with prefix `w` in the given fiber, if decided.
    pub fn contains_prefix(&self, fiber: usize, w: &Word) -> Option<bool> {
        self.fibers[fiber].get(w).copied()
    }

    pub fn depth(&self) -> usize {
        self.fibers.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Maximal cylinders, fiber by fiber.
    pub fn cylinders(&self) -> Vec<(usize, Word)> {
        let mut out = Vec::new();
        for (i, t) in self.fibers.iter().enumerate() {
            out.extend(t.leaves().into_iter().filter(|(_, v)| **v).map(|(w, _)| (i, w)));
        }
        out
    }

    /// The set written as a union of depth-`d` cylinders.
    pub fn refine(&self, d: usize) -> Result<Vec<(usize, Word)>> {
        if d < self.depth() {
            return Err(Error::DepthInsufficient { have: d, need: self.depth() });
        }
        let mut out = Vec::new();
        for (i, t) in self.fibers.iter().enumerate() {
            for (w, _) in t.leaves().into_iter().filter(|(_, v)| **v) {
                super::tree::extend_to(&w, d, &mut |x| out.push((i, x)));
            }
        }
        Ok(out)
    }

    /// Length-lex smallest maximal cylinder, preferring lower fibers.
    pub fn smallest_cylinder(&self) -> Option<(usize, Word)> {
        self.cylinders().into_iter().min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
    }

    /// Image under a free-group element, fiber by fiber.
    pub fn act_word(&self, g: &Word) -> Clopen {
        Clopen { fibers: self.fibers.iter().map(|t| act_tree(t, g)).collect() }
    }

    /// Image under `(w, j)` acting by `w` on ∂F₂ and by rotation on the fibers.
    pub fn act(&self, g: &Element) -> Clopen {
        let k = self.fibers.len();
        let w = g.free_part().expect("acting element has a free factor");
        let shift = g.finite_part() as usize % k;
        let mut fibers = vec![Tree::Leaf(false); k];
        for (i, t) in self.fibers.iter().enumerate() {
            fibers[(i + shift) % k] = act_tree(t, w);
        }
        Clopen { fibers }
    }

    /// `U^{-ε}`: points whose ε-ball for the metric `2^{-lcp}` stays in `U`.
    /// With `ℓ` least such that `2^{-ℓ} ≤ ε` this keeps the depth-ℓ cylinders
    /// contained in `U`.
    pub fn shrink(&self, eps: Rational) -> Clopen {
        if eps <= Rational::from_integer(0) {
            return self.clone();
        }
        let mut l = 0usize;
        while l < 62 && Rational::new(1, 1i64 << l) > eps {
            l += 1;
        }
        Clopen { fibers: self.fibers.iter().map(|t| t.truncate(l, &|_| false)).collect() }
    }

    /// Maximal cells on which every set in `sets` is constant.
    pub fn common_cells(sets: &[&Clopen]) -> Vec<(usize, Word, Vec<bool>)> {
        let k = sets.first().map_or(1, |s| s.fibers.len());
        let mut out = Vec::new();
        for f in 0..k {
            let trees: Vec<&Tree<bool>> = sets.iter().map(|s| &s.fibers[f]).collect();
            for (w, vals) in common_cells(&trees) {
                out.push((f, w, vals.into_iter().copied().collect()));
            }
        }
        out
    }
}

impl fmt::Debug for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return write!(f, "{}", self.space());
        }
        let parts: Vec<String> = self
            .cylinders()
            .into_iter()
            .map(|(i, w)| if self.fibers.len() == 1 { format!("[{w}]") } else { format!("[{w}]x{i}") })
            .collect();
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

impl fmt::Display for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Serialize, Deserialize)]
struct ClopenRepr {
    space: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    words: Option<Vec<Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fibers: Option<Vec<Vec<Word>>>,
}

fn fiber_words(t: &Tree<bool>) -> Vec<Word> {
    t.leaves().into_iter().filter(|(_, v)| **v).map(|(w, _)| w).collect()
}

fn build_fiber(words: &[Word]) -> Result<Tree<bool>> {
    let mut t = Tree::Leaf(false);
    for (i, w) in words.iter().enumerate() {
        if words[..i].iter().any(|v| v.comparable(w)) {
            return Err(Error::Parse(format!("cylinder words {w} are not an antichain")));
        }
        t.assign(w, true);
    }
    Ok(t)
}

impl Serialize for Clopen {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let space = self.space();
        let repr = if self.is_full() {
            ClopenRepr { space, kind: "full".into(), words: None, fibers: None }
        } else if self.fibers.len() == 1 {
            ClopenRepr { space, kind: "antichain".into(), words: Some(fiber_words(&self.fibers[0])), fibers: None }
        } else {
            let fibers = self.fibers.iter().map(fiber_words).collect();
            ClopenRepr { space, kind: "antichain".into(), words: None, fibers: Some(fibers) }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Clopen {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ClopenRepr::deserialize(d)?;
        let k = Clopen::parse_space(&repr.space).ok_or_else(|| D::Error::custom(format!("unknown space {:?}", repr.space)))?;
        let c = match (repr.kind.as_str(), repr.words, repr.fibers) {
            ("full", None, None) => Clopen::full(k),
            ("antichain", Some(words), None) if k == 1 => Clopen { fibers: vec![build_fiber(&words).map_err(D::Error::custom)?] },
            ("antichain", None, Some(fibers)) if fibers.len() == k && k > 1 => Clopen {
                fibers: fibers.iter().map(|w| build_fiber(w)).collect::<Result<_>>().map_err(D::Error::custom)?,
            },
            _ => return Err(D::Error::custom("malformed clopen set")),
        };
        Ok(c)
    }
}
