//! Symbolic subsets of F₂ and of the product groups built from it.
//!
//! A [`Subset`] is an expression tree with decidable membership. Expressions
//! over cones, finite sets and the boolean/translate operations normalize to a
//! [`PrefixSet`]; over `F₂ × ℤ/k` the same fragment, together with products,
//! normalizes fiber by fiber to a [`FiberedSet`].

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryPoint, Clopen};
use crate::coloring::{greedy_color, CayleyGroup};
use crate::element::{Element, Factor};
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::word::{Letter, Word};

/// Right-coset transversal of `⟨a, b⟩` in F₃.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transversal {
    /// Shortest representatives (no leading `a`, `b` letters) up to a length.
    Shortest { max_len: usize },
    Explicit { reps: Vec<Word> },
}

fn in_ab(w: &Word) -> bool {
    w.letters().iter().all(|l| l.generator() < 2)
}

/// Splits `w = p·s` with `p ∈ ⟨a, b⟩` and `s` the shortest element of `⟨a, b⟩w`.
pub fn coset_split(w: &Word) -> (Word, Word) {
    let cut = w.letters().iter().position(|l| l.generator() >= 2).unwrap_or(w.len());
    (w.prefix(cut), Word::reduce(w.letters()[cut..].iter().copied()))
}

impl Transversal {
    /// The representative of the coset of `w`, with `w = p·s`, if the
    /// transversal reaches that coset.
    pub fn split(&self, w: &Word) -> Option<(Word, Word)> {
        match self {
            Transversal::Shortest { max_len } => {
                let (p, s) = coset_split(w);
                (s.len() <= *max_len).then_some((p, s))
            }
            Transversal::Explicit { reps } => reps.iter().find_map(|s| {
                let p = w.mul(&s.inverse());
                in_ab(&p).then(|| (p, s.clone()))
            }),
        }
    }

    /// Shortest coset representatives of length at most `max_len`.
    pub fn shortest_reps(max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut level = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &level {
                for l in Letter::successors(3, w.last()) {
                    if w.is_identity() && l.generator() < 2 {
                        continue;
                    }
                    next.push(w.pushed(l));
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subset {
    /// `W(h)`, reduced words starting with `h`.
    Cone { h: Word },
    Finite { elements: Vec<Element> },
    Union { of: Vec<Subset> },
    Inter { of: Vec<Subset> },
    Compl { of: Box<Subset> },
    Translate { g: Element, of: Box<Subset> },
    /// `{g : g·z ∈ U}`.
    #[serde(rename = "orbitpre")]
    OrbitPre { z: BoundaryPoint, u: Clopen },
    /// Cartesian product, one factor subset per direct factor.
    Product { factors: Vec<Subset> },
    /// `⋃_{s∈S} B·s ⊆ F₃` for `B ⊆ ⟨a, b⟩`.
    CosetSlice { base: Box<Subset>, transversal: Transversal },
    /// A color class of the greedy coloring of `Cay(K, E²)`.
    ColorClass { group: CayleyGroup, generators: Vec<i64>, class: usize },
}

fn same_shape(x: &Element, y: &Element) -> bool {
    x.0.len() == y.0.len()
        && x.0.iter().zip(&y.0).all(|(a, b)| match (a, b) {
            (Factor::Word(_), Factor::Word(_)) | (Factor::Int(_), Factor::Int(_)) => true,
            (Factor::Mod { order: n, .. }, Factor::Mod { order: m, .. }) => n == m,
            _ => false,
        })
}

impl Subset {
    pub fn cone(h: Word) -> Self {
        Subset::Cone { h }
    }

    pub fn words<I: IntoIterator<Item = Word>>(ws: I) -> Self {
        Subset::Finite { elements: ws.into_iter().map(Element::word).collect() }
    }

    pub fn union(of: Vec<Subset>) -> Self {
        Subset::Union { of }
    }

    pub fn inter(of: Vec<Subset>) -> Self {
        Subset::Inter { of }
    }

    pub fn compl(of: Subset) -> Self {
        Subset::Compl { of: Box::new(of) }
    }

    pub fn translate(g: Element, of: Subset) -> Self {
        Subset::Translate { g, of: Box::new(of) }
    }

    /// `g·S`, folding the identity and non-cancelling cone translates.
    pub fn translated(g: &Element, of: Subset) -> Self {
        if g.is_identity() {
            return of;
        }
        match (&of, g.as_word()) {
            (Subset::Cone { h }, Some(gw)) if !h.is_identity() && gw.cancellation(h) < h.len() => Subset::cone(gw.mul(h)),
            (Subset::Translate { g: inner, of }, _) => Subset::translated(&g.mul(inner), (**of).clone()),
            _ => Subset::translate(g.clone(), of),
        }
    }

    pub fn product(factors: Vec<Subset>) -> Self {
        Subset::Product { factors }
    }

    /// Subset of ℤ/k given by residues.
    pub fn residues(k: u32, values: impl IntoIterator<Item = u32>) -> Self {
        Subset::Finite { elements: values.into_iter().map(|v| Element(vec![Factor::Mod { value: v % k, order: k }])).collect() }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match self {
            Subset::Cone { h } => x.as_word().is_some_and(|w| h.is_prefix_of(w)),
            Subset::Finite { elements } => elements.iter().any(|e| e == x),
            Subset::Union { of } => of.iter().any(|s| s.contains(x)),
            Subset::Inter { of } => of.iter().all(|s| s.contains(x)),
            Subset::Compl { of } => !of.contains(x),
            Subset::Translate { g, of } => same_shape(g, x) && of.contains(&g.inverse().mul(x)),
            Subset::OrbitPre { z, u } => x.as_word().is_some_and(|g| {
                let p = z.translate(g).prefix(u.depth());
                u.contains_prefix(0, &p).unwrap_or(false)
            }),
            Subset::Product { factors } => {
                factors.len() == x.0.len() && factors.iter().enumerate().all(|(i, s)| s.contains(&x.project(i)))
            }
            Subset::CosetSlice { base, transversal } => x
                .as_word()
                .and_then(|w| transversal.split(w))
                .is_some_and(|(p, _)| base.contains(&Element::word(p))),
            Subset::ColorClass { group, generators, class } => match (x.0.as_slice(), group) {
                ([Factor::Int(k)], CayleyGroup::Integers) => {
                    greedy_color(*group, generators).is_ok_and(|c| c.class_contains(*class, *k))
                }
                ([Factor::Mod { value, order }], CayleyGroup::Cyclic(n)) if order == n => {
                    greedy_color(*group, generators).is_ok_and(|c| c.class_contains(*class, *value as i64))
                }
                _ => false,
            },
        }
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        self.contains(&Element::word(w.clone()))
    }

    /// Exact normal form as a subset of `F_rank`.
    pub fn normalize(&self, rank: u8) -> Result<PrefixSet> {
        Ok(match self {
            Subset::Cone { h } => PrefixSet::cone(rank, h),
            Subset::Finite { elements } => {
                let words = elements
                    .iter()
                    .map(|e| e.as_word().cloned().ok_or_else(|| Error::NotNormalizable(format!("{e} is not a word"))))
                    .collect::<Result<Vec<_>>>()?;
                PrefixSet::finite(rank, &words)
            }
            Subset::Union { of } => {
                of.iter().try_fold(PrefixSet::empty(rank), |acc, s| Ok::<_, Error>(acc.union(&s.normalize(rank)?)))?
            }
            Subset::Inter { of } => {
                of.iter().try_fold(PrefixSet::all(rank), |acc, s| Ok::<_, Error>(acc.intersection(&s.normalize(rank)?)))?
            }
            Subset::Compl { of } => of.normalize(rank)?.complement(),
            Subset::Translate { g, of } => {
                let w = g.as_word().ok_or_else(|| Error::NotNormalizable(format!("{g} is not a word")))?;
                of.normalize(rank)?.translate(w)
            }
            Subset::OrbitPre { .. } => return Err(Error::NotNormalizable("orbit preimage".into())),
            Subset::Product { .. } => return Err(Error::NotNormalizable("product set".into())),
            Subset::CosetSlice { .. } => return Err(Error::NotNormalizable("coset slice".into())),
            Subset::ColorClass { .. } => return Err(Error::NotNormalizable("color class".into())),
        })
    }

    /// Exact normal form as a subset of `F₂ × ℤ/k`, one prefix set per residue.
    pub fn normalize_fibered(&self, k: u32) -> Result<FiberedSet> {
        let kk = k as usize;
        Ok(match self {
            Subset::Product { factors } => match factors.as_slice() {
                [a, b] => {
                    let a = a.normalize(2)?;
                    let fibers = (0..k)
                        .map(|i| {
                            if b.contains(&Element(vec![Factor::Mod { value: i, order: k }])) {
                                a.clone()
                            } else {
                                PrefixSet::empty(2)
                            }
                        })
                        .collect();
                    FiberedSet(fibers)
                }
                _ => return Err(Error::NotNormalizable("product over F₂ × ℤ/k needs two factors".into())),
            },
            Subset::Finite { elements } => {
                let mut fibers = vec![PrefixSet::empty(2); kk];
                for e in elements {
                    match e.0.as_slice() {
                        [Factor::Word(w), Factor::Mod { value, order }] if *order == k => {
                            fibers[*value as usize] = fibers[*value as usize].union(&PrefixSet::singleton(2, w));
                        }
                        _ => return Err(Error::NotNormalizable(format!("{e} is not in F2xZ/{k}"))),
                    }
                }
                FiberedSet(fibers)
            }
            Subset::Union { of } => of.iter().try_fold(FiberedSet::empty(k), |acc, s| Ok::<_, Error>(acc.union(&s.normalize_fibered(k)?)))?,
            Subset::Inter { of } => {
                of.iter().try_fold(FiberedSet::all(k), |acc, s| Ok::<_, Error>(acc.intersection(&s.normalize_fibered(k)?)))?
            }
            Subset::Compl { of } => of.normalize_fibered(k)?.complement(),
            Subset::Translate { g, of } => match g.0.as_slice() {
                [Factor::Word(w), Factor::Mod { value, order }] if *order == k => of.normalize_fibered(k)?.translate(w, *value),
                _ => return Err(Error::NotNormalizable(format!("{g} is not in F2xZ/{k}"))),
            },
            _ => return Err(Error::NotNormalizable("not a subset of F2 x Z/k".into())),
        })
    }
}

/// A subset of `F₂ × ℤ/k`: fiber `i` holds `{w : (w, i) ∈ S}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedSet(pub Vec<PrefixSet>);

impl FiberedSet {
    pub fn empty(k: u32) -> Self {
        FiberedSet(vec![PrefixSet::empty(2); k as usize])
    }

    pub fn all(k: u32) -> Self {
        FiberedSet(vec![PrefixSet::all(2); k as usize])
    }

    fn zip(&self, other: &Self, f: impl Fn(&PrefixSet, &PrefixSet) -> PrefixSet) -> Self {
        FiberedSet(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, PrefixSet::union)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, PrefixSet::intersection)
    }

    pub fn complement(&self) -> Self {
        FiberedSet(self.0.iter().map(PrefixSet::complement).collect())
    }

    pub fn translate(&self, w: &Word, shift: u32) -> Self {
        let k = self.0.len();
        let mut fibers = vec![PrefixSet::empty(2); k];
        for (i, f) in self.0.iter().enumerate() {
            fibers[(i + shift as usize) % k] = f.translate(w);
        }
        FiberedSet(fibers)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(PrefixSet::is_empty)
    }

    pub fn is_all(&self) -> bool {
        self.0.iter().all(PrefixSet::is_all)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Some element of the set, shortest word first, lowest residue on ties.
    pub fn witness(&self) -> Option<Element> {
        let k = self.0.len() as u32;
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.shortest_word().map(|w| (w, i as u32)))
            .min()
            .map(|(w, i)| Element::pair(w, i, k))
    }
}
