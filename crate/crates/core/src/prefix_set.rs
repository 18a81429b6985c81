//! Exact boolean algebra of cone-expressible subsets of a free group.
//!
//! A [`PrefixSet`] is a finite trie over reduced words. A leaf at the word `w`
//! fixes the membership of every word starting with `w`; an inner node records
//! the membership of `w` itself and branches on the next letter. Tries are kept
//! collapsed, so two sets are equal iff their tries are equal and emptiness is
//! a root check.

use std::collections::VecDeque;

use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Leaf(bool),
    Branch { here: bool, children: Vec<Node> },
}

/// Position of `l` among the legal successors of `prev`.
#[inline]
pub(crate) fn slot(prev: Option<Letter>, l: Letter) -> usize {
    match prev {
        None => l.code() as usize,
        Some(p) => {
            let banned = p.inverse().code();
            debug_assert_ne!(l.code(), banned);
            (l.code() - (l.code() > banned) as u8) as usize
        }
    }
}

#[inline]
pub(crate) fn slot_letters(rank: u8, prev: Option<Letter>) -> impl Iterator<Item = Letter> {
    Letter::successors(rank, prev)
}

fn fan_out(rank: u8, prev: Option<Letter>) -> usize {
    2 * rank as usize - prev.is_some() as usize
}

impl Node {
    fn collapse(self) -> Node {
        match self {
            Node::Branch { here, children } if children.iter().all(|c| *c == Node::Leaf(here)) => Node::Leaf(here),
            other => other,
        }
    }

    fn expand(&self, width: usize) -> (bool, Vec<Node>) {
        match self {
            Node::Leaf(v) => (*v, vec![Node::Leaf(*v); width]),
            Node::Branch { here, children } => (*here, children.clone()),
        }
    }

    fn map(&self, f: &impl Fn(bool) -> bool) -> Node {
        match self {
            Node::Leaf(v) => Node::Leaf(f(*v)),
            Node::Branch { here, children } => Node::Branch {
                here: f(*here),
                children: children.iter().map(|c| c.map(f)).collect(),
            },
        }
    }

    fn zip(&self, other: &Node, f: &impl Fn(bool, bool) -> bool) -> Node {
        match (self, other) {
            (Node::Leaf(x), Node::Leaf(y)) => Node::Leaf(f(*x, *y)),
            (Node::Branch { children, .. }, _) | (_, Node::Branch { children, .. }) => {
                let width = children.len();
                let (h1, c1) = self.expand(width);
                let (h2, c2) = other.expand(width);
                Node::Branch {
                    here: f(h1, h2),
                    children: c1.iter().zip(&c2).map(|(a, b)| a.zip(b, f)).collect(),
                }
                .collapse()
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Branch { children, .. } => 1 + children.iter().map(Node::depth).max().unwrap_or(0),
        }
    }
}

/// A single piece of the normal form: either one word or a whole cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Word(Word),
    Cone(Word),
}

/// A subset of the free group of the given rank, in collapsed trie form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixSet {
    rank: u8,
    root: Node,
}

impl PrefixSet {
    pub fn empty(rank: u8) -> Self {
        PrefixSet { rank, root: Node::Leaf(false) }
    }

    pub fn all(rank: u8) -> Self {
        PrefixSet { rank, root: Node::Leaf(true) }
    }

    /// The cone `W(h)` of reduced words starting with `h`.
    pub fn cone(rank: u8, h: &Word) -> Self {
        Self::path(rank, h, Node::Leaf(true))
    }

    pub fn singleton(rank: u8, w: &Word) -> Self {
        Self::path(rank, w, Node::Branch { here: true, children: vec![Node::Leaf(false); fan_out(rank, w.last())] }.collapse())
    }

    pub fn finite<'a, I: IntoIterator<Item = &'a Word>>(rank: u8, words: I) -> Self {
        words.into_iter().fold(Self::empty(rank), |acc, w| acc.union(&Self::singleton(rank, w)))
    }

    fn path(rank: u8, w: &Word, end: Node) -> Self {
        let mut node = end;
        for i in (0..w.len()).rev() {
            let prev = if i == 0 { None } else { Some(w.letters()[i - 1]) };
            let mut children = vec![Node::Leaf(false); fan_out(rank, prev)];
            children[slot(prev, w.letters()[i])] = node;
            node = Node::Branch { here: false, children }.collapse();
        }
        PrefixSet { rank, root: node }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> Self {
        PrefixSet { rank: self.rank, root: self.root.map(&|v| !v) }
    }

    fn combine(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.rank, other.rank, "sets over free groups of different rank");
        PrefixSet { rank: self.rank, root: self.root.zip(&other.root, &f) }
    }

    pub fn is_empty(&self) -> bool {
        self.root == Node::Leaf(false)
    }

    pub fn is_all(&self) -> bool {
        self.root == Node::Leaf(true)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut node = &self.root;
        let mut prev = None;
        for &l in w.letters() {
            match node {
                Node::Leaf(v) => return *v,
                Node::Branch { children, .. } => {
                    node = &children[slot(prev, l)];
                    prev = Some(l);
                }
            }
        }
        match node {
            Node::Leaf(v) => *v,
            Node::Branch { here, .. } => *here,
        }
    }

    /// Length beyond which membership depends only on a prefix: every word of
    /// length at least `depth()` lies in a constant cone.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Normal form: single words and a prefix-free antichain of cones, all
    /// pairwise disjoint, in depth-first letter order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        let mut stack = vec![(&self.root, Word::identity())];
        while let Some((node, w)) = stack.pop() {
            match node {
                Node::Leaf(true) => out.push(Atom::Cone(w)),
                Node::Leaf(false) => {}
                Node::Branch { here, children } => {
                    if *here {
                        out.push(Atom::Word(w.clone()));
                    }
                    let letters: Vec<Letter> = slot_letters(self.rank, w.last()).collect();
                    for (l, c) in letters.into_iter().zip(children).rev() {
                        stack.push((c, w.pushed(l)));
                    }
                }
            }
        }
        out
    }

    /// The length-lex smallest member, if any.
    pub fn shortest_word(&self) -> Option<Word> {
        let mut queue = VecDeque::from([(&self.root, Word::identity())]);
        while let Some((node, w)) = queue.pop_front() {
            match node {
                Node::Leaf(true) | Node::Branch { here: true, .. } => return Some(w),
                Node::Leaf(false) => {}
                Node::Branch { children, .. } => {
                    for (l, c) in slot_letters(self.rank, w.last()).zip(children) {
                        queue.push_back((c, w.pushed(l)));
                    }
                }
            }
        }
        None
    }

    /// Left translate `g·S`, computed atom by atom.
    pub fn translate(&self, g: &Word) -> Self {
        if g.is_identity() {
            return self.clone();
        }
        self.atoms().iter().fold(Self::empty(self.rank), |acc, atom| {
            let image = match atom {
                Atom::Word(w) => Self::singleton(self.rank, &g.mul(w)),
                Atom::Cone(h) => Self::translate_cone(self.rank, g, h),
            };
            acc.union(&image)
        })
    }

    /// `g·W(h)`. When the product `gh` keeps the last letter of `h` the image is
    /// the cone at `gh`. Otherwise `g = g'h⁻¹` and the image is the complement of
    /// `W(g'x⁻¹)`, `x` the last letter of `h`.
    pub fn translate_cone(rank: u8, g: &Word, h: &Word) -> Self {
        let Some(x) = h.last() else {
            return Self::all(rank);
        };
        if g.cancellation(h) < h.len() {
            Self::cone(rank, &g.mul(h))
        } else {
            let g_rest = g.mul(h);
            Self::cone(rank, &g_rest.pushed(x.inverse())).complement()
        }
    }

    /// Builds a set from its membership predicate, exact once `depth` reaches
    /// the depth of the set being described.
    pub fn from_predicate(rank: u8, depth: usize, mut member: impl FnMut(&Word) -> bool) -> Self {
        fn build(rank: u8, w: &Word, left: usize, member: &mut impl FnMut(&Word) -> bool) -> Node {
            if left == 0 {
                return Node::Leaf(member(w));
            }
            let here = member(w);
            let children = slot_letters(rank, w.last()).map(|l| build(rank, &w.pushed(l), left - 1, member)).collect();
            Node::Branch { here, children }.collapse()
        }
        PrefixSet { rank, root: build(rank, &Word::identity(), depth, &mut member) }
    }
}
