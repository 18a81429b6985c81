//! Locally constant functions on ∂F₂ stored as cylinder tries.

use crate::prefix_set::{slot, slot_letters};
use crate::word::{Letter, Word};

pub(crate) const RANK: u8 = 2;

/// A function on the boundary that is constant on every leaf cylinder.
/// Children of the node at `w` are indexed by the legal letters after `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree<V> {
    Leaf(V),
    Node(Vec<Tree<V>>),
}

fn width(prev: Option<Letter>) -> usize {
    2 * RANK as usize - prev.is_some() as usize
}

impl<V: Clone + PartialEq> Tree<V> {
    pub fn constant(v: V) -> Self {
        Tree::Leaf(v)
    }

    pub(crate) fn collapse(self) -> Self {
        match self {
            Tree::Node(children) => match children.first() {
                Some(Tree::Leaf(v)) if children.iter().all(|c| matches!(c, Tree::Leaf(x) if x == v)) => Tree::Leaf(v.clone()),
                _ => Tree::Node(children),
            },
            leaf => leaf,
        }
    }

    /// Value `inside` on the cylinder `[w]`, `outside` elsewhere. `w = ε` gives
    /// the constant `inside`.
    pub fn cylinder(w: &Word, inside: V, outside: V) -> Self {
        let mut t = Tree::Leaf(outside);
        t.assign(w, inside);
        t
    }

    /// Overwrites the value on the cylinder `[w]`.
    pub fn assign(&mut self, w: &Word, v: V) {
        fn go<V: Clone + PartialEq>(node: &mut Tree<V>, letters: &[Letter], prev: Option<Letter>, v: V) {
            let Some((&l, rest)) = letters.split_first() else {
                *node = Tree::Leaf(v);
                return;
            };
            if let Tree::Leaf(x) = node {
                *node = Tree::Node(vec![Tree::Leaf(x.clone()); width(prev)]);
            }
            if let Tree::Node(children) = node {
                go(&mut children[slot(prev, l)], rest, Some(l), v);
            }
            let taken = std::mem::replace(node, Tree::Node(Vec::new()));
            *node = taken.collapse();
        }
        go(self, w.letters(), None, v);
    }

    pub fn map<U: Clone + PartialEq>(&self, f: &impl Fn(&V) -> U) -> Tree<U> {
        match self {
            Tree::Leaf(v) => Tree::Leaf(f(v)),
            Tree::Node(children) => Tree::Node(children.iter().map(|c| c.map(f)).collect()).collapse(),
        }
    }

    pub fn zip<U: Clone + PartialEq, W: Clone + PartialEq>(&self, other: &Tree<U>, f: &impl Fn(&V, &U) -> W) -> Tree<W> {
        match (self, other) {
            (Tree::Leaf(x), Tree::Leaf(y)) => Tree::Leaf(f(x, y)),
            (Tree::Node(a), Tree::Node(b)) => Tree::Node(a.iter().zip(b).map(|(x, y)| x.zip(y, f)).collect()).collapse(),
            (Tree::Leaf(x), Tree::Node(b)) => {
                Tree::Node(b.iter().map(|y| Tree::Leaf(x.clone()).zip(y, f)).collect()).collapse()
            }
            (Tree::Node(a), Tree::Leaf(y)) => {
                Tree::Node(a.iter().map(|x| x.zip(&Tree::Leaf(y.clone()), f)).collect()).collapse()
            }
        }
    }

    /// Value at any point whose prefix is `w`, or `None` if `w` is too short
    /// to decide.
    pub fn get(&self, w: &Word) -> Option<&V> {
        let mut node = self;
        let mut prev = None;
        for &l in w.letters() {
            match node {
                Tree::Leaf(v) => return Some(v),
                Tree::Node(children) => {
                    node = &children[slot(prev, l)];
                    prev = Some(l);
                }
            }
        }
        match node {
            Tree::Leaf(v) => Some(v),
            Tree::Node(_) => None,
        }
    }

    /// Length of the longest leaf word.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(children) => 1 + children.iter().map(Tree::depth).max().unwrap_or(0),
        }
    }

    /// Maximal constant cylinders with their values, in depth-first letter order.
    pub fn leaves(&self) -> Vec<(Word, &V)> {
        let mut out = Vec::new();
        self.walk(Word::identity(), &mut |w, v| out.push((w, v)));
        out
    }

    fn walk<'a>(&'a self, w: Word, f: &mut impl FnMut(Word, &'a V)) {
        match self {
            Tree::Leaf(v) => f(w, v),
            Tree::Node(children) => {
                for (l, c) in slot_letters(RANK, w.last()).zip(children) {
                    c.walk(w.pushed(l), f);
                }
            }
        }
    }

    /// Every word of length exactly `d` with its value. Requires `d ≥ depth()`.
    pub fn refine(&self, d: usize) -> Vec<(Word, V)> {
        let mut out = Vec::new();
        for (w, v) in self.leaves() {
            extend_to(&w, d, &mut |x| out.push((x, v.clone())));
        }
        out
    }

    /// Replaces every subtree rooted at depth `d` by `collapse_to(subtree)`.
    pub fn truncate(&self, d: usize, collapse_to: &impl Fn(&Tree<V>) -> V) -> Tree<V> {
        match self {
            Tree::Leaf(_) => self.clone(),
            Tree::Node(_) if d == 0 => Tree::Leaf(collapse_to(self)),
            Tree::Node(children) => Tree::Node(children.iter().map(|c| c.truncate(d - 1, collapse_to)).collect()).collapse(),
        }
    }
}

/// Calls `f` on every reduced extension of `w` of length exactly `d`
/// (nothing if `|w| > d`), in letter order.
pub fn extend_to(w: &Word, d: usize, f: &mut impl FnMut(Word)) {
    if w.len() == d {
        f(w.clone());
    } else if w.len() < d {
        for l in slot_letters(RANK, w.last()) {
            extend_to(&w.pushed(l), d, f);
        }
    }
}

/// Maximal cylinders on which every tree is constant, with the value tuple.
pub fn common_cells<'a, V: Clone + PartialEq>(trees: &[&'a Tree<V>]) -> Vec<(Word, Vec<&'a V>)> {
    fn go<'a, V>(nodes: Vec<&'a Tree<V>>, w: Word, out: &mut Vec<(Word, Vec<&'a V>)>) {
        if nodes.iter().all(|n| matches!(n, Tree::Leaf(_))) {
            let values = nodes
                .iter()
                .map(|n| match n {
                    Tree::Leaf(v) => v,
                    Tree::Node(_) => unreachable!(),
                })
                .collect();
            out.push((w, values));
            return;
        }
        for (i, l) in slot_letters(RANK, w.last()).enumerate() {
            let next = nodes
                .iter()
                .map(|n| match n {
                    Tree::Leaf(_) => *n,
                    Tree::Node(children) => &children[i],
                })
                .collect();
            go(next, w.pushed(l), out);
        }
    }
    let mut out = Vec::new();
    go(trees.to_vec(), Word::identity(), &mut out);
    out
}
