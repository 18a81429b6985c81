//! Finitely supported probability measures on the group and the geodesic
//! averaging maps `x ↦ μ_N(x)` on the boundary.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::clopen::Clopen;
use super::tree::Tree;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::prefix_set::{slot, slot_letters, Node, PrefixSet};
use crate::scalar::Scalar;
use crate::word::Word;

/// A finitely supported measure on a group, total mass 1 when built by the
/// constructors here.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbMeasure<S> {
    mass: BTreeMap<Element, S>,
}

impl<S: Scalar> ProbMeasure<S> {
    pub fn dirac(e: Element) -> Self {
        ProbMeasure { mass: BTreeMap::from([(e, S::one())]) }
    }

    /// Uniform on the given elements, counted with multiplicity.
    pub fn uniform<I: IntoIterator<Item = Element>>(support: I) -> Self {
        let elems: Vec<Element> = support.into_iter().collect();
        assert!(!elems.is_empty(), "uniform measure on an empty set");
        let w = S::from_ratio(1, elems.len() as i64);
        let mut mass = BTreeMap::new();
        for e in elems {
            let slot: &mut S = mass.entry(e).or_insert_with(S::zero);
            *slot = slot.clone() + w.clone();
        }
        ProbMeasure { mass }
    }

    pub fn get(&self, e: &Element) -> S {
        self.mass.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn total(&self) -> S {
        self.mass.values().cloned().fold(S::zero(), |a, b| a + b)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Element, &S)> {
        self.mass.iter()
    }

    /// Push-forward under left multiplication by `g`.
    pub fn translate(&self, g: &Element) -> Self {
        ProbMeasure { mass: self.mass.iter().map(|(e, v)| (g.mul(e), v.clone())).collect() }
    }

    pub fn measure_of(&self, member: impl Fn(&Element) -> bool) -> S {
        self.mass.iter().filter(|(e, _)| member(e)).map(|(_, v)| v.clone()).fold(S::zero(), |a, b| a + b)
    }

    pub fn l1_distance(&self, other: &Self) -> S {
        let mut d = S::zero();
        for (e, v) in &self.mass {
            d = d + (v.clone() - other.get(e)).abs();
        }
        for (e, v) in &other.mass {
            if !self.mass.contains_key(e) {
                d = d + v.abs();
            }
        }
        d
    }

    /// Product measure on the direct product of the two groups.
    pub fn product(&self, other: &Self) -> Self {
        let mut mass = BTreeMap::new();
        for (a, x) in &self.mass {
            for (b, y) in &other.mass {
                let mut factors = a.0.clone();
                factors.extend(b.0.iter().cloned());
                mass.insert(Element(factors), x.clone() * y.clone());
            }
        }
        ProbMeasure { mass }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Greater,
    Less,
}

impl Relation {
    pub fn holds<S: PartialOrd>(self, value: &S, threshold: &S) -> bool {
        match self {
            Relation::Greater => value > threshold,
            Relation::Less => value < threshold,
        }
    }
}

/// `μ_N(x)`: the uniform measure on the prefixes of `x` of lengths `0..N`.
/// It depends only on the length `N − 1` prefix and its translation defect is
/// at most `2|g|/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeodesicMap {
    pub n: usize,
}

impl GeodesicMap {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "geodesic map needs N ≥ 1");
        GeodesicMap { n }
    }

    /// The measure at any point with prefix `w`.
    pub fn measure_at<S: Scalar>(&self, w: &Word) -> Result<ProbMeasure<S>> {
        if w.len() + 1 < self.n {
            return Err(Error::DepthInsufficient { have: w.len(), need: self.n - 1 });
        }
        Ok(ProbMeasure::uniform((0..self.n).map(|k| Element::word(w.prefix(k)))))
    }

    /// `μ_N(x)(S)` for every `x ∈ [w]`, exact as long as `w` reaches the
    /// leaves of `S`'s trie along its own path.
    pub fn eval<S: Scalar>(&self, w: &Word, set: &PrefixSet) -> Result<S> {
        let n = self.n;
        let mut node = set.root();
        let mut count = 0usize;
        let mut prev = None;
        for k in 0..n {
            match node {
                Node::Leaf(v) => {
                    count += (n - k) * *v as usize;
                    break;
                }
                Node::Branch { here, children } => {
                    count += *here as usize;
                    if k + 1 == n {
                        break;
                    }
                    let Some(&l) = w.letters().get(k) else {
                        return Err(Error::DepthInsufficient { have: w.len(), need: set.depth().min(n) });
                    };
                    node = &children[slot(prev, l)];
                    prev = Some(l);
                }
            }
        }
        Ok(S::from_ratio(count as i64, n as i64))
    }

    /// `{x : μ_N(x)(S)·scale ⋈ θ}` as an exact clopen set of ∂F₂, computed by
    /// walking the trie of `S`.
    pub fn threshold_tree<S: Scalar>(&self, set: &PrefixSet, scale: &S, theta: &S, rel: Relation) -> Tree<bool> {
        let n = self.n;
        let decide = |count: usize| {
            let value = S::from_ratio(count as i64, n as i64) * scale.clone();
            rel.holds(&value, theta)
        };
        fn go(
            node: &Node,
            k: usize,
            count: usize,
            prev: Option<crate::word::Letter>,
            n: usize,
            rank: u8,
            decide: &impl Fn(usize) -> bool,
        ) -> Tree<bool> {
            match node {
                Node::Leaf(v) => Tree::Leaf(decide(count + (n - k) * *v as usize)),
                Node::Branch { here, children } => {
                    let c = count + *here as usize;
                    if k + 1 >= n {
                        return Tree::Leaf(decide(c));
                    }
                    let kids = slot_letters(rank, prev)
                        .zip(children)
                        .map(|(l, child)| go(child, k + 1, c, Some(l), n, rank, decide))
                        .collect();
                    Tree::Node(kids).collapse()
                }
            }
        }
        go(set.root(), 0, 0, None, n, set.rank(), &decide)
    }

    pub fn threshold<S: Scalar>(&self, set: &PrefixSet, theta: &S, rel: Relation) -> Clopen {
        Clopen::from_fibers(vec![self.threshold_tree(set, &S::one(), theta, rel)])
    }

    /// Threshold set of a product `A × B ⊆ F₂ × ℤ/k` for the product of `μ_N`
    /// with the uniform measure on `ℤ/k`; the same in every fiber.
    pub fn threshold_product<S: Scalar>(&self, a: &PrefixSet, b_size: usize, k: usize, theta: &S, rel: Relation) -> Clopen {
        let scale = S::from_ratio(b_size as i64, k as i64);
        let tree = self.threshold_tree(a, &scale, theta, rel);
        Clopen::from_fibers(vec![tree; k])
    }

    /// `‖μ_N(g·x) − g·μ_N(x)‖₁` for every `x ∈ [w]`.
    pub fn defect<S: Scalar>(&self, g: &Word, w: &Word) -> Result<S> {
        let need = self.n - 1 + g.len();
        if w.len() < need {
            return Err(Error::DepthInsufficient { have: w.len(), need });
        }
        let moved: ProbMeasure<S> = self.measure_at(&g.mul(w).prefix(self.n - 1))?;
        let pushed = self.measure_at::<S>(&w.prefix(self.n - 1))?.translate(&Element::word(g.clone()));
        Ok(moved.l1_distance(&pushed))
    }

    pub fn defect_bound<S: Scalar>(&self, g: &Word) -> S {
        S::from_ratio(2 * g.len() as i64, self.n as i64)
    }
}
