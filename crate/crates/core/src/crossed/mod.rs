//! Finitely supported elements `Σ f_g u_g` of the crossed product of the
//! clopen step functions on ∂F₂ (or ∂F₂ × ℤ/k) by the acting group, with the
//! covariance rule `u_g f = α_g(f) u_g`.

pub mod isometry;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use crate::boundary::Clopen;
use crate::element::{Element, Factor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::Word;

pub use isometry::{build_isometry, IsometryCertificate, IsometryParams};

/// A locally constant function: pairwise disjoint clopen pieces with
/// distinct nonzero values, zero elsewhere, ordered by value.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<S> {
    fibers: usize,
    pieces: Vec<(Clopen, S)>,
}

fn cmp_scalar<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

impl<S: Scalar> StepFunction<S> {
    pub fn zero(k: usize) -> Self {
        StepFunction { fibers: k, pieces: Vec::new() }
    }

    pub fn constant(k: usize, c: S) -> Self {
        Self::canonical(k, vec![(Clopen::full(k), c)])
    }

    pub fn one(k: usize) -> Self {
        Self::constant(k, S::one())
    }

    pub fn indicator(set: &Clopen) -> Self {
        Self::canonical(set.fiber_count(), vec![(set.clone(), S::one())])
    }

    /// Rejects overlapping pieces and pieces on another space.
    pub fn from_pieces(k: usize, pieces: Vec<(Clopen, S)>) -> Result<Self> {
        let mut seen = Clopen::empty(k);
        for (set, _) in &pieces {
            if set.fiber_count() != k {
                return Err(Error::Invalid(format!("piece {set} does not live on {}", seen.space())));
            }
            if !set.is_disjoint(&seen) {
                return Err(Error::Invalid(format!("piece {set} overlaps an earlier piece")));
            }
            seen = seen.union(set);
        }
        Ok(Self::canonical(k, pieces))
    }

    fn canonical(k: usize, pieces: Vec<(Clopen, S)>) -> Self {
        let mut merged: Vec<(Clopen, S)> = Vec::new();
        for (set, v) in pieces {
            if v.is_zero() || set.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some((s, _)) => *s = s.union(&set),
                None => merged.push((set, v)),
            }
        }
        merged.sort_by(|a, b| cmp_scalar(&a.1, &b.1));
        StepFunction { fibers: k, pieces: merged }
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers
    }

    pub fn pieces(&self) -> &[(Clopen, S)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support(&self) -> Clopen {
        Clopen::union_all(self.fibers, self.pieces.iter().map(|(s, _)| s))
    }

    /// The value on the cylinder `[w]` of the given fiber, if constant there.
    pub fn value_at(&self, fiber: usize, w: &Word) -> Option<S> {
        let mut undecided = false;
        for (set, v) in &self.pieces {
            match set.contains_prefix(fiber, w) {
                Some(true) => return Some(v.clone()),
                Some(false) => {}
                None => undecided = true,
            }
        }
        (!undecided).then(S::zero)
    }

    /// Pieces of `self` and `other` on their common refinement, with zero
    /// filled in off the supports.
    fn combine(&self, other: &Self, op: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.fibers, other.fibers, "step functions over different spaces");
        let with_zero = |f: &Self| {
            let mut p = f.pieces.clone();
            p.push((f.support().complement(), S::zero()));
            p
        };
        let (a, b) = (with_zero(self), with_zero(other));
        let mut out = Vec::new();
        for (sa, va) in &a {
            for (sb, vb) in &b {
                let both = sa.intersection(sb);
                if !both.is_empty() {
                    out.push((both, op(va, vb)));
                }
            }
        }
        Self::canonical(self.fibers, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.clone() + b.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::canonical(self.fibers, self.pieces.iter().map(|(s, v)| (s.clone(), v.clone() * c.clone())).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&(S::zero() - S::one()))
    }

    /// `α_g(f) = f ∘ g⁻¹`, supported on `g·supp f`.
    pub fn act(&self, g: &Element) -> Self {
        Self::canonical(self.fibers, self.pieces.iter().map(|(s, v)| (s.act(g), v.clone())).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.pieces.iter().all(|(_, v)| *v >= S::zero())
    }
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    clopen: Clopen,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    space: String,
    step: Vec<PieceRepr>,
}

fn pieces_repr<S: Scalar>(f: &StepFunction<S>) -> Vec<PieceRepr> {
    f.pieces.iter().map(|(c, v)| PieceRepr { clopen: c.clone(), value: v.to_string() }).collect()
}

fn pieces_from<S: Scalar>(k: usize, step: Vec<PieceRepr>) -> Result<StepFunction<S>> {
    let pieces = step
        .into_iter()
        .map(|p| p.value.parse::<S>().map(|v| (p.clopen, v)).map_err(|_| Error::Parse(format!("bad value {:?}", p.value))))
        .collect::<Result<Vec<_>>>()?;
    StepFunction::from_pieces(k, pieces)
}

fn space_name(k: usize) -> String {
    Clopen::empty(k).space()
}

impl<S: Scalar> Serialize for StepFunction<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        StepRepr { space: space_name(self.fibers), step: pieces_repr(self) }.serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for StepFunction<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StepRepr::deserialize(d)?;
        let k = Clopen::parse_space(&repr.space).ok_or_else(|| D::Error::custom(format!("unknown space {:?}", repr.space)))?;
        pieces_from(k, repr.step).map_err(D::Error::custom)
    }
}

/// The identity of the group acting on a space with `k` fibers.
pub fn group_identity(k: usize) -> Element {
    if k == 1 {
        Element::word(Word::identity())
    } else {
        Element::pair(Word::identity(), 0, k as u32)
    }
}

fn acts_on(g: &Element, k: usize) -> bool {
    match k {
        1 => g.as_word().is_some(),
        _ => matches!(g.factors(), [Factor::Word(_), Factor::Mod { order, .. }] if *order as usize == k),
    }
}

/// `Σ_g f_g u_g` with zero coefficients pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedElement<S> {
    fibers: usize,
    terms: BTreeMap<Element, StepFunction<S>>,
}

impl<S: Scalar> CrossedElement<S> {
    pub fn zero(k: usize) -> Self {
        CrossedElement { fibers: k, terms: BTreeMap::new() }
    }

    pub fn one(k: usize) -> Self {
        Self::term(StepFunction::one(k), group_identity(k))
    }

    pub fn unitary(k: usize, g: Element) -> Self {
        Self::term(StepFunction::one(k), g)
    }

    pub fn function(f: StepFunction<S>) -> Self {
        let k = f.fiber_count();
        Self::term(f, group_identity(k))
    }

    /// `f u_g`.
    pub fn term(f: StepFunction<S>, g: Element) -> Self {
        let mut out = Self::zero(f.fiber_count());
        if !f.is_zero() {
            out.terms.insert(g, f);
        }
        out
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &StepFunction<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Element) -> StepFunction<S> {
        self.terms.get(g).cloned().unwrap_or_else(|| StepFunction::zero(self.fibers))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, g: Element, f: StepFunction<S>) {
        let sum = match self.terms.remove(&g) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(g, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, f) in &other.terms {
            out.accumulate(g.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(S::zero() - S::one())))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.fibers);
        for (g, f) in &self.terms {
            out.accumulate(g.clone(), f.scale(c));
        }
        out
    }

    /// `(f u_g)(f' u_h) = f·α_g(f') u_{gh}`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.fibers, other.fibers, "elements over different spaces");
        let mut out = Self::zero(self.fibers);
        for (g, f) in &self.terms {
            for (h, f2) in &other.terms {
                out.accumulate(g.mul(h), f.mul(&f2.act(g)));
            }
        }
        out
    }

    /// `(f u_g)* = α_{g⁻¹}(f̄) u_{g⁻¹}`; coefficients are real.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.fibers);
        for (g, f) in &self.terms {
            let g_inv = g.inverse();
            out.accumulate(g_inv.clone(), f.act(&g_inv));
        }
        out
    }

    /// The coefficient of `u_1`.
    pub fn expectation(&self) -> StepFunction<S> {
        self.coefficient(&group_identity(self.fibers))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    g: Element,
    step: Vec<PieceRepr>,
}

#[derive(Serialize, Deserialize)]
struct CrossedRepr {
    space: String,
    terms: Vec<TermRepr>,
}

impl<S: Scalar> Serialize for CrossedElement<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let terms = self.terms.iter().map(|(g, f)| TermRepr { g: g.clone(), step: pieces_repr(f) }).collect();
        CrossedRepr { space: space_name(self.fibers), terms }.serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for CrossedElement<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CrossedRepr::deserialize(d)?;
        let k = Clopen::parse_space(&repr.space).ok_or_else(|| D::Error::custom(format!("unknown space {:?}", repr.space)))?;
        let mut out = CrossedElement::zero(k);
        for t in repr.terms {
            if !acts_on(&t.g, k) {
                return Err(D::Error::custom(format!("{} does not act on {}", t.g, repr.space)));
            }
            if out.terms.contains_key(&t.g) {
                return Err(D::Error::custom(format!("repeated group element {}", t.g)));
            }
            let f = pieces_from(k, t.step).map_err(D::Error::custom)?;
            out.accumulate(t.g, f);
        }
        Ok(out)
    }
}
