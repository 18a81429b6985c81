//! Tower families and their verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::{Element, Factor, FactorGroup, Group};
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::subset::{FiberedSet, Subset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerItem {
    #[serde(rename = "A")]
    pub set: Subset,
    pub g: Element,
    /// Which of the independent copies this tower belongs to; covering is
    /// required separately for every copy.
    #[serde(default)]
    pub copy: usize,
}

/// Sets `A_i` and elements `g_i` such that the translates `d·A_i` (`d ∈ D`)
/// are pairwise disjoint and each copy satisfies `G = ⋃ g_i·A_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerFamily {
    pub group: Group,
    #[serde(rename = "D")]
    pub d: Vec<Element>,
    #[serde(rename = "towers")]
    pub items: Vec<TowerItem>,
    #[serde(default = "one")]
    pub copies: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    Exact,
    Ball { radius: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub element: Element,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Check {
    fn from(found: Option<Counterexample>) -> Self {
        Check { pass: found.is_none(), counterexample: found }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerChecks {
    pub disjoint: Check,
    pub cover: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    #[serde(flatten)]
    pub mode: VerifyMode,
    pub checks: TowerChecks,
}

impl TowerReport {
    pub fn pass(&self) -> bool {
        self.checks.disjoint.pass && self.checks.cover.pass
    }
}

/// A normalized set in whichever exact form the ambient group supports.
enum Exact {
    Free(PrefixSet),
    Fibered(FiberedSet),
}

impl Exact {
    fn translate(&self, g: &Element) -> Exact {
        match (self, g.0.as_slice()) {
            (Exact::Free(s), [Factor::Word(w)]) => Exact::Free(s.translate(w)),
            (Exact::Fibered(s), [Factor::Word(w), Factor::Mod { value, .. }]) => Exact::Fibered(s.translate(w, *value)),
            _ => unreachable!("element checked against the group"),
        }
    }

    fn intersection(&self, other: &Exact) -> Exact {
        match (self, other) {
            (Exact::Free(a), Exact::Free(b)) => Exact::Free(a.intersection(b)),
            (Exact::Fibered(a), Exact::Fibered(b)) => Exact::Fibered(a.intersection(b)),
            _ => unreachable!(),
        }
    }

    fn union(&self, other: &Exact) -> Exact {
        match (self, other) {
            (Exact::Free(a), Exact::Free(b)) => Exact::Free(a.union(b)),
            (Exact::Fibered(a), Exact::Fibered(b)) => Exact::Fibered(a.union(b)),
            _ => unreachable!(),
        }
    }

    fn complement(&self) -> Exact {
        match self {
            Exact::Free(a) => Exact::Free(a.complement()),
            Exact::Fibered(a) => Exact::Fibered(a.complement()),
        }
    }

    fn witness(&self) -> Option<Element> {
        match self {
            Exact::Free(a) => a.shortest_word().map(Element::word),
            Exact::Fibered(a) => a.witness(),
        }
    }

    fn contains(&self, x: &Element) -> bool {
        match (self, x.0.as_slice()) {
            (Exact::Free(s), [Factor::Word(w)]) => s.contains(w),
            (Exact::Fibered(s), [Factor::Word(w), Factor::Mod { value, .. }]) => {
                s.0.get(*value as usize).is_some_and(|f| f.contains(w))
            }
            _ => false,
        }
    }
}

enum Shape {
    Free(u8),
    Fibered(u32),
    Other,
}

fn shape(group: &Group) -> Shape {
    match group.0.as_slice() {
        [FactorGroup::Free(f)] => Shape::Free(f.rank),
        [FactorGroup::Free(f), FactorGroup::Cyclic(k)] if f.rank == 2 => Shape::Fibered(*k),
        _ => Shape::Other,
    }
}

fn normalize(group: &Group, s: &Subset) -> Result<Exact> {
    match shape(group) {
        Shape::Free(rank) => s.normalize(rank).map(Exact::Free),
        Shape::Fibered(k) => s.normalize_fibered(k).map(Exact::Fibered),
        Shape::Other => Err(Error::NotNormalizable(format!("no exact normal form over {group}"))),
    }
}

/// Membership test, through the normal form when one exists.
enum Member<'a> {
    Exact(Exact),
    Symbolic(&'a Subset),
}

impl Member<'_> {
    fn contains(&self, x: &Element) -> bool {
        match self {
            Member::Exact(e) => e.contains(x),
            Member::Symbolic(s) => s.contains(x),
        }
    }
}

impl TowerFamily {
    pub fn n(&self) -> usize {
        self.items.len()
    }

    fn check_elements(&self) -> Result<()> {
        for e in self.d.iter().chain(self.items.iter().map(|t| &t.g)) {
            if !self.group.contains(e) {
                return Err(Error::Invalid(format!("{e} is not an element of {}", self.group)));
            }
        }
        if let Some(t) = self.items.iter().find(|t| t.copy >= self.copies) {
            return Err(Error::IndexOutOfRange { index: t.copy, len: self.copies });
        }
        Ok(())
    }

    /// The distinct elements of `D`, in their stored order.
    fn distinct_d(&self) -> Vec<&Element> {
        let mut out: Vec<&Element> = Vec::new();
        for d in &self.d {
            if !out.contains(&d) {
                out.push(d);
            }
        }
        out
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<TowerReport> {
        self.check_elements()?;
        let checks = match mode {
            VerifyMode::Exact => self.verify_exact()?,
            VerifyMode::Ball { radius } => self.verify_ball(radius)?,
        };
        Ok(TowerReport { mode, checks })
    }

    fn verify_exact(&self) -> Result<TowerChecks> {
        let sets = self.items.iter().map(|t| normalize(&self.group, &t.set)).collect::<Result<Vec<_>>>()?;
        let ds = self.distinct_d();

        let mut translates = Vec::new();
        let mut disjoint = None;
        'outer: for d in &ds {
            for (i, a) in sets.iter().enumerate() {
                let t = a.translate(d);
                for (d2, i2, t2) in &translates {
                    if let Some(x) = t.intersection(t2).witness() {
                        disjoint = Some(Counterexample {
                            element: x,
                            detail: format!("lies in {d2}·A{} and {d}·A{}", i2 + 1, i + 1),
                        });
                        break 'outer;
                    }
                }
                translates.push((*d, i, t));
            }
        }

        let mut cover = None;
        for copy in 0..self.copies {
            let union = self
                .items
                .iter()
                .zip(&sets)
                .filter(|(t, _)| t.copy == copy)
                .map(|(t, a)| a.translate(&t.g))
                .reduce(|x, y| x.union(&y));
            let missing = match union {
                Some(u) => u.complement().witness(),
                None => Some(self.group.identity()),
            };
            if let Some(x) = missing {
                cover = Some(Counterexample { element: x, detail: format!("not covered by copy {copy}") });
                break;
            }
        }
        Ok(TowerChecks { disjoint: Check::from(disjoint), cover: Check::from(cover) })
    }

    fn verify_ball(&self, radius: usize) -> Result<TowerChecks> {
        let ball = self.group.ball(radius)?;
        let members: Vec<Member> = self
            .items
            .iter()
            .map(|t| match normalize(&self.group, &t.set) {
                Ok(e) => Member::Exact(e),
                Err(_) => Member::Symbolic(&t.set),
            })
            .collect();
        let ds = self.distinct_d();
        let d_inv: Vec<Element> = ds.iter().map(|d| d.inverse()).collect();

        let disjoint = ball.par_iter().find_map_first(|x| {
            let mut hits = Vec::new();
            for (d, di) in ds.iter().zip(&d_inv) {
                let y = di.mul(x);
                for (i, a) in members.iter().enumerate() {
                    if a.contains(&y) {
                        hits.push(format!("{d}·A{}", i + 1));
                        if hits.len() == 2 {
                            return Some(Counterexample { element: x.clone(), detail: format!("lies in {} and {}", hits[0], hits[1]) });
                        }
                    }
                }
            }
            None
        });

        let g_inv: Vec<Element> = self.items.iter().map(|t| t.g.inverse()).collect();
        let cover = ball.par_iter().find_map_first(|x| {
            (0..self.copies).find_map(|copy| {
                let covered = self
                    .items
                    .iter()
                    .enumerate()
                    .any(|(i, t)| t.copy == copy && members[i].contains(&g_inv[i].mul(x)));
                (!covered).then(|| Counterexample { element: x.clone(), detail: format!("not covered by copy {copy}") })
            })
        });
        Ok(TowerChecks { disjoint: Check::from(disjoint), cover: Check::from(cover) })
    }

    /// Fails with the first violated condition. Used after construction.
    pub(crate) fn assert_valid(&self, mode: VerifyMode, step: &str) -> Result<TowerReport> {
        let report = self.verify(mode)?;
        for (name, check) in [("disjointness", &report.checks.disjoint), ("covering", &report.checks.cover)] {
            if let Some(c) = &check.counterexample {
                return Err(Error::step(step, format!("{name} fails at {}: {}", c.element, c.detail)));
            }
        }
        Ok(report)
    }
}
