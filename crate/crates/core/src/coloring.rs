//! First-fit greedy coloring of the Cayley graph `Cay(K, E²)` for a cyclic
//! group or ℤ, giving a partition `K = B₀ ⊔ … ⊔ B_{m−1}` whose classes have
//! pairwise disjoint `E`-translates.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CayleyGroup {
    Cyclic(u32),
    Integers,
}

impl CayleyGroup {
    fn normalize(&self, k: i64) -> i64 {
        match self {
            CayleyGroup::Cyclic(n) => k.rem_euclid(*n as i64),
            CayleyGroup::Integers => k,
        }
    }

    /// Position of `k` in the canonical enumeration.
    fn index(&self, k: i64) -> usize {
        match self {
            CayleyGroup::Cyclic(n) => k.rem_euclid(*n as i64) as usize,
            CayleyGroup::Integers if k > 0 => (2 * k - 1) as usize,
            CayleyGroup::Integers => (-2 * k) as usize,
        }
    }

    fn element(&self, index: usize) -> i64 {
        match self {
            CayleyGroup::Cyclic(_) => index as i64,
            CayleyGroup::Integers if index % 2 == 1 => (index as i64 + 1) / 2,
            CayleyGroup::Integers => -(index as i64 / 2),
        }
    }
}

impl fmt::Display for CayleyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CayleyGroup::Cyclic(n) => write!(f, "Z/{n}"),
            CayleyGroup::Integers => write!(f, "Z"),
        }
    }
}

impl Serialize for CayleyGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CayleyGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "Z" => Ok(CayleyGroup::Integers),
            other => other
                .strip_prefix("Z/")
                .and_then(|n| n.parse().ok())
                .filter(|&n: &u32| n > 0)
                .map(CayleyGroup::Cyclic)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown group {s:?}"))),
        }
    }
}

/// A greedy coloring. For finite groups the whole assignment is computed up
/// front; for ℤ it is extended on demand along `0, 1, −1, 2, −2, …`.
pub struct Coloring {
    group: CayleyGroup,
    generators: Vec<i64>,
    /// Nonzero elements of `E²`.
    steps: Vec<i64>,
    colors: RwLock<Vec<usize>>,
}

impl Clone for Coloring {
    fn clone(&self) -> Self {
        Coloring {
            group: self.group,
            generators: self.generators.clone(),
            steps: self.steps.clone(),
            colors: RwLock::new(self.colors.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coloring").field("group", &self.group).field("generators", &self.generators).finish()
    }
}

impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.generators == other.generators
    }
}

/// Greedy coloring of `Cay(K, E²)`. `E` must be symmetric and contain 0.
pub fn greedy_color(group: CayleyGroup, generators: &[i64]) -> Result<Coloring> {
    let e: BTreeSet<i64> = generators.iter().map(|&g| group.normalize(g)).collect();
    if !e.contains(&0) {
        return Err(Error::Invalid("generating set must contain the identity".into()));
    }
    if e.iter().any(|&g| !e.contains(&group.normalize(-g))) {
        return Err(Error::Invalid("generating set must be symmetric".into()));
    }
    let mut sq = BTreeSet::new();
    for &x in &e {
        for &y in &e {
            sq.insert(group.normalize(x + y));
        }
    }
    let steps: Vec<i64> = sq.into_iter().filter(|&g| g != 0).collect();
    let c = Coloring { group, generators: e.into_iter().collect(), steps, colors: RwLock::new(Vec::new()) };
    if let CayleyGroup::Cyclic(n) = group {
        c.extend_to(n as usize - 1);
    }
    Ok(c)
}

impl Coloring {
    pub fn group(&self) -> CayleyGroup {
        self.group
    }

    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    /// `|E²|`, the greedy bound on the number of colors.
    pub fn bound(&self) -> usize {
        self.steps.len() + 1
    }

    fn extend_to(&self, index: usize) {
        if self.colors.read().unwrap().len() > index {
            return;
        }
        let mut colors = self.colors.write().unwrap();
        while colors.len() <= index {
            let i = colors.len();
            let k = self.group.element(i);
            let mut taken = vec![false; self.bound()];
            for &s in &self.steps {
                let j = self.group.index(self.group.normalize(k + s));
                if j < i {
                    taken[colors[j]] = true;
                }
            }
            let c = taken.iter().position(|t| !t).expect("greedy bound exceeded");
            colors.push(c);
        }
    }

    /// Color of `k`, zero-based.
    pub fn color(&self, k: i64) -> usize {
        let i = self.group.index(self.group.normalize(k));
        self.extend_to(i);
        self.colors.read().unwrap()[i]
    }

    /// Number of colors appearing so far (all of them for finite groups).
    pub fn colors_used(&self) -> usize {
        self.colors.read().unwrap().iter().max().map_or(0, |&c| c + 1)
    }

    pub fn class_contains(&self, j: usize, k: i64) -> bool {
        self.color(k) == j
    }

    pub fn class(&self, j: usize, window: i64) -> Result<Vec<i64>> {
        let elems = self.window(window);
        for &k in &elems {
            self.color(k);
        }
        let used = self.colors_used();
        if j >= used {
            return Err(Error::IndexOutOfRange { index: j, len: used });
        }
        Ok(elems.into_iter().filter(|&k| self.color(k) == j).collect())
    }

    /// The group itself when finite, otherwise `[−w, w]`.
    pub fn window(&self, w: i64) -> Vec<i64> {
        match self.group {
            CayleyGroup::Cyclic(n) => (0..n as i64).collect(),
            CayleyGroup::Integers => (-w..=w).collect(),
        }
    }

    /// First pair `(k, k + s)` with equal colors for `s ∈ E² ∖ {0}`.
    pub fn find_conflict(&self, window: i64) -> Option<(i64, i64)> {
        for k in self.window(window) {
            for &s in &self.steps {
                let other = self.group.normalize(k + s);
                if self.color(k) == self.color(other) {
                    return Some((k, other));
                }
            }
        }
        None
    }

    pub fn snapshot(&self, window: i64) -> ColoringRecord {
        let elems = self.window(window);
        let assignment = elems.iter().map(|&k| self.color(k)).collect();
        ColoringRecord {
            group: self.group,
            generators: self.generators.clone(),
            m: self.bound(),
            window,
            colors_used: self.colors_used(),
            assignment,
        }
    }
}

/// Serialized coloring: the assignment on the window `[−w, w]` (or on the
/// whole finite group).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringRecord {
    #[serde(rename = "K")]
    pub group: CayleyGroup,
    #[serde(rename = "E")]
    pub generators: Vec<i64>,
    pub m: usize,
    pub window: i64,
    pub colors_used: usize,
    pub assignment: Vec<usize>,
}

impl ColoringRecord {
    fn elements(&self) -> Vec<i64> {
        match self.group {
            CayleyGroup::Cyclic(n) => (0..n as i64).collect(),
            CayleyGroup::Integers => (-self.window..=self.window).collect(),
        }
    }

    /// Checks the recorded assignment alone: it covers the window, uses at
    /// most `m` colors, and is proper for `E² ∖ {0}` on pairs inside the window.
    /// Returns the first offending pair.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let elems = self.elements();
        if elems.len() != self.assignment.len() {
            return Err(format!("assignment has {} entries for {} elements", self.assignment.len(), elems.len()));
        }
        if let Some(&c) = self.assignment.iter().find(|&&c| c >= self.m) {
            return Err(format!("color {c} exceeds the bound {}", self.m));
        }
        let color = |k: i64| -> Option<usize> {
            let k = self.group.normalize(k);
            elems.binary_search(&k).ok().map(|i| self.assignment[i])
        };
        let mut steps = BTreeSet::new();
        for &x in &self.generators {
            for &y in &self.generators {
                steps.insert(self.group.normalize(x + y));
            }
        }
        steps.remove(&0);
        if steps.len() + 1 != self.m {
            return Err(format!("m = {} but |E²| = {}", self.m, steps.len() + 1));
        }
        for &k in &elems {
            for &s in &steps {
                if let (Some(a), Some(b)) = (color(k), color(k + s)) {
                    if a == b {
                        return Err(format!("{k} and {} share color {a}", self.group.normalize(k + s)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The closed-form proper coloring `k ↦ k mod (2s + 1)` of ℤ for `E = [−s, s]`.
pub fn periodic_color(k: i64, s: i64) -> usize {
    k.rem_euclid(2 * s + 1) as usize
}
