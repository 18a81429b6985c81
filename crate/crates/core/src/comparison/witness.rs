//! Subequivalence witnesses `(A_i) ≺_r (V_j)` between tuples of clopen sets:
//! covers of the sources by pieces, each moved by a group element into one of
//! `r + 1` copies of a target, disjointly within each copy.

use serde::{Deserialize, Serialize};

use crate::boundary::Clopen;
use crate::element::{Element, Factor};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub source: usize,
    pub piece: Clopen,
    pub g: Element,
    /// Colors `c` with `c / copies = j` send pieces into target `j`.
    pub color: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub sources: Vec<Clopen>,
    pub targets: Vec<Clopen>,
    /// `r + 1`.
    pub copies: usize,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Verdict {
    fn from(found: Option<String>) -> Self {
        Verdict { pass: found.is_none(), counterexample: found }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub well_formed: Verdict,
    pub covers_sources: Verdict,
    pub disjoint_images: Verdict,
    pub inside_targets: Verdict,
}

impl WitnessReport {
    pub fn pass(&self) -> bool {
        self.well_formed.pass && self.covers_sources.pass && self.disjoint_images.pass && self.inside_targets.pass
    }

    fn first_failure(&self) -> Option<String> {
        [
            ("well-formedness", &self.well_formed),
            ("source covering", &self.covers_sources),
            ("image disjointness", &self.disjoint_images),
            ("target containment", &self.inside_targets),
        ]
        .into_iter()
        .find(|(_, v)| !v.pass)
        .map(|(name, v)| format!("{name}: {}", v.counterexample.as_deref().unwrap_or("failed")))
    }
}

fn describe(set: &Clopen) -> String {
    match set.smallest_cylinder() {
        Some((f, w)) if set.fiber_count() > 1 => format!("[{w}]x{f}"),
        Some((_, w)) => format!("[{w}]"),
        None => "∅".into(),
    }
}

fn acts_on(g: &Element, k: usize) -> bool {
    match g.0.as_slice() {
        [Factor::Word(w)] => k == 1 && w.min_rank() <= 2,
        [Factor::Word(w), Factor::Mod { order, .. }] => *order as usize == k && w.min_rank() <= 2,
        _ => false,
    }
}

impl Witness {
    pub fn fiber_count(&self) -> usize {
        self.sources.first().or(self.targets.first()).map_or(1, Clopen::fiber_count)
    }

    pub fn colors(&self) -> usize {
        self.targets.len() * self.copies
    }

    pub fn target_of(&self, color: usize) -> usize {
        color / self.copies
    }

    fn image(&self, e: &WitnessEntry) -> Clopen {
        e.piece.act(&e.g)
    }

    fn check_shape(&self) -> Option<String> {
        let k = self.fiber_count();
        if self.copies == 0 {
            return Some("no copies of the targets".into());
        }
        if let Some(s) = self.sources.iter().chain(&self.targets).find(|s| s.fiber_count() != k) {
            return Some(format!("{} is not a subset of the common space", s.space()));
        }
        for (n, e) in self.entries.iter().enumerate() {
            if e.source >= self.sources.len() {
                return Some(format!("entry {n} names source {} of {}", e.source, self.sources.len()));
            }
            if e.color >= self.colors() {
                return Some(format!("entry {n} has color {} of {}", e.color, self.colors()));
            }
            if e.piece.fiber_count() != k || !acts_on(&e.g, k) {
                return Some(format!("entry {n} does not live on the common space"));
            }
        }
        None
    }

    pub fn verify(&self) -> WitnessReport {
        if let Some(bad) = self.check_shape() {
            let skipped = Verdict { pass: false, counterexample: Some("not checked".into()) };
            return WitnessReport {
                well_formed: Verdict::from(Some(bad)),
                covers_sources: skipped.clone(),
                disjoint_images: skipped.clone(),
                inside_targets: skipped,
            };
        }
        let k = self.fiber_count();

        let mut cover = None;
        for (i, a) in self.sources.iter().enumerate() {
            let pieces = self.entries.iter().filter(|e| e.source == i).map(|e| &e.piece);
            let missing = a.difference(&Clopen::union_all(k, pieces));
            if !missing.is_empty() {
                cover = Some(format!("{} of source {i} is not covered", describe(&missing)));
                break;
            }
        }

        let images: Vec<Clopen> = self.entries.iter().map(|e| self.image(e)).collect();
        let mut disjoint = None;
        let mut inside = None;
        'colors: for c in 0..self.colors() {
            let members: Vec<usize> = (0..self.entries.len()).filter(|&n| self.entries[n].color == c).collect();
            let target = &self.targets[self.target_of(c)];
            let mut seen = Clopen::empty(k);
            for (pos, &n) in members.iter().enumerate() {
                if inside.is_none() {
                    let outside = images[n].difference(target);
                    if !outside.is_empty() {
                        inside = Some(format!("image of entry {n} meets {} outside target {}", describe(&outside), self.target_of(c)));
                    }
                }
                if disjoint.is_none() && !images[n].is_disjoint(&seen) {
                    let other = members[..pos].iter().copied().find(|&m| !images[m].is_disjoint(&images[n])).expect("overlap has a source");
                    let shared = images[n].intersection(&images[other]);
                    disjoint = Some(format!("entries {other} and {n} of color {c} share {}", describe(&shared)));
                }
                if disjoint.is_some() && inside.is_some() {
                    break 'colors;
                }
                seen = seen.union(&images[n]);
            }
        }
        WitnessReport {
            well_formed: Verdict::from(None),
            covers_sources: Verdict::from(cover),
            disjoint_images: Verdict::from(disjoint),
            inside_targets: Verdict::from(inside),
        }
    }

    /// Fails with the first violated condition.
    pub fn assert_valid(&self, step: &str) -> Result<WitnessReport> {
        let report = self.verify();
        match report.first_failure() {
            Some(msg) => Err(Error::step(step, msg)),
            None => Ok(report),
        }
    }

    /// `A ≺ V` by the identity when `A ⊆ V`.
    pub fn identity(a: Clopen, v: Clopen) -> Witness {
        let k = a.fiber_count();
        let g = if k == 1 { Element::word(Word::identity()) } else { Element::pair(Word::identity(), 0, k as u32) };
        Witness {
            entries: vec![WitnessEntry { source: 0, piece: a.clone(), g, color: 0 }],
            sources: vec![a],
            targets: vec![v],
            copies: 1,
        }
    }
}

/// `(A_i) ≺ (V_c)` and `(V_c) ≺_r (W_k)` give `(A_i) ≺_r (W_k)`, where `V_c`
/// ranges over the colors of the first witness. A piece `O` moved by `g` meets
/// each piece `Y` (moved by `h`) of the second witness in `O ∩ g⁻¹·Y`, which
/// is moved by `h·g`.
pub fn compose(w1: &Witness, w2: &Witness) -> Result<Witness> {
    let middles = w1.colors();
    if w2.sources.len() != middles {
        return Err(Error::IncompatibleMiddles(format!("{middles} middle sets against {} sources", w2.sources.len())));
    }
    for c in 0..middles {
        if w2.sources[c] != w1.targets[w1.target_of(c)] {
            return Err(Error::IncompatibleMiddles(format!("middle set {c} differs")));
        }
    }
    if w1.fiber_count() != w2.fiber_count() {
        return Err(Error::IncompatibleMiddles("witnesses over different spaces".into()));
    }
    let mut entries = Vec::new();
    for e1 in &w1.entries {
        let g_inv = e1.g.inverse();
        for e2 in w2.entries.iter().filter(|e2| e2.source == e1.color) {
            let z = e1.piece.intersection(&e2.piece.act(&g_inv));
            if z.is_empty() {
                continue;
            }
            entries.push(WitnessEntry { source: e1.source, piece: z, g: e2.g.mul(&e1.g), color: e2.color });
        }
    }
    let out = Witness { sources: w1.sources.clone(), targets: w2.targets.clone(), copies: w2.copies, entries };
    out.assert_valid("compose")?;
    Ok(out)
}

/// Maximal cylinders of `w`, split one level further wherever a cylinder is a
/// whole fiber.
fn proper_cylinders(w: &Clopen) -> Vec<(usize, Word)> {
    let mut out = Vec::new();
    for (f, u) in w.cylinders() {
        if u.is_identity() {
            out.extend(Letter::all(2).map(|l| (f, Word::letter(l))));
        } else {
            out.push((f, u));
        }
    }
    out
}

/// Turns `X ≺_r W` into `X ≺ V` for nonempty `V`: each cylinder `[w_q]` of `W`
/// and each copy `k` get their own element `t = u·w_q⁻¹` mapping `[w_q]` onto a
/// cylinder `[u] ⊆ [v] ⊆ V`, all the `[u]` distinct of equal length.
pub fn boost(w: &Witness, v: &Clopen) -> Result<Witness> {
    if w.targets.len() != 1 {
        return Err(Error::Invalid("boosting needs a single target".into()));
    }
    let k = w.fiber_count();
    if v.fiber_count() != k {
        return Err(Error::Invalid("target lives on a different space".into()));
    }
    let (fv, base) = v.smallest_cylinder().ok_or_else(|| Error::Invalid("boost target is empty".into()))?;
    let cylinders = proper_cylinders(&w.targets[0]);
    let needed: Vec<Letter> = (0..w.copies).flat_map(|_| cylinders.iter().map(|(_, u)| u.last().expect("proper"))).collect();

    let mut found = None;
    for extra in 1..=super::MAX_EXTENSION {
        let mut pool: Vec<Word> = Vec::new();
        crate::boundary::tree::extend_to(&base, base.len() + extra, &mut |x| pool.push(x));
        let mut taken = vec![false; pool.len()];
        let mut picks = Vec::with_capacity(needed.len());
        for &y in &needed {
            match (0..pool.len()).find(|&i| !taken[i] && pool[i].last() == Some(y)) {
                Some(i) => {
                    taken[i] = true;
                    picks.push(pool[i].clone());
                }
                None => break,
            }
        }
        if picks.len() == needed.len() {
            found = Some(picks);
            break;
        }
    }
    let picks = found.ok_or_else(|| Error::SearchExhausted(format!("no room for {} disjoint copies inside {v}", needed.len())))?;

    let translator = |copy: usize, q: usize| -> Element {
        let (fq, wq) = &cylinders[q];
        let u = &picks[copy * cylinders.len() + q];
        let t = u.mul(&wq.inverse());
        if k == 1 {
            Element::word(t)
        } else {
            Element::pair(t, ((fv + k - fq) % k) as u32, k as u32)
        }
    };
    let images: Vec<Clopen> = (0..w.copies)
        .flat_map(|c| (0..cylinders.len()).map(move |q| (c, q)))
        .map(|(c, q)| Clopen::cylinder_in(k, cylinders[q].0, &cylinders[q].1).act(&translator(c, q)))
        .collect();
    for (i, a) in images.iter().enumerate() {
        if !a.is_subset(v) || images[..i].iter().any(|b| !a.is_disjoint(b)) {
            return Err(Error::step("boost", "translated target cylinders are not disjoint inside the new target"));
        }
    }

    let mut entries = Vec::new();
    for e in &w.entries {
        let copy = e.color % w.copies;
        let g_inv = e.g.inverse();
        for (q, (fq, wq)) in cylinders.iter().enumerate() {
            let part = e.piece.intersection(&Clopen::cylinder_in(k, *fq, wq).act(&g_inv));
            if part.is_empty() {
                continue;
            }
            entries.push(WitnessEntry { source: e.source, piece: part, g: translator(copy, q).mul(&e.g), color: 0 });
        }
    }
    let out = Witness { sources: w.sources.clone(), targets: vec![v.clone()], copies: 1, entries };
    out.assert_valid("boost")?;
    Ok(out)
}
