//! Towers for group extensions: `F₂ × ℤ/k` (finite normal subgroup),
//! `F₂ × F₂` (normal subgroup with towers of its own), and `F₃` as a union of
//! cosets of `⟨a, b⟩`.

use super::f2::disjoint_translates;
use super::family::{TowerFamily, TowerItem, VerifyMode};
use crate::element::{Element, Factor, FactorGroup, Group};
use crate::error::{Error, Result};
use crate::subset::{Subset, Transversal};
use crate::word::{FreeGroup, Word};

fn free_part(e: &Element) -> Result<Word> {
    match e.0.first() {
        Some(Factor::Word(w)) => Ok(w.clone()),
        _ => Err(Error::Invalid(format!("{e} has no free factor"))),
    }
}

fn distinct(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for w in words {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn quotient_element(g: &Element) -> Result<Word> {
    g.as_word().cloned().ok_or_else(|| Error::Invalid(format!("quotient tower element {g} is not a word")))
}

/// Towers on `F₂ × ℤ/k` from towers on the quotient `F₂`, with section
/// `s(w) = (w, 0)`: `C_{i,j} = s(t_j h_i⁻¹)·s(h_i A_i)` and
/// `g_{i,j} = k_j·s(t_j h_i⁻¹)⁻¹`, where `D₀ = π(F)` and `D₀·t_j` are disjoint.
pub fn finite_normal_ext_towers(
    base: impl Fn(&[Word]) -> Result<TowerFamily>,
    f: &[Element],
    k: u32,
) -> Result<TowerFamily> {
    if k == 0 {
        return Err(Error::Invalid("the finite factor must be nonempty".into()));
    }
    let group = Group::f2_times_cyclic(k);
    if let Some(e) = f.iter().find(|e| !group.contains(e)) {
        return Err(Error::Invalid(format!("{e} is not in {group}")));
    }
    let d0 = distinct(f.iter().map(free_part).collect::<Result<Vec<_>>>()?);
    let t = disjoint_translates(&d0, k as usize)?;
    let d: Vec<Word> = t.iter().flat_map(|t| d0.iter().map(move |x| x.mul(t))).collect();
    let quotient = base(&d)?;

    let section = |w: Word| Element::pair(w, 0, k);
    let zero = Subset::residues(k, [0]);
    let mut items = Vec::new();
    for tower in &quotient.items {
        let h = quotient_element(&tower.g)?;
        let lifted = Subset::product(vec![Subset::translated(&Element::word(h.clone()), tower.set.clone()), zero.clone()]);
        for (j, t) in t.iter().enumerate() {
            let shift = section(t.mul(&h.inverse()));
            let mut g = shift.inverse();
            g.0[1] = Factor::Mod { value: j as u32, order: k };
            items.push(TowerItem { set: Subset::translate(shift, lifted.clone()), g, copy: 0 });
        }
    }
    let family = TowerFamily {
        group,
        d: f.to_vec(),
        items,
        copies: 1,
        notes: vec![format!("t = {}", t.iter().map(|w| format!("'{w}'")).collect::<Vec<_>>().join(", "))],
    };
    family.assert_valid(VerifyMode::Exact, "finite extension towers")?;
    Ok(family)
}

/// `F` made symmetric and containing the identity.
fn symmetrize(f: &[Element], identity: Element) -> Vec<Element> {
    let mut out = vec![identity];
    for e in f {
        for x in [e.clone(), e.inverse()] {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Towers on `F₂ × F₂` with `K = {ε} × F₂` and section `s(w) = (w, ε)`:
/// `C_{i,j} = s(h_i)⁻¹·B_j·s(h_i A_i)` and `g_{i,j} = k_j·s(h_i)`, checked on
/// the product ball of the given radius.
pub fn extension_towers(
    quotient_base: impl Fn(&[Word]) -> Result<TowerFamily>,
    kernel_base: impl Fn(&[Word]) -> Result<TowerFamily>,
    f: &[Element],
    radius: usize,
) -> Result<TowerFamily> {
    let group = Group::f2_times_f2();
    if let Some(e) = f.iter().find(|e| !group.contains(e)) {
        return Err(Error::Invalid(format!("{e} is not in {group}")));
    }
    let f = symmetrize(f, group.identity());
    let section = |w: &Word| Element(vec![Factor::Word(w.clone()), Factor::Word(Word::identity())]);
    let kernel_part = |e: &Element| match e.0.as_slice() {
        [Factor::Word(x), Factor::Word(y)] if x.is_identity() => Some(y.clone()),
        _ => None,
    };

    let mut e0 = Vec::new();
    for x in &f {
        for y in &f {
            e0.push(x.mul(y));
        }
    }
    let e0: Vec<Element> = e0.into_iter().filter(|e| kernel_part(e).is_some()).collect();
    let d = distinct(f.iter().map(free_part).collect::<Result<Vec<_>>>()?);
    let quotient = quotient_base(&d)?;
    let h: Vec<Word> = quotient.items.iter().map(|t| quotient_element(&t.g)).collect::<Result<_>>()?;

    let mut e = Vec::new();
    for hi in &h {
        let s = section(hi);
        for x in &e0 {
            e.push(kernel_part(&s.mul(x).mul(&s.inverse())).expect("K is normal"));
        }
    }
    let kernel = kernel_base(&distinct(e))?;

    let mut items = Vec::new();
    for (tower, hi) in quotient.items.iter().zip(&h) {
        let lifted = Subset::translated(&Element::word(hi.clone()), tower.set.clone());
        for kt in &kernel.items {
            let kj = quotient_element(&kt.g)?;
            let set = Subset::translate(section(hi).inverse(), Subset::product(vec![lifted.clone(), kt.set.clone()]));
            let g = Element(vec![Factor::Word(Word::identity()), Factor::Word(kj)]).mul(&section(hi));
            items.push(TowerItem { set, g, copy: 0 });
        }
    }
    let family = TowerFamily { group, d: f, items, copies: 1, notes: vec![] };
    for (i, item) in family.items.iter().enumerate() {
        let tower = &quotient.items[i / kernel.n()];
        let projected = project_first(&item.set).ok_or_else(|| Error::step("extension towers", "tower is not a product"))?;
        if projected.normalize(2)? != tower.set.normalize(2)? {
            return Err(Error::step("extension towers", format!("tower {} does not project onto its quotient tower", i + 1)));
        }
    }
    family.assert_valid(VerifyMode::Ball { radius }, "extension towers")?;
    Ok(family)
}

/// The image of a translated product set under the projection onto the
/// first factor, provided the other factors are nonempty.
pub fn project_first(s: &Subset) -> Option<Subset> {
    match s {
        Subset::Translate { g, of } => {
            let inner = project_first(of)?;
            Some(Subset::translated(&g.project(0), inner))
        }
        Subset::Product { factors } => {
            let (first, rest) = factors.split_first()?;
            let nonempty = rest.iter().all(|r| r.normalize(2).is_ok_and(|p| !p.is_empty()));
            nonempty.then(|| first.clone())
        }
        _ => None,
    }
}

/// Towers on F₃ from towers on `⟨a, b⟩`: `A_i = ⊔_{s∈S} B_i·s`, same `g_i`.
/// The transversal must reach every coset meeting the ball of the given
/// radius. The transversal `{ε}` is the case where the subgroup is the whole
/// group and the family lives on F₂.
pub fn union_towers(
    base: impl Fn(&[Word]) -> Result<TowerFamily>,
    d: &[Word],
    transversal: Transversal,
    radius: usize,
) -> Result<TowerFamily> {
    let subgroup = base(d)?;
    let trivial = transversal == Transversal::Explicit { reps: vec![Word::identity()] };
    if !trivial {
        if let Some(s) = Transversal::shortest_reps(radius).into_iter().find(|s| transversal.split(s).is_none()) {
            return Err(Error::TransversalIncomplete { radius, detail: format!("no representative for the coset of '{s}'") });
        }
    }
    let items = subgroup
        .items
        .iter()
        .map(|t| TowerItem {
            set: Subset::CosetSlice { base: Box::new(t.set.clone()), transversal: transversal.clone() },
            g: t.g.clone(),
            copy: t.copy,
        })
        .collect();
    let group = if trivial { Group::f2() } else { Group(vec![FactorGroup::Free(FreeGroup::F3)]) };
    let note = match &transversal {
        Transversal::Shortest { max_len } => format!("shortest coset representatives up to length {max_len}"),
        Transversal::Explicit { reps } => format!("{} explicit coset representatives", reps.len()),
    };
    let family = TowerFamily { group, d: subgroup.d.clone(), items, copies: subgroup.copies, notes: vec![note] };
    family.assert_valid(VerifyMode::Ball { radius }, "union towers")?;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers::f2::f2_towers;

    fn b1() -> Vec<Word> {
        FreeGroup::F2.ball(1).unwrap().words
    }

    #[test]
    fn cyclic_two_extension() {
        let f: Vec<Element> = b1().into_iter().flat_map(|w| [Element::pair(w.clone(), 0, 2), Element::pair(w, 1, 2)]).collect();
        let fam = finite_normal_ext_towers(f2_towers, &f, 2).unwrap();
        assert_eq!(fam.n(), 4);
        assert!(fam.verify(VerifyMode::Ball { radius: 4 }).unwrap().pass());
    }

    #[test]
    fn trivial_finite_factor() {
        let f: Vec<Element> = b1().into_iter().map(|w| Element::pair(w, 0, 1)).collect();
        let fam = finite_normal_ext_towers(f2_towers, &f, 1).unwrap();
        assert_eq!(fam.n(), 2);
    }

    #[test]
    fn union_needs_long_enough_transversal() {
        let err = union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 2 }, 3).unwrap_err();
        assert!(matches!(err, Error::TransversalIncomplete { radius: 3, .. }));
        let fam = union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 3 }, 3).unwrap();
        assert_eq!(fam.group.to_string(), "F3");
    }

    #[test]
    fn trivial_transversal_stays_in_f2() {
        let fam = union_towers(f2_towers, &b1(), Transversal::Explicit { reps: vec![Word::identity()] }, 4).unwrap();
        assert_eq!(fam.group, Group::f2());
    }
}
