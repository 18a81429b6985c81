//! Explicit towers in F₂ and the construction of several independent copies.

use serde::{Deserialize, Serialize};

use super::family::{TowerFamily, TowerItem, VerifyMode};
use crate::element::{Element, Group};
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::subset::Subset;
use crate::word::{FreeGroup, Letter, Word};

/// Largest radius scanned by the greedy searches for translating elements.
pub const SEARCH_RADIUS: usize = 14;

/// Three towers `A_j = W(h_j)`, `g_j = h_j⁻¹` with `h_j = a^{2m}·b·y_j` for
/// `y = a, a⁻¹, b`, whose complements `F₂ ∖ g_j·A_j` are the cones at
/// `a⁻¹`, `a`, `b⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrengthenedTowers {
    pub m: usize,
    pub h: Vec<Word>,
    pub family: TowerFamily,
    /// `F₂ ∖ g_j·A_j`.
    pub complements: Vec<Word>,
}

fn check_words(d: &[Word]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::Invalid("D must be nonempty".into()));
    }
    if let Some(w) = d.iter().find(|w| w.min_rank() > 2) {
        return Err(Error::Invalid(format!("{w} is not a word in a and b")));
    }
    Ok(())
}

pub fn f2_strengthened_towers(d: &[Word]) -> Result<StrengthenedTowers> {
    check_words(d)?;
    let m = d.iter().map(Word::len).max().unwrap_or(0);
    let stem = Word::letter(Letter::A).pow(2 * m).pushed(Letter::B);
    let h: Vec<Word> = [Letter::A, Letter::A.inverse(), Letter::B].iter().map(|&y| stem.pushed(y)).collect();
    let items = h
        .iter()
        .map(|h| TowerItem { set: Subset::cone(h.clone()), g: Element::word(h.inverse()), copy: 0 })
        .collect();
    let family = TowerFamily {
        group: Group::f2(),
        d: d.iter().cloned().map(Element::word).collect(),
        items,
        copies: 1,
        notes: vec![],
    };
    let complements: Vec<Word> = h.iter().map(|h| Word::letter(h.last().expect("nonempty").inverse())).collect();

    let comps: Vec<PrefixSet> = complements.iter().map(|c| PrefixSet::cone(2, c)).collect();
    for (j, item) in family.items.iter().enumerate() {
        let image = item.set.normalize(2)?.translate(item.g.as_word().expect("word"));
        if image.complement() != comps[j] {
            return Err(Error::step("strengthened towers", format!("complement of g{}·A{} is not W({})", j + 1, j + 1, complements[j])));
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if !comps[i].is_disjoint(&comps[j]) {
                return Err(Error::step("strengthened towers", format!("complements {} and {} meet", i + 1, j + 1)));
            }
        }
    }
    family.assert_valid(VerifyMode::Exact, "strengthened towers")?;
    Ok(StrengthenedTowers { m, h, family, complements })
}

/// The first two strengthened towers: a 2-paradoxical tower family for `D`.
pub fn f2_towers(d: &[Word]) -> Result<TowerFamily> {
    let mut family = f2_strengthened_towers(d)?.family;
    family.items.truncate(2);
    family.assert_valid(VerifyMode::Exact, "f2 towers")?;
    Ok(family)
}

/// First elements `s₁ = ε, s₂, …, s_m` of the length-lex enumeration of F₂
/// with the translates `D·s_j` pairwise disjoint.
pub fn disjoint_translates(d: &[Word], m: usize) -> Result<Vec<Word>> {
    let mut chosen: Vec<Word> = Vec::with_capacity(m);
    let mut used: Vec<Word> = Vec::new();
    let limit = FreeGroup::F2.ball_size(SEARCH_RADIUS);
    for s in FreeGroup::F2.enumerate().take(limit) {
        if chosen.len() == m {
            break;
        }
        let translate: Vec<Word> = d.iter().map(|x| x.mul(&s)).collect();
        if translate.iter().any(|t| used.contains(t)) {
            continue;
        }
        used.extend(translate);
        chosen.push(s);
    }
    if chosen.len() < m {
        return Err(Error::SearchExhausted(format!("found {} of {m} disjoint translates within radius {SEARCH_RADIUS}", chosen.len())));
    }
    Ok(chosen)
}

/// `m` independent copies of towers from `base`: with `D̃ = ⊔ D·s_j`, copy `j`
/// uses `A_i^{(j)} = s_j·A_i` and `g_i^{(j)} = g_i·s_j⁻¹`.
pub fn more_towers(base: impl Fn(&[Word]) -> Result<TowerFamily>, m: usize, d: &[Word]) -> Result<TowerFamily> {
    if m == 0 {
        return Err(Error::Invalid("number of copies must be positive".into()));
    }
    check_words(d)?;
    let s = disjoint_translates(d, m)?;
    let d_tilde: Vec<Word> = s.iter().flat_map(|s| d.iter().map(move |x| x.mul(s))).collect();
    let inner = base(&d_tilde)?;
    let mut items = Vec::with_capacity(m * inner.n());
    for (j, s) in s.iter().enumerate() {
        let s = Element::word(s.clone());
        for t in &inner.items {
            items.push(TowerItem { set: Subset::translated(&s, t.set.clone()), g: t.g.mul(&s.inverse()), copy: j });
        }
    }
    let family = TowerFamily {
        group: inner.group.clone(),
        d: d.iter().cloned().map(Element::word).collect(),
        items,
        copies: m,
        notes: vec![format!("s = {}", s.iter().map(|w| format!("'{w}'")).collect::<Vec<_>>().join(", "))],
    };
    let mode = match family.verify(VerifyMode::Exact) {
        Err(Error::NotNormalizable(_)) => VerifyMode::Ball { radius: 6 },
        _ => VerifyMode::Exact,
    };
    family.assert_valid(mode, "more towers")?;
    Ok(family)
}
