//! Towers from a topologically free filling action, for F₂ acting on ∂F₂:
//! `A_i = {g : g·z₁ ∈ U_i}` for neighborhoods `U_i` of points in the orbit of
//! `z₁` whose `D`-translates are disjoint.

use serde::{Deserialize, Serialize};

use super::family::{TowerFamily, TowerItem, VerifyMode};
use crate::boundary::{BoundaryPoint, Clopen};
use crate::element::{Element, Group};
use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::word::{FreeGroup, Letter, Word};

/// Radius of the ball whose nontrivial elements must move `z₁`.
pub const STABILIZER_RADIUS: usize = 6;
/// Prefix length compared in the stabilizer check.
pub const STABILIZER_DEPTH: usize = 40;
const MAX_NEIGHBORHOOD_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FillingTowers {
    pub family: TowerFamily,
    pub base_point: BoundaryPoint,
    /// `z_i = p_i·z₁`.
    pub orbit: Vec<Word>,
    pub neighborhoods: Vec<Clopen>,
    pub filling: Vec<Word>,
}

/// Checks that no `g ∈ B₆ ∖ {ε}` fixes the length-40 prefix of `z`.
pub fn check_stabilizer(z: &BoundaryPoint) -> Result<()> {
    let p = z.prefix(STABILIZER_DEPTH);
    let ball = FreeGroup::F2.ball(STABILIZER_RADIUS)?;
    match ball.iter().skip(1).find(|g| z.translate(g).prefix(STABILIZER_DEPTH) == p) {
        Some(g) => Err(Error::StabilizerNotVerifiablyTrivial(format!("'{g}' fixes the first {STABILIZER_DEPTH} letters"))),
        None => Ok(()),
    }
}

/// Elements `g₁, …, g_n` with `⋃ g_i·U_i = ∂F₂`, using only the first two
/// sets: if `[u₁] ⊆ U₁` and `[u₂'] ⊆ U₂` end in different letters `x, y`, then
/// `u₁⁻¹·[u₁] ∪ u₂'⁻¹·[u₂']` misses only `[x⁻¹] ∩ [y⁻¹] = ∅`.
pub fn boundary_filling(us: &[Clopen]) -> Result<Vec<Word>> {
    if us.len() < 2 {
        return Err(Error::OracleFailed("∂F₂ is not 1-filling".into()));
    }
    let cyl = |u: &Clopen| match u.smallest_cylinder() {
        Some((0, w)) if !w.is_identity() => Ok(w),
        Some((0, _)) => Ok(Word::letter(Letter::A)),
        _ => Err(Error::OracleFailed(format!("{u} contains no cylinder"))),
    };
    let u1 = cyl(&us[0])?;
    let x = u1.last().expect("nonempty");
    let mut u2 = cyl(&us[1])?;
    if u2.last() == Some(x) {
        let y = Letter::successors(2, Some(x)).find(|&l| l != x).expect("rank two");
        u2.push(y);
    }
    let mut out = vec![u1.inverse(), u2.inverse()];
    out.resize(us.len(), Word::identity());
    Ok(out)
}

fn d_inv_d(d: &[Word]) -> Vec<Word> {
    let mut out = Vec::new();
    for x in d {
        for y in d {
            let p = x.inverse().mul(y);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

pub fn towers_from_filling(
    d: &[Word],
    n: usize,
    z1: BoundaryPoint,
    oracle: impl Fn(&[Clopen]) -> Result<Vec<Word>>,
    radius: usize,
) -> Result<FillingTowers> {
    z1.validate()?;
    check_stabilizer(&z1)?;
    let mut d: Vec<Word> = d.to_vec();
    if !d.contains(&Word::identity()) {
        d.insert(0, Word::identity());
    }
    let ddd = d_inv_d(&d);

    // orbit points p_i·z₁ avoiding D⁻¹D·p_{i'}·z₁ for earlier i'
    let mut orbit = vec![Word::identity()];
    let limit = FreeGroup::F2.ball_size(super::f2::SEARCH_RADIUS);
    for g in FreeGroup::F2.enumerate().take(limit) {
        if orbit.len() >= n {
            break;
        }
        if orbit.iter().all(|p| ddd.iter().all(|q| q.mul(p) != g)) {
            orbit.push(g);
        }
    }
    if orbit.len() < n {
        return Err(Error::SearchExhausted(format!("found {} of {n} orbit points", orbit.len())));
    }

    let mut neighborhoods = None;
    for depth in 1..=MAX_NEIGHBORHOOD_DEPTH {
        let us: Vec<Clopen> = orbit.iter().map(|p| Clopen::cylinder(&z1.translate(p).prefix(depth))).collect();
        let mut seen = Clopen::empty(1);
        let mut ok = true;
        'scan: for u in &us {
            for x in &d {
                let image = u.act_word(x);
                if !image.is_disjoint(&seen) {
                    ok = false;
                    break 'scan;
                }
                seen = seen.union(&image);
            }
        }
        if ok {
            neighborhoods = Some(us);
            break;
        }
    }
    let neighborhoods = neighborhoods.ok_or_else(|| {
        Error::SearchExhausted(format!("no disjoint cylinder neighborhoods up to depth {MAX_NEIGHBORHOOD_DEPTH}"))
    })?;

    let filling = oracle(&neighborhoods)?;
    if filling.len() != n {
        return Err(Error::OracleFailed(format!("expected {n} elements, got {}", filling.len())));
    }
    let images: Vec<Clopen> = filling.iter().zip(&neighborhoods).map(|(g, u)| u.act_word(g)).collect();
    if !Clopen::union_all(1, &images).is_full() {
        return Err(Error::OracleFailed("translates do not cover the boundary".into()));
    }

    let items = neighborhoods
        .iter()
        .zip(&filling)
        .map(|(u, g)| TowerItem { set: Subset::OrbitPre { z: z1.clone(), u: u.clone() }, g: Element::word(g.clone()), copy: 0 })
        .collect();
    let family = TowerFamily {
        group: Group::f2(),
        d: d.into_iter().map(Element::word).collect(),
        items,
        copies: 1,
        notes: vec![
            "the space is the boundary of F2, compact Hausdorff and so Baire".into(),
            format!(
                "stabilizer of the base point checked on the radius {STABILIZER_RADIUS} ball to depth {STABILIZER_DEPTH}; triviality beyond that is assumed"
            ),
        ],
    };
    family.assert_valid(VerifyMode::Ball { radius }, "filling towers")?;
    Ok(FillingTowers { family, base_point: z1, orbit, neighborhoods, filling })
}
