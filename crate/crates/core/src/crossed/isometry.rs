//! A non-unitary isometry `v = Σ_j α_{g_j}(f_j) u_{g_j}` in the crossed
//! product of the boundary action of F₂, from the strengthened towers for
//! `D = {1, h}` and the geodesic averaging maps.
//!
//! Here `h_j` are the elements the towers are multiplied by (so `F₂ ∖ h_j·A_j`
//! are pairwise disjoint cones) and `g_j = h_j⁻¹`.

use serde::{Deserialize, Serialize};

use super::{CrossedElement, StepFunction};
use crate::boundary::{Clopen, GeodesicMap, Relation};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::subset::Subset;
use crate::towers::{f2_strengthened_towers, TowerFamily, VerifyMode};
use crate::word::Word;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryParams {
    pub h: Word,
    #[serde(rename = "N")]
    pub n: usize,
}

impl Default for IsometryParams {
    fn default() -> Self {
        IsometryParams { h: Word::parse("a").expect("letter"), n: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryCheck {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryCertificate {
    pub h: Word,
    #[serde(rename = "D")]
    pub d: Vec<Word>,
    /// Sets `B_j` with the elements `h_j`.
    pub towers: TowerFamily,
    #[serde(rename = "S")]
    pub transversal: Vec<Element>,
    #[serde(rename = "A")]
    pub a: Vec<Subset>,
    #[serde(with = "crate::scalar::as_string")]
    pub eps: Rational,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "V")]
    pub v_sets: Vec<Clopen>,
    #[serde(rename = "W")]
    pub w_sets: Vec<Clopen>,
    pub f: Vec<StepFunction<Rational>>,
    pub g: Vec<Element>,
    pub v: CrossedElement<Rational>,
    pub expectation_vv_star: StepFunction<Rational>,
    /// A cylinder outside `V`, hence outside the support of `E(vv*)`.
    pub missing_cylinder: Word,
    pub checks: Vec<IsometryCheck>,
}

impl IsometryCertificate {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Rebuilds from the parameters and compares field by field, then
    /// re-runs every check.
    pub fn verify(&self) -> Vec<IsometryCheck> {
        let params = IsometryParams { h: self.h.clone(), n: self.n };
        match construct(&params) {
            Ok(fresh) => {
                let algebra = check_algebra(&self.v, &self.g, &self.f, &self.v_sets, self.missing_cylinder.clone());
                let mut out: Vec<IsometryCheck> =
                    fresh.checks.iter().filter(|c| algebra.iter().all(|a| a.name != c.name)).cloned().collect();
                let same = fresh.d == self.d
                    && fresh.towers == self.towers
                    && fresh.transversal == self.transversal
                    && fresh.a == self.a
                    && fresh.eps == self.eps
                    && fresh.v_sets == self.v_sets
                    && fresh.w_sets == self.w_sets
                    && fresh.f == self.f
                    && fresh.g == self.g
                    && fresh.v == self.v
                    && fresh.expectation_vv_star == self.expectation_vv_star
                    && fresh.missing_cylinder == self.missing_cylinder
                    && fresh.checks == self.checks;
                out.push(IsometryCheck {
                    name: "recorded data matches the construction".into(),
                    pass: same,
                    counterexample: (!same).then(|| "some recorded field differs from its recomputation".into()),
                });
                out.extend(algebra);
                out
            }
            Err(e) => vec![IsometryCheck { name: "construction".into(), pass: false, counterexample: Some(e.to_string()) }],
        }
    }
}

struct Checks(Vec<IsometryCheck>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, detail: impl FnOnce() -> String) {
        self.0.push(IsometryCheck { name: name.into(), pass, counterexample: (!pass).then(detail) });
    }
}

fn pairwise_disjoint(sets: &[Clopen]) -> Option<(usize, usize)> {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Orthogonality of the moved coefficients, `v*v = 1`, the formula for `E(vv*)` and its support.
fn check_algebra(v: &CrossedElement<Rational>, g: &[Element], f: &[StepFunction<Rational>], v_sets: &[Clopen], missing: Word) -> Vec<IsometryCheck> {
    let mut c = Checks(Vec::new());
    let moved: Vec<StepFunction<Rational>> = f.iter().zip(g).map(|(f, g)| f.act(g)).collect();
    let mut orth = None;
    for j in 0..moved.len() {
        for k in 0..moved.len() {
            if j != k && !moved[j].mul(&moved[k]).is_zero() {
                orth = Some((j, k));
            }
        }
    }
    c.push("orthogonality of the moved coefficients", orth.is_none(), || format!("{orth:?}"));
    let v_star_v = v.adjoint().mul(v);
    c.push("v*v = 1", v_star_v == CrossedElement::one(1), || format!("v*v has {} terms", v_star_v.terms().count()));
    let e = v.mul(&v.adjoint()).expectation();
    let sum = moved.iter().fold(StepFunction::zero(1), |acc, m| acc.add(m));
    c.push("E(vv*) = Σ α_{g_j}(f_j)", e == sum, || "expectation differs".into());
    let v_union = Clopen::union_all(1, v_sets.iter());
    c.push("supp E(vv*) ⊆ V", e.support().is_subset(&v_union), || "support leaves V".into());
    let outside = Clopen::cylinder(&missing);
    let off = e.value_at(0, &missing) == Some(Rational::from_integer(0)) && outside.is_disjoint(&v_union);
    c.push("E(vv*) vanishes on the missing cylinder", off, || format!("E(vv*) is not 0 on [{missing}]"));
    c.push("vv* ≠ 1", e != StepFunction::one(1), || "E(vv*) = 1".into());
    c.0
}

fn construct(params: &IsometryParams) -> Result<IsometryCertificate> {
    if params.h.is_identity() {
        return Err(Error::Invalid("h must not be the identity".into()));
    }
    if params.n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let h = params.h.clone();
    let d = vec![Word::identity(), h.clone()];
    let strengthened = f2_strengthened_towers(&d)?;
    let towers = strengthened.family.clone();
    let mut c = Checks(Vec::new());

    let b: Vec<PrefixSet> = towers.items.iter().map(|t| t.set.normalize(2)).collect::<Result<_>>()?;
    let hs: Vec<Word> = towers.items.iter().map(|t| t.g.as_word().cloned().expect("F2 towers")).collect();
    let report = towers.verify(VerifyMode::Exact)?;
    c.push("dB_j pairwise disjoint", report.checks.disjoint.pass, || format!("{:?}", report.checks.disjoint.counterexample));
    let comp_b: Vec<PrefixSet> = b.iter().zip(&hs).map(|(b, h)| b.translate(h).complement()).collect();
    let pair = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).find(|&(i, j)| !comp_b[i].is_disjoint(&comp_b[j]));
    c.push("F2 \\ h_jB_j pairwise disjoint", pair.is_none(), || format!("{pair:?} meet"));
    let distinct = hs[0] != hs[1] && hs[0] != hs[2] && hs[1] != hs[2];
    c.push("h_1, h_2, h_3 pairwise distinct", distinct, || format!("{hs:?}"));

    // one coset, so A_j = B_j
    let transversal = vec![Element::word(Word::identity())];
    let a_sets: Vec<Subset> = towers.items.iter().map(|t| t.set.clone()).collect();
    let a: Vec<PrefixSet> = a_sets.iter().map(|s| s.normalize(2)).collect::<Result<_>>()?;
    let mut translates = Vec::new();
    for dd in &d {
        translates.extend(a.iter().map(|a| a.translate(dd)));
    }
    let overlap = (0..translates.len()).flat_map(|i| (i + 1..translates.len()).map(move |j| (i, j))).find(|&(i, j)| !translates[i].is_disjoint(&translates[j]));
    c.push("dA_j pairwise disjoint", overlap.is_none(), || format!("{overlap:?} meet"));
    let comp_a: Vec<PrefixSet> = a.iter().zip(&hs).map(|(a, h)| a.translate(h).complement()).collect();
    let pair = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).find(|&(i, j)| !comp_a[i].is_disjoint(&comp_a[j]));
    c.push("F2 \\ h_jA_j pairwise disjoint", pair.is_none(), || format!("{pair:?} meet"));

    let eps = Rational::new(1, 24);
    let mu = GeodesicMap::new(params.n);
    let moving: Vec<Word> = std::iter::once(h.inverse()).chain(hs.iter().cloned()).collect();
    let worst = moving.iter().map(|g| mu.defect_bound::<Rational>(g)).max().expect("nonempty");
    c.push("defect bound 2|g|/N below ε", worst < eps, || format!("2|g|/N = {worst}"));

    let half = Rational::new(1, 2);
    let v_sets: Vec<Clopen> = a.iter().map(|a| mu.threshold(a, &(half + eps), Relation::Greater)).collect();
    let w_sets: Vec<Clopen> = comp_a.iter().map(|s| mu.threshold(s, &(half - eps * 2), Relation::Less)).collect();
    let h_el = Element::word(h.clone());

    let d_v: Vec<Clopen> = d.iter().flat_map(|dd| v_sets.iter().map(move |v| v.act(&Element::word(dd.clone())))).collect();
    let dv_pair = pairwise_disjoint(&d_v);
    c.push("the sets dV_j are pairwise disjoint", dv_pair.is_none(), || format!("{dv_pair:?} meet"));
    let v_pair = pairwise_disjoint(&v_sets);
    c.push("V_1, V_2, V_3 pairwise disjoint", v_pair.is_none(), || format!("V{:?} meet", v_pair));
    let v_union = Clopen::union_all(1, v_sets.iter());
    c.push("hV ∩ V = ∅", v_union.act(&h_el).is_disjoint(&v_union), || "hV meets V".into());
    let outside = v_union.complement();
    let missing = outside.smallest_cylinder().map(|(_, w)| w);
    c.push("V ≠ X", missing.is_some(), || "V is everything".into());
    let w_union = Clopen::union_all(1, w_sets.iter());
    c.push("W_1 ∪ W_2 ∪ W_3 = X", w_union.is_full(), || format!("{} uncovered", w_union.complement()));
    let bad = (0..3).find(|&j| !w_sets[j].act(&Element::word(hs[j].inverse())).is_subset(&v_sets[j]));
    c.push("h_j⁻¹W_j ⊆ V_j", bad.is_none(), || format!("j = {}", bad.map_or(0, |j| j + 1)));

    let mut covered = Clopen::empty(1);
    let mut f = Vec::new();
    for w in &w_sets {
        f.push(StepFunction::indicator(&w.difference(&covered)));
        covered = covered.union(w);
    }
    let total = f.iter().fold(StepFunction::zero(1), |acc, x| acc.add(x));
    let subordinate = f.iter().zip(&w_sets).all(|(f, w)| f.support().is_subset(w));
    c.push("partition of unity subordinate to W", total == StepFunction::one(1) && subordinate, || "f_j do not sum to 1 inside W_j".into());

    let g: Vec<Element> = hs.iter().map(|h| Element::word(h.inverse())).collect();
    let v = f.iter().zip(&g).fold(CrossedElement::zero(1), |acc, (f, g)| acc.add(&CrossedElement::term(f.act(g), g.clone())));
    let missing = missing.unwrap_or_else(Word::identity);
    c.0.extend(check_algebra(&v, &g, &f, &v_sets, missing.clone()));
    let expectation_vv_star = v.mul(&v.adjoint()).expectation();

    Ok(IsometryCertificate {
        h,
        d,
        towers,
        transversal,
        a: a_sets,
        eps,
        n: params.n,
        v_sets,
        w_sets,
        f,
        g,
        v,
        expectation_vv_star,
        missing_cylinder: missing,
        checks: c.0,
    })
}

/// Runs the construction; any failed check is an error naming it.
pub fn build_isometry(params: &IsometryParams) -> Result<IsometryCertificate> {
    let cert = construct(params)?;
    if let Some(bad) = cert.checks.iter().find(|c| !c.pass) {
        return Err(Error::step(bad.name.clone(), bad.counterexample.clone().unwrap_or_default()));
    }
    Ok(cert)
}
