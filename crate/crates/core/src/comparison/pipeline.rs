//! `X ≺ U` for nonempty clopen `U`, for `F₂ × ℤ/k` acting on `∂F₂ × ℤ/k`
//! (`k = 1` is F₂ on its boundary), built from paradoxical towers in F₂, a
//! greedy coloring of ℤ/k and the geodesic averaging maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::petr::{petr_assign, CountingData};
use super::witness::{boost, compose, Verdict, Witness, WitnessEntry, WitnessReport};
use crate::boundary::{Clopen, GeodesicMap, Relation};
use crate::certificate::content_hash;
use crate::coloring::{greedy_color, CayleyGroup, ColoringRecord};
use crate::element::{Element, Group};
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::subset::Subset;
use crate::towers::{f2_towers, more_towers, TowerFamily, TowerItem, TowerReport, VerifyMode};
use crate::towers::f2::disjoint_translates;
use crate::word::{Letter, Word};
use crate::Rational;

/// The acting group `F₂ × ℤ/k` on `∂F₂ × ℤ/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonInstance {
    pub k: u32,
}

impl ComparisonInstance {
    pub const FREE: ComparisonInstance = ComparisonInstance { k: 1 };
    pub const FREE_TIMES_Z2: ComparisonInstance = ComparisonInstance { k: 2 };

    pub fn group(&self) -> Group {
        if self.k == 1 {
            Group::f2()
        } else {
            Group::f2_times_cyclic(self.k)
        }
    }

    fn element(&self, w: Word, c: u32) -> Element {
        if self.k == 1 {
            Element::word(w)
        } else {
            Element::pair(w, c % self.k, self.k)
        }
    }

    fn fibers(&self) -> usize {
        self.k as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBound {
    pub required: usize,
    pub minimum: usize,
    pub cell: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonCertificate {
    pub instance: ComparisonInstance,
    #[serde(rename = "U")]
    pub target: Clopen,
    #[serde(with = "crate::scalar::as_string")]
    pub eps: Rational,
    pub chosen_cylinder: (usize, Word),
    #[serde(rename = "F0")]
    pub f0: Vec<Element>,
    #[serde(rename = "E")]
    pub e: Vec<i64>,
    pub m: usize,
    pub n: usize,
    pub t: Vec<Word>,
    #[serde(rename = "D")]
    pub d: Vec<Word>,
    #[serde(rename = "F")]
    pub f: Vec<Element>,
    pub translate_count: CountBound,
    pub towers: TowerFamily,
    pub towers_report: TowerReport,
    pub coloring: ColoringRecord,
    /// The sets `C_{i,j}` and elements `g_{i,j}` with `D = F²`.
    pub products: TowerFamily,
    pub products_report: TowerReport,
    #[serde(with = "crate::scalar::as_string")]
    pub delta: Rational,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "V")]
    pub v: Vec<Clopen>,
    #[serde(rename = "W")]
    pub w: Vec<Clopen>,
    pub threshold_witness: Witness,
    pub matching_witness: Witness,
    pub matching_depth: usize,
    pub composed: Witness,
    pub boosted: Witness,
    pub hashes: BTreeMap<String, String>,
}

fn distinct<T: PartialEq>(xs: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// `v` with `v·y` the length-lex first extension of `u` ending in `y`, for
/// each letter `y`: then `v·[y] ⊆ [u]`, so these `v` move every point into `[u]`.
pub fn translators_into(u: &Word) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for y in Letter::all(2) {
        let mut depth = u.len().max(1);
        let p = loop {
            let mut found = None;
            crate::boundary::tree::extend_to(u, depth, &mut |w| {
                if found.is_none() && w.last() == Some(y) {
                    found = Some(w);
                }
            });
            if let Some(p) = found {
                break p;
            }
            depth += 1;
        };
        let v = p.prefix(p.len() - 1);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// `E^times` in ℤ/k.
fn sumset(e: &[i64], times: usize, k: u32) -> Vec<i64> {
    (1..times).fold(e.to_vec(), |acc, _| distinct(acc.iter().flat_map(|a| e.iter().map(move |b| (a + b) % k as i64))))
}

fn symmetric_closure(ws: &[Word]) -> Vec<Word> {
    distinct(ws.iter().cloned().chain(ws.iter().map(Word::inverse)))
}

fn products(xs: &[Element], ys: &[Element]) -> Vec<Element> {
    distinct(xs.iter().flat_map(|x| ys.iter().map(move |y| x.mul(y))))
}

fn cell_name(k: usize, fiber: usize, w: &Word) -> String {
    if k > 1 {
        format!("[{w}]x{fiber}")
    } else {
        format!("[{w}]")
    }
}

/// The least value of `|{f ∈ F : f·x ∈ U^{-ε}}|` over `x`.
pub fn translate_count(f: &[Element], shrunk: &Clopen, required: usize) -> CountBound {
    let pre: Vec<Clopen> = f.iter().map(|g| shrunk.act(&g.inverse())).collect();
    let refs: Vec<&Clopen> = pre.iter().collect();
    let k = shrunk.fiber_count();
    let mut worst = (usize::MAX, String::new());
    for (fiber, w, vals) in Clopen::common_cells(&refs) {
        let c = vals.iter().filter(|&&b| b).count();
        if c < worst.0 {
            worst = (c, cell_name(k, fiber, &w));
        }
    }
    CountBound { required, minimum: worst.0, cell: worst.1, pass: worst.0 >= required }
}

struct Thresholds {
    v: Vec<Clopen>,
    w: Vec<Clopen>,
}

/// `V_{i,j} = {μ(x)(C_{i,j}) > 1/(nm+1) + δ}` and
/// `W_{i,j} = {μ(x)(g_{i,j}·C_{i,j}) > 1/(nm+1) + 2δ}`, exactly.
fn thresholds(products: &TowerFamily, k: u32, big_n: usize, nm: usize, delta: Rational) -> Result<Thresholds> {
    let mu = GeodesicMap::new(big_n);
    let base = Rational::new(1, nm as i64 + 1);
    let mut v = Vec::new();
    let mut w = Vec::new();
    for item in &products.items {
        let (a, b_size) = free_factor(&item.set, k)?;
        let h = item.g.free_part().expect("free factor");
        let shifted = a.translate(h);
        if k == 1 {
            v.push(mu.threshold(&a, &(base + delta), Relation::Greater));
            w.push(mu.threshold(&shifted, &(base + delta * 2), Relation::Greater));
        } else {
            v.push(mu.threshold_product(&a, b_size, k as usize, &(base + delta), Relation::Greater));
            w.push(mu.threshold_product(&shifted, b_size, k as usize, &(base + delta * 2), Relation::Greater));
        }
    }
    Ok(Thresholds { v, w })
}

/// `A` and `|B|` for `C = A × B` (or `C = A` when `k = 1`).
fn free_factor(c: &Subset, k: u32) -> Result<(PrefixSet, usize)> {
    if k == 1 {
        return Ok((c.normalize(2)?, 1));
    }
    match c {
        Subset::Product { factors } if factors.len() == 2 => {
            let size = (0..k).filter(|&r| factors[1].contains(&Element(vec![crate::element::Factor::Mod { value: r, order: k }]))).count();
            Ok((factors[0].normalize(2)?, size))
        }
        _ => Err(Error::Invalid("expected a product set".into())),
    }
}

fn max_len(elements: &[Element]) -> usize {
    elements.iter().filter_map(Element::free_part).map(Word::len).max().unwrap_or(0)
}

/// `δ = 1/(2nm(nm+1) + 1)`, strictly below `1/(2nm(nm+1))`.
pub fn delta_for(n: usize, m: usize) -> Rational {
    let nm = (n * m) as i64;
    Rational::new(1, 2 * nm * (nm + 1) + 1)
}

pub fn build_comparison(inst: ComparisonInstance, target: &Clopen, extra_depth: usize) -> Result<ComparisonCertificate> {
    let k = inst.fibers();
    if inst.k == 0 || target.fiber_count() != k {
        return Err(Error::Invalid(format!("target does not live on {}", Clopen::full(k.max(1)).space())));
    }
    let (fu, u) = target.smallest_cylinder().ok_or_else(|| Error::Invalid("target set is empty".into()))?;
    let eps = Rational::new(1, 1i64 << (target.depth() + 1).min(62));
    let shrunk = target.shrink(eps);
    if shrunk != *target {
        return Err(Error::step("shrink", "U^{-ε} differs from U"));
    }

    let e: Vec<i64> = (0..inst.k as i64).collect();
    let m = sumset(&e, 4, inst.k).len();
    let d0 = translators_into(&u);
    let f0: Vec<Element> = d0.iter().flat_map(|v| e.iter().map(move |&c| (v, c))).map(|(v, c)| inst.element(v.clone(), (fu as i64 - c).rem_euclid(inst.k as i64) as u32)).collect();
    let covered = Clopen::union_all(k, f0.iter().map(|f| shrunk.act(&f.inverse())).collect::<Vec<_>>().iter());
    if !covered.is_full() {
        return Err(Error::step("F0", "F0⁻¹·U^{-ε} is not the whole space"));
    }

    let t = disjoint_translates(&d0, m)?;
    let d = symmetric_closure(&t.iter().flat_map(|t| d0.iter().map(move |x| x.mul(t))).collect::<Vec<_>>());
    let f: Vec<Element> = d.iter().flat_map(|w| e.iter().map(move |&c| inst.element(w.clone(), c as u32))).collect();

    let count = translate_count(&f, &shrunk, m);
    if !count.pass {
        return Err(Error::step("translate count", format!("only {} translates reach U at {}", count.minimum, count.cell)));
    }

    let d2 = distinct(d.iter().flat_map(|x| d.iter().map(move |y| x.mul(y))));
    let towers = more_towers(f2_towers, m, &d2)?;
    let towers_report = towers.verify(VerifyMode::Exact)?;
    let n = towers.n() / m;

    let e2 = sumset(&e, 2, inst.k);
    let group = CayleyGroup::Cyclic(inst.k);
    let coloring = greedy_color(group, &e2)?;
    if coloring.bound() != m {
        return Err(Error::step("coloring", format!("|E⁴| = {m} but the coloring bound is {}", coloring.bound())));
    }

    let mut items = Vec::with_capacity(n * m);
    for j in 0..m {
        for tower in towers.items.iter().filter(|t| t.copy == j) {
            let h = tower.g.as_word().cloned().expect("F2 towers");
            let set = if inst.k == 1 {
                tower.set.clone()
            } else {
                Subset::product(vec![tower.set.clone(), Subset::ColorClass { group, generators: e2.clone(), class: j }])
            };
            items.push(TowerItem { set, g: inst.element(h, 0), copy: 0 });
        }
    }
    let f2 = products(&f, &f);
    let product_family = TowerFamily { group: inst.group(), d: f2.clone(), items, copies: 1, notes: vec![] };
    let products_report = product_family.assert_valid(VerifyMode::Exact, "product towers")?;

    let nm = n * m;
    let delta = delta_for(n, m);
    let moving: Vec<Element> = f2.iter().cloned().chain(product_family.items.iter().map(|t| t.g.clone())).collect();
    let longest = max_len(&moving);
    let big_n = (Rational::from_integer(2 * longest as i64) / delta).to_integer() as usize + 1;
    let th = thresholds(&product_family, inst.k, big_n, nm, delta)?;

    let threshold_witness = Witness {
        sources: vec![Clopen::full(k)],
        targets: th.v.clone(),
        copies: 1,
        entries: th
            .w
            .iter()
            .zip(&product_family.items)
            .enumerate()
            .map(|(c, (w, item))| WitnessEntry { source: 0, piece: w.clone(), g: item.g.inverse(), color: c })
            .collect(),
    };
    threshold_witness.assert_valid("threshold witness")?;

    let counting = CountingData { d: f.clone(), eps, sources: th.v.clone(), target: target.clone() };
    let assignment = petr_assign(&counting, n, extra_depth).map_err(|e| match e {
        Error::StepFailed { .. } => e,
        other => Error::step("matching witness", other.to_string()),
    })?;
    let matching_witness = assignment.witness;
    let composed = compose(&threshold_witness, &matching_witness)?;
    let boosted = boost(&composed, target)?;

    let mut cert = ComparisonCertificate {
        instance: inst,
        target: target.clone(),
        eps,
        chosen_cylinder: (fu, u),
        f0,
        e,
        m,
        n,
        t,
        d,
        f,
        translate_count: count,
        towers,
        towers_report,
        coloring: coloring.snapshot(0),
        products: product_family,
        products_report,
        delta,
        big_n,
        v: th.v,
        w: th.w,
        threshold_witness,
        matching_witness,
        matching_depth: assignment.depth,
        composed,
        boosted,
        hashes: BTreeMap::new(),
    };
    cert.hashes = cert.object_hashes()?;
    let failed: Vec<String> = cert.verify().into_iter().filter(|(_, v)| !v.pass).map(|(name, v)| format!("{name}: {:?}", v.counterexample)).collect();
    if !failed.is_empty() {
        return Err(Error::step("certificate", failed.join("; ")));
    }
    Ok(cert)
}

impl ComparisonCertificate {
    fn object_hashes(&self) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        out.insert("towers".into(), content_hash(&self.towers)?);
        out.insert("coloring".into(), content_hash(&self.coloring)?);
        out.insert("products".into(), content_hash(&self.products)?);
        out.insert("V".into(), content_hash(&self.v)?);
        out.insert("W".into(), content_hash(&self.w)?);
        out.insert("threshold_witness".into(), content_hash(&self.threshold_witness)?);
        out.insert("matching_witness".into(), content_hash(&self.matching_witness)?);
        out.insert("composed".into(), content_hash(&self.composed)?);
        out.insert("boosted".into(), content_hash(&self.boosted)?);
        Ok(out)
    }

    /// Re-checks every step from the embedded objects alone.
    pub fn verify(&self) -> Vec<(String, Verdict)> {
        let mut out = Vec::new();
        let mut push = |name: &str, pass: bool, detail: String| {
            out.push((name.to_string(), Verdict { pass, counterexample: (!pass).then_some(detail) }));
        };
        let k = self.instance.fibers();
        let nm = self.n * self.m;

        match self.object_hashes() {
            Ok(h) => {
                let bad: Vec<&String> = h.iter().filter(|(key, v)| self.hashes.get(*key) != Some(v)).map(|(key, _)| key).collect();
                push("object hashes", bad.is_empty() && h.len() == self.hashes.len(), format!("mismatched {bad:?}"));
            }
            Err(e) => push("object hashes", false, e.to_string()),
        }

        let shrunk = self.target.shrink(self.eps);
        push("U^{-ε} = U", shrunk == self.target && !self.target.is_empty(), "shrinking changes U".into());
        let covered = Clopen::union_all(k, self.f0.iter().map(|f| shrunk.act(&f.inverse())).collect::<Vec<_>>().iter());
        push("F0 moves every point into U", covered.is_full(), "F0⁻¹·U^{-ε} is not everything".into());
        let f0_in_f = self.f0.iter().all(|x| self.f.contains(x)) && self.f.iter().all(|x| self.f.contains(&x.inverse()));
        push("F symmetric and contains F0", f0_in_f, "F is not a symmetric superset of F0".into());

        let c1 = translate_count(&self.f, &shrunk, self.m);
        push("F·x meets U at least m times", c1.pass && c1 == self.translate_count, format!("minimum {} at {}", c1.minimum, c1.cell));

        let f2 = products(&self.f, &self.f);
        let fam_ok = self.products.d == f2 && self.products.items.len() == nm;
        push("C family uses F²", fam_ok, "translating set is not F²".into());
        match self.products.verify(VerifyMode::Exact) {
            Ok(r) => {
                push("product towers disjoint", r.checks.disjoint.pass, format!("{:?}", r.checks.disjoint.counterexample));
                push("product towers cover", r.checks.cover.pass, format!("{:?}", r.checks.cover.counterexample));
            }
            Err(e) => push("product towers", false, e.to_string()),
        }
        push("coloring record", self.coloring.verify().is_ok() && self.coloring.m == self.m, "coloring does not verify".into());

        let nm_i = nm as i64;
        let bound = Rational::new(1, 2 * nm_i * (nm_i + 1));
        push("δ below 1/(2nm(nm+1))", self.delta > Rational::from_integer(0) && self.delta < bound, format!("δ = {}", self.delta));
        let moving: Vec<Element> = f2.iter().cloned().chain(self.products.items.iter().map(|t| t.g.clone())).collect();
        let longest = max_len(&moving) as i64;
        let defect = Rational::new(2 * longest, self.big_n.max(1) as i64);
        push("defect bound 2|g|/N below δ", defect < self.delta, format!("2·{longest}/{} ≥ δ", self.big_n));

        match thresholds(&self.products, self.instance.k, self.big_n, nm, self.delta) {
            Ok(th) => {
                push("V recomputed", th.v == self.v, "V differs from its threshold definition".into());
                push("W recomputed", th.w == self.w, "W differs from its threshold definition".into());
            }
            Err(e) => push("thresholds", false, e.to_string()),
        }
        let union_w = Clopen::union_all(k, self.w.iter());
        push("W covers X", union_w.is_full(), format!("{} uncovered", union_w.complement()));
        let inclusions = self.w.iter().zip(&self.v).zip(&self.products.items).all(|((w, v), item)| w.act(&item.g.inverse()).is_subset(v));
        push("g⁻¹·W ⊆ V", inclusions, "some g⁻¹·W leaves its V".into());

        let mut witness = |name: &str, w: &Witness, sources: &[Clopen], targets: &[Clopen], copies: usize| {
            let report: WitnessReport = w.verify();
            let shape = w.sources == sources && w.targets == targets && w.copies == copies;
            let detail = if shape { format!("{report:?}") } else { "wrong sources, targets or copies".into() };
            push(name, report.pass() && shape, detail);
        };
        let x = [Clopen::full(k)];
        let u = [self.target.clone()];
        witness("threshold witness X ≺ (V_ij)", &self.threshold_witness, &x, &self.v, 1);
        witness("matching witness (V_ij) ≺_n U", &self.matching_witness, &self.v, &u, self.n + 1);
        witness("composed witness", &self.composed, &x, &u, self.n + 1);
        witness("boosted witness", &self.boosted, &x, &u, 1);

        let counting = CountingData { d: self.f.clone(), eps: self.eps, sources: self.v.clone(), target: self.target.clone() };
        match counting.check(self.n) {
            Ok(()) => push("matching counting hypothesis", true, String::new()),
            Err(e) => push("matching counting hypothesis", false, e.to_string()),
        }
        out
    }

    pub fn pass(&self) -> bool {
        self.verify().iter().all(|(_, v)| v.pass)
    }
}
