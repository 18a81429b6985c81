//! Acceptance run: one line per criterion with its verdict and wall time.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::*;
use paratower::certificate::TowersPayload;
use paratower::coloring::CayleyGroup;
use paratower::comparison::DEFAULT_EXTRA_DEPTH;
use paratower::towers::{
    boundary_filling, extension_towers, f2_strengthened_towers, f2_towers, finite_normal_ext_towers, more_towers,
    towers_from_filling, union_towers,
};
use paratower::{
    build_comparison, build_isometry, greedy_color, verify_envelope, BoundaryPoint, Clopen, ComparisonCertificate,
    ComparisonInstance, Element, Envelope, GeodesicMap, IsometryParams, Kind, PrefixSet, Rational, TowerFamily,
    Transversal, VerifyMode, Witness, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn b1() -> Vec<Word> {
    ["", "a", "A", "b", "B"].iter().map(|s| w(s)).collect()
}

fn towers_env(family: &TowerFamily, mode: VerifyMode, complements: Option<Vec<Word>>) -> Result<String, String> {
    let report = family.verify(mode).map_err(|e| e.to_string())?;
    ensure(report.pass(), || format!("library verifier rejects the family in {mode:?}"))?;
    let payload = TowersPayload { family: family.clone(), report, complements };
    Envelope::new(Kind::Towers, 0, &payload, None).and_then(|e| e.to_json()).map_err(|e| e.to_string())
}

fn env_json<T: serde::Serialize>(kind: Kind, payload: &T) -> Result<String, String> {
    Envelope::new(kind, 0, payload, None).and_then(|e| e.to_json()).map_err(|e| e.to_string())
}

fn check_brute(family: &TowerFamily, r: usize, what: &str) -> Outcome {
    let b = brute_towers(family, r);
    ensure(b.disjoint && b.cover, || format!("{what}: ball oracle at radius {r} gives {b:?}"))
}

/// Certificates emitted by each run, compared byte for byte.
#[derive(Default)]
struct Corpus(Vec<(String, String)>);

impl Corpus {
    fn add(&mut self, name: &str, json: String) {
        self.0.push((name.to_string(), json));
    }
}

fn criterion_1(out: &mut Corpus) -> Outcome {
    let st = f2_strengthened_towers(&b1()).map_err(|e| e.to_string())?;
    let comps: Vec<String> = st.complements.iter().map(|c| c.to_string()).collect();
    ensure(comps == ["A", "a", "B"], || format!("complements {comps:?}"))?;
    let hs: Vec<String> = st.h.iter().map(|h| h.to_string()).collect();
    ensure(hs == ["aaba", "aabA", "aabb"], || format!("h words {hs:?}"))?;
    let cones: Vec<PrefixSet> = st.complements.iter().map(|c| PrefixSet::cone(2, c)).collect();
    for (j, item) in st.family.items.iter().enumerate() {
        let image = item.set.normalize(2).map_err(|e| e.to_string())?.translate(item.g.as_word().unwrap());
        ensure(image.complement() == cones[j], || format!("complement of tower {j} is not W({})", comps[j]))?;
    }
    ensure((0..3).all(|i| (i + 1..3).all(|j| cones[i].is_disjoint(&cones[j]))), || "complements meet".into())?;
    // Strengthened disjointness: d·A_i and d'·A_j meet only when equal.
    let ds = b1();
    for (i, a) in st.family.items.iter().enumerate() {
        for (j, b) in st.family.items.iter().enumerate() {
            for d in &ds {
                for e in &ds {
                    if (i, d) == (j, e) {
                        continue;
                    }
                    let x = a.set.normalize(2).unwrap().translate(d);
                    let y = b.set.normalize(2).unwrap().translate(e);
                    ensure(x.is_disjoint(&y), || format!("{d}·A{i} meets {e}·A{j}"))?;
                }
            }
        }
    }
    out.add("strengthened towers", towers_env(&st.family, VerifyMode::Exact, Some(st.complements.clone()))?);

    let plain = f2_towers(&b1()).map_err(|e| e.to_string())?;
    out.add("f2 towers", towers_env(&plain, VerifyMode::Exact, None)?);

    // Full ball(12) sweep: towers conditions and the complement list.
    let words = ball(2, 12);
    ensure(words.len() == 1_062_881, || format!("ball(12) has {} words", words.len()))?;
    let hs: Vec<String> = st.h.iter().map(|h| h.to_string()).collect();
    let dstr: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
    for x in &words {
        let mut hits = 0;
        for d in &dstr {
            let y = mul(&inv(d), x);
            hits += hs.iter().filter(|h| y.starts_with(h.as_str())).count();
        }
        ensure(hits <= 1, || format!("{x} lies in {hits} translates"))?;
        for (h, c) in hs.iter().zip(&comps) {
            let inside = mul(h, x).starts_with(h.as_str());
            ensure(inside != x.starts_with(c.as_str()), || format!("{x}: complement of W({c}) is wrong"))?;
        }
    }
    if plain != st.family {
        check_brute(&plain, 8, "f2 towers")?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let mut h = random_word(&mut rng, 2, 8);
        while h.is_empty() {
            h = random_word(&mut rng, 2, 8);
        }
        let hw = w(&h);
        let x = h.chars().last().unwrap();
        let moved = PrefixSet::cone(2, &hw).translate(&hw.inverse());
        let other = PrefixSet::cone(2, &w(&inv_char(x).to_string()));
        ensure(moved.union(&other).is_all(), || format!("h = {h}: union is not F₂"))?;
        ensure(moved.is_disjoint(&other), || format!("h = {h}: sets meet"))?;
    }
    Ok(())
}

fn criterion_3(out: &mut Corpus) -> Outcome {
    let family = more_towers(f2_towers, 3, &b1()).map_err(|e| e.to_string())?;
    ensure(family.copies == 3, || format!("{} copies", family.copies))?;
    ensure(family.items.len() == 6, || format!("{} towers", family.items.len()))?;
    for c in 0..3 {
        let cover = family
            .items
            .iter()
            .filter(|t| t.copy == c)
            .map(|t| t.set.normalize(2).map(|a| a.translate(t.g.as_word().unwrap())))
            .try_fold(PrefixSet::empty(2), |acc, s| s.map(|s| acc.union(&s)))
            .map_err(|e| e.to_string())?;
        ensure(cover.is_all(), || format!("copy {c} does not cover F₂"))?;
    }
    check_brute(&family, 8, "more towers")?;
    out.add("more towers", towers_env(&family, VerifyMode::Ball { radius: 8 }, None)?);
    Ok(())
}

fn criterion_4(out: &mut Corpus) -> Outcome {
    let f: Vec<Element> = b1().into_iter().flat_map(|d| (0..2).map(move |j| Element::pair(d.clone(), j, 2))).collect();
    let fin = finite_normal_ext_towers(f2_towers, &f, 2).map_err(|e| e.to_string())?;
    ensure(fin.items.len() == 4, || format!("{} towers over F₂×ℤ/2", fin.items.len()))?;
    check_brute(&fin, 6, "finite extension")?;
    out.add("finite extension", towers_env(&fin, VerifyMode::Ball { radius: 6 }, None)?);

    let pairs: Vec<Element> = b1()
        .iter()
        .flat_map(|d| b1().into_iter().map(move |e| Element(vec![paratower::Factor::Word(d.clone()), paratower::Factor::Word(e)])))
        .collect();
    let ext = extension_towers(f2_towers, f2_towers, &pairs, 4).map_err(|e| e.to_string())?;
    ensure(ext.items.len() == 4, || format!("{} towers over F₂×F₂", ext.items.len()))?;
    check_brute(&ext, 4, "F₂×F₂ extension")?;
    out.add("F2xF2 extension", towers_env(&ext, VerifyMode::Ball { radius: 4 }, None)?);

    let f3 = union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 5 }, 5).map_err(|e| e.to_string())?;
    let reps = coset_reps(5);
    for x in ball(3, 5) {
        let splits = reps.iter().filter(|r| !mul(&x, &inv(r)).contains(['c', 'C'])).count();
        ensure(splits == 1, || format!("{x} factors {splits} ways"))?;
    }
    check_brute(&f3, 5, "F₃ union")?;
    out.add("F3 union", towers_env(&f3, VerifyMode::Ball { radius: 5 }, None)?);

    let fill = towers_from_filling(&b1(), 2, BoundaryPoint::AbPowers, boundary_filling, 8).map_err(|e| e.to_string())?;
    check_brute(&fill.family, 8, "filling towers")?;
    out.add("filling towers", towers_env(&fill.family, VerifyMode::Ball { radius: 8 }, None)?);
    Ok(())
}

fn criterion_5(out: &mut Corpus) -> Outcome {
    let c = greedy_color(CayleyGroup::Integers, &[-1, 0, 1]).map_err(|e| e.to_string())?;
    let colors: HashSet<usize> = (-10_000..=10_000).map(|k| c.color(k)).collect();
    ensure(colors.len() <= 5, || format!("{} colors on the window", colors.len()))?;
    for k in -10_000i64..=10_000 {
        for s in [-2, -1, 1, 2] {
            ensure(c.color(k) != c.color(k + s), || format!("{k} and {} share a color", k + s))?;
        }
    }
    out.add("integer coloring", env_json(Kind::Coloring, &c.snapshot(10_000))?);

    let z2 = greedy_color(CayleyGroup::Cyclic(2), &[0, 1]).map_err(|e| e.to_string())?;
    ensure(z2.colors_used() == 2, || format!("{} colors on ℤ/2", z2.colors_used()))?;
    let classes: Vec<Vec<i64>> = (0..2).map(|j| z2.class(j, 1).unwrap()).collect();
    ensure(classes == [vec![0], vec![1]], || format!("classes {classes:?}"))?;
    ensure(cyclic_first_fit(2, &[0, 1]) == [0, 1], || "oracle disagrees on ℤ/2".into())?;
    out.add("cyclic coloring", env_json(Kind::Coloring, &z2.snapshot(1))?);
    Ok(())
}

/// `|μ(g·x) Δ g·μ(x)|` for `μ_N` uniform on the first N prefixes.
fn defect_oracle(g: &str, x: &str, n: usize) -> Rational {
    let gx = mul(g, x);
    let moved: HashSet<String> = (0..n).map(|k| gx[..k].to_string()).collect();
    let pushed: HashSet<String> = (0..n).map(|k| mul(g, &x[..k])).collect();
    Rational::new(moved.symmetric_difference(&pushed).count() as i64, n as i64)
}

fn criterion_6() -> Outcome {
    let n = 64;
    let mu = GeodesicMap::new(n);
    let b3 = ball(2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let g = &b3[rng.gen_range(0..b3.len())];
        let x = random_point(&mut rng, n + 16);
        let exact: Rational = mu.defect(&w(g), &w(&x)).map_err(|e| e.to_string())?;
        ensure(exact == defect_oracle(g, &x, n), || format!("g = {g}: library and oracle differ"))?;
        let bound = Rational::new(2 * g.len() as i64, n as i64);
        ensure(exact <= bound, || format!("g = {g}: defect {exact} above {bound}"))?;
    }
    let mut p = random_point(&mut rng, n + 8);
    while p.starts_with('A') {
        p = random_point(&mut rng, n + 8);
    }
    let x = format!("a{p}");
    let tight: Rational = mu.defect(&w("a"), &w(&x)).map_err(|e| e.to_string())?;
    ensure(tight == Rational::new(2, 64), || format!("defect of a is {tight}"))?;
    Ok(())
}

/// Samples points of the sources and targets and checks the witness
/// conditions pointwise.
fn check_comparison(cert: &ComparisonCertificate, m: usize, samples: usize) -> Outcome {
    for (name, v) in cert.verify() {
        ensure(v.pass, || format!("{name}: {}", v.counterexample.clone().unwrap_or_default()))?;
    }
    ensure(cert.translate_count.pass && cert.translate_count.minimum >= m, || "translate count below m".into())?;
    ensure(cert.m == m, || format!("m = {}", cert.m))?;
    let nm = (cert.n * cert.m) as i64;
    ensure(cert.delta < Rational::new(1, 2 * nm * (nm + 1)), || format!("delta {} too large", cert.delta))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (label, wit) in [
        ("threshold", &cert.threshold_witness),
        ("matching", &cert.matching_witness),
        ("composed", &cert.composed),
        ("boosted", &cert.boosted),
    ] {
        ensure(wit.verify().pass(), || format!("{label} witness fails verification"))?;
        sample_witness(wit, &mut rng, samples).map_err(|e| format!("{label} witness: {e}"))?;
    }
    ensure(cert.boosted.colors() == 1, || "boosted witness has more than one color".into())?;
    ensure(cert.boosted.targets[0] == cert.target, || "boosted witness misses the target".into())?;
    ensure(cert.boosted.sources.len() == 1 && cert.boosted.sources[0].is_full(), || "boosted source is not the whole space".into())?;
    Ok(())
}

fn criterion_7(out: &mut Corpus) -> Outcome {
    let t = Instant::now();
    let cert = build_comparison(ComparisonInstance::FREE, &Clopen::cylinder(&w("ab")), DEFAULT_EXTRA_DEPTH).map_err(|e| e.to_string())?;
    ensure(cert.n == 2, || format!("n = {}", cert.n))?;
    check_comparison(&cert, 1, 300)?;
    let first = t.elapsed();
    ensure(first < Duration::from_secs(60), || format!("free instance took {first:?}"))?;
    out.add("comparison free", env_json(Kind::Comparison, &cert)?);
    out.add("witness free", env_json(Kind::Witness, &cert.boosted)?);

    let t = Instant::now();
    let target = Clopen::cylinder_in(2, 0, &w("a"));
    let cert = build_comparison(ComparisonInstance::FREE_TIMES_Z2, &target, DEFAULT_EXTRA_DEPTH).map_err(|e| e.to_string())?;
    ensure(cert.e.len() == 2, || format!("E = {:?}", cert.e))?;
    check_comparison(&cert, 2, 100)?;
    let second = t.elapsed();
    ensure(second < Duration::from_secs(120), || format!("product instance took {second:?}"))?;
    out.add("comparison product", env_json(Kind::Comparison, &cert)?);
    Ok(())
}

fn criterion_8(out: &mut Corpus) -> Outcome {
    use paratower::CrossedElement;
    let cert = build_isometry(&IsometryParams::default()).map_err(|e| e.to_string())?;
    for c in cert.verify() {
        ensure(c.pass, || format!("{}: {}", c.name, c.counterexample.clone().unwrap_or_default()))?;
    }
    let v = &cert.v;
    let one = CrossedElement::<Rational>::one(1);
    ensure(v.adjoint().mul(v) == one, || "v*v is not 1".into())?;
    let vvs = v.mul(&v.adjoint());
    ensure(vvs != one, || "vv* is 1".into())?;
    ensure(vvs.expectation() == cert.expectation_vv_star, || "recorded E(vv*) differs".into())?;
    // Orthogonality: distinct summands have zero products.
    let terms: Vec<CrossedElement<Rational>> =
        cert.f.iter().zip(&cert.g).map(|(f, g)| CrossedElement::term(f.act(g), g.clone())).collect();
    for (i, x) in terms.iter().enumerate() {
        for (j, y) in terms.iter().enumerate() {
            if i != j {
                ensure(x.adjoint().mul(y).is_zero(), || format!("summands {i} and {j} are not orthogonal"))?;
            }
        }
    }
    let vs: Vec<String> = cert.v_sets.iter().map(|s| s.cylinders()[0].1.to_string()).collect();
    ensure(vs == ["aaba", "aabA", "aabb"], || format!("V sets {vs:?}"))?;
    let v_all = Clopen::union_all(1, cert.v_sets.iter());
    let h = Element::word(cert.h.clone());
    ensure(v_all.act(&h).is_disjoint(&v_all), || "hV meets V".into())?;
    let missing = Clopen::cylinder(&cert.missing_cylinder);
    ensure(missing.is_disjoint(&cert.expectation_vv_star.support()), || "missing cylinder meets the support".into())?;
    ensure(cert.expectation_vv_star.support().is_subset(&v_all), || "support is not inside V".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let p = red(&format!("{}{}", cert.missing_cylinder, random_point(&mut rng, 40)));
        let val = cert.expectation_vv_star.value_at(0, &w(&p[..30])).unwrap_or(Rational::new(1, 1));
        ensure(val == Rational::new(0, 1), || format!("E(vv*) is {val} at {}", &p[..10]))?;
        let q = random_point(&mut rng, 40);
        if in_clopen(&v_all, 0, &q) {
            ensure(!in_clopen(&v_all, 0, &mul(&cert.h.to_string(), &q)), || format!("h moves {} back into V", &q[..10]))?;
        }
    }
    out.add("isometry", env_json(Kind::Isometry, &cert)?);
    Ok(())
}

/// Seeded defects in otherwise valid towers; each must be rejected by the
/// library verifier at radius ≤ 8 and by the ball oracle.
fn tower_mutants() -> Result<Vec<(&'static str, TowerFamily, VerifyMode, usize)>, String> {
    use paratower::Subset;
    let e = |x: paratower::Result<TowerFamily>| x.map_err(|e| e.to_string());
    let base = e(f2_towers(&b1()))?;
    let mut out = Vec::new();

    let mut m = base.clone();
    m.items[1].g = Element::word(Word::identity());
    out.push(("wrong g_i", m, VerifyMode::Exact, 4));

    let mut m = base.clone();
    m.items[1].set = m.items[0].set.clone();
    out.push(("overlapping A_i", m, VerifyMode::Exact, 4));

    let mut m = base.clone();
    let h = match &m.items[1].set {
        Subset::Cone { h } => h.clone(),
        other => return Err(format!("unexpected tower set {other:?}")),
    };
    m.items[1].set = Subset::cone(h.pushed(paratower::Letter::new(1, false)));
    out.push(("shrunken A_i", m, VerifyMode::Exact, 5));

    // The second copy reuses the first copy's translate.
    let mut m = e(more_towers(f2_towers, 2, &b1()))?;
    let first: Vec<_> = m.items.iter().filter(|t| t.copy == 0).cloned().collect();
    for (t, src) in m.items.iter_mut().filter(|t| t.copy == 1).zip(first) {
        t.set = src.set;
        t.g = src.g;
    }
    out.push(("wrong s_j", m, VerifyMode::Exact, 10));

    let f: Vec<Element> = b1().into_iter().flat_map(|d| (0..2).map(move |j| Element::pair(d.clone(), j, 2))).collect();
    let mut m = e(finite_normal_ext_towers(f2_towers, &f, 2))?;
    let g0 = m.items[0].g.clone();
    let shift = m.items.iter().position(|t| t.g.finite_part() != g0.finite_part()).ok_or("no second k_j")?;
    let kj = m.items[shift].g.free_part().unwrap().clone();
    m.items[shift].g = Element::pair(kj, g0.finite_part(), 2);
    out.push(("duplicate k_j", m, VerifyMode::Exact, 4));

    let m = TowerFamily {
        items: e(union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 5 }, 5))?
            .items
            .into_iter()
            .map(|mut t| {
                if let Subset::CosetSlice { transversal, .. } = &mut t.set {
                    *transversal = Transversal::Shortest { max_len: 2 };
                }
                t
            })
            .collect(),
        ..e(union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 5 }, 5))?
    };
    out.push(("truncated transversal", m, VerifyMode::Ball { radius: 3 }, 3));
    Ok(out)
}

fn witness_mutants(base: &Witness) -> Vec<(&'static str, Witness)> {
    let mut out = Vec::new();
    let mut m = base.clone();
    m.entries.pop();
    out.push(("dropped piece", m));

    let mut m = base.clone();
    let dup = m.entries[0].clone();
    m.entries.push(dup);
    out.push(("duplicated piece", m));

    let mut m = base.clone();
    m.entries[0].g = Element::word(w("a")).mul(&m.entries[0].g);
    out.push(("moved outside the target", m));

    let mut m = base.clone();
    m.entries[0].color = m.colors();
    out.push(("color out of range", m));

    let mut m = base.clone();
    m.entries[0].g = Element::pair(Word::identity(), 0, 3);
    out.push(("element of another group", m));
    out
}

/// One random leaf or array mutation of a JSON value.
fn mutate(v: &mut Value, rng: &mut ChaCha8Rng) {
    fn paths(v: &Value, prefix: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
        match v {
            Value::Object(m) => {
                for (k, c) in m {
                    prefix.push(Value::String(k.clone()));
                    paths(c, prefix, out);
                    prefix.pop();
                }
            }
            Value::Array(a) if !a.is_empty() => {
                out.push(prefix.clone());
                for (i, c) in a.iter().enumerate() {
                    prefix.push(Value::from(i));
                    paths(c, prefix, out);
                    prefix.pop();
                }
            }
            _ => out.push(prefix.clone()),
        }
    }
    let mut all = Vec::new();
    paths(v, &mut Vec::new(), &mut all);
    let path = &all[rng.gen_range(0..all.len())];
    let mut node = v;
    for step in path {
        node = match step {
            Value::String(k) => node.get_mut(k.as_str()).unwrap(),
            i => node.get_mut(i.as_u64().unwrap() as usize).unwrap(),
        };
    }
    *node = match node.take() {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) => Value::from(n.as_u64().map_or(1, |x| x + 1)),
        Value::String(s) if s.is_empty() => Value::String("a".into()),
        Value::String(s) => {
            let mut c: Vec<char> = s.chars().collect();
            let i = rng.gen_range(0..c.len());
            c[i] = if c[i] == '0' { '1' } else { '0' };
            Value::String(c.into_iter().collect())
        }
        Value::Array(a) if a.is_empty() => Value::Array(vec![Value::Null]),
        Value::Array(mut a) => {
            a.remove(rng.gen_range(0..a.len()));
            Value::Array(a)
        }
        Value::Null => Value::Bool(true),
        Value::Object(_) => Value::Null,
    };
}

fn rejected(text: &str) -> bool {
    match Envelope::parse(text) {
        Err(_) => true,
        Ok(env) => verify_envelope(&env).map_or(true, |r| !r.pass()),
    }
}

fn criterion_9(corpus: &Corpus) -> Outcome {
    for (name, family, mode, r) in tower_mutants()? {
        let report = family.verify(mode).map_err(|e| e.to_string())?;
        ensure(!report.pass(), || format!("tower defect '{name}' passes the verifier"))?;
        if r <= 8 {
            let ball = family.verify(VerifyMode::Ball { radius: r }).map_err(|e| e.to_string())?;
            ensure(!ball.pass(), || format!("tower defect '{name}' passes at radius {r}"))?;
        }
        let b = brute_towers(&family, r);
        ensure(!(b.disjoint && b.cover), || format!("tower defect '{name}' is invisible to the oracle"))?;
    }
    let (aa, ab) = (w("aa"), w("ab"));
    let source = Clopen::from_cylinders(1, [(0, &aa), (0, &ab)]);
    let swap = Element::word(w("bA"));
    let entry = |piece: &Word| paratower::comparison::WitnessEntry { source: 0, piece: Clopen::cylinder(piece), g: swap.clone(), color: 0 };
    let base = Witness { sources: vec![source], targets: vec![Clopen::cylinder(&w("b"))], copies: 1, entries: vec![entry(&aa), entry(&ab)] };
    ensure(base.verify().pass(), || "unmutated witness fails".into())?;
    let mutants = witness_mutants(&base);
    ensure(mutants.len() >= 4, || "too few witness defects".into())?;
    for (name, m) in mutants {
        ensure(!m.verify().pass(), || format!("witness defect '{name}' passes the verifier"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let small: Vec<&(String, String)> = corpus.0.iter().filter(|(_, j)| j.len() < 2_000_000).collect();
    for case in 0..100 {
        let (name, text) = small[case % small.len()];
        let mut v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let before = v.clone();
        while v == before {
            mutate(&mut v, &mut rng);
        }
        let tampered = serde_json::to_string_pretty(&v).unwrap();
        ensure(rejected(&tampered), || format!("tampered {name} certificate (case {case}) is accepted"))?;
    }
    for (name, text) in &corpus.0 {
        ensure(!rejected(text), || format!("untampered {name} certificate is rejected"))?;
    }
    Ok(())
}

fn run_all(report: &mut Vec<(usize, Outcome, Duration, Duration)>) -> Corpus {
    let mut corpus = Corpus::default();
    let limits = [10, 5, 10, 60, 2, 2, 180, 5];
    for (i, limit) in limits.iter().enumerate() {
        let t = Instant::now();
        let outcome = match i + 1 {
            1 => criterion_1(&mut corpus),
            2 => criterion_2(),
            3 => criterion_3(&mut corpus),
            4 => criterion_4(&mut corpus),
            5 => criterion_5(&mut corpus),
            6 => criterion_6(),
            7 => criterion_7(&mut corpus),
            _ => criterion_8(&mut corpus),
        };
        eprintln!("  criterion {} done in {:.2}s", i + 1, t.elapsed().as_secs_f64());
        report.push((i + 1, outcome, t.elapsed(), Duration::from_secs(*limit)));
    }
    corpus
}

fn main() {
    let mut report = Vec::new();
    let corpus = run_all(&mut report);

    let t = Instant::now();
    let nine = criterion_9(&corpus);
    report.push((9, nine, t.elapsed(), Duration::from_secs(30)));

    let t = Instant::now();
    let mut again = Vec::new();
    let second = run_all(&mut again);
    let ten = if let Some((n, Err(e), ..)) = again.iter().find(|r| r.1.is_err()) {
        Err(format!("second run of criterion {n} failed: {e}"))
    } else if corpus.0.len() != second.0.len() {
        Err("the runs emit different numbers of certificates".into())
    } else {
        corpus
            .0
            .iter()
            .zip(&second.0)
            .find(|(a, b)| a != b)
            .map_or(Ok(()), |(a, _)| Err(format!("{} certificate differs between runs", a.0)))
    };
    report.push((10, ten, t.elapsed(), Duration::MAX));

    let mut failed = 0;
    for (n, outcome, took, limit) in &report {
        let verdict = match outcome {
            Ok(()) if took < limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {}s limit)", limit.as_secs()),
            Err(e) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {n:>2}: {verdict}  [{:.2}s]", took.as_secs_f64());
    }
    println!("{} certificates compared across runs", corpus.0.len());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
