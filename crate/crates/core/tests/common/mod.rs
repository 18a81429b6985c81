//! Brute-force reference implementations used to cross-check the library.
//! Words are plain strings over `aAbBcC` with case as inversion; nothing here
//! calls the library's reduction, normal forms or verifiers.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::rc::Rc;

use paratower::coloring::CayleyGroup;
use paratower::{Clopen, Element, Factor, Subset, TowerFamily, Transversal, Witness, Word};
use rand::Rng;

pub fn inv_char(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn red(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        if out.last() == Some(&inv_char(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn inv(s: &str) -> String {
    s.chars().rev().map(inv_char).collect()
}

pub fn mul(a: &str, b: &str) -> String {
    red(&format!("{a}{b}"))
}

pub fn alphabet(rank: usize) -> Vec<char> {
    "aAbBcC".chars().take(2 * rank).collect()
}

/// All reduced words of length at most `r`, by closing under right
/// multiplication by generators.
pub fn ball(rank: usize, r: usize) -> Vec<String> {
    let letters = alphabet(rank);
    let mut seen: HashSet<String> = HashSet::from([String::new()]);
    let mut frontier = vec![String::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in &letters {
                let x = mul(w, &c.to_string());
                if seen.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<String> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> String {
    let letters = alphabet(rank);
    let len = rng.gen_range(0..=max_len);
    let mut s = String::new();
    while s.len() < len {
        let c = letters[rng.gen_range(0..letters.len())];
        s = mul(&s, &c.to_string());
    }
    s
}

pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// One factor of a product group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum F {
    W(String),
    M(u32, u32),
    I(i64),
}

pub type X = Vec<F>;

pub fn from_element(e: &Element) -> X {
    e.factors()
        .iter()
        .map(|f| match f {
            Factor::Word(w) => F::W(w.to_string()),
            Factor::Mod { value, order } => F::M(*value, *order),
            Factor::Int(i) => F::I(*i),
        })
        .collect()
}

pub fn x_mul(a: &X, b: &X) -> X {
    a.iter()
        .zip(b)
        .map(|p| match p {
            (F::W(u), F::W(v)) => F::W(mul(u, v)),
            (F::M(x, n), F::M(y, _)) => F::M((x + y) % n, *n),
            (F::I(x), F::I(y)) => F::I(x + y),
            _ => panic!("mismatched factors"),
        })
        .collect()
}

pub fn x_inv(a: &X) -> X {
    a.iter()
        .map(|f| match f {
            F::W(u) => F::W(inv(u)),
            F::M(x, n) => F::M((n - x) % n, *n),
            F::I(x) => F::I(-x),
        })
        .collect()
}

/// First-fit coloring of `ℤ/n` in the order `0..n` against the differences
/// of `e`.
pub fn cyclic_first_fit(n: u32, e: &[i64]) -> Vec<usize> {
    let n = n as i64;
    let diffs: BTreeSet<i64> = e.iter().flat_map(|x| e.iter().map(move |y| (x - y).rem_euclid(n))).filter(|&d| d != 0).collect();
    let mut color: Vec<Option<usize>> = vec![None; n as usize];
    for v in 0..n {
        let used: BTreeSet<usize> = diffs.iter().filter_map(|d| color[((v + d) % n) as usize]).collect();
        color[v as usize] = Some((0..).find(|c| !used.contains(c)).unwrap());
    }
    color.into_iter().map(Option::unwrap).collect()
}

fn clopen_has(u: &Clopen, fiber: usize, point: &str) -> bool {
    u.cylinders().iter().any(|(f, c)| *f == fiber && point.starts_with(&c.to_string()))
}

thread_local! {
    static REPS: std::cell::RefCell<std::collections::HashMap<usize, Rc<HashSet<String>>>> = Default::default();
}

/// Reduced words of F₃ up to the given length not starting with `a` or `b`
/// letters.
pub fn coset_reps(max_len: usize) -> Rc<HashSet<String>> {
    REPS.with(|c| {
        c.borrow_mut()
            .entry(max_len)
            .or_insert_with(|| Rc::new(ball(3, max_len).into_iter().filter(|r| !r.starts_with(['a', 'A', 'b', 'B'])).collect()))
            .clone()
    })
}

/// Membership by structural recursion on the expression.
pub fn member(s: &Subset, x: &X) -> bool {
    match s {
        Subset::Cone { h } => matches!(x.as_slice(), [F::W(u)] if u.starts_with(&h.to_string())),
        Subset::Finite { elements } => elements.iter().any(|e| from_element(e) == *x),
        Subset::Union { of } => of.iter().any(|t| member(t, x)),
        Subset::Inter { of } => of.iter().all(|t| member(t, x)),
        Subset::Compl { of } => !member(of, x),
        Subset::Translate { g, of } => {
            let g = from_element(g);
            g.len() == x.len() && member(of, &x_mul(&x_inv(&g), x))
        }
        Subset::Product { factors } => {
            factors.len() == x.len() && factors.iter().zip(x).all(|(t, f)| member(t, &vec![f.clone()]))
        }
        Subset::OrbitPre { z, u } => match x.as_slice() {
            [F::W(g)] => {
                let depth = u.depth();
                let p = mul(g, &z.prefix(depth + g.len()).to_string());
                clopen_has(u, 0, &p[..depth.min(p.len())])
            }
            _ => false,
        },
        Subset::CosetSlice { base, transversal } => match (x.as_slice(), transversal) {
            // Shortest representatives start with c or C, so p·s is a plain
            // concatenation and s is a suffix.
            ([F::W(u)], Transversal::Shortest { max_len }) => {
                let reps = coset_reps(*max_len);
                (0..=u.len()).any(|i| {
                    let (p, s) = u.split_at(i);
                    !p.contains(['c', 'C']) && reps.contains(s) && member(base, &vec![F::W(p.to_string())])
                })
            }
            ([F::W(u)], Transversal::Explicit { reps }) => reps.iter().any(|r| {
                let p = mul(u, &inv(&r.to_string()));
                !p.contains(['c', 'C']) && member(base, &vec![F::W(p)])
            }),
            _ => false,
        },
        Subset::ColorClass { group, generators, class } => match (group, x.as_slice()) {
            (CayleyGroup::Cyclic(n), [F::M(v, m)]) if n == m => cyclic_first_fit(*n, generators)[*v as usize] == *class,
            _ => panic!("no oracle for this color class"),
        },
    }
}

/// Elements of the product group whose factors lie in the radius-`r` balls;
/// finite cyclic factors contribute every residue.
pub fn group_ball(group: &paratower::Group, r: usize) -> Vec<X> {
    use paratower::element::FactorGroup;
    let mut out: Vec<X> = vec![Vec::new()];
    for g in &group.0 {
        let factor: Vec<F> = match g {
            FactorGroup::Free(f) => ball(f.rank as usize, r).into_iter().map(F::W).collect(),
            FactorGroup::Cyclic(n) => (0..*n).map(|v| F::M(v, *n)).collect(),
            FactorGroup::Integers => (-(r as i64)..=r as i64).map(F::I).collect(),
        };
        out = out.iter().flat_map(|p| factor.iter().map(move |f| [p.clone(), vec![f.clone()]].concat())).collect();
    }
    out
}

#[derive(Debug, PartialEq, Eq)]
pub struct Brute {
    pub disjoint: bool,
    pub cover: bool,
}

/// Brute-force tower conditions on a ball: no ball element lies in two of
/// the translates `d·A_i`, and each copy's `g_i·A_i` cover the ball.
pub fn brute_towers(family: &TowerFamily, r: usize) -> Brute {
    let elems = group_ball(&family.group, r);
    let d_inv: Vec<X> = family.d.iter().map(|d| x_inv(&from_element(d))).collect();
    let g_inv: Vec<X> = family.items.iter().map(|t| x_inv(&from_element(&t.g))).collect();
    let disjoint = elems.iter().all(|x| {
        let mut hits = 0;
        for di in &d_inv {
            let y = x_mul(di, x);
            hits += family.items.iter().filter(|t| member(&t.set, &y)).count();
        }
        hits <= 1
    });
    let cover = (0..family.copies).all(|c| {
        elems.iter().all(|x| {
            family.items.iter().zip(&g_inv).any(|(t, gi)| t.copy == c && member(&t.set, &x_mul(gi, x)))
        })
    });
    Brute { disjoint, cover }
}

/// Whether `(fiber, point)` lies in `u`, for a point given by a long prefix.
pub fn in_clopen(u: &Clopen, fiber: usize, point: &str) -> bool {
    clopen_has(u, fiber, point)
}

/// A long random reduced word, used as a boundary point.
pub fn random_point(rng: &mut impl Rng, len: usize) -> String {
    let letters = alphabet(2);
    let mut s = String::new();
    while s.len() < len {
        let c = letters[rng.gen_range(0..4)];
        if s.ends_with(inv_char(c)) {
            continue;
        }
        s.push(c);
    }
    s
}

/// All reduced words of exactly length `d` over F₂.
pub fn sphere(d: usize) -> Vec<String> {
    ball(2, d).into_iter().filter(|x| x.len() == d).collect()
}

/// Pointwise witness checks on random boundary points: each sampled source
/// point lies in a piece of its source and lands in that piece's target, and
/// no point of a color has two preimages.
pub fn sample_witness(wit: &Witness, rng: &mut impl Rng, samples: usize) -> Result<(), String> {
    let k = wit.fiber_count();
    let act = |g: &Element, fiber: usize, p: &str| -> (usize, String) {
        let x = from_element(g);
        let (word, shift) = match x.as_slice() {
            [F::W(u)] => (u.clone(), 0),
            [F::W(u), F::M(v, _)] => (u.clone(), *v as usize),
            _ => panic!("unexpected acting element"),
        };
        ((fiber + shift) % k, mul(&word, p))
    };
    for _ in 0..samples {
        let fiber = rng.gen_range(0..k);
        let p = random_point(rng, 80);
        for (i, s) in wit.sources.iter().enumerate() {
            if !in_clopen(s, fiber, &p) {
                continue;
            }
            let hit = wit.entries.iter().find(|e| e.source == i && in_clopen(&e.piece, fiber, &p));
            let e = hit.ok_or_else(|| format!("point {fiber}:{} of source {i} is not covered", &p[..12]))?;
            let (f2, q) = act(&e.g, fiber, &p);
            if !in_clopen(&wit.targets[wit.target_of(e.color)], f2, &q) {
                return Err(format!("image of {fiber}:{} leaves its target", &p[..12]));
            }
        }
        // Disjointness: a target point has at most one preimage per color.
        for color in 0..wit.colors() {
            let pre = wit
                .entries
                .iter()
                .filter(|e| e.color == color)
                .filter(|e| {
                    let (f2, q) = act(&e.g.inverse(), fiber, &p);
                    in_clopen(&e.piece, f2, &q)
                })
                .count();
            if pre > 1 {
                return Err(format!("{pre} pieces of color {color} land on {fiber}:{}", &p[..12]));
            }
        }
    }
    Ok(())
}
