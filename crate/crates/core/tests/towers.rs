mod common;

use common::*;
use paratower::towers::extensions::project_first;
use paratower::towers::{
    boundary_filling, extension_towers, f2_strengthened_towers, f2_towers, finite_normal_ext_towers, more_towers,
    towers_from_filling, union_towers,
};
use paratower::{BoundaryPoint, Element, Factor, PrefixSet, Subset, TowerFamily, Transversal, VerifyMode, Word};

fn words(list: &[&str]) -> Vec<Word> {
    list.iter().map(|s| w(s)).collect()
}

fn b1() -> Vec<Word> {
    words(&["", "a", "A", "b", "B"])
}

fn assert_brute(family: &TowerFamily, r: usize) {
    let b = brute_towers(family, r);
    assert!(b.disjoint && b.cover, "ball oracle at radius {r}: {b:?}");
}

#[test]
fn identity_only_set_uses_short_words() {
    let st = f2_strengthened_towers(&[w("")]).unwrap();
    assert_eq!(st.m, 0);
    assert_eq!(st.h[0].to_string(), "ba");
    assert_brute(&st.family, 8);
    assert_brute(&f2_towers(&[w("")]).unwrap(), 8);
}

#[test]
fn unit_ball_translates_are_disjoint_exactly() {
    let family = f2_towers(&b1()).unwrap();
    assert_eq!(family.n(), 2);
    let mut translates = Vec::new();
    for d in b1() {
        for t in &family.items {
            translates.push(t.set.normalize(2).unwrap().translate(&d));
        }
    }
    assert_eq!(translates.len(), 10);
    for i in 0..translates.len() {
        for j in i + 1..translates.len() {
            assert!(translates[i].is_disjoint(&translates[j]), "translates {i} and {j}");
        }
    }
    let cover = family
        .items
        .iter()
        .map(|t| t.set.normalize(2).unwrap().translate(t.g.as_word().unwrap()))
        .fold(PrefixSet::empty(2), |a, b| a.union(&b));
    assert!(cover.is_all());
}

#[test]
fn strengthened_disjointness_for_radius_two() {
    let d: Vec<Word> = ball(2, 2).iter().map(|s| w(s)).collect();
    let st = f2_strengthened_towers(&d).unwrap();
    assert_eq!(st.m, 2);
    let sets: Vec<PrefixSet> = st.family.items.iter().map(|t| t.set.normalize(2).unwrap()).collect();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            for x in &d {
                for y in &d {
                    if i != j || x != y {
                        assert!(a.translate(x).is_disjoint(&b.translate(y)), "{x}·A{i} and {y}·A{j}");
                    }
                }
            }
        }
    }
    assert_brute(&st.family, 8);
}

#[test]
fn single_copy_reverifies_identically() {
    let family = more_towers(f2_towers, 1, &b1()).unwrap();
    assert_eq!(family.n(), 2);
    let first = family.verify(VerifyMode::Exact).unwrap();
    let second = family.verify(VerifyMode::Exact).unwrap();
    assert!(first.pass());
    assert_eq!(first, second);
    assert_brute(&family, 8);
}

#[test]
fn three_copies_cover_separately() {
    let family = more_towers(f2_towers, 3, &b1()).unwrap();
    for c in 0..3 {
        let cover = family
            .items
            .iter()
            .filter(|t| t.copy == c)
            .map(|t| t.set.normalize(2).unwrap().translate(t.g.as_word().unwrap()))
            .fold(PrefixSet::empty(2), |a, b| a.union(&b));
        assert!(cover.is_all(), "copy {c}");
    }
    assert_brute(&family, 8);
}

#[test]
fn trivial_finite_factor() {
    let f: Vec<Element> = b1().into_iter().map(|d| Element::pair(d, 0, 1)).collect();
    let family = finite_normal_ext_towers(f2_towers, &f, 1).unwrap();
    assert_eq!(family.n(), f2_towers(&b1()).unwrap().n());
    assert_brute(&family, 6);
}

#[test]
fn cyclic_factor_of_order_three() {
    let f: Vec<Element> = words(&["", "a", "b"]).into_iter().flat_map(|d| (0..3).map(move |j| Element::pair(d.clone(), j, 3))).collect();
    let family = finite_normal_ext_towers(f2_towers, &f, 3).unwrap();
    assert_eq!(family.n(), 6);
    assert_brute(&family, 4);
}

fn pairs(left: &[Word], right: &[Word]) -> Vec<Element> {
    left.iter().flat_map(|d| right.iter().map(move |e| Element(vec![Factor::Word(d.clone()), Factor::Word(e.clone())]))).collect()
}

#[test]
fn product_towers_project_onto_the_quotient_towers() {
    let ext = extension_towers(f2_towers, f2_towers, &pairs(&b1(), &b1()), 4).unwrap();
    let quotient = f2_towers(&b1()).unwrap();
    let per = ext.n() / quotient.n();
    for (i, item) in ext.items.iter().enumerate() {
        let p = project_first(&item.set).expect("product tower");
        assert_eq!(p.normalize(2).unwrap(), quotient.items[i / per].set.normalize(2).unwrap(), "tower {i}");
    }
}

#[test]
fn trivial_kernel_part_still_gives_towers() {
    let ext = extension_towers(f2_towers, f2_towers, &pairs(&b1(), &[w("")]), 3).unwrap();
    assert_brute(&ext, 3);
}

#[test]
fn identity_transversal_stays_in_f2() {
    let family = union_towers(f2_towers, &b1(), Transversal::Explicit { reps: vec![w("")] }, 6).unwrap();
    assert_brute(&family, 6);
}

#[test]
fn f3_factorization_and_towers() {
    let reps = coset_reps(5);
    for x in ball(3, 5) {
        let n = reps.iter().filter(|r| !mul(&x, &inv(r)).contains(['c', 'C'])).count();
        assert_eq!(n, 1, "{x}");
    }
    let family = union_towers(f2_towers, &b1(), Transversal::Shortest { max_len: 5 }, 5).unwrap();
    assert_brute(&family, 5);
}

#[test]
fn filling_towers_for_the_identity() {
    let t = towers_from_filling(&[w("")], 2, BoundaryPoint::AbPowers, boundary_filling, 8).unwrap();
    assert_brute(&t.family, 8);
    assert!(t.neighborhoods[0].is_disjoint(&t.neighborhoods[1]));
}

#[test]
fn two_constructions_certify_the_same_set() {
    let filling = towers_from_filling(&b1(), 2, BoundaryPoint::AbPowers, boundary_filling, 8).unwrap().family;
    let explicit = f2_towers(&b1()).unwrap();
    assert_ne!(filling.items, explicit.items);
    assert_brute(&filling, 8);
    assert_brute(&explicit, 8);
}

#[test]
fn duplicated_tower_breaks_disjointness() {
    let mut family = f2_towers(&b1()).unwrap();
    family.items[1].set = Subset::cone(w("aaba"));
    let r = family.verify(VerifyMode::Exact).unwrap();
    assert!(!r.checks.disjoint.pass);
    assert!(!brute_towers(&family, 4).disjoint);
}

#[test]
fn identity_element_breaks_covering_within_radius_four() {
    let mut family = f2_towers(&b1()).unwrap();
    family.items[1].g = Element::word(w(""));
    let r = family.verify(VerifyMode::Ball { radius: 4 }).unwrap();
    assert!(!r.checks.cover.pass);
    let x = &r.checks.cover.counterexample.as_ref().unwrap().element;
    assert!(x.size() <= 4);
    assert!(!brute_towers(&family, 4).cover);
}

#[test]
fn counterexamples_do_not_depend_on_thread_count() {
    let mut family = f2_towers(&b1()).unwrap();
    family.items[0].g = Element::word(w(""));
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| family.verify(VerifyMode::Ball { radius: 6 }).unwrap())
    };
    let one = run(1);
    assert!(!one.pass());
    assert_eq!(one, run(4));
}
