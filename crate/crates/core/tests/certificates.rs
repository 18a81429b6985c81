mod common;

use common::*;
use paratower::certificate::{TowersPayload, SCHEMA_VERSION};
use paratower::coloring::ColoringRecord;
use paratower::towers::{f2_strengthened_towers, f2_towers};
use paratower::{
    build_isometry, greedy_color, verify_envelope, CayleyGroup, Clopen, Element, Envelope, IsometryCertificate,
    IsometryParams, Kind, StepFunction, VerifyMode, Witness, Word,
};
use serde::Serialize;

fn b1() -> Vec<Word> {
    ["", "a", "A", "b", "B"].iter().map(|s| w(s)).collect()
}

fn sealed<T: Serialize>(kind: Kind, payload: &T) -> Envelope {
    Envelope::new(kind, 3, payload, None).unwrap()
}

/// Re-seals and reparses, so only the semantic checks can object.
fn rejected<T: Serialize>(kind: Kind, payload: &T) -> bool {
    let env = sealed(kind, payload);
    let back = Envelope::parse(&env.to_json().unwrap()).unwrap();
    match verify_envelope(&back) {
        Ok(r) => {
            assert!(r.lines[0].pass, "hash was recomputed");
            !r.pass()
        }
        Err(_) => true,
    }
}

fn towers_payload() -> TowersPayload {
    let family = f2_towers(&b1()).unwrap();
    let report = family.verify(VerifyMode::Exact).unwrap();
    TowersPayload { family, report, complements: None }
}

#[test]
fn honest_certificates_verify() {
    assert!(!rejected(Kind::Towers, &towers_payload()));
    let st = f2_strengthened_towers(&b1()).unwrap();
    let report = st.family.verify(VerifyMode::Exact).unwrap();
    let payload = TowersPayload { family: st.family, report, complements: Some(st.complements) };
    assert!(!rejected(Kind::Towers, &payload));
    let rec = greedy_color(CayleyGroup::Integers, &[-2, 0, 2]).unwrap().snapshot(30);
    assert!(!rejected(Kind::Coloring, &rec));
    assert!(!rejected(Kind::Witness, &Witness::identity(Clopen::cylinder(&w("a")), Clopen::cylinder(&w("a")))));
}

#[test]
fn tower_edits_are_caught() {
    let mut p = towers_payload();
    p.family.items[0].g = Element::word(w(""));
    assert!(rejected(Kind::Towers, &p), "moved tower");

    let mut p = towers_payload();
    p.report.checks.cover.pass = false;
    assert!(rejected(Kind::Towers, &p), "edited verdict");

    let st = f2_strengthened_towers(&b1()).unwrap();
    let report = st.family.verify(VerifyMode::Exact).unwrap();
    let mut comps = st.complements.clone();
    comps.swap(0, 1);
    assert!(rejected(Kind::Towers, &TowersPayload { family: st.family.clone(), report: report.clone(), complements: Some(comps) }));
    let mut comps = st.complements;
    comps.pop();
    assert!(rejected(Kind::Towers, &TowersPayload { family: st.family, report, complements: Some(comps) }));
}

#[test]
fn coloring_edits_are_caught() {
    let rec = greedy_color(CayleyGroup::Cyclic(13), &[-1, 0, 1]).unwrap().snapshot(0);
    let mut clash = rec.clone();
    clash.assignment[1] = clash.assignment[0];
    assert!(rejected(Kind::Coloring, &clash));
    // Proper but not the greedy coloring.
    let mut other: ColoringRecord = rec.clone();
    other.assignment = (0..13).map(|k| [1, 0, 2][k % 3]).collect();
    other.assignment[12] = 3;
    other.colors_used = 4;
    assert!(other.verify().is_ok());
    assert!(rejected(Kind::Coloring, &other));
    let mut widened = rec;
    widened.m += 1;
    assert!(rejected(Kind::Coloring, &widened));
}

#[test]
fn witness_edits_are_caught() {
    let base = Witness::identity(Clopen::cylinder(&w("ab")), Clopen::cylinder(&w("a")));
    let mut dropped = base.clone();
    dropped.entries.clear();
    assert!(rejected(Kind::Witness, &dropped));
    let mut moved = base.clone();
    moved.entries[0].g = Element::word(w("b"));
    assert!(rejected(Kind::Witness, &moved));
    let mut shrunk = base;
    shrunk.targets[0] = Clopen::cylinder(&w("aB"));
    assert!(rejected(Kind::Witness, &shrunk));
}

#[test]
fn isometry_edits_are_caught() {
    let cert = build_isometry(&IsometryParams::default()).unwrap();
    assert!(!rejected(Kind::Isometry, &cert));
    let mut bad: IsometryCertificate = cert.clone();
    bad.missing_cylinder = w("a");
    assert!(rejected(Kind::Isometry, &bad));
    let mut bad = cert.clone();
    bad.f[0] = StepFunction::zero(1);
    assert!(rejected(Kind::Isometry, &bad));
    let mut bad = cert;
    bad.checks[0].pass = !bad.checks[0].pass;
    assert!(rejected(Kind::Isometry, &bad));
}

#[test]
fn envelope_level_problems() {
    let mut env = sealed(Kind::Towers, &towers_payload());
    env.schema_version = SCHEMA_VERSION + 1;
    assert!(verify_envelope(&env).is_err());

    let mut env = sealed(Kind::Towers, &towers_payload());
    env.kind = Kind::Coloring;
    env.hash = env.compute_hash().unwrap();
    assert!(verify_envelope(&env).is_err());

    let mut env = sealed(Kind::Towers, &towers_payload());
    env.tool_version.push('x');
    let r = verify_envelope(&env).unwrap();
    assert!(!r.lines[0].pass && !r.pass());
    assert!(r.render().contains("FAIL"));
}
