//! Invariants computed from different diagrams of the same link agree.

use linkgrowth::alexander::alexander_polynomial;
use linkgrowth::covers::{homology, HomologyMethod};
use linkgrowth::lattices::Lattice;
use linkgrowth::linkio::{builtin_link, parse_pd, wirtinger, PdCode, WirtingerPresentation};

fn from_pd(text: &str) -> WirtingerPresentation {
    wirtinger(&parse_pd(text).unwrap().to_diagram().unwrap()).unwrap()
}

fn from_braid(strands: usize, word: &[i32]) -> WirtingerPresentation {
    wirtinger(&PdCode::from_braid(strands, word).unwrap().to_diagram().unwrap()).unwrap()
}

fn builtin(name: &str) -> WirtingerPresentation {
    wirtinger(&builtin_link(name).unwrap()).unwrap()
}

fn assert_same(a: &WirtingerPresentation, b: &WirtingerPresentation, lattices: &[&str]) {
    assert_eq!(a.num_components, b.num_components);
    assert_eq!(alexander_polynomial(a).unwrap(), alexander_polynomial(b).unwrap());
    for spec in lattices {
        let lam: Lattice = spec.parse().unwrap();
        let x = homology(a, &lam, HomologyMethod::Relative).unwrap();
        let y = homology(b, &lam, HomologyMethod::Relative).unwrap();
        assert!(x.same_group(&y), "{spec}: {x:?} vs {y:?}");
    }
}

const KNOT_LATTICES: &[&str] = &["cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:9"];
const LINK_LATTICES: &[&str] = &["diag:2,2", "diag:3,3", "diag:2,3", "cols:2,1;-1,2", "cols:3,1;0,4", "diag:4,4"];

#[test]
fn trefoil_with_a_kink() {
    let kinked = from_pd("X[3,6,4,7] X[5,8,6,1] X[7,4,8,5] X[1,3,2,2]");
    assert_eq!(kinked.num_generators(), 4);
    assert_same(&kinked, &builtin("trefoil"), KNOT_LATTICES);
}

#[test]
fn knots_as_braid_closures() {
    assert_same(&from_braid(2, &[1, 1, 1]), &builtin("trefoil"), KNOT_LATTICES);
    assert_same(&from_braid(3, &[1, -2, 1, -2]), &builtin("figure8"), KNOT_LATTICES);
}

#[test]
fn relabelled_pd_codes() {
    // shifting every label by k modulo 2n is the same diagram
    let base = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
    for k in 1..8 {
        let text: Vec<String> = base
            .iter()
            .map(|x| {
                let y: Vec<String> = x.iter().map(|&l| ((l - 1 + k) % 8 + 1).to_string()).collect();
                format!("X[{}]", y.join(","))
            })
            .collect();
        assert_same(&from_pd(&text.join(" ")), &builtin("figure8"), &KNOT_LATTICES[..3]);
    }
}

#[test]
fn whitehead_braid_and_explicit_diagram() {
    let braid = from_braid(3, &[-2, 1, -2, 1, 1]);
    assert_eq!(braid.num_generators(), 5);
    assert_same(&braid, &builtin("whitehead"), LINK_LATTICES);
}

#[test]
fn two_bridge_links_as_braid_closures() {
    assert_same(&from_braid(3, &[2, -1, 2, 1, 1, 1, 1]), &builtin("6_2^2"), LINK_LATTICES);
    assert_same(&from_braid(3, &[2, 2, -1, 2, 1, 1, 1]), &builtin("6_2^3"), LINK_LATTICES);
}
