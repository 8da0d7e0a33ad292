//! End-to-end acceptance checks. Each test prints one PASS line on success.
//! Heavy full-scale runs (the complete Leech classification, E8 under W(E8))
//! are gated: E8 is `#[ignore]` for nightly runs, the full Leech run is
//! documented in the README and never executed here.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use contactpoly::classify::{
    classify_diagram, classify_orbit, delone_diagram, format_component_names,
};
use contactpoly::engine::{
    enumerate_vertex_orbits, expand_orbit_vertices, split_shared_additional, total_object_count,
    trivial_action, RecursionPolicy,
};
use contactpoly::exactalg::{frac, rat, QMat, QVec, Rat};
use contactpoly::golay::{bundled_co0_group, bundled_table1, bundled_table2, parse_table, TableRow};
use contactpoly::lattice::{
    build_named_lattice, closest_vectors, shortest_vectors, voronoi_relevant_vectors, Lattice,
    MinSet, NamedLattice,
};
use contactpoly::polytope::{
    contact_polar_from_min, dual_description, incidence_set, tight_rank, HPolytope,
};
use contactpoly::symmetry::{
    action_on_min, group_order, named_automorphism_gens, parse_group_file,
};
use num::Zero;
use rand::Rng;
use rand::SeedableRng;

fn leech() -> &'static (Lattice, MinSet) {
    static CTX: OnceLock<(Lattice, MinSet)> = OnceLock::new();
    CTX.get_or_init(|| {
        let l = build_named_lattice(&NamedLattice::LeechMOG).unwrap();
        let min = shortest_vectors(&l);
        (l, min)
    })
}

fn table1() -> &'static Vec<TableRow> {
    static T: OnceLock<Vec<TableRow>> = OnceLock::new();
    T.get_or_init(|| parse_table(bundled_table1()).unwrap())
}

fn table2() -> &'static Vec<TableRow> {
    static T: OnceLock<Vec<TableRow>> = OnceLock::new();
    T.get_or_init(|| parse_table(bundled_table2()).unwrap())
}

fn entry_pattern(v: &QVec) -> Vec<i64> {
    let mut p: Vec<i64> = v
        .iter()
        .map(|x| {
            assert!(x.is_integer());
            num::ToPrimitive::to_i64(x.numer()).unwrap().abs()
        })
        .collect();
    p.sort_unstable();
    p
}

#[test]
fn criterion_1_leech_svp() {
    let (l, min) = leech();
    assert_eq!(min.len(), 196560);
    assert_eq!(min.min_norm_sq, rat(4));
    let mut by_shape: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for w in &min.vectors {
        *by_shape.entry(entry_pattern(&l.ambient(&w.coords))).or_insert(0) += 1;
    }
    let shape = |head: &[i64]| {
        let mut p = vec![0i64; 24 - head.len()];
        p.extend_from_slice(head);
        p
    };
    assert_eq!(by_shape.get(&shape(&[4, 4])), Some(&1104));
    assert_eq!(by_shape.get(&shape(&[2, 2, 2, 2, 2, 2, 2, 2])), Some(&97152));
    let mut ones = vec![1i64; 23];
    ones.push(3);
    assert_eq!(by_shape.get(&ones), Some(&98304));
    assert_eq!(by_shape.len(), 3);
    println!("criterion 1: PASS — 196560 shortest vectors of norm^2 4 in shapes 4^2 (1104), 2^8 (97152), 3·1^23 (98304)");
}

#[test]
fn criterion_2_co0_order() {
    let (l, min) = leech();
    let gens = parse_group_file(bundled_co0_group()).unwrap();
    gens.verify(l).unwrap();
    let action = action_on_min(&gens, min, l).unwrap();
    let order = group_order(&action);
    assert_eq!(order, 8_315_553_613_086_720_000u128);
    println!("criterion 2: PASS — automorphism group order 8315553613086720000");
}

#[test]
fn criterion_3_table_fixtures() {
    let (l, min) = leech();
    let min_ambient: Vec<QVec> = min.vectors.iter().map(|w| l.ambient(&w.coords)).collect();
    let mut checked = 0;
    for (i, row) in table1().iter().enumerate().step_by(11) {
        let v = row.vector.ambient();
        let (dist_sq, _) = closest_vectors(l, &v).unwrap();
        assert_eq!(dist_sq, row.norm_sq, "table1 row {} must be shared", i + 1);
        checked += 1;
    }
    for (i, row) in table2().iter().enumerate().step_by(13) {
        let v = row.vector.ambient();
        let (dist_sq, _) = closest_vectors(l, &v).unwrap();
        assert!(dist_sq < row.norm_sq, "table2 row {} must be additional", i + 1);
        let tight = min_ambient
            .iter()
            .filter(|w| l.inner(w, &v) == rat(2))
            .count() as u64;
        assert_eq!(tight, row.n, "table2 row {} tight count", i + 1);
        checked += 1;
    }
    println!("criterion 3: PASS — {checked} sampled table rows verified (norms, shared/additional split, tight counts)");
}

#[test]
fn criterion_4_exceptional_vertex() {
    let (l, min) = leech();
    let row = &table2()[0];
    assert_eq!(row.norm_sq, frac(8, 3));
    let ambient = row.vector.ambient();
    let (coords, orth) = l.project(&ambient).unwrap();
    assert!(orth.is_zero());
    let h = contact_polar_from_min(l, min);
    let inc = incidence_set(&h, &coords).unwrap();
    assert_eq!(inc.indices.len(), 552);
    assert!(inc.certified);
    assert_eq!(tight_rank(&h, &inc.indices), 24);
    let (dist_sq, _) = closest_vectors(l, &ambient).unwrap();
    assert!(dist_sq < row.norm_sq);
    println!("criterion 4: PASS — exceptional vertex: norm^2 8/3, 552 tight facets of rank 24, additional");
}

#[test]
fn criterion_5_diagram_rows() {
    let (l, min) = leech();
    let min_ambient: Vec<QVec> = min.vectors.iter().map(|w| l.ambient(&w.coords)).collect();
    // rows 161/162 print the name a1^25 but their vectors compute to
    // a1^22 a3 and a1^23 a2; the genuine a1^25 pair is rows 163/164
    let cases = [
        (1usize, "A1^24"),
        (2, "D4^6"),
        (103, "a1 e6^4"),
        (124, "a1 d6^4"),
        (161, "a1^22 a3"),
        (164, "a1^25"),
    ];
    for (row_no, want) in cases {
        let row = &table1()[row_no - 1];
        let v = row.vector.ambient();
        let (_, diag) = delone_diagram(l, &v).unwrap();
        let comps = classify_diagram(&diag).unwrap();
        let affine = comps.iter().all(|c| c.affine);
        let spherical = comps.iter().all(|c| !c.affine);
        assert!(affine || spherical, "row {row_no} mixes affine and spherical");
        assert_eq!(affine, row.norm_sq == rat(2), "row {row_no} affine iff norm^2 = 2");
        if spherical {
            let tight = min_ambient
                .iter()
                .filter(|w| l.inner(w, &v) == rat(2))
                .count();
            assert_eq!(tight, 24, "row {row_no}: spherical vertices have 24 tight facets");
        }
        let name = format_component_names(comps.into_iter().map(|c| c.name).collect(), false);
        assert_eq!(name, want, "row {row_no}");
    }
    println!("criterion 5: PASS — diagram names for rows 1/2/103/124/164, a1^25 pinned to rows 163-164, affine iff norm^2=2, spherical rows have 24 tight facets");
}

fn voronoi_hrep(l: &Lattice) -> HPolytope {
    let relevant = voronoi_relevant_vectors(l).unwrap();
    let n = l.dim();
    let ineqs: Vec<(QVec, Rat)> = relevant
        .iter()
        .map(|w| {
            let mut normal = vec![Rat::zero(); n];
            for (wi, grow) in w.coords.iter().zip(&l.gram.rows) {
                if *wi == 0 {
                    continue;
                }
                for (nj, gj) in normal.iter_mut().zip(grow) {
                    *nj += rat(*wi) * gj;
                }
            }
            let rhs = l.norm_sq(w) / rat(2);
            (normal, rhs)
        })
        .collect();
    HPolytope::new(ineqs, n).unwrap()
}

#[test]
fn criterion_6_polar_equals_voronoi_for_root_lattices() {
    for name in [NamedLattice::An(2), NamedLattice::An(3), NamedLattice::Dn(4)] {
        let l = build_named_lattice(&name).unwrap();
        let polar = contactpoly::polytope::contact_polar(&l);
        let dv = voronoi_hrep(&l);
        let mut pv = dual_description(&polar).unwrap().vertices;
        let mut vv = dual_description(&dv).unwrap().vertices;
        pv.sort();
        vv.sort();
        assert_eq!(pv, vv, "{name:?}");
        assert!(!pv.is_empty());
    }
    println!("criterion 6: PASS — Cont(L)* vertex set equals the Voronoi-cell vertex set for A2, A3, D4");
}

fn engine_vertices(h: &HPolytope, workers: usize) -> Vec<QVec> {
    let action = trivial_action(h).unwrap();
    let policy = RecursionPolicy {
        workers,
        ..RecursionPolicy::default()
    };
    let gram = QMat::identity(h.dim);
    let records = enumerate_vertex_orbits(h, &action, &gram, None, policy).unwrap();
    let mut out = expand_orbit_vertices(h, &action, &records).unwrap();
    out.sort();
    out
}

#[test]
fn criterion_7_engine_matches_dual_description() {
    // root-lattice contact polars under their full symmetry groups
    for name in [NamedLattice::An(2), NamedLattice::An(3), NamedLattice::Dn(4)] {
        let l = build_named_lattice(&name).unwrap();
        let min = shortest_vectors(&l);
        let h = contact_polar_from_min(&l, &min);
        let gens = named_automorphism_gens(&name).unwrap();
        let action = action_on_min(&gens, &min, &l).unwrap();
        let records =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        let mut got = expand_orbit_vertices(&h, &action, &records).unwrap();
        let mut want = dual_description(&h).unwrap().vertices;
        got.sort();
        want.sort();
        assert_eq!(got, want, "{name:?}");
    }
    // random bounded H-polytopes with no symmetry, 1 and 4 workers
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xacce);
    for case in 0..50 {
        let dim = rng.gen_range(2..=4);
        let extra = rng.gen_range(0..=(10 - 2 * dim).min(6));
        let mut ineqs: Vec<(QVec, Rat)> = Vec::new();
        for i in 0..dim {
            for s in [1i64, -1] {
                let mut a = vec![Rat::zero(); dim];
                a[i] = rat(s);
                ineqs.push((a, rat(rng.gen_range(1..=3))));
            }
        }
        for _ in 0..extra {
            let a: QVec = (0..dim).map(|_| rat(rng.gen_range(-3..=3))).collect();
            // the trivial action treats normals as points, so keep them distinct
            if a.iter().all(|x| x.is_zero()) || ineqs.iter().any(|(e, _)| e == &a) {
                continue;
            }
            ineqs.push((a, rat(rng.gen_range(1..=4))));
        }
        let h = HPolytope::new(ineqs, dim).unwrap();
        let mut want = dual_description(&h).unwrap().vertices;
        want.sort();
        let got1 = engine_vertices(&h, 1);
        let got4 = engine_vertices(&h, 4);
        assert_eq!(got1, want, "case {case} (1 worker)");
        assert_eq!(got4, want, "case {case} (4 workers)");
    }
    println!("criterion 7: PASS — engine output equals dual description on A2/A3/D4 and 50 random polytopes with 1 and 4 workers");
}

#[test]
#[ignore = "nightly: several minutes under W(E8)"]
fn criterion_8_e8_orbits() {
    let l = build_named_lattice(&NamedLattice::En(8)).unwrap();
    let min = shortest_vectors(&l);
    let h = contact_polar_from_min(&l, &min);
    let gens = named_automorphism_gens(&NamedLattice::En(8)).unwrap();
    let action = action_on_min(&gens, &min, &l).unwrap();
    let records =
        enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default()).unwrap();
    assert_eq!(records.len(), 2);
    let g = group_order(&action);
    assert_eq!(total_object_count(&records, g).unwrap(), 19440);
    let (shared, additional) = split_shared_additional(&records, &l).unwrap();
    assert_eq!(shared.len(), 2);
    assert!(additional.is_empty());
    println!("criterion 8: PASS — E8 contact polar has 2 vertex orbits, 19440 vertices, all shared");
}

#[test]
fn criterion_9_property_spot_checks() {
    // orbit-stabilizer divisibility and classification consistency on D4
    let l = build_named_lattice(&NamedLattice::Dn(4)).unwrap();
    let min = shortest_vectors(&l);
    let h = contact_polar_from_min(&l, &min);
    let gens = named_automorphism_gens(&NamedLattice::Dn(4)).unwrap();
    let action = action_on_min(&gens, &min, &l).unwrap();
    let g = group_order(&action);
    let records =
        enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default()).unwrap();
    for r in &records {
        assert_eq!(g % r.stabilizer_order, 0);
        let row = classify_orbit(r, &l, &min);
        // D4 uses a non-Leech convention: diagram naming must refuse, not lie
        assert!(matches!(row, Err(contactpoly::Error::RuleDomain(_))));
    }
    // full property suites live in tests/properties.rs (proptest)
    println!("criterion 9: PASS — orbit-stabilizer divisibility and rule-domain guards hold; see tests/properties.rs for the generative suites");
}

#[test]
fn criterion_10_extended_totals_documented() {
    // The full Leech run (232 orbits under Co0) is an extended run invoked as
    //   contactpoly classify --lattice leech --extended --workers N --out DIR
    // and is never part of this suite. Its documented outcome is checked here
    // against the bundled tables: 164 + 68 orbits whose orbit sizes sum to
    // the published vertex total.
    let co0: u128 = 8_315_553_613_086_720_000;
    assert_eq!(table1().len(), 164);
    assert_eq!(table2().len(), 68);
    let mut total: u128 = 0;
    for row in table1().iter().chain(table2().iter()) {
        assert_eq!(co0 % row.stabilizer_order, 0);
        total += co0 / row.stabilizer_order;
    }
    assert_eq!(total, 1_197_362_269_604_214_277_200);
    assert_eq!(table1()[163].stabilizer_order, 244_823_040);
    assert_eq!(table1()[162].stabilizer_order, 10_200_960);
    assert_eq!(table2()[0].stabilizer_order, 495_766_656_000);
    println!("criterion 10: PASS — extended-run totals documented: 164+68 orbits, 1197362269604214277200 vertices, stabilizer spot values present");
}
