//! Property and invariant tests: exactness of the polynomial arithmetic,
//! agreement of the two elimination strategies, mesh invariants on the
//! shipped fixtures, Hilbert post-processing laws, and the subcomplex
//! topology cross-checks.

mod common;

use common::{boundary_components, load_fixture};
use proptest::prelude::*;

use sas_core::exactalg::{
    dim_sd, monomial_basis, parse_form, rat, Form, RatMatrix, Rational,
};
use sas_core::generic::{self, GenericityOptions};
use sas_core::hilbert;
use sas_core::homology;
use sas_core::mesh::Mesh;
use sas_core::net::{self, NetSpec};
use sas_core::splinespace;

// ---------------------------------------------------------------------------
// Polynomial arithmetic

fn small_form(degree: u32) -> impl Strategy<Value = Form> {
    let monos = monomial_basis(degree);
    proptest::collection::vec(-4i64..=4, monos.len()).prop_map(move |coeffs| {
        let mut f = Form::zero();
        for (m, c) in monos.iter().zip(coeffs) {
            if c != 0 {
                f = f.add(&Form::monomial(*m, rat(c)));
            }
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributivity_and_degrees(
        a in small_form(2),
        b in small_form(2),
        c in small_form(3),
    ) {
        let left = a.add(&b).mul(&c);
        let right = a.mul(&c).add(&b.mul(&c));
        prop_assert_eq!(left, right);
        if !a.is_zero() && !c.is_zero() {
            prop_assert_eq!(a.mul(&c).degree(), a.degree() + c.degree());
        }
    }

    #[test]
    fn parse_print_round_trip(f in small_form(3)) {
        let printed = f.to_string();
        prop_assert_eq!(parse_form(&printed).unwrap(), f);
    }
}

// ---------------------------------------------------------------------------
// Linear algebra

fn small_matrix() -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-9i64..=9, 100).prop_map(|entries| {
        let rows: Vec<Vec<Rational>> = entries
            .chunks(10)
            .map(|chunk| chunk.iter().map(|&x| rat(x)).collect())
            .collect();
        RatMatrix::from_rows(rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elimination_strategies_agree(m in small_matrix()) {
        // Fraction-free and plain rational elimination: identical ranks.
        prop_assert_eq!(m.rank(), m.rank_rational());
    }

    #[test]
    fn rank_nullity_and_kernel_exactness(m in small_matrix()) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            let image = m.apply(v);
            prop_assert!(image.iter().all(num_traits::Zero::is_zero));
        }
    }
}

// ---------------------------------------------------------------------------
// Mesh invariants on all fixtures

const FIXTURES: [&str; 4] = [
    "fig1.json",
    "altered.json",
    "net_ms.json",
    "net_ms_perturbed.json",
];

#[test]
fn fixtures_satisfy_euler_and_boundary_composition() {
    for name in FIXTURES {
        let vm = load_fixture(name);
        assert_eq!(
            vm.phi2() as i64 - vm.phi1() as i64 + vm.phi0() as i64,
            1,
            "{name}"
        );
        let d1 = vm.boundary_matrix_1();
        let d2 = vm.boundary_matrix_2();
        for i in 0..d1.rows() {
            for j in 0..d2.cols() {
                let mut acc = rat(0);
                for k in 0..d1.cols() {
                    acc += d1.at(i, k) * d2.at(k, j);
                }
                assert_eq!(acc, rat(0), "{name}: d1*d2 != 0");
            }
        }
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for name in FIXTURES {
        let vm = load_fixture(name);
        let re = Mesh::parse_json(&vm.mesh().to_json()).unwrap();
        assert_eq!(&re, vm.mesh(), "{name}");
    }
}

#[test]
fn fig1_counts_and_boundary_shapes() {
    let fig1 = load_fixture("fig1.json");
    assert_eq!((fig1.phi0(), fig1.phi1(), fig1.phi2()), (2, 9, 8));
    let d2 = fig1.boundary_matrix_2();
    assert_eq!((d2.rows(), d2.cols()), (9, 8));
    let d1 = fig1.boundary_matrix_1();
    assert_eq!((d1.rows(), d1.cols()), (2, 9));
}

#[test]
fn fig1_central_star() {
    let fig1 = load_fixture("fig1.json");
    let star = fig1.star("M").unwrap();
    assert_eq!(star.faces, vec!["s2".to_string(), "s8".to_string()]);
    assert!(star.vertices.contains(&"vl".to_string()));
    assert!(star.vertices.contains(&"vr".to_string()));
    assert_eq!(fig1.star_interior_degree_sum("M").unwrap(), 9);
    // Boundary edges are rejected.
    assert!(fig1.star("bl").is_err());
}

#[test]
fn net_mesh_carries_the_printed_conics() {
    let ms = load_fixture("net_ms.json");
    assert_eq!(ms.phi1(), 9);
    let b = ms.edge_index("b").unwrap();
    assert_eq!(
        ms.edges()[b].form,
        parse_form("3*x^2 - x*z + y^2 - 3*y*z").unwrap()
    );
    for &ei in ms.interior_edges() {
        assert_eq!(ms.edges()[ei].form.degree(), 2);
    }
}

#[test]
fn annulus_fails_euler_check() {
    // Two concentric squares; four trapezoid faces; the hole removes
    // contractibility.
    let text = r#"{
      "vertices": [
        {"id": "a0", "point": [-2, -2], "interior": false},
        {"id": "a1", "point": [2, -2], "interior": false},
        {"id": "a2", "point": [2, 2], "interior": false},
        {"id": "a3", "point": [-2, 2], "interior": false},
        {"id": "b0", "point": [-1, -1], "interior": false},
        {"id": "b1", "point": [1, -1], "interior": false},
        {"id": "b2", "point": [1, 1], "interior": false},
        {"id": "b3", "point": [-1, 1], "interior": false}
      ],
      "edges": [
        {"id": "o0", "form": "y + 2*z", "tail": "a0", "head": "a1", "interior": false},
        {"id": "o1", "form": "x - 2*z", "tail": "a1", "head": "a2", "interior": false},
        {"id": "o2", "form": "y - 2*z", "tail": "a2", "head": "a3", "interior": false},
        {"id": "o3", "form": "x + 2*z", "tail": "a3", "head": "a0", "interior": false},
        {"id": "i0", "form": "y + z", "tail": "b0", "head": "b1", "interior": false},
        {"id": "i1", "form": "x - z", "tail": "b1", "head": "b2", "interior": false},
        {"id": "i2", "form": "y - z", "tail": "b2", "head": "b3", "interior": false},
        {"id": "i3", "form": "x + z", "tail": "b3", "head": "b0", "interior": false},
        {"id": "d0", "form": "x - y", "tail": "a0", "head": "b0", "interior": true},
        {"id": "d1", "form": "x + y", "tail": "a1", "head": "b1", "interior": true},
        {"id": "d2", "form": "x - y", "tail": "a2", "head": "b2", "interior": true},
        {"id": "d3", "form": "x + y", "tail": "a3", "head": "b3", "interior": true}
      ],
      "faces": [
        {"id": "f0", "boundary": [
          {"edge": "o0", "sign": 1}, {"edge": "d1", "sign": 1},
          {"edge": "i0", "sign": -1}, {"edge": "d0", "sign": -1}]},
        {"id": "f1", "boundary": [
          {"edge": "o1", "sign": 1}, {"edge": "d2", "sign": 1},
          {"edge": "i1", "sign": -1}, {"edge": "d1", "sign": -1}]},
        {"id": "f2", "boundary": [
          {"edge": "o2", "sign": 1}, {"edge": "d3", "sign": 1},
          {"edge": "i2", "sign": -1}, {"edge": "d2", "sign": -1}]},
        {"id": "f3", "boundary": [
          {"edge": "o3", "sign": 1}, {"edge": "d0", "sign": 1},
          {"edge": "i3", "sign": -1}, {"edge": "d3", "sign": -1}]}
      ]
    }"#;
    let mesh = Mesh::parse_json(text).unwrap();
    let report = mesh.validate();
    assert!(!report.euler.passed(), "annulus must fail the Euler check");
}

#[test]
fn flipped_sign_fails_incidence() {
    let text = std::fs::read_to_string(common::fixture_path("fig1.json")).unwrap();
    let flipped = text.replacen(
        "{ \"edge\": \"M\", \"sign\": 1 }",
        "{ \"edge\": \"M\", \"sign\": -1 }",
        1,
    );
    assert_ne!(text, flipped);
    let mesh = Mesh::parse_json(&flipped).unwrap();
    let report = mesh.validate();
    assert!(!report.edge_face_incidence.passed());
}

// ---------------------------------------------------------------------------
// One-face and two-face toy checks from the operation contracts

#[test]
fn single_face_mesh_has_no_constraints() {
    let text = r#"{
      "vertices": [
        {"id": "p0", "point": [0, 0], "interior": false},
        {"id": "p1", "point": [1, 0], "interior": false},
        {"id": "p2", "point": [0, 1], "interior": false}
      ],
      "edges": [
        {"id": "e0", "form": "y", "tail": "p0", "head": "p1", "interior": false},
        {"id": "e1", "form": "x + y - z", "tail": "p1", "head": "p2", "interior": false},
        {"id": "e2", "form": "x", "tail": "p2", "head": "p0", "interior": false}
      ],
      "faces": [
        {"id": "f", "boundary": [
          {"edge": "e0", "sign": 1}, {"edge": "e1", "sign": 1}, {"edge": "e2", "sign": 1}]}
      ]
    }"#;
    let vm = sas_core::mesh::ValidatedMesh::new(Mesh::parse_json(text).unwrap()).unwrap();
    assert_eq!((vm.phi0(), vm.phi1(), vm.phi2()), (0, 0, 1));
    for (r, d) in [(0u32, 3u32), (2, 1), (1, 0)] {
        assert_eq!(splinespace::spline_dim(&vm, r, d), dim_sd(d));
    }
    assert_eq!(splinespace::hf_table(&vm, 0, 3), vec![1, 3, 6, 10]);
}

#[test]
fn two_faces_one_line_edge() {
    // One interior line edge, no interior vertices: the dimension is
    // dim S_d plus the cofactor count.
    let mut rng = rand::SeedableRng::seed_from_u64(7);
    let mesh = common::random_strip_mesh(&mut rng, 1);
    let report = mesh.validate();
    assert!(report.all_passed(), "{report}");
    let vm = sas_core::mesh::ValidatedMesh::new(mesh).unwrap();
    let d2 = vm.boundary_matrix_2();
    assert_eq!((d2.rows(), d2.cols()), (1, 2));
    assert_eq!(d2.at(0, 0) * d2.at(0, 1), rat(-1));
    let d1 = vm.boundary_matrix_1();
    assert_eq!((d1.rows(), d1.cols()), (0, 1));
    let n = vm.edges()[vm.interior_edges()[0]].form.degree();
    if n == 1 {
        // Matches the hand count (2-1)*3 + 1 = 4 at r=0, d=1.
        assert_eq!(splinespace::spline_dim(&vm, 0, 1), 4);
    }
    let star = vm.star(&vm.edges()[vm.interior_edges()[0]].id.clone()).unwrap();
    assert_eq!(star.faces.len(), 2);
}

// ---------------------------------------------------------------------------
// Hilbert post-processing laws on fixture data

#[test]
fn hilbert_laws_on_fixture_rows() {
    let fig1 = load_fixture("fig1.json");
    for r in 0..=2u32 {
        let cap = 4 * r + 10;
        let values = splinespace::hf_table(&fig1, r, cap);
        let hp = hilbert::fit_hp(&values, 4).unwrap();
        let post = hilbert::postulation(&values, &hp);
        for d in 0..values.len() as i64 {
            let agree = hp.eval(d) == rat(values[d as usize] as i64);
            assert_eq!(agree, d > post, "r={r} d={d}");
        }
        // Numerator reconstructs the table.
        let p = hilbert::series_numerator(&values, &hp).unwrap();
        let expanded = hilbert::expand_series(&p, values.len());
        for (d, v) in values.iter().enumerate() {
            assert_eq!(expanded[d], num_bigint::BigInt::from(*v), "r={r} d={d}");
        }
        // Fit is stable under extending the table.
        let longer = splinespace::hf_table(&fig1, r, cap + 3);
        assert_eq!(hilbert::fit_hp(&longer, 4).unwrap(), hp, "r={r}");
    }
}

// ---------------------------------------------------------------------------
// Net transform vs direct fit

#[test]
fn hp_transform_agrees_with_fitting() {
    let ms = load_fixture("net_ms.json");
    let netspec =
        NetSpec::parse_json(&std::fs::read_to_string(common::fixture_path("net.json")).unwrap())
            .unwrap();
    let (img, _) = net::image_mesh(&ms, &netspec).unwrap();
    let img = sas_core::mesh::ValidatedMesh::new(img).unwrap();
    let image_hf = splinespace::hf_table(&img, 1, 7);
    let image_hp = hilbert::fit_hp(&image_hf, 4).unwrap();
    let (transformed, _) = net::hp_transform(&image_hp, 2, None);
    let direct = splinespace::hf_table(&ms, 1, 12);
    let fitted = hilbert::fit_hp(&direct, 4).unwrap();
    assert_eq!(transformed, fitted);
}

#[test]
fn rectilinear_identity_net_is_transparent() {
    // A straight-line mesh mapped through the coordinate net comes back
    // unchanged.
    let text = r#"{
      "vertices": [
        {"id": "lt", "point": [-2, 1], "interior": false},
        {"id": "lb", "point": [-2, -1], "interior": false},
        {"id": "mt", "point": [0, 1], "interior": false},
        {"id": "mb", "point": [0, -1], "interior": false},
        {"id": "rt", "point": [2, 1], "interior": false},
        {"id": "rb", "point": [2, -1], "interior": false}
      ],
      "edges": [
        {"id": "mid", "form": "x", "tail": "mt", "head": "mb", "interior": true},
        {"id": "t0", "form": "y - z", "tail": "lt", "head": "mt", "interior": false},
        {"id": "t1", "form": "y - z", "tail": "mt", "head": "rt", "interior": false},
        {"id": "b0", "form": "y + z", "tail": "lb", "head": "mb", "interior": false},
        {"id": "b1", "form": "y + z", "tail": "mb", "head": "rb", "interior": false},
        {"id": "wl", "form": "x + 2*z", "tail": "lb", "head": "lt", "interior": false},
        {"id": "wr", "form": "x - 2*z", "tail": "rt", "head": "rb", "interior": false}
      ],
      "faces": [
        {"id": "f0", "boundary": [
          {"edge": "b0", "sign": 1}, {"edge": "mid", "sign": -1},
          {"edge": "t0", "sign": -1}, {"edge": "wl", "sign": -1}]},
        {"id": "f1", "boundary": [
          {"edge": "b1", "sign": 1}, {"edge": "wr", "sign": -1},
          {"edge": "t1", "sign": -1}, {"edge": "mid", "sign": 1}]}
      ]
    }"#;
    let vm = sas_core::mesh::ValidatedMesh::new(Mesh::parse_json(text).unwrap()).unwrap();
    let identity = NetSpec::new(
        parse_form("x").unwrap(),
        parse_form("y").unwrap(),
        parse_form("z").unwrap(),
    )
    .unwrap();
    let (img, warnings) = net::image_mesh(&vm, &identity).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(&img, vm.mesh());
}

// ---------------------------------------------------------------------------
// Subcomplex topology cross-checks

#[test]
fn contractibility_matches_boundary_component_count() {
    let opts = GenericityOptions::default();
    for name in FIXTURES {
        let vm = load_fixture(name);
        let primes = generic::enumerate_relevant_primes(&vm, opts.tol);
        for prime in &primes {
            let mut seen = std::collections::BTreeSet::new();
            for seed in 0..vm.phi2() {
                if seen.contains(&seed) {
                    continue;
                }
                let sub = generic::subcomplex(&vm, prime, seed, opts.tol);
                for f in &sub.faces {
                    seen.insert(vm.face_index(f).unwrap());
                }
                let chi = sub.euler_characteristic();
                let c = boundary_components(&vm, prime, seed, opts.tol) as i64;
                assert_eq!(c, 2 - chi, "{name}: {} seed {seed}", prime.key());
            }
        }
    }
}

#[test]
fn subcomplex_classes_partition_faces() {
    let opts = GenericityOptions::default();
    let fig1 = load_fixture("fig1.json");
    for prime in generic::enumerate_relevant_primes(&fig1, opts.tol) {
        let mut counts = vec![0usize; fig1.phi2()];
        for seed in 0..fig1.phi2() {
            let sub = generic::subcomplex(&fig1, &prime, seed, opts.tol);
            assert!(sub.faces.contains(&fig1.faces()[seed].id));
            for f in &sub.faces {
                counts[fig1.face_index(f).unwrap()] += 1;
            }
        }
        // Every face appears exactly class-size many times, i.e. the
        // classes partition the face set.
        for (fi, &count) in counts.iter().enumerate() {
            let sub = generic::subcomplex(&fig1, &prime, fi, opts.tol);
            assert_eq!(count, sub.faces.len(), "{}", prime.key());
        }
    }
}

#[test]
fn fig1_known_subcomplexes() {
    let opts = GenericityOptions::default();
    let fig1 = load_fixture("fig1.json");
    // The downward parabola: classes {s1,s2,s3}, {s4,s5}, {s6,s7}, {s8}.
    let down = generic::PrimeDescriptor::Curve {
        form: parse_form("y*z + x^2 - z^2").unwrap().normalized(),
    };
    let s1 = fig1.face_index("s1").unwrap();
    let sub = generic::subcomplex(&fig1, &down, s1, opts.tol);
    assert_eq!(
        sub.faces.iter().cloned().collect::<Vec<_>>(),
        vec!["s1", "s2", "s3"]
    );
    assert_eq!(sub.edges.len(), 2);
    assert_eq!(sub.euler_characteristic(), 1);
    let s8 = fig1.face_index("s8").unwrap();
    let sub8 = generic::subcomplex(&fig1, &down, s8, opts.tol);
    assert_eq!(sub8.faces.iter().cloned().collect::<Vec<_>>(), vec!["s8"]);

    // The ideal of the left interior vertex: everything, contractible.
    let vl_prime = generic::PrimeDescriptor::Point {
        point: [
            num_complex::Complex64::new(-1.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(1.0, 0.0),
        ],
        exact: Some([rat(-1), rat(0), rat(1)]),
        numeric: false,
    };
    let sub_v = generic::subcomplex(&fig1, &vl_prime, s1, opts.tol);
    assert_eq!(sub_v.faces.len(), 8);
    assert_eq!(sub_v.edges.len(), 9);
    assert_eq!(sub_v.vertices.len(), 2);
    assert_eq!(sub_v.euler_characteristic(), 1);
}

// ---------------------------------------------------------------------------
// Generic-mesh extras

#[test]
fn h0_vanishes_at_certified_degrees_low_r() {
    let altered = load_fixture("altered.json");
    for r in 0..=1u32 {
        let bound = generic::regularity_bound(&altered, r);
        let d = bound.d_max as u32 - 2;
        let (h0, _) = homology::h0_h1(&altered, r, d);
        assert_eq!(h0, 0, "r={r} d={d}");
    }
}

#[test]
fn arcs_and_tangent_counts_on_altered() {
    let altered = load_fixture("altered.json");
    assert_eq!(generic::arcs_at_vertices(&altered), vec![5, 5]);
}

#[test]
fn tree_reduction_matches_full_matrix() {
    // The structural unit-pivot elimination of the face blocks must agree
    // with the kernel dimension of the fully assembled system.
    let fig1 = load_fixture("fig1.json");
    for (r, d) in [(0u32, 0u32), (0, 2), (0, 4), (1, 5), (2, 7)] {
        assert_eq!(
            splinespace::spline_dim(&fig1, r, d),
            splinespace::spline_dim_full_matrix(&fig1, r, d),
            "r={r} d={d}"
        );
    }
    let ms = load_fixture("net_ms.json");
    for (r, d) in [(1u32, 4u32), (1, 6)] {
        assert_eq!(
            splinespace::spline_dim(&ms, r, d),
            splinespace::spline_dim_full_matrix(&ms, r, d),
            "net r={r} d={d}"
        );
    }
}
