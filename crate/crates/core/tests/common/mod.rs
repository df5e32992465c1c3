#![allow(dead_code)]

//! Shared test helpers: fixture loading, a division-based brute-force
//! dimension oracle, randomized toy meshes, and a boundary-component
//! counter for subcomplexes.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

use sas_core::exactalg::{
    monomial_basis, monomial_count, rat, Exp, Form, Poly, RatMatrix, Rational,
};
use sas_core::generic::PrimeDescriptor;
use sas_core::mesh::{
    BoundaryRef, EdgeDoc, FaceDoc, Mesh, MeshDocument, RationalText, ValidatedMesh, VertexDoc,
};

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load_fixture(name: &str) -> ValidatedMesh {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    let mesh = Mesh::parse_json(&text).expect("fixture parses");
    let report = mesh.validate();
    assert!(report.all_passed(), "{name} failed validation:\n{report}");
    ValidatedMesh::new(mesh).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force oracle: pairwise division with remainder

fn grlex_leading(p: &Poly) -> (Exp, Rational) {
    p.terms()
        .max_by(|(e1, _), (e2, _)| {
            let d1 = e1.0 + e1.1 + e1.2;
            let d2 = e2.0 + e2.1 + e2.2;
            d1.cmp(&d2).then(e1.cmp(e2))
        })
        .map(|(e, c)| (*e, c.clone()))
        .expect("nonzero polynomial")
}

/// Remainder of `p` under division by the single divisor `g` with respect
/// to graded lex order.
fn poly_rem(p: &Poly, g: &Poly) -> Poly {
    let (glt, glc) = grlex_leading(g);
    let mut rem = Poly::zero();
    let mut work = p.clone();
    while !work.is_zero() {
        let (lt, lc) = grlex_leading(&work);
        if lt.0 >= glt.0 && lt.1 >= glt.1 && lt.2 >= glt.2 {
            let q = Poly::monomial((lt.0 - glt.0, lt.1 - glt.1, lt.2 - glt.2), &lc / &glc);
            work = work.sub(&q.mul(g));
        } else {
            rem.add_term(lt, lc.clone());
            work = work.sub(&Poly::monomial(lt, lc));
        }
    }
    rem
}

/// Independent dimension count: unknowns are the face coefficient vectors;
/// for every interior edge the remainder of the face difference under
/// division by `G^{r+1}` must vanish coefficient-wise.  No cofactor
/// variables, no incidence matrices; the kernel is extracted from the plain
/// rational reduced echelon form.
pub fn oracle_spline_dim(mesh: &ValidatedMesh, r: u32, d: u32) -> u64 {
    let nd = monomial_count(d);
    let nf = mesh.phi2();
    let flank = mesh.interior_edge_faces();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (pos, &ei) in mesh.interior_edges().iter().enumerate() {
        let gpow = mesh.edges()[ei].form.pow(r + 1).poly().clone();
        // Remainder of each degree-d monomial.
        let rems: Vec<Poly> = monomial_basis(d)
            .into_iter()
            .map(|m| poly_rem(&Poly::monomial(m, rat(1)), &gpow))
            .collect();
        let (fp, fneg) = flank[pos];
        // One constraint row per monomial appearing in any remainder.
        let mut support: Vec<Exp> = Vec::new();
        for rp in &rems {
            for (e, _) in rp.terms() {
                if !support.contains(e) {
                    support.push(*e);
                }
            }
        }
        for target in support {
            let mut row = vec![Rational::zero(); nf * nd];
            for (k, rp) in rems.iter().enumerate() {
                let c = rp.coeff(target);
                if !c.is_zero() {
                    row[fp * nd + k] += &c;
                    row[fneg * nd + k] -= &c;
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return (nf * nd) as u64;
    }
    let mat = RatMatrix::from_rows(rows);
    mat.kernel_basis().len() as u64
}

// ---------------------------------------------------------------------------
// Random toy meshes

fn rt(q: Rational) -> RationalText {
    RationalText(q)
}

fn line_through(p: &[Rational; 3], q: &[Rational; 3]) -> Form {
    // Cross product of the homogeneous coordinates.
    let a = &p[1] * &q[2] - &p[2] * &q[1];
    let b = &p[2] * &q[0] - &p[0] * &q[2];
    let c = &p[0] * &q[1] - &p[1] * &q[0];
    let mut f = Form::zero();
    for (i, coef) in [a, b, c].into_iter().enumerate() {
        if !coef.is_zero() {
            f = f.add(&Form::variable(i).scale(&coef));
        }
    }
    f.normalized()
}

/// Random conic through two points, with nonzero gradient at both.
fn conic_through(rng: &mut StdRng, p: &[Rational; 3], q: &[Rational; 3]) -> Form {
    let monos = monomial_basis(2);
    loop {
        // Basis of the conics through p and q: kernel of the 2x6
        // evaluation matrix.
        let eval_row = |pt: &[Rational; 3]| -> Vec<Rational> {
            monos
                .iter()
                .map(|&(a, b, c)| {
                    let mut v = rat(1);
                    for _ in 0..a {
                        v *= &pt[0];
                    }
                    for _ in 0..b {
                        v *= &pt[1];
                    }
                    for _ in 0..c {
                        v *= &pt[2];
                    }
                    v
                })
                .collect()
        };
        let mat = RatMatrix::from_rows(vec![eval_row(p), eval_row(q)]);
        let basis = mat.kernel_basis();
        let mut coeffs = vec![Rational::zero(); monos.len()];
        for v in &basis {
            let w = rat(rng.gen_range(-3i64..=3));
            for (c, x) in coeffs.iter_mut().zip(v) {
                *c += x * &w;
            }
        }
        let mut f = Form::zero();
        for (m, c) in monos.iter().zip(&coeffs) {
            if !c.is_zero() {
                f = f.add(&Form::monomial(*m, c.clone()));
            }
        }
        if f.is_zero() || f.degree() != 2 {
            continue;
        }
        let gp = f.gradient_at(p);
        let gq = f.gradient_at(q);
        if gp.iter().all(Rational::is_zero) || gq.iter().all(Rational::is_zero) {
            continue;
        }
        return f.normalized();
    }
}

fn edge_form(rng: &mut StdRng, p: &[Rational; 3], q: &[Rational; 3]) -> Form {
    if rng.gen_bool(0.5) {
        line_through(p, q)
    } else {
        conic_through(rng, p, q)
    }
}

fn coords(x: i64, y: i64) -> [Rational; 3] {
    [rat(x), rat(y), rat(1)]
}

/// Strip mesh: `k + 1` faces side by side, separated by `k` interior edges
/// running from the top boundary line to the bottom boundary line.
pub fn random_strip_mesh(rng: &mut StdRng, k: usize) -> Mesh {
    assert!((1..=2).contains(&k));
    let xs: Vec<i64> = match k {
        1 => vec![rng.gen_range(-1..=1)],
        _ => {
            let a = rng.gen_range(-2..=-1);
            let b = rng.gen_range(1..=2);
            vec![a, b]
        }
    };
    let mut vertices = vec![
        VertexDoc { id: "lt".into(), point: [rt(rat(-4)), rt(rat(1))], interior: false },
        VertexDoc { id: "lb".into(), point: [rt(rat(-4)), rt(rat(-1))], interior: false },
        VertexDoc { id: "rt".into(), point: [rt(rat(4)), rt(rat(1))], interior: false },
        VertexDoc { id: "rb".into(), point: [rt(rat(4)), rt(rat(-1))], interior: false },
    ];
    for (i, &x) in xs.iter().enumerate() {
        vertices.push(VertexDoc {
            id: format!("t{i}"),
            point: [rt(rat(x)), rt(rat(1))],
            interior: false,
        });
        vertices.push(VertexDoc {
            id: format!("b{i}"),
            point: [rt(rat(x)), rt(rat(-1))],
            interior: false,
        });
    }
    let mut edges = Vec::new();
    // Interior separators.
    for (i, &x) in xs.iter().enumerate() {
        let f = edge_form(rng, &coords(x, 1), &coords(x, -1));
        edges.push(EdgeDoc {
            id: format!("e{i}"),
            form: Some(f.to_string()),
            curve: None,
            tail: format!("t{i}"),
            head: format!("b{i}"),
            interior: true,
        });
    }
    // Boundary walls and segments.
    let top_ids: Vec<String> = std::iter::once("lt".to_string())
        .chain((0..k).map(|i| format!("t{i}")))
        .chain(std::iter::once("rt".to_string()))
        .collect();
    let bot_ids: Vec<String> = std::iter::once("lb".to_string())
        .chain((0..k).map(|i| format!("b{i}")))
        .chain(std::iter::once("rb".to_string()))
        .collect();
    for w in 0..=k {
        edges.push(EdgeDoc {
            id: format!("top{w}"),
            form: Some("y - z".into()),
            curve: None,
            tail: top_ids[w].clone(),
            head: top_ids[w + 1].clone(),
            interior: false,
        });
        edges.push(EdgeDoc {
            id: format!("bot{w}"),
            form: Some("y + z".into()),
            curve: None,
            tail: bot_ids[w].clone(),
            head: bot_ids[w + 1].clone(),
            interior: false,
        });
    }
    edges.push(EdgeDoc {
        id: "wl".into(),
        form: Some("x + 4*z".into()),
        curve: None,
        tail: "lb".into(),
        head: "lt".into(),
        interior: false,
    });
    edges.push(EdgeDoc {
        id: "wr".into(),
        form: Some("x - 4*z".into()),
        curve: None,
        tail: "rt".into(),
        head: "rb".into(),
        interior: false,
    });
    // Faces: leftmost, middles, rightmost, all counterclockwise.
    let mut faces = Vec::new();
    for f in 0..=k {
        let mut boundary = Vec::new();
        // Bottom left-to-right.
        boundary.push(BoundaryRef { edge: format!("bot{f}"), sign: 1 });
        // Right side upward: interior edge f (t->b reversed) or right wall.
        if f < k {
            boundary.push(BoundaryRef { edge: format!("e{f}"), sign: -1 });
        } else {
            boundary.push(BoundaryRef { edge: "wr".into(), sign: -1 });
        }
        // Top right-to-left.
        boundary.push(BoundaryRef { edge: format!("top{f}"), sign: -1 });
        // Left side downward.
        if f > 0 {
            boundary.push(BoundaryRef { edge: format!("e{}", f - 1), sign: 1 });
        } else {
            boundary.push(BoundaryRef { edge: "wl".into(), sign: -1 });
        }
        faces.push(FaceDoc { id: format!("f{f}"), boundary });
    }
    Mesh::from_document(MeshDocument { vertices, edges, faces }).expect("strip mesh builds")
}

/// Pie mesh: three faces around one interior vertex at the origin.
pub fn random_pie_mesh(rng: &mut StdRng) -> Mesh {
    let center = coords(0, 0);
    let outer = [coords(3, 0), coords(-2, 2), coords(-2, -2)];
    let vertices = vec![
        VertexDoc { id: "c".into(), point: [rt(rat(0)), rt(rat(0))], interior: true },
        VertexDoc { id: "s0".into(), point: [rt(rat(3)), rt(rat(0))], interior: false },
        VertexDoc { id: "s1".into(), point: [rt(rat(-2)), rt(rat(2))], interior: false },
        VertexDoc { id: "s2".into(), point: [rt(rat(-2)), rt(rat(-2))], interior: false },
    ];
    let mut edges = Vec::new();
    for i in 0..3 {
        let f = edge_form(rng, &center, &outer[i]);
        edges.push(EdgeDoc {
            id: format!("sp{i}"),
            form: Some(f.to_string()),
            curve: None,
            tail: "c".into(),
            head: format!("s{i}"),
            interior: true,
        });
    }
    for i in 0..3 {
        let j = (i + 1) % 3;
        let f = line_through(&outer[i], &outer[j]);
        edges.push(EdgeDoc {
            id: format!("bd{i}"),
            form: Some(f.to_string()),
            curve: None,
            tail: format!("s{i}"),
            head: format!("s{j}"),
            interior: false,
        });
    }
    let faces = (0..3)
        .map(|i| {
            let j = (i + 1) % 3;
            FaceDoc {
                id: format!("f{i}"),
                boundary: vec![
                    BoundaryRef { edge: format!("sp{i}"), sign: 1 },
                    BoundaryRef { edge: format!("bd{i}"), sign: 1 },
                    BoundaryRef { edge: format!("sp{j}"), sign: -1 },
                ],
            }
        })
        .collect();
    Mesh::from_document(MeshDocument { vertices, edges, faces }).expect("pie mesh builds")
}

// ---------------------------------------------------------------------------
// Boundary components of a subcomplex

/// Count the boundary components of a subcomplex: connected components of
/// the closure cells that are not members.  For contractible subcomplexes
/// this is 1, and in general it equals `2 - euler_characteristic`.
pub fn boundary_components(
    mesh: &ValidatedMesh,
    prime: &PrimeDescriptor,
    seed_face: usize,
    tol: f64,
) -> usize {
    let sub = sas_core::generic::subcomplex(mesh, prime, seed_face, tol);
    // Closure cells of the member faces.
    let mut closure_edges: Vec<usize> = Vec::new();
    let mut closure_vertices: Vec<usize> = Vec::new();
    for fid in &sub.faces {
        let fi = mesh.face_index(fid).unwrap();
        for &(ei, _) in &mesh.faces()[fi].boundary {
            if !closure_edges.contains(&ei) {
                closure_edges.push(ei);
            }
            for v in [mesh.edges()[ei].tail, mesh.edges()[ei].head] {
                if !closure_vertices.contains(&v) {
                    closure_vertices.push(v);
                }
            }
        }
    }
    let member_edge: Vec<usize> = sub
        .edges
        .iter()
        .map(|id| mesh.edge_index(id).unwrap())
        .collect();
    let member_vertex: Vec<usize> = sub
        .vertices
        .iter()
        .map(|id| mesh.vertex_index(id).unwrap())
        .collect();
    let bd_edges: Vec<usize> = closure_edges
        .into_iter()
        .filter(|e| !member_edge.contains(e))
        .collect();
    let bd_vertices: Vec<usize> = closure_vertices
        .into_iter()
        .filter(|v| !member_vertex.contains(v))
        .collect();
    // Union-find over boundary vertices along boundary edges.
    let mut parent: BTreeMap<usize, usize> =
        bd_vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = parent[&x];
        if p == x {
            x
        } else {
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
    }
    for &e in &bd_edges {
        let a = mesh.edges()[e].tail;
        let b = mesh.edges()[e].head;
        if parent.contains_key(&a) && parent.contains_key(&b) {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            parent.insert(ra, rb);
        }
    }
    let roots: std::collections::BTreeSet<usize> = bd_vertices
        .iter()
        .map(|&v| find(&mut parent, v))
        .collect();
    roots.len()
}
