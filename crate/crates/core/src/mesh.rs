//! Cell-complex data model: vertices, oriented edges carrying edge forms,
//! faces with signed boundary cycles, validation, and boundary-map
//! incidence data.
//!
//! A mesh is valid when its face cycles close up, every interior edge lies
//! in exactly two face boundaries with opposite induced signs, the face
//! graph is connected and hereditary, the composed boundary maps vanish,
//! the interior cell counts satisfy the Euler relation of a contractible
//! support, and every edge form vanishes at its endpoints with a nonzero
//! gradient there (smooth branch).  Downstream computations only accept a
//! [`ValidatedMesh`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{homogenize, parse_polynomial, rat, Form, FormError, RatMatrix, Rational};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("polynomial error in `{context}`: {source}")]
    Form { context: String, source: FormError },
    #[error("dangling reference: {kind} `{id}` is not declared")]
    DanglingReference { kind: &'static str, id: String },
    #[error("mesh failed validation; offending checks: {0}")]
    NotValidated(String),
    #[error("edge `{0}` is not an interior edge")]
    NotInteriorEdge(String),
    #[error("vertex `{0}` is not an interior vertex")]
    NotInteriorVertex(String),
    #[error("unknown cell id `{0}`")]
    UnknownId(String),
}

/// 0-cell with exact affine coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub point: (Rational, Rational),
    pub interior: bool,
}

/// Oriented 1-cell.  The underlying curve is the zero set of `form`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub form: Form,
    pub tail: usize,
    pub head: usize,
    pub interior: bool,
}

/// 2-cell with a signed boundary cycle.  Sign +1 means the cycle traverses
/// the edge from tail to head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub boundary: Vec<(usize, i8)>,
}

/// The mesh.  Cells are stored sorted by id, so all derived matrices and
/// tables are reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    interior_vertices: Vec<usize>,
    interior_edges: Vec<usize>,
}

// ---------------------------------------------------------------------------
// JSON document form

/// Rational that serializes as a JSON integer when possible and as a
/// string like "3/11" otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let q = &self.0;
        if q.is_integer() {
            if let Some(i) = q.numer().to_i64() {
                return s.serialize_i64(i);
            }
        }
        s.serialize_str(&q.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(RationalText(rat(i)))
                } else {
                    Err(D::Error::custom(format!(
                        "number {n} is not an exact integer; write rationals as strings"
                    )))
                }
            }
            serde_json::Value::String(s) => {
                let parts: Vec<&str> = s.split('/').collect();
                let parse_int = |t: &str| -> Result<BigInt, D::Error> {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|e| D::Error::custom(format!("bad rational `{s}`: {e}")))
                };
                match parts.as_slice() {
                    [n] => Ok(RationalText(Rational::from_integer(parse_int(n)?))),
                    [n, dstr] => {
                        let den = parse_int(dstr)?;
                        if den.is_zero() {
                            return Err(D::Error::custom("zero denominator"));
                        }
                        Ok(RationalText(Rational::new(parse_int(n)?, den)))
                    }
                    _ => Err(D::Error::custom(format!("bad rational `{s}`"))),
                }
            }
            other => Err(D::Error::custom(format!(
                "expected number or rational string, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    pub point: [RationalText; 2],
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    /// Homogeneous form in `x, y, z`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    /// Affine curve equation in `x, y`; homogenized on load.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    pub tail: String,
    pub head: String,
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryRef {
    pub edge: String,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceDoc {
    pub id: String,
    pub boundary: Vec<BoundaryRef>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeshDocument {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub faces: Vec<FaceDoc>,
}

impl Mesh {
    /// Parse a mesh from its JSON document text.
    pub fn parse_json(text: &str) -> Result<Mesh, MeshError> {
        let doc: MeshDocument =
            serde_json::from_str(text).map_err(|e| MeshError::Schema(e.to_string()))?;
        Mesh::from_document(doc)
    }

    pub fn from_document(doc: MeshDocument) -> Result<Mesh, MeshError> {
        let mut vertices: Vec<Vertex> = doc
            .vertices
            .into_iter()
            .map(|v| Vertex {
                id: v.id,
                point: (v.point[0].0.clone(), v.point[1].0.clone()),
                interior: v.interior,
            })
            .collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let vidx: BTreeMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        if vidx.len() != vertices.len() {
            return Err(MeshError::Schema("duplicate vertex id".into()));
        }

        let mut edges: Vec<Edge> = Vec::with_capacity(doc.edges.len());
        for e in doc.edges {
            let form = match (&e.form, &e.curve) {
                (Some(f), None) => {
                    crate::exactalg::parse_form(f).map_err(|source| MeshError::Form {
                        context: format!("edge {} form", e.id),
                        source,
                    })?
                }
                (None, Some(c)) => {
                    let poly =
                        parse_polynomial(c, ["x", "y", "z"]).map_err(|source| MeshError::Form {
                            context: format!("edge {} curve", e.id),
                            source,
                        })?;
                    if poly.terms().any(|(&(_, _, zc), _)| zc > 0) {
                        return Err(MeshError::Schema(format!(
                            "edge {}: affine curve must use x, y only",
                            e.id
                        )));
                    }
                    homogenize(&poly)
                }
                _ => {
                    return Err(MeshError::Schema(format!(
                        "edge {}: give exactly one of `form` or `curve`",
                        e.id
                    )))
                }
            };
            let tail = *vidx.get(&e.tail).ok_or(MeshError::DanglingReference {
                kind: "vertex",
                id: e.tail.clone(),
            })?;
            let head = *vidx.get(&e.head).ok_or(MeshError::DanglingReference {
                kind: "vertex",
                id: e.head.clone(),
            })?;
            edges.push(Edge {
                id: e.id,
                form,
                tail,
                head,
                interior: e.interior,
            });
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let eidx: BTreeMap<String, usize> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        if eidx.len() != edges.len() {
            return Err(MeshError::Schema("duplicate edge id".into()));
        }

        let mut faces: Vec<Face> = Vec::with_capacity(doc.faces.len());
        for f in doc.faces {
            let mut boundary = Vec::with_capacity(f.boundary.len());
            for b in &f.boundary {
                if b.sign != 1 && b.sign != -1 {
                    return Err(MeshError::Schema(format!(
                        "face {}: sign must be +1 or -1",
                        f.id
                    )));
                }
                let ei = *eidx.get(&b.edge).ok_or(MeshError::DanglingReference {
                    kind: "edge",
                    id: b.edge.clone(),
                })?;
                boundary.push((ei, b.sign));
            }
            faces.push(Face { id: f.id, boundary });
        }
        faces.sort_by(|a, b| a.id.cmp(&b.id));
        let fids: BTreeSet<&str> = faces.iter().map(|f| f.id.as_str()).collect();
        if fids.len() != faces.len() {
            return Err(MeshError::Schema("duplicate face id".into()));
        }

        let interior_vertices = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.interior)
            .map(|(i, _)| i)
            .collect();
        let interior_edges = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.interior)
            .map(|(i, _)| i)
            .collect();

        Ok(Mesh {
            vertices,
            edges,
            faces,
            interior_vertices,
            interior_edges,
        })
    }

    /// Canonical document: cells sorted by id, forms printed canonically.
    pub fn to_document(&self) -> MeshDocument {
        MeshDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.clone(),
                    point: [
                        RationalText(v.point.0.clone()),
                        RationalText(v.point.1.clone()),
                    ],
                    interior: v.interior,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    form: Some(e.form.to_string()),
                    curve: None,
                    tail: self.vertices[e.tail].id.clone(),
                    head: self.vertices[e.head].id.clone(),
                    interior: e.interior,
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceDoc {
                    id: f.id.clone(),
                    boundary: f
                        .boundary
                        .iter()
                        .map(|&(ei, s)| BoundaryRef {
                            edge: self.edges[ei].id.clone(),
                            sign: s,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("mesh serializes")
    }

    // -- accessors ---------------------------------------------------------

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Indices of interior vertices, in id order.
    pub fn interior_vertices(&self) -> &[usize] {
        &self.interior_vertices
    }

    /// Indices of interior edges, in id order.
    pub fn interior_edges(&self) -> &[usize] {
        &self.interior_edges
    }

    /// Number of interior vertices.
    pub fn phi0(&self) -> usize {
        self.interior_vertices.len()
    }

    /// Number of interior edges.
    pub fn phi1(&self) -> usize {
        self.interior_edges.len()
    }

    /// Number of faces.
    pub fn phi2(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| v.id.as_str().cmp(id))
            .ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.binary_search_by(|f| f.id.as_str().cmp(id)).ok()
    }

    /// Homogeneous coordinates `(x, y, 1)` of a vertex.
    pub fn vertex_coords(&self, v: usize) -> [Rational; 3] {
        [
            self.vertices[v].point.0.clone(),
            self.vertices[v].point.1.clone(),
            rat(1),
        ]
    }

    /// Per-edge list of (face, induced sign) occurrences.
    pub(crate) fn edge_face_signs(&self) -> Vec<Vec<(usize, i8)>> {
        let mut occ: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.edges.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            for &(ei, s) in &f.boundary {
                occ[ei].push((fi, s));
            }
        }
        occ
    }

    // -- validation --------------------------------------------------------

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        // Face boundary cycles close up.
        for f in &self.faces {
            if f.boundary.is_empty() {
                report
                    .cycles_closed
                    .fail(format!("face {} has empty boundary", f.id));
                continue;
            }
            let walk_ends = |&(ei, s): &(usize, i8)| -> (usize, usize) {
                let e = &self.edges[ei];
                if s > 0 {
                    (e.tail, e.head)
                } else {
                    (e.head, e.tail)
                }
            };
            let mut ok = true;
            for w in f.boundary.windows(2) {
                if walk_ends(&w[0]).1 != walk_ends(&w[1]).0 {
                    ok = false;
                }
            }
            let first = walk_ends(&f.boundary[0]).0;
            let last = walk_ends(f.boundary.last().unwrap()).1;
            if first != last {
                ok = false;
            }
            if !ok {
                report
                    .cycles_closed
                    .fail(format!("face {} boundary is not a closed cycle", f.id));
            }
        }

        // (a) incidence counts and opposite induced signs.
        let occ = self.edge_face_signs();
        for (ei, e) in self.edges.iter().enumerate() {
            let o = &occ[ei];
            if e.interior {
                let distinct_faces: BTreeSet<usize> = o.iter().map(|&(f, _)| f).collect();
                let signs: Vec<i8> = o.iter().map(|&(_, s)| s).collect();
                if o.len() != 2 || distinct_faces.len() != 2 || signs.iter().sum::<i8>() != 0 {
                    report.edge_face_incidence.fail(format!(
                        "interior edge {} appears with signs {:?} in faces {:?}",
                        e.id,
                        signs,
                        o.iter()
                            .map(|&(f, _)| self.faces[f].id.as_str())
                            .collect::<Vec<_>>()
                    ));
                }
            } else if o.len() != 1 {
                report.edge_face_incidence.fail(format!(
                    "boundary edge {} appears in {} face boundaries",
                    e.id,
                    o.len()
                ));
            }
        }

        // (b) face-adjacency graph connected (through interior edges).
        if self.faces.is_empty() {
            report.connected.fail("mesh has no faces".into());
        } else {
            let mut seen = vec![false; self.faces.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(f) = queue.pop_front() {
                for &(ei, _) in &self.faces[f].boundary {
                    if !self.edges[ei].interior {
                        continue;
                    }
                    for &(g, _) in &occ[ei] {
                        if !seen[g] {
                            seen[g] = true;
                            queue.push_back(g);
                        }
                    }
                }
            }
            if !seen.iter().all(|&s| s) {
                report
                    .connected
                    .fail("face-adjacency graph is disconnected".into());
            }
        }

        // (c) hereditary: faces around each vertex are edge-connected
        // through faces containing it, via edges incident to it.
        for (vi, v) in self.vertices.iter().enumerate() {
            let around: Vec<usize> = self
                .faces
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    f.boundary
                        .iter()
                        .any(|&(ei, _)| self.edges[ei].tail == vi || self.edges[ei].head == vi)
                })
                .map(|(i, _)| i)
                .collect();
            if around.len() <= 1 {
                continue;
            }
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            let mut queue = VecDeque::from([around[0]]);
            seen.insert(around[0]);
            while let Some(f) = queue.pop_front() {
                for &(ei, _) in &self.faces[f].boundary {
                    let e = &self.edges[ei];
                    if e.tail != vi && e.head != vi {
                        continue;
                    }
                    for &(g, _) in &occ[ei] {
                        if around.contains(&g) && seen.insert(g) {
                            queue.push_back(g);
                        }
                    }
                }
            }
            if seen.len() != around.len() {
                report.hereditary.fail(format!(
                    "faces around vertex {} are not edge-connected",
                    v.id
                ));
            }
        }

        // (d) composed boundary maps vanish.
        let d2 = self.boundary_matrix_2_int();
        let d1 = self.boundary_matrix_1_int();
        let (nv, ne, nf) = (self.phi0(), self.phi1(), self.phi2());
        'outer: for i in 0..nv {
            for j in 0..nf {
                let mut acc = 0i64;
                for k in 0..ne {
                    acc += (d1[i * ne + k] as i64) * (d2[k * nf + j] as i64);
                }
                if acc != 0 {
                    report.boundary_composition.fail("d1 * d2 is nonzero".into());
                    break 'outer;
                }
            }
        }

        // (e) Euler relation for contractible support.
        let chi = nf as i64 - ne as i64 + nv as i64;
        if chi != 1 {
            report.euler.fail(format!(
                "faces - interior edges + interior vertices = {chi}, expected 1"
            ));
        }

        // (f) endpoints lie on the edge curves.
        for e in &self.edges {
            for &vi in [e.tail, e.head].iter() {
                let p = self.vertex_coords(vi);
                if !e.form.evaluate(&p).is_zero() {
                    report.endpoints_on_curves.fail(format!(
                        "vertex {} does not lie on the curve of edge {}",
                        self.vertices[vi].id, e.id
                    ));
                }
            }
        }

        // (g) nonzero forms, smooth at incident vertices.
        for e in &self.edges {
            if e.form.is_zero() {
                report
                    .smooth_branches
                    .fail(format!("edge {} has zero form", e.id));
                continue;
            }
            for &vi in [e.tail, e.head].iter() {
                let p = self.vertex_coords(vi);
                let g = e.form.gradient_at(&p);
                if g.iter().all(Rational::is_zero) {
                    report.smooth_branches.fail(format!(
                        "curve of edge {} is singular at vertex {}",
                        e.id, self.vertices[vi].id
                    ));
                }
            }
        }

        report
    }

    fn boundary_matrix_2_int(&self) -> Vec<i8> {
        let ne = self.phi1();
        let nf = self.phi2();
        let epos: BTreeMap<usize, usize> = self
            .interior_edges
            .iter()
            .enumerate()
            .map(|(pos, &e)| (e, pos))
            .collect();
        let mut m = vec![0i8; ne * nf];
        for (fi, f) in self.faces.iter().enumerate() {
            for &(ei, s) in &f.boundary {
                if let Some(&pos) = epos.get(&ei) {
                    m[pos * nf + fi] += s;
                }
            }
        }
        m
    }

    fn boundary_matrix_1_int(&self) -> Vec<i8> {
        let nv = self.phi0();
        let ne = self.phi1();
        let vpos: BTreeMap<usize, usize> = self
            .interior_vertices
            .iter()
            .enumerate()
            .map(|(pos, &v)| (v, pos))
            .collect();
        let mut m = vec![0i8; nv * ne];
        for (pos, &ei) in self.interior_edges.iter().enumerate() {
            let e = &self.edges[ei];
            if let Some(&vp) = vpos.get(&e.head) {
                m[vp * ne + pos] += 1;
            }
            if let Some(&vp) = vpos.get(&e.tail) {
                m[vp * ne + pos] -= 1;
            }
        }
        m
    }
}

/// Result of one validation check.
#[derive(Clone, Debug, Default)]
pub struct CheckResult {
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

/// Pass/fail per validation check; all findings are collected rather than
/// aborting at the first failure.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub cycles_closed: CheckResult,
    pub edge_face_incidence: CheckResult,
    pub connected: CheckResult,
    pub hereditary: CheckResult,
    pub boundary_composition: CheckResult,
    pub euler: CheckResult,
    pub endpoints_on_curves: CheckResult,
    pub smooth_branches: CheckResult,
}

impl ValidationReport {
    pub fn checks(&self) -> Vec<(&'static str, &CheckResult)> {
        vec![
            ("cycles_closed", &self.cycles_closed),
            ("edge_face_incidence", &self.edge_face_incidence),
            ("connected", &self.connected),
            ("hereditary", &self.hereditary),
            ("boundary_composition", &self.boundary_composition),
            ("euler", &self.euler),
            ("endpoints_on_curves", &self.endpoints_on_curves),
            ("smooth_branches", &self.smooth_branches),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed())
    }

    pub fn failing_names(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, c)| !c.passed())
            .map(|(n, _)| *n)
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, check) in self.checks() {
            writeln!(
                f,
                "{:22} {}",
                name,
                if check.passed() { "pass" } else { "FAIL" }
            )?;
            for msg in &check.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

/// A mesh that passed all validation checks.  Constructing one is the only
/// way to unlock the dimension computations.
#[derive(Clone, Debug)]
pub struct ValidatedMesh {
    mesh: Mesh,
}

impl ValidatedMesh {
    pub fn new(mesh: Mesh) -> Result<ValidatedMesh, MeshError> {
        let report = mesh.validate();
        if report.all_passed() {
            Ok(ValidatedMesh { mesh })
        } else {
            Err(MeshError::NotValidated(report.failing_names().join(", ")))
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Signed incidence of interior edges against faces: entry `[t, s]` is
    /// the induced sign of edge `t` in the boundary of face `s`.
    pub fn boundary_matrix_2(&self) -> RatMatrix {
        let ne = self.mesh.phi1();
        let nf = self.mesh.phi2();
        let ints = self.mesh.boundary_matrix_2_int();
        let mut m = RatMatrix::zero(ne, nf);
        for i in 0..ne {
            for j in 0..nf {
                let v = ints[i * nf + j];
                if v != 0 {
                    m.set(i, j, rat(v as i64));
                }
            }
        }
        m
    }

    /// Signed incidence of interior vertices against interior edges:
    /// +1 at the head, -1 at the tail; boundary vertices are dropped.
    pub fn boundary_matrix_1(&self) -> RatMatrix {
        let nv = self.mesh.phi0();
        let ne = self.mesh.phi1();
        let ints = self.mesh.boundary_matrix_1_int();
        let mut m = RatMatrix::zero(nv, ne);
        for i in 0..nv {
            for j in 0..ne {
                let v = ints[i * ne + j];
                if v != 0 {
                    m.set(i, j, rat(v as i64));
                }
            }
        }
        m
    }

    /// For each interior edge (in `interior_edges` order), the flanking
    /// faces as `(positive, negative)` per the induced signs.
    pub fn interior_edge_faces(&self) -> Vec<(usize, usize)> {
        let occ = self.mesh.edge_face_signs();
        self.mesh
            .interior_edges
            .iter()
            .map(|&ei| {
                let o = &occ[ei];
                let pos = o.iter().find(|&&(_, s)| s > 0).expect("validated").0;
                let neg = o.iter().find(|&&(_, s)| s < 0).expect("validated").0;
                (pos, neg)
            })
            .collect()
    }

    /// Closed star of an interior edge: its two incident faces plus all
    /// edges and vertices in their closures.
    pub fn star(&self, edge_id: &str) -> Result<Star, MeshError> {
        let m = &self.mesh;
        let ei = m
            .edge_index(edge_id)
            .ok_or_else(|| MeshError::UnknownId(edge_id.to_string()))?;
        if !m.edges[ei].interior {
            return Err(MeshError::NotInteriorEdge(edge_id.to_string()));
        }
        let occ = m.edge_face_signs();
        let mut faces = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut verts = BTreeSet::new();
        for &(fi, _) in &occ[ei] {
            faces.insert(fi);
            for &(e2, _) in &m.faces[fi].boundary {
                edges.insert(e2);
                verts.insert(m.edges[e2].tail);
                verts.insert(m.edges[e2].head);
            }
        }
        Ok(Star {
            faces: faces.iter().map(|&f| m.faces[f].id.clone()).collect(),
            edges: edges.iter().map(|&e| m.edges[e].id.clone()).collect(),
            vertices: verts.iter().map(|&v| m.vertices[v].id.clone()).collect(),
        })
    }

    /// Sum of interior edge-form degrees over the closed star of an edge.
    pub fn star_interior_degree_sum(&self, edge_id: &str) -> Result<u32, MeshError> {
        let star = self.star(edge_id)?;
        let m = &self.mesh;
        Ok(star
            .edges
            .iter()
            .filter_map(|id| m.edge_index(id))
            .filter(|&e| m.edges[e].interior)
            .map(|e| m.edges[e].form.degree())
            .sum())
    }
}

impl std::ops::Deref for ValidatedMesh {
    type Target = Mesh;
    fn deref(&self) -> &Mesh {
        &self.mesh
    }
}

/// Cells of a closed star, by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub faces: Vec<String>,
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

impl Star {
    pub fn all_ids(&self) -> BTreeSet<String> {
        self.faces
            .iter()
            .chain(&self.edges)
            .chain(&self.vertices)
            .cloned()
            .collect()
    }
}
