//! Genericity verification, adjacency subcomplexes, the closed-form
//! dimension formula for generic meshes, and the degree bound that
//! certifies it.
//!
//! The four conditions:
//!
//! 1. at every vertex, edge curves are either equal or cross with distinct
//!    tangent lines;
//! 2. the common zeros of the edge curves through a vertex reduce to the
//!    vertex itself;
//! 3. every adjacency subcomplex is contractible;
//! 4. each face sees pairwise distinct interior edge forms.
//!
//! Conditions never gate the direct kernel computation; they gate only the
//! closed-form dimension formula and its degree certificate.

pub mod numeric;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{binom2, dim_sd, Form, Rational};
use crate::homology::{self, HomologyError};
use crate::mesh::ValidatedMesh;
use numeric::{chordal_distance, normalize, ProjPoint};

#[derive(Debug, Error)]
pub enum GenericError {
    #[error("mesh is not generic; failing conditions: {0:?}")]
    NotGeneric(Vec<&'static str>),
    #[error("vertex `{0}` has a single arc; the vertex term is undefined")]
    SingleArcVertex(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Options shared by the genericity checks.
#[derive(Clone, Debug)]
pub struct GenericityOptions {
    /// Relative tolerance for numeric point membership.
    pub tol: f64,
    /// Include boundary vertices (and boundary edges) in condition 1.
    pub strict_condition1: bool,
    /// Degree cap for the stabilization sweep in condition 2.
    pub d_cap: u32,
}

impl Default for GenericityOptions {
    fn default() -> Self {
        GenericityOptions {
            tol: 1e-9,
            strict_condition1: false,
            d_cap: 12,
        }
    }
}

/// A prime at which the mesh's ideal complex can localize nontrivially:
/// either an edge curve, or a point (rational and exact, or numeric).
#[derive(Clone, Debug)]
pub enum PrimeDescriptor {
    Curve {
        /// Normalized representative of the scalar class.
        form: Form,
    },
    Point {
        point: ProjPoint,
        /// Exact coordinates when the point is rational (mesh vertices).
        exact: Option<[Rational; 3]>,
        /// True when located by floating-point root finding.
        numeric: bool,
    },
}

impl PrimeDescriptor {
    /// Whether an edge form lies in the prime.
    pub fn contains(&self, form: &Form, tol: f64) -> bool {
        match self {
            PrimeDescriptor::Curve { form: c } => c.proportional(form),
            PrimeDescriptor::Point {
                point,
                exact,
                ..
            } => {
                if let Some(pt) = exact {
                    return form.evaluate(pt).is_zero();
                }
                numeric::vanishes_numerically(form, point, tol)
            }
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, PrimeDescriptor::Point { numeric: true, .. })
    }

    /// Stable display/sort key.
    pub fn key(&self) -> String {
        match self {
            PrimeDescriptor::Curve { form } => format!("curve {form}"),
            PrimeDescriptor::Point { point, exact, .. } => {
                if let Some(e) = exact {
                    format!("point [{}:{}:{}]", e[0], e[1], e[2])
                } else {
                    let n = normalize(point);
                    format!(
                        "point ~[{:.6}{:+.6}i : {:.6}{:+.6}i : {:.6}{:+.6}i]",
                        n[0].re, n[0].im, n[1].re, n[1].im, n[2].re, n[2].im
                    )
                }
            }
        }
    }
}

/// Adjacency subcomplex seeded at a face: the equivalence class of faces
/// joined through edges whose forms lie in the prime, together with the
/// member edges and vertices.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub seed_face: String,
    pub faces: BTreeSet<String>,
    pub edges: BTreeSet<String>,
    pub vertices: BTreeSet<String>,
}

impl Subcomplex {
    /// Cell-count Euler characteristic; the subcomplex is contractible
    /// exactly when this equals 1 (equivalently its boundary has a single
    /// component).
    pub fn euler_characteristic(&self) -> i64 {
        self.faces.len() as i64 - self.edges.len() as i64 + self.vertices.len() as i64
    }
}

/// Build the subcomplex of a prime seeded at a face.
pub fn subcomplex(
    mesh: &ValidatedMesh,
    prime: &PrimeDescriptor,
    seed_face: usize,
    tol: f64,
) -> Subcomplex {
    let in_prime: Vec<bool> = mesh
        .interior_edges()
        .iter()
        .map(|&ei| prime.contains(&mesh.edges()[ei].form, tol))
        .collect();
    let flank = mesh.interior_edge_faces();
    // Transitive closure of adjacency through member edges.
    let mut class: BTreeSet<usize> = BTreeSet::from([seed_face]);
    let mut queue = VecDeque::from([seed_face]);
    while let Some(f) = queue.pop_front() {
        for (pos, &(fp, fneg)) in flank.iter().enumerate() {
            if !in_prime[pos] {
                continue;
            }
            let other = if fp == f {
                fneg
            } else if fneg == f {
                fp
            } else {
                continue;
            };
            if class.insert(other) {
                queue.push_back(other);
            }
        }
    }
    // Member edges: in the prime and flanked by class faces.
    let mut edges = BTreeSet::new();
    for (pos, &(fp, fneg)) in flank.iter().enumerate() {
        if in_prime[pos] && (class.contains(&fp) || class.contains(&fneg)) {
            edges.insert(mesh.interior_edges()[pos]);
        }
    }
    // Member vertices: interior, all incident interior edge forms in the
    // prime, and lying on a class face.
    let mut vertices = BTreeSet::new();
    for &vi in mesh.interior_vertices() {
        let incident: Vec<usize> = mesh
            .interior_edges()
            .iter()
            .enumerate()
            .filter(|(_, &ei)| {
                mesh.edges()[ei].tail == vi || mesh.edges()[ei].head == vi
            })
            .map(|(pos, _)| pos)
            .collect();
        if incident.is_empty() || !incident.iter().all(|&pos| in_prime[pos]) {
            continue;
        }
        let on_class_face = mesh.faces().iter().enumerate().any(|(fi, f)| {
            class.contains(&fi)
                && f.boundary
                    .iter()
                    .any(|&(ei, _)| mesh.edges()[ei].tail == vi || mesh.edges()[ei].head == vi)
        });
        if on_class_face {
            vertices.insert(vi);
        }
    }
    Subcomplex {
        seed_face: mesh.faces()[seed_face].id.clone(),
        faces: class.iter().map(|&f| mesh.faces()[f].id.clone()).collect(),
        edges: edges
            .iter()
            .map(|&e| mesh.edges()[e].id.clone())
            .collect(),
        vertices: vertices
            .iter()
            .map(|&v| mesh.vertices()[v].id.clone())
            .collect(),
    }
}

/// All primes at which localization can be nontrivial: the distinct edge
/// curves, the interior vertices (exact), and all pairwise intersection
/// points of distinct edge curves (numeric, conjugate pairs folded).
pub fn enumerate_relevant_primes(mesh: &ValidatedMesh, tol: f64) -> Vec<PrimeDescriptor> {
    let mut primes: Vec<PrimeDescriptor> = Vec::new();
    // Curves: one per scalar class.
    let mut class_reps: Vec<Form> = Vec::new();
    for &ei in mesh.interior_edges() {
        let f = mesh.edges()[ei].form.normalized();
        if !class_reps.iter().any(|g| g == &f) {
            class_reps.push(f);
        }
    }
    for f in &class_reps {
        primes.push(PrimeDescriptor::Curve { form: f.clone() });
    }
    // Exact vertex points.
    let mut exact_points: Vec<[Rational; 3]> = Vec::new();
    for &vi in mesh.interior_vertices() {
        let p = mesh.vertex_coords(vi);
        primes.push(PrimeDescriptor::Point {
            point: to_proj(&p),
            exact: Some(p.clone()),
            numeric: false,
        });
        exact_points.push(p);
    }
    // Numeric pairwise intersections.
    let mut numeric_points: Vec<ProjPoint> = Vec::new();
    let merge_tol = (tol * 100.0).max(1e-7);
    for i in 0..class_reps.len() {
        for j in i + 1..class_reps.len() {
            let Some(pts) = numeric::common_zeros(&class_reps[i], &class_reps[j], tol) else {
                continue;
            };
            'point: for p in pts {
                for e in &exact_points {
                    if chordal_distance(&p, &to_proj(e)) < merge_tol {
                        continue 'point;
                    }
                }
                // Fold conjugate pairs: keep the representative with
                // nonnegative leading imaginary part.
                let folded = fold_conjugate(&p);
                if !numeric_points
                    .iter()
                    .any(|q| chordal_distance(&folded, q) < merge_tol)
                {
                    numeric_points.push(folded);
                }
            }
        }
    }
    numeric_points.sort_by(|a, b| {
        numeric_key(a)
            .partial_cmp(&numeric_key(b))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for p in numeric_points {
        primes.push(PrimeDescriptor::Point {
            point: p,
            exact: None,
            numeric: true,
        });
    }
    primes.sort_by(|a, b| a.key().cmp(&b.key()));
    primes
}

fn to_proj(p: &[Rational; 3]) -> ProjPoint {
    [
        Complex64::new(p[0].to_f64().unwrap_or(f64::NAN), 0.0),
        Complex64::new(p[1].to_f64().unwrap_or(f64::NAN), 0.0),
        Complex64::new(p[2].to_f64().unwrap_or(f64::NAN), 0.0),
    ]
}

fn fold_conjugate(p: &ProjPoint) -> ProjPoint {
    let n = normalize(p);
    for c in &n {
        if c.im.abs() > 1e-9 {
            if c.im < 0.0 {
                return [n[0].conj(), n[1].conj(), n[2].conj()];
            }
            break;
        }
    }
    n
}

fn numeric_key(p: &ProjPoint) -> [f64; 6] {
    let n = normalize(p);
    [n[0].re, n[0].im, n[1].re, n[1].im, n[2].re, n[2].im]
}

/// Outcome of one condition check.
#[derive(Clone, Debug, Default)]
pub struct ConditionResult {
    pub witnesses: Vec<String>,
    pub numeric_caveats: Vec<String>,
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct GenericityReport {
    pub condition1: ConditionResult,
    pub condition2: ConditionResult,
    pub condition3: ConditionResult,
    pub condition4: ConditionResult,
}

impl GenericityReport {
    pub fn all_passed(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.passed())
    }

    pub fn conditions(&self) -> Vec<(&'static str, &ConditionResult)> {
        vec![
            ("condition1_distinct_tangents", &self.condition1),
            ("condition2_vertex_radical", &self.condition2),
            ("condition3_contractible", &self.condition3),
            ("condition4_distinct_face_forms", &self.condition4),
        ]
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.conditions()
            .iter()
            .filter(|(_, c)| !c.passed())
            .map(|(n, _)| *n)
            .collect()
    }
}

impl fmt::Display for GenericityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in self.conditions() {
            writeln!(f, "{:32} {}", name, if c.passed() { "pass" } else { "FAIL" })?;
            for w in &c.witnesses {
                writeln!(f, "    witness: {w}")?;
            }
            for n in &c.numeric_caveats {
                writeln!(f, "    numeric: {n}")?;
            }
        }
        Ok(())
    }
}

/// Condition 1: at every vertex (interior by default), every pair of
/// incident edges has either the same curve or distinct tangent lines.
pub fn check_condition1(mesh: &ValidatedMesh, strict: bool) -> ConditionResult {
    let mut result = ConditionResult::default();
    for (vi, v) in mesh.vertices().iter().enumerate() {
        if !strict && !v.interior {
            continue;
        }
        let incident: Vec<usize> = mesh
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| (e.interior || strict) && (e.tail == vi || e.head == vi))
            .map(|(i, _)| i)
            .collect();
        let p = mesh.vertex_coords(vi);
        for (a, &ei) in incident.iter().enumerate() {
            for &ej in &incident[a + 1..] {
                let fi = &mesh.edges()[ei].form;
                let fj = &mesh.edges()[ej].form;
                if fi.proportional(fj) {
                    continue;
                }
                let gi = fi.gradient_at(&p);
                let gj = fj.gradient_at(&p);
                if proportional_vectors(&gi, &gj) {
                    result.witnesses.push(format!(
                        "edges {} and {} share the tangent line at vertex {}",
                        mesh.edges()[ei].id,
                        mesh.edges()[ej].id,
                        v.id
                    ));
                }
            }
        }
    }
    result
}

fn proportional_vectors(a: &[Rational; 3], b: &[Rational; 3]) -> bool {
    // Rank of the 2x3 matrix is < 2 iff all 2x2 minors vanish.
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !(&a[i] * &b[j] - &a[j] * &b[i]).is_zero() {
            return false;
        }
    }
    true
}

/// Condition 2: the zero set of the curves through each interior vertex is
/// the vertex alone.  Part (a) checks, exactly, that the quotient by the
/// incident forms has a stabilizing Hilbert function (zero-dimensional
/// support); part (b) finds, numerically, all common zeros of pairs of
/// incident curves lying on every incident curve, and requires them to be
/// the vertex itself.
pub fn check_condition2(
    mesh: &ValidatedMesh,
    opts: &GenericityOptions,
) -> Result<ConditionResult, GenericError> {
    let mut result = ConditionResult::default();
    for &vi in mesh.interior_vertices() {
        let v = &mesh.vertices()[vi];
        let forms: Vec<Form> = distinct_incident_forms(mesh, vi);
        // (a) exact: stabilization of dim (S/<G_t>)_d.
        homology::multiplicity(&forms, opts.d_cap)?;
        // (b) numeric: stray common zeros.
        let vp = to_proj(&mesh.vertex_coords(vi));
        let merge_tol = (opts.tol * 100.0).max(1e-7);
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                let Some(pts) = numeric::common_zeros(&forms[i], &forms[j], opts.tol) else {
                    result
                        .numeric_caveats
                        .push(format!("degenerate elimination at vertex {}", v.id));
                    continue;
                };
                for p in pts {
                    let on_all = forms
                        .iter()
                        .all(|f| numeric::vanishes_numerically(f, &p, opts.tol));
                    if on_all && chordal_distance(&p, &vp) > merge_tol {
                        let n = normalize(&p);
                        result.witnesses.push(format!(
                            "curves through vertex {} share the zero ~[{:.4}{:+.4}i : {:.4}{:+.4}i : {:.4}{:+.4}i]",
                            v.id, n[0].re, n[0].im, n[1].re, n[1].im, n[2].re, n[2].im
                        ));
                    }
                }
            }
        }
        result
            .numeric_caveats
            .push(format!("vertex {}: stray-zero search is numeric (tol {})", v.id, opts.tol));
    }
    dedup_strings(&mut result.witnesses);
    Ok(result)
}

fn distinct_incident_forms(mesh: &ValidatedMesh, vi: usize) -> Vec<Form> {
    let mut forms: Vec<Form> = Vec::new();
    for &ei in mesh.interior_edges() {
        let e = &mesh.edges()[ei];
        if e.tail == vi || e.head == vi {
            let f = e.form.normalized();
            if !forms.iter().any(|g| g == &f) {
                forms.push(f);
            }
        }
    }
    forms
}

fn dedup_strings(v: &mut Vec<String>) {
    let mut seen = BTreeSet::new();
    v.retain(|s| seen.insert(s.clone()));
}

/// Condition 3: every adjacency subcomplex of every relevant prime is
/// contractible (Euler characteristic 1).
pub fn check_condition3(mesh: &ValidatedMesh, opts: &GenericityOptions) -> ConditionResult {
    let mut result = ConditionResult::default();
    let primes = enumerate_relevant_primes(mesh, opts.tol);
    for prime in &primes {
        if prime.is_numeric() {
            result
                .numeric_caveats
                .push(format!("{} located numerically", prime.key()));
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for seed in 0..mesh.phi2() {
            if seen.contains(&seed) {
                continue;
            }
            let sub = subcomplex(mesh, prime, seed, opts.tol);
            for fid in &sub.faces {
                seen.insert(mesh.face_index(fid).unwrap());
            }
            let chi = sub.euler_characteristic();
            if chi != 1 {
                result.witnesses.push(format!(
                    "{} seeded at face {}: euler characteristic {}",
                    prime.key(),
                    sub.seed_face,
                    chi
                ));
            }
        }
    }
    result
}

/// Condition 4: each face sees pairwise non-proportional interior edge
/// forms.
pub fn check_condition4(mesh: &ValidatedMesh) -> ConditionResult {
    let mut result = ConditionResult::default();
    for f in mesh.faces() {
        let interior: Vec<usize> = f
            .boundary
            .iter()
            .map(|&(ei, _)| ei)
            .filter(|&ei| mesh.edges()[ei].interior)
            .collect();
        for (a, &ei) in interior.iter().enumerate() {
            for &ej in &interior[a + 1..] {
                if ei != ej && mesh.edges()[ei].form.proportional(&mesh.edges()[ej].form) {
                    result.witnesses.push(format!(
                        "face {} has edges {} and {} on the same curve",
                        f.id,
                        mesh.edges()[ei].id,
                        mesh.edges()[ej].id
                    ));
                }
            }
        }
    }
    result
}

/// Run all four condition checks.
pub fn genericity_report(
    mesh: &ValidatedMesh,
    opts: &GenericityOptions,
) -> Result<GenericityReport, GenericError> {
    Ok(GenericityReport {
        condition1: check_condition1(mesh, opts.strict_condition1),
        condition2: check_condition2(mesh, opts)?,
        condition3: check_condition3(mesh, opts),
        condition4: check_condition4(mesh),
    })
}

/// Number of distinct curves among the interior edges at each interior
/// vertex, in `interior_vertices` order.
pub fn arcs_at_vertices(mesh: &ValidatedMesh) -> Vec<usize> {
    mesh.interior_vertices()
        .iter()
        .map(|&vi| distinct_incident_forms(mesh, vi).len())
        .collect()
}

/// Closed-form dimension of the smoothness space on a generic mesh, valid
/// for all large degrees:
///
/// ```text
/// (phi2 - phi1) C(d+2,2) + sum_t C(d - (r+1) n_t + 2, 2)
///   + sum_v [ C(r + a_v + 2, 2) - t_v C(a_v + 1, 2) ]
/// ```
///
/// with `t_v = min(r+2, arcs at v)` and `a_v = floor((r+1)/(t_v - 1))`.
/// Requires conditions 1-3 of the supplied report.
pub fn generic_dim(
    mesh: &ValidatedMesh,
    r: u32,
    d: u32,
    report: &GenericityReport,
) -> Result<u64, GenericError> {
    let mut failing = Vec::new();
    if !report.condition1.passed() {
        failing.push("condition1_distinct_tangents");
    }
    if !report.condition2.passed() {
        failing.push("condition2_vertex_radical");
    }
    if !report.condition3.passed() {
        failing.push("condition3_contractible");
    }
    if !failing.is_empty() {
        return Err(GenericError::NotGeneric(failing));
    }
    let faces_term = (mesh.phi2() as i64 - mesh.phi1() as i64) * dim_sd(d) as i64;
    let edges_term: i64 = mesh
        .interior_edges()
        .iter()
        .map(|&ei| {
            let n = mesh.edges()[ei].form.degree();
            binom2(d as i64 - ((r + 1) * n) as i64 + 2) as i64
        })
        .sum();
    let mut vertices_term = 0i64;
    for (pos, &vi) in mesh.interior_vertices().iter().enumerate() {
        let arcs = arcs_at_vertices(mesh)[pos];
        if arcs < 2 {
            return Err(GenericError::SingleArcVertex(
                mesh.vertices()[vi].id.clone(),
            ));
        }
        let t_v = (r as u64 + 2).min(arcs as u64);
        let a_v = ((r as u64) + 1) / (t_v - 1);
        vertices_term += binom2((r as u64 + a_v + 2) as i64) as i64
            - (t_v as i64) * binom2((a_v + 1) as i64) as i64;
    }
    let total = faces_term + edges_term + vertices_term;
    debug_assert!(total >= 0);
    Ok(total as u64)
}

/// Degree bound certifying the closed-form dimension: per interior edge,
/// `D_t = (r+1) * sum of interior edge-form degrees over its closed star`;
/// the formula holds for all `d >= max_t D_t - 2`.
#[derive(Clone, Debug)]
pub struct RegularityBound {
    pub d_max: u64,
    /// `(edge id, D_t)` per interior edge, in id order.
    pub per_edge: Vec<(String, u64)>,
}

pub fn regularity_bound(mesh: &ValidatedMesh, r: u32) -> RegularityBound {
    let mut per_edge = Vec::new();
    for &ei in mesh.interior_edges() {
        let id = mesh.edges()[ei].id.clone();
        let sum = mesh.star_interior_degree_sum(&id).expect("interior edge");
        per_edge.push((id, (r as u64 + 1) * sum as u64));
    }
    let d_max = per_edge.iter().map(|&(_, d)| d).max().unwrap_or(0);
    RegularityBound { d_max, per_edge }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_form, rat};

    #[test]
    fn proportional_gradient_test() {
        let a = [rat(2), rat(1), rat(2)];
        let b = [rat(4), rat(2), rat(4)];
        let c = [rat(2), rat(1), rat(3)];
        assert!(proportional_vectors(&a, &b));
        assert!(!proportional_vectors(&a, &c));
    }

    #[test]
    fn curve_prime_membership() {
        let p = PrimeDescriptor::Curve {
            form: parse_form("y*z + x^2 - z^2").unwrap().normalized(),
        };
        assert!(p.contains(&parse_form("2*y*z + 2*x^2 - 2*z^2").unwrap(), 1e-9));
        assert!(!p.contains(&parse_form("y").unwrap(), 1e-9));
    }

    #[test]
    fn exact_point_membership() {
        let pt = [rat(-1), rat(0), rat(1)];
        let p = PrimeDescriptor::Point {
            point: super::to_proj(&pt),
            exact: Some(pt),
            numeric: false,
        };
        assert!(p.contains(&parse_form("y*z + x^2 - z^2").unwrap(), 1e-9));
        assert!(p.contains(&parse_form("y").unwrap(), 1e-9));
        assert!(!p.contains(&parse_form("x").unwrap(), 1e-9));
    }
}
