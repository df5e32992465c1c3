//! Per-degree dimensions of the ideal complexes attached to a mesh: the
//! principal edge ideals `J(t) = <G_t^{r+1}>`, the vertex ideals `J(v)`
//! generated by the incident edge ideals, the homology of the two-term
//! complex `J_1 -> J_0`, colon ideals, multiplicities, and the
//! Euler-characteristic dimension identity
//!
//! ```text
//! dim C^r_d = (phi2 - phi1)*C(d+2,2) + sum_t C(d-(r+1)n_t+2,2)
//!             + sum_v dim(S/J(v))_d + dim H0_d
//! ```
//!
//! Everything is obtained from ranks of explicit degree-slice matrices; no
//! module presentations are materialized.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::{
    binom2, certified_rank, dim_sd, monomial_basis, monomial_count, monomial_index, rat, Exp,
    Form, Poly, RatMatrix, Rational, SparseMat,
};
use crate::mesh::{MeshError, ValidatedMesh};
use crate::splinespace;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("Hilbert function not stabilized by degree {cap}; raise the degree cap")]
    NotStabilized { cap: u32 },
}

/// Labelled table of exact dimensions indexed by degree `0..=d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    pub label: String,
    pub values: Vec<u64>,
}

/// The ideal attached to an interior vertex: generated by `G_t^{r+1}` over
/// the incident interior edges.  Every generator vanishes at the vertex.
#[derive(Clone, Debug)]
pub struct VertexIdeal {
    pub vertex: String,
    pub generators: Vec<Form>,
}

impl VertexIdeal {
    pub fn at(mesh: &ValidatedMesh, vertex_id: &str, r: u32) -> Result<VertexIdeal, MeshError> {
        let vi = mesh
            .vertex_index(vertex_id)
            .ok_or_else(|| MeshError::UnknownId(vertex_id.to_string()))?;
        if !mesh.vertices()[vi].interior {
            return Err(MeshError::NotInteriorVertex(vertex_id.to_string()));
        }
        let generators = incident_generators(mesh, vi, r);
        debug_assert!(generators
            .iter()
            .all(|g| g.evaluate(&mesh.vertex_coords(vi)).is_zero()));
        Ok(VertexIdeal {
            vertex: vertex_id.to_string(),
            generators,
        })
    }

    /// `dim J(v)_d`, the degree-`d` slice of the ideal.
    pub fn slice_dim(&self, d: u32) -> u64 {
        ideal_rank_at_degree(&self.generators, d, None)
    }
}

/// `dim J(t)_d` for an interior edge: the degree-`d` multiples of
/// `G_t^{r+1}`.
pub fn dim_j_edge(mesh: &ValidatedMesh, edge_id: &str, r: u32, d: u32) -> Result<u64, MeshError> {
    let ei = mesh
        .edge_index(edge_id)
        .ok_or_else(|| MeshError::UnknownId(edge_id.to_string()))?;
    if !mesh.edges()[ei].interior {
        return Err(MeshError::NotInteriorEdge(edge_id.to_string()));
    }
    let n = mesh.edges()[ei].form.degree();
    Ok(binom2(d as i64 - ((r + 1) * n) as i64 + 2))
}

/// `dim J(v)_d` for an interior vertex: rank of the span of all
/// `G_t^{r+1} * m` over incident interior edges.
pub fn dim_j_vertex(mesh: &ValidatedMesh, vertex_id: &str, r: u32, d: u32) -> Result<u64, MeshError> {
    let vi = mesh
        .vertex_index(vertex_id)
        .ok_or_else(|| MeshError::UnknownId(vertex_id.to_string()))?;
    if !mesh.vertices()[vi].interior {
        return Err(MeshError::NotInteriorVertex(vertex_id.to_string()));
    }
    Ok(dim_j_vertex_idx(mesh, vi, r, d))
}

pub(crate) fn dim_j_vertex_idx(mesh: &ValidatedMesh, vi: usize, r: u32, d: u32) -> u64 {
    let gens = incident_generators(mesh, vi, r);
    ideal_rank_at_degree(&gens, d, Some((mesh, vi, r)))
}

fn incident_generators(mesh: &ValidatedMesh, vi: usize, r: u32) -> Vec<Form> {
    mesh.interior_edges()
        .iter()
        .map(|&ei| &mesh.edges()[ei])
        .filter(|e| e.tail == vi || e.head == vi)
        .map(|e| e.form.pow(r + 1))
        .collect()
}

/// Rank of the degree-`d` piece of the ideal generated by `gens`.
/// When vertex context is supplied and the slice is large, a certified
/// modular rank with dual-functional left-kernel candidates is tried first.
fn ideal_rank_at_degree(
    gens: &[Form],
    d: u32,
    vertex_ctx: Option<(&ValidatedMesh, usize, u32)>,
) -> u64 {
    let mat = ideal_slice_matrix(gens, d);
    if mat.cols() == 0 {
        return 0;
    }
    let big = (mat.rows() as u64) * (mat.rows() as u64) * (mat.cols() as u64) > 1_000_000_000;
    if big {
        if let Some((mesh, vi, r)) = vertex_ctx {
            let duals = vertex_dual_functionals(mesh, vi, r);
            let cands: Vec<Vec<Rational>> = duals
                .iter()
                .map(|q| {
                    monomial_basis(d)
                        .into_iter()
                        .map(|m| q.apply_monomial(m))
                        .collect()
                })
                .collect();
            if let Some(rank) = certified_rank(&mat, &cands) {
                return rank as u64;
            }
        }
    }
    mat.rank_exact() as u64
}

/// Columns are coefficient vectors of `g * m` for each generator `g` and
/// monomial `m` of complementary degree; rows are `monomial_basis(d)`.
fn ideal_slice_matrix(gens: &[Form], d: u32) -> SparseMat {
    let mut mat = SparseMat::new(monomial_count(d));
    for g in gens {
        if g.is_zero() || g.degree() > d {
            continue;
        }
        for mono in monomial_basis(d - g.degree()) {
            let mut col = Vec::with_capacity(g.num_terms());
            for (e, c) in g.terms() {
                let prod: Exp = (e.0 + mono.0, e.1 + mono.1, e.2 + mono.2);
                col.push((monomial_index(prod) as u32, c.clone()));
            }
            mat.push_column(col);
        }
    }
    mat
}

/// Degree-`d` dimensions `(dim H0, dim H1)` of the two-term ideal complex.
///
/// The matrix is the boundary map restricted to the ideals: columns are
/// indexed by (interior edge, cofactor monomial), rows by (interior vertex,
/// monomial); a column carries `+G^{r+1} m` in its head block and
/// `-G^{r+1} m` in its tail block, for interior endpoints.
pub fn h0_h1(mesh: &ValidatedMesh, r: u32, d: u32) -> (u64, u64) {
    let h = homology_slice(mesh, r, d);
    (h.h0, h.h1)
}

struct HomologySlice {
    h0: u64,
    h1: u64,
    /// `sum_v dim (S/J(v))_d`
    vertices_quotient: u64,
}

fn homology_slice(mesh: &ValidatedMesh, r: u32, d: u32) -> HomologySlice {
    let nd = monomial_count(d);
    let vpos: BTreeMap<usize, usize> = mesh
        .interior_vertices()
        .iter()
        .enumerate()
        .map(|(pos, &v)| (v, pos))
        .collect();
    let mut mat = SparseMat::new(vpos.len() * nd);
    let mut sum_edges = 0u64;
    for &ei in mesh.interior_edges() {
        let e = &mesh.edges()[ei];
        let gen_deg = (r + 1) * e.form.degree();
        if d < gen_deg {
            continue;
        }
        sum_edges += monomial_count(d - gen_deg) as u64;
        let gpow = e.form.pow(r + 1);
        let head = vpos.get(&e.head).copied();
        let tail = vpos.get(&e.tail).copied();
        for mono in monomial_basis(d - gen_deg) {
            let mut col = Vec::new();
            for (t, c) in gpow.terms() {
                let prod: Exp = (t.0 + mono.0, t.1 + mono.1, t.2 + mono.2);
                let row = monomial_index(prod);
                if let Some(h) = head {
                    col.push(((h * nd + row) as u32, c.clone()));
                }
                if let Some(t2) = tail {
                    col.push(((t2 * nd + row) as u32, -c.clone()));
                }
            }
            mat.push_column(col);
        }
    }
    let sum_vertices: u64 = mesh
        .interior_vertices()
        .iter()
        .map(|&vi| dim_j_vertex_idx(mesh, vi, r, d))
        .sum();
    let rank = boundary_rank(mesh, r, d, &mat);
    HomologySlice {
        h0: sum_vertices - rank,
        h1: sum_edges - rank,
        vertices_quotient: mesh.phi0() as u64 * dim_sd(d) - sum_vertices,
    }
}

fn boundary_rank(mesh: &ValidatedMesh, r: u32, d: u32, mat: &SparseMat) -> u64 {
    let big = (mat.rows() as u64) * (mat.rows().min(mat.cols()) as u64) * (mat.cols() as u64)
        > 1_000_000_000;
    if big {
        let nd = monomial_count(d);
        let mut cands = Vec::new();
        for (pos, &vi) in mesh.interior_vertices().iter().enumerate() {
            for q in vertex_dual_functionals(mesh, vi, r) {
                let mut w = vec![Rational::zero(); mat.rows()];
                for mono in monomial_basis(d) {
                    let val = q.apply_monomial(mono);
                    if !val.is_zero() {
                        w[pos * nd + monomial_index(mono)] = val;
                    }
                }
                cands.push(w);
            }
        }
        if let Some(rank) = certified_rank(mat, &cands) {
            return rank as u64;
        }
    }
    mat.rank_exact() as u64
}

/// The four terms of the dimension identity, plus the total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimBreakdown {
    pub faces_term: i64,
    pub edges_term: u64,
    pub vertices_term: u64,
    pub h0_term: u64,
    pub total: u64,
}

/// Evaluate the Euler-characteristic dimension identity exactly.
/// The total equals `spline_dim` for every validated contractible mesh.
pub fn dim_formula(mesh: &ValidatedMesh, r: u32, d: u32) -> DimBreakdown {
    let faces_term = (mesh.phi2() as i64 - mesh.phi1() as i64) * dim_sd(d) as i64;
    let edges_term: u64 = mesh
        .interior_edges()
        .iter()
        .map(|&ei| {
            let n = mesh.edges()[ei].form.degree();
            binom2(d as i64 - ((r + 1) * n) as i64 + 2)
        })
        .sum();
    let slice = homology_slice(mesh, r, d);
    let total = faces_term
        + edges_term as i64
        + slice.vertices_quotient as i64
        + slice.h0 as i64;
    debug_assert!(total >= 0);
    DimBreakdown {
        faces_term,
        edges_term,
        vertices_term: slice.vertices_quotient,
        h0_term: slice.h0,
        total: total as u64,
    }
}

/// `dim { p in S_d : p*h lies in the ideal of `gens` in degree d+deg h }`.
///
/// Computed as `dim S_d - rank([H | W]) + rank(W)` where `H` is the
/// multiplication-by-`h` matrix into degree `d + deg h` and `W` spans the
/// ideal slice there.
pub fn colon_dim(gens: &[Form], h: &Form, d: u32) -> u64 {
    assert!(!h.is_zero(), "colon by the zero form");
    let target = d + h.degree();
    let ideal = ideal_slice_matrix(gens, target);
    let rank_w = ideal.rank_exact();
    let mut stacked = ideal.clone();
    for mono in monomial_basis(d) {
        let mut col = Vec::with_capacity(h.num_terms());
        for (e, c) in h.terms() {
            let prod: Exp = (e.0 + mono.0, e.1 + mono.1, e.2 + mono.2);
            col.push((monomial_index(prod) as u32, c.clone()));
        }
        stacked.push_column(col);
    }
    let rank_hw = stacked.rank_exact();
    dim_sd(d) - (rank_hw as u64 - rank_w as u64)
}

/// Stabilized value of `dim (S/I)_d`: sweeps degrees up to `d_cap` and
/// requires the last three values to agree.
pub fn multiplicity(gens: &[Form], d_cap: u32) -> Result<u64, HomologyError> {
    if d_cap < 2 {
        return Err(HomologyError::NotStabilized { cap: d_cap });
    }
    let values: Vec<u64> = (0..=d_cap)
        .map(|d| dim_sd(d) - ideal_rank_at_degree(gens, d, None))
        .collect();
    let n = values.len();
    if values[n - 1] == values[n - 2] && values[n - 2] == values[n - 3] {
        Ok(values[n - 1])
    } else {
        Err(HomologyError::NotStabilized { cap: d_cap })
    }
}

/// Per-degree table of `(H0, H1, sum_v dim(S/J(v)))` dimensions.
pub fn homology_table(mesh: &ValidatedMesh, r: u32, d_max: u32) -> Vec<(u64, u64, u64)> {
    use rayon::prelude::*;
    (0..=d_max)
        .into_par_iter()
        .map(|d| {
            let (h0, h1) = h0_h1(mesh, r, d);
            let sv: u64 = mesh
                .interior_vertices()
                .iter()
                .map(|&vi| dim_sd(d) - dim_j_vertex_idx(mesh, vi, r, d))
                .sum();
            (h0, h1, sv)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Local dual functionals

/// A linear functional on forms supported at a rational point `v`: it reads
/// off a finite combination of Taylor coefficients of the dehomogenized
/// form at `v`.  Functionals constructed by [`vertex_dual_functionals`]
/// annihilate every degree slice of the vertex ideal.
#[derive(Clone, Debug)]
pub struct LocalFunctional {
    v: (Rational, Rational),
    coeffs: Vec<((u32, u32), Rational)>,
}

impl LocalFunctional {
    /// Apply to the homogeneous monomial `x^a y^b z^c`.
    pub fn apply_monomial(&self, e: Exp) -> Rational {
        let (a, b) = (e.0, e.1);
        let mut acc = Rational::zero();
        for ((i, j), q) in &self.coeffs {
            if *i > a || *j > b {
                continue;
            }
            let term = q
                * binom_big(a, *i)
                * pow_rat(&self.v.0, a - i)
                * binom_big(b, *j)
                * pow_rat(&self.v.1, b - j);
            acc += term;
        }
        acc
    }

    pub fn apply_form(&self, f: &Form) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in f.terms() {
            acc += c * self.apply_monomial(*e);
        }
        acc
    }
}

fn binom_big(n: u32, k: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}

fn pow_rat(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Basis of the local dual space of the vertex ideal at an interior vertex:
/// all Taylor-coefficient functionals of local order at most `2(r+1)` that
/// kill every multiple of every incident `G^{r+1}`.
///
/// For a vertex whose ideal is supported at the vertex alone, these span
/// the full dual of `(S/J(v))_d` in every large degree; in general they are
/// only candidates, and callers verify exactness downstream.
pub fn vertex_dual_functionals(mesh: &ValidatedMesh, vi: usize, r: u32) -> Vec<LocalFunctional> {
    let v = &mesh.vertices()[vi];
    let cap = 2 * (r + 1);
    let local_monos: Vec<(u32, u32)> = (0..=cap)
        .flat_map(|t| (0..=t).map(move |i| (t - i, i)))
        .collect();
    let index: BTreeMap<(u32, u32), usize> = local_monos
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, k))
        .collect();

    // Shift each incident generator to local coordinates at v.
    let shift = [
        Poly::variable(0).add(&Poly::constant(v.point.0.clone())),
        Poly::variable(1).add(&Poly::constant(v.point.1.clone())),
        Poly::constant(rat(1)),
    ];
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for g in incident_generators(mesh, vi, r) {
        let local = g.poly().substitute(&shift).truncate_degree(cap);
        // All monomial multiples whose truncation can be nonzero.
        for &(a, b) in &local_monos {
            let mult = local
                .mul(&Poly::monomial((a, b, 0), rat(1)))
                .truncate_degree(cap);
            if mult.is_zero() {
                continue;
            }
            let mut row = vec![Rational::zero(); local_monos.len()];
            for (&(i, j, _), c) in mult.terms() {
                row[index[&(i, j)]] = c.clone();
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        // No incident generators: every functional of order <= cap works,
        // but that situation does not occur for interior vertices of a
        // validated mesh; return nothing.
        return Vec::new();
    }
    let mat = RatMatrix::from_rows(rows);
    mat.kernel_basis()
        .into_iter()
        .map(|kv| LocalFunctional {
            v: v.point.clone(),
            coeffs: local_monos
                .iter()
                .zip(kv)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&m, c)| (m, c))
                .collect(),
        })
        .collect()
}

/// Check a mesh decomposition invariant used by the certified rank path:
///`spline_dim == dim_sd + H1` for all meshes.  Exposed for tests.
pub fn splines_vs_h1(mesh: &ValidatedMesh, r: u32, d: u32) -> (u64, u64) {
    let s = splinespace::spline_dim(mesh, r, d);
    let (_, h1) = h0_h1(mesh, r, d);
    (s, dim_sd(d) + h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_form;

    fn forms(ss: &[&str]) -> Vec<Form> {
        ss.iter().map(|s| parse_form(s).unwrap()).collect()
    }

    #[test]
    fn principal_ideal_slices() {
        // Conic generator, r = 1: generator degree 4.
        assert_eq!(binom2(4 - 4 + 2), 1); // only G^2 itself at d = 4
        assert_eq!(binom2(3 - 4 + 2), 0); // below the generator degree
        // Line generator, r = 2: C(4, 2) = 6 multiples at d = 5.
        assert_eq!(binom2(5 - 3 + 2), 6);
    }

    #[test]
    fn colon_examples() {
        // <x> : x is the unit ideal.
        assert_eq!(colon_dim(&forms(&["x"]), &parse_form("x").unwrap(), 1), 3);
        // <x^2> : y = <x^2>, whose degree-1 piece is empty.
        assert_eq!(colon_dim(&forms(&["x^2"]), &parse_form("y").unwrap(), 1), 0);
    }

    #[test]
    fn colon_of_parabola_powers() {
        // For the two crossing parabolas and h = y^2, the colon quotient
        // has multiplicity 10, so the colon slice is dim S_d - 10 for
        // large d.
        let gens = forms(&["(y*z - x^2 + z^2)^2", "(y*z + x^2 - z^2)^2"]);
        let h = parse_form("y^2").unwrap();
        for d in [10u32, 12] {
            assert_eq!(colon_dim(&gens, &h, d), dim_sd(d) - 10);
        }
    }

    #[test]
    fn multiplicity_examples() {
        // Three squared lines through one point.
        assert_eq!(
            multiplicity(&forms(&["y^2", "(y - z)^2", "(y + z)^2"]), 8).unwrap(),
            3
        );
        // A reduced point.
        assert_eq!(multiplicity(&forms(&["x", "y"]), 6).unwrap(), 1);
        // Complete intersection of two quartics: 16.
        assert_eq!(
            multiplicity(
                &forms(&["(y*z - x^2 + z^2)^2", "(y*z + x^2 - z^2)^2"]),
                12
            )
            .unwrap(),
            16
        );
        // A curve (positive-dimensional support) never stabilizes.
        assert!(matches!(
            multiplicity(&forms(&["x"]), 8),
            Err(HomologyError::NotStabilized { .. })
        ));
    }

    #[test]
    fn dual_functionals_annihilate_vertex_ideal() {
        let text = r#"{
          "vertices": [
            {"id": "c", "point": [1, 0], "interior": true},
            {"id": "s0", "point": [3, 0], "interior": false},
            {"id": "s1", "point": [-1, 2], "interior": false},
            {"id": "s2", "point": [-1, -2], "interior": false}
          ],
          "edges": [
            {"id": "sp0", "form": "y", "tail": "c", "head": "s0", "interior": true},
            {"id": "sp1", "form": "x + y - z", "tail": "c", "head": "s1", "interior": true},
            {"id": "sp2", "form": "x - y - z", "tail": "c", "head": "s2", "interior": true},
            {"id": "bd0", "form": "x + 2*y - 3*z", "tail": "s0", "head": "s1", "interior": false},
            {"id": "bd1", "form": "x + z", "tail": "s1", "head": "s2", "interior": false},
            {"id": "bd2", "form": "x - 2*y - 3*z", "tail": "s2", "head": "s0", "interior": false}
          ],
          "faces": [
            {"id": "f0", "boundary": [
              {"edge": "sp0", "sign": 1}, {"edge": "bd0", "sign": 1}, {"edge": "sp1", "sign": -1}]},
            {"id": "f1", "boundary": [
              {"edge": "sp1", "sign": 1}, {"edge": "bd1", "sign": 1}, {"edge": "sp2", "sign": -1}]},
            {"id": "f2", "boundary": [
              {"edge": "sp2", "sign": 1}, {"edge": "bd2", "sign": 1}, {"edge": "sp0", "sign": -1}]}
          ]
        }"#;
        let vm = ValidatedMesh::new(crate::mesh::Mesh::parse_json(text).unwrap()).unwrap();
        let vi = vm.vertex_index("c").unwrap();
        let r = 1u32;
        let duals = vertex_dual_functionals(&vm, vi, r);
        assert!(!duals.is_empty());
        // Every functional kills every generator multiple in a few slices.
        let gens: Vec<Form> = ["y", "x + y - z", "x - y - z"]
            .iter()
            .map(|s| parse_form(s).unwrap().pow(r + 1))
            .collect();
        for d in 4..=7u32 {
            for g in &gens {
                for m in monomial_basis(d - g.degree()) {
                    let mult = g.mul(&Form::monomial(m, crate::exactalg::rat(1)));
                    for q in &duals {
                        assert!(q.apply_form(&mult).is_zero());
                    }
                }
            }
        }
        // At stabilized degrees the count matches the vertex quotient.
        let d = 8u32;
        let quotient = dim_sd(d) - dim_j_vertex_idx(&vm, vi, r, d);
        assert_eq!(duals.len() as u64, quotient);
    }
}
