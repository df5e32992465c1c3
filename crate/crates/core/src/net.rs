//! Nets of forms: three forms of equal degree spanning a three-dimensional
//! space define a rational self-map of the projective plane.  A mesh whose
//! edge forms all lie in the net is transported to a rectilinear image
//! mesh, and the two Hilbert functions are related by a convolution with
//! the coefficients of `(1 + t + ... + t^{n-1})^3`.

use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::exactalg::{
    dim_sd, monomial_basis, monomial_count, monomial_index, parse_form, rat, Form, FormError,
    RatMatrix, Rational,
};
use crate::hilbert::Quadratic;
use crate::mesh::{Mesh, MeshDocument, MeshError, ValidatedMesh};

#[derive(Debug, Error)]
pub enum NetError {
    #[error("net forms must share one degree, found {0} and {1}")]
    DegreeMismatch(u32, u32),
    #[error("net forms span a space of dimension {0}, need 3")]
    SpanDeficient(usize),
    #[error("net has basepoints: the three forms share a zero")]
    HasBasepoints,
    #[error("edge form `{0}` does not lie in the net")]
    NotInNet(String),
    #[error("image vertex `{0}` lands at infinity")]
    ImageVertexAtInfinity(String),
    #[error("image Hilbert data missing for degree {0}")]
    InsufficientImageData(u32),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// A verified net: three degree-`n` forms with three-dimensional span and
/// no common zero.
#[derive(Clone, Debug)]
pub struct NetSpec {
    pub f: Form,
    pub g: Form,
    pub h: Form,
    pub n: u32,
    pub basepoint_free: bool,
}

#[derive(Deserialize)]
struct NetDocument {
    forms: [String; 3],
}

impl NetSpec {
    /// Verify span dimension and basepoint-freeness.
    ///
    /// Basepoints are detected without any root finding: three degree-`n`
    /// forms without common zeros form a regular sequence, whose quotient
    /// ring vanishes in degrees beyond `3n - 3`; a common zero forces every
    /// degree to stay positive.  So the quotient slice at `3n - 2` is zero
    /// exactly when the net is basepoint-free.
    pub fn new(f: Form, g: Form, h: Form) -> Result<NetSpec, NetError> {
        let n = f.degree();
        for other in [&g, &h] {
            if other.degree() != n || other.is_zero() || f.is_zero() {
                return Err(NetError::DegreeMismatch(n, other.degree()));
            }
        }
        let rows: Vec<Vec<Rational>> = [&f, &g, &h]
            .iter()
            .map(|x| x.coeff_vector(n).expect("degree checked"))
            .collect();
        let span = RatMatrix::from_rows(rows).rank();
        if span != 3 {
            return Err(NetError::SpanDeficient(span));
        }
        let probe_deg = 3 * n - 2;
        let ideal_rank = ideal_slice_rank(&[f.clone(), g.clone(), h.clone()], probe_deg);
        let basepoint_free = ideal_rank == dim_sd(probe_deg) as usize;
        if !basepoint_free {
            return Err(NetError::HasBasepoints);
        }
        Ok(NetSpec {
            f,
            g,
            h,
            n,
            basepoint_free,
        })
    }

    pub fn parse_json(text: &str) -> Result<NetSpec, NetError> {
        let doc: NetDocument = serde_json::from_str(text)
            .map_err(|e| NetError::Mesh(MeshError::Schema(e.to_string())))?;
        let f = parse_form(&doc.forms[0])?;
        let g = parse_form(&doc.forms[1])?;
        let h = parse_form(&doc.forms[2])?;
        NetSpec::new(f, g, h)
    }

    /// Solve `G = alpha f + beta g + gamma h` exactly; `None` when `G` lies
    /// outside the net.
    pub fn membership(&self, form: &Form) -> Option<[Rational; 3]> {
        if form.is_zero() || form.degree() != self.n {
            return None;
        }
        let nd = monomial_count(self.n);
        let mut rows = Vec::with_capacity(nd);
        let fv = self.f.coeff_vector(self.n).unwrap();
        let gv = self.g.coeff_vector(self.n).unwrap();
        let hv = self.h.coeff_vector(self.n).unwrap();
        let tv = form.coeff_vector(self.n).unwrap();
        for i in 0..nd {
            rows.push(vec![
                fv[i].clone(),
                gv[i].clone(),
                hv[i].clone(),
                tv[i].clone(),
            ]);
        }
        let aug = RatMatrix::from_rows(rows);
        // Consistent iff some kernel vector has nonzero last coordinate.
        for v in aug.kernel_basis() {
            if !v[3].is_zero() {
                let s = -v[3].recip();
                return Some([&v[0] * &s, &v[1] * &s, &v[2] * &s]);
            }
        }
        None
    }

    /// The linear form `alpha x + beta y + gamma z` whose pullback through
    /// the net is `G`.
    pub fn image_line(&self, form: &Form) -> Option<Form> {
        let [a, b, c] = self.membership(form)?;
        let mut out = Form::zero();
        for (i, coef) in [a, b, c].into_iter().enumerate() {
            if !coef.is_zero() {
                out = out.add(&Form::variable(i).scale(&coef));
            }
        }
        Some(out)
    }
}

fn ideal_slice_rank(gens: &[Form], d: u32) -> usize {
    use crate::exactalg::{Exp, SparseMat};
    let mut mat = SparseMat::new(monomial_count(d));
    for g in gens {
        if g.degree() > d {
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
    mat.rank_exact()
}

/// Quotient-ring coefficients `c_n(j) = dim (S/<f,g,h>)_j` for a
/// basepoint-free net of degree `n`: the coefficients of
/// `(1 + t + ... + t^{n-1})^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnTable {
    pub n: u32,
    pub values: Vec<u64>,
}

impl CnTable {
    pub fn get(&self, j: usize) -> u64 {
        self.values.get(j).copied().unwrap_or(0)
    }
}

pub fn c_table(n: u32) -> CnTable {
    assert!(n >= 1);
    let block = vec![1u64; n as usize];
    let mut acc = vec![1u64];
    for _ in 0..3 {
        let mut next = vec![0u64; acc.len() + block.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in block.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    CnTable { n, values: acc }
}

/// The sliding sums `c_n(i) + c_n(i+n) + c_n(i+2n) = n^2` for `0 <= i < n`.
pub fn cn_sum_check(n: u32) -> bool {
    let t = c_table(n);
    (0..n as usize).all(|i| {
        t.get(i) + t.get(i + n as usize) + t.get(i + 2 * n as usize) == (n as u64) * (n as u64)
    })
}

/// Transport a mesh through the net: identical combinatorics, every edge
/// form replaced by its image line, vertex coordinates mapped through the
/// net and dehomogenized.
///
/// Returns the image mesh plus warnings about coordinate collisions (the
/// map need not be injective; only combinatorics and forms feed the
/// algebra).
pub fn image_mesh(mesh: &ValidatedMesh, net: &NetSpec) -> Result<(Mesh, Vec<String>), NetError> {
    let mut doc: MeshDocument = mesh.to_document();
    let mut warnings = Vec::new();
    for e in &mut doc.edges {
        let src = mesh.edges()[mesh.edge_index(&e.id).unwrap()].form.clone();
        let line = net
            .image_line(&src)
            .ok_or_else(|| NetError::NotInNet(e.id.clone()))?;
        e.form = Some(line.to_string());
        e.curve = None;
    }
    let mut images: Vec<(String, Rational, Rational)> = Vec::new();
    for v in &mut doc.vertices {
        let p = [v.point[0].0.clone(), v.point[1].0.clone(), rat(1)];
        let fx = net.f.evaluate(&p);
        let gy = net.g.evaluate(&p);
        let hz = net.h.evaluate(&p);
        if hz.is_zero() {
            return Err(NetError::ImageVertexAtInfinity(v.id.clone()));
        }
        let ix = &fx / &hz;
        let iy = &gy / &hz;
        for (other, ox, oy) in &images {
            if *ox == ix && *oy == iy {
                warnings.push(format!(
                    "vertices {} and {} map to the same image point",
                    other, v.id
                ));
            }
        }
        images.push((v.id.clone(), ix.clone(), iy.clone()));
        v.point = [crate::mesh::RationalText(ix), crate::mesh::RationalText(iy)];
    }
    Ok((Mesh::from_document(doc)?, warnings))
}

/// Hilbert data of the image mesh available for the tensor transfer.
#[derive(Clone, Debug)]
pub struct ImageHilbert {
    pub values: Vec<u64>,
    pub hp: Option<Quadratic>,
    /// Degrees strictly above this agree with `hp`.
    pub postulation: i64,
}

impl ImageHilbert {
    pub fn from_table(values: Vec<u64>) -> Self {
        ImageHilbert {
            values,
            hp: None,
            postulation: i64::MAX,
        }
    }

    fn value(&self, i: u32) -> Option<u64> {
        if let Some(v) = self.values.get(i as usize) {
            return Some(*v);
        }
        match &self.hp {
            Some(hp) if (i as i64) > self.postulation => hp.eval_u64(i),
            _ => None,
        }
    }
}

/// Dimension transfer: `sum over n*i + j = d of hf_image(i) * c_n(j)`.
pub fn tensor_dim(image: &ImageHilbert, n: u32, d: u32) -> Result<u64, NetError> {
    let c = c_table(n);
    let mut acc = 0u64;
    for i in 0..=d / n {
        let j = (d - n * i) as usize;
        let cj = c.get(j);
        if cj == 0 {
            continue;
        }
        let hf = image.value(i).ok_or(NetError::InsufficientImageData(i))?;
        acc += cj * hf;
    }
    Ok(acc)
}

/// Transform the image-mesh Hilbert polynomial `a d^2 + b d + c` into the
/// source-mesh one, together with the postulation bound `n (d0 + 3) - 3`
/// when the image postulation is supplied.
///
/// Derived by matching coefficients in `P(n i) = p(i) + c_n(n) p(i-1) +
/// c_n(2n) p(i-2)` using `1 + c_n(n) + c_n(2n) = n^2`.
pub fn hp_transform(
    q: &Quadratic,
    n: u32,
    image_postulation: Option<i64>,
) -> (Quadratic, Option<i64>) {
    let c = c_table(n);
    let cn = rat(c.get(n as usize) as i64);
    let c2n = rat(c.get(2 * n as usize) as i64);
    let nn = rat(n as i64);
    let a = q.a.clone();
    let b = &q.b * &nn - rat(2) * &q.a * (&cn + rat(2) * &c2n) / &nn;
    let cc = &q.a * (&cn + rat(4) * &c2n) - &q.b * (&cn + rat(2) * &c2n) + &q.c * &nn * &nn;
    let bound = image_postulation.map(|d0| (n as i64) * (d0 + 3) - 3);
    (Quadratic { a, b, c: cc }, bound)
}

/// `u64` downcast of an exact nonnegative integer value.
pub fn table_u64(v: &Rational) -> Option<u64> {
    if v.is_integer() {
        v.numer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat_frac;

    fn ms_net() -> NetSpec {
        NetSpec::new(
            parse_form("x^2 - y*z").unwrap(),
            parse_form("y^2 - x*z").unwrap(),
            parse_form("z^2 + x*y").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn quadratic_net_is_valid() {
        let net = ms_net();
        assert_eq!(net.n, 2);
        assert!(net.basepoint_free);
    }

    #[test]
    fn coordinate_net_is_valid() {
        let net = NetSpec::new(
            parse_form("x").unwrap(),
            parse_form("y").unwrap(),
            parse_form("z").unwrap(),
        )
        .unwrap();
        assert_eq!(net.n, 1);
    }

    #[test]
    fn basepoint_detected() {
        let err = NetSpec::new(
            parse_form("x^2").unwrap(),
            parse_form("x*y").unwrap(),
            parse_form("y^2").unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, NetError::HasBasepoints));
    }

    #[test]
    fn span_deficiency_detected() {
        let err = NetSpec::new(
            parse_form("x^2").unwrap(),
            parse_form("y^2").unwrap(),
            parse_form("x^2 + y^2").unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, NetError::SpanDeficient(2)));
    }

    #[test]
    fn membership_examples() {
        let net = ms_net();
        // 3(x^2 - yz) + (y^2 - xz)
        let b = parse_form("3*x^2 - x*z + y^2 - 3*y*z").unwrap();
        assert_eq!(net.membership(&b), Some([rat(3), rat(1), rat(0)]));
        assert_eq!(
            net.membership(&net.f.clone()),
            Some([rat(1), rat(0), rat(0)])
        );
        assert_eq!(net.membership(&parse_form("x^2 + y^2 + z^2").unwrap()), None);
    }

    #[test]
    fn c_tables() {
        assert_eq!(c_table(1).values, vec![1]);
        assert_eq!(c_table(2).values, vec![1, 3, 3, 1]);
        assert_eq!(c_table(3).values, vec![1, 3, 6, 7, 6, 3, 1]);
        for n in 1..=8 {
            let t = c_table(n);
            let total: u64 = t.values.iter().sum();
            assert_eq!(total, (n as u64).pow(3));
            let len = t.values.len();
            for j in 0..len {
                assert_eq!(t.values[j], t.values[len - 1 - j], "symmetry at n={n}");
            }
            assert!(cn_sum_check(n));
        }
    }

    #[test]
    fn hp_transform_examples() {
        // Quadratic net: (7/2, -15/2, 7) -> (7/2, -51/2, 61).
        let img = Quadratic {
            a: rat_frac(7, 2),
            b: rat_frac(-15, 2),
            c: rat(7),
        };
        let (q, bound) = hp_transform(&img, 2, Some(2));
        assert_eq!(q.a, rat_frac(7, 2));
        assert_eq!(q.b, rat_frac(-51, 2));
        assert_eq!(q.c, rat(61));
        assert_eq!(bound, Some(7));

        // Degree-1 net is the identity transform.
        let (id, _) = hp_transform(&img, 1, None);
        assert_eq!(id, img);

        // General n = 2 shape: (a, 2b - 3a, 3a - 3b + 4c).
        let q0 = Quadratic {
            a: rat(5),
            b: rat(-7),
            c: rat(11),
        };
        let (t, _) = hp_transform(&q0, 2, None);
        assert_eq!(t.a, rat(5));
        assert_eq!(t.b, rat(2 * -7 - 3 * 5));
        assert_eq!(t.c, rat(3 * 5 - 3 * -7 + 4 * 11));
    }

    #[test]
    fn tensor_examples() {
        // Image-mesh data for the quadratic net mesh.
        let img = ImageHilbert::from_table(vec![1, 3, 7, 16, 33, 57, 88]);
        assert_eq!(tensor_dim(&img, 2, 7).unwrap(), 55);
        assert_eq!(tensor_dim(&img, 2, 4).unwrap(), 16);
        // n = 1 reduces to the image value itself.
        assert_eq!(tensor_dim(&img, 1, 5).unwrap(), 57);
        // Beyond the table without a polynomial: error.
        assert!(matches!(
            tensor_dim(&img, 2, 20),
            Err(NetError::InsufficientImageData(_))
        ));
    }
}
