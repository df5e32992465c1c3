//! Numeric support for genericity checks: exact resultants for eliminating
//! one variable from a pair of ternary forms, complex root finding for the
//! resulting univariate polynomials, and tolerance-based point handling.
//!
//! Pairwise intersection points of distinct edge curves are generally
//! irrational, so they are located in double precision and every consumer
//! of these points records a numeric caveat.  Candidate points are always
//! re-checked against both input forms before use; the resultant can
//! therefore afford to be optimistic.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::exactalg::{rat, Form, Poly, RatMatrix, Rational};

/// Projective point over the complex numbers, kept unnormalized; all
/// comparisons are scale-invariant.
pub type ProjPoint = [Complex64; 3];

/// Chordal (scale-invariant) distance between projective points.
pub fn chordal_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let cross = [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ];
    let num = cross.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let np = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nq = q.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if np == 0.0 || nq == 0.0 {
        return f64::INFINITY;
    }
    num / (np * nq)
}

/// Scale all coordinates so the largest becomes 1; for display and dedup
/// keys only.
pub fn normalize(p: &ProjPoint) -> ProjPoint {
    let (k, _) = p
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
        .unwrap();
    if p[k].norm() == 0.0 {
        return *p;
    }
    let s = p[k];
    [p[0] / s, p[1] / s, p[2] / s]
}

/// Relative residual of a form at a complex projective point: the value
/// divided by the coefficient mass times the point magnitude to the degree,
/// so it is invariant under scaling either the form or the point.
pub fn relative_residual(form: &Form, p: &ProjPoint) -> f64 {
    let val = form.evaluate_complex(p).norm();
    let mag = p.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if mag == 0.0 {
        return f64::INFINITY;
    }
    let mass: f64 = form
        .terms()
        .map(|(_, coef)| coef.to_f64().unwrap_or(0.0).abs())
        .sum();
    if mass == 0.0 {
        return f64::INFINITY;
    }
    val / (mass * mag.powi(form.degree() as i32))
}

pub fn vanishes_numerically(form: &Form, p: &ProjPoint, tol: f64) -> bool {
    relative_residual(form, p) <= tol
}

/// Whether the point has a numerically significant imaginary part.
pub fn is_complex_point(p: &ProjPoint, tol: f64) -> bool {
    let n = normalize(p);
    n.iter().any(|c| c.im.abs() > tol.max(1e-12).sqrt())
}

// ---------------------------------------------------------------------------
// Roots of univariate complex polynomials

/// All complex roots of `sum_k coeffs[k] z^k` by Durand-Kerner iteration.
/// Leading zero coefficients are trimmed first.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() < 1e-300) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    // Initial guesses on a slightly irrational spiral.
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 0.4 + 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64);
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for v in monic.iter().rev() {
            acc = acc * z + v;
        }
        acc
    };
    for _ in 0..200 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    roots
}

// ---------------------------------------------------------------------------
// Resultants

fn z_coefficients(f: &Form) -> Vec<Poly> {
    let n = f.degree() as usize;
    let mut out = vec![Poly::zero(); n + 1];
    for (&(a, b, c), coef) in f.terms() {
        out[c as usize].add_term((a, b, 0), coef.clone());
    }
    out
}

/// Exact univariate resultant of two rational-coefficient polynomials given
/// with formal degrees (leading entries may be zero).
fn sylvester_resultant(a: &[Rational], b: &[Rational]) -> Rational {
    let n = a.len() - 1;
    let m = b.len() - 1;
    if n == 0 || m == 0 {
        // Constant cases: Res(a0, g) = a0^deg g and symmetrically.
        if n == 0 {
            return pow_rat(&a[0], m as u32);
        }
        return pow_rat(&b[0], n as u32);
    }
    let size = n + m;
    let mut mat = RatMatrix::zero(size, size);
    for row in 0..m {
        for (k, coef) in a.iter().enumerate() {
            mat.set(row, row + (n - k), coef.clone());
        }
    }
    for row in 0..n {
        for (k, coef) in b.iter().enumerate() {
            mat.set(m + row, row + (m - k), coef.clone());
        }
    }
    mat.determinant()
}

fn pow_rat(x: &Rational, k: u32) -> Rational {
    let mut out = rat(1);
    for _ in 0..k {
        out *= x;
    }
    out
}

/// Coefficients `c_0..c_{nm}` of the resultant of `f` and `g` with respect
/// to `z`, viewed as the binary form `sum c_k x^k y^{nm-k}`.  Exact, via
/// interpolation at integer slopes.
pub fn resultant_z(f: &Form, g: &Form) -> Vec<Rational> {
    let n = f.degree() as usize;
    let m = g.degree() as usize;
    let fz = z_coefficients(f);
    let gz = z_coefficients(g);
    let deg = n * m;
    let eval_at = |t: i64| -> Rational {
        let p = [rat(t), rat(1), rat(0)];
        let a: Vec<Rational> = fz.iter().map(|c| c.evaluate(&p)).collect();
        let b: Vec<Rational> = gz.iter().map(|c| c.evaluate(&p)).collect();
        sylvester_resultant(&a, &b)
    };
    // Interpolate through deg+1 integer points.
    let points: Vec<(Rational, Rational)> =
        (0..=deg as i64).map(|t| (rat(t), eval_at(t))).collect();
    lagrange_coefficients(&points)
}

/// Exact coefficients of the interpolating polynomial through the points.
fn lagrange_coefficients(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = points.len();
    let mut acc = vec![Rational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // Basis polynomial prod_{j != i} (t - xj), plus its denominator.
        let mut denom = rat(1);
        let mut basis = vec![rat(1)];
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= xi - xj;
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * xj;
            }
            basis = next;
        }
        let scale = yi / &denom;
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    acc
}

/// All common projective zeros of two forms without a common factor,
/// located numerically.  Points are verified against both forms before
/// being returned; conjugate pairs are both present.
///
/// Returns `None` when the resultant vanishes identically (shared
/// component) in every sheared position tried.
pub fn common_zeros(f: &Form, g: &Form, tol: f64) -> Option<Vec<ProjPoint>> {
    for shear in 0..4i64 {
        let (fs, gs) = (shear_x(f, shear), shear_x(g, shear));
        if fs.coeff((0, 0, fs.degree())).is_zero() && gs.coeff((0, 0, gs.degree())).is_zero() {
            // Both curves pass through [0:0:1]; elimination of z is
            // degenerate in this position.
            continue;
        }
        let res = resultant_z(&fs, &gs);
        if res.iter().all(Zero::is_zero) {
            continue;
        }
        let mut points = Vec::new();
        let coeffs: Vec<Complex64> = res
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0))
            .collect();
        let full_deg = res.len() - 1;
        let eff_deg = res
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0);
        let mut directions: Vec<(Complex64, Complex64)> = complex_roots(&coeffs)
            .into_iter()
            .map(|t| (t, Complex64::new(1.0, 0.0)))
            .collect();
        if eff_deg < full_deg {
            // Degree drop: the direction [1:0] is a root at infinity.
            directions.push((Complex64::new(1.0, 0.0), Complex64::zero()));
        }
        for (x0, y0) in directions {
            let fz: Vec<Complex64> = z_slice(&fs, x0, y0);
            let gz: Vec<Complex64> = z_slice(&gs, x0, y0);
            let fzero = fz.iter().all(|c| c.norm() < 1e-9);
            let gzero = gz.iter().all(|c| c.norm() < 1e-9);
            let candidates: Vec<Complex64> = if fzero && gzero {
                continue;
            } else if fzero {
                complex_roots(&gz)
            } else if gzero {
                complex_roots(&fz)
            } else {
                complex_roots(&fz)
            };
            for zr in candidates {
                let p: ProjPoint = [x0, y0, zr];
                if vanishes_numerically(&fs, &p, tol) && vanishes_numerically(&gs, &p, tol) {
                    points.push(p);
                }
            }
            // z = infinity candidate for this direction: [x0 : y0 : 0].
            let pinf: ProjPoint = [x0, y0, Complex64::zero()];
            if vanishes_numerically(&fs, &pinf, tol) && vanishes_numerically(&gs, &pinf, tol) {
                points.push(pinf);
            }
        }
        // Undo the shear: (x, y, z) -> (x - shear*z, y, z).
        let unshift = |p: ProjPoint| -> ProjPoint {
            [p[0] - Complex64::new(shear as f64, 0.0) * p[2], p[1], p[2]]
        };
        let mut out: Vec<ProjPoint> = Vec::new();
        let merge_tol = (tol * 100.0).max(1e-7);
        for p in points.into_iter().map(unshift) {
            if !out.iter().any(|q| chordal_distance(&p, q) < merge_tol) {
                out.push(normalize(&p));
            }
        }
        out.sort_by(|a, b| point_sort_key(a).partial_cmp(&point_sort_key(b)).unwrap());
        return Some(out);
    }
    None
}

fn shear_x(f: &Form, lambda: i64) -> Form {
    if lambda == 0 {
        return f.clone();
    }
    let subs = [
        Poly::variable(0).add(&Poly::monomial((0, 0, 1), rat(lambda))),
        Poly::variable(1),
        Poly::variable(2),
    ];
    Form::from_poly(f.poly().substitute(&subs)).expect("shear preserves homogeneity")
}

fn z_slice(f: &Form, x0: Complex64, y0: Complex64) -> Vec<Complex64> {
    let n = f.degree() as usize;
    let mut out = vec![Complex64::zero(); n + 1];
    for (&(a, b, c), coef) in f.terms() {
        let cf = coef.to_f64().unwrap_or(0.0);
        out[c as usize] += Complex64::new(cf, 0.0) * x0.powu(a) * y0.powu(b);
    }
    out
}

fn point_sort_key(p: &ProjPoint) -> [f64; 6] {
    let n = normalize(p);
    [n[0].re, n[0].im, n[1].re, n[1].im, n[2].re, n[2].im]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_form;

    #[test]
    fn roots_of_quadratic() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let roots = complex_roots(&[
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - 1.0).abs() < 1e-10);
        assert!((re[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn parabola_intersections() {
        // The two parabolas meet at (-1, 0), (1, 0) and at [0:1:0].
        let up = parse_form("y*z - x^2 + z^2").unwrap();
        let down = parse_form("y*z + x^2 - z^2").unwrap();
        let pts = common_zeros(&up, &down, 1e-9).unwrap();
        assert_eq!(pts.len(), 3, "{pts:?}");
        let expect = [
            [Complex64::new(-1.0, 0.0), Complex64::zero(), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::new(1.0, 0.0)],
            [Complex64::zero(), Complex64::new(1.0, 0.0), Complex64::zero()],
        ];
        for e in &expect {
            assert!(
                pts.iter().any(|p| chordal_distance(p, e) < 1e-7),
                "missing {e:?} in {pts:?}"
            );
        }
    }

    #[test]
    fn conjugate_pair_found() {
        // x^2 + z^2 and y: common zeros [i:0:1], [-i:0:1].
        let a = parse_form("x^2 + z^2").unwrap();
        let b = parse_form("y").unwrap();
        let pts = common_zeros(&a, &b, 1e-9).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| is_complex_point(p, 1e-9)));
    }

    #[test]
    fn line_pair_single_point() {
        let a = parse_form("2*x + y + 2*z").unwrap();
        let b = parse_form("2*x - y + 2*z").unwrap();
        let pts = common_zeros(&a, &b, 1e-9).unwrap();
        assert_eq!(pts.len(), 1);
        let v = [
            Complex64::new(-1.0, 0.0),
            Complex64::zero(),
            Complex64::new(1.0, 0.0),
        ];
        assert!(chordal_distance(&pts[0], &v) < 1e-8);
    }
}
