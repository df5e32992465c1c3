//! Sparse polynomials in `x, y, z` and homogeneous forms.
//!
//! Monomial order is graded lexicographic with `x > y > z`, fixed once here
//! so that coefficient vectors and kernel bases are reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, Rational};

/// Exponent triple `(a, b, c)` standing for `x^a y^b z^c`.
pub type Exp = (u32, u32, u32);

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// Number of monomials of degree exactly `d` in three variables.
pub fn monomial_count(d: u32) -> usize {
    ((d as usize + 1) * (d as usize + 2)) / 2
}

/// Monomials of degree `d` in graded lexicographic order with `x > y > z`,
/// largest first: `x^d, x^{d-1}y, x^{d-1}z, ...`.
///
/// The order is stable across runs; coefficient vectors everywhere in this
/// crate are indexed against it.
pub fn monomial_basis(d: u32) -> Vec<Exp> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push((a, b, d - a - b));
        }
    }
    out
}

/// Index of `(a, b, c)` within `monomial_basis(a + b + c)`.
pub fn monomial_index(e: Exp) -> usize {
    let d = e.0 + e.1 + e.2;
    let k = (d - e.0) as usize;
    k * (k + 1) / 2 + (d - e.0 - e.1) as usize
}

/// Sparse polynomial in three variables with exact rational coefficients.
///
/// Stored coefficients are always nonzero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn variable(i: usize) -> Self {
        let e = match i {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            _ => (0, 0, 1),
        };
        let mut p = Poly::zero();
        p.add_term(e, rat(1));
        p
    }

    pub fn monomial(e: Exp, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exp) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(a, b, c)| a + b + c)
            .max()
            .unwrap_or(0)
    }

    /// Minimum total degree among the terms (order of vanishing at the origin).
    pub fn min_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(a, b, c)| a + b + c)
            .min()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exp, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(rat(1));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Drop all terms of total degree greater than `cap`.
    pub fn truncate_degree(&self, cap: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, b, c), _)| a + b + c <= cap)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, p: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (&(a, b, c), coeff) in &self.terms {
            let mut term = coeff.clone();
            for _ in 0..a {
                term *= &p[0];
            }
            for _ in 0..b {
                term *= &p[1];
            }
            for _ in 0..c {
                term *= &p[2];
            }
            acc += term;
        }
        acc
    }

    pub fn evaluate_complex(&self, p: &[Complex64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(a, b, c), coeff) in &self.terms {
            let cf = coeff.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::new(cf, 0.0)
                * p[0].powu(a)
                * p[1].powu(b)
                * p[2].powu(c);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (&(a, b, c), coeff) in &self.terms {
            let (e, mult) = match var {
                0 if a > 0 => ((a - 1, b, c), a),
                1 if b > 0 => ((a, b - 1, c), b),
                2 if c > 0 => ((a, b, c - 1), c),
                _ => continue,
            };
            out.add_term(e, coeff * rat(mult as i64));
        }
        out
    }

    /// Substitute `x -> sx + tx*z`-style affine shifts is not needed; this
    /// substitutes each variable by the given polynomial.
    pub fn substitute(&self, subs: &[Poly; 3]) -> Poly {
        let mut out = Poly::zero();
        for (&(a, b, c), coeff) in &self.terms {
            let mut term = Poly::constant(coeff.clone());
            if a > 0 {
                term = term.mul(&subs[0].pow(a));
            }
            if b > 0 {
                term = term.mul(&subs[1].pow(b));
            }
            if c > 0 {
                term = term.mul(&subs[2].pow(c));
            }
            out = out.add(&term);
        }
        out
    }

    /// Leading term in graded lexicographic order (`x > y > z`), if nonzero.
    fn leading_term(&self) -> Option<(Exp, &Rational)> {
        self.terms
            .iter()
            .max_by(|(e1, _), (e2, _)| grlex_cmp(**e1, **e2))
            .map(|(e, c)| (*e, c))
    }

    /// Exact division: returns `q` with `self = q * divisor`, or `None` if
    /// the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (dlt, dlc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rlt, rlc) = rem.leading_term().unwrap();
            if rlt.0 < dlt.0 || rlt.1 < dlt.1 || rlt.2 < dlt.2 {
                return None;
            }
            let qe = (rlt.0 - dlt.0, rlt.1 - dlt.1, rlt.2 - dlt.2);
            let qc = rlc / dlc;
            let qterm = Poly::monomial(qe, qc);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }
}

fn grlex_cmp(a: Exp, b: Exp) -> std::cmp::Ordering {
    let da = a.0 + a.1 + a.2;
    let db = b.0 + b.1 + b.2;
    da.cmp(&db).then(a.cmp(&b))
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(self))
    }
}

/// Homogeneous polynomial (form) in three variables.
///
/// Every stored coefficient is nonzero and all exponent triples sum to the
/// stated degree.  The zero form carries degree 0 by convention; consumers
/// treat it degree-agnostically.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    degree: u32,
    poly: Poly,
}

impl Form {
    pub fn zero() -> Self {
        Form {
            degree: 0,
            poly: Poly::zero(),
        }
    }

    /// Wrap a polynomial, checking homogeneity.  Returns `None` when terms
    /// of different total degrees are present.
    pub fn from_poly(p: Poly) -> Option<Form> {
        if p.is_zero() {
            return Some(Form::zero());
        }
        let d = p.total_degree();
        if p.min_degree() != d {
            return None;
        }
        Some(Form { degree: d, poly: p })
    }

    pub fn monomial(e: Exp, c: Rational) -> Form {
        Form::from_poly(Poly::monomial(e, c)).unwrap()
    }

    pub fn variable(i: usize) -> Form {
        Form::from_poly(Poly::variable(i)).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn coeff(&self, e: Exp) -> Rational {
        self.poly.coeff(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.poly.terms()
    }

    /// Sum of forms of equal degree (or with a zero operand).
    pub fn add(&self, other: &Form) -> Form {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let p = self.poly.add(&other.poly);
        let degree = self.degree;
        if p.is_zero() {
            Form::zero()
        } else {
            Form { degree, poly: p }
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            degree: self.degree,
            poly: self.poly.neg(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Form {
        if s.is_zero() {
            return Form::zero();
        }
        Form {
            degree: self.degree,
            poly: self.poly.scale(s),
        }
    }

    pub fn mul(&self, other: &Form) -> Form {
        if self.is_zero() || other.is_zero() {
            return Form::zero();
        }
        Form {
            degree: self.degree + other.degree,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn pow(&self, k: u32) -> Form {
        if k == 0 {
            return Form::monomial((0, 0, 0), rat(1));
        }
        if self.is_zero() {
            return Form::zero();
        }
        Form {
            degree: self.degree * k,
            poly: self.poly.pow(k),
        }
    }

    pub fn evaluate(&self, p: &[Rational; 3]) -> Rational {
        self.poly.evaluate(p)
    }

    pub fn evaluate_complex(&self, p: &[Complex64; 3]) -> Complex64 {
        self.poly.evaluate_complex(p)
    }

    /// Triple of partial derivative values at `p`.
    pub fn gradient_at(&self, p: &[Rational; 3]) -> [Rational; 3] {
        [
            self.poly.partial(0).evaluate(p),
            self.poly.partial(1).evaluate(p),
            self.poly.partial(2).evaluate(p),
        ]
    }

    /// Exact division by another form; `None` when not divisible.
    pub fn div_exact(&self, divisor: &Form) -> Option<Form> {
        if self.is_zero() {
            return Some(Form::zero());
        }
        let q = self.poly.div_exact(&divisor.poly)?;
        Form::from_poly(q)
    }

    /// Substitute `z = 1`, producing a polynomial in `x, y`.
    pub fn dehomogenize(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(a, b, _), c) in self.poly.terms() {
            out.add_term((a, b, 0), c.clone());
        }
        out
    }

    /// Coefficient vector against `monomial_basis(d)`.  Returns `None` when
    /// the form is nonzero of a different degree.
    pub fn coeff_vector(&self, d: u32) -> Option<Vec<Rational>> {
        if !self.is_zero() && self.degree != d {
            return None;
        }
        let mut v = vec![Rational::zero(); monomial_count(d)];
        for (&e, c) in self.poly.terms() {
            v[monomial_index(e)] = c.clone();
        }
        Some(v)
    }

    /// Whether two nonzero forms are scalar multiples of each other.
    pub fn proportional(&self, other: &Form) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.degree != other.degree || self.num_terms() != other.num_terms() {
            return false;
        }
        let (e0, c0) = self.poly.terms().next().unwrap();
        let d0 = other.poly.coeff(*e0);
        if d0.is_zero() {
            return false;
        }
        let ratio = c0 / &d0;
        self.poly
            .terms()
            .all(|(e, c)| other.poly.coeff(*e) * &ratio == *c)
    }

    /// Canonical representative of the scalar class: integer coefficients
    /// with content 1 and positive leading (graded-lex) coefficient.
    pub fn normalized(&self) -> Form {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return Form::zero();
        }
        let mut denom_lcm = BigInt::one();
        for (_, c) in self.poly.terms() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in self.poly.terms() {
            num_gcd = num_gcd.gcd(&(c.numer() * &denom_lcm / c.denom()));
        }
        let mut s = Rational::new(denom_lcm, num_gcd);
        let lead = self
            .poly
            .terms()
            .max_by(|(e1, _), (e2, _)| grlex_cmp(**e1, **e2))
            .unwrap()
            .1;
        if (lead * &s).is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.poly))
    }
}

/// Render in the input grammar: `3*x^2 - 1/2*y*z + z^2`.
fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(Exp, Rational)> = p.terms().map(|(e, c)| (*e, c.clone())).collect();
    terms.sort_by(|(a, _), (b, _)| grlex_cmp(*b, *a));
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || *e == (0, 0, 0) {
            factors.push(mag.to_string());
        }
        for (v, &pow) in [e.0, e.1, e.2].iter().enumerate() {
            match pow {
                0 => {}
                1 => factors.push(VAR_NAMES[v].to_string()),
                k => factors.push(format!("{}^{}", VAR_NAMES[v], k)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Homogenize a two-variable polynomial `p(x, y)` with respect to `z`:
/// each monomial is multiplied by the power of `z` raising it to the total
/// degree of `p`.
pub fn homogenize(p: &Poly) -> Form {
    if p.is_zero() {
        return Form::zero();
    }
    let d = p.total_degree();
    let mut out = Poly::zero();
    for (&(a, b, c), coeff) in p.terms() {
        assert_eq!(c, 0, "homogenize expects a polynomial in x, y only");
        out.add_term((a, b, d - a - b), coeff.clone());
    }
    Form::from_poly(out).expect("homogenization yields a form")
}
