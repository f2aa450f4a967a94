//! Exact sparse polynomial arithmetic over the rationals in the two formal
//! variables `s` (a skewness slot) and `k` (a kurtosis slot).
//!
//! Likelihood coefficients and matching conditions are polynomial identities
//! in these slots, so every symbolic check in this crate runs on [`Poly2`]
//! with exact [`Rational`] coefficients; floats only appear at evaluation
//! time. Univariate polynomials in `s` are the special case with every
//! `k`-exponent zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational denominator must be nonzero");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        // Falls back to the quotient of float-converted parts only for
        // magnitudes beyond f64 range, which no likelihood family reaches.
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p/q` or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::parse("rational", format!("bad numerator in `{s}`")))?;
        let d: BigInt = match den {
            Some(d) => d
                .parse()
                .map_err(|_| Error::parse("rational", format!("bad denominator in `{s}`")))?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(Error::parse("rational", format!("zero denominator in `{s}`")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

/// Sparse bivariate polynomial in `(s, k)` with exact rational coefficients.
///
/// Terms map `(s-exponent, k-exponent)` to a nonzero coefficient; the zero
/// polynomial is the empty map, and equality is exact equality of the maps.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly2::constant(Rational::from_int(n))
    }

    /// The variable `s`.
    pub fn var_s() -> Self {
        Poly2::term(1, 0, Rational::one())
    }

    /// The variable `k`.
    pub fn var_k() -> Self {
        Poly2::term(0, 1, Rational::one())
    }

    /// A single term `c * s^i * k^j`.
    pub fn term(i: u32, j: u32, c: Rational) -> Self {
        let mut p = Poly2::zero();
        p.add_term(i, j, c);
        p
    }

    /// Builds from `(i, j, coefficient)` triples, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Rational)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (i, j, c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term carries a positive `k`-exponent, i.e. the
    /// polynomial is univariate in `s`.
    pub fn is_univariate_s(&self) -> bool {
        self.terms.keys().all(|&(_, j)| j == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&ij, coef)| (ij, coef * c))
                .collect(),
        }
    }

    /// Exact partial derivative with respect to `s`.
    pub fn deriv_s(&self) -> Self {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * &Rational::from_int(i as i64));
            }
        }
        out
    }

    /// Floating evaluation at `(s, k)`.
    pub fn eval(&self, s: f64, k: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64() * s.powi(i as i32) * k.powi(j as i32))
            .sum()
    }

    /// Exact evaluation at rational `(s, k)`.
    pub fn eval_exact(&self, s: &Rational, k: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..i {
                t = &t * s;
            }
            for _ in 0..j {
                t = &t * k;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Renders in the text syntax accepted by [`Poly2::from_str`], e.g.
    /// `5/4*s^2 - 2/3*k + 2`. Terms are ordered by total degree descending,
    /// ties broken by higher `s`-power first; the zero polynomial is `0`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        // Total degree descending, then s-power descending.
        keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
        let mut out = String::new();
        for (idx, &(i, j)) in keys.iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !(mag == Rational::one() && (i > 0 || j > 0)) {
                factors.push(mag.to_string());
            }
            if i == 1 {
                factors.push("s".into());
            } else if i > 1 {
                factors.push(format!("s^{i}"));
            }
            if j == 1 {
                factors.push("k".into());
            } else if j > 1 {
                factors.push(format!("k^{j}"));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&ij, c)| (ij, -c)).collect(),
        }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Parses the text syntax produced by [`Poly2::render`]: a sum of terms,
    /// each a `*`-separated product of rationals and of `s`/`k` powers.
    fn from_str(input: &str) -> Result<Self> {
        let src = input.trim();
        if src.is_empty() {
            return Err(Error::parse("polynomial", "empty input"));
        }
        let mut out = Poly2::zero();
        // Split on top-level + and - (a leading sign binds to the first term).
        let bytes = src.as_bytes();
        let mut term_start = 0usize;
        let mut pos = 0usize;
        let mut terms: Vec<(&str, bool)> = Vec::new(); // (text, negated)
        let mut negated = false;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            if (c == '+' || c == '-') && pos > term_start {
                // A sign after '/', '*', '^' or another sign would be part of
                // a malformed token; only split when a term body precedes.
                let body = src[term_start..pos].trim();
                if !body.is_empty() {
                    terms.push((body, negated));
                    negated = c == '-';
                    term_start = pos + 1;
                } else {
                    return Err(Error::parse("polynomial", format!("dangling sign in `{src}`")));
                }
            } else if (c == '+' || c == '-') && pos == term_start {
                if c == '-' {
                    negated = !negated;
                }
                term_start = pos + 1;
            }
            pos += 1;
        }
        let tail = src[term_start..].trim();
        if tail.is_empty() {
            return Err(Error::parse("polynomial", format!("trailing sign in `{src}`")));
        }
        terms.push((tail, negated));

        for (body, neg) in terms {
            let mut coeff = Rational::one();
            let mut si = 0u32;
            let mut kj = 0u32;
            for factor in body.split('*') {
                let f = factor.trim();
                if f.is_empty() {
                    return Err(Error::parse("polynomial", format!("empty factor in `{body}`")));
                }
                let (var, pow) = match f.split_once('^') {
                    Some((v, p)) => {
                        let e: u32 = p.trim().parse().map_err(|_| {
                            Error::parse("polynomial", format!("bad exponent in `{f}`"))
                        })?;
                        (v.trim(), e)
                    }
                    None => (f, 1),
                };
                match var {
                    "s" => si += pow,
                    "k" => kj += pow,
                    _ => {
                        if pow != 1 {
                            return Err(Error::parse(
                                "polynomial",
                                format!("exponent on non-variable in `{f}`"),
                            ));
                        }
                        let r: Rational = var.parse()?;
                        coeff = &coeff * &r;
                    }
                }
            }
            if neg {
                coeff = -&coeff;
            }
            out.add_term(si, kj, coeff);
        }
        Ok(out)
    }
}

// JSON form: {"terms": [{"i": 2, "j": 0, "num": 5, "den": 4}, ...]}.
// num/den serialize as JSON integers when they fit in i64, as decimal
// strings otherwise; both forms are accepted on input.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn of(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(n) => IntRepr::Small(n),
            None => IntRepr::Big(v.to_string()),
        }
    }

    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            IntRepr::Small(n) => Ok(BigInt::from(*n)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: u32,
    j: u32,
    num: IntRepr,
    den: IntRepr,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for Poly2 {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| TermRepr {
                    i,
                    j,
                    num: IntRepr::of(c.numer()),
                    den: IntRepr::of(c.denom()),
                })
                .collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(de)?;
        let mut out = Poly2::zero();
        for t in repr.terms {
            let num = t.num.to_bigint().map_err(D::Error::custom)?;
            let den = t.den.to_bigint().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            out.add_term(t.i, t.j, Rational(BigRational::new(num, den)));
        }
        Ok(out)
    }
}

/// Shorthand for building small polynomials in tests and presets:
/// `poly![(i, j, num, den), ...]`.
#[macro_export]
macro_rules! poly {
    ($(($i:expr, $j:expr, $n:expr, $d:expr)),* $(,)?) => {
        $crate::poly::Poly2::from_terms([
            $(($i as u32, $j as u32, $crate::poly::Rational::new($n, $d)),)*
        ])
    };
}
