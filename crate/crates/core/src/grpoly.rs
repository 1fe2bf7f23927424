//! Sparse polynomials with exact rational coefficients over graded variables.
//!
//! Three variable families exist and never mix inside one polynomial:
//!
//! | family | labels            | degree of the label-`k` variable |
//! |--------|-------------------|----------------------------------|
//! | `Y`    | `y_1, y_2, …`     | `-2k`                            |
//! | `X`    | `x_2, x_3, …`     | `-2k`                            |
//! | `D`    | `D_1, D_2, …`     | `-2(k+1)`                        |
//!
//! `y_k` stands for the `(k-1)`-th derivative of the profile `h(t)`, `x_k` for
//! the ansatz parameters and `D_k` for the differential polynomials `𝒟_k`
//! (equivalently `Z_{k+1}`). Internally a variable is addressed by its
//! zero-based position; [`Family::label`] maps positions to printed labels.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so two polynomials
//! compare equal whenever they have the same family and the same terms,
//! regardless of how many variables each one declares.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Y,
    X,
    D,
}

impl Family {
    /// Label of the variable at position 0.
    pub fn first_label(self) -> usize {
        match self {
            Family::Y | Family::D => 1,
            Family::X => 2,
        }
    }

    pub fn label(self, pos: usize) -> usize {
        pos + self.first_label()
    }

    pub fn position(self, label: usize) -> Option<usize> {
        label.checked_sub(self.first_label())
    }

    /// Half the absolute degree of the variable at `pos`.
    pub fn weight(self, pos: usize) -> u32 {
        match self {
            Family::Y => pos as u32 + 1,
            Family::X | Family::D => pos as u32 + 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Y => "y",
            Family::X => "x",
            Family::D => "D",
        }
    }

    fn from_symbol(s: &str) -> Option<Family> {
        match s {
            "y" => Some(Family::Y),
            "x" => Some(Family::X),
            "D" => Some(Family::D),
            _ => None,
        }
    }
}

/// Graded degree report of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Homogeneous(i64),
    NonHomogeneous,
}

impl Degree {
    pub fn is(self, d: i64) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Homogeneous(e) => e == d,
            Degree::NonHomogeneous => false,
        }
    }
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

fn weight_of(family: Family, exps: &[u32]) -> u64 {
    exps.iter()
        .enumerate()
        .map(|(pos, &e)| u64::from(family.weight(pos)) * u64::from(e))
        .sum()
}

/// Graded-lex comparison: larger total weight first, ties broken
/// lexicographically starting from the highest variable.
pub fn grlex_cmp(family: Family, a: &[u32], b: &[u32]) -> Ordering {
    let wa = weight_of(family, a);
    let wb = weight_of(family, b);
    if wa != wb {
        return wa.cmp(&wb);
    }
    let len = a.len().max(b.len());
    for pos in (0..len).rev() {
        let ea = a.get(pos).copied().unwrap_or(0);
        let eb = b.get(pos).copied().unwrap_or(0);
        if ea != eb {
            return ea.cmp(&eb);
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug)]
pub struct GradedPoly {
    family: Family,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(family: Family) -> Self {
        GradedPoly {
            family,
            nvars: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(family: Family, c: Rational) -> Self {
        Self::monomial(family, &[], c)
    }

    pub fn one(family: Family) -> Self {
        Self::constant(family, Rational::one())
    }

    /// The variable with printed label `label` (e.g. `var(Family::X, 2)` is `x_2`).
    ///
    /// Panics if `label` is below the family's first label.
    pub fn var(family: Family, label: usize) -> Self {
        let pos = family
            .position(label)
            .unwrap_or_else(|| panic!("no variable {}_{label}", family.symbol()));
        let mut exps = vec![0; pos + 1];
        exps[pos] = 1;
        Self::monomial(family, &exps, Rational::one())
    }

    pub fn monomial(family: Family, exps: &[u32], coeff: Rational) -> Self {
        let mut p = GradedPoly {
            family,
            nvars: exps.len(),
            terms: BTreeMap::new(),
        };
        p.add_term(exps.to_vec(), coeff);
        p
    }

    pub fn from_terms<I>(family: Family, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(family);
        for (exps, c) in terms {
            p.nvars = p.nvars.max(exps.len());
            p.add_term(exps, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = trim(exps);
        let remove = match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                c.is_zero()
            }
            None => {
                self.terms.insert(key.clone(), coeff);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Declared number of variables (at least the number actually used).
    pub fn nvars(&self) -> usize {
        self.nvars.max(self.used_nvars())
    }

    /// Number of leading positions that occur in some monomial.
    pub fn used_nvars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = nvars;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with exponents `exps` (trailing zeros optional).
    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect();
        v.sort_by(|a, b| grlex_cmp(self.family, b.0, a.0));
        v
    }

    /// Leading term under the canonical order.
    pub fn leading_term(&self) -> Option<(&[u32], &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex_cmp(self.family, a.0, b.0))
            .map(|(e, c)| (e.as_slice(), c))
    }

    fn check_family(&self, other: &Self) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch {
                left: self.family,
                right: other.family,
            });
        }
        Ok(())
    }

    pub fn expect_family(&self, family: Family) -> Result<()> {
        if self.family != family {
            return Err(Error::WrongFamily {
                expected: family,
                found: self.family,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_family(other)?;
        let mut out = self.clone();
        out.nvars = self.nvars().max(other.nvars());
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_family(other)?;
        let mut out = Self::zero(self.family);
        out.nvars = self.nvars().max(other.nvars());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let len = ea.len().max(eb.len());
                let exps: Vec<u32> = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.family).with_nvars(self.nvars);
        }
        GradedPoly {
            family: self.family,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.family).with_nvars(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative by the variable with printed label `label`.
    pub fn partial(&self, label: usize) -> Self {
        let mut out = Self::zero(self.family).with_nvars(self.nvars);
        let Some(pos) = self.family.position(label) else {
            return out;
        };
        for (e, c) in &self.terms {
            let k = e.get(pos).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d[pos] -= 1;
            out.add_term(d, c * Rational::from_integer(BigInt::from(k)));
        }
        out
    }

    /// Multiplies every monomial by its own graded degree.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero(self.family).with_nvars(self.nvars);
        for (e, c) in &self.terms {
            let d = -2 * weight_of(self.family, e) as i64;
            out.add_term(e.clone(), c * Rational::from_integer(BigInt::from(d)));
        }
        out
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.keys().map(|e| weight_of(self.family, e));
        let Some(first) = it.next() else {
            return Degree::Zero;
        };
        if it.all(|w| w == first) {
            Degree::Homogeneous(-2 * first as i64)
        } else {
            Degree::NonHomogeneous
        }
    }

    /// Substitutes `point[pos]` for the variable at position `pos`.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T> {
        let needed = self.used_nvars();
        if point.len() < needed {
            return Err(Error::PointTooShort {
                len: point.len(),
                needed,
            });
        }
        let mut powers: Vec<Vec<T>> = vec![vec![T::one()]; needed];
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = T::from_rational(c);
            for (pos, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut powers[pos];
                while cache.len() <= k as usize {
                    let next = cache.last().cloned().unwrap() * point[pos].clone();
                    cache.push(next);
                }
                term = term * cache[k as usize].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Replaces the variable at position `pos` by `images[pos]`; every image
    /// must belong to `target`.
    pub fn substitute(&self, images: &[GradedPoly], target: Family) -> Result<GradedPoly> {
        let needed = self.used_nvars();
        if images.len() < needed {
            return Err(Error::Dimension {
                expected: needed,
                found: images.len(),
            });
        }
        for img in images.iter().take(needed) {
            img.expect_family(target)?;
        }
        let nvars = images.iter().take(needed).map(GradedPoly::nvars).max().unwrap_or(0);
        let mut powers: Vec<Vec<GradedPoly>> =
            vec![vec![GradedPoly::one(target)]; needed];
        let mut acc = GradedPoly::zero(target).with_nvars(nvars);
        for (e, c) in &self.terms {
            let mut term = GradedPoly::constant(target, c.clone());
            for (pos, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut powers[pos];
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap() * &images[pos];
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Reads the same exponent data under another family with identical
    /// weights (only `X` and `D` qualify).
    pub fn reinterpret(&self, family: Family) -> Result<GradedPoly> {
        let compatible = self.family == family
            || matches!((self.family, family), (Family::X, Family::D) | (Family::D, Family::X));
        if !compatible {
            return Err(Error::FamilyMismatch {
                left: self.family,
                right: family,
            });
        }
        Ok(GradedPoly {
            family,
            nvars: self.nvars,
            terms: self.terms.clone(),
        })
    }

    /// Parses the canonical text form, e.g. `"-2*y_2 + 3/4*y_1^2"`.
    pub fn parse(text: &str, family: Family) -> Result<GradedPoly> {
        parse_poly(text, family)
    }
}

/// All exponent vectors over the first `nvars` positions of `family` whose
/// total weight is `weight` (degree `-2·weight`).
pub fn homogeneous_monomials(family: Family, weight: u32, nvars: usize) -> Vec<Vec<u32>> {
    fn go(family: Family, pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == 0 {
            let w = family.weight(0);
            if remaining.is_multiple_of(w) {
                cur[0] = remaining / w;
                out.push(trim(cur.clone()));
                cur[0] = 0;
            }
            return;
        }
        let w = family.weight(pos);
        let mut e = 0;
        while e * w <= remaining {
            cur[pos] = e;
            go(family, pos - 1, remaining - e * w, cur, out);
            e += 1;
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if weight == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0; nvars];
    go(family, nvars - 1, weight, &mut cur, &mut out);
    out.sort_by(|a, b| grlex_cmp(family, b, a));
    out
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    /// Panics on family mismatch; use [`GradedPoly::try_add`] for a checked sum.
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_add(rhs).expect("adding polynomials of different families")
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_sub(rhs).expect("subtracting polynomials of different families")
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_mul(rhs).expect("multiplying polynomials of different families")
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: GradedPoly) -> GradedPoly {
        &self + &rhs
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        &self - &rhs
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

/// Checked sum; fails on family mismatch.
pub fn poly_add(a: &GradedPoly, b: &GradedPoly) -> Result<GradedPoly> {
    a.try_add(b)
}

/// Checked product; fails on family mismatch.
pub fn poly_mul(a: &GradedPoly, b: &GradedPoly) -> Result<GradedPoly> {
    a.try_mul(b)
}

pub fn poly_partial(a: &GradedPoly, label: usize) -> GradedPoly {
    a.partial(label)
}

pub fn poly_degree(a: &GradedPoly) -> Degree {
    a.degree()
}

pub fn poly_eval(a: &GradedPoly, p: &JetPoint<Rational>) -> Result<Rational> {
    a.eval(&p.values)
}

/// Values `(y_1, …, y_m) = (h, h', …, h^(m-1))` at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> JetPoint<T> {
    pub fn new(values: Vec<T>) -> Self {
        JetPoint { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `h^(k-1)`, i.e. the value of `y_k`.
    pub fn y(&self, k: usize) -> Option<&T> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }
}

impl JetPoint<Rational> {
    pub fn to_f64(&self) -> JetPoint<f64> {
        JetPoint {
            values: self.values.iter().map(f64::from_rational).collect(),
        }
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(pos, &e)| {
                    let name = format!("{}_{}", self.family.symbol(), self.family.label(pos));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_poly(text: &str, family: Family) -> Result<GradedPoly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = GradedPoly::zero(family);
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut pieces = Vec::new();
    for i in 1..bytes.len() {
        let c = bytes[i];
        // a sign splits terms unless it belongs to an exponent such as 1e-3
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'^' | b'*' | b'/') {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    pieces.push(&s[start..]);
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'-' => (-Rational::one(), &piece[1..]),
            b'+' => (Rational::one(), &piece[1..]),
            _ => (Rational::one(), piece),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {text:?}")));
        }
        let mut coeff = sign;
        let mut exps: Vec<u32> = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {text:?}")));
            }
            if let Some((sym, rest)) = factor.split_once('_') {
                let fam = Family::from_symbol(sym)
                    .ok_or_else(|| Error::Parse(format!("unknown symbol {sym:?}")))?;
                if fam != family {
                    return Err(Error::FamilyMismatch {
                        left: family,
                        right: fam,
                    });
                }
                let (label, power) = match rest.split_once('^') {
                    Some((l, p)) => (l, p),
                    None => (rest, "1"),
                };
                let label: usize = label
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable label in {factor:?}")))?;
                let power: u32 = power
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                let pos = family.position(label).ok_or_else(|| {
                    Error::Parse(format!("{}_{label} is not a variable", family.symbol()))
                })?;
                if exps.len() <= pos {
                    exps.resize(pos + 1, 0);
                }
                exps[pos] += power;
            } else {
                coeff *= crate::scalar::parse_rational(factor)?;
            }
        }
        out.nvars = out.nvars.max(exps.len());
        out.add_term(exps, coeff);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    family: Family,
    terms: Vec<TermJson>,
}

impl Serialize for GradedPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let nvars = self.nvars();
        let terms = self
            .terms()
            .into_iter()
            .map(|(e, c)| {
                let mut exp = e.to_vec();
                exp.resize(nvars, 0);
                TermJson {
                    exp,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                }
            })
            .collect();
        PolyJson {
            family: self.family,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GradedPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(deserializer)?;
        let mut p = GradedPoly::zero(raw.family);
        for t in raw.terms {
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if !den.is_positive() {
                return Err(D::Error::custom("denominator must be positive"));
            }
            p.nvars = p.nvars.max(t.exp.len());
            p.add_term(t.exp, Rational::new(num, den));
        }
        Ok(p)
    }
}

impl GradedPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<GradedPoly> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
