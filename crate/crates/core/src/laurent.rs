//! Sparse Laurent polynomials in the torus variables `t1, ..., t{n+1}` and a
//! distinguished circle variable `t`, with arbitrary-precision integer
//! coefficients. This is the ring of virtual characters of `T^{n+1} x S^1`.
//!
//! Every value is kept in canonical form: no stored coefficient is zero, so
//! structural equality is ring equality. Terms are ordered lexicographically
//! on `(circle exponent, torus exponents)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponents of the torus variables, one slot per `t_j`.
pub type TorusExps = SmallVec<[i64; 6]>;

/// Exponent vector of a monomial `t1^a1 ... t{n+1}^a{n+1} t^b`.
///
/// The derived ordering compares the circle exponent first, then the torus
/// exponents lexicographically; this is the canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub circle: i64,
    pub torus: TorusExps,
}

impl Exponent {
    pub fn new(torus: &[i64], circle: i64) -> Self {
        Exponent { circle, torus: TorusExps::from_slice(torus) }
    }

    pub fn zero(rank: usize) -> Self {
        Exponent { circle: 0, torus: smallvec::smallvec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.torus.len()
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent {
            circle: self.circle + other.circle,
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, other: &Exponent) -> Exponent {
        Exponent {
            circle: self.circle - other.circle,
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| a - b).collect(),
        }
    }

    fn dominates(&self, other: &Exponent) -> bool {
        self.circle >= other.circle && self.torus.iter().zip(&other.torus).all(|(a, b)| a >= b)
    }
}

/// A Laurent polynomial of fixed torus rank `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigInt::one())
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(rank, [(Exponent::zero(rank), c.into())])
    }

    /// `coeff * t1^torus[0] ... t^circle`.
    pub fn monomial(rank: usize, torus: &[i64], circle: i64, coeff: impl Into<BigInt>) -> Self {
        assert_eq!(torus.len(), rank, "exponent vector length must equal the rank");
        Self::from_terms(rank, [(Exponent::new(torus, circle), coeff.into())])
    }

    /// `t_index^power`, with `index` counted from 1.
    pub fn torus_var(rank: usize, index: usize, power: i64) -> Self {
        assert!((1..=rank).contains(&index), "torus variable t{index} outside rank {rank}");
        let mut e = Exponent::zero(rank);
        e.torus[index - 1] = power;
        Self::from_terms(rank, [(e, BigInt::one())])
    }

    /// `t^power` for the circle variable.
    pub fn circle_var(rank: usize, power: i64) -> Self {
        let mut e = Exponent::zero(rank);
        e.circle = power;
        Self::from_terms(rank, [(e, BigInt::one())])
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, merging
    /// repeated exponents and dropping zero coefficients.
    pub fn from_terms<I>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.rank(), rank, "exponent vector length must equal the rank");
            if c.is_zero() {
                continue;
            }
            accumulate(&mut map, e, c);
        }
        LaurentPoly { rank, terms: map }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| *e == Exponent::zero(self.rank) && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.rank, right: other.rank })
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(LaurentPoly { rank: self.rank, terms })
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), -c);
        }
        Ok(LaurentPoly { rank: self.rank, terms })
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        // Multiplying by a single term only translates exponents.
        if other.terms.len() == 1 {
            let (e, c) = other.terms.iter().next().unwrap();
            return Ok(self.mul_term(e, c));
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            return Ok(other.mul_term(e, c));
        }
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut terms, ea.add(eb), ca * cb);
            }
        }
        Ok(LaurentPoly { rank: self.rank, terms })
    }

    /// Multiplies by `coeff * x^e`. Translation preserves the term order.
    pub fn mul_term(&self, e: &Exponent, coeff: &BigInt) -> LaurentPoly {
        assert_eq!(e.rank(), self.rank);
        if coeff.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        let terms = self.terms.iter().map(|(ea, ca)| (ea.add(e), ca * coeff)).collect();
        LaurentPoly { rank: self.rank, terms }
    }

    /// Multiplies by the monomial `t1^torus[0] ... t^circle`.
    pub fn shift(&self, torus: &[i64], circle: i64) -> LaurentPoly {
        self.mul_term(&Exponent::new(torus, circle), &BigInt::one())
    }

    /// Multiplies by `t^circle`.
    pub fn shift_circle(&self, circle: i64) -> LaurentPoly {
        self.shift(&vec![0; self.rank], circle)
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        LaurentPoly { rank: self.rank, terms }
    }

    pub fn pow(&self, exp: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.rank);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest and largest power of the circle variable, `None` for zero.
    pub fn circle_degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?.circle;
        let hi = self.terms.keys().next_back()?.circle;
        Some((lo, hi))
    }

    pub fn has_circle_terms(&self) -> bool {
        self.terms.keys().any(|e| e.circle != 0)
    }

    /// Splits `p = sum_b a_b t^b` into its torus coefficients `a_b`.
    pub fn circle_parts(&self) -> BTreeMap<i64, LaurentPoly> {
        let mut parts: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let torus_only = Exponent { circle: 0, torus: e.torus.clone() };
            parts
                .entry(e.circle)
                .or_insert_with(|| LaurentPoly::zero(self.rank))
                .terms
                .insert(torus_only, c.clone());
        }
        parts
    }

    /// Promotes to a larger rank by appending zero exponent slots, so a value
    /// in `t1..t{n}` can be mixed with values in `t1..t{n+1}`.
    pub fn embed(&self, new_rank: usize) -> LaurentPoly {
        assert!(new_rank >= self.rank, "embedding cannot lower the rank");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut torus = e.torus.clone();
                torus.resize(new_rank, 0);
                (Exponent { circle: e.circle, torus }, c.clone())
            })
            .collect();
        LaurentPoly { rank: new_rank, terms }
    }

    /// Replaces every `t^b` by `t_index^b` (index counted from 1).
    pub fn substitute_t(&self, index: usize) -> Result<LaurentPoly> {
        if !(1..=self.rank).contains(&index) {
            return Err(Error::IndexOutOfRange { index, rank: self.rank });
        }
        Ok(LaurentPoly::from_terms(
            self.rank,
            self.terms.iter().map(|(e, c)| {
                let mut torus = e.torus.clone();
                torus[index - 1] += e.circle;
                (Exponent { circle: 0, torus }, c.clone())
            }),
        ))
    }

    /// Value at the identity element: every variable set to 1.
    pub fn at_identity(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Sets every torus variable to 1, keeping the circle variable.
    pub fn at_torus_identity(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.rank,
            self.terms.iter().map(|(e, c)| (Exponent { circle: e.circle, torus: smallvec::smallvec![0; self.rank] }, c.clone())),
        )
    }

    /// Numeric value at a point of the torus. Monomials are evaluated exactly
    /// as powers of the coordinates and summed in double precision.
    pub fn eval_at(&self, pt: &TorusPoint) -> Result<Complex64> {
        if pt.coords.len() != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: pt.coords.len() });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, &a) in pt.coords.iter().zip(&e.torus) {
                if a != 0 {
                    v *= z.powi(a as i32);
                }
            }
            if e.circle != 0 {
                let z = pt.circle.ok_or(Error::MissingCircleCoordinate)?;
                v *= z.powi(e.circle as i32);
            }
            sum += v;
        }
        Ok(sum)
    }

    /// The single term of a monomial with coefficient `+-1` and no circle
    /// variable.
    pub fn as_unit_torus_monomial(&self) -> Result<(&Exponent, &BigInt)> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && e.circle == 0 && c.abs().is_one() => Ok((e, c)),
            _ => Err(Error::NotUnitMonomial(self.to_string())),
        }
    }

    fn min_exponents(&self) -> Exponent {
        let mut lo = Exponent { circle: i64::MAX, torus: smallvec::smallvec![i64::MAX; self.rank] };
        for e in self.terms.keys() {
            lo.circle = lo.circle.min(e.circle);
            for (l, &a) in lo.torus.iter_mut().zip(&e.torus) {
                *l = (*l).min(a);
            }
        }
        lo
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Both sides are first translated into the ordinary polynomial ring with
    /// no monomial content; the quotient is then found by lexicographic long
    /// division, and any nonzero remainder is reported as
    /// [`Error::InexactDivision`].
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(divisor)?;
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.rank));
        }
        let n_shift = self.min_exponents();
        let d_shift = divisor.min_exponents();
        let zero = Exponent::zero(self.rank);
        let mut rem = self.mul_term(&zero.sub(&n_shift), &BigInt::one());
        let d = divisor.mul_term(&zero.sub(&d_shift), &BigInt::one());
        let (d_lead_e, d_lead_c) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();

        let mut quotient: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        while let Some((r_e, r_c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if !r_e.dominates(&d_lead_e) {
                return Err(Error::InexactDivision);
            }
            let (q_c, r) = r_c.div_rem(&d_lead_c);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            let q_e = r_e.sub(&d_lead_e);
            let step = d.mul_term(&q_e, &q_c);
            rem = rem.try_sub(&step)?;
            accumulate(&mut quotient, q_e, q_c);
        }
        let q = LaurentPoly { rank: self.rank, terms: quotient };
        Ok(q.mul_term(&n_shift.sub(&d_shift), &BigInt::one()))
    }

    /// Parses the text form, e.g. `"1 - t1^-1*t + 3*t2^2"`.
    pub fn parse(text: &str, rank: usize) -> Result<LaurentPoly> {
        Parser { src: text.as_bytes(), pos: 0, rank }.parse_poly()
    }
}

fn accumulate(map: &mut BTreeMap<Exponent, BigInt>, e: Exponent, c: BigInt) {
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("Laurent polynomial ranks must agree")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPoly { rank: self.rank, terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// In-place sum; panics on rank mismatch like the binary operators.
impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, other: &LaurentPoly) {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        for (e, c) in &other.terms {
            accumulate(&mut self.terms, e.clone(), c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, other: &LaurentPoly) {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        for (e, c) in &other.terms {
            accumulate(&mut self.terms, e.clone(), -c);
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut vars: Vec<String> = Vec::new();
            for (j, &a) in e.torus.iter().enumerate() {
                if a != 0 {
                    vars.push(power_str(&format!("t{}", j + 1), a));
                }
            }
            if e.circle != 0 {
                vars.push(power_str("t", e.circle));
            }
            let abs = c.abs();
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

fn power_str(var: &str, exp: i64) -> String {
    if exp == 1 {
        var.to_string()
    } else {
        format!("{var}^{exp}")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn parse_poly(mut self) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            self.skip_ws();
            let (e, c) = self.parse_term()?;
            terms.push((e, c * sign));
            self.skip_ws();
            sign = match self.peek() {
                None => break,
                Some(b'+') => 1,
                Some(b'-') => -1,
                Some(_) => return self.err("expected `+`, `-`, `*` or end of input"),
            };
            self.pos += 1;
        }
        Ok(LaurentPoly::from_terms(self.rank, terms))
    }

    fn parse_term(&mut self) -> Result<(Exponent, BigInt)> {
        let mut e = Exponent::zero(self.rank);
        let mut c = BigInt::one();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let d = self.digits();
                    c *= d.parse::<BigInt>().expect("digit run parses");
                }
                Some(b't') => {
                    let var_pos = self.pos;
                    self.pos += 1;
                    let idx = self.digits().to_string();
                    let slot = if idx.is_empty() {
                        None
                    } else {
                        let i: usize = match idx.parse() {
                            Ok(i) => i,
                            Err(_) => return self.err("variable index too large"),
                        };
                        if !(1..=self.rank).contains(&i) {
                            return Err(Error::Parse {
                                pos: var_pos,
                                msg: format!("variable t{i} outside t1..t{}", self.rank),
                            });
                        }
                        Some(i - 1)
                    };
                    self.skip_ws();
                    let mut exp = 1i64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let neg = match self.peek() {
                            Some(b'-') => {
                                self.pos += 1;
                                true
                            }
                            Some(b'+') => {
                                self.pos += 1;
                                false
                            }
                            _ => false,
                        };
                        let d = self.digits();
                        if d.is_empty() {
                            return self.err("expected exponent digits after `^`");
                        }
                        exp = match d.parse::<i64>() {
                            Ok(v) => v,
                            Err(_) => return self.err("exponent out of range"),
                        };
                        if neg {
                            exp = -exp;
                        }
                    }
                    match slot {
                        Some(j) => e.torus[j] += exp,
                        None => e.circle += exp,
                    }
                }
                Some(_) => return self.err("expected a coefficient or a variable"),
                None => return self.err("unexpected end of input"),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((e, c));
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    t: i64,
    torus: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    rank: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { coeff: c.to_string(), t: e.circle, torus: e.torus.to_vec() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.torus.len() != raw.rank {
                return Err(D::Error::custom(format!(
                    "torus exponent vector has length {}, expected {}",
                    t.torus.len(),
                    raw.rank
                )));
            }
            let c: BigInt = t.coeff.parse().map_err(|_| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))?;
            terms.push((Exponent::new(&t.torus, t.t), c));
        }
        Ok(LaurentPoly::from_terms(raw.rank, terms))
    }
}

/// A point of `T^{n+1}`, optionally together with a circle coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    coords: Vec<Complex64>,
    circle: Option<Complex64>,
}

/// Allowed deviation of `|z|` from 1.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

impl TorusPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        for (index, z) in coords.iter().enumerate() {
            check_unit(index, z)?;
        }
        Ok(TorusPoint { coords, circle: None })
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        TorusPoint { coords: angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect(), circle: None }
    }

    pub fn with_circle(mut self, z: Complex64) -> Result<Self> {
        check_unit(self.coords.len(), &z)?;
        self.circle = Some(z);
        Ok(self)
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn circle(&self) -> Option<Complex64> {
        self.circle
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }
}

fn check_unit(index: usize, z: &Complex64) -> Result<()> {
    let modulus = z.norm();
    if (modulus - 1.0).abs() > UNIT_MODULUS_TOL {
        Err(Error::NotUnitModulus { index, modulus })
    } else {
        Ok(())
    }
}

/// `s_i(t1^k, ..., t{rank}^k)`.
pub fn elementary_symmetric(rank: usize, i: usize, k: i64) -> LaurentPoly {
    if i > rank {
        return LaurentPoly::zero(rank);
    }
    if i == 0 {
        return LaurentPoly::one(rank);
    }
    // Subsets enumerated as bitmasks; ranks stay far below 64.
    let terms = (0u64..(1u64 << rank)).filter(|m| m.count_ones() as usize == i).map(|mask| {
        let torus: TorusExps = (0..rank).map(|j| if mask >> j & 1 == 1 { k } else { 0 }).collect();
        (Exponent { circle: 0, torus }, BigInt::one())
    });
    LaurentPoly::from_terms(rank, terms)
}

/// `lambda_{n+1}(k) = prod_j (1 - t_j^k t)`, a polynomial of rank `n + 1`.
pub fn lambda_poly(n: usize, k: i64) -> LaurentPoly {
    let rank = n + 1;
    (1..=rank).fold(LaurentPoly::one(rank), |acc, j| {
        let mut e = Exponent::zero(rank);
        e.torus[j - 1] = k;
        e.circle = 1;
        let factor = LaurentPoly::from_terms(rank, [(Exponent::zero(rank), BigInt::one()), (e, -BigInt::one())]);
        &acc * &factor
    })
}

/// `t1^k ... t{rank}^k`.
pub fn torus_product(rank: usize, k: i64) -> LaurentPoly {
    LaurentPoly::monomial(rank, &vec![k; rank], 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, rank: usize) -> LaurentPoly {
        LaurentPoly::parse(s, rank).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("1 - t", 1);
        let b = p("1 + t", 1);
        assert_eq!(&a * &b, p("1 - t^2", 1));
    }

    #[test]
    #[cfg(debug_assertions)]
    #[should_panic]
    fn exponent_overflow_is_caught() {
        let big = LaurentPoly::circle_var(1, i64::MAX);
        let _ = &big * &LaurentPoly::circle_var(1, 1);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = p("3*t1^2*t - 5 + t2^-1", 2);
        let z = &a + &(-&a);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn lambda_two_expansion() {
        let lhs = &p("1 - t1^-1*t", 2) * &p("1 - t2^-1*t", 2);
        let rhs = p("1 - t1^-1*t - t2^-1*t + t1^-1*t2^-1*t^2", 2);
        assert_eq!(lhs, rhs);
        assert_eq!(lambda_poly(1, -1), rhs);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = LaurentPoly::one(2);
        let b = LaurentPoly::one(3);
        assert_eq!(a.try_add(&b), Err(Error::RankMismatch { left: 2, right: 3 }));
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_sub(&b).is_err());
    }

    #[test]
    fn substitute_circle_variable() {
        assert_eq!(p("1 - t2^-1*t", 2).substitute_t(1).unwrap(), p("1 - t1*t2^-1", 2));
        assert!(lambda_poly(1, -1).substitute_t(1).unwrap().is_zero());
        assert!(lambda_poly(1, -1).substitute_t(2).unwrap().is_zero());
        assert_eq!(p("t1*t", 2).substitute_t(1).unwrap(), p("t1^2", 2));
        assert_eq!(p("t", 2).substitute_t(3), Err(Error::IndexOutOfRange { index: 3, rank: 2 }));
        assert!(p("t", 2).substitute_t(0).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let pt = TorusPoint::new(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        assert!(p("t1 + t2", 2).eval_at(&pt).unwrap().norm() < 1e-15);
        assert!((LaurentPoly::one(2).eval_at(&pt).unwrap() - 1.0).norm() < 1e-15);
        assert!((p("1 - t2^-1*t1", 2).eval_at(&pt).unwrap() - 2.0).norm() < 1e-15);
        assert_eq!(p("t", 2).eval_at(&pt), Err(Error::MissingCircleCoordinate));
        let with_t = pt.with_circle(Complex64::new(0.0, 1.0)).unwrap();
        assert!((p("t^2", 2).eval_at(&with_t).unwrap() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn torus_point_rejects_non_unit() {
        assert!(matches!(
            TorusPoint::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)]),
            Err(Error::NotUnitModulus { index: 1, .. })
        ));
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(3, 0, 1), LaurentPoly::one(3));
        assert_eq!(elementary_symmetric(3, 2, 1), p("t1*t2 + t1*t3 + t2*t3", 3));
        assert!(elementary_symmetric(2, 3, 1).is_zero());
        assert_eq!(elementary_symmetric(2, 1, -2), p("t1^-2 + t2^-2", 2));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_poly(0, 1), p("1 - t1*t", 1));
        for n in 0..4 {
            let one_minus_t = &LaurentPoly::one(n + 1) - &LaurentPoly::circle_var(n + 1, 1);
            assert_eq!(lambda_poly(n, 0), one_minus_t.pow(n as u32 + 1));
        }
    }

    #[test]
    fn lambda_matches_symmetric_expansion() {
        for n in 0..=4usize {
            for k in -3..=3 {
                let rank = n + 1;
                let mut sum = LaurentPoly::zero(rank);
                for a in 0..=rank {
                    let term = elementary_symmetric(rank, a, k).shift(&vec![0; rank], a as i64);
                    sum = if a % 2 == 0 { &sum + &term } else { &sum - &term };
                }
                assert_eq!(lambda_poly(n, k), sum, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn symmetric_duality() {
        for rank in 1..=5usize {
            for k in -3..=3 {
                for a in 0..=rank {
                    let rhs = &torus_product(rank, k) * &elementary_symmetric(rank, rank - a, -k);
                    assert_eq!(elementary_symmetric(rank, a, k), rhs);
                }
            }
        }
    }

    #[test]
    fn parse_examples() {
        let a = p("1 - t1^-1*t", 1);
        assert_eq!(a.len(), 2);
        assert_eq!(p("t^2*t1", 1), p("t1*t^2", 1));
        assert_eq!(p("0", 3), LaurentPoly::zero(3));
        assert_eq!(p("-t1 + 2*t1", 2), p("t1", 2));
        assert_eq!(p("  t2 ^ -3 * 4 ", 2), LaurentPoly::monomial(2, &[0, -3], 0, 4));
    }

    #[test]
    fn parse_errors_report_position() {
        assert_eq!(
            LaurentPoly::parse("t1 + t3", 2),
            Err(Error::Parse { pos: 5, msg: "variable t3 outside t1..t2".into() })
        );
        assert!(matches!(LaurentPoly::parse("t1 +", 2), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(LaurentPoly::parse("t1 x", 2), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(LaurentPoly::parse("t^", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(LaurentPoly::parse("", 2), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("t + 1 - t1^-1*t", 1).to_string(), "1 - t1^-1*t + t");
        assert_eq!(p("-3*t2*t1^2 + 7", 2).to_string(), "7 - 3*t1^2*t2");
        assert_eq!(p("-1", 2).to_string(), "-1");
        assert_eq!(p("-t^-1", 2).to_string(), "-t^-1");
    }

    #[test]
    fn json_shape() {
        let a = p("1 - 2*t1^-1*t", 1);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rank":1,"terms":[{"coeff":"1","t":0,"torus":[0]},{"coeff":"-2","t":1,"torus":[-1]}]}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"rank":2,"terms":[{"coeff":"1","t":0,"torus":[0]}]}"#).is_err());
    }

    #[test]
    fn circle_parts_and_embedding() {
        let a = p("t1*t + t2*t + 3 - t^-2", 2);
        let parts = a.circle_parts();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![-2, 0, 1]);
        assert_eq!(parts[&1], p("t1 + t2", 2));
        assert_eq!(a.circle_degree_range(), Some((-2, 1)));
        assert_eq!(a.embed(3), p("t1*t + t2*t + 3 - t^-2", 3));
    }

    #[test]
    fn exact_division() {
        let d = p("t2 - t1", 2);
        let q = p("t1^-1 + 3*t2^2*t", 2);
        assert_eq!((&q * &d).div_exact(&d).unwrap(), q);
        assert_eq!(p("1 + t1", 2).div_exact(&d), Err(Error::InexactDivision));
        assert_eq!(p("t1^-3", 2).div_exact(&p("t1^2", 2)).unwrap(), p("t1^-5", 2));
    }

    #[test]
    fn identity_values() {
        assert_eq!(p("3*t1 - t2^-4*t + 2", 2).at_identity(), BigInt::from(4));
        assert_eq!(p("t1*t + t2*t", 2).at_torus_identity(), p("2*t", 2));
    }
}
