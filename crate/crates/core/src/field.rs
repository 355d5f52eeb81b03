//! Exact coefficient fields: the rationals and prime fields `F_q` with `q > 3`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field elements from different fields: {0} vs {1}")]
    BackendMismatch(String, String),
    #[error("{0} is not an admissible characteristic (need a prime other than 2 and 3)")]
    InvalidPrime(u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("root search supports degrees 2 and 3, got degree {0}")]
    UnsupportedDegree(usize),
}

/// Which ground field the coefficients live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(q: u64) -> Result<Self, FieldError> {
        if q == 2 || q == 3 || !is_prime(q) {
            return Err(FieldError::InvalidPrime(q));
        }
        Ok(FieldSpec::Prime(q))
    }

    /// `"rationals"` (or `"Q"`) or a decimal prime.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        match s.trim() {
            "rationals" | "Q" | "q" | "rational" => Ok(FieldSpec::Rationals),
            other => {
                let q = other.parse::<u64>().map_err(|_| FieldError::Parse(other.to_string()))?;
                Self::prime(q)
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldSpec::Prime(q) => FieldElement::Prime { value: n.rem_euclid(q as i64) as u64, modulus: q },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match *self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(q) => {
                let r = n.mod_floor(&BigInt::from(q));
                FieldElement::Prime { value: r.to_u64().expect("reduced"), modulus: q }
            }
        }
    }

    /// Parses a decimal integer, or `a/b`. Over `F_q` a fraction is `a * b^-1`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| FieldError::Parse(s.to_string()));
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse_int(n)?, parse_int(d)?);
                self.from_bigint(&n).try_div(&self.from_bigint(&d))
            }
            None => Ok(self.from_bigint(&parse_int(s)?)),
        }
    }

    /// Every element of a prime field in canonical order; `None` over the rationals.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement>> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(q) => Some((0..q).map(move |value| FieldElement::Prime { value, modulus: q })),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rationals"),
            FieldSpec::Prime(q) => write!(f, "{q}"),
        }
    }
}

/// A reduced fraction or a residue in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
        }
    }

    fn mismatch(&self, other: &FieldElement) -> FieldError {
        FieldError::BackendMismatch(self.field().to_string(), other.field().to_string())
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => Ok(FieldElement::Rational(a + b)),
            (FieldElement::Prime { value: a, modulus: q }, FieldElement::Prime { value: b, modulus: r })
                if q == r =>
            {
                Ok(FieldElement::Prime { value: ((*a as u128 + *b as u128) % *q as u128) as u64, modulus: *q })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => Ok(FieldElement::Rational(a * b)),
            (FieldElement::Prime { value: a, modulus: q }, FieldElement::Prime { value: b, modulus: r })
                if q == r =>
            {
                Ok(FieldElement::Prime { value: mul_mod(*a, *b, *q), modulus: *q })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { value, modulus } => {
                FieldElement::Prime { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        })
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { value, modulus } => {
                FieldElement::Prime { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue value for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElement::Prime { value, .. } => Some(*value),
            FieldElement::Rational(_) => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            FieldElement::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

// The operator impls panic on mixed backends; code that can see mixed inputs
// goes through the `try_*` methods.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("mixed field backends")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("mixed field backends")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("mixed field backends")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `q` with `lo <= q <= hi`, skipping 2 and 3.
pub fn admissible_primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(5)..=hi).filter(|&q| is_prime(q))
}

/// Which root to return when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootChoice {
    #[default]
    Smallest,
    Largest,
}

impl RootChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "smallest" => Some(RootChoice::Smallest),
            "largest" => Some(RootChoice::Largest),
            _ => None,
        }
    }
}

/// All roots of a polynomial of degree 2 or 3 (coefficients in ascending
/// degree order), sorted by canonical representative and deduplicated. Over
/// the rationals only rational roots are found.
pub fn find_roots(poly: &[FieldElement], field: &FieldSpec) -> Result<Vec<FieldElement>, FieldError> {
    let mut poly = poly.to_vec();
    while poly.last().is_some_and(FieldElement::is_zero) {
        poly.pop();
    }
    let degree = poly.len().saturating_sub(1);
    if !(2..=3).contains(&degree) {
        return Err(FieldError::UnsupportedDegree(degree));
    }
    for c in &poly {
        if c.field() != *field {
            return Err(FieldError::BackendMismatch(c.field().to_string(), field.to_string()));
        }
    }
    match *field {
        FieldSpec::Prime(q) => {
            let coeffs: Vec<u64> = poly.iter().map(|c| c.residue().expect("prime backend")).collect();
            let mut roots = crate::modpoly::roots_mod_prime(&coeffs, q);
            roots.sort_unstable();
            roots.dedup();
            Ok(roots.into_iter().map(|value| FieldElement::Prime { value, modulus: q }).collect())
        }
        FieldSpec::Rationals => Ok(rational_roots(&poly)),
    }
}

/// One root chosen by `choice`, or `None` when the polynomial has no root in the field.
pub fn find_root_with(
    poly: &[FieldElement],
    field: &FieldSpec,
    choice: RootChoice,
) -> Result<Option<FieldElement>, FieldError> {
    let roots = find_roots(poly, field)?;
    Ok(match choice {
        RootChoice::Smallest => roots.into_iter().next(),
        RootChoice::Largest => roots.into_iter().last(),
    })
}

pub fn find_root(poly: &[FieldElement], field: &FieldSpec) -> Result<Option<FieldElement>, FieldError> {
    find_root_with(poly, field, RootChoice::Smallest)
}

fn rational_roots(poly: &[FieldElement]) -> Vec<FieldElement> {
    let rats: Vec<BigRational> = poly
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) => r.clone(),
            FieldElement::Prime { .. } => unreachable!("checked backend"),
        })
        .collect();
    let denom_lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(denom_lcm.clone())).to_integer()).collect();
    let eval = |x: &BigRational| {
        ints.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    };

    let mut roots = Vec::new();
    // strip factors of x so the constant term is nonzero
    let lowest = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if lowest > 0 {
        roots.push(BigRational::zero());
    }
    let constant = ints[lowest].abs();
    let leading = ints.last().expect("nonempty").abs();
    for num in divisors(&constant) {
        for den in divisors(&leading) {
            for sign in [1, -1] {
                let cand = BigRational::new(BigInt::from(sign) * &num, den.clone());
                if eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots.into_iter().map(FieldElement::Rational).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}
