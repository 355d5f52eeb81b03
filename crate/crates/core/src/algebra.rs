//! Homogeneous coordinate algebras `S(p, lambda)` of weighted projective lines.
//!
//! `S = k[X_1, ..., X_t] / (X_i^{p_i} - (X_2^{p_2} - lambda_i X_1^{p_1}) : i >= 3)`,
//! graded by `L(p)` with `deg x_i = x_i`. The relations form a terminating
//! rewriting system on disjoint variables, so a monomial is canonical exactly
//! when `a_i < p_i` for every `i >= 3`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::group::{GroupElement, WeightSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("element does not belong to this algebra: {0}")]
    Mismatch(String),
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cannot parse algebra element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent vector `(a_1, ..., a_t)`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(t: usize) -> Self {
        Monomial(vec![0; t])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders as `x1^2*x3` with the given variable letter; `1` for the empty product.
    pub fn render(&self, symbol: char) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| if a == 1 { format!("{symbol}{}", i + 1) } else { format!("{symbol}{}^{a}", i + 1) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// A finite linear combination of canonical monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, FieldElement>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&FieldElement> {
        self.terms.get(m)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Renders as `c1*x1^a1*... + c2*...` in ascending lexicographic order of exponent vectors.
    pub fn render(&self, symbol: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = m.render(symbol);
                if mono == "1" {
                    c.to_string()
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `dim` monomials spanning the homogeneous component of degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentBasis {
    pub degree: GroupElement,
    pub monomials: Vec<Monomial>,
}

impl ComponentBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// The algebra `S(p, lambda)` over an exact field, with normalized parameters
/// `lambda_1 = infinity`, `lambda_2 = 0`, `lambda_3 = 1`.
pub struct CoordinateAlgebra {
    weights: WeightSequence,
    /// `lambda_3, ..., lambda_t`.
    params: Vec<FieldElement>,
    field: FieldSpec,
    components: RwLock<HashMap<GroupElement, Arc<ComponentBasis>>>,
}

impl fmt::Debug for CoordinateAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoordinateAlgebra")
            .field("weights", &self.weights)
            .field("params", &self.params)
            .field("field", &self.field)
            .finish()
    }
}

impl Clone for CoordinateAlgebra {
    fn clone(&self) -> Self {
        Self {
            weights: self.weights.clone(),
            params: self.params.clone(),
            field: self.field,
            components: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for CoordinateAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.params == other.params && self.field == other.field
    }
}

impl CoordinateAlgebra {
    /// `params` holds `lambda_3, ..., lambda_t` (so `lambda_3` must be 1).
    pub fn new(weights: WeightSequence, params: Vec<FieldElement>, field: FieldSpec) -> Result<Self, AlgebraError> {
        let expected = weights.len().saturating_sub(2);
        if params.len() != expected {
            return Err(AlgebraError::InvalidParams(format!(
                "expected {expected} parameters lambda_3..lambda_t, got {}",
                params.len()
            )));
        }
        for p in &params {
            if p.field() != field {
                return Err(FieldError::BackendMismatch(p.field().to_string(), field.to_string()).into());
            }
        }
        if let Some(first) = params.first() {
            if !first.is_one() {
                return Err(AlgebraError::InvalidParams(format!("lambda_3 must be 1, got {first}")));
            }
        }
        for (i, p) in params.iter().enumerate().skip(1) {
            if p.is_zero() || p.is_one() {
                return Err(AlgebraError::InvalidParams(format!("lambda_{} = {p} must avoid 0 and 1", i + 3)));
            }
        }
        for i in 0..params.len() {
            for j in i + 1..params.len() {
                if params[i] == params[j] {
                    return Err(AlgebraError::InvalidParams(format!(
                        "lambda_{} and lambda_{} coincide",
                        i + 3,
                        j + 3
                    )));
                }
            }
        }
        Ok(Self { weights, params, field, components: RwLock::new(HashMap::new()) })
    }

    /// Builds the algebra from the free parameters `lambda_4, ..., lambda_t`.
    pub fn normalized(weights: WeightSequence, free: &[FieldElement], field: FieldSpec) -> Result<Self, AlgebraError> {
        let mut params = Vec::new();
        if weights.len() >= 3 {
            params.push(field.one());
        }
        params.extend(free.iter().cloned());
        Self::new(weights, params, field)
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn params(&self) -> &[FieldElement] {
        &self.params
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn symbol(&self) -> char {
        self.weights.symbol()
    }

    pub fn is_canonical(&self, m: &Monomial) -> bool {
        m.0.len() == self.num_vars()
            && m.0.iter().zip(self.weights.weights()).skip(2).all(|(&a, &p)| (a as i64) < p)
    }

    fn check_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        if m.0.len() != self.num_vars() {
            return Err(AlgebraError::Mismatch(format!(
                "monomial has {} exponents, algebra has {} variables",
                m.0.len(),
                self.num_vars()
            )));
        }
        Ok(())
    }

    pub fn check_element(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        for (m, c) in a.terms() {
            self.check_monomial(m)?;
            if !self.is_canonical(m) {
                return Err(AlgebraError::Mismatch(format!("non-canonical monomial {}", m.render('x'))));
            }
            if c.field() != self.field {
                return Err(FieldError::BackendMismatch(c.field().to_string(), self.field.to_string()).into());
            }
        }
        Ok(())
    }

    pub fn one(&self) -> AlgebraElement {
        self.monomial(Monomial::one(self.num_vars()), self.field.one())
    }

    /// The generator `x_{i+1}` (zero-based).
    pub fn generator(&self, i: usize) -> AlgebraElement {
        let mut e = vec![0; self.num_vars()];
        e[i] = 1;
        self.reduce(&Monomial(e), &self.field.one())
    }

    pub fn constant(&self, c: FieldElement) -> AlgebraElement {
        self.monomial(Monomial::one(self.num_vars()), c)
    }

    fn monomial(&self, m: Monomial, c: FieldElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_term(m, c);
        out
    }

    /// Relation for variable `i >= 3` (zero-based `i >= 2`):
    /// `x_i^{p_i} = x_2^{p_2} - lambda_i x_1^{p_1}`.
    fn lambda(&self, i: usize) -> &FieldElement {
        &self.params[i - 2]
    }

    /// Canonical form of `coeff * raw`.
    ///
    /// Writing `a_i = k_i p_i + r_i` for each `i >= 3`, the normal form is
    /// `x^r * prod_i (x_2^{p_2} - lambda_i x_1^{p_1})^{k_i}`, expanded binomially.
    /// This is the result of exhaustively applying the rewrite rules, which act
    /// on disjoint variables and so commute.
    pub fn reduce(&self, raw: &Monomial, coeff: &FieldElement) -> AlgebraElement {
        let t = self.num_vars();
        assert_eq!(raw.0.len(), t, "monomial length");
        if coeff.is_zero() {
            return AlgebraElement::zero();
        }
        let mut residual = raw.0.clone();
        // Polynomial in (x_1^{p_1}, x_2^{p_2}) stored as exponent pairs.
        let mut acc: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
        acc.insert((0, 0), coeff.clone());
        for (i, r) in residual.iter_mut().enumerate().skip(2) {
            let p = self.weights.weight(i) as u32;
            let k = *r / p;
            *r %= p;
            if k == 0 {
                continue;
            }
            let neg_lambda = self.lambda(i).neg();
            let expansion: Vec<((u32, u32), FieldElement)> = binomials(k)
                .into_iter()
                .enumerate()
                .map(|(j, b)| {
                    let c = &self.field.from_bigint(&b.into()) * &neg_lambda.pow(j as u64);
                    ((j as u32, k - j as u32), c)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let mut next: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
            for ((a1, a2), c1) in &acc {
                for ((b1, b2), c2) in &expansion {
                    let key = (a1 + b1, a2 + b2);
                    let prod = c1 * c2;
                    let entry = next.entry(key).or_insert_with(|| self.field.zero());
                    *entry = &*entry + &prod;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        let (p1, p2) = (self.weights.weight(0) as u32, self.weights.weight(1) as u32);
        let mut out = AlgebraElement::zero();
        for ((e1, e2), c) in acc {
            let mut exps = residual.clone();
            exps[0] += e1 * p1;
            exps[1] += e2 * p2;
            out.add_term(Monomial(exps), c);
        }
        out
    }

    /// Reduces by applying one rewrite `x_i^{p_i} -> x_2^{p_2} - lambda_i x_1^{p_1}`
    /// at a time, always choosing the first reducible variable in `order`
    /// (zero-based variable indices). Slow; exists to cross-check [`Self::reduce`].
    pub fn reduce_stepwise(&self, raw: &Monomial, coeff: &FieldElement, order: &[usize]) -> AlgebraElement {
        let mut pending: Vec<(Monomial, FieldElement)> = vec![(raw.clone(), coeff.clone())];
        let mut out = AlgebraElement::zero();
        let (p1, p2) = (self.weights.weight(0) as u32, self.weights.weight(1) as u32);
        while let Some((m, c)) = pending.pop() {
            let redex = order
                .iter()
                .copied()
                .filter(|&i| i >= 2 && i < self.num_vars())
                .find(|&i| m.0[i] as i64 >= self.weights.weight(i));
            match redex {
                None => out.add_term(m, c),
                Some(i) => {
                    let mut base = m.0.clone();
                    base[i] -= self.weights.weight(i) as u32;
                    let mut with_x2 = base.clone();
                    with_x2[1] += p2;
                    let mut with_x1 = base;
                    with_x1[0] += p1;
                    pending.push((Monomial(with_x2), c.clone()));
                    pending.push((Monomial(with_x1), (&c * self.lambda(i)).neg()));
                }
            }
        }
        out
    }

    /// Canonical form of an arbitrary (possibly non-canonical) combination.
    pub fn reduce_element(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in a.terms() {
            out = out.add(&self.reduce(m, c));
        }
        out
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let prod = ma.times(mb);
                if self.is_canonical(&prod) {
                    out.add_term(prod, ca * cb);
                } else {
                    for (m, c) in self.reduce(&prod, &(ca * cb)).terms {
                        out.add_term(m, c);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        acc
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(a.add(b))
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.add(&b.scale(&self.field.from_i64(-1)))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> GroupElement {
        let raw: Vec<i64> = m.0.iter().map(|&a| a as i64).collect();
        self.weights.normalize(0, &raw).expect("length checked")
    }

    /// Common degree of all terms, `None` if inhomogeneous.
    pub fn degree_of(&self, a: &AlgebraElement) -> Result<Option<GroupElement>, AlgebraError> {
        let mut degrees = a.terms().map(|(m, _)| self.monomial_degree(m));
        let first = degrees.next().ok_or(AlgebraError::ZeroElement)?;
        Ok(degrees.all(|d| d == first).then_some(first))
    }

    /// Basis `{x_1^{a p_1 + l_1} x_2^{b p_2 + l_2} x_3^{l_3} ... : a + b = l}` of
    /// the component of degree `x = (l; l_1, ..., l_t)`, sorted lexicographically.
    pub fn component_basis(&self, x: &GroupElement) -> Result<Arc<ComponentBasis>, AlgebraError> {
        if x.weights() != &self.weights {
            return Err(AlgebraError::Mismatch(format!("degree {x} is not in L({})", self.weights)));
        }
        if let Some(hit) = self.components.read().expect("cache lock").get(x) {
            return Ok(Arc::clone(hit));
        }
        let mut monomials = Vec::new();
        let (p1, p2) = (self.weights.weight(0) as u32, self.weights.weight(1) as u32);
        if x.l() >= 0 {
            let l = x.l() as u32;
            let tors: Vec<u32> = x.torsion().iter().map(|&v| v as u32).collect();
            for a in 0..=l {
                let mut e = tors.clone();
                e[0] += a * p1;
                e[1] += (l - a) * p2;
                monomials.push(Monomial(e));
            }
        }
        monomials.sort();
        let basis = Arc::new(ComponentBasis { degree: x.clone(), monomials });
        self.components.write().expect("cache lock").insert(x.clone(), Arc::clone(&basis));
        Ok(basis)
    }

    /// Counts canonical monomials of degree `x` by exhaustive enumeration,
    /// independently of [`Self::component_basis`].
    pub fn brute_force_dim(&self, x: &GroupElement) -> usize {
        let budget = x.degree();
        if budget < 0 {
            return 0;
        }
        let t = self.num_vars();
        let gen_deg: Vec<i64> = (0..t).map(|i| self.weights.generator_degree(i)).collect();
        let mut count = 0;
        let mut exps = vec![0u32; t];
        self.enumerate(0, budget, &gen_deg, &mut exps, x, &mut count);
        count
    }

    fn enumerate(
        &self,
        i: usize,
        remaining: i64,
        gen_deg: &[i64],
        exps: &mut Vec<u32>,
        target: &GroupElement,
        count: &mut usize,
    ) {
        if i == exps.len() {
            if remaining == 0 && self.monomial_degree(&Monomial(exps.clone())) == *target {
                *count += 1;
            }
            return;
        }
        let mut max = remaining / gen_deg[i];
        if i >= 2 {
            max = max.min(self.weights.weight(i) - 1);
        }
        for a in 0..=max {
            exps[i] = a as u32;
            self.enumerate(i + 1, remaining - a * gen_deg[i], gen_deg, exps, target, count);
        }
        exps[i] = 0;
    }

    /// `dim S_x` for `l` in `lo..=hi` at fixed torsion part.
    pub fn hilbert(&self, lo: i64, hi: i64, torsion: &[i64]) -> Result<Vec<(GroupElement, usize)>, AlgebraError> {
        (lo..=hi)
            .map(|l| {
                let x = self
                    .weights
                    .normalize(l, torsion)
                    .map_err(|e| AlgebraError::Mismatch(e.to_string()))?;
                Ok((x.clone(), self.component_basis(&x)?.dim()))
            })
            .collect()
    }

    /// Parses `c*x1^a*x2 + c2*x3 + ...`. Any variable letter is accepted;
    /// coefficients are field literals. The result is reduced.
    pub fn parse_element(&self, s: &str) -> Result<AlgebraElement, AlgebraError> {
        let err = |reason: String| AlgebraError::Parse { input: s.to_string(), reason };
        let s = s.trim();
        if s == "0" {
            return Ok(AlgebraElement::zero());
        }
        let mut out = AlgebraElement::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term".into()));
            }
            let mut coeff = self.field.one();
            let mut exps = vec![0u32; self.num_vars()];
            for factor in term.split('*') {
                let factor = factor.trim();
                let starts_alpha = factor.chars().next().is_some_and(char::is_alphabetic);
                if !starts_alpha {
                    let c = self.field.parse_element(factor).map_err(|e| err(e.to_string()))?;
                    coeff = &coeff * &c;
                    continue;
                }
                let (var, power) = match factor.split_once('^') {
                    Some((v, e)) => (v, e.trim().parse::<u32>().map_err(|e| err(e.to_string()))?),
                    None => (factor, 1),
                };
                let index: usize = var
                    .trim_start_matches(char::is_alphabetic)
                    .parse()
                    .map_err(|_| err(format!("bad variable {var:?}")))?;
                if index == 0 || index > self.num_vars() {
                    return Err(err(format!("variable index {index} out of range")));
                }
                exps[index - 1] += power;
            }
            out = out.add(&self.reduce(&Monomial(exps), &coeff));
        }
        Ok(out)
    }
}

/// Row `k` of Pascal's triangle.
fn binomials(k: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..k {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(w: &[i64], free: &[i64], field: FieldSpec) -> CoordinateAlgebra {
        let ws = WeightSequence::new(w.to_vec()).unwrap();
        let free: Vec<FieldElement> = free.iter().map(|&v| field.from_i64(v)).collect();
        CoordinateAlgebra::normalized(ws, &free, field).unwrap()
    }

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn reduce_relations() {
        let s = alg(&[4, 4, 2], &[], Q);
        let r = s.reduce(&Monomial(vec![0, 0, 2]), &Q.one());
        assert_eq!(r, s.parse_element("1*z2^4 + -1*z1^4").unwrap());
        assert_eq!(r.render('z'), "1*z2^4 + -1*z1^4");

        let s = alg(&[3, 3, 3], &[], Q);
        let r = s.reduce(&Monomial(vec![0, 0, 3]), &Q.one());
        assert_eq!(r.render('y'), "1*y2^3 + -1*y1^3");

        let m = Monomial(vec![5, 1, 2]);
        let r = s.reduce(&m, &Q.from_i64(7));
        assert_eq!(r.len(), 1);
        assert_eq!(r.coefficient(&m), Some(&Q.from_i64(7)));
    }

    #[test]
    fn reduce_agrees_with_stepwise_rewriting() {
        let s = alg(&[2, 2, 2, 2], &[-1], Q);
        let m = Monomial(vec![1, 0, 5, 4]);
        let fast = s.reduce(&m, &Q.one());
        assert_eq!(fast, s.reduce_stepwise(&m, &Q.one(), &[2, 3]));
        assert_eq!(fast, s.reduce_stepwise(&m, &Q.one(), &[3, 2]));
    }

    #[test]
    fn identity_case_b_over_f7() {
        // x4^6 = (x2^2 + (eps - 1) x1^2)^3 - (Delta x1 x2 x3)^2 with eps = 3, Delta = 1
        let f = FieldSpec::Prime(7);
        let s = alg(&[2, 2, 2, 2], &[3], f);
        let x4_6 = s.pow(&s.generator(3), 6);
        let u2 = s.parse_element("1*x2^2 + 2*x1^2").unwrap();
        let u3 = s.parse_element("1*x1*x2*x3").unwrap();
        let rhs = s.sub(&s.pow(&u2, 3), &s.pow(&u3, 2));
        assert_eq!(x4_6, rhs);
    }

    #[test]
    fn identity_333() {
        let s = alg(&[3, 3, 3], &[], Q);
        let lhs = s.pow(&s.generator(2), 6);
        let sum = s.parse_element("y1^3 + y2^3").unwrap();
        let prod = s.parse_element("y1*y2").unwrap();
        let rhs = s.sub(&s.pow(&sum, 2), &s.pow(&prod, 3).scale(&Q.from_i64(4)));
        assert_eq!(lhs, rhs);
        let a = s.parse_element("3*y1*y3^2 + y2").unwrap();
        assert_eq!(s.multiply(&s.one(), &a).unwrap(), a);
    }

    #[test]
    fn degrees() {
        let s = alg(&[3, 3, 3], &[], Q);
        let e = s.parse_element("y1^3 + y2^3").unwrap();
        assert_eq!(s.degree_of(&e).unwrap(), Some(s.weights().canonical()));
        let s4 = alg(&[2, 2, 2, 2], &[-1], Q);
        let e = s4.parse_element("x1*x2*x3").unwrap();
        assert_eq!(s4.degree_of(&e).unwrap().unwrap().to_string(), "0;1,1,1,0");
        let e = s4.parse_element("x1 + x2").unwrap();
        assert_eq!(s4.degree_of(&e).unwrap(), None);
        assert_eq!(s4.degree_of(&AlgebraElement::zero()), Err(AlgebraError::ZeroElement));
    }

    #[test]
    fn component_bases() {
        let s = alg(&[2, 2, 2, 2], &[-1], Q);
        let c = s.component_basis(&s.weights().canonical()).unwrap();
        let shown: Vec<String> = c.monomials.iter().map(|m| m.render('x')).collect();
        assert_eq!(shown, vec!["x2^2", "x1^2"]);
        assert_eq!(s.component_basis(&s.weights().dualizing()).unwrap().dim(), 0);
        let s = alg(&[3, 3, 3], &[], Q);
        let x = s.weights().parse_element("0;1,1,0").unwrap();
        let c = s.component_basis(&x).unwrap();
        assert_eq!(c.monomials.iter().map(|m| m.render('y')).collect::<Vec<_>>(), vec!["y1*y2"]);
    }

    #[test]
    fn brute_force_dims() {
        let s = alg(&[2, 2, 2, 2], &[5], Q);
        assert_eq!(s.brute_force_dim(&s.weights().canonical()), 2);
        assert_eq!(s.brute_force_dim(&s.weights().dualizing()), 0);
        let s = alg(&[6, 3, 2], &[], Q);
        assert_eq!(s.brute_force_dim(&s.weights().canonical()), 2);
    }

    #[test]
    fn parameter_validation() {
        let ws = WeightSequence::new(vec![2, 2, 2, 2]).unwrap();
        for bad in [0, 1] {
            assert!(CoordinateAlgebra::normalized(ws.clone(), &[Q.from_i64(bad)], Q).is_err());
        }
        assert!(CoordinateAlgebra::new(ws.clone(), vec![Q.from_i64(2), Q.from_i64(3)], Q).is_err());
        assert!(CoordinateAlgebra::new(ws.clone(), vec![Q.one()], Q).is_err());
        let ws5 = WeightSequence::new(vec![2, 2, 2, 2, 2]).unwrap();
        assert!(CoordinateAlgebra::normalized(ws5, &[Q.from_i64(4), Q.from_i64(4)], Q).is_err());
        let f7 = FieldSpec::Prime(7);
        assert!(CoordinateAlgebra::normalized(ws.clone(), &[f7.from_i64(3)], Q).is_err());
        let ws2 = WeightSequence::new(vec![3, 5]).unwrap();
        assert!(CoordinateAlgebra::normalized(ws2, &[], Q).is_ok());
    }

    #[test]
    fn mismatched_elements_rejected() {
        let s = alg(&[3, 3, 3], &[], Q);
        let t = alg(&[2, 2, 2, 2], &[-1], Q);
        let a = t.generator(0);
        assert!(matches!(s.multiply(&a, &s.one()), Err(AlgebraError::Mismatch(_))));
    }

    #[test]
    fn hilbert_series_slice() {
        let s = alg(&[6, 3, 2], &[], Q);
        let dims: Vec<usize> = s.hilbert(-2, 3, &[0, 0, 0]).unwrap().into_iter().map(|(_, d)| d).collect();
        assert_eq!(dims, vec![0, 0, 1, 2, 3, 4]);
    }
}
