//! String groups `L(p)` of weight sequences.
//!
//! `L(p)` is the rank-one abelian group on generators `x_1, ..., x_t` subject to
//! `p_1 x_1 = ... = p_t x_t`, the common value being the canonical element `c`.
//! Every element has a unique normal form `l c + sum l_i x_i` with `0 <= l_i < p_i`,
//! which is the only representation this module ever stores.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),
    #[error("expected {expected} torsion coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("elements live in different string groups: L({left}) vs L({right})")]
    AmbientMismatch { left: String, right: String },
    #[error("cannot parse group element {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("torsion coordinate {index} = {value} is outside 0..{weight}")]
    NotNormal { index: usize, value: i64, weight: i64 },
}

#[derive(Debug, PartialEq, Eq)]
struct Weights {
    weights: Vec<i64>,
    lcm: i64,
}

/// A weight sequence `(p_1, ..., p_t)` together with `lcm(p)`.
///
/// Cheap to clone; clones share storage.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightSequence(Arc<Weights>);

impl WeightSequence {
    /// Requires `t >= 2` and every weight `>= 2`. The ordering convention
    /// `p_1 >= p_2 >= ...` is not enforced.
    pub fn new(weights: impl Into<Vec<i64>>) -> Result<Self, GroupError> {
        let weights = weights.into();
        if weights.len() < 2 {
            return Err(GroupError::InvalidWeights(format!(
                "need at least two weights, got {}",
                weights.len()
            )));
        }
        if let Some(bad) = weights.iter().find(|&&p| p < 2) {
            return Err(GroupError::InvalidWeights(format!("weight {bad} is smaller than 2")));
        }
        let lcm = weights.iter().fold(1i64, |acc, &p| acc.lcm(&p));
        Ok(Self(Arc::new(Weights { weights, lcm })))
    }

    /// Parses a comma separated list such as `"4,4,2"`.
    pub fn parse(s: &str) -> Result<Self, GroupError> {
        let weights = s
            .split(',')
            .map(|w| {
                w.trim()
                    .parse::<i64>()
                    .map_err(|e| GroupError::InvalidWeights(format!("{w:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }

    pub fn weights(&self) -> &[i64] {
        &self.0.weights
    }

    pub fn len(&self) -> usize {
        self.0.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.0.weights[i]
    }

    pub fn lcm(&self) -> i64 {
        self.0.lcm
    }

    /// Number of torsion residues, `prod p_i`.
    pub fn torsion_count(&self) -> usize {
        self.weights().iter().map(|&p| p as usize).product()
    }

    /// Letter used for generators when pretty printing: the four tubular types
    /// get their customary names, everything else uses `x`.
    pub fn symbol(&self) -> char {
        match self.weights() {
            [2, 2, 2, 2] => 'x',
            [3, 3, 3] => 'y',
            [4, 4, 2] => 'z',
            [6, 3, 2] => 'u',
            _ => 'x',
        }
    }

    /// Unique normal form of `l c + sum raw_i x_i`.
    pub fn normalize(&self, l: i64, raw: &[i64]) -> Result<GroupElement, GroupError> {
        if raw.len() != self.len() {
            return Err(GroupError::LengthMismatch { expected: self.len(), got: raw.len() });
        }
        let mut l = l;
        let torsion = raw
            .iter()
            .zip(self.weights())
            .map(|(&r, &p)| {
                let (q, m) = r.div_mod_floor(&p);
                l += q;
                m
            })
            .collect();
        Ok(GroupElement { weights: self.clone(), l, torsion })
    }

    /// Builds an element from coordinates that are already in normal form.
    pub fn element(&self, l: i64, torsion: &[i64]) -> Result<GroupElement, GroupError> {
        if torsion.len() != self.len() {
            return Err(GroupError::LengthMismatch { expected: self.len(), got: torsion.len() });
        }
        for (index, (&value, &weight)) in torsion.iter().zip(self.weights()).enumerate() {
            if !(0..weight).contains(&value) {
                return Err(GroupError::NotNormal { index, value, weight });
            }
        }
        Ok(GroupElement { weights: self.clone(), l, torsion: torsion.to_vec() })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { weights: self.clone(), l: 0, torsion: vec![0; self.len()] }
    }

    /// The canonical element `c = (1; 0, ..., 0)`.
    pub fn canonical(&self) -> GroupElement {
        GroupElement { weights: self.clone(), l: 1, torsion: vec![0; self.len()] }
    }

    /// Generator `x_{i+1}` (zero-based index).
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut torsion = vec![0; self.len()];
        torsion[i] = 1;
        GroupElement { weights: self.clone(), l: 0, torsion }
    }

    /// The dualizing element `(t - 2) c - sum x_i`.
    pub fn dualizing(&self) -> GroupElement {
        let t = self.len() as i64;
        self.normalize(t - 2, &vec![-1; self.len()])
            .expect("length matches by construction")
    }

    /// Tubular iff the dualizing element has degree zero.
    pub fn is_tubular(&self) -> bool {
        self.dualizing().degree() == 0
    }

    /// Degree of the generator `x_i` under the degree map, `lcm(p) / p_i`.
    pub fn generator_degree(&self, i: usize) -> i64 {
        self.lcm() / self.weight(i)
    }

    /// All torsion vectors `(l_1, ..., l_t)` with `0 <= l_i < p_i`, in
    /// lexicographic order.
    pub fn torsion_vectors(&self) -> TorsionVectors<'_> {
        TorsionVectors { weights: self.weights(), next: Some(vec![0; self.len()]) }
    }

    /// Every element whose normal form has `l`-coefficient in `lo..=hi`,
    /// ordered by `(l, torsion)`.
    pub fn elements_in_window(&self, lo: i64, hi: i64) -> Vec<GroupElement> {
        let residues: Vec<Vec<i64>> = self.torsion_vectors().collect();
        (lo..=hi)
            .flat_map(|l| {
                residues.iter().map(move |r| GroupElement {
                    weights: self.clone(),
                    l,
                    torsion: r.clone(),
                })
            })
            .collect()
    }

    /// Parses the `"l;l1,...,lt"` literal. The torsion entries may be arbitrary
    /// integers; the result is normalized.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let err = |reason: &str| GroupError::Parse { input: s.to_string(), reason: reason.into() };
        let (l, rest) = s.split_once(';').ok_or_else(|| err("missing ';'"))?;
        let l = l.trim().parse::<i64>().map_err(|e| err(&e.to_string()))?;
        let raw = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|v| v.trim().parse::<i64>().map_err(|e| err(&e.to_string())))
                .collect::<Result<Vec<_>, _>>()?
        };
        self.normalize(l, &raw)
    }
}

impl fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSequence({self})")
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights().iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub struct TorsionVectors<'a> {
    weights: &'a [i64],
    next: Option<Vec<i64>>,
}

impl Iterator for TorsionVectors<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.weights[i] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Finite or infinite order of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// An element of `L(p)` in normal form.
#[derive(Clone)]
pub struct GroupElement {
    weights: WeightSequence,
    l: i64,
    torsion: Vec<i64>,
}

impl GroupElement {
    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// Coefficient of `c` in the normal form.
    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.l == 0 && self.torsion.iter().all(|&v| v == 0)
    }

    fn check_ambient(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.weights != other.weights {
            return Err(GroupError::AmbientMismatch {
                left: self.weights.to_string(),
                right: other.weights.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_ambient(other)?;
        let raw: Vec<i64> = self.torsion.iter().zip(&other.torsion).map(|(a, b)| a + b).collect();
        self.weights.normalize(self.l + other.l, &raw)
    }

    pub fn checked_sub(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.checked_add(&-other)
    }

    /// `n`-fold sum; negative `n` multiplies the inverse.
    pub fn smul(&self, n: i64) -> GroupElement {
        let raw: Vec<i64> = self.torsion.iter().map(|v| v * n).collect();
        self.weights.normalize(self.l * n, &raw).expect("same length")
    }

    /// The degree map: `l * lcm(p) + sum l_i * lcm(p) / p_i`.
    pub fn degree(&self) -> i64 {
        let p = self.weights.lcm();
        self.l * p
            + self
                .torsion
                .iter()
                .zip(self.weights.weights())
                .map(|(&li, &pi)| li * (p / pi))
                .sum::<i64>()
    }

    /// `max(l + 1, 0)`, the dimension of the homogeneous component of this degree.
    pub fn mult(&self) -> u64 {
        (self.l + 1).max(0) as u64
    }

    pub fn order(&self) -> Order {
        if self.degree() != 0 {
            return Order::Infinite;
        }
        let bound = self.weights.lcm() as u64 * self.weights.torsion_count() as u64;
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_zero() {
                return Order::Finite(n);
            }
            acc = &acc + self;
        }
        Order::Infinite
    }

    /// Renders as `2z1+2z2-c` using the ambient generator letter.
    pub fn pretty(&self) -> String {
        let sym = self.weights.symbol();
        let mut out = String::new();
        for (i, &li) in self.torsion.iter().enumerate() {
            if li == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            if li != 1 {
                out.push_str(&li.to_string());
            }
            out.push(sym);
            out.push_str(&(i + 1).to_string());
        }
        match self.l {
            0 => {}
            1 if out.is_empty() => out.push('c'),
            -1 => out.push_str("-c"),
            1 => out.push_str("+c"),
            l if l < 0 => out.push_str(&format!("{l}c")),
            l if out.is_empty() => out.push_str(&format!("{l}c")),
            l => out.push_str(&format!("+{l}c")),
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.torsion == other.torsion && self.weights == other.weights
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.l.hash(state);
        self.torsion.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(l, torsion)`; elements of different groups compare by weights last.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.l
            .cmp(&other.l)
            .then_with(|| self.torsion.cmp(&other.torsion))
            .then_with(|| self.weights.weights().cmp(other.weights.weights()))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// The `"l;l1,...,lt"` literal.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.torsion.iter().map(i64::to_string).collect();
        write!(f, "{};{}", self.l, parts.join(","))
    }
}

/// Panics if the operands live in different string groups; see
/// [`GroupElement::checked_add`].
impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.checked_add(rhs).expect("group elements from different string groups")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.checked_sub(rhs).expect("group elements from different string groups")
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        self.smul(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[i64]) -> WeightSequence {
        WeightSequence::new(w.to_vec()).unwrap()
    }

    #[test]
    fn normalize_carries_into_c() {
        let p = ws(&[4, 4, 2]);
        let x = p.normalize(2, &[-3, -3, -1]).unwrap();
        assert_eq!(x.to_string(), "-1;1,1,1");
        // the input is -omega, so adding omega = (-2;3,3,1) gives zero
        let w = p.element(-2, &[3, 3, 1]).unwrap();
        assert!((&x + &w).is_zero());
    }

    #[test]
    fn normalize_dualizing_of_2222() {
        let p = ws(&[2, 2, 2, 2]);
        let w = p.normalize(2, &[-1, -1, -1, -1]).unwrap();
        assert_eq!(w.to_string(), "-2;1,1,1,1");
        assert!(w.smul(2).is_zero());
        assert!(p.normalize(0, &[0, 0, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn normalize_rejects_wrong_length() {
        let p = ws(&[3, 3, 3]);
        assert_eq!(
            p.normalize(0, &[1, 2]),
            Err(GroupError::LengthMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn defining_relation() {
        let p = ws(&[4, 4, 2]);
        let a = p.element(0, &[3, 0, 0]).unwrap();
        let b = p.generator(0);
        assert_eq!(&a + &b, p.canonical());
    }

    #[test]
    fn multiples_of_omega_in_632() {
        let p = ws(&[6, 3, 2]);
        let w = p.dualizing();
        assert_eq!(w.to_string(), "-2;5,2,1");
        assert_eq!(w.smul(2).to_string(), "-1;4,1,0");
        assert_eq!(w.smul(3).to_string(), "-1;3,0,1");
    }

    #[test]
    fn dualizing_elements() {
        assert_eq!(ws(&[4, 4, 2]).dualizing().to_string(), "-2;3,3,1");
        assert_eq!(ws(&[3, 3, 3]).dualizing().to_string(), "-2;2,2,2");
        assert_eq!(ws(&[6, 3, 2]).dualizing().to_string(), "-2;5,2,1");
    }

    #[test]
    fn degree_map() {
        let p = ws(&[6, 3, 2]);
        for i in 0..3 {
            assert_eq!(p.generator(i).degree(), 6 / p.weight(i));
        }
        assert_eq!(p.dualizing().degree(), 0);
        assert_eq!(p.zero().degree(), 0);
        assert_eq!(p.canonical().degree(), 6);
    }

    #[test]
    fn mult_reads_l() {
        let p = ws(&[2, 2, 2, 2]);
        assert_eq!(p.element(1, &[0, 0, 0, 0]).unwrap().mult(), 2);
        assert_eq!(ws(&[4, 4, 2]).dualizing().mult(), 0);
        assert_eq!(p.element(0, &[1, 0, 1, 1]).unwrap().mult(), 1);
    }

    #[test]
    fn orders() {
        for (w, n) in [(&[2, 2, 2, 2][..], 2), (&[3, 3, 3][..], 3), (&[4, 4, 2][..], 4), (&[6, 3, 2][..], 6)] {
            assert_eq!(ws(w).dualizing().order(), Order::Finite(n));
        }
        let p = ws(&[4, 4, 2]);
        assert_eq!(p.canonical().order(), Order::Infinite);
        assert_eq!(p.zero().order(), Order::Finite(1));
    }

    #[test]
    fn tubularity() {
        for w in [&[2, 2, 2, 2][..], &[3, 3, 3], &[4, 4, 2], &[6, 3, 2]] {
            assert!(ws(w).is_tubular(), "{w:?}");
        }
        let p = ws(&[2, 3, 7]);
        assert_eq!(p.dualizing().degree(), 1);
        assert!(!p.is_tubular());
        let q = ws(&[2, 2]);
        assert_eq!(q.dualizing().degree(), -2);
        assert!(!q.is_tubular());
    }

    #[test]
    fn invalid_weights() {
        assert!(WeightSequence::new(vec![2]).is_err());
        assert!(WeightSequence::new(vec![2, 1, 3]).is_err());
        assert_eq!(ws(&[4, 6]).lcm(), 12);
    }

    #[test]
    fn parse_and_display() {
        let p = ws(&[4, 4, 2]);
        let x = p.parse_element("-2;3,3,1").unwrap();
        assert_eq!(x, p.dualizing());
        assert_eq!(p.parse_element("2;-3,-3,-1").unwrap().to_string(), "-1;1,1,1");
        assert!(p.parse_element("1,2,3").is_err());
        assert!(p.parse_element("1;2").is_err());
    }

    #[test]
    fn pretty_printing() {
        let p = ws(&[4, 4, 2]);
        assert_eq!(p.element(-1, &[2, 2, 0]).unwrap().pretty(), "2z1+2z2-c");
        assert_eq!(p.canonical().pretty(), "c");
        assert_eq!(p.zero().pretty(), "0");
        assert_eq!(p.element(2, &[0, 1, 0]).unwrap().pretty(), "z2+2c");
    }

    #[test]
    fn mismatched_ambient() {
        let a = ws(&[3, 3, 3]).canonical();
        let b = ws(&[4, 4, 2]).canonical();
        assert!(matches!(a.checked_add(&b), Err(GroupError::AmbientMismatch { .. })));
    }

    #[test]
    fn torsion_vectors_enumerates_all() {
        let p = ws(&[3, 2]);
        let all: Vec<_> = p.torsion_vectors().collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 0], vec![2, 1]]);
        assert_eq!(ws(&[6, 3, 2]).torsion_vectors().count(), 36);
    }
}
