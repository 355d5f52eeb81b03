//! Homomorphisms between string groups: kernels, fibers and admissibility.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{GroupElement, GroupError, WeightSequence};

/// Default half-width of the `l`-window on which the fiber condition is tested.
pub const DEFAULT_WINDOW: i64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("generator image {index} lies in L({found}), expected L({expected})")]
    WrongTarget { index: usize, found: String, expected: String },
    #[error(
        "not well defined: {q_first}*pi(y1) = {first} but {q_j}*pi(y{j}) = {other}",
        j = index + 1
    )]
    WellDefinedness { index: usize, q_first: i64, first: String, q_j: i64, other: String },
    #[error("image of the canonical element has degree zero, fibers are infinite")]
    InfiniteFiber,
    #[error("window must be at least 1, got {0}")]
    InvalidWindow(i64),
}

/// A homomorphism `L(q) -> L(p)` given by the images of the generators of `L(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupHom {
    source: WeightSequence,
    target: WeightSequence,
    gen_images: Vec<GroupElement>,
    canonical_image: GroupElement,
}

impl GroupHom {
    /// Checks that `q_j * image_j` is the same element for every `j`.
    pub fn new(
        source: WeightSequence,
        target: WeightSequence,
        gen_images: Vec<GroupElement>,
    ) -> Result<Self, HomError> {
        if gen_images.len() != source.len() {
            return Err(HomError::ImageCount { expected: source.len(), got: gen_images.len() });
        }
        for (index, img) in gen_images.iter().enumerate() {
            if img.weights() != &target {
                return Err(HomError::WrongTarget {
                    index,
                    found: img.weights().to_string(),
                    expected: target.to_string(),
                });
            }
        }
        let canonical_image = gen_images[0].smul(source.weight(0));
        for (index, img) in gen_images.iter().enumerate().skip(1) {
            let other = img.smul(source.weight(index));
            if other != canonical_image {
                return Err(HomError::WellDefinedness {
                    index,
                    q_first: source.weight(0),
                    first: canonical_image.to_string(),
                    q_j: source.weight(index),
                    other: other.to_string(),
                });
            }
        }
        Ok(Self { source, target, gen_images, canonical_image })
    }

    pub fn identity(weights: &WeightSequence) -> Self {
        let images = (0..weights.len()).map(|i| weights.generator(i)).collect();
        Self::new(weights.clone(), weights.clone(), images).expect("identity is well defined")
    }

    pub fn source(&self) -> &WeightSequence {
        &self.source
    }

    pub fn target(&self) -> &WeightSequence {
        &self.target
    }

    pub fn gen_images(&self) -> &[GroupElement] {
        &self.gen_images
    }

    /// Image of the canonical element of the source.
    pub fn canonical_image(&self) -> &GroupElement {
        &self.canonical_image
    }

    pub fn apply(&self, a: &GroupElement) -> Result<GroupElement, HomError> {
        if a.weights() != &self.source {
            return Err(GroupError::AmbientMismatch {
                left: a.weights().to_string(),
                right: self.source.to_string(),
            }
            .into());
        }
        Ok(self.apply_coords(a.l(), a.torsion()))
    }

    fn apply_coords(&self, l: i64, torsion: &[i64]) -> GroupElement {
        let mut l_acc = self.canonical_image.l() * l;
        let mut raw: Vec<i64> = self.canonical_image.torsion().iter().map(|v| v * l).collect();
        for (img, &n) in self.gen_images.iter().zip(torsion) {
            l_acc += img.l() * n;
            for (r, v) in raw.iter_mut().zip(img.torsion()) {
                *r += v * n;
            }
        }
        self.target.normalize(l_acc, &raw).expect("lengths agree")
    }

    /// The image is infinite and surjects onto every `Z/p_i`.
    pub fn image_is_effective(&self) -> bool {
        let infinite = self.gen_images.iter().any(|g| g.degree() != 0);
        let covers_each = (0..self.target.len()).all(|i| {
            let p = self.target.weight(i);
            let g = self
                .gen_images
                .iter()
                .chain(std::iter::once(&self.canonical_image))
                .fold(p, |acc, e| num_integer::gcd(acc, e.torsion()[i]));
            g == 1
        });
        infinite && covers_each
    }

    /// The complete preimage of `x`, sorted. Empty iff `x` is not in the image.
    pub fn fiber(&self, x: &GroupElement) -> Result<Vec<GroupElement>, HomError> {
        if x.weights() != &self.target {
            return Err(GroupError::AmbientMismatch {
                left: x.weights().to_string(),
                right: self.target.to_string(),
            }
            .into());
        }
        let step = self.canonical_image.degree();
        if step == 0 {
            return Err(HomError::InfiniteFiber);
        }
        let target_degree = x.degree();
        let mut out = Vec::new();
        for residue in self.source.torsion_vectors() {
            let base = self.apply_coords(0, &residue);
            let gap = target_degree - base.degree();
            if gap % step != 0 {
                continue;
            }
            let l = gap / step;
            if self.apply_coords(l, &residue) == *x {
                out.push(self.source.element(l, &residue).expect("residue is normal"));
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn kernel(&self) -> Result<Vec<GroupElement>, HomError> {
        self.fiber(&self.target.zero())
    }

    /// Tests the fiber condition `sum mult(y) = mult(x)` for every `x` in the
    /// image whose `l`-coefficient lies in `[-window, window]`.
    pub fn check_ah2(&self, window: i64) -> Result<AdmissibilityReport, HomError> {
        if window < 1 {
            return Err(HomError::InvalidWindow(window));
        }
        let kernel = self.kernel()?;
        let candidates = self.target.elements_in_window(-window, window);
        let rows: Vec<(GroupElement, Vec<GroupElement>)> = candidates
            .into_par_iter()
            .map(|x| self.fiber(&x).map(|f| (x, f)))
            .collect::<Result<_, _>>()?;

        let mut checked = 0;
        let mut failures = Vec::new();
        let mut edge_ok = true;
        for (x, fiber) in &rows {
            if fiber.is_empty() {
                continue;
            }
            checked += 1;
            let fiber_mult: u64 = fiber.iter().map(GroupElement::mult).sum();
            if fiber_mult != x.mult() {
                failures.push(Ah2Failure { degree: x.clone(), fiber_mult, mult: x.mult() });
            }
            if x.l() == window && fiber.iter().any(|y| y.l() < 0) {
                edge_ok = false;
            }
            if x.l() == -window && (x.mult() != 0 || fiber.iter().any(|y| y.mult() != 0)) {
                edge_ok = false;
            }
        }
        Ok(AdmissibilityReport {
            effective: self.image_is_effective(),
            ah2_window: window,
            ah2_checked: checked,
            ah2_failures: failures,
            kernel,
            edge_regime_ok: edge_ok,
        })
    }

    /// Effectiveness of the image together with the windowed fiber condition.
    pub fn is_admissible(&self, window: i64) -> Result<AdmissibilityReport, HomError> {
        self.check_ah2(window)
    }

    /// Elements of the image with `l`-coefficient in `lo..=hi`, sorted.
    pub fn image_in_window(&self, lo: i64, hi: i64) -> Result<Vec<GroupElement>, HomError> {
        let mut out = BTreeSet::new();
        for x in self.target.elements_in_window(lo, hi) {
            if !self.fiber(&x)?.is_empty() {
                out.insert(x);
            }
        }
        Ok(out.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ah2Failure {
    #[serde(serialize_with = "crate::serialize_display")]
    pub degree: GroupElement,
    pub fiber_mult: u64,
    pub mult: u64,
}

/// Outcome of the admissibility checks on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub effective: bool,
    pub ah2_window: i64,
    pub ah2_checked: usize,
    pub ah2_failures: Vec<Ah2Failure>,
    pub kernel: Vec<GroupElement>,
    /// True when both ends of the window sit in the regime where both sides of
    /// the fiber condition are affine in `l`.
    pub edge_regime_ok: bool,
}

impl AdmissibilityReport {
    pub fn ah2_holds(&self) -> bool {
        self.ah2_failures.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.effective && self.ah2_holds()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[i64]) -> WeightSequence {
        WeightSequence::new(w.to_vec()).unwrap()
    }

    fn el(p: &WeightSequence, s: &str) -> GroupElement {
        p.parse_element(s).unwrap()
    }

    fn case_a() -> GroupHom {
        let (q, p) = (ws(&[4, 4, 2]), ws(&[2, 2, 2, 2]));
        let imgs = vec![el(&p, "0;1,0,0,0"), el(&p, "0;0,1,0,0"), el(&p, "0;0,0,1,1")];
        GroupHom::new(q, p, imgs).unwrap()
    }

    fn case_b() -> GroupHom {
        let (q, p) = (ws(&[6, 3, 2]), ws(&[2, 2, 2, 2]));
        let imgs = vec![el(&p, "0;0,0,0,1"), el(&p, "1;0,0,0,0"), el(&p, "0;1,1,1,0")];
        GroupHom::new(q, p, imgs).unwrap()
    }

    #[test]
    fn well_definedness_is_checked() {
        let h = case_a();
        assert_eq!(h.canonical_image().to_string(), "2;0,0,0,0");
        let (q, p) = (ws(&[4, 4, 2]), ws(&[2, 2, 2, 2]));
        let bad = vec![el(&p, "0;1,0,0,0"), el(&p, "0;0,1,0,0"), el(&p, "0;0,0,1,0")];
        let err = GroupHom::new(q, p, bad).unwrap_err();
        assert!(matches!(err, HomError::WellDefinedness { index: 2, .. }), "{err}");
        case_b();
    }

    #[test]
    fn image_count_mismatch() {
        let p = ws(&[2, 2, 2, 2]);
        let err = GroupHom::new(ws(&[4, 4, 2]), p.clone(), vec![p.generator(0)]).unwrap_err();
        assert_eq!(err, HomError::ImageCount { expected: 3, got: 1 });
    }

    #[test]
    fn apply_examples() {
        let h = case_a();
        let q = h.source().clone();
        assert_eq!(h.apply(&el(&q, "0;1,0,1")).unwrap().to_string(), "0;1,0,1,1");
        assert!(h.apply(&q.dualizing().smul(2)).unwrap().is_zero());
        assert!(h.apply(&q.zero()).unwrap().is_zero());
    }

    #[test]
    fn effectiveness() {
        assert!(case_a().image_is_effective());
        let (q, p) = (ws(&[2, 2]), ws(&[2, 2, 2, 2]));
        let c = GroupHom::new(q, p.clone(), vec![p.canonical(), p.canonical()]).unwrap();
        assert!(!c.image_is_effective());
    }

    #[test]
    fn fibers_case_a() {
        let h = case_a();
        let p = h.target().clone();
        let f = h.fiber(&p.canonical()).unwrap();
        let got: Vec<String> = f.iter().map(ToString::to_string).collect();
        assert_eq!(got, vec!["0;0,2,0", "0;2,0,0"]);
        assert!(h.fiber(&p.generator(2)).unwrap().is_empty());
    }

    #[test]
    fn kernel_case_b() {
        let got: Vec<String> = case_b().kernel().unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(got, vec!["-1;2,2,0", "-1;4,1,0", "0;0,0,0"]);
    }

    #[test]
    fn infinite_fiber_is_an_error() {
        let (q, p) = (ws(&[2, 2]), ws(&[3, 3, 3]));
        let z = p.zero();
        let h = GroupHom::new(q, p.clone(), vec![z.clone(), z]).unwrap();
        assert_eq!(h.fiber(&p.zero()), Err(HomError::InfiniteFiber));
    }

    #[test]
    fn ah2_case_a_and_b() {
        for h in [case_a(), case_b()] {
            let r = h.is_admissible(50).unwrap();
            assert!(r.is_admissible(), "{:?}", r.ah2_failures);
            assert!(r.edge_regime_ok);
        }
    }

    #[test]
    fn ah2_fails_when_fibers_double_count() {
        let p = ws(&[2, 2]);
        let h = GroupHom::new(p.clone(), p.clone(), vec![p.generator(0), p.generator(0)]).unwrap();
        let r = h.check_ah2(10).unwrap();
        assert!(!r.ah2_holds());
        let at_c = r.ah2_failures.iter().find(|f| f.degree == p.canonical()).unwrap();
        assert_eq!((at_c.fiber_mult, at_c.mult), (3, 2));
    }

    #[test]
    fn identity_is_admissible_with_trivial_kernel() {
        let p = ws(&[3, 3, 3]);
        let r = GroupHom::identity(&p).is_admissible(8).unwrap();
        assert!(r.is_admissible());
        assert_eq!(r.kernel, vec![p.zero()]);
    }

    #[test]
    fn window_must_be_positive() {
        assert_eq!(case_a().check_ah2(0), Err(HomError::InvalidWindow(0)));
    }
}
