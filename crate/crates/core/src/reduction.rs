//! The inductive reduction from `n` to `n − 1` points.
//!
//! Every subsemilattice `S` of `T(n)`, `n ≥ 2`, has an [`Anchor`]: a point `t`
//! fixed by all of `S` and a point `u ≠ t` that every element sends to `u` or `t`.
//! The star map redirects `u`-valued outputs to `t`; it is a homomorphism on `S`,
//! its image `S*` never hits `u`, and dropping `u` gives an isomorphic semilattice
//! `S*_u` on `n − 1` points with `|S| ≤ 2|S*|`.

use serde::Serialize;
use thiserror::Error;

use crate::points::PointSet;
use crate::semilattice::{make_et, Semilattice, Violation};
use crate::transform::Transformation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("reduction needs at least 2 points, got {n}")]
    GroundSetTooSmall { n: usize },
    #[error("no anchor (t, u) exists; the input is not a semilattice")]
    NoAnchor,
    #[error("({t}, {u}) is not an anchor for this semilattice")]
    InvalidAnchor { t: usize, u: usize },
    #[error("star image is not a semilattice: {0}")]
    StarNotSemilattice(Violation),
    #[error("restriction to the remaining points is not injective")]
    RestrictionNotInjective,
    #[error("embedding hypothesis fails: point {point} has {preimages} preimages under {element}")]
    LambdaHypothesis {
        element: Transformation,
        point: usize,
        preimages: usize,
    },
    #[error("{image} (image of {element}) is not in E_{t}")]
    LambdaOutsideEt {
        element: Transformation,
        image: Transformation,
        t: usize,
    },
}

/// `t` is fixed by every element; every element sends `u` into `{u, t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Anchor {
    pub t: usize,
    pub u: usize,
}

impl Anchor {
    pub fn is_valid_for(&self, s: &Semilattice) -> bool {
        self.t != self.u
            && self.t < s.n()
            && self.u < s.n()
            && s.iter().all(|e| {
                let ue = e.apply(self.u);
                e.apply(self.t) == self.t && (ue == self.u || ue == self.t)
            })
    }
}

/// Every anchor of `s`, ordered by `t` then `u`.
pub fn valid_anchors(s: &Semilattice) -> Vec<Anchor> {
    let n = s.n();
    (0..n)
        .flat_map(|t| (0..n).map(move |u| Anchor { t, u }))
        .filter(|a| a.is_valid_for(s))
        .collect()
}

/// The anchor with the smallest `t`, then the smallest `u`.
pub fn find_anchor(s: &Semilattice) -> Result<Anchor, ReductionError> {
    let n = s.n();
    if n < 2 {
        return Err(ReductionError::GroundSetTooSmall { n });
    }
    let fixed = s.common_fixed_points();
    for t in fixed {
        // u qualifies iff u·e ∈ {u, t} for every e
        let u = (0..n).find(|&u| {
            u != t
                && s.iter().all(|e| {
                    let ue = e.apply(u);
                    ue == u || ue == t
                })
        });
        if let Some(u) = u {
            return Ok(Anchor { t, u });
        }
    }
    Err(ReductionError::NoAnchor)
}

/// `x ↦ x·g` unless that is `u`, in which case `x ↦ t`.
pub fn star(g: &Transformation, anchor: Anchor) -> Transformation {
    Transformation::from_fn(g.n(), |x| {
        let y = g.apply(x);
        if y == anchor.u {
            anchor.t
        } else {
            y
        }
    })
}

/// Restricts a map that avoids `u` to `[0, n) − {u}`, renumbering points above `u` down by one.
pub fn restrict_away(g: &Transformation, u: usize) -> Transformation {
    let relabel = |p: usize| if p > u { p - 1 } else { p };
    Transformation::from_fn(g.n() - 1, |x| {
        let source = if x >= u { x + 1 } else { x };
        let y = g.apply(source);
        debug_assert_ne!(y, u);
        relabel(y)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub anchor: Anchor,
    /// `S*` on the original `n` points.
    pub star_image: Semilattice,
    /// `S*_u` on `n − 1` points.
    pub restricted: Semilattice,
    /// `|S|`.
    pub source_size: usize,
}

impl ReductionResult {
    /// `|S| ≤ 2|S*| = 2|S*_u|`.
    pub fn counting_chain_holds(&self) -> bool {
        self.source_size <= 2 * self.star_image.len()
            && self.star_image.len() == self.restricted.len()
    }
}

/// Anchor, `S*`, and `S*_u` for `s`.
pub fn reduce(s: &Semilattice) -> Result<ReductionResult, ReductionError> {
    let anchor = find_anchor(s)?;
    reduce_with(s, anchor)
}

/// As [`reduce`], with a caller-chosen anchor.
pub fn reduce_with(s: &Semilattice, anchor: Anchor) -> Result<ReductionResult, ReductionError> {
    if s.n() < 2 {
        return Err(ReductionError::GroundSetTooSmall { n: s.n() });
    }
    if !anchor.is_valid_for(s) {
        return Err(ReductionError::InvalidAnchor {
            t: anchor.t,
            u: anchor.u,
        });
    }
    let star_image = Semilattice::verify(s.n(), s.iter().map(|g| star(g, anchor)))
        .map_err(ReductionError::StarNotSemilattice)?;
    let restricted_elements: Vec<Transformation> = star_image
        .iter()
        .map(|g| restrict_away(g, anchor.u))
        .collect();
    let restricted = Semilattice::verify(s.n() - 1, restricted_elements)
        .map_err(ReductionError::StarNotSemilattice)?;
    if restricted.len() != star_image.len() {
        return Err(ReductionError::RestrictionNotInjective);
    }
    Ok(ReductionResult {
        anchor,
        star_image,
        restricted,
        source_size: s.len(),
    })
}

/// The map `e ↦ eλ` from a semilattice into `E_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaEmbedding {
    pub anchor: Anchor,
    /// `(e, eλ)` in the order of the source semilattice.
    pub pairs: Vec<(Transformation, Transformation)>,
    /// Some element with at least two preimages of `u`, if any.
    pub wide_u_fibre: Option<Transformation>,
    target_size: usize,
}

impl LambdaEmbedding {
    pub fn image(&self) -> Vec<Transformation> {
        let mut image: Vec<_> = self.pairs.iter().map(|(_, l)| l.clone()).collect();
        image.sort_unstable();
        image.dedup();
        image
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.pairs.len()
    }

    pub fn is_onto(&self) -> bool {
        self.image().len() == self.target_size
    }

    /// `|E_t|`.
    pub fn target_size(&self) -> usize {
        self.target_size
    }
}

/// Builds `λ : S → E_t`.
///
/// Requires every `x ∉ {u, t}` to have at most one preimage under every element.
/// `x·(eλ)` is `x·e`, except that `x ≠ u` with `x·e = u` goes to `t`.
pub fn lambda_embed(s: &Semilattice, anchor: Anchor) -> Result<LambdaEmbedding, ReductionError> {
    let Anchor { t, u } = anchor;
    if !anchor.is_valid_for(s) {
        return Err(ReductionError::InvalidAnchor { t, u });
    }
    let n = s.n();
    let others = PointSet::full(n).without(t).without(u);
    for e in s {
        if let Some((point, preimages)) = others
            .iter()
            .map(|x| (x, e.preimage(x).len()))
            .find(|&(_, k)| k > 1)
        {
            return Err(ReductionError::LambdaHypothesis {
                element: e.clone(),
                point,
                preimages,
            });
        }
    }
    let et = make_et(n, t).expect("anchor point lies in the ground set");
    let mut pairs = Vec::with_capacity(s.len());
    for e in s {
        let image = Transformation::from_fn(n, |x| {
            let y = e.apply(x);
            if x != u && y == u {
                t
            } else {
                y
            }
        });
        if !et.contains(&image) {
            return Err(ReductionError::LambdaOutsideEt {
                element: e.clone(),
                image,
                t,
            });
        }
        pairs.push((e.clone(), image));
    }
    let wide_u_fibre = s.iter().find(|f| f.preimage(u).len() >= 2).cloned();
    Ok(LambdaEmbedding {
        anchor,
        pairs,
        wide_u_fibre,
        target_size: et.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(images: &[usize]) -> Transformation {
        Transformation::from_images(images).unwrap()
    }

    fn sl(n: usize, maps: &[&[usize]]) -> Semilattice {
        Semilattice::verify(n, maps.iter().map(|m| Transformation::new(n, m).unwrap())).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(
            find_anchor(&sl(2, &[&[0, 1]])).unwrap(),
            Anchor { t: 0, u: 1 }
        );
        assert_eq!(
            find_anchor(&make_et(3, 0).unwrap()).unwrap(),
            Anchor { t: 0, u: 1 }
        );
        assert_eq!(
            find_anchor(&sl(3, &[&[1, 1, 1], &[0, 1, 2]])).unwrap(),
            Anchor { t: 1, u: 0 }
        );
        assert_eq!(
            find_anchor(&sl(1, &[&[0]])),
            Err(ReductionError::GroundSetTooSmall { n: 1 })
        );
        let anchors = valid_anchors(&make_et(3, 2).unwrap());
        assert_eq!(anchors, vec![Anchor { t: 2, u: 0 }, Anchor { t: 2, u: 1 }]);
    }

    #[test]
    fn star_examples() {
        let a = Anchor { t: 0, u: 1 };
        assert_eq!(star(&t(&[0, 1, 0]), a), t(&[0, 0, 0]));
        assert_eq!(star(&t(&[0, 0, 2]), a), t(&[0, 0, 2]));
        assert_eq!(star(&t(&[0, 0, 0]), a), t(&[0, 0, 0]));
    }

    #[test]
    fn restriction_relabels() {
        // u = 1: points 0, 2 become 0, 1
        assert_eq!(restrict_away(&t(&[0, 0, 2]), 1), t(&[0, 1]));
        assert_eq!(restrict_away(&t(&[2, 0, 2]), 1), t(&[1, 1]));
        assert_eq!(restrict_away(&t(&[1, 1, 2]), 0), t(&[0, 1]));
    }

    #[test]
    fn reduce_e0() {
        let r = reduce(&make_et(3, 0).unwrap()).unwrap();
        assert_eq!(r.anchor, Anchor { t: 0, u: 1 });
        assert_eq!(r.star_image.elements(), &[t(&[0, 0, 0]), t(&[0, 0, 2])]);
        assert_eq!(r.restricted.elements(), &[t(&[0, 0]), t(&[0, 1])]);
        assert!(r.counting_chain_holds());
        assert_eq!(r.source_size, 4);
    }

    #[test]
    fn reduce_identity() {
        // u itself is redirected to t, so only the restriction is an identity
        let r = reduce(&sl(3, &[&[0, 1, 2]])).unwrap();
        assert_eq!(r.star_image.elements(), &[t(&[0, 0, 2])]);
        assert_eq!(r.restricted.elements(), &[t(&[0, 1])]);
    }

    #[test]
    fn reduce_rejects_bad_anchor() {
        let s = make_et(3, 0).unwrap();
        assert_eq!(
            reduce_with(&s, Anchor { t: 1, u: 0 }),
            Err(ReductionError::InvalidAnchor { t: 1, u: 0 })
        );
    }

    #[test]
    fn lambda_examples() {
        let s = sl(3, &[&[0, 1, 1]]);
        let emb = lambda_embed(&s, Anchor { t: 0, u: 1 }).unwrap();
        assert_eq!(emb.pairs, vec![(t(&[0, 1, 1]), t(&[0, 1, 0]))]);
        assert_eq!(emb.wide_u_fibre, Some(t(&[0, 1, 1])));
        assert!(emb.is_injective());
        assert!(!emb.is_onto());

        for n in 2..=5 {
            for tt in 0..n {
                let et = make_et(n, tt).unwrap();
                for anchor in valid_anchors(&et) {
                    let emb = lambda_embed(&et, anchor).unwrap();
                    assert!(emb.pairs.iter().all(|(e, l)| e == l));
                    assert!(emb.is_onto());
                    assert!(emb.wide_u_fibre.is_none());
                }
            }
        }
    }

    #[test]
    fn lambda_hypothesis_violation() {
        // point 3 has preimages {2, 3}
        let s = sl(4, &[&[0, 1, 3, 3]]);
        let anchor = Anchor { t: 0, u: 1 };
        assert!(anchor.is_valid_for(&s));
        assert_eq!(
            lambda_embed(&s, anchor),
            Err(ReductionError::LambdaHypothesis {
                element: t(&[0, 1, 3, 3]),
                point: 3,
                preimages: 2,
            })
        );
    }
}
