//! Verified subsemilattices of `T(n)`, their partial orders, and the extremal
//! family `E_t`.
//!
//! `E_t` consists of the maps `ε_A` for `A ⊆ [0, n) − {t}`: points of `A` are
//! fixed and every other point goes to `t`. `ε_A·ε_B = ε_{A∩B}`, so `E_t` is a
//! Boolean lattice with `2^(n−1)` elements, the largest size a subsemilattice
//! of `T(n)` can reach.

use std::cmp::Ordering;

use thiserror::Error;

use crate::points::PointSet;
use crate::transform::{check_ground_set, TransformError, Transformation};

/// Why a candidate set is not a subsemilattice. Carries the offending elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("empty candidate set")]
    Empty,
    #[error("{element} is not a map on {expected} points")]
    GroundSet {
        element: Transformation,
        expected: usize,
    },
    #[error("idempotence fails: {element} composed with itself is {square}")]
    NotIdempotent {
        element: Transformation,
        square: Transformation,
    },
    #[error("commutativity fails for {left} and {right}: products {left_right} vs {right_left}")]
    NotCommuting {
        left: Transformation,
        right: Transformation,
        left_right: Transformation,
        right_left: Transformation,
    },
    #[error("closure fails: {left} then {right} is {product}, which is not in the set")]
    NotClosed {
        left: Transformation,
        right: Transformation,
        product: Transformation,
    },
}

impl Violation {
    /// Axiom name: `idempotence`, `commutativity`, `closure`, or `input`.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::NotIdempotent { .. } => "idempotence",
            Violation::NotCommuting { .. } => "commutativity",
            Violation::NotClosed { .. } => "closure",
            Violation::Empty | Violation::GroundSet { .. } => "input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilatticeError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("point {point} is outside [0, {n})")]
    PointOutOfRange { point: usize, n: usize },
    #[error("size {m} is outside [1, {max}]")]
    SizeOutOfRange { m: usize, max: usize },
    #[error("{0} is not an element of the semilattice")]
    NotMember(Transformation),
}

/// A nonempty set of pairwise commuting idempotents closed under composition.
///
/// Elements are kept sorted, so equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semilattice {
    n: usize,
    elements: Vec<Transformation>,
}

impl Semilattice {
    /// Checks the semilattice axioms in the order idempotence, commutativity, closure.
    pub fn verify(
        n: usize,
        candidate: impl IntoIterator<Item = Transformation>,
    ) -> Result<Semilattice, Violation> {
        let mut elements: Vec<Transformation> = candidate.into_iter().collect();
        if elements.is_empty() {
            return Err(Violation::Empty);
        }
        if let Some(bad) = elements.iter().find(|e| e.n() != n) {
            return Err(Violation::GroundSet {
                element: bad.clone(),
                expected: n,
            });
        }
        elements.sort_unstable();
        elements.dedup();

        for e in &elements {
            if !e.is_idempotent() {
                return Err(Violation::NotIdempotent {
                    element: e.clone(),
                    square: e.then(e),
                });
            }
        }
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                let ab = a.then(b);
                let ba = b.then(a);
                if ab != ba {
                    return Err(Violation::NotCommuting {
                        left: a.clone(),
                        right: b.clone(),
                        left_right: ab,
                        right_left: ba,
                    });
                }
            }
        }
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                let product = a.then(b);
                if elements.binary_search(&product).is_err() {
                    return Err(Violation::NotClosed {
                        left: a.clone(),
                        right: b.clone(),
                        product,
                    });
                }
            }
        }
        Ok(Semilattice { n, elements })
    }

    /// Skips verification; callers guarantee the axioms and sorted, duplicate-free order.
    pub(crate) fn from_sorted_unchecked(n: usize, elements: Vec<Transformation>) -> Semilattice {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Semilattice { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false: a semilattice has at least one element.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transformation> {
        self.elements.iter()
    }

    pub fn contains(&self, a: &Transformation) -> bool {
        self.index_of(a).is_some()
    }

    pub fn index_of(&self, a: &Transformation) -> Option<usize> {
        self.elements.binary_search(a).ok()
    }

    /// Least element: the product of all elements.
    pub fn minimum(&self) -> &Transformation {
        let product = self.elements[1..]
            .iter()
            .fold(self.elements[0].clone(), |acc, e| acc.then(e));
        &self.elements[self.index_of(&product).expect("semilattice is closed")]
    }

    /// Greatest lower bound, realized by composition.
    pub fn meet(
        &self,
        a: &Transformation,
        b: &Transformation,
    ) -> Result<Transformation, SemilatticeError> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(SemilatticeError::NotMember(x.clone()));
            }
        }
        Ok(a.then(b))
    }

    /// `a ≤ b` iff `a = ab`.
    pub fn natural_order(&self) -> PosetRelation<Transformation> {
        PosetRelation::from_fn(self.elements.clone(), |a, b| &a.then(b) == a)
    }

    /// Order on points: `x ≤ y` iff `x = y` or `x = y·e` for some element `e`.
    pub fn transitivity_order(&self) -> PosetRelation<usize> {
        let n = self.n;
        // below[y] = { y·e : e ∈ S } ∪ {y}
        let below: Vec<PointSet> = (0..n)
            .map(|y| {
                self.elements
                    .iter()
                    .map(|e| e.apply(y))
                    .collect::<PointSet>()
                    .with(y)
            })
            .collect();
        PosetRelation::from_fn((0..n).collect(), |&x, &y| below[y].contains(x))
    }

    /// Maximality among subsemilattices of `T(n)`, given every idempotent of `T(n)`.
    ///
    /// `S` is maximal iff no idempotent outside `S` commutes with all of `S`: such an
    /// `f` together with `S` generates a strictly larger semilattice.
    pub fn maximality(&self, all_idempotents: &[Transformation]) -> Maximality {
        let decomposed: Vec<_> = self
            .elements
            .iter()
            .map(|e| e.decompose().expect("elements are idempotent"))
            .collect();
        all_idempotents
            .iter()
            .filter(|f| f.n() == self.n && !self.contains(f))
            .find(|f| decomposed.iter().all(|d| d.commutes_with_unchecked(f)))
            .map_or(Maximality::Maximal, |f| Maximality::Extendable(f.clone()))
    }

    pub fn is_maximal(&self, all_idempotents: &[Transformation]) -> bool {
        matches!(self.maximality(all_idempotents), Maximality::Maximal)
    }

    /// Recognizes a Boolean lattice: the natural order is isomorphic to the power set
    /// of the atoms. Returns the atom-label witness when it is.
    pub fn boolean_structure(&self) -> Option<BooleanWitness> {
        let order = self.natural_order();
        let bottom = self.index_of(self.minimum()).expect("minimum is a member");
        let size = self.len();
        // atoms: elements whose only strict lower bound is the minimum
        let atoms: Vec<usize> = (0..size)
            .filter(|&i| {
                i != bottom && (0..size).all(|j| j == i || j == bottom || !order.leq(j, i))
            })
            .collect();
        if atoms.len() >= 64 || size != 1usize << atoms.len() {
            return None;
        }
        let labels: Vec<u64> = (0..size)
            .map(|i| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| order.leq(a, i))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != size {
            return None;
        }
        // products must map to intersections
        for i in 0..size {
            for j in i..size {
                let product = self.elements[i].then(&self.elements[j]);
                let k = self.index_of(&product)?;
                if labels[k] != labels[i] & labels[j] {
                    return None;
                }
            }
        }
        Some(BooleanWitness {
            atoms: atoms.iter().map(|&i| self.elements[i].clone()).collect(),
            labels,
        })
    }

    pub fn is_boolean_lattice(&self) -> bool {
        self.boolean_structure().is_some()
    }

    /// Constant maps in the semilattice.
    pub fn constants(&self) -> impl Iterator<Item = &Transformation> {
        self.elements.iter().filter(|e| e.is_constant())
    }

    /// Points fixed by every element.
    pub fn common_fixed_points(&self) -> PointSet {
        self.elements.iter().fold(PointSet::full(self.n), |acc, e| {
            acc.intersection(e.fixed_points())
        })
    }

    /// Canonical order: size descending, then lexicographic on the sorted element lists.
    pub fn cmp_canonical(&self, other: &Semilattice) -> Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl<'a> IntoIterator for &'a Semilattice {
    type Item = &'a Transformation;
    type IntoIter = std::slice::Iter<'a, Transformation>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Maximality {
    Maximal,
    /// An idempotent outside the semilattice that commutes with all of it.
    Extendable(Transformation),
}

/// Isomorphism onto a power set: `labels[i]` is the bit set of atoms below element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanWitness {
    pub atoms: Vec<Transformation>,
    pub labels: Vec<u64>,
}

/// A binary relation on an indexed carrier, stored as a dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetRelation<T> {
    carrier: Vec<T>,
    leq: Vec<bool>,
}

impl<T> PosetRelation<T> {
    pub fn from_fn(carrier: Vec<T>, leq: impl Fn(&T, &T) -> bool) -> Self {
        let leq = carrier
            .iter()
            .flat_map(|a| carrier.iter().map(|b| leq(a, b)).collect::<Vec<_>>())
            .collect();
        PosetRelation { carrier, leq }
    }

    pub fn carrier(&self) -> &[T] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Element `i` ≤ element `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.leq
            .chunks(self.len().max(1))
            .map(<[bool]>::to_vec)
            .collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let k = self.len();
        let reflexive = (0..k).all(|i| self.leq(i, i));
        let antisymmetric =
            (0..k).all(|i| (0..k).all(|j| i == j || !(self.leq(i, j) && self.leq(j, i))));
        let transitive = (0..k).all(|i| {
            (0..k).all(|j| !self.leq(i, j) || (0..k).all(|l| !self.leq(j, l) || self.leq(i, l)))
        });
        reflexive && antisymmetric && transitive
    }

    /// Greatest lower bound of `i` and `j` computed from the order alone.
    pub fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.len();
        let lower: Vec<usize> = (0..k)
            .filter(|&l| self.leq(l, i) && self.leq(l, j))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&g| lower.iter().all(|&l| self.leq(l, g)))
    }

    /// Pairs `(i, j)` with `i < j` in the order, excluding the diagonal.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.leq(i, j))
            .collect()
    }
}

fn check_point(n: usize, t: usize) -> Result<(), SemilatticeError> {
    check_ground_set(n)?;
    if t >= n {
        return Err(SemilatticeError::PointOutOfRange { point: t, n });
    }
    Ok(())
}

/// `ε_A` in `E_t`: fixes `A` pointwise, sends everything else to `t`. `t ∉ A` is assumed.
pub fn epsilon(n: usize, t: usize, a: PointSet) -> Transformation {
    debug_assert!(!a.contains(t));
    Transformation::from_fn(n, |x| if a.contains(x) { x } else { t })
}

/// `E_t` on `n` points.
pub fn make_et(n: usize, t: usize) -> Result<Semilattice, SemilatticeError> {
    check_point(n, t)?;
    let rest = PointSet::full(n).without(t);
    let mut elements: Vec<Transformation> = rest.subsets().map(|a| epsilon(n, t, a)).collect();
    elements.sort_unstable();
    Ok(Semilattice::from_sorted_unchecked(n, elements))
}

/// Membership in `I_t`: `a` fixes `t` and every image point other than `t` has
/// exactly one preimage.
pub fn is_in_it(t: usize, a: &Transformation) -> bool {
    if t >= a.n() || a.apply(t) != t {
        return false;
    }
    a.image()
        .without(t)
        .iter()
        .all(|x| a.preimage(x).len() == 1)
}

/// A subsemilattice of `E_t` with exactly `m` elements.
///
/// Starting from `E_t`, repeatedly delete the `ε_A` with the largest `|A|` (ties:
/// lexicographically smallest `A`). Such an element is maximal in the natural
/// order, so what remains is still closed under products.
pub fn semilattice_of_size(n: usize, t: usize, m: usize) -> Result<Semilattice, SemilatticeError> {
    check_point(n, t)?;
    let max = 1usize << (n - 1);
    if m == 0 || m > max {
        return Err(SemilatticeError::SizeOutOfRange { m, max });
    }
    let mut subsets: Vec<PointSet> = PointSet::full(n).without(t).subsets().collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp_lex(*b)));
    let mut elements: Vec<Transformation> = subsets[max - m..]
        .iter()
        .map(|&a| epsilon(n, t, a))
        .collect();
    elements.sort_unstable();
    Ok(Semilattice::from_sorted_unchecked(n, elements))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::enumerate_idempotents;

    fn t(images: &[usize]) -> Transformation {
        Transformation::from_images(images).unwrap()
    }

    fn set(n: usize, maps: &[&[usize]]) -> Vec<Transformation> {
        maps.iter()
            .map(|m| Transformation::new(n, m).unwrap())
            .collect()
    }

    #[test]
    fn verify_examples() {
        let id = Semilattice::verify(3, [Transformation::identity(3).unwrap()]).unwrap();
        assert_eq!(id.len(), 1);

        let err = Semilattice::verify(3, set(3, &[&[0, 0, 0], &[1, 1, 1]])).unwrap_err();
        assert_eq!(
            err,
            Violation::NotCommuting {
                left: t(&[0, 0, 0]),
                right: t(&[1, 1, 1]),
                left_right: t(&[1, 1, 1]),
                right_left: t(&[0, 0, 0]),
            }
        );
        assert_eq!(err.axiom(), "commutativity");

        let ok = Semilattice::verify(3, set(3, &[&[0, 1, 2], &[0, 1, 0]])).unwrap();
        assert_eq!(ok.len(), 2);

        assert_eq!(Semilattice::verify(3, vec![]), Err(Violation::Empty));
        assert_eq!(
            Semilattice::verify(3, set(3, &[&[1, 0, 2]]))
                .unwrap_err()
                .axiom(),
            "idempotence"
        );
        assert!(matches!(
            Semilattice::verify(3, set(2, &[&[0, 1]])),
            Err(Violation::GroundSet { expected: 3, .. })
        ));
    }

    #[test]
    fn verify_reports_missing_product() {
        // ε_{1}, ε_{2} in E_0 without their meet ε_∅
        let err = Semilattice::verify(3, set(3, &[&[0, 1, 0], &[0, 0, 2]])).unwrap_err();
        assert_eq!(
            err,
            Violation::NotClosed {
                left: t(&[0, 0, 2]),
                right: t(&[0, 1, 0]),
                product: t(&[0, 0, 0]),
            }
        );
    }

    #[test]
    fn et_on_three_points() {
        let e0 = make_et(3, 0).unwrap();
        assert_eq!(
            e0.elements(),
            &set(3, &[&[0, 0, 0], &[0, 0, 2], &[0, 1, 0], &[0, 1, 2]])[..]
        );
        assert_eq!(make_et(1, 0).unwrap().elements(), &[t(&[0])]);
        assert!(matches!(
            make_et(3, 3),
            Err(SemilatticeError::PointOutOfRange { point: 3, n: 3 })
        ));
        for n in 1..=6 {
            for tt in 0..n {
                let et = make_et(n, tt).unwrap();
                assert_eq!(et.len(), 1 << (n - 1));
                assert_eq!(Semilattice::verify(n, et.elements().to_vec()).unwrap(), et);
            }
        }
    }

    #[test]
    fn epsilon_products_intersect() {
        let rest = PointSet::full(4).without(2);
        for a in rest.subsets() {
            for b in rest.subsets() {
                assert_eq!(
                    epsilon(4, 2, a).then(&epsilon(4, 2, b)),
                    epsilon(4, 2, a.intersection(b))
                );
            }
        }
    }

    #[test]
    fn natural_order_of_e0() {
        let e0 = make_et(3, 0).unwrap();
        let order = e0.natural_order();
        assert!(order.is_partial_order());
        let bottom = e0.index_of(&t(&[0, 0, 0])).unwrap();
        let top = e0.index_of(&t(&[0, 1, 2])).unwrap();
        for i in 0..4 {
            assert!(order.leq(bottom, i));
            assert!(order.leq(i, top));
        }
        assert_eq!(e0.minimum(), &t(&[0, 0, 0]));

        let single = Semilattice::verify(2, [t(&[1, 1])]).unwrap();
        assert_eq!(single.natural_order().rows(), vec![vec![true]]);
    }

    #[test]
    fn meet_is_composition() {
        let e0 = make_et(3, 0).unwrap();
        let one = t(&[0, 1, 0]);
        let two = t(&[0, 0, 2]);
        assert_eq!(e0.meet(&one, &two).unwrap(), t(&[0, 0, 0]));
        assert_eq!(e0.meet(&one, &one).unwrap(), one);
        assert_eq!(e0.meet(&one, &t(&[0, 1, 2])).unwrap(), one);
        assert!(matches!(
            e0.meet(&one, &t(&[1, 1, 1])),
            Err(SemilatticeError::NotMember(_))
        ));
        let order = e0.natural_order();
        for i in 0..4 {
            for j in 0..4 {
                let m = e0.meet(&e0.elements()[i], &e0.elements()[j]).unwrap();
                assert_eq!(order.glb(i, j), e0.index_of(&m));
            }
        }
    }

    #[test]
    fn it_membership() {
        let id = Transformation::identity(3).unwrap();
        for tt in 0..3 {
            assert!(is_in_it(tt, &id));
            assert!(is_in_it(tt, &Transformation::constant(3, tt).unwrap()));
        }
        // 0 fixed; image − {0} = {1}, whose preimage is {2}
        assert!(is_in_it(0, &t(&[0, 0, 1])));
        assert!(!is_in_it(1, &t(&[0, 0, 1])));
        assert!(!is_in_it(0, &t(&[0, 1, 1])));
        assert!(!is_in_it(5, &id));
    }

    #[test]
    fn maximality_examples() {
        let all2 = enumerate_idempotents(2).unwrap();
        let id = Semilattice::verify(2, [t(&[0, 1])]).unwrap();
        match id.maximality(&all2) {
            Maximality::Extendable(f) => assert!(f.is_constant()),
            Maximality::Maximal => panic!("identity alone is not maximal"),
        }
        let pair = Semilattice::verify(2, [t(&[0, 1]), t(&[0, 0])]).unwrap();
        assert_eq!(pair.maximality(&all2), Maximality::Maximal);

        for n in 1..=5 {
            let all = enumerate_idempotents(n).unwrap();
            for tt in 0..n {
                assert!(make_et(n, tt).unwrap().is_maximal(&all));
            }
        }
    }

    #[test]
    fn boolean_recognition() {
        let e0 = make_et(3, 0).unwrap();
        let w = e0.boolean_structure().unwrap();
        assert_eq!(w.atoms, vec![t(&[0, 0, 2]), t(&[0, 1, 0])]);

        let single = Semilattice::verify(1, [t(&[0])]).unwrap();
        assert_eq!(single.boolean_structure().unwrap().atoms.len(), 0);

        let chain = Semilattice::verify(3, set(3, &[&[0, 0, 0], &[0, 1, 0], &[0, 1, 2]])).unwrap();
        assert!(!chain.is_boolean_lattice());

        for n in 1..=5 {
            for tt in 0..n {
                let w = make_et(n, tt).unwrap().boolean_structure().unwrap();
                assert_eq!(w.atoms.len(), n - 1);
                let mut expected: Vec<_> = (0..n)
                    .filter(|&x| x != tt)
                    .map(|x| epsilon(n, tt, PointSet::singleton(x)))
                    .collect();
                expected.sort();
                assert_eq!(w.atoms, expected);
            }
        }
    }

    #[test]
    fn two_atoms_without_join_is_not_boolean() {
        // E_0 minus its identity: 3 elements, 2 atoms
        let s = semilattice_of_size(3, 0, 3).unwrap();
        assert!(!s.is_boolean_lattice());
    }

    #[test]
    fn transitivity_orders() {
        let id = Semilattice::verify(3, [Transformation::identity(3).unwrap()]).unwrap();
        assert!(id.transitivity_order().strict_pairs().is_empty());

        let order = make_et(3, 0).unwrap().transitivity_order();
        assert!(order.is_partial_order());
        assert_eq!(order.strict_pairs(), vec![(0, 1), (0, 2)]);

        let c = Semilattice::verify(3, [Transformation::constant(3, 1).unwrap()]).unwrap();
        assert_eq!(c.transitivity_order().strict_pairs(), vec![(1, 0), (1, 2)]);
    }

    #[test]
    fn sized_subsemilattices() {
        assert_eq!(
            semilattice_of_size(4, 1, 8).unwrap(),
            make_et(4, 1).unwrap()
        );
        assert_eq!(
            semilattice_of_size(3, 0, 3).unwrap().elements(),
            &set(3, &[&[0, 0, 0], &[0, 0, 2], &[0, 1, 0]])[..]
        );
        // tie between {1} and {2}: {1} goes first
        assert_eq!(
            semilattice_of_size(3, 0, 2).unwrap().elements(),
            &set(3, &[&[0, 0, 0], &[0, 0, 2]])[..]
        );
        assert_eq!(
            semilattice_of_size(4, 2, 1).unwrap().elements(),
            &set(4, &[&[2, 2, 2, 2]])[..]
        );
        assert!(matches!(
            semilattice_of_size(3, 0, 5),
            Err(SemilatticeError::SizeOutOfRange { m: 5, max: 4 })
        ));
        assert!(semilattice_of_size(3, 0, 0).is_err());
        for n in 1..=5 {
            for tt in 0..n {
                for m in 1..=1 << (n - 1) {
                    let s = semilattice_of_size(n, tt, m).unwrap();
                    assert_eq!(s.len(), m);
                    Semilattice::verify(n, s.elements().to_vec()).unwrap();
                }
            }
        }
    }
}
