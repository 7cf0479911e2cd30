//! Full transformations of `[0, n)`, composed left to right.
//!
//! A [`Transformation`] is an image table: entry `x` is the image of point `x`.
//! Composition applies the left operand first, so `a.then(&b)` maps `x` to `b(a(x))`.
//! Idempotents additionally have a block form ([`IdempotentDecomposition`]): the
//! kernel classes `A_i` each collapse onto a representative `x_i ∈ A_i`, which
//! gives a mask-level commuting test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::points::{PointSet, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("ground set must have at least one point")]
    EmptyGroundSet,
    #[error("ground set of {n} points exceeds the supported maximum of {MAX_POINTS}")]
    TooManyPoints { n: usize },
    #[error("expected {expected} images, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("image {value} of point {point} is outside [0, {n})")]
    OutOfRange {
        point: usize,
        value: usize,
        n: usize,
    },
    #[error("ground set mismatch: {left} vs {right} points")]
    GroundSetMismatch { left: usize, right: usize },
    #[error("{0} is not idempotent")]
    NotIdempotent(Transformation),
    #[error("cannot parse {token:?} as a point")]
    BadToken { token: String },
}

pub(crate) fn check_ground_set(n: usize) -> Result<(), TransformError> {
    match n {
        0 => Err(TransformError::EmptyGroundSet),
        n if n > MAX_POINTS => Err(TransformError::TooManyPoints { n }),
        _ => Ok(()),
    }
}

/// A total map `[0, n) → [0, n)`.
///
/// Equality and ordering are those of the image table, so the derived `Ord` is the
/// lexicographic order used for every canonical listing in this crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    images: Box<[u8]>,
}

impl Transformation {
    /// Validates `images` as a map on `[0, n)`.
    pub fn new(n: usize, images: &[usize]) -> Result<Self, TransformError> {
        check_ground_set(n)?;
        if images.len() != n {
            return Err(TransformError::LengthMismatch {
                expected: n,
                found: images.len(),
            });
        }
        if let Some((point, &value)) = images.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(TransformError::OutOfRange { point, value, n });
        }
        Ok(Self::from_table(images.iter().map(|&v| v as u8).collect()))
    }

    /// Infers `n` from the table length.
    pub fn from_images(images: &[usize]) -> Result<Self, TransformError> {
        Self::new(images.len(), images)
    }

    pub(crate) fn from_table(images: Box<[u8]>) -> Self {
        debug_assert!(images.iter().all(|&v| (v as usize) < images.len()));
        Transformation { images }
    }

    pub(crate) fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Self {
        Self::from_table((0..n).map(|x| f(x) as u8).collect())
    }

    pub fn identity(n: usize) -> Result<Self, TransformError> {
        check_ground_set(n)?;
        Ok(Self::from_fn(n, |x| x))
    }

    /// The map sending every point to `c`.
    pub fn constant(n: usize, c: usize) -> Result<Self, TransformError> {
        check_ground_set(n)?;
        if c >= n {
            return Err(TransformError::OutOfRange {
                point: 0,
                value: c,
                n,
            });
        }
        Ok(Self::from_fn(n, |_| c))
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Image of point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self` then `other`: `x ↦ other(self(x))`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation, TransformError> {
        self.same_ground_set(other)?;
        Ok(self.then(other))
    }

    /// Unchecked [`compose`](Self::compose); panics if the ground sets differ.
    pub fn then(&self, other: &Transformation) -> Transformation {
        assert_eq!(
            self.n(),
            other.n(),
            "composing maps on different ground sets"
        );
        Self::from_table(
            self.images
                .iter()
                .map(|&y| other.images[y as usize])
                .collect(),
        )
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&y| self.images[y as usize] == y)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| x == y as usize)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&y| y == self.images[0])
    }

    pub fn image(&self) -> PointSet {
        self.images.iter().map(|&y| y as usize).collect()
    }

    pub fn fixed_points(&self) -> PointSet {
        (0..self.n()).filter(|&x| self.apply(x) == x).collect()
    }

    /// `{ y : self(y) = x }`.
    pub fn preimage(&self, x: usize) -> PointSet {
        (0..self.n()).filter(|&y| self.apply(y) == x).collect()
    }

    /// Image of a point set.
    pub fn map_set(&self, set: PointSet) -> PointSet {
        set.iter().map(|x| self.apply(x)).collect()
    }

    /// Kernel classes (sorted by least member) and the image.
    pub fn kernel_image(&self) -> (Vec<PointSet>, PointSet) {
        let image = self.image();
        let mut kernel: Vec<PointSet> = image.iter().map(|y| self.preimage(y)).collect();
        kernel.sort_by_key(|class| class.first());
        (kernel, image)
    }

    /// Naive commuting test: compares both products.
    pub fn commutes(&self, other: &Transformation) -> Result<bool, TransformError> {
        self.same_ground_set(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Transformation) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    pub fn decompose(&self) -> Result<IdempotentDecomposition, TransformError> {
        IdempotentDecomposition::new(self)
    }

    fn same_ground_set(&self, other: &Transformation) -> Result<(), TransformError> {
        if self.n() == other.n() {
            Ok(())
        } else {
            Err(TransformError::GroundSetMismatch {
                left: self.n(),
                right: other.n(),
            })
        }
    }
}

impl fmt::Display for Transformation {
    /// Image word: `"0 0 2"` is `0↦0, 1↦0, 2↦2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Transformation {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let images = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| TransformError::BadToken {
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(&images)
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.images.iter())
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Transformation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// One kernel class of an idempotent together with the point it collapses onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub class: PointSet,
    pub rep: usize,
}

/// Block form `(A_1, x_1) … (A_k, x_k)` of an idempotent, blocks sorted by representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentDecomposition {
    n: usize,
    blocks: Vec<Block>,
    // point -> index of the block containing it
    block_of: Box<[u8]>,
}

impl IdempotentDecomposition {
    pub fn new(e: &Transformation) -> Result<Self, TransformError> {
        if !e.is_idempotent() {
            return Err(TransformError::NotIdempotent(e.clone()));
        }
        let blocks: Vec<Block> = e
            .image()
            .iter()
            .map(|rep| Block {
                class: e.preimage(rep),
                rep,
            })
            .collect();
        let mut block_of = vec![0u8; e.n()].into_boxed_slice();
        for (i, block) in blocks.iter().enumerate() {
            for y in block.class {
                block_of[y] = i as u8;
            }
        }
        Ok(IdempotentDecomposition {
            n: e.n(),
            blocks,
            block_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The representatives `x_i`, i.e. the image of the idempotent.
    pub fn image(&self) -> PointSet {
        self.blocks.iter().map(|b| b.rep).collect()
    }

    /// Rebuilds the idempotent: every point of `A_i` goes to `x_i`.
    pub fn to_transformation(&self) -> Transformation {
        Transformation::from_fn(self.n, |y| self.blocks[self.block_of[y] as usize].rep)
    }

    /// Block-wise commuting test: `a` commutes with the idempotent iff each block
    /// `(A_i, x_i)` has some block `(A_j, x_j)` with `x_i·a = x_j` and `A_i·a ⊆ A_j`.
    pub fn commutes_with(&self, a: &Transformation) -> Result<bool, TransformError> {
        if a.n() != self.n {
            return Err(TransformError::GroundSetMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        Ok(self.commutes_with_unchecked(a))
    }

    pub(crate) fn commutes_with_unchecked(&self, a: &Transformation) -> bool {
        self.blocks.iter().all(|block| {
            let y = a.apply(block.rep);
            let target = &self.blocks[self.block_of[y] as usize];
            target.rep == y && a.map_set(block.class).is_subset(target.class)
        })
    }
}

/// All idempotents of `T(n)` in lexicographic order of their image tables.
///
/// Built from the image set: every point of the image is fixed, every other point
/// goes to some image point.
pub fn enumerate_idempotents(n: usize) -> Result<Vec<Transformation>, TransformError> {
    check_ground_set(n)?;
    let mut out = Vec::new();
    for image in PointSet::full(n).subsets().filter(|s| !s.is_empty()) {
        let reps: Vec<usize> = image.iter().collect();
        let free: Vec<usize> = PointSet::full(n).difference(image).iter().collect();
        let mut table: Vec<u8> = (0..n as u8).collect();
        let mut choice = vec![0usize; free.len()];
        loop {
            for (&x, &c) in free.iter().zip(&choice) {
                table[x] = reps[c] as u8;
            }
            out.push(Transformation::from_table(table.clone().into_boxed_slice()));
            // mixed-radix increment over the choices for the free points
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < reps.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of idempotents of `T(n)`: `Σ_k C(n, k)·k^(n−k)`.
pub fn idempotent_count(n: usize) -> u64 {
    let mut binom = 1u64;
    let mut total = 0u64;
    for k in 1..=n as u64 {
        binom = binom * (n as u64 - k + 1) / k;
        total += binom * k.pow((n as u64 - k) as u32);
    }
    total
}
