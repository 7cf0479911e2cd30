//! Exhaustive search for maximal subsemilattices of `T(n)`.
//!
//! Two commuting idempotents have an idempotent product that commutes with every
//! common commuting partner, so a maximal clique of the commuting graph is closed
//! under composition. Maximal subsemilattices are therefore exactly the maximal
//! cliques of the graph on the idempotents of `T(n)`. [`brute_force_subsemilattices`]
//! checks this identification independently for `n ≤ 3`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::semilattice::{Semilattice, Violation};
use crate::transform::{enumerate_idempotents, TransformError, Transformation};

/// Enumeration above this many points is refused regardless of configuration.
pub const HARD_CAP: usize = 6;
pub const DEFAULT_CAP: usize = 5;
/// Largest `n` accepted by [`brute_force_subsemilattices`].
pub const BRUTE_FORCE_CAP: usize = 3;
/// Largest `n` accepted by [`all_subsemilattices`].
pub const ALL_SUBSEMILATTICES_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("n = {n} exceeds the enumeration cap of {cap} (hard maximum {HARD_CAP})")]
    AboveCap { n: usize, cap: usize },
    #[error("enumeration cap {cap} is outside [1, {HARD_CAP}]")]
    InvalidCap { cap: usize },
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("maximal clique failed verification: {0}")]
    CliqueNotSemilattice(Violation),
    #[error("maximal clique {0:?} is not a maximal semilattice")]
    CliqueNotMaximal(Vec<Transformation>),
}

/// Feasibility limit and parallelism for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationConfig {
    cap: usize,
    workers: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            cap: DEFAULT_CAP,
            workers: 1,
        }
    }
}

impl EnumerationConfig {
    pub fn new(cap: usize, workers: usize) -> Result<Self, EnumerationError> {
        if cap == 0 || cap > HARD_CAP {
            return Err(EnumerationError::InvalidCap { cap });
        }
        if workers == 0 {
            return Err(EnumerationError::NoWorkers);
        }
        Ok(EnumerationConfig { cap, workers })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn check(&self, n: usize) -> Result<(), EnumerationError> {
        if n > self.cap {
            Err(EnumerationError::AboveCap { n, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// Commutation graph on the idempotents of `T(n)`, one bit row per vertex.
#[derive(Debug, Clone)]
pub struct CommutingGraph {
    n: usize,
    vertices: Vec<Transformation>,
    rows: Vec<BitSet>,
}

impl CommutingGraph {
    /// Edges are decided by the block-wise commuting test.
    pub fn build(n: usize) -> Result<Self, EnumerationError> {
        let vertices = enumerate_idempotents(n)?;
        let k = vertices.len();
        let blocks: Vec<_> = vertices
            .iter()
            .map(|e| e.decompose().expect("listed maps are idempotent"))
            .collect();
        let mut rows = vec![BitSet::new(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if blocks[i].commutes_with_unchecked(&vertices[j]) {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
            }
        }
        Ok(CommutingGraph { n, vertices, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Transformation] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum::<usize>() / 2
    }

    /// Every maximal clique as a sorted vertex-index list, in lexicographic order.
    ///
    /// Top-level branches are handed to `workers` threads; the result does not
    /// depend on the worker count.
    pub fn maximal_cliques(&self, workers: usize) -> Vec<Vec<usize>> {
        let k = self.len();
        let all = BitSet::full(k);
        let pivot = choose_pivot(&self.rows, &all, &BitSet::new(k));
        let branches: Vec<usize> = match pivot {
            Some(p) => all.difference(&self.rows[p]).iter().collect(),
            None => Vec::new(),
        };

        // branch b: vertex branches[b], with earlier branch vertices moved to the excluded set
        let run_branch = |b: usize, out: &mut Vec<Vec<usize>>| {
            let v = branches[b];
            let mut excluded = BitSet::new(k);
            for &w in &branches[..b] {
                excluded.insert(w);
            }
            let candidates = all.difference(&excluded).intersection(&self.rows[v]);
            let excluded = excluded.intersection(&self.rows[v]);
            let mut clique = vec![v];
            expand(&self.rows, &mut clique, candidates, excluded, out);
        };

        let mut cliques = Vec::new();
        let workers = workers.max(1).min(branches.len().max(1));
        if workers == 1 {
            for b in 0..branches.len() {
                run_branch(b, &mut cliques);
            }
        } else {
            let next = AtomicUsize::new(0);
            let merged = Mutex::new(Vec::new());
            std::thread::scope(|scope| {
                for _ in 0..workers {
                    scope.spawn(|| {
                        let mut local = Vec::new();
                        loop {
                            let b = next.fetch_add(1, Ordering::Relaxed);
                            if b >= branches.len() {
                                break;
                            }
                            run_branch(b, &mut local);
                        }
                        merged.lock().expect("no worker panics").extend(local);
                    });
                }
            });
            cliques = merged.into_inner().expect("no worker panics");
        }
        for clique in &mut cliques {
            clique.sort_unstable();
        }
        cliques.sort_unstable();
        cliques.dedup();
        cliques
    }
}

/// Tomita pivot: the vertex of `P ∪ X` with the most neighbours in `P`.
fn choose_pivot(rows: &[BitSet], candidates: &BitSet, excluded: &BitSet) -> Option<usize> {
    candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| (rows[u].intersection_len(candidates), std::cmp::Reverse(u)))
}

fn expand(
    rows: &[BitSet],
    clique: &mut Vec<usize>,
    mut candidates: BitSet,
    mut excluded: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(pivot) = choose_pivot(rows, &candidates, &excluded) else {
        out.push(clique.clone());
        return;
    };
    let branch: Vec<usize> = candidates.difference(&rows[pivot]).iter().collect();
    for v in branch {
        clique.push(v);
        expand(
            rows,
            clique,
            candidates.intersection(&rows[v]),
            excluded.intersection(&rows[v]),
            out,
        );
        clique.pop();
        candidates.remove(v);
        excluded.insert(v);
    }
}

fn sort_canonical(list: &mut [Semilattice]) {
    list.sort_by(Semilattice::cmp_canonical);
}

/// Every maximal subsemilattice of `T(n)`, size descending then lexicographic.
///
/// Each clique is re-verified against the semilattice axioms and the maximality test.
pub fn enumerate_maximal_semilattices(
    n: usize,
    config: &EnumerationConfig,
) -> Result<Vec<Semilattice>, EnumerationError> {
    config.check(n)?;
    let graph = CommutingGraph::build(n)?;
    maximal_semilattices_of(&graph, config.workers())
}

/// Maximal semilattices from an already-built graph.
pub fn maximal_semilattices_of(
    graph: &CommutingGraph,
    workers: usize,
) -> Result<Vec<Semilattice>, EnumerationError> {
    let mut out = Vec::new();
    for clique in graph.maximal_cliques(workers) {
        let elements: Vec<Transformation> =
            clique.iter().map(|&i| graph.vertices[i].clone()).collect();
        let s = Semilattice::verify(graph.n, elements.clone())
            .map_err(EnumerationError::CliqueNotSemilattice)?;
        if !s.is_maximal(&graph.vertices) {
            return Err(EnumerationError::CliqueNotMaximal(elements));
        }
        out.push(s);
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// The maximal semilattices of largest cardinality.
pub fn max_size_semilattices(
    n: usize,
    config: &EnumerationConfig,
) -> Result<Vec<Semilattice>, EnumerationError> {
    let all = enumerate_maximal_semilattices(n, config)?;
    Ok(largest(all))
}

fn largest(all: Vec<Semilattice>) -> Vec<Semilattice> {
    let max = all.iter().map(Semilattice::len).max().unwrap_or(0);
    all.into_iter().filter(|s| s.len() == max).collect()
}

/// One row of the cardinality histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub count: usize,
    /// The lexicographically first maximal semilattice of this size.
    pub witness: Semilattice,
}

/// Cardinalities of the maximal subsemilattices of `T(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub n: usize,
    pub entries: BTreeMap<usize, SpectrumEntry>,
    pub total_maximal: usize,
    pub max_size: usize,
}

impl SpectrumReport {
    pub fn from_maximal(n: usize, maximal: &[Semilattice]) -> SpectrumReport {
        let mut entries: BTreeMap<usize, SpectrumEntry> = BTreeMap::new();
        for s in maximal {
            entries
                .entry(s.len())
                .and_modify(|e| {
                    e.count += 1;
                    if s.elements() < e.witness.elements() {
                        e.witness = s.clone();
                    }
                })
                .or_insert_with(|| SpectrumEntry {
                    count: 1,
                    witness: s.clone(),
                });
        }
        SpectrumReport {
            n,
            max_size: entries.keys().next_back().copied().unwrap_or(0),
            total_maximal: maximal.len(),
            entries,
        }
    }

    /// `(size, count)` pairs in ascending size.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|(&m, e)| (m, e.count)).collect()
    }
}

pub fn spectrum(n: usize, config: &EnumerationConfig) -> Result<SpectrumReport, EnumerationError> {
    let maximal = enumerate_maximal_semilattices(n, config)?;
    Ok(SpectrumReport::from_maximal(n, &maximal))
}

/// Every subsemilattice of `T(n)` for `n ≤ 3`, by filtering all nonempty sets of
/// idempotents through [`Semilattice::verify`]. Sorted lexicographically.
pub fn brute_force_subsemilattices(n: usize) -> Result<Vec<Semilattice>, EnumerationError> {
    if n > BRUTE_FORCE_CAP {
        return Err(EnumerationError::AboveCap {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let idempotents = enumerate_idempotents(n)?;
    let k = idempotents.len();
    let mut out: Vec<Semilattice> = (1u32..1 << k)
        .filter_map(|mask| {
            let subset = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| idempotents[i].clone());
            Semilattice::verify(n, subset).ok()
        })
        .collect();
    out.sort_by(|a, b| a.elements().cmp(b.elements()));
    Ok(out)
}

/// Elements of `all` not strictly contained in another element of `all`.
pub fn inclusion_maximal(all: &[Semilattice]) -> Vec<Semilattice> {
    let mut out: Vec<Semilattice> = all
        .iter()
        .filter(|s| {
            !all.iter()
                .any(|big| big.len() > s.len() && s.iter().all(|e| big.contains(e)))
        })
        .cloned()
        .collect();
    sort_canonical(&mut out);
    out
}

/// Every subsemilattice of `T(n)` for `n ≤ 4`, as the product-closed subsets of the
/// maximal ones. Sorted lexicographically.
pub fn all_subsemilattices(n: usize) -> Result<Vec<Semilattice>, EnumerationError> {
    if n > ALL_SUBSEMILATTICES_CAP {
        return Err(EnumerationError::AboveCap {
            n,
            cap: ALL_SUBSEMILATTICES_CAP,
        });
    }
    let maximal = enumerate_maximal_semilattices(n, &EnumerationConfig::default())?;
    let mut seen: BTreeSet<Vec<Transformation>> = BTreeSet::new();
    for s in &maximal {
        let elements = s.elements();
        let k = elements.len();
        // products by index, so closure is a mask test
        let product: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| s.index_of(&a.then(b)).expect("closed"))
                    .collect()
            })
            .collect();
        for mask in 1u64..1 << k {
            let closed = (0..k).filter(|i| mask & (1 << i) != 0).all(|i| {
                (0..k)
                    .filter(|j| mask & (1 << j) != 0)
                    .all(|j| mask & (1 << product[i][j]) != 0)
            });
            if closed {
                seen.insert(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| elements[i].clone())
                        .collect(),
                );
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|elements| Semilattice::from_sorted_unchecked(n, elements))
        .collect())
}
