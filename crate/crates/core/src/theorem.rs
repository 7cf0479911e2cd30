//! Executable check of the maximum-cardinality results for one `n`.

use serde::Serialize;

use crate::enumeration::{enumerate_maximal_semilattices, EnumerationConfig, EnumerationError};
use crate::reduction::{find_anchor, reduce};
use crate::semilattice::{make_et, Semilattice};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl ClauseResult {
    fn new(clause: &'static str, passed: bool, detail: String) -> Self {
        ClauseResult {
            clause,
            passed,
            detail,
        }
    }
}

/// Enumerates the maximal semilattices of `T(n)` and checks, clause by clause:
/// the maximum size is `2^(n−1)`; exactly `n` reach it; they are the `E_t`; each is
/// Boolean with `n − 1` atoms; every anchor and reduction behaves as expected.
pub fn verify_theorem(
    n: usize,
    config: &EnumerationConfig,
) -> Result<Vec<ClauseResult>, EnumerationError> {
    let maximal = enumerate_maximal_semilattices(n, config)?;
    let bound = 1usize << (n - 1);
    let max = maximal.iter().map(Semilattice::len).max().unwrap_or(0);
    let top: Vec<&Semilattice> = maximal.iter().filter(|s| s.len() == max).collect();
    let mut ets: Vec<Semilattice> = (0..n).map(|t| make_et(n, t).expect("t < n")).collect();
    ets.sort_by(Semilattice::cmp_canonical);

    let mut out = vec![
        ClauseResult::new(
            "max-size",
            max == bound,
            format!("max size {max} = 2^{}", n - 1),
        ),
        ClauseResult::new("count", top.len() == n, format!("count {} = n", top.len())),
    ];

    let same_as_ets = top.len() == ets.len() && top.iter().zip(&ets).all(|(a, b)| *a == b);
    out.push(ClauseResult::new(
        "extremal",
        same_as_ets,
        format!("maximum-size semilattices equal E_0..E_{}", n - 1),
    ));

    let boolean_ok = top.iter().all(|s| {
        s.boolean_structure()
            .is_some_and(|w| w.atoms.len() == n - 1)
    });
    out.push(ClauseResult::new(
        "boolean",
        boolean_ok,
        format!("each is a Boolean lattice with {} atoms", n - 1),
    ));

    let others_small = maximal
        .iter()
        .filter(|s| !ets.contains(s))
        .all(|s| s.len() < bound);
    out.push(ClauseResult::new(
        "strict-bound",
        others_small,
        format!("every other maximal semilattice has fewer than {bound} elements"),
    ));

    if n >= 2 {
        let anchors_ok = maximal.iter().all(|s| find_anchor(s).is_ok());
        out.push(ClauseResult::new(
            "anchor",
            anchors_ok,
            format!(
                "anchor found for all {} maximal semilattices",
                maximal.len()
            ),
        ));
        let chain_ok = maximal
            .iter()
            .all(|s| reduce(s).is_ok_and(|r| r.counting_chain_holds()));
        out.push(ClauseResult::new(
            "reduction",
            chain_ok,
            "|S| <= 2|S*| = 2|S*_u| for every maximal semilattice".to_string(),
        ));
    }
    Ok(out)
}
