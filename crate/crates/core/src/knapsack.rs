//! Which items belong to every, some, or no subset summing exactly to `S`
//! (optionally: every, some, or no minimum-cost such subset).
//!
//! Prefix tables over items `1..=i` and suffix tables over items `i..=n` are
//! combined per item, so the whole classification costs `O(n * S)`. Solution
//! counts saturate at a cap `Q >= 2`; only whether a count is zero matters.

use thiserror::Error;

use crate::sensitivity::Category;

/// Cap on `(n + 2) * (S + 1)` table cells.
pub const MAX_TABLE_CELLS: usize = 100_000_000;
/// Count cap meaning "do not saturate".
pub const UNBOUNDED: u64 = u64::MAX;
const INF: u64 = u64::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnapsackError {
    #[error("expected {expected} costs, found {found}")]
    CostCount { expected: usize, found: usize },
    #[error("count cap must be at least 2, got {0}")]
    CapTooSmall(u64),
    #[error("total cost overflows 64 bits")]
    CostOverflow,
    #[error("tables need {cells} cells, above the limit of {limit}")]
    TableTooLarge { cells: usize, limit: usize },
    #[error("instance has no costs")]
    MissingCosts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    weights: Vec<u64>,
    costs: Option<Vec<u64>>,
    target: usize,
    cap: u64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<u64>, costs: Option<Vec<u64>>, target: usize) -> Result<Self, KnapsackError> {
        Self::with_cap(weights, costs, target, 2)
    }

    pub fn with_cap(
        weights: Vec<u64>,
        costs: Option<Vec<u64>>,
        target: usize,
        cap: u64,
    ) -> Result<Self, KnapsackError> {
        if cap < 2 {
            return Err(KnapsackError::CapTooSmall(cap));
        }
        if let Some(c) = &costs {
            if c.len() != weights.len() {
                return Err(KnapsackError::CostCount {
                    expected: weights.len(),
                    found: c.len(),
                });
            }
            c.iter()
                .try_fold(0u64, |acc, &x| acc.checked_add(x))
                .filter(|&total| total < INF)
                .ok_or(KnapsackError::CostOverflow)?;
        }
        let cells = (weights.len() + 2).saturating_mul(target.saturating_add(1));
        if cells > MAX_TABLE_CELLS {
            return Err(KnapsackError::TableTooLarge {
                cells,
                limit: MAX_TABLE_CELLS,
            });
        }
        Ok(Self {
            weights,
            costs,
            target,
            cap,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn costs(&self) -> Option<&[u64]> {
        self.costs.as_deref()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn weight(&self, i: usize) -> Option<usize> {
        usize::try_from(self.weights[i]).ok().filter(|&w| w <= self.target)
    }

    fn cost(&self, i: usize) -> u64 {
        self.costs.as_ref().map_or(0, |c| c[i])
    }
}

/// Rows `0..=k` over a sequence of items: row `r` describes the first `r`
/// items of the sequence. Columns are sums `0..=S`.
#[derive(Debug, Clone)]
struct PrefixTable {
    width: usize,
    ok: Vec<bool>,
    cnt: Vec<u64>,
    /// Minimum cost per cell and the (capped) number of subsets attaining it.
    cmin: Vec<u64>,
    ccnt: Vec<u64>,
}

impl PrefixTable {
    fn build(inst: &KnapsackInstance, items: impl Iterator<Item = usize>) -> Self {
        let width = inst.target + 1;
        let cap = inst.cap;
        let mut t = Self {
            width,
            ok: vec![false; width],
            cnt: vec![0; width],
            cmin: vec![INF; width],
            ccnt: vec![0; width],
        };
        t.ok[0] = true;
        t.cnt[0] = 1;
        t.cmin[0] = 0;
        t.ccnt[0] = 1;
        for i in items {
            let base = t.ok.len() - width;
            let w = inst.weight(i);
            let cost = inst.cost(i);
            for j in 0..width {
                let skip = base + j;
                let take = w.filter(|&w| j >= w).map(|w| base + j - w);
                let ok = t.ok[skip] || take.is_some_and(|k| t.ok[k]);
                let cnt = t.cnt[skip].saturating_add(take.map_or(0, |k| t.cnt[k])).min(cap);

                let via = take.map_or(INF, |k| add(t.cmin[k], cost));
                let cmin = t.cmin[skip].min(via);
                let mut ccnt = 0u64;
                if cmin != INF {
                    if t.cmin[skip] == cmin {
                        ccnt = t.ccnt[skip];
                    }
                    if let Some(k) = take.filter(|_| via == cmin) {
                        ccnt = ccnt.saturating_add(t.ccnt[k]).min(cap);
                    }
                }
                t.ok.push(ok);
                t.cnt.push(cnt);
                t.cmin.push(cmin);
                t.ccnt.push(ccnt);
            }
        }
        t
    }

    fn at(&self, row: usize, j: usize) -> usize {
        row * self.width + j
    }

    fn rows(&self) -> usize {
        self.ok.len() / self.width
    }
}

fn add(a: u64, b: u64) -> u64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

fn mul(a: u64, b: u64, cap: u64) -> u64 {
    a.saturating_mul(b).min(cap)
}

/// Forward and backward tables. Items are numbered `1..=n`; forward row `i`
/// covers items `1..=i` and backward row `i` covers items `i..=n`, with row
/// `n + 1` empty.
#[derive(Debug, Clone)]
pub struct DpTables {
    n: usize,
    forward: PrefixTable,
    backward: PrefixTable,
}

impl DpTables {
    pub fn build(inst: &KnapsackInstance) -> Self {
        let n = inst.len();
        Self {
            n,
            forward: PrefixTable::build(inst, 0..n),
            backward: PrefixTable::build(inst, (0..n).rev()),
        }
    }

    fn fwd(&self, i: usize, j: usize) -> usize {
        self.forward.at(i, j)
    }

    fn bwd(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.n + 1).contains(&i));
        self.backward.at(self.n + 1 - i, j)
    }

    pub fn ok1(&self, i: usize, j: usize) -> bool {
        self.forward.ok[self.fwd(i, j)]
    }

    pub fn cnt1(&self, i: usize, j: usize) -> u64 {
        self.forward.cnt[self.fwd(i, j)]
    }

    pub fn ok2(&self, i: usize, j: usize) -> bool {
        self.backward.ok[self.bwd(i, j)]
    }

    pub fn cnt2(&self, i: usize, j: usize) -> u64 {
        self.backward.cnt[self.bwd(i, j)]
    }

    /// `None` stands for `+inf`.
    pub fn cmin1(&self, i: usize, j: usize) -> Option<u64> {
        Some(self.forward.cmin[self.fwd(i, j)]).filter(|&c| c != INF)
    }

    pub fn cmin2(&self, i: usize, j: usize) -> Option<u64> {
        Some(self.backward.cmin[self.bwd(i, j)]).filter(|&c| c != INF)
    }
}

/// Categories relative to all subsets whose weights sum exactly to `S`.
pub fn classify_feasibility(inst: &KnapsackInstance) -> Vec<Category> {
    let t = DpTables::build(inst);
    let s = inst.target;
    (1..=inst.len())
        .map(|i| {
            let with = inst
                .weight(i - 1)
                .is_some_and(|w| (0..=s - w).any(|j| t.ok1(i - 1, j) && t.ok2(i + 1, s - j - w)));
            if !with {
                return Category::None;
            }
            let without = (0..=s).fold(0u64, |acc, j| {
                acc.saturating_add(mul(t.cnt1(i - 1, j), t.cnt2(i + 1, s - j), inst.cap))
                    .min(inst.cap)
            });
            if without > 0 {
                Category::Some
            } else {
                Category::Every
            }
        })
        .collect()
}

/// Categories relative to the minimum-cost subsets summing exactly to `S`.
pub fn classify_mincost(inst: &KnapsackInstance) -> Result<Vec<Category>, KnapsackError> {
    if inst.costs.is_none() {
        return Err(KnapsackError::MissingCosts);
    }
    let t = DpTables::build(inst);
    let (n, s) = (inst.len(), inst.target);
    let opt = t.forward.cmin[t.fwd(n, s)];
    if opt == INF {
        return Ok(vec![Category::None; n]);
    }
    let fc = |i: usize, j: usize| t.forward.cmin[t.fwd(i, j)];
    let bc = |i: usize, j: usize| t.backward.cmin[t.bwd(i, j)];
    Ok((1..=n)
        .map(|i| {
            let best_with = inst.weight(i - 1).map_or(INF, |w| {
                (0..=s - w)
                    .map(|j| add(add(fc(i - 1, j), inst.cost(i - 1)), bc(i + 1, s - j - w)))
                    .min()
                    .unwrap_or(INF)
            });
            if best_with > opt {
                return Category::None;
            }
            let without = (0..=s)
                .filter(|&j| add(fc(i - 1, j), bc(i + 1, s - j)) == opt)
                .fold(0u64, |acc, j| {
                    let a = t.forward.ccnt[t.fwd(i - 1, j)];
                    let b = t.backward.ccnt[t.bwd(i + 1, s - j)];
                    acc.saturating_add(mul(a, b, inst.cap)).min(inst.cap)
                });
            if without > 0 {
                Category::Some
            } else {
                Category::Every
            }
        })
        .collect())
}

/// Reference classification in `O(n^2 * S)`: rebuild the table without each
/// item in turn. Uses the cost criterion when the instance has costs.
pub fn classify_by_removal(inst: &KnapsackInstance) -> Vec<Category> {
    let (n, s) = (inst.len(), inst.target);
    let full = PrefixTable::build(inst, 0..n);
    let opt = full.cmin[full.at(n, s)];
    (0..n)
        .map(|i| {
            let rest = PrefixTable::build(inst, (0..n).filter(|&k| k != i));
            let last = rest.rows() - 1;
            let w = inst.weight(i);
            if inst.costs.is_some() {
                if opt == INF {
                    return Category::None;
                }
                let with = w.map_or(INF, |w| add(rest.cmin[rest.at(last, s - w)], inst.cost(i)));
                let without = rest.cmin[rest.at(last, s)];
                match (with > opt, without == opt) {
                    (true, _) => Category::None,
                    (false, true) => Category::Some,
                    (false, false) => Category::Every,
                }
            } else {
                let with = w.is_some_and(|w| rest.ok[rest.at(last, s - w)]);
                let without = rest.ok[rest.at(last, s)];
                match (with, without) {
                    (false, _) => Category::None,
                    (true, true) => Category::Some,
                    (true, false) => Category::Every,
                }
            }
        })
        .collect()
}

/// Classifies with the cost criterion when costs are present, else by
/// feasibility alone.
pub fn classify(inst: &KnapsackInstance) -> Vec<Category> {
    match inst.costs {
        Some(_) => classify_mincost(inst).expect("costs are present"),
        None => classify_feasibility(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Category::{Every as C1, None as C3, Some as C2};

    fn plain(w: &[u64], s: usize) -> KnapsackInstance {
        KnapsackInstance::new(w.to_vec(), None, s).unwrap()
    }

    fn costed(w: &[u64], c: &[u64], s: usize) -> KnapsackInstance {
        KnapsackInstance::new(w.to_vec(), Some(c.to_vec()), s).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        for (s, expected) in [(5, vec![C2, C2, C1]), (7, vec![C1; 3]), (4, vec![C1, C1, C3])] {
            let inst = plain(&[2, 2, 3], s);
            assert_eq!(classify_feasibility(&inst), expected, "S={s}");
            assert_eq!(classify_by_removal(&inst), expected, "S={s}");
        }
    }

    #[test]
    fn zero_target_and_zero_weight() {
        let inst = plain(&[3, 0], 0);
        assert_eq!(classify_feasibility(&inst), vec![C3, C2]);
        assert_eq!(classify_by_removal(&inst), vec![C3, C2]);
    }

    #[test]
    fn overweight_item() {
        let inst = plain(&[9, 1], 1);
        assert_eq!(classify_feasibility(&inst), vec![C3, C1]);
    }

    #[test]
    fn no_items() {
        assert!(classify_feasibility(&plain(&[], 3)).is_empty());
    }

    #[test]
    fn mincost_examples() {
        let inst = costed(&[2, 2, 3], &[1, 5, 1], 5);
        assert_eq!(classify_mincost(&inst).unwrap(), vec![C1, C3, C1]);
        assert_eq!(classify_by_removal(&inst), vec![C1, C3, C1]);

        let inst = costed(&[1, 1], &[4, 4], 1);
        assert_eq!(classify_mincost(&inst).unwrap(), vec![C2, C2]);
        assert_eq!(classify_by_removal(&inst), vec![C2, C2]);

        let inst = costed(&[2], &[1], 1);
        assert_eq!(classify_mincost(&inst).unwrap(), vec![C3]);
        assert_eq!(classify_by_removal(&inst), vec![C3]);
    }

    #[test]
    fn mincost_requires_costs() {
        assert_eq!(classify_mincost(&plain(&[1], 1)), Err(KnapsackError::MissingCosts));
    }

    #[test]
    fn tables_base_cases() {
        let inst = costed(&[2, 3], &[1, 1], 5);
        let t = DpTables::build(&inst);
        assert!(t.ok1(0, 0) && !t.ok1(0, 1));
        assert_eq!(t.cnt1(0, 0), 1);
        assert!(t.ok2(3, 0) && !t.ok2(3, 2));
        assert_eq!(t.cmin1(0, 0), Some(0));
        assert_eq!(t.cmin1(0, 2), None);
        assert_eq!(t.cmin1(2, 5), Some(2));
        assert_eq!(t.cmin2(1, 5), Some(2));
        assert!(t.ok2(2, 3) && !t.ok2(2, 2));
    }

    #[test]
    fn counts_saturate() {
        let inst = KnapsackInstance::with_cap(vec![0; 10], None, 0, 3).unwrap();
        let t = DpTables::build(&inst);
        assert_eq!(t.cnt1(10, 0), 3);
        let inst = KnapsackInstance::with_cap(vec![0; 10], None, 0, UNBOUNDED).unwrap();
        assert_eq!(DpTables::build(&inst).cnt1(10, 0), 1024);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            KnapsackInstance::with_cap(vec![1], None, 1, 1),
            Err(KnapsackError::CapTooSmall(1))
        );
        assert_eq!(
            KnapsackInstance::new(vec![1, 2], Some(vec![1]), 1),
            Err(KnapsackError::CostCount { expected: 2, found: 1 })
        );
        assert_eq!(
            KnapsackInstance::new(vec![1, 2], Some(vec![u64::MAX, 1]), 1),
            Err(KnapsackError::CostOverflow)
        );
        assert!(matches!(
            KnapsackInstance::new(vec![1], None, usize::MAX),
            Err(KnapsackError::TableTooLarge { .. })
        ));
    }
}
