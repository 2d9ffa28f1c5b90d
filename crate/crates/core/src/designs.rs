//! The block design `{αs : α ∈ Ω, s ≠ 0}` of a 4-equivalenced scheme.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::scheme::{Point, Scheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("scheme is not 4-equivalenced")]
    NotFourEquivalenced,
}

/// Blocks are kept as a multiset: equal blocks arising from different
/// `(α, s)` are separate incidences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDesign {
    pub n: usize,
    pub blocks: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignParameters {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    pub lambda: usize,
}

pub fn scheme_to_design(scheme: &Scheme) -> Result<BlockDesign, DesignError> {
    if scheme.is_k_equivalenced() != Some(4) {
        return Err(DesignError::NotFourEquivalenced);
    }
    let blocks = (0..scheme.n())
        .flat_map(|a| (1..scheme.rank()).map(move |s| scheme.row(a, s).to_vec()))
        .collect();
    Ok(BlockDesign { n: scheme.n(), blocks })
}

impl BlockDesign {
    /// Number of blocks containing each `t`-subset that occurs in some block.
    pub fn subset_counts(&self, t: usize) -> HashMap<Vec<Point>, usize> {
        let mut counts = HashMap::new();
        for block in &self.blocks {
            let mut sorted = block.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for_each_subset(&sorted, t, &mut |sub| *counts.entry(sub.to_vec()).or_insert(0) += 1);
        }
        counts
    }

    /// The `λ` shared by all point pairs, if there is one.
    pub fn parameters(&self) -> Option<DesignParameters> {
        let k = self.blocks.first()?.len();
        if self.blocks.iter().any(|b| b.len() != k) {
            return None;
        }
        let counts = self.subset_counts(2);
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        if counts.len() != pairs {
            return None;
        }
        let lambda = *counts.values().next()?;
        counts.values().all(|&c| c == lambda).then_some(DesignParameters {
            n: self.n,
            b: self.blocks.len(),
            k,
            lambda,
        })
    }
}

/// True iff every block has `k` distinct points and every `t`-subset of
/// points lies in exactly `lambda` blocks.
pub fn verify_design(design: &BlockDesign, t: usize, k: usize, lambda: usize) -> bool {
    let well_formed = design.blocks.iter().all(|b| {
        let mut s = b.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == k && s.iter().all(|&p| p < design.n)
    });
    if !well_formed {
        return false;
    }
    let counts = design.subset_counts(t);
    let total = binomial(design.n, t);
    if lambda == 0 {
        return counts.is_empty();
    }
    counts.len() == total && counts.values().all(|&c| c == lambda)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn for_each_subset(points: &[Point], t: usize, f: &mut impl FnMut(&[Point])) {
    fn go(points: &[Point], t: usize, start: usize, cur: &mut Vec<Point>, f: &mut impl FnMut(&[Point])) {
        if cur.len() == t {
            f(cur);
            return;
        }
        for i in start..points.len() {
            cur.push(points[i]);
            go(points, t, i + 1, cur, f);
            cur.pop();
        }
    }
    go(points, t, 0, &mut Vec::with_capacity(t), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::fixtures::{complete, cyclotomic};

    #[test]
    fn five_point_design() {
        let d = scheme_to_design(&complete(5)).unwrap();
        assert_eq!(d.blocks.len(), 5);
        for (a, block) in d.blocks.iter().enumerate() {
            let expected: Vec<Point> = (0..5).filter(|&x| x != a).collect();
            assert_eq!(block, &expected);
        }
        // {0,1} lies in the complements of 2, 3 and 4.
        assert_eq!(d.subset_counts(2)[&vec![0, 1]], 3);
        assert!(verify_design(&d, 2, 4, 3));
    }

    #[test]
    fn z13_design() {
        let d = scheme_to_design(&cyclotomic(13, 5)).unwrap();
        assert_eq!(d.blocks.len(), 39);
        assert!(verify_design(&d, 2, 4, 3));
        assert_eq!(d.parameters(), Some(DesignParameters { n: 13, b: 39, k: 4, lambda: 3 }));
    }

    #[test]
    fn removing_a_block_breaks_it() {
        let mut d = scheme_to_design(&cyclotomic(13, 5)).unwrap();
        d.blocks.pop();
        assert!(!verify_design(&d, 2, 4, 3));
        assert_eq!(d.parameters(), None);
    }

    #[test]
    fn needs_four_equivalenced() {
        assert_eq!(scheme_to_design(&complete(3)), Err(DesignError::NotFourEquivalenced));
    }

    #[test]
    fn one_design_counts_points() {
        let d = scheme_to_design(&cyclotomic(13, 5)).unwrap();
        // each point lies in n·(r−1)·4 / n = 12 blocks
        assert!(verify_design(&d, 1, 4, 12));
    }
}
