//! Dense color matrices over Ω×Ω and the intersection-constancy validator
//! shared by schemes and their fissions.

use rayon::prelude::*;
use serde::Serialize;

/// Row-major `n × n` matrix of relation colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ColorMatrix {
    n: usize,
    cells: Vec<u32>,
}

/// A pair `(x, y)` whose intersection counts differ from those of the first
/// pair of the same color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstancyViolation {
    pub s: usize,
    pub t: usize,
    pub u: usize,
    pub pair: (usize, usize),
    pub expected: usize,
    pub found: usize,
}

impl ColorMatrix {
    /// Panics if `cells.len() != n * n`.
    pub fn new(n: usize, cells: Vec<u32>) -> Self {
        assert_eq!(cells.len(), n * n, "color matrix must be n*n");
        Self { n, cells }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(f(x, y));
            }
        }
        Self { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[u32] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    /// One more than the largest color present (0 for the empty matrix).
    pub fn num_colors(&self) -> usize {
        self.cells.iter().max().map_or(0, |&c| c as usize + 1)
    }

    pub fn transpose(&self) -> ColorMatrix {
        ColorMatrix::from_fn(self.n, |x, y| self.cells[y * self.n + x])
    }

    /// Renumbers colors by first occurrence in row-major order.
    pub fn canonical(&self) -> ColorMatrix {
        let mut map = vec![u32::MAX; self.num_colors()];
        let mut next = 0u32;
        let cells = self
            .cells
            .iter()
            .map(|&c| {
                let slot = &mut map[c as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect();
        ColorMatrix { n: self.n, cells }
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0u32;
        for &c in &self.cells {
            if c == next {
                next += 1;
            } else if c > next {
                return false;
            }
        }
        true
    }

    /// Number of distinct colors, counting only colors that actually occur.
    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.num_colors()];
        self.cells.iter().for_each(|&c| seen[c as usize] = true);
        seen.into_iter().filter(|&b| b).count()
    }

    /// True when `self` refines `coarser`: every color class of `self` lies
    /// inside one color class of `coarser`.
    pub fn refines(&self, coarser: &ColorMatrix) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let mut parent = vec![u32::MAX; self.num_colors()];
        self.cells.iter().zip(&coarser.cells).all(|(&fine, &coarse)| {
            let p = &mut parent[fine as usize];
            if *p == u32::MAX {
                *p = coarse;
            }
            *p == coarse
        })
    }
}

#[inline]
pub(crate) fn pack(a: u32, b: u32) -> u64 {
    ((a as u64) << 32) | b as u64
}

#[inline]
pub(crate) fn unpack(v: u64) -> (usize, usize) {
    ((v >> 32) as usize, (v & 0xffff_ffff) as usize)
}

/// Sorted multiset `{(color(x,z), color(z,y)) : z ∈ Ω}` packed into `u64`s.
pub(crate) fn pair_signature(
    m: &ColorMatrix,
    transposed: &ColorMatrix,
    x: usize,
    y: usize,
    buf: &mut Vec<u64>,
) {
    buf.clear();
    buf.extend(
        m.row(x)
            .iter()
            .zip(transposed.row(y))
            .map(|(&a, &b)| pack(a, b)),
    );
    buf.sort_unstable();
}

/// Verifies that for every color `u` the count
/// `|{z : color(x,z)=s, color(z,y)=t}|` does not depend on the choice of
/// `(x,y)` in `u`. On success returns, for each color, the sorted signature
/// of its first (row-major) pair, from which the intersection numbers can be
/// read off.
pub fn check_constancy(m: &ColorMatrix) -> Result<Vec<Vec<u64>>, ConstancyViolation> {
    let n = m.n();
    let r = m.num_colors();
    let tr = m.transpose();

    let mut witness: Vec<Option<Vec<u64>>> = vec![None; r];
    let mut buf = Vec::with_capacity(n);
    for x in 0..n {
        for y in 0..n {
            let u = m.get(x, y);
            if witness[u].is_none() {
                pair_signature(m, &tr, x, y, &mut buf);
                witness[u] = Some(buf.clone());
            }
        }
    }

    let first_bad = (0..n).into_par_iter().find_map_first(|x| {
        let mut buf = Vec::with_capacity(n);
        for y in 0..n {
            let u = m.get(x, y);
            pair_signature(m, &tr, x, y, &mut buf);
            let expected = witness[u].as_ref().expect("witness for every color");
            if *expected != buf {
                return Some(describe_mismatch(expected, &buf, u, (x, y)));
            }
        }
        None
    });
    if let Some(v) = first_bad {
        return Err(v);
    }
    // Colors that never occur get an empty signature.
    Ok(witness.into_iter().map(Option::unwrap_or_default).collect())
}

fn describe_mismatch(
    expected: &[u64],
    found: &[u64],
    u: usize,
    pair: (usize, usize),
) -> ConstancyViolation {
    let count = |sig: &[u64], key: u64| sig.iter().filter(|&&k| k == key).count();
    let mut keys: Vec<u64> = expected.iter().chain(found).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let key = keys
        .into_iter()
        .find(|&k| count(expected, k) != count(found, k))
        .expect("signatures differ in some key");
    let (s, t) = unpack(key);
    ConstancyViolation {
        s,
        t,
        u,
        pair,
        expected: count(expected, key),
        found: count(found, key),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_renumbers_by_first_occurrence() {
        let m = ColorMatrix::new(2, vec![3, 7, 7, 3]);
        assert_eq!(m.canonical().cells(), &[0, 1, 1, 0]);
        assert!(!m.is_canonical());
        assert!(m.canonical().is_canonical());
    }

    #[test]
    fn refinement_relation() {
        let coarse = ColorMatrix::new(2, vec![0, 1, 1, 0]);
        let fine = ColorMatrix::new(2, vec![0, 1, 2, 3]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
    }

    #[test]
    fn path_on_three_points_is_not_coherent() {
        // 0 - 1 - 2 with edge color 1, non-edge color 2.
        let m = ColorMatrix::new(3, vec![0, 1, 2, 1, 0, 1, 2, 1, 0]);
        let v = check_constancy(&m).unwrap_err();
        // Row 0 supplies the witnesses; (1,0) is the first pair whose
        // signature differs from that of (0,1).
        assert_eq!(v.u, 1);
        assert_eq!(v.pair, (1, 0));
    }

    #[test]
    fn triangle_is_coherent() {
        let m = ColorMatrix::new(3, vec![0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let sigs = check_constancy(&m).unwrap();
        assert_eq!(sigs.len(), 2);
        // (0,1): z=0 -> (0,1), z=1 -> (1,0), z=2 -> (1,1)
        assert_eq!(sigs[1], vec![pack(0, 1), pack(1, 0), pack(1, 1)]);
    }
}
