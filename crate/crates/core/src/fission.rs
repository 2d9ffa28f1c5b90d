//! Point individualization followed by two-dimensional Weisfeiler–Leman
//! stabilization, and the structural checks on the resulting coherent
//! configurations.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coherence::{check_constancy, pair_signature, ColorMatrix, ConstancyViolation};
use crate::products::phi_psi;
use crate::scheme::{Color, Point, Scheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FissionError {
    #[error("{{{0}}} is not a fiber of the configuration")]
    NotAFiber(Point),
    #[error("no base of size at most {0}")]
    CutoffExceeded(usize),
    #[error("point {0} is outside 0..{1}")]
    PointOutOfRange(Point, usize),
    #[error("the set of individualized points is empty")]
    EmptyPointSet,
}

/// A (possibly non-homogeneous) coherent configuration with its fibers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoherentConfiguration {
    colors: ColorMatrix,
    num_colors: usize,
    /// Fibers ordered by their least point; points ascending.
    fibers: Vec<Vec<Point>>,
    #[serde(skip)]
    fiber_of: Vec<usize>,
}

impl CoherentConfiguration {
    fn from_stable(colors: ColorMatrix) -> Self {
        let n = colors.n();
        let num_colors = colors.num_colors();
        let mut by_diag: HashMap<usize, usize> = HashMap::new();
        let mut fibers: Vec<Vec<Point>> = Vec::new();
        let mut fiber_of = vec![0; n];
        for x in 0..n {
            let d = colors.get(x, x);
            let idx = *by_diag.entry(d).or_insert_with(|| {
                fibers.push(Vec::new());
                fibers.len() - 1
            });
            fibers[idx].push(x);
            fiber_of[x] = idx;
        }
        Self {
            colors,
            num_colors,
            fibers,
            fiber_of,
        }
    }

    pub fn n(&self) -> usize {
        self.colors.n()
    }

    pub fn colors(&self) -> &ColorMatrix {
        &self.colors
    }

    pub fn color(&self, x: Point, y: Point) -> Color {
        self.colors.get(x, y)
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn fibers(&self) -> &[Vec<Point>] {
        &self.fibers
    }

    pub fn fiber_of(&self, x: Point) -> usize {
        self.fiber_of[x]
    }

    pub fn is_singleton_fiber(&self, x: Point) -> bool {
        self.fibers[self.fiber_of[x]].len() == 1
    }

    /// Every ordered pair carries its own color.
    pub fn is_complete(&self) -> bool {
        self.num_colors == self.n() * self.n()
    }

    /// For each color: the fibers `(Δ, Γ)` with the color inside `Δ × Γ`,
    /// and the number of `c`-neighbors of any point of `Δ`.
    pub fn color_blocks(&self) -> Vec<ColorBlock> {
        let n = self.n();
        let mut blocks: Vec<Option<ColorBlock>> = vec![None; self.num_colors];
        for x in 0..n {
            for y in 0..n {
                let c = self.color(x, y);
                if blocks[c].is_none() {
                    let out_degree = (0..n).filter(|&z| self.color(x, z) == c).count();
                    blocks[c] = Some(ColorBlock {
                        row_fiber: self.fiber_of[x],
                        col_fiber: self.fiber_of[y],
                        out_degree,
                    });
                }
            }
        }
        blocks.into_iter().map(Option::unwrap).collect()
    }

    /// Checks the coherent configuration axioms: intersection constancy,
    /// transpose closure, and that each color lies inside one fiber block.
    pub fn validate(&self) -> Result<(), String> {
        check_constancy(&self.colors).map_err(|v: ConstancyViolation| {
            format!("c({},{},{}) not constant at {:?}", v.s, v.t, v.u, v.pair)
        })?;
        let n = self.n();
        let mut transpose_of: Vec<Option<usize>> = vec![None; self.num_colors];
        let mut block: Vec<Option<(usize, usize)>> = vec![None; self.num_colors];
        for x in 0..n {
            for y in 0..n {
                let c = self.color(x, y);
                let tc = self.color(y, x);
                match transpose_of[c] {
                    None => transpose_of[c] = Some(tc),
                    Some(t) if t != tc => return Err(format!("transpose of color {c} is not a color")),
                    _ => {}
                }
                let fb = (self.fiber_of[x], self.fiber_of[y]);
                match block[c] {
                    None => block[c] = Some(fb),
                    Some(b) if b != fb => return Err(format!("color {c} meets two fiber blocks")),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColorBlock {
    pub row_fiber: usize,
    pub col_fiber: usize,
    pub out_degree: usize,
}

/// Summary of one fission, as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FissionReport {
    pub distinguished: Vec<Point>,
    pub num_colors: usize,
    pub num_fibers: usize,
    pub fibers: Vec<Vec<Point>>,
    /// Set when `distinguished` is a single point `α`: whether the fission is
    /// semiregular off `α`.
    pub semiregular_off: Option<bool>,
    pub complete: bool,
}

impl FissionReport {
    pub fn new(distinguished: &[Point], cc: &CoherentConfiguration) -> Self {
        let semiregular_off = match distinguished {
            [alpha] => is_semiregular_off(cc, *alpha).ok(),
            _ => None,
        };
        Self {
            distinguished: distinguished.to_vec(),
            num_colors: cc.num_colors(),
            num_fibers: cc.fibers().len(),
            fibers: cc.fibers().to_vec(),
            semiregular_off,
            complete: cc.is_complete(),
        }
    }
}

/// Refines `matrix` to the coarsest coloring stable under the 2-dim WL step,
/// numbering colors by first occurrence in row-major order.
pub fn wl_stabilize(matrix: &ColorMatrix) -> CoherentConfiguration {
    let n = matrix.n();
    // Separate the diagonal from the start so fibers are well defined.
    let seeded = ColorMatrix::from_fn(n, |x, y| (matrix.get(x, y) * 2 + (x == y) as usize) as u32);
    let mut current = seeded.canonical();
    let mut count = current.distinct_colors();
    loop {
        let next = refine_once(&current);
        let next_count = next.distinct_colors();
        if next_count == count {
            return CoherentConfiguration::from_stable(current);
        }
        current = next;
        count = next_count;
    }
}

fn refine_once(m: &ColorMatrix) -> ColorMatrix {
    let n = m.n();
    let tr = m.transpose();
    let signatures: Vec<Vec<Vec<u64>>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut buf = Vec::with_capacity(n + 1);
            (0..n)
                .map(|y| {
                    pair_signature(m, &tr, x, y, &mut buf);
                    let mut sig = Vec::with_capacity(n + 1);
                    sig.push(m.get(x, y) as u64);
                    sig.extend_from_slice(&buf);
                    sig
                })
                .collect()
        })
        .collect();

    let mut ids: HashMap<&[u64], u32> = HashMap::new();
    let mut cells = Vec::with_capacity(n * n);
    for row in &signatures {
        for sig in row {
            let next = ids.len() as u32;
            cells.push(*ids.entry(sig.as_slice()).or_insert(next));
        }
    }
    ColorMatrix::new(n, cells)
}

/// The smallest fission of `scheme` in which every point of `points` is a
/// singleton fiber.
pub fn point_fission(scheme: &Scheme, points: &[Point]) -> Result<CoherentConfiguration, FissionError> {
    let n = scheme.n();
    if points.is_empty() {
        return Err(FissionError::EmptyPointSet);
    }
    if let Some(&p) = points.iter().find(|&&p| p >= n) {
        return Err(FissionError::PointOutOfRange(p, n));
    }
    let mut tag = vec![0usize; n];
    for (i, &p) in points.iter().enumerate() {
        if tag[p] == 0 {
            tag[p] = i + 1;
        }
    }
    let k = points.len() + 1;
    let seed = ColorMatrix::from_fn(n, |x, y| ((scheme.color(x, y) * k + tag[x]) * k + tag[y]) as u32);
    Ok(wl_stabilize(&seed.canonical()))
}

/// Whether every color between fibers avoiding `α` has out-degree at most 1.
pub fn is_semiregular_off(cc: &CoherentConfiguration, alpha: Point) -> Result<bool, FissionError> {
    if alpha >= cc.n() || !cc.is_singleton_fiber(alpha) {
        return Err(FissionError::NotAFiber(alpha));
    }
    let home = cc.fiber_of(alpha);
    Ok(cc
        .color_blocks()
        .iter()
        .filter(|b| b.row_fiber != home && b.col_fiber != home)
        .all(|b| b.out_degree <= 1))
}

/// Whether every fiber of `cc` lies inside one row section `αu` of `scheme`.
pub fn fibers_within_rows(scheme: &Scheme, cc: &CoherentConfiguration, alpha: Point) -> bool {
    cc.fibers().iter().all(|fiber| {
        let u = scheme.color(alpha, fiber[0]);
        fiber.iter().all(|&x| scheme.color(alpha, x) == u)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Base {
    pub size: usize,
    pub witness: Vec<Point>,
}

/// Smallest `Δ` with `|Δ| ≤ cutoff` whose fission is complete. Sets are tried
/// by size, lexicographically; among pairs, one joined by an S₂ relation is
/// tried first when the scheme is 4-equivalenced.
pub fn base_number(scheme: &Scheme, cutoff: usize) -> Result<Base, FissionError> {
    let n = scheme.n();
    if n <= 1 {
        return Ok(Base {
            size: 0,
            witness: Vec::new(),
        });
    }
    let complete = |set: &[Point]| {
        point_fission(scheme, set)
            .map(|cc| cc.is_complete())
            .unwrap_or(false)
    };
    for size in 1..=cutoff.min(n) {
        if size == 2 {
            if let Some(pair) = s2_pair(scheme) {
                if complete(&pair) {
                    return Ok(Base {
                        size: 2,
                        witness: pair.to_vec(),
                    });
                }
            }
        }
        let mut comb: Vec<Point> = (0..size).collect();
        loop {
            if complete(&comb) {
                return Ok(Base { size, witness: comb });
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Err(FissionError::CutoffExceeded(cutoff))
}

/// `(0, β)` with `color(0, β) ∈ S₂`, β least.
pub fn s2_pair(scheme: &Scheme) -> Option<[Point; 2]> {
    let pp = phi_psi(scheme.tensor()).ok()?;
    (1..scheme.n())
        .find(|&b| pp.in_s2(scheme.color(0, b)))
        .map(|b| [0, b])
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::fixtures::{complete, cyclotomic};

    #[test]
    fn scheme_matrix_is_already_stable() {
        let s = cyclotomic(13, 5);
        let cc = wl_stabilize(s.colors());
        assert_eq!(cc.colors(), s.colors());
        assert_eq!(cc.fibers().len(), 1);
    }

    #[test]
    fn discrete_matrix_is_unchanged() {
        let m = ColorMatrix::from_fn(4, |x, y| (x * 4 + y) as u32);
        let cc = wl_stabilize(&m);
        assert_eq!(cc.colors(), &m);
        assert!(cc.is_complete());
    }

    #[test]
    fn z13_alpha_fission_fibers_are_rows() {
        let s = cyclotomic(13, 5);
        let cc = point_fission(&s, &[0]).unwrap();
        let mut fibers = cc.fibers().to_vec();
        fibers.sort();
        let mut expected = vec![vec![0]];
        for c in 1..4 {
            expected.push(s.row(0, c).to_vec());
        }
        expected.sort();
        assert_eq!(fibers, expected);
        assert!(cc.validate().is_ok());
        assert!(is_semiregular_off(&cc, 0).unwrap());
        assert!(fibers_within_rows(&s, &cc, 0));
        assert!(!cc.is_complete());
    }

    #[test]
    fn individualizing_everything_is_complete() {
        let s = cyclotomic(13, 5);
        let all: Vec<Point> = (0..13).collect();
        assert!(point_fission(&s, &all).unwrap().is_complete());
    }

    #[test]
    fn five_point_control() {
        let s = complete(5);
        let cc = point_fission(&s, &[2]).unwrap();
        // The other four points stay one fiber with a valency-3 relation.
        assert_eq!(cc.fibers().len(), 2);
        assert!(!is_semiregular_off(&cc, 2).unwrap());
        assert_eq!(is_semiregular_off(&cc, 0), Err(FissionError::NotAFiber(0)));
        assert_eq!(base_number(&s, 3), Err(FissionError::CutoffExceeded(3)));
        assert_eq!(base_number(&s, 4).unwrap().size, 4);
    }

    #[test]
    fn one_point_scheme_has_base_zero() {
        let s = complete(1);
        assert_eq!(base_number(&s, 3).unwrap().size, 0);
    }

    #[test]
    fn fission_refines_and_is_idempotent() {
        let s = cyclotomic(17, 4);
        let one = point_fission(&s, &[3]).unwrap();
        let two = point_fission(&s, &[3, 5]).unwrap();
        assert!(one.colors().refines(s.colors()));
        assert!(two.colors().refines(one.colors()));
        let again = wl_stabilize(one.colors());
        assert_eq!(again.colors(), one.colors());
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }
}
