//! Association schemes: validation, intersection numbers, valencies and the
//! global properties built from them.
//!
//! Points are `0..n` and relation colors `0..r`, with color 0 pinned to the
//! diagonal. A [`Scheme`] can only be obtained through validation, which
//! checks the three scheme axioms exhaustively and caches the intersection
//! tensor `c(s,t,u)`.

use thiserror::Error;

use crate::coherence::{check_constancy, unpack, ColorMatrix};

pub type Point = usize;
pub type Color = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("expected {expected} matrix entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("entry ({x},{y}) has color {color}, outside 0..{rank}")]
    ColorOutOfRange {
        x: Point,
        y: Point,
        color: usize,
        rank: usize,
    },
    #[error("dual map has length {found}, expected {expected} or maps outside the color range")]
    MalformedDual { expected: usize, found: usize },
    #[error("diagonal axiom fails at ({x},{y}) with color {color}")]
    DiagonalViolation { x: Point, y: Point, color: Color },
    #[error("transpose axiom fails at ({x},{y}): color {color}, transposed color {transposed}, dual says {expected}")]
    DualViolation {
        x: Point,
        y: Point,
        color: Color,
        transposed: Color,
        expected: Color,
    },
    #[error("color {0} does not occur in the matrix")]
    UnusedColor(Color),
    #[error(
        "intersection number c({s},{t},{u}) is not constant: {expected} at the first pair, {found} at {pair:?}"
    )]
    NonConstantIntersection {
        s: Color,
        t: Color,
        u: Color,
        pair: (Point, Point),
        expected: usize,
        found: usize,
    },
    #[error("color 0 is the diagonal relation")]
    DiagonalColor,
}

/// The intersection numbers `c(s,t,u)` of a scheme, stored densely.
///
/// All complex-product computations only need this tensor, so it carries
/// enough to recover duals and valencies on its own. `set` exists so that
/// tests can inject faults into an otherwise valid tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    rank: usize,
    data: Vec<u32>,
}

impl IntersectionTensor {
    pub fn zeros(rank: usize) -> Self {
        Self {
            rank,
            data: vec![0; rank * rank * rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    fn idx(&self, s: Color, t: Color, u: Color) -> usize {
        (s * self.rank + t) * self.rank + u
    }

    #[inline]
    pub fn get(&self, s: Color, t: Color, u: Color) -> usize {
        self.data[self.idx(s, t, u)] as usize
    }

    pub fn set(&mut self, s: Color, t: Color, u: Color, value: usize) {
        let i = self.idx(s, t, u);
        self.data[i] = value as u32;
    }

    /// The color `t` with `c(s,t,0) ≠ 0`.
    pub fn dual(&self, s: Color) -> Color {
        (0..self.rank).find(|&t| self.get(s, t, 0) != 0).unwrap_or(s)
    }

    /// `n_s = c(s,s*,0)`.
    pub fn valency(&self, s: Color) -> usize {
        self.get(s, self.dual(s), 0)
    }

    pub fn valencies(&self) -> Vec<usize> {
        (0..self.rank).map(|s| self.valency(s)).collect()
    }

    /// Nonzero terms `(w, c(s,t,w))` of the adjacency product `A_s A_t`.
    pub fn product(&self, s: Color, t: Color) -> Vec<(Color, usize)> {
        (0..self.rank)
            .filter_map(|w| {
                let c = self.get(s, t, w);
                (c != 0).then_some((w, c))
            })
            .collect()
    }

    /// The support `st` of the product.
    pub fn support(&self, s: Color, t: Color) -> Vec<Color> {
        self.product(s, t).into_iter().map(|(w, _)| w).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.rank).all(|s| self.dual(s) == s)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|s| {
            (s + 1..self.rank)
                .all(|t| (0..self.rank).all(|u| self.get(s, t, u) == self.get(t, s, u)))
        })
    }

    /// `Some(k)` when every non-diagonal valency equals `k`.
    pub fn k_equivalenced(&self) -> Option<usize> {
        let mut vals = (1..self.rank).map(|s| self.valency(s));
        let k = vals.next()?;
        vals.all(|v| v == k).then_some(k)
    }

    /// `c(s) = Σ_{u ≠ 0} c(u, u*, s)`.
    pub fn indistinguishing(&self, s: Color) -> usize {
        (1..self.rank).map(|u| self.get(u, self.dual(u), s)).sum()
    }

    /// `⟨A_s A_t, A_u A_v⟩ = Σ_w c(s,t,w) c(u,v,w) n_w`.
    pub fn product_inner(&self, s: Color, t: Color, u: Color, v: Color) -> usize {
        (0..self.rank)
            .map(|w| self.get(s, t, w) * self.get(u, v, w) * self.valency(w))
            .sum()
    }

    /// `Σ_u c(s,t,u) n_u = n_s n_t` for all `s, t`.
    pub fn row_sums_hold(&self) -> bool {
        let val = self.valencies();
        (0..self.rank).all(|s| {
            (0..self.rank).all(|t| {
                (0..self.rank).map(|u| self.get(s, t, u) * val[u]).sum::<usize>() == val[s] * val[t]
            })
        })
    }

    /// `c(s*,t*,u*) = c(t,s,u)` for all triples.
    pub fn transpose_identity_holds(&self) -> bool {
        let d: Vec<Color> = (0..self.rank).map(|s| self.dual(s)).collect();
        (0..self.rank).all(|s| {
            (0..self.rank).all(|t| {
                (0..self.rank).all(|u| self.get(d[s], d[t], d[u]) == self.get(t, s, u))
            })
        })
    }
}

/// A validated association scheme.
#[derive(Debug, Clone)]
pub struct Scheme {
    colors: ColorMatrix,
    rank: usize,
    dual: Vec<Color>,
    tensor: IntersectionTensor,
    // rows[α * rank + s] = αs
    rows: Vec<Vec<Point>>,
}

impl PartialEq for Scheme {
    fn eq(&self, other: &Self) -> bool {
        self.colors == other.colors && self.rank == other.rank
    }
}

impl Eq for Scheme {}

impl Scheme {
    /// Checks the three scheme axioms on an explicit color matrix and dual
    /// map. Intersection constancy is checked over every pair.
    pub fn validate(
        n: usize,
        rank: usize,
        cells: Vec<u32>,
        dual: Vec<Color>,
    ) -> Result<Scheme, SchemeError> {
        if cells.len() != n * n {
            return Err(SchemeError::Shape {
                expected: n * n,
                found: cells.len(),
            });
        }
        if dual.len() != rank || dual.iter().any(|&d| d >= rank) {
            return Err(SchemeError::MalformedDual {
                expected: rank,
                found: dual.len(),
            });
        }
        if let Some(i) = cells.iter().position(|&c| c as usize >= rank) {
            return Err(SchemeError::ColorOutOfRange {
                x: i / n,
                y: i % n,
                color: cells[i] as usize,
                rank,
            });
        }
        let colors = ColorMatrix::new(n, cells);

        for x in 0..n {
            for y in 0..n {
                let c = colors.get(x, y);
                if (x == y) != (c == 0) {
                    return Err(SchemeError::DiagonalViolation { x, y, color: c });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let c = colors.get(x, y);
                let tc = colors.get(y, x);
                if dual[c] != tc || dual[dual[c]] != c {
                    return Err(SchemeError::DualViolation {
                        x,
                        y,
                        color: c,
                        transposed: tc,
                        expected: dual[c],
                    });
                }
            }
        }
        let mut used = vec![false; rank];
        colors.cells().iter().for_each(|&c| used[c as usize] = true);
        if let Some(c) = used.iter().position(|&u| !u) {
            return Err(SchemeError::UnusedColor(c));
        }

        let signatures = check_constancy(&colors).map_err(|v| SchemeError::NonConstantIntersection {
            s: v.s,
            t: v.t,
            u: v.u,
            pair: v.pair,
            expected: v.expected,
            found: v.found,
        })?;
        let mut tensor = IntersectionTensor::zeros(rank);
        for (u, sig) in signatures.iter().enumerate() {
            for &key in sig {
                let (s, t) = unpack(key);
                let i = tensor.idx(s, t, u);
                tensor.data[i] += 1;
            }
        }

        let mut rows = vec![Vec::new(); n * rank];
        for a in 0..n {
            for b in 0..n {
                rows[a * rank + colors.get(a, b)].push(b);
            }
        }

        Ok(Scheme {
            colors,
            rank,
            dual,
            tensor,
            rows,
        })
    }

    /// Validates a color matrix, deriving the rank and the dual map from it.
    pub fn from_matrix(matrix: ColorMatrix) -> Result<Scheme, SchemeError> {
        let n = matrix.n();
        let rank = matrix.num_colors();
        let mut dual: Vec<Option<Color>> = vec![None; rank];
        for x in 0..n {
            for y in 0..n {
                let c = matrix.get(x, y);
                let tc = matrix.get(y, x);
                match dual[c] {
                    None => dual[c] = Some(tc),
                    Some(d) if d != tc => {
                        return Err(SchemeError::DualViolation {
                            x,
                            y,
                            color: c,
                            transposed: tc,
                            expected: d,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        if let Some(c) = dual.iter().position(Option::is_none) {
            return Err(SchemeError::UnusedColor(c));
        }
        let dual = dual.into_iter().map(Option::unwrap).collect();
        Scheme::validate(n, rank, matrix.cells().to_vec(), dual)
    }

    pub fn n(&self) -> usize {
        self.colors.n()
    }

    /// Number of relation colors `r = |S|`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, x: Point, y: Point) -> Color {
        self.colors.get(x, y)
    }

    pub fn colors(&self) -> &ColorMatrix {
        &self.colors
    }

    pub fn dual(&self, s: Color) -> Color {
        self.dual[s]
    }

    pub fn tensor(&self) -> &IntersectionTensor {
        &self.tensor
    }

    /// `c(s,t,u)`.
    pub fn intersection(&self, s: Color, t: Color, u: Color) -> usize {
        self.tensor.get(s, t, u)
    }

    pub fn valency(&self, s: Color) -> usize {
        self.tensor.get(s, self.dual[s], 0)
    }

    pub fn valencies(&self) -> Vec<usize> {
        (0..self.rank).map(|s| self.valency(s)).collect()
    }

    /// The row section `αs = {y : color(α, y) = s}`, ascending.
    pub fn row(&self, alpha: Point, s: Color) -> &[Point] {
        &self.rows[alpha * self.rank + s]
    }

    pub fn is_k_equivalenced(&self) -> Option<usize> {
        self.tensor.k_equivalenced()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.rank).all(|s| self.dual[s] == s)
    }

    pub fn is_commutative(&self) -> bool {
        self.tensor.is_commutative()
    }

    pub fn indistinguishing_number(&self, s: Color) -> Result<usize, SchemeError> {
        if s == 0 {
            return Err(SchemeError::DiagonalColor);
        }
        Ok(self.tensor.indistinguishing(s))
    }

    /// Maximum of `c(s)` over non-diagonal colors; 0 for the one-point scheme.
    pub fn scheme_indistinguishing(&self) -> usize {
        (1..self.rank)
            .map(|s| self.tensor.indistinguishing(s))
            .max()
            .unwrap_or(0)
    }

    /// k-equivalenced with `c(s) = k − 1` for every non-diagonal color.
    pub fn is_pseudocyclic(&self) -> bool {
        match self.is_k_equivalenced() {
            Some(k) => (1..self.rank).all(|s| self.tensor.indistinguishing(s) + 1 == k),
            None => false,
        }
    }

    pub fn product_inner(&self, s: Color, t: Color, u: Color, v: Color) -> usize {
        self.tensor.product_inner(s, t, u, v)
    }

    /// True when colors are numbered by their first pair in row-major order.
    pub fn is_canonical(&self) -> bool {
        self.colors.is_canonical()
    }

    /// The same partition with colors renumbered canonically.
    pub fn canonical(&self) -> Scheme {
        if self.is_canonical() {
            return self.clone();
        }
        Scheme::from_matrix(self.colors.canonical()).expect("renumbering preserves the axioms")
    }

    /// True when both schemes partition Ω×Ω identically, ignoring color names.
    pub fn same_partition(&self, other: &Scheme) -> bool {
        self.n() == other.n() && self.colors.canonical() == other.colors.canonical()
    }
}
