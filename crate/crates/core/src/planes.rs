//! s-lines and s-planes: lattice-indexed families of points built outward
//! from a five-point base `(α, β, γ, δ, ε)` by uniqueness-driven constraint
//! propagation.
//!
//! For `s ∈ S₂` a plane is just the five-point cross. For `s ∈ S₃` the four
//! axes are s-lines (each step colored `s`, two steps apart colored `ψ(s)`)
//! and every interior cell is the unique point with `s`-steps to its two
//! axis-ward neighbors and a `φ(s)` diagonal to the cell between them. The
//! column axis is built from `(α, γ)` exactly as the row axis is built from
//! `(α, β)`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::groups::Permutation;
use crate::products::PhiPsi;
use crate::scheme::{Color, Point, Scheme};

pub const DEFAULT_RADIUS: usize = 3;

/// Lattice coordinate `(i, j)`.
pub type Cell = (i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("color {0} is not in S3")]
    NotInS3(Color),
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("no point extends the plane at cell {0:?}")]
    NoExtension(Cell),
    #[error("{candidates} points extend the plane at cell {cell:?}")]
    AmbiguousExtension { cell: Cell, candidates: usize },
    #[error("planes have different origins")]
    BaseMismatch,
}

/// `σ(i, j) = (−j, i)`.
#[inline]
pub fn rotate(c: Cell) -> Cell {
    (-c.1, c.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Window {
    /// `(0,0)` and its four axis neighbors
    Cross,
    /// `|i|, |j| ≤ radius`
    Square(usize),
}

impl Window {
    pub fn contains(&self, (i, j): Cell) -> bool {
        match *self {
            Window::Cross => i.abs() + j.abs() <= 1,
            Window::Square(r) => i.unsigned_abs() as usize <= r && j.unsigned_abs() as usize <= r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    pub s: Color,
    pub base: [Point; 5],
    pub window: Window,
    #[serde(skip)]
    grid: BTreeMap<Cell, Point>,
}

impl Plane {
    pub fn origin(&self) -> Point {
        self.base[0]
    }

    pub fn get(&self, c: Cell) -> Option<Point> {
        self.grid.get(&c).copied()
    }

    /// Cells and their points in lexicographic cell order.
    pub fn cells(&self) -> impl Iterator<Item = (Cell, Point)> + '_ {
        self.grid.iter().map(|(&c, &p)| (c, p))
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// The points `α⟨s⟩` on the plane, ascending and deduplicated.
    pub fn points(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.grid.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Test hook: overwrite a cell.
    pub fn set(&mut self, c: Cell, p: Point) {
        self.grid.insert(c, p);
    }
}

fn unique(cell: Cell, candidates: Vec<Point>) -> Result<Point, PlaneError> {
    match candidates.as_slice() {
        [p] => Ok(*p),
        [] => Err(PlaneError::NoExtension(cell)),
        _ => Err(PlaneError::AmbiguousExtension {
            cell,
            candidates: candidates.len(),
        }),
    }
}

/// Extends `x0, x1` to `x0, x1, …` of the given length, each new point being
/// the unique `z` with `color(x_k, z) = s` and `color(x_{k−1}, z) = ψ(s)`.
pub fn s_line(
    scheme: &Scheme,
    pp: &PhiPsi,
    s: Color,
    x0: Point,
    x1: Point,
    length: usize,
) -> Result<Vec<Point>, PlaneError> {
    if !pp.in_s3(s) {
        return Err(PlaneError::NotInS3(s));
    }
    if scheme.color(x0, x1) != s {
        return Err(PlaneError::InvalidBase(format!("color({x0},{x1}) is not {s}")));
    }
    let psi = pp.psi(s);
    let mut line = vec![x0, x1];
    while line.len() < length {
        let k = line.len();
        let (prev, last) = (line[k - 2], line[k - 1]);
        let cands: Vec<Point> = scheme
            .row(last, s)
            .iter()
            .copied()
            .filter(|&z| scheme.color(prev, z) == psi)
            .collect();
        line.push(unique((k as i32, 0), cands)?);
    }
    line.truncate(length.max(2));
    Ok(line)
}

/// Checks the base premise: the four points lie in `αs`, are distinct, and
/// `color(β,δ) = color(γ,ε) = ψ(s)`.
pub fn check_base(scheme: &Scheme, pp: &PhiPsi, s: Color, base: [Point; 5]) -> Result<(), PlaneError> {
    let [a, b, g, d, e] = base;
    if s == 0 || s >= scheme.rank() {
        return Err(PlaneError::InvalidBase(format!("{s} is not a non-diagonal color")));
    }
    if base.iter().any(|&p| p >= scheme.n()) {
        return Err(PlaneError::InvalidBase("point out of range".into()));
    }
    for p in [b, g, d, e] {
        if scheme.color(a, p) != s {
            return Err(PlaneError::InvalidBase(format!("{p} is not in {a}s")));
        }
    }
    if b == g || b == e || g == d || d == e {
        return Err(PlaneError::InvalidBase("base points must be distinct".into()));
    }
    let psi = pp.psi(s);
    if scheme.color(b, d) != psi || scheme.color(g, e) != psi {
        return Err(PlaneError::InvalidBase(format!("opposite base points are not joined by psi({s}) = {psi}")));
    }
    Ok(())
}

/// Every base `(α, β, γ, δ, ε)` at `α` satisfying the premise, in
/// lexicographic order.
pub fn valid_bases(scheme: &Scheme, pp: &PhiPsi, s: Color, alpha: Point) -> Vec<[Point; 5]> {
    let row = scheme.row(alpha, s);
    let mut out = Vec::new();
    for &b in row {
        for &g in row {
            for &d in row {
                for &e in row {
                    let base = [alpha, b, g, d, e];
                    if check_base(scheme, pp, s, base).is_ok() {
                        out.push(base);
                    }
                }
            }
        }
    }
    out
}

pub fn build_plane(
    scheme: &Scheme,
    pp: &PhiPsi,
    s: Color,
    base: [Point; 5],
    radius: usize,
) -> Result<Plane, PlaneError> {
    check_base(scheme, pp, s, base)?;
    let [a, b, g, d, e] = base;
    let mut grid = BTreeMap::new();
    grid.insert((0, 0), a);
    grid.insert((1, 0), b);
    grid.insert((0, 1), g);
    grid.insert((-1, 0), d);
    grid.insert((0, -1), e);

    if pp.in_s2(s) {
        return Ok(Plane {
            s,
            base,
            window: Window::Cross,
            grid,
        });
    }

    let r = radius as i32;
    let len = radius + 1;
    for (first, dir) in [(b, (1, 0)), (g, (0, 1)), (d, (-1, 0)), (e, (0, -1))] {
        let line = s_line(scheme, pp, s, a, first, len).map_err(|err| match err {
            PlaneError::NoExtension((k, _)) => PlaneError::NoExtension((dir.0 * k, dir.1 * k)),
            PlaneError::AmbiguousExtension { cell: (k, _), candidates } => PlaneError::AmbiguousExtension {
                cell: (dir.0 * k, dir.1 * k),
                candidates,
            },
            other => other,
        })?;
        for (k, &p) in line.iter().enumerate() {
            let k = k as i32;
            grid.insert((dir.0 * k, dir.1 * k), p);
        }
    }

    let phi = pp.phi(s);
    for (si, sj) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        for i in 1..=r {
            for j in 1..=r {
                let cell = (si * i, sj * j);
                let n1 = grid[&(si * (i - 1), sj * j)];
                let n2 = grid[&(si * i, sj * (j - 1))];
                let corner = grid[&(si * (i - 1), sj * (j - 1))];
                let cands: Vec<Point> = scheme
                    .row(n1, s)
                    .iter()
                    .copied()
                    .filter(|&z| scheme.color(n2, z) == s && scheme.color(corner, z) == phi)
                    .collect();
                grid.insert(cell, unique(cell, cands)?);
            }
        }
    }

    Ok(Plane {
        s,
        base,
        window: Window::Square(radius),
        grid,
    })
}

/// The base `(α, β, τβ, τ²β, τ³β)` taken from an order-4 automorphism `τ`
/// fixing `α`.
pub fn plane_from_rotation(
    scheme: &Scheme,
    pp: &PhiPsi,
    s: Color,
    alpha: Point,
    beta: Point,
    rotation: &Permutation,
    radius: usize,
) -> Result<Plane, PlaneError> {
    let b1 = rotation.image(beta);
    let b2 = rotation.image(b1);
    let b3 = rotation.image(b2);
    build_plane(scheme, pp, s, [alpha, beta, b1, b2, b3], radius)
}

/// `color(α, P(i,j))` is constant on each σ-orbit of cells in the window.
pub fn check_rotation_invariance(scheme: &Scheme, plane: &Plane) -> bool {
    let a = plane.origin();
    plane.cells().all(|(c, p)| {
        let r = rotate(c);
        match plane.get(r) {
            Some(q) => scheme.color(a, p) == scheme.color(a, q),
            None => !plane.window.contains(r),
        }
    })
}

/// Colors `color(α, P(c))` grouped by σ-orbit of cells, one entry per orbit
/// (keyed by its lexicographically least cell).
pub fn orbit_color_table(scheme: &Scheme, plane: &Plane) -> Vec<(Cell, Vec<Color>)> {
    let a = plane.origin();
    let mut out = Vec::new();
    for (c, _) in plane.cells() {
        let orbit: Vec<Cell> = std::iter::successors(Some(c), |&x| Some(rotate(x))).take(4).collect();
        if orbit.iter().min() != Some(&c) {
            continue;
        }
        let mut seen = Vec::new();
        let colors = orbit
            .into_iter()
            .filter(|x| {
                let fresh = !seen.contains(x);
                seen.push(*x);
                fresh
            })
            .filter_map(|x| plane.get(x).map(|p| scheme.color(a, p)))
            .collect();
        out.push((c, colors));
    }
    out
}

/// Whether the relations between the two planes are invariant under the
/// simultaneous rotation of both lattices.
pub fn check_sim(scheme: &Scheme, alpha: Point, ps: &Plane, pt: &Plane) -> Result<bool, PlaneError> {
    if ps.origin() != alpha || pt.origin() != alpha {
        return Err(PlaneError::BaseMismatch);
    }
    let pairs_ok = ps.cells().all(|(c1, x)| {
        let Some(rx) = ps.get(rotate(c1)) else { return true };
        pt.cells().all(|(c2, y)| match pt.get(rotate(c2)) {
            Some(ry) => scheme.color(x, y) == scheme.color(rx, ry),
            None => true,
        })
    });
    Ok(pairs_ok)
}

/// Searches all base pairs at `α` for an `s`-plane and a `t`-plane
/// satisfying [`check_sim`].
pub fn sim_search(
    scheme: &Scheme,
    pp: &PhiPsi,
    alpha: Point,
    s: Color,
    t: Color,
    radius: usize,
) -> Option<(Plane, Plane)> {
    let planes = |c: Color| -> Vec<Plane> {
        valid_bases(scheme, pp, c, alpha)
            .into_iter()
            .filter_map(|b| build_plane(scheme, pp, c, b, radius).ok())
            .collect()
    };
    let (s_planes, t_planes) = (planes(s), planes(t));
    for ps in &s_planes {
        for pt in &t_planes {
            if check_sim(scheme, alpha, ps, pt) == Ok(true) {
                return Some((ps.clone(), pt.clone()));
            }
        }
    }
    None
}

/// `τ(P(c)) = P(σc)` for every cell whose rotation is in the window.
pub fn is_aligned(plane: &Plane, rotation: &Permutation) -> bool {
    plane.cells().all(|(c, p)| match plane.get(rotate(c)) {
        Some(q) => rotation.image(p) == q,
        None => true,
    })
}

/// The power of `sigma` (itself or its inverse) sending `β` to `γ`, if any.
pub fn aligned_rotation(plane: &Plane, sigma: &Permutation) -> Option<Permutation> {
    let [_, b, g, _, _] = plane.base;
    [sigma.clone(), sigma.inverse()].into_iter().find(|r| r.image(b) == g)
}
