//! Permutation groups on `0..n`: explicit enumeration, orbital schemes, the
//! affine Frobenius constructors, automorphism search and the Frobenius
//! certifications for 4-equivalenced schemes.
//!
//! Groups here are small enough to enumerate outright, so there is no
//! stabilizer-chain machinery: a [`PermGroup`] is a generating set plus a
//! lazily computed, sorted element list.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::coherence::ColorMatrix;
use crate::fission::point_fission;
use crate::products::{phi_psi, ProductError};
use crate::scheme::{Point, Scheme, SchemeError};

pub const DEFAULT_BOUND: usize = 1_000_000;
pub const DEFAULT_MAX_DEGREE: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group has more than {0} elements")]
    BoundExceeded(usize),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("{0} is not a prime congruent to 1 mod 4")]
    BadPrime(usize),
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("images do not form a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("generator of degree {found} in a group of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(&'static str),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// A permutation acting on the right: `x ↦ images[x]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation(Vec<u32>);

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(GroupError::NotAPermutation(n));
            }
            seen[y] = true;
        }
        Ok(Self(images.into_iter().map(|y| y as u32).collect()))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self, GroupError> {
        Self::from_images((0..n).map(f).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, x: Point) -> Point {
        self.0[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&y| y as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation(inv)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.degree()), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn fixed_points(&self) -> Vec<Point> {
        (0..self.degree()).filter(|&x| self.image(x) == x).collect()
    }

    pub fn num_fixed(&self) -> usize {
        self.0.iter().enumerate().filter(|&(x, &y)| x as u32 == y).count()
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    /// Cycles as sorted point sets, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                cyc.push(y);
                y = self.image(y);
            }
            cyc.sort_unstable();
            out.push(cyc);
        }
        out
    }

    pub fn preserves(&self, scheme: &Scheme) -> bool {
        let n = scheme.n();
        n == self.degree()
            && (0..n).all(|x| (0..n).all(|y| scheme.color(x, y) == scheme.color(self.image(x), self.image(y))))
    }
}

#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        Self {
            degree: self.degree,
            generators: self.generators.clone(),
            elements,
        }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(Self {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    fn with_elements(degree: usize, generators: Vec<Permutation>, mut elements: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        let cell = OnceLock::new();
        let _ = cell.set(elements);
        Self {
            degree,
            generators,
            elements: cell,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted by image vector. Computed once by breadth-first
    /// closure under right multiplication by the generators.
    pub fn enumerate(&self, bound: usize) -> Result<&[Permutation], GroupError> {
        if let Some(e) = self.elements.get() {
            if e.len() > bound {
                return Err(GroupError::BoundExceeded(bound));
            }
            return Ok(e);
        }
        let mut elems = closure(self.degree, &self.generators, bound)?;
        elems.sort_unstable();
        Ok(self.elements.get_or_init(|| elems))
    }

    pub fn order(&self, bound: usize) -> Result<usize, GroupError> {
        Ok(self.enumerate(bound)?.len())
    }

    /// Orbits on points, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for x in 0..self.degree {
                uf.union(x, g.image(x));
            }
        }
        uf.classes()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    pub fn contains(&self, p: &Permutation, bound: usize) -> Result<bool, GroupError> {
        Ok(self.enumerate(bound)?.binary_search(p).is_ok())
    }
}

fn closure(degree: usize, gens: &[Permutation], bound: usize) -> Result<Vec<Permutation>, GroupError> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let h = e.then(g);
            if seen.insert(h.clone()) {
                if seen.len() > bound {
                    return Err(GroupError::BoundExceeded(bound));
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut index = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }
}

/// The scheme whose colors are the orbits of `group` on ordered pairs,
/// numbered by least pair in row-major order.
pub fn orbital_scheme(group: &PermGroup) -> Result<Scheme, GroupError> {
    if !group.is_transitive() {
        return Err(GroupError::NotTransitive);
    }
    let n = group.degree();
    let mut uf = UnionFind::new(n * n);
    for g in group.generators() {
        for x in 0..n {
            for y in 0..n {
                uf.union(x * n + y, g.image(x) * n + g.image(y));
            }
        }
    }
    let mut id = vec![u32::MAX; n * n];
    let mut next = 0u32;
    let cells: Vec<u32> = (0..n * n)
        .map(|i| {
            let r = uf.find(i);
            if id[r] == u32::MAX {
                id[r] = next;
                next += 1;
            }
            id[r]
        })
        .collect();
    Ok(Scheme::from_matrix(ColorMatrix::new(n, cells))?)
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Least `g` with `g² ≡ −1 (mod p)`, i.e. of multiplicative order exactly 4.
pub fn order_four_unit(p: usize) -> Result<usize, GroupError> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(GroupError::BadPrime(p));
    }
    Ok((2..p).find(|g| g * g % p == p - 1).expect("p ≡ 1 mod 4 has a square root of -1"))
}

/// `⟨x ↦ x+1, x ↦ gx⟩` on `Z_p`, a Frobenius group of order `4p`.
pub fn cyclotomic_frobenius(p: usize) -> Result<PermGroup, GroupError> {
    let g = order_four_unit(p)?;
    let shift = Permutation::from_fn(p, |x| (x + 1) % p)?;
    let mult = Permutation::from_fn(p, |x| x * g % p)?;
    PermGroup::new(p, vec![shift, mult])
}

pub fn vector_frobenius(p: usize, d: usize) -> Result<PermGroup, GroupError> {
    vector_frobenius_bounded(p, d, DEFAULT_MAX_DEGREE)
}

/// Translations of `(Z_p)^d` together with scalar multiplication by an
/// order-4 unit; points are encoded as base-`p` digit strings, least
/// significant coordinate first.
pub fn vector_frobenius_bounded(p: usize, d: usize, max_degree: usize) -> Result<PermGroup, GroupError> {
    let g = order_four_unit(p)?;
    if d == 0 {
        return Err(GroupError::DegreeTooLarge { degree: 1, limit: 0 });
    }
    let degree = (0..d)
        .try_fold(1usize, |acc, _| acc.checked_mul(p))
        .filter(|&m| m <= max_degree)
        .ok_or(GroupError::DegreeTooLarge {
            degree: p.saturating_pow(d as u32),
            limit: max_degree,
        })?;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..d)
            .map(|_| {
                let r = x % p;
                x /= p;
                r
            })
            .collect()
    };
    let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    let mut gens = Vec::with_capacity(d + 1);
    for i in 0..d {
        gens.push(Permutation::from_fn(degree, |x| {
            let mut v = digits(x);
            v[i] = (v[i] + 1) % p;
            encode(&v)
        })?);
    }
    gens.push(Permutation::from_fn(degree, |x| {
        let v: Vec<usize> = digits(x).into_iter().map(|c| c * g % p).collect();
        encode(&v)
    })?);
    PermGroup::new(degree, gens)
}

/// Transitive, some non-identity element fixes a point, and no non-identity
/// element fixes two.
pub fn frobenius_check(group: &PermGroup, bound: usize) -> Result<bool, GroupError> {
    let elems = group.enumerate(bound)?;
    if !group.is_transitive() {
        return Ok(false);
    }
    let mut some_stabilizer = false;
    for e in elems.iter().filter(|e| !e.is_identity()) {
        match e.num_fixed() {
            0 => {}
            1 => some_stabilizer = true,
            _ => return Ok(false),
        }
    }
    Ok(some_stabilizer)
}

/// Backtracking search for the full color-preserving automorphism group.
///
/// Points are placed in an order derived from the fission at point 0 (small
/// fibers first); each candidate image is drawn from a row section of an
/// already placed point and must preserve colors to every placed point.
pub fn automorphism_group(scheme: &Scheme, bound: usize) -> Result<PermGroup, GroupError> {
    let n = scheme.n();
    if n == 0 {
        return Ok(PermGroup::with_elements(0, Vec::new(), vec![Permutation(Vec::new())]));
    }
    let order = search_order(scheme);
    let mut search = AutSearch {
        scheme,
        order: &order,
        image: vec![u32::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        bound,
    };
    search.descend(0)?;
    let elements = search.found;
    let generators = generators_from(n, &elements);
    Ok(PermGroup::with_elements(n, generators, elements))
}

fn search_order(scheme: &Scheme) -> Vec<Point> {
    let n = scheme.n();
    let Ok(cc) = point_fission(scheme, &[0]) else {
        return (0..n).collect();
    };
    let mut rest: Vec<Point> = (1..n).collect();
    rest.sort_by_key(|&x| (cc.fibers()[cc.fiber_of(x)].len(), cc.fiber_of(x), x));
    std::iter::once(0).chain(rest).collect()
}

struct AutSearch<'a> {
    scheme: &'a Scheme,
    order: &'a [Point],
    image: Vec<u32>,
    used: Vec<bool>,
    found: Vec<Permutation>,
    bound: usize,
}

impl AutSearch<'_> {
    fn descend(&mut self, depth: usize) -> Result<(), GroupError> {
        let n = self.scheme.n();
        if depth == n {
            self.found.push(Permutation(self.image.clone()));
            if self.found.len() > self.bound {
                return Err(GroupError::BoundExceeded(self.bound));
            }
            return Ok(());
        }
        let x = self.order[depth];
        let candidates: Vec<Point> = if depth == 0 {
            (0..n).collect()
        } else {
            // The placed point whose relation to x has the smallest row.
            let anchor = self.order[..depth]
                .iter()
                .copied()
                .min_by_key(|&b| self.scheme.valency(self.scheme.color(b, x)))
                .expect("depth > 0");
            let c = self.scheme.color(anchor, x);
            self.scheme.row(self.image[anchor] as usize, c).to_vec()
        };
        for y in candidates {
            if self.used[y] || !self.consistent(depth, x, y) {
                continue;
            }
            self.image[x] = y as u32;
            self.used[y] = true;
            self.descend(depth + 1)?;
            self.used[y] = false;
            self.image[x] = u32::MAX;
        }
        Ok(())
    }

    fn consistent(&self, depth: usize, x: Point, y: Point) -> bool {
        let s = self.scheme;
        s.color(x, x) == s.color(y, y)
            && self.order[..depth].iter().all(|&b| {
                let ib = self.image[b] as usize;
                s.color(b, x) == s.color(ib, y) && s.color(x, b) == s.color(y, ib)
            })
    }
}

/// A small generating set: elements are added in sorted order whenever they
/// are not yet in the group generated so far.
fn generators_from(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut sorted: Vec<&Permutation> = elements.iter().collect();
    sorted.sort_unstable();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for e in sorted {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        span = closure(degree, &gens, usize::MAX)
            .expect("unbounded")
            .into_iter()
            .collect();
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Lexicographically least automorphism of order 4 fixing `alpha` whose
/// orbits on the remaining points are exactly the row sections `αs`.
pub fn row_rotation(scheme: &Scheme, aut: &PermGroup, alpha: Point, bound: usize) -> Result<Option<Permutation>, GroupError> {
    let rows: Vec<Vec<Point>> = {
        let mut rows: Vec<Vec<Point>> = (1..scheme.rank()).map(|s| scheme.row(alpha, s).to_vec()).collect();
        rows.push(vec![alpha]);
        rows.sort();
        rows
    };
    Ok(aut
        .enumerate(bound)?
        .iter()
        .find(|g| g.image(alpha) == alpha && g.order() == 4 && g.orbits() == rows)
        .cloned())
}

/// The order-4 automorphism fixing `alpha` whose orbits are the rows of
/// `alpha`; requires a 4-equivalenced scheme with S₃ non-empty.
pub fn sigma_alpha(scheme: &Scheme, aut: &PermGroup, alpha: Point, bound: usize) -> Result<Option<Permutation>, GroupError> {
    let pp = phi_psi(scheme.tensor())?;
    if pp.s3.is_empty() {
        return Err(GroupError::HypothesisUnmet("S3 is empty"));
    }
    row_rotation(scheme, aut, alpha, bound)
}

/// Every automorphism fixing two points is the identity. Requires a
/// 4-equivalenced scheme with at least 4 colors.
pub fn two_point_rigidity(scheme: &Scheme, aut: &PermGroup, bound: usize) -> Result<bool, GroupError> {
    if scheme.is_k_equivalenced() != Some(4) {
        return Err(GroupError::Product(ProductError::NotFourEquivalenced));
    }
    if scheme.rank() < 4 {
        return Err(GroupError::HypothesisUnmet("fewer than 4 colors"));
    }
    Ok(aut
        .enumerate(bound)?
        .iter()
        .all(|g| g.is_identity() || g.num_fixed() < 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusCertificate {
    #[serde(serialize_with = "serialize_generators")]
    pub group: PermGroup,
    pub group_order: usize,
    pub kernel_size: usize,
    pub stabilizer_order: usize,
    pub orbital_match: bool,
}

fn serialize_generators<S: serde::Serializer>(g: &PermGroup, ser: S) -> Result<S::Ok, S::Error> {
    let gens: Vec<Vec<usize>> = g.generators().iter().map(Permutation::images).collect();
    gens.serialize(ser)
}

/// Finds a Frobenius group whose orbitals are exactly the colors of
/// `scheme`, searching inside the automorphism group.
///
/// First tries the fixed-point-free elements of `Aut` (plus the identity) as
/// a kernel, extended by a row rotation at point 0. When that set is not a
/// regular subgroup, falls back to `⟨k, h⟩` for each fixed-point-free `k` and
/// each order-4 stabilizer element `h`.
pub fn frobenius_witness(scheme: &Scheme, bound: usize) -> Result<Option<FrobeniusCertificate>, GroupError> {
    if scheme.is_k_equivalenced() != Some(4) {
        return Err(GroupError::Product(ProductError::NotFourEquivalenced));
    }
    let aut = automorphism_group(scheme, bound)?;
    witness_in(scheme, &aut, bound)
}

pub fn witness_in(scheme: &Scheme, aut: &PermGroup, bound: usize) -> Result<Option<FrobeniusCertificate>, GroupError> {
    let n = scheme.n();
    let elems = aut.enumerate(bound)?;
    let fpf: Vec<&Permutation> = elems.iter().filter(|g| g.num_fixed() == 0).collect();
    let target = 4 * n;

    let kernel_closed = fpf.len() + 1 == n
        && fpf.iter().all(|a| fpf.iter().all(|b| {
            let c = a.then(b);
            c.is_identity() || c.num_fixed() == 0
        }));
    if kernel_closed {
        if let Some(h) = row_rotation(scheme, aut, 0, bound)? {
            let mut gens: Vec<Permutation> = fpf.iter().map(|&k| k.clone()).collect();
            gens.push(h);
            if let Some(cert) = certify(scheme, gens, bound)? {
                return Ok(Some(cert));
            }
        }
    }

    let rotations: Vec<&Permutation> = elems
        .iter()
        .filter(|g| g.image(0) == 0 && g.order() == 4)
        .collect();
    for k in &fpf {
        for h in &rotations {
            if let Some(cert) = certify(scheme, vec![(*k).clone(), (*h).clone()], target)? {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

fn certify(scheme: &Scheme, gens: Vec<Permutation>, bound: usize) -> Result<Option<FrobeniusCertificate>, GroupError> {
    let group = PermGroup::new(scheme.n(), gens)?;
    let elems = match group.enumerate(bound) {
        Ok(e) => e,
        Err(GroupError::BoundExceeded(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !frobenius_check(&group, bound)? {
        return Ok(None);
    }
    let orbital = orbital_scheme(&group)?;
    if !orbital.same_partition(scheme) {
        return Ok(None);
    }
    let kernel_size = elems.iter().filter(|g| g.num_fixed() == 0).count() + 1;
    let stabilizer_order = elems.iter().filter(|g| g.image(0) == 0).count();
    let group_order = elems.len();
    // Replace the (possibly long) generator list by a small one.
    let generators = generators_from(scheme.n(), elems);
    let group = PermGroup::with_elements(scheme.n(), generators, elems.to_vec());
    Ok(Some(FrobeniusCertificate {
        group,
        group_order,
        kernel_size,
        stabilizer_order,
        orbital_match: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::fixtures::{complete, cyclotomic};

    fn symmetric_group(n: usize) -> PermGroup {
        let cycle = Permutation::from_fn(n, |x| (x + 1) % n).unwrap();
        let swap = Permutation::from_fn(n, |x| match x {
            0 => 1,
            1 => 0,
            _ => x,
        })
        .unwrap();
        PermGroup::new(n, vec![cycle, swap]).unwrap()
    }

    #[test]
    fn enumerate_small_groups() {
        let trivial = PermGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.order(10).unwrap(), 1);
        let swap = PermGroup::new(2, vec![Permutation::from_images(vec![1, 0]).unwrap()]).unwrap();
        assert_eq!(swap.order(10).unwrap(), 2);
        let z13 = cyclotomic_frobenius(13).unwrap();
        assert_eq!(z13.order(DEFAULT_BOUND).unwrap(), 52);
        assert_eq!(symmetric_group(5).order(100), Err(GroupError::BoundExceeded(100)));
    }

    #[test]
    fn order_four_units() {
        assert_eq!(order_four_unit(5), Ok(2));
        assert_eq!(order_four_unit(13), Ok(5));
        assert_eq!(order_four_unit(17), Ok(4));
        assert_eq!(order_four_unit(29), Ok(12));
        assert_eq!(order_four_unit(7), Err(GroupError::BadPrime(7)));
        assert_eq!(order_four_unit(21), Err(GroupError::BadPrime(21)));
    }

    #[test]
    fn orbital_schemes() {
        let s5 = orbital_scheme(&cyclotomic_frobenius(5).unwrap()).unwrap();
        assert_eq!(s5, complete(5));
        let s13 = orbital_scheme(&cyclotomic_frobenius(13).unwrap()).unwrap();
        assert_eq!(s13.rank(), 4);
        let mut rows: Vec<Vec<Point>> = (1..4).map(|c| s13.row(0, c).to_vec()).collect();
        rows.sort();
        assert_eq!(rows, vec![vec![1, 5, 8, 12], vec![2, 3, 10, 11], vec![4, 6, 7, 9]]);
        assert_eq!(orbital_scheme(&symmetric_group(3)).unwrap().rank(), 2);
        let cyclic = PermGroup::new(4, vec![Permutation::from_images(vec![1, 0, 2, 3]).unwrap()]).unwrap();
        assert_eq!(orbital_scheme(&cyclic).unwrap_err(), GroupError::NotTransitive);
    }

    #[test]
    fn vector_constructors() {
        let g = vector_frobenius(5, 1).unwrap();
        assert_eq!(g.order(DEFAULT_BOUND).unwrap(), 20);
        let g = vector_frobenius(5, 2).unwrap();
        assert_eq!(g.degree(), 25);
        assert_eq!(g.order(DEFAULT_BOUND).unwrap(), 100);
        assert_eq!(orbital_scheme(&g).unwrap().rank(), 7);
        assert!(matches!(vector_frobenius_bounded(13, 3, 1024), Err(GroupError::DegreeTooLarge { .. })));
        assert_eq!(vector_frobenius(13, 2).unwrap().degree(), 169);
    }

    #[test]
    fn frobenius_checks() {
        assert!(frobenius_check(&cyclotomic_frobenius(13).unwrap(), DEFAULT_BOUND).unwrap());
        let regular = PermGroup::new(13, vec![Permutation::from_fn(13, |x| (x + 1) % 13).unwrap()]).unwrap();
        assert!(!frobenius_check(&regular, DEFAULT_BOUND).unwrap());
        // S3 on three points is the smallest Frobenius group.
        assert!(frobenius_check(&symmetric_group(3), DEFAULT_BOUND).unwrap());
        assert!(!frobenius_check(&symmetric_group(4), DEFAULT_BOUND).unwrap());
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(automorphism_group(&complete(5), DEFAULT_BOUND).unwrap().order(DEFAULT_BOUND).unwrap(), 120);
        let aut13 = automorphism_group(&cyclotomic(13, 5), DEFAULT_BOUND).unwrap();
        assert_eq!(aut13.order(DEFAULT_BOUND).unwrap(), 52);
        // The generating set regenerates the same group.
        let regen = PermGroup::new(13, aut13.generators().to_vec()).unwrap();
        assert_eq!(regen.enumerate(DEFAULT_BOUND).unwrap(), aut13.enumerate(DEFAULT_BOUND).unwrap());
        assert!(aut13.generators().len() <= 3);
        assert_eq!(
            automorphism_group(&cyclotomic(17, 4), DEFAULT_BOUND).unwrap().order(DEFAULT_BOUND).unwrap(),
            68
        );
        assert_eq!(automorphism_group(&complete(5), 100).unwrap_err(), GroupError::BoundExceeded(100));
    }

    #[test]
    fn sigma_alpha_is_multiplication() {
        let s = cyclotomic(13, 5);
        let aut = automorphism_group(&s, DEFAULT_BOUND).unwrap();
        let sigma = sigma_alpha(&s, &aut, 0, DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(sigma.images(), (0..13).map(|x| x * 5 % 13).collect::<Vec<_>>());
        assert_eq!(sigma.orbits(), vec![vec![0], vec![1, 5, 8, 12], vec![2, 3, 10, 11], vec![4, 6, 7, 9]]);

        let s29 = cyclotomic(29, 12);
        let aut = automorphism_group(&s29, DEFAULT_BOUND).unwrap();
        let sigma = sigma_alpha(&s29, &aut, 0, DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(sigma.images(), (0..29).map(|x| x * 12 % 29).collect::<Vec<_>>());

        let s5 = complete(5);
        let aut = automorphism_group(&s5, DEFAULT_BOUND).unwrap();
        assert!(matches!(sigma_alpha(&s5, &aut, 0, DEFAULT_BOUND), Err(GroupError::HypothesisUnmet(_))));
    }

    #[test]
    fn rigidity() {
        for s in [cyclotomic(13, 5), cyclotomic(17, 4)] {
            let aut = automorphism_group(&s, DEFAULT_BOUND).unwrap();
            assert!(two_point_rigidity(&s, &aut, DEFAULT_BOUND).unwrap());
        }
        let s5 = complete(5);
        let aut = automorphism_group(&s5, DEFAULT_BOUND).unwrap();
        assert!(matches!(two_point_rigidity(&s5, &aut, DEFAULT_BOUND), Err(GroupError::HypothesisUnmet(_))));
        // Sym(5) does contain non-identity elements fixing two points.
        let many = aut.enumerate(DEFAULT_BOUND).unwrap().iter().filter(|g| !g.is_identity() && g.num_fixed() >= 2).count();
        assert!(many > 0);
    }

    #[test]
    fn witnesses() {
        let cert = frobenius_witness(&complete(5), DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(cert.group_order, 20);
        assert_eq!(cert.kernel_size * cert.stabilizer_order, 20);

        let cert = frobenius_witness(&cyclotomic(13, 5), DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(cert.kernel_size, 13);
        assert_eq!(cert.stabilizer_order, 4);
        assert!(cert.orbital_match);
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(p.order(), 3);
        assert_eq!(p.then(&p.inverse()), Permutation::identity(4));
        assert_eq!(p.fixed_points(), vec![3]);
        assert_eq!(p.pow(3), Permutation::identity(4));
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
