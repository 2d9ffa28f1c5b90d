//! Complex products of relations, closed subsets, and the structure of
//! squares `s·s` in 4-equivalenced schemes.
//!
//! Everything here reads only the intersection tensor, so the functions take
//! an [`IntersectionTensor`] rather than a whole scheme. That also lets tests
//! run the verifiers against deliberately corrupted tensors.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::scheme::{Color, IntersectionTensor};

pub type RelationSet = BTreeSet<Color>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("scheme is not 4-equivalenced")]
    NotFourEquivalenced,
    #[error("s·s for s = {0} is neither 4·1 + 3s nor 4·1 + 2u + v")]
    DichotomyViolation(Color),
    #[error("s·t for (s,t) = ({0},{1}) does not match the phi criterion")]
    TrichotomyViolation(Color, Color),
    #[error("expected two distinct non-diagonal colors, got ({0},{1})")]
    InvalidPair(Color, Color),
}

/// A set of colors containing 0, closed under duals and products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedSubset(RelationSet);

impl ClosedSubset {
    pub fn members(&self) -> &RelationSet {
        &self.0
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `RT = {u : c(r,t,u) ≠ 0 for some r ∈ R, t ∈ T}`.
pub fn complex_product(tensor: &IntersectionTensor, left: &RelationSet, right: &RelationSet) -> RelationSet {
    let mut out = RelationSet::new();
    for &a in left {
        for &b in right {
            out.extend(tensor.support(a, b));
        }
    }
    out
}

/// The smallest closed subset containing `set`.
pub fn closure(tensor: &IntersectionTensor, set: &RelationSet) -> ClosedSubset {
    let mut members: RelationSet = set.iter().copied().collect();
    members.insert(0);
    loop {
        let before = members.len();
        let duals: Vec<Color> = members.iter().map(|&c| tensor.dual(c)).collect();
        members.extend(duals);
        let prod = complex_product(tensor, &members, &members);
        members.extend(prod);
        if members.len() == before {
            return ClosedSubset(members);
        }
    }
}

/// `⟨s⟩` for every color, indexed by color.
pub fn singleton_closures(tensor: &IntersectionTensor) -> Vec<ClosedSubset> {
    (0..tensor.rank())
        .map(|s| closure(tensor, &RelationSet::from([s])))
        .collect()
}

/// `s ≀ t`: neither color lies in the closure of the other.
pub fn wr(tensor: &IntersectionTensor, s: Color, t: Color) -> bool {
    if s == t {
        return false;
    }
    !closure(tensor, &RelationSet::from([t])).contains(s)
        && !closure(tensor, &RelationSet::from([s])).contains(t)
}

/// The classification of non-diagonal relations by the shape of `s·s`,
/// with `phi` and `psi` extended by the identity off `s3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiPsi {
    pub phi: Vec<Color>,
    pub psi: Vec<Color>,
    /// `s·s = 4·1 + 3s`
    pub s2: RelationSet,
    /// `s·s = 4·1 + 2φ(s) + ψ(s)`
    pub s3: RelationSet,
}

impl PhiPsi {
    pub fn phi(&self, s: Color) -> Color {
        self.phi[s]
    }

    pub fn psi(&self, s: Color) -> Color {
        self.psi[s]
    }

    pub fn in_s2(&self, s: Color) -> bool {
        self.s2.contains(&s)
    }

    pub fn in_s3(&self, s: Color) -> bool {
        self.s3.contains(&s)
    }
}

pub fn phi_psi(tensor: &IntersectionTensor) -> Result<PhiPsi, ProductError> {
    if tensor.k_equivalenced() != Some(4) {
        return Err(ProductError::NotFourEquivalenced);
    }
    let r = tensor.rank();
    let mut out = PhiPsi {
        phi: (0..r).collect(),
        psi: (0..r).collect(),
        s2: RelationSet::new(),
        s3: RelationSet::new(),
    };
    for s in 1..r {
        let terms = tensor.product(s, s);
        let (diag, rest): (Vec<_>, Vec<_>) = terms.into_iter().partition(|&(w, _)| w == 0);
        if diag != [(0, 4)] {
            return Err(ProductError::DichotomyViolation(s));
        }
        match rest.as_slice() {
            [(w, 3)] if *w == s => {
                out.s2.insert(s);
            }
            [(u, 2), (v, 1)] | [(v, 1), (u, 2)] => {
                out.s3.insert(s);
                out.phi[s] = *u;
                out.psi[s] = *v;
            }
            _ => return Err(ProductError::DichotomyViolation(s)),
        }
    }
    Ok(out)
}

/// Shape of `s·t` for distinct non-diagonal `s, t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProductClass {
    /// four distinct relations, each once
    FourDistinct,
    /// two relations once plus `doubled` twice
    TwoPlusDouble { doubled: Color },
    /// `2s + 2t`
    TwoTwo,
}

fn observed_class(tensor: &IntersectionTensor, s: Color, t: Color) -> Option<ProductClass> {
    let terms = tensor.product(s, t);
    let mut coeffs: Vec<usize> = terms.iter().map(|&(_, c)| c).collect();
    coeffs.sort_unstable();
    match coeffs.as_slice() {
        [1, 1, 1, 1] => Some(ProductClass::FourDistinct),
        [1, 1, 2] => {
            let (doubled, _) = *terms.iter().find(|&&(_, c)| c == 2)?;
            (doubled == s || doubled == t).then_some(ProductClass::TwoPlusDouble { doubled })
        }
        [2, 2] => {
            let supp: RelationSet = terms.iter().map(|&(w, _)| w).collect();
            (supp == RelationSet::from([s, t])).then_some(ProductClass::TwoTwo)
        }
        _ => None,
    }
}

/// Classifies `s·t` and checks it against the phi criterion: the product
/// has a doubled term `2s` exactly when `t = φ(s)` (and symmetrically).
pub fn product_class(
    tensor: &IntersectionTensor,
    pp: &PhiPsi,
    s: Color,
    t: Color,
) -> Result<ProductClass, ProductError> {
    if s == t || s == 0 || t == 0 {
        return Err(ProductError::InvalidPair(s, t));
    }
    let s_is_phi_t = s == pp.phi(t);
    let t_is_phi_s = t == pp.phi(s);
    let predicted = match (s_is_phi_t, t_is_phi_s) {
        (false, false) => ProductClass::FourDistinct,
        (false, true) => ProductClass::TwoPlusDouble { doubled: s },
        (true, false) => ProductClass::TwoPlusDouble { doubled: t },
        (true, true) => ProductClass::TwoTwo,
    };
    match observed_class(tensor, s, t) {
        Some(c) if c == predicted => Ok(c),
        _ => Err(ProductError::TrichotomyViolation(s, t)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaCheck {
    SquareDichotomy,
    ProductTrichotomy,
    PhiPsiBijection,
    FourTermProduct,
    WreathProduct,
    WreathPhiPsiIntersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaFinding {
    pub check: LemmaCheck,
    pub detail: String,
}

/// How many instances of each statement were examined.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaCounts {
    pub squares: usize,
    pub ordered_pairs: usize,
    pub s3_members: usize,
    pub four_term_colors: usize,
    pub wr_pairs: usize,
    pub s3_wr_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub counts: LemmaCounts,
    pub findings: Vec<LemmaFinding>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn failures(&self, check: LemmaCheck) -> usize {
        self.findings.iter().filter(|f| f.check == check).count()
    }
}

/// Exhaustively checks the structural statements about products in a
/// 4-equivalenced scheme and lists every violation found.
pub fn verify_structure_lemmas(tensor: &IntersectionTensor) -> LemmaReport {
    let r = tensor.rank();
    let mut counts = LemmaCounts::default();
    let mut findings = Vec::new();
    let mut fail = |check, detail: String| findings.push(LemmaFinding { check, detail });

    let pp = match phi_psi(tensor) {
        Ok(pp) => pp,
        Err(e) => {
            fail(LemmaCheck::SquareDichotomy, e.to_string());
            return LemmaReport { counts, findings };
        }
    };
    counts.squares = r - 1;

    for s in 1..r {
        for t in 1..r {
            if s == t {
                continue;
            }
            counts.ordered_pairs += 1;
            if let Err(e) = product_class(tensor, &pp, s, t) {
                fail(LemmaCheck::ProductTrichotomy, e.to_string());
            }
        }
    }

    counts.s3_members = pp.s3.len();
    let mut phi_image = RelationSet::new();
    let mut psi_image = RelationSet::new();
    for &s in &pp.s3 {
        let f = pp.phi(s);
        if !pp.in_s3(f) {
            fail(LemmaCheck::PhiPsiBijection, format!("phi({s}) = {f} is not in S3"));
        }
        if pp.psi(s) != pp.phi(f) {
            fail(
                LemmaCheck::PhiPsiBijection,
                format!("psi({s}) = {} but phi(phi({s})) = {}", pp.psi(s), pp.phi(f)),
            );
        }
        phi_image.insert(f);
        psi_image.insert(pp.psi(s));
    }
    if phi_image != pp.s3 {
        fail(LemmaCheck::PhiPsiBijection, "phi is not a bijection on S3".into());
    }
    if psi_image != pp.s3 {
        fail(LemmaCheck::PhiPsiBijection, "psi is not a bijection on S3".into());
    }

    if r >= 5 {
        for u in 1..r {
            counts.four_term_colors += 1;
            if !(1..r).any(|v| tensor.support(u, v).len() == 4) {
                fail(LemmaCheck::FourTermProduct, format!("no v with |{u}v| = 4"));
            }
        }
    }

    let closures = singleton_closures(tensor);
    for s in 1..r {
        for t in s + 1..r {
            if closures[t].contains(s) || closures[s].contains(t) {
                continue;
            }
            counts.wr_pairs += 1;
            let terms = tensor.product(s, t);
            let distinct_once = terms.len() == 4 && terms.iter().all(|&(_, c)| c == 1);
            let outside = terms
                .iter()
                .all(|&(w, _)| !closures[s].contains(w) && !closures[t].contains(w));
            if !distinct_once || !outside {
                fail(
                    LemmaCheck::WreathProduct,
                    format!("{s}·{t} = {terms:?} is not four distinct relations outside <{s}> ∪ <{t}>"),
                );
            }
            let norm = tensor.product_inner(s, t, s, t);
            if norm != 16 {
                fail(LemmaCheck::WreathProduct, format!("<{s}·{t}, {s}·{t}> = {norm}, expected 16"));
            }
            if pp.in_s3(s) && pp.in_s3(t) {
                counts.s3_wr_pairs += 1;
                let a: RelationSet = tensor.support(pp.phi(t), pp.phi(s)).into_iter().collect();
                let b: RelationSet = tensor.support(pp.psi(t), pp.psi(s)).into_iter().collect();
                let common = a.intersection(&b).count();
                if common > 1 {
                    fail(
                        LemmaCheck::WreathPhiPsiIntersection,
                        format!("|phi({t})phi({s}) ∩ psi({t})psi({s})| = {common} for ({s},{t})"),
                    );
                }
            }
        }
    }

    LemmaReport { counts, findings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::fixtures::{complete, cyclotomic};

    #[test]
    fn identity_product() {
        let s = cyclotomic(13, 5);
        let t = s.tensor();
        for c in 0..4 {
            assert_eq!(complex_product(t, &RelationSet::from([0]), &RelationSet::from([c])), RelationSet::from([c]));
        }
    }

    #[test]
    fn z13_square_product_and_phi_psi() {
        let s = cyclotomic(13, 5);
        let c0 = s.color(0, 1); // {1,5,8,12}
        let c1 = s.color(0, 2); // {2,3,10,11}
        let c2 = s.color(0, 4); // {4,6,7,9}
        let t = s.tensor();
        assert_eq!(
            complex_product(t, &RelationSet::from([c0]), &RelationSet::from([c0])),
            RelationSet::from([0, c1, c2])
        );
        let pp = phi_psi(t).unwrap();
        assert!(pp.s2.is_empty());
        assert_eq!(pp.s3, RelationSet::from([1, 2, 3]));
        assert_eq!(pp.phi(c0), c2);
        assert_eq!(pp.psi(c0), c1);
        assert_eq!(closure(t, &RelationSet::from([c0])).len(), 4);
        assert!(!wr(t, c0, c1));
    }

    #[test]
    fn five_point_scheme_is_all_s2() {
        let s = complete(5);
        let pp = phi_psi(s.tensor()).unwrap();
        assert_eq!(pp.s2, RelationSet::from([1]));
        assert_eq!(pp.phi, vec![0, 1]);
        let cl = closure(s.tensor(), &RelationSet::from([1]));
        assert_eq!(cl.members(), &RelationSet::from([0, 1]));
        assert_eq!(closure(s.tensor(), &RelationSet::from([0])).members(), &RelationSet::from([0]));
    }

    #[test]
    fn not_four_equivalenced() {
        assert_eq!(phi_psi(complete(3).tensor()), Err(ProductError::NotFourEquivalenced));
    }

    #[test]
    fn product_classes_follow_phi() {
        let s = cyclotomic(13, 5);
        let t = s.tensor();
        let pp = phi_psi(t).unwrap();
        for a in 1..4 {
            for b in 1..4 {
                if a == b {
                    continue;
                }
                let class = product_class(t, &pp, a, b).unwrap();
                if b == pp.phi(a) && a != pp.phi(b) {
                    assert_eq!(class, ProductClass::TwoPlusDouble { doubled: a });
                }
            }
        }
        assert_eq!(product_class(t, &pp, 1, 1), Err(ProductError::InvalidPair(1, 1)));
    }

    #[test]
    fn corrupted_tensor_is_caught() {
        let s = cyclotomic(13, 5);
        let mut t = s.tensor().clone();
        let (a, b) = (1, 2);
        let w = t.support(a, b)[0];
        t.set(a, b, w, t.get(a, b, w) + 1);
        let report = verify_structure_lemmas(&t);
        assert!(!report.passed());

        let mut t = s.tensor().clone();
        t.set(1, 1, 0, 5);
        let report = verify_structure_lemmas(&t);
        assert_eq!(report.failures(LemmaCheck::SquareDichotomy), 1);
    }

    #[test]
    fn z13_lemmas_pass_vacuously_on_wreath() {
        let report = verify_structure_lemmas(cyclotomic(13, 5).tensor());
        assert!(report.passed(), "{:?}", report.findings);
        assert_eq!(report.counts.wr_pairs, 0);
        assert_eq!(report.counts.ordered_pairs, 6);
    }
}
