//! The consolidated verification report: a fixed registry of checks, each
//! tied to one library operation, run concurrently and emitted in registry
//! order.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::designs::{scheme_to_design, verify_design};
use crate::fission::{base_number, fibers_within_rows, is_semiregular_off, point_fission};
use crate::groups::{
    automorphism_group, row_rotation, sigma_alpha, two_point_rigidity, witness_in, GroupError, PermGroup, Permutation,
    DEFAULT_BOUND,
};
use crate::planes::{
    aligned_rotation, build_plane, check_rotation_invariance, check_sim, is_aligned, plane_from_rotation, sim_search,
    valid_bases, Plane, DEFAULT_RADIUS,
};
use crate::products::{phi_psi, verify_structure_lemmas, LemmaCheck, LemmaReport, PhiPsi};
use crate::scheme::{Color, Point, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a (hypothesis unmet)")]
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "n/a (hypothesis unmet)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub status: Status,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub source: String,
    pub n: usize,
    pub rank: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: n = {}, rank = {}", self.source, self.n, self.rank)?;
        for c in &self.checks {
            writeln!(f, "{:<22}  {:<28}  {}", c.status, c.name, c.details)?;
        }
        write!(f, "{}", if self.passed { "all checks passed" } else { "some checks failed" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub bound: usize,
    pub cutoff: usize,
    pub radius: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            cutoff: 3,
            radius: DEFAULT_RADIUS,
        }
    }
}

/// Shared, lazily computed data. `aut` is computed once even when several
/// checks ask for it concurrently.
struct Ctx<'a> {
    scheme: &'a Scheme,
    opts: ReportOptions,
    pp: Option<PhiPsi>,
    lemmas: OnceLock<LemmaReport>,
    aut: OnceLock<Result<PermGroup, GroupError>>,
}

type Outcome = (Status, String);

impl Ctx<'_> {
    fn aut(&self) -> Result<&PermGroup, String> {
        self.aut
            .get_or_init(|| automorphism_group(self.scheme, self.opts.bound))
            .as_ref()
            .map_err(|e| format!("automorphism group: {e}"))
    }

    fn lemmas(&self) -> &LemmaReport {
        self.lemmas.get_or_init(|| verify_structure_lemmas(self.scheme.tensor()))
    }

    /// φ/ψ data, or the n/a outcome when the scheme is not 4-equivalenced.
    fn four(&self) -> Result<&PhiPsi, Outcome> {
        self.pp.as_ref().ok_or_else(|| na("not 4-equivalenced"))
    }

    fn non_diagonal(&self) -> std::ops::Range<Color> {
        1..self.scheme.rank()
    }
}

fn na(why: &str) -> Outcome {
    (Status::NotApplicable, why.to_string())
}

fn verdict(ok: bool, details: String) -> Outcome {
    (if ok { Status::Pass } else { Status::Fail }, details)
}

macro_rules! need {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

macro_rules! aut {
    ($ctx:expr) => {
        match $ctx.aut() {
            Ok(a) => a,
            Err(msg) => return (Status::Fail, msg),
        }
    };
}

struct Check {
    name: &'static str,
    statement: &'static str,
    run: fn(&Ctx) -> Outcome,
}

const REGISTRY: &[Check] = &[
    Check {
        name: "scheme-axioms",
        statement: "diagonal, transpose-closed, constant intersection numbers",
        run: |c| (Status::Pass, format!("{} colors, exhaustive constancy", c.scheme.rank())),
    },
    Check {
        name: "tensor-identities",
        statement: "row sums and transpose identity of intersection numbers",
        run: |c| {
            let t = c.scheme.tensor();
            verdict(
                t.row_sums_hold() && t.transpose_identity_holds(),
                "sum_t c(s,t,u) = n_s; n_u c(s,t,u) = n_s c(u,t*,s)".into(),
            )
        },
    },
    Check {
        name: "four-equivalenced",
        statement: "every non-diagonal valency is 4",
        run: |c| {
            let v = c.scheme.valencies();
            verdict(c.scheme.is_k_equivalenced() == Some(4), format!("valencies {v:?}"))
        },
    },
    Check {
        name: "even-valency-symmetric",
        statement: "k-equivalenced with k even implies symmetric",
        run: |c| match c.scheme.is_k_equivalenced() {
            Some(k) if k % 2 == 0 => verdict(c.scheme.is_symmetric(), format!("k = {k}")),
            _ => na("not k-equivalenced with k even"),
        },
    },
    Check {
        name: "pseudocyclic",
        statement: "4-equivalenced implies c(s) = 3 for every s != 0",
        run: |c| {
            need!(c.four());
            let cs: Vec<usize> = c.non_diagonal().map(|s| c.scheme.tensor().indistinguishing(s)).collect();
            verdict(c.scheme.is_pseudocyclic() && cs.iter().all(|&x| x == 3), format!("c(s) = {cs:?}"))
        },
    },
    Check {
        name: "square-dichotomy",
        statement: "s·s is 4·1 + 3s or 4·1 + 2φ(s) + ψ(s)",
        run: |c| {
            let pp = need!(c.four());
            (
                Status::Pass,
                format!("S2 = {:?}, S3 = {:?}", pp.s2.iter().collect::<Vec<_>>(), pp.s3.iter().collect::<Vec<_>>()),
            )
        },
    },
    Check {
        name: "product-trichotomy",
        statement: "st has 4 members, 2 members with one doubled, or 2 doubled members, per the φ criteria",
        run: |c| lemma_outcome(c, LemmaCheck::ProductTrichotomy, |n| n.ordered_pairs, "ordered pairs"),
    },
    Check {
        name: "phi-psi-bijective",
        statement: "φ and ψ permute S3 and ψ = φ∘φ",
        run: |c| {
            let pp = need!(c.four());
            if pp.s3.is_empty() {
                return na("S3 is empty");
            }
            lemma_outcome(c, LemmaCheck::PhiPsiBijection, |n| n.s3_members, "members of S3")
        },
    },
    Check {
        name: "four-term-product",
        statement: "for r >= 5 every u has some v with |uv| = 4",
        run: |c| {
            need!(c.four());
            if c.scheme.rank() < 5 {
                return na("r < 5");
            }
            lemma_outcome(c, LemmaCheck::FourTermProduct, |n| n.four_term_colors, "colors")
        },
    },
    Check {
        name: "wreath-products",
        statement: "s ≀ t gives st = four distinct relations outside <s> ∪ <t>, norm 16",
        run: |c| {
            need!(c.four());
            if c.lemmas().counts.wr_pairs == 0 {
                return na("no pair s ≀ t");
            }
            lemma_outcome(c, LemmaCheck::WreathProduct, |n| n.wr_pairs, "pairs s ≀ t")
        },
    },
    Check {
        name: "wreath-phi-psi-intersection",
        statement: "s, t in S3 with s ≀ t: |φ(t)φ(s) ∩ ψ(t)ψ(s)| <= 1",
        run: |c| {
            need!(c.four());
            if c.lemmas().counts.s3_wr_pairs == 0 {
                return na("no pair s ≀ t inside S3");
            }
            lemma_outcome(c, LemmaCheck::WreathPhiPsiIntersection, |n| n.s3_wr_pairs, "pairs in S3")
        },
    },
    Check {
        name: "plane-rotation-invariance",
        statement: "color(α, P(i,j)) is invariant under σ(i,j) = (-j,i) for every plane",
        run: plane_invariance,
    },
    Check {
        name: "sigma-alpha",
        statement: "S3 non-empty: an order-4 automorphism fixes α with the rows of α as orbits",
        run: sigma_rows,
    },
    Check {
        name: "sigma-plane-alignment",
        statement: "σ_α maps P(i,j) to P(-j,i) for every plane at α",
        run: sigma_planes,
    },
    Check {
        name: "plane-pair-invariance",
        statement: "s ≀ t: some s-plane and t-plane at α have σ-invariant mutual relations",
        run: plane_pairs,
    },
    Check {
        name: "two-point-rigidity",
        statement: "r >= 4: only the identity automorphism fixes two points",
        run: |c| {
            need!(c.four());
            if c.scheme.rank() < 4 {
                return na("r < 4");
            }
            let aut = aut!(c);
            match two_point_rigidity(c.scheme, aut, c.opts.bound) {
                Ok(ok) => verdict(ok, format!("|Aut| = {}", aut.order(c.opts.bound).unwrap_or(0))),
                Err(e) => (Status::Fail, e.to_string()),
            }
        },
    },
    Check {
        name: "frobenius-witness",
        statement: "the scheme is the orbital scheme of a Frobenius group",
        run: |c| {
            need!(c.four());
            let aut = aut!(c);
            match witness_in(c.scheme, aut, c.opts.bound) {
                Ok(Some(cert)) => (
                    Status::Pass,
                    format!(
                        "order {}, kernel {}, stabilizer {}",
                        cert.group_order, cert.kernel_size, cert.stabilizer_order
                    ),
                ),
                Ok(None) => (Status::Fail, "no Frobenius subgroup of Aut has these orbitals".into()),
                Err(e) => (Status::Fail, e.to_string()),
            }
        },
    },
    Check {
        name: "fission-semiregular",
        statement: "r >= 3: the fission at α is semiregular off α",
        run: |c| {
            need!(c.four());
            if c.scheme.rank() < 3 {
                return na("r < 3");
            }
            every_alpha(c, |a| {
                let cc = point_fission(c.scheme, &[a]).map_err(|e| e.to_string())?;
                is_semiregular_off(&cc, a).map_err(|e| e.to_string())
            })
        },
    },
    Check {
        name: "fission-fibers-in-rows",
        statement: "every fiber of the fission at α lies in one row αu",
        run: |c| {
            every_alpha(c, |a| {
                let cc = point_fission(c.scheme, &[a]).map_err(|e| e.to_string())?;
                Ok(fibers_within_rows(c.scheme, &cc, a))
            })
        },
    },
    Check {
        name: "base-number-two",
        statement: "S2 non-empty and r != 2: b(X) = 2",
        run: |c| {
            let pp = need!(c.four());
            if pp.s2.is_empty() || c.scheme.rank() == 2 {
                return na("S2 is empty or r = 2");
            }
            match base_number(c.scheme, c.opts.cutoff) {
                Ok(b) => verdict(b.size == 2, format!("b = {}, witness {:?}", b.size, b.witness)),
                Err(e) => (Status::Fail, e.to_string()),
            }
        },
    },
    Check {
        name: "design-2-(n,4,3)",
        statement: "the rows αs form a 2-(n,4,3) design",
        run: |c| match scheme_to_design(c.scheme) {
            Ok(d) => verdict(verify_design(&d, 2, 4, 3), format!("{} blocks", d.blocks.len())),
            Err(_) => na("not 4-equivalenced"),
        },
    },
];

fn lemma_outcome(
    c: &Ctx,
    check: LemmaCheck,
    count: fn(&crate::products::LemmaCounts) -> usize,
    what: &str,
) -> Outcome {
    need!(c.four());
    let rep = c.lemmas();
    let bad: Vec<&str> = rep
        .findings
        .iter()
        .filter(|f| f.check == check)
        .map(|f| f.detail.as_str())
        .collect();
    match bad.first() {
        None => (Status::Pass, format!("{} {what}", count(&rep.counts))),
        Some(first) => (Status::Fail, format!("{} violations; first: {first}", bad.len())),
    }
}

/// Runs `f` at every point, reporting the first point where it fails.
fn every_alpha(c: &Ctx, f: impl Fn(Point) -> Result<bool, String> + Sync) -> Outcome {
    let n = c.scheme.n();
    let bad = (0..n).into_par_iter().find_map_first(|a| match f(a) {
        Ok(true) => None,
        Ok(false) => Some(format!("fails at α = {a}")),
        Err(e) => Some(format!("α = {a}: {e}")),
    });
    match bad {
        None => (Status::Pass, format!("all {n} points")),
        Some(d) => (Status::Fail, d),
    }
}

fn all_planes(c: &Ctx, pp: &PhiPsi, alpha: Point) -> Vec<Result<Plane, String>> {
    c.non_diagonal()
        .flat_map(|s| {
            valid_bases(c.scheme, pp, s, alpha)
                .into_iter()
                .map(move |b| build_plane(c.scheme, pp, s, b, c.opts.radius).map_err(|e| format!("s = {s}, base {b:?}: {e}")))
        })
        .collect()
}

fn plane_invariance(c: &Ctx) -> Outcome {
    let pp = need!(c.four());
    let n = c.scheme.n();
    let results: Vec<Result<usize, String>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let planes = all_planes(c, pp, a);
            let mut count = 0;
            for p in planes {
                let p = p?;
                if !check_rotation_invariance(c.scheme, &p) {
                    return Err(format!("s = {}, base {:?}: not σ-invariant", p.s, p.base));
                }
                count += 1;
            }
            Ok(count)
        })
        .collect();
    let mut total = 0;
    for (a, r) in results.into_iter().enumerate() {
        match r {
            Ok(k) => total += k,
            Err(e) => return (Status::Fail, format!("α = {a}: {e}")),
        }
    }
    (
        Status::Pass,
        format!("{total} planes, radius {}, column axis read as P(0,i)", c.opts.radius),
    )
}

fn sigma_rows(c: &Ctx) -> Outcome {
    let pp = need!(c.four());
    if pp.s3.is_empty() {
        return na("S3 is empty");
    }
    let aut = aut!(c);
    every_alpha(c, |a| {
        sigma_alpha(c.scheme, aut, a, c.opts.bound)
            .map(|s| s.is_some())
            .map_err(|e| e.to_string())
    })
}

fn sigma_planes(c: &Ctx) -> Outcome {
    let pp = need!(c.four());
    if pp.s3.is_empty() {
        return na("S3 is empty");
    }
    let aut = aut!(c);
    every_alpha(c, |a| {
        let sigma = sigma_alpha(c.scheme, aut, a, c.opts.bound)
            .map_err(|e| e.to_string())?
            .ok_or("no σ_α")?;
        for &s in &pp.s3 {
            for base in valid_bases(c.scheme, pp, s, a) {
                let plane = build_plane(c.scheme, pp, s, base, c.opts.radius).map_err(|e| e.to_string())?;
                let Some(tau) = aligned_rotation(&plane, &sigma) else {
                    return Ok(false);
                };
                if !is_aligned(&plane, &tau) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })
}

fn plane_pairs(c: &Ctx) -> Outcome {
    let pp = need!(c.four());
    let pairs: Vec<(Color, Color)> = c
        .non_diagonal()
        .flat_map(|s| (s + 1..c.scheme.rank()).map(move |t| (s, t)))
        .filter(|&(s, t)| crate::products::wr(c.scheme.tensor(), s, t))
        .collect();
    if pairs.is_empty() {
        return na("no pair s ≀ t");
    }
    let rotation: Option<Permutation> = match c.aut() {
        Ok(aut) => row_rotation(c.scheme, aut, 0, c.opts.bound).ok().flatten(),
        Err(_) => None,
    };
    let from_rotation = |s: Color, tau: &Permutation| {
        let beta = c.scheme.row(0, s)[0];
        plane_from_rotation(c.scheme, pp, s, 0, beta, tau, c.opts.radius).ok()
    };
    let bad = pairs.par_iter().find_map_first(|&(s, t)| {
        let via_rotation = rotation.as_ref().and_then(|tau| {
            let (ps, pt) = (from_rotation(s, tau)?, from_rotation(t, tau)?);
            check_sim(c.scheme, 0, &ps, &pt).ok().filter(|&ok| ok)
        });
        if via_rotation.is_some() || sim_search(c.scheme, pp, 0, s, t, c.opts.radius).is_some() {
            None
        } else {
            Some((s, t))
        }
    });
    match bad {
        None => (Status::Pass, format!("{} pairs at α = 0", pairs.len())),
        Some((s, t)) => (Status::Fail, format!("no invariant plane pair for ({s}, {t})")),
    }
}

/// Runs every registered check against `scheme`.
pub fn run_report(scheme: &Scheme, source: &str, opts: ReportOptions) -> Report {
    let ctx = Ctx {
        scheme,
        opts,
        pp: phi_psi(scheme.tensor()).ok(),
        lemmas: OnceLock::new(),
        aut: OnceLock::new(),
    };
    let checks: Vec<CheckResult> = REGISTRY
        .par_iter()
        .map(|chk| {
            let (status, details) = (chk.run)(&ctx);
            CheckResult {
                name: chk.name,
                statement: chk.statement,
                status,
                details,
            }
        })
        .collect();
    Report {
        source: source.to_string(),
        n: scheme.n(),
        rank: scheme.rank(),
        passed: checks.iter().all(|c| c.status != Status::Fail),
        checks,
    }
}

/// Names of all registered checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}
