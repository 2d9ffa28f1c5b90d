use std::collections::BTreeSet;

use proptest::prelude::*;
use scheme_forge::coherence::ColorMatrix;
use scheme_forge::fission::{point_fission, wl_stabilize};
use scheme_forge::groups::{cyclotomic_frobenius, orbital_scheme, vector_frobenius};
use scheme_forge::io::{read_asc, write_asc};
use scheme_forge::products::{closure, wr, RelationSet};
use scheme_forge::Scheme;

fn schemes() -> Vec<Scheme> {
    let mut v: Vec<Scheme> = [5, 13, 17, 29]
        .into_iter()
        .map(|p| orbital_scheme(&cyclotomic_frobenius(p).unwrap()).unwrap())
        .collect();
    v.push(orbital_scheme(&vector_frobenius(5, 2).unwrap()).unwrap());
    v
}

fn any_scheme() -> impl Strategy<Value = Scheme> {
    prop::sample::select(schemes())
}

fn scheme_and_colors() -> impl Strategy<Value = (Scheme, Vec<usize>)> {
    any_scheme().prop_flat_map(|s| {
        let r = s.rank();
        (Just(s), prop::collection::vec(0..r, 0..4))
    })
}

fn scheme_and_points() -> impl Strategy<Value = (Scheme, Vec<usize>)> {
    any_scheme().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), prop::collection::vec(0..n, 1..4))
    })
}

/// Symmetric matrices with a distinguished diagonal color.
fn graph_matrix() -> impl Strategy<Value = ColorMatrix> {
    (2usize..9).prop_flat_map(|n| {
        prop::collection::vec(0u32..3, n * n).prop_map(move |raw| {
            ColorMatrix::from_fn(n, |x, y| if x == y { 0 } else { 1 + raw[x.min(y) * n + x.max(y)] })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent_and_monotone((s, colors) in scheme_and_colors()) {
        let set: RelationSet = colors.iter().copied().collect();
        let cl = closure(s.tensor(), &set);
        prop_assert!(set.is_subset(cl.members()));
        prop_assert!(cl.contains(0));
        let again = closure(s.tensor(), cl.members());
        prop_assert_eq!(again.members(), cl.members());
        let mut bigger = set.clone();
        bigger.insert(colors.first().map_or(0, |c| (c + 1) % s.rank()));
        prop_assert!(cl.members().is_subset(closure(s.tensor(), &bigger).members()));
    }

    #[test]
    fn wreath_relation_is_symmetric((s, colors) in scheme_and_colors()) {
        if let [a, b, ..] = colors[..] {
            prop_assert_eq!(wr(s.tensor(), a, b), wr(s.tensor(), b, a));
        }
    }

    #[test]
    fn wl_is_idempotent_and_refining(m in graph_matrix()) {
        let cc = wl_stabilize(&m);
        prop_assert!(cc.colors().refines(&m.canonical()));
        let again = wl_stabilize(cc.colors());
        prop_assert_eq!(again.colors(), cc.colors());
        prop_assert!(cc.validate().is_ok());
    }

    #[test]
    fn fission_is_monotone((s, points) in scheme_and_points()) {
        let cc = point_fission(&s, &points).unwrap();
        prop_assert!(cc.colors().refines(&s.colors().canonical()));
        for &x in &points {
            prop_assert!(cc.is_singleton_fiber(x));
        }
        let fewer = point_fission(&s, &points[..1]).unwrap();
        prop_assert!(cc.colors().refines(fewer.colors()));
        let fibers: BTreeSet<usize> = (0..s.n()).map(|x| cc.fiber_of(x)).collect();
        prop_assert_eq!(fibers.len(), cc.fibers().len());
    }

    #[test]
    fn asc_text_round_trips(s in any_scheme()) {
        let text = write_asc(&s);
        prop_assert_eq!(write_asc(&read_asc(&text).unwrap()), text);
    }
}
