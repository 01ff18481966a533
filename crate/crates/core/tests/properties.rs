//! Randomized invariants over small atomic systems with rational atoms.

use proptest::prelude::*;

use mopuc_core::hermite_pade::{certify_all, default_depth};
use mopuc_core::moments::{szego_inverse, szego_map};
use mopuc_core::relations::{verify_orthogonality, verify_reversal, verify_szego_m, verify_szego_n};
use mopuc_core::*;

type Q = GaussianRational;

fn ratio() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=7).prop_map(|(p, q)| Q::from_ratio(p, q))
}

fn gaussian() -> impl Strategy<Value = Q> {
    ((-9i64..=9, 1i64..=7), (-9i64..=9, 1i64..=7)).prop_map(|(re, im)| Q::from_parts(re, im))
}

fn weight() -> impl Strategy<Value = Q> {
    (1i64..=5, 1i64..=5).prop_map(|(p, q)| Q::from_ratio(p, q))
}

/// Parameter `t = p/q` of a circle point.
fn param() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=6)
}

fn circle_functional(max_atoms: usize) -> impl Strategy<Value = LaurentFunctional<Q>> {
    prop::collection::vec((param(), weight()), 1..=max_atoms).prop_map(|atoms| {
        let atoms: Vec<CircleAtom<Q>> =
            atoms.into_iter().map(|((p, q), w)| CircleAtom::new(CirclePoint::from_ratio(p, q), w)).collect();
        LaurentFunctional::from_atoms(&atoms).unwrap()
    })
}

/// Atoms at `t` and `-t` with equal weights, so `c_k = c_{-k}`.
fn symmetric_functional(max_pairs: usize) -> impl Strategy<Value = LaurentFunctional<Q>> {
    prop::collection::vec((param(), weight()), 1..=max_pairs).prop_map(|pairs| {
        let mut atoms = Vec::new();
        for ((p, q), w) in pairs {
            atoms.push(CircleAtom::new(CirclePoint::from_ratio(p, q), w.clone()));
            atoms.push(CircleAtom::new(CirclePoint::from_ratio(-p, q), w));
        }
        LaurentFunctional::from_atoms(&atoms).unwrap()
    })
}

fn system(r: usize, max_atoms: usize) -> impl Strategy<Value = FunctionalSystem<Q>> {
    prop::collection::vec(circle_functional(max_atoms), r).prop_map(|fs| FunctionalSystem::new(fs).unwrap())
}

/// An index of the given size bound with components in `[lo, 3]`.
fn index(r: usize, lo: i64, max_size: i64) -> impl Strategy<Value = IndexPair> {
    (prop::collection::vec(lo..=3i64, r), prop::collection::vec(lo..=3i64, r))
        .prop_filter_map("outside the cone or too large", move |(n, m)| {
            let idx = IndexPair::new(n, m).ok()?;
            (idx.abs_n() + idx.abs_m() <= max_size).then_some(idx)
        })
}

fn all_pass_or_skip(reports: &[VerificationReport]) -> std::result::Result<(), TestCaseError> {
    for rep in reports {
        prop_assert!(!rep.failed(), "{}", rep.summary_line());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * (Q::one() / a), Q::one());
        }
    }

    #[test]
    fn sharp_is_an_involution(l in circle_functional(5)) {
        let back = l.sharp().sharp();
        for k in -8..=8 {
            prop_assert_eq!(back.moment(k).unwrap(), l.moment(k).unwrap());
            prop_assert_eq!(l.sharp().moment(k).unwrap(), l.moment(-k).unwrap().conj());
        }
    }

    #[test]
    fn szego_map_round_trip(atoms in prop::collection::vec((ratio(), weight()), 1..5)) {
        let m = RealFunctional::from_atoms(atoms).unwrap();
        let image = szego_map(&m);
        prop_assert!(image.symmetric());
        let back = szego_inverse(&image).unwrap();
        for k in 0..=10usize {
            prop_assert_eq!(back.moment(k).unwrap(), m.moment(k).unwrap());
            prop_assert_eq!(image.moment(k as i64).unwrap(), image.moment(-(k as i64)).unwrap());
        }
    }

    #[test]
    fn szego_map_of_atoms_splits_weights(atoms in prop::collection::vec((param(), weight()), 1..4)) {
        // x = w + 1/w = 2(1 - t^2)/(1 + t^2) for w on the circle at parameter t
        let mut real = Vec::new();
        let mut circle = Vec::new();
        for ((p, q), w) in atoms {
            let (p2, q2) = (p * p, q * q);
            real.push((Q::from_ratio(2 * (q2 - p2), q2 + p2), w.clone()));
            if p == 0 {
                circle.push(CircleAtom::new(CirclePoint::from_ratio(0, 1), w));
            } else {
                let half = w * Q::from_ratio(1, 2);
                circle.push(CircleAtom::new(CirclePoint::from_ratio(p, q), half.clone()));
                circle.push(CircleAtom::new(CirclePoint::from_ratio(-p, q), half));
            }
        }
        let image = szego_map(&RealFunctional::from_atoms(real).unwrap());
        let direct = LaurentFunctional::from_atoms(&circle).unwrap();
        for k in -8..=8 {
            prop_assert_eq!(image.moment(k).unwrap(), direct.moment(k).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orthogonality_and_reversal(sys in system(2, 4), idx in index(2, -1, 5)) {
        let mop = LaurentMop::new(sys.clone());
        let reversed = LaurentMop::new(sys.sharp());
        all_pass_or_skip(&verify_orthogonality(&mop, &idx).unwrap())?;
        all_pass_or_skip(&verify_reversal(&mop, &reversed, &idx).unwrap())?;
        if mop.is_normal(&idx).unwrap() {
            let reports = verify_orthogonality(&mop, &idx).unwrap();
            prop_assert!(reports[0].passed() && reports[1].passed());
        }
    }

    #[test]
    fn full_suite_on_random_systems(sys in system(2, 5), idx in index(2, -1, 4)) {
        let mop = LaurentMop::new(sys);
        all_pass_or_skip(&relations::verify_all_at(&mop, &idx).unwrap())?;
    }

    #[test]
    fn szego_directions_are_dual(sys in system(2, 4), idx in index(2, -1, 4), k in 0usize..2) {
        let mop = LaurentMop::new(sys.clone());
        let sharp = LaurentMop::new(sys.sharp());
        let m_side = verify_szego_m(&mop, &idx, k).unwrap();
        let n_side = verify_szego_n(&sharp, &idx.swapped(), k).unwrap();
        let statuses = |v: &[VerificationReport]| v.iter().map(|r| r.status).collect::<Vec<_>>();
        prop_assert_eq!(statuses(&m_side), statuses(&n_side));
    }

    #[test]
    fn symmetric_functionals_swap_families(
        fs in prop::collection::vec(symmetric_functional(3), 2),
        idx in index(2, -1, 4),
    ) {
        let mop = LaurentMop::new(FunctionalSystem::new(fs).unwrap());
        let sw = idx.swapped();
        prop_assume!(mop.is_normal(&idx).unwrap());
        prop_assert!(mop.is_normal(&sw).unwrap());
        prop_assert_eq!(mop.type_ii_star(&idx).unwrap(), mop.type_ii(&sw).unwrap().reflect());
        prop_assert_eq!(mop.alpha(&idx).unwrap(), mop.beta(&sw).unwrap());
        for j in 0..2 {
            if mop.rho_defined(&idx, j) && mop.sigma_defined(&sw, j) {
                match (mop.rho(&idx, j), mop.sigma(&sw, j)) {
                    (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "rho {:?} vs sigma {:?}", a.is_ok(), b.is_ok()),
                }
            }
        }
    }

    #[test]
    fn approximants_certify(sys in system(2, 5), idx in index(2, 0, 4)) {
        let mop = LaurentMop::new(sys);
        prop_assume!(!idx.is_boundary() && mop.is_normal(&idx).unwrap());
        for cert in certify_all(&mop, &idx, default_depth(&idx)).unwrap() {
            prop_assert!(cert.pass(), "{:?}", cert);
        }
    }

    #[test]
    fn real_recurrences(
        a in prop::collection::vec((ratio(), weight()), 3..7),
        b in prop::collection::vec((ratio(), weight()), 3..7),
        n in (0i64..=2, 0i64..=2),
    ) {
        let sys = RealSystem::new(vec![
            RealFunctional::from_atoms(a).unwrap(),
            RealFunctional::from_atoms(b).unwrap(),
        ]).unwrap();
        let mop = RealMop::new(sys);
        let n = [n.0, n.1];
        for k in 0..2 {
            for rep in [mop.verify_type_ii_recurrence(&n, k), mop.verify_type_i_recurrence(&n, k)] {
                match rep {
                    Ok(rep) => prop_assert!(!rep.failed(), "{}", rep.summary_line()),
                    Err(e) => prop_assert!(e.is_prerequisite(), "{e}"),
                }
            }
        }
    }
}
