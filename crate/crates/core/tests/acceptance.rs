//! Acceptance suite: every top-level claim about the construction, checked
//! over the full parameter matrix p in {2,3,4,5}, n in {1,2}, all valid q.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one pass/fail
//! line per criterion.

use std::collections::BTreeMap;

use lensgem::action::{build_rho, is_good_action, lens_quotient, orbits, PosetAutomorphism};
use lensgem::builders::{build_sigma, cycle_complex, LensParams};
use lensgem::gem::{
    check_crystallization, colored_isomorphic, dual_graph, identity_color_map, lens_gem_direct,
};
use lensgem::geometry::{verify_commuting_square, COMMUTING_SQUARE_TOLERANCE, DEFAULT_GEOMETRY_SEED};
use lensgem::homology::{chain_complex, homology, homology_via_derived, HomologyGroups};
use lensgem::Error;

fn criterion(number: u32, name: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    let result = std::panic::catch_unwind(body);
    match &result {
        Ok(()) => println!("criterion {number} ({name}): PASS"),
        Err(_) => println!("criterion {number} ({name}): FAIL"),
    }
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

/// All q-tuples with every entry in 1..p coprime to p.
fn valid_q_tuples(p: u32, n: usize) -> Vec<Vec<i64>> {
    let residues: Vec<i64> =
        (1..p as i64).filter(|&q| num_integer::gcd(q, p as i64) == 1).collect();
    let mut tuples: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                residues.iter().map(move |&r| {
                    let mut next = t.clone();
                    next.push(r);
                    next
                })
            })
            .collect();
    }
    tuples
}

fn full_matrix() -> Vec<LensParams> {
    let mut out = Vec::new();
    for n in [1usize, 2] {
        for p in [2u32, 3, 4, 5] {
            for q in valid_q_tuples(p, n) {
                out.push(LensParams::new(p, &q).unwrap());
            }
        }
    }
    assert!(out.len() <= 50, "matrix capped at 50 tuples");
    out
}

#[test]
fn criterion_1_construction_counts() {
    criterion(1, "construction counts of the sphere triangulation", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let f = sigma.poset().f_vector();
            let p = params.p() as usize;
            let n = params.n();
            assert_eq!(f.0[0], 2 * p * (n + 1), "{params}: vertex count");
            assert_eq!(f.0[2 * n + 1], (2 * p).pow(n as u32 + 1), "{params}: facet count");
        }
    });
}

#[test]
fn criterion_2_automorphism_and_goodness() {
    criterion(2, "rotation is an order-p automorphism acting goodly", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            // build_rho re-validates bijectivity, dimension preservation and
            // cover preservation in both directions, and the order.
            let rho = build_rho(&sigma).expect("rotation must be an automorphism");
            assert_eq!(rho.order(), params.p() as usize, "{params}: order");
            assert!(is_good_action(&rho).is_good(), "{params}: goodness");
        }
    });
}

#[test]
fn criterion_3_quotient_crystallization_counts() {
    criterion(3, "quotient is a 2(n+1)-vertex pseudomanifold with exact counts", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let q = lens_quotient(&sigma, &rho).unwrap();
            let p = params.p() as usize;
            let n = params.n();
            assert!(q.poset.validate().is_empty(), "{params}: quotient must validate");
            let f = q.poset.f_vector();
            assert_eq!(f.0[0], 2 * (n + 1), "{params}: quotient vertex count");
            assert!(q.poset.is_pure(), "{params}: purity");
            assert!(q.poset.ridges_in_two_facets(), "{params}: ridges");
            assert_eq!(
                f.0[2 * n + 1],
                2usize.pow(n as u32 + 1) * p.pow(n as u32),
                "{params}: quotient facet count"
            );
            assert_eq!(
                q.poset.cell_count(),
                ((4 * p + 1).pow(n as u32 + 1) - 1) / p,
                "{params}: total cell count"
            );
            // Free action: every orbit has size exactly p.
            let orb = orbits(&rho);
            assert!(orb.orbits().all(|(_, m)| m.len() == p), "{params}: freeness");
        }
    });
}

#[test]
fn criterion_4_gem_conditions() {
    criterion(4, "dual graphs satisfy all crystallization conditions", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let q = lens_quotient(&sigma, &rho).unwrap();
            let gem = dual_graph(&q.poset).unwrap();
            let report = check_crystallization(&gem);
            assert!(report.regular, "{params}: (2n+2)-regularity");
            assert!(report.properly_colored, "{params}: proper coloring");
            assert!(report.connected, "{params}: connectivity");
            assert!(
                report.residues_connected.iter().all(|(_, ok)| *ok),
                "{params}: color-deleted connectivity"
            );
            assert!(report.bipartite, "{params}: bipartiteness (orientability)");
        }
    });
}

#[test]
fn criterion_5_gem_cross_check() {
    criterion(5, "closed-form gem matches the quotient dual graph", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let q = lens_quotient(&sigma, &rho).unwrap();
            let via_quotient = dual_graph(&q.poset).unwrap();
            let direct = lens_gem_direct(&params);
            assert_eq!(
                direct.node_count(),
                via_quotient.node_count(),
                "{params}: node counts"
            );
            let map = identity_color_map(&direct);
            assert!(
                colored_isomorphic(&direct, &via_quotient, &map).unwrap(),
                "{params}: colored isomorphism"
            );
        }
    });
}

#[test]
fn criterion_6_homology() {
    criterion(6, "homology of quotients and of the sphere triangulation", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let q = lens_quotient(&sigma, &rho).unwrap();
            let expected = HomologyGroups::generalized_lens(params.p(), params.n());
            let direct = homology(&q.poset).unwrap();
            assert_eq!(direct, expected, "{params}: quotient homology");

            // Sphere homology of Σ itself (cheapest at one q per (p, n); the
            // complex does not depend on q).
            if params.q().iter().all(|&qj| qj == 1) {
                let h_sigma = homology(sigma.poset()).unwrap();
                assert_eq!(
                    h_sigma,
                    HomologyGroups::sphere(params.dim()),
                    "{params}: sphere homology"
                );
            }

            // Independent route through the derived subdivision.
            let small = params.n() == 1 || params.p() <= 3;
            if small {
                let via = homology_via_derived(&q.poset, 1_000_000).unwrap();
                assert_eq!(via, expected, "{params}: derived-subdivision cross-check");
            }
        }
    });
}

#[test]
fn criterion_7_dd_zero_and_euler_poincare() {
    criterion(7, "boundary-squared vanishes and Euler-Poincare holds", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let q = lens_quotient(&sigma, &rho).unwrap();
            for poset in [sigma.poset(), &q.poset] {
                let cc = chain_complex(poset).unwrap();
                assert!(cc.verify_dd_zero(), "{params}: dd = 0");
                let h = homology(poset).unwrap();
                assert_eq!(h.euler_characteristic(), 0, "{params}: alternating betti sum");
                assert_eq!(poset.euler_characteristic(), 0, "{params}: chi");
            }
        }
    });
}

#[test]
fn criterion_8_geometry_commuting_square() {
    criterion(8, "PL rotation and sphere rotation commute with projection", || {
        for params in full_matrix() {
            let sigma = build_sigma(&params);
            let rho = build_rho(&sigma).unwrap();
            let report =
                verify_commuting_square(&sigma, &rho, 10_000, DEFAULT_GEOMETRY_SEED).unwrap();
            assert!(
                report.max_deviation <= COMMUTING_SQUARE_TOLERANCE,
                "{params}: max deviation {} exceeds {}",
                report.max_deviation,
                COMMUTING_SQUARE_TOLERANCE
            );
        }
    });
}

#[test]
fn criterion_9_negative_controls() {
    criterion(9, "non-good actions are detected and rejected", || {
        let square = cycle_complex(2, 0).unwrap();
        let verts = square.cells_of_dim(0).to_vec();
        let edges = square.cells_of_dim(1).to_vec();
        let mut perm: Vec<lensgem::CellId> = square.cell_ids().collect();
        for i in 0..4 {
            perm[verts[i].index()] = verts[(i + 1) % 4];
            perm[edges[i].index()] = edges[(i + 1) % 4];
        }
        let rot = PosetAutomorphism::new(&square, perm).unwrap();
        assert_eq!(rot.order(), 4);
        assert!(!is_good_action(&rot).is_good());
        let err = lensgem::action::quotient(&rot).expect_err("quotient must reject");
        assert!(matches!(err, Error::NotGoodAction { .. }));
        let message = err.to_string();
        assert!(
            message.contains("good"),
            "rejection must state the good-action condition: {message}"
        );
    });
}

#[test]
fn matrix_size_is_within_bounds() {
    let m = full_matrix();
    assert_eq!(m.len(), 34);
    let map: BTreeMap<String, usize> =
        m.iter().map(|p| (p.to_string(), p.n())).collect();
    assert_eq!(map.len(), 34, "parameter sets are distinct");
}
