//! Randomized (seeded) structural properties of the algebra, cohomology,
//! and spectral-sequence layers. Everything is exact; every check is an
//! identity, never a tolerance.

mod common;

use common::{random_element, random_presentation, random_twist, stabilized_dims};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistcoh::charclass;
use twistcoh::mpoly::MPoly;
use twistcoh::twisted::{spectral_sequence, twisted_cohomology, TwistedComplex};

#[test]
fn differential_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p = random_presentation(&mut rng, 4);
        let d = p.full_d_matrix();
        assert!(d.mul(&d).is_zero());
    }
}

#[test]
fn twisted_differential_squares_to_zero_and_euler() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let p = random_presentation(&mut rng, 4);
        let eta = random_twist(&mut rng, &p);
        let tw = TwistedComplex::new(&p, &eta).unwrap();
        assert!(tw.d_odd_to_even.mul(&tw.d_even_to_odd).is_zero());
        assert!(tw.d_even_to_odd.mul(&tw.d_odd_to_even).is_zero());
        // Euler characteristic is independent of the twist
        let tc = twisted_cohomology(&p, &eta).unwrap();
        let ne = tw.even_idx.len() as i64;
        let no = tw.odd_idx.len() as i64;
        assert_eq!(tc.dim_even as i64 - tc.dim_odd as i64, ne - no);
    }
}

#[test]
fn product_is_graded_commutative_and_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let p = random_presentation(&mut rng, 4);
        let top = p.top_degree();
        let da = rng.gen_range(1..=top);
        let db = rng.gen_range(1..=top);
        let a = random_element(&mut rng, &p, da);
        let b = random_element(&mut rng, &p, db);
        let ab = p.mul(&a, &b);
        let ba = p.mul(&b, &a);
        if da * db % 2 == 1 {
            assert!(ab.add(&ba).is_zero(), "odd-odd anticommutes");
        } else {
            assert!(ab.sub(&ba).is_zero(), "commutes");
        }
        let dc = rng.gen_range(1..=top);
        let c = random_element(&mut rng, &p, dc);
        assert!(p.mul(&ab, &c).sub(&p.mul(&a, &p.mul(&b, &c))).is_zero());
    }
}

#[test]
fn leibniz_rule_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let p = random_presentation(&mut rng, 4);
        let top = p.top_degree();
        let da = rng.gen_range(1..=top);
        let a = random_element(&mut rng, &p, da);
        let db = rng.gen_range(1..=top);
        let b = random_element(&mut rng, &p, db);
        let lhs = p.d(&p.mul(&a, &b));
        let mut rhs = p.mul(&p.d(&a), &b);
        let adb = p.mul(&a, &p.d(&b));
        rhs = if da % 2 == 1 { rhs.sub(&adb) } else { rhs.add(&adb) };
        assert!(lhs.sub(&rhs).is_zero());
    }
}

#[test]
fn einf_total_equals_twisted_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let p = random_presentation(&mut rng, 3);
        let eta = random_twist(&mut rng, &p);
        let pages = spectral_sequence(&p, &eta, p.top_degree() + 2).unwrap();
        let tc = twisted_cohomology(&p, &eta).unwrap();
        assert_eq!(pages.last().unwrap().total(), tc.total());
        // totals never increase from page to page
        for w in pages.windows(2) {
            assert!(w[1].total() <= w[0].total());
        }
    }
}

#[test]
fn twisted_dims_survive_acyclic_complement() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..25 {
        let p = random_presentation(&mut rng, 3);
        let eta = random_twist(&mut rng, &p);
        let tw = TwistedComplex::new(&p, &eta).unwrap();
        let tc = twisted_cohomology(&p, &eta).unwrap();
        assert_eq!(
            stabilized_dims(&tw.d_even_to_odd, &tw.d_odd_to_even),
            (tc.dim_even, tc.dim_odd)
        );
    }
}

#[test]
fn twisted_dims_survive_gauge_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 15 {
        let p = random_presentation(&mut rng, 3);
        let eta = random_twist(&mut rng, &p);
        let Some(deg) = p.element_degree(&eta) else { continue };
        if deg < 2 {
            continue;
        }
        let zeta = random_element(&mut rng, &p, deg - 1);
        if zeta.is_zero() || p.is_odd_element(&zeta) {
            continue;
        }
        let shifted = eta.add(&p.d(&zeta));
        let a = twisted_cohomology(&p, &eta).unwrap();
        let b = twisted_cohomology(&p, &shifted).unwrap();
        assert_eq!((a.dim_even, a.dim_odd), (b.dim_even, b.dim_odd));
        checked += 1;
    }
}

#[test]
fn newton_conversions_invert_through_weight_ten() {
    for n in 1..=10u32 {
        let composed = charclass::newton_s_in_c(n).substitute(|v| {
            if (200..300).contains(&v) {
                charclass::newton_c_in_s(v - 200)
            } else {
                MPoly::var(v)
            }
        });
        assert_eq!(composed, MPoly::var(charclass::svar(n)), "s_{n} roundtrip");
        let composed = charclass::newton_c_in_s(n).substitute(|v| {
            if (100..200).contains(&v) {
                charclass::newton_s_in_c(v - 100)
            } else {
                MPoly::var(v)
            }
        });
        assert_eq!(composed, MPoly::var(charclass::cvar(n)), "c_{n} roundtrip");
    }
}

#[test]
fn lift_certificates_on_random_invariants() {
    // random rational combinations of J-basis elements of one weight stay
    // liftable with exact certificates
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ring = charclass::invariant_ring(6);
    let word_length = |f: &MPoly| {
        f.terms
            .keys()
            .next()
            .map(|e| MPoly::term_weight(e, charclass::word_length_of))
            .unwrap_or(0)
    };
    for _ in 0..10 {
        let w = &ring.weights[rng.gen_range(1..ring.weights.len())];
        // combine only basis elements of one word length: the lift needs a
        // word-homogeneous input
        let pick = word_length(&w.basis[rng.gen_range(0..w.basis.len())]);
        let mut f = MPoly::zero();
        for b in &w.basis {
            if word_length(b) == pick {
                f = f.add(&b.scale(&common::int(rng.gen_range(-3..=3))));
            }
        }
        if f.is_zero() {
            continue;
        }
        let rep = charclass::delta_and_lift(&f, 10).unwrap();
        assert!(rep.d_minus_one_zero);
        assert!(rep.commutator_is_word_length);
        assert_eq!(rep.word_length, pick);
    }
}

#[test]
fn hankel_weight_consistency_random_eval() {
    // randomized rational spot-check (pre-check only; the symbolic
    // certificates live in the hankel module and the acceptance gate)
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (p, q) in [(1u32, 2u32), (2, 2)] {
        let r = twistcoh::hankel::resultant(p, q);
        let h = twistcoh::hankel::substitute_c(
            &twistcoh::hankel::hankel_det(p, q),
            &twistcoh::hankel::series_quotient(p, q, p + q),
        );
        for _ in 0..10 {
            let vals: std::collections::BTreeMap<u32, twistcoh::Scalar> = h
                .terms
                .keys()
                .chain(r.ab_form.terms.keys())
                .flat_map(|e| e.keys().copied())
                .map(|v| (v, common::int(rng.gen_range(-5..=5))))
                .collect();
            let at = |v: u32| vals.get(&v).cloned().unwrap_or_else(twistcoh::Scalar::zero);
            assert_eq!(h.eval(|v| at(v)), r.ab_form.eval(|v| at(v)));
        }
    }
}
