mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spin_tori::lattice::{torus_matrix, torus_matrix_of};
use spin_tori::smith::{
    determinant, extended_gcd, invariant_factors, lemma_mt_source, lemma_mt_target, lemma_mt_witnesses, MtVariant,
};
use spin_tori::theory::{
    alternative_decomposition, canonical_invariants, case_three_candidates, center_invariants, embeds, evaluate,
    lemma_a2_check, lemma_nt_gcd, lemma_nt_value, lemma_nt_vi_check, theorem_decomposition,
    theorem_decomposition_with_choice, torus_order, two_part, Case, GroupForm, NtGcdPart, NtPart,
};
use spin_tori::weyl::{block_representative, enumerate_classes, standard_representative, Sign, SignedCycleType};

use common::ty;

const QS: [u64; 10] = [2, 3, 4, 5, 7, 9, 11, 13, 16, 25];

fn all_classes(l_max: usize) -> Vec<SignedCycleType> {
    (2..=l_max)
        .flat_map(|l| [Sign::Plus, Sign::Minus].into_iter().flat_map(move |f| enumerate_classes(l, f).unwrap()))
        .collect()
}

#[test]
fn closed_form_matches_snf_and_order_law() {
    for t in all_classes(8) {
        let d = theorem_decomposition(&t);
        assert_eq!(d.degree() as usize, t.rank());
        for q in QS {
            let orders = evaluate(&d, q);
            let closed = canonical_invariants(&orders);
            let a = torus_matrix(&t, q).unwrap();
            assert_eq!(closed, invariant_factors(&a), "{t} at q = {q}");
            let order = torus_order(&t, q);
            assert_eq!(orders.iter().product::<BigInt>(), order);
            assert_eq!(determinant(&a).unwrap().abs(), order, "{t} at q = {q}");
        }
    }
}

#[test]
fn case_census() {
    let case = |s: &str| theorem_decomposition(&ty(s)).case;
    assert_eq!(case("3,-1"), Case::I);
    assert_eq!(case("1,1,-2"), Case::II);
    assert_eq!(case("-2,-1,-1"), Case::II);
    assert_eq!(case("4:-"), Case::III);
    assert_eq!(case("2,-1,-1"), Case::IV);
    assert_eq!(case("2,-2"), Case::IV);
    assert_eq!(case("1,1,1,1"), Case::IV);
}

#[test]
fn case_three_choice_does_not_matter() {
    for t in all_classes(8).into_iter().filter(SignedCycleType::is_splittable) {
        let candidates = case_three_candidates(&t);
        for q in QS {
            let reference = canonical_invariants(&evaluate(&theorem_decomposition(&t), q));
            for &i in &candidates {
                let d = theorem_decomposition_with_choice(&t, i).unwrap();
                assert_eq!(canonical_invariants(&evaluate(&d, q)), reference, "{t} choice {i} q = {q}");
            }
        }
    }
    // with several admissible parts of different lengths
    let t = ty("6,2,2,2:+");
    assert_eq!(case_three_candidates(&t).len(), 4);
    let six = theorem_decomposition_with_choice(&t, 0).unwrap();
    assert_eq!(six.structure(), "Z_{q^3-1} x Z_{q^3+1} x Z_{q^2-1} x Z_{q^2-1} x Z_{q^2-1}");
    for q in [3, 5, 7] {
        assert_eq!(
            canonical_invariants(&evaluate(&six, q)),
            invariant_factors(&torus_matrix(&t, q).unwrap())
        );
    }
}

#[test]
fn alternative_decomposition_agrees() {
    let mut applicable = 0;
    for t in all_classes(8) {
        for q in [3u64, 5, 7, 9, 11, 13, 25] {
            if let Some(alt) = alternative_decomposition(&t, q) {
                applicable += 1;
                let main = canonical_invariants(&evaluate(&theorem_decomposition(&t), q));
                assert_eq!(canonical_invariants(&evaluate(&alt, q)), main, "{t} q = {q}");
            }
        }
    }
    assert!(applicable > 50);
    let t = ty("1,-1,-2");
    assert_eq!(alternative_decomposition(&t, 5).unwrap().structure(), "Z_{(q^2+1)(q-1)} x Z_{q+1}");
    assert_eq!(alternative_decomposition(&t, 7).unwrap().structure(), "Z_{(q^2+1)(q+1)} x Z_{q-1}");
}

#[test]
fn split_classes_give_isomorphic_tori() {
    for l in [2, 4, 6, 8] {
        for t in enumerate_classes(l, Sign::Plus).unwrap() {
            if t.split() != Some(Sign::Plus) {
                continue;
            }
            let partner = t.split_partner().unwrap();
            for q in [2, 3, 5, 9] {
                assert_eq!(
                    invariant_factors(&torus_matrix(&t, q).unwrap()),
                    invariant_factors(&torus_matrix(&partner, q).unwrap()),
                    "{t} q = {q}"
                );
            }
        }
    }
}

#[test]
fn split_minus_differs_from_block_form() {
    // the two split classes have different representatives but equal tori
    let t = ty("2,2:-");
    assert_ne!(standard_representative(&t), block_representative(&t));
    let m = torus_matrix_of(&block_representative(&t), 3).unwrap();
    assert_ne!(m, torus_matrix(&t, 3).unwrap());
}

#[test]
fn even_q_splits_fully() {
    for t in all_classes(8) {
        for q in [2u64, 4, 8, 16] {
            let full: Vec<BigInt> = t
                .parts()
                .iter()
                .map(|p| Pow::pow(&BigInt::from(q), p.length as u32) - p.sign.value())
                .collect();
            assert_eq!(
                canonical_invariants(&evaluate(&theorem_decomposition(&t), q)),
                canonical_invariants(&full),
                "{t} q = {q}"
            );
        }
    }
}

#[test]
fn center_embeds_in_every_torus() {
    for t in all_classes(6) {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
            let z = center_invariants(&GroupForm::new(t.rank(), t.form(), q));
            let torus = invariant_factors(&torus_matrix(&t, q).unwrap());
            assert!(embeds(&z, &torus), "{t} q = {q}: center {z}, torus {torus}");
        }
    }
}

#[test]
fn rank_two_matches_exceptional_isomorphisms() {
    for q in QS {
        let qb = BigInt::from(q);
        let inv = |v: Vec<BigInt>| canonical_invariants(&v);
        let minus: Vec<_> = enumerate_classes(2, Sign::Minus)
            .unwrap()
            .iter()
            .map(|t| invariant_factors(&torus_matrix(t, q).unwrap()))
            .collect();
        // tori of SL_2(q^2): cyclic of orders q^2 - 1 and q^2 + 1
        assert_eq!(minus, vec![inv(vec![&qb * &qb - 1u32]), inv(vec![&qb * &qb + 1u32])]);
        let plus: Vec<_> = enumerate_classes(2, Sign::Plus)
            .unwrap()
            .iter()
            .map(|t| invariant_factors(&torus_matrix(t, q).unwrap()))
            .collect();
        // tori of SL_2(q) x SL_2(q)
        let (a, b) = (&qb - 1u32, &qb + 1u32);
        let expected = vec![
            inv(vec![a.clone(), a.clone()]),
            inv(vec![a.clone(), b.clone()]),
            inv(vec![a, b.clone()]),
            inv(vec![b.clone(), b]),
        ];
        assert_eq!(plus, expected, "q = {q}");
    }
}

fn pow(a: u64, n: u32) -> BigInt {
    Pow::pow(&BigInt::from(a), n)
}

#[test]
fn two_adic_closed_forms() {
    for a in (3u64..=99).step_by(2) {
        for n in 1..=12 {
            assert_eq!(lemma_nt_value(NtPart::IMinus, a, n).unwrap(), two_part(&(pow(a, n) - 1u32)));
            assert_eq!(lemma_nt_value(NtPart::IPlus, a, n).unwrap(), two_part(&(pow(a, n) + 1u32)));
        }
    }
}

#[test]
fn gcd_closed_forms() {
    for a in (3u64..=99).step_by(2) {
        for n1 in 1..=12u32 {
            for n2 in 1..=12u32 {
                for eps in [Sign::Plus, Sign::Minus] {
                    let e = eps.value();
                    let direct = |x: BigInt, y: BigInt| x.gcd(&y);
                    let (odd1, odd2) = (n1 % 2 == 1, n2 % 2 == 1);
                    if odd1 && odd2 {
                        let ii = direct(pow(a, n1) - e, pow(a, n2) + e);
                        assert_eq!(lemma_nt_gcd(NtGcdPart::II, a, n1, n2, eps).unwrap(), ii);
                        let iv = direct(pow(a, n1) + e, pow(a, n2) + e);
                        assert_eq!(lemma_nt_gcd(NtGcdPart::IV, a, n1, n2, eps).unwrap(), iv);
                    } else if !odd1 && odd2 {
                        let iii = direct(pow(a, n1) + 1u32, pow(a, n2) + e);
                        assert_eq!(lemma_nt_gcd(NtGcdPart::III, a, n1, n2, eps).unwrap(), iii);
                        let v = direct(pow(a, n1) - 1u32, pow(a, n2) + e);
                        assert_eq!(lemma_nt_gcd(NtGcdPart::V, a, n1, n2, eps).unwrap(), v);
                    } else {
                        assert!(lemma_nt_gcd(NtGcdPart::II, a, n1, n2, eps).is_err());
                        assert!(lemma_nt_gcd(NtGcdPart::V, a, n1, n2, eps).is_err());
                    }
                }
            }
        }
    }
}

#[test]
fn part_six_isomorphism() {
    for a in (3u64..=19).step_by(2) {
        for n1 in (1..=7).step_by(2) {
            for n2 in (1..=7).step_by(2) {
                for n3 in (2..=8).step_by(2) {
                    assert!(lemma_nt_vi_check(a, n1, n2, n3).unwrap(), "a={a} {n1} {n2} {n3}");
                }
            }
        }
    }
}

#[test]
fn lemma_a2_exhaustive() {
    for a in 1..=200u64 {
        for b in 1..=200u64 {
            match lemma_a2_check(a, b) {
                Ok(holds) => assert!(holds),
                Err(_) => assert!(a.trailing_zeros() < b.trailing_zeros()),
            }
        }
    }
}

fn random_coprime(rng: &mut StdRng) -> (BigInt, BigInt) {
    loop {
        let a = BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000));
        let b = BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000));
        if a.gcd(&b).is_one() {
            return (a, b);
        }
    }
}

fn check_mt(variant: MtVariant, a: &BigInt, b: &BigInt, c: &BigInt) {
    let (p, q) = lemma_mt_witnesses(variant, a, b, c).unwrap();
    let src = lemma_mt_source(variant, a, b, c);
    assert_eq!(&(&p * &src) * &q, lemma_mt_target(variant, a, b, c), "{variant} {a} {b} {c}");
    assert!(determinant(&p).unwrap().abs().is_one());
    assert!(determinant(&q).unwrap().abs().is_one());
}

#[test]
fn lemma_mt_random_witnesses() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let (a, b) = random_coprime(&mut rng);
        check_mt(MtVariant::I, &a, &b, &BigInt::from(0));

        let (a2, b2) = (BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)), BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)));
        check_mt(MtVariant::II, &a2, &b2, &BigInt::from(0));

        let g = BigInt::from(rng.gen_range(1i64..=1000));
        let (x, y) = random_coprime(&mut rng);
        let (a3, b3) = (&g * x, &g * y);
        let c3 = &a3.gcd(&b3) * BigInt::from(rng.gen_range(-1000i64..=1000));
        check_mt(MtVariant::III, &a3, &b3, &c3);

        let (a4, b4) = random_coprime(&mut rng);
        let c4 = BigInt::from(2 * rng.gen_range(-500_000i64..=500_000) + 1);
        check_mt(MtVariant::IV, &a4, &b4, &c4);
    }
}

#[test]
fn bezout_coefficients_are_exact() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let a = BigInt::from(rng.gen_range(-10i64.pow(12)..=10i64.pow(12)));
        let b = BigInt::from(rng.gen_range(-10i64.pow(12)..=10i64.pow(12)));
        let (g, s, t) = extended_gcd(&a, &b);
        assert_eq!(&s * &a + &t * &b, g);
        assert_eq!(g, a.gcd(&b));
    }
}
