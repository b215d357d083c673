//! Algebraic invariants checked on random exact instances.

use ncrad_core::linsolve::{echelonize, normalize_ideal_at, NormalizedIdeal};
use ncrad_core::matpoly::{count_real_roots, hermite_form, real_radical_unipoly, smith_normal_form, verify_smith};
use ncrad_core::parse::{parse_poly, print_poly};
use ncrad_core::psdfeas::{find_nonzero_psd, verify_certificate, FeasConfig};
use ncrad_core::random;
use ncrad_core::rational::{from_wire, to_wire};
use ncrad_core::{NCPoly, QMat, Rational, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn polys(seed: u64, k: usize) -> (usize, Vec<NCPoly>) {
    let mut r = rng(seed);
    let g = r.gen_range(1..=3);
    let ps = (0..k).map(|_| random::poly(&mut r, g, 3, 4, false)).collect();
    (g, ps)
}

/// Normalization in the algebra on `g` letters, which may be more than the
/// generators mention.
fn normalize_in(gens: &[NCPoly], g: usize) -> NormalizedIdeal {
    let d = gens.iter().filter_map(NCPoly::degree).max().unwrap();
    normalize_ideal_at(gens, g, d).unwrap()
}

fn metric_inner(d: &Option<Vec<Rational>>, a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::from_integer(0.into());
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let t = x * y;
        s += match d {
            Some(d) => &d[i] * t,
            None => t,
        };
    }
    s
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn involution_reverses_products(seed: u64) {
        let (_, ps) = polys(seed, 2);
        let (p, q) = (&ps[0], &ps[1]);
        prop_assert_eq!((p * q).adjoint(), &q.adjoint() * &p.adjoint());
        prop_assert_eq!(p.adjoint().adjoint(), p.clone());
        prop_assert!(p.hermitian_part().is_hermitian());
    }

    #[test]
    fn ring_laws(seed: u64) {
        let (_, ps) = polys(seed, 3);
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(&(a + b) * c, &(a * c) + &(b * c));
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn degree_is_additive(seed: u64) {
        let (_, ps) = polys(seed, 2);
        let (p, q) = (&ps[0], &ps[1]);
        let prod = p * q;
        match (p.degree(), q.degree()) {
            (Some(a), Some(b)) => prop_assert_eq!(prod.degree(), Some(a + b)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn evaluation_is_multiplicative(seed: u64) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let n = r.gen_range(1..=3);
        let with_metric = r.gen_bool(0.5);
        let pt = random::point(&mut r, g, n, with_metric);
        let len_u = r.gen_range(0..=3);
        let u = random::word(&mut r, g, len_u);
        let len_w = r.gen_range(0..=3);
        let w = random::word(&mut r, g, len_w);
        let direct = pt.apply_word(&u.concat(&w), &pt.v).unwrap();
        let staged = pt.apply_word(&u, &pt.apply_word(&w, &pt.v).unwrap()).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn starred_letters_act_as_adjoints(seed: u64) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let n = r.gen_range(1..=3);
        let with_metric = r.gen_bool(0.5);
        let pt = random::point(&mut r, g, n, with_metric);
        let len_w = r.gen_range(0..=3);
        let w = random::word(&mut r, g, len_w);
        let a: Vec<Rational> = (0..n).map(|_| random::rational(&mut r, 5, 3)).collect();
        let b: Vec<Rational> = (0..n).map(|_| random::rational(&mut r, 5, 3)).collect();
        let lhs = metric_inner(&pt.metric, &pt.apply_word(&w, &a).unwrap(), &b);
        let rhs = metric_inner(&pt.metric, &a, &pt.apply_word(&w.adjoint(), &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_then_parse_is_identity(seed: u64) {
        let (_, ps) = polys(seed, 1);
        let text = print_poly(&ps[0]);
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(print_poly(&back), text);
        prop_assert_eq!(back, ps[0].clone());
    }

    #[test]
    fn wire_rationals_round_trip(q in rational()) {
        prop_assert_eq!(from_wire(&to_wire(&q)), Some(q));
    }

    #[test]
    fn echelon_span_ignores_order_and_scale(seed: u64) {
        let (_, mut ps) = polys(seed, 4);
        let a = echelonize(&ps);
        ps.reverse();
        ps[0] = ps[0].scale(&Rational::new((-3).into(), 7.into()));
        let extra = &ps[1] + &ps[2];
        ps.push(extra);
        let b = echelonize(&ps);
        prop_assert!(a.same_span(&b));
        prop_assert!(a.dim() <= 4);
    }

    #[test]
    fn normal_form_decides_membership(seed: u64) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let d = r.gen_range(1..=3);
        let gens = random::ideal(&mut r, g, d);
        let n = normalize_in(&gens, g);
        for p in &gens {
            prop_assert!(n.member(p));
        }
        let m = random::poly(&mut r, g, 1, 2, false);
        prop_assert!(n.member(&(&m * &gens[0])));
        let q = random::poly(&mut r, g, d + 1, 4, false);
        let nf = n.normal_form(&q);
        prop_assert!(n.member(&(&q - &nf)));
        prop_assert_eq!(n.member(&q), nf.is_zero());
    }

    #[test]
    fn left_multiples_stay_in_the_ideal(seed: u64) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let gens = random::ideal(&mut r, g, 2);
        let n = normalize_in(&gens, g);
        for p in n.presentation() {
            let len_w = r.gen_range(0..=2);
            let w = random::word(&mut r, g, len_w);
            prop_assert!(n.member(&p.left_mul_word(&w)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psd_certificates_check_exactly(seed: u64) {
        let mut r = rng(seed);
        let k = r.gen_range(2..=4);
        let m = r.gen_range(1..=3);
        let mats: Vec<QMat> = (0..m)
            .map(|_| {
                let a = random::qmat(&mut r, k, k, 3);
                a.add(&a.transpose())
            })
            .collect();
        if let Ok(cert) = find_nonzero_psd(&mats, &FeasConfig::default()) {
            prop_assert!(verify_certificate(&mats, &cert).is_ok());
        }
    }

    #[test]
    fn smith_form_invariants(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let p = random::unipoly_matrix(&mut r, n, 3);
        let s = smith_normal_form(&p);
        prop_assert_eq!(verify_smith(&p, &s), Ok(()));
    }

    #[test]
    fn hermite_form_ignores_unimodular_factors(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let g = random::unipoly_matrix(&mut r, n, 2);
        let u = random::unimodular(&mut r, n, 1);
        let h = hermite_form(&g);
        prop_assert_eq!(hermite_form(&u.mul(&g)), h.clone());
        prop_assert_eq!(hermite_form(&h), h);
    }

    #[test]
    fn unipoly_real_radical_keeps_real_roots(seed: u64) {
        let mut r = rng(seed);
        let p = random::unipoly(&mut r, 5);
        prop_assume!(!p.is_zero());
        let rad = real_radical_unipoly(&p).unwrap();
        prop_assert!(rad.divides(&p.squarefree_part()) || p.is_constant());
        prop_assert_eq!(count_real_roots(&rad, None).unwrap(), count_real_roots(&p.squarefree_part(), None).unwrap());
        prop_assert!(rad.gcd(&rad.derivative()).is_constant());
    }

    #[test]
    fn words_enumerate_exactly(g in 1usize..=3, n in 0usize..=3) {
        let all = Word::all_up_to(g, n);
        prop_assert_eq!(all.len(), Word::count_up_to(g, n));
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
