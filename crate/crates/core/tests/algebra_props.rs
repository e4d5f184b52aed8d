mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use common::{corpus, random_invertible, random_poly, random_word};
use hopfw::hopf;
use hopfw::{Generator, Matrix, MultilinearForm, NcPoly, Scalar, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), r).prop_map(|rows| {
            Matrix::from_rows(
                rows.into_iter()
                    .map(|row| row.into_iter().map(Scalar::from_int).collect())
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn rref_is_idempotent(a in matrix_strategy(5)) {
        let once = a.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&twice.matrix, &once.matrix);
        prop_assert_eq!(twice.pivots, once.pivots);
    }

    #[test]
    fn affine_solutions_are_exact(a in matrix_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Scalar> = (0..a.cols()).map(|_| rational(&mut rng)).collect();
        let b = a.mul_vec(&x).unwrap();
        let sol = a.solve_affine(&b).unwrap();
        let p = sol.particular.expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&p).unwrap(), b);
        prop_assert_eq!(sol.kernel.len() + a.rank(), a.cols());
        let zero = vec![Scalar::zero(); a.rows()];
        for k in &sol.kernel {
            prop_assert_eq!(a.mul_vec(k).unwrap(), zero.clone());
        }
    }

    #[test]
    fn inverse_is_two_sided(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_invertible(&mut rng, n);
        let inv = m.inverse().unwrap();
        prop_assert_eq!(inv.mat_mul(&m).unwrap(), Matrix::identity(n));
        prop_assert_eq!(m.mat_mul(&inv).unwrap(), Matrix::identity(n));
    }

    #[test]
    fn deglex_is_compatible_with_concatenation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphabet = common::free_alphabet(3);
        let mut w = || {
            let len = rng.gen_range(0..=4);
            random_word(&mut rng, &alphabet, len)
        };
        let (a, b, u, v) = (w(), w(), w(), w());
        let lhs = a.cmp(&b);
        prop_assert_eq!(u.concat(&a).concat(&v).cmp(&u.concat(&b).concat(&v)), lhs);
        if a.degree() < b.degree() {
            prop_assert_eq!(lhs, Ordering::Less);
        }
        prop_assert_eq!(b.cmp(&a), lhs.reverse());
    }

    #[test]
    fn substitution_is_linear_and_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let source = common::free_alphabet(3);
        let target = common::free_alphabet(2);
        let images: BTreeMap<Generator, NcPoly> = source
            .iter()
            .map(|g| (g.clone(), random_poly(&mut rng, &target, 2, 3)))
            .collect();
        let p = random_poly(&mut rng, &source, 3, 4);
        let q = random_poly(&mut rng, &source, 3, 4);
        let c = rational(&mut rng);
        for antihom in [false, true] {
            let f = |x: &NcPoly| x.substitute(&images, antihom).unwrap();
            let mut combo = p.clone();
            combo.add_scaled(&q, &c);
            let mut expected = f(&p);
            expected.add_scaled(&f(&q), &c);
            prop_assert_eq!(f(&combo), expected);
            let product = if antihom { &f(&q) * &f(&p) } else { &f(&p) * &f(&q) };
            prop_assert_eq!(f(&(&p * &q)), product);
        }
    }

    #[test]
    fn base_change_conjugates_the_twist(idx in 0usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, w) = &corpus()[idx];
        let q = w.require_preregular().unwrap();
        let g = random_invertible(&mut rng, w.dim());
        let moved = w.base_change(&g).unwrap();
        let expected = g.inverse().unwrap().mat_mul(&q).unwrap().mat_mul(&g).unwrap();
        prop_assert_eq!(moved.require_preregular().unwrap(), expected);
    }

    #[test]
    fn polar_members_and_twist_inverse(idx in 0usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (name, w) = &corpus()[idx];
        let q = w.require_preregular().unwrap();
        let sol = w.polar().unwrap();
        let coeffs: Vec<Scalar> = (0..sol.dimension()).map(|_| rational(&mut rng)).collect();
        let member = sol.member(&coeffs);
        prop_assert!(member.is_polar_of(w), "{}", name);
        let qinv = w.q_inverse_from_polar(&member).unwrap();
        prop_assert_eq!(qinv.mat_mul(&q).unwrap(), Matrix::identity(w.dim()));
    }

    #[test]
    fn cyclic_projection(seed in any::<u64>(), idx in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, w) = &corpus()[idx];
        let q = w.require_preregular().unwrap();
        let mut t = w.scale(&rational(&mut rng));
        let mut extra = MultilinearForm::new(w.dim(), w.arity()).unwrap();
        for idx in w.all_indices() {
            if rng.gen_bool(0.3) {
                extra.set(idx, rational(&mut rng)).unwrap();
            }
        }
        if extra.check_invariance(&q).unwrap() {
            t = t.add(&extra);
        }
        let p = t.pi_q(&q).unwrap();
        prop_assert!(p.is_twisted_cyclic_with(&q));
        let pp = p.pi_q(&q).unwrap();
        prop_assert_eq!(pp, p.scale(&Scalar::from_int(w.arity() as i64)));
    }
}

#[test]
fn twisting_elements_of_the_corpus() {
    for (name, w) in corpus() {
        let q = w.require_preregular().unwrap();
        assert!(w.is_twisted_cyclic_with(&q), "{name}");
        assert!(w.check_invariance(&q).unwrap(), "{name}");
    }
}

#[test]
fn bilinear_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=4 {
        for _ in 0..5 {
            let b = random_invertible(&mut rng, n);
            let w = MultilinearForm::bilinear(&b).unwrap();
            let sol = w.polar().unwrap();
            assert_eq!(sol.dimension(), 0);
            let binv = b.inverse().unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(sol.particular.get(&[i, j]), binv[(i - 1, j - 1)]);
                }
            }
            let expected = b.transpose().inverse().unwrap().mat_mul(&b).unwrap();
            match w.require_preregular() {
                Ok(q) => assert_eq!(q, expected),
                Err(e) => panic!("bilinear form not preregular: {e}"),
            }
        }
    }
}

fn triple(
    delta: &BTreeMap<Generator, hopfw::TensorSquareElement>,
    x: &Generator,
    left: bool,
) -> BTreeMap<(Word, Word, Word), Scalar> {
    let mut out: BTreeMap<(Word, Word, Word), Scalar> = BTreeMap::new();
    for (a, b, c) in delta[x].terms() {
        let split = if left { a } else { b };
        let inner = NcPoly::word(split.clone()).coproduct_image(delta).unwrap();
        for (l, r, d) in inner.terms() {
            let key = if left {
                (l.clone(), r.clone(), b.clone())
            } else {
                (a.clone(), l.clone(), r.clone())
            };
            let mut coeff = c.clone();
            coeff *= d;
            let slot = out.entry(key).or_insert_with(Scalar::zero);
            *slot += &coeff;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[test]
fn coproducts_are_coassociative() {
    let w2 = MultilinearForm::cyclic2();
    let polar = w2.polar().unwrap().particular;
    let presentations = vec![
        hopf::build_hw(&w2).unwrap(),
        hopf::build_bw(&w2).unwrap(),
        hopf::build_hww(&w2, &polar).unwrap(),
        hopf::build_hb(&MultilinearForm::symplectic2()).unwrap(),
        hopf::build_ahmn(3, 2).unwrap(),
        hopf::build_hw(&MultilinearForm::signature(3, 3).unwrap()).unwrap(),
    ];
    for p in presentations {
        let delta = &p.structure.as_ref().unwrap().coproduct;
        for g in &p.alphabet {
            assert_eq!(
                triple(delta, g, true),
                triple(delta, g, false),
                "{} {g}",
                p.name
            );
        }
    }
}
