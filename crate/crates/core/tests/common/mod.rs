//! Shared test helpers: a brute-force span oracle and random instances.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hopfw::{Generator, Matrix, MultilinearForm, NcPoly, Scalar, Word};
use rand::seq::SliceRandom;
use rand::Rng;

/// Row-reduced basis of `span{ x·r·y : deg(x·r·y) ≤ D }`, built by plain
/// Gaussian elimination over the monomial basis.
pub struct SpanOracle {
    /// pivot word → row with that leading word and coefficient 1
    rows: BTreeMap<Word, NcPoly>,
    degree: usize,
}

pub fn words_up_to(alphabet: &[Generator], len: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for g in alphabet {
                let mut v = w.0.clone();
                v.push(g.clone());
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl SpanOracle {
    pub fn new(alphabet: &[Generator], relations: &[NcPoly], degree: usize) -> SpanOracle {
        let mut oracle = SpanOracle {
            rows: BTreeMap::new(),
            degree,
        };
        let words = words_up_to(alphabet, degree);
        for r in relations {
            if r.is_zero() || r.degree() > degree {
                continue;
            }
            let room = degree - r.degree();
            for x in words.iter().filter(|w| w.degree() <= room) {
                let px = NcPoly::word(x.clone());
                let xr = &px * r;
                for y in words.iter().filter(|w| w.degree() + x.degree() <= room) {
                    oracle.insert(&xr * &NcPoly::word(y.clone()));
                }
            }
        }
        oracle
    }

    fn reduce(&self, p: &NcPoly) -> NcPoly {
        let mut p = p.clone();
        loop {
            let hit = p
                .terms()
                .rev()
                .find(|(w, _)| self.rows.contains_key(*w))
                .map(|(w, c)| (w.clone(), c.clone()));
            match hit {
                None => return p,
                Some((w, c)) => p.add_scaled(&self.rows[&w], &-c),
            }
        }
    }

    fn insert(&mut self, p: NcPoly) {
        let r = self.reduce(&p);
        if let Some((w, _)) = r.leading() {
            let w = w.clone();
            self.rows.insert(w, r.monic());
        }
    }

    pub fn contains(&self, p: &NcPoly) -> bool {
        assert!(p.degree() <= self.degree);
        self.reduce(p).is_zero()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }
}

pub fn free_alphabet(k: usize) -> Vec<Generator> {
    ["a", "b", "c", "d"][..k]
        .iter()
        .map(|n| Generator::free(n))
        .collect()
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &[Generator], len: usize) -> Word {
    Word(
        (0..len)
            .map(|_| alphabet.choose(rng).unwrap().clone())
            .collect(),
    )
}

pub fn random_poly<R: Rng>(
    rng: &mut R,
    alphabet: &[Generator],
    max_degree: usize,
    terms: usize,
) -> NcPoly {
    let mut p = NcPoly::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_degree);
        let c = Scalar::from_int(rng.gen_range(-3..=3));
        p.add_term(random_word(rng, alphabet, len), &c);
    }
    p
}

/// A small random instance: alphabet, nonzero relations and degree bound.
pub struct Instance {
    pub alphabet: Vec<Generator>,
    pub relations: Vec<NcPoly>,
    pub degree: usize,
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let k = rng.gen_range(2..=4);
    let alphabet = free_alphabet(k);
    let nrel = rng.gen_range(1..=3);
    let mut relations = Vec::new();
    while relations.len() < nrel {
        let deg = rng.gen_range(1..=3);
        let mut r = NcPoly::zero();
        r.add_term(random_word(rng, &alphabet, deg), &Scalar::one());
        let extra = rng.gen_range(0..=3);
        for _ in 0..extra {
            let len = rng.gen_range(0..=deg);
            r.add_term(
                random_word(rng, &alphabet, len),
                &Scalar::from_int(rng.gen_range(-2..=2)),
            );
        }
        if !r.is_zero() {
            relations.push(r);
        }
    }
    let max_rel = relations.iter().map(NcPoly::degree).max().unwrap();
    let top = if k == 4 { 4 } else { 5 };
    let degree = rng.gen_range(max_rel.max(2)..=top.max(max_rel));
    Instance {
        alphabet,
        relations,
        degree,
    }
}

/// Random elements of the truncated span, and random polynomials, all of
/// degree ≤ D.
pub fn probe_polys<R: Rng>(rng: &mut R, inst: &Instance, count: usize) -> Vec<NcPoly> {
    let mut out = Vec::new();
    for i in 0..count {
        if i % 2 == 0 {
            let mut p = NcPoly::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let r = inst.relations.choose(rng).unwrap();
                let room = inst.degree - r.degree();
                let lx = rng.gen_range(0..=room);
                let ly = rng.gen_range(0..=room - lx);
                let x = NcPoly::word(random_word(rng, &inst.alphabet, lx));
                let y = NcPoly::word(random_word(rng, &inst.alphabet, ly));
                p.add_scaled(&(&(&x * r) * &y), &Scalar::from_int(rng.gen_range(1..=3)));
            }
            if rng.gen_bool(0.3) {
                let len = rng.gen_range(0..=inst.degree);
                p.add_term(random_word(rng, &inst.alphabet, len), &Scalar::one());
            }
            out.push(p);
        } else {
            out.push(random_poly(rng, &inst.alphabet, inst.degree, 4));
        }
    }
    out
}

/// Preregular forms exercised by the property and acceptance suites.
pub fn corpus() -> Vec<(String, MultilinearForm)> {
    let mut out = vec![
        (
            "signature n=m=3".to_string(),
            MultilinearForm::signature(3, 3).unwrap(),
        ),
        (
            "signature n=m=4".to_string(),
            MultilinearForm::signature(4, 4).unwrap(),
        ),
        (
            "orthogonal n=2 m=3".to_string(),
            MultilinearForm::orthogonal(2, 3).unwrap(),
        ),
        (
            "orthogonal n=3 m=3".to_string(),
            MultilinearForm::orthogonal(3, 3).unwrap(),
        ),
        ("symplectic 2x2".to_string(), MultilinearForm::symplectic2()),
        ("cyclic n=2 m=3".to_string(), MultilinearForm::cyclic2()),
    ];
    let b = Matrix::from_ints(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]);
    out.push((
        "bilinear 3x3".to_string(),
        MultilinearForm::bilinear(&b).unwrap(),
    ));
    out
}

/// A random invertible matrix with small integer entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Scalar::from_int(rng.gen_range(-3..=3)))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}
