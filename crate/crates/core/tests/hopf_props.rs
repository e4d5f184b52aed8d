mod common;

use common::corpus;
use hopfw::hopf::{self, default_degree, HomCandidate};
use hopfw::{Family, MultilinearForm, NcPoly, Presentation, Verdict, Verifier};

fn presentations() -> Vec<Presentation> {
    let mut out = Vec::new();
    for (_, w) in corpus() {
        out.push(hopf::build_hw(&w).unwrap());
        out.push(hopf::build_bw(&w).unwrap());
        let polar = w.polar().unwrap().particular;
        out.push(hopf::build_hww(&w, &polar).unwrap());
        if w.arity() == 2 {
            out.push(hopf::build_hb(&w).unwrap());
        }
    }
    for (m, n) in [(3, 2), (3, 3), (2, 2)] {
        out.push(hopf::build_ahmn(m, n).unwrap());
    }
    out
}

fn small(p: &Presentation) -> bool {
    p.alphabet.len() <= 18 && p.m <= 3
}

#[test]
fn counit_is_exact_everywhere() {
    for p in presentations() {
        let item = hopf::check_counit(&p).unwrap();
        assert_eq!(item.verdict, Verdict::Pass, "{}: {item}", p.name);
    }
}

#[test]
fn axioms_hold_at_default_degrees() {
    for p in presentations().into_iter().filter(small) {
        let name = format!("{} (n={}, m={})", p.name, p.n, p.m);
        let v = Verifier::new(p.clone(), default_degree(p.m)).unwrap();
        let report = v.axioms().unwrap();
        assert!(report.passed(), "{name}\n{report}");
    }
}

#[test]
fn universal_maps_respect_relations() {
    for (name, w) in corpus()
        .into_iter()
        .filter(|(_, w)| w.arity() <= 3 && w.dim() <= 3)
    {
        let d = default_degree(w.arity());
        let hw = hopf::build_hw(&w).unwrap();
        for polar in hopf::polar_samples(&w).unwrap() {
            let target = Verifier::new(hopf::build_hww(&w, &polar).unwrap(), d).unwrap();
            let hom = HomCandidate {
                source: hw.clone(),
                images: hopf::universal_to_polar_images(&w, &polar),
            };
            let item = target.check_hom(&hom).unwrap();
            assert_eq!(item.verdict, Verdict::Pass, "{name}: {item}");
        }
        if w.arity() == 2 {
            let hb = hopf::build_hb(&w).unwrap();
            let target = Verifier::new(hb.clone(), d).unwrap();
            let hom = HomCandidate {
                source: hw.clone(),
                images: hopf::universal_to_bilinear_images(&hb).unwrap(),
            };
            let item = target.check_hom(&hom).unwrap();
            assert_eq!(item.verdict, Verdict::Pass, "{name}: {item}");
        }
    }
    let theta = MultilinearForm::orthogonal(3, 3).unwrap();
    let target = Verifier::new(hopf::build_ahmn(3, 3).unwrap(), 6).unwrap();
    let hom = HomCandidate {
        source: hopf::build_hw(&theta).unwrap(),
        images: hopf::universal_to_reflection_images(3, 3),
    };
    assert_eq!(target.check_hom(&hom).unwrap().verdict, Verdict::Pass);
}

#[test]
fn derived_identities_for_the_corpus() {
    for (name, w) in corpus()
        .into_iter()
        .filter(|(_, w)| w.arity() <= 3 && w.dim() <= 3)
    {
        let v = Verifier::new(hopf::build_hw(&w).unwrap(), default_degree(w.arity())).unwrap();
        let samples = hopf::polar_samples(&w).unwrap();
        let report = hopf::universal_suite(&v, &samples).unwrap();
        assert!(report.passed(), "{name}\n{report}");
        if samples.len() > 1 {
            assert!(
                report
                    .items
                    .iter()
                    .any(|i| i.name.starts_with("polar expression independent")),
                "{name}"
            );
        }
    }
}

#[test]
fn quadratic_identities_for_signature() {
    let eps = MultilinearForm::signature(3, 3).unwrap();
    let v = Verifier::new(hopf::build_hw(&eps).unwrap(), 6).unwrap();
    let item = v.check_zero(
        "quadratic identities",
        &hopf::quadratic_identities(&eps).unwrap(),
    );
    assert_eq!(item.verdict, Verdict::Pass, "{item}");
}

#[test]
fn commutator_certificates_agree() {
    let eps = MultilinearForm::signature(3, 3).unwrap();
    let hw = hopf::build_hw(&eps).unwrap();
    let (a, b) = hopf::commutator_pair(Family::U);
    let witness = hopf::check_representation(
        &hw,
        &hopf::unipotent_witness_images(3),
        &[(a.clone(), b.clone())],
    )
    .unwrap();
    assert!(witness.separates());
    let diff: NcPoly = &a - &b;
    for d in [4, 6] {
        let v = Verifier::new(hw.clone(), d).unwrap();
        assert!(!v.normal_form(&diff).unwrap().is_zero(), "D={d}");
        let item = v.check_zero("commutator", std::slice::from_ref(&diff));
        assert_ne!(item.verdict, Verdict::Pass, "D={d}");
    }
}

#[test]
fn bilinear_round_trip_fixes_generators() {
    let b = MultilinearForm::symplectic2();
    let hb = hopf::build_hb(&b).unwrap();
    let hw = hopf::build_hw(&b).unwrap();
    let forward = hopf::universal_to_bilinear_images(&hb).unwrap();
    let backward = hopf::rename_images(Family::U, Family::U, 2);
    let in_hw = Verifier::new(hw.clone(), 4).unwrap();
    let drift: Vec<NcPoly> = hw
        .alphabet
        .iter()
        .map(|g| &forward[g].substitute(&backward, false).unwrap() - &NcPoly::generator(g.clone()))
        .collect();
    assert_eq!(
        in_hw.check_zero("round trip", &drift).verdict,
        Verdict::Pass
    );
}

#[test]
fn probe_reports_are_consistent() {
    let eps = MultilinearForm::signature(3, 3).unwrap();
    let polar = eps.scale(&MultilinearForm::signature_polar_scale(3));
    let low = hopf::noninjectivity_probe(&eps, &polar, 2).unwrap();
    assert!(matches!(
        low.verdict,
        hopf::ProbeVerdict::Inconclusive { .. }
    ));
    let high = hopf::noninjectivity_probe(&eps, &polar, 6).unwrap();
    assert_eq!(
        high.verdict,
        hopf::ProbeVerdict::NoninjectiveCertified { degree: 6 }
    );
    assert!(high.witness.separates());
}
