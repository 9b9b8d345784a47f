use chiralis::equivariant::{gamma_identities, invariant_suite};
use chiralis::fixtures::{self, check_fixture, FixtureSpec, GammaChoice};
use chiralis::lie::{LieAlgebraData, RepresentationData};
use chiralis::theorems::{self, THEOREM_IDS};
use chiralis::{Error, Scalar};

fn sl2() -> LieAlgebraData {
    LieAlgebraData::sl2()
}

#[test]
fn theorem_ids_are_stable() {
    assert_eq!(
        THEOREM_IDS,
        [
            "thm:q-vanishing",
            "thm:L-chiral-free",
            "thm:linear-rep",
            "thm:t-reduction",
            "thm:gh-element",
            "thm:half-tva",
            "thm:basic-vanishing",
            "thm:small-models",
            "thm:conformal-structure",
        ]
    );
}

#[test]
fn every_fixture_passes_the_invariant_suite() {
    let t1 = LieAlgebraData::abelian(1);
    let mut modules = vec![
        fixtures::poly_translation(1).unwrap(),
        fixtures::poly_translation(3).unwrap(),
        fixtures::trivial_action(&t1),
        fixtures::trivial_action(&sl2()),
        fixtures::weil_as_module(&t1).unwrap(),
        fixtures::weil_as_module(&sl2()).unwrap(),
        fixtures::two_group(1, 1).unwrap().module,
    ];
    for g in [GammaChoice::BetaGamma, GammaChoice::BC] {
        modules.push(fixtures::linear_rep(&sl2(), "fundamental", g).unwrap().module);
    }
    for m in &modules {
        let r = check_fixture(m);
        assert!(r.passed, "{}: {}", m.name, r.summary());
    }
}

#[test]
fn fixture_specs_parse_and_build() {
    let spec = FixtureSpec::from_json(r#"{"kind": "linear_rep", "params": {"lie": "sl2", "rep": "fundamental", "gamma": "BC"}}"#).unwrap();
    let m = spec.build().unwrap();
    assert_eq!(m.ambient.len(), 8);
    let bad = FixtureSpec::from_json(r#"{"kind": "torus"}"#).unwrap();
    assert!(matches!(bad.build(), Err(Error::Spec(_))));
}

#[test]
fn translations_have_gamma_identities() {
    for n in [1, 3] {
        let m = fixtures::poly_translation(n).unwrap();
        let r = gamma_identities(&m, &m.connection().unwrap());
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn q_vanishes_on_translations() {
    for n in [1, 3] {
        let r = theorems::verify_q_vanishing(&fixtures::poly_translation(n).unwrap()).unwrap();
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn q_vanishing_fails_without_connection_forms() {
    let r = theorems::verify_q_vanishing(&fixtures::trivial_action(&LieAlgebraData::abelian(1))).unwrap();
    assert!(!r.passed);
    assert!(r.failures().iter().any(|c| c.name.contains("chiral-free")), "{}", r.summary());
}

#[test]
fn l_vanishing_needs_semisimple() {
    let m = fixtures::poly_translation(1).unwrap();
    assert!(matches!(theorems::verify_l_chiral_free(&m), Err(Error::NotSemisimple)));
    // the unguarded witness shows why: L is not horizontal for abelian g
    let r = theorems::l_vanishing_witness(&m).unwrap();
    assert!(!r.passed);
}

#[test]
fn linear_rep_of_sl2_passes_for_both_gamma_choices() {
    for g in [GammaChoice::BetaGamma, GammaChoice::BC] {
        let r = theorems::verify_linear_rep(&sl2(), "fundamental", g).unwrap();
        assert!(r.passed, "{g:?}: {}", r.summary());
        assert!(r.notes.iter().any(|n| n.contains("first display: true, second display: true")), "{:?}", r.notes);
    }
}

#[test]
fn linear_rep_of_two_copies_of_sl2() {
    let l = LieAlgebraData::builtin("sl2+sl2").unwrap();
    let rep = l.reps.keys().find(|k| k.contains("fundamental")).cloned().expect("direct sum keeps a rep");
    let r = theorems::verify_linear_rep(&l, &rep, GammaChoice::BetaGamma).unwrap();
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn linear_rep_guards() {
    let t1 = LieAlgebraData::abelian(1);
    assert!(matches!(theorems::verify_linear_rep(&t1, "fundamental", GammaChoice::BC), Err(Error::NotSemisimple)));
    let mut l = sl2();
    let zero = vec![vec![vec![Scalar::zero()]]; 3];
    l.reps.insert("zero".into(), RepresentationData { dim_v: 1, matrices: zero });
    assert!(matches!(theorems::verify_linear_rep(&l, "zero", GammaChoice::BC), Err(Error::NotFaithful)));
}

#[test]
fn translations_are_half_tvas_and_weil_is_not() {
    let r = theorems::verify_half_tva(&fixtures::poly_translation(1).unwrap());
    assert!(r.passed, "{}", r.summary());
    let w = theorems::weil_would_be_tva(&LieAlgebraData::abelian(1)).unwrap();
    let r = theorems::verify_half_tva(&w);
    assert!(!r.passed);
    // b∘₁g^W = β is the obstruction
    assert!(r.failures().iter().any(|c| c.name.contains("o1 g") && c.residual.contains("beta")), "{:?}", r.failures());
}

#[test]
fn basic_cohomology_vanishes_constructively() {
    let r = theorems::verify_basic_vanishing(&fixtures::poly_translation(1).unwrap(), 2, 4).unwrap();
    assert!(r.passed, "{}", r.summary());
    assert!(!r.checks.is_empty());
}

#[test]
fn gh_element_hypotheses_and_stages() {
    for h in [(0, 1), (1, 2)] {
        let s = theorems::gh_translation_fixture(h).unwrap();
        match theorems::verify_gh_element(&s) {
            Err(Error::HypothesisFailed(name)) => assert_eq!(name, "G semisimple"),
            other => panic!("expected the semisimplicity hypothesis to fail, got {other:?}"),
        }
        let hyp = theorems::gh_hypothesis_report(&s).unwrap();
        let failing: Vec<_> = hyp.failures().iter().map(|c| c.name.clone()).collect();
        assert_eq!(failing, vec!["hypothesis: G semisimple".to_string()]);
        let r = theorems::gh_element_stages(&s).unwrap();
        assert!(r.passed, "{h:?}: {}", r.summary());
    }
}

#[test]
fn small_models_agree() {
    let t1 = LieAlgebraData::abelian(1);
    for a in [fixtures::trivial_action(&t1), fixtures::weil_as_module(&t1).unwrap()] {
        let r = theorems::verify_small_models(&a, 2, 4).unwrap();
        assert!(r.passed, "{}: {}", a.name, r.summary());
    }
    let r = theorems::verify_small_models(&fixtures::trivial_action(&sl2()), 1, 2);
    assert!(matches!(r, Err(Error::NotAbelian)));
}

#[test]
fn t_reduction_dimensions_agree() {
    let r = theorems::verify_t_reduction(&fixtures::two_group(1, 1).unwrap(), 2, 4).unwrap();
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn conformal_structure_on_abelian_and_sl2() {
    for l in [LieAlgebraData::abelian(1), sl2()] {
        let out = theorems::conformal_structure(&l, 2, 3).unwrap();
        assert!(out.report.passed, "{}: {}", l.name, out.report.summary());
        assert_eq!(out.central_lw, Some(Scalar::zero()));
        assert_eq!(out.central_big_l, Some(Scalar::zero()));
    }
}

#[test]
fn invariant_suite_flags_a_broken_module() {
    let mut m = fixtures::poly_translation(1).unwrap();
    // dropping d breaks [d, ι] = L
    m.d = chiralis::State::zero();
    let r = invariant_suite(&m, 1);
    assert!(!r.passed);
}
