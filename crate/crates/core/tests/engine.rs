//! Engine checks against an independent circle-product oracle.
//!
//! The oracle peels the leftmost mode of `a` and uses the normally ordered
//! product expansion recursively, with its own hand-rolled mode action. The
//! library instead expands all factors at once. Agreement of the two on
//! random inputs is the main evidence that either is right.

use chiralis::algebra::{FreeFieldAlgebra, GenId, Mode, Monomial, State};
use chiralis::engine;
use chiralis::fixtures;
use chiralis::lie::LieAlgebraData;
use chiralis::scalar::{binomial, Scalar};
use chiralis::weil::WeilAlgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_mode(alg: &FreeFieldAlgebra, x: GenId, m: i32, s: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in &s.terms {
        if m <= -1 {
            let mut modes = vec![Mode::new(x, m)];
            modes.extend_from_slice(&mono.0);
            if let Some((sg, mm)) = alg.normalize_modes(&modes) {
                out.add_term(mm, &(&sg * c));
            }
            continue;
        }
        let mut odd_before = false;
        for (j, y) in mono.0.iter().enumerate() {
            if m + y.idx == -1 {
                let k = alg.contraction(x, y.gen);
                if !k.is_zero() {
                    let mut rest = mono.0.clone();
                    rest.remove(j);
                    let sign = if alg.is_odd(x) && odd_before { -1 } else { 1 };
                    out.add_term(Monomial(rest), &(&(&k * c) * &Scalar::int(sign)));
                }
            }
            if alg.is_odd(y.gen) {
                odd_before = !odd_before;
            }
        }
    }
    out
}

fn max_weight(alg: &FreeFieldAlgebra, s: &State) -> i32 {
    s.terms.keys().map(|m| alg.monomial_grade(m).weight).max().unwrap_or(0)
}

fn oracle_circle_modes(alg: &FreeFieldAlgebra, a: &[Mode], n: i32, c: &State) -> State {
    if c.is_zero() {
        return State::zero();
    }
    if a.is_empty() {
        return if n == -1 { c.clone() } else { State::zero() };
    }
    let x = a[0].gen;
    let k = -1 - a[0].idx;
    let rest = &a[1..];
    let rest_odd = rest.iter().filter(|m| alg.is_odd(m.gen)).count() % 2 == 1;
    let wrest: i32 = rest.iter().map(|m| alg.mode_grade(*m).weight).sum();
    let wc = max_weight(alg, c);
    let hx = alg.gen(x).weight;
    let mut out = State::zero();
    // creation part: p < 0, needs n - p - 1 <= wrest + wc - 1
    let lo = n - wrest - wc - 1;
    for p in lo.min(-1)..0 {
        let coef = binomial((k - p - 1) as i64, k as i64);
        if coef.is_zero() {
            continue;
        }
        let inner = oracle_circle_modes(alg, rest, n - p - 1, c);
        out.add_scaled(&oracle_mode(alg, x, p - k, &inner), &coef);
    }
    // annihilation part: p >= 0
    let sign = if alg.is_odd(x) && rest_odd { -1 } else { 1 };
    for p in 0..=(k + wc + hx + 1) {
        let coef = binomial((k - p - 1) as i64, k as i64);
        if coef.is_zero() || p - k < 0 {
            continue;
        }
        let inner = oracle_mode(alg, x, p - k, c);
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&oracle_circle_modes(alg, rest, n - p - 1, &inner), &(&coef * &Scalar::int(sign)));
    }
    out
}

fn oracle_circle(alg: &FreeFieldAlgebra, a: &State, n: i32, b: &State) -> State {
    let mut out = State::zero();
    for (m, c) in &a.terms {
        out.add_scaled(&oracle_circle_modes(alg, &m.0, n, b), c);
    }
    out
}

fn random_monomial(alg: &FreeFieldAlgebra, rng: &mut ChaCha8Rng, max_modes: usize, max_k: i32) -> State {
    let n = rng.gen_range(0..=max_modes);
    let modes: Vec<Mode> = (0..n)
        .map(|_| Mode::new(rng.gen_range(0..alg.len() as u32), -1 - rng.gen_range(0..=max_k)))
        .collect();
    match alg.normalize_modes(&modes) {
        Some((s, m)) => State::from_monomial(m).scale(&s),
        None => State::vacuum(),
    }
}

fn sl2_weil() -> WeilAlgebra {
    WeilAlgebra::build(&LieAlgebraData::builtin("sl2").unwrap()).unwrap()
}

#[test]
fn circle_product_matches_oracle_on_random_inputs() {
    let w = sl2_weil();
    let alg = &w.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let a = random_monomial(alg, &mut rng, 3, 1);
        let b = random_monomial(alg, &mut rng, 3, 1);
        let n = rng.gen_range(-3..=3);
        let lib = engine::circle_product(alg, &a, n, &b);
        let orc = oracle_circle(alg, &a, n, &b);
        assert_eq!(lib, orc, "a={} n={n} b={}", alg.format_state(&a), alg.format_state(&b));
    }
}

#[test]
fn apply_mode_examples() {
    let w = WeilAlgebra::build(&LieAlgebraData::builtin("t1").unwrap()).unwrap();
    let alg = &w.algebra;
    let (beta, gamma, b) = (w.beta(0), w.gamma(0), w.b(0));
    let g1 = alg.generator_state(gamma);
    assert_eq!(engine::apply_mode(alg, beta, 0, &g1), State::vacuum());
    assert!(engine::apply_mode(alg, b, 5, &State::vacuum()).is_zero());
    let g2 = State::from_monomial(Monomial(vec![Mode::new(gamma, -2)]));
    assert_eq!(engine::apply_mode(alg, beta, 1, &g2), State::vacuum());
    assert_eq!(oracle_mode(alg, beta, 1, &g2), State::vacuum());
}

#[test]
fn derivative_examples() {
    let w = WeilAlgebra::build(&LieAlgebraData::builtin("t1").unwrap()).unwrap();
    let alg = &w.algebra;
    let g = alg.generator_state(w.gamma(0));
    assert!(engine::derivative(alg, &State::vacuum()).is_zero());
    let gg = alg.fock_multiply(&g, &g);
    let dgg = engine::derivative(alg, &gg);
    let expect = State::from_monomial(Monomial(vec![Mode::new(w.gamma(0), -2), Mode::new(w.gamma(0), -1)]))
        .scale(&Scalar::int(2));
    assert_eq!(dgg, expect);
    assert_eq!(dgg, engine::circle_product(alg, &gg, -2, &State::vacuum()));
    assert_eq!(dgg, oracle_circle(alg, &gg, -2, &State::vacuum()));
}

#[test]
fn fock_product_is_wick_product_of_generators() {
    let w = WeilAlgebra::build(&LieAlgebraData::builtin("t1").unwrap()).unwrap();
    let alg = &w.algebra;
    let b = alg.generator_state(w.b(0));
    let c = alg.generator_state(w.c(0));
    assert_eq!(alg.fock_multiply(&b, &c), engine::circle_product(alg, &b, -1, &c));
    assert_eq!(alg.fock_multiply(&b, &c), oracle_circle(alg, &b, -1, &c));
    assert!(alg.fock_multiply(&c, &c).is_zero());
    // b∘₀c = ⟨ξ', ξ⟩ = 1
    assert_eq!(engine::circle_product(alg, &b, 0, &c), State::vacuum());
}

#[test]
fn poly_translation_gamma_from_contracting_homotopy() {
    let q = fixtures::poly_translation(1).unwrap();
    let alg = &q.ambient;
    let g = q.half_tva.as_ref().unwrap().g.clone();
    let c = q.chiral_free.as_ref().unwrap().theta[0].clone();
    let gamma = alg.lookup("gamma{1}").unwrap();
    let dgamma = State::from_monomial(Monomial(vec![Mode::new(gamma, -2)]));
    assert_eq!(engine::circle_product(alg, &g, 0, &c), dgamma);
    assert_eq!(oracle_circle(alg, &g, 0, &c), dgamma);
}

#[test]
fn ope_singular_examples() {
    let w = WeilAlgebra::build(&LieAlgebraData::builtin("t2").unwrap()).unwrap();
    let alg = &w.algebra;
    for j in 0..2 {
        for l in 0..2 {
            let beta = alg.generator_state(w.beta(j));
            let gamma = alg.generator_state(w.gamma(l));
            let ope = engine::ope_singular(alg, &beta, &gamma);
            if j == l {
                assert_eq!(ope, vec![(0, State::vacuum())]);
            } else {
                assert!(ope.is_empty());
            }
            assert!(engine::ope_singular(alg, &gamma, &gamma).is_empty());
        }
    }
}
