//! Randomized sweep of the vertex algebra axioms on homogeneous samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{FreeFieldAlgebra, Mode, State};
use crate::engine::{circle_product, derivative};
use crate::report::VerificationReport;
use crate::scalar::{binomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomConfig {
    pub samples: usize,
    /// bound on wt(a) + wt(b) + wt(c)
    pub max_weight: i32,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig { samples: 200, max_weight: 3, seed: 1 }
    }
}

fn weight(alg: &FreeFieldAlgebra, s: &State) -> i32 {
    s.terms.keys().next().map_or(0, |m| alg.monomial_grade(m).weight)
}

fn odd(alg: &FreeFieldAlgebra, s: &State) -> bool {
    s.terms.keys().next().is_some_and(|m| alg.monomial_odd(m))
}

fn random_monomial(alg: &FreeFieldAlgebra, rng: &mut ChaCha8Rng, budget: i32) -> State {
    let count = rng.gen_range(1..=3usize);
    let mut modes = Vec::new();
    let mut left = budget;
    for _ in 0..count {
        let g = rng.gen_range(0..alg.len() as u32);
        let w = alg.gen(g).weight;
        if w > left {
            continue;
        }
        let r = rng.gen_range(0..=(left - w));
        left -= w + r;
        modes.push(Mode::new(g, -1 - r));
    }
    match alg.normalize_modes(&modes) {
        Some((_, m)) => State::from_monomial(m),
        None => State::vacuum(),
    }
}

/// A homogeneous state of weight ≤ `budget`: one monomial, plus a second
/// one of the same grade when a few tries find it.
fn random_state(alg: &FreeFieldAlgebra, rng: &mut ChaCha8Rng, budget: i32) -> State {
    let first = random_monomial(alg, rng, budget);
    let m1 = first.terms.keys().next().unwrap().clone();
    let g1 = alg.monomial_grade(&m1);
    let mut s = first.scale(&Scalar::new(rng.gen_range(1..=3), rng.gen_range(1..=2)));
    for _ in 0..20 {
        let t = random_monomial(alg, rng, budget);
        let m2 = t.terms.keys().next().unwrap();
        if *m2 != m1 && alg.monomial_grade(m2) == g1 && alg.monomial_odd(m2) == alg.monomial_odd(&m1) {
            s.add_scaled(&t, &Scalar::int(-rng.gen_range(1..=2)));
            break;
        }
    }
    s
}

/// Commutator formula, translation and vacuum axioms on `cfg.samples`
/// triples drawn from `alg`.
pub fn axiom_sweep(alg: &FreeFieldAlgebra, cfg: &AxiomConfig) -> VerificationReport {
    let mut r = VerificationReport::new("engine-axioms");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let circ = |a: &State, n: i32, b: &State| circle_product(alg, a, n, b);
    let fmt = |s: &State| alg.format_state(s);
    let vac = State::vacuum();
    let mut nontrivial = 0;
    for i in 0..cfg.samples {
        // redraw a few times to avoid trivially commuting triples
        let mut draw = || {
            let a = random_state(alg, &mut rng, cfg.max_weight);
            let b = random_state(alg, &mut rng, cfg.max_weight - weight(alg, &a));
            let c = random_state(alg, &mut rng, cfg.max_weight - weight(alg, &a) - weight(alg, &b));
            let m = rng.gen_range(-2..=2);
            let n = rng.gen_range(-2..=2);
            let sign = Scalar::sign(odd(alg, &a) && odd(alg, &b));
            let lhs = circ(&a, m, &circ(&b, n, &c)).minus(&circ(&b, n, &circ(&a, m, &c)).scale(&sign));
            (a, b, c, m, n, lhs)
        };
        let mut t = draw();
        for _ in 0..40 {
            if !t.5.is_zero() {
                break;
            }
            t = draw();
        }
        let (a, b, c, m, n, lhs) = t;
        let k = rng.gen_range(0..=2);
        if !lhs.is_zero() {
            nontrivial += 1;
        }
        let mut rhs = State::zero();
        for p in 0..=(weight(alg, &a) + weight(alg, &b) + 1) {
            let ab = circ(&a, p, &b);
            if !ab.is_zero() {
                rhs.add_scaled(&circ(&ab, m + n - p, &c), &binomial(m as i64, p as i64));
            }
        }
        r.residual(format!("sample {i}: commutator m={m} n={n}"), fmt(&lhs.minus(&rhs)));

        let da = derivative(alg, &a);
        let t1 = circ(&da, n, &b).plus(&circ(&a, n - 1, &b).scale(&Scalar::int(n as i64)));
        r.residual(format!("sample {i}: (Da) o{n} b = -{n} a o{} b", n - 1), fmt(&t1));
        let t2 = derivative(alg, &circ(&a, n, &b)).minus(&circ(&da, n, &b)).minus(&circ(&a, n, &derivative(alg, &b)));
        r.residual(format!("sample {i}: D(a o{n} b) Leibniz"), fmt(&t2));

        r.residual(format!("sample {i}: a o-1 |0> = a"), fmt(&circ(&a, -1, &vac).minus(&a)));
        r.residual(format!("sample {i}: |0> o-1 a = a"), fmt(&circ(&vac, -1, &a).minus(&a)));
        r.residual(format!("sample {i}: a o{k} |0> = 0"), fmt(&circ(&a, k, &vac)));
        r.residual(format!("sample {i}: |0> o{k} b = 0"), fmt(&circ(&vac, k, &b)));
    }
    r.note(format!("{nontrivial} of {} commutator samples have a nonzero left side", cfg.samples));
    r
}
