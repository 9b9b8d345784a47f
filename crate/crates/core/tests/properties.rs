use proptest::prelude::*;

use chiralis::expr::{parse_expr, EvalContext, Expr, ExprKind};
use chiralis::lie::LieAlgebraData;
use chiralis::weil::WeilAlgebra;
use chiralis::{FreeFieldAlgebra, Mode, Monomial, Scalar, State};

fn sl2() -> WeilAlgebra {
    WeilAlgebra::build(&LieAlgebraData::sl2()).unwrap()
}

fn modes_strategy(n_gens: u32) -> impl Strategy<Value = Vec<Mode>> {
    prop::collection::vec((0..n_gens, -3i32..=-1), 0..4).prop_map(|v| v.into_iter().map(|(g, i)| Mode::new(g, i)).collect())
}

fn state_of(alg: &FreeFieldAlgebra, terms: &[(Vec<Mode>, i64)]) -> State {
    let mut s = State::zero();
    for (modes, c) in terms {
        if let Some((sg, m)) = alg.normalize_modes(modes) {
            s.add_term(m, &(&sg * &Scalar::int(*c)));
        }
    }
    s
}

fn states_strategy(n_gens: u32) -> impl Strategy<Value = Vec<(Vec<Mode>, i64)>> {
    prop::collection::vec((modes_strategy(n_gens), -3i64..=3), 1..4)
}

fn parity(alg: &FreeFieldAlgebra, modes: &[Mode]) -> bool {
    modes.iter().filter(|m| alg.is_odd(m.gen)).count() % 2 == 1
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn fock_product_is_associative(a in states_strategy(12), b in states_strategy(12), c in states_strategy(12)) {
        let w = sl2();
        let alg = &w.algebra;
        let (a, b, c) = (state_of(alg, &a), state_of(alg, &b), state_of(alg, &c));
        let left = alg.fock_multiply(&alg.fock_multiply(&a, &b), &c);
        let right = alg.fock_multiply(&a, &alg.fock_multiply(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn fock_product_is_supercommutative(x in modes_strategy(12), y in modes_strategy(12)) {
        let w = sl2();
        let alg = &w.algebra;
        let (a, b) = (state_of(alg, &[(x.clone(), 1)]), state_of(alg, &[(y.clone(), 1)]));
        let sign = Scalar::sign(parity(alg, &x) && parity(alg, &y));
        prop_assert_eq!(alg.fock_multiply(&a, &b), alg.fock_multiply(&b, &a).scale(&sign));
    }

    #[test]
    fn normalization_is_idempotent(x in modes_strategy(12)) {
        let w = sl2();
        let alg = &w.algebra;
        if let Some((_, m)) = alg.normalize_modes(&x) {
            let again = alg.normalize_modes(&m.0);
            prop_assert_eq!(again, Some((Scalar::one(), m.clone())));
        }
    }

    #[test]
    fn printed_states_parse_back(t in states_strategy(12), num in 1i64..5, den in 1i64..4) {
        let w = sl2();
        let cx = EvalContext::weil(&w);
        let s = state_of(&w.algebra, &t).scale(&Scalar::new(num, den));
        // mixed parity cannot be written down; keep the even or odd part
        let keep_odd = s.terms.keys().next().is_some_and(|m| w.algebra.monomial_odd(m));
        let mut h = State::zero();
        for (m, c) in &s.terms {
            if w.algebra.monomial_odd(m) == keep_odd {
                h.add_term(m.clone(), c);
            }
        }
        let text = w.algebra.format_state(&h);
        prop_assert_eq!(cx.eval_str(&text).unwrap(), h, "{}", text);
    }

    #[test]
    fn expressions_round_trip(e in expr_strategy()) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    let name = prop_oneof![Just("b"), Just("c"), Just("beta"), Just("gamma"), Just("ThetaW")];
    prop_oneof![
        (0i64..7, 1i64..4).prop_map(|(n, d)| Expr::new(ExprKind::Num(Scalar::new(n, d)))),
        Just(Expr::new(ExprKind::Vacuum)),
        Just(Expr::new(ExprKind::Name { name: "LW".into(), index: None, mode: None, arg: None })),
        (name, 1usize..4, prop::option::of(-3i32..3)).prop_map(|(n, i, mode)| Expr::new(ExprKind::Name {
            name: n.into(),
            index: Some(i.to_string()),
            mode,
            arg: None
        })),
    ]
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Wick(b(x), b(y)))),
            (inner.clone(), -2i32..3, inner.clone()).prop_map(move |(x, n, y)| Expr::new(ExprKind::Circle(b(x), n, b(y)))),
            (1u32..4, inner.clone()).prop_map(move |(k, x)| Expr::new(ExprKind::Deriv(k, b(x)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Tensor(b(x), b(y)))),
            (1i64..5, 1i64..3, inner.clone()).prop_map(move |(n, d, x)| Expr::new(ExprKind::Scale(Scalar::new(n, d), b(x)))),
            prop::collection::vec((any::<bool>(), inner.clone()), 1..4).prop_map(|mut v| {
                if v.len() == 1 {
                    v[0].0 = true;
                }
                Expr::new(ExprKind::Sum(v))
            }),
            (1usize..3, -3i32..0, inner).prop_map(move |(i, k, x)| Expr::new(ExprKind::Name {
                name: "gamma".into(),
                index: Some(i.to_string()),
                mode: Some(k),
                arg: Some(b(x)),
            })),
        ]
    })
}

#[test]
fn sample_expressions_evaluate() {
    let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
    let cx = EvalContext::weil(&w);
    let alg = &w.algebra;
    let gamma = State::from_monomial(Monomial(vec![Mode::new(w.gamma(0), -1)]));
    assert_eq!(cx.eval_str("gamma{1}(-1)").unwrap(), gamma);
    let want = chiralis::engine::wick(alg, &w.gen_state(w.beta(0)), &chiralis::engine::derivative(alg, &w.gen_state(w.c(0))));
    assert_eq!(cx.eval_str(":beta{1} D(c{1}):").unwrap(), want);
    assert_eq!(cx.eval_str("gW").unwrap(), want);
    assert_eq!(cx.eval_str("(b{1} @0 c{1})").unwrap(), State::vacuum());
}
