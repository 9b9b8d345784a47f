//! Mode action, circle products, derivative and singular OPE for free fields.
//!
//! For a monomial `a = x_1(-1-k_1) ... x_r(-1-k_r)|0⟩` the field of `a` is the
//! normally ordered product of the `∂^{k_i} x_i / k_i!`, so
//!
//!   a(n) = Σ_{p_1+...+p_r = n-r+1} N[ A_1(p_1) ... A_r(p_r) ],
//!
//! with `A_i(p) = C(-m-1, k_i) x_i(m)`, `m = p - k_i`, and `N` moving the
//! annihilation modes (m ≥ 0) to the right with Koszul signs. This holds for
//! every integer n, negative ones included.

use crate::algebra::{FreeFieldAlgebra, GenId, Mode, Monomial, State};
use crate::error::{Error, Result};
use crate::linalg::{SparseMatrixQ, SparseVec};
use crate::scalar::{binomial, factorial, Scalar};

/// `x(m)` applied to a state.
pub fn apply_mode(alg: &FreeFieldAlgebra, x: GenId, m: i32, s: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in &s.terms {
        apply_mode_monomial(alg, x, m, mono, c, &mut out);
    }
    out
}

fn apply_mode_monomial(alg: &FreeFieldAlgebra, x: GenId, m: i32, mono: &Monomial, c: &Scalar, out: &mut State) {
    if m <= -1 {
        let mut modes = Vec::with_capacity(mono.0.len() + 1);
        modes.push(Mode::new(x, m));
        modes.extend_from_slice(&mono.0);
        if let Some((s, mm)) = alg.normalize_modes(&modes) {
            out.add_term(mm, &(&s * c));
        }
        return;
    }
    let x_odd = alg.is_odd(x);
    let partners = alg.partners(x);
    if partners.is_empty() {
        return;
    }
    let mut odd_seen = false;
    for (j, y) in mono.0.iter().enumerate() {
        if m + y.idx == -1 {
            if let Some((_, k)) = partners.iter().find(|(g, _)| *g == y.gen) {
                let mut rest = mono.0.clone();
                rest.remove(j);
                let mut v = k * c;
                if x_odd && odd_seen {
                    v = -v;
                }
                out.add_term(Monomial(rest), &v);
            }
        }
        if alg.is_odd(y.gen) {
            odd_seen = !odd_seen;
        }
    }
}

/// Checked variant used by the expression layer.
pub fn apply_mode_checked(alg: &FreeFieldAlgebra, x: GenId, m: i32, s: &State) -> Result<State> {
    if x as usize >= alg.len() {
        return Err(Error::UnknownGenerator(format!("#{x}")));
    }
    Ok(apply_mode(alg, x, m, s))
}

/// Annihilation modes of `x` that hit something in `s`.
fn candidate_modes(alg: &FreeFieldAlgebra, x: GenId, s: &State) -> Vec<i32> {
    let partners = alg.partners(x);
    let mut out: Vec<i32> = Vec::new();
    for mono in s.terms.keys() {
        for y in &mono.0 {
            if partners.iter().any(|(g, _)| *g == y.gen) {
                let m = -1 - y.idx;
                if m >= 0 && !out.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Compositions of `total` into `parts` nonnegative pieces.
fn compositions(total: i32, parts: usize, f: &mut dyn FnMut(&[i32])) {
    fn rec(total: i32, parts: usize, acc: &mut Vec<i32>, f: &mut dyn FnMut(&[i32])) {
        if parts == 1 {
            acc.push(total);
            f(acc);
            acc.pop();
            return;
        }
        for e in 0..=total {
            acc.push(e);
            rec(total - e, parts - 1, acc, f);
            acc.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(total, parts, &mut Vec::new(), f);
}

fn circle_monomial(alg: &FreeFieldAlgebra, a: &Monomial, n: i32, c: &State, out: &mut State) {
    let modes = &a.0;
    let r = modes.len();
    if r == 0 {
        if n == -1 {
            out.add_assign(c);
        }
        return;
    }
    let ks: Vec<i32> = modes.iter().map(|m| -1 - m.idx).collect();
    let total_m = n - r as i32 + 1 - ks.iter().sum::<i32>();
    let max_ann = c.terms.keys().map(|m| m.0.len()).max().unwrap_or(0);
    for mask in 0u32..(1u32 << r) {
        let n_ann = mask.count_ones() as usize;
        if n_ann > max_ann {
            continue;
        }
        // sign of moving annihilators right past later creators
        let mut neg = false;
        for i in 0..r {
            if mask >> i & 1 == 1 && alg.is_odd(modes[i].gen) {
                for j in i + 1..r {
                    if mask >> j & 1 == 0 && alg.is_odd(modes[j].gen) {
                        neg = !neg;
                    }
                }
            }
        }
        // apply annihilators, rightmost first
        let mut stage: Vec<(i32, Scalar, State)> = vec![(0, Scalar::sign(neg), c.clone())];
        for i in (0..r).rev() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let x = modes[i].gen;
            let k = ks[i];
            let mut next = Vec::new();
            for (sum, coef, st) in &stage {
                for m in candidate_modes(alg, x, st) {
                    let img = apply_mode(alg, x, m, st);
                    if img.is_zero() {
                        continue;
                    }
                    // C(-m-1, k) = (-1)^k C(m+k, k)
                    let b = binomial((-m - 1) as i64, k as i64);
                    next.push((sum + m, coef * &b, img));
                }
            }
            stage = next;
            if stage.is_empty() {
                break;
            }
        }
        let creators: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 0).collect();
        let base: i32 = creators.iter().map(|&j| 1 + ks[j]).sum();
        for (sum, coef, st) in &stage {
            let e_total = -base - (total_m - sum);
            if e_total < 0 {
                continue;
            }
            compositions(e_total, creators.len(), &mut |es| {
                let mut cf = coef.clone();
                let mut cmodes = Vec::with_capacity(creators.len());
                for (t, &j) in creators.iter().enumerate() {
                    let k = ks[j];
                    cf = &cf * &binomial((k + es[t]) as i64, k as i64);
                    cmodes.push(Mode::new(modes[j].gen, -1 - k - es[t]));
                }
                for (mono, v) in &st.terms {
                    let mut all = cmodes.clone();
                    all.extend_from_slice(&mono.0);
                    if let Some((s, mm)) = alg.normalize_modes(&all) {
                        out.add_term(mm, &(&(&s * v) * &cf));
                    }
                }
            });
        }
    }
}

/// `a ∘_n b = a(n) b` for every integer n.
pub fn circle_product(alg: &FreeFieldAlgebra, a: &State, n: i32, b: &State) -> State {
    let mut out = State::zero();
    if b.is_zero() {
        return out;
    }
    for (m, c) in &a.terms {
        let mut part = State::zero();
        circle_monomial(alg, m, n, b, &mut part);
        out.add_scaled(&part, c);
    }
    out
}

/// Wick product `:a b: = a ∘_{-1} b`.
pub fn wick(alg: &FreeFieldAlgebra, a: &State, b: &State) -> State {
    circle_product(alg, a, -1, b)
}

/// Translation operator: x(-1-k) ↦ (k+1) x(-2-k), extended as a derivation.
pub fn derivative(alg: &FreeFieldAlgebra, s: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in &s.terms {
        for i in 0..mono.0.len() {
            let mut modes = mono.0.clone();
            let f = Scalar::int(-(modes[i].idx as i64));
            modes[i].idx -= 1;
            if let Some((sg, mm)) = alg.normalize_modes(&modes) {
                out.add_term(mm, &(&(&sg * &f) * c));
            }
        }
    }
    out
}

pub fn derivative_pow(alg: &FreeFieldAlgebra, s: &State, k: u32) -> State {
    let mut out = s.clone();
    for _ in 0..k {
        out = derivative(alg, &out);
    }
    out
}

/// `(∂^k a)/k!`, which equals `a ∘_{-k-1} |0⟩`.
pub fn divided_derivative(alg: &FreeFieldAlgebra, s: &State, k: u32) -> State {
    derivative_pow(alg, s, k).scale(&factorial(k).recip())
}

fn max_weight(alg: &FreeFieldAlgebra, s: &State) -> i32 {
    s.terms.keys().map(|m| alg.monomial_grade(m).weight).max().unwrap_or(0)
}

/// All nonzero `a ∘_p b` with p ≥ 0.
pub fn ope_singular(alg: &FreeFieldAlgebra, a: &State, b: &State) -> Vec<(i32, State)> {
    let top = max_weight(alg, a) + max_weight(alg, b) - 1;
    (0..=top.max(0))
        .filter_map(|p| {
            let s = circle_product(alg, a, p, b);
            (!s.is_zero()).then_some((p, s))
        })
        .collect()
}

/// Ordered basis of a piece: either plain monomials or reduced-echelon states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisTable {
    pub elements: Vec<State>,
    /// pivot monomial of each element (its own monomial for monomial bases)
    pub pivots: Vec<Monomial>,
}

impl BasisTable {
    pub fn from_monomials(monos: Vec<Monomial>) -> Self {
        BasisTable {
            elements: monos.iter().cloned().map(State::from_monomial).collect(),
            pivots: monos,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates of `s`, or an error if `s` is outside the span.
    pub fn coordinates(&self, s: &State) -> Result<SparseVec> {
        let mut rest = s.clone();
        let mut out = Vec::new();
        for (j, p) in self.pivots.iter().enumerate() {
            let c = rest.coeff(p);
            if c.is_zero() {
                continue;
            }
            let lead = self.elements[j].coeff(p);
            let f = &c / &lead;
            rest.add_scaled(&self.elements[j], &(-f.clone()));
            out.push((j, f));
        }
        if !rest.is_zero() {
            return Err(Error::GradeMismatch("state outside the codomain basis".into()));
        }
        Ok(out)
    }

    pub fn state_of(&self, v: &SparseVec) -> State {
        let mut s = State::zero();
        for (j, c) in v {
            s.add_scaled(&self.elements[*j], c);
        }
        s
    }
}

/// Column j holds the coordinates of `a ∘_n domain[j]` in `codomain`.
pub fn operator_matrix(
    alg: &FreeFieldAlgebra,
    a: &State,
    n: i32,
    domain: &BasisTable,
    codomain: &BasisTable,
) -> Result<SparseMatrixQ> {
    let cols = domain
        .elements
        .iter()
        .map(|e| codomain.coordinates(&circle_product(alg, a, n, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrixQ::from_columns(codomain.len(), cols))
}

/// `Σ (sign·op)^k / k!`, detecting nilpotency on the fly.
pub fn exp_operator(op: &SparseMatrixQ, sign: i64) -> Result<SparseMatrixQ> {
    assert_eq!(op.rows, op.cols, "exp of non-square matrix");
    let n = op.rows;
    let x = op.scale(&Scalar::int(sign));
    let mut acc = SparseMatrixQ::identity(n);
    let mut term = SparseMatrixQ::identity(n);
    for k in 1..=(n + 1) {
        term = x.mul(&term).scale(&Scalar::new(1, k as i64));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::NotNilpotent)
}

/// Nilpotent exponential applied directly to a state: Σ f^k(s)/k!.
pub fn exp_apply(s: &State, max_iter: usize, f: impl Fn(&State) -> State) -> Result<State> {
    let mut acc = s.clone();
    let mut term = s.clone();
    for k in 1..=max_iter {
        term = f(&term).scale(&Scalar::new(1, k as i64));
        if term.is_zero() {
            return Ok(acc);
        }
        acc.add_assign(&term);
    }
    Err(Error::NotNilpotent)
}
