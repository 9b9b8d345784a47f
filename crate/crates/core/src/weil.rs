//! The semi-infinite Weil algebra W(g) with its currents and differential.

use crate::algebra::{FreeFieldAlgebra, GenId, GeneratorSpec, Grade, Mode, Monomial, State};
use crate::engine;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebraData, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    pub lie: LieAlgebraData,
    pub algebra: FreeFieldAlgebra,
    /// rows: coefficients of the dual basis vectors ξ^i
    pub dual: Matrix,
    pub theta_e: Vec<State>,
    pub theta_s: Vec<State>,
    pub theta_w: Vec<State>,
    /// zero mode of this state is d_W
    pub d_current: State,
    pub lambda: Scalar,
}

/// Candidate coefficients of the exterior current in the differential, in
/// search order.
pub const LAMBDA_CANDIDATES: [(i64, i64); 5] = [(1, 2), (0, 1), (-1, 2), (1, 1), (-1, 1)];

/// Outcome of testing one candidate differential.
#[derive(Clone, Debug)]
pub struct CandidateResult {
    pub lambda: Scalar,
    pub failures: Vec<String>,
}

impl WeilAlgebra {
    pub fn build(lie: &LieAlgebraData) -> Result<Self> {
        let report = lie.validate();
        if !report.passed {
            return Err(Error::InvalidLieData(report.summary()));
        }
        let (mut w, results) = Self::search(lie)?;
        let passing: Vec<&CandidateResult> = results.iter().filter(|r| r.failures.is_empty()).collect();
        let chosen = passing
            .iter()
            .find(|r| r.lambda == Scalar::new(1, 2))
            .or(passing.first())
            .ok_or(Error::NoValidDifferential)?;
        w.set_lambda(chosen.lambda.clone());
        Ok(w)
    }

    /// Build W(g) and test every candidate differential.
    pub fn search(lie: &LieAlgebraData) -> Result<(Self, Vec<CandidateResult>)> {
        let mut w = Self::skeleton(lie)?;
        let mut results = Vec::new();
        for (n, d) in LAMBDA_CANDIDATES {
            let lam = Scalar::new(n, d);
            w.set_lambda(lam.clone());
            results.push(CandidateResult { lambda: lam, failures: w.pinned_failures() });
        }
        Ok((w, results))
    }

    fn skeleton(lie: &LieAlgebraData) -> Result<Self> {
        let n = lie.dim;
        let dual = lie.dual_basis()?;
        let mut alg = FreeFieldAlgebra::new(&format!("W({})", lie.name));
        let idx = |i: usize| (i + 1).to_string();
        for i in 0..n {
            alg.add_generator(GeneratorSpec::new("b", &idx(i), true, 1, -1))?;
        }
        for i in 0..n {
            alg.add_generator(GeneratorSpec::new("c", &idx(i), true, 0, 1))?;
        }
        for i in 0..n {
            alg.add_generator(GeneratorSpec::new("beta", &idx(i), false, 1, -2))?;
        }
        for i in 0..n {
            alg.add_generator(GeneratorSpec::new("gamma", &idx(i), false, 0, 2))?;
        }
        let n32 = n as GenId;
        for i in 0..n32 {
            alg.add_contraction(i, n32 + i, Scalar::one())?;
            alg.add_contraction(2 * n32 + i, 3 * n32 + i, Scalar::one())?;
        }
        let mut w = WeilAlgebra {
            lie: lie.clone(),
            algebra: alg,
            dual,
            theta_e: Vec::new(),
            theta_s: Vec::new(),
            theta_w: Vec::new(),
            d_current: State::zero(),
            lambda: Scalar::new(1, 2),
        };
        for a in 0..n {
            let mut te = State::zero();
            let mut ts = State::zero();
            for i in 0..n {
                let br = lie.bracket(&lie.unit(a), &lie.unit(i));
                // c before b: with this ordering Θ_E^ξ ∘₀ b^η = b^{[ξ,η]}
                let cb = w.algebra.fock_multiply(&w.gen_state(w.c(i)), &w.b_vec(&br));
                te.add_scaled(&cb, &Scalar::int(-1));
                let bg = w.algebra.fock_multiply(&w.beta_vec(&br), &w.gen_state(w.gamma(i)));
                ts.add_scaled(&bg, &Scalar::int(-1));
            }
            w.theta_w.push(te.plus(&ts));
            w.theta_e.push(te);
            w.theta_s.push(ts);
        }
        Ok(w)
    }

    fn set_lambda(&mut self, lambda: Scalar) {
        let n = self.lie.dim;
        let alg = &self.algebra;
        let mut d = State::zero();
        for i in 0..n {
            let cur = self.theta_s[i].plus(&self.theta_e[i].scale(&lambda));
            d.add_assign(&engine::wick(alg, &cur, &self.gen_state(self.c(i))));
            d.add_assign(&engine::wick(alg, &self.gen_state(self.gamma(i)), &self.gen_state(self.b(i))));
        }
        self.d_current = d;
        self.lambda = lambda;
    }

    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn b(&self, i: usize) -> GenId {
        i as GenId
    }
    pub fn c(&self, i: usize) -> GenId {
        (self.dim() + i) as GenId
    }
    pub fn beta(&self, i: usize) -> GenId {
        (2 * self.dim() + i) as GenId
    }
    pub fn gamma(&self, i: usize) -> GenId {
        (3 * self.dim() + i) as GenId
    }

    pub fn gen_state(&self, g: GenId) -> State {
        self.algebra.generator_state(g)
    }

    fn combo(&self, family: fn(&Self, usize) -> GenId, coeffs: &[Scalar]) -> State {
        let mut s = State::zero();
        for (i, c) in coeffs.iter().enumerate() {
            s.add_scaled(&self.gen_state(family(self, i)), c);
        }
        s
    }

    /// b^v for v ∈ g in basis coordinates.
    pub fn b_vec(&self, v: &[Scalar]) -> State {
        self.combo(Self::b, v)
    }
    pub fn beta_vec(&self, v: &[Scalar]) -> State {
        self.combo(Self::beta, v)
    }
    /// c^φ for a covector φ given by its values φ(ξ_j).
    pub fn c_cov(&self, phi: &[Scalar]) -> State {
        self.combo(Self::c, phi)
    }
    pub fn gamma_cov(&self, phi: &[Scalar]) -> State {
        self.combo(Self::gamma, phi)
    }
    /// The covector B(v, ·).
    pub fn flat(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim()).map(|j| self.lie.form(v, &self.lie.unit(j))).collect()
    }
    /// c^v for v ∈ g, through the form.
    pub fn c_vec(&self, v: &[Scalar]) -> State {
        self.c_cov(&self.flat(v))
    }
    pub fn gamma_vec(&self, v: &[Scalar]) -> State {
        self.gamma_cov(&self.flat(v))
    }

    pub fn differential(&self, s: &State) -> State {
        engine::circle_product(&self.algebra, &self.d_current, 0, s)
    }

    fn mul(&self, a: &State, b: &State) -> State {
        engine::wick(&self.algebra, a, b)
    }

    fn d(&self, s: &State) -> State {
        engine::derivative(&self.algebra, s)
    }

    /// g^W = β^{ξ_i} ∂c^{ξ^i}
    pub fn g_w(&self) -> State {
        let mut s = State::zero();
        for i in 0..self.dim() {
            s.add_assign(&self.mul(&self.gen_state(self.beta(i)), &self.d(&self.gen_state(self.c(i)))));
        }
        s
    }

    /// L^W = d_W(g^W)
    pub fn virasoro_lw(&self) -> State {
        self.differential(&self.g_w())
    }

    /// Θ_S^{ξ_i} b^{ξ^i}, dual basis taken for the Killing form when it is
    /// nondegenerate. Only that normalization makes **L** horizontal; with
    /// the trace form of ℂ² on sl2, b∘₁**L** = −3b.
    pub fn theta_s_b(&self) -> State {
        let dual = self.casimir_dual();
        let mut s = State::zero();
        for (i, v) in dual.iter().enumerate() {
            s.add_assign(&self.mul(&self.theta_s[i], &self.b_vec(v)));
        }
        s
    }

    fn casimir_dual(&self) -> Matrix {
        let kf = self.lie.killing_form();
        match crate::lie::mat_inverse(&kf) {
            Some(inv) if self.dim() > 0 => {
                (0..self.dim()).map(|i| (0..self.dim()).map(|m| inv[m][i].clone()).collect()).collect()
            }
            _ => self.dual.clone(),
        }
    }

    /// **L** = d_W(Θ_S^{ξ_i} b^{ξ^i} + β^{ξ_i} ∂c^{ξ^i})
    pub fn big_l(&self) -> State {
        self.differential(&self.theta_s_b().plus(&self.g_w()))
    }

    /// **q** = γ^{ξ_i} ∂γ^{ξ^i}
    pub fn q_class(&self) -> State {
        let mut s = State::zero();
        for i in 0..self.dim() {
            let gi = self.gamma_vec(&self.lie.unit(i));
            s.add_assign(&self.mul(&gi, &self.d(&self.gen_state(self.gamma(i)))));
        }
        s
    }

    /// Expected right-hand sides of the generator identities.
    pub fn expected_dc(&self, k: usize) -> State {
        let lie = &self.lie;
        let mut s = self.gen_state(self.gamma(k));
        for j in 0..self.dim() {
            let br = lie.bracket(&lie.unit(j), &self.dual[k]);
            let t = self.mul(&self.c_vec(&br), &self.gen_state(self.c(j)));
            s.add_scaled(&t, &Scalar::new(-1, 2));
        }
        s
    }

    pub fn expected_dgamma(&self, k: usize) -> State {
        let lie = &self.lie;
        let mut s = State::zero();
        for j in 0..self.dim() {
            let br = lie.bracket(&lie.unit(j), &self.dual[k]);
            s.add_assign(&self.mul(&self.gamma_vec(&br), &self.gen_state(self.c(j))));
        }
        s
    }

    /// γ^{ξ_i} ∂c^{ξ^i}
    pub fn gamma_dc(&self) -> State {
        let mut s = State::zero();
        for i in 0..self.dim() {
            let gi = self.gamma_vec(&self.lie.unit(i));
            s.add_assign(&self.mul(&gi, &self.d(&self.gen_state(self.c(i)))));
        }
        s
    }

    /// Names of pinned identities that fail for the current candidate.
    pub fn pinned_failures(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.dim();
        for k in 0..n {
            if self.differential(&self.gen_state(self.c(k))) != self.expected_dc(k) {
                bad.push(format!("d c{}", k + 1));
            }
            if self.differential(&self.gen_state(self.gamma(k))) != self.expected_dgamma(k) {
                bad.push(format!("d gamma{}", k + 1));
            }
            if self.differential(&self.gen_state(self.b(k))) != self.theta_w[k] {
                bad.push(format!("d b{} = ThetaW", k + 1));
            }
        }
        if self.differential(&self.gamma_dc()) != self.q_class() {
            bad.push("d(gamma Dc)".into());
        }
        // d² on all generators and their first derivatives
        for g in 0..self.algebra.len() as GenId {
            for idx in [-1, -2] {
                let s = State::from_monomial(Monomial(vec![Mode::new(g, idx)]));
                if !self.differential(&self.differential(&s)).is_zero() {
                    bad.push(format!("d^2 {}({idx})", self.algebra.gen(g).name()));
                }
            }
        }
        bad
    }


    pub fn grade_of(&self, s: &State) -> Option<Grade> {
        match self.algebra.grade(s) {
            crate::algebra::Grading::Homogeneous(g) => Some(g),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_generator_identities() {
        let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
        assert!(w.theta_w[0].is_zero());
        assert_eq!(w.differential(&w.gen_state(w.c(0))), w.gen_state(w.gamma(0)));
        assert!(w.differential(&w.gen_state(w.gamma(0))).is_zero());
        // β∘₀γ = 1 and d c = γ leave no choice here
        assert_eq!(w.differential(&w.gen_state(w.beta(0))), w.gen_state(w.b(0)).neg());
        assert!(w.differential(&w.gen_state(w.b(0))).is_zero());
        assert_eq!(w.big_l(), w.virasoro_lw());
    }

    #[test]
    fn sl2_has_a_unique_candidate() {
        let (_, results) = WeilAlgebra::search(&LieAlgebraData::sl2()).unwrap();
        let passing: Vec<_> = results.iter().filter(|r| r.failures.is_empty()).collect();
        assert_eq!(passing.len(), 1, "{results:?}");
        assert_eq!(passing[0].lambda, Scalar::new(1, 2));
    }

    #[test]
    fn sl2_currents_close_and_act_by_adjoint() {
        let w = WeilAlgebra::build(&LieAlgebraData::sl2()).unwrap();
        let lie = &w.lie;
        for a in 0..3 {
            for b in 0..3 {
                let br = lie.bracket(&lie.unit(a), &lie.unit(b));
                let mut want = State::zero();
                for (k, x) in br.iter().enumerate() {
                    want.add_scaled(&w.theta_w[k], x);
                }
                assert_eq!(engine::circle_product(&w.algebra, &w.theta_w[a], 0, &w.theta_w[b]), want);
                let bb = w.gen_state(w.b(b));
                assert_eq!(engine::circle_product(&w.algebra, &w.theta_w[a], 0, &bb), w.b_vec(&br));
                let beta = w.gen_state(w.beta(b));
                assert_eq!(engine::circle_product(&w.algebra, &w.theta_w[a], 0, &beta), w.beta_vec(&br));
            }
        }
    }

    #[test]
    fn b_against_gw_is_a_pure_double_pole() {
        let w = WeilAlgebra::build(&LieAlgebraData::sl2()).unwrap();
        for i in 0..3 {
            let ope = engine::ope_singular(&w.algebra, &w.gen_state(w.b(i)), &w.g_w());
            assert_eq!(ope, vec![(1, w.gen_state(w.beta(i)))]);
        }
    }
}
