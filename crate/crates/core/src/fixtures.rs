//! Polynomial free-field models: translations, linear representations,
//! trivial actions, W(g) as a module, and a two-group structure.

use serde::{Deserialize, Serialize};

use crate::algebra::{FreeFieldAlgebra, GenId, GeneratorSpec, State};
use crate::engine;
use crate::equivariant::{invariant_suite, ChiralFree, HalfTva, SgtModule};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebraData, RepresentationData};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::weil::WeilAlgebra;

/// Q(V) on n quadruples b,c,β,γ with d = (Σβ^i c^i)(0).
#[derive(Clone, Debug)]
pub struct FreeQ {
    pub algebra: FreeFieldAlgebra,
    pub n: usize,
}

impl FreeQ {
    pub fn new(label: &str, n: usize) -> Result<Self> {
        let mut a = FreeFieldAlgebra::new(label);
        for i in 1..=n {
            a.add_generator(GeneratorSpec::new("b", &i.to_string(), true, 1, -1))?;
        }
        for i in 1..=n {
            a.add_generator(GeneratorSpec::new("c", &i.to_string(), true, 0, 1).with_aux(1))?;
        }
        for i in 1..=n {
            a.add_generator(GeneratorSpec::new("beta", &i.to_string(), false, 1, 0))?;
        }
        for i in 1..=n {
            a.add_generator(GeneratorSpec::new("gamma", &i.to_string(), false, 0, 0).with_aux(1))?;
        }
        for i in 0..n {
            a.add_contraction(i as GenId, (n + i) as GenId, Scalar::one())?;
            a.add_contraction((2 * n + i) as GenId, (3 * n + i) as GenId, Scalar::one())?;
        }
        Ok(FreeQ { algebra: a, n })
    }

    pub fn b(&self, i: usize) -> State {
        self.algebra.generator_state(i as GenId)
    }
    pub fn c(&self, i: usize) -> State {
        self.algebra.generator_state((self.n + i) as GenId)
    }
    pub fn beta(&self, i: usize) -> State {
        self.algebra.generator_state((2 * self.n + i) as GenId)
    }
    pub fn gamma(&self, i: usize) -> State {
        self.algebra.generator_state((3 * self.n + i) as GenId)
    }
    pub fn mul(&self, x: &State, y: &State) -> State {
        engine::wick(&self.algebra, x, y)
    }
    pub fn del(&self, x: &State) -> State {
        engine::derivative(&self.algebra, x)
    }

    /// Σ β^i c^i, whose zero mode is d_Q.
    pub fn d_current(&self) -> State {
        let mut s = State::zero();
        for i in 0..self.n {
            s.add_assign(&self.mul(&self.beta(i), &self.c(i)));
        }
        s
    }

    /// g = Σ b^i ∂γ^i
    pub fn homotopy(&self) -> State {
        let mut s = State::zero();
        for i in 0..self.n {
            s.add_assign(&self.mul(&self.b(i), &self.del(&self.gamma(i))));
        }
        s
    }
}

/// Translations on ℝⁿ: ι_i = b^i, L_i = β^i, θ = c, g = Σ b^i ∂γ^i.
pub fn poly_translation(n: usize) -> Result<SgtModule> {
    if n == 0 {
        return Err(Error::Spec("poly_translation needs n >= 1".into()));
    }
    let q = FreeQ::new(&format!("Qpoly{n}"), n)?;
    let d = q.d_current();
    let g = q.homotopy();
    let l = engine::circle_product(&q.algebra, &d, 0, &g);
    Ok(SgtModule {
        name: format!("PolyTranslation({n})"),
        lie: LieAlgebraData::abelian(n),
        d,
        iota: (0..n).map(|i| q.b(i)).collect(),
        l: (0..n).map(|i| q.beta(i)).collect(),
        half_tva: Some(HalfTva { g, l }),
        chiral_free: Some(ChiralFree { theta: (0..n).map(|i| q.c(i)).collect() }),
        gamma_conn: None,
        aux_cap: Some(2),
        ambient: q.algebra,
    })
}

/// Which weight-one elements serve as Γ_ξ on Q(V).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaChoice {
    /// :β^{ρ(ξ)x_i} γ^{x_i'}:
    BetaGamma,
    /// :b^{ρ(ξ)x_i} c^{x_i'}:
    BC,
}

/// Q(V) for a linear representation, paired with the trace form of the
/// representation.
#[derive(Clone, Debug)]
pub struct LinearRep {
    pub module: SgtModule,
    pub rep: RepresentationData,
    /// Γ_{ξ_a} for the basis vectors
    pub gamma_vec: Vec<State>,
    /// the two printed shapes of L_ξ, for comparison with d_Q ι_ξ
    pub l_display_first: Vec<State>,
    pub l_display_second: Vec<State>,
}

/// ρ(ξ)x_i = Σ_j ξ_ij x_j, so ξ_ij is the transpose of the stored matrix.
fn xi_entry(m: &[Vec<Scalar>], i: usize, j: usize) -> Scalar {
    m[j][i].clone()
}

pub fn linear_rep(lie: &LieAlgebraData, rep_name: &str, choice: GammaChoice) -> Result<LinearRep> {
    let rep = lie
        .reps
        .get(rep_name)
        .cloned()
        .ok_or_else(|| Error::Spec(format!("{} has no representation '{rep_name}'", lie.name)))?;
    let vr = lie.validate_rep(&rep);
    if !vr.passed {
        return Err(Error::InvalidLieData(vr.summary()));
    }
    let mut lie_t = lie.clone();
    lie_t.b = rep.trace_form();
    let dual = lie_t.dual_basis()?;
    let nv = rep.dim_v;
    let q = FreeQ::new(&format!("Q({}:{rep_name})", lie.name), nv)?;
    let d = q.d_current();
    let mut iota = Vec::new();
    let mut l = Vec::new();
    let (mut disp1, mut disp2, mut gvec) = (Vec::new(), Vec::new(), Vec::new());
    for m in &rep.matrices {
        let mut io = State::zero();
        let (mut a1, mut a2, mut gm) = (State::zero(), State::zero(), State::zero());
        for i in 0..nv {
            for j in 0..nv {
                let x = xi_entry(m, i, j);
                if x.is_zero() {
                    continue;
                }
                let neg = -x.clone();
                io.add_scaled(&q.mul(&q.gamma(i), &q.b(j)), &neg);
                a1.add_scaled(&q.mul(&q.gamma(i), &q.beta(j)).plus(&q.mul(&q.c(i), &q.b(j))), &neg);
                // β^{ρ(ξ)x_i} γ^{x_i'} = ξ_ij β^j γ^i
                a2.add_scaled(&q.mul(&q.beta(j), &q.gamma(i)), &neg);
                a2.add_scaled(&q.mul(&q.b(j), &q.c(i)), &x);
                let term = match choice {
                    GammaChoice::BetaGamma => q.mul(&q.beta(j), &q.gamma(i)),
                    GammaChoice::BC => q.mul(&q.b(j), &q.c(i)),
                };
                gm.add_scaled(&term, &x);
            }
        }
        l.push(engine::circle_product(&q.algebra, &d, 0, &io));
        iota.push(io);
        disp1.push(a1);
        disp2.push(a2);
        gvec.push(gm);
    }
    // Γ_{ξ^i} = Σ_m D[i][m] Γ_{ξ_m}
    let gamma_cov: Vec<State> = (0..lie.dim)
        .map(|i| {
            let mut s = State::zero();
            for (mm, c) in dual[i].iter().enumerate() {
                s.add_scaled(&gvec[mm], c);
            }
            s
        })
        .collect();
    let module = SgtModule {
        name: format!("Q({}:{rep_name})", lie.name),
        lie: lie_t,
        d,
        iota,
        l,
        half_tva: None,
        chiral_free: None,
        gamma_conn: Some(gamma_cov),
        aux_cap: Some(2),
        ambient: q.algebra,
    };
    Ok(LinearRep { module, rep, gamma_vec: gvec, l_display_first: disp1, l_display_second: disp2 })
}

pub fn trivial_action(lie: &LieAlgebraData) -> SgtModule {
    SgtModule::trivial(lie)
}

pub fn weil_as_module(lie: &LieAlgebraData) -> Result<SgtModule> {
    let w = WeilAlgebra::build(lie)?;
    let mut m = SgtModule::from_weil(&w);
    m.name = format!("Wmod({})", lie.name);
    Ok(m)
}

/// An sg[t] module for G×T where G acts trivially and T acts on W(t).
#[derive(Clone, Debug)]
pub struct TwoGroup {
    pub g: LieAlgebraData,
    pub t: LieAlgebraData,
    /// basis of g first, then t
    pub full: LieAlgebraData,
    pub module: SgtModule,
}

impl TwoGroup {
    pub fn g_dim(&self) -> usize {
        self.g.dim
    }
}

pub fn two_group(g_rank: usize, t_rank: usize) -> Result<TwoGroup> {
    let g = LieAlgebraData::abelian(g_rank);
    let t = LieAlgebraData::abelian(t_rank);
    let mut full = LieAlgebraData::direct_sum(&g, &t);
    full.name = format!("t{g_rank}+t{t_rank}");
    let wt = weil_as_module(&t)?;
    let mut iota = vec![State::zero(); g_rank];
    iota.extend(wt.iota.iter().cloned());
    let mut l = vec![State::zero(); g_rank];
    l.extend(wt.l.iter().cloned());
    let module = SgtModule {
        name: format!("Wmod(t{t_rank}) over t{g_rank}+t{t_rank}"),
        lie: full.clone(),
        ambient: wt.ambient.clone(),
        d: wt.d.clone(),
        iota,
        l,
        half_tva: None,
        chiral_free: None,
        gamma_conn: None,
        aux_cap: None,
    };
    Ok(TwoGroup { g, t, full, module })
}

/// `{"kind": ..., "params": {...}}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FixtureSpec {
    pub kind: String,
    #[serde(default)]
    pub params: FixtureParams,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct FixtureParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaChoice>,
    /// ranks of the two factors
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(usize, usize)>,
}

impl FixtureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<SgtModule> {
        let p = &self.params;
        let lie = || LieAlgebraData::load(p.lie.as_deref().unwrap_or("t1"));
        match self.kind.as_str() {
            "poly_translation" => poly_translation(p.n.unwrap_or(1)),
            "linear_rep" => Ok(linear_rep(
                &lie()?,
                p.rep.as_deref().unwrap_or("fundamental"),
                p.gamma.unwrap_or(GammaChoice::BetaGamma),
            )?
            .module),
            "trivial_action" => Ok(trivial_action(&lie()?)),
            "weil_as_module" => weil_as_module(&lie()?),
            "two_group" => {
                let (a, b) = p.split.unwrap_or((1, 1));
                Ok(two_group(a, b)?.module)
            }
            k => Err(Error::Spec(format!("unknown fixture kind '{k}'"))),
        }
    }
}

/// The invariant suite every fixture must pass before a theorem runs.
pub fn check_fixture(m: &SgtModule) -> VerificationReport {
    invariant_suite(m, 1)
}
