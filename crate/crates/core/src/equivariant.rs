//! sg[t] module structures, tensoring with W(g), the chiral Weil and small
//! models, and Mathai–Quillen conjugation.

use std::collections::BTreeSet;

use crate::algebra::{FreeFieldAlgebra, GenId, Grading, State};
use crate::cohomology::{enumerate_basis, subspace, ComplexSpec, GradedPieceKey, Operator, SpaceSpec, Subspace};
use crate::engine;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraData;
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::weil::WeilAlgebra;

#[derive(Clone, Debug)]
pub struct HalfTva {
    pub g: State,
    /// L = d g
    pub l: State,
}

#[derive(Clone, Debug)]
pub struct ChiralFree {
    /// θ_{e^i} for the dual basis covectors
    pub theta: Vec<State>,
}

#[derive(Clone, Debug)]
pub struct SgtModule {
    pub name: String,
    pub lie: LieAlgebraData,
    pub ambient: FreeFieldAlgebra,
    /// the differential is the zero mode of this state
    pub d: State,
    pub iota: Vec<State>,
    pub l: Vec<State>,
    pub half_tva: Option<HalfTva>,
    pub chiral_free: Option<ChiralFree>,
    /// weight-one elements Γ_{e^i}; defaults to g∘₀θ
    pub gamma_conn: Option<Vec<State>>,
    /// cap on the aux grade needed to make pieces finite
    pub aux_cap: Option<i32>,
}

impl SgtModule {
    /// ℂ with the zero action.
    pub fn trivial(lie: &LieAlgebraData) -> Self {
        let n = lie.dim;
        SgtModule {
            name: "C".into(),
            lie: lie.clone(),
            ambient: FreeFieldAlgebra::new("C"),
            d: State::zero(),
            iota: vec![State::zero(); n],
            l: vec![State::zero(); n],
            half_tva: None,
            chiral_free: None,
            gamma_conn: None,
            aux_cap: None,
        }
    }

    /// W(g) with ι = b, L = Θ_W.
    pub fn from_weil(w: &WeilAlgebra) -> Self {
        let n = w.dim();
        SgtModule {
            name: format!("W({})", w.lie.name),
            lie: w.lie.clone(),
            ambient: w.algebra.clone(),
            d: w.d_current.clone(),
            iota: (0..n).map(|i| w.gen_state(w.b(i))).collect(),
            l: w.theta_w.clone(),
            half_tva: None,
            chiral_free: Some(ChiralFree { theta: (0..n).map(|i| w.gen_state(w.c(i))).collect() }),
            gamma_conn: None,
            aux_cap: None,
        }
    }

    pub fn differential(&self, s: &State) -> State {
        engine::circle_product(&self.ambient, &self.d, 0, s)
    }

    pub fn d_operator(&self) -> Operator {
        Operator::zero_mode(self.d.clone())
    }

    /// Γ_{e^i}, from explicit data or as g∘₀θ.
    pub fn connection(&self) -> Option<Vec<State>> {
        if let Some(gc) = &self.gamma_conn {
            return Some(gc.clone());
        }
        let g = &self.half_tva.as_ref()?.g;
        let theta = &self.chiral_free.as_ref()?.theta;
        Some(theta.iter().map(|t| engine::circle_product(&self.ambient, g, 0, t)).collect())
    }

    fn space(&self) -> SpaceSpec<'_> {
        SpaceSpec { algebra: &self.ambient, allowed: None, aux_cap: self.aux_cap }
    }

    pub fn complex(&self, kind: SubspaceKind) -> ComplexSpec<'_> {
        let constraints = match kind {
            SubspaceKind::All => vec![],
            SubspaceKind::Horizontal => self.iota.clone(),
            SubspaceKind::Invariant => self.l.clone(),
            SubspaceKind::Basic => self.iota.iter().chain(self.l.iter()).cloned().collect(),
        };
        ComplexSpec {
            space: self.space(),
            d: self.d_operator(),
            constraints,
            model: format!("{}:{}", self.name, kind.label()),
        }
    }

    pub fn subspace_basis(&self, kind: SubspaceKind, key: GradedPieceKey) -> Result<Subspace> {
        subspace(&self.complex(kind), key)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceKind {
    All,
    Horizontal,
    Invariant,
    Basic,
}

impl SubspaceKind {
    pub fn label(&self) -> &'static str {
        match self {
            SubspaceKind::All => "all",
            SubspaceKind::Horizontal => "hor",
            SubspaceKind::Invariant => "inv",
            SubspaceKind::Basic => "bas",
        }
    }
}

/// W(g)⊗A with the diagonal structure.
#[derive(Clone, Debug)]
pub struct WeilTensor {
    pub weil: WeilAlgebra,
    pub a: SgtModule,
    pub total: SgtModule,
    /// generator offset of the A factor
    pub offset: GenId,
}

pub fn tensor_with_weil(w: &WeilAlgebra, a: &SgtModule) -> Result<WeilTensor> {
    if w.lie.canonical_form() != a.lie.canonical_form() {
        return Err(Error::LieMismatch(format!("{} vs {}", w.lie.name, a.lie.name)));
    }
    let label = format!("{}⊗{}", w.algebra.label, a.ambient.label);
    let ambient = w.algebra.tensor(&a.ambient, "A_", &label)?;
    let offset = w.algebra.len() as GenId;
    let up = |s: &State| s.map_gens(|g| g + offset);
    let n = w.dim();
    let total = SgtModule {
        name: format!("W⊗{}", a.name),
        lie: a.lie.clone(),
        d: w.d_current.plus(&up(&a.d)),
        iota: (0..n).map(|i| w.gen_state(w.b(i)).plus(&up(&a.iota[i]))).collect(),
        l: (0..n).map(|i| w.theta_w[i].plus(&up(&a.l[i]))).collect(),
        half_tva: None,
        chiral_free: None,
        gamma_conn: None,
        aux_cap: a.aux_cap,
        ambient,
    };
    Ok(WeilTensor { weil: w.clone(), a: a.clone(), total, offset })
}

impl WeilTensor {
    pub fn alg(&self) -> &FreeFieldAlgebra {
        &self.total.ambient
    }

    /// w ↦ w⊗1
    pub fn kappa(&self, w: &State) -> State {
        w.clone()
    }

    /// a ↦ 1⊗a
    pub fn pi(&self, a: &State) -> State {
        let off = self.offset;
        a.map_gens(|g| g + off)
    }

    pub fn mul(&self, x: &State, y: &State) -> State {
        engine::wick(self.alg(), x, y)
    }

    pub fn d(&self, s: &State) -> State {
        self.total.differential(s)
    }

    /// φ = Σ_i c^{e^i} ⊗ ι_{ξ_i}
    pub fn phi(&self) -> State {
        let w = &self.weil;
        let mut s = State::zero();
        for i in 0..w.dim() {
            s.add_assign(&self.mul(&w.gen_state(w.c(i)), &self.pi(&self.a.iota[i])));
        }
        s
    }

    /// Φ^{±1} applied to a state.
    pub fn mathai_quillen(&self, s: &State, inverse: bool) -> Result<State> {
        let phi = self.phi();
        let sign = if inverse { Scalar::int(-1) } else { Scalar::one() };
        let alg = self.alg();
        let cap = s.terms.keys().map(|m| m.0.len()).max().unwrap_or(0) + 2 * self.weil.dim() + 2;
        let cap = cap.max(64);
        engine::exp_apply(s, cap, |x| engine::circle_product(alg, &phi, 0, x).scale(&sign))
    }

    fn gens_where(&self, keep: impl Fn(GenId) -> bool) -> BTreeSet<GenId> {
        (0..self.alg().len() as GenId).filter(|g| keep(*g)).collect()
    }

    fn is_weil_family(&self, g: GenId, fam: &str) -> bool {
        g < self.offset && self.alg().gen(g).family == fam
    }

    /// ⟨γ⟩⊗A
    pub fn cartan_generators(&self) -> BTreeSet<GenId> {
        self.gens_where(|g| g >= self.offset || self.is_weil_family(g, "gamma"))
    }

    /// ⟨γ,c⟩⊗A
    pub fn small_weil_generators(&self) -> BTreeSet<GenId> {
        self.gens_where(|g| g >= self.offset || self.is_weil_family(g, "gamma") || self.is_weil_family(g, "c"))
    }

    /// (W⊗A)_bas with d_W + d_A.
    pub fn weil_model(&self) -> ComplexSpec<'_> {
        self.total.complex(SubspaceKind::Basic)
    }

    /// d_T = d_A − Σ (γ^{e^i}⊗ι_{ξ_i})(0)
    pub fn d_cartan_state(&self) -> State {
        let w = &self.weil;
        let mut s = self.pi(&self.a.d);
        for i in 0..w.dim() {
            let t = self.mul(&w.gen_state(w.gamma(i)), &self.pi(&self.a.iota[i]));
            s.add_scaled(&t, &Scalar::int(-1));
        }
        s
    }

    /// (⟨γ⟩⊗A_inv, d_T), for abelian g.
    pub fn small_cartan(&self) -> Result<ComplexSpec<'_>> {
        if !self.weil.lie.is_abelian() {
            return Err(Error::NotAbelian);
        }
        Ok(ComplexSpec {
            space: SpaceSpec { algebra: self.alg(), allowed: Some(self.cartan_generators()), aux_cap: self.total.aux_cap },
            d: Operator::zero_mode(self.d_cartan_state()),
            constraints: self.a.l.iter().map(|x| self.pi(x)).collect(),
            model: format!("{}:small-cartan", self.total.name),
        })
    }

    /// ((⟨γ,c⟩⊗A)_bas, d_W + d_A), for abelian g.
    pub fn small_weil(&self) -> Result<ComplexSpec<'_>> {
        if !self.weil.lie.is_abelian() {
            return Err(Error::NotAbelian);
        }
        Ok(ComplexSpec {
            space: SpaceSpec {
                algebra: self.alg(),
                allowed: Some(self.small_weil_generators()),
                aux_cap: self.total.aux_cap,
            },
            d: self.total.d_operator(),
            constraints: self.total.iota.iter().chain(self.total.l.iter()).cloned().collect(),
            model: format!("{}:small-weil", self.total.name),
        })
    }

    /// The weight-one form of Φ(d_W + d_A)Φ⁻¹ as a sum of mode products.
    pub fn d_g_weight_one(&self) -> Operator {
        let w = &self.weil;
        let mut op = self.total.d_operator();
        for i in 0..w.dim() {
            let gam = w.gen_state(w.gamma(i));
            let c = w.gen_state(w.c(i));
            let iota = self.pi(&self.a.iota[i]);
            let l = self.pi(&self.a.l[i]);
            for (p, q) in [(0, -1), (-1, 0), (-2, 1)] {
                op = op.plus(Operator::product(Scalar::int(-1), vec![(gam.clone(), p), (iota.clone(), q)]));
                op = op.plus(Operator::product(Scalar::one(), vec![(c.clone(), p), (l.clone(), q)]));
            }
        }
        op
    }

    /// Matrix-level comparison of d_G with Φ(d_W + d_A)Φ⁻¹ on `states`.
    pub fn check_d_g(&self, states: &[State]) -> Result<Vec<State>> {
        let alg = self.alg();
        let op = self.d_g_weight_one();
        let mut res = Vec::new();
        for s in states {
            let lhs = op.apply(alg, s);
            let rhs = self.mathai_quillen(&self.d(&self.mathai_quillen(s, true)?), false)?;
            res.push(lhs.minus(&rhs));
        }
        Ok(res)
    }
}

fn grade_weight(alg: &FreeFieldAlgebra, s: &State) -> Option<i32> {
    match alg.grade(s) {
        Grading::Homogeneous(g) => Some(g.weight),
        _ => None,
    }
}

/// All basis monomials up to the given weight and degree bound, used as
/// probe states in the invariant suite.
pub fn probe_states(m: &SgtModule, max_weight: i32, max_abs_degree: i32) -> Vec<State> {
    let space = SpaceSpec { algebra: &m.ambient, allowed: None, aux_cap: m.aux_cap.or(Some(2)) };
    let mut out = Vec::new();
    for wt in 0..=max_weight {
        for deg in -max_abs_degree..=max_abs_degree {
            if let Ok(ms) = enumerate_basis(&space, GradedPieceKey::new(deg, wt)) {
                out.extend(ms.into_iter().map(State::from_monomial));
            }
        }
    }
    out
}

/// The O(sg) relations, d² = 0, L = dι, and optional half-TVA and
/// chiral-free data, checked on generators and probe pieces.
pub fn invariant_suite(m: &SgtModule, probe_weight: i32) -> VerificationReport {
    let mut r = VerificationReport::new(&format!("invariants:{}", m.name));
    let alg = &m.ambient;
    let lie = &m.lie;
    let n = lie.dim;
    let cp = |a: &State, k: i32, b: &State| engine::circle_product(alg, a, k, b);
    let show = |s: &State| alg.format_state(s);
    let combo = |v: &[Scalar], xs: &[State]| {
        let mut s = State::zero();
        for (c, x) in v.iter().zip(xs) {
            s.add_scaled(x, c);
        }
        s
    };
    let probes = probe_states(m, probe_weight, 3);
    let mut bad_d2 = State::zero();
    for s in &probes {
        let dd = m.differential(&m.differential(s));
        if !dd.is_zero() {
            bad_d2 = dd;
            break;
        }
    }
    r.residual("d^2 = 0", show(&bad_d2));
    for i in 0..n {
        r.residual(format!("L{} = d iota{}", i + 1, i + 1), show(&m.l[i].minus(&m.differential(&m.iota[i]))));
    }
    for i in 0..n {
        for j in 0..n {
            let br = lie.bracket(&lie.unit(i), &lie.unit(j));
            let (tag_i, tag_j) = (i + 1, j + 1);
            for p in 0..3 {
                r.residual(format!("iota{tag_i} o{p} iota{tag_j}"), show(&cp(&m.iota[i], p, &m.iota[j])));
            }
            r.residual(format!("L{tag_i} o0 L{tag_j}"), show(&cp(&m.l[i], 0, &m.l[j]).minus(&combo(&br, &m.l))));
            r.residual(
                format!("L{tag_i} o0 iota{tag_j}"),
                show(&cp(&m.l[i], 0, &m.iota[j]).minus(&combo(&br, &m.iota))),
            );
            for p in 1..3 {
                r.residual(format!("L{tag_i} o{p} iota{tag_j}"), show(&cp(&m.l[i], p, &m.iota[j])));
            }
            r.residual(format!("L{tag_i} o2 L{tag_j}"), show(&cp(&m.l[i], 2, &m.l[j])));
            // the central term of L∘₁L is measured, not asserted
            let c1 = cp(&m.l[i], 1, &m.l[j]);
            if !c1.is_zero() {
                r.note(format!("L{tag_i} o1 L{tag_j} = {}", show(&c1)));
            }
        }
    }
    // ρ(dx) = [d, ρ(x)] for the generators ι: [d, ι(p)] = L(p) on probes
    for i in 0..n {
        let mut worst = State::zero();
        for s in probes.iter().take(200) {
            for p in 0..2 {
                let lhs = m.differential(&cp(&m.iota[i], p, s)).plus(&cp(&m.iota[i], p, &m.differential(s)));
                let diff = lhs.minus(&cp(&m.l[i], p, s));
                if !diff.is_zero() {
                    worst = diff;
                }
            }
        }
        r.residual(format!("[d, iota{}(p)] = L{}(p)", i + 1, i + 1), show(&worst));
    }
    if let Some(h) = &m.half_tva {
        r.absorb("", half_tva_checks(m, h, &probes));
    }
    if let Some(cf) = &m.chiral_free {
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { State::vacuum() } else { State::zero() };
                r.residual(
                    format!("iota{} o0 theta{}", i + 1, j + 1),
                    show(&cp(&m.iota[i], 0, &cf.theta[j]).minus(&want)),
                );
                r.residual(format!("iota{} o1 theta{}", i + 1, j + 1), show(&cp(&m.iota[i], 1, &cf.theta[j])));
                // ad*(ξ_i) e^j = −Σ_k f_{ik}^j e^k
                let coad: Vec<Scalar> = (0..n).map(|k| -lie.f[i][k][j].clone()).collect();
                r.residual(
                    format!("L{} o0 theta{}", i + 1, j + 1),
                    show(&cp(&m.l[i], 0, &cf.theta[j]).minus(&combo(&coad, &cf.theta))),
                );
                r.residual(format!("L{} o1 theta{}", i + 1, j + 1), show(&cp(&m.l[i], 1, &cf.theta[j])));
            }
        }
    }
    r
}

pub fn half_tva_checks(m: &SgtModule, h: &HalfTva, probes: &[State]) -> VerificationReport {
    let mut r = VerificationReport::new("half-tva");
    let alg = &m.ambient;
    let cp = |a: &State, k: i32, b: &State| engine::circle_product(alg, a, k, b);
    let show = |s: &State| alg.format_state(s);
    r.residual("L = d g", show(&h.l.minus(&m.differential(&h.g))));
    for (i, iota) in m.iota.iter().enumerate() {
        let wt = grade_weight(alg, &h.g).unwrap_or(0) + 1;
        for p in 0..=wt {
            r.residual(format!("iota{} o{p} g", i + 1), show(&cp(iota, p, &h.g)));
        }
        r.residual(format!("L o0 iota{}", i + 1), show(&cp(&h.l, 0, iota).minus(&engine::derivative(alg, iota))));
        r.residual(format!("L o1 iota{}", i + 1), show(&cp(&h.l, 1, iota).minus(iota)));
        for p in 2..4 {
            r.residual(format!("L o{p} iota{}", i + 1), show(&cp(&h.l, p, iota)));
        }
        r.residual(format!("L{} o0 g", i + 1), show(&cp(&m.l[i], 0, &h.g)));
        r.residual(format!("L{} o0 L", i + 1), show(&cp(&m.l[i], 0, &h.l)));
    }
    let (mut bad0, mut bad1) = (State::zero(), State::zero());
    for s in probes {
        let Some(wt) = grade_weight(alg, s) else { continue };
        let e0 = cp(&h.l, 0, s).minus(&engine::derivative(alg, s));
        let e1 = cp(&h.l, 1, s).minus(&s.scale(&Scalar::int(wt as i64)));
        if !e0.is_zero() {
            bad0 = e0;
        }
        if !e1.is_zero() {
            bad1 = e1;
        }
    }
    r.residual("L o0 = D on probes", show(&bad0));
    r.residual("L o1 = weight on probes", show(&bad1));
    r
}

/// Γ identities for a half-TVA with connection forms, in dual-basis form:
/// L_η∘₀Γ_{ξ'} = Γ_{ad*(η)ξ'}, L_η∘₁Γ_{ξ'} = ⟨ξ',η⟩, ι_η∘₀Γ = ι_η∘₁Γ = 0,
/// ι_η∘₀dΓ_{ξ'} = Γ_{ad*(η)ξ'}, ι_η∘₁dΓ_{ξ'} = ⟨ξ',η⟩.
pub fn gamma_identities(m: &SgtModule, gam: &[State]) -> VerificationReport {
    let mut r = VerificationReport::new("gamma-identities");
    let alg = &m.ambient;
    let lie = &m.lie;
    let n = lie.dim;
    let cp = |a: &State, k: i32, b: &State| engine::circle_product(alg, a, k, b);
    let show = |s: &State| alg.format_state(s);
    for e in 0..n {
        for j in 0..n {
            let mut coad = State::zero();
            for k in 0..n {
                coad.add_scaled(&gam[k], &-lie.f[e][k][j].clone());
            }
            let pair = if e == j { State::vacuum() } else { State::zero() };
            let dg = m.differential(&gam[j]);
            let t = format!("{},{}", e + 1, j + 1);
            r.residual(format!("L o0 Gamma [{t}]"), show(&cp(&m.l[e], 0, &gam[j]).minus(&coad)));
            r.residual(format!("L o1 Gamma [{t}]"), show(&cp(&m.l[e], 1, &gam[j]).minus(&pair)));
            r.residual(format!("iota o0 Gamma [{t}]"), show(&cp(&m.iota[e], 0, &gam[j])));
            r.residual(format!("iota o1 Gamma [{t}]"), show(&cp(&m.iota[e], 1, &gam[j])));
            r.residual(format!("iota o0 dGamma [{t}]"), show(&cp(&m.iota[e], 0, &dg).minus(&coad)));
            r.residual(format!("iota o1 dGamma [{t}]"), show(&cp(&m.iota[e], 1, &dg).minus(&pair)));
        }
    }
    r
}

/// Horizontal for W⊗A: killed by the modes p = 0..=weight of every ι field.
pub fn is_chiral_horizontal(t: &SgtModule, s: &State) -> bool {
    is_killed(&t.ambient, &t.iota, s)
}

pub fn is_chiral_invariant(t: &SgtModule, s: &State) -> bool {
    is_killed(&t.ambient, &t.l, s)
}

fn is_killed(alg: &FreeFieldAlgebra, fields: &[State], s: &State) -> bool {
    let wt = s.terms.keys().map(|m| alg.monomial_grade(m).weight).max().unwrap_or(0);
    fields.iter().all(|x| (0..=wt).all(|p| engine::circle_product(alg, x, p, s).is_zero()))
}
