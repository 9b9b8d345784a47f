//! Graded pieces, filtered subspaces and exact cohomology of free-field
//! complexes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{FreeFieldAlgebra, GenId, Mode, Monomial, State};
use crate::engine;
use crate::error::{Error, Result};
use crate::linalg::{kernel_from_rows, Echelon, SparseMatrixQ, SparseVec};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedPieceKey {
    pub degree: i32,
    pub weight: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aux: Option<i32>,
}

impl GradedPieceKey {
    pub fn new(degree: i32, weight: i32) -> Self {
        GradedPieceKey { degree, weight, aux: None }
    }

    pub fn shift_degree(&self, by: i32) -> Self {
        GradedPieceKey { degree: self.degree + by, ..*self }
    }
}

impl std::fmt::Display for GradedPieceKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "deg {} wt {}", self.degree, self.weight)?;
        if let Some(a) = self.aux {
            write!(f, " aux {a}")?;
        }
        Ok(())
    }
}

/// Which monomials make up the ambient space.
#[derive(Clone, Debug)]
pub struct SpaceSpec<'a> {
    pub algebra: &'a FreeFieldAlgebra,
    /// restrict to monomials in these generators
    pub allowed: Option<BTreeSet<GenId>>,
    /// keep only monomials of aux grade at most this
    pub aux_cap: Option<i32>,
}

impl<'a> SpaceSpec<'a> {
    pub fn full(algebra: &'a FreeFieldAlgebra) -> Self {
        SpaceSpec { algebra, allowed: None, aux_cap: None }
    }

    fn allows(&self, g: GenId) -> bool {
        self.allowed.as_ref().map_or(true, |a| a.contains(&g))
    }
}

/// All monomials of the piece in canonical order.
pub fn enumerate_basis(space: &SpaceSpec, key: GradedPieceKey) -> Result<Vec<Monomial>> {
    let alg = space.algebra;
    if key.weight < 0 {
        return Ok(Vec::new());
    }
    let aux_bound = key.aux.or(space.aux_cap);
    let gens: Vec<GenId> = (0..alg.len() as GenId).filter(|g| space.allows(*g)).collect();
    let max_abs_deg = gens.iter().map(|g| alg.gen(*g).degree.abs()).max().unwrap_or(0);
    let odd_zero: i32 = gens
        .iter()
        .filter(|g| alg.is_odd(**g) && alg.gen(**g).weight == 0)
        .map(|g| alg.gen(*g).degree.abs())
        .sum();
    // every positive-weight mode moves the degree by at most max_abs_deg
    let deg_budget = key.degree.abs() + key.weight * max_abs_deg + odd_zero;
    let even_zero: Vec<GenId> = gens
        .iter()
        .copied()
        .filter(|g| !alg.is_odd(*g) && alg.gen(*g).weight == 0)
        .collect();
    let has_pos = even_zero.iter().any(|g| alg.gen(*g).degree > 0);
    let has_neg = even_zero.iter().any(|g| alg.gen(*g).degree < 0);
    let mut modes: Vec<(Mode, Option<i32>)> = Vec::new();
    for &g in &gens {
        let spec = alg.gen(g);
        for k in 0..=(key.weight - spec.weight).max(-1) {
            let m = Mode::new(g, -1 - k);
            let wt = spec.weight + k;
            let bound = if spec.odd {
                Some(1)
            } else if wt > 0 {
                Some(key.weight / wt)
            } else {
                let by_aux = match (aux_bound, spec.aux) {
                    (Some(cap), a) if a > 0 => Some(cap.max(0) / a),
                    _ => None,
                };
                let by_deg = if spec.degree != 0 && !(has_pos && has_neg) {
                    Some(deg_budget / spec.degree.abs())
                } else {
                    None
                };
                match (by_aux, by_deg) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            };
            if bound.is_none() {
                return Err(Error::InfinitePiece(format!(
                    "{} at {key}: unbounded multiplicity of {}",
                    alg.label,
                    alg.format_monomial(&Monomial(vec![m]))
                )));
            }
            modes.push((m, bound));
        }
    }
    modes.sort_by_key(|(m, _)| *m);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate_rec(alg, &modes, 0, key, aux_bound, 0, 0, 0, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    alg: &FreeFieldAlgebra,
    modes: &[(Mode, Option<i32>)],
    at: usize,
    key: GradedPieceKey,
    aux_bound: Option<i32>,
    wt: i32,
    deg: i32,
    aux: i32,
    cur: &mut Vec<Mode>,
    out: &mut Vec<Monomial>,
) {
    if at == modes.len() {
        let aux_ok = match key.aux {
            Some(a) => aux == a,
            None => aux_bound.map_or(true, |c| aux <= c),
        };
        if wt == key.weight && deg == key.degree && aux_ok {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    let (m, bound) = modes[at];
    let g = alg.mode_grade(m);
    let len = cur.len();
    let mut mult = 0;
    loop {
        let (w2, d2, a2) = (wt + mult * g.weight, deg + mult * g.degree, aux + mult * g.aux);
        if w2 > key.weight || aux_bound.is_some_and(|c| a2 > c && g.aux > 0) {
            break;
        }
        enumerate_rec(alg, modes, at + 1, key, aux_bound, w2, d2, a2, cur, out);
        mult += 1;
        if bound.is_some_and(|b| mult > b) {
            break;
        }
        cur.push(m);
    }
    cur.truncate(len);
}

/// A finite sum of products of modes, applied right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Operator {
    pub terms: Vec<(Scalar, Vec<(State, i32)>)>,
}

impl Operator {
    pub fn zero() -> Self {
        Operator::default()
    }

    pub fn mode(a: State, n: i32) -> Self {
        Operator { terms: vec![(Scalar::one(), vec![(a, n)])] }
    }

    pub fn zero_mode(a: State) -> Self {
        Operator::mode(a, 0)
    }

    pub fn product(c: Scalar, factors: Vec<(State, i32)>) -> Self {
        Operator { terms: vec![(c, factors)] }
    }

    pub fn plus(mut self, other: Operator) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scale(mut self, c: &Scalar) -> Self {
        for t in &mut self.terms {
            t.0 = &t.0 * c;
        }
        self
    }

    pub fn apply(&self, alg: &FreeFieldAlgebra, s: &State) -> State {
        let mut out = State::zero();
        for (c, factors) in &self.terms {
            let mut v = s.clone();
            for (a, n) in factors.iter().rev() {
                if v.is_zero() {
                    break;
                }
                v = engine::circle_product(alg, a, *n, &v);
            }
            out.add_scaled(&v, c);
        }
        out
    }

    /// Stable textual form, used in cache keys.
    pub fn describe(&self, alg: &FreeFieldAlgebra) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, f)| {
                let fs: Vec<String> = f.iter().map(|(a, n)| format!("[{}]({n})", alg.format_state(a))).collect();
                format!("{c}*{}", fs.join(""))
            })
            .collect();
        parts.join(" + ")
    }
}

/// A differential on a space, restricted to the joint kernel of the
/// non-negative modes of the constraint fields.
#[derive(Clone, Debug)]
pub struct ComplexSpec<'a> {
    pub space: SpaceSpec<'a>,
    pub d: Operator,
    pub constraints: Vec<State>,
    /// identifies the model in cache keys and reports
    pub model: String,
}

impl<'a> ComplexSpec<'a> {
    pub fn algebra(&self) -> &'a FreeFieldAlgebra {
        self.space.algebra
    }

    pub fn fingerprint(&self) -> String {
        let alg = self.algebra();
        let mut s = String::new();
        s.push_str(&alg.canonical_form());
        s.push_str(&format!("\nallowed={:?}\naux_cap={:?}\n", self.space.allowed, self.space.aux_cap));
        s.push_str(&format!("d={}\n", self.d.describe(alg)));
        for c in &self.constraints {
            s.push_str(&format!("constraint={}\n", alg.format_state(c)));
        }
        s.push_str(&format!("model={}\n", self.model));
        s
    }
}

/// A piece with a subspace given by an echelon basis in monomial coordinates.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub key: GradedPieceKey,
    pub monomials: Vec<Monomial>,
    pub index: BTreeMap<Monomial, usize>,
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn state(&self, v: &SparseVec) -> State {
        let mut s = State::zero();
        for (i, c) in v {
            s.add_term(self.monomials[*i].clone(), c);
        }
        s
    }

    pub fn states(&self) -> Vec<State> {
        self.basis.iter().map(|v| self.state(v)).collect()
    }

    /// Monomial coordinates; fails if `s` leaves the piece.
    pub fn coords(&self, s: &State) -> Result<SparseVec> {
        let mut v = Vec::with_capacity(s.len());
        for (m, c) in &s.terms {
            match self.index.get(m) {
                Some(i) => v.push((*i, c.clone())),
                None => return Err(Error::GradeMismatch(format!("monomial outside piece {}", self.key))),
            }
        }
        v.sort_by_key(|x| x.0);
        Ok(v)
    }

    pub fn contains(&self, s: &State) -> Result<bool> {
        let v = match self.coords(s) {
            Ok(v) => v,
            Err(_) => return Ok(false),
        };
        Ok(Echelon::from_rows(self.basis.clone()).contains(&v))
    }
}

/// Column images of `f` on `inputs`, written as rows of the transposed
/// map so that kernels can be read off directly.
fn image_rows(images: &[State]) -> (Vec<SparseVec>, usize) {
    let mut row_of: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for s in images {
        for m in s.terms.keys() {
            let next = row_of.len();
            row_of.entry(m).or_insert(next);
        }
    }
    let mut rows: Vec<SparseVec> = vec![Vec::new(); row_of.len()];
    for (j, s) in images.iter().enumerate() {
        for (m, c) in &s.terms {
            rows[row_of[m]].push((j, c.clone()));
        }
    }
    (rows, row_of.len())
}

/// Kernel of `x ↦ (f(x))` for a linear `f` given on basis elements.
fn kernel_of(images: &[State]) -> Vec<SparseVec> {
    let (rows, _) = image_rows(images);
    kernel_from_rows(rows, images.len())
}

fn combine(vectors: &[SparseVec], on_units: &[State]) -> Vec<State> {
    vectors
        .iter()
        .map(|v| {
            let mut s = State::zero();
            for (i, c) in v {
                s.add_scaled(&on_units[*i], c);
            }
            s
        })
        .collect()
}

pub fn subspace(spec: &ComplexSpec, key: GradedPieceKey) -> Result<Subspace> {
    let alg = spec.algebra();
    let monomials = enumerate_basis(&spec.space, key)?;
    let index: BTreeMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monomials.len();
    let basis = if spec.constraints.is_empty() {
        (0..n).map(|i| vec![(i, Scalar::one())]).collect()
    } else {
        // A mode x(p) of a weight-h field lowers weight by p + 1 - h, so
        // p ≤ weight + h - 1 exhausts the modes that can act nontrivially.
        let mut rows: Vec<SparseVec> = Vec::new();
        for x in &spec.constraints {
            let h = match alg.grade(x) {
                crate::algebra::Grading::Homogeneous(g) => g.weight,
                crate::algebra::Grading::Zero => continue,
                crate::algebra::Grading::Inhomogeneous => {
                    return Err(Error::GradeMismatch("inhomogeneous constraint field".into()))
                }
            };
            for p in 0..(key.weight + h).max(0) {
                let images: Vec<State> = monomials
                    .iter()
                    .map(|m| engine::circle_product(alg, x, p, &State::from_monomial(m.clone())))
                    .collect();
                rows.extend(image_rows(&images).0);
            }
        }
        kernel_from_rows(rows, n)
    };
    Ok(Subspace { key, monomials, index, basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub key: GradedPieceKey,
    pub dim_piece: usize,
    pub dim_subspace: usize,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub dim_h: usize,
    pub representatives: Vec<State>,
}

impl CohomologyReport {
    pub fn to_json(&self, alg: &FreeFieldAlgebra) -> Value {
        json!({
            "key": self.key,
            "dimPiece": self.dim_piece,
            "dimSubspace": self.dim_subspace,
            "dimKernel": self.dim_kernel,
            "dimImage": self.dim_image,
            "dimH": self.dim_h,
            "representatives": self.representatives.iter().map(|s| alg.format_state(s)).collect::<Vec<_>>(),
        })
    }
}

/// Everything needed at one key: the subspace, d on its basis, and the
/// image of the subspace one degree down.
pub struct PieceData {
    pub sub: Subspace,
    pub basis_states: Vec<State>,
    pub d_images: Vec<State>,
    pub lower_images: Vec<State>,
}

pub fn piece_data(spec: &ComplexSpec, key: GradedPieceKey) -> Result<PieceData> {
    let alg = spec.algebra();
    let sub = subspace(spec, key)?;
    let basis_states = sub.states();
    let d_images: Vec<State> = basis_states.iter().map(|s| spec.d.apply(alg, s)).collect();
    let lower = subspace(spec, key.shift_degree(-1))?;
    let lower_images: Vec<State> = lower.states().iter().map(|s| spec.d.apply(alg, s)).collect();
    Ok(PieceData { sub, basis_states, d_images, lower_images })
}

pub fn cohomology_at(spec: &ComplexSpec, key: GradedPieceKey) -> Result<CohomologyReport> {
    let pd = piece_data(spec, key)?;
    let kernel = kernel_of(&pd.d_images);
    let cycles = combine(&kernel, &pd.basis_states);
    let mut image = Echelon::new();
    for s in &pd.lower_images {
        image.insert(&pd.sub.coords(s)?);
    }
    let dim_image = image.rank();
    let mut representatives = Vec::new();
    for z in &cycles {
        if image.insert(&pd.sub.coords(z)?) {
            representatives.push(z.clone());
        }
    }
    Ok(CohomologyReport {
        key,
        dim_piece: pd.sub.monomials.len(),
        dim_subspace: pd.sub.dim(),
        dim_kernel: kernel.len(),
        dim_image,
        dim_h: kernel.len() - dim_image,
        representatives,
    })
}

/// A basis of the closed elements of the subspace at `key`.
pub fn cycles(spec: &ComplexSpec, key: GradedPieceKey) -> Result<Vec<State>> {
    let alg = spec.algebra();
    let sub = subspace(spec, key)?;
    let states = sub.states();
    let images: Vec<State> = states.iter().map(|s| spec.d.apply(alg, s)).collect();
    Ok(combine(&kernel_of(&images), &states))
}

/// Solve d x = target inside the subspace one degree down.
pub fn is_exact(spec: &ComplexSpec, key: GradedPieceKey, target: &State) -> Result<Option<State>> {
    let alg = spec.algebra();
    if target.is_zero() {
        return Ok(Some(State::zero()));
    }
    let sub = subspace(spec, key)?;
    if !sub.contains(target)? {
        return Err(Error::NotInSubspace);
    }
    if !spec.d.apply(alg, target).is_zero() {
        return Err(Error::NotClosed);
    }
    let lower = subspace(spec, key.shift_degree(-1))?;
    let lower_states = lower.states();
    let cols = lower_states
        .iter()
        .map(|s| sub.coords(&spec.d.apply(alg, s)))
        .collect::<Result<Vec<_>>>()?;
    let m = SparseMatrixQ::from_columns(sub.monomials.len(), cols);
    Ok(m.solve(&sub.coords(target)?).map(|x| {
        let mut w = State::zero();
        for (j, c) in &x {
            w.add_scaled(&lower_states[*j], c);
        }
        w
    }))
}

/// Matrix of `op` from H at `from` to H at `to`, in the bases given by the
/// reports' representatives.
pub fn operator_on_cohomology(
    spec: &ComplexSpec,
    op: &Operator,
    from: &CohomologyReport,
    to: &CohomologyReport,
) -> Result<SparseMatrixQ> {
    let alg = spec.algebra();
    let target = piece_data(spec, to.key)?;
    let mut cols: Vec<State> = target.lower_images.clone();
    let n_img = cols.len();
    cols.extend(to.representatives.iter().cloned());
    let m = SparseMatrixQ::from_columns(
        target.sub.monomials.len(),
        cols.iter().map(|s| target.sub.coords(s)).collect::<Result<Vec<_>>>()?,
    );
    // well-defined: exact goes to exact
    let source = piece_data(spec, from.key)?;
    let img_only = SparseMatrixQ::from_columns(
        target.sub.monomials.len(),
        target.lower_images.iter().map(|s| target.sub.coords(s)).collect::<Result<Vec<_>>>()?,
    );
    for s in &source.lower_images {
        let v = op.apply(alg, s);
        let c = target.sub.coords(&v).map_err(|_| Error::NotWellDefined)?;
        if img_only.solve(&c).is_none() {
            return Err(Error::NotWellDefined);
        }
    }
    let mut out_cols = Vec::new();
    for r in &from.representatives {
        let v = op.apply(alg, r);
        let c = target.sub.coords(&v).map_err(|_| Error::NotWellDefined)?;
        let x = m.solve(&c).ok_or(Error::NotWellDefined)?;
        out_cols.push(x.into_iter().filter(|(j, _)| *j >= n_img).map(|(j, c)| (j - n_img, c)).collect());
    }
    Ok(SparseMatrixQ::from_columns(to.representatives.len(), out_cols))
}
