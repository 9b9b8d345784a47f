//! Lie algebra inputs: structure constants, invariant forms, dual bases and
//! representations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationData {
    pub dim_v: usize,
    /// one dim_v × dim_v matrix per Lie basis element
    pub matrices: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    /// f[i][j][k]: [ξ_i, ξ_j] = Σ_k f[i][j][k] ξ_k
    pub f: Vec<Vec<Vec<Scalar>>>,
    /// B[i][j] = B(ξ_i, ξ_j)
    pub b: Matrix,
    pub reps: BTreeMap<String, RepresentationData>,
    /// user assertion; spot-checked against the Killing form
    pub semisimple: bool,
}

fn zero_matrix(n: usize, m: usize) -> Matrix {
    vec![vec![Scalar::zero(); m]; n]
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = zero_matrix(n, m);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                let t = aik * &b[k][j];
                out[i][j] += &t;
            }
        }
    }
    out
}

fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn trace(a: &Matrix) -> Scalar {
    (0..a.len()).fold(Scalar::zero(), |acc, i| &acc + &a[i][i])
}

/// Gauss–Jordan inverse; `None` when singular.
pub fn mat_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let t = &m[c][k] * &f;
                    m[r][k] -= &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl LieAlgebraData {
    pub fn abelian(n: usize) -> Self {
        let mut b = zero_matrix(n, n);
        for (i, row) in b.iter_mut().enumerate() {
            row[i] = Scalar::one();
        }
        LieAlgebraData {
            name: format!("t{n}"),
            dim: n,
            basis: (1..=n).map(|i| format!("x{i}")).collect(),
            f: vec![vec![vec![Scalar::zero(); n]; n]; n],
            b,
            reps: BTreeMap::new(),
            semisimple: false,
        }
    }

    pub fn sl2() -> Self {
        // basis e, f, h
        let n = 3;
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            f[i][j][k] = Scalar::int(v);
            f[j][i][k] = Scalar::int(-v);
        };
        set(0, 1, 2, 1); // [e,f] = h
        set(2, 0, 0, 2); // [h,e] = 2e
        set(2, 1, 1, -2); // [h,f] = -2f
        let s = |v: i64| Scalar::int(v);
        let fund = RepresentationData {
            dim_v: 2,
            matrices: vec![
                vec![vec![s(0), s(1)], vec![s(0), s(0)]],
                vec![vec![s(0), s(0)], vec![s(1), s(0)]],
                vec![vec![s(1), s(0)], vec![s(0), s(-1)]],
            ],
        };
        let mut data = LieAlgebraData {
            name: "sl2".into(),
            dim: 3,
            basis: vec!["e".into(), "f".into(), "h".into()],
            f,
            b: zero_matrix(3, 3),
            reps: BTreeMap::new(),
            semisimple: true,
        };
        data.b = fund.trace_form();
        let adj = data.adjoint();
        data.reps.insert("fundamental".into(), fund);
        data.reps.insert("adjoint".into(), adj);
        data
    }

    /// Built-in algebras: `t<n>`, `sl2`, `sl2+sl2`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "sl2" => Ok(Self::sl2()),
            "sl2+sl2" | "sl2xsl2" => {
                let mut d = Self::direct_sum(&Self::sl2(), &Self::sl2());
                d.name = "sl2+sl2".into();
                Ok(d)
            }
            _ => {
                if let Some(n) = name.strip_prefix('t').and_then(|r| r.parse::<usize>().ok()) {
                    if n >= 1 {
                        return Ok(Self::abelian(n));
                    }
                }
                Err(Error::Spec(format!("unknown built-in Lie algebra '{name}'")))
            }
        }
    }

    /// Load a built-in name or a JSON spec file path.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Ok(d) = Self::builtin(name_or_path) {
            return Ok(d);
        }
        let text = std::fs::read_to_string(name_or_path)
            .map_err(|e| Error::Spec(format!("cannot read Lie spec '{name_or_path}': {e}")))?;
        Self::from_json(&text)
    }

    /// Block direct sum; basis of `a` first.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let n = a.dim + b.dim;
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for i in 0..a.dim {
            for j in 0..a.dim {
                for k in 0..a.dim {
                    f[i][j][k] = a.f[i][j][k].clone();
                }
            }
        }
        let o = a.dim;
        for i in 0..b.dim {
            for j in 0..b.dim {
                for k in 0..b.dim {
                    f[o + i][o + j][o + k] = b.f[i][j][k].clone();
                }
            }
        }
        let mut bm = zero_matrix(n, n);
        for i in 0..a.dim {
            for j in 0..a.dim {
                bm[i][j] = a.b[i][j].clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                bm[o + i][o + j] = b.b[i][j].clone();
            }
        }
        let mut basis: Vec<String> = a.basis.iter().map(|s| format!("{s}_1")).collect();
        basis.extend(b.basis.iter().map(|s| format!("{s}_2")));
        let mut reps = BTreeMap::new();
        for (name, ra) in &a.reps {
            if let Some(rb) = b.reps.get(name) {
                let dv = ra.dim_v + rb.dim_v;
                let mut mats = Vec::new();
                for m in &ra.matrices {
                    let mut x = zero_matrix(dv, dv);
                    for i in 0..ra.dim_v {
                        for j in 0..ra.dim_v {
                            x[i][j] = m[i][j].clone();
                        }
                    }
                    mats.push(x);
                }
                for m in &rb.matrices {
                    let mut x = zero_matrix(dv, dv);
                    for i in 0..rb.dim_v {
                        for j in 0..rb.dim_v {
                            x[ra.dim_v + i][ra.dim_v + j] = m[i][j].clone();
                        }
                    }
                    mats.push(x);
                }
                reps.insert(name.clone(), RepresentationData { dim_v: dv, matrices: mats });
            }
        }
        LieAlgebraData {
            name: format!("{}+{}", a.name, b.name),
            dim: n,
            basis,
            f,
            b: bm,
            reps,
            semisimple: a.semisimple && b.semisimple,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().flatten().flatten().all(|v| v.is_zero())
    }

    /// Coefficients of [u, v] for coefficient vectors u, v.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for k in 0..self.dim {
                    if !self.f[i][j][k].is_zero() {
                        let t = &c * &self.f[i][j][k];
                        out[k] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        (0..self.dim).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()
    }

    pub fn form(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !u[i].is_zero() && !v[j].is_zero() {
                    acc += &(&(&u[i] * &v[j]) * &self.b[i][j]);
                }
            }
        }
        acc
    }

    /// Rows are the coefficient vectors of ξ^i, with B(ξ_i, ξ^j) = δ_ij.
    pub fn dual_basis(&self) -> Result<Matrix> {
        // ξ^i = Σ_m D[i][m] ξ_m and Σ_m B[j][m] D[i][m] = δ_ij, so D = (B^{-1})^T
        let inv = mat_inverse(&self.b).ok_or(Error::DegenerateForm)?;
        Ok((0..self.dim).map(|i| (0..self.dim).map(|m| inv[m][i].clone()).collect()).collect())
    }

    pub fn adjoint(&self) -> RepresentationData {
        let mut mats = Vec::new();
        for i in 0..self.dim {
            let mut m = zero_matrix(self.dim, self.dim);
            for j in 0..self.dim {
                for k in 0..self.dim {
                    m[k][j] = self.f[i][j][k].clone();
                }
            }
            mats.push(m);
        }
        RepresentationData { dim_v: self.dim, matrices: mats }
    }

    pub fn killing_form(&self) -> Matrix {
        self.adjoint().trace_form()
    }

    /// Cartan's criterion.
    pub fn killing_form_nondegenerate(&self) -> bool {
        self.dim > 0 && mat_inverse(&self.killing_form()).is_some()
    }

    /// Change of basis η_a = Σ_i p[a][i] ξ_i (p invertible); representations
    /// transform along.
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        let pinv = mat_inverse(p).ok_or_else(|| Error::InvalidLieData("singular basis change".into()))?;
        let n = self.dim;
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                // [η_a, η_b] in ξ-coordinates, then to η-coordinates via P^{-1}
                let xi = self.bracket(&p[a], &p[b]);
                for c in 0..n {
                    let mut acc = Scalar::zero();
                    for k in 0..n {
                        acc += &(&xi[k] * &pinv[k][c]);
                    }
                    f[a][b][c] = acc;
                }
            }
        }
        let mut bm = zero_matrix(n, n);
        for a in 0..n {
            for b in 0..n {
                bm[a][b] = self.form(&p[a], &p[b]);
            }
        }
        let mut reps = BTreeMap::new();
        for (name, r) in &self.reps {
            let mats = (0..n)
                .map(|a| {
                    let mut m = zero_matrix(r.dim_v, r.dim_v);
                    for i in 0..n {
                        if p[a][i].is_zero() {
                            continue;
                        }
                        for x in 0..r.dim_v {
                            for y in 0..r.dim_v {
                                let t = &p[a][i] * &r.matrices[i][x][y];
                                m[x][y] += &t;
                            }
                        }
                    }
                    m
                })
                .collect();
            reps.insert(name.clone(), RepresentationData { dim_v: r.dim_v, matrices: mats });
        }
        Ok(LieAlgebraData {
            name: format!("{}'", self.name),
            dim: n,
            basis: (1..=n).map(|i| format!("y{i}")).collect(),
            f,
            b: bm,
            reps,
            semisimple: self.semisimple,
        })
    }

    /// Every Lie-data invariant, exactly; failures carry indices.
    pub fn validate(&self) -> VerificationReport {
        let mut r = VerificationReport::new(&format!("lie:{}", self.name));
        let n = self.dim;
        let shape_ok = self.basis.len() == n
            && self.f.len() == n
            && self.f.iter().all(|x| x.len() == n && x.iter().all(|y| y.len() == n))
            && self.b.len() == n
            && self.b.iter().all(|x| x.len() == n);
        r.check("shape", shape_ok, if shape_ok { "" } else { "dimension mismatch in basis, f or B" });
        if !shape_ok {
            return r;
        }
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.f[i][j][k] != -self.f[j][i][k].clone() {
                        bad.push(format!("f[{i}][{j}][{k}]"));
                    }
                }
            }
        }
        r.check("antisymmetry", bad.is_empty(), bad.join(" "));
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    if (0..n).any(|m| !(&(&t1[m] + &t2[m]) + &t3[m]).is_zero()) {
                        bad.push(format!("({i},{j},{k})"));
                    }
                }
            }
        }
        r.check("jacobi", bad.is_empty(), bad.join(" "));
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.b[i][j] != self.b[j][i] {
                    bad.push(format!("B[{i}][{j}]"));
                }
            }
        }
        r.check("form_symmetric", bad.is_empty(), bad.join(" "));
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let v = &self.form(&self.bracket(&x, &y), &z) + &self.form(&y, &self.bracket(&x, &z));
                    if !v.is_zero() {
                        bad.push(format!("({i},{j},{k})"));
                    }
                }
            }
        }
        r.check("form_invariant", bad.is_empty(), bad.join(" "));
        let nondeg = mat_inverse(&self.b).is_some();
        r.check("form_nondegenerate", nondeg, if nondeg { "" } else { "B is singular" });
        if self.semisimple {
            let ok = mat_inverse(&self.killing_form()).is_some();
            r.check("killing_nondegenerate", ok, if ok { "" } else { "declared semisimple but Killing form is singular" });
        }
        for (name, rep) in &self.reps {
            r.absorb(&format!("rep:{name}:"), self.validate_rep(rep));
        }
        r
    }

    pub fn validate_rep(&self, rep: &RepresentationData) -> VerificationReport {
        let mut r = VerificationReport::new("rep");
        let shape = rep.matrices.len() == self.dim
            && rep.matrices.iter().all(|m| m.len() == rep.dim_v && m.iter().all(|row| row.len() == rep.dim_v));
        r.check("shape", shape, "");
        if !shape {
            return r;
        }
        let mut bad = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let comm = mat_sub(
                    &mat_mul(&rep.matrices[i], &rep.matrices[j]),
                    &mat_mul(&rep.matrices[j], &rep.matrices[i]),
                );
                let mut rhs = zero_matrix(rep.dim_v, rep.dim_v);
                for k in 0..self.dim {
                    for x in 0..rep.dim_v {
                        for y in 0..rep.dim_v {
                            let t = &self.f[i][j][k] * &rep.matrices[k][x][y];
                            rhs[x][y] += &t;
                        }
                    }
                }
                if comm != rhs {
                    bad.push(format!("({i},{j})"));
                }
            }
        }
        r.check("homomorphism", bad.is_empty(), bad.join(" "));
        r
    }

    /// ξ ↦ ρ(ξ) injective.
    pub fn is_faithful(&self, rep: &RepresentationData) -> bool {
        let rows: Vec<crate::linalg::SparseVec> = rep
            .matrices
            .iter()
            .map(|m| {
                m.iter()
                    .flatten()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i, v.clone()))
                    .collect()
            })
            .collect();
        crate::linalg::Echelon::from_rows(rows).rank() == self.dim
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        if let Some(i) = self.basis.iter().position(|b| b == label) {
            return Some(i);
        }
        label.parse::<usize>().ok().filter(|&i| i >= 1 && i <= self.dim).map(|i| i - 1)
    }

    pub fn canonical_form(&self) -> String {
        let mut s = format!("{}|{}|", self.name, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    if !self.f[i][j][k].is_zero() {
                        s.push_str(&format!("f{i},{j},{k}={};", self.f[i][j][k]));
                    }
                }
                if !self.b[i][j].is_zero() {
                    s.push_str(&format!("B{i},{j}={};", self.b[i][j]));
                }
            }
        }
        s
    }
}

impl RepresentationData {
    pub fn trace_form(&self) -> Matrix {
        let n = self.matrices.len();
        let mut out = zero_matrix(n, n);
        for i in 0..n {
            for j in 0..n {
                out[i][j] = trace(&mat_mul(&self.matrices[i], &self.matrices[j]));
            }
        }
        out
    }
}

// ---- JSON ----

#[derive(Serialize, Deserialize)]
struct RepJson {
    #[serde(rename = "dimV")]
    dim_v: usize,
    matrices: Vec<Vec<Vec<Value>>>,
}

#[derive(Serialize, Deserialize)]
struct LieJson {
    name: String,
    dim: usize,
    basis: Vec<String>,
    f: Vec<Vec<Value>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Value>>,
    #[serde(default)]
    reps: BTreeMap<String, RepJson>,
    #[serde(default)]
    semisimple: bool,
}

fn scalar_of(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::int)
            .ok_or_else(|| Error::Spec(format!("non-integer number {n}; use a \"num/den\" string"))),
        Value::String(s) => s.parse().map_err(|e: crate::scalar::ParseScalarError| Error::Spec(e.to_string())),
        _ => Err(Error::Spec(format!("expected rational, got {v}"))),
    }
}

fn index_of(v: &Value, dim: usize) -> Result<usize> {
    let i = v.as_u64().ok_or_else(|| Error::Spec(format!("expected index, got {v}")))? as usize;
    if i >= dim {
        return Err(Error::Spec(format!("index {i} out of range (dim {dim})")));
    }
    Ok(i)
}

fn rational_of(num: &Value, den: &Value) -> Result<Scalar> {
    let (n, d) = (scalar_of(num)?, scalar_of(den)?);
    if d.is_zero() {
        return Err(Error::Spec("zero denominator".into()));
    }
    Ok(&n / &d)
}

impl LieAlgebraData {
    /// Parse the JSON spec; indices are 0-based. Entries not listed are zero.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: LieJson = serde_json::from_str(text)?;
        let n = j.dim;
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for e in &j.f {
            if e.len() != 5 {
                return Err(Error::Spec("f entries are [i,j,k,num,den]".into()));
            }
            let (a, b, c) = (index_of(&e[0], n)?, index_of(&e[1], n)?, index_of(&e[2], n)?);
            f[a][b][c] = rational_of(&e[3], &e[4])?;
        }
        let mut bm = zero_matrix(n, n);
        for e in &j.b {
            if e.len() != 4 {
                return Err(Error::Spec("B entries are [i,j,num,den]".into()));
            }
            let (a, b) = (index_of(&e[0], n)?, index_of(&e[1], n)?);
            bm[a][b] = rational_of(&e[2], &e[3])?;
        }
        let mut reps = BTreeMap::new();
        for (name, r) in j.reps {
            let mats = r
                .matrices
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(scalar_of).collect::<Result<Vec<_>>>()).collect())
                .collect::<Result<Vec<Matrix>>>()?;
            reps.insert(name, RepresentationData { dim_v: r.dim_v, matrices: mats });
        }
        Ok(LieAlgebraData { name: j.name, dim: n, basis: j.basis, f, b: bm, reps, semisimple: j.semisimple })
    }

    pub fn to_json(&self) -> Value {
        let s = |x: &Scalar| -> Value {
            if x.is_integer() {
                Value::from(x.numer().to_string().parse::<i64>().unwrap_or(0))
            } else {
                Value::from(x.to_string())
            }
        };
        let mut f = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = &self.f[i][j][k];
                    if !v.is_zero() {
                        f.push(serde_json::json!([i, j, k, v.numer().to_string().parse::<i64>().unwrap_or(0), v.denom().to_string().parse::<i64>().unwrap_or(1)]));
                    }
                }
            }
        }
        let mut b = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = &self.b[i][j];
                if !v.is_zero() {
                    b.push(serde_json::json!([i, j, v.numer().to_string().parse::<i64>().unwrap_or(0), v.denom().to_string().parse::<i64>().unwrap_or(1)]));
                }
            }
        }
        let reps: serde_json::Map<String, Value> = self
            .reps
            .iter()
            .map(|(k, r)| {
                let mats: Vec<Value> = r
                    .matrices
                    .iter()
                    .map(|m| Value::from(m.iter().map(|row| Value::from(row.iter().map(s).collect::<Vec<_>>())).collect::<Vec<_>>()))
                    .collect();
                (k.clone(), serde_json::json!({"dimV": r.dim_v, "matrices": mats}))
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "dim": self.dim,
            "basis": self.basis,
            "f": f,
            "B": b,
            "reps": reps,
            "semisimple": self.semisimple,
        })
    }
}
