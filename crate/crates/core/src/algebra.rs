//! Free-field algebras, creation-mode monomials and states.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type GenId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    /// family name as used in expressions, e.g. "beta"
    pub family: String,
    /// index label, e.g. "1" or a basis name
    pub index: String,
    pub odd: bool,
    pub weight: i32,
    pub degree: i32,
    pub aux: i32,
}

impl GeneratorSpec {
    pub fn new(family: &str, index: &str, odd: bool, weight: i32, degree: i32) -> Self {
        GeneratorSpec {
            family: family.to_string(),
            index: index.to_string(),
            odd,
            weight,
            degree,
            aux: 0,
        }
    }

    pub fn with_aux(mut self, aux: i32) -> Self {
        self.aux = aux;
        self
    }

    pub fn name(&self) -> String {
        format!("{}{{{}}}", self.family, self.index)
    }
}

/// Generators plus the scalar contraction table. `contraction[x]` lists the
/// pairs `(y, k)` with `[x(m), y(n)] = k δ_{m+n,-1}`.
#[derive(Clone, Debug, Default)]
pub struct FreeFieldAlgebra {
    pub label: String,
    pub generators: Vec<GeneratorSpec>,
    contraction: Vec<Vec<(GenId, Scalar)>>,
    by_name: HashMap<String, GenId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub gen: GenId,
    pub idx: i32,
}

impl Mode {
    pub fn new(gen: GenId, idx: i32) -> Self {
        Mode { gen, idx }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<Mode>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }
    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }
    pub fn modes(&self) -> &[Mode] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub degree: i32,
    pub weight: i32,
    pub aux: i32,
}

impl std::ops::Add for Grade {
    type Output = Grade;
    fn add(self, o: Grade) -> Grade {
        Grade {
            degree: self.degree + o.degree,
            weight: self.weight + o.weight,
            aux: self.aux + o.aux,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Zero,
    Homogeneous(Grade),
    Inhomogeneous,
}

impl FreeFieldAlgebra {
    pub fn new(label: &str) -> Self {
        FreeFieldAlgebra {
            label: label.to_string(),
            ..Default::default()
        }
    }

    pub fn add_generator(&mut self, spec: GeneratorSpec) -> Result<GenId> {
        let name = spec.name();
        if self.by_name.contains_key(&name) {
            return Err(Error::Spec(format!("duplicate generator {name}")));
        }
        if !(0..=1).contains(&spec.weight) {
            return Err(Error::Spec(format!("generator {name} has weight {} (must be 0 or 1)", spec.weight)));
        }
        let id = self.generators.len() as GenId;
        self.by_name.insert(name, id);
        self.generators.push(spec);
        self.contraction.push(Vec::new());
        Ok(id)
    }

    /// Declare `[x(m), y(n)] = k δ_{m+n,-1}`; the reversed entry follows from
    /// super-skew-symmetry of the bracket.
    pub fn add_contraction(&mut self, x: GenId, y: GenId, k: Scalar) -> Result<()> {
        let (gx, gy) = (&self.generators[x as usize], &self.generators[y as usize]);
        if gx.weight + gy.weight != 1 || gx.degree + gy.degree != 0 || gx.odd != gy.odd {
            return Err(Error::Spec(format!(
                "contraction {} with {} pairs incompatible partners",
                gx.name(),
                gy.name()
            )));
        }
        let rev = if gx.odd { k.clone() } else { -k.clone() };
        if k.is_zero() {
            return Ok(());
        }
        self.contraction[x as usize].push((y, k));
        if x != y {
            self.contraction[y as usize].push((x, rev));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn gen(&self, id: GenId) -> &GeneratorSpec {
        &self.generators[id as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn lookup_family(&self, family: &str, index: &str) -> Option<GenId> {
        self.lookup(&format!("{family}{{{index}}}"))
    }

    pub fn is_odd(&self, id: GenId) -> bool {
        self.generators[id as usize].odd
    }

    pub fn partners(&self, id: GenId) -> &[(GenId, Scalar)] {
        &self.contraction[id as usize]
    }

    /// Contraction scalar k in `[x(m), y(n)] = k δ_{m+n,-1}`.
    pub fn contraction(&self, x: GenId, y: GenId) -> Scalar {
        self.contraction[x as usize]
            .iter()
            .find(|(z, _)| *z == y)
            .map(|(_, k)| k.clone())
            .unwrap_or_default()
    }

    pub fn mode_grade(&self, m: Mode) -> Grade {
        let g = self.gen(m.gen);
        Grade {
            degree: g.degree,
            weight: g.weight + (-1 - m.idx),
            aux: g.aux,
        }
    }

    pub fn monomial_grade(&self, m: &Monomial) -> Grade {
        m.0.iter().fold(Grade { degree: 0, weight: 0, aux: 0 }, |acc, &md| acc + self.mode_grade(md))
    }

    pub fn monomial_odd(&self, m: &Monomial) -> bool {
        m.0.iter().filter(|md| self.is_odd(md.gen)).count() % 2 == 1
    }

    /// Sort modes into canonical order, returning the Koszul sign, or `None`
    /// when an odd mode repeats.
    pub fn normalize_modes(&self, modes: &[Mode]) -> Option<(Scalar, Monomial)> {
        let mut v = modes.to_vec();
        let mut neg = false;
        // insertion sort; each swap of two odd modes flips the sign
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if self.is_odd(v[j].gen) && self.is_odd(v[j - 1].gen) {
                    neg = !neg;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] && self.is_odd(w[0].gen) {
                return None;
            }
        }
        Some((Scalar::sign(neg), Monomial(v)))
    }

    pub fn grade(&self, s: &State) -> Grading {
        let mut out = Grading::Zero;
        for m in s.terms.keys() {
            let g = self.monomial_grade(m);
            out = match out {
                Grading::Zero => Grading::Homogeneous(g),
                Grading::Homogeneous(h) if h == g => out,
                _ => return Grading::Inhomogeneous,
            };
        }
        out
    }

    /// Supercommutative product of creation-mode states.
    pub fn fock_multiply(&self, a: &State, b: &State) -> State {
        let mut out = State::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let mut modes = ma.0.clone();
                modes.extend_from_slice(&mb.0);
                if let Some((s, m)) = self.normalize_modes(&modes) {
                    out.add_term(m, &(&s * &(ca * cb)));
                }
            }
        }
        out
    }

    pub fn generator_state(&self, id: GenId) -> State {
        State::from_monomial(Monomial(vec![Mode::new(id, -1)]))
    }

    /// Disjoint union `self ⊗ other`; generators of `other` are shifted by
    /// `self.len()` and renamed with `prefix` when given.
    pub fn tensor(&self, other: &FreeFieldAlgebra, prefix: &str, label: &str) -> Result<FreeFieldAlgebra> {
        let mut out = self.clone();
        out.label = label.to_string();
        let off = self.len() as GenId;
        for g in &other.generators {
            let mut g = g.clone();
            g.family = format!("{prefix}{}", g.family);
            out.add_generator(g)?;
        }
        for (x, list) in other.contraction.iter().enumerate() {
            for (y, k) in list {
                out.contraction[x + off as usize].push((y + off, k.clone()));
            }
        }
        Ok(out)
    }

    /// Canonical text used for hashing.
    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.generators.iter().enumerate() {
            s.push_str(&format!(
                "{}:{}:{}:{}:{};",
                g.name(),
                if g.odd { 1 } else { 0 },
                g.weight,
                g.degree,
                g.aux
            ));
            let mut c: Vec<_> = self.contraction[i].iter().map(|(y, k)| format!("{y}={k}")).collect();
            c.sort();
            s.push_str(&c.join(","));
            s.push('|');
        }
        s
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.0.is_empty() {
            return "|0>".to_string();
        }
        let mut s = String::new();
        for md in &m.0 {
            s.push_str(&format!("{}({})", self.gen(md.gen).name(), md.idx));
        }
        s
    }

    /// Human-readable rendering, e.g. `2 gamma{1}(-2)gamma{1}(-1)`.
    pub fn format_state(&self, s: &State) -> String {
        if s.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &s.terms {
            let body = self.format_monomial(m);
            parts.push(if m.is_vacuum() {
                c.to_string()
            } else if c.is_one() {
                body
            } else if *c == Scalar::int(-1) {
                format!("-{body}")
            } else {
                format!("{c} {body}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Finite linear combination of normally ordered monomials applied to |0⟩.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct State {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::from_monomial(Monomial::vacuum())
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut s = State::zero();
        s.add_term(Monomial::vacuum(), &c);
        s
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Scalar::one());
        State { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), &(v * c));
        }
    }

    pub fn add_assign(&mut self, other: &State) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scale(&self, c: &Scalar) -> State {
        let mut out = State::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::int(-1));
        out
    }

    pub fn neg(&self) -> State {
        self.scale(&Scalar::int(-1))
    }

    /// Relabel generators via `f` (used for tensor embeddings). The map must
    /// preserve the relative order of generators appearing in the state.
    pub fn map_gens(&self, f: impl Fn(GenId) -> GenId) -> State {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            let modes = m.0.iter().map(|md| Mode::new(f(md.gen), md.idx)).collect();
            out.add_term(Monomial(modes), c);
        }
        out
    }

    /// Scalar multiple of the vacuum, if the state is one.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::vacuum()) {
                return Some(c.clone());
            }
        }
        None
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(deg {}, wt {}, aux {})", self.degree, self.weight, self.aux)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc() -> (FreeFieldAlgebra, GenId, GenId) {
        let mut a = FreeFieldAlgebra::new("bc");
        let b = a.add_generator(GeneratorSpec::new("b", "1", true, 1, -1)).unwrap();
        let c = a.add_generator(GeneratorSpec::new("c", "1", true, 0, 1)).unwrap();
        a.add_contraction(b, c, Scalar::one()).unwrap();
        (a, b, c)
    }

    #[test]
    fn normalize_examples() {
        let (a, b, c) = bc();
        let (s, m) = a.normalize_modes(&[Mode::new(c, -1), Mode::new(b, -1)]).unwrap();
        assert_eq!(s, Scalar::int(-1));
        assert_eq!(m.0, vec![Mode::new(b, -1), Mode::new(c, -1)]);
        assert!(a.normalize_modes(&[Mode::new(c, -1), Mode::new(c, -1)]).is_none());
        let (s, m2) = a.normalize_modes(&m.0).unwrap();
        assert!(s.is_one());
        assert_eq!(m2, m);
    }

    #[test]
    fn grades() {
        let (a, b, c) = bc();
        let s = State::from_monomial(Monomial(vec![Mode::new(b, -2)]));
        assert_eq!(a.grade(&s), Grading::Homogeneous(Grade { degree: -1, weight: 2, aux: 0 }));
        let t = a.generator_state(b).plus(&a.generator_state(c));
        assert_eq!(a.grade(&t), Grading::Inhomogeneous);
    }

    #[test]
    fn reverse_contraction_sign() {
        let mut a = FreeFieldAlgebra::new("bg");
        let beta = a.add_generator(GeneratorSpec::new("beta", "1", false, 1, -2)).unwrap();
        let gamma = a.add_generator(GeneratorSpec::new("gamma", "1", false, 0, 2)).unwrap();
        a.add_contraction(beta, gamma, Scalar::one()).unwrap();
        assert_eq!(a.contraction(gamma, beta), Scalar::int(-1));
        assert!(a.add_contraction(beta, beta, Scalar::one()).is_err());
    }
}
