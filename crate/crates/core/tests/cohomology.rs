use std::collections::BTreeMap;

use chiralis::algebra::Grading;
use chiralis::cohomology::{cohomology_at, enumerate_basis, subspace, ComplexSpec, GradedPieceKey};
use chiralis::equivariant::{tensor_with_weil, SgtModule, SubspaceKind};
use chiralis::fixtures;
use chiralis::lie::LieAlgebraData;
use chiralis::weil::WeilAlgebra;
use chiralis::{engine, FreeFieldAlgebra, Monomial, Scalar, State};

const MAX_DENSE: usize = 200;

/// Row reduction on a dense copy, kept separate from the library's own.
fn rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let mut r = 0;
    let cols = m.first().map_or(0, |x| x.len());
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let t = &f * &m[r][k];
                m[i][k] = &m[i][k] - &t;
            }
        }
        r += 1;
    }
    r
}

/// Columns are the given states, rows every monomial that shows up.
fn dense(states: &[State]) -> Vec<Vec<Scalar>> {
    let mut rows: BTreeMap<&Monomial, Vec<Scalar>> = BTreeMap::new();
    for (j, s) in states.iter().enumerate() {
        for (m, c) in &s.terms {
            rows.entry(m).or_insert_with(|| vec![Scalar::zero(); states.len()])[j] = c.clone();
        }
    }
    rows.into_values().collect()
}

fn field_weight(alg: &FreeFieldAlgebra, x: &State) -> Option<i32> {
    match alg.grade(x) {
        Grading::Homogeneous(g) => Some(g.weight),
        _ => None,
    }
}

/// dim of the constraint kernel from the stacked maps m ↦ x∘_p m.
fn constraint_kernel_dim(spec: &ComplexSpec, key: GradedPieceKey) -> usize {
    let alg = spec.algebra();
    let monos = enumerate_basis(&spec.space, key).unwrap();
    let units: Vec<State> = monos.iter().map(|m| State::from_monomial(m.clone())).collect();
    let mut stacked: Vec<Vec<Scalar>> = Vec::new();
    for x in &spec.constraints {
        let Some(h) = field_weight(alg, x) else { continue };
        for p in 0..(key.weight + h).max(0) {
            let images: Vec<State> = units.iter().map(|u| engine::circle_product(alg, x, p, u)).collect();
            stacked.extend(dense(&images));
        }
    }
    monos.len() - rank(stacked)
}

fn d_rank(spec: &ComplexSpec, key: GradedPieceKey) -> usize {
    let states = subspace(spec, key).unwrap().states();
    let images: Vec<State> = states.iter().map(|s| spec.d.apply(spec.algebra(), s)).collect();
    rank(dense(&images))
}

/// Compares every piece small enough for the dense route.
fn cross_check(spec: &ComplexSpec, degrees: std::ops::RangeInclusive<i32>, max_weight: i32) -> usize {
    let mut checked = 0;
    for w in 0..=max_weight {
        for k in degrees.clone() {
            let key = GradedPieceKey::new(k, w);
            let n = enumerate_basis(&spec.space, key).unwrap().len();
            if n > MAX_DENSE {
                continue;
            }
            let rep = cohomology_at(spec, key).unwrap();
            let sub = constraint_kernel_dim(spec, key);
            assert_eq!(rep.dim_subspace, sub, "{}: subspace at {key}", spec.model);
            let oracle = sub - d_rank(spec, key) - d_rank(spec, key.shift_degree(-1));
            assert_eq!(rep.dim_h, oracle, "{}: dim H at {key}", spec.model);
            assert!(rep.dim_image <= rep.dim_kernel && rep.dim_kernel <= rep.dim_subspace, "{}: ranks at {key}", spec.model);
            checked += 1;
        }
    }
    checked
}

/// Counts monomials of a given (degree, weight) from the product formula
/// over modes: bosons contribute geometric series, fermions one factor each.
fn count_monomials(alg: &FreeFieldAlgebra, key: GradedPieceKey) -> usize {
    let gens: Vec<_> = (0..alg.len() as u32).map(|g| alg.gen(g).clone()).collect();
    let max_deg = gens.iter().map(|g| g.degree.abs()).max().unwrap_or(0);
    assert!(gens.iter().all(|g| g.weight > 0 || g.degree >= 0 && (g.degree > 0 || g.odd)), "count needs a finite piece");
    let window = key.degree.abs() + (key.weight + 1) * max_deg;
    let mut series: BTreeMap<(i32, i32), usize> = BTreeMap::from([((0, 0), 1)]);
    for g in &gens {
        for r in 0.. {
            let wt = g.weight + r;
            if wt > key.weight {
                break;
            }
            let mut next: BTreeMap<(i32, i32), usize> = BTreeMap::new();
            for (&(dw, dd), &c) in &series {
                let mut k = 0;
                loop {
                    let (nw, nd) = (dw + k * wt, dd + k * g.degree);
                    if nw > key.weight || nd.abs() > window || (g.odd && k > 1) {
                        break;
                    }
                    *next.entry((nw, nd)).or_default() += c;
                    k += 1;
                    if wt == 0 && g.degree == 0 {
                        break;
                    }
                }
            }
            series = next;
        }
    }
    series.get(&(key.weight, key.degree)).copied().unwrap_or(0)
}

#[test]
fn piece_sizes_match_the_product_formula() {
    for name in ["t1", "sl2"] {
        let w = WeilAlgebra::build(&LieAlgebraData::builtin(name).unwrap()).unwrap();
        let m = SgtModule::from_weil(&w);
        let spec = m.complex(SubspaceKind::All);
        for wt in 0..=3 {
            for deg in -4..=4 {
                let key = GradedPieceKey::new(deg, wt);
                let n = enumerate_basis(&spec.space, key).unwrap().len();
                assert_eq!(n, count_monomials(&w.algebra, key), "{name} at {key}");
            }
        }
    }
}

#[test]
fn dense_route_agrees_on_weil_of_t1() {
    let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
    let m = SgtModule::from_weil(&w);
    for kind in [SubspaceKind::All, SubspaceKind::Horizontal, SubspaceKind::Basic] {
        assert!(cross_check(&m.complex(kind), -2..=6, 4) > 0);
    }
}

#[test]
fn dense_route_agrees_on_weil_of_sl2() {
    let w = WeilAlgebra::build(&LieAlgebraData::sl2()).unwrap();
    let m = SgtModule::from_weil(&w);
    for kind in [SubspaceKind::All, SubspaceKind::Basic] {
        assert!(cross_check(&m.complex(kind), -1..=3, 1) > 0);
    }
}

#[test]
fn dense_route_agrees_on_translations() {
    let a = fixtures::poly_translation(1).unwrap();
    for kind in [SubspaceKind::All, SubspaceKind::Invariant, SubspaceKind::Basic] {
        assert!(cross_check(&a.complex(kind), -2..=3, 3) > 0);
    }
}

#[test]
fn dense_route_agrees_on_the_weil_model() {
    let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
    let a = fixtures::poly_translation(1).unwrap();
    let t = tensor_with_weil(&w, &a).unwrap();
    assert!(cross_check(&t.weil_model(), -1..=3, 2) > 0);
}

#[test]
fn weil_basic_cohomology_is_concentrated_in_even_degree() {
    let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
    let m = SgtModule::from_weil(&w);
    let spec = m.complex(SubspaceKind::Basic);
    for wt in 0..=3 {
        for deg in [-1, 1, 3, 5] {
            assert_eq!(cohomology_at(&spec, GradedPieceKey::new(deg, wt)).unwrap().dim_h, 0, "deg {deg} wt {wt}");
        }
    }
    assert_eq!(cohomology_at(&spec, GradedPieceKey::new(0, 0)).unwrap().dim_h, 1);
}
