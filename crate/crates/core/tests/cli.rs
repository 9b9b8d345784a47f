use std::path::PathBuf;
use std::sync::Once;

use chiralis::cache::{cached_cohomology, piece_hash, Cache};
use chiralis::cli::run_cli_with;
use chiralis::cohomology::GradedPieceKey;
use chiralis::equivariant::{SgtModule, SubspaceKind};
use chiralis::lie::LieAlgebraData;
use chiralis::weil::WeilAlgebra;
use chiralis::Scalar;
use serde_json::Value;

static ENV: Once = Once::new();

fn scratch(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("chiralis-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&p);
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    ENV.call_once(|| std::env::set_var("CHIRALIS_CACHE", scratch("cli-cache")));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chiralis").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn dim_h_example() {
    let (code, out, _) = run(&["cohomology", "--model", "weil", "--lie", "t1", "--module", "trivial", "--degree", "2", "--weight", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimH"], 1);
}

#[test]
fn ope_of_the_bc_pair() {
    let (code, out, _) = run(&["ope", "b{1}", "c{1}"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["poles"][0]["state"], "1");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["verify", "thm:nonsense"]);
    assert_eq!(code, 2);
    assert!(serde_json::from_str::<Value>(&err).unwrap()["error"].is_string());
    let (code, _, err) = run(&["verify", "thm:gh-element"]);
    assert_eq!(code, 2);
    assert!(err.contains("G semisimple"), "{err}");
    let (code, _, _) = run(&["eval", "b{1} + gamma{1}"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["cohomology", "--bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_linear_rep_passes() {
    let (code, out, _) = run(&["verify", "thm:linear-rep", "--lie", "sl2", "--rep", "fundamental"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["cohomology", "--model", "weil", "--lie", "t1", "--module", "poly_translation", "--n", "1", "--max-weight", "2", "--max-degree", "2", "--no-cache"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    assert!(a.1.starts_with("degree,weight,aux,dimH"), "{}", a.1);
}

#[test]
fn cache_round_trip_and_corruption() {
    let cache = Cache::new(scratch("lib-cache"));
    let w = WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap();
    let m = SgtModule::from_weil(&w);
    let spec = m.complex(SubspaceKind::Basic);
    let key = GradedPieceKey::new(2, 2);
    let (first, hit) = cached_cohomology(&cache, &spec, key).unwrap();
    assert!(!hit);
    let (second, hit) = cached_cohomology(&cache, &spec, key).unwrap();
    assert!(hit);
    assert_eq!(first, second);
    assert_eq!(cache.info().unwrap().entries, 1);

    let path = cache.path_for(&piece_hash(&spec, key));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"dimH\": ", "\"dimH\": 7", 1)).unwrap();
    assert!(cache.get(&piece_hash(&spec, key)).is_err());
    let (third, hit) = cached_cohomology(&cache, &spec, key).unwrap();
    assert!(!hit);
    assert_eq!(third, first);
    assert!(cache.get(&piece_hash(&spec, key)).unwrap().is_some());

    assert_eq!(cache.clear().unwrap(), 1);
    assert_eq!(cache.info().unwrap().entries, 0);
}

#[test]
fn structure_constants_enter_the_hash() {
    let l = LieAlgebraData::sl2();
    let mut p = vec![vec![Scalar::zero(); 3]; 3];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    p[0][0] = Scalar::int(2);
    let scaled = l.change_basis(&p).unwrap();
    assert_ne!(l.f, scaled.f);
    let key = GradedPieceKey::new(0, 1);
    let hash = |l: &LieAlgebraData| {
        let w = WeilAlgebra::build(l).unwrap();
        let m = SgtModule::from_weil(&w);
        piece_hash(&m.complex(SubspaceKind::Basic), key)
    };
    assert_eq!(hash(&l), hash(&LieAlgebraData::sl2()));
    assert_ne!(hash(&l), hash(&scaled));
}
