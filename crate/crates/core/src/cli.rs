//! Command-line front end. Exit codes: 0 pass, 1 verification failure,
//! 2 usage or spec error, 3 infeasible piece.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::axioms::{axiom_sweep, AxiomConfig};
use crate::cache::{cached_cohomology, Cache};
use crate::cohomology::{cohomology_at, ComplexSpec, GradedPieceKey};
use crate::engine;
use crate::equivariant::{tensor_with_weil, SgtModule, SubspaceKind};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, EvalContext};
use crate::fixtures::{self, check_fixture, FixtureParams, FixtureSpec, GammaChoice};
use crate::lie::LieAlgebraData;
use crate::report::{to_pretty, VerificationReport};
use crate::theorems;
use crate::weil::WeilAlgebra;

#[derive(Parser, Debug)]
#[command(name = "chiralis", version, about = "Free-field vertex algebras and chiral equivariant cohomology")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a Lie algebra spec or a fixture spec
    Validate {
        #[arg(value_enum)]
        what: ValidateWhat,
        /// built-in name or JSON file (Lie); JSON file or inline JSON (fixture)
        spec: String,
    },
    /// Singular part of the OPE of two expressions
    Ope {
        a: String,
        b: String,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// The circle product a ∘_n b
    Circle {
        a: String,
        #[arg(allow_hyphen_values = true)]
        n: i32,
        b: String,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Evaluate an expression to a normally ordered state
    Eval {
        expr: String,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Cohomology of one piece, or a CSV table of pieces
    Cohomology(CohomologyArgs),
    /// Run a theorem verification and print its report
    Verify(VerifyArgs),
    /// Randomized sweep of the engine axioms
    Axioms {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: i32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "sl2")]
        lie: String,
    },
    /// Inspect or clear the result cache
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ValidateWhat {
    Lie,
    Algebra,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    Info,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CtxKind {
    Weil,
    Module,
    Tensor,
}

#[derive(Args, Debug, Clone)]
struct ModuleArgs {
    #[arg(long, default_value = "t1")]
    lie: String,
    /// trivial, poly_translation, linear_rep, weil, two_group
    #[arg(long)]
    module: Option<String>,
    /// fixture spec JSON file; overrides --module
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rep: Option<String>,
    #[arg(long, value_enum)]
    gamma: Option<GammaArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GammaArg {
    BetaGamma,
    Bc,
}

impl From<GammaArg> for GammaChoice {
    fn from(g: GammaArg) -> Self {
        match g {
            GammaArg::BetaGamma => GammaChoice::BetaGamma,
            GammaArg::Bc => GammaChoice::BC,
        }
    }
}

#[derive(Args, Debug)]
struct CtxArgs {
    #[arg(long, value_enum, default_value = "weil")]
    context: CtxKind,
    #[command(flatten)]
    m: ModuleArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    /// basic subcomplex of W(g)⊗A
    Weil,
    SmallCartan,
    SmallWeil,
    /// A itself, filtered by --subspace
    Module,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SubArg {
    All,
    Horizontal,
    Invariant,
    Basic,
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    #[arg(long, value_enum, default_value = "weil")]
    model: Model,
    #[command(flatten)]
    m: ModuleArgs,
    #[arg(long, value_enum, default_value = "basic")]
    subspace: SubArg,
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i32>,
    #[arg(long)]
    weight: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    aux: Option<i32>,
    /// print the whole report instead of {"dimH": n}
    #[arg(long)]
    full: bool,
    /// CSV table over weight 0..=W and degree -D..=D
    #[arg(long)]
    max_weight: Option<i32>,
    #[arg(long, default_value_t = 4)]
    max_degree: i32,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// theorem id, e.g. thm:linear-rep
    id: String,
    #[command(flatten)]
    m: ModuleArgs,
    #[arg(long)]
    max_weight: Option<i32>,
    #[arg(long)]
    max_degree: Option<i32>,
    /// G×H element: run the stages even when a hypothesis fails
    #[arg(long)]
    unguarded: bool,
    /// direction of H for the G×H translation fixture
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    h_dir: Option<Vec<i64>>,
    /// ranks of G and T for the two-group fixture
    #[arg(long, num_args = 2, value_names = ["G", "T"])]
    split: Option<Vec<usize>>,
}

fn fixture_kind(name: &str) -> &str {
    match name {
        "trivial" => "trivial_action",
        "weil" => "weil_as_module",
        k => k,
    }
}

impl ModuleArgs {
    fn lie(&self) -> Result<LieAlgebraData> {
        LieAlgebraData::load(&self.lie)
    }

    fn module_or(&self, default_kind: &str) -> Result<SgtModule> {
        if let Some(path) = &self.fixture {
            return load_fixture(path)?.build();
        }
        let kind = fixture_kind(self.module.as_deref().unwrap_or(default_kind)).to_string();
        FixtureSpec {
            kind,
            params: FixtureParams {
                n: self.n,
                lie: Some(self.lie.clone()),
                rep: self.rep.clone(),
                gamma: self.gamma.map(Into::into),
                split: None,
            },
        }
        .build()
    }
}

fn load_fixture(spec: &str) -> Result<FixtureSpec> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Error::Spec(format!("cannot read fixture '{spec}': {e}")))?
    };
    FixtureSpec::from_json(&text)
}

fn context(c: &CtxArgs) -> Result<EvalContext> {
    match c.context {
        CtxKind::Weil => Ok(EvalContext::weil(&WeilAlgebra::build(&c.m.lie()?)?)),
        CtxKind::Module => Ok(EvalContext::module(&c.m.module_or("poly_translation")?)),
        CtxKind::Tensor => {
            let a = c.m.module_or("trivial")?;
            let w = WeilAlgebra::build(&a.lie)?;
            Ok(EvalContext::tensor(&tensor_with_weil(&w, &a)?))
        }
    }
}

fn eval(cx: &EvalContext, text: &str) -> Result<crate::algebra::State> {
    cx.eval(&parse_expr(text)?)
}

fn report_exit(out: &mut dyn Write, r: &VerificationReport) -> Result<i32> {
    write!(out, "{}", to_pretty(&r.to_json()))?;
    Ok(if r.passed { 0 } else { 1 })
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Validate { what: ValidateWhat::Lie, spec } => {
            let lie = LieAlgebraData::load(&spec)?;
            report_exit(out, &lie.validate())
        }
        Cmd::Validate { what: ValidateWhat::Algebra, spec } => {
            let m = load_fixture(&spec)?.build()?;
            report_exit(out, &check_fixture(&m))
        }
        Cmd::Ope { a, b, ctx } => {
            let cx = context(&ctx)?;
            let (x, y) = (eval(&cx, &a)?, eval(&cx, &b)?);
            let poles: Vec<Value> = engine::ope_singular(&cx.algebra, &x, &y)
                .into_iter()
                .map(|(p, s)| json!({ "p": p, "state": cx.algebra.format_state(&s) }))
                .collect();
            write!(out, "{}", to_pretty(&json!({ "poles": poles })))?;
            Ok(0)
        }
        Cmd::Circle { a, n, b, ctx } => {
            let cx = context(&ctx)?;
            let s = engine::circle_product(&cx.algebra, &eval(&cx, &a)?, n, &eval(&cx, &b)?);
            write!(out, "{}", to_pretty(&json!({ "state": cx.algebra.format_state(&s) })))?;
            Ok(0)
        }
        Cmd::Eval { expr, ctx } => {
            let cx = context(&ctx)?;
            let s = eval(&cx, &expr)?;
            write!(out, "{}", to_pretty(&json!({ "state": cx.algebra.format_state(&s) })))?;
            Ok(0)
        }
        Cmd::Cohomology(args) => cohomology_cmd(args, out),
        Cmd::Verify(args) => verify_cmd(args, out),
        Cmd::Axioms { samples, max_weight, seed, lie } => {
            let w = WeilAlgebra::build(&LieAlgebraData::load(&lie)?)?;
            let r = axiom_sweep(&w.algebra, &AxiomConfig { samples, max_weight, seed });
            report_exit(out, &r)
        }
        Cmd::Cache { action } => {
            let cache = Cache::from_env();
            let v = match action {
                CacheAction::Info => serde_json::to_value(cache.info()?)?,
                CacheAction::Clear => json!({ "removed": cache.clear()? }),
            };
            write!(out, "{}", to_pretty(&v))?;
            Ok(0)
        }
    }
}

fn piece_json(spec: &ComplexSpec, key: GradedPieceKey, use_cache: bool) -> Result<Value> {
    if use_cache {
        Ok(cached_cohomology(&Cache::from_env(), spec, key)?.0)
    } else {
        Ok(cohomology_at(spec, key)?.to_json(spec.algebra()))
    }
}

fn cohomology_cmd(args: CohomologyArgs, out: &mut dyn Write) -> Result<i32> {
    let a = args.m.module_or("trivial")?;
    let kind = match args.subspace {
        SubArg::All => SubspaceKind::All,
        SubArg::Horizontal => SubspaceKind::Horizontal,
        SubArg::Invariant => SubspaceKind::Invariant,
        SubArg::Basic => SubspaceKind::Basic,
    };
    let w;
    let t;
    let spec = match args.model {
        Model::Module => a.complex(kind),
        m => {
            w = WeilAlgebra::build(&a.lie)?;
            t = tensor_with_weil(&w, &a)?;
            match m {
                Model::Weil => t.weil_model(),
                Model::SmallCartan => t.small_cartan()?,
                _ => t.small_weil()?,
            }
        }
    };
    let use_cache = !args.no_cache;
    if let Some(max_w) = args.max_weight {
        let mut csv = String::from("degree,weight,aux,dimH\n");
        for weight in 0..=max_w {
            for degree in -args.max_degree..=args.max_degree {
                let key = GradedPieceKey { degree, weight, aux: args.aux };
                let v = piece_json(&spec, key, use_cache)?;
                let aux = args.aux.map(|x| x.to_string()).unwrap_or_default();
                csv.push_str(&format!("{degree},{weight},{aux},{}\n", v["dimH"]));
            }
        }
        write!(out, "{csv}")?;
        return Ok(0);
    }
    let (Some(degree), Some(weight)) = (args.degree, args.weight) else {
        return Err(Error::Spec("cohomology needs --degree and --weight, or --max-weight".into()));
    };
    let v = piece_json(&spec, GradedPieceKey { degree, weight, aux: args.aux }, use_cache)?;
    if args.full {
        write!(out, "{}", to_pretty(&v))?;
    } else {
        writeln!(out, "{{\"dimH\": {}}}", v["dimH"])?;
    }
    Ok(0)
}

fn verify_cmd(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let m = &args.m;
    let mw = |d: i32| args.max_weight.unwrap_or(d);
    let md = |d: i32| args.max_degree.unwrap_or(d);
    let r = match args.id.as_str() {
        "thm:q-vanishing" => theorems::verify_q_vanishing(&m.module_or("poly_translation")?)?,
        "thm:L-chiral-free" => {
            if m.module.is_none() && m.fixture.is_none() {
                return Err(Error::NoFixture(format!("no chiral free fixture for {}", m.lie)));
            }
            theorems::verify_l_chiral_free(&m.module_or("poly_translation")?)?
        }
        "thm:linear-rep" => {
            let lie = LieAlgebraData::load(if m.lie == "t1" { "sl2" } else { &m.lie })?;
            let rep = m.rep.as_deref().unwrap_or("fundamental");
            match m.gamma {
                Some(g) => theorems::verify_linear_rep(&lie, rep, g.into())?,
                None => {
                    let mut r = VerificationReport::new("thm:linear-rep");
                    r.absorb("beta-gamma: ", theorems::verify_linear_rep(&lie, rep, GammaChoice::BetaGamma)?);
                    r.absorb("bc: ", theorems::verify_linear_rep(&lie, rep, GammaChoice::BC)?);
                    r
                }
            }
        }
        "thm:t-reduction" => {
            let s = args.split.clone().unwrap_or_else(|| vec![1, 1]);
            theorems::verify_t_reduction(&fixtures::two_group(s[0], s[1])?, mw(2), md(6))?
        }
        "thm:gh-element" => {
            let h = args.h_dir.clone().unwrap_or_else(|| vec![1, 1]);
            let s = theorems::gh_translation_fixture((h[0], h[1]))?;
            if args.unguarded {
                let mut r = theorems::gh_element_stages(&s)?;
                r.absorb("", theorems::gh_hypothesis_report(&s)?);
                r
            } else {
                theorems::verify_gh_element(&s)?
            }
        }
        "thm:half-tva" => match m.module.as_deref() {
            Some("weil_tva") => theorems::verify_half_tva(&theorems::weil_would_be_tva(&m.lie()?)?),
            _ => theorems::verify_half_tva(&m.module_or("poly_translation")?),
        },
        "thm:basic-vanishing" => theorems::verify_basic_vanishing(&m.module_or("poly_translation")?, mw(2), md(3))?,
        "thm:small-models" => theorems::verify_small_models(&m.module_or("trivial")?, mw(2), md(6))?,
        "thm:conformal-structure" => theorems::verify_conformal_structure(&m.lie()?, mw(2), md(4))?,
        id => return Err(Error::Spec(format!("unknown theorem id '{id}'; known: {}", theorems::THEOREM_IDS.join(", ")))),
    };
    report_exit(out, &r)
}
