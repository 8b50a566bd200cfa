//! Command-line front end: every subcommand parses its inputs, dispatches
//! into the library and prints one deterministic JSON document on stdout.
//! Exit codes: 0 for verified/true outcomes, 1 for negative verdicts
//! (unstable, not a monad, identity violated, not fine), 2 for errors.
//!
//! All randomness flows from the single --seed flag; reports echo the
//! effective degree bound. serde_json orders object keys alphabetically, so
//! identical inputs produce byte-identical output.

use crate::algebra::{build_algebra, AlgebraSpec, Family, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::grmod::ModulePresentation;
use crate::io::JsonField;
use crate::kronecker::{KroneckerComplex, Verdict};
use crate::{adhm, chainpoisson, elliptic, io, kronecker};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "nc-plane", version, about = "Moduli numerology on noncommutative projective planes", disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AlgebraFlags {
    /// Family: polynomial | sklyanin | homogenized-weyl | qdeform.
    #[arg(long)]
    family: String,
    /// Comma-separated integer parameters, e.g. 1,2,3.
    #[arg(long, default_value = "")]
    params: String,
    /// Cubic for the polynomial family, e.g. "xyz" or "xyz:1,zzz:-2".
    #[arg(long, default_value = "xyz")]
    cubic_g: String,
    /// Base field: "rationals" or a prime modulus.
    #[arg(long, default_value = "101")]
    field: String,
    /// Degree bound for the degreewise construction.
    #[arg(long, default_value_t = 12)]
    degree_bound: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an algebra and report its degree data.
    Algebra {
        #[command(subcommand)]
        sub: AlgebraCmd,
    },
    /// Emit the point-scheme cubic and sampled sigma pairs.
    Curve {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Point-module constructions.
    Points {
        #[command(subcommand)]
        sub: PointsCmd,
    },
    /// Graded-module computations from a presentation file.
    Module {
        #[command(subcommand)]
        sub: ModuleCmd,
    },
    /// Monad certificates and cohomology.
    Monad {
        #[command(subcommand)]
        sub: MonadCmd,
    },
    /// Semistability checks.
    Stability {
        #[command(subcommand)]
        sub: StabilityCmd,
    },
    /// GIT weight numerology.
    Git {
        #[command(subcommand)]
        sub: GitCmd,
    },
    /// ADHM data on the homogenized Weyl plane.
    Adhm {
        #[command(subcommand)]
        sub: AdhmCmd,
    },
    /// Ext dimensions between monads.
    Ext {
        #[command(subcommand)]
        sub: ExtCmd,
    },
    /// Moduli-space numerology.
    Moduli {
        #[command(subcommand)]
        sub: ModuliCmd,
    },
    /// Chain-level Poisson identities.
    Poisson {
        #[command(subcommand)]
        sub: PoissonCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Build and verify Hilbert function, normal element, B-quotient dims.
    Check {
        #[command(flatten)]
        flags: AlgebraFlags,
    },
    /// dim S_d for one degree.
    Hilbert {
        #[command(flatten)]
        flags: AlgebraFlags,
        #[arg(long)]
        d: i64,
    },
}

#[derive(Subcommand, Debug)]
enum PointsCmd {
    /// Ideal of generic points on the point scheme.
    Ideal {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ModuleCmd {
    Invariants {
        #[arg(long)]
        module: PathBuf,
    },
    Cohomology {
        #[arg(long)]
        module: PathBuf,
        /// Comma-separated twists, e.g. "-2,-1,0".
        #[arg(long, default_value = "-2,-1,0", allow_hyphen_values = true)]
        twists: String,
    },
    Restrict {
        #[arg(long)]
        module: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MonadCmd {
    Check {
        #[arg(long)]
        complex: PathBuf,
    },
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum StabilityCmd {
    Check {
        #[arg(long)]
        complex: PathBuf,
        /// strict or semi.
        #[arg(long, default_value = "semi")]
        mode: String,
        /// Comma-separated field-extension degrees to enumerate over.
        #[arg(long, default_value = "1,2")]
        ext: String,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GitCmd {
    Weights {
        #[arg(long)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        /// Linearization parameter; defaults to the effective bound.
        #[arg(long)]
        m: Option<i64>,
        /// Random integer tuples to verify the weight identity on.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum AdhmCmd {
    /// Generate a valid datum and print it.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "101")]
        field: String,
        #[arg(long, default_value_t = 12)]
        degree_bound: usize,
    },
    /// Generate (or read) a datum and run the full certificate chain.
    Check {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        datum: Option<PathBuf>,
        #[arg(long, default_value = "101")]
        field: String,
        #[arg(long, default_value_t = 12)]
        degree_bound: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExtCmd {
    Dims {
        #[arg(long)]
        complex: PathBuf,
        /// Second complex; defaults to the first.
        #[arg(long)]
        complex_l: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ModuliCmd {
    Dim {
        #[arg(long)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
    Fine {
        #[arg(long)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
}

#[derive(Subcommand, Debug)]
enum PoissonCmd {
    Verify {
        /// Comma-separated fibre dimensions, e.g. 2,3,2.
        #[arg(long, default_value = "2,3,2")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// "rationals" or a prime modulus.
        #[arg(long, default_value = "101")]
        field: String,
    },
}

/// Field-dependent point sampling for monad certificates: finite fields
/// enumerate the curve, the rationals supply no points (certificates that
/// need them report Inconclusive honestly).
pub trait CurveSampler: JsonField + Sized {
    fn curve_points(
        alg: &GradedAlgebra<Self>,
        scheme: &elliptic::PointScheme<Self>,
    ) -> Vec<elliptic::EPoint<Self>>;
}

impl CurveSampler for PrimeField {
    fn curve_points(
        alg: &GradedAlgebra<Self>,
        scheme: &elliptic::PointScheme<Self>,
    ) -> Vec<elliptic::EPoint<Self>> {
        if scheme.degenerate {
            // User cubic: enumerate its zero locus directly.
            return elliptic::projective_plane_points(&alg.field)
                .into_iter()
                .filter(|p| alg.field.is_zero(&scheme.cubic_at(&alg.field, p)))
                .collect();
        }
        elliptic::enumerate_points(&alg.field, scheme)
    }
}

impl CurveSampler for Rationals {
    fn curve_points(
        _alg: &GradedAlgebra<Self>,
        _scheme: &elliptic::PointScheme<Self>,
    ) -> Vec<elliptic::EPoint<Self>> {
        Vec::new()
    }
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    if s == "rationals" || s == "q" || s == "Q" {
        Ok(FieldSpec::rationals())
    } else {
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Usage(format!("--field must be 'rationals' or a prime, got {s:?}")))?;
        Ok(FieldSpec::prime(p))
    }
}

fn parse_family(s: &str) -> Result<Family> {
    match s {
        "polynomial" => Ok(Family::Polynomial),
        "sklyanin" => Ok(Family::Sklyanin),
        "homogenized-weyl" | "weyl" => Ok(Family::HomogenizedWeyl),
        "qdeform" | "q-deform" => Ok(Family::QDeform),
        _ => Err(Error::Usage(format!("unknown family {s:?}"))),
    }
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad integer {t:?} in list")))
        })
        .collect()
}

fn parse_cubic(s: &str) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (word, coeff) = match part.split_once(':') {
            Some((w, c)) => (
                w.to_string(),
                c.parse()
                    .map_err(|_| Error::Usage(format!("bad coefficient in {part:?}")))?,
            ),
            None => (part.to_string(), 1),
        };
        out.insert(word, coeff);
    }
    if out.is_empty() {
        return Err(Error::Usage("empty cubic".into()));
    }
    Ok(out)
}

fn spec_from_flags(flags: &AlgebraFlags) -> Result<AlgebraSpec> {
    let family = parse_family(&flags.family)?;
    let mut spec = AlgebraSpec::new(parse_field(&flags.field)?, family.clone(), parse_i64_list(&flags.params)?)
        .with_degree_bound(flags.degree_bound);
    if family == Family::Polynomial {
        spec.cubic_g = Some(parse_cubic(&flags.cubic_g)?);
    }
    Ok(spec)
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn spec_from_file(v: &Value) -> Result<AlgebraSpec> {
    let spec_v = v
        .get("algebra")
        .cloned()
        .unwrap_or_else(|| v.clone());
    Ok(serde_json::from_value(spec_v)?)
}

/// Runs either field instantiation of a generic handler.
macro_rules! dispatch_field {
    ($spec:expr, $handler:ident ( $($arg:expr),* )) => {
        match &$spec.field {
            FieldSpec::Prime { p } => {
                let field = PrimeField::new(*p)?;
                let alg = build_algebra(field, &$spec)?;
                $handler(&alg $(, $arg)*)
            }
            FieldSpec::Rationals(_) => {
                let alg = build_algebra(Rationals, &$spec)?;
                $handler(&alg $(, $arg)*)
            }
        }
    };
}

/// Entry point used by both the binary and the tests.
pub fn run(args: Vec<String>) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own usage text; route it to stderr via code 2.
            eprint!("{e}");
            return (2, String::new());
        }
    };
    match execute(cli.command) {
        Ok((code, value)) => {
            let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
            text.push('\n');
            (code, text)
        }
        Err(e) => {
            let value = json!({
                "error_kind": e.kind(),
                "message": e.to_string(),
            });
            let mut text = serde_json::to_string_pretty(&value).expect("error serializes");
            text.push('\n');
            (2, text)
        }
    }
}

fn execute(cmd: Command) -> Result<(i32, Value)> {
    match cmd {
        Command::Algebra { sub } => match sub {
            AlgebraCmd::Check { flags } => {
                let spec = spec_from_flags(&flags)?;
                dispatch_field!(spec, algebra_check())
            }
            AlgebraCmd::Hilbert { flags, d } => {
                let spec = spec_from_flags(&flags)?;
                dispatch_field!(spec, algebra_hilbert(d))
            }
        },
        Command::Curve { algebra, samples } => {
            let file = read_json(&algebra)?;
            let spec = spec_from_file(&file)?;
            dispatch_field!(spec, curve_report(samples))
        }
        Command::Points { sub } => match sub {
            PointsCmd::Ideal {
                algebra,
                count,
                seed,
            } => {
                let file = read_json(&algebra)?;
                let spec = spec_from_file(&file)?;
                match &spec.field {
                    FieldSpec::Prime { p } => {
                        let alg = build_algebra(PrimeField::new(*p)?, &spec)?;
                        points_ideal(&alg, count, seed)
                    }
                    FieldSpec::Rationals(_) => Err(Error::Usage(
                        "points ideal samples the curve over a finite field".into(),
                    )),
                }
            }
        },
        Command::Module { sub } => match sub {
            ModuleCmd::Invariants { module } => {
                let file = read_json(&module)?;
                let spec = spec_from_file(&file)?;
                dispatch_field!(spec, module_invariants(&file))
            }
            ModuleCmd::Cohomology { module, twists } => {
                let file = read_json(&module)?;
                let spec = spec_from_file(&file)?;
                let twists = parse_i64_list(&twists)?;
                dispatch_field!(spec, module_cohomology(&file, &twists))
            }
            ModuleCmd::Restrict { module } => {
                let file = read_json(&module)?;
                let spec = spec_from_file(&file)?;
                dispatch_field!(spec, module_restrict(&file))
            }
        },
        Command::Monad { sub } => match sub {
            MonadCmd::Check { complex } => {
                let file = read_json(&complex)?;
                let spec = spec_from_file(&file)?;
                dispatch_field!(spec, monad_check(&file))
            }
            MonadCmd::Cohomology { complex } => {
                let file = read_json(&complex)?;
                let spec = spec_from_file(&file)?;
                dispatch_field!(spec, monad_cohomology_report(&file))
            }
        },
        Command::Stability { sub } => match sub {
            StabilityCmd::Check {
                complex,
                mode,
                ext,
                budget,
            } => {
                let file = read_json(&complex)?;
                let spec = spec_from_file(&file)?;
                let exts: Vec<usize> = parse_i64_list(&ext)?
                    .into_iter()
                    .map(|e| e.max(1) as usize)
                    .collect();
                match &spec.field {
                    FieldSpec::Prime { p } => {
                        let alg = build_algebra(PrimeField::new(*p)?, &spec)?;
                        stability_check(&alg, &file, &mode, &exts, budget)
                    }
                    FieldSpec::Rationals(_) => Err(Error::Usage(
                        "stability enumeration needs a finite base field".into(),
                    )),
                }
            }
        },
        Command::Git { sub } => match sub {
            GitCmd::Weights {
                r,
                c1,
                chi,
                m,
                trials,
                seed,
            } => git_weights_report(r, c1, chi, m, trials, seed),
        },
        Command::Adhm { sub } => match sub {
            AdhmCmd::Build {
                n,
                r,
                seed,
                field,
                degree_bound,
            } => adhm_build(n, r, seed, &field, degree_bound),
            AdhmCmd::Check {
                n,
                r,
                seed,
                datum,
                field,
                degree_bound,
            } => adhm_check(n, r, seed, datum, &field, degree_bound),
        },
        Command::Ext { sub } => match sub {
            ExtCmd::Dims { complex, complex_l } => {
                let file = read_json(&complex)?;
                let file_l = match &complex_l {
                    Some(p) => read_json(p)?,
                    None => file.clone(),
                };
                let spec = spec_from_file(&file)?;
                dispatch_field!(spec, ext_dims_report(&file, &file_l))
            }
        },
        Command::Moduli { sub } => match sub {
            ModuliCmd::Dim { r, c1, chi } => {
                let dimension = kronecker::moduli_dimension(r, c1, chi)?;
                Ok((0, json!({ "dimension": dimension })))
            }
            ModuliCmd::Fine { r, c1, chi } => {
                let fine = kronecker::fine_moduli_predicate(r, c1, chi)?;
                Ok((if fine { 0 } else { 1 }, json!({ "fine": fine })))
            }
        },
        Command::Poisson { sub } => match sub {
            PoissonCmd::Verify {
                dims,
                trials,
                seed,
                field,
            } => poisson_verify(&dims, trials, seed, &field),
        },
    }
}

fn algebra_check<F: CurveSampler>(alg: &GradedAlgebra<F>) -> Result<(i32, Value)> {
    let f = &alg.field;
    let bound = alg.degree_bound();
    let dims: Vec<usize> = (0..=bound as i64)
        .map(|d| alg.dim(d))
        .collect();
    let g = alg.g();
    let cert = alg.normality_certificate(g)?;
    let mut b_dims = Vec::new();
    for d in 0..=bound.min(8) as i64 {
        b_dims.push(alg.quotient_b_dim(d)?);
    }
    Ok((
        0,
        json!({
            "family": alg.spec.family,
            "field": alg.spec.field.to_string(),
            "degree_bound": bound,
            "hilbert": dims,
            "g": g.coords.iter().map(|c| f.fmt_elem(c)).collect::<Vec<_>>(),
            "g_basis_words": alg.basis_words(3),
            "normality_rank": cert,
            "b_dims": b_dims,
        }),
    ))
}

fn algebra_hilbert<F: CurveSampler>(alg: &GradedAlgebra<F>, d: i64) -> Result<(i32, Value)> {
    Ok((0, json!({ "dim": alg.hilbert_function(d)?, "degree_bound": alg.degree_bound() })))
}

fn curve_report<F: CurveSampler>(alg: &GradedAlgebra<F>, samples: usize) -> Result<(i32, Value)> {
    let f = &alg.field;
    let scheme = elliptic::point_scheme(alg)?;
    let coeffs: Vec<Value> = scheme
        .cubic_coefficients(f)
        .into_iter()
        .map(|((a, b, c), s)| json!({ "monomial": [a, b, c], "coeff": s }))
        .collect();
    let pts = F::curve_points(alg, &scheme);
    let mut pairs = Vec::new();
    for p in pts.iter().take(samples) {
        if let Ok(q) = elliptic::sigma(alg, &scheme, p) {
            let fmt3 =
                |e: &elliptic::EPoint<F>| -> Vec<String> { e.coords.iter().map(|c| f.fmt_elem(c)).collect() };
            pairs.push(json!({ "point": fmt3(p), "sigma": fmt3(&q) }));
        }
    }
    Ok((
        0,
        json!({
            "cubic": coeffs,
            "degenerate": scheme.degenerate,
            "points_on_curve": pts.len(),
            "sigma_pairs": pairs,
            "degree_bound": alg.degree_bound(),
        }),
    ))
}

fn points_ideal(
    alg: &GradedAlgebra<PrimeField>,
    count: usize,
    seed: u64,
) -> Result<(i32, Value)> {
    let f = &alg.field;
    let scheme = elliptic::point_scheme(alg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = elliptic::sample_generic_points(alg, &scheme, count, &mut rng)?;
    let mut ideal = elliptic::ideal_of_points(alg, &scheme, &pts)?;
    let inv = ideal.invariants(alg)?;
    let vc = ideal.verify_vanishing_condition(alg)?;
    let hf: Vec<usize> = (0..=alg.degree_bound() as i64)
        .map(|d| ideal.hilbert(d).unwrap_or(0))
        .collect();
    Ok((
        0,
        json!({
            "points": pts
                .iter()
                .map(|p| p.coords.iter().map(|c| f.fmt_elem(c)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "invariants": inv,
            "vanishing_condition": vc,
            "hilbert": hf,
            "seed": seed,
            "degree_bound": alg.degree_bound(),
        }),
    ))
}

fn module_from_file<F: JsonField>(
    alg: &GradedAlgebra<F>,
    file: &Value,
) -> Result<ModulePresentation<F>> {
    let map = io::graded_map_from_json(alg, file)?;
    ModulePresentation::from_cokernel(alg, &map)
}

fn module_invariants<F: CurveSampler>(
    alg: &GradedAlgebra<F>,
    file: &Value,
) -> Result<(i32, Value)> {
    let mut m = module_from_file(alg, file)?;
    let inv = m.invariants(alg)?;
    let res = m.resolution(alg)?;
    let twists: Vec<Vec<i64>> = res.steps.iter().map(|s| s.twists.clone()).collect();
    Ok((
        0,
        json!({
            "invariants": inv,
            "resolution_twists": twists,
            "regularity": res.regularity,
            "degree_bound": alg.degree_bound(),
        }),
    ))
}

fn module_cohomology<F: CurveSampler>(
    alg: &GradedAlgebra<F>,
    file: &Value,
    twists: &[i64],
) -> Result<(i32, Value)> {
    let mut m = module_from_file(alg, file)?;
    let table = m.cohomology_table(alg, twists.iter().copied())?;
    Ok((
        0,
        json!({ "table": table, "degree_bound": alg.degree_bound() }),
    ))
}

fn module_restrict<F: CurveSampler>(
    alg: &GradedAlgebra<F>,
    file: &Value,
) -> Result<(i32, Value)> {
    let m = module_from_file(alg, file)?;
    let table = elliptic::restrict_to_e(alg, &m)?;
    Ok((
        0,
        json!({ "restriction_hilbert": table, "degree_bound": alg.degree_bound() }),
    ))
}

fn complex_from_file<F: JsonField>(
    alg: &GradedAlgebra<F>,
    file: &Value,
) -> Result<KroneckerComplex<F>> {
    io::complex_from_json(alg, file)
}

fn monad_check<F: CurveSampler>(alg: &GradedAlgebra<F>, file: &Value) -> Result<(i32, Value)> {
    let k = complex_from_file(alg, file)?;
    let scheme = elliptic::point_scheme(alg)?;
    let pts = F::curve_points(alg, &scheme);
    let report = kronecker::is_monad(alg, &k, &pts)?;
    let code = if report.monad { 0 } else { 1 };
    Ok((
        code,
        json!({
            "report": report,
            "invariants": kronecker::complex_invariants(&k),
            "degree_bound": alg.degree_bound(),
        }),
    ))
}

fn monad_cohomology_report<F: CurveSampler>(
    alg: &GradedAlgebra<F>,
    file: &Value,
) -> Result<(i32, Value)> {
    let k = complex_from_file(alg, file)?;
    let mut coh = kronecker::monad_cohomology(alg, &k)?;
    let inv = coh.invariants(alg)?;
    let hf: Vec<usize> = (0..coh.data.hi())
        .map(|d| coh.hilbert(d).unwrap_or(0))
        .collect();
    Ok((
        0,
        json!({
            "invariants": inv,
            "hilbert": hf,
            "complex_invariants": kronecker::complex_invariants(&k),
            "degree_bound": alg.degree_bound(),
        }),
    ))
}

fn stability_check(
    alg: &GradedAlgebra<PrimeField>,
    file: &Value,
    mode: &str,
    exts: &[usize],
    budget: u64,
) -> Result<(i32, Value)> {
    let k = complex_from_file(alg, file)?;
    let report = kronecker::check_semistable(&alg.field, &k, exts, budget)?;
    let pass = match mode {
        "strict" => report.verdict == Verdict::Stable,
        "semi" => report.verdict != Verdict::Unstable,
        other => {
            return Err(Error::Usage(format!(
                "--mode must be strict or semi, got {other:?}"
            )))
        }
    };
    Ok((
        if pass { 0 } else { 1 },
        json!({
            "mode": mode,
            "report": report,
            "invariants": kronecker::complex_invariants(&k),
        }),
    ))
}

fn git_weights_report(
    r: i64,
    c1: i64,
    chi: i64,
    m: Option<i64>,
    trials: usize,
    seed: u64,
) -> Result<(i32, Value)> {
    use rand::Rng;
    let m_eff = match m {
        Some(v) => v,
        None => kronecker::effective_m(r, c1, chi)?,
    };
    let (k, l) = kronecker::git_weights(r, c1, chi, m_eff);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holds = true;
    for _ in 0..trials {
        let n_p = rng.gen_range(0..20i64);
        let kp = rng.gen_range(0..12i64);
        let lp = rng.gen_range(0..12i64);
        let (lhs, rhs) = kronecker::git_identity_sides(r, c1, chi, m_eff, n_p, kp, lp);
        if lhs != rhs {
            holds = false;
            break;
        }
    }
    Ok((
        if holds { 0 } else { 1 },
        json!({
            "k": k,
            "l": l,
            "m": m_eff,
            "identity_trials": trials,
            "identity_holds": holds,
            "seed": seed,
        }),
    ))
}

fn weyl_algebra(field: &str, degree_bound: usize) -> Result<GradedAlgebra<PrimeField>> {
    let spec = parse_field(field)?;
    let FieldSpec::Prime { p } = spec else {
        return Err(Error::Usage(
            "the ADHM commands sample over a finite field".into(),
        ));
    };
    let spec = AlgebraSpec::new(FieldSpec::prime(p), Family::HomogenizedWeyl, vec![])
        .with_degree_bound(degree_bound);
    build_algebra(PrimeField::new(p)?, &spec)
}

fn adhm_build(
    n: usize,
    r: usize,
    seed: u64,
    field: &str,
    degree_bound: usize,
) -> Result<(i32, Value)> {
    let alg = weyl_algebra(field, degree_bound)?;
    let f = &alg.field;
    let kappa = adhm::calibrate_kappa(&alg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = adhm::generate_valid_datum(f, n, r, &kappa, &mut rng)?;
    let (valid, _) = adhm::validate_adhm(f, &d, &kappa);
    Ok((
        0,
        json!({
            "datum": io::adhm_to_json(f, &d),
            "kappa": f.fmt_elem(&kappa),
            "valid": valid,
            "seed": seed,
        }),
    ))
}

fn adhm_check(
    n: Option<usize>,
    r: Option<usize>,
    seed: u64,
    datum: Option<PathBuf>,
    field: &str,
    degree_bound: usize,
) -> Result<(i32, Value)> {
    let alg = weyl_algebra(field, degree_bound)?;
    let f = &alg.field;
    let kappa = adhm::calibrate_kappa(&alg)?;
    let d = match datum {
        Some(path) => {
            let file = read_json(&path)?;
            io::adhm_from_json(f, &file)?
        }
        None => {
            let (n, r) = match (n, r) {
                (Some(n), Some(r)) => (n, r),
                _ => {
                    return Err(Error::Usage(
                        "adhm check needs either --datum or both --n and --r".into(),
                    ))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            adhm::generate_valid_datum(f, n, r, &kappa, &mut rng)?
        }
    };
    let (valid, residual) = adhm::validate_adhm(f, &d, &kappa);
    if !valid {
        return Ok((
            1,
            json!({
                "valid": false,
                "residual": io::matrix_to_json(f, &residual),
                "kappa": f.fmt_elem(&kappa),
            }),
        ));
    }
    let k = adhm::monad_from_adhm(&alg, &d, &kappa)?;
    let scheme = elliptic::point_scheme(&alg)?;
    let pts = PrimeField::curve_points(&alg, &scheme);
    let monad = kronecker::is_monad(&alg, &k, &pts)?;
    let mut coh = kronecker::monad_cohomology(&alg, &k)?;
    let inv = coh.invariants(&alg)?;
    let framed = adhm::check_framing(&alg, &k, d.r)?;
    let ok = monad.monad && framed && inv.triple() == (d.r as i64, 0, d.r as i64 - d.n as i64);
    Ok((
        if ok { 0 } else { 1 },
        json!({
            "valid": true,
            "kappa": f.fmt_elem(&kappa),
            "monad": monad,
            "invariants": inv,
            "framed": framed,
            "seed": seed,
        }),
    ))
}

fn ext_dims_report<F: CurveSampler>(
    alg: &GradedAlgebra<F>,
    file_k: &Value,
    file_l: &Value,
) -> Result<(i32, Value)> {
    let k = complex_from_file(alg, file_k)?;
    let l = complex_from_file(alg, file_l)?;
    let scheme = elliptic::point_scheme(alg)?;
    let pts = F::curve_points(alg, &scheme);
    let (e0, e1, e2) = kronecker::ext_dims(alg, &k, &l, &pts)?;
    let euler = kronecker::euler_pairing(
        kronecker::complex_invariants(&k),
        kronecker::complex_invariants(&l),
    );
    Ok((
        0,
        json!({
            "e0": e0,
            "e1": e1,
            "e2": e2,
            "euler": euler,
            "euler_consistent": e0 as i64 - e1 as i64 + e2 as i64 == euler,
        }),
    ))
}

fn poisson_verify(dims: &str, trials: usize, seed: u64, field: &str) -> Result<(i32, Value)> {
    let dims: Vec<usize> = parse_i64_list(dims)?
        .into_iter()
        .map(|d| d.max(0) as usize)
        .collect();
    if dims.is_empty() {
        return Err(Error::Usage("--dims must be nonempty".into()));
    }
    let spec = parse_field(field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (chain, moment) = match spec {
        FieldSpec::Prime { p } => {
            let f = PrimeField::new(p)?;
            let data = chainpoisson::random_chain_data(&f, &dims, &mut rng)?;
            (
                chainpoisson::verify_chain_identities(&f, &data, trials, &mut rng)?,
                chainpoisson::verify_moment_identity(&f, &data, trials, &mut rng)?,
            )
        }
        FieldSpec::Rationals(_) => {
            let f = Rationals;
            let data = chainpoisson::random_chain_data(&f, &dims, &mut rng)?;
            (
                chainpoisson::verify_chain_identities(&f, &data, trials, &mut rng)?,
                chainpoisson::verify_moment_identity(&f, &data, trials, &mut rng)?,
            )
        }
    };
    Ok((
        0,
        json!({
            "dims": dims,
            "chain_identities": chain,
            "moment_identity": moment,
            "seed": seed,
        }),
    ))
}
