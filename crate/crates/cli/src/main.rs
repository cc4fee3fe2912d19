mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lamcore::ball::{beta_inv, boundary_from_pair, ray_limit, BallPoint, ScaledPair, Surd};
use lamcore::core_complex::{build_core, Sqrt};
use lamcore::decomposition::decompose_pair;
use lamcore::dualtree::{dual_tree, translation_length};
use lamcore::lamination::{intersection_number, WeightedMulticurve};
use lamcore::mcg::{check_mixed_fixing, classify, default_order_bound, order, NTDiagnosis};
use lamcore::mixed::{mixed_from_pair, spectrum, MixedStructure};
use lamcore::rational::fmt_q;
use lamcore::sample::{random_lamination, rng};
use lamcore::surface::{surface, trace_components, NormalMulticurve};
use num::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use input::Fixtures;

#[derive(Parser)]
#[command(
    name = "lamcore",
    version,
    about = "Pairs of measured laminations, their cores and mixed structures"
)]
struct Cli {
    /// Genus for named curves and expressions.
    #[arg(long, global = true, default_value_t = 2)]
    genus: usize,
    /// Directory of `<name>.json` curve documents that override the built-in chain.
    #[arg(long, global = true, env = "LAMCORE_FIXTURES")]
    fixtures: Option<PathBuf>,
    /// Seed for randomized samplers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch inputs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Pretty-print the output document.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Surfaces.
    #[command(subcommand)]
    Surf(SurfCmd),
    /// Single laminations.
    #[command(subcommand)]
    Lam(LamCmd),
    /// Pairs of laminations.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Dual trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Mapping classes.
    #[command(subcommand)]
    Mcg(McgCmd),
    /// The ball model.
    #[command(subcommand)]
    Ball(BallCmd),
}

#[derive(Subcommand)]
enum SurfCmd {
    /// The canonical triangulated surface.
    Gen {
        /// Also list the fixture curves.
        #[arg(long)]
        list_fixtures: bool,
    },
}

#[derive(Subcommand)]
enum LamCmd {
    /// Check a lamination or multicurve document.
    Validate { input: String },
    /// Components with multiplicities or weights.
    Components { input: String },
    /// Random laminations from the seeded sampler.
    Sample {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_entry: u64,
        #[arg(long, default_value_t = 8)]
        max_weight: i64,
    },
}

#[derive(Args, Clone)]
struct PairArgs {
    /// First lamination: file, `-`, inline JSON, or an expression like `2*c1 + c3`.
    #[arg(long, required_unless_present = "batch")]
    a: Option<String>,
    #[arg(long, required_unless_present = "batch")]
    b: Option<String>,
    /// JSON array of {"a": …, "b": …}; results come back in input order.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    batch: Option<String>,
}

#[derive(Subcommand)]
enum PairCmd {
    /// Geometric intersection number.
    Intersect(PairArgs),
    /// Filling pieces, laminar pieces and the curve system.
    Decompose(PairArgs),
    /// Core of the product of dual trees.
    Core(PairArgs),
    /// The dual mixed structure.
    Mixed(PairArgs),
    /// Length spectrum on probe curves (all fixtures by default).
    Spectrum {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "curve")]
        curves: Vec<String>,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// The simplicial tree dual to a multicurve.
    Dual { lam: String },
    /// Translation length of a curve in the dual tree.
    Length {
        lam: String,
        #[arg(long)]
        curve: String,
    },
}

#[derive(Subcommand)]
enum McgCmd {
    /// Image of a lamination.
    Apply {
        #[arg(long)]
        word: String,
        lam: String,
    },
    /// Finite order of a word, if any.
    Order {
        #[arg(long)]
        word: String,
        /// Largest order tried; defaults to 4g+2.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Nielsen-Thurston type from growth and reduction.
    Classify {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 50)]
        budget: usize,
    },
    /// Whether the word fixes the mixed structure of a pair, and what that forces.
    FixCheck {
        #[arg(long)]
        word: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Subcommand)]
enum BallCmd {
    /// β of a coordinate vector, or its inverse on an interior point.
    Beta {
        /// Comma-separated rationals.
        #[arg(long, required_unless_present = "inverse")]
        v1: Option<String>,
        #[arg(long, required_unless_present = "inverse")]
        v2: Option<String>,
        /// An interior ball point document to pull back.
        #[arg(long, conflicts_with_all = ["v1", "v2"])]
        inverse: Option<String>,
    },
    /// β along the ray t·q with exact distances to the limit.
    Ray {
        #[arg(long)]
        v1: String,
        #[arg(long)]
        v2: String,
        #[arg(long, default_value = "1,10,100,1000")]
        samples: String,
    },
    /// The boundary point of a pair.
    Boundary {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

/// A document and the exit status that goes with it.
struct Output {
    doc: Value,
    budget_exceeded: bool,
}

impl From<Value> for Output {
    fn from(doc: Value) -> Self {
        Output {
            doc,
            budget_exceeded: false,
        }
    }
}

fn sqrt_doc(s: &Sqrt) -> Value {
    json!({ "sqrt_of": fmt_q(&s.0), "approx": s.value() })
}

fn surd_doc(s: &Surd) -> Value {
    serde_json::to_value(s.to_doc()).expect("serializable")
}

fn genus_of_vector(len: usize) -> Result<usize> {
    if len == 0 || !len.is_multiple_of(6) {
        bail!("vectors need 6g-6 entries, got {len}");
    }
    Ok(len / 6 + 1)
}

fn pair_inputs(
    fx: &Fixtures,
    p: &PairArgs,
) -> Result<Vec<(WeightedMulticurve, WeightedMulticurve)>> {
    match (&p.batch, &p.a, &p.b) {
        (Some(src), _, _) => {
            let v: Value =
                serde_json::from_str(&input::read_source(src)?).context("parsing batch")?;
            let Value::Array(items) = v else {
                bail!("batch must be a JSON array")
            };
            items
                .iter()
                .enumerate()
                .map(|(i, it)| {
                    let get = |k: &str| {
                        it.get(k)
                            .with_context(|| format!("batch item {i} lacks {k:?}"))
                            .and_then(|v| input::lamination_value(fx, v))
                            .with_context(|| format!("batch item {i}"))
                    };
                    Ok((get("a")?, get("b")?))
                })
                .collect()
        }
        (None, Some(a), Some(b)) => {
            Ok(vec![(input::lamination(fx, a)?, input::lamination(fx, b)?)])
        }
        _ => bail!("need --a and --b, or --batch"),
    }
}

/// One result per input pair, in order; a single pair gives a bare document.
fn per_pair<F>(fx: &Fixtures, p: &PairArgs, f: F) -> Result<Output>
where
    F: Fn(&WeightedMulticurve, &WeightedMulticurve) -> Result<Value> + Sync,
{
    let pairs = pair_inputs(fx, p)?;
    let out: Vec<Value> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| f(x, y).with_context(|| format!("pair {i}")))
        .collect::<Result<_>>()?;
    Ok(if p.batch.is_some() {
        Value::Array(out)
    } else {
        out.into_iter().next().expect("one pair")
    }
    .into())
}

fn surf(cmd: SurfCmd, fx: &Fixtures) -> Result<Output> {
    match cmd {
        SurfCmd::Gen { list_fixtures } => {
            let s = surface(fx.genus)?;
            let mut doc = serde_json::to_value(s.to_doc())?;
            if list_fixtures {
                let names: Vec<String> = s.labels().iter().map(|(n, _)| n.clone()).collect();
                let list = names
                    .iter()
                    .map(|n| Ok(json!({ "name": n, "coords": fx.curve(n)?.coords() })))
                    .collect::<Result<Vec<_>>>()?;
                doc["fixtures"] = Value::Array(list);
            }
            Ok(doc.into())
        }
    }
}

fn lam(cmd: LamCmd, fx: &Fixtures, seed: u64) -> Result<Output> {
    match cmd {
        LamCmd::Validate { input } => {
            let x = input::lamination(fx, &input)?;
            Ok(
                json!({ "valid": true, "genus": x.genus(), "components": x.components().len() })
                    .into(),
            )
        }
        LamCmd::Components { input } => {
            let text = input::read_source(&input)?;
            let t = text.trim();
            // a bare multicurve reports multiplicities, a lamination its weights
            if t.starts_with('{') && !t.contains("\"components\"") {
                let m: NormalMulticurve = serde_json::from_str(t)?;
                let comps: Vec<Value> = trace_components(&m)?
                    .into_iter()
                    .map(|(c, k)| json!({ "coords": c.coords(), "multiplicity": k }))
                    .collect();
                return Ok(Value::Array(comps).into());
            }
            let x = input::lamination(fx, &input)?;
            let comps: Vec<Value> = x
                .components()
                .iter()
                .map(|(c, w)| json!({ "coords": c.coords(), "weight": fmt_q(w) }))
                .collect();
            Ok(Value::Array(comps).into())
        }
        LamCmd::Sample {
            count,
            max_entry,
            max_weight,
        } => {
            let mut r = rng(seed);
            let xs: Vec<Value> = (0..count)
                .map(|_| {
                    serde_json::to_value(random_lamination(fx.genus, max_entry, max_weight, &mut r))
                })
                .collect::<std::result::Result<_, _>>()?;
            Ok(Value::Array(xs).into())
        }
    }
}

fn probes(fx: &Fixtures, names: &[String]) -> Result<Vec<(String, NormalMulticurve)>> {
    if names.is_empty() {
        let s = surface(fx.genus)?;
        return s
            .labels()
            .iter()
            .map(|(n, _)| Ok((n.clone(), fx.curve(n)?)))
            .collect();
    }
    names
        .iter()
        .map(|n| Ok((n.clone(), input::curve(fx, n)?)))
        .collect()
}

fn pair(cmd: PairCmd, fx: &Fixtures) -> Result<Output> {
    match cmd {
        PairCmd::Intersect(p) => per_pair(fx, &p, |x, y| {
            Ok(json!({ "intersection": fmt_q(&intersection_number(x, y)?) }))
        }),
        PairCmd::Decompose(p) => per_pair(fx, &p, |x, y| {
            Ok(serde_json::to_value(decompose_pair(x, y)?)?)
        }),
        PairCmd::Core(p) => per_pair(fx, &p, |x, y| {
            Ok(serde_json::to_value(build_core(x, y)?.to_doc())?)
        }),
        PairCmd::Mixed(p) => per_pair(fx, &p, |x, y| {
            Ok(serde_json::to_value(mixed_from_pair(x, y)?.to_doc())?)
        }),
        PairCmd::Spectrum { pair: p, curves } => {
            let gs = probes(fx, &curves)?;
            per_pair(fx, &p, |x, y| {
                let m = mixed_from_pair(x, y)?;
                let rows = gs
                    .iter()
                    .map(|(n, g)| {
                        let s = spectrum(&m, g)?;
                        Ok(json!({ "curve": n, "l1": fmt_q(&s.l1), "euclidean_lower": sqrt_doc(&s.lo), "euclidean_upper": fmt_q(&s.hi) }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(json!({ "kind": m.kind, "spectrum": rows }))
            })
        }
    }
}

fn tree(cmd: TreeCmd, fx: &Fixtures) -> Result<Output> {
    match cmd {
        TreeCmd::Dual { lam } => {
            Ok(serde_json::to_value(dual_tree(&input::lamination(fx, &lam)?)?.to_doc())?.into())
        }
        TreeCmd::Length { lam, curve } => {
            let t = dual_tree(&input::lamination(fx, &lam)?)?;
            let l = translation_length(&t, &input::curve(fx, &curve)?)?;
            Ok(json!({ "length": fmt_q(&l) }).into())
        }
    }
}

fn mcg(cmd: McgCmd, fx: &Fixtures) -> Result<Output> {
    match cmd {
        McgCmd::Apply { word, lam } => {
            let f = fx.word(&word)?;
            Ok(serde_json::to_value(f.apply(&input::lamination(fx, &lam)?)?)?.into())
        }
        McgCmd::Order { word, bound } => {
            let f = fx.word(&word)?;
            let full = default_order_bound(fx.genus);
            let bound = bound.unwrap_or(full);
            let k = order(&f, bound);
            // no order up to 4g+2 means infinite order; a smaller bound only exhausts the budget
            let infinite = k.is_none() && bound >= full;
            Ok(Output {
                doc: json!({ "word": f.to_string(), "order": k, "bound": bound, "infinite": infinite }),
                budget_exceeded: k.is_none() && !infinite,
            })
        }
        McgCmd::Classify { word, budget } => {
            let f = fx.word(&word)?;
            let d = classify(&f, budget);
            let exhausted = matches!(&d, NTDiagnosis::Inconclusive { reason, .. } if reason == "budget exhausted");
            let mut doc = serde_json::to_value(&d)?;
            doc["word"] = json!(f.to_string());
            Ok(Output {
                doc,
                budget_exceeded: exhausted,
            })
        }
        McgCmd::FixCheck { word, a, b } => {
            let f = fx.word(&word)?;
            let m: MixedStructure =
                mixed_from_pair(&input::lamination(fx, &a)?, &input::lamination(fx, &b)?)?;
            Ok(serde_json::to_value(check_mixed_fixing(&f, &m)?)?.into())
        }
    }
}

fn ball(cmd: BallCmd) -> Result<Output> {
    match cmd {
        BallCmd::Beta { v1, v2, inverse } => {
            if let Some(src) = inverse {
                let p: BallPoint = serde_json::from_str(&input::read_source(&src)?)
                    .context("parsing ball point")?;
                let BallPoint::Interior { p, .. } = p else {
                    bail!("boundary points have no preimage")
                };
                let v = beta_inv(&p)?;
                let entries: Vec<Vec<Value>> = [&v.v[0], &v.v[1]]
                    .iter()
                    .map(|row| row.iter().map(|e| surd_doc(&v.scale.scale(e))).collect())
                    .collect();
                let doc = match v.rational_entries() {
                    Some([a, b]) => {
                        json!({ "v": [a.iter().map(fmt_q).collect::<Vec<_>>(), b.iter().map(fmt_q).collect::<Vec<_>>()] })
                    }
                    None => json!({ "v": entries }),
                };
                return Ok(doc.into());
            }
            let (a, b) = (
                input::rationals(&v1.unwrap_or_default())?,
                input::rationals(&v2.unwrap_or_default())?,
            );
            let g = genus_of_vector(a.len())?;
            let p = BallPoint::from_vector(g, &ScaledPair::new(a, b)?)?;
            Ok(serde_json::to_value(p)?.into())
        }
        BallCmd::Ray { v1, v2, samples } => {
            let q = ScaledPair::new(input::rationals(&v1)?, input::rationals(&v2)?)?;
            let g = genus_of_vector(q.len())?;
            let ts = input::rationals(&samples)?;
            let rep = ray_limit(&q, &ts)?;
            let point = |p: &ScaledPair| -> Result<Value> {
                Ok(serde_json::to_value(BallPoint::interior(g, p.clone())?)?)
            };
            let rows = rep
                .samples
                .iter()
                .map(|s| Ok(json!({ "t": fmt_q(&s.t), "point": point(&s.point)?, "distance": surd_doc(&s.distance) })))
                .collect::<Result<Vec<_>>>()?;
            let limit: Vec<Vec<Value>> = [&rep.limit.v[0], &rep.limit.v[1]]
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| surd_doc(&rep.limit.scale.scale(e)))
                        .collect()
                })
                .collect();
            Ok(json!({ "samples": rows, "limit": limit, "decreasing": rep.decreasing }).into())
        }
        BallCmd::Boundary { .. } => unreachable!("handled with fixtures"),
    }
}

fn boundary(fx: &Fixtures, a: &str, b: &str) -> Result<Output> {
    let p = boundary_from_pair(&input::lamination(fx, a)?, &input::lamination(fx, b)?)?;
    let mut doc = serde_json::to_value(&p)?;
    if let BallPoint::Boundary { norm_sq, .. } = &p {
        doc["norm_approx"] = json!(norm_sq.to_f64().map(f64::sqrt));
    }
    Ok(doc.into())
}

fn run(cli: Cli) -> Result<Output> {
    let fx = Fixtures {
        genus: cli.genus,
        dir: cli.fixtures.clone(),
    };
    surface(fx.genus)?;
    match cli.cmd {
        Cmd::Surf(c) => surf(c, &fx),
        Cmd::Lam(c) => lam(c, &fx, cli.seed),
        Cmd::Pair(c) => pair(c, &fx),
        Cmd::Tree(c) => tree(c, &fx),
        Cmd::Mcg(c) => mcg(c, &fx),
        Cmd::Ball(BallCmd::Boundary { a, b }) => boundary(&fx, &a, &b),
        Cmd::Ball(c) => ball(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let pretty = cli.pretty;
    match run(cli) {
        Ok(out) => {
            let text = if pretty {
                serde_json::to_string_pretty(&out.doc)
            } else {
                serde_json::to_string(&out.doc)
            };
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{}", text.expect("documents serialize")) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if out.budget_exceeded {
                eprintln!("budget exceeded");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
