use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ffbertini::construct::{
    self, AntiBertini, PointRef, SearchFile, SearchResult, SearchSpec, VarietyRef,
};
use ffbertini::geometry::{self, ClosedPoint, SubschemeSpec};
use ffbertini::gf::FieldDesc;
use ffbertini::mpoly::{HomogPoly, MonomialTable};
use ffbertini::sieve::{self, DensityEstimate, JetPoint, JetScheme, Predicate, CSV_HEADER};
use ffbertini::smoothness::{self, SingularityClass};
use ffbertini::zeta;
use ffbertini::Error;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::report::{self, float, rational};

/// What a command produced, before timing and bookkeeping are attached.
pub struct Outcome {
    pub params: Value,
    pub result: Value,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } | Error::Overflow(_) => 3,
                Error::Invariant(_) | Error::InconsistentCounts(_) => 4,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Io(_) => "Io".into(),
            CliError::Core(e) => {
                let debug = format!("{e:?}");
                debug
                    .split(|c: char| !c.is_alphanumeric())
                    .next()
                    .unwrap_or_default()
                    .to_string()
            }
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Usage(format!("{what} is randomized and requires --seed")))
}

fn read_text(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    /// Built-in name (P2, A1, katz(1,2), ...) or path to a variety JSON file.
    #[arg(long)]
    pub space: String,
    /// Field order.
    #[arg(long)]
    pub q: Option<u64>,
}

impl SpaceArgs {
    fn field(&self) -> CliResult<Option<FieldDesc>> {
        Ok(self.q.map(FieldDesc::from_order).transpose()?)
    }

    fn resolve(&self) -> CliResult<SubschemeSpec> {
        let field = self.field()?;
        if let Some(x) = SubschemeSpec::builtin(&self.space, field.as_ref())? {
            return Ok(x);
        }
        let x = SubschemeSpec::from_json(&read_text(&PathBuf::from(&self.space))?)?;
        if field.is_some_and(|f| &f != x.field()) {
            return Err(Error::FieldMismatch.into());
        }
        Ok(x)
    }

    fn params(&self, x: &SubschemeSpec) -> Value {
        json!({ "space": self.space, "q": x.field().q(), "n": x.n(), "m": x.m() })
    }
}

/// Parses "3", "2,3,5" or "2..4".
fn degree_list(text: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Usage(format!("bad degree list {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

/// Points separated by ';', each optionally suffixed with @e.
fn point_list(text: &str, field: &FieldDesc) -> CliResult<Vec<ClosedPoint>> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (pt, e) = match t.rsplit_once('@') {
                Some((pt, e)) => (
                    pt,
                    e.parse()
                        .map_err(|_| CliError::Usage(format!("bad point degree in {t}")))?,
                ),
                None => (t, 1),
            };
            Ok(ClosedPoint::parse(pt, field, e)?)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Mc,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Degree, list "2,3" or range "2..4".
    #[arg(long)]
    pub d: String,
    /// Comma-separated conjunction of smooth, smooth-below=R, nodal,
    /// integral, true.
    #[arg(long, default_value = "smooth")]
    pub pred: String,
    #[arg(long)]
    pub negate: bool,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Smoothness scan bound; planned automatically when omitted.
    #[arg(long)]
    pub bound: Option<u32>,
    /// Truncation point for zeta predictions of non-standard spaces.
    #[arg(long, default_value_t = 10)]
    pub r: u32,
    /// Cap on forms enumerated in exhaustive mode, and on the integrality search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Append one CSV row per degree to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_predicate(text: &str, x: &SubschemeSpec, args: &DensityArgs) -> CliResult<Predicate> {
    let parts: Vec<Predicate> = text
        .split(',')
        .map(str::trim)
        .map(|t| {
            Ok(match t {
                "true" => Predicate::True,
                "smooth" => Predicate::SmoothIntersection {
                    x: x.clone(),
                    bound: args.bound,
                },
                "nodal" => Predicate::AtWorstNodes { bound: args.bound },
                "integral" => Predicate::GeomIntegral {
                    budget: args.budget.unwrap_or(construct::INTEGRALITY_BUDGET),
                },
                _ => match t.strip_prefix("smooth-below=").map(str::parse) {
                    Some(Ok(r)) => Predicate::SmoothAtPointsBelow { x: x.clone(), r },
                    _ => return Err(CliError::Usage(format!("unknown predicate {t:?}"))),
                },
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(match <[Predicate; 1]>::try_from(parts) {
        Ok([p]) => p,
        Err(parts) => Predicate::And(parts),
    })
}

/// The zeta prediction for predicates that have one.
fn density_prediction(pred: &Predicate, x: &SubschemeSpec, r: u32) -> CliResult<Option<(BigRational, Value)>> {
    let (negated, inner) = match pred {
        Predicate::Not(p) => (true, p.as_ref()),
        p => (false, p),
    };
    let (value, provenance) = match inner {
        Predicate::SmoothIntersection { .. } => {
            let p = zeta::predict_density(x, r)?;
            (p.value, report::provenance(&p.provenance))
        }
        Predicate::SmoothAtPointsBelow { r, .. } => (
            sieve::smooth_below_product(x, *r)?,
            json!({ "kind": "FiniteProduct", "r": r }),
        ),
        _ => return Ok(None),
    };
    let value = if negated { BigRational::one() - value } else { value };
    let v = json!({
        "value": rational(&value),
        "float": float(zeta::to_f64(&value)),
        "provenance": provenance,
    });
    Ok(Some((value, v)))
}

fn estimate_json(e: &DensityEstimate) -> Value {
    json!({
        "d": e.d,
        "mode": e.mode.to_string(),
        "provenance": match e.mode {
            sieve::Mode::Exhaustive => "Exhaustive",
            sieve::Mode::MonteCarlo => "MC",
        },
        "hits": e.hits,
        "total": e.total,
        "fraction": rational(&e.fraction),
        "float": float(e.float),
        "ci95": e.ci95.map_or(Value::Null, |(lo, hi)| json!([float(lo), float(hi)])),
        "predicate": e.predicate,
    })
}

pub fn density(args: &DensityArgs) -> CliResult<Outcome> {
    let x = args.space.resolve()?;
    let field = x.field().clone();
    let degrees = degree_list(&args.d)?;
    let mut pred = parse_predicate(&args.pred, &x, args)?;
    if args.negate {
        pred = pred.negate();
    }
    let seed = match args.mode {
        ModeArg::Mc => Some(require_seed(args.seed, "density --mode mc")?),
        ModeArg::Exhaustive => None,
    };
    let prediction = density_prediction(&pred, &x, args.r)?;
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for &d in &degrees {
        let est = match (args.mode, seed) {
            (ModeArg::Mc, Some(seed)) => sieve::mc_density(&field, x.n(), d, &pred, args.trials, seed)?,
            _ => {
                if let Some(budget) = args.budget {
                    let len = MonomialTable::get(x.n(), d).len() as u32;
                    if field.q().checked_pow(len).is_none_or(|c| c > budget) {
                        return Err(Error::BudgetExceeded {
                            needed: format!("{}^{len} forms", field.q()),
                            budget,
                        }
                        .into());
                    }
                }
                sieve::exhaustive_density(&field, x.n(), d, &pred)?
            }
        };
        let mut run = estimate_json(&est);
        if let Some((value, pv)) = &prediction {
            run["prediction"] = pv.clone();
            run["difference"] = float(est.float - zeta::to_f64(value));
        } else {
            run["prediction"] = Value::Null;
            run["difference"] = Value::Null;
        }
        rows.push(est.csv_row());
        runs.push(run);
    }
    if let Some(path) = &args.csv {
        let mut text = String::from(CSV_HEADER);
        text.push('\n');
        for r in rows {
            text.push_str(&r);
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let mut params = args.space.params(&x);
    params["d"] = json!(degrees);
    params["pred"] = json!(pred.to_string());
    params["mode"] = json!(format!("{:?}", args.mode).to_lowercase());
    params["r"] = json!(args.r);
    if let ModeArg::Mc = args.mode {
        params["trials"] = json!(args.trials);
    }
    Ok(Outcome {
        params,
        result: json!({ "runs": runs }),
        seed,
    })
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub s: u32,
    /// Truncation point for spaces without a closed form.
    #[arg(long, default_value_t = 10)]
    pub r: u32,
    /// Also report every truncation up to r.
    #[arg(long)]
    pub tail: bool,
}

pub fn zeta(args: &ZetaArgs) -> CliResult<Outcome> {
    let x = args.space.resolve()?;
    let mut result = match x.named() {
        Some(kind) => {
            let v = zeta::zeta_inv_closed_form(kind, x.n(), x.field().q(), args.s)?;
            json!({
                "value": rational(&v),
                "float": float(zeta::to_f64(&v)),
                "provenance": { "kind": "ClosedForm" },
            })
        }
        None => {
            let z = zeta::zeta_inv_truncated(&x, args.s, args.r)?;
            json!({
                "value": rational(&z.value),
                "float": float(z.float),
                "terms": z.terms,
                "provenance": report::provenance(&zeta::Provenance::Truncated {
                    r: args.r,
                    stabilization: z.stabilization,
                }),
            })
        }
    };
    if args.tail {
        let t = zeta::tail_report(&x, args.s, args.r)?;
        result["tail"] = t
            .approximations
            .iter()
            .map(|a| json!({ "r": a.r, "value": rational(&a.value), "float": float(a.float) }))
            .collect();
        result["deltas"] = t.deltas.iter().copied().map(float).collect();
        result["monotone"] = json!(t.deltas.iter().all(|&d| d >= 0.0));
    }
    let mut params = args.space.params(&x);
    params["s"] = json!(args.s);
    params["r"] = json!(args.r);
    params["tail"] = json!(args.tail);
    Ok(Outcome {
        params,
        result,
        seed: None,
    })
}

#[derive(Args, Debug)]
pub struct SmoothCheckArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, conflicts_with = "stdin")]
    pub poly: Option<String>,
    /// Read the form from standard input: plain text, or a report with
    /// result.polynomial such as the output of `katz`.
    #[arg(long)]
    pub stdin: bool,
    #[arg(long)]
    pub bound: Option<u32>,
    /// Singular points of a plane curve to classify, as "(a:b:c)" or "(a:b:c)@e".
    #[arg(long)]
    pub classify: Vec<String>,
}

fn poly_from_stdin() -> CliResult<String> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    let text = text.trim();
    if text.starts_with('{') {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("stdin is not a report: {e}")))?;
        return v["result"]["polynomial"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| CliError::Usage("report on stdin has no result.polynomial".into()));
    }
    Ok(text.to_string())
}

pub fn smooth_check(args: &SmoothCheckArgs) -> CliResult<Outcome> {
    let x = args.space.resolve()?;
    let text = match (&args.poly, args.stdin) {
        (Some(p), false) => p.clone(),
        (None, true) => poly_from_stdin()?,
        _ => return Err(CliError::Usage("give exactly one of --poly and --stdin".into())),
    };
    let f = HomogPoly::parse(&text, x.field(), x.n())?;
    let plan = smoothness::plan(&x, f.degree(), args.bound)?;
    let verdict = smoothness::is_smooth_intersection(&f, &x, args.bound)?;
    let section = x.intersect(&f)?;
    let validation = geometry::validate_smooth(&section, plan.bound)?;
    let mut result = json!({
        "polynomial": f.to_string(),
        "degree": f.degree(),
        "plan": { "bound": plan.bound, "exact": plan.exact, "degrees": plan.degrees },
        "verdict": report::verdict(&verdict),
        "validation": report::validation(&validation),
    });
    if !args.classify.is_empty() {
        let mut classes = Vec::new();
        for pt in point_list(&args.classify.join(";"), x.field())? {
            let class = smoothness::classify_singularity(&f, &x, &pt)?;
            classes.push(json!({
                "at": report::point(&pt),
                "class": match class {
                    SingularityClass::Node => "Node",
                    SingularityClass::NonNode { .. } => "NonNode",
                },
                "degenerate_quadratic_part": matches!(
                    class,
                    SingularityClass::NonNode { degenerate_quadratic_part: true }
                ),
            }));
        }
        result["classification"] = Value::Array(classes);
    }
    let mut params = args.space.params(&x);
    params["polynomial"] = json!(f.to_string());
    params["bound"] = json!(args.bound);
    params["classify"] = json!(args.classify);
    Ok(Outcome {
        params,
        result,
        seed: None,
    })
}

#[derive(Args, Debug)]
pub struct JetRankArgs {
    /// "7 rational points of P2(F2)", "degree 2 points of P2(F2)", or a
    /// ';'-separated list of points with --space and --q.
    #[arg(long)]
    pub points: String,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[arg(long)]
    pub d: u32,
}

/// Parses "P2(F4)" into (n, field).
fn space_over(text: &str) -> CliResult<(usize, FieldDesc)> {
    let bad = || CliError::Usage(format!("expected P<n>(F<q>), got {text:?}"));
    let rest = text.strip_prefix('P').ok_or_else(bad)?;
    let (n, q) = rest.split_once("(F").ok_or_else(bad)?;
    let q = q.strip_suffix(')').ok_or_else(bad)?;
    let n = n.trim_start_matches('^').parse().map_err(|_| bad())?;
    let q = q.trim_start_matches('_').parse().map_err(|_| bad())?;
    Ok((n, FieldDesc::from_order(q)?))
}

fn jet_scheme(args: &JetRankArgs) -> CliResult<JetScheme> {
    let words: Vec<&str> = args.points.split_whitespace().collect();
    match words[..] {
        [k, "rational", "points", "of", sp] => {
            let (n, field) = space_over(sp)?;
            let z = JetScheme::points_of_degree(&field, n, 1, args.order)?;
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Usage(format!("bad point count {k:?}")))?;
            if z.points().len() != k {
                return Err(CliError::Usage(format!(
                    "{sp} has {} rational points, not {k}",
                    z.points().len()
                )));
            }
            Ok(z)
        }
        ["degree", e, "points", "of", sp] => {
            let (n, field) = space_over(sp)?;
            let e = e
                .parse()
                .map_err(|_| CliError::Usage(format!("bad degree {e:?}")))?;
            Ok(JetScheme::points_of_degree(&field, n, e, args.order)?)
        }
        _ => {
            let space = SpaceArgs {
                space: args
                    .space
                    .clone()
                    .ok_or_else(|| CliError::Usage("explicit points need --space".into()))?,
                q: args.q,
            };
            let x = space.resolve()?;
            let points = point_list(&args.points, x.field())?
                .into_iter()
                .map(|point| JetPoint {
                    point,
                    order: args.order,
                })
                .collect();
            Ok(JetScheme::new(x.field(), x.n(), points)?)
        }
    }
}

pub fn jet_rank(args: &JetRankArgs) -> CliResult<Outcome> {
    let z = jet_scheme(args)?;
    let r = sieve::jet_map_rank(&z, args.d)?;
    Ok(Outcome {
        params: json!({
            "points": args.points,
            "space": args.space,
            "q": z.field().q(),
            "n": z.n(),
            "order": args.order,
            "d": args.d,
        }),
        result: json!({
            "scheme": z.to_string(),
            "points": z.points().len(),
            "source_dim": r.source_dim,
            "target_dim": r.target_dim,
            "rank": r.rank,
            "surjective": r.surjective,
            "threshold": r.threshold,
        }),
        seed: None,
    })
}

#[derive(Args, Debug)]
pub struct FindArgs {
    /// Search specification as JSON; the flags below build one otherwise.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Points to pass through, ';'-separated, "all" for every rational point.
    #[arg(long)]
    pub through: Option<String>,
    /// Avoid closed points of degree below this.
    #[arg(long)]
    pub avoid: Option<u32>,
    #[arg(long)]
    pub d_min: Option<u32>,
    #[arg(long)]
    pub d_max: Option<u32>,
    /// Candidates examined per degree.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

fn search_file(args: &FindArgs) -> CliResult<SearchFile> {
    if let Some(path) = &args.spec {
        let bad = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
        let value: Value = serde_json::from_str(&read_text(path)?).map_err(bad)?;
        let file_seed = value.get("seed").and_then(Value::as_u64);
        let mut file: SearchFile = serde_json::from_value(value).map_err(bad)?;
        file.seed = require_seed(args.seed.or(file_seed), "find")?;
        if let Some(b) = args.budget {
            file.budget = b;
        }
        return Ok(file);
    }
    let space = SpaceArgs {
        space: args
            .space
            .clone()
            .ok_or_else(|| CliError::Usage("find needs --spec or --space".into()))?,
        q: args.q,
    };
    let x = space.resolve()?;
    let variety = if SubschemeSpec::builtin(&space.space, Some(x.field()))?.is_some() {
        VarietyRef::Named(space.space.clone())
    } else {
        VarietyRef::File(x.to_file())
    };
    let pass_through = match args.through.as_deref() {
        None => Vec::new(),
        Some("all") => geometry::closed_points(&x, 1)?
            .into_iter()
            .map(|p| PointRef {
                point: p.to_string(),
                degree: 1,
            })
            .collect(),
        Some(list) => point_list(list, x.field())?
            .into_iter()
            .map(|p| PointRef {
                point: p.to_string(),
                degree: p.degree(),
            })
            .collect(),
    };
    let seed = require_seed(args.seed, "find")?;
    let d_min = args
        .d_min
        .ok_or_else(|| CliError::Usage("find needs --d-min".into()))?;
    Ok(SearchFile {
        variety,
        p: x.field().p() as u64,
        a: x.field().a(),
        pass_through,
        tangent: Vec::new(),
        avoid_degree_below: args.avoid,
        d_min,
        d_max: args.d_max.unwrap_or(d_min),
        budget: args.budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
        seed,
    })
}

fn search_json(r: &SearchResult) -> Value {
    match r {
        SearchResult::Found {
            f,
            d,
            verdict,
            integrality,
            checked,
            notes,
            candidate,
            sampled,
        } => json!({
            "status": "Found",
            "polynomial": f.to_string(),
            "d": d,
            "verdict": report::verdict(verdict),
            "integrality": report::integrality(integrality),
            "checked": checked,
            "notes": notes,
            "candidate": candidate,
            "sampled": sampled,
        }),
        SearchResult::NotFoundWithinBudget { tried, notes } => json!({
            "status": "NotFoundWithinBudget",
            "tried": tried.iter().map(|(d, c)| json!({ "d": d, "candidates": c })).collect::<Vec<_>>(),
            "notes": notes,
        }),
    }
}

pub fn find(args: &FindArgs) -> CliResult<Outcome> {
    let file = search_file(args)?;
    let seed = file.seed;
    let spec = SearchSpec::from_file(&file)?;
    let result = construct::find_section(&spec)?;
    Ok(Outcome {
        params: serde_json::to_value(&file).expect("serializable"),
        result: search_json(&result),
        seed: Some(seed),
    })
}

#[derive(Args, Debug)]
pub struct AntiBertiniArgs {
    /// Search for a new anti-Bertini hypersurface instead of verifying --space.
    #[arg(long)]
    pub search: bool,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Largest section degree.
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// Bound for validating the smoothness of X.
    #[arg(long, default_value_t = 3)]
    pub bound: u32,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dx_min: Option<u32>,
    #[arg(long)]
    pub dx_max: Option<u32>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn anti_bertini(args: &AntiBertiniArgs) -> CliResult<Outcome> {
    if args.search {
        let seed = require_seed(args.seed, "anti-bertini --search")?;
        let q = args
            .q
            .ok_or_else(|| CliError::Usage("anti-bertini --search needs --q".into()))?;
        let field = FieldDesc::from_order(q)?;
        let n = args.n.unwrap_or(2);
        let dx_min = args.dx_min.unwrap_or(2);
        let dx_max = args.dx_max.unwrap_or(dx_min);
        let budget = args.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
        let result =
            construct::anti_bertini_search(&field, n, args.d, (dx_min, dx_max), budget, seed)?;
        return Ok(Outcome {
            params: json!({
                "mode": "search",
                "q": q,
                "n": n,
                "d": args.d,
                "dx_min": dx_min,
                "dx_max": dx_max,
                "budget": budget,
            }),
            result: search_json(&result),
            seed: Some(seed),
        });
    }
    let space = SpaceArgs {
        space: args
            .space
            .clone()
            .ok_or_else(|| CliError::Usage("anti-bertini needs --space or --search".into()))?,
        q: args.q,
    };
    let x = space.resolve()?;
    let validation = geometry::validate_smooth(&x, args.bound)?;
    let mut result = match construct::verify_anti_bertini(&x, args.d)? {
        AntiBertini::AllSingular(ws) => json!({
            "status": "AllSingular",
            "count": ws.len(),
            "sections": ws
                .iter()
                .map(|w| json!({
                    "g": w.g.to_string(),
                    "witness": w.witness.as_ref().map_or(Value::Null, report::point),
                }))
                .collect::<Vec<_>>(),
        }),
        AntiBertini::CounterexampleFound { g, verdict } => json!({
            "status": "CounterexampleFound",
            "g": g.to_string(),
            "verdict": report::verdict(&verdict),
        }),
    };
    result["validation"] = report::validation(&validation);
    let mut params = space.params(&x);
    params["mode"] = json!("verify");
    params["d"] = json!(args.d);
    params["bound"] = json!(args.bound);
    Ok(Outcome {
        params,
        result,
        seed: None,
    })
}

#[derive(Args, Debug)]
pub struct KatzArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
    /// Validate smoothness up to this closed-point degree.
    #[arg(long)]
    pub validate: Option<u32>,
}

pub fn katz(args: &KatzArgs) -> CliResult<Outcome> {
    let field = FieldDesc::from_order(args.q)?;
    let f = construct::katz_hypersurface(&field, args.pairs);
    let n = 2 * args.pairs + 1;
    let mut result = json!({
        "polynomial": f.to_string(),
        "n": n,
        "degree": f.degree(),
        "space": format!("P{n}"),
    });
    if let Some(b) = args.validate {
        let x = SubschemeSpec::katz(&field, args.pairs);
        result["validation"] = report::validation(&geometry::validate_smooth(&x, b)?);
    }
    Ok(Outcome {
        params: json!({ "q": args.q, "pairs": args.pairs, "validate": args.validate }),
        result,
        seed: None,
    })
}

#[derive(Args, Debug)]
pub struct SquarefreeArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: u64,
    /// With --d, also measure squarefree polynomials of degree d over F_q.
    #[arg(long, requires = "d")]
    pub q: Option<u64>,
    #[arg(long, requires = "q")]
    pub d: Option<u32>,
}

pub fn squarefree(args: &SquarefreeArgs) -> CliResult<Outcome> {
    let s = zeta::squarefree_integer_density(args.limit)?;
    let mut result = json!({
        "integers": {
            "limit": s.limit,
            "count": s.count,
            "fraction": format!("{}/{}", s.fraction.numer(), s.fraction.denom()),
            "float": float(s.float),
            "target": float(s.target),
            "abs_error": float(s.abs_error),
        }
    });
    if let (Some(q), Some(d)) = (args.q, args.d) {
        let field = FieldDesc::from_order(q)?;
        let a1 = SubschemeSpec::affine_space(&field, 1);
        let pred = Predicate::SmoothIntersection {
            x: a1.clone(),
            bound: None,
        };
        let est = sieve::exhaustive_density(&field, 1, d, &pred)?;
        let prediction = zeta::predict_density(&a1, 2)?;
        let mut poly = estimate_json(&est);
        poly["prediction"] = report::prediction(&prediction);
        poly["difference"] = float(est.float - prediction.float);
        result["polynomials"] = poly;
    }
    Ok(Outcome {
        params: json!({ "limit": args.limit, "q": args.q, "d": args.d }),
        result,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(degree_list("3").unwrap(), vec![3]);
        assert_eq!(degree_list("2, 5").unwrap(), vec![2, 5]);
        assert_eq!(degree_list("2..4").unwrap(), vec![2, 3, 4]);
        assert!(degree_list("4..2").is_err());
        assert!(degree_list("x").is_err());
    }

    #[test]
    fn spaces_over_fields() {
        let (n, f) = space_over("P2(F4)").unwrap();
        assert_eq!((n, f.q()), (2, 4));
        assert!(space_over("Q2(F2)").is_err());
        assert!(space_over("P2(F6)").is_err());
    }

    #[test]
    fn exit_codes() {
        let budget = Error::BudgetExceeded { needed: "5".into(), budget: 1 };
        assert_eq!(CliError::from(budget).exit_code(), 3);
        assert_eq!(CliError::from(Error::Invariant("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(Error::NotHomogeneous(1, 2)).exit_code(), 2);
        assert_eq!(CliError::from(Error::NotHomogeneous(1, 2)).kind(), "NotHomogeneous");
    }
}
