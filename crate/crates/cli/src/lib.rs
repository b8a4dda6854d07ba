//! JSON-speaking command line experiments over curvemv.
//!
//! Exit codes: 0 when the command succeeded and any verdict is positive,
//! 1 for a negative verdict, 2 for invalid input (with an error document on
//! stdout).

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use curvemv::chow::{tw_fiber_complex, tw_fiber_rational, Fiber, SpaceCurve};
use curvemv::consistency::{arrangement_simple, n_view_check, reconstruct_two_view, two_view_check};
use curvemv::io::{
    complex_mat_to_json, document, mat_to_json, parse_scene, plane_curve_to_json, scene_to_json,
    vec_to_json, AnyScene, InputError, JsonScalar, Noise, SceneDoc,
};
use curvemv::projection::{joint_project, ImageCurve};
use curvemv::sampling::{random_scene, rng, CurveKind};
use curvemv::triangulation::{dim_probe, multistart, LmOptions, Model, Objective};
use curvemv::{Error, Rational, DEFAULT_TOL};
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "curvemv", version, about = "Multiview geometry of conics, plane curves and twisted cubics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for floating-point verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// Number of cameras to sample.
    #[arg(long, global = true, default_value_t = 2)]
    cameras: usize,
    #[arg(long, global = true, value_enum)]
    kind: Option<KindArg>,
    /// Standard deviation of the noise added to unit-normalized observations.
    #[arg(long, global = true, default_value_t = 0.0)]
    noise: f64,
    /// Random starts for triangulation.
    #[arg(long, global = true, default_value_t = 100)]
    starts: usize,
    /// Read the input document from a file instead of stdin.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write the output document to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Sample a random rational scene (cameras and curve).
    Generate,
    /// Add the image curves of the scene's curve.
    Project,
    /// Two-view conic consistency of the first two views.
    CheckTwoView,
    /// Simplicity of the arrangement and n-view conic consistency.
    CheckArrangement,
    /// Plane conics compatible with the first two views.
    Reconstruct,
    /// Multistart nearest-point search for the observations.
    Triangulate,
    /// Jacobian rank of the joint image map at a random curve.
    DimProbe,
    /// Reparametrizations fixing the Chow form of a twisted cubic.
    TwFiber,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FieldArg {
    Rational,
    F64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    Conic,
    #[value(name = "plane3")]
    Plane3,
    Twisted,
}

impl KindArg {
    fn curve_kind(self) -> CurveKind {
        match self {
            KindArg::Conic => CurveKind::Conic,
            KindArg::Plane3 => CurveKind::PlaneCubic,
            KindArg::Twisted => CurveKind::Twisted,
        }
    }

    fn model(self) -> Model {
        match self {
            KindArg::Conic => Model::PlaneCurve { degree: 2 },
            KindArg::Plane3 => Model::PlaneCurve { degree: 3 },
            KindArg::Twisted => Model::Twisted,
        }
    }
}

/// Output document and exit code.
struct Outcome {
    doc: Value,
    code: i32,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }

    fn verdict(doc: Value, verdict: bool) -> Self {
        Outcome {
            doc,
            code: if verdict { 0 } else { 1 },
        }
    }
}

type CmdResult = Result<Outcome, InputError>;

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn error_output(e: &InputError) -> (String, i32) {
    (render(&document(json!({"error": e.to_json()}))), 2)
}

/// Runs one command line (without the program name) and returns its stdout
/// and exit code. `stdin` is read only by commands that take an input document.
pub fn run<R: Read>(args: &[String], stdin: R) -> (String, i32) {
    let cli = match Cli::try_parse_from(std::iter::once("curvemv".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (e.to_string(), 0),
                _ => error_output(&InputError::new("usage", "argv", e.to_string())),
            };
        }
    };
    let result = dispatch(&cli, stdin);
    let (text, code) = match result {
        Ok(out) => (render(&document(out.doc)), out.code),
        Err(e) => return error_output(&e),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => (String::new(), code),
            Err(e) => error_output(&InputError::new("io", &path.display().to_string(), e.to_string())),
        },
        None => (text, code),
    }
}

fn dispatch<R: Read>(cli: &Cli, stdin: R) -> CmdResult {
    match cli.command {
        Command::Generate => generate(cli),
        Command::DimProbe => probe(cli),
        cmd => {
            let scene = load(cli, stdin)?;
            match cmd {
                Command::Project => project(cli, scene),
                Command::CheckTwoView => on_field(scene, |s| check_two_view(cli, s), |s| check_two_view(cli, s)),
                Command::CheckArrangement => {
                    on_field(scene, |s| check_arrangement(cli, s), |s| check_arrangement(cli, s))
                }
                Command::Reconstruct => on_field(scene, |s| reconstruct(cli, s), |s| reconstruct(cli, s)),
                Command::Triangulate => triangulate(cli, scene),
                Command::TwFiber => tw_fiber(scene),
                Command::Generate | Command::DimProbe => unreachable!("handled above"),
            }
        }
    }
}

fn load<R: Read>(cli: &Cli, mut stdin: R) -> Result<AnyScene, InputError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| InputError::new("io", &path.display().to_string(), e.to_string()))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| InputError::new("io", "stdin", e.to_string()))?;
            s
        }
    };
    let scene = parse_scene(&text)?;
    match (cli.field, &scene) {
        (Some(FieldArg::F64), AnyScene::Rational(s)) => Ok(AnyScene::F64(s.to_f64()?)),
        (Some(FieldArg::Rational), AnyScene::F64(_)) => Err(InputError::new(
            "usage",
            "--field",
            "a floating-point document cannot be read as rational",
        )),
        _ => Ok(scene),
    }
}

fn on_field(
    scene: AnyScene,
    exact: impl FnOnce(&SceneDoc<Rational>) -> CmdResult,
    float: impl FnOnce(&SceneDoc<f64>) -> CmdResult,
) -> CmdResult {
    match &scene {
        AnyScene::Rational(s) => exact(s),
        AnyScene::F64(s) => float(s),
    }
}

fn tol_for<T: JsonScalar>(cli: &Cli) -> f64 {
    if T::EXACT {
        0.0
    } else {
        cli.tol.unwrap_or(DEFAULT_TOL)
    }
}

fn require_views<T>(s: &SceneDoc<T>, at_least: usize) -> Result<&[ImageCurve<T>], InputError> {
    let views = s
        .observations
        .as_deref()
        .ok_or_else(|| InputError::schema("/observations", "the command needs observations"))?;
    if views.len() < at_least {
        return Err(InputError::schema(
            "/observations/views",
            format!("the command needs at least {at_least} views"),
        ));
    }
    Ok(views)
}

fn generate(cli: &Cli) -> CmdResult {
    if cli.cameras == 0 {
        return Err(InputError::new("usage", "--cameras", "at least one camera is required"));
    }
    let kind = cli.kind.unwrap_or(KindArg::Conic).curve_kind();
    let s = random_scene(&mut rng(cli.seed), cli.cameras, kind);
    let doc = SceneDoc {
        arrangement: s.arrangement,
        curve: Some(s.curve),
        observations: None,
        noise: None,
    };
    Ok(Outcome::ok(match cli.field {
        Some(FieldArg::F64) => scene_to_json(&doc.to_f64()?),
        _ => scene_to_json(&doc),
    }))
}

fn with_observations<T: JsonScalar>(s: &SceneDoc<T>) -> Result<SceneDoc<T>, InputError> {
    let curve = s
        .curve
        .as_ref()
        .ok_or_else(|| InputError::schema("/curve", "the command needs a curve"))?;
    let views = joint_project(&s.arrangement, curve).map_err(|e| InputError::domain("/curve", e))?;
    Ok(SceneDoc {
        observations: Some(views),
        ..s.clone()
    })
}

fn project(cli: &Cli, scene: AnyScene) -> CmdResult {
    if cli.noise < 0.0 || !cli.noise.is_finite() {
        return Err(InputError::new("usage", "--noise", "noise must be a finite nonnegative number"));
    }
    if cli.noise == 0.0 {
        return Ok(Outcome::ok(match &scene {
            AnyScene::Rational(s) => scene_to_json(&with_observations(s)?),
            AnyScene::F64(s) => scene_to_json(&with_observations(s)?),
        }));
    }
    let mut s = with_observations(&scene.to_f64()?)?;
    let mut r = rng(cli.seed);
    let noisy = s
        .observations
        .as_ref()
        .expect("just projected")
        .iter()
        .map(|g| {
            let norm = g.coeffs().iter().map(|x| x * x).sum::<f64>().sqrt();
            let coeffs = g
                .coeffs()
                .iter()
                .map(|x| {
                    let z: f64 = StandardNormal.sample(&mut r);
                    x / norm + cli.noise * z
                })
                .collect();
            ImageCurve::new(coeffs).map_err(|e| InputError::domain("/observations", e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    s.observations = Some(noisy);
    s.noise = Some(Noise {
        sigma: cli.noise,
        seed: cli.seed,
    });
    Ok(Outcome::ok(scene_to_json(&s)))
}

fn check_two_view<T: JsonScalar>(cli: &Cli, s: &SceneDoc<T>) -> CmdResult {
    let views = require_views(s, 2)?;
    let cams = s.arrangement.cameras();
    let rep = two_view_check(&cams[0], &cams[1], &views[0], &views[1], tol_for::<T>(cli))
        .map_err(|e| InputError::domain("/observations", e))?;
    let mut diagnostics = Vec::new();
    if rep.degenerate_first {
        diagnostics.push("view 0 is a double line or a line pair through the epipole");
    }
    if rep.degenerate_second {
        diagnostics.push("view 1 is a double line or a line pair through the epipole");
    }
    Ok(Outcome::verdict(
        json!({
            "verdict": rep.verdict,
            "witness": Value::Null,
            "diagnostics": diagnostics,
            "case": rep.case,
            "minors": vec_to_json(&rep.matrix.minors()),
        }),
        rep.verdict,
    ))
}

fn check_arrangement<T: JsonScalar>(cli: &Cli, s: &SceneDoc<T>) -> CmdResult {
    let simple = arrangement_simple(&s.arrangement.centers())
        .map_err(|e| InputError::domain("/cameras", e))?;
    let simplicity = serde_json::to_value(&simple).expect("serializable report");
    let Some(views) = s.observations.as_deref() else {
        return Ok(Outcome::verdict(
            json!({
                "verdict": simple.verdict,
                "witness": Value::Null,
                "supported": true,
                "diagnostics": [],
                "simplicity": simplicity,
            }),
            simple.verdict,
        ));
    };
    let v = n_view_check(&s.arrangement, views, tol_for::<T>(cli))
        .map_err(|e| InputError::domain("/observations", e))?;
    Ok(Outcome::verdict(
        json!({
            "verdict": v.verdict,
            "witness": v.witness.as_ref().map_or(Value::Null, plane_curve_to_json),
            "supported": v.supported,
            "diagnostics": v.diagnostics,
            "simplicity": simplicity,
        }),
        v.verdict,
    ))
}

fn reconstruct<T: JsonScalar>(cli: &Cli, s: &SceneDoc<T>) -> CmdResult {
    let views = require_views(s, 2)?;
    let cams = s.arrangement.cameras();
    match reconstruct_two_view(&cams[0], &cams[1], &views[0], &views[1], tol_for::<T>(cli)) {
        Ok(rec) => Ok(Outcome::ok(json!({
            "candidates": rec.candidates.iter().map(plane_curve_to_json).collect::<Vec<_>>(),
            "multiplicity": rec.multiplicity,
        }))),
        Err(e @ Error::NoPlanarSolution(_)) => Ok(Outcome::verdict(
            json!({"candidates": [], "diagnostics": [e.to_string()]}),
            false,
        )),
        Err(e) => Err(InputError::domain("/observations", e)),
    }
}

fn model_for(cli: &Cli, s: &SceneDoc<f64>, degree: usize) -> Result<Model, InputError> {
    if let Some(k) = cli.kind {
        return Ok(k.model());
    }
    match &s.curve {
        Some(SpaceCurve::Plane(p)) => Ok(Model::PlaneCurve { degree: p.degree() }),
        Some(SpaceCurve::Twisted(_)) => Ok(Model::Twisted),
        _ if degree == 2 => Ok(Model::PlaneCurve { degree: 2 }),
        _ => Err(InputError::new(
            "usage",
            "--kind",
            format!("degree-{degree} observations are ambiguous, pass --kind"),
        )),
    }
}

fn model_name(model: Model) -> &'static str {
    match model {
        Model::PlaneCurve { degree: 2 } => "conic",
        Model::PlaneCurve { .. } => "plane",
        Model::Twisted => "twisted",
    }
}

fn triangulate(cli: &Cli, scene: AnyScene) -> CmdResult {
    if cli.starts == 0 {
        return Err(InputError::new("usage", "--starts", "at least one start is required"));
    }
    let s = scene.to_f64()?;
    let views = require_views(&s, 1)?;
    let model = model_for(cli, &s, views[0].degree())?;
    if model.image_degree() != views[0].degree() {
        return Err(InputError::new(
            "invalid-degree",
            "/observations/degree",
            format!("the model needs degree-{} observations", model.image_degree()),
        ));
    }
    let obj = Objective::new(&s.arrangement, views, model).map_err(|e| InputError::domain("/observations", e))?;
    let rep = multistart(&obj, cli.starts, cli.seed, &LmOptions::default());
    let points: Vec<Value> = rep
        .points
        .iter()
        .map(|p| {
            json!({
                "params": obj.full_params(&p.params),
                "objective": p.objective,
                "grad_norm": p.grad_norm,
                "hits": p.hits,
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "model": model_name(model),
        "points": points,
        "starts": rep.starts,
        "converged": rep.converged,
        "seed": rep.seed,
    })))
}

fn probe(cli: &Cli) -> CmdResult {
    if cli.cameras == 0 {
        return Err(InputError::new("usage", "--cameras", "at least one camera is required"));
    }
    let kind = cli.kind.unwrap_or(KindArg::Conic);
    let mut r = rng(cli.seed);
    for _ in 0..100 {
        let s = random_scene(&mut r, cli.cameras, kind.curve_kind())
            .to_field::<f64>()
            .map_err(|e| InputError::domain("", e))?;
        let full: Vec<f64> = match &s.curve {
            SpaceCurve::Plane(p) => p.h.coords().iter().chain(p.alpha.coords()).copied().collect(),
            SpaceCurve::Twisted(t) => t.m.coords().to_vec(),
            SpaceCurve::Chow(_) => unreachable!("the sampler draws parametrized curves"),
        };
        match dim_probe(&s.arrangement, kind.model(), &full) {
            Ok(p) => {
                return Ok(Outcome::verdict(
                    json!({
                        "rank": p.rank,
                        "expected": p.expected,
                        "gap": p.gap,
                        "singular_values": p.singular_values,
                    }),
                    p.rank == p.expected,
                ))
            }
            Err(Error::ChartDegenerate { .. }) => continue,
            Err(e) => return Err(InputError::domain("", e)),
        }
    }
    Err(InputError::new(
        "chart-degenerate",
        "",
        "no sampled curve had images in the standard chart",
    ))
}

fn tw_fiber(scene: AnyScene) -> CmdResult {
    let not_twisted = || InputError::schema("/curve", "the command needs a twisted cubic");
    let (exact, fiber) = match &scene {
        AnyScene::Rational(s) => {
            let Some(SpaceCurve::Twisted(t)) = &s.curve else { return Err(not_twisted()) };
            match tw_fiber_rational(t).map_err(|e| InputError::domain("/curve/m", e))? {
                Fiber::Exact(f) => (true, f.iter().map(mat_to_json).collect::<Vec<_>>()),
                Fiber::Numeric(f) => (false, f.iter().map(complex_mat_to_json).collect()),
            }
        }
        AnyScene::F64(s) => {
            let Some(SpaceCurve::Twisted(t)) = &s.curve else { return Err(not_twisted()) };
            let f = tw_fiber_complex(t).map_err(|e| InputError::domain("/curve/m", e))?;
            (false, f.iter().map(complex_mat_to_json).collect())
        }
    };
    Ok(Outcome::ok(json!({"exact": exact, "fiber": fiber})))
}
