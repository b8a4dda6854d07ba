//! JSON documents for scenes, curves and reports.
//!
//! Rationals are written as `"p/q"` strings (reduced, positive denominator)
//! and floats as JSON numbers. Coefficient vectors use the graded
//! lexicographic monomial order of [`crate::multilinear`]. Every top-level
//! document carries `"schema_version": 1`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::camera::Camera;
use crate::chow::{ChowForm, PlaneCurveParam, SpaceCurve, TwistedCubicParam};
use crate::numeric::{int, parse_rational, rational_to_string, Complex64, Mat, Rational, Scalar};
use crate::projection::{Arrangement, ImageCurve};
use crate::sampling::{arrangement_to, curve_to, image_to};

pub const SCHEMA_VERSION: u64 = 1;

/// Order tag attached to serialized Chow forms.
pub const CHOW_ORDER: &str = "grlex-L0..L5";

/// Malformed or inconsistent input document.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("{location}: {message}")]
pub struct InputError {
    pub code: String,
    pub message: String,
    /// JSON pointer into the offending document.
    pub location: String,
}

impl InputError {
    pub fn new(code: &str, location: &str, message: impl Into<String>) -> Self {
        InputError {
            code: code.into(),
            message: message.into(),
            location: location.into(),
        }
    }

    pub fn schema(location: &str, message: impl Into<String>) -> Self {
        Self::new("schema", location, message)
    }

    /// A domain error raised while building an object at `location`.
    pub fn domain(location: &str, e: crate::Error) -> Self {
        Self::new(e.code(), location, e.to_string())
    }

    pub fn to_json(&self) -> Value {
        json!({"code": self.code, "message": self.message, "location": self.location})
    }
}

type IoResult<T> = std::result::Result<T, InputError>;

/// Scalars with a JSON representation.
pub trait JsonScalar: Scalar {
    const FIELD: Field;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl JsonScalar for Rational {
    const FIELD: Field = Field::Rational;

    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    /// Accepts `"p/q"`, `"p"` and JSON integers.
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(int),
            _ => None,
        }
    }
}

impl JsonScalar for f64 {
    const FIELD: Field = Field::F64;

    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => parse_rational(s).map(|q| Scalar::to_f64(&q)),
            _ => None,
        }
    }
}

/// Coefficient field of a document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    F64,
}

/// Gaussian noise that was added to the observations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub sigma: f64,
    pub seed: u64,
}

/// Cameras with an optional curve and optional observed image curves.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneDoc<T> {
    pub arrangement: Arrangement<T>,
    pub curve: Option<SpaceCurve<T>>,
    pub observations: Option<Vec<ImageCurve<T>>>,
    pub noise: Option<Noise>,
}

/// A scene in whichever field the document declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScene {
    Rational(SceneDoc<Rational>),
    F64(SceneDoc<f64>),
}

impl AnyScene {
    pub fn field(&self) -> Field {
        match self {
            AnyScene::Rational(_) => Field::Rational,
            AnyScene::F64(_) => Field::F64,
        }
    }

    /// The scene in floating point, converting rational entries.
    pub fn to_f64(&self) -> IoResult<SceneDoc<f64>> {
        match self {
            AnyScene::F64(s) => Ok(s.clone()),
            AnyScene::Rational(s) => s.to_f64(),
        }
    }
}

impl SceneDoc<Rational> {
    pub fn to_f64(&self) -> IoResult<SceneDoc<f64>> {
        let conv = |e| InputError::domain("", e);
        Ok(SceneDoc {
            arrangement: arrangement_to(&self.arrangement).map_err(conv)?,
            curve: self.curve.as_ref().map(curve_to).transpose().map_err(conv)?,
            observations: self
                .observations
                .as_ref()
                .map(|v| v.iter().map(image_to).collect::<crate::Result<Vec<_>>>())
                .transpose()
                .map_err(conv)?,
            noise: self.noise,
        })
    }
}

pub fn vec_to_json<T: JsonScalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

pub fn mat_to_json<T: JsonScalar>(m: &Mat<T>) -> Value {
    Value::Array((0..m.nrows()).map(|r| vec_to_json(m.row(r))).collect())
}

/// Complex matrices as rows of `[re, im]` pairs.
pub fn complex_mat_to_json(m: &Mat<Complex64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array(m.row(r).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

pub fn camera_to_json<T: JsonScalar>(c: &Camera<T>) -> Value {
    json!({"matrix": mat_to_json(c.matrix())})
}

pub fn chow_to_json<T: JsonScalar>(b: &ChowForm<T>) -> Value {
    json!({"degree": b.degree(), "coeffs": vec_to_json(b.coeffs()), "order": CHOW_ORDER})
}

pub fn plane_curve_to_json<T: JsonScalar>(p: &PlaneCurveParam<T>) -> Value {
    json!({
        "type": "plane",
        "degree": p.degree(),
        "h": vec_to_json(p.h.coords()),
        "alpha": vec_to_json(p.alpha.coords()),
    })
}

pub fn curve_to_json<T: JsonScalar>(c: &SpaceCurve<T>) -> Value {
    match c {
        SpaceCurve::Plane(p) => plane_curve_to_json(p),
        SpaceCurve::Twisted(t) => json!({"type": "twisted", "m": vec_to_json(t.m.coords())}),
        SpaceCurve::Chow(b) => {
            let mut v = chow_to_json(b);
            v["type"] = json!("chow");
            v
        }
    }
}

pub fn observations_to_json<T: JsonScalar>(views: &[ImageCurve<T>]) -> Value {
    json!({
        "degree": views.first().map_or(0, ImageCurve::degree),
        "views": views.iter().map(|v| vec_to_json(v.coeffs())).collect::<Vec<_>>(),
    })
}

/// Adds the schema version to a top-level object.
pub fn document(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    v
}

pub fn scene_to_json<T: JsonScalar>(s: &SceneDoc<T>) -> Value {
    let mut m = Map::new();
    m.insert("field".into(), json!(T::FIELD));
    m.insert(
        "cameras".into(),
        Value::Array(s.arrangement.cameras().iter().map(camera_to_json).collect()),
    );
    if let Some(c) = &s.curve {
        m.insert("curve".into(), curve_to_json(c));
    }
    if let Some(o) = &s.observations {
        m.insert("observations".into(), observations_to_json(o));
    }
    if let Some(n) = &s.noise {
        m.insert("noise".into(), json!(n));
    }
    document(Value::Object(m))
}

pub fn any_scene_to_json(s: &AnyScene) -> Value {
    match s {
        AnyScene::Rational(s) => scene_to_json(s),
        AnyScene::F64(s) => scene_to_json(s),
    }
}

fn field<'a>(v: &'a Value, key: &str, loc: &str) -> IoResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| InputError::schema(loc, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, loc: &str) -> IoResult<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| InputError::schema(loc, "expected an array"))
}

fn scalars<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<Vec<T>> {
    array(v, loc)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            T::from_json(x).ok_or_else(|| {
                InputError::schema(&format!("{loc}/{i}"), format!("not a {:?} scalar: {x}", T::FIELD))
            })
        })
        .collect()
}

fn matrix<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<Mat<T>> {
    let rows = array(v, loc)?
        .iter()
        .enumerate()
        .map(|(i, r)| scalars::<T>(r, &format!("{loc}/{i}")))
        .collect::<IoResult<Vec<_>>>()?;
    Mat::from_rows(rows).map_err(|e| InputError::domain(loc, e))
}

fn usize_field(v: &Value, key: &str, loc: &str) -> IoResult<usize> {
    field(v, key, loc)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| InputError::schema(&format!("{loc}/{key}"), "expected a nonnegative integer"))
}

pub fn camera_from_json<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<Camera<T>> {
    let mloc = format!("{loc}/matrix");
    let m = matrix::<T>(field(v, "matrix", loc)?, &mloc)?;
    if m.shape() != (3, 4) {
        return Err(InputError::schema(&mloc, "camera matrix must be 3x4"));
    }
    Camera::new(m).map_err(|e| InputError::domain(&mloc, e))
}

pub fn plane_curve_from_json<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<PlaneCurveParam<T>> {
    let h = scalars::<T>(field(v, "h", loc)?, &format!("{loc}/h"))?;
    let alpha = scalars::<T>(field(v, "alpha", loc)?, &format!("{loc}/alpha"))?;
    PlaneCurveParam::new(h, alpha).map_err(|e| InputError::domain(loc, e))
}

pub fn curve_from_json<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<SpaceCurve<T>> {
    let kind = field(v, "type", loc)?
        .as_str()
        .ok_or_else(|| InputError::schema(&format!("{loc}/type"), "expected a string"))?;
    match kind {
        "plane" => Ok(SpaceCurve::Plane(plane_curve_from_json(v, loc)?)),
        "twisted" => {
            let m = scalars::<T>(field(v, "m", loc)?, &format!("{loc}/m"))?;
            let t = TwistedCubicParam::new(m).map_err(|e| InputError::domain(loc, e))?;
            Ok(SpaceCurve::Twisted(t))
        }
        "chow" => {
            if let Some(order) = v.get("order") {
                if order != CHOW_ORDER {
                    return Err(InputError::schema(
                        &format!("{loc}/order"),
                        format!("unsupported monomial order {order}"),
                    ));
                }
            }
            let d = usize_field(v, "degree", loc)?;
            let c = scalars::<T>(field(v, "coeffs", loc)?, &format!("{loc}/coeffs"))?;
            let b = ChowForm::new(d, c).map_err(|e| InputError::domain(loc, e))?;
            Ok(SpaceCurve::Chow(b))
        }
        other => Err(InputError::schema(
            &format!("{loc}/type"),
            format!("unknown curve type \"{other}\""),
        )),
    }
}

pub fn observations_from_json<T: JsonScalar>(v: &Value, loc: &str) -> IoResult<Vec<ImageCurve<T>>> {
    let d = usize_field(v, "degree", loc)?;
    let views = array(field(v, "views", loc)?, &format!("{loc}/views"))?;
    views
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let vloc = format!("{loc}/views/{i}");
            let g = ImageCurve::new(scalars::<T>(g, &vloc)?)
                .map_err(|e| InputError::domain(&vloc, e))?;
            if g.degree() != d {
                return Err(InputError::new(
                    "invalid-degree",
                    &vloc,
                    format!("view has degree {}, document declares {d}", g.degree()),
                ));
            }
            Ok(g)
        })
        .collect()
}

fn check_version(v: &Value) -> IoResult<()> {
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(InputError::schema(
            "/schema_version",
            format!("unsupported schema version {other}"),
        )),
        None => Err(InputError::schema("/schema_version", "missing schema version")),
    }
}

fn scene_in<T: JsonScalar>(v: &Value) -> IoResult<SceneDoc<T>> {
    let cams = array(field(v, "cameras", "")?, "/cameras")?;
    if cams.is_empty() {
        return Err(InputError::schema("/cameras", "at least one camera is required"));
    }
    let cameras = cams
        .iter()
        .enumerate()
        .map(|(i, c)| camera_from_json::<T>(c, &format!("/cameras/{i}")))
        .collect::<IoResult<Vec<_>>>()?;
    let arrangement = Arrangement::new(cameras).map_err(|e| InputError::domain("/cameras", e))?;
    let curve = v
        .get("curve")
        .map(|c| curve_from_json::<T>(c, "/curve"))
        .transpose()?;
    let observations = v
        .get("observations")
        .map(|o| observations_from_json::<T>(o, "/observations"))
        .transpose()?;
    if let Some(obs) = &observations {
        if obs.len() != arrangement.len() {
            return Err(InputError::schema(
                "/observations/views",
                format!("{} views for {} cameras", obs.len(), arrangement.len()),
            ));
        }
        if let (Some(c), Some(g)) = (&curve, obs.first()) {
            if c.degree() != g.degree() {
                return Err(InputError::new(
                    "invalid-degree",
                    "/observations/degree",
                    format!("curve has degree {}, observations {}", c.degree(), g.degree()),
                ));
            }
        }
    }
    let noise = v
        .get("noise")
        .map(|n| {
            serde_json::from_value::<Noise>(n.clone())
                .map_err(|e| InputError::schema("/noise", e.to_string()))
        })
        .transpose()?;
    Ok(SceneDoc {
        arrangement,
        curve,
        observations,
        noise,
    })
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &str) -> IoResult<AnyScene> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        InputError::new("parse", &format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    if !v.is_object() {
        return Err(InputError::schema("", "expected a JSON object"));
    }
    check_version(&v)?;
    let f: Field = serde_json::from_value(field(&v, "field", "")?.clone())
        .map_err(|_| InputError::schema("/field", "expected \"rational\" or \"f64\""))?;
    Ok(match f {
        Field::Rational => AnyScene::Rational(scene_in(&v)?),
        Field::F64 => AnyScene::F64(scene_in(&v)?),
    })
}
