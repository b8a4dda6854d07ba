//! Seeded random scenes with small integer entries.
//!
//! Entries are drawn uniformly from `[-9, 9]`. Samples that violate a
//! genericity condition (rank-deficient camera, plane through a center,
//! reducible conic, center on the curve, non-simple arrangement) are redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::camera::Camera;
use crate::chow::{iota_tw, PlaneCurveParam, SpaceCurve, TwistedCubicParam};
use crate::consistency::arrangement_simple;
use crate::error::Result;
use crate::multilinear::monomial_count;
use crate::numeric::{from_rational, int, Mat, Rational, Scalar};
use crate::projection::{joint_project, quadric_matrix, Arrangement, ImageCurve};

/// Curve families the generators produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    #[serde(rename = "conic")]
    Conic,
    #[serde(rename = "plane3")]
    PlaneCubic,
    #[serde(rename = "twisted")]
    Twisted,
}

impl CurveKind {
    pub fn degree(self) -> usize {
        match self {
            CurveKind::Conic => 2,
            CurveKind::PlaneCubic | CurveKind::Twisted => 3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int<R: Rng>(rng: &mut R) -> i64 {
    rng.random_range(-9..=9)
}

fn small_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| small_int(rng)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(int).collect();
        }
    }
}

pub fn random_camera<R: Rng>(rng: &mut R) -> Camera<Rational> {
    loop {
        let m = Mat::new(3, 4, small_vec(rng, 12)).expect("3x4");
        if let Ok(c) = Camera::new(m) {
            return c;
        }
    }
}

/// `n` cameras with a simple center configuration.
pub fn random_arrangement<R: Rng>(rng: &mut R, n: usize) -> Arrangement<Rational> {
    loop {
        let cams: Vec<_> = (0..n).map(|_| random_camera(rng)).collect();
        let arr = Arrangement::new(cams).expect("nonempty");
        if arrangement_simple(&arr.centers()).is_ok_and(|r| r.verdict) {
            return arr;
        }
    }
}

/// Plane curve of degree `d`; conics are irreducible.
pub fn random_plane_curve<R: Rng>(rng: &mut R, d: usize) -> PlaneCurveParam<Rational> {
    loop {
        let h = small_vec(rng, 4);
        let alpha = small_vec(rng, monomial_count(d, 3));
        if d == 2 && quadric_matrix(3, &alpha).det().is_zero() {
            continue;
        }
        return PlaneCurveParam::new(h, alpha).expect("valid sizes");
    }
}

pub fn random_twisted<R: Rng>(rng: &mut R) -> TwistedCubicParam<Rational> {
    loop {
        let t = TwistedCubicParam::new(small_vec(rng, 13)).expect("13 entries");
        if iota_tw(&t).is_ok() {
            return t;
        }
    }
}

pub fn random_curve<R: Rng>(rng: &mut R, kind: CurveKind) -> SpaceCurve<Rational> {
    match kind {
        CurveKind::Conic => SpaceCurve::Plane(random_plane_curve(rng, 2)),
        CurveKind::PlaneCubic => SpaceCurve::Plane(random_plane_curve(rng, 3)),
        CurveKind::Twisted => SpaceCurve::Twisted(random_twisted(rng)),
    }
}

/// Cameras, a curve and its images.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene<T> {
    pub arrangement: Arrangement<T>,
    pub curve: SpaceCurve<T>,
    pub views: Vec<ImageCurve<T>>,
}

/// Scene whose curve avoids every center and whose plane (if any) avoids them too.
pub fn random_scene<R: Rng>(rng: &mut R, n: usize, kind: CurveKind) -> Scene<Rational> {
    loop {
        let arrangement = random_arrangement(rng, n);
        let curve = random_curve(rng, kind);
        let Ok(views) = joint_project(&arrangement, &curve) else {
            continue;
        };
        if kind == CurveKind::Conic
            && views
                .iter()
                .any(|v| quadric_matrix(3, v.coeffs()).det().is_zero())
        {
            continue;
        }
        return Scene {
            arrangement,
            curve,
            views,
        };
    }
}

fn conv<T: Scalar>(v: &[Rational]) -> Vec<T> {
    v.iter().map(from_rational).collect()
}

pub fn camera_to<T: Scalar>(c: &Camera<Rational>) -> Result<Camera<T>> {
    Camera::new(c.matrix().map(from_rational))
}

pub fn arrangement_to<T: Scalar>(a: &Arrangement<Rational>) -> Result<Arrangement<T>> {
    Arrangement::new(a.cameras().iter().map(camera_to).collect::<Result<_>>()?)
}

pub fn curve_to<T: Scalar>(c: &SpaceCurve<Rational>) -> Result<SpaceCurve<T>> {
    Ok(match c {
        SpaceCurve::Plane(p) => {
            SpaceCurve::Plane(PlaneCurveParam::new(conv(p.h.coords()), conv(p.alpha.coords()))?)
        }
        SpaceCurve::Twisted(t) => SpaceCurve::Twisted(TwistedCubicParam::new(conv(&t.m))?),
        SpaceCurve::Chow(b) => {
            SpaceCurve::Chow(crate::chow::ChowForm::new(b.degree(), conv(b.coeffs()))?)
        }
    })
}

pub fn image_to<T: Scalar>(g: &ImageCurve<Rational>) -> Result<ImageCurve<T>> {
    ImageCurve::new(conv(g.coeffs()))
}

impl Scene<Rational> {
    /// The same scene with entries converted to another field.
    pub fn to_field<T: Scalar>(&self) -> Result<Scene<T>> {
        Ok(Scene {
            arrangement: arrangement_to(&self.arrangement)?,
            curve: curve_to(&self.curve)?,
            views: self.views.iter().map(image_to).collect::<Result<_>>()?,
        })
    }
}
