//! Fixtures shared by the benchmarks.

use curvemv::chow::SpaceCurve;
use curvemv::sampling::{random_scene, rng, CurveKind, Scene};
use curvemv::triangulation::{Model, Objective};

/// Scene with a fixed seed, converted to the requested field.
pub fn scene<T: curvemv::Scalar>(seed: u64, cameras: usize, kind: CurveKind) -> Scene<T> {
    random_scene(&mut rng(seed), cameras, kind)
        .to_field()
        .expect("integer scenes convert to every field")
}

/// Homogeneous parameters of the ground-truth curve.
pub fn truth(s: &Scene<f64>) -> Vec<f64> {
    match &s.curve {
        SpaceCurve::Plane(p) => p.h.coords().iter().chain(p.alpha.coords()).copied().collect(),
        SpaceCurve::Twisted(t) => t.m.coords().to_vec(),
        SpaceCurve::Chow(_) => panic!("fixtures never sample Chow forms"),
    }
}

/// Float scene whose truth lies in the default parameter chart, with its objective.
pub fn objective(seed: u64, cameras: usize, kind: CurveKind) -> (Scene<f64>, Objective) {
    let model = match kind {
        CurveKind::Twisted => Model::Twisted,
        k => Model::PlaneCurve { degree: k.degree() },
    };
    let mut r = rng(seed);
    loop {
        let s: Scene<f64> = random_scene(&mut r, cameras, kind).to_field().unwrap();
        let p = truth(&s);
        let in_chart = p[0] != 0.0 && (kind == CurveKind::Twisted || p[4] != 0.0);
        if in_chart {
            let obj = Objective::new(&s.arrangement, &s.views, model).unwrap();
            return (s, obj);
        }
    }
}
