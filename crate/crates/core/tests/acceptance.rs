//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use curvemv::camera::{epipoles, fundamental, std_solution, Camera};
use curvemv::chow::{
    h_matrices, iota_plane, iota_tw, iota_tw_rounded, m_matrix, phi, plane_frame, rho, tw_fiber_complex,
    PlaneCurveParam, SpaceCurve, TwistedCubicParam,
};
use curvemv::consistency::{
    arrangement_simple, classify_blowup, n_view_check, reconstruct_two_view, two_view_check,
    two_view_matrix, BlowupCase, ViolationKind,
};
use curvemv::multilinear::{monomial_count, plucker, pullback, sigma, veronese, wedge2};
use curvemv::numeric::{int, proj_eq, rat, Complex64, Mat, ProjVec, Rational, Scalar};
use curvemv::projection::{
    back_project_cone, project_plane_curve, quadric_coeffs, Arrangement, ImageCurve,
};
use curvemv::sampling::{
    random_camera, random_plane_curve, random_scene, random_twisted, rng, small_int, CurveKind,
    Scene,
};
use curvemv::triangulation::{
    critical_residual, dim_probe, edd_instance, multistart, optimize, LmOptions, Model,
    ProbeCameras, CLUSTER_TOL,
};
use curvemv::DEFAULT_TOL;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn qmat(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<Rational> {
    Mat::from_fn(rows, cols, |_, _| int(small_int(r)))
}

fn invertible(r: &mut ChaCha8Rng, n: usize) -> Mat<Rational> {
    loop {
        let m = qmat(r, n, n);
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn qvec(r: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| int(small_int(r))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn canonical_pair() -> (Camera<Rational>, Camera<Rational>) {
    (
        Camera::from_i64(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap(),
        Camera::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]).unwrap(),
    )
}

/// Random conic whose plane avoids both centers of the pair.
fn conic_images(
    r: &mut ChaCha8Rng,
    c1: &Camera<Rational>,
    c2: &Camera<Rational>,
) -> (ImageCurve<Rational>, ImageCurve<Rational>) {
    loop {
        let pc = random_plane_curve(r, 2);
        if let (Ok(g), Ok(d)) = (project_plane_curve(c1, &pc), project_plane_curve(c2, &pc)) {
            return (g, d);
        }
    }
}

fn two_view_canonical() -> Check {
    let start = Instant::now();
    let mut r = rng(1001);
    let (c1, c2) = canonical_pair();
    let mut pairs = Vec::new();
    for _ in 0..200 {
        let (g, d) = conic_images(&mut r, &c1, &c2);
        let m = two_view_matrix(&g, &d).map_err(|e| e.to_string())?;
        ensure(m.minors().iter().all(Scalar::is_zero), "projected pair with nonzero minor")?;
        pairs.push((g, d));
    }
    let mut rejected = 0;
    for i in 0..200 {
        let (g, _) = &pairs[i];
        let (_, d) = &pairs[(i + 1) % 200];
        let m = two_view_matrix(g, d).map_err(|e| e.to_string())?;
        if m.minors().iter().any(|x| !x.is_zero()) {
            rejected += 1;
        }
    }
    ensure(rejected == 200, format!("{rejected}/200 mismatched pairs rejected"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("200 projected pairs exact, 200/200 mismatches rejected in {:.2}s", t.as_secs_f64()))
}

fn two_view_general() -> Check {
    let mut r = rng(1002);
    for _ in 0..100 {
        let (c1, c2) = loop {
            let (a, b) = (random_camera(&mut r), random_camera(&mut r));
            if !a.center().proj_eq(b.center(), 0.0).unwrap() {
                break (a, b);
            }
        };
        let (g, d) = conic_images(&mut r, &c1, &c2);
        let rep = two_view_check(&c1, &c2, &g, &d, 0.0).map_err(|e| e.to_string())?;
        ensure(rep.verdict, "projected pair rejected")?;
    }
    Ok("100 random camera pairs pass exactly".into())
}

fn chow_incidence() -> Check {
    let mut r = rng(1003);
    let mut secants = 0;
    let mut witnesses = 0;
    for d in [2usize, 3] {
        for _ in 0..100 {
            let h = loop {
                let h = qvec(&mut r, 4);
                if !h[0].is_zero() {
                    break h;
                }
            };
            let (y1, y2) = (qvec(&mut r, 3), qvec(&mut r, 3));
            // Curves through y1 and y2: kernel of the two Veronese rows.
            let cond = Mat::from_rows(vec![veronese(d, &y1), veronese(d, &y2)]).unwrap();
            let basis = cond.kernel_basis();
            let alpha = basis.iter().fold(vec![int(0); monomial_count(d, 3)], |acc, b| {
                let c = int(small_int(&mut r));
                acc.iter().zip(b.coords()).map(|(a, x)| a + &c * x).collect()
            });
            if alpha.iter().all(Scalar::is_zero) {
                continue;
            }
            let pc = PlaneCurveParam::new(h.clone(), alpha).unwrap();
            let beta = iota_plane(&pc).map_err(|e| e.to_string())?;
            let frame = plane_frame(&h).unwrap();
            let (x1, x2) = (frame.mul_vec(&y1), frame.mul_vec(&y2));
            let Ok(line) = plucker(&x1, &x2) else { continue };
            ensure(beta.eval(line.coords()).is_zero(), format!("degree {d} secant nonzero"))?;
            secants += 1;
            // A line through a point off the plane and a plane point off the curve.
            let off = loop {
                let y = qvec(&mut r, 3);
                if !curvemv::multilinear::eval_form(d, pc.alpha.coords(), &y).is_zero() {
                    break frame.mul_vec(&y);
                }
            };
            let mut apex = vec![int(0); 4];
            apex[0] = int(1);
            if let Ok(l) = plucker(&apex, &off) {
                if !beta.eval(l.coords()).is_zero() {
                    witnesses += 1;
                }
            }
        }
    }
    for _ in 0..100 {
        let t = random_twisted(&mut r);
        let beta = iota_tw(&t).unwrap();
        let mm = m_matrix(t.m.coords());
        let pt = |r: &mut ChaCha8Rng| {
            let (s, u) = (int(small_int(r)), int(small_int(r)));
            mm.mul_vec(&phi(&s, &u))
        };
        let (a, b) = (pt(&mut r), pt(&mut r));
        let Ok(line) = plucker(&a, &b) else { continue };
        ensure(beta.eval(line.coords()).is_zero(), "twisted secant nonzero")?;
        secants += 1;
        let (p, q) = (qvec(&mut r, 4), qvec(&mut r, 4));
        if let Ok(l) = plucker(&p, &q) {
            if !beta.eval(l.coords()).is_zero() {
                witnesses += 1;
            }
        }
    }
    ensure(secants >= 290, format!("only {secants} secants sampled"))?;
    ensure(witnesses >= 250, format!("only {witnesses} nonvanishing witnesses"))?;
    Ok(format!("{secants} secants vanish, {witnesses} non-secant witnesses nonzero"))
}

fn homogeneity() -> Check {
    let mut r = rng(1004);
    for d in [2usize, 3, 4] {
        for _ in 0..20 {
            let pc = random_plane_curve(&mut r, d);
            let lambda = rat(small_int(&mut r).max(1) * 2 - 1, r.random_range(1..=7));
            let scaled: Vec<Rational> = pc.h.coords().iter().map(|x| x * &lambda).collect();
            let a = iota_plane(&pc).unwrap();
            let b = iota_plane(&PlaneCurveParam::new(scaled, pc.alpha.coords().to_vec()).unwrap())
                .unwrap();
            let f = (0..d).fold(int(1), |acc, _| acc * &lambda);
            ensure(
                a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| x * &f == *y),
                format!("degree {d} scaling"),
            )?;
        }
    }
    for _ in 0..20 {
        let t = random_twisted(&mut r);
        let lambda = rat(small_int(&mut r).max(1) * 2 - 1, r.random_range(1..=7));
        let a = iota_tw(&t).unwrap();
        let b = iota_tw(&TwistedCubicParam::new(t.m.coords().iter().map(|x| x * &lambda).collect()).unwrap())
            .unwrap();
        let f = (0..6).fold(int(1), |acc, _| acc * &lambda);
        ensure(
            a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| x * &f == *y),
            "twisted scaling",
        )?;
    }
    Ok("degrees 2, 3, 4 and 6 exact on 20 scalars each".into())
}

fn fiber() -> Check {
    let mut r = rng(1005);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m: Vec<f64> = (0..13).map(|_| StandardNormal.sample(&mut r)).collect();
        let t = TwistedCubicParam::new(m.clone()).unwrap();
        let mats = tw_fiber_complex(&t).map_err(|e| e.to_string())?;
        ensure(mats.len() == 3, format!("fiber of size {}", mats.len()))?;
        let mc: Vec<Complex64> = m.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let base = iota_tw_rounded(&TwistedCubicParam::new(mc.clone()).unwrap()).unwrap();
        for a in &mats {
            ensure(a.rank().unwrap() == 2, "singular fiber element")?;
            let moved = m_matrix(&mc).matmul(&rho(a));
            let tp = TwistedCubicParam::from_matrix(&moved, 1e-9).map_err(|e| e.to_string())?;
            let other = iota_tw_rounded(&tp).unwrap();
            let dist = curvemv::numeric::proj_distance(base.coeffs(), other.coeffs());
            worst = worst.max(dist);
            ensure(dist <= 1e-8, format!("Chow forms differ by {dist:e}"))?;
        }
    }
    Ok(format!("50 parameters, 3 invertible reparametrizations each, max distance {worst:.1e}"))
}

fn full_params(s: &Scene<f64>) -> Vec<f64> {
    match &s.curve {
        SpaceCurve::Plane(p) => p.h.coords().iter().chain(p.alpha.coords()).copied().collect(),
        SpaceCurve::Twisted(t) => t.m.coords().to_vec(),
        SpaceCurve::Chow(_) => unreachable!(),
    }
}

fn model_of(kind: CurveKind) -> Model {
    match kind {
        CurveKind::Twisted => Model::Twisted,
        k => Model::PlaneCurve { degree: k.degree() },
    }
}

fn dimension() -> Check {
    let mut r = rng(1006);
    let mut min_gap = f64::INFINITY;
    let mut ranks = Vec::new();
    for (kind, expected) in [(CurveKind::Conic, 8), (CurveKind::PlaneCubic, 12), (CurveKind::Twisted, 12)] {
        for n in [2usize, 3] {
            let s: Scene<f64> = loop {
                let s: Scene<f64> = random_scene(&mut r, n, kind).to_field().unwrap();
                if s.views.iter().all(|v| v.coeffs()[0] != 0.0) {
                    break s;
                }
            };
            let p = dim_probe(&s.arrangement, model_of(kind), &full_params(&s))
                .map_err(|e| e.to_string())?;
            ensure(
                p.rank == expected && p.expected == expected,
                format!("{kind:?} n={n}: rank {} expected {expected}", p.rank),
            )?;
            min_gap = min_gap.min(p.gap);
            ranks.push(p.rank);
        }
    }
    ensure(min_gap >= 1e6, format!("gap {min_gap:e}"))?;
    Ok(format!("ranks {ranks:?}, smallest gap {min_gap:.1e}"))
}

fn two_view_fiber() -> Check {
    let mut r = rng(1007);
    let mut sizes = [0usize; 4];
    for _ in 0..100 {
        let s: Scene<f64> = random_scene(&mut r, 3, CurveKind::Conic).to_field().unwrap();
        let SpaceCurve::Plane(truth) = &s.curve else { unreachable!() };
        let cams = s.arrangement.cameras();
        let rec = reconstruct_two_view(&cams[0], &cams[1], &s.views[0], &s.views[1], DEFAULT_TOL)
            .map_err(|e| e.to_string())?;
        sizes[rec.candidates.len().min(3)] += 1;
        ensure(rec.candidates.len() == 2, format!("{} candidates", rec.candidates.len()))?;
        ensure(
            rec.candidates.iter().any(|c| c.proj_eq(truth, 1e-8).unwrap_or(false)),
            "ground truth missing",
        )?;
        let survivors = rec
            .candidates
            .iter()
            .filter(|c| {
                let cone = back_project_cone(&cams[2], &s.views[2]);
                classify_blowup(c, cams[2].center().coords(), &cone, DEFAULT_TOL)
                    .is_ok_and(|v| v.case != BlowupCase::NotMember)
            })
            .count();
        ensure(survivors == 1, format!("{survivors} candidates survive the third view"))?;
    }
    Ok("100 scenes: 2 candidates with the ground truth, third view leaves 1".into())
}

fn cylinders() -> Check {
    let cams: Vec<Camera<Rational>> = (0..3)
        .map(|i| {
            let keep: Vec<usize> = (0..4).filter(|&k| k != i).collect();
            Camera::new(Mat::<Rational>::identity(4).select_rows(&keep)).unwrap()
        })
        .collect();
    let views: Vec<ImageCurve<Rational>> = (0..3)
        .map(|i| {
            let q = Mat::diag(&(0..4).map(|k| int(if k == 3 { -1 } else if k == i { 0 } else { 1 })).collect::<Vec<_>>());
            ImageCurve::new(pullback(2, cams[i].pinv(), &quadric_coeffs(&q))).unwrap()
        })
        .collect();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let rep = two_view_check(&cams[i], &cams[j], &views[i], &views[j], 0.0)
            .map_err(|e| e.to_string())?;
        ensure(rep.verdict, format!("pair {i},{j} rejected"))?;
    }
    let arr = Arrangement::new(cams).unwrap();
    let v = n_view_check(&arr, &views, 0.0).map_err(|e| e.to_string())?;
    ensure(v.supported && !v.verdict, "three cylinders accepted")?;
    Ok("all three pairs consistent, the triple is not".into())
}

fn structural() -> Check {
    let mut r = rng(1009);
    let s = sigma::<Rational>();
    ensure(s.matmul(&s) == Mat::identity(6), "Σ² ≠ I")?;
    for _ in 0..100 {
        let (a, b) = (qmat(&mut r, 4, 4), qmat(&mut r, 4, 4));
        ensure(wedge2(&a.matmul(&b)) == wedge2(&a).matmul(&wedge2(&b)), "∧² not functorial")?;
        let m = invertible(&mut r, 4);
        let lhs = wedge2(&m);
        let rhs = s.matmul(&wedge2(&m.inverse().unwrap().transpose())).matmul(&s);
        ensure(proj_eq(lhs.data(), rhs.data(), 0.0).unwrap(), "∧²M and Σ∧²(M⁻ᵀ)Σ differ")?;
        let c = random_camera(&mut r);
        ensure(
            c.chat().matmul(c.matrix()) == curvemv::camera::e_matrix(c.center().coords()),
            "ĈC ≠ E(c)",
        )?;
        let h = loop {
            let h = qvec(&mut r, 4);
            let hs: Rational = h.iter().zip(c.center().coords()).map(|(a, b)| a * b).sum();
            if !h[0].is_zero() && !hs.is_zero() {
                break h;
            }
        };
        let hm = h_matrices(&h);
        let prod = c.matrix().matmul(&hm.h).matmul(&hm.hhat).matmul(c.chat());
        let scal = prod[(0, 0)].clone();
        ensure(
            !scal.is_zero() && prod == Mat::identity(3).scale(&scal),
            "CHĤĈ not a multiple of I",
        )?;
        let c2 = random_camera(&mut r);
        if c.center().proj_eq(c2.center(), 0.0).unwrap() {
            continue;
        }
        let f = fundamental(&c, &c2).unwrap();
        let std = std_solution(&f).map_err(|e| e.to_string())?;
        ensure(
            fundamental(&std.c1, &std.c2).unwrap().proj_eq(&f, 0.0).unwrap(),
            "fundamental of the standard pair",
        )?;
        let (e12, _) = epipoles(&f).unwrap();
        let img = c.project_point(c2.center().coords());
        ensure(proj_eq(e12.coords(), &img, 0.0).unwrap(), "epipole ≠ C1·c2")?;
    }
    Ok("seven identities exact on 100 instances".into())
}

fn triangulation() -> Check {
    let mut worst_dist: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let kinds = [CurveKind::Conic, CurveKind::PlaneCubic, CurveKind::Twisted];
    let mut r = rng(1010);
    let mut done = 0;
    let mut attempts = 0;
    let mut hit_gtol = 0;
    while done < 20 && attempts < 200 {
        attempts += 1;
        let kind = kinds[done % 3];
        let s: Scene<f64> = random_scene(&mut r, 2 + done % 2, kind).to_field().unwrap();
        let Ok(obj) = curvemv::triangulation::Objective::new(&s.arrangement, &s.views, model_of(kind))
        else {
            continue;
        };
        let Ok(truth) = obj.chart_params(&full_params(&s)) else { continue };
        done += 1;
        for k in 0..5 {
            let p: Vec<f64> = truth
                .iter()
                .map(|x| {
                    let z: f64 = StandardNormal.sample(&mut r);
                    x + if k == 0 { 1e-3 } else { 0.1 } * z
                })
                .collect();
            let j = obj.jacobian(&p).map_err(|e| e.to_string())?;
            let h = 1e-6;
            for c in 0..obj.n_params() {
                let (mut a, mut b) = (p.clone(), p.clone());
                a[c] += h;
                b[c] -= h;
                let (ra, rb) = (obj.residual(&a).unwrap(), obj.residual(&b).unwrap());
                for row in 0..obj.n_residuals() {
                    let fd = (ra[row] - rb[row]) / (2.0 * h);
                    let rel = (fd - j[(row, c)]).abs() / j[(row, c)].abs().max(1.0);
                    worst_fd = worst_fd.max(rel);
                }
            }
            if k == 0 {
                let out = optimize(&obj, &p, &LmOptions::default()).map_err(|e| e.to_string())?;
                if out.converged {
                    hit_gtol += 1;
                }
                worst_dist = worst_dist.max(obj.distance(&out.point.params, &truth));
            }
        }
    }
    ensure(done == 20, "could not sample 20 scenes in the default chart")?;
    ensure(worst_fd <= 1e-6, format!("finite differences off by {worst_fd:e}"))?;
    ensure(worst_dist <= 1e-8, format!("recovery distance {worst_dist:e}"))?;
    let obj = edd_instance(7, ProbeCameras::Generic).unwrap();
    let rep = multistart(&obj, 200, 1, &LmOptions::default());
    for p in &rep.points {
        ensure(critical_residual(&obj, &p.params).unwrap() < 1e-8, "uncertified critical point")?;
    }
    Ok(format!(
        "20 scenes: recovery {worst_dist:.1e} ({hit_gtol}/20 reached gtol), Jacobian vs differences {worst_fd:.1e}, {} certified critical points",
        rep.points.len()
    ))
}

fn same_clusters(
    obj: &curvemv::triangulation::Objective,
    a: &[curvemv::triangulation::CriticalPoint],
    b: &[curvemv::triangulation::CriticalPoint],
) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|p| b.iter().any(|q| obj.distance(&p.params, &q.params) <= CLUSTER_TOL))
}

fn distance_degree_probe() -> Check {
    let obj = edd_instance(2024, ProbeCameras::Translated).map_err(|e| e.to_string())?;
    let opts = LmOptions::default();
    let a = multistart(&obj, 2000, 1, &opts);
    let b = multistart(&obj, 2000, 2, &opts);
    ensure(
        same_clusters(&obj, &a.points, &b.points),
        format!("seed 1: {} points, seed 2: {} points", a.points.len(), b.points.len()),
    )?;
    Ok(format!(
        "{} distinct real critical points for both seeds ({} and {} of 2000 starts converged)",
        a.points.len(),
        a.converged,
        b.converged
    ))
}

fn simplicity() -> Check {
    let p = |v: &[i64]| ProjVec::<Rational>::from_i64(v).unwrap();
    let has = |centers: &[ProjVec<Rational>], kind: ViolationKind| {
        arrangement_simple(centers)
            .unwrap()
            .violations
            .iter()
            .any(|v| v.kind == kind)
    };
    ensure(
        has(&[p(&[1, 2, 3, 4]), p(&[2, 4, 6, 8]), p(&[0, 0, 1, 0])], ViolationKind::EqualCenters),
        "equal centers missed",
    )?;
    ensure(
        has(&[p(&[1, 0, 0, 1]), p(&[1, 1, 0, 1]), p(&[1, 2, 0, 1])], ViolationKind::ThreeCollinear),
        "collinear triple missed",
    )?;
    // Rational points of the circle X0² + X1² = X3² in the plane X2 = 0.
    let circle: Vec<ProjVec<Rational>> = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (3, 4, 5), (4, 3, 5), (-3, 4, 5), (5, -12, 13)]
        .iter()
        .map(|&(a, b, c)| p(&[a, b, 0, c]))
        .collect();
    ensure(has(&circle, ViolationKind::EightOnConic), "eight points on a conic missed")?;
    let mut r = rng(1012);
    for k in 0..50 {
        let n = 2 + k % 8;
        let centers: Vec<ProjVec<Rational>> =
            (0..n).map(|_| random_camera(&mut r).center().clone()).collect();
        let rep = arrangement_simple(&centers).unwrap();
        ensure(rep.verdict, format!("generic arrangement of {n} flagged: {:?}", rep.violations))?;
    }
    Ok("three violation classes detected, 50 generic arrangements simple".into())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("two-view rank condition, canonical pair", two_view_canonical),
        ("two-view check for general camera pairs", two_view_general),
        ("Chow forms vanish on secants", chow_incidence),
        ("homogeneity of the Chow embeddings", homogeneity),
        ("3-to-1 twisted cubic fiber", fiber),
        ("dimension of multiview varieties", dimension),
        ("two-view reconstruction fiber", two_view_fiber),
        ("pairwise consistent cylinders", cylinders),
        ("structural identities", structural),
        ("triangulation", triangulation),
        ("distance-degree multistart probe", distance_degree_probe),
        ("arrangement simplicity", simplicity),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
