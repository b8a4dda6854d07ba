use curvemv::camera::{e_matrix, fundamental, homography, std_solution, Camera};
use curvemv::chow::{h_matrices, iota_plane, iota_tw, phi, plane_frame, rho, secant, PlaneCurveParam, TwistedCubicParam};
use curvemv::consistency::{arrangement_simple, n_view_check, union_of_planes, ViolationKind};
use curvemv::multilinear::{eval_form, plucker, pullback, sigma, veronese, veronese_matrix, wedge2};
use curvemv::numeric::{int, proj_eq, ProjVec};
use curvemv::projection::{cubic_image_singularity, project_twisted, quadric_matrix, Arrangement, Singularity};
use curvemv::sampling::{random_scene, rng, CurveKind};
use curvemv::{Mat, Rational, Scalar, DEFAULT_TOL};
use proptest::prelude::*;

fn q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn mat(r: usize, c: usize, v: &[i64]) -> Mat<Rational> {
    Mat::new(r, c, q(v)).unwrap()
}

fn ints(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, n)
}

fn nonzero(n: usize) -> impl Strategy<Value = Vec<i64>> {
    ints(n).prop_filter("nonzero vector", |v| v.iter().any(|&x| x != 0))
}

fn invertible(n: usize) -> impl Strategy<Value = Mat<Rational>> {
    ints(n * n)
        .prop_map(move |v| mat(n, n, &v))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

fn camera() -> impl Strategy<Value = Camera<Rational>> {
    ints(12).prop_filter_map("full rank", |v| Camera::new(mat(3, 4, &v)).ok())
}

fn twisted() -> impl Strategy<Value = TwistedCubicParam<Rational>> {
    ints(13)
        .prop_map(|m| TwistedCubicParam::new(q(&m)).unwrap())
        .prop_filter("invertible M(m)", |t| !t.matrix().det().is_zero())
}

fn flat(m: &Mat<Rational>) -> Vec<Rational> {
    m.data().to_vec()
}

/// Camera with kernel `c`: `A − (A·c)·wᵀ / (w·c)`.
fn camera_with_center(a: &Mat<Rational>, c: &[Rational]) -> Option<Camera<Rational>> {
    let w = (0..4).find(|&k| !c[k].is_zero())?;
    let ac = a.mul_vec(c);
    let m = Mat::from_fn(3, 4, |r, k| {
        let corr = if k == w { ac[r].clone() / c[w].clone() } else { int(0) };
        a[(r, k)].clone() - corr
    });
    Camera::new(m).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjugate_inverts_up_to_det(v in ints(16)) {
        let m = mat(4, 4, &v);
        let lhs = m.adjugate().matmul(&m);
        prop_assert_eq!(lhs, Mat::identity(4).scale(&m.det()));
    }

    #[test]
    fn rank_is_transpose_invariant(v in ints(12), k in 0usize..3) {
        // Repeat a row to make low rank common.
        let mut rows: Vec<Vec<i64>> = v.chunks(4).map(|r| r.to_vec()).collect();
        if k < 2 {
            rows[2] = rows[k].iter().map(|x| 2 * x).collect();
        }
        let m = mat(3, 4, &rows.concat());
        prop_assert_eq!(m.rank().unwrap(), m.transpose().rank().unwrap());
    }

    #[test]
    fn wedge_is_functorial(a in ints(16), b in ints(16)) {
        let (a, b) = (mat(4, 4, &a), mat(4, 4, &b));
        prop_assert_eq!(wedge2(&a.matmul(&b)), wedge2(&a).matmul(&wedge2(&b)));
        prop_assert_eq!(wedge2(&Mat::<Rational>::identity(4)), Mat::identity(6));
    }

    #[test]
    fn wedge_moves_plucker_vectors(a in invertible(4), x in nonzero(4), y in nonzero(4)) {
        let (x, y) = (q(&x), q(&y));
        if let Ok(l) = plucker(&x, &y) {
            let moved = plucker(&a.mul_vec(&x), &a.mul_vec(&y)).unwrap();
            prop_assert_eq!(wedge2(&a).mul_vec(l.coords()), moved.coords().to_vec());
            prop_assert!(l.grassmann_plucker().is_zero());
        }
    }

    #[test]
    fn sigma_pairs_lines_by_incidence(x in ints(16)) {
        let s = sigma::<Rational>();
        prop_assert_eq!(s.matmul(&s), Mat::identity(6));
        let p: Vec<Vec<Rational>> = x.chunks(4).map(q).collect();
        if let (Ok(l1), Ok(l2)) = (plucker(&p[0], &p[1]), plucker(&p[2], &p[3])) {
            // Two lines meet exactly when the four points are coplanar.
            let pairing = l1.coords().iter().zip(s.mul_vec(l2.coords())).fold(int(0), |acc, (a, b)| acc + a.clone() * b);
            let coplanar = mat(4, 4, &x).det().is_zero();
            prop_assert_eq!(pairing.is_zero(), coplanar);
        }
    }

    #[test]
    fn veronese_is_functorial(a in ints(9), b in ints(9), x in ints(3), d in 1usize..4) {
        let (a, b, x) = (mat(3, 3, &a), mat(3, 3, &b), q(&x));
        prop_assert_eq!(veronese(d, &a.mul_vec(&x)), veronese_matrix(d, &a).mul_vec(&veronese(d, &x)));
        prop_assert_eq!(veronese_matrix(d, &a.matmul(&b)), veronese_matrix(d, &a).matmul(&veronese_matrix(d, &b)));
    }

    #[test]
    fn pullback_is_composition(a in ints(12), beta in ints(10), x in ints(4)) {
        let (a, beta, x) = (mat(3, 4, &a), q(&beta), q(&x));
        let pulled = pullback(3, &a, &beta);
        prop_assert_eq!(eval_form(3, &pulled, &x), eval_form(3, &beta, &a.mul_vec(&x)));
    }

    #[test]
    fn rho_tracks_the_standard_cubic(a in ints(4), b in ints(4), s in -4i64..5, t in -4i64..5) {
        let (a, b) = (mat(2, 2, &a), mat(2, 2, &b));
        let st = q(&[s, t]);
        let moved = a.mul_vec(&st);
        prop_assert_eq!(phi(&moved[0], &moved[1]), rho(&a).mul_vec(&phi(&st[0], &st[1])));
        prop_assert_eq!(rho(&a.matmul(&b)), rho(&a).matmul(&rho(&b)));
    }

    #[test]
    fn union_of_planes_is_minus_four_det(d in ints(6)) {
        let d = q(&d);
        let det = quadric_matrix(3, &d).det();
        prop_assert_eq!(union_of_planes(&d), int(-4) * det);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chat_inverts_camera_on_rays(c in camera()) {
        let lhs = c.chat().matmul(c.matrix());
        let e = e_matrix(c.center().coords());
        prop_assert!(proj_eq(&flat(&lhs), &flat(&e), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn plane_round_trip_is_scalar(c in camera(), h in nonzero(4)) {
        let h = q(&h);
        prop_assume!(!h[0].is_zero());
        let hm = h_matrices(&h);
        let through_center = eval_form(1, &h, c.center().coords()).is_zero();
        prop_assume!(!through_center);
        let prod = c.matrix().matmul(&hm.h).matmul(&hm.hhat).matmul(c.chat());
        let s = prod[(0, 0)].clone();
        prop_assert!(!s.is_zero());
        prop_assert_eq!(prod, Mat::identity(3).scale(&s));
    }

    #[test]
    fn fundamental_matches_its_standard_pair(c1 in camera(), c2 in camera(), x in nonzero(4)) {
        prop_assume!(!c1.center().proj_eq(c2.center(), DEFAULT_TOL).unwrap());
        let f = fundamental(&c1, &c2).unwrap();
        let x = q(&x);
        let (y1, y2) = (c1.project_point(&x), c2.project_point(&x));
        prop_assert!(eval_bilinear(f.matrix(), &y1, &y2).is_zero());
        let std = std_solution(&f).unwrap();
        let g = fundamental(&std.c1, &std.c2).unwrap();
        prop_assert!(f.proj_eq(&g, DEFAULT_TOL).unwrap());
        prop_assert!(std.c1.matrix().col(0).iter().all(Scalar::is_zero));
        prop_assert!(std.c2.matrix().col(3).iter().all(Scalar::is_zero));
    }

    #[test]
    fn homography_maps_plane_points(c1 in camera(), c2 in camera(), h in nonzero(4), y in nonzero(3)) {
        let h = q(&h);
        let Ok(hom) = homography(&c1, &c2, &h) else { return Ok(()) };
        let x = plane_frame(&h).unwrap().mul_vec(&q(&y));
        let (y1, y2) = (c1.project_point(&x), c2.project_point(&x));
        prop_assert!(proj_eq(&hom.mul_vec(&y1), &y2, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn plane_chow_form_vanishes_on_lines_in_the_plane(h in nonzero(4), alpha in nonzero(6), y in ints(6)) {
        let pc = PlaneCurveParam::new(q(&h), q(&alpha)).unwrap();
        let beta = iota_plane(&pc).unwrap();
        let frame = plane_frame(&q(&h)).unwrap();
        let (p1, p2) = (frame.mul_vec(&q(&y[..3])), frame.mul_vec(&q(&y[3..])));
        if let Ok(l) = plucker(&p1, &p2) {
            prop_assert!(beta.eval(l.coords()).is_zero());
        }
    }

    #[test]
    fn twisted_chow_form_vanishes_on_secants(t in twisted(), s in ints(4)) {
        let mm = t.matrix();
        let beta = iota_tw(&t).unwrap();
        let st = q(&s);
        let a = mm.mul_vec(&phi(&st[0], &st[1]));
        let b = mm.mul_vec(&phi(&st[2], &st[3]));
        let l = secant(&a, &b);
        prop_assume!(l.iter().any(|x| !x.is_zero()));
        prop_assert!(beta.eval(&l).is_zero());
    }

    #[test]
    fn projected_cubic_contains_projected_points(c in camera(), tw in twisted(), s in -4i64..5, t in -4i64..5) {
        let m = tw.matrix();
        let Ok(g) = project_twisted(&c, &tw) else { return Ok(()) };
        let x = m.mul_vec(&phi(&int(s), &int(t)));
        prop_assert!(g.eval(&c.project_point(&x)).is_zero());
    }

    #[test]
    fn tangent_centers_give_cusps(a in ints(12), tw in twisted(), s in -3i64..4, lambda in 1i64..4) {
        // φ(s, 1) + λ·∂_s φ(s, 1) lies on the tangent line at parameter s.
        let m = tw.matrix();
        let p = phi(&int(s), &int(1));
        let ds = q(&[3 * s * s, 2 * s, 1, 0]);
        let on_tangent: Vec<Rational> = p.iter().zip(&ds).map(|(x, d)| x.clone() + int(lambda) * d.clone()).collect();
        let c_tangent = m.mul_vec(&on_tangent);
        let a = mat(3, 4, &a);
        let Some(cam) = camera_with_center(&a, &c_tangent) else { return Ok(()) };
        prop_assert_eq!(cubic_image_singularity(&cam, &tw).unwrap(), Singularity::Cuspidal);
    }
}

fn eval_bilinear(f: &Mat<Rational>, y1: &[Rational], y2: &[Rational]) -> Rational {
    y1.iter().zip(f.mul_vec(y2)).fold(int(0), |acc, (a, b)| acc + a.clone() * b)
}

#[test]
fn eight_centers_on_a_conic_are_flagged() {
    // Eight points of x0² + x1² = x2², x3 = 0 plus a point off the plane.
    let on: [[i64; 4]; 8] = [
        [1, 0, 1, 0],
        [0, 1, 1, 0],
        [-1, 0, 1, 0],
        [0, -1, 1, 0],
        [3, 4, 5, 0],
        [-3, 4, 5, 0],
        [4, -3, 5, 0],
        [-4, -3, 5, 0],
    ];
    let mut centers: Vec<ProjVec<Rational>> = on.iter().map(|c| ProjVec::from_i64(c).unwrap()).collect();
    centers.push(ProjVec::from_i64(&[1, 2, 3, 7]).unwrap());
    let report = arrangement_simple(&centers).unwrap();
    assert!(!report.verdict);
    let eight: Vec<_> = report.violations.iter().filter(|v| v.kind == ViolationKind::EightOnConic).collect();
    assert_eq!(eight.len(), 1);
    assert_eq!(eight[0].indices, (0..8).collect::<Vec<_>>());

    // Moving one point off the conic but within the plane clears the flag.
    centers[7] = ProjVec::from_i64(&[-4, -3, 6, 0]).unwrap();
    let report = arrangement_simple(&centers).unwrap();
    assert!(report.violations.iter().all(|v| v.kind != ViolationKind::EightOnConic));
}

fn permuted<T: Clone>(v: &[T], p: &[usize]) -> Vec<T> {
    p.iter().map(|&i| v[i].clone()).collect()
}

#[test]
fn n_view_verdict_ignores_camera_order_and_world_frame() {
    let perms = [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]];
    let world = mat(4, 4, &[1, 2, 0, -1, 0, 1, 3, 0, 2, 0, 1, 1, 0, -1, 0, 2]);
    for seed in 0..6u64 {
        let s = random_scene(&mut rng(900 + seed), 3, CurveKind::Conic);
        let other = random_scene(&mut rng(1900 + seed), 3, CurveKind::Conic);
        let mut bad = s.views.clone();
        bad[2] = other.views[2].clone();
        let moved = Arrangement::new(
            s.arrangement.cameras().iter().map(|c| c.transformed(&world).unwrap()).collect(),
        )
        .unwrap();
        for (views, expect) in [(&s.views, true), (&bad, false)] {
            for p in perms {
                for arr in [&s.arrangement, &moved] {
                    let cams = Arrangement::new(permuted(arr.cameras(), &p)).unwrap();
                    let v = n_view_check(&cams, &permuted(views, &p), DEFAULT_TOL).unwrap();
                    assert!(v.supported, "seed {seed}");
                    assert_eq!(v.verdict, expect, "seed {seed} order {p:?}");
                }
            }
        }
    }
}

#[test]
fn generic_centers_give_nodes() {
    for seed in 0..10u64 {
        let s = random_scene(&mut rng(300 + seed), 3, CurveKind::Twisted);
        let curvemv::chow::SpaceCurve::Twisted(t) = &s.curve else { unreachable!() };
        for cam in s.arrangement.cameras() {
            assert_eq!(cubic_image_singularity(cam, t).unwrap(), Singularity::Nodal, "seed {seed}");
        }
    }
}
