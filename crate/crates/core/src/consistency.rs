//! Membership tests for tuples of image conics.
//!
//! Two views are consistent iff a 2×3 matrix built from the conics (after a
//! change of image coordinates fixed by the fundamental matrix) has rank at
//! most one. For more views the conic is reconstructed from a pair through
//! the pencil spanned by the two back-projected cones and checked against the
//! remaining views.

use rayon::prelude::*;
use serde::Serialize;

use crate::camera::{fundamental, std_solution, Camera};
use crate::chow::{iota_plane, plane_coords, plane_frame, PlaneCurveParam};
use crate::error::{Error, Result};
use crate::multilinear::{pullback, veronese};
use crate::numeric::{max_modulus, proj_eq, Mat, ProjVec, Scalar};
use crate::projection::{
    back_project_cone, cone_join, project_plane_curve, quadric_matrix, Arrangement, Cone,
    ImageCurve,
};

/// Zero test: exact in exact fields, `|x| ≤ tol·scale` otherwise.
fn small<T: Scalar>(x: &T, scale: f64, tol: f64) -> bool {
    if T::EXACT {
        x.is_zero()
    } else {
        x.modulus() <= tol * scale.max(f64::MIN_POSITIVE)
    }
}

fn require_conic<T: Scalar>(g: &ImageCurve<T>) -> Result<()> {
    if g.degree() != 2 {
        return Err(Error::InvalidDegree {
            expected: 2,
            got: g.degree(),
        });
    }
    Ok(())
}

/// The 2×3 matrix whose rank is at most one exactly on consistent conic pairs
/// for the cameras `[0 | I]`, `[I | 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoViewMatrix<T> {
    entries: Mat<T>,
}

impl<T: Scalar> TwoViewMatrix<T> {
    pub fn entries(&self) -> &Mat<T> {
        &self.entries
    }

    /// The three 2×2 minors, columns (0,1), (0,2), (1,2).
    pub fn minors(&self) -> [T; 3] {
        let e = &self.entries;
        let m = |a: usize, b: usize| {
            e[(0, a)].clone() * e[(1, b)].clone() - e[(0, b)].clone() * e[(1, a)].clone()
        };
        [m(0, 1), m(0, 2), m(1, 2)]
    }

    pub fn row_is_zero(&self, r: usize, tol: f64) -> bool {
        let scale = 1.0;
        self.entries.row(r).iter().all(|x| small(x, scale, tol))
    }

    pub fn rank_at_most_one(&self, tol: f64) -> bool {
        self.minors().iter().all(|m| small(m, 1.0, tol))
    }
}

pub fn two_view_matrix<T: Scalar>(
    g: &ImageCurve<T>,
    dl: &ImageCurve<T>,
) -> Result<TwoViewMatrix<T>> {
    require_conic(g)?;
    require_conic(dl)?;
    Ok(two_view_raw(g.coeffs(), dl.coeffs()))
}

fn two_view_raw<T: Scalar>(g: &[T], d: &[T]) -> TwoViewMatrix<T> {
    let n = |k: i64| T::from_i64(k);
    let p = |a: &T, b: &T| a.clone() * b.clone();
    let entries = Mat::from_rows(vec![
        vec![
            p(&g[4], &g[4]) - n(4) * p(&g[3], &g[5]),
            p(&g[2], &g[4]) - n(2) * p(&g[1], &g[5]),
            p(&g[2], &g[2]) - n(4) * p(&g[0], &g[5]),
        ],
        vec![
            p(&d[2], &d[2]) - n(4) * p(&d[0], &d[5]),
            p(&d[1], &d[2]) - n(2) * p(&d[0], &d[4]),
            p(&d[1], &d[1]) - n(4) * p(&d[0], &d[3]),
        ],
    ])
    .expect("fixed shape");
    TwoViewMatrix { entries }
}

/// Outcome of the two-view test after the change of coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoViewReport<T> {
    pub verdict: bool,
    pub matrix: TwoViewMatrix<T>,
    /// Standard-solution case that fixed the coordinates.
    pub case: usize,
    /// First row vanishes: the first conic is a double line or two lines through the epipole.
    pub degenerate_first: bool,
    /// Second row vanishes, the same for the second conic.
    pub degenerate_second: bool,
}

fn unit<T: Scalar>(v: Vec<T>) -> Vec<T> {
    if T::EXACT {
        return v;
    }
    let n = v.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt();
    if n == 0.0 {
        return v;
    }
    v.into_iter().map(|x| x / T::from_f64(n)).collect()
}

/// Two-view consistency for an arbitrary camera pair with distinct centers.
pub fn two_view_check<T: Scalar>(
    c1: &Camera<T>,
    c2: &Camera<T>,
    g: &ImageCurve<T>,
    dl: &ImageCurve<T>,
    tol: f64,
) -> Result<TwoViewReport<T>> {
    require_conic(g)?;
    require_conic(dl)?;
    let f = fundamental(c1, c2)?;
    let std = std_solution(&f)?;
    let gp = unit(pullback(2, &std.a1, g.coeffs()));
    let dp = unit(pullback(2, &std.a2, dl.coeffs()));
    let m = two_view_raw(&gp, &dp);
    Ok(TwoViewReport {
        verdict: m.rank_at_most_one(tol),
        degenerate_first: m.row_is_zero(0, tol),
        degenerate_second: m.row_is_zero(1, tol),
        matrix: m,
        case: std.case,
    })
}

/// Determinant of the symmetric matrix of a conic; zero iff the conic is a line pair.
pub fn conic_reducible<T: Scalar>(g: &ImageCurve<T>, tol: f64) -> Result<(bool, T)> {
    require_conic(g)?;
    let c = unit(g.coeffs().to_vec());
    let det = quadric_matrix(3, &c).det();
    Ok((small(&det, 1.0, tol), det))
}

/// `δ2²δ3 − δ1δ2δ4 + δ0δ4² + δ1²δ5 − 4δ0δ3δ5`, which equals `−4·det` of the symmetric matrix.
pub fn union_of_planes<T: Scalar>(d: &[T]) -> T {
    let p = |xs: &[usize]| xs.iter().fold(T::one(), |a, &i| a * d[i].clone());
    p(&[2, 2, 3]) - p(&[1, 2, 4]) + p(&[0, 4, 4]) + p(&[1, 1, 5])
        - T::from_i64(4) * p(&[0, 3, 5])
}

/// Kind of simplicity violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    EqualCenters,
    ThreeCollinear,
    EightOnConic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn stack<T: Scalar>(points: &[&ProjVec<T>]) -> Mat<T> {
    Mat::from_rows(points.iter().map(|p| p.coords().to_vec()).collect()).expect("equal lengths")
}

/// Distinct centers, no three on a line, no eight on a conic.
pub fn arrangement_simple<T: Scalar>(centers: &[ProjVec<T>]) -> Result<SimplicityReport> {
    if centers.iter().any(|c| c.len() != 4) {
        return Err(Error::InvalidInput("centers need 4 coordinates".into()));
    }
    let n = centers.len();
    let mut violations = Vec::new();
    let mut equal = vec![vec![false; n]; n];
    for pair in combinations(n, 2) {
        let (i, j) = (pair[0], pair[1]);
        if centers[i].proj_eq(&centers[j], crate::DEFAULT_TOL)? {
            equal[i][j] = true;
            violations.push(Violation {
                kind: ViolationKind::EqualCenters,
                indices: pair,
            });
        }
    }
    for tri in combinations(n, 3) {
        let (a, b, c) = (tri[0], tri[1], tri[2]);
        if equal[a][b] || equal[a][c] || equal[b][c] {
            continue;
        }
        if stack(&[&centers[a], &centers[b], &centers[c]]).rank()? <= 2 {
            violations.push(Violation {
                kind: ViolationKind::ThreeCollinear,
                indices: tri,
            });
        }
    }
    let eights: Vec<Vec<usize>> = combinations(n, 8)
        .into_par_iter()
        .filter(|idx| eight_on_conic(centers, idx).unwrap_or(false))
        .collect();
    violations.extend(eights.into_iter().map(|indices| Violation {
        kind: ViolationKind::EightOnConic,
        indices,
    }));
    Ok(SimplicityReport {
        verdict: violations.is_empty(),
        violations,
    })
}

fn eight_on_conic<T: Scalar>(centers: &[ProjVec<T>], idx: &[usize]) -> Result<bool> {
    let pts: Vec<&ProjVec<T>> = idx.iter().map(|&i| &centers[i]).collect();
    let s = stack(&pts);
    if s.rank()? > 3 {
        return Ok(false);
    }
    let Some(h) = s.kernel_basis().into_iter().next() else {
        return Ok(false);
    };
    let rows = pts
        .iter()
        .map(|p| plane_coords(h.coords(), p.coords()).map(|y| veronese(2, &y)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_rows(rows)?.rank()? <= 5)
}

/// Position of a center relative to a plane conic, as a pairing with a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupCase {
    /// Center off the curve; the cone is the join of the center and the curve.
    Case1,
    /// Center at a smooth point; the cone is the curve's plane and a plane through the tangent.
    Case2,
    /// Center at the singular point of a line pair; any cone with vertex there containing the curve.
    Case3,
    NotMember,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlowupVerdict {
    pub case: BlowupCase,
    pub diagnostic: Option<String>,
}

impl BlowupVerdict {
    fn of(case: BlowupCase) -> Self {
        BlowupVerdict {
            case,
            diagnostic: None,
        }
    }
}

fn cross<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    crate::numeric::dot(a, b)
}

/// Decides which pairing of the conic `pc`, the point `c` and the quadric cone holds.
pub fn classify_blowup<T: Scalar>(
    pc: &PlaneCurveParam<T>,
    c: &[T],
    cone: &Cone<T>,
    tol: f64,
) -> Result<BlowupVerdict> {
    if pc.degree() != 2 || cone.degree() != 2 {
        return Err(Error::InvalidDegree {
            expected: 2,
            got: if pc.degree() != 2 { pc.degree() } else { cone.degree() },
        });
    }
    let h = pc.h.coords();
    let c = unit(c.to_vec());
    let hn = unit(h.to_vec());
    let alpha = unit(pc.alpha.coords().to_vec());
    let q = quadric_matrix(4, &unit(cone.coeffs().to_vec()));
    let on_plane = small(&dot(&hn, &c), 1.0, tol);
    let xc = if on_plane {
        Some(plane_coords(h, &c)?)
    } else {
        None
    };
    let s = quadric_matrix(3, &alpha);
    let on_curve = xc.as_ref().map(|x| {
        let xs = unit(x.clone());
        let v = dot(&xs, &s.mul_vec(&xs));
        small(&v, 1.0, tol)
    });
    if on_curve != Some(true) {
        let join = cone_join(&c, &iota_plane(pc)?)?;
        let case = if join.proj_eq(cone, tol)? {
            BlowupCase::Case1
        } else {
            BlowupCase::NotMember
        };
        return Ok(BlowupVerdict::of(case));
    }
    let xc = unit(xc.expect("on the curve"));
    let frame = plane_frame(h)?;
    let qc_zero = q.mul_vec(&c).iter().all(|v| small(v, 1.0, tol));
    let grad = s.mul_vec(&xc);
    let singular = grad.iter().all(|v| small(v, 1.0, tol));
    if !singular {
        // Case 2: Q must be the symmetric product of h and a plane k through the tangent.
        let Some(k) = second_plane(&q, &hn, tol) else {
            return Ok(BlowupVerdict::of(BlowupCase::NotMember));
        };
        let t = frame.mul_vec(&cross(&grad, &xc));
        let kn = unit(k);
        let ok = qc_zero
            && small(&dot(&kn, &c), 1.0, tol)
            && small(&dot(&kn, &unit(t)), 1.0, tol);
        let case = if ok {
            BlowupCase::Case2
        } else {
            BlowupCase::NotMember
        };
        return Ok(BlowupVerdict::of(case));
    }
    // Singular point: two lines through c or a double line through c.
    if !qc_zero {
        return Ok(BlowupVerdict::of(BlowupCase::NotMember));
    }
    let r = unit(pullback(2, &frame, &quadric_coeffs4(&q)));
    let contains = if s.rank()? >= 2 {
        r.iter().all(|v| small(v, 1.0, tol)) || proj_eq(&r, &alpha, tol)?
    } else {
        // Double line: the cone must vanish along it.
        let line = s
            .kernel_basis()
            .into_iter()
            .map(ProjVec::into_vec)
            .collect::<Vec<_>>();
        let rs = quadric_matrix(3, &r);
        let pts = [
            line[0].clone(),
            line[1].clone(),
            line[0]
                .iter()
                .zip(&line[1])
                .map(|(a, b)| a.clone() + b.clone())
                .collect::<Vec<_>>(),
        ];
        pts.iter().all(|p| {
            let p = unit(p.clone());
            small(&dot(&p, &rs.mul_vec(&p)), 1.0, tol)
        })
    };
    let mut v = BlowupVerdict::of(if contains {
        BlowupCase::Case3
    } else {
        BlowupCase::NotMember
    });
    if s.rank()? < 2 {
        v.diagnostic = Some("double line through the center".into());
    }
    Ok(v)
}

fn quadric_coeffs4<T: Scalar>(q: &Mat<T>) -> Vec<T> {
    crate::projection::quadric_coeffs(q)
}

/// `k` with `2Q = h kᵀ + k hᵀ`, if it exists.
fn second_plane<T: Scalar>(q: &Mat<T>, h: &[T], tol: f64) -> Option<Vec<T>> {
    let scale = max_modulus(h);
    let i = (0..4).max_by(|&a, &b| h[a].modulus().total_cmp(&h[b].modulus()))?;
    if h[i].negligible(scale) {
        return None;
    }
    let two = T::from_i64(2);
    let ki = q[(i, i)].clone() / h[i].clone();
    let k: Vec<T> = (0..4)
        .map(|j| {
            if j == i {
                ki.clone()
            } else {
                (two.clone() * q[(i, j)].clone() - ki.clone() * h[j].clone()) / h[i].clone()
            }
        })
        .collect();
    let qs = q.max_modulus();
    for a in 0..4 {
        for b in 0..4 {
            let lhs = two.clone() * q[(a, b)].clone();
            let rhs = h[a].clone() * k[b].clone() + k[a].clone() * h[b].clone();
            if !small(&(lhs - rhs), qs, tol) {
                return None;
            }
        }
    }
    if k.iter().all(|x| small(x, qs, tol)) {
        return None;
    }
    Some(k)
}

/// Plane conics compatible with a pair of views.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction<T> {
    pub candidates: Vec<PlaneCurveParam<T>>,
    /// 2 when the two conics of the cone intersection coincide.
    pub multiplicity: usize,
}

/// Interpolates `det(t·Q1 + Q2)` as `Σ a_k t^k`.
fn pencil_det<T: Scalar>(q1: &Mat<T>, q2: &Mat<T>) -> [T; 5] {
    let at = |t: i64| q1.scale(&T::from_i64(t)).add(q2).det();
    let (p0, p1, pm1, p2, pm2) = (at(0), at(1), at(-1), at(2), at(-2));
    let n = |k: i64| T::from_i64(k);
    // Central differences on t = -2..2.
    let a0 = p0.clone();
    let e1 = (p1.clone() + pm1.clone()) / n(2) - p0.clone(); // a2 + a4
    let e2 = (p2.clone() + pm2.clone()) / n(2) - p0; // 4a2 + 16a4
    let a4 = (e2 - n(4) * e1.clone()) / n(12);
    let a2 = e1 - a4.clone();
    let o1 = (p1 - pm1) / n(2); // a1 + a3
    let o2 = (p2 - pm2) / n(4); // a1 + 4a3
    let a3 = (o2 - o1.clone()) / n(3);
    let a1 = o1 - a3.clone();
    [a0, a1, a2, a3, a4]
}

/// Roots `(λ : μ)` of `a3 λ² + a2 λμ + a1 μ²` in the field, a double root counted once.
fn residual_roots<T: Scalar>(a1: &T, a2: &T, a3: &T, tol: f64) -> Result<Vec<(T, T)>> {
    let scale = [a1, a2, a3].iter().map(|x| x.modulus()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::NoPlanarSolution("the cone pencil is singular".into()));
    }
    let n = |k: i64| T::from_i64(k);
    let disc = a2.clone() * a2.clone() - n(4) * a1.clone() * a3.clone();
    let a3_zero = small(a3, scale, tol);
    if small(&disc, scale * scale, tol.sqrt().max(tol)) || (T::EXACT && disc.is_zero()) {
        let root = if !a3_zero {
            (-a2.clone(), n(2) * a3.clone())
        } else {
            (n(1), n(0))
        };
        return Ok(vec![root]);
    }
    let sq = disc
        .sqrt_checked()
        .ok_or_else(|| Error::NoPlanarSolution("pencil roots are not in the field".into()))?;
    if a3_zero {
        // μ (a2 λ + a1 μ): roots (1 : 0) and (-a1 : a2).
        return Ok(vec![(n(1), n(0)), (-a1.clone(), a2.clone())]);
    }
    Ok(vec![
        (-a2.clone() + sq.clone(), n(2) * a3.clone()),
        (-a2.clone() - sq, n(2) * a3.clone()),
    ])
}

/// The plane-pair member `t·Q1 + Q2` read off linearly.
///
/// In a basis `(c1, c2, u, v)` adapted to the two vertices the member is
/// block structured, and it has rank 2 exactly when the Schur complement
/// `t·A + B` on `span(u, v)` vanishes. `None` when an epipole lies on the
/// other cone, where the complement is undefined.
fn schur_root<T: Scalar>(
    q1: &Mat<T>,
    q2: &Mat<T>,
    c1: &[T],
    c2: &[T],
) -> Result<Option<(T, T)>> {
    let rest = Mat::from_rows(vec![c1.to_vec(), c2.to_vec()])?.kernel_basis();
    if rest.len() != 2 {
        return Ok(None);
    }
    let b = Mat::from_cols(&[
        c1.to_vec(),
        c2.to_vec(),
        rest[0].coords().to_vec(),
        rest[1].coords().to_vec(),
    ])?;
    let (t1, t2) = (
        b.transpose().matmul(q1).matmul(&b),
        b.transpose().matmul(q2).matmul(&b),
    );
    let (a, bb) = (t1[(1, 1)].clone(), t2[(0, 0)].clone());
    let scale = t1.max_modulus().max(t2.max_modulus());
    if small(&a, scale, 1e-12) || small(&bb, scale, 1e-12) {
        return Ok(None);
    }
    let complement = |t: &Mat<T>, k: usize, pivot: &T| {
        Mat::from_fn(2, 2, |i, j| {
            t[(i + 2, j + 2)].clone() - t[(i + 2, k)].clone() * t[(k, j + 2)].clone() / pivot.clone()
        })
    };
    let (ca, cb) = (complement(&t1, 1, &a), complement(&t2, 0, &bb));
    let (i, j) = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .max_by(|&x, &y| ca[x].modulus().total_cmp(&ca[y].modulus()))
        .expect("2x2");
    if ca[(i, j)].is_zero() {
        return Ok(None);
    }
    Ok(Some((-cb[(i, j)].clone(), ca[(i, j)].clone())))
}

/// Splits a rank-2 symmetric 4×4 matrix into its two planes.
fn split_planes<T: Scalar>(r: &Mat<T>) -> Result<Vec<Vec<T>>> {
    let k = r.kernel_basis();
    if k.len() != 2 {
        return Err(Error::NoPlanarSolution("pencil member is not a plane pair".into()));
    }
    let (k1, k2) = (k[0].coords(), k[1].coords());
    // Complement of the kernel spanned by two coordinate vectors.
    let mut best: Option<(usize, usize, f64)> = None;
    for a in 0..4 {
        for b in a + 1..4 {
            let mut m = Mat::<T>::zeros(4, 4);
            for i in 0..4 {
                m[(0, i)] = k1[i].clone();
                m[(1, i)] = k2[i].clone();
            }
            m[(2, a)] = T::one();
            m[(3, b)] = T::one();
            let d = m.det().modulus();
            if best.is_none_or(|(_, _, bd)| d > bd) {
                best = Some((a, b, d));
            }
            if T::EXACT && d > 0.0 {
                break;
            }
        }
        if T::EXACT && best.is_some_and(|(_, _, d)| d > 0.0) {
            break;
        }
    }
    let (a, b, _) = best.expect("four coordinates");
    let (raa, rab, rbb) = (r[(a, a)].clone(), r[(a, b)].clone(), r[(b, b)].clone());
    let scale = [&raa, &rab, &rbb].iter().map(|x| x.modulus()).fold(0.0, f64::max);
    let disc = rab.clone() * rab.clone() - raa.clone() * rbb.clone();
    let roots: Vec<(T, T)> = if small(&raa, scale, 1e-12) {
        vec![(T::one(), T::zero()), (rbb.clone(), -T::from_i64(2) * rab.clone())]
    } else {
        let sq = if !T::EXACT && disc.to_f64() < 0.0 && disc.modulus() <= 1e-10 * scale * scale {
            T::zero()
        } else {
            disc.sqrt_checked().ok_or_else(|| {
                Error::NoPlanarSolution("plane pair is not defined over the field".into())
            })?
        };
        vec![
            (-rab.clone() + sq.clone(), raa.clone()),
            (-rab - sq, raa),
        ]
    };
    roots
        .into_iter()
        .map(|(s, t)| {
            let mut p = vec![T::zero(); 4];
            p[a] = s;
            p[b] = t;
            let m = Mat::from_rows(vec![k1.to_vec(), k2.to_vec(), p])?;
            m.kernel_basis()
                .into_iter()
                .next()
                .map(ProjVec::into_vec)
                .ok_or_else(|| Error::NoPlanarSolution("degenerate plane split".into()))
        })
        .collect()
}

/// Plane conics projecting to `(γ, δ)` from a camera pair, via the pencil of
/// the two back-projected cones.
pub fn reconstruct_two_view<T: Scalar>(
    c1: &Camera<T>,
    c2: &Camera<T>,
    g: &ImageCurve<T>,
    dl: &ImageCurve<T>,
    tol: f64,
) -> Result<Reconstruction<T>> {
    require_conic(g)?;
    require_conic(dl)?;
    if c1.center().proj_eq(c2.center(), crate::DEFAULT_TOL)? {
        return Err(Error::DegeneratePair);
    }
    let q1 = quadric_matrix(4, &unit(back_project_cone(c1, g).coeffs().to_vec()));
    let q2 = quadric_matrix(4, &unit(back_project_cone(c2, dl).coeffs().to_vec()));
    let roots = match schur_root(&q1, &q2, c1.center().coords(), c2.center().coords())? {
        Some(root) => vec![root],
        None => {
            let [_, a1, a2, a3, _] = pencil_det(&q1, &q2);
            residual_roots(&a1, &a2, &a3, tol)?
        }
    };
    let mut planes: Vec<Vec<T>> = Vec::new();
    let mut multiplicity = 1;
    for (l, m) in roots {
        let member = q1.scale(&l).add(&q2.scale(&m));
        match member.rank()? {
            1 => {
                let row = (0..4)
                    .max_by(|&x, &y| {
                        max_modulus(member.row(x)).total_cmp(&max_modulus(member.row(y)))
                    })
                    .expect("four rows");
                planes.push(member.row(row).to_vec());
                multiplicity = 2;
            }
            2 => planes.extend(split_planes(&member)?),
            _ => {}
        }
    }
    let mut candidates: Vec<PlaneCurveParam<T>> = Vec::new();
    for h in planes {
        let Ok(frame) = plane_frame(&h) else { continue };
        let m1 = c1.matrix().matmul(&frame);
        if m1.rank()? < 3 {
            continue;
        }
        let alpha = pullback(2, &m1, g.coeffs());
        let Ok(pc) = PlaneCurveParam::new(h, alpha) else {
            continue;
        };
        let Ok(img) = project_plane_curve(c2, &pc) else {
            continue;
        };
        if img.proj_eq(dl, tol)?
            && !candidates
                .iter()
                .any(|c| c.proj_eq(&pc, tol).unwrap_or(false))
        {
            candidates.push(pc);
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoPlanarSolution(
            "no plane of the cone pencil reproduces both views".into(),
        ));
    }
    Ok(Reconstruction {
        candidates,
        multiplicity,
    })
}

/// Verdict for an n-view conic tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct NViewVerdict<T> {
    pub verdict: bool,
    pub witness: Option<PlaneCurveParam<T>>,
    /// False when the arrangement is not simple and the test does not apply.
    pub supported: bool,
    pub diagnostics: Vec<String>,
}

/// Whether some plane conic projects to every view, checked through a pair
/// reconstruction and the cone classification in each view.
pub fn n_view_check<T: Scalar>(
    arr: &Arrangement<T>,
    views: &[ImageCurve<T>],
    tol: f64,
) -> Result<NViewVerdict<T>> {
    let n = arr.len();
    if n < 2 || views.len() != n {
        return Err(Error::InvalidInput(format!(
            "need at least two views, one per camera; got {} cameras and {} views",
            n,
            views.len()
        )));
    }
    for v in views {
        require_conic(v)?;
    }
    let mut diagnostics = Vec::new();
    let simple = arrangement_simple(&arr.centers())?;
    if !simple.verdict {
        diagnostics.push("unsupported-regime: the arrangement is not simple".into());
        return Ok(NViewVerdict {
            verdict: false,
            witness: None,
            supported: false,
            diagnostics,
        });
    }
    let cams = arr.cameras();
    let mut any_pair = false;
    for pair in combinations(n, 2) {
        let (i, j) = (pair[0], pair[1]);
        let rec = match reconstruct_two_view(&cams[i], &cams[j], &views[i], &views[j], tol) {
            Ok(r) => r,
            Err(Error::DegeneratePair) => continue,
            Err(e) => {
                any_pair = true;
                diagnostics.push(format!("views {i},{j}: {e}"));
                continue;
            }
        };
        any_pair = true;
        for cand in rec.candidates {
            if fits_all_views(arr, views, &cand, tol)? {
                return Ok(NViewVerdict {
                    verdict: true,
                    witness: Some(cand),
                    supported: true,
                    diagnostics,
                });
            }
        }
        diagnostics.push(format!("views {i},{j}: no candidate fits every view"));
    }
    if !any_pair {
        return Err(Error::NoValidPair);
    }
    Ok(NViewVerdict {
        verdict: false,
        witness: None,
        supported: true,
        diagnostics,
    })
}

fn fits_all_views<T: Scalar>(
    arr: &Arrangement<T>,
    views: &[ImageCurve<T>],
    pc: &PlaneCurveParam<T>,
    tol: f64,
) -> Result<bool> {
    for (cam, v) in arr.cameras().iter().zip(views) {
        let cone = back_project_cone(cam, v);
        let verdict = classify_blowup(pc, cam.center().coords(), &cone, tol)?;
        if verdict.case == BlowupCase::NotMember {
            return Ok(false);
        }
    }
    Ok(true)
}
