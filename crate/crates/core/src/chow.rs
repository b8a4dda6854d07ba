//! Chow forms of plane curves and twisted cubics.
//!
//! A space curve is identified by the single form on Plücker coordinates
//! `L0..L5` that vanishes exactly on the lines meeting it. Plane curves are
//! parametrized by a plane `h` and a plane curve `α` drawn in the frame
//! [`plane_frame`]`(h)`; twisted cubics by a matrix `M` acting on the standard
//! cubic `(s³ : s²t : st² : t³)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multilinear::{
    eval_form, monomial_count, monomial_index, pl_raw, pullback, sigma, veronese_matrix, wedge2,
};
use crate::numeric::{GaussianRational, Mat, ProjVec, Rational, Scalar};

/// Degree-`d` form on Plücker coordinates, up to scale.
#[derive(Clone, Debug, PartialEq)]
pub struct ChowForm<T> {
    degree: usize,
    coeffs: ProjVec<T>,
}

impl<T: Scalar> ChowForm<T> {
    pub fn new(degree: usize, coeffs: Vec<T>) -> Result<Self> {
        let n = monomial_count(degree, 6);
        if degree == 0 || coeffs.len() != n {
            return Err(Error::InvalidInput(format!(
                "degree-{degree} Chow form needs {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(ChowForm {
            degree,
            coeffs: ProjVec::new(coeffs)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        self.coeffs.coords()
    }

    /// Value of the form at a Plücker vector.
    pub fn eval(&self, line: &[T]) -> T {
        eval_form(self.degree, self.coeffs(), line)
    }

    pub fn normalized(&self) -> Self {
        ChowForm {
            degree: self.degree,
            coeffs: self.coeffs.normalized(),
        }
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.degree == other.degree && self.coeffs.proj_eq(&other.coeffs, tol)?)
    }
}

/// A degree-`d` curve `α` in the plane `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurveParam<T> {
    pub h: ProjVec<T>,
    pub alpha: ProjVec<T>,
    degree: usize,
}

impl<T: Scalar> PlaneCurveParam<T> {
    pub fn new(h: Vec<T>, alpha: Vec<T>) -> Result<Self> {
        if h.len() != 4 {
            return Err(Error::InvalidInput("plane needs 4 coordinates".into()));
        }
        let degree = curve_degree(alpha.len())?;
        Ok(PlaneCurveParam {
            h: ProjVec::new(h)?,
            alpha: ProjVec::new(alpha)?,
            degree,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.h.proj_eq(&other.h, tol)? && self.alpha.proj_eq(&other.alpha, tol)?)
    }
}

/// Degree of a plane curve from its coefficient count `C(d+2, 2)`.
pub fn curve_degree(len: usize) -> Result<usize> {
    (1..64)
        .find(|&d| monomial_count(d, 3) == len)
        .ok_or_else(|| Error::InvalidInput(format!("{len} is not a plane-curve coefficient count")))
}

/// Twisted cubic `M(m)·(s³ : s²t : st² : t³)` with `M(m)` as in [`m_matrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedCubicParam<T> {
    pub m: ProjVec<T>,
}

impl<T: Scalar> TwistedCubicParam<T> {
    pub fn new(m: Vec<T>) -> Result<Self> {
        if m.len() != 13 {
            return Err(Error::InvalidInput(format!(
                "twisted cubic parameter needs 13 coordinates, got {}",
                m.len()
            )));
        }
        Ok(TwistedCubicParam { m: ProjVec::new(m)? })
    }

    pub fn matrix(&self) -> Mat<T> {
        m_matrix(self.m.coords())
    }

    /// Reads `m` back from a matrix of the shape produced by [`m_matrix`].
    pub fn from_matrix(mm: &Mat<T>, tol: f64) -> Result<Self> {
        let scale = mm.max_modulus();
        let small = |x: T| x.negligible(scale) || x.modulus() <= tol * scale;
        if mm.shape() != (4, 4)
            || !small(mm[(0, 0)].clone())
            || !small(mm[(1, 1)].clone())
            || !small(mm[(0, 1)].clone() + mm[(1, 0)].clone())
        {
            return Err(Error::InvalidInput("matrix is not of the M(m) shape".into()));
        }
        let mut m = vec![
            mm[(0, 1)].clone(),
            mm[(0, 2)].clone(),
            mm[(0, 3)].clone(),
            mm[(1, 2)].clone(),
            mm[(1, 3)].clone(),
        ];
        for r in 2..4 {
            m.extend(mm.row(r).iter().cloned());
        }
        Self::new(m)
    }
}

/// Any of the supported space-curve encodings.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceCurve<T> {
    Plane(PlaneCurveParam<T>),
    Twisted(TwistedCubicParam<T>),
    Chow(ChowForm<T>),
}

impl<T: Scalar> SpaceCurve<T> {
    pub fn degree(&self) -> usize {
        match self {
            SpaceCurve::Plane(p) => p.degree(),
            SpaceCurve::Twisted(_) => 3,
            SpaceCurve::Chow(c) => c.degree(),
        }
    }

    pub fn chow_form(&self) -> Result<ChowForm<T>> {
        match self {
            SpaceCurve::Plane(p) => iota_plane(p),
            SpaceCurve::Twisted(t) => iota_tw(t),
            SpaceCurve::Chow(c) => Ok(c.clone()),
        }
    }
}

/// `H(h)`, `H₁(h)` and `Ĥ(h)` for a plane `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrices<T> {
    pub h: Mat<T>,
    pub h1: Mat<T>,
    pub hhat: Mat<T>,
}

/// `H(h)` (4×3, columns span the plane when `h0 ≠ 0`), `H₁(h)` (4×4) and `Ĥ(h)` (3×6).
///
/// `Ĥ(h)` is `h0³` times the first three rows of `(∧²H₁(h))⁻¹`, so it agrees
/// with those rows projectively and exactly when `h0 = 1`.
pub fn h_matrices<T: Scalar>(h: &[T]) -> HMatrices<T> {
    assert_eq!(h.len(), 4, "plane needs 4 coordinates");
    let z = T::zero;
    let (h0, h1, h2, h3) = (h[0].clone(), h[1].clone(), h[2].clone(), h[3].clone());
    let hm = Mat::from_rows(vec![
        vec![-h1.clone(), -h2.clone(), -h3.clone()],
        vec![h0.clone(), z(), z()],
        vec![z(), h0.clone(), z()],
        vec![z(), z(), h0.clone()],
    ])
    .expect("fixed shape");
    let h1m = Mat::from_rows(vec![
        vec![h0.clone(), -h1.clone(), -h2.clone(), -h3.clone()],
        vec![z(), h0.clone(), z(), z()],
        vec![z(), z(), h0.clone(), z()],
        vec![z(), z(), z(), h0.clone()],
    ])
    .expect("fixed shape");
    let hhat = Mat::from_rows(vec![
        vec![h0.clone(), z(), z(), -h2.clone(), -h3.clone(), z()],
        vec![z(), h0.clone(), z(), h1.clone(), z(), -h3.clone()],
        vec![z(), z(), h0, z(), h1, h2],
    ])
    .expect("fixed shape");
    HMatrices {
        h: hm,
        h1: h1m,
        hhat,
    }
}

/// Coordinate swap `0 ↔ k` moving a nonzero entry of `h` to the front, if needed.
fn chart_swap<T: Scalar>(h: &[T]) -> Result<Option<usize>> {
    let scale = crate::numeric::max_modulus(h);
    if !h[0].negligible(scale) {
        return Ok(None);
    }
    match (1..4).find(|&k| !h[k].negligible(scale)) {
        Some(k) => Ok(Some(k)),
        None => Err(Error::ChartDegenerate { view: None }),
    }
}

fn swap_matrix<T: Scalar>(k: usize) -> Mat<T> {
    let mut p = Mat::identity(4);
    p[(0, 0)] = T::zero();
    p[(k, k)] = T::zero();
    p[(0, k)] = T::one();
    p[(k, 0)] = T::one();
    p
}

/// 4×3 matrix whose columns span the plane `h`; plane curves `α` live in these coordinates.
///
/// This is `H(h)` when `h0 ≠ 0`; otherwise the first nonzero coordinate is
/// swapped to the front and `H` of the swapped plane is swapped back.
pub fn plane_frame<T: Scalar>(h: &[T]) -> Result<Mat<T>> {
    match chart_swap(h)? {
        None => Ok(h_matrices(h).h),
        Some(k) => {
            let p = swap_matrix::<T>(k);
            let ph = p.mul_vec(h);
            Ok(p.matmul(&h_matrices(&ph).h))
        }
    }
}

/// Coordinates in [`plane_frame`]`(h)` of a point `x` lying in the plane `h`.
pub fn plane_coords<T: Scalar>(h: &[T], x: &[T]) -> Result<Vec<T>> {
    let (ph, px) = match chart_swap(h)? {
        None => (h.to_vec(), x.to_vec()),
        Some(k) => {
            let p = swap_matrix::<T>(k);
            (p.mul_vec(h), p.mul_vec(x))
        }
    };
    // H(h)·y = (−h1y0 − h2y1 − h3y2, h0y0, h0y1, h0y2).
    Ok(px[1..4].iter().map(|v| v.clone() / ph[0].clone()).collect())
}

/// Chow form of the plane curve `(h, α)`: `ν_d(Ĥ(h))ᵀ α` for `h0 ≠ 0`.
pub fn iota_plane<T: Scalar>(pc: &PlaneCurveParam<T>) -> Result<ChowForm<T>> {
    let d = pc.degree();
    let h = pc.h.coords();
    match chart_swap(h)? {
        None => ChowForm::new(d, pullback(d, &h_matrices(h).hhat, pc.alpha.coords())),
        Some(k) => {
            let p = swap_matrix::<T>(k);
            let swapped = PlaneCurveParam::new(p.mul_vec(h), pc.alpha.coords().to_vec())?;
            chow_transform(&iota_plane(&swapped)?, &p)
        }
    }
}

/// Chow form of the image `M·curve` for invertible `M`.
///
/// Lines meeting `M·curve` are `∧²M·L` for lines `L` meeting the curve, and
/// `(∧²M)⁻¹ ∝ Σ·∧²(Mᵀ)·Σ`, so the new form is `β ∘ (Σ·∧²(Mᵀ)·Σ)`.
pub fn chow_transform<T: Scalar>(beta: &ChowForm<T>, m: &Mat<T>) -> Result<ChowForm<T>> {
    let s = sigma::<T>();
    let w = s.matmul(&wedge2(&m.transpose())).matmul(&s);
    ChowForm::new(beta.degree(), pullback(beta.degree(), &w, beta.coeffs()))
        .map_err(|_| Error::DegenerateParameter("transform annihilates the Chow form".into()))
}

/// Chow form of the standard twisted cubic:
/// `−L3³ − L3²L2 + 2L4L3L1 − L5L1² − L4²L0 + L5L3L0 + L5L2L0`.
pub fn omega_tw<T: Scalar>() -> ChowForm<T> {
    let terms: [(i64, [u32; 6]); 7] = [
        (-1, [0, 0, 0, 3, 0, 0]),
        (-1, [0, 0, 1, 2, 0, 0]),
        (2, [0, 1, 0, 1, 1, 0]),
        (-1, [0, 2, 0, 0, 0, 1]),
        (-1, [1, 0, 0, 0, 2, 0]),
        (1, [1, 0, 0, 1, 0, 1]),
        (1, [1, 0, 1, 0, 0, 1]),
    ];
    let mut c = vec![T::zero(); monomial_count(3, 6)];
    for (v, e) in terms {
        c[monomial_index(&e)] = T::from_i64(v);
    }
    ChowForm::new(3, c).expect("nonzero fixed form")
}

/// Point `(s³, s²t, st², t³)` of the standard twisted cubic.
pub fn phi<T: Scalar>(s: &T, t: &T) -> Vec<T> {
    let (s, t) = (s.clone(), t.clone());
    vec![
        s.clone() * s.clone() * s.clone(),
        s.clone() * s.clone() * t.clone(),
        s * t.clone() * t.clone(),
        t.clone() * t.clone() * t,
    ]
}

/// `ρ(A)` with `φ(A·(s,t)) = ρ(A)·φ(s,t)`.
pub fn rho<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    assert_eq!(a.shape(), (2, 2), "rho expects a 2×2 matrix");
    let (a_, b, c, d) = (
        a[(0, 0)].clone(),
        a[(0, 1)].clone(),
        a[(1, 0)].clone(),
        a[(1, 1)].clone(),
    );
    let n = |k: i64| T::from_i64(k);
    let p = |xs: &[&T]| xs.iter().fold(T::one(), |acc, x| acc * (*x).clone());
    Mat::from_rows(vec![
        vec![
            p(&[&a_, &a_, &a_]),
            n(3) * p(&[&a_, &a_, &b]),
            n(3) * p(&[&a_, &b, &b]),
            p(&[&b, &b, &b]),
        ],
        vec![
            p(&[&a_, &a_, &c]),
            n(2) * p(&[&a_, &b, &c]) + p(&[&a_, &a_, &d]),
            n(2) * p(&[&a_, &b, &d]) + p(&[&b, &b, &c]),
            p(&[&b, &b, &d]),
        ],
        vec![
            p(&[&a_, &c, &c]),
            n(2) * p(&[&c, &d, &a_]) + p(&[&c, &c, &b]),
            n(2) * p(&[&c, &d, &b]) + p(&[&d, &d, &a_]),
            p(&[&d, &d, &b]),
        ],
        vec![
            p(&[&c, &c, &c]),
            n(3) * p(&[&c, &c, &d]),
            n(3) * p(&[&c, &d, &d]),
            p(&[&d, &d, &d]),
        ],
    ])
    .expect("fixed shape")
}

/// `[[0, m0, m1, m2], [−m0, 0, m3, m4], [m5..m8], [m9..m12]]`.
pub fn m_matrix<T: Scalar>(m: &[T]) -> Mat<T> {
    assert_eq!(m.len(), 13, "twisted cubic parameter needs 13 coordinates");
    let z = T::zero;
    Mat::from_rows(vec![
        vec![z(), m[0].clone(), m[1].clone(), m[2].clone()],
        vec![-m[0].clone(), z(), m[3].clone(), m[4].clone()],
        m[5..9].to_vec(),
        m[9..13].to_vec(),
    ])
    .expect("fixed shape")
}

/// Chow form of the twisted cubic `M(m)·φ(P¹)`; a form of degree 6 in `m`.
pub fn iota_tw<T: Scalar>(t: &TwistedCubicParam<T>) -> Result<ChowForm<T>> {
    let mm = t.matrix();
    if mm.rank()? < 4 {
        return Err(Error::DegenerateParameter("M(m) is singular".into()));
    }
    chow_transform(&omega_tw(), &mm)
}

/// [`iota_tw`] of a floating parameter, evaluated exactly on its binary
/// values and rounded once at the end.
///
/// When `M(m)` is badly conditioned the Chow form is far smaller than its
/// individual terms, and a floating evaluation loses most of its digits.
pub fn iota_tw_rounded(t: &TwistedCubicParam<Complex64>) -> Result<ChowForm<Complex64>> {
    let exact: Vec<GaussianRational> = t
        .m
        .iter()
        .map(|z| GaussianRational::new(Scalar::from_f64(z.re), Scalar::from_f64(z.im)))
        .collect();
    let beta = iota_tw(&TwistedCubicParam::new(exact)?)?;
    let scale = beta
        .coeffs()
        .iter()
        .map(|z| num_traits::Signed::abs(&z.re).max(num_traits::Signed::abs(&z.im)))
        .max()
        .expect("nonzero form");
    let coeffs = beta
        .coeffs()
        .iter()
        .map(|z| {
            Complex64::new(
                Scalar::to_f64(&(&z.re / &scale)),
                Scalar::to_f64(&(&z.im / &scale)),
            )
        })
        .collect();
    ChowForm::new(3, coeffs)
}

/// Reparametrizations `A` (with `A[0][0] = 1`) for which `M(m)·ρ(A)` again has the
/// `M(m)` shape, computed in the field `T`.
///
/// Entry `(0,0)` of `M(m)ρ(A)` is `c·(m0 + m1c + m2c²)` once `a = 1`; for each
/// root `c`, entries `(1,1)` and `(0,1)+(1,0)` are affine in `(b, d)`. Both the
/// cubic and the affine system are read off by evaluating `M(m)ρ(A)` directly.
/// The `a = 0` branch forces `m2c³ = 0`, hence a singular `A`, whenever `m2 ≠ 0`.
pub fn tw_fiber<T: Scalar>(t: &TwistedCubicParam<T>) -> Result<Vec<Mat<T>>> {
    let m = t.m.coords();
    let mm = t.matrix();
    let scale = crate::numeric::max_modulus(m);
    let entry00 = |c: T| {
        let a = rho_abcd(T::one(), T::zero(), c, T::zero());
        mm.matmul(&a)[(0, 0)].clone()
    };
    // Quadratic factor q(c) = entry00(c)/c = qa·c² + qb·c + qc from c = 1, -1, 2.
    let two = T::from_i64(2);
    let q1 = entry00(T::one());
    let qm1 = -entry00(-T::one());
    let q2 = entry00(two.clone()) / two.clone();
    let qb = (q1.clone() - qm1.clone()) / two.clone();
    let even = (q1 + qm1) / two.clone();
    let qa = (q2 - two.clone() * qb.clone() - even.clone()) / T::from_i64(3);
    let qc = even - qa.clone();
    if qa.negligible(scale) {
        return Err(Error::DegenerateParameter(
            "m2 = 0: the fiber cubic loses a root".into(),
        ));
    }
    if qc.negligible(scale) {
        return Err(Error::DegenerateParameter(
            "m0 = 0: the fiber cubic has a double root at c = 0".into(),
        ));
    }
    let disc = qb.clone() * qb.clone() - T::from_i64(4) * qa.clone() * qc;
    if disc.negligible(scale * scale) {
        return Err(Error::DegenerateParameter("the fiber cubic has a double root".into()));
    }
    let root = disc
        .sqrt_checked()
        .ok_or_else(|| Error::DegenerateParameter("fiber roots are not in the field".into()))?;
    let two_a = two * qa;
    let roots = [
        T::zero(),
        (-qb.clone() + root.clone()) / two_a.clone(),
        (-qb - root) / two_a,
    ];
    roots.into_iter().map(|c| fiber_matrix(&mm, c, scale)).collect()
}

fn rho_abcd<T: Scalar>(a: T, b: T, c: T, d: T) -> Mat<T> {
    rho(&Mat::from_rows(vec![vec![a, b], vec![c, d]]).expect("fixed shape"))
}

fn fiber_matrix<T: Scalar>(mm: &Mat<T>, c: T, scale: f64) -> Result<Mat<T>> {
    // Conditions g(b, d) = (entry11, entry01 + entry10), affine in (b, d).
    let g = |b: T, d: T| {
        let p = mm.matmul(&rho_abcd(T::one(), b, c.clone(), d));
        (p[(1, 1)].clone(), p[(0, 1)].clone() + p[(1, 0)].clone())
    };
    let (g0, h0) = g(T::zero(), T::zero());
    let (gb, hb) = g(T::one(), T::zero());
    let (gd, hd) = g(T::zero(), T::one());
    let (gb, hb) = (gb - g0.clone(), hb - h0.clone());
    let (gd, hd) = (gd - g0.clone(), hd - h0.clone());
    let det = gb.clone() * hd.clone() - gd.clone() * hb.clone();
    if det.negligible(scale * scale) {
        return Err(Error::DegenerateParameter(
            "reparametrization system is singular".into(),
        ));
    }
    let b = (gd.clone() * h0.clone() - hd * g0.clone()) / det.clone();
    let d = (hb * g0 - gb * h0) / det;
    let a = Mat::from_rows(vec![vec![T::one(), b], vec![c, d]]).expect("fixed shape");
    if a.det().negligible(scale.max(1.0)) {
        return Err(Error::DegenerateParameter("singular reparametrization".into()));
    }
    Ok(a)
}

/// Fiber of a real twisted-cubic parameter, over the complex numbers.
pub fn tw_fiber_complex(t: &TwistedCubicParam<f64>) -> Result<Vec<Mat<Complex64>>> {
    let m: Vec<Complex64> = t.m.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    tw_fiber(&TwistedCubicParam::new(m)?)
}

/// Fiber of a rational parameter: exact when the fiber cubic splits over ℚ,
/// complex floating point otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Fiber {
    Exact(Vec<Mat<Rational>>),
    Numeric(Vec<Mat<Complex64>>),
}

pub fn tw_fiber_rational(t: &TwistedCubicParam<Rational>) -> Result<Fiber> {
    match tw_fiber(t) {
        Ok(f) => Ok(Fiber::Exact(f)),
        Err(Error::DegenerateParameter(msg)) if msg.contains("not in the field") => {
            let m: Vec<Complex64> = t
                .m
                .iter()
                .map(|x| Complex64::new(Scalar::to_f64(x), 0.0))
                .collect();
            Ok(Fiber::Numeric(tw_fiber(&TwistedCubicParam::new(m)?)?))
        }
        Err(e) => Err(e),
    }
}

/// Plücker vector of the line through `a` and the curve point `x`.
pub fn secant<T: Scalar>(a: &[T], x: &[T]) -> Vec<T> {
    pl_raw(a, x)
}

/// `ρ` as the cubic Veronese action; kept for cross-checks.
pub fn rho_veronese<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    veronese_matrix(3, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn h_matrices_at_e0() {
        let hm = h_matrices(&qv(&[1, 0, 0, 0]));
        let mut expect = Mat::<Rational>::zeros(3, 6);
        for i in 0..3 {
            expect[(i, i)] = int(1);
        }
        assert_eq!(hm.hhat, expect);
        assert_eq!(hm.h.mul_vec(&qv(&[4, 5, 6])), qv(&[0, 4, 5, 6]));
    }

    #[test]
    fn hhat_against_wedge_inverse() {
        let h = vec![rat(2, 3), int(-1), int(4), rat(5, 2)];
        let hm = h_matrices(&h);
        let inv = wedge2(&hm.h1).inverse().unwrap();
        let rows = inv.select_rows(&[0, 1, 2]);
        let h0cubed = h[0].clone() * h[0].clone() * h[0].clone();
        assert_eq!(hm.hhat, rows.scale(&h0cubed));
    }

    #[test]
    fn iota_plane_at_e0_is_l0_squared() {
        let pc = PlaneCurveParam::new(qv(&[1, 0, 0, 0]), qv(&[1, 0, 0, 0, 0, 0])).unwrap();
        let beta = iota_plane(&pc).unwrap();
        let mut expect = vec![int(0); 21];
        expect[0] = int(1);
        assert_eq!(beta.coeffs(), expect.as_slice());
    }

    #[test]
    fn omega_examples() {
        let w = omega_tw::<Rational>();
        assert_eq!(w.coeffs().iter().filter(|c| !c.is_zero()).count(), 7);
        assert_eq!(w.eval(&qv(&[0, 0, 1, 0, 0, 0])), int(0));
        assert_eq!(w.eval(&qv(&[0, 0, 0, 1, 0, 0])), int(-1));
        let l = qv(&[2, -1, 3, 1, 5, -2]);
        let l3: Vec<Rational> = l.iter().map(|x| x * int(3)).collect();
        assert_eq!(w.eval(&l3), w.eval(&l) * int(27));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&Mat::<Rational>::identity(2)), Mat::identity(4));
        let a = Mat::<Rational>::diag(&qv(&[1, -1]));
        assert_eq!(rho(&a), Mat::diag(&qv(&[1, -1, 1, -1])));
        let a = Mat::<Rational>::from_i64(&[&[2, -3], &[5, 7]]);
        assert_eq!(rho(&a), rho_veronese(&a));
        assert_eq!(rho(&a).det(), int(29i64.pow(6)));
    }

    #[test]
    fn fiber_identity_branch() {
        let m = TwistedCubicParam::new(qv(&[2, -1, 3, 1, 4, 5, -2, 1, 3, 1, 1, -1, 2])).unwrap();
        // q(c) = 2 - c + 3c², discriminant 1 - 24 < 0: complex roots.
        let f = tw_fiber_rational(&m).unwrap();
        let Fiber::Numeric(mats) = f else {
            panic!("expected a numeric fiber")
        };
        assert_eq!(mats.len(), 3);
        let id = &mats[0];
        assert!((id[(0, 1)]).norm() < 1e-12 && (id[(1, 1)] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn fiber_degenerate_m2() {
        let m = TwistedCubicParam::new(qv(&[2, -1, 0, 1, 4, 5, -2, 1, 3, 1, 1, -1, 2])).unwrap();
        assert!(matches!(tw_fiber(&m), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn plane_frame_zero_chart() {
        let h = qv(&[0, 0, 2, -3]);
        let f = plane_frame(&h).unwrap();
        assert_eq!(f.rank().unwrap(), 3);
        assert!(f.transpose().mul_vec(&h).iter().all(|x| x.is_zero()));
    }
}
