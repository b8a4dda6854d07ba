//! Projection of space curves to image curves, back-projected cones, and the
//! singularity type of projected twisted cubics.

use rayon::prelude::*;

use crate::camera::{e_matrix, Camera};
use crate::chow::{
    curve_degree, iota_plane, iota_tw, plane_frame, ChowForm, PlaneCurveParam, SpaceCurve,
    TwistedCubicParam,
};
use crate::error::{Error, Result};
use crate::multilinear::{eval_form, monomial_count, pullback, veronese_matrix, MonomialOrder};
use crate::numeric::{Mat, ProjVec, Scalar};
use crate::poly::{binary_common_root, binary_mul};

/// Degree-`d` plane curve in an image plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageCurve<T> {
    degree: usize,
    coeffs: ProjVec<T>,
}

impl<T: Scalar> ImageCurve<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        let degree = curve_degree(coeffs.len())?;
        Ok(ImageCurve {
            degree,
            coeffs: ProjVec::new(coeffs)?,
        })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        self.coeffs.coords()
    }

    pub fn eval(&self, x: &[T]) -> T {
        eval_form(self.degree, self.coeffs(), x)
    }

    pub fn normalized(&self) -> Self {
        ImageCurve {
            degree: self.degree,
            coeffs: self.coeffs.normalized(),
        }
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.degree == other.degree && self.coeffs.proj_eq(&other.coeffs, tol)?)
    }
}

/// Degree-`d` surface in P³; for quadrics also available as a symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone<T> {
    degree: usize,
    coeffs: ProjVec<T>,
}

impl<T: Scalar> Cone<T> {
    pub fn new(degree: usize, coeffs: Vec<T>) -> Result<Self> {
        let n = monomial_count(degree, 4);
        if coeffs.len() != n {
            return Err(Error::InvalidInput(format!(
                "degree-{degree} surface needs {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Cone {
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

    pub fn eval(&self, x: &[T]) -> T {
        eval_form(self.degree, self.coeffs(), x)
    }

    /// Symmetric `Q` with `Xᵀ Q X` equal to the quadric.
    pub fn quadric_matrix(&self) -> Result<Mat<T>> {
        if self.degree != 2 {
            return Err(Error::InvalidDegree {
                expected: 2,
                got: self.degree,
            });
        }
        Ok(quadric_matrix(4, self.coeffs()))
    }

    pub fn from_quadric_matrix(q: &Mat<T>) -> Result<Self> {
        if q.shape() != (4, 4) {
            return Err(Error::InvalidInput("quadric matrix must be 4x4".into()));
        }
        Self::new(2, quadric_coeffs(q))
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.degree == other.degree && self.coeffs.proj_eq(&other.coeffs, tol)?)
    }
}

/// Symmetric matrix of a quadratic form in `n` variables.
pub fn quadric_matrix<T: Scalar>(n: usize, coeffs: &[T]) -> Mat<T> {
    let order = MonomialOrder::new(2, n);
    let half = T::one() / T::from_i64(2);
    let mut q = Mat::zeros(n, n);
    for (c, e) in coeffs.iter().zip(order.exponents()) {
        let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match idx.as_slice() {
            [i] => q[(*i, *i)] = c.clone(),
            [i, j] => {
                q[(*i, *j)] = c.clone() * half.clone();
                q[(*j, *i)] = c.clone() * half.clone();
            }
            _ => unreachable!("quadratic monomial"),
        }
    }
    q
}

/// Coefficients of `Xᵀ Q X` for a symmetric `Q`.
pub fn quadric_coeffs<T: Scalar>(q: &Mat<T>) -> Vec<T> {
    let n = q.nrows();
    MonomialOrder::new(2, n)
        .exponents()
        .iter()
        .map(|e| {
            let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            match idx.as_slice() {
                [i] => q[(*i, *i)].clone(),
                [i, j] => q[(*i, *j)].clone() + q[(*j, *i)].clone(),
                _ => unreachable!("quadratic monomial"),
            }
        })
        .collect()
}

/// Ordered tuple of cameras.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement<T> {
    cameras: Vec<Camera<T>>,
}

impl<T: Scalar> Arrangement<T> {
    pub fn new(cameras: Vec<Camera<T>>) -> Result<Self> {
        if cameras.is_empty() {
            return Err(Error::InvalidInput("arrangement needs a camera".into()));
        }
        Ok(Arrangement { cameras })
    }

    pub fn cameras(&self) -> &[Camera<T>] {
        &self.cameras
    }

    pub fn len(&self) -> usize {
        self.cameras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cameras.is_empty()
    }

    pub fn centers(&self) -> Vec<ProjVec<T>> {
        self.cameras.iter().map(|c| c.center().clone()).collect()
    }
}

/// `C·H`, the map from plane coordinates to the image; singular iff the plane
/// passes through the center.
fn plane_to_image<T: Scalar>(cam: &Camera<T>, h: &[T]) -> Result<Mat<T>> {
    let m = cam.matrix().matmul(&plane_frame(h)?);
    if m.rank()? < 3 {
        return Err(Error::PlaneThroughCenter);
    }
    Ok(m)
}

/// Image of a plane curve: `α ∘ adj(C·H)`.
pub fn project_plane_curve<T: Scalar>(
    cam: &Camera<T>,
    pc: &PlaneCurveParam<T>,
) -> Result<ImageCurve<T>> {
    let adj = plane_to_image(cam, pc.h.coords())?.adjugate();
    ImageCurve::new(pullback(pc.degree(), &adj, pc.alpha.coords()))
}

/// Image of a plane curve through its Chow form.
pub fn project_plane_curve_chow<T: Scalar>(
    cam: &Camera<T>,
    pc: &PlaneCurveParam<T>,
) -> Result<ImageCurve<T>> {
    plane_to_image(cam, pc.h.coords())?;
    project_chow(cam, &iota_plane(pc)?)
}

/// Image curve `β ∘ Ĉ`: the image points whose viewing ray meets the curve.
pub fn project_chow<T: Scalar>(cam: &Camera<T>, beta: &ChowForm<T>) -> Result<ImageCurve<T>> {
    let g = pullback(beta.degree(), cam.chat(), beta.coeffs());
    if g.iter().all(|x| x.negligible(crate::numeric::max_modulus(beta.coeffs()))) {
        return Err(Error::CenterOnCurve);
    }
    ImageCurve::new(g)
}

pub fn project_twisted<T: Scalar>(
    cam: &Camera<T>,
    t: &TwistedCubicParam<T>,
) -> Result<ImageCurve<T>> {
    project_chow(cam, &iota_tw(t)?)
}

/// Image of the curve in every camera, in camera order.
pub fn joint_project<T: Scalar>(
    arr: &Arrangement<T>,
    curve: &SpaceCurve<T>,
) -> Result<Vec<ImageCurve<T>>> {
    let beta = match curve {
        SpaceCurve::Plane(_) => None,
        other => Some(other.chow_form()?),
    };
    arr.cameras()
        .par_iter()
        .enumerate()
        .map(|(i, cam)| {
            match (curve, &beta) {
                (SpaceCurve::Plane(pc), _) => project_plane_curve(cam, pc),
                (_, Some(b)) => project_chow(cam, b),
                _ => unreachable!("Chow form computed above"),
            }
            .map_err(|e| e.in_camera(i))
        })
        .collect()
}

/// Cone over an image curve with vertex at the camera center: `γ ∘ C`.
pub fn back_project_cone<T: Scalar>(cam: &Camera<T>, g: &ImageCurve<T>) -> Cone<T> {
    Cone::new(g.degree(), pullback(g.degree(), cam.matrix(), g.coeffs()))
        .expect("surjective camera keeps the form nonzero")
}

/// Cone over the curve `β` with vertex `c`: `β ∘ E(c)`.
pub fn cone_join<T: Scalar>(c: &[T], beta: &ChowForm<T>) -> Result<Cone<T>> {
    let z = pullback(beta.degree(), &e_matrix(c), beta.coeffs());
    if z.iter().all(|x| x.negligible(crate::numeric::max_modulus(beta.coeffs()))) {
        return Err(Error::VertexOnCurve);
    }
    Cone::new(beta.degree(), z)
}

/// Linear maps `P_i` with `P_i·α` the image in camera `i` of the curve `α` in plane `h`.
pub fn fixed_plane_projectors<T: Scalar>(
    arr: &Arrangement<T>,
    h: &[T],
    d: usize,
) -> Result<Vec<Mat<T>>> {
    arr.cameras()
        .iter()
        .enumerate()
        .map(|(i, cam)| {
            let adj = plane_to_image(cam, h).map_err(|e| e.in_camera(i))?.adjugate();
            Ok(veronese_matrix(d, &adj).transpose())
        })
        .collect()
}

/// Singularity type of a projected twisted cubic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    Nodal,
    Cuspidal,
}

/// Binary quadratics `∂_s φ` and `∂_t φ` per coordinate of the standard cubic.
fn phi_partials<T: Scalar>() -> [[Vec<T>; 4]; 2] {
    let f = |v: [i64; 3]| v.iter().map(|&x| T::from_i64(x)).collect::<Vec<T>>();
    [
        [f([3, 0, 0]), f([0, 2, 0]), f([0, 0, 1]), f([0, 0, 0])],
        [f([0, 0, 0]), f([1, 0, 0]), f([0, 2, 0]), f([0, 0, 3])],
    ]
}

/// Cusp iff the center lies on a tangent line, i.e. the images of `∂_s P` and
/// `∂_t P` are dependent at some parameter, where `P = M(m)·φ`.
pub fn cubic_image_singularity<T: Scalar>(
    cam: &Camera<T>,
    t: &TwistedCubicParam<T>,
) -> Result<Singularity> {
    project_twisted(cam, t)?;
    let q = cam.matrix().matmul(&t.matrix());
    let parts = phi_partials::<T>();
    // u_r, v_r: binary quadratics of (Q ∂_s φ)_r and (Q ∂_t φ)_r.
    let image = |which: usize| -> Vec<Vec<T>> {
        (0..3)
            .map(|r| {
                (0..3)
                    .map(|k| {
                        (0..4).fold(T::zero(), |acc, a| {
                            acc + q[(r, a)].clone() * parts[which][a][k].clone()
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let (u, v) = (image(0), image(1));
    let cross: Vec<Vec<T>> = [(1, 2), (2, 0), (0, 1)]
        .iter()
        .map(|&(j, k)| {
            let a = binary_mul(&u[j], &v[k]);
            let b = binary_mul(&u[k], &v[j]);
            a.into_iter().zip(b).map(|(x, y)| x - y).collect()
        })
        .collect();
    Ok(if binary_common_root(&cross, 1e-7) {
        Singularity::Cuspidal
    } else {
        Singularity::Nodal
    })
}

/// Substitutes `X = φ(s, t)` into a form on P³, giving a binary form of degree `3k`.
pub fn restrict_to_standard_cubic<T: Scalar>(k: usize, coeffs: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); 3 * k + 1];
    for (c, e) in coeffs.iter().zip(MonomialOrder::new(k, 4).exponents()) {
        if c.is_zero() {
            continue;
        }
        let tdeg: usize = e.iter().enumerate().map(|(a, &ea)| a * ea as usize).sum();
        out[tdeg] = out[tdeg].clone() + c.clone();
    }
    out
}

/// Gradient of a plane curve as three forms of degree `d - 1`.
pub fn form_gradient<T: Scalar>(g: &ImageCurve<T>) -> Vec<Vec<T>> {
    gradient(g.degree(), g.coeffs())
}

fn gradient<T: Scalar>(d: usize, coeffs: &[T]) -> Vec<Vec<T>> {
    let lower = monomial_count(d - 1, 3);
    (0..3)
        .map(|i| {
            let mut out = vec![T::zero(); lower];
            for (c, e) in coeffs.iter().zip(MonomialOrder::new(d, 3).exponents()) {
                if e[i] == 0 || c.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 1;
                let j = crate::multilinear::monomial_index(&e2);
                out[j] = out[j].clone() + c.clone() * T::from_i64(e[i] as i64);
            }
            out
        })
        .collect()
}

/// Hessian matrix of a plane curve of degree at least 2 at `x`.
pub fn form_hessian<T: Scalar>(g: &ImageCurve<T>, x: &[T]) -> Mat<T> {
    let d = g.degree();
    assert!(d >= 2, "Hessian of a line");
    let mut h = Mat::zeros(3, 3);
    for (i, gi) in gradient(d, g.coeffs()).iter().enumerate() {
        for (j, gij) in gradient(d - 1, gi).iter().enumerate() {
            h[(i, j)] = eval_form(d - 2, gij, x);
        }
    }
    h
}

/// Whether the projected twisted cubic has a singular point: the partial
/// derivatives pulled back along `C·M(m)·φ` share a root.
pub fn cubic_image_is_singular<T: Scalar>(
    cam: &Camera<T>,
    t: &TwistedCubicParam<T>,
    g: &ImageCurve<T>,
) -> bool {
    let q = cam.matrix().matmul(&t.matrix());
    let forms: Vec<Vec<T>> = form_gradient(g)
        .into_iter()
        .map(|p| restrict_to_standard_cubic(2, &pullback(2, &q, &p)))
        .collect();
    binary_common_root(&forms, 1e-7)
}
