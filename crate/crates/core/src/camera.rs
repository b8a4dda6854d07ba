//! Pinhole cameras, fundamental matrices and plane-induced homographies.

use crate::chow::plane_frame;
use crate::error::{Error, Result};
use crate::numeric::{Mat, ProjVec, Scalar};
use crate::DEFAULT_TOL;

/// `E(c)` with `E(c)·X = −pl(c, X)`: Plücker vector of the line joining `c` and `X`.
pub fn e_matrix<T: Scalar>(c: &[T]) -> Mat<T> {
    assert_eq!(c.len(), 4, "center needs 4 coordinates");
    let z = T::zero;
    let [c0, c1, c2, c3] = [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()];
    Mat::from_rows(vec![
        vec![c1.clone(), -c0.clone(), z(), z()],
        vec![c2.clone(), z(), -c0.clone(), z()],
        vec![c3.clone(), z(), z(), -c0],
        vec![z(), c2.clone(), -c1.clone(), z()],
        vec![z(), c3.clone(), z(), -c1],
        vec![z(), z(), c3, -c2],
    ])
    .expect("fixed shape")
}

/// Full-rank 3×4 camera with its center, a right inverse and `Ĉ = E(c)·C†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Camera<T> {
    matrix: Mat<T>,
    center: ProjVec<T>,
    pinv: Mat<T>,
    chat: Mat<T>,
}

impl<T: Scalar> Camera<T> {
    pub fn new(matrix: Mat<T>) -> Result<Self> {
        if matrix.shape() != (3, 4) {
            return Err(Error::InvalidInput(format!(
                "camera must be 3x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.rank()? < 3 {
            return Err(Error::InvalidCamera);
        }
        let center = matrix
            .kernel_basis()
            .into_iter()
            .next()
            .ok_or(Error::InvalidCamera)?;
        let pinv = matrix.right_pseudo_inverse().map_err(|_| Error::InvalidCamera)?;
        let chat = e_matrix(center.coords()).matmul(&pinv);
        Ok(Camera {
            matrix,
            center,
            pinv,
            chat,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(Mat::from_i64(rows))
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.matrix
    }

    pub fn center(&self) -> &ProjVec<T> {
        &self.center
    }

    pub fn pinv(&self) -> &Mat<T> {
        &self.pinv
    }

    /// `Ĉ`: sends an image point `x` to the Plücker vector of its viewing ray.
    pub fn chat(&self) -> &Mat<T> {
        &self.chat
    }

    pub fn project_point(&self, x: &[T]) -> Vec<T> {
        self.matrix.mul_vec(x)
    }

    /// Same camera after a world transform: `C·H`.
    pub fn transformed(&self, h: &Mat<T>) -> Result<Self> {
        Self::new(self.matrix.matmul(h))
    }
}

/// Rank-2 3×3 matrix `F` with `y1ᵀ F y2 = 0` for corresponding image points.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalMatrix<T> {
    f: Mat<T>,
}

impl<T: Scalar> FundamentalMatrix<T> {
    pub fn new(f: Mat<T>) -> Result<Self> {
        if f.shape() != (3, 3) || f.rank()? != 2 {
            return Err(Error::InvalidFundamental);
        }
        Ok(FundamentalMatrix { f })
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.f
    }

    pub fn transpose(&self) -> Self {
        FundamentalMatrix {
            f: self.f.transpose(),
        }
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        crate::numeric::proj_eq(self.f.data(), other.f.data(), tol)
    }
}

fn centers_equal<T: Scalar>(c1: &Camera<T>, c2: &Camera<T>) -> Result<bool> {
    c1.center().proj_eq(c2.center(), DEFAULT_TOL)
}

/// `F_ij = det [[C1, e_i, 0], [C2, 0, e_j]]`.
pub fn fundamental<T: Scalar>(c1: &Camera<T>, c2: &Camera<T>) -> Result<FundamentalMatrix<T>> {
    if centers_equal(c1, c2)? {
        return Err(Error::DegeneratePair);
    }
    let f = Mat::from_fn(3, 3, |i, j| {
        let mut m = Mat::<T>::zeros(6, 6);
        for r in 0..3 {
            for c in 0..4 {
                m[(r, c)] = c1.matrix()[(r, c)].clone();
                m[(r + 3, c)] = c2.matrix()[(r, c)].clone();
            }
        }
        m[(i, 4)] = T::one();
        m[(3 + j, 5)] = T::one();
        m.det()
    });
    FundamentalMatrix::new(f)
}

/// Epipoles `(e12, e21)`: `e12 = ker Fᵀ` is the image of the second center in
/// view 1, `e21 = ker F` the image of the first center in view 2.
pub fn epipoles<T: Scalar>(f: &FundamentalMatrix<T>) -> Result<(ProjVec<T>, ProjVec<T>)> {
    let m = f.matrix();
    if m.rank()? != 2 {
        return Err(Error::InvalidFundamental);
    }
    let e21 = m.kernel_basis().into_iter().next();
    let e12 = m.transpose().kernel_basis().into_iter().next();
    match (e12, e21) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::InvalidFundamental),
    }
}

/// Camera pair realizing `F` in which `C1` has zero first column and `C2` zero
/// last column, i.e. `C1 = A1·[0 | I]`, `C2 = A2·[I | 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StdSolution<T> {
    pub c1: Camera<T>,
    pub c2: Camera<T>,
    /// Coordinate of `e21` used to build the pair.
    pub case: usize,
    pub a1: Mat<T>,
    pub a2: Mat<T>,
}

fn cross_matrix<T: Scalar>(e: &[T]) -> Mat<T> {
    let z = T::zero;
    Mat::from_rows(vec![
        vec![z(), -e[2].clone(), e[1].clone()],
        vec![e[2].clone(), z(), -e[0].clone()],
        vec![-e[1].clone(), e[0].clone(), z()],
    ])
    .expect("fixed shape")
}

fn case_matrix<T: Scalar>(e21: &[T], i: usize) -> Mat<T> {
    // Columns (e21, 0), the two other unit vectors of the first three, e3.
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(4);
    let mut first = e21.to_vec();
    first.push(T::zero());
    cols.push(first);
    let unit = |k: usize| (0..4).map(|r| if r == k { T::one() } else { T::zero() }).collect();
    cols.extend((0..3).filter(|&k| k != i).map(unit));
    cols.push(unit(3));
    Mat::from_cols(&cols).expect("fixed shape")
}

/// Standard camera pair of a fundamental matrix.
///
/// The case is the first nonzero coordinate of `e21` in exact fields and the
/// largest one in magnitude otherwise; other cases are tried if the blocks
/// come out singular.
pub fn std_solution<T: Scalar>(f: &FundamentalMatrix<T>) -> Result<StdSolution<T>> {
    let (e12, e21) = epipoles(f)?;
    let base1 = cross_matrix(e12.coords())
        .matmul(f.matrix())
        .hstack(&Mat::from_cols(&[e12.coords().to_vec()])?);
    let base2 = Mat::<T>::identity(3).hstack(&Mat::zeros(3, 1));
    let mut cases: Vec<usize> = (0..3).filter(|&i| !e21[i].is_zero()).collect();
    if !T::EXACT {
        cases.sort_by(|&a, &b| e21[b].modulus().total_cmp(&e21[a].modulus()));
    }
    for i in cases {
        let h = case_matrix(e21.coords(), i);
        let (Ok(c1), Ok(c2)) = (
            Camera::new(base1.matmul(&h)),
            Camera::new(base2.matmul(&h)),
        ) else {
            continue;
        };
        let a1 = c1.matrix().select_cols(&[1, 2, 3]);
        let a2 = c2.matrix().select_cols(&[0, 1, 2]);
        if a1.rank()? == 3 && a2.rank()? == 3 {
            return Ok(StdSolution {
                c1,
                c2,
                case: i,
                a1,
                a2,
            });
        }
    }
    Err(Error::InvalidFundamental)
}

/// Homography `(C2·H)(C1·H)⁻¹` induced by the plane `h`, with `H` the plane frame.
pub fn homography<T: Scalar>(c1: &Camera<T>, c2: &Camera<T>, h: &[T]) -> Result<Mat<T>> {
    let frame = plane_frame(h)?;
    let m1 = c1.matrix().matmul(&frame);
    let m2 = c2.matrix().matmul(&frame);
    if m1.rank()? < 3 || m2.rank()? < 3 {
        return Err(Error::PlaneThroughCenter);
    }
    let inv = m1.inverse().map_err(|_| Error::PlaneThroughCenter)?;
    Ok(m2.matmul(&inv))
}
