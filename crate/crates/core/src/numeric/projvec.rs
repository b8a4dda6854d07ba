use std::ops::Deref;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Homogeneous coordinate vector: at least two coordinates, not all zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjVec<T>(Vec<T>);

impl<T: Scalar> ProjVec<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "projective vector needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidInput("zero projective vector".into()));
        }
        Ok(ProjVec(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    /// Canonical representative: first nonzero coordinate 1 in exact fields,
    /// unit norm with positive leading coordinate for doubles.
    pub fn normalized(&self) -> Self {
        let mut v = self.0.clone();
        T::normalize(&mut v);
        ProjVec(v)
    }

    pub fn proj_eq(&self, other: &ProjVec<T>, tol: f64) -> Result<bool> {
        proj_eq(&self.0, &other.0, tol)
    }
}

impl<T> Deref for ProjVec<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Projective equality: all 2×2 minors of `[u v]` vanish in exact fields;
/// for floating fields the sine of the angle between `u` and `v` is at most `tol`.
///
/// The zero vector is equal only to itself.
pub fn proj_eq<T: Scalar>(u: &[T], v: &[T], tol: f64) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let uz = u.iter().all(Scalar::is_zero);
    let vz = v.iter().all(Scalar::is_zero);
    if uz || vz {
        return Ok(uz && vz);
    }
    if T::EXACT {
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                let m = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
                if !m.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    } else {
        Ok(proj_distance(u, v) <= tol)
    }
}

/// Sine of the angle between two nonzero vectors, in `[0, 1]`.
///
/// Computed as `‖u ∧ v‖ / (‖u‖‖v‖)`, so it is insensitive to the complex phase.
pub fn proj_distance<T: Scalar>(u: &[T], v: &[T]) -> f64 {
    assert_eq!(u.len(), v.len(), "proj_distance length mismatch");
    let nu = u.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return if nu == nv { 0.0 } else { 1.0 };
    }
    // Rescale first so the minors stay in range for large exact entries.
    let uf: Vec<T> = u.iter().map(|x| x.clone() / T::from_f64(nu)).collect();
    let vf: Vec<T> = v.iter().map(|x| x.clone() / T::from_f64(nv)).collect();
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let m = uf[i].clone() * vf[j].clone() - uf[j].clone() * vf[i].clone();
            acc += m.modulus().powi(2);
        }
    }
    acc.sqrt().min(1.0)
}
