//! Univariate polynomials and binary forms.
//!
//! A univariate polynomial stores the coefficient of `s^k` at index `k`. A
//! binary form of degree `n` stores the coefficient of `s^(n-k) t^k` at index
//! `k`, matching the monomial order used for two variables elsewhere.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::{max_modulus, Scalar};

fn trim<T: Scalar>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<T: Scalar>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn rem<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let b = trim(b.to_vec());
    let db = b.len().checked_sub(1).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let k = r.len() - 1;
        let f = r[k].clone() / lead.clone();
        for (i, bi) in b.iter().enumerate() {
            let j = k - db + i;
            r[j] = r[j].clone() - f.clone() * bi.clone();
        }
        r[k] = T::zero();
        r = trim(r);
    }
    r
}

/// Monic greatest common divisor over an exact field.
pub fn gcd<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = c.clone() / l.clone();
        }
    }
    a
}

pub fn eval<T: Scalar>(p: &[T], s: &T) -> T {
    p.iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * s.clone() + c.clone())
}

/// Complex roots of a real polynomial via companion-matrix eigenvalues.
pub fn roots(p: &[f64]) -> Vec<Complex64> {
    let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.abs() <= 1e-14 * scale) {
        p.pop();
    }
    let n = match p.len() {
        0 | 1 => return Vec::new(),
        l => l - 1,
    };
    let lead = p[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Product of two binary forms.
pub fn binary_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn binary_eval(f: &[Complex64], s: Complex64, t: Complex64) -> Complex64 {
    let n = f.len() - 1;
    f.iter()
        .enumerate()
        .map(|(k, c)| c * s.powu((n - k) as u32) * t.powu(k as u32))
        .sum()
}

/// Whether the binary forms have a common projective root.
///
/// Exact fields compute a univariate gcd after setting `t = 1` and check the
/// root `(1:0)` separately. Floating fields locate the roots of the largest
/// form and test the others at them with relative tolerance `tol`.
pub fn binary_common_root<T: Scalar>(forms: &[Vec<T>], tol: f64) -> bool {
    let nonzero: Vec<&Vec<T>> = forms
        .iter()
        .filter(|f| !f.iter().all(|c| c.negligible(max_modulus(f).max(f64::MIN_POSITIVE))))
        .collect();
    if nonzero.is_empty() {
        return true;
    }
    if T::EXACT {
        if nonzero.iter().all(|f| f[0].is_zero()) {
            return true;
        }
        let mut g: Option<Vec<T>> = None;
        for f in &nonzero {
            let p: Vec<T> = f.iter().rev().cloned().collect();
            g = Some(match g {
                None => trim(p),
                Some(g) => gcd(&g, &p),
            });
            if g.as_ref().is_some_and(|g| g.len() <= 1) {
                return false;
            }
        }
        g.is_some_and(|g| g.len() > 1)
    } else {
        let cf: Vec<Vec<Complex64>> = nonzero
            .iter()
            .map(|f| {
                let n = f.iter().map(|c| c.modulus().powi(2)).sum::<f64>().sqrt();
                f.iter().map(|c| Complex64::new(c.to_f64() / n, 0.0)).collect()
            })
            .collect();
        // Real parts only: the float path serves real forms.
        let pivot = &cf[0];
        let ok_at = |s: Complex64, t: Complex64| {
            let norm = (s.norm_sqr() + t.norm_sqr()).sqrt();
            let (s, t) = (s / norm, t / norm);
            cf.iter().all(|f| binary_eval(f, s, t).norm() <= tol)
        };
        if pivot[0].norm() <= tol && ok_at(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)) {
            return true;
        }
        let uni: Vec<f64> = pivot.iter().rev().map(|c| c.re).collect();
        roots(&uni)
            .into_iter()
            .any(|r| ok_at(r, Complex64::new(1.0, 0.0)))
    }
}
