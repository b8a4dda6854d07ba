//! Plücker coordinates, the second exterior power of 4×4 matrices, and
//! Veronese embeddings with their induced matrix action.
//!
//! Monomials of degree `d` in `x0..xN` are ordered graded-lexicographically
//! with `x0 > x1 > … > xN`, so for `d = 2, N = 2` the order is
//! `x0², x0x1, x0x2, x1², x1x2, x2²`. Every coefficient vector in this crate
//! (image curves, cones, Chow forms) uses this order.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::{Mat, ProjVec, Scalar};

/// Index pairs of the Plücker minors, in the order `[12],[13],[14],[23],[24],[34]`.
pub const PLUCKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-`d` monomials in `nvars` variables.
pub fn monomial_count(d: usize, nvars: usize) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    binomial(d + nvars - 1, nvars - 1)
}

/// Position of an exponent vector in the graded-lex order of its degree.
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut rem: usize = exps.iter().map(|&e| e as usize).sum();
    let mut idx = 0;
    for (k, &e) in exps.iter().enumerate().take(n.saturating_sub(1)) {
        let e = e as usize;
        for v in e + 1..=rem {
            idx += monomial_count(rem - v, n - k - 1);
        }
        rem -= e;
    }
    idx
}

/// Degree-`d` monomials in `nvars` variables, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    degree: usize,
    exps: Vec<Vec<u32>>,
    nvars: usize,
}

impl MonomialOrder {
    pub fn new(degree: usize, nvars: usize) -> Self {
        let mut exps = Vec::with_capacity(monomial_count(degree, nvars));
        let mut cur = vec![0u32; nvars];
        fill(&mut exps, &mut cur, 0, degree);
        MonomialOrder {
            degree,
            exps,
            nvars,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    /// Machine-readable header listing the exponent vectors.
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "variables": self.nvars,
            "order": "grlex",
            "monomials": self.exps,
        })
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, k: usize, rem: usize) {
    if k + 1 == cur.len() {
        cur[k] = rem as u32;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        return;
    }
    for e in (0..=rem).rev() {
        cur[k] = e as u32;
        fill(out, cur, k + 1, rem - e);
    }
    cur[k] = 0;
}

/// All degree-`d` monomials of `x`.
pub fn veronese<T: Scalar>(d: usize, x: &[T]) -> Vec<T> {
    MonomialOrder::new(d, x.len())
        .exponents()
        .iter()
        .map(|e| eval_monomial(e, x))
        .collect()
}

pub(crate) fn eval_monomial<T: Scalar>(exps: &[u32], x: &[T]) -> T {
    let mut acc = T::one();
    for (e, xi) in exps.iter().zip(x) {
        for _ in 0..*e {
            acc = acc * xi.clone();
        }
    }
    acc
}

/// Expands `Π_k (row_k(A)·X)^{e_k}` in the degree-`|e|` monomial basis of `X`.
fn expand_product<T: Scalar>(a: &Mat<T>, exps: &[u32]) -> Vec<T> {
    let n = a.ncols();
    let mut poly = vec![T::one()];
    let mut deg = 0;
    for (k, &e) in exps.iter().enumerate() {
        let row = a.row(k);
        for _ in 0..e {
            poly = mul_linear(&poly, deg, row, n);
            deg += 1;
        }
    }
    poly
}

fn mul_linear<T: Scalar>(poly: &[T], deg: usize, lin: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); monomial_count(deg + 1, n)];
    let order = MonomialOrder::new(deg, n);
    for (c, e) in poly.iter().zip(order.exponents()) {
        if c.is_zero() {
            continue;
        }
        let mut e = e.clone();
        for (v, a) in lin.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            e[v] += 1;
            let i = monomial_index(&e);
            out[i] = out[i].clone() + c.clone() * a.clone();
            e[v] -= 1;
        }
    }
    out
}

/// Induced action of `A` on degree-`d` monomial vectors:
/// `veronese(d, A·X) = veronese_matrix(d, A) · veronese(d, X)`.
pub fn veronese_matrix<T: Scalar>(d: usize, a: &Mat<T>) -> Mat<T> {
    let target = MonomialOrder::new(d, a.nrows());
    let cols = monomial_count(d, a.ncols());
    let mut out = Mat::zeros(target.len(), cols);
    for (i, e) in target.exponents().iter().enumerate() {
        for (j, v) in expand_product(a, e).into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    out
}

/// Coefficients of the form `β ∘ A`, i.e. `veronese_matrix(d, A)ᵀ · β`,
/// skipping the zero coefficients of `β`.
pub fn pullback<T: Scalar>(d: usize, a: &Mat<T>, beta: &[T]) -> Vec<T> {
    let target = MonomialOrder::new(d, a.nrows());
    assert_eq!(beta.len(), target.len(), "pullback coefficient length mismatch");
    let mut out = vec![T::zero(); monomial_count(d, a.ncols())];
    for (b, e) in beta.iter().zip(target.exponents()) {
        if b.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(expand_product(a, e)) {
            if !v.is_zero() {
                *o = o.clone() + b.clone() * v;
            }
        }
    }
    out
}

/// Evaluates the form with coefficients `coeffs` at `x`.
pub fn eval_form<T: Scalar>(d: usize, coeffs: &[T], x: &[T]) -> T {
    let order = MonomialOrder::new(d, x.len());
    assert_eq!(coeffs.len(), order.len(), "form coefficient length mismatch");
    coeffs
        .iter()
        .zip(order.exponents())
        .filter(|(c, _)| !c.is_zero())
        .fold(T::zero(), |acc, (c, e)| acc + c.clone() * eval_monomial(e, x))
}

/// Line in P³ in Plücker coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerLine<T>(ProjVec<T>);

impl<T: Scalar> PlueckerLine<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() != 6 {
            return Err(Error::InvalidInput(format!(
                "a line has 6 Plücker coordinates, got {}",
                coords.len()
            )));
        }
        Ok(PlueckerLine(ProjVec::new(coords)?))
    }

    pub fn coords(&self) -> &[T] {
        self.0.coords()
    }

    pub fn as_proj(&self) -> &ProjVec<T> {
        &self.0
    }

    /// `L0·L5 − L1·L4 + L2·L3`, zero exactly on lines.
    pub fn grassmann_plucker(&self) -> T {
        let l = self.coords();
        l[0].clone() * l[5].clone() - l[1].clone() * l[4].clone() + l[2].clone() * l[3].clone()
    }
}

/// Raw minors of the 2×4 stack, without the span check.
pub(crate) fn pl_raw<T: Scalar>(x0: &[T], x1: &[T]) -> Vec<T> {
    PLUCKER_PAIRS
        .iter()
        .map(|&(i, j)| x0[i].clone() * x1[j].clone() - x0[j].clone() * x1[i].clone())
        .collect()
}

/// Line spanned by two points of P³.
pub fn plucker<T: Scalar>(x0: &[T], x1: &[T]) -> Result<PlueckerLine<T>> {
    if x0.len() != 4 || x1.len() != 4 {
        return Err(Error::InvalidInput("points of P³ need 4 coordinates".into()));
    }
    let l = pl_raw(x0, x1);
    if l.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateSpan);
    }
    PlueckerLine::new(l)
}

/// The signed permutation `Σ` with `Σ·L = (L5, −L4, L3, L2, −L1, L0)`.
pub fn sigma<T: Scalar>() -> Mat<T> {
    let mut s = Mat::zeros(6, 6);
    let one = T::one();
    s[(0, 5)] = one.clone();
    s[(1, 4)] = -one.clone();
    s[(2, 3)] = one.clone();
    s[(3, 2)] = one.clone();
    s[(4, 1)] = -one.clone();
    s[(5, 0)] = one;
    s
}

/// Coordinates of the line as the intersection of two planes.
pub fn dual_line<T: Scalar>(l: &PlueckerLine<T>) -> PlueckerLine<T> {
    let c = l.coords();
    PlueckerLine(
        ProjVec::new(vec![
            c[5].clone(),
            -c[4].clone(),
            c[3].clone(),
            c[2].clone(),
            -c[1].clone(),
            c[0].clone(),
        ])
        .expect("signed permutation of a nonzero vector"),
    )
}

/// Second exterior power: `wedge2(M)·pl(X, Y) = pl(M·X, M·Y)`.
pub fn wedge2<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    assert_eq!(m.shape(), (4, 4), "wedge2 expects a 4×4 matrix");
    Mat::from_fn(6, 6, |r, c| {
        let (i, j) = PLUCKER_PAIRS[r];
        let (k, l) = PLUCKER_PAIRS[c];
        m[(i, k)].clone() * m[(j, l)].clone() - m[(i, l)].clone() * m[(j, k)].clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, Rational};

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn monomial_order_conic() {
        let o = MonomialOrder::new(2, 3);
        let expect: Vec<Vec<u32>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(o.exponents(), expect.as_slice());
        for d in 0..5 {
            for n in 1..7 {
                let o = MonomialOrder::new(d, n);
                assert_eq!(o.len(), monomial_count(d, n));
                for (i, e) in o.exponents().iter().enumerate() {
                    assert_eq!(monomial_index(e), i);
                }
            }
        }
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese(2, &qv(&[1, 1, 1])), qv(&[1; 6]));
        assert_eq!(veronese(2, &qv(&[1, 2, 3])), qv(&[1, 2, 3, 4, 6, 9]));
        assert_eq!(veronese(3, &qv(&[2, 3])), qv(&[8, 12, 18, 27]));
    }

    #[test]
    fn veronese_matrix_examples() {
        for d in [2, 3] {
            for n in [3, 4, 6] {
                let i = Mat::<Rational>::identity(n);
                assert_eq!(veronese_matrix(d, &i), Mat::identity(monomial_count(d, n)));
            }
        }
        let a = Mat::<Rational>::diag(&qv(&[1, 2, 3]));
        assert_eq!(veronese_matrix(2, &a), Mat::diag(&qv(&[1, 2, 3, 4, 6, 9])));
    }

    #[test]
    fn plucker_examples() {
        let e = |i: usize| {
            let mut v = qv(&[0, 0, 0, 0]);
            v[i] = int(1);
            v
        };
        assert_eq!(plucker(&e(0), &e(1)).unwrap().coords(), qv(&[1, 0, 0, 0, 0, 0]).as_slice());
        assert_eq!(plucker(&e(0), &e(3)).unwrap().coords(), qv(&[0, 0, 1, 0, 0, 0]).as_slice());
        assert_eq!(plucker(&e(0), &qv(&[2, 0, 0, 0])), Err(Error::DegenerateSpan));
    }

    #[test]
    fn dual_line_examples() {
        let l = PlueckerLine::new(qv(&[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(dual_line(&l).coords(), qv(&[0, 0, 0, 0, 0, 1]).as_slice());
        let l = PlueckerLine::new(qv(&[3, -1, 4, 1, -5, 9])).unwrap();
        assert_eq!(dual_line(&dual_line(&l)), l);
        assert_eq!(sigma::<Rational>().mul_vec(l.coords()), dual_line(&l).coords());
    }

    #[test]
    fn wedge2_examples() {
        assert_eq!(wedge2(&Mat::<Rational>::identity(4)), Mat::identity(6));
        let m = Mat::<Rational>::diag(&qv(&[2, 3, 5, 7]));
        assert_eq!(wedge2(&m), Mat::diag(&qv(&[6, 10, 14, 15, 21, 35])));
    }

    #[test]
    fn monomial_header() {
        let h = MonomialOrder::new(2, 3).to_json();
        assert_eq!(h["monomials"][1], json!([1, 1, 0]));
    }
}
