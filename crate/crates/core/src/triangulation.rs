//! Nearest-point problem on the curve multiview varieties.
//!
//! The objective is the weighted squared distance between observed image
//! curves and the images of a candidate curve, both in affine charts of the
//! coefficient space. Plane curves are parametrized by `(h, α)` with `h0 = 1`
//! and one coefficient of `α` fixed to 1; twisted cubics by `m` with one
//! coordinate fixed to 1.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::chow::{h_matrices, m_matrix, omega_tw};
use crate::error::{Error, Result};
use crate::multilinear::{monomial_count, pullback, sigma, wedge2};
use crate::numeric::{proj_distance, Dual, Mat, Scalar};
use crate::projection::{Arrangement, ImageCurve};

/// Curve family being fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    PlaneCurve { degree: usize },
    Twisted,
}

impl Model {
    pub fn image_degree(self) -> usize {
        match self {
            Model::PlaneCurve { degree } => degree,
            Model::Twisted => 3,
        }
    }

    /// Length of the homogeneous parameter vector.
    pub fn full_len(self) -> usize {
        match self {
            Model::PlaneCurve { degree } => 4 + monomial_count(degree, 3),
            Model::Twisted => 13,
        }
    }

    /// Homogeneous blocks of the parameter vector, as index ranges.
    pub fn blocks(self) -> Vec<Range<usize>> {
        match self {
            Model::PlaneCurve { .. } => vec![0..4, 4..self.full_len()],
            Model::Twisted => vec![Range { start: 0, end: 13 }],
        }
    }

    /// Dimension of the multiview variety: `d²/2 + 3d/2 + 3` for plane curves, 12 for twisted cubics.
    pub fn expected_dimension(self) -> usize {
        match self {
            Model::PlaneCurve { degree } => (degree * degree + 3 * degree) / 2 + 3,
            Model::Twisted => 12,
        }
    }
}

fn lift<T: Scalar>(m: &Mat<f64>) -> Mat<T> {
    m.map(|x| T::from_f64(*x))
}

/// Images of the curve with homogeneous parameters `full` in every camera.
fn images<T: Scalar>(model: Model, cams: &[Mat<f64>], chats: &[Mat<f64>], full: &[T]) -> Result<Vec<Vec<T>>> {
    match model {
        Model::PlaneCurve { degree } => {
            let frame = h_matrices(&full[..4]).h;
            let alpha = &full[4..];
            Ok(cams
                .iter()
                .map(|c| pullback(degree, &lift::<T>(c).matmul(&frame).adjugate(), alpha))
                .collect())
        }
        Model::Twisted => {
            // Compose the line maps before pulling back the fixed form; expanding
            // the transformed Chow form first loses several digits.
            let s = sigma::<T>();
            let w = s.matmul(&wedge2(&m_matrix(full).transpose())).matmul(&s);
            let omega = omega_tw::<T>();
            Ok(chats
                .iter()
                .map(|c| pullback(3, &w.matmul(&lift::<T>(c)), omega.coeffs()))
                .collect())
        }
    }
}

/// Affine chart `γ / γ_k` with coordinate `k` dropped.
fn chart<T: Scalar>(g: &[T], k: usize, view: usize) -> Result<Vec<T>> {
    let scale = g.iter().map(Scalar::modulus).fold(0.0, f64::max);
    if g[k].modulus() <= 1e-12 * scale || scale == 0.0 {
        return Err(Error::ChartDegenerate { view: Some(view) });
    }
    let p = g[k].clone();
    Ok(g.iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, x)| x.clone() / p.clone())
        .collect())
}

/// Weighted least-squares objective for one set of observations.
#[derive(Clone, Debug)]
pub struct Objective {
    model: Model,
    cams: Vec<Mat<f64>>,
    chats: Vec<Mat<f64>>,
    obs: Vec<Vec<f64>>,
    obs_chart: Vec<usize>,
    sqrt_w: Vec<f64>,
    /// Parameter coordinate fixed to 1 besides `h0` (index into the full vector).
    fixed: usize,
}

impl Objective {
    /// Observations in the chart `γ0 = 1`, switching a view to its largest
    /// coordinate when `γ0` is small. Unit weights.
    pub fn new(arr: &Arrangement<f64>, views: &[ImageCurve<f64>], model: Model) -> Result<Self> {
        let charts = views
            .iter()
            .map(|v| {
                let c = v.coeffs();
                let m = c.iter().map(|x| x.abs()).fold(0.0, f64::max);
                if c[0].abs() >= 1e-3 * m {
                    0
                } else {
                    (0..c.len()).max_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs())).unwrap_or(0)
                }
            })
            .collect();
        Self::with_charts(arr, views, charts, model)
    }

    /// Observations strictly in the chart `γ0 = 1`.
    pub fn strict(arr: &Arrangement<f64>, views: &[ImageCurve<f64>], model: Model) -> Result<Self> {
        Self::with_charts(arr, views, vec![0; views.len()], model)
    }

    fn with_charts(
        arr: &Arrangement<f64>,
        views: &[ImageCurve<f64>],
        charts: Vec<usize>,
        model: Model,
    ) -> Result<Self> {
        if views.len() != arr.len() {
            return Err(Error::InvalidInput(format!(
                "{} views for {} cameras",
                views.len(),
                arr.len()
            )));
        }
        let d = model.image_degree();
        let obs = views
            .iter()
            .zip(&charts)
            .enumerate()
            .map(|(i, (v, &k))| {
                if v.degree() != d {
                    return Err(Error::InvalidDegree {
                        expected: d,
                        got: v.degree(),
                    });
                }
                chart(v.coeffs(), k, i)
            })
            .collect::<Result<Vec<_>>>()?;
        let n_res: usize = obs.iter().map(Vec::len).sum();
        let fixed = match model {
            Model::PlaneCurve { .. } => 4,
            Model::Twisted => 0,
        };
        Ok(Objective {
            model,
            cams: arr.cameras().iter().map(|c| c.matrix().clone()).collect(),
            chats: arr.cameras().iter().map(|c| c.chat().clone()).collect(),
            obs,
            obs_chart: charts,
            sqrt_w: vec![1.0; n_res],
            fixed,
        })
    }

    /// Positive weights, one per residual coordinate.
    pub fn with_weights(mut self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.sqrt_w.len() || weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "need {} positive weights",
                self.sqrt_w.len()
            )));
        }
        self.sqrt_w = weights.iter().map(|w| w.sqrt()).collect();
        Ok(self)
    }

    /// Fixes another parameter coordinate to 1 (an index into the full vector).
    pub fn with_fixed(mut self, fixed: usize) -> Result<Self> {
        let ok = match self.model {
            Model::PlaneCurve { .. } => (4..self.model.full_len()).contains(&fixed),
            Model::Twisted => fixed < 13,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("cannot fix coordinate {fixed}")));
        }
        self.fixed = fixed;
        Ok(self)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn fixed(&self) -> usize {
        self.fixed
    }

    pub fn n_views(&self) -> usize {
        self.cams.len()
    }

    pub fn n_params(&self) -> usize {
        match self.model {
            Model::PlaneCurve { .. } => self.model.full_len() - 2,
            Model::Twisted => 12,
        }
    }

    pub fn n_residuals(&self) -> usize {
        self.sqrt_w.len()
    }

    fn frozen(&self) -> Vec<usize> {
        match self.model {
            Model::PlaneCurve { .. } => vec![0, self.fixed],
            Model::Twisted => vec![self.fixed],
        }
    }

    /// Homogeneous parameters from chart parameters.
    pub fn full_params<T: Scalar>(&self, p: &[T]) -> Vec<T> {
        let frozen = self.frozen();
        let mut it = p.iter();
        (0..self.model.full_len())
            .map(|i| {
                if frozen.contains(&i) {
                    T::one()
                } else {
                    it.next().expect("chart parameter count").clone()
                }
            })
            .collect()
    }

    /// Chart parameters of a homogeneous parameter vector.
    pub fn chart_params(&self, full: &[f64]) -> Result<Vec<f64>> {
        if full.len() != self.model.full_len() {
            return Err(Error::InvalidInput("parameter length".into()));
        }
        let frozen = self.frozen();
        let mut scaled = full.to_vec();
        let pivots = match self.model {
            Model::PlaneCurve { .. } => vec![0, self.fixed],
            Model::Twisted => vec![self.fixed],
        };
        for (block, f) in self.model.blocks().into_iter().zip(pivots) {
            let p = full[f];
            if p.abs() <= 1e-14 * full[block.clone()].iter().fold(0.0f64, |m, x| m.max(x.abs())) {
                return Err(Error::ChartDegenerate { view: None });
            }
            for x in &mut scaled[block.clone()] {
                *x /= p;
            }
        }
        Ok(scaled
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !frozen.contains(i))
            .map(|(_, x)| x)
            .collect())
    }

    fn residual_t<T: Scalar>(&self, p: &[T]) -> Result<Vec<T>> {
        if p.len() != self.n_params() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                p.len()
            )));
        }
        let full = self.full_params(p);
        let imgs = images(self.model, &self.cams, &self.chats, &full)?;
        let mut out = Vec::with_capacity(self.n_residuals());
        for (i, g) in imgs.iter().enumerate() {
            let c = chart(g, self.obs_chart[i], i)?;
            out.extend(c.into_iter().zip(&self.obs[i]).map(|(x, u)| x - T::from_f64(*u)));
        }
        Ok(out
            .into_iter()
            .zip(&self.sqrt_w)
            .map(|(r, w)| r * T::from_f64(*w))
            .collect())
    }

    pub fn residual(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.residual_t(p)
    }

    /// Sum of squared weighted residuals.
    pub fn value(&self, p: &[f64]) -> Result<f64> {
        Ok(self.residual(p)?.iter().map(|r| r * r).sum())
    }

    /// Forward-mode derivative of the residual, one dual pass per parameter.
    pub fn jacobian(&self, p: &[f64]) -> Result<Mat<f64>> {
        let n = self.n_params();
        let cols = (0..n)
            .map(|j| {
                let seeded: Vec<Dual> = p
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if i == j { Dual::variable(x) } else { Dual::constant(x) })
                    .collect();
                Ok(self.residual_t(&seeded)?.iter().map(|d| d.eps).collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Mat::from_cols(&cols)
    }

    /// Projective distance between two chart parameter vectors, blockwise maximum.
    pub fn distance(&self, p: &[f64], q: &[f64]) -> f64 {
        let (a, b) = (self.full_params(p), self.full_params(q));
        self.model
            .blocks()
            .into_iter()
            .map(|r| proj_distance(&a[r.clone()], &b[r]))
            .fold(0.0, f64::max)
    }
}

/// `‖Jᵀ r‖₂` at `p`.
pub fn critical_residual(obj: &Objective, p: &[f64]) -> Result<f64> {
    let r = obj.residual(p)?;
    let j = obj.jacobian(p)?;
    Ok(gradient(&j, &r).norm())
}

fn to_na(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.nrows(), m.ncols(), m.data())
}

fn gradient(j: &Mat<f64>, r: &[f64]) -> DVector<f64> {
    to_na(j).transpose() * DVector::from_column_slice(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmOptions {
    /// Stop once `‖Jᵀr‖₂` falls to this value.
    pub gtol: f64,
    pub max_iter: usize,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            gtol: 1e-10,
            max_iter: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub params: Vec<f64>,
    pub objective: f64,
    pub grad_norm: f64,
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimized {
    pub point: CriticalPoint,
    pub converged: bool,
    pub iterations: usize,
    /// Objective after each accepted step.
    pub trace: Vec<f64>,
}

/// Levenberg–Marquardt with gain-ratio damping updates.
pub fn optimize(obj: &Objective, init: &[f64], opts: &LmOptions) -> Result<Optimized> {
    let mut x = init.to_vec();
    let mut r = obj.residual(&x)?;
    let mut f = r.iter().map(|v| v * v).sum::<f64>();
    let mut j = to_na(&obj.jacobian(&x)?);
    let mut g = j.transpose() * DVector::from_column_slice(&r);
    let mut a = j.transpose() * &j;
    let mut mu = 1e-3 * a.diagonal().max().max(f64::MIN_POSITIVE);
    let mut nu = 2.0;
    let mut trace = vec![f];
    let n = x.len();
    let mut iterations = 0;
    while iterations < opts.max_iter && g.norm() > opts.gtol {
        iterations += 1;
        let damped = &a + DMatrix::identity(n, n) * mu;
        let Some(step) = damped.cholesky().map(|c| c.solve(&(-&g))) else {
            mu *= nu;
            nu *= 2.0;
            continue;
        };
        let xn = DVector::from_column_slice(&x).norm();
        if step.norm() <= 1e-15 * (xn + 1e-15) {
            break;
        }
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        // Predicted decrease of the quadratic model, for Σr²: sᵀ(μs − g).
        let predicted = step.dot(&(step.scale(mu) - &g));
        let accepted = match obj.residual(&trial) {
            Ok(rt) => {
                let ft = rt.iter().map(|v| v * v).sum::<f64>();
                let rho = (f - ft) / predicted;
                if ft < f && rho > 0.0 {
                    x = trial;
                    r = rt;
                    f = ft;
                    mu *= (1.0 - (2.0 * rho - 1.0).powi(3)).max(1.0 / 3.0);
                    nu = 2.0;
                    true
                } else {
                    false
                }
            }
            Err(_) => false,
        };
        if accepted {
            j = to_na(&obj.jacobian(&x)?);
            g = j.transpose() * DVector::from_column_slice(&r);
            a = j.transpose() * &j;
            trace.push(f);
        } else {
            mu *= nu;
            nu *= 2.0;
            if !mu.is_finite() || mu > 1e300 {
                break;
            }
        }
    }
    if g.norm() <= opts.gtol {
        // Undamped polish: near a zero-residual optimum the damped steps stop
        // while the error along weak directions is still far above the residual.
        for _ in 0..3 {
            let Some(step) = a.clone().cholesky().map(|c| c.solve(&(-&g))) else {
                break;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let Ok(rt) = obj.residual(&trial) else { break };
            let ft = rt.iter().map(|v| v * v).sum::<f64>();
            let jt = to_na(&obj.jacobian(&trial)?);
            let gt = jt.transpose() * DVector::from_column_slice(&rt);
            if ft >= f || gt.norm() > opts.gtol {
                break;
            }
            (x, f, g, a) = (trial, ft, gt, jt.transpose() * &jt);
            trace.push(f);
        }
    }
    let grad_norm = g.norm();
    Ok(Optimized {
        converged: grad_norm <= opts.gtol,
        point: CriticalPoint {
            params: x,
            objective: f,
            grad_norm,
            hits: 1,
        },
        iterations,
        trace,
    })
}

/// Distinct critical points found from seeded random starts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultistartReport {
    pub points: Vec<CriticalPoint>,
    pub starts: usize,
    pub converged: usize,
    pub seed: u64,
}

/// Cluster radius in projective distance.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Generator for start `index`: the seed's ChaCha stream number `index`.
pub fn start_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs [`optimize`] from `n_starts` standard normal initializations.
///
/// Starts run in parallel; clustering visits them in index order and the
/// clusters are sorted by objective, then parameters, so the report depends
/// only on the seed.
pub fn multistart(obj: &Objective, n_starts: usize, seed: u64, opts: &LmOptions) -> MultistartReport {
    let results: Vec<Option<CriticalPoint>> = (0..n_starts as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = start_rng(seed, i);
            let init: Vec<f64> = (0..obj.n_params())
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            optimize(obj, &init, opts)
                .ok()
                .filter(|o| o.converged)
                .map(|o| o.point)
        })
        .collect();
    let converged = results.iter().flatten().count();
    let mut clusters: Vec<CriticalPoint> = Vec::new();
    for p in results.into_iter().flatten() {
        match clusters
            .iter_mut()
            .find(|c| obj.distance(&c.params, &p.params) <= CLUSTER_TOL)
        {
            Some(c) => c.hits += 1,
            None => clusters.push(p),
        }
    }
    clusters.sort_by(|a, b| {
        a.objective.total_cmp(&b.objective).then_with(|| {
            a.params
                .iter()
                .zip(&b.params)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    MultistartReport {
        points: clusters,
        starts: n_starts,
        converged,
        seed,
    }
}

/// Camera sampling for the distance-degree probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeCameras {
    /// Standard normal entries.
    Generic,
    /// `[I | s]` and `[I | t]` with standard normal `s`, `t`.
    Translated,
}

/// Two-camera conic instance with standard normal data in the charts `γ0 = 1`
/// and weights uniform in `[1/2, 2]`.
pub fn edd_instance(seed: u64, cameras: ProbeCameras) -> Result<Objective> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };
    let cams = (0..2)
        .map(|_| {
            let m = match cameras {
                ProbeCameras::Generic => Mat::from_fn(3, 4, |_, _| normal(&mut rng)),
                ProbeCameras::Translated => {
                    let s: Vec<f64> = (0..3).map(|_| normal(&mut rng)).collect();
                    Mat::from_fn(3, 4, |r, c| match c {
                        3 => s[r],
                        _ if r == c => 1.0,
                        _ => 0.0,
                    })
                }
            };
            crate::camera::Camera::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let arr = Arrangement::new(cams)?;
    let views = (0..2)
        .map(|_| {
            let mut g = vec![1.0];
            g.extend((0..5).map(|_| normal(&mut rng)));
            ImageCurve::new(g)
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = (0..10).map(|_| rng.random_range(0.5..2.0)).collect();
    Objective::strict(&arr, &views, Model::PlaneCurve { degree: 2 })?.with_weights(&weights)
}

/// Numerical rank of the image map's Jacobian at a parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimProbe {
    pub rank: usize,
    pub expected: usize,
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_(rank+1)`; infinite when nothing was discarded.
    pub gap: f64,
}

/// Rank of the Jacobian of `params ↦ (γ_i / γ_i0)_i` over the full homogeneous
/// parameter vector, against the dimension of the multiview variety.
pub fn dim_probe(arr: &Arrangement<f64>, model: Model, full: &[f64]) -> Result<DimProbe> {
    if full.len() != model.full_len() {
        return Err(Error::InvalidInput("parameter length".into()));
    }
    let cams: Vec<_> = arr.cameras().iter().map(|c| c.matrix().clone()).collect();
    let chats: Vec<_> = arr.cameras().iter().map(|c| c.chat().clone()).collect();
    let cols = (0..full.len())
        .map(|j| {
            let seeded: Vec<Dual> = full
                .iter()
                .enumerate()
                .map(|(i, &x)| if i == j { Dual::variable(x) } else { Dual::constant(x) })
                .collect();
            let imgs = images(model, &cams, &chats, &seeded)?;
            let mut col = Vec::new();
            for (v, g) in imgs.iter().enumerate() {
                col.extend(chart(g, 0, v)?.iter().map(|d| d.eps));
            }
            Ok(col)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let jac = Mat::from_cols(&cols)?;
    let sv = jac.singular_values();
    let rank = jac.numerical_rank(crate::numeric::RANK_THRESHOLD);
    let gap = match (rank.checked_sub(1).map(|i| sv[i]), sv.get(rank)) {
        (Some(a), Some(&b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    };
    Ok(DimProbe {
        rank,
        expected: model.expected_dimension(),
        singular_values: sv,
        gap,
    })
}
