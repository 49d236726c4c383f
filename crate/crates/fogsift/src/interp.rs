//! Cloud-side interpolants: piecewise linear, global Lagrange polynomial
//! (power form, via a Vandermonde solve), C2 cubic spline with not-a-knot end
//! conditions, and the shape-preserving pchip.
//!
//! Spline and pchip precompute per-interval coefficient tables that are
//! immutable after construction, so one fitted interpolant can serve
//! concurrent query batches.

use crate::config::Interpolant;
use crate::error::{Error, Result};
use crate::types::{ReducedSeries, Sample, TimeSeries};

/// Maximum point count accepted by `lagrange_fit`; Vandermonde conditioning
/// explodes beyond this.
pub const MAX_LAGRANGE_POINTS: usize = 12;

/// Interpolation nodes: strictly increasing abscissae with their ordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Knots {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Knots {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::ShapeMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewKnots {
                needed: 2,
                got: xs.len(),
            });
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::DuplicateAbscissa { x: w[1] });
            }
        }
        Ok(Knots { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn check_range(&self, x: f64) -> Result<()> {
        let (lo, hi) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if x < lo || x > hi {
            return Err(Error::OutOfRangeQuery { x, lo, hi });
        }
        Ok(())
    }

    /// Index i of the interval [x_i, x_{i+1}] containing x; queries exactly
    /// on a knot land on the interval starting there (except the last knot).
    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        self.xs.partition_point(|&xi| xi <= x).clamp(1, n - 1) - 1
    }
}

/// Power-form polynomial coefficients, descending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    pub coeffs: Vec<f64>,
}

/// Piecewise linear interpolation through the knots; no extrapolation.
pub fn linear_interpolate(knots: &Knots, query_xs: &[f64]) -> Result<Vec<f64>> {
    query_xs
        .iter()
        .map(|&x| {
            knots.check_range(x)?;
            let i = knots.interval(x);
            let slope = (knots.ys[i + 1] - knots.ys[i]) / (knots.xs[i + 1] - knots.xs[i]);
            Ok(knots.ys[i] + slope * (x - knots.xs[i]))
        })
        .collect()
}

/// Fits the unique degree-(n-1) polynomial through the knots by solving the
/// Vandermonde system with partial pivoting. Capped at `MAX_LAGRANGE_POINTS`.
#[allow(clippy::needless_range_loop)] // row permutation keeps index loops clearer
pub fn lagrange_fit(knots: &Knots) -> Result<PolynomialCoefficients> {
    let n = knots.len();
    if n > MAX_LAGRANGE_POINTS {
        return Err(Error::DegreeTooHigh {
            n,
            max: MAX_LAGRANGE_POINTS,
        });
    }

    // rows [x^{n-1}, x^{n-2}, ..., x, 1]
    let mut a = vec![vec![0.0f64; n]; n];
    let mut rhs = knots.ys.clone();
    for (i, row) in a.iter_mut().enumerate() {
        let x = knots.xs[i];
        let mut p = 1.0;
        for j in (0..n).rev() {
            row[j] = p;
            p *= x;
        }
    }
    let row_norms: Vec<f64> = a
        .iter()
        .map(|row| row.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .collect();

    // Gaussian elimination with partial pivoting
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| {
                a[perm[p]][col]
                    .abs()
                    .partial_cmp(&a[perm[q]][col].abs())
                    .unwrap()
            })
            .unwrap();
        perm.swap(col, pivot_row);
        let pr = perm[col];
        let pivot = a[pr][col];
        if pivot.abs() < 1e-13 * row_norms[pr] {
            return Err(Error::IllConditioned);
        }
        for r in (col + 1)..n {
            let rr = perm[r];
            let factor = a[rr][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[rr][c] -= factor * a[pr][c];
            }
            rhs[rr] -= factor * rhs[pr];
        }
    }

    let mut coeffs = vec![0.0f64; n];
    for col in (0..n).rev() {
        let pr = perm[col];
        let mut acc = rhs[pr];
        for c in (col + 1)..n {
            acc -= a[pr][c] * coeffs[c];
        }
        coeffs[col] = acc / a[pr][col];
    }

    Ok(PolynomialCoefficients { coeffs })
}

/// Horner evaluation of a power-form polynomial.
pub fn polynomial_eval(poly: &PolynomialCoefficients, x: f64) -> Result<f64> {
    let mut it = poly.coeffs.iter();
    let first = it.next().ok_or(Error::EmptyCoefficients)?;
    Ok(it.fold(*first, |acc, c| acc * x + c))
}

/// Sign with sign(0) = 0, unlike `f64::signum`.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// C2 cubic spline with not-a-knot end conditions.
///
/// With two knots this degenerates to the straight line, with three to the
/// parabola through the points.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Knots,
    /// Second derivative at each knot.
    sigma: Vec<f64>,
}

impl CubicSpline {
    pub fn fit(knots: Knots) -> Self {
        let n = knots.len();
        let xs = knots.xs();
        let ys = knots.ys();

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let slopes: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let sigma = match n {
            2 => vec![0.0, 0.0],
            3 => {
                let s = 2.0 * (slopes[1] - slopes[0]) / (xs[2] - xs[0]);
                vec![s, s, s]
            }
            _ => {
                // Solve for interior second derivatives with the two
                // not-a-knot corner terms eliminated, leaving a strictly
                // diagonally dominant tridiagonal system.
                let m = n - 2;
                let mut sub = vec![0.0f64; m];
                let mut diag = vec![0.0f64; m];
                let mut sup = vec![0.0f64; m];
                let mut rhs = vec![0.0f64; m];

                diag[0] = (h[0] + h[1]) * (h[0] + 2.0 * h[1]) / h[1];
                sup[0] = (h[1] * h[1] - h[0] * h[0]) / h[1];
                rhs[0] = 6.0 * (slopes[1] - slopes[0]);

                for k in 1..m - 1 {
                    let i = k + 1; // sigma index
                    sub[k] = h[i - 1];
                    diag[k] = 2.0 * (h[i - 1] + h[i]);
                    sup[k] = h[i];
                    rhs[k] = 6.0 * (slopes[i] - slopes[i - 1]);
                }

                let (ha, hb) = (h[n - 3], h[n - 2]);
                sub[m - 1] = (ha * ha - hb * hb) / ha;
                diag[m - 1] = (ha + hb) * (2.0 * ha + hb) / ha;
                rhs[m - 1] = 6.0 * (slopes[n - 2] - slopes[n - 3]);

                let interior = thomas_solve(&sub, &diag, &sup, &rhs);

                let mut sigma = vec![0.0f64; n];
                sigma[1..n - 1].copy_from_slice(&interior);
                sigma[0] = ((h[0] + h[1]) * sigma[1] - h[0] * sigma[2]) / h[1];
                sigma[n - 1] = ((ha + hb) * sigma[n - 2] - hb * sigma[n - 3]) / ha;
                sigma
            }
        };

        CubicSpline { knots, sigma }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.knots.check_range(x)?;
        let xs = self.knots.xs();
        let ys = self.knots.ys();
        let n = xs.len();
        if x == xs[n - 1] {
            return Ok(ys[n - 1]);
        }
        let i = self.knots.interval(x);
        let h = xs[i + 1] - xs[i];
        let dx = x - xs[i];
        let slope = (ys[i + 1] - ys[i]) / h;
        let b = slope - h * (2.0 * self.sigma[i] + self.sigma[i + 1]) / 6.0;
        let c = self.sigma[i] / 2.0;
        let d = (self.sigma[i + 1] - self.sigma[i]) / (6.0 * h);
        Ok(ys[i] + dx * (b + dx * (c + dx * d)))
    }
}

/// Thomas algorithm for a tridiagonal system (diagonally dominant input).
fn thomas_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0f64; n];
    let mut d = vec![0.0f64; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0f64; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Shape-preserving piecewise cubic Hermite interpolant with Fritsch-Carlson
/// slopes: zero slope at local extrema, weighted harmonic means inside
/// monotone runs, clamped three-point formulas at the ends. Never overshoots
/// the data; intervals with equal endpoint values stay exactly constant.
#[derive(Debug, Clone)]
pub struct Pchip {
    knots: Knots,
    /// First derivative at each knot.
    d: Vec<f64>,
}

impl Pchip {
    pub fn fit(knots: Knots) -> Self {
        let n = knots.len();
        let xs = knots.xs();
        let ys = knots.ys();

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut d = vec![0.0f64; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
            return Pchip { knots, d };
        }

        for k in 1..n - 1 {
            let (s1, s2) = (delta[k - 1], delta[k]);
            if s1 == 0.0 || s2 == 0.0 || sign(s1) != sign(s2) {
                d[k] = 0.0;
            } else {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / s1 + w2 / s2);
            }
        }

        d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);

        Pchip { knots, d }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.knots.check_range(x)?;
        let xs = self.knots.xs();
        let ys = self.knots.ys();
        let n = xs.len();
        if x == xs[n - 1] {
            return Ok(ys[n - 1]);
        }
        let i = self.knots.interval(x);
        let h = xs[i + 1] - xs[i];
        let dx = x - xs[i];
        let slope = (ys[i + 1] - ys[i]) / h;
        // local power form: exact at the left knot and exactly constant on
        // plateaus (all higher coefficients vanish there)
        let c2 = (3.0 * slope - 2.0 * self.d[i] - self.d[i + 1]) / h;
        let c3 = (self.d[i] + self.d[i + 1] - 2.0 * slope) / (h * h);
        Ok(ys[i] + dx * (self.d[i] + dx * (c2 + dx * c3)))
    }
}

/// Non-centered three-point endpoint slope, shape-clamped (Fritsch-Carlson).
fn edge_slope(h_edge: f64, h_next: f64, del_edge: f64, del_next: f64) -> f64 {
    let mut d = ((2.0 * h_edge + h_next) * del_edge - h_edge * del_next) / (h_edge + h_next);
    if sign(d) != sign(del_edge) {
        d = 0.0;
    } else if sign(del_edge) != sign(del_next) && d.abs() > 3.0 * del_edge.abs() {
        d = 3.0 * del_edge;
    }
    d
}

/// Not-a-knot cubic spline values at the queries.
pub fn cubic_spline(knots: &Knots, query_xs: &[f64]) -> Result<Vec<f64>> {
    let spline = CubicSpline::fit(knots.clone());
    query_xs.iter().map(|&x| spline.eval(x)).collect()
}

/// Shape-preserving pchip values at the queries.
pub fn pchip(knots: &Knots, query_xs: &[f64]) -> Result<Vec<f64>> {
    let p = Pchip::fit(knots.clone());
    query_xs.iter().map(|&x| p.eval(x)).collect()
}

/// Evaluates the chosen interpolant over the queries.
pub fn interpolate(knots: &Knots, query_xs: &[f64], method: Interpolant) -> Result<Vec<f64>> {
    match method {
        Interpolant::Linear => linear_interpolate(knots, query_xs),
        Interpolant::Spline => {
            let spline = CubicSpline::fit(knots.clone());
            query_xs.iter().map(|&x| spline.eval(x)).collect()
        }
        Interpolant::Pchip => {
            let pchip = Pchip::fit(knots.clone());
            query_xs.iter().map(|&x| pchip.eval(x)).collect()
        }
    }
}

/// Rebuilds a dense series from a reduced one on a uniform grid from the
/// first to the last point (the last lands on the grid only when the span is
/// a multiple of the step). Points sharing a timestamp are collapsed to
/// their mean before knot construction.
pub fn reconstruct(
    reduced: &ReducedSeries,
    grid_step_seconds: i64,
    method: Interpolant,
) -> Result<TimeSeries> {
    if reduced.points.len() < 2 {
        return Err(Error::TooFewKnots {
            needed: 2,
            got: reduced.points.len(),
        });
    }
    assert!(grid_step_seconds > 0, "grid step must be positive");

    let t0 = reduced.points[0].timestamp;
    let mut xs: Vec<f64> = Vec::with_capacity(reduced.points.len());
    let mut ys: Vec<f64> = Vec::with_capacity(reduced.points.len());
    let mut i = 0;
    while i < reduced.points.len() {
        let ts = reduced.points[i].timestamp;
        let mut sum = 0.0;
        let mut count = 0usize;
        while i < reduced.points.len() && reduced.points[i].timestamp == ts {
            sum += reduced.points[i].value;
            count += 1;
            i += 1;
        }
        xs.push((ts - t0) as f64);
        ys.push(sum / count as f64);
    }
    let knots = Knots::new(xs, ys)?;

    let span = reduced.points.last().unwrap().timestamp - t0;
    let steps = span / grid_step_seconds;
    let offsets: Vec<i64> = (0..=steps).map(|k| k * grid_step_seconds).collect();
    let query_xs: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();

    let values = interpolate(&knots, &query_xs, method)?;
    let samples = offsets
        .iter()
        .zip(values)
        .map(|(&o, v)| Sample::new(t0 + o, v))
        .collect();
    Ok(TimeSeries::new(reduced.variable.clone(), "", samples))
}
