//! Adaptive Gauss–Kronrod integration plus the fixed rules used elsewhere
//! (periodic trapezoid, Gauss–Legendre).

use crate::error::{NanbuError, Result};
use std::collections::BinaryHeap;

/// Kronrod abscissae of the 21-point rule, descending, last one is the centre.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208850815164,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Weights of the embedded 10-point Gauss rule (nodes XGK[1], XGK[3], ...).
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol { abs: 1e-10, rel: 1e-8, max_intervals: 2000 }
    }
}

impl QuadTol {
    pub fn new(abs: f64, rel: f64) -> Self {
        QuadTol { abs, rel, ..Default::default() }
    }

    fn accepts(&self, value: f64, err: f64) -> bool {
        err <= self.abs.max(self.rel * value.abs())
    }
}

/// Integral value and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad { value: self.value + o.value, error: self.error + o.error }
    }
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[10];
    let mut rg = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    // The 10-point Gauss rule has no centre node.
    let k = rk * h;
    let g = rg * h;
    (k, (k - g).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive 21-point Gauss–Kronrod on [a, b]. Always bisects the
/// interval with the largest error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: QuadTol) -> Result<Quad> {
    integrate_breaks(&mut f, &[a, b], tol)
}

/// As [`integrate`] but with interior breakpoints where the integrand has kinks.
/// `points` must be sorted; degenerate sub-intervals are skipped.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(f: &mut F, points: &[f64], tol: QuadTol) -> Result<Quad> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (v, e) = gk21(f, a, b);
        total += v;
        total_err += e;
        heap.push(Piece { a, b, value: v, error: e });
    }
    while !tol.accepts(total, total_err) {
        if heap.len() >= tol.max_intervals {
            return Err(NanbuError::Numerical {
                msg: format!("quadrature did not converge, error estimate {total_err:e}"),
                estimate: total,
            });
        }
        let p = heap.pop().expect("heap holds at least one piece");
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            return Err(NanbuError::Numerical {
                msg: "quadrature interval underflow".into(),
                estimate: total,
            });
        }
        let (v1, e1) = gk21(f, p.a, m);
        let (v2, e2) = gk21(f, m, p.b);
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    if !total.is_finite() {
        return Err(NanbuError::Numerical { msg: "non-finite integral".into(), estimate: total });
    }
    // Re-sum to shed the drift of the running updates.
    let mut value = 0.0;
    let mut error = 0.0;
    for p in heap.iter() {
        value += p.value;
        error += p.error;
    }
    Ok(Quad { value, error })
}

/// Integral over [a, ∞) through z = a + scale·(1/t − 1), t ∈ (0, 1].
/// The Kronrod rule never evaluates the endpoint t = 0.
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, scale: f64, tol: QuadTol) -> Result<Quad> {
    let mut g = |t: f64| {
        let z = a + scale * (1.0 / t - 1.0);
        let v = f(z);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (t * t)
        }
    };
    integrate_breaks(&mut g, &[0.0, 1.0], tol)
}

/// Trapezoid rule over one period with n uniform nodes starting at 0.
/// Exact for trigonometric polynomials of degree < n.
pub fn periodic_nodes(n: usize) -> Vec<f64> {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(|k| k as f64 * h).collect()
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
