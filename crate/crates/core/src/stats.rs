//! Summaries used by the scans and the acceptance checks.

use crate::error::{NanbuError, Result};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, DiscreteCDF, Poisson, StudentsT};

/// Sum with a fixed binary reduction tree, so the result does not depend on
/// how the inputs were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_by<T, F: Fn(&T) -> f64>(xs: &[T], f: F) -> f64 {
    fn go<T, F: Fn(&T) -> f64>(xs: &[T], f: &F) -> f64 {
        if xs.len() <= 8 {
            return xs.iter().map(f).sum();
        }
        let mid = xs.len() / 2;
        go(&xs[..mid], f) + go(&xs[mid..], f)
    }
    go(xs, &f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    /// Standard error of the mean (sample sd / √n). Zero for n = 1.
    pub se: f64,
    pub n: usize,
}

pub fn mean_se(xs: &[f64]) -> MeanSe {
    let n = xs.len();
    if n == 0 {
        return MeanSe { mean: f64::NAN, se: f64::NAN, n };
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return MeanSe { mean, se: 0.0, n };
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    MeanSe { mean, se: (var / n as f64).sqrt(), n }
}

/// Mean and standard error of the paired differences a_i − b_i.
pub fn paired_diff(a: &[f64], b: &[f64]) -> MeanSe {
    assert_eq!(a.len(), b.len());
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    mean_se(&d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half width of the 95% confidence interval of the slope.
    pub ci95: f64,
}

impl SlopeFit {
    pub fn ci(&self) -> (f64, f64) {
        (self.slope - self.ci95, self.slope + self.ci95)
    }
}

/// Least squares fit of log y = intercept + slope · log x.
pub fn slope_fit(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(NanbuError::input("slope fit needs at least 3 points"));
    }
    if points.iter().any(|(x, y)| !(*x > 0.0 && *y > 0.0) || !x.is_finite() || !y.is_finite()) {
        return Err(NanbuError::input("slope fit needs positive finite values"));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(NanbuError::input("slope fit needs distinct x values"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let dof = n - 2.0;
    let se = (sse / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).expect("dof >= 1").inverse_cdf(0.975);
    Ok(SlopeFit { slope, intercept, ci95: t * se })
}

/// Ranks 1..n with ties sharing their average rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson chi-square test of integer counts against Poisson(lambda).
/// Bins are cut at Poisson quantiles so each expects about the same mass,
/// then merged until every bin expects at least 5 observations.
pub fn poisson_gof(counts: &[u64], lambda: f64) -> Result<GofResult> {
    let n = counts.len();
    if n < 10 {
        return Err(NanbuError::input("goodness of fit needs at least 10 counts"));
    }
    let law = Poisson::new(lambda).map_err(|e| NanbuError::input(e.to_string()))?;
    let nbins = (n / 10).clamp(2, 40);
    // upper edges (inclusive) of each bin
    let mut edges: Vec<u64> = (1..nbins).map(|b| law.inverse_cdf(b as f64 / nbins as f64)).collect();
    edges.dedup();
    let mut probs = Vec::new();
    let mut lo_cdf = 0.0;
    for &e in &edges {
        let c = law.cdf(e);
        probs.push(c - lo_cdf);
        lo_cdf = c;
    }
    probs.push(1.0 - lo_cdf);
    let mut edges_merged = Vec::new();
    let mut probs_merged: Vec<f64> = Vec::new();
    let mut acc = 0.0;
    for (b, p) in probs.iter().enumerate() {
        acc += p;
        if acc * n as f64 >= 5.0 && b < edges.len() {
            probs_merged.push(acc);
            edges_merged.push(edges[b]);
            acc = 0.0;
        }
    }
    if acc > 0.0 {
        match probs_merged.last_mut() {
            Some(last) if acc * (n as f64) < 5.0 => {
                *last += acc;
                edges_merged.pop();
            }
            _ => probs_merged.push(acc),
        }
    }
    let mut observed = vec![0u64; probs_merged.len()];
    for &c in counts {
        let b = edges_merged.partition_point(|&e| e < c);
        observed[b] += 1;
    }
    let statistic: f64 = observed
        .iter()
        .zip(&probs_merged)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = probs_merged.len().saturating_sub(1).max(1);
    let p_value = 1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic);
    Ok(GofResult { statistic, dof, p_value, bins: probs_merged.len() })
}
