//! Blahut–Arimoto for a discrete memoryless channel given as `[x][y]` rows.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BaOutcome {
    /// Mutual information at the returned input, in bits.
    pub capacity: f64,
    /// Final gap between the standard upper bound `max_x D(W_x || q)` and `capacity`.
    pub gap: f64,
    pub input: Vec<f64>,
    pub iterations: usize,
    /// Mutual information after every iteration, starting from the uniform input.
    pub trace: Vec<f64>,
}

pub const DEFAULT_MAX_ITER: usize = 200_000;

/// Slack allowed when asserting that iterates never decrease the objective.
const MONOTONE_SLACK: f64 = 1e-12;

pub fn blahut_arimoto(rows: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<BaOutcome> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let nx = rows.len();
    if nx == 0 {
        return Err(Error::InvalidArgument("channel has no inputs".into()));
    }
    let ny = rows[0].len();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut q = vec![0.0; ny];
    let mut div = vec![0.0; nx];
    let mut trace = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for it in 0..=max_iter {
        output_dist(rows, &p, &mut q);
        divergences(rows, &q, &mut div);
        let info: f64 = p.iter().zip(&div).map(|(a, d)| a * d).sum();
        assert!(
            info >= last - MONOTONE_SLACK,
            "Blahut-Arimoto objective decreased: {last} -> {info}"
        );
        last = info;
        trace.push(info);
        let upper = div.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let gap = (upper - info).max(0.0);
        if gap <= tol {
            return Ok(BaOutcome {
                capacity: info.max(0.0),
                gap,
                input: p,
                iterations: it,
                trace,
            });
        }
        if it == max_iter {
            return Err(Error::NonConvergence {
                iterations: max_iter,
                residual: gap,
            });
        }
        let mut total = 0.0;
        for (pi, d) in p.iter_mut().zip(&div) {
            *pi *= d.exp2();
            total += *pi;
        }
        p.iter_mut().for_each(|pi| *pi /= total);
    }
    unreachable!()
}

fn output_dist(rows: &[Vec<f64>], p: &[f64], q: &mut [f64]) {
    q.iter_mut().for_each(|v| *v = 0.0);
    for (row, &px) in rows.iter().zip(p) {
        for (qy, w) in q.iter_mut().zip(row) {
            *qy += px * w;
        }
    }
}

/// `D(W_x || q)` in bits, with `0 log 0 = 0`.
fn divergences(rows: &[Vec<f64>], q: &[f64], out: &mut [f64]) {
    for (d, row) in out.iter_mut().zip(rows) {
        *d = row
            .iter()
            .zip(q)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, qy)| w * (w / qy).log2())
            .sum();
    }
}

/// `I(X;Y)` in bits for input `p` through `rows`.
pub fn mutual_information(p: &[f64], rows: &[Vec<f64>]) -> f64 {
    let ny = rows.first().map_or(0, Vec::len);
    let mut q = vec![0.0; ny];
    output_dist(rows, p, &mut q);
    let mut div = vec![0.0; rows.len()];
    divergences(rows, &q, &mut div);
    p.iter().zip(&div).filter(|(a, _)| **a > 0.0).map(|(a, d)| a * d).sum::<f64>().max(0.0)
}

pub fn binary_entropy(p: f64) -> f64 {
    let h = |v: f64| if v > 0.0 { -v * v.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}
