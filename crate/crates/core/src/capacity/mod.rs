//! Capacity formulas for a channel with state: conditional mutual information,
//! the per-state maximization (NS-assisted, causal or not), Shannon strategies
//! (classical causal) and an approximate Gelfand–Pinsker value (classical
//! non-causal).

pub mod blahut;
pub mod gelfand_pinsker;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelWithState;
use crate::error::{check_cap, Error, Result};
use crate::seq;

pub use blahut::{binary_entropy, blahut_arimoto, mutual_information, BaOutcome, DEFAULT_MAX_ITER};
pub use gelfand_pinsker::{gp_noncausal_capacity, gp_objective, GpOutcome};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const STRATEGY_CAP: u128 = 4096;
pub const DEFAULT_GP_RESTARTS: usize = 16;
pub const DEFAULT_SEED: u64 = 2024;

const ROW_TOL: f64 = 1e-12;

/// `P_{X|S}` as floating rows indexed `[s][x]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputStrategy {
    p_x_given_s: Vec<Vec<f64>>,
}

impl InputStrategy {
    pub fn new(p_x_given_s: Vec<Vec<f64>>) -> Result<Self> {
        for (s, row) in p_x_given_s.iter().enumerate() {
            if row.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::Validation(format!("strategy row s={s} has a negative entry")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_TOL {
                return Err(Error::Validation(format!("strategy row s={s} sums to {total}")));
            }
        }
        Ok(InputStrategy { p_x_given_s })
    }

    pub fn uniform(x_size: usize, s_size: usize) -> Self {
        InputStrategy {
            p_x_given_s: vec![vec![1.0 / x_size as f64; x_size]; s_size],
        }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p_x_given_s
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.p_x_given_s[s]
    }

    fn check_shape(&self, ch: &ChannelWithState) -> Result<()> {
        if self.p_x_given_s.len() != ch.s_size()
            || self.p_x_given_s.iter().any(|r| r.len() != ch.x_size())
        {
            return Err(Error::InvalidArgument(format!(
                "strategy shape does not match |S| = {}, |X| = {}",
                ch.s_size(),
                ch.x_size()
            )));
        }
        Ok(())
    }
}

/// `I(X;Y|S)` in bits under `P_S P_{X|S} N`.
pub fn conditional_mi(ch: &ChannelWithState, strategy: &InputStrategy) -> Result<f64> {
    strategy.check_shape(ch)?;
    let ps = ch.state_dist_f64();
    Ok((0..ch.s_size())
        .filter(|&s| ps[s] > 0.0)
        .map(|s| ps[s] * mutual_information(strategy.row(s), &ch.state_matrix_f64(s)))
        .sum())
}

/// `max_{P_{X|S}} I(X;Y|S)`, maximizing each state separately.
pub fn ns_capacity(ch: &ChannelWithState, tol: f64) -> Result<(f64, InputStrategy)> {
    let ps = ch.state_dist_f64();
    let per_state = (0..ch.s_size())
        .into_par_iter()
        .map(|s| blahut_arimoto(&ch.state_matrix_f64(s), tol, DEFAULT_MAX_ITER))
        .collect::<Result<Vec<_>>>()?;
    let value = per_state.iter().zip(&ps).map(|(o, p)| p * o.capacity).sum();
    let rows = per_state.into_iter().map(|o| o.input).collect();
    Ok((value, InputStrategy { p_x_given_s: rows }))
}

/// The channel from Shannon strategies `u: S -> X` to `Y`, as `[u][y]` rows.
/// Strategy `u` maps state `s` to digit `s` of `u` in base `|X|`.
pub fn strategy_channel(ch: &ChannelWithState) -> Result<Vec<Vec<f64>>> {
    let (nx, ns, ny) = (ch.x_size(), ch.s_size(), ch.y_size());
    let count = (nx as u128).checked_pow(ns as u32).unwrap_or(u128::MAX);
    check_cap("strategy alphabet |X|^|S|", count, STRATEGY_CAP)?;
    let ps = ch.state_dist_f64();
    let mats: Vec<_> = (0..ns).map(|s| ch.state_matrix_f64(s)).collect();
    Ok(seq::all(nx, ns)
        .map(|u| {
            let mut row = vec![0.0; ny];
            for s in 0..ns {
                for (y, w) in mats[s][u[s]].iter().enumerate() {
                    row[y] += ps[s] * w;
                }
            }
            row
        })
        .collect())
}

pub fn shannon_causal_capacity(ch: &ChannelWithState, tol: f64) -> Result<f64> {
    Ok(blahut_arimoto(&strategy_channel(ch)?, tol, DEFAULT_MAX_ITER)?.capacity)
}

#[derive(Debug, Clone, Copy)]
pub struct CapacityOptions {
    pub tol: f64,
    pub gp_restarts: usize,
    pub seed: u64,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions {
            tol: DEFAULT_TOL,
            gp_restarts: DEFAULT_GP_RESTARTS,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityFlags {
    pub classical_causal_approximate: bool,
    pub classical_noncausal_approximate: bool,
    pub ns_causal_approximate: bool,
    pub ns_noncausal_approximate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    pub c_classical_causal: f64,
    pub c_classical_noncausal: f64,
    pub c_ns_causal: f64,
    pub c_ns_noncausal: f64,
    pub flags: CapacityFlags,
    pub ns_strategy: InputStrategy,
}

pub fn capacity_table(ch: &ChannelWithState, opts: &CapacityOptions) -> Result<CapacityReport> {
    let (ns, strategy) = ns_capacity(ch, opts.tol)?;
    let causal = shannon_causal_capacity(ch, opts.tol)?;
    let gp = gp_noncausal_capacity(ch, opts.gp_restarts, opts.tol, opts.seed);
    Ok(CapacityReport {
        c_classical_causal: causal,
        c_classical_noncausal: gp.value,
        c_ns_causal: ns,
        c_ns_noncausal: ns,
        flags: CapacityFlags {
            classical_causal_approximate: false,
            classical_noncausal_approximate: true,
            ns_causal_approximate: false,
            ns_noncausal_approximate: false,
        },
        ns_strategy: strategy,
    })
}
