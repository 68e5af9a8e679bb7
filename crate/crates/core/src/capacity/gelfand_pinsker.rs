//! Approximate maximization of `I(U;Y) - I(U;S)` over `P_{U|S}` and a
//! deterministic input map `x(u, s)`.
//!
//! For a fixed map the objective is maximized by alternating between the
//! posterior `q(u|y)` and `P_{U|S}`; the map itself is improved by
//! coordinate ascent over `(u, s)` cells. The map search is nonconvex, so the
//! result is the best value over random restarts and is only a lower bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelWithState;

#[derive(Debug, Clone)]
pub struct GpOutcome {
    pub value: f64,
    /// `[s][u]`.
    pub p_u_given_s: Vec<Vec<f64>>,
    /// `[u][s]`.
    pub x_map: Vec<Vec<usize>>,
    pub restart: usize,
}

const INNER_MAX_ITER: usize = 20_000;
const OUTER_MAX_ROUNDS: usize = 50;

struct Problem {
    ps: Vec<f64>,
    /// `[s][x][y]`
    kernel: Vec<Vec<Vec<f64>>>,
    nx: usize,
    ny: usize,
    nu: usize,
}

impl Problem {
    fn new(ch: &ChannelWithState) -> Self {
        Problem {
            ps: ch.state_dist_f64(),
            kernel: (0..ch.s_size()).map(|s| ch.state_matrix_f64(s)).collect(),
            nx: ch.x_size(),
            ny: ch.y_size(),
            nu: ch.x_size() * ch.s_size(),
        }
    }

    fn ns(&self) -> usize {
        self.ps.len()
    }

    /// `I(U;Y) - I(U;S)` in bits.
    fn objective(&self, p: &[Vec<f64>], x_map: &[Vec<usize>]) -> f64 {
        let (ns, nu, ny) = (self.ns(), self.nu, self.ny);
        let mut pu = vec![0.0; nu];
        let mut puy = vec![vec![0.0; ny]; nu];
        let mut py = vec![0.0; ny];
        for s in 0..ns {
            for u in 0..nu {
                let psu = self.ps[s] * p[s][u];
                if psu == 0.0 {
                    continue;
                }
                pu[u] += psu;
                for (y, w) in self.kernel[s][x_map[u][s]].iter().enumerate() {
                    puy[u][y] += psu * w;
                    py[y] += psu * w;
                }
            }
        }
        let mut i_uy = 0.0;
        for u in 0..nu {
            for y in 0..ny {
                let v = puy[u][y];
                if v > 0.0 {
                    i_uy += v * (v / (pu[u] * py[y])).log2();
                }
            }
        }
        let mut i_us = 0.0;
        for s in 0..ns {
            for u in 0..nu {
                let v = p[s][u];
                if v > 0.0 && self.ps[s] > 0.0 {
                    i_us += self.ps[s] * v * (v / pu[u]).log2();
                }
            }
        }
        i_uy - i_us
    }

    /// Alternating maximization of `P_{U|S}` for a fixed map.
    fn optimize_conditional(&self, p: &mut [Vec<f64>], x_map: &[Vec<usize>], tol: f64) -> f64 {
        let (ns, nu, ny) = (self.ns(), self.nu, self.ny);
        let mut value = self.objective(p, x_map);
        for _ in 0..INNER_MAX_ITER {
            // posterior q(u|y)
            let mut puy = vec![vec![0.0; ny]; nu];
            let mut py = vec![0.0; ny];
            for s in 0..ns {
                for u in 0..nu {
                    let psu = self.ps[s] * p[s][u];
                    for (y, w) in self.kernel[s][x_map[u][s]].iter().enumerate() {
                        puy[u][y] += psu * w;
                        py[y] += psu * w;
                    }
                }
            }
            for s in 0..ns {
                let mut total = 0.0;
                for u in 0..nu {
                    let mut expo = 0.0;
                    let mut dead = false;
                    for (y, w) in self.kernel[s][x_map[u][s]].iter().enumerate() {
                        if *w > 0.0 {
                            if puy[u][y] <= 0.0 {
                                dead = true;
                                break;
                            }
                            expo += w * (puy[u][y] / py[y]).log2();
                        }
                    }
                    p[s][u] = if dead { 0.0 } else { expo.exp2() };
                    total += p[s][u];
                }
                if total > 0.0 {
                    p[s].iter_mut().for_each(|v| *v /= total);
                }
            }
            let next = self.objective(p, x_map);
            let gain = next - value;
            value = value.max(next);
            if gain.abs() <= tol * 1e-3 {
                break;
            }
        }
        value
    }

    fn run(&self, restart: usize, seed: u64, tol: f64) -> GpOutcome {
        let (ns, nu, nx) = (self.ns(), self.nu, self.nx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let strategies = crate::seq::count(nx, ns).unwrap_or(usize::MAX);
        let mut x_map: Vec<Vec<usize>> = (0..nu)
            .map(|u| {
                (0..ns)
                    .map(|s| {
                        if restart == 0 && u < strategies {
                            // u enumerates the maps s -> x, first state most significant
                            crate::seq::decode(u, nx, ns)[s]
                        } else {
                            rng.random_range(0..nx)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut p: Vec<Vec<f64>> = (0..ns)
            .map(|_| {
                if restart == 0 {
                    vec![1.0 / nu as f64; nu]
                } else {
                    let w: Vec<f64> = (0..nu).map(|_| rng.random_range(0.05..1.0)).collect();
                    let t: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / t).collect()
                }
            })
            .collect();
        let mut value = self.optimize_conditional(&mut p, &x_map, tol);
        for _ in 0..OUTER_MAX_ROUNDS {
            let mut changed = false;
            for u in 0..nu {
                for s in 0..ns {
                    let current = x_map[u][s];
                    for x in 0..nx {
                        if x == current {
                            continue;
                        }
                        x_map[u][s] = x;
                        let v = self.objective(&p, &x_map);
                        if v > value + 1e-12 {
                            value = v;
                            changed = true;
                            break;
                        }
                        x_map[u][s] = current;
                    }
                }
            }
            if !changed {
                break;
            }
            // reseed dead conditionals so the new map can be explored
            for row in p.iter_mut() {
                for v in row.iter_mut() {
                    *v = v.max(1e-6);
                }
                let t: f64 = row.iter().sum();
                row.iter_mut().for_each(|v| *v /= t);
            }
            value = self.optimize_conditional(&mut p, &x_map, tol);
        }
        GpOutcome {
            value,
            p_u_given_s: p,
            x_map,
            restart,
        }
    }
}

/// Best value of `max I(U;Y) - I(U;S)` found over `restarts` starts with
/// `|U| = |X| |S|`. Restart 0 starts from the map enumerating all state
/// strategies, so the result is never below the causal (Shannon strategy)
/// value by more than the inner tolerance when `|X|^|S| <= |U|`.
pub fn gp_noncausal_capacity(ch: &ChannelWithState, restarts: usize, tol: f64, seed: u64) -> GpOutcome {
    let problem = Problem::new(ch);
    let restarts = restarts.max(1);
    (0..restarts)
        .into_par_iter()
        .map(|r| problem.run(r, seed, tol))
        .reduce_with(|a, b| {
            if b.value > a.value || (b.value == a.value && b.restart < a.restart) {
                b
            } else {
                a
            }
        })
        .expect("at least one restart")
}

/// `I(U;Y) - I(U;S)` for an explicit `P_{U|S}` (`[s][u]`) and map (`[u][s]`).
pub fn gp_objective(ch: &ChannelWithState, p_u_given_s: &[Vec<f64>], x_map: &[Vec<usize>]) -> f64 {
    let mut problem = Problem::new(ch);
    problem.nu = x_map.len();
    problem.objective(p_u_given_s, x_map)
}
