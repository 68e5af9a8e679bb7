//! Success probability of the authentication scheme: exact enumeration over
//! positive-probability branches, a flag decomposition, and Monte Carlo.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::BlockStateSource;
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::seq;
use crate::typemap::flag_predicate;

use super::AuthScheme;

/// Cap on leaves visited by the exact enumeration.
pub const EXACT_CAP: u128 = 1 << 26;

const CHUNK: u64 = 1 << 16;

fn check_source(scheme: &AuthScheme, source: &BlockStateSource) -> Result<()> {
    if source.n() != scheme.n() || source.s_size() != scheme.channel().s_size() {
        return Err(Error::InvalidArgument("state source does not match the scheme".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessDecomposition {
    pub success: Rational,
    pub lambda: Rational,
    /// `Pr(F = 1)`: every type mapping met its budgets.
    pub p_flag: Rational,
    /// `Pr(test passes | F = 1)`; zero when `Pr(F = 1) = 0`.
    pub p_pass_given_flag: Rational,
    /// `λ Pr(F = 1) Pr(test passes | F = 1)`.
    pub lower_bound: Rational,
}

struct Sums {
    success: Rational,
    flag: Rational,
    flag_and_pass: Rational,
}

fn enumerate(scheme: &AuthScheme, source: &BlockStateSource) -> Result<Sums> {
    check_source(scheme, source)?;
    let ch = scheme.channel();
    let n = scheme.n();
    let (nx, ny, ns) = (ch.x_size(), ch.y_size(), ch.s_size());
    let sn = seq::count(ns, n).ok_or_else(|| Error::SizeCap {
        what: "state sequences".into(),
        size: u128::MAX,
        cap: EXACT_CAP,
    })?;
    let support = (0..sn).filter(|&s| !source.prob_index(s).is_zero()).count() as u128;
    let leaves = support.saturating_mul(((nx * ny) as u128).saturating_pow(n as u32));
    check_cap("exact success enumeration (use Monte Carlo)", leaves, EXACT_CAP)?;
    let m1 = scheme.m_usize() == Some(1);

    let per_state: Vec<Sums> = (0..sn)
        .into_par_iter()
        .filter(|&s| !source.prob_index(s).is_zero())
        .map(|si| {
            let s = seq::decode(si, ns, n);
            let ps = source.prob_index(si);
            let s_tilde = scheme.map_state(&s).output;
            let state_flag = flag_predicate(&s, scheme.state_budgets());
            let mut acc = Sums {
                success: Rational::zero(),
                flag: Rational::zero(),
                flag_and_pass: Rational::zero(),
            };
            let mut x = vec![0usize; n];
            let mut y = vec![0usize; n];
            walk(scheme, &s, &s_tilde, state_flag, m1, 0, Rational::one(), &mut x, &mut y, &mut acc);
            Sums {
                success: ps * &acc.success,
                flag: ps * &acc.flag,
                flag_and_pass: ps * &acc.flag_and_pass,
            }
        })
        .collect();
    let mut total = Sums {
        success: Rational::zero(),
        flag: Rational::zero(),
        flag_and_pass: Rational::zero(),
    };
    for p in per_state {
        total.success += p.success;
        total.flag += p.flag;
        total.flag_and_pass += p.flag_and_pass;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    scheme: &AuthScheme,
    s: &[usize],
    s_tilde: &[usize],
    state_flag: bool,
    m1: bool,
    i: usize,
    weight: Rational,
    x: &mut Vec<usize>,
    y: &mut Vec<usize>,
    acc: &mut Sums,
) {
    let ch = scheme.channel();
    if i == s.len() {
        let pair = scheme.map_pair_unchecked(s, y);
        let pass = scheme.test_passes(x, &pair);
        let flag = state_flag
            && (0..ch.s_size()).all(|sigma| {
                let sub: Vec<usize> = (0..s.len()).filter(|&j| pair.s_tilde[j] == sigma).map(|j| y[j]).collect();
                flag_predicate(&sub, &scheme.y_budgets()[sigma])
            });
        debug_assert_eq!(flag, pair.s_flag && pair.y_flags.iter().all(|&f| f));
        if m1 {
            acc.success += &weight;
        } else if pass {
            acc.success += &weight * scheme.lambda();
        }
        if flag {
            acc.flag += &weight;
            if pass {
                acc.flag_and_pass += &weight;
            }
        }
        return;
    }
    for xi in 0..ch.x_size() {
        let z = scheme.zeta_mapped(xi, s_tilde[i]);
        if z.is_zero() {
            continue;
        }
        for yi in 0..ch.y_size() {
            let k = ch.prob(yi, xi, s[i]);
            if k.is_zero() {
                continue;
            }
            x[i] = xi;
            y[i] = yi;
            walk(scheme, s, s_tilde, state_flag, m1, i + 1, &weight * &z * k, x, y, acc);
        }
    }
}

/// Exact success probability with the state law taken from `source`.
pub fn success_exact(scheme: &AuthScheme, source: &BlockStateSource) -> Result<Rational> {
    Ok(enumerate(scheme, source)?.success)
}

/// Exact success probability together with the flag decomposition.
pub fn success_decomposition(scheme: &AuthScheme, source: &BlockStateSource) -> Result<SuccessDecomposition> {
    let sums = enumerate(scheme, source)?;
    let p_pass_given_flag = if sums.flag.is_zero() {
        Rational::zero()
    } else {
        &sums.flag_and_pass / &sums.flag
    };
    let lower_bound = if scheme.m_usize() == Some(1) {
        sums.flag.clone()
    } else {
        scheme.lambda() * &sums.flag_and_pass
    };
    Ok(SuccessDecomposition {
        success: sums.success,
        lambda: scheme.lambda().clone(),
        p_flag: sums.flag,
        p_pass_given_flag,
        lower_bound,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = samples as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

struct Sampler {
    state: WeightedIndex<f64>,
    inputs: Vec<WeightedIndex<f64>>,
    outputs: Vec<WeightedIndex<f64>>,
    lambda: f64,
}

/// Samples `(s, x, y)` forward through the state source, `ζ` and the channel,
/// then releases the true message with probability `T`.
pub fn success_monte_carlo(
    scheme: &AuthScheme,
    source: &BlockStateSource,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_source(scheme, source)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let ch = scheme.channel();
    let (nx, ns) = (ch.x_size(), ch.s_size());
    let weights = |v: Vec<f64>| WeightedIndex::new(v).map_err(|e| Error::InvalidArgument(format!("sampling weights: {e}")));
    let state = weights(source.dist().iter().map(Rational::to_f64).collect())?;
    let mut inputs = Vec::with_capacity(ns + 1);
    for t in 0..=ns {
        inputs.push(weights((0..nx).map(|x| scheme.zeta_mapped(x, t).to_f64()).collect())?);
    }
    let mut outputs = Vec::with_capacity(nx * ns);
    for x in 0..nx {
        for s in 0..ns {
            outputs.push(weights(ch.row(x, s).iter().map(Rational::to_f64).collect())?);
        }
    }
    let sampler = Sampler {
        state,
        inputs,
        outputs,
        lambda: if scheme.m_usize() == Some(1) {
            1.0
        } else {
            scheme.lambda().to_f64()
        },
    };
    let m1 = scheme.m_usize() == Some(1);
    let chunks = samples.div_ceil(CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut hits = 0u64;
            let mut s = vec![0usize; scheme.n()];
            let mut x = vec![0usize; scheme.n()];
            let mut y = vec![0usize; scheme.n()];
            for _ in 0..count {
                let si = sampler.state.sample(&mut rng);
                seq::decode_into(&mut si.clone(), ns, &mut s);
                let s_tilde = scheme.map_state(&s).output;
                for i in 0..scheme.n() {
                    x[i] = sampler.inputs[s_tilde[i]].sample(&mut rng);
                    y[i] = sampler.outputs[x[i] * ns + s[i]].sample(&mut rng);
                }
                let pass = m1 || scheme.test_passes(&x, &scheme.map_pair_unchecked(&s, &y));
                if pass && rng.random::<f64>() < sampler.lambda {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(successes, samples);
    Ok(MonteCarloEstimate {
        samples,
        successes,
        estimate: successes as f64 / samples as f64,
        ci_low,
        ci_high,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{builtin_z0z1, ChannelWithState};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn noiseless() -> ChannelWithState {
        ChannelWithState::state_independent(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], vec![r(1, 1)]).unwrap()
    }

    #[test]
    fn enumeration_matches_tensor() {
        let ch = noiseless();
        let scheme = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 4), 4).unwrap();
        let src = BlockStateSource::iid(&ch, 4).unwrap();
        let direct = success_exact(&scheme, &src).unwrap();
        let t = super::super::materialize_tensor(&scheme).unwrap();
        assert_eq!(direct, t.success_probability(&ch, &src).unwrap());
        // fails only when the first three outputs agree
        assert_eq!(direct, r(3, 4));
    }

    #[test]
    fn decomposition_bounds_success() {
        let ch = noiseless();
        let scheme = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 4), 8).unwrap();
        let src = BlockStateSource::iid(&ch, 8).unwrap();
        let d = success_decomposition(&scheme, &src).unwrap();
        assert!(d.success >= d.lower_bound);
        assert!(d.p_flag.is_positive());
        assert_eq!(d.lower_bound, &d.lambda * &d.p_flag * &d.p_pass_given_flag);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_covers_exact() {
        let ch = noiseless();
        let scheme = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 4), 4).unwrap();
        let src = BlockStateSource::iid(&ch, 4).unwrap();
        let a = success_monte_carlo(&scheme, &src, 200_000, 7).unwrap();
        let b = success_monte_carlo(&scheme, &src, 200_000, 7).unwrap();
        assert_eq!(a.successes, b.successes);
        let exact = success_exact(&scheme, &src).unwrap().to_f64();
        assert!(a.ci_low <= exact && exact <= a.ci_high, "{a:?} vs {exact}");
    }

    #[test]
    fn single_message_always_succeeds() {
        let ch = builtin_z0z1();
        let uniform = vec![vec![r(1, 2), r(1, 2)]; 2];
        let scheme = AuthScheme::new(&ch, uniform, r(1, 2), 4).unwrap();
        let src = BlockStateSource::iid(&ch, 4).unwrap();
        assert!(success_exact(&scheme, &src).unwrap().is_one());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 10).0, 0.0);
    }
}
