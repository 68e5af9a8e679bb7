//! Exact optimal classical success probabilities with causal state knowledge
//! at the encoder, by exhaustive search over deterministic encoders with MAP
//! decoding.
//!
//! Per-message encoders are independent, so the search first enumerates every
//! single-message encoder and records its output profile
//! `v[y] = Σ_s P(s) N(y | x(s), s)`. The success of a code is
//! `(1/M) Σ_y max_w v_w[y]`; dominated profiles never improve that sum and
//! are dropped before the `M`-tuples are searched.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelWithState;
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::seq;

/// Cap on single-message encoders enumerated.
pub const ENCODER_CAP: u128 = 1 << 24;
/// Cap on message tuples searched after pruning.
pub const TUPLE_CAP: u128 = 1 << 26;

/// `x_j = f_j(w, s^j)` for every message and position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterministicEncoder {
    pub m: usize,
    pub n: usize,
    pub x_size: usize,
    pub s_size: usize,
    /// `tables[w][j][s^{j+1}]`, prefixes packed with `seq::encode`.
    pub tables: Vec<Vec<Vec<usize>>>,
}

impl DeterministicEncoder {
    pub fn from_fn(
        m: usize,
        n: usize,
        x_size: usize,
        s_size: usize,
        f: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(m);
        for w in 0..m {
            let mut per_w = Vec::with_capacity(n);
            for j in 1..=n {
                let row: Vec<usize> = seq::all(s_size, j).map(|prefix| f(w, &prefix)).collect();
                if row.iter().any(|&x| x >= x_size) {
                    return Err(Error::InvalidArgument("encoder output outside the input alphabet".into()));
                }
                per_w.push(row);
            }
            tables.push(per_w);
        }
        Ok(DeterministicEncoder {
            m,
            n,
            x_size,
            s_size,
            tables,
        })
    }

    pub fn encode(&self, w: usize, s: &[usize]) -> Vec<usize> {
        (0..self.n)
            .map(|j| self.tables[w][j][seq::encode(&s[..=j], self.s_size)])
            .collect()
    }

    /// One line per `(w, j, s^j)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for w in 0..self.m {
            for j in 0..self.n {
                for (k, x) in self.tables[w][j].iter().enumerate() {
                    let prefix = seq::render(&seq::decode(k, self.s_size, j + 1));
                    let _ = writeln!(out, "w={} j={} s^j={prefix} -> x={x}", w + 1, j + 1);
                }
            }
        }
        out
    }
}

/// MAP decoder for a fixed encoder, ties toward the smallest message.
pub fn map_decoder(ch: &ChannelWithState, enc: &DeterministicEncoder) -> Vec<usize> {
    let n = enc.n;
    let yn = seq::count(ch.y_size(), n).expect("small blocklength");
    let mut best = vec![(0usize, Rational::from_integer(-1)); yn];
    for w in 0..enc.m {
        let mut weight = vec![Rational::zero(); yn];
        for s in seq::all(ch.s_size(), n) {
            let ps = ch.iid_state_prob(&s);
            if ps.is_zero() {
                continue;
            }
            let x = enc.encode(w, &s);
            for (yi, y) in seq::all(ch.y_size(), n).enumerate() {
                let k = ch.block_kernel_unchecked(&x, &s, &y);
                if !k.is_zero() {
                    weight[yi] += &ps * &k;
                }
            }
        }
        for (yi, v) in weight.into_iter().enumerate() {
            if v > best[yi].1 {
                best[yi] = (w, v);
            }
        }
    }
    best.into_iter().map(|(w, _)| w).collect()
}

/// `(1/M) Σ_{w,s,y} P(s) N(y | x(w,s), s) 1[g(y) = w]`, with the decoder
/// given as a table over packed output sequences.
pub fn evaluate_code(ch: &ChannelWithState, enc: &DeterministicEncoder, decoder: &[usize]) -> Result<Rational> {
    Ok(per_message_success(ch, enc, decoder)?.into_iter().sum::<Rational>() / Rational::from(enc.m))
}

/// `Pr(ŵ = w | w)` for every message.
pub fn per_message_success(ch: &ChannelWithState, enc: &DeterministicEncoder, decoder: &[usize]) -> Result<Vec<Rational>> {
    let n = enc.n;
    if enc.x_size != ch.x_size() || enc.s_size != ch.s_size() {
        return Err(Error::InvalidArgument("encoder alphabets do not match the channel".into()));
    }
    if Some(decoder.len()) != seq::count(ch.y_size(), n) {
        return Err(Error::InvalidArgument("decoder table has the wrong length".into()));
    }
    let mut out = Vec::with_capacity(enc.m);
    for w in 0..enc.m {
        let mut total = Rational::zero();
        for s in seq::all(ch.s_size(), n) {
            let ps = ch.iid_state_prob(&s);
            if ps.is_zero() {
                continue;
            }
            let x = enc.encode(w, &s);
            for (yi, y) in seq::all(ch.y_size(), n).enumerate() {
                if decoder[yi] == w {
                    total += &ps * ch.block_kernel_unchecked(&x, &s, &y);
                }
            }
        }
        out.push(total);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalOptimum {
    pub value: Rational,
    pub encoder: DeterministicEncoder,
    pub decoder: Vec<usize>,
    /// Single-message encoders enumerated.
    pub encoders_searched: u128,
    /// Profiles left after removing dominated ones.
    pub profiles_kept: usize,
}

/// Integer single-letter weights `D P(s) N(y|x,s)` indexed `[(s * X + x) * Y + y]`.
fn integer_weights(ch: &ChannelWithState) -> Result<(Vec<u128>, u128)> {
    let mut denom = BigInt::from(1);
    let mut vals = Vec::new();
    for s in 0..ch.s_size() {
        for x in 0..ch.x_size() {
            for y in 0..ch.y_size() {
                let v = ch.state_prob(s) * ch.prob(y, x, s);
                denom = denom.lcm(v.denom());
                vals.push(v);
            }
        }
    }
    let to_u128 = |b: &BigInt| -> Result<u128> {
        u128::try_from(b).map_err(|_| Error::SizeCap {
            what: "common denominator".into(),
            size: u128::MAX,
            cap: u128::MAX,
        })
    };
    let d = to_u128(&denom)?;
    let ints = vals
        .iter()
        .map(|v| to_u128(&(v.numer() * (&denom / v.denom()))))
        .collect::<Result<Vec<_>>>()?;
    Ok((ints, d))
}

/// Best success over all deterministic causal encoders for `M` messages and
/// blocklength `n`; with `csir` the decoder also sees the states.
pub fn classical_opt_success(ch: &ChannelWithState, m: usize, n: usize, csir: bool) -> Result<ClassicalOptimum> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("M and n must be at least 1".into()));
    }
    let lifted;
    let ch = if csir {
        lifted = ch.lift_csir();
        &lifted
    } else {
        ch
    };
    let (nx, ny, ns) = (ch.x_size(), ch.y_size(), ch.s_size());
    let table_len: usize = (1..=n).map(|j| seq::count(ns, j).unwrap_or(usize::MAX)).fold(0usize, usize::saturating_add);
    let encoders = (nx as u128).checked_pow(table_len as u32).unwrap_or(u128::MAX);
    check_cap("single-message encoder count", encoders, ENCODER_CAP)?;
    let yn = seq::count(ny, n).ok_or_else(|| Error::SizeCap {
        what: "output sequences".into(),
        size: u128::MAX,
        cap: ENCODER_CAP,
    })?;
    let (w1, d) = integer_weights(ch)?;
    let dn = d.checked_pow(n as u32).ok_or_else(|| Error::SizeCap {
        what: "block denominator".into(),
        size: u128::MAX,
        cap: u128::MAX,
    })?;
    let offsets: Vec<usize> = (1..=n)
        .scan(0usize, |acc, j| {
            let o = *acc;
            *acc += seq::count(ns, j).expect("fits");
            Some(o)
        })
        .collect();
    let states: Vec<Vec<usize>> = seq::all(ns, n).collect();
    let prefix_idx: Vec<Vec<usize>> = states
        .iter()
        .map(|s| (0..n).map(|j| offsets[j] + seq::encode(&s[..=j], ns)).collect())
        .collect();
    let outputs: Vec<Vec<usize>> = seq::all(ny, n).collect();

    let profile = |e: u64| -> Vec<u128> {
        let mut digits = vec![0usize; table_len];
        let mut rest = e as usize;
        for dgt in digits.iter_mut().rev() {
            *dgt = rest % nx;
            rest /= nx;
        }
        let mut v = vec![0u128; yn];
        for (si, s) in states.iter().enumerate() {
            let x: Vec<usize> = prefix_idx[si].iter().map(|&k| digits[k]).collect();
            for (yi, y) in outputs.iter().enumerate() {
                let mut p: u128 = 1;
                for i in 0..n {
                    p *= w1[(s[i] * nx + x[i]) * ny + y[i]];
                    if p == 0 {
                        break;
                    }
                }
                v[yi] += p;
            }
        }
        v
    };

    // unique profiles with the first encoder producing each
    let found: Vec<(Vec<u128>, u64)> = (0..encoders as u64)
        .into_par_iter()
        .fold(HashMap::new, |mut map: HashMap<Vec<u128>, u64>, e| {
            let v = profile(e);
            map.entry(v).and_modify(|k| *k = (*k).min(e)).or_insert(e);
            map
        })
        .reduce(HashMap::new, |mut a, b| {
            for (v, e) in b {
                a.entry(v).and_modify(|k| *k = (*k).min(e)).or_insert(e);
            }
            a
        })
        .into_iter()
        .collect();
    let mut found = found;
    found.sort_by(|a, b| a.1.cmp(&b.1));
    let kept: Vec<(Vec<u128>, u64)> = found
        .iter()
        .filter(|(v, _)| {
            !found
                .iter()
                .any(|(u, _)| u != v && u.iter().zip(v).all(|(a, b)| a >= b))
        })
        .cloned()
        .collect();
    let k = kept.len();
    let tuples = multiset_count(k as u128, m as u128);
    check_cap("message tuples after pruning", tuples, TUPLE_CAP)?;

    // nondecreasing index tuples of length m over the kept profiles
    let firsts: Vec<usize> = (0..k).collect();
    let (best_sum, best_tuple) = firsts
        .into_par_iter()
        .map(|first| {
            let mut best = (0u128, Vec::new());
            let mut tuple = vec![first; m];
            search(&kept, first, 1, &mut tuple, &kept[first].0, &mut best);
            best
        })
        .reduce(
            || (0u128, Vec::new()),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && !b.1.is_empty() && (a.1.is_empty() || b.1 < a.1)) {
                    b
                } else {
                    a
                }
            },
        );
    let value = Rational::from_bigints(BigInt::from(best_sum), BigInt::from(dn) * BigInt::from(m));
    let decode_digits = |e: u64| -> Vec<usize> {
        let mut digits = vec![0usize; table_len];
        let mut rest = e as usize;
        for dgt in digits.iter_mut().rev() {
            *dgt = rest % nx;
            rest /= nx;
        }
        digits
    };
    let chosen: Vec<Vec<usize>> = best_tuple.iter().map(|&i| decode_digits(kept[i].1)).collect();
    let encoder = DeterministicEncoder::from_fn(m, n, nx, ns, |w, prefix| {
        let j = prefix.len() - 1;
        chosen[w][offsets[j] + seq::encode(prefix, ns)]
    })?;
    let decoder = map_decoder(ch, &encoder);
    Ok(ClassicalOptimum {
        value,
        encoder,
        decoder,
        encoders_searched: encoders,
        profiles_kept: k,
    })
}

fn multiset_count(k: u128, m: u128) -> u128 {
    // C(k + m - 1, m)
    let mut acc: u128 = 1;
    for i in 1..=m {
        acc = acc.saturating_mul(k + i - 1) / i;
    }
    acc
}

fn search(
    kept: &[(Vec<u128>, u64)],
    last: usize,
    depth: usize,
    tuple: &mut Vec<usize>,
    current: &[u128],
    best: &mut (u128, Vec<usize>),
) {
    if depth == tuple.len() {
        let total: u128 = current.iter().sum();
        if total > best.0 || best.1.is_empty() {
            *best = (total, tuple.clone());
        }
        return;
    }
    for i in last..kept.len() {
        tuple[depth] = i;
        let merged: Vec<u128> = current.iter().zip(&kept[i].0).map(|(a, b)| *a.max(b)).collect();
        search(kept, i, depth + 1, tuple, &merged, best);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExplicitStrategy {
    pub encoder: DeterministicEncoder,
    /// Table over packed lifted outputs `(y, s_R)^2`.
    pub decoder: Vec<usize>,
    pub per_message: Vec<Rational>,
    pub success: Rational,
}

/// Two-use repetition code on the state-corrected Z0/Z1 channel with the
/// state at the receiver: send `x_j = w XOR s_j`, undo the flip at the
/// receiver, and decide 0 only on `(0, 0)`.
pub fn explicit_z0z1_strategy() -> Result<ExplicitStrategy> {
    let ch = crate::channel::builtin_z0z1();
    let lifted = ch.lift_csir();
    let encoder = DeterministicEncoder::from_fn(2, 2, 2, 2, |w, prefix| w ^ prefix[prefix.len() - 1])?;
    let decoder: Vec<usize> = seq::all(lifted.y_size(), 2)
        .map(|out| {
            let corrected: Vec<usize> = out.iter().map(|&o| (o / 2) ^ (o % 2)).collect();
            usize::from(corrected != [0, 0])
        })
        .collect();
    let per_message = per_message_success(&lifted, &encoder, &decoder)?;
    let success = evaluate_code(&lifted, &encoder, &decoder)?;
    Ok(ExplicitStrategy {
        encoder,
        decoder,
        per_message,
        success,
    })
}
