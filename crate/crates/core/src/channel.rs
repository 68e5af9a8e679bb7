//! Finite channels with state, the CSIR lift, n-fold products and the
//! structured channel file format.
//!
//! Alphabets are `0..x_size`, `0..y_size`, `0..s_size`. Kernel entries are
//! exact rationals; a channel is validated once at construction and immutable
//! afterwards.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::{Rational, RationalLiteral};
use crate::seq;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelWithState {
    x_size: usize,
    y_size: usize,
    s_size: usize,
    /// Flat `[s][x][y]`.
    kernel: Vec<Rational>,
    state_dist: Vec<Rational>,
}

/// Distribution over whole state blocks `S^n`; either the i.i.d. product of
/// `P_S` or an arbitrary correlated source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStateSource {
    n: usize,
    s_size: usize,
    dist: Vec<Rational>,
    iid: bool,
}

impl ChannelWithState {
    /// `kernel[s][x][y] = N(y | x, s)`.
    pub fn new(
        x_size: usize,
        y_size: usize,
        s_size: usize,
        kernel: Vec<Vec<Vec<Rational>>>,
        state_dist: Vec<Rational>,
    ) -> Result<Self> {
        if x_size == 0 || y_size == 0 || s_size == 0 {
            return Err(Error::Validation("alphabet sizes must be positive".into()));
        }
        if kernel.len() != s_size {
            return Err(Error::Validation(format!(
                "kernel has {} state slices, expected {s_size}",
                kernel.len()
            )));
        }
        let mut flat = Vec::with_capacity(x_size * y_size * s_size);
        for (s, slice) in kernel.into_iter().enumerate() {
            if slice.len() != x_size {
                return Err(Error::Validation(format!(
                    "kernel[{s}] has {} input rows, expected {x_size}",
                    slice.len()
                )));
            }
            for (x, row) in slice.into_iter().enumerate() {
                if row.len() != y_size {
                    return Err(Error::Validation(format!(
                        "kernel row (x={x}, s={s}) has {} entries, expected {y_size}",
                        row.len()
                    )));
                }
                check_distribution(&row)
                    .map_err(|e| Error::Validation(format!("kernel row (x={x}, s={s}): {e}")))?;
                flat.extend(row);
            }
        }
        if state_dist.len() != s_size {
            return Err(Error::Validation(format!(
                "state_dist has {} entries, expected {s_size}",
                state_dist.len()
            )));
        }
        check_distribution(&state_dist)
            .map_err(|e| Error::Validation(format!("state_dist: {e}")))?;
        Ok(ChannelWithState {
            x_size,
            y_size,
            s_size,
            kernel: flat,
            state_dist,
        })
    }

    /// A channel whose law does not depend on the state.
    pub fn state_independent(rows: Vec<Vec<Rational>>, state_dist: Vec<Rational>) -> Result<Self> {
        let x_size = rows.len();
        let y_size = rows.first().map_or(0, Vec::len);
        let s_size = state_dist.len();
        Self::new(x_size, y_size, s_size, vec![rows; s_size], state_dist)
    }

    /// `N(y|x,s) = [y = x]` over a `size`-ary alphabet, uniform binary state.
    pub fn noiseless(size: usize) -> Self {
        let rows: Vec<Vec<Rational>> = (0..size)
            .map(|x| {
                (0..size)
                    .map(|y| if x == y { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self::state_independent(rows, vec![Rational::new(1, 2), Rational::new(1, 2)])
            .expect("identity rows are distributions")
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    /// `N(y | x, s)`.
    pub fn prob(&self, y: usize, x: usize, s: usize) -> &Rational {
        &self.kernel[(s * self.x_size + x) * self.y_size + y]
    }

    /// The output distribution `N(. | x, s)`.
    pub fn row(&self, x: usize, s: usize) -> &[Rational] {
        let start = (s * self.x_size + x) * self.y_size;
        &self.kernel[start..start + self.y_size]
    }

    pub fn state_dist(&self) -> &[Rational] {
        &self.state_dist
    }

    pub fn state_prob(&self, s: usize) -> &Rational {
        &self.state_dist[s]
    }

    /// Nested `[s][x][y]` copy of the kernel.
    pub fn kernel_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.s_size)
            .map(|s| (0..self.x_size).map(|x| self.row(x, s).to_vec()).collect())
            .collect()
    }

    /// Floating copy of `N(. | ., s)` as `[x][y]`.
    pub fn state_matrix_f64(&self, s: usize) -> Vec<Vec<f64>> {
        (0..self.x_size)
            .map(|x| self.row(x, s).iter().map(Rational::to_f64).collect())
            .collect()
    }

    pub fn state_dist_f64(&self) -> Vec<f64> {
        self.state_dist.iter().map(Rational::to_f64).collect()
    }

    /// `N^{\otimes n}(y^n | x^n, s^n)`.
    pub fn block_kernel(&self, x: &[usize], s: &[usize], y: &[usize]) -> Result<Rational> {
        let n = x.len();
        if s.len() != n || y.len() != n {
            return Err(Error::InvalidArgument(format!(
                "sequence lengths differ: x={}, s={}, y={}",
                x.len(),
                s.len(),
                y.len()
            )));
        }
        if x.iter().any(|&a| a >= self.x_size)
            || s.iter().any(|&a| a >= self.s_size)
            || y.iter().any(|&a| a >= self.y_size)
        {
            return Err(Error::InvalidArgument("symbol outside its alphabet".into()));
        }
        Ok(self.block_kernel_unchecked(x, s, y))
    }

    pub(crate) fn block_kernel_unchecked(&self, x: &[usize], s: &[usize], y: &[usize]) -> Rational {
        let mut acc = Rational::one();
        for i in 0..x.len() {
            let p = self.prob(y[i], x[i], s[i]);
            if p.is_zero() {
                return Rational::zero();
            }
            acc *= p;
        }
        acc
    }

    /// `P_S^{\otimes n}(s^n)`.
    pub fn iid_state_prob(&self, s: &[usize]) -> Rational {
        s.iter().map(|&a| &self.state_dist[a]).product()
    }

    /// Channel with the state appended to the output: output symbol
    /// `[y, s_R]` has index `y * s_size + s_R` (y major).
    pub fn lift_csir(&self) -> ChannelWithState {
        let y_size = self.y_size * self.s_size;
        let mut kernel = Vec::with_capacity(self.s_size * self.x_size * y_size);
        for s in 0..self.s_size {
            for x in 0..self.x_size {
                for y in 0..self.y_size {
                    for sr in 0..self.s_size {
                        kernel.push(if sr == s {
                            self.prob(y, x, s).clone()
                        } else {
                            Rational::zero()
                        });
                    }
                }
            }
        }
        ChannelWithState {
            x_size: self.x_size,
            y_size,
            s_size: self.s_size,
            kernel,
            state_dist: self.state_dist.clone(),
        }
    }

    /// Canonical file rendering; [`load_channel_str`] inverts it.
    pub fn to_file_string(&self, block: Option<&BlockStateSource>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "x_size = {}", self.x_size);
        let _ = writeln!(out, "y_size = {}", self.y_size);
        let _ = writeln!(out, "s_size = {}", self.s_size);
        let _ = writeln!(out, "# kernel[s][x][y] = N(y | x, s)");
        out.push_str("kernel = [\n");
        for s in 0..self.s_size {
            let rows: Vec<String> = (0..self.x_size)
                .map(|x| quoted_list(self.row(x, s)))
                .collect();
            let _ = writeln!(out, "  [{}],", rows.join(", "));
        }
        out.push_str("]\n");
        let _ = writeln!(out, "state_dist = {}", quoted_list(&self.state_dist));
        if let Some(block) = block.filter(|b| !b.iid) {
            out.push_str("\n[block_state]\n");
            let _ = writeln!(out, "n = {}", block.n);
            out.push_str("entries = [\n");
            for (i, p) in block.dist.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let s = seq::decode(i, self.s_size, block.n);
                let items: Vec<String> = s.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "  {{ seq = [{}], p = \"{p}\" }},", items.join(", "));
            }
            out.push_str("]\n");
        }
        out
    }

    /// Short stable fingerprint of the canonical rendering.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_file_string(None).as_bytes());
        hex::encode(&hash[..8])
    }
}

fn quoted_list(values: &[Rational]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("\"{v}\"")).collect();
    format!("[{}]", items.join(", "))
}

fn check_distribution(values: &[Rational]) -> std::result::Result<(), String> {
    if let Some(v) = values.iter().find(|v| v.is_negative()) {
        return Err(format!("negative entry {v}"));
    }
    let total: Rational = values.iter().sum();
    if !total.is_one() {
        return Err(format!("entries sum to {total}, not 1"));
    }
    Ok(())
}

impl BlockStateSource {
    /// `P_S^{\otimes n}`.
    pub fn iid(ch: &ChannelWithState, n: usize) -> Result<Self> {
        let total = seq::count(ch.s_size, n)
            .ok_or_else(|| Error::InvalidArgument("state block space overflows".into()))?;
        crate::error::check_cap("state block space", total as u128, 1 << 24)?;
        let dist = (0..total)
            .map(|i| ch.iid_state_prob(&seq::decode(i, ch.s_size, n)))
            .collect();
        Ok(BlockStateSource {
            n,
            s_size: ch.s_size,
            dist,
            iid: true,
        })
    }

    /// A correlated source given by `(sequence, probability)` pairs; unlisted
    /// sequences have probability zero.
    pub fn correlated(s_size: usize, n: usize, entries: &[(Vec<usize>, Rational)]) -> Result<Self> {
        let total = seq::count(s_size, n)
            .ok_or_else(|| Error::InvalidArgument("state block space overflows".into()))?;
        crate::error::check_cap("state block space", total as u128, 1 << 24)?;
        let mut dist = vec![Rational::zero(); total];
        for (s, p) in entries {
            if s.len() != n || s.iter().any(|&a| a >= s_size) {
                return Err(Error::Validation(format!(
                    "block_state sequence {s:?} is not in S^{n}"
                )));
            }
            let slot = &mut dist[seq::encode(s, s_size)];
            if !slot.is_zero() {
                return Err(Error::Validation(format!("block_state sequence {s:?} listed twice")));
            }
            *slot = p.clone();
        }
        check_distribution(&dist).map_err(|e| Error::Validation(format!("block_state: {e}")))?;
        Ok(BlockStateSource {
            n,
            s_size,
            dist,
            iid: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn is_iid(&self) -> bool {
        self.iid
    }

    pub fn prob(&self, s: &[usize]) -> &Rational {
        &self.dist[seq::encode(s, self.s_size)]
    }

    pub fn prob_index(&self, index: usize) -> &Rational {
        &self.dist[index]
    }

    pub fn dist(&self) -> &[Rational] {
        &self.dist
    }
}

/// The Z0/Z1 channel: a Z-channel toward 0 in state 0, toward 1 in state 1,
/// with a uniform state.
pub fn builtin_z0z1() -> ChannelWithState {
    let r = Rational::new;
    let kernel = vec![
        vec![vec![r(1, 1), r(0, 1)], vec![r(1, 2), r(1, 2)]],
        vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 1)]],
    ];
    ChannelWithState::new(2, 2, 2, kernel, vec![r(1, 2), r(1, 2)]).expect("valid builtin")
}

/// `Y = X * S` over binary alphabets, with the block state uniform on
/// `{011, 101, 110}`.
pub fn builtin_product_xs() -> (ChannelWithState, BlockStateSource) {
    let one = Rational::one;
    let zero = Rational::zero;
    let kernel = vec![
        vec![vec![one(), zero()], vec![one(), zero()]],
        vec![vec![one(), zero()], vec![zero(), one()]],
    ];
    let ch = ChannelWithState::new(2, 2, 2, kernel, vec![Rational::new(1, 2), Rational::new(1, 2)])
        .expect("valid builtin");
    let third = Rational::new(1, 3);
    let block = BlockStateSource::correlated(
        2,
        3,
        &[
            (vec![0, 1, 1], third.clone()),
            (vec![1, 0, 1], third.clone()),
            (vec![1, 1, 0], third),
        ],
    )
    .expect("valid builtin source");
    (ch, block)
}

/// Random channel with entries `k / denom_scale`-style small rationals.
pub fn random_channel<R: Rng>(
    rng: &mut R,
    x_size: usize,
    y_size: usize,
    s_size: usize,
) -> ChannelWithState {
    let kernel = (0..s_size)
        .map(|_| (0..x_size).map(|_| random_distribution(rng, y_size)).collect())
        .collect();
    let state_dist = random_positive_distribution(rng, s_size);
    ChannelWithState::new(x_size, y_size, s_size, kernel, state_dist).expect("random rows normalize")
}

/// Weights drawn from `0..=4`, normalized.
pub fn random_distribution<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..k).map(|_| rng.random_range(0..=4)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|a| Rational::new(a, total)).collect();
        }
    }
}

fn random_positive_distribution<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..k).map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|a| Rational::new(a, total)).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    x_size: usize,
    y_size: usize,
    s_size: usize,
    kernel: Vec<Vec<Vec<RationalLiteral>>>,
    state_dist: Vec<RationalLiteral>,
    block_state: Option<BlockStateFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockStateFile {
    n: usize,
    entries: Vec<BlockEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockEntry {
    seq: Vec<usize>,
    p: RationalLiteral,
}

pub fn load_channel_file(path: &Path) -> Result<(ChannelWithState, Option<BlockStateSource>)> {
    let text = std::fs::read_to_string(path)?;
    load_channel_str(&text).map_err(|e| match e {
        Error::ChannelFile { message, .. } => Error::ChannelFile {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

pub fn load_channel_str(text: &str) -> Result<(ChannelWithState, Option<BlockStateSource>)> {
    let file_err = |message: String| Error::ChannelFile {
        path: "<channel>".into(),
        message,
    };
    let raw: ChannelFile = toml::from_str(text).map_err(|e| file_err(e.to_string()))?;
    let kernel = raw
        .kernel
        .iter()
        .enumerate()
        .map(|(s, slice)| {
            slice
                .iter()
                .enumerate()
                .map(|(x, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(y, lit)| {
                            lit.to_rational()
                                .map_err(|e| file_err(format!("kernel[{s}][{x}][{y}]: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let state_dist = raw
        .state_dist
        .iter()
        .enumerate()
        .map(|(s, lit)| lit.to_rational().map_err(|e| file_err(format!("state_dist[{s}]: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let ch = ChannelWithState::new(raw.x_size, raw.y_size, raw.s_size, kernel, state_dist)?;
    let block = match raw.block_state {
        None => None,
        Some(b) => {
            let entries = b
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    e.p.to_rational()
                        .map(|p| (e.seq.clone(), p))
                        .map_err(|err| file_err(format!("block_state.entries[{i}].p: {err}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(BlockStateSource::correlated(ch.s_size, b.n, &entries)?)
        }
    };
    Ok((ch, block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn z0z1_entries() {
        let ch = builtin_z0z1();
        assert_eq!(*ch.prob(0, 0, 0), r(1, 1));
        assert_eq!(*ch.prob(0, 1, 0), r(1, 2));
        assert_eq!(*ch.prob(1, 1, 1), r(1, 1));
        assert_eq!(*ch.prob(0, 1, 1), r(0, 1));
        assert_eq!(*ch.prob(1, 0, 1), r(1, 2));
        assert_eq!(ch.state_dist(), &[r(1, 2), r(1, 2)]);
    }

    #[test]
    fn broken_row_names_offender() {
        let kernel = vec![vec![vec![r(1, 1), r(1, 2)], vec![r(1, 2), r(1, 2)]]];
        let err = ChannelWithState::new(2, 2, 1, kernel, vec![r(1, 1)]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x=0, s=0") && msg.contains("3/2"), "{msg}");
    }

    #[test]
    fn identity_channel_is_accepted() {
        let ch = ChannelWithState::noiseless(3);
        assert_eq!(*ch.prob(2, 2, 1), r(1, 1));
        assert_eq!(*ch.prob(1, 2, 1), r(0, 1));
    }

    #[test]
    fn csir_lift() {
        let ch = builtin_z0z1();
        let lifted = ch.lift_csir();
        assert_eq!(lifted.y_size(), 4);
        assert_eq!(*lifted.prob(0, 0, 0), r(1, 1));
        for s in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    for sr in 0..2 {
                        let p = lifted.prob(y * 2 + sr, x, s);
                        if sr != s {
                            assert!(p.is_zero());
                        }
                    }
                    let marginal: Rational = (0..2).map(|sr| lifted.prob(y * 2 + sr, x, s)).sum();
                    assert_eq!(&marginal, ch.prob(y, x, s));
                }
            }
        }
        let twice = lifted.lift_csir();
        assert_eq!(twice.y_size(), 8);
        assert!(ChannelWithState::new(2, 8, 2, twice.kernel_nested(), twice.state_dist().to_vec()).is_ok());
    }

    #[test]
    fn block_kernel_products() {
        let ch = builtin_z0z1();
        assert_eq!(ch.block_kernel(&[1, 1], &[0, 0], &[0, 0]).unwrap(), r(1, 4));
        assert_eq!(ch.block_kernel(&[1], &[1], &[0]).unwrap(), r(0, 1));
        assert_eq!(ch.block_kernel(&[0], &[0], &[0]).unwrap(), *ch.prob(0, 0, 0));
        assert!(ch.block_kernel(&[0, 1], &[0], &[0, 0]).is_err());
        assert!(ch.block_kernel(&[2], &[0], &[0]).is_err());
        for x in seq::all(2, 3) {
            for s in seq::all(2, 3) {
                let total: Rational = seq::all(2, 3)
                    .map(|y| ch.block_kernel(&x, &s, &y).unwrap())
                    .sum();
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn product_xs_builtin() {
        let (ch, block) = builtin_product_xs();
        assert_eq!(*ch.prob(0, 1, 0), r(1, 1));
        assert_eq!(*ch.prob(1, 1, 1), r(1, 1));
        assert_eq!(*block.prob(&[0, 1, 1]), r(1, 3));
        assert_eq!(*block.prob(&[1, 1, 1]), r(0, 1));
    }

    #[test]
    fn iid_block_source_is_product() {
        let ch = builtin_z0z1();
        let b = BlockStateSource::iid(&ch, 3).unwrap();
        assert!(b.is_iid());
        assert_eq!(*b.prob(&[0, 1, 0]), r(1, 8));
    }

    #[test]
    fn file_round_trip() {
        let ch = builtin_z0z1();
        let (back, block) = load_channel_str(&ch.to_file_string(None)).unwrap();
        assert_eq!(back, ch);
        assert!(block.is_none());

        let (ch, src) = builtin_product_xs();
        let (back, block) = load_channel_str(&ch.to_file_string(Some(&src))).unwrap();
        assert_eq!(back, ch);
        assert_eq!(block.unwrap(), src);
    }

    #[test]
    fn file_errors() {
        let missing = "x_size = 1\ny_size = 1\ns_size = 1\nkernel = [[[\"1\"]]]\n";
        let err = load_channel_str(missing).unwrap_err().to_string();
        assert!(err.contains("state_dist"), "{err}");

        let bad_entry = "x_size = 1\ny_size = 2\ns_size = 1\nkernel = [[[\"1/2\", \"x\"]]]\nstate_dist = [1]\n";
        let err = load_channel_str(bad_entry).unwrap_err().to_string();
        assert!(err.contains("kernel[0][0][1]"), "{err}");

        let syntax = "x_size = \n";
        let err = load_channel_str(syntax).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn decimal_entries_are_exact() {
        let text = "x_size = 1\ny_size = 2\ns_size = 1\nkernel = [[[0.3, \"0.7\"]]]\nstate_dist = [1.0]\n";
        let (ch, _) = load_channel_str(text).unwrap();
        assert_eq!(*ch.prob(0, 0, 0), r(3, 10));
        assert_eq!(*ch.prob(1, 0, 0), r(7, 10));
    }

    #[test]
    fn random_channels_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let ch = random_channel(&mut rng, 2, 3, 2);
            assert_eq!(ch.y_size(), 3);
            assert!(ch.state_dist().iter().all(Rational::is_positive));
        }
    }
}
