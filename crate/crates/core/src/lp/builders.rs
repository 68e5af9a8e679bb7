//! The optimal NS-assisted success probability with causal CSIT as a linear
//! program, in the full form over `z(x^n, ŵ | w, s^n, y^n)` and the reduced
//! form over `r(x^n, y^n, s^n)` and `q(x^n | s^n)`.
//!
//! Variable names spell sequences as digit strings and messages 1-based:
//! `z_01_1_2_00_10` is `z(x=01, ŵ=1 | w=2, s=00, y=10)`. LP1 variables are
//! ordered x-major, then ŵ, w, s, y; LP2 lists every `r_x_y_s` (x-major) and
//! then every `q_x_s`. Reference cells use index 0 of each alphabet as the
//! symbol `0`, and message 1 as the reference message.

use crate::channel::ChannelWithState;
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::seq;

use super::{LinearProgram, RowKind, Sense, VARIABLE_CAP};

/// Alphabet sizes, message count and blocklength of an NS coding program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NsShape {
    pub x_size: usize,
    pub y_size: usize,
    pub s_size: usize,
    pub m: usize,
    pub n: usize,
    pub xn: usize,
    pub yn: usize,
    pub sn: usize,
}

impl NsShape {
    pub fn new(ch: &ChannelWithState, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("M and n must be at least 1".into()));
        }
        let pow = |k: usize| {
            seq::count(k, n).ok_or_else(|| Error::SizeCap {
                what: "sequence space".into(),
                size: u128::MAX,
                cap: usize::MAX as u128,
            })
        };
        Ok(NsShape {
            x_size: ch.x_size(),
            y_size: ch.y_size(),
            s_size: ch.s_size(),
            m,
            n,
            xn: pow(ch.x_size())?,
            yn: pow(ch.y_size())?,
            sn: pow(ch.s_size())?,
        })
    }

    pub fn lp1_vars(&self) -> u128 {
        self.xn as u128 * (self.m * self.m) as u128 * self.sn as u128 * self.yn as u128
    }

    pub fn lp2_vars(&self) -> u128 {
        self.xn as u128 * self.sn as u128 * (self.yn as u128 + 1)
    }

    pub fn z(&self, x: usize, wh: usize, w: usize, s: usize, y: usize) -> usize {
        (((x * self.m + wh) * self.m + w) * self.sn + s) * self.yn + y
    }

    pub fn r(&self, x: usize, y: usize, s: usize) -> usize {
        (x * self.yn + y) * self.sn + s
    }

    pub fn q(&self, x: usize, s: usize) -> usize {
        self.xn * self.yn * self.sn + x * self.sn + s
    }

    fn digits(&self, k: usize, index: usize) -> String {
        seq::render(&seq::decode(index, k, self.n))
    }

    fn tail(&self, k: usize, i: usize) -> usize {
        seq::count(k, self.n - i).expect("fits")
    }

    /// `P_S^n(s) N^n(y|x,s)` indexed `[(x * sn + s) * yn + y]`.
    fn weights(&self, ch: &ChannelWithState) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.xn * self.sn * self.yn);
        for x in seq::all(self.x_size, self.n) {
            for s in seq::all(self.s_size, self.n) {
                let ps = ch.iid_state_prob(&s);
                for y in seq::all(self.y_size, self.n) {
                    out.push(if ps.is_zero() {
                        Rational::zero()
                    } else {
                        &ps * &ch.block_kernel_unchecked(&x, &s, &y)
                    });
                }
            }
        }
        out
    }
}

/// Builds LP1. With `causal = false` the causality rows are omitted, giving
/// the non-causal program.
pub fn build_lp1(ch: &ChannelWithState, m: usize, n: usize, causal: bool) -> Result<(LinearProgram, NsShape)> {
    build_lp1_capped(ch, m, n, causal, VARIABLE_CAP)
}

/// [`build_lp1`] with an explicit variable cap, for checking points of
/// programs too large to solve.
pub fn build_lp1_capped(
    ch: &ChannelWithState,
    m: usize,
    n: usize,
    causal: bool,
    cap: u128,
) -> Result<(LinearProgram, NsShape)> {
    let sh = NsShape::new(ch, m, n)?;
    check_cap("LP1 variable count", sh.lp1_vars(), cap)?;
    let mut lp = LinearProgram::new(Sense::Maximize);
    for x in 0..sh.xn {
        for wh in 0..m {
            for w in 0..m {
                for s in 0..sh.sn {
                    for y in 0..sh.yn {
                        let name = format!(
                            "z_{}_{}_{}_{}_{}",
                            sh.digits(sh.x_size, x),
                            wh + 1,
                            w + 1,
                            sh.digits(sh.s_size, s),
                            sh.digits(sh.y_size, y)
                        );
                        let j = lp.add_var(name, true);
                        debug_assert_eq!(j, sh.z(x, wh, w, s, y));
                    }
                }
            }
        }
    }
    let weights = sh.weights(ch);
    let inv_m = Rational::new(1, m as i64);
    let mut objective = Vec::new();
    for x in 0..sh.xn {
        for w in 0..m {
            for s in 0..sh.sn {
                for y in 0..sh.yn {
                    let wt = &weights[(x * sh.sn + s) * sh.yn + y];
                    if !wt.is_zero() {
                        objective.push((sh.z(x, w, w, s, y), wt * &inv_m));
                    }
                }
            }
        }
    }
    lp.set_objective(objective);
    let one = Rational::one;
    let minus = || Rational::from_integer(-1);

    for w in 0..m {
        for s in 0..sh.sn {
            for y in 0..sh.yn {
                let coeffs = (0..sh.xn)
                    .flat_map(|x| (0..m).map(move |wh| (x, wh)))
                    .map(|(x, wh)| (sh.z(x, wh, w, s, y), one()))
                    .collect();
                lp.add_row(format!("norm[w={},s={s},y={y}]", w + 1), coeffs, RowKind::Eq, one());
            }
        }
    }
    // C1: sum over ŵ does not depend on y
    for x in 0..sh.xn {
        for w in 0..m {
            for s in 0..sh.sn {
                for y in 1..sh.yn {
                    let mut coeffs = Vec::with_capacity(2 * m);
                    for wh in 0..m {
                        coeffs.push((sh.z(x, wh, w, s, y), one()));
                        coeffs.push((sh.z(x, wh, w, s, 0), minus()));
                    }
                    lp.add_row(format!("ns1[x={x},w={},s={s},y={y}]", w + 1), coeffs, RowKind::Eq, Rational::zero());
                }
            }
        }
    }
    // C2: sum over x does not depend on (w, s)
    for wh in 0..m {
        for w in 0..m {
            for s in 0..sh.sn {
                if w == 0 && s == 0 {
                    continue;
                }
                for y in 0..sh.yn {
                    let mut coeffs = Vec::with_capacity(2 * sh.xn);
                    for x in 0..sh.xn {
                        coeffs.push((sh.z(x, wh, w, s, y), one()));
                        coeffs.push((sh.z(x, wh, 0, 0, y), minus()));
                    }
                    lp.add_row(
                        format!("ns2[wh={},w={},s={s},y={y}]", wh + 1, w + 1),
                        coeffs,
                        RowKind::Eq,
                        Rational::zero(),
                    );
                }
            }
        }
    }
    if causal {
        for i in 1..n {
            let xt = sh.tail(sh.x_size, i);
            let st = sh.tail(sh.s_size, i);
            for xp in 0..sh.xn / xt {
                for wh in 0..m {
                    for w in 0..m {
                        for s in 0..sh.sn {
                            if s % st == 0 {
                                continue;
                            }
                            let sref = s - s % st;
                            for y in 0..sh.yn {
                                let mut coeffs = Vec::with_capacity(2 * xt);
                                for xs in 0..xt {
                                    let x = xp * xt + xs;
                                    coeffs.push((sh.z(x, wh, w, s, y), one()));
                                    coeffs.push((sh.z(x, wh, w, sref, y), minus()));
                                }
                                lp.add_row(
                                    format!("causal[i={i},xp={xp},wh={},w={},s={s},y={y}]", wh + 1, w + 1),
                                    coeffs,
                                    RowKind::Eq,
                                    Rational::zero(),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((lp, sh))
}

/// Row labels of the q-causality family in LP2 start with this prefix.
pub const Q_CAUSAL_PREFIX: &str = "q_causal";

/// Builds LP2. With `causal = false` both causality row families are omitted.
pub fn build_lp2(ch: &ChannelWithState, m: usize, n: usize, causal: bool) -> Result<(LinearProgram, NsShape)> {
    let sh = NsShape::new(ch, m, n)?;
    check_cap("LP2 variable count", sh.lp2_vars(), VARIABLE_CAP)?;
    let mut lp = LinearProgram::new(Sense::Maximize);
    for x in 0..sh.xn {
        for y in 0..sh.yn {
            for s in 0..sh.sn {
                let name = format!(
                    "r_{}_{}_{}",
                    sh.digits(sh.x_size, x),
                    sh.digits(sh.y_size, y),
                    sh.digits(sh.s_size, s)
                );
                let j = lp.add_var(name, true);
                debug_assert_eq!(j, sh.r(x, y, s));
            }
        }
    }
    for x in 0..sh.xn {
        for s in 0..sh.sn {
            let j = lp.add_var(format!("q_{}_{}", sh.digits(sh.x_size, x), sh.digits(sh.s_size, s)), false);
            debug_assert_eq!(j, sh.q(x, s));
        }
    }
    let weights = sh.weights(ch);
    let mut objective = Vec::new();
    for x in 0..sh.xn {
        for s in 0..sh.sn {
            for y in 0..sh.yn {
                let wt = &weights[(x * sh.sn + s) * sh.yn + y];
                if !wt.is_zero() {
                    objective.push((sh.r(x, y, s), wt.clone()));
                }
            }
        }
    }
    lp.set_objective(objective);
    let one = Rational::one;
    let minus = || Rational::from_integer(-1);
    let inv_m = Rational::new(1, m as i64);
    for s in 0..sh.sn {
        for y in 0..sh.yn {
            let coeffs = (0..sh.xn).map(|x| (sh.r(x, y, s), one())).collect();
            lp.add_row(format!("r_norm[s={s},y={y}]"), coeffs, RowKind::Eq, inv_m.clone());
        }
    }
    for s in 0..sh.sn {
        let coeffs = (0..sh.xn).map(|x| (sh.q(x, s), one())).collect();
        lp.add_row(format!("q_norm[s={s}]"), coeffs, RowKind::Eq, one());
    }
    for x in 0..sh.xn {
        for y in 0..sh.yn {
            for s in 0..sh.sn {
                lp.add_row(
                    format!("r_le_q[x={x},y={y},s={s}]"),
                    vec![(sh.r(x, y, s), one()), (sh.q(x, s), minus())],
                    RowKind::Le,
                    Rational::zero(),
                );
            }
        }
    }
    if causal {
        for i in 1..n {
            let xt = sh.tail(sh.x_size, i);
            let st = sh.tail(sh.s_size, i);
            for xp in 0..sh.xn / xt {
                for s in 0..sh.sn {
                    if s % st == 0 {
                        continue;
                    }
                    let sref = s - s % st;
                    for y in 0..sh.yn {
                        let mut coeffs = Vec::with_capacity(2 * xt);
                        for xs in 0..xt {
                            let x = xp * xt + xs;
                            coeffs.push((sh.r(x, y, s), one()));
                            coeffs.push((sh.r(x, y, sref), minus()));
                        }
                        lp.add_row(format!("r_causal[i={i},xp={xp},y={y},s={s}]"), coeffs, RowKind::Eq, Rational::zero());
                    }
                }
            }
        }
        for i in 1..n {
            let xt = sh.tail(sh.x_size, i);
            let st = sh.tail(sh.s_size, i);
            for xp in 0..sh.xn / xt {
                for s in 0..sh.sn {
                    if s % st == 0 {
                        continue;
                    }
                    let sref = s - s % st;
                    let mut coeffs = Vec::with_capacity(2 * xt);
                    for xs in 0..xt {
                        let x = xp * xt + xs;
                        coeffs.push((sh.q(x, s), one()));
                        coeffs.push((sh.q(x, sref), minus()));
                    }
                    lp.add_row(format!("{Q_CAUSAL_PREFIX}[i={i},xp={xp},s={s}]"), coeffs, RowKind::Eq, Rational::zero());
                }
            }
        }
    }
    Ok((lp, sh))
}

/// `r = (1/M) sum_w z(x, w | w, s, y)` and `q = (1/M) sum_{w, ŵ} z(x, ŵ | w, s, 0^n)`.
pub fn lp1_to_lp2(sh: &NsShape, z: &[Rational]) -> Vec<Rational> {
    let inv_m = Rational::new(1, sh.m as i64);
    let mut out = vec![Rational::zero(); sh.xn * sh.sn * (sh.yn + 1)];
    for x in 0..sh.xn {
        for s in 0..sh.sn {
            for y in 0..sh.yn {
                let total: Rational = (0..sh.m).map(|w| &z[sh.z(x, w, w, s, y)]).sum();
                out[sh.r(x, y, s)] = total * &inv_m;
            }
            let total: Rational = (0..sh.m)
                .flat_map(|w| (0..sh.m).map(move |wh| (w, wh)))
                .map(|(w, wh)| &z[sh.z(x, wh, w, s, 0)])
                .sum();
            out[sh.q(x, s)] = total * &inv_m;
        }
    }
    out
}

/// `z = r` on the diagonal `ŵ = w` and `(q - r) / (M - 1)` off it.
pub fn lp2_to_lp1(sh: &NsShape, rq: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); sh.xn * sh.m * sh.m * sh.sn * sh.yn];
    let off = if sh.m > 1 {
        Some(Rational::new(1, (sh.m - 1) as i64))
    } else {
        None
    };
    for x in 0..sh.xn {
        for s in 0..sh.sn {
            for y in 0..sh.yn {
                let r = &rq[sh.r(x, y, s)];
                let q = &rq[sh.q(x, s)];
                for w in 0..sh.m {
                    for wh in 0..sh.m {
                        out[sh.z(x, wh, w, s, y)] = if wh == w {
                            r.clone()
                        } else {
                            (q - r) * off.as_ref().expect("M > 1 off the diagonal")
                        };
                    }
                }
            }
        }
    }
    out
}
