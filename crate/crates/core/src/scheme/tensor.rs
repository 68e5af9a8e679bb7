//! Dense conditional distributions `Z(x^n, ŵ | w, s^n, y^n)` and exhaustive
//! checks of the non-signaling and causality conditions.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{BlockStateSource, ChannelWithState};
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::seq;

use super::AuthScheme;

/// Default cap on dense tensor entries.
pub const TENSOR_CAP: u128 = 10_000_000;

/// Entries are stored in the LP1 variable order: x-major, then ŵ, w, s, y.
#[derive(Debug, Clone)]
pub struct SchemeTensor {
    pub x_size: usize,
    pub y_size: usize,
    pub s_size: usize,
    pub m: usize,
    pub n: usize,
    xn: usize,
    yn: usize,
    sn: usize,
    entries: Vec<Rational>,
}

impl SchemeTensor {
    /// Fills every cell from `f(x, ŵ, w, s, y)`, with sequences passed as
    /// indices in the `seq` packing.
    pub fn from_fn<F>(x_size: usize, y_size: usize, s_size: usize, m: usize, n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, usize, usize, usize) -> Rational + Sync,
    {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("M and n must be positive".into()));
        }
        let pow = |k: usize| {
            seq::count(k, n).ok_or_else(|| Error::SizeCap {
                what: "tensor alphabet power".into(),
                size: u128::MAX,
                cap: TENSOR_CAP,
            })
        };
        let (xn, yn, sn) = (pow(x_size)?, pow(y_size)?, pow(s_size)?);
        let size = (xn as u128) * (m as u128) * (m as u128) * (sn as u128) * (yn as u128);
        check_cap("dense tensor entries", size, TENSOR_CAP)?;
        let block = m * m * sn * yn;
        let entries: Vec<Rational> = (0..xn)
            .into_par_iter()
            .flat_map_iter(|x| {
                let f = &f;
                (0..block).map(move |rest| {
                    let y = rest % yn;
                    let s = (rest / yn) % sn;
                    let w = (rest / (yn * sn)) % m;
                    let wh = rest / (yn * sn * m);
                    f(x, wh, w, s, y)
                })
            })
            .collect();
        Ok(SchemeTensor {
            x_size,
            y_size,
            s_size,
            m,
            n,
            xn,
            yn,
            sn,
            entries,
        })
    }

    pub fn xn(&self) -> usize {
        self.xn
    }

    pub fn yn(&self) -> usize {
        self.yn
    }

    pub fn sn(&self) -> usize {
        self.sn
    }

    fn idx(&self, x: usize, wh: usize, w: usize, s: usize, y: usize) -> usize {
        (((x * self.m + wh) * self.m + w) * self.sn + s) * self.yn + y
    }

    pub fn get(&self, x: usize, wh: usize, w: usize, s: usize, y: usize) -> &Rational {
        &self.entries[self.idx(x, wh, w, s, y)]
    }

    /// All entries in LP1 variable order, usable as an LP1 point.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `(1/M) Σ P(s) N(y|x,s) Z(x, w | w, s, y)` with the state law taken from `source`.
    pub fn success_probability(&self, ch: &ChannelWithState, source: &BlockStateSource) -> Result<Rational> {
        if ch.x_size() != self.x_size || ch.y_size() != self.y_size || ch.s_size() != self.s_size {
            return Err(Error::InvalidArgument("channel alphabets do not match the tensor".into()));
        }
        if source.n() != self.n || source.s_size() != self.s_size {
            return Err(Error::InvalidArgument("state source does not match the tensor".into()));
        }
        let mut total = Rational::zero();
        for s in 0..self.sn {
            let ps = source.prob_index(s);
            if ps.is_zero() {
                continue;
            }
            let sv = seq::decode(s, self.s_size, self.n);
            for x in 0..self.xn {
                let xv = seq::decode(x, self.x_size, self.n);
                for y in 0..self.yn {
                    let yv = seq::decode(y, self.y_size, self.n);
                    let k = ch.block_kernel_unchecked(&xv, &sv, &yv);
                    if k.is_zero() {
                        continue;
                    }
                    let diag: Rational = (0..self.m).map(|w| self.get(x, w, w, s, y)).sum();
                    total += ps * &k * diag;
                }
            }
        }
        Ok(total / Rational::from(self.m))
    }
}

/// The authentication scheme as a dense tensor.
pub fn materialize_tensor(scheme: &AuthScheme) -> Result<SchemeTensor> {
    let ch = scheme.channel();
    let n = scheme.n();
    let m = scheme.m_usize().ok_or_else(|| Error::SizeCap {
        what: "message count".into(),
        size: u128::MAX,
        cap: TENSOR_CAP,
    })?;
    let (nx, ny, ns) = (ch.x_size(), ch.y_size(), ch.s_size());
    let sn = seq::count(ns, n).unwrap_or(usize::MAX);
    let xn = seq::count(nx, n).unwrap_or(usize::MAX);
    let yn = seq::count(ny, n).unwrap_or(usize::MAX);
    let size = (xn as u128) * (m as u128) * (m as u128) * (sn as u128) * (yn as u128);
    check_cap("dense tensor entries", size, TENSOR_CAP)?;
    // per (s, y): mapped pair; per (x, s): input product; per (x, s, y): T
    let pairs: Vec<_> = (0..sn * yn)
        .map(|k| {
            let s = seq::decode(k / yn, ns, n);
            let y = seq::decode(k % yn, ny, n);
            scheme.map_pair_unchecked(&s, &y)
        })
        .collect();
    let inputs: Vec<Rational> = (0..xn * sn)
        .map(|k| {
            let x = seq::decode(k / sn, nx, n);
            scheme.input_prob(&x, &pairs[(k % sn) * yn].s_tilde)
        })
        .collect();
    let lambda = scheme.lambda().clone();
    let off = if m > 1 {
        Some(Rational::from(m - 1))
    } else {
        None
    };
    SchemeTensor::from_fn(nx, ny, ns, m, n, |x, wh, w, s, y| {
        let first = &inputs[x * sn + s];
        if first.is_zero() {
            return Rational::zero();
        }
        let Some(off) = &off else {
            return first.clone();
        };
        let xv = seq::decode(x, nx, n);
        let t = if scheme.test_passes(&xv, &pairs[s * yn + y]) {
            lambda.clone()
        } else {
            Rational::zero()
        };
        if wh == w {
            first * &t
        } else {
            first * &((Rational::one() - t) / off)
        }
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConditionCheck {
    pub cells: usize,
    pub violations: usize,
    /// The first few violated cells.
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 32;

impl ConditionCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cells += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    fn merge(mut self, other: ConditionCheck) -> ConditionCheck {
        self.cells += other.cells;
        self.violations += other.violations;
        for e in other.examples {
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(e);
            }
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub nonnegativity: ConditionCheck,
    pub normalization: ConditionCheck,
    pub c1: ConditionCheck,
    pub c2: ConditionCheck,
    pub c3: ConditionCheck,
    pub remark: ConditionCheck,
    /// `Σ_x Z(x, ŵ | w, s, y) = 1/M` for every cell.
    pub message_marginal: ConditionCheck,
}

impl ConditionReport {
    /// Valid distribution satisfying C1, C2 and C3.
    pub fn all_pass(&self) -> bool {
        self.nonnegativity.passed()
            && self.normalization.passed()
            && self.c1.passed()
            && self.c2.passed()
            && self.c3.passed()
    }

    pub fn verdict(check: &ConditionCheck) -> &'static str {
        if check.passed() {
            "pass"
        } else {
            "FAIL"
        }
    }
}

fn render(t: &SchemeTensor, k: usize, index: usize) -> String {
    seq::render(&seq::decode(index, k, t.n))
}

/// Exhaustive exact check of every condition on every cell.
pub fn verify_conditions(t: &SchemeTensor) -> ConditionReport {
    let m = t.m;
    let (xn, yn, sn) = (t.xn, t.yn, t.sn);
    let one = Rational::one();
    let inv_m = Rational::new(1, m as i64);

    let mut nonnegativity = ConditionCheck::default();
    for x in 0..xn {
        for wh in 0..m {
            for w in 0..m {
                for s in 0..sn {
                    for y in 0..yn {
                        let v = t.get(x, wh, w, s, y);
                        nonnegativity.record(!v.is_negative(), || {
                            format!("Z(x={},ŵ={},w={},s={},y={}) = {v}", render(t, t.x_size, x), wh + 1, w + 1, render(t, t.s_size, s), render(t, t.y_size, y))
                        });
                    }
                }
            }
        }
    }

    let mut normalization = ConditionCheck::default();
    for w in 0..m {
        for s in 0..sn {
            for y in 0..yn {
                let total: Rational = (0..xn)
                    .flat_map(|x| (0..m).map(move |wh| (x, wh)))
                    .map(|(x, wh)| t.get(x, wh, w, s, y))
                    .sum();
                normalization.record(total == one, || {
                    format!("sum over (x, ŵ) at w={},s={},y={} is {total}", w + 1, render(t, t.s_size, s), render(t, t.y_size, y))
                });
            }
        }
    }

    // Σ_ŵ Z(x, ŵ | w, s, y) for every (x, w, s, y)
    let c1 = (0..xn)
        .into_par_iter()
        .map(|x| {
            let mut check = ConditionCheck::default();
            for w in 0..m {
                for s in 0..sn {
                    let sum_at = |y: usize| -> Rational { (0..m).map(|wh| t.get(x, wh, w, s, y)).sum() };
                    let reference = sum_at(0);
                    for y in 1..yn {
                        let v = sum_at(y);
                        check.record(v == reference, || {
                            format!(
                                "x={},w={},s={}: y={} gives {v}, y={} gives {reference}",
                                render(t, t.x_size, x),
                                w + 1,
                                render(t, t.s_size, s),
                                render(t, t.y_size, y),
                                render(t, t.y_size, 0)
                            )
                        });
                    }
                }
            }
            check
        })
        .reduce(ConditionCheck::default, ConditionCheck::merge);

    // Σ_x Z(x, ŵ | w, s, y)
    let x_sum = |wh: usize, w: usize, s: usize, y: usize| -> Rational { (0..xn).map(|x| t.get(x, wh, w, s, y)).sum() };
    let mut c2 = ConditionCheck::default();
    let mut message_marginal = ConditionCheck::default();
    for wh in 0..m {
        for y in 0..yn {
            let reference = x_sum(wh, 0, 0, y);
            for w in 0..m {
                for s in 0..sn {
                    let v = x_sum(wh, w, s, y);
                    message_marginal.record(v == inv_m, || {
                        format!("ŵ={},w={},s={},y={}: marginal {v}", wh + 1, w + 1, render(t, t.s_size, s), render(t, t.y_size, y))
                    });
                    if w == 0 && s == 0 {
                        continue;
                    }
                    c2.record(v == reference, || {
                        format!(
                            "ŵ={},y={}: (w={},s={}) gives {v}, reference gives {reference}",
                            wh + 1,
                            render(t, t.y_size, y),
                            w + 1,
                            render(t, t.s_size, s)
                        )
                    });
                }
            }
        }
    }

    let mut c3 = ConditionCheck::default();
    let mut remark = ConditionCheck::default();
    for i in 1..t.n {
        let xt = seq::count(t.x_size, t.n - i).expect("fits");
        let st = seq::count(t.s_size, t.n - i).expect("fits");
        for xp in 0..xn / xt {
            let prefix_sum = |wh: usize, w: usize, s: usize, y: usize| -> Rational {
                (0..xt).map(|xs| t.get(xp * xt + xs, wh, w, s, y)).sum()
            };
            for w in 0..m {
                let mut marg_ref: Vec<Option<Rational>> = vec![None; sn];
                for wh in 0..m {
                    for s in 0..sn {
                        let sref = s - s % st;
                        for y in 0..yn {
                            if s != sref {
                                let v = prefix_sum(wh, w, s, y);
                                let reference = prefix_sum(wh, w, sref, y);
                                c3.record(v == reference, || {
                                    format!(
                                        "i={i},x^i={},ŵ={},w={},y={}: s={} gives {v}, s={} gives {reference}",
                                        seq::render(&seq::decode(xp, t.x_size, i)),
                                        wh + 1,
                                        w + 1,
                                        render(t, t.y_size, y),
                                        render(t, t.s_size, s),
                                        render(t, t.s_size, sref)
                                    )
                                });
                            }
                        }
                    }
                }
                // Σ over x suffix and ŵ, invariant in (s suffix, y)
                for s in 0..sn {
                    let sref = s - s % st;
                    for y in 0..yn {
                        let v: Rational = (0..m).map(|wh| prefix_sum(wh, w, s, y)).sum();
                        if s == sref && y == 0 {
                            marg_ref[s] = Some(v);
                            continue;
                        }
                        let reference = match &marg_ref[sref] {
                            Some(r) => r.clone(),
                            None => (0..m).map(|wh| prefix_sum(wh, w, sref, 0)).sum(),
                        };
                        remark.record(v == reference, || {
                            format!(
                                "i={i},x^i={},w={}: (s={},y={}) gives {v}, reference gives {reference}",
                                seq::render(&seq::decode(xp, t.x_size, i)),
                                w + 1,
                                render(t, t.s_size, s),
                                render(t, t.y_size, y)
                            )
                        });
                    }
                }
            }
        }
    }

    ConditionReport {
        nonnegativity,
        normalization,
        c1,
        c2,
        c3,
        remark,
        message_marginal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_z0z1;
    use crate::lp::build_lp1_capped;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn noiseless() -> ChannelWithState {
        ChannelWithState::state_independent(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], vec![r(1, 1)]).unwrap()
    }

    #[test]
    fn independent_uniform_passes_everything() {
        let t = SchemeTensor::from_fn(2, 2, 2, 2, 2, |_, _, _, _, _| r(1, 8)).unwrap();
        let rep = verify_conditions(&t);
        assert!(rep.all_pass());
        assert!(rep.remark.passed() && rep.message_marginal.passed());
        let src = BlockStateSource::iid(&builtin_z0z1(), 2).unwrap();
        assert_eq!(t.success_probability(&builtin_z0z1(), &src).unwrap(), r(1, 2));
    }

    #[test]
    fn routing_a_future_state_breaks_causality_only() {
        // x_1 = s_2, x_2 uniform, ŵ uniform
        let t = SchemeTensor::from_fn(2, 2, 2, 2, 2, |x, _, _, s, _| {
            let (x1, s2) = (x / 2, s % 2);
            if x1 == s2 {
                r(1, 4)
            } else {
                r(0, 1)
            }
        })
        .unwrap();
        let rep = verify_conditions(&t);
        assert!(rep.normalization.passed() && rep.c1.passed() && rep.c2.passed());
        assert!(!rep.c3.passed());
        assert!(!rep.all_pass());
    }

    #[test]
    fn signaling_tensor_fails_c1() {
        // x copies y
        let t = SchemeTensor::from_fn(2, 2, 1, 2, 1, |x, _, _, _, y| if x == y { r(1, 2) } else { r(0, 1) }).unwrap();
        let rep = verify_conditions(&t);
        assert!(!rep.c1.passed());
        assert!(rep.c1.examples[0].contains("y=1"));
    }

    #[test]
    fn authentication_tensor_is_a_feasible_lp1_point() {
        let ch = noiseless();
        let scheme = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 4), 4).unwrap();
        assert_eq!(scheme.m_usize(), Some(4));
        let t = materialize_tensor(&scheme).unwrap();
        let rep = verify_conditions(&t);
        assert!(rep.all_pass(), "{rep:?}");
        assert!(rep.remark.passed() && rep.message_marginal.passed());
        let (lp, _) = build_lp1_capped(&ch, 4, 4, true, 1 << 17).unwrap();
        assert!(lp.violations(t.entries()).is_empty());
        let src = BlockStateSource::iid(&ch, 4).unwrap();
        assert_eq!(lp.objective_value(t.entries()), t.success_probability(&ch, &src).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let err = SchemeTensor::from_fn(4, 4, 4, 8, 6, |_, _, _, _, _| r(0, 1)).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
    }
}
