//! The authentication coding scheme: inputs are drawn causally from a
//! state sequence forced onto a fixed type, and the decoder side releases the
//! true message only when a per-state joint typicality test passes.

pub mod success;
pub mod tensor;
pub mod toy;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::capacity::InputStrategy;
use crate::channel::ChannelWithState;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::typemap::{self, budgets, Budgets, MappedSequence};

pub use success::{
    success_decomposition, success_exact, success_monte_carlo, wilson_interval, MonteCarloEstimate,
    SuccessDecomposition,
};
pub use tensor::{materialize_tensor, verify_conditions, ConditionReport, SchemeTensor, TENSOR_CAP};
pub use toy::{toy_representative, toy_scheme, toy_t, TOY_STATES};

/// Cap on the number of joint type tables enumerated per state when
/// computing the typicality probability exactly.
pub const MU_ENUM_CAP: u128 = 1 << 22;

/// Rounds each row of a floating strategy to multiples of `1/denom`; the last
/// entry absorbs the rounding so rows sum to one exactly.
pub fn rational_strategy(strategy: &InputStrategy, denom: u32) -> Vec<Vec<Rational>> {
    strategy
        .rows()
        .iter()
        .map(|row| {
            let mut out: Vec<Rational> = row.iter().map(|&p| Rational::approximate(p, denom)).collect();
            let k = out.len();
            let head: Rational = out[..k - 1].iter().sum();
            out[k - 1] = Rational::one() - head;
            if out[k - 1].is_negative() {
                // push the deficit onto the largest entry
                out[k - 1] = Rational::zero();
                let total: Rational = out.iter().sum();
                let (imax, _) = out.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
                out[imax] = &out[imax] - &(total - Rational::one());
            }
            out
        })
        .collect()
}

/// Positions and mapped symbols derived from one `(s^n, y^n)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedPair {
    /// `s̃`; the padding symbol is `s_size`.
    pub s_tilde: Vec<usize>,
    pub s_flag: bool,
    /// `ỹ`; the padding symbol is `y_size`.
    pub y_tilde: Vec<usize>,
    pub y_flags: Vec<bool>,
    /// `Ĩ_σ`: positions with `s̃ = σ` and `ỹ` not padding.
    pub checked: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct AuthScheme {
    channel: ChannelWithState,
    p_x_given_s: Vec<Vec<Rational>>,
    eps: Rational,
    n: usize,
    state_budgets: Budgets,
    y_budgets: Vec<Budgets>,
    p_y_given_s: Vec<Vec<Rational>>,
    /// `P_{XY|S=σ}` flattened as `[σ][x * y_size + y]`.
    p_xy_given_s: Vec<Vec<Rational>>,
    mu: Rational,
    m: BigInt,
    lambda: Rational,
}

impl AuthScheme {
    pub fn new(ch: &ChannelWithState, p_x_given_s: Vec<Vec<Rational>>, eps: Rational, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        typemap::check_eps(&eps)?;
        if p_x_given_s.len() != ch.s_size() || p_x_given_s.iter().any(|r| r.len() != ch.x_size()) {
            return Err(Error::InvalidArgument("P_{X|S} shape does not match the channel".into()));
        }
        for (s, row) in p_x_given_s.iter().enumerate() {
            if row.iter().any(Rational::is_negative) || row.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::Validation(format!("P_(X|S={s}) is not a distribution")));
            }
        }
        let (nx, ny) = (ch.x_size(), ch.y_size());
        let mut p_y_given_s = Vec::with_capacity(ch.s_size());
        let mut p_xy_given_s = Vec::with_capacity(ch.s_size());
        for s in 0..ch.s_size() {
            let mut py = vec![Rational::zero(); ny];
            let mut pxy = vec![Rational::zero(); nx * ny];
            for x in 0..nx {
                for y in 0..ny {
                    let v = &p_x_given_s[s][x] * ch.prob(y, x, s);
                    py[y] += &v;
                    pxy[x * ny + y] = v;
                }
            }
            p_y_given_s.push(py);
            p_xy_given_s.push(pxy);
        }
        let state_budgets = budgets(n, ch.state_dist(), &eps)?;
        let y_budgets = (0..ch.s_size())
            .map(|s| {
                let ns = state_budgets.per_symbol()[s];
                if ns == 0 {
                    Budgets::from_counts(vec![0; ny], 0)
                } else {
                    budgets(ns, &p_y_given_s[s], &eps)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut scheme = AuthScheme {
            channel: ch.clone(),
            p_x_given_s,
            eps,
            n,
            state_budgets,
            y_budgets,
            p_y_given_s,
            p_xy_given_s,
            mu: Rational::one(),
            m: BigInt::from(1),
            lambda: Rational::one(),
        };
        let inv = scheme.typicality_probability()?;
        if inv.is_zero() {
            return Err(Error::Scheme(format!(
                "the typicality test can never pass at n = {n}, eps = {}; mu is infinite",
                scheme.eps
            )));
        }
        scheme.mu = inv.recip();
        scheme.m = scheme.mu.ceil();
        scheme.lambda = &scheme.mu / &Rational::from_bigint(scheme.m.clone());
        Ok(scheme)
    }

    pub fn channel(&self) -> &ChannelWithState {
        &self.channel
    }

    pub fn p_x_given_s(&self) -> &[Vec<Rational>] {
        &self.p_x_given_s
    }

    pub fn p_y_given_s(&self) -> &[Vec<Rational>] {
        &self.p_y_given_s
    }

    /// `P_{XY|S=σ}` as `[x * y_size + y]`.
    pub fn p_xy_given_s(&self, sigma: usize) -> &[Rational] {
        &self.p_xy_given_s[sigma]
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state_budgets(&self) -> &Budgets {
        &self.state_budgets
    }

    pub fn y_budgets(&self) -> &[Budgets] {
        &self.y_budgets
    }

    /// `n_σ` for every state.
    pub fn n_sigma(&self) -> &[usize] {
        self.state_budgets.per_symbol()
    }

    /// `ñ_σ` for every state.
    pub fn n_tilde(&self) -> Vec<usize> {
        self.y_budgets.iter().map(Budgets::used).collect()
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `M` as a machine integer, when it fits.
    pub fn m_usize(&self) -> Option<usize> {
        self.m.to_usize()
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn map_state(&self, s: &[usize]) -> MappedSequence {
        typemap::map_unchecked(s, &self.state_budgets)
    }

    fn check_seq(&self, seq: &[usize], k: usize, what: &str) -> Result<()> {
        if seq.len() != self.n || seq.iter().any(|&a| a >= k) {
            return Err(Error::InvalidArgument(format!(
                "{what} must be a length-{} sequence over 0..{k}",
                self.n
            )));
        }
        Ok(())
    }

    /// Runs the state mapping and then one output mapping per state.
    pub fn map_pair(&self, s: &[usize], y: &[usize]) -> Result<MappedPair> {
        self.check_seq(s, self.channel.s_size(), "s")?;
        self.check_seq(y, self.channel.y_size(), "y")?;
        Ok(self.map_pair_unchecked(s, y))
    }

    pub(crate) fn map_pair_unchecked(&self, s: &[usize], y: &[usize]) -> MappedPair {
        let ns = self.channel.s_size();
        let phi_y = self.channel.y_size();
        let ms = self.map_state(s);
        let mut y_tilde = vec![phi_y; self.n];
        let mut y_flags = Vec::with_capacity(ns);
        let mut checked = vec![Vec::new(); ns];
        for sigma in 0..ns {
            let positions: Vec<usize> = (0..self.n).filter(|&i| ms.output[i] == sigma).collect();
            let sub: Vec<usize> = positions.iter().map(|&i| y[i]).collect();
            let mapped = typemap::map_unchecked(&sub, &self.y_budgets[sigma]);
            y_flags.push(mapped.flag);
            for (&i, &v) in positions.iter().zip(&mapped.output) {
                y_tilde[i] = v;
                if v != phi_y {
                    checked[sigma].push(i);
                }
            }
        }
        MappedPair {
            s_tilde: ms.output,
            s_flag: ms.flag,
            y_tilde,
            y_flags,
            checked,
        }
    }

    /// `ζ_i(x | s^i)` where `i = s_prefix.len()`.
    pub fn zeta(&self, x: usize, s_prefix: &[usize]) -> Result<Rational> {
        let i = s_prefix.len();
        if i == 0 || i > self.n || x >= self.channel.x_size() || s_prefix.iter().any(|&a| a >= self.channel.s_size()) {
            return Err(Error::InvalidArgument("zeta needs 1 <= i <= n and in-range symbols".into()));
        }
        let mapped = typemap::map_unchecked(s_prefix, &self.state_budgets);
        Ok(self.zeta_mapped(x, mapped.output[i - 1]))
    }

    pub(crate) fn zeta_mapped(&self, x: usize, s_tilde: usize) -> Rational {
        if s_tilde == self.channel.s_size() {
            Rational::new(1, self.channel.x_size() as i64)
        } else {
            self.p_x_given_s[s_tilde][x].clone()
        }
    }

    /// `∏_i ζ_i(x_i | s^i)`.
    pub fn input_prob(&self, x: &[usize], s_tilde: &[usize]) -> Rational {
        x.iter().zip(s_tilde).map(|(&a, &t)| self.zeta_mapped(a, t)).product()
    }

    /// Whether the typicality test passes for every state.
    pub(crate) fn test_passes(&self, x: &[usize], pair: &MappedPair) -> bool {
        let ny = self.channel.y_size();
        let k = self.channel.x_size() * ny;
        pair.checked.iter().enumerate().all(|(sigma, positions)| {
            let mut counts = vec![0usize; k];
            for &i in positions {
                counts[x[i] * ny + pair.y_tilde[i]] += 1;
            }
            typemap::is_typical_counts(&counts, &self.p_xy_given_s[sigma], &self.eps)
        })
    }

    /// `T(x, y, s)`: `λ` when the test passes for every state, else zero.
    pub fn t_function(&self, x: &[usize], y: &[usize], s: &[usize]) -> Result<Rational> {
        self.check_seq(x, self.channel.x_size(), "x")?;
        let pair = self.map_pair(s, y)?;
        Ok(if self.test_passes(x, &pair) {
            self.lambda.clone()
        } else {
            Rational::zero()
        })
    }

    /// `1/μ`: the probability that inputs drawn from `P_{X|S=σ}` on `Ĩ_σ`
    /// pass the test for every state. The mapped output type on `Ĩ_σ` is the
    /// same for all `(s, y)`, so the probability factors over states and over
    /// output symbols and is summed over joint count tables.
    pub fn typicality_probability(&self) -> Result<Rational> {
        let nx = self.channel.x_size();
        let ny = self.channel.y_size();
        let mut total = Rational::one();
        for sigma in 0..self.channel.s_size() {
            let b = &self.y_budgets[sigma];
            let n_tilde = b.used();
            let mut work: u128 = 0;
            for &c in b.per_symbol() {
                work = work.saturating_add(compositions(c, nx));
            }
            crate::error::check_cap("joint type enumeration (use the Monte Carlo estimate)", work, MU_ENUM_CAP)?;
            let px = &self.p_x_given_s[sigma];
            let pxy = &self.p_xy_given_s[sigma];
            for y in 0..ny {
                let c = b.per_symbol()[y];
                let mut sum = Rational::zero();
                for_each_composition(c, nx, &mut |k: &[usize]| {
                    let ok = (0..nx).all(|x| {
                        let expected = Rational::from(n_tilde) * &pxy[x * ny + y];
                        (Rational::from(k[x]) - &expected).abs() <= &self.eps * &expected
                    });
                    if ok {
                        let mut term = Rational::from_bigint(multinomial(c, k));
                        for x in 0..nx {
                            term *= px[x].pow(k[x] as i32);
                        }
                        sum += term;
                    }
                });
                total *= sum;
                if total.is_zero() {
                    return Ok(total);
                }
            }
        }
        Ok(total)
    }
}

fn compositions(c: usize, parts: usize) -> u128 {
    // C(c + parts - 1, parts - 1)
    let mut acc: u128 = 1;
    for i in 1..parts as u128 {
        acc = acc.saturating_mul(c as u128 + i) / i;
    }
    acc
}

fn for_each_composition(c: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(left: usize, k: &mut Vec<usize>, parts: usize, f: &mut dyn FnMut(&[usize])) {
        if k.len() + 1 == parts {
            k.push(left);
            f(k);
            k.pop();
            return;
        }
        for v in 0..=left {
            k.push(v);
            rec(left - v, k, parts, f);
            k.pop();
        }
    }
    let mut k = Vec::with_capacity(parts);
    rec(c, &mut k, parts, f);
}

fn multinomial(c: usize, k: &[usize]) -> BigInt {
    let mut num = BigInt::from(1);
    for i in 2..=c {
        num *= i;
    }
    for &v in k {
        for i in 2..=v {
            num /= i;
        }
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_z0z1;
    use crate::seq;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn noiseless_single_state() -> ChannelWithState {
        ChannelWithState::state_independent(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], vec![r(1, 1)]).unwrap()
    }

    #[test]
    fn composition_helpers() {
        let mut seen = Vec::new();
        for_each_composition(3, 2, &mut |k: &[usize]| seen.push(k.to_vec()));
        assert_eq!(seen, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(compositions(3, 2), 4);
        assert_eq!(compositions(2, 3), 6);
        assert_eq!(multinomial(4, &[2, 1, 1]), BigInt::from(12));
    }

    #[test]
    fn vacuous_typicality_gives_single_message() {
        let ch = builtin_z0z1();
        let uniform = vec![vec![r(1, 2), r(1, 2)]; 2];
        let s = AuthScheme::new(&ch, uniform, r(1, 2), 4).unwrap();
        assert_eq!(s.n_tilde(), vec![0, 0]);
        assert_eq!(*s.mu(), Rational::one());
        assert_eq!(*s.m(), BigInt::from(1));
        assert!(s.lambda().is_one());
        for x in seq::all(2, 4) {
            assert!(s.t_function(&x, &[0, 1, 1, 0], &[1, 1, 0, 0]).unwrap().is_one());
        }
    }

    #[test]
    fn noiseless_instance_has_four_messages() {
        let ch = noiseless_single_state();
        let s = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 4), 4).unwrap();
        assert_eq!(s.n_sigma(), &[3]);
        assert_eq!(s.n_tilde(), vec![2]);
        assert_eq!(*s.mu(), r(4, 1));
        assert_eq!(*s.m(), BigInt::from(4));
        assert!(s.lambda().is_one());
        // y = 0110 at s = 0000: mapped y keeps 0 and 1 at positions 0 and 1
        let pair = s.map_pair(&[0; 4], &[0, 1, 1, 0]).unwrap();
        assert_eq!(pair.s_tilde, vec![0, 0, 0, 1]);
        assert_eq!(pair.y_tilde, vec![0, 1, 2, 2]);
        assert_eq!(pair.checked, vec![vec![0, 1]]);
        assert!(s.t_function(&[0, 1, 0, 0], &[0, 1, 1, 0], &[0; 4]).unwrap().is_one());
        assert!(s.t_function(&[1, 1, 0, 0], &[0, 1, 1, 0], &[0; 4]).unwrap().is_zero());
    }

    #[test]
    fn zeta_rows() {
        let ch = builtin_z0z1();
        let p = vec![vec![r(3, 5), r(2, 5)], vec![r(1, 4), r(3, 4)]];
        let s = AuthScheme::new(&ch, p.clone(), r(1, 2), 4).unwrap();
        // budgets (1, 1) and two padding slots: s = 0,0 maps to 0, padding
        assert_eq!(s.zeta(1, &[0]).unwrap(), r(2, 5));
        assert_eq!(s.zeta(1, &[0, 0]).unwrap(), r(1, 2));
        assert_eq!(s.zeta(0, &[0, 0, 1]).unwrap(), r(1, 4));
        for prefix in seq::all(2, 3) {
            let total: Rational = (0..2).map(|x| s.zeta(x, &prefix).unwrap()).sum();
            assert!(total.is_one());
        }
        assert!(s.zeta(0, &[]).is_err());
    }

    #[test]
    fn rounding_strategies() {
        let st = InputStrategy::new(vec![vec![0.6, 0.4], vec![0.123, 0.877]]).unwrap();
        let rows = rational_strategy(&st, 64);
        for row in &rows {
            assert!(row.iter().sum::<Rational>().is_one());
            assert!(row.iter().all(|v| !v.is_negative()));
        }
        assert_eq!(rows[0][0], r(38, 64));
    }

    #[test]
    fn impossible_test_is_an_error() {
        // one state, P_{XY} with three positive cells but only one checked slot
        let ch = ChannelWithState::state_independent(
            vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 1)]],
            vec![r(1, 1)],
        )
        .unwrap();
        let err = AuthScheme::new(&ch, vec![vec![r(1, 2), r(1, 2)]], r(1, 10), 3).unwrap_err();
        assert!(matches!(err, Error::Scheme(_)), "{err}");
    }
}
