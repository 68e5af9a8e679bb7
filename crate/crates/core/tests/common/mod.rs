//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's type mapping, typicality or capacity code.

#![allow(dead_code)]

use ns_state::channel::ChannelWithState;
use ns_state::Rational;

pub fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

/// Prints one verdict line and returns the verdict.
pub fn verdict(criterion: u32, ok: bool, detail: &str) -> bool {
    println!("criterion {criterion}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

/// All length-`n` sequences over `0..k`, first symbol most significant.
pub fn sequences(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// `floor(m (1 - eps) p)` for every symbol.
pub fn oracle_budgets(m: usize, dist: &[Rational], eps: &Rational) -> Vec<usize> {
    dist.iter()
        .map(|p| {
            let v = Rational::from(m) * (Rational::one() - eps) * p;
            usize::try_from(v.floor()).expect("small")
        })
        .collect()
}

/// Greedy causal mapping onto the budgets; `k` (the alphabet size) pads.
pub fn oracle_map(input: &[usize], t: &[usize]) -> (Vec<usize>, bool) {
    let k = t.len();
    let extra = input.len() - t.iter().sum::<usize>();
    let mut left = t.to_vec();
    let mut pad = extra;
    let mut ok = true;
    let mut out = Vec::new();
    for &a in input {
        if ok && left[a] > 0 {
            left[a] -= 1;
            out.push(a);
        } else if ok && pad > 0 {
            pad -= 1;
            out.push(k);
        } else {
            ok = false;
            let b = (0..k).find(|&b| left[b] > 0).unwrap();
            left[b] -= 1;
            out.push(b);
        }
    }
    (out, ok)
}

/// `|N(a) - m P(a)| <= eps m P(a)` for every cell.
pub fn oracle_typical(counts: &[usize], dist: &[Rational], eps: &Rational) -> bool {
    let m: usize = counts.iter().sum();
    counts.iter().zip(dist).all(|(&c, p)| {
        let centre = Rational::from(m) * p;
        let dev = Rational::from(c) - &centre;
        let dev = if dev.is_negative() { -dev } else { dev };
        dev <= eps * &centre
    })
}

/// The full test-and-input pipeline of the authentication scheme, rebuilt
/// from its definition: returns `(∏ ζ, passes)` for one `(x, s, y)`.
pub fn oracle_scheme_cell(
    ch: &ChannelWithState,
    p_x_given_s: &[Vec<Rational>],
    eps: &Rational,
    x: &[usize],
    s: &[usize],
    y: &[usize],
) -> (Rational, bool) {
    let n = s.len();
    let (nx, ny, ns) = (ch.x_size(), ch.y_size(), ch.s_size());
    let ts = oracle_budgets(n, ch.state_dist(), eps);
    let (s_tilde, _) = oracle_map(s, &ts);
    let mut weight = Rational::one();
    for i in 0..n {
        weight *= if s_tilde[i] == ns {
            r(1, nx as i64)
        } else {
            p_x_given_s[s_tilde[i]][x[i]].clone()
        };
    }
    let mut pass = true;
    for sigma in 0..ns {
        let positions: Vec<usize> = (0..n).filter(|&i| s_tilde[i] == sigma).collect();
        let py: Vec<Rational> = (0..ny)
            .map(|b| (0..nx).map(|a| &p_x_given_s[sigma][a] * ch.prob(b, a, sigma)).sum())
            .collect();
        let ty = if ts[sigma] == 0 {
            vec![0; ny]
        } else {
            oracle_budgets(ts[sigma], &py, eps)
        };
        let sub: Vec<usize> = positions.iter().map(|&i| y[i]).collect();
        let (y_tilde, _) = oracle_map(&sub, &ty);
        let mut counts = vec![0usize; nx * ny];
        for (k, &i) in positions.iter().enumerate() {
            if y_tilde[k] != ny {
                counts[x[i] * ny + y_tilde[k]] += 1;
            }
        }
        let pxy: Vec<Rational> = (0..nx * ny)
            .map(|c| &p_x_given_s[sigma][c / ny] * ch.prob(c % ny, c / ny, sigma))
            .collect();
        pass &= oracle_typical(&counts, &pxy, eps);
    }
    (weight, pass)
}

/// Binary Z-channel mutual information with `P(x = 1) = q` and crossover
/// `a` from input 1 to output 0, written out from entropies.
pub fn z_channel_mi(q: f64, a: f64) -> f64 {
    let h = |p: f64| if p <= 0.0 || p >= 1.0 { 0.0 } else { -p * p.log2() - (1.0 - p) * (1.0 - p).log2() };
    let p_y1 = q * (1.0 - a);
    h(p_y1) - q * h(a)
}

/// Grid maximum of `f` on `[0, 1]` with the given step.
pub fn grid_max(f: impl Fn(f64) -> f64, step: f64) -> (f64, f64) {
    let steps = (1.0 / step).round() as usize;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..=steps {
        let q = k as f64 * step;
        let v = f(q);
        if v > best.0 {
            best = (v, q);
        }
    }
    best
}

/// Identity channel over `k` symbols with a single state.
pub fn noiseless(k: usize) -> ChannelWithState {
    let rows = (0..k).map(|x| (0..k).map(|y| r((x == y) as i64, 1)).collect()).collect();
    ChannelWithState::state_independent(rows, vec![r(1, 1)]).unwrap()
}
