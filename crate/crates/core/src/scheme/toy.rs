//! A hand-built scheme for `Y = XS` over three channel uses, with states
//! uniform on {011, 101, 110}.

use crate::error::Result;
use crate::rational::Rational;
use crate::seq;

use super::tensor::SchemeTensor;

/// The three states carrying positive probability.
pub const TOY_STATES: [[usize; 3]; 3] = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];

/// Representative in the support for an arbitrary state sequence.
pub fn toy_representative(s: &[usize]) -> [usize; 3] {
    match (s[0], s[1]) {
        (0, _) => [0, 1, 1],
        (1, 0) => [1, 0, 1],
        _ => [1, 1, 0],
    }
}

/// `∏_{i: s_i = 1} 1[y_i = x_i s_i]`.
pub fn toy_t(x: &[usize], y: &[usize], s: &[usize]) -> bool {
    (0..s.len()).filter(|&i| s[i] == 1).all(|i| y[i] == x[i] * s[i])
}

/// `M = 4`, `n = 3`: inputs i.i.d. uniform, the true message when `T = 1`
/// and a uniform wrong message otherwise.
pub fn toy_scheme() -> Result<SchemeTensor> {
    let on = Rational::new(1, 8);
    let wrong = Rational::new(1, 24);
    SchemeTensor::from_fn(2, 2, 2, 4, 3, move |x, wh, w, s, y| {
        let xs = seq::decode(x, 2, 3);
        let ys = seq::decode(y, 2, 3);
        let rep = toy_representative(&seq::decode(s, 2, 3));
        let t = toy_t(&xs, &ys, &rep);
        match (wh == w, t) {
            (true, true) => on.clone(),
            (false, false) => wrong.clone(),
            _ => Rational::zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_product_xs;
    use crate::scheme::verify_conditions;

    #[test]
    fn representatives_respect_prefixes() {
        for s in seq::all(2, 3) {
            let rep = toy_representative(&s);
            assert!(TOY_STATES.contains(&rep));
            assert_eq!(rep[0], s[0]);
            if s[0] == 1 {
                assert_eq!(rep[1], s[1]);
            }
            if TOY_STATES.iter().any(|t| t[..] == s[..]) {
                assert_eq!(rep[..], s[..]);
            }
        }
    }

    #[test]
    fn message_marginals_are_one_quarter() {
        let t = toy_scheme().unwrap();
        for wh in 0..4 {
            for w in 0..4 {
                for s in 0..8 {
                    for y in 0..8 {
                        let total: Rational = (0..8).map(|x| t.get(x, wh, w, s, y)).sum();
                        assert_eq!(total, Rational::new(1, 4));
                    }
                }
            }
        }
    }

    #[test]
    fn causality_sums_are_zero_or_two() {
        for x1 in 0..2 {
            for y in seq::all(2, 3) {
                let count = |s: &[usize]| {
                    seq::all(2, 2)
                        .filter(|tail| toy_t(&[x1, tail[0], tail[1]], &y, s))
                        .count()
                };
                let (lhs, rhs) = (count(&[1, 0, 1]), count(&[1, 1, 0]));
                assert_eq!(lhs, rhs);
                assert_eq!(lhs, if x1 == y[0] { 2 } else { 0 });
            }
        }
    }

    #[test]
    fn toy_passes_and_always_decodes() {
        let t = toy_scheme().unwrap();
        let rep = verify_conditions(&t);
        assert!(rep.all_pass(), "{rep:?}");
        let (ch, src) = builtin_product_xs();
        assert!(t.success_probability(&ch, &src).unwrap().is_one());
    }
}
