//! Causal type mapping with a padding symbol, and strong typicality.
//!
//! [`map_sequence`] forces every input sequence onto one fixed output type:
//! each symbol `a` appears exactly `t_a` times and the padding symbol
//! (index `alphabet_size`) fills the remaining `n - sum t_a` slots. Position
//! `i` of the output depends only on the first `i` inputs.

use crate::error::{Error, Result};
use crate::rational::{bigint_to_usize, Rational};

/// Per-symbol budgets `t_a` plus the padding budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budgets {
    per_symbol: Vec<usize>,
    extra: usize,
    n: usize,
}

impl Budgets {
    /// Explicit budgets; `extra = n - sum(per_symbol)`.
    pub fn from_counts(per_symbol: Vec<usize>, n: usize) -> Result<Self> {
        let used: usize = per_symbol.iter().sum();
        if used > n {
            return Err(Error::InvalidArgument(format!(
                "budgets sum to {used}, more than n = {n}"
            )));
        }
        Ok(Budgets {
            per_symbol,
            extra: n - used,
            n,
        })
    }

    pub fn per_symbol(&self) -> &[usize] {
        &self.per_symbol
    }

    pub fn extra(&self) -> usize {
        self.extra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.per_symbol.len()
    }

    /// Index of the padding symbol.
    pub fn padding(&self) -> usize {
        self.per_symbol.len()
    }

    /// Number of non-padding output positions.
    pub fn used(&self) -> usize {
        self.n - self.extra
    }
}

/// `t_a = floor(n (1 - eps) P(a))`.
pub fn budgets(n: usize, dist: &[Rational], eps: &Rational) -> Result<Budgets> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_eps(eps)?;
    let scale = Rational::from(n) * (Rational::one() - eps);
    let per_symbol = dist
        .iter()
        .map(|p| {
            if p.is_negative() {
                return Err(Error::InvalidArgument(format!("negative probability {p}")));
            }
            Ok(bigint_to_usize(&(&scale * p).floor()).expect("budget fits usize"))
        })
        .collect::<Result<Vec<_>>>()?;
    Budgets::from_counts(per_symbol, n)
}

pub(crate) fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= 1 {
        return Err(Error::InvalidArgument(format!("eps = {eps} is outside (0, 1)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedSequence {
    /// Symbols in `0..=alphabet_size`; `alphabet_size` is the padding symbol.
    pub output: Vec<usize>,
    pub flag: bool,
}

pub fn map_sequence(seq: &[usize], dist: &[Rational], eps: &Rational) -> Result<MappedSequence> {
    let b = budgets(seq.len(), dist, eps)?;
    map_with_budgets(seq, &b)
}

pub fn map_with_budgets(seq: &[usize], budgets: &Budgets) -> Result<MappedSequence> {
    if seq.len() != budgets.n {
        return Err(Error::InvalidArgument(format!(
            "sequence has length {}, budgets are for n = {}",
            seq.len(),
            budgets.n
        )));
    }
    if let Some(&a) = seq.iter().find(|&&a| a >= budgets.alphabet_size()) {
        return Err(Error::InvalidArgument(format!("symbol {a} outside the alphabet")));
    }
    Ok(map_unchecked(seq, budgets))
}

pub(crate) fn map_unchecked(seq: &[usize], budgets: &Budgets) -> MappedSequence {
    let t = &budgets.per_symbol;
    let mut used = vec![0usize; t.len()];
    let mut extra_used = 0usize;
    let mut flag = true;
    let mut output = Vec::with_capacity(seq.len());
    for &a in seq {
        if flag {
            if used[a] < t[a] {
                output.push(a);
                used[a] += 1;
                continue;
            }
            if extra_used < budgets.extra {
                output.push(budgets.padding());
                extra_used += 1;
                continue;
            }
            flag = false;
        }
        let alpha = (0..t.len())
            .find(|&b| used[b] < t[b])
            .expect("budgets cover every position");
        output.push(alpha);
        used[alpha] += 1;
    }
    MappedSequence { output, flag }
}

/// The mapping returns flag 1 exactly when every symbol count meets its budget.
pub fn flag_predicate(seq: &[usize], budgets: &Budgets) -> bool {
    let mut counts = vec![0usize; budgets.alphabet_size()];
    for &a in seq {
        counts[a] += 1;
    }
    counts.iter().zip(&budgets.per_symbol).all(|(c, t)| c >= t)
}

/// Strong typicality of a type: `|N(a) - m P(a)| <= eps m P(a)` for every `a`,
/// where `m = sum N(a)`. The empty sequence is typical.
pub fn is_typical_counts(counts: &[usize], dist: &[Rational], eps: &Rational) -> bool {
    let m: usize = counts.iter().sum();
    let m = Rational::from(m);
    counts.iter().zip(dist).all(|(&c, p)| {
        let expected = &m * p;
        (Rational::from(c) - &expected).abs() <= eps * &expected
    })
}

pub fn is_typical(seq: &[usize], dist: &[Rational], eps: &Rational) -> bool {
    let mut counts = vec![0usize; dist.len()];
    for &a in seq {
        counts[a] += 1;
    }
    is_typical_counts(&counts, dist, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn fig3_budgets() -> Budgets {
        // P = (3/5, 2/5), eps = 1/10 gives floor(5.4) = 5 and floor(3.6) = 3.
        budgets(10, &[r(3, 5), r(2, 5)], &r(1, 10)).unwrap()
    }

    #[test]
    fn budget_values() {
        let b = fig3_budgets();
        assert_eq!(b.per_symbol(), &[5, 3]);
        assert_eq!(b.extra(), 2);
        let b = budgets(4, &[r(1, 2), r(1, 2)], &r(1, 2)).unwrap();
        assert_eq!((b.per_symbol(), b.extra()), (&[1usize, 1][..], 2));
        assert!(budgets(4, &[r(1, 2), r(1, 2)], &r(0, 1)).is_err());
        assert!(budgets(4, &[r(1, 2), r(1, 2)], &r(1, 1)).is_err());
    }

    #[test]
    fn worked_example_instances() {
        let b = Budgets::from_counts(vec![5, 3], 10).unwrap();
        let phi = 2;
        let top = map_with_budgets(&[0, 1, 0, 0, 1, 1, 1, 0, 1, 0], &b).unwrap();
        assert_eq!(top.output, vec![0, 1, 0, 0, 1, 1, phi, 0, phi, 0]);
        assert!(top.flag);
        let bottom = map_with_budgets(&[0, 1, 0, 0, 1, 1, 1, 1, 1, 0], &b).unwrap();
        assert_eq!(bottom.output, vec![0, 1, 0, 0, 1, 1, phi, phi, 0, 0]);
        assert!(!bottom.flag);
        assert!(flag_predicate(&[0, 1, 0, 0, 1, 1, 1, 0, 1, 0], &b));
        assert!(!flag_predicate(&[0, 1, 0, 0, 1, 1, 1, 1, 1, 0], &b));
        assert_eq!(fig3_budgets(), b);
    }

    #[test]
    fn constant_input_full_budget() {
        let b = Budgets::from_counts(vec![0, 6], 6).unwrap();
        let m = map_with_budgets(&[1; 6], &b).unwrap();
        assert_eq!(m.output, vec![1; 6]);
        assert!(m.flag);
    }

    #[test]
    fn zero_budgets_always_flag() {
        let b = Budgets::from_counts(vec![0, 0, 0], 5).unwrap();
        for s in seq::all(3, 5) {
            assert!(flag_predicate(&s, &b));
            let m = map_with_budgets(&s, &b).unwrap();
            assert!(m.flag);
            assert!(m.output.iter().all(|&a| a == 3));
        }
    }

    #[test]
    fn bad_inputs() {
        let b = Budgets::from_counts(vec![1, 1], 3).unwrap();
        assert!(map_with_budgets(&[0, 1], &b).is_err());
        assert!(map_with_budgets(&[0, 2, 1], &b).is_err());
        assert!(Budgets::from_counts(vec![3, 1], 3).is_err());
    }

    #[test]
    fn typicality_checks() {
        let p = [r(1, 2), r(1, 2)];
        assert!(is_typical(&[0, 1, 0, 1], &p, &r(1, 10)));
        assert!(!is_typical(&[0, 0, 0, 1], &p, &r(1, 10)));
        assert!(is_typical(&[0, 0, 0, 1], &p, &r(1, 2)));
        // a zero-probability symbol may never appear
        assert!(!is_typical(&[0, 1], &[r(1, 1), r(0, 1)], &r(9, 10)));
        assert!(is_typical(&[], &p, &r(1, 10)));
    }

    fn dist_strategy(k: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(1i64..10, k).prop_map(|w| {
            let total: i64 = w.iter().sum();
            w.into_iter().map(|a| Rational::new(a, total)).collect()
        })
    }

    proptest! {
        #[test]
        fn budgets_partition_n(n in 1usize..60, dist in dist_strategy(3), e in 1i64..99) {
            let b = budgets(n, &dist, &Rational::new(e, 100)).unwrap();
            prop_assert_eq!(b.per_symbol().iter().sum::<usize>() + b.extra(), n);
        }

        #[test]
        fn output_type_fixed_and_flag_matches(
            dist in dist_strategy(3),
            e in 1i64..99,
            input in proptest::collection::vec(0usize..3, 1..40),
        ) {
            let b = budgets(input.len(), &dist, &Rational::new(e, 100)).unwrap();
            let m = map_with_budgets(&input, &b).unwrap();
            let counts = seq::type_counts(&m.output, 4);
            prop_assert_eq!(&counts[..3], b.per_symbol());
            prop_assert_eq!(counts[3], b.extra());
            prop_assert_eq!(m.flag, flag_predicate(&input, &b));
        }

        #[test]
        fn typical_input_flags(dist in dist_strategy(2), e in 1i64..99, input in proptest::collection::vec(0usize..2, 1..40)) {
            let eps = Rational::new(e, 100);
            let b = budgets(input.len(), &dist, &eps).unwrap();
            if is_typical(&input, &dist, &eps) {
                prop_assert!(map_with_budgets(&input, &b).unwrap().flag);
            }
        }
    }
}
