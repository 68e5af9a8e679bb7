//! Mixed-radix indexing of fixed-length sequences.
//!
//! A sequence `a_1 .. a_n` over an alphabet of size `k` is packed as
//! `sum_i a_i k^(n-i)`, so the first symbol is the most significant digit and
//! iteration order is lexicographic.

/// `k^n`, or `None` on overflow.
pub fn count(k: usize, n: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

pub fn decode(mut index: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    decode_into(&mut index, k, &mut out);
    out
}

pub fn decode_into(index: &mut usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = *index % k;
        *index /= k;
    }
}

pub fn encode(seq: &[usize], k: usize) -> usize {
    seq.iter().fold(0, |acc, &a| acc * k + a)
}

/// All sequences of length `n` over `0..k`, in lexicographic order.
pub fn all(k: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = count(k, n).expect("sequence space overflows usize");
    (0..total).map(move |i| decode(i, k, n))
}

/// Symbol counts of `seq` over `0..k`.
pub fn type_counts(seq: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for &a in seq {
        counts[a] += 1;
    }
    counts
}

/// Render a sequence as a compact digit string (`0110`); symbols above 9 are
/// comma separated instead.
pub fn render(seq: &[usize]) -> String {
    if seq.iter().all(|&a| a < 10) {
        seq.iter().map(|a| char::from(b'0' + *a as u8)).collect()
    } else {
        seq.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for (i, s) in all(3, 4).enumerate() {
            assert_eq!(encode(&s, 3), i);
        }
        assert_eq!(decode(5, 2, 3), vec![1, 0, 1]);
        assert_eq!(count(2, 64), None);
        assert_eq!(render(&[0, 1, 1]), "011");
    }
}
