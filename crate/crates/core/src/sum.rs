use crate::Real;

/// Pairwise (cascade) summation.
///
/// The reduction tree depends only on the length of the input, so results
/// are bit-for-bit reproducible for a given ordering.
pub fn pairwise_sum<R: Real>(xs: &[R]) -> R {
    match xs.len() {
        0 => R::zero(),
        n if n <= 8 => {
            let mut acc = xs[0].clone();
            for x in &xs[1..] {
                acc = acc + x.clone();
            }
            acc
        }
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_small_and_large() {
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }

    #[test]
    fn beats_naive_on_many_tenths() {
        let v = vec![0.1f64; 1 << 20];
        let naive: f64 = v.iter().sum();
        let exact = 0.1 * (1 << 20) as f64;
        assert!((pairwise_sum(&v) - exact).abs() <= (naive - exact).abs());
    }
}
