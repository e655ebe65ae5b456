//! Kolmogorov-Smirnov statistics (statistic only, no p-values).

/// Two-sample KS statistic: sup |F_a - F_b| over the pooled support.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs non-empty samples");
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    sb.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while ia < sa.len() && ib < sb.len() {
        let x = sa[ia].min(sb[ib]);
        while ia < sa.len() && sa[ia] <= x {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x {
            ib += 1;
        }
        d = d.max((ia as f64 / na - ib as f64 / nb).abs());
    }
    d
}

/// One-sample KS statistic against an analytic CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sample.is_empty(), "KS needs a non-empty sample");
    let mut s = sample.to_vec();
    s.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn disjoint_samples_have_distance_one() {
        let a = [1.0, 2.0];
        let b = [10.0, 20.0];
        assert_eq!(ks_two_sample(&a, &b), 1.0);
    }

    #[test]
    fn uniform_sample_against_uniform_cdf() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let sample: Vec<f64> = (0..50_000).map(|_| rng.gen::<f64>()).collect();
        let d = ks_one_sample(&sample, |x| x.clamp(0.0, 1.0));
        // 1.36/sqrt(n) ~ 0.006 at the 5% level
        assert!(d < 0.01, "KS = {d}");
        let d2 = ks_two_sample(
            &sample[..25_000],
            &sample[25_000..],
        );
        assert!(d2 < 0.02, "two-sample KS = {d2}");
    }

    #[test]
    fn detects_shifted_distribution() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(12);
        let a: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>() + 0.3).collect();
        assert!(ks_two_sample(&a, &b) > 0.25);
    }
}
