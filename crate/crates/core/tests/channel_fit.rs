use skagree_core::channel::{exponential_pdp, sample_channel};
use skagree_core::ofdm::Link;
use skagree_core::outage::ks_distance;
use skagree_core::SeededRng;

#[test]
fn tap_powers_are_exponential() {
    let pdp = exponential_pdp(3, -10.0, 0.5).unwrap();
    let mut rng = SeededRng::new(77);
    let n = 100_000;
    let mut power: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(n)).collect();
    for _ in 0..n {
        let g = sample_channel(&pdp, Link::Eavesdropper, &mut rng);
        for (i, t) in g.taps().iter().enumerate() {
            power[i].push(t.norm_sqr());
        }
    }
    // asymptotic one-sample KS critical value at the 1% level
    let critical = 1.6276 / (n as f64).sqrt();
    for (i, mut samples) in power.into_iter().enumerate() {
        samples.sort_by(f64::total_cmp);
        let mean = pdp.powers()[i];
        let d = ks_distance(&samples, |x| 1.0 - (-x / mean).exp());
        assert!(d < critical, "tap {i}: D = {d}, critical {critical}");
    }
}

#[test]
fn distinct_taps_are_uncorrelated() {
    let pdp = exponential_pdp(5, 0.0, 0.3).unwrap();
    let mut rng = SeededRng::new(78);
    let n = 100_000;
    let mut acc = vec![vec![num_complex::Complex64::new(0.0, 0.0); 5]; 5];
    for _ in 0..n {
        let g = sample_channel(&pdp, Link::Legitimate, &mut rng);
        let t = g.taps();
        for i in 0..5 {
            for j in 0..i {
                acc[i][j] += t[i] * t[j].conj();
            }
        }
    }
    let p = pdp.powers();
    for i in 0..5 {
        for j in 0..i {
            let c = acc[i][j].norm() / n as f64;
            assert!(c < 0.02 * (p[i] * p[j]).sqrt(), "taps {i},{j}: {c}");
        }
    }
}
