use crate::gaussian::{
    awgn, baseline_compare, corollary_sum_rate, diamond_achievable, log_grid, twr_achievable, twr_outer, write_compare_csv,
    GainSet, GaussianError,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

#[test]
fn outer_bound_examples() {
    let unit = GainSet::relay(1.0, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(twr_outer(&unit), (1.0, 1.0));
    let r3 = 3f64.sqrt();
    let (ab, ba) = twr_outer(&GainSet::relay(r3, r3, r3, r3).unwrap());
    assert!((ab - 2.0).abs() < TOL && (ba - 2.0).abs() < TOL);
    let (ab, ba) = twr_outer(&GainSet::relay(3.0, 7.0, 2.0, 5.0).unwrap());
    assert!((ab - 10f64.log2()).abs() < TOL);
    assert!((ba - 5f64.log2()).abs() < TOL);
}

#[test]
fn unit_weak_direction_leaves_one_bit_gap() {
    let r = twr_achievable(&GainSet::relay(1.0, 1.0, 1.0, 1.0).unwrap());
    assert_eq!(r.r_u, 0.0);
    assert!((r.gap_ba() - 1.0).abs() < TOL);
}

#[test]
fn stronger_backward_direction_exchanges_roles() {
    let h = GainSet::relay(2.0, 3.0, 40.0, 50.0).unwrap();
    let r = twr_achievable(&h);
    assert!(r.swapped);
    let s = twr_achievable(&h.swap_nodes());
    assert!(!s.swapped);
    assert!((r.r_ab - s.r_ba).abs() < TOL && (r.r_ba - s.r_ab).abs() < TOL);
}

#[test]
fn boundary_diamond_instance() {
    let r3 = 3f64.sqrt();
    let r = diamond_achievable(r3, 1.0, 1.0, r3).unwrap();
    assert!((r.outer - 2.0).abs() < TOL);
    assert!(r.r_total >= (r.outer - 4.0).max(0.0) - TOL);
    assert!((r.alpha_sq - 0.5).abs() < TOL);
}

#[test]
fn inadmissible_diamond_is_rejected() {
    assert!(matches!(diamond_achievable(1.0, 4.0, 4.0, 100.0), Err(GaussianError::Inadmissible { which: "a", .. })));
    assert!(matches!(diamond_achievable(100.0, 4.0, 4.0, 1.0), Err(GaussianError::Inadmissible { which: "d", .. })));
}

#[test]
fn corollary_examples() {
    let unit = corollary_sum_rate(&GainSet::new([1.0; 8]).unwrap());
    assert!((unit.raw + 1.0).abs() < TOL);
    assert_eq!(unit.rate, 0.0);
    let s = corollary_sum_rate(&GainSet::reciprocal(5000.0, 50.0).unwrap());
    let want = 2.0 * (1.0 + 5000f64 * 5000.0).log2() - 3.0;
    assert!((s.rate - want).abs() < TOL);
    assert!((s.rate - 46.15).abs() < 0.01);
}

#[test]
fn equal_gains_give_symmetric_baseline() {
    let rows = baseline_compare(7.0, 7.0, &[1.0, 3.0]).unwrap();
    for r in rows {
        let g = 7.0 * r.scale;
        assert!((r.baseline - 2.0 * (0.5 + g * g).log2()).abs() < TOL);
    }
    assert!(baseline_compare(0.0, 1.0, &[1.0]).is_err());
}

#[test]
fn compare_csv_has_fixed_columns() {
    let rows = baseline_compare(5000.0, 50.0, &log_grid(0.1, 10.0, 3)).unwrap();
    let mut buf = Vec::new();
    write_compare_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scale,cutset,ours,baseline,gap_ours,gap_baseline"));
    for (line, r) in lines.zip(&rows) {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(v.len(), 6);
        assert!((v[4] - r.gap_ours()).abs() < 1e-6);
    }
}

fn gain() -> impl Strategy<Value = f64> {
    (0.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn relay_rates_are_finite_and_non_negative(a in gain(), b in gain(), c in gain(), d in gain()) {
        let r = twr_achievable(&GainSet::relay(a, b, c, d).unwrap());
        for v in [r.r_u, r.r_v, r.r_ab, r.r_ba] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        prop_assert!(r.gap_ab().is_finite() && r.gap_ba().is_finite());
        prop_assert!(r.weaker_gap() <= 1.0 + TOL);
        prop_assert!(r.stronger_gap() <= 2.0 + TOL);
        prop_assert!(r.alpha2_feasible(TOL));
    }

    #[test]
    fn relay_rates_respect_their_bounds(a in gain(), b in gain(), c in gain(), d in gain()) {
        let r = twr_achievable(&GainSet::relay(a, b, c, d).unwrap());
        prop_assert!(r.raw_v <= r.bounds.r10 + TOL && r.raw_v <= r.bounds.r14 + TOL);
        if r.alpha1 > 0.0 {
            prop_assert!(r.raw_u <= r.bounds.r11 + TOL && r.raw_u <= r.bounds.r12 + TOL && r.raw_u <= r.bounds.r13 + TOL);
        }
    }

    #[test]
    fn doubling_adds_at_most_two_bits(h in gain()) {
        prop_assert!(awgn(2.0 * h) - awgn(h) <= 2.0 + TOL);
    }

    #[test]
    fn diamond_gap_within_four_bits(b in gain(), c in gain(), extra_a in 0.0f64..20.0, extra_d in 0.0f64..20.0) {
        let need = awgn(b) + awgn(c);
        let from_bits = |bits: f64| (2f64.powf(bits) - 1.0).sqrt();
        let (a, d) = (from_bits(need + extra_a), from_bits(need + extra_d));
        let r = diamond_achievable(a * (1.0 + 1e-12), b, c, d * (1.0 + 1e-12)).unwrap();
        prop_assert!(r.gap() <= 4.0 + TOL);
        prop_assert!(r.chains().iter().all(|ch| ch.holds(TOL)));
        prop_assert!(r.r_total >= 0.0);
    }

    #[test]
    fn strongest_path_ignores_weaker_relay(h1 in gain(), h2 in gain()) {
        let (hi, lo) = if h1 >= h2 { (h1, h2) } else { (h2, h1) };
        let both = corollary_sum_rate(&GainSet::reciprocal(hi, lo).unwrap());
        let one = corollary_sum_rate(&GainSet::reciprocal(hi, 0.0).unwrap());
        prop_assert!((both.raw - one.raw).abs() < TOL);
    }
}
