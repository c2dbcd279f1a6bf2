//! Closed-form rates and gaps for the Gaussian two-way relay channel, the
//! symmetric two-way Gaussian diamond channel, the strongest-path sum rate
//! and its comparison against the cut-set bound and a prior scheme.
//!
//! All logarithms are base 2. Gains are amplitudes under unit transmit
//! power and unit noise.

use std::io::Write;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GaussianError {
    #[error("gain {name} = {value} is not a finite non-negative number")]
    BadGain { name: &'static str, value: f64 },
    #[error("expected {expected} comma-separated gains, got {got}")]
    Arity { expected: &'static str, got: usize },
    #[error("cannot parse gain `{0}`")]
    Parse(String),
    #[error("inadmissible gains: log(1+{which}^2) = {lhs:.6} is below log(1+c^2)+log(1+b^2) = {rhs:.6}")]
    Inadmissible { which: &'static str, lhs: f64, rhs: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub fn log2(x: f64) -> f64 {
    x.log2()
}

/// `log(1 + h^2)`.
pub fn awgn(h: f64) -> f64 {
    (h * h).ln_1p() / std::f64::consts::LN_2
}

/// Channel amplitudes of the two-way diamond; relay 2's gains are zero for
/// a two-way relay channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GainSet {
    pub h_a1: f64,
    pub h_a2: f64,
    pub h_1b: f64,
    pub h_2b: f64,
    pub h_b1: f64,
    pub h_b2: f64,
    pub h_1a: f64,
    pub h_2a: f64,
}

const NAMES: [&str; 8] = ["hA1", "hA2", "h1B", "h2B", "hB1", "hB2", "h1A", "h2A"];

impl GainSet {
    /// Gains in the order hA1, hA2, h1B, h2B, hB1, hB2, h1A, h2A.
    pub fn new(g: [f64; 8]) -> Result<Self, GaussianError> {
        for (name, &value) in NAMES.iter().zip(&g) {
            if !value.is_finite() || value < 0.0 {
                return Err(GaussianError::BadGain { name, value });
            }
        }
        let [h_a1, h_a2, h_1b, h_2b, h_b1, h_b2, h_1a, h_2a] = g;
        Ok(GainSet { h_a1, h_a2, h_1b, h_2b, h_b1, h_b2, h_1a, h_2a })
    }

    /// A two-way relay channel through relay 1.
    pub fn relay(h_a1: f64, h_1b: f64, h_b1: f64, h_1a: f64) -> Result<Self, GaussianError> {
        GainSet::new([h_a1, 0.0, h_1b, 0.0, h_b1, 0.0, h_1a, 0.0])
    }

    /// Reciprocal symmetric diamond: (hA1, hA2, h1B, h2B) = (hB1, hB2, h1A, h2A) = (a, b, c, d).
    pub fn symmetric(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GaussianError> {
        GainSet::new([a, b, c, d, a, b, c, d])
    }

    /// Every link of relay `i` has gain `h_i`.
    pub fn reciprocal(h1: f64, h2: f64) -> Result<Self, GaussianError> {
        GainSet::new([h1, h2, h1, h2, h1, h2, h1, h2])
    }

    pub fn as_array(&self) -> [f64; 8] {
        [self.h_a1, self.h_a2, self.h_1b, self.h_2b, self.h_b1, self.h_b2, self.h_1a, self.h_2a]
    }

    /// The same channel with the roles of A and B exchanged.
    pub fn swap_nodes(&self) -> GainSet {
        GainSet {
            h_a1: self.h_b1,
            h_a2: self.h_b2,
            h_1b: self.h_1a,
            h_2b: self.h_2a,
            h_b1: self.h_a1,
            h_b2: self.h_a2,
            h_1a: self.h_1b,
            h_2a: self.h_2b,
        }
    }

    /// Bottleneck amplitude A to B through relay 1.
    pub fn h_ab(&self) -> f64 {
        self.h_a1.min(self.h_1b)
    }

    /// Bottleneck amplitude B to A through relay 1.
    pub fn h_ba(&self) -> f64 {
        self.h_b1.min(self.h_1a)
    }
}

impl FromStr for GainSet {
    type Err = GaussianError;

    /// Eight gains, or four relay-channel gains hA1,h1B,hB1,h1A.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_reals(s)?;
        match v.len() {
            8 => GainSet::new(v.try_into().expect("length checked")),
            4 => GainSet::relay(v[0], v[1], v[2], v[3]),
            n => Err(GaussianError::Arity { expected: "4 or 8", got: n }),
        }
    }
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>, GaussianError> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| GaussianError::Parse(t.trim().to_string()))).collect()
}

/// Cut-set bound of the two-way relay channel through relay 1:
/// `(log(1+h_AB^2), log(1+h_BA^2))`.
pub fn twr_outer(h: &GainSet) -> (f64, f64) {
    (awgn(h.h_ab()), awgn(h.h_ba()))
}

/// Right-hand sides of the five rate constraints of the relay scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayBounds {
    /// Private part decoded at the relay with the lattice sum as noise.
    pub r10: f64,
    /// Lattice sum at the relay.
    pub r11: f64,
    /// Lattice sum at the stronger destination.
    pub r12: f64,
    /// Lattice sum at the weaker destination.
    pub r13: f64,
    /// Private part at the stronger destination.
    pub r14: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayRates {
    /// Common (lattice) rate, clamped at 0.
    pub r_u: f64,
    /// Private rate of the stronger direction, clamped at 0.
    pub r_v: f64,
    pub raw_u: f64,
    pub raw_v: f64,
    /// Rates in the caller's orientation.
    pub r_ab: f64,
    pub r_ba: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub bounds: RelayBounds,
    /// True when B to A was the stronger direction and roles were exchanged.
    pub swapped: bool,
    /// Outer bound in the caller's orientation.
    pub outer: (f64, f64),
    /// Window for the power split: lower limits from the two destinations
    /// and the upper limit, in the exchanged orientation.
    pub alpha2_min_b: f64,
    pub alpha2_min_a: f64,
    pub alpha2_max: f64,
}

impl RelayRates {
    pub fn gap_ab(&self) -> f64 {
        self.outer.0 - self.r_ab
    }

    pub fn gap_ba(&self) -> f64 {
        self.outer.1 - self.r_ba
    }

    /// Gap of the direction with the smaller bottleneck.
    pub fn weaker_gap(&self) -> f64 {
        if self.swapped { self.gap_ab() } else { self.gap_ba() }
    }

    pub fn stronger_gap(&self) -> f64 {
        if self.swapped { self.gap_ba() } else { self.gap_ab() }
    }

    /// Whether `alpha2` is in `[0, 1]` and inside its window, up to `tol`.
    pub fn alpha2_feasible(&self, tol: f64) -> bool {
        let a = self.alpha2;
        (-tol..=1.0 + tol).contains(&a) && a >= self.alpha2_min_b - tol && a >= self.alpha2_min_a - tol && a <= self.alpha2_max + tol
    }
}

fn zero_weak(h: f64) -> f64 {
    if h < 1.0 { 0.0 } else { h }
}

/// Achievable rates of the lattice-plus-superposition scheme on the
/// two-way relay channel through relay 1. Gains below 1 are treated as 0.
pub fn twr_achievable(h: &GainSet) -> RelayRates {
    let outer = twr_outer(h);
    let z = GainSet::relay(zero_weak(h.h_a1), zero_weak(h.h_1b), zero_weak(h.h_b1), zero_weak(h.h_1a)).expect("gains already validated");
    let swapped = z.h_ba() > z.h_ab();
    let g = if swapped { z.swap_nodes() } else { z };
    let (hab, hba) = (g.h_ab(), g.h_ba());
    let (ha1, h1b, h1a) = (g.h_a1, g.h_1b, g.h_1a);
    let (hab2, hba2) = (hab * hab, hba * hba);
    let f = |x: f64| (1.0 + x * x) * (hba2 - 1.0) / (x * x * (1.0 + hba2));
    let (alpha1, alpha2) = if hba == 0.0 { (0.0, 0.0) } else { (hba2 / (ha1 * ha1), f(h1a.min(h1b))) };
    let common = |x: f64| log2(1.0 + alpha2 * x * x / (1.0 + (1.0 - alpha2) * x * x));
    let r10 = if ha1 == 0.0 { 0.0 } else { log2(1.0 + (1.0 - alpha1) * ha1 * ha1 / (1.0 + 2.0 * hba2)) };
    let bounds = RelayBounds {
        r10,
        r11: log2(hba2),
        r12: common(h1b),
        r13: common(h1a),
        r14: log2(1.0 + (1.0 - alpha2) * h1b * h1b),
    };
    let (raw_u, raw_v) = if hba == 0.0 {
        (0.0, bounds.r10.min(bounds.r14))
    } else {
        (bounds.r11.min(bounds.r12).min(bounds.r13), bounds.r10.min(bounds.r14))
    };
    let (r_u, r_v) = (raw_u.max(0.0), raw_v.max(0.0));
    let (strong, weak) = (r_u + r_v, r_u);
    let (r_ab, r_ba) = if swapped { (weak, strong) } else { (strong, weak) };
    let window = |x: f64| if x == 0.0 || hba == 0.0 { 0.0 } else { f(x) };
    let alpha2_max = if h1b == 0.0 {
        1.0
    } else {
        (2.0 * (1.0 + h1b * h1b) * (1.0 + hba2) - (1.0 + hab2)) / (2.0 * h1b * h1b * (1.0 + hba2))
    };
    RelayRates {
        r_u,
        r_v,
        raw_u,
        raw_v,
        r_ab,
        r_ba,
        alpha1,
        alpha2,
        bounds,
        swapped,
        outer,
        alpha2_min_b: window(h1b),
        alpha2_min_a: window(h1a),
        alpha2_max,
    }
}

/// Whether `(a, b, c, d)` satisfies both conditions of the symmetric diamond scheme.
pub fn diamond_admissible(a: f64, b: f64, c: f64, d: f64) -> Result<(), GaussianError> {
    let rhs = awgn(c) + awgn(b);
    for (which, v) in [("a", a), ("d", d)] {
        let lhs = awgn(v);
        if lhs < rhs {
            return Err(GaussianError::Inadmissible { which, lhs, rhs });
        }
    }
    Ok(())
}

/// One link of a proof chain: a bound's right-hand side and the lower
/// limit the chain derives for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub name: &'static str,
    pub value: f64,
    pub lower: f64,
}

impl ChainCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.value >= self.lower - tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondRates {
    pub r_u: f64,
    pub r_v: f64,
    /// `r_u + r_v`, the rate in each direction.
    pub r_total: f64,
    pub raw_u: f64,
    pub raw_v: f64,
    pub alpha_sq: f64,
    /// Right-hand sides g1 to g5.
    pub g: [f64; 5],
    /// `log(1+c^2) + log(1+b^2)`.
    pub outer: f64,
    pub inputs: [f64; 4],
}

impl DiamondRates {
    pub fn gap(&self) -> f64 {
        self.outer - self.r_total
    }

    /// The lower limits for g2, g3, g1 and g4 used to bound the gap by 4 bits.
    pub fn chains(&self) -> [ChainCheck; 4] {
        let [_, b, c, _] = self.inputs;
        let [g1, g2, g3, g4, _] = self.g;
        [
            ChainCheck { name: "g2", value: g2, lower: awgn(b) - 1.0 - 3f64.log2() },
            ChainCheck { name: "g3", value: g3, lower: awgn(c) - 1.0 },
            ChainCheck { name: "g1", value: g1, lower: awgn(b) - 3.0 },
            ChainCheck { name: "g4", value: g4, lower: awgn(b) },
        ]
    }
}

/// Rates of the two-lattice scheme on the symmetric diamond with gains
/// `(a, b, c, d)`.
pub fn diamond_achievable(a: f64, b: f64, c: f64, d: f64) -> Result<DiamondRates, GaussianError> {
    GainSet::symmetric(a, b, c, d)?;
    diamond_admissible(a, b, c, d)?;
    let alpha_sq = b * b / (1.0 + b * b);
    let beta = 1.0 - alpha_sq;
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let g1 = log2(alpha_sq * b2 / (beta * b2 + 1.0));
    let g2 = log2(alpha_sq * a2 / (2.0 * beta * a2 + 1.0));
    let g3 = log2(beta * a2);
    let g4 = if c2 == 0.0 { f64::INFINITY } else { log2(1.0 + d2 / c2) };
    let g5 = awgn(c);
    let raw_u = g2.min(g1).min(g4);
    let raw_v = g3.min(g5);
    let (r_u, r_v) = (raw_u.max(0.0), raw_v.max(0.0));
    Ok(DiamondRates {
        r_u,
        r_v,
        r_total: r_u + r_v,
        raw_u,
        raw_v,
        alpha_sq,
        g: [g1, g2, g3, g4, g5],
        outer: awgn(c) + awgn(b),
        inputs: [a, b, c, d],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRate {
    pub raw: f64,
    /// `raw` clamped at 0.
    pub rate: f64,
}

/// Sum rate using only the strongest relay in each direction.
pub fn corollary_sum_rate(h: &GainSet) -> SumRate {
    let ab = awgn(h.h_a1).min(awgn(h.h_1b)).max(awgn(h.h_a2).min(awgn(h.h_2b)));
    let ba = awgn(h.h_b1).min(awgn(h.h_1a)).max(awgn(h.h_b2).min(awgn(h.h_2a)));
    let raw = ab + ba - 3.0;
    SumRate { raw, rate: raw.max(0.0) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub scale: f64,
    pub cutset: f64,
    pub ours: f64,
    pub ours_raw: f64,
    pub baseline: f64,
}

impl CompareRow {
    pub fn gap_ours(&self) -> f64 {
        self.cutset - self.ours
    }

    pub fn gap_baseline(&self) -> f64 {
        self.cutset - self.baseline
    }
}

/// `n` points from `lo` to `hi`, evenly spaced in log scale.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// Sum-rate cut-set bound, strongest-path rate and the prior baseline for
/// the reciprocal diamond with gains `h1 s` and `h2 s` at each scale `s`.
pub fn baseline_compare(h1: f64, h2: f64, scales: &[f64]) -> Result<Vec<CompareRow>, GaussianError> {
    if !(h1 > 0.0 && h2 > 0.0) {
        return Err(GaussianError::Invalid(format!("gains must be positive, got h1={h1} h2={h2}")));
    }
    scales
        .iter()
        .map(|&s| {
            let (g1, g2) = (h1 * s, h2 * s);
            let ours = corollary_sum_rate(&GainSet::reciprocal(g1, g2)?);
            Ok(CompareRow {
                scale: s,
                cutset: 2.0 * log2(1.0 + g1 * g1 + g2 * g2),
                ours: ours.rate,
                ours_raw: ours.raw,
                baseline: log2(0.5 + g1 * g1) + log2(0.5 + g2 * g2),
            })
        })
        .collect()
}

/// Writes rows under the header `scale,cutset,ours,baseline,gap_ours,gap_baseline`.
pub fn write_compare_csv<W: Write>(rows: &[CompareRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scale", "cutset", "ours", "baseline", "gap_ours", "gap_baseline"])?;
    for r in rows {
        w.write_record(
            [r.scale, r.cutset, r.ours, r.baseline, r.gap_ours(), r.gap_baseline()].iter().map(|v| format!("{v:.6}")),
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_bound_values() {
        let h = GainSet::relay(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(twr_outer(&h), (1.0, 1.0));
        let r3 = 3f64.sqrt();
        let (ab, ba) = twr_outer(&GainSet::relay(r3, r3, r3, r3).unwrap());
        assert!((ab - 2.0).abs() < 1e-12 && (ba - 2.0).abs() < 1e-12);
        let (ab, ba) = twr_outer(&GainSet::relay(10.0, 3.0, 2.0, 7.0).unwrap());
        assert!((ab - 10f64.log2()).abs() < 1e-12);
        assert!((ba - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn unit_gains_give_gap_one() {
        let r = twr_achievable(&GainSet::relay(1.0, 1.0, 1.0, 1.0).unwrap());
        assert_eq!(r.r_u, 0.0);
        assert!((r.gap_ba() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swapping_nodes_exchanges_rates() {
        let h = GainSet::relay(3.0, 4.0, 20.0, 30.0).unwrap();
        let r = twr_achievable(&h);
        assert!(r.swapped);
        let s = twr_achievable(&h.swap_nodes());
        assert!(!s.swapped);
        assert!((r.r_ab - s.r_ba).abs() < 1e-12 && (r.r_ba - s.r_ab).abs() < 1e-12);
    }

    #[test]
    fn weak_links_are_dropped() {
        let r = twr_achievable(&GainSet::relay(8.0, 6.0, 0.5, 9.0).unwrap());
        assert_eq!(r.r_ba, 0.0);
        assert!((r.r_ab - awgn(6.0)).abs() < 1e-12);
    }

    #[test]
    fn diamond_boundary_instance() {
        let r3 = 3f64.sqrt();
        let d = diamond_achievable(r3, 1.0, 1.0, r3).unwrap();
        assert!((d.outer - 2.0).abs() < 1e-12);
        assert!(d.r_total >= 0.0 && d.gap() <= 4.0);
        assert!((d.alpha_sq - 0.5).abs() < 1e-12);
        assert!(matches!(diamond_achievable(1.0, 1.0, 1.0, 10.0), Err(GaussianError::Inadmissible { which: "a", .. })));
    }

    #[test]
    fn corollary_examples() {
        let s = corollary_sum_rate(&GainSet::reciprocal(1.0, 1.0).unwrap());
        assert_eq!((s.raw, s.rate), (-1.0, 0.0));
        let s = corollary_sum_rate(&GainSet::reciprocal(5000.0, 50.0).unwrap());
        let want = 2.0 * (1.0f64 + 25e6).log2() - 3.0;
        assert!((s.raw - want).abs() < 1e-9 && (s.raw - 46.15).abs() < 0.01);
        let weak_off = corollary_sum_rate(&GainSet::reciprocal(5000.0, 0.0).unwrap());
        assert_eq!(weak_off, s);
    }

    #[test]
    fn compare_csv_header_and_symmetry() {
        let rows = baseline_compare(7.0, 7.0, &[1.0]).unwrap();
        assert!((rows[0].baseline - 2.0 * log2(49.5)).abs() < 1e-12);
        let mut buf = Vec::new();
        write_compare_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("scale,cutset,ours,baseline,gap_ours,gap_baseline\n"));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1.0, 1000.0, 4);
        assert_eq!(g.len(), 4);
        assert!((g[1] - 10.0).abs() < 1e-9 && (g[3] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn parses_four_or_eight_gains() {
        let g: GainSet = "1,2,3,4".parse().unwrap();
        assert_eq!((g.h_a1, g.h_1b, g.h_b1, g.h_1a), (1.0, 2.0, 3.0, 4.0));
        assert!("1,2,3".parse::<GainSet>().is_err());
        assert!("1,2,3,x".parse::<GainSet>().is_err());
        assert!("1,2,3,4,5,6,7,-1".parse::<GainSet>().is_err());
    }
}
