//! Statistical test battery: Shapiro-Wilk normality (Royston's AS R94
//! approximation), Levene's variance-equality test with group-mean
//! centering, the one/two-tailed Mann-Whitney U test (exact enumeration for
//! small samples, tie/continuity-corrected normal approximation otherwise),
//! and the stability comparison protocol that chains them.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, Normal};

use crate::error::{Error, Result};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    // coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapiroWilkResult {
    pub w: f64,
    pub p_value: f64,
}

/// Shapiro-Wilk W test for normality, AS R94 polynomial approximation.
/// Valid for 3 <= n <= 5000; zero-variance samples are rejected.
pub fn shapiro_wilk(sample: &[f64]) -> Result<ShapiroWilkResult> {
    let n = sample.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::Stats(format!(
            "shapiro-wilk requires 3 <= n <= 5000, got {n}"
        )));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("shapiro-wilk sample".into()));
    }
    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    if x[n - 1] - x[0] < 1e-19 {
        return Err(Error::Stats("shapiro-wilk undefined on zero-variance sample".into()));
    }

    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
    const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
    const G: [f64; 2] = [-2.273, 0.459];

    let norm = std_normal();
    let an = n as f64;
    let n2 = n / 2;

    // Half-sample weights: a[i] ends up as the positive weight of the
    // (i+1)-th order statistic from the top; the bottom half is its mirror.
    let mut a = vec![0.0; n2];
    if n == 3 {
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        let an25 = an + 0.25;
        let mut summ2 = 0.0;
        for (i, ai) in a.iter_mut().enumerate() {
            *ai = norm.inverse_cdf((i as f64 + 1.0 - 0.375) / an25); // negative half
            summ2 += *ai * *ai;
        }
        summ2 *= 2.0;
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / an.sqrt();
        let a1 = poly(&C1, rsn) - a[0] / ssumm2;
        let (i1, fac) = if n > 5 {
            let a2 = -a[1] / ssumm2 + poly(&C2, rsn);
            let fac = ((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            a[1] = a2;
            (2usize, fac)
        } else {
            let fac = ((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (1usize, fac)
        };
        a[0] = a1;
        for ai in a.iter_mut().skip(i1) {
            *ai = -*ai / fac;
        }
    }

    // W as the squared correlation between data and weights.
    let range = x[n - 1] - x[0];
    let weight = |i: usize| -> f64 {
        let j = n - 1 - i;
        if i < j {
            -a[i]
        } else if i > j {
            a[j]
        } else {
            0.0
        }
    };
    let mut sx = 0.0;
    let mut sa = 0.0;
    for (i, xi) in x.iter().enumerate() {
        sx += xi / range;
        sa += weight(i);
    }
    sx /= an;
    sa /= an;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, xi) in x.iter().enumerate() {
        let asa = weight(i) - sa;
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = (1.0 - w1).clamp(0.0, 1.0);

    let p_value = if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3;
        (pi6 * (w.sqrt().asin() - stqr)).clamp(0.0, 1.0)
    } else {
        let y = (1.0 - w).ln();
        if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                1e-19
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, an);
                let s = poly(&C4, an).exp();
                1.0 - norm.cdf((y - m) / s)
            }
        } else {
            let xx = an.ln();
            let m = poly(&C5, xx);
            let s = poly(&C6, xx).exp();
            1.0 - norm.cdf((y - m) / s)
        }
    };
    Ok(ShapiroWilkResult { w, p_value })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeveneResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Levene's test for equality of variances across two groups, with
/// group-mean centering; p from F(1, n1 + n2 - 2).
pub fn levene(sample1: &[f64], sample2: &[f64]) -> Result<LeveneResult> {
    let (n1, n2) = (sample1.len(), sample2.len());
    if n1 < 2 || n2 < 2 {
        return Err(Error::Stats("levene needs at least 2 observations per group".into()));
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let m1 = mean(sample1);
    let m2 = mean(sample2);
    let z1: Vec<f64> = sample1.iter().map(|v| (v - m1).abs()).collect();
    let z2: Vec<f64> = sample2.iter().map(|v| (v - m2).abs()).collect();
    let zb1 = mean(&z1);
    let zb2 = mean(&z2);
    let n = (n1 + n2) as f64;
    let zbar = (zb1 * n1 as f64 + zb2 * n2 as f64) / n;
    let numer = (n - 2.0) * (n1 as f64 * (zb1 - zbar).powi(2) + n2 as f64 * (zb2 - zbar).powi(2));
    let denom: f64 = z1.iter().map(|z| (z - zb1).powi(2)).sum::<f64>()
        + z2.iter().map(|z| (z - zb2).powi(2)).sum::<f64>();
    if denom <= 0.0 {
        // All within-group deviations identical: no evidence either way.
        return Ok(LeveneResult {
            statistic: 0.0,
            p_value: 1.0,
        });
    }
    let statistic = numer / denom;
    let f_dist = FisherSnedecor::new(1.0, n - 2.0)
        .map_err(|e| Error::Stats(format!("levene F distribution: {e}")))?;
    Ok(LeveneResult {
        statistic,
        p_value: 1.0 - f_dist.cdf(statistic),
    })
}

/// Which alternative the one-tailed Mann-Whitney test takes for sample 1
/// against sample 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Less,
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitneyResult {
    /// U statistic of sample 1.
    pub u: f64,
    pub p_value: f64,
    /// Whether the p-value came from exact enumeration.
    pub exact: bool,
}

/// Midranks (1-based) of the pooled sample, plus tie-group sizes.
fn midranks(pooled: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = pooled.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| pooled[i].partial_cmp(&pooled[j]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0; // mean of 1-based ranks i+1..=j+1
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact permutation distribution of the sample-1 U statistic, conditional
/// on the pooled values: all C(n, n1) label assignments enumerated.
/// Returns (u, probability) pairs over distinct achievable U values.
pub fn exact_u_distribution(pooled: &[f64], n1: usize) -> Result<Vec<(f64, f64)>> {
    let n = pooled.len();
    if n1 == 0 || n1 >= n {
        return Err(Error::Stats("exact U distribution needs 0 < n1 < n".into()));
    }
    let (ranks, _) = midranks(pooled);
    let base = (n1 * (n1 + 1)) as f64 / 2.0;
    let mut counts: std::collections::BTreeMap<i64, u64> = std::collections::BTreeMap::new();
    let mut idx: Vec<usize> = (0..n1).collect();
    let mut total = 0u64;
    loop {
        let r1: f64 = idx.iter().map(|&i| ranks[i]).sum();
        let u = r1 - base;
        // U values are multiples of 1/2; key on doubled integers.
        counts
            .entry((u * 2.0).round() as i64)
            .and_modify(|c| *c += 1)
            .or_insert(1);
        total += 1;
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(u2, c)| (u2 as f64 / 2.0, c as f64 / total as f64))
        .collect())
}

/// Mann-Whitney U test of sample 1 versus sample 2 with midrank ties.
/// Exact enumeration when n1 + n2 <= 20, otherwise a normal approximation
/// with tie correction and continuity correction.
pub fn mann_whitney_u(sample1: &[f64], sample2: &[f64], tail: Tail) -> Result<MannWhitneyResult> {
    let (n1, n2) = (sample1.len(), sample2.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::Stats("mann-whitney needs non-empty samples".into()));
    }
    if sample1.iter().chain(sample2).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("mann-whitney sample".into()));
    }
    let mut pooled = Vec::with_capacity(n1 + n2);
    pooled.extend_from_slice(sample1);
    pooled.extend_from_slice(sample2);
    let (ranks, ties) = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;

    if n1 + n2 <= 20 {
        let dist = exact_u_distribution(&pooled, n1)?;
        let eps = 1e-9;
        let p = match tail {
            Tail::Less => dist
                .iter()
                .filter(|(u, _)| *u <= u1 + eps)
                .map(|(_, p)| p)
                .sum(),
            Tail::Greater => dist
                .iter()
                .filter(|(u, _)| *u >= u1 - eps)
                .map(|(_, p)| p)
                .sum(),
        };
        Ok(MannWhitneyResult {
            u: u1,
            p_value: p,
            exact: true,
        })
    } else {
        let n = (n1 + n2) as f64;
        let mu = (n1 * n2) as f64 / 2.0;
        let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
        let sigma2 = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
        if sigma2 <= 0.0 {
            // Every pooled value identical: no separation at all.
            return Ok(MannWhitneyResult {
                u: u1,
                p_value: 1.0,
                exact: false,
            });
        }
        let sigma = sigma2.sqrt();
        let norm = std_normal();
        let p = match tail {
            Tail::Less => norm.cdf((u1 - mu + 0.5) / sigma),
            Tail::Greater => 1.0 - norm.cdf((u1 - mu - 0.5) / sigma),
        };
        Ok(MannWhitneyResult {
            u: u1,
            p_value: p.clamp(0.0, 1.0),
            exact: false,
        })
    }
}

/// Per-group summary in the stability report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub shapiro_w: f64,
    pub shapiro_p: f64,
}

fn summarize(label: &str, sample: &[f64]) -> Result<GroupSummary> {
    if sample.is_empty() {
        return Err(Error::Stats(format!("stability group {label} is empty")));
    }
    let n = sample.len();
    let mean = sample.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (sample.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let sw = shapiro_wilk(sample)?;
    Ok(GroupSummary {
        n,
        mean,
        sd,
        shapiro_w: sw.w,
        shapiro_p: sw.p_value,
    })
}

/// Which hypothesis the protocol accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    AMoreStable,
    ALessStable,
    NullRetained,
}

impl std::fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StabilityVerdict::AMoreStable => {
                write!(f, "alternative accepted: group A more stable (lower dispersion)")
            }
            StabilityVerdict::ALessStable => {
                write!(f, "alternative accepted: group A less stable (higher dispersion)")
            }
            StabilityVerdict::NullRetained => write!(f, "null hypothesis retained"),
        }
    }
}

/// Full comparison report: group means/SDs, normality p per group,
/// variance-equality statistic/p, and the one-tailed U test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityTestReport {
    pub group_a: GroupSummary,
    pub group_b: GroupSummary,
    pub levene_statistic: f64,
    pub levene_p: f64,
    pub u_statistic: f64,
    pub p_value: f64,
    pub tail: Tail,
    pub alpha: f64,
    pub verdict: StabilityVerdict,
    pub verdict_text: String,
}

/// Runs normality checks on both dispersion series, the variance-equality
/// test, then a one-tailed two-sample U test whose direction comes from the
/// sample means: the alternative always points toward the observed ordering,
/// so a significant result certifies the group with the smaller mean
/// dispersion as the more stable one.
pub fn stability_protocol(
    dispersion_a: &[f64],
    dispersion_b: &[f64],
    alpha: f64,
) -> Result<StabilityTestReport> {
    let group_a = summarize("A", dispersion_a)?;
    let group_b = summarize("B", dispersion_b)?;
    let lev = levene(dispersion_a, dispersion_b)?;
    let tail = if group_a.mean <= group_b.mean {
        Tail::Less
    } else {
        Tail::Greater
    };
    let mw = mann_whitney_u(dispersion_a, dispersion_b, tail)?;
    let verdict = if mw.p_value < alpha {
        match tail {
            Tail::Less => StabilityVerdict::AMoreStable,
            Tail::Greater => StabilityVerdict::ALessStable,
        }
    } else {
        StabilityVerdict::NullRetained
    };
    Ok(StabilityTestReport {
        group_a,
        group_b,
        levene_statistic: lev.statistic,
        levene_p: lev.p_value,
        u_statistic: mw.u,
        p_value: mw.p_value,
        tail,
        alpha,
        verdict,
        verdict_text: verdict.to_string(),
    })
}
