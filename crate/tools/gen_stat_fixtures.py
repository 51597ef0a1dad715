"""Regenerates the frozen statistical-test reference fixtures (Rust module).

The engine's Shapiro-Wilk, Levene and Mann-Whitney implementations are
validated against these values at 1e-4/1e-6; regenerate only if the fixture
set needs to change, then re-run the test suite.
"""
import numpy as np
from scipy import stats

rng = np.random.default_rng(20240811)

def fmt(a):
    return "&[" + ", ".join(repr(float(x)) for x in a) + "]"

out = []
out.append("// Reference values for the statistical tests, precomputed with an")
out.append("// independent implementation and frozen. Each tuple pairs raw samples")
out.append("// with the expected statistic and p-value.")
out.append("")
out.append("/// (sample, W, p)")
out.append("pub const SHAPIRO_WILK_CASES: &[(&[f64], f64, f64)] = &[")
sw_samples = [
    rng.normal(0, 1, 3),
    rng.normal(5, 2, 5),
    rng.exponential(1.0, 8),
    rng.uniform(-1, 1, 12),
    rng.normal(0, 1, 20),
    rng.exponential(2.0, 30),
    np.concatenate([rng.normal(0, 1, 25), rng.normal(6, 1, 25)]),
    rng.normal(-3, 0.5, 100),
    rng.uniform(0, 10, 11),
    rng.standard_t(3, 60),
]
for s in sw_samples:
    w, p = stats.shapiro(s)
    out.append(f"    ({fmt(s)}, {float(w)!r}, {float(p)!r}),")
out.append("];")
out.append("")
out.append("/// (sample_a, sample_b, W, p) with group-mean centering")
out.append("pub const LEVENE_CASES: &[(&[f64], &[f64], f64, f64)] = &[")
lv_pairs = [
    (rng.normal(0, 1, 10), rng.normal(0, 1, 12)),
    (rng.normal(0, 1, 30), rng.normal(0, 3, 30)),
    (rng.exponential(1, 15), rng.exponential(5, 20)),
    (rng.uniform(0, 1, 50), rng.uniform(0, 1, 40)),
    (rng.normal(2, 0.1, 8), rng.normal(2, 2.5, 9)),
    (rng.standard_t(4, 25), rng.normal(0, 1, 25)),
    (rng.normal(0, 1, 100), rng.normal(0, 1.5, 100)),
    (rng.uniform(-2, 2, 12), rng.normal(0, 0.2, 12)),
    (rng.exponential(0.5, 40), rng.uniform(0, 4, 35)),
    (rng.normal(10, 5, 60), rng.normal(10, 5, 55)),
]
for a, b in lv_pairs:
    w, p = stats.levene(a, b, center="mean")
    out.append(f"    ({fmt(a)}, {fmt(b)}, {float(w)!r}, {float(p)!r}),")
out.append("];")
out.append("")
out.append('/// (sample_a, sample_b, tail "less"/"greater", U, p)')
out.append("pub const MANN_WHITNEY_CASES: &[(&[f64], &[f64], &str, f64, f64)] = &[")
mw_cases = [
    (np.array([1.0, 2.0]), np.array([3.0, 4.0]), "less"),
    (np.array([1.0, 2.0]), np.array([3.0, 4.0]), "greater"),
    (rng.normal(0, 1, 8), rng.normal(1, 1, 9), "less"),
    (rng.normal(0, 1, 6), rng.normal(0, 1, 7), "greater"),
    (rng.normal(0, 1, 40), rng.normal(0.5, 1, 45), "less"),
    (rng.normal(0, 1, 60), rng.normal(0, 1, 50), "greater"),
    (np.round(rng.normal(0, 1, 30), 1), np.round(rng.normal(0.3, 1, 35), 1), "less"),
    (np.round(rng.normal(0, 1, 26), 1), np.round(rng.normal(0.0, 1, 28), 1), "greater"),
]
for a, b, alt in mw_cases:
    n = len(a) + len(b)
    method = "exact" if n <= 20 else "asymptotic"
    r = stats.mannwhitneyu(a, b, alternative=alt, method=method)
    out.append(f'    ({fmt(a)}, {fmt(b)}, "{alt}", {float(r.statistic)!r}, {float(r.pvalue)!r}),')
out.append("];")

import pathlib
out_path = pathlib.Path(__file__).resolve().parent.parent / "crates/core/src/metrics/reference_fixtures.rs"
with open(out_path, "w") as f:
    f.write("\n".join(out) + "\n")
print("written", len("\n".join(out)), "bytes")
