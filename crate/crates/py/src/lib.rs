//! Python bindings: the accounting primitives, metrics, statistical tests,
//! baselines, the synthetic market generator, and the stage runner.

use pyo3::exceptions::{PyFileNotFoundError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;
use pyo3::types::{PyDict, PyList};

use mspm_core::error::Error;

fn to_py_err(e: Error) -> PyErr {
    match &e {
        Error::Config(_) | Error::Validation(_) | Error::CsvRow { .. } | Error::ShapeMismatch(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Io { .. } | Error::Prerequisite(_) => PyFileNotFoundError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_py_any(py)?,
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)?
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)?
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py)?,
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)?
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_py_any(py)?
        }
    })
}



// --- accounting -----------------------------------------------------------

/// Relative price vector with the cash slot prepended.
#[pyfunction]
fn relative_price_vector(prev_closes: Vec<f64>, closes: Vec<f64>) -> PyResult<Vec<f64>> {
    mspm_core::sam::relative_price_vector(&prev_closes, &closes).map_err(to_py_err)
}

/// Weights after intra-period price drift.
#[pyfunction]
fn drift_weights(action: Vec<f64>, y: Vec<f64>) -> PyResult<Vec<f64>> {
    if action.len() != y.len() {
        return Err(PyValueError::new_err("action and y must have equal length"));
    }
    Ok(mspm_core::sam::drift_weights(&action, &y))
}

/// Proportional rebalancing cost.
#[pyfunction]
fn transaction_cost(action: Vec<f64>, prev_weights: Vec<f64>, commission: f64) -> PyResult<f64> {
    if action.len() != prev_weights.len() {
        return Err(PyValueError::new_err("action and prev_weights must have equal length"));
    }
    Ok(mspm_core::sam::transaction_cost(&action, &prev_weights, commission))
}

/// Rolling volatility penalty over a window of relative price vectors.
#[pyfunction]
fn risk_penalty(window: Vec<Vec<f64>>) -> PyResult<f64> {
    mspm_core::sam::risk_penalty(&window).map_err(to_py_err)
}

/// (risk_adjusted, log_return) reward pair for one period.
#[pyfunction]
fn sam_reward(
    action: Vec<f64>,
    y: Vec<f64>,
    prev_weights: Vec<f64>,
    commission: f64,
    risk_discount: f64,
    risk: f64,
) -> PyResult<(f64, f64)> {
    let parts =
        mspm_core::sam::sam_reward(&action, &y, &prev_weights, commission, risk_discount, risk)
            .map_err(to_py_err)?;
    Ok((parts.risk_adjusted, parts.log_return))
}

// --- metrics ---------------------------------------------------------------

/// Daily rate of return: (net percent, raw mean gross return).
#[pyfunction]
fn drr(returns: Vec<f64>) -> PyResult<(f64, f64)> {
    let d = mspm_core::metrics::drr(&returns).map_err(to_py_err)?;
    Ok((d.pct, d.raw))
}

/// Accumulated rate of return: (net percent, terminal value).
#[pyfunction]
fn arr(returns: Vec<f64>, initial_value: f64) -> PyResult<(f64, f64)> {
    let a = mspm_core::metrics::arr(&returns, initial_value).map_err(to_py_err)?;
    Ok((a.pct, a.terminal_value))
}

#[pyfunction]
fn sortino(returns: Vec<f64>, risk_free: f64) -> PyResult<f64> {
    mspm_core::metrics::sortino(&returns, risk_free).map_err(to_py_err)
}

#[pyfunction]
fn max_drawdown(values: Vec<f64>) -> PyResult<f64> {
    mspm_core::metrics::max_drawdown(&values).map_err(to_py_err)
}

#[pyfunction]
fn sma(series: Vec<f64>, window: usize) -> PyResult<Vec<f64>> {
    mspm_core::metrics::sma(&series, window).map_err(to_py_err)
}

/// 5-day rolling population standard deviation of a daily-return series.
#[pyfunction]
fn rstd_drr(series: Vec<f64>) -> PyResult<Vec<f64>> {
    mspm_core::metrics::rstd_drr(&series).map_err(to_py_err)
}

// --- statistics ------------------------------------------------------------

/// Shapiro-Wilk normality test: (W, p).
#[pyfunction]
fn shapiro_wilk(sample: Vec<f64>) -> PyResult<(f64, f64)> {
    let r = mspm_core::metrics::shapiro_wilk(&sample).map_err(to_py_err)?;
    Ok((r.w, r.p_value))
}

/// Levene variance-equality test with group-mean centering: (W, p).
#[pyfunction]
fn levene(sample1: Vec<f64>, sample2: Vec<f64>) -> PyResult<(f64, f64)> {
    let r = mspm_core::metrics::levene(&sample1, &sample2).map_err(to_py_err)?;
    Ok((r.statistic, r.p_value))
}

/// One-tailed Mann-Whitney U test; tail is "less" or "greater". Returns
/// (U of sample1, p, exact_flag).
#[pyfunction]
fn mann_whitney_u(sample1: Vec<f64>, sample2: Vec<f64>, tail: &str) -> PyResult<(f64, f64, bool)> {
    let tail = match tail {
        "less" => mspm_core::metrics::Tail::Less,
        "greater" => mspm_core::metrics::Tail::Greater,
        other => {
            return Err(PyValueError::new_err(format!(
                "tail must be 'less' or 'greater', got {other:?}"
            )))
        }
    };
    let r = mspm_core::metrics::mann_whitney_u(&sample1, &sample2, tail).map_err(to_py_err)?;
    Ok((r.u, r.p_value, r.exact))
}

/// Full stability comparison between two dispersion series.
#[pyfunction]
fn stability_protocol(
    py: Python<'_>,
    dispersion_a: Vec<f64>,
    dispersion_b: Vec<f64>,
    alpha: f64,
) -> PyResult<Py<PyAny>> {
    let report = mspm_core::metrics::stability_protocol(&dispersion_a, &dispersion_b, alpha)
        .map_err(to_py_err)?;
    let json = serde_json::to_value(&report)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &json)
}

// --- baselines --------------------------------------------------------------

/// Uniform constant-rebalanced weights over the risky assets (cash first).
#[pyfunction]
fn crp_weights(assets_with_cash: usize) -> PyResult<Vec<f64>> {
    if assets_with_cash < 2 {
        return Err(PyValueError::new_err("need at least one risky asset"));
    }
    Ok(mspm_core::baselines::crp_weights(assets_with_cash))
}

/// Multiplicative exponential-gradient update.
#[pyfunction]
fn eg_update(weights: Vec<f64>, y: Vec<f64>, learning_rate: f64) -> PyResult<Vec<f64>> {
    if weights.len() != y.len() {
        return Err(PyValueError::new_err("weights and y must have equal length"));
    }
    Ok(mspm_core::baselines::eg_update(&weights, &y, learning_rate))
}

/// Follow-the-regularized-leader allocation from observed relative prices.
#[pyfunction]
fn ftrl_update(y_history: Vec<Vec<f64>>, regularization: f64) -> PyResult<Vec<f64>> {
    mspm_core::baselines::ftrl_update(&y_history, regularization, 1e-8, 10_000).map_err(to_py_err)
}

/// Euclidean projection onto the probability simplex.
#[pyfunction]
fn project_simplex(v: Vec<f64>) -> Vec<f64> {
    mspm_core::baselines::project_simplex(&v)
}

// --- data / pipeline ---------------------------------------------------------

/// Generates a seeded synthetic market. Each regime plan is a list of
/// (length, drift, volatility, sentiment_bias) tuples; pass one plan to
/// broadcast it to every asset. Returns {symbol: {column: [...]}} with
/// ISO-format dates.
#[pyfunction]
#[pyo3(signature = (num_assets, length, seed, regimes, sentiment_corr = 2.0, sentiment_noise = 0.25))]
fn generate_market(
    py: Python<'_>,
    num_assets: usize,
    length: usize,
    seed: u64,
    regimes: Vec<Vec<(usize, f64, f64, f64)>>,
    sentiment_corr: f64,
    sentiment_noise: f64,
) -> PyResult<Py<PyAny>> {
    let plans: Vec<Vec<mspm_core::data::RegimeSegment>> = regimes
        .into_iter()
        .map(|plan| {
            plan.into_iter()
                .map(|(length, drift, volatility, sentiment_bias)| {
                    mspm_core::data::RegimeSegment {
                        length,
                        drift,
                        volatility,
                        sentiment_bias,
                    }
                })
                .collect()
        })
        .collect();
    let spec = mspm_core::data::SyntheticMarketSpec {
        num_assets,
        length,
        seed,
        regimes: plans,
        start_date: chrono_default_start(),
        base_price: 100.0,
        base_volume: 1_000_000.0,
        sentiment_corr,
        sentiment_noise,
    };
    let series = mspm_core::data::generate_synthetic(&spec).map_err(to_py_err)?;
    let out = PyDict::new(py);
    for s in &series {
        let asset = PyDict::new(py);
        asset.set_item(
            "dates",
            s.bars.iter().map(|b| b.date.to_string()).collect::<Vec<_>>(),
        )?;
        asset.set_item("open", s.bars.iter().map(|b| b.open).collect::<Vec<_>>())?;
        asset.set_item("high", s.bars.iter().map(|b| b.high).collect::<Vec<_>>())?;
        asset.set_item("low", s.bars.iter().map(|b| b.low).collect::<Vec<_>>())?;
        asset.set_item("close", s.bars.iter().map(|b| b.close).collect::<Vec<_>>())?;
        asset.set_item("volume", s.bars.iter().map(|b| b.volume).collect::<Vec<_>>())?;
        asset.set_item(
            "sentiment",
            s.sentiments.iter().map(|r| r.sentiment).collect::<Vec<_>>(),
        )?;
        asset.set_item(
            "news_buzz",
            s.sentiments.iter().map(|r| r.news_buzz).collect::<Vec<_>>(),
        )?;
        out.set_item(&s.symbol, asset)?;
    }
    out.into_py_any(py)
}

fn chrono_default_start() -> chrono::NaiveDate {
    chrono::NaiveDate::from_ymd_opt(2016, 1, 4).expect("valid date")
}

/// The default experiment configuration as a TOML string.
#[pyfunction]
fn default_config() -> String {
    mspm_core::pipeline::ExperimentConfig::default().to_toml()
}

/// Runs one pipeline stage against a config file. Stage names match the
/// CLI subcommands (synth, train-eam, gen-signals, ...).
#[pyfunction]
#[pyo3(signature = (config_path, stage, out_dir = None, jobs = 0))]
fn run_stage(config_path: &str, stage: &str, out_dir: Option<&str>, jobs: usize) -> PyResult<()> {
    let config = mspm_core::pipeline::ExperimentConfig::load(std::path::Path::new(config_path))
        .map_err(to_py_err)?;
    let stage = mspm_core::pipeline::Stage::from_name(stage)
        .ok_or_else(|| PyValueError::new_err(format!("unknown stage {stage:?}")))?;
    let out = out_dir
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| config.run.out_dir.clone());
    mspm_core::pipeline::run_stage(&config, stage, &out, jobs).map_err(to_py_err)
}

/// Loads report.json from a run directory as a dict.
#[pyfunction]
fn load_report(py: Python<'_>, run_dir: &str) -> PyResult<Py<PyAny>> {
    let path = std::path::Path::new(run_dir).join("report.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| PyFileNotFoundError::new_err(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| PyRuntimeError::new_err(format!("corrupt report: {e}")))?;
    mspm_core::pipeline::validate_report(&value).map_err(to_py_err)?;
    json_to_py(py, &value)
}

#[pymodule]
fn mspm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(relative_price_vector, m)?)?;
    m.add_function(wrap_pyfunction!(drift_weights, m)?)?;
    m.add_function(wrap_pyfunction!(transaction_cost, m)?)?;
    m.add_function(wrap_pyfunction!(risk_penalty, m)?)?;
    m.add_function(wrap_pyfunction!(sam_reward, m)?)?;
    m.add_function(wrap_pyfunction!(drr, m)?)?;
    m.add_function(wrap_pyfunction!(arr, m)?)?;
    m.add_function(wrap_pyfunction!(sortino, m)?)?;
    m.add_function(wrap_pyfunction!(max_drawdown, m)?)?;
    m.add_function(wrap_pyfunction!(sma, m)?)?;
    m.add_function(wrap_pyfunction!(rstd_drr, m)?)?;
    m.add_function(wrap_pyfunction!(shapiro_wilk, m)?)?;
    m.add_function(wrap_pyfunction!(levene, m)?)?;
    m.add_function(wrap_pyfunction!(mann_whitney_u, m)?)?;
    m.add_function(wrap_pyfunction!(stability_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(crp_weights, m)?)?;
    m.add_function(wrap_pyfunction!(eg_update, m)?)?;
    m.add_function(wrap_pyfunction!(ftrl_update, m)?)?;
    m.add_function(wrap_pyfunction!(project_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(generate_market, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_stage, m)?)?;
    m.add_function(wrap_pyfunction!(load_report, m)?)?;
    Ok(())
}
