//! Report assembly and rendering.
//!
//! A report bundles the outcome of any subset of the three tests with a
//! verdict line. It serializes to JSON (schema versioned via
//! `schema_version`) and renders to markdown tables that mirror the
//! conventional presentation: a runs-statistics table, a per-lag
//! correlogram table with a standard-error footer, and a regression table
//! with an R-squared header block. Numeric cells use fixed precisions
//! (mean of runs 1, sigma and Z 2, ACF 3, coefficients 3, t 2, p 4
//! decimals) with Rust's correctly-rounded float formatting, so rendering
//! is byte-stable.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::acf::{correlogram_values, Correlogram, SeMode};
use crate::ar::{ar_fit_values, ArFit, ArSpec};
use crate::dist::{two_sided_p, NullDistribution};
use crate::error::{EmhError, Result};
use crate::runs::{runs_test_signs, RunsSummary, ZeroPolicy};
use crate::series::{ChangeSign, PriceSeries};

/// Version stamp carried by serialized reports.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a single test at the report's significance level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestDecision {
    pub test: String,
    pub rejects: bool,
    pub detail: String,
}

/// Combined decision: the efficiency null stands unless some included test
/// rejects at the report's significance level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub rejected: bool,
    pub summary: String,
    pub decisions: Vec<TestDecision>,
}

impl Verdict {
    pub fn from_decisions(decisions: Vec<TestDecision>) -> Self {
        let rejected = decisions.iter().any(|d| d.rejects);
        let summary = if rejected {
            "weak-form efficiency rejected"
        } else {
            "weak-form efficient not rejected"
        }
        .to_string();
        Self {
            rejected,
            summary,
            decisions,
        }
    }
}

/// Full analysis of one series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub series_label: String,
    pub n: usize,
    pub date_range: (NaiveDate, NaiveDate),
    pub alpha: f64,
    pub on_returns: bool,
    pub generated_at: Option<String>,
    pub runs: Option<RunsSummary>,
    pub correlogram: Option<Correlogram>,
    pub ar: Option<ArFit>,
    pub verdict: Verdict,
}

/// Which tests to run and with what parameters.
#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub runs: bool,
    pub acf: bool,
    pub ar: bool,
    pub max_lag: usize,
    pub ar_lags: usize,
    pub alpha: f64,
    pub zero_policy: ZeroPolicy,
    pub se_mode: SeMode,
    pub on_returns: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            runs: true,
            acf: true,
            ar: true,
            max_lag: 20,
            ar_lags: 2,
            alpha: 0.05,
            zero_policy: ZeroPolicy::Exclude,
            se_mode: SeMode::LargeN,
            on_returns: false,
        }
    }
}

/// Runs the selected tests on a series and assembles the report.
///
/// With `on_returns` set, the autocorrelation and autoregression operate
/// on simple returns, and the runs test classifies the signs of the
/// returns themselves (which coincide with the level-change signs).
pub fn analyze(series: &PriceSeries, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let values = if opts.on_returns {
        series.returns()
    } else {
        series.closes()
    };
    let runs = if opts.runs {
        let signs: Vec<ChangeSign> = if opts.on_returns {
            values.iter().map(|&v| ChangeSign::of(v)).collect()
        } else {
            series.diff_signs()
        };
        Some(runs_test_signs(&signs, opts.zero_policy)?)
    } else {
        None
    };
    let correlogram = if opts.acf {
        Some(correlogram_values(&values, opts.max_lag, opts.se_mode)?)
    } else {
        None
    };
    let ar = if opts.ar {
        Some(ar_fit_values(
            &values,
            &ArSpec {
                lags: opts.ar_lags,
                include_intercept: true,
            },
        )?)
    } else {
        None
    };
    assemble(
        series.label(),
        series.len(),
        (series.first_date(), series.last_date()),
        opts.alpha,
        opts.on_returns,
        runs,
        correlogram,
        ar,
    )
}

/// Builds an [`AnalysisReport`] from already-computed test results,
/// deciding each test at `alpha` by its two-sided p-value.
#[allow(clippy::too_many_arguments)]
pub fn assemble(
    label: &str,
    n: usize,
    date_range: (NaiveDate, NaiveDate),
    alpha: f64,
    on_returns: bool,
    runs: Option<RunsSummary>,
    correlogram: Option<Correlogram>,
    ar: Option<ArFit>,
) -> Result<AnalysisReport> {
    let mut decisions = Vec::new();
    if let Some(r) = &runs {
        decisions.push(TestDecision {
            test: "runs".to_string(),
            rejects: r.p_two_sided < alpha,
            detail: format!("Z = {:.2}, p = {:.4}", r.z, r.p_two_sided),
        });
    }
    if let Some(c) = &correlogram {
        let mut significant = 0usize;
        for p in &c.points {
            if two_sided_p(p.t_stat, NullDistribution::Normal)?.value() < alpha {
                significant += 1;
            }
        }
        decisions.push(TestDecision {
            test: "acf".to_string(),
            rejects: significant > 0,
            detail: format!("{significant} of {} lags significant", c.points.len()),
        });
    }
    if let Some(f) = &ar {
        let lags = f.lag_coefficients();
        let significant = lags
            .iter()
            .filter(|c| c.p_value.map(|p| p < alpha).unwrap_or(false))
            .count();
        decisions.push(TestDecision {
            test: "ar".to_string(),
            rejects: significant > 0,
            detail: format!("{significant} of {} lag coefficients significant", lags.len()),
        });
    }
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        series_label: label.to_string(),
        n,
        date_range,
        alpha,
        on_returns,
        generated_at: None,
        runs,
        correlogram,
        ar,
        verdict: Verdict::from_decisions(decisions),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render_json(report: &AnalysisReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Parses JSON produced by [`render_json`].
pub fn parse_json(text: &str) -> Result<AnalysisReport> {
    Ok(serde_json::from_str(text)?)
}

/// Correlogram plot style.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotStyle {
    Ascii,
    Svg,
}

/// Runs-test statistics table.
pub fn runs_table_markdown(r: &RunsSummary, label: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("| Statistic | {label} |\n"));
    out.push_str("| --- | ---: |\n");
    out.push_str(&format!("| Number of Runs | {} |\n", r.runs));
    out.push_str(&format!("| Number of Positive Runs | {} |\n", r.n_pos));
    out.push_str(&format!("| Number of Negative Runs | {} |\n", r.n_neg));
    out.push_str(&format!("| Mean of Runs | {:.1} |\n", r.mu));
    out.push_str(&format!("| Standard Deviation of Runs | {:.2} |\n", r.sigma));
    out.push_str(&format!("| Calculated Z-Statistic | {:.2} |\n", r.z));
    out
}

/// Per-lag ACF table. The large-sample mode appends the single standard
/// error as a footer row; the exact mode carries a per-lag column.
pub fn acf_table_markdown(c: &Correlogram, label: &str) -> String {
    let mut out = String::new();
    match c.se_mode {
        SeMode::LargeN => {
            out.push_str(&format!("| Lags | {label} |\n"));
            out.push_str("| ---: | ---: |\n");
            for p in &c.points {
                out.push_str(&format!("| {} | {:.3} |\n", p.lag, p.acf));
            }
            let se = c.points.first().map(|p| p.se).unwrap_or(0.0);
            out.push_str(&format!("| Standard Error | {se:.3} |\n"));
        }
        SeMode::Exact => {
            out.push_str(&format!("| Lags | {label} | Standard Error |\n"));
            out.push_str("| ---: | ---: | ---: |\n");
            for p in &c.points {
                out.push_str(&format!("| {} | {:.3} | {:.3} |\n", p.lag, p.acf, p.se));
            }
        }
    }
    out
}

/// Regression table: R-squared header block, then coefficient rows.
pub fn ar_table_markdown(f: &ArFit) -> String {
    let mut out = String::new();
    out.push_str("| Regression Statistics | |\n");
    out.push_str("| --- | ---: |\n");
    out.push_str(&format!("| R Squared | {:.3} |\n", f.r_squared));
    out.push_str(&format!("| Adjusted R Squared | {:.3} |\n", f.adj_r_squared));
    out.push('\n');
    out.push_str("| | Coefficients | t-value | p-value |\n");
    out.push_str("| --- | ---: | ---: | ---: |\n");
    for c in &f.coefficients {
        let t = c
            .t
            .map(|v| format!("{v:.2}"))
            .unwrap_or_else(|| "n/a".to_string());
        let p = c
            .p_value
            .map(|v| format!("{v:.4}"))
            .unwrap_or_else(|| "n/a".to_string());
        out.push_str(&format!("| {} | {:.3} | {} | {} |\n", c.name, c.estimate, t, p));
    }
    out
}

/// Spike plot of a correlogram, one spike per lag with a +/-1.96 se guide.
pub fn render_correlogram(c: &Correlogram, style: PlotStyle) -> Result<String> {
    if c.points.is_empty() {
        return Err(EmhError::EmptyCorrelogram);
    }
    match style {
        PlotStyle::Ascii => Ok(render_ascii(c)),
        PlotStyle::Svg => Ok(render_svg(c)),
    }
}

const ASCII_WIDTH: f64 = 40.0;

fn render_ascii(c: &Correlogram) -> String {
    let mut out = String::new();
    match c.se_mode {
        SeMode::LargeN => {
            let band = 1.96 * c.points[0].se;
            out.push_str(&format!(
                "correlogram (n = {}, guide band = +/-{band:.3}; * marks |acf| outside the band)\n",
                c.n
            ));
        }
        SeMode::Exact => {
            out.push_str(&format!(
                "correlogram (n = {}, guide band = +/-1.96 se(k); * marks |acf| outside the band)\n",
                c.n
            ));
        }
    }
    for p in &c.points {
        let len = ((p.acf.abs() * ASCII_WIDTH).round() as usize).min(ASCII_WIDTH as usize);
        let bar: String = "#".repeat(len);
        let marker = if p.significant_at_5pct { " *" } else { "" };
        out.push_str(&format!("{:>4} | {:+.3} | {bar}{marker}\n", p.lag, p.acf));
    }
    out
}

fn render_svg(c: &Correlogram) -> String {
    let k = c.points.len();
    let width = 80.0 + 24.0 * k as f64 + 20.0;
    let height = 320.0;
    let mid = height / 2.0;
    let scale = height / 2.0 - 30.0;
    let x = |lag: usize| 80.0 + 24.0 * (lag as f64 - 0.5);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"60\" y1=\"{mid:.1}\" x2=\"{:.1}\" y2=\"{mid:.1}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        width - 10.0
    ));
    // guide band at +/-1.96 se
    for sign in [1.0f64, -1.0] {
        let pts: String = c
            .points
            .iter()
            .map(|p| format!("{:.1},{:.1}", x(p.lag), mid - sign * 1.96 * p.se * scale))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "  <polyline points=\"{pts}\" fill=\"none\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n"
        ));
    }
    for p in &c.points {
        let y = mid - p.acf.clamp(-1.0, 1.0) * scale;
        out.push_str(&format!(
            "  <line x1=\"{0:.1}\" y1=\"{mid:.1}\" x2=\"{0:.1}\" y2=\"{y:.1}\" stroke=\"steelblue\" stroke-width=\"6\"/>\n",
            x(p.lag)
        ));
    }
    let label_step = if k > 30 { 5 } else { 1 };
    for p in &c.points {
        if p.lag % label_step == 0 || p.lag == 1 {
            out.push_str(&format!(
                "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                x(p.lag),
                height - 8.0,
                p.lag
            ));
        }
    }
    out.push_str(&format!(
        "  <text x=\"12\" y=\"{:.1}\" font-size=\"10\">+1</text>\n  <text x=\"12\" y=\"{:.1}\" font-size=\"10\">-1</text>\n",
        mid - scale + 4.0,
        mid + scale + 4.0
    ));
    out.push_str("</svg>\n");
    out
}

/// Full markdown report; sections for absent tests are omitted.
pub fn render_markdown(report: &AnalysisReport, plot: Option<PlotStyle>) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!(
        "# Weak-Form Efficiency Report: {}\n\n",
        report.series_label
    ));
    out.push_str(&format!("- observations: {}\n", report.n));
    out.push_str(&format!(
        "- date range: {} to {}\n",
        report.date_range.0, report.date_range.1
    ));
    out.push_str(&format!(
        "- significance level: {}%\n",
        report.alpha * 100.0
    ));
    out.push_str(&format!(
        "- values: {}\n",
        if report.on_returns { "returns" } else { "levels" }
    ));
    if let Some(ts) = &report.generated_at {
        out.push_str(&format!("- generated at: {ts}\n"));
    }
    if let Some(r) = &report.runs {
        out.push_str("\n## Runs Test\n\n");
        out.push_str(&runs_table_markdown(r, &report.series_label));
    }
    if let Some(c) = &report.correlogram {
        out.push_str("\n## Autocorrelation Test\n\n");
        out.push_str(&acf_table_markdown(c, &report.series_label));
        if let Some(style) = plot {
            match style {
                PlotStyle::Ascii => {
                    out.push_str("\n```\n");
                    out.push_str(&render_correlogram(c, style)?);
                    out.push_str("```\n");
                }
                PlotStyle::Svg => {
                    out.push('\n');
                    out.push_str(&render_correlogram(c, style)?);
                }
            }
        }
    }
    if let Some(f) = &report.ar {
        out.push_str("\n## Autoregression\n\n");
        out.push_str(&ar_table_markdown(f));
    }
    out.push_str(&format!("\n**Verdict:** {}", report.verdict.summary));
    if !report.verdict.decisions.is_empty() {
        let parts: Vec<String> = report
            .verdict
            .decisions
            .iter()
            .map(|d| {
                format!(
                    "{}: {}",
                    d.test,
                    if d.rejects { "reject" } else { "no reject" }
                )
            })
            .collect();
        out.push_str(&format!(" [{}]", parts.join("; ")));
    }
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acf::AcfPoint;
    use crate::runs::{runs_moments, runs_z};
    use crate::simulate::{generate, Model, SimulationSpec};

    fn sensex_reference_summary() -> RunsSummary {
        // reference counts: R = 1037, 1158 positive, 1053 negative
        let (mu, sigma) = runs_moments(1158, 1053).unwrap();
        let z = runs_z(1037, mu, sigma).unwrap();
        let p = two_sided_p(z, NullDistribution::Normal).unwrap().value();
        RunsSummary {
            n_pos: 1158,
            n_neg: 1053,
            n_zero_excluded: 0,
            runs: 1037,
            mu,
            sigma,
            z,
            p_two_sided: p,
            reject_at_5pct: z.abs() > 1.96,
        }
    }

    #[test]
    fn runs_table_cells_match_reference_rounding() {
        let table = runs_table_markdown(&sensex_reference_summary(), "Sensex");
        assert!(table.contains("| Number of Runs | 1037 |"));
        assert!(table.contains("| Number of Positive Runs | 1158 |"));
        assert!(table.contains("| Number of Negative Runs | 1053 |"));
        assert!(table.contains("| Mean of Runs | 1104.0 |"));
        assert!(table.contains("| Standard Deviation of Runs | 23.45 |"));
        assert!(table.contains("| Calculated Z-Statistic | -2.86 |"));
    }

    fn sample_report() -> AnalysisReport {
        let spec = SimulationSpec::new(
            Model::RandomWalk {
                drift: 0.0,
                step_sd: 1.0,
            },
            200,
            5,
        );
        let series = generate(&spec).unwrap();
        analyze(&series, &AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let report = sample_report();
        let text = render_json(&report).unwrap();
        let parsed = parse_json(&text).unwrap();
        assert_eq!(report, parsed);
    }

    #[test]
    fn markdown_is_deterministic_and_omits_missing_sections() {
        let report = sample_report();
        let a = render_markdown(&report, None).unwrap();
        let b = render_markdown(&report, None).unwrap();
        assert_eq!(a, b);

        let mut runs_only = report.clone();
        runs_only.correlogram = None;
        runs_only.ar = None;
        let text = render_markdown(&runs_only, None).unwrap();
        assert!(text.contains("## Runs Test"));
        assert!(!text.contains("## Autocorrelation Test"));
        assert!(!text.contains("## Autoregression"));
    }

    #[test]
    fn verdict_reflects_decisions() {
        let v = Verdict::from_decisions(vec![TestDecision {
            test: "runs".into(),
            rejects: false,
            detail: String::new(),
        }]);
        assert_eq!(v.summary, "weak-form efficient not rejected");
        let v = Verdict::from_decisions(vec![
            TestDecision {
                test: "runs".into(),
                rejects: false,
                detail: String::new(),
            },
            TestDecision {
                test: "ar".into(),
                rejects: true,
                detail: String::new(),
            },
        ]);
        assert_eq!(v.summary, "weak-form efficiency rejected");
        assert!(v.rejected);
    }

    fn saturated_correlogram() -> Correlogram {
        let points = (1..=5)
            .map(|lag| AcfPoint {
                lag,
                acf: 1.0,
                se: 0.1,
                t_stat: 10.0,
                significant_at_5pct: true,
            })
            .collect();
        Correlogram {
            n: 100,
            max_lag: 5,
            se_mode: SeMode::LargeN,
            points,
        }
    }

    #[test]
    fn ascii_plot_saturates_at_full_width() {
        let plot = render_correlogram(&saturated_correlogram(), PlotStyle::Ascii).unwrap();
        let full_bar = "#".repeat(40);
        for line in plot.lines().skip(1) {
            assert!(line.contains(&full_bar), "line lacked full bar: {line}");
        }
    }

    #[test]
    fn svg_plot_is_standalone_xml_with_one_spike_per_lag() {
        let c = saturated_correlogram();
        let svg = render_correlogram(&c, PlotStyle::Svg).unwrap();
        assert!(svg.starts_with("<?xml version=\"1.0\""));
        assert!(svg.contains("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        let spikes = svg.matches("stroke=\"steelblue\"").count();
        assert_eq!(spikes, c.points.len());
        let guides = svg.matches("<polyline").count();
        assert_eq!(guides, 2);
    }

    #[test]
    fn empty_correlogram_is_an_error() {
        let empty = Correlogram {
            n: 100,
            max_lag: 0,
            se_mode: SeMode::LargeN,
            points: Vec::new(),
        };
        assert!(matches!(
            render_correlogram(&empty, PlotStyle::Ascii),
            Err(EmhError::EmptyCorrelogram)
        ));
    }
}
