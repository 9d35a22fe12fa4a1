//! Plain-text reports.

use std::fmt::Write;

use laurent::Expansion;
use smp::oracle::ComparisonReport;
use smp::{PairHitting, PerturbedSmp, ReductionTrace, StationaryReport, ValidationReport};

/// Series with orders and, when present, the remainder certificate.
fn series(x: &Expansion) -> String {
    let mut out = format!("{}    [orders {}..{}]", x.to_series_string(), x.h(), x.k());
    if let Some(b) = x.bound() {
        let _ = write!(out, "  |rem| <= {} eps^({} + {}) for eps <= {}", b.g(), x.k(), b.delta(), b.eps_max());
    }
    out
}

pub fn validation(report: &ValidationReport) -> String {
    if report.is_ok() {
        return "model is valid\n".into();
    }
    let mut out = format!("{} violation(s):\n", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(out, "  {v}");
    }
    out
}

fn model(m: &PerturbedSmp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "states: {:?} (mode {}, eps0 = {})", m.states(), m.mode().as_str(), m.eps0());
    for ((i, j), p) in m.p_entries() {
        let _ = writeln!(out, "  p[{i},{j}] = {}", series(p));
        if let Some(e) = m.e(*i, *j) {
            let _ = writeln!(out, "  e[{i},{j}] = {}", series(e));
        }
    }
    out
}

pub fn trace(trace: &ReductionTrace) -> String {
    let mut out = format!("eliminated {:?}\n", trace.order);
    let skipped = trace.order.len() - trace.models.len();
    for (step, m) in trace.models.iter().enumerate() {
        let _ = writeln!(out, "after eliminating {}:", trace.order[skipped + step]);
        out.push_str(&model(m));
    }
    out
}

pub fn hitting(i: usize, order: &[usize], x: &Expansion) -> String {
    format!("E[{i},{i}] = {}\nelimination order {order:?}\n", series(x))
}

pub fn stationary(report: &StationaryReport) -> String {
    let mut out = String::new();
    for s in &report.states {
        let i = s.state;
        let _ = writeln!(
            out,
            "state {i}: n- = {}, n+ = {}, pi({i}) at eps = 0: {}",
            s.n_minus(),
            s.n_plus(),
            s.limit_at_zero
        );
        let _ = writeln!(out, "  pi[{i}]   = {}", series(&s.pi));
        let _ = writeln!(out, "  E[{i},{i}] = {}", series(&s.return_time));
        let _ = writeln!(out, "  e[{i}]    = {}", series(&s.sojourn));
    }
    let residuals: Vec<String> = report.residuals.iter().map(|r| r.to_string()).collect();
    let _ = writeln!(
        out,
        "X0 = {:?}; n+ = {}; coefficient-sum residuals [{}]",
        report.x0,
        report.n_plus,
        residuals.join(", ")
    );
    if let Some(floor) = &report.delta_floor {
        let _ = writeln!(out, "smallest input delta = {floor}");
    }
    for v in &report.violations {
        let at = v.state.map(|s| format!(" (state {s})")).unwrap_or_default();
        let _ = writeln!(out, "VIOLATION {}{at}: {}", v.identity, v.message);
    }
    out
}

pub fn pair(p: &PairHitting) -> String {
    let (i, j) = (p.i, p.j);
    format!(
        "E[{i},{j}] = {}\nE[{j},{i}] = {}\nE[{i},{i}] = {}\nE[{j},{j}] = {}\n",
        series(&p.e_ij),
        series(&p.e_ji),
        series(&p.e_ii),
        series(&p.e_jj)
    )
}

pub fn comparison(report: &ComparisonReport) -> String {
    let mut out = format!(
        "grid: {}  (oracle {})\n",
        report.grid.join(", "),
        if report.oracle_exact { "exact" } else { "order test only" }
    );
    let _ = writeln!(out, "{:<10} {:>8} {:>10} {:>8} {:>6}", "quantity", "window", "slope", "needed", "result");
    for q in &report.quantities {
        let slope = q.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "-".into());
        let window = format!("({},{})", q.window.0, q.window.1);
        let verdict = match (q.slope_pass, q.bound_pass) {
            (true, true) => "pass",
            (false, _) => "SLOPE",
            (true, false) => "BOUND",
        };
        let _ =
            writeln!(out, "{:<10} {:>8} {:>10} {:>8.3} {:>6}", q.quantity, window, slope, q.slope_threshold, verdict);
        for p in q.points.iter().filter(|p| !p.within_bound) {
            let _ =
                writeln!(out, "    eps = {}: error {} exceeds {}", p.eps, p.error, p.bound.as_deref().unwrap_or("-"));
        }
    }
    let _ = writeln!(out, "{}", if report.pass() { "all comparisons pass" } else { "some comparisons FAIL" });
    out
}
