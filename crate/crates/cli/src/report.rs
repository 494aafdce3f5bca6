//! JSON and CSV rendering of results. Exact quantities are written both as
//! term lists and as decimal enclosures.

use orbitgap_core::scanner::{
    CensusReport, GrowthReport, InvFunRecord, Membership, RemarkCount, ScanReport, ScanVerdict,
};
use orbitgap_core::{ExtLogReal, LogLinearReal, RealInterval};
use serde_json::{json, Value};

use crate::fuzz::FuzzSummary;

/// Decimal digits in enclosures.
pub const DIGITS: u32 = 15;

pub fn log_linear(x: &LogLinearReal) -> Value {
    let terms: Vec<Value> = x.terms().iter().map(|(b, c)| json!([b.to_string(), c.to_string()])).collect();
    let (lo, hi) = x.to_decimal(DIGITS);
    json!({ "symbolic": x.to_string(), "terms": terms, "decimal": [lo, hi] })
}

pub fn ext_log(x: &ExtLogReal) -> Value {
    match x {
        ExtLogReal::Finite(v) => log_linear(v),
        ExtLogReal::PosInfinity => json!({ "symbolic": "+inf", "terms": null, "decimal": ["+inf", "+inf"] }),
    }
}

pub fn interval(r: &RealInterval) -> Value {
    let (lo, hi) = r.to_decimal_pair(DIGITS);
    json!({ "decimal": [lo, hi], "dyadic": [r.lo().to_string(), r.hi().to_string()] })
}

pub fn membership(m: Membership) -> &'static str {
    match m {
        Membership::In => "In",
        Membership::Out => "Out",
        Membership::Unresolved => "Unresolved",
    }
}

fn verdict(v: &ScanVerdict) -> Value {
    json!({
        "n": v.n,
        "membership": membership(v.membership),
        "lambda_sum": ext_log(&v.lambda_sum),
        "lambda_exact": v.lambda_exact,
        "threshold": interval(&v.threshold),
    })
}

pub fn scan(r: &ScanReport) -> Value {
    let e = &r.echo;
    json!({
        "verdicts": r.verdicts.iter().map(verdict).collect::<Vec<_>>(),
        "count_in": r.count_in,
        "count_unresolved": r.count_unresolved,
        "hhat": r.hhat.as_ref().map(interval),
        "bound_log_term": r.bound_log_term.as_ref().map(interval),
        "bound_symbolic": r.bound_symbolic,
        "echo": {
            "map": e.map,
            "target": e.target,
            "start": e.start,
            "places": e.places,
            "epsilon": e.epsilon,
            "n_max": e.n_max,
            "backend": e.backend.map(|b| format!("{b:?}")),
            "naive": e.naive,
        },
    })
}

pub fn census(r: &CensusReport) -> Value {
    json!({ "integral": r.integral, "log_term": interval(&r.log_term) })
}

pub fn inv_fun(r: &InvFunRecord) -> Value {
    json!({
        "lhs": ext_log(&r.lhs),
        "rhs": ext_log(&r.rhs),
        "residual": r.residual.as_ref().map(log_linear),
        "scale": interval(&r.scale),
    })
}

pub fn growth(r: &GrowthReport) -> Value {
    json!({
        "max_multiplicity": r.max_multiplicity,
        "bound": r.bound,
        "wandering": r.wandering,
        "violations": r.violations,
    })
}

pub fn remark_count(c: RemarkCount) -> Value {
    match c {
        RemarkCount::Count(n) => json!(n),
        RemarkCount::Unresolved => json!("Unresolved"),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const SCAN_CSV_HEADER: &str = "n,membership,lambda_sum_decimal,threshold_lo,threshold_hi";
pub const GRID_CSV_HEADER: &str = "d,p,eps,hhat_lo,hhat_hi,remark_count,count_in,unresolved,match";

fn csv_row(fields: &[String]) -> String {
    let mut row = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Per-n verdict table of a rendered scan. Lower bounds from the modular
/// backend carry `>=`; an infinite sum is `+inf`.
pub fn scan_csv(scan: &Value) -> String {
    let mut out = format!("{SCAN_CSV_HEADER}\n");
    for v in scan["verdicts"].as_array().into_iter().flatten() {
        let lo = text(&v["lambda_sum"]["decimal"][0]);
        let lam = if lo == "+inf" || v["lambda_exact"] == json!(true) { lo } else { format!(">={lo}") };
        let t = &v["threshold"]["decimal"];
        out.push_str(&csv_row(&[text(&v["n"]), text(&v["membership"]), lam, text(&t[0]), text(&t[1])]));
    }
    out
}

pub fn grid_csv(grid: &Value) -> String {
    let mut out = format!("{GRID_CSV_HEADER}\n");
    for r in grid["rows"].as_array().into_iter().flatten() {
        let h = &r["hhat"]["decimal"];
        let fields: Vec<String> = [&r["d"], &r["p"], &r["eps"], &h[0], &h[1], &r["remark_count"], &r["count_in"], &r["unresolved"], &r["match"]]
            .into_iter()
            .map(text)
            .collect();
        out.push_str(&csv_row(&fields));
    }
    out
}

/// Tables for every job of a report that has one, each introduced by a
/// `# job <index> <kind>` line. Jobs without a table are listed by status.
pub fn report_csv(report: &Value) -> String {
    let mut out = String::new();
    for job in report["jobs"].as_array().into_iter().flatten() {
        out.push_str(&format!("# job {} {} {}\n", job["index"], text(&job["kind"]), text(&job["status"])));
        let Some(result) = job.get("result") else { continue };
        match job["kind"].as_str() {
            Some("GammaScan" | "GammaScanNaive") => out.push_str(&scan_csv(result)),
            Some("RemarkGrid") => out.push_str(&grid_csv(result)),
            Some("FuzzSuite") => out.push_str(&suites_csv(result["suites"].as_array().map_or(&[][..], Vec::as_slice))),
            _ => {}
        }
    }
    out
}

fn suites_csv(suites: &[Value]) -> String {
    let mut out = String::from("suite,cases,exercised,failures\n");
    for s in suites {
        out.push_str(&csv_row(&[text(&s["name"]), text(&s["cases"]), text(&s["exercised"]), text(&s["failures"])]));
    }
    out
}

pub fn fuzz_csv(summary: &FuzzSummary) -> String {
    let v = serde_json::to_value(summary).expect("summary serializes");
    suites_csv(v["suites"].as_array().map_or(&[][..], Vec::as_slice))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_linear_is_written_both_ways() {
        let v = log_linear(&LogLinearReal::log_int(3u32));
        assert_eq!(v["terms"], json!([["3", "1"]]));
        assert_eq!(v["decimal"][0], "1.098612288668109");
        assert_eq!(v["decimal"][1], "1.098612288668110");
        assert_eq!(ext_log(&ExtLogReal::PosInfinity)["symbolic"], "+inf");
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn scan_table_marks_lower_bounds() {
        let scan = json!({ "verdicts": [
            { "n": 0, "membership": "In", "lambda_exact": true,
              "lambda_sum": { "decimal": ["1.5", "1.6"] }, "threshold": { "decimal": ["0.1", "0.2"] } },
            { "n": 1, "membership": "In", "lambda_exact": false,
              "lambda_sum": { "decimal": ["9.0", "9.1"] }, "threshold": { "decimal": ["0.2", "0.4"] } },
            { "n": 2, "membership": "In", "lambda_exact": true,
              "lambda_sum": { "decimal": ["+inf", "+inf"] }, "threshold": { "decimal": ["0.4", "0.8"] } },
        ]});
        assert_eq!(
            scan_csv(&scan),
            format!("{SCAN_CSV_HEADER}\n0,In,1.5,0.1,0.2\n1,In,>=9.0,0.2,0.4\n2,In,+inf,0.4,0.8\n")
        );
    }
}
