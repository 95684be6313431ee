//! Report rendering. Every function is a pure value-to-string map so
//! identical reports produce identical bytes; floats go through the
//! shortest-round-trip formatter (never locale- or time-dependent).

use avn_core::analysis::{GapRow, IndependenceReport};
use avn_core::constraints::{ConstraintLabel, ConstraintReport, ZeroProbConstraint};
use avn_core::lhv::TheoremReport;
use serde::Serialize;

use crate::CliError;

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    Ok(body)
}

/// Exponent notation for probabilities and tolerances, with a plain "0"
/// for exact zeros (the common case for the asserted constraint values).
fn prob(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value:e}")
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

pub fn constraint_report_text(report: &ConstraintReport) -> String {
    let mut z_pairs = 0usize;
    let mut x_pairs = 0usize;
    let mut all_empty = 0usize;
    for check in &report.checks {
        match check.label {
            ConstraintLabel::ZPair { .. } => z_pairs += 1,
            ConstraintLabel::XPair { .. } => x_pairs += 1,
            ConstraintLabel::Completeness => all_empty += 1,
        }
    }
    let mut out = String::new();
    out.push_str("Zero-probability constraint check\n");
    out.push_str(&format!("  sites:          {}\n", report.n_sites));
    out.push_str(&format!(
        "  constraints:    {} ({z_pairs} occupied-pair, {x_pairs} opposite-X-pair, \
         {all_empty} all-empty)\n",
        report.checks.len()
    ));
    out.push_str(&format!("  tolerance:      {}\n", prob(report.tolerance)));
    out.push_str(&format!(
        "  max violation:  {}\n",
        prob(report.max_violation)
    ));
    out.push_str(&format!("  verdict:        {}\n", verdict(report.passed)));
    if !report.passed {
        out.push_str("\n  violated assertions:\n");
        let mut violations: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.probability > report.tolerance)
            .collect();
        violations.sort_by(|a, b| {
            b.probability
                .partial_cmp(&a.probability)
                .unwrap()
                .then(a.label.cmp(&b.label))
        });
        for check in violations.iter().take(10) {
            out.push_str(&format!(
                "    {}  probability {}\n",
                check.label,
                prob(check.probability)
            ));
        }
        if violations.len() > 10 {
            out.push_str(&format!("    ... and {} more\n", violations.len() - 10));
        }
    }
    out
}

pub fn constraint_report_csv(report: &ConstraintReport) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["label", "probability"])?;
    for check in &report.checks {
        writer.write_record([check.label.to_string(), check.probability.to_string()])?;
    }
    finish(writer)
}

pub fn theorem_report_text(report: &TheoremReport) -> String {
    let mut out = String::new();
    out.push_str("Deterministic local-model census\n");
    out.push_str(&format!("  sites:                    {}\n", report.n_sites));
    out.push_str(&format!(
        "  models examined:          {}\n",
        report.total_models
    ));
    out.push_str(&format!(
        "  completeness constraint:  {}\n",
        if report.completeness_constraint_used {
            "on"
        } else {
            "off"
        }
    ));
    out.push_str(&format!(
        "  survivors:                {}\n",
        report.survivor_count
    ));
    out.push_str(&format!(
        "  z-all-plus survivors:     {}\n",
        report.z_all_plus_survivors
    ));
    out.push_str(&format!(
        "  all survivors x-uniform:  {}\n",
        yes_no(report.all_survivors_x_uniform)
    ));
    if let Some(canonical) = report.canonical_survivor_set {
        out.push_str(&format!(
            "  canonical survivor set:   {}\n",
            yes_no(canonical)
        ));
    }
    out.push_str(&format!(
        "  verdict:                  {}\n",
        verdict(report.all_survivors_x_uniform)
    ));
    match &report.survivors {
        Some(survivors) if survivors.len() <= 64 => {
            out.push_str("\n  encoding  z-pattern  x-pattern\n");
            for survivor in survivors {
                out.push_str(&format!(
                    "  {:>8}  {:<9}  {}\n",
                    survivor.encoding(),
                    survivor.z_pattern(),
                    survivor.x_pattern()
                ));
            }
        }
        Some(survivors) => {
            out.push_str(&format!(
                "\n  survivor list elided ({} entries)\n",
                survivors.len()
            ));
        }
        None => {
            out.push_str("\n  survivor list not materialized (too large)\n");
        }
    }
    out
}

pub fn theorem_survivors_csv(report: &TheoremReport) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["encoding", "z_pattern", "x_pattern"])?;
    for survivor in report.survivors.as_deref().unwrap_or(&[]) {
        writer.write_record([
            survivor.encoding().to_string(),
            survivor.z_pattern(),
            survivor.x_pattern(),
        ])?;
    }
    finish(writer)
}

pub fn gap_text(rows: &[GapRow]) -> String {
    let mut out = String::new();
    out.push_str("Certainty of all X outcomes agreeing: local models vs the quantum state\n");
    out.push_str(&format!(
        "  {:>3}  {:<7}  {:<22}  {:<22}  {}\n",
        "n", "local", "quantum", "gap", "quantum (simulated)"
    ));
    for row in rows {
        out.push_str(&format!(
            "  {:>3}  {:<7}  {:<22}  {:<22}  {}\n",
            row.n, row.local_prediction, row.quantum_prediction, row.gap, row.quantum_simulated
        ));
    }
    out
}

pub fn gap_csv(rows: &[GapRow]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    finish(writer)
}

pub fn independence_text(report: &IndependenceReport) -> String {
    let pi = &report.parameter_independence;
    let oi = &report.outcome_independence;
    let mut out = String::new();
    out.push_str("Independence diagnostics\n");
    out.push_str(&format!("  sites:    {}\n", report.n_sites));
    out.push_str(&format!("  verdict:  {}\n", verdict(report.passed)));
    out.push('\n');
    out.push_str("Remote-setting independence (marginalization identities)\n");
    out.push_str(&format!(
        "  combinations checked:  {}\n",
        pi.combinations_checked
    ));
    out.push_str(&format!(
        "  max deviation:         {}\n",
        prob(pi.max_deviation)
    ));
    out.push_str(&format!(
        "  tolerance:             {}\n",
        prob(pi.tolerance)
    ));
    out.push_str(&format!(
        "  verdict:               {}\n",
        verdict(pi.passed)
    ));
    out.push('\n');
    out.push_str("Remote-outcome dependence (conditional shifts, X basis)\n");
    out.push_str(&format!(
        "  strongest shift:       {}\n",
        prob(oi.max_deviation)
    ));
    out.push_str(&format!(
        "  threshold:             {}\n",
        prob(oi.threshold)
    ));
    match &oi.witness {
        Some(w) => {
            out.push_str(&format!(
                "  witness:               P(X{} = {}) is {} given X{} = {}, \
                 against marginal {}\n",
                w.target_site,
                w.target_outcome,
                prob(w.conditional_probability),
                w.conditioning_site,
                w.conditioning_outcome,
                prob(w.marginal_probability)
            ));
            out.push_str("  verdict:               WITNESS FOUND\n");
        }
        None => {
            out.push_str("  verdict:               NO WITNESS\n");
        }
    }
    out
}

pub fn independence_csv(report: &IndependenceReport) -> Result<String, CliError> {
    let pi = &report.parameter_independence;
    let oi = &report.outcome_independence;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "n_sites",
        "pi_combinations_checked",
        "pi_max_deviation",
        "pi_tolerance",
        "pi_passed",
        "oi_max_deviation",
        "oi_threshold",
        "oi_witness_found",
        "witness_conditioning_site",
        "witness_conditioning_outcome",
        "witness_target_site",
        "witness_target_outcome",
        "witness_conditional_probability",
        "witness_marginal_probability",
        "passed",
    ])?;
    let witness_fields = match &oi.witness {
        Some(w) => [
            w.conditioning_site.to_string(),
            w.conditioning_outcome.to_string(),
            w.target_site.to_string(),
            w.target_outcome.to_string(),
            w.conditional_probability.to_string(),
            w.marginal_probability.to_string(),
        ],
        None => Default::default(),
    };
    let mut record = vec![
        report.n_sites.to_string(),
        pi.combinations_checked.to_string(),
        pi.max_deviation.to_string(),
        pi.tolerance.to_string(),
        pi.passed.to_string(),
        oi.max_deviation.to_string(),
        oi.threshold.to_string(),
        oi.witness_found.to_string(),
    ];
    record.extend(witness_fields);
    record.push(report.passed.to_string());
    writer.write_record(&record)?;
    finish(writer)
}

pub fn constraint_list_text(constraints: &[ZeroProbConstraint]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} zero-probability constraints\n",
        constraints.len()
    ));
    for constraint in constraints {
        out.push_str(&format!("  {constraint}\n"));
    }
    out
}

pub fn constraint_list_csv(constraints: &[ZeroProbConstraint]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["label", "spec"])?;
    for constraint in constraints {
        writer.write_record([constraint.label.to_string(), constraint.spec.to_string()])?;
    }
    finish(writer)
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use avn_core::analysis::{gap_sweep, independence_checks};
    use avn_core::constraints::{constraint_set, verify_constraints};
    use avn_core::lhv::verify_theorem;
    use avn_core::statevector::build_w_state;

    #[test]
    fn constraint_text_counts_families() {
        let state = build_w_state(4).unwrap();
        let set = constraint_set(4, true).unwrap();
        let report = verify_constraints(&state, &set, 1e-12).unwrap();
        let text = constraint_report_text(&report);
        assert!(text.contains("19 (6 occupied-pair, 12 opposite-X-pair, 1 all-empty)"));
        assert!(text.contains("verdict:        PASS"));
        assert!(text.contains("max violation:  0"));
    }

    #[test]
    fn failing_report_lists_violations() {
        use avn_core::statevector::{Complex64, SparseState};
        let bad = SparseState::from_amplitudes(2, [(0b11, Complex64::new(1.0, 0.0))]).unwrap();
        let set = constraint_set(2, true).unwrap();
        let report = verify_constraints(&bad, &set, 1e-12).unwrap();
        assert!(!report.passed);
        let text = constraint_report_text(&report);
        assert!(text.contains("verdict:        FAIL"));
        assert!(text.contains("violated assertions:"));
        assert!(text.contains("Z-pair(0,1)"));
    }

    #[test]
    fn constraint_csv_has_one_row_per_check() {
        let state = build_w_state(3).unwrap();
        let set = constraint_set(3, true).unwrap();
        let report = verify_constraints(&state, &set, 1e-12).unwrap();
        let csv = constraint_report_csv(&report).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + set.len());
        assert_eq!(lines[0], "label,probability");
        assert_eq!(lines[1], "\"Z-pair(0,1)\",0");
    }

    #[test]
    fn theorem_text_includes_survivor_table() {
        let report = verify_theorem(3, true).unwrap();
        let text = theorem_report_text(&report);
        assert!(text.contains("survivors:                6"));
        assert!(text.contains("canonical survivor set:   yes"));
        assert!(text.contains("encoding  z-pattern  x-pattern"));
        // First survivor: site 0 occupied, all X = +1.
        assert!(text.contains("1  -++        +++"));
    }

    #[test]
    fn survivors_csv_is_the_census_table() {
        let report = verify_theorem(2, true).unwrap();
        let csv = theorem_survivors_csv(&report).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines,
            vec![
                "encoding,z_pattern,x_pattern",
                "1,-+,++",
                "2,+-,++",
                "13,-+,--",
                "14,+-,--",
            ]
        );
    }

    #[test]
    fn gap_outputs_are_aligned_and_typed() {
        let rows = gap_sweep(2, 4).unwrap();
        let text = gap_text(&rows);
        assert!(text.contains("n"));
        assert_eq!(text.lines().count(), 2 + rows.len());

        let csv = gap_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "n,local_prediction,quantum_prediction,gap,quantum_simulated"
        );
        assert!(lines[1].starts_with("2,1.0,1.0,0.0,"));
        assert!(lines[2].starts_with("3,1.0,0.75,0.25,"));
    }

    #[test]
    fn independence_text_names_the_witness() {
        let report = independence_checks(2, 1e-12).unwrap();
        let text = independence_text(&report);
        assert!(text.contains("verdict:  PASS"));
        assert!(text.contains("WITNESS FOUND"));
        assert!(text.contains("given X"));

        let csv = independence_csv(&report).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("2,16,"));
    }

    #[test]
    fn constraint_list_renders_all_records() {
        let set = constraint_set(2, true).unwrap();
        let text = constraint_list_text(&set);
        assert!(text.starts_with("4 zero-probability constraints\n"));
        assert!(text.contains("Z-pair(0,1): Z0=-1 Z1=-1"));
        assert!(text.contains("X-pair(0,1,+-): X0=+1 X1=-1"));
        assert!(text.contains("completeness: Z0=+1 Z1=+1"));

        let csv = constraint_list_csv(&set).unwrap();
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn rendering_is_deterministic() {
        let report = verify_theorem(4, false).unwrap();
        assert_eq!(theorem_report_text(&report), theorem_report_text(&report));
        assert_eq!(to_json(&report).unwrap(), to_json(&report).unwrap());

        let rows = gap_sweep(2, 6).unwrap();
        assert_eq!(gap_csv(&rows).unwrap(), gap_csv(&rows).unwrap());
    }
}
