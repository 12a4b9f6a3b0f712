//! Markdown and JSON renderings of a [`RankReport`].

use std::fmt::Write as _;

use smotenn_core::eval::{Decision, RankReport};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Json,
}

pub fn render(title: &str, report: &RankReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Markdown => Ok(markdown(title, report)),
        ReportFormat::Json => {
            Ok(serde_json::to_string_pretty(&serde_json::json!({ "title": title, "report": report }))?)
        }
    }
}

pub fn markdown(title: &str, r: &RankReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## {title}\n");
    let _ = writeln!(s, "{} experiments, {} methods, control `{}`.\n", r.rows, r.method_names.len(), r.control);

    let mut order: Vec<usize> = (0..r.method_names.len()).collect();
    order.sort_by(|&a, &b| r.avg_ranks[a].total_cmp(&r.avg_ranks[b]));
    s.push_str("| Method | Avg. rank | W/T/L vs control |\n|---|---:|---:|\n");
    for j in order {
        let w = r.wins_ties_losses[j];
        let wtl = if r.method_names[j] == r.control {
            "-".to_string()
        } else {
            format!("{}/{}/{}", w.wins, w.ties, w.losses)
        };
        let _ = writeln!(s, "| {} | {:.3} | {} |", r.method_names[j], r.avg_ranks[j], wtl);
    }
    let _ = writeln!(
        s,
        "\nFriedman chi-square {:.4}, Iman-Davenport F {:.4}, p = {:.3e}.\n",
        r.friedman_chi2, r.iman_davenport_f, r.p_value
    );
    let _ = writeln!(s, "Holm step-down against `{}` (alpha = {}):\n", r.control, r.alpha);
    s.push_str("| Method | z | p-value | Threshold | Outcome |\n|---|---:|---:|---:|---|\n");
    for h in &r.holm {
        let outcome = match h.decision {
            Decision::Reject => "reject",
            Decision::NotReject => "not reject",
        };
        let _ = writeln!(s, "| {} | {:.4} | {:.3e} | {:.4} | {} |", h.method, h.z, h.p_value, h.threshold, outcome);
    }
    s
}
