//! Campaign reports: a header echoing the configuration, one row per
//! (entry, width) verdict, and totals.
//!
//! The JSON form is the source of truth — it deserializes back to the same
//! [`Report`] — and the markdown and CSV forms are projections of it.
//! Reports deliberately exclude anything runtime-dependent (wall-clock
//! times, worker counts), so two runs with the same catalog, configuration
//! and seed render byte-identical output regardless of parallelism.

use bvic_core::verify::{Mode, Status, Verdict, VerifyConfig};
use serde::{Deserialize, Serialize};

pub const TOOL_NAME: &str = "bvic";

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Output format selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    #[value(name = "md")]
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub header: Header,
    pub rows: Vec<Row>,
    pub totals: Totals,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub rng_seed: u64,
    pub exhaustive_widths: Vec<u32>,
    pub sampled_widths: Vec<u32>,
    pub samples_per_width: u64,
    pub witness_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub entry: String,
    pub width: u32,
    pub mode: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<CounterexampleRow>,
    pub stats: StatsRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleRow {
    pub s: String,
    pub t: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub pairs_checked: u64,
    pub forward_samples: u64,
    pub backward_pairs: u64,
    pub backward_ic_true: u64,
    pub witnesses_via_hint: u64,
    pub witnesses_via_search: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub rows: u64,
    pub valid: u64,
    pub counterexamples: u64,
    pub forward_only: u64,
    pub inconclusive: u64,
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exhaustive => "exhaustive",
        Mode::Sampled => "sampled",
    }
}

pub fn status_name(status: Status) -> &'static str {
    match status {
        Status::Valid => "valid",
        Status::CounterexampleFound => "counterexample",
        Status::ForwardOnly => "forward-only",
        Status::Inconclusive => "inconclusive",
    }
}

impl Report {
    /// Builds a report over the verdicts of a campaign run with `config`.
    pub fn from_verdicts(config: &VerifyConfig, verdicts: &[Verdict]) -> Report {
        let header = Header {
            tool: TOOL_NAME.to_owned(),
            version: tool_version().to_owned(),
            rng_seed: config.rng_seed,
            exhaustive_widths: config.exhaustive_widths.iter().copied().collect(),
            sampled_widths: config.sampled_widths.iter().copied().collect(),
            samples_per_width: config.samples_per_width,
            witness_budget: config.witness_budget,
        };
        let rows: Vec<Row> = verdicts
            .iter()
            .map(|v| Row {
                entry: v.entry.clone(),
                width: v.width,
                mode: mode_name(v.mode).to_owned(),
                status: status_name(v.status).to_owned(),
                counterexample: v.counterexample.as_ref().map(|ce| CounterexampleRow {
                    s: ce.s.to_string(),
                    t: ce.t.to_string(),
                    x: ce.x.as_ref().map(|x| x.to_string()),
                }),
                stats: StatsRow {
                    pairs_checked: v.stats.pairs_checked,
                    forward_samples: v.stats.forward_samples,
                    backward_pairs: v.stats.backward_pairs,
                    backward_ic_true: v.stats.backward_ic_true,
                    witnesses_via_hint: v.stats.witnesses_via_hint,
                    witnesses_via_search: v.stats.witnesses_via_search,
                },
            })
            .collect();
        let mut totals = Totals {
            rows: rows.len() as u64,
            ..Totals::default()
        };
        for v in verdicts {
            match v.status {
                Status::Valid => totals.valid += 1,
                Status::CounterexampleFound => totals.counterexamples += 1,
                Status::ForwardOnly => totals.forward_only += 1,
                Status::Inconclusive => totals.inconclusive += 1,
            }
        }
        Report {
            header,
            rows,
            totals,
        }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Markdown => self.to_markdown(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let h = &self.header;
        out.push_str("# invertibility verification report\n\n");
        out.push_str(&format!("- tool: {} {}\n", h.tool, h.version));
        out.push_str(&format!("- rng seed: {}\n", h.rng_seed));
        out.push_str(&format!(
            "- exhaustive widths: {}\n",
            join_widths(&h.exhaustive_widths)
        ));
        out.push_str(&format!(
            "- sampled widths: {}\n",
            join_widths(&h.sampled_widths)
        ));
        out.push_str(&format!("- samples per width: {}\n", h.samples_per_width));
        out.push_str(&format!("- witness budget: {}\n\n", h.witness_budget));
        out.push_str(
            "| entry | width | mode | status | counterexample | pairs | forward | backward | ic-true | hint | search |\n",
        );
        out.push_str("|---|---:|---|---|---|---:|---:|---:|---:|---:|---:|\n");
        for row in &self.rows {
            let ce = row.counterexample.as_ref().map_or(String::new(), |ce| {
                let mut text = format!("s={}, t={}", ce.s, ce.t);
                if let Some(x) = &ce.x {
                    text.push_str(&format!(", x={x}"));
                }
                text
            });
            let s = &row.stats;
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
                row.entry,
                row.width,
                row.mode,
                row.status,
                ce,
                s.pairs_checked,
                s.forward_samples,
                s.backward_pairs,
                s.backward_ic_true,
                s.witnesses_via_hint,
                s.witnesses_via_search
            ));
        }
        let t = &self.totals;
        out.push_str(&format!(
            "\ntotals: {} valid, {} counterexample, {} forward-only, {} inconclusive ({} rows)\n",
            t.valid, t.counterexamples, t.forward_only, t.inconclusive, t.rows
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "entry,width,mode,status,ce_s,ce_t,ce_x,pairs_checked,forward_samples,backward_pairs,backward_ic_true,witnesses_via_hint,witnesses_via_search\n",
        );
        for row in &self.rows {
            let (ce_s, ce_t, ce_x) = match &row.counterexample {
                None => (String::new(), String::new(), String::new()),
                Some(ce) => (
                    ce.s.clone(),
                    ce.t.clone(),
                    ce.x.clone().unwrap_or_default(),
                ),
            };
            let s = &row.stats;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                csv_field(&row.entry),
                row.width,
                row.mode,
                row.status,
                ce_s,
                ce_t,
                ce_x,
                s.pairs_checked,
                s.forward_samples,
                s.backward_pairs,
                s.backward_ic_true,
                s.witnesses_via_hint,
                s.witnesses_via_search
            ));
        }
        out
    }
}

fn join_widths(widths: &[u32]) -> String {
    if widths.is_empty() {
        return "none".to_owned();
    }
    widths
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bvic_core::{Catalog, VerifyConfig};
    use bvic_core::verify::verify_campaign;

    fn small_report() -> (VerifyConfig, Report) {
        let config = VerifyConfig {
            exhaustive_widths: [1, 2].into(),
            sampled_widths: [1, 18].into(),
            samples_per_width: 40,
            witness_budget: 8,
            rng_seed: 3,
            workers: 1,
        };
        let verdicts = verify_campaign(&Catalog::seed(), &config).unwrap();
        let report = Report::from_verdicts(&config, &verdicts);
        (config, report)
    }

    #[test]
    fn one_row_per_entry_width_and_totals_add_up() {
        let (_, report) = small_report();
        // Width 1 is deduplicated into the exhaustive pass: 3 widths/entry.
        assert_eq!(report.rows.len(), 15);
        let mut keys: Vec<(String, u32)> = report
            .rows
            .iter()
            .map(|r| (r.entry.clone(), r.width))
            .collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 15, "(entry, width) pairs are unique");
        let t = &report.totals;
        assert_eq!(t.rows, 15);
        assert_eq!(
            t.valid + t.counterexamples + t.forward_only + t.inconclusive,
            t.rows
        );
        assert_eq!(report.header.exhaustive_widths, [1, 2]);
        assert_eq!(report.header.sampled_widths, [1, 18]);
    }

    #[test]
    fn json_round_trips() {
        let (_, report) = small_report();
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn markdown_and_csv_are_projections() {
        let (_, report) = small_report();
        let md = report.to_markdown();
        assert!(md.contains("| add-eq | 1 | exhaustive | valid |"));
        assert!(md.lines().any(|l| l.starts_with("totals: ")));
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), report.rows.len() + 1);
        assert!(csv.lines().nth(1).unwrap().starts_with("add-eq,1,exhaustive,valid,"));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn counterexamples_render_in_every_format() {
        let config = VerifyConfig {
            exhaustive_widths: [1].into(),
            sampled_widths: [].into(),
            ..VerifyConfig::default()
        };
        let mut catalog = Catalog::new();
        let broken = Catalog::seed()
            .get("and-eq")
            .unwrap()
            .with_ic(bvic_core::Cond::True)
            .unwrap();
        catalog.load(vec![broken]).unwrap();
        let verdicts = verify_campaign(&catalog, &config).unwrap();
        let report = Report::from_verdicts(&config, &verdicts);
        let ce = report.rows[0].counterexample.as_ref().unwrap();
        assert_eq!((ce.s.as_str(), ce.t.as_str()), ("#b0", "#b1"));
        assert!(report.to_markdown().contains("s=#b0, t=#b1"));
        assert!(report.to_csv().contains("counterexample,#b0,#b1,"));
        assert!(report.to_json().contains("\"s\": \"#b0\""));
    }
}
