//! Report assembly and output: one JSON document per run plus one CSV file per
//! curve-producing probe action. Both formats are deterministic byte-for-byte for a
//! fixed config and seed: field order is fixed by the structs, numbers use Rust's
//! shortest round-trip formatting, and no timing data is serialized.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use kernelscope_core::classify::ClassificationReport;
use kernelscope_core::probe::ProbeReport;

/// The full result document of one run.
#[derive(Debug, Serialize)]
pub struct FullReport {
    /// Config file stem the run came from.
    pub config: String,
    /// Kernel family name from the registry.
    pub family: String,
    /// Human-readable kernel description.
    pub kernel: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    pub probes: Vec<ProbeReport>,
    /// True iff every pass/fail flag of every probe passed.
    pub passed: bool,
}

impl FullReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }
}

/// CSV header shared by all curve files.
pub const CSV_HEADER: &str = "basis_size,target_name,sup_error";

/// Renders the error curves of one probe as CSV (header + one row per point,
/// curves in declaration order).
pub fn curves_to_csv(report: &ProbeReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for curve in &report.curves {
        for point in &curve.points {
            out.push_str(&format!(
                "{},{},{}\n",
                point.basis_size, curve.target, point.sup_error
            ));
        }
    }
    out
}

/// Writes the JSON report and one CSV per probe with curves; returns the paths
/// written, JSON first.
pub fn write_outputs(report: &FullReport, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut written = Vec::new();

    let json_path = out_dir.join(format!("{}.report.json", report.config));
    let mut json = serde_json::to_string_pretty(report).context("serializing report")?;
    json.push('\n');
    fs::write(&json_path, json).with_context(|| format!("writing {}", json_path.display()))?;
    written.push(json_path);

    for probe in &report.probes {
        if probe.curves.is_empty() {
            continue;
        }
        let csv_path = out_dir.join(format!("{}.{}.csv", report.config, probe.action));
        fs::write(&csv_path, curves_to_csv(probe))
            .with_context(|| format!("writing {}", csv_path.display()))?;
        written.push(csv_path);
    }
    Ok(written)
}

/// Human-readable run summary for stdout.
pub fn render_summary(report: &FullReport, written: &[PathBuf]) -> String {
    let mut out = String::new();
    out.push_str(&format!("kernel: {} — {}\n", report.family, report.kernel));
    if let Some(c) = &report.classification {
        out.push_str(&format!(
            "classify: universal={} characteristic={} c0-universal={}\n",
            c.universal.status, c.characteristic.status, c.c0_universal.status
        ));
        for (name, verdict) in [
            ("universal", &c.universal),
            ("characteristic", &c.characteristic),
            ("c0-universal", &c.c0_universal),
        ] {
            if let Some(rule) = verdict.rule_id {
                out.push_str(&format!("  {name}: rule {rule} — {}\n", verdict.explanation));
            } else {
                out.push_str(&format!("  {name}: {}\n", verdict.explanation));
            }
        }
    }
    for probe in &report.probes {
        let status = if probe.flags.iter().all(|f| f.pass) {
            "pass"
        } else {
            "FAIL"
        };
        out.push_str(&format!(
            "{}: {} ({} flags) in {:.2?}\n",
            probe.action,
            status,
            probe.flags.len(),
            probe.runtime
        ));
        for flag in &probe.flags {
            let op = match flag.kind {
                kernelscope_core::probe::FlagKind::AtMost => "<=",
                kernelscope_core::probe::FlagKind::AtLeast => ">=",
            };
            out.push_str(&format!(
                "  {} = {:.3e} {} {:.3e}: {}\n",
                flag.name,
                flag.value,
                op,
                flag.threshold,
                if flag.pass { "pass" } else { "FAIL" }
            ));
        }
        for row in &probe.mmd_rows {
            out.push_str(&format!(
                "  {}: mmd2 = {:.6e}, total variation = {:.4}\n",
                row.label, row.mmd2, row.total_variation
            ));
        }
    }
    for path in written {
        out.push_str(&format!("wrote {}\n", path.display()));
    }
    out
}
