//! CSV output and re-parsing.
//!
//! Schema: header `t,concurrence,entropy,norm,mean_photon,p00,p01,p10,p11`,
//! one row per sample, 12 significant digits throughout. Identical runs
//! produce byte-identical files.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::EvolutionTrace;
use crate::error::{Error, Result};
use crate::observables::EntanglementSample;

pub const CSV_HEADER: &str = "t,concurrence,entropy,norm,mean_photon,p00,p01,p10,p11";

/// Environment variable that redirects all file output into a directory.
pub const OUTPUT_DIR_ENV: &str = "QDOT_CAVITY_OUTDIR";

/// Resolve the effective output path: when [`OUTPUT_DIR_ENV`] is set, the
/// configured file name is placed inside that directory instead.
pub fn resolve_output_path(configured: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let file = configured.file_name().unwrap_or(configured.as_os_str());
            PathBuf::from(dir).join(file)
        }
        _ => configured.to_path_buf(),
    }
}

fn format_row(s: &EntanglementSample, entropy_base: f64) -> String {
    // Entropy is stored in bits; change of base is a constant factor.
    let entropy = s.entropy / entropy_base.log2();
    format!(
        "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
        s.t,
        s.concurrence,
        entropy,
        s.norm,
        s.mean_photon,
        s.populations[0],
        s.populations[1],
        s.populations[2],
        s.populations[3],
    )
}

/// Write a trace to `writer` with entropies converted to the given
/// logarithm base (2 = bits).
pub fn write_trace<W: Write>(trace: &EvolutionTrace, entropy_base: f64, writer: W) -> Result<()> {
    let mut out = BufWriter::new(writer);
    writeln!(out, "{CSV_HEADER}")?;
    for sample in trace.samples() {
        writeln!(out, "{}", format_row(sample, entropy_base))?;
    }
    out.flush()?;
    Ok(())
}

/// Write a trace to a file, creating parent directories as needed.
pub fn write_trace_file(trace: &EvolutionTrace, entropy_base: f64, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file = std::fs::File::create(path)?;
    write_trace(trace, entropy_base, file)
}

/// Parse a CSV emitted by [`write_trace`] back into samples.
pub fn read_trace_csv(path: &Path) -> Result<Vec<EntanglementSample>> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(Ok(header)) if header == CSV_HEADER => {}
        other => {
            return Err(Error::Config {
                message: format!("unexpected CSV header in {}: {other:?}", path.display()),
            })
        }
    }
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Config {
                    message: format!("row {}: bad number `{f}`", idx + 2),
                })
            })
            .collect::<Result<_>>()?;
        if fields.len() != 9 {
            return Err(Error::Config {
                message: format!("row {}: expected 9 columns, got {}", idx + 2, fields.len()),
            });
        }
        samples.push(EntanglementSample {
            t: fields[0],
            concurrence: fields[1],
            entropy: fields[2],
            norm: fields[3],
            mean_photon: fields[4],
            populations: [fields[5], fields[6], fields[7], fields[8]],
        });
    }
    Ok(samples)
}
