//! Report and table output: JSON with fixed 17-significant-digit floats and
//! plain CSV with `\n` line endings, both byte-deterministic for identical
//! inputs and tool version.

use crate::config::ResolvedConfig;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// One named check with the tolerance it was judged against.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub comparator: String,
    pub threshold: f64,
}

impl Check {
    pub fn less(name: &str, measured: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            passed: measured < threshold,
            measured,
            comparator: "<".into(),
            threshold,
        }
    }

    pub fn greater(name: &str, measured: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            passed: measured > threshold,
            measured,
            comparator: ">".into(),
            threshold,
        }
    }

    /// Boolean condition encoded as 1.0 / 0.0 == 1.0.
    pub fn holds(name: &str, condition: bool) -> Check {
        Check {
            name: name.into(),
            passed: condition,
            measured: if condition { 1.0 } else { 0.0 },
            comparator: "==".into(),
            threshold: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub levels: Vec<f64>,
    pub grid_xmin: f64,
    pub grid_xmax: f64,
    pub grid_n: usize,
    pub grid_h: f64,
}

impl SpectrumSummary {
    pub fn new(spec: &ssb_core::eigen::Spectrum) -> SpectrumSummary {
        SpectrumSummary {
            levels: spec.levels().to_vec(),
            grid_xmin: spec.grid().xmin(),
            grid_xmax: spec.grid().xmax(),
            grid_n: spec.grid().n(),
            grid_h: spec.grid().h(),
        }
    }
}

/// Machine-readable experiment report, `schema: 1`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub experiment: String,
    pub passed: bool,
    pub error: Option<String>,
    pub config: ResolvedConfig,
    pub checks: Vec<Check>,
    pub spectrum: Option<SpectrumSummary>,
    pub degeneracy: Option<ssb_core::eigen::DegeneracyReport>,
    pub ssb: Option<ssb_core::symmetry::SsbVerdict>,
    pub values: BTreeMap<String, f64>,
    pub tables: Vec<String>,
}

impl Report {
    pub fn new(config: ResolvedConfig) -> Report {
        Report {
            schema: 1,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            experiment: config.experiment.clone(),
            passed: false,
            error: None,
            config,
            checks: Vec::new(),
            spectrum: None,
            degeneracy: None,
            ssb: None,
            values: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn finish(&mut self) {
        self.passed = self.error.is_none() && self.checks.iter().all(|c| c.passed);
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::new());
        self.serialize(&mut ser)?;
        buf.push(b'\n');
        std::fs::write(&path, buf)?;
        Ok(path)
    }
}

/// Format a float with 17 significant digits, enough to round-trip f64.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Pretty JSON formatter that pins every float to 17 significant digits.
pub struct SciFormatter {
    indent: usize,
    has_value: bool,
}

impl SciFormatter {
    pub fn new() -> SciFormatter {
        SciFormatter {
            indent: 0,
            has_value: false,
        }
    }

    fn newline<W: ?Sized + Write>(&self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b"\n")?;
        for _ in 0..self.indent {
            writer.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Default for SciFormatter {
    fn default() -> Self {
        Self::new()
    }
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"[")
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"]")
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn end_array_value<W>(&mut self, _writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"{")
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"}")
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        writer.write_all(b": ")
    }

    fn end_object_value<W>(&mut self, _writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.has_value = true;
        Ok(())
    }
}

/// Write a CSV table: header row, UTF-8, `\n` endings.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(&path, text.as_bytes())?;
    Ok(path)
}
