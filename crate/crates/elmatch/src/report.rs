//! Output formatting shared by the CLI and the runnable examples: significant
//! digit formatting, aligned text tables, and CSV emission with a config
//! echo header.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Formats with the given number of significant digits; `full` switches to
/// the shortest representation that round-trips the f64 exactly.
pub fn fmt_sig(x: f64, full: bool) -> String {
    if full {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..7).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_trailing_zeros(&s)
    } else {
        format!("{x:.5e}")
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// An aligned text table: first row is the header, columns padded to the
/// widest cell, numeric columns right-aligned.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let ncols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let numeric: Vec<bool> = (0..ncols)
        .map(|i| {
            rows.iter()
                .all(|r| r[i].parse::<f64>().is_ok() || r[i].is_empty())
                && !rows.is_empty()
        })
        .collect();
    let mut out = String::new();
    let mut line = String::new();
    for (i, h) in header.iter().enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        if numeric[i] {
            let _ = write!(line, "{:>width$}", h, width = widths[i]);
        } else {
            let _ = write!(line, "{:<width$}", h, width = widths[i]);
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if numeric[i] {
                let _ = write!(line, "{:>width$}", cell, width = widths[i]);
            } else {
                let _ = write!(line, "{:<width$}", cell, width = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Writes CSV with `# key = value` comment lines echoing the resolved
/// configuration, then a header row, then the data rows.
pub fn write_csv(
    path: &Path,
    config_echo: &[(String, String)],
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = String::new();
    for (k, v) in config_echo {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}
