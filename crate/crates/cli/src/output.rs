//! File outputs: curve CSVs and balance-sheet reports. All numeric CSV
//! cells use 12 significant digits in scientific notation so reruns are
//! byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// 12 significant digits, scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_report(path: &Path, lines: &[String]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_has_twelve_significant_digits() {
        assert_eq!(fmt_sig(1.0), "1.00000000000e0");
        assert_eq!(fmt_sig(0.061), "6.10000000000e-2");
        assert_eq!(fmt_sig(206.5257), "2.06525700000e2");
    }
}
