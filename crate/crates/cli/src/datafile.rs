//! Strict reader for censored-data CSV files.
//!
//! Expected layout: a `z,delta` header followed by one `value,indicator`
//! row per observation, where `value` is a positive real and `indicator`
//! is `0` (censored) or `1` (uncensored). Malformed rows are hard errors
//! carrying their 1-based line number.

use std::fs;
use std::path::Path;

use tailcen_core::CensoredSample;

use crate::commands::CliError;

pub fn read_censored_csv(path: &Path) -> Result<CensoredSample, CliError> {
    let content = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let parse_err = |line: usize, message: String| CliError::Parse {
        path: display.clone(),
        line,
        message,
    };

    let mut lines = content.lines().enumerate();
    let header = match lines.next() {
        Some((_, h)) => h,
        None => return Err(parse_err(1, "empty file, expected header \"z,delta\"".into())),
    };
    if header.trim() != "z,delta" {
        return Err(parse_err(
            1,
            format!("expected header \"z,delta\", got \"{}\"", header.trim()),
        ));
    }

    let mut z = Vec::new();
    let mut delta = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let mut fields = raw.split(',');
        let (z_field, d_field) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("expected two comma-separated fields, got \"{raw}\""),
                ))
            }
        };
        let value: f64 = z_field
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid z value \"{z_field}\"")))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(parse_err(
                line_no,
                format!("z must be positive and finite, got {value}"),
            ));
        }
        let indicator = match d_field {
            "0" => false,
            "1" => true,
            other => {
                return Err(parse_err(
                    line_no,
                    format!("delta must be 0 or 1, got \"{other}\""),
                ))
            }
        };
        z.push(value);
        delta.push(indicator);
    }
    if z.is_empty() {
        return Err(parse_err(2, "no data rows after the header".into()));
    }
    CensoredSample::new(z, delta).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_valid_file() {
        let f = write_temp("z,delta\n1.5,1\n2.25,0\n3e2,1\n");
        let sample = read_censored_csv(f.path()).unwrap();
        assert_eq!(sample.len(), 3);
        assert_eq!(sample.z(), &[1.5, 2.25, 300.0]);
        assert_eq!(sample.delta(), &[true, false, true]);
    }

    #[test]
    fn rejects_empty_file() {
        let f = write_temp("");
        match read_censored_csv(f.path()).unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_header_only() {
        let f = write_temp("z,delta\n");
        assert!(matches!(
            read_censored_csv(f.path()),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        for (content, bad_line) in [
            ("z,delta\n1.0,1\nnope,1\n", 3),
            ("z,delta\n1.0,2\n", 2),
            ("z,delta\n-1.0,1\n", 2),
            ("z,delta\n1.0\n", 2),
            ("z,delta\n1.0,1,9\n", 2),
            ("wrong,header\n1.0,1\n", 1),
        ] {
            let f = write_temp(content);
            match read_censored_csv(f.path()).unwrap_err() {
                CliError::Parse { line, .. } => assert_eq!(line, bad_line, "content {content:?}"),
                other => panic!("unexpected error {other:?}"),
            }
        }
    }
}
