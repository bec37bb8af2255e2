//! Data file reading: one numeric value per line. Blank lines and lines
//! starting with '#' are ignored. If the first data line is not a number it
//! is taken as a single-column CSV header and skipped; any later non-numeric
//! line is an error naming the offending line.

use std::path::{Path, PathBuf};

/// Input-side failure, reported with the file and (when known) the line.
#[derive(Debug)]
pub struct InputError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{line}: {}", self.path.display(), self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

fn fail(path: &Path, line: Option<usize>, message: impl Into<String>) -> InputError {
    InputError {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn read_values(path: &Path) -> Result<Vec<f64>, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let message = if e.kind() == std::io::ErrorKind::NotFound {
            "file not found".to_string()
        } else {
            e.to_string()
        };
        fail(path, None, message)
    })?;

    let mut values = Vec::new();
    let mut header_possible = true;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                header_possible = false;
                values.push(v);
            }
            Ok(_) => {
                return Err(fail(
                    path,
                    Some(line_no),
                    format!("non-finite value {line:?}"),
                ));
            }
            Err(_) => {
                if header_possible {
                    header_possible = false;
                } else {
                    return Err(fail(
                        path,
                        Some(line_no),
                        format!("expected a number, found {line:?}"),
                    ));
                }
            }
        }
    }

    if values.is_empty() {
        return Err(fail(path, None, "no numeric values found"));
    }
    Ok(values)
}
