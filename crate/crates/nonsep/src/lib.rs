//! File formats, scenario runner and command implementations for the
//! `nonsep` command line tool, on top of `nonsep-core`.

pub mod error;
pub mod formats;
pub mod scenario;

use std::fs;
use std::io::Write;
use std::path::Path;

use nonsep_core::ToleranceContext;

pub use error::Error;

/// Tolerances from a single `--tol` value: geometry and gap thresholds equal
/// it, the LP feasibility threshold is ten times looser.
pub fn tolerance(tol: Option<f64>) -> Result<ToleranceContext, Error> {
    match tol {
        None => Ok(ToleranceContext::default()),
        Some(t) => ToleranceContext::new(t, 10.0 * t, t).ok_or_else(|| Error::Input(format!("tolerance {t} must be positive and finite"))),
    }
}

/// Shortest round-trip decimal form; exponent notation for very small or
/// large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_string<I>(header: &[&str], rows: I) -> Result<String, Error>
where
    I: Iterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            fs::write(p, text).map_err(|e| Error::io(p, e))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_mapping() {
        let t = tolerance(Some(1e-7)).unwrap();
        assert_eq!((t.geom, t.lp, t.gap), (1e-7, 1e-6, 1e-7));
        assert!(tolerance(Some(0.0)).is_err());
        assert_eq!(tolerance(None).unwrap(), ToleranceContext::default());
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], [vec!["1".into(), fmt_f64(1e-12)]].into_iter()).unwrap();
        assert_eq!(s, "a,b\n1,1e-12\n");
    }
}
