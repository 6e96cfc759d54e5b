use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use geotrans::transition::TransitionPath;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Bad flags or environment, reported with exit status 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, thiserror::Error)]
#[error("solution does not verify")]
pub struct VerificationFailed;

#[derive(Debug, thiserror::Error)]
#[error("transition failed at t = {t} (last good sample {last_good:?}): {source}")]
pub struct TransitionError {
    pub t: f64,
    pub last_good: Option<f64>,
    pub source: geotrans::Error,
}

fn is_usage(e: &geotrans::Error) -> bool {
    matches!(e, geotrans::Error::InvalidInput(_) | geotrans::Error::InvalidWord(_))
}

/// Error code, detail and exit status.
pub fn classify(e: &anyhow::Error) -> (&'static str, String, u8) {
    let detail = format!("{e:#}");
    if let Some(g) = e.downcast_ref::<geotrans::Error>() {
        return (g.code(), detail, if is_usage(g) { 1 } else { 2 });
    }
    if let Some(t) = e.downcast_ref::<TransitionError>() {
        return (t.source.code(), detail, 2);
    }
    if e.is::<VerificationFailed>() {
        return ("verification-failed", detail, 2);
    }
    if e.is::<UsageError>() {
        return ("usage", detail, 1);
    }
    if e.is::<serde_json::Error>() {
        return ("parse", detail, 1);
    }
    if e.is::<io::Error>() {
        return ("io", detail, 1);
    }
    ("internal", detail, 1)
}

pub fn report_error(code: &str, detail: &str) {
    let v = serde_json::json!({ "error": code, "detail": detail });
    eprintln!("{v}");
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// One row per shape and sample, plus a row `j = H` for the constrained
/// boundary monomial.
pub fn write_transition_csv(out: Option<&Path>, path: &TransitionPath) -> anyhow::Result<()> {
    if path.samples.is_empty() {
        return Err(UsageError("empty transition path".into()).into());
    }
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(["t", "j", "re", "im", "c1", "ci", "ct", "cit"])?;
    for s in &path.samples {
        let rows = s
            .solution
            .z
            .iter()
            .zip(&s.clifford)
            .enumerate()
            .map(|(j, (z, c))| ((j + 1).to_string(), *z, *c))
            .chain(std::iter::once(("H".to_string(), s.boundary, s.boundary_clifford)));
        for (j, z, c) in rows {
            let [c1, ci, ct, cit] = c.coords();
            let mut rec = vec![s.t.to_string(), j, z.re.to_string(), z.im.to_string()];
            rec.extend([c1, ci, ct, cit].iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
