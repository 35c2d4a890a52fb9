//! CSV reports headed by a `#` stanza that makes each run reproducible.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

pub const TIMESTAMP_PREFIX: &str = "# timestamp:";

pub struct Report {
    out: Box<dyn Write>,
}

impl Report {
    /// Opens the destination (`None` is stdout) and writes the stanza.
    pub fn create(out: Option<&Path>, command: &str, seed: Option<u64>, config: &[(String, String)]) -> Result<Self> {
        let out: Box<dyn Write> = match out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        let mut report = Report { out };
        report.comment(&format!("symdyn {}", env!("CARGO_PKG_VERSION")))?;
        report.comment(&format!("command: {command}"))?;
        match seed {
            Some(seed) => report.comment(&format!("seed: {seed}"))?,
            None => report.comment("seed: none")?,
        }
        for (key, value) in config {
            report.comment(&format!("config: {key}={value}"))?;
        }
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        writeln!(report.out, "{TIMESTAMP_PREFIX} {now}")?;
        Ok(report)
    }

    pub fn comment(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            writeln!(self.out, "# {line}")?;
        }
        Ok(())
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut line = csv::Writer::from_writer(Vec::new());
        line.write_record(fields)?;
        self.out.write_all(&line.into_inner().map_err(|e| e.into_error())?)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
