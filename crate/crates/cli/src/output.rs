use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `<crate version>+g<short rev>`.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+g", env!("EDGETRI_GIT_REV"));

/// SHA-256 of the compact JSON form of the resolved config.
pub fn config_hash<C: Serialize>(config: &C) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Header object embedded in every output file.
pub fn metadata<C: Serialize>(kind: &str, config: &C) -> Result<Value> {
    Ok(json!({
        "schema": format!("edgetri.{kind}/{SCHEMA_VERSION}"),
        "version": VERSION,
        "config": config,
        "config_hash": config_hash(config)?,
    }))
}

/// File at `path`, or stdout when absent.
pub struct Sink {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    fn describe(&self) -> String {
        match &self.path {
            Some(p) => p.display().to_string(),
            None => "stdout".into(),
        }
    }

    /// Pretty JSON: the metadata object with `body`'s fields merged in.
    pub fn write_json(mut self, meta: Value, body: Value) -> Result<()> {
        let mut doc = meta;
        if let (Some(d), Value::Object(b)) = (doc.as_object_mut(), body) {
            d.extend(b);
        }
        let where_ = self.describe();
        serde_json::to_writer_pretty(&mut self.inner, &doc).with_context(|| format!("writing {where_}"))?;
        writeln!(self.inner).and_then(|_| self.inner.flush()).with_context(|| format!("writing {where_}"))
    }

    /// CSV preceded by a `# {metadata}` line.
    pub fn write_csv<R: Serialize>(mut self, meta: &Value, header: &[&str], rows: &[R]) -> Result<()> {
        let where_ = self.describe();
        writeln!(self.inner, "# {}", serde_json::to_string(meta)?).with_context(|| format!("writing {where_}"))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut self.inner);
        w.write_record(header).with_context(|| format!("writing {where_}"))?;
        for r in rows {
            w.serialize(r).with_context(|| format!("writing {where_}"))?;
        }
        w.flush().with_context(|| format!("writing {where_}"))?;
        drop(w);
        self.inner.flush().with_context(|| format!("writing {where_}"))
    }

    /// Hands the raw writer to a caller that formats its own body.
    pub fn with_writer<F: FnOnce(&mut dyn Write) -> edgetri::Result<()>>(mut self, f: F) -> Result<()> {
        let where_ = self.describe();
        f(&mut self.inner).with_context(|| format!("writing {where_}"))?;
        self.inner.flush().with_context(|| format!("writing {where_}"))
    }
}
