//! Tables as tidy CSV (one observation per row) or JSON.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Where and how tables go.
pub struct Sink {
    pub format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    pub fn new(format: Format, path: Option<&Path>) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?),
            None => Box::new(io::stdout()),
        };
        Ok(Sink { format, out })
    }

    /// Writes a table. CSV output starts with a `#` line describing the
    /// quantity and its units, followed by the column header.
    pub fn table<T: Serialize>(&mut self, description: &str, rows: &[T]) -> Result<(), CliError> {
        match self.format {
            Format::Csv => {
                writeln!(self.out, "# {description}").map_err(io_error)?;
                let mut w = csv::Writer::from_writer(&mut self.out);
                for r in rows {
                    w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
                }
                w.flush().map_err(io_error)?;
            }
            Format::Json => {
                let doc = serde_json::json!({ "description": description, "rows": rows });
                let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(self.out, "{text}").map_err(io_error)?;
            }
        }
        Ok(())
    }

    pub fn raw(&mut self) -> &mut dyn Write {
        &mut self.out
    }
}

fn io_error(e: io::Error) -> CliError {
    CliError::Output(e.to_string())
}
