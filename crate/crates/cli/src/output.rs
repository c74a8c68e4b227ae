use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Core(gp_core::Error),
    /// Unreadable or malformed input (treated like a precondition violation).
    Input(String),
    /// Flags that parse but do not make sense together.
    Usage(String),
    Output(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) | CliError::Usage(m) => write!(f, "{m}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_precondition() => 2,
            CliError::Core(_) => 3,
            CliError::Input(_) => 2,
            CliError::Usage(_) => 1,
            CliError::Output(_) => 3,
        }
    }
}

impl From<gp_core::Error> for CliError {
    fn from(e: gp_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub enum Body {
    Json(Value),
    Csv { header: Vec<&'static str>, rows: Vec<Vec<f64>> },
    /// Human-readable lines on stdout; the JSON goes to `--output` if given.
    Report { lines: Vec<String>, json: Value },
}

pub struct Artifact {
    pub command: &'static str,
    pub config: Value,
    pub body: Body,
    /// Process exit status when everything was written.
    pub status: u8,
}

impl Artifact {
    pub fn json<C: Serialize, R: Serialize>(command: &'static str, config: &C, result: &R) -> Result<Self, CliError> {
        Ok(Self { command, config: to_value(config)?, body: Body::Json(to_value(result)?), status: 0 })
    }

    pub fn csv<C: Serialize>(command: &'static str, config: &C, header: Vec<&'static str>, rows: Vec<Vec<f64>>) -> Result<Self, CliError> {
        Ok(Self { command, config: to_value(config)?, body: Body::Csv { header, rows }, status: 0 })
    }

    fn envelope(&self, threads: Option<usize>, result: &Value) -> Value {
        json!({ "command": self.command, "config": self.config, "threads": threads, "result": result })
    }

    pub fn write(&self, path: Option<&Path>, threads: Option<usize>) -> Result<(), CliError> {
        let out_err = |e: io::Error| CliError::Output(e.to_string());
        match &self.body {
            Body::Report { lines, json } => {
                let mut stdout = io::stdout().lock();
                for l in lines {
                    writeln!(stdout, "{l}").map_err(out_err)?;
                }
                if let Some(p) = path {
                    let text = serde_json::to_string_pretty(&self.envelope(threads, json)).expect("JSON values serialize");
                    std::fs::write(p, text + "\n").map_err(out_err)?;
                }
                Ok(())
            }
            body => {
                let mut sink: Box<dyn Write> = match path {
                    Some(p) => Box::new(File::create(p).map_err(out_err)?),
                    None => Box::new(io::stdout().lock()),
                };
                match body {
                    Body::Json(v) => {
                        let text = serde_json::to_string_pretty(&self.envelope(threads, v)).expect("JSON values serialize");
                        writeln!(sink, "{text}").map_err(out_err)?;
                    }
                    Body::Csv { header, rows } => {
                        let cfg = json!({ "command": self.command, "config": self.config, "threads": threads });
                        writeln!(sink, "# {cfg}").map_err(out_err)?;
                        let mut w = csv::Writer::from_writer(sink);
                        let csv_err = |e: csv::Error| CliError::Output(e.to_string());
                        w.write_record(header).map_err(csv_err)?;
                        for row in rows {
                            w.write_record(row.iter().map(|x| x.to_string())).map_err(csv_err)?;
                        }
                        w.flush().map_err(out_err)?;
                    }
                    Body::Report { .. } => unreachable!(),
                }
                Ok(())
            }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Output(e.to_string()))
}
