//! The JSON document written by every command.

use std::io;

use s3dirac::metric::{Manifold, Metric};
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

pub const SCHEMA_VERSION: u32 = 1;

/// Compact JSON with every float written to 17 significant digits.
struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    value
        .serialize(&mut Serializer::with_formatter(&mut out, SignificantDigits))
        .expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub args: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct OutputDocument<'a, R: Serialize> {
    pub schema_version: u32,
    pub command: &'a CommandEcho,
    pub metric: Option<Metric>,
    pub manifold: Option<Manifold>,
    pub result: &'a R,
    /// Wall-clock time; only present when requested, so that default output
    /// is byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}
