//! Optional external tools: a rasterizer and a topic provider, both run as
//! subprocesses with a timeout.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use simvec_core::chart::DataSpec;
use thiserror::Error;

use crate::config::{ProviderConfig, RasterizerConfig};

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("empty command template")]
    EmptyCommand,
    #[error("could not start `{program}`: {source}")]
    Spawn { program: String, source: std::io::Error },
    #[error("`{program}` timed out after {secs} s")]
    Timeout { program: String, secs: u64 },
    #[error("`{program}` exited with {status}: {stderr}")]
    Failed { program: String, status: String, stderr: String },
    #[error("unreadable response: {0}")]
    Response(String),
}

/// Split a template on whitespace and fill the placeholders per argument.
fn argv(template: &str, fill: &[(&str, &str)]) -> Result<Vec<String>, AdapterError> {
    let args: Vec<String> = template
        .split_whitespace()
        .map(|a| fill.iter().fold(a.to_string(), |acc, (k, v)| acc.replace(k, v)))
        .collect();
    if args.is_empty() {
        return Err(AdapterError::EmptyCommand);
    }
    Ok(args)
}

/// Run `args`, feeding `input` on stdin; stdout on success.
pub fn run_with_timeout(args: &[String], input: Option<Vec<u8>>, timeout: Duration) -> Result<Vec<u8>, AdapterError> {
    let program = args[0].clone();
    let mut child = Command::new(&args[0])
        .args(&args[1..])
        .stdin(if input.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| AdapterError::Spawn { program: program.clone(), source })?;
    if let (Some(mut stdin), Some(bytes)) = (child.stdin.take(), input) {
        thread::spawn(move || {
            let _ = stdin.write_all(&bytes);
        });
    }
    let mut stdout = child.stdout.take().expect("piped");
    let mut stderr = child.stderr.take().expect("piped");
    let out = thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stdout.read_to_end(&mut buf);
        buf
    });
    let err = thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr.read_to_string(&mut buf);
        buf
    });
    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(AdapterError::Timeout { program, secs: timeout.as_secs() });
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(source) => return Err(AdapterError::Spawn { program, source }),
        }
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    if !status.success() {
        return Err(AdapterError::Failed { program, status: status.to_string(), stderr: stderr.trim().to_string() });
    }
    Ok(stdout)
}

/// SVG to PNG through an external command.
#[derive(Debug, Clone, PartialEq)]
pub struct Rasterizer {
    pub command: String,
    pub width: u32,
    pub timeout: Duration,
}

impl From<&RasterizerConfig> for Rasterizer {
    fn from(c: &RasterizerConfig) -> Self {
        Rasterizer { command: c.command.clone(), width: c.width, timeout: Duration::from_secs(c.timeout_secs) }
    }
}

impl Rasterizer {
    pub fn new(command: &str) -> Self {
        Rasterizer { command: command.to_string(), width: 1000, timeout: Duration::from_secs(60) }
    }

    pub fn rasterize(&self, input: &Path, output: &Path) -> Result<(), AdapterError> {
        let width = self.width.to_string();
        let args = argv(
            &self.command,
            &[
                ("{input}", &input.to_string_lossy()),
                ("{output}", &output.to_string_lossy()),
                ("{width}", &width),
            ],
        )?;
        run_with_timeout(&args, None, self.timeout)?;
        if !output.is_file() {
            return Err(AdapterError::Response(format!("{} was not written", output.display())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicRequest {
    pub topic_seed: u64,
    pub kinds: [&'static str; 3],
    /// The spec must use percent-stacked values.
    pub require_shares: bool,
}

/// External topic source: JSON request on stdin, a `DataSpec` on stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicProvider {
    pub command: String,
    pub timeout: Duration,
}

impl From<&ProviderConfig> for TopicProvider {
    fn from(c: &ProviderConfig) -> Self {
        TopicProvider { command: c.command.clone(), timeout: Duration::from_secs(c.timeout_secs) }
    }
}

impl TopicProvider {
    pub fn spec(&self, topic_seed: u64, require_shares: bool) -> Result<DataSpec, AdapterError> {
        let req = TopicRequest { topic_seed, kinds: ["categorical", "temporal", "quantitative"], require_shares };
        let args = argv(&self.command, &[])?;
        let body = serde_json::to_vec(&req).expect("request serializes");
        let out = run_with_timeout(&args, Some(body), self.timeout)?;
        let spec: DataSpec = serde_json::from_slice(&out).map_err(|e| AdapterError::Response(e.to_string()))?;
        spec.validate().map_err(|e| AdapterError::Response(e.to_string()))?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholders_fill_per_argument() {
        let a = argv("conv -w {width} {input} -o {output}", &[("{input}", "a b.svg"), ("{output}", "o.png"), ("{width}", "800")]).unwrap();
        assert_eq!(a, ["conv", "-w", "800", "a b.svg", "-o", "o.png"]);
        assert!(argv("  ", &[]).is_err());
    }

    #[test]
    fn subprocess_timeout_and_failure() {
        let sleep = vec!["sleep".to_string(), "5".to_string()];
        assert!(matches!(run_with_timeout(&sleep, None, Duration::from_millis(100)), Err(AdapterError::Timeout { .. })));
        let fail = vec!["false".to_string()];
        assert!(matches!(run_with_timeout(&fail, None, Duration::from_secs(5)), Err(AdapterError::Failed { .. })));
        let cat = vec!["cat".to_string()];
        assert_eq!(run_with_timeout(&cat, Some(b"hi".to_vec()), Duration::from_secs(5)).unwrap(), b"hi");
    }
}
