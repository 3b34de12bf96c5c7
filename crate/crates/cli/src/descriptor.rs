use std::path::Path;

use osinv_core::spaces::DescriptorSpec;
use osinv_core::{Error, SpaceDescriptor};

use crate::error::{CliError, CliResult};

/// Reads a descriptor from inline JSON (text starting with `{`) or from a file.
pub fn read_descriptor_text(arg: &str) -> CliResult<(String, String)> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(("inline descriptor".to_string(), arg.to_string()));
    }
    let text = std::fs::read_to_string(Path::new(arg))
        .map_err(|e| CliError::Parse(format!("cannot read descriptor file {arg}: {e}")))?;
    Ok((format!("descriptor file {arg}"), text))
}

fn json_error(source: &str, e: &serde_json::Error) -> CliError {
    let msg = e.to_string();
    let msg = match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg,
    };
    CliError::Parse(format!("{source}: line {}, column {}: {msg}", e.line(), e.column()))
}

/// Parses a JSON descriptor; `fundamental` kinds are checked for regularity
/// here, catalog kinds when an invariant is requested.
pub fn parse_space_descriptor(text: &str) -> CliResult<SpaceDescriptor> {
    parse_with_source("descriptor", text)
}

pub fn parse_with_source(source: &str, text: &str) -> CliResult<SpaceDescriptor> {
    let spec: DescriptorSpec = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
    SpaceDescriptor::from_spec(&spec).map_err(|e| match e {
        Error::NotRegular { .. } => CliError::Core(e),
        other => CliError::Parse(format!("{source}: kind \"{}\": {other}", spec.kind)),
    })
}

/// Descriptor from a command-line argument (inline JSON or path).
pub fn load_descriptor(arg: &str) -> CliResult<SpaceDescriptor> {
    let (source, text) = read_descriptor_text(arg)?;
    parse_with_source(&source, &text)
}
