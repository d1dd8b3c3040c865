//! Instance files: JSON preceded by optional provenance lines starting
//! with `#`.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

/// Parses JSON after dropping every line whose first non-blank character
/// is `#`.
pub fn parse_instance<T: DeserializeOwned>(text: &str) -> Result<T> {
    let body: String = text
        .lines()
        .filter(|line| !line.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(serde_json::from_str(&body)?)
}

/// Pretty JSON with each header line prefixed by `# `.
pub fn render_instance<T: Serialize>(value: &T, header: &[String]) -> Result<String> {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string_pretty(value)?);
    out.push('\n');
    Ok(out)
}
