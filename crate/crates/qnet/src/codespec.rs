//! Code identifiers accepted on the command line.

use std::path::Path;

use qnet_core::codes::{code_from_id, CssCode};

use crate::fixture::load_code;
use crate::CliError;

/// A resolved `--code` argument.
#[derive(Clone, Debug)]
pub enum CodeSpec {
    Built(CssCode),
    /// `custom:<n>:<k>`: parameters only, for rate tables.
    Params { n: u64, k: u64 },
}

impl CodeSpec {
    pub fn n(&self) -> u64 {
        match self {
            CodeSpec::Built(c) => c.n() as u64,
            CodeSpec::Params { n, .. } => *n,
        }
    }

    pub fn k(&self) -> u64 {
        match self {
            CodeSpec::Built(c) => c.k() as u64,
            CodeSpec::Params { k, .. } => *k,
        }
    }

    pub fn distance(&self) -> Option<usize> {
        match self {
            CodeSpec::Built(c) => c.distance(),
            CodeSpec::Params { .. } => None,
        }
    }

    /// The full code, or a usage error for parameter-only specs.
    pub fn into_code(self, id: &str) -> Result<CssCode, CliError> {
        match self {
            CodeSpec::Built(c) => Ok(c),
            CodeSpec::Params { .. } => Err(CliError::Usage(format!("{id} has no check matrices; custom codes are for rate tables only"))),
        }
    }
}

/// Resolves `rep3`, `shor9`, `surface:<d>`, `hgp:<seed>:<n>,<wc>,<wr>`,
/// `custom:<n>:<k>` and `file:<path>`.
pub fn parse_code_spec(id: &str) -> Result<CodeSpec, CliError> {
    let id = id.trim();
    if let Some(rest) = id.strip_prefix("custom:") {
        let (n, k) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("custom code needs custom:<n>:<k>, got {id:?}")))?;
        let n: u64 = n.parse().map_err(|e| CliError::Usage(format!("bad n in {id:?}: {e}")))?;
        let k: u64 = k.parse().map_err(|e| CliError::Usage(format!("bad k in {id:?}: {e}")))?;
        if n == 0 || k > n {
            return Err(CliError::Usage(format!("{id}: need 0 <= k <= n and n > 0")));
        }
        return Ok(CodeSpec::Params { n, k });
    }
    if let Some(path) = id.strip_prefix("file:") {
        return load_code(Path::new(path)).map(CodeSpec::Built);
    }
    code_from_id(id).map(CodeSpec::Built).map_err(CliError::usage)
}

pub fn parse_code(id: &str) -> Result<CssCode, CliError> {
    parse_code_spec(id)?.into_code(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers() {
        assert_eq!(parse_code_spec("surface:17").unwrap().n(), 289);
        let c = parse_code_spec("custom:3786:946").unwrap();
        assert_eq!((c.n(), c.k()), (3786, 946));
        assert_eq!(parse_code("shor9").unwrap().n(), 9);
        for bad in ["nope", "custom:5", "custom:3:4", "custom:x:1", "surface:4", "file:/does/not/exist"] {
            assert!(matches!(parse_code_spec(bad), Err(CliError::Usage(_))), "{bad}");
        }
        assert!(matches!(parse_code("custom:10:2"), Err(CliError::Usage(_))));
    }
}
