//! Config-file handling: a line-oriented `key = value` format with `#`
//! comments.  The file is translated into synthetic command-line arguments
//! spliced *before* the real ones, so explicit flags always win and unknown
//! keys surface as ordinary argument errors.

use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Keys whose value is a boolean presence flag rather than `--key value`.
const FLAG_KEYS: &[&str] = &["adaptive", "measures"];

/// Locate `--config PATH` (or `--config=PATH`) in the raw arguments.
pub fn find_config_path(args: &[String]) -> Result<Option<PathBuf>, CliError> {
    let mut iter = args.iter().peekable();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            match iter.peek() {
                Some(path) => return Ok(Some(PathBuf::from(path))),
                None => {
                    return Err(CliError::Config(
                        "--config requires a file path".to_string(),
                    ))
                }
            }
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Ok(Some(PathBuf::from(path)));
        }
    }
    Ok(None)
}

/// Parse the file into synthetic `--key value` arguments.
pub fn file_to_args(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Config(format!(
                "{}:{}: empty key or value",
                path.display(),
                lineno + 1
            )));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if FLAG_KEYS.contains(&key) {
            match value {
                "true" | "1" | "yes" => args.push(flag),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::Config(format!(
                        "{}:{}: key `{key}` takes true/false, got `{other}`",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        } else {
            args.push(flag);
            args.push(value.to_string());
        }
    }
    Ok(args)
}

/// Splice config-file arguments after the subcommand so that explicit
/// command-line flags override them.
pub fn merge_args(raw: Vec<String>) -> Result<Vec<String>, CliError> {
    if raw.len() < 2 || raw[1].starts_with('-') {
        return Ok(raw); // help/version or bare invocation: nothing to merge
    }
    let Some(path) = find_config_path(&raw[2..])? else {
        return Ok(raw);
    };
    let file_args = file_to_args(&path)?;
    let mut merged = Vec::with_capacity(raw.len() + file_args.len());
    merged.extend_from_slice(&raw[..2]);
    merged.extend(file_args);
    merged.extend_from_slice(&raw[2..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_keys_comments_and_flags() {
        let f = write_tmp("# header\n t_h = 0.35\ndelta_mode = fixed # trailing\n\nadaptive = true\n");
        let args = file_to_args(f.path()).unwrap();
        assert_eq!(
            args,
            vec!["--t-h", "0.35", "--delta-mode", "fixed", "--adaptive"]
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        let f = write_tmp("t_h 0.35\n");
        assert!(file_to_args(f.path()).is_err());
        let f = write_tmp("= 1\n");
        assert!(file_to_args(f.path()).is_err());
    }

    #[test]
    fn merge_puts_file_args_before_flags() {
        let f = write_tmp("t_h = 0.2\n");
        let raw = vec![
            "rabi-otto".to_string(),
            "cycle".to_string(),
            "--config".to_string(),
            f.path().display().to_string(),
            "--t-h".to_string(),
            "0.35".to_string(),
        ];
        let merged = merge_args(raw).unwrap();
        // file value first, explicit flag later: the flag wins under
        // args_override_self
        let positions: Vec<usize> = merged
            .iter()
            .enumerate()
            .filter(|(_, a)| *a == "--t-h")
            .map(|(i, _)| i)
            .collect();
        assert_eq!(positions.len(), 2);
        assert_eq!(merged[positions[0] + 1], "0.2");
        assert_eq!(merged[positions[1] + 1], "0.35");
    }

    #[test]
    fn missing_file_is_a_config_error() {
        assert!(file_to_args(Path::new("/nonexistent/rabi.conf")).is_err());
    }
}
