//! `--config file.json`: a flat object of flag names to values, spliced into
//! argv right after the subcommand so explicit flags still win.

use serde_json::Value;
use std::ffi::OsString;

pub const SUBCOMMANDS: &[&str] = &[
    "generators",
    "coherent",
    "kernel",
    "distribution",
    "recover",
    "verify",
    "werner-scan",
    "werner-threshold",
];

/// Removes `--config` from `args` and returns its path, if present.
fn take_config(args: &mut Vec<OsString>) -> Result<Option<String>, String> {
    let mut i = 0;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--config" {
            if i + 1 >= args.len() {
                return Err("--config needs a path".into());
            }
            let path = args.remove(i + 1).to_string_lossy().into_owned();
            args.remove(i);
            return Ok(Some(path));
        }
        if let Some(path) = a.strip_prefix("--config=") {
            let path = path.to_string();
            args.remove(i);
            return Ok(Some(path));
        }
        i += 1;
    }
    Ok(None)
}

fn value_to_arg(key: &str, v: &Value) -> Result<Option<String>, String> {
    Ok(match v {
        Value::Null => None,
        Value::Bool(true) => Some(String::new()),
        Value::Bool(false) => None,
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Result<Vec<String>, String> = items
                .iter()
                .map(|x| match x {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(format!("config key {key:?}: arrays may hold numbers or strings")),
                })
                .collect();
            Some(parts?.join(","))
        }
        Value::Object(_) => return Err(format!("config key {key:?}: nested objects are not flags")),
    })
}

pub fn config_flags(text: &str, source: &str) -> Result<Vec<OsString>, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("{source}: {e}"))?;
    let Value::Object(map) = doc else {
        return Err(format!("{source}: expected a JSON object of flag names"));
    };
    let mut out = Vec::new();
    for (key, v) in &map {
        let flag = format!("--{}", key.trim_start_matches('-').replace('_', "-"));
        match value_to_arg(key, v)? {
            None => {}
            Some(s) if s.is_empty() && matches!(v, Value::Bool(true)) => out.push(flag.into()),
            Some(s) => out.push(format!("{flag}={s}").into()),
        }
    }
    Ok(out)
}

/// Applies `--config` to `args`.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = take_config(&mut args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let flags = config_flags(&text, &path)?;
    let pos = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or("--config given without a subcommand")?;
    args.splice(pos + 1..pos + 1, flags);
    Ok(args)
}
