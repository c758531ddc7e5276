//! JSON and text rendering of reports.

use serde_json::Value;

pub fn report(v: &Value, text: bool) -> String {
    if !text {
        return serde_json::to_string_pretty(v).expect("JSON values render");
    }
    // the message already carries everything a validation report says
    if let Some(m) = v.get("message").and_then(Value::as_str) {
        return m.to_string();
    }
    table(v).trim_end().to_string()
}

pub fn many(entries: &[Value], text: bool) -> String {
    if !text {
        return serde_json::to_string_pretty(entries).expect("JSON values render");
    }
    let mut out = String::new();
    for e in entries {
        let file = e.get("file").and_then(Value::as_str).unwrap_or("?");
        out.push_str(&format!("== {file} ==\n"));
        match (e.get("report"), e.get("error")) {
            (Some(r), _) => out.push_str(&report(r, true)),
            (None, Some(err)) => out.push_str(&format!(
                "error ({}): {}",
                err.get("kind").and_then(Value::as_str).unwrap_or("?"),
                err.get("message").and_then(Value::as_str).unwrap_or("")
            )),
            _ => {}
        }
        out.push_str("\n\n");
    }
    out.trim_end().to_string()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(inline).collect();
            parts.join(" ")
        }
        other => other.to_string(),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(" ")),
        Value::Object(_) => v.to_string(),
        other => scalar(other),
    }
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| matches!(r, Value::Array(c) if c.iter().all(|x| !x.is_array() && !x.is_object()))))
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, Vec<String>)>) {
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, rows);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || is_matrix(i)) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{}]", i + 1), child, rows);
            }
        }
        m if is_matrix(m) && prefix.ends_with(']') => {
            let lines = m.as_array().unwrap().iter().map(scalar).collect();
            rows.push((prefix.to_string(), lines));
        }
        other => rows.push((prefix.to_string(), vec![scalar(other)])),
    }
}

fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (key, lines) in rows {
        for (i, line) in lines.iter().enumerate() {
            let k = if i == 0 { key.as_str() } else { "" };
            out.push_str(&format!("{k:<width$}  {line}\n"));
        }
    }
    out
}
