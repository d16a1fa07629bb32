//! Human-readable rendering and the combined report.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::artifact::{Certificate, Store};
use crate::CliError;

/// Section order of the report.
const ORDER: [(&str, &str); 5] = [
    ("verify", "Representations, relator and longitude"),
    ("trace-cert", "Integrality of traces"),
    ("form", "Invariant Hermitian form"),
    ("specialize", "Specialization at units"),
    ("density", "Irreducibility and Zariski density"),
];

fn title(command: &str) -> &'static str {
    ORDER.iter().find(|(c, _)| *c == command).map_or("Certificate", |(_, t)| t)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(format!("`{s}`")),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("none".into()),
        _ => None,
    }
}

pub fn render(cert: &Certificate) -> String {
    let b = &cert.body;
    let mut s = String::new();
    let _ = writeln!(s, "## {} (`{}`)\n", title(&b.command), b.command);
    let _ = writeln!(s, "Verdict: **{}**\n", if cert.passed() { "PASS" } else { "FAIL" });
    if let Some(inputs) = b.inputs.as_object().filter(|m| !m.is_empty()) {
        let parts: Vec<String> = inputs
            .iter()
            .map(|(k, v)| format!("{k} = {}", scalar(v).unwrap_or_else(|| v.to_string())))
            .collect();
        let _ = writeln!(s, "Inputs: {}\n", parts.join(", "));
    }
    let _ = writeln!(s, "| check | verdict | detail |\n|---|---|---|");
    for c in &b.checks {
        let v = if c.verdict.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "| {} | {v} | {} |", c.name, c.detail.replace('|', "\\|"));
    }
    s.push('\n');
    if let Some(w) = b.witnesses.as_object() {
        for (k, v) in w {
            match scalar(v) {
                Some(x) => {
                    let _ = writeln!(s, "- **{k}**: {x}");
                }
                None => {
                    let pretty = serde_json::to_string_pretty(v).unwrap_or_default();
                    let _ = writeln!(s, "- **{k}**:\n\n```json\n{pretty}\n```");
                }
            }
        }
    }
    let _ = writeln!(s, "\nContent hash `{}`, {} ms.\n", cert.body_sha256, cert.timing.wall_clock_ms);
    s
}

/// Loads every certificate, checks that the upstream hashes each one
/// recorded still match, and renders JSON and markdown summaries.
pub fn report(store: &Store) -> Result<(bool, String, String), CliError> {
    let names = store.list();
    if names.is_empty() {
        return Err(CliError::Input("no certificates in the artifact directory".into()));
    }
    let mut loaded: Vec<(String, Result<Certificate, String>)> = names
        .into_iter()
        .map(|n| {
            let c = store.read(&n).map_err(|e| e.to_string());
            (n, c)
        })
        .collect();
    let rank = |name: &str| ORDER.iter().position(|(c, _)| name.starts_with(c)).unwrap_or(ORDER.len());
    loaded.sort_by(|a, b| rank(&a.0).cmp(&rank(&b.0)).then(a.0.cmp(&b.0)));

    let mut all_ok = true;
    let mut rows = Vec::new();
    let mut md = String::from("# thinlat certificate report\n\n");
    let mut body = String::new();
    for (name, cert) in &loaded {
        match cert {
            Ok(c) => {
                let stale: Vec<&String> = c
                    .body
                    .upstream
                    .iter()
                    .filter(|(up, hash)| store.read(up).map(|u| &u.body_sha256 != *hash).unwrap_or(true))
                    .map(|(up, _)| up)
                    .collect();
                all_ok &= c.passed() && stale.is_empty();
                rows.push(json!({
                    "name": name,
                    "command": c.body.command,
                    "verdict": c.body.verdict,
                    "body_sha256": c.body_sha256,
                    "stale_upstream": stale,
                }));
                let note = if stale.is_empty() { String::new() } else { format!(" (stale: {stale:?})") };
                let v = if c.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(md, "- `{name}`: {v}{note}");
                body.push_str(&render(c));
            }
            Err(e) => {
                all_ok = false;
                rows.push(json!({ "name": name, "error": e }));
                let _ = writeln!(md, "- `{name}`: invalid ({e})");
            }
        }
    }
    md.push('\n');
    md.push_str(&body);
    let verdict = if all_ok { "PASS" } else { "FAIL" };
    let json = serde_json::to_string_pretty(&json!({ "certificates": rows, "verdict": verdict }))
        .expect("serializable report")
        + "\n";
    Ok((all_ok, json, md))
}
