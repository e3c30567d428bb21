//! Aligned plain-text tables.

use crate::report::CatalogDump;
use crate::run::{EntryReport, RunReport};
use crate::suite::SuiteReport;

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    let mut out = s.to_string();
    out.extend(std::iter::repeat_n(' ', w.saturating_sub(width(s))));
    out
}

/// Left-aligned columns separated by two spaces; trailing blanks trimmed.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| width(s)).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| pad(s, widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn suite(r: &SuiteReport) -> String {
    let rows: Vec<Vec<String>> = r
        .claims
        .iter()
        .map(|c| {
            vec![
                format!("{} {}", c.statement, c.status.as_str()),
                c.flag.as_str().to_string(),
                c.computed.clone(),
                c.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut out = table(&rows);
    out.push_str(&format!("{} of {} claims passed\n", r.passed, r.total));
    if !r.unverified.is_empty() {
        out.push_str("not checked:\n");
        for u in &r.unverified {
            out.push_str(&format!("  {u}\n"));
        }
    }
    out
}

pub fn run(r: &RunReport) -> String {
    let mut rows =
        vec![vec!["#".into(), "kind".into(), "id".into(), "result".into(), "status".into(), "detail".into()]];
    for e in &r.entries {
        let (kind, result) = match &e.report {
            EntryReport::Teleport(t) => (
                "teleport",
                format!("feasible={} worst={:.12} cost={} cbits", t.feasible, t.worst_fidelity, t.cost_cbits),
            ),
            EntryReport::Densecode(d) => {
                ("densecode", format!("N={} ({} cbits) senders {:?}", d.n, d.cbits, d.distribution.sender))
            }
            EntryReport::Locc(l) => (
                "locc",
                format!(
                    "success={} inter-receiver={} cbits issues={}",
                    l.success,
                    l.inter_receiver_cbits,
                    l.issues.len()
                ),
            ),
            EntryReport::Diagnose(p) => {
                let max = p.purities.iter().map(|x| x.1).fold(0.0, f64::max);
                ("diagnose", format!("genuine={} max purity {max:.6}", p.genuine))
            }
        };
        rows.push(vec![
            e.index.to_string(),
            kind.into(),
            e.id.clone(),
            result,
            e.status.as_str().into(),
            e.detail.clone(),
        ]);
    }
    table(&rows)
}

pub fn catalog(d: &CatalogDump) -> String {
    let mut rows = vec![vec!["state".into(), "qubits".into(), "kets".into()]];
    for s in &d.states {
        let n = s.kets.first().map(|k| k.label.len()).unwrap_or(0);
        rows.push(vec![s.name.clone(), n.to_string(), s.kets.len().to_string()]);
    }
    let mut out = table(&rows);
    out.push('\n');
    let mut rows = vec![vec!["basis".into(), "qubits".into(), "vectors".into(), "corrections".into()]];
    for b in &d.bases {
        let fixes: Vec<&str> = b.corrections.iter().map(|c| c.label.as_str()).collect();
        rows.push(vec![b.name.clone(), b.num_qubits.to_string(), b.vectors.len().to_string(), fixes.join(" ")]);
    }
    out.push_str(&table(&rows));
    out
}
