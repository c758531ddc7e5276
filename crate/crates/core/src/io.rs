//! Text formats for quandle and group tables.
//!
//! ```text
//! file   := blank* count NL row{count} blank*
//! count  := decimal integer n ≥ 1
//! row    := entry (WS entry){n-1} NL        -- exactly n entries
//! entry  := decimal integer in 1..=n        -- 1-based element index
//! ```
//!
//! Row `x` lists `x ▷ 1, …, x ▷ n` (quandles) or `x·1, …, x·n` (groups).
//! Blank lines and lines starting with `#` are ignored. Ragged rows, extra
//! rows and out-of-range entries are rejected.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quandle::{validate_quandle, FiniteQuandle};

/// Parses the shared table grammar into 0-based rows without checking any axioms.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines.next().ok_or_else(|| Error::Malformed("empty table file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Malformed(format!("line {line_no}: expected the element count, found `{header}`")))?;
    if n == 0 {
        return Err(Error::Malformed(format!("line {line_no}: element count must be at least 1")));
    }
    let mut rows = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if rows.len() == n {
            return Err(Error::Malformed(format!("line {line_no}: more than {n} rows")));
        }
        let row = line
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                _ => Err(Error::Malformed(format!("line {line_no}: entry `{tok}` is not in 1..={n}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "line {line_no}: row has {} entries, expected {n}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Malformed(format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn parse_quandle(text: &str) -> Result<FiniteQuandle> {
    validate_quandle(parse_table(text)?)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    FiniteGroup::from_table(parse_table(text)?)
}

pub fn format_table(rows: &[Vec<usize>]) -> String {
    let mut out = format!("{}\n", rows.len());
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_quandle(q: &FiniteQuandle) -> String {
    format_table(q.table())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::q3_example;

    #[test]
    fn q3_round_trip() {
        let text = format_quandle(&q3_example());
        assert_eq!(text, "3\n1 2 3\n3 2 1\n1 2 3\n");
        assert_eq!(parse_quandle(&text).unwrap(), q3_example());
    }

    #[test]
    fn comments_and_blank_lines() {
        let q = parse_quandle("# Q3\n3\n\n1 2 3\n3 2 1\n1 2 3\n").unwrap();
        assert_eq!(q, q3_example());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "x", "0\n", "2\n1 2\n1\n", "2\n1 2\n1 2\n1 2\n", "2\n1 3\n1 2\n", "2\n1 2\n"] {
            assert!(matches!(parse_table(bad), Err(Error::Malformed(_))), "{bad:?}");
        }
    }

    #[test]
    fn axiom_failure_is_not_malformed() {
        assert!(matches!(parse_quandle("2\n2 2\n1 2\n"), Err(Error::Axiom(_))));
    }

    #[test]
    fn group_file() {
        let g = parse_group("2\n1 2\n2 1\n").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
    }
}
