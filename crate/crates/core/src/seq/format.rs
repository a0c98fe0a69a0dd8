//! Plain-text sequence files: one entry per line from `{-1, 0, 1}`; lines
//! starting with `#` are comments. Blank lines are ignored on input.

use std::fs;
use std::path::Path;

use super::SignSequence;
use crate::error::{Error, Result};

pub fn parse_sequence(text: &str) -> Result<SignSequence> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = match line {
            "1" | "+1" => 1,
            "0" => 0,
            "-1" => -1,
            other => {
                return Err(Error::Parse { line: i + 1, msg: format!("expected -1, 0 or 1, found {other:?}") })
            }
        };
        values.push(v);
    }
    SignSequence::new(values)
}

/// Renders `seq` with optional leading comment lines.
pub fn format_sequence(seq: &SignSequence, comments: &[&str]) -> String {
    let mut out = String::with_capacity(seq.len() * 3 + 64);
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for &v in seq.as_slice() {
        out.push_str(match v {
            1 => "1\n",
            0 => "0\n",
            _ => "-1\n",
        });
    }
    out
}

pub fn read_sequence(path: impl AsRef<Path>) -> Result<SignSequence> {
    parse_sequence(&fs::read_to_string(path)?)
}

pub fn write_sequence(path: impl AsRef<Path>, seq: &SignSequence, comments: &[&str]) -> Result<()> {
    fs::write(path, format_sequence(seq, comments))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_reports_bad_lines() {
        let s = parse_sequence("# header\n1\n-1\n\n0\n").unwrap();
        assert_eq!(s.as_slice(), &[1, -1, 0]);
        match parse_sequence("1\n2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn writer_emits_one_entry_per_line() {
        let s = SignSequence::new(vec![1, 0, -1]).unwrap();
        assert_eq!(format_sequence(&s, &["bcc"]), "# bcc\n1\n0\n-1\n");
    }

    proptest! {
        #[test]
        fn text_round_trip(v in proptest::collection::vec(-1i8..=1, 0..100)) {
            let s = SignSequence::new(v).unwrap();
            prop_assert_eq!(parse_sequence(&format_sequence(&s, &["x"])).unwrap(), s);
        }
    }
}
