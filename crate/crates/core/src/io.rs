//! Text formats for codes: `.stab` generator lists and `.pcm` parity
//! check matrices. Both skip blank lines and lines starting with `#`.

use std::fs;
use std::path::Path;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerCode;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        index: line,
        message: message.into(),
    }
}

/// Generators in file order. Parse errors carry the 1-based line number.
pub fn parse_stab(text: &str) -> Result<Vec<PauliOperator>> {
    content_lines(text)
        .map(|(line, l)| l.parse::<PauliOperator>().map_err(|e| parse_error(line, e.to_string())))
        .collect()
}

pub fn read_stab(text: &str) -> Result<StabilizerCode> {
    StabilizerCode::validate(parse_stab(text)?)
}

pub fn write_stab(code: &StabilizerCode) -> String {
    let mut out = format!("# [[{},{}]]\n", code.n(), code.k());
    for g in code.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_pcm(text: &str) -> Result<BitMatrix> {
    let mut rows = Vec::new();
    let mut width = None;
    for (line, l) in content_lines(text) {
        let bits: Vec<bool> = l
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(parse_error(line, format!("expected 0 or 1, found `{t}`"))),
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(bits.len()),
            Some(w) if w != bits.len() => {
                return Err(parse_error(
                    line,
                    format!("row has {} entries, expected {w}", bits.len()),
                ))
            }
            _ => {}
        }
        rows.push(BitVec::from_bools(&bits));
    }
    let cols = width.ok_or(Error::Empty)?;
    Ok(BitMatrix::from_rows(rows, cols))
}

pub fn write_pcm(h: &BitMatrix) -> String {
    let mut out = String::new();
    for r in h.rows() {
        let cells: Vec<&str> = (0..h.ncols()).map(|c| if r.get(c) { "1" } else { "0" }).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_stab(path: impl AsRef<Path>) -> Result<StabilizerCode> {
    read_stab(&read_file(path.as_ref())?)
}

pub fn load_pcm(path: impl AsRef<Path>) -> Result<BitMatrix> {
    parse_pcm(&read_file(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, steane_code};

    #[test]
    fn stab_round_trip() {
        for code in [five_qubit_code(), steane_code()] {
            let text = write_stab(&code);
            assert_eq!(parse_stab(&text).unwrap(), code.generators());
            assert_eq!(read_stab(&text).unwrap().k(), 1);
        }
    }

    #[test]
    fn stab_reports_line() {
        let err = parse_stab("# header\nXZZXI\n\nXQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { index: 4, .. }));
    }

    #[test]
    fn stab_rejects_anticommuting() {
        assert!(matches!(read_stab("XI\nZI\n"), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn pcm_round_trip() {
        let text = "# hamming\n0 0 0 1 1 1 1\n0 1 1 0 0 1 1\n1 0 1 0 1 0 1\n";
        let h = parse_pcm(text).unwrap();
        assert_eq!((h.nrows(), h.ncols()), (3, 7));
        assert_eq!(parse_pcm(&write_pcm(&h)).unwrap(), h);
    }

    #[test]
    fn pcm_rejects_ragged_rows() {
        assert!(matches!(parse_pcm("1 0\n1\n"), Err(Error::Parse { index: 2, .. })));
        assert!(parse_pcm("1 2\n").is_err());
        assert!(matches!(parse_pcm("# nothing\n"), Err(Error::Empty)));
    }
}
