//! Text formats for codes and set families, plus JSON-free round-trip
//! helpers. Code files start with a `q n` header and carry one word per
//! line; family files start with `n k` and carry 1-based elements. Lines
//! beginning with `#` (and inline `# ...` trails) are comments.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::family::{KSetFamily, SubsetFamily};

/// A parsed object together with the 1-based line numbers of entries that
/// duplicated an earlier one. Duplicates are kept out of the result but
/// reported so callers can warn.
#[derive(Clone, Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub duplicate_lines: Vec<usize>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Content lines with their 1-based line numbers, comments and blanks gone.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what}: expected a natural number, got `{tok}`")))
}

pub fn parse_code(text: &str) -> Result<Loaded<Code>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `q n` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hline, format!("header must be `q n`, got `{header}`")));
    }
    let q = parse_usize(toks[0], hline, "q")?;
    let n = parse_usize(toks[1], hline, "n")?;
    if q < 2 || q > u16::MAX as usize {
        return Err(parse_err(hline, format!("alphabet size q = {q} out of range")));
    }

    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut duplicate_lines = Vec::new();
    for (ln, line) in lines {
        let syms: Vec<usize> = line
            .split_whitespace()
            .map(|t| parse_usize(t, ln, "symbol"))
            .collect::<Result<_>>()?;
        if syms.len() != n {
            return Err(parse_err(
                ln,
                format!("word has {} symbols, expected n = {n}", syms.len()),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for s in syms {
            if s >= q {
                return Err(parse_err(ln, format!("symbol {s} outside [0, {}]", q - 1)));
            }
            row.push(s as u16);
        }
        if seen.insert(row.clone()) {
            rows.push(row);
        } else {
            duplicate_lines.push(ln);
        }
    }
    let value = Code::from_symbol_rows(q as u16, n, rows)?;
    Ok(Loaded {
        value,
        duplicate_lines,
    })
}

pub fn code_to_string(code: &Code) -> String {
    let mut out = format!("{} {}\n", code.q(), code.n());
    for i in 0..code.len() {
        let syms: Vec<String> = code
            .word(i)
            .symbols()
            .iter()
            .map(|s| s.to_string())
            .collect();
        out.push_str(&syms.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_code(path: impl AsRef<Path>) -> Result<Loaded<Code>> {
    parse_code(&fs::read_to_string(path)?)
}

pub fn write_code(code: &Code, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, code_to_string(code))?)
}

fn parse_set_line(line: &str, ln: usize, n: usize) -> Result<u64> {
    let mut mask = 0u64;
    if line == "-" {
        return Ok(mask); // explicit empty set
    }
    for tok in line.split_whitespace() {
        let e = parse_usize(tok, ln, "element")?;
        if e < 1 || e > n {
            return Err(parse_err(ln, format!("element {e} outside [1, {n}]")));
        }
        let bit = 1u64 << (e - 1);
        if mask & bit != 0 {
            return Err(parse_err(ln, format!("element {e} repeated within the set")));
        }
        mask |= bit;
    }
    Ok(mask)
}

fn family_header(text: &str) -> Result<(usize, usize, &str, Vec<(usize, &str)>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n k` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hline, format!("header must be `n k`, got `{header}`")));
    }
    let n = parse_usize(toks[0], hline, "n")?;
    if n == 0 || n > 64 {
        return Err(parse_err(hline, format!("ground set size n = {n} out of range")));
    }
    Ok((hline, n, toks[1], lines.collect()))
}

/// k-uniform family: header `n k`, each line exactly k elements.
pub fn parse_family(text: &str) -> Result<Loaded<KSetFamily>> {
    let (hline, n, ktok, lines) = family_header(text)?;
    let k = parse_usize(ktok, hline, "k")?;
    let mut masks = Vec::new();
    let mut seen = BTreeSet::new();
    let mut duplicate_lines = Vec::new();
    for (ln, line) in lines {
        let mask = parse_set_line(line, ln, n)?;
        if mask.count_ones() as usize != k {
            return Err(parse_err(
                ln,
                format!("set has {} elements, expected k = {k}", mask.count_ones()),
            ));
        }
        if seen.insert(mask) {
            masks.push(mask);
        } else {
            duplicate_lines.push(ln);
        }
    }
    let value = KSetFamily::new(n, k, masks)?;
    Ok(Loaded {
        value,
        duplicate_lines,
    })
}

/// Mixed-size family: header `n *`, each line any number of elements and
/// `-` for the empty set.
pub fn parse_subset_family(text: &str) -> Result<Loaded<SubsetFamily>> {
    let (hline, n, ktok, lines) = family_header(text)?;
    if ktok != "*" {
        return Err(parse_err(
            hline,
            format!("mixed-size family header must be `n *`, got k = `{ktok}`"),
        ));
    }
    let mut masks = Vec::new();
    let mut seen = BTreeSet::new();
    let mut duplicate_lines = Vec::new();
    for (ln, line) in lines {
        let mask = parse_set_line(line, ln, n)?;
        if seen.insert(mask) {
            masks.push(mask);
        } else {
            duplicate_lines.push(ln);
        }
    }
    let value = SubsetFamily::new(n, masks)?;
    Ok(Loaded {
        value,
        duplicate_lines,
    })
}

fn set_line(set: &[usize]) -> String {
    if set.is_empty() {
        return "-".into();
    }
    let elems: Vec<String> = set.iter().map(|e| (e + 1).to_string()).collect();
    elems.join(" ")
}

pub fn family_to_string(family: &KSetFamily) -> String {
    let mut out = format!("{} {}\n", family.n(), family.k());
    for set in family.sets() {
        out.push_str(&set_line(&set));
        out.push('\n');
    }
    out
}

pub fn subset_family_to_string(family: &SubsetFamily) -> String {
    let mut out = format!("{} *\n", family.n());
    for set in family.sets() {
        out.push_str(&set_line(&set));
        out.push('\n');
    }
    out
}

pub fn read_family(path: impl AsRef<Path>) -> Result<Loaded<KSetFamily>> {
    parse_family(&fs::read_to_string(path)?)
}

pub fn write_family(family: &KSetFamily, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, family_to_string(family))?)
}

pub fn read_subset_family(path: impl AsRef<Path>) -> Result<Loaded<SubsetFamily>> {
    parse_subset_family(&fs::read_to_string(path)?)
}

pub fn write_subset_family(family: &SubsetFamily, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, subset_family_to_string(family))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::parity_code;

    #[test]
    fn code_round_trip() {
        let c = parity_code(3).unwrap();
        let text = code_to_string(&c);
        let back = parse_code(&text).unwrap();
        assert!(back.duplicate_lines.is_empty());
        assert_eq!(back.value, c);
    }

    #[test]
    fn empty_code_after_header() {
        let got = parse_code("3 4\n# nothing else\n").unwrap();
        assert_eq!(got.value.len(), 0);
        assert_eq!(got.value.q(), 3);
        assert_eq!(got.value.n(), 4);
    }

    #[test]
    fn symbol_out_of_range_names_the_line() {
        let err = parse_code("2 3\n0 0 0\n0 2 0\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("symbol 2"), "{msg}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn wrong_arity_and_bad_header() {
        assert!(matches!(
            parse_code("2 3\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_code("2\n").is_err());
        assert!(parse_code("").is_err());
        assert!(parse_code("1 3\n").is_err());
    }

    #[test]
    fn duplicates_are_dropped_and_flagged() {
        let got = parse_code("2 2\n0 1\n1 0\n0 1\n").unwrap();
        assert_eq!(got.value.len(), 2);
        assert_eq!(got.duplicate_lines, vec![4]);
    }

    #[test]
    fn comments_and_whitespace_tolerated() {
        let got = parse_code("# a code\n  2   2  # header\n\n 0 1 # word\n").unwrap();
        assert_eq!(got.value.len(), 1);
    }

    #[test]
    fn family_round_trip_is_one_based() {
        let f = KSetFamily::new(5, 2, vec![0b00011, 0b10100]).unwrap();
        let text = family_to_string(&f);
        assert!(text.contains("1 2"));
        assert!(text.contains("3 5"));
        let back = parse_family(&text).unwrap();
        assert_eq!(back.value.masks(), f.masks());
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            parse_family("4 2\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("4 2\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("4 2\n2 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("4 2\n3 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn subset_family_round_trip_with_empty_set() {
        let f = SubsetFamily::new(4, vec![0b0000, 0b1010, 0b1111]).unwrap();
        let text = subset_family_to_string(&f);
        assert!(text.starts_with("4 *\n"));
        assert!(text.contains("-"));
        let back = parse_subset_family(&text).unwrap();
        assert_eq!(back.value.masks(), f.masks());
        assert!(parse_subset_family("4 2\n1 2\n").is_err());
    }
}
