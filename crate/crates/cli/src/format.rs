//! Text file formats for families and chain covers.
//!
//! A family file starts with a header line `n=<universe>`; every further
//! non-empty line is one set, written as strictly increasing
//! comma-separated elements of `[1, n]`, with the literal `-` for the
//! empty set. Lines starting with `#` are comments. A cover file uses the
//! same header and set syntax, with chains separated by single blank
//! lines. Parsing a canonically written file and writing it back is the
//! identity.

use std::fmt::Write as _;

use antichain_sat::{Chain, ChainCover, ElementSet, Error, Family, Result};

fn parse_header(line: Option<&str>) -> Result<u32> {
    let line = line.ok_or_else(|| Error::Precondition("missing `n=<int>` header".into()))?;
    let rest = line
        .strip_prefix("n=")
        .ok_or_else(|| Error::Precondition(format!("expected `n=<int>` header, found `{line}`")))?;
    rest.trim()
        .parse::<u32>()
        .map_err(|_| Error::Precondition(format!("invalid universe size `{rest}`")))
}

fn parse_set(line: &str, universe: u32) -> Result<ElementSet> {
    if line == "-" {
        return ElementSet::empty(universe);
    }
    let mut elements = Vec::new();
    for piece in line.split(',') {
        let value = piece
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::Precondition(format!("invalid element `{piece}` in `{line}`")))?;
        if let Some(&last) = elements.last() {
            if value <= last {
                return Err(Error::Precondition(format!(
                    "elements must be strictly increasing in `{line}`"
                )));
            }
        }
        elements.push(value);
    }
    ElementSet::from_elements(universe, &elements)
}

/// Lines that carry content: comments stripped, ends trimmed.
fn content_lines(input: &str) -> impl Iterator<Item = &str> {
    input.lines().filter_map(|line| {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            return None;
        }
        Some(trimmed.split('#').next().unwrap_or("").trim_end())
    })
}

/// Parses a family file; duplicate sets are rejected.
pub fn parse_family(input: &str) -> Result<Family> {
    let mut lines = content_lines(input).filter(|l| !l.is_empty());
    let universe = parse_header(lines.next())?;
    let mut sets = Vec::new();
    for line in lines {
        let set = parse_set(line, universe)?;
        if sets.contains(&set) {
            return Err(Error::Precondition(format!("duplicate set `{line}`")));
        }
        sets.push(set);
    }
    Family::from_sets(universe, sets)
}

/// Writes a family in canonical order.
pub fn write_family(family: &Family) -> String {
    let mut out = format!("n={}\n", family.universe());
    for set in family.iter() {
        let _ = writeln!(out, "{set}");
    }
    out
}

/// Parses a cover file; chain and disjointness invariants are enforced.
pub fn parse_cover(input: &str) -> Result<ChainCover> {
    let mut lines = content_lines(input);
    let universe = loop {
        match lines.next() {
            Some("") => continue,
            other => break parse_header(other)?,
        }
    };
    let mut chains = Vec::new();
    let mut current: Vec<ElementSet> = Vec::new();
    for line in lines {
        if line.is_empty() {
            if !current.is_empty() {
                chains.push(Chain::new(std::mem::take(&mut current))?);
            }
            continue;
        }
        current.push(parse_set(line, universe)?);
    }
    if !current.is_empty() {
        chains.push(Chain::new(current)?);
    }
    ChainCover::new(universe, chains)
}

/// Writes a cover with one blank line between chains.
pub fn write_cover(cover: &ChainCover) -> String {
    let mut out = format!("n={}\n", cover.universe_size());
    for (i, chain) in cover.chains().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for set in chain.sets() {
            let _ = writeln!(out, "{set}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trip_is_identity() {
        let text = "n=3\n-\n1\n1,2\n1,2,3\n";
        let family = parse_family(text).unwrap();
        assert_eq!(family.len(), 4);
        assert_eq!(write_family(&family), text);
        assert_eq!(parse_family(&write_family(&family)).unwrap(), family);
    }

    #[test]
    fn family_accepts_comments_and_blank_lines() {
        let text = "# a fixture\nn=2\n\n1\n# middle\n2\n";
        let family = parse_family(text).unwrap();
        assert_eq!(family.len(), 2);
    }

    #[test]
    fn family_rejects_bad_input() {
        assert!(parse_family("1,2\n").is_err());
        assert!(parse_family("n=2\n1\n1\n").is_err());
        assert!(parse_family("n=2\n2,1\n").is_err());
        assert!(parse_family("n=2\n3\n").is_err());
        assert!(parse_family("n=2\nx\n").is_err());
    }

    #[test]
    fn cover_round_trip_is_identity() {
        let text = "n=2\n-\n1\n1,2\n\n2\n";
        let cover = parse_cover(text).unwrap();
        assert_eq!(cover.len(), 2);
        assert_eq!(write_cover(&cover), text);
    }

    #[test]
    fn cover_rejects_broken_chains() {
        // Not nested.
        assert!(parse_cover("n=2\n1\n2\n").is_err());
        // Chains overlap.
        assert!(parse_cover("n=2\n1\n\n1\n1,2\n").is_err());
    }
}
