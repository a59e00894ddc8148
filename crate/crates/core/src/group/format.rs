//! Group spec text format:
//!
//! ```text
//! order N
//! generators i j k
//! <N lines of N space-separated indices>
//! ```
//!
//! Blank lines and `#` comments are ignored.

use std::path::Path;

use super::{build_from_table, lookup_fixture, FiniteGroup};
use crate::error::{Error, Result};

pub fn parse_group_spec(text: &str) -> Result<FiniteGroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty group spec"))?;
    let order = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["order", n] => n
            .parse::<usize>()
            .map_err(|_| Error::parse(ln, 7, format!("bad order `{n}`")))?,
        _ => return Err(Error::parse(ln, 1, "expected `order N`")),
    };

    let (ln, gen_line) = lines
        .next()
        .ok_or_else(|| Error::parse(ln + 1, 1, "expected `generators ...`"))?;
    let mut words = gen_line.split_whitespace();
    if words.next() != Some("generators") {
        return Err(Error::parse(ln, 1, "expected `generators ...`"));
    }
    let generators = parse_indices(ln, gen_line, words, "generators ".len())?;

    let mut table = Vec::with_capacity(order);
    for (ln, row) in lines {
        let values = parse_indices(ln, row, row.split_whitespace(), 0)?;
        if values.len() != order {
            return Err(Error::parse(
                ln,
                1,
                format!("row has {} entries, expected {order}", values.len()),
            ));
        }
        if let Some(pos) = values.iter().position(|&v| v >= order) {
            return Err(Error::parse(ln, column_of(row, pos), "entry out of range"));
        }
        table.push(values);
    }
    if table.len() != order {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("found {} table rows, expected {order}", table.len()),
        ));
    }
    build_from_table(&table, &generators)
}

fn parse_indices<'a>(
    ln: usize,
    line: &str,
    words: impl Iterator<Item = &'a str>,
    offset: usize,
) -> Result<Vec<usize>> {
    words
        .enumerate()
        .map(|(k, w)| {
            w.parse::<usize>().map_err(|_| {
                Error::parse(
                    ln,
                    offset.max(column_of(line, k)),
                    format!("bad index `{w}`"),
                )
            })
        })
        .collect()
}

/// 1-based column of the `k`-th whitespace separated word.
fn column_of(line: &str, k: usize) -> usize {
    let mut count = 0;
    let mut in_word = false;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            in_word = false;
        } else if !in_word {
            if count == k {
                return i + 1;
            }
            count += 1;
            in_word = true;
        }
    }
    line.len() + 1
}

pub fn write_group_spec(g: &FiniteGroup) -> String {
    let mut out = format!("order {}\ngenerators", g.order());
    for gen in g.generators() {
        out.push_str(&format!(" {gen}"));
    }
    out.push('\n');
    for a in g.elements() {
        let row: Vec<String> = g.table_row(a).map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A group reference: a fixture name, or a path to a group spec file
/// resolved against `base`.
pub fn load_group(reference: &str, base: Option<&Path>) -> Result<FiniteGroup> {
    let reference = reference.trim();
    match lookup_fixture(reference) {
        Err(Error::Unknown { .. }) => {}
        other => return other,
    }
    let path = match base {
        Some(dir) => dir.join(reference),
        None => Path::new(reference).to_path_buf(),
    };
    if !path.is_file() {
        return Err(Error::Unknown {
            kind: "group",
            name: reference.to_string(),
        });
    }
    let text = std::fs::read_to_string(&path)?;
    let label = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(reference)
        .to_string();
    Ok(parse_group_spec(&text)?.with_label(label))
}
