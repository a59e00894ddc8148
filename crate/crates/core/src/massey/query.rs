//! Massey query files.
//!
//! ```text
//! group V4      # fixture name or path to a group spec
//! p 2
//! n 3           # optional when `a` rows are given
//! a 1 0         # values of a_i on the generators of G
//! a 0 1
//! a 1 1
//! ```
//!
//! Without `a` rows the query covers every `n`-tuple of classes.

use std::path::Path;
use std::sync::Arc;

use super::MasseyQuery;
use crate::cochain::Cohomology;
use crate::error::{Error, Result};
use crate::group::{build_cyclic, load_group, FiniteGroup, GroupHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryFile {
    pub group: String,
    pub p: u8,
    pub n: usize,
    /// `(line, values on generators)`.
    pub rows: Vec<(usize, Vec<u8>)>,
}

fn number<T: std::str::FromStr>(line: usize, line_text: &str, word: &str) -> Result<T> {
    let column = line_text.find(word).map_or(1, |i| i + 1);
    word.parse()
        .map_err(|_| Error::parse(line, column, format!("bad number `{word}`")))
}

impl QueryFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut group = None;
        let mut p = None;
        let mut n = None;
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = line.split_whitespace().collect();
            let Some((&key, rest)) = words.split_first() else {
                continue;
            };
            match key {
                "group" if rest.len() == 1 => group = Some(rest[0].to_string()),
                "p" if rest.len() == 1 => p = Some(number::<u8>(ln, line, rest[0])?),
                "n" if rest.len() == 1 => n = Some(number::<usize>(ln, line, rest[0])?),
                "a" => rows.push((
                    ln,
                    rest.iter()
                        .map(|w| number::<u8>(ln, line, w))
                        .collect::<Result<Vec<_>>>()?,
                )),
                _ => {
                    let column = line.find(key).map_or(1, |c| c + 1);
                    return Err(Error::parse(
                        ln,
                        column,
                        format!("unexpected `{}`", line.trim()),
                    ));
                }
            }
        }
        let group = group.ok_or_else(|| Error::parse(1, 1, "missing `group` line"))?;
        let p = p.ok_or_else(|| Error::parse(1, 1, "missing `p` line"))?;
        let n = match (n, rows.len()) {
            (Some(n), 0) => n,
            (Some(n), r) if r != n => {
                return Err(Error::parse(
                    rows[0].0,
                    1,
                    format!("n = {n} but {r} classes given"),
                ));
            }
            (Some(n), _) => n,
            (None, 0) => return Err(Error::parse(1, 1, "missing `n` line and no classes")),
            (None, r) => r,
        };
        Ok(QueryFile { group, p, n, rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        QueryFile::parse(&std::fs::read_to_string(path)?)
    }

    /// The explicit tuple, as values on every element, if one is given.
    pub fn tuple(&self, group: &Arc<FiniteGroup>) -> Result<Option<Vec<Vec<u8>>>> {
        if self.rows.is_empty() {
            return Ok(None);
        }
        let zp = Arc::new(build_cyclic(self.p as usize)?);
        self.rows
            .iter()
            .map(|(ln, row)| {
                if row.iter().any(|&v| v >= self.p) {
                    return Err(Error::parse(
                        *ln,
                        1,
                        format!("values must be below p = {}", self.p),
                    ));
                }
                let idx: Vec<usize> = row.iter().map(|&v| v as usize).collect();
                let hom = GroupHom::from_generator_images(group.clone(), zp.clone(), &idx)
                    .map_err(|e| Error::parse(*ln, 1, e.to_string()))?;
                Ok(hom.images().iter().map(|&v| v as u8).collect())
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Resolves the group (relative to `base`) and computes cohomology.
    pub fn cohomology(&self, base: Option<&Path>) -> Result<Arc<Cohomology>> {
        let g = Arc::new(load_group(&self.group, base)?);
        Ok(Arc::new(Cohomology::compute(g, self.p)?))
    }

    pub fn query(&self, coh: &Arc<Cohomology>) -> Result<Option<MasseyQuery>> {
        match self.tuple(coh.group())? {
            Some(values) => MasseyQuery::from_values(coh.clone(), &values).map(Some),
            None => Ok(None),
        }
    }
}
