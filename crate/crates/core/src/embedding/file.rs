//! Embedding problem files.
//!
//! ```text
//! group Z2          # G
//! extension Z4      # B
//! quotient Z2       # A
//! alpha 1           # images in A of the generators of B
//! phi 1             # images in A of the generators of G
//! ```

use std::path::Path;
use std::sync::Arc;

use super::EmbeddingProblem;
use crate::error::{Error, Result};
use crate::group::{load_group, GroupHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub group: String,
    pub extension: String,
    pub quotient: String,
    pub alpha: (usize, Vec<usize>),
    pub phi: (usize, Vec<usize>),
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let (mut group, mut extension, mut quotient, mut alpha, mut phi) =
            (None, None, None, None, None);
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = line.split_whitespace().collect();
            let Some((&key, rest)) = words.split_first() else {
                continue;
            };
            let indices = || {
                rest.iter()
                    .map(|w| {
                        w.parse::<usize>().map_err(|_| {
                            Error::parse(
                                ln,
                                line.find(w).map_or(1, |c| c + 1),
                                format!("bad index `{w}`"),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            };
            match key {
                "group" if rest.len() == 1 => group = Some(rest[0].to_string()),
                "extension" if rest.len() == 1 => extension = Some(rest[0].to_string()),
                "quotient" if rest.len() == 1 => quotient = Some(rest[0].to_string()),
                "alpha" => alpha = Some((ln, indices()?)),
                "phi" => phi = Some((ln, indices()?)),
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
        let missing = |what: &str| Error::parse(1, 1, format!("missing `{what}` line"));
        Ok(ProblemFile {
            group: group.ok_or_else(|| missing("group"))?,
            extension: extension.ok_or_else(|| missing("extension"))?,
            quotient: quotient.ok_or_else(|| missing("quotient"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            phi: phi.ok_or_else(|| missing("phi"))?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        ProblemFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn problem(&self, base: Option<&Path>) -> Result<EmbeddingProblem> {
        let g = Arc::new(load_group(&self.group, base)?);
        let b = Arc::new(load_group(&self.extension, base)?);
        let a = Arc::new(load_group(&self.quotient, base)?);
        let at = |ln: usize| move |e: Error| Error::parse(ln, 1, e.to_string());
        let alpha = GroupHom::from_generator_images(b, a.clone(), &self.alpha.1)
            .map_err(at(self.alpha.0))?;
        let phi = GroupHom::from_generator_images(g, a, &self.phi.1).map_err(at(self.phi.0))?;
        EmbeddingProblem::new(alpha, phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{FiberSolver, LiftSolver};
    use crate::search::Budget;

    #[test]
    fn z2_into_z4_over_z2() {
        let f =
            ProblemFile::parse("group Z2\nextension Z4\nquotient Z2\nalpha 1\nphi 1\n").unwrap();
        let e = f.problem(None).unwrap();
        assert!(FiberSolver
            .solve(&e, &mut Budget::unlimited())
            .unwrap()
            .is_none());
        let f =
            ProblemFile::parse("group Z4\nextension Z4\nquotient Z2\nalpha 1\nphi 1\n").unwrap();
        let e = f.problem(None).unwrap();
        assert!(FiberSolver
            .solve(&e, &mut Budget::unlimited())
            .unwrap()
            .is_some());
    }

    #[test]
    fn bad_images_point_at_their_line() {
        let f =
            ProblemFile::parse("group Z2\nextension Z4\nquotient Z2\nalpha 1\nphi 5\n").unwrap();
        assert!(matches!(f.problem(None), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(
            ProblemFile::parse("group Z2\nphi q\n"),
            Err(Error::Parse {
                line: 2,
                column: 5,
                ..
            })
        ));
    }
}
