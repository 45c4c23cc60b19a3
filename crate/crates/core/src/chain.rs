//! Cell types and validated chain patterns.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spectral type of a donor cell. `D` is the dedicated readout cell and may
/// only appear as the last cell of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellType {
    A,
    B,
    C,
    D,
}

impl CellType {
    pub const ALL: [CellType; 4] = [CellType::A, CellType::B, CellType::C, CellType::D];

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'A' => Ok(CellType::A),
            'B' => Ok(CellType::B),
            'C' => Ok(CellType::C),
            'D' => Ok(CellType::D),
            other => Err(Error::InvalidPattern(format!("unknown cell type {other:?}"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            CellType::A => 'A',
            CellType::B => 'B',
            CellType::C => 'C',
            CellType::D => 'D',
        }
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A validated cell-type sequence such as `ABCABCD`.
///
/// Invariants: non-empty, no two consecutive cells of the same type
/// (neighbors must stay spectrally distinguishable), and at most one `D`,
/// which must be the final cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern {
    cells: Vec<CellType>,
}

impl Pattern {
    pub fn parse(s: &str) -> Result<Self> {
        let cells: Vec<CellType> = s.chars().map(CellType::from_char).collect::<Result<_>>()?;
        if cells.is_empty() {
            return Err(Error::InvalidPattern("pattern is empty".into()));
        }
        for (i, w) in cells.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidPattern(format!(
                    "consecutive cells {} and {} share type {}",
                    i,
                    i + 1,
                    w[0]
                )));
            }
        }
        let d_positions: Vec<usize> = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == CellType::D)
            .map(|(i, _)| i)
            .collect();
        if d_positions.len() > 1 {
            return Err(Error::InvalidPattern("more than one D cell".into()));
        }
        if let Some(&pos) = d_positions.first() {
            if pos != cells.len() - 1 {
                return Err(Error::InvalidPattern(format!(
                    "D cell at position {pos} is not the last cell"
                )));
            }
        }
        Ok(Pattern { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, site: usize) -> CellType {
        self.cells[site]
    }

    pub fn cells(&self) -> &[CellType] {
        &self.cells
    }

    pub fn ends_with_d(&self) -> bool {
        self.cells.last() == Some(&CellType::D)
    }

    /// Types present in the pattern, deduplicated, in A..D order.
    pub fn types_present(&self) -> Vec<CellType> {
        CellType::ALL
            .iter()
            .copied()
            .filter(|t| self.cells.contains(t))
            .collect()
    }

    /// Site indices holding the given type.
    pub fn sites_of_type(&self, t: CellType) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == t)
            .map(|(i, _)| i)
            .collect()
    }

    /// Adjacent bonds as (left site, right site) pairs.
    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cells.len().saturating_sub(1)).map(|i| (i, i + 1))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Pattern::parse(s)
    }
}

impl TryFrom<String> for Pattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Pattern::parse(&s)
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_standard_patterns() {
        for s in ["A", "AB", "ABC", "ABCABC", "ABCABCD", "ABCD", "CABCAB"] {
            let p = Pattern::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn rejects_misplaced_d() {
        assert!(Pattern::parse("ABDC").is_err());
        assert!(Pattern::parse("DAB").is_err());
        assert!(Pattern::parse("ABCDABCD").is_err());
    }

    #[test]
    fn rejects_adjacent_duplicates_and_garbage() {
        assert!(Pattern::parse("AABC").is_err());
        assert!(Pattern::parse("").is_err());
        assert!(Pattern::parse("ABX").is_err());
    }

    #[test]
    fn site_queries() {
        let p = Pattern::parse("ABCABCD").unwrap();
        assert_eq!(p.sites_of_type(CellType::A), vec![0, 3]);
        assert_eq!(p.sites_of_type(CellType::D), vec![6]);
        assert_eq!(p.types_present().len(), 4);
        assert_eq!(p.bonds().count(), 6);
    }
}
