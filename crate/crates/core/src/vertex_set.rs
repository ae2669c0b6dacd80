use std::fmt;

use crate::error::{Error, Result};
use crate::word::Word;

/// A set of distinct words of a common length, kept in vertex-index order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dim: usize,
    members: Vec<Word>,
}

impl VertexSet {
    /// Rejects members of the wrong length and duplicates.
    pub fn new<I: IntoIterator<Item = Word>>(dim: usize, members: I) -> Result<Self> {
        let mut members: Vec<Word> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|w| w.len() != dim) {
            return Err(Error::WrongMemberLength { word: bad.to_string(), len: bad.len(), dim });
        }
        members.sort_unstable();
        if let Some(pair) = members.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateMember(pair[0].to_string()));
        }
        Ok(Self { dim, members })
    }

    /// Like [`VertexSet::new`] but silently merges duplicates.
    pub fn collect_dedup<I: IntoIterator<Item = Word>>(dim: usize, members: I) -> Result<Self> {
        let mut members: Vec<Word> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|w| w.len() != dim) {
            return Err(Error::WrongMemberLength { word: bad.to_string(), len: bad.len(), dim });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { dim, members })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, members: Vec::new() }
    }

    /// Every word of length `dim`, in index order.
    pub fn full(dim: usize) -> Self {
        assert!(dim <= 30, "refusing to materialise Q_{dim}");
        let members = (0..1u64 << dim).map(|i| Word::from_index(dim, i)).collect();
        Self { dim, members }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.members.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.dim == other.dim && self.members.iter().all(|w| other.contains(w))
    }

    /// `self ∖ other`.
    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { set: other.dim, requested: self.dim });
        }
        let members = self.members.iter().filter(|w| !other.contains(w)).cloned().collect();
        Ok(VertexSet { dim: self.dim, members })
    }

    pub fn into_members(self) -> Vec<Word> {
        self.members
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Word;
    type IntoIter = std::slice::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet(Q_{}; ", self.dim)?;
        f.debug_set().entries(self.members.iter().map(|w| w.to_string())).finish()?;
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, words: &[&str]) -> Result<VertexSet> {
        VertexSet::new(dim, words.iter().map(|s| s.parse().unwrap()))
    }

    #[test]
    fn sorted_in_index_order() {
        let s = set(3, &["110", "001", "100"]).unwrap();
        let listed: Vec<String> = s.iter().map(|w| w.to_string()).collect();
        assert_eq!(listed, ["001", "100", "110"]);
    }

    #[test]
    fn rejects_duplicates_and_wrong_lengths() {
        assert!(matches!(set(3, &["110", "110"]), Err(Error::DuplicateMember(_))));
        assert!(matches!(set(3, &["110", "10"]), Err(Error::WrongMemberLength { .. })));
    }

    #[test]
    fn difference_and_subset() {
        let a = set(2, &["00", "01", "11"]).unwrap();
        let b = set(2, &["01"]).unwrap();
        assert!(b.is_subset(&a));
        assert_eq!(a.difference(&b).unwrap(), set(2, &["00", "11"]).unwrap());
    }
}
