use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// `dim Tor_{i,j}` for `i ≤ i_max`, `j ≤ j_max`; absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorTable {
    pub i_max: usize,
    pub j_max: usize,
    entries: BTreeMap<(usize, usize), usize>,
}

impl TorTable {
    pub fn new(i_max: usize, j_max: usize) -> Self {
        Self { i_max, j_max, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, i: usize, j: usize, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), dim);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries.iter().map(|(&(i, j), &d)| (i, j, d))
    }

    /// Nonzero entries with `i ≠ j` and `i ≥ min_i`.
    pub fn off_diagonal(&self, min_i: usize) -> Vec<(usize, usize, usize)> {
        self.nonzero().filter(|&(i, j, _)| i != j && i >= min_i).collect()
    }

    pub fn is_diagonal(&self, min_i: usize) -> bool {
        self.off_diagonal(min_i).is_empty()
    }

    /// Smallest internal degree carrying an off-diagonal entry.
    pub fn first_off_diagonal_degree(&self, min_i: usize) -> Option<usize> {
        self.off_diagonal(min_i).into_iter().map(|(_, j, _)| j).min()
    }

    /// True when nothing sits strictly below the diagonal (`j < i`).
    pub fn vanishes_below_diagonal(&self) -> bool {
        self.nonzero().all(|(i, j, _)| j >= i)
    }

    /// `Tor_{i,i}` for `i = 0..=i_max`.
    pub fn diagonal(&self) -> Vec<usize> {
        (0..=self.i_max).map(|i| self.get(i, i)).collect()
    }

    /// Keep only entries with `i ≤ i_max` and `j ≤ j_max`.
    pub fn truncate(&self, i_max: usize, j_max: usize) -> TorTable {
        let mut t = TorTable::new(i_max, j_max);
        for (i, j, d) in self.nonzero() {
            if i <= i_max && j <= j_max {
                t.set(i, j, d);
            }
        }
        t
    }
}

impl Serialize for TorTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<[usize; 3]> = self.nonzero().map(|(i, j, d)| [i, j, d]).collect();
        let mut st = s.serialize_struct("TorTable", 3)?;
        st.serialize_field("i_max", &self.i_max)?;
        st.serialize_field("j_max", &self.j_max)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries() {
        let mut t = TorTable::new(3, 4);
        t.set(0, 0, 1);
        t.set(1, 1, 2);
        t.set(2, 3, 1);
        t.set(2, 2, 0);
        assert_eq!(t.get(2, 2), 0);
        assert_eq!(t.off_diagonal(0), vec![(2, 3, 1)]);
        assert_eq!(t.first_off_diagonal_degree(1), Some(3));
        assert!(t.vanishes_below_diagonal());
        assert_eq!(t.diagonal(), vec![1, 2, 0, 0]);
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"i_max":3,"j_max":4,"entries":[[0,0,1],[1,1,2],[2,3,1]]}"#);
    }
}
