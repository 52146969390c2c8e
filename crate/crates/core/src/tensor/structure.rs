use serde::Serialize;

use crate::error::{Error, Result};

/// Local dimensions of each party. Party 0 is the leftmost (most
/// significant) tensor factor everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartyStructure {
    dims: Vec<usize>,
}

impl PartyStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidStructure("no parties".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidStructure(format!("local dimension {d} < 2")));
        }
        Ok(PartyStructure { dims })
    }

    /// `n` parties of equal local dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn qubits(n: usize) -> Self {
        Self::uniform(n, 2).expect("qubit structure is valid")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PartyStructure { dims }
    }

    /// Per-party levels of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&v, &d)| acc * d + v)
    }

    pub fn check_party(&self, party: usize) -> Result<()> {
        if party < self.parties() {
            Ok(())
        } else {
            Err(Error::PartyOutOfRange { party, parties: self.parties() })
        }
    }

    pub fn bipartition(&self, subset: &[usize]) -> Result<Bipartition> {
        Bipartition::new(self, subset)
    }

    /// All `2^(n-1) - 1` bipartitions, each listed by the side that holds party 0.
    pub fn all_bipartitions(&self) -> Vec<Bipartition> {
        let n = self.parties();
        if n < 2 {
            return Vec::new();
        }
        (0..(1usize << (n - 1)) - 1)
            .map(|mask| {
                let side: Vec<usize> = std::iter::once(0).chain((1..n).filter(|&p| mask >> (p - 1) & 1 == 1)).collect();
                Bipartition::new(self, &side).expect("enumerated bipartitions are proper")
            })
            .collect()
    }
}

/// A split of the parties into two non-empty groups, with the index map
/// from `(i_a, i_b)` to the flat index of the full space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
    dim_a: usize,
    dim_b: usize,
    flat: Vec<usize>,
}

impl Bipartition {
    pub fn new(structure: &PartyStructure, subset: &[usize]) -> Result<Self> {
        let n = structure.parties();
        let mut side_a: Vec<usize> = subset.to_vec();
        side_a.sort_unstable();
        side_a.dedup();
        if side_a.is_empty() || side_a.len() >= n {
            return Err(Error::InvalidBipartition(format!(
                "subset {subset:?} must be a proper non-empty subset of {n} parties"
            )));
        }
        for &p in &side_a {
            structure.check_party(p)?;
        }
        let side_b: Vec<usize> = (0..n).filter(|p| !side_a.contains(p)).collect();
        let dims = structure.dims();
        let dim_a: usize = side_a.iter().map(|&p| dims[p]).product();
        let dim_b: usize = side_b.iter().map(|&p| dims[p]).product();

        let sub_a = PartyStructure { dims: side_a.iter().map(|&p| dims[p]).collect() };
        let sub_b = PartyStructure { dims: side_b.iter().map(|&p| dims[p]).collect() };
        let mut flat = vec![0; dim_a * dim_b];
        let mut digits = vec![0; n];
        for ia in 0..dim_a {
            for (&p, v) in side_a.iter().zip(sub_a.digits(ia)) {
                digits[p] = v;
            }
            for ib in 0..dim_b {
                for (&p, v) in side_b.iter().zip(sub_b.digits(ib)) {
                    digits[p] = v;
                }
                flat[ia * dim_b + ib] = structure.index(&digits);
            }
        }
        Ok(Bipartition { side_a, side_b, dim_a, dim_b, flat })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Flat index of `|i_a>|i_b>` in the full space.
    #[inline]
    pub fn flat_index(&self, ia: usize, ib: usize) -> usize {
        self.flat[ia * self.dim_b + ib]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(PartyStructure::new(vec![]).is_err());
        assert!(PartyStructure::new(vec![2, 1]).is_err());
        assert_eq!(PartyStructure::new(vec![2, 3]).unwrap().total_dim(), 6);
    }

    #[test]
    fn digits_roundtrip_leftmost_significant() {
        let s = PartyStructure::new(vec![2, 3, 4]).unwrap();
        assert_eq!(s.digits(0), vec![0, 0, 0]);
        assert_eq!(s.digits(1), vec![0, 0, 1]);
        assert_eq!(s.digits(12), vec![1, 0, 0]);
        for i in 0..s.total_dim() {
            assert_eq!(s.index(&s.digits(i)), i);
        }
    }

    #[test]
    fn bipartition_count() {
        assert_eq!(PartyStructure::qubits(4).all_bipartitions().len(), 7);
        assert_eq!(PartyStructure::uniform(3, 4).unwrap().all_bipartitions().len(), 3);
        assert_eq!(PartyStructure::qubits(2).all_bipartitions().len(), 1);
    }

    #[test]
    fn bipartition_rejects_improper() {
        let s = PartyStructure::qubits(3);
        assert!(s.bipartition(&[]).is_err());
        assert!(s.bipartition(&[0, 1, 2]).is_err());
        assert!(s.bipartition(&[5]).is_err());
    }

    #[test]
    fn bipartition_index_map_is_a_permutation() {
        let s = PartyStructure::new(vec![2, 3, 2]).unwrap();
        let b = s.bipartition(&[1]).unwrap();
        let mut seen: Vec<usize> =
            (0..b.dim_a()).flat_map(|a| (0..b.dim_b()).map(move |c| (a, c))).map(|(a, c)| b.flat_index(a, c)).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
        // level 2 on the middle party, others 0 -> flat index 2*2 = 4
        assert_eq!(b.flat_index(2, 0), 4);
    }
}
