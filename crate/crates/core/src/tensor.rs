//! Dense tensors of constant components in a fixed frame.

use std::ops::{Index, IndexMut};

use num_traits::Zero;

/// Rank-`rank` array over `dim` frame indices, row-major, last index fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<T> {
    dim: usize,
    rank: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Tensor<T> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor { dim, rank, data: vec![T::zero(); dim.pow(rank as u32)] }
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let mut t = Self::zeros(dim, rank);
        for (pos, idx) in MultiIndex::new(dim, rank).enumerate() {
            t.data[pos] = f(&idx);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    /// Entries paired with their multi-indices.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        MultiIndex::new(self.dim, self.rank).zip(self.data.iter())
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        self.entries().filter(|(_, v)| !v.is_zero())
    }
}

impl<T> Tensor<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn at(&self, idx: &[usize]) -> &T {
        &self.data[self.offset(idx)]
    }

    pub fn at_mut(&mut self, idx: &[usize]) -> &mut T {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// The component vector `t[idx..., ·]` along the last slot.
    pub fn fiber(&self, idx: &[usize]) -> &[T] {
        debug_assert_eq!(idx.len() + 1, self.rank);
        let start = idx.iter().fold(0, |acc, &i| acc * self.dim + i) * self.dim;
        &self.data[start..start + self.dim]
    }
}

impl<T, const N: usize> Index<[usize; N]> for Tensor<T> {
    type Output = T;
    fn index(&self, idx: [usize; N]) -> &T {
        self.at(&idx)
    }
}

impl<T, const N: usize> IndexMut<[usize; N]> for Tensor<T> {
    fn index_mut(&mut self, idx: [usize; N]) -> &mut T {
        self.at_mut(&idx)
    }
}

/// Iterator over all multi-indices of a given rank in lexicographic order.
pub struct MultiIndex {
    dim: usize,
    current: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(dim: usize, rank: usize) -> Self {
        let current = if dim == 0 && rank > 0 { None } else { Some(vec![0; rank]) };
        MultiIndex { dim, current }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut carry = true;
        for slot in next.iter_mut().rev() {
            *slot += 1;
            if *slot < self.dim {
                carry = false;
                break;
            }
            *slot = 0;
        }
        self.current = if carry { None } else { Some(next) };
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_row_major() {
        let t: Tensor<i64> = Tensor::from_fn(3, 2, |i| (i[0] * 10 + i[1]) as i64);
        assert_eq!(t[[2, 1]], 21);
        assert_eq!(t.fiber(&[1]), &[10, 11, 12]);
        assert_eq!(MultiIndex::new(2, 3).count(), 8);
        assert_eq!(MultiIndex::new(4, 0).count(), 1);
    }
}
