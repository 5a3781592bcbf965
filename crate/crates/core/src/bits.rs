//! Dense square bit matrices.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    dim: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(dim: usize) -> Self {
        let words = dim.div_ceil(64).max(1);
        Self {
            dim,
            words,
            data: vec![0; words * dim],
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut m = Self::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.dim && j < self.dim);
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Entry-wise conjunction.
    pub fn and(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a & b).collect();
        BitMatrix {
            dim: self.dim,
            words: self.words,
            data,
        }
    }

    /// True iff every set entry of `self` is set in `other`.
    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Rows rendered as strings of `0`/`1`.
    pub fn rows(&self) -> impl Iterator<Item = String> + '_ {
        (0..self.dim).map(move |i| {
            (0..self.dim)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect()
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.dim)?;
        for r in self.rows() {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}
