//! Dense bit matrices used as adjacency storage.
//!
//! Rows are `u64` words so that neighbourhood intersections reduce to
//! word-wise AND + popcount, which is what the statistic engine and the
//! sampler lean on.

/// A fixed-shape matrix of bits, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        *w ^= 1 << (c % 64);
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Number of set bits in row `r`.
    pub fn row_count(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Number of set bits in column `c` (linear scan over rows).
    pub fn col_count(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// |row(a) AND row(b)|.
    pub fn row_and_count(&self, a: usize, b: usize) -> usize {
        self.row_words(a)
            .iter()
            .zip(self.row_words(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// |row(a) of self AND row(b) of other|; both matrices must share
    /// the column count.
    pub fn row_and_count_with(&self, a: usize, other: &BitMatrix, b: usize) -> usize {
        debug_assert_eq!(self.cols, other.cols);
        self.row_words(a)
            .iter()
            .zip(other.row_words(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Indices of set bits in row `r`, ascending.
    pub fn row_ones(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.row_count(r));
        for (wi, &w) in self.row_words(r).iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let tz = bits.trailing_zeros() as usize;
                out.push(wi * 64 + tz);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Total number of set bits.
    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal_is_zero(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }
}
