//! Linear algebra over the field with two elements, rows packed into `u64`s.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Solves `A w = b` over GF(2) and returns the lexicographically least
/// solution in `{0,1}^n`, or `None` if the system is inconsistent.
///
/// Pivot columns are taken from the right. Every pivot variable then depends
/// only on free variables to its left, so fixing all free variables to 0
/// gives the lexicographically least solution.
pub fn solve_lex_least(rows: &[BitRow], rhs: &[bool], ncols: usize) -> Option<Vec<bool>> {
    // Augmented column lives at index `ncols`.
    let mut a: Vec<BitRow> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = BitRow::zeros(ncols + 1);
            for c in 0..ncols {
                row.set(c, r.get(c));
            }
            row.set(ncols, b);
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for col in (0..ncols).rev() {
        let Some(p) = (next..a.len()).find(|&r| a[r].get(col)) else {
            continue;
        };
        a.swap(next, p);
        let pivot = a[next].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    // Rows without a pivot must have a zero right-hand side.
    if a[next..].iter().any(|r| r.get(ncols)) {
        return None;
    }
    let mut w = vec![false; ncols];
    for (r, c) in pivots {
        w[c] = a[r].get(ncols);
    }
    Some(w)
}
