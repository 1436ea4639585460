//! Square integer matrices and permutations.

use serde::{Deserialize, Serialize};

/// Small dense square matrix with non-negative integer entries. When built
/// as a sum of `r` permutation matrices every row and column sum equals `r`.
///
/// Serializes as a JSON array of row arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    rows: Vec<Vec<u64>>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Add the permutation matrix of `p` (entry at `(i, p(i))`) in place.
    pub fn add_permutation(&mut self, p: &Permutation) {
        for (i, &j) in p.images().iter().enumerate() {
            self.rows[i][j] += 1;
        }
    }

    /// Entrywise sum of permutation matrices.
    pub fn sum_of_permutations(n: usize, perms: &[Permutation]) -> Self {
        let mut m = Self::zero(n);
        for p in perms {
            m.add_permutation(p);
        }
        m
    }

    /// The matrix with rows `rows` and columns `cols` removed.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Self {
        let keep = |dropped: &[usize]| -> Vec<usize> {
            (0..self.n()).filter(|i| !dropped.contains(i)).collect()
        };
        let (ri, ci) = (keep(drop_rows), keep(drop_cols));
        IntMatrix {
            rows: ri
                .iter()
                .map(|&i| ci.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n())
            .map(|j| self.rows.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// True when every row and column sums to `r`.
    pub fn is_r_regular(&self, r: u64) -> bool {
        self.row_sums().iter().all(|&s| s == r) && self.col_sums().iter().all(|&s| s == r)
    }
}

/// A permutation of `0..n`, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&j| {
                let fresh = j < images.len() && !seen[j];
                if fresh {
                    seen[j] = true;
                }
                fresh
            })
        });
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<u32> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// All n! permutations of `0..n`, in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = (0..n).collect::<Vec<_>>();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // Next lexicographic permutation.
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_permutations_is_regular() {
        let p1 = Permutation::from_images(vec![1, 2, 3, 0]);
        let p2 = Permutation::from_images(vec![0, 1, 2, 3]);
        let m = IntMatrix::sum_of_permutations(4, &[p1, p2]);
        assert!(m.is_r_regular(2));
    }

    #[test]
    fn cycle_type_extraction() {
        let p = Permutation::from_images(vec![1, 0, 3, 4, 2, 5]);
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
    }

    #[test]
    fn all_permutations_count_and_uniqueness() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        let set: std::collections::HashSet<_> = all.iter().map(|p| p.images.clone()).collect();
        assert_eq!(set.len(), 24);
    }

    #[test]
    fn minor_drops_rows_and_cols() {
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let sub = m.minor(&[1], &[0]);
        assert_eq!(sub, IntMatrix::from_rows(vec![vec![2, 3], vec![8, 9]]));
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = IntMatrix::identity(3);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,0,0],[0,1,0],[0,0,1]]");
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), m);
    }
}
