use crate::error::{Error, Result};
use crate::triangle::MonotoneTriangle;
use crate::MAX_SIZE;

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u8>,
}

impl Permutation {
    pub fn new(values: &[usize]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::SizeTooSmall { n, min: 1 });
        }
        if n > MAX_SIZE {
            return Err(Error::SizeTooLarge { n, max: MAX_SIZE });
        }
        let mut seen = vec![false; n + 1];
        for &v in values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotAPermutation {
                    n,
                    detail: format!("value {v} is out of range or repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation {
            values: values.iter().map(|&v| v as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u8).collect(),
        }
    }

    /// Parses one-line notation such as `"312"` (digits only, so `n <= 9`).
    pub fn from_digits(s: &str) -> Result<Self> {
        let values: Option<Vec<usize>> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect();
        let values = values.ok_or_else(|| Error::NotAPermutation {
            n: s.len(),
            detail: format!("{s:?} is not a digit string"),
        })?;
        Permutation::new(&values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (1..=n as u8).collect();
        let mut out = vec![Permutation {
            values: cur.clone(),
        }];
        loop {
            let Some(i) = (0..n.saturating_sub(1)).rfind(|&i| cur[i] < cur[i + 1]) else {
                return out;
            };
            let j = cur.iter().rposition(|&x| x > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(Permutation {
                values: cur.clone(),
            });
        }
    }
}

/// Row `i` of the image is the sorted set `{p(1), ..., p(i)}`.
pub fn perm_to_triangle(p: &Permutation) -> MonotoneTriangle {
    let mut rows = Vec::with_capacity(p.n());
    let mut prefix: Vec<i64> = Vec::with_capacity(p.n());
    for &v in p.values() {
        let pos = prefix.partition_point(|&x| x < v as i64);
        prefix.insert(pos, v as i64);
        rows.push(prefix.clone());
    }
    MonotoneTriangle::from_rows(&rows).expect("permutation prefixes always interlace")
}
