//! The two matrix forms of a monotone triangle.
//!
//! Row `i` of the column-sum matrix has a one in column `j` iff `j` occurs in
//! row `i` of the triangle. The alternating-sign matrix is the sequence of
//! successive row differences of the column-sum matrix.

use std::fmt;

use crate::error::{Error, Result};
use crate::triangle::MonotoneTriangle;
use crate::MAX_SIZE;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnSumMatrix {
    n: usize,
    entries: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlternatingSignMatrix {
    n: usize,
    entries: Vec<i8>,
}

fn check_square<T>(rows: &[Vec<T>]) -> std::result::Result<usize, String> {
    let n = rows.len();
    if n == 0 {
        return Err("matrix is empty".into());
    }
    if n > MAX_SIZE {
        return Err(format!("size {n} exceeds {MAX_SIZE}"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            ));
        }
    }
    Ok(n)
}

impl ColumnSumMatrix {
    /// Validates a square 0/1 matrix whose row `i` has exactly `i` ones and
    /// whose successive row differences form an alternating-sign matrix.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let n = check_square(rows).map_err(Error::NotAColumnSumMatrix)?;
        let mut entries = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 && v != 1 {
                    return Err(Error::NotAColumnSumMatrix(format!(
                        "entry ({},{}) is {v}, expected 0 or 1",
                        i + 1,
                        j + 1
                    )));
                }
                entries.push(v as u8);
            }
            let ones = r.iter().filter(|&&v| v == 1).count();
            if ones != i + 1 {
                return Err(Error::NotAColumnSumMatrix(format!(
                    "row {} has {ones} ones, expected {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let m = ColumnSumMatrix { n, entries };
        // differences form an ASM exactly when the rows of one-positions interlace
        m.triangle_rows_checked()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    fn triangle_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n)
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v == 1)
                    .map(|(j, _)| j as i64 + 1)
                    .collect()
            })
            .collect()
    }

    fn triangle_rows_checked(&self) -> Result<MonotoneTriangle> {
        MonotoneTriangle::from_rows(&self.triangle_rows())
            .map_err(|e| Error::NotAColumnSumMatrix(e.to_string()))
    }
}

impl AlternatingSignMatrix {
    /// Validates entries in {-1, 0, 1} with every row and column summing to
    /// 1 and nonzero entries alternating in sign, starting and ending with +1.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let n = check_square(rows).map_err(Error::NotAnAsm)?;
        let mut entries = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(Error::NotAnAsm(format!(
                        "entry ({},{}) is {v}",
                        i + 1,
                        j + 1
                    )));
                }
                entries.push(v as i8);
            }
        }
        let m = AlternatingSignMatrix { n, entries };
        // alternation starting and ending with +1 <=> partial sums stay in {0,1}
        // and the total is 1
        for i in 1..=n {
            check_line((1..=n).map(|j| m.get(i, j)), "row", i)?;
        }
        for j in 1..=n {
            check_line((1..=n).map(|i| m.get(i, j)), "column", j)?;
        }
        Ok(m)
    }

    /// Permutation matrix with a one at `(i, p(i))`.
    pub fn permutation_matrix(p: &crate::permutation::Permutation) -> Self {
        let n = p.n();
        let mut entries = vec![0i8; n * n];
        for (i, &v) in p.values().iter().enumerate() {
            entries[i * n + (v as usize - 1)] = 1;
        }
        AlternatingSignMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    pub fn has_negative_entry(&self) -> bool {
        self.entries.iter().any(|&v| v < 0)
    }
}

fn check_line(line: impl Iterator<Item = i8>, what: &str, idx: usize) -> Result<()> {
    let mut sum = 0i64;
    for v in line {
        sum += v as i64;
        if !(0..=1).contains(&sum) {
            return Err(Error::NotAnAsm(format!(
                "{what} {idx} does not alternate in sign starting with +1"
            )));
        }
    }
    if sum != 1 {
        return Err(Error::NotAnAsm(format!(
            "{what} {idx} sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

pub fn to_column_sum(t: &MonotoneTriangle) -> ColumnSumMatrix {
    let n = t.n();
    let mut entries = vec![0u8; n * n];
    for (i, row) in t.rows().enumerate() {
        for &v in row {
            entries[i * n + (v as usize - 1)] = 1;
        }
    }
    ColumnSumMatrix { n, entries }
}

pub fn from_column_sum(c: &ColumnSumMatrix) -> MonotoneTriangle {
    c.triangle_rows_checked()
        .expect("a validated column-sum matrix always yields a monotone triangle")
}

pub fn to_asm(t: &MonotoneTriangle) -> AlternatingSignMatrix {
    let c = to_column_sum(t);
    let n = c.n;
    let entries = (0..n * n)
        .map(|k| {
            let above = if k >= n { c.entries[k - n] } else { 0 };
            c.entries[k] as i8 - above as i8
        })
        .collect();
    AlternatingSignMatrix { n, entries }
}

pub fn from_asm(a: &AlternatingSignMatrix) -> MonotoneTriangle {
    let n = a.n;
    let mut rows = Vec::with_capacity(n);
    let mut acc = vec![0i64; n];
    for i in 0..n {
        for (j, s) in acc.iter_mut().enumerate() {
            *s += a.entries[i * n + j] as i64;
        }
        rows.push(acc.clone());
    }
    let c = ColumnSumMatrix::new(&rows)
        .expect("partial column sums of an ASM form a column-sum matrix");
    from_column_sum(&c)
}

fn write_matrix<T: fmt::Display>(f: &mut fmt::Formatter<'_>, rows: &[Vec<T>]) -> fmt::Result {
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            writeln!(f)?;
        }
        for (j, v) in r.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ColumnSumMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrix(f, &self.to_rows())
    }
}

impl fmt::Display for AlternatingSignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrix(f, &self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::{extremal_triangle, Extreme};

    fn fig1() -> MonotoneTriangle {
        MonotoneTriangle::from_rows(&[vec![3i64], vec![2, 4], vec![1, 3, 4], vec![1, 2, 3, 4]])
            .unwrap()
    }

    #[test]
    fn worked_example_triple() {
        let c = to_column_sum(&fig1());
        assert_eq!(
            c.to_rows(),
            vec![
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![1, 0, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        let a = to_asm(&fig1());
        assert_eq!(
            a.to_rows(),
            vec![
                vec![0, 0, 1, 0],
                vec![0, 1, -1, 1],
                vec![1, -1, 1, 0],
                vec![0, 1, 0, 0]
            ]
        );
        assert_eq!(a.get(2, 3), -1);
        assert_eq!(a.get(3, 2), -1);
        assert_eq!(from_column_sum(&c), fig1());
        assert_eq!(from_asm(&a), fig1());
    }

    #[test]
    fn small_cases() {
        let lo2 = extremal_triangle(2, Extreme::Min).unwrap();
        assert_eq!(to_column_sum(&lo2).to_rows(), vec![vec![1, 0], vec![1, 1]]);
        let c = ColumnSumMatrix::new(&[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(from_column_sum(&c).to_rows(), vec![vec![2], vec![1, 2]]);
        for n in 1..=6 {
            let a = to_asm(&extremal_triangle(n, Extreme::Min).unwrap());
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(a.get(i, j), (i == j) as i8);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            ColumnSumMatrix::new(&[vec![1, 1], vec![1, 1]]),
            Err(Error::NotAColumnSumMatrix(_))
        ));
        // rows {3} then {1,2}: one-positions do not interlace
        assert!(matches!(
            ColumnSumMatrix::new(&[vec![0, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]),
            Err(Error::NotAColumnSumMatrix(_))
        ));
        assert!(matches!(
            AlternatingSignMatrix::new(&[vec![1, 0], vec![1, 0]]),
            Err(Error::NotAnAsm(_))
        ));
        assert!(matches!(
            AlternatingSignMatrix::new(&[vec![-1, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]),
            Err(Error::NotAnAsm(_))
        ));
        assert!(matches!(
            AlternatingSignMatrix::new(&[vec![2]]),
            Err(Error::NotAnAsm(_))
        ));
        assert!(
            AlternatingSignMatrix::new(&[vec![0, 1, 0], vec![1, -1, 1], vec![0, 1, 0]]).is_ok()
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            to_asm(&fig1()).to_string(),
            "0 0 1 0\n0 1 -1 1\n1 -1 1 0\n0 1 0 0"
        );
    }
}
